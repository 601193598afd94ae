//! Problems as text, and the bundled collection.

use septan::cli::{parse_problem_file, run_corpus, run_entry};
use septan::jensen::ProveOptions;

const TEXT: &str = "\
# nonnegative reals whose reciprocal shifts sum to 1
id = shifted
f = x/(4+x^2)
n = 5
constraint = custom
l = 1/(4+x)
budget = 1
domain = [0, inf)
direction = le
bound = 1
expect.k = -3
";

fn main() {
    let file = parse_problem_file(TEXT).unwrap();
    let r = run_entry(&file, &ProveOptions::default());
    println!("{}: {:?}, mismatches {:?}", r.id, r.route, r.mismatches);

    let report = run_corpus(None, &ProveOptions::default());
    for e in &report.entries {
        println!("{:<22} {:?}", e.id, e.route);
    }
    println!("{} of {} pass", report.passed, report.entries.len());
}
