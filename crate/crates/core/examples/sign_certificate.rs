//! Sturm-based sign certificates, and the witness pair when a sign changes.

use septan::algebra::rational::qi;
use septan::algebra::Polynomial;
use septan::certify::{certify_sign, Interval};

fn main() {
    let t = Polynomial::from_ints(&[-8, -5, -2]);
    let cert = certify_sign(&t, &Interval::open(qi(0), qi(4))).unwrap();
    println!("{t} on (0, 4): {:?}, {} roots", cert.verdict, cert.root_count);
    cert.check().expect("a certificate re-checks itself");

    let quintic_cofactor = Polynomial::from_ints(&[144, 189, -162, -243]);
    let cert = certify_sign(&quintic_cofactor, &Interval::open_closed(qi(0), qi(1))).unwrap();
    println!("{quintic_cofactor} on (0, 1]: {:?}", cert.verdict);
    if let Some(w) = &cert.witness {
        println!("  negative at {}, positive at {}", w.negative_at, w.positive_at);
    }
    for r in &cert.roots {
        println!("  root {r}");
    }
}
