//! Certificates are plain JSON and can be re-checked from that alone.

use septan::cli::corpus;
use septan::jensen::{prove, verify_json, ProofCertificate};

fn main() {
    let entry = corpus().into_iter().find(|p| p.spec.id == "quintic_split").unwrap();
    let json = prove(&entry.spec).to_json();
    let v = verify_json(&json).unwrap();
    println!("{} checks passed", v.checks.len());
    for c in &v.checks {
        println!("  {c}");
    }

    let mut forged = ProofCertificate::from_json(&json).unwrap();
    if let Some(s) = forged.split.as_mut() {
        s.lhs = s.lhs.clone() * septan::algebra::rational::q(11, 10);
    }
    match verify_json(&forged.to_json()) {
        Ok(_) => println!("forgery accepted"),
        Err(e) => println!("forged certificate: {e}"),
    }
}
