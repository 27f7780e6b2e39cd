//! The weight-p E² count for the torus: extra unary classes, the forced
//! cancellation, and the final per-degree prediction.
//!
//! `cargo run --example weight_p_ledger -- 7`

use confspace::algebra::Surface;
use confspace::ledger::e2_weight_p;

fn main() -> confspace::error::Result<()> {
    let p: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(5);
    let r = e2_weight_p(&Surface::torus(), p)?;
    for u in &r.unary {
        println!("extra class {u} at (s, t) = ({}, {})", u.s, u.t);
    }
    for a in &r.adjustments {
        println!("applied {a:?}");
    }
    for c in &r.checks {
        println!("[{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail);
    }
    println!("predicted F_{p}: {:?}", r.predicted.dense_totals(r.weight).1);
    println!("rational:      {:?}", r.betti.dense_totals(r.weight).1);
    println!("verdict: {:?}", r.verdict);
    Ok(())
}
