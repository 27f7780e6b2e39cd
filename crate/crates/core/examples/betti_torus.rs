//! Rational Betti numbers of B_k(T) for k = 1..=7.
//!
//! `cargo run --example betti_torus`

use confspace::algebra::Surface;
use confspace::ce::betti_table;

fn main() -> confspace::error::Result<()> {
    let table = betti_table(&Surface::torus(), 7)?;
    for k in 1..=7 {
        let (_, dims) = table.dense_totals(k);
        println!("B_{k}(T): {dims:?}  (euler {})", table.euler_characteristic(k));
    }
    Ok(())
}
