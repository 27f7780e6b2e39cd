//! Mod-p against rational CE homology below weight p, surface by surface.
//!
//! `cargo run --example compare_mod_p -- 7`

use confspace::algebra::Surface;
use confspace::ce::compare;

fn main() -> confspace::error::Result<()> {
    let p: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(5);
    for s in [Surface::torus(), Surface::punctured(1), Surface::punctured(2)] {
        for k in 1..p as u32 {
            let c = compare(&s, p, k)?;
            let mark = if c.equal() { "=" } else { "≠" };
            println!("{s:>13} k={k}  F_{p} {:?} {mark} Q {:?}", c.mod_p.dense_totals(k).1, c.rational.dense_totals(k).1);
        }
    }
    Ok(())
}
