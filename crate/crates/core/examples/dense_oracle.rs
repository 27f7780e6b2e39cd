//! Sparse elimination against the naive dense path on the same complexes.

use confspace::algebra::Surface;
use confspace::ce::{surface_algebra, CEComplex};
use confspace::linear::oracle::dense_homology;
use confspace::scalar::Field;

fn main() -> confspace::error::Result<()> {
    for field in [Field::rationals(), Field::prime(3)?, Field::prime(5)?] {
        for s in [Surface::torus(), Surface::punctured(1), Surface::punctured(2)] {
            let g = surface_algebra(&s, 4, field)?;
            for k in 1..=4 {
                let cx = CEComplex::build(&g, k)?;
                let same = cx.homology()? == dense_homology(cx.chain());
                println!("{field} {s} k={k}: {} monomials, agree = {same}", cx.len());
            }
        }
    }
    Ok(())
}
