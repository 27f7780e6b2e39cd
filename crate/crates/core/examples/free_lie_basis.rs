//! Normal forms of a free shifted Lie algebra on mixed-degree generators.

use confspace::lie::{free_lie_basis, CharMode, Generator};
use confspace::scalar::Field;

fn main() -> confspace::error::Result<()> {
    let gens = [Generator::new("x", 2, 1), Generator::new("y", 1, 1)];
    let basis = free_lie_basis(&gens, 4, Field::rationals(), CharMode::Standard)?;
    for w in 1..=4 {
        println!("weight {w}: {:?}", basis.dims_by_degree(w));
        for i in basis.indices_of_weight(w) {
            let e = basis.element(i);
            println!("  {} (degree {})", e.word, e.degree);
        }
    }
    Ok(())
}
