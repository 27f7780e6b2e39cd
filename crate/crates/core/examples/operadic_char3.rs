//! Characteristic 3: the standard relation kills [[x,x],x], the operadic
//! variant keeps it. The weight-3 ledger uses the difference.

use confspace::algebra::Surface;
use confspace::ledger::e2_weight_3_char3;
use confspace::lie::{free_lie_basis, CharMode, Generator};
use confspace::scalar::Field;

fn main() -> confspace::error::Result<()> {
    let f3 = Field::prime(3)?;
    let x = [Generator::new("x2", 2, 1)];
    for mode in [CharMode::Standard, CharMode::OperadicChar3] {
        let l = free_lie_basis(&x, 3, f3, mode)?;
        println!("{mode:?}: weight dims {:?}", (1..=3).map(|w| l.dim(w)).collect::<Vec<_>>());
    }
    for s in [Surface::torus(), Surface::punctured(1)] {
        let r = e2_weight_3_char3(&s)?;
        println!("{s}: CE over F_3 {:?} -> predicted {:?}, rational {:?}, passed {}",
            r.ce.dense_totals(3).1, r.predicted.dense_totals(3).1, r.betti.dense_totals(3).1, r.passed());
    }
    Ok(())
}
