//! Feed a hand-written coefficient algebra instead of a surface.
//! Here: the cohomology of S², which gives B_k(S²).

use confspace::algebra::{AlgebraPresentation, Surface};
use confspace::ce::betti_table;

const SPHERE: &str = r#"{
  "basis": [{"name": "d", "degree": 0}, {"name": "c", "degree": 2}],
  "products": [],
  "unit": "d"
}"#;

fn main() -> confspace::error::Result<()> {
    let presentation = AlgebraPresentation::from_json(SPHERE)?;
    let sphere = Surface::Custom { name: "sphere".into(), presentation };
    let t = betti_table(&sphere, 5)?;
    for k in 1..=5 {
        println!("B_{k}(S^2): {:?}", t.dense_totals(k).1);
    }
    Ok(())
}
