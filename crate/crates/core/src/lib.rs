pub mod echelon;
pub mod error;
pub mod linear;
pub mod scalar;
pub mod lie;
pub mod algebra;
pub mod ce;
pub mod ledger;
pub mod output;
pub mod selfcheck;
pub mod cli;
