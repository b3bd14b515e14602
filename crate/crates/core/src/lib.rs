//! Exact formal solutions of linear ODEs at infinity via the Riccati
//! transform and Newton–Puiseux over algebraic extension towers.

pub mod error;
pub mod numfield;
pub mod polygon;
pub mod puiseux;
pub mod riccati;
pub mod solver;
pub mod sympower;
pub mod upoly;

pub use error::{Error, Result};
pub use numfield::{ExtensionTower, FieldElement, Rational};
pub use puiseux::{Exponent, PuiseuxPoly, TruncatedSeries};
pub use riccati::{LinearODE, RiccatiOperator};
pub use solver::{expand_tree, SolutionTree, SolverOptions};
pub use sympower::{riccati_of_combination, symmetric_power};
pub use upoly::Poly;
