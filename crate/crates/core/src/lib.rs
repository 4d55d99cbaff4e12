pub mod analytic;
pub mod error;
pub mod exact;
pub mod flags;
pub mod formulas;
pub mod lattice;
pub mod measures;
pub mod tdvr;
pub mod verify;

pub use error::{Error, Result};
pub use exact::{LaurentQ, MPoly, RatFun, Series, Truncation};
pub use flags::{FlagShape, ResidueMatrix};
pub use formulas::FormulaId;
pub use lattice::{Cotype, CountTable, LatticeBasis, Predicates};
pub use measures::{DivisibilitySystem, IntPoly};
pub use tdvr::{DvrElem, DvrSpec, FiniteField, TruncRing};
pub use verify::{Suite, SuiteReport};
