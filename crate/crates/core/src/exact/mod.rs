//! Exact arithmetic: Laurent polynomials in `q`, multivariate polynomials over
//! them, rational functions with binomial denominators, truncated series and
//! q-analog constants.

mod gaussian;
mod laurent;
mod mpoly;
mod ratfun;
mod series;

pub(crate) use gaussian::check_flag_set;
pub use gaussian::{gaussian_binomial, gaussian_multinomial};
pub use laurent::LaurentQ;
pub use mpoly::{vars, MPoly, Vars};
pub use ratfun::{rat_equal, substitute_monomials, BinomFactor, RatFun};
pub use series::{coefficient, expand, Series, Truncation};
