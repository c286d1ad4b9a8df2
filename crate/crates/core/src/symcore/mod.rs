//! Exact kernel: parameter arithmetic, polynomials, power products and the
//! equality oracle.

pub mod factor;
pub mod mpoly;
pub mod oracle;
pub mod param;
pub mod poly;
pub mod power;

pub use factor::{factor_rational, factor_small, Factorization, MAX_FACTOR_DEGREE};
pub use mpoly::MPoly;
pub use oracle::{eq_oracle, DEFAULT_TRIALS};
pub use param::{ParamExpr, ParamRat};
pub use poly::{Poly, RatPoly};
pub use power::{pp_derive, pp_mul, InstantiatedTerm, PowerProduct, PowerSum};
