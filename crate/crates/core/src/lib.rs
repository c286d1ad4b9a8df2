//! Exact operator calculus and truncated-series verification for Gauss,
//! Lauricella and basic hypergeometric transformation formulas.

pub mod catalog;
pub mod diffop;
pub mod error;
pub mod multivar;
pub mod qcore;
pub mod series;
pub mod symcore;
pub mod verifier;

pub use error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Parse `"p/q"` or an integer string. Decimals are rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::ParseRational(s.to_string());
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: num_bigint::BigInt = n.parse().map_err(|_| bad())?;
    let d: num_bigint::BigInt = d.parse().map_err(|_| bad())?;
    if num_traits::Zero::is_zero(&d) {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// `p/q` for small integers.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}
