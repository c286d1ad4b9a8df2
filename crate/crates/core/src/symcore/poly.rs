//! Univariate polynomials in `x`: [`RatPoly`] over the rationals and [`Poly`]
//! over parameter rational functions.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::param::ParamRat;
use crate::{Error, Rational, Result};

/// Dense polynomial over the rationals, coefficients lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        RatPoly::new(cs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        RatPoly::default()
    }

    pub fn one() -> Self {
        RatPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        RatPoly::new(vec![c])
    }

    pub fn x() -> Self {
        RatPoly::from_ints(&[0, 1])
    }

    pub fn monomial(k: usize, c: Rational) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = c;
        RatPoly::new(v)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, o: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        RatPoly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &RatPoly) -> RatPoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn scale(&self, r: &Rational) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| c * r).collect())
    }

    pub fn mul(&self, o: &RatPoly) -> RatPoly {
        if self.is_zero() || o.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }

    pub fn pow(&self, n: usize) -> RatPoly {
        let mut out = RatPoly::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    pub fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    /// Quotient and remainder; panics on division by the zero polynomial.
    pub fn divrem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lc = d.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (RatPoly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let q = &rem[k + dd] / &lc;
            if !q.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] -= &q * dc;
                }
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        (RatPoly::new(quot), RatPoly::new(rem))
    }

    pub fn div_exact(&self, d: &RatPoly) -> Option<RatPoly> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    pub fn monic(&self) -> RatPoly {
        if self.is_zero() {
            return RatPoly::zero();
        }
        self.scale(&self.leading().recip())
    }

    pub fn gcd(&self, o: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `Σ p_k num^k den^(d-k)`: the numerator of `p(num/den)` over `den^d`.
    pub fn homogeneous_compose(&self, num: &RatPoly, den: &RatPoly) -> RatPoly {
        let d = match self.degree() {
            None => return RatPoly::zero(),
            Some(d) => d,
        };
        let mut acc = RatPoly::zero();
        let mut num_pow = RatPoly::one();
        for k in 0..=d {
            let term = num_pow.mul(&den.pow(d - k)).scale(&self.coeff(k));
            acc = acc.add(&term);
            num_pow = num_pow.mul(num);
        }
        acc
    }

    /// Split as `unit * primitive` where the primitive part has coprime integer
    /// coefficients and a positive lowest-degree nonzero coefficient.
    pub fn primitive(&self) -> (Rational, RatPoly) {
        if self.is_zero() {
            return (Rational::zero(), RatPoly::zero());
        }
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(den.clone())).to_integer())
            .collect();
        let mut g = BigInt::zero();
        for n in &ints {
            g = g.gcd(n);
        }
        let low_neg = ints.iter().find(|n| !n.is_zero()).is_some_and(|n| n.is_negative());
        if low_neg {
            g = -g;
        }
        let prim = RatPoly::new(ints.iter().map(|n| Rational::from_integer(n / &g)).collect());
        (Rational::new(g, den), prim)
    }

    pub fn is_primitive_normalized(&self) -> bool {
        let (u, _) = self.primitive();
        u.is_one()
    }

    pub fn to_poly(&self) -> Poly {
        Poly::new(self.coeffs.iter().cloned().map(ParamRat::from_rational).collect())
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if c.is_negative() {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            let abs = c.abs();
            match k {
                0 => write!(f, "{}", abs)?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{}", abs)?;
                    }
                    write!(f, "x")?;
                    if k > 1 {
                        write!(f, "^{}", k)?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatPoly({})", self)
    }
}

/// Polynomial in `x` whose coefficients are parameter rational functions.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<ParamRat>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<ParamRat>) -> Self {
        while coeffs.last().is_some_and(ParamRat::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: ParamRat) -> Self {
        Poly::new(vec![c])
    }

    pub fn coeffs(&self) -> &[ParamRat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> ParamRat {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k).add(&o.coeff(k))).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![ParamRat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::new(out)
    }

    pub fn mul_rat(&self, o: &RatPoly) -> Poly {
        self.mul(&o.to_poly())
    }

    pub fn scale(&self, c: &ParamRat) -> Poly {
        Poly::new(self.coeffs.iter().map(|k| k.mul(c)).collect())
    }

    /// The same polynomial with rational coefficients, if it has no parameters.
    pub fn to_rational(&self) -> Result<RatPoly> {
        self.coeffs
            .iter()
            .map(|c| c.as_rational().ok_or(Error::ParameterInBase))
            .collect::<Result<Vec<_>>>()
            .map(RatPoly::new)
    }

    /// Exact division by a rational polynomial; `None` if it does not divide.
    pub fn div_exact_rat(&self, d: &RatPoly) -> Option<Poly> {
        let dd = d.degree()?;
        let lc = ParamRat::from_rational(d.leading());
        let lc_inv = lc.recip().ok()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return if self.is_zero() { Some(Poly::zero()) } else { None };
        }
        let mut quot = vec![ParamRat::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let q = rem[k + dd].mul(&lc_inv);
            if !q.is_zero() {
                for (j, dc) in d.coeffs().iter().enumerate() {
                    rem[k + j] = rem[k + j].sub(&q.scale(dc));
                }
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        rem.iter().all(ParamRat::is_zero).then(|| Poly::new(quot))
    }

    /// The largest rational polynomial dividing `self`, normalized primitive.
    ///
    /// Clears parameter denominators and takes the gcd over `Q[x]` of the
    /// coefficient polynomials of each parameter monomial.
    pub fn rational_content(&self) -> RatPoly {
        if self.is_zero() {
            return RatPoly::zero();
        }
        let mut lcm = super::mpoly::MPoly::one();
        for c in &self.coeffs {
            if c.is_zero() || c.denom().is_one() {
                continue;
            }
            let g = lcm.gcd(c.denom());
            lcm = lcm.mul(&c.denom().div_exact(&g).expect("gcd divides"));
        }
        let mut by_monomial: std::collections::BTreeMap<[u16; 3], Vec<Rational>> = Default::default();
        let n = self.coeffs.len();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let scaled = c.numer().mul(&lcm.div_exact(c.denom()).expect("lcm is a multiple"));
            for (e, v) in scaled.terms() {
                let entry = by_monomial.entry(*e).or_insert_with(|| vec![Rational::zero(); n]);
                entry[k] += v;
            }
        }
        let mut g = RatPoly::zero();
        for (_, cs) in by_monomial {
            g = g.gcd(&RatPoly::new(cs));
            if g.is_constant() && !g.is_zero() {
                return RatPoly::one();
            }
        }
        g.primitive().1
    }

    pub fn eval_rational(&self, point: &[Rational; 3], x: &Rational) -> Option<Rational> {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.eval(point)?;
        }
        Some(acc)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({})", c)?,
                1 => write!(f, "({})x", c)?,
                _ => write!(f, "({})x^{}", c, k)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::ParamExpr;

    #[test]
    fn primitive_normalizes_sign_and_content() {
        let p = RatPoly::from_ints(&[-2, 4]);
        let (u, q) = p.primitive();
        assert_eq!(u, Rational::from_integer((-2).into()));
        assert_eq!(q, RatPoly::from_ints(&[1, -2]));
    }

    #[test]
    fn homogeneous_compose_matches_direct_composition() {
        // p(x) = 1 - x at z = (1-x)/(1+x): numerator (1+x) - (1-x) = 2x
        let p = RatPoly::from_ints(&[1, -1]);
        let num = RatPoly::from_ints(&[1, -1]);
        let den = RatPoly::from_ints(&[1, 1]);
        assert_eq!(p.homogeneous_compose(&num, &den), RatPoly::from_ints(&[0, 2]));
    }

    #[test]
    fn rational_content_of_parametric_polynomial() {
        // (a + b x)(1 - x^2)
        let a = ParamExpr::a().to_param_rat();
        let b = ParamExpr::b().to_param_rat();
        let p = Poly::new(vec![a, b]).mul_rat(&RatPoly::from_ints(&[1, 0, -1]));
        assert_eq!(p.rational_content(), RatPoly::from_ints(&[1, 0, -1]));
    }

    #[test]
    fn gcd_and_division() {
        let p = RatPoly::from_ints(&[1, 0, -1]);
        let q = RatPoly::from_ints(&[1, -2, 1]);
        assert_eq!(p.gcd(&q), RatPoly::from_ints(&[-1, 1]));
        assert_eq!(p.div_exact(&RatPoly::from_ints(&[1, 1])).unwrap(), RatPoly::from_ints(&[1, -1]));
    }
}
