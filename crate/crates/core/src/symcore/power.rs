//! Power products `κ · Π cᵢ^{sᵢ} · Π pⱼ(x)^{eⱼ}` and finite sums of them.
//!
//! Invariants kept by every constructor:
//! - polynomial bases are irreducible (when of degree ≤ 8), primitive, with a
//!   positive lowest-degree coefficient, and carry nonzero exponents;
//! - constant bases are `-1` or primes, and their exponents have a constant
//!   part in `[0, 1)` with the integer part folded into `κ`.
//!
//! [`PowerSum`] keeps a canonical form: terms are grouped into classes whose
//! exponent vectors differ by integers, each class is written as a common
//! power product times a polynomial with no rational polynomial factor, and
//! that polynomial is expanded into monomials. Equality is then structural.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::factor::{factor_rational, MAX_FACTOR_DEGREE};
use super::param::{ParamExpr, ParamRat};
use super::poly::{Poly, RatPoly};
use crate::{Rational, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PowerProduct {
    coeff: ParamRat,
    consts: BTreeMap<BigInt, ParamExpr>,
    factors: BTreeMap<RatPoly, ParamExpr>,
}

impl Default for PowerProduct {
    fn default() -> Self {
        PowerProduct::one()
    }
}

fn small_prime_factors(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2u32);
    let limit = BigInt::from(1_000_000u64);
    while &p * &p <= n && p <= limit {
        let mut k = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            k += 1;
        }
        if k > 0 {
            out.push((p.clone(), k));
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

fn int_pow(base: &BigInt, k: &BigInt) -> Rational {
    let kk = k.to_i64().expect("exponent fits i64");
    let b = Rational::from_integer(base.clone());
    num_traits::pow::Pow::pow(&b, kk as i32)
}

impl PowerProduct {
    pub fn one() -> Self {
        PowerProduct::constant(ParamRat::one())
    }

    pub fn constant(coeff: ParamRat) -> Self {
        PowerProduct {
            coeff,
            consts: BTreeMap::new(),
            factors: BTreeMap::new(),
        }
    }

    pub fn rational(r: Rational) -> Self {
        PowerProduct::constant(ParamRat::from_rational(r))
    }

    /// `x^e`.
    pub fn x_pow(e: ParamExpr) -> Self {
        let mut p = PowerProduct::one();
        p.push_base(RatPoly::x(), e);
        p
    }

    /// `base^e` with `base` factored into irreducibles.
    pub fn base_pow(base: &RatPoly, e: ParamExpr) -> Result<Self> {
        let mut p = PowerProduct::one();
        p.push_poly(base, &e)?;
        Ok(p)
    }

    /// `coeff · Π base^e`.
    pub fn from_factors(coeff: ParamRat, factors: &[(RatPoly, ParamExpr)]) -> Result<Self> {
        let mut p = PowerProduct::constant(coeff);
        for (b, e) in factors {
            p.push_poly(b, e)?;
        }
        Ok(p)
    }

    /// `r^e` for a nonzero rational constant `r`.
    pub fn const_pow(r: &Rational, e: ParamExpr) -> Self {
        let mut p = PowerProduct::one();
        p.push_const(r, &e);
        p
    }

    pub fn coeff(&self) -> &ParamRat {
        &self.coeff
    }

    pub fn consts(&self) -> &BTreeMap<BigInt, ParamExpr> {
        &self.consts
    }

    pub fn factors(&self) -> &BTreeMap<RatPoly, ParamExpr> {
        &self.factors
    }

    pub fn exponent_of(&self, base: &RatPoly) -> ParamExpr {
        self.factors.get(base).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// True when no polynomial base is present.
    pub fn is_constant(&self) -> bool {
        self.factors.is_empty()
    }

    /// The coefficient, when the product has neither bases nor constant powers.
    pub fn as_param_rat(&self) -> Option<ParamRat> {
        (self.factors.is_empty() && self.consts.is_empty()).then(|| self.coeff.clone())
    }

    /// The part without polynomial bases.
    pub fn constant_part(&self) -> PowerProduct {
        PowerProduct {
            coeff: self.coeff.clone(),
            consts: self.consts.clone(),
            factors: BTreeMap::new(),
        }
    }

    /// The same product with coefficient one.
    pub fn monic(&self) -> PowerProduct {
        PowerProduct {
            coeff: ParamRat::one(),
            consts: self.consts.clone(),
            factors: self.factors.clone(),
        }
    }

    pub fn with_coeff(&self, coeff: ParamRat) -> PowerProduct {
        PowerProduct {
            coeff,
            consts: self.consts.clone(),
            factors: self.factors.clone(),
        }
    }

    fn push_base(&mut self, base: RatPoly, e: ParamExpr) {
        let entry = self.factors.entry(base).or_default();
        *entry = entry.clone() + e;
        self.factors.retain(|_, e| !e.is_zero());
    }

    fn push_poly(&mut self, poly: &RatPoly, e: &ParamExpr) -> Result<()> {
        if e.is_zero() {
            return Ok(());
        }
        match poly.degree() {
            None => return Err(crate::Error::DivisionByZero),
            Some(0) => {
                self.push_const(&poly.coeff(0), e);
                return Ok(());
            }
            Some(d) if d > MAX_FACTOR_DEGREE => {
                let (unit, prim) = poly.primitive();
                self.push_const(&unit, e);
                self.push_base(prim, e.clone());
                return Ok(());
            }
            _ => {}
        }
        let f = factor_rational(poly)?;
        self.push_const(&f.unit, e);
        for (b, m) in f.factors {
            self.push_base(b, e.scale_int(m as i64));
        }
        Ok(())
    }

    fn push_const(&mut self, r: &Rational, e: &ParamExpr) {
        assert!(!r.is_zero(), "zero constant base");
        if e.is_zero() || r.is_one() {
            return;
        }
        if r.is_negative() {
            self.add_const(BigInt::from(-1), e.clone());
        }
        for (p, k) in small_prime_factors(r.numer()) {
            self.add_const(p, e.scale_int(k as i64));
        }
        for (p, k) in small_prime_factors(r.denom()) {
            self.add_const(p, e.scale_int(-(k as i64)));
        }
    }

    fn add_const(&mut self, base: BigInt, e: ParamExpr) {
        let total = self.consts.remove(&base).unwrap_or_default() + e;
        let (k, rest) = total.split_integer();
        if !k.is_zero() {
            let factor = if base == BigInt::from(-1) {
                if k.is_odd_int() {
                    -Rational::one()
                } else {
                    Rational::one()
                }
            } else {
                int_pow(&base, &k)
            };
            self.coeff = self.coeff.scale(&factor);
        }
        if !rest.is_zero() {
            self.consts.insert(base, rest);
        }
    }

    pub fn mul(&self, o: &PowerProduct) -> PowerProduct {
        let mut out = PowerProduct::constant(self.coeff.mul(&o.coeff));
        out.consts = self.consts.clone();
        out.factors = self.factors.clone();
        for (b, e) in &o.consts {
            out.add_const(b.clone(), e.clone());
        }
        for (b, e) in &o.factors {
            out.push_base(b.clone(), e.clone());
        }
        out
    }

    pub fn scale(&self, c: &ParamRat) -> PowerProduct {
        self.with_coeff(self.coeff.mul(c))
    }

    pub fn inv(&self) -> Result<PowerProduct> {
        let mut out = PowerProduct::constant(self.coeff.recip()?);
        for (b, e) in &self.consts {
            out.add_const(b.clone(), -e.clone());
        }
        for (b, e) in &self.factors {
            out.push_base(b.clone(), -e.clone());
        }
        Ok(out)
    }

    pub fn div(&self, o: &PowerProduct) -> Result<PowerProduct> {
        Ok(self.mul(&o.inv()?))
    }

    /// Raise to an integer power.
    pub fn powi(&self, n: i64) -> Result<PowerProduct> {
        let mut out = PowerProduct::constant(self.coeff.pow(n)?);
        for (b, e) in &self.consts {
            out.add_const(b.clone(), e.scale_int(n));
        }
        for (b, e) in &self.factors {
            out.push_base(b.clone(), e.scale_int(n));
        }
        Ok(out)
    }

    /// Substitute the symbols `a, b, c` by affine expressions (exponents and
    /// coefficient).
    pub fn substitute_params(&self, images: &[ParamExpr; 3]) -> PowerProduct {
        let coeff = substitute_rat(&self.coeff, images);
        let mut out = PowerProduct::constant(coeff);
        for (b, e) in &self.consts {
            out.add_const(b.clone(), e.substitute(images));
        }
        for (b, e) in &self.factors {
            out.push_base(b.clone(), e.substitute(images));
        }
        out
    }

    /// Compose with the rational map `x ↦ num/den`.
    pub fn compose(&self, num: &RatPoly, den: &RatPoly) -> Result<PowerProduct> {
        let mut out = self.constant_part();
        for (base, e) in &self.factors {
            let d = base.degree().unwrap_or(0) as i64;
            let top = base.homogeneous_compose(num, den);
            if top.is_zero() {
                return Err(crate::Error::SingularPoint(format!(
                    "base {} vanishes identically after substitution",
                    base
                )));
            }
            out.push_poly(&top, e)?;
            out.push_poly(den, &e.scale_int(-d))?;
        }
        Ok(out)
    }

    /// Instantiate parameters: coefficient value, constant powers and base
    /// exponents as rationals. `None` if the coefficient has a pole there.
    pub fn instantiate(&self, point: &[Rational; 3]) -> Option<InstantiatedTerm> {
        Some(InstantiatedTerm {
            coeff: self.coeff.eval(point)?,
            consts: self.consts.iter().map(|(b, e)| (b.clone(), e.eval(point))).collect(),
            factors: self.factors.iter().map(|(b, e)| (b.clone(), e.eval(point))).collect(),
        })
    }
}

trait OddInt {
    fn is_odd_int(&self) -> bool;
}

impl OddInt for BigInt {
    fn is_odd_int(&self) -> bool {
        num_integer::Integer::is_odd(self)
    }
}

fn substitute_rat(r: &ParamRat, images: &[ParamExpr; 3]) -> ParamRat {
    let imgs: Vec<ParamRat> = images.iter().map(ParamExpr::to_param_rat).collect();
    let sub = |p: &super::mpoly::MPoly| {
        let mut acc = ParamRat::zero();
        for (e, c) in p.terms() {
            let mut t = ParamRat::from_rational(c.clone());
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t = t.mul(&imgs[i]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    };
    sub(r.numer()).div(&sub(r.denom())).unwrap_or_else(|_| ParamRat::zero())
}

/// A power product at concrete rational parameters.
#[derive(Clone, Debug)]
pub struct InstantiatedTerm {
    pub coeff: Rational,
    pub consts: BTreeMap<BigInt, Rational>,
    pub factors: BTreeMap<RatPoly, Rational>,
}

fn fmt_exp(e: &ParamExpr) -> String {
    let s = e.to_string();
    if s.chars().all(|c| c.is_ascii_alphanumeric()) {
        s
    } else {
        format!("({})", s)
    }
}

impl fmt::Display for PowerProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.coeff.is_one() || (self.consts.is_empty() && self.factors.is_empty()) {
            let c = self.coeff.to_string();
            if c.contains(['+', '/']) || c[1..].contains('-') {
                parts.push(format!("({})", c));
            } else {
                parts.push(c);
            }
        }
        for (b, e) in &self.consts {
            let base = if b.is_negative() { format!("({})", b) } else { b.to_string() };
            parts.push(format!("{}^{}", base, fmt_exp(e)));
        }
        for (b, e) in &self.factors {
            let base = if *b == RatPoly::x() { "x".to_string() } else { format!("({})", b) };
            if e.as_integer().is_some_and(|k| k.is_one()) {
                parts.push(base);
            } else {
                parts.push(format!("{}^{}", base, fmt_exp(e)));
            }
        }
        write!(f, "{}", parts.join("*"))
    }
}

impl fmt::Debug for PowerProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PowerProduct({})", self)
    }
}

/// A finite sum of power products in canonical form. Zero is the empty sum.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PowerSum {
    terms: Vec<PowerProduct>,
}

type ClassKey = (BTreeMap<BigInt, ParamExpr>, BTreeMap<RatPoly, ParamExpr>);

fn class_key(t: &PowerProduct) -> ClassKey {
    let factors = t
        .factors
        .iter()
        .filter(|(_, e)| e.as_integer().is_none())
        .map(|(b, e)| (b.clone(), e.split_integer().1))
        .collect();
    (t.consts.clone(), factors)
}

impl PowerSum {
    pub fn zero() -> Self {
        PowerSum::default()
    }

    pub fn one() -> Self {
        PowerSum::from(PowerProduct::one())
    }

    pub fn from_terms(terms: Vec<PowerProduct>) -> Self {
        PowerSum { terms: normalize(terms) }
    }

    /// `pp · poly(x)` for a polynomial with parameter coefficients.
    pub fn from_poly(pp: &PowerProduct, poly: &Poly) -> Self {
        let mut terms = Vec::new();
        for (k, c) in poly.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(pp.mul(&PowerProduct::x_pow(ParamExpr::int(k as i64))).scale(c));
        }
        PowerSum::from_terms(terms)
    }

    pub fn terms(&self) -> &[PowerProduct] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn single_term(&self) -> Option<&PowerProduct> {
        match self.terms.as_slice() {
            [t] => Some(t),
            _ => None,
        }
    }

    pub fn add(&self, o: &PowerSum) -> PowerSum {
        let mut t = self.terms.clone();
        t.extend(o.terms.iter().cloned());
        PowerSum::from_terms(t)
    }

    pub fn neg(&self) -> PowerSum {
        PowerSum {
            terms: self.terms.iter().map(|t| t.scale(&ParamRat::from_int(-1))).collect(),
        }
    }

    pub fn sub(&self, o: &PowerSum) -> PowerSum {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &PowerSum) -> PowerSum {
        let mut t = Vec::with_capacity(self.terms.len() * o.terms.len());
        for x in &self.terms {
            for y in &o.terms {
                t.push(x.mul(y));
            }
        }
        PowerSum::from_terms(t)
    }

    pub fn mul_pp(&self, p: &PowerProduct) -> PowerSum {
        PowerSum::from_terms(self.terms.iter().map(|t| t.mul(p)).collect())
    }

    pub fn scale(&self, c: &ParamRat) -> PowerSum {
        PowerSum::from_terms(self.terms.iter().map(|t| t.scale(c)).collect())
    }

    pub fn derive(&self) -> PowerSum {
        let mut out = Vec::new();
        for t in &self.terms {
            for (base, e) in &t.factors {
                let mut rest = t.clone();
                rest.push_base(base.clone(), ParamExpr::int(-1));
                let rest = rest.scale(&e.to_param_rat());
                for (k, d) in base.derivative().coeffs().iter().enumerate() {
                    if d.is_zero() {
                        continue;
                    }
                    let mut term = rest.scale(&ParamRat::from_rational(d.clone()));
                    term.push_base(RatPoly::x(), ParamExpr::int(k as i64));
                    out.push(term);
                }
            }
        }
        PowerSum::from_terms(out)
    }

    pub fn compose(&self, num: &RatPoly, den: &RatPoly) -> Result<PowerSum> {
        let terms = self
            .terms
            .iter()
            .map(|t| t.compose(num, den))
            .collect::<Result<Vec<_>>>()?;
        Ok(PowerSum::from_terms(terms))
    }

    pub fn substitute_params(&self, images: &[ParamExpr; 3]) -> PowerSum {
        PowerSum::from_terms(self.terms.iter().map(|t| t.substitute_params(images)).collect())
    }
}

impl From<PowerProduct> for PowerSum {
    fn from(p: PowerProduct) -> Self {
        PowerSum::from_terms(vec![p])
    }
}

fn normalize(terms: Vec<PowerProduct>) -> Vec<PowerProduct> {
    let mut classes: BTreeMap<ClassKey, Vec<PowerProduct>> = BTreeMap::new();
    for t in terms {
        if t.coeff.is_zero() {
            continue;
        }
        classes.entry(class_key(&t)).or_default().push(t);
    }
    let mut out = Vec::new();
    for ((consts, _), members) in classes {
        if members.len() == 1 {
            out.push(members.into_iter().next().unwrap());
            continue;
        }
        // Common exponent per base: the minimum, bases absent from a term count as 0.
        let mut mins: BTreeMap<RatPoly, ParamExpr> = BTreeMap::new();
        for t in &members {
            for b in t.factors.keys() {
                mins.entry(b.clone()).or_insert_with(|| t.exponent_of(b));
            }
        }
        for (b, m) in mins.iter_mut() {
            for t in &members {
                let e = t.exponent_of(b);
                if e.integer_difference(m).is_some_and(|k| k.is_negative()) {
                    *m = e;
                }
            }
        }
        let mut poly = Poly::zero();
        for t in &members {
            let mut p = RatPoly::one();
            for (b, m) in &mins {
                let k = t
                    .exponent_of(b)
                    .integer_difference(m)
                    .and_then(|k| k.to_usize())
                    .expect("class members differ by nonnegative integers");
                p = p.mul(&b.pow(k));
            }
            poly = poly.add(&Poly::constant(t.coeff.clone()).mul_rat(&p));
        }
        if poly.is_zero() {
            continue;
        }
        let content = poly.rational_content();
        let reduced = poly.div_exact_rat(&content).expect("content divides");
        let mut base = PowerProduct {
            coeff: ParamRat::one(),
            consts: consts.clone(),
            factors: BTreeMap::new(),
        };
        for (b, m) in mins {
            base.push_base(b, m);
        }
        base.push_poly(&content, &ParamExpr::int(1))
            .expect("content factorization is infallible above the degree limit");
        for (k, c) in reduced.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut t = base.scale(c);
            t.push_base(RatPoly::x(), ParamExpr::int(k as i64));
            out.push(t);
        }
    }
    out.sort_by(|a, b| (&a.consts, &a.factors).cmp(&(&b.consts, &b.factors)));
    out
}

impl fmt::Display for PowerSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for PowerSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PowerSum({})", self)
    }
}

/// Exact product of two power sums.
pub fn pp_mul(u: &PowerSum, v: &PowerSum) -> PowerSum {
    u.mul(v)
}

/// Term-wise derivative via logarithmic derivatives of each base.
pub fn pp_derive(u: &PowerSum) -> PowerSum {
    u.derive()
}
