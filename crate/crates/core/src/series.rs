//! Exact truncated power series `x^μ (c₀ + c₁x + … + c_N x^N) + O(x^{μ+N+1})`.

use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::symcore::{PowerSum, RatPoly};
use crate::{Error, Rational, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    offset: Rational,
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    /// Coefficients beyond `order` are dropped, missing ones are zero.
    pub fn new(offset: Rational, mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::zero());
        TruncatedSeries { offset, coeffs }
    }

    pub fn from_ints(cs: &[i64], order: usize) -> Self {
        TruncatedSeries::new(
            Rational::zero(),
            cs.iter().map(|&c| Rational::from_integer(c.into())).collect(),
            order,
        )
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        TruncatedSeries::new(Rational::zero(), vec![c], order)
    }

    pub fn one(order: usize) -> Self {
        TruncatedSeries::constant(Rational::one(), order)
    }

    /// A polynomial viewed as a series.
    pub fn from_poly(p: &RatPoly, order: usize) -> Self {
        TruncatedSeries::new(Rational::zero(), p.coeffs().to_vec(), order)
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &Rational {
        &self.coeffs[n]
    }

    /// Exponent of the last known coefficient.
    pub fn precision(&self) -> Rational {
        &self.offset + Rational::from_integer(self.order().into())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        TruncatedSeries::new(self.offset.clone(), self.coeffs.clone(), order.min(self.order()))
    }

    /// Move leading zero coefficients into the offset. Absolute precision is kept.
    pub fn normalize(&self) -> Self {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if k == 0 || k == self.coeffs.len() {
            return self.clone();
        }
        TruncatedSeries {
            offset: &self.offset + Rational::from_integer(k.into()),
            coeffs: self.coeffs[k..].to_vec(),
        }
    }

    /// Rewrite with a smaller offset differing by a nonnegative integer.
    pub fn with_offset(&self, offset: &Rational) -> Result<Self> {
        let d = &self.offset - offset;
        if !d.is_integer() || d.is_negative() {
            return Err(Error::OffsetMismatch(self.offset.to_string(), offset.to_string()));
        }
        let k = d.to_integer().to_usize().expect("small shift");
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Ok(TruncatedSeries {
            offset: offset.clone(),
            coeffs,
        })
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: &Rational) -> Self {
        TruncatedSeries {
            offset: &self.offset + k,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        TruncatedSeries {
            offset: self.offset.clone(),
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn add(&self, o: &TruncatedSeries) -> Result<Self> {
        let d = &self.offset - &o.offset;
        if !d.is_integer() {
            return Err(Error::OffsetMismatch(self.offset.to_string(), o.offset.to_string()));
        }
        let offset = self.offset.clone().min(o.offset.clone());
        let top = self.precision().min(o.precision());
        let order = (&top - &offset).to_integer().to_i64().expect("small order");
        if order < 0 {
            return Ok(TruncatedSeries::new(offset, vec![], 0));
        }
        let a = self.with_offset(&offset)?;
        let b = o.with_offset(&offset)?;
        let coeffs = (0..=order as usize)
            .map(|n| a.coeffs.get(n).cloned().unwrap_or_default() + b.coeffs.get(n).cloned().unwrap_or_default())
            .collect();
        Ok(TruncatedSeries { offset, coeffs })
    }

    pub fn sub(&self, o: &TruncatedSeries) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &TruncatedSeries) -> Self {
        let n = self.order().min(o.order());
        let mut coeffs = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n + 1 - i) {
                coeffs[i + j] += a * b;
            }
        }
        TruncatedSeries {
            offset: &self.offset + &o.offset,
            coeffs,
        }
    }

    pub fn inv(&self) -> Result<Self> {
        let s = self.normalize();
        let c0 = s.coeffs[0].clone();
        if c0.is_zero() {
            return Err(Error::NonInvertible);
        }
        let n = s.order();
        let inv0 = c0.recip();
        let mut out = vec![Rational::zero(); n + 1];
        out[0] = inv0.clone();
        for k in 1..=n {
            let mut acc = Rational::zero();
            for j in 1..=k {
                acc += &s.coeffs[j] * &out[k - j];
            }
            out[k] = -acc * &inv0;
        }
        Ok(TruncatedSeries {
            offset: -s.offset,
            coeffs: out,
        })
    }

    pub fn div(&self, o: &TruncatedSeries) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    /// Term-wise derivative; the offset drops by one and the order is kept.
    pub fn derive(&self) -> Self {
        TruncatedSeries {
            offset: &self.offset - Rational::one(),
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| c * (&self.offset + Rational::from_integer(n.into())))
                .collect(),
        }
    }

    /// `self(inner(x))`. `self` needs an integer offset ≥ 0 and `inner` must
    /// vanish at the origin to integer order ≥ 1.
    pub fn compose(&self, inner: &TruncatedSeries) -> Result<Self> {
        let outer = self.normalize();
        if !outer.offset.is_integer() || outer.offset.is_negative() {
            return Err(Error::BadParameter(format!("outer offset {} in composition", outer.offset)));
        }
        let inner = inner.normalize();
        if inner.is_zero() {
            let mut c = vec![Rational::zero(); 1];
            if outer.offset.is_zero() {
                c[0] = outer.coeffs[0].clone();
            }
            return Ok(TruncatedSeries::new(Rational::zero(), c, inner.precision().to_integer().to_usize().unwrap_or(0)));
        }
        if !inner.offset.is_integer() || inner.offset < Rational::one() {
            return Err(Error::BadParameter(format!("inner offset {} in composition", inner.offset)));
        }
        let outer = outer.with_offset(&Rational::zero())?;
        let k = inner.offset.to_integer().to_usize().unwrap();
        let order = (k * (outer.order() + 1) - 1).min(k + inner.order());
        let inner0 = inner.with_offset(&Rational::zero())?;
        let inner0 = TruncatedSeries::new(Rational::zero(), inner0.coeffs, order);
        // Horner
        let mut acc = TruncatedSeries::constant(Rational::zero(), order);
        for c in outer.coeffs.iter().rev() {
            acc = acc.mul(&inner0);
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// Exact value when the offset is a nonnegative integer.
    pub fn eval_exact(&self, x: &Rational) -> Option<Rational> {
        if !self.offset.is_integer() || self.offset.is_negative() {
            return None;
        }
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        let k = self.offset.to_integer().to_i32()?;
        Some(acc * num_traits::pow::Pow::pow(x, k))
    }

    /// Float evaluation with a flag set when `|x| ≥ 1`.
    pub fn eval_float(&self, x: f64) -> FloatValue {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64().unwrap_or(f64::NAN);
        }
        let mu = self.offset.to_f64().unwrap_or(f64::NAN);
        let value = if self.offset.is_zero() { acc } else { acc * x.powf(mu) };
        FloatValue {
            value,
            divergence_warning: x.abs() >= 1.0,
        }
    }

    /// Index (relative to the smaller offset) of the first coefficient where
    /// the two series differ within their common precision.
    pub fn first_mismatch(&self, o: &TruncatedSeries) -> Result<Option<usize>> {
        let d = self.sub(o)?;
        Ok(d.coeffs.iter().position(|c| !c.is_zero()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FloatValue {
    pub value: f64,
    pub divergence_warning: bool,
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.offset.is_zero() {
            write!(f, "x^({})*(", self.offset)?;
        }
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "{}*x", c)?,
                _ => write!(f, "{}*x^{}", c, n)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(x^{})", self.order() + 1)?;
        if !self.offset.is_zero() {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedSeries({})", self)
    }
}

/// Rising factorial `(a)_n`.
pub fn pochhammer(a: &Rational, n: usize) -> Rational {
    let mut acc = Rational::one();
    for i in 0..n {
        acc *= a + Rational::from_integer(i.into());
    }
    acc
}

fn is_nonpositive_integer(r: &Rational) -> bool {
    r.is_integer() && !r.is_positive()
}

/// `₂F₁(a, b; c; x)` to order `n`.
pub fn f21_series(a: &Rational, b: &Rational, c: &Rational, n: usize) -> Result<TruncatedSeries> {
    if is_nonpositive_integer(c) {
        return Err(Error::BadParameter(format!("lower parameter c = {} is a nonpositive integer", c)));
    }
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut t = Rational::one();
    coeffs.push(t.clone());
    for k in 0..n {
        let kk = Rational::from_integer(k.into());
        t = t * (a + &kk) * (b + &kk) / ((c + &kk) * (&kk + Rational::one()));
        coeffs.push(t.clone());
    }
    Ok(TruncatedSeries::new(Rational::zero(), coeffs, n))
}

/// `P(x)^e` for `P(0) = 1`, via `P y' = e P' y`.
pub fn binomial_series(p: &RatPoly, e: &Rational, n: usize) -> TruncatedSeries {
    debug_assert!(p.coeff(0).is_one());
    let pc = p.coeffs();
    let mut y = vec![Rational::zero(); n + 1];
    y[0] = Rational::one();
    for m in 1..=n {
        let mut acc = Rational::zero();
        for (k, pk) in pc.iter().enumerate().skip(1).take(m) {
            if pk.is_zero() {
                continue;
            }
            let kk = Rational::from_integer(k.into());
            let rest = Rational::from_integer((m - k).into());
            acc += pk * &y[m - k] * (e * &kk - rest);
        }
        y[m] = acc / Rational::from_integer(m.into());
    }
    TruncatedSeries::new(Rational::zero(), y, n)
}

/// Integer `k` with `k^d = r` exactly, for `d ≥ 1`.
fn exact_root(r: &num_bigint::BigInt, d: u32) -> Option<num_bigint::BigInt> {
    if r.is_negative() {
        return None;
    }
    let k = r.nth_root(d);
    (num_traits::pow::Pow::pow(&k, d) == *r).then_some(k)
}

/// `r^e` for rational `r > 0` and rational `e`, when the result is rational.
pub fn rational_power(r: &Rational, e: &Rational) -> Option<Rational> {
    if r.is_zero() {
        return None;
    }
    let d = e.denom().to_u32()?;
    let n = e.numer().to_i32()?;
    let base = if d == 1 {
        r.clone()
    } else {
        if r.is_negative() {
            return None;
        }
        Rational::new(exact_root(r.numer(), d)?, exact_root(r.denom(), d)?)
    };
    Some(num_traits::pow::Pow::pow(&base, n))
}

/// Series of a power sum at rational parameters.
pub fn pp_series(u: &PowerSum, point: &[Rational; 3], n: usize) -> Result<TruncatedSeries> {
    let mut total: Option<TruncatedSeries> = None;
    for term in u.terms() {
        let t = term
            .instantiate(point)
            .ok_or_else(|| Error::BadParameter(format!("coefficient {} has a pole", term.coeff())))?;
        let mut prime_exps: std::collections::BTreeMap<num_bigint::BigInt, Rational> = t.consts.clone();
        let mut s = TruncatedSeries::constant(t.coeff.clone(), n);
        let mut offset = Rational::zero();
        let mut vanishing = 0;
        for (base, e) in &t.factors {
            let b0 = base.coeff(0);
            if b0.is_zero() {
                if *base != RatPoly::x() {
                    return Err(Error::BranchAmbiguity);
                }
                vanishing += 1;
                offset += e;
                continue;
            }
            // b0 > 0 by normalization; fold b0^e into the constant powers
            let mut unit = PrimeExponents::default();
            unit.push(&b0, e);
            for (p, k) in unit.0 {
                *prime_exps.entry(p).or_default() += k;
            }
            let normalized = base.scale(&b0.recip());
            s = s.mul(&binomial_series(&normalized, e, n));
        }
        if vanishing > 1 {
            return Err(Error::BranchAmbiguity);
        }
        let mut k = Rational::one();
        for (p, e) in &prime_exps {
            if e.is_zero() {
                continue;
            }
            let pr = Rational::from_integer(p.clone());
            let v = if pr == -Rational::one() {
                e.is_integer().then(|| if e.to_integer().is_even() { Rational::one() } else { -Rational::one() })
            } else {
                rational_power(&pr, e)
            };
            k *= v.ok_or_else(|| Error::IrrationalConstant(format!("{}^({})", p, e)))?;
        }
        let s = s.scale(&k).shift(&offset);
        total = Some(match total {
            None => s,
            Some(acc) => acc.add(&s)?,
        });
    }
    Ok(total.unwrap_or_else(|| TruncatedSeries::constant(Rational::zero(), n)))
}

use num_integer::Integer;

/// Prime-exponent accumulator for positive rational constants.
#[derive(Default)]
struct PrimeExponents(Vec<(num_bigint::BigInt, Rational)>);

impl PrimeExponents {
    fn push(&mut self, r: &Rational, e: &Rational) {
        for (p, k) in trial_factor(r.numer()) {
            self.0.push((p, e * Rational::from_integer(k.into())));
        }
        for (p, k) in trial_factor(r.denom()) {
            self.0.push((p, -e * Rational::from_integer(k.into())));
        }
    }
}

fn trial_factor(n: &num_bigint::BigInt) -> Vec<(num_bigint::BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = num_bigint::BigInt::from(2);
    while &p * &p <= n && p < num_bigint::BigInt::from(1_000_000) {
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
    if n > num_bigint::BigInt::one() {
        out.push((n, 1));
    }
    out
}

/// Arithmetic-geometric mean of `1` and `x`.
pub fn agm(x: f64) -> Result<f64> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::BadParameter(format!("agm needs 0 < x <= 1, got {}", x)));
    }
    let (mut a, mut g) = (1.0f64, x);
    for _ in 0..64 {
        let (na, ng) = ((a + g) / 2.0, (a * g).sqrt());
        if (na - a).abs() <= f64::EPSILON * na && (ng - g).abs() <= f64::EPSILON * ng {
            return Ok(na);
        }
        a = na;
        g = ng;
    }
    Ok(a)
}

/// Complete elliptic integral `K(k) = (π/2) ₂F₁(1/2, 1/2; 1; k²)` from an
/// order-`n` series.
pub fn elliptic_k(k: f64, n: usize) -> f64 {
    let half = Rational::new(1.into(), 2.into());
    let s = f21_series(&half, &half, &Rational::one(), n).expect("c = 1 is valid");
    std::f64::consts::FRAC_PI_2 * s.eval_float(k * k).value
}

/// `M(x)`, `1/M(x)` and `₂F₁(1/2, 1/2; 1; 1 − x²)` from an order-`n` series.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct AgmComparison {
    pub x: f64,
    pub m: f64,
    pub inv_m: f64,
    pub f21: f64,
    /// `|F·M − 1|`.
    pub residual: f64,
    pub divergence_warning: bool,
}

pub fn agm_comparison(x: f64, n: usize) -> Result<AgmComparison> {
    let m = agm(x)?;
    let half = Rational::new(1.into(), 2.into());
    let s = f21_series(&half, &half, &Rational::one(), n)?;
    let v = s.eval_float(1.0 - x * x);
    Ok(AgmComparison {
        x,
        m,
        inv_m: 1.0 / m,
        f21: v.value,
        residual: (v.value * m - 1.0).abs(),
        divergence_warning: v.divergence_warning,
    })
}

/// `K(k) = ∫₀^{π/2} dθ/√(1 − k² sin²θ)` by the midpoint rule with `m` nodes.
pub fn elliptic_k_quadrature(k: f64, m: usize) -> f64 {
    let h = std::f64::consts::FRAC_PI_2 / m as f64;
    (0..m)
        .map(|i| {
            let s = ((i as f64 + 0.5) * h).sin();
            1.0 / (1.0 - k * k * s * s).sqrt()
        })
        .sum::<f64>()
        * h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(&rat(7, 3), 0), Rational::one());
        assert_eq!(pochhammer(&Rational::one(), 5), rat(120, 1));
        assert_eq!(pochhammer(&rat(1, 2), 2), rat(3, 4));
    }

    #[test]
    fn f21_known_cases() {
        let s = f21_series(&rat(1, 1), &rat(1, 1), &rat(2, 1), 10).unwrap();
        for n in 0..=10 {
            assert_eq!(s.coeff(n), &rat(1, n as i64 + 1));
        }
        let z = f21_series(&Rational::zero(), &rat(1, 2), &rat(1, 3), 10).unwrap();
        assert!(z.coeffs()[1..].iter().all(Zero::is_zero));
        assert!(matches!(f21_series(&rat(1, 2), &rat(1, 2), &rat(-2, 1), 5), Err(Error::BadParameter(_))));
    }

    #[test]
    fn geometric_inverse() {
        let one_minus_x = TruncatedSeries::from_ints(&[1, -1], 12);
        let geo = TruncatedSeries::from_ints(&[1; 13], 12);
        assert_eq!(one_minus_x.mul(&geo), TruncatedSeries::one(12));
        assert_eq!(one_minus_x.inv().unwrap(), geo);
    }

    #[test]
    fn binomial_expansion() {
        // x^(1/2) (1-x)^(3/2): 1, -3/2, 3/8
        let s = binomial_series(&RatPoly::from_ints(&[1, -1]), &rat(3, 2), 2).shift(&rat(1, 2));
        assert_eq!(s.offset(), &rat(1, 2));
        assert_eq!(s.coeffs(), &[rat(1, 1), rat(-3, 2), rat(3, 8)]);
        let sq = binomial_series(&RatPoly::from_ints(&[1, 1]), &rat(2, 1), 4);
        assert_eq!(sq, TruncatedSeries::from_ints(&[1, 2, 1], 4));
    }

    #[test]
    fn rational_powers() {
        assert_eq!(rational_power(&rat(9, 4), &rat(-1, 2)), Some(rat(2, 3)));
        assert_eq!(rational_power(&rat(2, 1), &rat(1, 2)), None);
    }

    #[test]
    fn agm_fixed_point() {
        assert_eq!(agm(1.0).unwrap(), 1.0);
        assert!(agm(0.0).is_err());
    }

    #[test]
    fn offsets_must_be_compatible() {
        let a = TruncatedSeries::one(3).shift(&rat(1, 2));
        let b = TruncatedSeries::one(3);
        assert!(matches!(a.add(&b), Err(Error::OffsetMismatch(_, _))));
    }
}
