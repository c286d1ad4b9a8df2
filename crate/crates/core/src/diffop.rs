//! Second-order operators `∂·f·∂ − g` with power-sum coefficients.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::series::{pp_series, TruncatedSeries};
use crate::symcore::{eq_oracle, ParamExpr, ParamRat, PowerProduct, PowerSum, RatPoly, DEFAULT_TRIALS};
use crate::{Error, Rational, Result};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CanonicalOperator {
    pub f: PowerSum,
    pub g: PowerSum,
}

impl CanonicalOperator {
    pub fn new(f: PowerSum, g: PowerSum) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::BadParameter("operator with f = 0".into()));
        }
        Ok(CanonicalOperator { f, g })
    }

    pub fn scale(&self, c: &ParamRat) -> Self {
        CanonicalOperator {
            f: self.f.scale(c),
            g: self.g.scale(c),
        }
    }

    pub fn substitute_params(&self, images: &[ParamExpr; 3]) -> Self {
        CanonicalOperator {
            f: self.f.substitute_params(images),
            g: self.g.substitute_params(images),
        }
    }
}

impl fmt::Display for CanonicalOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "∂[{}]∂ − [{}]", self.f, self.g)
    }
}

/// `x ↦ num(x)/den(x)` with rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalMap {
    num: RatPoly,
    den: RatPoly,
    tag: String,
}

impl RationalMap {
    pub fn new(num: RatPoly, den: RatPoly, tag: impl Into<String>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree().unwrap_or(0) > 0 {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        } else {
            (num, den)
        };
        let w = num.derivative().mul(&den).sub(&num.mul(&den.derivative()));
        if w.is_zero() {
            return Err(Error::ConstantMap);
        }
        Ok(RationalMap { num, den, tag: tag.into() })
    }

    pub fn identity() -> Self {
        RationalMap::new(RatPoly::x(), RatPoly::one(), "x").unwrap()
    }

    /// `1 − x`.
    pub fn reflection() -> Self {
        RationalMap::new(RatPoly::from_ints(&[1, -1]), RatPoly::one(), "1-x").unwrap()
    }

    pub fn num(&self) -> &RatPoly {
        &self.num
    }

    pub fn den(&self) -> &RatPoly {
        &self.den
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    /// `z'` as a power product.
    pub fn derivative(&self) -> Result<PowerProduct> {
        let w = self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()));
        Ok(PowerProduct::base_pow(&w, ParamExpr::int(1))?.mul(&PowerProduct::base_pow(&self.den, ParamExpr::int(-2))?))
    }

    /// `1 − z` as a power product, which factors the numerator.
    pub fn one_minus(&self) -> Result<PowerProduct> {
        let top = self.den.sub(&self.num);
        if top.is_zero() {
            return Err(Error::ConstantMap);
        }
        Ok(PowerProduct::base_pow(&top, ParamExpr::int(1))?.mul(&PowerProduct::base_pow(&self.den, ParamExpr::int(-1))?))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &RationalMap) -> Result<RationalMap> {
        let d = self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0));
        let lift = |p: &RatPoly| {
            let hp = p.homogeneous_compose(&inner.num, &inner.den);
            let missing = d - p.degree().unwrap_or(0);
            hp.mul(&inner.den.pow(missing))
        };
        // homogeneous_compose uses deg p; pad both to the common degree d
        let num = lift(&self.num);
        let den = lift(&self.den);
        RationalMap::new(num, den, format!("({})∘({})", self.tag, inner.tag))
    }

    /// Value at a rational point, `None` at a pole.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }

    pub fn series(&self, n: usize) -> Result<TruncatedSeries> {
        if self.den.coeff(0).is_zero() {
            return Err(Error::SingularPoint(format!("map {} has a pole at 0", self.tag)));
        }
        TruncatedSeries::from_poly(&self.num, n).div(&TruncatedSeries::from_poly(&self.den, n))
    }
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == RatPoly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

fn one_minus_x() -> RatPoly {
    RatPoly::from_ints(&[1, -1])
}

/// `∂ x^c(1−x)^{1+a+b−c} ∂ − ab x^{c−1}(1−x)^{a+b−c}`.
pub fn gauss_operator(a: &ParamExpr, b: &ParamExpr, c: &ParamExpr) -> CanonicalOperator {
    let e = ParamExpr::int(1) + a.clone() + b.clone() - c.clone();
    let f = PowerProduct::from_factors(ParamRat::one(), &[(RatPoly::x(), c.clone()), (one_minus_x(), e.clone())])
        .expect("linear bases");
    let ab = a.to_param_rat().mul(&b.to_param_rat());
    let g = PowerProduct::from_factors(
        ab,
        &[(RatPoly::x(), c.clone() - ParamExpr::int(1)), (one_minus_x(), e - ParamExpr::int(1))],
    )
    .expect("linear bases");
    CanonicalOperator {
        f: PowerSum::from(f),
        g: PowerSum::from(g),
    }
}

/// Pull back along `z`: `(f∘z · z'^{-1}, z' · g∘z)`.
pub fn substitute(op: &CanonicalOperator, z: &RationalMap) -> Result<CanonicalOperator> {
    let dz = z.derivative()?;
    let f = op.f.compose(z.num(), z.den())?.mul_pp(&dz.inv()?);
    let g = op.g.compose(z.num(), z.den())?.mul_pp(&dz);
    CanonicalOperator::new(f, g)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionCheck {
    pub structural: bool,
    pub oracle: bool,
    pub residual: PowerSum,
}

impl ConditionCheck {
    pub fn pass(&self) -> bool {
        self.structural || self.oracle
    }
}

/// Outcome of testing `h·D₁·h = λ⁻¹·D₂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugationReport {
    /// `f₂/(f₁h²)` when that ratio is a constant.
    pub lambda: Option<PowerProduct>,
    pub f_condition: ConditionCheck,
    pub g_condition: ConditionCheck,
    /// `(f₁h′)′h`.
    pub bracket: PowerSum,
}

impl ConjugationReport {
    pub fn pass(&self) -> bool {
        self.lambda.is_some() && self.f_condition.pass() && self.g_condition.pass()
    }
}

fn check(lhs: &PowerSum, rhs: &PowerSum, seed: u64) -> ConditionCheck {
    let residual = lhs.sub(rhs);
    let structural = residual.is_zero();
    let oracle = structural || eq_oracle(lhs, rhs, seed, DEFAULT_TRIALS).unwrap_or(false);
    ConditionCheck { structural, oracle, residual }
}

/// `(f₁h′)′h` for the given operator and conjugating factor.
pub fn conjugation_bracket(d1: &CanonicalOperator, h: &PowerProduct) -> PowerSum {
    let hs = PowerSum::from(h.clone());
    d1.f.mul(&hs.derive()).derive().mul(&hs)
}

pub fn conjugation_check(d1: &CanonicalOperator, d2: &CanonicalOperator, h: &PowerProduct, seed: u64) -> ConjugationReport {
    let hs = PowerSum::from(h.clone());
    let h2 = hs.mul(&hs);
    let f1h2 = d1.f.mul(&h2);
    let lambda = match (d2.f.single_term(), f1h2.single_term()) {
        (Some(f2), Some(base)) => f2.div(base).ok().filter(|l| l.is_constant()),
        _ => None,
    };
    let lam = lambda.clone().unwrap_or_else(PowerProduct::one);
    let bracket = conjugation_bracket(d1, h);
    let f_rhs = f1h2.mul_pp(&lam);
    let g_rhs = d1.g.mul(&h2).sub(&bracket).mul_pp(&lam);
    ConjugationReport {
        lambda,
        f_condition: check(&d2.f, &f_rhs, seed),
        g_condition: check(&d2.g, &g_rhs, seed.wrapping_add(1)),
        bracket,
    }
}

/// `(f·y′)′ − g·y` at rational parameters, truncated to order `N − 2`.
pub fn apply_to_series(op: &CanonicalOperator, point: &[Rational; 3], y: &TruncatedSeries) -> Result<TruncatedSeries> {
    let n = y.order();
    let f = pp_series(&op.f, point, n)?;
    let g = pp_series(&op.g, point, n)?;
    let first = f.mul(&y.derive().normalize()).derive().normalize();
    let second = g.mul(y).normalize();
    let r = first.sub(&second)?;
    let r = r.truncate(n.saturating_sub(2));
    if r.offset().is_integer() && r.offset().is_negative() {
        let k = (-r.offset()).to_integer();
        let k: usize = k.try_into().unwrap_or(usize::MAX);
        if r.coeffs().iter().take(k).any(|c| !c.is_zero()) {
            return Err(Error::PoleAtOrigin(format!("nonzero coefficient of a negative power of x in {}", r)));
        }
    }
    Ok(r)
}

/// Value and derivative of `h(x)·F(z(x))` at the expansion point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InitialValues {
    #[serde(serialize_with = "display")]
    pub value: PowerProduct,
    #[serde(serialize_with = "display")]
    pub derivative: PowerProduct,
}

fn display<T: fmt::Display, S: serde::Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl InitialValues {
    pub fn as_param_rats(&self) -> Option<(ParamRat, ParamRat)> {
        Some((self.value.as_param_rat()?, self.derivative.as_param_rat()?))
    }
}

/// Expansion point of a formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, serde::Deserialize)]
pub enum ExpansionPoint {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1")]
    One,
}

impl fmt::Display for ExpansionPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpansionPoint::Zero => write!(f, "0"),
            ExpansionPoint::One => write!(f, "1"),
        }
    }
}

/// Value and derivative at 0 of `h`, both as power products without bases.
fn jet_at_zero(h: &PowerProduct) -> Result<(PowerProduct, PowerProduct)> {
    let mut value = h.constant_part();
    let mut log_derivative = ParamRat::zero();
    let mut x_power = 0i64;
    for (base, e) in h.factors() {
        let b0 = base.coeff(0);
        if b0.is_zero() {
            match e.as_integer().and_then(|k| i64::try_from(k).ok()) {
                Some(k) if k > 0 => x_power = k,
                _ => return Err(Error::SingularPoint(format!("({})^({}) at 0", base, e))),
            }
            continue;
        }
        value = value.mul(&PowerProduct::const_pow(&b0, e.clone()));
        let b1 = base.coeff(1);
        log_derivative = log_derivative.add(&e.to_param_rat().scale(&(b1 / &b0)));
    }
    match x_power {
        0 => {
            let d = value.scale(&log_derivative);
            Ok((value, d))
        }
        1 => Ok((PowerProduct::constant(ParamRat::zero()), value)),
        _ => Ok((PowerProduct::constant(ParamRat::zero()), PowerProduct::constant(ParamRat::zero()))),
    }
}

/// `(hF(z))(x₀)` and `(hF(z))′(x₀)` for `F = ₂F₁(a, b; c; ·)`.
///
/// At `x₀ = 1` everything is rewritten through `u = 1 − x` and the
/// derivative is returned with respect to `x`.
pub fn initial_values(h: &PowerProduct, params: &[ParamExpr; 3], z: &RationalMap, x0: ExpansionPoint) -> Result<InitialValues> {
    let (h, z, sign) = match x0 {
        ExpansionPoint::Zero => (h.clone(), z.clone(), Rational::one()),
        ExpansionPoint::One => {
            let u = one_minus_x();
            (h.compose(&u, &RatPoly::one())?, z.compose(&RationalMap::reflection())?, -Rational::one())
        }
    };
    if z.den().coeff(0).is_zero() {
        return Err(Error::SingularPoint(format!("map {} has a pole at {}", z, x0)));
    }
    if !z.num().coeff(0).is_zero() {
        return Err(Error::MapNotAnchored);
    }
    let (hv, hd) = jet_at_zero(&h)?;
    let dz0 = z.num().coeff(1) / z.den().coeff(0);
    let [a, b, c] = params;
    let fprime = a.to_param_rat().mul(&b.to_param_rat()).div(&c.to_param_rat())?;
    let chain = hv.scale(&fprime.scale(&dz0));
    let derivative = PowerSum::from(hd).add(&PowerSum::from(chain));
    let derivative = match derivative.terms() {
        [] => PowerProduct::constant(ParamRat::zero()),
        [t] => t.clone(),
        _ => return Err(Error::UnmatchedBranch("derivative mixes constant powers".into())),
    };
    Ok(InitialValues {
        value: hv,
        derivative: derivative.scale(&ParamRat::from_rational(sign)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;
    use crate::series::f21_series;

    fn a() -> ParamExpr {
        ParamExpr::a()
    }
    fn b() -> ParamExpr {
        ParamExpr::b()
    }
    fn c() -> ParamExpr {
        ParamExpr::c()
    }

    #[test]
    fn gauss_symmetric_in_a_b() {
        assert_eq!(gauss_operator(&a(), &b(), &c()), gauss_operator(&b(), &a(), &c()));
    }

    #[test]
    fn reflection_swaps_c_and_e() {
        let op = gauss_operator(&a(), &b(), &c());
        let pulled = substitute(&op, &RationalMap::reflection()).unwrap();
        let e = ParamExpr::e();
        let expect = gauss_operator(&a(), &b(), &e).scale(&ParamRat::from_int(-1));
        assert_eq!(pulled, expect);
    }

    #[test]
    fn euler_conjugation() {
        let d1 = gauss_operator(&(c() - a()), &(c() - b()), &c());
        let d2 = gauss_operator(&a(), &b(), &c());
        let h = PowerProduct::base_pow(&one_minus_x(), a() + b() - c()).unwrap();
        let r = conjugation_check(&d1, &d2, &h, 0);
        assert!(r.f_condition.structural && r.g_condition.structural, "{:?}", r);
        assert!(r.pass());
    }

    #[test]
    fn identity_conjugation() {
        let d = gauss_operator(&a(), &b(), &c());
        assert!(conjugation_check(&d, &d, &PowerProduct::one(), 0).pass());
        let other = gauss_operator(&a(), &(b() + ParamExpr::int(1)), &c());
        assert!(!conjugation_check(&d, &other, &PowerProduct::one(), 0).pass());
    }

    #[test]
    fn residual_of_f21() {
        let point = [rat(1, 2), rat(1, 2), rat(1, 1)];
        let y = f21_series(&point[0], &point[1], &point[2], 20).unwrap();
        let r = apply_to_series(&gauss_operator(&a(), &b(), &c()), &point, &y).unwrap();
        assert!(r.is_zero());
        assert_eq!(r.order(), 18);
    }

    #[test]
    fn constant_solution_when_a_vanishes() {
        let point = [rat(0, 1), rat(2, 3), rat(5, 7)];
        let y = TruncatedSeries::one(10);
        assert!(apply_to_series(&gauss_operator(&a(), &b(), &c()), &point, &y).unwrap().is_zero());
    }

    #[test]
    fn canonical_initial_values() {
        let iv = initial_values(&PowerProduct::one(), &[a(), b(), c()], &RationalMap::identity(), ExpansionPoint::Zero).unwrap();
        let (v, d) = iv.as_param_rats().unwrap();
        assert!(v.is_one());
        assert_eq!(d, a().to_param_rat().mul(&b().to_param_rat()).div(&c().to_param_rat()).unwrap());
    }

    #[test]
    fn unanchored_map() {
        let r = initial_values(&PowerProduct::one(), &[a(), b(), c()], &RationalMap::reflection(), ExpansionPoint::Zero);
        assert_eq!(r, Err(Error::MapNotAnchored));
    }

    #[test]
    fn constant_map_is_rejected() {
        let m = RationalMap::new(RatPoly::from_ints(&[2, 2]), RatPoly::from_ints(&[1, 1]), "2");
        assert_eq!(m, Err(Error::ConstantMap));
    }
}
