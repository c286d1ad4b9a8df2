//! Lauricella `F_D` series in up to three variables, its differential
//! system, and the two multivariable transformation formulas.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::series::{binomial_series, f21_series, pochhammer};
use crate::symcore::RatPoly;
use crate::{Error, Rational, Result};

/// Exact coefficient ring for [`MultiSeries`].
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_rational(r: Rational) -> Self;
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
}

impl Coeff for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn from_rational(r: Rational) -> Self {
        r
    }
}

/// `p + qω` with `ω² + ω + 1 = 0`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct QOmega {
    pub p: Rational,
    pub q: Rational,
}

impl QOmega {
    pub fn new(p: Rational, q: Rational) -> Self {
        QOmega { p, q }
    }

    pub fn omega() -> Self {
        QOmega::new(<Rational as Zero>::zero(), <Rational as One>::one())
    }

    /// `ω ↦ ω² = −1 − ω`.
    pub fn conj(&self) -> Self {
        QOmega::new(&self.p - &self.q, -self.q.clone())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        Zero::is_zero(&self.q).then_some(&self.p)
    }
}

impl Add for QOmega {
    type Output = QOmega;
    fn add(self, o: QOmega) -> QOmega {
        QOmega::new(self.p + o.p, self.q + o.q)
    }
}

impl Sub for QOmega {
    type Output = QOmega;
    fn sub(self, o: QOmega) -> QOmega {
        QOmega::new(self.p - o.p, self.q - o.q)
    }
}

impl Neg for QOmega {
    type Output = QOmega;
    fn neg(self) -> QOmega {
        QOmega::new(-self.p, -self.q)
    }
}

impl Mul for QOmega {
    type Output = QOmega;
    fn mul(self, o: QOmega) -> QOmega {
        let qq = &self.q * &o.q;
        QOmega::new(&self.p * &o.p - &qq, &self.p * &o.q + &self.q * &o.p - qq)
    }
}

impl fmt::Display for QOmega {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if Zero::is_zero(&self.q) {
            write!(f, "{}", self.p)
        } else {
            write!(f, "({}+{}ω)", self.p, self.q)
        }
    }
}

impl Coeff for QOmega {
    fn zero() -> Self {
        QOmega::default()
    }
    fn one() -> Self {
        QOmega::new(<Rational as One>::one(), <Rational as Zero>::zero())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.p) && Zero::is_zero(&self.q)
    }
    fn add(&self, o: &Self) -> Self {
        self.clone() + o.clone()
    }
    fn mul(&self, o: &Self) -> Self {
        self.clone() * o.clone()
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn from_rational(r: Rational) -> Self {
        QOmega::new(r, <Rational as Zero>::zero())
    }
}

pub type Multi = Vec<u32>;

/// Series in `m` variables known through total degree `order`.
#[derive(Clone, PartialEq)]
pub struct MultiSeries<T: Coeff = Rational> {
    vars: usize,
    order: usize,
    coeffs: BTreeMap<Multi, T>,
}

fn total(e: &[u32]) -> usize {
    e.iter().map(|&k| k as usize).sum()
}

/// All exponent tuples of `m` variables with total degree ≤ `n`.
pub fn monomials(m: usize, n: usize) -> Vec<Multi> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; m];
    fn rec(i: usize, left: usize, cur: &mut Multi, out: &mut Vec<Multi>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur[i] = k as u32;
            rec(i + 1, left - k, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, n, &mut cur, &mut out);
    out
}

impl<T: Coeff> MultiSeries<T> {
    pub fn zero(vars: usize, order: usize) -> Self {
        MultiSeries {
            vars,
            order,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, order: usize, c: T) -> Self {
        let mut s: Self = MultiSeries::zero(vars, order);
        s.set(vec![0; vars], c);
        s
    }

    pub fn one(vars: usize, order: usize) -> Self {
        MultiSeries::constant(vars, order, T::one())
    }

    /// The variable `x_i`.
    pub fn var(vars: usize, i: usize, order: usize) -> Self {
        let mut s: Self = MultiSeries::zero(vars, order);
        let mut e = vec![0; vars];
        e[i] = 1;
        s.set(e, T::one());
        s
    }

    /// `Σ c_k x^e` from a list of `(coefficient, exponents)`.
    pub fn from_terms(vars: usize, order: usize, terms: Vec<(T, Multi)>) -> Self {
        let mut s: Self = MultiSeries::zero(vars, order);
        for (c, e) in terms {
            let v = s.get(&e).add(&c);
            s.set(e, v);
        }
        s
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, e: &[u32]) -> T {
        self.coeffs.get(e).cloned().unwrap_or_else(T::zero)
    }

    pub fn set(&mut self, e: Multi, c: T) {
        if total(&e) > self.order || c.is_zero() {
            self.coeffs.remove(&e);
        } else {
            self.coeffs.insert(e, c);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Multi, &T)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        MultiSeries {
            vars: self.vars,
            order,
            coeffs: self.coeffs.iter().filter(|(e, _)| total(e) <= order).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.truncate(o.order);
        let order = out.order;
        for (e, c) in o.coeffs.iter().filter(|(e, _)| total(e) <= order) {
            let v = out.get(e).add(c);
            out.set(e.clone(), v);
        }
        out
    }

    pub fn neg(&self) -> Self {
        MultiSeries {
            vars: self.vars,
            order: self.order,
            coeffs: self.coeffs.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &T) -> Self {
        let mut out: Self = MultiSeries::zero(self.vars, self.order);
        for (e, c) in &self.coeffs {
            out.set(e.clone(), c.mul(k));
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        let mut out: Self = MultiSeries::zero(self.vars, order);
        for (e1, c1) in &self.coeffs {
            let t1 = total(e1);
            if t1 > order {
                continue;
            }
            for (e2, c2) in &o.coeffs {
                if t1 + total(e2) > order {
                    continue;
                }
                let e: Multi = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let v = out.get(&e).add(&c1.mul(c2));
                out.set(e, v);
            }
        }
        out
    }

    /// `∂/∂x_i`; known one degree less.
    pub fn partial(&self, i: usize) -> Self {
        let mut out: Self = MultiSeries::zero(self.vars, self.order.saturating_sub(1));
        for (e, c) in &self.coeffs {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.set(e2, c.mul(&T::from_rational(Rational::from_integer(e[i].into()))));
        }
        out
    }

    /// `x_i ∂/∂x_i`.
    pub fn euler(&self, i: usize) -> Self {
        let mut out: Self = MultiSeries::zero(self.vars, self.order);
        for (e, c) in &self.coeffs {
            out.set(e.clone(), c.mul(&T::from_rational(Rational::from_integer(e[i].into()))));
        }
        out
    }

    pub fn mul_var(&self, i: usize) -> Self {
        let mut out: Self = MultiSeries::zero(self.vars, self.order);
        for (e, c) in &self.coeffs {
            let mut e2 = e.clone();
            e2[i] += 1;
            out.set(e2, c.clone());
        }
        out
    }

    /// `x_i ↦ x_i^{k_i}`.
    pub fn substitute_powers(&self, k: &[u32]) -> Self {
        let mut out: Self = MultiSeries::zero(self.vars, self.order);
        for (e, c) in &self.coeffs {
            let e2: Multi = e.iter().zip(k).map(|(a, b)| a * b).collect();
            out.set(e2, c.clone());
        }
        out
    }

    /// Compose a univariate series `Σ s_k t^k` with `t = inner`, `inner(0) = 0`.
    pub fn compose_univariate(coeffs: &[T], inner: &Self) -> Result<Self> {
        if !inner.get(&vec![0; inner.vars]).is_zero() {
            return Err(Error::BadParameter("inner series must vanish at the origin".into()));
        }
        let mut acc = MultiSeries::zero(inner.vars, inner.order);
        for c in coeffs.iter().take(inner.order + 1).rev() {
            acc = acc.mul(inner).add(&MultiSeries::constant(inner.vars, inner.order, c.clone()));
        }
        Ok(acc)
    }

    /// Coefficients of the diagonal restriction `x_1 = … = x_m = x`.
    pub fn diagonal(&self) -> Vec<T> {
        let mut out = vec![T::zero(); self.order + 1];
        for (e, c) in &self.coeffs {
            let t = total(e);
            out[t] = out[t].add(c);
        }
        out
    }

    /// Smallest exponent tuple (in total-degree order) where the two differ.
    pub fn first_mismatch(&self, o: &Self) -> Option<Multi> {
        let d = self.sub(o);
        d.coeffs.keys().min_by_key(|e| (total(e), (*e).clone())).cloned()
    }

    /// Embed a univariate series in the variable `x_i`.
    pub fn in_variable(vars: usize, i: usize, coeffs: &[T], order: usize) -> Self {
        let mut s: Self = MultiSeries::zero(vars, order);
        for (k, c) in coeffs.iter().enumerate().take(order + 1) {
            let mut e = vec![0; vars];
            e[i] = k as u32;
            s.set(e, c.clone());
        }
        s
    }
}

impl MultiSeries<Rational> {
    pub fn to_omega(&self) -> MultiSeries<QOmega> {
        let mut out = MultiSeries::<QOmega>::zero(self.vars, self.order);
        for (e, c) in &self.coeffs {
            out.set(e.clone(), QOmega::from_rational(c.clone()));
        }
        out
    }
}

impl MultiSeries<QOmega> {
    /// Drop to rational coefficients, failing if an ω-part survives.
    pub fn to_rational(&self) -> Result<MultiSeries<Rational>> {
        let mut out = MultiSeries::<Rational>::zero(self.vars, self.order);
        for (e, c) in &self.coeffs {
            let r = c.as_rational().ok_or_else(|| Error::OmegaResidue(format!("{:?}: {}", e, c)))?;
            out.set(e.clone(), r.clone());
        }
        Ok(out)
    }
}

impl<T: Coeff> fmt::Debug for MultiSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiSeries[m={}, N={}]{{", self.vars, self.order)?;
        for (i, (e, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?}: {}", e, c)?;
        }
        write!(f, "}}")
    }
}

fn check_lower(c: &Rational) -> Result<()> {
    if c.is_integer() && *c <= <Rational as Zero>::zero() {
        return Err(Error::BadParameter(format!("lower parameter c = {} is a nonpositive integer", c)));
    }
    Ok(())
}

/// `F_D^{(m)}(a, b_1..b_m; c; x_1..x_m)` through total degree `n`.
pub fn lauricella_fd(a: &Rational, b: &[Rational], c: &Rational, n: usize) -> Result<MultiSeries> {
    check_lower(c)?;
    let m = b.len();
    if !(1..=3).contains(&m) {
        return Err(Error::BadParameter(format!("F_D needs 1 to 3 variables, got {}", m)));
    }
    let ratio: Vec<Rational> = (0..=n).map(|k| pochhammer(a, k) / pochhammer(c, k)).collect();
    let bfac: Vec<Vec<Rational>> = b
        .iter()
        .map(|bi| (0..=n).map(|k| pochhammer(bi, k) / pochhammer(&<Rational as One>::one(), k)).collect())
        .collect();
    let mut s = MultiSeries::zero(m, n);
    for e in monomials(m, n) {
        let mut v = ratio[total(&e)].clone();
        for (i, &k) in e.iter().enumerate() {
            v *= &bfac[i][k as usize];
        }
        s.set(e, v);
    }
    Ok(s)
}

/// `(1 − x_i)^r` as a series in `m` variables.
fn one_minus_pow(m: usize, i: usize, r: &Rational, n: usize) -> MultiSeries {
    let s = binomial_series(&RatPoly::from_ints(&[1, -1]), r, n);
    MultiSeries::in_variable(m, i, s.coeffs(), n)
}

/// Residuals of the `F_D` system applied to `y`.
///
/// The `m` main equations are multiplied by `x_i^{1−c}` and the compatibility
/// equations by `x_i^{1−b_i} x_j^{1−b_j}`, which leaves integer exponents only.
/// Each residual is truncated to total degree `N − 2`.
pub fn fd_pde_residual(y: &MultiSeries, a: &Rational, b: &[Rational], c: &Rational) -> Vec<MultiSeries> {
    let m = y.vars();
    let n = y.order();
    let one = <Rational as One>::one();
    let mut out = Vec::new();
    for i in 0..m {
        // (D_i + c)[(1−x_i)^{1+a+b_i−c} ∂_i y]
        let e_i = &one + a + &b[i] - c;
        let w = one_minus_pow(m, i, &e_i, n).mul(&y.partial(i));
        let first = w.euler(i).add(&w.scale(c));
        // a b_i (1−x_i)^{a+b_i−c} y
        let second = one_minus_pow(m, i, &(&e_i - &one), n).mul(y).scale(&(a * &b[i]));
        // (1−x_i)^{1+a−c} ∂_i[(1−x_i)^{b_i} Σ_{j≠i} x_j ∂_j y]
        let mut t = MultiSeries::zero(m, n);
        for j in (0..m).filter(|&j| j != i) {
            t = t.add(&y.euler(j));
        }
        let third = one_minus_pow(m, i, &(&one + a - c), n).mul(&one_minus_pow(m, i, &b[i], n).mul(&t).partial(i));
        out.push(first.sub(&second).add(&third).truncate(n.saturating_sub(2)));
    }
    for i in 0..m {
        for j in (i + 1)..m {
            // (x_i − x_j) ∂_i∂_j y + b_i ∂_j y − b_j ∂_i y
            let dij = y.partial(i).partial(j);
            let r = dij
                .mul_var(i)
                .sub(&dij.mul_var(j))
                .add(&y.partial(j).scale(&b[i]))
                .sub(&y.partial(i).scale(&b[j]));
            out.push(r.truncate(n.saturating_sub(2)));
        }
    }
    out
}

/// Which multivariable transformation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Emo {
    #[serde(rename = "emo1")]
    Emo1,
    #[serde(rename = "emo2")]
    Emo2,
}

/// Outcome of comparing both sides of a multivariable formula.
#[derive(Clone, Debug, PartialEq)]
pub struct EmoReport {
    pub order: usize,
    pub first_mismatch: Option<Multi>,
    pub left: MultiSeries,
    pub right: MultiSeries,
}

impl EmoReport {
    pub fn pass(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// `Σ_n coeff(n) Π X_i^{n_i}` for argument series `X_i` vanishing at 0.
fn compose_fd<T: Coeff>(fd: &MultiSeries, args: &[MultiSeries<T>], vars: usize, n: usize) -> MultiSeries<T> {
    let mut powers: Vec<Vec<MultiSeries<T>>> = Vec::new();
    for x in args {
        let mut p = vec![MultiSeries::one(vars, n)];
        for k in 1..=n {
            let next = p[k - 1].mul(x);
            p.push(next);
        }
        powers.push(p);
    }
    let mut acc = MultiSeries::zero(vars, n);
    for (e, c) in fd.terms() {
        let mut term = MultiSeries::constant(vars, n, T::from_rational(c.clone()));
        for (i, &k) in e.iter().enumerate() {
            if k > 0 {
                term = term.mul(&powers[i][k as usize]);
            }
        }
        acc = acc.add(&term);
    }
    acc
}

/// `(1 + Σ x_i)^r` in `m` variables.
fn linear_power(m: usize, r: &Rational, n: usize) -> Result<MultiSeries> {
    let mut lin = MultiSeries::zero(m, n);
    for i in 0..m {
        lin = lin.add(&MultiSeries::var(m, i, n));
    }
    let b = binomial_series(&RatPoly::from_ints(&[1, 1]), r, n);
    MultiSeries::compose_univariate(b.coeffs(), &lin)
}

/// `1 − (num/den)^k` with `den(0) = 1`, expanded as a series.
fn one_minus_ratio_pow<T: Coeff>(num: &MultiSeries<T>, den_inv: &MultiSeries<T>, k: u32) -> MultiSeries<T> {
    let ratio = num.mul(den_inv);
    let mut p = MultiSeries::one(num.vars(), num.order());
    for _ in 0..k {
        p = p.mul(&ratio);
    }
    MultiSeries::one(num.vars(), num.order()).sub(&p)
}

/// `1/(1 + Σ x_i)`.
fn inverse_linear<T: Coeff>(m: usize, n: usize) -> Result<MultiSeries<T>> {
    let mut lin = MultiSeries::zero(m, n);
    for i in 0..m {
        lin = lin.add(&MultiSeries::var(m, i, n));
    }
    let geo: Vec<T> = (0..=n).map(|k| T::from_rational(Rational::from_integer(if k % 2 == 0 { 1 } else { -1 }.into()))).collect();
    MultiSeries::compose_univariate(&geo, &lin)
}

fn lin_form<T: Coeff>(m: usize, n: usize, c0: T, cs: &[T]) -> MultiSeries<T> {
    let mut s = MultiSeries::constant(m, n, c0);
    for (i, c) in cs.iter().enumerate() {
        s = s.add(&MultiSeries::var(m, i, n).scale(c));
    }
    s
}

/// Parameters `(a; b₁, …, b_m; c)` of one `F_D` side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FdSide {
    pub a: Rational,
    pub b: Vec<Rational>,
    pub c: Rational,
}

/// The built-in parameters of either formula at `a`, plus the exponent of `1 + Σxᵢ`.
pub fn emo_sides(which: Emo, a: &Rational) -> (Rational, FdSide, FdSide) {
    let r = |p: i64, q: i64| Rational::new(p.into(), q.into());
    match which {
        Emo::Emo1 => {
            let b1 = (a + r(1, 1)) / r(6, 1);
            let b = vec![b1.clone(), b1];
            let left = FdSide { a: a / r(3, 1), b: b.clone(), c: (a + r(5, 1)) / r(6, 1) };
            let right = FdSide { a: a / r(3, 1), b, c: (a + r(1, 1)) / r(2, 1) };
            (a.clone(), left, right)
        }
        Emo::Emo2 => {
            let b1 = (a + r(2, 1)) / r(12, 1);
            let b = vec![b1.clone(), b1.clone(), b1];
            let left = FdSide { a: a / r(4, 1), b: b.clone(), c: (a + r(5, 1)) / r(6, 1) };
            let right = FdSide { a: a / r(4, 1), b, c: (a + r(2, 1)) / r(3, 1) };
            (a / r(2, 1), left, right)
        }
    }
}

/// Expand both sides of the chosen formula at parameter `a` to total degree `n`.
pub fn verify_emo(which: Emo, a: &Rational, n: usize) -> Result<EmoReport> {
    let (e, left, right) = emo_sides(which, a);
    verify_emo_with(which, &e, &left, &right, n)
}

/// `(1 + Σxᵢ)^e F_D(left; xᵢ^k)` against `F_D(right; 1 − uᵢ^k)`, with the
/// argument maps of the chosen formula.
pub fn verify_emo_with(which: Emo, e: &Rational, left: &FdSide, right: &FdSide, n: usize) -> Result<EmoReport> {
    let one = <Rational as One>::one();
    let m = match which {
        Emo::Emo1 => 2,
        Emo::Emo2 => 3,
    };
    if left.b.len() != m || right.b.len() != m {
        return Err(Error::BadParameter(format!("expected {} lower-slot parameters", m)));
    }
    let k = if m == 2 { 3 } else { 2 };
    let lhs = linear_power(m, e, n)?.mul(&lauricella_fd(&left.a, &left.b, &left.c, n)?.substitute_powers(&vec![k; m]));
    let fd = lauricella_fd(&right.a, &right.b, &right.c, n)?;
    let rhs = match which {
        Emo::Emo1 => {
            let w = QOmega::omega();
            let w2 = w.clone() * w.clone();
            let o = QOmega::one();
            let den_inv = inverse_linear::<QOmega>(2, n)?;
            let u = lin_form(2, n, o.clone(), &[w.clone(), w2.clone()]);
            let v = lin_form(2, n, o, &[w2, w]);
            let args = [one_minus_ratio_pow(&u, &den_inv, 3), one_minus_ratio_pow(&v, &den_inv, 3)];
            compose_fd(&fd, &args, 2, n).to_rational()?
        }
        Emo::Emo2 => {
            let den_inv = inverse_linear::<Rational>(3, n)?;
            let q = |s: [i64; 3]| lin_form(3, n, one.clone(), &s.map(|k| Rational::from_integer(k.into())));
            let args = [
                one_minus_ratio_pow(&q([-1, -1, 1]), &den_inv, 2),
                one_minus_ratio_pow(&q([-1, 1, -1]), &den_inv, 2),
                one_minus_ratio_pow(&q([1, -1, -1]), &den_inv, 2),
            ];
            compose_fd(&fd, &args, 3, n)
        }
    };
    Ok(EmoReport {
        order: n,
        first_mismatch: lhs.first_mismatch(&rhs),
        left: lhs,
        right: rhs,
    })
}

/// Univariate `₂F₁` coefficients as a one-variable multiseries.
pub fn f21_as_multi(a: &Rational, b: &Rational, c: &Rational, n: usize) -> Result<MultiSeries> {
    let s = f21_series(a, b, c, n)?;
    Ok(MultiSeries::in_variable(1, 0, s.coeffs(), n))
}
