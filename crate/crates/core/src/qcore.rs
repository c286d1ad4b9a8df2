//! q-analogues: q-numbers, q-Pochhammer symbols, the difference operator Δ,
//! dilations `f(x) ↦ f(λx)`, `φ_α`, `₂φ₁`, and the difference equations it solves.
//!
//! A [`QSeries`] is `x^{kc + n₀} Σ cᵢ xⁱ` with `c` kept formal: the only thing
//! ever needed about `x^c` is `(λx)^c = λ^c x^c`, and `q^c = γ` is known.
//! Other `λ^c` (for `λ = σ`) need exponent data, see [`Lattice`].

use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::symcore::RatPoly;
use crate::{Error, Rational, Result};

fn ipow(r: &Rational, n: i64) -> Rational {
    num_traits::pow::Pow::pow(r, n as i32)
}

/// Exponent data: `q = t^{d²}`, with `a, b, c ∈ (1/d)ℤ`, so every `q^{rs}`
/// for `r, s` in the exponent lattice is a rational power of `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lattice {
    #[serde(serialize_with = "as_str")]
    pub t: Rational,
    pub d: u32,
    #[serde(serialize_with = "as_str")]
    pub a: Rational,
    #[serde(serialize_with = "as_str")]
    pub b: Rational,
    #[serde(serialize_with = "as_str")]
    pub c: Rational,
}

fn as_str<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Parameters `q, α = q^a, β = q^b, γ = q^c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QParam {
    #[serde(serialize_with = "as_str")]
    pub q: Rational,
    #[serde(serialize_with = "as_str")]
    pub alpha: Rational,
    #[serde(serialize_with = "as_str")]
    pub beta: Rational,
    #[serde(serialize_with = "as_str")]
    pub gamma: Rational,
    pub lattice: Option<Lattice>,
}

/// The operator `f(x) ↦ f(λx)`, together with `λ^c` when known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dilation {
    pub value: Rational,
    pub c_power: Option<Rational>,
}

impl Dilation {
    pub fn plain(value: Rational) -> Self {
        Dilation { value, c_power: None }
    }

    pub fn inv(&self) -> Self {
        Dilation {
            value: self.value.recip(),
            c_power: self.c_power.as_ref().map(Rational::recip),
        }
    }

    /// `λ^{kc+n}`.
    fn factor(&self, k: i64, n: i64) -> Result<Rational> {
        let mut f = ipow(&self.value, n);
        if k != 0 {
            let cp = self
                .c_power
                .as_ref()
                .ok_or_else(|| Error::NeedsExponents(format!("({})^c", self.value)))?;
            f *= ipow(cp, k);
        }
        Ok(f)
    }
}

impl QParam {
    /// Value mode.
    pub fn new(q: Rational, alpha: Rational, beta: Rational, gamma: Rational) -> Result<Self> {
        let qp = QParam {
            q,
            alpha,
            beta,
            gamma,
            lattice: None,
        };
        qp.validate()?;
        Ok(qp)
    }

    /// Exponent mode: `q = t^{d²}`, `α = q^a`, `β = q^b`, `γ = q^c`.
    pub fn lattice(t: Rational, d: u32, a: Rational, b: Rational, c: Rational) -> Result<Self> {
        let dd = Rational::from_integer(d.into());
        for (name, v) in [("a", &a), ("b", &b), ("c", &c)] {
            if !(v * &dd).is_integer() {
                return Err(Error::BadParameter(format!("{} = {} is not in (1/{})Z", name, v, d)));
            }
        }
        let lat = Lattice { t, d, a, b, c };
        let q = lat_pow(&lat, &Rational::one())?;
        let qp = QParam {
            alpha: lat_pow(&lat, &lat.a)?,
            beta: lat_pow(&lat, &lat.b)?,
            gamma: lat_pow(&lat, &lat.c)?,
            q,
            lattice: Some(lat),
        };
        qp.validate()?;
        Ok(qp)
    }

    fn validate(&self) -> Result<()> {
        if self.q.is_zero() || self.q.abs() >= Rational::one() {
            return Err(Error::BadParameter(format!("need 0 < |q| < 1, got {}", self.q)));
        }
        // γ ∉ q^{−ℕ}: test every m with |γ q^m| ≥ 1
        let mut g = self.gamma.clone();
        while g.abs() >= Rational::one() {
            if g.is_one() {
                return Err(Error::BadParameter(format!("gamma = {} lies in q^(-N)", self.gamma)));
            }
            g *= &self.q;
        }
        Ok(())
    }

    /// `[n] = (1 − qⁿ)/(1 − q)`.
    pub fn q_number(&self, n: i64) -> Rational {
        q_number(&self.q, n)
    }

    /// `[a] = (1 − α)/(1 − q)` for `α = q^a`.
    pub fn bracket(&self, alpha: &Rational) -> Rational {
        (Rational::one() - alpha) / (Rational::one() - &self.q)
    }

    /// `σ = αβ/γ`.
    pub fn sigma(&self) -> Rational {
        &self.alpha * &self.beta / &self.gamma
    }

    /// `ε = qαβ/γ`.
    pub fn epsilon(&self) -> Rational {
        &self.q * self.sigma()
    }

    pub fn dil_q(&self) -> Dilation {
        Dilation {
            value: self.q.clone(),
            c_power: Some(self.gamma.clone()),
        }
    }

    /// `q^r` for `r` in the exponent lattice.
    pub fn qpow(&self, r: &Rational) -> Result<Rational> {
        if r.is_integer() {
            return Ok(ipow(&self.q, r.to_integer().to_i64().expect("small exponent")));
        }
        let lat = self
            .lattice
            .as_ref()
            .ok_or_else(|| Error::NeedsExponents(format!("q^({})", r)))?;
        lat_pow(lat, r)
    }

    /// Dilation by `q^r`; `(q^r)^c = q^{rc}` needs the lattice unless `r ∈ ℤ`.
    pub fn dil_exp(&self, r: &Rational) -> Result<Dilation> {
        let value = self.qpow(r)?;
        let c_power = match &self.lattice {
            Some(lat) => Some(lat_pow(lat, &(r * &lat.c))?),
            None if r.is_integer() => Some(ipow(&self.gamma, r.to_integer().to_i64().unwrap())),
            None => None,
        };
        Ok(Dilation { value, c_power })
    }

    /// Dilation by `σ = αβ/γ`.
    pub fn dil_sigma(&self) -> Result<Dilation> {
        match &self.lattice {
            Some(lat) => self.dil_exp(&(&lat.a + &lat.b - &lat.c)),
            None => Ok(Dilation::plain(self.sigma())),
        }
    }

    pub fn exponents(&self) -> Option<(Rational, Rational, Rational)> {
        self.lattice.as_ref().map(|l| (l.a.clone(), l.b.clone(), l.c.clone()))
    }
}

fn lat_pow(lat: &Lattice, r: &Rational) -> Result<Rational> {
    let e = r * Rational::from_integer((lat.d * lat.d).into());
    if !e.is_integer() {
        return Err(Error::NeedsExponents(format!("q^({}) is off the lattice", r)));
    }
    Ok(ipow(&lat.t, e.to_integer().to_i64().expect("small exponent")))
}

/// `[n] = (1 − qⁿ)/(1 − q)`.
pub fn q_number(q: &Rational, n: i64) -> Rational {
    (Rational::one() - ipow(q, n)) / (Rational::one() - q)
}

/// `(α; q)ₙ = Π_{i<n} (1 − α qⁱ)`.
pub fn q_pochhammer(alpha: &Rational, q: &Rational, n: usize) -> Rational {
    let mut acc = Rational::one();
    let mut qi = Rational::one();
    for _ in 0..n {
        acc *= Rational::one() - alpha * &qi;
        qi *= q;
    }
    acc
}

/// `(q^A; q)ₙ / (1 − q)ⁿ` as a polynomial in `q`, evaluated at `q = 1`.
pub fn q_degeneration(a: u32, n: usize) -> Rational {
    let mut num = RatPoly::one();
    for i in 0..n {
        let k = a as usize + i;
        num = num.mul(&RatPoly::one().sub(&RatPoly::monomial(k, Rational::one())));
    }
    let den = RatPoly::from_ints(&[1, -1]).pow(n);
    let quotient = num.div_exact(&den).expect("(1 - q)^n divides (q^A; q)_n for A + n > 0 or n = 0");
    quotient.eval(&Rational::one())
}

/// `x^{kc + n₀} (c₀ + c₁x + … + c_N x^N)` with `c` formal.
#[derive(Clone, PartialEq, Eq)]
pub struct QSeries {
    k: i64,
    n0: i64,
    coeffs: Vec<Rational>,
}

impl QSeries {
    pub fn new(k: i64, n0: i64, mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::zero());
        QSeries { k, n0, coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        let n = coeffs.len().saturating_sub(1);
        QSeries::new(0, 0, coeffs, n)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        QSeries::new(0, 0, vec![c], order)
    }

    pub fn one(order: usize) -> Self {
        QSeries::constant(Rational::one(), order)
    }

    /// `x^{kc + n}` known to relative order `order`.
    pub fn monomial(k: i64, n: i64, order: usize) -> Self {
        QSeries::new(k, n, vec![Rational::one()], order)
    }

    pub fn from_poly(p: &RatPoly, order: usize) -> Self {
        QSeries::new(0, 0, p.coeffs().to_vec(), order)
    }

    pub fn c_multiplicity(&self) -> i64 {
        self.k
    }

    pub fn offset(&self) -> i64 {
        self.n0
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn top(&self) -> i64 {
        self.n0 + self.order() as i64
    }

    pub fn truncate(&self, order: usize) -> Self {
        QSeries::new(self.k, self.n0, self.coeffs.clone(), order.min(self.order()))
    }

    pub fn normalize(&self) -> Self {
        let z = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if z == 0 || z == self.coeffs.len() {
            return self.clone();
        }
        QSeries {
            k: self.k,
            n0: self.n0 + z as i64,
            coeffs: self.coeffs[z..].to_vec(),
        }
    }

    fn with_offset(&self, n0: i64) -> Self {
        if n0 > self.n0 {
            let drop = ((n0 - self.n0) as usize).min(self.coeffs.len() - 1);
            return QSeries { k: self.k, n0, coeffs: self.coeffs[drop..].to_vec() };
        }
        let pad = (self.n0 - n0) as usize;
        let mut coeffs = vec![Rational::zero(); pad];
        coeffs.extend(self.coeffs.iter().cloned());
        QSeries { k: self.k, n0, coeffs }
    }

    pub fn add(&self, o: &QSeries) -> Result<Self> {
        if self.k != o.k {
            return Err(Error::OffsetMismatch(format!("{}c+{}", self.k, self.n0), format!("{}c+{}", o.k, o.n0)));
        }
        let n0 = self.n0.min(o.n0);
        let top = self.top().min(o.top());
        if top < n0 {
            return Ok(QSeries::new(self.k, n0, vec![], 0));
        }
        let (a, b) = (self.with_offset(n0), o.with_offset(n0));
        let coeffs = (0..=(top - n0) as usize)
            .map(|i| a.coeffs.get(i).cloned().unwrap_or_default() + b.coeffs.get(i).cloned().unwrap_or_default())
            .collect();
        Ok(QSeries { k: self.k, n0, coeffs })
    }

    pub fn sub(&self, o: &QSeries) -> Result<Self> {
        self.add(&o.scale(&-Rational::one()))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        QSeries {
            k: self.k,
            n0: self.n0,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn mul(&self, o: &QSeries) -> Self {
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
        QSeries {
            k: self.k + o.k,
            n0: self.n0 + o.n0,
            coeffs,
        }
    }

    pub fn inv(&self) -> Result<Self> {
        let s = self.normalize();
        if s.coeffs[0].is_zero() {
            return Err(Error::NonInvertible);
        }
        let inv0 = s.coeffs[0].recip();
        let n = s.order();
        let mut out = vec![Rational::zero(); n + 1];
        out[0] = inv0.clone();
        for m in 1..=n {
            let mut acc = Rational::zero();
            for j in 1..=m {
                acc += &s.coeffs[j] * &out[m - j];
            }
            out[m] = -acc * &inv0;
        }
        Ok(QSeries {
            k: -s.k,
            n0: -s.n0,
            coeffs: out,
        })
    }

    pub fn div(&self, o: &QSeries) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    /// Multiply by `x^{kc + n}`.
    pub fn shift(&self, k: i64, n: i64) -> Self {
        QSeries {
            k: self.k + k,
            n0: self.n0 + n,
            coeffs: self.coeffs.clone(),
        }
    }

    /// `f(λx)`.
    pub fn dilate(&self, d: &Dilation) -> Result<Self> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        let base = d.factor(self.k, self.n0)?;
        let mut p = base;
        for c in &self.coeffs {
            coeffs.push(c * &p);
            p *= &d.value;
        }
        Ok(QSeries {
            k: self.k,
            n0: self.n0,
            coeffs,
        })
    }

    /// `Δf = (f(x) − f(qx))/((1 − q)x)`.
    pub fn delta(&self, qp: &QParam) -> Result<Self> {
        let diff = self.sub(&self.dilate(&qp.dil_q())?)?;
        Ok(diff.scale(&(Rational::one() - &qp.q).recip()).shift(0, -1).normalize_if_integral())
    }

    /// `[δ + a] f = (f − α f(qx))/(1 − q)`.
    pub fn delta_plus(&self, qp: &QParam, alpha: &Rational) -> Result<Self> {
        let d = self.sub(&self.dilate(&qp.dil_q())?.scale(alpha))?;
        Ok(d.scale(&(Rational::one() - &qp.q).recip()))
    }

    fn normalize_if_integral(self) -> Self {
        if self.k == 0 && self.n0 < 0 {
            self.normalize()
        } else {
            self
        }
    }

    /// Index of the first differing coefficient within common precision.
    pub fn first_mismatch(&self, o: &QSeries) -> Result<Option<usize>> {
        let d = self.sub(o)?;
        Ok(d.coeffs.iter().position(|c| !c.is_zero()))
    }

    /// Exact truncated value at `x` (needs `k = 0`, `n₀ ≥ 0`).
    pub fn eval_exact(&self, x: &Rational) -> Option<Rational> {
        if self.k != 0 || self.n0 < 0 {
            return None;
        }
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        Some(acc * ipow(x, self.n0))
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^({}c+{})*[", self.k, self.n0)?;
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}]", parts.join(", "))
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSeries({})", self)
    }
}

/// `Δs`.
pub fn q_delta(s: &QSeries, qp: &QParam) -> Result<QSeries> {
    s.delta(qp)
}

fn check(order: usize, l: &QSeries, r: &QSeries) -> Result<QCheck> {
    let (l, r) = (l.truncate(order), r.truncate(order));
    Ok(QCheck {
        order,
        first_mismatch: l.first_mismatch(&r)?,
    })
}

/// Product rule `Δ(fg) = f(qx)Δg + (Δf)g`.
pub fn product_rule_check(f: &QSeries, g: &QSeries, qp: &QParam, order: usize) -> Result<QCheck> {
    let lhs = f.mul(g).delta(qp)?;
    let rhs = f.dilate(&qp.dil_q())?.mul(&g.delta(qp)?).add(&f.delta(qp)?.mul(g))?;
    check(order, &lhs.with_offset(-1), &rhs.with_offset(-1))
}

/// The three `φ` identities: `φ_q = 1 − x`, `φ_{αβ}(x) = φ_α(βx)φ_β(x) = φ_α(x)φ_β(αx)`,
/// `Δφ_α = −[a]φ_{α/q}(qx)`.
pub fn phi_identities(alpha: &Rational, beta: &Rational, q: &Rational, order: usize) -> Result<Vec<(&'static str, QCheck)>> {
    let qp = QParam::new(q.clone(), alpha.clone(), beta.clone(), Rational::one() / Rational::from_integer(2.into()))?;
    let n = order + 2;
    let phi = |a: &Rational| phi_alpha_series(a, q, n);
    let one_minus_x = QSeries::from_poly(&RatPoly::from_ints(&[1, -1]), n);
    let mut out = vec![("phi_q", check(order, &phi(q)?, &one_minus_x)?)];
    let ab = phi(&(alpha * beta))?;
    let r1 = phi(alpha)?.dilate(&Dilation::plain(beta.clone()))?.mul(&phi(beta)?);
    let r2 = phi(alpha)?.mul(&phi(beta)?.dilate(&Dilation::plain(alpha.clone()))?);
    out.push(("phi_product", check(order, &ab, &r1)?));
    out.push(("phi_product_swapped", check(order, &ab, &r2)?));
    let d = phi(alpha)?.delta(&qp)?.with_offset(0);
    let r = phi(&(alpha / q))?.dilate(&qp.dil_q())?.scale(&-qp.bracket(alpha));
    out.push(("phi_delta", check(order, &d, &r)?));
    Ok(out)
}

/// Shift-operator identities on a test series `f` and multiplier `g`:
/// `(αβ)^δ = α^δβ^δ`, `Δα^δ = α α^δ Δ`, `α^δ g α^{−δ} = g(αx)`.
pub fn shift_identities(f: &QSeries, g: &QSeries, qp: &QParam, order: usize) -> Result<Vec<(&'static str, QCheck)>> {
    let a = Dilation::plain(qp.alpha.clone());
    let b = Dilation::plain(qp.beta.clone());
    let ab = Dilation::plain(&qp.alpha * &qp.beta);
    let mut out = vec![("product", check(order, &f.dilate(&ab)?, &f.dilate(&b)?.dilate(&a)?)?)];
    let lhs = f.dilate(&a)?.delta(qp)?;
    let rhs = f.delta(qp)?.dilate(&a)?.scale(&qp.alpha);
    out.push(("delta_commute", check(order, &lhs.with_offset(-1), &rhs.with_offset(-1))?));
    let lhs = g.mul(&f.dilate(&a.inv())?).dilate(&a)?;
    let rhs = g.dilate(&a)?.mul(f);
    out.push(("conjugate_multiplier", check(order, &lhs, &rhs)?));
    Ok(out)
}

/// `₂φ₁(α, β; γ; x)` to order `n`.
pub fn q2phi1_series(qp: &QParam, n: usize) -> Result<QSeries> {
    q2phi1_with(&qp.alpha, &qp.beta, &qp.gamma, &qp.q, n)
}

fn q2phi1_with(alpha: &Rational, beta: &Rational, gamma: &Rational, q: &Rational, n: usize) -> Result<QSeries> {
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut t = Rational::one();
    let mut qi = Rational::one();
    coeffs.push(t.clone());
    for _ in 0..n {
        let den = (Rational::one() - gamma * &qi) * (Rational::one() - q * &qi);
        if den.is_zero() {
            return Err(Error::BadParameter(format!("gamma = {} lies in q^(-N)", gamma)));
        }
        t = t * (Rational::one() - alpha * &qi) * (Rational::one() - beta * &qi) / den;
        coeffs.push(t.clone());
        qi *= q;
    }
    Ok(QSeries::new(0, 0, coeffs, n))
}

/// `₁φ₀(α; x) = Σ (α;q)ₙ/(q;q)ₙ xⁿ`.
pub fn q1phi0_series(alpha: &Rational, q: &Rational, n: usize) -> QSeries {
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut t = Rational::one();
    let mut qi = Rational::one();
    coeffs.push(t.clone());
    for _ in 0..n {
        t = t * (Rational::one() - alpha * &qi) / (Rational::one() - q * &qi);
        coeffs.push(t.clone());
        qi *= q;
    }
    QSeries::new(0, 0, coeffs, n)
}

/// `φ_α(x) = (x;q)_∞/(αx;q)_∞`, as the inverse of `₁φ₀(α; x)`.
pub fn phi_alpha_series(alpha: &Rational, q: &Rational, n: usize) -> Result<QSeries> {
    q1phi0_series(alpha, q, n).inv()
}

fn geometric(n: usize) -> QSeries {
    QSeries::new(0, 0, vec![Rational::one(); n + 1], n)
}

/// `[δ+a][δ+b] y − x^{-1}[δ][δ+c−1] y`.
pub fn e0q_residual(y: &QSeries, qp: &QParam) -> Result<QSeries> {
    let first = y.delta_plus(qp, &qp.alpha)?.delta_plus(qp, &qp.beta)?;
    let gq = &qp.gamma / &qp.q;
    let second = y.delta_plus(qp, &gq)?.delta_plus(qp, &Rational::one())?.shift(0, -1);
    let r = first.sub(&second)?;
    Ok(r.truncate(y.order().saturating_sub(2)))
}

/// `γx(1−εx)Δ²y + ([c] − (αβ + β[a] + α[b])x)Δy − [a][b]y`.
pub fn e1q_residual(y: &QSeries, qp: &QParam) -> Result<QSeries> {
    let (a, b, c) = (qp.bracket(&qp.alpha), qp.bracket(&qp.beta), qp.bracket(&qp.gamma));
    let eps = qp.epsilon();
    let n = y.order();
    let dy = y.delta(qp)?;
    let d2y = dy.delta(qp)?;
    let p1 = QSeries::from_poly(&RatPoly::new(vec![Rational::zero(), qp.gamma.clone(), -(&qp.gamma * &eps)]), n);
    let lin = &qp.alpha * &qp.beta + &qp.beta * &a + &qp.alpha * &b;
    let p2 = QSeries::from_poly(&RatPoly::new(vec![c, -lin]), n);
    let r = p1.mul(&d2y).add(&p2.mul(&dy))?.sub(&y.scale(&(&a * &b)))?;
    Ok(r.truncate(n.saturating_sub(3)))
}

/// `Δ²y + ([c]/(γx) − (αβ + β[a] + α[b] − ε[c])/(γ(1−εx)))Δy − [a][b]/(γx(1−εx)) y`,
/// i.e. `e1q_residual` divided by `γx(1−εx)`.
pub fn e2q_residual(y: &QSeries, qp: &QParam) -> Result<QSeries> {
    let (a, b, c) = (qp.bracket(&qp.alpha), qp.bracket(&qp.beta), qp.bracket(&qp.gamma));
    let eps = qp.epsilon();
    let n = y.order();
    let dy = y.delta(qp)?;
    let d2y = dy.delta(qp)?;
    let inv_1_eps = QSeries::from_poly(&RatPoly::new(vec![Rational::one(), -eps.clone()]), n).inv()?;
    let k = (&qp.alpha * &qp.beta + &qp.beta * &a + &qp.alpha * &b - &eps * &c) / &qp.gamma;
    let t1 = dy.shift(0, -1).scale(&(&c / &qp.gamma));
    let t2 = inv_1_eps.mul(&dy).scale(&k);
    let t3 = inv_1_eps.mul(y).shift(0, -1).scale(&(&a * &b / &qp.gamma));
    let r = d2y.add(&t1)?.sub(&t2)?.sub(&t3)?;
    Ok(r.truncate(n.saturating_sub(3)))
}

/// Residual of the canonical difference equation with `φ(x) = x^c φ_ε(x)`:
/// `Δ φ Δ y + (1−q)[a][b] φ/(1−x) Δy − [a][b] φ/(x(1−x)) y`.
pub fn q_canonical_residual(y: &QSeries, qp: &QParam) -> Result<QSeries> {
    let n = y.order();
    let (a, b) = (qp.bracket(&qp.alpha), qp.bracket(&qp.beta));
    let ab = &a * &b;
    let phi = phi_alpha_series(&qp.epsilon(), &qp.q, n)?.shift(1, 0);
    let phi_over = phi.mul(&geometric(n));
    let dy = y.delta(qp)?;
    let t1 = phi.mul(&dy).delta(qp)?;
    let t2 = phi_over.mul(&dy).scale(&((Rational::one() - &qp.q) * &ab));
    let t3 = phi_over.mul(y).shift(0, -1).scale(&ab);
    let r = t1.add(&t2)?.sub(&t3)?.normalize();
    Ok(r.truncate(n.saturating_sub(3)))
}

/// Coefficient comparison of a two-sided identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QCheck {
    pub order: usize,
    pub first_mismatch: Option<usize>,
}

impl QCheck {
    pub fn pass(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// `φ_σ(x) ₂φ₁(α, β; γ; x) = ₂φ₁(γ/α, γ/β; γ; σx)` with `σ = αβ/γ`.
pub fn verify_heine(qp: &QParam, n: usize) -> Result<QCheck> {
    let sigma = qp.sigma();
    let lhs = phi_alpha_series(&sigma, &qp.q, n)?.mul(&q2phi1_series(qp, n)?);
    let rhs = q2phi1_with(&(&qp.gamma / &qp.alpha), &(&qp.gamma / &qp.beta), &qp.gamma, &qp.q, n)?
        .dilate(&Dilation::plain(sigma))?;
    Ok(QCheck {
        order: n,
        first_mismatch: lhs.first_mismatch(&rhs)?,
    })
}

/// Canonical `q`-operator with shifted coefficient series:
/// `Δ x^c φ_{ε}(x) Δ + (1−q) A x^c φ_{ε/q}(qx) Δ − A x^{c−1} φ_{ε/q}(qx)`.
struct QCanonical {
    eps: Rational,
    ab: Rational,
}

impl QCanonical {
    fn apply(&self, y: &QSeries, qp: &QParam) -> Result<QSeries> {
        let n = y.order() + 2;
        let phi = phi_alpha_series(&self.eps, &qp.q, n)?.shift(1, 0);
        let shifted = phi_alpha_series(&(&self.eps / &qp.q), &qp.q, n)?.dilate(&qp.dil_q())?.shift(1, 0);
        let dy = y.delta(qp)?;
        let t1 = phi.mul(&dy).delta(qp)?;
        let t2 = shifted.mul(&dy).scale(&((Rational::one() - &qp.q) * &self.ab));
        let t3 = shifted.mul(y).shift(0, -1).scale(&self.ab);
        t1.add(&t2)?.sub(&t3)
    }
}

/// `σ^{2−c} φ_σ(qx) σ^δ D₁ σ^{−δ} φ_σ(x) = D₂` applied to `x^{c+n}`, `n = 0..=probes`.
pub fn e11_check(qp: &QParam, probes: usize, order: usize) -> Result<QCheck> {
    if qp.lattice.is_none() {
        return Err(Error::NeedsExponents("the conjugation check needs exponent data for sigma^c".into()));
    }
    let sig = qp.dil_sigma()?;
    let sigma = sig.value.clone();
    let sigma_c = sig.c_power.clone().expect("lattice gives sigma^c");
    let c_minus_a = qp.bracket(&(&qp.gamma / &qp.alpha));
    let c_minus_b = qp.bracket(&(&qp.gamma / &qp.beta));
    let d1 = QCanonical {
        eps: &qp.q / &sigma,
        ab: c_minus_a * c_minus_b,
    };
    let d2 = QCanonical {
        eps: &qp.q * &sigma,
        ab: qp.bracket(&qp.alpha) * qp.bracket(&qp.beta),
    };
    let n = order + 4;
    let phi_s = phi_alpha_series(&sigma, &qp.q, n)?;
    let phi_s_q = phi_s.dilate(&qp.dil_q())?;
    let scalar = &sigma * &sigma / &sigma_c;
    for p in 0..=probes {
        let probe = QSeries::monomial(1, p as i64, n);
        let inner = phi_s.mul(&probe).dilate(&sig.inv())?;
        let lhs = phi_s_q.mul(&d1.apply(&inner, qp)?.dilate(&sig)?).scale(&scalar);
        let rhs = d2.apply(&probe, qp)?;
        let lhs = lhs.truncate(order);
        let rhs = rhs.truncate(order);
        if let Some(i) = lhs.first_mismatch(&rhs)? {
            return Ok(QCheck {
                order,
                first_mismatch: Some(p * (order + 1) + i),
            });
        }
    }
    Ok(QCheck {
        order,
        first_mismatch: None,
    })
}
