//! Factorization of small rational polynomials.
//!
//! Squarefree decomposition, rational-root extraction, then an exhaustive
//! Kronecker search for factors of degree two to four. Inputs are limited to
//! degree eight, which keeps the search bounded.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{Poly, RatPoly};
use crate::{Error, Rational, Result};

pub const MAX_FACTOR_DEGREE: usize = 8;

/// `unit * Π factor^multiplicity`, factors primitive, irreducible and sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Rational,
    pub factors: Vec<(RatPoly, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> RatPoly {
        self.factors
            .iter()
            .fold(RatPoly::constant(self.unit.clone()), |acc, (f, m)| acc.mul(&f.pow(*m as usize)))
    }

    /// Factors rendered as `"(1-x)^2"`-style strings, sorted.
    pub fn to_strings(&self) -> Vec<String> {
        let mut v: Vec<String> = self
            .factors
            .iter()
            .map(|(f, m)| if *m == 1 { format!("({})", f) } else { format!("({})^{}", f, m) })
            .collect();
        v.sort();
        v
    }
}

/// Factor a parameter-free polynomial of degree at most eight over the rationals.
pub fn factor_small(p: &Poly) -> Result<Factorization> {
    factor_rational(&p.to_rational()?)
}

pub fn factor_rational(p: &RatPoly) -> Result<Factorization> {
    let deg = match p.degree() {
        None => {
            return Ok(Factorization {
                unit: Rational::zero(),
                factors: vec![],
            })
        }
        Some(d) => d,
    };
    if deg > MAX_FACTOR_DEGREE {
        return Err(Error::FactorDegreeExceeded(deg));
    }
    let (_, prim) = p.primitive();
    let mut factors: Vec<(RatPoly, u32)> = Vec::new();

    let mut rest = prim;
    let low = rest.coeffs().iter().take_while(|c| c.is_zero()).count();
    if low > 0 {
        factors.push((RatPoly::x(), low as u32));
        rest = RatPoly::new(rest.coeffs()[low..].to_vec());
    }

    for (sqf, mult) in squarefree(&rest) {
        for f in split_squarefree(&sqf) {
            factors.push((f, mult));
        }
    }
    factors.sort_by(|(a, ma), (b, mb)| {
        a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)).then(ma.cmp(mb))
    });

    let expanded = factors
        .iter()
        .fold(RatPoly::one(), |acc, (f, m)| acc.mul(&f.pow(*m as usize)));
    let unit = p.leading() / expanded.leading();
    debug_assert_eq!(expanded.scale(&unit), *p);
    Ok(Factorization { unit, factors })
}

/// Yun's squarefree decomposition; parts of positive degree only.
fn squarefree(f: &RatPoly) -> Vec<(RatPoly, u32)> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let df = f.derivative();
    let mut a = f.gcd(&df);
    let mut b = f.div_exact(&a).expect("gcd divides");
    let mut c = df.div_exact(&a).expect("gcd divides");
    let mut d = c.sub(&b.derivative());
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        a = b.gcd(&d);
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.primitive().1, i));
        }
        b = b.div_exact(&a).expect("gcd divides");
        c = d.div_exact(&a).expect("gcd divides");
        d = c.sub(&b.derivative());
        i += 1;
    }
    out
}

/// Irreducible factors of a squarefree primitive polynomial.
fn split_squarefree(f: &RatPoly) -> Vec<RatPoly> {
    let mut out = Vec::new();
    let mut rest = f.primitive().1;
    for root in rational_roots(&rest) {
        // q x - p, normalized
        let lin = RatPoly::new(vec![-Rational::from_integer(root.numer().clone()), Rational::from_integer(root.denom().clone())]);
        let lin = lin.primitive().1;
        rest = rest.div_exact(&lin).expect("root gives a factor").primitive().1;
        out.push(lin);
    }
    let mut stack = vec![rest];
    while let Some(g) = stack.pop() {
        match g.degree() {
            None | Some(0) => {}
            Some(d) if d <= 3 => out.push(g),
            Some(_) => match kronecker_factor(&g) {
                Some(h) => {
                    let q = g.div_exact(&h).expect("factor divides").primitive().1;
                    stack.push(h.primitive().1);
                    stack.push(q);
                }
                None => out.push(g),
            },
        }
    }
    out
}

fn to_ints(p: &RatPoly) -> Vec<BigInt> {
    p.coeffs().iter().map(|c| c.to_integer()).collect()
}

fn rational_roots(p: &RatPoly) -> Vec<Rational> {
    let ints = to_ints(p);
    if ints.is_empty() || ints[0].is_zero() {
        return vec![];
    }
    let a0 = ints[0].abs();
    let an = ints.last().unwrap().abs();
    let (Some(a0), Some(an)) = (a0.to_u64(), an.to_u64()) else {
        return vec![];
    };
    let mut roots = Vec::new();
    for num in divisors(a0) {
        for den in divisors(an) {
            if num.gcd(&den) != 1 {
                continue;
            }
            for sign in [1i64, -1] {
                let r = Rational::new(BigInt::from(num) * sign, BigInt::from(den));
                if p.eval(&r).is_zero() {
                    roots.push(r);
                }
            }
        }
    }
    roots.sort();
    roots
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Search for a factor of degree `2..=deg/2` by interpolating through
/// divisors of the values at well-chosen integer points.
fn kronecker_factor(g: &RatPoly) -> Option<RatPoly> {
    let n = g.degree()?;
    let ints = to_ints(g);
    let lc = ints.last()?.abs();
    let c0 = ints[0].abs();

    // Candidate points ordered by the number of divisors of |g(x)|.
    let mut points: Vec<(usize, i64, Vec<u64>)> = Vec::new();
    for x in -12i64..=12 {
        let v = g.eval(&Rational::from_integer(x.into()));
        if v.is_zero() {
            continue;
        }
        let Some(av) = v.to_integer().abs().to_u64() else {
            continue;
        };
        if av > 1_000_000_000_000 {
            continue;
        }
        let ds = divisors(av);
        points.push((ds.len(), x, ds));
    }
    points.sort_by_key(|(cnt, x, _)| (*cnt, x.abs()));

    for d in 2..=n / 2 {
        if points.len() < d + 1 {
            return None;
        }
        let chosen = &points[..d + 1];
        let xs: Vec<Rational> = chosen.iter().map(|(_, x, _)| Rational::from_integer((*x).into())).collect();
        let choices: Vec<Vec<BigInt>> = chosen
            .iter()
            .enumerate()
            .map(|(i, (_, _, ds))| {
                let mut v: Vec<BigInt> = ds.iter().map(|&k| BigInt::from(k)).collect();
                if i > 0 {
                    let neg: Vec<BigInt> = v.iter().map(|k| -k).collect();
                    v.extend(neg);
                }
                v
            })
            .collect();
        let mut idx = vec![0usize; d + 1];
        loop {
            let ys: Vec<Rational> = idx
                .iter()
                .enumerate()
                .map(|(i, &j)| Rational::from_integer(choices[i][j].clone()))
                .collect();
            if let Some(h) = interpolate(&xs, &ys) {
                if h.degree() == Some(d) && h.coeffs().iter().all(|c| c.is_integer()) {
                    let hl = h.leading().to_integer().abs();
                    let h0 = h.coeff(0).to_integer().abs();
                    if !hl.is_zero()
                        && !h0.is_zero()
                        && (&lc % &hl).is_zero()
                        && (&c0 % &h0).is_zero()
                        && g.div_exact(&h).is_some()
                    {
                        return Some(h);
                    }
                }
            }
            // odometer
            let mut k = 0;
            loop {
                if k == idx.len() {
                    break;
                }
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    None
}

/// Newton interpolation through `(xs[i], ys[i])`.
fn interpolate(xs: &[Rational], ys: &[Rational]) -> Option<RatPoly> {
    let n = xs.len();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let den = &xs[i] - &xs[i - j];
            if den.is_zero() {
                return None;
            }
            coef[i] = (&coef[i] - &coef[i - 1]) / den;
        }
    }
    let mut p = RatPoly::constant(coef[n - 1].clone());
    for i in (0..n - 1).rev() {
        p = p.mul(&RatPoly::new(vec![-xs[i].clone(), Rational::one()]));
        p = p.add(&RatPoly::constant(coef[i].clone()));
    }
    Some(p)
}
