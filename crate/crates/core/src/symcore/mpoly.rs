//! Sparse polynomials in the parameter symbols `a`, `b`, `c` over the rationals.
//!
//! Terms are keyed by exponent triples and ordered lexicographically with `a`
//! most significant, so the leading term is the last map entry.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::Rational;

pub(crate) type Exps = [u16; 3];

pub const SYMBOLS: [&str; 3] = ["a", "b", "c"];

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MPoly {
    terms: BTreeMap<Exps, Rational>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn one() -> Self {
        MPoly::constant(Rational::one())
    }

    pub fn constant(r: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert([0, 0, 0], r);
        }
        MPoly { terms }
    }

    /// The symbol with index `i` (0 = a, 1 = b, 2 = c).
    pub fn var(i: usize) -> Self {
        let mut e = [0u16; 3];
        e[i] = 1;
        MPoly::monomial(e, Rational::one())
    }

    pub(crate) fn monomial(e: Exps, r: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(e, r);
        }
        MPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&[0, 0, 0]).is_some_and(|c| c.is_one())
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&[0, 0, 0]).cloned(),
            _ => None,
        }
    }

    pub(crate) fn terms(&self) -> impl Iterator<Item = (&Exps, &Rational)> {
        self.terms.iter()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.terms
            .iter()
            .next_back()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    fn leading(&self) -> Option<(&Exps, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, c * r)).collect(),
        }
    }

    /// Scale so that the leading coefficient is one.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => MPoly::zero(),
            Some((_, lc)) => {
                let inv = lc.recip();
                self.scale(&inv)
            }
        }
    }

    fn add_term(&mut self, e: Exps, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]];
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> MPoly {
        let mut out = MPoly::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    pub fn eval(&self, point: &[Rational; 3]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t *= &point[i];
                }
            }
            acc += t;
        }
        acc
    }

    pub fn degree_in(&self, v: usize) -> u16 {
        self.terms.keys().map(|e| e[v]).max().unwrap_or(0)
    }

    /// Coefficient of `v^k`, as a polynomial with `v` eliminated.
    fn coeff_in(&self, v: usize, k: u16) -> MPoly {
        let mut out = MPoly::zero();
        for (e, c) in &self.terms {
            if e[v] == k {
                let mut e2 = *e;
                e2[v] = 0;
                out.add_term(e2, c.clone());
            }
        }
        out
    }

    fn shift(&self, v: usize, k: u16) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = *e;
                    e2[v] += k;
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        let (dl_e, dl_c) = d.leading()?;
        let (dl_e, dl_c) = (*dl_e, dl_c.clone());
        let mut rem = self.clone();
        let mut quot = MPoly::zero();
        while let Some((re, rc)) = rem.leading() {
            if (0..3).any(|i| re[i] < dl_e[i]) {
                return None;
            }
            let qe = [re[0] - dl_e[0], re[1] - dl_e[1], re[2] - dl_e[2]];
            let qc = rc / &dl_c;
            let t = MPoly::monomial(qe, qc);
            rem = rem.sub(&t.mul(d));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// Greatest common divisor, normalized to be monic. `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &MPoly) -> MPoly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        gcd_rec(self, other, 0).monic()
    }

    fn content_in(&self, v: usize) -> MPoly {
        let deg = self.degree_in(v);
        let mut g = MPoly::zero();
        for k in 0..=deg {
            let ck = self.coeff_in(v, k);
            if ck.is_zero() {
                continue;
            }
            g = if g.is_zero() {
                ck.monic()
            } else {
                gcd_rec(&g, &ck, v + 1).monic()
            };
            if g.as_constant().is_some() {
                return MPoly::one();
            }
        }
        g
    }

    fn primitive_in(&self, v: usize) -> MPoly {
        let c = self.content_in(v);
        self.div_exact(&c).expect("content divides")
    }

    /// Pseudo-remainder of `self` by `b` with respect to symbol `v`.
    fn prem(&self, b: &MPoly, v: usize) -> MPoly {
        let db = b.degree_in(v);
        let lb = b.coeff_in(v, db);
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(v) >= db {
            let dr = r.degree_in(v);
            let lr = r.coeff_in(v, dr);
            r = r.mul(&lb).sub(&lr.mul(&b.shift(v, dr - db)));
        }
        r
    }
}

fn gcd_rec(p: &MPoly, q: &MPoly, v: usize) -> MPoly {
    if p.is_zero() {
        return q.clone();
    }
    if q.is_zero() {
        return p.clone();
    }
    if v >= 3 {
        return MPoly::one();
    }
    if p.degree_in(v) == 0 && q.degree_in(v) == 0 {
        return gcd_rec(p, q, v + 1);
    }
    let cp = p.content_in(v);
    let cq = q.content_in(v);
    let g = gcd_rec(&cp, &cq, v + 1).monic();
    let mut a = p.div_exact(&cp).expect("content divides");
    let mut b = q.div_exact(&cq).expect("content divides");
    if a.degree_in(v) < b.degree_in(v) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        if b.degree_in(v) == 0 {
            // b is primitive in v and free of v, hence a unit of the recursion.
            return g;
        }
        let r = a.prem(&b, v);
        if r.is_zero() {
            break;
        }
        a = b;
        b = r.primitive_in(v);
    }
    g.mul(&b.primitive_in(v).monic())
}

fn fmt_rational_coeff(c: &Rational, first: bool, is_const: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let neg = c.is_negative();
    let abs = c.abs();
    if neg {
        write!(f, "-")?;
    } else if !first {
        write!(f, "+")?;
    }
    if is_const || !abs.is_one() {
        write!(f, "{}", abs)?;
        if !is_const {
            write!(f, "*")?;
        }
    }
    Ok(())
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let is_const = e.iter().all(|&k| k == 0);
            fmt_rational_coeff(c, i == 0, is_const, f)?;
            let mut first_sym = true;
            for (v, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if !first_sym {
                    write!(f, "*")?;
                }
                first_sym = false;
                write!(f, "{}", SYMBOLS[v])?;
                if k > 1 {
                    write!(f, "^{}", k)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({})", self)
    }
}
