//! Parameter expressions: affine forms and rational functions in `a`, `b`, `c`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::mpoly::MPoly;
use crate::{Error, Rational, Result};

/// An affine expression `ka*a + kb*b + kc*c + k0` with rational coefficients.
///
/// Used for every symbolic exponent and for hypergeometric parameter slots.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ParamExpr {
    coeffs: [Rational; 3],
    constant: Rational,
}

impl ParamExpr {
    pub fn new(coeffs: [Rational; 3], constant: Rational) -> Self {
        ParamExpr { coeffs, constant }
    }

    pub fn zero() -> Self {
        ParamExpr::default()
    }

    pub fn constant(r: Rational) -> Self {
        ParamExpr {
            coeffs: Default::default(),
            constant: r,
        }
    }

    pub fn int(n: i64) -> Self {
        ParamExpr::constant(Rational::from_integer(n.into()))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        ParamExpr::constant(Rational::new(n.into(), d.into()))
    }

    pub fn a() -> Self {
        ParamExpr::symbol(0)
    }

    pub fn b() -> Self {
        ParamExpr::symbol(1)
    }

    pub fn c() -> Self {
        ParamExpr::symbol(2)
    }

    pub fn symbol(i: usize) -> Self {
        let mut e = ParamExpr::zero();
        e.coeffs[i] = Rational::one();
        e
    }

    /// `e = 1 + a + b - c`.
    pub fn e() -> Self {
        ParamExpr::int(1) + ParamExpr::a() + ParamExpr::b() - ParamExpr::c()
    }

    pub fn coeffs(&self) -> &[Rational; 3] {
        &self.coeffs
    }

    pub fn constant_part(&self) -> &Rational {
        &self.constant
    }

    pub fn is_zero(&self) -> bool {
        self.is_constant() && self.constant.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The integer value, when the expression is an integer constant.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.is_constant() && self.constant.is_integer() {
            Some(self.constant.to_integer())
        } else {
            None
        }
    }

    pub fn as_constant(&self) -> Option<&Rational> {
        self.is_constant().then_some(&self.constant)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        ParamExpr {
            coeffs: [&self.coeffs[0] * r, &self.coeffs[1] * r, &self.coeffs[2] * r],
            constant: &self.constant * r,
        }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&Rational::from_integer(n.into()))
    }

    pub fn eval(&self, point: &[Rational; 3]) -> Rational {
        let mut acc = self.constant.clone();
        for i in 0..3 {
            acc += &self.coeffs[i] * &point[i];
        }
        acc
    }

    /// Substitute an affine expression for each symbol.
    pub fn substitute(&self, images: &[ParamExpr; 3]) -> ParamExpr {
        let mut acc = ParamExpr::constant(self.constant.clone());
        for i in 0..3 {
            acc = acc + images[i].scale(&self.coeffs[i]);
        }
        acc
    }

    /// Split into `(integer part of the constant, remainder)` with the remainder's
    /// constant in `[0, 1)`.
    pub fn split_integer(&self) -> (BigInt, ParamExpr) {
        let fl = self.constant.floor().to_integer();
        let rest = ParamExpr {
            coeffs: self.coeffs.clone(),
            constant: &self.constant - Rational::from_integer(fl.clone()),
        };
        (fl, rest)
    }

    /// `Some(k)` when `self - other` is the integer constant `k`.
    pub fn integer_difference(&self, other: &ParamExpr) -> Option<BigInt> {
        (self.clone() - other.clone()).as_integer()
    }

    pub fn to_param_rat(&self) -> ParamRat {
        let mut p = MPoly::constant(self.constant.clone());
        for i in 0..3 {
            p = p.add(&MPoly::var(i).scale(&self.coeffs[i]));
        }
        ParamRat::from_poly(p)
    }
}

impl Add for ParamExpr {
    type Output = ParamExpr;
    fn add(self, o: ParamExpr) -> ParamExpr {
        ParamExpr {
            coeffs: [
                &self.coeffs[0] + &o.coeffs[0],
                &self.coeffs[1] + &o.coeffs[1],
                &self.coeffs[2] + &o.coeffs[2],
            ],
            constant: self.constant + o.constant,
        }
    }
}

impl Sub for ParamExpr {
    type Output = ParamExpr;
    fn sub(self, o: ParamExpr) -> ParamExpr {
        self + (-o)
    }
}

impl Neg for ParamExpr {
    type Output = ParamExpr;
    fn neg(self) -> ParamExpr {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for ParamExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Written over a common denominator, e.g. (a+b+1)/2.
        let mut den = self.constant.denom().clone();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let scale = Rational::from_integer(den.clone());
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let n = (c * &scale).to_integer();
            push_signed(&mut out, &n, Some(super::mpoly::SYMBOLS[i]));
        }
        let k = (&self.constant * &scale).to_integer();
        if !k.is_zero() || out.is_empty() {
            push_signed(&mut out, &k, None);
        }
        if den.is_one() {
            write!(f, "{}", out)
        } else if out.chars().skip(1).any(|ch| ch == '+' || ch == '-') {
            write!(f, "({})/{}", out, den)
        } else {
            write!(f, "{}/{}", out, den)
        }
    }
}

fn push_signed(out: &mut String, n: &BigInt, sym: Option<&str>) {
    if n.is_negative() {
        out.push('-');
    } else if !out.is_empty() {
        out.push('+');
    }
    let abs = n.abs();
    match sym {
        Some(s) if abs.is_one() => out.push_str(s),
        Some(s) => out.push_str(&format!("{}{}", abs, s)),
        None => out.push_str(&abs.to_string()),
    }
}

impl std::str::FromStr for ParamExpr {
    type Err = Error;

    /// Parses affine expressions such as `(a-b+1)/2`, `4a/3`, `c - a`.
    fn from_str(src: &str) -> Result<Self> {
        let toks: Vec<char> = src.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = ExprParser { toks: &toks, pos: 0, src };
        let e = p.expr()?;
        if p.pos != toks.len() {
            return Err(p.fail());
        }
        Ok(e)
    }
}

struct ExprParser<'s> {
    toks: &'s [char],
    pos: usize,
    src: &'s str,
}

impl ExprParser<'_> {
    fn fail(&self) -> Error {
        Error::BadParameter(format!("cannot parse parameter expression {:?}", self.src))
    }

    fn peek(&self) -> Option<char> {
        self.toks.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<ParamExpr> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if op == '+' { acc + t } else { acc - t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<ParamExpr> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('/') => {
                    self.pos += 1;
                    let d = self.factor()?;
                    let d = d.as_constant().filter(|d| !d.is_zero()).ok_or_else(|| self.fail())?.clone();
                    acc = acc.scale(&d.recip());
                }
                Some(ch) if ch == '*' || ch == '(' || ch.is_ascii_alphanumeric() => {
                    if ch == '*' {
                        self.pos += 1;
                    }
                    let f = self.factor()?;
                    acc = match (acc.as_constant().cloned(), f.as_constant().cloned()) {
                        (Some(k), _) => f.scale(&k),
                        (_, Some(k)) => acc.scale(&k),
                        _ => return Err(self.fail()),
                    };
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<ParamExpr> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.fail());
                }
                self.pos += 1;
                Ok(e)
            }
            Some(ch) if ch.is_ascii_digit() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let digits: String = self.toks[start..self.pos].iter().collect();
                let n: BigInt = digits.parse().map_err(|_| self.fail())?;
                Ok(ParamExpr::constant(Rational::from_integer(n)))
            }
            Some(ch) => {
                let i = super::mpoly::SYMBOLS.iter().position(|s| s.starts_with(ch) && s.len() == 1).ok_or_else(|| self.fail())?;
                self.pos += 1;
                Ok(ParamExpr::symbol(i))
            }
            None => Err(self.fail()),
        }
    }
}

impl fmt::Debug for ParamExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParamExpr({})", self)
    }
}

/// JSON form `{a, b, c, const}` with rationals written as `"p/q"` strings.
#[derive(Serialize, Deserialize)]
struct ParamExprJson {
    #[serde(default = "zero_str")]
    a: String,
    #[serde(default = "zero_str")]
    b: String,
    #[serde(default = "zero_str")]
    c: String,
    #[serde(rename = "const", default = "zero_str")]
    constant: String,
}

fn zero_str() -> String {
    "0".to_string()
}

impl Serialize for ParamExpr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ParamExprJson {
            a: self.coeffs[0].to_string(),
            b: self.coeffs[1].to_string(),
            c: self.coeffs[2].to_string(),
            constant: self.constant.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ParamExpr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = ParamExprJson::deserialize(d)?;
        let p = |s: &str| crate::parse_rational(s).map_err(serde::de::Error::custom);
        Ok(ParamExpr::new([p(&j.a)?, p(&j.b)?, p(&j.c)?], p(&j.constant)?))
    }
}

/// A rational function in `a`, `b`, `c`: reduced numerator over a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamRat {
    num: MPoly,
    den: MPoly,
}

impl Default for ParamRat {
    fn default() -> Self {
        ParamRat::zero()
    }
}

impl ParamRat {
    pub fn zero() -> Self {
        ParamRat {
            num: MPoly::zero(),
            den: MPoly::one(),
        }
    }

    pub fn one() -> Self {
        ParamRat::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        ParamRat {
            num: MPoly::constant(r),
            den: MPoly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        ParamRat::from_rational(Rational::from_integer(n.into()))
    }

    pub fn from_poly(p: MPoly) -> Self {
        ParamRat {
            num: p,
            den: MPoly::one(),
        }
    }

    pub fn new(num: MPoly, den: MPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(ParamRat::normalized(num, den))
    }

    fn normalized(num: MPoly, den: MPoly) -> Self {
        if num.is_zero() {
            return ParamRat::zero();
        }
        if let Some(d) = den.as_constant() {
            return ParamRat {
                num: num.scale(&d.recip()),
                den: MPoly::one(),
            };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let lc = den.leading_coeff().recip();
        ParamRat {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    pub fn numer(&self) -> &MPoly {
        &self.num
    }

    pub fn denom(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    pub fn add(&self, o: &ParamRat) -> ParamRat {
        if self.den.is_one() && o.den.is_one() {
            return ParamRat::from_poly(self.num.add(&o.num));
        }
        if self.den == o.den {
            return ParamRat::normalized(self.num.add(&o.num), self.den.clone());
        }
        ParamRat::normalized(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn neg(&self) -> ParamRat {
        ParamRat {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &ParamRat) -> ParamRat {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &ParamRat) -> ParamRat {
        if self.den.is_one() && o.den.is_one() {
            return ParamRat::from_poly(self.num.mul(&o.num));
        }
        ParamRat::normalized(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn scale(&self, r: &Rational) -> ParamRat {
        ParamRat {
            num: self.num.scale(r),
            den: if r.is_zero() { MPoly::one() } else { self.den.clone() },
        }
    }

    pub fn recip(&self) -> Result<ParamRat> {
        ParamRat::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &ParamRat) -> Result<ParamRat> {
        Ok(self.mul(&o.recip()?))
    }

    pub fn pow(&self, n: i64) -> Result<ParamRat> {
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let k = n.unsigned_abs() as u32;
        Ok(ParamRat {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    /// Evaluate at a rational point; `None` if the denominator vanishes there.
    pub fn eval(&self, point: &[Rational; 3]) -> Option<Rational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(point) / d)
    }
}

impl Mul for &ParamRat {
    type Output = ParamRat;
    fn mul(self, o: &ParamRat) -> ParamRat {
        ParamRat::mul(self, o)
    }
}

impl Add for &ParamRat {
    type Output = ParamRat;
    fn add(self, o: &ParamRat) -> ParamRat {
        ParamRat::add(self, o)
    }
}

impl From<&ParamExpr> for ParamRat {
    fn from(e: &ParamExpr) -> Self {
        e.to_param_rat()
    }
}

impl fmt::Display for ParamRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.num.to_string();
        let wrap = |s: String, single: bool| if single { s } else { format!("({})", s) };
        if self.den.is_one() {
            return write!(f, "{}", num);
        }
        let den = self.den.to_string();
        let n_single = self.num.terms().count() <= 1;
        let d_single = self.den.terms().count() <= 1;
        write!(f, "{}/{}", wrap(num, n_single), wrap(den, d_single))
    }
}

impl fmt::Debug for ParamRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParamRat({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn e_is_one_plus_a_plus_b_minus_c() {
        let e = ParamExpr::e();
        assert_eq!(e.eval(&[r(1, 2), r(1, 3), r(1, 5)]), r(1, 1) + r(1, 2) + r(1, 3) - r(1, 5));
        assert_eq!(e.to_string(), "a+b-c+1");
    }

    #[test]
    fn display_uses_common_denominator() {
        let e = (ParamExpr::a() + ParamExpr::b() + ParamExpr::int(1)).scale(&r(1, 2));
        assert_eq!(e.to_string(), "(a+b+1)/2");
        assert_eq!(ParamExpr::a().scale(&r(1, 3)).to_string(), "a/3");
        assert_eq!(ParamExpr::zero().to_string(), "0");
    }

    #[test]
    fn rational_functions_reduce() {
        // ab/c * c/(a) = b
        let ab = ParamExpr::a().to_param_rat().mul(&ParamExpr::b().to_param_rat());
        let c = ParamExpr::c().to_param_rat();
        let x = ab.div(&c).unwrap().mul(&c).div(&ParamExpr::a().to_param_rat()).unwrap();
        assert_eq!(x, ParamExpr::b().to_param_rat());
    }

    #[test]
    fn canonical_form_is_structural() {
        // (c-a)(c-b)/c written two ways
        let ca = (ParamExpr::c() - ParamExpr::a()).to_param_rat();
        let cb = (ParamExpr::c() - ParamExpr::b()).to_param_rat();
        let c = ParamExpr::c().to_param_rat();
        let lhs = ca.mul(&cb).div(&c).unwrap();
        let a = ParamExpr::a().to_param_rat();
        let b = ParamExpr::b().to_param_rat();
        // ab/c - (a+b) + c
        let rhs = a
            .mul(&b)
            .div(&c)
            .unwrap()
            .sub(&a.add(&b))
            .add(&c);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(ParamRat::one().div(&ParamRat::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn split_integer_keeps_fraction_in_unit_interval() {
        let e = ParamExpr::a() + ParamExpr::frac(-3, 2);
        let (k, rest) = e.split_integer();
        assert_eq!(k, BigInt::from(-2));
        assert_eq!(rest, ParamExpr::a() + ParamExpr::frac(1, 2));
    }
}
