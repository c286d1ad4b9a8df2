//! The formula registry: every transformation encoded as data.

use std::fmt;
use std::path::Path;

use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::diffop::{ExpansionPoint, RationalMap};
use crate::multivar::Emo;
use crate::symcore::{ParamExpr, PowerProduct, RatPoly};
use crate::{Error, Rational, Result};

/// Rationals in JSON: integers as numbers, fractions as `"p/q"` strings.
pub mod rat_json {
    use super::*;

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(i64),
        Str(String),
    }

    fn to_repr(r: &Rational) -> Repr {
        match (r.is_integer(), num_traits::ToPrimitive::to_i64(&r.to_integer())) {
            (true, Some(i)) => Repr::Int(i),
            _ => Repr::Str(r.to_string()),
        }
    }

    fn from_repr<E: serde::de::Error>(r: Repr) -> std::result::Result<Rational, E> {
        match r {
            Repr::Int(i) => Ok(Rational::from_integer(i.into())),
            Repr::Str(s) => crate::parse_rational(&s).map_err(E::custom),
        }
    }

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        to_repr(r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        from_repr(Repr::deserialize(d)?)
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
            v.iter().map(to_repr).collect::<Vec<_>>().serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
            Vec::<Repr>::deserialize(d)?.into_iter().map(from_repr).collect()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Gauss,
    Lauricella,
    Q,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Gauss => "gauss",
            Family::Lauricella => "lauricella",
            Family::Q => "q",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Expansion {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1")]
    One,
    #[serde(rename = "both")]
    Both,
}

impl Expansion {
    pub fn points(&self) -> Vec<ExpansionPoint> {
        match self {
            Expansion::Zero => vec![ExpansionPoint::Zero],
            Expansion::One => vec![ExpansionPoint::One],
            Expansion::Both => vec![ExpansionPoint::Zero, ExpansionPoint::One],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Function {
    F21,
    Fd,
    Q2phi1,
}

/// One factor `base(x)^exponent`; a constant base is a constant power.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorSpec {
    #[serde(with = "rat_json::vec")]
    pub base_coeffs: Vec<Rational>,
    pub exponent: ParamExpr,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerSpec {
    #[serde(with = "rat_json")]
    pub coeff: Rational,
    #[serde(default)]
    pub factors: Vec<FactorSpec>,
}

impl PowerSpec {
    pub fn one() -> Self {
        PowerSpec {
            coeff: Rational::one(),
            factors: vec![],
        }
    }

    pub fn to_power_product(&self) -> Result<PowerProduct> {
        let mut pp = PowerProduct::rational(self.coeff.clone());
        for f in &self.factors {
            let base = RatPoly::new(f.base_coeffs.clone());
            let term = match base.degree() {
                None => return Err(Error::Registry("zero base in a power product".into())),
                Some(0) => PowerProduct::const_pow(&base.coeff(0), f.exponent.clone()),
                Some(_) => PowerProduct::base_pow(&base, f.exponent.clone())?,
            };
            pp = pp.mul(&term);
        }
        Ok(pp)
    }

    pub fn is_one(&self) -> bool {
        self.coeff.is_one() && self.factors.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapSpec {
    #[serde(with = "rat_json::vec")]
    pub num_coeffs: Vec<Rational>,
    #[serde(with = "rat_json::vec")]
    pub den_coeffs: Vec<Rational>,
}

impl MapSpec {
    pub fn to_map(&self, tag: &str) -> Result<RationalMap> {
        RationalMap::new(RatPoly::new(self.num_coeffs.clone()), RatPoly::new(self.den_coeffs.clone()), tag)
    }
}

/// One side: `prefactor · function(params; map(x))`.
///
/// For the q family the parameters are exponents (`α = q^a`), `phi` is an
/// optional prefactor `φ_{q^e}(x)` and `arg_scale` an optional argument
/// dilation `x ↦ q^e x`; each exponent must have integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideSpec {
    pub function: Function,
    pub params: Vec<ParamExpr>,
    pub map: Option<MapSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prefactor: Option<PowerSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<ParamExpr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arg_scale: Option<ParamExpr>,
}

impl SideSpec {
    pub fn gauss_params(&self) -> Result<[ParamExpr; 3]> {
        <[ParamExpr; 3]>::try_from(self.params.clone()).map_err(|_| Error::Registry("a 2F1 side needs three parameters".into()))
    }

    pub fn prefactor_pp(&self) -> Result<PowerProduct> {
        match &self.prefactor {
            Some(p) => p.to_power_product(),
            None => Ok(PowerProduct::one()),
        }
    }
}

/// Scalar `C` in `h·left = C·right` at one expansion point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchConstant {
    pub point: ExpansionPoint,
    #[serde(with = "rat_json")]
    pub value: Rational,
}

/// `h · left = C · right`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaSpec {
    pub id: String,
    pub citation: String,
    pub family: Family,
    pub expansion: Expansion,
    pub h: PowerSpec,
    pub left: SideSpec,
    pub right: SideSpec,
    #[serde(default)]
    pub constants: Vec<BranchConstant>,
    /// Argument construction for the multivariable entries.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<Emo>,
}

impl FormulaSpec {
    pub fn constant_at(&self, p: ExpansionPoint) -> Rational {
        self.constants
            .iter()
            .find(|c| c.point == p)
            .map(|c| c.value.clone())
            .unwrap_or_else(Rational::one)
    }

    pub fn h_pp(&self) -> Result<PowerProduct> {
        self.h.to_power_product()
    }

    /// The conjugating factor once the right prefactor is moved to the left.
    pub fn h_effective(&self) -> Result<PowerProduct> {
        self.h_pp()?.div(&self.right.prefactor_pp()?)
    }

    pub fn left_map(&self) -> Result<RationalMap> {
        side_map(&self.left, "left")
    }

    pub fn right_map(&self) -> Result<RationalMap> {
        side_map(&self.right, "right")
    }

    /// Exponents `{a, b, c, const}` appearing anywhere in the entry must be
    /// instantiable; returns every lower-slot parameter of the Gauss sides.
    pub fn lower_params(&self) -> Vec<ParamExpr> {
        let mut out = Vec::new();
        for s in [&self.left, &self.right] {
            if let Some(c) = s.params.last() {
                out.push(c.clone());
            }
        }
        out
    }
}

fn side_map(s: &SideSpec, tag: &str) -> Result<RationalMap> {
    match &s.map {
        Some(m) => m.to_map(tag),
        None => Ok(RationalMap::identity()),
    }
}

/// Ordered set of formulas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Registry {
    entries: Vec<FormulaSpec>,
}

impl Registry {
    pub fn new(entries: Vec<FormulaSpec>) -> Result<Self> {
        for (i, e) in entries.iter().enumerate() {
            if entries[..i].iter().any(|o| o.id == e.id) {
                return Err(Error::Registry(format!("duplicate id {}", e.id)));
            }
        }
        Ok(Registry { entries })
    }

    pub fn builtin() -> Self {
        Registry { entries: builtin_entries() }
    }

    pub fn entries(&self) -> &[FormulaSpec] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: &str) -> Result<&FormulaSpec> {
        self.entries.iter().find(|e| e.id == id).ok_or_else(|| Error::UnknownFormula(id.to_string()))
    }

    /// `(id, citation, family)` rows.
    pub fn list(&self) -> Vec<(String, String, Family)> {
        self.entries.iter().map(|e| (e.id.clone(), e.citation.clone(), e.family)).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.entries).expect("registry serializes")
    }

    /// Whitespace-only input is an empty registry.
    pub fn from_json(src: &str) -> Result<Self> {
        if src.trim().is_empty() {
            return Ok(Registry { entries: vec![] });
        }
        let entries: Vec<FormulaSpec> = serde_json::from_str(src).map_err(|e| Error::Registry(e.to_string()))?;
        Registry::new(entries)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let src = std::fs::read_to_string(path).map_err(|e| Error::Registry(format!("{}: {}", path.display(), e)))?;
        Registry::from_json(&src)
    }
}

pub fn get(id: &str) -> Result<FormulaSpec> {
    Registry::builtin().get(id).cloned()
}

pub fn list() -> Vec<(String, String, Family)> {
    Registry::builtin().list()
}

fn pe(s: &str) -> ParamExpr {
    s.parse().expect("built-in parameter expression")
}

fn ints(cs: &[i64]) -> Vec<Rational> {
    cs.iter().map(|&c| Rational::from_integer(c.into())).collect()
}

fn power(coeff: Rational, factors: &[(&[i64], &str)]) -> PowerSpec {
    PowerSpec {
        coeff,
        factors: factors
            .iter()
            .map(|(b, e)| FactorSpec {
                base_coeffs: ints(b),
                exponent: pe(e),
            })
            .collect(),
    }
}

fn f21(params: [&str; 3], map: Option<(&[i64], &[i64])>) -> SideSpec {
    SideSpec {
        function: Function::F21,
        params: params.iter().map(|p| pe(p)).collect(),
        map: map.map(|(n, d)| MapSpec {
            num_coeffs: ints(n),
            den_coeffs: ints(d),
        }),
        prefactor: None,
        phi: None,
        arg_scale: None,
    }
}

fn gauss(id: &str, citation: &str, h: &[(&[i64], &str)], left: SideSpec, right: SideSpec) -> FormulaSpec {
    FormulaSpec {
        id: id.into(),
        citation: citation.into(),
        family: Family::Gauss,
        expansion: Expansion::Zero,
        h: power(Rational::one(), h),
        left,
        right,
        constants: vec![],
        construction: None,
    }
}

const X: (&[i64], &[i64]) = (&[0, 1], &[1]);

fn builtin_entries() -> Vec<FormulaSpec> {
    let goursat_map: (&[i64], &[i64]) = (&[0, 64, -192, 192, -64], &[1, 24, 192, 512]);
    let goursat_right = f21(["a/3", "(a+1)/3", "(4a+5)/6"], Some(goursat_map));
    let mut v = vec![
        gauss(
            "tle",
            "Euler transformation",
            &[(&[1, -1], "a+b-c")],
            f21(["a", "b", "c"], Some(X)),
            f21(["c-a", "c-b", "c"], Some(X)),
        ),
        gauss(
            "tlp",
            "Pfaff transformation, argument x/(x-1)",
            &[(&[1, -1], "a")],
            f21(["a", "b", "c"], Some(X)),
            f21(["a", "c-b", "c"], Some((&[0, 1], &[-1, 1]))),
        ),
        gauss(
            "t2+",
            "quadratic transformation, argument 1-((1-x)/(1+x))^2",
            &[(&[1, 1], "a")],
            f21(["a/2", "(a-b+1)/2", "(b+1)/2"], Some((&[0, 0, 1], &[1]))),
            f21(["a/2", "b/2", "b"], Some((&[0, 4], &[1, 2, 1]))),
        ),
        gauss(
            "t3+",
            "cubic transformation with prefactor (1+2x)^a",
            &[(&[1, 2], "a")],
            f21(["a/3", "(a+1)/3", "(a+5)/6"], Some((&[0, 0, 0, 1], &[1]))),
            f21(["a/3", "(a+1)/3", "(a+1)/2"], Some((&[0, 9, 9, 9], &[1, 6, 12, 8]))),
        ),
        gauss(
            "t4+",
            "quartic-type transformation with prefactor (1+3x)^(a/2)",
            &[(&[1, 3], "a/2")],
            f21(["a/4", "(a+2)/4", "(a+5)/6"], Some((&[0, 0, 1], &[1]))),
            f21(["a/4", "(a+2)/4", "(a+2)/3"], Some((&[0, 8, 8], &[1, 6, 9]))),
        ),
        gauss(
            "tk",
            "quadratic transformation, argument 1-(1-x)/(1+x)",
            &[(&[1, 1], "a")],
            f21(["a/2", "(a+1)/2", "b+1/2"], Some((&[0, 0, 1], &[1]))),
            f21(["a", "b", "2b"], Some((&[0, 2], &[1, 1]))),
        ),
        gauss(
            "tr",
            "quadratic transformation with prefactor (1+x)^a, lower parameter a-b+1",
            &[(&[1, 1], "a")],
            f21(["a", "b", "a-b+1"], Some(X)),
            f21(["a/2", "(a+1)/2", "a-b+1"], Some((&[0, 4], &[1, 2, 1]))),
        ),
        gauss(
            "t8",
            "quadratic transformation, argument 1-(1-2x)^2",
            &[],
            f21(["a", "b", "(a+b+1)/2"], Some(X)),
            f21(["a/2", "b/2", "(a+b+1)/2"], Some((&[0, 4, -4], &[1]))),
        ),
        gauss(
            "t9",
            "quadratic transformation at argument -x",
            &[(&[1, 1], "a")],
            f21(["a", "(a-b+1)/2", "(a+b+1)/2"], Some((&[0, -1], &[1]))),
            f21(["a/2", "b/2", "(a+b+1)/2"], Some((&[0, 4], &[1, 2, 1]))),
        ),
        gauss(
            "tg1",
            "degree-4 Goursat transformation, argument 64x((1-x)/(1+8x))^3, at 0",
            &[(&[1, 8], "a")],
            f21(["4a/3", "(4a+1)/3", "(4a+5)/6"], Some(X)),
            goursat_right.clone(),
        ),
    ];
    let mut tg2 = gauss(
        "tg2",
        "degree-4 Goursat transformation, argument 64x((1-x)/(1+8x))^3, at 1",
        &[(&[1, 8], "a"), (&[9], "-a")],
        f21(["4a/3", "(4a+1)/3", "(4a+1)/2"], Some((&[1, -1], &[1]))),
        goursat_right,
    );
    tg2.expansion = Expansion::One;
    v.push(tg2);
    let mut t32 = gauss(
        "t3.2",
        "degree-3/degree-4 transformation with branch constants C=1 at 0, C=3 at 1",
        &[(&[1, 80], "1/4")],
        f21(["1/12", "5/12", "1"], Some((&[0, 0, 0, 64, -64], &[1, 8]))),
        f21(
            ["1/12", "5/12", "1"],
            Some((&[0, 576, -1728, 1728, -576], &[1, 248, 21120, 665600, 4096000])),
        ),
    );
    t32.expansion = Expansion::Both;
    t32.constants = vec![
        BranchConstant {
            point: ExpansionPoint::Zero,
            value: Rational::one(),
        },
        BranchConstant {
            point: ExpansionPoint::One,
            value: Rational::from_integer(3.into()),
        },
    ];
    v.push(t32);
    v.push(gauss(
        "t41",
        "quartic transformation, argument 1-((1-x)/(1+x))^4",
        &[(&[1, 1], "2a")],
        f21(["a/2", "(2a+1)/6", "(a+5)/6"], Some((&[0, 0, 0, 0, 1], &[1]))),
        f21(["a/2", "(2a+1)/6", "(2a+1)/3"], Some((&[0, 8, 0, 8], &[1, 4, 6, 4, 1]))),
    ));
    v.push(gauss(
        "t10",
        "quartic transformation at argument -x^2",
        &[(&[1, 1], "a")],
        f21(["a/2", "(a+1)/4", "(a+3)/4"], Some((&[0, 0, -1], &[1]))),
        f21(["a/4", "(a+1)/4", "(a+1)/2"], Some((&[0, 8, 0, 8], &[1, 4, 6, 4, 1]))),
    ));
    v.push(lauricella(
        "emo1",
        "two-variable F_D transformation with cube-root-of-unity arguments",
        Emo::Emo1,
        "a",
        &["a/3", "(a+1)/6", "(a+1)/6", "(a+5)/6"],
        &["a/3", "(a+1)/6", "(a+1)/6", "(a+1)/2"],
    ));
    v.push(lauricella(
        "emo2",
        "three-variable F_D transformation with quadratic arguments",
        Emo::Emo2,
        "a/2",
        &["a/4", "(a+2)/12", "(a+2)/12", "(a+2)/12", "(a+5)/6"],
        &["a/4", "(a+2)/12", "(a+2)/12", "(a+2)/12", "(a+2)/3"],
    ));
    v.push(FormulaSpec {
        id: "teq".into(),
        citation: "Heine transformation of 2phi1".into(),
        family: Family::Q,
        expansion: Expansion::Zero,
        h: PowerSpec::one(),
        left: SideSpec {
            function: Function::Q2phi1,
            params: vec![pe("a"), pe("b"), pe("c")],
            map: None,
            prefactor: None,
            phi: Some(pe("a+b-c")),
            arg_scale: None,
        },
        right: SideSpec {
            function: Function::Q2phi1,
            params: vec![pe("c-a"), pe("c-b"), pe("c")],
            map: None,
            prefactor: None,
            phi: None,
            arg_scale: Some(pe("a+b-c")),
        },
        constants: vec![],
        construction: None,
    });
    v
}

fn lauricella(id: &str, citation: &str, which: Emo, h_exp: &str, left: &[&str], right: &[&str]) -> FormulaSpec {
    let side = |ps: &[&str]| SideSpec {
        function: Function::Fd,
        params: ps.iter().map(|p| pe(p)).collect(),
        map: None,
        prefactor: None,
        phi: None,
        arg_scale: None,
    };
    FormulaSpec {
        id: id.into(),
        citation: citation.into(),
        family: Family::Lauricella,
        expansion: Expansion::Zero,
        h: PowerSpec {
            coeff: Rational::one(),
            factors: vec![FactorSpec {
                base_coeffs: ints(&[1, 1]),
                exponent: pe(h_exp),
            }],
        },
        left: side(left),
        right: side(right),
        constants: vec![],
        construction: Some(which),
    }
}

/// The coefficient form of `1 − z` as a power product, for maps and their factorizations.
pub fn one_minus_factorization(spec: &FormulaSpec) -> Result<Vec<PowerProduct>> {
    let mut out = Vec::new();
    for m in [spec.left_map()?, spec.right_map()?] {
        out.push(m.one_minus()?);
    }
    Ok(out)
}
