//! Runs the symbolic and numeric legs over registry entries.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{Family, FormulaSpec, Registry, SideSpec};
use crate::diffop::{conjugation_check, gauss_operator, initial_values, substitute, ExpansionPoint, InitialValues, RationalMap};
use crate::multivar::{verify_emo_with, FdSide};
use crate::qcore::{phi_alpha_series, q2phi1_series, Dilation, QParam};
use crate::series::{f21_series, pp_series, TruncatedSeries};
use crate::symcore::{eq_oracle, ParamExpr, PowerProduct, PowerSum, RatPoly, DEFAULT_TRIALS};
use crate::{Error, Rational, Result};

/// Total degree used for the multivariable entries.
pub const LAURICELLA_ORDER: usize = 8;
/// Order used for the q entries.
pub const Q_ORDER: usize = 25;
pub const MIN_ORDER: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Proved,
    SeriesOnly,
    Failed,
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        !matches!(self, Verdict::Failed)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Proved => "proved",
            Verdict::SeriesOnly => "series_only",
            Verdict::Failed => "failed",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionSummary {
    pub pass: bool,
    pub structural: bool,
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InitialValueCheck {
    pub point: ExpansionPoint,
    pub pass: bool,
    pub left: Option<InitialValues>,
    pub right: Option<InitialValues>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymbolicReport {
    pub applicable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub lambda: Option<String>,
    pub f_condition: Option<ConditionSummary>,
    pub g_condition: Option<ConditionSummary>,
    pub bracket: Option<String>,
    pub initial_values: Vec<InitialValueCheck>,
}

impl SymbolicReport {
    fn not_applicable(note: impl Into<String>) -> Self {
        SymbolicReport {
            applicable: false,
            note: Some(note.into()),
            lambda: None,
            f_condition: None,
            g_condition: None,
            bracket: None,
            initial_values: vec![],
        }
    }

    pub fn pass(&self) -> bool {
        self.applicable
            && self.note.is_none()
            && self.lambda.is_some()
            && self.f_condition.as_ref().is_some_and(|c| c.pass)
            && self.g_condition.as_ref().is_some_and(|c| c.pass)
            && self.initial_values.iter().all(|c| c.pass)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Mismatch {
    Index(usize),
    Multi(Vec<u32>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NumericSample {
    pub point: ExpansionPoint,
    pub params: BTreeMap<String, String>,
    pub order: usize,
    pub first_mismatch: Option<Mismatch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl NumericSample {
    pub fn pass(&self) -> bool {
        self.first_mismatch.is_none() && self.error.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstantCheck {
    pub point: ExpansionPoint,
    pub constant: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchSummary {
    pub point: ExpansionPoint,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Timing {
    pub symbolic_ms: u64,
    pub numeric_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub id: String,
    pub citation: String,
    pub family: Family,
    pub verdict: Verdict,
    pub symbolic: SymbolicReport,
    pub numeric: Vec<NumericSample>,
    pub constants_checked: Vec<ConstantCheck>,
    pub branches: Vec<BranchSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl VerificationReport {
    pub fn without_timing(mut self) -> Self {
        self.timing = None;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} [{}] {}", self.id, self.family, self.citation)?;
        let s = &self.symbolic;
        if s.applicable {
            if let Some(n) = &s.note {
                writeln!(f, "  symbolic: error: {}", n)?;
            }
            if let Some(l) = &s.lambda {
                writeln!(f, "  lambda: {}", l)?;
            }
            for (name, c) in [("f-condition", &s.f_condition), ("g-condition", &s.g_condition)] {
                if let Some(c) = c {
                    let how = if c.structural { "exact" } else { "oracle" };
                    if c.pass {
                        writeln!(f, "  {}: pass ({})", name, how)?;
                    } else {
                        writeln!(f, "  {}: FAIL, residual {}", name, c.residual)?;
                    }
                }
            }
            for iv in &s.initial_values {
                match (&iv.left, &iv.error) {
                    (Some(l), None) => writeln!(
                        f,
                        "  initial values at {}: ({}, {}) {}",
                        iv.point,
                        l.value,
                        l.derivative,
                        if iv.pass { "match" } else { "MISMATCH" }
                    )?,
                    (_, e) => writeln!(f, "  initial values at {}: error {}", iv.point, e.as_deref().unwrap_or("?"))?,
                }
            }
        } else {
            writeln!(f, "  symbolic: not applicable ({})", s.note.as_deref().unwrap_or(""))?;
        }
        for n in &self.numeric {
            let params: Vec<String> = n.params.iter().map(|(k, v)| format!("{}={}", k, v)).collect();
            let outcome = match (&n.error, &n.first_mismatch) {
                (Some(e), _) => format!("error: {}", e),
                (None, Some(m)) => format!("first mismatch at {:?}", m),
                (None, None) => "agree".to_string(),
            };
            writeln!(f, "  series at {} [{}] order {}: {}", n.point, params.join(", "), n.order, outcome)?;
        }
        for c in &self.constants_checked {
            writeln!(f, "  constant at {}: C = {} {}", c.point, c.constant, if c.pass { "ok" } else { "MISMATCH" })?;
        }
        if self.branches.len() > 1 {
            for b in &self.branches {
                writeln!(f, "  branch {}: {}", b.point, b.verdict)?;
            }
        }
        if let Some(t) = &self.timing {
            writeln!(f, "  timing: symbolic {} ms, numeric {} ms", t.symbolic_ms, t.numeric_ms)?;
        }
        write!(f, "verdict: {}", self.verdict)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub order: usize,
    pub samples: usize,
    pub seed: u64,
    pub timings: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            order: 40,
            samples: 3,
            seed: 0,
            timings: true,
        }
    }
}

impl VerifyOptions {
    pub fn validate(&self) -> Result<()> {
        if self.order < MIN_ORDER {
            return Err(Error::BadParameter(format!("order must be at least {}", MIN_ORDER)));
        }
        if self.samples == 0 {
            return Err(Error::BadParameter("need at least one sample".into()));
        }
        Ok(())
    }
}

/// Per-formula seed, independent of registry position.
pub fn formula_seed(seed: u64, id: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in id.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h ^ seed.wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

fn draw(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(1..=20i64).into(), rng.gen_range(1..=20i64).into())
}

fn nonpositive_integer(r: &Rational) -> bool {
    r.is_integer() && !r.is_positive()
}

/// Draw `(a, b, c)` avoiding nonpositive-integer lower parameters.
fn sample_point(rng: &mut ChaCha8Rng, lower: &[ParamExpr]) -> Result<[Rational; 3]> {
    for _ in 0..10_000 {
        let p = [draw(rng), draw(rng), draw(rng)];
        if lower.iter().all(|e| !nonpositive_integer(&e.eval(&p))) {
            return Ok(p);
        }
    }
    Err(Error::BadParameter("no admissible parameter sample".into()))
}

fn point_params(p: &[Rational; 3]) -> BTreeMap<String, String> {
    ["a", "b", "c"].iter().zip(p).map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

pub fn verify(spec: &FormulaSpec, opts: &VerifyOptions) -> VerificationReport {
    let report = match spec.family {
        Family::Gauss => verify_gauss(spec, opts),
        Family::Lauricella => verify_lauricella(spec, opts),
        Family::Q => verify_q(spec, opts),
    };
    if opts.timings {
        report
    } else {
        report.without_timing()
    }
}

/// One report per entry, in registry order.
pub fn verify_all(registry: &Registry, opts: &VerifyOptions, jobs: usize) -> Vec<VerificationReport> {
    let run = || registry.entries().par_iter().map(|s| verify(s, opts)).collect::<Vec<_>>();
    match rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build() {
        Ok(pool) => pool.install(run),
        Err(_) => registry.entries().iter().map(|s| verify(s, opts)).collect(),
    }
}

fn ms(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

fn summarize(c: &crate::diffop::ConditionCheck) -> ConditionSummary {
    ConditionSummary {
        pass: c.pass(),
        structural: c.structural,
        residual: c.residual.to_string(),
    }
}

fn same_value(u: &PowerProduct, v: &PowerProduct, seed: u64) -> bool {
    let (u, v) = (PowerSum::from(u.clone()), PowerSum::from(v.clone()));
    u.sub(&v).is_zero() || eq_oracle(&u, &v, seed, DEFAULT_TRIALS).unwrap_or(false)
}

fn reflect(pp: &PowerProduct) -> Result<PowerProduct> {
    pp.compose(&RatPoly::from_ints(&[1, -1]), &RatPoly::one())
}

fn gauss_symbolic(spec: &FormulaSpec, seed: u64) -> SymbolicReport {
    let built = (|| -> Result<_> {
        let h = spec.h_effective()?;
        let (pl, pr) = (spec.left.gauss_params()?, spec.right.gauss_params()?);
        let d1 = substitute(&gauss_operator(&pr[0], &pr[1], &pr[2]), &spec.right_map()?)?;
        let d2 = substitute(&gauss_operator(&pl[0], &pl[1], &pl[2]), &spec.left_map()?)?;
        Ok(conjugation_check(&d1, &d2, &h, seed))
    })();
    let mut rep = match built {
        Err(Error::FactorDegreeExceeded(d)) => return SymbolicReport::not_applicable(format!("factorization degree {} exceeds the limit", d)),
        Err(e) => SymbolicReport {
            applicable: true,
            note: Some(e.to_string()),
            lambda: None,
            f_condition: None,
            g_condition: None,
            bracket: None,
            initial_values: vec![],
        },
        Ok(c) => SymbolicReport {
            applicable: true,
            note: None,
            lambda: c.lambda.as_ref().map(|l| l.to_string()),
            f_condition: Some(summarize(&c.f_condition)),
            g_condition: Some(summarize(&c.g_condition)),
            bracket: Some(c.bracket.to_string()),
            initial_values: vec![],
        },
    };
    for p in spec.expansion.points() {
        rep.initial_values.push(initial_check(spec, p, seed));
    }
    rep
}

fn initial_check(spec: &FormulaSpec, p: ExpansionPoint, seed: u64) -> InitialValueCheck {
    let res = (|| -> Result<(InitialValues, InitialValues)> {
        let l = initial_values(&spec.h_pp()?, &spec.left.gauss_params()?, &spec.left_map()?, p)?;
        let c = crate::symcore::ParamRat::from_rational(spec.constant_at(p));
        let pref = spec.right.prefactor_pp()?.scale(&c);
        let r = initial_values(&pref, &spec.right.gauss_params()?, &spec.right_map()?, p)?;
        Ok((l, r))
    })();
    match res {
        Ok((l, r)) => InitialValueCheck {
            point: p,
            pass: same_value(&l.value, &r.value, seed) && same_value(&l.derivative, &r.derivative, seed),
            left: Some(l),
            right: Some(r),
            error: None,
        },
        Err(e) => InitialValueCheck {
            point: p,
            pass: false,
            left: None,
            right: None,
            error: Some(e.to_string()),
        },
    }
}

/// `prefactor · F(params; z)` expanded at `p`, in `u = 1 − x` when `p = 1`.
fn side_series(pref: &PowerProduct, side: &SideSpec, z: &RationalMap, p: ExpansionPoint, point: &[Rational; 3], n: usize) -> Result<TruncatedSeries> {
    let (pref, z) = match p {
        ExpansionPoint::Zero => (pref.clone(), z.clone()),
        ExpansionPoint::One => (reflect(pref)?, z.compose(&RationalMap::reflection())?),
    };
    if !z.num().coeff(0).is_zero() {
        return Err(Error::MapNotAnchored);
    }
    let [a, b, c] = side.gauss_params()?.map(|e| e.eval(point));
    let f = f21_series(&a, &b, &c, n)?.compose(&z.series(n)?)?;
    Ok(pp_series(&PowerSum::from(pref), point, n)?.mul(&f))
}

fn gauss_sample(spec: &FormulaSpec, p: ExpansionPoint, point: &[Rational; 3], n: usize) -> Result<Option<usize>> {
    // prefactors are merged first so constant powers cancel before instantiation
    let lhs = side_series(&spec.h_effective()?, &spec.left, &spec.left_map()?, p, point, n)?;
    let rhs = side_series(&PowerProduct::one(), &spec.right, &spec.right_map()?, p, point, n)?.scale(&spec.constant_at(p));
    lhs.first_mismatch(&rhs)
}

fn verify_gauss(spec: &FormulaSpec, opts: &VerifyOptions) -> VerificationReport {
    let seed = formula_seed(opts.seed, &spec.id);
    let t0 = Instant::now();
    let symbolic = gauss_symbolic(spec, seed);
    let symbolic_ms = ms(t0);
    let t1 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lower = spec.lower_params();
    let mut numeric = Vec::new();
    for p in spec.expansion.points() {
        for _ in 0..opts.samples {
            let sample = sample_point(&mut rng, &lower);
            let (params, outcome) = match sample {
                Ok(pt) => (point_params(&pt), gauss_sample(spec, p, &pt, opts.order)),
                Err(e) => (BTreeMap::new(), Err(e)),
            };
            numeric.push(sample_record(p, params, opts.order, outcome.map(|m| m.map(Mismatch::Index))));
        }
    }
    let numeric_ms = ms(t1);
    let constants_checked = spec
        .expansion
        .points()
        .into_iter()
        .map(|p| ConstantCheck {
            point: p,
            constant: spec.constant_at(p).to_string(),
            pass: symbolic
                .initial_values
                .iter()
                .find(|c| c.point == p)
                .is_some_and(|c| c.left.as_ref().zip(c.right.as_ref()).is_some_and(|(l, r)| same_value(&l.value, &r.value, seed))),
        })
        .collect::<Vec<_>>();
    let branch_verdict = |p: ExpansionPoint| {
        let numeric_ok = numeric.iter().filter(|s| s.point == p).all(NumericSample::pass);
        let iv_ok = symbolic.initial_values.iter().filter(|c| c.point == p).all(|c| c.pass);
        if !numeric_ok {
            Verdict::Failed
        } else if !symbolic.applicable {
            Verdict::SeriesOnly
        } else if symbolic.pass() && iv_ok {
            Verdict::Proved
        } else {
            Verdict::Failed
        }
    };
    let branches: Vec<BranchSummary> = spec.expansion.points().into_iter().map(|p| BranchSummary { point: p, verdict: branch_verdict(p) }).collect();
    let verdict = combine(branches.iter().map(|b| b.verdict));
    VerificationReport {
        id: spec.id.clone(),
        citation: spec.citation.clone(),
        family: spec.family,
        verdict,
        symbolic,
        numeric,
        constants_checked,
        branches,
        timing: Some(Timing { symbolic_ms, numeric_ms }),
    }
}

fn combine(vs: impl Iterator<Item = Verdict>) -> Verdict {
    let mut out = Verdict::Proved;
    let mut any = false;
    for v in vs {
        any = true;
        match v {
            Verdict::Failed => return Verdict::Failed,
            Verdict::SeriesOnly => out = Verdict::SeriesOnly,
            Verdict::Proved => {}
        }
    }
    if any {
        out
    } else {
        Verdict::Failed
    }
}

fn sample_record(point: ExpansionPoint, params: BTreeMap<String, String>, order: usize, outcome: Result<Option<Mismatch>>) -> NumericSample {
    match outcome {
        Ok(m) => NumericSample {
            point,
            params,
            order,
            first_mismatch: m,
            error: None,
        },
        Err(e) => NumericSample {
            point,
            params,
            order,
            first_mismatch: None,
            error: Some(e.to_string()),
        },
    }
}

fn series_only_report(spec: &FormulaSpec, note: &str, numeric: Vec<NumericSample>, numeric_ms: u64) -> VerificationReport {
    let verdict = if !numeric.is_empty() && numeric.iter().all(NumericSample::pass) {
        Verdict::SeriesOnly
    } else {
        Verdict::Failed
    };
    VerificationReport {
        id: spec.id.clone(),
        citation: spec.citation.clone(),
        family: spec.family,
        verdict,
        symbolic: SymbolicReport::not_applicable(note),
        numeric,
        constants_checked: vec![],
        branches: vec![BranchSummary {
            point: ExpansionPoint::Zero,
            verdict,
        }],
        timing: Some(Timing { symbolic_ms: 0, numeric_ms }),
    }
}

fn fd_side(side: &SideSpec, point: &[Rational; 3]) -> Result<FdSide> {
    let vals: Vec<Rational> = side.params.iter().map(|e| e.eval(point)).collect();
    if vals.len() < 3 {
        return Err(Error::Registry("an F_D side needs a, b_1..b_m, c".into()));
    }
    Ok(FdSide {
        a: vals[0].clone(),
        b: vals[1..vals.len() - 1].to_vec(),
        c: vals[vals.len() - 1].clone(),
    })
}

fn lauricella_sample(spec: &FormulaSpec, point: &[Rational; 3], n: usize) -> Result<Option<Mismatch>> {
    let which = spec.construction.ok_or_else(|| Error::Registry(format!("{} has no argument construction", spec.id)))?;
    let [f] = spec.h.factors.as_slice() else {
        return Err(Error::Registry("expected h = (1 + x_1 + ... + x_m)^e".into()));
    };
    if f.base_coeffs != [Rational::one(), Rational::one()] || !spec.h.coeff.is_one() {
        return Err(Error::Registry("expected h = (1 + x_1 + ... + x_m)^e".into()));
    }
    let e = f.exponent.eval(point);
    let rep = verify_emo_with(which, &e, &fd_side(&spec.left, point)?, &fd_side(&spec.right, point)?, n)?;
    Ok(rep.first_mismatch.map(Mismatch::Multi))
}

fn verify_lauricella(spec: &FormulaSpec, opts: &VerifyOptions) -> VerificationReport {
    let seed = formula_seed(opts.seed, &spec.id);
    let n = opts.order.min(LAURICELLA_ORDER);
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lower = spec.lower_params();
    let mut numeric = Vec::new();
    for _ in 0..opts.samples {
        let (params, outcome) = match sample_point(&mut rng, &lower) {
            Ok(pt) => (BTreeMap::from([("a".to_string(), pt[0].to_string())]), lauricella_sample(spec, &pt, n)),
            Err(e) => (BTreeMap::new(), Err(e)),
        };
        numeric.push(sample_record(ExpansionPoint::Zero, params, n, outcome));
    }
    series_only_report(spec, "multivariable entry, series comparison only", numeric, ms(t))
}

/// `q^{k₀} α^{k_a} β^{k_b} γ^{k_c}` for an exponent `k_a a + k_b b + k_c c + k₀`.
fn q_value(e: &ParamExpr, base: &QParam) -> Result<Rational> {
    let ipow = |r: &Rational, k: &Rational| -> Result<Rational> {
        if !k.is_integer() {
            return Err(Error::NeedsExponents(format!("non-integer coefficient in exponent {}", e)));
        }
        let k = k.to_integer().to_i32().ok_or_else(|| Error::BadParameter(format!("exponent {} too large", e)))?;
        Ok(num_traits::pow::Pow::pow(r, k))
    };
    let [ka, kb, kc] = e.coeffs();
    Ok(ipow(&base.q, e.constant_part())? * ipow(&base.alpha, ka)? * ipow(&base.beta, kb)? * ipow(&base.gamma, kc)?)
}

fn q_side(side: &SideSpec, base: &QParam, n: usize) -> Result<crate::qcore::QSeries> {
    let [a, b, c] = <[ParamExpr; 3]>::try_from(side.params.clone()).map_err(|_| Error::Registry("a 2phi1 side needs three parameters".into()))?;
    let qp = QParam::new(base.q.clone(), q_value(&a, base)?, q_value(&b, base)?, q_value(&c, base)?)?;
    let mut s = q2phi1_series(&qp, n)?;
    if let Some(k) = &side.arg_scale {
        s = s.dilate(&Dilation::plain(q_value(k, base)?))?;
    }
    if let Some(k) = &side.phi {
        s = phi_alpha_series(&q_value(k, base)?, &base.q, n)?.mul(&s);
    }
    if side.map.is_some() || side.prefactor.is_some() {
        return Err(Error::Registry("q sides take no map or prefactor".into()));
    }
    Ok(s)
}

fn q_sample(spec: &FormulaSpec, rng: &mut ChaCha8Rng, n: usize) -> (BTreeMap<String, String>, Result<Option<Mismatch>>) {
    for _ in 0..10_000 {
        let hi: i64 = rng.gen_range(2..=20);
        let q = Rational::new(rng.gen_range(1..hi).into(), hi.into());
        let base = match QParam::new(q, draw(rng), draw(rng), draw(rng)) {
            Ok(b) => b,
            Err(_) => continue,
        };
        let params = BTreeMap::from([
            ("alpha".to_string(), base.alpha.to_string()),
            ("beta".to_string(), base.beta.to_string()),
            ("gamma".to_string(), base.gamma.to_string()),
            ("q".to_string(), base.q.to_string()),
        ]);
        let outcome = (|| {
            let l = q_side(&spec.left, &base, n)?;
            let r = q_side(&spec.right, &base, n)?;
            Ok(l.first_mismatch(&r)?.map(Mismatch::Index))
        })();
        if let Err(Error::BadParameter(_)) = outcome {
            continue;
        }
        return (params, outcome);
    }
    (BTreeMap::new(), Err(Error::BadParameter("no admissible q sample".into())))
}

fn verify_q(spec: &FormulaSpec, opts: &VerifyOptions) -> VerificationReport {
    let seed = formula_seed(opts.seed, &spec.id);
    let n = opts.order.min(Q_ORDER);
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut numeric = Vec::new();
    for _ in 0..opts.samples {
        let (params, outcome) = q_sample(spec, &mut rng, n);
        numeric.push(sample_record(ExpansionPoint::Zero, params, n, outcome));
    }
    series_only_report(spec, "q-difference entry, series comparison only", numeric, ms(t))
}
