use std::process::{Command, ExitCode};
use std::time::Instant;

use hyperjacobi::catalog::{get, Registry};
use hyperjacobi::diffop::{apply_to_series, conjugation_bracket, gauss_operator, initial_values, substitute, ExpansionPoint, RationalMap};
use hyperjacobi::qcore::{
    e0q_residual, e11_check, e1q_residual, e2q_residual, phi_alpha_series, phi_identities, product_rule_check, q2phi1_series,
    q_canonical_residual, q_degeneration, shift_identities, verify_heine, QParam, QSeries,
};
use hyperjacobi::series::{agm_comparison, elliptic_k, elliptic_k_quadrature, f21_series, pochhammer};
use hyperjacobi::symcore::{eq_oracle, factor_small, MPoly, ParamExpr, ParamRat, Poly, PowerProduct, PowerSum, RatPoly};
use hyperjacobi::verifier::{verify, Verdict, VerifyOptions};
use hyperjacobi::{rat, Rational};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    let p: i64 = rng.gen_range(-20..=20);
    let q: i64 = rng.gen_range(1..=20);
    rat(p, q)
}

fn pe(s: &str) -> ParamExpr {
    s.parse().expect("parameter expression")
}

fn pr(s: &str) -> ParamRat {
    pe(s).to_param_rat()
}

fn canonical_residual() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let op = gauss_operator(&ParamExpr::a(), &ParamExpr::b(), &ParamExpr::c());
    let start = Instant::now();
    let mut n = 0;
    while n < 50 {
        let (a, b, c) = (small_rational(&mut rng), small_rational(&mut rng), small_rational(&mut rng));
        if c.is_integer() && c <= Rational::zero() {
            continue;
        }
        let y = f21_series(&a, &b, &c, 40).map_err(|e| e.to_string())?;
        let r = apply_to_series(&op, &[a.clone(), b.clone(), c.clone()], &y).map_err(|e| e.to_string())?;
        ensure(r.order() == 38 && r.is_zero(), || format!("nonzero residual at a={} b={} c={}", a, b, c))?;
        n += 1;
    }
    Ok(format!("50 draws, residual zero through order 38 ({:.2?})", start.elapsed()))
}

fn registry_verification() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_hyperjacobi"))
        .args(["verify-all", "--order", "40", "--samples", "3", "--seed", "0", "--json", "--no-timings"])
        .env_remove("HYPERJACOBI_REGISTRY")
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(out.status.success(), || format!("exit status {}", out.status))?;
    let reports: Vec<Value> = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let verdict = |id: &str| {
        reports
            .iter()
            .find(|r| r["id"] == id)
            .and_then(|r| r["verdict"].as_str())
            .unwrap_or("missing")
            .to_string()
    };
    let gauss = ["tle", "tlp", "t2+", "t3+", "t4+", "tk", "tr", "t8", "t9", "tg1", "tg2", "t3.2", "t41", "t10"];
    for id in gauss {
        let v = verdict(id);
        ensure(v == "proved", || format!("{} gave {}", id, v))?;
    }
    let t32 = reports.iter().find(|r| r["id"] == "t3.2").ok_or("t3.2 missing")?;
    let branches = t32["branches"].as_array().ok_or("t3.2 has no branches")?;
    ensure(branches.len() == 2 && branches.iter().all(|b| b["verdict"] == "proved"), || {
        format!("t3.2 branches {}", t32["branches"])
    })?;
    for id in ["emo1", "emo2", "teq"] {
        let v = verdict(id);
        ensure(v == "series_only", || format!("{} gave {}", id, v))?;
    }
    Ok(format!("{} gauss entries proved, 3 series_only ({:.2?})", gauss.len(), elapsed))
}

fn factor_multiset(p: &RatPoly) -> Result<Vec<String>, String> {
    let f = factor_small(&p.to_poly()).map_err(|e| e.to_string())?;
    let mut v = f.to_strings();
    if !f.unit.is_one() {
        v.push(f.unit.to_string());
    }
    v.sort();
    Ok(v)
}

fn sorted(v: &[&str]) -> Vec<String> {
    let mut v: Vec<String> = v.iter().map(|s| s.to_string()).collect();
    v.sort();
    v
}

fn factorizations() -> Outcome {
    // z = ((1-x)/rho)^s, rho = 1 + (r-1)x, and the degree-4 map 64x((1-x)/(1+8x))^3
    let power = |r: i64, s: usize| {
        let rho = RatPoly::from_ints(&[1, r - 1]);
        RationalMap::new(RatPoly::from_ints(&[1, -1]).pow(s), rho.pow(s), "z").unwrap()
    };
    let goursat = RationalMap::new(
        RatPoly::from_ints(&[0, 64]).mul(&RatPoly::from_ints(&[1, -1]).pow(3)),
        RatPoly::from_ints(&[1, 8]).pow(3),
        "z",
    )
    .unwrap();
    let cases = [
        (power(2, 2), sorted(&["4", "(x)"]), sorted(&["(1+x)^2"])),
        (power(3, 3), sorted(&["9", "(x)", "(1+x+x^2)"]), sorted(&["(1+2x)^3"])),
        (power(4, 2), sorted(&["8", "(x)", "(1+x)"]), sorted(&["(1+3x)^2"])),
        (goursat, sorted(&["(1-20x-8x^2)^2"]), sorted(&["(1+8x)^3"])),
    ];
    for (z, num, den) in cases {
        let got_num = factor_multiset(&z.den().sub(z.num()))?;
        let got_den = factor_multiset(z.den())?;
        ensure(got_num == num && got_den == den, || {
            format!("1-z for {}: got {:?} / {:?}, want {:?} / {:?}", z, got_num, got_den, num, den)
        })?;
    }
    Ok("four factor multisets match".into())
}

struct ClosedForm {
    id: &'static str,
    f1: PowerProduct,
    prefix: PowerProduct,
    poly: Poly,
}

fn pp(coeff: ParamRat, factors: &[(&[i64], &str)]) -> PowerProduct {
    let fs: Vec<(RatPoly, ParamExpr)> = factors.iter().map(|(b, e)| (RatPoly::from_ints(b), pe(e))).collect();
    PowerProduct::from_factors(coeff, &fs).expect("closed-form power product")
}

fn int_poly(cs: &[i64]) -> Poly {
    Poly::new(cs.iter().map(|&c| ParamRat::from_int(c)).collect())
}

fn closed_form_brackets() -> Vec<ClosedForm> {
    let x: &[i64] = &[0, 1];
    vec![
        ClosedForm {
            id: "t2+",
            f1: pp(ParamRat::one(), &[(x, "b"), (&[1, 0, -1], "a-b+1"), (&[1, 1], "-2a")]),
            prefix: pp(pr("a"), &[(x, "b-1"), (&[1, 0, -1], "a-b"), (&[1, 1], "-1")]),
            poly: Poly::new(vec![pr("b"), pr("-a-1"), pr("-a+b-1")]),
        },
        ClosedForm {
            id: "t3+",
            f1: pp(ParamRat::one(), &[(x, "(a+1)/2"), (&[1, 0, 0, -1], "(a+1)/2"), (&[1, 2], "-2a")]),
            prefix: pp(pr("a").mul(&pr("a+1")), &[(x, "(a-1)/2"), (&[1, 0, 0, -1], "(a-1)/2"), (&[1, 2], "-2")]),
            poly: int_poly(&[1, -2, 0, -4, -4]),
        },
        ClosedForm {
            id: "t4+",
            f1: pp(ParamRat::one(), &[(x, "(a+2)/3"), (&[1, 0, -1], "(a+2)/3"), (&[1, 3], "-a")]),
            prefix: pp(pr("a").mul(&pr("a+2")).scale(&rat(1, 4)), &[(x, "(a-1)/3"), (&[1, 0, -1], "(a-1)/3"), (&[1, 3], "-2")]),
            poly: int_poly(&[2, -3, -6, -9]),
        },
        ClosedForm {
            id: "tg1",
            f1: pp(ParamRat::one(), &[(x, "(4a+5)/6"), (&[1, -1], "(4a+1)/2"), (&[1, 8], "-2a")]),
            prefix: pp(pr("4a/3"), &[(x, "(4a-1)/6"), (&[1, -1], "(4a-1)/2"), (&[1, 8], "-2")]),
            poly: Poly::new(vec![pr("4a+5"), pr("-32a-16"), pr("-80a-16")]),
        },
    ]
}

fn brackets() -> Outcome {
    let mut trials = 0;
    for p in closed_form_brackets() {
        let spec = get(p.id).map_err(|e| e.to_string())?;
        let r = spec.right.gauss_params().map_err(|e| e.to_string())?;
        let map = spec.right_map().map_err(|e| e.to_string())?;
        let d1 = substitute(&gauss_operator(&r[0], &r[1], &r[2]), &map).map_err(|e| e.to_string())?;
        let h = spec.h_effective().map_err(|e| e.to_string())?;
        let ours = conjugation_bracket(&d1, &h);
        // our operator is the closed form times a constant normalization
        let f1 = d1.f.single_term().ok_or_else(|| format!("{}: f is not a single term", p.id))?;
        let kappa = f1.div(&p.f1).map_err(|e| e.to_string())?;
        ensure(kappa.is_constant(), || format!("{}: f ratio {} is not constant", p.id, kappa))?;
        let closed = PowerSum::from_poly(&p.prefix, &p.poly).mul_pp(&kappa);
        for seed in 0..100 {
            let ok = eq_oracle(&ours, &closed, seed, 5).map_err(|e| e.to_string())?;
            ensure(ok, || format!("{}: oracle rejected bracket at seed {}", p.id, seed))?;
            trials += 1;
        }
    }
    Ok(format!("{} oracle runs, no failures", trials))
}

fn initial_value_identities() -> Outcome {
    let v = |i| MPoly::var(i);
    let ratio = |n: MPoly, d: MPoly| ParamRat::new(n, d).unwrap();
    let abc = [ParamExpr::a(), ParamExpr::b(), ParamExpr::c()];
    let same = |x: &ParamRat, y: &ParamRat| x.sub(y).is_zero();

    let canon = initial_values(&PowerProduct::one(), &abc, &RationalMap::identity(), ExpansionPoint::Zero).map_err(|e| e.to_string())?;
    let (v0, d0) = canon.as_param_rats().ok_or("canonical values not rational")?;
    ensure(same(&v0, &ParamRat::one()) && same(&d0, &ratio(v(0).mul(&v(1)), v(2))), || {
        format!("canonical solution gave ({}, {})", v0, d0)
    })?;

    let tle = get("tle").map_err(|e| e.to_string())?;
    let iv = initial_values(&tle.h_pp().unwrap(), &tle.left.gauss_params().unwrap(), &tle.left_map().unwrap(), ExpansionPoint::Zero)
        .map_err(|e| e.to_string())?;
    let (v0, d0) = iv.as_param_rats().ok_or("tle values not rational")?;
    let want = ratio(v(2).sub(&v(0)).mul(&v(2).sub(&v(1))), v(2));
    ensure(same(&v0, &ParamRat::one()) && same(&d0, &want), || format!("tle gave ({}, {})", v0, d0))?;

    let t2 = get("t2+").map_err(|e| e.to_string())?;
    let iv = initial_values(&t2.h_pp().unwrap(), &t2.left.gauss_params().unwrap(), &t2.left_map().unwrap(), ExpansionPoint::Zero)
        .map_err(|e| e.to_string())?;
    let (v0, d0) = iv.as_param_rats().ok_or("t2+ values not rational")?;
    ensure(same(&v0, &ParamRat::one()) && same(&d0, &pr("a")), || format!("t2+ gave ({}, {})", v0, d0))?;

    let t32 = get("t3.2").map_err(|e| e.to_string())?;
    let mut found = Vec::new();
    for (p, want) in [(ExpansionPoint::Zero, rat(1, 1)), (ExpansionPoint::One, rat(3, 1))] {
        let l = initial_values(&t32.h_pp().unwrap(), &t32.left.gauss_params().unwrap(), &t32.left_map().unwrap(), p)
            .map_err(|e| e.to_string())?
            .as_param_rats()
            .ok_or("t3.2 left not rational")?;
        let r = initial_values(&PowerProduct::one(), &t32.right.gauss_params().unwrap(), &t32.right_map().unwrap(), p)
            .map_err(|e| e.to_string())?
            .as_param_rats()
            .ok_or("t3.2 right not rational")?;
        let c = l.0.div(&r.0).map_err(|e| e.to_string())?;
        let c_rat = c.as_rational().ok_or("branch constant not rational")?;
        ensure(c_rat == want && same(&l.1, &r.1.mul(&c)) && t32.constant_at(p) == want, || {
            format!("t3.2 at {}: left ({}, {}), right ({}, {})", p, l.0, l.1, r.0, r.1)
        })?;
        found.push(format!("C={} at {}", c_rat, p));
    }
    Ok(format!("canonical, tle, t2+ exact; t3.2 {}", found.join(", ")))
}

fn elliptic() -> Outcome {
    let mut worst: f64 = 0.0;
    for x in [0.3, 0.5, 0.9] {
        let c = agm_comparison(x, 200).map_err(|e| e.to_string())?;
        ensure(c.residual < 1e-10, || format!("AGM residual {:e} at x={}", c.residual, x))?;
        worst = worst.max(c.residual);
    }
    let x: f64 = 0.3;
    let landen = ((1.0 + x) * elliptic_k(x, 200) - elliptic_k(2.0 * x.sqrt() / (1.0 + x), 200)).abs();
    ensure(landen < 1e-9, || format!("Landen residual {:e}", landen))?;
    let quad = (elliptic_k(0.5, 200) - elliptic_k_quadrature(0.5, 2000)).abs();
    ensure(quad < 1e-8, || format!("quadrature gap {:e}", quad))?;
    Ok(format!("AGM {:.1e}, Landen {:.1e}, quadrature {:.1e}", worst, landen, quad))
}

fn draw_q(rng: &mut ChaCha8Rng) -> QParam {
    loop {
        let hi: i64 = rng.gen_range(2..=20);
        let q = rat(rng.gen_range(1..hi), hi);
        let mut r = || rat(rng.gen_range(1..=20), rng.gen_range(1..=20));
        let (a, b, c) = (r(), r(), r());
        if let Ok(qp) = QParam::new(q, a, b, c) {
            return qp;
        }
    }
}

fn q_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let fail = |what: &str, qp: &QParam| format!("{} failed at q={} alpha={} beta={} gamma={}", what, qp.q, qp.alpha, qp.beta, qp.gamma);
    for _ in 0..10 {
        let qp = draw_q(&mut rng);
        for (name, c) in phi_identities(&qp.alpha, &qp.beta, &qp.q, 15).map_err(|e| e.to_string())? {
            ensure(c.pass(), || fail(name, &qp))?;
        }
        let f = q2phi1_series(&qp, 16).map_err(|e| e.to_string())?;
        let g = phi_alpha_series(&qp.gamma, &qp.q, 16).map_err(|e| e.to_string())?;
        for (name, c) in shift_identities(&f, &g, &qp, 15).map_err(|e| e.to_string())? {
            ensure(c.pass(), || fail(name, &qp))?;
        }
        ensure(product_rule_check(&f, &g, &qp, 15).map_err(|e| e.to_string())?.pass(), || fail("product rule", &qp))?;

        let y = q2phi1_series(&qp, 20).map_err(|e| e.to_string())?;
        let residuals: [(&str, fn(&QSeries, &QParam) -> hyperjacobi::Result<QSeries>); 4] = [
            ("first-order system", e0q_residual),
            ("second-order form", e1q_residual),
            ("factored form", e2q_residual),
            ("canonical form", q_canonical_residual),
        ];
        for (name, op) in residuals {
            let r = op(&y, &qp).map_err(|e| e.to_string())?;
            ensure(r.is_zero(), || fail(name, &qp))?;
        }
        ensure(verify_heine(&qp, 25).map_err(|e| e.to_string())?.pass(), || fail("Heine", &qp))?;
    }
    let lat = QParam::lattice(rat(1, 2), 2, rat(1, 2), rat(3, 2), rat(5, 2)).map_err(|e| e.to_string())?;
    ensure(e11_check(&lat, 20, 10).map_err(|e| e.to_string())?.pass(), || "conjugation on probes 0..20".into())?;
    Ok(format!("10 draws, lattice probes 0..=20 ({:.2?})", start.elapsed()))
}

fn degeneration() -> Outcome {
    for a in 0..=5u32 {
        for n in 0..=8 {
            let got = q_degeneration(a, n);
            let want = pochhammer(&Rational::from_integer(a.into()), n);
            ensure(got == want, || format!("A={} n={}: {} != {}", a, n, got, want))?;
        }
    }
    Ok("54 cases exact".into())
}

/// `(id, JSON pointer inside the entry, replacement)`.
fn mutations() -> Vec<(&'static str, &'static str, Value)> {
    use serde_json::json;
    vec![
        ("tle", "/h/factors/0/exponent/const", json!("1")),
        ("tle", "/right/params/0/a", json!("1")),
        ("tlp", "/h/factors/0/exponent/a", json!("2")),
        ("t2+", "/h/factors/0/exponent/a", json!("2")),
        ("t2+", "/right/map/num_coeffs/1", json!(5)),
        ("t3+", "/right/map/den_coeffs/1", json!(5)),
        ("t4+", "/left/map/num_coeffs/2", json!(2)),
        ("t4+", "/right/params/0/a", json!("1/2")),
        ("tk", "/right/map/num_coeffs/1", json!(3)),
        ("tr", "/right/params/2/b", json!("-2")),
        ("t8", "/right/map/num_coeffs/2", json!(-3)),
        ("t9", "/left/map/num_coeffs/1", json!(1)),
        ("tg1", "/h/factors/0/exponent/a", json!("2")),
        ("tg2", "/h/factors/1/base_coeffs/0", json!(8)),
        ("t3.2", "/constants/1/value", json!(2)),
        ("t41", "/right/map/num_coeffs/3", json!(9)),
        ("t10", "/left/map/num_coeffs/2", json!(1)),
        ("emo1", "/h/factors/0/exponent/a", json!("2")),
        ("emo2", "/right/params/4/const", json!("1/3")),
        ("teq", "/right/arg_scale/const", json!("1")),
    ]
}

fn mutation_sensitivity() -> Outcome {
    let start = Instant::now();
    let base: Value = serde_json::from_str(&Registry::builtin().to_json()).map_err(|e| e.to_string())?;
    let opts = VerifyOptions {
        order: 40,
        samples: 3,
        seed: 0,
        timings: false,
    };
    let list = mutations();
    for (id, ptr, value) in &list {
        let mut entry = base
            .as_array()
            .and_then(|a| a.iter().find(|e| e["id"] == *id))
            .cloned()
            .ok_or_else(|| format!("no entry {}", id))?;
        let slot = entry.pointer_mut(ptr).ok_or_else(|| format!("{}: no field {}", id, ptr))?;
        ensure(slot != value, || format!("{} {}: mutation is a no-op", id, ptr))?;
        *slot = value.clone();
        let reg = Registry::from_json(&Value::Array(vec![entry]).to_string()).map_err(|e| e.to_string())?;
        let report = verify(&reg.entries()[0], &opts);
        ensure(report.verdict == Verdict::Failed, || format!("{} {} = {} not detected ({})", id, ptr, value, report.verdict))?;
    }
    Ok(format!("{}/{} mutations failed verification ({:.2?})", list.len(), list.len(), start.elapsed()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("canonical-form residual", canonical_residual),
        ("registry verification", registry_verification),
        ("1-z factorizations", factorizations),
        ("conjugation brackets", brackets),
        ("initial values", initial_value_identities),
        ("elliptic cross-checks", elliptic),
        ("q-suite", q_suite),
        ("q-degeneration", degeneration),
        ("mutation sensitivity", mutation_sensitivity),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {} {}: PASS ({})", i + 1, name, detail),
            Err(why) => {
                failed += 1;
                println!("criterion {} {}: FAIL ({})", i + 1, name, why);
            }
        }
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
