use hyperjacobi::catalog::{self, FactorSpec, PowerSpec, Registry};
use hyperjacobi::symcore::ParamExpr;
use hyperjacobi::verifier::{formula_seed, verify, verify_all, Verdict, VerifyOptions};
use hyperjacobi::{rat, Rational};

fn opts() -> VerifyOptions {
    VerifyOptions {
        order: 16,
        samples: 2,
        seed: 0,
        timings: false,
    }
}

#[test]
fn single_entries() {
    let r = verify(&catalog::get("tle").unwrap(), &opts());
    assert_eq!(r.verdict, Verdict::Proved);
    assert!(r.symbolic.pass());
    assert_eq!(r.numeric.len(), 2);
    assert!(r.timing.is_none());
    let r = verify(&catalog::get("emo2").unwrap(), &opts());
    assert_eq!(r.verdict, Verdict::SeriesOnly);
    assert!(!r.symbolic.applicable);
    let r = verify(&catalog::get("teq").unwrap(), &opts());
    assert_eq!(r.verdict, Verdict::SeriesOnly);
}

#[test]
fn both_branches_reported() {
    let r = verify(&catalog::get("t3.2").unwrap(), &opts());
    assert_eq!(r.verdict, Verdict::Proved);
    assert_eq!(r.branches.len(), 2);
    assert_eq!(r.constants_checked.len(), 2);
    assert!(r.constants_checked.iter().all(|c| c.pass));
}

#[test]
fn corrupted_exponent_fails_the_g_condition() {
    let mut spec = catalog::get("tle").unwrap();
    spec.h.factors[0].exponent = spec.h.factors[0].exponent.clone() + ParamExpr::int(1);
    let r = verify(&spec, &opts());
    assert_eq!(r.verdict, Verdict::Failed);
    let g = r.symbolic.g_condition.as_ref().unwrap();
    assert!(!g.pass);
    assert_ne!(g.residual, "0");
    assert!(r.numeric.iter().any(|n| !n.pass()));
}

#[test]
fn prefactor_placement_does_not_matter() {
    let moved = {
        let mut s = catalog::get("tg2").unwrap();
        let konst: Vec<_> = s.h.factors.iter().filter(|f| f.base_coeffs.len() == 1).cloned().collect();
        assert_eq!(konst.len(), 1);
        s.h.factors.retain(|f| f.base_coeffs.len() > 1);
        s.right.prefactor = Some(PowerSpec {
            coeff: Rational::from_integer(1.into()),
            factors: vec![FactorSpec {
                base_coeffs: konst[0].base_coeffs.clone(),
                exponent: konst[0].exponent.scale(&rat(-1, 1)),
            }],
        });
        s
    };
    assert_eq!(verify(&catalog::get("tg2").unwrap(), &opts()).verdict, Verdict::Proved);
    let r = verify(&moved, &opts());
    assert_eq!(r.verdict, Verdict::Proved, "{}", r);
}

#[test]
fn parallelism_is_deterministic() {
    let reg = Registry::builtin();
    let a = verify_all(&reg, &opts(), 1);
    let b = verify_all(&reg, &opts(), 8);
    assert_eq!(a, b);
    assert_eq!(a.iter().map(|r| r.id.as_str()).collect::<Vec<_>>(), reg.list().iter().map(|r| r.0.as_str()).collect::<Vec<_>>());
}

#[test]
fn empty_registry() {
    assert!(verify_all(&Registry::from_json("[]").unwrap(), &opts(), 4).is_empty());
}

#[test]
fn seeds_are_per_formula() {
    assert_ne!(formula_seed(0, "tle"), formula_seed(0, "tlp"));
    assert_ne!(formula_seed(0, "tle"), formula_seed(1, "tle"));
    assert_eq!(formula_seed(3, "t2+"), formula_seed(3, "t2+"));
}

#[test]
fn option_validation() {
    assert!(VerifyOptions::default().validate().is_ok());
    assert!(VerifyOptions { order: 7, ..opts() }.validate().is_err());
    assert!(VerifyOptions { samples: 0, ..opts() }.validate().is_err());
}

#[test]
fn text_report_ends_with_verdict() {
    let r = verify(&catalog::get("t2+").unwrap(), &opts());
    let text = r.to_string();
    assert!(text.starts_with("t2+ [gauss]"));
    assert!(text.ends_with("verdict: proved"));
    let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(v["verdict"], "proved");
}
