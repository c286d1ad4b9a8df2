//! Randomized exact equality of power sums.
//!
//! Both sides are instantiated at random rational parameters and a random
//! rational `x`. Terms are then grouped by their exponent vector modulo the
//! integers; inside a group every term is a common power times an exactly
//! computable rational, so no fractional power is ever evaluated.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::factor::MAX_FACTOR_DEGREE;
use super::power::{InstantiatedTerm, PowerSum};
use super::poly::RatPoly;
use crate::{Error, Rational, Result};

pub const DEFAULT_TRIALS: usize = 5;
const SAMPLE_BOUND: i64 = 1_000_000;

/// Random rational with numerator and denominator in `[1, 10^6]`.
pub fn sample_rational<R: Rng>(rng: &mut R) -> Rational {
    let n = rng.gen_range(1..=SAMPLE_BOUND);
    let d = rng.gen_range(1..=SAMPLE_BOUND);
    Rational::new(n.into(), d.into())
}

fn frac(r: &Rational) -> Rational {
    r - r.floor()
}

type GroupKey = (Vec<(BigInt, Rational)>, Vec<(RatPoly, Rational)>);

fn rpow(base: &Rational, k: &Rational) -> Rational {
    debug_assert!(k.is_integer());
    let k: i32 = k.to_integer().try_into().expect("small exponent");
    num_traits::pow::Pow::pow(base, k)
}

/// Exact value of `Σ terms` at `x`, or `None` when some group cannot be
/// evaluated (a base vanishes at `x`).
fn evaluate_zero(terms: &[InstantiatedTerm], x: &Rational) -> Option<bool> {
    let mut groups: BTreeMap<GroupKey, Vec<&InstantiatedTerm>> = BTreeMap::new();
    for t in terms {
        let consts = t
            .consts
            .iter()
            .filter(|(_, e)| !e.is_integer())
            .map(|(b, e)| (b.clone(), frac(e)))
            .collect();
        let factors = t
            .factors
            .iter()
            .filter(|(_, e)| !e.is_integer())
            .map(|(b, e)| (b.clone(), frac(e)))
            .collect();
        groups.entry((consts, factors)).or_default().push(t);
    }
    for members in groups.values() {
        let mut min_c: BTreeMap<&BigInt, Rational> = BTreeMap::new();
        let mut min_f: BTreeMap<&RatPoly, Rational> = BTreeMap::new();
        for t in members {
            for (b, e) in &t.consts {
                let m = min_c.entry(b).or_insert_with(|| e.clone());
                if e < m {
                    *m = e.clone();
                }
            }
            for (b, e) in &t.factors {
                let m = min_f.entry(b).or_insert_with(|| e.clone());
                if e < m {
                    *m = e.clone();
                }
            }
        }
        // bases absent from a term have exponent 0 there
        for t in members {
            for (b, m) in min_c.iter_mut() {
                if !t.consts.contains_key(*b) && m.is_positive() {
                    *m = Rational::zero();
                }
            }
            for (b, m) in min_f.iter_mut() {
                if !t.factors.contains_key(*b) && m.is_positive() {
                    *m = Rational::zero();
                }
            }
        }
        let mut sum = Rational::zero();
        for t in members {
            let mut v = t.coeff.clone();
            for (b, m) in &min_c {
                let e = t.consts.get(*b).cloned().unwrap_or_else(Rational::zero);
                v *= rpow(&Rational::from_integer((*b).clone()), &(e - m));
            }
            for (b, m) in &min_f {
                let e = t.factors.get(*b).cloned().unwrap_or_else(Rational::zero);
                let k = e - m;
                if k.is_zero() {
                    continue;
                }
                let bv = b.eval(x);
                if bv.is_zero() {
                    return None;
                }
                v *= rpow(&bv, &k);
            }
            sum += v;
        }
        if !sum.is_zero() {
            return Some(false);
        }
    }
    Some(true)
}

/// `true` iff `u` and `v` agree at `trials` seeded random points.
pub fn eq_oracle(u: &PowerSum, v: &PowerSum, seed: u64, trials: usize) -> Result<bool> {
    if u == v {
        return Ok(true);
    }
    let diff = u.sub(v);
    for t in diff.terms() {
        for (b, e) in t.factors() {
            if b.degree().unwrap_or(0) > MAX_FACTOR_DEGREE && e.as_integer().is_none() {
                return Err(Error::UnmatchedBranch(format!("({})^({})", b, e)));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let trials = trials.max(1);
    let mut done = 0;
    let mut attempts = 0;
    while done < trials {
        attempts += 1;
        if attempts > 100 * trials {
            return Err(Error::DivisionByZero);
        }
        let point = [sample_rational(&mut rng), sample_rational(&mut rng), sample_rational(&mut rng)];
        let x = sample_rational(&mut rng);
        let Some(terms) = diff.terms().iter().map(|t| t.instantiate(&point)).collect::<Option<Vec<_>>>() else {
            continue;
        };
        match evaluate_zero(&terms, &x) {
            None => continue,
            Some(false) => return Ok(false),
            Some(true) => done += 1,
        }
    }
    Ok(true)
}
