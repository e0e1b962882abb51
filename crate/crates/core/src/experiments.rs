//! Reproducible studies emitting JSON reports.
//!
//! Every trial draws from its own ChaCha stream of the master seed, so reports
//! are identical for identical parameters whatever the worker count.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::boolfn::named::{andreev, range, threshold};
use crate::boolfn::{
    extension_eval, hazard_derivative, hazard_derivative_from_table, is_monotone, random_function_with, ternary_table,
    TruthTable, MAX_ARITY, MAX_TERNARY_ARITY,
};
use crate::error::{Error, Result};
use crate::formula::{andreev_derivative, andreev_point, derivative_cover_synthesis, dnf_from_primes, CoverSide};
use crate::implicants::{monotone_prime_implicants, prime_sets};
use crate::kw::analysis::{derivative_matrix, unate_criterion};
use crate::kw::matrix::kwu_matrix;
use crate::kw::protocol::{monorect_exact, SearchConfig};
use crate::trit::{BitWord, Trit, TritWord};

/// Fraction of samples that must respect the weight bound.
pub const WEIGHT_THRESHOLD: f64 = 0.95;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StudyReport {
    pub study: String,
    pub version: String,
    pub parameters: Value,
    pub trials: Vec<Value>,
    pub aggregate: Value,
}

impl StudyReport {
    fn new(study: &str, parameters: Value, trials: Vec<Value>, aggregate: Value) -> StudyReport {
        StudyReport {
            study: study.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            parameters,
            trials,
            aggregate,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn aggregate_f64(&self, key: &str) -> Option<f64> {
        self.aggregate.get(key)?.as_f64()
    }

    pub fn aggregate_bool(&self, key: &str) -> Option<bool> {
        self.aggregate.get(key)?.as_bool()
    }
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn random_word(n: usize, rng: &mut impl RngCore) -> Result<BitWord> {
    BitWord::new(n, rng.next_u32() & ((1u64 << n) - 1) as u32)
}

/// `(1/2)^(2^k − 1)`: chance that a fixed weight-`k` word is a prime implicant
/// of `∂f(x)` for a uniformly random `f`.
pub fn prime_probability(k: u32) -> f64 {
    0.5f64.powi((1i32 << k) - 1)
}

/// `⌈log₂ n⌉ + 1`.
pub fn weight_bound(n: usize) -> u32 {
    (n.max(1) as f64).log2().ceil() as u32 + 1
}

#[derive(Serialize)]
struct DerivativeTrial {
    trial: usize,
    max_weight: u32,
    within_bound: usize,
    mean_dnf_size: f64,
    weight1_hits: usize,
    weight2_hits: usize,
}

/// Samples random `f` and base points; records the heaviest prime implicant of
/// each derivative, its DNF size, and how often the fixed words `1u…u` and
/// `11u…u` are prime implicants.
pub fn random_derivative_study(n: usize, trials: usize, x_samples: usize, seed: u64) -> Result<StudyReport> {
    if !(2..=MAX_TERNARY_ARITY).contains(&n) {
        return Err(Error::ArityTooLarge { arity: n, limit: MAX_TERNARY_ARITY });
    }
    if trials == 0 || x_samples == 0 {
        return Err(Error::precondition("trials and x_samples must be positive"));
    }
    let bound = weight_bound(n);
    let full = ((1u64 << n) - 1) as u32;
    let w1 = TritWord::from_planes(n, 0b1, full & !0b1)?;
    let w2 = TritWord::from_planes(n, 0b11, full & !0b11)?;
    let records: Vec<DerivativeTrial> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let f = random_function_with(n, &mut rng)?;
            let table = ternary_table(&f)?;
            let mut rec = DerivativeTrial {
                trial,
                max_weight: 0,
                within_bound: 0,
                mean_dnf_size: 0.0,
                weight1_hits: 0,
                weight2_hits: 0,
            };
            let mut dnf_total = 0;
            for _ in 0..x_samples {
                let x = random_word(n, &mut rng)?;
                let primes = monotone_prime_implicants(&hazard_derivative_from_table(&table, &x)?)?;
                let w = primes.words().iter().map(|p| p.ones_mask().count_ones()).max().unwrap_or(0);
                rec.max_weight = rec.max_weight.max(w);
                rec.within_bound += (w <= bound) as usize;
                dnf_total += dnf_from_primes(&primes).size();
                rec.weight1_hits += primes.contains(&w1) as usize;
                rec.weight2_hits += primes.contains(&w2) as usize;
            }
            rec.mean_dnf_size = dnf_total as f64 / x_samples as f64;
            Ok(rec)
        })
        .collect::<Result<_>>()?;

    let samples = (trials * x_samples) as f64;
    let sum = |g: fn(&DerivativeTrial) -> usize| records.iter().map(g).sum::<usize>() as f64;
    let fraction = sum(|r| r.within_bound) / samples;
    let freq1 = sum(|r| r.weight1_hits) / samples;
    let freq2 = sum(|r| r.weight2_hits) / samples;
    let aggregate = json!({
        "samples": trials * x_samples,
        "weight_bound": bound,
        "fraction_within_bound": fraction,
        "threshold": WEIGHT_THRESHOLD,
        "meets_threshold": fraction >= WEIGHT_THRESHOLD,
        "max_weight": records.iter().map(|r| r.max_weight).max(),
        "mean_dnf_size": records.iter().map(|r| r.mean_dnf_size).sum::<f64>() / trials as f64,
        "weight1_frequency": freq1,
        "weight1_expected": prime_probability(1),
        "weight2_frequency": freq2,
        "weight2_expected": prime_probability(2),
    });
    Ok(StudyReport::new(
        "random-derivative",
        json!({ "n": n, "trials": trials, "x_samples": x_samples, "seed": seed }),
        records.iter().map(|r| serde_json::to_value(r).unwrap()).collect(),
        aggregate,
    ))
}

/// Exact monotone gap `size^u(f) / max_x size⁺(∂f(x))`.
pub fn monogap_report(f: &TruthTable, cfg: &SearchConfig) -> Result<StudyReport> {
    let v = unate_criterion(f, cfg)?;
    let per_x: Vec<Value> = BitWord::all(f.arity())
        .map(|x| {
            let leaves = monorect_exact(&derivative_matrix(f, &x)?, cfg)?.leaves;
            Ok(json!({ "x": x.to_string(), "derivative_size": leaves }))
        })
        .collect::<Result<_>>()?;
    let aggregate = json!({
        "hazard_free_size": v.hazard_free_size,
        "max_derivative_size": v.max_derivative_size,
        "gap": v.hazard_free_size as f64 / v.max_derivative_size as f64,
        "argmax": v.argmax.to_string(),
        "unate": v.unate,
        "monotone": is_monotone(f),
        "consistent_with_unateness": v.consistent(),
        "witness": v.witness,
    });
    Ok(StudyReport::new("monogap", json!({ "n": f.arity(), "function": f.bit_string() }), per_x, aggregate))
}

/// Largest arity for which the range study runs exact protocol search.
pub const RANGE_EXACT_ARITY: usize = 4;

/// Structure of `R_{a,b}^n`: its prime sets, its derivatives at `0̄` and `1̄`,
/// the cover of `P₀` by those two points, and for small `n` the exact identity
/// `size^u(R) = size⁺(T_a) + size⁺(T_{n−b+1})`.
pub fn range_study(n: usize, a: usize, b: usize, cfg: &SearchConfig) -> Result<StudyReport> {
    if !(0 < a && a < b && b <= n) {
        return Err(Error::precondition(format!("need 0 < a < b ≤ n, got ({n}, {a}, {b})")));
    }
    if n > 10 {
        return Err(Error::ArityTooLarge { arity: n, limit: 10 });
    }
    let f = range(n, a, b);
    let (p1, p0) = prime_sets(&f)?;
    let counts = |w: &TritWord| (w.ones_mask().count_ones() as usize, w.zeros_mask().count_ones() as usize);
    let primes_match = p1.words().iter().map(counts).all(|c| c == (a, n - (b - 1)))
        && p1.len() == TritWord::all(n).filter(|w| counts(w) == (a, n - (b - 1))).count()
        && p0.words().iter().map(counts).all(|c| c == (b, 0) || c == (0, n - (a - 1)))
        && p0.len() == TritWord::all(n).filter(|w| counts(w) == (b, 0) || counts(w) == (0, n - (a - 1))).count();
    let (zero, one) = (BitWord::zeros(n), BitWord::ones(n));
    let low = threshold(n, a);
    let high = threshold(n, n - b + 1);
    let d_zero = hazard_derivative(&f, &zero)? == low;
    let d_one = hazard_derivative(&f, &one)? == high;
    let cover = p0.words().iter().all(|p| p.covers(&zero) || p.covers(&one));
    let synthesized = derivative_cover_synthesis(&f, &[zero, one], CoverSide::Implicates)?;

    let mut aggregate = json!({
        "implicants": p1.len(),
        "implicates": p0.len(),
        "primes_match": primes_match,
        "derivative_at_zero_is_low_threshold": d_zero,
        "derivative_at_one_is_high_threshold": d_one,
        "cover_condition": cover,
        "cover_formula_size": synthesized.formula.size(),
        "cover_piece_sizes": synthesized.piece_sizes,
    });
    if n <= RANGE_EXACT_ARITY {
        let full = monorect_exact(&kwu_matrix(&f)?, cfg)?.leaves;
        let s_low = monorect_exact(&kwu_matrix(&low)?, cfg)?.leaves;
        let s_high = monorect_exact(&kwu_matrix(&high)?, cfg)?.leaves;
        aggregate["hazard_free_size"] = json!(full);
        aggregate["low_threshold_size"] = json!(s_low);
        aggregate["high_threshold_size"] = json!(s_high);
        aggregate["exact_equality"] = json!(full == s_low + s_high);
    }
    Ok(StudyReport::new("range", json!({ "n": n, "a": a, "b": b }), Vec::new(), aggregate))
}

/// Compares the explicit derivative formula of `ANDREEV_{k,m}` against the
/// extension oracle on `samples` random `(f, X, Y)`.
pub fn andreev_study(k: usize, m: usize, samples: usize, seed: u64) -> Result<StudyReport> {
    let arity = (1 << k) + k * m;
    if k == 0 || m == 0 || arity > MAX_ARITY {
        return Err(Error::ArityTooLarge { arity, limit: MAX_ARITY });
    }
    let g = andreev(k, m)?;
    let records: Vec<(bool, usize)> = (0..samples)
        .into_par_iter()
        .map(|s| {
            let mut rng = trial_rng(seed, s);
            let f = random_function_with(k, &mut rng)?;
            let x = random_word(k * m, &mut rng)?;
            let y = random_word(arity, &mut rng)?;
            let d = andreev_derivative(k, m, &f, &x)?;
            let z = andreev_point(k, m, &f, &x)?;
            let perturbed = z.perturb(&y)?;
            let oracle = extension_eval(&g, &perturbed)? == Trit::U;
            let got = d.formula.eval(&y.to_trits())? == Trit::One;
            Ok((got == oracle, d.achieved_size))
        })
        .collect::<Result<_>>()?;
    let mismatches = records.iter().filter(|r| !r.0).count();

    // the zero perturbation never destabilizes
    let f0 = TruthTable::zeros(k)?;
    let x0 = BitWord::zeros(k * m);
    let d0 = andreev_derivative(k, m, &f0, &x0)?;
    let zero_ok = d0.formula.eval(&BitWord::zeros(arity).to_trits())? == Trit::Zero;

    let aggregate = json!({
        "samples": samples,
        "mismatches": mismatches,
        "zero_perturbation_is_zero": zero_ok,
        "max_achieved_size": records.iter().map(|r| r.1).max(),
        "reference_size": d0.reference_size,
        "arity": arity,
    });
    Ok(StudyReport::new("andreev", json!({ "k": k, "m": m, "samples": samples, "seed": seed }), Vec::new(), aggregate))
}
