use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;

use super::Formula;
use crate::boolfn::{extension_eval, ternary_table, TruthTable, MAX_TERNARY_ARITY};
use crate::error::{Error, Result};
use crate::trit::{Trit, TritWord};

#[derive(Clone, Debug, Serialize)]
pub struct HazardReport {
    pub arity: usize,
    /// The Boolean function the formula computes.
    pub function: TruthTable,
    /// Inputs where the formula outputs `u` although `f̃` is stable, sorted.
    pub witnesses: Vec<TritWord>,
    pub hazard_free: bool,
    pub inputs_checked: usize,
    pub sampled: bool,
}

/// Ternary values of every node as two bit planes over all `3^n` inputs,
/// stored as `(is_one, is_zero)`.
struct Planes {
    one: Vec<u64>,
    zero: Vec<u64>,
}

fn var_planes(n: usize, i: usize) -> Planes {
    let size = 3usize.pow(n as u32);
    let words = size.div_ceil(64);
    let p = 3usize.pow(i as u32 - 1);
    let mut one = vec![0u64; words];
    let mut zero = vec![0u64; words];
    for idx in 0..size {
        match idx / p % 3 {
            0 => zero[idx / 64] |= 1 << (idx % 64),
            1 => one[idx / 64] |= 1 << (idx % 64),
            _ => {}
        }
    }
    Planes { one, zero }
}

fn eval_planes(f: &Formula, n: usize, vars: &mut Vec<Option<Planes>>) -> Planes {
    let words = 3usize.pow(n as u32).div_ceil(64);
    match f {
        Formula::Const(b) => {
            let (on, off) = if *b { (u64::MAX, 0) } else { (0, u64::MAX) };
            Planes { one: vec![on; words], zero: vec![off; words] }
        }
        Formula::Var(i) => {
            let slot = &mut vars[*i - 1];
            let p = slot.get_or_insert_with(|| var_planes(n, *i));
            Planes { one: p.one.clone(), zero: p.zero.clone() }
        }
        Formula::Not(a) => {
            let p = eval_planes(a, n, vars);
            Planes { one: p.zero, zero: p.one }
        }
        Formula::And(a, b) => {
            let (x, y) = (eval_planes(a, n, vars), eval_planes(b, n, vars));
            Planes {
                one: x.one.iter().zip(&y.one).map(|(a, b)| a & b).collect(),
                zero: x.zero.iter().zip(&y.zero).map(|(a, b)| a | b).collect(),
            }
        }
        Formula::Or(a, b) => {
            let (x, y) = (eval_planes(a, n, vars), eval_planes(b, n, vars));
            Planes {
                one: x.one.iter().zip(&y.one).map(|(a, b)| a | b).collect(),
                zero: x.zero.iter().zip(&y.zero).map(|(a, b)| a & b).collect(),
            }
        }
    }
}

/// Evaluates `f` on all `3^n` ternary inputs and reports every hazard.
pub fn hazard_check(f: &Formula, n: usize) -> Result<HazardReport> {
    if n > MAX_TERNARY_ARITY {
        return Err(Error::ArityTooLarge { arity: n, limit: MAX_TERNARY_ARITY });
    }
    let function = f.truth_table(n)?;
    let ext = ternary_table(&function)?;
    let mut vars = (0..n).map(|_| None).collect();
    let planes = eval_planes(f, n, &mut vars);
    let size = 3usize.pow(n as u32);
    let mut witnesses = Vec::new();
    for idx in 0..size {
        let (w, b) = (idx / 64, idx % 64);
        let unstable = (planes.one[w] | planes.zero[w]) >> b & 1 == 0;
        if unstable && ext.at_index(idx) != Trit::U {
            witnesses.push(TritWord::from_base3_index(n, idx));
        }
    }
    witnesses.sort();
    Ok(HazardReport {
        arity: n,
        hazard_free: witnesses.is_empty(),
        function,
        witnesses,
        inputs_checked: size,
        sampled: false,
    })
}

/// Checks `samples` uniformly random ternary inputs drawn from a seeded stream.
/// A clean result is evidence, not proof.
pub fn hazard_check_sampled(f: &Formula, n: usize, samples: usize, seed: u64) -> Result<HazardReport> {
    let function = f.truth_table(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut witnesses = Vec::new();
    for _ in 0..samples {
        let trits: Vec<Trit> = (0..n).map(|_| Trit::from_rank((rng.next_u32() % 3) as u8)).collect();
        let x = TritWord::from_trits(&trits)?;
        if f.eval(&x)? == Trit::U && extension_eval(&function, &x)? != Trit::U {
            witnesses.push(x);
        }
    }
    witnesses.sort();
    witnesses.dedup();
    Ok(HazardReport {
        arity: n,
        hazard_free: witnesses.is_empty(),
        function,
        witnesses,
        inputs_checked: samples,
        sampled: true,
    })
}
