use std::sync::OnceLock;

use serde::Serialize;

use super::{Formula, FormulaSearch};
use crate::boolfn::{hazard_derivative, named, TruthTable, MAX_ARITY};
use crate::error::{Error, Result};
use crate::implicants::{monotone_prime_implicants, prime_set, PrimeSet};
use crate::trit::BitWord;

/// Largest selector count accepted by [`mux_hazard_free`].
pub const MAX_MUX_SELECTORS: usize = 4;

/// `⋁_p ⋀_{p_i stable} lit_i`, one literal per stable coordinate: `x_i` for 1,
/// `¬x_i` for 0.
pub fn dnf_from_primes(p: &PrimeSet) -> Formula {
    let terms = p
        .words()
        .iter()
        .map(|w| {
            let lits =
                (1..=w.len()).filter_map(|i| w.get(i).unwrap().to_bool().map(|b| Formula::literal(i, b))).collect();
            Formula::and_all(lits)
        })
        .collect();
    Formula::or_all(terms)
}

/// `⋀_p ⋁_{p_i stable} lit_i` with the literal false on `p`: `x_i` for 0,
/// `¬x_i` for 1.
pub fn cnf_from_primes(p: &PrimeSet) -> Formula {
    let clauses = p
        .words()
        .iter()
        .map(|w| {
            let lits =
                (1..=w.len()).filter_map(|i| w.get(i).unwrap().to_bool().map(|b| Formula::literal(i, !b))).collect();
            Formula::or_all(lits)
        })
        .collect();
    Formula::and_all(clauses)
}

/// The smallest hazard-free formula for `mux₁(s, x₀, x₁)`, found by exhaustive
/// search over all formulas with at most five leaves.
pub fn mux_gadget() -> &'static Formula {
    static GADGET: OnceLock<Formula> = OnceLock::new();
    GADGET.get_or_init(|| {
        let mux1 = named::mux(1).unwrap();
        FormulaSearch::new(3)
            .unwrap()
            .find_hazard_free(&mux1, 5)
            .unwrap()
            .expect("a five-leaf hazard-free multiplexer exists")
    })
}

/// A hazard-free formula for `mux_n`: the gadget selects on `s_n` between two
/// copies of the construction for the lower and upper halves of the data.
pub fn mux_hazard_free(n: usize) -> Result<Formula> {
    if !(1..=MAX_MUX_SELECTORS).contains(&n) {
        return Err(Error::precondition(format!("selector count must be in 1..={MAX_MUX_SELECTORS}, got {n}")));
    }
    let data: Vec<usize> = (n + 1..=n + (1 << n)).collect();
    Ok(mux_rec(n, &data))
}

fn mux_rec(k: usize, data: &[usize]) -> Formula {
    if k == 0 {
        return Formula::Var(data[0]);
    }
    let (lo, hi) = data.split_at(data.len() / 2);
    let (a, b) = (mux_rec(k - 1, lo), mux_rec(k - 1, hi));
    mux_gadget().substitute(&|i| match i {
        1 => Formula::Var(k),
        2 => a.clone(),
        _ => b.clone(),
    })
}

/// `f(x) = mux_n(x, f(0…0), …, f(1…1))` with the data hardwired and constants
/// folded.
pub fn universal_hazard_free(f: &TruthTable) -> Result<Formula> {
    let n = f.arity();
    if n == 0 {
        return Ok(Formula::Const(f.get(0)));
    }
    let m = mux_hazard_free(n)?;
    Ok(m.substitute(&|j| if j <= n { Formula::Var(j) } else { Formula::Const(f.get(j - n - 1)) }).fold_constants())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CoverSide {
    /// Base points with `f = 0` covering `P₀`; the pieces are conjoined.
    Implicates,
    /// Base points with `f = 1` covering `P₁`; the negated pieces are disjoined.
    Implicants,
}

impl CoverSide {
    fn value(self) -> bool {
        self == CoverSide::Implicants
    }
}

/// Greedy set cover of `P_b` by the sets `P_b|ₓ`, `f(x) = b`: repeatedly picks
/// the base point covering the most uncovered primes, lowest index first on ties.
pub fn greedy_cover(f: &TruthTable, side: CoverSide) -> Result<Vec<BitWord>> {
    let b = side.value();
    let primes = prime_set(f, b)?;
    let candidates: Vec<(BitWord, Vec<usize>)> = BitWord::all(f.arity())
        .filter(|x| f.get(x.index()) == b)
        .map(|x| (x, (0..primes.len()).filter(|&i| primes.words()[i].covers(&x)).collect()))
        .collect();
    let mut covered = vec![false; primes.len()];
    let mut picked = Vec::new();
    while covered.iter().any(|c| !c) {
        let (x, set) = candidates
            .iter()
            .map(|(x, s)| (x, s, s.iter().filter(|&&i| !covered[i]).count()))
            .fold(None, |best: Option<(&BitWord, &Vec<usize>, usize)>, c| match best {
                Some(b) if b.2 >= c.2 => Some(b),
                _ => Some(c),
            })
            .map(|(x, s, _)| (*x, s))
            .ok_or_else(|| Error::Invariant("primes without a base point".into()))?;
        for &i in set {
            covered[i] = true;
        }
        picked.push(x);
    }
    Ok(picked)
}

/// The formula built from derivatives at the base points, and the size of the
/// monotone piece for each base point.
#[derive(Clone, Debug, Serialize)]
pub struct CoverFormula {
    #[serde(serialize_with = "crate::formula::serialize_display")]
    pub formula: Formula,
    pub base_points: Vec<BitWord>,
    pub piece_sizes: Vec<usize>,
}

/// For each base point `x`, the monotone DNF of `∂f(x; ·)` with `y_j` replaced
/// by `x_j` when `x_j = 0` and by `¬x_j` when `x_j = 1`. On the implicate side
/// the pieces are conjoined; on the implicant side their negations are disjoined.
pub fn derivative_cover_synthesis(f: &TruthTable, xs: &[BitWord], side: CoverSide) -> Result<CoverFormula> {
    let b = side.value();
    let primes = prime_set(f, b)?;
    let mut covered = vec![false; primes.len()];
    for x in xs {
        if f.eval(x)? != b {
            return Err(Error::precondition(format!("f({x}) is not {}", b as u8)));
        }
        for (i, p) in primes.words().iter().enumerate() {
            covered[i] |= p.covers(x);
        }
    }
    if let Some(i) = covered.iter().position(|c| !c) {
        return Err(Error::precondition(format!("base points do not cover prime {}", primes.words()[i])));
    }
    let mut pieces = Vec::new();
    let mut piece_sizes = Vec::new();
    for x in xs {
        let d = hazard_derivative(f, x)?;
        let m = dnf_from_primes(&monotone_prime_implicants(&d)?);
        piece_sizes.push(m.size());
        let lit = m.substitute(&|j| Formula::literal(j, !x.get(j).unwrap()));
        pieces.push(if b { lit.dual() } else { lit });
    }
    let formula = if b { Formula::or_all(pieces) } else { Formula::and_all(pieces) };
    Ok(CoverFormula { formula, base_points: xs.to_vec(), piece_sizes })
}

/// Monotone DNF of `T_k^n` over all weight-`k` words.
pub fn threshold_formula(n: usize, k: usize) -> Result<Formula> {
    if n > MAX_ARITY || k > n {
        return Err(Error::precondition(format!("threshold needs k ≤ n ≤ {MAX_ARITY}, got n={n}, k={k}")));
    }
    let terms = (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| Formula::and_all((1..=n).filter(|i| m >> (i - 1) & 1 == 1).map(Formula::Var).collect()))
        .collect();
    Ok(Formula::or_all(terms))
}

/// `R^n_{a,b} = T_a ∧ ¬T_b`, the negation pushed to the leaves.
pub fn range_formula(n: usize, a: usize, b: usize) -> Result<Formula> {
    if !(0 < a && a < b && b <= n) {
        return Err(Error::precondition(format!("range needs 0 < a < b ≤ n, got n={n}, a={a}, b={b}")));
    }
    Ok(threshold_formula(n, a)?.and(threshold_formula(n, b)?.dual()))
}

/// Balanced `xor_n` built from `(A ∧ ¬B) ∨ (¬A ∧ B)`.
pub fn xor_formula(n: usize) -> Result<Formula> {
    if n == 0 {
        return Ok(Formula::Const(false));
    }
    Ok(xor_rec(1, n))
}

fn xor_rec(lo: usize, hi: usize) -> Formula {
    if lo == hi {
        return Formula::Var(lo);
    }
    let mid = (lo + hi) / 2;
    let (a, b) = (xor_rec(lo, mid), xor_rec(mid + 1, hi));
    a.clone().and(b.dual()).or(a.dual().and(b))
}

#[derive(Clone, Debug, Serialize)]
pub struct AndreevDerivative {
    #[serde(serialize_with = "crate::formula::serialize_display")]
    pub formula: Formula,
    pub achieved_size: usize,
    /// `(k+1)·2^k + k·m`.
    pub reference_size: usize,
    pub arity: usize,
}

/// A monotone formula for the derivative of `ANDREEV_{k,m}` at the point
/// `(f, X)`, in the variables `(t, Y)` of the same layout.
///
/// With `s = ⊕[X]` and `σ_i = ⋁ Y_i`, the derivative is 1 iff some address `a`
/// reachable from `s` (every coordinate where `a` and `s` differ has `σ_i = 1`)
/// has `t_a = 1` or `f_a ≠ f_s`.
pub fn andreev_derivative(k: usize, m: usize, f: &TruthTable, x: &BitWord) -> Result<AndreevDerivative> {
    let t = 1usize << k;
    let arity = t + k * m;
    if arity > MAX_ARITY {
        return Err(Error::ArityTooLarge { arity, limit: MAX_ARITY });
    }
    if f.arity() != k {
        return Err(Error::LengthMismatch(k, f.arity()));
    }
    if x.len() != k * m {
        return Err(Error::LengthMismatch(k * m, x.len()));
    }
    let s = (0..k).fold(0usize, |acc, i| {
        let row = x.bits() >> (i * m) & ((1u32 << m) - 1);
        acc | ((row.count_ones() % 2) as usize) << i
    });
    let sigma = |i: usize| Formula::or_all((0..m).map(|j| Formula::Var(t + i * m + j + 1)).collect());
    let terms = (0..t)
        .map(|a| {
            let mut lits: Vec<Formula> = (0..k).filter(|i| (a ^ s) >> i & 1 == 1).map(sigma).collect();
            if f.get(a) == f.get(s) {
                lits.push(Formula::Var(a + 1));
            }
            Formula::and_all(lits)
        })
        .collect();
    let formula = Formula::or_all(terms);
    Ok(AndreevDerivative { achieved_size: formula.size(), formula, reference_size: (k + 1) * t + k * m, arity })
}

/// The full input `(f, X)` of `ANDREEV_{k,m}`.
pub fn andreev_point(k: usize, m: usize, f: &TruthTable, x: &BitWord) -> Result<BitWord> {
    let t = 1usize << k;
    let bits = (0..t).fold(0u32, |acc, a| acc | (f.get(a) as u32) << a) | x.bits() << t;
    BitWord::new(t + k * m, bits)
}
