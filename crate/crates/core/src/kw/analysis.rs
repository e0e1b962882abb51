//! Checks tying the hazard-free KW matrix of `f` to the matrices of its
//! derivatives, the unateness criterion, and the composition reduction.

use serde::Serialize;

use super::matrix::{kwu_matrix, kwu_matrix_from_primes, KwMatrix};
use super::protocol::{monorect_exact, SearchConfig};
use crate::boolfn::{block_compose, hazard_derivative, is_monotone, is_unate, TruthTable};
use crate::error::{Error, Result};
use crate::implicants::{non_unate_witness, prime_sets, UnateWitness};
use crate::trit::{BitWord, Trit, TritWord};

/// `kwu_matrix(∂f(x))`.
pub fn derivative_matrix(f: &TruthTable, x: &BitWord) -> Result<KwMatrix> {
    kwu_matrix(&hazard_derivative(f, x)?)
}

/// `M_x`: the hazard-free matrix of `f` restricted to the primes of polarity
/// `b = f(x)` deriving `x`, oriented with rows `P_{¬b}` and columns `P_b|ₓ`.
pub fn restricted_matrix(f: &TruthTable, x: &BitWord) -> Result<(KwMatrix, Vec<TritWord>, Vec<TritWord>)> {
    let b = f.eval(x)?;
    let (p1, p0) = prime_sets(f)?;
    let (other, same) = if b { (p0, p1) } else { (p1, p0) };
    let cols: Vec<TritWord> = same.restrict(x)?.words().to_vec();
    let rows: Vec<TritWord> = other.words().to_vec();
    Ok((KwMatrix::from_words(f.arity(), &rows, &cols)?, rows, cols))
}

#[derive(Clone, Debug, Serialize)]
pub struct SubmatrixReport {
    pub x: BitWord,
    pub value: bool,
    pub restricted_shape: (usize, usize),
    pub derivative_shape: (usize, usize),
    /// The derivative matrix embeds into `M_x` along the label maps.
    pub is_submatrix: bool,
    pub leaves_restricted: usize,
    pub leaves_derivative: usize,
    pub leaves_full: usize,
    /// `size⁺(∂f(x)) ≤ size^u(f)`.
    pub lower_bound_holds: bool,
    /// Row-simplifying `M_x` leaves exactly the rows of the derivative matrix.
    pub simplified_rows_match: bool,
}

impl SubmatrixReport {
    pub fn passed(&self) -> bool {
        self.is_submatrix && self.leaves_restricted == self.leaves_derivative && self.lower_bound_holds
    }
}

pub fn derivative_submatrix_check(f: &TruthTable, x: &BitWord, cfg: &SearchConfig) -> Result<SubmatrixReport> {
    if f.is_constant().is_some() {
        return Err(Error::precondition("the function is constant"));
    }
    let value = f.eval(x)?;
    let xt = x.to_trits();
    let (m, rows, cols) = restricted_matrix(f, x)?;
    let d = hazard_derivative(f, x)?;
    let (d1, d0) = prime_sets(&d)?;
    let md = kwu_matrix_from_primes(f.arity(), &d1, &d0)?;

    // σ: column p of M_x goes to p + x; π: a row of the derivative comes from the
    // first prime of the other polarity generating it.
    let sigma: Vec<usize> = d0
        .words()
        .iter()
        .map(|q| cols.iter().position(|p| p.xor(&xt).unwrap() == *q))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Invariant("derivative implicate without a source column".into()))?;
    let generate = |p: &TritWord| p.xor(&xt).unwrap().replace_all(Trit::Zero, Trit::U);
    let pi: Vec<usize> = d1
        .words()
        .iter()
        .map(|g| rows.iter().position(|p| generate(p) == *g))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Invariant("derivative implicant without a source row".into()))?;
    let is_submatrix =
        (0..md.num_rows()).all(|i| (0..md.num_cols()).all(|j| md.entry(i, j) == m.entry(pi[i], sigma[j])));

    let (simplified, _) = m.simplify_rows();
    let mut simplified_rows: Vec<Vec<u64>> =
        (0..simplified.num_rows()).map(|i| sigma.iter().map(|&j| simplified.entry(i, j)).collect()).collect();
    let mut derivative_rows: Vec<Vec<u64>> = (0..md.num_rows()).map(|i| md.row(i).to_vec()).collect();
    simplified_rows.sort();
    derivative_rows.sort();

    let leaves_restricted = monorect_exact(&m, cfg)?.leaves;
    let leaves_derivative = monorect_exact(&md, cfg)?.leaves;
    let leaves_full = monorect_exact(&kwu_matrix(f)?, cfg)?.leaves;
    Ok(SubmatrixReport {
        x: *x,
        value,
        restricted_shape: (m.num_rows(), m.num_cols()),
        derivative_shape: (md.num_rows(), md.num_cols()),
        is_submatrix,
        leaves_restricted,
        leaves_derivative,
        leaves_full,
        lower_bound_holds: leaves_derivative <= leaves_full,
        simplified_rows_match: simplified_rows == derivative_rows,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct UnateVerdict {
    /// Minimum hazard-free formula size of `f`.
    pub hazard_free_size: usize,
    /// Largest minimum monotone formula size over all derivatives.
    pub max_derivative_size: usize,
    /// First base point attaining the maximum.
    pub argmax: BitWord,
    pub unate: bool,
    pub sizes_equal: bool,
    pub witness: Option<UnateWitness>,
    /// Coordinate of the rectangle forced by the witness pair.
    pub uniform_coordinate: Option<usize>,
}

impl UnateVerdict {
    /// The sizes agree exactly when `f` is unate.
    pub fn consistent(&self) -> bool {
        self.sizes_equal == self.unate
    }
}

pub fn unate_criterion(f: &TruthTable, cfg: &SearchConfig) -> Result<UnateVerdict> {
    if f.is_constant().is_some() {
        return Err(Error::precondition("the function is constant"));
    }
    let hazard_free_size = monorect_exact(&kwu_matrix(f)?, cfg)?.leaves;
    let mut best: Option<(usize, BitWord)> = None;
    for x in BitWord::all(f.arity()) {
        let s = monorect_exact(&derivative_matrix(f, &x)?, cfg)?.leaves;
        if best.is_none_or(|(b, _)| s > b) {
            best = Some((s, x));
        }
    }
    let (max_derivative_size, argmax) = best.unwrap();
    let witness = non_unate_witness(f)?;
    Ok(UnateVerdict {
        hazard_free_size,
        max_derivative_size,
        argmax,
        unate: is_unate(f),
        sizes_equal: hazard_free_size == max_derivative_size,
        uniform_coordinate: witness.as_ref().map(|w| w.d),
        witness,
    })
}

/// `φ`: row `i` is `p_g` where `(p_f)_i` is stable and `u^m` elsewhere.
pub fn phi(pf: &TritWord, pg: &TritWord) -> Result<TritWord> {
    let blank = TritWord::all_u(pg.len());
    let mut w = TritWord::all_u(0);
    for t in pf.trits() {
        w = w.concat(if t.is_stable() { pg } else { &blank })?;
    }
    Ok(w)
}

/// `ψ(k) = (⌊(k−1)/m⌋ + 1, k − m⌊(k−1)/m⌋)`: flat coordinate to (row, column).
pub fn psi(k: usize, m: usize) -> (usize, usize) {
    let q = (k - 1) / m;
    (q + 1, k - m * q)
}

#[derive(Clone, Debug, Serialize)]
pub struct CompositionReport {
    pub prime_pairs: usize,
    pub answers_checked: usize,
    /// Answers `k` of the composed game whose `ψ(k)` is not valid in the direct sum.
    pub failures: usize,
    /// `φ` maps primes of `f` and `g` to primes of `f ⋄ g` of the same polarity.
    pub phi_preserves_primes: bool,
}

/// Verifies `KW⁺_f ⊗ KW^u_g ≤ KW^u_{f⋄g}` through `φ` and `ψ` on every pair of
/// inputs and every valid answer.
pub fn composition_reduction(f: &TruthTable, g: &TruthTable) -> Result<CompositionReport> {
    if !is_monotone(f) {
        return Err(Error::precondition("outer function must be monotone"));
    }
    let m = g.arity();
    let (f1, f0) = prime_sets(f)?;
    let (g1, g0) = prime_sets(g)?;
    let (h1, h0) = prime_sets(&block_compose(f, g)?)?;
    let mut report = CompositionReport { prime_pairs: 0, answers_checked: 0, failures: 0, phi_preserves_primes: true };
    for pf in f1.words() {
        for pg in g1.words() {
            let big_p = phi(pf, pg)?;
            report.phi_preserves_primes &= h1.contains(&big_p);
            for qf in f0.words() {
                for qg in g0.words() {
                    let big_q = phi(qf, qg)?;
                    report.phi_preserves_primes &= h0.contains(&big_q);
                    report.prime_pairs += 1;
                    let outer = pf.ones_mask() & qf.zeros_mask();
                    let inner = pg.stable_diff(qg)?;
                    for k in big_p.stable_diff(&big_q)?.iter() {
                        report.answers_checked += 1;
                        let (i, j) = psi(k, m);
                        if outer >> (i - 1) & 1 == 0 || !inner.contains(j) {
                            report.failures += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

/// `log₂ rank(M_Φ) + log₂ rank(M_Ψ)`.
pub fn direct_sum_depth_bound(rank_phi: usize, rank_psi: usize) -> f64 {
    (rank_phi as f64).log2() + (rank_psi as f64).log2()
}

/// `log₂ 3 · m + log₂ C(n, k)` with `k = round(c · log₂ n)`; report-only.
pub fn set_cover_mux_depth_bound(m: usize, n: usize, c: f64) -> f64 {
    let k = (c * (n as f64).log2()).round() as usize;
    let log_binom: f64 = (0..k.min(n)).map(|i| ((n - i) as f64 / (i + 1) as f64).log2()).sum();
    3f64.log2() * m as f64 + log_binom
}
