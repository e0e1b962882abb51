//! Prime implicants and implicates, their restrictions to base points, and the
//! structure of derivative and composition primes.

use std::fmt;

use serde::Serialize;

use crate::boolfn::{self, is_monotone, ternary_table, TernaryTable, TruthTable, Unateness};
use crate::error::{Error, Result};
use crate::trit::{BitWord, Trit, TritWord};

/// A canonically ordered, duplicate-free set of words of one polarity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeSet {
    pub polarity: bool,
    words: Vec<TritWord>,
}

impl PrimeSet {
    pub fn new(polarity: bool, mut words: Vec<TritWord>) -> PrimeSet {
        words.sort();
        words.dedup();
        PrimeSet { polarity, words }
    }

    pub fn words(&self) -> &[TritWord] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &TritWord) -> bool {
        self.words.binary_search(w).is_ok()
    }

    /// `P|ₓ`: the words deriving `x`.
    pub fn restrict(&self, x: &BitWord) -> Result<PrimeSet> {
        let mut out = Vec::new();
        for p in &self.words {
            if derives(p, x)? {
                out.push(*p);
            }
        }
        Ok(PrimeSet { polarity: self.polarity, words: out })
    }

    /// The ⪯-minimal words of the set.
    pub fn minimal(&self) -> PrimeSet {
        let words = self
            .words
            .iter()
            .filter(|w| !self.words.iter().any(|v| v != *w && v.precequ_unchecked(w)))
            .copied()
            .collect();
        PrimeSet { polarity: self.polarity, words }
    }
}

impl fmt::Display for PrimeSet {
    /// One word per line, in canonical order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for w in &self.words {
            writeln!(f, "{w}")?;
        }
        Ok(())
    }
}

/// `p` derives `x` iff `p ⪯ x`.
pub fn derives(p: &TritWord, x: &BitWord) -> Result<bool> {
    if p.len() != x.len() {
        return Err(Error::LengthMismatch(p.len(), x.len()));
    }
    Ok(p.covers(x))
}

/// Prime implicants (`b = true`) or prime implicates (`b = false`) of `f`.
pub fn prime_set(f: &TruthTable, b: bool) -> Result<PrimeSet> {
    Ok(prime_set_from_table(&ternary_table(f)?, b))
}

/// Both prime sets from one ternary table: `(P₁, P₀)`.
pub fn prime_sets(f: &TruthTable) -> Result<(PrimeSet, PrimeSet)> {
    let t = ternary_table(f)?;
    Ok((prime_set_from_table(&t, true), prime_set_from_table(&t, false)))
}

/// Scans all `3^n` words: `w` is prime when `f̃(w) = b` and raising any
/// stable coordinate to `u` leaves `f̃⁻¹(b)`.
pub fn prime_set_from_table(t: &TernaryTable, b: bool) -> PrimeSet {
    let n = t.arity();
    let target = Trit::from_bool(b);
    let pow3: Vec<usize> = (0..n).map(|i| 3usize.pow(i as u32)).collect();
    let mut words = Vec::new();
    for (idx, &v) in t.values().iter().enumerate() {
        if v != target {
            continue;
        }
        let mut rest = idx;
        let mut prime = true;
        for &p in &pow3 {
            let d = rest % 3;
            rest /= 3;
            if d != 2 && t.at_index(idx + (2 - d) * p) == target {
                prime = false;
                break;
            }
        }
        if prime {
            words.push(TritWord::from_base3_index(n, idx));
        }
    }
    PrimeSet::new(b, words)
}

/// Prime implicants of a monotone function: its minimal true points with every
/// zero raised to `u`. Works up to the truth-table arity limit.
pub fn monotone_prime_implicants(f: &TruthTable) -> Result<PrimeSet> {
    if !is_monotone(f) {
        return Err(Error::precondition("function is not monotone"));
    }
    let n = f.arity();
    let full = (1u32 << n) - 1;
    let mut words = Vec::new();
    for idx in 0..f.len() {
        if f.get(idx) && (0..n).all(|i| idx >> i & 1 == 0 || !f.get(idx & !(1 << i))) {
            words.push(TritWord::from_planes(n, idx as u32, full & !(idx as u32))?);
        }
    }
    Ok(PrimeSet::new(true, words))
}

/// `{p + x : p ∈ P_b|ₓ}` with `b = f(x)`: the prime implicates of `∂f(x)`.
pub fn derivative_prime_implicates(f: &TruthTable, x: &BitWord) -> Result<PrimeSet> {
    let b = f.eval(x)?;
    let xt = x.to_trits();
    let words = prime_set(f, b)?.restrict(x)?.words().iter().map(|p| p.xor(&xt)).collect::<Result<Vec<_>>>()?;
    Ok(PrimeSet::new(false, words))
}

/// Generators `{(p + x)[0 → u] : p ∈ P_{¬b}}` with `b = f(x)`, together with
/// their ⪯-minimal elements, which are the prime implicants of `∂f(x)`.
pub fn derivative_implicant_generators(f: &TruthTable, x: &BitWord) -> Result<(PrimeSet, PrimeSet)> {
    let b = f.eval(x)?;
    let xt = x.to_trits();
    let words = prime_set(f, !b)?
        .words()
        .iter()
        .map(|p| Ok(p.xor(&xt)?.replace_all(Trit::Zero, Trit::U)))
        .collect::<Result<Vec<_>>>()?;
    let generators = PrimeSet::new(true, words);
    let primes = generators.minimal();
    Ok((generators, primes))
}

/// The first `q ∈ P_{¬b}` (canonical order) whose only stable-and-different
/// coordinate against `p ∈ P_b` is `i`.
pub fn neighbor_witness(f: &TruthTable, p: &TritWord, i: usize) -> Result<TritWord> {
    let (p1, p0) = prime_sets(f)?;
    neighbor_in(&p1, &p0, p, i)
}

fn neighbor_in(p1: &PrimeSet, p0: &PrimeSet, p: &TritWord, i: usize) -> Result<TritWord> {
    let other = if p1.contains(p) {
        p0
    } else if p0.contains(p) {
        p1
    } else {
        return Err(Error::precondition(format!("{p} is not a prime implicant or implicate")));
    };
    if !p.get(i)?.is_stable() {
        return Err(Error::precondition(format!("coordinate {i} of {p} is not stable")));
    }
    let want = 1u32 << (i - 1);
    other
        .words()
        .iter()
        .find(|q| p.stable_diff_unchecked(q).0 == want)
        .copied()
        .ok_or_else(|| Error::Invariant(format!("no neighbor of {p} at coordinate {i}")))
}

/// Prime pairs certifying that `f` is not unate in `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnateWitness {
    pub d: usize,
    /// `(p₁)_d = 0`, `(p₀)_d = 1`, differing stably only at `d`.
    pub p1: TritWord,
    pub p0: TritWord,
    /// `(q₁)_d = 1`, `(q₀)_d = 0`, differing stably only at `d`.
    pub q1: TritWord,
    pub q0: TritWord,
}

/// `None` iff `f` is unate. Otherwise `d` is the first non-unate coordinate and
/// the pairs are the first in canonical order.
pub fn non_unate_witness(f: &TruthTable) -> Result<Option<UnateWitness>> {
    let Some(d) = boolfn::unateness(f).iter().position(|u| *u == Unateness::None).map(|i| i + 1) else {
        return Ok(None);
    };
    let (p1s, p0s) = prime_sets(f)?;
    let pair = |val: Trit| -> Result<(TritWord, TritWord)> {
        for p in p1s.words().iter().filter(|p| p.get(d).unwrap() == val) {
            if let Ok(q) = neighbor_in(&p1s, &p0s, p, d) {
                return Ok((*p, q));
            }
        }
        Err(Error::Invariant(format!("no prime pair at coordinate {d}")))
    };
    let (p1, p0) = pair(Trit::Zero)?;
    let (q1, q0) = pair(Trit::One)?;
    Ok(Some(UnateWitness { d, p1, p0, q1, q0 }))
}

/// Primes of polarity `b` of `f ⋄ g` assembled from primes of `f`: every row
/// `i` of a prime `p_f ∈ P_b^(f)` becomes a prime of `g` of polarity `(p_f)_i`
/// when that is stable, and `u^m` otherwise.
pub fn composition_primes(f: &TruthTable, g: &TruthTable, b: bool) -> Result<PrimeSet> {
    let (n, m) = (f.arity(), g.arity());
    if n * m > boolfn::MAX_TERNARY_ARITY {
        return Err(Error::ArityTooLarge { arity: n * m, limit: boolfn::MAX_TERNARY_ARITY });
    }
    let (g1, g0) = prime_sets(g)?;
    let umask = TritWord::all_u(m);
    let mut out = Vec::new();
    for pf in prime_set(f, b)?.words() {
        let choices: Vec<&[TritWord]> = pf
            .trits()
            .map(|t| match t {
                Trit::One => g1.words(),
                Trit::Zero => g0.words(),
                Trit::U => std::slice::from_ref(&umask),
            })
            .collect();
        if choices.iter().any(|c| c.is_empty()) {
            continue;
        }
        let mut counters = vec![0usize; n];
        loop {
            let mut w = TritWord::all_u(0);
            for (i, c) in counters.iter().enumerate() {
                w = w.concat(&choices[i][*c])?;
            }
            out.push(w);
            let mut i = 0;
            while i < n {
                counters[i] += 1;
                if counters[i] < choices[i].len() {
                    break;
                }
                counters[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
    }
    Ok(PrimeSet::new(b, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::named::*;
    use crate::boolfn::{block_compose, extension_eval, hazard_derivative, random_function, unateness};

    fn w(s: &str) -> TritWord {
        s.parse().unwrap()
    }

    fn set(b: bool, ws: &[&str]) -> PrimeSet {
        PrimeSet::new(b, ws.iter().map(|s| w(s)).collect())
    }

    fn example() -> TruthTable {
        TruthTable::from_fn(3, |x| ["000", "001", "011", "111"].contains(&x.to_string().as_str())).unwrap()
    }

    /// Primality straight from the definition, via the recursive extension.
    fn brute_primes(f: &TruthTable, b: bool) -> PrimeSet {
        let target = Trit::from_bool(b);
        let words = TritWord::all(f.arity())
            .filter(|x| extension_eval(f, x).unwrap() == target)
            .filter(|x| {
                (1..=x.len()).all(|i| {
                    !x.get(i).unwrap().is_stable()
                        || extension_eval(f, &x.replace(i, Trit::U).unwrap()).unwrap() != target
                })
            })
            .collect();
        PrimeSet::new(b, words)
    }

    #[test]
    fn prime_set_examples() {
        assert_eq!(prime_set(&example(), true).unwrap(), set(true, &["u11", "0u1", "00u"]));
        assert_eq!(prime_set(&maj3(), true).unwrap(), set(true, &["11u", "1u1", "u11"]));
        assert_eq!(prime_set(&mux(1).unwrap(), true).unwrap(), set(true, &["01u", "1u1", "u11"]));
        assert!(prime_set(&TruthTable::constant(2, false).unwrap(), true).unwrap().is_empty());
        assert_eq!(prime_set(&TruthTable::constant(2, true).unwrap(), true).unwrap(), set(true, &["uu"]));
    }

    #[test]
    fn prime_set_matches_definition_oracle() {
        for bits in 0..256u64 {
            let f = TruthTable::from_u64(3, bits);
            for b in [false, true] {
                assert_eq!(prime_set(&f, b).unwrap(), brute_primes(&f, b));
            }
        }
    }

    #[test]
    fn canonical_order_and_text() {
        let p = prime_set(&maj3(), false).unwrap();
        assert_eq!(p.to_string(), "00u\n0u0\nu00\n");
    }

    #[test]
    fn derives_and_restrict() {
        let x: BitWord = "011".parse().unwrap();
        assert!(derives(&w("u11"), &x).unwrap());
        assert!(!derives(&w("0u1"), &"111".parse().unwrap()).unwrap());
        assert!(derives(&w("u1"), &x).is_err());
        let p0 = prime_set(&and(2), false).unwrap();
        assert_eq!(p0.restrict(&"00".parse().unwrap()).unwrap(), set(false, &["0u", "u0"]));
    }

    #[test]
    fn derivative_primes_examples() {
        let d = derivative_prime_implicates(&and(2), &"00".parse().unwrap()).unwrap();
        assert_eq!(d, set(false, &["0u", "u0"]));
        let r = range(3, 1, 3);
        let d = derivative_prime_implicates(&r, &BitWord::zeros(3)).unwrap();
        assert_eq!(d, prime_set(&threshold(3, 1), false).unwrap());

        let (gens, primes) = derivative_implicant_generators(&example(), &"110".parse().unwrap()).unwrap();
        assert_eq!(gens, set(true, &["uu1", "1u1", "11u"]));
        assert!(!primes.contains(&w("1u1")));
        assert_eq!(primes, set(true, &["uu1", "11u"]));

        let (gens, primes) = derivative_implicant_generators(&xor(2), &"00".parse().unwrap()).unwrap();
        assert_eq!(gens, set(true, &["u1", "1u"]));
        assert_eq!(primes, prime_set(&or(2), true).unwrap());
    }

    #[test]
    fn derivative_prime_structure_for_all_three_variable_functions() {
        for bits in 0..256u64 {
            let f = TruthTable::from_u64(3, bits);
            for x in BitWord::all(3) {
                let d = hazard_derivative(&f, &x).unwrap();
                assert_eq!(derivative_prime_implicates(&f, &x).unwrap(), prime_set(&d, false).unwrap());
                let (gens, primes) = derivative_implicant_generators(&f, &x).unwrap();
                let direct = prime_set(&d, true).unwrap();
                assert_eq!(primes, direct);
                for g in gens.words() {
                    assert_eq!(extension_eval(&d, g).unwrap(), Trit::One);
                }
                for p in direct.words() {
                    assert!(gens.contains(p));
                }
            }
            if is_monotone(&f) {
                let x = BitWord::zeros(3);
                if !f.get(0) {
                    assert_eq!(derivative_prime_implicates(&f, &x).unwrap(), prime_set(&f, false).unwrap());
                }
            }
        }
    }

    #[test]
    fn monotone_structure() {
        for bits in 0..256u64 {
            let f = TruthTable::from_u64(3, bits);
            if !is_monotone(&f) {
                continue;
            }
            let (p1, p0) = prime_sets(&f).unwrap();
            assert!(p1.words().iter().all(|p| p.zeros_mask() == 0));
            assert!(p0.words().iter().all(|p| p.ones_mask() == 0));
            assert_eq!(monotone_prime_implicants(&f).unwrap(), p1);
            // p₁ is a prime implicant iff min_res(p₁) is a minimal true point
            for p in &p1.words {
                let z = p.min_res();
                assert!(f.get(z.index()));
                for i in 0..3 {
                    if z.bits() >> i & 1 == 1 {
                        assert!(!f.get(z.index() & !(1 << i)));
                    }
                }
            }
            for p in &p0.words {
                let z = p.max_res();
                assert!(!f.get(z.index()));
                for i in 0..3 {
                    if z.bits() >> i & 1 == 0 {
                        assert!(f.get(z.index() | 1 << i));
                    }
                }
            }
        }
        assert!(monotone_prime_implicants(&xor(2)).is_err());
    }

    #[test]
    fn unateness_matches_prime_structure() {
        for bits in 0..256u64 {
            let f = TruthTable::from_u64(3, bits);
            let (p1, p0) = prime_sets(&f).unwrap();
            let labels = unateness(&f);
            for i in 1..=3 {
                let pos = p1.words().iter().all(|p| p.get(i).unwrap() != Trit::Zero)
                    && p0.words().iter().all(|p| p.get(i).unwrap() != Trit::One);
                let neg = p1.words().iter().all(|p| p.get(i).unwrap() != Trit::One)
                    && p0.words().iter().all(|p| p.get(i).unwrap() != Trit::Zero);
                let label = labels[i - 1];
                assert_eq!(pos, matches!(label, Unateness::Positive | Unateness::Both));
                assert_eq!(neg, matches!(label, Unateness::Negative | Unateness::Both));
            }
        }
    }

    #[test]
    fn prime_pairs_never_share_a_resolution() {
        for bits in 0..256u64 {
            let f = TruthTable::from_u64(3, bits);
            let (p1, p0) = prime_sets(&f).unwrap();
            for a in p1.words() {
                for b in p0.words() {
                    assert!(!a.stable_diff(b).unwrap().is_empty());
                }
            }
        }
    }

    #[test]
    fn neighbor_witness_examples() {
        assert_eq!(neighbor_witness(&maj3(), &w("11u"), 1).unwrap(), w("0u0"));
        assert_eq!(neighbor_witness(&xor(2), &w("01"), 2).unwrap(), w("00"));
        assert_eq!(neighbor_witness(&and(2), &w("11"), 1).unwrap(), w("0u"));
        assert!(neighbor_witness(&maj3(), &w("11u"), 3).is_err());
        assert!(neighbor_witness(&maj3(), &w("111"), 1).is_err());
    }

    #[test]
    fn neighbors_exist_for_every_stable_coordinate() {
        for bits in 1..255u64 {
            let f = TruthTable::from_u64(3, bits);
            let (p1, p0) = prime_sets(&f).unwrap();
            for p in p1.words().iter().chain(p0.words()) {
                for i in 1..=3 {
                    if p.get(i).unwrap().is_stable() {
                        let q = neighbor_in(&p1, &p0, p, i).unwrap();
                        assert_eq!(p.stable_diff(&q).unwrap().iter().collect::<Vec<_>>(), [i]);
                    }
                }
            }
        }
    }

    #[test]
    fn non_unate_witness_examples() {
        let wx = non_unate_witness(&xor(2)).unwrap().unwrap();
        assert_eq!(wx, UnateWitness { d: 1, p1: w("01"), p0: w("11"), q1: w("10"), q0: w("00") });
        assert!(non_unate_witness(&and(2)).unwrap().is_none());
        assert!(non_unate_witness(&maj3()).unwrap().is_none());
        for bits in 0..256u64 {
            let f = TruthTable::from_u64(3, bits);
            let wit = non_unate_witness(&f).unwrap();
            assert_eq!(wit.is_none(), boolfn::is_unate(&f));
            if let Some(wt) = wit {
                let d = wt.d;
                assert_eq!(wt.p1.get(d).unwrap(), Trit::Zero);
                assert_eq!(wt.p0.get(d).unwrap(), Trit::One);
                assert_eq!(wt.q1.get(d).unwrap(), Trit::One);
                assert_eq!(wt.q0.get(d).unwrap(), Trit::Zero);
                assert_eq!(wt.p1.stable_diff(&wt.p0).unwrap().0, 1 << (d - 1));
                assert_eq!(wt.q1.stable_diff(&wt.q0).unwrap().0, 1 << (d - 1));
            }
        }
    }

    #[test]
    fn composition_primes_examples() {
        assert_eq!(composition_primes(&or(2), &and(2), true).unwrap(), set(true, &["11uu", "uu11"]));
        let p = composition_primes(&and(2), &or(2), true).unwrap();
        assert_eq!(p.len(), 4);
        let g = random_function(3, 4).unwrap();
        assert_eq!(composition_primes(&identity(), &g, true).unwrap(), prime_set(&g, true).unwrap());
    }

    #[test]
    fn composition_primes_match_brute_force() {
        for fb in 0..16u64 {
            for gb in 0..16u64 {
                let (f, g) = (TruthTable::from_u64(2, fb), TruthTable::from_u64(2, gb));
                let h = block_compose(&f, &g).unwrap();
                for b in [false, true] {
                    assert_eq!(composition_primes(&f, &g, b).unwrap(), prime_set(&h, b).unwrap(), "f={fb} g={gb}");
                }
            }
        }
    }
}
