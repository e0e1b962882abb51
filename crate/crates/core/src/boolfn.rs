//! Boolean functions as packed truth tables, their hazard-free extensions and
//! hazard-derivatives.
//!
//! Index convention: input `x` lives at index `Σ x_i · 2^(i-1)`, so coordinate 1
//! is the least significant bit. Every module follows it.

use std::fmt;
use std::str::FromStr;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::trit::{BitWord, Trit, TritWord};

/// Largest arity accepted for a truth table.
pub const MAX_ARITY: usize = 20;
/// Largest arity for which a full ternary table is materialized (3^13 trits).
pub const MAX_TERNARY_ARITY: usize = 13;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n: usize,
    words: Vec<u64>,
}

impl TruthTable {
    pub fn zeros(n: usize) -> Result<TruthTable> {
        if n > MAX_ARITY {
            return Err(Error::ArityTooLarge { arity: n, limit: MAX_ARITY });
        }
        Ok(TruthTable { n, words: vec![0; (1usize << n).div_ceil(64)] })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(BitWord) -> bool) -> Result<TruthTable> {
        let mut t = TruthTable::zeros(n)?;
        for i in 0..1usize << n {
            if f(BitWord::from_index(n, i)) {
                t.set(i, true);
            }
        }
        Ok(t)
    }

    /// Table whose bit `i` is bit `i` of `bits` (arity at most 6).
    pub fn from_u64(n: usize, bits: u64) -> TruthTable {
        assert!(n <= 6);
        let mask = if n == 6 { u64::MAX } else { (1u64 << (1 << n)) - 1 };
        TruthTable { n, words: vec![bits & mask] }
    }

    pub fn constant(n: usize, value: bool) -> Result<TruthTable> {
        TruthTable::from_fn(n, |_| value)
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, index: usize) -> bool {
        self.words[index / 64] >> (index % 64) & 1 == 1
    }

    pub fn set(&mut self, index: usize, v: bool) {
        let bit = 1u64 << (index % 64);
        if v {
            self.words[index / 64] |= bit;
        } else {
            self.words[index / 64] &= !bit;
        }
    }

    pub fn eval(&self, x: &BitWord) -> Result<bool> {
        self.check_arity(x.len())?;
        Ok(self.get(x.index()))
    }

    fn check_arity(&self, len: usize) -> Result<()> {
        if len == self.n {
            Ok(())
        } else {
            Err(Error::LengthMismatch(self.n, len))
        }
    }

    /// Low 64 bits of the table (the whole table for arity ≤ 6).
    pub fn as_u64(&self) -> u64 {
        self.words[0]
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_constant(&self) -> Option<bool> {
        match self.count_ones() {
            0 => Some(false),
            c if c == self.len() => Some(true),
            _ => None,
        }
    }

    pub fn negate(&self) -> TruthTable {
        let mut t = self.clone();
        for w in &mut t.words {
            *w = !*w;
        }
        t.mask_tail();
        t
    }

    fn mask_tail(&mut self) {
        let len = self.len();
        if len % 64 != 0 {
            let last = self.words.len() - 1;
            self.words[last] &= (1u64 << (len % 64)) - 1;
        }
    }

    pub fn ones(&self) -> impl Iterator<Item = BitWord> + '_ {
        BitWord::all(self.n).filter(move |x| self.get(x.index()))
    }

    pub fn zeros_iter(&self) -> impl Iterator<Item = BitWord> + '_ {
        BitWord::all(self.n).filter(move |x| !self.get(x.index()))
    }

    /// Bits as a `0`/`1` string, index 0 first.
    pub fn bit_string(&self) -> String {
        (0..self.len()).map(|i| if self.get(i) { '1' } else { '0' }).collect()
    }

    /// The table as a hexadecimal number, most significant digit first; bit `i`
    /// of the number is the value at index `i`.
    pub fn hex_string(&self) -> String {
        let digits = self.len().div_ceil(4);
        (0..digits)
            .rev()
            .map(|d| {
                let v = (0..4).fold(0u32, |acc, b| {
                    let i = 4 * d + b;
                    acc | ((i < self.len() && self.get(i)) as u32) << b
                });
                char::from_digit(v, 16).unwrap()
            })
            .collect()
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthTable(n={}, bits={})", self.n, self.bit_string())
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.n)?;
        writeln!(f, "bits={}", self.bit_string())
    }
}

impl Serialize for TruthTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("TruthTable", 2)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("bits", &self.bit_string())?;
        st.end()
    }
}

impl FromStr for TruthTable {
    type Err = Error;

    /// Parses `n=<arity>` followed by `bits=<2^n chars>` or `hexbits=<hex>`.
    /// Blank lines and `#` comments are ignored.
    fn from_str(s: &str) -> Result<TruthTable> {
        let mut n = None;
        let mut body = None;
        for line in s.lines() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) =
                line.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value, got `{line}`")))?;
            match key.trim() {
                "n" => n = Some(value.trim().parse::<usize>().map_err(|e| Error::Parse(format!("bad arity: {e}")))?),
                k @ ("bits" | "hexbits") => body = Some((k == "hexbits", value.trim().to_string())),
                other => return Err(Error::Parse(format!("unknown key `{other}`"))),
            }
        }
        let n = n.ok_or_else(|| Error::Parse("missing `n=` line".into()))?;
        let (hex, body) = body.ok_or_else(|| Error::Parse("missing `bits=` or `hexbits=` line".into()))?;
        let mut t = TruthTable::zeros(n)?;
        if hex {
            let digits: Vec<u32> = body
                .chars()
                .map(|c| c.to_digit(16).ok_or_else(|| Error::Parse(format!("bad hex digit `{c}`"))))
                .collect::<Result<_>>()?;
            if digits.len() != t.len().div_ceil(4) {
                return Err(Error::Parse(format!(
                    "expected {} hex digits for n={n}, got {}",
                    t.len().div_ceil(4),
                    digits.len()
                )));
            }
            for (d, v) in digits.iter().rev().enumerate() {
                for b in 0..4 {
                    let i = 4 * d + b;
                    if v >> b & 1 == 1 {
                        if i >= t.len() {
                            return Err(Error::Parse("hex value exceeds table length".into()));
                        }
                        t.set(i, true);
                    }
                }
            }
        } else {
            if body.len() != t.len() {
                return Err(Error::Parse(format!("expected {} bits for n={n}, got {}", t.len(), body.len())));
            }
            for (i, c) in body.chars().enumerate() {
                match c {
                    '0' => {}
                    '1' => t.set(i, true),
                    _ => return Err(Error::Parse(format!("bad bit `{c}`"))),
                }
            }
        }
        Ok(t)
    }
}

/// A ternary function given by its values on all `3^n` words (base-3 index order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TernaryTable {
    n: usize,
    values: Vec<Trit>,
}

impl TernaryTable {
    pub fn new(n: usize, values: Vec<Trit>) -> Result<TernaryTable> {
        if values.len() != 3usize.pow(n as u32) {
            return Err(Error::LengthMismatch(3usize.pow(n as u32), values.len()));
        }
        Ok(TernaryTable { n, values })
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[Trit] {
        &self.values
    }

    pub fn at(&self, x: &TritWord) -> Trit {
        self.values[x.base3_index()]
    }

    pub fn at_index(&self, idx: usize) -> Trit {
        self.values[idx]
    }

    /// Stable-preserving and ⪯-monotone. Checking the covering pairs (one `u`
    /// against each of its two resolutions at that coordinate) suffices.
    pub fn is_natural(&self) -> bool {
        let pow3: Vec<usize> = (0..self.n).map(|i| 3usize.pow(i as u32)).collect();
        for (idx, &v) in self.values.iter().enumerate() {
            let mut rest = idx;
            let mut stable = true;
            for &p in &pow3 {
                let digit = rest % 3;
                rest /= 3;
                if digit == 2 {
                    stable = false;
                    let lo = idx - 2 * p;
                    if !v.precequ(self.values[lo]) || !v.precequ(self.values[lo + p]) {
                        return false;
                    }
                }
            }
            if stable && !v.is_stable() {
                return false;
            }
        }
        true
    }
}

/// `f̃(x)`: the common value of `f` on all resolutions of `x`, or `u`.
pub fn extension_eval(f: &TruthTable, x: &TritWord) -> Result<Trit> {
    f.check_arity(x.len())?;
    Ok(extension_rec(f, x.ones_mask(), x.unstable_mask()))
}

fn extension_rec(f: &TruthTable, ones: u32, unstable: u32) -> Trit {
    if unstable == 0 {
        return Trit::from_bool(f.get(ones as usize));
    }
    let bit = unstable & unstable.wrapping_neg();
    let rest = unstable & !bit;
    let a = extension_rec(f, ones, rest);
    if a == Trit::U {
        return Trit::U;
    }
    if extension_rec(f, ones | bit, rest) == a {
        a
    } else {
        Trit::U
    }
}

/// Materializes `f̃` on all `3^n` words with a single pass: a word whose digit
/// `i` is `u` combines the two words with `0` and `1` there, both of which
/// have smaller indices.
pub fn ternary_table(f: &TruthTable) -> Result<TernaryTable> {
    let n = f.arity();
    if n > MAX_TERNARY_ARITY {
        return Err(Error::ArityTooLarge { arity: n, limit: MAX_TERNARY_ARITY });
    }
    let size = 3usize.pow(n as u32);
    let mut values = Vec::with_capacity(size);
    // base-3 digits of the running index, coordinate 1 first
    let mut digits = vec![0u8; n];
    for idx in 0..size {
        if idx > 0 {
            for d in digits.iter_mut() {
                *d += 1;
                if *d < 3 {
                    break;
                }
                *d = 0;
            }
        }
        let v = match digits.iter().position(|&d| d == 2) {
            None => {
                let bits = digits.iter().enumerate().fold(0usize, |a, (i, &d)| a | (d as usize) << i);
                Trit::from_bool(f.get(bits))
            }
            Some(i) => {
                let p = 3usize.pow(i as u32);
                let (a, b) = (values[idx - 2 * p], values[idx - p]);
                if a == b {
                    a
                } else {
                    Trit::U
                }
            }
        };
        values.push(v);
    }
    Ok(TernaryTable { n, values })
}

/// `∂f(x; ·)`: `D(y) = 1` iff `f̃(x + u·y) = u`.
pub fn hazard_derivative(f: &TruthTable, x: &BitWord) -> Result<TruthTable> {
    f.check_arity(x.len())?;
    let n = f.arity();
    TruthTable::from_fn(n, |y| extension_rec(f, x.bits() & !y.bits(), y.bits()) == Trit::U)
}

/// Same as [`hazard_derivative`] but reads `f̃` from a precomputed table.
pub fn hazard_derivative_from_table(t: &TernaryTable, x: &BitWord) -> Result<TruthTable> {
    if t.arity() != x.len() {
        return Err(Error::LengthMismatch(t.arity(), x.len()));
    }
    let n = t.arity();
    TruthTable::from_fn(n, |y| t.at(&x.perturb(&y).unwrap()) == Trit::U)
}

pub fn is_monotone(f: &TruthTable) -> bool {
    let n = f.arity();
    (0..f.len()).all(|idx| (0..n).all(|i| idx >> i & 1 == 1 || !f.get(idx) || f.get(idx | 1 << i)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Unateness {
    Positive,
    Negative,
    /// `f` does not depend on the variable.
    Both,
    None,
}

/// Per-variable unateness labels, coordinate 1 first.
pub fn unateness(f: &TruthTable) -> Vec<Unateness> {
    let n = f.arity();
    (0..n)
        .map(|i| {
            let mut pos = true;
            let mut neg = true;
            for idx in (0..f.len()).filter(|idx| idx >> i & 1 == 0) {
                let lo = f.get(idx);
                let hi = f.get(idx | 1 << i);
                pos &= lo <= hi;
                neg &= lo >= hi;
            }
            match (pos, neg) {
                (true, true) => Unateness::Both,
                (true, false) => Unateness::Positive,
                (false, true) => Unateness::Negative,
                (false, false) => Unateness::None,
            }
        })
        .collect()
}

pub fn is_unate(f: &TruthTable) -> bool {
    unateness(f).iter().all(|u| *u != Unateness::None)
}

/// `f ⋄ g (X) = f(g(X_1), …, g(X_n))` with row-major flattening: entry `(i, j)` of
/// the `n×m` input is coordinate `(i-1)·m + j`.
pub fn block_compose(f: &TruthTable, g: &TruthTable) -> Result<TruthTable> {
    let (n, m) = (f.arity(), g.arity());
    let arity = n * m;
    if arity > MAX_ARITY {
        return Err(Error::ArityTooLarge { arity, limit: MAX_ARITY });
    }
    let row_mask = (1usize << m) - 1;
    TruthTable::from_fn(arity, |x| {
        let idx = x.index();
        let inner = (0..n).fold(0usize, |acc, i| acc | (g.get(idx >> (i * m) & row_mask) as usize) << i);
        f.get(inner)
    })
}

/// Evaluates `g̃` on every row of a ternary `n×m` word.
pub fn ternary_rows(g: &TruthTable, x: &TritWord, n: usize) -> Result<TritWord> {
    let m = g.arity();
    if x.len() != n * m {
        return Err(Error::LengthMismatch(n * m, x.len()));
    }
    let trits = (0..n).map(|i| extension_eval(g, &x.slice(i * m, m))).collect::<Result<Vec<_>>>()?;
    TritWord::from_trits(&trits)
}

/// A uniformly random function from a ChaCha8 stream seeded with `seed`.
/// Output bit `i` is bit `i % 64` of the `i / 64`-th `next_u64` draw.
pub fn random_function(n: usize, seed: u64) -> Result<TruthTable> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_function_with(n, &mut rng)
}

pub fn random_function_with(n: usize, rng: &mut impl RngCore) -> Result<TruthTable> {
    let mut t = TruthTable::zeros(n)?;
    for w in &mut t.words {
        *w = rng.next_u64();
    }
    t.mask_tail();
    Ok(t)
}

/// Checks `∂h(X;Y) = ∂f(g[X]; ∂g[X;Y])` for `h = f ⋄ g` over all Boolean `X`, `Y`.
/// Returns the number of mismatching points.
pub fn chain_rule_mismatches(f: &TruthTable, g: &TruthTable) -> Result<usize> {
    let (n, m) = (f.arity(), g.arity());
    let h = block_compose(f, g)?;
    let nm = n * m;
    let row_mask = (1u32 << m) - 1;
    let g_ders: Vec<TruthTable> = BitWord::all(m).map(|x| hazard_derivative(g, &x)).collect::<Result<_>>()?;
    let f_ders: Vec<TruthTable> = BitWord::all(n).map(|x| hazard_derivative(f, &x)).collect::<Result<_>>()?;
    let mut mismatches = 0;
    for big_x in BitWord::all(nm) {
        let dh = hazard_derivative(&h, &big_x)?;
        let gx =
            (0..n).fold(0usize, |acc, i| acc | (g.get((big_x.bits() >> (i * m) & row_mask) as usize) as usize) << i);
        for big_y in BitWord::all(nm) {
            let inner = (0..n).fold(0usize, |acc, i| {
                let xi = (big_x.bits() >> (i * m) & row_mask) as usize;
                let yi = (big_y.bits() >> (i * m) & row_mask) as usize;
                acc | (g_ders[xi].get(yi) as usize) << i
            });
            if dh.get(big_y.index()) != f_ders[gx].get(inner) {
                mismatches += 1;
            }
        }
    }
    Ok(mismatches)
}

/// Frequently used functions.
pub mod named {
    use super::*;

    pub fn and(n: usize) -> TruthTable {
        TruthTable::from_fn(n, |x| x.weight() == n).unwrap()
    }

    pub fn or(n: usize) -> TruthTable {
        TruthTable::from_fn(n, |x| x.weight() > 0).unwrap()
    }

    pub fn xor(n: usize) -> TruthTable {
        TruthTable::from_fn(n, |x| x.weight() % 2 == 1).unwrap()
    }

    pub fn identity() -> TruthTable {
        TruthTable::from_u64(1, 0b10)
    }

    pub fn threshold(n: usize, k: usize) -> TruthTable {
        TruthTable::from_fn(n, |x| x.weight() >= k).unwrap()
    }

    pub fn maj3() -> TruthTable {
        threshold(3, 2)
    }

    /// `R^n_{a,b}(x) = 1` iff `a ≤ |x| < b`.
    pub fn range(n: usize, a: usize, b: usize) -> TruthTable {
        TruthTable::from_fn(n, |x| a <= x.weight() && x.weight() < b).unwrap()
    }

    /// `mux_n(s, x) = x_{bin(s)}` over `n + 2^n` variables: selectors first
    /// (`s_1` least significant), then data `x_0, …, x_{2^n - 1}`.
    pub fn mux(n: usize) -> Result<TruthTable> {
        let arity = n + (1 << n);
        if arity > MAX_ARITY {
            return Err(Error::ArityTooLarge { arity, limit: MAX_ARITY });
        }
        TruthTable::from_fn(arity, |x| {
            let s = x.index() & ((1 << n) - 1);
            x.index() >> (n + s) & 1 == 1
        })
    }

    /// `ANDREEV_{k,m}(f, X) = f(⊕_m[X])` over `2^k + k·m` variables: the truth
    /// table `f` first, then `X` row-major.
    pub fn andreev(k: usize, m: usize) -> Result<TruthTable> {
        let t = 1usize << k;
        let arity = t + k * m;
        if arity > MAX_ARITY {
            return Err(Error::ArityTooLarge { arity, limit: MAX_ARITY });
        }
        TruthTable::from_fn(arity, |x| {
            let idx = x.index();
            let sel = (0..k).fold(0usize, |acc, i| {
                let row = idx >> (t + i * m) & ((1 << m) - 1);
                acc | ((row.count_ones() % 2) as usize) << i
            });
            idx >> sel & 1 == 1
        })
    }
}
