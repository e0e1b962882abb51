//! Kleene strong three-valued logic and ternary words.
//!
//! A [`Trit`] is one of `0`, `1` (stable) or `u` (unstable). A [`TritWord`] is a
//! fixed-length sequence of trits addressed by 1-based coordinates; its text form
//! lists coordinate 1 first, e.g. `"1u0"`.
//!
//! Words are stored as two bit planes, `ones` and `unstable`, so coordinate `i`
//! carries the two-bit code `(unstable, one)`: `00` is `0`, `01` is `1`, `10` is
//! `u`. The code `11` is rejected at construction. [`TritWord::to_packed`] gives
//! the interleaved form of the same code.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Longest supported word.
pub const MAX_WORD_LEN: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Trit {
    Zero,
    One,
    U,
}

impl Trit {
    pub const ALL: [Trit; 3] = [Trit::Zero, Trit::One, Trit::U];

    pub fn from_bool(b: bool) -> Trit {
        if b {
            Trit::One
        } else {
            Trit::Zero
        }
    }

    pub fn is_stable(self) -> bool {
        self != Trit::U
    }

    pub fn to_bool(self) -> Option<bool> {
        match self {
            Trit::Zero => Some(false),
            Trit::One => Some(true),
            Trit::U => None,
        }
    }

    pub fn and(self, other: Trit) -> Trit {
        match (self, other) {
            (Trit::Zero, _) | (_, Trit::Zero) => Trit::Zero,
            (Trit::One, Trit::One) => Trit::One,
            _ => Trit::U,
        }
    }

    pub fn or(self, other: Trit) -> Trit {
        match (self, other) {
            (Trit::One, _) | (_, Trit::One) => Trit::One,
            (Trit::Zero, Trit::Zero) => Trit::Zero,
            _ => Trit::U,
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Trit {
        match self {
            Trit::Zero => Trit::One,
            Trit::One => Trit::Zero,
            Trit::U => Trit::U,
        }
    }

    /// Ternary XOR: stable only when both arguments are.
    pub fn xor(self, other: Trit) -> Trit {
        match (self.to_bool(), other.to_bool()) {
            (Some(a), Some(b)) => Trit::from_bool(a != b),
            _ => Trit::U,
        }
    }

    /// The information order: `u` lies below both stable values.
    pub fn precequ(self, other: Trit) -> bool {
        self == Trit::U || self == other
    }

    pub fn to_char(self) -> char {
        match self {
            Trit::Zero => '0',
            Trit::One => '1',
            Trit::U => 'u',
        }
    }

    pub fn from_char(c: char) -> Option<Trit> {
        match c {
            '0' => Some(Trit::Zero),
            '1' => Some(Trit::One),
            'u' | 'U' => Some(Trit::U),
            _ => None,
        }
    }

    /// Position in the canonical order `0 < 1 < u`.
    pub fn rank(self) -> u8 {
        match self {
            Trit::Zero => 0,
            Trit::One => 1,
            Trit::U => 2,
        }
    }

    pub fn from_rank(r: u8) -> Trit {
        match r {
            0 => Trit::Zero,
            1 => Trit::One,
            _ => Trit::U,
        }
    }
}

impl fmt::Display for Trit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    And,
    Or,
    Not,
}

/// Evaluates an extended De Morgan gate. `Not` takes exactly one argument, the
/// binary gates exactly two.
pub fn gate_eval(op: Gate, a: Trit, b: Option<Trit>) -> Result<Trit> {
    match (op, b) {
        (Gate::Not, None) => Ok(a.not()),
        (Gate::Not, Some(_)) => Err(Error::GateArity { op: "not", expected: 1 }),
        (Gate::And, Some(b)) => Ok(a.and(b)),
        (Gate::Or, Some(b)) => Ok(a.or(b)),
        (Gate::And, None) => Err(Error::GateArity { op: "and", expected: 2 }),
        (Gate::Or, None) => Err(Error::GateArity { op: "or", expected: 2 }),
    }
}

/// A set of 1-based coordinates, stored as a bit mask (bit `i-1` for coordinate `i`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoordSet(pub u32);

impl CoordSet {
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, coord: usize) -> bool {
        (1..=32).contains(&coord) && self.0 >> (coord - 1) & 1 == 1
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                Some(i + 1)
            }
        })
    }

    pub fn from_coords(coords: impl IntoIterator<Item = usize>) -> CoordSet {
        CoordSet(coords.into_iter().fold(0, |m, c| m | 1 << (c - 1)))
    }
}

impl Serialize for CoordSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

fn low_mask(len: usize) -> u32 {
    if len >= 32 {
        u32::MAX
    } else {
        (1u32 << len) - 1
    }
}

/// A Boolean word; coordinate `i` is bit `i-1` of `bits`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BitWord {
    len: u8,
    bits: u32,
}

impl BitWord {
    pub fn new(len: usize, bits: u32) -> Result<BitWord> {
        if len > MAX_WORD_LEN {
            return Err(Error::ArityTooLarge { arity: len, limit: MAX_WORD_LEN });
        }
        Ok(BitWord { len: len as u8, bits: bits & low_mask(len) })
    }

    /// The word whose truth-table index is `index`.
    pub fn from_index(len: usize, index: usize) -> BitWord {
        debug_assert!(len <= MAX_WORD_LEN);
        BitWord { len: len as u8, bits: index as u32 & low_mask(len) }
    }

    pub fn zeros(len: usize) -> BitWord {
        BitWord::from_index(len, 0)
    }

    pub fn ones(len: usize) -> BitWord {
        BitWord::from_index(len, low_mask(len) as usize)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn index(&self) -> usize {
        self.bits as usize
    }

    pub fn get(&self, coord: usize) -> Result<bool> {
        if coord == 0 || coord > self.len() {
            return Err(Error::CoordinateOutOfRange { index: coord, len: self.len() });
        }
        Ok(self.bits >> (coord - 1) & 1 == 1)
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn complement(&self) -> BitWord {
        BitWord { len: self.len, bits: !self.bits & low_mask(self.len()) }
    }

    pub fn to_trits(&self) -> TritWord {
        TritWord { len: self.len, ones: self.bits, unstable: 0 }
    }

    /// `self + u·y`: coordinates where `y` is 1 become `u`.
    pub fn perturb(&self, y: &BitWord) -> Result<TritWord> {
        check_len(self.len(), y.len())?;
        Ok(TritWord { len: self.len, ones: self.bits & !y.bits, unstable: y.bits })
    }

    /// All `2^len` words in index order.
    pub fn all(len: usize) -> impl Iterator<Item = BitWord> {
        (0..1usize << len).map(move |i| BitWord::from_index(len, i))
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            write!(f, "{}", self.bits >> i & 1)?;
        }
        Ok(())
    }
}

impl FromStr for BitWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<BitWord> {
        let w: TritWord = s.parse()?;
        w.to_bitword().ok_or_else(|| Error::Parse(format!("`{s}` is not a Boolean word")))
    }
}

fn check_len(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::LengthMismatch(a, b))
    }
}

/// A word over `{0, 1, u}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TritWord {
    len: u8,
    ones: u32,
    unstable: u32,
}

impl TritWord {
    /// Builds a word from its bit planes. Fails on overlapping planes (the invalid
    /// code `11`) or out-of-range bits.
    pub fn from_planes(len: usize, ones: u32, unstable: u32) -> Result<TritWord> {
        if len > MAX_WORD_LEN {
            return Err(Error::ArityTooLarge { arity: len, limit: MAX_WORD_LEN });
        }
        let m = low_mask(len);
        if ones & unstable != 0 || (ones | unstable) & !m != 0 {
            return Err(Error::Parse("invalid trit encoding".into()));
        }
        Ok(TritWord { len: len as u8, ones, unstable })
    }

    pub fn from_trits(trits: &[Trit]) -> Result<TritWord> {
        if trits.len() > MAX_WORD_LEN {
            return Err(Error::ArityTooLarge { arity: trits.len(), limit: MAX_WORD_LEN });
        }
        let mut w = TritWord { len: trits.len() as u8, ones: 0, unstable: 0 };
        for (i, t) in trits.iter().enumerate() {
            w.put(i, *t);
        }
        Ok(w)
    }

    pub fn all_u(len: usize) -> TritWord {
        TritWord { len: len as u8, ones: 0, unstable: low_mask(len) }
    }

    /// Interleaved two-bit code: bits `2(i-1)` and `2(i-1)+1` hold coordinate `i`.
    pub fn to_packed(&self) -> u64 {
        (0..self.len()).map(|i| (self.trit0(i).rank() as u64) << (2 * i)).fold(0, |a, b| a | b)
    }

    pub fn from_packed(len: usize, packed: u64) -> Result<TritWord> {
        let mut trits = Vec::with_capacity(len);
        for i in 0..len {
            match packed >> (2 * i) & 3 {
                0 => trits.push(Trit::Zero),
                1 => trits.push(Trit::One),
                2 => trits.push(Trit::U),
                _ => return Err(Error::Parse("invalid trit code 11".into())),
            }
        }
        if len < 32 && packed >> (2 * len) != 0 {
            return Err(Error::Parse("bits beyond word length".into()));
        }
        TritWord::from_trits(&trits)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn ones_mask(&self) -> u32 {
        self.ones
    }

    pub fn unstable_mask(&self) -> u32 {
        self.unstable
    }

    pub fn zeros_mask(&self) -> u32 {
        !self.ones & !self.unstable & low_mask(self.len())
    }

    pub fn stable_mask(&self) -> u32 {
        !self.unstable & low_mask(self.len())
    }

    fn trit0(&self, i: usize) -> Trit {
        if self.unstable >> i & 1 == 1 {
            Trit::U
        } else if self.ones >> i & 1 == 1 {
            Trit::One
        } else {
            Trit::Zero
        }
    }

    fn put(&mut self, i: usize, t: Trit) {
        let bit = 1u32 << i;
        self.ones &= !bit;
        self.unstable &= !bit;
        match t {
            Trit::One => self.ones |= bit,
            Trit::U => self.unstable |= bit,
            Trit::Zero => {}
        }
    }

    fn check_coord(&self, coord: usize) -> Result<()> {
        if coord == 0 || coord > self.len() {
            Err(Error::CoordinateOutOfRange { index: coord, len: self.len() })
        } else {
            Ok(())
        }
    }

    pub fn get(&self, coord: usize) -> Result<Trit> {
        self.check_coord(coord)?;
        Ok(self.trit0(coord - 1))
    }

    pub fn trits(&self) -> impl Iterator<Item = Trit> + '_ {
        (0..self.len()).map(|i| self.trit0(i))
    }

    /// `x` with coordinate `coord` set to `t`.
    pub fn replace(&self, coord: usize, t: Trit) -> Result<TritWord> {
        self.check_coord(coord)?;
        let mut w = *self;
        w.put(coord - 1, t);
        Ok(w)
    }

    /// `x` with every occurrence of `from` replaced by `to`.
    pub fn replace_all(&self, from: Trit, to: Trit) -> TritWord {
        let mask = match from {
            Trit::Zero => self.zeros_mask(),
            Trit::One => self.ones,
            Trit::U => self.unstable,
        };
        let mut w = *self;
        w.ones &= !mask;
        w.unstable &= !mask;
        match to {
            Trit::One => w.ones |= mask,
            Trit::U => w.unstable |= mask,
            Trit::Zero => {}
        }
        w
    }

    pub fn is_stable(&self) -> bool {
        self.unstable == 0
    }

    pub fn to_bitword(&self) -> Option<BitWord> {
        self.is_stable().then_some(BitWord { len: self.len, bits: self.ones })
    }

    /// Number of coordinates equal to 1.
    pub fn weight(&self) -> usize {
        self.ones.count_ones() as usize
    }

    pub fn count_zeros(&self) -> usize {
        self.zeros_mask().count_ones() as usize
    }

    pub fn count_u(&self) -> usize {
        self.unstable.count_ones() as usize
    }

    /// `x ⪯ y` in the information order, coordinatewise.
    pub fn precequ(&self, other: &TritWord) -> Result<bool> {
        check_len(self.len(), other.len())?;
        Ok(self.precequ_unchecked(other))
    }

    pub(crate) fn precequ_unchecked(&self, other: &TritWord) -> bool {
        let st = self.stable_mask();
        other.unstable & st == 0 && (self.ones ^ other.ones) & st == 0
    }

    /// Whether the Boolean word `x` is a resolution of `self`.
    pub fn covers(&self, x: &BitWord) -> bool {
        (self.ones ^ x.bits) & self.stable_mask() == 0
    }

    /// Coordinatewise ternary XOR.
    pub fn xor(&self, other: &TritWord) -> Result<TritWord> {
        check_len(self.len(), other.len())?;
        let unstable = self.unstable | other.unstable;
        Ok(TritWord { len: self.len, ones: (self.ones ^ other.ones) & !unstable, unstable })
    }

    /// Coordinates that are stable in both words and differ.
    pub fn stable_diff(&self, other: &TritWord) -> Result<CoordSet> {
        check_len(self.len(), other.len())?;
        Ok(self.stable_diff_unchecked(other))
    }

    pub(crate) fn stable_diff_unchecked(&self, other: &TritWord) -> CoordSet {
        CoordSet((self.ones ^ other.ones) & !(self.unstable | other.unstable) & low_mask(self.len()))
    }

    /// Replaces every `u` by 1.
    pub fn max_res(&self) -> BitWord {
        BitWord { len: self.len, bits: self.ones | self.unstable }
    }

    /// Replaces every `u` by 0.
    pub fn min_res(&self) -> BitWord {
        BitWord { len: self.len, bits: self.ones }
    }

    /// Lazily enumerates the `2^(#u)` resolutions, lexicographically in the
    /// unstable positions (coordinate 1 most significant).
    pub fn resolutions(&self) -> Resolutions {
        let positions: Vec<u32> = (0..self.len() as u32).filter(|i| self.unstable >> i & 1 == 1).collect();
        Resolutions { base: self.ones, len: self.len, total: 1u64 << positions.len(), positions, next: 0 }
    }

    /// Index in the base-3 enumeration of `{0,1,u}^n` (digit 2 for `u`,
    /// coordinate 1 least significant).
    pub fn base3_index(&self) -> usize {
        let mut idx = 0usize;
        for i in (0..self.len()).rev() {
            idx = idx * 3 + self.trit0(i).rank() as usize;
        }
        idx
    }

    pub fn from_base3_index(len: usize, mut idx: usize) -> TritWord {
        let mut w = TritWord { len: len as u8, ones: 0, unstable: 0 };
        for i in 0..len {
            w.put(i, Trit::from_rank((idx % 3) as u8));
            idx /= 3;
        }
        w
    }

    /// All `3^len` words in base-3 index order.
    pub fn all(len: usize) -> impl Iterator<Item = TritWord> {
        (0..3usize.pow(len as u32)).map(move |i| TritWord::from_base3_index(len, i))
    }

    pub fn concat(&self, other: &TritWord) -> Result<TritWord> {
        let len = self.len() + other.len();
        if len > MAX_WORD_LEN {
            return Err(Error::ArityTooLarge { arity: len, limit: MAX_WORD_LEN });
        }
        Ok(TritWord {
            len: len as u8,
            ones: self.ones | other.ones << self.len(),
            unstable: self.unstable | other.unstable << self.len(),
        })
    }

    /// Coordinates `from..from+len` (0-based start) as a new word.
    pub fn slice(&self, from: usize, len: usize) -> TritWord {
        let m = low_mask(len);
        TritWord { len: len as u8, ones: self.ones >> from & m, unstable: self.unstable >> from & m }
    }
}

impl Ord for TritWord {
    /// Lexicographic from coordinate 1 with `0 < 1 < u`; shorter words first.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| self.trits().map(Trit::rank).cmp(other.trits().map(Trit::rank)))
    }
}

impl PartialOrd for TritWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TritWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in self.trits() {
            write!(f, "{}", t.to_char())?;
        }
        Ok(())
    }
}

impl FromStr for TritWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<TritWord> {
        let trits = s
            .chars()
            .map(|c| Trit::from_char(c).ok_or_else(|| Error::Parse(format!("bad trit `{c}` in `{s}`"))))
            .collect::<Result<Vec<_>>>()?;
        TritWord::from_trits(&trits)
    }
}

impl From<BitWord> for TritWord {
    fn from(b: BitWord) -> TritWord {
        b.to_trits()
    }
}

impl Serialize for TritWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TritWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Serialize for BitWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub struct Resolutions {
    base: u32,
    len: u8,
    positions: Vec<u32>,
    total: u64,
    next: u64,
}

impl Iterator for Resolutions {
    type Item = BitWord;

    fn next(&mut self) -> Option<BitWord> {
        if self.next >= self.total {
            return None;
        }
        let k = self.positions.len();
        let mut bits = self.base;
        for (j, p) in self.positions.iter().enumerate() {
            if self.next >> (k - 1 - j) & 1 == 1 {
                bits |= 1 << p;
            }
        }
        self.next += 1;
        Some(BitWord { len: self.len, bits })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = (self.total - self.next) as usize;
        (r, Some(r))
    }
}
