//! Exact rank over the rationals by fraction-free (Bareiss) elimination.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::trit::TritWord;

/// Largest matrix side produced by [`named_matrix`].
pub const MAX_NAMED_SIDE: usize = 1 << 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl ExactMatrix {
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> i64) -> Result<ExactMatrix> {
        if rows == 0 || cols == 0 {
            return Err(Error::precondition("matrix dimensions must be positive"));
        }
        let data = (0..rows * cols).map(|k| BigInt::from(f(k / cols, k % cols))).collect();
        Ok(ExactMatrix { rows, cols, data })
    }

    pub fn identity(n: usize) -> Result<ExactMatrix> {
        ExactMatrix::from_fn(n, n, |i, j| (i == j) as i64)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn rank(&self) -> usize {
        rank_exact(self)
    }
}

/// Rank via Bareiss elimination: every intermediate value is an exact minor,
/// so all divisions are exact.
pub fn rank_exact(m: &ExactMatrix) -> usize {
    let (rows, cols) = (m.rows, m.cols);
    let mut a: Vec<Vec<BigInt>> = (0..rows).map(|i| m.data[i * cols..(i + 1) * cols].to_vec()).collect();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..rows {
            for k in c + 1..cols {
                let v = (&a[rank][c] * &a[r][k] - &a[r][c] * &a[rank][k]) / &prev;
                a[r][k] = v;
            }
            a[r][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
    }
    rank
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedMatrix {
    /// Rows and columns all ternary words of length `n` in canonical order;
    /// entry 1 iff the two words have a common resolution.
    SubcubeIntersect(usize),
    /// Rows and columns all subsets of `[n]` by binary encoding; entry 1 iff
    /// the sets are disjoint. This is the complement of `I_n`, which has the
    /// same protocols and full rank.
    Disjointness(usize),
    /// Rows and columns the `l`-subsets of `[n]` (`1 ≤ l ≤ n/2`) in sorted
    /// order; entry 1 iff the sets are disjoint.
    DisjointnessL { n: usize, l: usize },
}

pub fn named_matrix(kind: NamedMatrix) -> Result<ExactMatrix> {
    let side = match kind {
        NamedMatrix::SubcubeIntersect(n) => 3usize.checked_pow(n as u32),
        NamedMatrix::Disjointness(n) => 2usize.checked_pow(n as u32),
        NamedMatrix::DisjointnessL { n, l } => {
            if l == 0 || 2 * l > n {
                return Err(Error::precondition(format!("need 1 ≤ l ≤ n/2, got n={n}, l={l}")));
            }
            Some(l_subsets(n, l).len())
        }
    };
    let side =
        side.filter(|s| *s <= MAX_NAMED_SIDE).ok_or_else(|| Error::precondition("matrix too large for exact rank"))?;
    match kind {
        NamedMatrix::SubcubeIntersect(n) => {
            let mut words: Vec<TritWord> = TritWord::all(n).collect();
            words.sort();
            ExactMatrix::from_fn(side, side, |i, j| words[i].stable_diff_unchecked(&words[j]).is_empty() as i64)
        }
        NamedMatrix::Disjointness(_) => ExactMatrix::from_fn(side, side, |i, j| (i & j == 0) as i64),
        NamedMatrix::DisjointnessL { n, l } => {
            let sets = l_subsets(n, l);
            ExactMatrix::from_fn(side, side, |i, j| (sets[i] & sets[j] == 0) as i64)
        }
    }
}

/// `l`-subsets of `[n]` as bitmasks, sorted by their element lists.
fn l_subsets(n: usize, l: usize) -> Vec<u32> {
    let mut sets: Vec<u32> = (0u32..1 << n).filter(|m| m.count_ones() as usize == l).collect();
    sets.sort_by_key(|m| (0..n).filter(|i| m >> i & 1 == 1).collect::<Vec<_>>());
    sets
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kw::matrix::KwMatrix;
    use crate::kw::protocol::monorect;

    /// Floating-point elimination with partial pivoting; reliable for the tiny
    /// integer matrices used here.
    fn float_rank(m: &ExactMatrix) -> usize {
        use num_traits::ToPrimitive;
        let mut a: Vec<Vec<f64>> =
            (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).to_f64().unwrap()).collect()).collect();
        let mut rank = 0;
        for c in 0..m.cols() {
            let p = (rank..m.rows()).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs()));
            let Some(p) = p.filter(|&p| a[p][c].abs() > 1e-9) else { continue };
            a.swap(rank, p);
            for r in rank + 1..m.rows() {
                let factor = a[r][c] / a[rank][c];
                for k in c..m.cols() {
                    a[r][k] -= factor * a[rank][k];
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn examples() {
        assert_eq!(ExactMatrix::identity(4).unwrap().rank(), 4);
        let s1 = named_matrix(NamedMatrix::SubcubeIntersect(1)).unwrap();
        // canonical order 0, 1, u
        let expect = [[1, 0, 1], [0, 1, 1], [1, 1, 1]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(*s1.get(i, j), BigInt::from(expect[i][j]));
            }
        }
        assert_eq!(s1.rank(), 3);
        assert_eq!(named_matrix(NamedMatrix::Disjointness(2)).unwrap().rank(), 4);
        assert_eq!(named_matrix(NamedMatrix::SubcubeIntersect(2)).unwrap().rank(), 9);
        assert_eq!(named_matrix(NamedMatrix::DisjointnessL { n: 4, l: 2 }).unwrap().rank(), 6);
        assert!(named_matrix(NamedMatrix::DisjointnessL { n: 4, l: 3 }).is_err());
        assert!(ExactMatrix::from_fn(0, 3, |_, _| 0).is_err());
    }

    #[test]
    fn bareiss_matches_float_elimination() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..40 {
            let (r, c) = (1 + next() as usize % 6, 1 + next() as usize % 6);
            let vals: Vec<i64> = (0..r * c).map(|_| (next() % 7) as i64 - 3).collect();
            let m = ExactMatrix::from_fn(r, c, |i, j| vals[i * c + j]).unwrap();
            assert_eq!(m.rank(), float_rank(&m));
        }
        // a rank-deficient product
        let m = ExactMatrix::from_fn(5, 5, |i, j| ((i + 1) * (j + 2)) as i64).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn rank_bounds_the_leaf_count() {
        for kind in
            [NamedMatrix::SubcubeIntersect(1), NamedMatrix::Disjointness(2), NamedMatrix::DisjointnessL { n: 4, l: 2 }]
        {
            let e = named_matrix(kind).unwrap();
            let k = KwMatrix::from_function(e.rows(), e.cols(), |i, j| !e.get(i, j).is_zero()).unwrap();
            assert!(monorect(&k).unwrap() >= 2 * e.rank() - 1, "{kind:?}");
        }
    }
}
