use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::boolfn::TruthTable;
use crate::error::{Error, Result};
use crate::implicants::{prime_sets, PrimeSet};
use crate::trit::{BitWord, TritWord};

/// A valid answer of a communication game.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(untagged)]
pub enum AnswerLabel {
    /// A coordinate in `1..=n`.
    Coord(usize),
    /// An answer of a direct sum: one answer per component.
    Pair(Box<AnswerLabel>, Box<AnswerLabel>),
    /// The output of a function-type problem.
    Value(u8),
}

/// A relation matrix. Entry `(i, j)` is a bitmask over `answers`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KwMatrix {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub answers: Vec<AnswerLabel>,
    entries: Vec<Vec<u64>>,
}

impl KwMatrix {
    pub fn new(
        rows: Vec<String>,
        cols: Vec<String>,
        answers: Vec<AnswerLabel>,
        entries: Vec<Vec<u64>>,
    ) -> Result<KwMatrix> {
        if answers.len() > 64 {
            return Err(Error::precondition(format!("at most 64 answers supported, got {}", answers.len())));
        }
        if entries.len() != rows.len() {
            return Err(Error::LengthMismatch(rows.len(), entries.len()));
        }
        if let Some(r) = entries.iter().find(|r| r.len() != cols.len()) {
            return Err(Error::LengthMismatch(cols.len(), r.len()));
        }
        Ok(KwMatrix { rows, cols, answers, entries })
    }

    /// The matrix with rows `r₁` and columns `r₀`, entries `stable_diff`, answers
    /// the coordinates `1..=n`.
    pub fn from_words(n: usize, r1: &[TritWord], r0: &[TritWord]) -> Result<KwMatrix> {
        let entries = r1
            .iter()
            .map(|p| r0.iter().map(|q| Ok(p.stable_diff(q)?.0 as u64)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        KwMatrix::new(
            r1.iter().map(|w| w.to_string()).collect(),
            r0.iter().map(|w| w.to_string()).collect(),
            (1..=n).map(AnswerLabel::Coord).collect(),
            entries,
        )
    }

    /// A function-type problem: each entry is the single answer `value(i, j)`.
    pub fn from_function(rows: usize, cols: usize, value: impl Fn(usize, usize) -> bool) -> Result<KwMatrix> {
        let entries = (0..rows).map(|i| (0..cols).map(|j| 1u64 << value(i, j) as u32).collect()).collect();
        KwMatrix::new(
            (0..rows).map(|i| i.to_string()).collect(),
            (0..cols).map(|j| j.to_string()).collect(),
            vec![AnswerLabel::Value(0), AnswerLabel::Value(1)],
            entries,
        )
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> u64 {
        self.entries[i][j]
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.entries[i]
    }

    /// Entry `(i, j)` as answer labels.
    pub fn entry_labels(&self, i: usize, j: usize) -> Vec<AnswerLabel> {
        let e = self.entries[i][j];
        (0..self.answers.len()).filter(|a| e >> a & 1 == 1).map(|a| self.answers[a].clone()).collect()
    }

    pub fn has_empty_entry(&self) -> bool {
        self.entries.iter().flatten().any(|e| *e == 0)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> KwMatrix {
        KwMatrix {
            rows: rows.iter().map(|&i| self.rows[i].clone()).collect(),
            cols: cols.iter().map(|&j| self.cols[j].clone()).collect(),
            answers: self.answers.clone(),
            entries: rows.iter().map(|&i| cols.iter().map(|&j| self.entries[i][j]).collect()).collect(),
        }
    }

    pub fn transpose(&self) -> KwMatrix {
        KwMatrix {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            answers: self.answers.clone(),
            entries: (0..self.num_cols()).map(|j| (0..self.num_rows()).map(|i| self.entries[i][j]).collect()).collect(),
        }
    }

    /// Row `a` is a sub-row of row `b`: every entry of `a` is contained in the
    /// matching entry of `b`.
    pub fn is_sub_row(&self, a: usize, b: usize) -> bool {
        self.entries[a].iter().zip(&self.entries[b]).all(|(x, y)| x & !y == 0)
    }

    /// Removes every row that has a different sub-row, and every repeated row
    /// after its first occurrence. Returns the reduced matrix and the kept
    /// row indices.
    pub fn simplify_rows(&self) -> (KwMatrix, Vec<usize>) {
        let keep: Vec<usize> = (0..self.num_rows())
            .filter(|&i| {
                !(0..self.num_rows())
                    .any(|j| j != i && self.is_sub_row(j, i) && (self.entries[j] != self.entries[i] || j < i))
            })
            .collect();
        let cols: Vec<usize> = (0..self.num_cols()).collect();
        (self.submatrix(&keep, &cols), keep)
    }

    /// The column-side analogue of [`simplify_rows`](Self::simplify_rows).
    pub fn simplify_cols(&self) -> (KwMatrix, Vec<usize>) {
        let (t, keep) = self.transpose().simplify_rows();
        (t.transpose(), keep)
    }

    /// Rows `X × X'`, columns `Y × Y'`, entries the products of answer sets.
    pub fn direct_sum(&self, other: &KwMatrix) -> Result<KwMatrix> {
        let (a, b) = (self.answers.len(), other.answers.len());
        if a * b > 64 {
            return Err(Error::precondition(format!("direct sum has {} answers, limit 64", a * b)));
        }
        let answers = self
            .answers
            .iter()
            .flat_map(|x| {
                other.answers.iter().map(move |y| AnswerLabel::Pair(Box::new(x.clone()), Box::new(y.clone())))
            })
            .collect();
        let pair = |l: &str, r: &str| format!("({l},{r})");
        let rows = self.rows.iter().flat_map(|l| other.rows.iter().map(move |r| pair(l, r))).collect();
        let cols = self.cols.iter().flat_map(|l| other.cols.iter().map(move |r| pair(l, r))).collect();
        let mut entries = Vec::new();
        for i in 0..self.num_rows() {
            for i2 in 0..other.num_rows() {
                let mut row = Vec::new();
                for j in 0..self.num_cols() {
                    for j2 in 0..other.num_cols() {
                        let (e, e2) = (self.entries[i][j], other.entries[i2][j2]);
                        let mut m = 0u64;
                        for x in (0..a).filter(|x| e >> x & 1 == 1) {
                            for y in (0..b).filter(|y| e2 >> y & 1 == 1) {
                                m |= 1 << (x * b + y);
                            }
                        }
                        row.push(m);
                    }
                }
                entries.push(row);
            }
        }
        KwMatrix::new(rows, cols, answers, entries)
    }
}

impl Serialize for KwMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<Vec<Vec<AnswerLabel>>> =
            (0..self.num_rows()).map(|i| (0..self.num_cols()).map(|j| self.entry_labels(i, j)).collect()).collect();
        let mut st = s.serialize_struct("KwMatrix", 3)?;
        st.serialize_field("rows", &self.rows)?;
        st.serialize_field("cols", &self.cols)?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

/// The hazard-free KW matrix: rows `P₁`, columns `P₀`, entries `stable_diff`.
pub fn kwu_matrix(f: &TruthTable) -> Result<KwMatrix> {
    let (p1, p0) = prime_sets(f)?;
    kwu_matrix_from_primes(f.arity(), &p1, &p0)
}

pub fn kwu_matrix_from_primes(n: usize, p1: &PrimeSet, p0: &PrimeSet) -> Result<KwMatrix> {
    if p1.is_empty() || p0.is_empty() {
        return Err(Error::precondition("the function is constant"));
    }
    KwMatrix::from_words(n, p1.words(), p0.words())
}

/// The matrix of the monotone game on given primes: entry `{i : row_i = 1, col_i = 0}`.
pub fn monotone_matrix(n: usize, p1: &PrimeSet, p0: &PrimeSet) -> Result<KwMatrix> {
    let entries = p1
        .words()
        .iter()
        .map(|p| p0.words().iter().map(|q| (p.ones_mask() & q.zeros_mask()) as u64).collect())
        .collect();
    KwMatrix::new(
        p1.words().iter().map(|w| w.to_string()).collect(),
        p0.words().iter().map(|w| w.to_string()).collect(),
        (1..=n).map(AnswerLabel::Coord).collect(),
        entries,
    )
}

/// The classic KW matrix on full preimages: rows `f⁻¹(1)`, columns `f⁻¹(0)`,
/// entries the differing coordinates.
pub fn classic_kw_matrix(f: &TruthTable) -> Result<KwMatrix> {
    let ones: Vec<TritWord> = f.ones().map(|x: BitWord| x.to_trits()).collect();
    let zeros: Vec<TritWord> = f.zeros_iter().map(|x| x.to_trits()).collect();
    if ones.is_empty() || zeros.is_empty() {
        return Err(Error::precondition("the function is constant"));
    }
    KwMatrix::from_words(f.arity(), &ones, &zeros)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::is_monotone;
    use crate::boolfn::named::*;

    fn coords(m: &KwMatrix, i: usize, j: usize) -> Vec<usize> {
        (0..64).filter(|a| m.entry(i, j) >> a & 1 == 1).map(|a| a + 1).collect()
    }

    #[test]
    fn kwu_examples() {
        let m = kwu_matrix(&and(2)).unwrap();
        assert_eq!((m.num_rows(), m.num_cols()), (1, 2));
        assert_eq!(m.cols, ["0u", "u0"]);
        assert_eq!(coords(&m, 0, 0), [1]);
        assert_eq!(coords(&m, 0, 1), [2]);
        let mx = kwu_matrix(&mux(1).unwrap()).unwrap();
        assert_eq!((mx.num_rows(), mx.num_cols()), (3, 3));
        assert!(kwu_matrix(&TruthTable::constant(2, true).unwrap()).is_err());
    }

    #[test]
    fn monotone_functions_match_the_monotone_game() {
        for bits in 0..256u64 {
            let f = TruthTable::from_u64(3, bits);
            if !is_monotone(&f) || f.is_constant().is_some() {
                continue;
            }
            let (p1, p0) = prime_sets(&f).unwrap();
            let m = kwu_matrix(&f).unwrap();
            assert_eq!(m, monotone_matrix(3, &p1, &p0).unwrap());
            for i in 0..m.num_rows() {
                for j in 0..m.num_rows() {
                    assert!(i == j || m.row(i) != m.row(j));
                }
            }
            let t = m.transpose();
            for i in 0..t.num_rows() {
                for j in 0..t.num_rows() {
                    assert!(i == j || t.row(i) != t.row(j));
                }
            }
        }
    }

    #[test]
    fn no_empty_entries() {
        for bits in 1..255u64 {
            assert!(!kwu_matrix(&TruthTable::from_u64(3, bits)).unwrap().has_empty_entry());
        }
    }

    #[test]
    fn simplify_examples() {
        // r1 = ({1}, {1,2}), r2 = ({1}, {2})
        let m = KwMatrix::new(
            vec!["r1".into(), "r2".into()],
            vec!["c1".into(), "c2".into()],
            vec![AnswerLabel::Coord(1), AnswerLabel::Coord(2)],
            vec![vec![0b01, 0b11], vec![0b01, 0b10]],
        )
        .unwrap();
        let (s, keep) = m.simplify_rows();
        assert_eq!(keep, [1]);
        assert_eq!(s.rows, ["r2"]);
        let inc = kwu_matrix(&xor(2)).unwrap();
        assert_eq!(inc.simplify_rows().0, inc);
        let dup = KwMatrix::new(
            vec!["a".into(), "b".into()],
            vec!["c".into()],
            vec![AnswerLabel::Coord(1)],
            vec![vec![1], vec![1]],
        )
        .unwrap();
        assert_eq!(dup.simplify_rows().1, [0]);
    }

    #[test]
    fn direct_sum_examples() {
        let a = KwMatrix::new(vec!["x".into()], vec!["y".into()], vec![AnswerLabel::Coord(1)], vec![vec![1]]).unwrap();
        let b = KwMatrix::new(
            vec!["x'".into()],
            vec!["y'".into()],
            vec![AnswerLabel::Coord(1), AnswerLabel::Coord(2)],
            vec![vec![0b10]],
        )
        .unwrap();
        let s = a.direct_sum(&b).unwrap();
        assert_eq!(
            s.entry_labels(0, 0),
            [AnswerLabel::Pair(Box::new(AnswerLabel::Coord(1)), Box::new(AnswerLabel::Coord(2)))]
        );
        let x = kwu_matrix(&xor(2)).unwrap();
        let sum = x.direct_sum(&kwu_matrix(&and(2)).unwrap()).unwrap();
        assert_eq!((sum.num_rows(), sum.num_cols()), (2, 4));
        // membership is componentwise
        for i in 0..2 {
            for j in 0..4 {
                for (ai, al) in sum.answers.iter().enumerate() {
                    let AnswerLabel::Pair(l, r) = al else { unreachable!() };
                    let (AnswerLabel::Coord(l), AnswerLabel::Coord(r)) = (&**l, &**r) else { unreachable!() };
                    let expect = x.entry(i, j / 2) >> (l - 1) & 1 == 1
                        && coords(&kwu_matrix(&and(2)).unwrap(), 0, j % 2).contains(r);
                    assert_eq!(sum.entry(i, j) >> ai & 1 == 1, expect);
                }
            }
        }
    }

    #[test]
    fn json_dump() {
        let m = kwu_matrix(&and(2)).unwrap();
        assert_eq!(serde_json::to_string(&m).unwrap(), r#"{"rows":["11"],"cols":["0u","u0"],"entries":[[[1],[2]]]}"#);
    }

    #[test]
    fn classic_matrix() {
        let m = classic_kw_matrix(&xor(2)).unwrap();
        assert_eq!((m.num_rows(), m.num_cols()), (2, 2));
        assert!(!m.has_empty_entry());
    }
}
