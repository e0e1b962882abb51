//! Exact minimum protocols by memoized search over rectangles.
//!
//! A rectangle `(R, C)` is a leaf when some answer lies in every entry;
//! otherwise a protocol splits `R` or `C` into two nonempty parts. The search
//! minimizes the number of leaves and, independently, the depth.

use std::collections::HashMap;
use std::time::Instant;

use serde::Serialize;

use super::matrix::{AnswerLabel, KwMatrix};
use crate::error::{Error, Result};

pub const DEFAULT_LABEL_LIMIT: usize = 26;

#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    /// Largest `rows + cols` accepted.
    pub label_limit: usize,
    pub deadline: Option<Instant>,
    pub build_tree: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { label_limit: DEFAULT_LABEL_LIMIT, deadline: None, build_tree: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Alice speaks: the row set is split.
    Rows,
    /// Bob speaks: the column set is split.
    Cols,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProtocolTree {
    Leaf { answer: AnswerLabel, rows: Vec<usize>, cols: Vec<usize> },
    Split { side: Side, left: Box<ProtocolTree>, right: Box<ProtocolTree> },
}

impl ProtocolTree {
    pub fn leaves(&self) -> usize {
        match self {
            ProtocolTree::Leaf { .. } => 1,
            ProtocolTree::Split { left, right, .. } => left.leaves() + right.leaves(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            ProtocolTree::Leaf { .. } => 0,
            ProtocolTree::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    /// Leaf rectangles in left-to-right order.
    pub fn rectangles(&self) -> Vec<(&AnswerLabel, &[usize], &[usize])> {
        match self {
            ProtocolTree::Leaf { answer, rows, cols } => vec![(answer, rows.as_slice(), cols.as_slice())],
            ProtocolTree::Split { left, right, .. } => {
                let mut v = left.rectangles();
                v.extend(right.rectangles());
                v
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProtocolResult {
    pub leaves: usize,
    pub depth: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tree: Option<ProtocolTree>,
}

struct Search<'a> {
    m: &'a KwMatrix,
    memo: HashMap<(u64, u64), (u32, u32)>,
    deadline: Option<Instant>,
    visited: u64,
}

fn lowest(mask: u64) -> u64 {
    mask & mask.wrapping_neg()
}

/// Proper nonempty subsets of `mask` containing its lowest bit, each
/// bipartition therefore produced once.
fn halves(mask: u64) -> impl Iterator<Item = u64> {
    let low = lowest(mask);
    let rest = mask & !low;
    // subsets of `rest` in decreasing order, `rest` itself excluded
    let mut next = (rest != 0).then(|| (rest - 1) & rest);
    std::iter::from_fn(move || {
        let sub = next?;
        next = (sub != 0).then(|| (sub - 1) & rest);
        Some(low | sub)
    })
}

impl Search<'_> {
    fn common(&self, rows: u64, cols: u64) -> u64 {
        let mut acc = u64::MAX;
        let mut r = rows;
        while r != 0 {
            let i = r.trailing_zeros() as usize;
            r &= r - 1;
            let row = self.m.row(i);
            let mut c = cols;
            while c != 0 {
                let j = c.trailing_zeros() as usize;
                c &= c - 1;
                acc &= row[j];
            }
            if acc == 0 {
                return 0;
            }
        }
        acc
    }

    fn solve(&mut self, rows: u64, cols: u64) -> Result<(u32, u32)> {
        if let Some(&v) = self.memo.get(&(rows, cols)) {
            return Ok(v);
        }
        self.visited += 1;
        if self.visited % 4096 == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() > d {
                    return Err(Error::BudgetExceeded);
                }
            }
        }
        let result = if self.common(rows, cols) != 0 {
            (1, 0)
        } else {
            let mut best = (u32::MAX, u32::MAX);
            'sides: for side in [Side::Rows, Side::Cols] {
                let mask = if side == Side::Rows { rows } else { cols };
                for part in halves(mask) {
                    let (a, b) = match side {
                        Side::Rows => (self.solve(part, cols)?, self.solve(rows & !part, cols)?),
                        Side::Cols => (self.solve(rows, part)?, self.solve(rows, cols & !part)?),
                    };
                    best.0 = best.0.min(a.0 + b.0);
                    best.1 = best.1.min(1 + a.1.max(b.1));
                    if best == (2, 1) {
                        break 'sides;
                    }
                }
            }
            best
        };
        self.memo.insert((rows, cols), result);
        Ok(result)
    }

    /// Rebuilds a leaf-optimal protocol from the memo.
    fn tree(&self, rows: u64, cols: u64) -> ProtocolTree {
        let common = self.common(rows, cols);
        if common != 0 {
            let a = common.trailing_zeros() as usize;
            return ProtocolTree::Leaf { answer: self.m.answers[a].clone(), rows: bits(rows), cols: bits(cols) };
        }
        let target = self.memo[&(rows, cols)].0;
        for side in [Side::Rows, Side::Cols] {
            let mask = if side == Side::Rows { rows } else { cols };
            for part in halves(mask) {
                let (l, r) = match side {
                    Side::Rows => ((part, cols), (rows & !part, cols)),
                    Side::Cols => ((rows, part), (rows, cols & !part)),
                };
                if let (Some(a), Some(b)) = (self.memo.get(&l), self.memo.get(&r)) {
                    if a.0 + b.0 == target {
                        return ProtocolTree::Split {
                            side,
                            left: Box::new(self.tree(l.0, l.1)),
                            right: Box::new(self.tree(r.0, r.1)),
                        };
                    }
                }
            }
        }
        unreachable!("memo holds an optimal split for every solved rectangle")
    }
}

fn bits(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

/// Minimum number of leaves and minimum depth over all protocols for `m`.
pub fn monorect_exact(m: &KwMatrix, cfg: &SearchConfig) -> Result<ProtocolResult> {
    let labels = m.num_rows() + m.num_cols();
    if labels > cfg.label_limit || m.num_rows() > 64 || m.num_cols() > 64 {
        return Err(Error::SearchLimit { labels, limit: cfg.label_limit.min(128) });
    }
    if m.num_rows() == 0 || m.num_cols() == 0 {
        return Err(Error::precondition("matrix has no rows or no columns"));
    }
    if m.has_empty_entry() {
        return Err(Error::precondition("matrix has an entry with no valid answer"));
    }
    let full = |k: usize| if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let (rows, cols) = (full(m.num_rows()), full(m.num_cols()));
    let mut s = Search { m, memo: HashMap::new(), deadline: cfg.deadline, visited: 0 };
    let (leaves, depth) = s.solve(rows, cols)?;
    let tree = cfg.build_tree.then(|| s.tree(rows, cols));
    Ok(ProtocolResult { leaves: leaves as usize, depth: depth as usize, tree })
}

/// Shorthand for the leaf count under the default configuration.
pub fn monorect(m: &KwMatrix) -> Result<usize> {
    Ok(monorect_exact(m, &SearchConfig::default())?.leaves)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::named::*;
    use crate::boolfn::TruthTable;
    use crate::formula::FormulaSearch;
    use crate::kw::matrix::kwu_matrix;

    fn tree_cfg() -> SearchConfig {
        SearchConfig { build_tree: true, ..Default::default() }
    }

    /// Leaves are monochromatic and partition the full grid.
    fn check_tree(m: &KwMatrix, t: &ProtocolTree) {
        let mut seen = vec![vec![0u32; m.num_cols()]; m.num_rows()];
        for (answer, rows, cols) in t.rectangles() {
            let a = m.answers.iter().position(|x| x == answer).unwrap();
            for &i in rows {
                for &j in cols {
                    assert!(m.entry(i, j) >> a & 1 == 1);
                    seen[i][j] += 1;
                }
            }
        }
        assert!(seen.iter().flatten().all(|c| *c == 1));
    }

    #[test]
    fn halves_enumerates_each_bipartition_once() {
        assert_eq!(halves(0b1).count(), 0);
        assert_eq!(halves(0b11).collect::<Vec<_>>(), [0b01]);
        assert_eq!(halves(0b1011).count(), 3);
        for m in [0b1111u64, 0b110101] {
            let k = m.count_ones();
            assert_eq!(halves(m).count(), (1 << (k - 1)) - 1);
            assert!(halves(m).all(|p| p & lowest(m) != 0 && p != m && p & !m == 0));
        }
    }

    #[test]
    fn examples() {
        let one = KwMatrix::new(
            vec!["r".into()],
            vec!["c".into()],
            vec![AnswerLabel::Coord(1), AnswerLabel::Coord(2)],
            vec![vec![0b10]],
        )
        .unwrap();
        let r = monorect_exact(&one, &tree_cfg()).unwrap();
        assert_eq!((r.leaves, r.depth), (1, 0));
        assert_eq!(r.tree.unwrap(), ProtocolTree::Leaf { answer: AnswerLabel::Coord(2), rows: vec![0], cols: vec![0] });
        assert_eq!(monorect(&kwu_matrix(&mux(1).unwrap()).unwrap()).unwrap(), 5);
        assert_eq!(monorect(&kwu_matrix(&xor(2)).unwrap()).unwrap(), 4);
        assert_eq!(monorect(&kwu_matrix(&and(2)).unwrap()).unwrap(), 2);
    }

    #[test]
    fn trees_are_partitions_into_monochromatic_rectangles() {
        for bits in [0x17u64, 0x96, 0xe8, 0x1e, 0x6b, 0xca] {
            let m = kwu_matrix(&TruthTable::from_u64(3, bits)).unwrap();
            let r = monorect_exact(&m, &tree_cfg()).unwrap();
            let t = r.tree.unwrap();
            assert_eq!(t.leaves(), r.leaves);
            assert!(t.depth() >= r.depth);
            check_tree(&m, &t);
        }
    }

    #[test]
    fn leaf_count_equals_minimum_hazard_free_formula_size() {
        let mut s2 = FormulaSearch::new(2).unwrap();
        for bits in 1..15u64 {
            let f = TruthTable::from_u64(2, bits);
            let leaves = monorect(&kwu_matrix(&f).unwrap()).unwrap();
            let g = s2.find_hazard_free(&f, 8).unwrap().unwrap();
            assert_eq!(leaves, g.size(), "f={bits}");
        }
        let mut s3 = FormulaSearch::new(3).unwrap();
        for bits in [0x01u64, 0x17, 0x1e, 0x36, 0x6b, 0x80, 0xca, 0xe8] {
            let f = TruthTable::from_u64(3, bits);
            let leaves = monorect(&kwu_matrix(&f).unwrap()).unwrap();
            match s3.find_hazard_free(&f, 6).unwrap() {
                Some(g) => assert_eq!(g.size(), leaves, "f={bits:#x}"),
                None => assert!(leaves > 6, "f={bits:#x}"),
            }
        }
    }

    #[test]
    fn limits_and_budget() {
        let m = KwMatrix::from_function(20, 20, |i, j| i == j).unwrap();
        assert!(matches!(monorect_exact(&m, &SearchConfig::default()), Err(Error::SearchLimit { .. })));
        let cfg = SearchConfig { label_limit: 40, deadline: Some(Instant::now()), build_tree: false };
        assert!(matches!(monorect_exact(&m, &cfg), Err(Error::BudgetExceeded)));
    }

    mod props {
        use super::*;
        use crate::kw::rank::ExactMatrix;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn random_trees_partition(bits in 1u64..255) {
                let m = kwu_matrix(&TruthTable::from_u64(3, bits)).unwrap();
                let r = monorect_exact(&m, &tree_cfg()).unwrap();
                prop_assert!(r.depth <= r.leaves);
                prop_assert!(r.leaves <= m.num_rows() * m.num_cols());
                check_tree(&m, r.tree.as_ref().unwrap());
            }

            #[test]
            fn leaves_bound_rank(cells in proptest::collection::vec(any::<bool>(), 16), rows in 1usize..5, cols in 1usize..5) {
                let value = |i: usize, j: usize| cells[i * 4 + j];
                let e = ExactMatrix::from_fn(rows, cols, |i, j| value(i, j) as i64).unwrap();
                let k = KwMatrix::from_function(rows, cols, value).unwrap();
                prop_assert!(monorect(&k).unwrap() >= 2 * e.rank().max(1) - 1);
            }
        }
    }
}
