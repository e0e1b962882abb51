//! Bounded exhaustive enumeration of formulas by their ternary behavior.
//!
//! Two formulas are interchangeable inside a larger formula iff they induce the
//! same ternary function, so each level keeps one representative per function.
//! Literals include negations and the Kleene gates satisfy De Morgan's laws, so
//! NOT is never needed above the leaves.

use std::collections::HashMap;

use super::Formula;
use crate::boolfn::{ternary_table, TruthTable};
use crate::error::{Error, Result};
use crate::trit::Trit;

pub const MAX_SEARCH_ARITY: usize = 3;

#[derive(Clone, Copy, Debug)]
enum Recipe {
    Const(bool),
    Lit(usize, bool),
    And(usize, usize),
    Or(usize, usize),
}

#[derive(Clone, Copy, Debug)]
struct Node {
    one: u32,
    zero: u32,
    level: usize,
    recipe: Recipe,
}

#[derive(Debug)]
pub struct FormulaSearch {
    n: usize,
    nodes: Vec<Node>,
    index: HashMap<(u32, u32), usize>,
    /// `levels[s]`: ids whose smallest formula has `s` leaves.
    levels: Vec<Vec<usize>>,
}

impl FormulaSearch {
    pub fn new(n: usize) -> Result<FormulaSearch> {
        if n > MAX_SEARCH_ARITY {
            return Err(Error::ArityTooLarge { arity: n, limit: MAX_SEARCH_ARITY });
        }
        let mut s = FormulaSearch { n, nodes: Vec::new(), index: HashMap::new(), levels: vec![Vec::new(), Vec::new()] };
        let size = 3usize.pow(n as u32);
        let all = if size == 32 { u32::MAX } else { (1u32 << size) - 1 };
        s.insert(all, 0, Recipe::Const(true), 1);
        s.insert(0, all, Recipe::Const(false), 1);
        for i in 1..=n {
            let p = 3usize.pow(i as u32 - 1);
            let (mut one, mut zero) = (0u32, 0u32);
            for idx in 0..size {
                match idx / p % 3 {
                    0 => zero |= 1 << idx,
                    1 => one |= 1 << idx,
                    _ => {}
                }
            }
            s.insert(one, zero, Recipe::Lit(i, true), 1);
            s.insert(zero, one, Recipe::Lit(i, false), 1);
        }
        Ok(s)
    }

    fn insert(&mut self, one: u32, zero: u32, recipe: Recipe, level: usize) {
        if self.index.contains_key(&(one, zero)) {
            return;
        }
        let id = self.nodes.len();
        self.nodes.push(Node { one, zero, level, recipe });
        self.index.insert((one, zero), id);
        self.levels[level].push(id);
    }

    /// Largest size enumerated so far.
    pub fn max_size(&self) -> usize {
        self.levels.len() - 1
    }

    /// Number of distinct ternary functions found so far.
    pub fn distinct(&self) -> usize {
        self.nodes.len()
    }

    pub fn extend_to(&mut self, size: usize) {
        while self.max_size() < size {
            let s = self.max_size() + 1;
            self.levels.push(Vec::new());
            for a in 1..=s / 2 {
                let b = s - a;
                let (la, lb) = (self.levels[a].clone(), self.levels[b].clone());
                for (ia, &x) in la.iter().enumerate() {
                    let start = if a == b { ia } else { 0 };
                    let nx = self.nodes[x];
                    for &y in &lb[start..] {
                        let ny = self.nodes[y];
                        self.insert(nx.one & ny.one, nx.zero | ny.zero, Recipe::And(x, y), s);
                        self.insert(nx.one | ny.one, nx.zero & ny.zero, Recipe::Or(x, y), s);
                    }
                }
            }
        }
    }

    fn build(&self, id: usize) -> Formula {
        match self.nodes[id].recipe {
            Recipe::Const(b) => Formula::Const(b),
            Recipe::Lit(i, pos) => Formula::literal(i, pos),
            Recipe::And(a, b) => self.build(a).and(self.build(b)),
            Recipe::Or(a, b) => self.build(a).or(self.build(b)),
        }
    }

    /// The smallest formula whose ternary behavior is `f̃`, searching sizes up
    /// to `bound`. `None` means no hazard-free formula with at most `bound` leaves.
    pub fn find_hazard_free(&mut self, f: &TruthTable, bound: usize) -> Result<Option<Formula>> {
        if f.arity() != self.n {
            return Err(Error::LengthMismatch(self.n, f.arity()));
        }
        let t = ternary_table(f)?;
        let (mut one, mut zero) = (0u32, 0u32);
        for (idx, v) in t.values().iter().enumerate() {
            match v {
                Trit::One => one |= 1 << idx,
                Trit::Zero => zero |= 1 << idx,
                Trit::U => {}
            }
        }
        loop {
            if let Some(&id) = self.index.get(&(one, zero)) {
                return Ok(if self.nodes[id].level <= bound { Some(self.build(id)) } else { None });
            }
            if self.max_size() >= bound {
                return Ok(None);
            }
            self.extend_to(self.max_size() + 1);
        }
    }
}

/// Smallest hazard-free formula for `f` (at most 3 variables) with at most
/// `bound` leaves.
pub fn min_hazard_free_size(f: &TruthTable, bound: usize) -> Result<Option<Formula>> {
    FormulaSearch::new(f.arity())?.find_hazard_free(f, bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::named::*;
    use crate::formula::hazard_check;

    #[test]
    fn small_optima() {
        assert_eq!(min_hazard_free_size(&and(2), 4).unwrap().unwrap().size(), 2);
        assert_eq!(min_hazard_free_size(&xor(2), 4).unwrap().unwrap().size(), 4);
        assert!(min_hazard_free_size(&xor(2), 3).unwrap().is_none());
        assert_eq!(
            min_hazard_free_size(&TruthTable::constant(2, true).unwrap(), 1).unwrap().unwrap(),
            Formula::Const(true)
        );
    }

    #[test]
    fn mux1_needs_five_leaves() {
        let m = mux(1).unwrap();
        let mut s = FormulaSearch::new(3).unwrap();
        assert!(s.find_hazard_free(&m, 4).unwrap().is_none());
        let g = s.find_hazard_free(&m, 5).unwrap().unwrap();
        assert_eq!(g.size(), 5);
        assert!(hazard_check(&g, 3).unwrap().hazard_free);
        assert_eq!(g.truth_table(3).unwrap(), m);
    }

    #[test]
    fn results_are_hazard_free_formulas_of_f() {
        let mut s = FormulaSearch::new(2).unwrap();
        for bits in 0..16u64 {
            let f = TruthTable::from_u64(2, bits);
            let g = s.find_hazard_free(&f, 6).unwrap().expect("every 2-variable function has a small formula");
            assert_eq!(g.truth_table(2).unwrap(), f);
            assert!(hazard_check(&g, 2).unwrap().hazard_free);
        }
    }

    #[test]
    fn rejects_large_arity() {
        assert!(FormulaSearch::new(4).is_err());
    }
}
