//! De Morgan formulas over AND, OR, NOT, variables and constants.
//!
//! Size is the number of leaves; depth counts binary gates only.

mod hazard;
mod search;
mod synth;

use std::fmt;
use std::str::FromStr;

use crate::boolfn::TruthTable;
use crate::error::{Error, Result};
use crate::trit::{Trit, TritWord};

pub use hazard::{hazard_check, hazard_check_sampled, HazardReport};
pub use search::{min_hazard_free_size, FormulaSearch, MAX_SEARCH_ARITY};
pub use synth::{
    andreev_derivative, andreev_point, cnf_from_primes, derivative_cover_synthesis, dnf_from_primes, greedy_cover,
    mux_gadget, mux_hazard_free, range_formula, threshold_formula, universal_hazard_free, xor_formula,
    AndreevDerivative, CoverFormula, CoverSide, MAX_MUX_SELECTORS,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Const(bool),
    /// 1-based variable index.
    Var(usize),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(i: usize) -> Formula {
        Formula::Var(i)
    }

    /// `x_i` if `positive`, else `¬x_i`.
    pub fn literal(i: usize, positive: bool) -> Formula {
        if positive {
            Formula::Var(i)
        } else {
            Formula::Var(i).not()
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(other))
    }

    /// Balanced conjunction; the empty conjunction is `1`.
    pub fn and_all(items: Vec<Formula>) -> Formula {
        balanced(items, Formula::Const(true), Formula::and)
    }

    /// Balanced disjunction; the empty disjunction is `0`.
    pub fn or_all(items: Vec<Formula>) -> Formula {
        balanced(items, Formula::Const(false), Formula::or)
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Const(_) | Formula::Var(_) => 1,
            Formula::Not(a) => a.size(),
            Formula::And(a, b) | Formula::Or(a, b) => a.size() + b.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Const(_) | Formula::Var(_) => 0,
            Formula::Not(a) => a.depth(),
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn is_monotone(&self) -> bool {
        match self {
            Formula::Const(_) | Formula::Var(_) => true,
            Formula::Not(_) => false,
            Formula::And(a, b) | Formula::Or(a, b) => a.is_monotone() && b.is_monotone(),
        }
    }

    /// Largest variable index used (0 if none).
    pub fn max_var(&self) -> usize {
        match self {
            Formula::Const(_) => 0,
            Formula::Var(i) => *i,
            Formula::Not(a) => a.max_var(),
            Formula::And(a, b) | Formula::Or(a, b) => a.max_var().max(b.max_var()),
        }
    }

    fn check_vars(&self, n: usize) -> Result<()> {
        let v = self.max_var();
        if v > n {
            return Err(Error::CoordinateOutOfRange { index: v, len: n });
        }
        if self.has_var_zero() {
            return Err(Error::CoordinateOutOfRange { index: 0, len: n });
        }
        Ok(())
    }

    fn has_var_zero(&self) -> bool {
        match self {
            Formula::Const(_) => false,
            Formula::Var(i) => *i == 0,
            Formula::Not(a) => a.has_var_zero(),
            Formula::And(a, b) | Formula::Or(a, b) => a.has_var_zero() || b.has_var_zero(),
        }
    }

    /// Ternary evaluation with the Kleene gates.
    pub fn eval(&self, x: &TritWord) -> Result<Trit> {
        self.check_vars(x.len())?;
        Ok(self.eval_unchecked(x))
    }

    fn eval_unchecked(&self, x: &TritWord) -> Trit {
        match self {
            Formula::Const(b) => Trit::from_bool(*b),
            Formula::Var(i) => x.get(*i).unwrap(),
            Formula::Not(a) => a.eval_unchecked(x).not(),
            Formula::And(a, b) => match a.eval_unchecked(x) {
                Trit::Zero => Trit::Zero,
                va => va.and(b.eval_unchecked(x)),
            },
            Formula::Or(a, b) => match a.eval_unchecked(x) {
                Trit::One => Trit::One,
                va => va.or(b.eval_unchecked(x)),
            },
        }
    }

    /// The Boolean function computed on `n` variables.
    pub fn truth_table(&self, n: usize) -> Result<TruthTable> {
        self.check_vars(n)?;
        let words = self.bool_planes(n);
        let mut t = TruthTable::zeros(n)?;
        for i in 0..t.len() {
            t.set(i, words[i / 64] >> (i % 64) & 1 == 1);
        }
        Ok(t)
    }

    fn bool_planes(&self, n: usize) -> Vec<u64> {
        let len = 1usize << n;
        let words = len.div_ceil(64);
        match self {
            Formula::Const(b) => vec![if *b { u64::MAX } else { 0 }; words],
            Formula::Var(i) => (0..words)
                .map(|w| (0..64.min(len)).fold(0u64, |acc, b| acc | (((w * 64 + b) >> (i - 1) & 1) as u64) << b))
                .collect(),
            Formula::Not(a) => a.bool_planes(n).into_iter().map(|w| !w).collect(),
            Formula::And(a, b) => a.bool_planes(n).into_iter().zip(b.bool_planes(n)).map(|(x, y)| x & y).collect(),
            Formula::Or(a, b) => a.bool_planes(n).into_iter().zip(b.bool_planes(n)).map(|(x, y)| x | y).collect(),
        }
    }

    /// Replaces every `Var(i)` by `sub(i)`.
    pub fn substitute(&self, sub: &impl Fn(usize) -> Formula) -> Formula {
        match self {
            Formula::Const(b) => Formula::Const(*b),
            Formula::Var(i) => sub(*i),
            Formula::Not(a) => a.substitute(sub).not(),
            Formula::And(a, b) => a.substitute(sub).and(b.substitute(sub)),
            Formula::Or(a, b) => a.substitute(sub).or(b.substitute(sub)),
        }
    }

    /// The negation with NOT pushed to the leaves (same size). Double negations
    /// on variables cancel.
    pub fn dual(&self) -> Formula {
        match self {
            Formula::Const(b) => Formula::Const(!b),
            Formula::Var(i) => Formula::Var(*i).not(),
            Formula::Not(a) => a.push_not(),
            Formula::And(a, b) => a.dual().or(b.dual()),
            Formula::Or(a, b) => a.dual().and(b.dual()),
        }
    }

    /// Equivalent formula with NOT only on variables.
    pub fn push_not(&self) -> Formula {
        match self {
            Formula::Const(_) | Formula::Var(_) => self.clone(),
            Formula::Not(a) => a.dual(),
            Formula::And(a, b) => a.push_not().and(b.push_not()),
            Formula::Or(a, b) => a.push_not().or(b.push_not()),
        }
    }

    /// Constant folding with `and(0,·)→0`, `and(1,A)→A`, `or(1,·)→1`,
    /// `or(0,A)→A` and `not(c)→¬c`. Each rule holds in ternary logic.
    pub fn fold_constants(&self) -> Formula {
        match self {
            Formula::Const(_) | Formula::Var(_) => self.clone(),
            Formula::Not(a) => match a.fold_constants() {
                Formula::Const(b) => Formula::Const(!b),
                other => other.not(),
            },
            Formula::And(a, b) => match (a.fold_constants(), b.fold_constants()) {
                (Formula::Const(false), _) | (_, Formula::Const(false)) => Formula::Const(false),
                (Formula::Const(true), other) | (other, Formula::Const(true)) => other,
                (x, y) => x.and(y),
            },
            Formula::Or(a, b) => match (a.fold_constants(), b.fold_constants()) {
                (Formula::Const(true), _) | (_, Formula::Const(true)) => Formula::Const(true),
                (Formula::Const(false), other) | (other, Formula::Const(false)) => other,
                (x, y) => x.or(y),
            },
        }
    }
}

pub(crate) fn serialize_display<S: serde::Serializer>(f: &Formula, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(f)
}

fn balanced(mut items: Vec<Formula>, empty: Formula, op: fn(Formula, Formula) -> Formula) -> Formula {
    match items.len() {
        0 => empty,
        1 => items.pop().unwrap(),
        len => {
            let right = items.split_off(len / 2);
            op(balanced(items, empty.clone(), op), balanced(right, empty, op))
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Const(b) => write!(f, "{}", *b as u8),
            Formula::Var(i) => write!(f, "x{i}"),
            Formula::Not(a) => write!(f, "(not {a})"),
            Formula::And(a, b) => write!(f, "(and {a} {b})"),
            Formula::Or(a, b) => write!(f, "(or {a} {b})"),
        }
    }
}

impl FromStr for Formula {
    type Err = Error;

    /// S-expressions: `(or (and x1 (not x2)) x3)`, constants `0` and `1`.
    /// `and`/`or` with more than two arguments build balanced trees.
    fn from_str(s: &str) -> Result<Formula> {
        let tokens = tokenize(s);
        let mut pos = 0;
        let f = parse_expr(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(Error::Parse(format!("trailing input after formula: `{}`", tokens[pos])));
        }
        Ok(f)
    }
}

fn tokenize(s: &str) -> Vec<String> {
    s.replace('(', " ( ").replace(')', " ) ").split_whitespace().map(str::to_string).collect()
}

fn parse_expr(tokens: &[String], pos: &mut usize) -> Result<Formula> {
    let tok = tokens.get(*pos).ok_or_else(|| Error::Parse("unexpected end of formula".into()))?;
    *pos += 1;
    match tok.as_str() {
        "0" => Ok(Formula::Const(false)),
        "1" => Ok(Formula::Const(true)),
        "(" => {
            let op = tokens.get(*pos).ok_or_else(|| Error::Parse("unexpected end of formula".into()))?.clone();
            *pos += 1;
            let mut args = Vec::new();
            while tokens.get(*pos).map(String::as_str) != Some(")") {
                if *pos >= tokens.len() {
                    return Err(Error::Parse("missing `)`".into()));
                }
                args.push(parse_expr(tokens, pos)?);
            }
            *pos += 1;
            match (op.as_str(), args.len()) {
                ("not", 1) => Ok(args.pop().unwrap().not()),
                ("not", _) => Err(Error::Parse("`not` takes one argument".into())),
                ("and", k) if k >= 2 => Ok(Formula::and_all(args)),
                ("or", k) if k >= 2 => Ok(Formula::or_all(args)),
                ("and" | "or", _) => Err(Error::Parse(format!("`{op}` takes at least two arguments"))),
                _ => Err(Error::Parse(format!("unknown operator `{op}`"))),
            }
        }
        t => {
            let idx = t
                .strip_prefix('x')
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|&i| i >= 1)
                .ok_or_else(|| Error::Parse(format!("unexpected token `{t}`")))?;
            Ok(Formula::Var(idx))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::extension_eval;
    use crate::trit::BitWord;
    use rand_chacha::ChaCha8Rng;
    use rand_core::{RngCore, SeedableRng};

    fn f(s: &str) -> Formula {
        s.parse().unwrap()
    }

    /// A random formula with `leaves` leaves over `n` variables.
    pub(crate) fn random_formula(rng: &mut ChaCha8Rng, n: usize, leaves: usize, monotone: bool) -> Formula {
        if leaves == 1 {
            let v = Formula::Var(1 + rng.next_u32() as usize % n);
            return if !monotone && rng.next_u32() % 2 == 0 { v.not() } else { v };
        }
        let left = 1 + rng.next_u32() as usize % (leaves - 1);
        let a = random_formula(rng, n, left, monotone);
        let b = random_formula(rng, n, leaves - left, monotone);
        let g = if rng.next_u32() % 2 == 0 { a.and(b) } else { a.or(b) };
        if !monotone && rng.next_u32() % 4 == 0 {
            g.not()
        } else {
            g
        }
    }

    #[test]
    fn eval_examples() {
        let taut = f("(or x1 (not x1))");
        assert_eq!(taut.eval(&"u".parse().unwrap()).unwrap(), Trit::U);
        let mux4 = f("(or (and x1 x3) (and (not x1) x2))");
        assert_eq!(mux4.eval(&"u11".parse().unwrap()).unwrap(), Trit::U);
        assert!(mux4.eval(&"u1".parse().unwrap()).is_err());
        for x in BitWord::all(3) {
            let expect = (x.get(1).unwrap() && x.get(3).unwrap()) || (!x.get(1).unwrap() && x.get(2).unwrap());
            assert_eq!(mux4.eval(&x.to_trits()).unwrap(), Trit::from_bool(expect));
        }
    }

    #[test]
    fn size_depth_monotone() {
        let g = f("(or (and x1 (not x2)) x3)");
        assert_eq!(g.size(), 3);
        assert_eq!(g.depth(), 2);
        assert!(!g.is_monotone());
        assert!(f("(and x1 x2)").is_monotone());
        assert_eq!(f("(not (not x1))").depth(), 0);
        assert_eq!(Formula::and_all((1..=8).map(Formula::Var).collect()).depth(), 3);
    }

    #[test]
    fn text_roundtrip() {
        for s in ["(or (and x1 (not x2)) x3)", "1", "0", "(not x12)", "(and (or x1 0) (not (or x2 x3)))"] {
            assert_eq!(f(s).to_string(), s);
        }
        assert_eq!(f("(and x1 x2 x3)").to_string(), "(and x1 (and x2 x3))");
        for bad in ["(and x1)", "(not x1 x2)", "(xor x1 x2)", "(and x1 x2", "x0", "y1", "(and x1 x2))"] {
            assert!(bad.parse::<Formula>().is_err(), "{bad}");
        }
    }

    #[test]
    fn truth_table_matches_eval() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let g = random_formula(&mut rng, 7, 9, false);
            let t = g.truth_table(7).unwrap();
            for x in BitWord::all(7) {
                assert_eq!(Trit::from_bool(t.get(x.index())), g.eval(&x.to_trits()).unwrap());
            }
        }
    }

    #[test]
    fn formulas_are_natural() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=4 {
            for _ in 0..20 {
                let leaves = 2 + rng.next_u32() as usize % 8;
                let g = random_formula(&mut rng, n, leaves, false);
                let vals: Vec<Trit> = TritWord::all(n).map(|x| g.eval(&x).unwrap()).collect();
                let t = crate::boolfn::TernaryTable::new(n, vals).unwrap();
                assert!(t.is_natural());
                // natural extensions of the same function sit below the hazard-free one
                let tt = g.truth_table(n).unwrap();
                for x in TritWord::all(n) {
                    assert!(t.at(&x).precequ(extension_eval(&tt, &x).unwrap()));
                }
            }
        }
    }

    #[test]
    fn dual_and_folding() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..40 {
            let g = random_formula(&mut rng, 4, 7, false);
            let d = g.dual();
            assert_eq!(d.size(), g.size());
            let p = g.push_not();
            for x in TritWord::all(4) {
                assert_eq!(d.eval(&x).unwrap(), g.eval(&x).unwrap().not());
                assert_eq!(p.eval(&x).unwrap(), g.eval(&x).unwrap());
            }
        }
        assert_eq!(f("(or (and 0 x1) (and 1 x2))").fold_constants(), f("x2"));
        assert_eq!(f("(or x1 (not 0))").fold_constants(), Formula::Const(true));
        assert_eq!(f("(and x3 (or 0 x1))").fold_constants(), f("(and x3 x1)"));
    }
}
