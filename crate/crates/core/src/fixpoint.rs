//! Least and greatest fixpoints of positive boolean equation systems.
//!
//! Inductive predicates (convergence, AcBes, BI-style families) are least
//! fixpoints, coinductive ones (strong convergence, the always modality,
//! bisimilarity) are greatest fixpoints. Both are computed by the same
//! worklist over a system `X_i = phi_i(X)` where every `phi_i` is built from
//! constants, variables, conjunction and disjunction. There is no negation
//! constructor, so every rule is monotone.

use std::collections::VecDeque;

use crate::termgraph::{Node, NodeRef, TermGraph};

/// A positive boolean formula over equation variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Const(bool),
    Var(usize),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

impl Formula {
    pub const TRUE: Formula = Formula::Const(true);
    pub const FALSE: Formula = Formula::Const(false);

    pub fn var(n: NodeRef) -> Formula {
        Formula::Var(n.index())
    }

    pub fn and(self, other: Formula) -> Formula {
        match (self, other) {
            (Formula::Const(false), _) | (_, Formula::Const(false)) => Formula::FALSE,
            (Formula::Const(true), f) | (f, Formula::Const(true)) => f,
            (Formula::And(mut a), Formula::And(b)) => {
                a.extend(b);
                Formula::And(a)
            }
            (Formula::And(mut a), f) | (f, Formula::And(mut a)) => {
                a.push(f);
                Formula::And(a)
            }
            (a, b) => Formula::And(vec![a, b]),
        }
    }

    pub fn or(self, other: Formula) -> Formula {
        match (self, other) {
            (Formula::Const(true), _) | (_, Formula::Const(true)) => Formula::TRUE,
            (Formula::Const(false), f) | (f, Formula::Const(false)) => f,
            (Formula::Or(mut a), Formula::Or(b)) => {
                a.extend(b);
                Formula::Or(a)
            }
            (Formula::Or(mut a), f) | (f, Formula::Or(mut a)) => {
                a.push(f);
                Formula::Or(a)
            }
            (a, b) => Formula::Or(vec![a, b]),
        }
    }

    /// `cond && self` with `cond` known now.
    pub fn when(self, cond: bool) -> Formula {
        if cond {
            self
        } else {
            Formula::FALSE
        }
    }

    pub fn eval(&self, val: &[bool]) -> bool {
        match self {
            Formula::Const(b) => *b,
            Formula::Var(i) => val[*i],
            Formula::And(fs) => fs.iter().all(|f| f.eval(val)),
            Formula::Or(fs) => fs.iter().any(|f| f.eval(val)),
        }
    }

    fn collect_vars(&self, out: &mut Vec<usize>) {
        match self {
            Formula::Const(_) => {}
            Formula::Var(i) => out.push(*i),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_vars(out)),
        }
    }
}

/// `X_i = formulas[i]` for every `i`.
#[derive(Debug, Clone, Default)]
pub struct EquationSystem {
    formulas: Vec<Formula>,
}

impl EquationSystem {
    pub fn new(formulas: Vec<Formula>) -> Self {
        let n = formulas.len();
        let mut vars = Vec::new();
        for f in &formulas {
            f.collect_vars(&mut vars);
        }
        assert!(vars.iter().all(|&v| v < n), "formula refers to an unknown variable");
        EquationSystem { formulas }
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn least(&self) -> Vec<bool> {
        self.solve(false)
    }

    pub fn greatest(&self) -> Vec<bool> {
        self.solve(true)
    }

    // Start from `init` everywhere and flip a variable whenever its formula
    // disagrees; monotonicity makes each variable flip at most once.
    fn solve(&self, init: bool) -> Vec<bool> {
        let n = self.formulas.len();
        let mut dependents: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut buf = Vec::new();
        for (i, f) in self.formulas.iter().enumerate() {
            buf.clear();
            f.collect_vars(&mut buf);
            buf.sort_unstable();
            buf.dedup();
            for &v in &buf {
                dependents[v].push(i);
            }
        }
        let mut val = vec![init; n];
        let mut queued = vec![true; n];
        let mut work: VecDeque<usize> = (0..n).collect();
        while let Some(i) = work.pop_front() {
            queued[i] = false;
            if val[i] == init && self.formulas[i].eval(&val) != init {
                val[i] = !init;
                for &d in &dependents[i] {
                    if !queued[d] && val[d] == init {
                        queued[d] = true;
                        work.push_back(d);
                    }
                }
            }
        }
        val
    }
}

/// Per-node valuation of a predicate on a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateResult {
    valuation: Vec<bool>,
    root: NodeRef,
}

impl PredicateResult {
    pub fn new(valuation: Vec<bool>, root: NodeRef) -> Self {
        assert!(root.index() < valuation.len());
        PredicateResult { valuation, root }
    }

    pub fn at(&self, n: NodeRef) -> bool {
        self.valuation[n.index()]
    }

    pub fn root_verdict(&self) -> bool {
        self.valuation[self.root.index()]
    }

    pub fn valuation(&self) -> &[bool] {
        &self.valuation
    }

    pub fn true_nodes(&self) -> impl Iterator<Item = NodeRef> + '_ {
        self.valuation
            .iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .map(|(i, _)| NodeRef::from_index(i))
    }
}

/// A local inference rule: the formula defining a node's truth in terms of
/// other nodes of the same graph.
pub trait Rule {
    fn formula(&self, g: &TermGraph, n: NodeRef) -> Formula;
}

impl<F> Rule for F
where
    F: Fn(&TermGraph, NodeRef) -> Formula,
{
    fn formula(&self, g: &TermGraph, n: NodeRef) -> Formula {
        self(g, n)
    }
}

fn system_of(g: &TermGraph, rule: &dyn Rule) -> EquationSystem {
    EquationSystem::new(g.node_refs().map(|n| rule.formula(g, n)).collect())
}

pub fn lfp_eval(g: &TermGraph, rule: &dyn Rule) -> PredicateResult {
    PredicateResult::new(system_of(g, rule).least(), g.root())
}

pub fn gfp_eval(g: &TermGraph, rule: &dyn Rule) -> PredicateResult {
    PredicateResult::new(system_of(g, rule).greatest(), g.root())
}

/// The rule of the always modality: `local` holds here and the property
/// holds at both children.
pub fn always_rule(local: impl Fn(NodeRef) -> bool) -> impl Rule {
    move |g: &TermGraph, n: NodeRef| -> Formula {
        let here = Formula::Const(local(n));
        match g.get(n) {
            Node::Leaf(_) => here,
            Node::Inner { down, right, .. } => here.and(Formula::var(*down)).and(Formula::var(*right)),
        }
    }
}

/// The always modality: `local` holds at every node reachable from `n`.
pub fn always(g: &TermGraph, local: impl Fn(NodeRef) -> bool) -> PredicateResult {
    gfp_eval(g, &always_rule(local))
}

/// The always modality computed directly as a conjunction over reachable sets.
pub fn always_by_reachability(g: &TermGraph, local: impl Fn(NodeRef) -> bool) -> PredicateResult {
    let valuation = g
        .node_refs()
        .map(|n| {
            g.reachable(n)
                .expect("node of this graph")
                .into_iter()
                .all(&local)
        })
        .collect();
    PredicateResult::new(valuation, g.root())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn least_and_greatest_on_self_loop() {
        let sys = EquationSystem::new(vec![Formula::Var(0)]);
        assert_eq!(sys.least(), vec![false]);
        assert_eq!(sys.greatest(), vec![true]);
    }

    #[test]
    fn chain_propagates() {
        // X0 = X1, X1 = X2, X2 = true
        let sys = EquationSystem::new(vec![Formula::Var(1), Formula::Var(2), Formula::TRUE]);
        assert_eq!(sys.least(), vec![true; 3]);
        // X0 = X1 and X1 = X0 or false: gfp keeps the cycle, lfp does not
        let sys = EquationSystem::new(vec![Formula::Var(1), Formula::Var(0).or(Formula::FALSE)]);
        assert_eq!(sys.least(), vec![false, false]);
        assert_eq!(sys.greatest(), vec![true, true]);
    }

    #[test]
    fn greatest_removes_violations_transitively() {
        // X0 = X1 & X2, X1 = X0, X2 = false
        let sys = EquationSystem::new(vec![
            Formula::Var(1).and(Formula::Var(2)),
            Formula::Var(0),
            Formula::FALSE,
        ]);
        assert_eq!(sys.greatest(), vec![false, false, false]);
    }

    #[test]
    fn formula_simplification() {
        assert_eq!(Formula::Var(3).and(Formula::TRUE), Formula::Var(3));
        assert_eq!(Formula::Var(3).and(Formula::FALSE), Formula::FALSE);
        assert_eq!(Formula::Var(3).or(Formula::TRUE), Formula::TRUE);
        assert_eq!(Formula::Var(1).when(false), Formula::FALSE);
    }
}
