//! Games, strategy profiles and their equilibrium predicates.

use std::fmt;

use crate::bisim::{bisimilar, Bisimulation};
use crate::error::GraphError;
use crate::fixpoint::{always, always_rule, gfp_eval, lfp_eval, Formula, PredicateResult, Rule};
use crate::termgraph::{Agent, Choice, InnerLabel, Kind, Node, NodeRef, PayoffFn, TermGraph};

macro_rules! kinded_graph {
    ($name:ident, $kind:expr) => {
        impl $name {
            pub fn new(graph: TermGraph) -> Result<Self, GraphError> {
                if graph.kind() != $kind {
                    return Err(GraphError::WrongKind {
                        expected: $kind,
                        found: graph.kind(),
                    });
                }
                Ok($name(graph))
            }

            pub fn graph(&self) -> &TermGraph {
                &self.0
            }

            pub fn into_graph(self) -> TermGraph {
                self.0
            }

            pub fn root(&self) -> NodeRef {
                self.0.root()
            }
        }

        impl TryFrom<TermGraph> for $name {
            type Error = GraphError;

            fn try_from(graph: TermGraph) -> Result<Self, GraphError> {
                $name::new(graph)
            }
        }
    };
}

/// A game: inner nodes name the agent to move.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Game(TermGraph);
kinded_graph!(Game, Kind::Game);

/// A strategy profile: inner nodes name the agent to move and the chosen branch.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StratProf(TermGraph);
kinded_graph!(StratProf, Kind::Profile);

impl StratProf {
    /// The profile rooted at another node of the same presentation.
    pub fn subprofile_at(&self, n: NodeRef) -> Result<StratProf, GraphError> {
        Ok(StratProf(self.0.rerooted(n)?))
    }

    /// Owner and choice of an inner node.
    pub fn decision(&self, n: NodeRef) -> Option<(&Agent, Choice)> {
        match self.0.get(n).label()? {
            InnerLabel::Profile(p, c) => Some((p, *c)),
            _ => None,
        }
    }
}

/// Result of following the choices of a profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PayoffOutcome {
    Defined(PayoffFn),
    /// The choices never reach a leaf; `cycle` is the loop that was followed.
    Undefined { cycle: Vec<NodeRef> },
}

impl PayoffOutcome {
    pub fn defined(&self) -> Option<&PayoffFn> {
        match self {
            PayoffOutcome::Defined(f) => Some(f),
            PayoffOutcome::Undefined { .. } => None,
        }
    }
}

impl fmt::Display for PayoffOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PayoffOutcome::Defined(p) => write!(f, "{p}"),
            PayoffOutcome::Undefined { cycle } => {
                f.write_str("undefined (cycle:")?;
                for n in cycle {
                    write!(f, " {n}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Erases the choices of a profile.
pub fn game_of(s: &StratProf) -> Game {
    let g = s
        .graph()
        .map_labels(Kind::Game, |_, label| match label {
            InnerLabel::Profile(p, _) => InnerLabel::Game(p.clone()),
            other => other.clone(),
        })
        .expect("relabelling preserves validity");
    Game(g)
}

/// The payoff reached from the root by following the choices.
pub fn payoff(s: &StratProf) -> PayoffOutcome {
    payoff_from(s, s.root())
}

/// The payoff reached from node `n` by following the choices.
pub fn payoff_from(s: &StratProf, n: NodeRef) -> PayoffOutcome {
    let g = s.graph();
    let mut visited = vec![usize::MAX; g.len()];
    let mut path = Vec::new();
    let mut cur = n;
    loop {
        match g.get(cur) {
            Node::Leaf(f) => return PayoffOutcome::Defined(f.clone()),
            Node::Inner { label, .. } => {
                if visited[cur.index()] != usize::MAX {
                    let start = visited[cur.index()];
                    return PayoffOutcome::Undefined {
                        cycle: path[start..].to_vec(),
                    };
                }
                visited[cur.index()] = path.len();
                path.push(cur);
                let c = label.choice().expect("profile label carries a choice");
                cur = g.get(cur).child(c).expect("inner node");
            }
        }
    }
}

/// Payoff at every node at once: `None` where the choices diverge.
pub fn payoffs(s: &StratProf) -> Vec<Option<PayoffFn>> {
    #[derive(Clone, Copy)]
    enum Walk {
        Unseen,
        OnPath,
        Done(Option<NodeRef>),
    }
    let g = s.graph();
    let mut state = vec![Walk::Unseen; g.len()];
    for start in g.node_refs() {
        let mut path = Vec::new();
        let mut cur = start;
        let leaf = loop {
            match state[cur.index()] {
                Walk::Done(t) => break t,
                Walk::OnPath => break None,
                Walk::Unseen => {}
            }
            let node = g.get(cur);
            if node.is_leaf() {
                break Some(cur);
            }
            state[cur.index()] = Walk::OnPath;
            path.push(cur);
            let c = node.label().and_then(InnerLabel::choice).expect("profile node");
            cur = node.child(c).expect("inner node");
        };
        for n in path {
            state[n.index()] = Walk::Done(leaf);
        }
        if g.get(start).is_leaf() {
            state[start.index()] = Walk::Done(Some(start));
        }
    }
    state
        .into_iter()
        .map(|w| match w {
            Walk::Done(Some(leaf)) => g.get(leaf).payoff().cloned(),
            _ => None,
        })
        .collect()
}

/// Every profile of a game obtained by choosing d or r at each inner node of
/// its presentation, in binary counting order (first inner node varies
/// fastest, d before r).
///
/// On tree-shaped presentations these are all the profiles of the game.
pub fn profiles_of(g: &Game) -> impl Iterator<Item = StratProf> + '_ {
    let inner: Vec<NodeRef> = g.graph().node_refs().filter(|n| !g.graph().get(*n).is_leaf()).collect();
    assert!(inner.len() < 64, "too many inner nodes to enumerate");
    let total: u64 = 1 << inner.len();
    (0..total).map(move |mask| {
        let mut bit = vec![0usize; g.graph().len()];
        for (k, n) in inner.iter().enumerate() {
            bit[n.index()] = k;
        }
        let graph = g
            .graph()
            .map_labels(Kind::Profile, |n, label| {
                let c = if mask >> bit[n.index()] & 1 == 1 { Choice::R } else { Choice::D };
                InnerLabel::Profile(label.owner().expect("game node").clone(), c)
            })
            .expect("relabelling preserves validity");
        StratProf(graph)
    })
}

/// The rule defining convergence: a leaf converges, an inner node converges
/// when its chosen child does.
pub fn convergence_rule(g: &TermGraph, n: NodeRef) -> Formula {
    match g.get(n) {
        Node::Leaf(_) => Formula::TRUE,
        node => {
            let c = node.label().and_then(InnerLabel::choice).expect("profile node");
            Formula::var(node.child(c).expect("inner node"))
        }
    }
}

/// Convergence: following the choices reaches a leaf (least fixpoint).
pub fn converges(s: &StratProf) -> PredicateResult {
    lfp_eval(s.graph(), &convergence_rule)
}

/// Strong convergence: convergence holds at every subprofile (greatest
/// fixpoint).
pub fn strongly_converges(s: &StratProf) -> PredicateResult {
    strongly_converges_given(s, &converges(s))
}

/// The rule defining strong convergence from a convergence valuation.
pub fn strong_convergence_rule(conv: &PredicateResult) -> impl Rule + '_ {
    move |g: &TermGraph, n: NodeRef| -> Formula {
        match g.get(n) {
            Node::Leaf(_) => Formula::TRUE,
            Node::Inner { down, right, .. } => Formula::var(*down)
                .and(Formula::var(*right))
                .when(conv.at(n)),
        }
    }
}

fn strongly_converges_given(s: &StratProf, conv: &PredicateResult) -> PredicateResult {
    gfp_eval(s.graph(), &strong_convergence_rule(conv))
}

/// Local equilibrium: strongly convergent, and the owner of the node does not
/// prefer the branch it did not choose.
pub fn is_pe(s: &StratProf) -> PredicateResult {
    let sconv = strongly_converges(s);
    let pay = payoffs(s);
    let g = s.graph();
    let valuation = g
        .node_refs()
        .map(|n| match g.get(n) {
            Node::Leaf(_) => true,
            Node::Inner { label, down, right } => {
                if !sconv.at(n) {
                    return false;
                }
                let (InnerLabel::Profile(p, c), Some(fd), Some(fr)) =
                    (label, &pay[down.index()], &pay[right.index()])
                else {
                    unreachable!("strong convergence defines the payoff of both children")
                };
                prefers_chosen(p, *c, fd, fr)
            }
        })
        .collect();
    PredicateResult::new(valuation, g.root())
}

/// `true` when the chosen branch gives `p` at least as much as the other one.
pub(crate) fn prefers_chosen(p: &Agent, c: Choice, down: &PayoffFn, right: &PayoffFn) -> bool {
    let (d, r) = (down.get(p), right.get(p));
    match c {
        Choice::D => d >= r,
        Choice::R => r >= d,
    }
}

/// Subgame perfect equilibrium at every node: the always modality applied to
/// local equilibrium.
pub fn spe(s: &StratProf) -> PredicateResult {
    let pe = is_pe(s);
    always(s.graph(), |n| pe.at(n))
}

/// The named rules behind the profile predicates, instantiated for `s`
/// (strong convergence and subgame perfection are given the valuations they
/// depend on).
pub fn profile_rules(s: &StratProf) -> Vec<(&'static str, Box<dyn Rule>)> {
    let conv = converges(s);
    let pe = is_pe(s);
    vec![
        ("conv", Box::new(convergence_rule) as Box<dyn Rule>),
        ("sconv", Box::new(strong_convergence_rule_owned(conv))),
        ("spe", Box::new(always_rule(move |n| pe.at(n)))),
    ]
}

fn strong_convergence_rule_owned(conv: PredicateResult) -> impl Rule {
    move |g: &TermGraph, n: NodeRef| strong_convergence_rule(&conv).formula(g, n)
}

pub fn is_spe(s: &StratProf) -> bool {
    spe(s).root_verdict()
}

/// `s1` is bisimilar to some subprofile of `s2` (possibly `s2` itself).
pub fn is_subprofile(s1: &StratProf, s2: &StratProf) -> bool {
    let rel = Bisimulation::between(s1.graph(), s2.graph()).expect("both are profiles");
    s2.graph()
        .node_refs()
        .any(|n| rel.related(s1.root(), n))
}

/// Like [`is_subprofile`], but only materialises the pairs reachable from each
/// candidate.
pub fn is_subprofile_pairwise(s1: &StratProf, s2: &StratProf) -> bool {
    s2.graph().node_refs().any(|n| {
        bisimilar(s1.graph(), s1.root(), s2.graph(), n).expect("both are profiles")
    })
}
