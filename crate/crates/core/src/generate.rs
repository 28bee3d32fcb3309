//! Random instances for property tests and experiments.

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::GraphError;
use crate::game::{Game, StratProf};
use crate::strategy::{split, StrategyFamily};
use crate::termgraph::{
    agent_a, agent_b, Agent, Choice, InnerLabel, Kind, Node, NodeRef, PayoffFn, StratHead, TermGraph,
};

fn any_agent(rng: &mut impl Rng) -> Agent {
    if rng.gen_bool(0.5) {
        agent_a()
    } else {
        agent_b()
    }
}

fn any_choice(rng: &mut impl Rng) -> Choice {
    if rng.gen_bool(0.5) {
        Choice::D
    } else {
        Choice::R
    }
}

/// Integer payoffs in `0..=9` for A and B.
pub fn small_payoff(rng: &mut impl Rng) -> PayoffFn {
    PayoffFn::from_ints([("A", rng.gen_range(0..=9)), ("B", rng.gen_range(0..=9))])
}

/// Rational payoffs of either sign, not necessarily reduced on input.
pub fn rational_payoff(rng: &mut impl Rng) -> PayoffFn {
    let mut value = || BigRational::new(rng.gen_range(-20i64..=20).into(), rng.gen_range(1i64..=6).into());
    PayoffFn::new([(agent_a(), value()), (agent_b(), value())])
}

fn label(rng: &mut impl Rng, kind: Kind) -> InnerLabel {
    match kind {
        Kind::Game => InnerLabel::Game(any_agent(rng)),
        Kind::Profile => InnerLabel::Profile(any_agent(rng), any_choice(rng)),
        Kind::Strategy => {
            if rng.gen_bool(0.5) {
                InnerLabel::Strategy(StratHead::Choice(any_choice(rng)))
            } else {
                InnerLabel::Strategy(StratHead::Agent(any_agent(rng)))
            }
        }
    }
}

/// A graph of `kind` with at most `max_nodes` nodes, pruned to what the root
/// reaches. With `acyclic`, children always have larger indices.
pub fn random_graph(rng: &mut impl Rng, kind: Kind, max_nodes: usize, acyclic: bool, rational: bool) -> TermGraph {
    assert!(max_nodes >= 1);
    loop {
        if let Some(g) = try_random_graph(rng, kind, max_nodes, acyclic, rational) {
            return g;
        }
    }
}

// `None` when the root reaches no leaf.
fn try_random_graph(rng: &mut impl Rng, kind: Kind, max_nodes: usize, acyclic: bool, rational: bool) -> Option<TermGraph> {
    let total = rng.gen_range(1..=max_nodes);
    let leaves = if total == 1 { 1 } else { rng.gen_range(1..total) };
    let inner = total - leaves;
    // inner nodes first, so that acyclic graphs can point forward
    let nodes: Vec<Node> = (0..total)
        .map(|i| {
            if i < inner {
                let lo = if acyclic { i + 1 } else { 0 };
                let d = NodeRef::from_index(rng.gen_range(lo..total));
                let r = NodeRef::from_index(rng.gen_range(lo..total));
                Node::inner(label(rng, kind), d, r)
            } else if rational {
                Node::Leaf(rational_payoff(rng))
            } else {
                Node::Leaf(small_payoff(rng))
            }
        })
        .collect();
    match TermGraph::from_reachable(kind, nodes, NodeRef(0)) {
        Ok(g) => Some(g),
        Err(GraphError::NoLeaf) => None,
        Err(e) => panic!("generated graph is invalid: {e}"),
    }
}

/// A regular profile with at most `max_nodes` nodes, possibly cyclic.
pub fn random_profile(rng: &mut impl Rng, max_nodes: usize) -> StratProf {
    StratProf::new(random_graph(rng, Kind::Profile, max_nodes, false, false)).expect("profile")
}

pub fn random_acyclic_profile(rng: &mut impl Rng, max_nodes: usize) -> StratProf {
    StratProf::new(random_graph(rng, Kind::Profile, max_nodes, true, false)).expect("profile")
}

/// A finite tree-shaped game of height at most `max_depth` with at most
/// `max_inner` positions and payoffs in `0..=9`.
pub fn random_game(rng: &mut impl Rng, max_depth: usize, max_inner: usize) -> Game {
    fn grow(rng: &mut impl Rng, depth: usize, budget: &mut usize, nodes: &mut Vec<Node>) -> NodeRef {
        let at = NodeRef::from_index(nodes.len());
        if depth == 0 || *budget == 0 || rng.gen_bool(0.3) {
            nodes.push(Node::Leaf(small_payoff(rng)));
            return at;
        }
        *budget -= 1;
        nodes.push(Node::Leaf(PayoffFn::default()));
        let owner = any_agent(rng);
        let d = grow(rng, depth - 1, budget, nodes);
        let r = grow(rng, depth - 1, budget, nodes);
        nodes[at.index()] = Node::inner(InnerLabel::Game(owner), d, r);
        at
    }
    let mut nodes = Vec::new();
    let mut budget = max_inner;
    let root = grow(rng, max_depth, &mut budget, &mut nodes);
    Game::new(TermGraph::new(Kind::Game, nodes, root).expect("tree")).expect("game")
}

/// A profile of `g` with uniformly random choices.
pub fn random_profile_of(rng: &mut impl Rng, g: &Game) -> StratProf {
    let graph = g
        .graph()
        .map_labels(Kind::Profile, |_, l| {
            InnerLabel::Profile(l.owner().expect("game node").clone(), any_choice(rng))
        })
        .expect("relabelling preserves validity");
    StratProf::new(graph).expect("profile")
}

/// The strategies of a random profile of `g`; consistent by construction.
pub fn random_family(rng: &mut impl Rng, g: &Game) -> StrategyFamily {
    split(&random_profile_of(rng, g))
}

/// The same equations with node numbers permuted.
pub fn shuffle_presentation(rng: &mut impl Rng, g: &TermGraph) -> TermGraph {
    let mut perm: Vec<usize> = (0..g.len()).collect();
    perm.shuffle(rng);
    let at = |n: NodeRef| NodeRef::from_index(perm[n.index()]);
    let mut nodes = vec![Node::Leaf(PayoffFn::default()); g.len()];
    for n in g.node_refs() {
        nodes[perm[n.index()]] = match g.get(n) {
            Node::Leaf(f) => Node::Leaf(f.clone()),
            Node::Inner { label, down, right } => Node::inner(label.clone(), at(*down), at(*right)),
        };
    }
    TermGraph::new(g.kind(), nodes, at(g.root())).expect("permutation keeps validity")
}
