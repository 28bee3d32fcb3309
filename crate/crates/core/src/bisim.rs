//! Bisimilarity of term graphs.
//!
//! Two nodes are bisimilar when they carry the same label and their children
//! are pairwise bisimilar, coinductively. On finite presentations this is the
//! greatest fixpoint of an equation system over node pairs, and it coincides
//! with equality of the denoted (possibly infinite) trees.

use std::collections::HashMap;

use crate::error::GraphError;
use crate::fixpoint::{EquationSystem, Formula};
use crate::termgraph::{bfs_order, InnerLabel, Node, NodeRef, PayoffFn, TermGraph};

fn check_kinds(g1: &TermGraph, g2: &TermGraph) -> Result<(), GraphError> {
    if g1.kind() != g2.kind() {
        return Err(GraphError::IncomparableKinds(g1.kind(), g2.kind()));
    }
    Ok(())
}

/// Decides whether `n1` in `g1` and `n2` in `g2` denote the same tree.
///
/// Only the pairs reachable from `(n1, n2)` are materialised.
pub fn bisimilar(g1: &TermGraph, n1: NodeRef, g2: &TermGraph, n2: NodeRef) -> Result<bool, GraphError> {
    check_kinds(g1, g2)?;
    g1.node(n1)?;
    g2.node(n2)?;
    let mut index: HashMap<(NodeRef, NodeRef), usize> = HashMap::new();
    let mut pairs = vec![(n1, n2)];
    index.insert((n1, n2), 0);
    let mut formulas = Vec::new();
    let mut next = 0;
    while next < pairs.len() {
        let (x, y) = pairs[next];
        next += 1;
        let (nx, ny) = (g1.get(x), g2.get(y));
        let f = if !nx.same_label(ny) {
            Formula::FALSE
        } else {
            match (nx.children(), ny.children()) {
                (Some((xd, xr)), Some((yd, yr))) => {
                    let mut var = |p: (NodeRef, NodeRef)| {
                        let i = *index.entry(p).or_insert_with(|| {
                            pairs.push(p);
                            pairs.len() - 1
                        });
                        Formula::Var(i)
                    };
                    let d = var((xd, yd));
                    let r = var((xr, yr));
                    d.and(r)
                }
                _ => Formula::TRUE,
            }
        };
        formulas.push(f);
    }
    Ok(EquationSystem::new(formulas).greatest()[0])
}

/// Whole-graph bisimilarity of the two roots.
pub fn bisimilar_graphs(g1: &TermGraph, g2: &TermGraph) -> Result<bool, GraphError> {
    bisimilar(g1, g1.root(), g2, g2.root())
}

/// The full bisimilarity relation between all nodes of two graphs.
#[derive(Debug, Clone)]
pub struct Bisimulation {
    width: usize,
    related: Vec<bool>,
}

impl Bisimulation {
    pub fn between(g1: &TermGraph, g2: &TermGraph) -> Result<Self, GraphError> {
        check_kinds(g1, g2)?;
        let width = g2.len();
        let pair = |x: NodeRef, y: NodeRef| x.index() * width + y.index();
        let mut formulas = Vec::with_capacity(g1.len() * width);
        for x in g1.node_refs() {
            for y in g2.node_refs() {
                let (nx, ny) = (g1.get(x), g2.get(y));
                let f = if !nx.same_label(ny) {
                    Formula::FALSE
                } else {
                    match (nx.children(), ny.children()) {
                        (Some((xd, xr)), Some((yd, yr))) => {
                            Formula::Var(pair(xd, yd)).and(Formula::Var(pair(xr, yr)))
                        }
                        _ => Formula::TRUE,
                    }
                };
                formulas.push(f);
            }
        }
        Ok(Bisimulation {
            width,
            related: EquationSystem::new(formulas).greatest(),
        })
    }

    pub fn related(&self, x: NodeRef, y: NodeRef) -> bool {
        self.related[x.index() * self.width + y.index()]
    }
}

/// The minimal presentation of a graph, numbered breadth-first from the root.
///
/// Two graphs of the same kind are bisimilar exactly when their canonical
/// forms are equal, which makes the result usable as a hash key.
pub fn canonical(g: &TermGraph) -> TermGraph {
    // Moore-style partition refinement over signatures.
    let n = g.len();
    #[derive(PartialEq, Eq, Hash)]
    enum Key<'a> {
        Leaf(&'a PayoffFn),
        Inner(&'a InnerLabel),
    }
    let mut class = vec![0usize; n];
    let mut label_ids: HashMap<Key<'_>, usize> = HashMap::new();
    for (i, node) in g.nodes().iter().enumerate() {
        let key = match node {
            Node::Leaf(f) => Key::Leaf(f),
            Node::Inner { label, .. } => Key::Inner(label),
        };
        let next = label_ids.len();
        class[i] = *label_ids.entry(key).or_insert(next);
    }
    let mut count = class.iter().copied().max().map_or(0, |m| m + 1);
    loop {
        let mut sig_ids: HashMap<(usize, Option<(usize, usize)>), usize> = HashMap::new();
        let mut next_class = vec![0usize; n];
        for (i, node) in g.nodes().iter().enumerate() {
            let sig = (class[i], node.children().map(|(d, r)| (class[d.index()], class[r.index()])));
            let fresh = sig_ids.len();
            next_class[i] = *sig_ids.entry(sig).or_insert(fresh);
        }
        let next_count = sig_ids.len();
        class = next_class;
        if next_count == count {
            break;
        }
        count = next_count;
    }

    // One representative per class, numbered by BFS over the quotient.
    let mut rep = vec![usize::MAX; count];
    for (i, &c) in class.iter().enumerate() {
        if rep[c] == usize::MAX {
            rep[c] = i;
        }
    }
    let mut order: Vec<usize> = Vec::with_capacity(count);
    let mut number = vec![usize::MAX; count];
    let root_class = class[g.root().index()];
    number[root_class] = 0;
    order.push(root_class);
    let mut head = 0;
    while head < order.len() {
        let c = order[head];
        head += 1;
        if let Some((d, r)) = g.get(NodeRef::from_index(rep[c])).children() {
            for child in [d, r] {
                let cc = class[child.index()];
                if number[cc] == usize::MAX {
                    number[cc] = order.len();
                    order.push(cc);
                }
            }
        }
    }
    let nodes = order
        .iter()
        .map(|&c| match g.get(NodeRef::from_index(rep[c])) {
            Node::Leaf(f) => Node::Leaf(f.clone()),
            Node::Inner { label, down, right } => Node::Inner {
                label: label.clone(),
                down: NodeRef::from_index(number[class[down.index()]]),
                right: NodeRef::from_index(number[class[right.index()]]),
            },
        })
        .collect();
    let out = TermGraph::new(g.kind(), nodes, NodeRef(0)).expect("quotient of a valid graph is valid");
    debug_assert_eq!(bfs_order(&out).len(), out.len());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{s_01_a, s_10_a, s_10_b};
    use crate::termgraph::{agent_a, agent_b, Choice, Kind};

    /// The 1,0 profile starting at A, written with the two-node cycle duplicated.
    fn s10a_doubled() -> TermGraph {
        let f01 = PayoffFn::from_ints([("A", 0), ("B", 1)]);
        let f10 = PayoffFn::from_ints([("A", 1), ("B", 0)]);
        let a = InnerLabel::Profile(agent_a(), Choice::R);
        let b = InnerLabel::Profile(agent_b(), Choice::D);
        TermGraph::new(
            Kind::Profile,
            vec![
                Node::inner(a.clone(), NodeRef(4), NodeRef(1)),
                Node::inner(b.clone(), NodeRef(5), NodeRef(2)),
                Node::inner(a, NodeRef(4), NodeRef(3)),
                Node::inner(b, NodeRef(5), NodeRef(0)),
                Node::Leaf(f01),
                Node::Leaf(f10),
            ],
            NodeRef(0),
        )
        .unwrap()
    }

    #[test]
    fn reflexive() {
        let s = s_10_a();
        let g = s.graph();
        for n in g.node_refs() {
            assert!(bisimilar(g, n, g, n).unwrap());
        }
    }

    #[test]
    fn different_presentations_of_the_same_tree() {
        let s = s_10_a();
        let d = s10a_doubled();
        assert!(bisimilar_graphs(s.graph(), &d).unwrap());
        // oracle: unfoldings agree up to 2 * |g1| * |g2|
        let k = 2 * s.graph().len() * d.len();
        assert_eq!(s.graph().unfold(k), d.unfold(k));
        assert_eq!(canonical(&d), canonical(s.graph()));
        assert_eq!(canonical(&d).len(), 4);
    }

    #[test]
    fn choices_at_root_differ() {
        assert!(!bisimilar_graphs(s_10_a().graph(), s_01_a().graph()).unwrap());
        assert_ne!(canonical(s_10_a().graph()), canonical(s_01_a().graph()));
    }

    #[test]
    fn kinds_must_match() {
        let g = crate::lab::make_zero_one();
        let err = bisimilar_graphs(g.graph(), s_10_a().graph()).unwrap_err();
        assert_eq!(err, GraphError::IncomparableKinds(Kind::Game, Kind::Profile));
        assert_eq!(err.to_string(), "incomparable kinds: game and profile");
    }

    #[test]
    fn full_relation_matches_pairwise_queries() {
        let a = s_10_a();
        let b = s_10_b();
        let rel = Bisimulation::between(a.graph(), b.graph()).unwrap();
        for x in a.graph().node_refs() {
            for y in b.graph().node_refs() {
                assert_eq!(rel.related(x, y), bisimilar(a.graph(), x, b.graph(), y).unwrap());
            }
        }
    }
}
