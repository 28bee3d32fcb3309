//! Individual strategies and their sum into a strategy profile.
//!
//! A strategy for agent `p` is a game in which every position owned by `p`
//! carries a choice instead of the agent. A family with one strategy per agent
//! is consistent when each member is full for its agent and all members
//! project onto the same game; the sum of a consistent family is the profile
//! obtained by walking all members in lockstep.

use std::collections::{BTreeMap, HashMap};

use crate::bisim::bisimilar_graphs;
use crate::error::{GameError, GraphError};
use crate::fixpoint::{gfp_eval, Formula};
use crate::game::{Game, StratProf};
use crate::termgraph::{Agent, InnerLabel, Kind, Node, NodeRef, StratHead, TermGraph};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Strat(TermGraph);

impl Strat {
    pub fn new(graph: TermGraph) -> Result<Self, GraphError> {
        if graph.kind() != Kind::Strategy {
            return Err(GraphError::WrongKind {
                expected: Kind::Strategy,
                found: graph.kind(),
            });
        }
        Ok(Strat(graph))
    }

    pub fn graph(&self) -> &TermGraph {
        &self.0
    }

    pub fn root(&self) -> NodeRef {
        self.0.root()
    }

    fn head(&self, n: NodeRef) -> Option<&StratHead> {
        match self.0.get(n).label()? {
            InnerLabel::Strategy(h) => Some(h),
            _ => None,
        }
    }
}

/// One strategy per agent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyFamily {
    members: BTreeMap<Agent, Strat>,
}

impl StrategyFamily {
    pub fn new(members: impl IntoIterator<Item = (Agent, Strat)>) -> Result<Self, GameError> {
        let members: BTreeMap<Agent, Strat> = members.into_iter().collect();
        let Some(first) = members.values().next() else {
            return Err(GameError::InvalidArgument("empty strategy family".into()));
        };
        let agents = first.graph().agents().clone();
        if members.values().any(|st| *st.graph().agents() != agents) {
            return Err(GameError::InvalidArgument(
                "strategies range over different agent sets".into(),
            ));
        }
        if !members.keys().eq(agents.iter()) {
            return Err(GameError::InvalidArgument(
                "the family must hold exactly one strategy per agent".into(),
            ));
        }
        Ok(StrategyFamily { members })
    }

    pub fn get(&self, p: &Agent) -> Option<&Strat> {
        self.members.get(p)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Agent, &Strat)> {
        self.members.iter()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Full for `p`: no position reachable from the root is labelled with `p`
/// itself, so every move of `p` is a choice.
pub fn is_full(st: &Strat, p: &Agent) -> bool {
    let rule = |g: &TermGraph, n: NodeRef| -> Formula {
        match g.get(n) {
            Node::Leaf(_) => Formula::TRUE,
            Node::Inner { label, down, right } => {
                let ok = !matches!(label, InnerLabel::Strategy(StratHead::Agent(a)) if a == p);
                Formula::var(*down).and(Formula::var(*right)).when(ok)
            }
        }
    };
    gfp_eval(st.graph(), &rule).root_verdict()
}

/// Fullness checked directly over the reachable heads.
pub fn is_full_by_reachability(st: &Strat, p: &Agent) -> bool {
    let g = st.graph();
    g.reachable(g.root())
        .expect("root")
        .into_iter()
        .all(|n| st.head(n) != Some(&StratHead::Agent(p.clone())))
}

/// The game obtained by putting `p` back wherever the strategy has a choice.
pub fn st2g(st: &Strat, p: &Agent) -> Game {
    let g = st
        .graph()
        .map_labels(Kind::Game, |_, label| match label {
            InnerLabel::Strategy(StratHead::Agent(x)) => InnerLabel::Game(x.clone()),
            InnerLabel::Strategy(StratHead::Choice(_)) => InnerLabel::Game(p.clone()),
            other => other.clone(),
        })
        .expect("relabelling preserves validity");
    Game::new(g).expect("game kind")
}

/// Why a family cannot be summed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inconsistency {
    NotFull(Agent),
    DifferentGames(Agent, Agent),
}

impl std::fmt::Display for Inconsistency {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Inconsistency::NotFull(p) => write!(f, "fullness: the strategy of {p} is not full for {p}"),
            Inconsistency::DifferentGames(p, q) => {
                write!(f, "common game: the strategies of {p} and {q} have different games")
            }
        }
    }
}

/// First violated consistency condition, if any.
pub fn check_consistency(fam: &StrategyFamily) -> Option<Inconsistency> {
    for (p, st) in fam.iter() {
        if !is_full(st, p) {
            return Some(Inconsistency::NotFull(p.clone()));
        }
    }
    let games: Vec<(&Agent, Game)> = fam.iter().map(|(p, st)| (p, st2g(st, p))).collect();
    let (first_agent, first_game) = &games[0];
    for (p, g) in &games[1..] {
        if !bisimilar_graphs(first_game.graph(), g.graph()).expect("both games") {
            return Some(Inconsistency::DifferentGames((*first_agent).clone(), (*p).clone()));
        }
    }
    None
}

pub fn are_consistent(fam: &StrategyFamily) -> bool {
    check_consistency(fam).is_none()
}

/// Sum of a consistent family.
///
/// The result's nodes are tuples of member nodes reached in lockstep, so its
/// size is bounded by the product of the member sizes.
pub fn sum(fam: &StrategyFamily) -> Result<StratProf, GameError> {
    if let Some(why) = check_consistency(fam) {
        return Err(GameError::InconsistentStrategies(why.to_string()));
    }
    let members: Vec<(&Agent, &Strat)> = fam.iter().collect();
    let start: Vec<NodeRef> = members.iter().map(|(_, st)| st.root()).collect();
    let mut index: HashMap<Vec<NodeRef>, NodeRef> = HashMap::new();
    let mut tuples = vec![start.clone()];
    index.insert(start, NodeRef(0));
    let mut nodes = Vec::new();
    let mut next = 0;
    while next < tuples.len() {
        let tuple = tuples[next].clone();
        next += 1;
        let first = members[0].1.graph().get(tuple[0]);
        let node = match first {
            Node::Leaf(f) => Node::Leaf(f.clone()),
            Node::Inner { .. } => {
                // The mover is the unique member holding a choice here.
                let mut mover = None;
                for (k, (p, st)) in members.iter().enumerate() {
                    if let Some(StratHead::Choice(c)) = st.head(tuple[k]) {
                        mover = Some(((*p).clone(), *c));
                    }
                }
                let (owner, choice) = mover.ok_or_else(|| {
                    GameError::InconsistentStrategies("a position has no mover".into())
                })?;
                let mut child = |pick: fn((NodeRef, NodeRef)) -> NodeRef| -> NodeRef {
                    let t: Vec<NodeRef> = members
                        .iter()
                        .zip(&tuple)
                        .map(|((_, st), n)| pick(st.graph().get(*n).children().expect("inner")))
                        .collect();
                    *index.entry(t.clone()).or_insert_with(|| {
                        tuples.push(t);
                        NodeRef::from_index(tuples.len() - 1)
                    })
                };
                let down = child(|(d, _)| d);
                let right = child(|(_, r)| r);
                Node::inner(InnerLabel::Profile(owner, choice), down, right)
            }
        };
        nodes.push(node);
    }
    let g = TermGraph::new(Kind::Profile, nodes, NodeRef(0))?;
    Ok(StratProf::new(g)?)
}

/// Splits a profile into one strategy per agent: each agent keeps its own
/// choices and sees the owner everywhere else.
pub fn split(s: &StratProf) -> StrategyFamily {
    let members = s.graph().agents().iter().map(|p| {
        let g = s
            .graph()
            .map_labels(Kind::Strategy, |_, label| match label {
                InnerLabel::Profile(owner, c) if owner == p => InnerLabel::Strategy(StratHead::Choice(*c)),
                InnerLabel::Profile(owner, _) => InnerLabel::Strategy(StratHead::Agent(owner.clone())),
                other => other.clone(),
            })
            .expect("relabelling preserves validity");
        (p.clone(), Strat(g))
    });
    StrategyFamily::new(members).expect("one strategy per agent")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bisim::bisimilar_graphs;
    use crate::catalog::{example_gg, example_s1, example_s2};
    use crate::game::game_of;
    use crate::lab::{escalation_witnesses, make_zero_one};
    use crate::termgraph::{agent_a, agent_b, Choice, PayoffFn};

    fn leaf_strategy() -> Strat {
        Strat::new(
            TermGraph::new(
                Kind::Strategy,
                vec![Node::Leaf(PayoffFn::from_ints([("A", 0), ("B", 1)]))],
                NodeRef(0),
            )
            .unwrap(),
        )
        .unwrap()
    }

    /// A plays r everywhere in `gg`, B's positions stay B.
    fn all_right_for_a() -> Strat {
        let g = example_gg()
            .graph()
            .map_labels(Kind::Strategy, |_, l| match l {
                InnerLabel::Game(p) if *p == agent_a() => InnerLabel::Strategy(StratHead::Choice(Choice::R)),
                InnerLabel::Game(p) => InnerLabel::Strategy(StratHead::Agent(p.clone())),
                other => other.clone(),
            })
            .unwrap();
        Strat::new(g).unwrap()
    }

    #[test]
    fn fullness_of_escalation_strategies() {
        let (st_a, st_b, _) = escalation_witnesses();
        assert!(is_full(&st_a, &agent_a()));
        assert!(is_full(&st_b, &agent_b()));
        assert!(!is_full(&st_a, &agent_b()));
        assert!(is_full(&all_right_for_a(), &agent_a()));
        for st in [&st_a, &st_b] {
            for p in [agent_a(), agent_b()] {
                assert_eq!(is_full(st, &p), is_full_by_reachability(st, &p));
            }
        }
    }

    #[test]
    fn st2g_projections() {
        let (st_a, st_b, _) = escalation_witnesses();
        let g01 = make_zero_one();
        assert!(bisimilar_graphs(st2g(&st_a, &agent_a()).graph(), g01.graph()).unwrap());
        assert!(bisimilar_graphs(st2g(&st_b, &agent_b()).graph(), g01.graph()).unwrap());
        let leaf = leaf_strategy();
        assert_eq!(st2g(&leaf, &agent_b()).graph().nodes(), leaf.graph().nodes());
    }

    #[test]
    fn consistency() {
        let (st_a, st_b, _) = escalation_witnesses();
        let good = StrategyFamily::new([(agent_a(), st_a.clone()), (agent_b(), st_b)]).unwrap();
        assert!(are_consistent(&good));
        let bad = StrategyFamily::new([(agent_a(), st_a.clone()), (agent_b(), st_a)]).unwrap();
        assert_eq!(check_consistency(&bad), Some(Inconsistency::NotFull(agent_b())));
        let leaves = StrategyFamily::new([(agent_a(), leaf_strategy()), (agent_b(), leaf_strategy())]).unwrap();
        assert!(are_consistent(&leaves));
    }

    #[test]
    fn sums() {
        let (st_a, st_b, s_inf) = escalation_witnesses();
        let fam = StrategyFamily::new([(agent_a(), st_a.clone()), (agent_b(), st_b)]).unwrap();
        let s = sum(&fam).unwrap();
        assert!(bisimilar_graphs(s.graph(), s_inf.graph()).unwrap());

        let leaves = StrategyFamily::new([(agent_a(), leaf_strategy()), (agent_b(), leaf_strategy())]).unwrap();
        let s = sum(&leaves).unwrap();
        assert_eq!(s.graph().nodes(), leaf_strategy().graph().nodes());

        let bad = StrategyFamily::new([(agent_a(), st_a.clone()), (agent_b(), st_a)]).unwrap();
        let err = sum(&bad).unwrap_err();
        assert!(err.to_string().starts_with("inconsistent strategies: fullness"), "{err}");
    }

    #[test]
    fn all_right_for_a_summed_with_b_strategy() {
        let b_part = split(&example_s2()).get(&agent_b()).unwrap().clone();
        let fam = StrategyFamily::new([(agent_a(), all_right_for_a()), (agent_b(), b_part)]).unwrap();
        let s = sum(&fam).unwrap();
        for n in s.graph().node_refs() {
            if let Some((p, c)) = s.decision(n) {
                if *p == agent_a() {
                    assert_eq!(c, Choice::R);
                }
            }
        }
        assert!(bisimilar_graphs(game_of(&s).graph(), example_gg().graph()).unwrap());
    }

    #[test]
    fn split_then_sum_round_trip() {
        for s in [example_s1(), example_s2(), crate::catalog::s_10_a()] {
            let fam = split(&s);
            assert!(are_consistent(&fam));
            assert!(bisimilar_graphs(sum(&fam).unwrap().graph(), s.graph()).unwrap());
        }
    }

    #[test]
    fn family_requires_one_member_per_agent() {
        let (st_a, _, _) = escalation_witnesses();
        assert!(StrategyFamily::new([(agent_a(), st_a)]).is_err());
    }
}
