//! Nash equilibria through unilateral deviations, and backward induction on
//! finite profiles.
//!
//! Agent `p` may turn a profile `s` into `s'` (written `s |-p-| s'`) when a
//! finite derivation connects them: at the leaves of the derivation the two
//! profiles are bisimilar, and above them they have the same owners
//! everywhere and the same choices at every position not owned by `p`.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_rational::BigRational;

use crate::bisim::{bisimilar_graphs, canonical, Bisimulation};
use crate::error::GameError;
use crate::fixpoint::{EquationSystem, Formula, PredicateResult};
use crate::game::{game_of, payoff, payoffs, prefers_chosen, StratProf};
use crate::termgraph::{Agent, Choice, InnerLabel, Kind, Node, NodeRef, PayoffFn, TermGraph};

/// Depth of the prefix within which a deviating agent may change choices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DeviationBudget {
    pub depth: usize,
}

impl DeviationBudget {
    pub fn new(depth: usize) -> Self {
        DeviationBudget { depth }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NashVerdict {
    /// Exact: the profile is finite and every deviation was considered.
    Nash,
    /// No convertible deviation within the budget improves any agent.
    NoImprovingDeviationUpTo(usize),
    Refuted {
        witness: StratProf,
        agent: Agent,
        before: BigRational,
        after: BigRational,
    },
}

impl fmt::Display for NashVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NashVerdict::Nash => f.write_str("nash"),
            NashVerdict::NoImprovingDeviationUpTo(d) => write!(f, "no-improving-deviation(depth={d})"),
            NashVerdict::Refuted { agent, before, after, .. } => {
                write!(f, "refuted(agent={agent}, gain={before}->{after})")
            }
        }
    }
}

/// Decides `s |-p-| s2`.
///
/// The relation is the least fixpoint over the pairs of nodes reachable from
/// the two roots: a pair holds when it is bisimilar, or when both nodes have
/// the same owner, agree on the choice unless the owner is `p`, and both
/// child pairs hold.
pub fn convertible(s: &StratProf, s2: &StratProf, p: &Agent) -> Result<bool, GameError> {
    if !bisimilar_graphs(game_of(s).graph(), game_of(s2).graph())? {
        return Err(GameError::DifferentGames);
    }
    let (g1, g2) = (s.graph(), s2.graph());
    let bisim = Bisimulation::between(g1, g2)?;
    let mut index: HashMap<(NodeRef, NodeRef), usize> = HashMap::new();
    let mut pairs = vec![(g1.root(), g2.root())];
    index.insert(pairs[0], 0);
    let mut formulas = Vec::new();
    let mut next = 0;
    while next < pairs.len() {
        let (x, y) = pairs[next];
        next += 1;
        let f = if bisim.related(x, y) {
            Formula::TRUE
        } else {
            match (g1.get(x), g2.get(y)) {
                (
                    Node::Inner {
                        label: InnerLabel::Profile(o1, c1),
                        down: xd,
                        right: xr,
                    },
                    Node::Inner {
                        label: InnerLabel::Profile(o2, c2),
                        down: yd,
                        right: yr,
                    },
                ) if o1 == o2 && (o1 == p || c1 == c2) => {
                    let mut var = |pair: (NodeRef, NodeRef)| {
                        let i = *index.entry(pair).or_insert_with(|| {
                            pairs.push(pair);
                            pairs.len() - 1
                        });
                        Formula::Var(i)
                    };
                    let d = var((*xd, *yd));
                    let r = var((*xr, *yr));
                    d.and(r)
                }
                _ => Formula::FALSE,
            }
        };
        formulas.push(f);
    }
    Ok(EquationSystem::new(formulas).least()[0])
}

enum Slot {
    Position(usize),
    Original(NodeRef),
}

/// The depth-bounded prefix of a profile, unfolded into distinct positions
/// whose tails point back into the original presentation.
struct Prefix {
    /// (original node, depth) of every inner position shallower than the bound
    positions: Vec<(NodeRef, usize)>,
    children: Vec<(Slot, Slot)>,
}

impl Prefix {
    fn new(g: &TermGraph, depth: usize) -> Prefix {
        let mut prefix = Prefix {
            positions: Vec::new(),
            children: Vec::new(),
        };
        if depth > 0 && !g.get(g.root()).is_leaf() {
            prefix.expand(g, g.root(), 0, depth);
        }
        prefix
    }

    fn expand(&mut self, g: &TermGraph, n: NodeRef, k: usize, depth: usize) -> usize {
        let id = self.positions.len();
        self.positions.push((n, k));
        self.children.push((Slot::Original(n), Slot::Original(n)));
        let (d, r) = g.get(n).children().expect("positions are inner nodes");
        let slot = |c: NodeRef, this: &mut Prefix| {
            if k + 1 < depth && !g.get(c).is_leaf() {
                Slot::Position(this.expand(g, c, k + 1, depth))
            } else {
                Slot::Original(c)
            }
        };
        let ds = slot(d, self);
        let rs = slot(r, self);
        self.children[id] = (ds, rs);
        id
    }

    /// Builds the profile whose prefix positions carry `choice(position)`.
    fn graft(&self, s: &StratProf, choice: impl Fn(usize) -> Choice) -> StratProf {
        if self.positions.is_empty() {
            return s.clone();
        }
        let g = s.graph();
        let base = g.len();
        let mut nodes: Vec<Node> = g.nodes().to_vec();
        let slot = |sl: &Slot| match sl {
            Slot::Position(i) => NodeRef::from_index(base + i),
            Slot::Original(n) => *n,
        };
        for (i, ((orig, _), (d, r))) in self.positions.iter().zip(&self.children).enumerate() {
            let owner = g.get(*orig).label().and_then(InnerLabel::owner).expect("profile node").clone();
            nodes.push(Node::inner(InnerLabel::Profile(owner, choice(i)), slot(d), slot(r)));
        }
        let graph = TermGraph::from_reachable(Kind::Profile, nodes, NodeRef::from_index(base))
            .expect("grafted prefix is well formed");
        StratProf::new(graph).expect("profile kind")
    }
}

/// Every profile `p` can reach by changing its own choices within the first
/// `b.depth` levels, `s` first, without bisimilar duplicates.
///
/// The number of candidates is exponential in the number of `p`-owned
/// positions inside the budget.
pub fn enumerate_deviations(s: &StratProf, p: &Agent, b: DeviationBudget) -> Vec<StratProf> {
    let g = s.graph();
    let prefix = Prefix::new(g, b.depth);
    let original: Vec<Choice> = prefix
        .positions
        .iter()
        .map(|(n, _)| s.decision(*n).expect("inner").1)
        .collect();
    let mine: Vec<usize> = prefix
        .positions
        .iter()
        .enumerate()
        .filter(|(_, (n, _))| s.decision(*n).map(|(o, _)| o) == Some(p))
        .map(|(i, _)| i)
        .collect();
    assert!(mine.len() < 31, "too many deviation points: {}", mine.len());

    let mut seen: HashSet<TermGraph> = HashSet::new();
    let mut out = vec![s.clone()];
    seen.insert(canonical(g));
    for mask in 0u32..(1u32 << mine.len()) {
        let mut choices = original.clone();
        for (bit, &pos) in mine.iter().enumerate() {
            choices[pos] = if mask >> bit & 1 == 1 { Choice::R } else { Choice::D };
        }
        let dev = prefix.graft(s, |i| choices[i]);
        if seen.insert(canonical(dev.graph())) {
            out.push(dev);
        }
    }
    out
}

/// Best payoff `p` can secure by deviating within the budget, by dynamic
/// programming over (node, remaining depth).
struct BestResponse<'a> {
    s: &'a StratProf,
    p: &'a Agent,
    tail: Vec<Option<PayoffFn>>,
    memo: HashMap<(NodeRef, usize), Option<(PayoffFn, Option<Choice>)>>,
}

impl<'a> BestResponse<'a> {
    fn new(s: &'a StratProf, p: &'a Agent) -> Self {
        BestResponse {
            s,
            p,
            tail: payoffs(s),
            memo: HashMap::new(),
        }
    }

    fn value(&mut self, n: NodeRef, remaining: usize) -> Option<PayoffFn> {
        self.solve(n, remaining).map(|(f, _)| f)
    }

    fn solve(&mut self, n: NodeRef, remaining: usize) -> Option<(PayoffFn, Option<Choice>)> {
        if let Some(hit) = self.memo.get(&(n, remaining)) {
            return hit.clone();
        }
        let g = self.s.graph();
        let result = match g.get(n) {
            Node::Leaf(f) => Some((f.clone(), None)),
            _ if remaining == 0 => self.tail[n.index()].clone().map(|f| (f, None)),
            node => {
                let (owner, chosen) = self.s.decision(n).expect("profile node");
                if owner == self.p {
                    let mut best: Option<(PayoffFn, Option<Choice>)> = None;
                    // original choice first so that ties keep it
                    for c in [chosen, chosen.flip()] {
                        let child = node.child(c).expect("inner");
                        if let Some(v) = self.value(child, remaining - 1) {
                            let better = match &best {
                                None => true,
                                Some((b, _)) => v.get(self.p) > b.get(self.p),
                            };
                            if better {
                                best = Some((v, Some(c)));
                            }
                        }
                    }
                    best
                } else {
                    let child = node.child(chosen).expect("inner");
                    self.value(child, remaining - 1).map(|v| (v, None))
                }
            }
        };
        self.memo.insert((n, remaining), result.clone());
        result
    }
}

/// Nash check by unilateral deviations.
///
/// Exact on finite profiles when the budget covers the whole height; a
/// bounded verdict otherwise. Deviations whose payoff is undefined never
/// refute.
pub fn is_nash(s: &StratProf, b: DeviationBudget) -> Result<NashVerdict, GameError> {
    let current = payoff(s).defined().cloned().ok_or(GameError::PayoffUndefined)?;
    let height = s.graph().height();
    let depth = match height {
        Some(h) => b.depth.min(h),
        None => b.depth,
    };
    for p in s.graph().agents() {
        let mut br = BestResponse::new(s, p);
        let Some(best) = br.value(s.root(), depth) else {
            continue;
        };
        let (before, after) = (current.get(p).cloned(), best.get(p).cloned());
        let (Some(before), Some(after)) = (before, after) else {
            continue;
        };
        if after > before {
            let prefix = Prefix::new(s.graph(), depth);
            let witness = prefix.graft(s, |i| {
                let (n, k) = prefix.positions[i];
                let own = s.decision(n).expect("inner");
                match br.memo.get(&(n, depth - k)) {
                    Some(Some((_, Some(c)))) if own.0 == p => *c,
                    _ => own.1,
                }
            });
            debug_assert_eq!(payoff(&witness).defined().and_then(|f| f.get(p)), Some(&after));
            return Ok(NashVerdict::Refuted {
                witness,
                agent: p.clone(),
                before,
                after,
            });
        }
    }
    Ok(match height {
        Some(h) if b.depth >= h => NashVerdict::Nash,
        _ => NashVerdict::NoImprovingDeviationUpTo(b.depth),
    })
}

/// Backward induction at every node of a finite profile.
pub fn bi(s: &StratProf) -> Result<PredicateResult, GameError> {
    let g = s.graph();
    let order = g.topological_order().ok_or(GameError::CyclicProfile)?;
    let mut ok = vec![false; g.len()];
    let mut pay: Vec<Option<PayoffFn>> = vec![None; g.len()];
    for n in order {
        match g.get(n) {
            Node::Leaf(f) => {
                ok[n.index()] = true;
                pay[n.index()] = Some(f.clone());
            }
            Node::Inner { down, right, .. } => {
                let (owner, c) = s.decision(n).expect("profile node");
                let (fd, fr) = (
                    pay[down.index()].as_ref().expect("child done"),
                    pay[right.index()].as_ref().expect("child done"),
                );
                ok[n.index()] = ok[down.index()] && ok[right.index()] && prefers_chosen(owner, c, fd, fr);
                pay[n.index()] = Some(if c == Choice::D { fd.clone() } else { fr.clone() });
            }
        }
    }
    Ok(PredicateResult::new(ok, g.root()))
}

pub fn is_bi(s: &StratProf) -> Result<bool, GameError> {
    Ok(bi(s)?.root_verdict())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::*;
    use crate::game::{is_spe, profiles_of, Game};
    use crate::termgraph::{agent_a, agent_b};

    fn pf(a: i64, b: i64) -> PayoffFn {
        PayoffFn::from_ints([("A", a), ("B", b)])
    }

    fn one_node(c: Choice) -> StratProf {
        StratProf::new(
            TermGraph::new(
                Kind::Profile,
                vec![
                    Node::inner(InnerLabel::Profile(agent_a(), c), NodeRef(1), NodeRef(2)),
                    Node::Leaf(pf(0, 0)),
                    Node::Leaf(pf(1, 0)),
                ],
                NodeRef(0),
            )
            .unwrap(),
        )
        .unwrap()
    }

    /// The 1,0 profile starting at A, with only the root choice flipped to d.
    fn s10a_root_flipped() -> StratProf {
        let s = s_10_a();
        let prefix = Prefix::new(s.graph(), 1);
        prefix.graft(&s, |_| Choice::D)
    }

    #[test]
    fn convertible_reflexive() {
        for s in [s_10_a(), example_s1(), s_box_r()] {
            for p in [agent_a(), agent_b()] {
                assert!(convertible(&s, &s, &p).unwrap());
            }
        }
    }

    #[test]
    fn convertible_root_flip() {
        let s = s_10_a();
        let t = s10a_root_flipped();
        assert_eq!(t.decision(t.root()), Some((&agent_a(), Choice::D)));
        assert!(convertible(&s, &t, &agent_a()).unwrap());
        assert!(!convertible(&s, &t, &agent_b()).unwrap());
    }

    #[test]
    fn not_convertible_when_other_agent_differs_on_a_cycle() {
        assert!(!convertible(&s_10_a(), &s_01_a(), &agent_a()).unwrap());
        assert!(!convertible(&s_10_a(), &s_01_a(), &agent_b()).unwrap());
    }

    #[test]
    fn convertible_requires_same_game() {
        assert_eq!(
            convertible(&s_10_a(), &example_s1(), &agent_a()),
            Err(GameError::DifferentGames)
        );
    }

    #[test]
    fn deviation_counts() {
        let s = s_10_a();
        assert_eq!(enumerate_deviations(&s, &agent_a(), DeviationBudget::new(0)), vec![s.clone()]);
        assert_eq!(enumerate_deviations(&s, &agent_a(), DeviationBudget::new(1)).len(), 2);
        // gg has five A-positions
        let s1 = example_s1();
        let devs = enumerate_deviations(&s1, &agent_a(), DeviationBudget::new(10));
        assert_eq!(devs.len(), 1 << 5);
        assert!(devs.iter().all(|d| convertible(&s1, d, &agent_a()).unwrap()));
    }

    #[test]
    fn deviations_match_convertibility_filter() {
        // Every profile of gg convertible from s1 for A is an enumerated deviation.
        let s1 = example_s1();
        let devs: HashSet<TermGraph> = enumerate_deviations(&s1, &agent_a(), DeviationBudget::new(5))
            .iter()
            .map(|d| canonical(d.graph()))
            .collect();
        let filtered: HashSet<TermGraph> = profiles_of(&example_gg())
            .filter(|t| convertible(&s1, t, &agent_a()).unwrap())
            .map(|t| canonical(t.graph()))
            .collect();
        assert_eq!(devs, filtered);
    }

    #[test]
    fn nash_examples() {
        assert_eq!(is_nash(&example_s1(), DeviationBudget::new(5)).unwrap(), NashVerdict::Nash);
        assert_eq!(is_nash(&example_s2(), DeviationBudget::new(5)).unwrap(), NashVerdict::Nash);
        match is_nash(&one_node(Choice::D), DeviationBudget::new(1)).unwrap() {
            NashVerdict::Refuted { witness, agent, before, after } => {
                assert_eq!(agent, agent_a());
                assert_eq!((before, after), (BigRational::from_integer(0.into()), BigRational::from_integer(1.into())));
                assert!(bisimilar_graphs(witness.graph(), one_node(Choice::R).graph()).unwrap());
            }
            other => panic!("expected refutation, got {other}"),
        }
        assert_eq!(is_nash(&one_node(Choice::R), DeviationBudget::new(1)).unwrap(), NashVerdict::Nash);
    }

    #[test]
    fn nash_bounded_on_infinite_profiles() {
        assert_eq!(
            is_nash(&s_10_a(), DeviationBudget::new(6)).unwrap(),
            NashVerdict::NoImprovingDeviationUpTo(6)
        );
        assert_eq!(is_nash(&s_box_r(), DeviationBudget::new(3)), Err(GameError::PayoffUndefined));
        // budget below the height of a finite profile is not exact
        assert_eq!(
            is_nash(&example_s1(), DeviationBudget::new(2)).unwrap(),
            NashVerdict::NoImprovingDeviationUpTo(2)
        );
    }

    #[test]
    fn nash_verdict_of_s3_matches_brute_force() {
        let v = is_nash(&example_s3(), DeviationBudget::new(5)).unwrap();
        let brute = [agent_a(), agent_b()].iter().all(|p| {
            enumerate_deviations(&example_s3(), p, DeviationBudget::new(5)).iter().all(|d| {
                payoff(d).defined().unwrap().get(p) <= payoff(&example_s3()).defined().unwrap().get(p)
            })
        });
        assert_eq!(v == NashVerdict::Nash, brute);
    }

    #[test]
    fn dynamic_programme_agrees_with_enumeration_on_gg() {
        let gg = example_gg();
        for s in profiles_of(&gg).step_by(7) {
            let verdict = is_nash(&s, DeviationBudget::new(5)).unwrap();
            let current = payoff(&s).defined().unwrap().clone();
            let brute = [agent_a(), agent_b()].iter().all(|p| {
                enumerate_deviations(&s, p, DeviationBudget::new(5))
                    .iter()
                    .all(|d| payoff(d).defined().unwrap().get(p) <= current.get(p))
            });
            assert_eq!(verdict == NashVerdict::Nash, brute);
            if let NashVerdict::Refuted { witness, agent, after, .. } = verdict {
                assert!(convertible(&s, &witness, &agent).unwrap());
                assert_eq!(payoff(&witness).defined().unwrap().get(&agent), Some(&after));
            }
        }
    }

    #[test]
    fn bi_examples() {
        assert!(is_bi(&example_s1()).unwrap());
        assert!(is_bi(&example_s2()).unwrap());
        assert!(!is_bi(&example_s3()).unwrap());
        let leaf = StratProf::new(TermGraph::new(Kind::Profile, vec![Node::Leaf(pf(1, 1))], NodeRef(0)).unwrap()).unwrap();
        assert!(is_bi(&leaf).unwrap());
        assert_eq!(is_bi(&s_10_a()), Err(GameError::CyclicProfile));
        assert_eq!(GameError::CyclicProfile.to_string(), "BI requires finite profile");
    }

    #[test]
    fn bi_equals_spe_on_all_profiles_of_gg() {
        let gg: Game = example_gg();
        let mut count = 0;
        for s in profiles_of(&gg) {
            assert_eq!(is_bi(&s).unwrap(), is_spe(&s));
            count += 1;
        }
        assert_eq!(count, 1 << 8);
    }
}
