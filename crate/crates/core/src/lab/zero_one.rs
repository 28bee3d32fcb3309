//! The 0,1-game: A and B alternate forever, stopping gives `(0,1)` when A
//! stops and `(1,0)` when B stops.

use std::fmt;
use std::str::FromStr;

use crate::error::GameError;
use crate::fixpoint::{always, lfp_eval, EquationSystem, Formula, PredicateResult, Rule};
use crate::game::{is_spe, payoffs, strongly_converges, Game, StratProf};
use crate::termgraph::{
    agent_a, agent_b, Agent, Choice, GraphBuilder, InnerLabel, Kind, Node, NodeRef, PayoffFn, TermGraph,
};

use super::report::{Counterexample, NamedCheck, TheoremReport};

/// Payoff when A stops.
pub fn f01() -> PayoffFn {
    PayoffFn::from_ints([("A", 0), ("B", 1)])
}

/// Payoff when B stops.
pub fn f10() -> PayoffFn {
    PayoffFn::from_ints([("A", 1), ("B", 0)])
}

pub fn make_zero_one() -> Game {
    let mut b = GraphBuilder::new();
    let a = b.reserve();
    let stop_a = b.leaf(f01());
    let stop_b = b.leaf(f10());
    let bn = b.inner(InnerLabel::Game(agent_b()), stop_b, a);
    b.set(a, Node::inner(InnerLabel::Game(agent_a()), stop_a, bn));
    Game::new(b.finish(Kind::Game, a).expect("0,1-game")).expect("game")
}

/// An eventually periodic choice sequence `prefix · period^ω`; position `i`
/// belongs to A when `i` is even and to B otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZeroOneWord {
    prefix: Vec<Choice>,
    period: Vec<Choice>,
}

fn choices(s: &str) -> Result<Vec<Choice>, GameError> {
    s.chars()
        .map(|c| Choice::from_char(c).ok_or_else(|| GameError::InvalidWord(format!("bad choice {c:?}"))))
        .collect()
}

impl ZeroOneWord {
    pub fn new(prefix: &str, period: &str) -> Result<Self, GameError> {
        ZeroOneWord::from_choices(choices(prefix)?, choices(period)?)
    }

    pub fn from_choices(prefix: Vec<Choice>, period: Vec<Choice>) -> Result<Self, GameError> {
        if period.is_empty() {
            return Err(GameError::InvalidWord("empty period".into()));
        }
        Ok(ZeroOneWord { prefix, period })
    }

    pub fn prefix(&self) -> &[Choice] {
        &self.prefix
    }

    pub fn period(&self) -> &[Choice] {
        &self.period
    }

    /// Length of the loop once unrolled so that it starts and ends with the
    /// same agent.
    pub fn loop_len(&self) -> usize {
        if self.period.len() % 2 == 0 {
            self.period.len()
        } else {
            2 * self.period.len()
        }
    }

    /// Choice at position `i` of the infinite word.
    pub fn at(&self, i: usize) -> Choice {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }

    /// Every word with `|prefix| <= max_prefix` and `1 <= |period| <= max_period`,
    /// shorter first, `d` before `r`.
    pub fn enumerate(max_prefix: usize, max_period: usize) -> impl Iterator<Item = ZeroOneWord> {
        fn all(len: usize) -> impl Iterator<Item = Vec<Choice>> {
            (0u64..1 << len).map(move |mask| {
                (0..len)
                    .map(|i| if mask >> (len - 1 - i) & 1 == 1 { Choice::R } else { Choice::D })
                    .collect()
            })
        }
        (0..=max_prefix).flat_map(move |pl| {
            (1..=max_period).flat_map(move |vl| {
                all(pl).flat_map(move |u| {
                    all(vl).map(move |v| ZeroOneWord { prefix: u.clone(), period: v })
                })
            })
        })
    }
}

fn token_string(cs: &[Choice]) -> String {
    cs.iter().map(|c| c.token()).collect()
}

impl fmt::Display for ZeroOneWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", token_string(&self.prefix), token_string(&self.period))
    }
}

impl FromStr for ZeroOneWord {
    type Err = GameError;

    /// Parses `prefix(period)`, e.g. `d(r)` or `(rd)`.
    fn from_str(s: &str) -> Result<Self, GameError> {
        let bad = || GameError::InvalidWord(format!("expected prefix(period), got {s:?}"));
        let (u, rest) = s.split_once('(').ok_or_else(bad)?;
        let v = rest.strip_suffix(')').ok_or_else(bad)?;
        ZeroOneWord::new(u, v)
    }
}

fn owner_at(i: usize) -> Agent {
    if i % 2 == 0 {
        agent_a()
    } else {
        agent_b()
    }
}

/// The profile of the 0,1-game that plays `w` along its spine. The two leaves
/// are shared; the loop is unrolled twice when the period is odd.
pub fn make_zero_one_profile(w: &ZeroOneWord) -> StratProf {
    let spine = w.prefix.len() + w.loop_len();
    let mut b = GraphBuilder::new();
    let stop_a = b.leaf(f01());
    let stop_b = b.leaf(f10());
    let nodes: Vec<NodeRef> = (0..spine).map(|_| b.reserve()).collect();
    for (i, n) in nodes.iter().enumerate() {
        let next = if i + 1 < spine { nodes[i + 1] } else { nodes[w.prefix.len()] };
        let down = if i % 2 == 0 { stop_a } else { stop_b };
        b.set(*n, Node::inner(InnerLabel::Profile(owner_at(i), w.at(i)), down, next));
    }
    StratProf::new(b.finish(Kind::Profile, nodes[0]).expect("spine is closed")).expect("profile")
}

// Both shape predicates at once: variable `i` is S0 at node `i`, variable
// `len + i` is S1 at node `i`.
fn shape(s: &StratProf) -> Vec<bool> {
    let g = s.graph();
    let len = g.len();
    let (fa, fb) = (f01(), f10());
    let rule = |n: NodeRef, owner: &Agent, stop: &PayoffFn, offset: usize| -> Formula {
        match g.get(n) {
            Node::Inner { label: InnerLabel::Profile(p, _), down, right } if p == owner => {
                let stops_right = g.get(*down).payoff() == Some(stop);
                Formula::Var(offset + right.index()).when(stops_right)
            }
            _ => Formula::FALSE,
        }
    };
    let mut formulas: Vec<Formula> = g.node_refs().map(|n| rule(n, &agent_a(), &fa, len)).collect();
    formulas.extend(g.node_refs().map(|n| rule(n, &agent_b(), &fb, 0)));
    EquationSystem::new(formulas).greatest()
}

/// A-shaped 0,1-profile at the root: A moves, stopping gives `(0,1)`, and the
/// rest is B-shaped.
pub fn sat_s0(s: &StratProf) -> bool {
    shape(s)[s.root().index()]
}

/// B-shaped 0,1-profile at the root.
pub fn sat_s1(s: &StratProf) -> bool {
    shape(s)[s.graph().len() + s.root().index()]
}

pub fn is_zero_one_profile(s: &StratProf) -> bool {
    let v = shape(s);
    v[s.root().index()] || v[s.graph().len() + s.root().index()]
}

/// The rule "`keeps` continues until `stops` stops": `keeps` must play r,
/// and `stops` either plays d or the property holds further right.
pub fn eventually_stops_rule(keeps: Agent, stops: Agent) -> impl Rule {
    let (fk, fs) = if keeps == agent_a() { (f01(), f10()) } else { (f10(), f01()) };
    move |g: &TermGraph, n: NodeRef| -> Formula {
        let Node::Inner { label: InnerLabel::Profile(p, c), down, right } = g.get(n) else {
            return Formula::TRUE;
        };
        let Some(f) = g.get(*down).payoff() else {
            return Formula::TRUE;
        };
        let next = Formula::var(*right);
        if *p == keeps && *f == fk {
            next.when(*c == Choice::R)
        } else if *p == stops && *f == fs {
            if *c == Choice::D {
                Formula::TRUE
            } else {
                next
            }
        } else {
            Formula::FALSE
        }
    }
}

fn eventually_stops(s: &StratProf, keeps: &Agent, stops: &Agent) -> Result<PredicateResult, GameError> {
    if !is_zero_one_profile(s) {
        return Err(GameError::NotZeroOneProfile);
    }
    Ok(lfp_eval(s.graph(), &eventually_stops_rule(keeps.clone(), stops.clone())))
}

/// A continues and B eventually stops, at every node.
pub fn acbes(s: &StratProf) -> Result<PredicateResult, GameError> {
    eventually_stops(s, &agent_a(), &agent_b())
}

/// B continues and A eventually stops, at every node.
pub fn bcaes(s: &StratProf) -> Result<PredicateResult, GameError> {
    eventually_stops(s, &agent_b(), &agent_a())
}

pub fn is_acbes(s: &StratProf) -> Result<bool, GameError> {
    Ok(acbes(s)?.root_verdict())
}

pub fn is_bcaes(s: &StratProf) -> Result<bool, GameError> {
    Ok(bcaes(s)?.root_verdict())
}

/// A always continues and B stops infinitely often.
pub fn is_sacbes(s: &StratProf) -> Result<bool, GameError> {
    let base = acbes(s)?;
    Ok(always(s.graph(), |n| base.at(n)).root_verdict())
}

pub fn is_sbcaes(s: &StratProf) -> Result<bool, GameError> {
    let base = bcaes(s)?;
    Ok(always(s.graph(), |n| base.at(n)).root_verdict())
}

// `keeps` plays r at every one of its positions and `stops` plays d at some
// position of the loop.
fn word_oracle(w: &ZeroOneWord, keeps_parity: usize) -> bool {
    let end = w.prefix.len() + w.loop_len();
    let keeps_always = (0..end)
        .filter(|i| i % 2 == keeps_parity)
        .all(|i| w.at(i) == Choice::R);
    let stops_in_loop = (w.prefix.len()..end)
        .filter(|i| i % 2 != keeps_parity)
        .any(|i| w.at(i) == Choice::D);
    keeps_always && stops_in_loop
}

/// [`is_sacbes`] decided on the word alone.
pub fn oracle_sacbes(w: &ZeroOneWord) -> bool {
    word_oracle(w, 0)
}

/// [`is_sbcaes`] decided on the word alone.
pub fn oracle_sbcaes(w: &ZeroOneWord) -> bool {
    word_oracle(w, 1)
}

pub const CHECK_ACBES_PAYOFF: &str = "acbes-implies-payoff-f10";
pub const CHECK_SACBES_SCONV: &str = "sacbes-implies-strong-convergence";
pub const CHECK_SACBES_SPE: &str = "sacbes-implies-spe";
pub const CHECK_SBCAES_SPE: &str = "sbcaes-implies-spe";
pub const CHECK_SPE_SPLITS: &str = "spe-implies-sacbes-or-sbcaes";

/// Checks, for every word within the bounds, that SPE coincides with
/// SAcBes or SBcAes, both by the fixpoint engine and by the word oracle,
/// together with the supporting implications.
pub fn check_theorem(max_prefix: usize, max_period: usize) -> Result<TheoremReport, GameError> {
    if max_period == 0 {
        return Err(GameError::InvalidArgument("period bound must be at least 1".into()));
    }
    let mut checks = [CHECK_ACBES_PAYOFF, CHECK_SACBES_SCONV, CHECK_SACBES_SPE, CHECK_SBCAES_SPE, CHECK_SPE_SPLITS].map(NamedCheck::new);
    let mut counterexamples = Vec::new();
    let mut lines = Vec::new();
    let mut total = 0;
    let stop_b = f10();
    for w in ZeroOneWord::enumerate(max_prefix, max_period) {
        total += 1;
        let s = make_zero_one_profile(&w);
        let spe = is_spe(&s);
        let ac = acbes(&s)?;
        let sac = always(s.graph(), |n| ac.at(n)).root_verdict();
        let sbc = is_sbcaes(&s)?;
        let (oac, obc) = (oracle_sacbes(&w), oracle_sbcaes(&w));

        let pay = payoffs(&s);
        for n in s.graph().node_refs().filter(|n| !s.graph().get(*n).is_leaf()) {
            checks[0].implication(ac.at(n), pay[n.index()].as_ref() == Some(&stop_b));
        }
        checks[1].implication(sac, strongly_converges(&s).root_verdict());
        checks[2].implication(sac, spe);
        checks[3].implication(sbc, spe);
        checks[4].implication(spe, sac || sbc);

        lines.push(format!("word {w} spe={spe} sacbes={sac} sbcaes={sbc} oracle-sacbes={oac} oracle-sbcaes={obc}"));
        if spe != (sac || sbc) || sac != oac || sbc != obc || spe != (oac || obc) {
            counterexamples.push(Counterexample {
                subject: w.to_string(),
                word: Some(w),
                verdicts: vec![
                    ("spe".into(), spe),
                    ("sacbes".into(), sac),
                    ("sbcaes".into(), sbc),
                    ("oracle-sacbes".into(), oac),
                    ("oracle-sbcaes".into(), obc),
                ],
            });
        }
    }
    Ok(TheoremReport {
        title: "theorem01".into(),
        bounds: vec![("prefix".into(), max_prefix), ("period".into(), max_period)],
        total,
        counterexamples,
        checks: checks.into(),
        lines,
    })
}
