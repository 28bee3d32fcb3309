//! Finite cuts of the 0,1-game and their backward-induction equilibria.
//!
//! Cutting right after a B position and closing with `(0,1)` gives one
//! family of finite games; cutting after an A position and closing with
//! `(1,0)` gives another. Their equilibria extrapolate differently.

use std::collections::BTreeSet;

use crate::equilibrium::is_bi;
use crate::error::GameError;
use crate::fixpoint::{EquationSystem, Formula};
use crate::game::{profiles_of, Game, StratProf};
use crate::termgraph::{agent_a, agent_b, Agent, Choice, GraphBuilder, InnerLabel, Kind, Node, NodeRef, PayoffFn};

use super::report::{Counterexample, NamedCheck, TheoremReport};
use super::zero_one::{f01, f10};

fn cut_game(pairs: usize, close_after_a: bool) -> Game {
    let mut b = GraphBuilder::new();
    let stop_a = b.leaf(f01());
    let stop_b = b.leaf(f10());
    let mut tail = if close_after_a { stop_b } else { stop_a };
    for i in 0..pairs {
        if !(close_after_a && i == 0) {
            tail = b.inner(InnerLabel::Game(agent_b()), stop_b, tail);
        }
        tail = b.inner(InnerLabel::Game(agent_a()), stop_a, tail);
    }
    Game::new(b.finish(Kind::Game, tail).expect("finite cut")).expect("game")
}

fn at_least_one(n: usize) -> Result<(), GameError> {
    if n == 0 {
        return Err(GameError::InvalidArgument("size must be at least 1".into()));
    }
    Ok(())
}

/// `n` A,B pairs, then `(0,1)`.
pub fn make_f(n: usize) -> Result<Game, GameError> {
    at_least_one(n)?;
    Ok(cut_game(n, false))
}

/// `n` A positions with B positions in between, then `(1,0)`.
pub fn make_k(n: usize) -> Result<Game, GameError> {
    at_least_one(n)?;
    Ok(cut_game(n, true))
}

fn inner_with<'a>(s: &'a StratProf, n: NodeRef, owner: &Agent, stop: &PayoffFn) -> Option<(Choice, NodeRef)> {
    match s.graph().get(n) {
        Node::Inner { label: InnerLabel::Profile(p, c), down, right }
            if p == owner && s.graph().get(*down).payoff() == Some(stop) =>
        {
            Some((*c, *right))
        }
        _ => None,
    }
}

fn require_finite(s: &StratProf) -> Result<(), GameError> {
    if s.graph().is_acyclic() {
        Ok(())
    } else {
        Err(GameError::CyclicProfile)
    }
}

/// B continues at each of its positions, A does anything, and the play ends
/// with `(0,1)`.
pub fn sat_sf(s: &StratProf) -> Result<bool, GameError> {
    require_finite(s)?;
    let (fa, fb) = (f01(), f10());
    let formulas = s
        .graph()
        .node_refs()
        .map(|n| {
            if s.graph().get(n).payoff() == Some(&fa) {
                return Formula::TRUE;
            }
            let Some((_, b_node)) = inner_with(s, n, &agent_a(), &fa) else {
                return Formula::FALSE;
            };
            match inner_with(s, b_node, &agent_b(), &fb) {
                Some((Choice::R, rest)) => Formula::var(rest),
                _ => Formula::FALSE,
            }
        })
        .collect();
    Ok(EquationSystem::new(formulas).least()[s.root().index()])
}

/// A continues at each of its positions, B does anything, and the play ends
/// with `(1,0)`.
pub fn sat_sk(s: &StratProf) -> Result<bool, GameError> {
    require_finite(s)?;
    let (fa, fb) = (f01(), f10());
    let len = s.graph().len();
    // variable n: A's side holds at n; variable len + n: B's side holds at n
    let a_side = s.graph().node_refs().map(|n| match inner_with(s, n, &agent_a(), &fa) {
        Some((Choice::R, rest)) => Formula::Var(len + rest.index()),
        _ => Formula::FALSE,
    });
    let b_side = s.graph().node_refs().map(|n| {
        if s.graph().get(n).payoff() == Some(&fb) {
            return Formula::TRUE;
        }
        match inner_with(s, n, &agent_b(), &fb) {
            Some((_, rest)) => Formula::var(rest),
            None => Formula::FALSE,
        }
    });
    let formulas = a_side.chain(b_side).collect();
    Ok(EquationSystem::new(formulas).least()[s.root().index()])
}

/// Choices along the spine, from the root.
pub fn spine_choices(s: &StratProf) -> String {
    let mut out = String::new();
    let mut n = s.root();
    let mut seen = vec![false; s.graph().len()];
    while let Some((_, c)) = s.decision(n) {
        if std::mem::replace(&mut seen[n.index()], true) {
            break;
        }
        out.push_str(c.token());
        n = s.graph().get(n).child(Choice::R).expect("inner");
    }
    out
}

// The (agent, choice) pairs used by some profile of the set.
fn pattern(profiles: &[StratProf]) -> BTreeSet<(Agent, Choice)> {
    profiles
        .iter()
        .flat_map(|s| s.graph().node_refs().filter_map(|n| s.decision(n).map(|(p, c)| (p.clone(), c))))
        .collect()
}

/// For every `n <= n_max` and every profile of both cut games, compares the
/// two families with backward induction, and checks that their equilibria
/// use different choice patterns.
pub fn check_appendix_prop(n_max: usize) -> Result<TheoremReport, GameError> {
    at_least_one(n_max)?;
    let mut total = 0;
    let mut counterexamples = Vec::new();
    let mut lines = Vec::new();
    let mut checks = Vec::new();
    for n in 1..=n_max {
        let mut equilibria = Vec::new();
        for (family, game, family_pred) in [
            ("F", make_f(n)?, sat_sf as fn(&StratProf) -> Result<bool, GameError>),
            ("K", make_k(n)?, sat_sk),
        ] {
            let mut bi_set = Vec::new();
            for s in profiles_of(&game) {
                total += 1;
                let (fam, bi) = (family_pred(&s)?, is_bi(&s)?);
                let subject = format!("{family}({n}) {}", spine_choices(&s));
                lines.push(format!("{subject} family={fam} bi={bi}"));
                if fam != bi {
                    counterexamples.push(Counterexample {
                        subject,
                        word: None,
                        verdicts: vec![("family".into(), fam), ("bi".into(), bi)],
                    });
                }
                if bi {
                    bi_set.push(s);
                }
            }
            equilibria.push(bi_set);
        }
        let mut differ = NamedCheck::new(format!("n={n}-cut-patterns-differ"));
        differ.record(pattern(&equilibria[0]) != pattern(&equilibria[1]));
        checks.push(differ);
    }
    Ok(TheoremReport {
        title: "appendix".into(),
        bounds: vec![("n".into(), n_max)],
        total,
        counterexamples,
        checks,
        lines,
    })
}
