//! Escalation: full, consistent individual strategies whose sum never stops.

use std::fmt;

use num_rational::BigRational;

use crate::bisim::bisimilar_graphs;
use crate::catalog::s_box_r;
use crate::fixpoint::{gfp_eval, Formula};
use crate::game::{converges, game_of, Game, StratProf};
use crate::strategy::{are_consistent, is_full, split, st2g, sum, Strat, StrategyFamily};
use crate::termgraph::{
    agent_a, agent_b, Choice, GraphBuilder, InnerLabel, Kind, Node, NodeRef, StratHead, TermGraph,
};

use super::zero_one::{f01, f10, make_zero_one};

// The 0,1-game seen by one agent that always continues.
fn always_continue(a_continues: bool) -> Strat {
    let mut b = GraphBuilder::new();
    let a = b.reserve();
    let stop_a = b.leaf(f01());
    let stop_b = b.leaf(f10());
    let right = InnerLabel::Strategy(StratHead::Choice(Choice::R));
    let (la, lb) = if a_continues {
        (right, InnerLabel::Strategy(StratHead::Agent(agent_b())))
    } else {
        (InnerLabel::Strategy(StratHead::Agent(agent_a())), right)
    };
    let bn = b.inner(lb, stop_b, a);
    b.set(a, Node::inner(la, stop_a, bn));
    Strat::new(b.finish(Kind::Strategy, a).expect("strategy")).expect("strategy kind")
}

/// A's strategy "always continue", B's strategy "always continue", and their
/// sum, the profile where both continue forever.
pub fn escalation_witnesses() -> (Strat, Strat, StratProf) {
    (always_continue(true), always_continue(false), s_box_r())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EscalationReport {
    pub items: Vec<(String, bool)>,
}

impl EscalationReport {
    pub fn all_hold(&self) -> bool {
        self.items.iter().all(|(_, b)| *b)
    }
}

impl fmt::Display for EscalationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (text, ok)) in self.items.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "escalation {}: {} = {}", i + 1, text, ok)?;
        }
        Ok(())
    }
}

/// The six facts that make the 0,1-game escalate.
pub fn check_prop_escal() -> EscalationReport {
    let (st_a, st_b, s_inf) = escalation_witnesses();
    let g01 = make_zero_one();
    let has_game = |g: &Game| bisimilar_graphs(g.graph(), g01.graph()).expect("games");
    let summed = StrategyFamily::new([(agent_a(), st_a.clone()), (agent_b(), st_b.clone())])
        .and_then(|fam| sum(&fam))
        .map(|s| bisimilar_graphs(s.graph(), s_inf.graph()).expect("profiles"))
        .unwrap_or(false);
    EscalationReport {
        items: vec![
            ("A's strategy is full for A".into(), is_full(&st_a, &agent_a())),
            ("B's strategy is full for B".into(), is_full(&st_b, &agent_b())),
            (
                "both strategies have the 0,1-game".into(),
                has_game(&st2g(&st_a, &agent_a())) && has_game(&st2g(&st_b, &agent_b())),
            ),
            ("the profile has the 0,1-game".into(), has_game(&game_of(&s_inf))),
            ("the sum of the strategies is the profile".into(), summed),
            ("the profile is not convergent".into(), !converges(&s_inf).root_verdict()),
        ],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PayrollCheck {
    /// Every leaf payoff is within the limit in absolute value.
    pub bounded: bool,
    /// Some full, consistent family of strategies sums to a divergent profile.
    pub escalates: bool,
}

impl PayrollCheck {
    pub fn holds(&self) -> bool {
        self.bounded && self.escalates
    }
}

/// A profile of `g` that never reaches a leaf, if one exists.
pub fn divergent_profile(g: &Game) -> Option<StratProf> {
    let graph = g.graph();
    // infinite play possible from n: gfp of "some child also allows it"
    let rule = |g: &TermGraph, n: NodeRef| -> Formula {
        match g.get(n) {
            Node::Leaf(_) => Formula::FALSE,
            Node::Inner { down, right, .. } => Formula::var(*down).or(Formula::var(*right)),
        }
    };
    let endless = gfp_eval(graph, &rule);
    if !endless.root_verdict() {
        return None;
    }
    let labelled = graph
        .map_labels(Kind::Profile, |n, label| {
            let down = graph.get(n).child(Choice::D).expect("inner");
            let c = if endless.at(down) { Choice::D } else { Choice::R };
            InnerLabel::Profile(label.owner().expect("game node").clone(), c)
        })
        .expect("relabelling preserves validity");
    Some(StratProf::new(labelled).expect("profile kind"))
}

/// Whether a limit on payoffs would keep `g` from escalating.
pub fn payroll_check(g: &Game, limit: &BigRational) -> PayrollCheck {
    let bounded = g.graph().leaves().all(|f| f.max_abs() <= *limit);
    let escalates = divergent_profile(g).is_some_and(|s| {
        let fam = split(&s);
        let full = fam.iter().all(|(p, st)| is_full(st, p));
        full && are_consistent(&fam)
            && sum(&fam).is_ok_and(|t| !converges(&t).root_verdict())
    });
    PayrollCheck { bounded, escalates }
}

/// In the 0,1-game payoffs never exceed 1, and yet it escalates.
pub fn payroll_note_check() -> bool {
    let limit = BigRational::from_integer(1.into());
    payroll_check(&make_zero_one(), &limit).holds() && check_prop_escal().items[5].1
}
