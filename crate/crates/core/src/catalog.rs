//! Fixed example games and profiles: the eight-position game `gg` with three
//! of its profiles, and the small profiles of the 0,1-game.

use crate::game::{Game, StratProf};
use crate::termgraph::{agent_a, agent_b, Agent, Choice, GraphBuilder, InnerLabel, Kind, NodeRef, PayoffFn};

fn pf(a: i64, b: i64) -> PayoffFn {
    PayoffFn::from_ints([("A", a), ("B", b)])
}

// Positions of gg, in the order of the choice table below.
const GG_POSITIONS: usize = 8;
const A1: usize = 0;
const B1: usize = 1;
const A4: usize = 2;
const A2: usize = 3;
const A3: usize = 4;
const A5: usize = 5;
const B2: usize = 6;
const B3: usize = 7;

// Builds gg with `label(position)` at each inner node.
fn build_gg(kind: Kind, label: impl Fn(usize, Agent) -> InnerLabel) -> crate::termgraph::TermGraph {
    let mut b = GraphBuilder::new();
    let inner = |b: &mut GraphBuilder, pos: usize, owner: Agent, d: NodeRef, r: NodeRef| {
        b.inner(label(pos, owner), d, r)
    };
    let b3 = {
        let (d, r) = (b.leaf(pf(1, 1)), b.leaf(pf(3, 6)));
        inner(&mut b, B3, agent_b(), d, r)
    };
    let a5 = {
        let r = b.leaf(pf(2, 1));
        inner(&mut b, A5, agent_a(), b3, r)
    };
    let a4 = {
        let r = b.leaf(pf(3, 2));
        inner(&mut b, A4, agent_a(), a5, r)
    };
    let a3 = {
        let (d, r) = (b.leaf(pf(2, 2)), b.leaf(pf(1, 2)));
        inner(&mut b, A3, agent_a(), d, r)
    };
    let b1 = inner(&mut b, B1, agent_b(), a3, a4);
    let b2 = {
        let (d, r) = (b.leaf(pf(1, 8)), b.leaf(pf(4, 7)));
        inner(&mut b, B2, agent_b(), d, r)
    };
    let a2 = {
        let r = b.leaf(pf(2, 0));
        inner(&mut b, A2, agent_a(), b2, r)
    };
    let a1 = inner(&mut b, A1, agent_a(), a2, b1);
    b.finish(kind, a1).expect("gg is well formed")
}

pub fn example_gg() -> Game {
    Game::new(build_gg(Kind::Game, |_, owner| InnerLabel::Game(owner))).expect("game")
}

fn gg_profile(choices: &str) -> StratProf {
    let cs: Vec<Choice> = choices.chars().map(|c| Choice::from_char(c).expect("d or r")).collect();
    assert_eq!(cs.len(), GG_POSITIONS);
    StratProf::new(build_gg(Kind::Profile, |pos, owner| InnerLabel::Profile(owner, cs[pos])))
        .expect("profile")
}

/// Choices listed as A1 B1 A4 A2 A3 A5 B2 B3.
pub fn example_s1() -> StratProf {
    gg_profile("rrrrdddr")
}

pub fn example_s2() -> StratProf {
    gg_profile("rrdrdddr")
}

pub fn example_s3() -> StratProf {
    gg_profile("dddrrdrr")
}

/// The subprofile of `s1` at A2.
pub fn example_s11() -> StratProf {
    let s1 = example_s1();
    let a2 = match s1.graph().get(s1.root()) {
        crate::termgraph::Node::Inner { down, .. } => *down,
        _ => unreachable!(),
    };
    s1.subprofile_at(a2).expect("node of s1")
}

/// A 0,1-profile with A's choice `ca` at the first node and B's choice `cb`
/// at the second, the second node looping back to the first.
/// `start_at_b` roots it at B's node.
fn zero_one_profile(ca: Choice, cb: Choice, start_at_b: bool) -> StratProf {
    let mut b = GraphBuilder::new();
    let a = b.reserve();
    let f01 = b.leaf(pf(0, 1));
    let f10 = b.leaf(pf(1, 0));
    let bn = b.inner(InnerLabel::Profile(agent_b(), cb), f10, a);
    b.set(a, crate::termgraph::Node::inner(InnerLabel::Profile(agent_a(), ca), f01, bn));
    let root = if start_at_b { bn } else { a };
    StratProf::new(b.finish(Kind::Profile, root).expect("0,1-profile")).expect("profile")
}

/// A continues, B stops: payoff (1,0).
pub fn s_10_a() -> StratProf {
    zero_one_profile(Choice::R, Choice::D, false)
}

/// [`s_10_a`] seen from B's node.
pub fn s_10_b() -> StratProf {
    zero_one_profile(Choice::R, Choice::D, true)
}

/// A stops, B continues: payoff (0,1).
pub fn s_01_a() -> StratProf {
    zero_one_profile(Choice::D, Choice::R, false)
}

pub fn s_01_b() -> StratProf {
    zero_one_profile(Choice::D, Choice::R, true)
}

/// Both agents always continue.
pub fn s_box_r() -> StratProf {
    zero_one_profile(Choice::R, Choice::R, false)
}

/// A stops once, then both always continue.
pub fn s_d_box_r() -> StratProf {
    let mut b = GraphBuilder::new();
    let a = b.reserve();
    let f01 = b.leaf(pf(0, 1));
    let f10 = b.leaf(pf(1, 0));
    let bn = b.inner(InnerLabel::Profile(agent_b(), Choice::R), f10, a);
    b.set(a, crate::termgraph::Node::inner(InnerLabel::Profile(agent_a(), Choice::R), f01, bn));
    let b0 = b.inner(InnerLabel::Profile(agent_b(), Choice::R), f10, a);
    let root = b.inner(InnerLabel::Profile(agent_a(), Choice::D), f01, b0);
    StratProf::new(b.finish(Kind::Profile, root).expect("0,1-profile")).expect("profile")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::termgraph::Node;

    #[test]
    fn gg_shape() {
        let g = example_gg();
        let inner: Vec<_> = g.graph().nodes().iter().filter_map(Node::label).collect();
        assert_eq!(g.graph().len(), 17);
        assert_eq!(inner.len(), 8);
        assert_eq!(inner.iter().filter(|l| l.owner() == Some(&agent_a())).count(), 5);
    }

    #[test]
    fn s11_is_small() {
        assert_eq!(example_s11().graph().len(), 5);
    }
}
