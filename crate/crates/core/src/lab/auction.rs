use num_rational::BigRational;

use crate::error::GameError;
use crate::game::Game;
use crate::termgraph::{agent_a, agent_b, GraphBuilder, InnerLabel, Kind, PayoffFn};

fn two(a: BigRational, b: BigRational) -> PayoffFn {
    PayoffFn::new([(agent_a(), a), (agent_b(), b)])
}

/// Payoffs when A stops at stage `k`.
pub fn auction_a_leaf(k: usize, stake: &BigRational, pot: &BigRational) -> PayoffFn {
    let paid = stake * BigRational::from_integer(k.into());
    two(-paid.clone(), pot - paid)
}

/// Payoffs when B stops at stage `k`.
pub fn auction_b_leaf(k: usize, stake: &BigRational, pot: &BigRational) -> PayoffFn {
    let paid = stake * BigRational::from_integer(k.into());
    two(pot - &paid - stake, -paid)
}

/// The dollar auction cut after `rounds` bids of each agent. The last bid of
/// B is followed by the leaf where B stops at the next stage.
pub fn make_dollar_auction(rounds: usize, stake: &BigRational, pot: &BigRational) -> Result<Game, GameError> {
    if rounds == 0 {
        return Err(GameError::InvalidArgument("at least one round".into()));
    }
    let mut b = GraphBuilder::new();
    let mut tail = b.leaf(auction_b_leaf(rounds, stake, pot));
    for k in (0..rounds).rev() {
        let stop_b = b.leaf(auction_b_leaf(k, stake, pot));
        tail = b.inner(InnerLabel::Game(agent_b()), stop_b, tail);
        let stop_a = b.leaf(auction_a_leaf(k, stake, pot));
        tail = b.inner(InnerLabel::Game(agent_a()), stop_a, tail);
    }
    Ok(Game::new(b.finish(Kind::Game, tail).expect("finite comb")).expect("game"))
}
