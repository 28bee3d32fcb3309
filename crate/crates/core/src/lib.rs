//! Finite and regular infinite two-choice sequential games as cyclic term
//! graphs, with decision procedures for convergence, equilibria and
//! escalation.

pub mod bisim;
pub mod catalog;
pub mod dsl;
pub mod equilibrium;
pub mod error;
pub mod fixpoint;
pub mod game;
pub mod generate;
pub mod lab;
pub mod strategy;
pub mod termgraph;

pub use bisim::{bisimilar, bisimilar_graphs, canonical, Bisimulation};
pub use equilibrium::{bi, convertible, enumerate_deviations, is_bi, is_nash, DeviationBudget, NashVerdict};
pub use error::{GameError, GraphError};
pub use fixpoint::{always, always_by_reachability, always_rule, gfp_eval, lfp_eval, EquationSystem, Formula, PredicateResult, Rule};
pub use game::{
    convergence_rule, converges, game_of, is_pe, is_spe, profile_rules, strong_convergence_rule, is_subprofile, payoff, payoffs, profiles_of, spe, strongly_converges, Game,
    PayoffOutcome, StratProf,
};
pub use strategy::{are_consistent, check_consistency, is_full, split, st2g, sum, Inconsistency, Strat, StrategyFamily};
pub use termgraph::{
    agent_a, agent_b, Agent, Choice, GraphBuilder, InnerLabel, Kind, Node, NodeRef, PayoffFn, StratHead, TermGraph,
    Unfolded,
};
