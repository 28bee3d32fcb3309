//! Experiments on the 0,1-game and its finite relatives.

mod appendix;
mod auction;
mod escalation;
mod report;
mod zero_one;

pub use appendix::{check_appendix_prop, make_f, make_k, sat_sf, sat_sk, spine_choices};
pub use auction::{auction_a_leaf, auction_b_leaf, make_dollar_auction};
pub use escalation::{
    check_prop_escal, divergent_profile, escalation_witnesses, payroll_check, payroll_note_check, EscalationReport,
    PayrollCheck,
};
pub use report::{Counterexample, NamedCheck, TheoremReport};
pub use zero_one::{
    acbes, bcaes, check_theorem, eventually_stops_rule, f01, f10, is_acbes, is_bcaes, is_sacbes, is_sbcaes, is_zero_one_profile,
    make_zero_one, make_zero_one_profile, oracle_sacbes, oracle_sbcaes, sat_s0, sat_s1, ZeroOneWord, CHECK_SPE_SPLITS,
    CHECK_ACBES_PAYOFF, CHECK_SACBES_SCONV, CHECK_SACBES_SPE, CHECK_SBCAES_SPE,
};
