use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use infgame::bisim::bisimilar_graphs;
use infgame::catalog::*;
use infgame::dsl::{self, Block};
use infgame::generate::*;
use infgame::lab::*;
use infgame::*;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::SeedableRng;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn pf(a: i64, b: i64) -> PayoffFn {
    PayoffFn::from_ints([("A", a), ("B", b)])
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn same(a: &TermGraph, b: &TermGraph) -> bool {
    bisimilar_graphs(a, b).unwrap_or(false)
}

fn example_file(name: &str) -> Vec<Block> {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "examples", name].iter().collect();
    dsl::parse(&fs::read_to_string(&path).expect("example file")).expect("example parses")
}

fn block<'a>(blocks: &'a [Block], name: &str) -> &'a TermGraph {
    &dsl::find(blocks, name).unwrap_or_else(|| panic!("block {name}")).graph
}

fn payoffs_of_examples() -> Outcome {
    let (s1, s2, s3) = (example_s1(), example_s2(), example_s3());
    let (got, t) = timed(|| [payoff(&s1), payoff(&s2), payoff(&s3)]);
    let want = [pf(3, 2), pf(3, 6), pf(2, 0)].map(PayoffOutcome::Defined);
    outcome(
        got == want && t < Duration::from_millis(1),
        format!("s1={} s2={} s3={} in {t:?}", got[0], got[1], got[2]),
    )
}

fn spe_and_bi_examples() -> Outcome {
    let (s1, s2, s3, sr) = (example_s1(), example_s2(), example_s3(), s_box_r());
    let (got, t) = timed(|| {
        [
            is_spe(&s1),
            is_spe(&s2),
            is_spe(&s3),
            is_spe(&sr),
            is_bi(&s1).unwrap(),
            is_bi(&s3).unwrap(),
        ]
    });
    outcome(
        got == [true, true, false, false, true, false] && t < Duration::from_millis(1),
        format!("spe(s1,s2,s3,sBoxR)={:?} bi(s1,s3)={:?} in {t:?}", &got[..4], &got[4..]),
    )
}

fn convergence_examples() -> Outcome {
    let (sr, sdr) = (s_box_r(), s_d_box_r());
    let conv_r = converges(&sr).root_verdict();
    let conv_dr = converges(&sdr).root_verdict();
    let sconv_dr = strongly_converges(&sdr).root_verdict();
    let pay = payoff(&sdr);
    outcome(
        !conv_r && conv_dr && !sconv_dr && pay == PayoffOutcome::Defined(pf(0, 1)),
        format!("conv(sBoxR)={conv_r} conv(sdBoxR)={conv_dr} sconv(sdBoxR)={sconv_dr} payoff(sdBoxR)={pay}"),
    )
}

fn escalation_suite() -> Outcome {
    let (r, t) = timed(check_prop_escal);
    let verdicts: Vec<bool> = r.items.iter().map(|(_, b)| *b).collect();
    outcome(
        r.items.len() == 6 && r.all_hold() && t < Duration::from_millis(10),
        format!("{verdicts:?} in {t:?}"),
    )
}

fn theorem_at_bounds() -> (Outcome, Outcome) {
    let (r, t) = timed(|| check_theorem(6, 4).unwrap());
    let main = outcome(
        r.total == 127 * 30 && r.counterexamples.is_empty() && t < Duration::from_secs(10),
        format!("{} profiles, {} counterexamples in {t:?}", r.total, r.counterexamples.len()),
    );
    let names = [CHECK_ACBES_PAYOFF, CHECK_SACBES_SCONV, CHECK_SACBES_SPE, CHECK_SBCAES_SPE, CHECK_SPE_SPLITS];
    let checks: Vec<&NamedCheck> = names.iter().filter_map(|n| r.check(n)).collect();
    let props = outcome(
        checks.len() == names.len() && checks.iter().all(|c| c.holds() && c.tested > 0),
        checks
            .iter()
            .map(|c| format!("{}:{}/{}", c.name, c.tested - c.violations, c.tested))
            .collect::<Vec<_>>()
            .join(" "),
    );
    (main, props)
}

fn spe_implies_nash() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2024);
    let (result, t) = timed(|| {
        let (mut spes, mut violations) = (0, 0);
        for _ in 0..200 {
            let g = random_game(&mut rng, 5, 10);
            let depth = g.graph().height().expect("finite game");
            for s in profiles_of(&g) {
                if is_spe(&s) {
                    spes += 1;
                    if is_nash(&s, DeviationBudget::new(depth)) != Ok(NashVerdict::Nash) {
                        violations += 1;
                    }
                }
            }
        }
        (spes, violations)
    });
    let (spes, violations) = result;
    outcome(
        spes > 0 && violations == 0 && t < Duration::from_secs(30),
        format!("{spes} equilibria over 200 games, {violations} violations in {t:?}"),
    )
}

fn appendix() -> Outcome {
    let (r, t) = timed(|| check_appendix_prop(5).unwrap());
    let expected: usize = (1..=5).map(|n| (1usize << (2 * n)) + (1usize << (2 * n - 1))).sum();
    let differ = r.checks.iter().filter(|c| c.holds()).count();
    outcome(
        r.total == expected && r.counterexamples.is_empty() && differ == 5 && t < Duration::from_secs(10),
        format!(
            "{} profiles, {} counterexamples, patterns differ at {differ}/5 sizes in {t:?}",
            r.total,
            r.counterexamples.len()
        ),
    )
}

fn engine_properties() -> Outcome {
    let mut rng = StdRng::seed_from_u64(99);
    let mut violations = Vec::new();
    let mut acyclic = 0;
    for i in 0..1000 {
        let s = if i % 2 == 0 { random_profile(&mut rng, 12) } else { random_acyclic_profile(&mut rng, 12) };
        let g = s.graph();
        let conv = converges(&s);
        let sconv = strongly_converges(&s);
        if g.node_refs().any(|n| sconv.at(n) && !conv.at(n)) {
            violations.push(format!("#{i}: strong convergence without convergence"));
        }
        if sconv != always(g, |n| conv.at(n)) || sconv != always_by_reachability(g, |n| conv.at(n)) {
            violations.push(format!("#{i}: strong convergence differs from always-convergence"));
        }
        if g.is_acyclic() {
            acyclic += 1;
            let mut rules = profile_rules(&s);
            rules.push(("acbes", Box::new(eventually_stops_rule(agent_a(), agent_b()))));
            rules.push(("bcaes", Box::new(eventually_stops_rule(agent_b(), agent_a()))));
            for (name, rule) in &rules {
                if lfp_eval(g, rule.as_ref()) != gfp_eval(g, rule.as_ref()) {
                    violations.push(format!("#{i}: lfp and gfp differ for {name}"));
                }
            }
            if is_bi(&s) != Ok(is_spe(&s)) {
                violations.push(format!("#{i}: backward induction differs from subgame perfection"));
            }
        }
    }
    outcome(
        violations.is_empty() && acyclic >= 500,
        format!("1000 profiles ({acyclic} acyclic), {} violations{}", violations.len(), first_of(&violations)),
    )
}

fn sum_projection() -> Outcome {
    let mut rng = StdRng::seed_from_u64(5);
    let mut violations = 0;
    for _ in 0..100 {
        let g = random_game(&mut rng, 5, 10);
        let fam = random_family(&mut rng, &g);
        let Ok(s) = sum(&fam) else {
            violations += 1;
            continue;
        };
        let summed_game = game_of(&s);
        for (p, st) in fam.iter() {
            if !same(st2g(st, p).graph(), summed_game.graph()) {
                violations += 1;
            }
        }
    }
    outcome(violations == 0, format!("100 families, {violations} violations"))
}

fn dsl_suite() -> Outcome {
    let mut rng = StdRng::seed_from_u64(17);
    let mut failures = Vec::new();
    for i in 0..500 {
        let kind = [Kind::Game, Kind::Profile, Kind::Strategy][i % 3];
        let raw = random_graph(&mut rng, kind, 12, i % 2 == 0, true);
        let g = shuffle_presentation(&mut rng, &raw);
        let text = dsl::serialize(&g, "x");
        match dsl::parse(&text) {
            Ok(blocks) if blocks.len() == 1 && same(&blocks[0].graph, &g) => {
                if dsl::serialize(&blocks[0].graph, "x") != text || dsl::serialize(&g, "x") != text {
                    failures.push(format!("#{i}: serializer output not stable"));
                }
            }
            Ok(_) => failures.push(format!("#{i}: round trip changed the graph")),
            Err(e) => failures.push(format!("#{i}: {e}")),
        }
    }

    let gg = example_file("gg.gg");
    let zo = example_file("zero_one.gg");
    let pairs: Vec<(&str, &TermGraph, TermGraph)> = vec![
        ("gg", block(&gg, "gg"), example_gg().into_graph()),
        ("s1", block(&gg, "s1"), example_s1().into_graph()),
        ("s2", block(&gg, "s2"), example_s2().into_graph()),
        ("s3", block(&gg, "s3"), example_s3().into_graph()),
        ("s11", block(&gg, "s11"), example_s11().into_graph()),
        ("g01", block(&zo, "g01"), make_zero_one().into_graph()),
        ("s10a", block(&zo, "s10a"), s_10_a().into_graph()),
        ("s10b", block(&zo, "s10b"), s_10_b().into_graph()),
        ("s01a", block(&zo, "s01a"), s_01_a().into_graph()),
        ("s01b", block(&zo, "s01b"), s_01_b().into_graph()),
        ("sBoxR", block(&zo, "sBoxR"), s_box_r().into_graph()),
        ("sdBoxR", block(&zo, "sdBoxR"), s_d_box_r().into_graph()),
    ];
    for (name, parsed, built) in &pairs {
        if !same(parsed, built) {
            failures.push(format!("{name} differs from its constructor"));
        }
    }
    outcome(
        failures.is_empty(),
        format!("500 round trips, {} example blocks, {} failures{}", pairs.len(), failures.len(), first_of(&failures)),
    )
}

fn dollar_auction() -> Outcome {
    let (stake, pot) = (rat(5), rat(100));
    let mut bad = 0;
    let mut leaves = 0;
    for rounds in 1..=6 {
        let g = make_dollar_auction(rounds, &stake, &pot).unwrap();
        let mut n = g.root();
        let mut stage_leaves = Vec::new();
        while let Node::Inner { down, right, .. } = g.graph().get(n) {
            stage_leaves.push(g.graph().get(*down).payoff().unwrap().clone());
            n = *right;
        }
        for k in 0..rounds as i64 {
            leaves += 2;
            let a_stops = pf(-5 * k, 100 - 5 * k);
            let b_stops = pf(100 - 5 * (k + 1), -5 * k);
            if stage_leaves.get(2 * k as usize) != Some(&a_stops) || stage_leaves.get(2 * k as usize + 1) != Some(&b_stops) {
                bad += 1;
            }
        }
        if stage_leaves.len() != 2 * rounds {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("{leaves} stage leaves checked, {bad} mismatches"))
}

fn main() -> ExitCode {
    let (theorem, props) = theorem_at_bounds();
    let results = [
        ("payoffs of the three example profiles", payoffs_of_examples()),
        ("subgame perfection and backward induction examples", spe_and_bi_examples()),
        ("convergence examples", convergence_examples()),
        ("escalation of the 0,1-game", escalation_suite()),
        ("0,1-game equilibria characterization at prefix<=6 period<=4", theorem),
        ("supporting implications over the same words", props),
        ("subgame perfect implies Nash on 200 random games", spe_implies_nash()),
        ("cut-game equilibria for n<=5", appendix()),
        ("fixpoint engine properties on 1000 random profiles", engine_properties()),
        ("strategy sums project to the member games", sum_projection()),
        ("text format round trips and example files", dsl_suite()),
        ("dollar auction leaves", dollar_auction()),
    ];
    let mut failed = 0;
    for (i, (name, o)) in results.iter().enumerate() {
        println!("criterion {:>2} {} {name}: {}", i + 1, if o.ok { "PASS" } else { "FAIL" }, o.detail);
        if !o.ok {
            failed += 1;
        }
    }
    println!("{} of {} criteria pass", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn first_of<T: std::fmt::Debug>(items: &[T]) -> String {
    items.first().map(|x| format!(", first {x:?}")).unwrap_or_default()
}
