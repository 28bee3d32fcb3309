use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use infgame::dsl::{self, Block};
use infgame::lab::{
    check_appendix_prop, check_prop_escal, check_theorem, is_acbes, is_bcaes, is_sacbes, is_sbcaes, payroll_note_check,
    sat_s0, sat_s1, TheoremReport,
};
use infgame::{
    bisimilar_graphs, converges, is_bi, is_full, is_nash, is_pe, is_spe, payoff, strongly_converges, sum, Agent,
    DeviationBudget, Kind, NashVerdict, PayoffOutcome, Strat, StratProf, StrategyFamily, TermGraph,
};

#[derive(Parser)]
#[command(name = "infgame", version, about = "Checks predicates of finite and infinite sequential games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a predicate at the root of a profile
    Check {
        #[arg(long, value_enum)]
        pred: Pred,
        file: PathBuf,
        name: String,
    },
    /// Print the payoff of a profile
    Payoff { file: PathBuf, name: String },
    /// Decide whether two blocks denote the same tree
    Bisim { file: PathBuf, name1: String, name2: String },
    /// Sum strategies into a profile; give AGENT=NAME when the agent of a
    /// strategy cannot be inferred
    Sum {
        file: PathBuf,
        #[arg(required = true)]
        names: Vec<String>,
        #[arg(long)]
        out: PathBuf,
        /// Name of the profile block written to the output
        #[arg(long, default_value = "sum")]
        block: String,
    },
    /// Look for improving unilateral deviations
    Nash {
        file: PathBuf,
        name: String,
        #[arg(long)]
        depth: usize,
    },
    /// Check the characterization of 0,1-game equilibria on all words within the bounds
    Theorem01 {
        #[arg(long)]
        prefix: usize,
        #[arg(long)]
        period: usize,
        /// Print one verdict line per word
        #[arg(long)]
        verbose: bool,
    },
    /// Compare backward induction on the two families of cut games
    Appendix {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        verbose: bool,
    },
    /// Show that the 0,1-game escalates although its payoffs are bounded
    Escalate,
    /// Print the unfolding of a block to a depth
    Unfold {
        file: PathBuf,
        name: String,
        #[arg(long)]
        depth: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Pred {
    Conv,
    Sconv,
    Pe,
    Spe,
    Bi,
    S0,
    S1,
    Acbes,
    Sacbes,
    Bcaes,
    Sbcaes,
}

impl Pred {
    fn name(self) -> &'static str {
        match self {
            Pred::Conv => "conv",
            Pred::Sconv => "sconv",
            Pred::Pe => "pe",
            Pred::Spe => "spe",
            Pred::Bi => "bi",
            Pred::S0 => "s0",
            Pred::S1 => "s1",
            Pred::Acbes => "acbes",
            Pred::Sacbes => "sacbes",
            Pred::Bcaes => "bcaes",
            Pred::Sbcaes => "sbcaes",
        }
    }

    fn eval(self, s: &StratProf) -> Result<bool, String> {
        let e = |r: Result<bool, infgame::GameError>| r.map_err(|e| e.to_string());
        Ok(match self {
            Pred::Conv => converges(s).root_verdict(),
            Pred::Sconv => strongly_converges(s).root_verdict(),
            Pred::Pe => is_pe(s).root_verdict(),
            Pred::Spe => is_spe(s),
            Pred::Bi => e(is_bi(s))?,
            Pred::S0 => sat_s0(s),
            Pred::S1 => sat_s1(s),
            Pred::Acbes => e(is_acbes(s))?,
            Pred::Sacbes => e(is_sacbes(s))?,
            Pred::Bcaes => e(is_bcaes(s))?,
            Pred::Sbcaes => e(is_sbcaes(s))?,
        })
    }
}

/// Exit status: pass, property false, or usage/input error.
enum Status {
    Pass,
    Fail,
}

impl Status {
    fn of(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

fn load(path: &Path) -> Result<Vec<Block>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    dsl::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn lookup<'a>(blocks: &'a [Block], name: &str) -> Result<&'a Block, String> {
    dsl::find(blocks, name).ok_or_else(|| format!("no block named `{name}`"))
}

fn profile(blocks: &[Block], name: &str) -> Result<StratProf, String> {
    let b = lookup(blocks, name)?;
    if b.kind != Kind::Profile {
        return Err(format!("`{name}` is a {}, not a profile", b.kind));
    }
    StratProf::new(b.graph.clone()).map_err(|e| e.to_string())
}

fn strategy_family(blocks: &[Block], names: &[String]) -> Result<StrategyFamily, String> {
    let mut members = Vec::new();
    for spec in names {
        let (agent, name) = match spec.split_once('=') {
            Some((a, n)) => (Some(Agent::new(a).map_err(|e| e.to_string())?), n),
            None => (None, spec.as_str()),
        };
        let b = lookup(blocks, name)?;
        if b.kind != Kind::Strategy {
            return Err(format!("`{name}` is a {}, not a strategy", b.kind));
        }
        let st = Strat::new(b.graph.clone()).map_err(|e| e.to_string())?;
        let agent = match agent {
            Some(a) => a,
            None => {
                let full: Vec<&Agent> = b.graph.agents().iter().filter(|p| is_full(&st, p)).collect();
                match full.as_slice() {
                    [p] => (*p).clone(),
                    [] => return Err(format!("`{name}` is full for no agent")),
                    _ => return Err(format!("cannot infer the agent of `{name}`; write AGENT={name}")),
                }
            }
        };
        members.push((agent, st));
    }
    StrategyFamily::new(members).map_err(|e| e.to_string())
}

fn print_report(r: &TheoremReport, verbose: bool) -> Status {
    if verbose {
        for l in &r.lines {
            println!("{l}");
        }
    }
    println!("{r}");
    Status::of(r.confirmed())
}

fn run(cli: Cli) -> Result<Status, String> {
    match cli.command {
        Command::Check { pred, file, name } => {
            let s = profile(&load(&file)?, &name)?;
            let v = pred.eval(&s)?;
            println!("{} {name} = {v}", pred.name());
            Ok(Status::of(v))
        }
        Command::Payoff { file, name } => {
            let s = profile(&load(&file)?, &name)?;
            let p = payoff(&s);
            println!("payoff {name} = {p}");
            Ok(Status::of(matches!(p, PayoffOutcome::Defined(_))))
        }
        Command::Bisim { file, name1, name2 } => {
            let blocks = load(&file)?;
            let (a, b) = (&lookup(&blocks, &name1)?.graph, &lookup(&blocks, &name2)?.graph);
            let v = bisimilar_graphs(a, b).map_err(|e| e.to_string())?;
            println!("bisim {name1} {name2} = {v}");
            Ok(Status::of(v))
        }
        Command::Sum { file, names, out, block } => {
            let fam = strategy_family(&load(&file)?, &names)?;
            let s = sum(&fam).map_err(|e| e.to_string())?;
            fs::write(&out, dsl::serialize(s.graph(), &block)).map_err(|e| format!("{}: {e}", out.display()))?;
            println!("sum {} written to {}", names.join(" "), out.display());
            Ok(Status::Pass)
        }
        Command::Nash { file, name, depth } => {
            let s = profile(&load(&file)?, &name)?;
            let v = is_nash(&s, DeviationBudget::new(depth)).map_err(|e| e.to_string())?;
            println!("nash {name} = {v}");
            Ok(Status::of(!matches!(v, NashVerdict::Refuted { .. })))
        }
        Command::Theorem01 { prefix, period, verbose } => {
            let r = check_theorem(prefix, period).map_err(|e| e.to_string())?;
            Ok(print_report(&r, verbose))
        }
        Command::Appendix { n, verbose } => {
            let r = check_appendix_prop(n).map_err(|e| e.to_string())?;
            Ok(print_report(&r, verbose))
        }
        Command::Escalate => {
            let r = check_prop_escal();
            println!("{r}");
            let payroll = payroll_note_check();
            println!("escalation with payoffs bounded by 1 = {payroll}");
            Ok(Status::of(r.all_hold() && payroll))
        }
        Command::Unfold { file, name, depth } => {
            let blocks = load(&file)?;
            let g: &TermGraph = &lookup(&blocks, &name)?.graph;
            print!("{}", g.unfold(depth).render());
            Ok(Status::Pass)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
