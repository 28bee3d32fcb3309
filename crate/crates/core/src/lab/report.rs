use std::fmt;

use super::zero_one::ZeroOneWord;

/// A case where two computations that should agree did not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub subject: String,
    pub word: Option<ZeroOneWord>,
    /// Every verdict computed for the subject, by name.
    pub verdicts: Vec<(String, bool)>,
}

/// An implication or property checked over every enumerated instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedCheck {
    pub name: String,
    pub tested: usize,
    pub violations: usize,
}

impl NamedCheck {
    pub fn new(name: impl Into<String>) -> Self {
        NamedCheck { name: name.into(), tested: 0, violations: 0 }
    }

    /// Records one instance; `premise` false means the implication is vacuous.
    pub fn implication(&mut self, premise: bool, conclusion: bool) {
        if premise {
            self.tested += 1;
            if !conclusion {
                self.violations += 1;
            }
        }
    }

    pub fn record(&mut self, holds: bool) {
        self.implication(true, holds);
    }

    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// Outcome of an exhaustive check at a bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremReport {
    pub title: String,
    pub bounds: Vec<(String, usize)>,
    pub total: usize,
    pub counterexamples: Vec<Counterexample>,
    pub checks: Vec<NamedCheck>,
    /// One machine-readable verdict line per enumerated instance.
    pub lines: Vec<String>,
}

impl TheoremReport {
    pub fn confirmed(&self) -> bool {
        self.counterexamples.is_empty() && self.checks.iter().all(NamedCheck::holds)
    }

    pub fn check(&self, name: &str) -> Option<&NamedCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for TheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.title)?;
        for (k, v) in &self.bounds {
            write!(f, " {k}<={v}")?;
        }
        writeln!(f)?;
        writeln!(f, "checked {}", self.total)?;
        for c in &self.checks {
            writeln!(
                f,
                "check {} tested={} violations={}",
                c.name, c.tested, c.violations
            )?;
        }
        for c in &self.counterexamples {
            write!(f, "counterexample {}", c.subject)?;
            for (k, v) in &c.verdicts {
                write!(f, " {k}={v}")?;
            }
            writeln!(f)?;
        }
        write!(
            f,
            "counterexamples {} => {}",
            self.counterexamples.len(),
            if self.confirmed() { "confirmed" } else { "refuted" }
        )
    }
}
