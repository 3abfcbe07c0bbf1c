//! Check verdicts.

use std::fmt;
use std::str::FromStr;

/// Outcome of a single lemma check on a single instance.
///
/// `Vacuous` means the hypothesis did not hold, so the implication was not
/// exercised. `BudgetExceeded` means the search budget ran out before the
/// conclusion could be decided either way; it is reported distinctly and
/// never silently folded into pass or fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    Vacuous,
    BudgetExceeded,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Vacuous => "vacuous",
            Verdict::BudgetExceeded => "budget-exceeded",
        }
    }

    pub fn is_failure(self) -> bool {
        self == Verdict::Fail
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> Result<Verdict, String> {
        match s {
            "pass" => Ok(Verdict::Pass),
            "fail" => Ok(Verdict::Fail),
            "vacuous" => Ok(Verdict::Vacuous),
            "budget-exceeded" => Ok(Verdict::BudgetExceeded),
            other => Err(format!("unknown verdict {other:?}")),
        }
    }
}
