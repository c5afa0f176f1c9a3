//! Process exit codes.

use secav_core::derivation::Verdict;
use secav_core::prover::Assessment;
use secav_core::semantics::SearchOutcome;

pub const OK: u8 = 0;
pub const INCOMPLETE: u8 = 1;
pub const INVALID: u8 = 2;
pub const PARSE_ERROR: u8 = 3;
pub const UNKNOWN: u8 = 4;
/// Bad arguments or unreadable input files.
pub const USAGE: u8 = 5;

pub fn for_verdict<E>(v: &Verdict<E>) -> u8 {
    match v {
        Verdict::Complete => OK,
        Verdict::Incomplete { .. } => INCOMPLETE,
        Verdict::Invalid { .. } => INVALID,
    }
}

/// A proof is success, a saturated branch is a negative answer and running
/// out of budget is Unknown.
pub fn for_assessment(a: &Assessment) -> u8 {
    match a {
        Assessment::Proved(_) => OK,
        Assessment::LikelyUnprovable(_) => INCOMPLETE,
        Assessment::Unknown => UNKNOWN,
    }
}

/// Finding a countermodel is the success case of a countermodel search.
pub fn for_search(o: &SearchOutcome) -> u8 {
    match o {
        SearchOutcome::Found(_) => OK,
        SearchOutcome::Exhausted => INCOMPLETE,
        SearchOutcome::BudgetExceeded | SearchOutcome::Cancelled => UNKNOWN,
    }
}
