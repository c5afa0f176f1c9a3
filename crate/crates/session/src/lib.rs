//! Interactive proof construction for the sequent calculus and natural
//! deduction.
//!
//! A [`Session`] keeps every state it has been in. Applying a rule after
//! moving back in the history forks: the new entry records its parent and
//! nothing is discarded. Sessions serialize to a versioned JSON document that
//! stores only the actions; loading replays them through the kernel and
//! compares each state against its recorded hash.

mod error;
mod judge;
mod persist;
mod session;
mod tree;

pub use error::SessionError;
pub use judge::{Assignment, Judge, ProgressRow, Submission};
pub use persist::FORMAT_VERSION;
pub use session::{Action, AssessmentJob, Entry, RuleOffer, Session, Warning};
pub use tree::{Rule, System, Tree};
