use secav_core::syntax::{render_formula, Notation};
use serde::{Deserialize, Serialize};

use crate::error::SessionError;
use crate::session::{state_hash, Action, Entry, Session};
use crate::tree::{Rule, System, Tree};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SessionFile {
    version: u32,
    system: System,
    /// Root goal formula in abstract notation.
    goal: String,
    /// Formulas after the goal in the root sequent, or the root assumptions.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    context: Vec<String>,
    entries: Vec<EntryFile>,
    cursor: usize,
    #[serde(default)]
    revision: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryFile {
    parent: Option<usize>,
    action: Option<ActionFile>,
    state_hash: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionFile {
    goal: usize,
    rule: String,
}

fn bad(msg: impl Into<String>) -> SessionError {
    SessionError::Format(msg.into())
}

impl Session {
    /// The full history as a versioned JSON document.
    pub fn save(&self) -> String {
        let abs = |p| render_formula(p, Notation::Abstract);
        let (goal, context) = match self.root() {
            Tree::Sc(t) => (abs(&t.conclusion[0]), t.conclusion[1..].iter().map(abs).collect()),
            Tree::Nd(t) => (abs(&t.conclusion.goal), t.conclusion.assumptions.iter().map(abs).collect()),
        };
        let file = SessionFile {
            version: FORMAT_VERSION,
            system: self.system,
            goal,
            context,
            entries: self
                .entries
                .iter()
                .map(|e| EntryFile {
                    parent: e.parent,
                    action: e.action.as_ref().map(|a| ActionFile { goal: a.goal, rule: a.rule.render() }),
                    state_hash: e.hash.clone(),
                })
                .collect(),
            cursor: self.cursor,
            revision: self.revision,
        };
        serde_json::to_string_pretty(&file).expect("session files serialize") + "\n"
    }

    /// Rebuilds a session by replaying every recorded action through the
    /// kernel and checking each state against its recorded hash.
    pub fn load(text: &str) -> Result<Session, SessionError> {
        let file: SessionFile = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        if file.version != FORMAT_VERSION {
            return Err(bad(format!("unsupported version {}", file.version)));
        }
        let context: Vec<&str> = file.context.iter().map(String::as_str).collect();
        let mut session = Session::with_assumptions(file.system, &file.goal, &context)
            .map_err(|e| bad(format!("goal: {e}")))?;
        let mut entries = file.entries.into_iter();
        let root = entries.next().ok_or_else(|| bad("no entries"))?;
        if root.parent.is_some() || root.action.is_some() {
            return Err(bad("the first entry must be the root"));
        }
        if root.state_hash != session.entries[0].hash {
            return Err(bad("state hash mismatch at entry 0"));
        }
        for (i, e) in entries.enumerate().map(|(i, e)| (i + 1, e)) {
            let (Some(parent), Some(action)) = (e.parent, e.action) else {
                return Err(bad(format!("entry {i} lacks a parent or an action")));
            };
            if parent >= i {
                return Err(bad(format!("entry {i} names a later parent")));
            }
            let rule = Rule::parse(file.system, &action.rule).map_err(|err| bad(format!("entry {i}: {err}")))?;
            let from = &session.entries[parent].state;
            let path = from
                .open_goals()
                .into_iter()
                .nth(action.goal)
                .ok_or_else(|| bad(format!("entry {i}: no open goal {}", action.goal)))?;
            let state = from.apply(&path, &rule).map_err(|err| bad(format!("entry {i}: {err}")))?;
            let hash = state_hash(&state);
            if hash != e.state_hash {
                return Err(bad(format!("state hash mismatch at entry {i}")));
            }
            session.entries.push(Entry { parent: Some(parent), action: Some(Action { goal: action.goal, rule }), state, hash });
        }
        if file.cursor >= session.entries.len() {
            return Err(bad("cursor out of range"));
        }
        session.cursor = file.cursor;
        session.revision = file.revision;
        Ok(session)
    }

    /// As [`Session::load`], additionally requiring the given calculus.
    pub fn load_as(text: &str, system: System) -> Result<Session, SessionError> {
        let s = Session::load(text)?;
        if s.system != system {
            return Err(bad(format!("expected a {system} session, found {}", s.system)));
        }
        Ok(s)
    }
}
