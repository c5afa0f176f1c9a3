//! Service state and the commands that change it.
//!
//! Every mutation is a [`Command`]. Executing a command is deterministic, so
//! replaying the logged commands in order rebuilds the exact state.

use std::collections::BTreeMap;

use secav_session::{Judge, Session, System};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::ApiError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum Command {
    CreateSession {
        system: System,
        goal: String,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        assumptions: Vec<String>,
    },
    Apply { session: String, revision: u64, goal: usize, rule: String },
    Goto { session: String, revision: u64, index: usize },
    Undo { session: String, revision: u64 },
    Redo { session: String, revision: u64 },
    AddAssignment {
        id: String,
        system: System,
        goal: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        due: Option<String>,
    },
    Submit { assignment: String, student: String, session: String, timestamp: u64 },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Store {
    sessions: BTreeMap<String, Session>,
    judge: Judge,
    /// Number of sessions ever created; ids are `s1`, `s2`, ...
    created: u64,
}

impl Store {
    pub fn new() -> Store {
        Store::default()
    }

    pub fn session(&self, id: &str) -> Result<&Session, ApiError> {
        self.sessions.get(id).ok_or_else(|| ApiError::not_found("session", id))
    }

    pub fn session_ids(&self) -> impl Iterator<Item = &String> {
        self.sessions.keys()
    }

    pub fn judge(&self) -> &Judge {
        &self.judge
    }

    fn session_mut(&mut self, id: &str, revision: u64) -> Result<&mut Session, ApiError> {
        let s = self.sessions.get_mut(id).ok_or_else(|| ApiError::not_found("session", id))?;
        if s.revision() != revision {
            return Err(ApiError::new(409, "RevisionMismatch", format!("session `{id}` is at revision {}", s.revision()))
                .with_detail(json!({ "expected": s.revision(), "given": revision })));
        }
        Ok(s)
    }

    /// Executes a command. On error the store is unchanged.
    pub fn execute(&mut self, cmd: &Command) -> Result<Value, ApiError> {
        match cmd {
            Command::CreateSession { system, goal, assumptions } => {
                let refs: Vec<&str> = assumptions.iter().map(String::as_str).collect();
                let s = Session::with_assumptions(*system, goal, &refs)?;
                self.created += 1;
                let id = format!("s{}", self.created);
                let view = session_view(&id, &s);
                self.sessions.insert(id, s);
                Ok(view)
            }
            Command::Apply { session, revision, goal, rule } => {
                let s = self.session_mut(session, *revision)?;
                s.apply_text(*goal, rule)?;
                Ok(session_view(session, s))
            }
            Command::Goto { session, revision, index } => {
                let s = self.session_mut(session, *revision)?;
                s.goto(*index)?;
                Ok(session_view(session, s))
            }
            Command::Undo { session, revision } => {
                let s = self.session_mut(session, *revision)?;
                s.undo()?;
                Ok(session_view(session, s))
            }
            Command::Redo { session, revision } => {
                let s = self.session_mut(session, *revision)?;
                s.redo()?;
                Ok(session_view(session, s))
            }
            Command::AddAssignment { id, system, goal, due } => {
                let a = self.judge.add_assignment(id, *system, goal, due.clone())?;
                Ok(serde_json::to_value(a).expect("assignments serialize"))
            }
            Command::Submit { assignment, student, session, timestamp } => {
                let s = self.sessions.get(session).ok_or_else(|| ApiError::not_found("session", session))?;
                let sub = self.judge.submit(assignment, student, s, *timestamp)?;
                Ok(json!({
                    "assignment": sub.assignment,
                    "student": sub.student,
                    "steps": sub.steps,
                    "open_goals": sub.open_goals,
                    "solved": sub.open_goals == 0,
                    "timestamp": sub.timestamp,
                }))
            }
        }
    }

    pub fn to_snapshot(&self) -> Snapshot {
        Snapshot {
            created: self.created,
            sessions: self.sessions.iter().map(|(id, s)| (id.clone(), s.save())).collect(),
            judge: self.judge.clone(),
        }
    }

    pub fn from_snapshot(snap: &Snapshot) -> Result<Store, String> {
        let mut sessions = BTreeMap::new();
        for (id, text) in &snap.sessions {
            sessions.insert(id.clone(), Session::load(text).map_err(|e| format!("session {id}: {e}"))?);
        }
        Ok(Store { sessions, judge: snap.judge.clone(), created: snap.created })
    }
}

/// Full state in serializable form; sessions are kept as session files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Snapshot {
    pub created: u64,
    pub sessions: BTreeMap<String, String>,
    pub judge: Judge,
}

/// What clients see of a session.
pub fn session_view(id: &str, s: &Session) -> Value {
    let (verdict, open, steps, _) = s.current().verdict();
    json!({
        "id": id,
        "system": s.system(),
        "revision": s.revision(),
        "cursor": s.cursor(),
        "verdict": verdict,
        "steps": steps,
        "open": open,
        "goals": s.open_goals(),
        "history": s.entries().iter().map(|e| json!({
            "parent": e.parent,
            "action": e.action.as_ref().map(|a| json!({ "goal": a.goal, "rule": a.rule.render() })),
            "state_hash": e.hash,
        })).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn create(goal: &str) -> Command {
        Command::CreateSession { system: System::Sc, goal: goal.into(), assumptions: vec![] }
    }

    #[test]
    fn ids_are_sequential() {
        let mut st = Store::new();
        assert_eq!(st.execute(&create("p --> p")).unwrap()["id"], "s1");
        assert!(st.execute(&create("p -->")).is_err());
        assert_eq!(st.execute(&create("q")).unwrap()["id"], "s2");
    }

    #[test]
    fn stale_revisions_conflict() {
        let mut st = Store::new();
        st.execute(&create("p --> p")).unwrap();
        let apply = |revision| Command::Apply { session: "s1".into(), revision, goal: 0, rule: "AlphaImp".into() };
        let v = st.execute(&apply(0)).unwrap();
        assert_eq!(v["revision"], 1);
        let before = st.clone();
        let e = st.execute(&apply(0)).unwrap_err();
        assert_eq!((e.status, e.code.as_str()), (409, "RevisionMismatch"));
        assert_eq!(st, before);
    }

    #[test]
    fn kernel_errors_keep_their_names() {
        let mut st = Store::new();
        st.execute(&create("forall x. P(x)")).unwrap();
        st.execute(&Command::Apply { session: "s1".into(), revision: 0, goal: 0, rule: "DeltaUni const: ''c''".into() })
            .unwrap();
        let mut st = Store::new();
        st.execute(&create("(forall x. P(x)) \\/ Q(c)")).unwrap();
        st.execute(&Command::Apply { session: "s1".into(), revision: 0, goal: 0, rule: "AlphaDis".into() }).unwrap();
        let e = st
            .execute(&Command::Apply { session: "s1".into(), revision: 1, goal: 0, rule: "DeltaUni const: ''c''".into() })
            .unwrap_err();
        assert_eq!((e.status, e.code.as_str()), (400, "FreshnessViolation"));
    }

    #[test]
    fn unknown_ids_are_not_found() {
        let mut st = Store::new();
        let e = st.execute(&Command::Undo { session: "s9".into(), revision: 0 }).unwrap_err();
        assert_eq!(e.status, 404);
        st.execute(&create("p --> p")).unwrap();
        let e = st
            .execute(&Command::Submit { assignment: "a".into(), student: "x".into(), session: "s1".into(), timestamp: 0 })
            .unwrap_err();
        assert_eq!(e.status, 404);
    }

    #[test]
    fn snapshot_round_trip() {
        let mut st = Store::new();
        st.execute(&create("p --> p")).unwrap();
        st.execute(&Command::Apply { session: "s1".into(), revision: 0, goal: 0, rule: "AlphaImp".into() }).unwrap();
        st.execute(&Command::AddAssignment { id: "a1".into(), system: System::Sc, goal: "p --> p".into(), due: None })
            .unwrap();
        st.execute(&Command::Submit { assignment: "a1".into(), student: "ann".into(), session: "s1".into(), timestamp: 5 })
            .unwrap();
        let snap = st.to_snapshot();
        let text = serde_json::to_string(&snap).unwrap();
        let back = Store::from_snapshot(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, st);
    }

    #[test]
    fn commands_serialize_flat() {
        let c = Command::Goto { session: "s1".into(), revision: 3, index: 0 };
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(text, r#"{"op":"goto","session":"s1","revision":3,"index":0}"#);
        assert_eq!(serde_json::from_str::<Command>(&text).unwrap(), c);
    }
}
