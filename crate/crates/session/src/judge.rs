use std::collections::BTreeMap;

use secav_core::syntax::{render_formula, Notation};
use serde::{Deserialize, Serialize};

use crate::error::SessionError;
use crate::session::Session;
use crate::tree::System;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub id: String,
    pub system: System,
    /// Goal formula in abstract notation.
    pub goal: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub due: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Submission {
    pub assignment: String,
    pub student: String,
    /// The saved session.
    pub snapshot: String,
    pub steps: usize,
    pub open_goals: usize,
    pub timestamp: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProgressRow {
    pub student: String,
    pub steps: usize,
    pub open_goals: usize,
    pub solved: bool,
    pub submissions: usize,
}

/// Assignments and the submissions made against them.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Judge {
    assignments: BTreeMap<String, Assignment>,
    submissions: Vec<Submission>,
}

impl Judge {
    pub fn new() -> Judge {
        Judge::default()
    }

    pub fn add_assignment(&mut self, id: &str, system: System, goal: &str, due: Option<String>) -> Result<&Assignment, SessionError> {
        if self.assignments.contains_key(id) {
            return Err(SessionError::DuplicateAssignment(id.to_string()));
        }
        let root = Session::new(system, goal)?;
        let goal = match root.root() {
            crate::Tree::Sc(t) => render_formula(&t.conclusion[0], Notation::Abstract),
            crate::Tree::Nd(t) => render_formula(&t.conclusion.goal, Notation::Abstract),
        };
        let a = Assignment { id: id.to_string(), system, goal, due };
        Ok(self.assignments.entry(id.to_string()).or_insert(a))
    }

    pub fn assignment(&self, id: &str) -> Option<&Assignment> {
        self.assignments.get(id)
    }

    pub fn assignments(&self) -> impl Iterator<Item = &Assignment> {
        self.assignments.values()
    }

    pub fn submissions(&self) -> &[Submission] {
        &self.submissions
    }

    pub fn submit(&mut self, assignment: &str, student: &str, session: &Session, timestamp: u64) -> Result<Submission, SessionError> {
        self.submit_snapshot(assignment, student, &session.save(), timestamp)
    }

    /// Records a saved session. The counts are computed from the snapshot
    /// itself, which must be a session on the assignment's goal.
    pub fn submit_snapshot(&mut self, assignment: &str, student: &str, snapshot: &str, timestamp: u64) -> Result<Submission, SessionError> {
        let a = self.assignments.get(assignment).ok_or_else(|| SessionError::UnknownAssignment(assignment.to_string()))?;
        let session = Session::load_as(snapshot, a.system)?;
        let expected = Session::new(a.system, &a.goal)?;
        if session.root() != expected.root() {
            return Err(SessionError::AssignmentMismatch(assignment.to_string()));
        }
        let sub = Submission {
            assignment: assignment.to_string(),
            student: student.to_string(),
            snapshot: snapshot.to_string(),
            steps: session.steps(),
            open_goals: session.current().open_goals().len(),
            timestamp,
        };
        self.submissions.push(sub.clone());
        Ok(sub)
    }

    /// One row per student, sorted by student id, describing their latest
    /// submission.
    pub fn progress(&self, assignment: &str) -> Result<Vec<ProgressRow>, SessionError> {
        if !self.assignments.contains_key(assignment) {
            return Err(SessionError::UnknownAssignment(assignment.to_string()));
        }
        let mut rows: BTreeMap<&str, ProgressRow> = BTreeMap::new();
        for s in self.submissions.iter().filter(|s| s.assignment == assignment) {
            let row = rows.entry(&s.student).or_insert_with(|| ProgressRow {
                student: s.student.clone(),
                steps: 0,
                open_goals: 0,
                solved: false,
                submissions: 0,
            });
            row.steps = s.steps;
            row.open_goals = s.open_goals;
            row.solved = s.open_goals == 0;
            row.submissions += 1;
        }
        Ok(rows.into_values().collect())
    }
}
