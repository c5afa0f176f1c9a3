use std::collections::BTreeMap;

use secav_core::derivation::{Derivation, Witness};
use secav_core::natded::NdJudgment;
use secav_core::prover::{assess_subgoal, Assessment, SearchBudget};
use secav_core::sequent::Sequent;
use secav_core::syntax::{parse_formula_any, reserved_names, Formula};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::SessionError;
use crate::tree::{Rule, System, Tree};

/// A rule application: which open goal (depth-first index) and which rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Action {
    pub goal: usize,
    pub rule: Rule,
}

/// One state in the history. The root entry has neither parent nor action.
#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    pub parent: Option<usize>,
    pub action: Option<Action>,
    pub state: Tree,
    /// Hex SHA-256 of the state's script text.
    pub hash: String,
}

/// A rule offered for an open goal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleOffer {
    pub name: &'static str,
    pub witness: Witness,
    /// Rule text that can be applied as is, when one is known.
    pub suggestion: Option<String>,
}

/// Result of a background assessment of an open goal.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Warning {
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<serde_json::Value>,
}

impl Warning {
    pub fn from_assessment(a: &Assessment) -> Warning {
        let model = match a {
            Assessment::LikelyUnprovable(Some(m)) => Some(m.to_json()),
            _ => None,
        };
        Warning { status: a.label(), model }
    }

    /// True when the goal should be flagged to the user.
    pub fn is_alarming(&self) -> bool {
        self.status == "LikelyUnprovable"
    }
}

/// An open goal waiting to be assessed.
#[derive(Clone, Debug, PartialEq)]
pub struct AssessmentJob {
    /// Script text of the goal; results are filed under it.
    pub key: String,
    pub sequent: Sequent,
}

#[derive(Clone, Debug)]
pub struct Session {
    pub(crate) system: System,
    pub(crate) entries: Vec<Entry>,
    pub(crate) cursor: usize,
    pub(crate) revision: u64,
    warnings: BTreeMap<String, Warning>,
}

/// Sessions are equal when their histories and positions are; assessment
/// results are not part of a session's identity.
impl PartialEq for Session {
    fn eq(&self, other: &Session) -> bool {
        self.system == other.system
            && self.entries == other.entries
            && self.cursor == other.cursor
            && self.revision == other.revision
    }
}

pub(crate) fn state_hash(t: &Tree) -> String {
    Sha256::digest(t.script().as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

fn parse_user_formula(text: &str) -> Result<Formula, SessionError> {
    let p = parse_formula_any(text)?;
    if let Some(n) = reserved_names(&p).into_iter().next() {
        return Err(SessionError::ReservedName(n));
    }
    Ok(p)
}

impl Session {
    /// A session whose only open goal is `goal`: the singleton sequent, or the
    /// judgment with no assumptions.
    pub fn new(system: System, goal: &str) -> Result<Session, SessionError> {
        Session::with_assumptions(system, goal, &[])
    }

    /// Natural deduction sessions may start from assumptions; sequent
    /// sessions add them to the root sequent after the goal.
    pub fn with_assumptions(system: System, goal: &str, assumptions: &[&str]) -> Result<Session, SessionError> {
        let goal = parse_user_formula(goal)?;
        let assumptions = assumptions.iter().map(|a| parse_user_formula(a)).collect::<Result<Vec<_>, _>>()?;
        let root = match system {
            System::Sc => Tree::Sc(Derivation::open(std::iter::once(goal).chain(assumptions).collect())),
            System::Nd => Tree::Nd(Derivation::open(NdJudgment::new(goal, assumptions))),
        };
        Ok(Session::from_root(root))
    }

    pub(crate) fn from_root(root: Tree) -> Session {
        let hash = state_hash(&root);
        Session {
            system: root.system(),
            entries: vec![Entry { parent: None, action: None, state: root, hash }],
            cursor: 0,
            revision: 0,
            warnings: BTreeMap::new(),
        }
    }

    pub fn system(&self) -> System {
        self.system
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn cursor(&self) -> usize {
        self.cursor
    }

    /// Counts mutations; clients quote it to detect concurrent changes.
    pub fn revision(&self) -> u64 {
        self.revision
    }

    pub fn root(&self) -> &Tree {
        &self.entries[0].state
    }

    pub fn current(&self) -> &Tree {
        &self.entries[self.cursor].state
    }

    /// Open goals of the current state, depth-first, as display text.
    pub fn open_goals(&self) -> Vec<String> {
        let t = self.current();
        t.open_goals().iter().map(|p| t.goal_text(p).expect("open goal exists")).collect()
    }

    pub fn steps(&self) -> usize {
        self.current().steps()
    }

    pub fn is_closed(&self) -> bool {
        self.current().open_goals().is_empty()
    }

    fn goal_path(&self, index: usize) -> Result<Vec<usize>, SessionError> {
        self.current()
            .open_goals()
            .into_iter()
            .nth(index)
            .ok_or(SessionError::BadIndex { what: "open goal", index })
    }

    /// Rules applicable to an open goal. A closed session offers nothing.
    pub fn list_applicable(&self, goal: usize) -> Result<Vec<RuleOffer>, SessionError> {
        if self.is_closed() {
            return Ok(Vec::new());
        }
        let path = self.goal_path(goal)?;
        Ok(self
            .current()
            .templates(&path)
            .into_iter()
            .map(|(name, witness, suggestion)| RuleOffer { name, witness, suggestion: suggestion.map(|r| r.render()) })
            .collect())
    }

    /// Applies a rule to an open goal. On success a new entry is appended as
    /// a child of the current one and becomes current; on error nothing
    /// changes.
    pub fn apply(&mut self, goal: usize, rule: Rule) -> Result<usize, SessionError> {
        let path = self.goal_path(goal)?;
        let state = self.current().apply(&path, &rule)?;
        let hash = state_hash(&state);
        self.entries.push(Entry { parent: Some(self.cursor), action: Some(Action { goal, rule }), state, hash });
        self.cursor = self.entries.len() - 1;
        self.revision += 1;
        Ok(self.cursor)
    }

    /// Parses `rule` in the session's script syntax and applies it.
    pub fn apply_text(&mut self, goal: usize, rule: &str) -> Result<usize, SessionError> {
        let rule = Rule::parse(self.system, rule)?;
        self.apply(goal, rule)
    }

    /// Moves to the parent of the current entry.
    pub fn undo(&mut self) -> Result<usize, SessionError> {
        let parent = self.entries[self.cursor].parent.ok_or(SessionError::BadIndex { what: "parent entry", index: self.cursor })?;
        self.move_to(parent);
        Ok(parent)
    }

    /// Moves to the most recently created child of the current entry.
    pub fn redo(&mut self) -> Result<usize, SessionError> {
        let child = (self.cursor + 1..self.entries.len())
            .rev()
            .find(|&i| self.entries[i].parent == Some(self.cursor))
            .ok_or(SessionError::BadIndex { what: "child entry", index: self.cursor })?;
        self.move_to(child);
        Ok(child)
    }

    pub fn goto(&mut self, index: usize) -> Result<usize, SessionError> {
        if index >= self.entries.len() {
            return Err(SessionError::BadIndex { what: "history entry", index });
        }
        self.move_to(index);
        Ok(index)
    }

    fn move_to(&mut self, index: usize) {
        self.cursor = index;
        self.revision += 1;
    }

    /// The current state as a script; open goals are written `open`.
    pub fn export_script(&self) -> String {
        self.current().script()
    }

    /// Open goals of the current state that have no assessment yet.
    pub fn assessment_jobs(&self) -> Vec<AssessmentJob> {
        let t = self.current();
        let mut jobs: Vec<AssessmentJob> = Vec::new();
        for path in t.open_goals() {
            let key = goal_key(t, &path);
            if self.warnings.contains_key(&key) || jobs.iter().any(|j| j.key == key) {
                continue;
            }
            jobs.push(AssessmentJob { key, sequent: t.goal_sequent(&path).expect("open goal exists") });
        }
        jobs
    }

    /// Files an assessment result. Results for goals that are no longer open
    /// are stale and dropped; returns whether the result was kept.
    pub fn deliver(&mut self, job: &AssessmentJob, result: &Assessment) -> bool {
        let t = self.current();
        let live = t.open_goals().iter().any(|p| goal_key(t, p) == job.key);
        if live {
            self.warnings.insert(job.key.clone(), Warning::from_assessment(result));
        }
        live
    }

    /// Runs the pending assessments in the calling thread.
    pub fn assess_pending(&mut self, budget: &SearchBudget) {
        for job in self.assessment_jobs() {
            let result = assess_subgoal(&job.sequent, budget);
            self.deliver(&job, &result);
        }
    }

    /// Assessments for the current open goals, in goal order; `None` where
    /// no result has arrived.
    pub fn warnings(&self) -> Vec<Option<&Warning>> {
        let t = self.current();
        t.open_goals().iter().map(|p| self.warnings.get(&goal_key(t, p))).collect()
    }
}

fn goal_key(t: &Tree, path: &[usize]) -> String {
    match t {
        Tree::Sc(d) => Tree::Sc(Derivation::open(d.node(path).expect("open goal").conclusion.clone())).script(),
        Tree::Nd(d) => Tree::Nd(Derivation::open(d.node(path).expect("open goal").conclusion.clone())).script(),
    }
}
