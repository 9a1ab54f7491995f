use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::clockspace::{ClockSet, Federation};

use super::ModelError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ActionKind {
    Input,
    Output,
    Internal,
    Restart,
}

impl ActionKind {
    pub fn is_observable(self) -> bool {
        self != ActionKind::Internal
    }

    /// Inputs and the restart are played by the tester.
    pub fn is_controllable(self) -> bool {
        matches!(self, ActionKind::Input | ActionKind::Restart)
    }

    pub fn keyword(self) -> &'static str {
        match self {
            ActionKind::Input => "input",
            ActionKind::Output => "output",
            ActionKind::Internal => "internal",
            ActionKind::Restart => "restart",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ActionDecl {
    pub name: String,
    pub kind: ActionKind,
}

impl ActionDecl {
    /// Name with the conventional `?`/`!` suffix.
    pub fn label(&self) -> String {
        match self.kind {
            ActionKind::Input => format!("{}?", self.name),
            ActionKind::Output => format!("{}!", self.name),
            _ => self.name.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Otaio,
    Spec,
    TestPurpose,
    Product,
    Tester,
    Game,
    Impl,
}

impl Role {
    pub fn keyword(self) -> &'static str {
        match self {
            Role::Otaio => "otaio",
            Role::Spec => "spec",
            Role::TestPurpose => "tp",
            Role::Product => "product",
            Role::Tester => "tester",
            Role::Game => "game",
            Role::Impl => "impl",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Role> {
        Some(match s {
            "otaio" => Role::Otaio,
            "spec" => Role::Spec,
            "tp" | "test-purpose" | "test_purpose" => Role::TestPurpose,
            "product" => Role::Product,
            "tester" => Role::Tester,
            "game" => Role::Game,
            "impl" => Role::Impl,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug)]
pub struct Location {
    pub name: String,
    pub invariant: Federation,
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub src: usize,
    pub guard: Federation,
    pub action: usize,
    /// DBM indices of the reset clocks, sorted.
    pub resets: Vec<usize>,
    pub dst: usize,
}

/// One record for every automaton role: specification, test purpose,
/// product, tester, implementation.
#[derive(Clone, Debug)]
pub struct Automaton {
    pub name: String,
    pub role: Role,
    pub actions: Vec<ActionDecl>,
    pub clocks: Arc<ClockSet>,
    /// DBM indices of observed clocks; every other clock is proper.
    pub observed: BTreeSet<usize>,
    pub locations: Vec<Location>,
    pub initial: usize,
    pub edges: Vec<Edge>,
    pub accept: BTreeSet<usize>,
    pub fail: Option<usize>,
    /// Invariants of the automaton a tester was built from, kept to
    /// recover the verdict sets.
    pub dp_invariants: Option<Vec<Federation>>,
}

impl Automaton {
    pub fn new(name: impl Into<String>, role: Role, clocks: Arc<ClockSet>) -> Automaton {
        Automaton {
            name: name.into(),
            role,
            actions: Vec::new(),
            clocks,
            observed: BTreeSet::new(),
            locations: Vec::new(),
            initial: 0,
            edges: Vec::new(),
            accept: BTreeSet::new(),
            fail: None,
            dp_invariants: None,
        }
    }

    pub fn add_action(&mut self, name: impl Into<String>, kind: ActionKind) -> usize {
        self.actions.push(ActionDecl { name: name.into(), kind });
        self.actions.len() - 1
    }

    pub fn add_location(&mut self, name: impl Into<String>, invariant: Federation) -> usize {
        self.locations.push(Location { name: name.into(), invariant });
        self.locations.len() - 1
    }

    pub fn add_edge(&mut self, src: usize, guard: Federation, action: usize, mut resets: Vec<usize>, dst: usize) -> usize {
        resets.sort_unstable();
        resets.dedup();
        self.edges.push(Edge { src, guard, action, resets, dst });
        self.edges.len() - 1
    }

    pub fn action_id(&self, name: &str) -> Option<usize> {
        self.actions.iter().position(|a| a.name == name)
    }

    pub fn location_id(&self, name: &str) -> Option<usize> {
        self.locations.iter().position(|l| l.name == name)
    }

    pub fn kind(&self, action: usize) -> ActionKind {
        self.actions[action].kind
    }

    pub fn restart_action(&self) -> Option<usize> {
        self.actions.iter().position(|a| a.kind == ActionKind::Restart)
    }

    pub fn actions_of(&self, kind: ActionKind) -> Vec<usize> {
        (0..self.actions.len()).filter(|&a| self.actions[a].kind == kind).collect()
    }

    pub fn edges_from(&self, loc: usize) -> impl Iterator<Item = (usize, &Edge)> + '_ {
        self.edges.iter().enumerate().filter(move |(_, e)| e.src == loc)
    }

    /// DBM indices of proper clocks.
    pub fn proper_clocks(&self) -> Vec<usize> {
        (1..self.clocks.dim()).filter(|i| !self.observed.contains(i)).collect()
    }

    pub fn is_taio(&self) -> bool {
        self.observed.is_empty()
    }

    pub fn observed_clocks(&self) -> Vec<usize> {
        self.observed.iter().copied().collect()
    }

    /// Largest constant of any guard or invariant (at least 1).
    pub fn max_constant(&self) -> i64 {
        let mut m = 1;
        for l in &self.locations {
            m = m.max(l.invariant.max_constant());
        }
        for e in &self.edges {
            m = m.max(e.guard.max_constant());
        }
        if let Some(inv) = &self.dp_invariants {
            for f in inv {
                m = m.max(f.max_constant());
            }
        }
        m
    }

    /// Actions as (name, kind) pairs, sorted, for alphabet comparisons.
    pub fn alphabet(&self) -> BTreeSet<(String, ActionKind)> {
        self.actions.iter().map(|a| (a.name.clone(), a.kind)).collect()
    }

    /// Structural checks every role shares.
    pub fn check_wellformed(&self) -> Result<(), ModelError> {
        if self.locations.is_empty() {
            return Err(ModelError::NoLocations(self.name.clone()));
        }
        if self.initial >= self.locations.len() {
            return Err(ModelError::UnknownLocation(format!("initial #{}", self.initial)));
        }
        let mut seen = BTreeSet::new();
        for l in &self.locations {
            if !seen.insert(l.name.as_str()) {
                return Err(ModelError::Duplicate(format!("location {}", l.name)));
            }
        }
        let mut names = BTreeSet::new();
        for a in &self.actions {
            if !names.insert(a.name.as_str()) {
                return Err(ModelError::Duplicate(format!("action {}", a.name)));
            }
        }
        if self.actions.iter().filter(|a| a.kind == ActionKind::Restart).count() > 1 {
            return Err(ModelError::Duplicate("restart action".into()));
        }
        for (k, e) in self.edges.iter().enumerate() {
            if e.src >= self.locations.len() || e.dst >= self.locations.len() || e.action >= self.actions.len() {
                return Err(ModelError::UnknownLocation(format!("edge #{k}")));
            }
            if let Some(&x) = e.resets.iter().find(|x| self.observed.contains(x)) {
                return Err(ModelError::ResetObserved {
                    edge: k,
                    clock: self.clocks.name(x).to_string(),
                });
            }
        }
        if self.role == Role::Tester {
            if self.fail.is_none() {
                return Err(ModelError::TesterShape("missing fail location".into()));
            }
            if let Some(l) = self.locations.iter().find(|l| !l.invariant.equals(&Federation::universe(&self.clocks))) {
                return Err(ModelError::TesterShape(format!("invariant of {} is not true", l.name)));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Automaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::export::to_text(self))
    }
}
