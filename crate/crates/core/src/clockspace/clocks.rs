use std::fmt;
use std::sync::Arc;

use super::ClockError;

/// Ordered set of clock names. Clock `names[k]` lives at DBM index `k + 1`;
/// index 0 is the reference clock, which always reads 0.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ClockSet {
    names: Vec<String>,
}

impl ClockSet {
    pub fn new<I, S>(names: I) -> Result<Arc<ClockSet>, ClockError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (k, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(ClockError::EmptyName);
            }
            if names[..k].contains(n) {
                return Err(ClockError::DuplicateClock(n.clone()));
            }
        }
        Ok(Arc::new(ClockSet { names }))
    }

    pub fn empty() -> Arc<ClockSet> {
        Arc::new(ClockSet { names: Vec::new() })
    }

    /// Number of user clocks.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// DBM dimension, reference clock included.
    pub fn dim(&self) -> usize {
        self.names.len() + 1
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// DBM index of a clock (never 0).
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name).map(|k| k + 1)
    }

    /// Name of the clock at DBM index `i ≥ 1`.
    pub fn name(&self, i: usize) -> &str {
        &self.names[i - 1]
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    /// Union by name: `self`'s clocks first, then the new ones from `other`.
    pub fn union(&self, other: &ClockSet) -> Arc<ClockSet> {
        let mut names = self.names.clone();
        for n in &other.names {
            if !names.contains(n) {
                names.push(n.clone());
            }
        }
        Arc::new(ClockSet { names })
    }
}

impl fmt::Debug for ClockSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.names).finish()
    }
}
