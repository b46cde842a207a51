//! Verdicts, search outcomes and search budgets shared by the verifiers.

use serde::Serialize;

/// Default limit on the ambient group order for exhaustive searches.
pub const DEFAULT_MAX_ORDER: u64 = 1 << 14;

/// Default limit on branch-and-bound / exact-cover nodes.
pub const DEFAULT_MAX_NODES: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub max_order: u64,
    pub max_nodes: u64,
    /// Worker threads; `1` runs the search on the calling thread.
    pub threads: usize,
    /// Search candidates in enumeration order so the witness found first is
    /// the lexicographically least one.
    pub canonical: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            max_order: DEFAULT_MAX_ORDER,
            max_nodes: DEFAULT_MAX_NODES,
            threads: 1,
            canonical: false,
        }
    }
}

/// Outcome of a decision procedure that always terminates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Verdict<C, F> {
    Holds(C),
    Fails(F),
}

impl<C, F> Verdict<C, F> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds(_))
    }

    pub fn certificate(&self) -> Option<&C> {
        match self {
            Verdict::Holds(c) => Some(c),
            Verdict::Fails(_) => None,
        }
    }

    pub fn failure(&self) -> Option<&F> {
        match self {
            Verdict::Holds(_) => None,
            Verdict::Fails(f) => Some(f),
        }
    }
}

/// Which budget stopped a search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Overrun {
    GroupOrder { order: u64, limit: u64 },
    Nodes { limit: u64 },
}

/// Outcome of a bounded search. `Exhausted` is a proof that no witness
/// exists; `BudgetExceeded` decides nothing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SearchOutcome<T> {
    Found(T),
    Exhausted,
    BudgetExceeded(Overrun),
}

impl<T> SearchOutcome<T> {
    pub fn found(&self) -> Option<&T> {
        match self {
            SearchOutcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_exhausted(&self) -> bool {
        matches!(self, SearchOutcome::Exhausted)
    }

    pub fn is_budget_exceeded(&self) -> bool {
        matches!(self, SearchOutcome::BudgetExceeded(_))
    }
}

/// Runs `f` on a dedicated pool when more than one thread is requested.
pub(crate) fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    if threads <= 1 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}
