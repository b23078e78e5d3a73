//! Closure operators on subsets of the inequality index set.

use crate::sets::IndexSet;

/// A closure operator: extensive, monotone, idempotent.
pub trait ClosureOp: Sync {
    fn close(&self, x: &IndexSet) -> IndexSet;
}

impl<F: Fn(&IndexSet) -> IndexSet + Sync> ClosureOp for F {
    fn close(&self, x: &IndexSet) -> IndexSet {
        self(x)
    }
}
