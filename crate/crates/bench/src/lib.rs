//! Shared helpers for the criterion benches.

use std::ops::ControlFlow;

use hyperpath_core::enumerator::enumerate_hyperpaths;
use hyperpath_core::families::Family;
use hyperpath_core::EnumerationStats;

/// Enumerates up to `limit` hyperpaths of `family`, discarding them.
pub fn drain(family: &Family, limit: usize) -> EnumerationStats {
    let inst = family.instance();
    enumerate_hyperpaths(&inst, |e| {
        if e.index + 1 >= limit as u64 {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })
    .expect("families are B-hypergraphs")
}
