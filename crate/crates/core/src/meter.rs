//! Work counters shared by the tree builders.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::Result;
use crate::flow::{self, FlowResult, FlowStatus};
use crate::graph::{CapGraph, NodeId};

/// Thread-safe counters. Every flow issued through [`Meter::flow`] is
/// counted; callers bump the other counters themselves.
#[derive(Debug, Default)]
pub struct Meter {
    flow_calls: AtomicU64,
    capped_out: AtomicU64,
    isolating_calls: AtomicU64,
    decrements: AtomicU64,
}

/// A plain copy of the counters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MeterSnapshot {
    pub flow_calls: u64,
    pub capped_out: u64,
    pub isolating_calls: u64,
    pub decrements: u64,
}

impl std::ops::Sub for MeterSnapshot {
    type Output = MeterSnapshot;

    fn sub(self, rhs: Self) -> Self {
        MeterSnapshot {
            flow_calls: self.flow_calls - rhs.flow_calls,
            capped_out: self.capped_out - rhs.capped_out,
            isolating_calls: self.isolating_calls - rhs.isolating_calls,
            decrements: self.decrements - rhs.decrements,
        }
    }
}

impl Meter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Latest minimum cut query, counted.
    pub fn flow(&self, g: &CapGraph, s: NodeId, t: NodeId, cap: Option<u64>) -> Result<FlowResult> {
        let r = flow::latest_min_cut(g, s, t, cap)?;
        self.flow_calls.fetch_add(1, Ordering::Relaxed);
        if r.status == FlowStatus::AtLeastCap {
            self.capped_out.fetch_add(1, Ordering::Relaxed);
        }
        Ok(r)
    }

    pub fn add_isolating_call(&self) {
        self.isolating_calls.fetch_add(1, Ordering::Relaxed);
    }

    pub fn add_decrement(&self) {
        self.decrements.fetch_add(1, Ordering::Relaxed);
    }

    pub fn snapshot(&self) -> MeterSnapshot {
        MeterSnapshot {
            flow_calls: self.flow_calls.load(Ordering::Relaxed),
            capped_out: self.capped_out.load(Ordering::Relaxed),
            isolating_calls: self.isolating_calls.load(Ordering::Relaxed),
            decrements: self.decrements.load(Ordering::Relaxed),
        }
    }
}
