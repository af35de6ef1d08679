//! Classical baseline: scan every database once, counting per-entry
//! occurrences; entries seen `kappa` times are the common set. Exactly
//! `kappa * 2^n` membership queries, and an independent code path from
//! the set-intersection route in [`crate::oracle`].

use std::collections::{BTreeMap, BTreeSet};

use crate::oracle::ProblemInstance;

/// Occurrence counts accumulated by the scan. Entries never queried true
/// are simply absent (count zero).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OccurrenceTable {
    counts: BTreeMap<u64, usize>,
    total_queries: u64,
}

impl OccurrenceTable {
    /// Run the full scan: one membership query per (database, entry) pair.
    pub fn scan(instance: &ProblemInstance) -> Self {
        let mut counts = BTreeMap::new();
        let mut total_queries = 0u64;
        for black_box in instance.black_boxes() {
            for entry in 0..instance.num_entries() {
                total_queries += 1;
                if black_box.contains(entry) {
                    *counts.entry(entry).or_insert(0) += 1;
                }
            }
        }
        Self {
            counts,
            total_queries,
        }
    }

    pub fn count(&self, entry: u64) -> usize {
        self.counts.get(&entry).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &BTreeMap<u64, usize> {
        &self.counts
    }

    pub fn total_queries(&self) -> u64 {
        self.total_queries
    }

    /// Entries whose occurrence count is exactly `occurrences`.
    pub fn entries_with_count(&self, occurrences: usize) -> BTreeSet<u64> {
        self.counts
            .iter()
            .filter(|&(_, &c)| c == occurrences)
            .map(|(&e, _)| e)
            .collect()
    }
}

/// The exact common set and the number of membership queries spent
/// finding it (always `kappa * 2^n` for the scan strategy).
pub fn classical_common_entries(instance: &ProblemInstance) -> (BTreeSet<u64>, u64) {
    let table = OccurrenceTable::scan(instance);
    (
        table.entries_with_count(instance.kappa()),
        table.total_queries(),
    )
}
