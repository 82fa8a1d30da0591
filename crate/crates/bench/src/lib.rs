//! Workloads shared by the benchmarks.

use qrrt_core::dsl::{self, CatalogEntry};

/// Catalog entries timed by `benches/verify.rs`: a single sum, a double sum
/// with a cubic-size index range, and a bivariate entry.
pub const ENTRIES: [&str; 4] = ["rr1", "mod33-3", "mod72", "a-mod18i"];

pub fn entries() -> Vec<CatalogEntry> {
    ENTRIES.iter().map(|n| dsl::entry(n).expect("shipped entry")).collect()
}
