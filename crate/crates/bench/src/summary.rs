use std::collections::BTreeMap;
use std::fmt;

use crate::ResultRecord;

/// Aggregate over the trials of one (structure, policy, n, mu) group.
#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub structure: String,
    pub policy: String,
    pub n: usize,
    pub mu: f64,
    pub trials: usize,
    pub timed_out: usize,
    /// Geometric mean.
    pub time_ms: f64,
    pub depth_min: usize,
    /// Geometric mean.
    pub depth_avg: f64,
    pub depth_max: usize,
    /// Arithmetic mean.
    pub nodes_avg: f64,
}

fn geometric_mean(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut count) = (0.0, 0usize);
    for v in values.filter(|v| *v > 0.0) {
        sum += v.ln();
        count += 1;
    }
    if count == 0 {
        0.0
    } else {
        (sum / count as f64).exp()
    }
}

/// Groups completed records; timed-out ones are counted but not averaged.
/// Groups with no completed record are dropped.
pub fn summarize(records: &[ResultRecord]) -> Vec<SummaryRow> {
    let mut groups: BTreeMap<(String, String, usize, u64), Vec<&ResultRecord>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.structure.clone(), r.policy.clone(), r.n, r.mu.to_bits()))
            .or_default()
            .push(r);
    }
    groups
        .into_values()
        .filter_map(|group| {
            let done: Vec<_> = group.iter().copied().filter(|r| !r.timed_out()).collect();
            let first = done.first()?;
            Some(SummaryRow {
                structure: first.structure.clone(),
                policy: first.policy.clone(),
                n: first.n,
                mu: first.mu,
                trials: done.len(),
                timed_out: group.len() - done.len(),
                time_ms: geometric_mean(done.iter().map(|r| r.elapsed_ms)),
                depth_min: done.iter().map(|r| r.final_depth).min()?,
                depth_avg: geometric_mean(done.iter().map(|r| r.final_depth as f64)),
                depth_max: done.iter().map(|r| r.final_depth).max()?,
                nodes_avg: done.iter().map(|r| r.final_nodes as f64).sum::<f64>() / done.len() as f64,
            })
        })
        .collect()
}

impl fmt::Display for SummaryRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<4} {:<4} n={:<9} mu={:<6} trials={:<3} timeouts={:<3} time={:>10.3}ms depth={}/{:.1}/{} nodes={:.1}",
            self.structure,
            self.policy,
            self.n,
            self.mu,
            self.trials,
            self.timed_out,
            self.time_ms,
            self.depth_min,
            self.depth_avg,
            self.depth_max,
            self.nodes_avg
        )
    }
}
