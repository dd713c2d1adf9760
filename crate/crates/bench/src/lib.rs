//! Randomized storage experiments: feed the same generated stream to the
//! tree (under each rebalance policy) and to the list baseline, and record
//! insertion time, final depth and final size per trial.

pub mod plot;
pub mod summary;

use std::fs::File;
use std::path::Path;
use std::time::{Duration, Instant};

use ndtree::{
    sets_match, GeneratorConfig, GeneratorState, GeometryError, NdList, NdTree,
    NondominatedStore, ParetoElement, RebalanceMode, RebalancePolicy,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use plot::{emit_plot, render_svg};
pub use summary::{summarize, SummaryRow};

/// Coordinate tolerance when comparing tree and list sets.
pub const SET_TOLERANCE: f64 = 1e-7;

pub const RESULTS_HEADER: &str =
    "structure,policy,n,mu,seed,elapsed_ms,final_depth,final_nodes,inserts_processed";

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid experiment: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Structure {
    Tree,
    List,
}

impl Structure {
    pub fn name(self) -> &'static str {
        match self {
            Structure::Tree => "tree",
            Structure::List => "list",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub n: usize,
    pub mu: f64,
    pub delta: f64,
    pub policies: Vec<RebalanceMode>,
    pub structures: Vec<Structure>,
    pub trials: usize,
    pub seed: u64,
    pub time_limit: Option<Duration>,
    pub prune_subtrees: bool,
    pub threads: usize,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        ExperimentSpec {
            n: 10_000,
            mu: 0.0,
            delta: RebalancePolicy::DEFAULT_DELTA,
            policies: vec![RebalanceMode::A0],
            structures: vec![Structure::Tree],
            trials: 1,
            seed: 0,
            time_limit: None,
            prune_subtrees: false,
            threads: 1,
        }
    }
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |m: &str| Err(BenchError::InvalidSpec(m.to_string()));
        if self.n == 0 {
            return bad("n must be at least 1");
        }
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.threads == 0 {
            return bad("threads must be at least 1");
        }
        if self.structures.is_empty() {
            return bad("no structure selected");
        }
        if self.structures.contains(&Structure::Tree) && self.policies.is_empty() {
            return bad("no rebalance policy selected");
        }
        GeneratorConfig::new(self.n, self.mu, self.seed)
            .map_err(|e| BenchError::InvalidSpec(e.to_string()))?;
        RebalancePolicy::new(RebalanceMode::A0)
            .with_delta(self.delta)
            .map_err(|e| BenchError::InvalidSpec(e.to_string()))?;
        Ok(())
    }

    /// Seed of trial `trial`.
    pub fn trial_seed(&self, trial: usize) -> u64 {
        self.seed.wrapping_add(trial as u64)
    }

    fn runs(&self) -> Vec<(Structure, Option<RebalanceMode>)> {
        let mut out = Vec::new();
        for &s in &self.structures {
            match s {
                Structure::Tree => out.extend(self.policies.iter().map(|&p| (s, Some(p)))),
                Structure::List => out.push((s, None)),
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub structure: String,
    pub policy: String,
    pub n: usize,
    pub mu: f64,
    pub seed: u64,
    pub elapsed_ms: f64,
    pub final_depth: usize,
    pub final_nodes: usize,
    pub inserts_processed: usize,
}

impl ResultRecord {
    pub fn timed_out(&self) -> bool {
        self.inserts_processed < self.n
    }
}

/// A trial whose structures ended with different sets.
#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch {
    pub seed: u64,
    pub reference: String,
    pub other: String,
}

#[derive(Clone, Debug, Default)]
pub struct RunOutput {
    pub records: Vec<ResultRecord>,
    /// Canonical stored set of the first run of the first trial.
    pub sample_set: Vec<ParetoElement>,
    pub mismatches: Vec<Mismatch>,
}

/// The complete insertion stream of one trial.
pub fn generate_stream(n: usize, mu: f64, seed: u64) -> Result<Vec<ParetoElement>, BenchError> {
    let cfg = GeneratorConfig::new(n, mu, seed).map_err(|e| BenchError::InvalidSpec(e.to_string()))?;
    Ok(GeneratorState::new(cfg).flatten().collect())
}

struct Timed {
    elapsed: Duration,
    processed: usize,
}

fn feed<S: NondominatedStore>(store: &mut S, stream: &[ParetoElement], limit: Option<Duration>) -> Timed {
    let start = Instant::now();
    let mut processed = 0;
    for chunk in stream.chunks(256) {
        for e in chunk {
            store.insert(*e);
        }
        processed += chunk.len();
        if limit.is_some_and(|l| start.elapsed() > l) {
            break;
        }
    }
    Timed {
        elapsed: start.elapsed(),
        processed,
    }
}

struct TrialOutput {
    records: Vec<ResultRecord>,
    sets: Vec<Option<Vec<ParetoElement>>>,
}

fn run_trial(spec: &ExperimentSpec, trial: usize) -> Result<TrialOutput, BenchError> {
    let seed = spec.trial_seed(trial);
    let stream = generate_stream(spec.n, spec.mu, seed)?;
    let mut out = TrialOutput {
        records: Vec::new(),
        sets: Vec::new(),
    };
    for (structure, mode) in spec.runs() {
        let (timed, depth, nodes, set) = match mode {
            Some(mode) => {
                let policy = RebalancePolicy::new(mode)
                    .with_delta(spec.delta)
                    .map_err(|e| BenchError::InvalidSpec(e.to_string()))?;
                let mut tree = NdTree::new(policy).with_subtree_pruning(spec.prune_subtrees);
                let timed = feed(&mut tree, &stream, spec.time_limit);
                let stats = tree.stats();
                (timed, stats.depth, stats.node_count, tree.nondominated_set()?)
            }
            None => {
                let mut list = NdList::new();
                let timed = feed(&mut list, &stream, spec.time_limit);
                (timed, 0, list.len(), list.nondominated_set()?)
            }
        };
        let complete = timed.processed == stream.len();
        out.records.push(ResultRecord {
            structure: structure.name().to_string(),
            policy: mode.map_or("none", RebalanceMode::name).to_string(),
            n: spec.n,
            mu: spec.mu,
            seed,
            elapsed_ms: timed.elapsed.as_secs_f64() * 1e3,
            final_depth: depth,
            final_nodes: nodes,
            inserts_processed: timed.processed,
        });
        out.sets.push(complete.then_some(set));
    }
    Ok(out)
}

fn label(r: &ResultRecord) -> String {
    format!("{}/{}", r.structure, r.policy)
}

/// Runs every (trial, structure, policy) combination. Records come back in
/// trial order whatever the thread count.
pub fn run(spec: &ExperimentSpec) -> Result<RunOutput, BenchError> {
    spec.validate()?;
    let threads = spec.threads.min(spec.trials);
    let mut trials: Vec<Option<Result<TrialOutput, BenchError>>> =
        (0..spec.trials).map(|_| None).collect();
    std::thread::scope(|scope| {
        let chunks: Vec<_> = trials
            .chunks_mut(spec.trials.div_ceil(threads))
            .enumerate()
            .map(|(c, slots)| {
                let first = c * spec.trials.div_ceil(threads);
                scope.spawn(move || {
                    for (i, slot) in slots.iter_mut().enumerate() {
                        *slot = Some(run_trial(spec, first + i));
                    }
                })
            })
            .collect();
        for h in chunks {
            h.join().expect("trial thread panicked");
        }
    });

    let mut out = RunOutput::default();
    for (trial, result) in trials.into_iter().enumerate() {
        let t = result.expect("every trial ran")?;
        if trial == 0 {
            out.sample_set = t.sets.iter().flatten().next().cloned().unwrap_or_default();
        }
        // compare every completed run against the first completed one
        let mut completed = t.records.iter().zip(&t.sets).filter_map(|(r, s)| s.as_ref().map(|s| (r, s)));
        if let Some((ref_rec, ref_set)) = completed.next() {
            for (rec, set) in completed {
                if !sets_match(ref_set, set, SET_TOLERANCE) {
                    out.mismatches.push(Mismatch {
                        seed: rec.seed,
                        reference: label(ref_rec),
                        other: label(rec),
                    });
                }
            }
        }
        out.records.extend(t.records);
    }
    Ok(out)
}

pub fn write_records(path: &Path, records: &[ResultRecord]) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(File::create(path)?);
    if records.is_empty() {
        w.write_record(RESULTS_HEADER.split(','))?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records(path: &Path) -> Result<Vec<ResultRecord>, BenchError> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}

pub fn export_set(path: &Path, set: &[ParetoElement]) -> Result<(), BenchError> {
    let f = std::io::BufWriter::new(File::create(path)?);
    ndtree::io::write_set(f, set)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(structures: Vec<Structure>) -> ExperimentSpec {
        ExperimentSpec {
            n: 300,
            mu: 1.0,
            policies: RebalanceMode::ALL.to_vec(),
            structures,
            trials: 3,
            seed: 11,
            ..ExperimentSpec::default()
        }
    }

    #[test]
    fn one_record_per_trial_and_run() {
        let out = run(&small(vec![Structure::Tree, Structure::List])).unwrap();
        assert_eq!(out.records.len(), 3 * 6);
        assert!(out.mismatches.is_empty());
        assert_eq!(out.records[0].seed, 11);
        assert_eq!(out.records[17].seed, 13);
        assert_eq!(out.records[5].policy, "none");
        assert!(out.records.iter().all(|r| r.inserts_processed == 300));
        assert!(!out.sample_set.is_empty());
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let a = run(&small(vec![Structure::Tree])).unwrap();
        let b = run(&ExperimentSpec {
            threads: 2,
            ..small(vec![Structure::Tree])
        })
        .unwrap();
        let strip = |o: &RunOutput| {
            o.records
                .iter()
                .map(|r| (r.seed, r.policy.clone(), r.final_nodes, r.final_depth))
                .collect::<Vec<_>>()
        };
        assert_eq!(strip(&a), strip(&b));
    }

    #[test]
    fn invalid_specs_are_rejected() {
        for spec in [
            ExperimentSpec { n: 0, ..ExperimentSpec::default() },
            ExperimentSpec { trials: 0, ..ExperimentSpec::default() },
            ExperimentSpec { delta: 1.5, ..ExperimentSpec::default() },
            ExperimentSpec { mu: -1.0, ..ExperimentSpec::default() },
            ExperimentSpec { policies: vec![], ..ExperimentSpec::default() },
        ] {
            assert!(matches!(run(&spec), Err(BenchError::InvalidSpec(_))), "{spec:?}");
        }
    }

    #[test]
    fn time_limit_marks_partial_runs() {
        let spec = ExperimentSpec {
            n: 5_000,
            mu: 0.0,
            structures: vec![Structure::List],
            time_limit: Some(Duration::ZERO),
            ..ExperimentSpec::default()
        };
        let out = run(&spec).unwrap();
        assert!(out.records[0].timed_out());
        assert_eq!(out.records[0].inserts_processed, 256);
    }
}
