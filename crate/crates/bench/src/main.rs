use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, ValueEnum};
use ndtree::RebalanceMode;
use ndtree_bench::{emit_plot, export_set, run, summarize, write_records, ExperimentSpec, Structure};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StructureArg {
    Tree,
    List,
    Both,
}

/// Feed generated biobjective streams to the nondominated tree and the list
/// baseline and record timings, depths and sizes.
#[derive(Debug, Parser)]
#[command(name = "ndtree-bench", version)]
struct Args {
    /// Elements per trial.
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    /// Total parabola drift over a trial.
    #[arg(long, default_value_t = 0.0)]
    mu: f64,
    /// Balance slack, in (0, 1).
    #[arg(long, default_value_t = 0.3)]
    delta: f64,
    /// Rebalance policy (a0..a4); repeat for several.
    #[arg(long = "policy", value_parser = parse_mode, default_values_t = vec![RebalanceMode::A0])]
    policies: Vec<RebalanceMode>,
    #[arg(long, value_enum, default_value_t = StructureArg::Tree)]
    structure: StructureArg,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// Seed of the first trial; trial i uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Stop feeding a run after this many seconds.
    #[arg(long)]
    time_limit_s: Option<f64>,
    #[arg(long, default_value = "results.csv")]
    out: PathBuf,
    /// Write the first trial's final set as CSV.
    #[arg(long)]
    export_set: Option<PathBuf>,
    /// Write an SVG of the first trial's final set.
    #[arg(long)]
    plot: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Drop subtrees hidden behind a dominated node's ideal point.
    #[arg(long)]
    prune_subtrees: bool,
}

fn parse_mode(s: &str) -> Result<RebalanceMode, String> {
    s.parse().map_err(|_| format!("unknown policy `{s}` (expected a0..a4)"))
}

fn spec_from(args: &Args) -> Result<ExperimentSpec, String> {
    let time_limit = match args.time_limit_s {
        Some(s) if !(s.is_finite() && s >= 0.0) => return Err(format!("bad time limit {s}")),
        Some(s) => Some(Duration::from_secs_f64(s)),
        None => None,
    };
    let structures = match args.structure {
        StructureArg::Tree => vec![Structure::Tree],
        StructureArg::List => vec![Structure::List],
        StructureArg::Both => vec![Structure::Tree, Structure::List],
    };
    let mut policies = args.policies.clone();
    policies.dedup();
    Ok(ExperimentSpec {
        n: args.n,
        mu: args.mu,
        delta: args.delta,
        policies,
        structures,
        trials: args.trials,
        seed: args.seed,
        time_limit,
        prune_subtrees: args.prune_subtrees,
        threads: args.threads,
    })
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let spec = match spec_from(&args).and_then(|s| s.validate().map(|_| s).map_err(|e| e.to_string())) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };

    let out = match run(&spec) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = write_records(&args.out, &out.records) {
        eprintln!("error: writing {}: {e}", args.out.display());
        return ExitCode::from(2);
    }
    if let Some(path) = &args.export_set {
        if let Err(e) = export_set(path, &out.sample_set) {
            eprintln!("error: writing {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if let Some(path) = &args.plot {
        if let Err(e) = emit_plot(&out.sample_set, path) {
            eprintln!("error: writing {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }

    for row in summarize(&out.records) {
        println!("{row}");
    }
    let partial = out.records.iter().filter(|r| r.timed_out()).count();
    if partial > 0 {
        println!("{partial} run(s) hit the time limit");
    }
    if !out.mismatches.is_empty() {
        for m in &out.mismatches {
            eprintln!("mismatch: seed {} {} vs {}", m.seed, m.reference, m.other);
        }
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}
