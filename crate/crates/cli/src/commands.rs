use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::Context;
use paramquant::oned::optimal_height_curve;
use paramquant::{
    lloyd_best_of, n_level_optimum, sweep, LloydReport, LloydVariant, SampleGrid, SWEEP_CSV_HEADER,
};
use serde::Serialize;

use crate::scenario::Scenario;
use crate::CliError;

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn join(values: &[f64]) -> String {
    values.iter().map(f64::to_string).collect::<Vec<_>>().join(" ")
}

pub fn solve1d(length: f64, levels: usize, gamma: f64, json: Option<&Path>) -> Result<(), CliError> {
    if !(length > 0.0 && length.is_finite()) {
        return Err(CliError::Usage(format!("--A must be positive, got {length}")));
    }
    if levels == 0 {
        return Err(CliError::Usage("--N must be at least 1".into()));
    }
    if !(gamma >= 1.0 && gamma.is_finite()) {
        return Err(CliError::Usage(format!("--gamma must be >= 1, got {gamma}")));
    }
    let opt = n_level_optimum(levels, length, gamma).map_err(anyhow::Error::from)?;
    println!("points:     {}", join(&opt.points));
    println!("height:     {}", opt.height);
    println!("boundaries: {}", join(&opt.boundaries));
    println!("distortion: {}", opt.distortion);
    if let Some(path) = json {
        write_json(path, &opt)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct RunSummary<'a> {
    variant: LloydVariant,
    seed: u64,
    best_index: usize,
    final_distortion: f64,
    iterations: usize,
    termination: paramquant::Termination,
    reseeds: &'a [paramquant::Reseed],
    restart_finals: &'a [f64],
}

pub struct LloydArgs {
    pub scenario: PathBuf,
    pub variant: Option<LloydVariant>,
    pub seeds: Option<usize>,
    pub resolution: Option<usize>,
    pub out: Option<PathBuf>,
}

pub fn lloyd(args: LloydArgs) -> Result<(), CliError> {
    let scenario = Scenario::load(&args.scenario)?;
    let mut config = scenario.lloyd.clone();
    if let Some(v) = args.variant {
        config.variant = v;
    }
    if let Some(k) = args.seeds {
        config.seeds = k;
    }
    if args.resolution.is_some() {
        config.resolution = args.resolution;
    }
    config.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let out = args.out.unwrap_or(scenario.output);

    let grid = SampleGrid::new(&scenario.density, config.resolution_for(&scenario.region))
        .map_err(anyhow::Error::from)?;
    let grid = Arc::new(grid);
    let best = lloyd_best_of(&grid, scenario.n, &scenario.params, &config).map_err(anyhow::Error::from)?;
    let report: &LloydReport = &best.best;

    fs::create_dir_all(&out).with_context(|| format!("cannot create {}", out.display()))?;
    write_json(&out.join("quantizer.json"), &report.quantizer)?;
    write_json(
        &out.join("report.json"),
        &RunSummary {
            variant: config.variant,
            seed: config.seed + best.best_index as u64,
            best_index: best.best_index,
            final_distortion: report.final_distortion(),
            iterations: report.iterations,
            termination: report.termination,
            reseeds: &report.reseeds,
            restart_finals: &best.finals,
        },
    )?;
    let mut w = create(&out.join("trace.csv"))?;
    report.write_trace_csv(&mut w).context("writing trace.csv")?;
    w.flush()?;
    let partition = grid.partition(&report.quantizer, &scenario.params);
    let mut w = create(&out.join("partition.csv"))?;
    partition.write_csv(&mut w).context("writing partition.csv")?;
    w.flush()?;
    let mut w = create(&out.join("partition.ppm"))?;
    partition.write_ppm(&mut w).context("writing partition.ppm")?;
    w.flush()?;

    println!(
        "Lloyd-{:?}: final distortion {} after {} iterations (best of {} restarts)",
        config.variant,
        report.final_distortion(),
        report.iterations,
        best.finals.len()
    );
    println!("results in {}", out.display());
    Ok(())
}

pub struct SweepArgs {
    pub scenario: PathBuf,
    pub alphas: Vec<f64>,
    pub ns: Vec<usize>,
    pub rd: usize,
    pub seeds: Option<usize>,
    pub resolution: Option<usize>,
    pub out: Option<PathBuf>,
}

pub fn sweep_cmd(args: SweepArgs) -> Result<(), CliError> {
    if args.alphas.is_empty() {
        return Err(CliError::Usage("--alphas needs at least one value".into()));
    }
    if let Some(a) = args.alphas.iter().find(|a| !(**a >= 1.0 && a.is_finite())) {
        return Err(CliError::Usage(format!("path-loss exponents must be >= 1, got {a}")));
    }
    if args.ns.contains(&0) {
        return Err(CliError::Usage("every N must be at least 1".into()));
    }
    if args.rd == 0 {
        return Err(CliError::Usage("--rd must be at least 1".into()));
    }
    let scenario = Scenario::load(&args.scenario)?;
    let ns = if args.ns.is_empty() { vec![scenario.n] } else { args.ns };
    let mut config = scenario.lloyd.clone();
    if let Some(k) = args.seeds {
        config.seeds = k;
    }
    if args.resolution.is_some() {
        config.resolution = args.resolution;
    }
    config.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let out = args.out.unwrap_or(scenario.output);
    fs::create_dir_all(&out).with_context(|| format!("cannot create {}", out.display()))?;

    let gammas: Vec<f64> = args.alphas.iter().map(|a| (a + 1.0) / 2.0).collect();
    let rows = sweep(&scenario.density, &gammas, &ns, scenario.params.beta, &config, args.rd)
        .map_err(anyhow::Error::from)?;
    let mut w = create(&out.join("sweep.csv"))?;
    writeln!(w, "{SWEEP_CSV_HEADER}")?;
    println!("{SWEEP_CSV_HEADER}");
    for row in &rows {
        let line = row.csv_line();
        writeln!(w, "{line}")?;
        println!("{line}");
    }
    w.flush()?;

    if let paramquant::TargetRegion::Interval { length } = scenario.region {
        let mut w = create(&out.join("height_curve.csv"))?;
        writeln!(w, "alpha,gamma,N,h_star,bound,distortion")?;
        for &n in &ns {
            for p in optimal_height_curve(n, length, &args.alphas).map_err(anyhow::Error::from)? {
                writeln!(w, "{},{},{},{},{},{}", p.alpha, p.gamma, n, p.height, p.bound, p.distortion)?;
            }
        }
        w.flush()?;
    }
    println!("results in {}", out.display());
    Ok(())
}
