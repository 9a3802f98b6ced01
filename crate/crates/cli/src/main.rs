//! `mimo-se`: analytic evaluation, Monte-Carlo runs, the activity/pilot
//! sweeps, per-cell SE CDFs and the validation suite.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mimo_se::analytic::{
    asymptotic_se, avg_se_lower_bound, avg_sinr_lower_bound, optimal_pilot_length_asymptotic, optimize_pilot_length,
    part_time_sleep_se, sinr_closed_form,
};
use mimo_se::channel::{estimate_sinr_mc, se_per_ue, McOptions, PilotMode};
use mimo_se::experiments::plot::{line_chart, Series};
use mimo_se::experiments::{
    run_activity_sweep, run_cdf_experiment, run_pilot_sweep, run_validation_suite, save, save_json, write_cdf_csv,
    write_sweep_csv, CdfConditioning, CdfOptions, DeploymentKind, SweepOptions, SweepResult, ValidationPlan,
};
use mimo_se::geometry::{sample_typical_scene, PlacementMode, SceneOptions};
use mimo_se::parallel::chunk_rng;
use mimo_se::Config;
use serde_json::json;

#[derive(Parser)]
#[command(name = "mimo-se", version, about = "Uplink SE of multi-cell massive MIMO with intermittent activity")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Average-SINR bound, its SE, the asymptotic limit and the sleep baseline.
    Analytic(Common),
    /// Monte-Carlo SINR of one UE in a random typical-UE scene.
    Mc(McArgs),
    /// SE against the activity probability, B optimised per point.
    SweepActivity(ActivityArgs),
    /// SE against the pilot length.
    SweepPilot(PilotArgs),
    /// Empirical CDF of the per-cell SE, random or hexagonal layouts.
    Cdf(CdfArgs),
    /// Optimal pilot lengths for the bound and the asymptotic SE.
    OptimizeB(Common),
    /// Run the acceptance checks; exits nonzero if any fails.
    Validate(ValidateArgs),
}

#[derive(Args, Clone)]
struct Common {
    /// TOML file with the system parameters (defaults to the reference setting).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Worker threads; 1 runs single-threaded, 0 uses every core.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Also write SVG figures.
    #[arg(long)]
    plot: bool,
    /// rho / sigma2 in dB.
    #[arg(long)]
    snr_db: Option<f64>,
    /// Antenna counts, comma separated (defaults to the config's M).
    #[arg(long, value_delimiter = ',')]
    antennas: Vec<usize>,
    #[arg(long)]
    activity: Option<f64>,
    #[arg(long)]
    pilot_len: Option<usize>,
}

impl Common {
    fn config(&self) -> Result<Config> {
        let mut cfg = match &self.config {
            Some(p) => Config::load(p).with_context(|| format!("reading {}", p.display()))?,
            None => Config::reference(),
        };
        if let Some(db) = self.snr_db {
            cfg = cfg.with_snr_db(db);
        }
        if let Some(a) = self.activity {
            cfg = cfg.with_activity(a);
        }
        if let Some(b) = self.pilot_len {
            cfg = cfg.with_pilot_len(b);
        }
        Ok(cfg.validate_ignoring_pilot()?)
    }

    fn antennas(&self, cfg: &Config, fallback: &[usize]) -> Vec<usize> {
        if !self.antennas.is_empty() {
            self.antennas.clone()
        } else if fallback.is_empty() || self.config.is_some() {
            vec![cfg.antennas]
        } else {
            fallback.to_vec()
        }
    }

    fn out_dir(&self) -> Result<&Path> {
        fs::create_dir_all(&self.out).with_context(|| format!("creating {}", self.out.display()))?;
        Ok(&self.out)
    }
}

#[derive(Args, Clone)]
struct SceneArgs {
    #[arg(long, default_value = "voronoi")]
    placement: PlacementMode,
    /// Simulation window radius in km (default 10 cell radii, 3 for `mc`).
    #[arg(long)]
    window: Option<f64>,
}

#[derive(Args)]
struct McArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    scene: SceneArgs,
    #[arg(long, value_enum, default_value_t = ModeArg::Both)]
    mode: ModeArg,
    #[arg(long, default_value_t = 1000)]
    blocks: usize,
    /// Tagged UE index inside the tagged cell.
    #[arg(long, default_value_t = 0)]
    ue: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Sync,
    Async,
    Both,
}

impl ModeArg {
    fn modes(self) -> Vec<PilotMode> {
        match self {
            ModeArg::Sync => vec![PilotMode::Sync],
            ModeArg::Async => vec![PilotMode::Async],
            ModeArg::Both => PilotMode::ALL.to_vec(),
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    scene: SceneArgs,
    /// Random scenes behind the Monte-Carlo column.
    #[arg(long, default_value_t = 200)]
    scenes: usize,
    /// Use 10^4 scenes.
    #[arg(long)]
    full_scale: bool,
}

impl SweepArgs {
    fn options(&self, common: &Common) -> SweepOptions {
        SweepOptions {
            scenes: if self.full_scale { 10_000 } else { self.scenes },
            workers: common.workers,
            placement: self.scene.placement,
            window_radius: self.scene.window,
            ..SweepOptions::new(common.seed)
        }
    }
}

#[derive(Args)]
struct ActivityArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    sweep: SweepArgs,
    /// Activity grid, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0")]
    activities: Vec<f64>,
}

#[derive(Args)]
struct PilotArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    sweep: SweepArgs,
    /// Pilot grid as `lo:hi[:step]` or a comma-separated list (defaults to K..=200).
    #[arg(long)]
    pilots: Option<String>,
}

#[derive(Args)]
struct CdfArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    scene: SceneArgs,
    #[arg(long, value_enum, default_value_t = DeploymentArg::Both)]
    deployment: DeploymentArg,
    #[arg(long, default_value_t = 300)]
    realizations: usize,
    /// Use 10^4 realisations.
    #[arg(long)]
    full_scale: bool,
    #[arg(long, value_enum, default_value_t = ConditioningArg::TypicalCell)]
    conditioning: ConditioningArg,
    /// Rings of interfering hexagons around the tagged one.
    #[arg(long, default_value_t = 2)]
    hex_tiers: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum DeploymentArg {
    Random,
    Hex,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConditioningArg {
    TypicalCell,
    WindowCells,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Reduced Monte-Carlo budgets.
    #[arg(long)]
    quick: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let r = match cli.cmd {
        Cmd::Analytic(c) => analytic(&c).map(|_| true),
        Cmd::Mc(a) => mc(&a).map(|_| true),
        Cmd::SweepActivity(a) => sweep_activity(&a).map(|_| true),
        Cmd::SweepPilot(a) => sweep_pilot(&a).map(|_| true),
        Cmd::Cdf(a) => cdf(&a).map(|_| true),
        Cmd::OptimizeB(c) => optimize_b(&c).map(|_| true),
        Cmd::Validate(a) => validate(&a),
    };
    match r {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn analytic(c: &Common) -> Result<()> {
    let cfg = c.config()?;
    let k = cfg.ues_per_cell as f64;
    let mut rows = Vec::new();
    for m in c.antennas(&cfg, &[]) {
        let cfg = cfg.with_antennas(m).validate()?;
        let sinr = avg_sinr_lower_bound(&cfg)?;
        let se = avg_se_lower_bound(&cfg)?;
        let limit = asymptotic_se(&cfg)?;
        let pts = part_time_sleep_se(&cfg)?;
        println!(
            "M={m} B={} A={}: SINR bound {sinr:.4}, SE/cell {:.4}, limit {:.4}, part-time sleep {:.4}",
            cfg.pilot_len,
            cfg.activity,
            k * se,
            k * limit,
            k * pts
        );
        rows.push(json!({
            "antennas": m,
            "sinr_bound": sinr,
            "se_cell_bound": k * se,
            "se_cell_limit": k * limit,
            "se_cell_pts": k * pts,
            "config": cfg,
            "config_hash": cfg.hash_hex(),
        }));
    }
    save_json(c.out_dir()?.join("analytic.json"), &rows)?;
    Ok(())
}

fn optimize_b(c: &Common) -> Result<()> {
    let cfg = c.config()?;
    let opt = optimal_pilot_length_asymptotic(&cfg)?;
    println!("asymptotic: B* = {:.4}, integer {}", opt.continuous, opt.integer);
    let mut bound = Vec::new();
    for m in c.antennas(&cfg, &[]) {
        let b = optimize_pilot_length(&cfg.with_antennas(m))?;
        println!("bound, M={m}: B = {b}");
        bound.push(json!({ "antennas": m, "pilot_len": b }));
    }
    save_json(
        c.out_dir()?.join("optimize_b.json"),
        &json!({ "asymptotic": opt, "bound": bound, "config": cfg, "config_hash": cfg.hash_hex() }),
    )?;
    Ok(())
}

fn mc(a: &McArgs) -> Result<()> {
    let c = &a.common;
    let mut cfg = c.config()?;
    if let Some(&m) = c.antennas.first() {
        cfg = cfg.with_antennas(m);
    }
    let cfg = cfg.validate()?;
    let window = a.scene.window.unwrap_or(3.0 * cfg.cell_scale());
    let scene = sample_typical_scene(
        &mut chunk_rng(c.seed, u64::MAX),
        &cfg,
        &SceneOptions::new(a.scene.placement).with_window(window),
    );
    let dep = scene.to_deployment(&cfg)?;
    let closed = sinr_closed_form(&dep, &cfg, a.ue)?;
    println!(
        "scene: {} cells, window {window} km; closed form SINR {:.4} (SE {:.4})",
        dep.num_cells(),
        closed.sinr,
        se_per_ue(closed.sinr, &cfg)
    );
    let mut runs = Vec::new();
    for mode in a.mode.modes() {
        let opts = McOptions::new(a.blocks, c.seed).with_workers(c.workers);
        let est = estimate_sinr_mc(&dep, &cfg, mode, a.ue, &opts)?;
        println!(
            "{mode}: SINR {:.4} ± {:.4} (1 s.e.), SE {:.4}",
            est.breakdown.sinr,
            est.sinr_std_err,
            se_per_ue(est.breakdown.sinr, &cfg)
        );
        runs.push(est);
    }
    save_json(
        c.out_dir()?.join("mc.json"),
        &json!({
            "window_radius": window,
            "n_cells": dep.num_cells(),
            "closed_form": closed,
            "runs": runs,
            "config": cfg,
            "config_hash": cfg.hash_hex(),
        }),
    )?;
    Ok(())
}

fn write_sweep(dir: &Path, stem: &str, r: &SweepResult) -> Result<()> {
    save(dir.join(format!("{stem}.csv")), |buf| write_sweep_csv(r, buf))?;
    save_json(dir.join(format!("{stem}.json")), &r.meta)?;
    Ok(())
}

fn sweep_plot(dir: &Path, name: &str, title: &str, xlabel: &str, results: &[(usize, SweepResult)]) -> Result<()> {
    let labels: Vec<(String, String, String)> = results
        .iter()
        .map(|(m, _)| (format!("bound M={m}"), format!("MC M={m}"), format!("limit M={m}")))
        .collect();
    let mut series = Vec::new();
    for ((_, r), (lb, lm, ll)) in results.iter().zip(&labels) {
        series.push(Series { name: lb, points: r.points.iter().map(|p| (p.axis, p.se_bound)).collect() });
        series.push(Series { name: lm, points: r.points.iter().map(|p| (p.axis, p.se_mc_mean)).collect() });
        if r.axis_name == "pilot_len" {
            series.push(Series {
                name: ll,
                points: r.points.iter().filter_map(|p| Some((p.axis, p.se_limit?))).collect(),
            });
        }
    }
    if let Some((_, r)) = results.first() {
        if r.axis_name == "activity" {
            series.push(Series {
                name: "limit",
                points: r.points.iter().filter_map(|p| Some((p.axis, p.se_limit?))).collect(),
            });
            series.push(Series {
                name: "part-time sleep",
                points: r.points.iter().filter_map(|p| Some((p.axis, p.se_pts?))).collect(),
            });
        }
    }
    fs::write(dir.join(name), line_chart(title, xlabel, "SE per cell [bit/s/Hz]", &series))?;
    Ok(())
}

fn sweep_activity(a: &ActivityArgs) -> Result<()> {
    let c = &a.common;
    let cfg = c.config()?;
    let dir = c.out_dir()?;
    let opts = a.sweep.options(c);
    let mut results = Vec::new();
    for m in c.antennas(&cfg, &[100, 500]) {
        let r = run_activity_sweep(&cfg.with_antennas(m), &a.activities, &opts)?;
        for p in &r.points {
            println!(
                "M={m} A={}: B={} bound {:.3}, MC {:.3} ± {:.3}, limit {:.3}",
                p.axis,
                p.pilot_len,
                p.se_bound,
                p.se_mc_mean,
                p.se_mc_ci,
                p.se_limit.unwrap_or(f64::NAN)
            );
        }
        write_sweep(dir, &format!("sweep_activity_M{m}"), &r)?;
        results.push((m, r));
    }
    if c.plot {
        sweep_plot(dir, "sweep_activity.svg", "SE against activity", "activity A", &results)?;
    }
    Ok(())
}

fn parse_grid(text: &str) -> Result<Vec<usize>> {
    let parts: Vec<&str> = text.split(':').collect();
    let grid: Vec<usize> = match parts.as_slice() {
        [list] => list.split(',').map(|s| s.trim().parse()).collect::<Result<_, _>>()?,
        [lo, hi] => (lo.parse()?..=hi.parse()?).collect(),
        [lo, hi, step] => (lo.parse()?..=hi.parse()?).step_by(step.parse::<usize>()?.max(1)).collect(),
        _ => bail!("pilot grid must be lo:hi[:step] or a list"),
    };
    if grid.is_empty() {
        bail!("empty pilot grid");
    }
    Ok(grid)
}

fn sweep_pilot(a: &PilotArgs) -> Result<()> {
    let c = &a.common;
    let mut cfg = c.config()?;
    if c.activity.is_none() && c.config.is_none() {
        cfg = cfg.with_activity(0.5);
    }
    let grid = match &a.pilots {
        Some(s) => parse_grid(s)?,
        None => (cfg.ues_per_cell..=200.min(cfg.block_len)).collect(),
    };
    let dir = c.out_dir()?;
    let opts = a.sweep.options(c);
    let mut results = Vec::new();
    for m in c.antennas(&cfg, &[100, 500]) {
        let r = run_pilot_sweep(&cfg.with_antennas(m), &grid, &opts)?;
        if let Some(am) = r.meta.argmax {
            println!(
                "M={m}: argmax bound B={}, MC B={}, limit B={}",
                am.se_bound, am.se_mc_mean, am.se_limit
            );
        }
        write_sweep(dir, &format!("sweep_pilot_M{m}"), &r)?;
        results.push((m, r));
    }
    if c.plot {
        sweep_plot(dir, "sweep_pilot.svg", "SE against pilot length", "pilot length B", &results)?;
    }
    Ok(())
}

fn cdf(a: &CdfArgs) -> Result<()> {
    let c = &a.common;
    let cfg = c.config()?;
    let dir = c.out_dir()?;
    let kinds = match a.deployment {
        DeploymentArg::Random => vec![DeploymentKind::Random],
        DeploymentArg::Hex => vec![DeploymentKind::Hexagonal],
        DeploymentArg::Both => vec![DeploymentKind::Random, DeploymentKind::Hexagonal],
    };
    let opts = CdfOptions {
        workers: c.workers,
        conditioning: match a.conditioning {
            ConditioningArg::TypicalCell => CdfConditioning::TypicalCell,
            ConditioningArg::WindowCells => CdfConditioning::WindowCells,
        },
        placement: a.scene.placement,
        window_radius: a.scene.window,
        hex_tiers: a.hex_tiers,
        ..CdfOptions::new(if a.full_scale { 10_000 } else { a.realizations }, c.seed)
    };
    let mut curves = Vec::new();
    for m in c.antennas(&cfg, &[100, 500]) {
        for &kind in &kinds {
            let r = run_cdf_experiment(&cfg.with_antennas(m), kind, &opts)?;
            println!(
                "M={m} {kind}: mean {:.3}, p10 {:.3}, p90 {:.3} over {} cells",
                r.mean,
                r.p10,
                r.p90,
                r.values.len()
            );
            let stem = format!("cdf_{kind}_M{m}");
            save(dir.join(format!("{stem}.csv")), |buf| write_cdf_csv(&r, buf))?;
            save_json(
                dir.join(format!("{stem}.json")),
                &json!({
                    "kind": r.kind,
                    "conditioning": r.conditioning,
                    "n": r.values.len(),
                    "mean": r.mean,
                    "p10": r.p10,
                    "p90": r.p90,
                    "seed": r.seed,
                    "options": opts,
                    "config": cfg.with_antennas(m),
                    "config_hash": r.config_hash,
                    "assumptions": r.assumptions,
                }),
            )?;
            curves.push((format!("{kind} M={m}"), r.cdf()));
        }
    }
    if c.plot {
        let series: Vec<Series> = curves.iter().map(|(n, p)| Series { name: n, points: p.clone() }).collect();
        fs::write(dir.join("cdf.svg"), line_chart("CDF of SE per cell", "SE per cell [bit/s/Hz]", "CDF", &series))?;
    }
    Ok(())
}

fn validate(a: &ValidateArgs) -> Result<bool> {
    let mut plan = if a.quick { ValidationPlan::quick(a.seed) } else { ValidationPlan::full(a.seed) };
    plan.workers = a.workers;
    fs::create_dir_all(&a.out)?;
    let t = Instant::now();
    let outcome = run_validation_suite(&plan)?;
    for c in &outcome.checks {
        println!("{}", c.line());
    }
    fs::write(a.out.join("report.json"), outcome.report_json()?)?;
    save_json(a.out.join("timings.json"), &outcome.timings)?;
    for tm in &outcome.timings {
        eprintln!("{:>9} {:8.2} s", tm.criterion, tm.seconds);
    }
    let failed = outcome.failures().count();
    eprintln!(
        "{} checks, {failed} failed, {:.1} s",
        outcome.checks.len(),
        t.elapsed().as_secs_f64()
    );
    Ok(failed == 0)
}
