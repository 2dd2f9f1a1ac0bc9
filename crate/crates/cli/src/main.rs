//! `ollp` — generate, solve, validate, measure and render open loop layout
//! problems.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage or input error,
//! 3 render refused an infeasible layout.

mod files;
mod render;

use std::fs;
use std::path::PathBuf;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use files::LayoutFile;
use ollp_core::distance::evaluate_layout;
use ollp_core::encoding::Chromosome;
use ollp_core::metaheuristics::{run_experiment, Algo, OptimizerConfig};
use ollp_core::metrics::{layout_metrics, summarize};
use ollp_core::validator::{check_node_coordinates, check_non_overlap};
use ollp_core::{decode, EvalConfig, Instance};

#[derive(Parser)]
#[command(name = "ollp", version, about = "Open loop layout optimization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance file.
    Gen(GenArgs),
    /// Optimize an instance and write traces, a summary and the best layout.
    Solve(SolveArgs),
    /// Check a layout file against the non-overlap constraints.
    Validate(ValidateArgs),
    /// Compute objective and quality metrics for a layout file.
    Metrics(MetricsArgs),
    /// Render a layout file to SVG.
    Render(RenderArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Number of cells.
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Instance name; defaults to a generated one.
    #[arg(long)]
    name: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    dim_min: f64,
    #[arg(long, default_value_t = 5.0)]
    dim_max: f64,
    /// Probability that an off-diagonal flow is nonzero.
    #[arg(long, default_value_t = 0.5)]
    flow_density: f64,
    #[arg(long, default_value_t = 1.0)]
    flow_min: f64,
    #[arg(long, default_value_t = 10.0)]
    flow_max: f64,
    /// Output instance file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    /// One of: sga, de, sade, pso.
    #[arg(long)]
    algo: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Population size.
    #[arg(long, default_value_t = 50)]
    pop: usize,
    /// Generation budget.
    #[arg(long, default_value_t = 500)]
    gens: usize,
    /// Independent runs with consecutive seeds.
    #[arg(long, default_value_t = 1)]
    repeats: usize,
    /// Wall-clock budget per run, in seconds.
    #[arg(long)]
    time_limit_secs: Option<u64>,
    /// Output directory for traces, summary and the best layout.
    #[arg(long)]
    out: PathBuf,
    /// Override the feasibility buffer (length units).
    #[arg(long)]
    buffer: Option<f64>,
    /// Override the unreachable-door penalty (length units).
    #[arg(long)]
    penalty: Option<f64>,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    layout: PathBuf,
}

#[derive(Args)]
struct MetricsArgs {
    #[arg(long)]
    layout: PathBuf,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    buffer: Option<f64>,
    #[arg(long)]
    penalty: Option<f64>,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    layout: PathBuf,
    /// Output SVG path.
    #[arg(long)]
    out: PathBuf,
    /// Draw the shortest door-to-door path of every nonzero flow.
    #[arg(long)]
    show_paths: bool,
    #[arg(long)]
    buffer: Option<f64>,
}

fn main() {
    let cli = Cli::parse();
    init_thread_pool();
    let code = match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            2
        }
    };
    std::process::exit(code);
}

/// `OLLP_THREADS` caps the fitness-evaluation worker pool.
fn init_thread_pool() {
    if let Ok(value) = std::env::var("OLLP_THREADS") {
        if let Ok(threads) = value.parse::<usize>() {
            if threads >= 1 {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global()
                    .ok();
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Validate(args) => cmd_validate(args),
        Command::Metrics(args) => cmd_metrics(args),
        Command::Render(args) => cmd_render(args),
    }
}

fn eval_config(instance: &Instance, buffer: Option<f64>, penalty: Option<f64>) -> Result<EvalConfig> {
    let mut config = EvalConfig::for_instance(instance);
    if let Some(b) = buffer {
        if !(b >= 0.0 && b.is_finite()) {
            bail!("--buffer must be non-negative and finite");
        }
        config.buffer = b;
    }
    if let Some(p) = penalty {
        if !(p >= 0.0 && p.is_finite()) {
            bail!("--penalty must be non-negative and finite");
        }
        config.unreachable_penalty = p;
    }
    Ok(config)
}

fn cmd_gen(args: GenArgs) -> Result<i32> {
    if args.n < 1 {
        bail!("--n must be at least 1");
    }
    if !(args.dim_min > 0.0 && args.dim_max >= args.dim_min) {
        bail!("dimension range must satisfy 0 < dim-min <= dim-max");
    }
    if !(0.0..=1.0).contains(&args.flow_density) {
        bail!("--flow-density must lie in [0, 1]");
    }
    if !(args.flow_min >= 0.0 && args.flow_max >= args.flow_min) {
        bail!("flow range must satisfy 0 <= flow-min <= flow-max");
    }
    let mut instance = Instance::generate(
        args.n,
        args.seed,
        (args.dim_min, args.dim_max),
        args.flow_density,
        (args.flow_min, args.flow_max),
    );
    if let Some(name) = args.name {
        instance.name = name;
    }
    instance.save(&args.out)?;
    println!("wrote {} (n={})", args.out.display(), args.n);
    Ok(0)
}

fn cmd_solve(args: SolveArgs) -> Result<i32> {
    let instance = Instance::load(&args.instance)?;
    let algo = Algo::from_name(&args.algo)
        .ok_or_else(|| anyhow!("unknown algorithm {:?} (expected sga, de, sade or pso)", args.algo))?;
    if args.repeats < 1 {
        bail!("--repeats must be at least 1");
    }
    let eval_cfg = eval_config(&instance, args.buffer, args.penalty)?;
    let config = OptimizerConfig {
        algo,
        pop_size: args.pop,
        max_generations: args.gens,
        seed: args.seed,
        time_limit: args.time_limit_secs.map(Duration::from_secs),
    };
    config.validate().map_err(|e| anyhow!("invalid configuration: {e}"))?;

    fs::create_dir_all(&args.out)
        .with_context(|| format!("failed to create {}", args.out.display()))?;

    let traces = run_experiment(&instance, &eval_cfg, &config, args.repeats)
        .map_err(|e| anyhow!("invalid configuration: {e}"))?;

    let algo_name = config.algo.name();
    for trace in &traces {
        let path = args.out.join(format!("trace_{algo_name}_{}.csv", trace.seed));
        fs::write(&path, trace.trace_csv())
            .with_context(|| format!("failed to write {}", path.display()))?;
    }

    let mut summary = String::from("instance,algo,seed,best,mean_gen_time_ms,evaluations\n");
    for trace in &traces {
        summary.push_str(&format!(
            "{},{},{},{},{:.3},{}\n",
            instance.name,
            algo_name,
            trace.seed,
            trace.best_fitness,
            trace.mean_generation_ms(),
            trace.evaluations
        ));
    }
    fs::write(args.out.join("summary.csv"), summary)?;

    let best = traces
        .iter()
        .min_by(|a, b| a.best_fitness.partial_cmp(&b.best_fitness).unwrap())
        .expect("at least one trace");
    let layout = decode(&Chromosome::new(best.best_genes.clone()), &instance);
    LayoutFile::from_layout(&instance, &layout, Some(algo_name.to_string()), Some(best.seed))
        .save(&args.out.join("best_layout.json"))?;

    let row = summarize(&instance.name, algo_name, &traces);
    println!("{} {}: {}", row.instance, row.algo, row.mean_min());
    Ok(0)
}

fn cmd_validate(args: ValidateArgs) -> Result<i32> {
    let file = LayoutFile::load(&args.layout)?;
    let layout = file.to_layout()?;
    let tol = file.instance.overlap_tol();
    let mut report = check_non_overlap(&layout, tol);
    report
        .violations
        .extend(check_node_coordinates(&layout).violations);
    print!("{report}");
    Ok(if report.is_empty() { 0 } else { 1 })
}

fn cmd_metrics(args: MetricsArgs) -> Result<i32> {
    let file = LayoutFile::load(&args.layout)?;
    let layout = file.to_layout()?;
    let eval_cfg = eval_config(&file.instance, args.buffer, args.penalty)?;
    let objective = evaluate_layout(&layout, &file.instance.flows, &eval_cfg);
    let record = layout_metrics(&layout, objective);
    let csv = format!(
        "instance,algo,seed,objective,perimeter_eff,hull_eff\n{},{},{},{},{},{}\n",
        file.instance.name,
        file.algo.as_deref().unwrap_or("-"),
        file.seed.map_or("-".to_string(), |s| s.to_string()),
        record.objective,
        record.perimeter_efficiency,
        record.hull_efficiency
    );
    match args.out {
        Some(path) => fs::write(&path, csv)
            .with_context(|| format!("failed to write {}", path.display()))?,
        None => print!("{csv}"),
    }
    Ok(0)
}

fn cmd_render(args: RenderArgs) -> Result<i32> {
    let file = LayoutFile::load(&args.layout)?;
    let layout = file.to_layout()?;
    let report = check_non_overlap(&layout, file.instance.overlap_tol());
    if !report.is_empty() {
        eprint!("refusing to render an infeasible layout:\n{report}");
        return Ok(3);
    }
    let eval_cfg = eval_config(&file.instance, args.buffer, None)?;
    let svg = render::render_svg(&file.instance, &layout, eval_cfg.buffer, args.show_paths);
    fs::write(&args.out, svg)
        .with_context(|| format!("failed to write {}", args.out.display()))?;
    println!("wrote {}", args.out.display());
    Ok(0)
}
