//! The `robnet` command line. Usage errors exit with 2, domain errors with 1
//! after printing a single `error: ...` line to stderr.
//!
//! `ROBNET_WORKERS` sets the number of worker threads.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::io::{
    build_dataset, convert_pairs, read_edge_list, render_svg, write_edge_list, ConvertOptions,
    CurveTable, DatasetManifest, Recipe,
};
use crate::model::{
    predict, train_with, InputMode, Model, ModelCheckpoint, ModelConfig, TrainConfig,
};
use crate::netgen::{NetworkModel, SizeRange};
use crate::sim::{ground_truth, AttackKind, Measure, Simulation, TheoremChoice};
use crate::stats::{bench_runtime, fmt_g9, prediction_error, significance_sign, EvalReport, InstanceRow, ALPHA};

pub const WORKERS_ENV: &str = "ROBNET_WORKERS";

#[derive(Parser, Debug)]
#[command(name = "robnet", version, about = "Network robustness simulation and SPP-CNN prediction")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a dataset (graphs, ground-truth curves, manifest).
    Gen(GenArgs),
    /// Simulate robustness curves for edge-list files.
    Simulate(SimulateArgs),
    /// Train a checkpoint on a dataset manifest.
    Train(TrainArgs),
    /// Predict curves with a checkpoint.
    Predict(PredictArgs),
    /// Prediction errors and a significance comparison of two methods.
    Eval(EvalArgs),
    /// Time prediction against simulation on a dataset.
    Bench(BenchArgs),
    /// Render a curve CSV as an SVG chart.
    Plot(PlotArgs),
    /// Convert a node-pair file with arbitrary ids to an edge list.
    Convert(ConvertArgs),
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// Recipe JSON file; flags below override nothing when given.
    #[arg(long, conflicts_with = "set")]
    pub recipe: Option<PathBuf>,
    /// Named model set: S1, S2 or S3.
    #[arg(long, default_value = "S1")]
    pub set: String,
    /// Explicit model list (comma separated tags), replacing the set.
    #[arg(long, value_delimiter = ',')]
    pub models: Vec<NetworkModel>,
    #[arg(long)]
    pub directed: bool,
    /// `Na`, `Nb`, `Nc` or `lo-hi`.
    #[arg(long, default_value = "Na")]
    pub size: SizeRange,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    #[arg(long, default_value = "connectivity")]
    pub measure: Measure,
    #[arg(long, default_value = "degree")]
    pub attack: AttackKind,
    #[arg(long, default_value = "auto")]
    pub theorem: TheoremChoice,
    #[arg(long, default_value_t = 10)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    #[arg(long, default_value = "connectivity")]
    pub measure: Measure,
    #[arg(long, default_value = "degree")]
    pub attack: AttackKind,
    #[arg(long, default_value = "auto")]
    pub theorem: TheoremChoice,
    #[arg(long, default_value_t = 1)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Directory for `<stem>.csv` files; stdout when omitted with one input.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TrainArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Selection set; the training set is used when omitted.
    #[arg(long)]
    pub validation: Option<PathBuf>,
    /// `default`, `reduced`, or either with `:<M>`.
    #[arg(long, default_value = "reduced")]
    pub config: String,
    /// Train the fixed-input baseline on matrices resized to this width.
    #[arg(long)]
    pub resize: Option<usize>,
    #[arg(long, default_value_t = 50)]
    pub epochs: usize,
    #[arg(long, default_value_t = 1e-4)]
    pub lr: f32,
    #[arg(long, default_value_t = 8)]
    pub accumulation: usize,
    #[arg(long)]
    pub patience: Option<usize>,
    #[arg(long)]
    pub stop_below: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub eval_every: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct PredictArgs {
    #[arg(long)]
    pub checkpoint: PathBuf,
    /// Predict every manifest entry, writing `r_true,r_pred` CSVs.
    #[arg(long, conflicts_with = "files")]
    pub manifest: Option<PathBuf>,
    pub files: Vec<PathBuf>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// Curve CSVs with both columns: a file or a directory of `*.csv`.
    pub a: PathBuf,
    /// Second method, matched to the first by file name.
    pub b: Option<PathBuf>,
    #[arg(long, default_value = "A")]
    pub label_a: String,
    #[arg(long, default_value = "B")]
    pub label_b: String,
    #[arg(long, default_value_t = ALPHA)]
    pub alpha: f64,
    /// Per-instance CSV output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Summary CSV output.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long)]
    pub checkpoint: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub warmups: usize,
    #[arg(long, default_value_t = 5)]
    pub repetitions: usize,
    /// Simulation theorem for controllability datasets.
    #[arg(long, default_value = "auto")]
    pub theorem: TheoremChoice,
    /// Only the first this many instances.
    #[arg(long)]
    pub limit: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PlotArgs {
    pub csv: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct ConvertArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub directed: bool,
    /// Keep only the largest weakly connected component.
    #[arg(long)]
    pub lcc: bool,
    #[arg(long)]
    pub out: PathBuf,
}

/// Parses `argv` and runs; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Err(e) = configure_workers() {
        eprintln!("error: {e}");
        return 1;
    }
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.to_string().replace('\n', " "));
            1
        }
    }
}

fn configure_workers() -> Result<()> {
    let Ok(v) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .map_err(|_| Error::InvalidConfig(format!("{WORKERS_ENV}={v} is not a count")))?;
    // a second call in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

pub fn execute(cmd: Command) -> Result<()> {
    match cmd {
        Command::Gen(a) => gen(a),
        Command::Simulate(a) => simulate(a),
        Command::Train(a) => train_cmd(a),
        Command::Predict(a) => predict_cmd(a),
        Command::Eval(a) => eval(a),
        Command::Bench(a) => bench(a),
        Command::Plot(a) => plot(a),
        Command::Convert(a) => convert(a),
    }
}

fn gen(a: GenArgs) -> Result<()> {
    let recipe = match &a.recipe {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            serde_json::from_str(&text)?
        }
        None => {
            let mut r = Recipe::named(&a.set)?;
            if !a.models.is_empty() {
                r.models = a.models.clone();
            }
            Recipe {
                directed: a.directed,
                size: a.size,
                count: a.count,
                measure: a.measure,
                attack: a.attack,
                theorem: a.theorem,
                reps: a.reps,
                seed: a.seed,
                ..r
            }
        }
    };
    let m = build_dataset(&recipe, &a.out)?;
    eprintln!("wrote {} instances to {}", m.entries.len(), a.out.display());
    Ok(())
}

fn output_path(dir: &Path, input: &Path) -> PathBuf {
    let stem = input.file_stem().unwrap_or(input.as_os_str());
    dir.join(stem).with_extension("csv")
}

fn simulate(a: SimulateArgs) -> Result<()> {
    if a.out_dir.is_none() && a.files.len() > 1 {
        return Err(Error::InvalidConfig("--out-dir is required for several inputs".into()));
    }
    let sim = Simulation {
        measure: a.measure,
        attack: a.attack,
        theorem: a.theorem,
    };
    let tables = a
        .files
        .par_iter()
        .map(|f| {
            let g = read_edge_list(f)?;
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let c = ground_truth(&g, &sim, a.reps, &mut rng)?;
            Ok(CurveTable::truth(c.into_values()))
        })
        .collect::<Result<Vec<_>>>()?;
    emit_tables(&a.files, &tables, a.out_dir.as_deref())
}

fn emit_tables(inputs: &[PathBuf], tables: &[CurveTable], out_dir: Option<&Path>) -> Result<()> {
    match out_dir {
        None => {
            print!("{}", tables[0].to_csv());
            Ok(())
        }
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            for (f, t) in inputs.iter().zip(tables) {
                t.write(output_path(dir, f))?;
            }
            Ok(())
        }
    }
}

fn train_cmd(a: TrainArgs) -> Result<()> {
    let (manifest, base) = DatasetManifest::read(&a.manifest)?;
    let data = manifest.load_samples(&base)?;
    let validation = match &a.validation {
        Some(p) => {
            let (m, b) = DatasetManifest::read(p)?;
            Some(m.load_samples(&b)?)
        }
        None => None,
    };
    let mut config = ModelConfig::preset(&a.config)?;
    if let Some(width) = a.resize {
        config = config.with_input(InputMode::Resize {
            width,
            seed: a.seed,
        });
    }
    let model = Model::new(config, a.seed)?;
    let cfg = TrainConfig {
        lr: a.lr,
        epochs: a.epochs,
        accumulation: a.accumulation,
        seed: a.seed,
        patience: a.patience,
        stop_below: a.stop_below,
        eval_every: a.eval_every,
        ..Default::default()
    };
    eprintln!(
        "training {} parameters on {} samples",
        model.parameter_count(),
        data.len()
    );
    let start = Instant::now();
    let (ck, _) = train_with(model, &data, validation.as_deref(), &cfg, |s| {
        let xi = s.selection_xi.map(fmt_g9).unwrap_or_else(|| "-".into());
        eprintln!(
            "epoch {} loss {} xi {} elapsed {:.1}s",
            s.epoch,
            fmt_g9(s.loss),
            xi,
            start.elapsed().as_secs_f64()
        );
    })?;
    ck.save(&a.out)?;
    eprintln!(
        "saved {} (best xi {})",
        a.out.display(),
        ck.meta.best_xi.map(fmt_g9).unwrap_or_else(|| "-".into())
    );
    Ok(())
}

fn predict_cmd(a: PredictArgs) -> Result<()> {
    let ck = ModelCheckpoint::load(&a.checkpoint)?;
    if let Some(mpath) = &a.manifest {
        let out_dir = a
            .out_dir
            .as_deref()
            .ok_or_else(|| Error::InvalidConfig("--out-dir is required with --manifest".into()))?;
        let (m, base) = DatasetManifest::read(mpath)?;
        let samples = m.load_samples(&base)?;
        std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
        for (e, s) in m.entries.iter().zip(&samples) {
            let pred = predict(&ck, &s.graph)?;
            CurveTable::both(s.curve.values().to_vec(), pred.into_values())?
                .write(out_dir.join(&e.curve_file))?;
        }
        return Ok(());
    }
    if a.files.is_empty() {
        return Err(Error::InvalidConfig("no input graphs".into()));
    }
    if a.out_dir.is_none() && a.files.len() > 1 {
        return Err(Error::InvalidConfig("--out-dir is required for several inputs".into()));
    }
    let tables = a
        .files
        .par_iter()
        .map(|f| {
            let g = read_edge_list(f)?;
            Ok(CurveTable::prediction(predict(&ck, &g)?.into_values()))
        })
        .collect::<Result<Vec<_>>>()?;
    emit_tables(&a.files, &tables, a.out_dir.as_deref())
}

/// `(name, truth, prediction)` of one curve file.
type CurvePair = (String, Vec<f64>, Vec<f64>);

/// Every CSV under `path`.
fn load_pairs(path: &Path) -> Result<Vec<CurvePair>> {
    let mut files = if path.is_dir() {
        let mut v: Vec<PathBuf> = std::fs::read_dir(path)
            .map_err(|e| Error::io(path, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "csv"))
            .collect();
        v.sort();
        v
    } else {
        vec![path.to_path_buf()]
    };
    if files.is_empty() {
        return Err(Error::Format(format!("no curve CSVs under {}", path.display())));
    }
    files
        .drain(..)
        .map(|f| {
            let t = CurveTable::read(&f)?;
            let (Some(truth), Some(pred)) = (t.truth, t.pred) else {
                return Err(Error::Format(format!(
                    "{} needs both r_true and r_pred",
                    f.display()
                )));
            };
            let name = f.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            Ok((name, truth, pred))
        })
        .collect()
}

fn eval(a: EvalArgs) -> Result<()> {
    let mut report = EvalReport::default();
    let mut push = |label: &str, pairs: &[CurvePair]| -> Result<()> {
        for (name, truth, pred) in pairs {
            report.push(InstanceRow {
                dataset_id: name.trim_end_matches(".csv").to_owned(),
                model: String::new(),
                n: truth.len(),
                measure: String::new(),
                directed: false,
                method: label.to_owned(),
                xi: prediction_error(truth, pred)?,
                runtime: None,
            });
        }
        Ok(())
    };
    let pa = load_pairs(&a.a)?;
    push(&a.label_a, &pa)?;
    let pb = a.b.as_deref().map(load_pairs).transpose()?;
    if let Some(pb) = &pb {
        let names = |p: &[CurvePair]| p.iter().map(|x| x.0.clone()).collect::<Vec<_>>();
        if names(&pa) != names(pb) {
            return Err(Error::Format("the two prediction sets cover different files".into()));
        }
        push(&a.label_b, pb)?;
    }
    if let Some(out) = &a.out {
        std::fs::write(out, report.instances_csv()).map_err(|e| Error::io(out, e))?;
    }
    if let Some(out) = &a.summary {
        std::fs::write(out, report.summary_csv()).map_err(|e| Error::io(out, e))?;
    }
    println!("method,count,mean_xi");
    let ea = report.errors_of(&a.label_a);
    println!("{},{},{}", a.label_a, ea.len(), fmt_g9(mean(&ea)));
    if pb.is_some() {
        let eb = report.errors_of(&a.label_b);
        println!("{},{},{}", a.label_b, eb.len(), fmt_g9(mean(&eb)));
        let s = significance_sign(&ea, &eb, a.alpha)?;
        println!("comparison,h,p,sign");
        println!(
            "{} vs {},{},{},{}",
            a.label_a,
            a.label_b,
            fmt_g9(s.h),
            fmt_g9(s.p),
            s.sign
        );
    }
    Ok(())
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len().max(1) as f64
}

fn bench(a: BenchArgs) -> Result<()> {
    let ck = ModelCheckpoint::load(&a.checkpoint)?;
    let (m, base) = DatasetManifest::read(&a.manifest)?;
    let mut samples = m.load_samples(&base)?;
    let limit = a.limit.unwrap_or(samples.len()).min(samples.len());
    samples.truncate(limit);
    let mut out = String::from("id,n,predict_median,simulate_median,ratio\n");
    let mut ratios = Vec::new();
    for (e, s) in m.entries.iter().zip(&samples) {
        let sim = Simulation {
            measure: e.measure,
            attack: e.attack,
            theorem: a.theorem,
        };
        let tp = bench_runtime(
            || {
                predict(&ck, &s.graph).expect("prediction succeeded once");
            },
            a.warmups,
            a.repetitions,
        )?;
        // fail before timing rather than inside the closure
        sim.curve(&s.graph, e.seed)?;
        let ts = bench_runtime(
            || {
                sim.curve(&s.graph, e.seed).expect("simulation succeeded once");
            },
            a.warmups,
            a.repetitions,
        )?;
        let ratio = tp.median / ts.median;
        ratios.push(ratio);
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            e.id,
            s.graph.n_alive(),
            fmt_g9(tp.median),
            fmt_g9(ts.median),
            fmt_g9(ratio)
        ));
    }
    if let Some(path) = &a.out {
        std::fs::write(path, &out).map_err(|e| Error::io(path, e))?;
    } else {
        print!("{out}");
    }
    let mut sorted = ratios.clone();
    sorted.sort_by(f64::total_cmp);
    if !sorted.is_empty() {
        eprintln!("median predict/simulate ratio {}", fmt_g9(sorted[sorted.len() / 2]));
    }
    Ok(())
}

fn plot(a: PlotArgs) -> Result<()> {
    let t = CurveTable::read(&a.csv)?;
    let svg = render_svg(&t)?;
    std::fs::write(&a.out, svg).map_err(|e| Error::io(&a.out, e))
}

fn convert(a: ConvertArgs) -> Result<()> {
    let text = std::fs::read_to_string(&a.input).map_err(|e| Error::io(&a.input, e))?;
    let c = convert_pairs(
        &text,
        &a.input,
        ConvertOptions {
            directed: a.directed,
            largest_component: a.lcc,
        },
    )?;
    write_edge_list(&c.graph, &a.out)?;
    let g: &Graph = &c.graph;
    eprintln!(
        "{} nodes, {} edges ({} self-loops and {} duplicates dropped)",
        g.n_alive(),
        g.edge_count(),
        c.self_loops,
        c.duplicates
    );
    Ok(())
}
