//! The `densketch` command line. Every subcommand writes line-delimited
//! JSON records; identical arguments and seed give byte-identical output
//! unless `--timing` adds wall-clock fields.
//!
//! Exit codes: 0 ok, 1 usage, 2 data or format, 3 sampler failure.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::densest::{
    approx_densest_offline, approx_densest_streaming, exact_densest, SampleSize, SampledDensest,
    Solver,
};
use crate::error::{invalid, Error, Result};
use crate::graph::{density_f64, Graph};
use crate::heavy::{
    estimate_heavy, estimate_heavy_streaming, Evaluation, HeavyProblem, ProblemKind, Solution,
    SolveMode,
};
use crate::seed;
use crate::sketch::{LeveledSampler, SamplerConfig};
use crate::stream::{
    generate_stream, parse_stream, replay, validate_strict_turnstile, StreamEvent, StreamSpec,
};

#[derive(Debug, Parser)]
#[command(
    name = "densketch",
    version,
    about = "Edge sampling over dynamic graph streams and sample-and-solve estimators"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Feed a stream through the sampler and dump the sample.
    Sample {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        size: SizeArgs,
    },
    /// Approximate densest subgraph by sample-and-solve.
    Densest {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        size: SizeArgs,
        #[arg(long, default_value = "charikar")]
        solver: Solver,
        #[arg(long, value_enum, default_value_t = Mode::Streaming)]
        mode: Mode,
    },
    /// Estimate the optimum of a heavy subgraph problem from a sample.
    Estimate {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        size: SizeArgs,
        #[arg(long)]
        problem: ProblemKind,
        /// Label count for d-max-cut and d-sum-max.
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// `exact` or `heuristic`.
        #[arg(long, default_value = "exact")]
        solver: SolveMode,
        #[arg(long, value_enum, default_value_t = Mode::Offline)]
        mode: Mode,
    },
    /// Run an exact solver on the whole graph.
    Oracle {
        #[command(flatten)]
        input: InputArgs,
        /// `densest` or a heavy problem name.
        #[arg(long, default_value = "densest")]
        problem: String,
        #[arg(long, default_value_t = 2)]
        d: usize,
    },
    /// Approximation ratio of sample-and-solve across sampling rates.
    Bench {
        #[command(flatten)]
        input: InputArgs,
        /// Sampling rates as fractions of m.
        #[arg(long, value_delimiter = ',', default_value = "0.05,0.1,0.2,0.5")]
        rates: Vec<f64>,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, default_value = "exact")]
        solver: Solver,
        #[arg(long, value_enum, default_value_t = Mode::Offline)]
        mode: Mode,
    },
    /// Check that a stream is strict turnstile.
    Validate {
        #[command(flatten)]
        input: InputArgs,
    },
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Generator, e.g. `planted:n=500,p=0.05,clique=30`.
    #[arg(
        long = "gen",
        value_name = "SPEC",
        required_unless_present = "input",
        conflicts_with = "input"
    )]
    pub generator: Option<StreamSpec>,
    /// Stream file (`n <count> [directed]` header, then `+ u v` / `- u v`).
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,
    #[arg(long, env = "DENSKETCH_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Write records here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Add wall-clock milliseconds to records.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct SizeArgs {
    /// Explicit sample size.
    #[arg(long = "C", value_name = "EDGES", conflicts_with = "c_from_formula")]
    pub c: Option<u64>,
    /// Derive C from --eps and --delta (the default when --C is absent).
    #[arg(long = "C-from-formula")]
    pub c_from_formula: bool,
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
}

impl SizeArgs {
    fn size(&self) -> SampleSize {
        match self.c {
            Some(c) => SampleSize::Fixed(c),
            None => SampleSize::Formula {
                eps: self.eps,
                delta: self.delta,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Sample uniformly from the materialized final graph.
    Offline,
    /// Feed every event through the leveled sampler.
    Streaming,
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidArgument(_) => 1,
        Error::SamplerFailure => 3,
        Error::Parse { .. } | Error::Format(_) | Error::SizeGuard { .. } | Error::Io(_) => 2,
    }
}

/// Entry point for the binary.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("densketch: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// Runs a parsed command, writing records to `--output` or stdout.
pub fn run(cli: &Cli) -> Result<u8> {
    let input = cli.command.input();
    match &input.output {
        Some(path) => {
            let mut out = BufWriter::new(File::create(path)?);
            let code = execute(&cli.command, &mut out)?;
            out.flush()?;
            Ok(code)
        }
        None => {
            let stdout = io::stdout();
            let mut out = BufWriter::new(stdout.lock());
            let code = execute(&cli.command, &mut out)?;
            out.flush()?;
            Ok(code)
        }
    }
}

impl Command {
    fn input(&self) -> &InputArgs {
        match self {
            Command::Sample { input, .. }
            | Command::Densest { input, .. }
            | Command::Estimate { input, .. }
            | Command::Oracle { input, .. }
            | Command::Bench { input, .. }
            | Command::Validate { input } => input,
        }
    }
}

struct Loaded {
    label: String,
    n: usize,
    directed: bool,
    events: Vec<StreamEvent>,
}

impl Loaded {
    fn graph(&self) -> Result<Graph> {
        replay(self.n, self.directed, &self.events)
    }

    fn inserts(&self) -> usize {
        self.events
            .iter()
            .filter(|e| e.op == crate::stream::Op::Insert)
            .count()
    }
}

fn load(input: &InputArgs) -> Result<Loaded> {
    match (&input.generator, &input.input) {
        (Some(spec), None) => {
            let g = generate_stream(spec, input.seed)?;
            Ok(Loaded {
                label: spec.to_string(),
                n: g.n,
                directed: g.directed,
                events: g.events,
            })
        }
        (None, Some(path)) => {
            let s = parse_stream(BufReader::new(File::open(path)?))?;
            Ok(Loaded {
                label: path.display().to_string(),
                n: s.n,
                directed: s.directed,
                events: s.events,
            })
        }
        _ => invalid("give exactly one of --gen and --input"),
    }
}

/// A sampler fed with the whole stream. `C` is clamped to the number of
/// inserts, an upper bound on the live edge count, so that an oversized
/// formula value does not allocate sketches it can never fill; the query
/// output is unchanged by the clamp.
fn streamed_sampler(data: &Loaded, c: u64, delta: f64, seed: u64) -> Result<LeveledSampler> {
    let c = c.min(data.inserts().max(1) as u64) as usize;
    let config = SamplerConfig::new(data.n, c, seed)
        .directed(data.directed)
        .with_delta(delta);
    let mut sampler = LeveledSampler::new(config)?;
    sampler.update_batch(&data.events)?;
    Ok(sampler)
}

fn ratio_str(r: Ratio<u64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn ratio_f64(r: Ratio<u64>) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn write_record(out: &mut impl Write, record: &impl Serialize) -> Result<()> {
    serde_json::to_writer(&mut *out, record).map_err(|e| Error::Io(e.into()))?;
    out.write_all(b"\n")?;
    Ok(())
}

fn elapsed_ms(start: Instant, timing: bool) -> Option<f64> {
    timing.then(|| start.elapsed().as_secs_f64() * 1e3)
}

#[derive(Serialize)]
struct Header<'a> {
    command: &'static str,
    input: &'a str,
    seed: u64,
}

#[derive(Serialize)]
struct SampleRecord<'a> {
    #[serde(flatten)]
    header: Header<'a>,
    n: usize,
    directed: bool,
    m: u64,
    #[serde(rename = "C")]
    c: u64,
    p: String,
    p_value: f64,
    level: usize,
    edges: Vec<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_ms: Option<f64>,
}

#[derive(Serialize)]
struct DensestRecord<'a> {
    #[serde(flatten)]
    header: Header<'a>,
    mode: Mode,
    solver: Solver,
    n: usize,
    m: u64,
    #[serde(rename = "C")]
    c: u64,
    p: String,
    p_value: f64,
    sampled: bool,
    size: usize,
    vertices: Vec<usize>,
    #[serde(rename = "den_G")]
    den_g: Option<String>,
    #[serde(rename = "den_G_value")]
    den_g_value: Option<f64>,
    #[serde(rename = "den_H")]
    den_h: String,
    #[serde(rename = "den_H_over_p")]
    den_h_scaled: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_ms: Option<f64>,
}

#[derive(Serialize)]
struct EstimateRecord<'a> {
    #[serde(flatten)]
    header: Header<'a>,
    problem: ProblemKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    d: Option<usize>,
    solver: SolveMode,
    mode: Mode,
    n: usize,
    m: u64,
    #[serde(rename = "C")]
    c: u64,
    p: String,
    p_value: f64,
    estimate: f64,
    raw_estimate: f64,
    on_sample: Evaluation,
    witness: Solution,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_ms: Option<f64>,
}

#[derive(Serialize)]
struct OracleRecord<'a> {
    #[serde(flatten)]
    header: Header<'a>,
    problem: String,
    n: usize,
    m: usize,
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact_value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    normalized: Option<f64>,
    solution: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_ms: Option<f64>,
}

#[derive(Serialize)]
struct BenchTrial<'a> {
    #[serde(flatten)]
    header: Header<'a>,
    record: &'static str,
    mode: Mode,
    solver: Solver,
    rate: f64,
    trial: usize,
    trial_seed: u64,
    #[serde(rename = "C")]
    c: u64,
    m: u64,
    p_value: f64,
    #[serde(rename = "den_G")]
    den_g: f64,
    opt: f64,
    ratio: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_ms: Option<f64>,
}

#[derive(Serialize)]
struct BenchSummary<'a> {
    #[serde(flatten)]
    header: Header<'a>,
    record: &'static str,
    rate: f64,
    trials: usize,
    mean_ratio: f64,
    min_ratio: f64,
}

#[derive(Serialize)]
struct ValidateRecord<'a> {
    #[serde(flatten)]
    header: Header<'a>,
    n: usize,
    directed: bool,
    events: usize,
    valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    violation_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    violation: Option<String>,
}

fn densest_record<'a>(
    header: Header<'a>,
    mode: Mode,
    solver: Solver,
    n: usize,
    r: SampledDensest,
) -> DensestRecord<'a> {
    DensestRecord {
        header,
        mode,
        solver,
        n,
        m: r.m,
        c: r.c,
        p: ratio_str(r.p),
        p_value: ratio_f64(r.p),
        sampled: r.sampled(),
        size: r.vertices.len(),
        den_g: r.density_in_source.map(ratio_str),
        den_g_value: r.density_in_source.as_ref().map(density_f64),
        den_h: ratio_str(r.density_in_sample),
        den_h_scaled: r.scaled_sample_density(),
        vertices: r.vertices,
        wall_ms: None,
    }
}

/// Runs one command against `out`. Returns the exit status.
pub fn execute(command: &Command, out: &mut impl Write) -> Result<u8> {
    let start = Instant::now();
    let args = command.input();
    let data = load(args)?;
    let header = |command: &'static str| Header {
        command,
        input: &data.label,
        seed: args.seed,
    };
    match command {
        Command::Sample { size, .. } => {
            let g = data.graph()?;
            let c = size.size().resolve(data.n, g.edge_count())?;
            let sampler = streamed_sampler(&data, c, size.delta, args.seed)?;
            let s = sampler.query()?;
            let edges = s.edges().iter().map(|e| [e.u, e.v]).collect();
            let record = SampleRecord {
                header: header("sample"),
                n: data.n,
                directed: data.directed,
                m: s.m,
                c,
                p: ratio_str(s.p),
                p_value: ratio_f64(s.p),
                level: s.level,
                edges,
                wall_ms: elapsed_ms(start, args.timing),
            };
            write_record(out, &record)?;
        }
        Command::Densest {
            size, solver, mode, ..
        } => {
            let g = data.graph()?;
            let r = match mode {
                Mode::Offline => approx_densest_offline(&g, size.size(), *solver, args.seed)?,
                Mode::Streaming => {
                    let c = size.size().resolve(data.n, g.edge_count())?;
                    let sampler = streamed_sampler(&data, c, size.delta, args.seed)?;
                    let mut r = approx_densest_streaming(&sampler, *solver, Some(&g))?;
                    r.c = c;
                    r
                }
            };
            let mut record = densest_record(header("densest"), *mode, *solver, data.n, r);
            record.wall_ms = elapsed_ms(start, args.timing);
            write_record(out, &record)?;
        }
        Command::Estimate {
            size,
            problem,
            d,
            solver,
            mode,
            ..
        } => {
            let problem = HeavyProblem::new(*problem, *d)?;
            let g = data.graph()?;
            let e = match mode {
                Mode::Offline => estimate_heavy(&problem, &g, size.size(), *solver, args.seed)?,
                Mode::Streaming => {
                    let c = match size.size() {
                        SampleSize::Fixed(c) => c,
                        SampleSize::Formula { eps, delta } => {
                            problem.sample_size(data.n, eps, delta)?
                        }
                    };
                    let sampler = streamed_sampler(&data, c, size.delta, args.seed)?;
                    let mut e = estimate_heavy_streaming(&problem, &sampler, *solver, args.seed)?;
                    e.c = c;
                    e
                }
            };
            let labeled = matches!(problem.kind, ProblemKind::DMaxCut | ProblemKind::DSumMax);
            let record = EstimateRecord {
                header: header("estimate"),
                problem: problem.kind,
                d: labeled.then_some(problem.d),
                solver: *solver,
                mode: *mode,
                n: data.n,
                m: e.m,
                c: e.c,
                p: ratio_str(e.p),
                p_value: ratio_f64(e.p),
                estimate: e.estimate,
                raw_estimate: e.raw_estimate,
                on_sample: e.on_sample,
                witness: e.witness,
                wall_ms: elapsed_ms(start, args.timing),
            };
            write_record(out, &record)?;
        }
        Command::Oracle { problem, d, .. } => {
            let g = data.graph()?;
            let mut record = OracleRecord {
                header: header("oracle"),
                problem: problem.clone(),
                n: g.vertex_count(),
                m: g.edge_count(),
                value: 0.0,
                exact_value: None,
                normalized: None,
                solution: serde_json::Value::Null,
                wall_ms: None,
            };
            if problem == "densest" {
                let r = exact_densest(&g)?;
                record.value = density_f64(&r.density());
                record.exact_value = Some(ratio_str(r.density()));
                record.solution = serde_json::json!({ "vertices": r.vertices });
            } else {
                let p = HeavyProblem::new(problem.parse()?, *d)?;
                let solved = p.solve(&g, SolveMode::Exact, args.seed)?;
                record.value = solved.evaluation.raw;
                record.normalized = Some(solved.evaluation.normalized);
                record.solution =
                    serde_json::to_value(&solved.solution).map_err(|e| Error::Io(e.into()))?;
            }
            record.wall_ms = elapsed_ms(start, args.timing);
            write_record(out, &record)?;
        }
        Command::Bench {
            rates,
            trials,
            solver,
            mode,
            ..
        } => {
            bench(&data, args, rates, *trials, *solver, *mode, out)?;
        }
        Command::Validate { .. } => {
            let verdict = validate_strict_turnstile(&data.events, data.directed);
            let record = ValidateRecord {
                header: header("validate"),
                n: data.n,
                directed: data.directed,
                events: data.events.len(),
                valid: verdict.is_ok(),
                violation_index: verdict.as_ref().err().map(|v| v.index),
                violation: verdict.as_ref().err().map(|v| v.to_string()),
            };
            write_record(out, &record)?;
            if verdict.is_err() {
                return Ok(2);
            }
        }
    }
    Ok(0)
}

fn bench(
    data: &Loaded,
    args: &InputArgs,
    rates: &[f64],
    trials: usize,
    solver: Solver,
    mode: Mode,
    out: &mut impl Write,
) -> Result<()> {
    if let Some(bad) = rates.iter().find(|r| !(**r > 0.0 && **r <= 1.0)) {
        return invalid(format!("sampling rate {bad} outside (0, 1]"));
    }
    if trials == 0 {
        return invalid("need at least one trial");
    }
    let g = data.graph()?;
    let m = g.edge_count() as u64;
    let opt = density_f64(&exact_densest(&g)?.density());
    let trial_base = seed::derive(args.seed, seed::TAG_TRIAL);
    let jobs: Vec<(f64, usize)> = rates
        .iter()
        .flat_map(|&r| (0..trials).map(move |t| (r, t)))
        .collect();
    let records: Vec<Result<BenchTrial>> = jobs
        .par_iter()
        .map(|&(rate, trial)| {
            let start = Instant::now();
            let trial_seed = seed::derive(trial_base, trial as u64);
            let c = ((rate * m as f64).ceil() as u64).max(1);
            let r = match mode {
                Mode::Offline => {
                    approx_densest_offline(&g, SampleSize::Fixed(c), solver, trial_seed)?
                }
                Mode::Streaming => {
                    let sampler = streamed_sampler(data, c, 1.0, trial_seed)?;
                    approx_densest_streaming(&sampler, solver, Some(&g))?
                }
            };
            let den_g = r.density_in_source.as_ref().map_or(0.0, density_f64);
            Ok(BenchTrial {
                header: Header {
                    command: "bench",
                    input: &data.label,
                    seed: args.seed,
                },
                record: "trial",
                mode,
                solver,
                rate,
                trial,
                trial_seed,
                c,
                m,
                p_value: ratio_f64(r.p),
                den_g,
                opt,
                ratio: if opt > 0.0 { den_g / opt } else { 1.0 },
                wall_ms: elapsed_ms(start, args.timing),
            })
        })
        .collect();
    let records = records.into_iter().collect::<Result<Vec<_>>>()?;
    for chunk in records.chunks(trials) {
        for r in chunk {
            write_record(out, r)?;
        }
        let ratios: Vec<f64> = chunk.iter().map(|r| r.ratio).collect();
        let summary = BenchSummary {
            header: Header {
                command: "bench",
                input: &data.label,
                seed: args.seed,
            },
            record: "summary",
            rate: chunk[0].rate,
            trials,
            mean_ratio: ratios.iter().sum::<f64>() / trials as f64,
            min_ratio: ratios.iter().copied().fold(f64::INFINITY, f64::min),
        };
        write_record(out, &summary)?;
    }
    Ok(())
}
