use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use defsched::engine::{run_full, EngineError, IterationOutcome, IterationRecord};
use defsched::io::{
    read_instance, read_json, write_json, ChainAnalysisFile, GeneratorFile, InstanceFile, IoError, ResultFile,
    RunConfigFile,
};
use defsched::report::{analyze_chain, report_tsv, verify_result};
use defsched::solver::{HighsSolver, MilpSolver};
use defsched_core::generate::generate_instance;

#[derive(Parser)]
#[command(name = "defsched", version, about = "Multi-objective thesis defence scheduling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance.
    Generate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run both stages and write the non-dominated set.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long = "run-config")]
        run_config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Single thread and fixed seed.
        #[arg(long)]
        deterministic: bool,
    },
    /// Re-check every schedule of a result file against its instance.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        result: PathBuf,
    },
    /// Analyse an availability chain.
    Analyze {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Summarise result files as a tab-separated table.
    Report { results: Vec<PathBuf> },
}

const VERIFY_FAILED: u8 = 1;
const INPUT_ERROR: u8 = 2;
const SOLVER_FAILURE: u8 = 3;

enum Failure {
    Input(String),
    Solver(String),
    Verify(Vec<String>),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Config(_) | EngineError::Instance(_) | EngineError::Model(_) => Failure::Input(e.to_string()),
            _ => Failure::Solver(e.to_string()),
        }
    }
}

fn progress(r: &IterationRecord) {
    let what = match r.outcome {
        IterationOutcome::NewSolution => "new",
        IterationOutcome::Duplicate => "duplicate",
        IterationOutcome::Infeasible => "infeasible",
        IterationOutcome::SkippedSolution => "skip-solution",
        IterationOutcome::SkippedInfeasible => "skip-infeasible",
        IterationOutcome::TimeLimitFeasible => "time-feasible",
        IterationOutcome::TimeLimitNoSolution => "time-none",
    };
    let obj = r.objectives.map(|o| format!(" z={o:?}")).unwrap_or_default();
    eprintln!(
        "iter {:>3} v={:?} eps={:?} {what}{obj} ({:.2}s of {:.1}s)",
        r.index, r.v, r.thresholds, r.wall_secs, r.time_limit_secs
    );
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Generate { config, seed, out } => {
            let file: GeneratorFile = read_json(&config)?;
            let cfg = file.to_config(seed)?;
            let inst = generate_instance(&cfg).map_err(|e| Failure::Input(e.to_string()))?;
            write_json(&out, &InstanceFile::from_instance(&inst))?;
        }
        Command::Solve {
            instance,
            run_config,
            out,
            deterministic,
        } => {
            let (inst, digest) = read_instance(&instance)?;
            let file: RunConfigFile = match run_config {
                Some(p) => read_json(&p)?,
                None => RunConfigFile::default(),
            };
            let mut cfg = file.to_config()?;
            cfg.deterministic |= deterministic;
            let solver = HighsSolver;
            let run = run_full(&solver, &inst, &cfg, &mut progress)?;
            let c = run.log.counters;
            eprintln!(
                "g = {}, N = {}, I = {}, skipN = {}, skipI = {}, timeN = {}, timeI = {}, {:.1}s",
                run.g.g, c.n, c.i, c.skip_n, c.skip_i, c.time_n, c.time_i, run.times.total
            );
            write_json(&out, &ResultFile::new(&inst, digest, solver.name(), &cfg, &run))?;
        }
        Command::Verify { instance, result } => {
            let (inst, digest) = read_instance(&instance)?;
            let res: ResultFile = read_json(&result)?;
            let problems = verify_result(&inst, &digest, &res);
            if !problems.is_empty() {
                return Err(Failure::Verify(problems));
            }
            println!(
                "ok: {} solutions, {} filtered, {} incumbents",
                res.solutions.len(),
                res.filtered.len(),
                res.incumbents.len()
            );
        }
        Command::Analyze { spec } => {
            let file: ChainAnalysisFile = read_json(&spec)?;
            let a = analyze_chain(&file).map_err(|e| Failure::Input(e.to_string()))?;
            println!("{}", serde_json::to_string_pretty(&a).expect("analysis serializes"));
        }
        Command::Report { results } => {
            let mut rows = Vec::with_capacity(results.len());
            for p in results {
                rows.push((p.display().to_string(), read_json::<ResultFile>(&p)?));
            }
            print!("{}", report_tsv(&rows));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(INPUT_ERROR)
        }
        Err(Failure::Solver(m)) => {
            eprintln!("solver failure: {m}");
            ExitCode::from(SOLVER_FAILURE)
        }
        Err(Failure::Verify(problems)) => {
            for p in &problems {
                eprintln!("{p}");
            }
            eprintln!("verification failed: {} problems", problems.len());
            ExitCode::from(VERIFY_FAILED)
        }
    }
}
