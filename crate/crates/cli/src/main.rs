//! Batch driver: `simulate`, `learn`, `eval` and `epsilon`, each reading one
//! JSON config with a few flag overrides.
//!
//! Exit codes: 0 success, 2 input error, 3 degenerate data, 4 solver
//! non-convergence.

mod config;

use std::fmt;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bayesges::bayes::{log_model_prior, solve_epsilon, LeCamConfig, ModelPriorConfig, PriorForm};
use bayesges::search::{ges_with, Strategy};
use bayesges::sim::{random_additive_sem, random_linear_sem, sample, shd_cpdag, split_seed};
use bayesges::{cpdag_of, format_dag, parse_dag, Cpdag, Dataset, Dag, DsepOracle, OddsTest, PopulationTest, SemSpec};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use config::{BackendKind, RunConfig, SemKind, TestKind};

#[derive(Parser)]
#[command(name = "bayesges", version, about = "Structure learning by greedy equivalence search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a dataset from a SEM and write the true structure.
    Simulate(Common),
    /// Learn a CPDAG from data (or from the true DAG with the oracle test).
    Learn(Common),
    /// Compare a learned CPDAG with the truth.
    Eval(Common),
    /// Print the rate solution and model prior exponent over a grid of n.
    Epsilon(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    test: Option<TestKind>,
    #[arg(long, value_enum)]
    backend: Option<BackendKind>,
    #[arg(long)]
    lambda: Option<f64>,
}

#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<bayesges::Error> for Failure {
    fn from(e: bayesges::Error) -> Failure {
        let code = match e {
            bayesges::Error::Degenerate(_) => 3,
            bayesges::Error::NonConvergence(_) => 4,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome<T = ()> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(c) => configure(c).and_then(|cfg| simulate(&cfg)),
        Command::Learn(c) => configure(c).and_then(|cfg| learn(&cfg)),
        Command::Eval(c) => configure(c).and_then(|cfg| eval(&cfg)),
        Command::Epsilon(c) => configure(c).and_then(|cfg| epsilon(&cfg)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code)
        }
    }
}

fn configure(flags: Common) -> Outcome<RunConfig> {
    let mut cfg = RunConfig::load(&flags.config)?;
    if let Some(seed) = flags.seed {
        cfg.seed = seed;
    }
    if let Some(out) = flags.out {
        cfg.out = Some(out);
    }
    if let Some(test) = flags.test {
        cfg.test = test;
    }
    if let Some(backend) = flags.backend {
        cfg.bayes.backend = backend;
    }
    if let Some(lambda) = flags.lambda {
        cfg.bayes.lambda = lambda;
    }
    Ok(cfg)
}

fn read(path: &Path) -> Outcome<String> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Outcome {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Failure::input(format!("cannot create {}: {e}", dir.display())))?;
    }
    fs::write(path, contents).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
}

fn read_dag(path: &Path) -> Outcome<Dag> {
    Ok(parse_dag(read(path)?.trim())?)
}

fn read_cpdag(path: &Path) -> Outcome<Cpdag> {
    Ok(Cpdag::from_json(&read(path)?)?)
}

fn simulate(cfg: &RunConfig) -> Outcome {
    let n = cfg.n.ok_or_else(|| Failure::input("simulate needs n"))?;
    let spec = match (&cfg.sem, &cfg.random_sem) {
        (Some(path), None) => SemSpec::from_json(&read(path)?)?,
        (None, Some(r)) => {
            let seed = split_seed(cfg.seed, "sem");
            match r.kind {
                SemKind::Linear => random_linear_sem(r.d, r.edge_prob, r.coef_range, r.noise_var, seed)?,
                SemKind::Additive => random_additive_sem(r.d, r.edge_prob, r.link, r.coef_range, r.noise_var, seed)?,
            }
        }
        _ => return Err(Failure::input("simulate needs exactly one of sem and random_sem")),
    };
    let data = sample(&spec, n, split_seed(cfg.seed, "sample"))?;
    let out = cfg.out_dir();
    write(&out.join("data.csv"), &data.to_csv_string())?;
    write(&out.join("truth_dag.txt"), &format!("{}\n", format_dag(&spec.dag)))?;
    write(&out.join("truth_cpdag.json"), &format!("{}\n", cpdag_of(&spec.dag).to_json()))?;
    Ok(())
}

fn learn(cfg: &RunConfig) -> Outcome {
    if cfg.strategy == Strategy::BestImprovement && (cfg.test != TestKind::Odds || cfg.bayes.backend != BackendKind::Bic)
    {
        return Err(Failure::input("best_improvement is only available with the odds test and the bic backend"));
    }
    let (cpdag, trace) = match cfg.test {
        TestKind::Oracle => {
            let truth = read_dag(&cfg.input_or_out(&cfg.truth_dag, "truth_dag.txt"))?;
            ges_with(&PopulationTest::new(DsepOracle::new(truth)), cfg.strategy)?
        }
        TestKind::Odds => {
            let path = cfg.input_or_out(&cfg.data, "data.csv");
            if !path.exists() {
                return Err(Failure::input(format!("data file {} not found", path.display())));
            }
            let data = Dataset::load(&path, cfg.domain)?;
            let odds = cfg.bayes.odds_config(split_seed(cfg.seed, "dpm"));
            let test = OddsTest::new(&data, &odds)?;
            if let Some(cache) = &cfg.bayes.cache {
                if cache.exists() {
                    let file = fs::File::open(cache)
                        .map_err(|e| Failure::input(format!("cannot open {}: {e}", cache.display())))?;
                    test.cache().load(BufReader::new(file))?;
                }
            }
            let result = ges_with(&test, cfg.strategy)?;
            if let Some(cache) = &cfg.bayes.cache {
                let mut buf = Vec::new();
                test.cache().save(&mut buf)?;
                write(cache, &String::from_utf8(buf).expect("cache lines are UTF-8"))?;
            }
            result
        }
    };
    let out = cfg.out_dir();
    write(&out.join("learned_cpdag.json"), &format!("{}\n", cpdag.to_json()))?;
    write(&out.join("trace.jsonl"), &trace.to_jsonl())?;
    Ok(())
}

#[derive(Serialize)]
struct Report {
    shd: usize,
    mec_equal: bool,
}

fn eval(cfg: &RunConfig) -> Outcome {
    let learned = read_cpdag(&cfg.input_or_out(&cfg.learned_cpdag, "learned_cpdag.json"))?;
    let truth = read_cpdag(&cfg.input_or_out(&cfg.truth_cpdag, "truth_cpdag.json"))?;
    let shd = shd_cpdag(&learned, &truth)?;
    let report = serde_json::to_string(&Report {
        shd,
        mec_equal: learned == truth,
    })
    .expect("serializable");
    write(&cfg.out_dir().join("report.json"), &format!("{report}\n"))?;
    println!("{report}");
    Ok(())
}

#[derive(Serialize)]
struct RateLine {
    n: usize,
    epsilon: f64,
    n_eps2: f64,
    log_prior: f64,
}

fn epsilon(cfg: &RunConfig) -> Outcome {
    let g = read_dag(&cfg.input_or_out(&cfg.dag, "truth_dag.txt"))?;
    if cfg.n_grid.is_empty() {
        return Err(Failure::input("epsilon needs a non-empty n_grid"));
    }
    // The exponent reported is the whole-graph one, whatever form learning uses.
    let prior = ModelPriorConfig {
        form: PriorForm::Global,
        ..cfg.bayes.prior()
    };
    for &n in &cfg.n_grid {
        let lecam = LeCamConfig::new(cfg.bayes.gamma, n, g.n_vertices())?;
        let eps = solve_epsilon(&lecam, &g.sparsity())?;
        let line = RateLine {
            n,
            epsilon: eps,
            n_eps2: n as f64 * eps * eps,
            log_prior: log_model_prior(&g, &prior, &lecam)?,
        };
        println!("{}", serde_json::to_string(&line).expect("serializable"));
    }
    Ok(())
}
