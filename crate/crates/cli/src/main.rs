//! `semipos`: command-line client for semipos-server.
//!
//! Without `--server` an in-process server is started on a loopback port and
//! shut down on exit.
//!
//! Exit codes: 0 success, 1 transport or I/O failure, 2 malformed input,
//! 3 solver non-convergence or generator failure, 4 bound violation.

mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use semipos_client::{Client, ClientError};
use semipos_core::api::{
    EigenRequest, ErrorKind, GenerateRequest, NormsRequest, SolveMethod, SolveRequest, TensorRequest,
    VerifyBoundsRequest, VerifyRequest,
};
use semipos_core::bounds::{self, Counterexample, HarnessOptions};
use semipos_core::config::Config;
use semipos_core::eigen::EigenKind;
use semipos_core::generate::{Family, GeneratorParams, GeneratorSpec};
use semipos_core::norms::Operator;
use semipos_core::tcp::TcpInstance;
use semipos_core::{io, NormP, Tensor};

use render::{Format, Output};

#[derive(Parser)]
#[command(
    name = "semipos",
    version,
    about = "Semi-positive tensors, their spectra and tensor complementarity problems"
)]
struct Cli {
    #[command(flatten)]
    run: RunFlags,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Clone)]
struct RunFlags {
    /// Sign tolerance for β and copositivity decisions.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,
    /// Face-grid points per axis [default: 21 for n <= 4, 9 for n <= 6, none above].
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Multistart count for every randomized search [default: 16 β, 64 norms, 32 eigen, 16 TCP].
    #[arg(long, global = true)]
    starts: Option<usize>,
    /// Root seed for all randomness.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads [default: all cores]. Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Use a running server instead of an embedded one.
    #[arg(long, global = true, value_name = "URL")]
    server: Option<String>,
}

impl RunFlags {
    fn config(&self) -> Config {
        Config {
            tol: self.tol,
            grid: self.grid,
            starts: self.starts,
            seed: self.seed,
            threads: self.threads,
            ..Config::default()
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum CliMethod {
    Auto,
    Enumeration,
    Iterative,
}

#[derive(Subcommand)]
enum Command {
    /// Strict semi-positivity verdict with β and a counterexample when one exists.
    Classify { tensor: PathBuf },
    /// β(A) with its minimizer.
    Beta { tensor: PathBuf },
    /// Eigenvalues of one kind: h, z, h+, h++, z+, z++, pareto_h, pareto_z.
    Eigen {
        tensor: PathBuf,
        #[arg(long)]
        kind: String,
    },
    /// Empirical operator norms next to their closed-form bounds.
    Norms {
        tensor: PathBuf,
        /// T or F [default: both, F only for even order].
        #[arg(long)]
        op: Option<String>,
        /// Exponents among 1, 2, m, m* (= m/(m-1)), inf [default: all five].
        #[arg(long, value_delimiter = ',')]
        p: Vec<String>,
    },
    /// Solve TCP(A, q) from an instance file.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = CliMethod::Auto)]
        method: CliMethod,
    },
    /// Check a candidate solution against an instance.
    Verify {
        instance: PathBuf,
        /// Comma-separated components of x.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        x: Vec<f64>,
    },
    /// Sample one strictly semi-positive tensor and print it as a tensor file.
    Generate {
        #[command(flatten)]
        family: FamilyFlags,
    },
    /// Run the solution-bound harness on generated instances.
    VerifyBounds {
        #[command(flatten)]
        family: FamilyFlags,
        #[arg(long, default_value_t = 20)]
        count: usize,
        /// Write one report per line here.
        #[arg(long, value_name = "PATH")]
        jsonl: Option<PathBuf>,
        /// Write the CSV summary here.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
        /// Also compute lower bounds from estimated operator norms.
        #[arg(long)]
        empirical: bool,
        /// Where to write violating instances.
        #[arg(long, value_name = "PATH", default_value = "counterexample.json")]
        counterexample: PathBuf,
    },
}

#[derive(Args)]
struct FamilyFlags {
    /// identity_shift, diag_dominant, random_symmetric_copositive or matrix_m2.
    #[arg(long)]
    family: String,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    /// Diagonal scale for identity_shift.
    #[arg(long)]
    c: Option<f64>,
    /// Perturbation size for identity_shift.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Force the symmetric or nonsymmetric variant.
    #[arg(long)]
    symmetric: Option<bool>,
}

impl FamilyFlags {
    fn spec(&self, seed: u64) -> Result<GeneratorSpec, Failure> {
        let family: Family = self.family.parse().map_err(|e: semipos_core::Error| Failure::Input(e.to_string()))?;
        Ok(GeneratorSpec {
            family,
            m: self.m,
            n: self.n,
            seed,
            params: GeneratorParams { c: self.c, epsilon: self.epsilon, symmetric: self.symmetric },
        })
    }
}

enum Failure {
    Input(String),
    Solver(String),
    Violation(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Input(_) => 2,
            Failure::Solver(_) => 3,
            Failure::Violation(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Solver(m) | Failure::Violation(m) | Failure::Io(m) => m,
        }
    }
}

impl From<ClientError> for Failure {
    fn from(e: ClientError) -> Self {
        match e {
            ClientError::Api { body, .. } => match body.error {
                ErrorKind::InvalidInput => Failure::Input(body.message),
                ErrorKind::NonConvergence | ErrorKind::Generator | ErrorKind::NonpositiveDivisor => {
                    Failure::Solver(body.message)
                }
                ErrorKind::Internal => Failure::Io(body.message),
            },
            other => Failure::Io(other.to_string()),
        }
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    let res =
        if path == Path::new("-") { std::io::read_to_string(std::io::stdin()) } else { std::fs::read_to_string(path) };
    res.map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_tensor(path: &Path) -> Result<Tensor, Failure> {
    io::tensor_from_json(&read_input(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_instance(path: &Path) -> Result<TcpInstance, Failure> {
    serde_json::from_str(&read_input(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

/// Only the exponents the solution bounds use are exposed here.
fn parse_exponents(raw: &[String], m: usize) -> Result<Option<Vec<NormP>>, Failure> {
    if raw.is_empty() {
        return Ok(None);
    }
    let allowed = semipos_core::norms::standard_exponents(m);
    raw.iter()
        .map(|s| {
            let p = NormP::parse(s, m).map_err(|e| Failure::Input(e.to_string()))?;
            if allowed.contains(&p) {
                Ok(p)
            } else {
                Err(Failure::Input(format!("p = {s} is not one of 1, 2, m, m*, inf")))
            }
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Some)
}

fn emit<T: Serialize>(out: &Output, value: &T, text: impl FnOnce() -> String, csv: impl FnOnce() -> String) {
    print!("{}", out.render(value, text, csv));
}

async fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = cli.run.config();
    let command_name = match &cli.cmd {
        Command::Classify { .. } => "classify",
        Command::Beta { .. } => "beta",
        Command::Eigen { .. } => "eigen",
        Command::Norms { .. } => "norms",
        Command::Solve { .. } => "solve",
        Command::Verify { .. } => "verify",
        Command::Generate { .. } => "generate",
        Command::VerifyBounds { .. } => "verify-bounds",
    };
    let out = Output::new(cli.run.format, command_name, &cfg);

    let client = |base: Option<String>| async move {
        match base {
            Some(url) => Ok::<_, Failure>((Client::new(url), None)),
            None => {
                let addr = "127.0.0.1:0".parse().expect("loopback address");
                let (local, handle) =
                    semipos_server::spawn(addr).await.map_err(|e| Failure::Io(format!("embedded server: {e}")))?;
                Ok((Client::new(format!("http://{local}")), Some(handle)))
            }
        }
    };

    match cli.cmd {
        Command::Classify { tensor } => {
            let tensor = read_tensor(&tensor)?;
            let (c, _srv) = client(cli.run.server).await?;
            let r = c.classify(&TensorRequest { tensor, config: cfg.clone() }).await?;
            emit(&out, &r, || render::classification(&r), || render::classification_csv(&r));
        }
        Command::Beta { tensor } => {
            let tensor = read_tensor(&tensor)?;
            let (c, _srv) = client(cli.run.server).await?;
            let r = c.beta(&TensorRequest { tensor, config: cfg.clone() }).await?;
            emit(&out, &r, || render::beta(&r), || render::beta_csv(&r));
        }
        Command::Eigen { tensor, kind } => {
            let tensor = read_tensor(&tensor)?;
            let kind: EigenKind = kind.parse().map_err(|e: semipos_core::Error| Failure::Input(e.to_string()))?;
            let (c, _srv) = client(cli.run.server).await?;
            let r = c.eigen(&EigenRequest { tensor, kind, config: cfg.clone() }).await?;
            emit(&out, &r, || render::spectrum(&r), || render::spectrum_csv(&r));
        }
        Command::Norms { tensor, op, p } => {
            let tensor = read_tensor(&tensor)?;
            let op = op.map(|s| s.parse::<Operator>()).transpose().map_err(|e| Failure::Input(e.to_string()))?;
            let p = parse_exponents(&p, tensor.order())?;
            let (c, _srv) = client(cli.run.server).await?;
            let r = c.norms(&NormsRequest { tensor, op, p, config: cfg.clone() }).await?;
            emit(&out, &r, || render::norms(&r), || render::norms_csv(&r));
        }
        Command::Solve { instance, method } => {
            let instance = read_instance(&instance)?;
            let method = match method {
                CliMethod::Auto => SolveMethod::Auto,
                CliMethod::Enumeration => SolveMethod::Enumeration,
                CliMethod::Iterative => SolveMethod::Iterative,
            };
            let (c, _srv) = client(cli.run.server).await?;
            let r = c.solve(&SolveRequest { instance, method, config: cfg.clone() }).await?;
            emit(&out, &r, || render::solve(&r), || render::solve_csv(&r));
        }
        Command::Verify { instance, x } => {
            let instance = read_instance(&instance)?;
            let (c, _srv) = client(cli.run.server).await?;
            let r = c.verify(&VerifyRequest { instance, x }).await?;
            emit(&out, &r, || render::verify(&r), || render::verify_csv(&r));
        }
        Command::Generate { family } => {
            let spec = family.spec(cfg.seed)?;
            let (c, _srv) = client(cli.run.server).await?;
            let g = c.generate(&GenerateRequest { spec, config: cfg.clone() }).await?;
            // A tensor file in every format, so the output can be fed back in.
            println!("{}", io::tensor_to_json(&g.tensor));
        }
        Command::VerifyBounds { family, count, jsonl, csv, empirical, counterexample } => {
            let spec = family.spec(cfg.seed)?;
            let (c, _srv) = client(cli.run.server).await?;
            let r = c
                .verify_bounds(&VerifyBoundsRequest {
                    spec,
                    count,
                    options: HarnessOptions { empirical },
                    config: cfg.clone(),
                })
                .await?;
            if let Some(path) = jsonl {
                write_file(&path, &bounds::to_jsonl(&r.reports))?;
            }
            if let Some(path) = csv {
                write_file(&path, &bounds::to_csv(&r.reports))?;
            }
            emit(&out, &r, || render::harness(&r), || bounds::to_csv(&r.reports));
            if !r.violations.is_empty() {
                let cases: &[Counterexample] = &r.violations;
                let body = serde_json::to_string_pretty(cases).map_err(|e| Failure::Io(e.to_string()))?;
                write_file(&counterexample, &body)?;
                return Err(Failure::Violation(format!(
                    "{} instance(s) violate a bound; counterexample written to {}",
                    r.violations.len(),
                    counterexample.display()
                )));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.run.threads;
    let mut rt = tokio::runtime::Builder::new_multi_thread();
    rt.enable_all();
    if let Some(t) = threads.filter(|&t| t > 0) {
        rt.worker_threads(t);
    }
    let rt = match rt.build() {
        Ok(rt) => rt,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match rt.block_on(run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
