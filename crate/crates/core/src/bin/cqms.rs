//! Command-line front end: load a weight-table JSON document, run one
//! analysis, emit JSON (or CSV for curves).
//!
//! Exit codes: 0 on success, 2 on validation errors (bad input, dimension
//! guards, malformed schema), 3 on internal consistency failures (a closed
//! form disagreeing with its oracle).

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use circulant_qms::entropy::{self, DEFAULT_T_GRID};
use circulant_qms::io::{self, WeightsDocument};
use circulant_qms::qms::{make_invariant_state, sample_invariant_state};
use circulant_qms::{
    assemble, classical_epr, cycle_representation, matrix_exponential, spectrum,
    CirculantGenerator, DensityMatrix, Error,
};

/// Largest matrix dimension any command is allowed to touch.
const DIM_GUARD: usize = 1024;

#[derive(Parser)]
#[command(
    name = "cqms",
    version,
    about = "Circulant quantum Markov semigroups: spectra, evolution, Choi dynamics and entropy production"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Weight-table JSON document: `{"orders":[p,q], "alpha":{"i,j":w}}`
    input: PathBuf,
    /// Write the result to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Comma-separated time grid as a single CLI value.
#[derive(Clone, Debug)]
struct Grid(Vec<f64>);

fn parse_grid(text: &str) -> Result<Grid, String> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| e.to_string()))
        .collect::<Result<Vec<f64>, String>>()
        .map(Grid)
}

#[derive(Subcommand)]
enum Command {
    /// Fourier spectrum of the generator (rate-matrix convention)
    Spectrum {
        #[command(flatten)]
        common: Common,
    },
    /// Closed-form transition matrix exp(tQ), checked against the dense
    /// exponential oracle
    Evolve {
        #[command(flatten)]
        common: Common,
        /// Evolution time
        #[arg(long, default_value_t = 1.0)]
        t: f64,
    },
    /// Forward and reversed Choi-state weight tables at one time
    Choi {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
    },
    /// Entropy production report: closed form, numerical limit, classical
    /// rate, detailed-balance verdict and per-offset terms
    Qepr {
        #[command(flatten)]
        common: Common,
        /// Descending time grid for the numerical rate, e.g. "1e-2,1e-3,1e-4"
        #[arg(long, value_parser = parse_grid)]
        t_grid: Option<Grid>,
        /// Detailed-balance tolerance
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Classical entropy production rate of the diagonal restriction
    EprClassical {
        #[command(flatten)]
        common: Common,
    },
    /// Detailed-balance verdict with the weight-ratio table
    CheckDb {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Validate the document's stationary state, or sample new ones
    InvariantStates {
        #[command(flatten)]
        common: Common,
        /// Number of states to sample when the document carries none
        #[arg(long, default_value_t = 5)]
        samples: usize,
        /// RNG seed; identical seeds give identical output bytes
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Cycle representation of the Kraus family
    Cycles {
        #[command(flatten)]
        common: Common,
    },
    /// Entropy curve t -> S(forward, reversed) as CSV
    Curve {
        #[command(flatten)]
        common: Common,
        /// Ascending time grid, e.g. "0,0.1,0.5,1"
        #[arg(long, value_parser = parse_grid, default_value = "0,0.1,0.2,0.5,1,2")]
        t_grid: Grid,
    },
}

fn load(common: &Common) -> Result<WeightsDocument, Error> {
    let text = fs::read_to_string(&common.input)
        .map_err(|e| Error::Schema(format!("cannot read {}: {e}", common.input.display())))?;
    io::parse_weights_json(&text)
}

fn guard(dim: usize) -> Result<(), Error> {
    if dim > DIM_GUARD {
        Err(Error::DimensionGuard {
            dim,
            guard: DIM_GUARD,
        })
    } else {
        Ok(())
    }
}

/// The stationary state a command should use: the document's, validated,
/// or the uniform state.
fn resolve_state(
    gen: &CirculantGenerator,
    doc: &WeightsDocument,
) -> Result<DensityMatrix, Error> {
    match &doc.state_params {
        Some(params) => make_invariant_state(gen, params),
        None => Ok(DensityMatrix::uniform(gen.dim())),
    }
}

fn emit(common: &Common, text: String) -> Result<(), Error> {
    match &common.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::Schema(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn emit_json(common: &Common, value: serde_json::Value) -> Result<(), Error> {
    emit(common, serde_json::to_string_pretty(&value).expect("valid JSON"))
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Spectrum { common } => {
            let doc = load(&common)?;
            guard(doc.weights.dim())?;
            let spec = spectrum(&doc.weights.generator());
            emit_json(&common, io::spectrum_json(&spec)?)
        }
        Command::Evolve { common, t } => {
            let doc = load(&common)?;
            guard(doc.weights.dim())?;
            if t < 0.0 {
                return Err(Error::InvalidArgument("t must be >= 0".into()));
            }
            let gen = doc.weights.generator();
            let closed = circulant_qms::exp_generator(&gen, t)?;
            let oracle = matrix_exponential(&assemble(&gen), t)?;
            let residual = closed.max_abs_diff(&oracle);
            if residual > 1e-8 {
                return Err(Error::InternalConsistency(format!(
                    "closed-form exponential deviates from the dense oracle by {residual:.3e}"
                )));
            }
            emit_json(
                &common,
                io::evolve_json(doc.weights.orders(), t, &closed, residual),
            )
        }
        Command::Choi { common, t } => {
            let doc = load(&common)?;
            let dim = doc.weights.dim();
            guard(dim * dim)?;
            if t < 0.0 {
                return Err(Error::InvalidArgument("t must be >= 0".into()));
            }
            let gen = CirculantGenerator::new(doc.weights.clone());
            let rho = resolve_state(&gen, &doc)?;
            let forward = entropy::forward_choi(&gen, &rho, t)?;
            let backward = entropy::backward_choi(&gen, &rho, t)?;
            emit_json(
                &common,
                io::choi_json(gen.orders(), t, &forward, &backward)?,
            )
        }
        Command::Qepr {
            common,
            t_grid,
            tol,
        } => {
            let doc = load(&common)?;
            let gen = CirculantGenerator::new(doc.weights.clone());
            let grid = t_grid.map(|g| g.0).unwrap_or_else(|| DEFAULT_T_GRID.to_vec());
            let rho = resolve_state(&gen, &doc)?;
            if !rho.is_uniform(1e-12) {
                guard(gen.dim() * gen.dim())?;
            }
            let report = entropy::epr_report(&gen, Some(&rho), &grid, tol)?;
            emit_json(&common, io::epr_report_json(&report)?)
        }
        Command::EprClassical { common } => {
            let doc = load(&common)?;
            guard(doc.weights.dim())?;
            let gen = CirculantGenerator::new(doc.weights.clone());
            let value = classical_epr(&gen)?;
            emit_json(
                &common,
                serde_json::json!({
                    "classical_epr": if value.is_finite() {
                        serde_json::json!(value)
                    } else {
                        serde_json::json!("inf")
                    },
                }),
            )
        }
        Command::CheckDb { common, tol } => {
            let doc = load(&common)?;
            let gen = CirculantGenerator::new(doc.weights.clone());
            let ratios = gen.weighted_db()?;
            emit_json(
                &common,
                io::check_db_json(
                    gen.orders(),
                    gen.check_detailed_balance(tol),
                    gen.weights().max_asymmetry(),
                    &ratios,
                )?,
            )
        }
        Command::InvariantStates {
            common,
            samples,
            seed,
        } => {
            let doc = load(&common)?;
            guard(doc.weights.dim())?;
            let gen = CirculantGenerator::new(doc.weights.clone());
            let mut entries = vec![];
            match &doc.state_params {
                Some(params) => {
                    let rho = make_invariant_state(&gen, params)?;
                    let fwd = gen.generator_apply(rho.matrix())?.max_abs();
                    let bwd = gen.rho_adjoint().generator_apply(rho.matrix())?.max_abs();
                    entries.push(io::invariant_state_json(params, fwd, bwd)?);
                }
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    for _ in 0..samples {
                        let (params, rho) = sample_invariant_state(&gen, &mut rng)?;
                        let fwd = gen.generator_apply(rho.matrix())?.max_abs();
                        let bwd = gen.rho_adjoint().generator_apply(rho.matrix())?.max_abs();
                        entries.push(io::invariant_state_json(&params, fwd, bwd)?);
                    }
                }
            }
            emit_json(
                &common,
                serde_json::json!({
                    "states": entries,
                    "reducible_support": !gen.support_is_generating(),
                }),
            )
        }
        Command::Cycles { common } => {
            let doc = load(&common)?;
            guard(doc.weights.dim())?;
            let gen = CirculantGenerator::new(doc.weights.clone());
            let terms = cycle_representation(&gen.kraus_set())?;
            emit_json(
                &common,
                io::cycles_json(&terms, gen.support_is_generating()),
            )
        }
        Command::Curve { common, t_grid } => {
            let doc = load(&common)?;
            let gen = CirculantGenerator::new(doc.weights.clone());
            let rho = resolve_state(&gen, &doc)?;
            if !rho.is_uniform(1e-12) {
                guard(gen.dim() * gen.dim())?;
            }
            let rows = entropy::entropy_curve(&gen, &rho, &t_grid.0)?;
            emit(&common, io::curve_csv(&rows))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
