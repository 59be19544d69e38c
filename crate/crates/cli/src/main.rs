//! Command-line surface: state generation, pure-state criterion evaluation,
//! mixed-state lower bounds, the quasi-pure approximation, and the GHZ/W
//! mixture sweep.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 inconclusive.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tritangle::{
    a_tensor, big_f_with, c_chain, cube_tangles_with, files, ghz_w_mixture, lambda_gap,
    named_state, product_state, spectral_decompose_default, tau_matrix, white_noise_mixture,
    BoundMethod, BoundParams, DensityMatrix, Error, NamedState, Normalization, PureState,
};

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "tritangle",
    version,
    about = "Existence criterion for genuine tripartite entanglement: \
             sub-cube tangles, mixed-state lower bounds, quasi-pure sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GenKind {
    /// (|000> + |111>)/sqrt(2)
    Ghz2,
    /// (1/sqrt(d)) sum_i |iii> in (d,d,d); set --d
    Ghz,
    /// (|001> + |010> + |100>)/sqrt(3)
    W,
    /// (|110> + |011> + |101>)/sqrt(3)
    Wtilde,
    /// Uniform-superposition product state in (d,d,d); set --d
    Product,
    /// x |GHZ><GHZ| + (1-x)/2 (|W><W| + |Wt><Wt|); set --x
    GhzwMixture,
    /// p |GHZ_d><GHZ_d| + (1-p) I/D; set --d and --p
    NoiseMixture,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Zz,
    Uniform,
    Dominant,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Write a named state or mixture to a state file
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        /// Party dimension for ghz / product / noise-mixture
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// GHZ weight of the GHZ/W mixture
        #[arg(long)]
        x: Option<f64>,
        /// Purity weight of the white-noise mixture
        #[arg(long)]
        p: Option<f64>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Evaluate the pure-state criterion on a state file
    Tangle {
        file: PathBuf,
        /// Rescale tau by 4 (f by 16) so that tau(GHZ) = 1
        #[arg(long)]
        ckw: bool,
    },
    /// Quasi-pure approximation of a density file
    Quasipure { file: PathBuf },
    /// Lower bounds on the criterion of a density file
    Bounds {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::All)]
        method: MethodArg,
        #[arg(long, default_value_t = 512)]
        restarts: u32,
        #[arg(long, default_value_t = 64)]
        refine: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sweep the quasi-pure value of the GHZ/W mixture and write CSV
    SweepGhzw {
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        steps: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
}

enum CliError {
    Usage(String),
    Data(String),
    Inconclusive(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Inconclusive { .. } => CliError::Inconclusive(e.to_string()),
            Error::OutOfRange { .. } => CliError::Usage(e.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}

type CliResult = Result<(), CliError>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_DATA)
        }
        Err(CliError::Inconclusive(msg)) => {
            eprintln!("inconclusive: {msg}");
            ExitCode::from(EXIT_INCONCLUSIVE)
        }
    }
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Gen {
            kind,
            d,
            x,
            p,
            output,
        } => gen(kind, d, x, p, &output),
        Command::Tangle { file, ckw } => tangle(&file, ckw),
        Command::Quasipure { file } => quasipure(&file),
        Command::Bounds {
            file,
            method,
            restarts,
            refine,
            seed,
        } => bounds(&file, method, restarts, refine, seed),
        Command::SweepGhzw {
            from,
            to,
            steps,
            output,
        } => sweep_ghzw(from, to, steps, &output),
    }
}

/// Fixed-point formatting with nine significant digits.
fn sig9(v: f64) -> String {
    if v == 0.0 {
        return format!("{:.9}", 0.0);
    }
    let exponent = v.abs().log10().floor() as i32;
    let precision = (8 - exponent).clamp(0, 30) as usize;
    format!("{v:.precision$}")
}

fn dims_line(dims: (usize, usize, usize)) -> String {
    format!("dims: {} {} {}", dims.0, dims.1, dims.2)
}

fn gen(kind: GenKind, d: usize, x: Option<f64>, p: Option<f64>, output: &Path) -> CliResult {
    enum Artifact {
        Pure(PureState),
        Density(DensityMatrix),
    }

    let require = |value: Option<f64>, flag: &str| {
        value.ok_or_else(|| CliError::Usage(format!("--{flag} is required for this kind")))
    };
    // everything below only fails on bad flag values, so map to usage errors
    let usage = |e: Error| CliError::Usage(e.to_string());

    let (artifact, detail) = match kind {
        GenKind::Ghz2 => (
            Artifact::Pure(named_state(NamedState::Ghz2).map_err(usage)?),
            String::new(),
        ),
        GenKind::Ghz => (
            Artifact::Pure(named_state(NamedState::Ghz(d)).map_err(usage)?),
            format!("d: {d}\n"),
        ),
        GenKind::W => (
            Artifact::Pure(named_state(NamedState::W).map_err(usage)?),
            String::new(),
        ),
        GenKind::Wtilde => (
            Artifact::Pure(named_state(NamedState::WTilde).map_err(usage)?),
            String::new(),
        ),
        GenKind::Product => {
            if d < 2 {
                return Err(CliError::Usage(format!(
                    "party dimension {d} is below the minimum of 2"
                )));
            }
            let v: Vec<_> = (0..d)
                .map(|_| tritangle::C64::new(1.0 / (d as f64).sqrt(), 0.0))
                .collect();
            (
                Artifact::Pure(product_state(&v, &v, &v).map_err(usage)?),
                format!("d: {d}\n"),
            )
        }
        GenKind::GhzwMixture => {
            let x = require(x, "x")?;
            (
                Artifact::Density(ghz_w_mixture(x).map_err(usage)?),
                format!("x: {}\n", sig9(x)),
            )
        }
        GenKind::NoiseMixture => {
            let p = require(p, "p")?;
            let ghz = named_state(NamedState::Ghz(d)).map_err(usage)?;
            (
                Artifact::Density(white_noise_mixture(&ghz, p).map_err(usage)?),
                format!("d: {d}\np: {}\n", sig9(p)),
            )
        }
    };

    let mut out = String::new();
    out.push_str("command: gen\n");
    let _ = writeln!(
        out,
        "kind: {}",
        match kind {
            GenKind::Ghz2 => "ghz2",
            GenKind::Ghz => "ghz",
            GenKind::W => "w",
            GenKind::Wtilde => "wtilde",
            GenKind::Product => "product",
            GenKind::GhzwMixture => "ghzw-mixture",
            GenKind::NoiseMixture => "noise-mixture",
        }
    );
    out.push_str(&detail);
    match &artifact {
        Artifact::Pure(s) => {
            files::write_pure_state(output, s)?;
            let _ = writeln!(out, "type: pure\n{}", dims_line(s.dims()));
        }
        Artifact::Density(rho) => {
            files::write_density(output, rho)?;
            let _ = writeln!(out, "type: density\n{}", dims_line(rho.dims()));
        }
    }
    let _ = writeln!(out, "file: {}", output.display());
    print!("{out}");
    Ok(())
}

fn tangle(file: &Path, ckw: bool) -> CliResult {
    let state = files::read_pure_state(file)?;
    let norm = if ckw {
        Normalization::Ckw
    } else {
        Normalization::Plain
    };
    let per_cube = cube_tangles_with(&state, norm);
    let f = big_f_with(&state, norm);

    let mut out = String::new();
    out.push_str("command: tangle\n");
    let _ = writeln!(out, "file: {}", file.display());
    let _ = writeln!(out, "{}", dims_line(state.dims()));
    let _ = writeln!(out, "normalization: {}", if ckw { "ckw" } else { "plain" });
    let _ = writeln!(out, "cubes: {}", per_cube.len());
    for (idx, value) in &per_cube {
        let _ = writeln!(out, "cube {idx} f = {}", sig9(*value));
    }
    let _ = writeln!(out, "F = {}", sig9(f));
    print!("{out}");
    Ok(())
}

fn quasipure(file: &Path) -> CliResult {
    let rho = files::read_density(file)?;
    let sd = spectral_decompose_default(&rho)?;

    let mut out = String::new();
    out.push_str("command: quasipure\n");
    let _ = writeln!(out, "file: {}", file.display());
    let _ = writeln!(out, "{}", dims_line(rho.dims()));
    let _ = writeln!(out, "rank: {}", sd.rank());
    let _ = writeln!(out, "dominant_eigenvalue: {}", sig9(sd.eigenvalues[0]));

    match tau_matrix(&sd) {
        Ok(tau) => {
            let _ = writeln!(out, "tau_asymmetry: {:.3e}", tau.asymmetry());
            if let Some(gap) = tau.dominance_gap() {
                if gap < tritangle::quasipure::DOMINANCE_GAP_WARNING {
                    let _ = writeln!(
                        out,
                        "warning: eigenvalue gap {} below {}; single-dominant-eigenvalue \
                         assumption is weak",
                        sig9(gap),
                        tritangle::quasipure::DOMINANCE_GAP_WARNING
                    );
                }
            }
            let _ = writeln!(out, "F_a = {}", sig9(lambda_gap(tau.matrix())));
            print!("{out}");
            Ok(())
        }
        Err(e @ Error::Inconclusive { .. }) => {
            let _ = writeln!(out, "F_a = inconclusive");
            print!("{out}");
            Err(CliError::Inconclusive(e.to_string()))
        }
        Err(e) => Err(e.into()),
    }
}

fn bounds(file: &Path, method: MethodArg, restarts: u32, refine: u32, seed: u64) -> CliResult {
    let rho = files::read_density(file)?;
    let sd = spectral_decompose_default(&rho)?;
    let tensor = a_tensor(&sd)?;
    let chain = c_chain(&tensor)?;

    let mut out = String::new();
    out.push_str("command: bounds\n");
    let _ = writeln!(out, "file: {}", file.display());
    let _ = writeln!(out, "{}", dims_line(rho.dims()));
    let _ = writeln!(out, "rank: {}", sd.rank());
    let _ = writeln!(out, "restarts: {restarts}");
    let _ = writeln!(out, "refine: {refine}");
    let _ = writeln!(out, "seed: {seed}");
    let _ = writeln!(out, "blocks: {}", chain.blocks.len());
    let _ = writeln!(out, "factors: {}", chain.factor_count());
    let negated = chain.negative_block_count() + chain.negative_factor_count();
    if negated > 0 {
        let _ = writeln!(
            out,
            "warning: {negated} decomposition term(s) enter negated; the bound derivation \
             assumes positivity"
        );
    }
    let asym = chain.max_factor_asymmetry();
    if asym > tritangle::kron::STRUCTURE_TOL {
        let _ = writeln!(
            out,
            "warning: factor asymmetry {asym:.3e}; symmetric parts are used for the gap"
        );
    }

    let methods: &[(BoundMethod, &str)] = match method {
        MethodArg::Dominant => &[(BoundMethod::Dominant, "dominant")],
        MethodArg::Uniform => &[(BoundMethod::Uniform, "uniform")],
        MethodArg::Zz => &[(BoundMethod::Zz, "zz")],
        MethodArg::All => &[
            (BoundMethod::Dominant, "dominant"),
            (BoundMethod::Uniform, "uniform"),
            (BoundMethod::Zz, "zz"),
        ],
    };
    for (m, name) in methods {
        let params = BoundParams {
            method: *m,
            restarts,
            refine_steps: refine,
            seed,
        };
        let value = tritangle::lower_bound(&chain, &params)?;
        let _ = writeln!(out, "bound[{name}] = {}", sig9(value));
    }
    print!("{out}");
    Ok(())
}

fn sweep_ghzw(from: f64, to: f64, steps: usize, output: &Path) -> CliResult {
    if !(from.is_finite() && to.is_finite()) || from <= 1.0 / 3.0 {
        return Err(CliError::Usage(format!(
            "--from must lie strictly above 1/3 (the quasi-pure regime), got {from}"
        )));
    }
    if to > 1.0 || from > to {
        return Err(CliError::Usage(format!(
            "need 1/3 < from <= to <= 1, got from {from}, to {to}"
        )));
    }
    if steps < 1 || (steps == 1 && from != to) {
        return Err(CliError::Usage(format!(
            "--steps must be >= 1, and steps = 1 requires from == to (got {steps})"
        )));
    }

    let mut csv = String::from("x,F_a\n");
    let mut inconclusive = 0usize;
    for i in 0..steps {
        let x = if steps == 1 {
            from
        } else if i == steps - 1 {
            to
        } else {
            from + (to - from) * i as f64 / (steps - 1) as f64
        };
        let rho = ghz_w_mixture(x)?;
        match tritangle::f_a(&rho) {
            Ok(value) => {
                let _ = writeln!(csv, "{x:.6},{}", sig9(value));
            }
            Err(Error::Inconclusive { .. }) => {
                inconclusive += 1;
                let _ = writeln!(csv, "{x:.6},inconclusive");
            }
            Err(e) => return Err(e.into()),
        }
    }
    std::fs::write(output, &csv).map_err(|e| CliError::Data(e.to_string()))?;

    let mut out = String::new();
    out.push_str("command: sweep-ghzw\n");
    let _ = writeln!(out, "from: {from:.6}");
    let _ = writeln!(out, "to: {to:.6}");
    let _ = writeln!(out, "steps: {steps}");
    let _ = writeln!(out, "rows: {steps}");
    let _ = writeln!(out, "file: {}", output.display());
    print!("{out}");
    if inconclusive > 0 {
        return Err(CliError::Inconclusive(format!(
            "{inconclusive} grid point(s) had no quasi-pure value; marker rows written"
        )));
    }
    Ok(())
}
