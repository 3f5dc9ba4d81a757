mod commands;
mod parse;
mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "conifold-flows", version, about = "Conifold special functions, difference equations and Ablowitz–Ladik flows")]
struct Cli {
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    group: Group,
}

#[derive(Subcommand, Debug)]
enum Group {
    /// Bernoulli numbers and polynomials, polylogarithms.
    Specfun {
        #[command(subcommand)]
        cmd: SpecfunCmd,
    },
    /// Multiple zeta, gamma and sine functions; H and G.
    Barnes {
        #[command(subcommand)]
        cmd: BarnesCmd,
    },
    /// Free energies and the difference equations of log G.
    Gw {
        #[command(subcommand)]
        cmd: GwCmd,
    },
    /// Bilinear residuals of tau triples.
    Hirota {
        #[command(subcommand)]
        cmd: HirotaCmd,
    },
    /// Periodic Ablowitz–Ladik lattice.
    Al {
        #[command(subcommand)]
        cmd: AlCmd,
    },
    /// Dispersionless flows and their Hamiltonian structure.
    Disp {
        #[command(subcommand)]
        cmd: DispCmd,
    },
}

#[derive(Subcommand, Debug)]
pub enum SpecfunCmd {
    Eval(SpecfunEval),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "what")]
pub struct SpecfunSelect {
    /// Exact Bernoulli number B_k.
    #[arg(long, value_name = "K")]
    pub bernoulli: Option<usize>,
    /// Generalized Bernoulli polynomial B_{r,n}(z | ω), r = number of ω.
    #[arg(long, value_name = "N")]
    pub gen_bernoulli: Option<usize>,
    /// Polylogarithm Li_s(z).
    #[arg(long, value_name = "S", allow_negative_numbers = true)]
    pub polylog: Option<i32>,
}

#[derive(Args, Debug)]
pub struct SpecfunEval {
    #[command(flatten)]
    pub select: SpecfunSelect,
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
    pub z: Option<Complex64>,
    /// Comma-separated periods.
    #[arg(long, value_parser = parse::complex, value_delimiter = ',', allow_hyphen_values = true)]
    pub omega: Option<Vec<Complex64>>,
}

#[derive(Subcommand, Debug)]
pub enum BarnesCmd {
    Eval(BarnesEval),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum BarnesFunction {
    Zeta,
    LogGamma,
    LogSine,
    LogH,
    LogG,
}

#[derive(Args, Debug)]
pub struct BarnesEval {
    #[arg(long, value_enum, default_value = "log-gamma")]
    pub function: BarnesFunction,
    /// Argument (`t` for H and G).
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
    pub z: Complex64,
    /// Comma-separated periods (two for H and G).
    #[arg(long, value_parser = parse::complex, value_delimiter = ',', allow_hyphen_values = true)]
    pub omega: Vec<Complex64>,
    /// Zeta variable.
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
    pub s: Option<Complex64>,
    #[arg(long)]
    pub head_order: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum GwCmd {
    /// Equivariant potential and genus-expanded free energies.
    Eval(GwEval),
    /// Second difference of log G against log(1 − q).
    CheckDiff(GwCheckDiff),
    /// Log–log slope of the genus-truncated remainder of log G.
    ScanAsymptotics(GwScan),
}

#[derive(Args, Debug)]
pub struct GwEval {
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
    pub t: Complex64,
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
    pub lambda: Complex64,
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true, default_value = "0")]
    pub x: Complex64,
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true, default_value = "1")]
    pub kappa: Complex64,
    /// Also report F̃^g for g ≤ this cap and their truncated sum.
    #[arg(long, default_value_t = 3)]
    pub genus_cap: u32,
}

#[derive(Args, Debug)]
pub struct GwCheckDiff {
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
    pub t: Complex64,
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
    pub lambda: Complex64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct GwScan {
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true, default_value = "0.15+0.12i")]
    pub t: Complex64,
    /// Ray angle of λ̌.
    #[arg(long, value_parser = parse::real, allow_hyphen_values = true, default_value = "π/4")]
    pub theta: f64,
    #[arg(long, default_value_t = 0.1)]
    pub eps_max: f64,
    #[arg(long, default_value_t = 0.01)]
    pub eps_min: f64,
    #[arg(long, default_value_t = 10)]
    pub points: usize,
    #[arg(long, default_value_t = 2)]
    pub genus: u32,
    /// Allowed deviation of the slope from 2G.
    #[arg(long, default_value_t = 0.2)]
    pub tol: f64,
}

#[derive(Subcommand, Debug)]
pub enum HirotaCmd {
    /// Residuals of first-order triples built from random lattice data.
    Check(HirotaCheck),
}

#[derive(Args, Debug)]
pub struct HirotaCheck {
    /// Half-width W of the site window [−W, W].
    #[arg(long, default_value_t = 6)]
    pub window: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Fields are drawn uniformly from the square of this half-width.
    #[arg(long, default_value_t = 0.4)]
    pub amplitude: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

#[derive(Subcommand, Debug)]
pub enum AlCmd {
    /// RK4 run from plane-wave initial data, compared with the exact wave.
    Run(AlRun),
}

#[derive(Args, Debug)]
pub struct AlRun {
    #[arg(long = "N", default_value_t = 64)]
    pub sites: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    #[arg(long, default_value_t = 10_000)]
    pub steps: usize,
    /// `A=…,B=…,k=…` with complex amplitudes and a wave number such as `2π/64`.
    #[arg(long, default_value = "A=0.3,B=0.2,k=2π/64")]
    pub planewave: String,
    #[arg(long, default_value_t = 100)]
    pub sample_every: usize,
    /// Write `STEM.csv` and `STEM.json` with the sampled trajectory.
    #[arg(long, value_name = "STEM")]
    pub csv: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub drift_tol: f64,
}

#[derive(Subcommand, Debug)]
pub enum DispCmd {
    /// Evolve u, v under one dispersionless flow.
    Run(DispRun),
    /// Flow, Hamiltonian and identification checks.
    Check(DispCheck),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum DirectionArg {
    Z,
    ZTilde,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum USignArg {
    AsStated,
    LatticeConsistent,
}

#[derive(Args, Debug)]
pub struct DispRun {
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    #[arg(long, value_parser = parse::real, default_value = "2π")]
    pub length: f64,
    #[arg(long, default_value_t = 1)]
    pub j: usize,
    #[arg(long, value_enum, default_value = "z")]
    pub direction: DirectionArg,
    #[arg(long, default_value_t = 1.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    /// Background value of u.
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true, default_value = "-1")]
    pub u0: Complex64,
    /// Background value of v.
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true, default_value = "0.3+π/2i")]
    pub v0: Complex64,
    /// Amplitude of the cosine/sine perturbation.
    #[arg(long, default_value_t = 0.03)]
    pub amplitude: f64,
    #[arg(long, value_enum, default_value = "as-stated")]
    pub u_sign: USignArg,
    #[arg(long, default_value_t = 0)]
    pub sample_every: usize,
    /// Write `STEM_<k>.csv` per sample and `STEM.json`.
    #[arg(long, value_name = "STEM")]
    pub csv: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum DispCheckKind {
    Flows,
    Density,
    Hamiltonian,
    Identification,
    All,
}

#[derive(Args, Debug)]
pub struct DispCheck {
    #[arg(long, value_enum, default_value = "all")]
    pub kind: DispCheckKind,
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true, default_value = "0.2+0.06i")]
    pub zeta: Complex64,
    #[arg(long, default_value_t = 20)]
    pub points: usize,
    #[arg(long, default_value_t = 8)]
    pub seed: u64,
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true, default_value = "0.3+0.4i")]
    pub t: Complex64,
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true, default_value = "0.7")]
    pub x: Complex64,
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true, default_value = "1")]
    pub kappa: Complex64,
    /// Tolerance for the flow coefficient checks.
    #[arg(long, default_value_t = 1e-12)]
    pub flow_tol: f64,
    /// Tolerance for the density-constraint and Hamiltonian-form checks.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

fn configure_threads() -> Result<(), String> {
    if let Ok(v) = std::env::var("CONIFOLD_FLOWS_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| format!("CONIFOLD_FLOWS_THREADS must be a positive integer, got '{v}'"))?;
        if n == 0 {
            return Err("CONIFOLD_FLOWS_THREADS must be positive".into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let outcome = match cli.group {
        Group::Specfun { cmd: SpecfunCmd::Eval(a) } => commands::specfun_eval(&a),
        Group::Barnes { cmd: BarnesCmd::Eval(a) } => commands::barnes_eval(&a),
        Group::Gw { cmd: GwCmd::Eval(a) } => commands::gw_eval(&a),
        Group::Gw { cmd: GwCmd::CheckDiff(a) } => commands::gw_check_diff(&a),
        Group::Gw { cmd: GwCmd::ScanAsymptotics(a) } => commands::gw_scan(&a),
        Group::Hirota { cmd: HirotaCmd::Check(a) } => commands::hirota_check(&a),
        Group::Al { cmd: AlCmd::Run(a) } => commands::al_run(&a),
        Group::Disp { cmd: DispCmd::Run(a) } => commands::disp_run(&a),
        Group::Disp { cmd: DispCmd::Check(a) } => commands::disp_check(&a),
    };
    let report = match outcome {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = report.to_json();
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
