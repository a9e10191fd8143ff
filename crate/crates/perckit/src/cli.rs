//! The `perckit` command-line front end.
//!
//! Verb-noun subcommands over the library: `eval` (closed forms),
//! `verify` (PDE residuals and the spectral check, JSON report),
//! `sle` (Loewner Monte Carlo, CSV), `perc` (lattice Monte Carlo, CSV).
//!
//! Every stochastic command is reproducible byte-for-byte given
//! (args, seed) at any thread count. Exit codes: 0 success, 1 usage error,
//! 2 verification failure.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use crate::conformal::BoundaryConfig;
use crate::error::Result;
use crate::formulas;
use crate::lattice::{
    exponent_fit, factorization_ratio, measure, measure_coupled, Arc, EventSpec,
    FactorizationGeometry, LatticeRegion, SQRT3_2,
};
use crate::loewner::{self, SdeParams};
use crate::pde::{self, spectral, Scheme, StencilSpec};
use crate::report::{csv, fmt_f64, ResidualReport, RunManifest, VerifyReport};
use crate::rng::CounterRng;

/// Default master seed (override with --seed or PERCKIT_SEED).
pub const DEFAULT_SEED: u64 = 0x5EED_BA5E;

#[derive(Parser, Debug)]
#[command(name = "perckit", version, about = "Percolation connection probabilities: exact formulas and their numerical verification")]
pub struct Cli {
    /// Master seed for all stochastic commands.
    #[arg(long, global = true, env = "PERCKIT_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output file; a run manifest `run.json` is written alongside.
    /// Without this flag the report goes to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate the closed-form densities and constants.
    Eval(EvalArgs),
    /// Run the PDE-residual and spectral checks (JSON report).
    Verify(Box<VerifyArgs>),
    /// Loewner/SLE Monte Carlo checks (CSV).
    Sle(SleArgs),
    /// Triangular-lattice percolation Monte Carlo (CSV).
    Perc(PercArgs),
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(subcommand)]
    pub target: EvalTarget,
}

#[derive(Subcommand, Debug)]
pub enum EvalTarget {
    /// The constants K3, K4, K5, KF (all printed forms).
    Constants,
    /// Cardy crossing probability of (u1,u2) ↔ (u3,u4), or of −-eta.
    Cardy {
        #[arg(long, allow_hyphen_values = true)]
        u1: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        u2: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        u3: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        u4: Option<f64>,
        /// Cross-ratio shortcut.
        #[arg(long)]
        eta: Option<f64>,
    },
    /// Three-point boundary density C(u1,u2,u3); with --s the pre-limit
    /// crossing probability at scale s.
    C3 {
        #[arg(long, allow_hyphen_values = true)]
        u1: f64,
        #[arg(long, allow_hyphen_values = true)]
        u2: f64,
        #[arg(long, allow_hyphen_values = true)]
        u3: f64,
        #[arg(long)]
        s: Option<f64>,
    },
    /// Four-point density F(u1,u2,w).
    F4 {
        #[arg(long, allow_hyphen_values = true)]
        u1: f64,
        #[arg(long, allow_hyphen_values = true)]
        u2: f64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        w: Complex64,
    },
    /// Strip function G(x,y).
    G {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
    },
    /// Five-point density F(u1,u2,u3,w) (also prints the strip data).
    F5 {
        #[arg(long, allow_hyphen_values = true)]
        u1: f64,
        #[arg(long, allow_hyphen_values = true)]
        u2: f64,
        #[arg(long, allow_hyphen_values = true)]
        u3: f64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        w: Complex64,
    },
    /// Boundary two-point density P2(u1,u3).
    P2 {
        #[arg(long, allow_hyphen_values = true)]
        u1: f64,
        #[arg(long, allow_hyphen_values = true)]
        u3: f64,
    },
    /// Boundary-bulk density P3(u1,w).
    P3 {
        #[arg(long, allow_hyphen_values = true)]
        u1: f64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        w: Complex64,
    },
    /// Triple density P4(u1,u3,w).
    P4 {
        #[arg(long, allow_hyphen_values = true)]
        u1: f64,
        #[arg(long, allow_hyphen_values = true)]
        u3: f64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        w: Complex64,
    },
    /// Both sides of the factorization identity P4² = KF·P3·P3·P2.
    Factcheck {
        #[arg(long, allow_hyphen_values = true)]
        u1: f64,
        #[arg(long, allow_hyphen_values = true)]
        u3: f64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        w: Complex64,
    },
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Comma-separated checks (default: all).
    #[arg(long, value_delimiter = ',', default_values_t = [
        "cardy-pde".to_string(), "f-pde".to_string(), "fc-pde".to_string(),
        "radial-pde".to_string(), "eigen".to_string()
    ])]
    pub checks: Vec<String>,
    /// Eigen grid sizes (repeat; the finest two feed the extrapolation).
    #[arg(long = "grid")]
    pub grids: Vec<usize>,
    /// Stencil step for the residual checks.
    #[arg(long, default_value_t = 1e-4)]
    pub step: f64,
    /// Stencil order (2 or 4).
    #[arg(long, default_value_t = 4)]
    pub order: u8,
    /// Number of random configurations per residual check.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    /// Replace the 11/96 bracket exponent (negative control), e.g. 10/96.
    #[arg(long, value_parser = parse_fraction)]
    pub perturb: Option<f64>,
    /// Residual tolerance.
    #[arg(long, default_value_t = 1e-4)]
    pub tol_residual: f64,
    /// Eigenvalue tolerance after extrapolation.
    #[arg(long, default_value_t = 1e-4)]
    pub tol_eigen: f64,
}

#[derive(Args, Debug)]
pub struct SleArgs {
    #[command(subcommand)]
    pub target: SleTarget,
}

#[derive(Subcommand, Debug)]
pub enum SleTarget {
    /// E[|g'(u3)|^(1/3) C(t)] under plain SLE(6) at the checkpoints.
    MartingaleC {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        u1: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        u2: f64,
        #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
        u3: f64,
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 1e-4)]
        dt: f64,
        #[arg(long, default_value_t = 1e-5)]
        eps: f64,
        /// Checkpoint times.
        #[arg(long = "t", value_delimiter = ',', default_values_t = [0.0, 0.01, 0.05, 0.1])]
        checkpoints: Vec<f64>,
        /// Covariance exponent (1/3 is the martingale; others drift).
        #[arg(long, value_parser = parse_fraction, default_value = "1/3")]
        exponent: f64,
    },
    /// E[|g'(w)|^(5/48) F5(t)] under SLE(6,2,−2) at the checkpoints.
    MartingaleH {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        u1: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        u2: f64,
        #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
        u3: f64,
        #[arg(long, value_parser = parse_complex, default_value = "2+1.5i", allow_hyphen_values = true)]
        w: Complex64,
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 1e-4)]
        dt: f64,
        #[arg(long, default_value_t = 1e-5)]
        eps: f64,
        #[arg(long = "t", value_delimiter = ',', default_values_t = [0.0, 0.01, 0.05, 0.1])]
        checkpoints: Vec<f64>,
        /// G-bracket exponent (11/96 is the martingale; others drift).
        #[arg(long, value_parser = parse_fraction, default_value = "11/96")]
        bracket_exponent: f64,
    },
    /// Interval-hitting probability of plain SLE(6) vs Cardy's formula.
    HitCardy {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        u1: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        u2: f64,
        #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
        u3: f64,
        #[arg(long, default_value_t = 0.5)]
        half_width: f64,
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 1e-4)]
        dt: f64,
        #[arg(long, default_value_t = 1e-6)]
        eps: f64,
        /// Near-collision step-refinement constant (the race estimate
        /// converges as this goes to zero).
        #[arg(long, default_value_t = 0.002)]
        adapt_c: f64,
    },
    /// Drift of the conditioned process at general κ.
    DriftKappa {
        #[arg(long, default_value_t = 6.0)]
        kappa: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        u1: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        u2: f64,
        #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
        u3: f64,
    },
}

#[derive(Args, Debug)]
pub struct PercArgs {
    #[command(subcommand)]
    pub target: PercTarget,
}

#[derive(Subcommand, Debug)]
pub enum PercTarget {
    /// Self-dual left-right crossing on an L×L parallelogram.
    Crossing {
        #[arg(long, default_value_t = 128)]
        l: usize,
        #[arg(long, default_value_t = 100_000)]
        n: u64,
    },
    /// One-arm exponent fit over dyadic ε.
    Exponent {
        /// Event family: boundary (→ 1/3) or bulk (→ 5/48).
        #[arg(long, default_value = "boundary")]
        family: String,
        #[arg(long, default_value_t = 512)]
        l: usize,
        #[arg(long = "eps", value_delimiter = ',', value_parser = parse_fraction,
              default_values_t = [1.0/128.0, 1.0/64.0, 1.0/32.0, 1.0/16.0])]
        eps: Vec<f64>,
        #[arg(long, default_value_t = 20_000)]
        n: u64,
    },
    /// Factorization ratio P4²/(P3·P3·P2) vs the constant KF.
    Factorize {
        #[arg(long, default_value_t = 512)]
        l: usize,
        #[arg(long = "eps", value_parser = parse_fraction, default_value = "1/32")]
        eps: f64,
        #[arg(long, default_value_t = 20_000)]
        n: u64,
        /// Anchor geometry: centered or off-center.
        #[arg(long, default_value = "centered")]
        geometry: String,
    },
}

/// Parse "a/b" fractions or plain decimals.
pub fn parse_fraction(s: &str) -> std::result::Result<f64, String> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: f64 = num
            .trim()
            .parse()
            .map_err(|_| format!("bad fraction numerator: {num}"))?;
        let d: f64 = den
            .trim()
            .parse()
            .map_err(|_| format!("bad fraction denominator: {den}"))?;
        if d == 0.0 {
            return Err("zero denominator".into());
        }
        Ok(n / d)
    } else {
        s.parse().map_err(|_| format!("bad number: {s}"))
    }
}

/// Parse complex numbers like "2+1.5i", "-1+2i", "0.7i".
pub fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let body = compact
        .strip_suffix('i')
        .or_else(|| compact.strip_suffix('j'));
    let Some(body) = body else {
        let re: f64 = compact.parse().map_err(|_| format!("bad number: {s}"))?;
        return Ok(Complex64::new(re, 0.0));
    };
    // split at the last top-level sign (not an exponent sign, not leading)
    let bytes = body.as_bytes();
    let mut split = None;
    for pos in (1..bytes.len()).rev() {
        let c = bytes[pos];
        if (c == b'+' || c == b'-') && !matches!(bytes[pos - 1], b'e' | b'E') {
            split = Some(pos);
            break;
        }
    }
    let (re_str, im_str) = match split {
        Some(pos) => (&body[..pos], &body[pos..]),
        None => ("0", body),
    };
    let re: f64 = if re_str.is_empty() {
        0.0
    } else {
        re_str.parse().map_err(|_| format!("bad real part: {s}"))?
    };
    let im: f64 = match im_str {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse().map_err(|_| format!("bad imaginary part: {s}"))?,
    };
    Ok(Complex64::new(re, im))
}

/// Expand `--config FILE` (a flat key=value file, e.g. `seed=7`) into
/// equivalent flags; explicit command-line flags win.
fn expand_config_args(mut argv: Vec<String>) -> std::result::Result<Vec<String>, String> {
    let Some(pos) = argv.iter().position(|a| a == "--config") else {
        return Ok(argv);
    };
    if pos + 1 >= argv.len() {
        return Err("--config needs a file path".into());
    }
    let path = argv.remove(pos + 1);
    argv.remove(pos);
    let text = std::fs::read_to_string(&path).map_err(|e| format!("cannot read {path}: {e}"))?;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("bad config line (expected key=value): {line}"));
        };
        let flag = format!("--{}", key.trim());
        if !argv.contains(&flag) {
            argv.push(flag);
            argv.push(value.trim().to_string());
        }
    }
    Ok(argv)
}

/// Entry point; returns the process exit code.
pub fn run() -> i32 {
    let argv = match expand_config_args(std::env::args().collect()) {
        Ok(argv) => argv,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 1;
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    if let Some(t) = cli.threads {
        // ignore the error if a global pool already exists (tests)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Eval(args) => run_eval(cli, args),
        Command::Verify(args) => run_verify(cli, args),
        Command::Sle(args) => run_sle(cli, args),
        Command::Perc(args) => run_perc(cli, args),
    }
}

fn emit(cli: &Cli, content: &str, manifest: &RunManifest) -> Result<()> {
    match &cli.out {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => {
            write_file(path, content)?;
            let manifest_path = path
                .parent()
                .unwrap_or_else(|| Path::new("."))
                .join("run.json");
            write_file(&manifest_path, &(manifest.to_json() + "\n"))?;
            Ok(())
        }
    }
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    let mut f = std::fs::File::create(path)
        .map_err(|e| crate::Error::Domain(format!("cannot create {}: {e}", path.display())))?;
    f.write_all(content.as_bytes())
        .map_err(|e| crate::Error::Domain(format!("cannot write {}: {e}", path.display())))
}

fn manifest_for(cli: &Cli, command: &str, args: &[(&str, String)]) -> RunManifest {
    let mut m = RunManifest::new(command, cli.seed, cli.threads);
    let mut map = BTreeMap::new();
    for (k, v) in args {
        map.insert((*k).to_string(), v.clone());
    }
    m.args = map;
    m
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

fn run_eval(cli: &Cli, args: &EvalArgs) -> Result<i32> {
    let mut out = String::new();
    match &args.target {
        EvalTarget::Constants => {
            let k = formulas::constants();
            let forms = formulas::kf_forms();
            out.push_str(&format!(
                "K3 = {}   [sqrt(pi)/(Gamma(1/3)Gamma(7/6))]\n",
                fmt_f64(k.k3)
            ));
            out.push_str(&format!("K4 = {}   [18/(5 pi)]\n", fmt_f64(k.k4)));
            out.push_str(&format!(
                "K5 = {}   [K4 pi^(5/48) / (2^(5/48) 2F1(-1/2,-1/3;7/6;1))]\n",
                fmt_f64(k.k5)
            ));
            out.push_str(&format!(
                "KF = {}   [2^7 pi^5 / (3^(3/2) Gamma(1/3)^9)]\n",
                fmt_f64(k.kf)
            ));
            out.push_str(&format!(
                "KF (K-chain form)         = {}\n",
                fmt_f64(forms.chain_form)
            ));
            out.push_str(&format!(
                "KF (hypergeometric form)  = {}\n",
                fmt_f64(forms.hypergeometric_form)
            ));
            let spread = ((forms.chain_form - forms.gamma_form) / forms.gamma_form)
                .abs()
                .max(((forms.hypergeometric_form - forms.gamma_form) / forms.gamma_form).abs());
            out.push_str(&format!(
                "KF printed forms agree to a relative spread of {:.2e}\n",
                spread
            ));
        }
        EvalTarget::Cardy { u1, u2, u3, u4, eta } => {
            let value = match (eta, u1, u2, u3, u4) {
                (Some(eta), ..) => formulas::cardy_of_cross_ratio(*eta)?,
                (None, Some(u1), Some(u2), Some(u3), Some(u4)) => {
                    formulas::cardy_crossing(*u1, *u2, *u3, *u4)?
                }
                _ => {
                    return Err(crate::Error::Domain(
                        "cardy needs either --eta or all of --u1 --u2 --u3 --u4".into(),
                    ))
                }
            };
            out.push_str(&format!("cardy = {}\n", fmt_f64(value)));
        }
        EvalTarget::C3 { u1, u2, u3, s } => match s {
            None => out.push_str(&format!(
                "C3 = {}\n",
                fmt_f64(formulas::three_point_c(*u1, *u2, *u3)?)
            )),
            Some(s) => out.push_str(&format!(
                "C3(s={s}) = {}\n",
                fmt_f64(formulas::three_point_c_at_scale(*u1, *u2, *u3, *s)?)
            )),
        },
        EvalTarget::F4 { u1, u2, w } => {
            out.push_str(&format!(
                "F4 = {}\n",
                fmt_f64(formulas::four_point_f(*u1, *u2, *w)?)
            ));
        }
        EvalTarget::G { x, y } => {
            out.push_str(&format!("G = {}\n", fmt_f64(formulas::g_strip(*x, *y)?)));
        }
        EvalTarget::F5 { u1, u2, u3, w } => {
            let cfg = BoundaryConfig::new(*u1, *u2, *u3, *w)?;
            let sp = crate::conformal::strip_map(&cfg)?;
            out.push_str(&format!(
                "F5 = {}\n",
                fmt_f64(formulas::five_point_f(&cfg)?)
            ));
            out.push_str(&format!("strip x      = {}\n", fmt_f64(sp.x)));
            out.push_str(&format!("strip y      = {}\n", fmt_f64(sp.y)));
            out.push_str(&format!("|psi'(w)|    = {}\n", fmt_f64(sp.deriv_mod)));
        }
        EvalTarget::P2 { u1, u3 } => {
            out.push_str(&format!("P2 = {}\n", fmt_f64(formulas::p2(*u1, *u3)?)));
        }
        EvalTarget::P3 { u1, w } => {
            out.push_str(&format!("P3 = {}\n", fmt_f64(formulas::p3(*u1, *w)?)));
        }
        EvalTarget::P4 { u1, u3, w } => {
            out.push_str(&format!("P4 = {}\n", fmt_f64(formulas::p4(*u1, *u3, *w)?)));
        }
        EvalTarget::Factcheck { u1, u3, w } => {
            let lhs = formulas::p4(*u1, *u3, *w)?.powi(2);
            let rhs = formulas::constants().kf
                * formulas::p3(*u1, *w)?
                * formulas::p3(*u3, *w)?
                * formulas::p2(*u1, *u3)?;
            out.push_str(&format!("P4^2            = {}\n", fmt_f64(lhs)));
            out.push_str(&format!("KF P3 P3 P2     = {}\n", fmt_f64(rhs)));
            out.push_str(&format!(
                "relative diff   = {:.3e}\n",
                ((lhs - rhs) / rhs).abs()
            ));
        }
    }
    let manifest = manifest_for(cli, "eval", &[("target", format!("{:?}", args.target))]);
    emit(cli, &out, &manifest)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn random_configs(samples: usize, seed: u64) -> Vec<BoundaryConfig> {
    let mut rng = CounterRng::stream(seed, 0xC0FFEE);
    (0..samples)
        .map(|_| {
            let u1 = -2.0 + rng.uniform();
            let u2 = u1 + 0.5 + 4.5 * rng.uniform();
            let u3 = u2 + 0.5 + 4.5 * rng.uniform();
            let w = Complex64::new(
                u1 - 1.0 + (u3 - u1 + 2.0) * rng.uniform(),
                0.5 + 2.5 * rng.uniform(),
            );
            BoundaryConfig::new(u1, u2, u3, w).expect("construction is valid")
        })
        .collect()
}

fn scheme_of(order: u8) -> Result<Scheme> {
    match order {
        2 => Ok(Scheme::Centered2),
        4 => Ok(Scheme::Centered4),
        _ => Err(crate::Error::Domain("stencil order must be 2 or 4".into())),
    }
}

fn measured_order<F: Fn(f64) -> Result<f64>>(residual_at: F, coarse: f64) -> Result<f64> {
    let r1 = residual_at(coarse)?.abs();
    let r2 = residual_at(coarse / 2.0)?.abs();
    Ok((r1 / r2).log2())
}

fn run_verify(cli: &Cli, args: &VerifyArgs) -> Result<i32> {
    let scheme = scheme_of(args.order)?;
    let nominal_coarse = match scheme {
        Scheme::Centered2 => 0.01,
        Scheme::Centered4 => 0.04,
    };
    let spec = StencilSpec::new(args.step, scheme)?;
    let configs = random_configs(args.samples, cli.seed);
    let mut checks = Vec::new();

    for name in &args.checks {
        let report = match name.as_str() {
            "cardy-pde" => {
                let mut max_res = 0.0f64;
                for cfg in &configs {
                    let u3 = cfg.u3.finite().expect("finite");
                    let r = pde::cardy_pde_residual((cfg.u1, cfg.u2, u3), &spec)?;
                    max_res = max_res.max(r.value.abs());
                }
                let order = measured_order(
                    |h| {
                        Ok(pde::cardy_pde_residual(
                            (0.0, 1.0, 3.0),
                            &StencilSpec::new(h, scheme)?,
                        )?
                        .value)
                    },
                    nominal_coarse,
                )?;
                ResidualReport {
                    check_name: name.clone(),
                    points_tested: configs.len(),
                    max_residual: max_res,
                    convergence_order: order,
                    passed: max_res < args.tol_residual,
                }
            }
            "f-pde" => {
                let mut max_res = 0.0f64;
                for cfg in &configs {
                    let r = pde::f_pde_residual(cfg, &spec)?;
                    max_res = max_res.max(r.value.abs());
                }
                let reference =
                    BoundaryConfig::new(0.0, 1.0, 3.0, Complex64::new(2.0, 1.5))?;
                let order = measured_order(
                    |h| Ok(pde::f_pde_residual(&reference, &StencilSpec::new(h, scheme)?)?.value),
                    nominal_coarse,
                )?;
                ResidualReport {
                    check_name: name.clone(),
                    points_tested: configs.len(),
                    max_residual: max_res,
                    convergence_order: order,
                    passed: max_res < args.tol_residual,
                }
            }
            "fc-pde" => {
                let bracket = args.perturb.unwrap_or(11.0 / 96.0);
                let mut max_res = 0.0f64;
                for cfg in &configs {
                    let r = pde::fc_pde_residual_with_bracket_exponent(cfg, &spec, bracket)?;
                    max_res = max_res.max(r.value.abs());
                }
                let reference =
                    BoundaryConfig::new(0.0, 1.0, 3.0, Complex64::new(2.0, 1.5))?;
                let order = measured_order(
                    |h| {
                        Ok(pde::fc_pde_residual_with_bracket_exponent(
                            &reference,
                            &StencilSpec::new(h, scheme)?,
                            bracket,
                        )?
                        .value)
                    },
                    nominal_coarse,
                )?;
                ResidualReport {
                    check_name: name.clone(),
                    points_tested: configs.len(),
                    max_residual: max_res,
                    convergence_order: order,
                    passed: max_res < args.tol_residual,
                }
            }
            "radial-pde" => {
                let run_at = |n: usize| -> Result<f64> {
                    let grid = pde::RadialGrid::sample(
                        pde::leading_mode,
                        (0.5, 2.0 * std::f64::consts::PI - 0.5),
                        n,
                        (0.0, 1.0),
                        n / 2 + 1,
                    )?;
                    Ok(pde::radial_pde_residual(&grid, &spec)?.value)
                };
                let res = run_at(201)?;
                // order measured with the 2nd-order scheme where truncation
                // dominates
                let coarse = {
                    let g = pde::RadialGrid::sample(
                        pde::leading_mode,
                        (0.8, 2.0 * std::f64::consts::PI - 0.8),
                        51,
                        (0.0, 0.5),
                        51,
                    )?;
                    pde::radial_pde_residual(&g, &StencilSpec::new(1.0, Scheme::Centered2)?)?.value
                };
                let fine = {
                    let g = pde::RadialGrid::sample(
                        pde::leading_mode,
                        (0.8, 2.0 * std::f64::consts::PI - 0.8),
                        101,
                        (0.0, 0.5),
                        101,
                    )?;
                    pde::radial_pde_residual(&g, &StencilSpec::new(1.0, Scheme::Centered2)?)?.value
                };
                ResidualReport {
                    check_name: name.clone(),
                    points_tested: 201 * 101,
                    max_residual: res,
                    convergence_order: (coarse / fine).log2(),
                    passed: res < 1e-3,
                }
            }
            "eigen" => {
                let mut grids = args.grids.clone();
                if grids.is_empty() {
                    grids = vec![1000, 2000];
                }
                grids.sort_unstable();
                if grids.len() < 2 {
                    return Err(crate::Error::Domain(
                        "eigen check needs at least two --grid sizes".into(),
                    ));
                }
                let (n1, n2) = (grids[grids.len() - 2], grids[grids.len() - 1]);
                let coarse = spectral::leading_eigenpair(&spectral::RadialOperator::new(n1)?)?;
                let fine = spectral::leading_eigenpair(&spectral::RadialOperator::new(n2)?)?;
                let ratio = n2 as f64 / n1 as f64;
                let extrapolated = spectral::richardson(
                    coarse.eigenvalue,
                    fine.eigenvalue,
                    ratio,
                    spectral::EIGENVALUE_ERROR_ORDER,
                );
                let target = -5.0 / 144.0;
                let defect = (extrapolated - target).abs();
                // eigenvector deviation on [0.1, 2π−0.1]
                let op = spectral::RadialOperator::new(n2)?;
                let psi_exact: Vec<f64> = op.grid.iter().map(|&t| pde::psi0(t)).collect();
                let sup = psi_exact.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                let mut vec_dev = 0.0f64;
                for (j, &theta) in op.grid.iter().enumerate() {
                    if !(0.1..=2.0 * std::f64::consts::PI - 0.1).contains(&theta) {
                        continue;
                    }
                    let exact = psi_exact[j] / sup;
                    vec_dev = vec_dev.max((fine.eigenvector[j] - exact).abs() / exact);
                }
                let half = spectral::leading_eigenpair(&spectral::RadialOperator::new(n1 / 2)?)?;
                let measured = ((half.eigenvalue - coarse.eigenvalue)
                    / (coarse.eigenvalue - fine.eigenvalue))
                    .log2()
                    / (ratio).log2();
                // the corrected scheme's error can sit below the level where
                // an order is measurable; report the order actually applied
                let measured = if measured.is_finite() {
                    measured
                } else {
                    spectral::EIGENVALUE_ERROR_ORDER
                };
                ResidualReport {
                    check_name: name.clone(),
                    points_tested: n2,
                    max_residual: defect,
                    convergence_order: measured,
                    passed: defect < args.tol_eigen
                        && vec_dev < 1e-3
                        && fine.second_eigenvalue < fine.eigenvalue,
                }
            }
            other => {
                return Err(crate::Error::Domain(format!("unknown check: {other}")));
            }
        };
        checks.push(report);
    }
    let passed = checks.iter().all(|c| c.passed);
    let report = VerifyReport { checks, passed };
    let json = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    let manifest = manifest_for(
        cli,
        "verify",
        &[
            ("checks", args.checks.join(",")),
            ("step", args.step.to_string()),
            ("order", args.order.to_string()),
            ("samples", args.samples.to_string()),
            ("perturb", format!("{:?}", args.perturb)),
        ],
    );
    emit(cli, &json, &manifest)?;
    if passed {
        Ok(0)
    } else {
        let failing: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.check_name.as_str())
            .collect();
        eprintln!("verification failed: {}", failing.join(", "));
        Ok(2)
    }
}

// ---------------------------------------------------------------------------
// sle
// ---------------------------------------------------------------------------

const SLE_CSV_HEADER: [&str; 8] = ["check", "t", "n_alive", "mean", "stderr", "dt", "eps", "seed"];

#[allow(clippy::too_many_arguments)]
fn sle_row(
    check: &str,
    t: f64,
    n_alive: usize,
    mean: f64,
    stderr: f64,
    dt: f64,
    eps: f64,
    seed: u64,
) -> Vec<String> {
    vec![
        check.to_string(),
        fmt_f64(t),
        n_alive.to_string(),
        fmt_f64(mean),
        fmt_f64(stderr),
        fmt_f64(dt),
        fmt_f64(eps),
        seed.to_string(),
    ]
}

fn run_sle(cli: &Cli, args: &SleArgs) -> Result<i32> {
    let seed = cli.seed;
    let (content, manifest) = match &args.target {
        SleTarget::MartingaleC {
            u1,
            u2,
            u3,
            n,
            dt,
            eps,
            checkpoints,
            exponent,
        } => {
            let params = SdeParams::plain(6.0)?.with_dt(*dt).with_swallow_eps(*eps);
            let stats =
                loewner::martingale_check_c(*u1, *u2, *u3, &params, *n, seed, checkpoints, *exponent)?;
            let rows: Vec<Vec<String>> = stats
                .iter()
                .map(|s| sle_row("martingale_c", s.t, s.n_alive, s.mean, s.stderr, *dt, *eps, seed))
                .collect();
            (
                csv(&SLE_CSV_HEADER, &rows),
                manifest_for(
                    cli,
                    "sle martingale-c",
                    &[
                        ("u1", u1.to_string()),
                        ("u2", u2.to_string()),
                        ("u3", u3.to_string()),
                        ("n", n.to_string()),
                        ("dt", dt.to_string()),
                        ("eps", eps.to_string()),
                        ("exponent", exponent.to_string()),
                    ],
                ),
            )
        }
        SleTarget::MartingaleH {
            u1,
            u2,
            u3,
            w,
            n,
            dt,
            eps,
            checkpoints,
            bracket_exponent,
        } => {
            let cfg = BoundaryConfig::new(*u1, *u2, *u3, *w)?;
            let params = SdeParams::sle_6_2_m2().with_dt(*dt).with_swallow_eps(*eps);
            let stats = loewner::martingale_check_h(
                &cfg,
                &params,
                *n,
                seed,
                checkpoints,
                *bracket_exponent,
            )?;
            let rows: Vec<Vec<String>> = stats
                .iter()
                .map(|s| sle_row("martingale_h", s.t, s.n_alive, s.mean, s.stderr, *dt, *eps, seed))
                .collect();
            (
                csv(&SLE_CSV_HEADER, &rows),
                manifest_for(
                    cli,
                    "sle martingale-h",
                    &[
                        ("u1", u1.to_string()),
                        ("u2", u2.to_string()),
                        ("u3", u3.to_string()),
                        ("w", w.to_string()),
                        ("n", n.to_string()),
                        ("dt", dt.to_string()),
                        ("eps", eps.to_string()),
                        ("bracket_exponent", bracket_exponent.to_string()),
                    ],
                ),
            )
        }
        SleTarget::HitCardy {
            u1,
            u2,
            u3,
            half_width,
            n,
            dt,
            eps,
            adapt_c,
        } => {
            let mut params = SdeParams::plain(6.0)?.with_dt(*dt).with_swallow_eps(*eps);
            params.dt_adapt_c = *adapt_c;
            let est = loewner::hit_cardy(*u1, *u2, *u3, *half_width, &params, *n, seed)?;
            let rows = vec![
                sle_row(
                    "hit_cardy",
                    0.0,
                    (est.n - est.n_horizon) as usize,
                    est.p_hat,
                    est.stderr,
                    *dt,
                    *eps,
                    seed,
                ),
                sle_row("cardy_formula", 0.0, 0, est.cardy, 0.0, *dt, *eps, seed),
            ];
            (
                csv(&SLE_CSV_HEADER, &rows),
                manifest_for(
                    cli,
                    "sle hit-cardy",
                    &[
                        ("u1", u1.to_string()),
                        ("u2", u2.to_string()),
                        ("u3", u3.to_string()),
                        ("half_width", half_width.to_string()),
                        ("n", n.to_string()),
                        ("dt", dt.to_string()),
                        ("eps", eps.to_string()),
                    ],
                ),
            )
        }
        SleTarget::DriftKappa { kappa, u1, u2, u3 } => {
            let drift = loewner::general_kappa_drift(*u1, *u2, *u3, *kappa)?;
            let mut rows = vec![sle_row("drift_kappa", 0.0, 0, drift, 0.0, 0.0, 0.0, seed)];
            if (*kappa - 6.0).abs() < 1e-12 {
                let closed = -2.0 / (u2 - u3) + 2.0 / (u2 - u1);
                rows.push(sle_row(
                    "drift_kappa_closed_form",
                    0.0,
                    0,
                    closed,
                    0.0,
                    0.0,
                    0.0,
                    seed,
                ));
            }
            (
                csv(&SLE_CSV_HEADER, &rows),
                manifest_for(
                    cli,
                    "sle drift-kappa",
                    &[
                        ("kappa", kappa.to_string()),
                        ("u1", u1.to_string()),
                        ("u2", u2.to_string()),
                        ("u3", u3.to_string()),
                    ],
                ),
            )
        }
    };
    emit(cli, &content, &manifest)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// perc
// ---------------------------------------------------------------------------

const PERC_CSV_HEADER: [&str; 8] = [
    "event", "L", "epsilon", "n", "hits", "p_hat", "stderr", "seed",
];

fn perc_row(event: &str, est: &crate::lattice::Estimate) -> Vec<String> {
    vec![
        event.to_string(),
        est.l.to_string(),
        fmt_f64(est.epsilon),
        est.n.to_string(),
        est.hits.to_string(),
        fmt_f64(est.p_hat),
        fmt_f64(est.stderr),
        est.seed.to_string(),
    ]
}

fn run_perc(cli: &Cli, args: &PercArgs) -> Result<i32> {
    let seed = cli.seed;
    let (content, manifest) = match &args.target {
        PercTarget::Crossing { l, n } => {
            let region = LatticeRegion::new(*l, *l)?;
            let est = measure(
                &EventSpec::Crossing {
                    arc_a: Arc::Left,
                    arc_b: Arc::Right,
                },
                &region,
                *n,
                seed,
            )?;
            (
                csv(&PERC_CSV_HEADER, &[perc_row("crossing_lr", &est)]),
                manifest_for(
                    cli,
                    "perc crossing",
                    &[
                        ("l", l.to_string()),
                        ("n", n.to_string()),
                        ("region", format!("{l}x{l} parallelogram")),
                        ("event", "crossing(left, right)".into()),
                    ],
                ),
            )
        }
        PercTarget::Exponent { family, l, eps, n } => {
            // one-arm realizations on the L×L parallelogram: the boundary
            // family connects a bottom-center ball to the far side, the
            // bulk family a center ball to the whole boundary (long-bridge
            // arc↔point families carry much larger corrections to scaling
            // at feasible L and would not resolve the exponents)
            let region = LatticeRegion::new(*l, *l)?;
            let center = (
                0.75 - 0.5 / *l as f64,
                0.5 * (*l as f64 - 1.0) * SQRT3_2 / *l as f64,
            );
            let events: Vec<EventSpec> = eps
                .iter()
                .map(|&e| match family.as_str() {
                    "boundary" => Ok(EventSpec::BoundaryPoint {
                        arc: Arc::Top,
                        u3: 0.5,
                        epsilon: e,
                    }),
                    "bulk" => Ok(EventSpec::BulkPoint {
                        arc: Arc::Boundary,
                        w: center,
                        epsilon: e,
                    }),
                    other => Err(crate::Error::Domain(format!(
                        "unknown family: {other} (expected boundary or bulk)"
                    ))),
                })
                .collect::<Result<_>>()?;
            let estimates = measure_coupled(&events, &region, *n, seed)?;
            let points: Vec<(f64, f64, f64)> = estimates
                .iter()
                .map(|e| (e.epsilon, e.p_hat, e.stderr))
                .collect();
            let fit = exponent_fit(&points)?;
            let mut rows: Vec<Vec<String>> = events
                .iter()
                .zip(&estimates)
                .map(|(ev, est)| perc_row(ev.name(), est))
                .collect();
            rows.push(vec![
                format!("exponent_fit_{family}"),
                l.to_string(),
                fmt_f64(0.0),
                fit.n_used.to_string(),
                fit.n_dropped.to_string(),
                fmt_f64(fit.slope),
                fmt_f64(fit.slope_err),
                seed.to_string(),
            ]);
            (
                csv(&PERC_CSV_HEADER, &rows),
                manifest_for(
                    cli,
                    "perc exponent",
                    &[
                        ("family", family.clone()),
                        ("l", l.to_string()),
                        ("n", n.to_string()),
                        (
                            "eps",
                            eps.iter()
                                .map(|e| e.to_string())
                                .collect::<Vec<_>>()
                                .join(","),
                        ),
                        ("region", format!("{l}x{l} parallelogram")),
                        (
                            "event",
                            match family.as_str() {
                                "boundary" => "boundary_point(arc: top, u3: 0.5L)".to_string(),
                                _ => format!(
                                    "bulk_point(arc: boundary, w: ({:.6}, {:.6})L)",
                                    center.0, center.1
                                ),
                            },
                        ),
                    ],
                ),
            )
        }
        PercTarget::Factorize {
            l,
            eps,
            n,
            geometry,
        } => {
            let geom = match geometry.as_str() {
                "centered" => FactorizationGeometry::centered(),
                "off-center" => FactorizationGeometry::off_center(),
                other => {
                    return Err(crate::Error::Domain(format!(
                        "unknown geometry: {other} (expected centered or off-center)"
                    )))
                }
            };
            // taller region: the bulk anchor sits at height 0.35L
            let region = LatticeRegion::new(*l, 4 * *l / 5)?;
            let est = factorization_ratio(&geom, &region, *eps, *n, seed)?;
            let labels = ["p2_u1u3", "p3_u1w", "p3_u3w", "p4"];
            let mut rows: Vec<Vec<String>> = labels
                .iter()
                .zip(&est.components)
                .map(|(label, e)| perc_row(label, e))
                .collect();
            match est.ratio {
                Some((ratio, err)) => {
                    let kf = formulas::constants().kf;
                    rows.push(vec![
                        "factorization_ratio".into(),
                        l.to_string(),
                        fmt_f64(*eps),
                        n.to_string(),
                        "0".into(),
                        fmt_f64(ratio),
                        fmt_f64(err),
                        seed.to_string(),
                    ]);
                    rows.push(vec![
                        "kf_reference".into(),
                        l.to_string(),
                        fmt_f64(*eps),
                        "0".into(),
                        "0".into(),
                        fmt_f64(kf),
                        fmt_f64(0.0),
                        seed.to_string(),
                    ]);
                }
                None => {
                    rows.push(vec![
                        "factorization_ratio_censored".into(),
                        l.to_string(),
                        fmt_f64(*eps),
                        n.to_string(),
                        "0".into(),
                        "nan".into(),
                        "nan".into(),
                        seed.to_string(),
                    ]);
                }
            }
            (
                csv(&PERC_CSV_HEADER, &rows),
                manifest_for(
                    cli,
                    "perc factorize",
                    &[
                        ("l", l.to_string()),
                        ("eps", eps.to_string()),
                        ("n", n.to_string()),
                        ("geometry", geometry.clone()),
                        ("region", format!("{}x{} parallelogram", region.width, region.height)),
                        (
                            "anchors",
                            format!(
                                "u1: {}L, u3: {}L, w: ({}, {})L",
                                geom.u1, geom.u3, geom.w.0, geom.w.1
                            ),
                        ),
                    ],
                ),
            )
        }
    };
    emit(cli, &content, &manifest)?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("2+1.5i").unwrap(), Complex64::new(2.0, 1.5));
        assert_eq!(parse_complex("-1+2i").unwrap(), Complex64::new(-1.0, 2.0));
        assert_eq!(parse_complex("0.7i").unwrap(), Complex64::new(0.0, 0.7));
        assert_eq!(parse_complex("3-i").unwrap(), Complex64::new(3.0, -1.0));
        assert_eq!(parse_complex("1e-3+2e-2i").unwrap(), Complex64::new(1e-3, 2e-2));
        assert_eq!(parse_complex("5").unwrap(), Complex64::new(5.0, 0.0));
        assert!(parse_complex("snail").is_err());
    }

    #[test]
    fn fraction_parsing() {
        assert_eq!(parse_fraction("11/96").unwrap(), 11.0 / 96.0);
        assert_eq!(parse_fraction("0.25").unwrap(), 0.25);
        assert!(parse_fraction("1/0").is_err());
        assert!(parse_fraction("x").is_err());
    }

    #[test]
    fn cli_parses_typical_lines() {
        Cli::try_parse_from(["perckit", "eval", "constants"]).unwrap();
        Cli::try_parse_from(["perckit", "eval", "g", "--x", "10", "--y", "0.5"]).unwrap();
        Cli::try_parse_from([
            "perckit", "eval", "factcheck", "--u1", "0", "--u3", "2", "--w", "1+1.5i",
        ])
        .unwrap();
        Cli::try_parse_from(["perckit", "verify", "--grid", "200", "--grid", "400"]).unwrap();
        Cli::try_parse_from(["perckit", "sle", "hit-cardy", "--n", "10000"]).unwrap();
        Cli::try_parse_from([
            "perckit",
            "sle",
            "martingale-h",
            "--n",
            "10000",
            "--t",
            "0.01,0.05,0.1",
        ])
        .unwrap();
        Cli::try_parse_from(["perckit", "perc", "crossing", "--l", "128", "--n", "100000"])
            .unwrap();
        Cli::try_parse_from([
            "perckit", "perc", "exponent", "--family", "boundary", "--l", "512",
        ])
        .unwrap();
        Cli::try_parse_from([
            "perckit", "perc", "factorize", "--l", "512", "--eps", "1/32",
        ])
        .unwrap();
        assert!(Cli::try_parse_from(["perckit", "nonsense"]).is_err());
    }

    #[test]
    fn verify_accepts_perturbation_flag() {
        let cli =
            Cli::try_parse_from(["perckit", "verify", "--checks", "fc-pde", "--perturb", "10/96"])
                .unwrap();
        match &cli.command {
            Command::Verify(v) => assert_eq!(v.perturb, Some(10.0 / 96.0)),
            _ => panic!("wrong command"),
        }
    }
}
