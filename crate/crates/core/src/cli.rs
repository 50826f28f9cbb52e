//! The `ptsim` command line.
//!
//! Every subcommand prints JSON on stdout (except `zgrid` without `--out`,
//! which prints CSV). Exit codes: 0 success, 1 numerical or domain failure,
//! 2 usage, I/O or parse failure. State indices are 1-based here.

use std::f64::consts::{FRAC_PI_4, SQRT_2};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::dilation::{
    build_dilation, embed_unbroken, frame_vectors, DilationOptions, DilationResult, FrameScaling,
};
use crate::error::Error;
use crate::io::{self, FormatError, LoadError, SystemFile};
use crate::linalg::{CMatrix, C64};
use crate::pt::{
    canonical_pair, classify_detailed, validate_pt, BenderModel, CanonicalData, PTSystem,
};
use crate::random;
use crate::repro;
use crate::tolerance::Tolerances;
use crate::weak::{self, WeakSetup};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_FORMAT: i32 = 2;

const DEFAULT_T_SAMPLES: [f64; 4] = [0.1, 0.5, 1.0, 5.0];
const EMBEDDING_BOUND: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(
    name = "ptsim",
    version,
    about = "Hermitian dilations of PT-symmetric Hamiltonians and weak-measurement simulation"
)]
pub struct Cli {
    /// Residual tolerance (overrides PTSIM_TOL)
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate the PT relations of a system file and classify it
    Check { system: PathBuf },
    /// Canonical pair (J, S) with frame and metric
    Canon {
        system: PathBuf,
        /// Metric to normalize against (overrides any `eta` in the system file)
        #[arg(long)]
        eta: Option<PathBuf>,
    },
    /// Build the Hermitian dilation (or the unbroken embedding) of a system
    Dilate(DilateArgs),
    /// Weak value of H~ between two states of a dilation bundle
    WeakValue {
        bundle: PathBuf,
        /// psi:i, phi:i, mu:i, a bare index i (= psi:i), or a vector file
        #[arg(long)]
        pre: String,
        #[arg(long)]
        post: String,
    },
    /// Exact versus weak-approximated post-selected pointer state
    Pointer(PointerArgs),
    /// Z-parameter grid of the two-level model as CSV
    Zgrid(ZgridArgs),
    /// Z parameters of the two-level model along shrinking t
    Zconv(ZconvArgs),
    /// Isometric embedding of an unbroken system
    EmbedUnbroken(EmbedArgs),
    /// Randomized consistency checks
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
    /// Write a system file for a built-in model
    #[command(subcommand)]
    Model(ModelCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Dilate,
    Embed,
}

#[derive(Debug, Args)]
pub struct DilateArgs {
    pub system: PathBuf,
    /// `psi` for Xi = Psi, or a matrix file
    #[arg(long, default_value = "psi")]
    pub xi: String,
    #[arg(long, value_enum, default_value_t = Mode::Dilate)]
    pub mode: Mode,
    /// `auto`, or a fixed positive constant c
    #[arg(long)]
    pub scale: Option<String>,
    /// Write the bundle here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PointerArgs {
    /// Setup file; alternatively give --bundle, --pre, --post and --g
    pub setup: Option<PathBuf>,
    #[arg(long, conflicts_with = "setup", requires_all = ["pre", "post", "g"])]
    pub bundle: Option<PathBuf>,
    #[arg(long)]
    pub pre: Option<String>,
    #[arg(long)]
    pub post: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub g: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub width: f64,
    #[arg(long, default_value_t = weak::DEFAULT_GRID_POINTS)]
    pub grid: usize,
    #[arg(long, allow_negative_numbers = true)]
    pub qmin: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub qmax: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ZgridArgs {
    #[arg(long, default_value_t = SQRT_2)]
    pub r: f64,
    #[arg(long, default_value_t = FRAC_PI_4)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.2)]
    pub t_max: f64,
    #[arg(long, default_value_t = 0.2)]
    pub s_max: f64,
    #[arg(long, default_value_t = 41)]
    pub steps: usize,
    /// CSV destination; the maxima then go to stdout as one JSON line
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ZconvArgs {
    #[arg(long, default_value_t = SQRT_2)]
    pub r: f64,
    #[arg(long, default_value_t = FRAC_PI_4)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.1)]
    pub s: f64,
    #[arg(long, value_delimiter = ',', default_values_t = [0.2, 0.1, 0.05, 0.025])]
    pub t: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    /// System file; omit when using --gs
    #[arg(required_unless_present = "gs")]
    pub system: Option<PathBuf>,
    /// Closed-form unbroken model: E0,s,theta
    #[arg(long, value_delimiter = ',', num_args = 1, allow_negative_numbers = true, conflicts_with = "system")]
    pub gs: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_T_SAMPLES)]
    pub t: Vec<f64>,
}

#[derive(Debug, Subcommand)]
pub enum ModelCommand {
    /// H = [[r e^{i theta}, s], [s, r e^{-i theta}]], P = swap, T = I
    Bender {
        #[arg(long, default_value_t = SQRT_2)]
        r: f64,
        #[arg(long, default_value_t = FRAC_PI_4)]
        theta: f64,
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A failed command and the exit code it maps to.
#[derive(Debug)]
pub enum Failure {
    Domain { kind: &'static str, message: String },
    Format(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain {
            kind: e.kind(),
            message: e.to_string(),
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::Format(e.to_string())
    }
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Format(f) => f.into(),
            LoadError::Domain(d) => d.into(),
        }
    }
}

/// What a successful command prints, and whether it counts as a pass.
pub struct Output {
    pub text: String,
    pub ok: bool,
}

impl Output {
    fn json(value: Value) -> Self {
        Output {
            text: serde_json::to_string_pretty(&value).expect("JSON") + "\n",
            ok: true,
        }
    }

    fn json_status(value: Value, ok: bool) -> Self {
        Output {
            ok,
            ..Output::json(value)
        }
    }
}

type CmdResult = Result<Output, Failure>;

/// Parse `args` (including the program name) and run, writing to the given streams.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_FORMAT } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return code;
        }
    };
    let mut tol = Tolerances::from_env();
    if let Some(t) = cli.tol {
        if !(t > 0.0 && t.is_finite()) {
            let _ = writeln!(stderr, "error: --tol must be positive");
            return EXIT_FORMAT;
        }
        tol.residual = t;
    }
    match execute(cli.command, &tol) {
        Ok(out) => {
            let _ = stdout.write_all(out.text.as_bytes());
            if out.ok {
                EXIT_OK
            } else {
                EXIT_DOMAIN
            }
        }
        Err(Failure::Domain { kind, message }) => {
            let _ = writeln!(
                stdout,
                "{}",
                json!({ "error": kind, "message": message })
            );
            let _ = writeln!(stderr, "error: {message}");
            EXIT_DOMAIN
        }
        Err(Failure::Format(message)) => {
            let _ = writeln!(stderr, "error: {message}");
            EXIT_FORMAT
        }
    }
}

/// Entry point used by the binary.
pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

pub fn execute(command: Command, tol: &Tolerances) -> CmdResult {
    match command {
        Command::Check { system } => cmd_check(&system, tol),
        Command::Canon { system, eta } => cmd_canon(&system, eta.as_deref(), tol),
        Command::Dilate(args) => cmd_dilate(&args, tol),
        Command::WeakValue { bundle, pre, post } => cmd_weak_value(&bundle, &pre, &post, tol),
        Command::Pointer(args) => cmd_pointer(&args, tol),
        Command::Zgrid(args) => cmd_zgrid(&args, tol),
        Command::Zconv(args) => cmd_zconv(&args, tol),
        Command::EmbedUnbroken(args) => cmd_embed_unbroken(&args, tol),
        Command::Selftest { seed, count } => cmd_selftest(seed, count, tol),
        Command::Model(ModelCommand::Bender { r, theta, s, out }) => cmd_model_bender(r, theta, s, out.as_deref()),
    }
}

fn complex_json(z: C64) -> Value {
    json!([z.re, z.im])
}

fn system_of(file: &SystemFile) -> Result<PTSystem, Failure> {
    Ok(PTSystem::new(file.h.clone(), file.p.clone(), file.t.clone())?)
}

/// The closed-form two-level model, when the file declares it and its `H` matches.
fn declared_bender(file: &SystemFile, tol: &Tolerances) -> Option<BenderModel> {
    let b = file.bender?;
    let m = BenderModel::new(b.r, b.theta, b.s);
    let h = m.hamiltonian();
    let matches = file.h.shape() == (2, 2)
        && file.h.max_abs_diff(&h) <= tol.residual * h.norm_max().max(1.0)
        && file.p.max_abs_diff(&m.parity()) == 0.0
        && file.t.max_abs_diff(&m.time_reversal()) == 0.0;
    matches.then_some(m)
}

/// Canonical data and the frame scaling that goes with it.
///
/// A declared two-level model in its broken regime uses the closed-form
/// frame unscaled; everything else goes through the generic path.
fn canonical_for(file: &SystemFile, eta: Option<&CMatrix>, tol: &Tolerances) -> Result<(CanonicalData, FrameScaling), Failure> {
    if eta.is_none() {
        if let Some(m) = declared_bender(file, tol) {
            if m.delta() < 0.0 && m.frame_determinant().abs() > tol.rcond_floor {
                if let Ok(c) = m.canonical(tol) {
                    return Ok((c, FrameScaling::Fixed(1.0)));
                }
            }
        }
    }
    let sys = system_of(file)?;
    Ok((canonical_pair(&sys, eta, tol)?, FrameScaling::Auto))
}

fn cmd_check(path: &Path, tol: &Tolerances) -> CmdResult {
    let file = io::read_system(path)?;
    let sys = system_of(&file)?;
    let report = validate_pt(&sys, tol)?;
    let class = classify_detailed(&sys.h, tol)?;
    let value = json!({
        "pt_symmetric": report.pass,
        "class": class.symmetry,
        "relations": report.relations,
        "eigenvalues": class.eigenvalues.iter().map(|&z| complex_json(z)).collect::<Vec<_>>(),
        "condition": class.condition,
        "diagonalizable": class.diagonalizable,
    });
    Ok(Output::json_status(value, report.pass))
}

fn canonical_json(c: &CanonicalData, h: &CMatrix, tol: &Tolerances) -> Result<Value, Failure> {
    Ok(json!({
        "blocks": c.blocks,
        "j": io::matrix_to_json(&c.j()),
        "s": io::matrix_to_json(&c.s),
        "perm": c.perm.iter().map(|p| p + 1).collect::<Vec<_>>(),
        "psi_prime": io::matrix_to_json(&c.psi_prime),
        "eta": io::matrix_to_json(&c.eta),
        "epsilons": c.epsilons,
        "residuals": c.residuals(h, tol)?,
    }))
}

fn cmd_canon(path: &Path, eta: Option<&Path>, tol: &Tolerances) -> CmdResult {
    let file = io::read_system(path)?;
    let eta = match eta {
        Some(p) => Some(io::read_matrix(p)?),
        None => file.eta.clone(),
    };
    let (c, _) = canonical_for(&file, eta.as_ref(), tol)?;
    Ok(Output::json(canonical_json(&c, &file.h, tol)?))
}

fn parse_scale(s: &str) -> Result<Option<FrameScaling>, Failure> {
    if s == "auto" {
        return Ok(Some(FrameScaling::Auto));
    }
    match s.parse::<f64>() {
        Ok(c) if c > 0.0 && c.is_finite() => Ok(Some(FrameScaling::Fixed(c))),
        _ => Err(Failure::Format(format!("--scale: expected `auto` or a positive number, got `{s}`"))),
    }
}

fn cmd_dilate(args: &DilateArgs, tol: &Tolerances) -> CmdResult {
    let file = io::read_system(&args.system)?;
    let (canon, default_scaling) = canonical_for(&file, file.eta.as_ref(), tol)?;
    if args.mode == Mode::Embed {
        let emb = embed_unbroken(&file.h, &canon, tol)?;
        let report = emb.verify(&DEFAULT_T_SAMPLES, tol)?;
        if !(report.max() <= EMBEDDING_BOUND.max(tol.residual)) {
            return Err(Error::VerificationFailure(format!("embedding residuals {report:?}")).into());
        }
        let value = json!({
            "mode": "embed",
            "h_tilde": io::matrix_to_json(&emb.h_tilde),
            "psi_tilde": io::matrix_to_json(&emb.psi_tilde),
            "j": io::matrix_to_json(&emb.j),
            "report": report,
        });
        return write_or_print(value, args.out.as_deref());
    }
    let scaling = match &args.scale {
        Some(s) => parse_scale(s)?.unwrap_or(default_scaling),
        None => default_scaling,
    };
    let xi = match args.xi.as_str() {
        "psi" => None,
        path => Some(io::read_matrix(Path::new(path))?),
    };
    let d = build_dilation(&file.h, &canon, &DilationOptions { xi, scaling }, tol)?;
    write_or_print(io::bundle_to_json(&d), args.out.as_deref())
}

fn write_or_print(value: Value, out: Option<&Path>) -> CmdResult {
    match out {
        Some(path) => {
            io::write_json(path, &value)?;
            let mut summary = json!({ "out": path.display().to_string() });
            for key in ["residuals", "c", "report"] {
                if let Some(v) = value.get(key) {
                    summary[key] = v.clone();
                }
            }
            Ok(Output::json(summary))
        }
        None => Ok(Output::json(value)),
    }
}

/// Resolve `psi:i`, `phi:i`, `mu:i`, a bare `i`, or a vector file into a state of the dilation.
pub fn resolve_state(token: &str, d: &DilationResult) -> Result<Vec<C64>, Failure> {
    let (kind, index) = match token.split_once(':') {
        Some((k, i)) if matches!(k, "psi" | "phi" | "mu") => (k, i),
        _ if token.chars().all(|c| c.is_ascii_digit()) && !token.is_empty() => ("psi", token),
        _ => {
            let v = io::read_vector(Path::new(token))?;
            if v.len() != 2 * d.dim() {
                return Err(Error::DimensionMismatch(format!(
                    "state has {} entries, the dilation needs {}",
                    v.len(),
                    2 * d.dim()
                ))
                .into());
            }
            return Ok(v);
        }
    };
    let i: usize = index
        .parse()
        .map_err(|_| Failure::Format(format!("state `{token}`: index must be a positive integer")))?;
    if i == 0 {
        return Err(Failure::Format(format!("state `{token}`: indices are 1-based")));
    }
    let f = frame_vectors(d, i - 1).map_err(|_| {
        Failure::from(Error::IndexOutOfRange {
            index: i,
            dim: d.dim(),
        })
    })?;
    Ok(match kind {
        "psi" => f.psi_tilde,
        "phi" => f.phi_tilde,
        _ => f.mu_tilde,
    })
}

fn cmd_weak_value(bundle: &Path, pre: &str, post: &str, tol: &Tolerances) -> CmdResult {
    let d = io::read_bundle(bundle, tol)?;
    let setup = WeakSetup::new(
        d.h_tilde.clone(),
        resolve_state(pre, &d)?,
        resolve_state(post, &d)?,
        0.0,
        1.0,
        tol,
    )?;
    let w = weak::weak_value(&setup, tol)?;
    Ok(Output::json(json!({ "re": w.re, "im": w.im })))
}

fn cmd_pointer(args: &PointerArgs, tol: &Tolerances) -> CmdResult {
    let setup = match (&args.setup, &args.bundle) {
        (Some(path), _) => io::read_setup(path, tol)?,
        (None, Some(bundle)) => {
            let d = io::read_bundle(bundle, tol)?;
            let (pre, post, g) = (
                args.pre.as_deref().unwrap_or_default(),
                args.post.as_deref().unwrap_or_default(),
                args.g.unwrap_or_default(),
            );
            WeakSetup::new(d.h_tilde.clone(), resolve_state(pre, &d)?, resolve_state(post, &d)?, g, args.width, tol)?
        }
        (None, None) => return Err(Failure::Format("pointer: give a setup file or --bundle".into())),
    };
    let exact = weak::pointer_exact(&setup, tol)?;
    let approx = weak::pointer_weak_approx(&setup, tol)?;
    let aw = weak::weak_value(&setup, tol)?;
    let (lo, hi) = exact.default_range(&[&approx]);
    let (q_min, q_max) = (args.qmin.unwrap_or(lo), args.qmax.unwrap_or(hi));
    let exact_grid = exact.clone().sampled(q_min, q_max, args.grid)?;
    let approx_grid = approx.clone().sampled(q_min, q_max, args.grid)?;
    let terms = |d: &weak::PointerDistribution| {
        d.terms
            .iter()
            .map(|t| json!({ "weight": complex_json(t.weight), "shift": complex_json(t.shift) }))
            .collect::<Vec<_>>()
    };
    let value = json!({
        "exact_terms": terms(&exact),
        "weak_term": terms(&approx)[0],
        "weak_value": complex_json(aw),
        "g": setup.g,
        "width": setup.pointer_width,
        "l2_distance": exact_grid.grid_l2_distance(&approx_grid)?,
        "l2_distance_analytic": exact.l2_distance(&approx)?,
        "mean_shift_exact": exact.mean_position()?,
        "mean_shift_weak": approx.mean_position()?,
        "grid": { "q_min": q_min, "q_max": q_max, "points": args.grid },
    });
    Ok(Output::json(value))
}

fn cmd_zgrid(args: &ZgridArgs, tol: &Tolerances) -> CmdResult {
    let report = repro::z_grid(args.r, args.theta, args.t_max, args.s_max, args.steps, tol)?;
    let summary = json!({
        "max_z11": report.max_z11,
        "max_z22": report.max_z22,
        "max_z12": report.max_z12,
        "max_z21": report.max_z21,
        "rows": report.t_axis.len() * report.s_axis.len(),
    });
    match &args.out {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(|e| FormatError::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
            report
                .write_csv(std::io::BufWriter::new(file))
                .map_err(|e| Failure::Format(e.to_string()))?;
            Ok(Output {
                text: summary.to_string() + "\n",
                ok: true,
            })
        }
        None => {
            let mut buf = Vec::new();
            report.write_csv(&mut buf)?;
            Ok(Output {
                text: String::from_utf8(buf).expect("CSV is UTF-8"),
                ok: true,
            })
        }
    }
}

fn cmd_zconv(args: &ZconvArgs, tol: &Tolerances) -> CmdResult {
    let samples = repro::z_convergence(args.r, args.theta, args.s, &args.t, tol)?;
    let value = json!({
        "s": args.s,
        "samples": samples,
        "z11_decreasing": repro::strictly_decreasing_as_t_shrinks(&samples, |z| z.z11),
        "z12_decreasing": repro::strictly_decreasing_as_t_shrinks(&samples, |z| z.z12),
    });
    Ok(Output::json(value))
}

fn cmd_embed_unbroken(args: &EmbedArgs, tol: &Tolerances) -> CmdResult {
    let bound = EMBEDDING_BOUND.max(tol.residual);
    if let Some(gs) = &args.gs {
        let [e0, s, theta] = gs[..] else {
            return Err(Failure::Format("--gs expects E0,s,theta".into()));
        };
        let report = repro::verify_unbroken_example(e0, s, theta, &args.t, tol);
        let ok = report.passes(bound);
        return Ok(Output::json_status(json!({ "report": report, "pass": ok }), ok));
    }
    let path = args.system.as_deref().expect("clap requires a system or --gs");
    let file = io::read_system(path)?;
    let (canon, _) = canonical_for(&file, file.eta.as_ref(), tol)?;
    let emb = embed_unbroken(&file.h, &canon, tol)?;
    let report = emb.verify(&args.t, tol)?;
    let ok = report.max() <= bound;
    let value = json!({
        "h_tilde": io::matrix_to_json(&emb.h_tilde),
        "psi_tilde": io::matrix_to_json(&emb.psi_tilde),
        "j": io::matrix_to_json(&emb.j),
        "report": report,
        "pass": ok,
    });
    Ok(Output::json_status(value, ok))
}

fn check_json(name: &str, worst: f64, bound: f64) -> (Value, bool) {
    let pass = worst <= bound;
    (json!({ "name": name, "worst": worst, "bound": bound, "pass": pass }), pass)
}

fn cmd_selftest(seed: u64, count: usize, tol: &Tolerances) -> CmdResult {
    let mut rng = random::rng(seed);
    let (mut dilation_worst, mut expectation_worst, mut collapse_worst) = (0.0f64, 0.0f64, 0.0f64);
    for k in 0..count {
        let n = 2 + k % 3;
        let (sys, canon) = random::random_system(&mut rng, n, 1, tol)?;
        let xi = random::invertible_matrix(&mut rng, n);
        let options = DilationOptions {
            xi: Some(xi),
            scaling: FrameScaling::Auto,
        };
        let d = build_dilation(&sys.h, &canon, &options, tol)?;
        dilation_worst = dilation_worst.max(d.residuals().max());
        let a = random::complex_vector(&mut rng, n);
        let e = weak::expectation_eta(&d, &a, tol)?;
        expectation_worst = expectation_worst.max((e.lhs - e.rhs).norm() / e.lhs.norm().max(1.0));
        let i = k % n;
        match weak::collapse(&canon, &a, i, tol) {
            Ok(out) => {
                // the complex form of the detected value, with lambda_{s(i)} in place of conj(lambda_i)
                let s = out.pair.1;
                let lambda = canon.eigenvalues();
                let z = a[i] * a[s].conj();
                let full = (z * lambda[i] + z.conj() * lambda[s]) / (z + z.conj());
                let err = full.im.abs().max((full.re - out.detected_value).abs());
                collapse_worst = collapse_worst.max(err / full.norm().max(1.0));
            }
            Err(Error::NullDenominator) => {}
            Err(e) => return Err(e.into()),
        }
    }
    let m = BenderModel::new(SQRT_2, FRAC_PI_4, 0.1);
    let canon = m.canonical(tol)?;
    let d = build_dilation(&m.hamiltonian(), &canon, &DilationOptions::default(), tol)?;
    let f = frame_vectors(&d, 0)?;
    let setup = WeakSetup::new(d.h_tilde.clone(), f.psi_tilde, f.mu_tilde, 0.0, 1.0, tol)?;
    let eigen_err = (weak::weak_value(&setup, tol)? - m.eigenvalues()[0]).norm();
    let unbroken = repro::verify_unbroken_example(1.0, 0.5, std::f64::consts::FRAC_PI_3, &DEFAULT_T_SAMPLES, tol);
    let checks = [
        check_json("dilation identities", dilation_worst, 1e-9),
        check_json("expectation identity", expectation_worst, 1e-9),
        check_json("collapse value real", collapse_worst, 1e-12),
        check_json("weak value reads eigenvalue", eigen_err, 1e-9),
        check_json("unbroken embedding", unbroken.max_residual(), EMBEDDING_BOUND),
    ];
    let pass = checks.iter().all(|(_, p)| *p);
    let value = json!({
        "seed": seed,
        "count": count,
        "checks": checks.iter().map(|(v, _)| v.clone()).collect::<Vec<_>>(),
        "pass": pass,
    });
    Ok(Output::json_status(value, pass))
}

fn cmd_model_bender(r: f64, theta: f64, s: f64, out: Option<&Path>) -> CmdResult {
    let m = BenderModel::new(r, theta, s);
    let file = SystemFile {
        h: m.hamiltonian(),
        p: m.parity(),
        t: m.time_reversal(),
        eta: None,
        bender: Some(io::BenderParams { r, theta, s }),
    };
    write_or_print(io::system_to_json(&file), out)
}
