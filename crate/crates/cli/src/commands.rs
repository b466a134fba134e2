use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use condent::chanent::{self, BallConvention, ChannelEntropyResult, SearchOptions, VnMode};
use condent::channels::{self, BipartiteChannel, ChannelDims, Direction, GibbsSpec, CPTP_TOL};
use condent::experiments::{self, ExperimentRecord, SuiteOptions};
use condent::resource::{self, RateResult};
use condent::{Error, HermitianOperator};

use crate::{ChannelAction, CliConfig, Command, EntropyArgs, ExperimentCmd, Family, Gate, Kind, MakeArgs, Quantity, RateArgs, RateWhich, Smoothing, OUT_DIR_ENV};

/// Like `println!`, but a closed stdout (e.g. piped into `head`) is not an error.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Solver(_) | Error::Capacity(_) => 2,
            Error::Certificate(_) => 3,
            _ => 1,
        };
        Self { code, message: e.to_string() }
    }
}

/// Exit status of a command that ran to completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    SolverFailure,
    VerificationFailure,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        ExitCode::from(match s {
            Status::Ok => 0,
            Status::SolverFailure => 2,
            Status::VerificationFailure => 3,
        })
    }
}

type Outcome = Result<Status, Failure>;

pub fn run(cmd: Command, cfg: &CliConfig) -> Outcome {
    match cmd {
        Command::Channel { action: ChannelAction::Make(args) } => make(&args, cfg),
        Command::Channel { action: ChannelAction::Validate { file } } => validate(&file, cfg),
        Command::Entropy(args) => entropy(&args, cfg),
        Command::Rate(args) => rate(&args, cfg),
        Command::Experiment { which } => experiment(which, cfg),
    }
}

fn fmt(x: f64) -> String {
    format!("{x:.6}")
}

fn search(cfg: &CliConfig) -> SearchOptions {
    SearchOptions { starts: cfg.starts.max(1), seed: cfg.seed, max_iter: cfg.max_iter }
}

fn ball(cfg: &CliConfig) -> BallConvention {
    match cfg.smoothing {
        Smoothing::HalfBall => BallConvention::HalfBall,
        Smoothing::FullBall => BallConvention::FullBall,
    }
}

fn load(path: &Path) -> Result<BipartiteChannel, Failure> {
    BipartiteChannel::load(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn four_dims(dims: &[usize]) -> Result<ChannelDims, Failure> {
    match *dims {
        [a, b] => Ok(ChannelDims::new(a, b, a, b)),
        [ai, bi, ao, bo] => Ok(ChannelDims::new(ai, bi, ao, bo)),
        _ => Err(Failure::usage("--dims takes dA,dB or dA',dB',dA,dB")),
    }
}

fn single_dim(dims: &[usize], default: usize) -> Result<usize, Failure> {
    match *dims {
        [] => Ok(default),
        [d] => Ok(d),
        [a, b] if a == b => Ok(a),
        _ => Err(Failure::usage("--dims takes a single local dimension here")),
    }
}

fn gibbs(energies: &[f64], beta: f64, d: usize) -> Result<GibbsSpec, Failure> {
    if energies.is_empty() {
        return Ok(GibbsSpec::trivial(d, beta)?);
    }
    Ok(GibbsSpec::new(HermitianOperator::diagonal(energies), beta)?)
}

fn make(args: &MakeArgs, cfg: &CliConfig) -> Outcome {
    let need = |p: &Option<PathBuf>, flag: &str| p.as_deref().map(load).unwrap_or_else(|| Err(Failure::usage(format!("{flag} is required"))));
    let ch = match args.kind {
        Kind::Unitary => match args.gate {
            Gate::Cnot => BipartiteChannel::cnot()?,
            Gate::Identity => {
                let d = if args.dims.is_empty() { ChannelDims::new(2, 2, 2, 2) } else { four_dims(&args.dims)? };
                BipartiteChannel::identity(d.a_in, d.b_in)?
            }
            Gate::Haar => {
                let d = if args.dims.is_empty() { ChannelDims::new(2, 2, 2, 2) } else { four_dims(&args.dims)? };
                let mut rng = condent::random::rng(cfg.seed);
                BipartiteChannel::from_unitary(&condent::random::haar_unitary(&mut rng, d.input()), ChannelDims::new(d.a_in, d.b_in, d.a_in, d.b_in))?
            }
        },
        Kind::Controlled => match args.family {
            Family::Shift => experiments::controlled_shift(single_dim(&args.dims, 2)?)?,
            Family::Pauli => experiments::pauli_controlled()?,
        },
        Kind::Swap => BipartiteChannel::swap(single_dim(&args.dims, 2)?)?,
        Kind::Replacer => {
            let d = if args.dims.is_empty() { ChannelDims::new(2, 2, 2, 2) } else { four_dims(&args.dims)? };
            BipartiteChannel::completely_mixing(d)?
        }
        Kind::Thermal => {
            let d_in = single_dim(&args.dims, args.energies.len().max(2))?;
            let d_out = if args.energies.is_empty() { d_in } else { args.energies.len() };
            BipartiteChannel::thermal(&gibbs(&args.energies, args.beta, d_out)?, d_in)?
        }
        Kind::WeylMix => BipartiteChannel::weyl_mix(single_dim(&args.dims, 2)?)?.1,
        Kind::Noisy => {
            let p = args.p.ok_or_else(|| Failure::usage("--p is required"))?;
            need(&args.base, "--base")?.white_noise(p)?
        }
        Kind::Random => {
            let d = if args.dims.is_empty() { ChannelDims::new(2, 2, 2, 2) } else { four_dims(&args.dims)? };
            BipartiteChannel::random_seeded(d, args.env, cfg.seed)?
        }
        Kind::Tensor => need(&args.base, "--base")?.tensor(&need(&args.other, "--other")?)?,
    };
    let json = ch.to_json();
    match &args.out {
        Some(path) => {
            write_atomic(path, json.as_bytes())?;
            let d = ch.dims();
            out!("wrote {} (dims {},{},{},{})", path.display(), d.a_in, d.b_in, d.a_out, d.b_out);
        }
        None => out!("{json}"),
    }
    Ok(Status::Ok)
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let tmp = path.with_extension("tmp-write");
    std::fs::write(&tmp, bytes).and_then(|_| std::fs::rename(&tmp, path)).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn pass(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "fail"
    }
}

fn validate(file: &Path, cfg: &CliConfig) -> Outcome {
    let text = std::fs::read_to_string(file).map_err(|e| Failure::usage(format!("{}: {e}", file.display())))?;
    let ch = BipartiteChannel::from_json_unchecked(&text).map_err(|e| Failure::usage(format!("{}: {e}", file.display())))?;
    let tol = cfg.tolerance.unwrap_or(CPTP_TOL);
    let c = ch.cptp_report(tol);
    let d = ch.dims();
    out!("dims: {},{},{},{}", d.a_in, d.b_in, d.a_out, d.b_out);
    out!("cptp: {} (min eigenvalue {}, marginal error {:.3e})", pass(c.holds), fmt(c.min_eigenvalue), c.marginal_error);
    let ab = ch.semicausal(Direction::AToB, tol);
    let ba = ch.semicausal(Direction::BToA, tol);
    let ppt = ch.ppt_choi(tol);
    out!("semicausal(A'↛B): {} (residual {:.3e})", pass(ab.holds), ab.residual);
    out!("semicausal(B'↛A): {} (residual {:.3e})", pass(ba.holds), ba.residual);
    out!("ppt: {} (residual {:.3e})", pass(ppt.holds), ppt.residual);
    Ok(if c.holds { Status::Ok } else { Status::VerificationFailure })
}

fn entropy(args: &EntropyArgs, cfg: &CliConfig) -> Outcome {
    let n = load(&args.file)?;
    if !(0.0..1.0).contains(&args.epsilon) {
        return Err(Failure::usage(format!("--epsilon {} outside [0,1)", args.epsilon)));
    }
    let start = Instant::now();
    let eps = args.epsilon;
    let res: condent::Result<ChannelEntropyResult> = match args.quantity {
        Quantity::Smin if eps == 0.0 => chanent::cond_min_entropy_channel(&n),
        Quantity::Smin => chanent::smoothed_cond_min_entropy_channel(&n, eps, ball(cfg)),
        Quantity::SminDownUp => chanent::choi_brackets(&n).map(|(lo, up)| ChannelEntropyResult {
            value: lo,
            method: chanent::Method::ClosedForm,
            bracket: Some((lo, up)),
            solver: None,
            search: None,
            relaxed: false,
        }),
        Quantity::Ns => chanent::ns_cond_min_entropy(&n).map(|v| ChannelEntropyResult {
            value: v,
            method: chanent::Method::Sdp,
            bracket: None,
            solver: None,
            search: None,
            relaxed: false,
        }),
        Quantity::VnTelecov => match channels::weyl_covariance_table(&n) {
            Ok(Some(t)) => chanent::cond_vn_entropy_channel(&n, VnMode::Telecov(&t)),
            Ok(None) => Err(Error::Certificate("no Weyl covariance table found for this channel".into())),
            Err(e) => Err(e),
        },
        Quantity::Hyp => chanent::hyp_cond_entropy_channel(&n, eps, search(cfg)),
    };
    let quantity = format!("{:?}", args.quantity).to_lowercase();
    let (row, status) = match res {
        Ok(r) => {
            out!("value: {}", fmt(r.value));
            if let Some((lo, up)) = r.bracket {
                out!("bracket: [{}, {}]", fmt(lo), fmt(up));
            }
            out!("method: {}{}", r.method.as_str(), if r.relaxed { " (relaxed)" } else { "" });
            if let Some(s) = &r.solver {
                out!(
                    "solver: {} (primal residual {:.2e}, dual residual {:.2e}, gap {:.2e}, {} iterations)",
                    s.status, s.primal_residual, s.dual_residual, s.gap, s.iterations
                );
            }
            if let Some(s) = &r.search {
                out!("search: {} starts, {} converged, seed {}", s.starts, s.converged, s.seed);
            }
            let (lo, up) = r.bracket.unwrap_or((r.value, r.value));
            (record(&args.file, eps, &quantity, r.value, lo, up, "ok".into(), cfg.seed, start), Status::Ok)
        }
        Err(e) => {
            let f = Failure::from(e);
            if f.code == 1 {
                return Err(f);
            }
            out!("status: failed ({})", f.message);
            let status = if f.code == 2 { Status::SolverFailure } else { Status::VerificationFailure };
            (record(&args.file, eps, &quantity, f64::NAN, f64::NAN, f64::NAN, format!("failed: {}", f.message), cfg.seed, start), status)
        }
    };
    if let Some(path) = &args.csv {
        experiments::write_csv(path, &[row])?;
    }
    Ok(status)
}

#[allow(clippy::too_many_arguments)]
fn record(file: &Path, p: f64, quantity: &str, value: f64, lower: f64, upper: f64, status: String, seed: u64, start: Instant) -> ExperimentRecord {
    ExperimentRecord {
        experiment: "entropy".into(),
        channel: file.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
        p,
        quantity: quantity.into(),
        value,
        lower,
        upper,
        status,
        seed,
        wall_time: start.elapsed().as_secs_f64(),
    }
}

fn rate(args: &RateArgs, cfg: &CliConfig) -> Outcome {
    let n = load(&args.file)?;
    if !args.trivial_h && args.energies.is_empty() {
        return Err(Failure::usage("give --trivial-h or --energies"));
    }
    let spec = gibbs(&args.energies, args.beta, n.dims().a_out)?;
    let r: RateResult = match args.which {
        RateWhich::Cost => resource::athermality_cost(&n, &spec, args.epsilon, ball(cfg))?,
        RateWhich::Yield => resource::athermality_yield(&n, &spec, args.epsilon, search(cfg))?,
    };
    out!("{}", fmt(r.value));
    if let Some((lo, up)) = r.bracket {
        out!("bracket: [{}, {}]", fmt(lo), fmt(up));
    }
    out!("exact: {}", r.exact);
    Ok(Status::Ok)
}

fn out_path(out: Option<PathBuf>, default_name: &str) -> PathBuf {
    out.unwrap_or_else(|| match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) => PathBuf::from(dir).join(default_name),
        None => PathBuf::from(default_name),
    })
}

fn rows_status(rows: &[ExperimentRecord]) -> Status {
    if rows.iter().all(ExperimentRecord::is_ok) {
        Status::Ok
    } else {
        Status::SolverFailure
    }
}

fn experiment(which: ExperimentCmd, cfg: &CliConfig) -> Outcome {
    match which {
        ExperimentCmd::Fig2 { out, grid_points } => {
            let path = out_path(out, "fig2.csv");
            let rows = experiments::run_fig2(&experiments::p_grid(grid_points))?;
            experiments::write_csv(&path, &rows)?;
            let failed = rows.iter().filter(|r| !r.is_ok()).count();
            out!("fig2: {} rows, {} failed, written to {}", rows.len(), failed, path.display());
            Ok(rows_status(&rows))
        }
        ExperimentCmd::RandomFig { out, samples, grid_points } => {
            let path = out_path(out, "random-fig.csv");
            let fig = experiments::run_random_fig(samples, cfg.seed, &experiments::p_grid(grid_points))?;
            experiments::write_csv(&path, &fig.rows)?;
            out!(
                "random-fig: {} rows, strict gap {}, written to {}",
                fig.rows.len(),
                if fig.strict_gap() { "found" } else { "not found" },
                path.display()
            );
            Ok(rows_status(&fig.rows))
        }
        ExperimentCmd::Verify { out, samples, no_aep, inject_faulty } => {
            let path = out_path(out, "verify.json");
            let opts = SuiteOptions {
                seed: cfg.seed,
                tol: cfg.tolerance.unwrap_or(SuiteOptions::default().tol),
                samples,
                inject_faulty,
                include_aep: !no_aep,
            };
            let report = experiments::run_theorem_suite(opts);
            experiments::write_json(&path, &report)?;
            for c in &report.checks {
                out!("{:<32} {} (residual {:.3e})", c.name, pass(c.passed), c.residual);
            }
            let passed = report.checks.iter().filter(|c| c.passed).count();
            out!("verify: {passed}/{} checks passed, written to {}", report.checks.len(), path.display());
            Ok(if report.all_passed { Status::Ok } else { Status::VerificationFailure })
        }
    }
}
