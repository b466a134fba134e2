//! Figure reproductions and the theorem-verification suite.
//!
//! Figure runs produce [`ExperimentRecord`] rows written as CSV with the fixed
//! column order `experiment,channel,p,quantity,value,lower,upper,status,seed`.
//! The suite produces a JSON report with `schema_version` "1". Files are
//! written to a temporary sibling and renamed into place.

use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::chanent::{self, SearchOptions};
use crate::channels::{self, BipartiteChannel, ChannelDims, Direction, GibbsSpec, CPTP_TOL};
use crate::divergences::{self, RenyiOrder};
use crate::error::{Error, Result};
use crate::matcore::{self, CMatrix, DimSignature, HermitianOperator};
use crate::random;
use crate::resource;

pub const SCHEMA_VERSION: &str = "1";
pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const CSV_HEADER: &str = "experiment,channel,p,quantity,value,lower,upper,status,seed";
/// Bracket slack used when validating figure rows.
pub const ROW_SLACK: f64 = 1e-6;
/// Strict-gap threshold for the random-channel figure.
pub const GAP_THRESHOLD: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub experiment: String,
    pub channel: String,
    pub p: f64,
    pub quantity: String,
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub status: String,
    pub seed: u64,
    /// Seconds; kept out of the CSV so reruns are byte-identical.
    #[serde(skip)]
    pub wall_time: f64,
}

impl ExperimentRecord {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }

    /// lower − slack ≤ value ≤ upper + slack.
    pub fn bracket_holds(&self, slack: f64) -> bool {
        self.lower - slack <= self.value && self.value <= self.upper + slack
    }
}

/// `n` evenly spaced points on [0, 1].
pub fn p_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|k| k as f64 / (n - 1) as f64).collect(),
    }
}

pub const DEFAULT_GRID_POINTS: usize = 21;

/// One `smin` row: the channel value with its Choi brackets. Failures are
/// recorded in the status column with NaN values.
fn smin_row(experiment: &str, name: &str, p: f64, seed: u64, n: Result<BipartiteChannel>) -> ExperimentRecord {
    let start = Instant::now();
    let res = n.and_then(|n| chanent::cond_min_entropy_channel(&n));
    let (value, lower, upper, status) = match res {
        Ok(r) => {
            let (lo, up) = r.bracket.unwrap_or((f64::NAN, f64::NAN));
            (r.value, lo, up, "ok".to_string())
        }
        Err(e) => (f64::NAN, f64::NAN, f64::NAN, format!("failed: {e}")),
    };
    ExperimentRecord {
        experiment: experiment.into(),
        channel: name.into(),
        p,
        quantity: "smin".into(),
        value,
        lower,
        upper,
        status,
        seed,
        wall_time: start.elapsed().as_secs_f64(),
    }
}

pub fn fig2_channels() -> Result<Vec<(&'static str, BipartiteChannel)>> {
    Ok(vec![
        ("cnot", BipartiteChannel::cnot()?),
        ("swap", BipartiteChannel::swap(2)?),
        ("id", BipartiteChannel::identity(2, 2)?),
    ])
}

/// White-noise families p·R^π + (1 − p)·N for CNOT, SWAP and id ⊗ id.
pub fn run_fig2(grid: &[f64]) -> Result<Vec<ExperimentRecord>> {
    if grid.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(Error::InvalidArgument("p grid must lie in [0,1]".into()));
    }
    let mut rows = Vec::with_capacity(3 * grid.len());
    for (name, n) in fig2_channels()? {
        for &p in grid {
            rows.push(smin_row("fig2", name, p, 0, n.white_noise(p)));
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChannelGap {
    pub channel: String,
    /// max over p of upper − value.
    pub upper_gap: f64,
    /// max over p of value − lower.
    pub lower_gap: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RandomFig {
    pub rows: Vec<ExperimentRecord>,
    pub gaps: Vec<ChannelGap>,
}

impl RandomFig {
    /// Whether some channel separates from one of its bounds by more than [`GAP_THRESHOLD`].
    pub fn strict_gap(&self) -> bool {
        self.gaps.iter().any(|g| g.upper_gap.max(g.lower_gap) > GAP_THRESHOLD)
    }
}

/// Seeded Haar–Stinespring two-qubit channels (environment dimension 4) under white noise.
pub fn run_random_fig(sample_count: usize, seed: u64, grid: &[f64]) -> Result<RandomFig> {
    let dims = ChannelDims::new(2, 2, 2, 2);
    let mut rows = Vec::new();
    let mut gaps = Vec::new();
    for s in 0..sample_count {
        let ch_seed = seed.wrapping_add(s as u64);
        let name = format!("random-{s}");
        let base = BipartiteChannel::random_seeded(dims, 4, ch_seed)?;
        let mut gap = ChannelGap { channel: name.clone(), upper_gap: 0.0, lower_gap: 0.0 };
        for &p in grid {
            let r = smin_row("random-fig", &name, p, ch_seed, base.white_noise(p));
            if r.is_ok() {
                gap.upper_gap = gap.upper_gap.max(r.upper - r.value);
                gap.lower_gap = gap.lower_gap.max(r.value - r.lower);
            }
            rows.push(r);
        }
        gaps.push(gap);
    }
    Ok(RandomFig { rows, gaps })
}

fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let name = path.file_name().ok_or_else(|| Error::InvalidArgument(format!("not a file path: {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp-{}", name.to_string_lossy(), std::process::id()));
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })?;
    Ok(())
}

pub fn records_to_csv(rows: &[ExperimentRecord]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(CSV_HEADER.split(','))?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
}

pub fn write_csv(path: &Path, rows: &[ExperimentRecord]) -> Result<()> {
    atomic_write(path, records_to_csv(rows)?.as_bytes())
}

/// Parses experiment CSV, rejecting any header other than [`CSV_HEADER`].
pub fn records_from_csv(text: &str) -> Result<Vec<ExperimentRecord>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers()?.iter().collect::<Vec<_>>().join(",");
    if header != CSV_HEADER {
        return Err(Error::Format(format!("unexpected CSV header {header:?}")));
    }
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

pub fn read_csv(path: &Path) -> Result<Vec<ExperimentRecord>> {
    records_from_csv(&std::fs::read_to_string(path)?)
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Format(e.to_string())
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    atomic_write(path, text.as_bytes())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Worst deviation measured by the check (its meaning is in `detail`).
    pub residual: f64,
    pub detail: String,
    pub wall_time: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub schema_version: String,
    pub toolkit_version: String,
    pub seed: u64,
    pub tolerance: f64,
    pub all_passed: bool,
    pub checks: Vec<CheckResult>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Tolerance for SDP value comparisons.
    pub tol: f64,
    /// Sample count for the randomized floor checks.
    pub samples: usize,
    /// Adds a non-CPTP channel to the validation check.
    pub inject_faulty: bool,
    pub include_aep: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { seed: 7, tol: 1e-5, samples: 100, inject_faulty: false, include_aep: true }
    }
}

/// Outcome of one check body: worst deviation, allowed deviation, description.
struct Outcome {
    residual: f64,
    allowed: f64,
    detail: String,
}

fn run_check(name: &str, body: impl FnOnce() -> Result<Outcome>) -> CheckResult {
    let start = Instant::now();
    let (passed, residual, detail) = match body() {
        Ok(o) => (o.residual <= o.allowed, o.residual, o.detail),
        Err(e) => (false, f64::NAN, format!("error: {e}")),
    };
    CheckResult { name: name.into(), passed, residual, detail, wall_time: start.elapsed().as_secs_f64() }
}

fn smin(n: &BipartiteChannel) -> Result<f64> {
    chanent::cond_min_entropy_channel_value(n)
}

fn haar_two_qubit(rng: &mut random::Rng) -> Result<BipartiteChannel> {
    BipartiteChannel::from_unitary(&random::haar_unitary(rng, 4), ChannelDims::new(2, 2, 2, 2))
}

/// Controlled shift Σ_j |j⟩⟨j| ⊗ X^j on two m-level systems.
pub fn controlled_shift(m: usize) -> Result<BipartiteChannel> {
    let ws = channels::weyl_operators(m);
    let shifts: Vec<CMatrix> = (0..m).map(|a| ws[a * m].clone()).collect();
    BipartiteChannel::controlled_unitary(&shifts)
}

/// Pauli-controlled channel with a four-level control and a qubit target.
pub fn pauli_controlled() -> Result<BipartiteChannel> {
    BipartiteChannel::controlled_unitary(&channels::paulis())
}

/// Smallest p on a 21-point grid making p·R^π + (1 − p)·N PPT.
pub fn ppt_by_noise(n: &BipartiteChannel) -> Result<BipartiteChannel> {
    for p in p_grid(DEFAULT_GRID_POINTS) {
        let m = n.white_noise(p)?;
        if m.ppt_choi(1e-9).holds {
            return Ok(m);
        }
    }
    Err(Error::InvalidArgument("no PPT mixture on the grid".into()))
}

/// Normalized √(Φ^U_{R_B B}) for a two-qubit unitary channel, and the larger of
/// its two marginal deviations from π₂.
pub fn root_marginal_deviation(u: &BipartiteChannel) -> Result<f64> {
    let rb = matcore::partial_trace(&u.choi_state(), &u.signature(), &[2, 3])?;
    let root = rb.psd_sqrt(false)?;
    let root = root.scale(1.0 / root.trace());
    let sig = DimSignature::new(&[2, 2])?;
    let pi = HermitianOperator::maximally_mixed(2);
    let m0 = matcore::partial_trace(&root, &sig, &[0])?.max_abs_diff(&pi);
    let m1 = matcore::partial_trace(&root, &sig, &[1])?.max_abs_diff(&pi);
    Ok(m0.max(m1))
}

pub fn run_theorem_suite(opts: SuiteOptions) -> SuiteReport {
    let tol = opts.tol;
    let seed = opts.seed;
    let k = opts.samples.max(1);
    let mut checks = Vec::new();

    checks.push(run_check("channel-validation", || {
        let mut chans = fig2_channels()?.into_iter().map(|(_, c)| c).collect::<Vec<_>>();
        chans.push(pauli_controlled()?);
        if opts.inject_faulty {
            let cnot = BipartiteChannel::cnot()?;
            chans.push(BipartiteChannel::from_choi_unchecked(cnot.dims(), cnot.choi().scale(1.1))?);
        }
        let mut worst = 0.0f64;
        for c in &chans {
            let r = c.cptp_report(CPTP_TOL);
            worst = worst.max(r.marginal_error).max(-r.min_eigenvalue);
        }
        Ok(Outcome { residual: worst, allowed: CPTP_TOL, detail: format!("max CPTP violation over {} channels", chans.len()) })
    }));

    checks.push(run_check("swap-extremality", || {
        let swap = BipartiteChannel::swap(2)?;
        let r = chanent::cond_min_entropy_channel(&swap)?;
        let (lo, up) = r.bracket.unwrap_or((f64::NAN, f64::NAN));
        let dev = (r.value + 3.0).abs().max((up - lo).abs());
        Ok(Outcome { residual: dev, allowed: tol, detail: format!("S = {:.9}, bracket ({lo:.9}, {up:.9}); target -3", r.value) })
    }));

    checks.push(run_check("controlled-unitary-floor", || {
        let mut rng = random::rng(seed ^ 0xc0);
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..30 {
            let us: Vec<CMatrix> = (0..2).map(|_| random::haar_unitary(&mut rng, 2)).collect();
            let s = smin(&BipartiteChannel::controlled_unitary(&us)?)?;
            worst = worst.max(-2.0 - s);
        }
        Ok(Outcome { residual: worst.max(0.0), allowed: 1e-6, detail: "max of -2log|A| - S over 30 random controlled unitaries".into() })
    }));

    checks.push(run_check("controlled-unitary-saturation", || {
        let c = smin(&BipartiteChannel::cnot()?)?;
        let p = smin(&pauli_controlled()?)?;
        let dev = (c + 2.0).abs().max((p + 4.0).abs());
        Ok(Outcome { residual: dev, allowed: tol, detail: format!("CNOT {c:.9} (target -2), Pauli-controlled {p:.9} (target -4)") })
    }));

    checks.push(run_check("controlled-unitary-symmetry", || {
        let mut dev = 0.0f64;
        let mut parts = Vec::new();
        for m in [2, 3] {
            let c = controlled_shift(m)?;
            let ab = smin(&c)?;
            let ba = smin(&c.swap_parties())?;
            let target = -2.0 * (m as f64).log2();
            dev = dev.max((ab - target).abs()).max((ba - target).abs());
            parts.push(format!("m={m}: S[A|B] {ab:.9}, S[B|A] {ba:.9}"));
        }
        Ok(Outcome { residual: dev, allowed: tol, detail: parts.join("; ") })
    }));

    checks.push(run_check("two-qubit-unitary-saturation", || {
        let mut rng = random::rng(seed ^ 0x2c);
        let mut dev = 0.0f64;
        for _ in 0..20 {
            let u = haar_two_qubit(&mut rng)?;
            let (_, up) = chanent::choi_brackets(&u)?;
            dev = dev.max((smin(&u)? - up).abs());
        }
        Ok(Outcome { residual: dev, allowed: tol, detail: "max |S - Choi upper bound| over 20 Haar unitaries".into() })
    }));

    checks.push(run_check("ppt-floor", || {
        let mut rng = random::rng(seed ^ 0x99);
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..k {
            let n = ppt_by_noise(&BipartiteChannel::random(ChannelDims::new(2, 2, 2, 2), 2, &mut rng)?)?;
            worst = worst.max(-1.0 - smin(&n)?);
        }
        Ok(Outcome { residual: worst.max(0.0), allowed: 1e-6, detail: format!("max of -log|A'| - S over {k} PPT channels") })
    }));

    checks.push(run_check("semicausal-floor", || {
        let mut rng = random::rng(seed ^ 0x5c);
        let mut worst = f64::NEG_INFINITY;
        let mut signalling = 0.0f64;
        for _ in 0..k {
            let n = BipartiteChannel::random_semicausal(ChannelDims::new(2, 2, 2, 2), 2, &mut rng)?;
            signalling = signalling.max(n.semicausal(Direction::AToB, 1e-8).residual);
            worst = worst.max(-1.0 - smin(&n)?);
        }
        Ok(Outcome {
            residual: worst.max(0.0),
            allowed: 1e-6 + if signalling > 1e-8 { f64::NEG_INFINITY } else { 0.0 },
            detail: format!("max of -log|A| - S over {k} semilocalizable channels (signalling residual {signalling:.1e})"),
        })
    }));

    checks.push(run_check("continuity", || {
        let mut rng = random::rng(seed ^ 0xc7);
        let dims = ChannelDims::new(2, 2, 2, 2);
        let c = chanent::continuity_constant(dims);
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..k.min(50) {
            let n = BipartiteChannel::random(dims, 2, &mut rng)?;
            let other = BipartiteChannel::random(dims, 2, &mut rng)?;
            let t = random::uniform(&mut rng, 0.0, 0.2);
            let m = BipartiteChannel::mix(&[&n, &other], &[1.0 - t, t])?;
            let delta = chanent::diamond_distance(&n, &m)?;
            worst = worst.max((smin(&n)? - smin(&m)?).abs() - c * delta);
        }
        Ok(Outcome { residual: worst.max(0.0), allowed: 1e-6, detail: "max of |ΔS| - bound over perturbed pairs".into() })
    }));

    checks.push(run_check("weyl-decomposition", || {
        let mut dev = 0.0f64;
        for m in [2, 3, 4] {
            let (_, mix) = BipartiteChannel::weyl_mix(m)?;
            let r = BipartiteChannel::completely_mixing(mix.dims())?;
            dev = dev.max(mix.choi().max_abs_diff(r.choi()));
        }
        Ok(Outcome { residual: dev, allowed: 1e-10, detail: "max Choi deviation from the mixing replacer, m = 2, 3, 4".into() })
    }));

    checks.push(run_check("bell-diagonal-root", || {
        let mut rng = random::rng(seed ^ 0xbd);
        let mut dev = 0.0f64;
        for _ in 0..20 {
            dev = dev.max(root_marginal_deviation(&haar_two_qubit(&mut rng)?)?);
        }
        Ok(Outcome { residual: dev, allowed: 1e-8, detail: "max marginal deviation from π₂ over 20 Haar unitaries".into() })
    }));

    checks.push(run_check("alpha-monotonicity", || {
        let mut rng = random::rng(seed ^ 0xa1);
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..5 {
            let rho = random::random_state(&mut rng, 4, 2);
            let mut prev = f64::INFINITY;
            for a in [0.5, 0.75, 1.0, 1.5, 2.0, 4.0, f64::INFINITY] {
                let v = divergences::renyi_cond_entropy_state(&rho, 2, 2, RenyiOrder::sandwiched(a)?)?.value;
                worst = worst.max(v - prev);
                prev = v;
            }
            let mut prev = f64::INFINITY;
            for a in [0.0, 0.5, 1.0, 1.5, 2.0] {
                let v = divergences::renyi_cond_entropy_state(&rho, 2, 2, RenyiOrder::petz(a)?)?.value;
                worst = worst.max(v - prev);
                prev = v;
            }
        }
        Ok(Outcome { residual: worst.max(0.0), allowed: tol, detail: "largest increase of S_α(A|B) along increasing α".into() })
    }));

    checks.push(run_check("yield-cost-tradeoff", || {
        let cnot = BipartiteChannel::cnot()?;
        let spec = GibbsSpec::trivial(2, 1.0)?;
        let r = resource::tradeoff_check(&cnot, &spec, 0.5, SearchOptions { starts: 4, seed, max_iter: 100 })?;
        Ok(Outcome {
            residual: (-r.margin).max(0.0),
            allowed: 1e-6,
            detail: format!("CNOT, ε = 0.5: cost {:.6} ≤ yield {:.6} + slack {:.6}", r.cost, r.yield_lower, r.slack),
        })
    }));

    if opts.include_aep {
        checks.push(run_check("aep-n2", || {
            let n = BipartiteChannel::cnot()?.white_noise(0.5)?;
            let table = channels::weyl_covariance_table(&n)?;
            let r = chanent::aep_bracket(&n, 2, table.as_ref(), 1e-4)?;
            let mut worst = 0.0f64;
            for w in r.per_copy.windows(2) {
                worst = worst.max(w[0] - w[1]);
            }
            worst = worst.max(r.per_copy.last().copied().unwrap_or(f64::NAN) - r.vn_bound);
            Ok(Outcome {
                residual: worst.max(0.0),
                allowed: if r.certified { 1e-4 } else { f64::NEG_INFINITY },
                detail: format!("per-copy {:?}, Choi bound {:.9}, certified {}", r.per_copy, r.vn_bound, r.certified),
            })
        }));
    }

    let all_passed = checks.iter().all(|c| c.passed);
    SuiteReport {
        schema_version: SCHEMA_VERSION.into(),
        toolkit_version: TOOLKIT_VERSION.into(),
        seed,
        tolerance: tol,
        all_passed,
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints() {
        let g = p_grid(21);
        assert_eq!(g.len(), 21);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[20], 1.0);
        assert_eq!(g[10], 0.5);
    }

    #[test]
    fn empty_csv_still_has_header() {
        let s = records_to_csv(&[]).unwrap();
        assert_eq!(s, format!("{CSV_HEADER}\n"));
        assert!(records_from_csv(&s).unwrap().is_empty());
    }
}
