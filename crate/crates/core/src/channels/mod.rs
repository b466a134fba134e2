//! Bipartite quantum channels `A'B' → AB` stored as Choi operators.
//!
//! The Choi operator Γ lives on `R_A ⊗ A ⊗ R_B ⊗ B` (in that order) with
//! `|R_A| = |A'|` and `|R_B| = |B'|`, and is built by feeding the unnormalized
//! maximally entangled operators Γ_{R_A A'} and Γ_{R_B B'} through the channel.
//! Point-to-point channels are the special case `|B'| = |B| = 1`.

mod covariance;
mod json;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::{self, CMatrix, DimSignature, HermitianOperator};
use crate::random::{self, Rng};

pub use covariance::{is_telecovariant, weyl_covariance_table, CovarianceTable, TelecovReport};

/// CPTP tolerance used by constructors.
pub const CPTP_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ChannelDims {
    pub a_in: usize,
    pub b_in: usize,
    pub a_out: usize,
    pub b_out: usize,
}

impl ChannelDims {
    pub fn new(a_in: usize, b_in: usize, a_out: usize, b_out: usize) -> Self {
        Self { a_in, b_in, a_out, b_out }
    }

    pub fn point_to_point(d_in: usize, d_out: usize) -> Self {
        Self::new(d_in, 1, d_out, 1)
    }

    pub fn input(&self) -> usize {
        self.a_in * self.b_in
    }

    pub fn output(&self) -> usize {
        self.a_out * self.b_out
    }

    /// Side length of the Choi operator.
    pub fn choi_dim(&self) -> usize {
        self.input() * self.output()
    }

    /// Signature `[R_A, A, R_B, B]`.
    pub fn signature(&self) -> DimSignature {
        DimSignature::new(&[self.a_in, self.a_out, self.b_in, self.b_out]).expect("positive dims")
    }

    pub fn is_point_to_point(&self) -> bool {
        self.b_in == 1 && self.b_out == 1
    }

    fn check(&self) -> Result<()> {
        if self.a_in == 0 || self.b_in == 0 || self.a_out == 0 || self.b_out == 0 {
            return Err(Error::Dimension(format!("channel dims must be positive, got {self:?}")));
        }
        Ok(())
    }
}

/// Which signaling direction a predicate refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// A' cannot influence B.
    AToB,
    /// B' cannot influence A.
    BToA,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CptpReport {
    pub min_eigenvalue: f64,
    /// max |tr_{AB} Γ − 1|
    pub marginal_error: f64,
    pub holds: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PredicateReport {
    pub holds: bool,
    pub residual: f64,
}

/// Gibbs state specification on the output system A.
#[derive(Clone, Debug, PartialEq)]
pub struct GibbsSpec {
    pub hamiltonian: HermitianOperator,
    pub beta: f64,
}

impl GibbsSpec {
    pub fn new(hamiltonian: HermitianOperator, beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidArgument(format!("inverse temperature must be positive, got {beta}")));
        }
        Ok(Self { hamiltonian, beta })
    }

    /// Zero Hamiltonian on a d-dimensional system.
    pub fn trivial(d: usize, beta: f64) -> Result<Self> {
        Self::new(HermitianOperator::zeros(d), beta)
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    /// exp(−βH)/Z, computed with the ground energy shifted to zero.
    pub fn gibbs_state(&self) -> HermitianOperator {
        let e0 = self.hamiltonian.min_eigenvalue();
        let un = self.hamiltonian.apply_fn(|x| (-self.beta * (x - e0)).exp());
        let z = un.trace();
        un.scale(1.0 / z)
    }

    /// ln Z
    pub fn log_partition(&self) -> f64 {
        let e0 = self.hamiltonian.min_eigenvalue();
        let z: f64 = self.hamiltonian.eigenvalues().iter().map(|x| (-self.beta * (x - e0)).exp()).sum();
        z.ln() - self.beta * e0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteChannel {
    dims: ChannelDims,
    choi: HermitianOperator,
}

impl BipartiteChannel {
    /// Wraps a Choi operator after checking complete positivity and trace
    /// preservation at [`CPTP_TOL`].
    pub fn from_choi(dims: ChannelDims, choi: HermitianOperator) -> Result<Self> {
        let ch = Self::from_choi_unchecked(dims, choi)?;
        let rep = ch.cptp_report(CPTP_TOL);
        if !rep.holds {
            return Err(Error::NotChannel(format!(
                "min eigenvalue {:.3e}, marginal error {:.3e}",
                rep.min_eigenvalue, rep.marginal_error
            )));
        }
        Ok(ch)
    }

    /// Wraps a Choi operator checking only its dimension.
    pub fn from_choi_unchecked(dims: ChannelDims, choi: HermitianOperator) -> Result<Self> {
        dims.check()?;
        if choi.dim() != dims.choi_dim() {
            return Err(Error::Dimension(format!("Choi dim {} vs expected {}", choi.dim(), dims.choi_dim())));
        }
        Ok(Self { dims, choi })
    }

    /// Channel with Kraus operators `K : A'B' → AB`, each of shape
    /// `(|A||B|) × (|A'||B'|)` in row-major tensor order.
    pub fn from_kraus(dims: ChannelDims, kraus: &[CMatrix]) -> Result<Self> {
        dims.check()?;
        if kraus.is_empty() {
            return Err(Error::InvalidArgument("empty Kraus list".into()));
        }
        let n = dims.choi_dim();
        let mut m = CMatrix::zeros(n, n);
        for k in kraus {
            if k.nrows() != dims.output() || k.ncols() != dims.input() {
                return Err(Error::Dimension(format!(
                    "Kraus operator {}x{} vs {}x{}",
                    k.nrows(),
                    k.ncols(),
                    dims.output(),
                    dims.input()
                )));
            }
            let v = kraus_vector(&dims, k);
            for i in 0..n {
                if v[i].norm() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    m[(i, j)] += v[i] * v[j].conj();
                }
            }
        }
        Self::from_choi(dims, HermitianOperator::hermitian_part(&m))
    }

    pub fn from_unitary(u: &CMatrix, dims: ChannelDims) -> Result<Self> {
        if dims.input() != dims.output() {
            return Err(Error::Dimension("unitary channel needs equal input and output dimension".into()));
        }
        if !matcore::is_unitary(u, 1e-10) {
            return Err(Error::InvalidArgument("matrix is not unitary".into()));
        }
        Self::from_kraus(dims, std::slice::from_ref(u))
    }

    /// Point-to-point unitary channel.
    pub fn unitary(u: &CMatrix) -> Result<Self> {
        Self::from_unitary(u, ChannelDims::point_to_point(u.nrows(), u.nrows()))
    }

    /// id_{A'→A} ⊗ id_{B'→B}.
    pub fn identity(da: usize, db: usize) -> Result<Self> {
        let d = da * db;
        Self::from_unitary(&CMatrix::identity(d, d), ChannelDims::new(da, db, da, db))
    }

    /// Swap of two d-dimensional systems: A carries the B' input and B the
    /// A' input. Only the square case is constructed.
    pub fn swap(d: usize) -> Result<Self> {
        let n = d * d;
        let mut u = CMatrix::zeros(n, n);
        for a in 0..d {
            for b in 0..d {
                u[(b * d + a, a * d + b)] = Complex64::new(1.0, 0.0);
            }
        }
        Self::from_unitary(&u, ChannelDims::new(d, d, d, d))
    }

    /// Σ_j |j⟩⟨j|_A ⊗ U_j with control on A and target on B.
    pub fn controlled_unitary(unitaries: &[CMatrix]) -> Result<Self> {
        let da = unitaries.len();
        if da == 0 {
            return Err(Error::InvalidArgument("no unitaries given".into()));
        }
        let db = unitaries[0].nrows();
        let mut u = CMatrix::zeros(da * db, da * db);
        for (j, uj) in unitaries.iter().enumerate() {
            if uj.nrows() != db || uj.ncols() != db {
                return Err(Error::Dimension(format!("controlled unitary {j} has shape {}x{}", uj.nrows(), uj.ncols())));
            }
            if !matcore::is_unitary(uj, 1e-10) {
                return Err(Error::InvalidArgument(format!("controlled operator {j} is not unitary")));
            }
            u.view_mut((j * db, j * db), (db, db)).copy_from(uj);
        }
        Self::from_unitary(&u, ChannelDims::new(da, db, da, db))
    }

    pub fn cnot() -> Result<Self> {
        let w = weyl_operators(2);
        Self::controlled_unitary(&[w[0].clone(), w[2].clone()])
    }

    /// Replacer with output ω on `AB`: Γ = 1_{R_A R_B} ⊗ ω, reordered.
    pub fn replacer(omega: &HermitianOperator, dims: ChannelDims) -> Result<Self> {
        dims.check()?;
        omega.check_state(1e-8)?;
        if omega.dim() != dims.output() {
            return Err(Error::Dimension(format!("replacer output dim {} vs {}", omega.dim(), dims.output())));
        }
        let raw = HermitianOperator::identity(dims.input()).kron(omega);
        // [R_A, R_B, A, B] → [R_A, A, R_B, B]
        let sig = DimSignature::new(&[dims.a_in, dims.b_in, dims.a_out, dims.b_out])?;
        let choi = matcore::permute_subsystems(&raw, &sig, &[0, 2, 1, 3])?;
        Self::from_choi(dims, choi)
    }

    /// Fully mixing replacer onto π_A ⊗ π_B.
    pub fn completely_mixing(dims: ChannelDims) -> Result<Self> {
        Self::replacer(&HermitianOperator::maximally_mixed(dims.output()), dims)
    }

    /// Absolutely thermal point-to-point channel `d_in → A`.
    pub fn thermal(spec: &GibbsSpec, d_in: usize) -> Result<Self> {
        Self::replacer(&spec.gibbs_state(), ChannelDims::point_to_point(d_in, spec.dim()))
    }

    /// Uniform mixture of the m² Weyl unitary channels on one m-level system.
    pub fn weyl_mix(m: usize) -> Result<(Vec<CMatrix>, Self)> {
        if m < 2 {
            return Err(Error::InvalidArgument("Weyl mixture needs m >= 2".into()));
        }
        let ws = weyl_operators(m);
        let chans: Vec<Self> = ws.iter().map(Self::unitary).collect::<Result<_>>()?;
        let refs: Vec<&Self> = chans.iter().collect();
        let w = vec![1.0 / (m * m) as f64; m * m];
        let mix = Self::mix(&refs, &w)?;
        Ok((ws, mix))
    }

    /// Convex mixture of channels with equal dims.
    pub fn mix(channels: &[&Self], weights: &[f64]) -> Result<Self> {
        if channels.is_empty() || channels.len() != weights.len() {
            return Err(Error::InvalidArgument("channel and weight lists must be nonempty and equal length".into()));
        }
        let total: f64 = weights.iter().sum();
        if weights.iter().any(|&w| w < 0.0) || (total - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!("weights must be nonnegative and sum to 1 (sum {total})")));
        }
        let dims = channels[0].dims;
        if channels.iter().any(|c| c.dims != dims) {
            return Err(Error::Dimension("mixed channels have different dims".into()));
        }
        let ops: Vec<&HermitianOperator> = channels.iter().map(|c| &c.choi).collect();
        Self::from_choi(dims, HermitianOperator::combine(&ops, weights)?)
    }

    /// p·R^π + (1 − p)·N with R^π the fully mixing replacer.
    pub fn white_noise(&self, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!("noise weight {p} outside [0,1]")));
        }
        let r = Self::completely_mixing(self.dims)?;
        Self::mix(&[&r, self], &[p, 1.0 - p])
    }

    /// Haar-random Stinespring isometry into `output ⊗ env`, environment
    /// traced out.
    pub fn random(dims: ChannelDims, env: usize, rng: &mut Rng) -> Result<Self> {
        dims.check()?;
        if env == 0 || dims.output() * env < dims.input() {
            return Err(Error::Dimension(format!("environment dim {env} too small for an isometry")));
        }
        let v = random::haar_isometry(rng, dims.output() * env, dims.input());
        let kraus: Vec<CMatrix> = (0..env)
            .map(|e| CMatrix::from_fn(dims.output(), dims.input(), |o, i| v[(o * env + e, i)]))
            .collect();
        Self::from_kraus(dims, &kraus)
    }

    pub fn random_seeded(dims: ChannelDims, env: usize, seed: u64) -> Result<Self> {
        Self::random(dims, env, &mut random::rng(seed))
    }

    /// Semilocalizable channel with no signalling from A' to B: a random
    /// channel `B' → M B` followed by a random channel `A' M → A`.
    pub fn random_semicausal(dims: ChannelDims, memory: usize, rng: &mut Rng) -> Result<Self> {
        dims.check()?;
        if memory == 0 {
            return Err(Error::InvalidArgument("memory dimension must be positive".into()));
        }
        let stinespring = |rng: &mut Rng, d_in: usize, d_out: usize| -> Vec<CMatrix> {
            let env = d_in.div_ceil(d_out).max(2);
            let v = random::haar_isometry(rng, d_out * env, d_in);
            (0..env).map(|e| CMatrix::from_fn(d_out, d_in, |o, i| v[(o * env + e, i)])).collect()
        };
        let kb = stinespring(rng, dims.b_in, memory * dims.b_out);
        let ka = stinespring(rng, dims.a_in * memory, dims.a_out);
        let id_a = CMatrix::identity(dims.a_in, dims.a_in);
        let id_b = CMatrix::identity(dims.b_out, dims.b_out);
        let mut kraus = Vec::with_capacity(ka.len() * kb.len());
        for l in &ka {
            for k in &kb {
                // A'B' → A' M B → A B
                kraus.push(matcore::kron_matrix(l, &id_b) * matcore::kron_matrix(&id_a, k));
            }
        }
        Self::from_kraus(dims, &kraus)
    }

    /// P ⊗ Q for point-to-point P on the A side and Q on the B side.
    pub fn local_product(p: &Self, q: &Self) -> Result<Self> {
        if !p.dims.is_point_to_point() || !q.dims.is_point_to_point() {
            return Err(Error::InvalidArgument("local_product expects point-to-point factors".into()));
        }
        let dims = ChannelDims::new(p.dims.a_in, q.dims.a_in, p.dims.a_out, q.dims.a_out);
        Self::from_choi(dims, p.choi.kron(&q.choi))
    }

    /// N₁ ⊗ N₂ with parties A = A₁A₂ and B = B₁B₂.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let (d1, d2) = (self.dims, other.dims);
        let dims = ChannelDims::new(d1.a_in * d2.a_in, d1.b_in * d2.b_in, d1.a_out * d2.a_out, d1.b_out * d2.b_out);
        let raw = self.choi.kron(&other.choi);
        let sig = DimSignature::new(&[d1.a_in, d1.a_out, d1.b_in, d1.b_out, d2.a_in, d2.a_out, d2.b_in, d2.b_out])?;
        let choi = matcore::permute_subsystems(&raw, &sig, &[0, 4, 1, 5, 2, 6, 3, 7])?;
        Self::from_choi(dims, choi)
    }

    /// n-fold tensor power.
    pub fn tensor_power(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("tensor power needs n >= 1".into()));
        }
        let mut out = self.clone();
        for _ in 1..n {
            out = out.tensor(self)?;
        }
        Ok(out)
    }

    /// Same channel with the roles of the two parties exchanged.
    pub fn swap_parties(&self) -> Self {
        let d = self.dims;
        let choi = matcore::permute_subsystems(&self.choi, &d.signature(), &[2, 3, 0, 1]).expect("valid permutation");
        Self { dims: ChannelDims::new(d.b_in, d.a_in, d.b_out, d.a_out), choi }
    }

    pub fn dims(&self) -> ChannelDims {
        self.dims
    }

    pub fn signature(&self) -> DimSignature {
        self.dims.signature()
    }

    /// Γ^N.
    pub fn choi(&self) -> &HermitianOperator {
        &self.choi
    }

    /// Φ^N = Γ^N / (|A'||B'|).
    pub fn choi_state(&self) -> HermitianOperator {
        self.choi.scale(1.0 / self.dims.input() as f64)
    }

    pub fn cptp_report(&self, tol: f64) -> CptpReport {
        let min_eigenvalue = self.choi.min_eigenvalue();
        let marg = matcore::partial_trace(&self.choi, &self.signature(), &[0, 2]).expect("valid signature");
        let id = HermitianOperator::identity(self.dims.input());
        let marginal_error = marg.max_abs_diff(&id);
        let scale = self.choi.max_eigenvalue().max(1.0);
        CptpReport {
            min_eigenvalue,
            marginal_error,
            holds: min_eigenvalue >= -tol * scale && marginal_error <= tol,
        }
    }

    /// Output of the channel on a state of `A'B'`.
    pub fn apply(&self, rho: &HermitianOperator) -> Result<HermitianOperator> {
        self.apply_with_reference(rho, 1)
    }

    /// (id_R ⊗ N)(ψ) for ψ on `R ⊗ A' ⊗ B'`; output on `R ⊗ A ⊗ B`.
    pub fn apply_with_reference(&self, psi: &HermitianOperator, r: usize) -> Result<HermitianOperator> {
        let d = self.dims;
        let din = d.input();
        let dout = d.output();
        if psi.dim() != r * din {
            return Err(Error::Dimension(format!("input dim {} vs {}", psi.dim(), r * din)));
        }
        // Γ reordered to [R_A, R_B, A, B] so blocks are indexed by input pairs.
        let sig = self.signature();
        let g = matcore::permute_subsystems(&self.choi, &sig, &[0, 2, 1, 3])?;
        let n = r * dout;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        let gd = g.dim();
        for r1 in 0..r {
            for r2 in 0..r {
                for x in 0..din {
                    for y in 0..din {
                        let w = psi.get(r1 * din + x, r2 * din + y);
                        if w.norm() == 0.0 {
                            continue;
                        }
                        // N(|x⟩⟨y|) = Γ block (x, y)
                        for o1 in 0..dout {
                            for o2 in 0..dout {
                                let gv = g.entries()[(x * dout + o1) * gd + y * dout + o2];
                                out[(r1 * dout + o1) * n + r2 * dout + o2] += w * gv;
                            }
                        }
                    }
                }
            }
        }
        Ok(HermitianOperator::hermitian_part(&CMatrix::from_row_slice(n, n, &out)))
    }

    /// T(σ) = tr_A N(ρ ⊗ σ) as a point-to-point channel `B' → B`.
    pub fn reduced_channel(&self, fixed_input: &HermitianOperator) -> Result<Self> {
        let d = self.dims;
        fixed_input.check_state(1e-8)?;
        if fixed_input.dim() != d.a_in {
            return Err(Error::Dimension(format!("fixed input dim {} vs |A'| = {}", fixed_input.dim(), d.a_in)));
        }
        let nb = d.b_in * d.b_out;
        let n = self.choi.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); nb * nb];
        for i in 0..d.a_in {
            for j in 0..d.a_in {
                let w = fixed_input.get(i, j);
                if w.norm() == 0.0 {
                    continue;
                }
                for a in 0..d.a_out {
                    let ri = (i * d.a_out + a) * nb;
                    let rj = (j * d.a_out + a) * nb;
                    for s in 0..nb {
                        for t in 0..nb {
                            out[s * nb + t] += w * self.choi.entries()[(ri + s) * n + rj + t];
                        }
                    }
                }
            }
        }
        let choi = HermitianOperator::hermitian_part(&CMatrix::from_row_slice(nb, nb, &out));
        Self::from_choi(ChannelDims::point_to_point(d.b_in, d.b_out), choi)
    }

    /// Checks tr_A Γ = 1_{R_A} ⊗ X for the given direction. The residual is the
    /// trace norm distance to the averaged block X* = tr_{R_A A}Γ/|A'|.
    pub fn semicausal(&self, direction: Direction, tol: f64) -> PredicateReport {
        let ch = match direction {
            Direction::AToB => self.clone(),
            Direction::BToA => self.swap_parties(),
        };
        let d = ch.dims;
        let sig = ch.signature();
        let ta = matcore::partial_trace(&ch.choi, &sig, &[0, 2, 3]).expect("valid signature");
        let x = matcore::partial_trace(&ch.choi, &sig, &[2, 3]).expect("valid signature").scale(1.0 / d.a_in as f64);
        let target = HermitianOperator::identity(d.a_in).kron(&x);
        let residual = ta.sub(&target).map(|m| m.trace_norm()).unwrap_or(f64::INFINITY);
        PredicateReport { holds: residual <= tol, residual }
    }

    /// Positivity of the partial transpose of Φ^N across `R_A A : R_B B`. The
    /// residual is the smallest eigenvalue.
    pub fn ppt_choi(&self, tol: f64) -> PredicateReport {
        let pt = matcore::partial_transpose(&self.choi_state(), &self.signature(), &[2, 3]).expect("valid signature");
        let m = pt.min_eigenvalue();
        PredicateReport { holds: m >= -tol, residual: m }
    }

    /// PPT test plus an optional product-Kraus certificate `{A_i ⊗ B_i}`.
    pub fn separability_diagnostic(&self, certificate: Option<&[(CMatrix, CMatrix)]>) -> SeparabilityReport {
        let ppt = self.ppt_choi(1e-9);
        let certificate_residual = certificate.map(|kr| {
            let ks: Vec<CMatrix> = kr.iter().map(|(a, b)| a.kronecker(b)).collect();
            match Self::from_kraus(self.dims, &ks) {
                Ok(c) => c.choi.max_abs_diff(&self.choi),
                Err(_) => f64::INFINITY,
            }
        });
        SeparabilityReport { ppt: ppt.holds, ppt_min_eigenvalue: ppt.residual, certificate_residual }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeparabilityReport {
    pub ppt: bool,
    pub ppt_min_eigenvalue: f64,
    /// Max entrywise Choi mismatch of the supplied product-Kraus decomposition.
    pub certificate_residual: Option<f64>,
}

/// |Γ_K⟩ for a Kraus operator, indexed by (R_A, A, R_B, B).
fn kraus_vector(d: &ChannelDims, k: &CMatrix) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); d.choi_dim()];
    for i in 0..d.a_in {
        for a in 0..d.a_out {
            for kk in 0..d.b_in {
                for b in 0..d.b_out {
                    let idx = ((i * d.a_out + a) * d.b_in + kk) * d.b_out + b;
                    v[idx] = k[(a * d.b_out + b, i * d.b_in + kk)];
                }
            }
        }
    }
    v
}

/// The m² Weyl operators X^a Z^b, ordered by (a, b).
pub fn weyl_operators(m: usize) -> Vec<CMatrix> {
    let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / m as f64);
    let mut out = Vec::with_capacity(m * m);
    for a in 0..m {
        for b in 0..m {
            out.push(CMatrix::from_fn(m, m, |r, c| {
                if r == (c + a) % m {
                    omega.powu((b * c) as u32)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }));
        }
    }
    out
}

/// Pauli matrices 1, X, Y, Z.
pub fn paulis() -> [CMatrix; 4] {
    let z = Complex64::new(0.0, 0.0);
    let o = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    [
        CMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        CMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        CMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        CMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cnot_choi_is_rank_one_trace_four() {
        let c = BipartiteChannel::cnot().unwrap();
        assert_eq!(c.choi().rank(), 1);
        assert!((c.choi().trace() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn weyl_operators_are_trace_orthogonal() {
        for m in 2..=4 {
            let ws = weyl_operators(m);
            for (i, a) in ws.iter().enumerate() {
                for (j, b) in ws.iter().enumerate() {
                    let t = (a.adjoint() * b).trace();
                    let want = if i == j { m as f64 } else { 0.0 };
                    assert!((t - Complex64::new(want, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn thermal_two_level() {
        let spec = GibbsSpec::new(HermitianOperator::diagonal(&[0.0, 1.0]), std::f64::consts::LN_2).unwrap();
        let g = spec.gibbs_state();
        assert!((g.get(0, 0).re - 2.0 / 3.0).abs() < 1e-12);
        assert!((g.get(1, 1).re - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn swap_parties_is_involution() {
        let mut rng = random::rng(3);
        let c = BipartiteChannel::random(ChannelDims::new(2, 3, 2, 2), 2, &mut rng).unwrap();
        let back = c.swap_parties().swap_parties();
        assert!(back.choi().max_abs_diff(c.choi()) < 1e-14);
    }
}
