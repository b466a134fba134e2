//! Dense complex Hermitian linear algebra and the tensor primitives used by
//! every other module.
//!
//! Operators are stored row-major with an explicit side length. Subsystem
//! structure lives in a separate [`DimSignature`], so partial traces,
//! transposes and permutations reduce to index arithmetic.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// General dense complex matrix (unitaries, Kraus operators, isometries).
pub type CMatrix = DMatrix<Complex64>;

/// Absolute tolerance for the Hermiticity check, scaled by the largest entry.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues above this negative threshold are clamped to zero.
pub const PSD_CLAMP: f64 = 1e-10;
/// Eigenvalues below this are reported as a PSD violation.
pub const NOT_PSD: f64 = 1e-8;
/// Relative cutoff separating support from kernel.
pub const SUPPORT_REL: f64 = 1e-10;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Square complex Hermitian array in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    dim: usize,
    entries: Vec<Complex64>,
}

/// Spectral decomposition with eigenvalues sorted descending; column `k` of
/// `vectors` belongs to `values[k]`.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

fn max_hermitian_deviation(dim: usize, e: &[Complex64]) -> (f64, f64) {
    let mut dev = 0.0f64;
    let mut scale = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            let a = e[i * dim + j];
            let b = e[j * dim + i].conj();
            dev = dev.max((a - b).norm());
            scale = scale.max(a.norm());
        }
    }
    (dev, scale)
}

impl HermitianOperator {
    /// Validates Hermiticity and stores the exact Hermitian part.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::Dimension(format!(
                "{} entries for side length {}",
                entries.len(),
                dim
            )));
        }
        let (dev, scale) = max_hermitian_deviation(dim, &entries);
        if dev > HERMITIAN_TOL * scale.max(1.0) {
            return Err(Error::NotHermitian { deviation: dev });
        }
        Ok(Self::symmetrized(dim, entries))
    }

    fn symmetrized(dim: usize, mut entries: Vec<Complex64>) -> Self {
        for i in 0..dim {
            entries[i * dim + i].im = 0.0;
            for j in (i + 1)..dim {
                let a = entries[i * dim + j];
                let b = entries[j * dim + i].conj();
                let m = (a + b) * 0.5;
                entries[i * dim + j] = m;
                entries[j * dim + i] = m.conj();
            }
        }
        Self { dim, entries }
    }

    /// Checked conversion from a dense matrix.
    pub fn from_matrix(m: &CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Dimension(format!("{}x{} is not square", m.nrows(), m.ncols())));
        }
        let d = m.nrows();
        let entries = (0..d * d).map(|k| m[(k / d, k % d)]).collect();
        Self::new(d, entries)
    }

    /// (M + M†)/2 without validation. Used where Hermiticity holds by
    /// construction up to rounding.
    pub fn hermitian_part(m: &CMatrix) -> Self {
        let d = m.nrows();
        assert_eq!(d, m.ncols(), "hermitian_part of non-square matrix");
        let entries = (0..d * d).map(|k| m[(k / d, k % d)]).collect();
        Self::symmetrized(d, entries)
    }

    /// Builds from a real symmetric or complex Hermitian generator function.
    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Result<Self> {
        let entries = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        Self::new(dim, entries)
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![1.0; dim])
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let d = values.len();
        let mut entries = vec![ZERO; d * d];
        for (i, v) in values.iter().enumerate() {
            entries[i * d + i] = Complex64::new(*v, 0.0);
        }
        Self { dim: d, entries }
    }

    /// Maximally mixed state π_d.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self::identity(dim).scale(1.0 / dim as f64)
    }

    /// Rank-one operator |v⟩⟨v| (no normalization applied).
    pub fn outer(v: &[Complex64]) -> Self {
        let d = v.len();
        let mut entries = vec![ZERO; d * d];
        for i in 0..d {
            for j in 0..d {
                entries[i * d + j] = v[i] * v[j].conj();
            }
        }
        Self::symmetrized(d, entries)
    }

    /// Unnormalized maximally entangled operator Σ|ii⟩⟨jj| on d ⊗ d.
    pub fn gamma(d: usize) -> Self {
        let mut v = vec![ZERO; d * d];
        for i in 0..d {
            v[i * d + i] = ONE;
        }
        Self::outer(&v)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    pub fn to_matrix(&self) -> CMatrix {
        let d = self.dim;
        CMatrix::from_fn(d, d, |i, j| self.entries[i * d + j])
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.entries[i * self.dim + i].re).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|z| z * s).collect() }
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::Dimension(format!("{} vs {}", self.dim, other.dim)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    /// self + s·other
    pub fn add_scaled(&self, s: f64, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.zip(other, |a, b| a + b * s))
    }

    fn zip(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(*a, *b)).collect(),
        }
    }

    /// Convex combination Σ wᵢ opᵢ.
    pub fn combine(ops: &[&Self], weights: &[f64]) -> Result<Self> {
        let first = ops.first().ok_or_else(|| Error::InvalidArgument("empty combination".into()))?;
        let mut acc = Self::zeros(first.dim);
        for (op, w) in ops.iter().zip(weights) {
            acc = acc.add_scaled(*w, op)?;
        }
        Ok(acc)
    }

    /// Real inner product Re tr(A B) = tr(A B) for Hermitian A, B.
    pub fn inner(&self, other: &Self) -> f64 {
        let d = self.dim;
        let mut acc = 0.0;
        for i in 0..d {
            for j in 0..d {
                let a = self.entries[i * d + j];
                let b = other.entries[j * d + i];
                acc += a.re * b.re - a.im * b.im;
            }
        }
        acc
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries.iter().zip(&other.entries).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (a, b) = (self.dim, other.dim);
        let d = a * b;
        let mut entries = vec![ZERO; d * d];
        for i1 in 0..a {
            for j1 in 0..a {
                let x = self.entries[i1 * a + j1];
                if x == ZERO {
                    continue;
                }
                for i2 in 0..b {
                    let row = (i1 * b + i2) * d + j1 * b;
                    for j2 in 0..b {
                        entries[row + j2] = x * other.entries[i2 * b + j2];
                    }
                }
            }
        }
        Self { dim: d, entries }
    }

    /// U X U† for a (not necessarily square) U with U.ncols() == dim.
    pub fn conjugate(&self, u: &CMatrix) -> Result<Self> {
        if u.ncols() != self.dim {
            return Err(Error::Dimension(format!("{} columns vs dim {}", u.ncols(), self.dim)));
        }
        let m = u * self.to_matrix() * u.adjoint();
        Ok(Self::hermitian_part(&m))
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim;
        Self { dim: d, entries: (0..d * d).map(|k| self.entries[(k % d) * d + k / d]).collect() }
    }

    /// Spectral decomposition, eigenvalues descending.
    /// nalgebra's complex QR iteration occasionally returns NaN on highly
    /// structured inputs; those are retried in a fixed generic basis.
    fn symmetric_eigen(&self) -> nalgebra::SymmetricEigen<Complex64, nalgebra::Dyn> {
        let m = self.to_matrix();
        let se = nalgebra::SymmetricEigen::new(m.clone());
        if se.eigenvalues.iter().all(|x| x.is_finite()) && se.eigenvectors.iter().all(|z| z.is_finite()) {
            return se;
        }
        let w = crate::random::haar_unitary(&mut crate::random::rng(0x0e16), self.dim);
        let rotated = &w * m * w.adjoint();
        let rotated = (&rotated + rotated.adjoint()) * Complex64::new(0.5, 0.0);
        let mut se = nalgebra::SymmetricEigen::new(rotated);
        se.eigenvectors = w.adjoint() * se.eigenvectors;
        se
    }

    pub fn eigh(&self) -> Eigen {
        let se = self.symmetric_eigen();
        let mut order: Vec<usize> = (0..self.dim).collect();
        order.sort_by(|&a, &b| se.eigenvalues[b].total_cmp(&se.eigenvalues[a]));
        let values = order.iter().map(|&k| se.eigenvalues[k]).collect();
        let vectors = CMatrix::from_fn(self.dim, self.dim, |i, j| se.eigenvectors[(i, order[j])]);
        Eigen { values, vectors }
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.symmetric_eigen().eigenvalues.iter().copied().collect();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    pub fn min_eigenvalue(&self) -> f64 {
        *self.eigenvalues().last().expect("non-empty operator")
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// Σ|λᵢ|.
    pub fn trace_norm(&self) -> f64 {
        self.eigenvalues().iter().map(|x| x.abs()).sum()
    }

    /// f applied to the spectrum.
    pub fn apply_fn(&self, f: impl Fn(f64) -> f64) -> Self {
        let e = self.eigh();
        Self::from_spectrum(&e, f)
    }

    fn from_spectrum(e: &Eigen, f: impl Fn(f64) -> f64) -> Self {
        let d = e.values.len();
        let mut entries = vec![ZERO; d * d];
        for (k, &lam) in e.values.iter().enumerate() {
            let w = f(lam);
            if w == 0.0 {
                continue;
            }
            for i in 0..d {
                let vi = e.vectors[(i, k)] * w;
                for j in 0..d {
                    entries[i * d + j] += vi * e.vectors[(j, k)].conj();
                }
            }
        }
        Self::symmetrized(d, entries)
    }

    /// Spectrum with the PSD clamp applied; errors on significant negativity.
    pub fn psd_eigh(&self) -> Result<Eigen> {
        let mut e = self.eigh();
        let min = *e.values.last().expect("non-empty");
        if min < -NOT_PSD {
            return Err(Error::NotPsd { min_eigenvalue: min });
        }
        for v in e.values.iter_mut() {
            if *v < PSD_CLAMP {
                *v = v.max(0.0);
            }
        }
        Ok(e)
    }

    /// op^{1/2}, or op^{-1/2} on the support when `pseudo_inverse` is set.
    pub fn psd_sqrt(&self, pseudo_inverse: bool) -> Result<Self> {
        let e = self.psd_eigh()?;
        let cut = support_cutoff(&e.values);
        Ok(Self::from_spectrum(&e, |x| {
            if pseudo_inverse {
                if x > cut {
                    1.0 / x.sqrt()
                } else {
                    0.0
                }
            } else {
                x.max(0.0).sqrt()
            }
        }))
    }

    /// Moore-Penrose pseudo-inverse with the support rule of this module.
    pub fn pseudo_inverse(&self) -> Self {
        let e = self.eigh();
        let cut = support_cutoff(&e.values);
        Self::from_spectrum(&e, |x| if x.abs() > cut { 1.0 / x } else { 0.0 })
    }

    /// Projector onto the span of eigenvectors with eigenvalue above the support cutoff.
    pub fn support_projector(&self) -> Self {
        let e = self.eigh();
        let cut = support_cutoff(&e.values);
        Self::from_spectrum(&e, |x| if x > cut { 1.0 } else { 0.0 })
    }

    pub fn rank(&self) -> usize {
        let v = self.eigenvalues();
        let cut = support_cutoff(&v);
        v.iter().filter(|&&x| x > cut).count()
    }

    /// Matrix power on the support (zero on the kernel) for PSD operators.
    pub fn psd_power(&self, p: f64) -> Result<Self> {
        let e = self.psd_eigh()?;
        let cut = support_cutoff(&e.values);
        Ok(Self::from_spectrum(&e, |x| if x > cut { x.powf(p) } else { 0.0 }))
    }

    /// log₂ on the support, zero on the kernel.
    pub fn psd_log2(&self) -> Result<Self> {
        let e = self.psd_eigh()?;
        let cut = support_cutoff(&e.values);
        Ok(Self::from_spectrum(&e, |x| if x > cut { x.log2() } else { 0.0 }))
    }

    /// Checks that `self` is a density operator within `tol`.
    pub fn check_state(&self, tol: f64) -> Result<()> {
        let t = self.trace();
        if (t - 1.0).abs() > tol {
            return Err(Error::InvalidArgument(format!("trace {t} is not 1")));
        }
        let m = self.min_eigenvalue();
        if m < -tol.max(NOT_PSD) {
            return Err(Error::NotPsd { min_eigenvalue: m });
        }
        Ok(())
    }
}

/// Relative support cutoff λ ≥ 1e-10·λ_max (absolute floor for the zero operator).
pub fn support_cutoff(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(0.0f64, f64::max);
    (SUPPORT_REL * max).max(f64::MIN_POSITIVE)
}

/// Eigendecomposition of a raw matrix, rejecting non-Hermitian input.
pub fn herm_eig(m: &CMatrix) -> Result<Eigen> {
    Ok(HermitianOperator::from_matrix(m)?.eigh())
}

/// Ordered subsystem dimensions of a composite space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimSignature {
    dims: Vec<usize>,
}

impl DimSignature {
    pub fn new(dims: &[usize]) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::Dimension(format!("invalid signature {dims:?}")));
        }
        Ok(Self { dims: dims.to_vec() })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    fn check(&self, op_dim: usize) -> Result<()> {
        if self.total() != op_dim {
            return Err(Error::Dimension(format!(
                "signature {:?} (total {}) vs operator dim {}",
                self.dims,
                self.total(),
                op_dim
            )));
        }
        Ok(())
    }

    fn check_indices(&self, idx: &[usize]) -> Result<()> {
        for &i in idx {
            if i >= self.dims.len() {
                return Err(Error::IndexOutOfRange { index: i, count: self.dims.len() });
            }
        }
        Ok(())
    }

    /// Row-major strides.
    fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.dims.len()];
        for k in (0..self.dims.len().saturating_sub(1)).rev() {
            s[k] = s[k + 1] * self.dims[k + 1];
        }
        s
    }

    /// Full index for each multi-index over the listed subsystems, enumerated
    /// row-major in the listed order.
    fn offsets(&self, subsystems: &[usize]) -> Vec<usize> {
        let strides = self.strides();
        let mut out = vec![0usize];
        for &k in subsystems {
            let mut next = Vec::with_capacity(out.len() * self.dims[k]);
            for &base in &out {
                for v in 0..self.dims[k] {
                    next.push(base + v * strides[k]);
                }
            }
            out = next;
        }
        out
    }
}

/// Partial trace keeping the listed subsystems, in increasing index order.
pub fn partial_trace(op: &HermitianOperator, sig: &DimSignature, keep: &[usize]) -> Result<HermitianOperator> {
    sig.check(op.dim)?;
    sig.check_indices(keep)?;
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    let traced: Vec<usize> = (0..sig.len()).filter(|k| !keep.contains(k)).collect();
    let ko = sig.offsets(&keep);
    let to = sig.offsets(&traced);
    let dk = ko.len();
    let d = op.dim;
    let mut entries = vec![ZERO; dk * dk];
    for (i, &oi) in ko.iter().enumerate() {
        for (j, &oj) in ko.iter().enumerate() {
            let mut acc = ZERO;
            for &t in &to {
                acc += op.entries[(oi + t) * d + oj + t];
            }
            entries[i * dk + j] = acc;
        }
    }
    Ok(HermitianOperator::symmetrized(dk, entries))
}

/// Transpose on the listed subsystems.
pub fn partial_transpose(
    op: &HermitianOperator,
    sig: &DimSignature,
    transpose_set: &[usize],
) -> Result<HermitianOperator> {
    sig.check(op.dim)?;
    sig.check_indices(transpose_set)?;
    let n = sig.len();
    let strides = sig.strides();
    let d = op.dim;
    let digits = |mut x: usize| -> Vec<usize> {
        let mut v = vec![0; n];
        for k in 0..n {
            v[k] = x / strides[k];
            x %= strides[k];
        }
        v
    };
    let mut entries = vec![ZERO; d * d];
    for i in 0..d {
        let di = digits(i);
        for j in 0..d {
            let dj = digits(j);
            let (mut ni, mut nj) = (0, 0);
            for k in 0..n {
                let (a, b) = if transpose_set.contains(&k) { (dj[k], di[k]) } else { (di[k], dj[k]) };
                ni += a * strides[k];
                nj += b * strides[k];
            }
            entries[ni * d + nj] = op.entries[i * d + j];
        }
    }
    Ok(HermitianOperator::symmetrized(d, entries))
}

/// Reorders subsystems: output subsystem k is input subsystem `perm[k]`.
pub fn permute_subsystems(op: &HermitianOperator, sig: &DimSignature, perm: &[usize]) -> Result<HermitianOperator> {
    let m = permute_matrix(&op.to_matrix(), sig, perm)?;
    Ok(HermitianOperator::hermitian_part(&m))
}

/// Subsystem reordering for a general square matrix.
pub fn permute_matrix(m: &CMatrix, sig: &DimSignature, perm: &[usize]) -> Result<CMatrix> {
    sig.check(m.nrows())?;
    let mut sorted = perm.to_vec();
    sorted.sort_unstable();
    if sorted != (0..sig.len()).collect::<Vec<_>>() {
        return Err(Error::InvalidArgument(format!("{perm:?} is not a permutation")));
    }
    let map = sig.offsets(perm);
    let d = m.nrows();
    Ok(CMatrix::from_fn(d, d, |i, j| m[(map[i], map[j])]))
}

/// Signature after permuting.
pub fn permuted_signature(sig: &DimSignature, perm: &[usize]) -> DimSignature {
    DimSignature { dims: perm.iter().map(|&k| sig.dims[k]).collect() }
}

/// (U on `targets`) ⊗ 1 acting by conjugation; `targets` are taken in the
/// listed order to match U's tensor factor order.
pub fn apply_local_unitary(
    op: &HermitianOperator,
    sig: &DimSignature,
    targets: &[usize],
    u: &CMatrix,
) -> Result<HermitianOperator> {
    sig.check(op.dim)?;
    sig.check_indices(targets)?;
    let dt: usize = targets.iter().map(|&k| sig.dims[k]).product();
    if u.nrows() != dt || u.ncols() != dt {
        return Err(Error::Dimension(format!("unitary {}x{} vs target dim {dt}", u.nrows(), u.ncols())));
    }
    let rest: Vec<usize> = (0..sig.len()).filter(|k| !targets.contains(k)).collect();
    let mut perm = targets.to_vec();
    perm.extend(&rest);
    let moved = permute_matrix(&op.to_matrix(), sig, &perm)?;
    let dr = op.dim / dt;
    let full = kron_matrix(u, &CMatrix::identity(dr, dr));
    let conj = &full * moved * full.adjoint();
    let psig = permuted_signature(sig, &perm);
    let mut inv = vec![0; perm.len()];
    for (k, &p) in perm.iter().enumerate() {
        inv[p] = k;
    }
    let back = permute_matrix(&conj, &psig, &inv)?;
    Ok(HermitianOperator::hermitian_part(&back))
}

pub fn kron_matrix(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Sum of singular values of a general matrix.
pub fn trace_norm_matrix(m: &CMatrix) -> f64 {
    m.clone().svd(false, false).singular_values.iter().sum()
}

/// ‖√ρ√σ‖₁² computed as (tr√(√ρ σ √ρ))².
pub fn fidelity(rho: &HermitianOperator, sigma: &HermitianOperator) -> Result<f64> {
    rho.check_same(sigma)?;
    let sr = rho.psd_sqrt(false)?;
    let inner = sigma.conjugate(&sr.to_matrix())?;
    let root: f64 = inner.psd_eigh()?.values.iter().map(|x| x.max(0.0).sqrt()).sum();
    Ok(root * root)
}

/// Generalized fidelity for subnormalized arguments.
pub fn generalized_fidelity(rho: &HermitianOperator, sigma: &HermitianOperator) -> Result<f64> {
    let f = fidelity(rho, sigma)?;
    let defect = ((1.0 - rho.trace()).max(0.0) * (1.0 - sigma.trace()).max(0.0)).sqrt();
    let r = f.sqrt() + defect;
    Ok(r * r)
}

/// P(ρ,σ) = √(1 − F_≤(ρ,σ)).
pub fn purified_distance(rho: &HermitianOperator, sigma: &HermitianOperator) -> Result<f64> {
    Ok((1.0 - generalized_fidelity(rho, sigma)?).max(0.0).sqrt())
}

/// log₂ with log₂(0) = −∞.
pub fn log2(x: f64) -> f64 {
    x.log2()
}

/// Shannon-type entropy −Σ λ log₂ λ of a spectrum, with 0·log 0 = 0.
pub fn spectral_entropy(values: &[f64]) -> f64 {
    values.iter().filter(|&&x| x > PSD_CLAMP).map(|&x| -x * x.log2()).sum()
}

/// Checks U†U = 1 within `tol`.
pub fn is_unitary(u: &CMatrix, tol: f64) -> bool {
    if u.nrows() != u.ncols() {
        return false;
    }
    let d = u.nrows();
    (u.adjoint() * u - CMatrix::identity(d, d)).iter().all(|z| z.norm() <= tol)
}

/// Checks V†V = 1 within `tol` for a tall matrix.
pub fn is_isometry(v: &CMatrix, tol: f64) -> bool {
    let d = v.ncols();
    v.nrows() >= d && (v.adjoint() * v - CMatrix::identity(d, d)).iter().all(|z| z.norm() <= tol)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pauli_x() -> HermitianOperator {
        HermitianOperator::from_fn(2, |i, j| if i != j { ONE } else { ZERO }).unwrap()
    }

    #[test]
    fn pauli_x_spectrum() {
        let e = pauli_x().eigh();
        assert!((e.values[0] - 1.0).abs() < 1e-12 && (e.values[1] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_and_diagonal_spectra() {
        assert_eq!(HermitianOperator::identity(3).eigenvalues(), vec![1.0; 3]);
        let e = HermitianOperator::diagonal(&[5.0, 2.0, 2.0]).eigh();
        assert!((e.values[0] - 5.0).abs() < 1e-12);
        // the degenerate eigenspace has no weight on the first axis
        assert!(e.vectors[(0, 1)].norm() < 1e-12 && e.vectors[(0, 2)].norm() < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO]);
        assert!(matches!(herm_eig(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn sqrt_examples() {
        let r = HermitianOperator::diagonal(&[4.0, 9.0]).psd_sqrt(false).unwrap();
        assert!(r.max_abs_diff(&HermitianOperator::diagonal(&[2.0, 3.0])) < 1e-12);
        let p = HermitianOperator::maximally_mixed(2).psd_sqrt(false).unwrap();
        assert!((p.trace() - 2f64.sqrt()).abs() < 1e-12);
        let proj = HermitianOperator::diagonal(&[1.0, 0.0]);
        assert!(proj.psd_sqrt(true).unwrap().max_abs_diff(&proj) < 1e-12);
        let neg = HermitianOperator::diagonal(&[1.0, -1e-6]);
        assert!(matches!(neg.psd_sqrt(false), Err(Error::NotPsd { .. })));
        assert!(HermitianOperator::diagonal(&[1.0, -1e-11]).psd_sqrt(false).is_ok());
    }

    #[test]
    fn partial_trace_examples() {
        let phi = HermitianOperator::gamma(2).scale(0.5);
        let sig = DimSignature::new(&[2, 2]).unwrap();
        let a = partial_trace(&phi, &sig, &[0]).unwrap();
        assert!(a.max_abs_diff(&HermitianOperator::maximally_mixed(2)) < 1e-14);
        let rho = HermitianOperator::diagonal(&[0.3, 0.7]);
        let sigma = HermitianOperator::diagonal(&[2.0, 1.0]);
        let t = partial_trace(&rho.kron(&sigma), &sig, &[0]).unwrap();
        assert!(t.max_abs_diff(&rho.scale(3.0)) < 1e-14);
        assert_eq!(partial_trace(&phi, &sig, &[0, 1]).unwrap(), phi);
        assert!(matches!(partial_trace(&phi, &sig, &[2]), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn partial_transpose_of_bell_state() {
        let phi = HermitianOperator::gamma(2).scale(0.5);
        let sig = DimSignature::new(&[2, 2]).unwrap();
        let pt = partial_transpose(&phi, &sig, &[1]).unwrap();
        let ev = pt.eigenvalues();
        // oracle: Γᵀᴮ is the swap operator, eigenvalues ±1 scaled by 1/2
        let expected = [0.5, 0.5, 0.5, -0.5];
        for (a, b) in ev.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(partial_transpose(&pt, &sig, &[1]).unwrap(), phi);
    }

    #[test]
    fn fidelity_examples() {
        let zero = HermitianOperator::diagonal(&[1.0, 0.0]);
        let pi = HermitianOperator::maximally_mixed(2);
        assert!((fidelity(&zero, &pi).unwrap() - 0.5).abs() < 1e-12);
        assert!((fidelity(&pi, &pi).unwrap() - 1.0).abs() < 1e-12);
        assert!(purified_distance(&pi, &pi).unwrap() < 1e-6);
        assert!((pauli_x().trace_norm() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn local_unitary_matches_kron() {
        let sig = DimSignature::new(&[2, 3]).unwrap();
        let rho = HermitianOperator::diagonal(&[0.1, 0.2, 0.3, 0.1, 0.2, 0.1]);
        let x = CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
        let a = apply_local_unitary(&rho, &sig, &[0], &x).unwrap();
        let b = rho.conjugate(&x.kronecker(&CMatrix::identity(3, 3))).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-14);
    }
}
