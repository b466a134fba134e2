//! Seeded random ensembles: Haar unitaries and isometries, Ginibre states.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::matcore::{CMatrix, HermitianOperator};

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian with E|z|² = 1.
pub fn complex_gaussian(rng: &mut Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn ginibre(rng: &mut Rng, rows: usize, cols: usize) -> CMatrix {
    // fill row-major so the draw order does not depend on storage layout
    let vals: Vec<Complex64> = (0..rows * cols).map(|_| complex_gaussian(rng)).collect();
    CMatrix::from_row_slice(rows, cols, &vals)
}

/// Haar isometry C^cols → C^rows via QR of a Gaussian matrix with the
/// phases of R's diagonal absorbed into Q.
pub fn haar_isometry(rng: &mut Rng, rows: usize, cols: usize) -> CMatrix {
    assert!(rows >= cols, "isometry needs rows >= cols");
    let g = ginibre(rng, rows, cols);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..cols {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..rows {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub fn haar_unitary(rng: &mut Rng, d: usize) -> CMatrix {
    haar_isometry(rng, d, d)
}

/// Uniformly random pure state vector.
pub fn random_pure_vector(rng: &mut Rng, d: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..d).map(|_| complex_gaussian(rng)).collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

/// Induced-measure mixed state: G G†/tr with G of shape d × env.
pub fn random_state(rng: &mut Rng, d: usize, env: usize) -> HermitianOperator {
    let g = ginibre(rng, d, env);
    let m = &g * g.adjoint();
    let op = HermitianOperator::hermitian_part(&m);
    let t = op.trace();
    op.scale(1.0 / t)
}

/// Random Hermitian operator with Gaussian entries.
pub fn random_hermitian(rng: &mut Rng, d: usize) -> HermitianOperator {
    let g = ginibre(rng, d, d);
    HermitianOperator::hermitian_part(&(&g + g.adjoint()))
}

/// Uniform real in [lo, hi).
pub fn uniform(rng: &mut Rng, lo: f64, hi: f64) -> f64 {
    use rand::Rng as _;
    rng.random_range(lo..hi)
}
