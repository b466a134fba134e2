//! Homogeneous self-dual interior-point method for
//!
//! ```text
//! minimize cᵀx  subject to  Gx + s = h,  Ax = b,  s ∈ K
//! ```
//!
//! with K a product of a nonnegative orthant and real PSD cones. Search
//! directions use Nesterov-Todd scaling and a Mehrotra predictor-corrector.
//! Each iteration reduces the KKT system to the Schur complement
//! `Gᵀ(WᵀW)⁻¹G`, assembled from the sparse columns of G.

use nalgebra::DMatrix;

use super::SolverOptions;

/// (param, entries (row, col, value) of its G column in one block)
type BlockColumn = (usize, Vec<(u32, u32, f64)>);

pub(crate) struct StandardForm {
    pub n: usize,
    pub c: Vec<f64>,
    pub h_lp: Vec<f64>,
    pub h_blk: Vec<DMatrix<f64>>,
    pub a: DMatrix<f64>,
    pub b: Vec<f64>,
    lp_raw: Vec<(usize, usize, f64)>,
    blk_raw: Vec<Vec<(usize, u32, u32, f64)>>,
    /// per LP row: (param, value)
    lp_rows: Vec<Vec<(usize, f64)>>,
    /// per param: (LP row, value)
    lp_cols: Vec<Vec<(usize, f64)>>,
    /// per block: (param, entries of G column in that block, both triangles)
    blk_cols: Vec<Vec<BlockColumn>>,
}

impl StandardForm {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            c: vec![0.0; n],
            h_lp: Vec::new(),
            h_blk: Vec::new(),
            a: DMatrix::zeros(0, n),
            b: Vec::new(),
            lp_raw: Vec::new(),
            blk_raw: Vec::new(),
            lp_rows: Vec::new(),
            lp_cols: Vec::new(),
            blk_cols: Vec::new(),
        }
    }

    pub fn add_lp_row(&mut self, h: f64) -> usize {
        self.h_lp.push(h);
        self.h_lp.len() - 1
    }

    pub fn push_lp(&mut self, param: usize, row: usize, v: f64) {
        self.lp_raw.push((row, param, v));
    }

    pub fn add_block(&mut self, h: DMatrix<f64>) -> usize {
        self.h_blk.push(h);
        self.blk_raw.push(Vec::new());
        self.h_blk.len() - 1
    }

    pub fn push_block(&mut self, param: usize, blk: usize, r: usize, c: usize, v: f64) {
        self.blk_raw[blk].push((param, r as u32, c as u32, v));
    }

    pub fn finish(&mut self) {
        let mut lp = std::mem::take(&mut self.lp_raw);
        lp.sort_by_key(|x| (x.0, x.1));
        self.lp_rows = vec![Vec::new(); self.h_lp.len()];
        self.lp_cols = vec![Vec::new(); self.n];
        for (row, p, v) in lp {
            match self.lp_rows[row].last_mut() {
                Some(last) if last.0 == p => last.1 += v,
                _ => self.lp_rows[row].push((p, v)),
            }
        }
        for (row, list) in self.lp_rows.iter().enumerate() {
            for &(p, v) in list {
                self.lp_cols[p].push((row, v));
            }
        }
        self.blk_cols = std::mem::take(&mut self.blk_raw)
            .into_iter()
            .map(|mut raw| {
                raw.sort_by_key(|x| (x.0, x.1, x.2));
                let mut cols: Vec<BlockColumn> = Vec::new();
                for (p, r, c, v) in raw {
                    match cols.last_mut() {
                        Some((q, es)) if *q == p => match es.last_mut() {
                            Some(e) if e.0 == r && e.1 == c => e.2 += v,
                            _ => es.push((r, c, v)),
                        },
                        _ => cols.push((p, vec![(r, c, v)])),
                    }
                }
                cols
            })
            .collect();
    }

    fn degree(&self) -> usize {
        self.h_lp.len() + self.h_blk.iter().map(|m| m.nrows()).sum::<usize>()
    }

    fn g_mul(&self, x: &[f64]) -> CVec {
        let mut out = self.zero_cvec();
        for (row, list) in self.lp_rows.iter().enumerate() {
            out.lp[row] = list.iter().map(|&(p, v)| v * x[p]).sum();
        }
        for (b, cols) in self.blk_cols.iter().enumerate() {
            let m = &mut out.blk[b];
            for (p, es) in cols {
                let xp = x[*p];
                if xp == 0.0 {
                    continue;
                }
                for &(r, c, v) in es {
                    m[(r as usize, c as usize)] += v * xp;
                }
            }
        }
        out
    }

    fn gt_mul(&self, z: &CVec) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (p, list) in self.lp_cols.iter().enumerate() {
            out[p] = list.iter().map(|&(row, v)| v * z.lp[row]).sum();
        }
        for (b, cols) in self.blk_cols.iter().enumerate() {
            let m = &z.blk[b];
            for (p, es) in cols {
                out[*p] += es.iter().map(|&(r, c, v)| v * m[(r as usize, c as usize)]).sum::<f64>();
            }
        }
        out
    }

    fn a_mul(&self, x: &[f64]) -> Vec<f64> {
        (0..self.a.nrows()).map(|i| (0..self.n).map(|j| self.a[(i, j)] * x[j]).sum()).collect()
    }

    fn at_mul(&self, y: &[f64]) -> Vec<f64> {
        (0..self.n).map(|j| (0..self.a.nrows()).map(|i| self.a[(i, j)] * y[i]).sum()).collect()
    }

    fn zero_cvec(&self) -> CVec {
        CVec {
            lp: vec![0.0; self.h_lp.len()],
            blk: self.h_blk.iter().map(|m| DMatrix::zeros(m.nrows(), m.ncols())).collect(),
        }
    }

    fn h_cvec(&self) -> CVec {
        CVec { lp: self.h_lp.clone(), blk: self.h_blk.clone() }
    }

    fn identity(&self) -> CVec {
        CVec {
            lp: vec![1.0; self.h_lp.len()],
            blk: self.h_blk.iter().map(|m| DMatrix::identity(m.nrows(), m.ncols())).collect(),
        }
    }
}

/// Element of the cone's ambient space.
#[derive(Clone, Debug)]
pub(crate) struct CVec {
    pub lp: Vec<f64>,
    pub blk: Vec<DMatrix<f64>>,
}

impl CVec {
    fn dot(&self, o: &CVec) -> f64 {
        let mut s: f64 = self.lp.iter().zip(&o.lp).map(|(a, b)| a * b).sum();
        for (a, b) in self.blk.iter().zip(&o.blk) {
            s += a.dot(b);
        }
        s
    }

    fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    fn axpy(&mut self, alpha: f64, o: &CVec) {
        for (a, b) in self.lp.iter_mut().zip(&o.lp) {
            *a += alpha * b;
        }
        for (a, b) in self.blk.iter_mut().zip(&o.blk) {
            *a += b * alpha;
        }
    }

    fn scaled(&self, alpha: f64) -> CVec {
        CVec { lp: self.lp.iter().map(|x| alpha * x).collect(), blk: self.blk.iter().map(|m| m * alpha).collect() }
    }

    fn sub(&self, o: &CVec) -> CVec {
        let mut r = self.clone();
        r.axpy(-1.0, o);
        r
    }

    /// Smallest eigenvalue over all components (+∞ for an empty cone).
    fn min_eig(&self) -> f64 {
        let mut m = self.lp.iter().copied().fold(f64::INFINITY, f64::min);
        for b in &self.blk {
            let ev = b.clone().symmetric_eigenvalues();
            m = m.min(ev.iter().copied().fold(f64::INFINITY, f64::min));
        }
        m
    }
}

fn vnorm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn vdot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

struct BlockScaling {
    r: DMatrix<f64>,
    /// (R Rᵀ)⁻¹
    q: DMatrix<f64>,
    /// R Rᵀ
    p: DMatrix<f64>,
    lam: Vec<f64>,
}

/// Nesterov-Todd scaling W with W z = W⁻ᵀ s = λ.
struct Scaling {
    lp_d: Vec<f64>,
    lp_lam: Vec<f64>,
    blk: Vec<BlockScaling>,
}

impl Scaling {
    fn identity(sf: &StandardForm) -> Self {
        Self {
            lp_d: vec![1.0; sf.h_lp.len()],
            lp_lam: vec![1.0; sf.h_lp.len()],
            blk: sf
                .h_blk
                .iter()
                .map(|m| {
                    let k = m.nrows();
                    let i = DMatrix::identity(k, k);
                    BlockScaling { r: i.clone(), q: i.clone(), p: i, lam: vec![1.0; k] }
                })
                .collect(),
        }
    }

    fn compute(s: &CVec, z: &CVec) -> Option<Self> {
        let mut lp_d = Vec::with_capacity(s.lp.len());
        let mut lp_lam = Vec::with_capacity(s.lp.len());
        for (&si, &zi) in s.lp.iter().zip(&z.lp) {
            if !(si > 0.0 && zi > 0.0) {
                return None;
            }
            lp_d.push((si / zi).sqrt());
            lp_lam.push((si * zi).sqrt());
        }
        let mut blk = Vec::with_capacity(s.blk.len());
        for (sb, zb) in s.blk.iter().zip(&z.blk) {
            let ls = sb.clone().cholesky()?.l();
            let lz = zb.clone().cholesky()?.l();
            let m = lz.transpose() * &ls;
            let svd = m.svd(false, true);
            let vt = svd.v_t?;
            let sig = svd.singular_values;
            if sig.iter().any(|&x| x.is_nan() || x <= 0.0) {
                return None;
            }
            let k = sb.nrows();
            let v = vt.transpose();
            // R = L_s V Σ^{-1/2}
            let mut r = &ls * &v;
            for j in 0..k {
                let f = 1.0 / sig[j].sqrt();
                r.column_mut(j).scale_mut(f);
            }
            // R⁻¹ = Σ^{1/2} Vᵀ L_s⁻¹
            let ls_inv = ls.solve_lower_triangular(&DMatrix::identity(k, k))?;
            let mut rinv = &vt * ls_inv;
            for i in 0..k {
                let f = sig[i].sqrt();
                rinv.row_mut(i).scale_mut(f);
            }
            let q = rinv.transpose() * &rinv;
            let p = &r * r.transpose();
            blk.push(BlockScaling { r, q, p, lam: sig.iter().copied().collect() });
        }
        Some(Self { lp_d, lp_lam, blk })
    }

    /// W u
    fn w(&self, u: &CVec) -> CVec {
        CVec {
            lp: u.lp.iter().zip(&self.lp_d).map(|(a, d)| a * d).collect(),
            blk: u.blk.iter().zip(&self.blk).map(|(m, b)| b.r.transpose() * m * &b.r).collect(),
        }
    }

    /// Wᵀ u
    fn wt(&self, u: &CVec) -> CVec {
        CVec {
            lp: u.lp.iter().zip(&self.lp_d).map(|(a, d)| a * d).collect(),
            blk: u.blk.iter().zip(&self.blk).map(|(m, b)| &b.r * m * b.r.transpose()).collect(),
        }
    }

    /// (WᵀW)⁻¹ u
    fn d_inv(&self, u: &CVec) -> CVec {
        CVec {
            lp: u.lp.iter().zip(&self.lp_d).map(|(a, d)| a / (d * d)).collect(),
            blk: u.blk.iter().zip(&self.blk).map(|(m, b)| &b.q * m * &b.q).collect(),
        }
    }

    /// WᵀW u
    fn wtw(&self, u: &CVec) -> CVec {
        CVec {
            lp: u.lp.iter().zip(&self.lp_d).map(|(a, d)| a * d * d).collect(),
            blk: u.blk.iter().zip(&self.blk).map(|(m, b)| &b.p * m * &b.p).collect(),
        }
    }

    /// λ ∘ λ
    fn lam_sq(&self) -> CVec {
        CVec {
            lp: self.lp_lam.iter().map(|l| l * l).collect(),
            blk: self.blk.iter().map(|b| DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(b.lam.len(), b.lam.iter().map(|l| l * l)))).collect(),
        }
    }

    /// Solves λ ∘ u = d for u.
    fn lam_div(&self, d: &CVec) -> CVec {
        CVec {
            lp: d.lp.iter().zip(&self.lp_lam).map(|(a, l)| a / l).collect(),
            blk: d
                .blk
                .iter()
                .zip(&self.blk)
                .map(|(m, b)| DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| 2.0 * m[(i, j)] / (b.lam[i] + b.lam[j])))
                .collect(),
        }
    }

    /// Largest α with λ + α·d in the cone (∞ if unbounded).
    fn max_step(&self, d: &CVec) -> f64 {
        let mut alpha = f64::INFINITY;
        for (&di, &li) in d.lp.iter().zip(&self.lp_lam) {
            if di < 0.0 {
                alpha = alpha.min(-li / di);
            }
        }
        for (m, b) in d.blk.iter().zip(&self.blk) {
            let k = m.nrows();
            let sc = DMatrix::from_fn(k, k, |i, j| m[(i, j)] / (b.lam[i] * b.lam[j]).sqrt());
            let ev = sc.symmetric_eigenvalues();
            let mn = ev.iter().copied().fold(f64::INFINITY, f64::min);
            if mn < 0.0 {
                alpha = alpha.min(-1.0 / mn);
            }
        }
        alpha
    }
}

/// Symmetrized Jordan product a ∘ b.
fn jordan(a: &CVec, b: &CVec) -> CVec {
    CVec {
        lp: a.lp.iter().zip(&b.lp).map(|(x, y)| x * y).collect(),
        blk: a
            .blk
            .iter()
            .zip(&b.blk)
            .map(|(x, y)| {
                let p = x * y;
                (&p + p.transpose()) * 0.5
            })
            .collect(),
    }
}

/// Schur complement Gᵀ (WᵀW)⁻¹ G.
fn schur(sf: &StandardForm, sc: &Scaling) -> DMatrix<f64> {
    let n = sf.n;
    let mut h = DMatrix::<f64>::zeros(n, n);
    for (row, list) in sf.lp_rows.iter().enumerate() {
        let w = 1.0 / (sc.lp_d[row] * sc.lp_d[row]);
        for &(i, gi) in list {
            for &(j, gj) in list {
                h[(i, j)] += gi * gj * w;
            }
        }
    }
    for (b, cols) in sf.blk_cols.iter().enumerate() {
        let q = &sc.blk[b].q;
        let k = q.nrows();
        let qs: Vec<f64> = (0..k * k).map(|t| q[(t / k, t % k)]).collect();
        let nnz: usize = cols.iter().map(|(_, e)| e.len()).sum();
        if nnz < k * k {
            // sparse-sparse: Σ g g' Q[b,c] Q[a,d] over entries (a,b,g) ∈ Gᵢ, (c,d,g') ∈ Gⱼ
            for (ii, (pi, ei)) in cols.iter().enumerate() {
                for (pj, ej) in cols[ii..].iter() {
                    let mut sum = 0.0;
                    for &(a, bb, g) in ei {
                        let qa = &qs[a as usize * k..(a as usize + 1) * k];
                        let qb = &qs[bb as usize * k..(bb as usize + 1) * k];
                        let mut inner = 0.0;
                        for &(c, d, g2) in ej {
                            inner += g2 * qb[c as usize] * qa[d as usize];
                        }
                        sum += g * inner;
                    }
                    h[(*pi, *pj)] += sum;
                    if pi != pj {
                        h[(*pj, *pi)] += sum;
                    }
                }
            }
        } else {
            // dense: Tᵢ = Q Gᵢ Q, then Hᵢⱼ = ⟨Gⱼ, Tᵢ⟩
            for (ii, (pi, ei)) in cols.iter().enumerate() {
                let mut t = vec![0.0; k * k];
                for &(a, bb, g) in ei {
                    let (a, bb) = (a as usize, bb as usize);
                    for r in 0..k {
                        let f = g * qs[r * k + a];
                        if f == 0.0 {
                            continue;
                        }
                        let row = &mut t[r * k..(r + 1) * k];
                        let qb = &qs[bb * k..(bb + 1) * k];
                        for cidx in 0..k {
                            row[cidx] += f * qb[cidx];
                        }
                    }
                }
                for (pj, ej) in cols[ii..].iter() {
                    let sum: f64 = ej.iter().map(|&(c, d, g2)| g2 * t[d as usize * k + c as usize]).sum();
                    h[(*pi, *pj)] += sum;
                    if pi != pj {
                        h[(*pj, *pi)] += sum;
                    }
                }
            }
        }
    }
    h
}

struct Kkt {
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    n: usize,
    m: usize,
}

impl Kkt {
    fn factor(sf: &StandardForm, sc: &Scaling) -> Option<Self> {
        let n = sf.n;
        let m = sf.a.nrows();
        let h = schur(sf, sc);
        let scale = (0..n).map(|i| h[(i, i)].abs()).fold(1.0f64, f64::max);
        let delta = 1e-14 * scale;
        let mut k = DMatrix::<f64>::zeros(n + m, n + m);
        k.view_mut((0, 0), (n, n)).copy_from(&h);
        for i in 0..n {
            k[(i, i)] += delta;
        }
        for i in 0..m {
            for j in 0..n {
                k[(n + i, j)] = sf.a[(i, j)];
                k[(j, n + i)] = sf.a[(i, j)];
            }
            k[(n + i, n + i)] = -delta;
        }
        let lu = k.lu();
        if !lu.is_invertible() {
            return None;
        }
        Some(Self { lu, n, m })
    }

    fn solve_once(&self, sf: &StandardForm, sc: &Scaling, p: &[f64], q: &[f64], r: &CVec) -> (Vec<f64>, Vec<f64>, CVec) {
        let gtr = sf.gt_mul(&sc.d_inv(r));
        let mut rhs = nalgebra::DVector::<f64>::zeros(self.n + self.m);
        for i in 0..self.n {
            rhs[i] = p[i] + gtr[i];
        }
        for i in 0..self.m {
            rhs[self.n + i] = q[i];
        }
        let sol = self.lu.solve(&rhs).unwrap_or_else(|| nalgebra::DVector::zeros(self.n + self.m));
        let dx: Vec<f64> = sol.iter().take(self.n).copied().collect();
        let dy: Vec<f64> = sol.iter().skip(self.n).copied().collect();
        let gdx = sf.g_mul(&dx);
        let dz = sc.d_inv(&gdx.sub(r));
        (dx, dy, dz)
    }

    /// Solves [0 Aᵀ Gᵀ; A 0 0; G 0 −WᵀW] [dx; dy; dz] = [p; q; r] with one
    /// step of iterative refinement.
    fn solve(&self, sf: &StandardForm, sc: &Scaling, p: &[f64], q: &[f64], r: &CVec) -> (Vec<f64>, Vec<f64>, CVec) {
        let (mut dx, mut dy, mut dz) = self.solve_once(sf, sc, p, q, r);
        let aty = sf.at_mul(&dy);
        let gtz = sf.gt_mul(&dz);
        let e1: Vec<f64> = (0..self.n).map(|i| p[i] - aty[i] - gtz[i]).collect();
        let adx = sf.a_mul(&dx);
        let e2: Vec<f64> = (0..self.m).map(|i| q[i] - adx[i]).collect();
        let gdx = sf.g_mul(&dx);
        let e3 = r.sub(&gdx.sub(&sc.wtw(&dz)));
        let (cx, cy, cz) = self.solve_once(sf, sc, &e1, &e2, &e3);
        for (a, b) in dx.iter_mut().zip(&cx) {
            *a += b;
        }
        for (a, b) in dy.iter_mut().zip(&cy) {
            *a += b;
        }
        dz.axpy(1.0, &cz);
        (dx, dy, dz)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum IpmStatus {
    Converged,
    PrimalInfeasible,
    DualInfeasible,
    Stopped,
}

pub(crate) struct IpmResult {
    pub status: IpmStatus,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub z_lp: Vec<f64>,
    pub z_blk: Vec<DMatrix<f64>>,
    pub dcost: f64,
    pub pres: f64,
    pub dres: f64,
    pub relgap: f64,
    pub iterations: usize,
}

struct Iterate {
    x: Vec<f64>,
    y: Vec<f64>,
    z: CVec,
    tau: f64,
    pres: f64,
    dres: f64,
    relgap: f64,
    dcost: f64,
}

fn finish(sf: &StandardForm, it: &Iterate, status: IpmStatus, iterations: usize) -> IpmResult {
    let t = if status == IpmStatus::Converged || status == IpmStatus::Stopped { it.tau } else { 1.0 };
    let x: Vec<f64> = it.x.iter().map(|v| v / t).collect();
    let y: Vec<f64> = it.y.iter().map(|v| v / t).collect();
    let z = it.z.scaled(1.0 / t);
    let _ = sf;
    IpmResult {
        status,
        x,
        y,
        z_lp: z.lp,
        z_blk: z.blk,
        dcost: it.dcost,
        pres: it.pres,
        dres: it.dres,
        relgap: it.relgap,
        iterations,
    }
}

/// Runs the interior-point iteration.
pub(crate) fn solve(sf: &StandardForm, opts: SolverOptions) -> IpmResult {
    let tol = opts.tol;
    let n = sf.n;
    let nu = sf.degree() as f64;
    let h = sf.h_cvec();
    let e = sf.identity();
    let resx0 = vnorm(&sf.c).max(1.0);
    let resy0 = vnorm(&sf.b).max(1.0);
    let resz0 = h.norm().max(1.0);

    // Starting point from two least-squares problems with W = I.
    let id = Scaling::identity(sf);
    let Some(kkt0) = Kkt::factor(sf, &id) else {
        return stopped_zero(sf);
    };
    let zero_n = vec![0.0; n];
    let zero_m = vec![0.0; sf.b.len()];
    let (mut x, _, dz) = kkt0.solve(sf, &id, &zero_n, &sf.b, &h);
    let mut s = dz.scaled(-1.0);
    let neg_c: Vec<f64> = sf.c.iter().map(|v| -v).collect();
    let (_, mut y, mut z) = kkt0.solve(sf, &id, &neg_c, &zero_m, &sf.zero_cvec());
    for v in [&mut s, &mut z] {
        let t = -v.min_eig();
        if t.is_finite() && t >= -1e-8 * v.norm().max(1.0) {
            v.axpy(1.0 + t, &e);
        }
    }
    let mut tau = 1.0f64;
    let mut kappa = 1.0f64;

    let mut best: Option<Iterate> = None;
    let mut best_score = f64::INFINITY;
    let mut iterations = 0;
    for iter in 0..=opts.max_iter {
        iterations = iter;
        // residuals
        let aty = sf.at_mul(&y);
        let gtz = sf.gt_mul(&z);
        let rx: Vec<f64> = (0..n).map(|i| aty[i] + gtz[i] + sf.c[i] * tau).collect();
        let ax = sf.a_mul(&x);
        let ry: Vec<f64> = (0..sf.b.len()).map(|i| sf.b[i] * tau - ax[i]).collect();
        let gx = sf.g_mul(&x);
        let mut rz = s.clone();
        rz.axpy(1.0, &gx);
        rz.axpy(-tau, &h);
        let cx = vdot(&sf.c, &x);
        let by = vdot(&sf.b, &y);
        let hz = h.dot(&z);
        let rt = kappa + cx + by + hz;
        let gap = s.dot(&z);
        let mu = (gap + tau * kappa) / (nu + 1.0);

        let pcost = cx / tau;
        let dcost = -(by + hz) / tau;
        let pres = (vnorm(&ry) / resy0).max(rz.norm() / resz0) / tau;
        let dres = vnorm(&rx) / resx0 / tau;
        let relgap = (gap / (tau * tau)).max((pcost - dcost).abs()) / pcost.abs().max(dcost.abs()).max(1.0);
        let it = Iterate { x: x.clone(), y: y.clone(), z: z.clone(), tau, pres, dres, relgap, dcost };
        if pres <= tol && dres <= tol && relgap <= tol {
            return finish(sf, &it, IpmStatus::Converged, iter);
        }
        let score = pres.max(dres).max(relgap);
        if score < best_score {
            best_score = score;
            best = Some(Iterate { ..it });
        }
        // infeasibility certificates
        if hz + by < 0.0 {
            let gz_ay: Vec<f64> = (0..n).map(|i| aty[i] + gtz[i]).collect();
            let pinf = vnorm(&gz_ay) / resx0 / (-(hz + by));
            if pinf <= tol {
                let cert = Iterate { x: x.clone(), y: y.clone(), z: z.clone(), tau: 1.0, pres, dres, relgap, dcost };
                return finish(sf, &cert, IpmStatus::PrimalInfeasible, iter);
            }
        }
        if cx < 0.0 {
            let mut gxs = gx.clone();
            gxs.axpy(1.0, &s);
            let dinf = (vnorm(&ax) / resy0).max(gxs.norm() / resz0) / (-cx);
            if dinf <= tol {
                let cert = Iterate { x: x.clone(), y: y.clone(), z: z.clone(), tau: 1.0, pres, dres, relgap, dcost };
                return finish(sf, &cert, IpmStatus::DualInfeasible, iter);
            }
        }
        if iter == opts.max_iter {
            break;
        }

        let Some(sc) = Scaling::compute(&s, &z) else { break };
        let Some(kkt) = Kkt::factor(sf, &sc) else { break };
        let neg_c: Vec<f64> = sf.c.iter().map(|v| -v).collect();
        let (dx1, dy1, dz1) = kkt.solve(sf, &sc, &neg_c, &sf.b, &h);
        let denom_base = vdot(&sf.c, &dx1) + vdot(&sf.b, &dy1) + h.dot(&dz1);

        let lam_sq = sc.lam_sq();
        let newton = |eta: f64, ds_t: &CVec, dk_t: f64| {
            let mut r0 = rz.scaled(-eta);
            r0.axpy(-1.0, &sc.wt(&sc.lam_div(ds_t)));
            let p0: Vec<f64> = rx.iter().map(|v| -eta * v).collect();
            let q0: Vec<f64> = ry.iter().map(|v| eta * v).collect();
            let (dx0, dy0, dz0) = kkt.solve(sf, &sc, &p0, &q0, &r0);
            let num = -eta * rt - dk_t / tau - (vdot(&sf.c, &dx0) + vdot(&sf.b, &dy0) + h.dot(&dz0));
            let dtau = num / (denom_base - kappa / tau);
            let dx: Vec<f64> = dx0.iter().zip(&dx1).map(|(a, b)| a + dtau * b).collect();
            let dy: Vec<f64> = dy0.iter().zip(&dy1).map(|(a, b)| a + dtau * b).collect();
            let mut dz = dz0;
            dz.axpy(dtau, &dz1);
            let wdz = sc.w(&dz);
            let ds_scaled = sc.lam_div(ds_t).sub(&wdz);
            let ds = sc.wt(&ds_scaled);
            let dkappa = (dk_t - kappa * dtau) / tau;
            (dx, dy, dz, ds, dtau, dkappa, ds_scaled, wdz)
        };
        let step_len = |ds_scaled: &CVec, wdz: &CVec, dtau: f64, dkappa: f64| {
            let mut a = sc.max_step(ds_scaled).min(sc.max_step(wdz));
            if dtau < 0.0 {
                a = a.min(-tau / dtau);
            }
            if dkappa < 0.0 {
                a = a.min(-kappa / dkappa);
            }
            a
        };

        // predictor
        let ds_aff_t = lam_sq.scaled(-1.0);
        let (_, _, _, _, dtau_a, dkappa_a, dss_a, wdz_a) = newton(1.0, &ds_aff_t, -tau * kappa);
        let alpha_a = step_len(&dss_a, &wdz_a, dtau_a, dkappa_a).min(1.0);
        let sigma = (1.0 - alpha_a).powi(3);

        // corrector
        let mut ds_t = lam_sq.scaled(-1.0);
        ds_t.axpy(sigma * mu, &sc.identity_like(&e));
        ds_t.axpy(-1.0, &jordan(&dss_a, &wdz_a));
        let dk_t = -tau * kappa + sigma * mu - dtau_a * dkappa_a;
        let (dx, dy, dz, ds, dtau, dkappa, dss, wdz) = newton(1.0 - sigma, &ds_t, dk_t);
        let alpha = (0.99 * step_len(&dss, &wdz, dtau, dkappa)).min(1.0);
        if alpha.is_nan() || alpha <= 1e-12 {
            break;
        }
        for (a, b) in x.iter_mut().zip(&dx) {
            *a += alpha * b;
        }
        for (a, b) in y.iter_mut().zip(&dy) {
            *a += alpha * b;
        }
        s.axpy(alpha, &ds);
        z.axpy(alpha, &dz);
        tau += alpha * dtau;
        kappa += alpha * dkappa;
        if !(tau > 0.0 && kappa > 0.0) || !tau.is_finite() {
            break;
        }
    }
    match best {
        Some(it) => finish(sf, &it, IpmStatus::Stopped, iterations),
        None => stopped_zero(sf),
    }
}

impl Scaling {
    /// Identity element in scaled coordinates (same as the cone identity).
    fn identity_like(&self, e: &CVec) -> CVec {
        e.clone()
    }
}

fn stopped_zero(sf: &StandardForm) -> IpmResult {
    let z = sf.zero_cvec();
    IpmResult {
        status: IpmStatus::Stopped,
        x: vec![0.0; sf.n],
        y: vec![0.0; sf.b.len()],
        z_lp: z.lp,
        z_blk: z.blk,
        dcost: f64::NAN,
        pres: f64::INFINITY,
        dres: f64::INFINITY,
        relgap: f64::INFINITY,
        iterations: 0,
    }
}
