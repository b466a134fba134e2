//! Local minimization for the heuristic searches: L-BFGS with a More-Thuente
//! line search (from `argmin`) on central-difference gradients.

use std::cell::RefCell;

use argmin::core::{CostFunction, Error as ArgminError, Executor, Gradient, State};
use argmin::solver::linesearch::MoreThuenteLineSearch;
use argmin::solver::quasinewton::LBFGS;

use crate::random::{self, Rng};

#[derive(Clone, Debug)]
pub(crate) struct LocalMin {
    pub value: f64,
    pub converged: bool,
}

struct Problem<'a, F: Fn(&[f64]) -> f64> {
    f: &'a F,
    best: &'a RefCell<(f64, Vec<f64>)>,
}

impl<F: Fn(&[f64]) -> f64> Problem<'_, F> {
    fn eval(&self, x: &[f64]) -> f64 {
        let v = (self.f)(x);
        let mut b = self.best.borrow_mut();
        if v < b.0 {
            *b = (v, x.to_vec());
        }
        v
    }
}

impl<F: Fn(&[f64]) -> f64> CostFunction for Problem<'_, F> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, x: &Self::Param) -> Result<f64, ArgminError> {
        Ok(self.eval(x))
    }
}

impl<F: Fn(&[f64]) -> f64> Gradient for Problem<'_, F> {
    type Param = Vec<f64>;
    type Gradient = Vec<f64>;

    fn gradient(&self, x: &Self::Param) -> Result<Vec<f64>, ArgminError> {
        let h = 1e-6;
        let mut y = x.clone();
        let mut g = vec![0.0; x.len()];
        for i in 0..x.len() {
            let xi = x[i];
            y[i] = xi + h;
            let fp = self.eval(&y);
            y[i] = xi - h;
            let fm = self.eval(&y);
            y[i] = xi;
            g[i] = (fp - fm) / (2.0 * h);
        }
        Ok(g)
    }
}

/// Minimizes `f` from `x0`; returns the best point evaluated.
pub(crate) fn minimize<F: Fn(&[f64]) -> f64>(f: &F, x0: Vec<f64>, max_iter: u64) -> LocalMin {
    let f0 = f(&x0);
    let best = RefCell::new((f0, x0.clone()));
    let problem = Problem { f, best: &best };
    let ls = MoreThuenteLineSearch::new();
    let solver = LBFGS::new(ls, 8).with_tolerance_grad(1e-9).and_then(|s| s.with_tolerance_cost(1e-13));
    // a line-search breakdown still leaves the best point seen so far
    let converged = match solver {
        Ok(solver) => match Executor::new(problem, solver).configure(|s| s.param(x0).max_iters(max_iter)).run() {
            Ok(r) => r.state.get_iter() < max_iter,
            Err(_) => false,
        },
        Err(_) => false,
    };
    LocalMin { value: best.into_inner().0, converged }
}

/// Best of `starts` local minimizations from random Gaussian starting points,
/// seeded per start.
pub(crate) fn multi_start<F: Fn(&[f64]) -> f64>(f: &F, dim: usize, starts: usize, seed: u64, max_iter: u64) -> (LocalMin, usize) {
    let mut best: Option<LocalMin> = None;
    let mut converged = 0;
    for s in 0..starts {
        let mut rng: Rng = random::rng(seed.wrapping_mul(1_000_003).wrapping_add(s as u64));
        let x0: Vec<f64> = (0..dim).map(|_| random::complex_gaussian(&mut rng).re * std::f64::consts::SQRT_2).collect();
        let r = minimize(f, x0, max_iter);
        if r.converged {
            converged += 1;
        }
        if best.as_ref().is_none_or(|b| r.value < b.value) {
            best = Some(r);
        }
    }
    (best.expect("at least one start"), converged)
}
