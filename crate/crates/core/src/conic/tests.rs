use super::*;
use crate::matcore::{c, HermitianOperator};
use crate::random;

fn approx(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
}

#[test]
fn trace_above_diagonal() {
    let mut p = ConicProblem::new();
    let m = p.herm_var("M", 2, Cone::Psd);
    p.add_geq("dom", Expr::var(m, 2), HermitianOperator::diagonal(&[1.0, 2.0]));
    p.minimize(Expr::trace(m, 2));
    let sol = solve(&p, 1e-8).unwrap();
    assert_eq!(sol.status, Status::Optimal);
    approx(sol.objective, 3.0, 1e-6);
    assert!(verify_solution(&p, &sol, 1e-6).ok);
}

#[test]
fn spectral_norm_of_pauli_x() {
    let x = HermitianOperator::new(2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
    let mut p = ConicProblem::new();
    let l = p.scalar_var("lambda", Cone::Free);
    p.add_geq("dom", Expr::scalar_times(l, &HermitianOperator::identity(2)), x);
    p.minimize(Expr::scalar(l));
    let sol = solve(&p, 1e-8).unwrap();
    assert_eq!(sol.status, Status::Optimal);
    approx(sol.objective, 1.0, 1e-6);
}

#[test]
fn dominating_maximally_entangled_choi() {
    let mut v = vec![c(0.0, 0.0); 16];
    for i in [0usize, 3] {
        for j in [0usize, 3] {
            v[i * 4 + j] = c(1.0, 0.0);
        }
    }
    let gamma = HermitianOperator::new(4, v).unwrap();
    let mut p = ConicProblem::new();
    let m = p.herm_var("M", 4, Cone::Psd);
    p.add_geq("dom", Expr::var(m, 4), gamma);
    p.minimize(Expr::trace(m, 4));
    let sol = solve(&p, 1e-8).unwrap();
    assert_eq!(sol.status, Status::Optimal);
    approx(sol.objective, 2.0, 1e-6);
}

#[test]
fn embedding_doubles_spectrum() {
    // |+i⟩⟨+i| scaled to eigenvalues {2, 0}
    let h = HermitianOperator::new(2, vec![c(1.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(1.0, 0.0)]).unwrap();
    let e = embed_hermitian(&h);
    assert_eq!(e.dim(), 4);
    let mut ev = e.eigenvalues();
    ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
    for (got, want) in ev.iter().zip([2.0, 2.0, 0.0, 0.0]) {
        approx(*got, want, 1e-12);
    }
}

#[test]
fn perturbed_solution_is_flagged() {
    let mut p = ConicProblem::new();
    let m = p.herm_var("M", 2, Cone::Psd);
    p.add_geq("dom", Expr::var(m, 2), HermitianOperator::diagonal(&[1.0, 2.0]));
    p.minimize(Expr::trace(m, 2));
    let mut sol = solve(&p, 1e-8).unwrap();
    assert!(verify_solution(&p, &sol, 1e-6).ok);
    sol.values[0] = sol.values[0].add(&HermitianOperator::diagonal(&[-1e-3, 0.0])).unwrap();
    let rep = verify_solution(&p, &sol, 1e-6);
    assert!(!rep.ok);
    assert!(rep.primal_cone > 1e-5);
}

#[test]
fn small_lp_with_equality() {
    // min x + 2y  s.t. x + y = 1, x, y ≥ 0
    let mut p = ConicProblem::new();
    let x = p.scalar_var("x", Cone::Nonneg);
    let y = p.scalar_var("y", Cone::Nonneg);
    p.add_eq("sum", Expr::scalar(x).plus(Expr::scalar(y)).unwrap(), HermitianOperator::identity(1));
    p.minimize(Expr::scalar(x).plus(Expr::scalar(y).scaled(2.0)).unwrap());
    let sol = solve(&p, 1e-8).unwrap();
    assert_eq!(sol.status, Status::Optimal);
    approx(sol.objective, 1.0, 1e-7);
    approx(sol.scalar(x), 1.0, 1e-6);
    approx(sol.dual_objective, 1.0, 1e-6);
}

#[test]
fn maximize_overlap_with_trace_constraint() {
    // max tr(ρ H) over states equals λ_max(H)
    let mut rng = random::rng(11);
    let h = random::random_hermitian(&mut rng, 3);
    let mut p = ConicProblem::new();
    let r = p.herm_var("rho", 3, Cone::Psd);
    p.add_eq("unit", Expr::trace(r, 3), HermitianOperator::identity(1));
    p.maximize(Expr::inner(r, &h));
    let sol = solve(&p, 1e-8).unwrap();
    assert_eq!(sol.status, Status::Optimal);
    approx(sol.objective, h.max_eigenvalue(), 1e-6);
    approx(sol.dual_objective, h.max_eigenvalue(), 1e-6);
    assert!(verify_solution(&p, &sol, 1e-6).ok, "{:?}", verify_solution(&p, &sol, 1e-6));
}

#[test]
fn infeasible_equalities_detected() {
    let mut p = ConicProblem::new();
    let x = p.scalar_var("x", Cone::Nonneg);
    p.add_eq("a", Expr::scalar(x), HermitianOperator::identity(1));
    p.add_eq("b", Expr::scalar(x), HermitianOperator::identity(1).scale(2.0));
    p.minimize(Expr::scalar(x));
    assert_eq!(solve(&p, 1e-8).unwrap().status, Status::Infeasible);
}

#[test]
fn infeasible_cone_detected() {
    // x ≥ 0 and x ≤ −1
    let mut p = ConicProblem::new();
    let x = p.scalar_var("x", Cone::Nonneg);
    p.add_geq("neg", Expr::scalar(x).scaled(-1.0), HermitianOperator::identity(1));
    p.minimize(Expr::scalar(x));
    assert_eq!(solve(&p, 1e-8).unwrap().status, Status::Infeasible);
}

#[test]
fn unbounded_detected() {
    let mut p = ConicProblem::new();
    let x = p.scalar_var("x", Cone::Free);
    p.add_geq("low", Expr::scalar(x), HermitianOperator::identity(1).scale(-5.0));
    p.maximize(Expr::scalar(x));
    assert_eq!(solve(&p, 1e-8).unwrap().status, Status::Unbounded);
}

#[test]
fn random_complex_spectral_norms() {
    let mut rng = random::rng(2024);
    for trial in 0..50 {
        let d = 2 + trial % 3;
        let h = random::random_hermitian(&mut rng, d);
        let want = h.eigenvalues().iter().map(|x| x.abs()).fold(0.0, f64::max);
        // min λ  s.t.  λ1 ⪰ H, λ1 ⪰ −H
        let mut p = ConicProblem::new();
        let l = p.scalar_var("lambda", Cone::Free);
        let id = HermitianOperator::identity(d);
        p.add_geq("up", Expr::scalar_times(l, &id), h.clone());
        p.add_geq("down", Expr::scalar_times(l, &id), h.scale(-1.0));
        p.minimize(Expr::scalar(l));
        let sol = solve(&p, 1e-8).unwrap();
        assert_eq!(sol.status, Status::Optimal, "trial {trial}");
        approx(sol.objective, want, 1e-6 * want.max(1.0));
    }
}

#[test]
fn complex_free_variable_equality() {
    // min tr(M) over Hermitian M (free) with M ⪰ H: answer tr(H₊)
    let mut rng = random::rng(5);
    let h = random::random_hermitian(&mut rng, 3);
    let mut p = ConicProblem::new();
    let m = p.herm_var("M", 3, Cone::Free);
    let n = p.herm_var("N", 3, Cone::Psd);
    p.add_eq("split", Expr::var(m, 3).minus(Expr::var(n, 3)).unwrap(), h.clone());
    p.add_geq("pos", Expr::var(m, 3), HermitianOperator::zeros(3));
    p.minimize(Expr::trace(m, 3));
    let sol = solve(&p, 1e-8).unwrap();
    assert_eq!(sol.status, Status::Optimal);
    let want: f64 = h.eigenvalues().iter().filter(|x| **x > 0.0).sum();
    approx(sol.objective, want, 1e-6);
    let rep = verify_solution(&p, &sol, 1e-6);
    assert!(rep.ok, "{rep:?}");
}

#[test]
fn dump_lists_variables_and_rhs() {
    let mut p = ConicProblem::new();
    let m = p.herm_var("M", 2, Cone::Psd);
    p.add_geq("dom", Expr::var(m, 2), HermitianOperator::diagonal(&[1.0, 2.0]));
    p.minimize(Expr::trace(m, 2));
    let text = dump(&p);
    assert!(text.starts_with("var M 2 psd complex\nobjective minimize\n"));
    assert!(text.contains("constraint dom geq 2"));
    assert_eq!(text.lines().filter(|l| l.starts_with("rhs")).count(), 2);
}
