//! Reference values for validation at desk scale.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::dense;
use crate::error::{Error, Result};
use crate::graph::SparseGraph;
use crate::matfun::krylov::{krylov, FullOperator, KrylovOptions};
use crate::matfun::{FunctionKind, ScalarFunction};
use crate::perron::{run_power, PerronConfig, PerronResult};

pub type DenseMatrix = DMatrix<f64>;

/// Default largest order accepted by the dense routines.
pub const DENSE_CAP: usize = 4000;

/// `f(A)` for a dense matrix: `exp(γA) − I` by Padé scaling and squaring, or
/// `(I − γA)⁻¹ − I` by an LU solve.
pub fn dense_matfun(a: &DenseMatrix, f: &ScalarFunction) -> Result<DenseMatrix> {
    dense_matfun_capped(a, f, DENSE_CAP)
}

pub fn dense_matfun_capped(a: &DenseMatrix, f: &ScalarFunction, cap: usize) -> Result<DenseMatrix> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::Dimension(format!("{}x{} matrix is not square", n, a.ncols())));
    }
    if n > cap {
        return Err(Error::DenseCap { n, cap });
    }
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::Dimension("matrix has non-finite entries".into()));
    }
    let id = DenseMatrix::identity(n, n);
    let gamma = f.gamma();
    match f.kind() {
        FunctionKind::ExpMinusOne => Ok(dense::expm(&(a * gamma)) - id),
        FunctionKind::ResolventMinusOne => {
            let inv = dense::resolvent_solve(a, gamma, &id)?;
            check_resolvent_convergent(a, gamma, &inv)?;
            Ok(inv - id)
        }
    }
}

/// `γ ρ(A) < 1`. For a nonnegative `A` this holds exactly when `I − γA` is a
/// nonsingular M-matrix, i.e. its inverse is entrywise nonnegative; otherwise
/// the eigenvalues are computed.
fn check_resolvent_convergent(a: &DenseMatrix, gamma: f64, inv: &DenseMatrix) -> Result<()> {
    let rho = if a.iter().all(|&x| x >= 0.0) {
        let scale = inv.amax();
        if inv.iter().all(|&x| x >= -1e-12 * scale) {
            return Ok(());
        }
        f64::INFINITY
    } else {
        dense::spectral_radius(a)?
    };
    if gamma * rho < 1.0 {
        Ok(())
    } else {
        Err(Error::Inadmissible(format!("resolvent series diverges: γ = {gamma}, ρ(A) ≥ 1/γ")))
    }
}

/// Diagonal and row sums of a Krylov approximation of `f(A)`.
#[derive(Debug, Clone, Serialize)]
pub struct KrylovApproximation {
    pub diag: Vec<f64>,
    pub rowsum: Vec<f64>,
    /// Basis size actually used.
    pub steps: usize,
    /// The iteration stopped early on an exactly invariant subspace.
    pub breakdown: bool,
}

/// `diag(V_k f(H_k) V_kᵀ)` and `V_k f(H_k) V_kᵀ 1` after `k` Arnoldi steps on
/// the full matrix.
pub fn krylov_full_matfun(g: &SparseGraph, k: usize, f: &ScalarFunction, seed: u64) -> Result<KrylovApproximation> {
    let n = g.n();
    if k == 0 || k > n {
        return Err(Error::Dimension(format!("need 1 ≤ k ≤ n = {n}, got {k}")));
    }
    let opts = KrylovOptions {
        max_steps: Some(k),
        max_restarts: Some(0),
        probe_tol: f64::INFINITY,
        ..Default::default()
    };
    let d = krylov(&FullOperator(g), seed, &opts, false)?;
    let fh = dense_matfun_capped(&d.small_matrix, f, usize::MAX)?;
    let v = &d.basis;
    let vf = v * &fh;
    let diag = (0..n).map(|i| vf.row(i).dot(&v.row(i))).collect();
    let vt1: nalgebra::DVector<f64> = v.row_sum().transpose();
    let rowsum = (vf * vt1).as_slice().to_vec();
    Ok(KrylovApproximation {
        diag,
        rowsum,
        steps: d.steps,
        breakdown: d.breakdown,
    })
}

/// Left Perron vector of `A` by power iteration on `(A + I)ᵀ`.
///
/// The unit shift leaves the eigenvectors unchanged and makes the iteration
/// converge on periodic (e.g. bipartite) irreducible graphs. The reported
/// eigenvalue is the Rayleigh quotient for `Aᵀ`. `converged` is false unless
/// a second random start reaches the same vector.
pub fn dense_left_perron(g: &SparseGraph, tol: f64, max_iter: usize) -> Result<PerronResult> {
    let n = g.n();
    let op = |v: &[f64], w: &mut [f64]| {
        for (j, wj) in w.iter_mut().enumerate() {
            *wj = v[j] + g.column(j).iter().map(|&i| v[i]).sum::<f64>();
        }
    };
    let cfg = PerronConfig {
        tol,
        max_iter,
        ..Default::default()
    };
    let mut r = run_power(n, &op, &cfg)?;
    let atv = g.transpose_matvec(&r.vector)?;
    let lambda: f64 = r.vector.iter().zip(&atv).map(|(a, b)| a * b).sum();
    r.residual = atv.iter().zip(&r.vector).map(|(b, a)| (b - lambda * a).powi(2)).sum::<f64>().sqrt();
    r.eigenvalue_estimate = lambda.max(0.0);
    r.converged = r.converged && r.unique == Some(true);
    Ok(r)
}
