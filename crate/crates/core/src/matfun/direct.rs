//! Exact evaluation through the sampled core block.
//!
//! With the sampled columns ordered first, `A_ℓ = [A₁₁ 0; A₂₁ 0]`, so every
//! power `A_ℓ^k = A(:,J) A₁₁^{k−1} [I 0]` and
//! `f(A_ℓ)(:,J) = A(:,J) g(A₁₁)` with `g(t) = f(t)/t`. Only an `ℓ × ℓ` dense
//! problem is solved.

use nalgebra::DMatrix;

use super::{FunctionKind, MatfunResult, Method, ScalarFunction, Tolerances};
use crate::dense;
use crate::error::{Error, Result};
use crate::graph::SparseGraph;
use crate::sampling::{SampleKind, SampleSet};

/// `A₁₁ = A(J, J)` in selection order.
pub fn core_block(g: &SparseGraph, mask: &SampleSet) -> DMatrix<f64> {
    let pos = mask.positions();
    let ell = mask.len();
    let mut a11 = DMatrix::zeros(ell, ell);
    for (q, &j) in mask.indices().iter().enumerate() {
        for &i in g.column(j) {
            if let Some(p) = pos[i] {
                a11[(p, q)] = 1.0;
            }
        }
    }
    a11
}

/// `g(A₁₁)` for `g(t) = f(t)/t`.
pub fn g_of_core(a11: &DMatrix<f64>, f: &ScalarFunction) -> Result<DMatrix<f64>> {
    let ell = a11.nrows();
    let gamma = f.gamma();
    match f.kind() {
        FunctionKind::ExpMinusOne => Ok(dense::phi1(&(a11 * gamma)) * gamma),
        FunctionKind::ResolventMinusOne => {
            let id = DMatrix::<f64>::identity(ell, ell);
            Ok(dense::resolvent_solve(a11, gamma, &id)? * gamma)
        }
    }
}

/// Diagonal and row sums of `f(A_ℓ)` from the dense core block.
pub fn direct_core_evaluation(g: &SparseGraph, mask: &SampleSet, f: &ScalarFunction, tol: &Tolerances) -> Result<MatfunResult> {
    if mask.kind() != SampleKind::Column {
        return Err(Error::InvalidSample("direct core evaluation needs a column sample".into()));
    }
    if mask.n() != g.n() {
        return Err(Error::Dimension(format!(
            "mask over {} indices for graph of order {}",
            mask.n(),
            g.n()
        )));
    }
    let ell = mask.len();
    if ell > tol.direct_cap {
        return Err(Error::DenseCap {
            n: ell,
            cap: tol.direct_cap,
        });
    }
    let n = g.n();
    let a11 = core_block(g, mask);
    // Nonzero eigenvalues of A_ℓ are those of A₁₁.
    let rho = dense::spectral_radius(&a11)?;
    f.check_admissible(rho, tol)?;
    let gm = g_of_core(&a11, f)?;

    let mut diag = vec![0.0; n];
    let fa11 = &a11 * &gm;
    for (p, &j) in mask.indices().iter().enumerate() {
        diag[j] = fa11[(p, p)];
    }
    let s: Vec<f64> = gm.row_iter().map(|r| r.sum()).collect();
    let mut rowsum = vec![0.0; n];
    for (q, &j) in mask.indices().iter().enumerate() {
        for &i in g.column(j) {
            rowsum[i] += s[q];
        }
    }
    Ok(MatfunResult {
        diag,
        rowsum,
        method: Method::DirectCore,
        spectral_radius_estimate: rho,
        condition_estimate: 1.0,
        function: *f,
        ell,
        seed: mask.seed(),
        krylov_steps: 0,
        restarts: 0,
        fallback_reason: None,
    })
}
