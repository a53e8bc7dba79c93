//! Small dense kernels shared by the matrix-function routes and the oracle.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// `exp(M)` by scaling and squaring with a Padé approximant of degree up to 13.
pub fn expm(m: &DMatrix<f64>) -> DMatrix<f64> {
    if m.nrows() == 0 {
        return m.clone();
    }
    m.exp()
}

/// `φ₁(M) = Σ_{k≥0} M^k / (k+1)!`, read off the exponential of the augmented
/// matrix `[[M, I], [0, 0]]`.
pub fn phi1(m: &DMatrix<f64>) -> DMatrix<f64> {
    let k = m.nrows();
    if k == 0 {
        return m.clone();
    }
    let mut aug = DMatrix::zeros(2 * k, 2 * k);
    aug.view_mut((0, 0), (k, k)).copy_from(m);
    aug.view_mut((0, k), (k, k)).fill_with_identity();
    let e = expm(&aug);
    e.view((0, k), (k, k)).into_owned()
}

/// 1-norm condition number estimate from an explicit inverse; only used on
/// small matrices.
pub fn cond1(m: &DMatrix<f64>, inv: &DMatrix<f64>) -> f64 {
    one_norm(m) * one_norm(inv)
}

pub fn one_norm(m: &DMatrix<f64>) -> f64 {
    m.column_iter().map(|c| c.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// Solves `(I − γM) X = B`, failing when the system is singular to working
/// precision.
pub fn resolvent_solve(m: &DMatrix<f64>, gamma: f64, rhs: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let k = m.nrows();
    let shifted = DMatrix::<f64>::identity(k, k) - m * gamma;
    let lu = shifted.clone().lu();
    let inv = lu.try_inverse().ok_or_else(|| Error::Singular("I − γA is singular".into()))?;
    let cond = cond1(&shifted, &inv);
    if !cond.is_finite() || cond > 1e14 {
        return Err(Error::Singular(format!("I − γA is numerically singular (cond ≈ {cond:e})")));
    }
    Ok(inv * rhs)
}

/// Eigenvalues from a real Schur form. Francis iterations can stall when
/// several eigenvalues share a modulus (e.g. `±λ`); a diagonal shift breaks
/// the tie and is subtracted afterwards.
pub fn eigenvalues(m: &DMatrix<f64>) -> Result<Vec<C64>> {
    let k = m.nrows();
    if k == 0 {
        return Ok(Vec::new());
    }
    let scale = one_norm(m).max(1.0);
    for sigma in [0.0, 0.3712 * scale, -0.2817 * scale] {
        let shifted = m + DMatrix::<f64>::identity(k, k) * sigma;
        if let Some(schur) = shifted.try_schur(f64::EPSILON, 1000 * k.max(10)) {
            return Ok(schur.complex_eigenvalues().iter().map(|z| z - sigma).collect());
        }
    }
    Err(Error::Eigen("Schur iteration did not converge".into()))
}

pub fn spectral_radius(m: &DMatrix<f64>) -> Result<f64> {
    Ok(eigenvalues(m)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// Ratio of extreme singular values; infinite for singular input.
pub fn complex_condition(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 1.0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.max();
    let min = sv.min();
    if min <= 0.0 || !min.is_finite() {
        f64::INFINITY
    } else {
        max / min
    }
}

pub fn to_complex(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| C64::new(x, 0.0))
}

/// Eigenvector of `m` for the eigenvalue `lambda` by shifted inverse
/// iteration, normalized to unit 2-norm.
pub fn inverse_iteration(m: &CMatrix, lambda: C64, scale: f64) -> Option<DVector<C64>> {
    let k = m.nrows();
    let shift = lambda + C64::new(1e-10 * scale.max(1.0), 0.0);
    let mut shifted = m.clone();
    for i in 0..k {
        shifted[(i, i)] -= shift;
    }
    let lu = shifted.lu();
    let mut x = DVector::from_fn(k, |i, _| {
        C64::new(1.0 + 0.1 * ((i + 1) as f64).sin(), 0.05 * ((i + 2) as f64).cos())
    });
    for _ in 0..3 {
        x = lu.solve(&x)?;
        let norm = x.norm();
        if !norm.is_finite() || norm == 0.0 {
            return None;
        }
        x /= C64::new(norm, 0.0);
    }
    // Fix the phase so the largest component is real and positive.
    let (imax, _) = x
        .iter()
        .enumerate()
        .fold((0, 0.0), |acc, (i, z)| if z.norm() > acc.1 { (i, z.norm()) } else { acc });
    let phase = x[imax] / C64::new(x[imax].norm(), 0.0);
    Some(x / phase)
}
