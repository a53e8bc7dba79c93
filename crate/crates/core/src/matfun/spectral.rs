//! Eigen-decomposition of the small Krylov matrix.

use nalgebra::{DMatrix, DVector};

use super::krylov::KrylovDecomposition;
use crate::dense::{self, CMatrix, C64};
use crate::error::{Error, Result};

/// Eigenpairs of `H` (or `T`) ordered by nonincreasing modulus.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub eigenvalues: Vec<C64>,
    /// Column `k` is the unit eigenvector for `eigenvalues[k]`.
    pub eigenvectors: CMatrix,
    /// `σ_max(S) / σ_min(S)`; exactly 1 for the symmetric case.
    pub condition_estimate: f64,
}

impl SpectralData {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// True when the eigenvector matrix is too ill-conditioned for the
    /// spectral formula.
    pub fn needs_fallback(&self, cond_threshold: f64) -> bool {
        !(self.condition_estimate <= cond_threshold)
    }
}

/// Ordering key: modulus (quantized so that rounding-level differences tie),
/// then real part, then imaginary part, all descending.
fn order(eigenvalues: &[C64]) -> Vec<usize> {
    let scale = eigenvalues.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let key = |z: &C64| ((z.norm() / scale * 1e10).round() as i64, z.re, z.im);
    let mut idx: Vec<usize> = (0..eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| {
        let (ka, kb) = (key(&eigenvalues[a]), key(&eigenvalues[b]));
        kb.0.cmp(&ka.0)
            .then(kb.1.total_cmp(&ka.1))
            .then(kb.2.total_cmp(&ka.2))
            .then(a.cmp(&b))
    });
    idx
}

/// Spectral factorization `H = S Λ S⁻¹` of a small real matrix.
pub fn factorize_matrix(h: &DMatrix<f64>, symmetric: bool) -> Result<SpectralData> {
    let m = h.nrows();
    if m == 0 {
        return Err(Error::Eigen("empty matrix".into()));
    }
    if symmetric {
        let eig = h
            .clone()
            .try_symmetric_eigen(f64::EPSILON, 10_000)
            .ok_or_else(|| Error::Eigen("symmetric QR did not converge".into()))?;
        let vals: Vec<C64> = eig.eigenvalues.iter().map(|&x| C64::new(x, 0.0)).collect();
        let idx = order(&vals);
        let eigenvalues = idx.iter().map(|&k| vals[k]).collect();
        let eigenvectors = CMatrix::from_fn(m, m, |i, c| C64::new(eig.eigenvectors[(i, idx[c])], 0.0));
        return Ok(SpectralData {
            eigenvalues,
            eigenvectors,
            condition_estimate: 1.0,
        });
    }

    let vals = dense::eigenvalues(h)?;
    let idx = order(&vals);
    let eigenvalues: Vec<C64> = idx.iter().map(|&k| vals[k]).collect();
    let hc = dense::to_complex(h);
    let scale = h.norm();
    let mut eigenvectors = CMatrix::zeros(m, m);
    for (c, &lambda) in eigenvalues.iter().enumerate() {
        let v: DVector<C64> = dense::inverse_iteration(&hc, lambda, scale)
            .ok_or_else(|| Error::Eigen(format!("inverse iteration failed for eigenvalue {lambda}")))?;
        eigenvectors.set_column(c, &v);
    }
    let condition_estimate = dense::complex_condition(&eigenvectors);
    Ok(SpectralData {
        eigenvalues,
        eigenvectors,
        condition_estimate,
    })
}

/// Spectral factorization of the small matrix of a Krylov decomposition.
pub fn spectral_factorize(d: &KrylovDecomposition) -> Result<SpectralData> {
    if !d.breakdown {
        return Err(Error::Krylov("spectral factorization needs an invariant subspace".into()));
    }
    factorize_matrix(&d.small_matrix, d.symmetric)
}

/// `ρ̂ = |λ_1|`.
pub fn estimate_spectral_radius(sd: &SpectralData) -> f64 {
    sd.eigenvalues.first().map_or(0.0, |z| z.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn swap_matrix_orders_one_then_minus_one() {
        let h = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        for sym in [false, true] {
            let sd = factorize_matrix(&h, sym).unwrap();
            assert!((sd.eigenvalues[0] - C64::new(1.0, 0.0)).norm() < 1e-12);
            assert!((sd.eigenvalues[1] - C64::new(-1.0, 0.0)).norm() < 1e-12);
            assert!((sd.condition_estimate - 1.0).abs() < 1e-8);
            assert!((estimate_spectral_radius(&sd) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn jordan_block_flags_fallback() {
        let h = DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 1.0, 0.0]);
        let sd = factorize_matrix(&h, false).unwrap();
        assert!(sd.condition_estimate > 1e8, "{}", sd.condition_estimate);
        assert!(sd.needs_fallback(1e8));
    }

    #[test]
    fn eigenpairs_reconstruct_and_conjugates_pair_up() {
        // Rotation block plus a real eigenvalue.
        let h = DMatrix::from_row_slice(3, 3, &[0.0, -2.0, 1.0, 2.0, 0.0, 0.5, 0.0, 0.0, 0.5]);
        let sd = factorize_matrix(&h, false).unwrap();
        let moduli: Vec<f64> = sd.eigenvalues.iter().map(|z| z.norm()).collect();
        assert!(moduli.windows(2).all(|w| w[0] >= w[1] - 1e-12));
        assert!((sd.eigenvalues[0].conj() - sd.eigenvalues[1]).norm() < 1e-12);
        let hc = dense::to_complex(&h);
        for k in 0..3 {
            let v = sd.eigenvectors.column(k);
            assert!((&hc * v - v * sd.eigenvalues[k]).norm() < 1e-10);
        }
    }
}
