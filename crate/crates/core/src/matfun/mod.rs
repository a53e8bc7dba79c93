//! Diagonals and row sums of `f(A_ℓ)` for the masked adjacency matrix.
//!
//! Two functions are supported, both with `f(0) = 0`:
//!
//! * `exp(γt) − 1`: the diagonal gives subgraph centrality, the row sums
//!   total communicability;
//! * `1/(1 − γt) − 1`: the row sums give the Katz index.
//!
//! For a directed graph `A_ℓ` keeps the sampled columns only. An Arnoldi
//! decomposition `A_ℓ V = V H` reaching an invariant subspace gives the
//! eigenvectors `W = V S` of `A_ℓ` for its nonzero eigenvalues, and
//! `f(A_ℓ) = W f(Λ) Y_Jᵀ` restricted to the sampled columns. When `A₁₁` is
//! nonsingular `Y_Jᵀ = W_J⁻¹`; otherwise the left eigenvectors are recovered
//! from `H`. Ill-conditioned or defective cases fall back to the exact
//! core-block formula in [`direct`].
//!
//! For an undirected graph the arrow mask (entries in a sampled row or column)
//! is symmetric, and a Lanczos decomposition gives `f(A_ℓ) = V f(T) Vᵀ`.

pub mod direct;
pub mod krylov;
pub mod spectral;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::dense::{self, CMatrix, C64};
use crate::error::{Error, Result};
use crate::graph::SparseGraph;
use crate::sampling::{SampleKind, SampleSet};

pub use direct::direct_core_evaluation;
pub use krylov::{arnoldi, lanczos, KrylovDecomposition, KrylovOptions, LinearOperator};
pub use spectral::{estimate_spectral_radius, spectral_factorize, SpectralData};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionKind {
    ExpMinusOne,
    ResolventMinusOne,
}

/// `exp(γt) − 1` or `1/(1 − γt) − 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalarFunction {
    kind: FunctionKind,
    gamma: f64,
}

impl ScalarFunction {
    pub fn new(kind: FunctionKind, gamma: f64) -> Result<Self> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::Inadmissible(format!("gamma must be positive and finite, got {gamma}")));
        }
        Ok(Self { kind, gamma })
    }

    pub fn exp_minus_one(gamma: f64) -> Result<Self> {
        Self::new(FunctionKind::ExpMinusOne, gamma)
    }

    pub fn resolvent_minus_one(gamma: f64) -> Result<Self> {
        Self::new(FunctionKind::ResolventMinusOne, gamma)
    }

    pub fn kind(&self) -> FunctionKind {
        self.kind
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `f(z)` on complex arguments.
    pub fn eval(&self, z: C64) -> C64 {
        let w = z * self.gamma;
        match self.kind {
            FunctionKind::ExpMinusOne => {
                // e^{x+iy} − 1 without cancellation for small arguments.
                let (s, c) = w.im.sin_cos();
                let half = (0.5 * w.im).sin();
                C64::new(w.re.exp_m1() * c - 2.0 * half * half, w.re.exp() * s)
            }
            FunctionKind::ResolventMinusOne => w / (C64::new(1.0, 0.0) - w),
        }
    }

    /// `f(t)` on reals.
    pub fn eval_real(&self, t: f64) -> f64 {
        self.eval(C64::new(t, 0.0)).re
    }

    /// The resolvent needs `γ ρ̂ ≤ safety` with `ρ̂` the masked spectral radius
    /// estimate.
    pub fn check_admissible(&self, rho_hat: f64, tol: &Tolerances) -> Result<()> {
        if self.kind == FunctionKind::ResolventMinusOne && self.gamma * rho_hat > tol.katz_safety {
            return Err(Error::Inadmissible(format!(
                "resolvent requires γ·ρ̂ ≤ {}, got γ = {} and ρ̂ = {rho_hat}",
                tol.katz_safety, self.gamma
            )));
        }
        Ok(())
    }
}

/// Numerical thresholds for [`evaluate_masked_function`].
#[derive(Debug, Clone)]
pub struct Tolerances {
    pub krylov: KrylovOptions,
    /// Eigenvalues with `|λ| ≤ zero_eig_rel · max(1, ρ̂)` count as zero.
    pub zero_eig_rel: f64,
    /// Imaginary residues above `imag_rel · max(1, |result|)` are an error.
    pub imag_rel: f64,
    /// Condition estimates above this route to the direct core formula.
    pub cond_threshold: f64,
    /// Upper bound on `γ ρ̂` for the resolvent.
    pub katz_safety: f64,
    /// Largest `ℓ` for the dense core-block computation.
    pub direct_cap: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            krylov: KrylovOptions::default(),
            zero_eig_rel: 1e-10,
            imag_rel: 1e-8,
            cond_threshold: 1e8,
            katz_safety: 0.95,
            direct_cap: 5000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    KrylovSpectral,
    DirectCore,
    Lanczos,
}

/// Diagonal `[f(A_ℓ)]_ii` and row sums `[f(A_ℓ) 1]_i` for every node.
#[derive(Debug, Clone, Serialize)]
pub struct MatfunResult {
    pub diag: Vec<f64>,
    pub rowsum: Vec<f64>,
    pub method: Method,
    pub spectral_radius_estimate: f64,
    pub condition_estimate: f64,
    pub function: ScalarFunction,
    pub ell: usize,
    pub seed: u64,
    pub krylov_steps: usize,
    pub restarts: usize,
    /// Why the Krylov spectral route handed over to the direct formula.
    pub fallback_reason: Option<String>,
}

/// Which masked operator to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MaskMode {
    /// Arrow mask with Lanczos for undirected graphs, column mask with
    /// Arnoldi otherwise.
    #[default]
    Auto,
    Column,
    Arrow,
}

/// Evaluates `f` on the masked adjacency matrix.
pub fn evaluate_masked_function(
    g: &SparseGraph,
    mask: &SampleSet,
    f: &ScalarFunction,
    seed: u64,
    tol: &Tolerances,
) -> Result<MatfunResult> {
    evaluate_with_mode(g, mask, f, seed, tol, MaskMode::Auto)
}

pub fn evaluate_with_mode(
    g: &SparseGraph,
    mask: &SampleSet,
    f: &ScalarFunction,
    seed: u64,
    tol: &Tolerances,
    mode: MaskMode,
) -> Result<MatfunResult> {
    if mask.kind() != SampleKind::Column {
        return Err(Error::InvalidSample(
            "evaluate_masked_function needs a column sample; use transpose_measures for rows".into(),
        ));
    }
    if mask.is_empty() {
        return Err(Error::InvalidSample("empty sample".into()));
    }
    let arrow = match mode {
        MaskMode::Auto => !g.is_directed(),
        MaskMode::Column => false,
        MaskMode::Arrow => true,
    };
    if arrow {
        evaluate_symmetric(g, mask, f, seed, tol)
    } else {
        evaluate_nonsymmetric(g, mask, f, seed, tol)
    }
}

/// Measures of `f(Aᵀ)` from sampled rows of `A`, using `f(A) = f(Aᵀ)ᵀ`.
pub fn transpose_measures(g: &SparseGraph, rows: &SampleSet, f: &ScalarFunction, seed: u64, tol: &Tolerances) -> Result<MatfunResult> {
    if rows.kind() != SampleKind::Row {
        return Err(Error::InvalidSample("transpose_measures needs a row sample".into()));
    }
    evaluate_masked_function(&g.transpose(), &rows.as_kind(SampleKind::Column), f, seed, tol)
}

fn evaluate_symmetric(g: &SparseGraph, mask: &SampleSet, f: &ScalarFunction, seed: u64, tol: &Tolerances) -> Result<MatfunResult> {
    let d = lanczos(g, mask, seed, &tol.krylov)?;
    if !d.breakdown {
        return Err(Error::Krylov(format!("no invariant subspace within {} Lanczos steps", d.steps)));
    }
    let sd = spectral_factorize(&d)?;
    let rho = estimate_spectral_radius(&sd);
    f.check_admissible(rho, tol)?;
    let n = g.n();
    let m = d.steps;
    // Z = V Q; f(A_ℓ) = Z f(Θ) Zᵀ.
    let q = sd.eigenvectors.map(|z| z.re);
    let z = &d.basis * &q;
    let ftheta: Vec<f64> = sd.eigenvalues.iter().map(|t| f.eval_real(t.re)).collect();
    let col_sums: Vec<f64> = (0..m).map(|k| z.column(k).sum()).collect();
    let mut diag = vec![0.0; n];
    let mut rowsum = vec![0.0; n];
    for i in 0..n {
        let (mut dsum, mut rsum) = (0.0, 0.0);
        for k in 0..m {
            let zik = z[(i, k)];
            dsum += ftheta[k] * zik * zik;
            rsum += ftheta[k] * zik * col_sums[k];
        }
        diag[i] = dsum;
        rowsum[i] = rsum;
    }
    Ok(MatfunResult {
        diag,
        rowsum,
        method: Method::Lanczos,
        spectral_radius_estimate: rho,
        condition_estimate: sd.condition_estimate,
        function: *f,
        ell: mask.len(),
        seed,
        krylov_steps: d.steps,
        restarts: d.restarts,
        fallback_reason: None,
    })
}

fn evaluate_nonsymmetric(g: &SparseGraph, mask: &SampleSet, f: &ScalarFunction, seed: u64, tol: &Tolerances) -> Result<MatfunResult> {
    let d = arnoldi(g, mask, seed, &tol.krylov)?;
    if !d.breakdown {
        return Err(Error::Krylov(format!("no invariant subspace within {} Arnoldi steps", d.steps)));
    }
    let sd = match spectral_factorize(&d) {
        Ok(sd) => sd,
        Err(Error::Eigen(msg)) => {
            let mut r = direct_core_evaluation(g, mask, f, tol)?;
            r.seed = seed;
            r.krylov_steps = d.steps;
            r.restarts = d.restarts;
            r.fallback_reason = Some(msg);
            return Ok(r);
        }
        Err(e) => return Err(e),
    };
    let rho = estimate_spectral_radius(&sd);
    f.check_admissible(rho, tol)?;

    let fallback = |reason: String| -> Result<MatfunResult> {
        let mut r = direct_core_evaluation(g, mask, f, tol)?;
        r.spectral_radius_estimate = rho;
        r.condition_estimate = sd.condition_estimate;
        r.seed = seed;
        r.krylov_steps = d.steps;
        r.restarts = d.restarts;
        r.fallback_reason = Some(reason);
        Ok(r)
    };
    if sd.needs_fallback(tol.cond_threshold) {
        return fallback(format!("eigenvector condition estimate {:e}", sd.condition_estimate));
    }

    let ell = mask.len();
    let zero_tol = tol.zero_eig_rel * rho.max(1.0);
    let nonzero: Vec<usize> = (0..sd.len()).filter(|&k| sd.eigenvalues[k].norm() > zero_tol).collect();
    let zero: Vec<usize> = (0..sd.len()).filter(|&k| sd.eigenvalues[k].norm() <= zero_tol).collect();
    let lp = nonzero.len();
    if lp > ell {
        return fallback(format!("{lp} nonzero Ritz values for {ell} sampled columns"));
    }

    let n = g.n();
    let vc = dense::to_complex(&d.basis);
    let s_nz = sd.eigenvectors.select_columns(&nonzero);
    // W = V S: eigenvectors of A_ℓ for the nonzero eigenvalues.
    let w: CMatrix = &vc * &s_nz;
    let lambdas: Vec<C64> = nonzero.iter().map(|&k| sd.eigenvalues[k]).collect();

    // Y_Jᵀ: rows of the inverse eigenvector matrix restricted to the sampled
    // columns (ℓ' × ℓ, columns in selection order).
    let y: CMatrix = if lp == ell {
        let wj = CMatrix::from_fn(ell, ell, |p, k| w[(mask.indices()[p], k)]);
        let cond = dense::complex_condition(&wj);
        if !(cond <= tol.cond_threshold) {
            return fallback(format!("W_J condition estimate {cond:e}"));
        }
        match wj.lu().try_inverse() {
            Some(inv) => inv,
            None => return fallback("W_J is singular".into()),
        }
    } else {
        // Left eigenvectors: yᵀ = uᵀ Vᵀ A_ℓ / λ with uᵀ a row of S⁻¹. Rows of
        // S⁻¹ for zero eigenvalues must annihilate Vᵀ A_ℓ, otherwise the zero
        // eigenvalue of A_ℓ is defective and the spectral formula misses a
        // nilpotent part.
        let s_inv = match sd.eigenvectors.clone().lu().try_inverse() {
            Some(inv) => inv,
            None => return fallback("eigenvector matrix is singular".into()),
        };
        let mut b = nalgebra::DMatrix::<f64>::zeros(d.steps, ell);
        for (q, &j) in mask.indices().iter().enumerate() {
            for k in 0..d.steps {
                b[(k, q)] = g.column(j).iter().map(|&i| d.basis[(i, k)]).sum();
            }
        }
        let bc = dense::to_complex(&b);
        if !zero.is_empty() {
            let u0 = s_inv.select_rows(&zero);
            let leak = (&u0 * &bc).norm();
            let scale = u0.norm() * bc.norm();
            if leak > 1e-8 * scale.max(f64::MIN_POSITIVE) {
                return fallback(format!("defective zero eigenvalue (left null leakage {:e})", leak / scale));
            }
        }
        let mut y = s_inv.select_rows(&nonzero) * bc;
        for (r, lam) in lambdas.iter().enumerate() {
            let inv = C64::new(1.0, 0.0) / lam;
            y.row_mut(r).scale_mut_complex(inv);
        }
        y
    };

    let fl: Vec<C64> = lambdas.iter().map(|&l| f.eval(l)).collect();
    let mut diag_c = vec![C64::new(0.0, 0.0); n];
    for (p, &j) in mask.indices().iter().enumerate() {
        diag_c[j] = (0..lp).map(|k| w[(j, k)] * fl[k] * y[(k, p)]).sum();
    }
    let u: DVector<C64> = DVector::from_fn(lp, |k, _| fl[k] * y.row(k).sum());
    let rowsum_c = &w * u;

    let diag = realify(&diag_c, tol.imag_rel)?;
    let rowsum = realify(rowsum_c.as_slice(), tol.imag_rel)?;
    Ok(MatfunResult {
        diag,
        rowsum,
        method: Method::KrylovSpectral,
        spectral_radius_estimate: rho,
        condition_estimate: sd.condition_estimate,
        function: *f,
        ell,
        seed,
        krylov_steps: d.steps,
        restarts: d.restarts,
        fallback_reason: None,
    })
}

trait ScaleComplex {
    fn scale_mut_complex(&mut self, s: C64);
}

impl<R: nalgebra::Dim, C: nalgebra::Dim, S: nalgebra::StorageMut<C64, R, C>> ScaleComplex for nalgebra::Matrix<C64, R, C, S> {
    fn scale_mut_complex(&mut self, s: C64) {
        self.iter_mut().for_each(|z| *z *= s);
    }
}

fn realify(values: &[C64], imag_rel: f64) -> Result<Vec<f64>> {
    let magnitude = values.iter().map(|z| z.re.abs()).fold(1.0, f64::max);
    let residue = values.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let tol = imag_rel * magnitude;
    if residue > tol {
        return Err(Error::ImaginaryResidue { residue, tol });
    }
    Ok(values.iter().map(|z| z.re).collect())
}
