//! Arnoldi and Lanczos decompositions of masked adjacency operators.

use nalgebra::DMatrix;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::graph::SparseGraph;
use crate::rng::{self, Stream};
use crate::sampling::{SampleKind, SampleSet};

/// Matrix-free operator `x ↦ y`.
pub trait LinearOperator {
    fn order(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
    /// Upper bound on the rank, used to size the Krylov space.
    fn rank_bound(&self) -> usize {
        self.order()
    }
}

/// `A_ℓ`: the adjacency matrix with every column outside the mask zeroed.
pub struct ColumnMasked<'a> {
    graph: &'a SparseGraph,
    cols: Vec<usize>,
}

impl<'a> ColumnMasked<'a> {
    pub fn new(graph: &'a SparseGraph, mask: &SampleSet) -> Self {
        let mut cols = mask.indices().to_vec();
        cols.sort_unstable();
        Self { graph, cols }
    }
}

impl LinearOperator for ColumnMasked<'_> {
    fn order(&self) -> usize {
        self.graph.n()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        y.fill(0.0);
        self.graph.accumulate_columns(&self.cols, x, y);
    }

    fn rank_bound(&self) -> usize {
        self.cols.len()
    }
}

/// Symmetric arrow mask: keeps `a_ij` whenever `i` or `j` is sampled.
pub struct ArrowMasked<'a> {
    graph: &'a SparseGraph,
    cols: Vec<usize>,
    sampled: Vec<bool>,
}

impl<'a> ArrowMasked<'a> {
    pub fn new(graph: &'a SparseGraph, mask: &SampleSet) -> Self {
        let mut cols = mask.indices().to_vec();
        cols.sort_unstable();
        Self {
            graph,
            cols,
            sampled: mask.indicator(),
        }
    }
}

impl LinearOperator for ArrowMasked<'_> {
    fn order(&self) -> usize {
        self.graph.n()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        y.fill(0.0);
        // Sampled columns contribute to every row.
        self.graph.accumulate_columns(&self.cols, x, y);
        // Sampled rows additionally see the unsampled columns.
        for &i in &self.cols {
            y[i] += self.graph.row(i).iter().filter(|&&j| !self.sampled[j]).map(|&j| x[j]).sum::<f64>();
        }
    }

    fn rank_bound(&self) -> usize {
        2 * self.cols.len()
    }
}

/// The whole adjacency matrix.
pub struct FullOperator<'a>(pub &'a SparseGraph);

impl LinearOperator for FullOperator<'_> {
    fn order(&self) -> usize {
        self.0.n()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.0.row(i).iter().map(|&j| x[j]).sum();
        }
    }
}

/// `A V = V H` (or `A V = V T`) with orthonormal `V`.
#[derive(Debug, Clone)]
pub struct KrylovDecomposition {
    /// `n × m` orthonormal basis.
    pub basis: DMatrix<f64>,
    /// `m × m` upper Hessenberg (Arnoldi) or symmetric tridiagonal (Lanczos).
    /// After a restart the matrix is block upper triangular with a zero
    /// subdiagonal entry at the restart column.
    pub small_matrix: DMatrix<f64>,
    pub steps: usize,
    /// True when the basis spans an invariant subspace that contains the
    /// range of the operator.
    pub breakdown: bool,
    /// Norm of the last residual vector that was not appended.
    pub residual_norm: f64,
    /// Fresh start vectors appended after an early breakdown left part of the
    /// operator's range uncovered.
    pub restarts: usize,
    pub symmetric: bool,
}

impl KrylovDecomposition {
    /// `max |VᵀV − I|`.
    pub fn orthogonality_error(&self) -> f64 {
        let m = self.basis.ncols();
        let g = self.basis.transpose() * &self.basis - DMatrix::<f64>::identity(m, m);
        g.amax()
    }

    /// `‖A V − V H‖_F` evaluated with the operator.
    pub fn invariance_residual(&self, op: &dyn LinearOperator) -> f64 {
        let n = self.basis.nrows();
        let mut av = DMatrix::zeros(n, self.steps);
        let mut y = vec![0.0; n];
        for k in 0..self.steps {
            op.apply(self.basis.column(k).as_slice(), &mut y);
            av.column_mut(k).copy_from_slice(&y);
        }
        (av - &self.basis * &self.small_matrix).norm()
    }
}

/// Controls for the Krylov iteration.
#[derive(Debug, Clone)]
pub struct KrylovOptions {
    /// Maximum basis size; defaults to `min(n, rank_bound + 17)`. Every vector
    /// after the first lies in the range of the operator, so `rank_bound + 1`
    /// suffices in exact arithmetic. In floating point a few rounding
    /// directions can be appended once the range is covered; they leave the
    /// span invariant.
    pub max_steps: Option<usize>,
    /// Breakdown when the new vector's norm drops below this multiple of
    /// `max(‖A v_1‖, 1)`.
    pub breakdown_tol: f64,
    /// An early breakdown is accepted once a random probe `A x` lies in the
    /// basis span up to this relative residual.
    pub probe_tol: f64,
    /// Unlimited when `None`; the step cap still bounds the work.
    pub max_restarts: Option<usize>,
    /// Explicit start vector; a seeded Gaussian vector otherwise.
    pub start: Option<Vec<f64>>,
}

impl Default for KrylovOptions {
    fn default() -> Self {
        Self {
            max_steps: None,
            breakdown_tol: 1e-12,
            probe_tol: 1e-9,
            max_restarts: None,
            start: None,
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Two passes of modified Gram–Schmidt against `basis`, returning the
/// accumulated coefficients.
fn orthogonalize(basis: &[Vec<f64>], w: &mut [f64]) -> Vec<f64> {
    let mut coef = vec![0.0; basis.len()];
    for _ in 0..2 {
        for (c, v) in coef.iter_mut().zip(basis) {
            let h = dot(v, w);
            *c += h;
            for (wi, vi) in w.iter_mut().zip(v) {
                *wi -= h * vi;
            }
        }
    }
    coef
}

fn gaussian(n: usize, seed: u64, stream: Stream) -> Vec<f64> {
    let mut rng = rng::stream(seed, stream);
    (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
}

/// Arnoldi with full reorthogonalization on `op`.
///
/// Iteration stops at breakdown or after `max_steps` vectors. On an early
/// breakdown a random probe checks whether the basis already contains the
/// range of `op`; if not, the probe residual becomes a new start vector and
/// the iteration continues in the orthogonal complement.
pub fn krylov(op: &dyn LinearOperator, seed: u64, opts: &KrylovOptions, symmetric: bool) -> Result<KrylovDecomposition> {
    let n = op.order();
    let max_steps = opts.max_steps.unwrap_or_else(|| (op.rank_bound() + 17).min(n)).clamp(1, n);
    let max_restarts = opts.max_restarts.unwrap_or(usize::MAX);
    let mut v1 = match &opts.start {
        Some(s) if s.len() == n => s.clone(),
        Some(s) => return Err(Error::Dimension(format!("start vector of length {} for order {n}", s.len()))),
        None => gaussian(n, seed, Stream::KrylovStart),
    };
    let nv = norm(&v1);
    if !(nv > 0.0) {
        return Err(Error::Krylov("start vector is zero".into()));
    }
    v1.iter_mut().for_each(|x| *x /= nv);

    let mut basis: Vec<Vec<f64>> = vec![v1];
    let mut columns: Vec<Vec<f64>> = Vec::new();
    let mut threshold: Option<f64> = None;
    let mut restarts = 0;
    let mut probes = 0u64;
    let mut w = vec![0.0; n];
    let (breakdown, residual_norm) = loop {
        let k = basis.len() - 1;
        op.apply(&basis[k], &mut w);
        let thresh = *threshold.get_or_insert_with(|| opts.breakdown_tol * norm(&w).max(1.0));
        let mut h = orthogonalize(&basis, &mut w);
        let beta = norm(&w);
        if beta > thresh && basis.len() < max_steps {
            h.push(beta);
            columns.push(h);
            basis.push(w.iter().map(|x| x / beta).collect());
            continue;
        }
        columns.push(h);
        if beta > thresh {
            break (false, beta);
        }
        // Invariant subspace found; make sure it covers the whole range.
        let x = gaussian(n, seed.wrapping_add(probes), Stream::KrylovProbe);
        probes += 1;
        let mut z = vec![0.0; n];
        op.apply(&x, &mut z);
        let zn = norm(&z);
        orthogonalize(&basis, &mut z);
        let rn = norm(&z);
        if rn <= opts.probe_tol * zn.max(thresh) {
            break (true, beta);
        }
        if restarts >= max_restarts || basis.len() >= max_steps {
            return Err(Error::Krylov(format!(
                "basis of size {} does not cover the operator range after {restarts} restarts",
                basis.len()
            )));
        }
        restarts += 1;
        basis.push(z.iter().map(|x| x / rn).collect());
    };

    let m = basis.len();
    let mut small = DMatrix::zeros(m, m);
    for (k, col) in columns.iter().enumerate() {
        for (i, &h) in col.iter().enumerate().take(m) {
            small[(i, k)] = h;
        }
    }
    if symmetric {
        // Keep the tridiagonal part; entries further out are rounding noise.
        let mut t = DMatrix::zeros(m, m);
        for k in 0..m {
            t[(k, k)] = small[(k, k)];
            if k + 1 < m {
                let off = 0.5 * (small[(k, k + 1)] + small[(k + 1, k)]);
                t[(k, k + 1)] = off;
                t[(k + 1, k)] = off;
            }
        }
        small = t;
    }
    let basis = DMatrix::from_fn(n, m, |i, k| basis[k][i]);
    Ok(KrylovDecomposition {
        basis,
        small_matrix: small,
        steps: m,
        breakdown,
        residual_norm,
        restarts,
        symmetric,
    })
}

/// Arnoldi decomposition of the column-masked matrix `A_ℓ`.
pub fn arnoldi(g: &SparseGraph, mask: &SampleSet, seed: u64, opts: &KrylovOptions) -> Result<KrylovDecomposition> {
    check_mask(g, mask)?;
    krylov(&ColumnMasked::new(g, mask), seed, opts, false)
}

/// Lanczos decomposition of the arrow-masked symmetric matrix.
pub fn lanczos(g: &SparseGraph, mask: &SampleSet, seed: u64, opts: &KrylovOptions) -> Result<KrylovDecomposition> {
    check_mask(g, mask)?;
    if g.is_directed() && !g.is_symmetric() {
        return Err(Error::InvalidSample("Lanczos requires an undirected graph".into()));
    }
    krylov(&ArrowMasked::new(g, mask), seed, opts, true)
}

fn check_mask(g: &SparseGraph, mask: &SampleSet) -> Result<()> {
    if mask.kind() != SampleKind::Column {
        return Err(Error::InvalidSample("masked operators need a column sample".into()));
    }
    if mask.n() != g.n() {
        return Err(Error::Dimension(format!(
            "mask over {} indices for graph of order {}",
            mask.n(),
            g.n()
        )));
    }
    Ok(())
}
