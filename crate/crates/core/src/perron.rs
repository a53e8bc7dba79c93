//! Left Perron vector from sampled columns and rows.
//!
//! The power method runs on `M_ℓ = A(:,J) A(I,:)`, which stands in for `A²`.
//! `M_ℓ` is never formed: each step applies `A(:,J)ᵀ` and then `A(I,:)ᵀ` as
//! sparse products. An optional rank-one shift `E = ε 1 1ᵀ` restores
//! irreducibility.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::SparseGraph;
use crate::rng::{self, Stream};
use crate::sampling::{SampleKind, SampleSet};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PerronConfig {
    pub epsilon: f64,
    /// Stop when successive normalized iterates differ by at most this in 2-norm.
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    /// Start from a seeded positive random vector instead of `1/√n`.
    pub random_start: bool,
    /// Rerun from a second, random start and compare. A mismatch means the
    /// dominant eigenvalue is not simple and the answer depends on the start.
    pub uniqueness_check: bool,
}

impl Default for PerronConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.0,
            tol: 1e-10,
            max_iter: 100_000,
            seed: 0,
            random_start: false,
            uniqueness_check: true,
        }
    }
}

impl PerronConfig {
    fn validate(&self) -> Result<()> {
        if !(self.epsilon >= 0.0) || !(self.tol > 0.0) || self.max_iter == 0 {
            return Err(Error::Inadmissible("need epsilon ≥ 0, tol > 0 and max_iter ≥ 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PerronResult {
    /// Unit 2-norm, entrywise nonnegative.
    pub vector: Vec<f64>,
    pub eigenvalue_estimate: f64,
    pub iterations: usize,
    pub converged: bool,
    /// `‖Bᵀv − λv‖₂` for the iterated operator `B`.
    pub residual: f64,
    /// Start vectors discarded because the iterate collapsed to zero.
    pub restarts: usize,
    /// `Some(false)` when a second start converged elsewhere or not at all.
    pub unique: Option<bool>,
    pub warnings: Vec<String>,
}

pub(crate) struct PowerOutcome {
    pub vector: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Normalizes and flips the sign so the entry of largest magnitude is
/// positive. Returns false for a zero vector.
fn normalize(v: &mut [f64]) -> bool {
    let nv = norm(v);
    if !(nv > 0.0) || !nv.is_finite() {
        return false;
    }
    let big = v.iter().copied().fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
    let s = if big < 0.0 { -1.0 / nv } else { 1.0 / nv };
    v.iter_mut().for_each(|x| *x *= s);
    true
}

/// Plain power iteration `v ← op(v)/‖op(v)‖`. `None` when an iterate
/// vanishes.
pub(crate) fn power_iterate(op: &dyn Fn(&[f64], &mut [f64]), mut v: Vec<f64>, tol: f64, max_iter: usize) -> Option<PowerOutcome> {
    if !normalize(&mut v) {
        return None;
    }
    let mut w = vec![0.0; v.len()];
    for it in 1..=max_iter {
        op(&v, &mut w);
        if !normalize(&mut w) {
            return None;
        }
        let diff = v.iter().zip(&w).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        std::mem::swap(&mut v, &mut w);
        if diff <= tol {
            return Some(PowerOutcome {
                vector: v,
                iterations: it,
                converged: true,
            });
        }
    }
    Some(PowerOutcome {
        vector: v,
        iterations: max_iter,
        converged: false,
    })
}

pub(crate) fn positive_random(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = rng::stream(seed, Stream::Perron);
    (0..n).map(|_| rng.random_range(0.5..1.5)).collect()
}

pub(crate) fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let (na, nb) = (norm(a), norm(b));
    if na > 0.0 && nb > 0.0 {
        dot / (na * nb)
    } else {
        0.0
    }
}

/// Runs the power method on `op` with the start-vector policy, collapse
/// restarts and uniqueness check shared by every Perron routine.
pub(crate) fn run_power(n: usize, op: &dyn Fn(&[f64], &mut [f64]), cfg: &PerronConfig) -> Result<PerronResult> {
    cfg.validate()?;
    const MAX_RESTARTS: usize = 3;
    let mut restarts = 0;
    let outcome = loop {
        let start = if cfg.random_start || restarts > 0 {
            positive_random(n, cfg.seed.wrapping_add(restarts as u64))
        } else {
            vec![1.0; n]
        };
        match power_iterate(op, start, cfg.tol, cfg.max_iter) {
            Some(o) => break o,
            None if restarts < MAX_RESTARTS => restarts += 1,
            None => return Err(Error::RankDeficientProduct),
        }
    };
    let mut v = outcome.vector;
    // Nonnegative operators keep nonnegative iterates; clear rounding dust.
    v.iter_mut().for_each(|x| *x = x.max(0.0));
    normalize(&mut v);

    let mut bv = vec![0.0; n];
    op(&v, &mut bv);
    let lambda: f64 = v.iter().zip(&bv).map(|(a, b)| a * b).sum();
    let residual = bv.iter().zip(&v).map(|(b, a)| (b - lambda * a).powi(2)).sum::<f64>().sqrt();

    let mut warnings = Vec::new();
    if !outcome.converged {
        warnings.push(format!("power method did not converge within {} iterations", cfg.max_iter));
    }
    let unique = if cfg.uniqueness_check {
        let second = power_iterate(op, positive_random(n, cfg.seed ^ 0x9e37_79b9_7f4a_7c15), cfg.tol, cfg.max_iter);
        let agrees = second.is_some_and(|s| s.converged && cosine(&s.vector, &v) >= 1.0 - 1e-8);
        if !agrees {
            warnings.push("dominant eigenvalue is not simple: the power-method limit depends on the start vector".into());
        }
        Some(agrees)
    } else {
        None
    };
    Ok(PerronResult {
        vector: v,
        eigenvalue_estimate: lambda.max(0.0),
        iterations: outcome.iterations,
        converged: outcome.converged,
        residual,
        restarts,
        unique,
        warnings,
    })
}

fn check_set(g: &SparseGraph, s: &SampleSet, kind: SampleKind) -> Result<()> {
    if s.kind() != kind {
        return Err(Error::InvalidSample(format!("expected a {kind:?} sample")));
    }
    if s.n() != g.n() {
        return Err(Error::Dimension(format!(
            "sample over {} indices for graph of order {}",
            s.n(),
            g.n()
        )));
    }
    Ok(())
}

/// `w = A(I,:)ᵀ A(:,J)ᵀ v + ε (1ᵀv) 1`: the transpose of `M_ℓ + E` applied to
/// `v`. The `m`-th sampled column pairs with the `m`-th sampled row.
fn apply_product_transpose(g: &SparseGraph, cols: &[usize], rows: &[usize], epsilon: f64, v: &[f64], w: &mut [f64]) {
    w.fill(0.0);
    for (&j, &i) in cols.iter().zip(rows) {
        let t: f64 = g.column(j).iter().map(|&k| v[k]).sum();
        if t != 0.0 {
            for &c in g.row(i) {
                w[c] += t;
            }
        }
    }
    if epsilon > 0.0 {
        let s = epsilon * v.iter().sum::<f64>();
        w.iter_mut().for_each(|x| *x += s);
    }
}

/// Approximate left Perron vector of `A` from `ℓ` sampled columns `J` and
/// `ℓ` sampled rows `I`.
pub fn left_perron(g: &SparseGraph, cols: &SampleSet, rows: &SampleSet, cfg: &PerronConfig) -> Result<PerronResult> {
    check_set(g, cols, SampleKind::Column)?;
    check_set(g, rows, SampleKind::Row)?;
    if cols.len() != rows.len() {
        return Err(Error::InvalidSample(format!(
            "{} columns but {} rows; the product pairs them one to one",
            cols.len(),
            rows.len()
        )));
    }
    let op = |v: &[f64], w: &mut [f64]| apply_product_transpose(g, cols.indices(), rows.indices(), cfg.epsilon, v, w);
    run_power(g.n(), &op, cfg)
}

/// Perron vector of `A(:,J) A(:,J)ᵀ` for an undirected graph.
pub fn symmetric_perron(g: &SparseGraph, cols: &SampleSet, cfg: &PerronConfig) -> Result<PerronResult> {
    check_set(g, cols, SampleKind::Column)?;
    if !g.is_symmetric() {
        return Err(Error::InvalidSample("symmetric_perron requires an undirected graph".into()));
    }
    // For symmetric A, A(J,:) = A(:,J)ᵀ, so the row sample equals the column sample.
    let op = |v: &[f64], w: &mut [f64]| apply_product_transpose(g, cols.indices(), cols.indices(), cfg.epsilon, v, w);
    run_power(g.n(), &op, cfg)
}
