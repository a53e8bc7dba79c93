//! Column and row sampling.
//!
//! The guided sampler picks a first nonzero column uniformly at random. After
//! `k` picks it keeps `w = c_1 + ... + c_k`, the sum of the chosen columns, so
//! `w_i` counts the edges from node `i` into the chosen set. The next column
//! index is drawn with probability `w_i / Σ w`; a draw that hits an already
//! chosen index or a zero column is discarded and repeated.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::SparseGraph;
use crate::rng::{self, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleKind {
    Column,
    Row,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Guided,
    Random,
    /// Indices supplied by the caller.
    Explicit,
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "guided" => Ok(Self::Guided),
            "random" => Ok(Self::Random),
            "explicit" => Ok(Self::Explicit),
            other => Err(format!("unknown strategy {other:?} (expected guided or random)")),
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Guided => "guided",
            Self::Random => "random",
            Self::Explicit => "explicit",
        })
    }
}

/// Ordered set of distinct sampled indices. Selection order is preserved and
/// defines the leading block of the implicit permutation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSet {
    kind: SampleKind,
    strategy: Strategy,
    seed: u64,
    n: usize,
    indices: Vec<usize>,
    /// Guided steps that fell back to a uniform draw because no eligible index
    /// had positive weight.
    #[serde(default)]
    fallback_draws: usize,
}

impl SampleSet {
    pub fn from_indices(kind: SampleKind, n: usize, indices: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; n];
        for &i in &indices {
            if i >= n {
                return Err(Error::InvalidSample(format!("index {i} outside 0..{n}")));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidSample(format!("index {i} listed twice")));
            }
        }
        Ok(Self {
            kind,
            strategy: Strategy::Explicit,
            seed: 0,
            n,
            indices,
            fallback_draws: 0,
        })
    }

    /// Every index `0..n`, in order.
    pub fn all(kind: SampleKind, n: usize) -> Self {
        Self {
            kind,
            strategy: Strategy::Explicit,
            seed: 0,
            n,
            indices: (0..n).collect(),
            fallback_draws: 0,
        }
    }

    pub fn kind(&self) -> SampleKind {
        self.kind
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn fallback_draws(&self) -> usize {
        self.fallback_draws
    }

    /// Same indices relabeled as the other kind, e.g. rows of `A` used as
    /// columns of `Aᵀ`.
    pub fn as_kind(&self, kind: SampleKind) -> Self {
        Self { kind, ..self.clone() }
    }

    /// Membership indicator of length `n`.
    pub fn indicator(&self) -> Vec<bool> {
        let mut mark = vec![false; self.n];
        for &i in &self.indices {
            mark[i] = true;
        }
        mark
    }

    /// Position of each index in selection order, `None` when not sampled.
    pub fn positions(&self) -> Vec<Option<usize>> {
        let mut pos = vec![None; self.n];
        for (p, &i) in self.indices.iter().enumerate() {
            pos[i] = Some(p);
        }
        pos
    }

    /// Checks that every sampled column (or row) of `g` is nonzero.
    pub fn validate_against(&self, g: &SparseGraph) -> Result<()> {
        if self.n != g.n() {
            return Err(Error::Dimension(format!(
                "sample over {} indices for graph of order {}",
                self.n,
                g.n()
            )));
        }
        for &i in &self.indices {
            let empty = match self.kind {
                SampleKind::Column => g.column(i).is_empty(),
                SampleKind::Row => g.row(i).is_empty(),
            };
            if empty {
                return Err(Error::InvalidSample(format!("{:?} {i} is zero", self.kind)));
            }
        }
        Ok(())
    }
}

/// Running sum of the chosen columns.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    weights: Vec<f64>,
}

impl WeightVector {
    pub fn zeros(n: usize) -> Self {
        Self { weights: vec![0.0; n] }
    }

    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidSample("weights must be finite and nonnegative".into()));
        }
        Ok(Self { weights })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn add_column(&mut self, g: &SparseGraph, j: usize) {
        for &i in g.column(j) {
            self.weights[i] += 1.0;
        }
    }

    /// Draws an index with probability proportional to its weight, repeating
    /// the draw until `eligible` accepts it.
    ///
    /// Uses inverse-CDF lookup on the prefix sums. Returns `None` when no
    /// eligible index has positive weight, since the rejection loop would not
    /// terminate.
    pub fn draw(&self, rng: &mut impl Rng, eligible: impl Fn(usize) -> bool) -> Option<usize> {
        let eligible_mass: f64 = self.weights.iter().enumerate().filter(|&(i, _)| eligible(i)).map(|(_, w)| w).sum();
        if eligible_mass <= 0.0 {
            return None;
        }
        let prefix: Vec<f64> = self
            .weights
            .iter()
            .scan(0.0, |acc, w| {
                *acc += w;
                Some(*acc)
            })
            .collect();
        let total = *prefix.last()?;
        loop {
            let u = rng.random::<f64>() * total;
            let i = prefix.partition_point(|&c| c <= u);
            if i < prefix.len() && eligible(i) {
                return Some(i);
            }
        }
    }
}

/// Step-by-step guided column sampler.
pub struct GuidedSampler<'g> {
    graph: &'g SparseGraph,
    rng: ChaCha8Rng,
    nonzero: Vec<usize>,
    chosen: Vec<usize>,
    is_chosen: Vec<bool>,
    weights: WeightVector,
    fallback_draws: usize,
}

impl<'g> GuidedSampler<'g> {
    pub fn new(graph: &'g SparseGraph, seed: u64) -> Self {
        Self {
            graph,
            rng: rng::stream(seed, Stream::Sampling),
            nonzero: graph.nonzero_columns(),
            chosen: Vec::new(),
            is_chosen: vec![false; graph.n()],
            weights: WeightVector::zeros(graph.n()),
            fallback_draws: 0,
        }
    }

    pub fn chosen(&self) -> &[usize] {
        &self.chosen
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn fallback_draws(&self) -> usize {
        self.fallback_draws
    }

    /// Selects and records the next column.
    pub fn step(&mut self) -> Result<usize> {
        if self.chosen.len() >= self.nonzero.len() {
            return Err(Error::TooManySamples {
                requested: self.chosen.len() + 1,
                available: self.nonzero.len(),
            });
        }
        let g = self.graph;
        let next = if self.chosen.is_empty() {
            self.nonzero[self.rng.random_range(0..self.nonzero.len())]
        } else {
            let is_chosen = &self.is_chosen;
            let eligible = |i: usize| !is_chosen[i] && !g.column(i).is_empty();
            match self.weights.draw(&mut self.rng, eligible) {
                Some(i) => i,
                None => {
                    self.fallback_draws += 1;
                    let remaining: Vec<usize> = self.nonzero.iter().copied().filter(|&j| !self.is_chosen[j]).collect();
                    remaining[self.rng.random_range(0..remaining.len())]
                }
            }
        };
        self.chosen.push(next);
        self.is_chosen[next] = true;
        self.weights.add_column(g, next);
        Ok(next)
    }
}

/// Samples `ell` distinct nonzero columns of `g`.
pub fn sample_columns(g: &SparseGraph, ell: usize, seed: u64, strategy: Strategy) -> Result<SampleSet> {
    let available = g.nonzero_columns().len();
    if ell == 0 || ell > available {
        return Err(Error::TooManySamples { requested: ell, available });
    }
    let (indices, fallback_draws) = match strategy {
        Strategy::Guided => {
            let mut s = GuidedSampler::new(g, seed);
            for _ in 0..ell {
                s.step()?;
            }
            (s.chosen, s.fallback_draws)
        }
        Strategy::Random => {
            let nonzero = g.nonzero_columns();
            let mut rng = rng::stream(seed, Stream::Sampling);
            let picks = rand::seq::index::sample(&mut rng, nonzero.len(), ell);
            (picks.into_iter().map(|p| nonzero[p]).collect(), 0)
        }
        Strategy::Explicit => {
            return Err(Error::InvalidSample("explicit sets are built with SampleSet::from_indices".into()));
        }
    };
    Ok(SampleSet {
        kind: SampleKind::Column,
        strategy,
        seed,
        n: g.n(),
        indices,
        fallback_draws,
    })
}

/// Samples `ell` distinct nonzero rows of `g` by sampling columns of `gᵀ`.
pub fn sample_rows(g: &SparseGraph, ell: usize, seed: u64, strategy: Strategy) -> Result<SampleSet> {
    sample_columns(&g.transpose(), ell, seed, strategy).map(|s| s.as_kind(SampleKind::Row))
}
