use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use sampled_centrality::Strategy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    /// Diagonal of exp(γA).
    Subgraph,
    /// Row sums of exp(γA).
    Communicability,
    /// Row sums of (I − γA)⁻¹.
    Katz,
    /// Left Perron vector.
    Perron,
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Measure::Subgraph => "subgraph",
            Measure::Communicability => "communicability",
            Measure::Katz => "katz",
            Measure::Perron => "perron",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    Edgelist,
    Mtx,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum StrategyChoice {
    Guided,
    Random,
    Both,
}

impl StrategyChoice {
    pub fn strategies(self) -> Vec<Strategy> {
        match self {
            StrategyChoice::Guided => vec![Strategy::Guided],
            StrategyChoice::Random => vec![Strategy::Random],
            StrategyChoice::Both => vec![Strategy::Guided, Strategy::Random],
        }
    }
}

/// Sample sizes written as `200`, `100,200,400` or `500..3000[:step]`.
/// A range without a step advances by its start value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct EllList(pub Vec<usize>);

impl FromStr for EllList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if let Some((a, rest)) = part.split_once("..") {
                let (b, step) = match rest.split_once(':') {
                    Some((b, st)) => (b, Some(st)),
                    None => (rest, None),
                };
                let a: usize = a.parse().map_err(|_| format!("bad range start in {part:?}"))?;
                let b: usize = b.parse().map_err(|_| format!("bad range end in {part:?}"))?;
                let step: usize = match step {
                    Some(st) => st.parse().map_err(|_| format!("bad step in {part:?}"))?,
                    None => a,
                };
                if a == 0 || step == 0 || b < a {
                    return Err(format!("empty or invalid range {part:?}"));
                }
                out.extend((a..=b).step_by(step));
            } else {
                out.push(part.parse().map_err(|_| format!("bad sample size {part:?}"))?);
            }
        }
        if out.is_empty() || out.contains(&0) {
            return Err("sample sizes must be ≥ 1".into());
        }
        Ok(EllList(out))
    }
}

/// Everything that determines a run's output. Echoed into the report header.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub input: Option<PathBuf>,
    pub format: InputFormat,
    pub directed: bool,
    pub generate: Option<String>,
    pub measure: Measure,
    pub gamma: Option<f64>,
    pub gamma_scale: Option<f64>,
    pub epsilon: f64,
    pub ell: EllList,
    pub strategy: StrategyChoice,
    pub seeds: Vec<u64>,
    pub k: usize,
    pub dense_cap: usize,
    pub krylov_k: usize,
}
