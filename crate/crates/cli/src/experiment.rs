use std::fs::File;
use std::io::BufReader;
use std::time::Instant;

use serde::Serialize;

use sampled_centrality::generate::{generate, GeneratorSpec};
use sampled_centrality::graph::{parse_with_stats, IdMode};
use sampled_centrality::matfun::evaluate_masked_function;
use sampled_centrality::oracle::{dense_left_perron, dense_matfun_capped, krylov_full_matfun};
use sampled_centrality::perron::{left_perron, symmetric_perron};
use sampled_centrality::ranking::{exact_matches, rank_nodes, topk_overlap};
use sampled_centrality::sampling::{sample_columns, sample_rows};
use sampled_centrality::{
    EdgeFormat, Error, PerronConfig, Ranking, RankingReport, Result, ScalarFunction, SparseGraph, Strategy, Tolerances,
};

use crate::config::{ExperimentConfig, InputFormat, Measure};

#[derive(Debug, Clone, Serialize)]
pub struct GraphInfo {
    pub n: usize,
    pub stored_entries: usize,
    pub directed: bool,
    pub duplicates: usize,
    pub self_loops: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Reference {
    /// `dense`, `krylov` or `power`.
    pub source: String,
    pub krylov_k: Option<usize>,
    pub top: Vec<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub ell: usize,
    pub strategy: Strategy,
    pub seed: u64,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fallback_reason: Option<String>,
    pub fallback_draws: usize,
    pub overlap: Option<usize>,
    pub exact: Option<usize>,
    pub top: Vec<u64>,
    #[serde(skip)]
    pub seconds: f64,
    #[serde(skip)]
    pub ranking: Option<Ranking>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SummaryRow {
    pub ell: usize,
    pub strategy: Strategy,
    pub completed: usize,
    pub failed: usize,
    pub mean_overlap: f64,
    pub min_overlap: usize,
    pub max_overlap: usize,
    pub mean_exact: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TimingRow {
    pub ell: usize,
    pub strategy: Strategy,
    pub mean: f64,
    pub max: f64,
    pub min: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool_version: String,
    pub config_echo: ExperimentConfig,
    pub graph: GraphInfo,
    pub gamma: Option<f64>,
    pub reference: Reference,
    pub runs: Vec<RunRecord>,
    pub summary: Vec<SummaryRow>,
    pub complete: bool,
    #[serde(skip)]
    pub reference_ranking: Ranking,
}

impl Report {
    pub fn timing(&self) -> Vec<TimingRow> {
        let mut rows = Vec::new();
        for s in &self.summary {
            let t: Vec<f64> = self
                .runs
                .iter()
                .filter(|r| r.ell == s.ell && r.strategy == s.strategy && r.status == "ok")
                .map(|r| r.seconds)
                .collect();
            if t.is_empty() {
                continue;
            }
            rows.push(TimingRow {
                ell: s.ell,
                strategy: s.strategy,
                mean: t.iter().sum::<f64>() / t.len() as f64,
                max: t.iter().copied().fold(f64::MIN, f64::max),
                min: t.iter().copied().fold(f64::MAX, f64::min),
            });
        }
        rows
    }

    /// Reference and completed runs side by side, rank by rank.
    pub fn ranking_report(&self) -> Result<RankingReport> {
        let mut rep = RankingReport::new(self.reference_ranking.clone(), self.config_echo.k)?;
        for r in &self.runs {
            if let Some(ranking) = &r.ranking {
                rep.add(format!("{} l={} seed={}", r.strategy, r.ell, r.seed), ranking.clone())?;
            }
        }
        Ok(rep)
    }
}

pub fn load_graph(cfg: &ExperimentConfig) -> Result<(SparseGraph, GraphInfo)> {
    let (g, duplicates) = match (&cfg.input, &cfg.generate) {
        (Some(path), None) => {
            let file = File::open(path)?;
            let format = match cfg.format {
                InputFormat::Edgelist => EdgeFormat::EdgeList,
                InputFormat::Mtx => EdgeFormat::MatrixMarketPattern,
            };
            let (g, stats) = parse_with_stats(BufReader::new(file), format, cfg.directed, IdMode::Compact)?;
            (g, stats.duplicates)
        }
        (None, Some(spec)) => (generate(&spec.parse::<GeneratorSpec>()?)?, 0),
        _ => return Err(Error::Dimension("give exactly one of --input and --generate".into())),
    };
    // Self-loops are not part of the centrality model.
    let (g, self_loops) = g.remove_self_loops();
    if g.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    let info = GraphInfo {
        n: g.n(),
        stored_entries: g.edge_count(),
        directed: g.is_directed(),
        duplicates,
        self_loops,
    };
    Ok((g, info))
}

fn function_for(cfg: &ExperimentConfig, g: &SparseGraph) -> Result<Option<ScalarFunction>> {
    let gamma = |default_scale: Option<f64>| -> Result<f64> {
        match (
            cfg.gamma_scale.or(if cfg.gamma.is_none() { default_scale } else { None }),
            cfg.gamma,
        ) {
            (Some(scale), _) => {
                let rho = dense_left_perron(g, 1e-10, 100_000)?.eigenvalue_estimate;
                if !(rho > 0.0) {
                    return Err(Error::Inadmissible("spectral radius estimate is zero; cannot scale gamma".into()));
                }
                Ok(scale / rho)
            }
            (None, Some(gm)) => Ok(gm),
            (None, None) => Ok(1.0),
        }
    };
    Ok(match cfg.measure {
        Measure::Subgraph | Measure::Communicability => Some(ScalarFunction::exp_minus_one(gamma(None)?)?),
        Measure::Katz => Some(ScalarFunction::resolvent_minus_one(gamma(Some(0.5))?)?),
        Measure::Perron => None,
    })
}

fn pick(measure: Measure, diag: Vec<f64>, rowsum: Vec<f64>) -> Vec<f64> {
    if measure == Measure::Subgraph {
        diag
    } else {
        rowsum
    }
}

fn reference_scores(cfg: &ExperimentConfig, g: &SparseGraph, f: Option<&ScalarFunction>) -> Result<(Vec<f64>, String, Option<usize>)> {
    let n = g.n();
    match f {
        None => Ok((dense_left_perron(g, 1e-12, 1_000_000)?.vector, "power".into(), None)),
        Some(f) if n <= cfg.dense_cap => {
            let e = dense_matfun_capped(&g.to_dense(), f, cfg.dense_cap)?;
            let diag = (0..n).map(|i| e[(i, i)]).collect();
            let rowsum = (0..n).map(|i| e.row(i).sum()).collect();
            Ok((pick(cfg.measure, diag, rowsum), "dense".into(), None))
        }
        Some(f) => {
            let k = cfg.krylov_k.min(n);
            let a = krylov_full_matfun(g, k, f, cfg.seeds[0])?;
            Ok((pick(cfg.measure, a.diag, a.rowsum), "krylov".into(), Some(k)))
        }
    }
}

fn sampled_scores(
    cfg: &ExperimentConfig,
    g: &SparseGraph,
    f: Option<&ScalarFunction>,
    ell: usize,
    strategy: Strategy,
    seed: u64,
    rec: &mut RunRecord,
) -> Result<Vec<f64>> {
    let cols = sample_columns(g, ell, seed, strategy)?;
    rec.fallback_draws = cols.fallback_draws();
    match f {
        Some(f) => {
            let r = evaluate_masked_function(g, &cols, f, seed, &Tolerances::default())?;
            rec.method = Some(format!("{:?}", r.method));
            rec.fallback_reason = r.fallback_reason;
            Ok(pick(cfg.measure, r.diag, r.rowsum))
        }
        None => {
            let pc = PerronConfig {
                epsilon: cfg.epsilon,
                seed,
                ..Default::default()
            };
            let r = if g.is_directed() {
                let rows = sample_rows(g, ell, seed, strategy)?;
                rec.fallback_draws += rows.fallback_draws();
                left_perron(g, &cols, &rows, &pc)?
            } else {
                symmetric_perron(g, &cols, &pc)?
            };
            rec.method = Some("Power".into());
            Ok(r.vector)
        }
    }
}

/// Runs every (ℓ, strategy, seed) combination. Errors before the first run
/// (input, reference) are returned; per-run errors are recorded in the report.
/// A report depth larger than the graph is clamped to its order.
pub fn run(cfg: &ExperimentConfig) -> Result<(Report, SparseGraph)> {
    if cfg.seeds.is_empty() {
        return Err(Error::Dimension("no seeds".into()));
    }
    let (g, info) = load_graph(cfg)?;
    let mut cfg = cfg.clone();
    cfg.k = cfg.k.min(g.n());
    let cfg = &cfg;
    let f = function_for(cfg, &g)?;
    let (ref_scores, source, krylov_k) = reference_scores(cfg, &g, f.as_ref())?;
    let reference = rank_nodes(&ref_scores, cfg.k)?;
    let label = |r: &Ranking| r.ordered_nodes.iter().map(|&i| g.label(i)).collect::<Vec<u64>>();

    let mut runs = Vec::new();
    let mut summary = Vec::new();
    for &ell in &cfg.ell.0 {
        for strategy in cfg.strategy.strategies() {
            let start_idx = runs.len();
            for &seed in &cfg.seeds {
                let mut rec = RunRecord {
                    ell,
                    strategy,
                    seed,
                    status: "ok".into(),
                    error: None,
                    method: None,
                    fallback_reason: None,
                    fallback_draws: 0,
                    overlap: None,
                    exact: None,
                    top: Vec::new(),
                    seconds: 0.0,
                    ranking: None,
                };
                let t0 = Instant::now();
                let outcome = sampled_scores(cfg, &g, f.as_ref(), ell, strategy, seed, &mut rec).and_then(|s| rank_nodes(&s, cfg.k));
                rec.seconds = t0.elapsed().as_secs_f64();
                match outcome {
                    Ok(ranking) => {
                        rec.overlap = Some(topk_overlap(&reference, &ranking, cfg.k)?);
                        rec.exact = Some(exact_matches(&reference, &ranking, cfg.k)?);
                        rec.top = label(&ranking);
                        rec.ranking = Some(ranking);
                    }
                    Err(e) => {
                        rec.status = "failed".into();
                        rec.error = Some(e.to_string());
                    }
                }
                runs.push(rec);
            }
            let group = &runs[start_idx..];
            let ok: Vec<&RunRecord> = group.iter().filter(|r| r.status == "ok").collect();
            let overlaps: Vec<usize> = ok.iter().filter_map(|r| r.overlap).collect();
            let mean = |v: &[usize]| {
                if v.is_empty() {
                    f64::NAN
                } else {
                    v.iter().sum::<usize>() as f64 / v.len() as f64
                }
            };
            let exacts: Vec<usize> = ok.iter().filter_map(|r| r.exact).collect();
            summary.push(SummaryRow {
                ell,
                strategy,
                completed: ok.len(),
                failed: group.len() - ok.len(),
                mean_overlap: mean(&overlaps),
                min_overlap: overlaps.iter().copied().min().unwrap_or(0),
                max_overlap: overlaps.iter().copied().max().unwrap_or(0),
                mean_exact: mean(&exacts),
            });
        }
    }
    let complete = runs.iter().all(|r| r.status == "ok");
    let report = Report {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config_echo: cfg.clone(),
        graph: info,
        gamma: f.map(|f| f.gamma()),
        reference: Reference {
            source,
            krylov_k,
            top: label(&reference),
        },
        runs,
        summary,
        complete,
        reference_ranking: reference,
    };
    Ok((report, g))
}
