//! Seeded synthetic graphs.
//!
//! Specs are written `name:key=value,...`, for example `er:n=60,p=0.1,seed=1`
//! or `star:leaves=3`. All generated graphs are simple and loop-free.

use std::collections::HashMap;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::SparseGraph;
use crate::rng::{self, Stream};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum GeneratorSpec {
    /// Erdős–Rényi `G(n, p)`; every ordered (directed) or unordered pair is an
    /// edge with probability `p`.
    Er {
        n: usize,
        p: f64,
        directed: bool,
        seed: u64,
    },
    /// Barabási–Albert preferential attachment: each new node links to `m`
    /// distinct earlier nodes chosen with probability proportional to degree.
    Pa {
        n: usize,
        m: usize,
        seed: u64,
    },
    Star {
        leaves: usize,
    },
    Path {
        n: usize,
    },
    Cycle {
        n: usize,
        directed: bool,
    },
    /// Two undirected `G(n/2, intra_p)` clusters joined by a single edge.
    TwoClusterBridge {
        n: usize,
        intra_p: f64,
        seed: u64,
    },
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut kv: HashMap<&str, &str> = HashMap::new();
        for part in rest.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Generator(format!("expected key=value, got {part:?}")))?;
            kv.insert(k.trim(), v.trim());
        }
        let mut take = |key: &str| kv.remove(key);
        fn num<T: FromStr>(key: &str, v: Option<&str>, default: Option<T>) -> Result<T> {
            match v {
                Some(v) => v.parse().map_err(|_| Error::Generator(format!("invalid value {v:?} for {key}"))),
                None => default.ok_or_else(|| Error::Generator(format!("missing parameter {key}"))),
            }
        }
        let spec = match name {
            "er" => GeneratorSpec::Er {
                n: num("n", take("n"), None)?,
                p: num("p", take("p"), None)?,
                directed: num("directed", take("directed"), Some(true))?,
                seed: num("seed", take("seed"), Some(0))?,
            },
            "pa" => GeneratorSpec::Pa {
                n: num("n", take("n"), None)?,
                m: num("m", take("m"), Some(5))?,
                seed: num("seed", take("seed"), Some(0))?,
            },
            "star" => GeneratorSpec::Star {
                leaves: num("leaves", take("leaves"), None)?,
            },
            "path" => GeneratorSpec::Path {
                n: num("n", take("n"), None)?,
            },
            "cycle" => GeneratorSpec::Cycle {
                n: num("n", take("n"), None)?,
                directed: num("directed", take("directed"), Some(false))?,
            },
            "two-cluster-bridge" => GeneratorSpec::TwoClusterBridge {
                n: num("n", take("n"), None)?,
                intra_p: num("intra_p", take("intra_p"), None)?,
                seed: num("seed", take("seed"), Some(0))?,
            },
            other => return Err(Error::Generator(format!("unknown model {other:?}"))),
        };
        if let Some(k) = kv.keys().next() {
            return Err(Error::Generator(format!("unknown parameter {k:?} for {name}")));
        }
        Ok(spec)
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Generator(format!("probability {p} outside [0, 1]")));
    }
    Ok(())
}

fn gnp_pairs(nodes: std::ops::Range<usize>, p: f64, directed: bool, rng: &mut impl Rng, out: &mut Vec<(usize, usize)>) {
    for i in nodes.clone() {
        for j in nodes.clone() {
            if i == j || (!directed && j < i) {
                continue;
            }
            if rng.random::<f64>() < p {
                out.push((i, j));
            }
        }
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<SparseGraph> {
    let build = |n: usize, directed: bool, edges: Vec<(usize, usize)>| -> Result<SparseGraph> {
        if edges.is_empty() {
            return Err(Error::NoEdges);
        }
        Ok(SparseGraph::from_entries(n, directed, edges)?.0)
    };
    match *spec {
        GeneratorSpec::Er { n, p, directed, seed } => {
            check_p(p)?;
            if n < 2 {
                return Err(Error::Generator("er needs n ≥ 2".into()));
            }
            let mut rng = rng::stream(seed, Stream::Generator);
            let mut edges = Vec::new();
            gnp_pairs(0..n, p, directed, &mut rng, &mut edges);
            build(n, directed, edges)
        }
        GeneratorSpec::Pa { n, m, seed } => {
            if m == 0 || n <= m + 1 {
                return Err(Error::Generator(format!("pa needs m ≥ 1 and n > m + 1, got n={n}, m={m}")));
            }
            let mut rng = rng::stream(seed, Stream::Generator);
            let mut edges = Vec::new();
            // Each endpoint appears once per incident edge, so a uniform pick
            // from this list is degree-proportional.
            let mut endpoints: Vec<usize> = Vec::new();
            for i in 0..=m {
                for j in (i + 1)..=m {
                    edges.push((i, j));
                    endpoints.extend([i, j]);
                }
            }
            let mut targets: Vec<usize> = Vec::with_capacity(m);
            for v in (m + 1)..n {
                targets.clear();
                while targets.len() < m {
                    let t = endpoints[rng.random_range(0..endpoints.len())];
                    if !targets.contains(&t) {
                        targets.push(t);
                    }
                }
                for &t in &targets {
                    edges.push((v, t));
                    endpoints.extend([v, t]);
                }
            }
            build(n, false, edges)
        }
        GeneratorSpec::Star { leaves } => {
            if leaves == 0 {
                return Err(Error::Generator("star needs at least one leaf".into()));
            }
            build(leaves + 1, false, (1..=leaves).map(|l| (0, l)).collect())
        }
        GeneratorSpec::Path { n } => {
            if n < 2 {
                return Err(Error::Generator("path needs n ≥ 2".into()));
            }
            build(n, false, (0..n - 1).map(|i| (i, i + 1)).collect())
        }
        GeneratorSpec::Cycle { n, directed } => {
            if n < 3 {
                return Err(Error::Generator("cycle needs n ≥ 3".into()));
            }
            build(n, directed, (0..n).map(|i| (i, (i + 1) % n)).collect())
        }
        GeneratorSpec::TwoClusterBridge { n, intra_p, seed } => {
            check_p(intra_p)?;
            if n < 4 {
                return Err(Error::Generator("two-cluster-bridge needs n ≥ 4".into()));
            }
            let half = n / 2;
            let mut rng = rng::stream(seed, Stream::Generator);
            let mut edges = Vec::new();
            gnp_pairs(0..half, intra_p, false, &mut rng, &mut edges);
            gnp_pairs(half..n, intra_p, false, &mut rng, &mut edges);
            edges.push((rng.random_range(0..half), rng.random_range(half..n)));
            build(n, false, edges)
        }
    }
}
