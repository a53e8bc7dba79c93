//! Top-k rankings and their agreement.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default report depth.
pub const DEFAULT_K: usize = 20;

/// Nodes sorted by descending score, ties broken by ascending node index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ranking {
    pub ordered_nodes: Vec<usize>,
    pub scores: Vec<f64>,
    pub k: usize,
}

impl Ranking {
    pub fn top(&self, k: usize) -> &[usize] {
        &self.ordered_nodes[..k.min(self.ordered_nodes.len())]
    }
}

/// Ranks all nodes and keeps the first `k`. NaN scores sort last.
pub fn rank_nodes(scores: &[f64], k: usize) -> Result<Ranking> {
    if k > scores.len() {
        return Err(Error::Dimension(format!("report depth {k} exceeds {} nodes", scores.len())));
    }
    let key = |x: f64| if x.is_nan() { f64::NEG_INFINITY } else { x };
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| key(scores[b]).total_cmp(&key(scores[a])).then(a.cmp(&b)));
    order.truncate(k);
    let top_scores = order.iter().map(|&i| scores[i]).collect();
    Ok(Ranking {
        ordered_nodes: order,
        scores: top_scores,
        k,
    })
}

fn check_depth(a: &Ranking, b: &Ranking, k: usize) -> Result<()> {
    if k > a.ordered_nodes.len() || k > b.ordered_nodes.len() {
        return Err(Error::Dimension(format!("depth {k} exceeds ranking depth")));
    }
    Ok(())
}

/// `|top_k(a) ∩ top_k(b)|`.
pub fn topk_overlap(a: &Ranking, b: &Ranking, k: usize) -> Result<usize> {
    check_depth(a, b, k)?;
    let set: std::collections::HashSet<usize> = a.top(k).iter().copied().collect();
    Ok(b.top(k).iter().filter(|i| set.contains(i)).count())
}

/// Number of positions `p < k` holding the same node in both rankings.
pub fn exact_matches(a: &Ranking, b: &Ranking, k: usize) -> Result<usize> {
    check_depth(a, b, k)?;
    Ok(a.top(k).iter().zip(b.top(k)).filter(|(x, y)| x == y).count())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Candidate {
    pub label: String,
    pub ranking: Ranking,
    pub overlap: usize,
    pub exact: usize,
}

/// A reference ranking side by side with candidate rankings, one column
/// per configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankingReport {
    pub k: usize,
    pub tie_break: String,
    pub reference: Ranking,
    pub candidates: Vec<Candidate>,
}

impl RankingReport {
    pub fn new(reference: Ranking, k: usize) -> Result<Self> {
        if k > reference.ordered_nodes.len() {
            return Err(Error::Dimension(format!("depth {k} exceeds reference depth")));
        }
        Ok(Self {
            k,
            tie_break: "ascending node index".into(),
            reference,
            candidates: Vec::new(),
        })
    }

    pub fn add(&mut self, label: impl Into<String>, ranking: Ranking) -> Result<()> {
        let overlap = topk_overlap(&self.reference, &ranking, self.k)?;
        let exact = exact_matches(&self.reference, &ranking, self.k)?;
        self.candidates.push(Candidate {
            label: label.into(),
            ranking,
            overlap,
            exact,
        });
        Ok(())
    }

    /// Rows are ranks `1..=k`; the first column is the reference, then one
    /// column per candidate. Two trailer rows hold overlap@k and exact@k.
    /// `label` maps node indices to the ids printed.
    pub fn to_csv(&self, label: impl Fn(usize) -> String) -> String {
        let mut out = String::from("rank,reference");
        for c in &self.candidates {
            let _ = write!(out, ",{}", c.label.replace(',', ";"));
        }
        out.push('\n');
        for p in 0..self.k {
            let _ = write!(out, "{},{}", p + 1, label(self.reference.ordered_nodes[p]));
            for c in &self.candidates {
                let _ = write!(out, ",{}", label(c.ranking.ordered_nodes[p]));
            }
            out.push('\n');
        }
        let _ = write!(out, "overlap@{},{}", self.k, self.k);
        for c in &self.candidates {
            let _ = write!(out, ",{}", c.overlap);
        }
        out.push('\n');
        let _ = write!(out, "exact@{},{}", self.k, self.k);
        for c in &self.candidates {
            let _ = write!(out, ",{}", c.exact);
        }
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ties_break_by_index() {
        assert_eq!(rank_nodes(&[0.5, 0.9, 0.5], 3).unwrap().ordered_nodes, vec![1, 0, 2]);
        assert_eq!(rank_nodes(&[1.0; 5], 5).unwrap().ordered_nodes, vec![0, 1, 2, 3, 4]);
        let r = rank_nodes(&[0.3, f64::NAN, 0.1], 3).unwrap();
        assert_eq!(r.ordered_nodes, vec![0, 2, 1]);
        assert!(rank_nodes(&[1.0], 2).is_err());
    }

    #[test]
    fn overlap_and_exact_examples() {
        let scores: Vec<f64> = (0..40).map(|i| i as f64).collect();
        let a = rank_nodes(&scores, 40).unwrap();
        assert_eq!(topk_overlap(&a, &a, 20).unwrap(), 20);
        assert_eq!(exact_matches(&a, &a, 20).unwrap(), 20);

        let rev: Vec<f64> = scores.iter().map(|x| -x).collect();
        let b = rank_nodes(&rev, 40).unwrap();
        assert_eq!(topk_overlap(&a, &b, 20).unwrap(), 0);

        // Same top 4, reversed order.
        let c = rank_nodes(&[4.0, 3.0, 2.0, 1.0], 4).unwrap();
        let d = rank_nodes(&[1.0, 2.0, 3.0, 4.0], 4).unwrap();
        assert_eq!(topk_overlap(&c, &d, 4).unwrap(), 4);
        assert_eq!(exact_matches(&c, &d, 4).unwrap(), 0);
    }

    #[test]
    fn report_csv_layout() {
        let reference = rank_nodes(&[3.0, 2.0, 1.0], 3).unwrap();
        let mut rep = RankingReport::new(reference, 2).unwrap();
        rep.add("guided l=2", rank_nodes(&[3.0, 1.0, 2.0], 3).unwrap()).unwrap();
        let csv = rep.to_csv(|i| (i + 1).to_string());
        assert_eq!(csv, "rank,reference,guided l=2\n1,1,1\n2,2,3\noverlap@2,2,1\nexact@2,2,1\n");
    }

    proptest! {
        #[test]
        fn monotone_transform_keeps_order(scores in proptest::collection::vec(-100.0f64..100.0, 1..60)) {
            let n = scores.len();
            let a = rank_nodes(&scores, n).unwrap();
            let t: Vec<f64> = scores.iter().map(|x| (x / 50.0).exp() * 3.0 + 1.0).collect();
            prop_assert_eq!(a.ordered_nodes, rank_nodes(&t, n).unwrap().ordered_nodes);
        }

        #[test]
        fn overlap_symmetry_and_bounds(x in proptest::collection::vec(0.0f64..1.0, 25..40), y in proptest::collection::vec(0.0f64..1.0, 25..40), k in 1usize..25) {
            let a = rank_nodes(&x, 25).unwrap();
            let b = rank_nodes(&y, 25).unwrap();
            let o = topk_overlap(&a, &b, k).unwrap();
            let e = exact_matches(&a, &b, k).unwrap();
            prop_assert_eq!(o, topk_overlap(&b, &a, k).unwrap());
            prop_assert_eq!(e, exact_matches(&b, &a, k).unwrap());
            prop_assert!(e <= o && o <= k);
        }
    }
}
