//! Immutable sparse adjacency matrices.
//!
//! A [`SparseGraph`] stores the 0/1 adjacency matrix `A` (with `a_ij = 1` iff
//! there is an edge `i -> j`) twice: compressed by column and compressed by
//! row. Column access drives the sampler and the masked Krylov operators, row
//! access drives the row sampler and the Perron product.

use std::fmt::Write as _;
use std::io::BufRead;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling::SampleSet;

/// Input formats accepted by [`parse_edge_list`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeFormat {
    /// One whitespace-separated `src dst` pair per line, 0-based ids.
    EdgeList,
    /// Matrix Market coordinate file, 1-based indices.
    MatrixMarketPattern,
}

/// How raw edge-list node ids map onto matrix indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IdMode {
    /// Index = raw id; `n = 1 + max id`.
    #[default]
    Raw,
    /// Ids are renumbered `0..n` in order of first appearance; the raw ids are
    /// kept as labels.
    Compact,
}

/// Counters collected while parsing.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ParseStats {
    /// Entries listed more than once (after symmetrization) and collapsed.
    pub duplicates: usize,
    /// Diagonal entries present in the parsed matrix.
    pub self_loops: usize,
}

/// Sparse vector with strictly increasing indices.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseVector {
    dimension: usize,
    entries: Vec<(usize, f64)>,
}

impl SparseVector {
    pub fn new(dimension: usize, mut entries: Vec<(usize, f64)>) -> Result<Self> {
        entries.retain(|&(_, v)| v != 0.0);
        entries.sort_by_key(|&(i, _)| i);
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Dimension(format!("duplicate index {}", w[0].0)));
            }
        }
        if let Some(&(i, _)) = entries.last() {
            if i >= dimension {
                return Err(Error::Dimension(format!("index {i} outside dimension {dimension}")));
            }
        }
        Ok(Self { dimension, entries })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dimension];
        for &(i, v) in &self.entries {
            out[i] = v;
        }
        out
    }

    pub fn add_to(&self, acc: &mut [f64]) {
        for &(i, v) in &self.entries {
            acc[i] += v;
        }
    }
}

/// Unweighted adjacency matrix in compressed-column and compressed-row form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseGraph {
    n: usize,
    directed: bool,
    col_ptr: Vec<usize>,
    col_rows: Vec<usize>,
    row_ptr: Vec<usize>,
    row_cols: Vec<usize>,
    labels: Vec<u64>,
}

impl SparseGraph {
    /// Builds a graph from `(i, j)` entries meaning `a_ij = 1`.
    ///
    /// Undirected graphs get the mirror entry `(j, i)` of every pair. Duplicate
    /// entries collapse; the number collapsed is returned alongside.
    pub fn from_entries(n: usize, directed: bool, entries: impl IntoIterator<Item = (usize, usize)>) -> Result<(Self, usize)> {
        if n == 0 {
            return Err(Error::Dimension("graph must have at least one node".into()));
        }
        let mut list: Vec<(usize, usize)> = Vec::new();
        for (i, j) in entries {
            if i >= n || j >= n {
                return Err(Error::Dimension(format!("entry ({i}, {j}) outside order {n}")));
            }
            list.push((i, j));
            if !directed && i != j {
                list.push((j, i));
            }
        }
        let raw = list.len();
        // Sorting by (column, row) yields the column store directly.
        list.sort_unstable_by_key(|&(i, j)| (j, i));
        list.dedup();
        let duplicates = raw - list.len();
        Ok((Self::from_sorted_unique(n, directed, &list, (0..n as u64).collect()), duplicates))
    }

    fn from_sorted_unique(n: usize, directed: bool, by_col: &[(usize, usize)], labels: Vec<u64>) -> Self {
        let mut col_ptr = vec![0usize; n + 1];
        let mut row_ptr = vec![0usize; n + 1];
        for &(i, j) in by_col {
            col_ptr[j + 1] += 1;
            row_ptr[i + 1] += 1;
        }
        for k in 0..n {
            col_ptr[k + 1] += col_ptr[k];
            row_ptr[k + 1] += row_ptr[k];
        }
        let col_rows: Vec<usize> = by_col.iter().map(|&(i, _)| i).collect();
        // Entries arrive column by column, so each row list fills in ascending
        // column order.
        let mut row_cols = vec![0usize; by_col.len()];
        let mut fill = row_ptr.clone();
        for &(i, j) in by_col {
            row_cols[fill[i]] = j;
            fill[i] += 1;
        }
        Self {
            n,
            directed,
            col_ptr,
            col_rows,
            row_ptr,
            row_cols,
            labels,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Number of stored nonzeros.
    pub fn edge_count(&self) -> usize {
        self.col_rows.len()
    }

    /// Row indices `i` with `a_ij = 1`, ascending.
    pub fn column(&self, j: usize) -> &[usize] {
        &self.col_rows[self.col_ptr[j]..self.col_ptr[j + 1]]
    }

    /// Column indices `j` with `a_ij = 1`, ascending.
    pub fn row(&self, i: usize) -> &[usize] {
        &self.row_cols[self.row_ptr[i]..self.row_ptr[i + 1]]
    }

    pub fn column_vector(&self, j: usize) -> SparseVector {
        SparseVector {
            dimension: self.n,
            entries: self.column(j).iter().map(|&i| (i, 1.0)).collect(),
        }
    }

    pub fn row_vector(&self, i: usize) -> SparseVector {
        SparseVector {
            dimension: self.n,
            entries: self.row(i).iter().map(|&j| (j, 1.0)).collect(),
        }
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.row(i).binary_search(&j).is_ok()
    }

    /// Dataset label of node `i` (raw id, or 1-based index for Matrix Market).
    pub fn label(&self, i: usize) -> u64 {
        self.labels[i]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn with_labels(mut self, labels: Vec<u64>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::Dimension(format!("{} labels for {} nodes", labels.len(), self.n)));
        }
        self.labels = labels;
        Ok(self)
    }

    /// All stored entries `(i, j)` in column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |j| self.column(j).iter().map(move |&i| (i, j)))
    }

    pub fn nonzero_columns(&self) -> Vec<usize> {
        (0..self.n).filter(|&j| self.col_ptr[j + 1] > self.col_ptr[j]).collect()
    }

    pub fn nonzero_rows(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.row_ptr[i + 1] > self.row_ptr[i]).collect()
    }

    pub fn self_loop_count(&self) -> usize {
        (0..self.n).filter(|&i| self.has_edge(i, i)).count()
    }

    /// Returns the graph with every diagonal entry removed and the number
    /// removed.
    pub fn remove_self_loops(&self) -> (Self, usize) {
        let kept: Vec<(usize, usize)> = self.entries().filter(|&(i, j)| i != j).collect();
        let removed = self.edge_count() - kept.len();
        (Self::from_sorted_unique(self.n, self.directed, &kept, self.labels.clone()), removed)
    }

    /// Adjacency matrix of the reversed graph.
    pub fn transpose(&self) -> Self {
        Self {
            n: self.n,
            directed: self.directed,
            col_ptr: self.row_ptr.clone(),
            col_rows: self.row_cols.clone(),
            row_ptr: self.col_ptr.clone(),
            row_cols: self.col_rows.clone(),
            labels: self.labels.clone(),
        }
    }

    /// True when every entry has its mirror entry.
    pub fn is_symmetric(&self) -> bool {
        self.col_ptr == self.row_ptr && self.col_rows == self.row_cols
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x)?;
        Ok((0..self.n).map(|i| self.row(i).iter().map(|&j| x[j]).sum()).collect())
    }

    /// `y = Aᵀ x`.
    pub fn transpose_matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x)?;
        Ok((0..self.n).map(|j| self.column(j).iter().map(|&i| x[i]).sum()).collect())
    }

    /// `y = A_ℓ x` where `A_ℓ` keeps only the columns listed in `mask`.
    ///
    /// Columns are visited in ascending index order and each column's rows in
    /// ascending order, so the result is bitwise reproducible.
    pub fn masked_matvec(&self, mask: &SampleSet, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x)?;
        if mask.n() != self.n {
            return Err(Error::Dimension(format!(
                "mask dimension {} for graph of order {}",
                mask.n(),
                self.n
            )));
        }
        let mut cols = mask.indices().to_vec();
        cols.sort_unstable();
        let mut y = vec![0.0; self.n];
        self.accumulate_columns(&cols, x, &mut y);
        Ok(y)
    }

    /// `y += Σ_{j ∈ cols} x_j A(:, j)`, visiting `cols` in the given order.
    pub(crate) fn accumulate_columns(&self, cols: &[usize], x: &[f64], y: &mut [f64]) {
        for &j in cols {
            let xj = x[j];
            if xj != 0.0 {
                for &i in self.column(j) {
                    y[i] += xj;
                }
            }
        }
    }

    fn check_len(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::Dimension(format!(
                "vector of length {} for graph of order {}",
                x.len(),
                self.n
            )));
        }
        Ok(())
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for (i, j) in self.entries() {
            a[(i, j)] = 1.0;
        }
        a
    }

    /// Serializes to the edge-list format; undirected graphs list each edge
    /// once with `i <= j`.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# nodes {} entries {} {}",
            self.n,
            self.edge_count(),
            if self.directed { "directed" } else { "undirected" }
        );
        for i in 0..self.n {
            for &j in self.row(i) {
                if self.directed || i <= j {
                    let _ = writeln!(out, "{i} {j}");
                }
            }
        }
        out
    }

    /// Checks the structural invariants; used by tests and after parsing.
    pub fn validate(&self) -> Result<()> {
        let sorted_unique = |s: &[usize]| s.windows(2).all(|w| w[0] < w[1]);
        for k in 0..self.n {
            if !sorted_unique(self.column(k)) || !sorted_unique(self.row(k)) {
                return Err(Error::Dimension(format!("unsorted or duplicate entries at index {k}")));
            }
        }
        let mut from_rows: Vec<(usize, usize)> = (0..self.n).flat_map(|i| self.row(i).iter().map(move |&j| (i, j))).collect();
        from_rows.sort_unstable_by_key(|&(i, j)| (j, i));
        if from_rows != self.entries().collect::<Vec<_>>() {
            return Err(Error::Dimension("row and column stores disagree".into()));
        }
        if !self.directed && !self.is_symmetric() {
            return Err(Error::Dimension("undirected graph with asymmetric entries".into()));
        }
        Ok(())
    }
}

/// Parses a graph, discarding the parse counters.
pub fn parse_edge_list(source: impl BufRead, format: EdgeFormat, directed: bool) -> Result<SparseGraph> {
    parse_with_stats(source, format, directed, IdMode::Raw).map(|(g, _)| g)
}

/// Parses a graph in the given format.
///
/// Self-loops are kept; use [`SparseGraph::remove_self_loops`]. For Matrix
/// Market input a `symmetric` header always yields an undirected graph, a
/// `general` header yields a directed graph unless `directed` is false, in
/// which case the pattern is symmetrized.
pub fn parse_with_stats(source: impl BufRead, format: EdgeFormat, directed: bool, ids: IdMode) -> Result<(SparseGraph, ParseStats)> {
    let (graph, duplicates) = match format {
        EdgeFormat::EdgeList => parse_plain(source, directed, ids)?,
        EdgeFormat::MatrixMarketPattern => parse_matrix_market(source, directed)?,
    };
    let self_loops = graph.self_loop_count();
    Ok((graph, ParseStats { duplicates, self_loops }))
}

fn parse_plain(source: impl BufRead, directed: bool, ids: IdMode) -> Result<(SparseGraph, usize)> {
    let mut raw: Vec<(u64, u64)> = Vec::new();
    for (lineno, line) in source.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') || t.starts_with('%') {
            continue;
        }
        let mut parts = t.split_whitespace();
        let mut field = |what: &str| -> Result<u64> {
            let tok = parts.next().ok_or_else(|| Error::Parse {
                line: lineno + 1,
                msg: format!("missing {what} node"),
            })?;
            tok.parse::<u64>().map_err(|_| Error::Parse {
                line: lineno + 1,
                msg: format!("invalid {what} node id {tok:?}"),
            })
        };
        let src = field("source")?;
        let dst = field("target")?;
        raw.push((src, dst));
    }
    if raw.is_empty() {
        return Err(Error::NoEdges);
    }
    match ids {
        IdMode::Raw => {
            let max = raw.iter().map(|&(a, b)| a.max(b)).max().unwrap_or(0);
            let n = usize::try_from(max + 1).map_err(|_| Error::Dimension("node id too large".into()))?;
            SparseGraph::from_entries(n, directed, raw.into_iter().map(|(a, b)| (a as usize, b as usize)))
        }
        IdMode::Compact => {
            let mut index = std::collections::HashMap::new();
            let mut labels = Vec::new();
            let mut id = |raw_id: u64| {
                *index.entry(raw_id).or_insert_with(|| {
                    labels.push(raw_id);
                    labels.len() - 1
                })
            };
            let entries: Vec<(usize, usize)> = raw.into_iter().map(|(a, b)| (id(a), id(b))).collect();
            let (g, dups) = SparseGraph::from_entries(labels.len(), directed, entries)?;
            Ok((g.with_labels(labels)?, dups))
        }
    }
}

fn parse_matrix_market(source: impl BufRead, directed: bool) -> Result<(SparseGraph, usize)> {
    let mut lines = source.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty input".into(),
    })?;
    let header = header?.to_ascii_lowercase();
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() < 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" || tokens[2] != "coordinate" {
        return Err(Error::Parse {
            line: 1,
            msg: "expected '%%MatrixMarket matrix coordinate <field> <symmetry>'".into(),
        });
    }
    let field = tokens[3];
    if !matches!(field, "pattern" | "integer" | "real") {
        return Err(Error::Parse {
            line: 1,
            msg: format!("unsupported field {field:?}"),
        });
    }
    let symmetric = match tokens[4] {
        "general" => false,
        "symmetric" => true,
        other => {
            return Err(Error::Parse {
                line: 1,
                msg: format!("unsupported symmetry {other:?}"),
            })
        }
    };

    let mut size: Option<(usize, usize)> = None;
    let mut entries = Vec::new();
    for (lineno, line) in lines {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let bad = |msg: String| Error::Parse { line: lineno + 1, msg };
        let nums: Vec<&str> = t.split_whitespace().collect();
        match size {
            None => {
                if nums.len() != 3 {
                    return Err(bad("size line must be 'rows cols entries'".into()));
                }
                let parse = |s: &str| s.parse::<usize>().map_err(|_| bad(format!("invalid integer {s:?}")));
                let (rows, cols) = (parse(nums[0])?, parse(nums[1])?);
                parse(nums[2])?;
                if rows != cols {
                    return Err(Error::Dimension(format!(
                        "adjacency matrix must be square, header says {rows}x{cols}"
                    )));
                }
                if rows == 0 {
                    return Err(Error::Dimension("matrix has order 0".into()));
                }
                size = Some((rows, cols));
            }
            Some((rows, _)) => {
                let want = if field == "pattern" { 2 } else { 3 };
                if nums.len() < want {
                    return Err(bad(format!("expected {want} fields, found {}", nums.len())));
                }
                let idx = |s: &str| -> Result<usize> {
                    let v = s.parse::<usize>().map_err(|_| bad(format!("invalid index {s:?}")))?;
                    if v == 0 || v > rows {
                        return Err(bad(format!("index {v} outside 1..={rows}")));
                    }
                    Ok(v - 1)
                };
                let (i, j) = (idx(nums[0])?, idx(nums[1])?);
                if want == 3 {
                    nums[2].parse::<f64>().map_err(|_| bad(format!("invalid value {:?}", nums[2])))?;
                }
                entries.push((i, j));
            }
        }
    }
    let (n, _) = size.ok_or(Error::Parse {
        line: 1,
        msg: "missing size line".into(),
    })?;
    if entries.is_empty() {
        return Err(Error::NoEdges);
    }
    let undirected = symmetric || !directed;
    let (g, dups) = SparseGraph::from_entries(n, !undirected, entries)?;
    let labels = (1..=n as u64).collect();
    Ok((g.with_labels(labels)?, dups))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::SampleKind;
    use proptest::prelude::*;

    fn el(s: &str, directed: bool) -> Result<SparseGraph> {
        parse_edge_list(s.as_bytes(), EdgeFormat::EdgeList, directed)
    }

    #[test]
    fn parses_small_directed_edge_list() {
        let g = el("0 1\n1 2\n", true).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.column(1), &[0]);
        assert_eq!(g.column(2), &[1]);
        g.validate().unwrap();
    }

    #[test]
    fn undirected_edges_are_mirrored_and_comments_skipped() {
        let g = el("# header\n% other\n0 1\n\n1 2\n2 1\n", false).unwrap();
        assert_eq!(g.edge_count(), 4);
        assert!(g.is_symmetric());
        let (_, stats) = parse_with_stats("0 1\n1 0\n0 1\n".as_bytes(), EdgeFormat::EdgeList, false, IdMode::Raw).unwrap();
        assert_eq!(stats.duplicates, 4);
    }

    #[test]
    fn reports_line_numbers_and_empty_input() {
        match el("0 1\n1 x\n", true) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(el("0\n", true), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(el("# only comments\n", true), Err(Error::NoEdges)));
    }

    #[test]
    fn compact_ids_keep_labels() {
        let (g, _) = parse_with_stats("100 7\n7 35\n".as_bytes(), EdgeFormat::EdgeList, true, IdMode::Compact).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.labels(), &[100, 7, 35]);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2));
    }

    #[test]
    fn matrix_market_symmetric_and_general() {
        let src = "%%MatrixMarket matrix coordinate pattern symmetric\n% c\n3 3 3\n2 1\n3 2\n3 3\n";
        let (g, stats) = parse_with_stats(src.as_bytes(), EdgeFormat::MatrixMarketPattern, true, IdMode::Raw).unwrap();
        assert!(!g.is_directed());
        assert_eq!(g.edge_count(), 5);
        assert_eq!(stats.self_loops, 1);
        assert_eq!(g.label(0), 1);

        let src = "%%MatrixMarket matrix coordinate real general\n2 2 1\n1 2 3.5\n";
        let g = parse_edge_list(src.as_bytes(), EdgeFormat::MatrixMarketPattern, true).unwrap();
        assert!(g.is_directed());
        assert!(g.has_edge(0, 1) && !g.has_edge(1, 0));
    }

    #[test]
    fn matrix_market_errors() {
        let fmt = EdgeFormat::MatrixMarketPattern;
        let nonsquare = "%%MatrixMarket matrix coordinate pattern general\n2 3 1\n1 2\n";
        assert!(matches!(parse_edge_list(nonsquare.as_bytes(), fmt, true), Err(Error::Dimension(_))));
        let empty = "%%MatrixMarket matrix coordinate pattern general\n2 2 0\n";
        assert!(matches!(parse_edge_list(empty.as_bytes(), fmt, true), Err(Error::NoEdges)));
        let out_of_range = "%%MatrixMarket matrix coordinate pattern general\n2 2 1\n3 1\n";
        assert!(matches!(
            parse_edge_list(out_of_range.as_bytes(), fmt, true),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn self_loop_removal() {
        let g = el("0 0\n0 1\n2 2\n", true).unwrap();
        let (h, removed) = g.remove_self_loops();
        assert_eq!(removed, 2);
        assert_eq!(h.edge_count(), 1);
        assert_eq!(h.self_loop_count(), 0);
        let (same, none) = h.remove_self_loops();
        assert_eq!(none, 0);
        assert_eq!(same, h);
    }

    #[test]
    fn transpose_examples() {
        let g = el("0 1\n", true).unwrap();
        let t = g.transpose();
        assert!(t.has_edge(1, 0) && !t.has_edge(0, 1));

        let cyc = el("0 1\n1 2\n2 0\n", true).unwrap();
        let rev = el("0 2\n2 1\n1 0\n", true).unwrap();
        assert_eq!(cyc.transpose(), rev);

        let u = el("0 1\n1 2\n", false).unwrap();
        assert_eq!(u.transpose(), u);
    }

    #[test]
    fn masked_matvec_examples() {
        let g = el("0 1\n1 2\n2 0\n", true).unwrap();
        let empty = SampleSet::from_indices(SampleKind::Column, 3, vec![]).unwrap();
        assert_eq!(g.masked_matvec(&empty, &[1.0, 2.0, 3.0]).unwrap(), vec![0.0; 3]);

        let e = el("0 1\n", true).unwrap();
        let mask = SampleSet::from_indices(SampleKind::Column, 2, vec![1]).unwrap();
        assert_eq!(e.masked_matvec(&mask, &[0.0, 1.0]).unwrap(), vec![1.0, 0.0]);
        assert!(matches!(e.masked_matvec(&mask, &[1.0]), Err(Error::Dimension(_))));
    }

    fn arb_graph() -> impl Strategy<Value = (usize, bool, Vec<(usize, usize)>)> {
        (1usize..25, any::<bool>()).prop_flat_map(|(n, directed)| (Just(n), Just(directed), proptest::collection::vec((0..n, 0..n), 1..80)))
    }

    proptest! {
        #[test]
        fn stores_are_consistent_and_round_trip((n, directed, edges) in arb_graph()) {
            let (g, _) = SparseGraph::from_entries(n, directed, edges.clone()).unwrap();
            g.validate().unwrap();
            for &(i, j) in &edges {
                prop_assert!(g.has_edge(i, j));
                if !directed { prop_assert!(g.has_edge(j, i)); }
            }
            let text = g.to_edge_list();
            let h = parse_edge_list(text.as_bytes(), EdgeFormat::EdgeList, directed).unwrap();
            prop_assert_eq!(g.entries().collect::<Vec<_>>(), h.entries().collect::<Vec<_>>());
            prop_assert_eq!(g.transpose().transpose(), g);
        }

        #[test]
        fn full_mask_matches_dense_product((n, directed, edges) in arb_graph(), seed in any::<u64>()) {
            use rand::Rng;
            let (g, _) = SparseGraph::from_entries(n, directed, edges).unwrap();
            let mut rng = crate::rng::stream(seed, crate::rng::Stream::KrylovProbe);
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let all = SampleSet::from_indices(SampleKind::Column, n, (0..n).collect()).unwrap();
            let y = g.masked_matvec(&all, &x).unwrap();
            let dense = g.to_dense() * nalgebra::DVector::from_vec(x.clone());
            for i in 0..n {
                prop_assert!((y[i] - dense[i]).abs() <= 1e-12 * (1.0 + dense[i].abs()));
            }
            prop_assert_eq!(y, g.matvec(&x).unwrap());
        }
    }
}
