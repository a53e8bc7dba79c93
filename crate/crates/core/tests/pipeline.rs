use sampled_centrality::generate::{generate, GeneratorSpec};
use sampled_centrality::graph::parse_edge_list;
use sampled_centrality::matfun::krylov::{arnoldi, lanczos, ArrowMasked, ColumnMasked, KrylovOptions};
use sampled_centrality::matfun::{direct_core_evaluation, evaluate_masked_function, transpose_measures};
use sampled_centrality::oracle::{dense_left_perron, dense_matfun, krylov_full_matfun};
use sampled_centrality::perron::{left_perron, symmetric_perron};
use sampled_centrality::sampling::{sample_columns, sample_rows};
use sampled_centrality::*;

fn gen(s: &str) -> SparseGraph {
    generate(&s.parse::<GeneratorSpec>().unwrap()).unwrap()
}

fn max_rel(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / scale
}

#[test]
fn full_sample_matches_dense_exponential() {
    let f = ScalarFunction::exp_minus_one(1.0).unwrap();
    for seed in 0..5 {
        let g = gen(&format!("er:n=50,p=0.08,seed={seed}"));
        let all = SampleSet::all(SampleKind::Column, g.n());
        let r = evaluate_masked_function(&g, &all, &f, seed, &Tolerances::default()).unwrap();
        let e = dense_matfun(&g.to_dense(), &f).unwrap();
        let diag: Vec<f64> = (0..g.n()).map(|i| e[(i, i)]).collect();
        let rows: Vec<f64> = (0..g.n()).map(|i| e.row(i).sum()).collect();
        assert!(max_rel(&r.diag, &diag) < 1e-8, "seed {seed} {:?}", r.method);
        assert!(max_rel(&r.rowsum, &rows) < 1e-8);
    }
}

#[test]
fn krylov_and_direct_core_agree_on_random_digraphs() {
    let f = ScalarFunction::exp_minus_one(0.5).unwrap();
    let tol = Tolerances::default();
    let mut spectral_runs = 0;
    for seed in 0..10 {
        let g = gen(&format!("er:n=40,p=0.1,seed={seed}"));
        let j = sample_columns(&g, 15, seed, Strategy::Guided).unwrap();
        let k = evaluate_masked_function(&g, &j, &f, seed, &tol).unwrap();
        let d = direct_core_evaluation(&g, &j, &f, &tol).unwrap();
        if k.method == Method::KrylovSpectral && k.condition_estimate <= 1e6 {
            spectral_runs += 1;
        }
        assert!(max_rel(&k.diag, &d.diag) < 1e-8, "seed {seed}");
        assert!(max_rel(&k.rowsum, &d.rowsum) < 1e-8, "seed {seed}");
        let ind = j.indicator();
        assert!(k.diag.iter().enumerate().all(|(i, &x)| ind[i] || x == 0.0));
    }
    assert!(spectral_runs > 0);
}

#[test]
fn arnoldi_breaks_down_within_rank_bound() {
    let g = gen("er:n=60,p=0.1,seed=7");
    let j = sample_columns(&g, 20, 7, Strategy::Random).unwrap();
    let d = arnoldi(&g, &j, 3, &KrylovOptions::default()).unwrap();
    assert!(d.breakdown);
    assert!(d.steps <= 21, "{} steps", d.steps);
    assert!(d.orthogonality_error() <= 1e-10);
    assert!(d.invariance_residual(&ColumnMasked::new(&g, &j)) <= 1e-10);
}

#[test]
fn lanczos_on_arrow_mask_is_invariant() {
    let g = gen("er:n=60,p=0.1,directed=false,seed=8");
    let j = sample_columns(&g, 10, 8, Strategy::Guided).unwrap();
    let d = lanczos(&g, &j, 1, &KrylovOptions::default()).unwrap();
    assert!(d.breakdown);
    assert!(d.orthogonality_error() <= 1e-10);
    assert!(d.invariance_residual(&ArrowMasked::new(&g, &j)) <= 1e-10);
}

#[test]
fn katz_row_sums_satisfy_the_resolvent_identity() {
    let g = gen("er:n=50,p=0.1,seed=2");
    let all = SampleSet::all(SampleKind::Column, g.n());
    let rho = dense_left_perron(&g, 1e-12, 100_000).unwrap().eigenvalue_estimate;
    let gamma = 0.5 / rho;
    let f = ScalarFunction::resolvent_minus_one(gamma).unwrap();
    let r = evaluate_masked_function(&g, &all, &f, 0, &Tolerances::default()).unwrap();
    // (I − γA)(r + 1) = 1
    let a_r = g.matvec(&r.rowsum).unwrap();
    let a_1 = g.matvec(&vec![1.0; g.n()]).unwrap();
    for i in 0..g.n() {
        assert!((r.rowsum[i] - gamma * (a_r[i] + a_1[i])).abs() < 1e-8);
    }
}

#[test]
fn dag_exponential_is_a_finite_series() {
    let edges: String = (0..4).map(|i| format!("{i} {}\n", i + 1)).collect();
    let g = parse_edge_list(edges.as_bytes(), EdgeFormat::EdgeList, true).unwrap();
    let all = SampleSet::all(SampleKind::Column, 5);
    let f = ScalarFunction::exp_minus_one(1.0).unwrap();
    let r = evaluate_masked_function(&g, &all, &f, 0, &Tolerances::default()).unwrap();
    let fact = [1.0, 1.0, 2.0, 6.0, 24.0];
    for i in 0..5 {
        let expect: f64 = (1..5 - i).map(|k| 1.0 / fact[k]).sum();
        assert!(r.diag[i].abs() < 1e-12);
        assert!((r.rowsum[i] - expect).abs() < 1e-12, "{i}: {} vs {expect}", r.rowsum[i]);
    }
}

#[test]
fn transpose_measures_match_dense_columns() {
    let g = gen("er:n=30,p=0.15,seed=5");
    let f = ScalarFunction::exp_minus_one(1.0).unwrap();
    let rows = SampleSet::all(SampleKind::Row, g.n());
    let r = transpose_measures(&g, &rows, &f, 1, &Tolerances::default()).unwrap();
    let e = dense_matfun(&g.to_dense(), &f).unwrap();
    let colsum: Vec<f64> = (0..g.n()).map(|j| e.column(j).sum()).collect();
    assert!(max_rel(&r.rowsum, &colsum) < 1e-8);
}

#[test]
fn full_krylov_error_decreases_with_k() {
    let f = ScalarFunction::exp_minus_one(1.0).unwrap();
    for seed in 0..10 {
        let g = gen(&format!("er:n=100,p=0.05,directed=false,seed={seed}"));
        let e = dense_matfun(&g.to_dense(), &f).unwrap();
        let exact: Vec<f64> = (0..g.n()).map(|i| e.row(i).sum()).collect();
        let err = |k| max_rel(&krylov_full_matfun(&g, k, &f, seed).unwrap().rowsum, &exact);
        let errs: Vec<f64> = [5, 20, 60, 100].into_iter().map(err).collect();
        assert!(errs.windows(2).all(|w| w[1] <= w[0] + 1e-12), "seed {seed}: {errs:?}");
        assert!(errs[3] < 1e-8);
    }
}

#[test]
fn full_sample_perron_matches_oracle_on_strongly_connected_digraphs() {
    for seed in 0..5 {
        // A directed cycle through every node keeps the graph strongly connected.
        let er = gen(&format!("er:n=80,p=0.05,seed={seed}"));
        let n = er.n();
        let mut entries: Vec<(usize, usize)> = er.entries().collect();
        entries.extend((0..n).map(|i| (i, (i + 1) % n)));
        let g = SparseGraph::from_entries(n, true, entries).unwrap().0;
        let oracle = dense_left_perron(&g, 1e-12, 100_000).unwrap();
        assert!(oracle.converged);
        let c = SampleSet::all(SampleKind::Column, n);
        let r = SampleSet::all(SampleKind::Row, n);
        let p = left_perron(
            &g,
            &c,
            &r,
            &PerronConfig {
                epsilon: 1e-9,
                ..Default::default()
            },
        )
        .unwrap();
        let cos: f64 = p.vector.iter().zip(&oracle.vector).map(|(a, b)| a * b).sum();
        assert!(cos >= 1.0 - 1e-8, "seed {seed}: {cos}");
    }
}

#[test]
fn sampled_perron_runs_on_guided_samples() {
    let g = gen("pa:n=300,m=3,seed=1");
    let c = sample_columns(&g, 60, 1, Strategy::Guided).unwrap();
    let r = sample_rows(&g, 60, 1, Strategy::Guided).unwrap();
    let p = left_perron(&g, &c, &r, &PerronConfig::default()).unwrap();
    assert!(p.vector.iter().all(|&x| x >= 0.0));
    assert!((p.vector.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
    let s = symmetric_perron(&g, &c, &PerronConfig::default()).unwrap();
    assert!(s.eigenvalue_estimate > 0.0);
}
