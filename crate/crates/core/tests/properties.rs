use proptest::prelude::*;

use egvqc::encoder::{
    encode_edge, encode_graph, encode_vertex, required_qubits, EncodingConfig, NormMode,
};
use egvqc::experiment::density_task;
use egvqc::graph::{random_graph, stratified_split, Graph, LabeledGraphSet};
use egvqc::pauli::multiply_zstrings;
use egvqc::pca::{spectral_features, FeatureScaler, MatrixKind};
use egvqc::sim::{init_plus_state, AnsatzParams, Entangler, StateVector};
use egvqc::vqc::{forward_eg, train, TrainConfig};

/// Random graph with random positive weights.
fn arb_graph(max_vertices: usize) -> impl Strategy<Value = Graph> {
    (
        2..=max_vertices,
        0.05f64..1.0,
        any::<u64>(),
        proptest::collection::vec(0.1f64..4.0, 0..200),
    )
        .prop_map(|(n, p, seed, weights)| {
            let g = random_graph(n, p, seed).unwrap();
            let edges = g
                .edges()
                .iter()
                .enumerate()
                .map(|(k, &(u, v, w))| (u, v, weights.get(k).copied().unwrap_or(w)))
                .collect();
            Graph::new(n, edges).unwrap()
        })
}

fn arb_nonempty_graph(max_vertices: usize) -> impl Strategy<Value = Graph> {
    arb_graph(max_vertices).prop_filter("needs an edge", |g| g.n_edges() > 0)
}

fn arb_permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((1..=n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #[test]
    fn handshake_lemma(g in arb_graph(30)) {
        let degrees: f64 = g.weighted_degrees().iter().sum();
        prop_assert!((degrees - 2.0 * g.total_weight()).abs() < 1e-9);
    }

    #[test]
    fn graph_json_round_trip(g in arb_graph(20)) {
        let text = serde_json::to_string(&g).unwrap();
        prop_assert_eq!(serde_json::from_str::<Graph>(&text).unwrap(), g);
    }

    #[test]
    fn edge_string_is_product_of_vertex_strings(n in 2usize..=6, i in 1usize..64, j in 1usize..64) {
        let max = (1usize << n) - 1;
        let (i, j) = (1 + (i - 1) % max, 1 + (j - 1) % max);
        prop_assume!(i != j);
        let e = encode_edge(i, j, n).unwrap();
        prop_assert_eq!(e, encode_edge(j, i, n).unwrap());
        prop_assert_eq!(e, multiply_zstrings(encode_vertex(i, n).unwrap(), encode_vertex(j, n).unwrap()).unwrap());
    }

    #[test]
    fn term_count_bounded_by_graph_size(g in arb_nonempty_graph(40)) {
        let h = encode_graph(&g, &EncodingConfig::new(required_qubits(g.n_vertices()))).unwrap();
        prop_assert!(h.terms().len() <= g.n_edges() + g.n_vertices());
    }

    #[test]
    fn norm_preserved_by_random_gate_sequences(
        n in 1usize..=6,
        gates in proptest::collection::vec((0u8..3, 0usize..6, 0usize..6, -10.0f64..10.0), 100),
    ) {
        let mut s = StateVector::zero_state(n).unwrap();
        for (kind, a, b, angle) in gates {
            let (a, b) = (a % n, b % n);
            match kind {
                0 => s.apply_ry(a, angle).unwrap(),
                1 => s.apply_hadamard(a).unwrap(),
                _ if a != b => s.apply_cnot(a, b).unwrap(),
                _ => {}
            }
            prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn expectation_is_linear_in_diagonal(
        n in 1usize..=5,
        seed in any::<u64>(),
        layers in 0usize..=3,
        a in -2.0f64..2.0,
        b in -2.0f64..2.0,
        d in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 32),
    ) {
        let dim = 1usize << n;
        let (d1, d2): (Vec<f64>, Vec<f64>) = d.into_iter().take(dim).unzip();
        let mix: Vec<f64> = d1.iter().zip(&d2).map(|(x, y)| a * x + b * y).collect();
        let mut s = init_plus_state(n).unwrap();
        s.apply_ansatz(&AnsatzParams::random(layers, n, seed), Entangler::Ring).unwrap();
        let lhs = s.expectation_diagonal(&mix).unwrap();
        let rhs = a * s.expectation_diagonal(&d1).unwrap() + b * s.expectation_diagonal(&d2).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn forward_eg_is_a_probability(
        g in arb_nonempty_graph(31),
        strict in any::<bool>(),
        seed in any::<u64>(),
        layers in 1usize..=4,
        chain in any::<bool>(),
    ) {
        let mode = if strict { NormMode::Strict } else { NormMode::Exact };
        let n = required_qubits(g.n_vertices());
        let h = encode_graph(&g, &EncodingConfig::new(n).with_norm_mode(mode)).unwrap();
        let entangler = if chain { Entangler::Chain } else { Entangler::Ring };
        let p = forward_eg(&h, &AnsatzParams::random(layers, n, seed), entangler).unwrap();
        prop_assert!((0.0..=1.0).contains(&p), "p = {}", p);
    }

    #[test]
    fn spectral_features_ignore_vertex_order(
        (g, perm) in arb_graph(12).prop_flat_map(|g| {
            let n = g.n_vertices();
            (Just(g), arb_permutation(n))
        }),
        laplacian in any::<bool>(),
    ) {
        let kind = if laplacian { MatrixKind::Laplacian } else { MatrixKind::Adjacency };
        let a = spectral_features(&g, 4, kind).unwrap();
        let b = spectral_features(&g.relabeled(&perm).unwrap(), 4, kind).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-9, "{:?} vs {:?}", a, b);
        }
    }

    #[test]
    fn scaled_features_stay_in_angle_range(
        train_set in proptest::collection::vec(arb_graph(10), 1..6),
        test_set in proptest::collection::vec(arb_graph(14), 1..6),
    ) {
        let raw: Vec<Vec<f64>> = train_set
            .iter()
            .map(|g| spectral_features(g, 3, MatrixKind::Adjacency).unwrap())
            .collect();
        let scaler = FeatureScaler::fit(raw.iter().map(Vec::as_slice));
        if scaler.max_value > 0.0 {
            let top = raw
                .iter()
                .flat_map(|f| scaler.apply(f).values)
                .fold(0.0, f64::max);
            prop_assert!((top - std::f64::consts::PI).abs() < 1e-12);
        }
        for g in &test_set {
            let f = scaler.apply(&spectral_features(g, 3, MatrixKind::Adjacency).unwrap());
            prop_assert!(f.values.iter().all(|v| (0.0..=std::f64::consts::PI).contains(v)));
        }
    }

    #[test]
    fn stratified_split_keeps_class_proportions(
        sizes in proptest::collection::vec(2usize..30, 2..5),
        fraction in 0.05f64..0.95,
        seed in any::<u64>(),
    ) {
        let labels: Vec<usize> = sizes.iter().enumerate().flat_map(|(c, &k)| std::iter::repeat_n(c, k)).collect();
        let graphs = vec![random_graph(3, 1.0, 0).unwrap(); labels.len()];
        let ds = LabeledGraphSet::new("split", graphs, labels, sizes.len()).unwrap();
        let (train_set, test_set) = stratified_split(&ds, fraction, seed).unwrap();
        prop_assert_eq!(train_set.len() + test_set.len(), ds.len());
        for (c, &size) in sizes.iter().enumerate() {
            let on_test = test_set.class_sizes()[c] as f64;
            prop_assert!((on_test - size as f64 * fraction).abs() <= 1.0);
            prop_assert!(train_set.class_sizes()[c] >= 1);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn training_is_a_pure_function_of_seed(seed in any::<u64>(), layers in 1usize..=3) {
        let ds = density_task(1).unwrap();
        let cfg = TrainConfig { seed, layers, epochs: 3, ..TrainConfig::default() };
        let a = train(&ds, &cfg).unwrap();
        let b = train(&ds, &cfg).unwrap();
        prop_assert_eq!(a.deterministic_json(), b.deterministic_json());
    }
}
