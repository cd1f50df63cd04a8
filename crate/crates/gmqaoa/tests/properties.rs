use gmqaoa::analytic::{centralizer_dim, predict_commutant, predict_loss_stats};
use gmqaoa::problems::{maxcut_objective, Graph};
use gmqaoa::sim::{run_circuit, ParameterSet};
use gmqaoa::spectrum::{build_spectrum, decompose_initial_state, InitialState, ObjectiveTable, DEFAULT_TOL_ZERO};
use num_complex::Complex64;
use proptest::prelude::*;

fn table() -> impl Strategy<Value = ObjectiveTable> {
    (1usize..=4).prop_flat_map(|n| {
        prop::collection::vec(-3i32..=3, 1 << n)
            .prop_map(move |v| ObjectiveTable::new(n, 2, v.into_iter().map(f64::from).collect()).unwrap())
    })
}

// real amplitudes up to a global phase
fn state(dim: usize) -> impl Strategy<Value = InitialState> {
    (prop::collection::vec(-1.0f64..1.0, dim), 0.0..std::f64::consts::TAU)
        .prop_filter("nonzero", |(v, _)| v.iter().any(|a| a.abs() > 1e-3))
        .prop_map(|(v, t)| {
            let phase = Complex64::from_polar(1.0, t);
            InitialState::normalized(v.into_iter().map(|a| phase * a).collect()).unwrap()
        })
}

fn table_and_state() -> impl Strategy<Value = (ObjectiveTable, InitialState)> {
    table().prop_flat_map(|f| {
        let dim = f.dim();
        (Just(f), state(dim))
    })
}

fn graph() -> impl Strategy<Value = Graph> {
    (2usize..=7).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i + 1, j + 1))).collect();
        prop::sample::subsequence(pairs.clone(), 0..=pairs.len()).prop_map(move |e| Graph::new(n, e).unwrap())
    })
}

proptest! {
    #[test]
    fn overlaps_reconstruct_state((f, xi) in table_and_state()) {
        let s = build_spectrum(&f);
        prop_assert_eq!(s.multiplicities().iter().sum::<usize>(), f.dim());
        let o = decompose_initial_state(&xi, &s, DEFAULT_TOL_ZERO).unwrap();
        let back = o.reconstruct(&s);
        for (a, b) in back.iter().zip(xi.amplitudes()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
        let norm: f64 = o.supported_c().iter().map(|c| c * c).sum();
        prop_assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn commutant_below_centralizer((f, xi) in table_and_state()) {
        let s = build_spectrum(&f);
        let o = decompose_initial_state(&xi, &s, DEFAULT_TOL_ZERO).unwrap();
        let c = predict_commutant(&s, &o).dim;
        prop_assert!(c >= 1 && c <= centralizer_dim(&s) + 1);
        prop_assert!(predict_loss_stats(&s, &o, DEFAULT_TOL_ZERO).loss_variance >= 0.0);
    }

    #[test]
    fn circuit_is_unitary((f, xi) in table_and_state(), seed in any::<u64>(), p in 1usize..=4) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let out = run_circuit(&xi, &f, &ParameterSet::sample(p, &mut rng)).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn maxcut_complement_symmetry(g in graph()) {
        let f = maxcut_objective(&g, 1 << 10).unwrap();
        let mask = f.dim() - 1;
        for x in 0..f.dim() {
            prop_assert_eq!(f.value(x), f.value(x ^ mask));
            prop_assert!(f.value(x) <= g.edge_count() as f64);
        }
    }
}
