use proptest::prelude::*;
use xxz_mbl::dynamics::{correlation_origin, correlation_row, default_offsets, measure_d_epsilon, Evolution, DEFAULT_ALPHAS};
use xxz_mbl::experiment::{aggregate_files, run_ensemble, ExperimentConfig, Mode};
use xxz_mbl::kernel::TruncationPolicy;
use xxz_mbl::model::{build_schedule, DisorderRealization, FieldKind, ModelParams, Picture};
use xxz_mbl::mps::{MatrixProductChain, PAULI_I, PAULI_Z};

fn instance(n: usize, delta: f64, h: f64, seed: u64, tau: f64) -> (ModelParams<f64>, DisorderRealization<f64>) {
    let p = ModelParams::new(n, delta, h, FieldKind::Random, tau).unwrap();
    let r = DisorderRealization::for_params(&p, seed).unwrap();
    (p, r)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pure_evolution_invariants(
        n in 4usize..=9,
        delta in 0.0f64..1.0,
        h in 0.0f64..6.0,
        seed in 0u64..1000,
        cap in 2usize..=8,
    ) {
        let (p, r) = instance(n, delta, h, seed, 0.1);
        let s = build_schedule(&p, &r, Picture::State).unwrap();
        let chain = MatrixProductChain::random_product_state(n, seed + 1).unwrap();
        let mut run = Evolution::new(chain, &s, TruncationPolicy::new(cap, 1e-12).unwrap()).unwrap();
        let alphas: Vec<f64> = DEFAULT_ALPHAS.to_vec();
        let mut last_eta = 0.0;
        for _ in 0..15 {
            run.step().unwrap();
            prop_assert!((run.chain().norm_sqr() - 1.0).abs() < 1e-10);
            let rec = run.record(&alphas).unwrap();
            prop_assert!(rec.eta_tot >= last_eta);
            last_eta = rec.eta_tot;
            prop_assert!(rec.max_bond_dim <= cap);
            for e in &rec.entropies {
                prop_assert!(e.max <= (n / 2) as f64 + 1e-9);
                prop_assert!(e.avg <= e.max + 1e-12 && e.avg >= 0.0);
            }
        }
        // ledger additivity: the total is the running sum of per-gate weights
        let ledger = run.ledger();
        let sum = ledger.records().iter().fold(0.0, |acc, g| acc + g.eta);
        prop_assert_eq!(sum, ledger.eta_tot());
        prop_assert_eq!(ledger.len(), 15 * s.gates_per_step());
    }

    #[test]
    fn operator_evolution_conserves_magnetization(
        n in 4usize..=8,
        delta in 0.0f64..1.0,
        h in 0.0f64..6.0,
        seed in 0u64..1000,
        cap in 4usize..=16,
    ) {
        let (p, r) = instance(n, delta, h, seed, 0.1);
        let s = build_schedule(&p, &r, Picture::Heisenberg).unwrap();
        let origin = correlation_origin(n);
        let chain = MatrixProductChain::operator_superket_sz(n, origin).unwrap();
        let mut run = Evolution::new(chain, &s, TruncationPolicy::new(cap, 1e-12).unwrap()).unwrap();
        let offsets = default_offsets(n);
        for _ in 0..10 {
            run.step().unwrap();
            let row = correlation_row(run.chain(), origin, &offsets).unwrap();
            let total: f64 = row.iter().sum();
            // each truncation removes δ with ‖δ‖ = √η·‖O‖, ‖O‖ = 1/2, ‖S^z_tot‖ = √n/2
            let drift: f64 = run.ledger().records().iter().map(|g| g.eta.sqrt()).sum::<f64>() * (n as f64).sqrt() / 4.0;
            prop_assert!((total - 0.25).abs() <= 1e-6 + run.ledger().eta_tot() + drift, "{}", total);
            prop_assert!(row.iter().all(|c| c.abs() <= 0.25 + 1e-12));
            let coeffs = run.chain().single_insertion_coefficients(PAULI_I, PAULI_Z).unwrap();
            let scale = run.chain().scale();
            prop_assert!(coeffs.iter().all(|z| (z.im * scale).abs() < 1e-9));
        }
    }

    #[test]
    fn d_epsilon_is_monotone_and_within_budget(seed in 0u64..1000, eps_exp in 3i32..8) {
        let (p, r) = instance(8, 0.5, 5.0, seed, 0.1);
        let s = build_schedule(&p, &r, Picture::State).unwrap();
        let chain = MatrixProductChain::random_product_state(8, seed).unwrap();
        let eps = 10f64.powi(-eps_exp);
        let curve = measure_d_epsilon(&s, chain, 2.0, eps, 64, 2).unwrap();
        prop_assert!(!curve.truncated);
        prop_assert!(curve.eta_tot <= eps);
        prop_assert!(curve.samples.windows(2).all(|w| w[0].1 <= w[1].1 && w[0].0 < w[1].0));
    }
}

#[test]
fn aggregate_ignores_file_order() {
    let dir = tempfile::tempdir().unwrap();
    let config = ExperimentConfig {
        mode: Mode::Operator,
        n: 6,
        t_max: 0.5,
        sample_every: 2,
        realizations: 5,
        out: dir.path().to_path_buf(),
        ..Default::default()
    };
    let result = run_ensemble(&config).unwrap();
    let mut paths = result.unit_paths();
    let forward = aggregate_files(&paths).unwrap().to_csv();
    paths.reverse();
    paths.swap(0, 2);
    let shuffled = aggregate_files(&paths).unwrap().to_csv();
    assert_eq!(forward, shuffled);
    assert_eq!(std::fs::read_to_string(dir.path().join("aggregate.csv")).unwrap(), forward);
}

#[test]
fn aggregate_stderr_of_unit_noise() {
    use rand::{Rng, SeedableRng};
    use rand_distr::StandardNormal;
    let dir = tempfile::tempdir().unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let mut paths = Vec::new();
    for k in 0..100 {
        let mut text = String::from("t,x\n");
        for t in 0..50 {
            let x: f64 = rng.sample(StandardNormal);
            text.push_str(&format!("{t},{x}\n"));
        }
        let path = dir.path().join(format!("noise_{k:03}.csv"));
        std::fs::write(&path, text).unwrap();
        paths.push(path);
    }
    let agg = aggregate_files(&paths).unwrap();
    let mean_stderr: f64 = agg.stderr.iter().map(|row| row[0]).sum::<f64>() / 50.0;
    assert!((mean_stderr - 0.1).abs() < 0.02, "{mean_stderr}");
    assert_eq!(agg.count, 100);
}
