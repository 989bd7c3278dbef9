mod common;

use common::{embed, max_dev, pauli_string, propagator, random_state, to_na, CMat};
use nalgebra::DVector;
use num_complex::Complex64;
use xxz_mbl::kernel::TruncationPolicy;
use xxz_mbl::model::{bond_hamiltonian, build_schedule, DisorderRealization, FieldKind, ModelParams, Picture};
use xxz_mbl::mps::{MatrixProductChain, TruncationLedger};
use xxz_mbl::oracles::{dense_hamiltonian, DenseState, ExactXxz, FreeFermionChain};

fn instance(n: usize, delta: f64, seed: u64) -> (ModelParams<f64>, DisorderRealization<f64>) {
    let p = ModelParams::new(n, delta, 5.0, FieldKind::Random, 0.05).unwrap();
    let r = DisorderRealization::for_params(&p, seed).unwrap();
    (p, r)
}

/// `Σ_j (S^x S^x + S^y S^y + Δ S^z S^z)_{j,j+1} + Σ_j h_j S^z_j` from Pauli strings.
fn pauli_hamiltonian(n: usize, delta: f64, fields: &[f64]) -> CMat {
    let dim = 1 << n;
    let mut h = CMat::zeros(dim, dim);
    let string = |ops: &[(usize, usize)]| {
        let mut idx = vec![0; n];
        for &(site, k) in ops {
            idx[site] = k;
        }
        pauli_string(&idx)
    };
    for j in 0..n - 1 {
        for (k, w) in [(1, 0.25), (2, 0.25), (3, 0.25 * delta)] {
            h += string(&[(j, k), (j + 1, k)]) * Complex64::new(w, 0.0);
        }
    }
    for (j, &f) in fields.iter().enumerate() {
        h += string(&[(j, 3)]) * Complex64::new(0.5 * f, 0.0);
    }
    h
}

#[test]
fn bond_terms_sum_to_the_full_hamiltonian() {
    for (n, field) in [(5, FieldKind::Random), (6, FieldKind::Staggered), (2, FieldKind::Random)] {
        let p = ModelParams::new(n, 0.7, 3.0, field, 0.05).unwrap();
        let r = DisorderRealization::for_params(&p, 12).unwrap();
        let mut sum = CMat::zeros(1 << n, 1 << n);
        for b in 0..n - 1 {
            sum += embed(&to_na(&bond_hamiltonian(&p, &r, b).unwrap()), b, n);
        }
        let reference = pauli_hamiltonian(n, 0.7, &r.fields);
        assert!((&sum - &reference).camax() < 1e-14);
        let dense = to_na(&dense_hamiltonian(n, 0.7, &r.fields).unwrap());
        assert!((&dense - &reference).camax() < 1e-14);
    }
}

#[test]
fn one_gate_matches_dense_exponential() {
    let n = 4;
    let (p, r) = instance(n, 0.5, 3);
    let schedule = build_schedule(&p, &r, Picture::State).unwrap();
    let psi = random_state(1 << n, 5);
    for gate in schedule.layers().iter().flatten() {
        let mut chain = MatrixProductChain::from_dense(2, n, &psi).unwrap();
        let scale = chain.scale();
        let mut ledger = TruncationLedger::new();
        gate.apply_to(&mut chain, &TruncationPolicy::exact(), &mut ledger).unwrap();
        let h = to_na(&bond_hamiltonian(&p, &r, gate.bond).unwrap());
        let u = embed(&propagator(&h, gate.duration), gate.bond, n);
        let expected = &u * DVector::from_vec(psi.clone());
        let ours: Vec<Complex64> = chain.to_dense().unwrap().iter().map(|z| z * chain.scale()).collect();
        assert!(max_dev(&ours, expected.as_slice()) < 1e-13, "bond {}", gate.bond);
        assert!((chain.scale() - scale).abs() < 1e-13);
        assert_eq!(ledger.len(), 1);
    }
}

fn one_step_error(n: usize, tau: f64) -> f64 {
    let p = ModelParams::new(n, 0.5, 5.0, FieldKind::Random, tau).unwrap();
    let r = DisorderRealization::for_params(&p, 21).unwrap();
    let schedule = build_schedule(&p, &r, Picture::State).unwrap();
    let psi = random_state(1 << n, 2);
    let mut chain = MatrixProductChain::from_dense(2, n, &psi).unwrap();
    let mut ledger = TruncationLedger::new();
    for gate in schedule.one_step() {
        gate.apply_to(&mut chain, &TruncationPolicy::exact(), &mut ledger).unwrap();
    }
    let ours: Vec<Complex64> = chain.to_dense().unwrap().iter().map(|z| z * chain.scale()).collect();
    let exact = ExactXxz::from_model(&p, &r).unwrap().evolve(&DenseState::new(n, psi).unwrap(), tau).unwrap();
    ours.iter().zip(&exact.amplitudes).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
}

#[test]
fn single_step_error_is_third_order() {
    let errors: Vec<f64> = [0.2, 0.1, 0.05].iter().map(|&tau| one_step_error(6, tau)).collect();
    for w in errors.windows(2) {
        let ratio = w[0] / w[1];
        assert!((ratio - 8.0).abs() < 1.6, "ratio {ratio} from {errors:?}");
    }
}

#[test]
fn heisenberg_step_conjugates_by_the_trotter_product() {
    let n = 4;
    let (p, r) = instance(n, 0.5, 8);
    let state = build_schedule(&p, &r, Picture::State).unwrap();
    let heis = build_schedule(&p, &r, Picture::Heisenberg).unwrap();
    // dense U for one state-picture step: later gates multiply from the left
    let mut u = CMat::identity(1 << n, 1 << n);
    for gate in state.one_step() {
        u = embed(&to_na(&gate.matrix), gate.bond, n) * u;
    }
    let origin = 0;
    let sz = pauli_string(&[3, 0, 0, 0]) * Complex64::new(0.5, 0.0);
    let evolved = u.adjoint() * &sz * &u;

    let mut chain = MatrixProductChain::operator_superket_sz(n, origin).unwrap();
    let mut ledger = TruncationLedger::new();
    for gate in heis.one_step() {
        gate.apply_to(&mut chain, &TruncationPolicy::exact(), &mut ledger).unwrap();
    }
    let coeffs = chain.to_dense().unwrap();
    let mut worst: f64 = 0.0;
    for (idx, c) in coeffs.iter().enumerate() {
        let digits: Vec<usize> = (0..n).map(|k| (idx >> (2 * (n - 1 - k))) & 3).collect();
        let expected = (pauli_string(&digits) * &evolved).trace() / (1 << n) as f64;
        worst = worst.max((c * chain.scale() - expected).norm());
        assert!((c * chain.scale()).im.abs() < 1e-12);
    }
    assert!(worst < 1e-13, "{worst}");
}

#[test]
fn single_magnon_at_zero_anisotropy_follows_the_hopping_propagator() {
    let n = 8;
    let (p, r) = instance(n, 0.0, 5);
    let ed = ExactXxz::from_model(&p, &r).unwrap();
    let ff = FreeFermionChain::new(&r.fields).unwrap();
    let start = 3;
    // one up spin (basis index 0) at `start`, all others down
    let index = |site: usize| ((1usize << n) - 1) ^ (1 << (n - 1 - site));
    let psi0 = DenseState::basis(n, index(start)).unwrap();
    for t in [0.5, 2.0, 7.0] {
        let psi = ed.evolve(&psi0, t).unwrap();
        for k in 0..n {
            let p_ed = psi.amplitudes[index(k)].norm_sqr();
            let p_ff = ff.element(start, k, t).norm_sqr();
            assert!((p_ed - p_ff).abs() < 1e-12, "t {t}, site {k}: {p_ed} vs {p_ff}");
        }
    }
}

#[test]
fn staggered_field_has_matched_rms() {
    let p = ModelParams::new(10, 0.5, 5.0, FieldKind::Staggered, 0.05).unwrap();
    let r = DisorderRealization::for_params(&p, 0).unwrap();
    let rms = (r.fields.iter().map(|h| h * h).sum::<f64>() / 10.0).sqrt();
    // uniform on [-h, h] has RMS h/√3
    assert!((rms - 5.0 / 3f64.sqrt()).abs() < 1e-14);
    assert!(r.fields[0] < 0.0 && r.fields[1] > 0.0);
}
