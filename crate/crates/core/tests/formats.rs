//! Output formats checked byte-for-byte against hand-written files in `golden/`.

use std::path::Path;

use xxz_mbl::dynamics::{CorrelationGrid, DEpsilonCurve, EntropySample, TrajectoryRecord, ISOLINE_LEVELS};
use xxz_mbl::experiment::{aggregate_tables, Table};
use xxz_mbl::model::{DisorderRealization, FieldKind, ModelParams};

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(path).unwrap()
}

fn sample_grid() -> CorrelationGrid<f64> {
    let mut g = CorrelationGrid::new(1, vec![0.0, 2.0], vec![-1, 0, 1], vec![]);
    g.push_row(vec![0.0, 0.25, 0.0]);
    g.push_row(vec![0.0009765625, 0.1875, -4.76837158203125e-7]);
    g
}

#[test]
fn trajectory_line() {
    let record = TrajectoryRecord {
        time: 1.5,
        entropies: vec![
            EntropySample { alpha: 0.5, max_cut: 2, max: 0.25, avg: 0.125 },
            EntropySample { alpha: 1.0, max_cut: 2, max: 1.0, avg: 0.5 },
        ],
        max_bond_dim: 4,
        eta_tot: 9.094947017729282e-13,
        log_scale: 0.0,
    };
    assert_eq!(record.to_json_line() + "\n", golden("trajectory.jsonl"));
}

#[test]
fn correlation_grid_and_isolines() {
    let g = sample_grid();
    assert_eq!(g.to_csv(), golden("correlation.csv"));
    assert_eq!(g.isolines_csv(&ISOLINE_LEVELS), golden("isolines.csv"));
}

#[test]
fn d_epsilon_curve() {
    let curve = DEpsilonCurve { epsilon: 1e-5, samples: vec![(0.0, 1), (0.5, 2), (1.0, 6)], truncated: false, eta_tot: 0.0 };
    assert_eq!(curve.to_csv(), golden("d_epsilon.csv"));
}

#[test]
fn disorder_line_round_trips() {
    let p = ModelParams::new(3, 0.5, 5.0, FieldKind::Staggered, 0.05).unwrap();
    let r = DisorderRealization::for_params(&p, 7).unwrap();
    let line = r.to_json_line() + "\n";
    assert_eq!(line, golden("disorder.jsonl"));
    let back = DisorderRealization::<f64>::from_json_line(&line).unwrap();
    assert_eq!(back, r);

    let random = ModelParams::new(50, 0.5, 5.0, FieldKind::Random, 0.05).unwrap();
    let r = DisorderRealization::for_params(&random, 123).unwrap();
    assert_eq!(DisorderRealization::<f64>::from_json_line(&r.to_json_line()).unwrap(), r);
}

#[test]
fn aggregate_table() {
    let a = Table::parse("t,r,C\n0,-1,0.5\n0,0,0.25\n", "a").unwrap();
    let b = Table::parse("t,r,C\n0,-1,1.5\n0,0,0.25\n", "b").unwrap();
    let agg = aggregate_tables(&[("a".into(), a), ("b".into(), b)]).unwrap();
    assert_eq!(agg.to_csv(), golden("aggregate.csv"));
}
