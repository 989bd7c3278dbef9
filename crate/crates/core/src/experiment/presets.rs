//! Figure presets. Each figure has a full-size variant and a `-desk` variant
//! sized for a workstation; sub-runs land in `<out>/<label>/`.

use std::path::PathBuf;

use super::config::{ExperimentConfig, Mode};
use crate::error::{Error, Result};
use crate::model::{FieldKind, Picture};

#[derive(Clone, Debug)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    /// `(label, config)`; `config.out` is the label, relative to the caller's output root.
    pub runs: Vec<(String, ExperimentConfig)>,
}

const NAMES: [(&str, &str); 14] = [
    ("fig1a", "pure-state S_0.5 and S_1, n=50, h=5, delta 0 and 0.5, 100 realizations"),
    ("fig1a-desk", "pure-state entropies, n=20, h=5, delta 0 and 0.5, 10 realizations, t<=50"),
    ("fig1b", "operator-space entropies of s^z, n=50, h=5, delta 0.5 (21 realizations) and 0 (1000)"),
    ("fig1b-desk", "operator-space entropies, n=20, h=5, delta 0 and 0.5, 10 realizations, t<=50"),
    ("fig1-inset", "random h=5 against staggered 5/sqrt(3) field, delta 0.5, n=50"),
    ("fig1-inset-desk", "random against staggered field, delta 0.5, n=20, 10 realizations, t<=50"),
    ("fig2", "D_eps(t) for pure states and operators, n=50, delta 0.5, h=5, one realization"),
    ("fig2-desk", "D_eps(t), n=20, eps in {1e-3,1e-4,1e-5}, one realization, t<=30"),
    ("fig3", "S_0.5 growth for n in {6,10,30,50}, delta 0.5, h=5, 100 realizations"),
    ("fig3-desk", "S_0.5 growth for n in {6,10,14,20}, 10 realizations, t<=50"),
    ("fig4", "free-fermion C(r,t), n=500, h=1, 1000 realizations"),
    ("fig4-desk", "free-fermion C(r,t), n=200, h=1, 100 realizations, t<=50"),
    ("fig5", "C(r,t) from operator evolution, n=50, delta 0.5, h=5, D=64, 21 realizations"),
    ("fig5-desk", "C(r,t), n=24, delta 0.5, h=5, D=64, 5 realizations, t<=20"),
];

pub fn preset_names() -> Vec<(&'static str, &'static str)> {
    NAMES.to_vec()
}

fn base(mode: Mode, n: usize, delta: f64, h: f64, realizations: usize, t_max: f64) -> ExperimentConfig {
    ExperimentConfig { mode, n, delta, h, realizations, t_max, ..Default::default() }
}

fn labelled(runs: Vec<(String, ExperimentConfig)>) -> Vec<(String, ExperimentConfig)> {
    runs.into_iter()
        .map(|(label, mut c)| {
            c.out = PathBuf::from(&label);
            (label, c)
        })
        .collect()
}

fn delta_label(delta: f64) -> String {
    format!("delta_{delta}")
}

pub fn preset(name: &str) -> Result<Preset> {
    let description = NAMES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, d)| *d)
        .ok_or_else(|| Error::invalid(format!("unknown preset '{name}'")))?;
    let (name, _) = NAMES.iter().find(|(n, _)| *n == name).copied().expect("checked above");
    let runs = match name {
        "fig1a" | "fig1a-desk" => {
            let desk = name.ends_with("desk");
            [0.0, 0.5]
                .into_iter()
                .map(|delta| {
                    let c = if desk {
                        base(Mode::Pure, 20, delta, 5.0, 10, 50.0)
                    } else {
                        ExperimentConfig { max_d: 128, ..base(Mode::Pure, 50, delta, 5.0, 100, 100.0) }
                    };
                    (delta_label(delta), c)
                })
                .collect()
        }
        "fig1b" | "fig1b-desk" => {
            let desk = name.ends_with("desk");
            [0.0, 0.5]
                .into_iter()
                .map(|delta| {
                    let c = if desk {
                        base(Mode::Operator, 20, delta, 5.0, 10, 50.0)
                    } else {
                        let realizations = if delta == 0.0 { 1000 } else { 21 };
                        base(Mode::Operator, 50, delta, 5.0, realizations, 100.0)
                    };
                    (delta_label(delta), c)
                })
                .collect()
        }
        "fig1-inset" | "fig1-inset-desk" => {
            let desk = name.ends_with("desk");
            [FieldKind::Random, FieldKind::Staggered]
                .into_iter()
                .map(|field| {
                    let c = if desk {
                        base(Mode::Pure, 20, 0.5, 5.0, 10, 50.0)
                    } else {
                        ExperimentConfig { max_d: 128, ..base(Mode::Pure, 50, 0.5, 5.0, 100, 100.0) }
                    };
                    (format!("field_{field}"), ExperimentConfig { field, ..c })
                })
                .collect()
        }
        "fig2" | "fig2-desk" => {
            let desk = name.ends_with("desk");
            let epsilons: &[f64] = if desk { &[1e-3, 1e-4, 1e-5] } else { &[1e-2, 1e-3, 1e-4, 1e-5] };
            let mut runs = Vec::new();
            for picture in [Picture::State, Picture::Heisenberg] {
                for &epsilon in epsilons {
                    let (n, t_max) = if desk { (20, 30.0) } else { (50, 50.0) };
                    let c = ExperimentConfig {
                        epsilon,
                        picture,
                        hard_cap: if desk { 512 } else { 1024 },
                        ..base(Mode::DEpsilon, n, 0.5, 5.0, 1, t_max)
                    };
                    runs.push((format!("{picture}_eps_{epsilon:e}"), c));
                }
            }
            runs
        }
        "fig3" | "fig3-desk" => {
            let desk = name.ends_with("desk");
            let sizes: &[usize] = if desk { &[6, 10, 14, 20] } else { &[6, 10, 30, 50] };
            sizes
                .iter()
                .map(|&n| {
                    let c = if desk {
                        base(Mode::Pure, n, 0.5, 5.0, 10, 50.0)
                    } else {
                        ExperimentConfig { max_d: 128, ..base(Mode::Pure, n, 0.5, 5.0, 100, 100.0) }
                    };
                    (format!("n_{n}"), c)
                })
                .collect()
        }
        "fig4" => vec![(
            "ff".to_string(),
            ExperimentConfig { sample_every: 200, ..base(Mode::FfCorrelation, 500, 0.0, 1.0, 1000, 1000.0) },
        )],
        "fig4-desk" => vec![("ff".to_string(), base(Mode::FfCorrelation, 200, 0.0, 1.0, 100, 50.0))],
        "fig5" => vec![(
            "correlation".to_string(),
            ExperimentConfig { max_d: 64, ..base(Mode::Correlation, 50, 0.5, 5.0, 21, 100.0) },
        )],
        "fig5-desk" => vec![(
            "correlation".to_string(),
            ExperimentConfig { max_d: 64, ..base(Mode::Correlation, 24, 0.5, 5.0, 5, 20.0) },
        )],
        _ => unreachable!("names are listed in NAMES"),
    };
    Ok(Preset { name, description, runs: labelled(runs) })
}
