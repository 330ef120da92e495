use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::realize::{realize_modes, SubspaceFactorization};
use crate::modal_metrics::mac;
use crate::oma_freq::IdentifiedMode;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StabilityTolerances {
    /// Relative frequency change allowed between consecutive orders.
    pub frequency: f64,
    /// Absolute damping-ratio change allowed between consecutive orders.
    pub damping: f64,
    /// Minimum MAC against the matched pole of the previous order.
    pub mac: f64,
    /// Stable poles a cluster needs before it is reported as a mode.
    pub min_stable_poles: usize,
}

impl Default for StabilityTolerances {
    fn default() -> Self {
        StabilityTolerances {
            frequency: 0.01,
            damping: 0.05,
            mac: 0.95,
            min_stable_poles: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagramPole {
    pub order: usize,
    pub frequency: f64,
    pub damping: f64,
    pub shape: Vec<f64>,
    pub stable_frequency: bool,
    pub stable_damping: bool,
    pub stable_mac: bool,
    /// MAC against the nearest pole of the previous order, if there is one.
    pub mac_to_previous: Option<f64>,
}

impl DiagramPole {
    pub fn is_stable(&self) -> bool {
        self.stable_frequency && self.stable_damping && self.stable_mac
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StabilizationDiagram {
    /// Effective orders in ascending order.
    pub orders: Vec<usize>,
    pub poles: Vec<DiagramPole>,
    pub diagnostics: Vec<String>,
}

impl StabilizationDiagram {
    /// CSV with header `order,frequency_hz,damping,stable_f,stable_d,stable_mac`.
    pub fn write_csv<W: Write>(&self, mut writer: W) -> Result<()> {
        writeln!(writer, "order,frequency_hz,damping,stable_f,stable_d,stable_mac")?;
        for p in &self.poles {
            writeln!(
                writer,
                "{},{},{},{},{},{}",
                p.order,
                p.frequency,
                p.damping,
                u8::from(p.stable_frequency),
                u8::from(p.stable_damping),
                u8::from(p.stable_mac)
            )?;
        }
        Ok(())
    }

    pub fn write_csv_file(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_csv(std::io::BufWriter::new(std::fs::File::create(path)?))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stabilization {
    pub diagram: StabilizationDiagram,
    /// One mode per accepted cluster, ascending in frequency.
    pub modes: Vec<IdentifiedMode>,
}

/// Realize every order, flag poles against the previous order and turn
/// clusters of stable poles into modes.
pub fn stabilize(
    factorization: &SubspaceFactorization,
    orders: &[usize],
    dt: f64,
    tolerances: &StabilityTolerances,
) -> Result<Stabilization> {
    let mut diagnostics = Vec::new();
    let limit = factorization.n_channels * factorization.block_rows;
    let mut requested: Vec<usize> = orders.to_vec();
    requested.sort_unstable();
    requested.dedup();
    let (feasible, dropped): (Vec<usize>, Vec<usize>) = requested.into_iter().partition(|&n| n <= limit);
    if !dropped.is_empty() {
        diagnostics.push(format!(
            "orders {:?} exceed {limit} (block rows x channels) and were skipped",
            dropped
        ));
    }

    let realizations = feasible
        .par_iter()
        .map(|&n| realize_modes(factorization, n, dt))
        .collect::<Result<Vec<_>>>()?;

    let mut diagram = StabilizationDiagram::default();
    let mut previous: Option<Vec<DiagramPole>> = None;
    for real in realizations {
        diagnostics.extend(real.diagnostics.iter().cloned());
        if diagram.orders.last() == Some(&real.order) || real.order == 0 {
            // rank truncation collapsed this order onto the previous one
            continue;
        }
        diagram.orders.push(real.order);
        let current: Vec<DiagramPole> = real
            .poles
            .into_iter()
            .map(|p| {
                let nearest = previous.as_ref().and_then(|prev| {
                    prev.iter()
                        .min_by(|a, b| (a.frequency - p.frequency).abs().total_cmp(&(b.frequency - p.frequency).abs()))
                });
                let (sf, sd, mac_prev) = match nearest {
                    Some(q) => {
                        let m = mac(&p.shape, &q.shape).unwrap_or(0.0);
                        (
                            (p.frequency - q.frequency).abs() <= tolerances.frequency * q.frequency,
                            (p.damping - q.damping).abs() <= tolerances.damping,
                            Some(m),
                        )
                    }
                    None => (false, false, None),
                };
                DiagramPole {
                    order: real.order,
                    frequency: p.frequency,
                    damping: p.damping,
                    shape: p.shape,
                    stable_frequency: sf,
                    stable_damping: sd,
                    stable_mac: mac_prev.is_some_and(|m| m >= tolerances.mac),
                    mac_to_previous: mac_prev,
                }
            })
            .collect();
        diagram.poles.extend(current.iter().cloned());
        previous = Some(current);
    }
    if diagram.orders.len() < 2 {
        diagnostics.push("fewer than two model orders: stability is undefined, no modes selected".into());
    }
    diagram.diagnostics = diagnostics;
    let modes = select_modes(&diagram, tolerances);
    Ok(Stabilization { diagram, modes })
}

/// Group stable poles whose neighbouring frequencies differ by at most the
/// frequency tolerance; clusters with enough poles become modes.
fn select_modes(diagram: &StabilizationDiagram, tolerances: &StabilityTolerances) -> Vec<IdentifiedMode> {
    let mut stable: Vec<&DiagramPole> = diagram.poles.iter().filter(|p| p.is_stable()).collect();
    stable.sort_by(|a, b| a.frequency.total_cmp(&b.frequency).then(a.order.cmp(&b.order)));
    let mut clusters: Vec<Vec<&DiagramPole>> = Vec::new();
    for p in stable {
        match clusters.last_mut() {
            Some(c) if p.frequency - c.last().unwrap().frequency <= tolerances.frequency * c.last().unwrap().frequency => {
                c.push(p)
            }
            _ => clusters.push(vec![p]),
        }
    }
    clusters
        .into_iter()
        .filter(|c| c.len() >= tolerances.min_stable_poles.max(1))
        .map(|c| {
            let best = c
                .iter()
                .max_by(|a, b| {
                    a.mac_to_previous
                        .unwrap_or(0.0)
                        .total_cmp(&b.mac_to_previous.unwrap_or(0.0))
                        .then(b.order.cmp(&a.order))
                })
                .unwrap();
            IdentifiedMode {
                frequency: median(c.iter().map(|p| p.frequency).collect()),
                shape: best.shape.clone(),
                damping: Some(median(c.iter().map(|p| p.damping).collect())),
                quality: Some(c.len() as f64),
            }
        })
        .collect()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}
