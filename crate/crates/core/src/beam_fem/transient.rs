use crate::dsp::MultiChannelRecord;
use crate::{OmaError, Result};

use super::{GlobalSystem, ModalSolution};

/// Exact stepping of `u'' + 2 zeta omega u' + omega^2 u = p(t)` for loads
/// varying linearly within each step (unit modal mass).
#[derive(Debug, Clone, Copy)]
pub struct SdofRecurrence {
    omega: f64,
    zeta: f64,
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    a_v: f64,
    b_v: f64,
    c_v: f64,
    d_v: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SdofState {
    pub displacement: f64,
    pub velocity: f64,
}

impl SdofRecurrence {
    pub fn new(omega: f64, zeta: f64, dt: f64) -> Result<Self> {
        if !(omega > 0.0 && dt > 0.0 && (0.0..1.0).contains(&zeta)) {
            return Err(OmaError::InvalidParameter(format!(
                "SDOF recurrence needs omega > 0, dt > 0, 0 <= zeta < 1 (got {omega}, {dt}, {zeta})"
            )));
        }
        let root = (1.0 - zeta * zeta).sqrt();
        let wd = omega * root;
        let e = (-zeta * omega * dt).exp();
        let (s, c) = (wd * dt).sin_cos();
        let k = omega * omega;
        let zr = zeta / root;
        let two_z_wdt = 2.0 * zeta / (omega * dt);

        let a = e * (zr * s + c);
        let b = e * s / wd;
        let cc = (two_z_wdt
            + e * (((1.0 - 2.0 * zeta * zeta) / (wd * dt) - zr) * s - (1.0 + two_z_wdt) * c))
            / k;
        let d = (1.0 - two_z_wdt + e * ((2.0 * zeta * zeta - 1.0) / (wd * dt) * s + two_z_wdt * c)) / k;
        let a_v = -e * (omega / root) * s;
        let b_v = e * (c - zr * s);
        let c_v = (-1.0 / dt + e * ((omega / root + zeta / (dt * root)) * s + c / dt)) / k;
        let d_v = (1.0 - e * (zr * s + c)) / (k * dt);

        Ok(SdofRecurrence {
            omega,
            zeta,
            a,
            b,
            c: cc,
            d,
            a_v,
            b_v,
            c_v,
            d_v,
        })
    }

    /// Advance one step with load `p_now` at the start and `p_next` at the end.
    pub fn step(&self, state: SdofState, p_now: f64, p_next: f64) -> SdofState {
        SdofState {
            displacement: self.a * state.displacement + self.b * state.velocity + self.c * p_now + self.d * p_next,
            velocity: self.a_v * state.displacement + self.b_v * state.velocity + self.c_v * p_now + self.d_v * p_next,
        }
    }

    /// Acceleration implied by the equation of motion.
    pub fn acceleration(&self, state: SdofState, p: f64) -> f64 {
        p - 2.0 * self.zeta * self.omega * state.velocity - self.omega * self.omega * state.displacement
    }
}

/// Modal coordinates over time, indexed `[mode][sample]`.
#[derive(Debug, Clone)]
pub struct ModalHistory {
    pub dt: f64,
    pub omegas: Vec<f64>,
    pub displacement: Vec<Vec<f64>>,
    pub velocity: Vec<Vec<f64>>,
    pub acceleration: Vec<Vec<f64>>,
}

impl ModalHistory {
    pub fn n_samples(&self) -> usize {
        self.displacement.first().map_or(0, Vec::len)
    }

    /// Kinetic plus strain energy at `sample` (mass-normalized modes).
    pub fn energy(&self, sample: usize) -> f64 {
        self.omegas
            .iter()
            .enumerate()
            .map(|(m, w)| {
                let (u, v) = (self.displacement[m][sample], self.velocity[m][sample]);
                0.5 * (v * v + w * w * u * u)
            })
            .sum()
    }
}

fn check_forces(modal: &ModalSolution, forces: &MultiChannelRecord, dt: f64, n_samples: usize) -> Result<()> {
    if forces.n_channels() != modal.n_channels() {
        return Err(OmaError::InvalidInput(format!(
            "force record has {} channels, model has {} measurement channels",
            forces.n_channels(),
            modal.n_channels()
        )));
    }
    if ((forces.sample_rate() * dt) - 1.0).abs() > 1e-9 {
        return Err(OmaError::InvalidInput(format!(
            "force sample rate {} Hz does not match time step {dt} s",
            forces.sample_rate()
        )));
    }
    if forces.n_samples() < n_samples {
        return Err(OmaError::InvalidInput(format!(
            "force record has {} samples, {n_samples} required",
            forces.n_samples()
        )));
    }
    Ok(())
}

/// Integrate every mode of `modal` under nodal forces applied at the
/// measurement channels. Starts from rest.
pub fn modal_response(
    modal: &ModalSolution,
    forces: &MultiChannelRecord,
    dt: f64,
    n_samples: usize,
) -> Result<ModalHistory> {
    check_forces(modal, forces, dt, n_samples)?;
    let n_modes = modal.n_modes();
    let mut history = ModalHistory {
        dt,
        omegas: (0..n_modes).map(|m| modal.omega(m)).collect(),
        displacement: Vec::with_capacity(n_modes),
        velocity: Vec::with_capacity(n_modes),
        acceleration: Vec::with_capacity(n_modes),
    };
    for mode in 0..n_modes {
        let phi = modal.channel_shape(mode);
        let mut load = vec![0.0; n_samples];
        for (weight, channel) in phi.iter().zip(forces.channels()) {
            for (p, f) in load.iter_mut().zip(channel) {
                *p += weight * f;
            }
        }
        let sdof = SdofRecurrence::new(history.omegas[mode], modal.damping_ratio, dt)?;
        let mut u = Vec::with_capacity(n_samples);
        let mut v = Vec::with_capacity(n_samples);
        let mut acc = Vec::with_capacity(n_samples);
        let mut state = SdofState::default();
        for i in 0..n_samples {
            if i > 0 {
                state = sdof.step(state, load[i - 1], load[i]);
            }
            u.push(state.displacement);
            v.push(state.velocity);
            acc.push(sdof.acceleration(state, load[i]));
        }
        history.displacement.push(u);
        history.velocity.push(v);
        history.acceleration.push(acc);
    }
    Ok(history)
}

/// Absolute vertical accelerations at the measurement channels by modal
/// superposition over all modes in `modal`, `duration / dt + 1` samples.
pub fn transient_response(
    system: &GlobalSystem,
    modal: &ModalSolution,
    forces: &MultiChannelRecord,
    dt: f64,
    duration: f64,
) -> Result<MultiChannelRecord> {
    if !(dt > 0.0 && duration > 0.0) {
        return Err(OmaError::InvalidParameter(format!(
            "time step and duration must be positive (got {dt}, {duration})"
        )));
    }
    if modal.shapes.nrows() != system.n_dofs() || modal.n_channels() != system.n_channels() {
        return Err(OmaError::InvalidInput("modal solution does not belong to this system".into()));
    }
    let n_samples = (duration / dt).round() as usize + 1;
    let history = modal_response(modal, forces, dt, n_samples)?;

    let data: Vec<Vec<f64>> = (0..modal.n_channels())
        .map(|c| {
            let mut out = vec![0.0; n_samples];
            for mode in 0..modal.n_modes() {
                let w = modal.shapes[(modal.channel_dofs[c], mode)];
                for (o, a) in out.iter_mut().zip(&history.acceleration[mode]) {
                    *o += w * a;
                }
            }
            out
        })
        .collect();
    MultiChannelRecord::new(1.0 / dt, system.channel_labels(), data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beam_fem::{assemble_model, modal_analysis, BeamModel, SupportCondition};
    use std::f64::consts::PI;

    // Classical RK4 on the SDOF equation with substeps, linear load interpolation.
    fn rk4_oracle(omega: f64, zeta: f64, dt: f64, load: &[f64], substeps: usize) -> Vec<(f64, f64)> {
        let h = dt / substeps as f64;
        let rhs = |u: f64, v: f64, p: f64| (v, p - 2.0 * zeta * omega * v - omega * omega * u);
        let (mut u, mut v) = (0.0, 0.0);
        let mut out = vec![(u, v)];
        for i in 1..load.len() {
            for s in 0..substeps {
                let t0 = s as f64 / substeps as f64;
                let t1 = (s as f64 + 0.5) / substeps as f64;
                let t2 = (s as f64 + 1.0) / substeps as f64;
                let p = |t: f64| load[i - 1] + (load[i] - load[i - 1]) * t;
                let (k1u, k1v) = rhs(u, v, p(t0));
                let (k2u, k2v) = rhs(u + 0.5 * h * k1u, v + 0.5 * h * k1v, p(t1));
                let (k3u, k3v) = rhs(u + 0.5 * h * k2u, v + 0.5 * h * k2v, p(t1));
                let (k4u, k4v) = rhs(u + h * k3u, v + h * k3v, p(t2));
                u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
                v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
            }
            out.push((u, v));
        }
        out
    }

    #[test]
    fn recurrence_matches_fine_rk4() {
        let (omega, zeta, dt) = (2.0 * PI * 50.0, 0.025, 1e-3);
        let load: Vec<f64> = (0..400).map(|i| ((i as f64) * 0.37).sin() + 0.2 * ((i * 7 % 13) as f64)).collect();
        let sdof = SdofRecurrence::new(omega, zeta, dt).unwrap();
        let oracle = rk4_oracle(omega, zeta, dt, &load, 200);
        let mut state = SdofState::default();
        let scale = oracle.iter().map(|(u, _)| u.abs()).fold(0.0, f64::max);
        let vscale = oracle.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max);
        for i in 1..load.len() {
            state = sdof.step(state, load[i - 1], load[i]);
            assert!((state.displacement - oracle[i].0).abs() < 1e-7 * scale, "step {i}");
            assert!((state.velocity - oracle[i].1).abs() < 1e-7 * vscale, "step {i}");
        }
    }

    #[test]
    fn constant_load_settles_at_static_deflection() {
        let (omega, zeta, dt) = (2.0 * PI * 20.0, 0.05, 1e-3);
        let sdof = SdofRecurrence::new(omega, zeta, dt).unwrap();
        let mut state = SdofState::default();
        for _ in 0..20_000 {
            state = sdof.step(state, 3.0, 3.0);
        }
        assert!((state.displacement - 3.0 / (omega * omega)).abs() < 1e-12);
        assert!(sdof.acceleration(state, 3.0).abs() < 1e-9);
    }

    #[test]
    fn stiff_modes_stay_bounded() {
        // omega dt >> 1 for the highest modes of the beam mesh
        let sdof = SdofRecurrence::new(3.0e5, 0.025, 1e-4).unwrap();
        let mut state = SdofState::default();
        for i in 0..1000 {
            let p = (i as f64 * 0.3).sin();
            state = sdof.step(state, p, ((i + 1) as f64 * 0.3).sin());
            assert!(state.displacement.abs() < 1e-9);
        }
    }

    fn default_case(support: SupportCondition) -> (GlobalSystem, ModalSolution) {
        let sys = assemble_model(&BeamModel::reference(support)).unwrap();
        let modal = modal_analysis(&sys, sys.n_dofs()).unwrap();
        (sys, modal)
    }

    fn forces_from(channels: Vec<Vec<f64>>, rate: f64) -> MultiChannelRecord {
        let labels = (0..channels.len()).map(|c| format!("f{c}")).collect();
        MultiChannelRecord::new(rate, labels, channels).unwrap()
    }

    #[test]
    fn zero_force_gives_zero_response() {
        let (sys, modal) = default_case(SupportCondition::CF);
        let forces = forces_from(vec![vec![0.0; 1001]; 10], 1e4);
        let rec = transient_response(&sys, &modal, &forces, 1e-4, 0.1).unwrap();
        assert_eq!(rec.n_samples(), 1001);
        assert!(rec.channels().iter().flatten().all(|x| *x == 0.0));
    }

    #[test]
    fn channel_mismatch_rejected() {
        let (sys, modal) = default_case(SupportCondition::SS);
        let forces = forces_from(vec![vec![0.0; 101]; 10], 1e4);
        assert!(matches!(
            transient_response(&sys, &modal, &forces, 1e-4, 0.01),
            Err(OmaError::InvalidInput(_))
        ));
    }

    #[test]
    fn resonance_amplification_is_one_over_two_zeta() {
        let (_, modal) = default_case(SupportCondition::SS);
        let dt = 1e-4;
        let n = 60_001;
        let f1 = modal.frequencies[0];
        let node = 4; // mid-span channel (node 6)
        let mut channels = vec![vec![0.0; n]; modal.n_channels()];
        for (i, x) in channels[node].iter_mut().enumerate() {
            *x = (2.0 * PI * f1 * i as f64 * dt).sin();
        }
        let forces = forces_from(channels, 1.0 / dt);
        let hist = modal_response(&modal, &forces, dt, n).unwrap();
        let phi = modal.channel_shape(0)[node];
        let static_response = phi / modal.omega(0).powi(2);
        // transients decay with time constant 1/(zeta omega) ~ 0.28 s; take the last second
        let amp = hist.displacement[0][n - 10_000..].iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let ratio = amp / static_response.abs();
        assert!((ratio - 20.0).abs() / 20.0 < 0.05, "amplification {ratio}");
    }

    #[test]
    fn free_decay_log_decrement_recovers_damping() {
        let (_, modal) = default_case(SupportCondition::CF);
        let dt = 1e-4;
        let n = 30_001;
        let mut channels = vec![vec![0.0; n]; modal.n_channels()];
        channels[9][1] = 1000.0; // short triangular pulse at the tip
        let forces = forces_from(channels, 1.0 / dt);
        let hist = modal_response(&modal, &forces, dt, n).unwrap();
        let q = &hist.displacement[0];
        let peaks: Vec<f64> = (1..n - 1)
            .filter(|&i| q[i] > q[i - 1] && q[i] >= q[i + 1] && q[i] > 0.0)
            .map(|i| q[i])
            .collect();
        assert!(peaks.len() > 10);
        let cycles = 10;
        let delta = (peaks[0] / peaks[cycles]).ln() / cycles as f64;
        let zeta = delta / (4.0 * PI * PI + delta * delta).sqrt();
        assert!((zeta - 0.025).abs() / 0.025 < 0.10, "zeta {zeta}");
    }

    #[test]
    fn energy_never_grows_after_forcing_stops() {
        let (_, modal) = default_case(SupportCondition::CS);
        let dt = 1e-4;
        let n = 5_001;
        let mut channels = vec![vec![0.0; n]; modal.n_channels()];
        for (c, ch) in channels.iter_mut().enumerate() {
            for (i, x) in ch.iter_mut().take(500).enumerate() {
                *x = ((i * (c + 3)) as f64 * 0.01).sin();
            }
        }
        let forces = forces_from(channels, 1.0 / dt);
        let hist = modal_response(&modal, &forces, dt, n).unwrap();
        for i in 501..n {
            assert!(hist.energy(i) <= hist.energy(i - 1) * (1.0 + 1e-12), "sample {i}");
        }
        assert!(hist.energy(n - 1) < hist.energy(501));
    }

    #[test]
    fn deterministic_output() {
        let (sys, modal) = default_case(SupportCondition::CC);
        let channels: Vec<Vec<f64>> = (0..9)
            .map(|c| (0..2001).map(|i| ((i * (c + 1)) as f64 * 0.013).cos()).collect())
            .collect();
        let forces = forces_from(channels, 1e4);
        let a = transient_response(&sys, &modal, &forces, 1e-4, 0.2).unwrap();
        let b = transient_response(&sys, &modal, &forces, 1e-4, 0.2).unwrap();
        for (x, y) in a.channels().iter().flatten().zip(b.channels().iter().flatten()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }
}
