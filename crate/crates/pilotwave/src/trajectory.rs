//! Trajectory records and the shared wave-function timeline.
//!
//! Ensemble runs precompute `psi(t)` once on a fixed step grid (the exact
//! propagator makes each checkpoint independent of step count); trajectories
//! then only read from the timeline, which keeps them embarrassingly
//! parallel.

use crate::hamiltonian::ModelHamiltonian;
use crate::state::{Configuration, QuantumState};
use crate::{Error, Result};

/// Kind of a recorded trajectory event.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    /// Continuous segment checkpoint (or the initial condition).
    Flow,
    /// Stochastic configuration jump.
    Jump,
}

/// One timestamped event; `config` is the configuration right after it.
#[derive(Debug, Clone)]
pub struct TrajEvent {
    pub t: f64,
    pub kind: EventKind,
    pub config: Configuration,
    /// Source configuration, set for jumps.
    pub source: Option<Configuration>,
}

/// Timestamped piecewise path of a configuration, including jump events.
#[derive(Debug, Clone)]
pub struct TrajectoryRecord {
    events: Vec<TrajEvent>,
    horizon: f64,
    flagged: Option<String>,
}

impl TrajectoryRecord {
    pub fn new(initial: Configuration) -> Self {
        Self {
            events: vec![TrajEvent { t: 0.0, kind: EventKind::Flow, config: initial, source: None }],
            horizon: 0.0,
            flagged: None,
        }
    }

    pub fn push(&mut self, event: TrajEvent) {
        debug_assert!(event.t >= self.horizon - 1e-12);
        self.horizon = self.horizon.max(event.t);
        self.events.push(event);
    }

    pub fn set_horizon(&mut self, t: f64) {
        self.horizon = self.horizon.max(t);
    }

    /// Marks the trajectory as invalid; it stays in the ensemble and is
    /// counted by the harness rather than silently dropped.
    pub fn flag(&mut self, reason: impl Into<String>) {
        self.flagged = Some(reason.into());
    }

    pub fn flagged(&self) -> Option<&str> {
        self.flagged.as_deref()
    }

    pub fn events(&self) -> &[TrajEvent] {
        &self.events
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn jump_count(&self) -> usize {
        self.events.iter().filter(|e| e.kind == EventKind::Jump).count()
    }

    pub fn jumps(&self) -> impl Iterator<Item = &TrajEvent> {
        self.events.iter().filter(|e| e.kind == EventKind::Jump)
    }

    /// Configuration at time `t`: the one set by the last event at or before
    /// `t`. Errors beyond the recorded horizon.
    pub fn config_at(&self, t: f64) -> Result<&Configuration> {
        if t > self.horizon + 1e-12 {
            return Err(Error::BeyondHorizon { t, horizon: self.horizon });
        }
        let mut current = &self.events[0].config;
        for e in &self.events {
            if e.t <= t + 1e-12 {
                current = &e.config;
            } else {
                break;
            }
        }
        Ok(current)
    }
}

/// Precomputed `psi(k dt)` under the full Hamiltonian.
#[derive(Debug)]
pub struct PsiTimeline {
    states: Vec<QuantumState>,
    dt: f64,
}

impl PsiTimeline {
    /// Evolves `psi0` on `steps = ceil(t_final/dt)` exact checkpoints.
    pub fn build(
        h: &ModelHamiltonian,
        psi0: &QuantumState,
        t_final: f64,
        dt: f64,
    ) -> Result<Self> {
        if dt <= 0.0 || t_final < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "need dt > 0 and t_final >= 0, got dt = {dt}, t_final = {t_final}"
            )));
        }
        let steps = (t_final / dt).ceil() as usize;
        let states = h.propagator().timeline(psi0, dt, steps)?;
        Ok(Self { states, dt })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Number of windows (states run `0..=steps`).
    pub fn steps(&self) -> usize {
        self.states.len() - 1
    }

    pub fn horizon(&self) -> f64 {
        self.steps() as f64 * self.dt
    }

    pub fn state(&self, step: usize) -> &QuantumState {
        &self.states[step]
    }

    /// State at the checkpoint nearest to `t` (clamped to the horizon).
    pub fn state_near(&self, t: f64) -> &QuantumState {
        let k = ((t / self.dt).round() as usize).min(self.steps());
        &self.states[k]
    }

    /// Worst `| |psi|^2 - 1 |` over all checkpoints.
    pub fn max_unitarity_defect(&self) -> f64 {
        self.states
            .iter()
            .map(|s| (s.norm_squared() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::LatticeConfig;

    fn cfg(total: u32) -> Configuration {
        Configuration::Lattice(LatticeConfig(vec![total, 0]))
    }

    #[test]
    fn config_at_follows_events() {
        let mut rec = TrajectoryRecord::new(cfg(0));
        rec.push(TrajEvent { t: 0.4, kind: EventKind::Jump, config: cfg(1), source: Some(cfg(0)) });
        rec.push(TrajEvent { t: 0.9, kind: EventKind::Jump, config: cfg(2), source: Some(cfg(1)) });
        rec.set_horizon(1.5);
        assert_eq!(rec.config_at(0.0).unwrap(), &cfg(0));
        assert_eq!(rec.config_at(0.39).unwrap(), &cfg(0));
        assert_eq!(rec.config_at(0.4).unwrap(), &cfg(1));
        assert_eq!(rec.config_at(1.2).unwrap(), &cfg(2));
        assert!(matches!(rec.config_at(1.6), Err(Error::BeyondHorizon { .. })));
        assert_eq!(rec.jump_count(), 2);
    }
}
