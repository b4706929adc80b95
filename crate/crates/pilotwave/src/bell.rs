//! Pure jump process on lattice fermion-number configurations.
//!
//! Jump rates follow
//! `sigma(q|q') = (2/hbar) [Im <psi|P(q) H P(q')psi>]^+ / <psi|P(q')psi>`,
//! evaluated on the full Hamiltonian. Taking only the positive part makes
//! the rates minimal: for each pair of configurations at most one jump
//! direction is active at any time.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::hamiltonian::{ModelHamiltonian, OperatorPart};
use crate::state::{Configuration, LatticeConfig, QuantumState, SUPPORT_EPS};
use crate::trajectory::{EventKind, PsiTimeline, TrajEvent, TrajectoryRecord};
use crate::{Error, Result};

/// How the signed current is turned into a rate. `Minimal` is the physical
/// positive-part rule; `AbsoluteValue` keeps both directions active and is
/// only meant as a corrupted negative control for the verification harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatePolicy {
    Minimal,
    AbsoluteValue,
}

impl RatePolicy {
    fn rate_from_current(self, x: f64) -> f64 {
        match self {
            RatePolicy::Minimal => x.max(0.0),
            RatePolicy::AbsoluteValue => x.abs(),
        }
    }
}

/// Nonnegative jump rates out of one source configuration at one time.
#[derive(Debug, Clone)]
pub struct JumpRateTable<D> {
    source: D,
    t: f64,
    entries: Vec<(D, f64)>,
}

impl<D> JumpRateTable<D> {
    pub fn new(source: D, t: f64, entries: Vec<(D, f64)>) -> Self {
        debug_assert!(entries.iter().all(|&(_, r)| r >= 0.0));
        Self { source, t, entries }
    }

    pub fn source(&self) -> &D {
        &self.source
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Destinations with strictly positive rate.
    pub fn entries(&self) -> &[(D, f64)] {
        &self.entries
    }

    pub fn total_rate(&self) -> f64 {
        self.entries.iter().map(|&(_, r)| r).sum()
    }
}

/// Jump rates out of `q_src` under the full Hamiltonian.
///
/// Destinations are exactly the configurations coupled to the source by a
/// nonzero matrix element; zero rates are omitted. Errors if the source
/// carries no Born weight (the actual configuration must sit in the support).
pub fn bell_rates(
    state: &QuantumState,
    q_src: &LatticeConfig,
    h: &ModelHamiltonian,
    t: f64,
) -> Result<JumpRateTable<LatticeConfig>> {
    bell_rates_with_policy(state, q_src, h, t, RatePolicy::Minimal)
}

pub fn bell_rates_with_policy(
    state: &QuantumState,
    q_src: &LatticeConfig,
    h: &ModelHamiltonian,
    t: f64,
    policy: RatePolicy,
) -> Result<JumpRateTable<LatticeConfig>> {
    let lat = h.basis().as_lattice()?;
    let src = lat
        .label_of(q_src)
        .ok_or_else(|| Error::BasisMismatch(format!("configuration {q_src} not in basis")))?;
    let c_src = state.amplitude(src);
    let weight = c_src.norm_sqr();
    if weight <= SUPPORT_EPS * SUPPORT_EPS {
        return Err(Error::OutsideSupport { weight, t });
    }
    let two_over_hbar = 2.0 / h.hbar();
    let mut entries = Vec::new();
    for &(row, h_rc) in h.part(OperatorPart::Total).column(src) {
        if row == src {
            continue;
        }
        let current = (state.amplitude(row).conj() * h_rc * c_src).im;
        let rate = two_over_hbar * policy.rate_from_current(current) / weight;
        if rate > 0.0 {
            entries.push((lat.config(row).clone(), rate));
        }
    }
    Ok(JumpRateTable::new(q_src.clone(), t, entries))
}

/// Samples the next jump in a window over which the rates are frozen.
///
/// The jump happens with probability `1 - exp(-rate_total * window)`; the
/// destination is drawn proportionally to its rate. Returns the destination
/// and the jump time offset within the window.
pub fn sample_next_jump<D: Clone>(
    table: &JumpRateTable<D>,
    rng: &mut impl Rng,
    window: f64,
) -> Option<(D, f64)> {
    let total = table.total_rate();
    if total <= 0.0 {
        return None;
    }
    let u: f64 = rng.gen();
    let tau = -(1.0 - u).ln() / total;
    if tau > window {
        return None;
    }
    let mut pick = rng.gen::<f64>() * total;
    for (dest, rate) in table.entries() {
        pick -= rate;
        if pick <= 0.0 {
            return Some((dest.clone(), tau));
        }
    }
    let (dest, _) = table.entries().last().expect("nonzero total rate");
    Some((dest.clone(), tau))
}

/// Runs one jump trajectory against a precomputed timeline.
///
/// Rates are refreshed every `dt` (the timeline step) and frozen in between;
/// jump times within a window are exact. The configuration is piecewise
/// constant.
pub fn run_bell_trajectory(
    timeline: &PsiTimeline,
    h: &ModelHamiltonian,
    q0: LatticeConfig,
    rng: &mut ChaCha8Rng,
) -> Result<TrajectoryRecord> {
    run_bell_trajectory_with_policy(timeline, h, q0, rng, RatePolicy::Minimal)
}

pub fn run_bell_trajectory_with_policy(
    timeline: &PsiTimeline,
    h: &ModelHamiltonian,
    q0: LatticeConfig,
    rng: &mut ChaCha8Rng,
    policy: RatePolicy,
) -> Result<TrajectoryRecord> {
    let dt = timeline.dt();
    let mut record = TrajectoryRecord::new(Configuration::Lattice(q0.clone()));
    let mut q = q0;
    for step in 0..timeline.steps() {
        let psi = timeline.state(step);
        let window_start = step as f64 * dt;
        let mut offset = 0.0;
        loop {
            let t_now = window_start + offset;
            let table = bell_rates_with_policy(psi, &q, h, t_now, policy)?;
            match sample_next_jump(&table, rng, dt - offset) {
                Some((dest, tau)) => {
                    offset += tau;
                    record.push(TrajEvent {
                        t: window_start + offset,
                        kind: EventKind::Jump,
                        config: Configuration::Lattice(dest.clone()),
                        source: Some(Configuration::Lattice(q.clone())),
                    });
                    q = dest;
                }
                None => break,
            }
        }
    }
    record.set_horizon(timeline.horizon());
    Ok(record)
}
