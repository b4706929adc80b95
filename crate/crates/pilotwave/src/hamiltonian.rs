//! Model Hamiltonians with an `H = H0 + H_Int` split, and unitary evolution.
//!
//! The free part is sector-diagonal (lattice hopping or a discrete Laplacian
//! per sector); the interaction part couples adjacent particle-number
//! sectors. Both are kept as sparse column lists so the jump engines can walk
//! the coupling pattern of a single source configuration, plus a dense form
//! for eigendecomposition.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::state::{Basis, GridBasis, LatticeBasis, QuantumState};
use crate::{Error, Result};

/// Largest dimension for which the exact (eigendecomposition) stepper is
/// selected automatically.
pub const EXACT_DIM_LIMIT: usize = 4096;

/// Acceptable Hermiticity defect `max |H_ij - conj(H_ji)|` on construction.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Norm-change tolerance for a single evolution step.
pub const UNITARITY_STEP_TOL: f64 = 1e-10;

// ---------------------------------------------------------------------------
// Sparse operator
// ---------------------------------------------------------------------------

/// Column-compressed sparse operator on a basis of dimension `dim`.
#[derive(Debug, Clone)]
pub struct SparseOp {
    dim: usize,
    cols: Vec<Vec<(usize, C64)>>,
}

impl SparseOp {
    pub fn zero(dim: usize) -> Self {
        Self { dim, cols: vec![Vec::new(); dim] }
    }

    /// Accumulates triplets `(row, col, value)`, merging duplicates and
    /// dropping exact zeros.
    pub fn from_triplets(dim: usize, triplets: impl IntoIterator<Item = (usize, usize, C64)>) -> Self {
        let mut maps: Vec<HashMap<usize, C64>> = vec![HashMap::new(); dim];
        for (row, col, v) in triplets {
            assert!(row < dim && col < dim, "triplet out of range");
            *maps[col].entry(row).or_insert(C64::new(0.0, 0.0)) += v;
        }
        let cols = maps
            .into_iter()
            .map(|m| {
                let mut col: Vec<(usize, C64)> =
                    m.into_iter().filter(|(_, v)| v.norm_sqr() > 0.0).collect();
                col.sort_unstable_by_key(|&(r, _)| r);
                col
            })
            .collect();
        Self { dim, cols }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    /// Nonzero entries `(row, value)` of one column, sorted by row.
    pub fn column(&self, col: usize) -> &[(usize, C64)] {
        &self.cols[col]
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        match self.cols[col].binary_search_by_key(&row, |&(r, _)| r) {
            Ok(k) => self.cols[col][k].1,
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |&(i, v)| (i, j, v)))
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        let mut out = DVector::from_element(self.dim, C64::new(0.0, 0.0));
        for (j, col) in self.cols.iter().enumerate() {
            let x = v[j];
            if x.norm_sqr() == 0.0 {
                continue;
            }
            for &(i, h) in col {
                out[i] += h * x;
            }
        }
        out
    }

    pub fn dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::from_element(self.dim, self.dim, C64::new(0.0, 0.0));
        for (i, j, v) in self.triplets() {
            m[(i, j)] = v;
        }
        m
    }

    /// `max |H_ij - conj(H_ji)|` over all entries.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut defect = 0.0f64;
        for (i, j, v) in self.triplets() {
            defect = defect.max((v - self.entry(j, i).conj()).norm());
        }
        defect
    }

    /// Merges two operators entrywise.
    pub fn sum(&self, other: &SparseOp) -> SparseOp {
        assert_eq!(self.dim, other.dim);
        SparseOp::from_triplets(self.dim, self.triplets().chain(other.triplets()))
    }

    /// Sparse triplet CSV `row,col,re,im` for external verification.
    pub fn to_triplet_csv(&self) -> String {
        let mut out = String::from("row,col,re,im\n");
        for (i, j, v) in self.triplets() {
            out.push_str(&format!("{},{},{},{}\n", i, j, v.re, v.im));
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Model Hamiltonian
// ---------------------------------------------------------------------------

/// Selects the free part, the interaction part, or their sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorPart {
    Free,
    Interaction,
    Total,
}

/// A Hermitian `H = H0 + H_Int` on a truncated basis.
#[derive(Debug)]
pub struct ModelHamiltonian {
    basis: Arc<Basis>,
    free: SparseOp,
    interaction: SparseOp,
    total: SparseOp,
    hbar: f64,
    mass: f64,
    exact: OnceLock<ExactPropagator>,
}

impl ModelHamiltonian {
    /// Assembles a model from raw triplets, verifying Hermiticity of each
    /// part on the truncated basis.
    pub fn from_parts(
        basis: Arc<Basis>,
        free: impl IntoIterator<Item = (usize, usize, C64)>,
        interaction: impl IntoIterator<Item = (usize, usize, C64)>,
        hbar: f64,
        mass: f64,
    ) -> Result<Self> {
        let dim = basis.dim();
        let free = SparseOp::from_triplets(dim, free);
        let interaction = SparseOp::from_triplets(dim, interaction);
        for (name, op) in [("H0", &free), ("H_Int", &interaction)] {
            let defect = op.hermiticity_defect();
            if defect > HERMITICITY_TOL {
                return Err(Error::InvalidParameter(format!(
                    "{name} not Hermitian: defect {defect:.3e}"
                )));
            }
        }
        let total = free.sum(&interaction);
        Ok(Self { basis, free, interaction, total, hbar, mass, exact: OnceLock::new() })
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn part(&self, part: OperatorPart) -> &SparseOp {
        match part {
            OperatorPart::Free => &self.free,
            OperatorPart::Interaction => &self.interaction,
            OperatorPart::Total => &self.total,
        }
    }

    /// `<psi | H_part psi>`.
    pub fn expectation(&self, part: OperatorPart, state: &QuantumState) -> C64 {
        let hv = self.part(part).apply(state.amplitudes());
        state.amplitudes().dotc(&hv)
    }

    /// Exact propagator of the total Hamiltonian, built once on first use.
    pub fn propagator(&self) -> &ExactPropagator {
        self.exact.get_or_init(|| ExactPropagator::new(&self.total, self.hbar))
    }

    /// Advances a state by `dt` under the full Hamiltonian.
    ///
    /// Dimensions up to [`EXACT_DIM_LIMIT`] use the exact eigendecomposition
    /// propagator; larger bases fall back to the norm-preserving implicit
    /// midpoint stepper.
    pub fn evolve(&self, state: &QuantumState, dt: f64) -> Result<QuantumState> {
        if self.dim() <= EXACT_DIM_LIMIT {
            self.propagator().propagate(state, dt)
        } else {
            MidpointStepper::new(self, OperatorPart::Total).step(state, dt)
        }
    }
}

// ---------------------------------------------------------------------------
// Steppers
// ---------------------------------------------------------------------------

/// Exact unitary propagation via one-time Hermitian eigendecomposition:
/// `psi(t + dt) = V exp(-i E dt / hbar) V^dagger psi(t)`.
#[derive(Debug)]
pub struct ExactPropagator {
    evals: DVector<f64>,
    evecs: DMatrix<C64>,
    hbar: f64,
}

impl ExactPropagator {
    pub fn new(op: &SparseOp, hbar: f64) -> Self {
        let eig = op.dense().symmetric_eigen();
        Self { evals: eig.eigenvalues, evecs: eig.eigenvectors, hbar }
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.evals
    }

    pub fn propagate(&self, state: &QuantumState, dt: f64) -> Result<QuantumState> {
        let mut coeffs = self.evecs.adjoint() * state.amplitudes();
        for (k, c) in coeffs.iter_mut().enumerate() {
            *c *= C64::from_polar(1.0, -self.evals[k] * dt / self.hbar);
        }
        let mut amps = &self.evecs * coeffs;
        // counter per-step rounding drift; anything beyond rounding level is
        // left visible to the unitarity monitors
        let n2_in = state.norm_squared();
        let n2_out: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if n2_in > 0.0 && ((n2_out / n2_in) - 1.0).abs() < 1e-8 {
            let s = (n2_in / n2_out).sqrt();
            amps.iter_mut().for_each(|a| *a *= s);
        }
        QuantumState::from_amplitudes(state.basis().clone(), amps)
    }

    /// States at `t0 + k dt` for `k = 0..=steps`, reusing one projection of
    /// the initial state onto the eigenbasis.
    pub fn timeline(&self, psi0: &QuantumState, dt: f64, steps: usize) -> Result<Vec<QuantumState>> {
        let coeffs0 = self.evecs.adjoint() * psi0.amplitudes();
        let mut out = Vec::with_capacity(steps + 1);
        for k in 0..=steps {
            let t = k as f64 * dt;
            let mut coeffs = coeffs0.clone();
            for (j, c) in coeffs.iter_mut().enumerate() {
                *c *= C64::from_polar(1.0, -self.evals[j] * t / self.hbar);
            }
            out.push(QuantumState::from_amplitudes(
                psi0.basis().clone(),
                &self.evecs * coeffs,
            )?);
        }
        Ok(out)
    }
}

/// Implicit midpoint (Cayley) stepper:
/// `(1 + i dt H / 2 hbar) psi' = (1 - i dt H / 2 hbar) psi`.
///
/// Exactly norm-preserving for Hermitian `H` up to linear-solve rounding; a
/// step whose norm defect still exceeds tolerance is split in two.
pub struct MidpointStepper<'a> {
    h: &'a ModelHamiltonian,
    part: OperatorPart,
    dense: DMatrix<C64>,
}

impl<'a> MidpointStepper<'a> {
    pub fn new(h: &'a ModelHamiltonian, part: OperatorPart) -> Self {
        Self { h, part, dense: h.part(part).dense() }
    }

    pub fn step(&self, state: &QuantumState, dt: f64) -> Result<QuantumState> {
        self.step_impl(state, dt, 0)
    }

    fn step_impl(&self, state: &QuantumState, dt: f64, depth: usize) -> Result<QuantumState> {
        let dim = self.dense.nrows();
        let z = C64::new(0.0, dt / (2.0 * self.h.hbar()));
        let mut a = self.dense.map(|v| v * z);
        let mut b = self.dense.map(|v| v * (-z));
        for i in 0..dim {
            a[(i, i)] += C64::new(1.0, 0.0);
            b[(i, i)] += C64::new(1.0, 0.0);
        }
        let rhs = b * state.amplitudes();
        let lu = a.lu();
        let amps = lu
            .solve(&rhs)
            .ok_or_else(|| Error::InvalidParameter("midpoint solve failed".into()))?;
        let next = QuantumState::from_amplitudes(state.basis().clone(), amps)?;
        let defect = (next.norm_squared() - state.norm_squared()).abs();
        if defect > UNITARITY_STEP_TOL {
            if depth >= 24 {
                return Err(Error::InvalidParameter(format!(
                    "unitarity defect {defect:.3e} persists at dt = {dt:.3e}"
                )));
            }
            let half = self.step_impl(state, dt / 2.0, depth + 1)?;
            return self.step_impl(&half, dt / 2.0, depth + 1);
        }
        Ok(next)
    }
}

// ---------------------------------------------------------------------------
// Lattice model builder
// ---------------------------------------------------------------------------

/// Parameters of the lattice occupation model: nearest-neighbor hopping plus
/// on-site pair and single creation/annihilation terms.
#[derive(Debug, Clone)]
pub struct BellLatticeParams {
    pub sites: usize,
    /// Hopping amplitude between neighboring sites (free part).
    pub hop: f64,
    /// Phase on the hopping amplitude; nonzero makes the Hamiltonian complex.
    pub hop_phase: f64,
    /// On-site pair term `b_x^2 + (b_x^dagger)^2`, couples totals n and n+2.
    pub pair_coupling: f64,
    /// On-site single term `b_x + b_x^dagger`, couples totals n and n+1.
    pub single_coupling: f64,
    pub n_max: u32,
    pub hbar: f64,
    pub dim_cap: usize,
}

impl Default for BellLatticeParams {
    fn default() -> Self {
        Self {
            sites: 2,
            hop: 1.0,
            hop_phase: 0.0,
            pair_coupling: 0.0,
            single_coupling: 0.5,
            n_max: 2,
            hbar: 1.0,
            dim_cap: 200_000,
        }
    }
}

/// Builds the lattice model on the occupation basis truncated at `n_max`.
///
/// Ladder factors follow the bosonic convention, so every term is Hermitian
/// by construction; the truncation is a hard projection onto the kept basis.
pub fn build_bell_lattice_model(p: &BellLatticeParams) -> Result<ModelHamiltonian> {
    if p.sites < 2 {
        return Err(Error::InvalidParameter(format!("sites = {} < 2", p.sites)));
    }
    if p.n_max < 1 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    let basis = Arc::new(Basis::Lattice(LatticeBasis::new(p.sites, p.n_max, p.dim_cap)?));
    let lat = basis.as_lattice()?;

    let mut free = Vec::new();
    let mut interaction = Vec::new();
    let hop_amp = C64::from_polar(-p.hop, p.hop_phase);
    for (col, q) in lat.configs().iter().enumerate() {
        // hopping: -hop e^{i phi} b_x^dagger b_{x+1} + h.c., open chain
        for x in 0..p.sites - 1 {
            push_move(lat, col, q, x + 1, x, hop_amp, &mut free);
            push_move(lat, col, q, x, x + 1, hop_amp.conj(), &mut free);
        }
        for x in 0..p.sites {
            let n_x = q.0[x] as f64;
            if p.pair_coupling != 0.0 {
                // pair creation
                if let Some(l) = shifted_label(lat, q, x, 2) {
                    let amp = p.pair_coupling * ((n_x + 1.0) * (n_x + 2.0)).sqrt();
                    interaction.push((l, col, C64::new(amp, 0.0)));
                }
                // pair annihilation
                if q.0[x] >= 2 {
                    if let Some(l) = shifted_label(lat, q, x, -2) {
                        let amp = p.pair_coupling * (n_x * (n_x - 1.0)).sqrt();
                        interaction.push((l, col, C64::new(amp, 0.0)));
                    }
                }
            }
            if p.single_coupling != 0.0 {
                if let Some(l) = shifted_label(lat, q, x, 1) {
                    interaction.push((l, col, C64::new(p.single_coupling * (n_x + 1.0).sqrt(), 0.0)));
                }
                if q.0[x] >= 1 {
                    if let Some(l) = shifted_label(lat, q, x, -1) {
                        interaction.push((l, col, C64::new(p.single_coupling * n_x.sqrt(), 0.0)));
                    }
                }
            }
        }
    }
    ModelHamiltonian::from_parts(basis, free, interaction, p.hbar, 1.0)
}

/// `amp * b_to^dagger b_from` applied to `|q>`; skips moves leaving the basis.
fn push_move(
    lat: &LatticeBasis,
    col: usize,
    q: &crate::state::LatticeConfig,
    from: usize,
    to: usize,
    amp: C64,
    out: &mut Vec<(usize, usize, C64)>,
) {
    if q.0[from] == 0 {
        return;
    }
    let mut occ = q.0.clone();
    occ[from] -= 1;
    occ[to] += 1;
    if let Some(l) = lat.label_of(&crate::state::LatticeConfig(occ)) {
        let factor = (q.0[from] as f64).sqrt() * (q.0[to] as f64 + 1.0).sqrt();
        out.push((l, col, amp * factor));
    }
}

/// Label of `q` with site `x` shifted by `delta` particles, if still in basis.
fn shifted_label(
    lat: &LatticeBasis,
    q: &crate::state::LatticeConfig,
    x: usize,
    delta: i32,
) -> Option<usize> {
    let mut occ = q.0.clone();
    let new = occ[x] as i64 + delta as i64;
    if new < 0 {
        return None;
    }
    occ[x] = new as u32;
    lat.label_of(&crate::state::LatticeConfig(occ))
}

// ---------------------------------------------------------------------------
// Emission/absorption model builder
// ---------------------------------------------------------------------------

/// Parameters of the 1D source model: free bosons on a periodic grid, with
/// fixed sources that emit and absorb via a Gaussian form factor.
#[derive(Debug, Clone)]
pub struct EmissionAbsorptionParams {
    pub cells: usize,
    pub dx: f64,
    /// Interaction strength g; g = 0 turns all jumps off.
    pub coupling: f64,
    /// Form factor width; must resolve to at least two cells.
    pub width: f64,
    pub n_max: usize,
    /// Source positions; defaults to the single grid center.
    pub sources: Vec<f64>,
    pub mass: f64,
    pub hbar: f64,
    pub dim_cap: usize,
}

impl Default for EmissionAbsorptionParams {
    fn default() -> Self {
        Self {
            cells: 32,
            dx: 0.25,
            coupling: 0.3,
            width: 1.0,
            n_max: 2,
            sources: Vec::new(),
            mass: 1.0,
            hbar: 1.0,
            dim_cap: 2_000_000,
        }
    }
}

/// Builds the emission/absorption model.
///
/// `H0` is the discrete Laplacian acting on each particle coordinate;
/// `H_Int = g sum_s (a(F_s) + a^dagger(F_s))` with `F_s` a Gaussian form
/// factor of width `w` centered on source `s`. Matrix elements are written
/// in the cell-amplitude convention, which carries the `sqrt(n+1)` bosonic
/// factors for symmetric states.
pub fn build_emission_absorption_model(p: &EmissionAbsorptionParams) -> Result<ModelHamiltonian> {
    if p.cells < 16 {
        return Err(Error::InvalidParameter(format!("grid cells = {} < 16", p.cells)));
    }
    if p.width < 2.0 * p.dx {
        return Err(Error::FormFactorUnderResolved { width: p.width, min_width: 2.0 * p.dx });
    }
    let basis = Arc::new(Basis::Grid(GridBasis::new(p.cells, p.dx, p.n_max, p.dim_cap)?));
    let grid = basis.as_grid()?;
    let length = grid.length();
    let sources = if p.sources.is_empty() { vec![length / 2.0] } else { p.sources.clone() };

    // free part: -hbar^2/(2m) d^2/dx^2 per particle, periodic
    let kappa = p.hbar * p.hbar / (2.0 * p.mass * p.dx * p.dx);
    let mut free = Vec::new();
    for n in 1..=p.n_max {
        for col in grid.sector_range(n) {
            let tuple = grid.tuple_of(col);
            free.push((col, col, C64::new(2.0 * kappa * n as f64, 0.0)));
            for k in 0..n {
                for step in [1usize, p.cells - 1] {
                    let mut t = tuple.clone();
                    t[k] = (t[k] + step) % p.cells;
                    free.push((grid.label(&t), col, C64::new(-kappa, 0.0)));
                }
            }
        }
    }

    // interaction: g * (a(F) + a^dagger(F)) per source
    let mut interaction = Vec::new();
    if p.coupling != 0.0 {
        let sqrt_dx = p.dx.sqrt();
        for &src in &sources {
            // periodic Gaussian form factor, peak value 1 at the source
            let form: Vec<f64> = (0..p.cells)
                .map(|c| {
                    let mut d = (grid.cell_center(c) - src).abs() % length;
                    if d > length / 2.0 {
                        d = length - d;
                    }
                    (-d * d / (2.0 * p.width * p.width)).exp()
                })
                .collect();
            for n in 0..p.n_max {
                let create = p.coupling * sqrt_dx / ((n + 1) as f64).sqrt();
                for col in grid.sector_range(n) {
                    let tuple = grid.tuple_of(col);
                    for x_new in 0..p.cells {
                        let f = form[x_new];
                        if f.abs() < 1e-14 {
                            continue;
                        }
                        for slot in 0..=n {
                            let mut t = tuple.clone();
                            t.insert(slot, x_new);
                            let row = grid.label(&t);
                            // creation
                            interaction.push((row, col, C64::new(create * f, 0.0)));
                            // annihilation (adjoint entry)
                            interaction.push((col, row, C64::new(create * f, 0.0)));
                        }
                    }
                }
            }
        }
    }
    ModelHamiltonian::from_parts(basis, free, interaction, p.hbar, p.mass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{LatticeConfig, Projection};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn no_number_changing_terms_is_block_diagonal() {
        let p = BellLatticeParams {
            sites: 2,
            n_max: 1,
            pair_coupling: 0.0,
            single_coupling: 0.0,
            ..Default::default()
        };
        let h = build_bell_lattice_model(&p).unwrap();
        let lat = h.basis().as_lattice().unwrap();
        for (i, j, _) in h.part(OperatorPart::Total).triplets() {
            assert_eq!(lat.config(i).total(), lat.config(j).total());
        }
        assert!(h.part(OperatorPart::Interaction).is_zero());
    }

    #[test]
    fn lattice_hermitian_for_assorted_parameters() {
        for (hop, phase, pair, single) in [
            (1.0, 0.0, 0.0, 0.5),
            (0.7, 0.9, 0.4, 0.0),
            (1.3, 2.1, 0.2, 0.6),
        ] {
            let p = BellLatticeParams {
                sites: 3,
                hop,
                hop_phase: phase,
                pair_coupling: pair,
                single_coupling: single,
                n_max: 3,
                ..Default::default()
            };
            let h = build_bell_lattice_model(&p).unwrap();
            assert!(h.part(OperatorPart::Total).hermiticity_defect() < 1e-12);
        }
    }

    /// Independent oracle: hand-assembled 6x6 matrix for sites=2, n_max=2,
    /// hop=1, single=0.5, pair=0, with the basis enumerated explicitly.
    #[test]
    fn two_site_spectrum_matches_hand_assembly() {
        let p = BellLatticeParams {
            sites: 2,
            hop: 1.0,
            hop_phase: 0.0,
            pair_coupling: 0.0,
            single_coupling: 0.5,
            n_max: 2,
            ..Default::default()
        };
        let h = build_bell_lattice_model(&p).unwrap();
        let lat = h.basis().as_lattice().unwrap();

        // order: (0,0) (1,0) (0,1) (2,0) (1,1) (0,2)
        let states = [
            vec![0u32, 0],
            vec![1, 0],
            vec![0, 1],
            vec![2, 0],
            vec![1, 1],
            vec![0, 2],
        ];
        let idx: Vec<usize> = states
            .iter()
            .map(|occ| lat.label_of(&LatticeConfig(occ.clone())).unwrap())
            .collect();
        let mut expect = DMatrix::from_element(6, 6, C64::new(0.0, 0.0));
        let mut set = |a: usize, b: usize, v: f64| {
            expect[(a, b)] = C64::new(v, 0.0);
            expect[(b, a)] = C64::new(v, 0.0);
        };
        let g = 0.5;
        let s2 = 2f64.sqrt();
        // hopping -1 * b_0^dag b_1 + h.c.
        set(1, 2, -1.0); // (1,0)<->(0,1)
        set(3, 4, -s2); // (2,0)<->(1,1): sqrt(2)
        set(4, 5, -s2); // (1,1)<->(0,2)
        // single creation/annihilation with sqrt factors
        set(0, 1, g); // vac <-> (1,0)
        set(0, 2, g); // vac <-> (0,1)
        set(1, 3, g * s2); // (1,0)<->(2,0)
        set(1, 4, g); // (1,0)<->(1,1): raise site 1
        set(2, 4, g); // (0,1)<->(1,1): raise site 0
        set(2, 5, g * s2); // (0,1)<->(0,2)

        // map built H into the same ordering
        let dense = h.part(OperatorPart::Total).dense();
        let mut built = DMatrix::from_element(6, 6, C64::new(0.0, 0.0));
        for a in 0..6 {
            for b in 0..6 {
                built[(a, b)] = dense[(idx[a], idx[b])];
            }
        }
        assert!((&built - &expect).iter().all(|v| v.norm() < 1e-12));

        let mut got: Vec<f64> = built.symmetric_eigen().eigenvalues.iter().copied().collect();
        let mut want: Vec<f64> = expect.symmetric_eigen().eigenvalues.iter().copied().collect();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn zero_coupling_has_no_interaction() {
        let p = EmissionAbsorptionParams { coupling: 0.0, ..Default::default() };
        let h = build_emission_absorption_model(&p).unwrap();
        assert!(h.part(OperatorPart::Interaction).is_zero());
    }

    #[test]
    fn narrow_form_factor_rejected() {
        let p = EmissionAbsorptionParams { width: 0.4, dx: 0.25, ..Default::default() };
        assert!(matches!(
            build_emission_absorption_model(&p),
            Err(Error::FormFactorUnderResolved { .. })
        ));
        let p = EmissionAbsorptionParams { cells: 8, ..Default::default() };
        assert!(matches!(
            build_emission_absorption_model(&p),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn interaction_couples_adjacent_sectors_only() {
        let p = EmissionAbsorptionParams { cells: 16, dx: 0.25, width: 0.5, ..Default::default() };
        let h = build_emission_absorption_model(&p).unwrap();
        let grid = h.basis().as_grid().unwrap();
        for (i, j, _) in h.part(OperatorPart::Interaction).triplets() {
            let ni = grid.sector_of_label(i) as i64;
            let nj = grid.sector_of_label(j) as i64;
            assert_eq!((ni - nj).abs(), 1);
        }
        for (i, j, _) in h.part(OperatorPart::Free).triplets() {
            assert_eq!(grid.sector_of_label(i), grid.sector_of_label(j));
        }
    }

    #[test]
    fn interaction_preserves_symmetry() {
        let p = EmissionAbsorptionParams { cells: 16, dx: 0.25, width: 0.6, ..Default::default() };
        let h = build_emission_absorption_model(&p).unwrap();
        let grid = h.basis().as_grid().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let state = QuantumState::random(h.basis().clone(), &mut rng);
        let out = h.part(OperatorPart::Interaction).apply(state.amplitudes());
        for x1 in 0..16 {
            for x2 in 0..x1 {
                let a = out[grid.label(&[x1, x2])];
                let b = out[grid.label(&[x2, x1])];
                assert!((a - b).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn interaction_expectation_is_real() {
        let p = EmissionAbsorptionParams {
            cells: 32,
            dx: 0.25,
            coupling: 0.3,
            width: 1.0, // 4 dx
            n_max: 2,
            ..Default::default()
        };
        let h = build_emission_absorption_model(&p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let state = QuantumState::random(h.basis().clone(), &mut rng);
            let e = h.expectation(OperatorPart::Interaction, &state);
            assert!(e.im.abs() < 1e-10, "imaginary part {}", e.im);
        }
    }

    #[test]
    fn evolve_under_zero_hamiltonian_is_identity() {
        let basis = Arc::new(Basis::Lattice(LatticeBasis::new(2, 1, 1000).unwrap()));
        let h = ModelHamiltonian::from_parts(basis.clone(), [], [], 1.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let state = QuantumState::random(basis, &mut rng);
        let evolved = h.evolve(&state, 0.7).unwrap();
        let diff: f64 = (evolved.amplitudes() - state.amplitudes()).norm();
        assert!(diff < 1e-12);
    }

    #[test]
    fn eigenstate_picks_up_phase_only() {
        let basis = Arc::new(Basis::Lattice(LatticeBasis::new(2, 1, 1000).unwrap()));
        let e0 = 0.8;
        let h = ModelHamiltonian::from_parts(
            basis.clone(),
            [(1usize, 1usize, C64::new(e0, 0.0))],
            [],
            1.0,
            1.0,
        )
        .unwrap();
        let lat = basis.as_lattice().unwrap();
        let q = lat.config(1).clone();
        let state = QuantumState::lattice_basis_state(basis, &q).unwrap();
        let dt = 0.3;
        let evolved = h.evolve(&state, dt).unwrap();
        let expected = C64::from_polar(1.0, -e0 * dt);
        assert!((evolved.amplitude(1) - expected).norm() < 1e-12);
        let d0 = state.born_density(false).unwrap();
        let d1 = evolved.born_density(false).unwrap();
        assert_eq!(d0.masses().len(), d1.masses().len());
        for (k, m) in d1.masses() {
            assert!((m - d0.mass(k)).abs() < 1e-12);
        }
    }

    /// Closed-form 2x2 oracle: occupation oscillates as sin^2(lambda t / hbar).
    #[test]
    fn two_level_rabi_oscillation() {
        let basis = Arc::new(Basis::Lattice(LatticeBasis::new(1, 1, 10).unwrap()));
        assert_eq!(basis.dim(), 2);
        let lambda = 0.9;
        let h = ModelHamiltonian::from_parts(
            basis.clone(),
            [],
            [
                (0usize, 1usize, C64::new(lambda, 0.0)),
                (1usize, 0usize, C64::new(lambda, 0.0)),
            ],
            1.0,
            1.0,
        )
        .unwrap();
        let q0 = basis.as_lattice().unwrap().config(0).clone();
        let psi0 = QuantumState::lattice_basis_state(basis.clone(), &q0).unwrap();
        for &t in &[0.2, 0.5, 1.3, 2.9] {
            let psi = h.evolve(&psi0, t).unwrap();
            let p1 = psi.amplitude(1).norm_sqr();
            let expected = (lambda * t).sin().powi(2);
            assert!((p1 - expected).abs() < 1e-10, "t={t}: {p1} vs {expected}");
        }
    }

    #[test]
    fn steppers_agree_on_two_site_model() {
        let h = build_bell_lattice_model(&BellLatticeParams::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let psi0 = QuantumState::random(h.basis().clone(), &mut rng);
        let dt = 1e-3;
        let steps = 1000;
        let exact = h.propagator().propagate(&psi0, dt * steps as f64).unwrap();
        let mid = MidpointStepper::new(&h, OperatorPart::Total);
        let mut psi = psi0;
        for _ in 0..steps {
            psi = mid.step(&psi, dt).unwrap();
        }
        let max_diff = (psi.amplitudes() - exact.amplitudes())
            .iter()
            .map(|d| d.norm())
            .fold(0.0f64, f64::max);
        assert!(max_diff < 1e-6, "steppers diverge: {max_diff}");
        // norm preservation over 10^3 midpoint steps
        assert!((psi.norm_squared() - 1.0).abs() < 1e-7);
    }

    #[test]
    fn exact_evolution_preserves_norm_and_energy() {
        let p = BellLatticeParams { pair_coupling: 0.3, ..Default::default() };
        let h = build_bell_lattice_model(&p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let psi0 = QuantumState::random(h.basis().clone(), &mut rng);
        let e0 = h.expectation(OperatorPart::Total, &psi0).re;
        let mut psi = psi0;
        for _ in 0..1000 {
            psi = h.evolve(&psi, 1e-3).unwrap();
        }
        assert!((psi.norm_squared() - 1.0).abs() < 1e-12);
        let e1 = h.expectation(OperatorPart::Total, &psi).re;
        assert!(((e1 - e0) / e0.abs().max(1.0)).abs() < 1e-8);
    }

    #[test]
    fn free_propagation_moves_sector_mass_nowhere() {
        // with g=0 the sector populations are conserved exactly
        let p = EmissionAbsorptionParams {
            cells: 16,
            dx: 0.25,
            coupling: 0.0,
            width: 0.6,
            n_max: 1,
            ..Default::default()
        };
        let h = build_emission_absorption_model(&p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let psi0 = QuantumState::random(h.basis().clone(), &mut rng);
        let p1_before = psi0.project_expectation(&Projection::Sector(1)).unwrap();
        let psi = h.evolve(&psi0, 0.9).unwrap();
        let p1_after = psi.project_expectation(&Projection::Sector(1)).unwrap();
        assert!((p1_before - p1_after).abs() < 1e-12);
    }

    #[test]
    fn triplet_csv_roundtrip_header() {
        let h = build_bell_lattice_model(&BellLatticeParams::default()).unwrap();
        let csv = h.part(OperatorPart::Total).to_triplet_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("row,col,re,im"));
        assert_eq!(csv.lines().count() - 1, h.part(OperatorPart::Total).nnz());
    }

}
