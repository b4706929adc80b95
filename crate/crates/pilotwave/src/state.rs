//! States, configurations, sectors and projections shared by all engines.
//!
//! Two basis kinds are supported:
//!
//! * a lattice occupation basis: each basis label is a full occupation
//!   vector `q(x)` over the lattice sites, truncated at a total count;
//! * a 1D periodic grid with particle-number sectors: the sector-`n`
//!   amplitude array lives on ordered `n`-tuples of grid cells and is kept
//!   exactly symmetric under permutations, so an unordered configuration
//!   corresponds to the orbit of its cell tuple.
//!
//! Amplitudes are stored as plain l2 "cell amplitudes" `c`: the squared
//! modulus of a label is directly its Born mass. Serialized snapshots use
//! wave-function values `psi = c / dx^(n/2)` so that the documented norm
//! convention `sum |psi|^2 (dx)^n = 1` holds.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64 as C64;
use rand::Rng;
use serde::Serialize;

use crate::{Error, Result};

/// Tolerance on `|psi|^2 - 1` accepted as "normalized".
pub const NORM_TOL: f64 = 1e-10;

/// Cell amplitudes below this magnitude count as a node / lost support.
pub const SUPPORT_EPS: f64 = 1e-12;

// ---------------------------------------------------------------------------
// Configurations
// ---------------------------------------------------------------------------

/// Occupation numbers on a finite lattice, one entry per site.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeConfig(pub Vec<u32>);

impl LatticeConfig {
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn sites(&self) -> usize {
        self.0.len()
    }
}

impl std::fmt::Display for LatticeConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, q) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{q}")?;
        }
        write!(f, "]")
    }
}

/// A point in one `N`-particle sector of the grid models: particle count plus
/// an unordered tuple of positions, stored sorted so equality is
/// permutation-invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorConfig {
    sector: usize,
    positions: Vec<f64>,
}

impl SectorConfig {
    /// Canonicalizes (sorts) the positions.
    pub fn new(positions: Vec<f64>) -> Self {
        let mut positions = positions;
        positions.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Self { sector: positions.len(), positions }
    }

    pub fn vacuum() -> Self {
        Self { sector: 0, positions: Vec::new() }
    }

    pub fn sector(&self) -> usize {
        self.sector
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }
}

/// The actual "beable": either a lattice occupation vector or a point in one
/// particle-number sector.
#[derive(Debug, Clone, PartialEq)]
pub enum Configuration {
    Lattice(LatticeConfig),
    Sector(SectorConfig),
}

impl Configuration {
    /// Total particle count of the configuration.
    pub fn particle_count(&self) -> usize {
        match self {
            Configuration::Lattice(q) => q.total() as usize,
            Configuration::Sector(s) => s.sector(),
        }
    }
}

// ---------------------------------------------------------------------------
// Bases
// ---------------------------------------------------------------------------

/// Enumerated occupation basis of a truncated lattice Fock space.
///
/// Labels are ordered by total count, then lexicographically in the
/// occupation vector.
#[derive(Debug)]
pub struct LatticeBasis {
    sites: usize,
    n_max: u32,
    configs: Vec<LatticeConfig>,
    index: HashMap<Vec<u32>, usize>,
}

impl LatticeBasis {
    pub fn new(sites: usize, n_max: u32, dim_cap: usize) -> Result<Self> {
        let mut configs = Vec::new();
        for n in 0..=n_max {
            let mut occ = vec![0u32; sites];
            enumerate_occupations(&mut occ, 0, n, &mut configs);
        }
        if configs.len() > dim_cap {
            return Err(Error::DimensionCap { required: configs.len(), cap: dim_cap });
        }
        let index = configs
            .iter()
            .enumerate()
            .map(|(i, c)| (c.0.clone(), i))
            .collect();
        Ok(Self { sites, n_max, configs, index })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.configs.len()
    }

    pub fn config(&self, label: usize) -> &LatticeConfig {
        &self.configs[label]
    }

    pub fn configs(&self) -> &[LatticeConfig] {
        &self.configs
    }

    pub fn label_of(&self, config: &LatticeConfig) -> Option<usize> {
        self.index.get(&config.0).copied()
    }
}

/// Fills `configs` with all occupation vectors of total `remaining` over
/// sites `from..`, lexicographically.
fn enumerate_occupations(
    occ: &mut Vec<u32>,
    from: usize,
    remaining: u32,
    configs: &mut Vec<LatticeConfig>,
) {
    if from == occ.len() {
        if remaining == 0 {
            configs.push(LatticeConfig(occ.clone()));
        }
        return;
    }
    if from == occ.len() - 1 {
        occ[from] = remaining;
        configs.push(LatticeConfig(occ.clone()));
        occ[from] = 0;
        return;
    }
    for k in (0..=remaining).rev() {
        occ[from] = remaining - k;
        enumerate_occupations(occ, from + 1, k, configs);
    }
    occ[from] = 0;
}

/// Sector union over a 1D periodic grid: sector `n` holds the ordered
/// `n`-tuples of cells, laid out with particle 0 as the least significant
/// digit.
#[derive(Debug)]
pub struct GridBasis {
    cells: usize,
    dx: f64,
    n_max: usize,
    offsets: Vec<usize>,
}

impl GridBasis {
    pub fn new(cells: usize, dx: f64, n_max: usize, dim_cap: usize) -> Result<Self> {
        let mut offsets = Vec::with_capacity(n_max + 2);
        let mut total = 0usize;
        for n in 0..=n_max {
            offsets.push(total);
            total += cells.pow(n as u32);
        }
        offsets.push(total);
        if total > dim_cap {
            return Err(Error::DimensionCap { required: total, cap: dim_cap });
        }
        Ok(Self { cells, dx, n_max, offsets })
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Box length `G * dx`.
    pub fn length(&self) -> f64 {
        self.cells as f64 * self.dx
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn sector_range(&self, n: usize) -> std::ops::Range<usize> {
        self.offsets[n]..self.offsets[n + 1]
    }

    pub fn sector_of_label(&self, label: usize) -> usize {
        (0..=self.n_max)
            .find(|&n| label < self.offsets[n + 1])
            .expect("label out of range")
    }

    /// Label of an ordered cell tuple in sector `tuple.len()`.
    pub fn label(&self, tuple: &[usize]) -> usize {
        let mut idx = 0usize;
        for &x in tuple.iter().rev() {
            debug_assert!(x < self.cells);
            idx = idx * self.cells + x;
        }
        self.offsets[tuple.len()] + idx
    }

    /// Ordered cell tuple of a label.
    pub fn tuple_of(&self, label: usize) -> Vec<usize> {
        let n = self.sector_of_label(label);
        let mut idx = label - self.offsets[n];
        let mut tuple = Vec::with_capacity(n);
        for _ in 0..n {
            tuple.push(idx % self.cells);
            idx /= self.cells;
        }
        tuple
    }

    /// Cell containing a (periodically wrapped) position.
    pub fn cell_of(&self, x: f64) -> usize {
        let l = self.length();
        let mut x = x % l;
        if x < 0.0 {
            x += l;
        }
        let c = (x / self.dx) as usize;
        c.min(self.cells - 1)
    }

    /// Center position of a cell.
    pub fn cell_center(&self, cell: usize) -> f64 {
        (cell as f64 + 0.5) * self.dx
    }

    /// Sorted cell tuple of a configuration.
    pub fn cells_of(&self, config: &SectorConfig) -> Vec<usize> {
        let mut cells: Vec<usize> =
            config.positions().iter().map(|&x| self.cell_of(x)).collect();
        cells.sort_unstable();
        cells
    }

    /// Labels of all distinct permutations of a sorted cell tuple.
    pub fn orbit(&self, sorted_cells: &[usize]) -> Vec<usize> {
        let mut perms = Vec::new();
        let mut tuple = sorted_cells.to_vec();
        permutations_distinct(&mut tuple, 0, &mut perms);
        perms.iter().map(|t| self.label(t)).collect()
    }
}

/// All distinct permutations of `tuple[from..]` (tuple pre-sorted).
fn permutations_distinct(tuple: &mut Vec<usize>, from: usize, out: &mut Vec<Vec<usize>>) {
    if from == tuple.len() {
        out.push(tuple.clone());
        return;
    }
    let mut seen = Vec::new();
    for i in from..tuple.len() {
        if seen.contains(&tuple[i]) {
            continue;
        }
        seen.push(tuple[i]);
        tuple.swap(from, i);
        permutations_distinct(tuple, from + 1, out);
        tuple.swap(from, i);
    }
}

/// A basis shared between states and Hamiltonians.
#[derive(Debug)]
pub enum Basis {
    Lattice(LatticeBasis),
    Grid(GridBasis),
}

impl Basis {
    pub fn dim(&self) -> usize {
        match self {
            Basis::Lattice(b) => b.dim(),
            Basis::Grid(b) => b.dim(),
        }
    }

    pub fn as_lattice(&self) -> Result<&LatticeBasis> {
        match self {
            Basis::Lattice(b) => Ok(b),
            Basis::Grid(_) => Err(Error::BasisMismatch("expected lattice basis".into())),
        }
    }

    pub fn as_grid(&self) -> Result<&GridBasis> {
        match self {
            Basis::Grid(b) => Ok(b),
            Basis::Lattice(_) => Err(Error::BasisMismatch("expected grid basis".into())),
        }
    }

    /// Labels whose Born mass makes up a configuration: the single basis
    /// label for a lattice config, the permutation orbit for a grid config.
    pub fn labels_of(&self, config: &Configuration) -> Result<Vec<usize>> {
        match (self, config) {
            (Basis::Lattice(b), Configuration::Lattice(q)) => {
                let label = b.label_of(q).ok_or_else(|| {
                    Error::BasisMismatch(format!("configuration {q} not in basis"))
                })?;
                Ok(vec![label])
            }
            (Basis::Grid(b), Configuration::Sector(s)) => {
                if s.sector() > b.n_max() {
                    return Err(Error::BasisMismatch(format!(
                        "sector {} above truncation {}",
                        s.sector(),
                        b.n_max()
                    )));
                }
                Ok(b.orbit(&b.cells_of(s)))
            }
            _ => Err(Error::BasisMismatch(
                "configuration kind does not match basis kind".into(),
            )),
        }
    }
}

// ---------------------------------------------------------------------------
// Projections
// ---------------------------------------------------------------------------

/// A region of configuration space: one configuration, one sector, or a set
/// of configuration-space cells within one sector.
#[derive(Debug, Clone)]
pub enum Projection {
    Config(Configuration),
    Sector(usize),
    /// Unordered cell tuples, all in the same sector of a grid basis.
    Cells { sector: usize, tuples: Vec<Vec<usize>> },
}

// ---------------------------------------------------------------------------
// Quantum state
// ---------------------------------------------------------------------------

/// Complex amplitudes over a sectored configuration basis.
///
/// Immutable once constructed; evolution produces successor states.
#[derive(Debug, Clone)]
pub struct QuantumState {
    basis: Arc<Basis>,
    amps: DVector<C64>,
}

impl QuantumState {
    /// Wraps raw cell amplitudes. Grid amplitudes are symmetrized so that the
    /// permutation invariant holds exactly.
    pub fn from_amplitudes(basis: Arc<Basis>, amps: DVector<C64>) -> Result<Self> {
        if amps.len() != basis.dim() {
            return Err(Error::BasisMismatch(format!(
                "amplitude length {} vs basis dimension {}",
                amps.len(),
                basis.dim()
            )));
        }
        let mut state = Self { basis, amps };
        state.symmetrize();
        Ok(state)
    }

    /// Basis state `|q>` on a lattice basis.
    pub fn lattice_basis_state(basis: Arc<Basis>, config: &LatticeConfig) -> Result<Self> {
        let label = basis
            .as_lattice()?
            .label_of(config)
            .ok_or_else(|| Error::BasisMismatch(format!("configuration {config} not in basis")))?;
        let mut amps = DVector::from_element(basis.dim(), C64::new(0.0, 0.0));
        amps[label] = C64::new(1.0, 0.0);
        Ok(Self { basis, amps })
    }

    /// Builds a grid state from wave-function values per sector.
    ///
    /// `sectors[n]` evaluates `psi_n` on an ordered cell tuple; the result is
    /// symmetrized and converted to cell amplitudes `psi * dx^(n/2)`.
    pub fn grid_from_sector_fns(
        basis: Arc<Basis>,
        sectors: &[&dyn Fn(&[usize]) -> C64],
    ) -> Result<Self> {
        let grid = basis.as_grid()?;
        if sectors.len() != grid.n_max() + 1 {
            return Err(Error::BasisMismatch(format!(
                "need {} sector functions, got {}",
                grid.n_max() + 1,
                sectors.len()
            )));
        }
        let mut amps = DVector::from_element(grid.dim(), C64::new(0.0, 0.0));
        for n in 0..=grid.n_max() {
            let scale = grid.dx().powf(n as f64 / 2.0);
            for label in grid.sector_range(n) {
                let tuple = grid.tuple_of(label);
                amps[label] = sectors[n](&tuple) * scale;
            }
        }
        let mut state = Self { basis, amps };
        state.symmetrize();
        Ok(state)
    }

    /// Random normalized state: i.i.d. complex Gaussian amplitudes,
    /// symmetrized on grid bases.
    pub fn random(basis: Arc<Basis>, rng: &mut impl Rng) -> Self {
        let dim = basis.dim();
        let amps = DVector::from_fn(dim, |_, _| {
            C64::new(standard_normal(rng), standard_normal(rng))
        });
        let mut state = Self { basis, amps };
        state.symmetrize();
        state.renormalize();
        state
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn amplitude(&self, label: usize) -> C64 {
        self.amps[label]
    }

    /// `|psi|^2`; 1 for any normalized state.
    pub fn norm_squared(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_squared() - 1.0).abs() <= NORM_TOL
    }

    /// Rescales to unit norm in place.
    pub fn renormalize(&mut self) {
        let n2 = self.norm_squared();
        assert!(n2 > 0.0, "cannot normalize the zero state");
        let s = 1.0 / n2.sqrt();
        self.amps.iter_mut().for_each(|a| *a *= s);
    }

    pub fn normalized(mut self) -> Self {
        self.renormalize();
        self
    }

    /// Multiplies by a global phase `e^{i theta}` (densities are unaffected).
    pub fn with_global_phase(mut self, theta: f64) -> Self {
        let phase = C64::from_polar(1.0, theta);
        self.amps.iter_mut().for_each(|a| *a *= phase);
        self
    }

    /// Complex-conjugates every amplitude.
    pub fn conjugated(mut self) -> Self {
        self.amps.iter_mut().for_each(|a| *a = a.conj());
        self
    }

    /// Averages grid amplitudes over permutation orbits (lattice: no-op).
    fn symmetrize(&mut self) {
        let grid = match self.basis.as_ref() {
            Basis::Grid(g) => g,
            Basis::Lattice(_) => return,
        };
        for n in 2..=grid.n_max() {
            for label in grid.sector_range(n) {
                let tuple = grid.tuple_of(label);
                let mut sorted = tuple.clone();
                sorted.sort_unstable();
                if sorted != tuple {
                    continue; // handled when visiting the sorted representative
                }
                let orbit = grid.orbit(&sorted);
                let mean = orbit.iter().map(|&l| self.amps[l]).sum::<C64>()
                    / C64::new(orbit.len() as f64, 0.0);
                for &l in &orbit {
                    self.amps[l] = mean;
                }
            }
        }
    }

    /// `<psi | P psi>`, in `[0, 1]` for normalized states.
    pub fn project_expectation(&self, p: &Projection) -> Result<f64> {
        let labels = self.projection_labels(p)?;
        Ok(labels.iter().map(|&l| self.amps[l].norm_sqr()).sum())
    }

    fn projection_labels(&self, p: &Projection) -> Result<Vec<usize>> {
        match p {
            Projection::Config(c) => self.basis.labels_of(c),
            Projection::Sector(n) => match self.basis.as_ref() {
                Basis::Grid(g) => {
                    if *n > g.n_max() {
                        return Err(Error::BasisMismatch(format!(
                            "sector {n} above truncation {}",
                            g.n_max()
                        )));
                    }
                    Ok(g.sector_range(*n).collect())
                }
                Basis::Lattice(b) => {
                    if *n as u32 > b.n_max() {
                        return Err(Error::BasisMismatch(format!(
                            "total count {n} above truncation {}",
                            b.n_max()
                        )));
                    }
                    Ok((0..b.dim())
                        .filter(|&l| b.config(l).total() as usize == *n)
                        .collect())
                }
            },
            Projection::Cells { sector, tuples } => {
                let g = self.basis.as_grid()?;
                let mut labels = Vec::new();
                for t in tuples {
                    if t.len() != *sector {
                        return Err(Error::BasisMismatch(format!(
                            "cell tuple of length {} in sector {sector}",
                            t.len()
                        )));
                    }
                    let mut sorted = t.clone();
                    sorted.sort_unstable();
                    labels.extend(g.orbit(&sorted));
                }
                labels.sort_unstable();
                labels.dedup();
                Ok(labels)
            }
        }
    }

    /// Born mass of each configuration (orbit-summed for grid bases).
    ///
    /// Errors on unnormalized input unless `renormalize` is set.
    pub fn born_density(&self, renormalize: bool) -> Result<DensityTable> {
        let n2 = self.norm_squared();
        if !renormalize && (n2 - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sq: n2 });
        }
        let scale = 1.0 / n2;
        let mut masses = BTreeMap::new();
        let scheme = match self.basis.as_ref() {
            Basis::Lattice(b) => {
                for l in 0..b.dim() {
                    let m = self.amps[l].norm_sqr() * scale;
                    masses.insert(BinKey::Index(l), m);
                }
                PartitionScheme::LatticeConfigs { dim: b.dim() }
            }
            Basis::Grid(g) => {
                for n in 0..=g.n_max() {
                    for label in g.sector_range(n) {
                        let tuple = g.tuple_of(label);
                        let mut sorted = tuple;
                        sorted.sort_unstable();
                        *masses.entry(BinKey::Cells(n, sorted)).or_insert(0.0) +=
                            self.amps[label].norm_sqr() * scale;
                    }
                }
                PartitionScheme::GridConfigs { cells: g.cells(), n_max: g.n_max() }
            }
        };
        Ok(DensityTable { scheme, masses })
    }

    /// Draws one configuration from the Born distribution. Grid positions are
    /// placed uniformly within the sampled cell.
    pub fn sample_configuration(&self, rng: &mut impl Rng) -> Result<Configuration> {
        let n2 = self.norm_squared();
        let mut u: f64 = rng.gen::<f64>() * n2;
        let mut chosen = self.amps.len() - 1;
        for (l, a) in self.amps.iter().enumerate() {
            u -= a.norm_sqr();
            if u <= 0.0 {
                chosen = l;
                break;
            }
        }
        match self.basis.as_ref() {
            Basis::Lattice(b) => Ok(Configuration::Lattice(b.config(chosen).clone())),
            Basis::Grid(g) => {
                let tuple = g.tuple_of(chosen);
                let positions = tuple
                    .iter()
                    .map(|&cell| (cell as f64 + rng.gen::<f64>()) * g.dx())
                    .collect();
                Ok(Configuration::Sector(SectorConfig::new(positions)))
            }
        }
    }

    /// Snapshot in the documented JSON schema
    /// `{sectors: [{n, shape, re, im}], dx, hbar}`, with wave-function values
    /// `psi = c / dx^(n/2)`.
    pub fn snapshot(&self, hbar: f64) -> StateSnapshot {
        let mut sectors = Vec::new();
        match self.basis.as_ref() {
            Basis::Lattice(b) => {
                for n in 0..=b.n_max() {
                    let labels: Vec<usize> = (0..b.dim())
                        .filter(|&l| b.config(l).total() == n)
                        .collect();
                    sectors.push(SectorSnapshot {
                        n: n as usize,
                        shape: vec![labels.len()],
                        re: labels.iter().map(|&l| self.amps[l].re).collect(),
                        im: labels.iter().map(|&l| self.amps[l].im).collect(),
                    });
                }
                StateSnapshot { sectors, dx: 1.0, hbar }
            }
            Basis::Grid(g) => {
                for n in 0..=g.n_max() {
                    let scale = 1.0 / g.dx().powf(n as f64 / 2.0);
                    let range = g.sector_range(n);
                    sectors.push(SectorSnapshot {
                        n,
                        shape: vec![g.cells(); n],
                        re: range.clone().map(|l| self.amps[l].re * scale).collect(),
                        im: range.map(|l| self.amps[l].im * scale).collect(),
                    });
                }
                StateSnapshot { sectors, dx: g.dx(), hbar }
            }
        }
    }
}

/// Standard normal via Box-Muller; keeps `rand_distr` out of the tree.
fn standard_normal(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Serialized form of a state, schema `{sectors, dx, hbar}`.
#[derive(Debug, Serialize)]
pub struct StateSnapshot {
    pub sectors: Vec<SectorSnapshot>,
    pub dx: f64,
    pub hbar: f64,
}

#[derive(Debug, Serialize)]
pub struct SectorSnapshot {
    pub n: usize,
    pub shape: Vec<usize>,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

// ---------------------------------------------------------------------------
// Density tables
// ---------------------------------------------------------------------------

/// Key of one bin in a density table.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum BinKey {
    /// Lattice basis label.
    Index(usize),
    /// Unordered cell tuple in a grid sector.
    Cells(usize, Vec<usize>),
    /// Particle-number sector.
    Sector(usize),
    /// Sorted position-bin tuple in a grid sector.
    Bins(usize, Vec<usize>),
}

/// Identifies the partition a table was built over; tables over different
/// partitions cannot be compared.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionScheme {
    LatticeConfigs { dim: usize },
    GridConfigs { cells: usize, n_max: usize },
    SectorMarginal { n_max: usize },
    SectorBinned { n_max: usize, bins: usize },
}

/// Nonnegative masses over a partition of configuration space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityTable {
    scheme: PartitionScheme,
    masses: BTreeMap<BinKey, f64>,
}

impl DensityTable {
    pub fn new(scheme: PartitionScheme, masses: BTreeMap<BinKey, f64>) -> Self {
        Self { scheme, masses }
    }

    pub fn scheme(&self) -> &PartitionScheme {
        &self.scheme
    }

    pub fn masses(&self) -> &BTreeMap<BinKey, f64> {
        &self.masses
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.values().sum()
    }

    pub fn mass(&self, key: &BinKey) -> f64 {
        self.masses.get(key).copied().unwrap_or(0.0)
    }

    /// Number of bins carrying mass above `eps` (the "occupied" count used
    /// for noise floors).
    pub fn support_size(&self, eps: f64) -> usize {
        self.masses.values().filter(|&&m| m > eps).count()
    }
}
