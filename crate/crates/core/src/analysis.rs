//! Peak detection, localization masses, quadrant fractions and the pattern
//! vocabulary used to describe filter-function landscapes: isolated spikes,
//! craters (a ring of maxima around a dip) and lattices (maxima strung along
//! the diagonal nodal lines of Ω).

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::grid::FilterGrid;

pub const DEFAULT_REL_THRESHOLD: f64 = 0.5;
pub const DEFAULT_MIN_SEP: f64 = 0.3;
pub const DEFAULT_MASS_RADIUS: f64 = 0.35;

/// At most two peaks whose basins hold this much probability form a spike pattern.
pub const SPIKE_MASS_FRACTION: f64 = 0.8;
/// Largest relative height spread among the maxima of a crater ring; also the
/// minimum relative depth of the dip the ring encloses.
pub const CRATER_HEIGHT_SPREAD: f64 = 0.1;
pub const LATTICE_MIN_PEAKS: usize = 4;
/// Angular tolerance for a level-set normal to count as diagonal.
pub const LATTICE_ANGLE_TOL: f64 = 15.0 * PI / 180.0;
/// Share of peaks that must sit on the diagonal level set for a lattice.
pub const LATTICE_ALIGNED_FRACTION: f64 = 0.75;
/// Ω band, as a fraction of the Ω range, within which a peak lies on a level set.
pub const LEVEL_SET_BAND: f64 = 0.05;
/// Samples of the 1D Ω profile used for classification.
pub const PROFILE_SAMPLES: usize = 2001;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quadrant {
    I,
    II,
    III,
    IV,
}

impl Quadrant {
    /// Quadrant by sign of `(u, v)`; a zero coordinate counts as positive.
    pub fn of(u: f64, v: f64) -> Quadrant {
        match (u >= 0.0, v >= 0.0) {
            (true, true) => Quadrant::I,
            (false, true) => Quadrant::II,
            (false, false) => Quadrant::III,
            (true, false) => Quadrant::IV,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub const ALL: [Quadrant; 4] = [Quadrant::I, Quadrant::II, Quadrant::III, Quadrant::IV];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub u: f64,
    pub v: f64,
    pub i: usize,
    pub j: usize,
    pub height: f64,
    /// Probability inside the disk of radius `PeakOptions::radius`, nodes
    /// shared with a closer peak excluded.
    pub mass: f64,
    /// Probability of every node whose steepest-ascent path ends on this peak.
    pub basin_mass: f64,
    pub quadrant: Quadrant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pattern {
    Spike(usize),
    Crater,
    Lattice,
    Distributed,
}

impl Pattern {
    pub fn is_spike(&self) -> bool {
        matches!(self, Pattern::Spike(_))
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Spike(n) => write!(f, "spike({n})"),
            Pattern::Crater => f.write_str("crater"),
            Pattern::Lattice => f.write_str("lattice"),
            Pattern::Distributed => f.write_str("distributed"),
        }
    }
}

impl std::str::FromStr for Pattern {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "crater" => Ok(Pattern::Crater),
            "lattice" => Ok(Pattern::Lattice),
            "distributed" => Ok(Pattern::Distributed),
            _ => s
                .strip_prefix("spike(")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|n| n.parse().ok())
                .map(Pattern::Spike)
                .ok_or_else(|| format!("unknown pattern `{s}`")),
        }
    }
}

impl Serialize for Pattern {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Pattern {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeakOptions {
    pub rel_threshold: f64,
    pub min_sep: f64,
    pub radius: f64,
}

impl Default for PeakOptions {
    fn default() -> Self {
        PeakOptions { rel_threshold: DEFAULT_REL_THRESHOLD, min_sep: DEFAULT_MIN_SEP, radius: DEFAULT_MASS_RADIUS }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakReport {
    pub options: PeakOptions,
    /// Sorted by descending height.
    pub peaks: Vec<Peak>,
    pub pattern: Pattern,
    /// Fractions in quadrants I..IV; absent for domains not centred on the origin.
    pub quadrant_mass: Option<[f64; 4]>,
}

impl PeakReport {
    pub fn total_mass(&self) -> f64 {
        self.peaks.iter().map(|p| p.mass).sum()
    }

    pub fn total_basin_mass(&self) -> f64 {
        self.peaks.iter().map(|p| p.basin_mass).sum()
    }
}

const NEIGHBOURS: [(isize, isize); 8] = [(-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)];

fn neighbours(grid: &FilterGrid, i: usize, j: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
    NEIGHBOURS.iter().filter_map(move |&(di, dj)| {
        let (ni, nj) = (i as isize + di, j as isize + dj);
        let inside = ni >= 0 && nj >= 0 && (ni as usize) < grid.spec.nx && (nj as usize) < grid.spec.ny;
        inside.then_some((ni as usize, nj as usize))
    })
}

/// Interior nodes no lower than any of their eight neighbours and higher than
/// at least one, in row-major order.
pub fn local_maxima(grid: &FilterGrid) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for j in 1..grid.spec.ny.saturating_sub(1) {
        for i in 1..grid.spec.nx.saturating_sub(1) {
            let w = grid.value(i, j);
            let mut higher_than_one = false;
            let mut is_max = true;
            for (ni, nj) in neighbours(grid, i, j) {
                let n = grid.value(ni, nj);
                if n > w {
                    is_max = false;
                    break;
                }
                higher_than_one |= n < w;
            }
            if is_max && higher_than_one {
                out.push((i, j));
            }
        }
    }
    out
}

/// Terminal node of the steepest-ascent path from every node.
fn ascent_targets(grid: &FilterGrid) -> Vec<usize> {
    let spec = &grid.spec;
    let mut next: Vec<usize> = (0..spec.len()).collect();
    for j in 0..spec.ny {
        for i in 0..spec.nx {
            let here = grid.value(i, j);
            let mut best = here;
            for (ni, nj) in neighbours(grid, i, j) {
                let n = grid.value(ni, nj);
                if n > best {
                    best = n;
                    next[spec.index(i, j)] = spec.index(ni, nj);
                }
            }
        }
    }
    // Paths strictly increase, so following them terminates.
    let mut terminal = vec![usize::MAX; spec.len()];
    let mut path = Vec::new();
    for start in 0..spec.len() {
        let mut k = start;
        while terminal[k] == usize::MAX && next[k] != k {
            path.push(k);
            k = next[k];
        }
        let end = if terminal[k] == usize::MAX { k } else { terminal[k] };
        terminal[k] = end;
        for p in path.drain(..) {
            terminal[p] = end;
        }
    }
    terminal
}

/// Probability within `radius` of each peak. A node inside several disks
/// counts only for the nearest peak, so the masses never overlap.
fn disk_masses(grid: &FilterGrid, peaks: &[(f64, f64)], radius: f64) -> Vec<f64> {
    let spec = &grid.spec;
    let ri = (radius / spec.du()).ceil() as usize + 1;
    let rj = (radius / spec.dv()).ceil() as usize + 1;
    let dist2 = |k: usize, u: f64, v: f64| (u - peaks[k].0).powi(2) + (v - peaks[k].1).powi(2);
    let mut masses = vec![0.0; peaks.len()];
    for (k, &(u0, v0)) in peaks.iter().enumerate() {
        let (ci, cj) = spec.nearest_node(u0, v0);
        for j in cj.saturating_sub(rj)..=(cj + rj).min(spec.ny - 1) {
            let v = spec.v(j);
            for i in ci.saturating_sub(ri)..=(ci + ri).min(spec.nx - 1) {
                let u = spec.u(i);
                let d = dist2(k, u, v);
                if d > radius * radius {
                    continue;
                }
                let owned = (0..peaks.len()).all(|m| m == k || dist2(m, u, v) > d || (dist2(m, u, v) == d && m > k));
                if owned {
                    masses[k] += grid.value(i, j) * spec.cell_area(i, j);
                }
            }
        }
    }
    masses
}

/// Peaks with the default mass radius.
pub fn find_peaks(grid: &FilterGrid, rel_threshold: f64, min_sep: f64) -> Result<PeakReport> {
    find_peaks_with(grid, &PeakOptions { rel_threshold, min_sep, ..Default::default() })
}

pub fn find_peaks_with(grid: &FilterGrid, opts: &PeakOptions) -> Result<PeakReport> {
    let global_max = grid.max_value();
    if grid.values.is_empty() || !(global_max > 0.0) {
        return Err(Error::EmptyGrid);
    }
    let spec = &grid.spec;
    let total = grid.integral();

    let mut candidates: Vec<(usize, usize)> =
        local_maxima(grid).into_iter().filter(|&(i, j)| grid.value(i, j) >= opts.rel_threshold * global_max).collect();
    candidates.sort_by(|a, b| grid.value(b.0, b.1).total_cmp(&grid.value(a.0, a.1)));

    // Greedy suppression; every candidate node maps to the peak that kept it.
    let mut kept: Vec<(usize, usize)> = Vec::new();
    let mut owner = std::collections::HashMap::new();
    for &(i, j) in &candidates {
        let (u, v) = (spec.u(i), spec.v(j));
        let nearest = kept
            .iter()
            .enumerate()
            .map(|(n, &(pi, pj))| (n, (spec.u(pi) - u).hypot(spec.v(pj) - v)))
            .filter(|&(_, d)| d < opts.min_sep)
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match nearest {
            Some((n, _)) => {
                owner.insert(spec.index(i, j), n);
            }
            None => {
                owner.insert(spec.index(i, j), kept.len());
                kept.push((i, j));
            }
        }
    }

    let mut basin = vec![0.0; kept.len()];
    for (k, end) in ascent_targets(grid).into_iter().enumerate() {
        if let Some(&n) = owner.get(&end) {
            let (i, j) = (k % spec.nx, k / spec.nx);
            basin[n] += grid.value(i, j) * spec.cell_area(i, j);
        }
    }

    let centres: Vec<(f64, f64)> = kept.iter().map(|&(i, j)| (spec.u(i), spec.v(j))).collect();
    let disk = disk_masses(grid, &centres, opts.radius);
    let peaks: Vec<Peak> = kept
        .iter()
        .zip(basin)
        .zip(disk)
        .map(|((&(i, j), basin_mass), mass)| {
            let (u, v) = (spec.u(i), spec.v(j));
            Peak {
                u,
                v,
                i,
                j,
                height: grid.value(i, j),
                mass: mass / total,
                basin_mass: basin_mass / total,
                quadrant: Quadrant::of(u, v),
            }
        })
        .collect();

    let mut report =
        PeakReport { options: *opts, peaks, pattern: Pattern::Distributed, quadrant_mass: quadrant_mass(grid).ok() };
    report.pattern = classify_pattern(&report, grid);
    Ok(report)
}

/// Probability in quadrants I..IV. Nodes on an axis are split evenly between
/// the quadrants they border.
pub fn quadrant_mass(grid: &FilterGrid) -> Result<[f64; 4]> {
    if !grid.spec.is_symmetric() {
        return Err(Error::AsymmetricDomain);
    }
    let spec = &grid.spec;
    let mut q = [0.0; 4];
    for j in 0..spec.ny {
        let v = spec.v(j);
        for i in 0..spec.nx {
            let u = spec.u(i);
            let m = grid.value(i, j) * spec.cell_area(i, j);
            let us: &[f64] = if u == 0.0 { &[1.0, -1.0] } else { &[u] };
            let vs: &[f64] = if v == 0.0 { &[1.0, -1.0] } else { &[v] };
            let share = m / (us.len() * vs.len()) as f64;
            for &su in us {
                for &sv in vs {
                    q[Quadrant::of(su, sv).index()] += share;
                }
            }
        }
    }
    let total: f64 = q.iter().sum();
    if !(total > 0.0) {
        return Err(Error::EmptyGrid);
    }
    Ok(q.map(|x| x / total))
}

/// Label the landscape behind `report`.
///
/// Spikes are judged on basin mass. When the grid carries its field
/// parameters, craters and lattices are read off the Ω level sets, since W
/// depends on position only through Ω; grids without metadata fall back to
/// the geometry of the detected peaks.
pub fn classify_pattern(report: &PeakReport, grid: &FilterGrid) -> Pattern {
    let n = report.peaks.len();
    if n == 0 {
        return Pattern::Distributed;
    }
    if n <= 2 && report.total_basin_mass() >= SPIKE_MASS_FRACTION {
        return Pattern::Spike(n);
    }
    match LevelSets::new(grid) {
        Some(sets) => sets.classify(report),
        None => classify_by_geometry(report, grid),
    }
}

struct LevelSets {
    profile: Vec<(f64, f64)>,
    omega1: f64,
    omega2: f64,
    lo: f64,
    hi: f64,
}

impl LevelSets {
    fn new(grid: &FilterGrid) -> Option<Self> {
        let meta = grid.meta?;
        let profile = grid.rabi_profile(PROFILE_SAMPLES)?;
        let (lo, hi) = grid.rabi_range()?;
        (hi > lo).then_some(LevelSets { profile, omega1: meta.field.omega1, omega2: meta.field.omega2, lo, hi })
    }

    fn peak_omega(&self) -> (f64, f64) {
        self.profile.iter().copied().fold((0.0, f64::NEG_INFINITY), |best, p| if p.1 > best.1 { p } else { best })
    }

    fn rabi(&self, u: f64, v: f64) -> f64 {
        self.omega1 * u.sin() + self.omega2 * v.sin()
    }

    fn on_level(&self, peak: &Peak, level: f64) -> bool {
        (self.rabi(peak.u, peak.v) - level).abs() <= LEVEL_SET_BAND * (self.hi - self.lo)
    }

    fn classify(&self, report: &PeakReport) -> Pattern {
        let (level, top) = self.peak_omega();

        // A closed ring: the level set avoids both axes, so it encircles the
        // antinode on its side, and that antinode sits in a dip.
        let closed = level.abs() > self.omega1.max(self.omega2);
        let centre = if level > 0.0 { self.profile.last() } else { self.profile.first() };
        let dipped = centre.is_some_and(|&(_, w)| w <= (1.0 - CRATER_HEIGHT_SPREAD) * top);
        if closed && dipped {
            let ring: Vec<f64> = report.peaks.iter().filter(|p| self.on_level(p, level)).map(|p| p.height).collect();
            if ring.len() >= 3 {
                let max = ring.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let min = ring.iter().copied().fold(f64::INFINITY, f64::min);
                if (max - min) < CRATER_HEIGHT_SPREAD * max {
                    return Pattern::Crater;
                }
            }
        }

        // Lattice: maxima strung along level sets whose normals are diagonal,
        // i.e. the nodal lines u ± v ≡ const of Ω.
        let aligned = report.peaks.iter().filter(|p| self.on_level(p, level) && self.diagonal_normal(p.u, p.v)).count();
        if aligned >= LATTICE_MIN_PEAKS && aligned as f64 >= LATTICE_ALIGNED_FRACTION * report.peaks.len() as f64 {
            return Pattern::Lattice;
        }
        Pattern::Distributed
    }

    fn diagonal_normal(&self, u: f64, v: f64) -> bool {
        let (gu, gv) = (self.omega1 * u.cos(), self.omega2 * v.cos());
        if gu.hypot(gv) < 1e-9 * (self.omega1 + self.omega2) {
            return false;
        }
        let angle = gv.atan2(gu).rem_euclid(FRAC_PI_2);
        (angle - FRAC_PI_4).abs() <= LATTICE_ANGLE_TOL
    }
}

fn classify_by_geometry(report: &PeakReport, grid: &FilterGrid) -> Pattern {
    let peaks = &report.peaks;
    let top = peaks[0].height;
    let min_sep = report.options.min_sep;

    let ring: Vec<&Peak> = peaks.iter().filter(|p| p.height >= (1.0 - CRATER_HEIGHT_SPREAD) * top).collect();
    if ring.len() >= 3 {
        let k = ring.len() as f64;
        let cu = ring.iter().map(|p| p.u).sum::<f64>() / k;
        let cv = ring.iter().map(|p| p.v).sum::<f64>() / k;
        let radii: Vec<f64> = ring.iter().map(|p| (p.u - cu).hypot(p.v - cv)).collect();
        let mean = radii.iter().sum::<f64>() / k;
        let spread = radii.iter().copied().fold(0.0, f64::max) - radii.iter().copied().fold(f64::INFINITY, f64::min);
        let mut angles: Vec<f64> = ring.iter().map(|p| (p.v - cv).atan2(p.u - cu)).collect();
        angles.sort_by(f64::total_cmp);
        let wrap = angles[0] + 2.0 * PI - angles[angles.len() - 1];
        let max_gap = angles.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::max);
        let (ci, cj) = grid.spec.nearest_node(cu, cv);
        let dip = grid.value(ci, cj) <= (1.0 - CRATER_HEIGHT_SPREAD) * top;
        if mean >= min_sep && spread <= 0.5 * mean && max_gap <= FRAC_PI_2 && dip {
            return Pattern::Crater;
        }
    }

    if peaks.len() >= LATTICE_MIN_PEAKS {
        let tol = min_sep / 2.0;
        for a in 0..peaks.len() {
            for b in a + 1..peaks.len() {
                let (du, dv) = (peaks[b].u - peaks[a].u, peaks[b].v - peaks[a].v);
                let len = du.hypot(dv);
                if len == 0.0 {
                    continue;
                }
                let on_line = peaks
                    .iter()
                    .filter(|p| ((p.u - peaks[a].u) * dv - (p.v - peaks[a].v) * du).abs() / len <= tol)
                    .count();
                if on_line >= LATTICE_MIN_PEAKS {
                    return Pattern::Lattice;
                }
            }
        }
    }
    Pattern::Distributed
}
