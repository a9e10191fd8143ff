//! Critical site percolation on the triangular lattice at p = 1/2:
//! cluster construction via union-find, connection-event measurement,
//! one-arm exponent fits and the factorization-ratio pipeline.
//!
//! The region is an axial-coordinate parallelogram: site (i, j) sits at
//! Euclidean position (i + j/2, j·√3/2) in units of the lattice constant,
//! with the bottom row on the real axis. Interior sites have the six
//! triangular-lattice neighbors (±1,0), (0,±1), (+1,−1), (−1,+1).
//!
//! Occupancy is sampled word-parallel from counter-based streams:
//! word k of sample `index` under `seed` is a pure function of
//! (seed, index, k), so measurements are reproducible at any thread count
//! and sample order.
//!
//! Self-duality anchor: on an L×L parallelogram exactly one of
//! {open left↔right crossing, closed bottom↔top crossing} occurs, and the
//! transpose automorphism exchanges the two, so the crossing probability
//! is exactly 1/2 at p = 1/2 for every L.

mod union_find;

pub use union_find::UnionFind;

use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::rng::word_at;

pub const SQRT3_2: f64 = 0.866_025_403_784_438_6;

/// Axial-parallelogram region of a triangular lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeRegion {
    /// Sites per row.
    pub width: usize,
    /// Number of rows.
    pub height: usize,
}

impl LatticeRegion {
    pub fn new(width: usize, height: usize) -> Result<Self> {
        if width < 2 || height < 2 {
            return domain("lattice region needs width and height at least 2");
        }
        if width * height > u32::MAX as usize / 2 {
            return domain("lattice region too large for 32-bit site ids");
        }
        Ok(LatticeRegion { width, height })
    }

    pub fn sites(&self) -> usize {
        self.width * self.height
    }

    pub fn words(&self) -> usize {
        self.sites().div_ceil(64)
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> u32 {
        (j * self.width + i) as u32
    }

    /// Euclidean position of site (i, j).
    #[inline]
    pub fn position(&self, i: usize, j: usize) -> (f64, f64) {
        (i as f64 + 0.5 * j as f64, SQRT3_2 * j as f64)
    }

    /// Sites within Euclidean distance `radius` of `center`.
    pub fn ball_sites(&self, center: (f64, f64), radius: f64) -> Vec<u32> {
        let mut out = Vec::new();
        let r2 = radius * radius;
        let j_lo = ((center.1 - radius) / SQRT3_2).floor().max(0.0) as usize;
        let j_hi = (((center.1 + radius) / SQRT3_2).ceil() as usize).min(self.height - 1);
        for j in j_lo..=j_hi {
            for i in 0..self.width {
                let (x, y) = self.position(i, j);
                let (dx, dy) = (x - center.0, y - center.1);
                if dx * dx + dy * dy <= r2 {
                    out.push(self.index(i, j));
                }
            }
        }
        out
    }
}

/// A boundary arc of the region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Arc {
    Left,
    Right,
    Bottom,
    Top,
    /// The whole region boundary (one-arm events).
    Boundary,
    /// Bottom-row sites with x-position in [from_x, to_x], in units of the
    /// region width.
    BottomSegment { from_x: f64, to_x: f64 },
}

impl Arc {
    fn sites(&self, region: &LatticeRegion) -> Vec<u32> {
        match *self {
            Arc::Left => (0..region.height).map(|j| region.index(0, j)).collect(),
            Arc::Right => (0..region.height)
                .map(|j| region.index(region.width - 1, j))
                .collect(),
            Arc::Bottom => (0..region.width).map(|i| region.index(i, 0)).collect(),
            Arc::Top => (0..region.width)
                .map(|i| region.index(i, region.height - 1))
                .collect(),
            Arc::Boundary => {
                let mut sites: Vec<u32> = Arc::Bottom.sites(region);
                sites.extend(Arc::Top.sites(region));
                sites.extend(Arc::Left.sites(region));
                sites.extend(Arc::Right.sites(region));
                sites.sort_unstable();
                sites.dedup();
                sites
            }
            Arc::BottomSegment { from_x, to_x } => {
                let scale = region.width as f64;
                (0..region.width)
                    .filter(|&i| {
                        let x = i as f64;
                        x >= from_x * scale && x <= to_x * scale
                    })
                    .map(|i| region.index(i, 0))
                    .collect()
            }
        }
    }
}

/// Declarative connection event. Anchor coordinates are relative to the
/// region width L (a bottom anchor `u` sits at x = u·L on the real axis;
/// a bulk anchor `(x, y)` at (x·L, y·L)); `epsilon` is the neighborhood
/// radius in units of L.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EventSpec {
    /// Open crossing between two boundary arcs.
    Crossing { arc_a: Arc, arc_b: Arc },
    /// Arc connected to the ε-ball of a boundary point.
    BoundaryPoint { arc: Arc, u3: f64, epsilon: f64 },
    /// Arc connected to the ε-ball of a bulk point.
    BulkPoint { arc: Arc, w: (f64, f64), epsilon: f64 },
    /// Two boundary ε-balls connected.
    TwoPoint { u1: f64, u3: f64, epsilon: f64 },
    /// Boundary ε-ball connected to a bulk ε-ball.
    ThreePoint { u1: f64, w: (f64, f64), epsilon: f64 },
    /// One cluster meeting all three ε-balls.
    FourPoint {
        u1: f64,
        u3: f64,
        w: (f64, f64),
        epsilon: f64,
    },
}

impl EventSpec {
    pub fn epsilon(&self) -> f64 {
        match *self {
            EventSpec::Crossing { .. } => 0.0,
            EventSpec::BoundaryPoint { epsilon, .. }
            | EventSpec::BulkPoint { epsilon, .. }
            | EventSpec::TwoPoint { epsilon, .. }
            | EventSpec::ThreePoint { epsilon, .. }
            | EventSpec::FourPoint { epsilon, .. } => epsilon,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EventSpec::Crossing { .. } => "crossing",
            EventSpec::BoundaryPoint { .. } => "boundary_point",
            EventSpec::BulkPoint { .. } => "bulk_point",
            EventSpec::TwoPoint { .. } => "two_point",
            EventSpec::ThreePoint { .. } => "three_point",
            EventSpec::FourPoint { .. } => "four_point",
        }
    }

    /// Resolve the event to concrete site groups; the event occurs when a
    /// single cluster intersects every group.
    pub fn compile(&self, region: &LatticeRegion) -> Result<ResolvedEvent> {
        let scale = region.width as f64;
        let ball = |anchor: (f64, f64), eps: f64| -> Result<Vec<u32>> {
            let sites = region.ball_sites((anchor.0 * scale, anchor.1 * scale), eps * scale);
            if sites.is_empty() {
                return domain(format!(
                    "neighborhood of ({}, {}) at radius {} contains no sites",
                    anchor.0, anchor.1, eps
                ));
            }
            Ok(sites)
        };
        let arc_sites = |arc: &Arc| -> Result<Vec<u32>> {
            let sites = arc.sites(region);
            if sites.is_empty() {
                return domain("boundary arc contains no sites");
            }
            Ok(sites)
        };
        let check_sep = |eps: f64, anchors: &[(f64, f64)]| -> Result<()> {
            if !(eps > 0.0) {
                return domain("epsilon must be positive");
            }
            for (k, a) in anchors.iter().enumerate() {
                for b in anchors.iter().skip(k + 1) {
                    let sep = ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt();
                    if 2.0 * eps >= sep {
                        return domain(format!(
                            "epsilon {eps} too large for anchor separation {sep}"
                        ));
                    }
                }
            }
            Ok(())
        };
        let groups = match *self {
            EventSpec::Crossing { arc_a, arc_b } => {
                vec![arc_sites(&arc_a)?, arc_sites(&arc_b)?]
            }
            EventSpec::BoundaryPoint { arc, u3, epsilon } => {
                check_sep(epsilon, &[(u3, 0.0)])?;
                vec![arc_sites(&arc)?, ball((u3, 0.0), epsilon)?]
            }
            EventSpec::BulkPoint { arc, w, epsilon } => {
                check_sep(epsilon, &[w])?;
                vec![arc_sites(&arc)?, ball(w, epsilon)?]
            }
            EventSpec::TwoPoint { u1, u3, epsilon } => {
                check_sep(epsilon, &[(u1, 0.0), (u3, 0.0)])?;
                vec![ball((u1, 0.0), epsilon)?, ball((u3, 0.0), epsilon)?]
            }
            EventSpec::ThreePoint { u1, w, epsilon } => {
                check_sep(epsilon, &[(u1, 0.0), w])?;
                vec![ball((u1, 0.0), epsilon)?, ball(w, epsilon)?]
            }
            EventSpec::FourPoint { u1, u3, w, epsilon } => {
                check_sep(epsilon, &[(u1, 0.0), (u3, 0.0), w])?;
                vec![
                    ball((u1, 0.0), epsilon)?,
                    ball((u3, 0.0), epsilon)?,
                    ball(w, epsilon)?,
                ]
            }
        };
        Ok(ResolvedEvent { groups })
    }
}

/// Site groups of a compiled event.
#[derive(Debug, Clone)]
pub struct ResolvedEvent {
    pub groups: Vec<Vec<u32>>,
}

/// Monte Carlo estimate of an event probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub hits: u64,
    pub n: u64,
    pub p_hat: f64,
    pub stderr: f64,
    pub seed: u64,
    pub l: usize,
    pub epsilon: f64,
}

impl Estimate {
    fn from_hits(hits: u64, n: u64, seed: u64, l: usize, epsilon: f64) -> Self {
        let p_hat = hits as f64 / n as f64;
        Estimate {
            hits,
            n,
            p_hat,
            stderr: (p_hat * (1.0 - p_hat) / n as f64).sqrt(),
            seed,
            l,
            epsilon,
        }
    }
}

/// Fill the occupancy bitset of sample `index`: site k open iff bit k of
/// word_at(seed, index, k/64) is set (p = 1/2 exactly).
pub fn sample_configuration(region: &LatticeRegion, seed: u64, index: u64, out: &mut Vec<u64>) {
    let words = region.words();
    out.clear();
    out.extend((0..words as u64).map(|k| word_at(seed, index, k)));
    // mask the tail so out-of-range sites read closed
    let tail_bits = region.sites() % 64;
    if tail_bits > 0 {
        let last = out.last_mut().expect("at least one word");
        *last &= (1u64 << tail_bits) - 1;
    }
}

#[inline]
fn is_open(occ: &[u64], idx: u32) -> bool {
    occ[(idx >> 6) as usize] >> (idx & 63) & 1 == 1
}

/// Union-find labeling of the open clusters: two open sites share a root
/// iff they are connected through open triangular-lattice neighbors.
pub fn clusters(occ: &[u64], region: &LatticeRegion, uf: &mut UnionFind) {
    debug_assert_eq!(uf.len(), region.sites());
    uf.reset();
    let w = region.width;
    let h = region.height;
    for j in 0..h {
        let row = j * w;
        for i in 0..w {
            let idx = (row + i) as u32;
            if !is_open(occ, idx) {
                continue;
            }
            // directed neighbor set {E, N, NW} covers all six undirected
            if i + 1 < w && is_open(occ, idx + 1) {
                uf.union(idx, idx + 1);
            }
            if j + 1 < h {
                let up = idx + w as u32;
                if is_open(occ, up) {
                    uf.union(idx, up);
                }
                if i > 0 && is_open(occ, up - 1) {
                    uf.union(idx, up - 1);
                }
            }
        }
        }
}

/// Does a single open cluster intersect every group?
pub fn event_occurs(
    occ: &[u64],
    uf: &mut UnionFind,
    event: &ResolvedEvent,
) -> bool {
    // roots of the open sites of the first group
    let mut roots: Vec<u32> = Vec::new();
    for (gi, group) in event.groups.iter().enumerate() {
        if gi == 0 {
            roots = group
                .iter()
                .filter(|&&s| is_open(occ, s))
                .map(|&s| uf.find(s))
                .collect();
            roots.sort_unstable();
            roots.dedup();
        } else {
            let mut next: Vec<u32> = group
                .iter()
                .filter(|&&s| is_open(occ, s))
                .map(|&s| uf.find(s))
                .filter(|r| roots.binary_search(r).is_ok())
                .collect();
            next.sort_unstable();
            next.dedup();
            roots = next;
        }
        if roots.is_empty() {
            return false;
        }
    }
    true
}

/// Monte Carlo estimate of P[event] over `n` independent configurations.
pub fn measure(
    event: &EventSpec,
    region: &LatticeRegion,
    n: u64,
    seed: u64,
) -> Result<Estimate> {
    let estimates = measure_coupled(std::slice::from_ref(event), region, n, seed)?;
    Ok(estimates[0])
}

/// Measure several events on the same configurations (coupled samples);
/// one clustering pass serves every event.
pub fn measure_coupled(
    events: &[EventSpec],
    region: &LatticeRegion,
    n: u64,
    seed: u64,
) -> Result<Vec<Estimate>> {
    if n == 0 {
        return domain("need at least one sample");
    }
    let resolved: Vec<ResolvedEvent> = events
        .iter()
        .map(|e| e.compile(region))
        .collect::<Result<_>>()?;
    let hits = (0..n)
        .into_par_iter()
        .fold(
            || (vec![0u64; events.len()], UnionFind::new(region.sites()), Vec::new()),
            |(mut acc, mut uf, mut occ), index| {
                sample_configuration(region, seed, index, &mut occ);
                clusters(&occ, region, &mut uf);
                for (k, ev) in resolved.iter().enumerate() {
                    if event_occurs(&occ, &mut uf, ev) {
                        acc[k] += 1;
                    }
                }
                (acc, uf, occ)
            },
        )
        .map(|(acc, _, _)| acc)
        .reduce(
            || vec![0u64; events.len()],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(events
        .iter()
        .zip(hits)
        .map(|(ev, h)| Estimate::from_hits(h, n, seed, region.width, ev.epsilon()))
        .collect())
}

/// Weighted least-squares fit of log p against log ε.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentFit {
    pub slope: f64,
    pub slope_err: f64,
    pub n_used: usize,
    pub n_dropped: usize,
}

/// Fit P(ε) ~ ε^slope from (ε, p̂, stderr) triples; non-positive
/// estimates are dropped.
pub fn exponent_fit(points: &[(f64, f64, f64)]) -> Result<ExponentFit> {
    let usable: Vec<(f64, f64, f64)> = points
        .iter()
        .filter(|&&(eps, p, _)| eps > 0.0 && p > 0.0)
        .cloned()
        .collect();
    let n_dropped = points.len() - usable.len();
    if usable.len() < 2 {
        return domain("exponent fit needs at least two positive estimates");
    }
    // y = ln p, σ_y = stderr/p (zero stderr gets a tiny floor)
    let pts: Vec<(f64, f64, f64)> = usable
        .iter()
        .map(|&(eps, p, se)| (eps.ln(), p.ln(), (se / p).max(1e-12)))
        .collect();
    let wsum: f64 = pts.iter().map(|&(_, _, s)| 1.0 / (s * s)).sum();
    let xbar: f64 = pts.iter().map(|&(x, _, s)| x / (s * s)).sum::<f64>() / wsum;
    let ybar: f64 = pts.iter().map(|&(_, y, s)| y / (s * s)).sum::<f64>() / wsum;
    let sxx: f64 = pts
        .iter()
        .map(|&(x, _, s)| (x - xbar) * (x - xbar) / (s * s))
        .sum();
    let sxy: f64 = pts
        .iter()
        .map(|&(x, y, s)| (x - xbar) * (y - ybar) / (s * s))
        .sum();
    Ok(ExponentFit {
        slope: sxy / sxx,
        slope_err: (1.0 / sxx).sqrt(),
        n_used: usable.len(),
        n_dropped,
    })
}

/// The three anchors of a factorization geometry, relative to L.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorizationGeometry {
    pub u1: f64,
    pub u3: f64,
    pub w: (f64, f64),
}

impl FactorizationGeometry {
    /// Equilateral anchor triangle (all pairwise distances 0.4·L),
    /// centered under the bulk point. Balanced distances minimize the
    /// finite-ε corrections of the ratio; at ε = 1/32 an elongated
    /// triangle measurably drags the ratio away from K_F.
    pub fn centered() -> Self {
        FactorizationGeometry {
            u1: 0.30,
            u3: 0.70,
            w: (0.5, 0.346_410_161_513_775_5),
        }
    }

    /// Off-center variant with comparable distance scales, for the
    /// geometry-independence check.
    pub fn off_center() -> Self {
        FactorizationGeometry {
            u1: 0.22,
            u3: 0.58,
            w: (0.45, 0.31),
        }
    }
}

/// Estimated factorization ratio P₄²/(P₃·P₃·P₂) with delta-method error.
#[derive(Debug, Clone)]
pub struct FactorizationEstimate {
    /// (ratio, stderr), or None when a component estimate is censored
    /// (zero hits).
    pub ratio: Option<(f64, f64)>,
    /// The four component estimates: P₂(u₁,u₃), P₃(u₁,w), P₃(u₃,w), P₄.
    pub components: [Estimate; 4],
}

/// Measure the four ε-neighborhood connection probabilities on independent
/// sample streams and form P₄² / (P₃(u₁,w)·P₃(u₃,w)·P₂(u₁,u₃)).
pub fn factorization_ratio(
    geometry: &FactorizationGeometry,
    region: &LatticeRegion,
    epsilon: f64,
    n: u64,
    seed: u64,
) -> Result<FactorizationEstimate> {
    let g = geometry;
    let events = [
        EventSpec::TwoPoint {
            u1: g.u1,
            u3: g.u3,
            epsilon,
        },
        EventSpec::ThreePoint {
            u1: g.u1,
            w: g.w,
            epsilon,
        },
        EventSpec::ThreePoint {
            u1: g.u3,
            w: g.w,
            epsilon,
        },
        EventSpec::FourPoint {
            u1: g.u1,
            u3: g.u3,
            w: g.w,
            epsilon,
        },
    ];
    let mut components = Vec::with_capacity(4);
    for (k, ev) in events.iter().enumerate() {
        // disjoint stream subspace per event: stream = event · 2⁴⁰ + index
        let sub_seed = seed ^ ((k as u64 + 1) << 40);
        components.push(measure(ev, region, n, sub_seed)?);
    }
    let components: [Estimate; 4] = components.try_into().expect("four components");
    let [p2, p3a, p3b, p4] = components;
    let ratio = if components.iter().any(|e| e.hits == 0) {
        None
    } else {
        let r = p4.p_hat * p4.p_hat / (p3a.p_hat * p3b.p_hat * p2.p_hat);
        let rel = (2.0 * p4.stderr / p4.p_hat).powi(2)
            + (p3a.stderr / p3a.p_hat).powi(2)
            + (p3b.stderr / p3b.p_hat).powi(2)
            + (p2.stderr / p2.p_hat).powi(2);
        Some((r, r * rel.sqrt()))
    };
    Ok(FactorizationEstimate { ratio, components })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flood_fill_connected(occ: &[u64], region: &LatticeRegion, from: &[u32], to: &[u32]) -> bool {
        let mut seen = vec![false; region.sites()];
        let mut stack: Vec<u32> = from.iter().cloned().filter(|&s| is_open(occ, s)).collect();
        for &s in &stack {
            seen[s as usize] = true;
        }
        let targets: std::collections::HashSet<u32> =
            to.iter().cloned().filter(|&s| is_open(occ, s)).collect();
        let (w, h) = (region.width as i64, region.height as i64);
        while let Some(s) = stack.pop() {
            if targets.contains(&s) {
                return true;
            }
            let (i, j) = ((s as i64) % w, (s as i64) / w);
            for (di, dj) in [(1i64, 0i64), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)] {
                let (ni, nj) = (i + di, j + dj);
                if ni < 0 || nj < 0 || ni >= w || nj >= h {
                    continue;
                }
                let nidx = (nj * w + ni) as u32;
                if !seen[nidx as usize] && is_open(occ, nidx) {
                    seen[nidx as usize] = true;
                    stack.push(nidx);
                }
            }
        }
        false
    }

    fn occ_from_bits(bits: u32, sites: usize) -> Vec<u64> {
        let mut occ = vec![0u64; sites.div_ceil(64)];
        for k in 0..sites {
            if bits >> k & 1 == 1 {
                occ[k / 64] |= 1 << (k % 64);
            }
        }
        occ
    }

    #[test]
    fn interior_sites_have_six_neighbors() {
        let region = LatticeRegion::new(8, 8).unwrap();
        let (i, j) = (4, 4);
        let (x, y) = region.position(i, j);
        let mut count = 0;
        for jj in 0..8 {
            for ii in 0..8 {
                if (ii, jj) == (i, j) {
                    continue;
                }
                let (nx, ny) = region.position(ii, jj);
                let d2 = (nx - x).powi(2) + (ny - y).powi(2);
                if (d2 - 1.0).abs() < 1e-9 {
                    count += 1;
                }
            }
        }
        assert_eq!(count, 6);
    }

    #[test]
    fn clusters_all_open_single_root() {
        let region = LatticeRegion::new(5, 5).unwrap();
        let occ = vec![u64::MAX; region.words()];
        let mut uf = UnionFind::new(region.sites());
        clusters(&occ, &region, &mut uf);
        let root = uf.find(0);
        for s in 1..region.sites() as u32 {
            assert_eq!(uf.find(s), root);
        }
    }

    #[test]
    fn clusters_match_flood_fill_exhaustive_3x3() {
        let region = LatticeRegion::new(3, 3).unwrap();
        let mut uf = UnionFind::new(9);
        let left: Vec<u32> = vec![0, 3, 6];
        let right: Vec<u32> = vec![2, 5, 8];
        for bits in 0u32..512 {
            let occ = occ_from_bits(bits, 9);
            clusters(&occ, &region, &mut uf);
            let uf_conn = {
                let ev = ResolvedEvent {
                    groups: vec![left.clone(), right.clone()],
                };
                event_occurs(&occ, &mut uf, &ev)
            };
            let ff_conn = flood_fill_connected(&occ, &region, &left, &right);
            assert_eq!(uf_conn, ff_conn, "mismatch at occupancy {bits:#011b}");
        }
    }

    #[test]
    fn clusters_match_flood_fill_random_16x16() {
        let region = LatticeRegion::new(16, 16).unwrap();
        let mut uf = UnionFind::new(region.sites());
        let ev_spec = EventSpec::Crossing {
            arc_a: Arc::Left,
            arc_b: Arc::Right,
        };
        let ev = ev_spec.compile(&region).unwrap();
        let mut occ = Vec::new();
        for index in 0..2000 {
            sample_configuration(&region, 3, index, &mut occ);
            clusters(&occ, &region, &mut uf);
            let got = event_occurs(&occ, &mut uf, &ev);
            let want = flood_fill_connected(&occ, &region, &ev.groups[0], &ev.groups[1]);
            assert_eq!(got, want, "sample {index}");
        }
    }

    #[test]
    fn sampling_density_and_determinism() {
        let region = LatticeRegion::new(1000, 1000).unwrap();
        let mut occ = Vec::new();
        sample_configuration(&region, 7, 0, &mut occ);
        let open: u64 = occ.iter().map(|w| w.count_ones() as u64).sum();
        let density = open as f64 / region.sites() as f64;
        assert!(
            (0.4985..=0.5015).contains(&density),
            "density {density} out of binomial band"
        );
        let mut occ2 = Vec::new();
        sample_configuration(&region, 7, 0, &mut occ2);
        assert_eq!(occ, occ2, "same (seed, index) must give identical bits");
        sample_configuration(&region, 7, 1, &mut occ2);
        let differing: u64 = occ
            .iter()
            .zip(&occ2)
            .map(|(a, b)| (a ^ b).count_ones() as u64)
            .sum();
        let frac = differing as f64 / region.sites() as f64;
        assert!((frac - 0.5).abs() < 0.01, "independent samples differ in {frac}");
    }

    #[test]
    fn open_lr_xor_closed_tb_exhaustive_3x3() {
        // exactly one of {open left-right, closed bottom-top} on the
        // axial parallelogram
        let region = LatticeRegion::new(3, 3).unwrap();
        let mut uf = UnionFind::new(9);
        let lr = EventSpec::Crossing {
            arc_a: Arc::Left,
            arc_b: Arc::Right,
        }
        .compile(&region)
        .unwrap();
        let tb = EventSpec::Crossing {
            arc_a: Arc::Bottom,
            arc_b: Arc::Top,
        }
        .compile(&region)
        .unwrap();
        for bits in 0u32..512 {
            let occ = occ_from_bits(bits, 9);
            clusters(&occ, &region, &mut uf);
            let open_lr = event_occurs(&occ, &mut uf, &lr);
            let complement = occ_from_bits(!bits & 0x1FF, 9);
            clusters(&complement, &region, &mut uf);
            let closed_tb = event_occurs(&complement, &mut uf, &tb);
            assert_ne!(open_lr, closed_tb, "complementarity fails at {bits:#011b}");
        }
    }

    #[test]
    fn self_dual_crossing_is_half() {
        for l in [32usize, 64, 128] {
            let region = LatticeRegion::new(l, l).unwrap();
            let est = measure(
                &EventSpec::Crossing {
                    arc_a: Arc::Left,
                    arc_b: Arc::Right,
                },
                &region,
                4000,
                11,
            )
            .unwrap();
            assert!(
                (est.p_hat - 0.5).abs() <= 3.0 * est.stderr,
                "L = {l}: {} ± {}",
                est.p_hat,
                est.stderr
            );
        }
    }

    #[test]
    fn forced_open_lattice_hits_every_event() {
        let region = LatticeRegion::new(32, 24).unwrap();
        let occ = vec![u64::MAX; region.words()];
        let mut uf = UnionFind::new(region.sites());
        clusters(&occ, &region, &mut uf);
        let events = [
            EventSpec::TwoPoint {
                u1: 0.3,
                u3: 0.7,
                epsilon: 1.0 / 16.0,
            },
            EventSpec::FourPoint {
                u1: 0.3,
                u3: 0.7,
                w: (0.5, 0.3),
                epsilon: 1.0 / 16.0,
            },
        ];
        for ev in &events {
            let resolved = ev.compile(&region).unwrap();
            assert!(event_occurs(&occ, &mut uf, &resolved), "{}", ev.name());
        }
    }

    #[test]
    fn coupled_nested_events_monotone() {
        // nested neighborhoods on the same occupancy: larger ε can only add hits
        let region = LatticeRegion::new(48, 32).unwrap();
        let mut uf = UnionFind::new(region.sites());
        let small = EventSpec::BoundaryPoint {
            arc: Arc::BottomSegment {
                from_x: 0.1,
                to_x: 0.3,
            },
            u3: 0.7,
            epsilon: 1.0 / 32.0,
        }
        .compile(&region)
        .unwrap();
        let large = EventSpec::BoundaryPoint {
            arc: Arc::BottomSegment {
                from_x: 0.1,
                to_x: 0.3,
            },
            u3: 0.7,
            epsilon: 1.0 / 8.0,
        }
        .compile(&region)
        .unwrap();
        let mut occ = Vec::new();
        for index in 0..1000 {
            sample_configuration(&region, 5, index, &mut occ);
            clusters(&occ, &region, &mut uf);
            let hit_small = event_occurs(&occ, &mut uf, &small);
            let hit_large = event_occurs(&occ, &mut uf, &large);
            assert!(
                hit_large || !hit_small,
                "monotonicity violated at sample {index}"
            );
        }
    }

    #[test]
    fn estimates_invariant_under_transpose_relabeling() {
        // the transpose (i,j) → (j,i) is a lattice automorphism of the
        // square parallelogram; verdicts must be identical pathwise
        let l = 24usize;
        let region = LatticeRegion::new(l, l).unwrap();
        let mut uf = UnionFind::new(region.sites());
        let lr = EventSpec::Crossing {
            arc_a: Arc::Left,
            arc_b: Arc::Right,
        }
        .compile(&region)
        .unwrap();
        let tb = EventSpec::Crossing {
            arc_a: Arc::Bottom,
            arc_b: Arc::Top,
        }
        .compile(&region)
        .unwrap();
        let mut occ = Vec::new();
        let mut occ_t = vec![0u64; region.words()];
        for index in 0..500 {
            sample_configuration(&region, 13, index, &mut occ);
            occ_t.fill(0);
            for j in 0..l {
                for i in 0..l {
                    if is_open(&occ, region.index(i, j)) {
                        let t = region.index(j, i);
                        occ_t[(t >> 6) as usize] |= 1 << (t & 63);
                    }
                }
            }
            clusters(&occ, &region, &mut uf);
            let a = event_occurs(&occ, &mut uf, &lr);
            clusters(&occ_t, &region, &mut uf);
            let b = event_occurs(&occ_t, &mut uf, &tb);
            assert_eq!(a, b, "transpose relabeling changed the verdict at {index}");
        }
    }

    #[test]
    fn exponent_fit_recovers_exact_power_law() {
        let pts: Vec<(f64, f64, f64)> = [1.0 / 64.0, 1.0 / 32.0, 1.0 / 16.0, 1.0 / 8.0]
            .iter()
            .map(|&e: &f64| (e, e.powf(1.0 / 3.0), 1e-6))
            .collect();
        let fit = exponent_fit(&pts).unwrap();
        assert!((fit.slope - 1.0 / 3.0).abs() < 1e-9, "slope {}", fit.slope);
        assert_eq!(fit.n_dropped, 0);
    }

    #[test]
    fn exponent_fit_drops_nonpositive_points() {
        let pts = vec![(0.25, 0.5, 0.01), (0.125, 0.0, 0.01), (0.0625, 0.25, 0.01)];
        let fit = exponent_fit(&pts).unwrap();
        assert_eq!(fit.n_used, 2);
        assert_eq!(fit.n_dropped, 1);
        // with fewer than two usable points the fit is impossible
        assert!(exponent_fit(&pts[..2]).is_err());
        assert!(exponent_fit(&[(0.25, 0.0, 0.01)]).is_err());
    }

    #[test]
    fn measurement_deterministic_across_thread_counts() {
        let region = LatticeRegion::new(32, 32).unwrap();
        let ev = EventSpec::Crossing {
            arc_a: Arc::Left,
            arc_b: Arc::Right,
        };
        let pool1 = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let pool4 = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        let e1 = pool1.install(|| measure(&ev, &region, 2000, 17).unwrap());
        let e4 = pool4.install(|| measure(&ev, &region, 2000, 17).unwrap());
        assert_eq!(e1, e4);
    }

    #[test]
    fn event_validation_errors() {
        let region = LatticeRegion::new(32, 32).unwrap();
        // epsilon too large for the separation
        assert!(EventSpec::TwoPoint {
            u1: 0.45,
            u3: 0.55,
            epsilon: 0.2
        }
        .compile(&region)
        .is_err());
        // empty neighborhood (far outside the region)
        assert!(EventSpec::BoundaryPoint {
            arc: Arc::Bottom,
            u3: 5.0,
            epsilon: 0.001
        }
        .compile(&region)
        .is_err());
        assert!(LatticeRegion::new(1, 5).is_err());
    }

    #[test]
    fn factorization_components_and_ratio_form() {
        let region = LatticeRegion::new(64, 40).unwrap();
        let est = factorization_ratio(
            &FactorizationGeometry::centered(),
            &region,
            1.0 / 32.0,
            400,
            23,
        )
        .unwrap();
        let [p2, p3a, p3b, p4] = &est.components;
        // four-point is the rarest event pathwise, so in expectation
        assert!(p4.p_hat <= p3a.p_hat.min(p3b.p_hat).min(p2.p_hat) + 0.05);
        if let Some((ratio, err)) = est.ratio {
            let direct = p4.p_hat.powi(2) / (p3a.p_hat * p3b.p_hat * p2.p_hat);
            assert!((ratio - direct).abs() < 1e-12);
            assert!(err > 0.0);
        }
    }
}
