//! Riemann sheets of the eigenvalue pair over a parameter window.
//!
//! Sheets are assigned by row-major continuation: the first row left to
//! right, then every cell against the cell below it. Where the continued
//! labelling is discontinuous the sheets jump, and those grid edges are the
//! (path-dependent) branch cuts.
//!
//! Separately, each component (real or imaginary part) has its own cut: the
//! locus where the two component sheets meet and exchange order, i.e. where
//! `Re(λ₁ − λ₂)` resp. `Im(λ₁ − λ₂)` vanishes with a sign change. That locus
//! does not depend on the continuation path.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::complex::ComplexScalar;
use crate::sampler::{match_pair, PairSampler, Window};
use crate::{par, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeltaMode {
    /// Raw eigenvalues `λ₁, λ₂`.
    Raw,
    /// `Δλ = λ − λ_AV` with `λ_AV` the pair mean; the sheets are exact
    /// negatives of each other.
    #[default]
    Delta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeDir {
    /// `(i, j)–(i+1, j)`
    Horizontal,
    /// `(i, j)–(i, j+1)`
    Vertical,
}

/// Grid edge identified by its lower-left vertex and direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GridEdge {
    pub i: usize,
    pub j: usize,
    pub dir: EdgeDir,
}

impl GridEdge {
    pub fn horizontal(i: usize, j: usize) -> Self {
        Self { i, j, dir: EdgeDir::Horizontal }
    }

    pub fn vertical(i: usize, j: usize) -> Self {
        Self { i, j, dir: EdgeDir::Vertical }
    }

    pub fn ends(&self) -> [(usize, usize); 2] {
        match self.dir {
            EdgeDir::Horizontal => [(self.i, self.j), (self.i + 1, self.j)],
            EdgeDir::Vertical => [(self.i, self.j), (self.i, self.j + 1)],
        }
    }

    /// Midpoint in fractional grid-index coordinates.
    pub fn midpoint(&self) -> (f64, f64) {
        match self.dir {
            EdgeDir::Horizontal => (self.i as f64 + 0.5, self.j as f64),
            EdgeDir::Vertical => (self.i as f64, self.j as f64 + 0.5),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Component {
    Re,
    Im,
}

impl Component {
    fn of(self, z: ComplexScalar) -> f64 {
        match self {
            Component::Re => z.re,
            Component::Im => z.im,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SheetGrid {
    pub axis1: Vec<f64>,
    pub axis2: Vec<f64>,
    /// Row-major (`j * n1 + i`); missing cells hold NaN.
    pub sheet1: Vec<ComplexScalar>,
    pub sheet2: Vec<ComplexScalar>,
    pub missing: Vec<bool>,
    /// Edges where the continued labelling jumps by more than `θ` times the
    /// median jump of the parallel edges around it.
    pub cut_cells: Vec<GridEdge>,
    /// Edges where the real parts of the two sheets meet and swap order.
    pub re_cut_edges: Vec<GridEdge>,
    /// Same for the imaginary parts.
    pub im_cut_edges: Vec<GridEdge>,
    pub delta_mode: DeltaMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceOptions {
    pub theta: f64,
    /// Half-width of the neighbourhood (in cells) for the local median jump.
    pub median_radius: usize,
    pub max_missing_fraction: f64,
    /// Component differences below this fraction of the largest sheet
    /// separation count as coincident.
    pub coincidence_rel: f64,
}

impl Default for SurfaceOptions {
    fn default() -> Self {
        Self {
            theta: 10.0,
            median_radius: 3,
            max_missing_fraction: 0.01,
            coincidence_rel: 1e-12,
        }
    }
}

pub fn build_surface(
    sampler: &impl PairSampler,
    window: &Window,
    n1: usize,
    n2: usize,
    delta_mode: DeltaMode,
) -> Result<SheetGrid> {
    build_surface_with(sampler, window, n1, n2, delta_mode, &SurfaceOptions::default())
}

pub fn build_surface_with(
    sampler: &impl PairSampler,
    window: &Window,
    n1: usize,
    n2: usize,
    delta_mode: DeltaMode,
    opts: &SurfaceOptions,
) -> Result<SheetGrid> {
    window.validate()?;
    if n1 < 16 || n2 < 16 {
        return Err(Error::Domain(format!("grid must be at least 16x16, got {n1}x{n2}")));
    }
    let axis1 = window.axis1(n1);
    let axis2 = window.axis2(n2);

    let raw: Vec<Option<[ComplexScalar; 2]>> = par::map_indices(n1 * n2, |idx| {
        let (i, j) = (idx % n1, idx / n1);
        sampler
            .sample(axis1[i], axis2[j])
            .ok()
            .filter(|p| p.iter().all(|z| crate::complex::is_finite(*z)))
            .map(|[a, b]| match delta_mode {
                DeltaMode::Raw => [a, b],
                DeltaMode::Delta => {
                    let d = (a - b) * 0.5;
                    [d, -d]
                }
            })
    });
    let missing_count = raw.iter().filter(|r| r.is_none()).count();
    if missing_count as f64 > opts.max_missing_fraction * (n1 * n2) as f64 {
        return Err(Error::TooManyMissing {
            missing: missing_count,
            total: n1 * n2,
        });
    }

    let mut sheets: Vec<Option<[ComplexScalar; 2]>> = vec![None; n1 * n2];
    for j in 0..n2 {
        for i in 0..n1 {
            let idx = j * n1 + i;
            let Some(pair) = raw[idx] else { continue };
            let below = if j > 0 { sheets[idx - n1] } else { None };
            let left = (0..i).rev().find_map(|k| sheets[j * n1 + k]);
            let reference = if j == 0 { left } else { below.or(if i > 0 { sheets[idx - 1] } else { None }) };
            sheets[idx] = Some(match reference {
                Some(r) => match_pair(&r, pair).0,
                None => pair,
            });
        }
    }

    let nan = ComplexScalar::new(f64::NAN, f64::NAN);
    let sheet1: Vec<ComplexScalar> = sheets.iter().map(|s| s.map_or(nan, |p| p[0])).collect();
    let sheet2: Vec<ComplexScalar> = sheets.iter().map(|s| s.map_or(nan, |p| p[1])).collect();
    let missing: Vec<bool> = sheets.iter().map(Option::is_none).collect();

    let mut grid = SheetGrid {
        axis1,
        axis2,
        sheet1,
        sheet2,
        missing,
        cut_cells: Vec::new(),
        re_cut_edges: Vec::new(),
        im_cut_edges: Vec::new(),
        delta_mode,
    };
    grid.cut_cells = grid.jump_cuts(opts);
    grid.re_cut_edges = grid.component_cuts(Component::Re, opts.coincidence_rel);
    grid.im_cut_edges = grid.component_cuts(Component::Im, opts.coincidence_rel);
    Ok(grid)
}

impl SheetGrid {
    pub fn n1(&self) -> usize {
        self.axis1.len()
    }

    pub fn n2(&self) -> usize {
        self.axis2.len()
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        j * self.n1() + i
    }

    pub fn pair(&self, i: usize, j: usize) -> Option<[ComplexScalar; 2]> {
        let k = self.idx(i, j);
        (!self.missing[k]).then(|| [self.sheet1[k], self.sheet2[k]])
    }

    pub fn edges(&self) -> impl Iterator<Item = GridEdge> + '_ {
        let (n1, n2) = (self.n1(), self.n2());
        let h = (0..n2).flat_map(move |j| (0..n1 - 1).map(move |i| GridEdge::horizontal(i, j)));
        let v = (0..n2 - 1).flat_map(move |j| (0..n1).map(move |i| GridEdge::vertical(i, j)));
        h.chain(v)
    }

    fn edge_pairs(&self, e: &GridEdge) -> Option<([ComplexScalar; 2], [ComplexScalar; 2])> {
        let [(ia, ja), (ib, jb)] = e.ends();
        Some((self.pair(ia, ja)?, self.pair(ib, jb)?))
    }

    /// Labelling discontinuity `|Δs₁| + |Δs₂|` across an edge.
    pub fn edge_jump(&self, e: &GridEdge) -> Option<f64> {
        let (a, b) = self.edge_pairs(e)?;
        Some((a[0] - b[0]).norm() + (a[1] - b[1]).norm())
    }

    /// True when the swapped pairing is cheaper across the edge, i.e. the
    /// sheet labels exchange there.
    pub fn is_exchange_edge(&self, e: &GridEdge) -> bool {
        self.edge_pairs(e).is_some_and(|(a, b)| match_pair(&a, b).1)
    }

    fn scale(&self) -> f64 {
        self.sheet1
            .iter()
            .zip(&self.sheet2)
            .zip(&self.missing)
            .filter(|(_, &m)| !m)
            .map(|((a, b), _)| a.norm().max(b.norm()))
            .fold(0.0, f64::max)
    }

    fn jump_cuts(&self, opts: &SurfaceOptions) -> Vec<GridEdge> {
        let (n1, n2) = (self.n1(), self.n2());
        let jump_h: Vec<Option<f64>> = (0..n2 * (n1 - 1))
            .map(|k| self.edge_jump(&GridEdge::horizontal(k % (n1 - 1), k / (n1 - 1))))
            .collect();
        let jump_v: Vec<Option<f64>> = (0..(n2 - 1) * n1)
            .map(|k| self.edge_jump(&GridEdge::vertical(k % n1, k / n1)))
            .collect();
        let floor = 1e-12 * self.scale();
        let r = opts.median_radius as isize;

        let edges: Vec<GridEdge> = self.edges().collect();
        let flags = par::map_indices(edges.len(), |k| {
            let e = edges[k];
            let own = match e.dir {
                EdgeDir::Horizontal => jump_h[e.j * (n1 - 1) + e.i],
                EdgeDir::Vertical => jump_v[e.j * n1 + e.i],
            };
            let Some(own) = own else { return false };
            if own <= floor {
                return false;
            }
            // same-direction edges only: the two axes may be scaled very differently
            let mut local = Vec::with_capacity(((2 * r + 1) * (2 * r + 1)) as usize);
            for dj in -r..=r {
                for di in -r..=r {
                    let (i, j) = (e.i as isize + di, e.j as isize + dj);
                    if i < 0 || j < 0 {
                        continue;
                    }
                    let (i, j) = (i as usize, j as usize);
                    let x = match e.dir {
                        EdgeDir::Horizontal if i + 1 < n1 && j < n2 => jump_h[j * (n1 - 1) + i],
                        EdgeDir::Vertical if i < n1 && j + 1 < n2 => jump_v[j * n1 + i],
                        _ => None,
                    };
                    local.extend(x);
                }
            }
            let mid = local.len() / 2;
            if local.is_empty() {
                return false;
            }
            local.select_nth_unstable_by(mid, f64::total_cmp);
            own > opts.theta * local[mid]
        });
        edges
            .into_iter()
            .zip(flags)
            .filter_map(|(e, f)| f.then_some(e))
            .collect()
    }

    /// Edges on which the given component of the two sheets coincides or
    /// changes sign, scanned along every grid line. Sign flips caused by a
    /// label exchange are not coincidences and are skipped.
    pub fn component_cuts(&self, comp: Component, coincidence_rel: f64) -> Vec<GridEdge> {
        let (n1, n2) = (self.n1(), self.n2());
        let floor = coincidence_rel * 2.0 * self.scale();
        let sign = |i: usize, j: usize| -> Option<i8> {
            let [a, b] = self.pair(i, j)?;
            let d = comp.of(a - b);
            Some(if d.abs() <= floor { 0 } else if d > 0.0 { 1 } else { -1 })
        };

        let mut out = Vec::new();
        let mut scan_line = |verts: Vec<(usize, usize)>, make: &dyn Fn(usize, usize) -> GridEdge| {
            let signs: Vec<Option<i8>> = verts.iter().map(|&(i, j)| sign(i, j)).collect();
            let edge = |k: usize| make(verts[k].0, verts[k].1);
            for k in 0..verts.len().saturating_sub(1) {
                if signs[k] == Some(0) && signs[k + 1] == Some(0) {
                    out.push(edge(k));
                }
            }
            let mut last: Option<usize> = None;
            for k in 0..verts.len() {
                match signs[k] {
                    None => last = None,
                    Some(0) => {}
                    Some(s) => {
                        if let Some(p) = last {
                            let span = p..k;
                            let flips = signs[p] != Some(s);
                            if flips && !span.clone().any(|m| self.is_exchange_edge(&edge(m))) {
                                out.extend(span.map(edge));
                            }
                        }
                        last = Some(k);
                    }
                }
            }
        };
        for j in 0..n2 {
            scan_line((0..n1).map(|i| (i, j)).collect(), &GridEdge::horizontal);
        }
        for i in 0..n1 {
            scan_line((0..n2).map(|j| (i, j)).collect(), &GridEdge::vertical);
        }
        out.sort();
        out.dedup();
        out
    }

    /// Grid-index coordinates of a parameter point (fractional, uniform axes).
    pub fn params_to_index(&self, p1: f64, p2: f64) -> (f64, f64) {
        let (a1, a2) = (&self.axis1, &self.axis2);
        let x = (p1 - a1[0]) / (a1[a1.len() - 1] - a1[0]) * (a1.len() - 1) as f64;
        let y = (p2 - a2[0]) / (a2[a2.len() - 1] - a2[0]) * (a2.len() - 1) as f64;
        (x, y)
    }

    pub fn index_to_params(&self, x: f64, y: f64) -> (f64, f64) {
        let (a1, a2) = (&self.axis1, &self.axis2);
        (
            a1[0] + x / (a1.len() - 1) as f64 * (a1[a1.len() - 1] - a1[0]),
            a2[0] + y / (a2.len() - 1) as f64 * (a2[a2.len() - 1] - a2[0]),
        )
    }

    pub fn cell_is_cut(&self, i: usize, j: usize) -> bool {
        self.cut_cells.iter().any(|e| e.ends().contains(&(i, j)))
    }
}

/// Connected piece of a cut edge set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutComponent {
    pub edges: Vec<GridEdge>,
    /// Most distant pair of edge midpoints, in grid-index coordinates.
    pub endpoints: [(f64, f64); 2],
    pub touches_boundary: bool,
}

impl CutComponent {
    /// Whether one endpoint lies within `radius` cells of `point`.
    pub fn has_endpoint_near(&self, point: (f64, f64), radius: f64) -> bool {
        self.endpoints
            .iter()
            .any(|e| (e.0 - point.0).hypot(e.1 - point.1) <= radius)
    }
}

/// Splits an edge set into connected components. Two edges connect when
/// they share a vertex or are opposite sides of one grid cell.
pub fn cut_components(grid: &SheetGrid, edges: &[GridEdge]) -> Vec<CutComponent> {
    let mut parent: Vec<usize> = (0..edges.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let union = |parent: &mut Vec<usize>, a: usize, b: usize| {
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    };

    let mut by_vertex: HashMap<(usize, usize), usize> = HashMap::new();
    let mut by_cell: HashMap<(usize, usize, EdgeDir), usize> = HashMap::new();
    for (k, e) in edges.iter().enumerate() {
        for v in e.ends() {
            if let Some(&other) = by_vertex.get(&v) {
                union(&mut parent, k, other);
            } else {
                by_vertex.insert(v, k);
            }
        }
        // opposite sides: horizontal (i,j) & (i,j+1) bound cell (i,j);
        // vertical (i,j) & (i+1,j) bound cell (i,j)
        let cells = match e.dir {
            EdgeDir::Horizontal => [Some((e.i, e.j)), e.j.checked_sub(1).map(|j| (e.i, j))],
            EdgeDir::Vertical => [Some((e.i, e.j)), e.i.checked_sub(1).map(|i| (i, e.j))],
        };
        for cell in cells.into_iter().flatten() {
            let key = (cell.0, cell.1, e.dir);
            if let Some(&other) = by_cell.get(&key) {
                union(&mut parent, k, other);
            } else {
                by_cell.insert(key, k);
            }
        }
    }

    let mut groups: HashMap<usize, Vec<GridEdge>> = HashMap::new();
    for k in 0..edges.len() {
        let r = find(&mut parent, k);
        groups.entry(r).or_default().push(edges[k]);
    }
    let (n1, n2) = (grid.n1(), grid.n2());
    let mut out: Vec<CutComponent> = groups
        .into_values()
        .map(|mut es| {
            es.sort();
            let mids: Vec<(f64, f64)> = es.iter().map(GridEdge::midpoint).collect();
            let mut best = (0.0, mids[0], mids[0]);
            for a in 0..mids.len() {
                for b in a + 1..mids.len() {
                    let d = (mids[a].0 - mids[b].0).hypot(mids[a].1 - mids[b].1);
                    if d > best.0 {
                        best = (d, mids[a], mids[b]);
                    }
                }
            }
            let touches_boundary = es.iter().flat_map(GridEdge::ends).any(|(i, j)| {
                i == 0 || j == 0 || i == n1 - 1 || j == n2 - 1
            });
            CutComponent {
                edges: es,
                endpoints: [best.1, best.2],
                touches_boundary,
            }
        })
        .collect();
    out.sort_by(|a, b| a.edges[0].cmp(&b.edges[0]));
    out
}
