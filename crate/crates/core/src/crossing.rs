//! One-dimensional scans: branch continuation, crossing vs. avoided crossing
//! in the real and imaginary parts, and the Landau–Zener / width-bifurcation
//! transition.

use serde::{Deserialize, Serialize};

use crate::complex::ComplexScalar;
use crate::field::{vector_entropy, vector_overlap};
use crate::hamiltonian::diagonalize;
use crate::sampler::{linspace, match_pair};
use crate::toy::{build_hamiltonian, ToyModel, ToyParams};
use crate::{par, Error, Result};

/// Two continuity-matched eigenvalue branches over a strictly increasing
/// scan parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanTrajectory {
    pub ts: Vec<f64>,
    pub branch_a: Vec<ComplexScalar>,
    pub branch_b: Vec<ComplexScalar>,
    /// Indices where both pairings cost the same to within 1e-14 and the
    /// previous ordering was kept.
    pub ambiguous: Vec<usize>,
}

impl ScanTrajectory {
    pub fn len(&self) -> usize {
        self.ts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ts.is_empty()
    }

    pub fn differences(&self) -> Vec<ComplexScalar> {
        self.branch_a.iter().zip(&self.branch_b).map(|(a, b)| a - b).collect()
    }
}

const AMBIGUITY: f64 = 1e-14;

/// Greedy continuation from the first point: at every step take the pairing
/// with the smaller `Σ|Δλ|`.
pub fn match_branches(ts: Vec<f64>, raw: &[[ComplexScalar; 2]]) -> Result<ScanTrajectory> {
    if ts.len() != raw.len() {
        return Err(Error::LengthMismatch(format!(
            "{} scan values vs {} eigenvalue pairs",
            ts.len(),
            raw.len()
        )));
    }
    if ts.len() < 3 {
        return Err(Error::Domain("a scan needs at least 3 points".into()));
    }
    if ts.iter().any(|t| !t.is_finite()) || ts.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("scan values must be finite and strictly increasing".into()));
    }

    let mut a = Vec::with_capacity(raw.len());
    let mut b = Vec::with_capacity(raw.len());
    let mut ambiguous = Vec::new();
    let mut prev = raw[0];
    a.push(prev[0]);
    b.push(prev[1]);
    for (k, pair) in raw.iter().enumerate().skip(1) {
        let (matched, _, margin) = match_pair(&prev, *pair);
        let next = if margin <= AMBIGUITY {
            ambiguous.push(k);
            *pair
        } else {
            matched
        };
        a.push(next[0]);
        b.push(next[1]);
        prev = next;
    }
    Ok(ScanTrajectory {
        ts,
        branch_a: a,
        branch_b: b,
        ambiguous,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CrossingLabel {
    /// Landau–Zener: real parts avoid, imaginary parts cross.
    #[serde(rename = "LZ")]
    LandauZener,
    /// Width bifurcation: real parts cross, imaginary parts avoid.
    #[serde(rename = "WB")]
    WidthBifurcation,
}

impl std::fmt::Display for CrossingLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CrossingLabel::LandauZener => "LZ",
            CrossingLabel::WidthBifurcation => "WB",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub label: CrossingLabel,
    pub re_min_gap: f64,
    pub im_min_gap: f64,
    pub re_cross_points: Vec<f64>,
    pub im_cross_points: Vec<f64>,
    pub bifurcation_edges: Option<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    /// Gaps at or below this count as touching.
    pub gap_floor: f64,
    /// A bifurcation edge is where the imaginary gap has climbed this
    /// fraction of the way from its baseline to its peak.
    pub edge_fraction: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            gap_floor: 1e-9,
            edge_fraction: 0.2,
        }
    }
}

/// Sign-change locations of `values` along `ts`, skipping samples at or
/// below `floor` in magnitude. Crossings are linearly interpolated.
fn sign_changes(ts: &[f64], values: &[f64], floor: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut last: Option<usize> = None;
    for (k, &v) in values.iter().enumerate() {
        if v.abs() <= floor {
            continue;
        }
        if let Some(p) = last {
            let u = values[p];
            if u.signum() != v.signum() {
                let t = if p + 1 == k {
                    ts[p] + (ts[k] - ts[p]) * u.abs() / (u.abs() + v.abs())
                } else {
                    0.5 * (ts[p + 1] + ts[k - 1])
                };
                out.push(t);
            }
        }
        last = Some(k);
    }
    out
}

fn min_abs(values: &[f64]) -> f64 {
    values.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()))
}

/// Crossing analysis of a matched trajectory.
///
/// A component crosses when its matched difference changes sign or touches
/// `gap_floor`; otherwise it is avoided. LZ needs Re avoided + Im crossing,
/// WB the reverse; anything else is [`Error::Unclassified`].
pub fn classify(traj: &ScanTrajectory) -> Result<ClassReport> {
    classify_with(traj, &ClassifyOptions::default())
}

pub fn classify_with(traj: &ScanTrajectory, opts: &ClassifyOptions) -> Result<ClassReport> {
    let d = traj.differences();
    let re: Vec<f64> = d.iter().map(|z| z.re).collect();
    let im: Vec<f64> = d.iter().map(|z| z.im).collect();
    let re_cross_points = sign_changes(&traj.ts, &re, opts.gap_floor);
    let im_cross_points = sign_changes(&traj.ts, &im, opts.gap_floor);
    let re_min_gap = min_abs(&re);
    let im_min_gap = min_abs(&im);
    let re_crosses = !re_cross_points.is_empty() || re_min_gap <= opts.gap_floor;
    let im_crosses = !im_cross_points.is_empty() || im_min_gap <= opts.gap_floor;

    let label = match (re_crosses, im_crosses) {
        (false, true) => CrossingLabel::LandauZener,
        (true, false) => CrossingLabel::WidthBifurcation,
        (r, i) => {
            return Err(Error::Unclassified(format!(
                "re {} (min gap {re_min_gap:e}, {} sign changes), im {} (min gap {im_min_gap:e}, {} sign changes)",
                if r { "crosses" } else { "avoided" },
                re_cross_points.len(),
                if i { "crosses" } else { "avoided" },
                im_cross_points.len(),
            )))
        }
    };
    let bifurcation_edges = match label {
        CrossingLabel::WidthBifurcation => bifurcation_edges(traj, opts.edge_fraction),
        CrossingLabel::LandauZener => None,
    };
    Ok(ClassReport {
        label,
        re_min_gap,
        im_min_gap,
        re_cross_points,
        im_cross_points,
        bifurcation_edges,
    })
}

/// Bounds of the width-bifurcation region: the contiguous stretch around
/// the maximum of `|Im(a − b)|` where the gap exceeds
/// `baseline + fraction·(peak − baseline)`, with `baseline` the smallest gap
/// on the scan. Edges are linearly interpolated onto the threshold.
pub fn bifurcation_edges(traj: &ScanTrajectory, fraction: f64) -> Option<(f64, f64)> {
    let gap: Vec<f64> = traj.differences().iter().map(|z| z.im.abs()).collect();
    let (peak_idx, &peak) = gap
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))?;
    let baseline = min_abs(&gap);
    if !(peak > baseline) {
        return None;
    }
    let threshold = baseline + fraction * (peak - baseline);
    let ts = &traj.ts;
    let cross = |i: usize, j: usize| {
        let (gi, gj) = (gap[i], gap[j]);
        ts[i] + (ts[j] - ts[i]) * (threshold - gi) / (gj - gi)
    };
    let mut lo = peak_idx;
    while lo > 0 && gap[lo - 1] >= threshold {
        lo -= 1;
    }
    let mut hi = peak_idx;
    while hi + 1 < gap.len() && gap[hi + 1] >= threshold {
        hi += 1;
    }
    let left = if lo == 0 { ts[0] } else { cross(lo - 1, lo) };
    let right = if hi + 1 == gap.len() { ts[hi] } else { cross(hi, hi + 1) };
    Some((left, right))
}

/// Uniform `α` scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaScan {
    pub start: f64,
    pub end: f64,
    pub n: usize,
}

impl Default for AlphaScan {
    fn default() -> Self {
        Self {
            start: 0.2,
            end: 0.9,
            n: 1401,
        }
    }
}

impl AlphaScan {
    pub fn values(&self) -> Result<Vec<f64>> {
        if !(self.start.is_finite() && self.end.is_finite() && self.start < self.end && self.start >= 0.0) {
            return Err(Error::Domain(format!("invalid alpha scan {self:?}")));
        }
        if self.n < 3 {
            return Err(Error::Domain("alpha scan needs n >= 3".into()));
        }
        Ok(linspace(self.start, self.end, self.n))
    }

    /// Same range at twice the resolution.
    pub fn refined(&self) -> Self {
        Self {
            n: 2 * self.n - 1,
            ..*self
        }
    }
}

/// Toy-model scan with per-point eigenvectors and coalescence observables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToyScan {
    pub trajectory: ScanTrajectory,
    /// `(v₊, v₋)` per point in diagonalization order.
    pub vectors: Vec<[[ComplexScalar; 2]; 2]>,
    /// `O_L(v₊, v₋)` per point.
    pub overlaps: Vec<f64>,
    /// Mean entropy of the component intensities of `v₊` and `v₋`.
    pub entropies: Vec<f64>,
}

pub fn toy_scan(p: &ToyParams, scan: &AlphaScan) -> Result<ToyScan> {
    p.validate()?;
    let ts = scan.values()?;
    let spectra = par::map_indices(ts.len(), |k| build_hamiltonian(ts[k], p).map(|h| diagonalize(&h)));
    let spectra = spectra.into_iter().collect::<Result<Vec<_>>>()?;
    let raw: Vec<[ComplexScalar; 2]> = spectra.iter().map(|s| s.eigenvalues()).collect();
    let vectors: Vec<[[ComplexScalar; 2]; 2]> = spectra.iter().map(|s| [s.v_plus, s.v_minus]).collect();
    let overlaps = vectors
        .iter()
        .map(|[vp, vm]| vector_overlap(vp, vm))
        .collect::<Result<Vec<_>>>()?;
    let entropies = vectors
        .iter()
        .map(|[vp, vm]| Ok(0.5 * (vector_entropy(vp)? + vector_entropy(vm)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ToyScan {
        trajectory: match_branches(ts, &raw)?,
        vectors,
        overlaps,
        entropies,
    })
}

/// Classification label of a toy scan, `None` when unclassified.
fn label_at(model: &ToyModel, beta: f64, scan: &AlphaScan, opts: &ClassifyOptions) -> Result<Option<CrossingLabel>> {
    let p = model.with_beta(beta)?;
    let s = toy_scan(&p, scan)?;
    match classify_with(&s.trajectory, opts) {
        Ok(r) => Ok(Some(r.label)),
        Err(Error::Unclassified(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaTransitionOptions {
    pub scan: AlphaScan,
    /// Target width of the final bisection bracket.
    pub tol: f64,
    pub classify: ClassifyOptions,
}

impl Default for BetaTransitionOptions {
    fn default() -> Self {
        Self {
            scan: AlphaScan::default(),
            tol: 1e-3,
            classify: ClassifyOptions::default(),
        }
    }
}

/// Bisection on `β` for the point where the scan label flips.
pub fn beta_transition(model: &ToyModel, beta_window: (f64, f64)) -> Result<f64> {
    beta_transition_with(model, beta_window, &BetaTransitionOptions::default())
}

pub fn beta_transition_with(
    model: &ToyModel,
    (mut lo, mut hi): (f64, f64),
    opts: &BetaTransitionOptions,
) -> Result<f64> {
    model.validate()?;
    if !(0.0 <= lo && lo < hi && hi <= 1.0) {
        return Err(Error::Domain(format!("beta window ({lo}, {hi}) must lie in [0, 1]")));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let (window_lo, window_hi) = (lo, hi);
    let lower = label_at(model, lo, &opts.scan, &opts.classify)?;
    let upper = label_at(model, hi, &opts.scan, &opts.classify)?;
    match (lower, upper) {
        (Some(a), Some(b)) if a != b => {}
        (None, _) => return Ok(lo),
        (_, None) => return Ok(hi),
        _ => return Err(Error::NoTransition(window_lo, window_hi)),
    }
    while hi - lo > opts.tol {
        let mid = 0.5 * (lo + hi);
        match label_at(model, mid, &opts.scan, &opts.classify)? {
            None => return Ok(mid),
            l if l == lower => lo = mid,
            _ => hi = mid,
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Scan positions of local maxima of `O_L(v₊, v₋)` above 1e-6.
pub fn overlap_peaks(ts: &[f64], vectors: &[[[ComplexScalar; 2]; 2]]) -> Result<Vec<f64>> {
    if ts.len() != vectors.len() {
        return Err(Error::LengthMismatch(format!(
            "{} scan values vs {} eigenvector pairs",
            ts.len(),
            vectors.len()
        )));
    }
    let ol = vectors
        .iter()
        .map(|[a, b]| vector_overlap(a, b))
        .collect::<Result<Vec<_>>>()?;
    Ok(local_maxima(ts, &ol, 1e-6))
}

/// Strict-left / weak-right local maxima of `ys` above `floor`.
pub fn local_maxima(ts: &[f64], ys: &[f64], floor: f64) -> Vec<f64> {
    (1..ys.len().saturating_sub(1))
        .filter(|&k| ys[k] > floor && ys[k] > ys[k - 1] && ys[k] >= ys[k + 1])
        .map(|k| ts[k])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::c;
    use crate::ep::toy_ep_roots;
    use crate::toy::preset;

    #[test]
    fn constant_branches_keep_identity() {
        let ts = linspace(0.0, 1.0, 5);
        let raw = vec![[c(1.0, 0.0), c(0.0, 2.0)]; 5];
        let t = match_branches(ts, &raw).unwrap();
        assert!(t.branch_a.iter().all(|&z| z == c(1.0, 0.0)));
        assert!(t.branch_b.iter().all(|&z| z == c(0.0, 2.0)));
        assert!(t.ambiguous.is_empty());
    }

    #[test]
    fn unsorted_raw_pairs_are_matched() {
        let ts = linspace(-1.0, 1.0, 201);
        // Two straight lines crossing at t = 0, reported in sorted order.
        let raw: Vec<_> = ts
            .iter()
            .map(|&t| {
                let (x, y) = (c(t, 0.1), c(-t, -0.1));
                if x.re > y.re { [x, y] } else { [y, x] }
            })
            .collect();
        let tr = match_branches(ts.clone(), &raw).unwrap();
        for (k, &t) in ts.iter().enumerate() {
            assert!((tr.branch_a[k] - c(t, 0.1)).norm() < 1e-15 || (tr.branch_a[k] - c(-t, -0.1)).norm() < 1e-15);
        }
        assert!(tr.branch_a.iter().all(|z| z.im == tr.branch_a[0].im));
    }

    #[test]
    fn ambiguous_pairing_is_flagged() {
        let ts = vec![0.0, 1.0, 2.0];
        let raw = vec![[c(0.0, 0.0), c(1.0, 0.0)], [c(0.5, 0.0), c(0.5, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
        let t = match_branches(ts, &raw).unwrap();
        // leaving a coincident pair is ambiguous as well
        assert_eq!(t.ambiguous, vec![1, 2]);
    }

    #[test]
    fn match_rejects_bad_scans() {
        let raw = vec![[c(0.0, 0.0), c(1.0, 0.0)]; 3];
        assert!(match_branches(vec![0.0, 1.0], &raw[..2]).is_err());
        assert!(match_branches(vec![0.0, 1.0, 1.0], &raw).is_err());
        assert!(match_branches(vec![0.0, 1.0], &raw).is_err());
    }

    #[test]
    fn sqrt_branches_are_continuous() {
        // λ±(t) = ±√(t + 0.01i): closed-form branches for comparison.
        let ts = linspace(-1.0, 1.0, 2001);
        let h = ts[1] - ts[0];
        let raw: Vec<_> = ts
            .iter()
            .map(|&t| {
                let r = crate::complex::principal_sqrt(c(t, 0.01));
                [r, -r]
            })
            .collect();
        let tr = match_branches(ts.clone(), &raw).unwrap();
        let max_jump = tr
            .branch_a
            .windows(2)
            .map(|w| (w[1] - w[0]).norm())
            .fold(0.0, f64::max);
        // Largest analytic derivative |d√(t+iε)/dt| = 1/(2√ε) = 5.
        assert!(max_jump < 10.0 * 5.0 * h, "max jump {max_jump}");
        for (k, &t) in ts.iter().enumerate() {
            let r = crate::complex::principal_sqrt(c(t, 0.01));
            let on_branch = (tr.branch_a[k] - r).norm().min((tr.branch_a[k] + r).norm());
            assert!(on_branch < 1e-15);
        }
    }

    #[test]
    fn lz_example() {
        let s = toy_scan(&preset("fig2-lz").unwrap(), &AlphaScan::default()).unwrap();
        let r = classify(&s.trajectory).unwrap();
        assert_eq!(r.label, CrossingLabel::LandauZener);
        assert!(r.re_cross_points.is_empty());
        assert_eq!(r.im_cross_points.len(), 1);
        assert!(r.re_min_gap > 1e-3);
        // real-part crossing of the bare levels at α = (√3 − 1)²
        let t_min = s.trajectory.ts[s
            .trajectory
            .differences()
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.re.abs().total_cmp(&b.1.re.abs()))
            .unwrap()
            .0];
        assert!((t_min - 0.535_898_384_862_245_4).abs() < 0.01);
    }

    #[test]
    fn wb_example_edges() {
        let s = toy_scan(&preset("fig2-wb").unwrap(), &AlphaScan::default()).unwrap();
        let r = classify(&s.trajectory).unwrap();
        assert_eq!(r.label, CrossingLabel::WidthBifurcation);
        let (lo, hi) = r.bifurcation_edges.unwrap();
        assert!((lo - 0.454).abs() < 0.01, "{lo}");
        assert!((hi - 0.621).abs() < 0.01, "{hi}");
    }

    #[test]
    fn double_ep_scan_touches_in_both_parts() {
        let s = toy_scan(&preset("double-ep").unwrap(), &AlphaScan::default()).unwrap();
        assert!(matches!(classify(&s.trajectory), Err(Error::Unclassified(_))));
        let roots = toy_ep_roots(&preset("double-ep").unwrap(), (0.3, 0.8)).unwrap();
        let (lo, hi) = bifurcation_edges(&s.trajectory, 0.2).unwrap();
        assert!((lo - roots[0].p1).abs() < 0.01);
        assert!((hi - roots[1].p1).abs() < 0.01);
    }

    #[test]
    fn class2_is_wb() {
        let s = toy_scan(&preset("class2").unwrap(), &AlphaScan::default()).unwrap();
        assert_eq!(classify(&s.trajectory).unwrap().label, CrossingLabel::WidthBifurcation);
    }

    #[test]
    fn no_transition_near_zero() {
        let m = preset("fig2-lz").unwrap().model();
        assert!(matches!(beta_transition(&m, (0.0, 0.1)), Err(Error::NoTransition(..))));
        assert!(beta_transition(&m, (0.5, 1.5)).is_err());
    }

    #[test]
    fn overlap_peak_examples() {
        let s = toy_scan(&preset("double-ep").unwrap(), &AlphaScan { start: 0.3, end: 0.8, n: 1001 }).unwrap();
        let peaks = overlap_peaks(&s.trajectory.ts, &s.vectors).unwrap();
        assert_eq!(peaks.len(), 2, "{peaks:?}");
        assert!((peaks[0] - 0.454).abs() < 0.01);
        assert!((peaks[1] - 0.621).abs() < 0.01);

        let s = toy_scan(&preset("fig2-lz").unwrap(), &AlphaScan::default()).unwrap();
        let peaks = overlap_peaks(&s.trajectory.ts, &s.vectors).unwrap();
        assert_eq!(peaks.len(), 1);
        assert!((peaks[0] - 0.5359).abs() < 0.01);

        let decoupled = vec![[[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]; 50];
        let ts = linspace(0.0, 1.0, 50);
        assert!(overlap_peaks(&ts, &decoupled).unwrap().is_empty());
    }
}
