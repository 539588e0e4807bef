//! Exceptional-point location.
//!
//! Both searches work on the discriminant `D = (λ₊ − λ₋)²`, which is
//! single-valued and smooth in the parameters, instead of tracking the
//! branch of `η`. An EP is a zero of `D`.

use serde::{Deserialize, Serialize};

use crate::complex::ComplexScalar;
use crate::sampler::{linspace, PairSampler, Window};
use crate::toy::{build_hamiltonian, ToyParams};
use crate::{par, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpLocation {
    pub p1: f64,
    pub p2: f64,
    /// `|λ₊ − λ₋|` re-evaluated at `(p1, p2)`.
    pub residual: f64,
    pub order: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootOptions {
    /// Points in the initial scan of the bracket.
    pub scan_points: usize,
    /// Golden-section iterations per candidate.
    pub max_iter: usize,
    /// Acceptance bound on `|η|²`.
    pub tol: f64,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            scan_points: 4001,
            max_iter: 200,
            tol: 1e-10,
        }
    }
}

/// All `α` in `bracket` where `η(α, β) = 0` for the configured `β`.
pub fn toy_ep_roots(p: &ToyParams, alpha_bracket: (f64, f64)) -> Result<Vec<EpLocation>> {
    toy_ep_roots_with(p, alpha_bracket, &RootOptions::default())
}

pub fn toy_ep_roots_with(
    p: &ToyParams,
    (lo, hi): (f64, f64),
    opts: &RootOptions,
) -> Result<Vec<EpLocation>> {
    p.validate()?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi && lo >= 0.0) {
        return Err(Error::Domain(format!("invalid alpha bracket ({lo}, {hi})")));
    }
    if opts.scan_points < 3 {
        return Err(Error::Domain("scan_points must be >= 3".into()));
    }
    // |η|² = |D| / 4
    let eta_sq = |alpha: f64| -> f64 {
        build_hamiltonian(alpha, p)
            .map(|h| h.discriminant().norm() / 4.0)
            .unwrap_or(f64::INFINITY)
    };

    let grid = linspace(lo, hi, opts.scan_points);
    let values: Vec<f64> = grid.iter().map(|&a| eta_sq(a)).collect();
    let n = grid.len();

    let mut roots = Vec::new();
    for k in 0..n {
        let left = if k > 0 { values[k - 1] } else { f64::INFINITY };
        let right = if k + 1 < n { values[k + 1] } else { f64::INFINITY };
        if !(values[k] < left && values[k] <= right) {
            continue;
        }
        let a = grid[k.saturating_sub(1)];
        let b = grid[(k + 1).min(n - 1)];
        let (x, fx, converged) = golden_section(&eta_sq, a, b, opts.max_iter);
        if fx < opts.tol {
            roots.push(x);
        } else if !converged {
            return Err(Error::NoConvergence {
                iterations: opts.max_iter,
                best: x,
                residual: fx,
            });
        }
    }

    Ok(roots
        .into_iter()
        .map(|alpha| EpLocation {
            p1: alpha,
            p2: p.beta,
            residual: 2.0 * eta_sq(alpha).sqrt(),
            order: 2,
        })
        .collect())
}

/// Golden-section minimization on `[a, b]`. Returns the best point, its
/// value and whether the bracket shrank to rounding level.
fn golden_section(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, max_iter: usize) -> (f64, f64, bool) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    let mut converged = false;
    for _ in 0..max_iter {
        if (b - a) <= 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(1e-300) {
            converged = true;
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    let candidates = [(x1, f1), (x2, f2), (a, f(a)), (b, f(b))];
    let (x, fx) = candidates
        .into_iter()
        .fold((f64::NAN, f64::INFINITY), |best, c| if c.1 < best.1 { c } else { best });
    (x, fx, converged)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSearchOptions {
    pub coarse_n: usize,
    /// Refined residual bound, relative to the window diagonal.
    pub rel_tol: f64,
    /// Candidates must beat this fraction of the local median coarse gap.
    pub accept_factor: f64,
    /// Deduplication radius in units of the refined tolerance.
    pub dedup_factor: f64,
    /// Half-width (in coarse cells) of the neighbourhood for the local median.
    pub median_radius: usize,
}

impl Default for GridSearchOptions {
    fn default() -> Self {
        Self {
            coarse_n: 32,
            rel_tol: 1e-6,
            accept_factor: 1e-3,
            dedup_factor: 10.0,
            median_radius: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSearchResult {
    pub eps: Vec<EpLocation>,
    /// Local minima of the coarse grid that went into refinement.
    pub candidates: usize,
    /// Coarse-grid points where the sampler failed.
    pub skipped_samples: usize,
}

/// Coarse scan of `|λ₊ − λ₋|` over `window`, refinement of every local
/// minimum, acceptance and deduplication. Works on any [`PairSampler`].
pub fn grid_ep_search(
    sampler: &impl PairSampler,
    window: &Window,
    coarse_n: usize,
) -> Result<GridSearchResult> {
    grid_ep_search_with(
        sampler,
        window,
        &GridSearchOptions {
            coarse_n,
            ..GridSearchOptions::default()
        },
    )
}

pub fn grid_ep_search_with(
    sampler: &impl PairSampler,
    window: &Window,
    opts: &GridSearchOptions,
) -> Result<GridSearchResult> {
    window.validate()?;
    let n = opts.coarse_n;
    if n < 8 {
        return Err(Error::Domain(format!("coarse_n must be >= 8, got {n}")));
    }
    let ax1 = window.axis1(n);
    let ax2 = window.axis2(n);

    let gaps: Vec<Option<f64>> = par::map_indices(n * n, |idx| {
        let (i, j) = (idx % n, idx / n);
        sampler
            .sample(ax1[i], ax2[j])
            .ok()
            .map(|[a, b]| (a - b).norm())
            .filter(|g| g.is_finite())
    });
    let skipped_samples = gaps.iter().filter(|g| g.is_none()).count();

    let at = |i: isize, j: isize| -> Option<f64> {
        if i < 0 || j < 0 || i >= n as isize || j >= n as isize {
            None
        } else {
            gaps[j as usize * n + i as usize]
        }
    };

    let mut seeds = Vec::new();
    for j in 0..n as isize {
        for i in 0..n as isize {
            let Some(g) = at(i, j) else { continue };
            let mut is_min = true;
            let mut strictly_below_one = false;
            for dj in -1..=1 {
                for di in -1..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    if let Some(h) = at(i + di, j + dj) {
                        if h < g {
                            is_min = false;
                        }
                        if g < h {
                            strictly_below_one = true;
                        }
                    }
                }
            }
            if is_min && strictly_below_one {
                let r = opts.median_radius as isize;
                let mut local: Vec<f64> = (-r..=r)
                    .flat_map(|dj| (-r..=r).map(move |di| (di, dj)))
                    .filter_map(|(di, dj)| at(i + di, j + dj))
                    .collect();
                let median = median_of(&mut local);
                seeds.push((i as usize, j as usize, median));
            }
        }
    }

    let tol = opts.rel_tol * window.diagonal();
    let cell = (window.width() / (n - 1) as f64, window.height() / (n - 1) as f64);
    let refined: Vec<Option<EpLocation>> = par::map_indices(seeds.len(), |k| {
        let (i, j, median) = seeds[k];
        let (p1, p2) = refine(sampler, window, (ax1[i], ax2[j]), cell);
        let [a, b] = sampler.sample(p1, p2).ok()?;
        let residual = (a - b).norm();
        (residual < tol && residual < opts.accept_factor * median).then_some(EpLocation {
            p1,
            p2,
            residual,
            order: 2,
        })
    });

    let mut found: Vec<EpLocation> = refined.into_iter().flatten().collect();
    found.sort_by(|a, b| a.residual.total_cmp(&b.residual));
    let radius = opts.dedup_factor * tol;
    let mut eps: Vec<EpLocation> = Vec::new();
    for ep in found {
        if eps
            .iter()
            .all(|e| (e.p1 - ep.p1).hypot(e.p2 - ep.p2) > radius)
        {
            eps.push(ep);
        }
    }
    eps.sort_by(|a, b| a.p1.total_cmp(&b.p1).then(a.p2.total_cmp(&b.p2)));

    Ok(GridSearchResult {
        eps,
        candidates: seeds.len(),
        skipped_samples,
    })
}

fn median_of(v: &mut [f64]) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    let mid = v.len() / 2;
    v.select_nth_unstable_by(mid, f64::total_cmp);
    v[mid]
}

/// Nelder–Mead on `|D|` from the seed, then a Newton polish on the complex
/// equation `D = 0` with a finite-difference Jacobian. Everything runs in
/// coordinates normalized to the window so both axes weigh equally.
fn refine(
    sampler: &impl PairSampler,
    window: &Window,
    seed: (f64, f64),
    cell: (f64, f64),
) -> (f64, f64) {
    let (w, h) = (window.width(), window.height());
    let to_params = |u: [f64; 2]| window.clamp(window.p1.0 + u[0] * w, window.p2.0 + u[1] * h);
    let disc = |u: [f64; 2]| -> Option<ComplexScalar> {
        let (p1, p2) = to_params(u);
        sampler.sample(p1, p2).ok().map(|[a, b]| (a - b) * (a - b))
    };
    let cost = |u: [f64; 2]| disc(u).map_or(f64::INFINITY, |d| d.norm());

    let start = [(seed.0 - window.p1.0) / w, (seed.1 - window.p2.0) / h];
    let step = [cell.0 / w, cell.1 / h];
    let mut best = nelder_mead(&cost, start, step, 400);
    let mut best_cost = cost(best);

    for _ in 0..40 {
        let Some(d0) = disc(best) else { break };
        if d0.norm() == 0.0 {
            break;
        }
        let fd = 1e-7;
        let mut jac = [[0.0; 2]; 2];
        let mut ok = true;
        for axis in 0..2 {
            let mut up = best;
            let mut dn = best;
            up[axis] += fd;
            dn[axis] -= fd;
            match (disc(up), disc(dn)) {
                (Some(a), Some(b)) => {
                    let du = (a - b) / (2.0 * fd);
                    jac[0][axis] = du.re;
                    jac[1][axis] = du.im;
                }
                _ => ok = false,
            }
        }
        if !ok {
            break;
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let dx = -(jac[1][1] * d0.re - jac[0][1] * d0.im) / det;
        let dy = -(-jac[1][0] * d0.re + jac[0][0] * d0.im) / det;
        let next = [(best[0] + dx).clamp(0.0, 1.0), (best[1] + dy).clamp(0.0, 1.0)];
        let next_cost = cost(next);
        if next_cost < best_cost {
            let moved = (next[0] - best[0]).hypot(next[1] - best[1]);
            best = next;
            best_cost = next_cost;
            if moved < 1e-16 {
                break;
            }
        } else {
            break;
        }
    }
    to_params(best)
}

fn nelder_mead(f: &impl Fn([f64; 2]) -> f64, start: [f64; 2], step: [f64; 2], max_iter: usize) -> [f64; 2] {
    let mut simplex = [
        start,
        [start[0] + step[0], start[1]],
        [start[0], start[1] + step[1]],
    ];
    let mut values = simplex.map(f);
    for _ in 0..max_iter {
        let mut order = [0usize, 1, 2];
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.map(|k| simplex[k]);
        values = order.map(|k| values[k]);

        let size = (simplex[1][0] - simplex[0][0])
            .abs()
            .max((simplex[1][1] - simplex[0][1]).abs())
            .max((simplex[2][0] - simplex[0][0]).abs())
            .max((simplex[2][1] - simplex[0][1]).abs());
        if size < 1e-15 {
            break;
        }

        let centroid = [
            (simplex[0][0] + simplex[1][0]) / 2.0,
            (simplex[0][1] + simplex[1][1]) / 2.0,
        ];
        let along = |t: f64| {
            [
                centroid[0] + t * (simplex[2][0] - centroid[0]),
                centroid[1] + t * (simplex[2][1] - centroid[1]),
            ]
        };
        let reflected = along(-1.0);
        let fr = f(reflected);
        if fr < values[0] {
            let expanded = along(-2.0);
            let fe = f(expanded);
            if fe < fr {
                simplex[2] = expanded;
                values[2] = fe;
            } else {
                simplex[2] = reflected;
                values[2] = fr;
            }
        } else if fr < values[1] {
            simplex[2] = reflected;
            values[2] = fr;
        } else {
            let (contracted, fc) = if fr < values[2] {
                let p = along(-0.5);
                (p, f(p))
            } else {
                let p = along(0.5);
                (p, f(p))
            };
            if fc < values[2].min(fr) {
                simplex[2] = contracted;
                values[2] = fc;
            } else {
                for k in 1..3 {
                    simplex[k] = [
                        simplex[0][0] + 0.5 * (simplex[k][0] - simplex[0][0]),
                        simplex[0][1] + 0.5 * (simplex[k][1] - simplex[0][1]),
                    ];
                    values[k] = f(simplex[k]);
                }
            }
        }
    }
    let k = (0..3).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap_or(0);
    simplex[k]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::c;
    use crate::toy::{preset, ToyParams};

    #[test]
    fn double_ep_roots() {
        let p = preset("double-ep").unwrap();
        let roots = toy_ep_roots(&p, (0.3, 0.8)).unwrap();
        assert_eq!(roots.len(), 2);
        // mpmath reference: ᾱ²e^{2ᾱ²} = 0.01 mapped back to α.
        assert!((roots[0].p1 - 0.454_145_382_849_234_2).abs() < 1e-12);
        assert!((roots[1].p1 - 0.621_430_791_010_796_9).abs() < 1e-12);
        for r in &roots {
            assert_eq!(r.p2, 1.0);
            assert_eq!(r.order, 2);
            assert!(r.residual < 2e-5);
        }
    }

    #[test]
    fn real_coupling_has_no_roots() {
        let p = ToyParams::new(0.05, 0.0, 1.05, 1.05).unwrap();
        assert!(toy_ep_roots(&p, (0.0, 4.0)).unwrap().is_empty());
    }

    #[test]
    fn starved_refinement_reports_best_iterate() {
        let p = preset("double-ep").unwrap();
        let opts = RootOptions {
            scan_points: 11,
            max_iter: 3,
            tol: 1e-10,
        };
        match toy_ep_roots_with(&p, (0.3, 0.8), &opts) {
            Err(Error::NoConvergence { best, .. }) => assert!((0.3..0.8).contains(&best)),
            other => panic!("expected NoConvergence, got {other:?}"),
        }
    }

    #[test]
    fn bad_bracket() {
        let p = preset("double-ep").unwrap();
        assert!(toy_ep_roots(&p, (0.8, 0.3)).is_err());
        assert!(toy_ep_roots(&p, (-0.1, 0.3)).is_err());
    }

    #[test]
    fn constant_gap_sampler_has_no_eps() {
        let flat = |_: f64, _: f64| Ok([c(0.0, 0.0), c(1.0, 0.0)]);
        let w = Window::new((0.0, 1.0), (0.0, 1.0)).unwrap();
        let r = grid_ep_search(&flat, &w, 16).unwrap();
        assert!(r.eps.is_empty());
    }

    #[test]
    fn coarse_n_floor() {
        let flat = |_: f64, _: f64| Ok([c(0.0, 0.0), c(1.0, 0.0)]);
        let w = Window::new((0.0, 1.0), (0.0, 1.0)).unwrap();
        assert!(grid_ep_search(&flat, &w, 7).is_err());
    }

    #[test]
    fn failing_samples_are_counted() {
        let holey = |x: f64, y: f64| {
            if x < 0.1 {
                Err(Error::Sampler(x, y, "outside data".into()))
            } else {
                let d = c(x - 0.5, y - 0.5);
                Ok([d, -d])
            }
        };
        let w = Window::new((0.0, 1.0), (0.0, 1.0)).unwrap();
        let r = grid_ep_search(&holey, &w, 20).unwrap();
        assert_eq!(r.skipped_samples, 2 * 20);
        assert_eq!(r.eps.len(), 1);
        assert!((r.eps[0].p1 - 0.5).abs() < 1e-9 && (r.eps[0].p2 - 0.5).abs() < 1e-9);
    }
}
