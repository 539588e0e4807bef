//! Plain-Rust side of the demo. Every function returns a JSON value so the
//! wasm wrappers stay one-liners and the logic is testable natively.

use nhep_core::crossing::{classify, match_branches, overlap_peaks, toy_scan, AlphaScan};
use nhep_core::monodromy::{encircle as run_loop, Loop};
use nhep_core::sampler::linspace;
use nhep_core::surface::{build_surface, cut_components, DeltaMode, GridEdge, SheetGrid};
use nhep_core::toy::{ToyModel, ToyParams};
use nhep_core::{PairSampler, Result, Window};
use serde_json::{json, Value};

pub fn scan(g_c: f64, beta: f64, gamma1: f64, gamma2: f64, start: f64, end: f64, n: usize) -> Result<Value> {
    let p = ToyParams::new(g_c, beta, gamma1, gamma2)?;
    let s = toy_scan(&p, &AlphaScan { start, end, n })?;
    let t = &s.trajectory;
    let label = classify(t).map(|r| r.label.to_string()).unwrap_or_else(|_| "unclassified".into());
    Ok(json!({
        "alpha": t.ts,
        "re": [t.branch_a.iter().map(|z| z.re).collect::<Vec<_>>(), t.branch_b.iter().map(|z| z.re).collect::<Vec<_>>()],
        "im": [t.branch_a.iter().map(|z| z.im).collect::<Vec<_>>(), t.branch_b.iter().map(|z| z.im).collect::<Vec<_>>()],
        "overlap": s.overlaps,
        "overlap_peaks": overlap_peaks(&t.ts, &s.vectors)?,
        "label": label,
    }))
}

fn midpoints(grid: &SheetGrid, edges: &[GridEdge]) -> Vec<(f64, f64)> {
    edges
        .iter()
        .map(|e| {
            let (x, y) = e.midpoint();
            grid.index_to_params(x, y)
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
pub fn sheets(
    g_c: f64,
    gamma1: f64,
    gamma2: f64,
    alpha: (f64, f64),
    beta: (f64, f64),
    n1: usize,
    n2: usize,
) -> Result<Value> {
    let model = ToyModel::new(g_c, gamma1, gamma2)?;
    let w = Window::new(alpha, beta)?;
    let g = build_surface(&model, &w, n1, n2, DeltaMode::Delta)?;
    Ok(json!({
        "n1": n1,
        "n2": n2,
        "alpha": alpha,
        "beta": beta,
        "re": g.sheet1.iter().map(|z| z.re).collect::<Vec<_>>(),
        "im": g.sheet1.iter().map(|z| z.im).collect::<Vec<_>>(),
        "re_cuts": midpoints(&g, &g.re_cut_edges),
        "im_cuts": midpoints(&g, &g.im_cut_edges),
        "jump_cuts": midpoints(&g, &g.cut_cells),
        "components": {
            "re": cut_components(&g, &g.re_cut_edges).len(),
            "im": cut_components(&g, &g.im_cut_edges).len(),
        },
    }))
}

pub fn encircle(g_c: f64, gamma1: f64, gamma2: f64, center: (f64, f64), radius: f64) -> Result<Value> {
    let model = ToyModel::new(g_c, gamma1, gamma2)?;
    let lp = Loop::circle(center, radius)?;
    let r = run_loop(&model, &lp, 256)?;
    // traces for drawing, matched along 257 points of the loop
    let s = linspace(0.0, 1.0, 257);
    let raw = s
        .iter()
        .map(|&t| {
            let (x, y) = lp.point(t);
            model.sample(x, y)
        })
        .collect::<Result<Vec<_>>>()?;
    let tr = match_branches(s.clone(), &raw)?;
    let path: Vec<(f64, f64)> = s.iter().map(|&t| lp.point(t)).collect();
    Ok(json!({
        "permutation": r.permutation.to_string(),
        "n_steps": r.n_steps,
        "path": path,
        "branch_a": tr.branch_a.iter().map(|z| (z.re, z.im)).collect::<Vec<_>>(),
        "branch_b": tr.branch_b.iter().map(|z| (z.re, z.im)).collect::<Vec<_>>(),
    }))
}

pub fn to_json_string(r: Result<Value>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": { "kind": e.kind(), "message": e.to_string() } }).to_string(),
    }
}
