//! Desk-scale estimate of the extremal volume `V_ell`: the supremum of the
//! volumes of fully truncated tetrahedra whose internal edge lengths are all
//! at least `ell`. A multistart Nelder-Mead search runs over the 12 chart
//! coordinates of four hyperideal vertices with a quadratic penalty on edge
//! shortfalls, followed by a high-penalty polish and a feasibility repair.

use crate::hyperlin::{lift, mink_dot, KleinPoint};
use crate::la::{self, Vec3};
use crate::specfun;
use crate::trunc::{self, validate, TruncTetConfig, Validity};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ExtremalError {
    #[error("every restart ended infeasible")]
    NoFeasiblePoint,
    #[error("bad search configuration: {0}")]
    BadSearchConfig(&'static str),
}

/// Edge lengths may undershoot `ell_min` by this much and still count as
/// feasible; matches the feasibility contract of [`SearchResult`].
pub const FEASIBILITY_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, Copy)]
pub struct SearchConfig {
    pub ell_min: f64,
    pub restarts: u32,
    pub seed: u64,
    pub penalty_weight: f64,
    pub tol: f64,
    pub max_iters: u32,
}

impl SearchConfig {
    pub fn new(ell_min: f64) -> Self {
        Self {
            ell_min,
            restarts: 50,
            seed: 0,
            penalty_weight: 100.0 * specfun::v8(),
            tol: 1e-7,
            max_iters: 2000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub best_volume: f64,
    pub best_config: TruncTetConfig,
    /// Index of the restart that produced the winner (ties go to the lowest).
    pub restart_index: u32,
    /// All six edges within [`FEASIBILITY_SLACK`] of the bound and the
    /// configuration fully valid.
    pub feasible: bool,
}

fn coords_of(cfg: &TruncTetConfig) -> [f64; 12] {
    let mut x = [0.0; 12];
    for (i, p) in cfg.coords().iter().enumerate() {
        x[3 * i..3 * i + 3].copy_from_slice(p);
    }
    x
}

fn points_of(x: &[f64; 12]) -> [Vec3; 4] {
    [
        [x[0], x[1], x[2]],
        [x[3], x[4], x[5]],
        [x[6], x[7], x[8]],
        [x[9], x[10], x[11]],
    ]
}

fn config_of(x: &[f64; 12]) -> Option<TruncTetConfig> {
    let p = points_of(x);
    let mk = |v: Vec3| KleinPoint::new(v).ok().filter(|k| k.is_hyperideal());
    Some(TruncTetConfig::new([
        mk(p[0])?,
        mk(p[1])?,
        mk(p[2])?,
        mk(p[3])?,
    ]))
}

/// Six pairwise Minkowski products of the normalized lifts. Each internal
/// edge exists exactly when its product is < -1, with cosh L = -product.
fn pair_products(cfg: &TruncTetConfig) -> [f64; 6] {
    let lifts = [
        lift(cfg.vertex(0)),
        lift(cfg.vertex(1)),
        lift(cfg.vertex(2)),
        lift(cfg.vertex(3)),
    ];
    let mut out = [0.0; 6];
    let mut k = 0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            out[k] = mink_dot(&lifts[i], &lifts[j]);
            k += 1;
        }
    }
    out
}

struct Eval {
    score: f64,
    /// Exact-formula edge feasibility (independent of the volume quadrature).
    feasible: bool,
}

/// Penalized objective. Scores are tiered so that any valid configuration
/// beats every invalid one regardless of the penalty magnitude:
/// valid >= -tier, crossing violations near -10 tier, classification
/// failures near -100 tier, each with a slope back toward validity.
fn evaluate(x: &[f64; 12], ell_min: f64, weight: f64, vol_tol: f64, vol_budget: i64) -> Eval {
    let tier = 10.0 * (1.0 + 6.0 * weight * ell_min * ell_min);
    let pts = points_of(x);

    let mut class_bad = 0.0;
    for p in pts {
        let r = la::norm(p);
        if r <= 1.0 + 1e-6 {
            class_bad += (1.0 + 1e-6) - r;
        }
    }
    if class_bad > 0.0 {
        return Eval {
            score: -100.0 * tier - tier * class_bad,
            feasible: false,
        };
    }
    let cfg = match config_of(x) {
        Some(c) => c,
        None => {
            return Eval {
                score: -100.0 * tier,
                feasible: false,
            }
        }
    };

    let prods = pair_products(&cfg);
    let mut cross_bad = 0.0;
    for p in prods {
        if p >= -1.0 {
            cross_bad += p + 1.0 + 1e-9;
        }
    }
    if cross_bad > 0.0 {
        return Eval {
            score: -10.0 * tier - tier * cross_bad.min(8.0),
            feasible: false,
        };
    }

    let vol = trunc::truncation_polytope(&cfg)
        .and_then(|poly| trunc::volume_budgeted(&poly, vol_tol, vol_budget));
    let vol = match vol {
        Ok(v) => v,
        Err(_) => {
            return Eval {
                score: -10.0 * tier,
                feasible: false,
            }
        }
    };

    let mut penalty = 0.0;
    let mut feasible = true;
    for p in prods {
        let len = (-p).acosh();
        let short = ell_min - len;
        if short > 0.0 {
            penalty += weight * short * short;
            if short > FEASIBILITY_SLACK {
                feasible = false;
            }
        }
    }
    Eval {
        score: vol - penalty,
        feasible,
    }
}

/// Exact edge feasibility of a coordinate vector (no quadrature involved).
fn exact_feasible(x: &[f64; 12], ell_min: f64) -> bool {
    let Some(cfg) = config_of(x) else {
        return false;
    };
    if validate(&cfg) != Validity::Valid {
        return false;
    }
    pair_products(&cfg)
        .iter()
        .all(|&p| p < -1.0 && (-p).acosh() >= ell_min - FEASIBILITY_SLACK)
}

/// Deterministic Nelder-Mead maximization; returns the best point seen and,
/// separately, the best point that was feasible when evaluated.
struct NmOutcome {
    best: [f64; 12],
    best_feasible: Option<([f64; 12], f64)>,
}

fn nelder_mead<F: FnMut(&[f64; 12]) -> Eval>(
    mut f: F,
    x0: [f64; 12],
    step: f64,
    budget: u32,
) -> NmOutcome {
    const N: usize = 12;
    let mut best_feasible: Option<([f64; 12], f64)> = None;
    let mut evals = 0u32;
    let mut eval = |x: &[f64; 12], bf: &mut Option<([f64; 12], f64)>, evals: &mut u32| -> f64 {
        let e = f(x);
        *evals += 1;
        if e.feasible && bf.as_ref().is_none_or(|(_, s)| e.score > *s) {
            *bf = Some((*x, e.score));
        }
        e.score
    };

    let mut pts: Vec<[f64; 12]> = Vec::with_capacity(N + 1);
    pts.push(x0);
    for i in 0..N {
        let mut p = x0;
        p[i] += step * (1.0 + x0[i].abs());
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts
        .iter()
        .map(|p| eval(p, &mut best_feasible, &mut evals))
        .collect();

    while evals < budget {
        let mut idx: Vec<usize> = (0..=N).collect();
        idx.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]).then(a.cmp(&b)));
        let pts2: Vec<[f64; 12]> = idx.iter().map(|&i| pts[i]).collect();
        let vals2: Vec<f64> = idx.iter().map(|&i| vals[i]).collect();
        pts = pts2;
        vals = vals2;

        if vals[0] - vals[N] <= 1e-13 * (1.0 + vals[0].abs()) {
            break;
        }

        let mut centroid = [0.0; 12];
        for p in &pts[..N] {
            for k in 0..N {
                centroid[k] += p[k];
            }
        }
        for c in &mut centroid {
            *c /= N as f64;
        }
        let worst = pts[N];
        let blend = |a: &[f64; 12], b: &[f64; 12], t: f64| {
            let mut out = [0.0; 12];
            for k in 0..N {
                out[k] = a[k] + t * (b[k] - a[k]);
            }
            out
        };

        let xr = blend(&centroid, &worst, -1.0);
        let fr = eval(&xr, &mut best_feasible, &mut evals);
        if fr > vals[0] {
            let xe = blend(&centroid, &worst, -2.0);
            let fe = eval(&xe, &mut best_feasible, &mut evals);
            if fe > fr {
                pts[N] = xe;
                vals[N] = fe;
            } else {
                pts[N] = xr;
                vals[N] = fr;
            }
        } else if fr > vals[N - 1] {
            pts[N] = xr;
            vals[N] = fr;
        } else {
            let xc = if fr > vals[N] {
                blend(&centroid, &xr, 0.5)
            } else {
                blend(&centroid, &worst, 0.5)
            };
            let fc = eval(&xc, &mut best_feasible, &mut evals);
            if fc > fr.max(vals[N]) {
                pts[N] = xc;
                vals[N] = fc;
            } else {
                for i in 1..=N {
                    pts[i] = blend(&pts[0], &pts[i], 0.5);
                    vals[i] = eval(&pts[i], &mut best_feasible, &mut evals);
                }
            }
        }
    }

    let mut bi = 0;
    for i in 1..=N {
        if vals[i] > vals[bi] {
            bi = i;
        }
    }
    NmOutcome {
        best: pts[bi],
        best_feasible,
    }
}

/// Shrink the radial excess of every vertex by a common factor until all six
/// edges clear `ell_min`; radii closer to the sphere lengthen every edge.
fn repair_toward_sphere(x: &[f64; 12], ell_min: f64) -> Option<[f64; 12]> {
    let scaled = |lambda: f64| -> [f64; 12] {
        let mut out = [0.0; 12];
        for i in 0..4 {
            let p = [x[3 * i], x[3 * i + 1], x[3 * i + 2]];
            let r = la::norm(p);
            let r2 = 1.0 + lambda * (r - 1.0);
            let q = la::scale(p, r2 / r);
            out[3 * i..3 * i + 3].copy_from_slice(&q);
        }
        out
    };
    let min_edge = |lambda: f64| -> Option<f64> {
        let cfg = config_of(&scaled(lambda))?;
        if validate(&cfg) != Validity::Valid {
            return None;
        }
        let prods = pair_products(&cfg);
        if prods.iter().any(|&p| p >= -1.0) {
            return None;
        }
        Some(
            prods
                .iter()
                .map(|&p| (-p).acosh())
                .fold(f64::INFINITY, f64::min),
        )
    };
    if let Some(m) = min_edge(1.0) {
        if m >= ell_min {
            return Some(*x);
        }
    }
    // bracket: find a shrink factor that clears the bound; an invalid start
    // can still become valid once the vertices approach the sphere
    let mut lo = 1.0;
    let mut found = None;
    for k in 1..50 {
        let lam = 0.5_f64.powi(k);
        match min_edge(lam) {
            Some(m) if m >= ell_min + 1e-9 => {
                found = Some(lam);
                break;
            }
            Some(_) => lo = lam,
            None => {}
        }
    }
    let mut hi = found?;
    // bisect back toward lambda = 1 keeping feasibility at `hi`
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        match min_edge(mid) {
            Some(m) if m >= ell_min + 1e-9 => hi = mid,
            _ => lo = mid,
        }
    }
    Some(scaled(hi))
}

fn sample_start(rng: &mut ChaCha8Rng) -> [f64; 12] {
    let unit = |rng: &mut ChaCha8Rng| -> Vec3 {
        loop {
            let v = [
                rng.gen::<f64>() * 2.0 - 1.0,
                rng.gen::<f64>() * 2.0 - 1.0,
                rng.gen::<f64>() * 2.0 - 1.0,
            ];
            let n = la::norm(v);
            if n > 1e-3 && n <= 1.0 {
                return la::scale(v, 1.0 / n);
            }
        }
    };
    // four reasonably spread directions
    let dirs = loop {
        let d = [unit(rng), unit(rng), unit(rng), unit(rng)];
        let mut ok = true;
        for i in 0..4 {
            for j in (i + 1)..4 {
                if la::dot(d[i], d[j]) > 0.55 {
                    ok = false;
                }
            }
        }
        if ok {
            break d;
        }
    };
    let mut x = [0.0; 12];
    for (i, d) in dirs.iter().enumerate() {
        // radial push-out keeps every start strictly hyperideal
        let r = 1.1 + rng.gen::<f64>() * 1.9;
        x[3 * i..3 * i + 3].copy_from_slice(&la::scale(*d, r));
    }
    x
}

struct RestartOutcome {
    volume: f64,
    coords: [f64; 12],
    feasible: bool,
}

fn precise_candidate(x: &[f64; 12], ell_min: f64, tol: f64) -> Option<RestartOutcome> {
    let cfg = config_of(x)?;
    if validate(&cfg) != Validity::Valid {
        return None;
    }
    let poly = trunc::truncation_polytope(&cfg).ok()?;
    let vol = trunc::volume(&poly, tol).ok()?;
    Some(RestartOutcome {
        volume: vol,
        coords: *x,
        feasible: exact_feasible(x, ell_min),
    })
}

fn run_restart(cfg: &SearchConfig, r: u32) -> Option<RestartOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(r as u64));
    let x0 = sample_start(&mut rng);

    // wide stage on the plain penalty, coarse budget-capped quadrature
    let stage1 = nelder_mead(
        |x| evaluate(x, cfg.ell_min, cfg.penalty_weight, 1e-2, 3_000),
        x0,
        0.12,
        cfg.max_iters,
    );
    // polish with a sharpened penalty so the optimum lands inside the slack;
    // start from a repaired point when the wide stage ended short of the bound
    let repaired1 = repair_toward_sphere(&stage1.best, cfg.ell_min);
    let stage2 = nelder_mead(
        |x| evaluate(x, cfg.ell_min, cfg.penalty_weight * 1e4, 1e-4, 30_000),
        repaired1.unwrap_or(stage1.best),
        1e-3,
        cfg.max_iters / 2,
    );

    let fine = cfg.tol.min(1e-6);
    let mut candidates: Vec<[f64; 12]> = vec![stage2.best];
    if let Some((x, _)) = stage2.best_feasible {
        candidates.push(x);
    }
    if let Some((x, _)) = stage1.best_feasible {
        candidates.push(x);
    }
    if let Some(x) = repaired1 {
        candidates.push(x);
    }
    if let Some(x) = repair_toward_sphere(&stage2.best, cfg.ell_min) {
        candidates.push(x);
    }

    let mut best: Option<RestartOutcome> = None;
    for x in candidates {
        if let Some(out) = precise_candidate(&x, cfg.ell_min, fine) {
            if out.feasible && best.as_ref().is_none_or(|b| out.volume > b.volume) {
                best = Some(out);
            }
        }
    }
    best
}

/// Multistart estimate of `V_ell`. Restart `r` is seeded with `seed + r`, so
/// identical configurations reproduce bit-identical results; restarts run in
/// parallel and the reduction picks the highest feasible volume, ties broken
/// by the lowest restart index.
pub fn estimate_vl(cfg: &SearchConfig) -> Result<SearchResult, ExtremalError> {
    if cfg.ell_min.is_nan() || cfg.ell_min <= 0.0 {
        return Err(ExtremalError::BadSearchConfig("ell_min must be positive"));
    }
    if cfg.restarts < 1 {
        return Err(ExtremalError::BadSearchConfig("restarts must be >= 1"));
    }
    if cfg.penalty_weight.is_nan() || cfg.penalty_weight <= 0.0 {
        return Err(ExtremalError::BadSearchConfig(
            "penalty_weight must be positive",
        ));
    }

    let outcomes: Vec<Option<RestartOutcome>> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| run_restart(cfg, r))
        .collect();

    let mut winner: Option<(u32, RestartOutcome)> = None;
    for (r, out) in outcomes.into_iter().enumerate() {
        let Some(out) = out else { continue };
        if winner.as_ref().is_none_or(|(_, w)| out.volume > w.volume) {
            winner = Some((r as u32, out));
        }
    }
    let (restart_index, out) = winner.ok_or(ExtremalError::NoFeasiblePoint)?;
    let config = config_of(&out.coords).expect("winning coordinates are valid");
    Ok(SearchResult {
        best_volume: out.volume,
        best_config: config,
        restart_index,
        feasible: out.feasible,
    })
}

/// Local-maximality witness: sample perturbations of magnitude at most
/// `radius` (uniform in the 12-ball) and report whether no feasible one
/// improves the volume by more than 1e-6.
pub fn perturbation_check(
    c: &TruncTetConfig,
    ell_min: f64,
    n_samples: u32,
    radius: f64,
    seed: u64,
) -> bool {
    if n_samples == 0 {
        return true;
    }
    let base = coords_of(c);
    let Some(base_out) = precise_candidate(&base, ell_min, 1e-6) else {
        return false;
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..n_samples {
        let mut dir = [0.0; 12];
        let mut n2 = 0.0;
        for d in &mut dir {
            *d = standard_normal(&mut rng);
            n2 += *d * *d;
        }
        let n = n2.sqrt().max(1e-300);
        let mag = radius * rng.gen::<f64>().powf(1.0 / 12.0);
        let mut x = base;
        for k in 0..12 {
            x[k] += dir[k] / n * mag;
        }
        if !exact_feasible(&x, ell_min) {
            continue;
        }
        if let Some(out) = precise_candidate(&x, ell_min, 1e-6) {
            if out.volume > base_out.volume + 1e-6 {
                return false;
            }
        }
    }
    true
}

/// Marsaglia polar method; avoids pulling in a distributions dependency.
fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let u = rng.gen::<f64>() * 2.0 - 1.0;
        let v = rng.gen::<f64>() * 2.0 - 1.0;
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            return u * (-2.0 * s.ln() / s).sqrt();
        }
    }
}
