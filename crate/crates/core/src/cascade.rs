//! All-roots solver that walks the derivative chain.
//!
//! The root of the linear `p^(n−1)` is exact. Each lower level `P = p^(m)`
//! takes the roots of `P′` found one level up as DR-disk centres, samples every
//! DR-circle with `factor · deg P` points, and runs Newton from each sample on
//! `P` written in coordinates centred on the disk. Converged points are merged
//! into distinct roots. A level that comes up short retries with doubled
//! sampling, then attributes the deficit to centres that are themselves roots
//! of `P` (multiple roots).

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{rho_from_taylor, Radius};
use crate::newton::{run_newton, CoeffFormStep};
use crate::poly::{CoeffForm, Evaluate};

/// Default scale-normalised residual bound for accepted roots.
pub const RESIDUAL_BOUND: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CascadeConfig {
    /// Sample points per DR-circle are this factor times the level degree.
    pub samples_per_circle_factor: usize,
    pub newton_tol: f64,
    pub max_newton_steps: usize,
    pub dedupe_tol: f64,
    /// Find one root at a time along a single DR-circle per level, then deflate.
    pub deflate_mode: bool,
    pub residual_bound: f64,
    /// Sampling doublings tried before falling back to multiplicity attribution.
    pub retries: usize,
}

impl Default for CascadeConfig {
    fn default() -> Self {
        let newton_tol = 1e-12;
        CascadeConfig {
            samples_per_circle_factor: 10,
            newton_tol,
            max_newton_steps: 100,
            dedupe_tol: 1e3 * newton_tol,
            deflate_mode: false,
            residual_bound: RESIDUAL_BOUND,
            retries: 3,
        }
    }
}

impl CascadeConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = self.samples_per_circle_factor > 0
            && self.newton_tol > 0.0
            && self.max_newton_steps > 0
            && self.dedupe_tol > 0.0
            && self.residual_bound > 0.0;
        if !positive {
            return Err(Error::InvalidConfig(
                "cascade parameters must be positive".into(),
            ));
        }
        if self.dedupe_tol < self.newton_tol {
            return Err(Error::InvalidConfig(
                "dedupe_tol must be at least newton_tol".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeResult {
    pub roots: Vec<Complex64>,
    /// Newton iterations spent per level, from `p^(n−2)` down to `p`
    /// (per deflation round in deflate mode).
    pub per_level_iterations: Vec<usize>,
    /// Newton starts per level, aligned with `per_level_iterations`.
    pub per_level_starts: Vec<usize>,
    /// `|p(r)| / (|leading| · max(1, |r|)^n)` in the coordinates `p` is given in.
    pub residuals: Vec<f64>,
    /// True for roots emitted by multiplicity attribution rather than Newton.
    pub clustered: Vec<bool>,
}

pub fn cascade_solve(p: &CoeffForm, cfg: &CascadeConfig) -> Result<CascadeResult> {
    cascade_solve_about(p, Complex64::new(0.0, 0.0), cfg)
}

/// Solve a polynomial given in powers of `(z − center)`; returned roots are
/// in the original `z` coordinate.
pub fn cascade_solve_about(
    local: &CoeffForm,
    center: Complex64,
    cfg: &CascadeConfig,
) -> Result<CascadeResult> {
    cfg.validate()?;
    if local.degree() < 1 {
        return Err(Error::DegreeTooLow {
            degree: 0,
            required: 1,
        });
    }
    let solved = if cfg.deflate_mode {
        solve_by_deflation(local, cfg)?
    } else {
        solve_full(local, cfg)?
    };
    let residuals = solved
        .roots
        .iter()
        .map(|&w| scaled_residual(local, w))
        .collect();
    Ok(CascadeResult {
        roots: solved.roots.iter().map(|w| w + center).collect(),
        per_level_iterations: solved.iterations,
        per_level_starts: solved.starts,
        residuals,
        clustered: solved.clustered,
    })
}

/// Synthetic division of `p` by `(z − root)`.
pub fn deflate(p: &CoeffForm, root: Complex64) -> Result<CoeffForm> {
    deflate_with_bound(p, root, RESIDUAL_BOUND)
}

pub fn deflate_with_bound(p: &CoeffForm, root: Complex64, bound: f64) -> Result<CoeffForm> {
    let a = p.coeffs();
    let n = a.len() - 1;
    if n == 0 {
        return Err(Error::DegreeTooLow {
            degree: 0,
            required: 1,
        });
    }
    let mut b = vec![Complex64::new(0.0, 0.0); n];
    b[n - 1] = a[n];
    for k in (1..n).rev() {
        b[k - 1] = a[k] + root * b[k];
    }
    let remainder = a[0] + root * b[0];
    let scale = p.leading().norm() * root.norm().max(1.0).powi(n as i32);
    let limit = bound * scale;
    if remainder.norm() > limit {
        return Err(Error::BadRoot {
            remainder: remainder.norm(),
            bound: limit,
        });
    }
    CoeffForm::new(b)
}

/// `|p(r)| / (|leading| · max(1, |r|)^n)`.
pub fn scaled_residual(p: &CoeffForm, r: Complex64) -> f64 {
    let n = p.degree() as i32;
    p.eval(r).norm() / (p.leading().norm() * r.norm().max(1.0).powi(n))
}

struct Solved {
    roots: Vec<Complex64>,
    clustered: Vec<bool>,
    iterations: Vec<usize>,
    starts: Vec<usize>,
}

fn linear_root(p: &CoeffForm) -> Complex64 {
    let c = p.coeffs();
    -c[0] / c[1]
}

fn solve_full(p: &CoeffForm, cfg: &CascadeConfig) -> Result<Solved> {
    let n = p.degree();
    let chain = p.derivative_chain();
    let mut roots = vec![linear_root(&chain[n - 1])];
    let mut clustered = vec![false];
    let mut iterations = Vec::with_capacity(n.saturating_sub(1));
    let mut starts = Vec::with_capacity(n.saturating_sub(1));
    for m in (0..n - 1).rev() {
        let level = solve_level(&chain[m], m, &roots, cfg)?;
        log::debug!(
            "level {m}: {} roots from {} starts, {} iterations",
            level.roots.len(),
            level.starts,
            level.iterations
        );
        roots = level.roots;
        clustered = level.clustered;
        iterations.push(level.iterations);
        starts.push(level.starts);
    }
    Ok(Solved {
        roots,
        clustered,
        iterations,
        starts,
    })
}

struct Disk {
    center: Complex64,
    multiplicity: usize,
    radius: Radius,
    local: CoeffForm,
    local_prime: Option<CoeffForm>,
}

impl Disk {
    fn new(p: &CoeffForm, center: Complex64, multiplicity: usize) -> Disk {
        let local = p.taylor_shift(center);
        let radius = rho_from_taylor(local.coeffs());
        let local_prime = local.derivative();
        Disk {
            center,
            multiplicity,
            radius,
            local,
            local_prime,
        }
    }

    /// Newton from `samples` equally spaced points on the circle. Returns
    /// converged roots (original coordinates) and the iteration count.
    fn sweep(&self, samples: usize, phase: f64, cfg: &CascadeConfig) -> (Vec<Complex64>, usize) {
        let (Radius::Finite(r), Some(dp)) = (self.radius, self.local_prime.as_ref()) else {
            return (Vec::new(), 0);
        };
        if r == 0.0 {
            return (Vec::new(), 0);
        }
        let stepper = CoeffFormStep {
            p: &self.local,
            pprime: dp,
        };
        let runs: Vec<(Option<Complex64>, usize)> = (0..samples)
            .into_par_iter()
            .map(|s| {
                let theta = TAU * s as f64 / samples as f64 + phase;
                let w0 = Complex64::from_polar(r, theta);
                let t = run_newton(&stepper, w0, cfg.max_newton_steps, cfg.newton_tol);
                (t.converged_to.map(|w| w + self.center), t.steps + 1)
            })
            .collect();
        let iterations = runs.iter().map(|r| r.1).sum();
        (runs.into_iter().filter_map(|r| r.0).collect(), iterations)
    }
}

fn golden_angle() -> f64 {
    PI * (3.0 - 5f64.sqrt())
}

/// Merge points within `tol · max(1, |z|)` of each other, or within the sum
/// of their `slack` radii (single linkage), keeping first-appearance order.
fn group_points(points: &[Complex64], tol: f64, slack: &[f64]) -> Vec<(Vec<usize>, Complex64)> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, &z) in points.iter().enumerate() {
        let near: Vec<usize> = groups
            .iter()
            .enumerate()
            .filter(|(_, g)| {
                g.iter().any(|&k| {
                    let w = points[k];
                    let reach = tol * z.norm().max(w.norm()).max(1.0);
                    let noise = slack.get(i).zip(slack.get(k)).map_or(0.0, |(a, b)| a + b);
                    (w - z).norm() <= reach.max(noise)
                })
            })
            .map(|(gi, _)| gi)
            .collect();
        match near.split_first() {
            None => groups.push(vec![i]),
            Some((&first, rest)) => {
                for &gi in rest.iter().rev() {
                    let moved = std::mem::take(&mut groups[gi]);
                    groups[first].extend(moved);
                }
                groups[first].push(i);
                groups.retain(|g| !g.is_empty());
            }
        }
    }
    groups
        .into_iter()
        .map(|g| {
            let mean = g.iter().map(|&k| points[k]).sum::<Complex64>() / g.len() as f64;
            (g, mean)
        })
        .collect()
}

/// How far rounding in evaluating `p` can move a computed root: the
/// evaluation error bound over `|p′|`.
fn root_uncertainty(p: &CoeffForm, dp: Option<&CoeffForm>, z: Complex64) -> f64 {
    let Some(dp) = dp else {
        return 0.0;
    };
    let (_, bound) = p.eval_with_bound(z);
    let d = dp.eval(z).norm();
    let err = 4.0 * (p.degree() as f64 + 1.0) * f64::EPSILON * bound / d;
    if err.is_finite() {
        err
    } else {
        0.0
    }
}

/// Residual-weighted representatives of the candidate clusters.
fn dedupe(p: &CoeffForm, candidates: &[Complex64], tol: f64) -> Vec<(Complex64, usize)> {
    let dp = p.derivative();
    let slack: Vec<f64> = candidates
        .iter()
        .map(|&z| root_uncertainty(p, dp.as_ref(), z))
        .collect();
    group_points(candidates, tol, &slack)
        .into_iter()
        .map(|(g, _)| {
            let mut wsum = 0.0;
            let mut acc = Complex64::new(0.0, 0.0);
            for &k in &g {
                let z = candidates[k];
                let w = 1.0 / (scaled_residual(p, z) + f64::MIN_POSITIVE.sqrt());
                wsum += w;
                acc += z * w;
            }
            (acc / wsum, g.len())
        })
        .collect()
}

struct Level {
    roots: Vec<Complex64>,
    clustered: Vec<bool>,
    iterations: usize,
    starts: usize,
}

fn solve_level(
    p: &CoeffForm,
    level: usize,
    critical: &[Complex64],
    cfg: &CascadeConfig,
) -> Result<Level> {
    let d = p.degree();
    let disks: Vec<Disk> = group_points(critical, cfg.dedupe_tol, &[])
        .into_iter()
        .map(|(g, center)| Disk::new(p, center, g.len()))
        .collect();

    let mut candidates: Vec<Complex64> = Vec::new();
    let mut iterations = 0;
    let mut starts = 0;
    let mut found = Vec::new();
    for attempt in 0..=cfg.retries {
        let samples = (cfg.samples_per_circle_factor * d) << attempt;
        let sweeps: Vec<(Vec<Complex64>, usize)> = disks
            .iter()
            .enumerate()
            .map(|(j, disk)| {
                let phase = golden_angle() * (j + attempt * disks.len()) as f64;
                disk.sweep(samples, phase, cfg)
            })
            .collect();
        for (roots, its) in sweeps {
            iterations += its;
            candidates.extend(
                roots
                    .into_iter()
                    .filter(|&z| scaled_residual(p, z) <= cfg.residual_bound),
            );
        }
        starts += samples
            * disks
                .iter()
                .filter(|d| matches!(d.radius, Radius::Finite(r) if r > 0.0))
                .count();
        found = dedupe(p, &candidates, cfg.dedupe_tol);
        if found.len() >= d {
            break;
        }
    }

    let mut roots: Vec<Complex64> = found.iter().map(|f| f.0).collect();
    let mut clustered = vec![false; roots.len()];
    if roots.len() > d {
        // keep the most frequently hit roots
        let mut order: Vec<usize> = (0..found.len()).collect();
        order.sort_by(|&a, &b| found[b].1.cmp(&found[a].1).then(a.cmp(&b)));
        order.truncate(d);
        order.sort_unstable();
        roots = order.iter().map(|&i| found[i].0).collect();
        clustered = vec![false; d];
    } else if roots.len() < d {
        attribute_multiplicity(p, &disks, &mut roots, &mut clustered, cfg);
        if roots.len() != d {
            return Err(Error::LevelIncomplete {
                level,
                found: roots.len(),
                expected: d,
            });
        }
    }
    Ok(Level {
        roots,
        clustered,
        iterations,
        starts,
    })
}

/// Centres that are numerically roots of `P` are multiple roots: a centre of
/// multiplicity `μ` as a root of `P′` is a root of multiplicity `μ + 1` of
/// `P`. Newton results crowding such a centre are dropped in its favour.
fn attribute_multiplicity(
    p: &CoeffForm,
    disks: &[Disk],
    roots: &mut Vec<Complex64>,
    clustered: &mut Vec<bool>,
    cfg: &CascadeConfig,
) {
    let crowd = cfg.dedupe_tol.sqrt();
    for disk in disks {
        let is_root = matches!(disk.radius, Radius::Finite(r) if r == 0.0)
            || scaled_residual(p, disk.center) <= cfg.residual_bound;
        if !is_root {
            continue;
        }
        let c = disk.center;
        let mut k = 0;
        while k < roots.len() {
            if (roots[k] - c).norm() <= crowd * c.norm().max(1.0) {
                roots.remove(k);
                clustered.remove(k);
            } else {
                k += 1;
            }
        }
        for _ in 0..disk.multiplicity + 1 {
            roots.push(c);
            clustered.push(true);
        }
        log::debug!("attributed a {}-fold root at {c}", disk.multiplicity + 1);
    }

    // Newton results just outside the crowd radius are copies of an
    // attributed root; drop the closest ones while the level is overfull.
    let target = p.degree();
    while roots.len() > target {
        let nearest = (0..roots.len())
            .filter(|&k| !clustered[k])
            .map(|k| {
                let d = (0..roots.len())
                    .filter(|&i| clustered[i])
                    .map(|i| (roots[k] - roots[i]).norm())
                    .fold(f64::INFINITY, f64::min);
                (k, d)
            })
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match nearest {
            Some((k, d)) if d.is_finite() => {
                roots.remove(k);
                clustered.remove(k);
            }
            _ => break,
        }
    }
}

fn solve_by_deflation(p: &CoeffForm, cfg: &CascadeConfig) -> Result<Solved> {
    let mut current = p.clone();
    let mut roots = Vec::with_capacity(p.degree());
    let mut clustered = Vec::with_capacity(p.degree());
    let mut iterations = Vec::new();
    let mut starts = Vec::new();
    while current.degree() >= 2 {
        let single = single_root(&current, cfg)?;
        iterations.push(single.iterations);
        starts.push(single.starts);
        let r = polish(p, single.root, cfg);
        // the deflated quotient carries the error of every earlier root
        current = deflate_with_bound(&current, r, cfg.residual_bound.sqrt())?;
        roots.push(r);
        clustered.push(single.clustered);
    }
    roots.push(polish(p, linear_root(&current), cfg));
    clustered.push(false);
    Ok(Solved {
        roots,
        clustered,
        iterations,
        starts,
    })
}

/// A few Newton steps on the original polynomial, kept only if they improve
/// the residual.
fn polish(p: &CoeffForm, r: Complex64, cfg: &CascadeConfig) -> Complex64 {
    let Some(dp) = p.derivative() else {
        return r;
    };
    let t = run_newton(&CoeffFormStep { p, pprime: &dp }, r, 8, cfg.newton_tol);
    match t.converged_to {
        Some(z) if scaled_residual(p, z) <= scaled_residual(p, r) => z,
        _ => r,
    }
}

struct SingleRoot {
    root: Complex64,
    clustered: bool,
    iterations: usize,
    starts: usize,
}

/// One root of `p` following a single DR-circle per level; at each level the
/// most frequently reached root seeds the next circle.
fn single_root(p: &CoeffForm, cfg: &CascadeConfig) -> Result<SingleRoot> {
    let n = p.degree();
    let chain = p.derivative_chain();
    let mut z = linear_root(&chain[n - 1]);
    let mut clustered = false;
    let mut iterations = 0;
    let mut starts = 0;
    for m in (0..n - 1).rev() {
        let level_poly = &chain[m];
        let d = level_poly.degree();
        let disk = Disk::new(level_poly, z, 1);
        if matches!(disk.radius, Radius::Finite(r) if r == 0.0) {
            clustered = true;
            continue;
        }
        let mut candidates = Vec::new();
        let mut best = None;
        for attempt in 0..=cfg.retries {
            let samples = (cfg.samples_per_circle_factor * d) << attempt;
            let (found, its) = disk.sweep(samples, golden_angle() * attempt as f64, cfg);
            iterations += its;
            starts += samples;
            candidates.extend(
                found
                    .into_iter()
                    .filter(|&w| scaled_residual(level_poly, w) <= cfg.residual_bound),
            );
            best = dedupe(level_poly, &candidates, cfg.dedupe_tol)
                .into_iter()
                .enumerate()
                .max_by(|a, b| a.1 .1.cmp(&b.1 .1).then(b.0.cmp(&a.0)))
                .map(|(_, (root, _))| root);
            if best.is_some() {
                break;
            }
        }
        match best {
            Some(r) => {
                z = r;
                clustered = false;
            }
            None if scaled_residual(level_poly, z) <= cfg.residual_bound => clustered = true,
            None => {
                return Err(Error::LevelIncomplete {
                    level: m,
                    found: 0,
                    expected: 1,
                })
            }
        }
    }
    Ok(SingleRoot {
        root: z,
        clustered,
        iterations,
        starts,
    })
}
