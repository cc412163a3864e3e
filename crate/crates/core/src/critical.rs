//! Roots of `p′` for a polynomial in root form.
//!
//! The critical points are the solutions of the secular equation
//! `Σ m_l / (ζ − y_l) = 0` over the distinct roots `y_l` with multiplicities
//! `m_l`, together with `m_l − 1` exact copies of every repeated root. The
//! secular equation is solved by simultaneous Aberth iteration on the reduced
//! polynomial `g(ζ) = Σ m_l Π_{k≠l} (ζ − y_k)`, whose logarithmic derivative
//! is `T₁ − S₂/S₁` with
//!
//! ```text
//! S₁ = Σ m_l/(ζ − y_l),   S₂ = Σ m_l/(ζ − y_l)²,   T₁ = Σ 1/(ζ − y_l).
//! ```
//!
//! This is the scalar form of the eigenproblem for
//! `diag(z₂..z_n) − e vᵀ/n`, `v_i = z_{i+1} − z₁`, and inherits its good
//! behaviour on clustered roots.
//!
//! Approximations that stagnate around a multiple critical point are
//! collapsed onto their centroid when the shifted coefficients confirm the
//! multiplicity.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::poly::RootForm;

const EPS: f64 = f64::EPSILON;

/// Critical points of a polynomial with their scale-normalised residuals
/// `|p′(ζ)| / (|leading| · max(1, |ζ|)^(n−1))`.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalSet {
    pub zetas: Vec<Complex64>,
    pub residuals: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalConfig {
    /// Largest accepted scale-normalised residual.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Seeded random restarts tried after the deterministic start stagnates.
    pub restarts: usize,
    pub seed: u64,
    /// Relative size below which shifted coefficients count as zero when
    /// confirming a multiple critical point.
    pub multiplicity_tolerance: f64,
}

impl Default for CriticalConfig {
    fn default() -> Self {
        CriticalConfig {
            tolerance: 1e-9,
            max_iterations: 500,
            restarts: 4,
            seed: 0x5eed_c0de,
            multiplicity_tolerance: 1e-11,
        }
    }
}

pub fn critical_points(p: &RootForm) -> Result<CriticalSet> {
    critical_points_with(p, &CriticalConfig::default())
}

pub fn critical_points_with(p: &RootForm, cfg: &CriticalConfig) -> Result<CriticalSet> {
    let n = p.roots().len();
    if n < 2 {
        return Err(Error::DegreeTooLow {
            degree: n,
            required: 2,
        });
    }

    let distinct = p.distinct_roots();
    let mut zetas: Vec<Complex64> = Vec::with_capacity(n - 1);
    for &(y, m) in &distinct {
        zetas.extend(std::iter::repeat_n(y, m - 1));
    }
    if distinct.len() < 2 {
        let residuals = vec![0.0; zetas.len()];
        return Ok(CriticalSet { zetas, residuals });
    }

    let nodes: Vec<Complex64> = distinct.iter().map(|&(y, _)| y).collect();
    let weights: Vec<f64> = distinct.iter().map(|&(_, m)| m as f64).collect();
    let secular = Secular {
        nodes: &nodes,
        weights: &weights,
    };
    let diam = p.diameter();

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst = f64::INFINITY;
    for attempt in 0..=cfg.restarts {
        let init = if attempt == 0 {
            angular_midpoints(&nodes, diam)
        } else {
            random_interior(&nodes, &mut rng)
        };
        let Some(mut approx) = secular.aberth(init, diam, cfg.max_iterations) else {
            continue;
        };
        collapse_clusters(p, &mut approx, diam, cfg.multiplicity_tolerance);

        let mut all = zetas.clone();
        all.extend(approx);
        let residuals: Vec<f64> = all.iter().map(|&z| derivative_residual(p, z)).collect();
        let max_res = residuals.iter().cloned().fold(0.0, f64::max);
        if max_res <= cfg.tolerance {
            return Ok(CriticalSet {
                zetas: all,
                residuals,
            });
        }
        log::debug!("critical point attempt {attempt} stalled, residual {max_res:e}");
        worst = worst.min(max_res);
    }
    Err(Error::IllConditioned {
        residual: worst,
        tolerance: cfg.tolerance,
    })
}

/// `|p′(ζ)| / (|leading| · max(1, |ζ|)^(n−1))`.
pub fn derivative_residual(p: &RootForm, zeta: Complex64) -> f64 {
    let n = p.roots().len() as f64;
    let d = p.derivative_log(zeta);
    if d.is_zero() {
        return 0.0;
    }
    let ln_scale = p.leading().norm().ln() + (n - 1.0) * zeta.norm().max(1.0).ln();
    (d.ln_abs - ln_scale).exp()
}

struct Secular<'a> {
    nodes: &'a [Complex64],
    weights: &'a [f64],
}

impl Secular<'_> {
    /// Newton correction `g/g′` for the reduced polynomial, together with the
    /// distance from `z` to the nearest node. `None` when `z` sits on a node.
    fn correction(&self, z: Complex64) -> Option<(Complex64, f64)> {
        let mut s1 = Complex64::new(0.0, 0.0);
        let mut s2 = Complex64::new(0.0, 0.0);
        let mut t1 = Complex64::new(0.0, 0.0);
        let mut dmin = f64::INFINITY;
        for (&y, &m) in self.nodes.iter().zip(self.weights) {
            let diff = z - y;
            let dist = diff.norm();
            if dist == 0.0 {
                return None;
            }
            dmin = dmin.min(dist);
            let r = diff.inv();
            t1 += r;
            s1 += r * m;
            s2 += r * r * m;
        }
        if s1 == Complex64::new(0.0, 0.0) {
            return Some((Complex64::new(0.0, 0.0), dmin));
        }
        let denom = t1 - s2 / s1;
        if denom == Complex64::new(0.0, 0.0) {
            return None;
        }
        Some((denom.inv(), dmin))
    }

    fn aberth(&self, mut z: Vec<Complex64>, diam: f64, max_iter: usize) -> Option<Vec<Complex64>> {
        let k = z.len();
        let mut done = vec![false; k];
        for _ in 0..max_iter {
            let mut active = false;
            for j in 0..k {
                if done[j] {
                    continue;
                }
                let (newton, dmin) = match self.correction(z[j]) {
                    Some(c) => c,
                    None => {
                        // sitting on a pole: nudge off and retry next sweep
                        z[j] += Complex64::new(diam * 1e-9, diam * 1e-9);
                        active = true;
                        continue;
                    }
                };
                let repel: Complex64 = (0..k)
                    .filter(|&i| i != j)
                    .map(|i| (z[j] - z[i]).inv())
                    .sum();
                let delta = newton / (Complex64::new(1.0, 0.0) - newton * repel);
                if !delta.is_finite() {
                    return None;
                }
                z[j] -= delta;
                if delta.norm() <= 4.0 * EPS * (z[j].norm() + dmin) {
                    done[j] = true;
                } else {
                    active = true;
                }
            }
            if !active {
                break;
            }
        }
        z.iter().all(|w| w.is_finite()).then_some(z)
    }
}

/// Midpoints of angularly adjacent roots, dropping the widest gap, each
/// nudged by `1e-3` of the diameter.
fn angular_midpoints(nodes: &[Complex64], diam: f64) -> Vec<Complex64> {
    let d = nodes.len();
    let centroid = nodes.iter().sum::<Complex64>() / d as f64;
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| {
        let ta = (nodes[a] - centroid).arg();
        let tb = (nodes[b] - centroid).arg();
        ta.total_cmp(&tb).then(a.cmp(&b))
    });
    let mut pairs: Vec<(Complex64, Complex64)> = (0..d)
        .map(|i| (nodes[order[i]], nodes[order[(i + 1) % d]]))
        .collect();
    let widest = pairs
        .iter()
        .enumerate()
        .max_by(|a, b| {
            (a.1 .0 - a.1 .1)
                .norm()
                .total_cmp(&(b.1 .0 - b.1 .1).norm())
        })
        .map(|(i, _)| i)
        .unwrap_or(0);
    pairs.remove(widest);
    let golden = PI * (3.0 - 5f64.sqrt());
    pairs
        .into_iter()
        .enumerate()
        .map(|(j, (a, b))| {
            (a + b) * 0.5 + Complex64::from_polar(1e-3 * diam, 0.5 + golden * j as f64)
        })
        .collect()
}

/// Random convex combinations of the roots.
fn random_interior(nodes: &[Complex64], rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    (0..nodes.len() - 1)
        .map(|_| {
            let w: Vec<f64> = nodes.iter().map(|_| rng.gen::<f64>().powi(4)).collect();
            let total: f64 = w.iter().sum();
            nodes.iter().zip(&w).map(|(y, wi)| y * (wi / total)).sum()
        })
        .collect()
}

/// Replace groups of approximations that circle a multiple critical point by
/// copies of their centroid, provided `p′ … p^(m)` all vanish there to
/// working precision.
fn collapse_clusters(p: &RootForm, approx: &mut [Complex64], diam: f64, tol: f64) {
    if approx.len() < 2 || diam == 0.0 {
        return;
    }
    for exp in (1..=12).rev() {
        let threshold = diam * 10f64.powi(-exp);
        for group in single_linkage(approx, threshold) {
            let m = group.len();
            if m < 2 {
                continue;
            }
            let first = approx[group[0]];
            if group.iter().all(|&i| approx[i] == first) {
                continue;
            }
            let centroid = group.iter().map(|&i| approx[i]).sum::<Complex64>() / m as f64;
            let centroid = refine_center(p, centroid, m);
            if is_multiple_critical_point(p, centroid, m, tol) {
                for &i in &group {
                    approx[i] = centroid;
                }
            }
        }
    }
}

/// A few Newton steps on `p^(m)`, which has a simple root at an m-fold
/// critical point. The centroid alone carries the `ε^(1/m)` error of the
/// stagnated approximations.
fn refine_center(p: &RootForm, mut c: Complex64, m: usize) -> Complex64 {
    for _ in 0..3 {
        let q = p.shifted_coeffs(c);
        let q = q.coeffs();
        if m + 1 >= q.len() || q[m + 1].norm() == 0.0 {
            break;
        }
        let h = -q[m] / (q[m + 1] * (m + 1) as f64);
        if !h.is_finite() {
            break;
        }
        c += h;
        if h.norm() <= EPS * c.norm() {
            break;
        }
    }
    c
}

fn is_multiple_critical_point(p: &RootForm, c: Complex64, m: usize, tol: f64) -> bool {
    let (q, bound) = p.shifted_coeffs_with_bound(c);
    let q = q.coeffs();
    (1..=m).all(|j| j < q.len() && q[j].norm() <= tol * bound[j])
}

fn single_linkage(points: &[Complex64], threshold: f64) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while label[r] != r {
            r = label[r];
        }
        let mut k = i;
        while label[k] != r {
            let next = label[k];
            label[k] = r;
            k = next;
        }
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (points[i] - points[j]).norm() <= threshold {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                if a != b {
                    label[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut index_of = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut label, i);
        if index_of[r] == usize::MAX {
            index_of[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[index_of[r]].push(i);
    }
    groups
}
