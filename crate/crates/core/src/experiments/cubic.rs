use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ExperimentKind, ExperimentReport};
use crate::error::{Error, Result};
use crate::geometry::rho;
use crate::poly::RootForm;

/// Local refinement stops once its step falls below this.
const REFINE_MIN_STEP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicScanConfig {
    pub grid_step: f64,
    pub radius_cap: f64,
}

impl Default for CubicScanConfig {
    fn default() -> Self {
        CubicScanConfig {
            grid_step: 0.05,
            radius_cap: 50.0,
        }
    }
}

impl CubicScanConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.grid_step > 0.0 && self.grid_step.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "grid_step must be positive, got {}",
                self.grid_step
            )));
        }
        if !(self.radius_cap >= 3.0 && self.radius_cap.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "radius_cap must be at least 3, got {}",
                self.radius_cap
            )));
        }
        Ok(())
    }

    fn feasible(&self, a: Complex64) -> bool {
        a.re >= 0.0 && a.im >= 0.0 && (a - 1.0).norm() >= 2.0 && a.norm() <= self.radius_cap
    }
}

/// Ratios `ρ(ζ)/|z − ζ|` for the roots `1, −1, a` of `(z−1)(z+1)(z−a)`, the
/// first two against `ζ₁ = (a − √(a²+3))/3` and the third against
/// `ζ₂ = (a + √(a²+3))/3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicQuotients {
    pub a: Complex64,
    pub zeta1: Complex64,
    pub zeta2: Complex64,
    pub ratios: [f64; 3],
}

impl CubicQuotients {
    pub fn min(&self) -> f64 {
        self.ratios.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.ratios
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn cubic_quotients(a: Complex64) -> CubicQuotients {
    let one = Complex64::new(1.0, 0.0);
    let s = (a * a + 3.0).sqrt();
    let zeta1 = (a - s) / 3.0;
    let zeta2 = (a + s) / 3.0;
    let p = RootForm::monic(vec![one, -one, a]).expect("finite roots");
    let r1 = rho(&p, zeta1).value();
    let r2 = rho(&p, zeta2).value();
    CubicQuotients {
        a,
        zeta1,
        zeta2,
        ratios: [
            r1 / (one - zeta1).norm(),
            r1 / (-one - zeta1).norm(),
            r2 / (a - zeta2).norm(),
        ],
    }
}

/// Where the scan found its extremes, before and after refinement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicScanDetail {
    pub grid_points: u64,
    pub lattice_min: f64,
    pub lattice_max: f64,
    pub lattice_argmin: Complex64,
    pub lattice_argmax: Complex64,
    pub refined_min: f64,
    pub refined_max: f64,
    pub refined_argmin: Complex64,
    pub refined_argmax: Complex64,
    /// Extremes of the reciprocal `|z − ζ|/ρ` over the lattice.
    pub reciprocal_min: f64,
    pub reciprocal_max: f64,
}

/// Zooming local grid search for an extreme of `f` over the feasible set,
/// starting from a lattice point. The objective is a minimum of two smooth
/// terms, so its extremes sit on ridges where coordinate searches stall.
fn refine(
    cfg: &CubicScanConfig,
    start: Complex64,
    value: f64,
    f: impl Fn(Complex64) -> f64,
    better: impl Fn(f64, f64) -> bool,
) -> (Complex64, f64) {
    const HALF: i32 = 10;
    let (mut x, mut fx) = (start, value);
    let mut h = cfg.grid_step;
    while h > REFINE_MIN_STEP {
        let centre = x;
        for i in -HALF..=HALF {
            for j in -HALF..=HALF {
                let y = centre + Complex64::new(i as f64, j as f64) * h;
                if !cfg.feasible(y) {
                    continue;
                }
                let fy = f(y);
                if better(fy, fx) {
                    (x, fx) = (y, fy);
                }
            }
        }
        h *= 0.25;
    }
    (x, fx)
}

/// Scan `a = (i + j·i)·step` over the first quadrant with `|a − 1| ≥ 2` and
/// `|a| ≤ radius_cap`, then refine the lattice extremes locally.
///
/// The extremes of the lattice sit near kinks of the objective, so a plain
/// lattice can miss the supremum by more than its spacing suggests.
pub fn cubic_scan(cfg: &CubicScanConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let mut report = ExperimentReport::empty(ExperimentKind::CubicScan);
    report.cubic = Some(*cfg);
    let steps = (cfg.radius_cap / cfg.grid_step).floor() as i64;

    #[derive(Clone, Copy)]
    struct Acc {
        count: u64,
        min: (f64, Complex64),
        max: (f64, Complex64),
        rmin: f64,
        rmax: f64,
    }
    let empty = Acc {
        count: 0,
        min: (f64::INFINITY, Complex64::new(0.0, 0.0)),
        max: (f64::NEG_INFINITY, Complex64::new(0.0, 0.0)),
        rmin: f64::INFINITY,
        rmax: f64::NEG_INFINITY,
    };
    let merge = |a: Acc, b: Acc| Acc {
        count: a.count + b.count,
        min: if b.min.0 < a.min.0 { b.min } else { a.min },
        max: if b.max.0 > a.max.0 { b.max } else { a.max },
        rmin: a.rmin.min(b.rmin),
        rmax: a.rmax.max(b.rmax),
    };

    let acc = (0..=steps)
        .into_par_iter()
        .map(|i| {
            let mut acc = empty;
            for j in 0..=steps {
                let a = Complex64::new(i as f64 * cfg.grid_step, j as f64 * cfg.grid_step);
                if !cfg.feasible(a) {
                    continue;
                }
                let q = cubic_quotients(a);
                acc.count += 1;
                let (lo, hi) = (q.min(), q.max());
                if lo < acc.min.0 {
                    acc.min = (lo, a);
                }
                if hi > acc.max.0 {
                    acc.max = (hi, a);
                }
                acc.rmin = acc.rmin.min(1.0 / hi);
                acc.rmax = acc.rmax.max(1.0 / lo);
            }
            acc
        })
        .reduce(|| empty, merge);

    if acc.count == 0 {
        return Err(Error::InvalidConfig(
            "grid contains no feasible points".into(),
        ));
    }
    let (amin, fmin) = refine(
        cfg,
        acc.min.1,
        acc.min.0,
        |a| cubic_quotients(a).min(),
        |new, old| new < old,
    );
    let (amax, fmax) = refine(
        cfg,
        acc.max.1,
        acc.max.0,
        |a| cubic_quotients(a).max(),
        |new, old| new > old,
    );

    report.accepted_trials = acc.count;
    report.iota1_estimate = Some(fmin);
    report.iota2_estimate = Some(fmax);
    report.cubic_detail = Some(CubicScanDetail {
        grid_points: acc.count,
        lattice_min: acc.min.0,
        lattice_max: acc.max.0,
        lattice_argmin: acc.min.1,
        lattice_argmax: acc.max.1,
        refined_min: fmin,
        refined_max: fmax,
        refined_argmin: amin,
        refined_argmax: amax,
        reciprocal_min: acc.rmin,
        reciprocal_max: acc.rmax,
    });
    Ok(report.finish())
}
