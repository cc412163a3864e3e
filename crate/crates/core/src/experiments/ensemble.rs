use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    random_unit_circle_poly, trial_rng, BasinAggregation, ExperimentKind, ExperimentReport,
    TrialEnsembleConfig,
};
use crate::error::{Error, Result};
use crate::geometry::{dr_disks, iota_for_root_with, DrDisk, Radius};
use crate::newton::{in_fast_basin, newton_step_rootform, BASIN_FLOOR};
use crate::poly::RootForm;

/// Roots closer than this are treated as repeated and the trial is rejected
/// from basin experiments.
const DISTINCT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuotientExtreme {
    pub root_index: usize,
    pub circle_index: usize,
    pub quotient: f64,
}

/// Outcome of one Conjecture-1 trial; `None` extremes mean the trial was
/// rejected as ill-conditioned.
#[derive(Debug, Clone, PartialEq)]
pub struct Conjecture1Trial {
    pub trial: usize,
    pub poly: RootForm,
    pub disks: Vec<DrDisk>,
    pub min: Option<QuotientExtreme>,
    pub max: Option<QuotientExtreme>,
}

/// Runs every Conjecture-1 trial and keeps the per-trial data.
pub fn conjecture1_trials(cfg: &TrialEnsembleConfig) -> Result<Vec<Conjecture1Trial>> {
    cfg.validate()?;
    (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, t as u64);
            let poly = random_unit_circle_poly(cfg.degree, &mut rng)?;
            let disks = match dr_disks(&poly) {
                Ok(d) => d,
                Err(Error::IllConditioned { .. }) => {
                    return Ok(Conjecture1Trial {
                        trial: t,
                        poly,
                        disks: Vec::new(),
                        min: None,
                        max: None,
                    })
                }
                Err(e) => return Err(e),
            };
            let mut min: Option<QuotientExtreme> = None;
            let mut max: Option<QuotientExtreme> = None;
            for (i, &z) in poly.roots().iter().enumerate() {
                let rec = iota_for_root_with(z, &disks, cfg.closeness);
                if !rec.quotient.is_finite() {
                    continue;
                }
                let e = QuotientExtreme {
                    root_index: i,
                    circle_index: rec.circle_index,
                    quotient: rec.quotient,
                };
                if min.is_none_or(|m| e.quotient < m.quotient) {
                    min = Some(e);
                }
                if max.is_none_or(|m| e.quotient > m.quotient) {
                    max = Some(e);
                }
            }
            Ok(Conjecture1Trial {
                trial: t,
                poly,
                disks,
                min,
                max,
            })
        })
        .collect()
}

/// Global minimum and maximum of the per-root quotient over the ensemble.
pub fn conjecture1_experiment(cfg: &TrialEnsembleConfig) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::empty(ExperimentKind::Conjecture1);
    report.ensemble = Some(*cfg);
    let trials = conjecture1_trials(cfg)?;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for t in &trials {
        match (t.min, t.max) {
            (Some(a), Some(b)) => {
                report.accepted_trials += 1;
                lo = lo.min(a.quotient);
                hi = hi.max(b.quotient);
            }
            _ => report.rejected_trials += 1,
        }
    }
    if report.accepted_trials > 0 {
        report.iota1_estimate = Some(lo);
        report.iota2_estimate = Some(hi);
    }
    Ok(report.finish())
}

/// Fast-basin hits of the DR-circle sample points for one polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct BasinSweep {
    /// `counts[i][j]`: sample points of circle `j` in the fast basin of root `i`.
    pub counts: Vec<Vec<u32>>,
    pub points_per_circle: usize,
}

impl BasinSweep {
    /// Best circle count for each root.
    pub fn best_circle_scores(&self) -> Vec<u32> {
        self.counts
            .iter()
            .map(|row| row.iter().copied().max().unwrap_or(0))
            .collect()
    }

    /// Smallest non-empty pair count, or 0 if some root has no hits.
    pub fn min_pair_score(&self) -> u32 {
        self.counts
            .iter()
            .map(|row| row.iter().copied().filter(|&c| c > 0).min().unwrap_or(0))
            .min()
            .unwrap_or(0)
    }

    /// Circles with at least a tenth of their points in the union of basins.
    pub fn rich_circles(&self) -> usize {
        let circles = self.counts.first().map_or(0, |r| r.len());
        (0..circles)
            .filter(|&j| {
                let hits: u32 = self.counts.iter().map(|row| row[j]).sum();
                10 * hits as usize >= self.points_per_circle
            })
            .count()
    }

    /// Per root, the angular measure of all its basin points over every circle.
    pub fn total_radians(&self) -> Vec<f64> {
        let per_point = TAU / self.points_per_circle as f64;
        self.counts
            .iter()
            .map(|row| row.iter().map(|&c| c as f64 * per_point).sum())
            .collect()
    }
}

/// The root whose fast basin contains `x0`, if any.
///
/// Iterates satisfying the bound for one root cannot approach another, so
/// only the root nearest to where plain Newton settles needs the full test.
pub fn basin_owner(p: &RootForm, x0: Complex64, k_max: usize) -> Option<usize> {
    let roots = p.roots();
    let nearest = |x: Complex64| {
        roots
            .iter()
            .enumerate()
            .map(|(i, r)| (i, (x - r).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("non-empty root list")
    };
    let mut x = x0;
    for _ in 0..k_max.max(1) {
        let (i, d) = nearest(x);
        if d <= BASIN_FLOOR * roots[i].norm().max(1.0) {
            break;
        }
        match newton_step_rootform(p, x) {
            Ok(next) => x = next,
            Err(_) => return None,
        }
    }
    let (candidate, _) = nearest(x);
    in_fast_basin(p, roots[candidate], x0, k_max)
        .in_basin
        .then_some(candidate)
}

/// Sample each DR-circle at `factor · n` equally spaced angles starting at 0
/// and attribute every sample to the fast basin it lies in.
pub fn basin_sweep(p: &RootForm, disks: &[DrDisk], factor: usize, k_max: usize) -> BasinSweep {
    let n = p.roots().len();
    let points = factor * n;
    let mut counts = vec![vec![0u32; disks.len()]; n];
    for (j, disk) in disks.iter().enumerate() {
        let Radius::Finite(r) = disk.radius else {
            continue;
        };
        if r == 0.0 {
            continue;
        }
        for s in 0..points {
            let x0 = disk.center + Complex64::from_polar(r, TAU * s as f64 / points as f64);
            if let Some(i) = basin_owner(p, x0, k_max) {
                counts[i][j] += 1;
            }
        }
    }
    BasinSweep {
        counts,
        points_per_circle: points,
    }
}

fn has_near_duplicates(p: &RootForm) -> bool {
    let r = p.roots();
    (0..r.len()).any(|i| (i + 1..r.len()).any(|k| (r[i] - r[k]).norm() <= DISTINCT_TOL))
}

struct BasinStats {
    accepted: u64,
    rejected: u64,
    c2: Option<u64>,
    c3: Option<u64>,
    radians: Option<f64>,
}

fn basin_statistics(cfg: &TrialEnsembleConfig) -> Result<BasinStats> {
    cfg.validate()?;
    let sweeps: Vec<Option<BasinSweep>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, t as u64);
            let poly = random_unit_circle_poly(cfg.degree, &mut rng)?;
            if has_near_duplicates(&poly) {
                return Ok(None);
            }
            match dr_disks(&poly) {
                Ok(disks) => Ok(Some(basin_sweep(
                    &poly,
                    &disks,
                    cfg.circle_points_factor,
                    cfg.basin_k_max,
                ))),
                Err(Error::IllConditioned { .. }) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;

    let mut stats = BasinStats {
        accepted: 0,
        rejected: 0,
        c2: None,
        c3: None,
        radians: None,
    };
    for sweep in sweeps {
        let Some(sweep) = sweep else {
            stats.rejected += 1;
            continue;
        };
        stats.accepted += 1;
        let c2 = match cfg.aggregation {
            BasinAggregation::BestCirclePerRoot => {
                sweep.best_circle_scores().into_iter().min().unwrap_or(0)
            }
            BasinAggregation::EveryPair => sweep.min_pair_score(),
        } as u64;
        let c3 = sweep.rich_circles() as u64;
        let rad = sweep
            .total_radians()
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        stats.c2 = Some(stats.c2.map_or(c2, |v| v.min(c2)));
        stats.c3 = Some(stats.c3.map_or(c3, |v| v.min(c3)));
        stats.radians = Some(stats.radians.map_or(rad, |v| v.min(rad)));
    }
    Ok(stats)
}

fn basin_report(cfg: &TrialEnsembleConfig, kind: ExperimentKind) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::empty(kind);
    report.ensemble = Some(*cfg);
    let stats = basin_statistics(cfg)?;
    report.accepted_trials = stats.accepted;
    report.rejected_trials = stats.rejected;
    report.c2_min_basin_points = stats.c2;
    report.c3_min_rich_circles = stats.c3;
    report.total_radians_min = stats.radians;
    Ok(report.finish())
}

/// Minimum over roots and trials of the best single-circle basin count.
pub fn conjecture2_experiment(cfg: &TrialEnsembleConfig) -> Result<ExperimentReport> {
    basin_report(cfg, ExperimentKind::Conjecture2)
}

/// Minimum over trials of the number of circles with a tenth of their points
/// in the union of fast basins.
pub fn conjecture3_experiment(cfg: &TrialEnsembleConfig) -> Result<ExperimentReport> {
    basin_report(cfg, ExperimentKind::Conjecture3)
}

/// Minimum over roots and trials of the total basin angle across all circles.
pub fn total_radians_experiment(cfg: &TrialEnsembleConfig) -> Result<ExperimentReport> {
    basin_report(cfg, ExperimentKind::TotalRadians)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_reductions() {
        let sweep = BasinSweep {
            counts: vec![vec![3, 0, 7], vec![0, 0, 2], vec![1, 9, 0]],
            points_per_circle: 30,
        };
        assert_eq!(sweep.best_circle_scores(), vec![7, 2, 9]);
        assert_eq!(sweep.min_pair_score(), 1);
        // column sums 4, 9, 9 against a threshold of 3
        assert_eq!(sweep.rich_circles(), 3);
        let rad = sweep.total_radians();
        assert!((rad[1] - 2.0 * TAU / 30.0).abs() < 1e-15);
    }

    #[test]
    fn pair_score_zero_for_empty_root() {
        let sweep = BasinSweep {
            counts: vec![vec![3, 1], vec![0, 0]],
            points_per_circle: 20,
        };
        assert_eq!(sweep.min_pair_score(), 0);
    }

    #[test]
    fn owner_of_point_near_root() {
        let p = RootForm::monic(vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]).unwrap();
        assert_eq!(basin_owner(&p, Complex64::new(1.3, 0.0), 64), Some(0));
        assert_eq!(basin_owner(&p, Complex64::new(-1.2, 0.1), 64), Some(1));
        assert_eq!(basin_owner(&p, Complex64::new(0.0, 0.5), 64), None);
    }
}
