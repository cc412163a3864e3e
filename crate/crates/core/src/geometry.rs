//! DR-disks, annuli and the per-root quotients `|z_i − ζ_j| / ρ_j`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::critical::{critical_points, CriticalSet};
use crate::error::Result;
use crate::poly::RootForm;

/// A radius that may be infinite when every term of the minimum is.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Radius {
    Finite(f64),
    Infinite,
}

impl Radius {
    pub fn value(&self) -> f64 {
        match *self {
            Radius::Finite(r) => r,
            Radius::Infinite => f64::INFINITY,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Radius::Finite(_))
    }
}

/// Circle about a critical point `ζ_j` with radius `ρ_j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DrDisk {
    pub center: Complex64,
    pub radius: Radius,
}

impl DrDisk {
    pub fn annulus(&self, iota1: f64, iota2: f64) -> Annulus {
        let r = self.radius.value();
        Annulus {
            center: self.center,
            inner: iota1 * r,
            outer: iota2 * r,
        }
    }

    /// `|z − ζ| / ρ` with the conventions for degenerate radii: a zero radius
    /// gives 1 for the centre itself and `∞` elsewhere; an infinite radius
    /// gives 0.
    pub fn quotient(&self, z: Complex64) -> f64 {
        let dist = (z - self.center).norm();
        match self.radius {
            Radius::Infinite => 0.0,
            Radius::Finite(0.0) => {
                if dist == 0.0 {
                    1.0
                } else {
                    f64::INFINITY
                }
            }
            Radius::Finite(r) => dist / r,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Annulus {
    pub center: Complex64,
    pub inner: f64,
    pub outer: f64,
}

impl Annulus {
    pub fn contains(&self, z: Complex64) -> bool {
        let d = (z - self.center).norm();
        self.inner <= d && d <= self.outer
    }
}

/// The quotient for one root against the DR-disk it is attributed to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IotaRecord {
    pub root: Complex64,
    pub circle_index: usize,
    pub quotient: f64,
}

/// How "closest to 1" is measured when attributing a root to a disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Closeness {
    /// `|q − 1|`
    #[default]
    Additive,
    /// `|ln q|`, under which `q` and `1/q` tie.
    Multiplicative,
}

impl Closeness {
    fn distance(&self, q: f64) -> f64 {
        match self {
            Closeness::Additive => (q - 1.0).abs(),
            Closeness::Multiplicative => q.ln().abs(),
        }
    }
}

/// `ρ = min_{k=2..n} |p(ζ) k! / p^(k)(ζ)|^(1/k)`.
///
/// The derivatives come from the coefficients of `p(z + ζ)`, expanded from
/// the shifted factors after scaling by the largest `|z_i − ζ|` so the
/// expansion stays in range. Vanishing derivatives contribute `+∞`.
pub fn rho(p: &RootForm, zeta: Complex64) -> Radius {
    let shifted: Vec<Complex64> = p.roots().iter().map(|&r| r - zeta).collect();
    if shifted.iter().any(|w| w.norm() == 0.0) {
        return Radius::Finite(0.0);
    }
    let scale = shifted.iter().map(|w| w.norm()).fold(0.0, f64::max);
    let scaled = RootForm::monic(shifted.iter().map(|w| w / scale).collect())
        .expect("shifted roots are finite");
    let q = scaled.shifted_coeffs(Complex64::new(0.0, 0.0));
    let q = q.coeffs();
    // |q₀| straight from the factors rather than the expansion
    let n = shifted.len() as f64;
    let ln_q0 = shifted.iter().map(|w| w.norm().ln()).sum::<f64>() - n * scale.ln();
    min_ratio_term(ln_q0, q, scale.ln())
}

/// `ρ` from the Taylor coefficients `q_k = P^(k)(ζ)/k!` of a polynomial about
/// its critical point `ζ`.
pub fn rho_from_taylor(q: &[Complex64]) -> Radius {
    if q.is_empty() || q[0].norm() == 0.0 {
        return Radius::Finite(0.0);
    }
    min_ratio_term(q[0].norm().ln(), q, 0.0)
}

fn min_ratio_term(ln_q0: f64, q: &[Complex64], ln_scale: f64) -> Radius {
    let mut best = f64::INFINITY;
    for (k, qk) in q.iter().enumerate().skip(2) {
        let m = qk.norm();
        if m == 0.0 {
            continue;
        }
        let term = ln_scale + (ln_q0 - m.ln()) / k as f64;
        best = best.min(term);
    }
    if best == f64::INFINITY {
        Radius::Infinite
    } else {
        Radius::Finite(best.exp())
    }
}

/// One DR-disk per critical point, in [`CriticalSet`] order.
pub fn dr_disks(p: &RootForm) -> Result<Vec<DrDisk>> {
    Ok(dr_disks_from(p, &critical_points(p)?))
}

pub fn dr_disks_from(p: &RootForm, critical: &CriticalSet) -> Vec<DrDisk> {
    critical
        .zetas
        .iter()
        .map(|&center| DrDisk {
            center,
            radius: rho(p, center),
        })
        .collect()
}

pub fn iota_for_root(z: Complex64, disks: &[DrDisk]) -> IotaRecord {
    iota_for_root_with(z, disks, Closeness::default())
}

/// The disk whose quotient is closest to 1; ties go to the lower index.
pub fn iota_for_root_with(z: Complex64, disks: &[DrDisk], metric: Closeness) -> IotaRecord {
    assert!(!disks.is_empty(), "iota_for_root needs at least one disk");
    let mut best = IotaRecord {
        root: z,
        circle_index: 0,
        quotient: disks[0].quotient(z),
    };
    let mut best_dist = metric.distance(best.quotient);
    for (j, d) in disks.iter().enumerate().skip(1) {
        let q = d.quotient(z);
        let dist = metric.distance(q);
        if dist < best_dist || (best_dist.is_nan() && !dist.is_nan()) {
            best = IotaRecord {
                root: z,
                circle_index: j,
                quotient: q,
            };
            best_dist = dist;
        }
    }
    best
}

/// Whether `z` lies in at least one annulus built from `disks`.
pub fn covered(z: Complex64, disks: &[DrDisk], iota1: f64, iota2: f64) -> bool {
    disks.iter().any(|d| d.annulus(iota1, iota2).contains(z))
}

/// Per-root containment in the union of annuli `ι₁ρ_j ≤ |z − ζ_j| ≤ ι₂ρ_j`.
pub fn containment_check(p: &RootForm, iota1: f64, iota2: f64) -> Result<Vec<bool>> {
    let disks = dr_disks(p)?;
    Ok(p.roots()
        .iter()
        .map(|&z| covered(z, &disks, iota1, iota2))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rho_of_z5_minus_32_is_two() {
        let roots = (0..5)
            .map(|j| Complex64::from_polar(2.0, std::f64::consts::TAU * j as f64 / 5.0))
            .collect();
        let p = RootForm::monic(roots).unwrap();
        assert!((rho(&p, c(0.0, 0.0)).value() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rho_of_degenerate_cubic() {
        let p = RootForm::monic(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let expected = (4.0f64 / 27.0).sqrt().min((4.0f64 / 27.0).cbrt());
        assert!((rho(&p, c(2.0 / 3.0, 0.0)).value() - expected).abs() < 1e-15);
        assert!((expected - 0.3849).abs() < 1e-4);
        assert_eq!(rho(&p, c(0.0, 0.0)), Radius::Finite(0.0));
    }

    #[test]
    fn quotient_conventions() {
        let zero = DrDisk {
            center: c(0.0, 0.0),
            radius: Radius::Finite(0.0),
        };
        assert_eq!(zero.quotient(c(0.0, 0.0)), 1.0);
        assert_eq!(zero.quotient(c(1.0, 0.0)), f64::INFINITY);
        let inf = DrDisk {
            center: c(0.0, 0.0),
            radius: Radius::Infinite,
        };
        assert_eq!(inf.quotient(c(1.0, 0.0)), 0.0);
    }

    #[test]
    fn closeness_metrics_differ() {
        let disks = [
            DrDisk {
                center: c(0.0, 0.0),
                radius: Radius::Finite(2.0),
            },
            DrDisk {
                center: c(0.0, 0.0),
                radius: Radius::Finite(0.5),
            },
        ];
        // quotients 0.5 and 2.0
        let z = c(1.0, 0.0);
        assert_eq!(
            iota_for_root_with(z, &disks, Closeness::Multiplicative).circle_index,
            0
        );
        assert_eq!(
            iota_for_root_with(z, &disks, Closeness::Additive).circle_index,
            0
        );
        let disks = [disks[1], disks[0]];
        assert_eq!(
            iota_for_root_with(z, &disks, Closeness::Multiplicative).circle_index,
            0
        );
        assert_eq!(
            iota_for_root_with(z, &disks, Closeness::Additive).circle_index,
            1
        );
    }

    #[test]
    fn degenerate_cubic_quotients() {
        let p = RootForm::monic(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let disks = dr_disks(&p).unwrap();
        let at_zero = iota_for_root(c(0.0, 0.0), &disks);
        assert_eq!((at_zero.circle_index, at_zero.quotient), (0, 1.0));
        let at_one = iota_for_root(c(1.0, 0.0), &disks);
        assert_eq!(at_one.circle_index, 1);
        assert!((at_one.quotient - 0.866).abs() < 1e-3);
        assert_eq!(containment_check(&p, 0.86, 1.0).unwrap(), vec![true; 3]);
        assert_eq!(
            containment_check(&p, 0.9, 1.0).unwrap(),
            vec![true, true, false]
        );
    }

    #[test]
    fn taylor_rho_matches_root_rho() {
        let p = RootForm::monic(vec![c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 2.0)]).unwrap();
        let z = c(0.0, 1.0);
        let q = p.shifted_coeffs(z);
        let a = rho_from_taylor(q.coeffs()).value();
        let b = rho(&p, z).value();
        assert!((a - b).abs() < 1e-14 * b);
    }
}
