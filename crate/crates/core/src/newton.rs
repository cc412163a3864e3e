//! Newton iteration and the basin-of-fast-convergence test.
//!
//! A start point `x⁰` lies in the fast basin of a root `x*` when every iterate
//! satisfies `|x^k − x*| ≤ (√½)^(2^k − 1) · |x⁰ − x*|`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::{CoeffForm, RootForm};

/// Relative size below which a derivative is treated as zero.
pub const DERIVATIVE_TOL: f64 = 1e-14;
/// Default number of inequality checks in [`in_fast_basin`].
pub const DEFAULT_K_MAX: usize = 64;
/// Distance to the target, relative to `max(1, |x*|)`, at which the basin
/// test stops as converged.
pub const BASIN_FLOOR: f64 = 1e-13;
/// Plain Newton steps allowed after the inequality checks to confirm the
/// iterates actually reach the target.
const CONFIRM_STEPS: usize = 64;

/// One Newton update `z ↦ z − φ(z)/φ′(z)`.
pub trait NewtonStep {
    fn step(&self, z: Complex64) -> Result<Complex64>;
}

impl<F> NewtonStep for F
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    fn step(&self, z: Complex64) -> Result<Complex64> {
        self(z)
    }
}

/// Newton on a root-form polynomial with `p/p′ = 1 / Σ (z − z_i)^(−1)`.
pub fn newton_step_rootform(p: &RootForm, z: Complex64) -> Result<Complex64> {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut mag = 0.0;
    for &r in p.roots() {
        let d = z - r;
        if d == Complex64::new(0.0, 0.0) {
            return Ok(z);
        }
        let inv = d.inv();
        sum += inv;
        mag += inv.norm();
    }
    if sum.norm() <= DERIVATIVE_TOL * mag {
        return Err(Error::DerivativeZero { at: z });
    }
    Ok(z - sum.inv())
}

/// Newton on a coefficient pair `(p, p′)` with both evaluated by Horner.
pub fn newton_step_coeffform(p: &CoeffForm, pprime: &CoeffForm, z: Complex64) -> Result<Complex64> {
    let (d, bound) = pprime.eval_with_bound(z);
    if d.norm() <= DERIVATIVE_TOL * bound {
        return Err(Error::DerivativeZero { at: z });
    }
    let (v, _) = p.eval_with_bound(z);
    Ok(z - v / d)
}

pub struct RootFormStep<'a>(pub &'a RootForm);

impl NewtonStep for RootFormStep<'_> {
    fn step(&self, z: Complex64) -> Result<Complex64> {
        newton_step_rootform(self.0, z)
    }
}

pub struct CoeffFormStep<'a> {
    pub p: &'a CoeffForm,
    pub pprime: &'a CoeffForm,
}

impl NewtonStep for CoeffFormStep<'_> {
    fn step(&self, z: Complex64) -> Result<Complex64> {
        newton_step_coeffform(self.p, self.pprime, z)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonTrace {
    /// `x⁰` followed by every committed iterate.
    pub iterates: Vec<Complex64>,
    /// Set when the last update was below tolerance; holds `x + update`.
    pub converged_to: Option<Complex64>,
    pub steps: usize,
    /// Point at which the derivative vanished, if that ended the run.
    pub derivative_zero_at: Option<Complex64>,
}

/// Iterate until `|update| ≤ tol · max(1, |x|)` or `max_steps` updates have
/// been committed.
pub fn run_newton<S: NewtonStep + ?Sized>(
    stepper: &S,
    x0: Complex64,
    max_steps: usize,
    tol: f64,
) -> NewtonTrace {
    let mut iterates = vec![x0];
    let mut x = x0;
    let mut converged_to = None;
    let mut derivative_zero_at = None;
    // one extra evaluation so a run of max_steps updates can still be confirmed
    for _ in 0..=max_steps {
        let next = match stepper.step(x) {
            Ok(v) if v.is_finite() => v,
            Ok(_) => break,
            Err(Error::DerivativeZero { at }) => {
                derivative_zero_at = Some(at);
                break;
            }
            Err(_) => break,
        };
        if (next - x).norm() <= tol * x.norm().max(1.0) {
            converged_to = Some(next);
            break;
        }
        if iterates.len() > max_steps {
            break;
        }
        iterates.push(next);
        x = next;
    }
    NewtonTrace {
        steps: iterates.len() - 1,
        iterates,
        converged_to,
        derivative_zero_at,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasinVerdict {
    pub in_basin: bool,
    pub failing_step: Option<usize>,
    /// Iterates `x⁰, x¹, …` checked against the inequality.
    pub iterates: Vec<Complex64>,
}

/// `(√½)^(2^k − 1) · d0`, flushed to zero once it drops below `1e-300`.
pub fn basin_bound(k: usize, d0: f64) -> f64 {
    let exponent = 2f64.powi(k.min(1023) as i32) - 1.0;
    let b = (exponent * std::f64::consts::FRAC_1_SQRT_2.ln()).exp() * d0;
    if b < 1e-300 {
        0.0
    } else {
        b
    }
}

/// Fast-basin membership of `x0` for `target_root`, using the root-form
/// stepper. Besides the inequality for `k = 0..=k_max`, the iterates must
/// reach `BASIN_FLOOR` distance of the target.
pub fn in_fast_basin(
    p: &RootForm,
    target_root: Complex64,
    x0: Complex64,
    k_max: usize,
) -> BasinVerdict {
    let floor = BASIN_FLOOR * target_root.norm().max(1.0);
    let d0 = (x0 - target_root).norm();
    let mut iterates = vec![x0];
    let mut x = x0;
    let fail = |k: usize, iterates: Vec<Complex64>| BasinVerdict {
        in_basin: false,
        failing_step: Some(k),
        iterates,
    };
    let pass = |iterates: Vec<Complex64>| BasinVerdict {
        in_basin: true,
        failing_step: None,
        iterates,
    };

    for k in 0..=k_max {
        let dk = (x - target_root).norm();
        if dk <= floor {
            return pass(iterates);
        }
        if dk > basin_bound(k, d0) {
            return fail(k, iterates);
        }
        if k == k_max {
            break;
        }
        match newton_step_rootform(p, x) {
            Ok(next) => {
                x = next;
                iterates.push(x);
            }
            Err(_) => return fail(k + 1, iterates),
        }
    }

    // inequality held throughout; confirm the iterates settle on the target
    let mut probe = x;
    for _ in 0..CONFIRM_STEPS {
        match newton_step_rootform(p, probe) {
            Ok(next) => probe = next,
            Err(_) => break,
        }
        if (probe - target_root).norm() <= floor {
            return pass(iterates);
        }
    }
    fail(k_max, iterates)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn quad() -> RootForm {
        RootForm::monic(vec![c(1.0, 0.0), c(-1.0, 0.0)]).unwrap()
    }

    #[test]
    fn root_form_steps() {
        let p = quad();
        assert!((newton_step_rootform(&p, c(2.0, 0.0)).unwrap() - c(1.25, 0.0)).norm() < 1e-15);
        assert_eq!(newton_step_rootform(&p, c(1.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert!(matches!(
            newton_step_rootform(&p, c(0.0, 0.0)),
            Err(Error::DerivativeZero { .. })
        ));
    }

    #[test]
    fn coeff_form_steps() {
        let p = CoeffForm::from_real(&[-1.0, 0.0, 1.0]).unwrap();
        let dp = p.derivative().unwrap();
        assert_eq!(
            newton_step_coeffform(&p, &dp, c(2.0, 0.0)).unwrap(),
            c(1.25, 0.0)
        );
        let p3 = CoeffForm::from_real(&[-1.0, 0.0, 0.0, 1.0]).unwrap();
        let dp3 = p3.derivative().unwrap();
        assert_eq!(
            newton_step_coeffform(&p3, &dp3, c(1.0, 0.0)).unwrap(),
            c(1.0, 0.0)
        );
        assert!(newton_step_coeffform(&p3, &dp3, c(0.0, 0.0)).is_err());
    }

    #[test]
    fn runs_to_convergence() {
        let p = quad();
        let t = run_newton(&RootFormStep(&p), c(1.5, 0.0), 50, 1e-12);
        assert!(t.steps <= 6);
        assert!((t.converged_to.unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(t.steps, t.iterates.len() - 1);

        let t = run_newton(&RootFormStep(&p), c(1.0, 0.0), 50, 1e-12);
        assert_eq!(t.steps, 0);
        assert_eq!(t.converged_to, Some(c(1.0, 0.0)));
    }

    #[test]
    fn imaginary_axis_never_converges() {
        let p = quad();
        for t0 in [0.3, 0.5, 2.0, 7.0] {
            let t = run_newton(&RootFormStep(&p), c(0.0, t0), 200, 1e-12);
            assert!(t.converged_to.is_none());
            assert!(t.iterates.iter().all(|z| z.re == 0.0));
        }
    }

    #[test]
    fn closure_stepper() {
        let p = quad();
        let step = |z: Complex64| newton_step_rootform(&p, z);
        let t = run_newton(&step, c(-3.0, 0.1), 100, 1e-12);
        assert!((t.converged_to.unwrap() - c(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn basin_examples() {
        let p = quad();
        let one = c(1.0, 0.0);
        assert!(in_fast_basin(&p, one, one, DEFAULT_K_MAX).in_basin);
        assert!(in_fast_basin(&p, one, c(1.3, 0.0), DEFAULT_K_MAX).in_basin);
        let v = in_fast_basin(&p, one, c(0.05, 0.0), DEFAULT_K_MAX);
        assert!(!v.in_basin);
        assert_eq!(v.failing_step, Some(1));
        assert!((v.iterates[1].re - 10.025).abs() < 1e-12);
    }

    #[test]
    fn other_root_is_not_the_target() {
        let p = quad();
        let v = in_fast_basin(&p, c(-1.0, 0.0), c(1.3, 0.0), DEFAULT_K_MAX);
        assert!(!v.in_basin);
    }

    #[test]
    fn bound_flushes() {
        assert_eq!(basin_bound(0, 3.0), 3.0);
        assert!((basin_bound(1, 1.0) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(basin_bound(12, 1.0), 0.0);
    }
}
