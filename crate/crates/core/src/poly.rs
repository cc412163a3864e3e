//! Polynomial representations and evaluation.
//!
//! [`RootForm`] keeps a polynomial factored as `leading · Π (z − z_i)`;
//! [`CoeffForm`] keeps the monomial coefficients in ascending degree. Root-form
//! evaluation is carried out in log-magnitude space so that high-degree products
//! neither overflow nor underflow.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Common evaluation interface for both representations.
pub trait Evaluate {
    fn degree(&self) -> usize;
    fn eval(&self, z: Complex64) -> Complex64;
}

/// A complex value stored as `exp(ln_abs) · phase` with `|phase| = 1`.
///
/// Zero is represented by `ln_abs = -∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue {
    pub ln_abs: f64,
    pub phase: Complex64,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue {
        ln_abs: f64::NEG_INFINITY,
        phase: Complex64::new(1.0, 0.0),
    };

    pub const ONE: LogValue = LogValue {
        ln_abs: 0.0,
        phase: Complex64::new(1.0, 0.0),
    };

    pub fn from_complex(z: Complex64) -> Self {
        let r = z.norm();
        if r == 0.0 {
            return Self::ZERO;
        }
        LogValue {
            ln_abs: r.ln(),
            phase: z / r,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.ln_abs == f64::NEG_INFINITY
    }

    pub fn abs(&self) -> f64 {
        self.ln_abs.exp()
    }

    pub fn to_complex(self) -> Complex64 {
        if self.is_zero() {
            Complex64::new(0.0, 0.0)
        } else {
            self.phase * self.ln_abs.exp()
        }
    }
}

impl std::ops::Mul for LogValue {
    type Output = LogValue;

    fn mul(self, other: LogValue) -> LogValue {
        if self.is_zero() || other.is_zero() {
            return Self::ZERO;
        }
        let phase = self.phase * other.phase;
        // renormalise so rounding in the phase does not drift over long products
        let r = phase.norm();
        LogValue {
            ln_abs: self.ln_abs + other.ln_abs,
            phase: phase / r,
        }
    }
}

/// A polynomial `leading · Π (z − z_i)` given by its roots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootForm {
    roots: Vec<Complex64>,
    leading: Complex64,
}

impl RootForm {
    pub fn new(roots: Vec<Complex64>, leading: Complex64) -> Result<Self> {
        if roots.is_empty() {
            return Err(Error::InvalidPolynomial(
                "root form needs at least one root",
            ));
        }
        if leading == Complex64::new(0.0, 0.0) {
            return Err(Error::InvalidPolynomial("leading coefficient is zero"));
        }
        if !leading.is_finite() || roots.iter().any(|z| !z.is_finite()) {
            return Err(Error::InvalidPolynomial(
                "non-finite root or leading coefficient",
            ));
        }
        Ok(RootForm { roots, leading })
    }

    pub fn monic(roots: Vec<Complex64>) -> Result<Self> {
        Self::new(roots, Complex64::new(1.0, 0.0))
    }

    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    pub fn leading(&self) -> Complex64 {
        self.leading
    }

    /// Distinct roots with their multiplicities, in order of first appearance.
    /// Only exact duplicates are merged.
    pub fn distinct_roots(&self) -> Vec<(Complex64, usize)> {
        let mut out: Vec<(Complex64, usize)> = Vec::new();
        for &z in &self.roots {
            match out.iter_mut().find(|(y, _)| *y == z) {
                Some((_, m)) => *m += 1,
                None => out.push((z, 1)),
            }
        }
        out
    }

    /// Largest pairwise distance between roots.
    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.roots.iter().enumerate() {
            for b in &self.roots[i + 1..] {
                d = d.max((a - b).norm());
            }
        }
        d
    }

    /// `p(z)` in log-magnitude form.
    pub fn eval_log(&self, z: Complex64) -> LogValue {
        let mut ln_abs = self.leading.norm().ln();
        let mut phase = self.leading / self.leading.norm();
        for &r in &self.roots {
            let f = z - r;
            let m = f.norm();
            if m == 0.0 {
                return LogValue::ZERO;
            }
            ln_abs += m.ln();
            phase *= f / m;
            phase /= phase.norm();
        }
        LogValue { ln_abs, phase }
    }

    /// `p′(z)` in log-magnitude form, evaluated from the product structure.
    pub fn derivative_log(&self, z: Complex64) -> LogValue {
        // p'(z) = Σ_i leading Π_{k≠i} (z − z_k)
        if let Some(hit) = self.roots.iter().position(|&r| r == z) {
            let repeated = self.roots.iter().filter(|&&r| r == z).count();
            if repeated > 1 {
                return LogValue::ZERO;
            }
            let mut acc = LogValue::from_complex(self.leading);
            for (k, &r) in self.roots.iter().enumerate() {
                if k != hit {
                    acc = acc * LogValue::from_complex(z - r);
                }
            }
            return acc;
        }
        let s1: Complex64 = self.roots.iter().map(|&r| (z - r).inv()).sum();
        self.eval_log(z) * LogValue::from_complex(s1)
    }

    /// Monomial coefficients of `leading · Π (z − z_i)`.
    pub fn to_coeffs(&self) -> CoeffForm {
        CoeffForm {
            coeffs: expand_linear_factors(self.leading, self.roots.iter().copied()),
        }
    }

    /// Coefficients of `q(z) = p(z + shift)`, expanded from the shifted
    /// factors `(z − (z_i − shift))`.
    pub fn shifted_coeffs(&self, shift: Complex64) -> CoeffForm {
        CoeffForm {
            coeffs: expand_linear_factors(self.leading, self.roots.iter().map(|&r| r - shift)),
        }
    }

    /// Shifted coefficients together with the coefficients of
    /// `|leading| · Π (z + |z_i − shift|)`, which bound the magnitude of every
    /// term contributing to the corresponding shifted coefficient.
    pub fn shifted_coeffs_with_bound(&self, shift: Complex64) -> (CoeffForm, Vec<f64>) {
        let q = self.shifted_coeffs(shift);
        let mut bound = vec![self.leading.norm()];
        for &r in &self.roots {
            let w = (r - shift).norm();
            bound.push(0.0);
            for k in (1..bound.len()).rev() {
                let prev = bound[k - 1];
                bound[k] += w * prev;
            }
        }
        bound.reverse();
        (q, bound)
    }

    /// `p^(k)(shift)`, read off as `k!` times the `z^k` coefficient of
    /// [`RootForm::shifted_coeffs`].
    pub fn derivative_at(&self, shift: Complex64, k: usize) -> Complex64 {
        if k > self.degree() {
            return Complex64::new(0.0, 0.0);
        }
        let q = self.shifted_coeffs(shift);
        q.coeffs[k] * factorial(k)
    }

    /// Root form of `p(a z + b)`.
    pub fn pullback(&self, a: Complex64, b: Complex64) -> Result<RootForm> {
        let roots = self.roots.iter().map(|&r| (r - b) / a).collect();
        RootForm::new(roots, self.leading * a.powu(self.roots.len() as u32))
    }

    /// Root form of `c · p(z)`.
    pub fn scaled(&self, c: Complex64) -> Result<RootForm> {
        RootForm::new(self.roots.clone(), self.leading * c)
    }
}

impl Evaluate for RootForm {
    fn degree(&self) -> usize {
        self.roots.len()
    }

    fn eval(&self, z: Complex64) -> Complex64 {
        self.eval_log(z).to_complex()
    }
}

/// Ascending coefficients of `leading · Π (z − r)`, multiplying one factor at a time.
fn expand_linear_factors<I>(leading: Complex64, roots: I) -> Vec<Complex64>
where
    I: IntoIterator<Item = Complex64>,
{
    // built in descending order then reversed: c_new[k] = c[k] − r · c[k−1]
    let mut c = vec![leading];
    for r in roots {
        c.push(Complex64::new(0.0, 0.0));
        for k in (1..c.len()).rev() {
            let prev = c[k - 1];
            c[k] -= r * prev;
        }
    }
    c.reverse();
    c
}

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

/// A polynomial in the monomial basis, `coeffs[k]` multiplying `z^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffForm {
    coeffs: Vec<Complex64>,
}

impl CoeffForm {
    /// Trailing exact zeros are trimmed; the zero polynomial is rejected.
    pub fn new(mut coeffs: Vec<Complex64>) -> Result<Self> {
        while coeffs
            .last()
            .is_some_and(|c| *c == Complex64::new(0.0, 0.0))
        {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidPolynomial("zero polynomial"));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidPolynomial("non-finite coefficient"));
        }
        Ok(CoeffForm { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().expect("non-empty by construction")
    }

    /// False when expansion overflowed somewhere.
    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// Horner evaluation together with the running bound `Σ |a_k| |z|^k`.
    pub fn eval_with_bound(&self, z: Complex64) -> (Complex64, f64) {
        let r = z.norm();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut bound = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
            bound = bound * r + c.norm();
        }
        (acc, bound)
    }

    /// Term-by-term derivative; `None` for constants.
    pub fn derivative(&self) -> Option<CoeffForm> {
        if self.coeffs.len() < 2 {
            return None;
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(k, c)| c * (k + 1) as f64)
            .collect();
        Some(CoeffForm { coeffs })
    }

    /// `[p, p′, …, p^(n)]`, each formed by exact differentiation of the previous.
    pub fn derivative_chain(&self) -> Vec<CoeffForm> {
        let mut chain = vec![self.clone()];
        while let Some(d) = chain.last().and_then(|p| p.derivative()) {
            chain.push(d);
        }
        chain
    }

    /// Coefficients of `p(w + center)` by repeated synthetic division.
    pub fn taylor_shift(&self, center: Complex64) -> CoeffForm {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for k in (i..n - 1).rev() {
                let hi = c[k + 1];
                c[k] += center * hi;
            }
        }
        CoeffForm { coeffs: c }
    }

    /// Multiply every coefficient by `s`.
    pub fn scale(&self, s: Complex64) -> CoeffForm {
        CoeffForm {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }
}

impl Evaluate for CoeffForm {
    fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn eval(&self, z: Complex64) -> Complex64 {
        self.eval_with_bound(z).0
    }
}
