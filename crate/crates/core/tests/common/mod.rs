//! Independent reference computations for the integration tests.
#![allow(dead_code)]

use drroots::Complex64;
use nalgebra::DMatrix;

/// Unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    pub fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let e = e + self.lo + o.lo;
        let (hi, lo) = two_sum(s, e);
        Dd { hi, lo }
    }

    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DdC {
    pub re: Dd,
    pub im: Dd,
}

impl DdC {
    pub const ZERO: DdC = DdC {
        re: Dd::ZERO,
        im: Dd::ZERO,
    };

    pub fn from(z: Complex64) -> DdC {
        DdC {
            re: Dd::from(z.re),
            im: Dd::from(z.im),
        }
    }

    pub fn add(self, o: DdC) -> DdC {
        DdC {
            re: self.re.add(o.re),
            im: self.im.add(o.im),
        }
    }

    pub fn mul(self, o: DdC) -> DdC {
        DdC {
            re: self.re.mul(o.re).sub(self.im.mul(o.im)),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

/// Ascending coefficients of `Π (z − r_i)` (times `leading`) in double-double,
/// one factor at a time.
pub fn dd_expand(roots: &[Complex64], leading: Complex64) -> Vec<Complex64> {
    let mut c = vec![DdC::from(leading)];
    for &r in roots {
        let minus_r = DdC::from(-r);
        let mut next = vec![DdC::ZERO; c.len() + 1];
        for (k, &ck) in c.iter().enumerate() {
            next[k + 1] = next[k + 1].add(ck);
            next[k] = next[k].add(ck.mul(minus_r));
        }
        c = next;
    }
    c.into_iter().map(DdC::to_c64).collect()
}

/// `Π (z − r_i)` in double-double.
pub fn dd_eval_roots(roots: &[Complex64], leading: Complex64, z: Complex64) -> Complex64 {
    let z = DdC::from(z);
    let mut acc = DdC::from(leading);
    for &r in roots {
        let d = z.add(DdC::from(-r));
        acc = acc.mul(d);
    }
    acc.to_c64()
}

/// Horner over `coeffs` in double-double.
pub fn dd_horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let z = DdC::from(z);
    let mut acc = DdC::ZERO;
    for &c in coeffs.iter().rev() {
        acc = acc.mul(z).add(DdC::from(c));
    }
    acc.to_c64()
}

/// Critical points as eigenvalues of `diag(z₂..z_n) − e vᵀ/n`,
/// `v_i = z_{i+1} − z₁`, whose characteristic polynomial is `p′/n`.
pub fn eigen_critical_points(roots: &[Complex64]) -> Vec<Complex64> {
    let n = roots.len();
    let m = n - 1;
    let mut a = DMatrix::<Complex64>::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            let v = roots[j + 1] - roots[0];
            a[(i, j)] = -v / n as f64;
        }
        a[(i, i)] += roots[i + 1];
    }
    a.eigenvalues()
        .expect("Schur decomposition converges")
        .iter()
        .copied()
        .collect()
}

/// Largest matched distance under a greedy nearest-pair bijection, or `∞`
/// when the lengths differ.
pub fn bijection_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            pairs.push(((x - y).norm(), i, j));
        }
    }
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut used_a = vec![false; a.len()];
    let mut used_b = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for (d, i, j) in pairs {
        if used_a[i] || used_b[j] {
            continue;
        }
        used_a[i] = true;
        used_b[j] = true;
        worst = worst.max(d);
    }
    worst
}

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Convex hull, counter-clockwise, by Andrew's monotone chain.
pub fn convex_hull(points: &[Complex64]) -> Vec<Complex64> {
    let mut p = points.to_vec();
    p.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let mut hull: Vec<Complex64> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Complex64>> = if pass == 0 {
            Box::new(p.iter())
        } else {
            Box::new(p.iter().rev())
        };
        for &q in iter {
            while hull.len() >= start + 2
                && cross(hull[hull.len() - 2], hull[hull.len() - 1], q) <= 0.0
            {
                hull.pop();
            }
            hull.push(q);
        }
        hull.pop();
    }
    hull
}

/// Distance from `z` to the convex hull of `points` (0 inside).
pub fn hull_distance(points: &[Complex64], z: Complex64) -> f64 {
    let hull = convex_hull(points);
    let seg = |a: Complex64, b: Complex64| {
        let ab = b - a;
        let len2 = ab.norm_sqr();
        if len2 == 0.0 {
            return (z - a).norm();
        }
        let t = (((z - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
        (z - (a + ab * t)).norm()
    };
    match hull.len() {
        0 => f64::INFINITY,
        1 => (z - hull[0]).norm(),
        2 => seg(hull[0], hull[1]),
        h => {
            let inside = (0..h).all(|i| cross(hull[i], hull[(i + 1) % h], z) >= 0.0);
            if inside {
                0.0
            } else {
                (0..h)
                    .map(|i| seg(hull[i], hull[(i + 1) % h]))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Roots of `z^n − c`.
pub fn nth_roots(n: usize, c0: Complex64) -> Vec<Complex64> {
    let r = c0.norm().powf(1.0 / n as f64);
    let t0 = c0.arg() / n as f64;
    (0..n)
        .map(|j| Complex64::from_polar(r, t0 + std::f64::consts::TAU * j as f64 / n as f64))
        .collect()
}
