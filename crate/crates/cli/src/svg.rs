//! Plane figure of roots, critical points and annuli.

use std::fmt::Write;

use drroots::{Annulus, Complex64};

const SIZE: f64 = 600.0;

struct Frame {
    centre: Complex64,
    side: f64,
}

impl Frame {
    /// Square window 1.2 times the bounding box of `points`.
    fn fit(points: &[Complex64]) -> Frame {
        let (mut lo, mut hi) = (
            Complex64::new(f64::INFINITY, f64::INFINITY),
            Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        );
        for p in points {
            lo = Complex64::new(lo.re.min(p.re), lo.im.min(p.im));
            hi = Complex64::new(hi.re.max(p.re), hi.im.max(p.im));
        }
        let extent = (hi.re - lo.re).max(hi.im - lo.im);
        let side = if extent > 0.0 { 1.2 * extent } else { 1.0 };
        Frame {
            centre: (lo + hi) * 0.5,
            side,
        }
    }

    fn x(&self, z: Complex64) -> f64 {
        (z.re - self.centre.re) / self.side * SIZE + SIZE / 2.0
    }

    fn y(&self, z: Complex64) -> f64 {
        SIZE / 2.0 - (z.im - self.centre.im) / self.side * SIZE
    }

    fn len(&self, r: f64) -> f64 {
        r / self.side * SIZE
    }
}

fn circle_path(out: &mut String, cx: f64, cy: f64, r: f64) {
    // two half arcs, since a single arc cannot close on itself
    let _ = write!(
        out,
        "M {:.3} {cy:.3} A {r:.3} {r:.3} 0 1 0 {:.3} {cy:.3} A {r:.3} {r:.3} 0 1 0 {:.3} {cy:.3} Z ",
        cx - r,
        cx + r,
        cx - r
    );
}

pub fn render(roots: &[Complex64], critical: &[Complex64], annuli: &[Annulus]) -> String {
    let frame = Frame::fit(roots);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">
<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#
    );
    s.push_str("<g fill=\"#4682b4\" fill-opacity=\"0.25\" fill-rule=\"evenodd\" stroke=\"#4682b4\" stroke-width=\"0.5\">\n");
    for a in annuli {
        if !(a.outer.is_finite() && a.outer > 0.0) {
            continue;
        }
        let (cx, cy) = (frame.x(a.center), frame.y(a.center));
        let mut d = String::new();
        circle_path(&mut d, cx, cy, frame.len(a.outer));
        if a.inner > 0.0 {
            circle_path(&mut d, cx, cy, frame.len(a.inner));
        }
        let _ = writeln!(s, "<path d=\"{}\"/>", d.trim_end());
    }
    s.push_str("</g>\n<g fill=\"black\">\n");
    for &z in critical {
        let _ = writeln!(
            s,
            "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"2.5\"/>",
            frame.x(z),
            frame.y(z)
        );
    }
    s.push_str("</g>\n<g stroke=\"#b22222\" stroke-width=\"1.5\">\n");
    for &z in roots {
        let (x, y) = (frame.x(z), frame.y(z));
        let _ = writeln!(
            s,
            "<line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\"/><line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\"/>",
            x - 4.0,
            y - 4.0,
            x + 4.0,
            y + 4.0,
            x - 4.0,
            y + 4.0,
            x + 4.0,
            y - 4.0
        );
    }
    s.push_str("</g>\n</svg>\n");
    s
}
