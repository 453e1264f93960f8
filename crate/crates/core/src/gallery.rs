//! Standard and randomly generated bodies for tests and demos.
//!
//! Random generators take a source of uniform samples in `[0, 1)` so the
//! caller chooses the RNG.

use alloc::vec::Vec;

use crate::body::ConvexBody;
use crate::math::{Vec2, TAU};

/// Triangle with vertices `(1, 1)`, `(−1, 0)`, `(1, −1)`.
pub fn triangle() -> ConvexBody {
    ConvexBody::polygon([(1.0, -1.0), (1.0, 1.0), (-1.0, 0.0)])
}

/// Regular `n`-gon inscribed in the unit circle, first vertex at angle `phase`.
pub fn regular(n: usize, phase: f64) -> ConvexBody {
    ConvexBody::polygon((0..n).map(|k| Vec2::from_angle(phase + TAU * k as f64 / n as f64)))
}

/// A random convex polygon with `n` vertices on a random off-centre ellipse.
pub fn random_polygon(n: usize, uniform: &mut impl FnMut() -> f64) -> ConvexBody {
    loop {
        let a = 0.5 + 1.5 * uniform();
        let b = 0.5 + 1.5 * uniform();
        let psi = TAU * uniform();
        let c = Vec2::from_angle(TAU * uniform()) * (0.3 * a.min(b) * uniform());
        let phase = TAU * uniform();
        let vertices: Vec<Vec2> = (0..n)
            .map(|i| {
                let t = phase + TAU * (i as f64 + 0.6 * uniform()) / n as f64;
                c + Vec2::new(a * libm::cos(t), b * libm::sin(t)).rotate(psi)
            })
            .collect();
        let body = ConvexBody::Polygon { vertices };
        if body.validate().is_empty() {
            return body;
        }
    }
}

/// A random axis-aligned ellipse with semi-axes in `[0.5, 2]`.
pub fn random_ellipse(uniform: &mut impl FnMut() -> f64) -> ConvexBody {
    ConvexBody::ellipse(0.5 + 1.5 * uniform(), 0.5 + 1.5 * uniform())
}

/// A random smooth body in radial form: a sampled, rotated, off-centre ellipse.
pub fn random_radial(samples: usize, uniform: &mut impl FnMut() -> f64) -> ConvexBody {
    let a = 0.5 + 1.5 * uniform();
    let b = 0.5 + 1.5 * uniform();
    let psi = TAU * uniform();
    let c = Vec2::from_angle(TAU * uniform()) * (0.3 * a.min(b) * uniform());
    ConvexBody::radial_from_fn(samples, |phi| {
        // the ray t·e meets the shifted ellipse where |R⁻¹(t e − c)|_{a,b} = 1
        let e = Vec2::from_angle(phi).rotate(-psi);
        let c = c.rotate(-psi);
        let (ex, ey, cx, cy) = (e.x / a, e.y / b, c.x / a, c.y / b);
        let qa = ex * ex + ey * ey;
        let qb = -2.0 * (ex * cx + ey * cy);
        let qc = cx * cx + cy * cy - 1.0;
        (-qb + libm::sqrt(qb * qb - 4.0 * qa * qc)) / (2.0 * qa)
    })
}
