//! Generalized trigonometric functions `cos_Ω`, `sin_Ω` and the angle
//! correspondence between Ω and its polar Ω°.
//!
//! The angle θ of a boundary point `P_θ` is twice the area of the sector of Ω
//! swept counter-clockwise from the positive x-ray, so the functions have
//! period `2𝕊(Ω)`. The polar angle θ° is defined the same way on Ω°, and θ
//! corresponds to θ° when `cos_Ω θ cos_{Ω°} θ° + sin_Ω θ sin_{Ω°} θ° = 1`.
//!
//! Polygons and radial bodies are evaluated through [`PolygonTables`];
//! ellipses use closed forms.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::body::{radial_points, ConvexBody};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::math::{self, Vec2, TAU};
use crate::polygon::{build_tables_with, first_vertex, vertex_snap, AngleChain, PolygonTables};

/// Closed interval `[lo, hi]` of angles corresponding to a given angle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleCorrespondence {
    pub lo: f64,
    pub hi: f64,
}

impl AngleCorrespondence {
    pub fn single(v: f64) -> Self {
        Self { lo: v, hi: v }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_single(&self) -> bool {
        self.lo == self.hi
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, v: f64, tol: f64) -> bool {
        v >= self.lo - tol && v <= self.hi + tol
    }
}

/// One-sided derivatives of `(cos_Ω, sin_Ω)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DerivativePair {
    pub left: Vec2,
    pub right: Vec2,
}

#[derive(Clone, Debug)]
enum Kernel {
    /// `swapped` evaluates the polar side of the tables.
    Chains { tables: Arc<PolygonTables>, swapped: bool },
    Ellipse { a: f64, b: f64 },
}

/// Precomputed trigonometry of a body and its polar.
#[derive(Clone, Debug)]
pub struct Trig {
    body: ConvexBody,
    kernel: Kernel,
    tol: Tolerances,
}

impl Trig {
    pub fn new(body: &ConvexBody) -> Result<Self> {
        Self::with_tolerances(body, Tolerances::default())
    }

    pub fn with_tolerances(body: &ConvexBody, tol: Tolerances) -> Result<Self> {
        let kernel = match body {
            ConvexBody::Ellipse { a, b } => {
                body.check()?;
                Kernel::Ellipse { a: *a, b: *b }
            }
            _ => Kernel::Chains {
                tables: Arc::new(build_tables_with(body, &tol)?),
                swapped: false,
            },
        };
        Ok(Self {
            body: body.clone(),
            kernel,
            tol,
        })
    }

    /// The same data viewed from Ω°: angles and polar angles trade places.
    pub fn dual(&self) -> Trig {
        let kernel = match &self.kernel {
            Kernel::Chains { tables, swapped } => Kernel::Chains {
                tables: tables.clone(),
                swapped: !swapped,
            },
            Kernel::Ellipse { a, b } => Kernel::Ellipse { a: 1.0 / a, b: 1.0 / b },
        };
        let body = match &self.kernel {
            Kernel::Chains { tables, swapped: false } => ConvexBody::Polygon {
                vertices: tables.polar_vertices.clone(),
            },
            Kernel::Chains { tables, swapped: true } => ConvexBody::Polygon {
                vertices: tables.vertices.clone(),
            },
            Kernel::Ellipse { a, b } => ConvexBody::Ellipse { a: 1.0 / a, b: 1.0 / b },
        };
        Trig {
            body,
            kernel,
            tol: self.tol,
        }
    }

    /// The body this was built from (for a [`Trig::dual`], the polar polygon).
    pub fn body(&self) -> &ConvexBody {
        &self.body
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// Polygon tables when the body is polygonal (including radial bodies).
    pub fn tables(&self) -> Option<&PolygonTables> {
        match &self.kernel {
            Kernel::Chains { tables, .. } => Some(tables),
            Kernel::Ellipse { .. } => None,
        }
    }

    /// Boundary of Ω as a chain, when polygonal.
    pub fn chain(&self) -> Option<&AngleChain> {
        match &self.kernel {
            Kernel::Chains { tables, swapped: false } => Some(tables.chain()),
            Kernel::Chains { tables, swapped: true } => Some(tables.polar_chain()),
            Kernel::Ellipse { .. } => None,
        }
    }

    /// Boundary of Ω° as a chain, when polygonal.
    pub fn polar_chain(&self) -> Option<&AngleChain> {
        match &self.kernel {
            Kernel::Chains { tables, swapped: false } => Some(tables.polar_chain()),
            Kernel::Chains { tables, swapped: true } => Some(tables.chain()),
            Kernel::Ellipse { .. } => None,
        }
    }

    pub fn is_polygonal(&self) -> bool {
        matches!(self.kernel, Kernel::Chains { .. })
    }

    /// `2𝕊(Ω)`.
    pub fn period(&self) -> f64 {
        match &self.kernel {
            Kernel::Chains { .. } => self.chain().map(|c| c.period).unwrap_or(0.0),
            Kernel::Ellipse { a, b } => TAU * a * b,
        }
    }

    /// `2𝕊(Ω°)`.
    pub fn polar_period(&self) -> f64 {
        match &self.kernel {
            Kernel::Chains { .. } => self.chain().map(|c| c.dual_period).unwrap_or(0.0),
            Kernel::Ellipse { a, b } => TAU / (a * b),
        }
    }

    /// `(cos_Ω θ, sin_Ω θ)`.
    pub fn cos_sin(&self, theta: f64) -> Vec2 {
        match (&self.kernel, self.chain()) {
            (_, Some(c)) => c.eval(theta),
            (Kernel::Ellipse { a, b }, None) => {
                let t = theta / (a * b);
                Vec2::new(a * math::cos(t), b * math::sin(t))
            }
            _ => unreachable!(),
        }
    }

    /// `(cos_{Ω°} θ°, sin_{Ω°} θ°)`.
    pub fn polar_cos_sin(&self, theta_polar: f64) -> Vec2 {
        match (&self.kernel, self.polar_chain()) {
            (_, Some(c)) => c.eval(theta_polar),
            (Kernel::Ellipse { a, b }, None) => {
                let t = theta_polar * a * b;
                Vec2::new(math::cos(t) / a, math::sin(t) / b)
            }
            _ => unreachable!(),
        }
    }

    fn normalize(&self, lo: f64, hi: f64) -> AngleCorrespondence {
        if hi - lo < self.tol.corner {
            AngleCorrespondence::single(0.5 * (lo + hi))
        } else {
            AngleCorrespondence { lo, hi }
        }
    }

    /// Polar angles θ° corresponding to θ.
    pub fn correspondence(&self, theta: f64) -> AngleCorrespondence {
        match (&self.kernel, self.chain()) {
            (_, Some(c)) => {
                let (lo, hi) = c.stair(theta, vertex_snap(theta));
                self.normalize(lo, hi)
            }
            (Kernel::Ellipse { a, b }, None) => {
                AngleCorrespondence::single(theta / ((a * b) * (a * b)))
            }
            _ => unreachable!(),
        }
    }

    /// Angles θ corresponding to the polar angle θ°.
    pub fn polar_correspondence(&self, theta_polar: f64) -> AngleCorrespondence {
        match (&self.kernel, self.polar_chain()) {
            (_, Some(c)) => {
                let (lo, hi) = c.stair(theta_polar, vertex_snap(theta_polar));
                self.normalize(lo, hi)
            }
            (Kernel::Ellipse { a, b }, None) => {
                AngleCorrespondence::single(theta_polar * (a * b) * (a * b))
            }
            _ => unreachable!(),
        }
    }

    /// One-sided derivatives of `(cos_Ω, sin_Ω)` at θ:
    /// `(−sin_{Ω°} θ°_±, cos_{Ω°} θ°_±)`.
    pub fn derivative(&self, theta: f64) -> DerivativePair {
        match (&self.kernel, self.chain()) {
            (_, Some(c)) => {
                let (left, right) = c.one_sided(theta, vertex_snap(theta));
                DerivativePair { left, right }
            }
            (Kernel::Ellipse { a, b }, None) => {
                let t = theta / (a * b);
                let d = Vec2::new(-math::sin(t) / b, math::cos(t) / a);
                DerivativePair { left: d, right: d }
            }
            _ => unreachable!(),
        }
    }

    /// One-sided derivatives of `(cos_{Ω°}, sin_{Ω°})` at θ°.
    pub fn polar_derivative(&self, theta_polar: f64) -> DerivativePair {
        self.dual().derivative(theta_polar)
    }

    /// Generalized polar coordinates `(r, θ)` of a nonzero point, `r = s_{Ω°}(x, y)`
    /// and θ in `[0, 2𝕊(Ω))`.
    pub fn theta_of_point(&self, v: Vec2) -> Result<(f64, f64)> {
        if v == Vec2::ZERO || !v.x.is_finite() || !v.y.is_finite() {
            return Err(Error::Domain("point must be finite and nonzero"));
        }
        Ok(match (&self.kernel, self.chain()) {
            (_, Some(c)) => c.locate(v),
            (Kernel::Ellipse { a, b }, None) => {
                let (u, w) = (v.x / a, v.y / b);
                let r = math::hypot(u, w);
                let t = math::angle_of(Vec2::new(u, w));
                (r, math::wrap(a * b * t, self.period()))
            }
            _ => unreachable!(),
        })
    }

    /// Polar coordinates with respect to Ω°.
    pub fn polar_theta_of_point(&self, v: Vec2) -> Result<(f64, f64)> {
        self.dual().theta_of_point(v)
    }

    /// `s_{Ω°}(v)`: the gauge of Ω, equal to the support function of Ω°.
    pub fn gauge(&self, v: Vec2) -> f64 {
        match (&self.kernel, self.chain()) {
            (_, Some(c)) => c.normals.iter().map(|q| q.dot(v)).fold(0.0, f64::max),
            (Kernel::Ellipse { a, b }, None) => math::hypot(v.x / a, v.y / b),
            _ => unreachable!(),
        }
    }

    /// `π_Ω(θ)`: classical angle of `P_θ`, continuous with `π_Ω(0) = 0`.
    pub fn pi_omega(&self, theta: f64) -> f64 {
        match (&self.kernel, self.chain()) {
            (_, Some(c)) => c.direction_of_angle(theta),
            (Kernel::Ellipse { a, b }, None) => {
                let t = theta / (a * b);
                let (s, co) = (math::sin(t), math::cos(t));
                t + math::atan2((b - a) * s * co, a * co * co + b * s * s)
            }
            _ => unreachable!(),
        }
    }

    /// `π_Ω⁻¹(φ) = ∫₀^φ dψ / s²_{Ω°}(cos ψ, sin ψ)`.
    pub fn pi_omega_inv(&self, phi: f64) -> f64 {
        match (&self.kernel, self.chain()) {
            (_, Some(c)) => c.angle_of_direction(phi).1,
            (Kernel::Ellipse { a, b }, None) => {
                let (s, co) = (math::sin(phi), math::cos(phi));
                a * b * (phi + math::atan2((a - b) * s * co, b * co * co + a * s * s))
            }
            _ => unreachable!(),
        }
    }

    /// Shift σ with `e^{iφ} P_θ(Ω) = P_{θ+σ}(e^{iφ}Ω)`.
    pub fn rotation_shift(&self, phi: f64) -> f64 {
        -self.pi_omega_inv(-phi)
    }
}

/// `(cos_Ω θ, sin_Ω θ)`.
pub fn cos_sin(body: &ConvexBody, theta: f64) -> Result<Vec2> {
    Ok(Trig::new(body)?.cos_sin(theta))
}

/// Generalized polar coordinates of a nonzero point.
pub fn theta_of_point(body: &ConvexBody, v: Vec2) -> Result<(f64, f64)> {
    Trig::new(body)?.theta_of_point(v)
}

pub fn correspondence(body: &ConvexBody, theta: f64) -> Result<AngleCorrespondence> {
    Ok(Trig::new(body)?.correspondence(theta))
}

pub fn derivative(body: &ConvexBody, theta: f64) -> Result<DerivativePair> {
    Ok(Trig::new(body)?.derivative(theta))
}

pub fn pi_omega(body: &ConvexBody, theta: f64) -> Result<f64> {
    Ok(Trig::new(body)?.pi_omega(theta))
}

pub fn pi_omega_inv(body: &ConvexBody, phi: f64) -> Result<f64> {
    Ok(Trig::new(body)?.pi_omega_inv(phi))
}

/// `e^{iφ}Ω` in the same representation where possible.
///
/// Ellipses become radial bodies (with `tol.radial_samples` samples) unless φ
/// is a multiple of π/2. Radial bodies are resampled from their sample polygon,
/// which is exact when φ is a multiple of the grid step.
pub fn rotate(body: &ConvexBody, phi: f64) -> Result<ConvexBody> {
    rotate_with(body, phi, &Tolerances::default())
}

pub fn rotate_with(body: &ConvexBody, phi: f64, tol: &Tolerances) -> Result<ConvexBody> {
    body.check()?;
    Ok(match body {
        ConvexBody::Polygon { vertices } => {
            let v: Vec<Vec2> = vertices.iter().map(|p| p.rotate(phi)).collect();
            let s = first_vertex(&v);
            let n = v.len();
            ConvexBody::Polygon {
                vertices: (0..n).map(|i| v[(i + s) % n]).collect(),
            }
        }
        ConvexBody::Ellipse { a, b } if a == b => body.clone(),
        ConvexBody::Ellipse { a, b } => match math::quarter_turns(phi) {
            Some(0) | Some(2) => body.clone(),
            Some(_) => ConvexBody::Ellipse { a: *b, b: *a },
            None => {
                let (a, b) = (*a, *b);
                ConvexBody::radial_from_fn(tol.radial_samples, |psi| {
                    let e = Vec2::from_angle(psi - phi);
                    1.0 / math::hypot(e.x / a, e.y / b)
                })
            }
        },
        ConvexBody::Radial { samples } => {
            let n = samples.len();
            let step = TAU / n as f64;
            let shift = math::round(phi / step);
            if (phi - shift * step).abs() <= 1e-14 * (1.0 + phi.abs()) {
                let s = (shift as i64).rem_euclid(n as i64) as usize;
                ConvexBody::Radial {
                    samples: (0..n).map(|j| samples[(j + n - s) % n]).collect(),
                }
            } else {
                let pts = radial_points(samples);
                let out = (0..n)
                    .map(|j| {
                        let psi = math::wrap(step * j as f64 - phi, TAU);
                        let i = ((psi / step) as usize).min(n - 1);
                        let (p, q) = (pts[i], pts[(i + 1) % n]);
                        let e = Vec2::from_angle(psi);
                        let d = q - p;
                        p.cross(d) / e.cross(d)
                    })
                    .collect();
                ConvexBody::Radial { samples: out }
            }
        }
    })
}
