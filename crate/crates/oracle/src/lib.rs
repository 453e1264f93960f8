//! Brute-force reference computations.
//!
//! Nothing here shares code with `convex-trig-core`: bodies are described
//! again from scratch, sector areas come from a dense boundary polyline, and
//! trajectories from fixed-step RK4 on the raw control systems.

use std::f64::consts::TAU;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("point is {0:e} away from the boundary")]
    OffBoundary(f64),
    #[error("invalid body: {0}")]
    Body(&'static str),
}

pub type Result<T> = std::result::Result<T, OracleError>;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleConfig {
    pub boundary_samples: usize,
    pub ode_steps: usize,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            boundary_samples: 1_000_000,
            ode_steps: 100_000,
            seed: 0,
        }
    }
}

/// A convex body containing the origin, known through its radial function.
#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    /// Counter-clockwise vertices.
    Polygon(Vec<(f64, f64)>),
    Ellipse { a: f64, b: f64 },
    /// Radii on a uniform angle grid starting at 0, joined by chords.
    Radial(Vec<f64>),
}

impl Shape {
    fn polygon_points(&self) -> Option<Vec<(f64, f64)>> {
        match self {
            Shape::Polygon(v) => Some(v.clone()),
            Shape::Radial(r) => {
                let n = r.len();
                Some(
                    r.iter()
                        .enumerate()
                        .map(|(j, &rj)| {
                            let phi = TAU * j as f64 / n as f64;
                            (rj * phi.cos(), rj * phi.sin())
                        })
                        .collect(),
                )
            }
            Shape::Ellipse { .. } => None,
        }
    }

    /// Distance from the origin to the boundary along direction `phi`.
    pub fn radius(&self, phi: f64) -> f64 {
        let (c, s) = (phi.cos(), phi.sin());
        match self {
            Shape::Ellipse { a, b } => 1.0 / ((c / a).powi(2) + (s / b).powi(2)).sqrt(),
            _ => {
                let pts = self.polygon_points().unwrap();
                let n = pts.len();
                let mut best = f64::INFINITY;
                for i in 0..n {
                    let (p, q) = (pts[i], pts[(i + 1) % n]);
                    // outward normal of a counter-clockwise edge
                    let (nx, ny) = (q.1 - p.1, p.0 - q.0);
                    let offset = nx * p.0 + ny * p.1;
                    let along = nx * c + ny * s;
                    if along > 0.0 {
                        best = best.min(offset / along);
                    }
                }
                best
            }
        }
    }

    /// Boundary point in direction `phi`.
    pub fn boundary(&self, phi: f64) -> (f64, f64) {
        let r = self.radius(phi);
        (r * phi.cos(), r * phi.sin())
    }

    /// `max_{u ∈ Ω} ⟨h, u⟩` and a maximizer.
    pub fn support(&self, h: (f64, f64)) -> (f64, (f64, f64)) {
        match self {
            Shape::Ellipse { a, b } => {
                let s = ((a * h.0).powi(2) + (b * h.1).powi(2)).sqrt();
                if s == 0.0 {
                    return (0.0, (0.0, 0.0));
                }
                (s, (a * a * h.0 / s, b * b * h.1 / s))
            }
            _ => self
                .polygon_points()
                .unwrap()
                .into_iter()
                .map(|p| (p.0 * h.0 + p.1 * h.1, p))
                .fold((f64::NEG_INFINITY, (0.0, 0.0)), |a, b| if b.0 > a.0 { b } else { a }),
        }
    }
}

/// Doubled sector areas from a dense boundary polyline.
pub struct SectorOracle {
    shape: Shape,
    points: Vec<(f64, f64)>,
    /// `cumulative[i]` = doubled area swept from angle 0 to sample `i`.
    cumulative: Vec<f64>,
}

impl SectorOracle {
    pub fn new(shape: Shape, samples: usize) -> Result<Self> {
        if samples < 8 {
            return Err(OracleError::Body("too few boundary samples"));
        }
        let points: Vec<(f64, f64)> = (0..=samples)
            .map(|i| shape.boundary(TAU * i as f64 / samples as f64))
            .collect();
        if points.iter().any(|p| !p.0.is_finite() || !p.1.is_finite()) {
            return Err(OracleError::Body("origin is not interior"));
        }
        let mut cumulative = Vec::with_capacity(samples + 1);
        let mut acc = 0.0;
        cumulative.push(0.0);
        for w in points.windows(2) {
            acc += w[0].0 * w[1].1 - w[0].1 * w[1].0;
            cumulative.push(acc);
        }
        Ok(Self {
            shape,
            points,
            cumulative,
        })
    }

    /// Doubled area of the whole body.
    pub fn period(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    /// Doubled sector area from the positive x-ray counter-clockwise to `p`.
    pub fn theta(&self, p: (f64, f64)) -> Result<f64> {
        let mut phi = p.1.atan2(p.0);
        if phi < 0.0 {
            phi += TAU;
        }
        let b = self.shape.boundary(phi);
        let off = ((b.0 - p.0).powi(2) + (b.1 - p.1).powi(2)).sqrt();
        if !(off <= 1e-6) {
            return Err(OracleError::OffBoundary(off));
        }
        let n = self.points.len() - 1;
        let k = ((phi / TAU * n as f64) as usize).min(n - 1);
        let base = self.points[k];
        Ok(self.cumulative[k] + base.0 * p.1 - base.1 * p.0)
    }
}

/// `sector_theta(shape, p)` with a fresh oracle.
pub fn sector_theta(shape: &Shape, p: (f64, f64), config: &OracleConfig) -> Result<f64> {
    SectorOracle::new(shape.clone(), config.boundary_samples)?.theta(p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ControlSystem {
    Heisenberg,
    Grushin,
    Martinet,
    Engel,
    Cartan,
}

impl ControlSystem {
    pub fn dim(&self) -> usize {
        match self {
            ControlSystem::Grushin => 2,
            ControlSystem::Heisenberg | ControlSystem::Martinet => 3,
            ControlSystem::Engel => 4,
            ControlSystem::Cartan => 5,
        }
    }

    /// Right-hand side of the raw state equations.
    pub fn field(&self, x: &[f64], u: (f64, f64)) -> Vec<f64> {
        let (u1, u2) = u;
        let (x1, x2) = (x[0], x[1]);
        let dz = 0.5 * (x1 * u2 - x2 * u1);
        let dw = -0.5 * x2 * x2 * u1;
        match self {
            ControlSystem::Heisenberg => vec![u1, u2, dz],
            ControlSystem::Grushin => vec![u1, x1 * u2],
            ControlSystem::Martinet => vec![u1, u2, dw],
            ControlSystem::Engel => vec![u1, u2, dz, dw],
            ControlSystem::Cartan => vec![u1, u2, dz, 0.5 * x1 * x1 * u2, dw],
        }
    }
}

fn rk4(f: &dyn Fn(f64, &[f64]) -> Vec<f64>, t: f64, y: &[f64], h: f64) -> Vec<f64> {
    let add = |y: &[f64], k: &[f64], s: f64| -> Vec<f64> { y.iter().zip(k).map(|(a, b)| a + s * b).collect() };
    let k1 = f(t, y);
    let k2 = f(t + 0.5 * h, &add(y, &k1, 0.5 * h));
    let k3 = f(t + 0.5 * h, &add(y, &k2, 0.5 * h));
    let k4 = f(t + h, &add(y, &k3, h));
    (0..y.len())
        .map(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

/// Fixed-step RK4 of a control system under `u(t)`, returning `(t, x)` at
/// every step. Steps are split at the given control breakpoints.
pub fn ode_reference(
    system: ControlSystem,
    x0: &[f64],
    control: &dyn Fn(f64) -> (f64, f64),
    t_end: f64,
    steps: usize,
    breakpoints: &[f64],
) -> Vec<(f64, Vec<f64>)> {
    let f = |t: f64, x: &[f64]| system.field(x, control(t));
    let h = t_end / steps as f64;
    let mut out = vec![(0.0, x0.to_vec())];
    let mut x = x0.to_vec();
    for i in 0..steps {
        let (a, b) = (h * i as f64, h * (i + 1) as f64);
        let mut cuts: Vec<f64> = breakpoints.iter().copied().filter(|&c| c > a && c < b).collect();
        cuts.sort_by(f64::total_cmp);
        cuts.push(b);
        let mut t = a;
        for c in cuts {
            // evaluate the control inside each piece so a jump at `c` is not sampled
            let mid = 0.5 * (t + c);
            let u = control(mid);
            let g = |_: f64, x: &[f64]| system.field(x, u);
            x = if breakpoints.is_empty() { rk4(&f, t, &x, c - t) } else { rk4(&g, t, &x, c - t) };
            t = c;
        }
        out.push((b, x.clone()));
    }
    out
}

/// State and adjoint `(h₁, h₂, h₃)` along one RK4 step grid.
#[derive(Clone, Debug, PartialEq)]
pub struct PontryaginSample {
    pub t: f64,
    pub x: Vec<f64>,
    pub h: [f64; 3],
    pub u: (f64, f64),
}

/// Integrates the maximum-principle system directly:
/// `ḣ₁ = −h₃u₂`, `ḣ₂ = h₃u₁`, `ḣ₃ = ⟨drive, u⟩`, with `u` maximizing `⟨(h₁, h₂), u⟩`
/// over the shape. `drive` is `(h₄, h₅)`; zero for Heisenberg and Grushin, where
/// `h₃` is the constant `q` or `p₂`.
pub fn pontryagin_reference(
    system: ControlSystem,
    shape: &Shape,
    h0: [f64; 3],
    drive: (f64, f64),
    x0: &[f64],
    t_end: f64,
    steps: usize,
) -> Vec<PontryaginSample> {
    let n = system.dim();
    let f = |_: f64, y: &[f64]| {
        let u = shape.support((y[n], y[n + 1])).1;
        let mut d = system.field(&y[..n], u);
        let h3 = y[n + 2];
        d.push(-h3 * u.1);
        d.push(h3 * u.0);
        d.push(drive.0 * u.0 + drive.1 * u.1);
        d
    };
    let mut y: Vec<f64> = x0.iter().copied().chain(h0).collect();
    let h = t_end / steps as f64;
    let sample = |t: f64, y: &[f64]| PontryaginSample {
        t,
        x: y[..n].to_vec(),
        h: [y[n], y[n + 1], y[n + 2]],
        u: shape.support((y[n], y[n + 1])).1,
    };
    let mut out = vec![sample(0.0, &y)];
    for i in 0..steps {
        y = rk4(&f, h * i as f64, &y, h);
        out.push(sample(h * (i + 1) as f64, &y));
    }
    out
}
