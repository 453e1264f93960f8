//! Planar convex compact sets with the origin in their interior.
//!
//! Three representations are supported:
//!
//! * `Polygon`: vertices listed counter-clockwise.
//! * `Ellipse`: axis-aligned and centred at the origin.
//! * `Radial`: boundary samples `r_j` at the classical angles `φ_j = 2πj/N`.
//!   The body is the polygon through the sample points `r_j (cos φ_j, sin φ_j)`,
//!   so all exact polygon machinery applies; accuracy with respect to the
//!   smooth body being sampled is limited by the grid.

use alloc::vec::Vec;
use core::fmt;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::math::{self, Vec2, PI, TAU};

#[derive(Clone, Debug, PartialEq)]
pub enum ConvexBody {
    Polygon { vertices: Vec<Vec2> },
    Ellipse { a: f64, b: f64 },
    Radial { samples: Vec<f64> },
}

/// A failed `ConvexBody` invariant together with the offending datum.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    TooFewVertices { count: usize },
    NonFinite { index: usize },
    /// The vertex list is clockwise (negative signed area).
    Orientation { signed_area: f64 },
    /// The origin is on or outside the line through edge `index → index+1`.
    OriginNotInterior { edge: usize, cross: f64 },
    DuplicateVertex { index: usize },
    Collinear { index: usize },
    NotConvex { index: usize, turn: f64 },
    /// The boundary winds around the origin more than once.
    Winding { turns: f64 },
    NonPositiveSemiAxis { a: f64, b: f64 },
    NonPositiveRadius { index: usize, r: f64 },
    RadialNotConvex { index: usize, turn: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TooFewVertices { count } => {
                write!(f, "too few vertices/samples: {count}")
            }
            Violation::NonFinite { index } => write!(f, "non-finite coordinate at index {index}"),
            Violation::Orientation { signed_area } => write!(
                f,
                "orientation: vertices are not counter-clockwise (signed area {signed_area})"
            ),
            Violation::OriginNotInterior { edge, cross } => write!(
                f,
                "origin-not-interior: [P_{edge} x P_{}] = {cross} <= 0",
                edge + 1
            ),
            Violation::DuplicateVertex { index } => write!(f, "duplicate vertex at index {index}"),
            Violation::Collinear { index } => {
                write!(f, "collinear: vertex {index} lies on the segment of its neighbours")
            }
            Violation::NotConvex { index, turn } => {
                write!(f, "not convex: clockwise turn {turn} at vertex {index}")
            }
            Violation::Winding { turns } => {
                write!(f, "boundary winds {turns} times around the origin")
            }
            Violation::NonPositiveSemiAxis { a, b } => {
                write!(f, "ellipse semi-axes must be positive (a = {a}, b = {b})")
            }
            Violation::NonPositiveRadius { index, r } => {
                write!(f, "radial sample {index} is not positive (r = {r})")
            }
            Violation::RadialNotConvex { index, turn } => {
                write!(f, "radial samples not convex: turn {turn} at sample {index}")
            }
        }
    }
}

impl ConvexBody {
    pub fn polygon<P: Into<Vec2>>(vertices: impl IntoIterator<Item = P>) -> Self {
        ConvexBody::Polygon {
            vertices: vertices.into_iter().map(Into::into).collect(),
        }
    }

    pub fn ellipse(a: f64, b: f64) -> Self {
        ConvexBody::Ellipse { a, b }
    }

    pub fn radial(samples: Vec<f64>) -> Self {
        ConvexBody::Radial { samples }
    }

    /// Samples `r(φ)` on the uniform grid of `n` angles.
    pub fn radial_from_fn(n: usize, r: impl Fn(f64) -> f64) -> Self {
        let samples = (0..n).map(|j| r(TAU * j as f64 / n as f64)).collect();
        ConvexBody::Radial { samples }
    }

    /// The unit disc (as an ellipse, so that everything is closed form).
    pub fn unit_disc() -> Self {
        ConvexBody::Ellipse { a: 1.0, b: 1.0 }
    }

    /// `{|x| ≤ h, |y| ≤ h}`.
    pub fn square(h: f64) -> Self {
        Self::polygon([(h, -h), (h, h), (-h, h), (-h, -h)])
    }

    /// `{|x| + |y| ≤ h}`.
    pub fn diamond(h: f64) -> Self {
        Self::polygon([(h, 0.0), (0.0, h), (-h, 0.0), (0.0, -h)])
    }

    pub fn is_polygon(&self) -> bool {
        matches!(self, ConvexBody::Polygon { .. })
    }

    /// Boundary vertices of the polygonal representations (`None` for ellipses).
    pub fn vertex_list(&self) -> Option<Vec<Vec2>> {
        match self {
            ConvexBody::Polygon { vertices } => Some(vertices.clone()),
            ConvexBody::Radial { samples } => Some(radial_points(samples)),
            ConvexBody::Ellipse { .. } => None,
        }
    }

    /// Every violated invariant; empty iff the body is valid.
    pub fn validate(&self) -> Vec<Violation> {
        self.validate_with(&Tolerances::default())
    }

    pub fn validate_with(&self, tol: &Tolerances) -> Vec<Violation> {
        match self {
            ConvexBody::Polygon { vertices } => validate_polygon(vertices, tol.geo),
            ConvexBody::Ellipse { a, b } => {
                if a.is_finite() && b.is_finite() && *a > 0.0 && *b > 0.0 {
                    Vec::new()
                } else {
                    alloc::vec![Violation::NonPositiveSemiAxis { a: *a, b: *b }]
                }
            }
            ConvexBody::Radial { samples } => validate_radial(samples, tol.geo),
        }
    }

    pub fn check(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidBody(v))
        }
    }

    /// Support function `s(p, q) = sup { p x + q y : (x, y) ∈ Ω }`.
    pub fn support(&self, dir: Vec2) -> f64 {
        match self {
            ConvexBody::Polygon { vertices } => max_dot(vertices.iter().copied(), dir),
            ConvexBody::Ellipse { a, b } => math::hypot(a * dir.x, b * dir.y),
            ConvexBody::Radial { samples } => max_dot(radial_points(samples).into_iter(), dir),
        }
    }

    /// Validating variant of [`ConvexBody::support`].
    pub fn try_support(&self, dir: Vec2) -> Result<f64> {
        self.check()?;
        Ok(self.support(dir))
    }

    /// The polar set `{(p, q) : p x + q y ≤ 1 on Ω}` in the same representation.
    ///
    /// For polygons the polar vertex `Q_k` is dual to the edge `P_k P_{k+1}`, so
    /// the output keeps the input's cyclic labelling.
    pub fn polar(&self) -> Result<ConvexBody> {
        self.check()?;
        Ok(match self {
            ConvexBody::Polygon { vertices } => ConvexBody::Polygon {
                vertices: polar_vertices(vertices),
            },
            ConvexBody::Ellipse { a, b } => ConvexBody::Ellipse {
                a: 1.0 / a,
                b: 1.0 / b,
            },
            ConvexBody::Radial { samples } => {
                let n = samples.len();
                let pts = radial_points(samples);
                let mut out = Vec::with_capacity(n);
                // the arg-max vertex turns monotonically with the direction
                let mut best = 0usize;
                for j in 0..n {
                    let e = Vec2::from_angle(TAU * j as f64 / n as f64);
                    best = hill_climb(&pts, e, best);
                    out.push(1.0 / pts[best].dot(e));
                }
                ConvexBody::Radial { samples: out }
            }
        })
    }

    /// Area 𝕊(Ω).
    pub fn area(&self) -> f64 {
        match self {
            ConvexBody::Polygon { vertices } => shoelace(vertices),
            ConvexBody::Ellipse { a, b } => PI * a * b,
            ConvexBody::Radial { samples } => shoelace(&radial_points(samples)),
        }
    }

    /// Intersection of the positive x-ray with the boundary, `x̂`.
    pub fn x_hat(&self) -> f64 {
        match self {
            ConvexBody::Polygon { vertices } => {
                1.0 / max_dot(polar_vertices(vertices).into_iter(), Vec2::new(1.0, 0.0))
            }
            ConvexBody::Ellipse { a, .. } => *a,
            ConvexBody::Radial { samples } => samples[0],
        }
    }

    /// Whether Ω = −Ω up to `tol` (vertex-set comparison for polygonal forms).
    pub fn is_centrally_symmetric(&self, tol: f64) -> bool {
        match self {
            ConvexBody::Ellipse { .. } => true,
            _ => {
                let v = self.vertex_list().unwrap_or_default();
                v.iter()
                    .all(|p| v.iter().any(|q| (*p + *q).norm() <= tol))
            }
        }
    }
}

/// Boundary points of a radial sample list.
pub fn radial_points(samples: &[f64]) -> Vec<Vec2> {
    let n = samples.len();
    samples
        .iter()
        .enumerate()
        .map(|(j, &r)| Vec2::from_angle(TAU * j as f64 / n as f64) * r)
        .collect()
}

/// `Q_k = rot(−π/2)(P_{k+1} − P_k) / [P_k × P_{k+1}]`.
pub fn polar_vertices(vertices: &[Vec2]) -> Vec<Vec2> {
    let n = vertices.len();
    (0..n)
        .map(|k| {
            let p = vertices[k];
            let q = vertices[(k + 1) % n];
            (q - p).perp_cw() / p.cross(q)
        })
        .collect()
}

/// Shoelace area `½ Σ [P_k × P_{k+1}]`.
pub fn shoelace(vertices: &[Vec2]) -> f64 {
    let n = vertices.len();
    0.5 * (0..n)
        .map(|k| vertices[k].cross(vertices[(k + 1) % n]))
        .sum::<f64>()
}

/// Drops duplicate and collinear vertices and restores counter-clockwise order.
pub fn canonicalize(vertices: &[Vec2], tol: f64) -> Vec<Vec2> {
    let mut v: Vec<Vec2> = Vec::with_capacity(vertices.len());
    for &p in vertices {
        if v.last().is_none_or(|l: &Vec2| l.dist(p) > tol) {
            v.push(p);
        }
    }
    while v.len() > 1 && v[0].dist(v[v.len() - 1]) <= tol {
        v.pop();
    }
    if shoelace(&v) < 0.0 {
        v.reverse();
    }
    loop {
        let n = v.len();
        if n < 3 {
            break;
        }
        let scale = v.iter().map(|p| p.norm()).fold(0.0, f64::max).max(1.0);
        let drop = (0..n).find(|&k| {
            let a = v[(k + n - 1) % n];
            let b = v[k];
            let c = v[(k + 1) % n];
            (b - a).cross(c - b).abs() <= tol * scale * scale
        });
        match drop {
            Some(k) => {
                v.remove(k);
            }
            None => break,
        }
    }
    v
}

fn max_dot(points: impl Iterator<Item = Vec2>, dir: Vec2) -> f64 {
    points.map(|p| p.dot(dir)).fold(f64::NEG_INFINITY, f64::max)
}

fn hill_climb(pts: &[Vec2], dir: Vec2, start: usize) -> usize {
    let n = pts.len();
    let mut best = start;
    loop {
        let next = (best + 1) % n;
        let prev = (best + n - 1) % n;
        if pts[next].dot(dir) > pts[best].dot(dir) {
            best = next;
        } else if pts[prev].dot(dir) > pts[best].dot(dir) {
            best = prev;
        } else {
            return best;
        }
    }
}

fn validate_polygon(v: &[Vec2], tol: f64) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = v.len();
    if n < 3 {
        out.push(Violation::TooFewVertices { count: n });
        return out;
    }
    if let Some(index) = v.iter().position(|p| !p.x.is_finite() || !p.y.is_finite()) {
        out.push(Violation::NonFinite { index });
        return out;
    }
    let scale = v.iter().map(|p| p.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let eps = tol * scale * scale;
    let signed = shoelace(v);
    if signed < 0.0 {
        out.push(Violation::Orientation { signed_area: signed });
        return out;
    }
    for k in 0..n {
        if v[k].dist(v[(k + 1) % n]) <= tol * scale {
            out.push(Violation::DuplicateVertex { index: (k + 1) % n });
        }
    }
    if !out.is_empty() {
        return out;
    }
    for k in 0..n {
        let a = v[(k + n - 1) % n];
        let b = v[k];
        let c = v[(k + 1) % n];
        let turn = (b - a).cross(c - b);
        if turn.abs() <= eps {
            out.push(Violation::Collinear { index: k });
        } else if turn < 0.0 {
            out.push(Violation::NotConvex { index: k, turn });
        }
    }
    for k in 0..n {
        let cross = v[k].cross(v[(k + 1) % n]);
        if cross <= eps {
            out.push(Violation::OriginNotInterior { edge: k, cross });
        }
    }
    if out.is_empty() {
        let total: f64 = (0..n)
            .map(|k| {
                let p = v[k];
                let q = v[(k + 1) % n];
                math::atan2(p.cross(q), p.dot(q))
            })
            .sum();
        let turns = total / TAU;
        if (turns - 1.0).abs() > 1e-6 {
            out.push(Violation::Winding { turns });
        }
    }
    out
}

fn validate_radial(s: &[f64], tol: f64) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = s.len();
    if n < 3 {
        out.push(Violation::TooFewVertices { count: n });
        return out;
    }
    for (index, &r) in s.iter().enumerate() {
        if !r.is_finite() {
            out.push(Violation::NonFinite { index });
        } else if r <= 0.0 {
            out.push(Violation::NonPositiveRadius { index, r });
        }
    }
    if !out.is_empty() {
        return out;
    }
    let pts = radial_points(s);
    for k in 0..n {
        let a = pts[(k + n - 1) % n];
        let b = pts[k];
        let c = pts[(k + 1) % n];
        let (e1, e2) = (b - a, c - b);
        let turn = e1.cross(e2) / (e1.norm() * e2.norm());
        if turn < -tol {
            out.push(Violation::RadialNotConvex { index: k, turn });
        }
    }
    out
}
