//! Closed-form convex trigonometry on polygons.
//!
//! Vertices are renumbered so that `P_1` is the first vertex met when moving
//! counter-clockwise from the point `P̂` where the positive x-ray crosses the
//! boundary (or `P̂` itself when it is a vertex). With that numbering
//!
//! ```text
//! Θ_1 = x̂ y_1,   θ_k = [P_k × P_{k+1}],   Θ_{k+1} = Θ_k + θ_k,
//! Q_k = (y_{k+1} − y_k, x_k − x_{k+1}) / θ_k,
//! ```
//!
//! and `cos_Ω`, `sin_Ω` are linear in θ on every `[Θ_k, Θ_{k+1}]`.
//!
//! Indices in this module are zero based: `vertices[0]` is `P_1`.

use alloc::vec::Vec;

use crate::body::{radial_points, ConvexBody};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::math::{self, Vec2, TAU};

/// A closed polygonal curve parametrized by a doubled-area angle, together with
/// the dual data of each edge.
///
/// Lifted indices `j ∈ ℤ` address vertex `j mod n` on sheet `⌊j / n⌋`; angles
/// on sheet `m` are shifted by `m · period`, dual angles by `m · dual_period`.
#[derive(Clone, Debug, PartialEq)]
pub struct AngleChain {
    /// Vertex angles `A_0 < A_1 ≤ … < A_0 + period`.
    pub angles: Vec<f64>,
    pub points: Vec<Vec2>,
    /// `A_{k+1} − A_k`, i.e. `[X_k × X_{k+1}]`.
    pub increments: Vec<f64>,
    /// The dual point `N_k` of edge `k`: `⟨N_k, X_k⟩ = ⟨N_k, X_{k+1}⟩ = 1`.
    pub normals: Vec<Vec2>,
    /// Lifted dual angle of `N_k`.
    pub dual_angles: Vec<f64>,
    pub period: f64,
    pub dual_period: f64,
    /// Classical directions of the points, unwrapped to increase from `directions[0]`.
    directions: Vec<f64>,
}

impl AngleChain {
    fn new(
        angles: Vec<f64>,
        points: Vec<Vec2>,
        increments: Vec<f64>,
        normals: Vec<Vec2>,
        dual_angles: Vec<f64>,
        period: f64,
        dual_period: f64,
    ) -> Self {
        let mut directions = Vec::with_capacity(points.len());
        let mut prev = math::atan2(points[0].y, points[0].x);
        directions.push(prev);
        for w in points.windows(2) {
            // the turn between consecutive vertices is in [0, π)
            let step = math::atan2(w[0].cross(w[1]), w[0].dot(w[1])).max(0.0);
            prev += step;
            directions.push(prev);
        }
        Self {
            angles,
            points,
            increments,
            normals,
            dual_angles,
            period,
            dual_period,
            directions,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Splits a lifted index into `(index mod n, sheet)`.
    #[inline]
    pub fn split(&self, j: i64) -> (usize, i64) {
        let n = self.len() as i64;
        (j.rem_euclid(n) as usize, j.div_euclid(n))
    }

    pub fn angle(&self, j: i64) -> f64 {
        let (k, m) = self.split(j);
        self.angles[k] + m as f64 * self.period
    }

    pub fn point(&self, j: i64) -> Vec2 {
        self.points[self.split(j).0]
    }

    pub fn normal(&self, j: i64) -> Vec2 {
        self.normals[self.split(j).0]
    }

    pub fn increment(&self, j: i64) -> f64 {
        self.increments[self.split(j).0]
    }

    pub fn dual_angle(&self, j: i64) -> f64 {
        let (k, m) = self.split(j);
        self.dual_angles[k] + m as f64 * self.dual_period
    }

    /// Lifted index `j` of the edge with `A_j ≤ t < A_{j+1}`.
    pub fn edge_of(&self, t: f64) -> i64 {
        let a0 = self.angles[0];
        let mut m = math::floor((t - a0) / self.period);
        let mut r = t - m * self.period;
        if r < a0 {
            m -= 1.0;
            r += self.period;
        } else if r >= a0 + self.period {
            m += 1.0;
            r -= self.period;
        }
        let k = self.angles.partition_point(|&a| a <= r).max(1) - 1;
        k as i64 + m as i64 * self.len() as i64
    }

    /// The boundary point at angle `t`.
    pub fn eval(&self, t: f64) -> Vec2 {
        let j = self.edge_of(t);
        let inc = self.increment(j);
        let p = self.point(j);
        if inc <= 0.0 {
            return p;
        }
        let s = ((t - self.angle(j)) / inc).clamp(0.0, 1.0);
        let q = self.point(j + 1);
        Vec2::new(p.x + s * (q.x - p.x), p.y + s * (q.y - p.y))
    }

    /// The lifted vertex index if `t` lies within `tol` of a vertex angle.
    pub fn vertex_at(&self, t: f64, tol: f64) -> Option<i64> {
        let j = self.edge_of(t);
        if t - self.angle(j) <= tol {
            Some(j)
        } else if self.angle(j + 1) - t <= tol {
            Some(j + 1)
        } else {
            None
        }
    }

    /// Closed interval of dual angles corresponding to `t`.
    pub fn stair(&self, t: f64, tol: f64) -> (f64, f64) {
        match self.vertex_at(t, tol) {
            Some(j) => (self.dual_angle(j - 1), self.dual_angle(j)),
            None => {
                let d = self.dual_angle(self.edge_of(t));
                (d, d)
            }
        }
    }

    /// One-sided derivatives `(left, right)` of [`AngleChain::eval`] at `t`.
    pub fn one_sided(&self, t: f64, tol: f64) -> (Vec2, Vec2) {
        match self.vertex_at(t, tol) {
            Some(j) => (self.normal(j - 1).perp(), self.normal(j).perp()),
            None => {
                let d = self.normal(self.edge_of(t)).perp();
                (d, d)
            }
        }
    }

    /// Gauge `r` and principal angle in `[0, period)` of a nonzero point.
    pub fn locate(&self, v: Vec2) -> (f64, f64) {
        let (k, _) = self.cell(math::atan2(v.y, v.x));
        let r = self.normals[k].dot(v);
        let t = self.angles[k] + self.points[k].cross(v / r);
        (r, math::wrap(t, self.period))
    }

    /// Edge whose cone contains the classical direction `phi`, and the sheet.
    fn cell(&self, phi: f64) -> (usize, i64) {
        let d0 = self.directions[0];
        let m = math::floor((phi - d0) / TAU);
        let mut r = phi - m * TAU;
        let mut m = m as i64;
        if r < d0 {
            m -= 1;
            r += TAU;
        } else if r >= d0 + TAU {
            m += 1;
            r -= TAU;
        }
        (self.directions.partition_point(|&d| d <= r).max(1) - 1, m)
    }

    /// Lifted angle of the boundary point in the classical direction `phi`,
    /// together with the gauge of the unit vector in that direction.
    ///
    /// Continuous and increasing in `phi`, with `phi + 2π ↦ t + period`.
    pub fn angle_of_direction(&self, phi: f64) -> (f64, f64) {
        let (k, m) = self.cell(phi);
        let e = Vec2::from_angle(phi);
        let gauge = self.normals[k].dot(e);
        let t = self.angles[k] + self.points[k].cross(e / gauge);
        (gauge, t + m as f64 * self.period)
    }

    /// Lifted classical direction of the point at angle `t`; inverse of
    /// [`AngleChain::angle_of_direction`].
    pub fn direction_of_angle(&self, t: f64) -> f64 {
        let j = self.edge_of(t);
        let (k, m) = self.split(j);
        let p = self.points[k];
        let x = self.eval(t);
        self.directions[k] + m as f64 * TAU + math::atan2(p.cross(x), p.dot(x))
    }
}

/// Vertex angle tables of a polygon and of its polar.
#[derive(Clone, Debug, PartialEq)]
pub struct PolygonTables {
    /// `P_1 … P_n` after renumbering.
    pub vertices: Vec<Vec2>,
    /// `vertices[i]` is input vertex `(i + first_index) mod n`.
    pub first_index: usize,
    pub x_hat: f64,
    /// `Θ_1 … Θ_n`.
    pub theta: Vec<f64>,
    /// `θ_1 … θ_n`.
    pub theta_edge: Vec<f64>,
    /// `Q_1 … Q_n`, `Q_k` dual to the edge `P_k P_{k+1}`.
    pub polar_vertices: Vec<Vec2>,
    /// `θ°_1 … θ°_n`, with `θ°_k = [Q_k × Q_{k+1}]`.
    pub polar_edge: Vec<f64>,
    /// `Θ°_1 … Θ°_n`, lifted to the sheet on which `Q_k` lies within a quarter
    /// turn of the edge it is dual to.
    pub polar_theta: Vec<f64>,
    pub period: f64,
    pub polar_period: f64,
    /// Index of the first polar vertex (the vertex of largest `x`, or the first
    /// of the two when the right edge is vertical).
    pub polar_anchor: usize,
    primal: AngleChain,
    dual: AngleChain,
}

impl PolygonTables {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Input index of each renumbered vertex.
    pub fn permutation(&self) -> Vec<usize> {
        let n = self.len();
        (0..n).map(|i| (i + self.first_index) % n).collect()
    }

    /// The boundary of Ω parametrized by θ.
    pub fn chain(&self) -> &AngleChain {
        &self.primal
    }

    /// The boundary of Ω° parametrized by θ°.
    pub fn polar_chain(&self) -> &AngleChain {
        &self.dual
    }
}

/// Builds the tables of a polygon (or of the sample polygon of a radial body).
pub fn build_tables(body: &ConvexBody) -> Result<PolygonTables> {
    build_tables_with(body, &Tolerances::default())
}

pub fn build_tables_with(body: &ConvexBody, tol: &Tolerances) -> Result<PolygonTables> {
    let input = match body {
        ConvexBody::Polygon { vertices } => vertices.clone(),
        ConvexBody::Radial { samples } => radial_points(samples),
        ConvexBody::Ellipse { .. } => return Err(Error::NotAPolygon),
    };
    let violations = body.validate_with(tol);
    if !violations.is_empty() {
        return Err(Error::InvalidBody(violations));
    }
    Ok(tables_from_ccw(&input))
}

/// Index `j` of the first vertex: `y_{j−1} < 0 ≤ y_j`.
pub(crate) fn first_vertex(v: &[Vec2]) -> usize {
    let n = v.len();
    (0..n)
        .find(|&j| v[(j + n - 1) % n].y < 0.0 && v[j].y >= 0.0)
        .unwrap_or(0)
}

/// Where the positive x-ray leaves through the edge ending at `v[j]`.
fn ray_exit(prev: Vec2, cur: Vec2) -> f64 {
    if cur.y == 0.0 {
        cur.x
    } else {
        prev.cross(cur) / (cur.y - prev.y)
    }
}

fn tables_from_ccw(input: &[Vec2]) -> PolygonTables {
    let n = input.len();
    let first_index = first_vertex(input);
    let p: Vec<Vec2> = (0..n).map(|i| input[(i + first_index) % n]).collect();
    let at = |k: usize| p[k % n];

    let x_hat = ray_exit(p[n - 1], p[0]);
    let theta_edge: Vec<f64> = (0..n).map(|k| at(k).cross(at(k + 1))).collect();
    let mut theta = Vec::with_capacity(n);
    let mut acc = x_hat * p[0].y;
    for &inc in &theta_edge {
        theta.push(acc);
        acc += inc;
    }
    let period: f64 = theta_edge.iter().sum();

    let q: Vec<Vec2> = (0..n)
        .map(|k| {
            let (a, b) = (at(k), at(k + 1));
            Vec2::new(b.y - a.y, a.x - b.x) / theta_edge[k]
        })
        .collect();
    let polar_edge: Vec<f64> = (0..n)
        .map(|k| {
            let (t0, t1) = (theta_edge[k], theta_edge[(k + 1) % n]);
            let v = 1.0 / t0 + 1.0 / t1 - at(k).cross(at(k + 2)) / (t0 * t1);
            v.max(0.0)
        })
        .collect();
    let polar_period: f64 = polar_edge.iter().sum();

    // The polar x-ray crosses the edge Q_{k-1} Q_k dual to the vertex P_k of
    // largest x; its upper end Q_k is the first polar vertex.
    let anchor = first_vertex(&q);
    let xq = ray_exit(q[(anchor + n - 1) % n], q[anchor]);
    let mut principal0 = xq * q[anchor].y;
    if anchor != 0 {
        principal0 += polar_edge[anchor..].iter().sum::<f64>();
    }
    if principal0 >= polar_period {
        principal0 -= polar_period;
    }
    // Q_1 below the p-axis on the right: it belongs to the sheet just before 0.
    if q[0].y < 0.0 && q[0].x > 0.0 {
        principal0 -= polar_period;
    }
    let mut polar_theta = Vec::with_capacity(n);
    let mut acc = principal0;
    for &inc in &polar_edge {
        polar_theta.push(acc);
        acc += inc;
    }

    let primal = AngleChain::new(
        theta.clone(),
        p.clone(),
        theta_edge.clone(),
        q.clone(),
        polar_theta.clone(),
        period,
        polar_period,
    );
    let dual_normals: Vec<Vec2> = (0..n).map(|k| at(k + 1)).collect();
    let dual_duals: Vec<f64> = (0..n)
        .map(|k| if k + 1 < n { theta[k + 1] } else { theta[0] + period })
        .collect();
    let dual = AngleChain::new(
        polar_theta.clone(),
        q.clone(),
        polar_edge.clone(),
        dual_normals,
        dual_duals,
        polar_period,
        period,
    );

    PolygonTables {
        vertices: p,
        first_index,
        x_hat,
        theta,
        theta_edge,
        polar_vertices: q,
        polar_edge,
        polar_theta,
        period,
        polar_period,
        polar_anchor: anchor,
        primal,
        dual,
    }
}

/// `(cos_Ω θ, sin_Ω θ)` by linear interpolation between vertex angles.
pub fn eval_piecewise(tables: &PolygonTables, theta: f64) -> Vec2 {
    tables.primal.eval(theta)
}

/// Tolerance used to recognise a vertex angle.
pub fn vertex_snap(theta: f64) -> f64 {
    64.0 * f64::EPSILON * theta.abs().max(1.0)
}

/// The stair-form correspondence `θ ↦ [θ°₋, θ°₊]`.
pub fn stair(tables: &PolygonTables, theta: f64) -> (f64, f64) {
    tables.primal.stair(theta, vertex_snap(theta))
}
