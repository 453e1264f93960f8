//! The generalized pendulum `θ̈° = g sin_Ω θ`, `θ ∈ θ(θ°)`.
//!
//! The energy `ℍ = ½ θ̇°² + g cos_{Ω°} θ°` is conserved. For polygons
//! `sin_Ω θ` is constant while θ° crosses the interior of a polar edge, so
//! trajectories are parabolic arcs joined at polar vertices and are integrated
//! exactly, event by event. Smooth bodies use an adaptive Dormand–Prince
//! integrator.
//!
//! At a polar vertex on the level `ℍ⁺` the motion is not unique: the point may
//! rest there for any time before leaving. A [`SeparatrixPolicy`] must then be
//! supplied.

use alloc::vec;
use alloc::vec::Vec;

use crate::body::ConvexBody;
use crate::error::{Error, Result};
use crate::math::{self, Vec2};
use crate::ode::Dopri;
use crate::polygon::AngleChain;
use crate::quadrature;
use crate::trig::Trig;

/// Direction of motion along the polar boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PendulumState {
    pub theta_polar: f64,
    pub omega: f64,
    pub t: f64,
}

impl PendulumState {
    pub fn new(theta_polar: f64, omega: f64) -> Self {
        Self {
            theta_polar,
            omega,
            t: 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Empty,
    BottomFixed,
    Oscillation,
    Separatrix,
    Rotation,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Empty => "empty",
            Regime::BottomFixed => "bottom-fixed",
            Regime::Oscillation => "oscillation",
            Regime::Separatrix => "separatrix",
            Regime::Rotation => "rotation",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyLevel {
    pub h: f64,
    /// Minimum of the potential (the stable equilibrium level).
    pub h_minus: f64,
    /// Maximum of the potential (the separatrix level).
    pub h_plus: f64,
    pub regime: Regime,
    /// Ω° has a vertical edge on the left: the stable equilibria form an interval.
    pub bottom_is_interval: bool,
    /// Ω° has a vertical edge on the right: the unstable equilibria form an interval.
    pub top_is_interval: bool,
}

/// What to do when the motion reaches a separatrix end point in finite time.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum SeparatrixPolicy {
    #[default]
    StayForever,
    /// Rest for the given time, then leave (in the arrival direction when possible).
    Dwell(f64),
    ImmediateExit(Direction),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventKind {
    Grid,
    Start,
    End,
    /// θ° crossed a polar vertex.
    Vertex,
    /// ω changed sign.
    Turn,
    DwellStart,
    DwellEnd,
    /// The motion stopped at an equilibrium.
    Rest,
}

impl EventKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EventKind::Grid => "",
            EventKind::Start => "start",
            EventKind::End => "end",
            EventKind::Vertex => "vertex",
            EventKind::Turn => "turn",
            EventKind::DwellStart => "dwell-start",
            EventKind::DwellEnd => "dwell-end",
            EventKind::Rest => "rest",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub theta_polar: f64,
    pub omega: f64,
    /// A representative of the angles corresponding to θ°.
    pub theta: f64,
    /// `(cos_Ω θ, sin_Ω θ)`.
    pub u: Vec2,
    pub energy: f64,
    pub event: EventKind,
    /// Coordinates carried along by a [`Passenger`].
    pub state: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DwellEvent {
    pub start: f64,
    /// `None` when the point stays forever.
    pub end: Option<f64>,
    pub theta_polar: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PendulumTrajectory {
    pub samples: Vec<Sample>,
    /// Times at which the control `u` changes.
    pub switch_times: Vec<f64>,
    pub dwell_events: Vec<DwellEvent>,
    /// Energy of the initial state.
    pub energy: f64,
    /// Whether the run used exact parabolic arcs.
    pub exact: bool,
}

impl PendulumTrajectory {
    pub fn max_energy_drift(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| (s.energy - self.energy).abs())
            .fold(0.0, f64::max)
    }
}

/// Extra coordinates driven by the control `u(t)`.
pub trait Passenger {
    fn dim(&self) -> usize;
    /// Right-hand side under the control `u`.
    fn rhs(&self, u: Vec2, x: &[f64], dx: &mut [f64]);
    /// Exact flow over time `s` under the constant control `u`.
    fn advance(&self, u: Vec2, s: f64, x: &mut [f64]);
}

/// No extra coordinates.
pub struct NoPassenger;

impl Passenger for NoPassenger {
    fn dim(&self) -> usize {
        0
    }
    fn rhs(&self, _: Vec2, _: &[f64], _: &mut [f64]) {}
    fn advance(&self, _: Vec2, _: f64, _: &mut [f64]) {}
}

/// One level curve of the phase portrait.
#[derive(Clone, Debug, PartialEq)]
pub struct PortraitCurve {
    pub h: f64,
    pub regime: Regime,
    /// Polylines of `(θ°, θ̇°)`: one closed loop for oscillations, upper and
    /// lower branches otherwise.
    pub branches: Vec<Vec<(f64, f64)>>,
}

/// The pendulum of a body with gain `g ≥ 0`.
#[derive(Clone, Debug)]
pub struct Pendulum {
    trig: Trig,
    gain: f64,
}

/// A motion piece with constant acceleration.
#[derive(Clone, Copy, Debug)]
struct Arc {
    len: f64,
    accel: f64,
    u: Vec2,
    theta: f64,
    /// State after the arc.
    end_theta: f64,
    end_omega: f64,
    end_vertex: Option<i64>,
    end_edge: i64,
    end_kind: EventKind,
}

impl Pendulum {
    pub fn new(body: &ConvexBody) -> Result<Self> {
        Ok(Self::from_trig(Trig::new(body)?, 1.0))
    }

    pub fn from_trig(trig: Trig, gain: f64) -> Self {
        Self { trig, gain }
    }

    pub fn trig(&self) -> &Trig {
        &self.trig
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    /// `g cos_{Ω°} θ°`.
    pub fn potential(&self, theta_polar: f64) -> f64 {
        self.gain * self.trig.polar_cos_sin(theta_polar).x
    }

    /// `ℍ = ½ ω² + g cos_{Ω°} θ°`.
    pub fn energy(&self, state: &PendulumState) -> f64 {
        0.5 * state.omega * state.omega + self.potential(state.theta_polar)
    }

    fn polar_x_range(&self) -> (f64, f64) {
        match self.trig.polar_chain() {
            Some(c) => c.points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), q| {
                (lo.min(q.x), hi.max(q.x))
            }),
            None => {
                let b = self.trig.dual();
                let r = b.cos_sin(0.0).x;
                (-r, r)
            }
        }
    }

    /// Lifted θ° of the stable equilibrium (a leftmost point of Ω°).
    pub fn bottom(&self) -> f64 {
        match self.trig.polar_chain() {
            Some(c) => {
                let k = argmin(c.points.iter().map(|q| q.x));
                c.angles[k]
            }
            None => 0.5 * self.trig.polar_period(),
        }
    }

    /// Lifted θ° of an unstable equilibrium (a rightmost point of Ω°).
    pub fn top(&self) -> f64 {
        match self.trig.polar_chain() {
            Some(c) => {
                let k = argmin(c.points.iter().map(|q| -q.x));
                c.angles[k]
            }
            None => 0.0,
        }
    }

    fn level_tol(&self) -> f64 {
        let (lo, hi) = self.polar_x_range();
        self.trig.tolerances().geo * (self.gain * lo.abs().max(hi.abs())).max(1.0)
    }

    pub fn classify(&self, h: f64) -> EnergyLevel {
        let (lo, hi) = self.polar_x_range();
        let (h_minus, h_plus) = (self.gain * lo, self.gain * hi);
        let tol = self.level_tol();
        let regime = if (h - h_minus).abs() <= tol && h <= h_plus - tol {
            Regime::BottomFixed
        } else if h < h_minus {
            Regime::Empty
        } else if (h - h_plus).abs() <= tol {
            Regime::Separatrix
        } else if h < h_plus {
            Regime::Oscillation
        } else {
            Regime::Rotation
        };
        let (bottom_is_interval, top_is_interval) = match self.trig.polar_chain() {
            Some(c) => {
                let eps = self.trig.tolerances().geo * lo.abs().max(hi.abs());
                let count = |x: f64| c.points.iter().filter(|q| (q.x - x).abs() <= eps).count();
                (count(lo) > 1, count(hi) > 1)
            }
            None => (false, false),
        };
        EnergyLevel {
            h,
            h_minus,
            h_plus,
            regime,
            bottom_is_interval,
            top_is_interval,
        }
    }

    /// Oscillation turning points `(θ°_left, θ°_right)` around [`Pendulum::bottom`].
    pub fn turning_points(&self, h: f64) -> Option<(f64, f64)> {
        if self.classify(h).regime != Regime::Oscillation {
            return None;
        }
        match self.trig.polar_chain() {
            Some(c) => {
                let b = self.bottom_index(c);
                let up = self.walk(c, h, b, Direction::Increasing).1;
                let down = self.walk(c, h, b, Direction::Decreasing).1;
                Some((down, up))
            }
            None => {
                let b = self.bottom();
                let half = 0.5 * self.trig.polar_period();
                let f = |x: f64| self.potential(x) - h;
                Some((bisect(&f, b - half, b), bisect(&f, b, b + half)))
            }
        }
    }

    fn bottom_index(&self, c: &AngleChain) -> i64 {
        argmin(c.points.iter().map(|q| q.x)) as i64
    }

    /// `∫ dθ°/√(h − V)` from the polar vertex `start` to the first root in the
    /// given direction, and the root.
    fn walk(&self, c: &AngleChain, h: f64, start: i64, dir: Direction) -> (f64, f64) {
        let g = self.gain;
        let mut total = 0.0;
        let mut j = start;
        let step: i64 = if dir == Direction::Increasing { 1 } else { -1 };
        for _ in 0..=c.len() {
            let next = j + step;
            let fa = h - g * c.point(j).x;
            let fb = h - g * c.point(next).x;
            let len = (c.angle(next) - c.angle(j)).abs();
            if fb > 0.0 {
                total += 2.0 * len / (math::sqrt(fa) + math::sqrt(fb));
            } else {
                let part = len * fa / (fa - fb);
                total += 2.0 * part / math::sqrt(fa);
                return (total, c.angle(j) + step as f64 * part);
            }
            j = next;
        }
        (total, f64::NAN)
    }

    /// Period of the motion on the level `h`; `None` when there is no periodic motion.
    pub fn period(&self, h: f64) -> Result<Option<f64>> {
        let level = self.classify(h);
        match level.regime {
            Regime::Empty | Regime::BottomFixed => return Ok(None),
            Regime::Separatrix => return Err(Error::PeriodUndefined),
            _ => {}
        }
        let pp = self.trig.polar_period();
        if self.gain == 0.0 {
            return Ok(Some(pp / math::sqrt(2.0 * h)));
        }
        let sqrt2 = math::sqrt(2.0);
        Ok(Some(match (level.regime, self.trig.polar_chain()) {
            (Regime::Oscillation, Some(c)) => {
                let b = self.bottom_index(c);
                let up = self.walk(c, h, b, Direction::Increasing).0;
                let down = self.walk(c, h, b, Direction::Decreasing).0;
                sqrt2 * (up + down)
            }
            (Regime::Rotation, Some(c)) => {
                let g = self.gain;
                let mut total = 0.0;
                for j in 0..c.len() as i64 {
                    let fa = h - g * c.point(j).x;
                    let fb = h - g * c.point(j + 1).x;
                    total += 2.0 * c.increment(j) / (math::sqrt(fa) + math::sqrt(fb));
                }
                total / sqrt2
            }
            (Regime::Oscillation, None) => {
                let (r1, r2) = self.turning_points(h).ok_or(Error::PeriodUndefined)?;
                let b = self.bottom();
                sqrt2 * (self.root_integral(b, r2) + self.root_integral(b, r1))
            }
            (_, None) => {
                let f = |x: f64| 1.0 / math::sqrt(h - self.potential(x));
                quadrature::integrate(f, 0.0, pp, 1e-14, 1e-13).0 / sqrt2
            }
            _ => unreachable!(),
        }))
    }

    /// `∫ dθ°/√(h − V)` between a regular point `from` and a simple root of an
    /// ellipse potential, with `θ° = root ∓ v²` to remove the endpoint
    /// singularity. The gap `h − V = V(root) − V` is expanded by a product
    /// formula so it keeps full relative accuracy near the root.
    fn root_integral(&self, from: f64, root: f64) -> f64 {
        let (a, b) = match self.trig.body() {
            ConvexBody::Ellipse { a, b } => (*a, *b),
            _ => unreachable!("smooth periods are computed for ellipses only"),
        };
        let g = self.gain;
        let ab = a * b;
        let sign = if root > from { 1.0 } else { -1.0 };
        let span = math::sqrt((root - from).abs());
        let limit = 2.0 / math::sqrt((g * b * math::sin(ab * root)).abs());
        let f = |v: f64| {
            let d = sign * v * v;
            // V(root) − V(root − d) for V = g cos(ab θ°)/a
            let drop = -2.0 * g / a * math::sin(ab * (root - 0.5 * d)) * math::sin(0.5 * ab * d);
            let gap = drop;
            if gap <= 0.0 || v == 0.0 {
                limit
            } else {
                2.0 * v / math::sqrt(gap)
            }
        };
        quadrature::integrate(f, 0.0, span, 1e-14, 1e-13).0
    }

    /// Level curves `θ̇° = ±√(2(ℍ − g cos_{Ω°} θ°))` over one polar period
    /// centred at the stable equilibrium.
    pub fn phase_portrait(&self, levels: &[f64], samples: usize) -> Vec<PortraitCurve> {
        let samples = samples.max(3);
        let b = self.bottom();
        let pp = self.trig.polar_period();
        levels
            .iter()
            .map(|&h| {
                let regime = self.classify(h).regime;
                let speed = |x: f64| math::sqrt((2.0 * (h - self.potential(x))).max(0.0));
                let grid = |lo: f64, hi: f64| {
                    (0..samples).map(move |i| lo + (hi - lo) * i as f64 / (samples - 1) as f64)
                };
                let branches = match regime {
                    Regime::Empty => Vec::new(),
                    Regime::BottomFixed => vec![vec![(b, 0.0)]],
                    Regime::Oscillation => {
                        let (r1, r2) = self.turning_points(h).unwrap_or((b, b));
                        let mut loop_: Vec<(f64, f64)> = grid(r1, r2).map(|x| (x, speed(x))).collect();
                        loop_.extend(grid(r1, r2).rev().skip(1).map(|x| (x, -speed(x))));
                        vec![loop_]
                    }
                    Regime::Separatrix | Regime::Rotation => {
                        let (lo, hi) = (b - 0.5 * pp, b + 0.5 * pp);
                        vec![
                            grid(lo, hi).map(|x| (x, speed(x))).collect(),
                            grid(lo, hi).map(|x| (x, -speed(x))).collect(),
                        ]
                    }
                };
                PortraitCurve { h, regime, branches }
            })
            .collect()
    }

    /// Simulates over `[t₀, t₀ + duration]`, sampling on a uniform grid of
    /// `samples` points plus every event.
    pub fn simulate(
        &self,
        initial: PendulumState,
        duration: f64,
        policy: Option<SeparatrixPolicy>,
        samples: usize,
    ) -> Result<PendulumTrajectory> {
        self.simulate_with(initial, duration, policy, samples, &NoPassenger, &[])
    }

    pub fn simulate_with(
        &self,
        initial: PendulumState,
        duration: f64,
        policy: Option<SeparatrixPolicy>,
        samples: usize,
        passenger: &dyn Passenger,
        x0: &[f64],
    ) -> Result<PendulumTrajectory> {
        if !(duration > 0.0) || !initial.theta_polar.is_finite() || !initial.omega.is_finite() {
            return Err(Error::Domain("duration must be positive and the state finite"));
        }
        if x0.len() != passenger.dim() {
            return Err(Error::Domain("passenger state has the wrong dimension"));
        }
        match self.trig.polar_chain() {
            Some(_) => self.run_exact(initial, duration, policy, samples, passenger, x0),
            None => self.run_adaptive(initial, duration, samples, passenger, x0),
        }
    }

    /// Control and representative angle at a polar angle, for smooth bodies.
    fn control_at(&self, theta_polar: f64) -> (f64, Vec2) {
        let th = self.trig.polar_correspondence(theta_polar).mid();
        (th, self.trig.cos_sin(th))
    }

    fn run_exact(
        &self,
        initial: PendulumState,
        duration: f64,
        policy: Option<SeparatrixPolicy>,
        samples: usize,
        passenger: &dyn Passenger,
        x0: &[f64],
    ) -> Result<PendulumTrajectory> {
        let c = self.trig.polar_chain().expect("polygonal body");
        let g = self.gain;
        let h0 = self.energy(&initial);
        let scale = c.points.iter().map(|q| q.x.abs()).fold(0.0, f64::max);
        let e_tol = 64.0 * f64::EPSILON * h0.abs().max(g * scale).max(1.0);

        let t0 = initial.t;
        let t_end = t0 + duration;
        let n = samples.max(2);
        let grid_at = |i: usize| t0 + duration * i as f64 / (n - 1) as f64;
        let mut gi = 0usize;

        let mut out = PendulumTrajectory {
            samples: Vec::new(),
            switch_times: Vec::new(),
            dwell_events: Vec::new(),
            energy: h0,
            exact: true,
        };

        let mut t = t0;
        let mut th = initial.theta_polar;
        let mut w = initial.omega;
        let mut x = x0.to_vec();
        let mut edge = c.edge_of(th);
        let mut vertex = c.vertex_at(th, 64.0 * f64::EPSILON * th.abs().max(1.0));
        if let Some(v) = vertex {
            th = c.angle(v);
        }
        let mut arrival: Option<Direction> = None;
        let mut forced: Option<Direction> = None;
        let mut pending = EventKind::Start;
        let mut last_u: Option<Vec2> = None;
        let mut guard: u64 = 0;

        loop {
            guard += 1;
            if guard > 100_000_000 {
                return Err(Error::StepUnderflow { t, theta_polar: th, omega: w });
            }
            // Decide the next arc.
            let mut dwell: Option<Option<f64>> = None;
            let arc = if let Some(v) = vertex.filter(|_| w == 0.0 && forced.is_none()) {
                let a_left = g * c.normal(v - 1).y;
                let a_right = g * c.normal(v).y;
                let inc = a_right > 0.0;
                let dec = a_left < 0.0;
                let stay = a_left * a_right <= 0.0;
                if stay && (inc || dec) {
                    let choice = policy.ok_or(Error::PolicyRequired { t, theta_polar: th })?;
                    match choice {
                        SeparatrixPolicy::StayForever => {
                            dwell = Some(None);
                        }
                        SeparatrixPolicy::Dwell(d) => {
                            let pref = arrival.unwrap_or(Direction::Increasing);
                            let ok = |d: Direction| if d == Direction::Increasing { inc } else { dec };
                            let other = if pref == Direction::Increasing {
                                Direction::Decreasing
                            } else {
                                Direction::Increasing
                            };
                            forced = Some(if ok(pref) { pref } else { other });
                            dwell = Some(Some(d.max(0.0)));
                        }
                        SeparatrixPolicy::ImmediateExit(d) => {
                            let ok = if d == Direction::Increasing { inc } else { dec };
                            if !ok {
                                return Err(Error::ExitUnavailable(d));
                            }
                            forced = Some(d);
                        }
                    }
                    match dwell {
                        Some(len) => Some(self.rest_arc(c, v, th, len.unwrap_or(f64::INFINITY), EventKind::DwellEnd)),
                        None => None,
                    }
                } else if stay {
                    Some(self.rest_arc(c, v, th, f64::INFINITY, EventKind::End))
                } else {
                    forced = Some(if inc { Direction::Increasing } else { Direction::Decreasing });
                    None
                }
            } else {
                None
            };
            let arc = match arc {
                Some(a) => a,
                None => {
                    let dir = match (forced.take(), vertex) {
                        (Some(d), _) => d,
                        _ if w > 0.0 => Direction::Increasing,
                        _ if w < 0.0 => Direction::Decreasing,
                        _ => {
                            let a = g * c.normal(edge).y;
                            if a > 0.0 {
                                Direction::Increasing
                            } else if a < 0.0 {
                                Direction::Decreasing
                            } else {
                                // flat potential: an interval of equilibria
                                let rest = Arc {
                                    len: f64::INFINITY,
                                    accel: 0.0,
                                    u: c.normal(edge),
                                    theta: c.dual_angle(edge),
                                    end_theta: th,
                                    end_omega: 0.0,
                                    end_vertex: None,
                                    end_edge: edge,
                                    end_kind: EventKind::End,
                                };
                                self.play(&mut out, rest, &mut t, t_end, &mut th, &mut w, &mut x, pending, &mut gi, n, &grid_at, passenger, &mut last_u);
                                break;
                            }
                        }
                    };
                    if let Some(v) = vertex {
                        edge = if dir == Direction::Increasing { v } else { v - 1 };
                    }
                    self.edge_arc(c, edge, th, w, dir, h0, e_tol)
                }
            };
            if let Some(len) = dwell {
                out.dwell_events.push(DwellEvent {
                    start: t,
                    end: len.map(|d| t + d),
                    theta_polar: th,
                });
                if pending != EventKind::Start {
                    pending = EventKind::DwellStart;
                }
            }
            let done = self.play(&mut out, arc, &mut t, t_end, &mut th, &mut w, &mut x, pending, &mut gi, n, &grid_at, passenger, &mut last_u);
            if done {
                break;
            }
            pending = arc.end_kind;
            if pending == EventKind::Vertex || pending == EventKind::Turn {
                arrival = Some(if arc_dir(arc) > 0.0 {
                    Direction::Increasing
                } else {
                    Direction::Decreasing
                });
            }
            edge = arc.end_edge;
            vertex = arc.end_vertex;
            th = arc.end_theta;
            w = arc.end_omega;
            if arc.end_vertex.is_none() {
                arrival = None;
            }
        }
        Ok(out)
    }

    /// The arc resting at polar vertex `v`: the control is the point of the
    /// dual edge of Ω where `sin_Ω` vanishes.
    fn rest_arc(&self, c: &AngleChain, v: i64, th: f64, len: f64, end_kind: EventKind) -> Arc {
        let (p, q) = (c.normal(v - 1), c.normal(v));
        let (dp, dq) = (c.dual_angle(v - 1), c.dual_angle(v));
        let lambda = if p.y == q.y { 0.5 } else { (p.y / (p.y - q.y)).clamp(0.0, 1.0) };
        let u = Vec2::new(p.x + lambda * (q.x - p.x), p.y + lambda * (q.y - p.y));
        Arc {
            len,
            accel: 0.0,
            u,
            theta: dp + lambda * (dq - dp),
            end_theta: th,
            end_omega: 0.0,
            end_vertex: Some(v),
            end_edge: v,
            end_kind,
        }
    }

    /// Motion along polar edge `j` from `th` with speed `w` in direction `dir`.
    #[allow(clippy::too_many_arguments)]
    fn edge_arc(&self, c: &AngleChain, j: i64, th: f64, w: f64, dir: Direction, h0: f64, e_tol: f64) -> Arc {
        let g = self.gain;
        let a = g * c.normal(j).y;
        let u = c.normal(j);
        let theta = c.dual_angle(j);
        let base = Arc {
            len: 0.0,
            accel: a,
            u,
            theta,
            end_theta: th,
            end_omega: 0.0,
            end_vertex: None,
            end_edge: j,
            end_kind: EventKind::Turn,
        };
        let (target, tv, sign) = match dir {
            Direction::Increasing => (c.angle(j + 1), j + 1, 1.0),
            Direction::Decreasing => (c.angle(j), j, -1.0),
        };
        let dist = ((target - th) * sign).max(0.0);
        let speed = w.abs();
        let f = h0 - g * c.point(tv).x;
        // decelerating towards the target
        if sign * a < 0.0 && f <= e_tol {
            if f.abs() <= e_tol {
                let len = if speed > 0.0 { 2.0 * dist / speed } else { 0.0 };
                return Arc {
                    len,
                    end_theta: target,
                    end_vertex: Some(tv),
                    end_kind: EventKind::Turn,
                    ..base
                };
            }
            let len = speed / a.abs();
            let reach = (0.5 * speed * speed / a.abs()).min(dist);
            return Arc {
                len,
                end_theta: th + sign * reach,
                ..base
            };
        }
        let v_end = math::sqrt(2.0 * f.max(0.0));
        let len = if speed + v_end > 0.0 { 2.0 * dist / (speed + v_end) } else { 0.0 };
        Arc {
            len,
            end_theta: target,
            end_omega: sign * v_end,
            end_vertex: Some(tv),
            end_kind: EventKind::Vertex,
            ..base
        }
    }

    /// Emits samples along `arc` starting at the current state. Returns `true`
    /// once the end time is reached.
    #[allow(clippy::too_many_arguments)]
    fn play(
        &self,
        out: &mut PendulumTrajectory,
        arc: Arc,
        t: &mut f64,
        t_end: f64,
        th: &mut f64,
        w: &mut f64,
        x: &mut Vec<f64>,
        pending: EventKind,
        gi: &mut usize,
        n: usize,
        grid_at: &dyn Fn(usize) -> f64,
        passenger: &dyn Passenger,
        last_u: &mut Option<Vec2>,
    ) -> bool {
        if let Some(prev) = *last_u {
            if prev != arc.u {
                out.switch_times.push(*t);
            }
        }
        *last_u = Some(arc.u);
        let (t_start, th0, w0) = (*t, *th, *w);
        let state_at = |s: f64, x: &[f64]| -> (f64, f64, Vec<f64>) {
            let mut y = x.to_vec();
            passenger.advance(arc.u, s, &mut y);
            (th0 + w0 * s + 0.5 * arc.accel * s * s, w0 + arc.accel * s, y)
        };
        let emit = |out: &mut PendulumTrajectory, tt: f64, a: f64, b: f64, st: Vec<f64>, kind: EventKind| {
            out.samples.push(Sample {
                t: tt,
                theta_polar: a,
                omega: b,
                theta: arc.theta,
                u: arc.u,
                energy: 0.5 * b * b + self.potential(a),
                event: kind,
                state: st,
            });
        };
        emit(out, t_start, th0, w0, x.clone(), pending);
        let arc_end = t_start + arc.len;
        while *gi < n - 1 && grid_at(*gi) < arc_end.min(t_end) {
            let tg = grid_at(*gi);
            if tg > t_start {
                let (a, b, st) = state_at(tg - t_start, x);
                emit(out, tg, a, b, st, EventKind::Grid);
            }
            *gi += 1;
        }
        if arc_end >= t_end {
            let (a, b, st) = state_at(t_end - t_start, x);
            emit(out, t_end, a, b, st, EventKind::End);
            *t = t_end;
            return true;
        }
        passenger.advance(arc.u, arc.len, x);
        *t = arc_end;
        false
    }

    fn run_adaptive(
        &self,
        initial: PendulumState,
        duration: f64,
        samples: usize,
        passenger: &dyn Passenger,
        x0: &[f64],
    ) -> Result<PendulumTrajectory> {
        let tol = *self.trig.tolerances();
        let g = self.gain;
        let dim = 2 + passenger.dim();
        let rhs = |_t: f64, y: &[f64], dy: &mut [f64]| {
            let (_, u) = self.control_at(y[0]);
            dy[0] = y[1];
            dy[1] = g * u.y;
            passenger.rhs(u, &y[2..], &mut dy[2..]);
        };
        let mut dopri = Dopri::new(dim, tol.ode_rel, tol.ode_abs, rhs);
        let mut y = vec![0.0; dim];
        y[0] = initial.theta_polar;
        y[1] = initial.omega;
        y[2..].copy_from_slice(x0);
        let h0 = self.energy(&initial);
        let mut out = PendulumTrajectory {
            samples: Vec::new(),
            switch_times: Vec::new(),
            dwell_events: Vec::new(),
            energy: h0,
            exact: false,
        };
        let push = |out: &mut PendulumTrajectory, t: f64, y: &[f64], kind: EventKind| {
            let (theta, u) = self.control_at(y[0]);
            out.samples.push(Sample {
                t,
                theta_polar: y[0],
                omega: y[1],
                theta,
                u,
                energy: 0.5 * y[1] * y[1] + self.potential(y[0]),
                event: kind,
                state: y[2..].to_vec(),
            });
        };
        let t0 = initial.t;
        let n = samples.max(2);
        let (lo, hi) = self.polar_x_range();
        let stiff = (g * lo.abs().max(hi.abs())).max(1e-6);
        let max_gap = 0.1 / math::sqrt(stiff);
        let mut h = 1e-3;
        let mut t = t0;
        push(&mut out, t, &y, EventKind::Start);
        for i in 1..n {
            let target = t0 + duration * i as f64 / (n - 1) as f64;
            while t < target {
                let next = (t + max_gap).min(target);
                let before = y.clone();
                let fail = || Error::StepUnderflow { t, theta_polar: before[0], omega: before[1] };
                h = dopri.advance(t, next, &mut y, h).ok_or_else(fail)?;
                if before[1] != 0.0 && y[1] != 0.0 && before[1].signum() != y[1].signum() {
                    // locate ω = 0 by bisection on the step end time
                    let (mut a, mut b) = (t, next);
                    let mut ya = before.clone();
                    while b - a > tol.event_time * (1.0 + b.abs()) {
                        let m = 0.5 * (a + b);
                        let mut ym = ya.clone();
                        dopri.advance(a, m, &mut ym, (m - a).min(h)).ok_or_else(fail)?;
                        if ym[1].signum() == ya[1].signum() && ym[1] != 0.0 {
                            a = m;
                            ya = ym;
                        } else {
                            b = m;
                        }
                    }
                    let mut yt = ya.clone();
                    if b > a {
                        dopri.advance(a, b, &mut yt, b - a).ok_or_else(fail)?;
                    }
                    yt[1] = 0.0;
                    push(&mut out, b, &yt, EventKind::Turn);
                }
                t = next;
            }
            let kind = if i == n - 1 { EventKind::End } else { EventKind::Grid };
            push(&mut out, t, &y, kind);
        }
        Ok(out)
    }
}

fn arc_dir(arc: Arc) -> f64 {
    // direction of travel at the end of an arc
    if arc.end_omega != 0.0 {
        arc.end_omega
    } else {
        -arc.accel
    }
}

fn argmin(it: impl Iterator<Item = f64>) -> usize {
    let mut best = (0usize, f64::INFINITY);
    for (i, v) in it.enumerate() {
        if v < best.1 {
            best = (i, v);
        }
    }
    best.0
}

/// Root of a function with a sign change on `[a, b]`.
fn bisect(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if (f(m) > 0.0) == (fa > 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// `ℍ` of a state for the unit-gain pendulum of `body`.
pub fn energy(body: &ConvexBody, state: &PendulumState) -> Result<f64> {
    Ok(Pendulum::new(body)?.energy(state))
}

pub fn classify(body: &ConvexBody, h: f64) -> Result<EnergyLevel> {
    Ok(Pendulum::new(body)?.classify(h))
}

pub fn period(body: &ConvexBody, h: f64) -> Result<Option<f64>> {
    Pendulum::new(body)?.period(h)
}

pub fn simulate(
    body: &ConvexBody,
    initial: PendulumState,
    duration: f64,
    policy: Option<SeparatrixPolicy>,
    samples: usize,
) -> Result<PendulumTrajectory> {
    Pendulum::new(body)?.simulate(initial, duration, policy, samples)
}

pub fn phase_portrait(body: &ConvexBody, levels: &[f64], samples: usize) -> Result<Vec<PortraitCurve>> {
    Ok(Pendulum::new(body)?.phase_portrait(levels, samples))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::math::{PI, TAU};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn uniform(seed: u64) -> impl FnMut() -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        move || rng.random::<f64>()
    }

    fn square() -> Pendulum {
        Pendulum::new(&ConvexBody::square(1.0)).unwrap()
    }

    fn diamond() -> Pendulum {
        Pendulum::new(&ConvexBody::diamond(1.0)).unwrap()
    }

    fn circle() -> Pendulum {
        Pendulum::new(&ConvexBody::unit_disc()).unwrap()
    }

    /// Complete elliptic integral of the first kind by the arithmetic-geometric mean.
    fn ellip_k(k: f64) -> f64 {
        let (mut a, mut b) = (1.0, math::sqrt(1.0 - k * k));
        for _ in 0..40 {
            let (x, y) = (0.5 * (a + b), math::sqrt(a * b));
            a = x;
            b = y;
        }
        PI / (2.0 * a)
    }

    #[test]
    fn energy_examples() {
        assert!((circle().energy(&PendulumState::new(0.0, 0.0)) - 1.0).abs() < 1e-15);
        let sq = square();
        assert_eq!(sq.energy(&PendulumState::new(0.0, 0.0)), 1.0);
        assert_eq!(sq.classify(1.0).h_plus, 1.0);
        let b = sq.bottom();
        assert_eq!(sq.energy(&PendulumState::new(b, 0.0)), sq.classify(0.0).h_minus);
    }

    #[test]
    fn classify_examples() {
        let c = circle().classify(0.5);
        assert_eq!(c.regime, Regime::Oscillation);
        assert!((c.h_minus + 1.0).abs() < 1e-15 && (c.h_plus - 1.0).abs() < 1e-15);
        let d = diamond().classify(1.0);
        assert_eq!(d.regime, Regime::Separatrix);
        assert!(d.top_is_interval && d.bottom_is_interval);
        let s = square().classify(1.5);
        assert_eq!(s.regime, Regime::Rotation);
        assert!(!s.top_is_interval);
        for p in [square(), diamond()] {
            assert_eq!(p.classify(-1.5).regime, Regime::Empty);
            assert_eq!(p.classify(-1.0).regime, Regime::BottomFixed);
            assert_eq!(p.classify(0.3).regime, Regime::Oscillation);
            assert_eq!(p.classify(1.0).regime, Regime::Separatrix);
            assert_eq!(p.classify(1.0001).regime, Regime::Rotation);
        }
    }

    #[test]
    fn circle_periods_match_elliptic_integrals() {
        let p = circle();
        let tau = p.period(-1.0 + 1e-4).unwrap().unwrap();
        assert!((tau - TAU).abs() / TAU < 1e-2);
        // ℍ = ½ω² − cos φ with φ = θ − π; amplitude φ₀ = acos(−ℍ)
        for h in [-0.9, -0.3, 0.5, 0.95] {
            let k = math::sin(0.5 * math::acos(-h));
            let want = 4.0 * ellip_k(k);
            let got = p.period(h).unwrap().unwrap();
            assert!((got - want).abs() / want < 1e-9, "h={h}: {got} vs {want}");
        }
        // (1/√2)∫ dθ/√(ℍ − cos θ) = (1/√2)·4K(√(2/(ℍ+1)))/√(ℍ+1)
        for h in [1.5, 3.0] {
            let want = 4.0 * ellip_k(math::sqrt(2.0 / (h + 1.0))) / math::sqrt(h + 1.0) / math::sqrt(2.0);
            let got = p.period(h).unwrap().unwrap();
            assert!((got - want).abs() / want < 1e-9, "h={h}: {got} vs {want}");
        }
        assert_eq!(p.period(1.0), Err(Error::PeriodUndefined));
        assert_eq!(p.period(-2.0), Ok(None));
    }

    #[test]
    fn square_periods_closed_form() {
        // Ω° is the diamond; on ℍ = 0 the well is |p| + |q| ≤ 1 with p ≤ 0.
        // Each quarter from the bottom vertex: ∫₀¹ dp / √(p) along θ° with unit rate
        let p = square();
        let tau = p.period(0.0).unwrap().unwrap();
        assert!((tau - 4.0 * math::sqrt(2.0)).abs() < 1e-12, "{tau}");
        let (l, r) = p.turning_points(0.0).unwrap();
        assert!((l - 2.0).abs() < 1e-12 || (r - l - 2.0).abs() < 1e-12);
        assert_eq!(p.period(1.0), Err(Error::PeriodUndefined));
        assert_eq!(p.period(-1.0), Ok(None));
    }

    fn turn_times(tr: &PendulumTrajectory) -> Vec<f64> {
        tr.samples.iter().filter(|s| s.event == EventKind::Turn).map(|s| s.t).collect()
    }

    #[test]
    fn square_oscillation_period_matches_turnarounds() {
        let p = square();
        let b = p.bottom();
        let start = PendulumState::new(b, math::sqrt(2.0));
        let tau = p.period(0.0).unwrap().unwrap();
        let tr = p.simulate(start, 5.0 * tau, None, 10).unwrap();
        let turns = turn_times(&tr);
        assert!(turns.len() >= 8);
        for w in turns.windows(3) {
            assert!((w[2] - w[0] - tau).abs() < 1e-8);
        }
    }

    #[test]
    fn square_parabolic_arcs() {
        let p = square();
        // ℍ = 0 from θ° = 1 (vertex (0,1) of the diamond) at rest
        let tr = p.simulate(PendulumState::new(1.0, 0.0), 20.0, None, 400).unwrap();
        for s in &tr.samples {
            assert!(s.energy.abs() < 1e-12);
            // V = cos°: |cos°θ°| = ½ω² on the well, so the arcs are θ° = ±½ω² + const
            let acc = s.u.y;
            assert!(acc.abs() == 1.0);
        }
        assert!(tr.switch_times.len() > 2);
    }

    #[test]
    fn square_energy_drift_over_100_periods() {
        let p = square();
        let start = PendulumState::new(0.7, 0.4);
        let h = p.energy(&start);
        let tau = p.period(h).unwrap().unwrap();
        let tr = p.simulate(start, 100.0 * tau, None, 2000).unwrap();
        assert!(tr.max_energy_drift() <= 1e-10, "{}", tr.max_energy_drift());
    }

    #[test]
    fn ellipse_drift_and_period() {
        let p = Pendulum::new(&ConvexBody::ellipse(2.0, 0.5)).unwrap();
        let start = PendulumState::new(p.bottom() + 0.8, 0.1);
        let h = p.energy(&start);
        let tau = p.period(h).unwrap().unwrap();
        let tr = p.simulate(start, 10.0 * tau, None, 200).unwrap();
        assert!(!tr.exact);
        assert!(tr.max_energy_drift() <= 1e-6, "{}", tr.max_energy_drift());
        let turns = turn_times(&tr);
        assert!(turns.len() >= 18);
        for w in turns.windows(3) {
            assert!((w[2] - w[0] - tau).abs() / tau < 1e-6, "{} vs {tau}", w[2] - w[0]);
        }
    }

    fn reversal_error(p: &Pendulum, s: PendulumState, t: f64) -> f64 {
        let fw = p.simulate(s, t, None, 2).unwrap();
        let end = fw.samples.last().unwrap();
        let back = p.simulate(PendulumState::new(end.theta_polar, -end.omega), t, None, 2).unwrap();
        let last = back.samples.last().unwrap();
        (last.theta_polar - s.theta_polar).abs().max((last.omega + s.omega).abs())
    }

    #[test]
    fn time_reversal() {
        assert!(reversal_error(&square(), PendulumState::new(0.3, 1.1), 17.0) < 1e-9);
        assert!(reversal_error(&square(), PendulumState::new(0.3, 2.5), 17.0) < 1e-9);
        let tol = crate::Tolerances {
            ode_rel: 1e-12,
            ode_abs: 1e-14,
            ..Default::default()
        };
        let e = Pendulum::from_trig(Trig::with_tolerances(&ConvexBody::ellipse(1.5, 0.8), tol).unwrap(), 1.0);
        assert!(reversal_error(&e, PendulumState::new(0.3, 0.9), 7.0) < 1e-9);
    }

    #[test]
    fn separatrix_needs_policy() {
        let p = square();
        // bottom vertex (−1,0) at θ° = 2, ℍ = 2 − 1 = 1
        let s = PendulumState::new(2.0, math::sqrt(4.0));
        assert_eq!(p.energy(&s), 1.0);
        match p.simulate(s, 10.0, None, 10) {
            Err(Error::PolicyRequired { theta_polar, .. }) => assert_eq!(theta_polar, 4.0),
            other => panic!("{other:?}"),
        }
        let stay = p.simulate(s, 10.0, Some(SeparatrixPolicy::StayForever), 10).unwrap();
        assert_eq!(stay.dwell_events.len(), 1);
        assert_eq!(stay.dwell_events[0].end, None);
        let last = stay.samples.last().unwrap();
        assert_eq!((last.theta_polar, last.omega), (4.0, 0.0));
        // arrival takes 2·(distance)/(speed) on each of the two edges
        let arrive = stay.dwell_events[0].start;
        assert!((arrive - (2.0 / (2.0 + math::sqrt(2.0)) + 2.0 / math::sqrt(2.0))).abs() < 1e-12);
        assert_eq!(last.u, Vec2::new(1.0, 0.0));

        let dwell = p.simulate(s, 10.0, Some(SeparatrixPolicy::Dwell(1.5)), 10);
        let dwell = dwell.unwrap();
        assert!(dwell.dwell_events.len() >= 2);
        assert!((dwell.dwell_events[0].end.unwrap() - arrive - 1.5).abs() < 1e-12);
        assert!(dwell.max_energy_drift() < 1e-12);

        let out = p.simulate(s, 10.0, Some(SeparatrixPolicy::ImmediateExit(Direction::Decreasing)), 10);
        assert!(out.unwrap().samples.iter().any(|x| x.omega < 0.0));
    }

    #[test]
    fn vertical_top_edge_only_allows_one_exit() {
        let p = diamond();
        let b = p.bottom();
        let s = PendulumState::new(b, 2.0);
        assert!((p.energy(&s) - 1.0).abs() < 1e-15);
        assert!(matches!(p.simulate(s, 10.0, None, 10), Err(Error::PolicyRequired { .. })));
        let r = p.simulate(s, 10.0, Some(SeparatrixPolicy::ImmediateExit(Direction::Increasing)), 10);
        assert_eq!(r, Err(Error::ExitUnavailable(Direction::Increasing)));
        let back = p.simulate(s, 10.0, Some(SeparatrixPolicy::Dwell(0.5)), 10).unwrap();
        assert!(back.samples.iter().any(|x| x.omega < 0.0));
    }

    #[test]
    fn bottom_is_a_fixed_point() {
        let p = square();
        let tr = p.simulate(PendulumState::new(p.bottom(), 0.0), 3.0, None, 4).unwrap();
        assert!(tr.samples.iter().all(|s| s.theta_polar == p.bottom() && s.omega == 0.0));
        let d = diamond();
        let mid = [d.bottom() - 0.25, d.bottom() + 0.25]
            .into_iter()
            .find(|&x| d.trig().polar_cos_sin(x).x == -1.0)
            .unwrap();
        let tr = d.simulate(PendulumState::new(mid, 0.0), 3.0, None, 4).unwrap();
        assert!(tr.samples.iter().all(|s| s.theta_polar == mid && s.omega == 0.0));
    }

    #[test]
    fn rotation_speed_bound() {
        let p = square();
        let s = PendulumState::new(0.2, 1.7);
        let h = p.energy(&s);
        let bound = math::sqrt(2.0 * (h - 1.0)) - 1e-9;
        let tr = p.simulate(s, 40.0, None, 500).unwrap();
        assert!(tr.samples.iter().all(|x| x.omega.abs() >= bound));
    }

    #[test]
    fn turning_points_solve_the_level_equation() {
        let p = Pendulum::new(&gallery::regular(7, 0.3)).unwrap();
        let s = PendulumState::new(p.bottom() + 0.1, 0.9);
        let h = p.energy(&s);
        let tr = p.simulate(s, 30.0, None, 50).unwrap();
        let turns: Vec<_> = tr.samples.iter().filter(|x| x.event == EventKind::Turn).collect();
        assert!(!turns.is_empty());
        let (l, r) = p.turning_points(h).unwrap();
        let pp = p.trig().polar_period();
        for t in turns {
            assert_eq!(t.omega, 0.0);
            assert!((p.potential(t.theta_polar) - h).abs() < 1e-12);
            let near = |a: f64| {
                let d = (t.theta_polar - a) / pp;
                (d - math::round(d)).abs() * pp < 1e-9
            };
            assert!(near(l) || near(r));
        }
    }

    #[test]
    fn portraits() {
        let p = circle();
        let curves = p.phase_portrait(&[-2.0, -1.0, -0.5, 1.0, 2.0], 65);
        let regimes: Vec<_> = curves.iter().map(|c| c.regime).collect();
        assert_eq!(
            regimes,
            [Regime::Empty, Regime::BottomFixed, Regime::Oscillation, Regime::Separatrix, Regime::Rotation]
        );
        assert!(curves[0].branches.is_empty());
        assert_eq!(curves[2].branches.len(), 1);
        assert_eq!(curves[4].branches.len(), 2);
        for c in &curves[2..] {
            for &(x, w) in c.branches.iter().flatten() {
                let e = 0.5 * w * w + p.potential(x);
                assert!((e - c.h).abs() < 1e-9 || w == 0.0);
            }
        }
    }

    #[test]
    fn gain_scales_time() {
        let p = Pendulum::from_trig(Trig::new(&ConvexBody::square(1.0)).unwrap(), 4.0);
        let q = square();
        let t1 = p.period(p.gain() * 0.3).unwrap().unwrap();
        let t2 = q.period(0.3).unwrap().unwrap();
        assert!((t1 - 0.5 * t2).abs() < 1e-12);
        let z = Pendulum::from_trig(Trig::new(&ConvexBody::square(1.0)).unwrap(), 0.0);
        assert!((z.period(2.0).unwrap().unwrap() - 2.0).abs() < 1e-15);
        let tr = z.simulate(PendulumState::new(0.5, 2.0), 3.0, None, 4).unwrap();
        assert!((tr.samples.last().unwrap().theta_polar - 6.5).abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn random_polygon_controls_are_piecewise_constant(seed in 0u64..10_000, th in 0.0f64..1.0, w in -2.0f64..2.0) {
            let mut u = uniform(seed);
            let body = gallery::random_polygon(3 + (seed % 8) as usize, &mut u);
            let p = Pendulum::new(&body).unwrap();
            let s = PendulumState::new(th * p.trig().polar_period(), w);
            let level = p.classify(p.energy(&s));
            prop_assume!(matches!(level.regime, Regime::Oscillation | Regime::Rotation));
            let tr = p.simulate(s, 25.0, None, 300).unwrap();
            prop_assert!(tr.max_energy_drift() <= 1e-10);
            let vertices = &p.trig().tables().unwrap().vertices;
            let mut k = 0;
            for x in &tr.samples {
                prop_assert!(vertices.contains(&x.u));
                while k < tr.switch_times.len() && tr.switch_times[k] <= x.t {
                    k += 1;
                }
                // all samples strictly between switches share one control
                if let Some(y) = tr.samples.iter().find(|y| {
                    y.t > x.t && k < tr.switch_times.len() && y.t < tr.switch_times[k]
                }) {
                    prop_assert_eq!(x.u, y.u);
                }
            }
        }
    }
}
