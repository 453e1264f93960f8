//! Extremals of the time-optimal problems `ẋ = f(x, u)`, `u ∈ Ω`, on the
//! Heisenberg, Engel and Cartan groups and in the Grushin and Martinet cases.
//!
//! The adjoint `(h₁, h₂)` runs along `H ∂Ω°` at the polar angle θ° and the
//! control is `u = (cos_Ω θ, sin_Ω θ)` with `θ ↔ θ°`. For Heisenberg and
//! Grushin θ° is linear in time and everything is closed form; for the other
//! three systems θ° solves `θ̈° = ⟨(h₄, h₅), u⟩ / H`, a generalized pendulum.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::body::ConvexBody;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::math::{self, Vec2};
use crate::pendulum::{DwellEvent, EventKind, Passenger, Pendulum, PendulumState, SeparatrixPolicy};
use crate::trig::{self, Trig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum System {
    Heisenberg,
    Grushin,
    Martinet,
    Engel,
    Cartan,
}

impl System {
    pub const ALL: [System; 5] = [
        System::Heisenberg,
        System::Grushin,
        System::Martinet,
        System::Engel,
        System::Cartan,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            System::Heisenberg => "heisenberg",
            System::Grushin => "grushin",
            System::Martinet => "martinet",
            System::Engel => "engel",
            System::Cartan => "cartan",
        }
    }

    /// Names of the state coordinates, in storage order.
    pub fn state_names(&self) -> &'static [&'static str] {
        match self {
            System::Heisenberg => &["x1", "x2", "z"],
            System::Grushin => &["x1", "x2"],
            System::Martinet => &["x1", "x2", "w"],
            System::Engel => &["x1", "x2", "z", "w"],
            System::Cartan => &["x1", "x2", "z", "w1", "w2"],
        }
    }

    pub fn dim(&self) -> usize {
        self.state_names().len()
    }

    /// Whether θ° obeys the pendulum equation.
    pub fn is_pendulum(&self) -> bool {
        matches!(self, System::Martinet | System::Engel | System::Cartan)
    }

    /// `ẋ = f(x, u)`.
    pub fn rhs(&self, u: Vec2, x: &[f64], dx: &mut [f64]) {
        match self {
            System::Grushin => {
                dx[0] = u.x;
                dx[1] = x[0] * u.y;
            }
            _ => {
                dx[0] = u.x;
                dx[1] = u.y;
                let area = 0.5 * (x[0] * u.y - x[1] * u.x);
                let sweep = -0.5 * x[1] * x[1] * u.x;
                match self {
                    System::Heisenberg => dx[2] = area,
                    System::Martinet => dx[2] = sweep,
                    System::Engel => {
                        dx[2] = area;
                        dx[3] = sweep;
                    }
                    System::Cartan => {
                        dx[2] = area;
                        dx[3] = 0.5 * x[0] * x[0] * u.y;
                        dx[4] = sweep;
                    }
                    System::Grushin => unreachable!(),
                }
            }
        }
    }

    /// Exact flow of `ẋ = f(x, u)` over time `s` for a constant control.
    pub fn advance(&self, u: Vec2, s: f64, x: &mut [f64]) {
        let (x1, x2) = (x[0], x[1]);
        // ∫₀ˢ (a + bτ)² dτ
        let sq = |a: f64, b: f64| s * (a * a + a * b * s + b * b * s * s / 3.0);
        x[0] = x1 + u.x * s;
        match self {
            System::Grushin => {
                x[1] = x2 + u.y * (x1 * s + 0.5 * u.x * s * s);
            }
            _ => {
                x[1] = x2 + u.y * s;
                let area = 0.5 * (x1 * u.y - x2 * u.x) * s;
                let sweep = -0.5 * u.x * sq(x2, u.y);
                match self {
                    System::Heisenberg => x[2] += area,
                    System::Martinet => x[2] += sweep,
                    System::Engel => {
                        x[2] += area;
                        x[3] += sweep;
                    }
                    System::Cartan => {
                        x[2] += area;
                        x[3] += 0.5 * u.y * sq(x1, u.x);
                        x[4] += sweep;
                    }
                    System::Grushin => unreachable!(),
                }
            }
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for System {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        System::ALL
            .into_iter()
            .find(|x| x.as_str().eq_ignore_ascii_case(s))
            .ok_or(Error::Domain("unknown system"))
    }
}

/// Initial data of an extremal.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtremalSpec {
    pub system: System,
    pub body: ConvexBody,
    /// Maximum value `H` of the Pontryagin function.
    pub h: f64,
    /// Vertical adjoint: `q` (Heisenberg, Martinet, Engel), `p₂` (Grushin),
    /// `√(h₄² + h₅²)` (Cartan).
    pub q: f64,
    /// Cartan only: `h₄ = −q sin φ₀`, `h₅ = q cos φ₀`.
    pub phi0: f64,
    pub theta_polar0: f64,
    /// Initial `θ̇°` (pendulum systems).
    pub omega0: f64,
    /// Initial state; empty means the origin.
    pub x0: Vec<f64>,
}

impl ExtremalSpec {
    pub fn new(system: System, body: ConvexBody, h: f64, q: f64) -> Self {
        Self {
            system,
            body,
            h,
            q,
            phi0: 0.0,
            theta_polar0: 0.0,
            omega0: 0.0,
            x0: Vec::new(),
        }
    }

    /// `(h₄, h₅)`: the constant vector driving `ḣ₃ = h₄u₁ + h₅u₂`.
    pub fn drive(&self) -> Vec2 {
        match self.system {
            System::Heisenberg | System::Grushin => Vec2::ZERO,
            System::Martinet | System::Engel => Vec2::new(0.0, self.q),
            System::Cartan => Vec2::new(-self.q * math::sin(self.phi0), self.q * math::cos(self.phi0)),
        }
    }

    fn initial_state(&self) -> Result<Vec<f64>> {
        let n = self.system.dim();
        if self.x0.is_empty() {
            Ok(vec![0.0; n])
        } else if self.x0.len() == n && self.x0.iter().all(|v| v.is_finite()) {
            Ok(self.x0.clone())
        } else {
            Err(Error::Domain("initial state has the wrong dimension"))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtremalSample {
    pub t: f64,
    pub theta_polar: f64,
    /// State coordinates named by [`System::state_names`].
    pub x: Vec<f64>,
    pub u: Vec2,
    /// `(h₁, h₂) ∈ H ∂Ω°`.
    pub h12: Vec2,
    /// `h₃`: `q` for Heisenberg, `p₂` for Grushin, `H θ̇°` otherwise.
    pub h3: f64,
    pub event: EventKind,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtremalTrajectory {
    pub system: System,
    pub body: ConvexBody,
    pub hamiltonian: f64,
    /// `(h₄, h₅)`; zero for Heisenberg and Grushin.
    pub drive: Vec2,
    pub samples: Vec<ExtremalSample>,
    pub switch_times: Vec<f64>,
    pub dwell_events: Vec<DwellEvent>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SingularKind {
    /// The adjoint rests at a corner of Ω° and the control may take any value
    /// on the dual edge of Ω.
    CornerEdge,
    /// `H = 0`: abnormal extremals.
    Abnormal,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingularReport {
    pub system: System,
    pub kind: SingularKind,
    /// End points of the admissible control segment.
    pub edge: Option<(Vec2, Vec2)>,
    /// Range of `v` in `u(v) = (Q + v Q^⊥)/|Q|²` for a corner `Q` of Ω°.
    pub parameter_range: Option<(f64, f64)>,
    /// Controls are orthogonal to this vector (`(h₄, h₅)` for Cartan).
    pub orthogonal_to: Option<Vec2>,
}

impl fmt::Display for SingularReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SingularKind::CornerEdge => write!(f, "{}: singular control on an edge of the body", self.system)?,
            SingularKind::Abnormal => write!(f, "{}: H = 0, abnormal extremal", self.system)?,
        }
        if let Some((a, b)) = self.edge {
            write!(f, "; controls on the segment ({}, {}) to ({}, {})", a.x, a.y, b.x, b.y)?;
        }
        if let Some((a, b)) = self.parameter_range {
            write!(f, "; v in [{a}, {b}]")?;
        }
        if let Some(n) = self.orthogonal_to {
            write!(f, "; u orthogonal to ({}, {})", n.x, n.y)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Extremal {
    Trajectory(ExtremalTrajectory),
    Singular(SingularReport),
}

impl Extremal {
    pub fn trajectory(self) -> Option<ExtremalTrajectory> {
        match self {
            Extremal::Trajectory(t) => Some(t),
            Extremal::Singular(_) => None,
        }
    }
}

fn time_grid(t_end: f64, n: usize) -> Result<Vec<f64>> {
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::Domain("duration must be positive"));
    }
    let n = n.max(2);
    Ok((0..n).map(|i| t_end * i as f64 / (n - 1) as f64).collect())
}

/// Control at polar angle θ°, taking the one-sided limit in the direction of motion.
fn control(trig: &Trig, theta_polar: f64, rate: f64) -> Vec2 {
    let c = trig.polar_correspondence(theta_polar);
    let theta = if rate > 0.0 {
        c.hi
    } else if rate < 0.0 {
        c.lo
    } else {
        c.mid()
    };
    trig.cos_sin(theta)
}

/// Times in `(0, t_end)` at which a uniformly moving θ° crosses a polar vertex.
fn crossing_times(trig: &Trig, theta0: f64, rate: f64, t_end: f64) -> Vec<f64> {
    let Some(c) = trig.polar_chain() else {
        return Vec::new();
    };
    if rate == 0.0 {
        return Vec::new();
    }
    let end = theta0 + rate * t_end;
    let (lo, hi) = if rate > 0.0 { (theta0, end) } else { (end, theta0) };
    let mut out = Vec::new();
    let mut j = c.edge_of(lo);
    while c.angle(j) <= hi {
        let a = c.angle(j);
        if a > lo && a < hi {
            out.push((a - theta0) / rate);
        }
        j += 1;
    }
    out.sort_by(f64::total_cmp);
    out
}

fn singular_corner(trig: &Trig, system: System, theta_polar: f64) -> Option<SingularReport> {
    let c = trig.polar_correspondence(theta_polar);
    if c.is_single() {
        return None;
    }
    let (a, b) = (trig.cos_sin(c.lo), trig.cos_sin(c.hi));
    let q = trig.polar_cos_sin(theta_polar);
    let n = q.perp();
    let (va, vb) = (a.dot(n), b.dot(n));
    Some(SingularReport {
        system,
        kind: SingularKind::CornerEdge,
        edge: Some((a, b)),
        parameter_range: Some((va.min(vb), va.max(vb))),
        orthogonal_to: None,
    })
}

/// Classifies configurations that admit no unique extremal.
pub fn detect_singular(spec: &ExtremalSpec) -> Result<Option<SingularReport>> {
    detect_singular_with(spec, &Tolerances::default())
}

pub fn detect_singular_with(spec: &ExtremalSpec, tol: &Tolerances) -> Result<Option<SingularReport>> {
    let trig = Trig::with_tolerances(&spec.body, *tol)?;
    if spec.system.is_pendulum() {
        if spec.h == 0.0 {
            let g = spec.drive();
            let edge = if g == Vec2::ZERO {
                None
            } else {
                let d = g.perp();
                Some((d / trig.gauge(d), -d / trig.gauge(-d)))
            };
            return Ok(Some(SingularReport {
                system: spec.system,
                kind: SingularKind::Abnormal,
                edge,
                parameter_range: None,
                orthogonal_to: (spec.system == System::Cartan).then_some(g),
            }));
        }
        return Ok(None);
    }
    if spec.q.abs() < tol.q_switch * spec.h.abs() || spec.q == 0.0 {
        return Ok(singular_corner(&trig, spec.system, spec.theta_polar0));
    }
    Ok(None)
}

fn check_h(spec: &ExtremalSpec) -> Result<()> {
    if !(spec.h > 0.0) || !spec.h.is_finite() {
        return Err(Error::Domain("H must be positive"));
    }
    if !spec.q.is_finite() || !spec.theta_polar0.is_finite() || !spec.omega0.is_finite() {
        return Err(Error::Domain("adjoint data must be finite"));
    }
    Ok(())
}

/// Heisenberg extremal on `[0, T]`: Kepler motion of θ° with rate `q/H`.
pub fn heisenberg(spec: &ExtremalSpec, t_end: f64, n_samples: usize) -> Result<Extremal> {
    heisenberg_with(spec, t_end, n_samples, &Tolerances::default())
}

pub fn heisenberg_with(spec: &ExtremalSpec, t_end: f64, n_samples: usize, tol: &Tolerances) -> Result<Extremal> {
    check_h(spec)?;
    let trig = Trig::with_tolerances(&spec.body, *tol)?;
    let x0 = spec.initial_state()?;
    let grid = time_grid(t_end, n_samples)?;
    let (h, q, th0) = (spec.h, spec.q, spec.theta_polar0);
    let line = q.abs() < tol.q_switch * h;
    if line {
        if let Some(r) = singular_corner(&trig, System::Heisenberg, th0) {
            return Ok(Extremal::Singular(r));
        }
    }
    let rate = if line { 0.0 } else { q / h };
    let q0 = trig.polar_cos_sin(th0);
    let u0 = control(&trig, th0, 0.0);
    let samples = grid
        .iter()
        .map(|&t| {
            let th = th0 + rate * t;
            let qt = trig.polar_cos_sin(th);
            let (u, dx) = if line {
                (u0, [t * u0.x, t * u0.y, 0.0])
            } else {
                let k = h / q;
                let x1 = k * (qt.y - q0.y);
                let x2 = -k * (qt.x - q0.x);
                let z = 0.5 * k * k * ((th - th0) + qt.x * q0.y - qt.y * q0.x);
                (control(&trig, th, rate), [x1, x2, z])
            };
            // left translation by x0
            let x = vec![
                x0[0] + dx[0],
                x0[1] + dx[1],
                x0[2] + dx[2] + 0.5 * (x0[0] * dx[1] - x0[1] * dx[0]),
            ];
            ExtremalSample {
                t,
                theta_polar: th,
                x,
                u,
                h12: qt * h,
                h3: q,
                event: EventKind::Grid,
            }
        })
        .collect();
    Ok(Extremal::Trajectory(ExtremalTrajectory {
        system: System::Heisenberg,
        body: spec.body.clone(),
        hamiltonian: h,
        drive: Vec2::ZERO,
        samples,
        switch_times: crossing_times(&trig, th0, rate, t_end),
        dwell_events: Vec::new(),
    }))
}

/// First conjugate time `2H 𝕊(Ω°) / |q|` of a Heisenberg extremal.
pub fn heisenberg_conjugate_time(spec: &ExtremalSpec) -> Result<Option<f64>> {
    check_h(spec)?;
    if spec.q == 0.0 {
        return Ok(None);
    }
    let trig = Trig::new(&spec.body)?;
    Ok(Some(spec.h * trig.polar_period() / spec.q.abs()))
}

/// Grushin extremal: `x₁ = (H/p₂) sin_{Ω°}θ°`, so `x₁(0)` is fixed by the adjoint.
pub fn grushin(spec: &ExtremalSpec, t_end: f64, n_samples: usize) -> Result<Extremal> {
    grushin_with(spec, t_end, n_samples, &Tolerances::default())
}

pub fn grushin_with(spec: &ExtremalSpec, t_end: f64, n_samples: usize, tol: &Tolerances) -> Result<Extremal> {
    check_h(spec)?;
    let trig = Trig::with_tolerances(&spec.body, *tol)?;
    let x0 = spec.initial_state()?;
    let grid = time_grid(t_end, n_samples)?;
    let (h, p2, th0) = (spec.h, spec.q, spec.theta_polar0);
    let line = p2.abs() < tol.q_switch * h;
    let q0 = trig.polar_cos_sin(th0);
    if line {
        if q0.y.abs() > tol.geo * q0.norm() {
            return Err(Error::Domain("p2 = 0 requires sin of the polar angle to vanish"));
        }
        if let Some(r) = singular_corner(&trig, System::Grushin, th0) {
            return Ok(Extremal::Singular(r));
        }
    }
    let rate = if line { 0.0 } else { p2 / h };
    let u0 = control(&trig, th0, 0.0);
    let k = h / p2;
    let phase0 = th0 - q0.x * q0.y;
    let samples = grid
        .iter()
        .map(|&t| {
            let th = th0 + rate * t;
            let qt = trig.polar_cos_sin(th);
            let (u, x) = if line {
                let mut x = x0.clone();
                System::Grushin.advance(u0, t, &mut x);
                (u0, x)
            } else {
                let x1 = k * qt.y;
                let x2 = x0[1] + 0.5 * k * k * ((th - qt.x * qt.y) - phase0);
                (control(&trig, th, rate), vec![x1, x2])
            };
            ExtremalSample {
                t,
                theta_polar: th,
                x,
                u,
                h12: qt * h,
                h3: p2,
                event: EventKind::Grid,
            }
        })
        .collect();
    Ok(Extremal::Trajectory(ExtremalTrajectory {
        system: System::Grushin,
        body: spec.body.clone(),
        hamiltonian: h,
        drive: Vec2::ZERO,
        samples,
        switch_times: crossing_times(&trig, th0, rate, t_end),
        dwell_events: Vec::new(),
    }))
}

/// The state of a pendulum system, fed with controls of the rotated body.
struct Rider {
    system: System,
    turn: f64,
}

impl Passenger for Rider {
    fn dim(&self) -> usize {
        self.system.dim()
    }
    fn rhs(&self, u: Vec2, x: &[f64], dx: &mut [f64]) {
        self.system.rhs(u.rotate(self.turn), x, dx);
    }
    fn advance(&self, u: Vec2, s: f64, x: &mut [f64]) {
        self.system.advance(u.rotate(self.turn), s, x);
    }
}

/// Martinet, Engel or Cartan extremal driven by `θ̈° = ⟨(h₄, h₅), u⟩ / H`.
///
/// The body is rotated so that `(h₄, h₅)` points up, the pendulum is solved
/// there, and controls and adjoints are rotated back.
pub fn pendulum_extremal(
    spec: &ExtremalSpec,
    t_end: f64,
    n_samples: usize,
    policy: Option<SeparatrixPolicy>,
) -> Result<Extremal> {
    pendulum_extremal_with(spec, t_end, n_samples, policy, &Tolerances::default())
}

pub fn pendulum_extremal_with(
    spec: &ExtremalSpec,
    t_end: f64,
    n_samples: usize,
    policy: Option<SeparatrixPolicy>,
    tol: &Tolerances,
) -> Result<Extremal> {
    if !spec.system.is_pendulum() {
        return Err(Error::Domain("not a pendulum system"));
    }
    if spec.h == 0.0 {
        if let Some(r) = detect_singular_with(spec, tol)? {
            return Ok(Extremal::Singular(r));
        }
    }
    check_h(spec)?;
    if spec.system == System::Cartan && spec.q < 0.0 {
        return Err(Error::Domain("Cartan q = |(h4, h5)| must be non-negative"));
    }
    let x0 = spec.initial_state()?;
    let h = spec.h;
    let drive = spec.drive();
    let strength = drive.norm();
    let weak = strength < tol.q_switch * h;
    let turn = if weak { 0.0 } else { math::atan2(-drive.x, drive.y) };
    let trig = Trig::with_tolerances(&spec.body, *tol)?;
    let (rtrig, offset) = if turn == 0.0 {
        (trig.clone(), 0.0)
    } else {
        let rotated = trig::rotate_with(&spec.body, -turn, tol)?;
        (Trig::with_tolerances(&rotated, *tol)?, trig.dual().pi_omega_inv(turn))
    };
    let gain = if weak { 0.0 } else { strength / h };
    let pendulum = Pendulum::from_trig(rtrig.clone(), gain);
    let rider = Rider {
        system: spec.system,
        turn,
    };
    let start = PendulumState::new(spec.theta_polar0 - offset, spec.omega0);
    let run = pendulum.simulate_with(start, t_end, policy, n_samples, &rider, &x0)?;
    let samples = run
        .samples
        .into_iter()
        .map(|s| ExtremalSample {
            t: s.t,
            theta_polar: s.theta_polar + offset,
            x: s.state,
            u: s.u.rotate(turn),
            h12: (rtrig.polar_cos_sin(s.theta_polar) * h).rotate(turn),
            h3: h * s.omega,
            event: s.event,
        })
        .collect();
    Ok(Extremal::Trajectory(ExtremalTrajectory {
        system: spec.system,
        body: spec.body.clone(),
        hamiltonian: h,
        drive,
        samples,
        switch_times: run.switch_times,
        dwell_events: run
            .dwell_events
            .into_iter()
            .map(|d| DwellEvent {
                theta_polar: d.theta_polar + offset,
                ..d
            })
            .collect(),
    }))
}

/// Dispatches on the system.
pub fn extremal(spec: &ExtremalSpec, t_end: f64, n_samples: usize, policy: Option<SeparatrixPolicy>) -> Result<Extremal> {
    extremal_with(spec, t_end, n_samples, policy, &Tolerances::default())
}

pub fn extremal_with(
    spec: &ExtremalSpec,
    t_end: f64,
    n_samples: usize,
    policy: Option<SeparatrixPolicy>,
    tol: &Tolerances,
) -> Result<Extremal> {
    match spec.system {
        System::Heisenberg => heisenberg_with(spec, t_end, n_samples, tol),
        System::Grushin => grushin_with(spec, t_end, n_samples, tol),
        _ => pendulum_extremal_with(spec, t_end, n_samples, policy, tol),
    }
}

/// Conserved quantities along an extremal.
#[derive(Clone, Debug, PartialEq)]
pub struct CasimirReport {
    /// `s_Ω(h₁, h₂)` per sample.
    pub hamiltonian: Vec<f64>,
    /// `C = ½h₃² + h₅h₁ − h₄h₂` per sample.
    pub casimir: Vec<f64>,
    pub drive: Vec2,
    pub max_hamiltonian_drift: f64,
    pub max_casimir_drift: f64,
    /// `max |h₁u₁ + h₂u₂ − H|`.
    pub max_pairing_error: f64,
    /// `max |C/H − (½Hθ̇°² + ⟨(h₅, −h₄), Q_θ°⟩)|` for pendulum systems.
    pub max_energy_mismatch: f64,
}

pub fn casimirs(traj: &ExtremalTrajectory) -> Result<CasimirReport> {
    let trig = Trig::new(&traj.body)?;
    let big_h = traj.hamiltonian;
    let g = traj.drive;
    let hs: Vec<f64> = traj.samples.iter().map(|s| traj.body.support(s.h12)).collect();
    let cs: Vec<f64> = traj
        .samples
        .iter()
        .map(|s| 0.5 * s.h3 * s.h3 + g.y * s.h12.x - g.x * s.h12.y)
        .collect();
    let drift = |v: &[f64], base: f64| v.iter().map(|x| (x - base).abs()).fold(0.0, f64::max);
    let pairing = traj
        .samples
        .iter()
        .map(|s| (s.h12.dot(s.u) - big_h).abs())
        .fold(0.0, f64::max);
    let energy = if traj.system.is_pendulum() {
        traj.samples
            .iter()
            .zip(&cs)
            .map(|(s, c)| {
                let omega = s.h3 / big_h;
                let q = trig.polar_cos_sin(s.theta_polar);
                let e = 0.5 * big_h * omega * omega + g.y * q.x - g.x * q.y;
                (c / big_h - e).abs()
            })
            .fold(0.0, f64::max)
    } else {
        0.0
    };
    Ok(CasimirReport {
        max_hamiltonian_drift: drift(&hs, big_h),
        max_casimir_drift: drift(&cs, cs.first().copied().unwrap_or(0.0)),
        hamiltonian: hs,
        casimir: cs,
        drive: g,
        max_pairing_error: pairing,
        max_energy_mismatch: energy,
    })
}
