//! Acceptance criteria, one line of output per criterion.
//!
//! Runs without the libtest harness so the report is always printed; exits
//! non-zero when any criterion fails.

use std::f64::consts::{PI, TAU};
use std::fs;
use std::panic;
use std::process::Command;
use std::time::Instant;

use convex_trig::verify::{control_system, extremal_error};
use convex_trig_core::geodesics::{self, ExtremalTrajectory};
use convex_trig_core::polygon::build_tables;
use convex_trig_core::{
    gallery, ConvexBody, Error, ExtremalSpec, Pendulum, PendulumState, Regime, SeparatrixPolicy, System, Tolerances,
    Trig, Vec2,
};
use convex_trig_oracle::ode_reference;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PYTHAGORAS_TOL: f64 = 1e-9;
const BIPOLAR_TOL: f64 = 1e-9;
const ELLIPSE_TOL: f64 = 1e-8;
const JACOBI_TOL: f64 = 1e-8;
const FD_STEP: f64 = 1e-6;
const FD_TOL: f64 = 1e-4;
const ORACLE_TOL: f64 = 1e-6;
const ORACLE_STEPS: usize = 100_000;
const KEPLER_TOL: f64 = 1e-9;
const CONJUGATE_REL_TOL: f64 = 1e-12;
const EXACT_DRIFT_TOL: f64 = 1e-10;
const ADAPTIVE_DRIFT_TOL: f64 = 1e-6;
const REVERSAL_TOL: f64 = 1e-9;
const CUBIC_FIT_TOL: f64 = 1e-9;
const CONVERGENCE_RATIO: f64 = 8.0;

type Verdict = Result<String, String>;

fn rng(seed: u64) -> impl FnMut() -> f64 {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    move || r.random::<f64>()
}

fn check(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn wrapped(a: f64, b: f64, period: f64) -> f64 {
    let d = (a - b).rem_euclid(period);
    d.min(period - d)
}

fn vertex_angles(trig: &Trig) -> Vec<f64> {
    let c = trig.chain().expect("polygonal body");
    (0..c.len() as i64).map(|j| c.angle(j)).collect()
}

// 1 -------------------------------------------------------------------------

fn identity_residual(trig: &Trig, theta: f64) -> f64 {
    let p = trig.cos_sin(theta);
    let c = trig.correspondence(theta);
    [0.0, 0.25, 0.5, 0.75, 1.0]
        .iter()
        .map(|&f| {
            let q = trig.polar_cos_sin(c.lo + f * (c.hi - c.lo));
            (p.dot(q) - 1.0).abs()
        })
        .fold(0.0, f64::max)
}

fn pythagorean_identity() -> Verdict {
    let mut u = rng(1);
    let (mut worst, mut pairs, mut corners) = (0.0f64, 0usize, 0usize);
    for i in 0..100 {
        let body = gallery::random_polygon(3 + i % 18, &mut u);
        let trig = Trig::new(&body).map_err(|e| e.to_string())?;
        for _ in 0..100 {
            let theta = (u() - 0.5) * 4.0 * trig.period();
            worst = worst.max(identity_residual(&trig, theta));
            pairs += 1;
        }
        for a in vertex_angles(&trig) {
            worst = worst.max(identity_residual(&trig, a));
            corners += 1;
        }
    }
    let polygon_worst = worst;
    for _ in 0..100 {
        let trig = Trig::new(&gallery::random_ellipse(&mut u)).map_err(|e| e.to_string())?;
        for _ in 0..10 {
            worst = worst.max(identity_residual(&trig, (u() - 0.5) * 4.0 * trig.period()));
        }
    }
    check(
        worst <= PYTHAGORAS_TOL,
        format!(
            "{pairs} polygon pairs + {corners} vertex angles (max {polygon_worst:.1e}), 1000 ellipse pairs; max |cos cos° + sin sin° - 1| = {worst:.1e} (limit {PYTHAGORAS_TOL:.0e})"
        ),
    )
}

// 2 -------------------------------------------------------------------------

fn bipolar_round_trip() -> Verdict {
    let mut u = rng(2);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = 5 + (u() * 46.0) as usize;
        let body = gallery::random_polygon(n.min(50), &mut u);
        let back = body.polar().and_then(|p| p.polar()).map_err(|e| e.to_string())?;
        let (a, b) = (body.vertex_list().unwrap(), back.vertex_list().unwrap());
        if a.len() != b.len() {
            return Err(format!("vertex count {} became {}", a.len(), b.len()));
        }
        for v in &a {
            let d = b.iter().map(|w| (*v - *w).norm()).fold(f64::INFINITY, f64::min);
            worst = worst.max(d);
        }
    }
    check(
        worst <= BIPOLAR_TOL,
        format!("100 polygons with 5-50 vertices; max vertex deviation {worst:.1e} (limit {BIPOLAR_TOL:.0e})"),
    )
}

// 3 -------------------------------------------------------------------------

fn square_and_diamond() -> Verdict {
    let square = Trig::new(&ConvexBody::square(1.0)).map_err(|e| e.to_string())?;
    let diamond = Trig::new(&ConvexBody::diamond(1.0)).map_err(|e| e.to_string())?;
    let mut errors = Vec::new();
    if (square.period(), square.polar_period()) != (8.0, 4.0) {
        errors.push(format!("square periods {} {}", square.period(), square.polar_period()));
    }
    if (diamond.period(), diamond.polar_period()) != (4.0, 8.0) {
        errors.push(format!("diamond periods {} {}", diamond.period(), diamond.polar_period()));
    }
    let t = build_tables(&ConvexBody::square(1.0)).map_err(|e| e.to_string())?;
    if t.theta != [1.0, 3.0, 5.0, 7.0] {
        errors.push(format!("vertex angles {:?}", t.theta));
    }
    let corners = [Vec2::new(1.0, 1.0), Vec2::new(-1.0, 1.0), Vec2::new(-1.0, -1.0), Vec2::new(1.0, -1.0)];
    for (k, &c) in corners.iter().enumerate() {
        let theta = 1.0 + 2.0 * k as f64;
        if square.cos_sin(theta) != c {
            errors.push(format!("cos/sin at {theta} = {:?}", square.cos_sin(theta)));
        }
        // linear between vertices
        for f in [0.1, 0.5, 0.9] {
            let want = c.lerp(corners[(k + 1) % 4], f);
            if (square.cos_sin(theta + 2.0 * f) - want).norm() > 1e-15 {
                errors.push(format!("not linear at {}", theta + 2.0 * f));
            }
        }
        // flat step of width 2 at height k + 1, rise of height 1 at the vertex
        for f in [0.01, 1.0, 1.99] {
            let c = square.correspondence(theta + f);
            if !c.is_single() || c.lo != (k + 1) as f64 {
                errors.push(format!("stair at {}: {c:?}", theta + f));
            }
        }
        let rise = square.correspondence(theta);
        if (rise.lo, rise.hi) != (k as f64, (k + 1) as f64) {
            errors.push(format!("rise at {theta}: {rise:?}"));
        }
    }
    let axes = [Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0), Vec2::new(-1.0, 0.0), Vec2::new(0.0, -1.0)];
    for (k, &a) in axes.iter().enumerate() {
        if diamond.cos_sin(k as f64) != a {
            errors.push(format!("diamond cos/sin at {k} = {:?}", diamond.cos_sin(k as f64)));
        }
    }
    if errors.is_empty() {
        Ok("periods 8 and 4 exact; vertex table 1,3,5,7 with values +-1; stair steps width 2, rises 1".into())
    } else {
        Err(errors.join("; "))
    }
}

// 4 -------------------------------------------------------------------------

fn ellipse_closed_form() -> Verdict {
    let mut u = rng(4);
    let (mut worst, mut jacobi) = (0.0f64, 0.0f64);
    for a in [1.0, 2.0] {
        for b in [2.0, 3.0] {
            let trig = Trig::new(&ConvexBody::ellipse(a, b)).map_err(|e| e.to_string())?;
            for _ in 0..1000 {
                let theta = (u() - 0.5) * 2.0 * trig.period();
                let p = trig.cos_sin(theta);
                worst = worst.max((p.x - a * (theta / (a * b)).cos()).abs());
                worst = worst.max((p.y - b * (theta / (a * b)).sin()).abs());
                if a == 1.0 && p.x.abs() > 1e-2 {
                    // k² = 1 − 1/b²
                    let s = 1.0 / b;
                    let lhs = (s * theta).tan();
                    let rhs = s * p.y / p.x;
                    jacobi = jacobi.max((lhs - rhs).abs() / lhs.abs().max(1.0));
                }
            }
        }
    }
    check(
        worst <= ELLIPSE_TOL && jacobi <= JACOBI_TOL,
        format!(
            "max |cos - a cos(θ/ab)| = {worst:.1e} (limit {ELLIPSE_TOL:.0e}); Jacobi amplitude relation {jacobi:.1e} (limit {JACOBI_TOL:.0e})"
        ),
    )
}

// 5 -------------------------------------------------------------------------

fn derivative_error(trig: &Trig, theta: f64) -> f64 {
    let h = FD_STEP;
    let fd = (trig.cos_sin(theta + h) - trig.cos_sin(theta - h)) / (2.0 * h);
    let d = trig.derivative(theta);
    // (cos, sin)' = (−sin°, cos°) at the corresponding polar angle
    let q = trig.polar_cos_sin(trig.correspondence(theta).mid());
    let formula = Vec2::new(-q.y, q.x);
    (fd - d.right).norm().max((fd - d.left).norm()).max((fd - formula).norm())
}

fn derivatives() -> Verdict {
    let mut u = rng(5);
    let mut report = Vec::new();
    let mut ok = true;
    let classes: [(&str, ConvexBody); 3] = [
        ("polygon", gallery::random_polygon(9, &mut u)),
        ("ellipse", gallery::random_ellipse(&mut u)),
        ("radial", gallery::random_radial(360, &mut u)),
    ];
    for (name, body) in classes {
        let trig = Trig::new(&body).map_err(|e| e.to_string())?;
        let corners = trig.chain().map(|_| vertex_angles(&trig)).unwrap_or_default();
        let period = trig.period();
        let (mut worst, mut n) = (0.0f64, 0);
        while n < 1000 {
            let theta = u() * period;
            if corners.iter().any(|&c| wrapped(c, theta, period) < 10.0 * FD_STEP) {
                continue;
            }
            worst = worst.max(derivative_error(&trig, theta));
            n += 1;
        }
        ok &= worst <= FD_TOL;
        report.push(format!("{name} {worst:.1e}"));
    }
    check(ok, format!("1000 smooth points per class; {} (limit {FD_TOL:.0e})", report.join(", ")))
}

// 6, 7 ----------------------------------------------------------------------

fn polar_area(body: &ConvexBody) -> f64 {
    match body {
        ConvexBody::Ellipse { a, b } => PI / (a * b),
        ConvexBody::Polygon { vertices } => {
            let n = vertices.len();
            let q: Vec<(f64, f64)> = (0..n)
                .map(|k| {
                    let (p, r) = (vertices[k], vertices[(k + 1) % n]);
                    let c = p.x * r.y - r.x * p.y;
                    ((r.y - p.y) / c, (p.x - r.x) / c)
                })
                .collect();
            0.5 * (0..n).map(|k| q[k].0 * q[(k + 1) % n].1 - q[(k + 1) % n].0 * q[k].1).sum::<f64>()
        }
        ConvexBody::Radial { .. } => unreachable!(),
    }
}

fn closed_form_vs_oracle(system: System, seed: u64) -> Verdict {
    let mut u = rng(seed);
    let (mut worst, mut kepler, mut conj) = (0.0f64, 0.0f64, 0.0f64);
    let mut smallest_q = f64::INFINITY;
    for case in 0..20 {
        let body = if case % 2 == 0 {
            gallery::random_ellipse(&mut u)
        } else {
            gallery::random_polygon(3 + case % 9, &mut u)
        };
        let h = 0.5 + 1.5 * u();
        let mut q = 0.0;
        while q == 0.0 {
            q = 4.0 * u() - 2.0;
        }
        smallest_q = smallest_q.min(q.abs());
        let mut spec = ExtremalSpec::new(system, body.clone(), h, q);
        spec.theta_polar0 = u() * 4.0;
        spec.x0 = match system {
            System::Heisenberg => vec![u() - 0.5, u() - 0.5, u() - 0.5],
            _ => vec![0.0, u() - 0.5],
        };
        let t_end = TAU * h / q.abs();
        let grid = 1001;
        let traj = geodesics::extremal(&spec, t_end, grid, None)
            .map_err(|e| e.to_string())?
            .trajectory()
            .ok_or("unexpected singular extremal")?;
        worst = worst.max(extremal_error(&spec, &traj, t_end, grid, ORACLE_STEPS).map_err(|e| e.to_string())?);
        if system == System::Heisenberg {
            let trig = Trig::new(&body).map_err(|e| e.to_string())?;
            for s in &traj.samples {
                let (_, th) = trig.polar_theta_of_point(s.h12 / h).map_err(|e| e.to_string())?;
                let linear = spec.theta_polar0 + q / h * s.t;
                kepler = kepler.max(wrapped(th, linear, trig.polar_period()));
            }
            let t = geodesics::heisenberg_conjugate_time(&spec).map_err(|e| e.to_string())?.unwrap();
            let want = 2.0 * h * polar_area(&body) / q.abs();
            conj = conj.max((t - want).abs() / want);
        }
    }
    let mut detail = format!(
        "20 specs, |q| down to {smallest_q:.3}, {ORACLE_STEPS} RK4 steps; sup-norm disagreement {worst:.1e} (limit {ORACLE_TOL:.0e})"
    );
    let mut ok = worst <= ORACLE_TOL;
    if system == System::Heisenberg {
        detail += &format!(
            "; Kepler residual {kepler:.1e} (limit {KEPLER_TOL:.0e}); conjugate time rel. error {conj:.1e} (limit {CONJUGATE_REL_TOL:.0e})"
        );
        ok &= kepler <= KEPLER_TOL && conj <= CONJUGATE_REL_TOL;
    }
    check(ok, detail)
}

fn heisenberg_oracle() -> Verdict {
    closed_form_vs_oracle(System::Heisenberg, 6)
}

fn grushin_oracle() -> Verdict {
    closed_form_vs_oracle(System::Grushin, 7)
}

// 8 -------------------------------------------------------------------------

/// Start at the stable equilibrium with energy `ℍ⁻ + f (ℍ⁺ − ℍ⁻)`.
fn start_at(p: &Pendulum, f: f64) -> (PendulumState, f64) {
    let e = p.classify(0.0);
    let h = e.h_minus + f * (e.h_plus - e.h_minus);
    (PendulumState::new(p.bottom(), (2.0 * (h - e.h_minus)).sqrt()), h)
}

fn reversal(p: &Pendulum, s: PendulumState, t: f64) -> Result<f64, Error> {
    let fw = p.simulate(s, t, None, 2)?;
    let end = fw.samples.last().unwrap();
    let back = p.simulate(PendulumState::new(end.theta_polar, -end.omega), t, None, 2)?;
    let last = back.samples.last().unwrap();
    Ok((last.theta_polar - s.theta_polar).abs().max((last.omega + s.omega).abs()))
}

fn pendulum_conservation() -> Verdict {
    let mut u = rng(8);
    let (mut exact, mut adaptive, mut rev_poly, mut rev_smooth) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let fractions = [0.3, 0.8, 1.4, 2.5];
    for k in 0..10 {
        let p = Pendulum::new(&gallery::random_polygon(3 + k, &mut u)).map_err(|e| e.to_string())?;
        let f = fractions[k % 4];
        let (s, h) = start_at(&p, f);
        let period = p.period(h).map_err(|e| e.to_string())?.ok_or("no period")?;
        let run = p.simulate(s, 100.0 * period, None, 2001).map_err(|e| e.to_string())?;
        if !run.exact {
            return Err("polygon run did not use exact arcs".into());
        }
        exact = exact.max(run.max_energy_drift());
        rev_poly = rev_poly.max(reversal(&p, s, 3.7 * period).map_err(|e| e.to_string())?);
    }
    let tight = Tolerances {
        ode_rel: 1e-12,
        ode_abs: 1e-14,
        ..Tolerances::default()
    };
    for k in 0..4 {
        let body = gallery::random_ellipse(&mut u);
        let p = Pendulum::new(&body).map_err(|e| e.to_string())?;
        let (s, h) = start_at(&p, fractions[k]);
        let period = p.period(h).map_err(|e| e.to_string())?.ok_or("no period")?;
        let run = p.simulate(s, 10.0 * period, None, 501).map_err(|e| e.to_string())?;
        adaptive = adaptive.max(run.max_energy_drift());
        let fine = Pendulum::from_trig(Trig::with_tolerances(&body, tight).map_err(|e| e.to_string())?, 1.0);
        rev_smooth = rev_smooth.max(reversal(&fine, s, 1.3 * period).map_err(|e| e.to_string())?);
    }
    check(
        exact <= EXACT_DRIFT_TOL && adaptive <= ADAPTIVE_DRIFT_TOL && rev_poly.max(rev_smooth) <= REVERSAL_TOL,
        format!(
            "polygon drift over 100 periods {exact:.1e} (limit {EXACT_DRIFT_TOL:.0e}); ellipse drift over 10 periods {adaptive:.1e} (limit {ADAPTIVE_DRIFT_TOL:.0e}); time reversal polygon {rev_poly:.1e}, ellipse at ode_rel 1e-12 {rev_smooth:.1e} (limit {REVERSAL_TOL:.0e})"
        ),
    )
}

// 9 -------------------------------------------------------------------------

/// Index ranges of samples strictly between consecutive switch times.
fn arcs(times: &[f64], switches: &[f64], t_end: f64) -> Vec<Vec<usize>> {
    let mut cuts = vec![0.0];
    cuts.extend(switches.iter().copied());
    cuts.push(t_end);
    cuts.windows(2)
        .map(|w| {
            let eps = 1e-12 * t_end.max(1.0);
            (0..times.len()).filter(|&i| times[i] > w[0] + eps && times[i] < w[1] - eps).collect()
        })
        .collect()
}

fn nearest_vertex(vertices: &[Vec2], v: Vec2) -> f64 {
    vertices.iter().map(|w| (*w - v).norm()).fold(f64::INFINITY, f64::min)
}

/// Cubic through four samples of the arc; largest miss on the rest.
fn cubic_residual(t: &[f64], x: &[f64]) -> f64 {
    let m = t.len();
    let nodes = [0, m / 3, 2 * m / 3, m - 1];
    let eval = |s: f64| {
        nodes
            .iter()
            .map(|&i| {
                let w: f64 = nodes.iter().filter(|&&j| j != i).map(|&j| (s - t[j]) / (t[i] - t[j])).product();
                w * x[i]
            })
            .sum::<f64>()
    };
    (0..m).map(|i| (eval(t[i]) - x[i]).abs()).fold(0.0, f64::max)
}

fn extremal_arcs(traj: &ExtremalTrajectory, t_end: f64, vertices: &[Vec2]) -> Result<(f64, f64, usize), String> {
    let times: Vec<f64> = traj.samples.iter().map(|s| s.t).collect();
    let (mut off_vertex, mut fit, mut fitted) = (0.0f64, 0.0f64, 0usize);
    for arc in arcs(&times, &traj.switch_times, t_end) {
        let Some(&first) = arc.first() else { continue };
        let u0 = traj.samples[first].u;
        if arc.iter().any(|&i| traj.samples[i].u != u0) {
            return Err(format!("{} control varies inside an arc", traj.system));
        }
        off_vertex = off_vertex.max(nearest_vertex(vertices, u0));
        if arc.len() >= 5 {
            let t: Vec<f64> = arc.iter().map(|&i| times[i]).collect();
            for c in 0..traj.system.dim() {
                let x: Vec<f64> = arc.iter().map(|&i| traj.samples[i].x[c]).collect();
                fit = fit.max(cubic_residual(&t, &x));
            }
            fitted += 1;
        }
    }
    Ok((off_vertex, fit, fitted))
}

fn piecewise_constant_control() -> Verdict {
    let mut u = rng(9);
    let (mut off_vertex, mut fit, mut fitted, mut switches) = (0.0f64, 0.0f64, 0usize, 0usize);
    let systems = [System::Martinet, System::Engel, System::Cartan];
    for k in 0..20 {
        let body = gallery::random_polygon(3 + k % 10, &mut u);
        let vertices = body.vertex_list().unwrap();
        let p = Pendulum::new(&body).map_err(|e| e.to_string())?;
        let f = if k % 2 == 0 { 0.1 + 0.8 * u() } else { 1.2 + u() };
        let (s, h) = start_at(&p, f);
        let t_end = 3.0 * p.period(h).map_err(|e| e.to_string())?.ok_or("no period")?;
        let run = p.simulate(s, t_end, None, 4001).map_err(|e| e.to_string())?;
        let times: Vec<f64> = run.samples.iter().map(|s| s.t).collect();
        switches += run.switch_times.len();
        for arc in arcs(&times, &run.switch_times, t_end) {
            let Some(&first) = arc.first() else { continue };
            let u0 = run.samples[first].u;
            if arc.iter().any(|&i| run.samples[i].u != u0) {
                return Err(format!("pendulum control varies inside an arc (polygon {k})"));
            }
            off_vertex = off_vertex.max(nearest_vertex(&vertices, u0));
        }

        let system = systems[k % 3];
        let traj = loop {
            let mut spec = ExtremalSpec::new(system, body.clone(), 1.0, 0.5 + u());
            spec.phi0 = TAU * u();
            spec.theta_polar0 = 4.0 * u();
            spec.omega0 = 2.0 * u() - 1.0;
            match geodesics::extremal(&spec, 6.0, 3001, None) {
                Ok(e) => break e.trajectory().ok_or("unexpected singular extremal")?,
                Err(Error::PolicyRequired { .. }) => continue,
                Err(e) => return Err(e.to_string()),
            }
        };
        let (o, r, n) = extremal_arcs(&traj, 6.0, &vertices)?;
        off_vertex = off_vertex.max(o);
        fit = fit.max(r);
        fitted += n;
    }
    check(
        off_vertex <= 1e-12 && fit <= CUBIC_FIT_TOL && fitted > 0,
        format!(
            "20 polygons, {switches} pendulum switches: control bit-identical within arcs, max distance to a vertex {off_vertex:.1e}; {fitted} Martinet/Engel/Cartan arcs fit by cubics to {fit:.1e} (limit {CUBIC_FIT_TOL:.0e})"
        ),
    )
}

// 10 ------------------------------------------------------------------------

fn portrait_classification() -> Verdict {
    let mut errors = Vec::new();
    let mut arrivals = Vec::new();
    for (name, body) in [("square", ConvexBody::square(1.0)), ("diamond", ConvexBody::diamond(1.0))] {
        let p = Pendulum::new(&body).map_err(|e| e.to_string())?;
        let e = p.classify(0.0);
        if (e.h_minus, e.h_plus) != (-1.0, 1.0) {
            errors.push(format!("{name}: thresholds {} {}", e.h_minus, e.h_plus));
        }
        let expect = [
            (-1.0 - 1e-6, Regime::Empty),
            (-1.0, Regime::BottomFixed),
            (-1.0 + 1e-6, Regime::Oscillation),
            (0.0, Regime::Oscillation),
            (1.0 - 1e-6, Regime::Oscillation),
            (1.0, Regime::Separatrix),
            (1.0 + 1e-6, Regime::Rotation),
        ];
        for (h, r) in expect {
            if p.classify(h).regime != r {
                errors.push(format!("{name}: H = {h} classified {:?}", p.classify(h).regime));
            }
        }
        let levels: Vec<f64> = expect.iter().map(|x| x.0).collect();
        for (c, (_, r)) in p.phase_portrait(&levels, 50).iter().zip(expect) {
            if c.regime != r {
                errors.push(format!("{name}: portrait level {} is {:?}", c.h, c.regime));
            }
        }
        // on the separatrix from the stable equilibrium
        let s = PendulumState::new(p.bottom(), 2.0);
        match p.simulate(s, 20.0, None, 10) {
            Err(Error::PolicyRequired { t, .. }) if t.is_finite() => {
                let stay = p.simulate(s, 20.0, Some(SeparatrixPolicy::StayForever), 10).map_err(|e| e.to_string())?;
                let d = stay.dwell_events.first().ok_or("no dwell recorded")?;
                if d.start != t || d.end.is_some() {
                    errors.push(format!("{name}: dwell {d:?} vs arrival {t}"));
                }
                arrivals.push(format!("{name} {t:.4}"));
            }
            other => errors.push(format!("{name}: separatrix run gave {other:?}")),
        }
    }
    let mut u = rng(10);
    for k in 0..10 {
        let p = Pendulum::new(&gallery::random_polygon(3 + k, &mut u)).map_err(|e| e.to_string())?;
        let (s, _) = start_at(&p, 1.0);
        if !matches!(p.simulate(s, 100.0, None, 10), Err(Error::PolicyRequired { t, .. }) if t.is_finite()) {
            errors.push(format!("random polygon {k}: no finite separatrix arrival"));
        }
    }
    if errors.is_empty() {
        Ok(format!(
            "thresholds -1 and 1 for square and diamond; finite arrival times {}; 10 random polygons refuse to continue without a policy",
            arrivals.join(", ")
        ))
    } else {
        Err(errors.join("; "))
    }
}

// 11 ------------------------------------------------------------------------

fn oracle_convergence() -> Verdict {
    let spec = ExtremalSpec::new(System::Heisenberg, ConvexBody::unit_disc(), 1.0, 1.0);
    let trig = Trig::new(&spec.body).map_err(|e| e.to_string())?;
    let grid = 51;
    let traj = geodesics::extremal(&spec, TAU, grid, None)
        .map_err(|e| e.to_string())?
        .trajectory()
        .unwrap();
    let control = |t: f64| {
        let p = trig.cos_sin(trig.polar_correspondence(t).mid());
        (p.x, p.y)
    };
    let errors: Vec<f64> = [50usize, 100, 200, 400, 800]
        .iter()
        .map(|&steps| {
            let r = ode_reference(control_system(System::Heisenberg), &[0.0; 3], &control, TAU, steps, &[]);
            let stride = steps / (grid - 1);
            traj.samples
                .iter()
                .enumerate()
                .flat_map(|(i, s)| s.x.iter().zip(&r[i * stride].1).map(|(a, b)| (a - b).abs()))
                .fold(0.0, f64::max)
        })
        .collect();
    let ratios: Vec<f64> = errors.windows(2).map(|w| w[0] / w[1]).collect();
    let worst = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    check(
        worst >= CONVERGENCE_RATIO,
        format!(
            "errors {} at 50..800 steps; smallest reduction per halving {worst:.1} (limit {CONVERGENCE_RATIO})",
            errors.iter().map(|e| format!("{e:.1e}")).collect::<Vec<_>>().join(" ")
        ),
    )
}

// 12 ------------------------------------------------------------------------

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path();
    let write = |n: &str, t: &str| fs::write(d.join(n), t).unwrap();
    write("square.json", r#"{"type":"polygon","vertices":[[1,-1],[1,1],[-1,1],[-1,-1]]}"#);
    write("ellipse.json", r#"{"type":"ellipse","a":1.5,"b":0.8}"#);
    write("hex.json", r#"{"type":"polygon","vertices":[[1,0],[0.5,0.9],[-0.5,0.8],[-1.1,0],[-0.5,-0.9],[0.4,-0.8]]}"#);
    write("spec.json", r#"{"h":1,"q":0.7,"phi0":0.4,"theta_polar0":1.2,"omega0":0.3}"#);
    let commands: [&[&str]; 7] = [
        &["trig", "ellipse.json", "--theta", "0:10:0.37"],
        &["polygon-tables", "hex.json"],
        &["pendulum", "square.json", "--theta-polar0", "0.3", "--omega0", "1.1", "--duration", "30"],
        &["pendulum", "ellipse.json", "--theta-polar0", "0.3", "--omega0", "0.9", "--duration", "10"],
        &["portrait", "hex.json", "--samples", "50"],
        &["extremal", "cartan", "hex.json", "--spec", "spec.json", "--duration", "5"],
        &["extremal", "engel", "ellipse.json", "--spec", "spec.json", "--duration", "5"],
    ];
    let mut bytes = 0;
    for (i, args) in commands.iter().enumerate() {
        let mut outs = Vec::new();
        for run in 0..2 {
            let out = format!("run{i}_{run}.csv");
            let o = Command::new(env!("CARGO_BIN_EXE_convex-trig"))
                .args(["--seed", "5"])
                .args(*args)
                .args(["--out", &out])
                .current_dir(d)
                .output()
                .map_err(|e| e.to_string())?;
            if !o.status.success() {
                return Err(format!("{}: {}", args.join(" "), String::from_utf8_lossy(&o.stderr)));
            }
            outs.push((fs::read(d.join(&out)).map_err(|e| e.to_string())?, o.stdout));
        }
        if outs[0] != outs[1] {
            return Err(format!("{} differs between runs", args.join(" ")));
        }
        bytes += outs[0].0.len();
    }
    Ok(format!("{} commands run twice, {bytes} CSV bytes identical", commands.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 12] = [
        ("Pythagorean identity", pythagorean_identity),
        ("bipolar round trip", bipolar_round_trip),
        ("square and diamond", square_and_diamond),
        ("ellipse closed form", ellipse_closed_form),
        ("one-sided derivatives", derivatives),
        ("Heisenberg vs ODE oracle", heisenberg_oracle),
        ("Grushin vs ODE oracle", grushin_oracle),
        ("pendulum conservation", pendulum_conservation),
        ("piecewise-constant control", piecewise_constant_control),
        ("phase-portrait classification", portrait_classification),
        ("oracle convergence", oracle_convergence),
        ("CLI determinism", determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|x| name.to_lowercase().contains(&x.to_lowercase())) {
            continue;
        }
        let clock = Instant::now();
        let verdict = panic::catch_unwind(f).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = clock.elapsed().as_secs_f64();
        match verdict {
            Ok(d) => println!("criterion {:>2} PASS  {name}: {d} [{secs:.1} s]", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {d} [{secs:.1} s]", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
