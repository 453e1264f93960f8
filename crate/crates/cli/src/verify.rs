//! Bridges to the brute-force oracles.

use convex_trig_core::geodesics::ExtremalTrajectory;
use convex_trig_core::{ConvexBody, ExtremalSpec, System, Trig};
use convex_trig_oracle::{ode_reference, pontryagin_reference, ControlSystem, SectorOracle, Shape};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, Result};

pub fn shape(body: &ConvexBody) -> Shape {
    match body {
        ConvexBody::Polygon { vertices } => Shape::Polygon(vertices.iter().map(|v| (v.x, v.y)).collect()),
        ConvexBody::Ellipse { a, b } => Shape::Ellipse { a: *a, b: *b },
        ConvexBody::Radial { samples } => Shape::Radial(samples.clone()),
    }
}

pub fn control_system(s: System) -> ControlSystem {
    match s {
        System::Heisenberg => ControlSystem::Heisenberg,
        System::Grushin => ControlSystem::Grushin,
        System::Martinet => ControlSystem::Martinet,
        System::Engel => ControlSystem::Engel,
        System::Cartan => ControlSystem::Cartan,
    }
}

fn wrapped_gap(a: f64, b: f64, period: f64) -> f64 {
    let d = (a - b).rem_euclid(period);
    d.min(period - d)
}

/// Largest gap between `θ` and the sector area of `(cos θ, sin θ)` over random `θ`.
pub fn sector_error(trig: &Trig, points: usize, boundary_samples: usize, seed: u64) -> Result<f64> {
    let oracle = SectorOracle::new(shape(trig.body()), boundary_samples).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let period = trig.period();
    let mut worst = (oracle.period() - period).abs();
    for _ in 0..points {
        let theta = rng.random::<f64>() * period;
        let p = trig.cos_sin(theta);
        let got = oracle.theta((p.x, p.y)).map_err(|e| CliError::Usage(e.to_string()))?;
        worst = worst.max(wrapped_gap(got, theta, period));
    }
    Ok(worst)
}

/// Sup-norm distance between an extremal and a fixed-step RK4 reference.
///
/// `grid` is the number of uniform samples the trajectory was generated
/// with; only those samples are compared. Heisenberg and Grushin are driven by
/// the uniformly moving polar angle, polygonal pendulum systems by the
/// piecewise-constant sampled control, smooth pendulum systems by the full
/// maximum-principle system.
pub fn extremal_error(spec: &ExtremalSpec, traj: &ExtremalTrajectory, t_end: f64, grid: usize, steps: usize) -> Result<f64> {
    let grid = grid.max(2);
    let per = steps.div_ceil(grid - 1).max(1);
    let steps = per * (grid - 1);
    let dt = t_end / steps as f64;
    let index = |t: f64| {
        let k = (t / dt).round();
        ((k * dt - t).abs() <= 1e-9 * t_end.max(1.0)).then_some(k as usize)
    };
    let system = control_system(spec.system);
    let x0 = traj.samples[0].x.clone();
    let trig = Trig::new(&spec.body)?;
    let mut breaks = traj.switch_times.clone();
    for d in &traj.dwell_events {
        breaks.push(d.start);
        breaks.extend(d.end);
    }
    let states: Vec<Vec<f64>> = if !spec.system.is_pendulum() {
        let rate = if spec.q.abs() < 1e-8 * spec.h { 0.0 } else { spec.q / spec.h };
        let th0 = spec.theta_polar0;
        let control = |t: f64| {
            let p = trig.cos_sin(trig.polar_correspondence(th0 + rate * t).mid());
            (p.x, p.y)
        };
        ode_reference(system, &x0, &control, t_end, steps, &breaks)
            .into_iter()
            .map(|(_, x)| x)
            .collect()
    } else if trig.is_polygonal() {
        let samples = &traj.samples;
        let control = |t: f64| {
            let s = samples.iter().rev().find(|s| s.t <= t).unwrap_or(&samples[0]);
            (s.u.x, s.u.y)
        };
        ode_reference(system, &x0, &control, t_end, steps, &breaks)
            .into_iter()
            .map(|(_, x)| x)
            .collect()
    } else {
        let s0 = &traj.samples[0];
        let g = traj.drive;
        pontryagin_reference(system, &shape(&spec.body), [s0.h12.x, s0.h12.y, s0.h3], (g.x, g.y), &x0, t_end, steps)
            .into_iter()
            .map(|s| s.x)
            .collect()
    };
    let mut worst = 0.0f64;
    for s in &traj.samples {
        let Some(k) = index(s.t) else { continue };
        if k % per != 0 {
            continue;
        }
        for (a, b) in s.x.iter().zip(&states[k]) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok(worst)
}
