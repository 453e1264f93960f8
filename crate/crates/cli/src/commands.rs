//! One function per subcommand.

use std::io::Write;
use std::path::PathBuf;

use convex_trig_core::geodesics::{self, casimirs, Extremal, SingularKind, SingularReport};
use convex_trig_core::polygon::build_tables_with;
use convex_trig_core::{ExtremalSpec, Pendulum, PendulumState, System, Tolerances, Trig};
use serde_json::json;

use crate::args::{BodyArgs, ExtremalArgs, OutArgs, PendulumArgs, PortraitArgs, TrigArgs, VerifyArgs};
use crate::error::{CliError, Result};
use crate::io::{emit, load_body, num, parse_policy, parse_system, parse_values, read_json, vec_fields, BodySpec, Sink, SpecFile};
use crate::{svg, verify};

/// Standard output and standard error of a run.
pub struct Streams<'a> {
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
}

impl Streams<'_> {
    /// Summaries share standard output only when the table went to a file.
    fn info(&mut self, table_on_stdout: bool) -> &mut dyn Write {
        if table_on_stdout {
            &mut *self.stderr
        } else {
            &mut *self.stdout
        }
    }
}

/// What a command touched, for the manifest.
#[derive(Default)]
pub struct Outcome {
    pub body: Option<BodySpec>,
    pub outputs: Vec<PathBuf>,
}

pub fn trig(a: &TrigArgs, tol: &Tolerances, s: &mut Streams) -> Result<Outcome> {
    let (spec, body) = load_body(&a.body, tol)?;
    let trig = Trig::with_tolerances(&body, *tol)?;
    let mut sink = Sink::new(a.out.as_deref());
    sink.header(&["theta", "cos", "sin", "theta_polar_lo", "theta_polar_hi", "dcos_right", "dsin_right"])?;
    for theta in parse_values(&a.theta)? {
        let p = trig.cos_sin(theta);
        let c = trig.correspondence(theta);
        let d = trig.derivative(theta).right;
        sink.row(&[num(theta), num(p.x), num(p.y), num(c.lo), num(c.hi), num(d.x), num(d.y)])?;
    }
    let out = sink.finish(s.stdout)?;
    Ok(Outcome {
        body: Some(spec),
        outputs: out.into_iter().collect(),
    })
}

pub fn polygon_tables(a: &OutArgs, tol: &Tolerances, s: &mut Streams) -> Result<Outcome> {
    let (spec, body) = load_body(&a.body, tol)?;
    if !body.is_polygon() {
        return Err(CliError::NotAPolygon);
    }
    let t = build_tables_with(&body, tol)?;
    let mut sink = Sink::new(a.out.as_deref());
    sink.header(&["k", "x", "y", "Theta", "theta", "Qx", "Qy", "Theta_polar"])?;
    for k in 0..t.len() {
        let [x, y] = vec_fields(t.vertices[k]);
        let [qx, qy] = vec_fields(t.polar_vertices[k]);
        sink.row(&[(k + 1).to_string(), x, y, num(t.theta[k]), num(t.theta_edge[k]), qx, qy, num(t.polar_theta[k])])?;
    }
    let out = sink.finish(s.stdout)?;
    let info = s.info(out.is_none());
    writeln!(info, "period {}", t.period)?;
    writeln!(info, "polar_period {}", t.polar_period)?;
    Ok(Outcome {
        body: Some(spec),
        outputs: out.into_iter().collect(),
    })
}

pub fn polar(a: &OutArgs, tol: &Tolerances, s: &mut Streams) -> Result<Outcome> {
    let (spec, body) = load_body(&a.body, tol)?;
    let dual = BodySpec::from(&body.polar()?);
    let text = serde_json::to_string_pretty(&dual).expect("body serializes") + "\n";
    emit(a.out.as_deref(), text.as_bytes(), s.stdout)?;
    Ok(Outcome {
        body: Some(spec),
        outputs: a.out.iter().cloned().collect(),
    })
}

pub fn area(a: &BodyArgs, tol: &Tolerances, s: &mut Streams) -> Result<Outcome> {
    let (spec, body) = load_body(&a.body, tol)?;
    let trig = Trig::with_tolerances(&body, *tol)?;
    writeln!(s.stdout, "area {}", 0.5 * trig.period())?;
    writeln!(s.stdout, "period {}", trig.period())?;
    writeln!(s.stdout, "polar_area {}", 0.5 * trig.polar_period())?;
    writeln!(s.stdout, "polar_period {}", trig.polar_period())?;
    Ok(Outcome {
        body: Some(spec),
        outputs: Vec::new(),
    })
}

/// Levels around both equilibrium energies, including each exactly.
fn default_levels(p: &Pendulum) -> Vec<f64> {
    let e = p.classify(0.0);
    let (lo, hi) = (e.h_minus, e.h_plus);
    let d = if hi > lo { hi - lo } else { 1.0 };
    [0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0].iter().map(|f| lo + f * d).collect()
}

pub fn pendulum(a: &PendulumArgs, tol: &Tolerances, s: &mut Streams) -> Result<Outcome> {
    let (spec, body) = load_body(&a.body, tol)?;
    let policy = a.policy.as_deref().map(parse_policy).transpose()?;
    let p = Pendulum::from_trig(Trig::with_tolerances(&body, *tol)?, a.gain);
    let start = PendulumState::new(a.theta_polar0, a.omega0);
    let run = p.simulate(start, a.duration, policy, a.samples)?;
    let mut sink = Sink::new(a.out.as_deref());
    sink.header(&["t", "theta_polar", "omega", "u1", "u2", "energy", "event"])?;
    for x in &run.samples {
        let [u1, u2] = vec_fields(x.u);
        sink.row(&[num(x.t), num(x.theta_polar), num(x.omega), u1, u2, num(x.energy), x.event.as_str().into()])?;
    }
    let out = sink.finish(s.stdout)?;
    let mut outputs: Vec<PathBuf> = out.iter().cloned().collect();
    if let Some(path) = &a.portrait {
        let mut levels = default_levels(&p);
        levels.push(run.energy);
        levels.sort_by(f64::total_cmp);
        levels.dedup();
        let curves = p.phase_portrait(&levels, 201);
        let path_pts: Vec<(f64, f64)> = run.samples.iter().map(|x| (x.theta_polar, x.omega)).collect();
        emit(Some(path), svg::portrait(&curves, Some(&path_pts)).as_bytes(), s.stdout)?;
        outputs.push(path.clone());
    }
    let level = p.classify(run.energy);
    let info = s.info(out.is_none());
    writeln!(info, "energy {}", run.energy)?;
    writeln!(info, "regime {}", level.regime.as_str())?;
    writeln!(info, "h_minus {}", level.h_minus)?;
    writeln!(info, "h_plus {}", level.h_plus)?;
    if let Ok(Some(t)) = p.period(run.energy) {
        writeln!(info, "period {t}")?;
    }
    writeln!(info, "switches {}", run.switch_times.len())?;
    for d in &run.dwell_events {
        match d.end {
            Some(e) => writeln!(info, "dwell theta_polar={} from {} to {}", d.theta_polar, d.start, e)?,
            None => writeln!(info, "dwell theta_polar={} from {} forever", d.theta_polar, d.start)?,
        }
    }
    writeln!(info, "max_energy_drift {:e}", run.max_energy_drift())?;
    Ok(Outcome {
        body: Some(spec),
        outputs,
    })
}

pub fn portrait(a: &PortraitArgs, tol: &Tolerances, s: &mut Streams) -> Result<Outcome> {
    let (spec, body) = load_body(&a.body, tol)?;
    let p = Pendulum::from_trig(Trig::with_tolerances(&body, *tol)?, a.gain);
    let levels = match &a.levels {
        Some(l) => parse_values(l)?,
        None => default_levels(&p),
    };
    let curves = p.phase_portrait(&levels, a.samples);
    let mut outputs = Vec::new();
    let table_on_stdout = a.out.is_none() && a.svg.is_none();
    if a.out.is_some() || table_on_stdout {
        let mut sink = Sink::new(a.out.as_deref());
        sink.header(&["h", "regime", "branch", "theta_polar", "omega"])?;
        for c in &curves {
            for (b, branch) in c.branches.iter().enumerate() {
                for &(x, w) in branch {
                    sink.row(&[num(c.h), c.regime.as_str().into(), b.to_string(), num(x), num(w)])?;
                }
            }
        }
        outputs.extend(sink.finish(s.stdout)?);
    }
    if let Some(path) = &a.svg {
        emit(Some(path), svg::portrait(&curves, None).as_bytes(), s.stdout)?;
        outputs.push(path.clone());
    }
    let info = s.info(table_on_stdout);
    for c in &curves {
        writeln!(info, "level {} {}", c.h, c.regime.as_str())?;
    }
    Ok(Outcome {
        body: Some(spec),
        outputs,
    })
}

fn singular_json(r: &SingularReport) -> serde_json::Value {
    json!({
        "system": r.system.as_str(),
        "kind": match r.kind {
            SingularKind::CornerEdge => "corner-edge",
            SingularKind::Abnormal => "abnormal",
        },
        "summary": r.to_string(),
        "edge": r.edge.map(|(a, b)| [[a.x, a.y], [b.x, b.y]]),
        "parameter_range": r.parameter_range.map(|(a, b)| [a, b]),
        "orthogonal_to": r.orthogonal_to.map(|v| [v.x, v.y]),
    })
}

pub fn extremal(a: &ExtremalArgs, tol: &Tolerances, s: &mut Streams) -> Result<Outcome> {
    let system = parse_system(&a.system)?;
    let (bspec, body) = load_body(&a.body, tol)?;
    let file: SpecFile = read_json(&a.spec)?;
    if let Some(named) = &file.system {
        if parse_system(named)? != system {
            return Err(CliError::Usage(format!("spec is for {named}, command line asks for {system}")));
        }
    }
    let policy = a.policy.as_deref().map(parse_policy).transpose()?;
    let abnormal = file.h == 0.0 && system.is_pendulum();
    if !(file.h > 0.0) && !abnormal {
        return Err(CliError::NonPositiveH(file.h));
    }
    let spec = ExtremalSpec {
        phi0: file.phi0,
        theta_polar0: file.theta_polar0,
        omega0: file.omega0,
        x0: file.x0.clone(),
        ..ExtremalSpec::new(system, body, file.h, file.q)
    };
    let mut outcome = Outcome {
        body: Some(bspec),
        outputs: Vec::new(),
    };
    let traj = match geodesics::extremal_with(&spec, a.duration, a.samples, policy, tol)? {
        Extremal::Singular(r) => {
            let path = a.out.as_ref().map(|p| p.with_extension("singular.json"));
            let text = serde_json::to_string_pretty(&singular_json(&r)).expect("report serializes") + "\n";
            emit(path.as_deref(), text.as_bytes(), s.stdout)?;
            writeln!(s.info(path.is_none()), "singular extremal: {r}")?;
            outcome.outputs.extend(path);
            return Ok(outcome);
        }
        Extremal::Trajectory(t) => t,
    };
    let conserved = casimirs(&traj)?;
    let with_h3 = system != System::Grushin;
    let with_c = system == System::Cartan;
    let mut cols: Vec<&str> = vec!["t"];
    cols.extend(system.state_names());
    cols.extend(["u1", "u2", "h1", "h2"]);
    if with_h3 {
        cols.push("h3");
    }
    cols.push("H");
    if with_c {
        cols.push("C");
    }
    let mut sink = Sink::new(a.out.as_deref());
    sink.header(&cols)?;
    for (i, x) in traj.samples.iter().enumerate() {
        let mut row = vec![num(x.t)];
        row.extend(x.x.iter().map(|&v| num(v)));
        row.extend(vec_fields(x.u));
        row.extend(vec_fields(x.h12));
        if with_h3 {
            row.push(num(x.h3));
        }
        row.push(num(conserved.hamiltonian[i]));
        if with_c {
            row.push(num(conserved.casimir[i]));
        }
        sink.row(&row)?;
    }
    let out = sink.finish(s.stdout)?;
    let error = if a.verify {
        Some(verify::extremal_error(&spec, &traj, a.duration, a.samples, a.verify_steps)?)
    } else {
        None
    };
    let info = s.info(out.is_none());
    writeln!(info, "samples {}", traj.samples.len())?;
    writeln!(info, "switches {}", traj.switch_times.len())?;
    if system == System::Heisenberg {
        if let Some(t) = geodesics::heisenberg_conjugate_time(&spec)? {
            writeln!(info, "conjugate_time {t}")?;
        }
    }
    writeln!(info, "max_hamiltonian_drift {:e}", conserved.max_hamiltonian_drift)?;
    if with_c {
        writeln!(info, "max_casimir_drift {:e}", conserved.max_casimir_drift)?;
    }
    for d in &traj.dwell_events {
        writeln!(info, "dwell theta_polar={} from {} to {:?}", d.theta_polar, d.start, d.end)?;
    }
    if let Some(e) = error {
        writeln!(info, "max_disagreement {e:e} (oracle steps {})", a.verify_steps)?;
    }
    outcome.outputs.extend(out);
    Ok(outcome)
}

pub fn verify(a: &VerifyArgs, tol: &Tolerances, seed: u64, s: &mut Streams) -> Result<Outcome> {
    let (spec, body) = load_body(&a.body, tol)?;
    let trig = Trig::with_tolerances(&body, *tol)?;
    let sector = verify::sector_error(&trig, a.points, a.boundary_samples, seed)?;
    writeln!(s.stdout, "sector_theta_max_error {sector:e} ({} points, {} boundary samples)", a.points, a.boundary_samples)?;
    let h = ExtremalSpec::new(System::Heisenberg, body, 1.0, 1.0);
    let t_end = geodesics::heisenberg_conjugate_time(&h)?.expect("q is nonzero");
    let grid = 1001;
    let traj = geodesics::extremal_with(&h, t_end, grid, None, tol)?
        .trajectory()
        .ok_or_else(|| CliError::Usage("Heisenberg check produced a singular extremal".into()))?;
    let ode = verify::extremal_error(&h, &traj, t_end, grid, a.steps)?;
    writeln!(s.stdout, "heisenberg_ode_max_error {ode:e} (T = {t_end}, {} steps)", a.steps)?;
    Ok(Outcome {
        body: Some(spec),
        outputs: Vec::new(),
    })
}
