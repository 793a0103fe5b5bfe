//! Command execution and artifact output.
//!
//! Each command writes its CSV files plus a `summary.json` into the output
//! directory. CSV contents depend only on the configuration; wall times are
//! confined to the summary.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::{json, Value as Json};
use wavegen_core::boussinesq::{check_compatibility, RightBoundary};
use wavegen_core::io::{self, TraceRecord};
use wavegen_core::soliton::{soliton_initial_data, soliton_profile};
use wavegen_core::swe::{self, SweParams, SweRun};
use wavegen_core::validation::{self, gaussian_initial};
use wavegen_core::{
    BoundaryForcing, BoussinesqRun, Closure, DimensionlessParams, Grid1D, Scenario, ScenarioKind, SolitonSpec, WaveState,
};

use crate::config::{
    Boundary, BoussinesqConfig, ForcingKind, Initial, RightEdge, RunConfig, SolitonConfig, SweConfig, ValidateConfig,
};
use crate::error::{CliError, Result};

const ERROR_HEADER: [&str; 3] = ["t", "e_zeta", "e_q"];
const PROFILE_HEADER: [&str; 3] = ["xi", "zeta", "q"];

/// What a command produced.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

pub fn execute(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    std::fs::create_dir_all(out).map_err(|source| CliError::Io {
        path: out.to_path_buf(),
        source,
    })?;
    let start = Instant::now();
    let (command, config, mut details, mut outcome) = match cfg {
        RunConfig::Swe(c) => ("run-swe", json!(c), Json::Null, run_swe(c, out)?),
        RunConfig::Boussinesq(c) => ("run-boussinesq", json!(c), Json::Null, run_boussinesq(c, out)?),
        RunConfig::Soliton(c) => {
            let (o, d) = make_soliton(c, out)?;
            ("make-soliton", json!(c), d, o)
        }
        RunConfig::Validate(c) => {
            let (o, d) = validate(c, out)?;
            ("validate", json!(c), d, o)
        }
    };
    let summary_path = out.join("summary.json");
    outcome.files.push(summary_path.clone());
    if details.is_null() {
        details = json!({});
    }
    let summary = json!({
        "command": command,
        "config": config,
        "details": details,
        "warnings": outcome.warnings,
        "outputs": outcome.files.iter().map(|p| file_name(p)).collect::<Vec<_>>(),
        "wall_time_s": start.elapsed().as_secs_f64(),
    });
    let text = serde_json::to_string_pretty(&summary).expect("summary is plain JSON");
    io::write_text(&summary_path, &text)?;
    Ok(outcome)
}

fn file_name(p: &Path) -> String {
    p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

/// A solver that can be stepped to given times.
trait Stepper {
    fn time(&self) -> f64;
    fn dt(&self) -> f64;
    fn advance(&mut self, t: f64) -> wavegen_core::Result<()>;
    /// `(t, zeta, q)` at the left edge.
    fn edge(&self) -> (f64, f64, f64);
    fn snapshot(&self, path: &Path) -> wavegen_core::Result<()>;
}

struct SweStepper {
    run: SweRun,
    last_q_boundary: f64,
}

impl Stepper for SweStepper {
    fn time(&self) -> f64 {
        self.run.state.t
    }
    fn dt(&self) -> f64 {
        self.run.dt()
    }
    fn advance(&mut self, t: f64) -> wavegen_core::Result<()> {
        let rep = self.run.step(t - self.run.state.t)?;
        self.run.state.t = t;
        self.last_q_boundary = rep.q_boundary;
        Ok(())
    }
    fn edge(&self) -> (f64, f64, f64) {
        let t = self.run.state.t;
        let f = self.run.forcing.sample(t).map(|s| s.f).unwrap_or(f64::NAN);
        (t, f, self.last_q_boundary)
    }
    fn snapshot(&self, path: &Path) -> wavegen_core::Result<()> {
        io::write_snapshot(&self.run.state, &self.run.grid, path)
    }
}

struct BoussinesqStepper {
    run: BoussinesqRun,
    max_cfl: f64,
}

impl Stepper for BoussinesqStepper {
    fn time(&self) -> f64 {
        self.run.state.t
    }
    fn dt(&self) -> f64 {
        self.run.dt()
    }
    fn advance(&mut self, t: f64) -> wavegen_core::Result<()> {
        let rep = self.run.step_to(t)?;
        self.max_cfl = self.max_cfl.max(rep.hyperbolic_cfl);
        Ok(())
    }
    /// Node 1 elevation and, for generating runs, the boundary discharge.
    fn edge(&self) -> (f64, f64, f64) {
        let s = &self.run.state;
        let q = match self.run.closure {
            Closure::Generating { .. } => s.q_trace,
            Closure::Periodic => s.q[0],
        };
        (s.t, s.zeta[0], q)
    }
    fn snapshot(&self, path: &Path) -> wavegen_core::Result<()> {
        io::write_snapshot(&self.run.state, &self.run.grid, path)
    }
}

/// Steps to `t_final` on the uniform time grid `k dt`, landing exactly on
/// every requested snapshot time. Writes `trace.csv`, the snapshots and
/// `final.csv`. The trace keeps only grid times so it can be replayed as
/// sampled forcing.
fn drive(s: &mut dyn Stepper, t_final: f64, times: &[f64], stride: usize, out: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    let mut trace = TraceRecord::default();
    let (t, z, q) = s.edge();
    trace.push(t, z, q);

    let mut marks: Vec<(f64, Option<usize>)> = times.iter().enumerate().map(|(i, t)| (*t, Some(i))).collect();
    marks.push((t_final, None));
    marks.sort_by(|a, b| a.0.total_cmp(&b.0));

    let dt = s.dt();
    let tol = 1e-9 * dt;
    let mut k = 0usize;
    for (target, label) in marks {
        while s.time() < target - tol {
            let next = (k + 1) as f64 * dt;
            if next <= target + tol {
                k += 1;
                s.advance(if next >= target - tol { target } else { next })?;
                let (t, z, q) = s.edge();
                trace.push(t, z, q);
                if stride > 0 && k.is_multiple_of(stride) {
                    let p = out.join(format!("step_{k:07}.csv"));
                    s.snapshot(&p)?;
                    files.push(p);
                }
            } else {
                // off the time grid; the following step returns to it
                s.advance(target)?;
            }
        }
        if let Some(i) = label {
            let p = out.join(format!("snapshot_{i:03}.csv"));
            s.snapshot(&p)?;
            files.push(p);
        }
    }
    let p = out.join("final.csv");
    s.snapshot(&p)?;
    files.push(p);
    let p = out.join("trace.csv");
    io::write_trace(&trace, &p)?;
    files.push(p);
    Ok(files)
}

fn run_swe(c: &SweConfig, out: &Path) -> Result<Outcome> {
    let params = SweParams::new(c.g, c.h0, c.courant)?;
    let grid = Grid1D::new(c.x_left, c.length, c.n_x)?;
    let forcing = if c.amplitude == 0.0 {
        BoundaryForcing::zero()
    } else {
        BoundaryForcing::sine(c.amplitude, c.period)
    };
    let mut run = SweRun::new(grid, params, WaveState::at_rest(c.n_x), forcing)?;
    run.right = match c.right {
        RightEdge::Extrapolate => swe::RightBoundary::Extrapolate,
        RightEdge::Wall => swe::RightBoundary::Wall,
    };
    run.strict_cfl = c.strict_cfl;
    let q0 = run.state.q_trace;
    let mut s = SweStepper {
        run,
        last_q_boundary: q0,
    };
    let files = drive(&mut s, c.t_final, &c.snapshot_times, c.snapshot_stride, out)?;
    Ok(Outcome {
        files,
        warnings: s.run.warnings().to_vec(),
    })
}

/// Initial fields on nodes `0..=n_x` and the generating forcing.
fn boussinesq_setup(
    c: &BoussinesqConfig,
    params: DimensionlessParams,
    grid: &Grid1D,
) -> Result<(Vec<f64>, Vec<f64>, BoundaryForcing)> {
    let n = grid.n_x();
    let profile = if c.initial == Initial::Soliton || c.forcing == ForcingKind::Soliton {
        let spec = SolitonSpec::new(c.zeta_max, params, 1.0)?;
        Some(soliton_profile(&spec, wavegen_core::soliton::DEFAULT_STEP)?)
    } else {
        None
    };
    let (zeta, q) = match c.initial {
        Initial::Rest => (vec![0.0; n + 1], vec![0.0; n + 1]),
        Initial::Gaussian => (0..=n).map(|i| gaussian_initial(grid.x(i), 0.5 * c.length)).unzip(),
        Initial::Soliton => {
            let d = soliton_initial_data(profile.as_ref().expect("built above"), grid, c.x_center);
            (d.zeta, d.q)
        }
    };
    let forcing = match c.forcing {
        ForcingKind::Sine => BoundaryForcing::sine(c.amplitude, c.period),
        ForcingKind::Zero => BoundaryForcing::zero(),
        ForcingKind::Trace => io::read_trace(c.trace_file.as_deref().expect("checked by the config"))?,
        ForcingKind::Soliton => profile
            .as_ref()
            .expect("built above")
            .boundary_forcing(grid.x_left(), c.x_center),
    };
    Ok((zeta, q, forcing))
}

fn run_boussinesq(c: &BoussinesqConfig, out: &Path) -> Result<Outcome> {
    let params = DimensionlessParams::new(c.eps.unwrap_or_default(), c.mu.unwrap_or_default())?;
    let grid = Grid1D::new(c.x_left, c.length, c.n_x)?;
    let (zeta, q, forcing) = boussinesq_setup(c, params, &grid)?;
    let mut warnings = Vec::new();
    if c.boundary == Boundary::Generating {
        let rep = check_compatibility(&grid, &zeta, &q, &forcing, 0.0)?;
        if !rep.pass {
            warnings.push(format!(
                "initial data and forcing are not compatible: elevation residual {:e}, slope residual {:e}, tolerance {:e}",
                rep.elevation_residual, rep.slope_residual, rep.tolerance
            ));
        }
    }
    let closure = match c.boundary {
        Boundary::Generating => Closure::Generating {
            forcing,
            right: match c.right {
                RightEdge::Extrapolate => RightBoundary::Extrapolate,
                RightEdge::Wall => RightBoundary::Wall,
            },
        },
        Boundary::Periodic => Closure::Periodic,
    };
    let state = WaveState::new(zeta[1..].to_vec(), q[1..].to_vec(), q[0], 0.0)?;
    let run = BoussinesqRun::new(params, grid, state, closure, c.courant)?;
    let mut s = BoussinesqStepper { run, max_cfl: 0.0 };
    let files = drive(&mut s, c.t_final, &c.snapshot_times, c.snapshot_stride, out)?;
    if s.max_cfl > 1.0 {
        warnings.push(format!(
            "hyperbolic CFL number reached {:.3} (diagnostic only; the dispersive scheme has no sharp bound)",
            s.max_cfl
        ));
    }
    Ok(Outcome { files, warnings })
}

fn make_soliton(c: &SolitonConfig, out: &Path) -> Result<(Outcome, Json)> {
    let params = DimensionlessParams::new(c.eps.unwrap_or_default(), c.mu.unwrap_or_default())?;
    let spec = SolitonSpec::new(c.zeta_max, params, c.direction)?;
    let profile = soliton_profile(&spec, c.step)?;
    let path = out.join("soliton_profile.csv");
    io::write_rows(&path, &PROFILE_HEADER, profile.rows(c.spacing))?;
    let details = json!({
        "speed": profile.c,
        "radius": profile.radius(),
        "crest": profile.zeta(0.0),
    });
    Ok((
        Outcome {
            files: vec![path],
            warnings: Vec::new(),
        },
        details,
    ))
}

/// The named scenario with the config's overrides applied and checked.
pub fn build_scenario(c: &ValidateConfig) -> Result<Scenario> {
    let kind: ScenarioKind = c.scenario.as_deref().unwrap_or_default().parse()?;
    let params = DimensionlessParams::new(c.eps.unwrap_or_default(), c.mu.unwrap_or_default())?;
    let mut sc = validation::scenario(kind, params);
    if let Some(v) = c.courant {
        sc.courant = v;
    }
    if let Some(v) = c.t_final {
        sc.t_final = v;
    }
    if let Some(v) = c.reference_nx {
        sc.reference_nx = v;
    }
    if let Some(v) = &c.coarse_nx {
        sc.coarse_nx = v.clone();
    }
    sc.validate()?;
    Ok(sc)
}

fn validate(c: &ValidateConfig, out: &Path) -> Result<(Outcome, Json)> {
    let sc = build_scenario(c)?;
    let threads = c.parallel.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {threads} workers: {e}")))?;
    let (study, reference) = pool.install(|| validation::run_study(&sc, threads > 1))?;

    let mut files = Vec::new();
    let warnings = study.warnings.clone();
    let p = out.join("table.csv");
    io::write_text(&p, &study.table.to_csv())?;
    files.push(p);
    if !reference.trace.is_empty() {
        let p = out.join("reference_trace.csv");
        io::write_trace(&reference.trace, &p)?;
        files.push(p);
    }
    for level in &study.levels {
        if let (Some(run), Some(reference)) = (&level.final_run, &level.final_reference) {
            let p = out.join(format!("level_{}.csv", level.n));
            io::write_snapshot_data(run, &p)?;
            files.push(p);
            let p = out.join(format!("reference_{}.csv", level.n));
            io::write_snapshot_data(reference, &p)?;
            files.push(p);
        }
        if level.diverged {
            continue;
        }
        let r = &level.report;
        let p = out.join(format!("errors_{}.csv", level.n));
        let rows = (0..r.times.len()).map(|k| [r.times[k], r.e_zeta_t[k], r.e_q_t[k]]);
        io::write_rows(&p, &ERROR_HEADER, rows)?;
        files.push(p);
    }
    let details = json!({
        "scenario": study.scenario,
        "threads": threads,
        "reference_runtime_s": study.reference_runtime_s,
        "levels": study.levels,
        "table": study.table,
    });
    Ok((Outcome { files, warnings }, details))
}
