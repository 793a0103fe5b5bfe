//! Grid convergence studies for the generating boundary.
//!
//! A reference solution is computed on a large domain with a fine mesh, or
//! taken from an exact traveling wave. Its elevation at the left edge of a
//! smaller domain is then imposed as generating data for runs on coarser
//! meshes of the small domain, and those runs are compared with the
//! reference restricted to the small domain.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::boussinesq::{check_compatibility, BoussinesqRun, Closure, RightBoundary};
use crate::error::{Error, Result};
use crate::forcing::BoundaryForcing;
use crate::grid::Grid1D;
use crate::io::{Snapshot, TraceRecord};
use crate::soliton::{soliton_profile, SolitonProfile, SolitonSpec, DEFAULT_STEP};
use crate::state::{DimensionlessParams, WaveState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioKind {
    Gaussian,
    Soliton,
    Sinusoidal,
}

impl std::str::FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(ScenarioKind::Gaussian),
            "soliton" => Ok(ScenarioKind::Soliton),
            "sinusoidal" => Ok(ScenarioKind::Sinusoidal),
            other => Err(Error::Config(format!("unknown scenario {other:?}"))),
        }
    }
}

/// Times at which coarse runs are compared with the reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Comparison {
    /// Every coarse time step on `[0, T_f]`.
    EveryStep,
    /// `T_f` only.
    Final,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    pub kind: ScenarioKind,
    pub params: DimensionlessParams,
    pub large_domain: (f64, f64),
    pub small_domain: (f64, f64),
    pub t_final: f64,
    /// Cells of the reference mesh on the large domain.
    pub reference_nx: usize,
    /// Coarse resolutions, written as `dx = dx_numerator / n`.
    pub coarse_nx: Vec<usize>,
    pub dx_numerator: f64,
    pub courant: f64,
    pub error_window: Option<(f64, f64)>,
    pub comparison: Comparison,
    /// Soliton crest position at `t = 0`.
    pub x_center: f64,
    pub zeta_max: f64,
    /// Sinusoidal forcing amplitude and period.
    pub wave_amplitude: f64,
    pub wave_period: f64,
}

/// Two Gaussians, `exp(-6 (x + 0.1 L)^2) +/- exp(-6 (x - 0.3 L)^2)`.
pub fn gaussian_initial(x: f64, half_length: f64) -> (f64, f64) {
    let a = (-6.0 * (x + 0.1 * half_length).powi(2)).exp();
    let b = (-6.0 * (x - 0.3 * half_length).powi(2)).exp();
    (a + b, a - b)
}

pub fn scenario_gaussian(params: DimensionlessParams) -> Scenario {
    Scenario {
        kind: ScenarioKind::Gaussian,
        params,
        large_domain: (-5.0, 5.0),
        small_domain: (0.0, 5.0),
        t_final: 2.0,
        reference_nx: 3600,
        coarse_nx: vec![90, 120, 150, 180, 200, 300, 360],
        dx_numerator: 5.0,
        courant: 0.9,
        error_window: None,
        comparison: Comparison::EveryStep,
        x_center: 0.0,
        zeta_max: 1.0,
        wave_amplitude: 0.0,
        wave_period: 0.0,
    }
}

pub fn scenario_soliton(params: DimensionlessParams) -> Scenario {
    let courant = if params.eps() > 0.2 { 0.8 } else { 0.9 };
    let c = crate::soliton::soliton_speed(1.0, params.eps()).unwrap_or(1.0);
    Scenario {
        kind: ScenarioKind::Soliton,
        params,
        large_domain: (-10.0, 10.0),
        small_domain: (0.0, 10.0),
        // crest travels the length of the small domain
        t_final: 10.0 / c,
        reference_nx: 0,
        coarse_nx: vec![100, 200, 400, 800, 1200],
        dx_numerator: 10.0,
        courant,
        error_window: None,
        comparison: Comparison::Final,
        x_center: -5.0,
        zeta_max: 1.0,
        wave_amplitude: 0.0,
        wave_period: 0.0,
    }
}

pub fn scenario_sinusoidal(params: DimensionlessParams) -> Scenario {
    Scenario {
        kind: ScenarioKind::Sinusoidal,
        params,
        large_domain: (-10.0, 10.0),
        small_domain: (-8.0, 10.0),
        t_final: 15.0,
        reference_nx: 3600,
        coarse_nx: vec![100, 120, 150, 180, 200, 300, 360, 400, 600],
        dx_numerator: 20.0,
        courant: 0.9,
        error_window: Some((-8.0, -6.0)),
        comparison: Comparison::Final,
        x_center: 0.0,
        zeta_max: 0.0,
        wave_amplitude: 1.0,
        wave_period: 5.0,
    }
}

pub fn scenario(kind: ScenarioKind, params: DimensionlessParams) -> Scenario {
    match kind {
        ScenarioKind::Gaussian => scenario_gaussian(params),
        ScenarioKind::Soliton => scenario_soliton(params),
        ScenarioKind::Sinusoidal => scenario_sinusoidal(params),
    }
}

impl Scenario {
    pub fn coarse_dx(&self, n: usize) -> f64 {
        self.dx_numerator / n as f64
    }

    pub fn reference_grid(&self) -> Result<Grid1D> {
        let (a, b) = self.large_domain;
        Grid1D::new(a, b - a, self.reference_nx)
    }

    /// Grid of the small domain for resolution label `n`.
    pub fn coarse_grid(&self, n: usize) -> Result<Grid1D> {
        let (a, b) = self.small_domain;
        let cells = (b - a) / self.coarse_dx(n);
        let m = cells.round();
        if (cells - m).abs() > 1e-9 * cells {
            return Err(Error::Config(format!(
                "dx = {}/{n} does not divide the small domain [{a}, {b}]",
                self.dx_numerator
            )));
        }
        Grid1D::new(a, b - a, m as usize)
    }

    /// Checks parameters and that every coarse mesh is nested in the reference mesh.
    pub fn validate(&self) -> Result<()> {
        if self.coarse_nx.is_empty() {
            return Err(Error::Config("no coarse resolutions".into()));
        }
        if !(self.courant > 0.0 && self.courant <= 1.0) {
            return Err(Error::Config(format!("courant must lie in (0, 1], got {}", self.courant)));
        }
        if !(self.t_final > 0.0) {
            return Err(Error::Config(format!("final time must be positive, got {}", self.t_final)));
        }
        if self.coarse_nx.contains(&0) {
            return Err(Error::Config("coarse n_x must be positive".into()));
        }
        for n in &self.coarse_nx {
            self.coarse_grid(*n)?;
        }
        if self.kind == ScenarioKind::Soliton {
            return Ok(());
        }
        let fine = self.reference_grid()?;
        if fine.node_at(self.small_domain.0, 1e-9).is_none() {
            return Err(Error::Config("small domain edge is not a reference node".into()));
        }
        for n in &self.coarse_nx {
            let ratio = self.coarse_dx(*n) / fine.dx();
            if (ratio - ratio.round()).abs() > 1e-9 * ratio {
                return Err(Error::Config(format!(
                    "coarse mesh dx = {}/{n} is not nested in the reference mesh",
                    self.dx_numerator
                )));
            }
        }
        Ok(())
    }

    /// Denominators of the relative errors for `(zeta, q)`.
    fn normalization(&self, reference: &Reference) -> (f64, f64) {
        match self.kind {
            ScenarioKind::Gaussian => reference.initial_max,
            ScenarioKind::Soliton => reference.initial_max,
            // the large-domain initial fields vanish identically
            ScenarioKind::Sinusoidal => (self.wave_amplitude, self.wave_amplitude),
        }
    }
}

/// Relative sup-norm errors of one coarse run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    pub dx: f64,
    pub times: Vec<f64>,
    pub e_zeta_t: Vec<f64>,
    pub e_q_t: Vec<f64>,
    pub e_zeta: f64,
    pub e_q: f64,
}

/// Compares coarse and reference snapshots taken at the same times and
/// locations, restricted to `window` when given.
pub fn error_norms(
    coarse: &[Snapshot],
    reference: &[Snapshot],
    normalization: (f64, f64),
    window: Option<(f64, f64)>,
) -> Result<ErrorReport> {
    if coarse.len() != reference.len() {
        return Err(Error::Config(format!(
            "{} coarse snapshots vs {} reference snapshots",
            coarse.len(),
            reference.len()
        )));
    }
    let (nz, nq) = normalization;
    if !(nz > 0.0) || !(nq > 0.0) {
        return Err(Error::Config("error normalization must be positive".into()));
    }
    let mut times = Vec::with_capacity(coarse.len());
    let mut e_zeta_t = Vec::with_capacity(coarse.len());
    let mut e_q_t = Vec::with_capacity(coarse.len());
    let mut dx = 0.0;
    for (c, r) in coarse.iter().zip(reference) {
        if c.x.len() != r.x.len() || (c.t - r.t).abs() > 1e-9 * c.t.abs().max(1.0) {
            return Err(Error::Config(format!(
                "snapshot mismatch at t = {} (reference t = {})",
                c.t, r.t
            )));
        }
        if c.x.len() > 1 {
            dx = c.x[1] - c.x[0];
        }
        let mut ez: f64 = 0.0;
        let mut eq: f64 = 0.0;
        for i in 0..c.x.len() {
            if (c.x[i] - r.x[i]).abs() > 1e-9 * c.x[i].abs().max(1.0) {
                return Err(Error::Config(format!(
                    "coarse node {} does not coincide with a reference node",
                    c.x[i]
                )));
            }
            if let Some((a, b)) = window {
                let tol = 1e-9 * (b - a).abs();
                if c.x[i] < a - tol || c.x[i] > b + tol {
                    continue;
                }
            }
            ez = ez.max((c.zeta[i] - r.zeta[i]).abs());
            eq = eq.max((c.q[i] - r.q[i]).abs());
        }
        times.push(c.t);
        e_zeta_t.push(ez / nz);
        e_q_t.push(eq / nq);
    }
    let e_zeta = e_zeta_t.iter().copied().fold(0.0, f64::max);
    let e_q = e_q_t.iter().copied().fold(0.0, f64::max);
    Ok(ErrorReport {
        dx,
        times,
        e_zeta_t,
        e_q_t,
        e_zeta,
        e_q,
    })
}

/// `ln(e1 / e2) / ln(dx1 / dx2)`; `None` when an error vanishes.
pub fn convergence_order(e_coarsest: f64, dx_coarsest: f64, e_other: f64, dx_other: f64) -> Option<f64> {
    if !(e_coarsest > 0.0) || !(e_other > 0.0) || !(dx_coarsest > 0.0) || !(dx_other > 0.0) {
        return None;
    }
    if dx_coarsest == dx_other {
        return None;
    }
    Some((e_coarsest / e_other).ln() / (dx_coarsest / dx_other).ln())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub dx: f64,
    pub e_zeta: f64,
    pub order_zeta: Option<f64>,
    pub e_q: f64,
    pub order_q: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub rows: Vec<TableRow>,
}

pub const TABLE_HEADER: [&str; 5] = ["dx", "e_zeta", "order_zeta", "e_q", "order_q"];

impl ConvergenceTable {
    /// Rows in the order given; orders are computed against the coarsest
    /// row with finite errors, so diverged levels do not blank the column.
    pub fn build(reports: &[ErrorReport]) -> Self {
        let coarsest = reports
            .iter()
            .filter(|r| r.e_zeta.is_finite() && r.e_q.is_finite())
            .max_by(|a, b| a.dx.total_cmp(&b.dx))
            .cloned();
        let rows = reports
            .iter()
            .map(|r| {
                let (oz, oq) = match &coarsest {
                    Some(c) if c.dx != r.dx => (
                        convergence_order(c.e_zeta, c.dx, r.e_zeta, r.dx),
                        convergence_order(c.e_q, c.dx, r.e_q, r.dx),
                    ),
                    _ => (None, None),
                };
                TableRow {
                    dx: r.dx,
                    e_zeta: r.e_zeta,
                    order_zeta: oz,
                    e_q: r.e_q,
                    order_q: oq,
                }
            })
            .collect();
        Self { rows }
    }

    /// CSV text; undefined orders are left empty.
    pub fn to_csv(&self) -> String {
        let opt = |o: Option<f64>| o.map(crate::io::fmt_num).unwrap_or_default();
        let mut out = TABLE_HEADER.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                crate::io::fmt_num(r.dx),
                crate::io::fmt_num(r.e_zeta),
                opt(r.order_zeta),
                crate::io::fmt_num(r.e_q),
                opt(r.order_q)
            ));
        }
        out
    }
}

#[derive(Debug, Clone)]
enum ReferenceSource {
    /// Fine-mesh run, snapshots restricted to the small domain.
    Recorded {
        grid: Grid1D,
        dt: f64,
        /// Index of the small domain's left edge in the fine mesh.
        first_node: usize,
        snapshots: BTreeMap<usize, (Vec<f64>, Vec<f64>)>,
    },
    Soliton {
        profile: SolitonProfile,
        x_center: f64,
    },
}

/// Reference solution on the small domain plus its left-edge trace.
#[derive(Debug, Clone)]
pub struct Reference {
    source: ReferenceSource,
    /// `(zeta, q)` at the left edge of the small domain at every fine step.
    pub trace: TraceRecord,
    /// Sup norms of the large-domain initial fields.
    pub initial_max: (f64, f64),
    pub forcing: BoundaryForcing,
    pub runtime_s: f64,
}

impl Reference {
    /// Reference fields at time `t` on nodes `xs`.
    pub fn sample(&self, t: f64, xs: &[f64]) -> Result<Snapshot> {
        match &self.source {
            ReferenceSource::Recorded {
                grid,
                dt,
                first_node,
                snapshots,
            } => {
                let k = (t / dt).round();
                if (t / dt - k).abs() > 1e-7 {
                    return Err(Error::Config(format!(
                        "time {t} is not a reference time step"
                    )));
                }
                let (zeta, q) = snapshots.get(&(k as usize)).ok_or_else(|| {
                    Error::Config(format!("no reference snapshot recorded at t = {t}"))
                })?;
                let mut snap = Snapshot {
                    t,
                    ..Default::default()
                };
                for x in xs {
                    let j = grid.node_at(*x, 1e-7).ok_or_else(|| {
                        Error::Config(format!("node {x} is not on the reference mesh"))
                    })?;
                    let local = j.checked_sub(*first_node).filter(|l| *l < zeta.len()).ok_or_else(
                        || Error::Config(format!("node {x} is outside the recorded window")),
                    )?;
                    snap.x.push(*x);
                    snap.zeta.push(zeta[local]);
                    snap.q.push(q[local]);
                }
                Ok(snap)
            }
            ReferenceSource::Soliton { profile, x_center } => {
                let mut snap = Snapshot {
                    t,
                    ..Default::default()
                };
                for x in xs {
                    let (z, q) = profile.exact(*x, t, *x_center);
                    snap.x.push(*x);
                    snap.zeta.push(z);
                    snap.q.push(q);
                }
                Ok(snap)
            }
        }
    }
}

/// Coarse-step times `n dt_c` on `[0, t_final]`, with `t_final` appended.
fn comparison_times(scenario: &Scenario, dt: f64) -> Vec<f64> {
    match scenario.comparison {
        Comparison::Final => vec![scenario.t_final],
        Comparison::EveryStep => {
            let mut ts = Vec::new();
            let mut n = 0usize;
            loop {
                let t = n as f64 * dt;
                if t >= scenario.t_final - 1e-9 * dt {
                    break;
                }
                ts.push(t);
                n += 1;
            }
            ts.push(scenario.t_final);
            ts
        }
    }
}

/// Runs (or constructs) the reference solution of a scenario.
pub fn run_reference(scenario: &Scenario) -> Result<Reference> {
    scenario.validate()?;
    let start = Instant::now();
    let params = scenario.params;
    if scenario.kind == ScenarioKind::Soliton {
        let spec = SolitonSpec::new(scenario.zeta_max, params, 1.0)?;
        let profile = soliton_profile(&spec, DEFAULT_STEP)?;
        let x_b = scenario.small_domain.0;
        let forcing = profile.boundary_forcing(x_b, scenario.x_center);
        let initial_max = (profile.zeta_max, profile.c.abs() * profile.zeta_max);
        return Ok(Reference {
            source: ReferenceSource::Soliton {
                profile,
                x_center: scenario.x_center,
            },
            trace: TraceRecord::default(),
            initial_max,
            forcing,
            runtime_s: start.elapsed().as_secs_f64(),
        });
    }

    let grid = scenario.reference_grid()?;
    let n = grid.n_x();
    let (closure, state) = match scenario.kind {
        ScenarioKind::Gaussian => {
            let half = 0.5 * (scenario.large_domain.1 - scenario.large_domain.0);
            let (zeta, q): (Vec<f64>, Vec<f64>) =
                (1..=n).map(|i| gaussian_initial(grid.x(i), half)).unzip();
            (Closure::Periodic, WaveState::new(zeta, q, 0.0, 0.0)?)
        }
        ScenarioKind::Sinusoidal => (
            Closure::Generating {
                forcing: BoundaryForcing::sine(scenario.wave_amplitude, scenario.wave_period),
                right: RightBoundary::Extrapolate,
            },
            WaveState::at_rest(n),
        ),
        ScenarioKind::Soliton => unreachable!(),
    };
    let max_abs = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let initial_max = (max_abs(&state.zeta), max_abs(&state.q));
    let mut run = BoussinesqRun::new(params, grid, state, closure, scenario.courant)?;
    let dt = run.dt();

    let first_node = grid
        .node_at(scenario.small_domain.0, 1e-9)
        .ok_or_else(|| Error::Config("small domain edge is not a reference node".into()))?;
    let last_node = grid
        .node_at(scenario.small_domain.1, 1e-9)
        .ok_or_else(|| Error::Config("small domain edge is not a reference node".into()))?;

    // fine steps at which some coarse run needs the reference
    let mut wanted = std::collections::BTreeSet::from([0usize]);
    for nx in &scenario.coarse_nx {
        let dt_c = scenario.courant * scenario.coarse_dx(*nx);
        for t in comparison_times(scenario, dt_c) {
            let k = (t / dt).round();
            if (t / dt - k).abs() > 1e-7 {
                return Err(Error::Config(format!(
                    "comparison time {t} of n_x = {nx} is not a reference time step"
                )));
            }
            wanted.insert(k as usize);
        }
    }
    let total_steps = ((scenario.t_final / dt) - 1e-9).ceil() as usize;

    let node_value = |run: &BoussinesqRun, j: usize| -> (f64, f64) {
        // j >= 1 always: the small domain starts inside the large one
        (run.state.zeta[j - 1], run.state.q[j - 1])
    };
    let record = |run: &BoussinesqRun| -> (Vec<f64>, Vec<f64>) {
        (first_node..=last_node).map(|j| node_value(run, j)).unzip()
    };

    let mut trace = TraceRecord::default();
    let mut snapshots = BTreeMap::new();
    for k in 0..=total_steps {
        if k > 0 {
            run.step_to(k as f64 * dt).map_err(|e| {
                log::error!("reference run of {:?} failed: {e}", scenario.kind);
                e
            })?;
        }
        let (z, q) = node_value(&run, first_node);
        trace.push(run.state.t, z, q);
        if wanted.contains(&k) {
            snapshots.insert(k, record(&run));
        }
    }
    let forcing = trace.to_forcing()?;
    Ok(Reference {
        source: ReferenceSource::Recorded {
            grid,
            dt,
            first_node,
            snapshots,
        },
        trace,
        initial_max,
        forcing,
        runtime_s: start.elapsed().as_secs_f64(),
    })
}

/// Outcome of one coarse run.
#[derive(Debug, Clone, Serialize)]
pub struct LevelResult {
    pub n: usize,
    pub cells: usize,
    pub report: ErrorReport,
    pub runtime_s: f64,
    pub warnings: Vec<String>,
    /// Set when the coarse run blew up; errors are then NaN.
    pub diverged: bool,
    /// Coarse solution and reference at the last comparison time.
    #[serde(skip)]
    pub final_run: Option<Snapshot>,
    #[serde(skip)]
    pub final_reference: Option<Snapshot>,
}

/// Runs the scenario on coarse mesh `n` and measures its error.
pub fn run_level(scenario: &Scenario, reference: &Reference, n: usize) -> Result<LevelResult> {
    let start = Instant::now();
    let grid = scenario.coarse_grid(n)?;
    let nodes: Vec<f64> = (0..=grid.n_x()).map(|i| grid.x(i)).collect();
    let init = reference.sample(0.0, &nodes)?;
    let mut warnings = Vec::new();
    let compat = check_compatibility(&grid, &init.zeta, &init.q, &reference.forcing, 0.0)?;
    if !compat.pass {
        warnings.push(format!(
            "n_x = {n}: initial data incompatible with forcing (|zeta0(0) - f(0)| = {:.3e}, |-q0'(0) - f'(0)| = {:.3e}, tolerance {:.3e})",
            compat.elevation_residual, compat.slope_residual, compat.tolerance
        ));
    }
    let state = WaveState::new(init.zeta[1..].to_vec(), init.q[1..].to_vec(), init.q[0], 0.0)?;
    let closure = Closure::Generating {
        forcing: reference.forcing.clone(),
        right: RightBoundary::Extrapolate,
    };
    let mut run = BoussinesqRun::new(scenario.params, grid, state, closure, scenario.courant)?;
    let dt = run.dt();
    let times = comparison_times(scenario, dt);
    let window = scenario.error_window;

    let interior = &nodes[1..];
    let snapshot = |run: &BoussinesqRun| Snapshot {
        t: run.state.t,
        x: interior.to_vec(),
        zeta: run.state.zeta.clone(),
        q: run.state.q.clone(),
    };
    let mut coarse = Vec::with_capacity(times.len());
    let mut refs = Vec::with_capacity(times.len());
    let mut step = 0usize;
    let mut max_cfl: f64 = 0.0;
    for &t in &times {
        while run.state.t < t - 1e-9 * dt {
            step += 1;
            let rep = run.step_to((step as f64 * dt).min(t))?;
            max_cfl = max_cfl.max(rep.hyperbolic_cfl);
        }
        coarse.push(snapshot(&run));
        refs.push(reference.sample(t, interior)?);
    }
    let mut report = error_norms(&coarse, &refs, scenario.normalization(reference), window)?;
    report.dx = scenario.coarse_dx(n);
    log::info!(
        "{:?} n_x={n}: e_zeta={:.3e} e_q={:.3e} (max hyperbolic CFL {:.3})",
        scenario.kind,
        report.e_zeta,
        report.e_q,
        max_cfl
    );
    Ok(LevelResult {
        n,
        cells: grid.n_x(),
        report,
        runtime_s: start.elapsed().as_secs_f64(),
        warnings,
        diverged: false,
        final_run: coarse.pop(),
        final_reference: refs.pop(),
    })
}

/// Like [`run_level`], but a diverging run yields a NaN row instead of an error.
pub fn run_level_tolerant(scenario: &Scenario, reference: &Reference, n: usize) -> Result<LevelResult> {
    let start = Instant::now();
    match run_level(scenario, reference, n) {
        Err(Error::Divergence { step, t }) => {
            let msg = format!("n_x = {n}: diverged at step {step} (t = {t})");
            log::warn!("{msg}");
            Ok(LevelResult {
                n,
                cells: scenario.coarse_grid(n)?.n_x(),
                report: ErrorReport {
                    dx: scenario.coarse_dx(n),
                    times: vec![],
                    e_zeta_t: vec![],
                    e_q_t: vec![],
                    e_zeta: f64::NAN,
                    e_q: f64::NAN,
                },
                runtime_s: start.elapsed().as_secs_f64(),
                warnings: vec![msg],
                diverged: true,
                final_run: None,
                final_reference: None,
            })
        }
        other => other,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StudyResult {
    pub scenario: Scenario,
    pub levels: Vec<LevelResult>,
    pub table: ConvergenceTable,
    pub reference_runtime_s: f64,
    pub warnings: Vec<String>,
}

/// Reference run followed by every coarse run; coarse runs execute on the
/// current rayon pool when `parallel` is set. Diverging levels are kept as
/// NaN rows.
pub fn run_study(scenario: &Scenario, parallel: bool) -> Result<(StudyResult, Reference)> {
    let reference = run_reference(scenario)?;
    let levels: Vec<LevelResult> = if parallel {
        scenario
            .coarse_nx
            .par_iter()
            .map(|n| run_level_tolerant(scenario, &reference, *n))
            .collect::<Result<_>>()?
    } else {
        scenario
            .coarse_nx
            .iter()
            .map(|n| run_level_tolerant(scenario, &reference, *n))
            .collect::<Result<_>>()?
    };
    let reports: Vec<ErrorReport> = levels.iter().map(|l| l.report.clone()).collect();
    let table = ConvergenceTable::build(&reports);
    let warnings = levels.iter().flat_map(|l| l.warnings.clone()).collect();
    Ok((
        StudyResult {
            scenario: scenario.clone(),
            levels,
            table,
            reference_runtime_s: reference.runtime_s,
            warnings,
        },
        reference,
    ))
}

/// Deviation of a soliton from its initial shape after one period on a
/// periodic domain `[-half_length, half_length]`, relative to `zeta_max`.
pub fn soliton_round_trip(
    params: DimensionlessParams,
    zeta_max: f64,
    half_length: f64,
    n_x: usize,
    courant: f64,
) -> Result<f64> {
    let spec = SolitonSpec::new(zeta_max, params, 1.0)?;
    let profile = soliton_profile(&spec, DEFAULT_STEP)?;
    let grid = Grid1D::new(-half_length, 2.0 * half_length, n_x)?;
    let (zeta, q): (Vec<f64>, Vec<f64>) = (1..=n_x).map(|i| profile.exact(grid.x(i), 0.0, 0.0)).unzip();
    let initial = zeta.clone();
    let state = WaveState::new(zeta, q, 0.0, 0.0)?;
    let mut run = BoussinesqRun::new(params, grid, state, Closure::Periodic, courant)?;
    let period = 2.0 * half_length / profile.c.abs();
    run.advance_to(period)?;
    let dev = run
        .state
        .zeta
        .iter()
        .zip(&initial)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(dev / zeta_max)
}
