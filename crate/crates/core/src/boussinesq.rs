//! Dimensionless Boussinesq-Abbott solver with a generating boundary.
//!
//! The momentum equation is integrated in the form
//!
//! ```text
//! d_t q + d_x R1 flux(zeta, q) = Q(q_b, f, f'', zeta, q) exp(-x / delta)
//! ```
//!
//! where `R1` is the Neumann inverse of `1 - (mu/3) d_xx`, `delta = sqrt(mu/3)`
//! and the boundary discharge `q_b` follows `d_t q_b = Q`. The scalar `Q` only
//! needs the boundary value of `R1 flux`, which is available from the same
//! tridiagonal solve used for the interior, so a generating boundary costs
//! nothing beyond a periodic run.

use crate::dispersive::{NeumannInverse, PeriodicInverse};
use crate::error::{Error, Result};
use crate::forcing::{BoundaryForcing, ForcingSample};
use crate::grid::Grid1D;
pub use crate::swe::RightBoundary;
use crate::state::{DimensionlessParams, WaveState};

/// Nodal momentum flux `(h^2 - 1) / (2 eps) + eps q^2 / h`, `h = 1 + eps zeta`.
pub fn sw_flux_dimensionless(zeta: f64, q: f64, params: &DimensionlessParams) -> Result<f64> {
    let eps = params.eps();
    let h = 1.0 + eps * zeta;
    if !(h > 0.0) {
        return Err(Error::depth(h, "momentum flux"));
    }
    // (h^2 - 1) / (2 eps) = zeta (1 + eps zeta / 2), exact zero at rest
    Ok(zeta * (1.0 + 0.5 * eps * zeta) + eps * q * q / h)
}

/// Coefficient of the boundary-layer source, also the rate of change of the
/// boundary discharge.
pub fn source_amplitude(
    q_trace: f64,
    f: f64,
    fddot: f64,
    fmu0: f64,
    params: &DimensionlessParams,
) -> Result<f64> {
    let eps = params.eps();
    let delta = params.delta();
    let hb = 1.0 + eps * f;
    if !(hb > 0.0) {
        return Err(Error::depth(hb, "generating boundary"));
    }
    Ok(eps / delta * q_trace * q_trace / hb + delta * fddot + (1.0 + 0.5 * eps * f) * f / delta
        - fmu0 / delta)
}

/// Explicit Euler update of the boundary discharge.
pub fn advance_trace(q_trace: f64, amplitude: f64, dt: f64) -> f64 {
    q_trace + dt * amplitude
}

/// `amplitude * exp(-(x_i - x_left) / delta)` on the unknown nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceProfile {
    pub amplitude: f64,
    decay: Vec<f64>,
    delta: f64,
}

impl SourceProfile {
    pub fn new(grid: &Grid1D, delta: f64) -> Self {
        let decay = (1..=grid.n_x())
            .map(|i| (-(grid.x(i) - grid.x_left()) / delta).exp())
            .collect();
        Self {
            amplitude: 0.0,
            decay,
            delta,
        }
    }

    pub fn decay(&self) -> &[f64] {
        &self.decay
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Decay factor at distance `s` from the boundary.
    pub fn decay_at(&self, s: f64) -> f64 {
        (-s / self.delta).exp()
    }
}

/// Boundary treatment of a run.
#[derive(Debug, Clone)]
pub enum Closure {
    /// Wave-maker on the left edge.
    Generating {
        forcing: BoundaryForcing,
        right: RightBoundary,
    },
    /// Node `n_x` is the left neighbour of node 1.
    Periodic,
}

#[derive(Debug, Clone)]
enum Inverse {
    Neumann(NeumannInverse),
    Periodic(PeriodicInverse),
}

impl Inverse {
    fn apply_into(&self, rhs: &[f64], out: &mut [f64]) -> Result<()> {
        match self {
            Inverse::Neumann(op) => op.apply_into(rhs, out),
            Inverse::Periodic(op) => op.apply_into(rhs, out),
        }
    }
}

/// Diagnostics of one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport {
    pub dt: f64,
    /// Numerical flux through the left face of node 1.
    pub left_flux: (f64, f64),
    /// Numerical flux through the right face of node `n_x`.
    pub right_flux: (f64, f64),
    /// Source amplitude used in this step (zero for periodic runs).
    pub source_amplitude: f64,
    pub q_trace_before: f64,
    pub q_trace_after: f64,
    pub fmu0: f64,
    pub forcing: ForcingSample,
    /// Largest `|eps q / h +- sqrt(h)| dt / dx` over the nodes.
    pub hyperbolic_cfl: f64,
}

/// A Boussinesq run: parameters, grid, state and boundary treatment.
#[derive(Debug, Clone)]
pub struct BoussinesqRun {
    pub params: DimensionlessParams,
    pub grid: Grid1D,
    pub state: WaveState,
    pub closure: Closure,
    /// `dt / dx`.
    pub courant: f64,
    inverse: Inverse,
    source: SourceProfile,
    steps: usize,
    flux: Vec<f64>,
    fmu: Vec<f64>,
    faces: Vec<(f64, f64)>,
}

impl BoussinesqRun {
    /// `state.q_trace` is the initial boundary discharge `q(t=0, x_left)`.
    pub fn new(
        params: DimensionlessParams,
        grid: Grid1D,
        state: WaveState,
        closure: Closure,
        courant: f64,
    ) -> Result<Self> {
        let n = grid.n_x();
        if state.len() != n {
            return Err(Error::Shape {
                expected: n,
                got: state.len(),
            });
        }
        if !(courant > 0.0 && courant <= 1.0) {
            return Err(Error::Parameter(format!(
                "courant ratio must lie in (0, 1], got {courant}"
            )));
        }
        state.check_depth(1.0, params.eps())?;
        let inverse = match closure {
            Closure::Generating { .. } => {
                Inverse::Neumann(NeumannInverse::new(n, params.mu(), grid.dx())?)
            }
            Closure::Periodic => Inverse::Periodic(PeriodicInverse::new(n, params.mu(), grid.dx())?),
        };
        let source = SourceProfile::new(&grid, params.delta());
        Ok(Self {
            params,
            grid,
            state,
            closure,
            courant,
            inverse,
            source,
            steps: 0,
            flux: vec![0.0; n],
            fmu: vec![0.0; n],
            faces: vec![(0.0, 0.0); n + 1],
        })
    }

    pub fn dt(&self) -> f64 {
        self.courant * self.grid.dx()
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn source(&self) -> &SourceProfile {
        &self.source
    }

    /// Nonlocal flux `R1 flux(U)` on the nodes and its boundary value.
    pub fn nonlocal_flux(&self, zeta: &[f64], q: &[f64]) -> Result<(Vec<f64>, f64)> {
        let n = self.grid.n_x();
        if zeta.len() != n || q.len() != n {
            return Err(Error::Shape {
                expected: n,
                got: zeta.len().min(q.len()),
            });
        }
        let nodal = zeta
            .iter()
            .zip(q)
            .map(|(z, q)| sw_flux_dimensionless(*z, *q, &self.params))
            .collect::<Result<Vec<_>>>()?;
        let mut out = vec![0.0; n];
        self.inverse.apply_into(&nodal, &mut out)?;
        let b = out[0];
        Ok((out, b))
    }

    /// One Lax-Friedrichs step of size `dt`.
    pub fn step(&mut self, dt: f64) -> Result<StepReport> {
        let n = self.grid.n_x();
        let dx = self.grid.dx();
        let eps = self.params.eps();
        let t = self.state.t;

        let mut max_speed: f64 = 0.0;
        for i in 0..n {
            let (z, q) = (self.state.zeta[i], self.state.q[i]);
            self.flux[i] = sw_flux_dimensionless(z, q, &self.params)?;
            let h = 1.0 + eps * z;
            max_speed = max_speed.max((eps * q / h).abs() + h.sqrt());
        }
        self.inverse.apply_into(&self.flux, &mut self.fmu)?;
        let fmu0 = self.fmu[0];

        let visc = dx / (2.0 * dt);
        let lf = |ul: (f64, f64), fl: (f64, f64), ur: (f64, f64), fr: (f64, f64)| {
            (
                0.5 * (fl.0 + fr.0) - visc * (ur.0 - ul.0),
                0.5 * (fl.1 + fr.1) - visc * (ur.1 - ul.1),
            )
        };
        let zeta = &self.state.zeta;
        let q = &self.state.q;
        let fmu = &self.fmu;
        for i in 1..n {
            self.faces[i] = lf(
                (zeta[i - 1], q[i - 1]),
                (q[i - 1], fmu[i - 1]),
                (zeta[i], q[i]),
                (q[i], fmu[i]),
            );
        }

        let q_before = self.state.q_trace;
        let (amplitude, forcing) = match &self.closure {
            Closure::Generating { forcing, right } => {
                let fs = forcing.sample(t)?;
                let amp = source_amplitude(q_before, fs.f, fs.fddot, fmu0, &self.params)?;
                self.faces[0] = lf((fs.f, q_before), (q_before, fmu0), (zeta[0], q[0]), (q[0], fmu[0]));
                let last = (zeta[n - 1], q[n - 1]);
                let last_flux = (q[n - 1], fmu[n - 1]);
                self.faces[n] = match right {
                    RightBoundary::Extrapolate => lf(last, last_flux, last, last_flux),
                    RightBoundary::Wall => {
                        lf(last, last_flux, (last.0, -last.1), (-last.1, fmu[n - 1]))
                    }
                };
                (amp, fs)
            }
            Closure::Periodic => {
                let wrap = lf(
                    (zeta[n - 1], q[n - 1]),
                    (q[n - 1], fmu[n - 1]),
                    (zeta[0], q[0]),
                    (q[0], fmu[0]),
                );
                self.faces[0] = wrap;
                self.faces[n] = wrap;
                (0.0, ForcingSample { f: 0.0, fddot: 0.0 })
            }
        };

        let r = dt / dx;
        self.source.amplitude = amplitude;
        let decay = &self.source.decay;
        for i in 0..n {
            self.state.zeta[i] -= r * (self.faces[i + 1].0 - self.faces[i].0);
            self.state.q[i] += -r * (self.faces[i + 1].1 - self.faces[i].1) + dt * amplitude * decay[i];
        }
        if matches!(self.closure, Closure::Generating { .. }) {
            self.state.q_trace = advance_trace(q_before, amplitude, dt);
        }
        self.state.t = t + dt;
        self.steps += 1;

        if !self.state.is_finite() {
            return Err(Error::Divergence {
                step: self.steps,
                t: self.state.t,
            });
        }
        self.state.check_depth(1.0, eps)?;
        Ok(StepReport {
            dt,
            left_flux: self.faces[0],
            right_flux: self.faces[n],
            source_amplitude: amplitude,
            q_trace_before: q_before,
            q_trace_after: self.state.q_trace,
            fmu0,
            forcing,
            hyperbolic_cfl: max_speed * dt / dx,
        })
    }

    /// Steps to exactly `t_target`.
    pub fn step_to(&mut self, t_target: f64) -> Result<StepReport> {
        let rep = self.step(t_target - self.state.t)?;
        self.state.t = t_target;
        Ok(rep)
    }

    /// Steps to `t_end` with times `t0 + n dt`, shortening the final step to
    /// land on `t_end`.
    pub fn advance_to(&mut self, t_end: f64) -> Result<()> {
        let dt = self.dt();
        let t0 = self.state.t;
        let mut n = 0usize;
        while self.state.t < t_end - 1e-9 * dt {
            n += 1;
            self.step_to((t0 + n as f64 * dt).min(t_end))?;
        }
        Ok(())
    }
}

/// Residuals of the two compatibility conditions between initial data and
/// boundary forcing: `zeta0(0) = f(0)` and `-q0'(0) = f'(0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompatibilityReport {
    pub elevation_residual: f64,
    pub slope_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// `zeta0` and `q0` are sampled on nodes `0..=n_x` (node 0 on the boundary).
/// Tolerance is `10 dx^2`. Failure is diagnostic only.
pub fn check_compatibility(
    grid: &Grid1D,
    zeta0: &[f64],
    q0: &[f64],
    forcing: &BoundaryForcing,
    t0: f64,
) -> Result<CompatibilityReport> {
    let need = grid.n_x() + 1;
    if zeta0.len() != need || q0.len() != need {
        return Err(Error::Shape {
            expected: need,
            got: zeta0.len().min(q0.len()),
        });
    }
    let dx = grid.dx();
    let f0 = forcing.sample(t0)?.f;
    let fdot0 = forcing.fdot(t0)?;
    let dq = (-3.0 * q0[0] + 4.0 * q0[1] - q0[2]) / (2.0 * dx);
    let elevation_residual = (zeta0[0] - f0).abs();
    let slope_residual = (-dq - fdot0).abs();
    let tolerance = 10.0 * dx * dx;
    Ok(CompatibilityReport {
        elevation_residual,
        slope_residual,
        tolerance,
        pass: elevation_residual <= tolerance && slope_residual <= tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> DimensionlessParams {
        DimensionlessParams::new(0.3, 0.3).unwrap()
    }

    #[test]
    fn flux_values() {
        let p = p3();
        assert_eq!(sw_flux_dimensionless(0.0, 0.0, &p).unwrap(), 0.0);
        assert!((sw_flux_dimensionless(1.0, 0.0, &p).unwrap() - 1.15).abs() < 1e-14);
        assert!((sw_flux_dimensionless(0.0, 1.0, &p).unwrap() - 0.3).abs() < 1e-15);
        assert!(sw_flux_dimensionless(-4.0, 0.0, &p).is_err());
    }

    #[test]
    fn source_amplitude_terms() {
        let p = p3();
        assert_eq!(source_amplitude(0.0, 0.0, 0.0, 0.0, &p).unwrap(), 0.0);
        let a = 1.7;
        assert!((source_amplitude(0.0, 0.0, a, 0.0, &p).unwrap() - p.delta() * a).abs() < 1e-15);
        let q = source_amplitude(1.0, 0.0, 0.0, 0.0, &p).unwrap();
        assert!((q - 0.948_683_298_050_513_8).abs() < 1e-12);
        assert!(source_amplitude(0.0, -10.0, 0.0, 0.0, &p).is_err());
    }

    #[test]
    fn trace_euler_step() {
        assert_eq!(advance_trace(0.0, 0.0, 0.3), 0.0);
        assert_eq!(advance_trace(1.0, 0.0, 0.1), 1.0);
        assert!((advance_trace(0.5, 2.0, 0.01) - 0.52).abs() < 1e-15);
    }

    #[test]
    fn source_profile_halves_every_delta_ln2() {
        let p = p3();
        let grid = Grid1D::new(0.0, 5.0, 100).unwrap();
        let s = SourceProfile::new(&grid, p.delta());
        let h = p.delta() * std::f64::consts::LN_2;
        for x in [0.0, 0.3, 1.0, 2.5] {
            assert!((s.decay_at(x + h) / s.decay_at(x) - 0.5).abs() < 1e-13);
        }
        assert!(s.decay().windows(2).all(|w| w[1] < w[0] && w[1] > 0.0));
    }

    #[test]
    fn rest_state_is_fixed_point() {
        let p = p3();
        let grid = Grid1D::new(0.0, 5.0, 40).unwrap();
        let closure = Closure::Generating {
            forcing: BoundaryForcing::zero(),
            right: RightBoundary::Extrapolate,
        };
        let mut run = BoussinesqRun::new(p, grid, WaveState::at_rest(40), closure, 0.9).unwrap();
        for _ in 0..500 {
            run.step(run.dt()).unwrap();
        }
        assert!(run.state.zeta.iter().chain(&run.state.q).all(|v| *v == 0.0));
        assert_eq!(run.state.q_trace, 0.0);
    }

    #[test]
    fn nonlocal_flux_of_constant_state() {
        let p = p3();
        let grid = Grid1D::new(0.0, 2.0, 20).unwrap();
        let closure = Closure::Generating {
            forcing: BoundaryForcing::zero(),
            right: RightBoundary::Extrapolate,
        };
        let run = BoussinesqRun::new(p, grid, WaveState::at_rest(20), closure, 0.9).unwrap();
        let (fmu, b) = run.nonlocal_flux(&[0.0; 20], &[0.0; 20]).unwrap();
        assert!(fmu.iter().all(|v| *v == 0.0) && b == 0.0);
        let c = sw_flux_dimensionless(0.4, 0.2, &p).unwrap();
        let (fmu, b) = run.nonlocal_flux(&[0.4; 20], &[0.2; 20]).unwrap();
        assert!(fmu.iter().all(|v| (v - c).abs() < 1e-13));
        assert!((b - c).abs() < 1e-13);
    }

    #[test]
    fn compatibility_of_rest_and_sine() {
        let grid = Grid1D::new(-10.0, 20.0, 100).unwrap();
        let zeros = vec![0.0; 101];
        let rep = check_compatibility(&grid, &zeros, &zeros, &BoundaryForcing::zero(), 0.0).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.elevation_residual, 0.0);
        assert_eq!(rep.slope_residual, 0.0);
        let rep =
            check_compatibility(&grid, &zeros, &zeros, &BoundaryForcing::sine(1.0, 5.0), 0.0).unwrap();
        assert!(!rep.pass);
        assert!((rep.slope_residual - 2.0 * std::f64::consts::PI / 5.0).abs() < 1e-8);
    }

    #[test]
    fn trace_update_is_exact_euler() {
        let p = DimensionlessParams::new(0.1, 0.1).unwrap();
        let grid = Grid1D::new(0.0, 10.0, 100).unwrap();
        let closure = Closure::Generating {
            forcing: BoundaryForcing::sine(0.5, 5.0),
            right: RightBoundary::Extrapolate,
        };
        let mut run = BoussinesqRun::new(p, grid, WaveState::at_rest(100), closure, 0.9).unwrap();
        for _ in 0..200 {
            let dt = run.dt();
            let rep = run.step(dt).unwrap();
            assert_eq!(rep.q_trace_after, rep.q_trace_before + dt * rep.source_amplitude);
        }
    }
}
