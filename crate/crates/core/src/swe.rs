//! Dimensional nonlinear shallow water equations with a generating boundary
//! on the left.
//!
//! The boundary elevation `f` is prescribed; the boundary discharge is
//! recovered from the outgoing Riemann invariant `R-`, which is advected
//! from the first interior node with an interpolated characteristic speed.

use log::warn;

use crate::error::{Error, Result};
use crate::forcing::BoundaryForcing;
use crate::grid::Grid1D;
use crate::state::WaveState;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweParams {
    pub g: f64,
    pub h0: f64,
    /// `dt / dx`.
    pub courant: f64,
}

impl SweParams {
    pub fn new(g: f64, h0: f64, courant: f64) -> Result<Self> {
        if !(g > 0.0) || !(h0 > 0.0) {
            return Err(Error::Parameter(format!(
                "g and h0 must be positive, got g={g}, h0={h0}"
            )));
        }
        if !(courant > 0.0 && courant <= 1.0) {
            return Err(Error::Parameter(format!(
                "courant ratio must lie in (0, 1], got {courant}"
            )));
        }
        Ok(Self { g, h0, courant })
    }

    fn depth(&self, zeta: f64, location: &str) -> Result<f64> {
        let h = self.h0 + zeta;
        if h > 0.0 {
            Ok(h)
        } else {
            Err(Error::depth(h, location))
        }
    }
}

/// Physical flux `(q, g (h^2 - H0^2) / 2 + q^2 / h)`.
pub fn sw_flux(zeta: f64, q: f64, p: &SweParams) -> Result<(f64, f64)> {
    let h = p.depth(zeta, "flux evaluation")?;
    // h^2 - H0^2 = zeta (2 H0 + zeta), exact zero at rest
    Ok((q, 0.5 * p.g * zeta * (2.0 * p.h0 + zeta) + q * q / h))
}

/// Characteristic speeds `(u + sqrt(g h), -u + sqrt(g h))`.
pub fn eigenvalues(zeta: f64, q: f64, p: &SweParams) -> Result<(f64, f64)> {
    let h = p.depth(zeta, "eigenvalue evaluation")?;
    let u = q / h;
    let c = (p.g * h).sqrt();
    Ok((u + c, -u + c))
}

/// Riemann invariants `2 (sqrt(g h) - sqrt(g H0)) +/- u`.
pub fn riemann_invariants(zeta: f64, q: f64, p: &SweParams) -> Result<(f64, f64)> {
    let h = p.depth(zeta, "Riemann invariant evaluation")?;
    let u = q / h;
    let a = 2.0 * ((p.g * h).sqrt() - (p.g * p.h0).sqrt());
    Ok((a + u, a - u))
}

/// Boundary discharge `(H0 + f) (2 (sqrt(g (H0 + f)) - sqrt(g H0)) - R-)`.
pub fn boundary_discharge(f: f64, r_minus: f64, p: &SweParams) -> Result<f64> {
    let h = p.depth(f, "generating boundary")?;
    Ok(h * (2.0 * ((p.g * h).sqrt() - (p.g * p.h0).sqrt()) - r_minus))
}

/// Outgoing invariant at the boundary, carried between steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicTraceState {
    pub r_minus: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantUpdate {
    pub r_minus: f64,
    /// Interpolation weight after clamping to `[0, 1]`.
    pub alpha: f64,
    /// Interpolated speed `alpha l0 + (1 - alpha) l1`.
    pub speed: f64,
    /// The unclamped weight fell outside `[0, 1]` (e.g. supercritical inflow).
    pub clamped: bool,
}

/// Upwind update of `R-` at the boundary.
///
/// The foot of the characteristic is found from `speed * dt = alpha * dx`
/// with `speed = alpha * l0 + (1 - alpha) * l1`, which is linear in `alpha`.
pub fn advance_outgoing_invariant(
    trace: CharacteristicTraceState,
    r_minus_node1: f64,
    lambda_minus_0: f64,
    lambda_minus_1: f64,
    dt: f64,
    dx: f64,
) -> Result<InvariantUpdate> {
    if !(dt > 0.0) || !(dx > 0.0) {
        return Err(Error::Parameter(format!(
            "dt and dx must be positive, got dt={dt}, dx={dx}"
        )));
    }
    let denom = dx - dt * (lambda_minus_0 - lambda_minus_1);
    if !(denom > 0.0) {
        return Err(Error::Cfl(format!(
            "characteristic foot equation degenerate: dx - dt (l0 - l1) = {denom:e}"
        )));
    }
    let raw = dt * lambda_minus_1 / denom;
    let alpha = raw.clamp(0.0, 1.0);
    let speed = alpha * lambda_minus_0 + (1.0 - alpha) * lambda_minus_1;
    let nu = speed * dt / dx;
    Ok(InvariantUpdate {
        r_minus: (1.0 - nu) * trace.r_minus + nu * r_minus_node1,
        alpha,
        speed,
        clamped: raw != alpha,
    })
}

/// What to put in the ghost cell right of the last node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RightBoundary {
    /// Copy of the last node.
    #[default]
    Extrapolate,
    /// Reflecting wall, `q` mirrored with opposite sign.
    Wall,
}

/// Face fluxes at the two domain edges for the step just taken.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweStepReport {
    pub left_flux: (f64, f64),
    pub right_flux: (f64, f64),
    pub q_boundary: f64,
    pub max_cfl: f64,
    pub alpha_clamped: bool,
}

/// One shallow water run on `[x_left, x_left + L]`.
#[derive(Debug, Clone)]
pub struct SweRun {
    pub grid: Grid1D,
    pub params: SweParams,
    pub state: WaveState,
    pub forcing: BoundaryForcing,
    pub right: RightBoundary,
    /// Turn CFL warnings into hard errors.
    pub strict_cfl: bool,
    trace: CharacteristicTraceState,
    prev_boundary: (f64, f64),
    prev_node1: (f64, f64),
    steps: usize,
    warnings: Vec<String>,
}

impl SweRun {
    /// The boundary discharge at `t = 0` is taken from the first node.
    pub fn new(
        grid: Grid1D,
        params: SweParams,
        state: WaveState,
        forcing: BoundaryForcing,
    ) -> Result<Self> {
        if state.len() != grid.n_x() {
            return Err(Error::Shape {
                expected: grid.n_x(),
                got: state.len(),
            });
        }
        state.check_depth(params.h0, 1.0)?;
        let f0 = forcing.sample(state.t)?.f;
        let q0 = state.q[0];
        let (_, r_minus) = riemann_invariants(f0, q0, &params)?;
        let mut state = state;
        state.q_trace = q0;
        let node1 = (state.zeta[0], state.q[0]);
        Ok(Self {
            grid,
            params,
            state,
            forcing,
            right: RightBoundary::Extrapolate,
            strict_cfl: false,
            trace: CharacteristicTraceState { r_minus },
            prev_boundary: (f0, q0),
            prev_node1: node1,
            steps: 0,
            warnings: Vec::new(),
        })
    }

    pub fn dt(&self) -> f64 {
        self.params.courant * self.grid.dx()
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn invariant_trace(&self) -> CharacteristicTraceState {
        self.trace
    }

    fn lf_flux(ul: (f64, f64), fl: (f64, f64), ur: (f64, f64), fr: (f64, f64), visc: f64) -> (f64, f64) {
        (
            0.5 * (fl.0 + fr.0) - visc * (ur.0 - ul.0),
            0.5 * (fl.1 + fr.1) - visc * (ur.1 - ul.1),
        )
    }

    /// One Lax-Friedrichs step of size `dt`.
    pub fn step(&mut self, dt: f64) -> Result<SweStepReport> {
        let p = self.params;
        let dx = self.grid.dx();
        let n = self.state.len();
        let t = self.state.t;

        let mut alpha_clamped = false;
        if self.steps > 0 {
            // advance R- from the previous step's boundary and first node
            let (pf, pq) = self.prev_boundary;
            let (_, l0) = eigenvalues(pf, pq, &p)?;
            let (_, l1) = eigenvalues(self.prev_node1.0, self.prev_node1.1, &p)?;
            let (_, r1) = riemann_invariants(self.prev_node1.0, self.prev_node1.1, &p)?;
            let upd = advance_outgoing_invariant(self.trace, r1, l0, l1, dt, dx)?;
            if upd.clamped {
                alpha_clamped = true;
                self.warnings.push(format!(
                    "step {}: characteristic weight clamped to {} (t = {t})",
                    self.steps, upd.alpha
                ));
            }
            self.trace.r_minus = upd.r_minus;
        }
        let f = self.forcing.sample(t)?.f;
        let q0 = boundary_discharge(f, self.trace.r_minus, &p)?;
        self.prev_boundary = (f, q0);
        self.prev_node1 = (self.state.zeta[0], self.state.q[0]);
        self.state.q_trace = q0;

        let zeta = &self.state.zeta;
        let q = &self.state.q;
        let mut fluxes = Vec::with_capacity(n);
        let mut max_speed: f64 = 0.0;
        for i in 0..n {
            fluxes.push(sw_flux(zeta[i], q[i], &p)?);
            let (lp, lm) = eigenvalues(zeta[i], q[i], &p)?;
            max_speed = max_speed.max(lp.abs()).max(lm.abs());
        }
        let f_ghost = sw_flux(f, q0, &p)?;
        let max_cfl = max_speed * dt / dx;
        if max_cfl > 1.0 {
            let msg = format!("step {}: CFL number {max_cfl:.4} exceeds 1 (t = {t})", self.steps);
            if self.strict_cfl {
                return Err(Error::Cfl(msg));
            }
            warn!("{msg}");
            self.warnings.push(msg);
        }

        let visc = dx / (2.0 * dt);
        let (u_right, f_right) = match self.right {
            RightBoundary::Extrapolate => ((zeta[n - 1], q[n - 1]), fluxes[n - 1]),
            RightBoundary::Wall => {
                let u = (zeta[n - 1], -q[n - 1]);
                (u, sw_flux(u.0, u.1, &p)?)
            }
        };
        let mut faces = Vec::with_capacity(n + 1);
        faces.push(Self::lf_flux((f, q0), f_ghost, (zeta[0], q[0]), fluxes[0], visc));
        for i in 1..n {
            faces.push(Self::lf_flux(
                (zeta[i - 1], q[i - 1]),
                fluxes[i - 1],
                (zeta[i], q[i]),
                fluxes[i],
                visc,
            ));
        }
        faces.push(Self::lf_flux(
            (zeta[n - 1], q[n - 1]),
            fluxes[n - 1],
            u_right,
            f_right,
            visc,
        ));

        let r = dt / dx;
        for i in 0..n {
            self.state.zeta[i] -= r * (faces[i + 1].0 - faces[i].0);
            self.state.q[i] -= r * (faces[i + 1].1 - faces[i].1);
        }
        self.state.t = t + dt;
        self.steps += 1;
        if !self.state.is_finite() {
            return Err(Error::Divergence {
                step: self.steps,
                t: self.state.t,
            });
        }
        self.state.check_depth(p.h0, 1.0)?;
        Ok(SweStepReport {
            left_flux: faces[0],
            right_flux: faces[n],
            q_boundary: q0,
            max_cfl,
            alpha_clamped,
        })
    }

    /// Steps to `t_end`, shortening the final step to land on it.
    pub fn advance_to(&mut self, t_end: f64) -> Result<()> {
        let dt = self.dt();
        while self.state.t < t_end - 1e-12 * dt {
            let h = dt.min(t_end - self.state.t);
            self.step(h)?;
        }
        Ok(())
    }
}
