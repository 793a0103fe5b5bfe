//! Solitary waves of the dimensionless Boussinesq-Abbott system.
//!
//! A traveling wave `zeta(x - c t)`, `q = c zeta` satisfies
//!
//! ```text
//! (mu c^2 / 3) zeta'' = c^2 zeta / (1 + eps zeta) - zeta - eps zeta^2 / 2
//! ```
//!
//! whose first integral, for a profile decaying at infinity, is
//! `(zeta')^2 = G(zeta)` with
//!
//! ```text
//! G(z) = 6 / (c^2 mu) * [ (c^2 / eps) (z - ln(1 + eps z) / eps) - eps z^3 / 6 - z^2 / 2 ].
//! ```
//!
//! `G(zeta_max) = 0` fixes the speed. The profile is obtained by integrating
//! `zeta' = -sqrt(G(zeta))` from the crest with classical RK4.

use crate::error::{Error, Result};
use crate::forcing::{BoundaryForcing, ForcingSample};
use crate::grid::Grid1D;
use crate::state::DimensionlessParams;

/// Profiles are computed until `zeta` drops below this value, then zero-padded.
pub const TAIL_CUTOFF: f64 = 1e-12;
/// Default integration step in `xi`.
pub const DEFAULT_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitonSpec {
    pub zeta_max: f64,
    pub params: DimensionlessParams,
    /// `+1` for a right-going wave, `-1` for a left-going one.
    pub direction: f64,
}

impl SolitonSpec {
    pub fn new(zeta_max: f64, params: DimensionlessParams, direction: f64) -> Result<Self> {
        if !(zeta_max > 0.0) || !(1.0 + params.eps() * zeta_max > 0.0) {
            return Err(Error::Parameter(format!(
                "soliton amplitude must be positive, got {zeta_max}"
            )));
        }
        if direction != 1.0 && direction != -1.0 {
            return Err(Error::Parameter(format!(
                "direction must be +1 or -1, got {direction}"
            )));
        }
        Ok(Self {
            zeta_max,
            params,
            direction,
        })
    }
}

/// `(y - ln(1 + y)) / y^2`, accurate for small `y`.
fn log_remainder(y: f64) -> f64 {
    if y.abs() < 1e-2 {
        // 1/2 - y/3 + y^2/4 - ...
        let mut sum = 0.0;
        let mut pow = 1.0;
        for k in 2..14 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * pow / k as f64;
            pow *= y;
        }
        sum
    } else {
        (y - y.ln_1p()) / (y * y)
    }
}

/// Speed magnitude of the solitary wave with crest `zeta_max`.
pub fn soliton_speed(zeta_max: f64, eps: f64) -> Result<f64> {
    if !(eps > 0.0) || !(zeta_max > 0.0) {
        return Err(Error::Parameter(format!(
            "need eps > 0 and zeta_max > 0, got eps={eps}, zeta_max={zeta_max}"
        )));
    }
    let y = eps * zeta_max;
    // zeta_max - ln(1 + eps zeta_max) / eps
    let denom = zeta_max * y * log_remainder(y);
    if !(denom > 0.0) {
        return Err(Error::Parameter(format!(
            "speed formula denominator is not positive ({denom:e})"
        )));
    }
    let c2 = eps * (eps * zeta_max.powi(3) / 6.0 + zeta_max * zeta_max / 2.0) / denom;
    Ok(c2.sqrt())
}

/// Right-hand sides of the traveling-wave equations for fixed `(c, eps, mu)`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct TravelingWave {
    c2: f64,
    eps: f64,
    mu: f64,
}

impl TravelingWave {
    /// Bracket `B` with `G(z) = 6 z^2 B(z) / (c^2 mu)`.
    fn bracket(&self, z: f64) -> f64 {
        self.c2 * log_remainder(self.eps * z) - self.eps * z / 6.0 - 0.5
    }

    fn g(&self, z: f64) -> f64 {
        6.0 * z * z * self.bracket(z) / (self.c2 * self.mu)
    }

    /// `zeta''` from the second-order equation.
    fn second_derivative(&self, z: f64) -> f64 {
        3.0 / (self.c2 * self.mu) * (self.c2 * z / (1.0 + self.eps * z) - z - 0.5 * self.eps * z * z)
    }
}

/// Sampled half profile `zeta(xi)`, `xi = k * step >= 0`, mirrored for `xi < 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolitonProfile {
    /// Signed speed.
    pub c: f64,
    pub zeta_max: f64,
    pub params: DimensionlessParams,
    step: f64,
    half: Vec<f64>,
    slope: Vec<f64>,
    wave: TravelingWave,
}

/// Integrates the half profile from the crest.
///
/// The first step off the crest uses the Taylor expansion
/// `zeta_max + zeta''(0) h^2 / 2`, since `sqrt(G)` is not Lipschitz there.
pub fn soliton_profile(spec: &SolitonSpec, step: f64) -> Result<SolitonProfile> {
    if !(step > 0.0) {
        return Err(Error::Parameter(format!("profile step must be positive, got {step}")));
    }
    let eps = spec.params.eps();
    let mu = spec.params.mu();
    let c = soliton_speed(spec.zeta_max, eps)?;
    let wave = TravelingWave {
        c2: c * c,
        eps,
        mu,
    };
    let zm = spec.zeta_max;
    let crest_curvature = wave.second_derivative(zm);
    if !(crest_curvature < 0.0) {
        return Err(Error::Integration(format!(
            "crest curvature {crest_curvature:e} is not negative"
        )));
    }
    // tolerance on negative G caused by rounding near the crest
    let g_tol = 1e-10 * zm * zm;
    let rhs = |z: f64| -> Result<f64> {
        let g = wave.g(z);
        if g < -g_tol {
            return Err(Error::Integration(format!(
                "first integral negative (G({z}) = {g:e}); inconsistent speed"
            )));
        }
        Ok(-g.max(0.0).sqrt())
    };

    let mut half = vec![zm, zm + 0.5 * crest_curvature * step * step];
    let max_steps = (1e4 / step) as usize;
    while *half.last().unwrap() >= TAIL_CUTOFF {
        if half.len() > max_steps {
            return Err(Error::Integration(
                "profile did not decay below the cutoff".into(),
            ));
        }
        let z = *half.last().unwrap();
        let k1 = rhs(z)?;
        let k2 = rhs(z + 0.5 * step * k1)?;
        let k3 = rhs(z + 0.5 * step * k2)?;
        let k4 = rhs(z + step * k3)?;
        let next = z + step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        half.push(next.max(0.0));
    }
    let last = half.len() - 1;
    half[last] = 0.0;
    let mut slope: Vec<f64> = half.iter().map(|z| -wave.g(*z).max(0.0).sqrt()).collect();
    slope[0] = 0.0;
    Ok(SolitonProfile {
        c: spec.direction * c,
        zeta_max: zm,
        params: spec.params,
        step,
        half,
        slope,
        wave,
    })
}

impl SolitonProfile {
    pub fn step(&self) -> f64 {
        self.step
    }

    /// Distance from the crest beyond which the profile is zero.
    pub fn radius(&self) -> f64 {
        (self.half.len() - 1) as f64 * self.step
    }

    /// `zeta(xi)` by cubic Hermite interpolation of the samples.
    pub fn zeta(&self, xi: f64) -> f64 {
        let s = xi.abs() / self.step;
        let k = s.floor() as usize;
        if k >= self.half.len() - 1 {
            return 0.0;
        }
        let w = s - k as f64;
        let (y0, y1) = (self.half[k], self.half[k + 1]);
        let (m0, m1) = (self.slope[k] * self.step, self.slope[k + 1] * self.step);
        let w2 = w * w;
        let w3 = w2 * w;
        let v = (2.0 * w3 - 3.0 * w2 + 1.0) * y0
            + (w3 - 2.0 * w2 + w) * m0
            + (-2.0 * w3 + 3.0 * w2) * y1
            + (w3 - w2) * m1;
        if v < TAIL_CUTOFF {
            0.0
        } else {
            v
        }
    }

    pub fn q(&self, xi: f64) -> f64 {
        self.c * self.zeta(xi)
    }

    /// `zeta''(xi)`, evaluated from the second-order equation.
    pub fn zeta_second_derivative(&self, xi: f64) -> f64 {
        self.wave.second_derivative(self.zeta(xi))
    }

    /// `G(zeta)`, equal to `(zeta')^2` along the exact profile.
    pub fn first_integral(&self, zeta: f64) -> f64 {
        self.wave.g(zeta)
    }

    /// Residual of the second-order equation, `(mu c^2/3) zeta'' - rhs(zeta)`.
    pub fn ode_residual(&self, zeta: f64, zeta_xx: f64) -> f64 {
        let TravelingWave { c2, eps, mu } = self.wave;
        mu * c2 / 3.0 * zeta_xx - (c2 * zeta / (1.0 + eps * zeta) - zeta - 0.5 * eps * zeta * zeta)
    }

    /// Exact traveling solution `(zeta, q)` at `(x, t)` for a crest initially at `x_center`.
    pub fn exact(&self, x: f64, t: f64, x_center: f64) -> (f64, f64) {
        let z = self.zeta(x - x_center - self.c * t);
        (z, self.c * z)
    }

    /// Rows `(xi, zeta, q)` on a symmetric grid of spacing `spacing`.
    pub fn rows(&self, spacing: f64) -> Vec<[f64; 3]> {
        let m = (self.radius() / spacing).ceil() as i64;
        (-m..=m)
            .map(|j| {
                let xi = j as f64 * spacing;
                [xi, self.zeta(xi), self.q(xi)]
            })
            .collect()
    }

    /// Elevation seen at a fixed point `x_b` as the wave passes, with the
    /// second time derivative `c^2 zeta''` taken from the ODE.
    pub fn boundary_forcing(&self, x_b: f64, x_center: f64) -> BoundaryForcing {
        let profile = self.clone();
        let c = self.c;
        BoundaryForcing::analytic(format!("soliton(c={c}, x_b={x_b}, x0={x_center})"), move |t| {
            let xi = x_b - x_center - c * t;
            ForcingSample {
                f: profile.zeta(xi),
                fddot: c * c * profile.zeta_second_derivative(xi),
            }
        })
    }
}

/// Soliton sampled on a grid, with the matching generating forcing.
#[derive(Debug, Clone)]
pub struct SolitonData {
    /// Elevation on nodes `0..=n_x`.
    pub zeta: Vec<f64>,
    /// Discharge on nodes `0..=n_x`.
    pub q: Vec<f64>,
    /// Forcing at `x_left`.
    pub forcing: BoundaryForcing,
}

pub fn soliton_initial_data(profile: &SolitonProfile, grid: &Grid1D, x_center: f64) -> SolitonData {
    let (zeta, q): (Vec<f64>, Vec<f64>) = (0..=grid.n_x())
        .map(|i| profile.exact(grid.x(i), 0.0, x_center))
        .unzip();
    SolitonData {
        zeta,
        q,
        forcing: profile.boundary_forcing(grid.x_left(), x_center),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(eps: f64, mu: f64) -> SolitonProfile {
        let p = DimensionlessParams::new(eps, mu).unwrap();
        soliton_profile(&SolitonSpec::new(1.0, p, 1.0).unwrap(), DEFAULT_STEP).unwrap()
    }

    #[test]
    fn speed_matches_high_precision_values() {
        // 30-digit evaluations of the closed form
        let c = soliton_speed(1.0, 0.3).unwrap();
        assert!((c * c - 1.315_239_341_004_587_3).abs() < 1e-13);
        assert!((c - 1.146_838_847_007_105_6).abs() < 1e-13);
        let c = soliton_speed(1.0, 0.1).unwrap();
        assert!((c * c - 1.101_676_919_603_712_1).abs() < 1e-12);
        assert!(soliton_speed(1.0, 0.0).is_err());
        assert!(soliton_speed(-1.0, 0.3).is_err());
    }

    #[test]
    fn crest_conditions() {
        let p = profile(0.3, 0.3);
        assert_eq!(p.zeta(0.0), 1.0);
        let h = 1e-3;
        assert!(((p.zeta(h) - p.zeta(-h)) / (2.0 * h)).abs() < 1e-12);
        assert_eq!(p.zeta(0.7), p.zeta(-0.7));
        assert_eq!(p.zeta(p.radius() + 1.0), 0.0);
    }

    #[test]
    fn profile_is_monotone_and_decays() {
        let p = profile(0.3, 0.3);
        let mut prev = p.zeta(0.0);
        for k in 1..400 {
            let z = p.zeta(k as f64 * 0.05);
            assert!(z <= prev);
            prev = z;
        }
        assert!(p.zeta(p.radius() - 1e-3) < 1e-11);
    }

    #[test]
    fn discharge_is_speed_times_elevation() {
        let p = profile(0.1, 0.1);
        for xi in [-3.0, -0.2, 0.0, 1.5, 6.0] {
            let z = p.zeta(xi);
            if z > 1e-10 {
                assert!((p.q(xi) / z - p.c).abs() <= 1e-10 * p.c);
            }
        }
    }

    #[test]
    fn first_integral_conserved_along_profile() {
        let p = profile(0.3, 0.3);
        let h = 1e-3;
        for k in 1..60 {
            let xi = 0.1 * k as f64;
            // fourth-order centered derivative
            let d = (p.zeta(xi - 2.0 * h) - 8.0 * p.zeta(xi - h) + 8.0 * p.zeta(xi + h)
                - p.zeta(xi + 2.0 * h))
                / (12.0 * h);
            let res = d * d - p.first_integral(p.zeta(xi));
            assert!(res.abs() < 1e-10, "xi={xi}: {res:e}");
        }
    }

    #[test]
    fn ode_residual_converges_at_second_order() {
        let p = profile(0.3, 0.3);
        let residual = |h: f64| {
            (1..40)
                .map(|k| {
                    let xi = 0.1 * k as f64;
                    let zxx = (p.zeta(xi + h) - 2.0 * p.zeta(xi) + p.zeta(xi - h)) / (h * h);
                    p.ode_residual(p.zeta(xi), zxx).abs()
                })
                .fold(0.0, f64::max)
        };
        let (r1, r2, r3) = (residual(0.1), residual(0.05), residual(0.025));
        let o1 = (r1 / r2).log2();
        let o2 = (r2 / r3).log2();
        assert!((o1 - 2.0).abs() < 0.1 && (o2 - 2.0).abs() < 0.1, "{o1} {o2}");
    }

    #[test]
    fn crest_crosses_boundary_at_distance_over_speed() {
        let p = profile(0.3, 0.3);
        let grid = Grid1D::new(0.0, 10.0, 100).unwrap();
        let data = soliton_initial_data(&p, &grid, -5.0);
        let t_cross = 5.0 / p.c;
        assert!((t_cross - 4.359_810_459_026_961).abs() < 1e-12);
        assert!((data.forcing.sample(t_cross).unwrap().f - 1.0).abs() < 1e-12);
        assert_eq!(data.forcing.sample(0.0).unwrap().f, data.zeta[0]);
        assert!(data.zeta.iter().all(|z| *z < 3e-3));
    }
}
