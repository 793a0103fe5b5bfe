use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Boundary elevation and its second time derivative at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForcingSample {
    pub f: f64,
    pub fddot: f64,
}

type ForcingFn = dyn Fn(f64) -> ForcingSample + Send + Sync;

/// Elevation prescribed at the generating boundary.
#[derive(Clone)]
pub enum BoundaryForcing {
    /// Closed-form `f` with its exact second derivative.
    Analytic { label: String, eval: Arc<ForcingFn> },
    /// Uniformly sampled series, usually a trace recorded by a reference run.
    Sampled(SampledForcing),
}

impl fmt::Debug for BoundaryForcing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryForcing::Analytic { label, .. } => {
                f.debug_struct("Analytic").field("label", label).finish()
            }
            BoundaryForcing::Sampled(s) => f.debug_tuple("Sampled").field(s).finish(),
        }
    }
}

impl BoundaryForcing {
    pub fn analytic<F>(label: impl Into<String>, eval: F) -> Self
    where
        F: Fn(f64) -> ForcingSample + Send + Sync + 'static,
    {
        BoundaryForcing::Analytic {
            label: label.into(),
            eval: Arc::new(eval),
        }
    }

    pub fn zero() -> Self {
        Self::analytic("zero", |_| ForcingSample { f: 0.0, fddot: 0.0 })
    }

    /// `f(t) = amplitude * sin(2 pi t / period)`.
    pub fn sine(amplitude: f64, period: f64) -> Self {
        let w = 2.0 * PI / period;
        Self::analytic(format!("sine(a={amplitude}, T={period})"), move |t| {
            let s = (w * t).sin();
            ForcingSample {
                f: amplitude * s,
                fddot: -w * w * amplitude * s,
            }
        })
    }

    /// Uniform samples `values[k] = f(t0 + k dt)`.
    pub fn sampled(t0: f64, dt: f64, values: Vec<f64>) -> Result<Self> {
        SampledForcing::new(t0, dt, values).map(BoundaryForcing::Sampled)
    }

    /// Builds a sampled forcing from explicit sample times, which must be uniform.
    pub fn from_series(times: &[f64], values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::Shape {
                expected: times.len(),
                got: values.len(),
            });
        }
        if times.len() < 3 {
            return Err(Error::Config(format!(
                "a sampled forcing needs at least 3 samples, got {}",
                times.len()
            )));
        }
        let dt = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
        for (k, t) in times.iter().enumerate() {
            let expected = times[0] + k as f64 * dt;
            if (t - expected).abs() > 1e-9 * dt.abs().max(1.0) {
                return Err(Error::Config(format!(
                    "trace time step is not uniform at sample {k}: {t} vs {expected}"
                )));
            }
        }
        Self::sampled(times[0], dt, values)
    }

    pub fn label(&self) -> String {
        match self {
            BoundaryForcing::Analytic { label, .. } => label.clone(),
            BoundaryForcing::Sampled(s) => format!(
                "sampled(n={}, dt={:e}, t0={})",
                s.values.len(),
                s.dt,
                s.t0
            ),
        }
    }

    pub fn sample(&self, t: f64) -> Result<ForcingSample> {
        match self {
            BoundaryForcing::Analytic { eval, .. } => Ok(eval(t)),
            BoundaryForcing::Sampled(s) => s.sample(t),
        }
    }

    /// First time derivative of `f`, by centered differences.
    pub fn fdot(&self, t: f64) -> Result<f64> {
        match self {
            BoundaryForcing::Analytic { eval, .. } => {
                let h = 1e-5;
                Ok((eval(t + h).f - eval(t - h).f) / (2.0 * h))
            }
            BoundaryForcing::Sampled(s) => s.fdot(t),
        }
    }

    /// Recorded time range; `None` for analytic forcing.
    pub fn time_range(&self) -> Option<(f64, f64)> {
        match self {
            BoundaryForcing::Analytic { .. } => None,
            BoundaryForcing::Sampled(s) => Some((s.t0, s.t_end())),
        }
    }
}

/// Uniform series with the second derivative precomputed at every sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledForcing {
    t0: f64,
    dt: f64,
    values: Vec<f64>,
    fddot: Vec<f64>,
}

impl SampledForcing {
    pub fn new(t0: f64, dt: f64, values: Vec<f64>) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(Error::Config(format!("sample step must be positive, got {dt}")));
        }
        if values.len() < 3 {
            return Err(Error::Config(format!(
                "a sampled forcing needs at least 3 samples, got {}",
                values.len()
            )));
        }
        let fddot = second_derivative(&values, dt);
        Ok(Self {
            t0,
            dt,
            values,
            fddot,
        })
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t_end(&self) -> f64 {
        self.t0 + (self.values.len() - 1) as f64 * self.dt
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn fddot_samples(&self) -> &[f64] {
        &self.fddot
    }

    fn locate(&self, t: f64) -> Result<(usize, f64)> {
        let n = self.values.len();
        let pos = (t - self.t0) / self.dt;
        let snap = 1e-7;
        if pos < -snap || pos > (n - 1) as f64 + snap {
            return Err(Error::OutOfRange {
                t,
                start: self.t0,
                end: self.t_end(),
            });
        }
        let nearest = pos.round();
        if (pos - nearest).abs() <= snap {
            // sample times of nested grids coincide up to rounding
            return Ok(((nearest.max(0.0) as usize).min(n - 1), 0.0));
        }
        let k = (pos.floor() as usize).min(n - 2);
        Ok((k, pos - k as f64))
    }

    fn interp(series: &[f64], k: usize, w: f64) -> f64 {
        if w == 0.0 {
            series[k]
        } else {
            (1.0 - w) * series[k] + w * series[k + 1]
        }
    }

    pub fn sample(&self, t: f64) -> Result<ForcingSample> {
        let (k, w) = self.locate(t)?;
        Ok(ForcingSample {
            f: Self::interp(&self.values, k, w),
            fddot: Self::interp(&self.fddot, k, w),
        })
    }

    pub fn fdot(&self, t: f64) -> Result<f64> {
        let (k, w) = self.locate(t)?;
        let d = |j: usize| -> f64 {
            let v = &self.values;
            let n = v.len();
            if j == 0 {
                (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * self.dt)
            } else if j == n - 1 {
                (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * self.dt)
            } else {
                (v[j + 1] - v[j - 1]) / (2.0 * self.dt)
            }
        };
        Ok(if w == 0.0 {
            d(k)
        } else {
            (1.0 - w) * d(k) + w * d(k + 1)
        })
    }
}

/// Centered three-point second difference; one-sided second-order stencils
/// at the ends (first order when only three samples exist).
fn second_derivative(v: &[f64], dt: f64) -> Vec<f64> {
    let n = v.len();
    let inv = 1.0 / (dt * dt);
    let mut out = vec![0.0; n];
    for k in 1..n - 1 {
        out[k] = (v[k + 1] - 2.0 * v[k] + v[k - 1]) * inv;
    }
    if n >= 4 {
        out[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) * inv;
        out[n - 1] = (2.0 * v[n - 1] - 5.0 * v[n - 2] + 4.0 * v[n - 3] - v[n - 4]) * inv;
    } else {
        out[0] = out[1];
        out[n - 1] = out[n - 2];
    }
    out
}
