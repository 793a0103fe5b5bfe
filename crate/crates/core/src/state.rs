use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Elevation and discharge on the unknown nodes `1..=n_x`, plus the discharge
/// trace at the generating boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveState {
    pub zeta: Vec<f64>,
    pub q: Vec<f64>,
    pub q_trace: f64,
    pub t: f64,
}

impl WaveState {
    pub fn new(zeta: Vec<f64>, q: Vec<f64>, q_trace: f64, t: f64) -> Result<Self> {
        if zeta.len() != q.len() {
            return Err(Error::Shape {
                expected: zeta.len(),
                got: q.len(),
            });
        }
        Ok(Self {
            zeta,
            q,
            q_trace,
            t,
        })
    }

    pub fn at_rest(n: usize) -> Self {
        Self {
            zeta: vec![0.0; n],
            q: vec![0.0; n],
            q_trace: 0.0,
            t: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.zeta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeta.is_empty()
    }

    /// Checks `rest_depth + scale * zeta_i > 0` at every node.
    pub fn check_depth(&self, rest_depth: f64, scale: f64) -> Result<()> {
        for (i, z) in self.zeta.iter().enumerate() {
            let h = rest_depth + scale * z;
            if !(h > 0.0) {
                return Err(Error::depth(h, format!("node {}", i + 1)));
            }
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.q_trace.is_finite()
            && self.zeta.iter().all(|v| v.is_finite())
            && self.q.iter().all(|v| v.is_finite())
    }
}

/// Dimensional scales used to build the dimensionless problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalScales {
    pub g: f64,
    pub h0: f64,
    /// Typical wave amplitude.
    pub amplitude: f64,
    /// Typical horizontal scale of the waves.
    pub wavelength: f64,
}

impl PhysicalScales {
    pub fn new(g: f64, h0: f64, amplitude: f64, wavelength: f64) -> Result<Self> {
        let s = Self {
            g,
            h0,
            amplitude,
            wavelength,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("g", self.g),
            ("h0", self.h0),
            ("amplitude", self.amplitude),
            ("wavelength", self.wavelength),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Parameter(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    pub fn eps(&self) -> f64 {
        self.amplitude / self.h0
    }

    pub fn mu(&self) -> f64 {
        self.h0 * self.h0 / (self.wavelength * self.wavelength)
    }

    fn discharge_scale(&self) -> f64 {
        self.amplitude * (self.g * self.h0).sqrt()
    }

    fn time_scale(&self) -> f64 {
        self.wavelength / (self.g * self.h0).sqrt()
    }

    pub fn dimensionless(&self) -> Result<DimensionlessParams> {
        DimensionlessParams::new(self.eps(), self.mu())
    }

    pub fn nondimensionalize(&self, state: &WaveState) -> WaveState {
        let (zs, qs, ts) = (self.amplitude, self.discharge_scale(), self.time_scale());
        WaveState {
            zeta: state.zeta.iter().map(|z| z / zs).collect(),
            q: state.q.iter().map(|q| q / qs).collect(),
            q_trace: state.q_trace / qs,
            t: state.t / ts,
        }
    }

    pub fn redimensionalize(&self, state: &WaveState) -> WaveState {
        let (zs, qs, ts) = (self.amplitude, self.discharge_scale(), self.time_scale());
        WaveState {
            zeta: state.zeta.iter().map(|z| z * zs).collect(),
            q: state.q.iter().map(|q| q * qs).collect(),
            q_trace: state.q_trace * qs,
            t: state.t * ts,
        }
    }

    pub fn nondimensional_length(&self, x: f64) -> f64 {
        x / self.wavelength
    }
}

/// Nonlinearity `eps`, shallowness `mu` and the boundary-layer width
/// `delta = sqrt(mu / 3)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessParams {
    eps: f64,
    mu: f64,
    delta: f64,
}

impl DimensionlessParams {
    pub fn new(eps: f64, mu: f64) -> Result<Self> {
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::Parameter(format!("eps must be positive, got {eps}")));
        }
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(Error::Parameter(format!("mu must be positive, got {mu}")));
        }
        Ok(Self {
            eps,
            mu,
            delta: (mu / 3.0).sqrt(),
        })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}
