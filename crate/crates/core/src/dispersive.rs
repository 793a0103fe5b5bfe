//! Discrete inverses of `1 - (mu/3) d^2/dx^2`.
//!
//! With `k = mu / (3 dx^2)` the interior rows read
//! `v_i - k (v_{i+1} - 2 v_i + v_{i-1}) = f_i`. The closures differ only in
//! their first and last rows:
//!
//! | operator             | first row                  | last row          |
//! |----------------------|----------------------------|-------------------|
//! | [`NeumannInverse`]   | `v_1 - k (v_2 - v_1)`      | mirror of first   |
//! | [`DirichletInverse`] | `v_1 - k (v_2 - 2 v_1)`    | Neumann           |
//! | [`PeriodicInverse`]  | wraps around               | wraps around      |
//!
//! All three are strictly diagonally dominant M-matrices, so plain Thomas
//! elimination without pivoting is stable. Each operator is factored once
//! and applied in O(n).

use crate::error::{Error, Result};

/// Tridiagonal matrix; `lower[0]` and `upper[n-1]` are unused.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Tridiagonal {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s += self.lower[i] * v[i - 1];
                }
                if i + 1 < n {
                    s += self.upper[i] * v[i + 1];
                }
                s
            })
            .collect()
    }

    /// Dense row-major copy, for tests and diagnostics.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.len();
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            m[i][i] = self.diag[i];
            if i > 0 {
                m[i][i - 1] = self.lower[i];
            }
            if i + 1 < n {
                m[i][i + 1] = self.upper[i];
            }
        }
        m
    }

    pub fn factor(&self) -> ThomasFactor {
        let n = self.len();
        let mut upper = vec![0.0; n];
        let mut inv_pivot = vec![0.0; n];
        inv_pivot[0] = 1.0 / self.diag[0];
        for i in 0..n {
            if i > 0 {
                inv_pivot[i] = 1.0 / (self.diag[i] - self.lower[i] * upper[i - 1]);
            }
            if i + 1 < n {
                upper[i] = self.upper[i] * inv_pivot[i];
            }
        }
        ThomasFactor {
            lower: self.lower.clone(),
            upper,
            inv_pivot,
        }
    }
}

/// LU factors from Thomas elimination.
#[derive(Debug, Clone, PartialEq)]
pub struct ThomasFactor {
    lower: Vec<f64>,
    upper: Vec<f64>,
    inv_pivot: Vec<f64>,
}

impl ThomasFactor {
    pub fn len(&self) -> usize {
        self.inv_pivot.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inv_pivot.is_empty()
    }

    /// Solves in place; `x` holds the right-hand side on entry.
    pub fn solve_in_place(&self, x: &mut [f64]) {
        let n = self.len();
        x[0] *= self.inv_pivot[0];
        for i in 1..n {
            x[i] = (x[i] - self.lower[i] * x[i - 1]) * self.inv_pivot[i];
        }
        for i in (0..n - 1).rev() {
            x[i] -= self.upper[i] * x[i + 1];
        }
    }
}

fn check_params(n: usize, min_n: usize, mu: f64, dx: f64) -> Result<f64> {
    if n < min_n {
        return Err(Error::Config(format!(
            "dispersive operator needs at least {min_n} nodes, got {n}"
        )));
    }
    if !(mu > 0.0) || !(dx > 0.0) || !mu.is_finite() || !dx.is_finite() {
        return Err(Error::Parameter(format!(
            "mu and dx must be positive, got mu={mu}, dx={dx}"
        )));
    }
    Ok(mu / (3.0 * dx * dx))
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::Shape { expected, got });
    }
    Ok(())
}

fn band(n: usize, k: f64, first_diag: f64, last_diag: f64) -> Tridiagonal {
    let mut diag = vec![1.0 + 2.0 * k; n];
    diag[0] = first_diag;
    diag[n - 1] = last_diag;
    let mut lower = vec![-k; n];
    lower[0] = 0.0;
    let mut upper = vec![-k; n];
    upper[n - 1] = 0.0;
    Tridiagonal { lower, diag, upper }
}

/// Inverse with homogeneous Neumann closure at both ends.
#[derive(Debug, Clone)]
pub struct NeumannInverse {
    mu: f64,
    dx: f64,
    matrix: Tridiagonal,
    factor: ThomasFactor,
}

impl NeumannInverse {
    pub fn new(n: usize, mu: f64, dx: f64) -> Result<Self> {
        let k = check_params(n, 2, mu, dx)?;
        let matrix = band(n, k, 1.0 + k, 1.0 + k);
        let factor = matrix.factor();
        Ok(Self {
            mu,
            dx,
            matrix,
            factor,
        })
    }

    pub fn len(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.is_empty()
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn matrix(&self) -> &Tridiagonal {
        &self.matrix
    }

    pub fn apply_into(&self, rhs: &[f64], out: &mut [f64]) -> Result<()> {
        check_len(self.len(), rhs.len())?;
        check_len(self.len(), out.len())?;
        out.copy_from_slice(rhs);
        self.factor.solve_in_place(out);
        Ok(())
    }

    pub fn apply(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; rhs.len()];
        self.apply_into(rhs, &mut out)?;
        Ok(out)
    }

    /// Boundary trace: first entry of [`apply`](Self::apply).
    pub fn apply_boundary(&self, rhs: &[f64]) -> Result<f64> {
        Ok(self.apply(rhs)?[0])
    }

    /// The forward stencil `1 - (mu/3) D2` with the same closure.
    pub fn forward(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_len(self.len(), v.len())?;
        Ok(self.matrix.mul_vec(v))
    }
}

/// Inverse with homogeneous Dirichlet closure (ghost `v_0 = 0`) on the left
/// and Neumann on the right.
#[derive(Debug, Clone)]
pub struct DirichletInverse {
    matrix: Tridiagonal,
    factor: ThomasFactor,
}

impl DirichletInverse {
    pub fn new(n: usize, mu: f64, dx: f64) -> Result<Self> {
        let k = check_params(n, 2, mu, dx)?;
        let matrix = band(n, k, 1.0 + 2.0 * k, 1.0 + k);
        let factor = matrix.factor();
        Ok(Self { matrix, factor })
    }

    pub fn len(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.is_empty()
    }

    pub fn matrix(&self) -> &Tridiagonal {
        &self.matrix
    }

    pub fn apply(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        check_len(self.len(), rhs.len())?;
        let mut out = rhs.to_vec();
        self.factor.solve_in_place(&mut out);
        Ok(out)
    }

    pub fn forward(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_len(self.len(), v.len())?;
        Ok(self.matrix.mul_vec(v))
    }
}

/// Inverse on a periodic grid, solved with the Sherman-Morrison correction
/// of a tridiagonal factorization.
#[derive(Debug, Clone)]
pub struct PeriodicInverse {
    k: f64,
    factor: ThomasFactor,
    gamma: f64,
    correction: Vec<f64>,
}

impl PeriodicInverse {
    pub fn new(n: usize, mu: f64, dx: f64) -> Result<Self> {
        let k = check_params(n, 3, mu, dx)?;
        let d = 1.0 + 2.0 * k;
        let gamma = -d;
        // corners are -k
        let mut reduced = band(n, k, d - gamma, d - k * k / gamma);
        reduced.diag[1..n - 1].fill(d);
        let factor = reduced.factor();
        let mut u = vec![0.0; n];
        u[0] = gamma;
        u[n - 1] = -k;
        factor.solve_in_place(&mut u);
        Ok(Self {
            k,
            factor,
            gamma,
            correction: u,
        })
    }

    pub fn len(&self) -> usize {
        self.correction.len()
    }

    pub fn is_empty(&self) -> bool {
        self.correction.is_empty()
    }

    pub fn apply_into(&self, rhs: &[f64], out: &mut [f64]) -> Result<()> {
        let n = self.len();
        check_len(n, rhs.len())?;
        check_len(n, out.len())?;
        out.copy_from_slice(rhs);
        self.factor.solve_in_place(out);
        let z = &self.correction;
        let beta = -self.k;
        let fact = (out[0] + beta * out[n - 1] / self.gamma)
            / (1.0 + z[0] + beta * z[n - 1] / self.gamma);
        for (o, zi) in out.iter_mut().zip(z) {
            *o -= fact * zi;
        }
        Ok(())
    }

    pub fn apply(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; rhs.len()];
        self.apply_into(rhs, &mut out)?;
        Ok(out)
    }

    pub fn forward(&self, v: &[f64]) -> Result<Vec<f64>> {
        let n = self.len();
        check_len(n, v.len())?;
        let k = self.k;
        Ok((0..n)
            .map(|i| {
                let l = v[(i + n - 1) % n];
                let r = v[(i + 1) % n];
                v[i] - k * (r - 2.0 * v[i] + l)
            })
            .collect())
    }
}
