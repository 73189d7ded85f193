//! Special functions, root finding, quadrature and time-domain solvers.

pub mod bessel;
pub mod chirp;
pub mod laplace;
pub mod quad;
pub mod roots;
pub mod volterra;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use bessel::{cylinder_bessel, CylinderKind};
pub use laplace::{invert_laplace, InversionMethod, InversionSettings};
pub use roots::{find_root_complex, find_root_with, RootOptions};
pub use volterra::{solve_volterra, KernelShape, VolterraSolution};

/// Uniform time grid starting at zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub dt: f64,
    pub count: usize,
}

impl TimeGrid {
    pub fn new(dt: f64, count: usize) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidInput(format!("time step {dt} must be positive")));
        }
        if count < 2 {
            return Err(Error::InvalidInput("time grid needs at least two points".into()));
        }
        Ok(Self { dt, count })
    }

    /// Grid covering `[0, t_max]` with step close to `dt`.
    pub fn spanning(t_max: f64, dt: f64) -> Result<Self> {
        let steps = (t_max / dt).round().max(1.0) as usize;
        Self::new(t_max / steps as f64, steps + 1)
    }

    pub fn t(&self, i: usize) -> f64 {
        i as f64 * self.dt
    }

    pub fn t_max(&self) -> f64 {
        self.t(self.count - 1)
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.t(i)).collect()
    }
}
