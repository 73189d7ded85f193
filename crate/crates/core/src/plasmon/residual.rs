//! Dispersion residual of the cylindrical wire: the product of the two
//! boundary brackets minus the azimuthal coupling term. Frequencies are in
//! units of ω_p and wavevectors in ω_p/c, so the residual carries units of
//! (ω_p/c)^2.

use num_complex::Complex64;

use super::DispersionProblem;
use crate::error::{Error, Result};
use crate::media::drude_epsilon;
use crate::numerics::bessel::{log_derivative, CylinderKind};

#[derive(Debug, Clone, Copy)]
pub struct ResidualParts {
    pub value: Complex64,
    pub bracket_product: Complex64,
    pub coupling: Complex64,
    pub k_inner: Complex64,
    pub k_outer: Complex64,
    /// Magnitude of the terms before cancellation.
    pub scale: f64,
}

impl ResidualParts {
    /// Residual divided by the magnitude of its uncancelled terms.
    pub fn normalized(&self) -> Complex64 {
        if self.scale == 0.0 {
            self.value
        } else {
            self.value / self.scale
        }
    }
}

/// Principal square root with a signed-zero imaginary part folded to +0.
pub(crate) fn principal_sqrt(w: Complex64) -> Complex64 {
    let w = if w.im == 0.0 { Complex64::new(w.re, 0.0) } else { w };
    w.sqrt()
}

pub fn transverse_wavevectors(k: f64, omega: Complex64, problem: &DispersionProblem) -> Result<(Complex64, Complex64)> {
    let eps_i = drude_epsilon(&problem.drude, omega)?;
    let w2 = omega * omega;
    let ki = principal_sqrt(eps_i * w2 - k * k);
    let ko = principal_sqrt(problem.outer.eps_o * w2 - k * k);
    Ok((ki, ko))
}

pub fn residual_parts(n: u32, k: f64, omega: Complex64, problem: &DispersionProblem) -> Result<ResidualParts> {
    if omega == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("zero frequency".into()));
    }
    if k < 0.0 {
        return Err(Error::Domain("negative wavevector".into()));
    }
    let eps_i = drude_epsilon(&problem.drude, omega)?;
    let eps_o = problem.outer.eps_o;
    let (ki, ko) = transverse_wavevectors(k, omega, problem)?;
    let a = problem.geometry.radius;
    let x = ki * a;
    let y = ko * a;
    if x.norm() == 0.0 || y.norm() == 0.0 {
        return Err(Error::Domain(format!("transverse wavevector vanishes at k = {k}, omega = {omega}")));
    }
    let fi = log_derivative(CylinderKind::BesselJ, n, x)? / x;
    let fo = log_derivative(CylinderKind::Hankel1, n, y)? / y;
    let w2 = omega * omega;
    let first = fi - fo;
    let (inner, outer) = (w2 * eps_i * fi, w2 * eps_o * fo);
    let second = inner - outer;
    let bracket_product = first * second;
    let nk = n as f64 * k;
    let inv = 1.0 / (y * y) - 1.0 / (x * x);
    let coupling = nk * nk * inv * inv;
    let scale = ((fi.norm() + fo.norm()) * (inner.norm() + outer.norm())).max(coupling.norm());
    Ok(ResidualParts { value: bracket_product - coupling, bracket_product, coupling, k_inner: ki, k_outer: ko, scale })
}

/// Dispersion residual S(k, ω) for azimuthal order `n`.
pub fn dispersion_residual(n: u32, k: f64, omega: Complex64, problem: &DispersionProblem) -> Result<Complex64> {
    residual_parts(n, k, omega, problem).map(|p| p.value)
}

pub fn normalized_residual(n: u32, k: f64, omega: Complex64, problem: &DispersionProblem) -> Result<Complex64> {
    residual_parts(n, k, omega, problem).map(|p| p.normalized())
}
