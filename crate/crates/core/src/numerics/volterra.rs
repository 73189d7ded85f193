//! Linear Volterra integro-differential equations
//! `b'(t) = -a b(t) - ∫_0^t K(t - s) b(s) ds`, `b(0) = 1`,
//! with kernels that are either smooth or carry a `τ^{-1/2}` factor.
//!
//! The memory term is split into `b(0) ∫_0^t K` plus a convolution with
//! `b - b(0)`. Both pieces use product integration with moments of the
//! singular weight computed exactly per cell, which keeps the scheme second
//! order even though `b` behaves like `t^{3/2}` near the origin.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::quad::gauss_legendre;
use super::TimeGrid;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelShape {
    /// `K(τ) = g(τ)`.
    Regular,
    /// `K(τ) = g(τ) / sqrt(τ)`.
    InverseSqrt,
}

#[derive(Debug, Clone)]
pub struct VolterraSolution {
    pub times: Vec<f64>,
    pub values: Vec<Complex64>,
    /// Richardson combination of the `dt` and `dt/2` runs.
    pub extrapolated: Vec<Complex64>,
    /// Largest difference between the `dt` and `dt/2` runs on the grid.
    pub difference: f64,
}

pub const STEP_LIMIT: f64 = 1e-4;

struct Moments {
    w0: Vec<f64>,
    w1: Vec<f64>,
    p: Vec<f64>,
}

fn moments(shape: KernelShape, n: usize) -> Moments {
    match shape {
        KernelShape::Regular => Moments { w0: vec![0.5; n], w1: vec![0.5; n], p: vec![1.0 / 3.0; n] },
        KernelShape::InverseSqrt => {
            let (gx, gw) = gauss_legendre(10);
            let mut w0 = Vec::with_capacity(n);
            let mut w1 = Vec::with_capacity(n);
            let mut p = Vec::with_capacity(n);
            for k in 0..n {
                let a = (k as f64).sqrt();
                let b = (k as f64 + 1.0).sqrt();
                let one = (2.0 / 3.0) * (b - a) * (b - a) * (b + 2.0 * a);
                w1.push(one);
                w0.push(2.0 * (b - a) - one);
                if k == 0 {
                    p.push(0.4);
                } else {
                    let s: f64 = gx
                        .iter()
                        .zip(&gw)
                        .map(|(x, w)| {
                            let u = 0.5 * (x + 1.0);
                            0.5 * w * u * u / (k as f64 + u).sqrt()
                        })
                        .sum();
                    p.push(s);
                }
            }
            Moments { w0, w1, p }
        }
    }
}

/// Integrate on `count` points spaced by `dt`, kernel factor sampled at `k dt`.
pub fn integrate(linear_rate: Complex64, factor: &[Complex64], shape: KernelShape, dt: f64) -> Vec<Complex64> {
    let count = factor.len();
    let nu = match shape {
        KernelShape::Regular => 0.0,
        KernelShape::InverseSqrt => -0.5,
    };
    let m = moments(shape, count);
    let scale = dt.powf(1.0 + nu);
    let rscale = dt.powf(2.0 + nu);
    let g = factor;
    let zero = Complex64::new(0.0, 0.0);

    // r[n] = ∫_0^{t_n} (t_n - τ) K(τ) dτ
    let mut r = vec![zero; count];
    for (n, rn) in r.iter_mut().enumerate().skip(1) {
        let mut acc = zero;
        for k in 0..n {
            let lag = (n - k) as f64;
            acc += g[k] * (lag * m.w0[k] - (m.w1[k] - m.p[k])) + g[k + 1] * (lag * m.w1[k] - m.p[k]);
        }
        *rn = acc * rscale;
    }

    let b0 = Complex64::new(1.0, 0.0);
    let mut b = vec![zero; count];
    let mut y = vec![zero; count];
    b[0] = b0;
    let half = 0.5 * dt;
    let c = g[0] * m.w0[0] * scale;
    for n in 1..count {
        let mut known = zero;
        for k in 1..n {
            known += g[k] * m.w0[k] * (b[n - k] - b0);
        }
        for k in 0..n {
            known += g[k + 1] * m.w1[k] * (b[n - 1 - k] - b0);
        }
        known *= scale;
        let rhs = b[n - 1] * (1.0 - half * linear_rate) - b0 * (r[n] - r[n - 1]) - half * (y[n - 1] + known - c * b0);
        let bn = rhs / (1.0 + half * linear_rate + half * c);
        b[n] = bn;
        y[n] = known + c * (bn - b0);
    }
    b
}

/// Solve on `grid` and on its halved-step refinement.
pub fn solve_volterra<G>(linear_rate: Complex64, factor: G, shape: KernelShape, grid: &TimeGrid) -> Result<VolterraSolution>
where
    G: Fn(f64) -> Complex64,
{
    let dt = grid.dt;
    let n = grid.count;
    let coarse_g: Vec<Complex64> = (0..n).map(|k| factor(k as f64 * dt)).collect();
    let fine_g: Vec<Complex64> = (0..2 * n - 1).map(|k| factor(k as f64 * 0.5 * dt)).collect();
    let coarse = integrate(linear_rate, &coarse_g, shape, dt);
    let fine = integrate(linear_rate, &fine_g, shape, 0.5 * dt);
    let mut difference: f64 = 0.0;
    let mut extrapolated = Vec::with_capacity(n);
    for i in 0..n {
        let f = fine[2 * i];
        difference = difference.max((f - coarse[i]).norm());
        extrapolated.push((4.0 * f - coarse[i]) / 3.0);
    }
    if !(difference <= STEP_LIMIT) {
        return Err(Error::StepTooCoarse { difference });
    }
    Ok(VolterraSolution { times: grid.times(), values: coarse, extrapolated, difference })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn decoupled_limit() {
        let g = TimeGrid::new(0.01, 501).unwrap();
        let s = solve_volterra(c(0.05), |_| c(0.0), KernelShape::Regular, &g).unwrap();
        for (t, b) in s.times.iter().zip(&s.extrapolated) {
            assert!((b - c((-0.05 * t).exp())).norm() < 1e-10);
        }
    }

    fn constant_kernel_exact(a: f64, k0: f64, t: f64) -> Complex64 {
        let disc = Complex64::new(a * a - 4.0 * k0, 0.0).sqrt();
        let r1 = (-a + disc) / 2.0;
        let r2 = (-a - disc) / 2.0;
        (r1 * (r1 * t).exp() - r2 * (r2 * t).exp()) / (r1 - r2)
    }

    #[test]
    fn constant_kernel_matches_second_order_ode() {
        let g = TimeGrid::new(0.01, 1001).unwrap();
        let s = solve_volterra(c(0.3), |_| c(2.0), KernelShape::Regular, &g).unwrap();
        for (t, b) in s.times.iter().zip(&s.extrapolated) {
            assert!((b - constant_kernel_exact(0.3, 2.0, *t)).norm() < 1e-8, "t={t}");
        }
    }

    #[test]
    fn halving_step_gains_second_order() {
        let err = |dt: f64| {
            let n = (4.0 / dt).round() as usize + 1;
            let g: Vec<Complex64> = vec![c(2.0); n];
            let b = integrate(c(0.3), &g, KernelShape::Regular, dt);
            b.iter()
                .enumerate()
                .map(|(i, v)| (v - constant_kernel_exact(0.3, 2.0, i as f64 * dt)).norm())
                .fold(0.0, f64::max)
        };
        let ratio = err(0.02) / err(0.01);
        assert!(ratio >= 3.5, "ratio {ratio}");
    }

    #[test]
    fn singular_kernel_is_second_order() {
        // K(τ) = 1/sqrt(π τ): b̃(s) = 1/(s + 1/sqrt(s)); compare dt ladders
        let factor = |_t: f64| c(1.0 / std::f64::consts::PI.sqrt());
        let run = |dt: f64| {
            let n = (2.0 / dt).round() as usize + 1;
            let g: Vec<Complex64> = (0..n).map(|k| factor(k as f64 * dt)).collect();
            *integrate(c(0.0), &g, KernelShape::InverseSqrt, dt).last().unwrap()
        };
        let (a, b, d) = (run(0.02), run(0.01), run(0.005));
        let ratio = (a - b).norm() / (b - d).norm();
        assert!((ratio - 4.0).abs() < 0.3, "ratio {ratio}");
    }

    #[test]
    fn coarse_step_is_reported() {
        let g = TimeGrid::new(0.5, 41).unwrap();
        let r = solve_volterra(c(0.0), |_| c(40.0), KernelShape::Regular, &g);
        assert!(matches!(r, Err(Error::StepTooCoarse { .. })));
    }
}
