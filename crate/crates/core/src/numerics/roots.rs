//! Complex root finding: damped Newton with a differenced derivative and a
//! Muller fallback when Newton stagnates.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct RootOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Step shrink factor applied while the residual grows.
    pub damping: f64,
    /// Relative step of the central-difference derivative.
    pub diff_step: f64,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self { tol: 1e-13, max_iter: 100, damping: 0.5, diff_step: 1e-7 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Root {
    pub z: Complex64,
    pub residual: f64,
    pub iterations: usize,
}

/// Solve `f(z) = 0` starting from `seed` until `|f| < tol`.
pub fn find_root_complex<F>(f: F, seed: Complex64, tol: f64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let opts = RootOptions { tol, ..Default::default() };
    find_root_with(f, seed, &opts).map(|r| r.z)
}

pub fn find_root_with<F>(f: F, seed: Complex64, opts: &RootOptions) -> Result<Root>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if !(opts.tol >= 1e-14) {
        return Err(Error::InvalidInput(format!("tolerance {} below 1e-14", opts.tol)));
    }
    let mut z = seed;
    let mut fz = f(z)?;
    let mut best = (z, fz.norm());
    let mut iter = 0;
    while iter < opts.max_iter {
        if fz.norm() < opts.tol {
            return Ok(Root { z, residual: fz.norm(), iterations: iter });
        }
        iter += 1;
        let h = opts.diff_step * z.norm().max(1.0);
        let df = (f(z + h)? - f(z - h)?) / (2.0 * h);
        if df.norm() == 0.0 || !df.is_finite() {
            break;
        }
        let full = -fz / df;
        let mut step = full;
        let mut accepted = None;
        for _ in 0..40 {
            let trial = z + step;
            if let Ok(ft) = f(trial) {
                if ft.is_finite() && ft.norm() < fz.norm() {
                    accepted = Some((trial, ft));
                    break;
                }
            }
            step *= opts.damping;
        }
        match accepted {
            Some((zn, fn_)) => {
                let moved = (zn - z).norm();
                z = zn;
                fz = fn_;
                if fz.norm() < best.1 {
                    best = (z, fz.norm());
                }
                if moved <= 4.0 * f64::EPSILON * z.norm().max(1e-300) && fz.norm() >= opts.tol {
                    break;
                }
            }
            None => break,
        }
    }
    if fz.norm() < opts.tol {
        return Ok(Root { z, residual: fz.norm(), iterations: iter });
    }
    muller(&f, best.0, opts, iter)
}

fn muller<F>(f: &F, start: Complex64, opts: &RootOptions, used: usize) -> Result<Root>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let h = 1e-2 * start.norm().max(1.0);
    let mut x0 = start - h;
    let mut x1 = start + h;
    let mut x2 = start;
    let mut f0 = f(x0)?;
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    let mut best = (x2, f2.norm());
    let mut iter = used;
    while iter < used + opts.max_iter {
        if f2.norm() < opts.tol {
            return Ok(Root { z: x2, residual: f2.norm(), iterations: iter });
        }
        iter += 1;
        let h1 = x1 - x0;
        let h2 = x2 - x1;
        let d1 = (f1 - f0) / h1;
        let d2 = (f2 - f1) / h2;
        let a = (d2 - d1) / (h2 + h1);
        let b = a * h2 + d2;
        let disc = (b * b - 4.0 * a * f2).sqrt();
        let den = if (b + disc).norm() > (b - disc).norm() { b + disc } else { b - disc };
        if den.norm() == 0.0 || !den.is_finite() {
            break;
        }
        let dx = -2.0 * f2 / den;
        let x3 = x2 + dx;
        let f3 = match f(x3) {
            Ok(v) if v.is_finite() => v,
            _ => break,
        };
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
        x2 = x3;
        f2 = f3;
        if f2.norm() < best.1 {
            best = (x2, f2.norm());
        }
        if dx.norm() <= 4.0 * f64::EPSILON * x2.norm().max(1e-300) {
            break;
        }
    }
    if f2.norm() < opts.tol {
        return Ok(Root { z: x2, residual: f2.norm(), iterations: iter });
    }
    Err(Error::NoConvergence { best: best.0, residual: best.1, iterations: iter })
}

/// Brent's method on a real bracket `[a, b]` with `f(a) f(b) <= 0`.
pub fn brent<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, xtol: f64) -> Option<f64> {
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return None;
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Some(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol * m.signum() };
        fb = f(b);
    }
    Some(b)
}

/// Golden-section search for the minimum of `f` on `[a, b]`.
pub fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, xtol: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (b - a).abs() > xtol {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    0.5 * (a + b)
}
