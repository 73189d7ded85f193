//! Cylinder functions of complex argument.
//!
//! Values come from the Amos algorithms in `complex-bessel`; derivatives use
//! the order recurrence `f_n' = (f_{n-1} - f_{n+1}) / 2`.

use complex_bessel::{besselj_seq, hankel1_seq, Scaling};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_ORDER: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CylinderKind {
    BesselJ,
    Hankel1,
}

fn sequence(kind: CylinderKind, order: u32, z: Complex64, scaling: Scaling) -> Result<Vec<Complex64>> {
    // orders max(n-1, 0) ..= n+1
    let start = order.saturating_sub(1);
    let count = (order + 2 - start) as usize;
    let res = match kind {
        CylinderKind::BesselJ => besselj_seq(start as f64, z, count, scaling),
        CylinderKind::Hankel1 => hankel1_seq(start as f64, z, count, scaling),
    }
    .map_err(|e| Error::AccuracyLoss(format!("{kind:?}_{order}({z}): {e}")))?;
    Ok(res.values)
}

fn value_and_slope(order: u32, seq: &[Complex64]) -> (Complex64, Complex64) {
    if order == 0 {
        (seq[0], -seq[1])
    } else {
        (seq[1], (seq[0] - seq[2]) * 0.5)
    }
}

fn check(kind: CylinderKind, order: u32, z: Complex64) -> Result<()> {
    if order > MAX_ORDER {
        return Err(Error::Domain(format!("order {order} exceeds {MAX_ORDER}")));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite argument {z}")));
    }
    if kind == CylinderKind::Hankel1 && z == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("Hankel function is singular at 0".into()));
    }
    Ok(())
}

/// Function value and first derivative of `J_n(z)` or `H_n^(1)(z)`.
pub fn cylinder_bessel(kind: CylinderKind, order: u32, z: Complex64) -> Result<(Complex64, Complex64)> {
    check(kind, order, z)?;
    if z == Complex64::new(0.0, 0.0) {
        let value = if order == 0 { 1.0 } else { 0.0 };
        let slope = if order == 1 { 0.5 } else { 0.0 };
        return Ok((Complex64::new(value, 0.0), Complex64::new(slope, 0.0)));
    }
    let seq = sequence(kind, order, z, Scaling::Unscaled)?;
    Ok(value_and_slope(order, &seq))
}

/// Logarithmic derivative `f_n'(z) / f_n(z)`.
///
/// Uses exponentially scaled values so large imaginary arguments neither
/// overflow nor underflow; the scale factor cancels in the ratio.
pub fn log_derivative(kind: CylinderKind, order: u32, z: Complex64) -> Result<Complex64> {
    check(kind, order, z)?;
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("logarithmic derivative singular at 0".into()));
    }
    let seq = sequence(kind, order, z, Scaling::Exponential)?;
    let (v, d) = value_and_slope(order, &seq);
    if v == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain(format!("{kind:?}_{order} vanishes at {z}")));
    }
    Ok(d / v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn j0_at_origin() {
        let (v, d) = cylinder_bessel(CylinderKind::BesselJ, 0, c(0.0, 0.0)).unwrap();
        assert_eq!(v, c(1.0, 0.0));
        assert_eq!(d, c(0.0, 0.0));
    }

    #[test]
    fn hankel_at_origin_is_domain_error() {
        assert!(matches!(
            cylinder_bessel(CylinderKind::Hankel1, 2, c(0.0, 0.0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn order_cap() {
        assert!(cylinder_bessel(CylinderKind::BesselJ, 17, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn wronskian() {
        for n in 0..=5 {
            for &x in &[0.1, 1.0, 10.0, 100.0] {
                let (j, jd) = cylinder_bessel(CylinderKind::BesselJ, n, c(x, 0.0)).unwrap();
                let (h, hd) = cylinder_bessel(CylinderKind::Hankel1, n, c(x, 0.0)).unwrap();
                let w = j * hd - jd * h;
                let want = c(0.0, 2.0 / (PI * x));
                assert!((w - want).norm() / want.norm() < 1e-10, "n={n} x={x} w={w}");
            }
        }
    }

    #[test]
    fn hankel_large_argument_asymptote() {
        for k in 0..8 {
            let z = Complex64::from_polar(50.0, -0.4 + 0.1 * k as f64);
            let (h, _) = cylinder_bessel(CylinderKind::Hankel1, 0, z).unwrap();
            let asym = (2.0 / (PI * z)).sqrt() * (Complex64::i() * (z - PI / 4.0)).exp();
            assert!((h - asym).norm() / asym.norm() < 0.01);
        }
    }

    // Reference values from a 40-digit mpmath evaluation.
    #[test]
    fn high_precision_reference() {
        let cases: &[(CylinderKind, u32, Complex64, Complex64, Complex64)] = &[
            (
                CylinderKind::BesselJ,
                1,
                c(0.3, 0.7),
                c(0.1764770980125566, 0.3593248689734921),
                c(0.574729683332602, -0.08317335528444736),
            ),
            (
                CylinderKind::BesselJ,
                3,
                c(0.0, 2.5),
                c(0.0, -0.4743704087780356),
                c(-0.7072216572855216, 0.0),
            ),
            (
                CylinderKind::Hankel1,
                0,
                c(1.5, -0.4),
                c(0.6859496504005952, 0.6622431520031735),
                c(-0.8506951610023559, 0.45427984798991355),
            ),
            (
                CylinderKind::Hankel1,
                2,
                c(0.0, 3.0),
                c(0.0, 0.03915877407050598),
                c(-0.05167022742426276, 0.0),
            ),
        ];
        for &(kind, n, z, v, d) in cases {
            let (gv, gd) = cylinder_bessel(kind, n, z).unwrap();
            assert!((gv - v).norm() / v.norm() < 1e-10, "{kind:?} {n} {z}: {gv} vs {v}");
            assert!((gd - d).norm() / d.norm() < 1e-10, "{kind:?} {n} {z}: {gd} vs {d}");
        }
    }

    #[test]
    fn log_derivative_matches_ratio() {
        let z = c(0.4, 3.0);
        for kind in [CylinderKind::BesselJ, CylinderKind::Hankel1] {
            let (v, d) = cylinder_bessel(kind, 2, z).unwrap();
            let ld = log_derivative(kind, 2, z).unwrap();
            assert!((ld - d / v).norm() < 1e-12 * ld.norm());
        }
    }

    #[test]
    fn log_derivative_survives_huge_imaginary_argument() {
        let ld = log_derivative(CylinderKind::BesselJ, 1, c(0.0, 900.0)).unwrap();
        // J_1'(iy)/J_1(iy) = -i I_1'(y)/I_1(y) -> -i as y grows
        assert!((ld - c(0.0, -1.0)).norm() < 2e-3);
    }
}
