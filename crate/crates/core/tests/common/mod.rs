//! Independent reference computations shared by the integration tests.
#![allow(dead_code, clippy::needless_range_loop)]

use num_complex::Complex64;

type M3 = [[Complex64; 3]; 3];

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn solve3(mut m: M3, mut b: [Complex64; 3]) -> [Complex64; 3] {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| m[i][col].norm().total_cmp(&m[j][col].norm())).unwrap();
        m.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..3 {
            let f = m[r][col] / m[col][col];
            for k in col..3 {
                let v = m[col][k];
                m[r][k] -= f * v;
            }
            let v = b[col];
            b[r] -= f * v;
        }
    }
    let mut x = [c(0.0); 3];
    for r in (0..3).rev() {
        let mut s = b[r];
        for k in r + 1..3 {
            s -= m[r][k] * x[k];
        }
        x[r] = s / m[r][r];
    }
    x
}

/// Generator of the cycle `0 → ↑ → ↓ → 0` with rates (Γ_L, γ, Γ_R) and the
/// jump operator of the final (hole injection) step.
fn cycle(gl: f64, gamma: f64, gr: f64) -> (M3, M3) {
    let mut l = [[c(0.0); 3]; 3];
    let rates = [(0, 1, gl), (1, 2, gamma), (2, 0, gr)];
    for &(from, to, r) in &rates {
        l[to][from] += c(r);
        l[from][from] -= c(r);
    }
    let mut j = [[c(0.0); 3]; 3];
    j[0][2] = c(gr);
    (l, j)
}

fn apply(m: &M3, v: &[Complex64; 3]) -> [Complex64; 3] {
    let mut out = [c(0.0); 3];
    for i in 0..3 {
        for k in 0..3 {
            out[i] += m[i][k] * v[k];
        }
    }
    out
}

fn stationary(l: &M3) -> [Complex64; 3] {
    // replace one balance row by normalization
    let mut m = *l;
    m[2] = [c(1.0); 3];
    solve3(m, [c(0.0), c(0.0), c(1.0)])
}

/// Fano factor of the counted current from the resolvent formula
/// `S/I = 1 + 1ᵀ J [(iω - L)⁻¹ + (-iω - L)⁻¹] J p / I`, with the
/// zero-frequency value taken through the group inverse.
pub fn cycle_fano(gl: f64, gamma: f64, gr: f64, omega: f64) -> f64 {
    let (l, j) = cycle(gl, gamma, gr);
    let p = stationary(&l);
    let jp = apply(&j, &p);
    let current: Complex64 = jp.iter().sum();
    if omega == 0.0 {
        // L x = J p - I p with 1ᵀ x = 0
        let rhs = [jp[0] - current * p[0], jp[1] - current * p[1], c(0.0)];
        let mut m = l;
        m[2] = [c(1.0); 3];
        let x = solve3(m, rhs);
        let jx: Complex64 = apply(&j, &x).iter().sum();
        return 1.0 - 2.0 * (jx / current).re;
    }
    let mut total = c(0.0);
    for z in [Complex64::new(0.0, omega), Complex64::new(0.0, -omega)] {
        let mut m = [[c(0.0); 3]; 3];
        for r in 0..3 {
            for k in 0..3 {
                m[r][k] = -l[r][k];
            }
            m[r][r] += z;
        }
        let x = solve3(m, jp);
        total += apply(&j, &x).iter().sum::<Complex64>();
    }
    1.0 + (total / current).re
}

/// Closed-form zero-frequency Fano factor of a three-rate cycle.
pub fn cycle_fano_zero(a: f64, b: f64, c: f64) -> f64 {
    let s = a * b + b * c + c * a;
    (a * a * b * b + b * b * c * c + c * c * a * a) / (s * s)
}
