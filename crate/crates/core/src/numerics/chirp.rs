//! Sums `Σ_j x_j e^{-i ω_k j h}` over a uniform frequency grid by chunked
//! chirp-z transforms.

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

const MIN_CHUNK: usize = 1 << 14;

/// `X_k = Σ_j x_j e^{-i (w0 + k dw) j h}` for `k < m`.
pub fn uniform_fourier_sum(x: &[f64], h: f64, w0: f64, dw: f64, m: usize) -> Vec<Complex64> {
    if m == 0 || x.is_empty() {
        return vec![Complex64::new(0.0, 0.0); m];
    }
    let chunk = MIN_CHUNK.max(m.next_power_of_two());
    let size = (chunk + m - 1).next_power_of_two();
    let a = dw * h;
    let chirp = |n: i64| Complex64::from_polar(1.0, 0.5 * a * (n * n) as f64);
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(size);
    let inverse = planner.plan_fft_inverse(size);
    let mut filter = vec![Complex64::new(0.0, 0.0); size];
    for (n, f) in filter.iter_mut().enumerate().take(m) {
        *f = chirp(n as i64);
    }
    for n in 1..chunk {
        filter[size - n] = chirp(-(n as i64));
    }
    forward.process(&mut filter);
    let pre: Vec<Complex64> = (0..chunk).map(|j| Complex64::from_polar(1.0, -w0 * j as f64 * h) * chirp(j as i64).conj()).collect();
    let post: Vec<Complex64> = (0..m).map(|k| chirp(k as i64).conj() / size as f64).collect();
    x.par_chunks(chunk)
        .enumerate()
        .map(|(c, xs)| {
            let mut buf = vec![Complex64::new(0.0, 0.0); size];
            for (j, &v) in xs.iter().enumerate() {
                buf[j] = pre[j] * v;
            }
            forward.process(&mut buf);
            for (b, f) in buf.iter_mut().zip(&filter) {
                *b *= f;
            }
            inverse.process(&mut buf);
            let start = (c * chunk) as f64 * h;
            (0..m).map(|k| Complex64::from_polar(1.0, -(w0 + k as f64 * dw) * start) * post[k] * buf[k]).collect::<Vec<_>>()
        })
        .reduce(
            || vec![Complex64::new(0.0, 0.0); m],
            |mut acc, part| {
                for (a, p) in acc.iter_mut().zip(part) {
                    *a += p;
                }
                acc
            },
        )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_direct_sum() {
        let x: Vec<f64> = (0..40_000).map(|j| (-(j as f64) * 1e-4).exp() * (1.0 + (j as f64 * 0.01).sin())).collect();
        let (h, w0, dw, m) = (0.02, -3.0, 0.013, 300);
        let fast = uniform_fourier_sum(&x, h, w0, dw, m);
        for k in [0, 1, 77, 299] {
            let w = w0 + k as f64 * dw;
            let direct: Complex64 = x.iter().enumerate().map(|(j, &v)| v * Complex64::from_polar(1.0, -w * j as f64 * h)).sum();
            assert!((fast[k] - direct).norm() < 1e-9 * direct.norm().max(1.0), "k = {k}");
        }
    }
}
