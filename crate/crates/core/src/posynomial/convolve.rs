//! Self-convolution of non-negative coefficient arrays.

use std::cell::RefCell;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

/// Inputs of at most this many coefficients are squared directly.
pub(crate) const DIRECT_MAX_LEN: usize = 512;

/// FFT round-off below this magnitude is treated as an exact zero.
pub(crate) const FFT_NOISE_FLOOR: f64 = 1e-12;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Returns the coefficients of `a * a` (length `2 len - 1`) and whether the
/// FFT path was taken.
pub(crate) fn square(a: &[f64]) -> (Vec<f64>, bool) {
    if a.len() <= DIRECT_MAX_LEN {
        (square_direct(a), false)
    } else {
        (square_fft(a), true)
    }
}

pub(crate) fn square_direct(a: &[f64]) -> Vec<f64> {
    let len = a.len();
    let mut out = vec![0.0; 2 * len - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        out[2 * i] += x * x;
        let twice = 2.0 * x;
        for (j, &y) in a.iter().enumerate().skip(i + 1) {
            out[i + j] += twice * y;
        }
    }
    out
}

pub(crate) fn square_fft(a: &[f64]) -> Vec<f64> {
    let out_len = 2 * a.len() - 1;
    let size = out_len.next_power_of_two();
    let mut buf: Vec<Complex<f64>> = a.iter().map(|&x| Complex::new(x, 0.0)).collect();
    buf.resize(size, Complex::new(0.0, 0.0));
    PLANNER.with(|planner| {
        let mut planner = planner.borrow_mut();
        planner.plan_fft_forward(size).process(&mut buf);
        for z in buf.iter_mut() {
            *z = *z * *z;
        }
        planner.plan_fft_inverse(size).process(&mut buf);
    });
    let scale = 1.0 / size as f64;
    buf[..out_len].iter().map(|z| z.re * scale).collect()
}
