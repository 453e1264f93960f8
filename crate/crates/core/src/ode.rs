//! Dormand–Prince 5(4) integrator with step-size control.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order weights (identical to the last row of `A`).
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One Dormand–Prince stepper for `y' = f(t, y)`.
pub struct Dopri<F> {
    f: F,
    pub rel: f64,
    pub abs: f64,
    k: Vec<Vec<f64>>,
    tmp: Vec<f64>,
}

impl<F: FnMut(f64, &[f64], &mut [f64])> Dopri<F> {
    pub fn new(dim: usize, rel: f64, abs: f64, f: F) -> Self {
        Self {
            f,
            rel,
            abs,
            k: vec![vec![0.0; dim]; 7],
            tmp: vec![0.0; dim],
        }
    }

    /// Attempts a step of size `h` from `(t, y)`, writing the fifth-order
    /// solution to `out`. Returns the scaled error norm (accept when ≤ 1).
    pub fn try_step(&mut self, t: f64, y: &[f64], h: f64, out: &mut [f64]) -> f64 {
        let n = y.len();
        (self.f)(t, y, &mut self.k[0]);
        for s in 1..7 {
            for i in 0..n {
                let mut acc = y[i];
                for (j, a) in A[s].iter().enumerate().take(s) {
                    acc += h * a * self.k[j][i];
                }
                self.tmp[i] = acc;
            }
            (self.f)(t + C[s] * h, &self.tmp, &mut self.k[s]);
        }
        let mut err = 0.0f64;
        for i in 0..n {
            let mut hi = y[i];
            let mut lo = y[i];
            for s in 0..7 {
                hi += h * B5[s] * self.k[s][i];
                lo += h * B4[s] * self.k[s][i];
            }
            out[i] = hi;
            let sc = self.abs + self.rel * y[i].abs().max(hi.abs());
            err = err.max((hi - lo).abs() / sc);
        }
        err
    }

    /// Advances `y` from `t` to `t_end` with adaptive steps, starting from the
    /// suggested step `h`. Returns the suggested next step size, or `None` if
    /// the step size underflows.
    pub fn advance(&mut self, t: f64, t_end: f64, y: &mut [f64], h: f64) -> Option<f64> {
        let mut t = t;
        let floor = 1e-15 * (1.0 + t.abs().max(t_end.abs()));
        let mut h = h.max(floor * 16.0);
        let mut out = vec![0.0; y.len()];
        while t < t_end {
            let clipped = h >= t_end - t;
            let step = if clipped { t_end - t } else { h };
            let err = self.try_step(t, y, step, &mut out);
            if err <= 1.0 {
                t = if clipped { t_end } else { t + step };
                y.copy_from_slice(&out);
                let grow = if err == 0.0 { 5.0 } else { (0.9 * math::pow(err, -0.2)).clamp(0.2, 5.0) };
                // a step shortened to hit `t_end` says nothing about the next one
                h = if clipped { h.max(step * grow) } else { step * grow };
            } else {
                h = step * (0.9 * math::pow(err, -0.2)).clamp(0.1, 0.9);
                if h <= floor {
                    return None;
                }
            }
        }
        Some(h)
    }
}
