//! In-place 2-D FFT over row-major complex buffers, with per-thread plan
//! caches.

use std::cell::RefCell;

use rustfft::num_complex::Complex;
use rustfft::{FftNum, FftPlanner};

thread_local! {
    static PLANNER_F32: RefCell<FftPlanner<f32>> = RefCell::new(FftPlanner::new());
    static PLANNER_F64: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

pub trait PlannerCache: FftNum {
    fn with_planner<R>(f: impl FnOnce(&mut FftPlanner<Self>) -> R) -> R;
}

impl PlannerCache for f32 {
    fn with_planner<R>(f: impl FnOnce(&mut FftPlanner<f32>) -> R) -> R {
        PLANNER_F32.with(|p| f(&mut p.borrow_mut()))
    }
}

impl PlannerCache for f64 {
    fn with_planner<R>(f: impl FnOnce(&mut FftPlanner<f64>) -> R) -> R {
        PLANNER_F64.with(|p| f(&mut p.borrow_mut()))
    }
}

/// Cache-blocked transpose of a `width`×`height` row-major buffer.
fn transpose<T: Copy>(src: &[T], dst: &mut [T], width: usize, height: usize) {
    const B: usize = 32;
    for y0 in (0..height).step_by(B) {
        for x0 in (0..width).step_by(B) {
            for y in y0..(y0 + B).min(height) {
                for x in x0..(x0 + B).min(width) {
                    dst[x * height + y] = src[y * width + x];
                }
            }
        }
    }
}

/// Unnormalized 2-D DFT (forward) or its unnormalized inverse.
pub fn fft2d<T: PlannerCache>(data: &mut [Complex<T>], width: usize, height: usize, inverse: bool) {
    assert_eq!(data.len(), width * height);
    T::with_planner(|planner| {
        let row = if inverse {
            planner.plan_fft_inverse(width)
        } else {
            planner.plan_fft_forward(width)
        };
        row.process(data);
        let col = if inverse {
            planner.plan_fft_inverse(height)
        } else {
            planner.plan_fft_forward(height)
        };
        let mut t = vec![Complex::new(T::zero(), T::zero()); data.len()];
        transpose(data, &mut t, width, height);
        col.process(&mut t);
        transpose(&t, data, height, width);
    });
}

/// Signed frequency (cycles/sample) of DFT index `k` for length `n`.
#[inline]
pub fn signed_frequency(k: usize, n: usize) -> f64 {
    let k = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
    k / n as f64
}
