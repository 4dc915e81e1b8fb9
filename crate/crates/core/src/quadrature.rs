//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate drops below `max(abs_tol, rel_tol * |I|)`. Semi-infinite ranges
//! are mapped onto `[0, 1)` with `x = a + t / (1 - t)`.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_8,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 1e-13,
            rel: 1e-12,
            max_intervals: 4000,
        }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Self {
            abs,
            rel,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Estimate<T> {
    pub value: T,
    pub error: T,
}

/// One 15-point Kronrod panel: returns (integral, error estimate).
fn kronrod<T: Real>(f: &impl Fn(T) -> T, a: T, b: T) -> (T, T) {
    let half = (b - a) / lit(2.0);
    let center = (a + b) / lit(2.0);
    let fc = f(center);
    let mut resk = fc * lit(WGK[7]);
    let mut resg = fc * lit(WG[3]);
    for j in 0..7 {
        let dx = half * lit(XGK[j]);
        let pair = f(center - dx) + f(center + dx);
        resk += pair * lit(WGK[j]);
        if j % 2 == 1 {
            resg += pair * lit(WG[j / 2]);
        }
    }
    let value = resk * half;
    let err = ((resk - resg) * half).abs();
    (value, err)
}

struct Panel<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

impl<T: Real> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T: Real> Eq for Panel<T> {}
impl<T: Real> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(std::cmp::Ordering::Equal)
    }
}

/// Integral of `f` over the finite interval `[a, b]`.
pub fn integrate<T: Real>(f: impl Fn(T) -> T, a: T, b: T, tol: Tolerance) -> Result<Estimate<T>> {
    if a == b {
        return Ok(Estimate {
            value: T::zero(),
            error: T::zero(),
        });
    }
    let (v, e) = kronrod(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Panel {
        a,
        b,
        value: v,
        error: e,
    });
    let mut total = v;
    let mut total_err = e;
    let floor = T::epsilon() * lit(50.0);
    loop {
        let target = lit::<T>(tol.abs).max(lit::<T>(tol.rel) * total.abs());
        if total_err <= target {
            break;
        }
        if heap.len() >= tol.max_intervals {
            // Accept round-off limited estimates; reject genuine failures.
            if total_err <= floor * total.abs().max(T::one()) * lit(10.0) {
                break;
            }
            return Err(Error::Quadrature {
                estimate: total.to_f64_lossy(),
                error: total_err.to_f64_lossy(),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = (worst.a + worst.b) / lit(2.0);
        if mid <= worst.a || mid >= worst.b {
            // Interval can no longer be split in this precision.
            heap.push(Panel {
                error: T::zero(),
                ..worst
            });
            total_err = heap.iter().map(|p| p.error).sum();
            if total_err.is_zero() {
                break;
            }
            continue;
        }
        let (v1, e1) = kronrod(&f, worst.a, mid);
        let (v2, e2) = kronrod(&f, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
        if heap.len() % 64 == 0 {
            // Re-sum to keep the running totals free of drift.
            total = heap.iter().map(|p| p.value).sum();
            total_err = heap.iter().map(|p| p.error).sum();
        }
    }
    let value = heap.iter().map(|p| p.value).sum();
    Ok(Estimate {
        value,
        error: total_err,
    })
}

/// Integral of `f` over `[a, inf)`.
pub fn integrate_to_infinity<T: Real>(f: impl Fn(T) -> T, a: T, tol: Tolerance) -> Result<Estimate<T>> {
    let mapped = |t: T| {
        let one_minus = T::one() - t;
        let x = a + t / one_minus;
        let jac = T::one() / (one_minus * one_minus);
        let v = f(x) * jac;
        if v.is_finite() {
            v
        } else {
            T::zero()
        }
    };
    integrate(mapped, T::zero(), T::one(), tol)
}
