//! Dense `N x N` reference operators built from explicit DFT sums.
//!
//! O(N^3) and meant for `N <= 64`. Nothing here goes through the FFT path,
//! so agreement with the fast operators is an independent check.

use num_complex::Complex64;

use crate::spectral::Grid;

pub type Matrix = Vec<Vec<f64>>;

fn mode_of(idx: usize, n: usize) -> i64 {
    if idx < n / 2 {
        idx as i64
    } else {
        idx as i64 - n as i64
    }
}

/// Matrix of the Fourier multiplier with the given symbol in `k = 2 pi m / L`.
/// The Nyquist mode is dropped when `zero_nyquist` is set.
pub fn multiplier(n: usize, length: f64, symbol: impl Fn(f64) -> Complex64, zero_nyquist: bool) -> Matrix {
    let tau = std::f64::consts::TAU;
    let mut out = vec![vec![0.0; n]; n];
    let sym: Vec<Complex64> = (0..n)
        .map(|idx| {
            let m = mode_of(idx, n);
            if zero_nyquist && idx == n / 2 {
                Complex64::new(0.0, 0.0)
            } else {
                symbol(tau * m as f64 / length)
            }
        })
        .collect();
    for (j, row) in out.iter_mut().enumerate() {
        for (l, cell) in row.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (idx, s) in sym.iter().enumerate() {
                let phase = tau * (idx as f64) * (j as f64 - l as f64) / n as f64;
                acc += s * Complex64::from_polar(1.0, phase);
            }
            *cell = acc.re / n as f64;
        }
    }
    out
}

pub fn fractional_derivative(n: usize, length: f64, s: f64) -> Matrix {
    multiplier(
        n,
        length,
        |k| {
            if s == 0.0 {
                Complex64::new(1.0, 0.0)
            } else if k == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(k.abs().powf(s), 0.0)
            }
        },
        s > 0.0,
    )
}

pub fn hilbert(n: usize, length: f64) -> Matrix {
    multiplier(n, length, |k| Complex64::new(0.0, -sign(k)), true)
}

pub fn derivative(n: usize, length: f64) -> Matrix {
    multiplier(n, length, |k| Complex64::new(0.0, k), true)
}

fn sign(k: f64) -> f64 {
    if k > 0.0 {
        1.0
    } else if k < 0.0 {
        -1.0
    } else {
        0.0
    }
}

pub fn diagonal(values: &[f64]) -> Matrix {
    let n = values.len();
    let mut out = vec![vec![0.0; n]; n];
    for (j, v) in values.iter().enumerate() {
        out[j][j] = *v;
    }
    out
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b[0].len();
    let mut out = vec![vec![0.0; m]; n];
    for i in 0..n {
        for k in 0..b.len() {
            let aik = a[i][k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..m {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn add(a: &Matrix, b: &Matrix, scale_b: f64) -> Matrix {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + scale_b * y).collect())
        .collect()
}

pub fn apply(a: &Matrix, v: &[f64]) -> Vec<f64> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

/// Dense `R_n(order)` for the weight samples `f` with derivative samples `fp`.
pub fn remainder_matrix(grid: &Grid<f64>, f: &[f64], fp: &[f64], order: f64, n_terms: usize) -> Matrix {
    let n = grid.n_points();
    let length = grid.length();
    let h = hilbert(n, length);
    let hd = matmul(&h, &fractional_derivative(n, length, order));
    let fm = diagonal(f);
    let comm = add(&matmul(&hd, &fm), &matmul(&fm, &hd), -1.0);

    let d = derivative(n, length);
    let mu = (order - 1.0) / 2.0;
    let mut p = vec![vec![0.0; n]; n];
    let mut odd = fp.to_vec();
    let mut sign = 1.0;
    let mut quarter = 1.0;
    for j in 0..=n_terms {
        let dj = fractional_derivative(n, length, mu - j as f64);
        let term = matmul(&dj, &matmul(&diagonal(&odd), &dj));
        let c = crate::commutators::coefficient(order, j);
        p = add(&p, &term, order * c * sign * quarter);
        odd = apply(&d, &apply(&d, &odd));
        sign = -sign;
        quarter /= 4.0;
    }
    let hph = matmul(&h, &matmul(&p, &h));
    let sym = add(&p, &hph, -1.0);
    add(&comm, &sym, 0.5).iter().map(|row| row.iter().map(|x| -x).collect()).collect()
}
