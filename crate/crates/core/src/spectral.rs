//! Periodic Fourier discretization and the multiplier operators built on it.
//!
//! The physical line is truncated to the box `[-L/2, L/2)` with `N` equally
//! spaced nodes. Fourier coefficients are stored in FFT order and normalized
//! so that `u(x_j) = sum_m c_m exp(2 pi i m j / N)`, i.e. `c = FFT(u) / N`.
//! With this scaling Parseval reads `h * sum |u_j|^2 = L * sum |c_m|^2`.
//!
//! Wavenumbers are angular, `k_m = 2 pi m / L`, and every homogeneous
//! multiplier uses the constant `c_s = 1` in front of `|k|^s`.
//!
//! The Nyquist mode `m = -N/2` carries no sign information, so every
//! multiplier of positive order (`D^s` with `s > 0`, `d/dx`, `H`) sends it to
//! zero. This keeps outputs real and makes `D = H d/dx` hold exactly on the
//! grid.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use rand::Rng;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

struct Plans<T: Real> {
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

/// Uniform periodic grid on `[-L/2, L/2)`.
#[derive(Clone)]
pub struct Grid<T: Real> {
    n: usize,
    length: T,
    plans: Arc<Plans<T>>,
}

impl<T: Real> fmt::Debug for Grid<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("n", &self.n)
            .field("length", &self.length)
            .finish()
    }
}

impl<T: Real> PartialEq for Grid<T> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.plans, &other.plans) || (self.n == other.n && self.length == other.length)
    }
}

impl<T: Real> Grid<T> {
    pub fn new(n: usize, length: T) -> Result<Self> {
        if n < 16 || !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "n_points must be even and at least 16, got {n}"
            )));
        }
        if !(length.is_finite() && length > T::zero()) {
            return Err(Error::InvalidGrid(format!(
                "length must be positive and finite, got {length}"
            )));
        }
        let mut planner = FftPlanner::new();
        let plans = Plans {
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        };
        Ok(Self {
            n,
            length,
            plans: Arc::new(plans),
        })
    }

    pub fn n_points(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> T {
        self.length
    }

    pub fn spacing(&self) -> T {
        self.length / T::of_usize(self.n)
    }

    /// `x_j = -L/2 + j h`.
    pub fn node(&self, j: usize) -> T {
        -self.length / lit(2.0) + T::of_usize(j) * self.spacing()
    }

    pub fn nodes(&self) -> Vec<T> {
        (0..self.n).map(|j| self.node(j)).collect()
    }

    /// Index of the node sitting at `x = 0`.
    pub fn origin_index(&self) -> usize {
        self.n / 2
    }

    /// Signed mode number `m` of the coefficient stored at FFT position `idx`.
    pub fn mode(&self, idx: usize) -> i64 {
        if idx < self.n / 2 {
            idx as i64
        } else {
            idx as i64 - self.n as i64
        }
    }

    /// FFT position of mode `m`, if it is represented on this grid.
    pub fn index_of_mode(&self, m: i64) -> Option<usize> {
        let half = (self.n / 2) as i64;
        if m < -half || m >= half {
            None
        } else if m >= 0 {
            Some(m as usize)
        } else {
            Some((m + self.n as i64) as usize)
        }
    }

    pub fn is_nyquist(&self, idx: usize) -> bool {
        idx == self.n / 2
    }

    /// Angular wavenumber of the coefficient at FFT position `idx`.
    pub fn wavenumber(&self, idx: usize) -> T {
        T::TAU() * lit::<T>(self.mode(idx) as f64) / self.length
    }

    pub fn wavenumbers(&self) -> Vec<T> {
        (0..self.n).map(|i| self.wavenumber(i)).collect()
    }

    /// Largest wavenumber kept by the 2/3 rule.
    pub fn dealias_cutoff(&self) -> i64 {
        (self.n / 3) as i64
    }

    pub(crate) fn forward_in_place(&self, buf: &mut [Complex<T>]) {
        self.plans.forward.process(buf);
        let scale = T::one() / T::of_usize(self.n);
        for c in buf.iter_mut() {
            *c = c.scale(scale);
        }
    }

    pub(crate) fn inverse_in_place(&self, buf: &mut [Complex<T>]) {
        self.plans.inverse.process(buf);
    }

    pub(crate) fn forward_real(&self, samples: &[T]) -> Vec<Complex<T>> {
        let mut buf: Vec<Complex<T>> = samples.iter().map(|&x| Complex::new(x, T::zero())).collect();
        self.forward_in_place(&mut buf);
        buf
    }

    pub(crate) fn inverse_real(&self, coeffs: &[Complex<T>]) -> Vec<T> {
        let mut buf = coeffs.to_vec();
        self.inverse_in_place(&mut buf);
        buf.into_iter().map(|c| c.re).collect()
    }
}

/// Real samples of a function on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct RealField<T: Real> {
    grid: Grid<T>,
    samples: Vec<T>,
}

impl<T: Real> RealField<T> {
    pub fn new(grid: &Grid<T>, samples: Vec<T>) -> Result<Self> {
        if samples.len() != grid.n_points() {
            return Err(Error::InvalidGrid(format!(
                "expected {} samples, got {}",
                grid.n_points(),
                samples.len()
            )));
        }
        if let Some(index) = samples.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self {
            grid: grid.clone(),
            samples,
        })
    }

    /// Internal constructor for samples produced by our own operators.
    pub(crate) fn from_trusted(grid: &Grid<T>, samples: Vec<T>) -> Self {
        debug_assert_eq!(samples.len(), grid.n_points());
        Self {
            grid: grid.clone(),
            samples,
        }
    }

    pub fn zeros(grid: &Grid<T>) -> Self {
        Self::from_trusted(grid, vec![T::zero(); grid.n_points()])
    }

    pub fn constant(grid: &Grid<T>, value: T) -> Self {
        Self::from_trusted(grid, vec![value; grid.n_points()])
    }

    /// Samples `f` at the grid nodes. Panics if `f` returns a non-finite value.
    pub fn from_fn(grid: &Grid<T>, f: impl Fn(T) -> T) -> Self {
        let samples: Vec<T> = grid.nodes().into_iter().map(f).collect();
        Self::new(grid, samples).expect("from_fn produced a non-finite sample")
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<T> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn to_spectral(&self) -> SpectralField<T> {
        SpectralField {
            grid: self.grid.clone(),
            coefficients: self.grid.forward_real(&self.samples),
        }
    }

    pub fn same_grid(&self, other: &Self) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self::from_trusted(&self.grid, self.samples.iter().map(|&x| f(x)).collect())
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self> {
        self.same_grid(other)?;
        Ok(Self::from_trusted(
            &self.grid,
            self.samples
                .iter()
                .zip(&other.samples)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        ))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_map(other, |a, b| a * b)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_map(other, |a, b| a - b)
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|x| x * s)
    }

    /// Rectangle-rule integral, spectrally accurate for smooth periodic data.
    pub fn integral(&self) -> T {
        self.samples.iter().copied().sum::<T>() * self.grid.spacing()
    }

    pub fn inner(&self, other: &Self) -> Result<T> {
        self.same_grid(other)?;
        Ok(self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(&a, &b)| a * b)
            .sum::<T>()
            * self.grid.spacing())
    }

    pub fn norm_l2(&self) -> T {
        (self.samples.iter().map(|&x| x * x).sum::<T>() * self.grid.spacing()).sqrt()
    }

    pub fn norm_l1(&self) -> T {
        self.samples.iter().map(|x| x.abs()).sum::<T>() * self.grid.spacing()
    }

    pub fn norm_lp(&self, p: T) -> T {
        (self.samples.iter().map(|x| x.abs().powf(p)).sum::<T>() * self.grid.spacing())
            .powf(T::one() / p)
    }

    pub fn max_abs(&self) -> T {
        self.samples
            .iter()
            .fold(T::zero(), |acc, x| acc.max(x.abs()))
    }

    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (j, &x) in self.samples.iter().enumerate() {
            if x > self.samples[best] {
                best = j;
            }
        }
        best
    }

    /// Translation by `shift` nodes: `out[j] = self[j - shift]` (periodic).
    pub fn roll(&self, shift: isize) -> Self {
        let n = self.samples.len() as isize;
        let s = shift.rem_euclid(n) as usize;
        let mut out = self.samples.clone();
        out.rotate_right(s);
        Self::from_trusted(&self.grid, out)
    }

    /// Mirror image about `x = 0`: `out(x) = self(-x)`.
    pub fn reflect(&self) -> Self {
        let n = self.samples.len();
        let out = (0..n).map(|j| self.samples[(n - j) % n]).collect();
        Self::from_trusted(&self.grid, out)
    }

    /// Translation by an arbitrary distance via the Fourier shift theorem:
    /// `out(x) = self(x - dx)`.
    pub fn translate(&self, dx: T) -> Self {
        apply_multiplier(
            self,
            |k| {
                let phase = -k * dx;
                Complex::new(phase.cos(), phase.sin())
            },
            true,
        )
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        self.same_grid(other)?;
        Ok(self
            .samples
            .iter()
            .zip(&other.samples)
            .fold(T::zero(), |acc, (&a, &b)| acc.max((a - b).abs())))
    }

    pub fn is_zero(&self) -> bool {
        self.samples.iter().all(|x| x.is_zero())
    }
}

/// Fourier coefficients of a field, stored in FFT order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField<T: Real> {
    grid: Grid<T>,
    coefficients: Vec<Complex<T>>,
}

impl<T: Real> SpectralField<T> {
    pub fn new(grid: &Grid<T>, coefficients: Vec<Complex<T>>) -> Result<Self> {
        if coefficients.len() != grid.n_points() {
            return Err(Error::InvalidGrid(format!(
                "expected {} coefficients, got {}",
                grid.n_points(),
                coefficients.len()
            )));
        }
        Ok(Self {
            grid: grid.clone(),
            coefficients,
        })
    }

    pub fn zeros(grid: &Grid<T>) -> Self {
        Self {
            grid: grid.clone(),
            coefficients: vec![Complex::new(T::zero(), T::zero()); grid.n_points()],
        }
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn coefficients(&self) -> &[Complex<T>] {
        &self.coefficients
    }

    pub fn coefficients_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.coefficients
    }

    /// Coefficient of signed mode `m`; zero if the mode is not on the grid.
    pub fn coefficient(&self, m: i64) -> Complex<T> {
        self.grid
            .index_of_mode(m)
            .map(|i| self.coefficients[i])
            .unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    pub fn set_coefficient(&mut self, m: i64, value: Complex<T>) {
        if let Some(i) = self.grid.index_of_mode(m) {
            self.coefficients[i] = value;
        }
    }

    /// Largest violation of `c(-m) = conj(c(m))` over the represented modes.
    pub fn hermitian_defect(&self) -> T {
        let n = self.coefficients.len();
        (1..n / 2)
            .map(|i| (self.coefficients[i] - self.coefficients[n - i].conj()).norm())
            .chain(std::iter::once(self.coefficients[0].im.abs()))
            .fold(T::zero(), T::max)
    }

    /// Back to physical space, keeping the real part.
    pub fn to_real(&self) -> RealField<T> {
        RealField::from_trusted(&self.grid, self.grid.inverse_real(&self.coefficients))
    }

    /// `sum |c_m|^2`; multiply by `L` to get the L2 norm squared.
    pub fn energy(&self) -> T {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Applies the Fourier multiplier `symbol(k)` to `u`.
///
/// With `zero_nyquist` the Nyquist coefficient is dropped, which is required
/// for symbols that are odd in `k`.
pub fn apply_multiplier<T: Real>(
    u: &RealField<T>,
    symbol: impl Fn(T) -> Complex<T>,
    zero_nyquist: bool,
) -> RealField<T> {
    let grid = u.grid();
    let mut coeffs = grid.forward_real(u.samples());
    multiply_in_place(grid, &mut coeffs, symbol, zero_nyquist);
    RealField::from_trusted(grid, grid.inverse_real(&coeffs))
}

pub(crate) fn multiply_in_place<T: Real>(
    grid: &Grid<T>,
    coeffs: &mut [Complex<T>],
    symbol: impl Fn(T) -> Complex<T>,
    zero_nyquist: bool,
) {
    for (i, c) in coeffs.iter_mut().enumerate() {
        if zero_nyquist && grid.is_nyquist(i) {
            *c = Complex::new(T::zero(), T::zero());
        } else {
            *c *= symbol(grid.wavenumber(i));
        }
    }
}

fn check_order<T: Real>(s: T) -> Result<()> {
    if s.is_nan() {
        return Err(Error::param("s", "order is NaN"));
    }
    if s < T::zero() {
        return Err(Error::NegativeOrder(s.to_f64_lossy()));
    }
    Ok(())
}

/// Homogeneous derivative `D^s`, symbol `|k|^s`.
pub fn fractional_derivative<T: Real>(u: &RealField<T>, s: T) -> Result<RealField<T>> {
    check_order(s)?;
    if s.is_zero() {
        return Ok(u.clone());
    }
    Ok(apply_multiplier(
        u,
        |k| Complex::new(abs_pow(k, s), T::zero()),
        true,
    ))
}

/// Hilbert transform, symbol `-i sgn(k)`.
pub fn hilbert<T: Real>(u: &RealField<T>) -> RealField<T> {
    apply_multiplier(u, |k| Complex::new(T::zero(), -signum0(k)), true)
}

/// `H D^s`, symbol `-i sgn(k) |k|^s`.
pub fn hilbert_fractional<T: Real>(u: &RealField<T>, s: T) -> Result<RealField<T>> {
    check_order(s)?;
    Ok(apply_multiplier(
        u,
        |k| Complex::new(T::zero(), -signum0(k) * abs_pow(k, s)),
        true,
    ))
}

/// Spectral first derivative, symbol `i k`.
pub fn derivative<T: Real>(u: &RealField<T>) -> RealField<T> {
    apply_multiplier(u, |k| Complex::new(T::zero(), k), true)
}

/// Spectral derivative of order `order` (integer), symbol `(i k)^order`.
pub fn derivative_n<T: Real>(u: &RealField<T>, order: u32) -> RealField<T> {
    if order == 0 {
        return u.clone();
    }
    apply_multiplier(
        u,
        |k| Complex::new(T::zero(), k).powu(order),
        true,
    )
}

/// 2/3-rule filter: zero every mode with `|m| > N/3`.
///
/// Quadratic products of fields filtered this way are alias-free on the kept
/// modes whenever `N` is not a multiple of 3 (always the case for powers of
/// two).
pub fn dealias<T: Real>(u_hat: &SpectralField<T>) -> SpectralField<T> {
    let mut out = u_hat.clone();
    dealias_in_place(u_hat.grid(), &mut out.coefficients);
    out
}

pub(crate) fn dealias_in_place<T: Real>(grid: &Grid<T>, coeffs: &mut [Complex<T>]) {
    let cutoff = grid.dealias_cutoff();
    for (i, c) in coeffs.iter_mut().enumerate() {
        if grid.mode(i).abs() > cutoff {
            *c = Complex::new(T::zero(), T::zero());
        }
    }
}

/// `|k|^s` with `0^s = 0` for `s > 0`.
#[inline]
pub(crate) fn abs_pow<T: Real>(k: T, s: T) -> T {
    let a = k.abs();
    if a.is_zero() {
        T::zero()
    } else {
        a.powf(s)
    }
}

/// Sign function with `sgn(0) = 0`.
#[inline]
pub(crate) fn signum0<T: Real>(k: T) -> T {
    if k > T::zero() {
        T::one()
    } else if k < T::zero() {
        -T::one()
    } else {
        T::zero()
    }
}

/// Random zero-mean real trigonometric polynomial with modes `1..=max_mode`.
///
/// The coefficients are drawn before the grid is consulted, so the same RNG
/// state yields the same continuous function on any grid that resolves it.
pub fn random_band_limited<T: Real, R: Rng + ?Sized>(
    grid: &Grid<T>,
    max_mode: usize,
    rng: &mut R,
) -> Result<RealField<T>> {
    if max_mode == 0 || 2 * max_mode >= grid.n_points() {
        return Err(Error::param(
            "max_mode",
            format!("must be in 1..{}", grid.n_points() / 2),
        ));
    }
    let mut spec = SpectralField::zeros(grid);
    for m in 1..=max_mode as i64 {
        let re: f64 = rng.gen_range(-1.0..1.0);
        let im: f64 = rng.gen_range(-1.0..1.0);
        let c = Complex::new(lit::<T>(re), lit::<T>(im));
        spec.set_coefficient(m, c);
        spec.set_coefficient(-m, c.conj());
    }
    Ok(spec.to_real())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn unit_grid(n: usize) -> Grid<f64> {
        Grid::new(n, std::f64::consts::TAU).unwrap()
    }

    #[test]
    fn grid_rejects_bad_sizes() {
        assert!(Grid::<f64>::new(15, 1.0).is_err());
        assert!(Grid::<f64>::new(8, 1.0).is_err());
        assert!(Grid::<f64>::new(17, 1.0).is_err());
        assert!(Grid::<f64>::new(16, 0.0).is_err());
        assert!(Grid::<f64>::new(16, f64::NAN).is_err());
        let g = Grid::<f64>::new(16, 2.0).unwrap();
        assert_eq!(g.node(0), -1.0);
        assert_eq!(g.node(8), 0.0);
        assert_eq!(g.mode(8), -8);
        assert_eq!(g.index_of_mode(-1), Some(15));
        assert_eq!(g.index_of_mode(8), None);
    }

    #[test]
    fn rejects_nan_samples_and_negative_order() {
        let g = unit_grid(16);
        let mut s = vec![0.0; 16];
        s[3] = f64::NAN;
        assert_eq!(RealField::new(&g, s), Err(Error::NonFinite { index: 3 }));
        let u = RealField::from_fn(&g, |x| x.sin());
        assert!(matches!(
            fractional_derivative(&u, -0.5),
            Err(Error::NegativeOrder(_))
        ));
        assert!(fractional_derivative(&u, f64::NAN).is_err());
    }

    #[test]
    fn single_mode_multipliers() {
        let g = unit_grid(64);
        let u = RealField::from_fn(&g, |x| (3.0 * x).sin());
        let s = 0.7;
        let d = fractional_derivative(&u, s).unwrap();
        let expected = RealField::from_fn(&g, |x| 3f64.powf(s) * (3.0 * x).sin());
        assert!(d.max_abs_diff(&expected).unwrap() < 1e-12);

        assert_eq!(fractional_derivative(&u, 0.0).unwrap(), u);

        let c = RealField::from_fn(&g, |x| x.cos());
        let h = hilbert(&c);
        let sin = RealField::from_fn(&g, |x| x.sin());
        assert!(h.max_abs_diff(&sin).unwrap() < 1e-13);

        let s2 = RealField::from_fn(&g, |x| (2.0 * x).sin());
        let ds2 = derivative(&s2);
        let c2 = RealField::from_fn(&g, |x| 2.0 * (2.0 * x).cos());
        assert!(ds2.max_abs_diff(&c2).unwrap() < 1e-12);
    }

    #[test]
    fn constants_are_annihilated() {
        let g = unit_grid(32);
        let k = RealField::constant(&g, 2.5);
        assert!(hilbert(&k).max_abs() < 1e-15);
        assert!(derivative(&k).max_abs() < 1e-15);
        assert!(fractional_derivative(&k, 0.3).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn hilbert_squared_is_minus_identity_on_zero_mean() {
        let g = unit_grid(128);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let u = random_band_limited(&g, 40, &mut rng).unwrap();
        let hh = hilbert(&hilbert(&u));
        let err = hh.add(&u).unwrap().max_abs();
        assert!(err <= 1e-12 * u.max_abs(), "{err}");
    }

    #[test]
    fn d_equals_hilbert_of_derivative() {
        let g = unit_grid(128);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        // includes the Nyquist mode on purpose
        let samples = (0..128).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let u = RealField::new(&g, samples).unwrap();
        let d1 = fractional_derivative(&u, 1.0).unwrap();
        let hd = hilbert(&derivative(&u));
        assert!(d1.max_abs_diff(&hd).unwrap() <= 1e-12 * d1.max_abs().max(1.0));
    }

    #[test]
    fn dealias_examples() {
        let g = unit_grid(48);
        let u = RealField::from_fn(&g, |x| (16.0 * x).cos() + (5.0 * x).sin());
        let uh = u.to_spectral();
        let back = dealias(&uh).to_real();
        assert!(back.max_abs_diff(&u).unwrap() < 1e-13);

        let mut top = SpectralField::zeros(&g);
        top.set_coefficient(23, Complex::new(1.0, 0.5));
        top.set_coefficient(-23, Complex::new(1.0, -0.5));
        assert!(dealias(&top).to_real().max_abs() == 0.0);
    }

    #[test]
    fn dealiased_product_matches_direct_convolution() {
        // Oracle: exact convolution of the coefficient sequences.
        for &n in &[32usize, 40, 64] {
            let g = unit_grid(n);
            let k = (n / 3) as i64;
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            let mut a = SpectralField::zeros(&g);
            let mut b = SpectralField::zeros(&g);
            for m in 1..=k {
                for s in [&mut a, &mut b] {
                    let c = Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    s.set_coefficient(m, c);
                    s.set_coefficient(-m, c.conj());
                }
            }
            let ua = a.to_real();
            let ub = b.to_real();
            let product = dealias(&ua.mul(&ub).unwrap().to_spectral());
            for m in -k..=k {
                let mut exact = Complex::new(0.0, 0.0);
                for p in -k..=k {
                    let q = m - p;
                    if q.abs() <= k {
                        exact += a.coefficient(p) * b.coefficient(q);
                    }
                }
                let err = (product.coefficient(m) - exact).norm();
                assert!(err < 1e-12, "n={n} m={m} err={err}");
            }
        }
    }

    #[test]
    fn parseval_holds() {
        let g = Grid::<f64>::new(256, 37.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let samples = (0..256).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let u = RealField::new(&g, samples).unwrap();
        let lhs = u.norm_l2().powi(2);
        let rhs = g.length() * u.to_spectral().energy();
        assert!(((lhs - rhs) / lhs).abs() < 1e-12);
        assert!(u.to_spectral().hermitian_defect() < 1e-14);
    }

    #[test]
    fn translate_and_roll_agree_on_node_shifts() {
        let g = Grid::new(128, 40.0).unwrap();
        let u = RealField::from_fn(&g, |x: f64| (-x * x / 4.0).exp());
        let rolled = u.roll(5);
        let moved = u.translate(5.0 * g.spacing());
        assert!(rolled.max_abs_diff(&moved).unwrap() < 1e-12);
        let refl = u.reflect();
        assert!(refl.max_abs_diff(&u).unwrap() < 1e-15);
    }

    #[test]
    fn lorentzian_first_derivative() {
        // Continuum: D[4/(1+x^2)] = 4(1-x^2)/(1+x^2)^2.
        let g = Grid::new(1 << 14, 400.0).unwrap();
        let u = RealField::from_fn(&g, |x: f64| 4.0 / (1.0 + x * x));
        let d = fractional_derivative(&u, 1.0).unwrap();
        let j0 = g.origin_index();
        for j in j0 - 50..j0 + 50 {
            let x = g.node(j);
            let exact = 4.0 * (1.0 - x * x) / (1.0 + x * x).powi(2);
            assert!((d.samples()[j] - exact).abs() < 1e-3);
        }
    }

    #[test]
    fn works_in_single_precision() {
        let g = Grid::<f32>::new(64, std::f32::consts::TAU).unwrap();
        let u = RealField::from_fn(&g, |x| (3.0 * x).sin());
        let d = derivative(&u);
        let e = RealField::from_fn(&g, |x| 3.0 * (3.0 * x).cos());
        assert!(d.max_abs_diff(&e).unwrap() < 1e-4);
    }
}
