//! Commutator expansion of `[H D^a, f]` into the symmetric local part
//! `P_n(a)` and the L2-bounded remainder `R_n(a)`:
//!
//! ```text
//! R_n(a) = -[H D^a, f] - 1/2 (P_n(a) - H P_n(a) H)
//! P_n(a) = a * sum_{0<=j<=n} c_{2j+1} (-1)^j 4^{-j} D^{mu-j} f^{(2j+1)} D^{mu-j},   mu = (a-1)/2
//! ```
//!
//! All operators are evaluated pseudospectrally on the field's grid. The
//! weight `f` itself only enters pointwise; its odd derivatives are taken
//! from a separately supplied `f'`, so non-periodic weights such as
//! `phi_alpha(x / lambda)` never get differentiated across the seam.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_to_infinity, Tolerance};
use crate::scalar::{lit, Real};
use crate::spectral::{
    apply_multiplier, derivative, derivative_n, fractional_derivative, hilbert, hilbert_fractional,
    Grid, RealField,
};
use crate::weights::{transform_moment, WeightSpec};

/// `c_1 = 1`, `c_{2j+1} = (1/(2j+1)!) prod_{0<=k<j} (a^2 - (2k+1)^2)`.
pub fn coefficient<T: Real>(order: T, j: usize) -> T {
    let mut value = T::one();
    for k in 0..j {
        let odd = T::of_usize(2 * k + 1);
        value *= order * order - odd * odd;
    }
    for m in 1..=(2 * j + 1) {
        value /= T::of_usize(m);
    }
    value
}

/// Operator order `a`, expansion index `n`, derivative weight `sigma` and the
/// sampled weight `f` with its derivative.
#[derive(Debug, Clone)]
pub struct CommutatorSpec<T: Real> {
    order: T,
    n: usize,
    sigma: T,
    weight: RealField<T>,
    weight_derivative: RealField<T>,
}

impl<T: Real> CommutatorSpec<T> {
    pub fn new(
        order: T,
        n: usize,
        sigma: T,
        weight: RealField<T>,
        weight_derivative: RealField<T>,
    ) -> Result<Self> {
        if !(order >= T::one() && order.is_finite()) {
            return Err(Error::param("order", format!("must be >= 1, got {order}")));
        }
        if !(sigma >= T::zero() && sigma.is_finite()) {
            return Err(Error::param("sigma", format!("must be >= 0, got {sigma}")));
        }
        let lo = T::of_usize(2 * n + 1);
        let hi = T::of_usize(2 * n + 3);
        let s = order + lit::<T>(2.0) * sigma;
        if s < lo || s > hi {
            return Err(Error::param(
                "n",
                format!("admissibility requires {lo} <= order + 2 sigma = {s} <= {hi}"),
            ));
        }
        weight.same_grid(&weight_derivative)?;
        Ok(Self {
            order,
            n,
            sigma,
            weight,
            weight_derivative,
        })
    }

    /// Periodic weight: `f'` is computed spectrally.
    pub fn periodic(order: T, n: usize, sigma: T, weight: RealField<T>) -> Result<Self> {
        let d = derivative(&weight);
        Self::new(order, n, sigma, weight, d)
    }

    /// `f = phi_alpha(x / lambda)` sampled on `grid`, with the exact
    /// derivative `phi_alpha'(x / lambda) / lambda`.
    pub fn for_weight(order: T, n: usize, sigma: T, grid: &Grid<T>, weight: &WeightSpec<T>) -> Result<Self> {
        let f = weight.sample_primitive(grid)?;
        let fp = weight.sample_derivative(grid);
        Self::new(order, n, sigma, f, fp)
    }

    pub fn order(&self) -> T {
        self.order
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sigma(&self) -> T {
        self.sigma
    }

    /// `mu = (order - 1) / 2`.
    pub fn mu(&self) -> T {
        (self.order - T::one()) / lit(2.0)
    }

    pub fn weight(&self) -> &RealField<T> {
        &self.weight
    }

    pub fn weight_derivative(&self) -> &RealField<T> {
        &self.weight_derivative
    }

    pub fn grid(&self) -> &Grid<T> {
        self.weight.grid()
    }

    /// `f^{(2j+1)}`, obtained by differentiating `f'` spectrally `2j` times.
    pub fn odd_derivative(&self, j: usize) -> RealField<T> {
        derivative_n(&self.weight_derivative, 2 * j as u32)
    }

    fn check_orders(&self) -> Result<()> {
        if self.mu() < T::of_usize(self.n) {
            return Err(Error::param(
                "n",
                format!(
                    "D^(mu - j) needs mu >= n, but mu = {} and n = {}",
                    self.mu(),
                    self.n
                ),
            ));
        }
        Ok(())
    }
}

/// `[H D^a, f] h = H D^a (f h) - f H D^a h`.
pub fn commutator<T: Real>(spec: &CommutatorSpec<T>, h: &RealField<T>) -> Result<RealField<T>> {
    let fh = spec.weight.mul(h)?;
    let left = hilbert_fractional(&fh, spec.order)?;
    let right = spec.weight.mul(&hilbert_fractional(h, spec.order)?)?;
    left.sub(&right)
}

/// `P_n(a) h`.
pub fn apply_p<T: Real>(spec: &CommutatorSpec<T>, h: &RealField<T>) -> Result<RealField<T>> {
    spec.check_orders()?;
    h.same_grid(&spec.weight)?;
    let mu = spec.mu();
    let mut acc = RealField::zeros(h.grid());
    let mut sign = T::one();
    let mut quarter = T::one();
    for j in 0..=spec.n {
        let order = mu - T::of_usize(j);
        let inner = fractional_derivative(h, order)?;
        let weighted = spec.odd_derivative(j).mul(&inner)?;
        let term = fractional_derivative(&weighted, order)?;
        let factor = spec.order * coefficient(spec.order, j) * sign * quarter;
        acc = acc.add(&term.scale(factor))?;
        sign = -sign;
        quarter /= lit(4.0);
    }
    Ok(acc)
}

/// `R_n(a) h = -[H D^a, f] h - 1/2 (P_n h - H P_n H h)`.
pub fn apply_r<T: Real>(spec: &CommutatorSpec<T>, h: &RealField<T>) -> Result<RealField<T>> {
    let comm = commutator(spec, h)?;
    let p = apply_p(spec, h)?;
    let hph = hilbert(&apply_p(spec, &hilbert(h))?);
    let sym = p.sub(&hph)?.scale(lit(0.5));
    comm.add(&sym).map(|s| s.scale(-T::one()))
}

/// `D^sigma R_n(a) D^sigma h`.
pub fn apply_r_weighted<T: Real>(spec: &CommutatorSpec<T>, h: &RealField<T>) -> Result<RealField<T>> {
    let inner = fractional_derivative(h, spec.sigma)?;
    let r = apply_r(spec, &inner)?;
    fractional_derivative(&r, spec.sigma)
}

/// `(2 pi)^{-1/2} || (D^s f)^ ||_1` in the unitary angular convention, for
/// `f = phi_beta(x / lambda)`.
///
/// With `xi = lambda k / (2 pi)` this equals
/// `(2 pi)^{s-1} lambda^{-s} int |xi|^{s-1} phi_beta'^(xi) d xi`, the last
/// factor taken in the `e^{-2 pi i x xi}` convention of [`crate::weights`].
pub fn weight_remainder_bound<T: Real>(weight: &WeightSpec<T>, s: T) -> Result<T> {
    if s < T::one() {
        return Err(Error::param("s", "order must be at least 1"));
    }
    let moment = transform_moment(weight.alpha, s - T::one())?;
    Ok(T::TAU().powf(s - T::one()) * weight.scale.powf(-s) * moment)
}

/// `(2 pi)^{-1/2} || (D^s f)^ ||_1` for a weight given by the modulus of its
/// (non-unitary, angular) Fourier transform `|F f(k)|`, assumed even in `k`:
/// `(1 / 2 pi) int_R |k|^s |F f(k)| dk`.
pub fn remainder_bound_from_transform<T: Real>(s: T, transform_abs: impl Fn(T) -> T) -> Result<T> {
    let integrand = |k: T| {
        if k <= T::zero() {
            T::zero()
        } else {
            k.powf(s) * transform_abs(k)
        }
    };
    let tol = Tolerance::new(0.0, 1e-11);
    let head = integrate(integrand, T::zero(), T::one(), tol)?;
    let tail = integrate_to_infinity(integrand, T::one(), tol)?;
    Ok((head.value + tail.value) / T::PI())
}

/// The three pieces of the weighted-L2 dispersive term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct A3Decomposition<T> {
    /// `K/2 <u, R_0(alpha+2) u>`
    pub a31: T,
    /// `(alpha+2) K / (4 lambda) int (D^{(alpha+1)/2} u)^2 phi'(x/lambda)`
    pub a32: T,
    /// same with `H D^{(alpha+1)/2} u`
    pub a33: T,
    /// `-K/2 <u, [H D^{alpha+2}, phi(x/lambda)] u>`, evaluated directly
    pub direct: T,
    pub closure_residual: T,
}

impl<T: Real> A3Decomposition<T> {
    pub fn total(&self) -> T {
        self.a31 + self.a32 + self.a33
    }
}

/// Splits `-K/2 <u, [H D^{alpha+2}, phi_alpha(x/lambda)] u>` through the
/// `n = 0` expansion and checks that the pieces add up to the directly
/// evaluated quadratic form within `1e-8` relative.
pub fn step2_a3_decomposition<T: Real>(
    u: &RealField<T>,
    weight: &WeightSpec<T>,
    alpha: T,
    prefactor: T,
) -> Result<A3Decomposition<T>> {
    let spec = CommutatorSpec::for_weight(alpha + lit(2.0), 0, T::zero(), u.grid(), weight)?;
    decompose_with_spec(u, &spec, weight, alpha, prefactor)
}

pub(crate) fn decompose_with_spec<T: Real>(
    u: &RealField<T>,
    spec: &CommutatorSpec<T>,
    weight: &WeightSpec<T>,
    alpha: T,
    prefactor: T,
) -> Result<A3Decomposition<T>> {
    let half = lit::<T>(0.5);
    let r = apply_r(spec, u)?;
    let a31 = half * prefactor * u.inner(&r)?;

    let mu = (alpha + T::one()) / lit(2.0);
    let du = fractional_derivative(u, mu)?;
    let hdu = hilbert(&du);
    let density = weight.sample_density(u.grid());
    let coeff = (alpha + lit(2.0)) * prefactor / (lit::<T>(4.0) * weight.scale);
    let a32 = coeff * du.mul(&du)?.inner(&density)?;
    let a33 = coeff * hdu.mul(&hdu)?.inner(&density)?;

    let direct = -half * prefactor * u.inner(&commutator(spec, u)?)?;
    let closure_residual = (a31 + a32 + a33 - direct).abs();
    let scale = a31.abs().max(a32.abs()).max(a33.abs()).max(direct.abs());
    if closure_residual > lit::<T>(1e-8) * scale {
        return Err(Error::ClosureFailure {
            residual: closure_residual.to_f64_lossy(),
            scale: scale.to_f64_lossy(),
        });
    }
    Ok(A3Decomposition {
        a31,
        a32,
        a33,
        direct,
        closure_residual,
    })
}

/// Pointwise Fourier symbol of `R_0(a)` acting on `e^{i eta x}` for the weight
/// `e^{i zeta x}`; its modulus is bounded by `|zeta|^a` for `1 <= a <= 3`.
pub fn r0_symbol<T: Real>(order: T, xi: T, eta: T) -> Complex<T> {
    let s = |k: T| Complex::new(T::zero(), -crate::spectral::signum0(k) * crate::spectral::abs_pow(k, order));
    let zeta = xi - eta;
    let mu = (order - T::one()) / lit(2.0);
    let same = crate::spectral::signum0(xi) * crate::spectral::signum0(eta);
    let p = Complex::new(T::zero(), order * zeta * (xi.abs() * eta.abs()).powf(mu)) * (T::one() + same);
    -(s(xi) - s(eta)) - p.scale(lit(0.5))
}

/// Multiplier helper used by tests: `D^s` applied through an explicit symbol.
pub fn apply_symbol<T: Real>(h: &RealField<T>, symbol: impl Fn(T) -> Complex<T>) -> RealField<T> {
    apply_multiplier(h, symbol, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::weights::phi_total_mass;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn coefficient_examples() {
        assert_eq!(coefficient(2.5f64, 0), 1.0);
        let a = 2.3f64;
        assert!((coefficient(a, 1) - (a * a - 1.0) / 6.0).abs() < 1e-15);
        assert_eq!(coefficient(1.0f64, 1), 0.0);
        // j = 2: (a^2-1)(a^2-9)/120
        assert!((coefficient(a, 2) - (a * a - 1.0) * (a * a - 9.0) / 120.0).abs() < 1e-15);
    }

    fn bump(grid: &Grid<f64>, width: f64) -> RealField<f64> {
        RealField::from_fn(grid, |x| (-(x / width).powi(2)).exp())
    }

    #[test]
    fn admissibility_is_enforced() {
        let g = Grid::new(64, 40.0).unwrap();
        let f = bump(&g, 3.0);
        assert!(CommutatorSpec::periodic(2.5, 0, 0.0, f.clone()).is_ok());
        assert!(CommutatorSpec::periodic(3.5, 0, 0.0, f.clone()).is_err());
        assert!(CommutatorSpec::periodic(0.5, 0, 0.0, f.clone()).is_err());
        assert!(CommutatorSpec::periodic(2.5, 0, 0.5, f.clone()).is_err());
        assert!(CommutatorSpec::periodic(3.5, 1, 0.0, f).is_ok());
    }

    #[test]
    fn negative_inner_orders_are_rejected() {
        let g = Grid::new(64, 40.0).unwrap();
        // order 1, sigma 1, n = 1 is admissible but mu = 0 < n
        let f = bump(&g, 3.0);
        let spec = CommutatorSpec::periodic(1.0, 0, 1.0, f.clone()).unwrap();
        let h = bump(&g, 2.0);
        assert!(apply_p(&spec, &h).is_ok());
        let spec = CommutatorSpec::periodic(1.0, 1, 1.0, f).unwrap();
        assert!(apply_p(&spec, &h).is_err());
    }

    #[test]
    fn constant_weight_gives_zero() {
        let g = Grid::new(64, 40.0).unwrap();
        let f = RealField::constant(&g, 1.7);
        let spec = CommutatorSpec::periodic(2.5, 0, 0.0, f).unwrap();
        let h = bump(&g, 2.0);
        assert!(apply_p(&spec, &h).unwrap().max_abs() < 1e-14);
        assert!(apply_r(&spec, &h).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn r_matches_dense_oracle() {
        let n = 64;
        let g = Grid::new(n, 30.0).unwrap();
        let f = RealField::from_fn(&g, |x: f64| (-(x / 3.0).powi(2)).exp());
        let spec = CommutatorSpec::periodic(2.5, 0, 0.0, f.clone()).unwrap();
        let dense = oracle::remainder_matrix(&g, f.samples(), spec.weight_derivative().samples(), 2.5, 0);
        for m in [1i64, 3, 7] {
            let h = RealField::from_fn(&g, |x| (std::f64::consts::TAU * m as f64 * x / 30.0).cos());
            let fast = apply_r(&spec, &h).unwrap();
            let slow = oracle::apply(&dense, h.samples());
            let err = fast
                .samples()
                .iter()
                .zip(&slow)
                .fold(0.0f64, |a, (x, y)| a.max((x - y).abs()));
            assert!(err < 1e-10, "mode {m}: {err}");
        }
    }

    #[test]
    fn p0_is_symmetric() {
        let g = Grid::new(128, 40.0).unwrap();
        let f = RealField::from_fn(&g, |x: f64| (x / 4.0).tanh() + 0.3 * (-(x / 2.0).powi(2)).exp());
        let fp = RealField::from_fn(&g, |x: f64| {
            (1.0 - (x / 4.0).tanh().powi(2)) / 4.0 - 0.3 * x / 2.0 * (-(x / 2.0).powi(2)).exp()
        });
        let spec = CommutatorSpec::new(2.6, 0, 0.0, f, fp).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let h1 = localized_random(&g, &mut rng);
            let h2 = localized_random(&g, &mut rng);
            let a = apply_p(&spec, &h1).unwrap().inner(&h2).unwrap();
            let b = h1.inner(&apply_p(&spec, &h2).unwrap()).unwrap();
            assert!((a - b).abs() <= 1e-10 * a.abs().max(b.abs()));
        }
    }

    fn localized_random(g: &Grid<f64>, rng: &mut ChaCha8Rng) -> RealField<f64> {
        let c: f64 = rng.gen_range(-3.0..3.0);
        let k: f64 = rng.gen_range(0.0..2.0);
        let ph: f64 = rng.gen_range(0.0..6.0);
        RealField::from_fn(g, |x| (-((x - c) / 2.0).powi(2)).exp() * (k * x + ph).cos())
    }

    #[test]
    fn r_is_linear_and_reassembles_commutator() {
        let g = Grid::new(256, 80.0).unwrap();
        let w = WeightSpec::new(0.5, 3.0).unwrap();
        let spec = CommutatorSpec::for_weight(2.5, 0, 0.0, &g, &w).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h1 = localized_random(&g, &mut rng);
        let h2 = localized_random(&g, &mut rng);
        let combo = h1.scale(0.7).add(&h2.scale(-1.3)).unwrap();
        let lhs = apply_r(&spec, &combo).unwrap();
        let rhs = apply_r(&spec, &h1).unwrap().scale(0.7).add(&apply_r(&spec, &h2).unwrap().scale(-1.3)).unwrap();
        assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-12 * lhs.max_abs().max(1.0));

        // -[HD^a, f] = R + 1/2 (P - HPH)
        let r = apply_r(&spec, &h1).unwrap();
        let p = apply_p(&spec, &h1).unwrap();
        let hph = hilbert(&apply_p(&spec, &hilbert(&h1)).unwrap());
        let rebuilt = r.add(&p.sub(&hph).unwrap().scale(0.5)).unwrap();
        let direct = commutator(&spec, &h1).unwrap().scale(-1.0);
        assert!(rebuilt.max_abs_diff(&direct).unwrap() <= 1e-10 * direct.max_abs());
    }

    #[test]
    fn r0_symbol_is_bounded_by_weight_frequency() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..2000 {
            let a: f64 = rng.gen_range(1.0..3.0);
            let xi: f64 = rng.gen_range(-10.0..10.0);
            let eta: f64 = rng.gen_range(-10.0..10.0);
            let bound = (xi - eta).abs().powf(a);
            assert!(r0_symbol(a, xi, eta).norm() <= bound * (1.0 + 1e-12) + 1e-12);
        }
    }

    #[test]
    fn decomposition_of_zero_field() {
        let g = Grid::new(256, 200.0).unwrap();
        let w = WeightSpec::new(0.5, 4.0).unwrap();
        let d = step2_a3_decomposition(&RealField::zeros(&g), &w, 0.5, 0.3).unwrap();
        assert_eq!((d.a31, d.a32, d.a33), (0.0, 0.0, 0.0));
    }

    #[test]
    fn decomposition_closes_and_is_coercive() {
        let g = Grid::new(256, 200.0).unwrap();
        let w = WeightSpec::new(0.5, 4.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let u = localized_random(&g, &mut rng);
        let d = step2_a3_decomposition(&u, &w, 0.5, 0.3).unwrap();
        assert!(d.a32 >= 0.0 && d.a33 >= 0.0);
        assert!(d.closure_residual <= 1e-8 * d.direct.abs().max(d.a32));
    }

    #[test]
    fn weight_bound_against_closed_form() {
        // unit scale, s = alpha + 2: (2 pi)^{alpha+1} Gamma((2 alpha+3)/2) / pi^{(2 alpha+3)/2}
        let w = WeightSpec::new(1.0, 1.0).unwrap();
        let b = weight_remainder_bound(&w, 3.0).unwrap();
        let expected = std::f64::consts::TAU.powi(2) * 3.0 / (4.0 * std::f64::consts::PI.powi(2));
        assert!(((b - expected) / expected).abs() < 1e-6);
        // dilation: lambda^{-s}
        let w2 = WeightSpec::new(1.0, 2.0).unwrap();
        let b2 = weight_remainder_bound(&w2, 3.0).unwrap();
        assert!((b2 * 8.0 - b).abs() < 1e-9 * b);
        assert!(phi_total_mass(1.0) > 0.0);
    }

    #[test]
    fn gaussian_bound_closed_form() {
        // f = e^{-x^2/(2 s^2)}: (2pi)^{-1/2} int |k|^a s e^{-s^2 k^2/2} dk
        //   = (2pi)^{-1/2} s (2/s^2)^{(a+1)/2} Gamma((a+1)/2)
        let sw = 1.5f64;
        let a = 2.5f64;
        let b = remainder_bound_from_transform(a, |k| {
            sw * std::f64::consts::TAU.sqrt() * (-(sw * k).powi(2) / 2.0).exp()
        })
        .unwrap();
        let expected = sw * (2.0 / (sw * sw)).powf((a + 1.0) / 2.0)
            * statrs::function::gamma::gamma((a + 1.0) / 2.0)
            / std::f64::consts::TAU.sqrt();
        assert!(((b - expected) / expected).abs() < 1e-9);
    }
}
