//! The algebraic weight family `phi_alpha' (x) = <x>^{-(alpha+2)}`, its
//! primitive, its Fourier transform and the window law `lambda(t)`.
//!
//! This module uses the Fourier convention `f^(xi) = int f(x) e^{-2 pi i x xi} dx`.
//! The solver grid uses angular wavenumbers `k = 2 pi xi`; conversions happen
//! where the two meet (see [`crate::commutators::weight_remainder_bound`]).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_to_infinity, Tolerance};
use crate::scalar::{lit, Real};
use crate::special::gamma;
use crate::spectral::{Grid, RealField};

fn check_alpha<T: Real>(alpha: T) -> Result<()> {
    if !(alpha >= T::zero() && alpha <= T::one()) {
        return Err(Error::param("alpha", format!("must lie in [0, 1], got {alpha}")));
    }
    Ok(())
}

/// Japanese bracket `<x> = (1 + x^2)^{1/2}`.
#[inline]
pub fn bracket<T: Real>(x: T) -> T {
    (T::one() + x * x).sqrt()
}

/// `phi_alpha'(x) = (1 + x^2)^{-(alpha+2)/2}`.
#[inline]
pub fn phi_prime<T: Real>(x: T, alpha: T) -> T {
    (T::one() + x * x).powf(-(alpha + lit(2.0)) / lit(2.0))
}

/// Total mass `int_R phi_alpha'`, i.e. `sup phi_alpha = phi_alpha(+inf)`.
///
/// Closed form `sqrt(pi) Gamma((alpha+1)/2) / Gamma((alpha+2)/2)` from the
/// Beta integral.
pub fn phi_total_mass<T: Real>(alpha: T) -> T {
    T::PI().sqrt() * gamma((alpha + T::one()) / lit(2.0)) / gamma((alpha + lit(2.0)) / lit(2.0))
}

fn primitive_tol() -> Tolerance {
    Tolerance::new(1e-14, 1e-13)
}

/// `phi_alpha(x) = int_{-inf}^x phi_alpha'(s) ds`.
///
/// With `s = tan(theta)` the integrand becomes `cos(theta)^alpha`; writing
/// `v = theta + pi/2` it is `sin(v)^alpha` on `[0, atan(x) + pi/2]`. For
/// `x > 0` the complement `mass - phi(-x)` is used.
pub fn phi<T: Real>(x: T, alpha: T) -> Result<T> {
    check_alpha(alpha)?;
    if x > T::zero() {
        return Ok(phi_total_mass(alpha) - phi(-x, alpha)?);
    }
    let upper = x.atan() + T::FRAC_PI_2();
    if upper <= T::zero() {
        return Ok(T::zero());
    }
    let est = integrate(|v: T| v.sin().powf(alpha), T::zero(), upper, primitive_tol())?;
    Ok(est.value)
}

/// `phi_alpha'^(xi)` through the one-dimensional integral representation
///
/// `sqrt(pi) / Gamma((alpha+2)/2) * int_0^inf e^{-s} s^{(alpha-1)/2} e^{-pi^2 xi^2 / s} ds`,
///
/// evaluated after the substitution `s = r^2`, which removes the endpoint
/// singularity: the integrand becomes `2 r^alpha e^{-r^2 - pi^2 xi^2 / r^2}`.
pub fn phi_prime_hat<T: Real>(xi: T, alpha: T) -> Result<T> {
    check_alpha(alpha)?;
    let xi = xi.abs();
    let pi = T::PI();
    let c2 = pi * pi * xi * xi;
    let integrand = |r: T| {
        if r <= T::zero() {
            return T::zero();
        }
        let e = -(r * r) - c2 / (r * r);
        lit::<T>(2.0) * r.powf(alpha) * e.exp()
    };
    // the integrand peaks near r^2 = pi |xi|
    let split = (pi * xi).sqrt().max(T::one());
    let tol = Tolerance::new(0.0, 1e-13);
    let head = integrate(integrand, T::zero(), split, tol)?;
    let tail = integrate_to_infinity(integrand, split, tol)?;
    let prefactor = pi.sqrt() / gamma((alpha + lit(2.0)) / lit(2.0));
    Ok(prefactor * (head.value + tail.value))
}

/// `int_R |xi|^p phi_alpha'^(xi) d xi` by nested quadrature.
pub fn transform_moment<T: Real>(alpha: T, p: T) -> Result<T> {
    check_alpha(alpha)?;
    if p < T::zero() {
        return Err(Error::param("p", "moment order must be nonnegative"));
    }
    let failure = std::cell::Cell::new(None);
    let integrand = |xi: T| {
        if xi <= T::zero() {
            return T::zero();
        }
        match phi_prime_hat(xi, alpha) {
            Ok(v) => xi.powf(p) * v,
            Err(e) => {
                failure.set(Some(e));
                T::zero()
            }
        }
    };
    let tol = Tolerance::new(0.0, 1e-11);
    let head = integrate(integrand, T::zero(), T::one(), tol)?;
    let tail = integrate_to_infinity(integrand, T::one(), tol)?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(lit::<T>(2.0) * (head.value + tail.value))
}

/// `int_R |xi|^{alpha+1} phi_alpha'^(xi) d xi` (unit scale).
pub fn moment_integral<T: Real>(alpha: T) -> Result<T> {
    transform_moment(alpha, alpha + T::one())
}

/// Closed form of [`moment_integral`]: `Gamma((2 alpha + 3)/2) / pi^{(2 alpha + 3)/2}`.
pub fn moment_closed_form<T: Real>(alpha: T) -> T {
    let e = (lit::<T>(2.0) * alpha + lit(3.0)) / lit(2.0);
    gamma(e) / T::PI().powf(e)
}

/// The weight `phi_alpha'(x / lambda)` together with its primitive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec<T> {
    pub alpha: T,
    pub scale: T,
}

impl<T: Real> WeightSpec<T> {
    pub fn new(alpha: T, scale: T) -> Result<Self> {
        check_alpha(alpha)?;
        if !(scale > T::zero() && scale.is_finite()) {
            return Err(Error::param("scale", format!("must be positive, got {scale}")));
        }
        Ok(Self { alpha, scale })
    }

    /// `phi_alpha'(x / lambda)`.
    pub fn density(&self, x: T) -> T {
        phi_prime(x / self.scale, self.alpha)
    }

    /// `phi_alpha(x / lambda)`.
    pub fn primitive(&self, x: T) -> Result<T> {
        phi(x / self.scale, self.alpha)
    }

    pub fn sample_density(&self, grid: &Grid<T>) -> RealField<T> {
        RealField::from_fn(grid, |x| self.density(x))
    }

    /// `d/dx phi_alpha(x / lambda) = phi_alpha'(x / lambda) / lambda`.
    pub fn sample_derivative(&self, grid: &Grid<T>) -> RealField<T> {
        RealField::from_fn(grid, |x| self.density(x) / self.scale)
    }

    pub fn sample_primitive(&self, grid: &Grid<T>) -> Result<RealField<T>> {
        let values: Result<Vec<T>> = grid
            .nodes()
            .into_par_iter()
            .map(|x| self.primitive(x))
            .collect();
        RealField::new(grid, values?)
    }
}

/// Window law `lambda(t) = c t^b / log t` with `a + b = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowLaw<T> {
    a: T,
    b: T,
    c: T,
    t_min: T,
}

impl<T: Real> WindowLaw<T> {
    /// Law with L1-growth exponent `a in [0, 1)` and amplitude `c > 0`.
    ///
    /// This constructor does not tie `a` to a dispersion exponent; use
    /// [`WindowLaw::for_alpha`] for laws that feed the decay functional.
    pub fn new(a: T, c: T) -> Result<Self> {
        if !(a >= T::zero() && a < T::one()) {
            return Err(Error::param("a", format!("must lie in [0, 1), got {a}")));
        }
        if !(c > T::zero() && c.is_finite()) {
            return Err(Error::param("c", format!("must be positive, got {c}")));
        }
        let b = T::one() - a;
        Ok(Self {
            a,
            b,
            c,
            t_min: (T::one() / b).exp(),
        })
    }

    /// Law admissible for dispersion exponent `alpha`: requires
    /// `b > (alpha + 1) / (alpha + 2)`, equivalently `a < 1 / (alpha + 2)`.
    pub fn for_alpha(a: T, c: T, alpha: T) -> Result<Self> {
        let law = Self::new(a, c)?;
        law.check_alpha(alpha)?;
        Ok(law)
    }

    pub fn check_alpha(&self, alpha: T) -> Result<()> {
        let threshold = (alpha + T::one()) / (alpha + lit(2.0));
        if self.b > threshold {
            Ok(())
        } else {
            Err(Error::param(
                "window.a",
                format!(
                    "window exponent b = 1 - a = {} must exceed (alpha+1)/(alpha+2) = {} (i.e. a < 1/(alpha+2))",
                    self.b, threshold
                ),
            ))
        }
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> T {
        self.b
    }

    pub fn c(&self) -> T {
        self.c
    }

    /// `e^{1/b}`: `lambda` is increasing from here on.
    pub fn t_min(&self) -> T {
        self.t_min
    }

    fn check_time(&self, t: T) -> Result<()> {
        if t.is_finite() && t >= self.t_min * (T::one() - lit::<T>(4.0) * T::epsilon()) {
            Ok(())
        } else {
            Err(Error::param(
                "t",
                format!("must be at least t_min = {}, got {t}", self.t_min),
            ))
        }
    }

    pub fn lambda(&self, t: T) -> Result<T> {
        self.check_time(t)?;
        Ok(self.c * t.powf(self.b) / t.ln())
    }

    /// `lambda'(t) / lambda(t) = (b log t - 1) / (t log t)`.
    pub fn lambda_log_rate(&self, t: T) -> Result<T> {
        self.check_time(t)?;
        let l = t.ln();
        Ok((self.b * l - T::one()) / (t * l))
    }

    /// `K(t) = 1 / (t^a log^2 t)`, the time prefactor of the virial functionals.
    pub fn prefactor(&self, t: T) -> Result<T> {
        self.check_time(t)?;
        let l = t.ln();
        Ok(T::one() / (t.powf(self.a) * l * l))
    }

    /// `K'(t) = -(a log t + 2) / (t^{a+1} log^3 t)`.
    pub fn prefactor_rate(&self, t: T) -> Result<T> {
        self.check_time(t)?;
        let l = t.ln();
        Ok(-(self.a * l + lit(2.0)) / (t.powf(self.a + T::one()) * l * l * l))
    }

    /// L1 growth budget `<t>^a`.
    pub fn budget(&self, t: T) -> T {
        bracket(t).powf(self.a)
    }
}

/// `lambda(t)` for `law`; errors for `t < law.t_min()`.
pub fn window_lambda<T: Real>(t: T, law: &WindowLaw<T>) -> Result<T> {
    law.lambda(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::gamma::gamma as sgamma;
    use std::f64::consts::{E, PI};

    #[test]
    fn phi_prime_examples() {
        assert_eq!(phi_prime(0.0, 0.3), 1.0);
        assert!((phi_prime(1.0f64, 0.0) - 0.5).abs() < 1e-15);
        assert!((phi_prime(1.0, 1.0) - 2f64.powf(-1.5)).abs() < 1e-15);
        assert!((phi_prime(1.0f64, 1.0) - 0.353553).abs() < 1e-6);
    }

    #[test]
    fn phi_at_bo_endpoint_is_arctan() {
        for &x in &[-50.0, -3.0, -0.5, 0.0, 0.25, 2.0, 40.0] {
            let v = phi(x, 0.0).unwrap();
            assert!((v - (f64::atan(x) + PI / 2.0)).abs() < 1e-12, "x={x}");
        }
        assert!((phi(1e12, 0.0).unwrap() - PI).abs() < 1e-10);
    }

    #[test]
    fn phi_at_origin_is_half_mass() {
        for i in 1..=9 {
            let alpha = i as f64 / 10.0;
            // Beta-integral oracle with an independent Gamma implementation.
            let half = PI.sqrt() * sgamma((alpha + 1.0) / 2.0) / (2.0 * sgamma((alpha + 2.0) / 2.0));
            assert!((phi(0.0, alpha).unwrap() - half).abs() < 1e-10);
        }
    }

    #[test]
    fn phi_is_monotone_and_bounded_by_mass() {
        let alpha = 0.6;
        let mass = phi_total_mass(alpha);
        let mut prev = 0.0;
        for i in -40..=40 {
            let v = phi(i as f64 * 0.5, alpha).unwrap();
            assert!(v >= prev && v <= mass);
            prev = v;
        }
        // the printed bound 2/(alpha+3) is far below the true supremum
        assert!(mass > 2.0 / (alpha + 3.0));
    }

    #[test]
    fn transform_at_zero_is_total_mass() {
        for i in 1..=9 {
            let alpha = i as f64 / 10.0;
            let oracle = PI.sqrt() * sgamma((alpha + 1.0) / 2.0) / sgamma((alpha + 2.0) / 2.0);
            let v = phi_prime_hat(0.0, alpha).unwrap();
            assert!(((v - oracle) / oracle).abs() < 1e-8);
        }
    }

    #[test]
    fn transform_matches_lorentzian_at_alpha_zero() {
        for i in 0..=50 {
            let xi = i as f64 * 0.1;
            let exact = PI * (-2.0 * PI * xi).exp();
            let v = phi_prime_hat(xi, 0.0).unwrap();
            assert!(((v - exact) / exact).abs() < 1e-6, "xi={xi}");
        }
    }

    #[test]
    fn transform_is_even() {
        for &xi in &[0.01, 0.3, 1.7] {
            assert_eq!(phi_prime_hat(xi, 0.4).unwrap(), phi_prime_hat(-xi, 0.4).unwrap());
        }
    }

    #[test]
    fn moment_endpoint_values() {
        let m1 = moment_integral(1.0).unwrap();
        assert!((m1 - 3.0 / (4.0 * PI * PI)).abs() / m1 < 1e-6);
        // 2 pi int_0^inf xi e^{-2 pi xi} d xi = 1/(2 pi)
        let m0 = moment_integral(0.0).unwrap();
        assert!((m0 - 1.0 / (2.0 * PI)).abs() * 2.0 * PI < 1e-6);
    }

    #[test]
    fn window_law_examples() {
        let law = WindowLaw::new(0.0, 1.0).unwrap();
        assert!((window_lambda(E, &law).unwrap() - E).abs() < 1e-14);
        let half = WindowLaw::new(0.5, 1.0).unwrap();
        assert!((window_lambda(E * E, &half).unwrap() - E / 2.0).abs() < 1e-14);
        assert!(window_lambda(2.0, &law).is_err());
    }

    #[test]
    fn window_law_rejects_slow_windows() {
        // b must exceed (alpha+1)/(alpha+2)
        assert!(WindowLaw::for_alpha(0.4, 1.0, 0.5).is_err());
        assert!(WindowLaw::for_alpha(0.39, 1.0, 0.5).is_ok());
        assert!(WindowLaw::for_alpha(0.5, 1.0, 0.0).is_err());
        assert!(WindowLaw::<f64>::new(-0.1, 1.0).is_err());
        assert!(WindowLaw::<f64>::new(0.1, 0.0).is_err());
    }

    #[test]
    fn prefactor_rate_matches_finite_difference() {
        let law = WindowLaw::<f64>::new(0.2, 1.3).unwrap();
        let t = 7.5;
        let h = 1e-4;
        let fd = (law.prefactor(t + h).unwrap() - law.prefactor(t - h).unwrap()) / (2.0 * h);
        assert!((fd - law.prefactor_rate(t).unwrap()).abs() < 1e-9);
        let fd = (law.lambda(t + h).unwrap().ln() - law.lambda(t - h).unwrap().ln()) / (2.0 * h);
        assert!((fd - law.lambda_log_rate(t).unwrap()).abs() < 1e-9);
    }
}
