//! Gagliardo-Nirenberg, fractional Leibniz and weighted cubic ratios. The
//! constants are not known in closed form, so these return measured ratios.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};
use crate::spectral::{fractional_derivative, Grid, RealField};
use crate::weights::phi_prime;

/// `theta = (p - 2) / ((alpha + 1) p)`.
pub fn gn_exponent<T: Real>(p: T, alpha: T) -> T {
    (p - lit(2.0)) / ((alpha + T::one()) * p)
}

/// `||u||_p / (||u||_2^{1-theta} ||D^{(1+alpha)/2} u||_2^theta)`.
pub fn gn_check<T: Real>(u: &RealField<T>, p: T, alpha: T) -> Result<T> {
    if !(p >= lit(2.0) && p <= lit(16.0)) {
        return Err(Error::param("p", format!("must lie in [2, 16], got {p}")));
    }
    let l2 = u.norm_l2();
    if l2.is_zero() {
        return Err(Error::Degenerate("zero field".into()));
    }
    let theta = gn_exponent(p, alpha);
    let d = fractional_derivative(u, (alpha + T::one()) / lit(2.0))?.norm_l2();
    if theta > T::zero() && d.is_zero() {
        return Err(Error::Degenerate("derivative norm vanishes".into()));
    }
    let denom = l2.powf(T::one() - theta) * if theta.is_zero() { T::one() } else { d.powf(theta) };
    Ok(u.norm_lp(p) / denom)
}

/// `||D^s(f g) - g D^s f||_2 / (||f||_4 ||D^s g||_4)` with `s = (alpha + 1)/2`.
pub fn leibniz_check<T: Real>(f: &RealField<T>, g: &RealField<T>, alpha: T) -> Result<T> {
    let s = (alpha + T::one()) / lit(2.0);
    let dg = fractional_derivative(g, s)?;
    let denom = f.norm_lp(lit(4.0)) * dg.norm_lp(lit(4.0));
    if !(denom > T::zero()) {
        return Err(Error::Degenerate("zero denominator in Leibniz ratio".into()));
    }
    let fg = f.mul(g)?;
    let num = fractional_derivative(&fg, s)?.sub(&g.mul(&fractional_derivative(f, s)?)?)?;
    Ok(num.norm_l2() / denom)
}

/// `(L sum (1 + k^2)^s |c_k|^2)^{1/2}`.
pub fn sobolev_norm<T: Real>(u: &RealField<T>, s: T) -> T {
    let grid = u.grid();
    let c = u.to_spectral();
    let mut acc = T::zero();
    for (i, v) in c.coefficients().iter().enumerate() {
        let k = grid.wavenumber(i);
        acc += (T::one() + k * k).powf(s) * v.norm_sqr();
    }
    (acc * grid.length()).sqrt()
}

/// `sup |u| <= C ||u||_{H^s}` on the grid, `C = (sum (1 + k^2)^{-s} / L)^{1/2}`.
pub fn embedding_constant<T: Real>(grid: &Grid<T>, s: T) -> T {
    let sum = grid
        .wavenumbers()
        .into_iter()
        .fold(T::zero(), |acc, k| acc + (T::one() + k * k).powf(-s));
    (sum / grid.length()).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicWeightCheck<T> {
    /// `int |u(x - shift)|^3 phi_alpha'(x) dx`
    pub lhs: T,
    /// `lhs / int u(x - shift)^2 phi_alpha'(x) dx`
    pub ratio: T,
    /// `embedding_constant * h_half_norm`, an upper bound for `sup |u|`.
    pub bound: T,
    pub bounded: bool,
}

/// Weighted cubic ratio at one shift. `h_half_norm` is the prescribed
/// `H^{(alpha+1)/2}` norm of the ensemble the field belongs to.
pub fn cubic_weight_check<T: Real>(u: &RealField<T>, shift: T, alpha: T, h_half_norm: T) -> Result<CubicWeightCheck<T>> {
    if u.is_zero() {
        return Err(Error::Degenerate("zero field".into()));
    }
    let moved = u.translate(shift);
    let weight = RealField::from_fn(u.grid(), |x| phi_prime(x, alpha));
    let lhs = moved.map(|v| v.abs().powi(3)).inner(&weight)?;
    let quad = moved.map(|v| v * v).inner(&weight)?;
    if !(quad > T::zero()) {
        return Err(Error::Degenerate("weighted L2 mass vanishes".into()));
    }
    let ratio = lhs / quad;
    let bound = embedding_constant(u.grid(), (alpha + T::one()) / lit(2.0)) * h_half_norm;
    Ok(CubicWeightCheck {
        lhs,
        ratio,
        bound,
        bounded: ratio <= bound,
    })
}
