//! Gamma function via the Lanczos approximation (g = 7, 9 terms).

use crate::scalar::{lit, Real};

const LANCZOS_G: f64 = 7.0;
// Published coefficients, kept digit for digit.
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `Gamma(x)` for real `x`, using reflection for `x < 1/2`.
pub fn gamma<T: Real>(x: T) -> T {
    if x < lit(0.5) {
        let pi = T::PI();
        return pi / ((pi * x).sin() * gamma(T::one() - x));
    }
    let x = x - T::one();
    let mut acc = lit::<T>(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += lit::<T>(c) / (x + T::of_usize(i));
    }
    let t = x + lit(LANCZOS_G + 0.5);
    lit::<T>((2.0 * std::f64::consts::PI).sqrt()) * t.powf(x + lit(0.5)) * (-t).exp() * acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        let pi = std::f64::consts::PI;
        assert!((gamma(1.0f64) - 1.0).abs() < 1e-14);
        assert!((gamma(5.0f64) - 24.0).abs() < 1e-12);
        assert!((gamma(0.5f64) - pi.sqrt()).abs() < 1e-14);
        assert!((gamma(2.5f64) - 0.75 * pi.sqrt()).abs() < 1e-14);
        assert!((gamma(-0.5f64) + 2.0 * pi.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn matches_statrs_on_a_sweep() {
        for i in 1..200 {
            let x = 0.05 * i as f64;
            let ours = gamma(x);
            let reference = statrs::function::gamma::gamma(x);
            assert!(((ours - reference) / reference).abs() < 1e-13, "x={x}");
        }
    }
}
