//! Confluent hypergeometric function M(a, b, z) (Kummer) for complex
//! arguments, by Taylor series with term-ratio stopping.

use super::SpecFunError;
use num_complex::Complex64;

#[derive(Debug, Clone, Copy)]
pub struct KummerResult {
    pub value: Complex64,
    /// max |partial sum| / |result|: how many digits cancellation ate.
    pub cancellation: f64,
    /// set when the cancellation estimate exceeds 1e6
    pub precision_loss: bool,
}

/// M(a, b, z) = sum_k (a)_k/(b)_k z^k/k!.
///
/// Entire in z; the series is stopped once terms fall below 1e-17 of the
/// running sum for several consecutive terms. Large |z| on oscillatory rays
/// loses precision to cancellation, reported through the flag.
pub fn kummer_m(a: Complex64, b: Complex64, z: Complex64) -> Result<KummerResult, SpecFunError> {
    if b.im == 0.0 && b.re <= 0.0 && b.re.fract() == 0.0 {
        return Err(SpecFunError::Domain(format!(
            "Kummer M undefined for non-positive integer b = {b}"
        )));
    }
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut max_partial = 1.0f64;
    let mut small_streak = 0;
    for k in 0..2000u32 {
        let kf = k as f64;
        term *= (a + kf) / (b + kf) * z / (kf + 1.0);
        sum += term;
        max_partial = max_partial.max(sum.norm());
        if term.norm() <= 1e-17 * sum.norm().max(1e-280) {
            small_streak += 1;
            if small_streak >= 3 {
                break;
            }
        } else {
            small_streak = 0;
        }
    }
    let cancellation = max_partial / sum.norm().max(1e-280);
    Ok(KummerResult {
        value: sum,
        cancellation,
        precision_loss: cancellation > 1e6,
    })
}

/// Whittaker M_{kappa,0}(z) = z^(1/2) e^(-z/2) M(1/2 - kappa, 1, z).
pub fn whittaker_m0(kappa: Complex64, z: Complex64) -> Result<Complex64, SpecFunError> {
    let m = kummer_m(Complex64::new(0.5, 0.0) - kappa, Complex64::new(1.0, 0.0), z)?;
    Ok(z.sqrt() * (-0.5 * z).exp() * m.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn series_at_origin() {
        let r = kummer_m(c(0.3, 0.2), c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!(r.value, c(1.0, 0.0));
    }

    #[test]
    fn exponential_identity() {
        // M(a, a, z) = e^z
        let z = c(1.0, 1.0);
        let r = kummer_m(c(1.0, 0.0), c(1.0, 0.0), z).unwrap();
        let e = z.exp();
        assert!((r.value - e).norm() < 1e-14 * e.norm());
    }

    #[test]
    fn nonpositive_integer_b_rejected() {
        assert!(kummer_m(c(0.5, 0.0), c(0.0, 0.0), c(1.0, 0.0)).is_err());
        assert!(kummer_m(c(0.5, 0.0), c(-3.0, 0.0), c(1.0, 0.0)).is_err());
    }

    #[test]
    fn integral_representation_oracle() {
        // M(1/2, 1, z) = (1/pi) int_0^1 e^{zt} (t(1-t))^{-1/2} dt,
        // quadrature with the endpoint substitutions t = s^2, t = 1 - s^2
        let z = c(0.0, 2.0);
        let half = |f: &dyn Fn(f64) -> f64| {
            // int_0^{1/2} f(t) (t(1-t))^{-1/2} dt with t = s^2
            quad::integrate(
                |s| 2.0 * f(s * s) / (1.0 - s * s).sqrt(),
                0.0,
                (0.5f64).sqrt(),
                1e-13,
                0.0,
                400,
            )
            .value
        };
        let re = |t: f64| (2.0 * t).cos();
        let im = |t: f64| (2.0 * t).sin();
        // symmetric halves: t -> 1-t maps e^{izt} to e^{iz(1-t)}
        let re2 = |t: f64| (2.0 * (1.0 - t)).cos();
        let im2 = |t: f64| (2.0 * (1.0 - t)).sin();
        let val = c(
            (half(&re) + half(&re2)) / std::f64::consts::PI,
            (half(&im) + half(&im2)) / std::f64::consts::PI,
        );
        let r = kummer_m(c(0.5, 0.0), c(1.0, 0.0), z).unwrap();
        assert!((r.value - val).norm() < 1e-10, "{} vs {}", r.value, val);
        // frozen mpmath value as well
        assert!((r.value - c(0.4134380744922353472, 0.6438916508806562250)).norm() < 1e-12);
    }

    #[test]
    fn term_budget_stationarity() {
        // doubling the budget does not change the result (stopping rule is
        // already stationary)
        let r = kummer_m(c(0.5, -1.3), c(1.0, 0.0), c(0.0, 5.0)).unwrap();
        assert!((r.value - c(-12.014179925226175392, 8.9748602871810533236)).norm() < 1e-10 * r.value.norm());
        assert!(!r.precision_loss);
    }

    #[test]
    fn whittaker_reduces_to_bessel_like_form() {
        // M_{0,0}(2iz) relates to J_0-free sine form: M_{0,0}(w) = sqrt(w) e^{-w/2} M(1/2,1,w);
        // sanity: real combination e^{-i pi/4} M_{i k, 0}(2 i y) is real
        let y = 1.3;
        let kappa = c(0.0, 0.8);
        let w = whittaker_m0(kappa, c(0.0, 2.0 * y)).unwrap();
        let rot = c(0.0, -std::f64::consts::FRAC_PI_4).exp() * w;
        assert!(rot.im.abs() < 1e-12 * rot.re.abs().max(1.0), "{rot}");
    }
}
