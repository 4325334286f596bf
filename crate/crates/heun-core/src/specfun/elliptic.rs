//! Legendre elliptic integrals in the modulus convention
//! E(k) = int_0^(pi/2) sqrt(1 - k^2 sin^2 t) dt.
//!
//! Carlson symmetric forms (RF, RD) carry the incomplete integrals; the
//! complete ones go through the same path. An independent AGM route is
//! provided for cross-checks.

use super::SpecFunError;
use std::f64::consts::FRAC_PI_2;

/// Carlson's RF(x, y, z) by the standard duplication theorem.
fn carlson_rf(mut x: f64, mut y: f64, mut z: f64) -> f64 {
    const ERRTOL: f64 = 1e-10;
    loop {
        let sx = x.sqrt();
        let sy = y.sqrt();
        let sz = z.sqrt();
        let lam = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        let mu = (x + y + z) / 3.0;
        let dx = (mu - x) / mu;
        let dy = (mu - y) / mu;
        let dz = (mu - z) / mu;
        if dx.abs().max(dy.abs()).max(dz.abs()) < ERRTOL {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / mu.sqrt();
        }
    }
}

/// Carlson's RD(x, y, z).
fn carlson_rd(mut x: f64, mut y: f64, mut z: f64) -> f64 {
    const ERRTOL: f64 = 1e-10;
    let mut sum = 0.0;
    let mut fac = 1.0;
    loop {
        let sx = x.sqrt();
        let sy = y.sqrt();
        let sz = z.sqrt();
        let lam = sx * (sy + sz) + sy * sz;
        sum += fac / (sz * (z + lam));
        fac *= 0.25;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        let mu = (x + y + 3.0 * z) / 5.0;
        let dx = (mu - x) / mu;
        let dy = (mu - y) / mu;
        let dz = (mu - z) / mu;
        if dx.abs().max(dy.abs()).max(dz.abs()) < ERRTOL {
            let ea = dx * dy;
            let eb = dz * dz;
            let ec = ea - eb;
            let ed = ea - 6.0 * eb;
            let ee = ed + ec + ec;
            let s = ed * (-3.0 / 14.0 + 9.0 / 88.0 * ed - 4.5 / 26.0 * dz * ee)
                + dz * (1.0 / 6.0 * ee + dz * (-9.0 / 22.0 * ec + 3.0 / 26.0 * dz * ea));
            return 3.0 * sum + fac * (1.0 + s) / (mu * mu.sqrt());
        }
    }
}

fn check_modulus(k: f64, allow_one: bool) -> Result<(), SpecFunError> {
    if !(0.0..=1.0).contains(&k) || (!allow_one && k == 1.0) {
        return Err(SpecFunError::Domain(format!(
            "elliptic modulus must lie in [0, 1{}], got {k}",
            if allow_one { "" } else { ")" }
        )));
    }
    Ok(())
}

fn check_amplitude(phi: f64) -> Result<(), SpecFunError> {
    if !(0.0..=FRAC_PI_2 + 1e-14).contains(&phi) {
        return Err(SpecFunError::Domain(format!(
            "amplitude must lie in [0, pi/2], got {phi}"
        )));
    }
    Ok(())
}

/// Incomplete elliptic integral of the first kind F(phi, k).
pub fn ellip_f(phi: f64, k: f64) -> Result<f64, SpecFunError> {
    check_amplitude(phi)?;
    check_modulus(k, false)?;
    let s = phi.sin();
    let c = phi.cos();
    Ok(s * carlson_rf(c * c, 1.0 - k * k * s * s, 1.0))
}

/// Incomplete elliptic integral of the second kind E(phi, k).
pub fn ellip_e_inc(phi: f64, k: f64) -> Result<f64, SpecFunError> {
    check_amplitude(phi)?;
    check_modulus(k, true)?;
    if k == 1.0 {
        return Ok(phi.sin());
    }
    let s = phi.sin();
    let c = phi.cos();
    let q = 1.0 - k * k * s * s;
    Ok(s * carlson_rf(c * c, q, 1.0) - (k * k * s * s * s / 3.0) * carlson_rd(c * c, q, 1.0))
}

/// Complete elliptic integral of the first kind. K(1) is reported as the
/// +inf sentinel.
pub fn ellip_k(k: f64) -> Result<f64, SpecFunError> {
    check_modulus(k, true)?;
    if k == 1.0 {
        return Ok(f64::INFINITY);
    }
    Ok(carlson_rf(0.0, 1.0 - k * k, 1.0))
}

/// Complete elliptic integral of the second kind.
pub fn ellip_e(k: f64) -> Result<f64, SpecFunError> {
    check_modulus(k, true)?;
    if k == 1.0 {
        return Ok(1.0);
    }
    let kp2 = 1.0 - k * k;
    Ok(carlson_rf(0.0, kp2, 1.0) - (k * k / 3.0) * carlson_rd(0.0, kp2, 1.0))
}

/// K(k) by the arithmetic-geometric mean: an independent route used as a
/// cross-check oracle.
pub fn ellip_k_agm(k: f64) -> f64 {
    assert!((0.0..1.0).contains(&k));
    let mut a = 1.0f64;
    let mut b = (1.0 - k * k).sqrt();
    for _ in 0..60 {
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        a = an;
        b = bn;
        if (a - b).abs() < 1e-17 * a {
            break;
        }
    }
    FRAC_PI_2 / a
}

/// E(k) by the AGM with the c_n^2 sum.
pub fn ellip_e_agm(k: f64) -> f64 {
    assert!((0.0..1.0).contains(&k));
    let mut a = 1.0f64;
    let mut b = (1.0 - k * k).sqrt();
    let mut csum = 0.5 * k * k; // 2^{-1} c_0^2
    let mut pow2 = 1.0;
    for _ in 0..60 {
        let c = 0.5 * (a - b);
        csum += pow2 * c * c;
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        a = an;
        b = bn;
        pow2 *= 2.0;
        if (a - b).abs() < 1e-17 * a {
            break;
        }
    }
    (FRAC_PI_2 / a) * (1.0 - csum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn trivial_values() {
        assert!((ellip_k(0.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!((ellip_e(0.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(ellip_e(1.0).unwrap(), 1.0);
        assert!(ellip_k(1.0).unwrap().is_infinite());
        assert!(ellip_k(1.2).is_err());
        assert!(ellip_f(0.3, 1.0).is_err());
    }

    #[test]
    fn zero_modulus_is_identity() {
        for &phi in &[0.0, 0.3, FRAC_PI_2] {
            assert!((ellip_f(phi, 0.0).unwrap() - phi).abs() < 1e-14);
            assert!((ellip_e_inc(phi, 0.0).unwrap() - phi).abs() < 1e-14);
        }
    }

    #[test]
    fn reference_values() {
        // mpmath (modulus convention)
        let invs2 = 1.0 / 2f64.sqrt();
        assert!((ellip_k(invs2).unwrap() - 1.8540746773013719184).abs() < 1e-12);
        assert!((ellip_e(invs2).unwrap() - 1.3506438810476755025).abs() < 1e-12);
        assert!((ellip_k(0.3).unwrap() - 1.6080486199305127998).abs() < 1e-12);
        assert!((ellip_e(0.9).unwrap() - 1.1716970527816141047).abs() < 1e-12);
        assert!((ellip_k(0.99).unwrap() - 3.3566005233611916666).abs() < 1e-11);
        assert!((ellip_f(0.3, 0.5).unwrap() - 0.3011159796640660160).abs() < 1e-13);
        assert!((ellip_e_inc(0.3, 0.5).unwrap() - 0.2988914110164985884).abs() < 1e-13);
        assert!((ellip_f(PI / 4.0, invs2).unwrap() - 0.8260178762492451854).abs() < 1e-13);
        assert!((ellip_e_inc(PI / 4.0, invs2).unwrap() - 0.7481865041776613775).abs() < 1e-13);
        assert!((ellip_f(1.2, 0.95).unwrap() - 1.5671270867784677482).abs() < 1e-13);
        assert!((ellip_e_inc(1.2, 0.95).unwrap() - 0.9662063308333322944).abs() < 1e-13);
    }

    #[test]
    fn agm_cross_check() {
        for i in 0..99 {
            let k = 0.01 * i as f64;
            assert!(
                (ellip_k(k).unwrap() - ellip_k_agm(k)).abs() < 1e-12,
                "K({k})"
            );
            assert!(
                (ellip_e(k).unwrap() - ellip_e_agm(k)).abs() < 1e-12,
                "E({k})"
            );
        }
    }

    #[test]
    fn complete_equals_incomplete_at_half_pi() {
        for &k in &[0.2, 0.6, 0.95] {
            assert!((ellip_f(FRAC_PI_2, k).unwrap() - ellip_k(k).unwrap()).abs() < 1e-12);
            assert!((ellip_e_inc(FRAC_PI_2, k).unwrap() - ellip_e(k).unwrap()).abs() < 1e-12);
        }
    }
}
