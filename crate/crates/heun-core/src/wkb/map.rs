//! Liouville transformations z -> zeta for the four cases, the associated
//! integrals of sqrt(|f|), and the case-I phase constant.

use crate::model::{coeff_f_raw, ModeParams};
use crate::quad;
use crate::specfun::{ellip_e_inc, ellip_f};
use crate::wkb::psi;

/// Quadrature settings used by the map integrals.
const QTOL: f64 = 1e-11;
const QMAX: usize = 2000;

/// Stable sqrt(f) near the transition point: f = x N1(x)/D with the exact
/// shifted numerator (no cancellation).
fn sqrt_f_near(p: &ModeParams, z0: f64, nshift: &[f64; 4], z: f64) -> f64 {
    let x = z - z0;
    let num = (nshift[3] * x + nshift[2]) * x + nshift[1]; // N/x
    let s = z * z - 1.0;
    (x * num).max(0.0).sqrt() / s
}

fn sqrt_minus_f_near(p: &ModeParams, z0: f64, nshift: &[f64; 4], z: f64) -> f64 {
    let x = z - z0;
    let num = (nshift[3] * x + nshift[2]) * x + nshift[1];
    let s = z * z - 1.0;
    let _ = p;
    (-x * num).max(0.0).sqrt() / s
}

/// Case I map and phase data.
pub(crate) struct CaseIMap {
    pub z0: f64,
    /// shifted numerator coefficients at z0 (constant term zeroed)
    pub nshift: [f64; 4],
    /// series switch radius around z0
    pub radius: f64,
    pub series: psi::CaseISeries,
    /// C = lim (int_{z0}^z sqrt f - 2 sqrt z)
    pub c_const: f64,
}

impl CaseIMap {
    pub fn new(p: &ModeParams, z0: f64) -> Self {
        let mut nshift_v = crate::series::poly_shift(&psi::n_poly(p), z0);
        nshift_v[0] = 0.0;
        let nshift = [nshift_v[0], nshift_v[1], nshift_v[2], nshift_v[3]];
        let radius = (0.05f64).min((z0 - 1.0) / 3.0);
        let series = psi::case_i_series(p, z0);
        let mut map = CaseIMap {
            z0,
            nshift,
            radius,
            series,
            c_const: 0.0,
        };
        map.c_const = map.compute_c(p);
        map
    }

    /// int_{z0}^{z} sqrt(f) dt for z > z0.
    pub fn int_sqrt_f(&self, p: &ModeParams, z: f64) -> f64 {
        let z0 = self.z0;
        debug_assert!(z >= z0);
        let zr = (z0 + self.radius).min(z);
        // [z0, zr]: t = z0 + s^2
        let near = quad::integrate(
            |s| 2.0 * s * sqrt_f_near(p, z0, &self.nshift, z0 + s * s),
            0.0,
            (zr - z0).sqrt(),
            QTOL,
            0.0,
            QMAX,
        )
        .value;
        let far = if z > zr {
            quad::integrate(
                |t| coeff_f_raw(p, t).max(0.0).sqrt(),
                zr,
                z,
                QTOL,
                0.0,
                QMAX,
            )
            .value
        } else {
            0.0
        };
        near + far
    }

    /// int_{z}^{z0} sqrt(-f) dt for 1 < z < z0.
    pub fn int_sqrt_minus_f(&self, p: &ModeParams, z: f64) -> f64 {
        let z0 = self.z0;
        debug_assert!(z < z0 && z > 1.0);
        let zr = (z0 - self.radius).max(z);
        let near = quad::integrate(
            |s| 2.0 * s * sqrt_minus_f_near(p, z0, &self.nshift, z0 - s * s),
            0.0,
            (z0 - zr).sqrt(),
            QTOL,
            0.0,
            QMAX,
        )
        .value;
        let far = if z < zr {
            quad::integrate(
                |t| (-coeff_f_raw(p, t)).max(0.0).sqrt(),
                z,
                zr,
                QTOL,
                0.0,
                QMAX,
            )
            .value
        } else {
            0.0
        };
        near + far
    }

    /// R(z) = int_z^inf (sqrt f - t^(-1/2)) dt, the far-field remainder.
    ///
    /// Finite quadrature out to Z plus the analytic tail from
    /// sqrt f - t^(-1/2) = -a/(2 t^(3/2)) + (4 - a^2)/(8 t^(5/2)) + O(t^(-7/2)).
    pub fn r_tail(&self, p: &ModeParams, z: f64) -> f64 {
        let z_big = (1e5f64).max(64.0 * z).min(1e7);
        let head = quad::integrate(
            |t| coeff_f_raw(p, t).max(0.0).sqrt() - 1.0 / t.sqrt(),
            z,
            z_big,
            QTOL,
            1e-13,
            QMAX,
        )
        .value;
        let tail = -p.a / z_big.sqrt() + (4.0 - p.a * p.a) / (12.0 * z_big.powf(1.5));
        head + tail
    }

    fn compute_c(&mut self, p: &ModeParams) -> f64 {
        let z0 = self.z0;
        let z1 = z0 + 1.0;
        // [z0, z1] with t = z0 + s^2, integrand (sqrt f - 1/sqrt t) dt
        let near = quad::integrate(
            |s| {
                let t = z0 + s * s;
                2.0 * s * (sqrt_f_near(p, z0, &self.nshift, t) - 1.0 / t.sqrt())
            },
            0.0,
            1.0,
            QTOL,
            0.0,
            QMAX,
        )
        .value;
        near + self.r_tail(p, z1) - 2.0 * z0.sqrt()
    }

    /// zeta(z): negative beyond z0, positive inside, series in the ring.
    pub fn zeta(&self, p: &ModeParams, z: f64) -> f64 {
        let x = z - self.z0;
        if x.abs() < self.radius {
            return -x * self.series.neg_zeta_over_x.eval(x);
        }
        if x > 0.0 {
            let j = self.int_sqrt_f(p, z);
            -(1.5 * j).powf(2.0 / 3.0)
        } else {
            let i = self.int_sqrt_minus_f(p, z);
            (1.5 * i).powf(2.0 / 3.0)
        }
    }
}

/// Case IV: int_1^z sqrt(f) dt in closed elliptic form,
/// 2 sqrt((z^2-1)/(z-a)) + (1-a) sqrt2 F(phi, k) - 2 sqrt2 E(phi, k),
/// phi = arcsin sqrt((z-1)/(z-a)), k = sqrt((1+a)/2).
pub(crate) fn int_sqrt_f_iv(p: &ModeParams, z: f64) -> f64 {
    debug_assert!(p.q == 0 && p.a < 1.0 && z > 1.0);
    let a = p.a;
    let k = ((1.0 + a) / 2.0).sqrt();
    let phi = ((z - 1.0) / (z - a)).sqrt().min(1.0).asin();
    let s2 = std::f64::consts::SQRT_2;
    2.0 * ((z * z - 1.0) / (z - a)).sqrt() + (1.0 - a) * s2 * ellip_f(phi, k).unwrap()
        - 2.0 * s2 * ellip_e_inc(phi, k).unwrap()
}

/// Case IV zeta: -(int_1^z sqrt f)^2.
pub(crate) fn zeta_iv(p: &ModeParams, z: f64) -> f64 {
    let i = int_sqrt_f_iv(p, z);
    -(i * i)
}

/// Case III zeta = 2 sqrt(z+1) - 2 sqrt 2, stable near z = 1 through the
/// rationalized form zeta = 2 (z-1) / (sqrt(z+1) + sqrt 2).
pub(crate) fn zeta_iii(z: f64) -> f64 {
    2.0 * (z - 1.0) / ((z + 1.0).sqrt() + std::f64::consts::SQRT_2)
}

/// Case II: int_a^z sqrt(f) dt for z >= a in closed elliptic form.
pub(crate) fn int_sqrt_f_ii(p: &ModeParams, z: f64) -> f64 {
    debug_assert!(p.q == 0 && p.a > 1.0 && z >= p.a);
    let a = p.a;
    if z == a {
        return 0.0;
    }
    let k = (2.0 / (1.0 + a)).sqrt();
    let phi = ((z - a) / (z - 1.0)).sqrt().min(1.0).asin();
    2.0 * ((z - a) * (z + 1.0) / (z - 1.0)).sqrt()
        - 2.0 * (1.0 + a).sqrt() * ellip_e_inc(phi, k).unwrap()
}

/// Case II: int_z^a sqrt(-f) dt for 1 < z <= a, endpoint substitutions at
/// both ends.
pub(crate) fn int_sqrt_minus_f_ii(p: &ModeParams, z: f64) -> f64 {
    let a = p.a;
    debug_assert!(z > 1.0 && z <= a);
    if z == a {
        return 0.0;
    }
    let mid = 0.5 * (z + a);
    // lower part, t = 1 + s^2 from s = sqrt(z-1)
    let i1 = quad::integrate(
        |s| 2.0 * ((a - 1.0 - s * s).max(0.0) / (s * s + 2.0)).sqrt(),
        (z - 1.0).sqrt(),
        (mid - 1.0).sqrt(),
        QTOL,
        0.0,
        QMAX,
    )
    .value;
    // upper part, t = a - v^2
    let i2 = quad::integrate(
        |v| {
            let t = a - v * v;
            2.0 * v * v / ((t * t - 1.0).max(0.0)).sqrt()
        },
        0.0,
        (a - mid).sqrt(),
        QTOL,
        0.0,
        QMAX,
    )
    .value;
    i1 + i2
}

/// The case-II outer relation G(zeta) = zeta^(1/2)(zeta-alpha)^(1/2)
/// - (alpha/2) ln((2 zeta - alpha + 2 zeta^(1/2)(zeta-alpha)^(1/2))/alpha).
fn g_outer(zeta: f64, alpha: f64) -> f64 {
    let root = (zeta * (zeta - alpha)).max(0.0).sqrt();
    root - 0.5 * alpha * ((2.0 * zeta - alpha + 2.0 * root) / alpha).ln()
}

/// The case-II inner relation H(zeta) = int_zeta^alpha sqrt((alpha-t)/t) dt
/// = alpha (pi/2 - theta - sin theta cos theta), theta = arcsin sqrt(zeta/alpha).
fn h_inner(zeta: f64, alpha: f64) -> f64 {
    let theta = (zeta / alpha).clamp(0.0, 1.0).sqrt().asin();
    alpha * (0.5 * std::f64::consts::PI - theta - theta.sin() * theta.cos())
}

/// Case II zeta(z), solving the matching implicit relation by bisection.
/// zeta(1) = 0, zeta(a) = alpha, zeta -> inf with z.
pub(crate) fn zeta_ii(p: &ModeParams, alpha: f64, z: f64) -> f64 {
    let a = p.a;
    debug_assert!(z > 1.0);
    if z >= a {
        let rhs = int_sqrt_f_ii(p, z);
        if rhs == 0.0 {
            return alpha;
        }
        let mut lo = alpha;
        let mut hi = alpha + rhs + alpha.sqrt() * rhs.sqrt() + 1.0;
        while g_outer(hi, alpha) < rhs {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if g_outer(mid, alpha) < rhs {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    } else {
        let rhs = int_sqrt_minus_f_ii(p, z);
        let mut lo = 0.0;
        let mut hi = alpha;
        // H decreases from H(0) = alpha pi/2 to 0
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if h_inner(mid, alpha) > rhs {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{classify_case, ModeParams};

    fn p(j: u32, q: u32, beta: f64) -> ModeParams {
        ModeParams::new(j, q, beta).unwrap()
    }

    #[test]
    fn case_iv_closed_form_matches_quadrature() {
        let m = p(0, 0, 1.0); // a = 0
        for &z in &[1.5, 2.0, 4.0, 10.0] {
            let cf = int_sqrt_f_iv(&m, z);
            let q = quad::integrate(
                |s| {
                    let t = 1.0 + s * s;
                    2.0 * s * coeff_f_raw(&m, t).max(0.0).sqrt()
                },
                0.0,
                (z - 1.0).sqrt(),
                1e-12,
                0.0,
                2000,
            )
            .value;
            assert!((cf - q).abs() < 1e-9, "z={z}: {cf} vs {q}");
        }
    }

    #[test]
    fn case_ii_closed_form_matches_quadrature() {
        let m = p(7, 0, 50.0); // a = 1.12
        for &z in &[1.2, 2.0, 5.0] {
            let a = m.a;
            if z <= a {
                continue;
            }
            let cf = int_sqrt_f_ii(&m, z);
            let q = quad::integrate(
                |s| {
                    let t = a + s * s;
                    2.0 * s * coeff_f_raw(&m, t).max(0.0).sqrt()
                },
                0.0,
                (z - a).sqrt(),
                1e-12,
                0.0,
                2000,
            )
            .value;
            assert!((cf - q).abs() < 1e-8, "z={z}: {cf} vs {q}");
        }
    }

    #[test]
    fn liouville_derivative_identity() {
        // d/dz of each implicit relation reproduces sqrt|f| at interior
        // points (central differences on zeta)
        let h = 1e-6;

        // case I: d/dz[(2/3)(-zeta)^{3/2}] = sqrt f (z > z0)
        let m = p(2, 1, 4.0);
        let z0 = classify_case(&m).z0.unwrap();
        let map = CaseIMap::new(&m, z0);
        for i in 1..=50 {
            let z = z0 + 0.3 + 0.1 * i as f64;
            let lhs = (2.0 / 3.0)
                * ((-map.zeta(&m, z + h)).powf(1.5) - (-map.zeta(&m, z - h)).powf(1.5))
                / (2.0 * h);
            let f = coeff_f_raw(&m, z).sqrt();
            assert!((lhs - f).abs() < 1e-8 * (1.0 + f), "I z={z}: {lhs} vs {f}");
        }
        // and inside: d/dz[(2/3) zeta^{3/2}] = -sqrt(-f)
        for i in 1..=20 {
            let z = 1.0 + (z0 - 1.0) * (0.15 + 0.7 * i as f64 / 21.0);
            if (z - z0).abs() < 2.0 * map.radius {
                continue;
            }
            let lhs = (2.0 / 3.0)
                * (map.zeta(&m, z + h).powf(1.5) - map.zeta(&m, z - h).powf(1.5))
                / (2.0 * h);
            let f = (-coeff_f_raw(&m, z)).sqrt();
            assert!((lhs + f).abs() < 1e-7 * (1.0 + f), "I-in z={z}: {lhs} vs {}", -f);
        }

        // case IV: d/dz[(-zeta)^{1/2}] = sqrt f
        let m4 = p(1, 0, 10.0);
        for i in 1..=50 {
            let z = 1.05 + 0.15 * i as f64;
            let lhs = ((-zeta_iv(&m4, z + h)).sqrt() - (-zeta_iv(&m4, z - h)).sqrt()) / (2.0 * h);
            let f = coeff_f_raw(&m4, z).sqrt();
            assert!((lhs - f).abs() < 1e-7 * (1.0 + f), "IV z={z}");
        }

        // case III: zeta' = sqrt f exactly
        for i in 1..=50 {
            let z = 1.0 + 0.2 * i as f64;
            let lhs = (zeta_iii(z + h) - zeta_iii(z - h)) / (2.0 * h);
            let f = 1.0 / (z + 1.0).sqrt();
            assert!((lhs - f).abs() < 1e-9, "III z={z}");
        }

        // case II: d/dz G(zeta(z)) = sqrt f outside, and the inner relation
        // derivative gives -sqrt(-f)
        let m2 = p(7, 0, 50.0);
        let alpha = classify_case(&m2).alpha.unwrap();
        for i in 1..=25 {
            let z = m2.a + 0.1 + 0.15 * i as f64;
            let zp = zeta_ii(&m2, alpha, z + h);
            let zm = zeta_ii(&m2, alpha, z - h);
            let lhs = (g_outer(zp, alpha) - g_outer(zm, alpha)) / (2.0 * h);
            let f = coeff_f_raw(&m2, z).sqrt();
            assert!((lhs - f).abs() < 1e-6 * (1.0 + f), "II z={z}: {lhs} vs {f}");
        }
        for i in 1..=25 {
            let z = 1.0 + (m2.a - 1.0) * (0.1 + 0.8 * i as f64 / 26.0);
            let zp = zeta_ii(&m2, alpha, z + h);
            let zm = zeta_ii(&m2, alpha, z - h);
            let lhs = (h_inner(zp, alpha) - h_inner(zm, alpha)) / (2.0 * h);
            let f = (-coeff_f_raw(&m2, z)).sqrt();
            assert!((lhs + f).abs() < 2e-6 * (1.0 + f), "II-in z={z}: {lhs} vs {}", -f);
        }
    }

    #[test]
    fn case_ii_zeta_endpoints() {
        let m = p(7, 0, 50.0);
        let alpha = classify_case(&m).alpha.unwrap();
        // zeta(1+) -> 0: the inner relation pins H(0) = alpha pi/2 =
        // int_1^a sqrt(-f) by the definition of alpha
        let z_near_1 = 1.0 + 1e-9;
        let zeta = zeta_ii(&m, alpha, z_near_1);
        assert!(zeta < 1e-4, "zeta(1+) = {zeta}");
        // zeta(a) = alpha
        let zeta_a = zeta_ii(&m, alpha, m.a);
        assert!((zeta_a - alpha).abs() < 1e-10);
    }

    #[test]
    fn case_i_c_constant_stationary() {
        // C = lim (int - 2 sqrt z): evaluate the partial expression at two
        // large z and check both agree with the stored constant
        let m = p(2, 1, 4.0);
        let z0 = classify_case(&m).z0.unwrap();
        let map = CaseIMap::new(&m, z0);
        // exact identity: int_{z0}^z sqrt f = 2 sqrt z + C - R(z)
        for &z in &[1e3, 1e4] {
            let c_here = map.int_sqrt_f(&m, z) - 2.0 * z.sqrt() + map.r_tail(&m, z);
            assert!(
                (c_here - map.c_const).abs() < 1e-8,
                "z={z}: {c_here} vs {}",
                map.c_const
            );
        }
    }
}
