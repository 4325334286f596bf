//! Bessel functions J0, J1, Y0, Y1 and their Olver auxiliary functions.
//!
//! Power series (summed in double-double; the mid-range cancellation would
//! otherwise cost ~8 digits) up to the switch point, Hankel asymptotic
//! expansions beyond it. At the switch point x = 18 the asymptotic series
//! truncated at its smallest term is below 1e-15.

use super::SpecFunError;
use crate::dd::Dd;
use std::f64::consts::PI;
use std::sync::OnceLock;

const EULER_GAMMA_DD: Dd = Dd {
    hi: 0.5772156649015329,
    lo: -4.942915152430645e-18,
};
const SWITCH: f64 = 18.0;

/// J0 by dd series.
fn j0_series(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    for k in 1..200 {
        term = term.mul_f64(q).div_f64((k * k) as f64);
        sum = sum.add(term);
        if term.abs() < 1e-40 * sum.abs().max(1e-30) {
            break;
        }
    }
    sum.to_f64()
}

/// J1 by dd series.
fn j1_series(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = Dd::from(0.5 * x);
    let mut sum = term;
    for k in 1..200 {
        term = term.mul_f64(q).div_f64((k * (k + 1)) as f64);
        sum = sum.add(term);
        if term.abs() < 1e-40 * sum.abs().max(1e-30) {
            break;
        }
    }
    sum.to_f64()
}

/// Y0 by the log series. The harmonic numbers and the final combination
/// stay in dd: the log term and the sum cancel several digits at mid-range.
fn y0_series(x: f64) -> f64 {
    // (2/pi) [ (ln(x/2)+gamma) J0 + sum_{k>=1} (-1)^{k+1} H_k (x^2/4)^k / (k!)^2 ]
    let q = 0.25 * x * x;
    let mut term = Dd::ONE; // (x^2/4)^k / (k!)^2 at k=0
    let mut h = Dd::ZERO;
    let mut sum = Dd::ZERO;
    let mut sign = 1.0;
    for k in 1..200 {
        term = term.mul_f64(q).div_f64((k * k) as f64);
        h = h.add(Dd::ONE.div_f64(k as f64));
        let contrib = term.mul(h).mul_f64(sign);
        sum = sum.add(contrib);
        sign = -sign;
        if term.abs() * h.abs() < 1e-40 * sum.abs().max(1e-30) {
            break;
        }
    }
    let mut jsum = Dd::ONE;
    let mut jterm = Dd::ONE;
    for k in 1..200 {
        jterm = jterm.mul_f64(-q).div_f64((k * k) as f64);
        jsum = jsum.add(jterm);
        if jterm.abs() < 1e-40 * jsum.abs().max(1e-30) {
            break;
        }
    }
    let log_term = Dd::from((0.5 * x).ln()).add(EULER_GAMMA_DD);
    let total = log_term.mul(jsum).add(sum);
    (2.0 / PI) * total.to_f64()
}

/// Y1 by the log series, fully in dd like `y0_series`.
fn y1_series(x: f64) -> f64 {
    // (2/pi) [ (ln(x/2)+gamma) J1 - 1/x
    //          - (x/4) sum_{k>=0} (-1)^k (H_k + H_{k+1}) (x^2/4)^k / (k!(k+1)!) ]
    let q = 0.25 * x * x;
    let mut term = Dd::ONE; // (x^2/4)^k/(k!(k+1)!) at k=0
    let mut sum = Dd::ZERO;
    let mut hh = Dd::ONE; // H_k + H_{k+1} at k=0
    let mut sign = 1.0;
    for k in 0..200 {
        if k > 0 {
            term = term.mul_f64(q).div_f64((k * (k + 1)) as f64);
            hh = hh
                .add(Dd::ONE.div_f64(k as f64))
                .add(Dd::ONE.div_f64((k + 1) as f64));
        }
        sum = sum.add(term.mul(hh).mul_f64(sign));
        sign = -sign;
        if term.abs() * hh.abs() < 1e-40 * sum.abs().max(1e-30) {
            break;
        }
    }
    let mut jsum = Dd::from(0.5 * x);
    let mut jterm = jsum;
    for k in 1..200 {
        jterm = jterm.mul_f64(-q).div_f64((k * (k + 1)) as f64);
        jsum = jsum.add(jterm);
        if jterm.abs() < 1e-40 * jsum.abs().max(1e-30) {
            break;
        }
    }
    let log_term = Dd::from((0.5 * x).ln()).add(EULER_GAMMA_DD);
    let total = log_term
        .mul(jsum)
        .sub(Dd::ONE.div_f64(x))
        .sub(sum.mul_f64(0.25 * x));
    (2.0 / PI) * total.to_f64()
}

/// Hankel asymptotic amplitude series P, Q for order nu (0 or 1), summed to
/// the smallest term.
fn hankel_pq(nu: u32, x: f64) -> (f64, f64) {
    let mu = 4.0 * (nu * nu) as f64;
    let mut p = 0.0;
    let mut q = 0.0;
    let mut ak = 1.0; // a_k, starting at k = 0
    let mut k = 0u32;
    let mut last = f64::INFINITY;
    loop {
        // even k contributes to P, odd to Q, with sign (-1)^(k/2)
        let pw = ak / x.powi(k as i32);
        if pw.abs() >= last {
            break; // divergent tail reached
        }
        last = pw.abs();
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * pw;
        } else {
            q += sign * pw;
        }
        if pw.abs() < 1e-18 || k > 60 {
            break;
        }
        // a_{k+1} = a_k (mu - (2k+1)^2) / (8(k+1))
        let m = (2 * k + 1) as f64;
        ak *= (mu - m * m) / (8.0 * (k + 1) as f64);
        k += 1;
    }
    (p, q)
}

fn bessel_asympt(nu: u32, x: f64) -> (f64, f64) {
    let (p, q) = hankel_pq(nu, x);
    let omega = x - (nu as f64) * 0.5 * PI - 0.25 * PI;
    let amp = (2.0 / (PI * x)).sqrt();
    let j = amp * (omega.cos() * p - omega.sin() * q);
    let y = amp * (omega.sin() * p + omega.cos() * q);
    (j, y)
}

/// Bessel function of the first kind, order zero.
pub fn bessel_j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= SWITCH {
        j0_series(ax)
    } else {
        bessel_asympt(0, ax).0
    }
}

/// Bessel function of the first kind, order one (odd in x).
pub fn bessel_j1(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax <= SWITCH {
        j1_series(ax)
    } else {
        bessel_asympt(1, ax).0
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// Bessel function of the second kind, order zero (x > 0).
pub fn bessel_y0(x: f64) -> Result<f64, SpecFunError> {
    if !(x > 0.0) {
        return Err(SpecFunError::Domain(format!("Y0 requires x > 0, got {x}")));
    }
    Ok(if x <= SWITCH {
        y0_series(x)
    } else {
        bessel_asympt(0, x).1
    })
}

/// Bessel function of the second kind, order one (x > 0).
pub fn bessel_y1(x: f64) -> Result<f64, SpecFunError> {
    if !(x > 0.0) {
        return Err(SpecFunError::Domain(format!("Y1 requires x > 0, got {x}")));
    }
    Ok(if x <= SWITCH {
        y1_series(x)
    } else {
        bessel_asympt(1, x).1
    })
}

/// Modulus, weight, and phase for the J0/Y0 pair:
/// J0 = (M0/E0) cos(theta0), Y0 = E0 M0 sin(theta0).
#[derive(Debug, Clone, Copy)]
pub struct BesselAux {
    pub x: f64,
    pub m0: f64,
    pub e0: f64,
    pub theta0: f64,
}

/// Splice point: smallest positive root of J0(x) + Y0(x) = 0. Below it the
/// weight E0 = sqrt(-Y0/J0) >= 1; above it E0 = 1.
pub fn bessel_x0() -> f64 {
    static X0: OnceLock<f64> = OnceLock::new();
    *X0.get_or_init(|| {
        let f = |x: f64| bessel_j0(x) + bessel_y0(x).unwrap();
        let (mut lo, mut hi) = (0.05, 0.5);
        debug_assert!(f(lo) < 0.0 && f(hi) > 0.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    })
}

/// Auxiliary modulus/weight/phase at x > 0.
pub fn bessel_aux(x: f64) -> Result<BesselAux, SpecFunError> {
    if !(x > 0.0) {
        return Err(SpecFunError::Domain(format!(
            "bessel_aux requires x > 0, got {x}"
        )));
    }
    let j = bessel_j0(x);
    let y = bessel_y0(x)?;
    let x0 = bessel_x0();
    if x >= x0 {
        let m0 = (j * j + y * y).sqrt();
        Ok(BesselAux {
            x,
            m0,
            e0: 1.0,
            theta0: y.atan2(j),
        })
    } else {
        // here J0 > 0 > Y0 and |Y0| >= J0; theta0 is the constant -pi/4
        let e0 = (-y / j).sqrt();
        let m0 = (-2.0 * y * j).sqrt();
        Ok(BesselAux {
            x,
            m0,
            e0,
            theta0: -0.25 * PI,
        })
    }
}
