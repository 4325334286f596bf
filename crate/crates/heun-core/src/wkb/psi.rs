//! Error-control functions for the WKB bounds.
//!
//! Each case transforms the equation to a comparison form whose correction
//! term psi enters the error bound through a variational integral. psi is a
//! difference of individually singular expressions whose poles cancel
//! analytically at the transition point (case I) or at z = 1 (cases III,
//! IV); near those points psi is evaluated from a local Laurent-series
//! model built here, elsewhere from the direct formulas.

use crate::model::ModeParams;
use crate::series::{poly_shift, LSeries};

/// Working series length.
const LEN: usize = 10;

/// Numerator polynomial of f: N(z) = z^3 - a z^2 - z + (a - b).
pub(crate) fn n_poly(p: &ModeParams) -> [f64; 4] {
    [p.a - p.b, -1.0, -p.a, 1.0]
}

/// D(z) = (z^2 - 1)^2.
const D_POLY: [f64; 5] = [1.0, 0.0, -2.0, 0.0, 1.0];

/// Direct f, f', f'' at z (away from cancellation regions).
pub(crate) fn f_derivs(p: &ModeParams, z: f64) -> (f64, f64, f64) {
    let n = n_poly(p);
    let nv = ((n[3] * z + n[2]) * z + n[1]) * z + n[0];
    let np = (3.0 * n[3] * z + 2.0 * n[2]) * z + n[1];
    let npp = 6.0 * n[3] * z + 2.0 * n[2];
    let s = z * z - 1.0;
    let d = s * s;
    let dp = 4.0 * z * s;
    let dpp = 12.0 * z * z - 4.0;
    let f = nv / d;
    let fp = np / d - nv * dp / (d * d);
    let fpp = npp / d - 2.0 * np * dp / (d * d) - nv * dpp / (d * d)
        + 2.0 * nv * dp * dp / (d * d * d);
    (f, fp, fpp)
}

/// 4 f f'' - 5 f'^2 (the combination entering every psi).
fn e4(p: &ModeParams, z: f64) -> f64 {
    let (f, fp, fpp) = f_derivs(p, z);
    4.0 * f * fpp - 5.0 * fp * fp
}

/// Case I psi(zeta(z)) away from the transition point:
/// psi = 5/(16 zeta^2) - zeta (4ff''-5f'^2)/(16 f^3) - zeta g/f.
pub(crate) fn psi_i_direct(p: &ModeParams, z: f64, zeta: f64) -> f64 {
    let (f, _, _) = f_derivs(p, z);
    let g = crate::model::coeff_g(z);
    5.0 / (16.0 * zeta * zeta) - zeta * e4(p, z) / (16.0 * f * f * f) - zeta * g / f
}

/// Case III psi(zeta(z)):
/// psi = 1/(4 zeta) + zeta (4ff''-5f'^2)/(16 f^3) + zeta g/f,  f = 1/(z+1).
pub(crate) fn psi_iii_direct(z: f64, zeta: f64) -> f64 {
    // f = (z+1)^-1: closed-form pieces
    let zp = z + 1.0;
    // (4ff''-5f'^2)/(16 f^3) = 3/(16 (z+1))
    let t2 = zeta * 3.0 / (16.0 * zp);
    let t3 = -zeta / (zp * (z - 1.0) * (z - 1.0));
    1.0 / (4.0 * zeta) + t2 + t3
}

/// Case IV psi(zeta(z)):
/// psi = 1/(16 zeta) - g/(4f) - (4ff''-5f'^2)/(64 f^3).
pub(crate) fn psi_iv_direct(p: &ModeParams, z: f64, zeta: f64) -> f64 {
    let (f, _, _) = f_derivs(p, z);
    let g = crate::model::coeff_g(z);
    1.0 / (16.0 * zeta) - g / (4.0 * f) - e4(p, z) / (64.0 * f * f * f)
}

fn series_e4(f: &LSeries) -> LSeries {
    let fp = f.derivative();
    let fpp = fp.derivative();
    f.mul(&fpp).scale(4.0).sub(&fp.mul(&fp).scale(5.0))
}

/// Local model around the case-I transition point, x = z - z0.
pub(crate) struct CaseISeries {
    /// psi(x), analytic
    pub psi: LSeries,
    /// F(x) = f/x, F(0) = f'(z0) > 0
    pub f_over_x: LSeries,
    /// H(x) = -zeta/x, H(0) = f'(z0)^(1/3)
    pub neg_zeta_over_x: LSeries,
}

pub(crate) fn case_i_series(p: &ModeParams, z0: f64) -> CaseISeries {
    let mut n = poly_shift(&n_poly(p), z0);
    // the transition point is the root of N; kill the bisection residue
    n[0] = 0.0;
    let num = LSeries::from_poly(&n[1..], LEN); // N/x
    let d = LSeries::from_poly(&poly_shift(&D_POLY, z0), LEN);
    let f_over_x = num.div(&d); // F
    let g = d.recip().scale(-1.0);

    // (2/3)(-zeta)^(3/2) = int_0^x sqrt(t F(t)) dt = x^(3/2) * 2/3 * ... :
    // with G = sqrt(F), int G(t) t^(1/2) dt = x^(3/2) sum g_k x^k/(k+3/2)
    let gser = f_over_x.powf(0.5);
    let mut h1 = vec![0.0; gser.len()];
    for (k, &gk) in gser.c.iter().enumerate() {
        h1[k] = gk / (k as f64 + 1.5);
    }
    // (-zeta)^(3/2) = (3/2) x^(3/2) H1(x)  =>  -zeta = x [ (3/2) H1 ]^(2/3)
    let h = LSeries::from_poly(&h1, LEN).scale(1.5).powf(2.0 / 3.0);

    // psi = 5/(16 zeta^2) - zeta E4/(16 f^3) - zeta g/f, with zeta = -xH
    let f_full = f_over_x.shift(1);
    let e4s = series_e4(&f_full);
    let h2 = h.mul(&h); // (-zeta/x)^2
    let term1 = h2.recip().shift(-2).scale(5.0 / 16.0);
    let f3 = f_full.mul(&f_full).mul(&f_full);
    let term2 = h.shift(1).mul(&e4s).div(&f3).scale(1.0 / 16.0);
    let term3 = h.shift(1).mul(&g).div(&f_full);
    let psi_raw = term1.add(&term2).add(&term3);
    let scale = psi_raw
        .c
        .iter()
        .fold(0.0f64, |s, x| s.max(x.abs()));
    let psi = psi_raw.chop_below(0, scale);
    CaseISeries {
        psi,
        f_over_x,
        neg_zeta_over_x: h,
    }
}

/// Local model around z = 1 for case IV, x = z - 1.
pub(crate) struct CaseIvSeries {
    pub psi: LSeries,
    /// P(x) = x f(1+x) = ((1-a) + x)/(2 + x)
    pub p_over: LSeries,
    /// Q(x): int_0^x sqrt(f) = 2 sqrt(x) Q(x), so -zeta = 4 x Q^2
    pub q_int: LSeries,
}

pub(crate) fn case_iv_series(p: &ModeParams) -> CaseIvSeries {
    debug_assert!(p.q == 0 && p.a < 1.0);
    let pnum = LSeries::from_poly(&[1.0 - p.a, 1.0], LEN);
    let pden = LSeries::from_poly(&[2.0, 1.0], LEN);
    let p_over = pnum.div(&pden);
    // int sqrt(P/x) dx = 2 sqrt(x) sum g_k x^k/(2k+1), G = sqrt(P)
    let gser = p_over.powf(0.5);
    let mut q = vec![0.0; gser.len()];
    for (k, &gk) in gser.c.iter().enumerate() {
        q[k] = gk / (2.0 * k as f64 + 1.0);
    }
    let q_int = LSeries::from_poly(&q, LEN);

    // -zeta = 4 x Q^2
    let qq4 = q_int.mul(&q_int).scale(4.0);
    // psi = 1/(16 zeta) - g/(4f) - E4/(64 f^3)
    let f_full = p_over.shift(-1);
    let term1 = qq4.recip().shift(-1).scale(-1.0 / 16.0);
    // g = -1/(x^2 (2+x)^2)
    let dhat = pden.mul(&pden); // (2+x)^2
    let g = dhat.recip().shift(-2).scale(-1.0);
    let term2 = g.div(&f_full).scale(-0.25);
    let e4s = series_e4(&f_full);
    let f3 = f_full.mul(&f_full).mul(&f_full);
    let term3 = e4s.div(&f3).scale(-1.0 / 64.0);
    let psi_raw = term1.add(&term2).add(&term3);
    let scale = psi_raw.c.iter().fold(0.0f64, |s, x| s.max(x.abs()));
    let psi = psi_raw.chop_below(0, scale);
    CaseIvSeries { psi, p_over, q_int }
}

/// Local model around z = 1 for case III (parameter-free: a = 1, b = 0).
pub(crate) fn case_iii_series() -> LSeries {
    let two_px = LSeries::from_poly(&[2.0, 1.0], LEN);
    let f = two_px.recip(); // f = 1/(2+x)
    // zeta = 2 sqrt(2+x) - 2 sqrt(2); constant term cancels exactly
    let zeta = two_px.powf(0.5).scale(2.0).sub(&LSeries::from_poly(
        &[2.0 * std::f64::consts::SQRT_2],
        LEN,
    ));
    let zeta = zeta.chop_below(1, 2.0 * std::f64::consts::SQRT_2);
    let term1 = zeta.recip().scale(0.25);
    let e4s = series_e4(&f);
    let f3 = f.mul(&f).mul(&f);
    let term2 = zeta.mul(&e4s).div(&f3).scale(1.0 / 16.0);
    let dhat = two_px.mul(&two_px);
    let g = dhat.recip().shift(-2).scale(-1.0);
    let term3 = zeta.mul(&g).div(&f);
    let psi_raw = term1.add(&term2).add(&term3);
    let scale = psi_raw.c.iter().fold(0.0f64, |s, x| s.max(x.abs()));
    psi_raw.chop_below(0, scale)
}
