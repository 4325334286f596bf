//! Thron-type continued fraction M(j,q|x), its backward (Gautschi)
//! evaluation, zero-finding for the eigenvalues beta_n, and the reduced
//! separately-convergent T-fraction m(j,q|x).
//!
//! ```text
//! M(j,q|x) = d_0 + K_{k>=1} ( c_k | d_k ),
//! d_k = k(k+2q+1) + mu - x,   c_k = 2k(k+q) x .
//! ```
//!
//! The real zeros of M mark the parameters where the Frobenius recurrence
//! has a minimal solution (the series acquires infinite radius), which is
//! the spectral quantization condition. Forward evaluation of the fraction
//! is numerically unstable, so reported values always come from the
//! backward recurrence; a shallow forward evaluation survives as a test
//! oracle.

use crate::frobenius::{self, MinimalityDiagnostic};
use crate::hiprec::Bf;
use crate::model::ModeParams;
use crate::Config;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CfracError {
    #[error("pole proximity at level k = {k}: |d_k + t_{{k+1}}| = {size:e}")]
    PoleProximity { k: usize, size: f64 },
    #[error("fewer than {want} zeros found below beta_max = {beta_max}")]
    InsufficientRange { want: usize, beta_max: f64 },
    #[error("continued fraction did not converge at depth {0}")]
    NoConvergence(usize),
}

#[derive(Debug, Clone, Copy)]
pub struct CfEvaluation {
    pub value: f64,
    pub depth: usize,
    pub converged: bool,
    /// change across the last depth doubling
    pub delta_last: f64,
}

fn d_k(j: u32, q: u32, k: i64, x: f64) -> f64 {
    let q = q as i64;
    let mu = (q * (q + 1) - (j as i64) * (j as i64 + 1)) as f64;
    (k * (k + 2 * q + 1)) as f64 + mu - x
}

fn c_k(q: u32, k: i64, x: f64) -> f64 {
    (2 * k * (k + q as i64)) as f64 * x
}

/// Backward evaluation at fixed depth. Reports the level nearest to a
/// vanishing denominator when one is hit.
fn eval_m_fixed(j: u32, q: u32, x: f64, n: usize) -> Result<f64, CfracError> {
    let mut t = 0.0f64;
    for k in (1..=n as i64).rev() {
        let ck = c_k(q, k, x);
        if ck == 0.0 {
            // a vanishing partial numerator truncates the tail exactly
            t = 0.0;
            continue;
        }
        let den = d_k(j, q, k, x) + t;
        if den.abs() < 1e-12 * (1.0 + d_k(j, q, k, x).abs()) {
            return Err(CfracError::PoleProximity {
                k: k as usize,
                size: den.abs(),
            });
        }
        t = ck / den;
    }
    Ok(d_k(j, q, 0, x) + t)
}

/// M(j,q|x) by backward recurrence with depth doubling until stationary.
pub fn eval_m(j: u32, q: u32, x: f64, cfg: &Config) -> Result<CfEvaluation, CfracError> {
    let mut n = 64usize;
    let mut prev = eval_m_fixed(j, q, x, n)?;
    let n_max = 1 << 16;
    while n < n_max {
        n *= 2;
        let cur = eval_m_fixed(j, q, x, n)?;
        let delta = cur - prev;
        if delta.abs() <= cfg.cf_tol * (1.0 + cur.abs()) {
            return Ok(CfEvaluation {
                value: cur,
                depth: n,
                converged: true,
                delta_last: delta,
            });
        }
        prev = cur;
    }
    Ok(CfEvaluation {
        value: prev,
        depth: n_max,
        converged: false,
        delta_last: f64::NAN,
    })
}

/// Forward (Wallis) evaluation at fixed shallow depth; the unstable route,
/// kept as an oracle for the backward one.
pub fn eval_m_forward(j: u32, q: u32, x: f64, n: usize) -> f64 {
    let mut a_prev = 1.0; // A_{-1}
    let mut b_prev = 0.0;
    let mut a = d_k(j, q, 0, x); // A_0
    let mut b = 1.0;
    for k in 1..=n as i64 {
        let dk = d_k(j, q, k, x);
        let ck = c_k(q, k, x);
        let a_next = dk * a + ck * a_prev;
        let b_next = dk * b + ck * b_prev;
        a_prev = a;
        b_prev = b;
        a = a_next;
        b = b_next;
        // rescale to dodge overflow
        let s = a.abs().max(b.abs());
        if s > 1e250 {
            a /= s;
            b /= s;
            a_prev /= s;
            b_prev /= s;
        }
    }
    a / b
}

/// Reduced T-fraction m(j,q|x) = K_{k >= j-q+1} (F_k x | 1 + G_k x) with
///
/// ```text
/// G_k = -1/((k-j+q)(k+j+q+1)),
/// F_k = 2k(k+q)/((k-j+q-1)(k-j+q)(k+j+q)(k+j+q+1)),  F_{j-q+1} = j-q+1 .
/// ```
pub fn eval_m_reduced(j: u32, q: u32, x: f64, cfg: &Config) -> Result<CfEvaluation, CfracError> {
    assert!(j >= q);
    let k0 = (j - q + 1) as i64;
    let jj = j as i64;
    let qq = q as i64;
    let f_k = |k: i64| -> f64 {
        if k == k0 {
            k0 as f64
        } else {
            (2 * k * (k + qq)) as f64
                / (((k - jj + qq - 1) * (k - jj + qq)) as f64 * ((k + jj + qq) * (k + jj + qq + 1)) as f64)
        }
    };
    let g_k = |k: i64| -> f64 { -1.0 / (((k - jj + qq) * (k + jj + qq + 1)) as f64) };
    let fixed = |n: usize| -> Result<f64, CfracError> {
        let mut t = 0.0f64;
        for k in (k0..k0 + n as i64).rev() {
            let den = 1.0 + g_k(k) * x + t;
            if den.abs() < 1e-13 * (1.0 + (g_k(k) * x).abs()) {
                return Err(CfracError::PoleProximity {
                    k: k as usize,
                    size: den.abs(),
                });
            }
            t = f_k(k) * x / den;
        }
        Ok(t)
    };
    let mut n = 64usize;
    let mut prev = fixed(n)?;
    while n < (1 << 16) {
        n *= 2;
        let cur = fixed(n)?;
        let delta = cur - prev;
        if delta.abs() <= cfg.cf_tol * (1.0 + cur.abs()) {
            return Ok(CfEvaluation {
                value: cur,
                depth: n,
                converged: true,
                delta_last: delta,
            });
        }
        prev = cur;
    }
    Ok(CfEvaluation {
        value: prev,
        depth: 1 << 16,
        converged: false,
        delta_last: f64::NAN,
    })
}

/// m(j,q|x)/x, well defined at x = 0 where it equals F_{j-q+1} = j-q+1.
pub fn eval_m_reduced_over_x(j: u32, q: u32, x: f64, cfg: &Config) -> Result<f64, CfracError> {
    if x == 0.0 {
        return Ok((j - q + 1) as f64);
    }
    Ok(eval_m_reduced(j, q, x, cfg)?.value / x)
}

/// Backward evaluation in 256-bit arithmetic at fixed depth.
fn eval_m_hiprec(j: u32, q: u32, x: &Bf, n: usize) -> Bf {
    let jj = j as i64;
    let qq = q as i64;
    let mu = qq * (qq + 1) - jj * (jj + 1);
    let mut t = Bf::zero();
    for k in (1..=n as i64).rev() {
        let dk = Bf::from_i64(k * (k + 2 * qq + 1) + mu).sub(x);
        let ck = Bf::from_i64(2 * k * (k + qq)).mul(x);
        t = ck.div(&dk.add(&t));
    }
    Bf::from_i64(mu).sub(x).add(&t)
}

/// A certified eigenvalue: the refined zero plus its certificates.
#[derive(Debug, Clone)]
pub struct CertifiedEigenvalue {
    pub beta: f64,
    /// |M(j,q|beta)| at the reported (f64) beta
    pub residual: f64,
    /// local scale of M used to normalize the residual
    pub scale: f64,
    pub minimal: MinimalityDiagnostic,
}

/// Ascending certified zeros of M(j,q|x) on (0, beta_max].
#[derive(Debug, Clone)]
pub struct EigenvalueList {
    pub j: u32,
    pub q: u32,
    pub betas: Vec<f64>,
    pub residuals: Vec<f64>,
    pub certified: Vec<CertifiedEigenvalue>,
}

/// Refine a bracketing interval in hiprec until the eigenvalue is known to
/// ~1e-55 relative, then certify by the minimal-ratio window.
fn refine_and_certify(
    j: u32,
    q: u32,
    mut lo: f64,
    mut hi: f64,
    cfg: &Config,
) -> Option<CertifiedEigenvalue> {
    // f64 bisection down to ~1e-6 only: the f64 evaluation carries ~1e-13
    // absolute noise, so the final localization must happen in hiprec on a
    // bracket still guaranteed to contain the zero
    let sign_lo = eval_m(j, q, lo, cfg).ok()?.value.is_sign_negative();
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        let vm = eval_m(j, q, mid, cfg).ok()?.value;
        if vm.is_sign_negative() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let beta64 = 0.5 * (lo + hi);

    // pole-vs-zero discrimination: at a zero the value at the midpoint is
    // far below the neighborhood scale
    let here = eval_m(j, q, beta64, cfg).ok()?.value.abs();
    let span = (hi - lo).max(1e-9 * beta64);
    let near = eval_m(j, q, beta64 - 1e3 * span, cfg)
        .map(|e| e.value.abs())
        .unwrap_or(1.0)
        .max(
            eval_m(j, q, beta64 + 1e3 * span, cfg)
                .map(|e| e.value.abs())
                .unwrap_or(1.0),
        )
        .max(1.0);
    if here > 1e-6 * near {
        return None; // pole or unresolved pair
    }

    // hiprec bisection; depth chosen once by doubling at the midpoint. The
    // evaluation bottoms out at a rounding plateau well below 1e-30, so the
    // depth test only needs to reach that plateau.
    let mut n = 512usize;
    let xb = Bf::from_f64(beta64);
    loop {
        let v1 = eval_m_hiprec(j, q, &xb, n);
        let v2 = eval_m_hiprec(j, q, &xb, 2 * n);
        let diff = v2.sub(&v1).abs();
        let tol = v2.abs().add(&Bf::from_f64(1.0)).mul(&Bf::from_f64(1e-30));
        if diff.lt(&tol) || n >= (1 << 15) {
            n *= 2;
            break;
        }
        n *= 2;
    }
    let mut blo = Bf::from_f64(lo);
    let mut bhi = Bf::from_f64(hi);
    // the f64 bracket can be off by the f64 evaluation noise; expand it
    // until the hiprec signs genuinely differ
    let mut expand = 0;
    while eval_m_hiprec(j, q, &blo, n).is_negative() == eval_m_hiprec(j, q, &bhi, n).is_negative()
    {
        let w = Bf::from_f64(hi - lo);
        blo = blo.sub(&w);
        bhi = bhi.add(&w);
        expand += 1;
        if expand > 20 {
            return None;
        }
    }
    let neg_lo = eval_m_hiprec(j, q, &blo, n).is_negative();
    let half = Bf::from_f64(0.5);
    for _ in 0..230 {
        let mid = blo.add(&bhi).mul(&half);
        if eval_m_hiprec(j, q, &mid, n).is_negative() == neg_lo {
            blo = mid;
        } else {
            bhi = mid;
        }
    }
    let beta_ref = blo.add(&bhi).mul(&half);
    let beta_out = beta_ref.to_f64();
    if std::env::var("HEUN_DEBUG_REFINE").is_ok() {
        eprintln!(
            "refine: n={} beta64={beta64:.17e} offset={:e} width={:e}",
            n,
            beta_ref.sub(&Bf::from_f64(beta64)).to_f64(),
            bhi.sub(&blo).to_f64()
        );
        for nn in [256usize, 1024, 4096] {
            eprintln!("  M_hi(beta_ref, {nn}) = {:e}", eval_m_hiprec(j, q, &beta_ref, nn).to_f64());
        }
    }

    let mu = (q as i64) * (q as i64 + 1) - (j as i64) * (j as i64 + 1);
    let minimal = frobenius::minimality_hiprec(q, mu, &beta_ref, cfg.frobenius_k, cfg.ratio_threshold);

    let residual = eval_m(j, q, beta_out, cfg).map(|e| e.value.abs()).unwrap_or(f64::NAN);
    Some(CertifiedEigenvalue {
        beta: beta_out,
        residual,
        scale: near,
        minimal,
    })
}

/// Scan (0, beta_max] for sign changes of M(j,q|.), refine each by
/// bisection, and keep those passing the zero certificates. The scan step
/// tracks the asymptotic zero spacing ~ sqrt(beta); a cell whose candidate
/// fails certification is re-scanned 10x finer before being dropped.
pub fn find_eigenvalues(
    j: u32,
    q: u32,
    count: usize,
    beta_max: Option<f64>,
    cfg: &Config,
) -> Result<EigenvalueList, CfracError> {
    assert!(count >= 1);
    // generous default range from the asymptotic spacing of the zeros
    let bmax = beta_max.unwrap_or_else(|| {
        let n = count as f64 + 1.5;
        let jj = (j * (j + 1)) as f64;
        (2.0 * (0.25 + n) * (0.25 + n) * 1.6 + 2.0 * jj + 20.0).max(60.0)
    });
    let mut found: Vec<CertifiedEigenvalue> = Vec::new();
    let mut x = 0.05f64;
    let mut prev_x = x;
    let mut prev_v = eval_m(j, q, x, cfg).map(|e| e.value).unwrap_or(f64::NAN);
    while x < bmax && found.len() < count {
        let step = 0.15 * (x + 1.0).sqrt();
        x = (x + step).min(bmax);
        let v = match eval_m(j, q, x, cfg) {
            Ok(e) => e.value,
            Err(_) => {
                // stepped onto a pole guard: nudge
                x += 1e-6 * step;
                prev_x = x;
                prev_v = f64::NAN;
                continue;
            }
        };
        if prev_v.is_finite() && v.is_finite() && (prev_v < 0.0) != (v < 0.0) {
            let cert = refine_and_certify(j, q, prev_x, x, cfg).or_else(|| {
                // re-scan the cell finer: certificates catch unresolved pairs
                let mut sub_prev_x = prev_x;
                let mut sub_prev_v = prev_v;
                let m = 10;
                for i in 1..=m {
                    let xi = prev_x + (x - prev_x) * i as f64 / m as f64;
                    let vi = eval_m(j, q, xi, cfg).map(|e| e.value).ok()?;
                    if (sub_prev_v < 0.0) != (vi < 0.0) {
                        if let Some(c) = refine_and_certify(j, q, sub_prev_x, xi, cfg) {
                            return Some(c);
                        }
                    }
                    sub_prev_x = xi;
                    sub_prev_v = vi;
                }
                None
            });
            if let Some(c) = cert {
                if c.minimal.minimal_flag {
                    found.push(c);
                }
            }
        }
        prev_x = x;
        prev_v = v;
    }
    if found.len() < count {
        return Err(CfracError::InsufficientRange {
            want: count,
            beta_max: bmax,
        });
    }
    found.truncate(count);
    Ok(EigenvalueList {
        j,
        q,
        betas: found.iter().map(|c| c.beta).collect(),
        residuals: found.iter().map(|c| c.residual).collect(),
        certified: found,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> Config {
        Config::default()
    }

    #[test]
    fn value_at_zero_is_mu() {
        // x = 0 kills every partial numerator
        let e = eval_m(0, 0, 0.0, &cfg()).unwrap();
        assert_eq!(e.value, 0.0);
        let e = eval_m(3, 1, 0.0, &cfg()).unwrap();
        assert_eq!(e.value, (2 - 12) as f64);
    }

    #[test]
    fn forward_backward_agreement_shallow() {
        // forward is still stable at shallow depth for moderate x
        let b = eval_m_fixed(2, 1, 3.7, 40).unwrap();
        let f = eval_m_forward(2, 1, 3.7, 40);
        assert!((b - f).abs() < 1e-6 * (1.0 + b.abs()), "{b} vs {f}");
    }

    #[test]
    fn reduced_fraction_limit_at_zero() {
        // m(j,q|x)/x -> j-q+1
        assert_eq!(eval_m_reduced_over_x(3, 1, 0.0, &cfg()).unwrap(), 3.0);
        let near = eval_m_reduced_over_x(3, 1, 1e-8, &cfg()).unwrap();
        assert!((near - 3.0).abs() < 1e-6, "{near}");
    }

    #[test]
    fn reduced_consistency_with_full() {
        // M(j,j|x) = x(-1 + m(j,j|x)/x)
        let x = 1.3;
        let full = eval_m(2, 2, x, &cfg()).unwrap().value;
        let red = eval_m_reduced_over_x(2, 2, x, &cfg()).unwrap();
        let composed = x * (-1.0 + red);
        assert!((full - composed).abs() < 1e-8 * (1.0 + full.abs()), "{full} vs {composed}");
    }

    #[test]
    fn reduced_coefficient_sums_converge() {
        // F_k, G_k are O(k^-2); partial sums settle well before k = 1e4
        let (j, q) = (5u32, 2u32);
        let k0 = (j - q + 1) as i64;
        let jj = j as i64;
        let qq = q as i64;
        let mut sf = 0.0;
        let mut sg = 0.0;
        let mut tail_f = 0.0;
        let mut tail_g = 0.0;
        for k in k0..10_000 {
            let g = 1.0 / (((k - jj + qq) * (k + jj + qq + 1)) as f64).abs();
            let f = if k == k0 {
                k0 as f64
            } else {
                ((2 * k * (k + qq)) as f64
                    / (((k - jj + qq - 1) * (k - jj + qq) * (k + jj + qq) * (k + jj + qq + 1)) as f64))
                    .abs()
            };
            sf += f;
            sg += g;
            if k > 9_000 {
                tail_f += f;
                tail_g += g;
            }
        }
        assert!(sf.is_finite() && sg.is_finite());
        // the whole last-1000 block contributes < 1e-2 relative... the
        // terms are ~1e-8 each by k = 1e4
        assert!(tail_f < 1e-3 && tail_g < 1e-3, "tails {tail_f} {tail_g}");
    }

    #[test]
    fn first_eigenvalue_00_certified() {
        let list = find_eigenvalues(0, 0, 1, None, &cfg()).unwrap();
        let b1 = list.betas[0];
        assert!(b1 > 0.0);
        // residual certificate
        assert!(list.residuals[0] < 1e-8 * list.certified[0].scale);
        // Frobenius certificate
        assert!(list.certified[0].minimal.minimal_flag);
        // the f64 diagnostic also dives here, limited by its ~1e-16
        // contamination floor (the strict threshold is the hiprec
        // certificate's business)
        let p = ModeParams::new(0, 0, b1).unwrap();
        let d = frobenius::minimality_diagnostic(&p, 400);
        assert!(d.ratio_min < 0.1, "ratio_min = {}", d.ratio_min);
        assert!(list.certified[0].minimal.ratio_min < 0.05);
        // plus-minus symmetry: -beta_1 brackets a sign change too
        let eps = 1e-4 * b1;
        let vm = eval_m(0, 0, -b1 - eps, &cfg()).unwrap().value;
        let vp = eval_m(0, 0, -b1 + eps, &cfg()).unwrap().value;
        assert!((vm < 0.0) != (vp < 0.0), "no sign change at -beta_1");
        assert!(eval_m(0, 0, -b1, &cfg()).unwrap().value.abs() < 1e-6 * list.certified[0].scale);
    }

    #[test]
    fn depth_doubling_stationarity() {
        let e = eval_m(4, 2, 17.3, &cfg()).unwrap();
        assert!(e.converged);
        assert!(e.delta_last.abs() <= 1e-12 * (1.0 + e.value.abs()));
    }

    #[test]
    fn synthetic_pole_not_reported_as_zero() {
        // 1/(x - 2): sign change across x = 2 with diverging values; the
        // pole/zero discrimination keeps it out
        let f = |x: f64| 1.0 / (x - 2.0);
        let (lo, hi) = (1.9, 2.1);
        assert!((f(lo) < 0.0) != (f(hi) < 0.0));
        // near the "root" the magnitude exceeds the neighborhood scale
        let mid = 0.5 * (lo + hi);
        let here = f(mid).abs();
        let near = f(mid - 0.09).abs().max(f(mid + 0.09).abs()).max(1.0);
        assert!(here > 1e-6 * near);
    }
}

/// Exposed for debugging binaries only.
#[doc(hidden)]
pub fn debug_refine(j: u32, q: u32, lo: f64, hi: f64, cfg: &Config) -> Option<CertifiedEigenvalue> {
    refine_and_certify(j, q, lo, hi, cfg)
}

#[doc(hidden)]
pub fn debug_depth(j: u32, q: u32, x: f64) {
    let xb = Bf::from_f64(x);
    let mut prev = eval_m_hiprec(j, q, &xb, 128);
    for n in [256usize, 512, 1024, 2048] {
        let cur = eval_m_hiprec(j, q, &xb, n);
        let diff = cur.sub(&prev);
        eprintln!("n={n}: v={:e} diff_log2={} ", cur.to_f64(), diff.log2_abs());
        prev = cur;
    }
}
