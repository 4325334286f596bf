//! The radial equation, its parameters, and the WKB case classification.
//!
//! In standard form the equation reads w'' = [-beta f(z) + g(z)] w with
//!
//! ```text
//! f(z) = ((z - a)(z^2 - 1) - b) / (z^2 - 1)^2,   g(z) = -(z^2 - 1)^-2,
//! a = j(j+1)/beta,  b = q^2/beta.
//! ```
//!
//! The behavior of f on (1, inf) — order of its pole at z = 1 and presence
//! of a simple zero (transition point) — selects one of four uniform
//! approximations.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid mode parameters: {0}")]
    InvalidParams(String),
    #[error("domain error: {0}")]
    Domain(String),
}

/// Quantum numbers and spectral parameter, with derived quantities cached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeParams {
    pub j: u32,
    pub q: u32,
    pub beta: f64,
    /// j(j+1)/beta
    pub a: f64,
    /// q^2/beta
    pub b: f64,
    /// sqrt(beta)
    pub u: f64,
    /// q(q+1) - j(j+1), always <= 0
    pub mu: i64,
}

impl ModeParams {
    pub fn new(j: u32, q: u32, beta: f64) -> Result<Self, ModelError> {
        if q > j {
            return Err(ModelError::InvalidParams(format!(
                "q = {q} exceeds j = {j}"
            )));
        }
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(ModelError::InvalidParams(format!(
                "beta must be positive and finite, got {beta}"
            )));
        }
        let jj = (j as f64) * (j as f64 + 1.0);
        let mu = (q as i64) * (q as i64 + 1) - (j as i64) * (j as i64 + 1);
        Ok(ModeParams {
            j,
            q,
            beta,
            a: jj / beta,
            b: (q as f64) * (q as f64) / beta,
            u: beta.sqrt(),
            mu,
        })
    }

    /// Same quantum numbers, different spectral parameter.
    pub fn with_beta(&self, beta: f64) -> Result<Self, ModelError> {
        ModeParams::new(self.j, self.q, beta)
    }

    /// j(j+1) as a float.
    pub fn jj(&self) -> f64 {
        (self.j as f64) * (self.j as f64 + 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTag {
    I,
    II,
    III,
    IV,
}

impl std::fmt::Display for CaseTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CaseTag::I => write!(f, "I"),
            CaseTag::II => write!(f, "II"),
            CaseTag::III => write!(f, "III"),
            CaseTag::IV => write!(f, "IV"),
        }
    }
}

/// Case classification with its case-specific transform data.
#[derive(Debug, Clone, Copy)]
pub struct WkbCase {
    pub tag: CaseTag,
    /// Case I: the transition point, the unique zero of f above max(1, a).
    pub z0: Option<f64>,
    /// Case II: alpha = (2/pi) * int_1^a sqrt(-f).
    pub alpha: Option<f64>,
}

/// The WKB coefficient f(z) for z > 1.
pub fn coeff_f(p: &ModeParams, z: f64) -> Result<f64, ModelError> {
    if z <= 1.0 {
        return Err(ModelError::Domain(format!("coeff_f requires z > 1, got {z}")));
    }
    Ok(coeff_f_raw(p, z))
}

/// The rational function f at any z != +-1.
pub fn coeff_f_raw(p: &ModeParams, z: f64) -> f64 {
    let s = z * z - 1.0;
    ((z - p.a) * s - p.b) / (s * s)
}

/// g(z) = -(z^2-1)^-2.
pub fn coeff_g(z: f64) -> f64 {
    let s = z * z - 1.0;
    -1.0 / (s * s)
}

/// h(z) = (z - a)(z^2 - 1) - b, the numerator of f. Its unique root above
/// max(1, a) is the case-I transition point.
fn transition_h(p: &ModeParams, z: f64) -> f64 {
    (z - p.a) * (z * z - 1.0) - p.b
}

/// Locate the case-I transition point by bracketed bisection with a few
/// Newton polish steps. h is strictly increasing above max(1, a) and
/// h(max(1,a)) = -b < 0, so the root exists and is unique.
pub(crate) fn transition_point(p: &ModeParams) -> f64 {
    let lo0 = p.a.max(1.0);
    let mut hi = lo0 + 1.0;
    while transition_h(p, hi) < 0.0 {
        hi = lo0 + 2.0 * (hi - lo0);
    }
    let mut lo = lo0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if transition_h(p, mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * hi {
            break;
        }
    }
    let mut z = 0.5 * (lo + hi);
    for _ in 0..4 {
        let h = transition_h(p, z);
        let dh = (z * z - 1.0) + 2.0 * z * (z - p.a);
        let step = h / dh;
        let zn = z - step;
        if zn > lo0 {
            z = zn;
        }
    }
    z
}

/// alpha = (2/pi) int_1^a sqrt(-f(t)) dt for case II (q = 0, a > 1).
///
/// With b = 0, -f(t) = (a - t)/(t^2 - 1) on (1, a). Both endpoints get an
/// explicit substitution (t = 1 + s^2 and t = a - s^2) so the integrands
/// are analytic.
pub(crate) fn case_ii_alpha(p: &ModeParams, quad_tol: f64, max_subdiv: usize) -> f64 {
    let a = p.a;
    debug_assert!(p.q == 0 && a > 1.0);
    let mid = 0.5 * (1.0 + a);
    // t = 1 + s^2: integrand 2 sqrt((a - 1 - s^2)/(s^2 + 2))
    let i1 = crate::quad::integrate(
        |s| {
            let num = (a - 1.0 - s * s).max(0.0);
            2.0 * (num / (s * s + 2.0)).sqrt()
        },
        0.0,
        (mid - 1.0).sqrt(),
        quad_tol,
        0.0,
        max_subdiv,
    );
    // t = a - s^2: integrand 2 s^2 / sqrt(t^2 - 1)
    let i2 = crate::quad::integrate(
        |s| {
            let t = a - s * s;
            2.0 * s * s / ((t * t - 1.0).max(0.0)).sqrt()
        },
        0.0,
        (a - mid).sqrt(),
        quad_tol,
        0.0,
        max_subdiv,
    );
    (2.0 / std::f64::consts::PI) * (i1.value + i2.value)
}

/// Classify the mode into one of the four WKB cases.
///
/// q >= 1 always yields a transition point above max(1, a) (f(1+) < 0 <
/// f(inf)), hence case I. For q = 0 the split is on a relative to 1, with
/// `tol_case` deciding equality.
pub fn classify_case(p: &ModeParams) -> WkbCase {
    classify_case_cfg(p, &crate::Config::default())
}

pub fn classify_case_cfg(p: &ModeParams, cfg: &crate::Config) -> WkbCase {
    if p.q >= 1 {
        return WkbCase {
            tag: CaseTag::I,
            z0: Some(transition_point(p)),
            alpha: None,
        };
    }
    let jj = p.jj();
    // exact test when beta is exactly representable (e.g. integer input),
    // else relative tolerance
    let a_is_one = p.beta == jj || (p.a - 1.0).abs() <= cfg.tol_case;
    if a_is_one && p.j > 0 {
        WkbCase {
            tag: CaseTag::III,
            z0: None,
            alpha: None,
        }
    } else if p.a > 1.0 {
        WkbCase {
            tag: CaseTag::II,
            z0: Some(p.a),
            alpha: Some(case_ii_alpha(p, cfg.quad_tol, cfg.quad_max_subdiv)),
        }
    } else {
        WkbCase {
            tag: CaseTag::IV,
            z0: None,
            alpha: None,
        }
    }
}
