//! Eigenfunctions and asymptotic scattering phases of the radial confluent
//! Heun equation on Eguchi-Hanson space.
//!
//! The radial eigenvalue problem reduces to a confluent Heun equation with
//! regular singularities at z = ±1 and an irregular singularity at infinity.
//! This crate computes the recessive eigenfunctions and their far-field
//! scattering phases by three independent routes and cross-validates them:
//!
//! * [`wkb`] — Liouville-Green (WKB) closed forms with computable error
//!   bounds, one uniform approximation per case (Airy, Whittaker, Bessel),
//! * [`cfrac`] + [`frobenius`] + [`monodromy`] — exact discrete eigenvalues
//!   from the zeros of a Thron-type continued fraction, with the phase fixed
//!   by a monodromy computation,
//! * [`oracle`] — direct adaptive integration from the regular singular
//!   point with far-field phase extraction.

pub mod cfrac;
mod dd;
pub mod frobenius;
mod hiprec;
pub mod model;
pub mod monodromy;
pub mod oracle;
mod quad;
mod series;
pub mod specfun;
pub mod wkb;

pub use model::{classify_case, classify_case_cfg, coeff_f, CaseTag, ModeParams, WkbCase};
pub use wkb::PhaseEstimate;

/// Numeric knobs shared across modules. All tolerances are positive.
#[derive(Debug, Clone)]
pub struct Config {
    /// Relative tolerance for detecting a = 1 in the case classification.
    pub tol_case: f64,
    /// Continued-fraction depth-doubling stationarity tolerance.
    pub cf_tol: f64,
    /// Relative width of the bisection interval for eigenvalue refinement.
    pub beta_tol: f64,
    /// Local error tolerance for the direct ODE integration.
    pub ode_tol: f64,
    /// Far-field fit residual tolerance (radians).
    pub fit_tol: f64,
    /// Relative tolerance for adaptive quadrature.
    pub quad_tol: f64,
    /// Maximum number of adaptive quadrature subdivisions.
    pub quad_max_subdiv: usize,
    /// Frobenius minimality: |a_{k+1}/a_k| threshold for the minimal branch.
    pub ratio_threshold: f64,
    /// Frobenius minimality: default truncation depth.
    pub frobenius_k: usize,
    /// Seed offset for the direct integration (the ODE coefficient vanishes
    /// at the origin, so integration starts from the series at this point).
    pub zeta_seed: f64,
    /// Number of series terms used to seed the integration.
    pub seed_terms: usize,
    /// Relative stationarity tolerance for the monodromy constant.
    pub p_tol: f64,
    /// Maximum recurrence depth for the monodromy constant.
    pub p_kmax: usize,
    /// Far-field target: fit window ends where 2*sqrt(beta*z) reaches this.
    pub far_field_phase: f64,
    /// Ratio z_hi/z_lo of the far-field fit window.
    pub window_ratio: f64,
    /// Number of sample points across the fit window.
    pub window_samples: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            tol_case: 1e-12,
            cf_tol: 1e-12,
            beta_tol: 1e-10,
            ode_tol: 1e-11,
            fit_tol: 5e-3,
            quad_tol: 1e-10,
            quad_max_subdiv: 4000,
            ratio_threshold: 0.05,
            frobenius_k: 400,
            zeta_seed: 1e-3,
            seed_terms: 10,
            p_tol: 1e-10,
            p_kmax: 200_000,
            far_field_phase: 40.0 * std::f64::consts::PI,
            window_ratio: 4.0,
            window_samples: 256,
        }
    }
}

/// Reduce a phase to the representative in (-pi/2, pi/2]. Phases here are
/// only determined modulo pi (an overall sign flips the eigenfunction).
pub fn phase_mod_pi(x: f64) -> f64 {
    let mut r = x.rem_euclid(std::f64::consts::PI);
    if r > std::f64::consts::FRAC_PI_2 {
        r -= std::f64::consts::PI;
    }
    r
}

/// |a - b| reduced modulo pi, in [0, pi/2].
pub fn phase_diff_mod_pi(a: f64, b: f64) -> f64 {
    phase_mod_pi(a - b).abs()
}
