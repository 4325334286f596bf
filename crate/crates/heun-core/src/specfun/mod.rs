//! Self-contained special functions: Bessel J0/Y0 (and order one), Airy
//! Ai/Bi, elliptic integrals, the complex Kummer/Whittaker function, the
//! argument of Gamma on the critical line, and the Olver auxiliary
//! modulus/weight/phase machinery with its universal constants.

mod airy;
mod bessel;
mod elliptic;
mod gamma;
mod kummer;
mod olver;

pub use airy::{airy_ai, airy_ai_prime, airy_aux, airy_bi, airy_bi_prime, AiryAux, AIRY_SPLICE};
pub use bessel::{bessel_aux, bessel_j0, bessel_j1, bessel_x0, bessel_y0, bessel_y1, BesselAux};
pub use elliptic::{ellip_e, ellip_e_agm, ellip_e_inc, ellip_f, ellip_k, ellip_k_agm};
pub use gamma::arg_gamma_half_line;
pub use kummer::{kummer_m, whittaker_m0, KummerResult};
pub use olver::{olver_constants, omega0, scan_constants, OlverConstants};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecFunError {
    #[error("domain error: {0}")]
    Domain(String),
}

/// Amplitude/modulus pair for the Legendre elliptic integrals.
#[derive(Debug, Clone, Copy)]
pub struct EllipticArgs {
    pub phi: f64,
    pub k: f64,
}

impl EllipticArgs {
    pub fn new(phi: f64, k: f64) -> Result<Self, SpecFunError> {
        if !(0.0..=std::f64::consts::FRAC_PI_2 + 1e-14).contains(&phi) {
            return Err(SpecFunError::Domain(format!("phi out of [0, pi/2]: {phi}")));
        }
        if !(0.0..=1.0).contains(&k) {
            return Err(SpecFunError::Domain(format!("k out of [0, 1]: {k}")));
        }
        Ok(EllipticArgs { phi, k })
    }

    pub fn f(&self) -> Result<f64, SpecFunError> {
        ellip_f(self.phi, self.k)
    }

    pub fn e(&self) -> Result<f64, SpecFunError> {
        ellip_e_inc(self.phi, self.k)
    }
}
