//! Universal constants entering the WKB error bounds: suprema of weighted
//! squares of the Airy/Bessel modulus functions.
//!
//! The values are frozen in `data/olver_constants.txt` (generated by the
//! scan in this module; the `regenerate_constants` test reproduces them).

use super::airy::airy_aux;
use super::bessel::{bessel_aux, bessel_j0};
use std::f64::consts::PI;
use std::sync::OnceLock;

#[derive(Debug, Clone, Copy)]
pub struct OlverConstants {
    /// sup_x pi |x|^(1/2) M^2(x) over the Airy modulus.
    pub lambda_airy: f64,
    /// sup_{x>=0} pi x M0^2(x); the limit value 2 is the supremum.
    pub lambda00: f64,
    /// sup_{x>=0} pi x M0^2(x) |cos theta0(x)|.
    pub lambda01: f64,
    /// sup_x pi Omega0(x) M0^2(x).
    pub l00: f64,
    /// sup_x pi Omega0(x) |J0(x)| E0(x) M0(x).
    pub l01: f64,
}

/// Omega0(x) = (1 + x)/ln(e + 1/x), the weight of the case-III bound.
pub fn omega0(x: f64) -> f64 {
    (1.0 + x) / (std::f64::consts::E + 1.0 / x).ln()
}

/// Parsed once from the checked-in key=value file.
pub fn olver_constants() -> &'static OlverConstants {
    static CONSTS: OnceLock<OlverConstants> = OnceLock::new();
    CONSTS.get_or_init(|| {
        let text = include_str!("../../data/olver_constants.txt");
        let mut map = std::collections::HashMap::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').expect("constants file: key=value");
            map.insert(k.trim().to_string(), v.trim().parse::<f64>().unwrap());
        }
        let get = |k: &str| *map.get(k).unwrap_or_else(|| panic!("missing constant {k}"));
        OlverConstants {
            lambda_airy: get("lambda_airy"),
            lambda00: get("lambda00"),
            lambda01: get("lambda01"),
            l00: get("l00"),
            l01: get("l01"),
        }
    })
}

/// Golden-section refinement of a maximum inside [a, b].
fn golden_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> (f64, f64) {
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
        if (b - a).abs() < 1e-12 * (1.0 + a.abs()) {
            break;
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Dense grid scan plus golden refinement of the best bracket.
fn scan_max<F: Fn(f64) -> f64>(f: F, grid: &[f64]) -> (f64, f64) {
    let mut best_i = 0;
    let mut best = f64::NEG_INFINITY;
    for (i, &x) in grid.iter().enumerate() {
        let v = f(x);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let lo = grid[best_i.saturating_sub(1)];
    let hi = grid[(best_i + 1).min(grid.len() - 1)];
    let (x, v) = golden_max(&f, lo, hi);
    if v > best {
        (x, v)
    } else {
        (grid[best_i], best)
    }
}

fn lin_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect()
}

fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let (la, lb) = (a.ln(), b.ln());
    (0..=n)
        .map(|i| (la + (lb - la) * i as f64 / n as f64).exp())
        .collect()
}

/// pi |x|^(1/2) M^2(x), Airy.
pub fn airy_lambda_density(x: f64) -> f64 {
    let a = airy_aux(x);
    PI * x.abs().sqrt() * a.m * a.m
}

/// pi x M0^2(x), Bessel.
pub fn bessel_lambda00_density(x: f64) -> f64 {
    let a = bessel_aux(x).unwrap();
    PI * x * a.m0 * a.m0
}

/// pi x M0^2(x) |cos theta0(x)|.
pub fn bessel_lambda01_density(x: f64) -> f64 {
    let a = bessel_aux(x).unwrap();
    PI * x * a.m0 * a.m0 * a.theta0.cos().abs()
}

/// pi Omega0(x) M0^2(x).
pub fn bessel_l00_density(x: f64) -> f64 {
    let a = bessel_aux(x).unwrap();
    PI * omega0(x) * a.m0 * a.m0
}

/// pi Omega0(x) |J0(x)| E0(x) M0(x).
pub fn bessel_l01_density(x: f64) -> f64 {
    let a = bessel_aux(x).unwrap();
    PI * omega0(x) * bessel_j0(x).abs() * a.e0 * a.m0
}

/// Run the supremum scans. `lambda00`/`lambda01` approach their supremum 2
/// monotonically at infinity, so the scan only verifies they stay below it.
pub fn scan_constants() -> OlverConstants {
    let (_, lambda_airy) = scan_max(airy_lambda_density, &lin_grid(0.05, 6.0, 4000));
    // verify the negative side and the tail stay below
    let (_, neg_side) = scan_max(airy_lambda_density, &lin_grid(-60.0, 0.0, 6000));
    assert!(neg_side <= lambda_airy + 1e-9);

    let grid = log_grid(1e-8, 2000.0, 8000);
    let (_, m00) = scan_max(bessel_lambda00_density, &grid);
    let (_, m01) = scan_max(bessel_lambda01_density, &grid);
    assert!(m00 <= 2.0 + 1e-9 && m00 > 1.999);
    assert!(m01 <= 2.0 + 1e-9);
    let (_, l00) = scan_max(bessel_l00_density, &grid);
    let (_, l01) = scan_max(bessel_l01_density, &grid);
    OlverConstants {
        lambda_airy,
        lambda00: 2.0,
        lambda01: 2.0,
        l00,
        l01,
    }
}
