//! Dormand-Prince 5(4) for the 2-dimensional first-order systems used here,
//! with step clamping onto requested output points.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum OdeError {
    #[error("step size collapsed at t = {0} (h = {1:e})")]
    StepCollapse(f64, f64),
}

#[derive(Debug, Clone, Copy, Default)]
pub struct OdeStats {
    pub steps: usize,
    pub rejected: usize,
}

const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrate y' = f(t, y) from t0, recording y at each of `outputs`
/// (strictly increasing, all > t0). Adaptive steps clamp onto the output
/// points, so recorded values are genuine solution points.
pub fn integrate_path<F: Fn(f64, [f64; 2]) -> [f64; 2]>(
    f: F,
    t0: f64,
    y0: [f64; 2],
    outputs: &[f64],
    rtol: f64,
    atol: f64,
) -> Result<(Vec<[f64; 2]>, OdeStats), OdeError> {
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, y);
    let mut h = 1e-4 * (1.0 + t.abs());
    let mut stats = OdeStats::default();
    let mut out = Vec::with_capacity(outputs.len());
    let mut next_out = 0usize;

    while next_out < outputs.len() {
        let target = outputs[next_out];
        debug_assert!(target > t0);
        let mut clamped = false;
        if t + h >= target {
            h = target - t;
            clamped = true;
        }
        if h <= f64::EPSILON * t.abs().max(1.0) {
            // exactly on the output point
            out.push(y);
            next_out += 1;
            h = 1e-3 * (1.0 + t.abs());
            continue;
        }

        // stages
        let add = |y: [f64; 2], ks: &[[f64; 2]], cs: &[f64], h: f64| {
            let mut r = y;
            for (k, c) in ks.iter().zip(cs) {
                r[0] += h * c * k[0];
                r[1] += h * c * k[1];
            }
            r
        };
        let k2 = f(t + C[0] * h, add(y, &[k1], &A2, h));
        let k3 = f(t + C[1] * h, add(y, &[k1, k2], &A3, h));
        let k4 = f(t + C[2] * h, add(y, &[k1, k2, k3], &A4, h));
        let k5 = f(t + C[3] * h, add(y, &[k1, k2, k3, k4], &A5, h));
        let k6 = f(t + C[4] * h, add(y, &[k1, k2, k3, k4, k5], &A6, h));
        let ks = [k1, k2, k3, k4, k5, k6, [0.0, 0.0]];
        let y5 = add(y, &ks[..6], &B[..6], h);
        let k7 = f(t + h, y5);
        let ks = [k1, k2, k3, k4, k5, k6, k7];
        let y4 = add(y, &ks, &B4, h);

        // error norm
        let mut err = 0.0f64;
        for i in 0..2 {
            let sc = atol + rtol * y[i].abs().max(y5[i].abs());
            let e = (y5[i] - y4[i]) / sc;
            err += e * e;
        }
        let err = (err / 2.0).sqrt();

        if err <= 1.0 {
            t += h;
            y = y5;
            k1 = k7; // FSAL
            stats.steps += 1;
            if clamped {
                out.push(y);
                next_out += 1;
            }
        } else {
            stats.rejected += 1;
        }
        let fac = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
        h *= fac;
        if h < 1e-14 * t.abs().max(1.0) {
            return Err(OdeError::StepCollapse(t, h));
        }
    }
    Ok((out, stats))
}
