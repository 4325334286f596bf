//! Airy functions Ai, Bi, their derivatives, and the modulus/weight/phase
//! factorization Ai = (M/E) sin(theta), Bi = E M cos(theta).
//!
//! Power series in double-double for |x| <= 9, asymptotic expansions beyond
//! (at |x| = 9 the optimally truncated asymptotic series is accurate to
//! ~1e-15).

use crate::dd::Dd;
use std::f64::consts::PI;

/// Ai(0) = 3^(-2/3)/Gamma(2/3), dd split
const AI0: Dd = Dd {
    hi: 0.3550280538878172,
    lo: 2.05233632436212e-17,
};
/// Ai'(0) = -3^(-1/3)/Gamma(1/3), dd split of the magnitude
const AIP0: Dd = Dd {
    hi: 0.2588194037928068,
    lo: -2.522243111610832e-17,
};
/// Bi(0) = sqrt(3) Ai(0)
const BI0: Dd = Dd {
    hi: 0.6149266274460007,
    lo: 5.0899207794891416e-17,
};
/// Bi'(0) = sqrt(3) |Ai'(0)|
const BIP0: Dd = Dd {
    hi: 0.4482883573538264,
    lo: -2.5363237774417305e-17,
};

const SWITCH: f64 = 9.0;

/// Power-series evaluation through the entire pair f (f(0)=1, f'(0)=0) and
/// g (g(0)=0, g'(0)=1) of w'' = x w. The Ai combination cancels ~e^(2 xi)
/// between the two, so everything including the final linear combination
/// stays in dd.
fn airy_series(x: f64) -> (f64, f64, f64, f64) {
    if x == 0.0 {
        return (AI0.to_f64(), BI0.to_f64(), -AIP0.to_f64(), BIP0.to_f64());
    }
    let mut fterm = Dd::ONE;
    let mut f = Dd::ONE;
    let mut fp = Dd::ZERO;
    let mut gterm = Dd::from(x);
    let mut g = gterm;
    let mut gp = Dd::ONE;
    // term_k of f has ratio x^3/(3k(3k-1)); termwise derivative is
    // (3k/x) term_k. Same for g with ratio x^3/(3k(3k+1)). The updates stay
    // in dd throughout: f64-rounded per-term ratios would be amplified by
    // the e^(2 xi) cancellation of the Ai combinations.
    for k in 1..400 {
        let kk = k as f64;
        fterm = fterm
            .mul_f64(x)
            .mul_f64(x)
            .mul_f64(x)
            .div_f64(3.0 * kk * (3.0 * kk - 1.0));
        f = f.add(fterm);
        fp = fp.add(fterm.mul_f64(3.0 * kk).div_f64(x));
        gterm = gterm
            .mul_f64(x)
            .mul_f64(x)
            .mul_f64(x)
            .div_f64(3.0 * kk * (3.0 * kk + 1.0));
        g = g.add(gterm);
        gp = gp.add(gterm.mul_f64(3.0 * kk + 1.0).div_f64(x));
        if fterm.abs() < 1e-40 * f.abs().max(1e-25) && gterm.abs() < 1e-40 * g.abs().max(1e-25)
        {
            break;
        }
    }
    let ai = AI0.mul(f).sub(AIP0.mul(g)).to_f64();
    let bi = BI0.mul(f).add(BIP0.mul(g)).to_f64();
    let aip = AI0.mul(fp).sub(AIP0.mul(gp)).to_f64();
    let bip = BI0.mul(fp).add(BIP0.mul(gp)).to_f64();
    (ai, bi, aip, bip)
}

/// u_k coefficients of the Airy asymptotic series, by recurrence
/// u_{k+1} = u_k (6k+5)(6k+3)(6k+1) / (216 (2k+1)(k+1)) -- wait, standard:
/// u_k = (6k-5)(6k-3)(6k-1)/((2k-1) 216 k) * u_{k-1}; v_k = -u_k (6k+1)/(6k-1).
fn airy_uv(max_k: usize) -> (Vec<f64>, Vec<f64>) {
    let mut u = vec![1.0];
    let mut v = vec![1.0];
    for k in 1..=max_k {
        let kf = k as f64;
        let uk = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
        u.push(uk);
        v.push(-uk * (6.0 * kf + 1.0) / (6.0 * kf - 1.0));
    }
    (u, v)
}

/// Asymptotics for x >= SWITCH.
fn airy_asympt_pos(x: f64) -> (f64, f64, f64, f64) {
    let xi = 2.0 / 3.0 * x.powf(1.5);
    let (u, v) = airy_uv(40);
    // Ai  ~ e^-xi/(2 sqrt(pi) x^(1/4)) sum (-1)^k u_k xi^-k
    // Bi  ~ e^+xi/(  sqrt(pi) x^(1/4)) sum        u_k xi^-k
    // Ai' ~ -x^(1/4) e^-xi/(2 sqrt(pi)) sum (-1)^k v_k xi^-k
    // Bi' ~  x^(1/4) e^+xi/(  sqrt(pi)) sum        v_k xi^-k
    let mut sa = 0.0;
    let mut sb = 0.0;
    let mut sap = 0.0;
    let mut sbp = 0.0;
    let mut pw = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..u.len() {
        let t = u[k] * pw;
        if t.abs() >= last {
            break;
        }
        last = t.abs();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sa += sign * t;
        sb += t;
        sap += sign * v[k] * pw;
        sbp += v[k] * pw;
        pw /= xi;
        if t.abs() < 1e-18 {
            break;
        }
    }
    let x4 = x.powf(0.25);
    let sp = PI.sqrt();
    let em = (-xi).exp();
    let ep = xi.exp();
    (
        em / (2.0 * sp * x4) * sa,
        ep / (sp * x4) * sb,
        -x4 * em / (2.0 * sp) * sap,
        x4 * ep / sp * sbp,
    )
}

/// Asymptotics for x <= -SWITCH.
fn airy_asympt_neg(x: f64) -> (f64, f64, f64, f64) {
    let t = -x;
    let xi = 2.0 / 3.0 * t.powf(1.5);
    let (u, v) = airy_uv(40);
    // even/odd splits of the series
    let mut ce = 0.0; // sum (-1)^k u_{2k} xi^{-2k}
    let mut co = 0.0; // sum (-1)^k u_{2k+1} xi^{-2k-1}
    let mut de = 0.0;
    let mut dov = 0.0;
    let mut pw = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..u.len() {
        let term = u[k] * pw;
        if term.abs() >= last {
            break;
        }
        last = term.abs();
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            ce += sign * term;
            de += sign * v[k] * pw;
        } else {
            co += sign * term;
            dov += sign * v[k] * pw;
        }
        pw /= xi;
        if term.abs() < 1e-18 {
            break;
        }
    }
    let x4 = t.powf(0.25);
    let sp = PI.sqrt();
    let (s, c) = (xi + 0.25 * PI).sin_cos();
    // DLMF 9.7.9-9.7.12
    let ai = (s * ce - c * co) / (sp * x4);
    let bi = (c * ce + s * co) / (sp * x4);
    let aip = -x4 / sp * (c * de + s * dov);
    let bip = x4 / sp * (s * de - c * dov);
    (ai, bi, aip, bip)
}

fn airy_all(x: f64) -> (f64, f64, f64, f64) {
    if x.abs() <= SWITCH {
        airy_series(x)
    } else if x > 0.0 {
        airy_asympt_pos(x)
    } else {
        airy_asympt_neg(x)
    }
}

pub fn airy_ai(x: f64) -> f64 {
    airy_all(x).0
}

pub fn airy_bi(x: f64) -> f64 {
    airy_all(x).1
}

pub fn airy_ai_prime(x: f64) -> f64 {
    airy_all(x).2
}

pub fn airy_bi_prime(x: f64) -> f64 {
    airy_all(x).3
}

/// Modulus/weight/phase: Ai = (M/E) sin(theta), Bi = E M cos(theta).
#[derive(Debug, Clone, Copy)]
pub struct AiryAux {
    pub x: f64,
    pub m: f64,
    pub e: f64,
    pub theta: f64,
}

/// Root of Ai(x) = Bi(x) (mpmath: -0.3660463280805350284).
pub const AIRY_SPLICE: f64 = -0.36604632808053503;

/// Auxiliary modulus/weight/phase at any real x. For x >= the splice point
/// E = sqrt(Bi/Ai) and theta = pi/4; below it E = 1.
pub fn airy_aux(x: f64) -> AiryAux {
    let (ai, bi, _, _) = airy_all(x);
    if x >= AIRY_SPLICE {
        AiryAux {
            x,
            m: (2.0 * ai * bi).sqrt(),
            e: (bi / ai).sqrt(),
            theta: 0.25 * PI,
        }
    } else {
        AiryAux {
            x,
            m: (ai * ai + bi * bi).sqrt(),
            e: 1.0,
            theta: ai.atan2(bi),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // mpmath, 20 digits
    const AIRY_REF: &[(f64, f64, f64, f64, f64)] = &[
        (-12.0, -0.0665551750543731294, -0.2957199120780730567, 1.0231104533679707299, -0.2367321978311233163),
        (-8.0, -0.0527050503563862026, -0.3312515807511378599, 0.9355609381983065510, -0.1594504978129813893),
        (-5.0, 0.3507610090241143198, -0.1383691349016005768, 0.3271928185544431368, 0.7784117730018992461),
        (-2.0, 0.2274074282016855760, -0.4123025879563984880, 0.6182590207416910414, 0.2787951669211695227),
        (-0.5, 0.4757280916105395888, 0.3803526597510538502, -0.2040816703395473861, 0.5059337136238471666),
        (0.0, 0.3550280538878172393, 0.6149266274460007352, -0.2588194037928067984, 0.4482883573538263579),
        (0.5, 0.2316936064808334898, 0.8542770431031554933, -0.2249105326646838931, 0.5445725641405923018),
        (1.0, 0.1352924163128814155, 1.2074235949528712594, -0.1591474412967932127, 0.9324359333927756330),
        (2.0, 0.0349241304232743791, 3.2980949999782147103, -0.0530903844336536317, 4.1006820499328898894),
        (5.0, 1.0834442813607441526e-4, 657.79204417117118244, -2.4741389086846243236e-4, 1435.8190802179825187),
        (8.5, 1.0997009755195506509e-8, 4965319.5414713019811, -3.2377254404476022559e-8, 14326301.030662058334),
        (9.5, 5.3302637046174916266e-10, 96892265.580451092832, -1.6566394593740666263e-9, 296034763.86800503867),
        (12.0, 1.393184688875360839e-13, 329807225829.07417618, -4.854736554985308463e-13, 1135507502443.3707424),
    ];

    #[test]
    fn airy_reference() {
        for &(x, ai, bi, aip, bip) in AIRY_REF {
            let scale_a = ai.abs().max(1e-300);
            let scale_b = bi.abs();
            assert!((airy_ai(x) - ai).abs() / scale_a < 1e-12, "Ai({x})");
            assert!((airy_bi(x) - bi).abs() / scale_b < 1e-12, "Bi({x})");
            assert!((airy_ai_prime(x) - aip).abs() / aip.abs() < 1e-12, "Ai'({x})");
            assert!((airy_bi_prime(x) - bip).abs() / bip.abs() < 1e-12, "Bi'({x})");
        }
    }

    #[test]
    fn wronskian() {
        // Ai Bi' - Ai' Bi = 1/pi
        for &x in &[0.0, 2.0, -2.0, 5.0, -7.0, 8.9, -12.5, 15.0] {
            let w = airy_ai(x) * airy_bi_prime(x) - airy_ai_prime(x) * airy_bi(x);
            assert!((w - 1.0 / PI).abs() < 1e-12, "x={x}: {w}");
        }
    }

    #[test]
    fn aux_identities() {
        for i in 0..100 {
            let x = -10.0 + 0.17 * i as f64;
            let a = airy_aux(x);
            let ai = a.m / a.e * a.theta.sin();
            let bi = a.e * a.m * a.theta.cos();
            assert!((ai - airy_ai(x)).abs() < 1e-10, "Ai recon x={x}");
            assert!((bi - airy_bi(x)).abs() < 1e-10, "Bi recon x={x}");
        }
        // splice point is where Ai = Bi
        let d = airy_ai(AIRY_SPLICE) - airy_bi(AIRY_SPLICE);
        assert!(d.abs() < 1e-13);
    }
}
