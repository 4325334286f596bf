//! Truncated Laurent series arithmetic in one variable.
//!
//! The WKB error-control functions are differences of individually singular
//! terms whose poles cancel analytically. Evaluating them near the singular
//! points in floating point is hopeless; instead the local expansions are
//! built here by series arithmetic and the analytically-zero pole
//! coefficients are chopped explicitly.

/// Coefficients c[k] of x^(val + k), truncated after c.len() terms.
#[derive(Debug, Clone)]
pub struct LSeries {
    pub val: i32,
    pub c: Vec<f64>,
}

impl LSeries {
    pub fn new(val: i32, c: Vec<f64>) -> Self {
        LSeries { val, c }
    }

    /// Series for a polynomial sum p[k] x^k, padded to `len` terms.
    pub fn from_poly(p: &[f64], len: usize) -> Self {
        let mut c = p.to_vec();
        c.resize(len.max(p.len()), 0.0);
        LSeries { val: 0, c }
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    /// Highest power with a stored coefficient: val + len - 1.
    fn top(&self) -> i32 {
        self.val + self.c.len() as i32 - 1
    }

    pub fn scale(&self, s: f64) -> Self {
        LSeries {
            val: self.val,
            c: self.c.iter().map(|x| x * s).collect(),
        }
    }

    /// Multiply by x^k.
    pub fn shift(&self, k: i32) -> Self {
        LSeries {
            val: self.val + k,
            c: self.c.clone(),
        }
    }

    pub fn add(&self, other: &LSeries) -> Self {
        let val = self.val.min(other.val);
        let top = self.top().min(other.top());
        let len = (top - val + 1).max(0) as usize;
        let mut c = vec![0.0; len];
        for (k, ck) in c.iter_mut().enumerate() {
            let p = val + k as i32;
            let a = self.coeff(p);
            let b = other.coeff(p);
            *ck = a + b;
        }
        LSeries { val, c }
    }

    pub fn sub(&self, other: &LSeries) -> Self {
        self.add(&other.scale(-1.0))
    }

    /// Coefficient of x^p (zero outside the stored window).
    pub fn coeff(&self, p: i32) -> f64 {
        let k = p - self.val;
        if k < 0 || k as usize >= self.c.len() {
            0.0
        } else {
            self.c[k as usize]
        }
    }

    pub fn mul(&self, other: &LSeries) -> Self {
        let len = self.c.len().min(other.c.len());
        let mut c = vec![0.0; len];
        for i in 0..len {
            for j in 0..len - i {
                c[i + j] += self.c[i] * other.c[j];
            }
        }
        LSeries {
            val: self.val + other.val,
            c,
        }
    }

    /// Reciprocal; the leading coefficient must be nonzero.
    pub fn recip(&self) -> Self {
        let c0 = self.c[0];
        assert!(c0 != 0.0, "recip of series with zero leading coefficient");
        let len = self.c.len();
        let mut r = vec![0.0; len];
        r[0] = 1.0 / c0;
        for k in 1..len {
            let mut s = 0.0;
            for j in 1..=k {
                s += self.c[j] * r[k - j];
            }
            r[k] = -s / c0;
        }
        LSeries {
            val: -self.val,
            c: r,
        }
    }

    pub fn div(&self, other: &LSeries) -> Self {
        self.mul(&other.recip())
    }

    /// d/dx.
    pub fn derivative(&self) -> Self {
        let mut c = vec![0.0; self.c.len()];
        for (k, ck) in self.c.iter().enumerate() {
            let p = self.val + k as i32;
            c[k] = ck * p as f64;
        }
        // series now represents sum c_k p x^(p-1)
        LSeries {
            val: self.val - 1,
            c,
        }
    }

    /// Raise a valuation-zero series with positive leading coefficient to a
    /// real power.
    pub fn powf(&self, p: f64) -> Self {
        assert_eq!(self.val, 0, "powf requires valuation 0");
        let c0 = self.c[0];
        assert!(c0 > 0.0, "powf requires positive leading coefficient");
        let len = self.c.len();
        // u = self / c0 (leading term 1)
        let u: Vec<f64> = self.c.iter().map(|x| x / c0).collect();
        // r = u^p via r' u = p u' r  =>  k r_k = sum_{j=1}^{k} (p j - (k-j)) u_j r_{k-j}
        let mut r = vec![0.0; len];
        r[0] = 1.0;
        for k in 1..len {
            let mut s = 0.0;
            for j in 1..=k {
                s += (p * j as f64 - (k - j) as f64) * u[j] * r[k - j];
            }
            r[k] = s / k as f64;
        }
        let scale = c0.powf(p);
        LSeries {
            val: 0,
            c: r.iter().map(|x| x * scale).collect(),
        }
    }

    /// Termwise antiderivative with constant 0. Fails on a 1/x term.
    pub fn integrate(&self) -> Self {
        let mut c = vec![0.0; self.c.len()];
        for (k, ck) in self.c.iter().enumerate() {
            let p = self.val + k as i32;
            assert!(p != -1 || *ck == 0.0, "cannot integrate 1/x term");
            if p != -1 {
                c[k] = ck / (p + 1) as f64;
            }
        }
        LSeries {
            val: self.val + 1,
            c,
        }
    }

    /// Drop stored coefficients below power `p` (used after analytically
    /// guaranteed pole cancellations; asserts they are small).
    pub fn chop_below(&self, p: i32, scale: f64) -> Self {
        let mut s = self.clone();
        while s.val < p {
            debug_assert!(
                s.c[0].abs() <= 1e-7 * scale.max(1e-300),
                "chopped coefficient not negligible: {} at power {}",
                s.c[0],
                s.val
            );
            s.c.remove(0);
            s.val += 1;
        }
        s
    }

    /// Evaluate at x (Horner on the truncated tail, times x^val).
    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for ck in self.c.iter().rev() {
            acc = acc * x + ck;
        }
        acc * x.powi(self.val)
    }
}

/// Taylor coefficients of a polynomial around x0: p(x0 + t) as a poly in t.
///
/// Repeated in-place synthetic division by (x - x0); pass k leaves the
/// coefficient of t^k in slot k.
pub fn poly_shift(p: &[f64], x0: f64) -> Vec<f64> {
    let mut a = p.to_vec();
    let n = a.len();
    for k in 0..n.saturating_sub(1) {
        for j in (k..n - 1).rev() {
            a[j] += x0 * a[j + 1];
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_shift_cubic() {
        // p(x) = x^3 - 2x + 1 around x0 = 2: p(2+t) = 5 + 10t + 6t^2 + t^3
        let s = poly_shift(&[1.0, -2.0, 0.0, 1.0], 2.0);
        assert!((s[0] - 5.0).abs() < 1e-12);
        assert!((s[1] - 10.0).abs() < 1e-12);
        assert!((s[2] - 6.0).abs() < 1e-12);
        assert!((s[3] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn recip_mul_is_one() {
        let s = LSeries::from_poly(&[2.0, -1.0, 0.5, 0.25], 8);
        let p = s.mul(&s.recip());
        assert!((p.c[0] - 1.0).abs() < 1e-14);
        for k in 1..p.len() {
            assert!(p.c[k].abs() < 1e-13, "k={} c={}", k, p.c[k]);
        }
    }

    #[test]
    fn powf_squares() {
        let s = LSeries::from_poly(&[4.0, 1.0, -0.3], 8);
        let r = s.powf(0.5);
        let sq = r.mul(&r);
        for k in 0..6 {
            assert!((sq.coeff(k as i32) - s.coeff(k as i32)).abs() < 1e-12);
        }
    }

    #[test]
    fn eval_matches_function() {
        // 1/(1+x) around 0
        let s = LSeries::from_poly(&[1.0, 1.0], 16).recip();
        let x = 0.1;
        assert!((s.eval(x) - 1.0 / (1.0 + x)).abs() < 1e-14);
    }

    #[test]
    fn laurent_pole_arithmetic() {
        // (1/x) * x = 1
        let inv_x = LSeries::new(-1, vec![1.0, 0.0, 0.0, 0.0]);
        let x = LSeries::new(1, vec![1.0, 0.0, 0.0, 0.0]);
        let p = inv_x.mul(&x);
        assert_eq!(p.val, 0);
        assert!((p.c[0] - 1.0).abs() < 1e-15);
    }
}
