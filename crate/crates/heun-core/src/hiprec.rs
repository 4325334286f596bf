//! Minimal arbitrary-precision binary floats (truncating, fixed 256-bit
//! mantissa).
//!
//! The minimal-solution certificate needs the three-term recurrence run at
//! an eigenvalue known far beyond f64: the minimal branch decays like
//! (2*beta)^k / (k!)^2 and any perturbation of size eps re-grows the generic
//! branch once the minimal one drops below eps. For eigenvalues near
//! beta ~ 200 that crossover sits around 1e-40, out of reach of f64, so the
//! continued-fraction bisection and the recurrence both run here.

use num_bigint::BigInt;
use num_bigint::Sign;

const PREC_BITS: u64 = 256;

/// value = mant * 2^exp
#[derive(Debug, Clone)]
pub struct Bf {
    mant: BigInt,
    exp: i64,
}

impl Bf {
    pub fn zero() -> Bf {
        Bf {
            mant: BigInt::from(0),
            exp: 0,
        }
    }

    pub fn from_f64(x: f64) -> Bf {
        assert!(x.is_finite());
        if x == 0.0 {
            return Bf::zero();
        }
        // exact decomposition of the f64
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let exp_raw = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if exp_raw == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp_raw - 1075)
        };
        Bf {
            mant: BigInt::from(sign) * BigInt::from(mant),
            exp,
        }
    }

    pub fn from_i64(x: i64) -> Bf {
        Bf {
            mant: BigInt::from(x),
            exp: 0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.mant.sign() == Sign::NoSign {
            return 0.0;
        }
        let bits = self.mant.bits();
        // keep top 64 bits for the conversion
        let drop = bits.saturating_sub(64) as i64;
        let top: BigInt = &self.mant >> drop;
        let (sign, digits) = top.to_u64_digits();
        let m = digits[0] as f64;
        let s = if sign == Sign::Minus { -1.0 } else { 1.0 };
        // scale by 2^(exp+drop) in chunks so subnormals and the extremes of
        // the f64 exponent range stay exact
        let mut v = s * m;
        let mut e = self.exp + drop;
        while e > 511 {
            v *= 2f64.powi(511);
            e -= 511;
        }
        while e < -511 {
            v *= 2f64.powi(-511);
            e += 511;
        }
        v * 2f64.powi(e as i32)
    }

    fn round(mut self) -> Bf {
        let bits = self.mant.bits();
        if bits > PREC_BITS {
            let drop = (bits - PREC_BITS) as i64;
            self.mant = &self.mant >> drop;
            self.exp += drop;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.mant.sign() == Sign::NoSign
    }

    pub fn is_negative(&self) -> bool {
        self.mant.sign() == Sign::Minus
    }

    pub fn neg(&self) -> Bf {
        Bf {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Bf {
        if self.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn add(&self, other: &Bf) -> Bf {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (lo, hi) = if self.exp <= other.exp {
            (self, other)
        } else {
            (other, self)
        };
        let shift = hi.exp - lo.exp;
        // beyond this the smaller operand is invisible at working precision
        if shift > (PREC_BITS as i64) + hi.mant.bits() as i64 + 8 {
            return hi.clone();
        }
        let mant = (&hi.mant << shift) + &lo.mant;
        Bf { mant, exp: lo.exp }.round()
    }

    pub fn sub(&self, other: &Bf) -> Bf {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Bf) -> Bf {
        Bf {
            mant: &self.mant * &other.mant,
            exp: self.exp + other.exp,
        }
        .round()
    }

    pub fn div(&self, other: &Bf) -> Bf {
        assert!(!other.is_zero(), "hiprec division by zero");
        if self.is_zero() {
            return Bf::zero();
        }
        let extra = (PREC_BITS + 64) as i64;
        let num = &self.mant << extra;
        Bf {
            mant: num / &other.mant,
            exp: self.exp - other.exp - extra,
        }
        .round()
    }

    /// self < other
    pub fn lt(&self, other: &Bf) -> bool {
        self.sub(other).is_negative()
    }

    /// Crude magnitude in log2 (for under/overflow guards).
    pub fn log2_abs(&self) -> i64 {
        if self.is_zero() {
            return i64::MIN / 2;
        }
        self.mant.bits() as i64 + self.exp
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_f64() {
        for &x in &[1.0, -3.5, 0.1, 1e300, -1e-300, std::f64::consts::PI] {
            let b = Bf::from_f64(x);
            assert_eq!(b.to_f64(), x, "roundtrip failed for {x}");
        }
    }

    #[test]
    fn arithmetic() {
        let a = Bf::from_f64(1.5);
        let b = Bf::from_f64(0.25);
        assert_eq!(a.add(&b).to_f64(), 1.75);
        assert_eq!(a.sub(&b).to_f64(), 1.25);
        assert_eq!(a.mul(&b).to_f64(), 0.375);
        assert_eq!(a.div(&b).to_f64(), 6.0);
    }

    #[test]
    fn deep_cancellation() {
        // (1 + 2^-200) - 1 survives at 256-bit precision
        let one = Bf::from_f64(1.0);
        let tiny = Bf {
            mant: BigInt::from(1),
            exp: -200,
        };
        let s = one.add(&tiny).sub(&one);
        assert!((s.to_f64().log2() + 200.0).abs() < 1e-9);
    }

    #[test]
    fn exponent_gap() {
        let big = Bf::from_f64(1e100);
        let small = Bf::from_f64(1e-280);
        let s = big.add(&small);
        assert_eq!(s.to_f64(), 1e100);
    }
}
