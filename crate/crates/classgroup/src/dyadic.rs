//! Arbitrary-precision dyadic numbers m * 2^e with directed rounding.
//!
//! These are the endpoints of the certified intervals in [`crate::interval`].
//! Addition, subtraction and multiplication are exact; rounding is applied
//! explicitly, and division and square root take a rounding direction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

/// Rounding direction for inexact operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dir {
    Down, // toward -infinity
    Up,   // toward +infinity
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::Down => Dir::Up,
            Dir::Up => Dir::Down,
        }
    }
}

/// value = mant * 2^exp; mant = 0 is canonical zero with exp = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dyadic {
    pub mant: BigInt,
    pub exp: i64,
}

impl Dyadic {
    pub fn zero() -> Dyadic {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Dyadic {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    pub fn new(mant: BigInt, exp: i64) -> Dyadic {
        if mant.is_zero() {
            Dyadic::zero()
        } else {
            Dyadic { mant, exp }
        }
    }

    pub fn from_bigint(n: &BigInt) -> Dyadic {
        Dyadic::new(n.clone(), 0)
    }

    pub fn from_i64(n: i64) -> Dyadic {
        Dyadic::new(BigInt::from(n), 0)
    }

    /// Exact conversion: every finite f64 is dyadic.
    pub fn from_f64(x: f64) -> Dyadic {
        assert!(x.is_finite(), "non-finite f64");
        if x == 0.0 {
            return Dyadic::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let exp_bits = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if exp_bits == 0 {
            (frac, -1074i64)
        } else {
            (frac | (1u64 << 52), exp_bits - 1075)
        };
        Dyadic::new(BigInt::from(sign * mant as i64), exp)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    /// Number of significant bits of the mantissa.
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Round to at most `prec` mantissa bits in direction `dir`.
    pub fn round(&self, prec: u32, dir: Dir) -> Dyadic {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = bits - prec as u64;
        let (q, lost) = shift_right_sticky(&self.mant, shift);
        let q = match (dir, lost, q.is_negative() || (q.is_zero() && self.mant.is_negative())) {
            (_, false, _) => q,
            (Dir::Down, true, true) => q - 1,
            (Dir::Down, true, false) => q,
            (Dir::Up, true, true) => q,
            (Dir::Up, true, false) => q + 1,
        };
        Dyadic::new(q, self.exp + shift as i64)
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic::new(-&self.mant, self.exp)
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic::new(self.mant.abs(), self.exp)
    }

    /// Exact addition (grows mantissa); round explicitly if needed.
    pub fn add_exact(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub_exact(&self, other: &Dyadic) -> Dyadic {
        self.add_exact(&other.neg())
    }

    pub fn mul_exact(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    pub fn add(&self, other: &Dyadic, prec: u32, dir: Dir) -> Dyadic {
        self.add_exact(other).round(prec, dir)
    }

    pub fn sub(&self, other: &Dyadic, prec: u32, dir: Dir) -> Dyadic {
        self.sub_exact(other).round(prec, dir)
    }

    pub fn mul(&self, other: &Dyadic, prec: u32, dir: Dir) -> Dyadic {
        self.mul_exact(other).round(prec, dir)
    }

    /// Directed division to `prec` bits.
    pub fn div(&self, other: &Dyadic, prec: u32, dir: Dir) -> Dyadic {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        // scale numerator so quotient has ~prec+2 bits
        let nb = self.mant.bits() as i64;
        let db = other.mant.bits() as i64;
        let shift = (db - nb + prec as i64 + 2).max(0) as u64;
        let num = &self.mant << shift;
        let (q, r) = num.div_rem(&other.mant);
        let exact = r.is_zero();
        let neg_result = self.mant.is_negative() != other.mant.is_negative();
        let q = if exact {
            q
        } else {
            // div_rem truncates toward zero
            match (dir, neg_result) {
                (Dir::Down, true) => q - 1,
                (Dir::Down, false) => q,
                (Dir::Up, true) => q,
                (Dir::Up, false) => q + 1,
            }
        };
        Dyadic::new(q, self.exp - other.exp - shift as i64).round(prec, dir)
    }

    /// Directed square root (requires self >= 0).
    pub fn sqrt(&self, prec: u32, dir: Dir) -> Dyadic {
        assert!(!self.is_negative(), "sqrt of negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        // scale to even exponent with at least 2*prec+4 mantissa bits
        let mut shift = (2 * prec as i64 + 4 - self.mant.bits() as i64).max(0);
        if (self.exp - shift) % 2 != 0 {
            shift += 1;
        }
        let m = &self.mant << shift as u64;
        let e = self.exp - shift;
        let r = crate::arith::isqrt(&m);
        let exact = &(&r * &r) == &m;
        let r = if exact {
            r
        } else {
            match dir {
                Dir::Down => r,
                Dir::Up => r + 1,
            }
        };
        Dyadic::new(r, e / 2).round(prec, dir)
    }

    pub fn cmp_val(&self, other: &Dyadic) -> Ordering {
        // compare mant*2^exp exactly
        match (self.mant.sign(), other.mant.sign()) {
            (num_bigint::Sign::Minus, num_bigint::Sign::Plus | num_bigint::Sign::NoSign) => {
                return Ordering::Less
            }
            (num_bigint::Sign::Plus, num_bigint::Sign::Minus | num_bigint::Sign::NoSign) => {
                return Ordering::Greater
            }
            (num_bigint::Sign::NoSign, num_bigint::Sign::Minus) => return Ordering::Greater,
            (num_bigint::Sign::NoSign, num_bigint::Sign::Plus) => return Ordering::Less,
            (num_bigint::Sign::NoSign, num_bigint::Sign::NoSign) => return Ordering::Equal,
            _ => {}
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        a.cmp(&b)
    }

    /// Floor as exact BigInt.
    pub fn floor_int(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            let (q, _lost) = shift_right_sticky(&self.mant, (-self.exp) as u64);
            if self.mant.is_negative() && !_lost {
                q
            } else if self.mant.is_negative() {
                q - 1
            } else {
                q
            }
        }
    }

    /// Ceiling as exact BigInt.
    pub fn ceil_int(&self) -> BigInt {
        -((&self.neg()).floor_int())
    }

    /// Conversion to f64 in direction `dir` (may overflow to infinity).
    pub fn to_f64(&self, dir: Dir) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let r = self.round(56, dir);
        let m = r.mant.to_f64().unwrap();
        let v = m * 2f64.powi(r.exp.clamp(-2000, 2000) as i32);
        // conversion itself is exact for 56-bit mantissa unless denormal/overflow;
        // nudge one ulp outward to be safe
        match dir {
            Dir::Down => f64_prev(v),
            Dir::Up => f64_next(v),
        }
    }
}

fn f64_next(x: f64) -> f64 {
    if x.is_nan() || x == f64::INFINITY {
        return x;
    }
    let bits = x.to_bits();
    let next = if x >= 0.0 { bits + 1 } else { bits - 1 };
    f64::from_bits(next)
}

fn f64_prev(x: f64) -> f64 {
    -f64_next(-x)
}

/// Arithmetic shift right by s bits; returns (truncated-toward-zero quotient
/// of |m| with sign restored, lost-bits flag).
fn shift_right_sticky(m: &BigInt, s: u64) -> (BigInt, bool) {
    if s == 0 {
        return (m.clone(), false);
    }
    let mag = m.magnitude();
    let q = mag >> s;
    let back = &q << s;
    let lost = &back != mag;
    let qi = BigInt::from_biguint(m.sign(), q);
    (qi, lost)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_round_directed() {
        // 7 = 111b, round to 2 bits: down -> 6, up -> 8
        let d = Dyadic::from_i64(7);
        assert_eq!(d.round(2, Dir::Down).cmp_val(&Dyadic::from_i64(6)), Ordering::Equal);
        assert_eq!(d.round(2, Dir::Up).cmp_val(&Dyadic::from_i64(8)), Ordering::Equal);
        let d = Dyadic::from_i64(-7);
        let down = d.round(2, Dir::Down);
        let up = d.round(2, Dir::Up);
        assert!(down.cmp_val(&d) == Ordering::Less);
        assert!(up.cmp_val(&d) == Ordering::Greater);
    }

    #[test]
    fn test_div_directed() {
        let one = Dyadic::one();
        let three = Dyadic::from_i64(3);
        let lo = one.div(&three, 64, Dir::Down);
        let hi = one.div(&three, 64, Dir::Up);
        assert!(lo.cmp_val(&hi) == Ordering::Less);
        // 3*lo < 1 < 3*hi
        assert!(lo.mul_exact(&three).cmp_val(&one) == Ordering::Less);
        assert!(hi.mul_exact(&three).cmp_val(&one) == Ordering::Greater);
    }

    #[test]
    fn test_sqrt_directed() {
        let two = Dyadic::from_i64(2);
        let lo = two.sqrt(100, Dir::Down);
        let hi = two.sqrt(100, Dir::Up);
        assert!(lo.mul_exact(&lo).cmp_val(&two) == Ordering::Less);
        assert!(hi.mul_exact(&hi).cmp_val(&two) == Ordering::Greater);
        let four = Dyadic::from_i64(4);
        assert_eq!(four.sqrt(30, Dir::Down).cmp_val(&two), Ordering::Equal);
    }

    #[test]
    fn test_floor_ceil() {
        let d = Dyadic::new(BigInt::from(7), -1); // 3.5
        assert_eq!(d.floor_int(), BigInt::from(3));
        assert_eq!(d.ceil_int(), BigInt::from(4));
        let d = Dyadic::new(BigInt::from(-7), -1); // -3.5
        assert_eq!(d.floor_int(), BigInt::from(-4));
        assert_eq!(d.ceil_int(), BigInt::from(-3));
        let d = Dyadic::from_i64(5);
        assert_eq!(d.floor_int(), BigInt::from(5));
        assert_eq!(d.ceil_int(), BigInt::from(5));
    }

    #[test]
    fn test_f64_roundtrip() {
        let x = 0.1f64;
        let d = Dyadic::from_f64(x);
        let lo = d.to_f64(Dir::Down);
        let hi = d.to_f64(Dir::Up);
        assert!(lo <= x && x <= hi);
    }
}
