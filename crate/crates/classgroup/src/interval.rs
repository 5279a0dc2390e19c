//! Certified real interval arithmetic with outward rounding, built on
//! [`crate::dyadic`]. Every operation returns an interval guaranteed to
//! contain the exact result; ln and exp carry explicit truncation bounds.

use crate::dyadic::{Dir, Dyadic};
use num_bigint::BigInt;
use num_traits::Signed;
use std::cmp::Ordering;

/// Closed interval [lo, hi] with dyadic endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RInt {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl RInt {
    pub fn point(d: Dyadic) -> RInt {
        RInt { lo: d.clone(), hi: d }
    }

    pub fn zero() -> RInt {
        RInt::point(Dyadic::zero())
    }

    pub fn one() -> RInt {
        RInt::point(Dyadic::one())
    }

    pub fn new(lo: Dyadic, hi: Dyadic) -> RInt {
        debug_assert!(lo.cmp_val(&hi) != Ordering::Greater, "inverted interval");
        RInt { lo, hi }
    }

    pub fn from_bigint(n: &BigInt) -> RInt {
        RInt::point(Dyadic::from_bigint(n))
    }

    pub fn from_i64(n: i64) -> RInt {
        RInt::point(Dyadic::from_i64(n))
    }

    /// Enclosure of the rational n/d at `prec` bits.
    pub fn from_ratio(n: &BigInt, d: &BigInt, prec: u32) -> RInt {
        let nn = Dyadic::from_bigint(n);
        let dd = Dyadic::from_bigint(d);
        let (nn, dd) = if d.is_negative() { (nn.neg(), dd.neg()) } else { (nn, dd) };
        RInt { lo: nn.div(&dd, prec, Dir::Down), hi: nn.div(&dd, prec, Dir::Up) }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        self.lo.cmp_val(x) != Ordering::Greater && self.hi.cmp_val(x) != Ordering::Less
    }

    pub fn contains_int(&self, n: &BigInt) -> bool {
        self.contains(&Dyadic::from_bigint(n))
    }

    /// Certainly positive / negative.
    pub fn is_pos(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_neg(&self) -> bool {
        self.hi.is_negative()
    }

    /// Certified strict comparison: true iff every x in self is < every y in other.
    pub fn lt(&self, other: &RInt) -> bool {
        self.hi.cmp_val(&other.lo) == Ordering::Less
    }

    pub fn neg(&self) -> RInt {
        RInt { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn add(&self, o: &RInt, prec: u32) -> RInt {
        RInt {
            lo: self.lo.add(&o.lo, prec, Dir::Down),
            hi: self.hi.add(&o.hi, prec, Dir::Up),
        }
    }

    pub fn sub(&self, o: &RInt, prec: u32) -> RInt {
        self.add(&o.neg(), prec)
    }

    pub fn mul(&self, o: &RInt, prec: u32) -> RInt {
        let cands = [
            self.lo.mul_exact(&o.lo),
            self.lo.mul_exact(&o.hi),
            self.hi.mul_exact(&o.lo),
            self.hi.mul_exact(&o.hi),
        ];
        let mut lo = cands[0].clone();
        let mut hi = cands[0].clone();
        for c in &cands[1..] {
            if c.cmp_val(&lo) == Ordering::Less {
                lo = c.clone();
            }
            if c.cmp_val(&hi) == Ordering::Greater {
                hi = c.clone();
            }
        }
        RInt { lo: lo.round(prec, Dir::Down), hi: hi.round(prec, Dir::Up) }
    }

    /// Division; panics if the denominator contains zero (use `checked_div`
    /// when that can happen).
    pub fn div(&self, o: &RInt, prec: u32) -> RInt {
        self.checked_div(o, prec).expect("interval division by zero-containing interval")
    }

    pub fn checked_div(&self, o: &RInt, prec: u32) -> Option<RInt> {
        if o.contains_zero() {
            return None;
        }
        let cands = [
            self.lo.div(&o.lo, prec, Dir::Down),
            self.lo.div(&o.hi, prec, Dir::Down),
            self.hi.div(&o.lo, prec, Dir::Down),
            self.hi.div(&o.hi, prec, Dir::Down),
        ];
        let cands_up = [
            self.lo.div(&o.lo, prec, Dir::Up),
            self.lo.div(&o.hi, prec, Dir::Up),
            self.hi.div(&o.lo, prec, Dir::Up),
            self.hi.div(&o.hi, prec, Dir::Up),
        ];
        let mut lo = cands[0].clone();
        for c in &cands[1..] {
            if c.cmp_val(&lo) == Ordering::Less {
                lo = c.clone();
            }
        }
        let mut hi = cands_up[0].clone();
        for c in &cands_up[1..] {
            if c.cmp_val(&hi) == Ordering::Greater {
                hi = c.clone();
            }
        }
        Some(RInt { lo, hi })
    }

    /// |self|.
    pub fn abs(&self) -> RInt {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            let a = self.lo.abs();
            let b = self.hi.abs();
            let hi = if a.cmp_val(&b) == Ordering::Greater { a } else { b };
            RInt { lo: Dyadic::zero(), hi }
        }
    }

    /// Square root; lower endpoint clamped at 0 if slightly negative
    /// (tolerated only for roundoff on nonnegative quantities).
    pub fn sqrt(&self, prec: u32) -> RInt {
        assert!(
            !self.hi.is_negative(),
            "sqrt of certainly-negative interval"
        );
        let lo = if self.lo.is_negative() { Dyadic::zero() } else { self.lo.sqrt(prec, Dir::Down) };
        RInt { lo, hi: self.hi.sqrt(prec, Dir::Up) }
    }

    pub fn square(&self, prec: u32) -> RInt {
        let a = self.abs();
        RInt {
            lo: a.lo.mul(&a.lo, prec, Dir::Down),
            hi: a.hi.mul(&a.hi, prec, Dir::Up),
        }
    }

    /// Integer power (n >= 0).
    pub fn powi(&self, n: u64, prec: u32) -> RInt {
        let mut result = RInt::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base, prec);
            }
            base = base.square(prec);
            e >>= 1;
        }
        result
    }

    /// Multiply by exact integer.
    pub fn scale_int(&self, k: &BigInt, prec: u32) -> RInt {
        self.mul(&RInt::from_bigint(k), prec)
    }

    pub fn union(&self, o: &RInt) -> RInt {
        let lo = if self.lo.cmp_val(&o.lo) == Ordering::Less { self.lo.clone() } else { o.lo.clone() };
        let hi = if self.hi.cmp_val(&o.hi) == Ordering::Greater { self.hi.clone() } else { o.hi.clone() };
        RInt { lo, hi }
    }

    /// Width hi - lo as an upper-bounded dyadic.
    pub fn width(&self) -> Dyadic {
        self.hi.sub_exact(&self.lo)
    }

    pub fn mid_f64(&self) -> f64 {
        let lo = self.lo.to_f64(Dir::Down);
        let hi = self.hi.to_f64(Dir::Up);
        0.5 * (lo + hi)
    }

    /// f64 upper bound of the radius around `mid_f64`.
    pub fn rad_f64(&self) -> f64 {
        let lo = self.lo.to_f64(Dir::Down);
        let hi = self.hi.to_f64(Dir::Up);
        let mid = 0.5 * (lo + hi);
        (hi - mid).max(mid - lo).max(0.0) * (1.0 + 1e-14) + f64::MIN_POSITIVE
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64(Dir::Down)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64(Dir::Up)
    }

    /// Natural log; requires a certainly-positive interval.
    pub fn ln(&self, prec: u32) -> RInt {
        assert!(self.lo.is_positive(), "ln of non-positive interval");
        let lo = ln_point(&self.lo, prec);
        let hi = ln_point(&self.hi, prec);
        RInt { lo: lo.lo, hi: hi.hi }
    }

    /// exp(self).
    pub fn exp(&self, prec: u32) -> RInt {
        let lo = exp_point(&self.lo, prec);
        let hi = exp_point(&self.hi, prec);
        RInt { lo: lo.lo, hi: hi.hi }
    }

    /// The unique integer contained in the interval, if exactly one.
    pub fn unique_int(&self) -> Option<BigInt> {
        let a = self.lo.ceil_int();
        let b = self.hi.floor_int();
        if a == b {
            Some(a)
        } else {
            None
        }
    }

    /// All integers in [lo, hi].
    pub fn ints_inside(&self) -> (BigInt, BigInt) {
        (self.lo.ceil_int(), self.hi.floor_int())
    }
}

/// Tight enclosure of ln(x) for a positive dyadic point x.
pub fn ln_point(x: &Dyadic, prec: u32) -> RInt {
    assert!(x.is_positive());
    let wp = prec + 16;
    // write x = u * 2^k with u in [1, 2)
    let bits = x.mant.bits() as i64;
    let k = x.exp + bits - 1;
    let u = Dyadic::new(x.mant.clone(), -(bits - 1)); // in [1, 2)
    // ln x = k ln2 + ln u; ln u = 2 atanh t, t = (u-1)/(u+1) in [0, 1/3]
    let one = RInt::one();
    let ui = RInt::point(u);
    let num = ui.sub(&one, wp);
    let den = ui.add(&one, wp);
    let t = num.div(&den, wp);
    let t2 = t.square(wp);
    // sum_{j>=0} t^(2j+1)/(2j+1), truncation after J terms bounded by
    // t^(2J+1)/((2J+1)(1-t^2))
    let terms = (wp as usize) / 3 + 4;
    let mut sum = RInt::zero();
    let mut tp = t.clone();
    for j in 0..terms {
        let d = BigInt::from(2 * j as i64 + 1);
        sum = sum.add(&tp.div(&RInt::from_bigint(&d), wp), wp);
        tp = tp.mul(&t2, wp);
    }
    // remainder bound: tp = t^(2J+1) here; |rem| <= tp/( (2J+1)(1 - t^2) )
    let one_minus_t2 = one.sub(&t2, wp);
    let rem_hi = tp
        .abs()
        .div(&one_minus_t2, wp)
        .div(&RInt::from_i64(2 * terms as i64 + 1), wp)
        .hi;
    let rem = RInt { lo: rem_hi.neg(), hi: rem_hi };
    let atanh = sum.add(&rem, wp);
    let ln_u = atanh.scale_int(&BigInt::from(2), wp);
    let l2 = ln2(wp);
    ln_u.add(&l2.scale_int(&BigInt::from(k), wp), wp)
}

/// Tight enclosure of exp(x) for a dyadic point x.
pub fn exp_point(x: &Dyadic, prec: u32) -> RInt {
    let wp = prec + 16;
    let l2 = ln2(wp);
    // k = nearest integer to x / ln2 (approximate is fine)
    let k_approx = x.to_f64(Dir::Down) / std::f64::consts::LN_2;
    assert!(
        k_approx.abs() < 1e15,
        "exp argument out of supported range"
    );
    let k = k_approx.round() as i64;
    let r = RInt::point(x.clone()).sub(&l2.scale_int(&BigInt::from(k), wp), wp);
    // |r| <= ln2/2 + slack < 0.4
    debug_assert!(r.abs().hi.to_f64(Dir::Up) < 0.5);
    // exp r = sum r^j / j! with remainder <= |r|^(J+1)/(J+1)! * 2
    let terms = ((wp as f64) / 2.5) as usize + 6;
    let mut sum = RInt::one();
    let mut tp = RInt::one();
    for j in 1..=terms {
        tp = tp.mul(&r, wp).div(&RInt::from_i64(j as i64), wp);
        sum = sum.add(&tp, wp);
    }
    let rem_hi = tp
        .abs()
        .mul(&r.abs(), wp)
        .div(&RInt::from_i64(terms as i64 + 1), wp)
        .scale_int(&BigInt::from(2), wp)
        .hi;
    let rem = RInt { lo: rem_hi.neg(), hi: rem_hi };
    let er = sum.add(&rem, wp);
    // scale by 2^k exactly
    let scale = |d: &Dyadic| Dyadic::new(d.mant.clone(), d.exp + k);
    RInt { lo: scale(&er.lo), hi: scale(&er.hi) }
}

/// Enclosure of ln 2 = 2 atanh(1/3).
pub fn ln2(prec: u32) -> RInt {
    atanh_inv(3, prec).scale_int(&BigInt::from(2), prec + 8)
}

/// Enclosure of pi via Machin's formula.
pub fn pi(prec: u32) -> RInt {
    let wp = prec + 16;
    let a = atan_inv(5, wp).scale_int(&BigInt::from(16), wp);
    let b = atan_inv(239, wp).scale_int(&BigInt::from(4), wp);
    a.sub(&b, wp)
}

/// atanh(1/q) for integer q >= 2 (series with rigorous tail).
fn atanh_inv(q: i64, prec: u32) -> RInt {
    let wp = prec + 16;
    let qi = BigInt::from(q);
    let q2 = RInt::from_bigint(&(&qi * &qi));
    let mut sum = RInt::zero();
    let mut tp = RInt::from_ratio(&BigInt::from(1), &qi, wp);
    // terms until (1/q)^(2J+1) < 2^-wp
    let terms = (wp as f64 / (2.0 * (q as f64).log2())).ceil() as usize + 3;
    for j in 0..terms {
        sum = sum.add(&tp.div(&RInt::from_i64(2 * j as i64 + 1), wp), wp);
        tp = tp.div(&q2, wp);
    }
    // tail < tp * q^2/(q^2-1) / (2J+1)
    let tail_hi = tp
        .div(&RInt::from_bigint(&(&qi * &qi - 1)), wp)
        .scale_int(&(&qi * &qi), wp)
        .hi;
    sum.add(&RInt { lo: Dyadic::zero(), hi: tail_hi }, wp)
}

/// atan(1/q) for integer q >= 2 (alternating series, tail <= next term).
fn atan_inv(q: i64, prec: u32) -> RInt {
    let wp = prec + 16;
    let qi = BigInt::from(q);
    let q2 = RInt::from_bigint(&(&qi * &qi));
    let mut sum = RInt::zero();
    let mut tp = RInt::from_ratio(&BigInt::from(1), &qi, wp);
    let terms = (wp as f64 / (2.0 * (q as f64).log2())).ceil() as usize + 3;
    for j in 0..terms {
        let term = tp.div(&RInt::from_i64(2 * j as i64 + 1), wp);
        if j % 2 == 0 {
            sum = sum.add(&term, wp);
        } else {
            sum = sum.sub(&term, wp);
        }
        tp = tp.div(&q2, wp);
    }
    let tail = tp.div(&RInt::from_i64(2 * terms as i64 + 1), wp).hi;
    sum.add(&RInt { lo: tail.neg(), hi: tail }, wp)
}

/// Complex interval box re + i*im.
#[derive(Debug, Clone)]
pub struct CBox {
    pub re: RInt,
    pub im: RInt,
}

impl CBox {
    pub fn point_real(d: Dyadic) -> CBox {
        CBox { re: RInt::point(d), im: RInt::zero() }
    }

    pub fn zero() -> CBox {
        CBox { re: RInt::zero(), im: RInt::zero() }
    }

    pub fn add(&self, o: &CBox, prec: u32) -> CBox {
        CBox { re: self.re.add(&o.re, prec), im: self.im.add(&o.im, prec) }
    }

    pub fn sub(&self, o: &CBox, prec: u32) -> CBox {
        CBox { re: self.re.sub(&o.re, prec), im: self.im.sub(&o.im, prec) }
    }

    pub fn mul(&self, o: &CBox, prec: u32) -> CBox {
        CBox {
            re: self.re.mul(&o.re, prec).sub(&self.im.mul(&o.im, prec), prec),
            im: self.re.mul(&o.im, prec).add(&self.im.mul(&o.re, prec), prec),
        }
    }

    pub fn conj(&self) -> CBox {
        CBox { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn abs_sq(&self, prec: u32) -> RInt {
        self.re.square(prec).add(&self.im.square(prec), prec)
    }

    pub fn abs(&self, prec: u32) -> RInt {
        self.abs_sq(prec).sqrt(prec)
    }

    pub fn scale(&self, k: &RInt, prec: u32) -> CBox {
        CBox { re: self.re.mul(k, prec), im: self.im.mul(k, prec) }
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_contains(iv: &RInt, x: f64) {
        assert!(iv.lo_f64() <= x && x <= iv.hi_f64(), "{} not in [{}, {}]", x, iv.lo_f64(), iv.hi_f64());
    }

    #[test]
    fn test_pi() {
        let p = pi(128);
        check_contains(&p, std::f64::consts::PI);
        assert!(p.width().to_f64(Dir::Up) < 1e-30);
    }

    #[test]
    fn test_ln_exp() {
        let e = RInt::from_i64(1).exp(128);
        check_contains(&e, std::f64::consts::E);
        let l = RInt::from_i64(2).ln(128);
        check_contains(&l, std::f64::consts::LN_2);
        // round trip: exp(ln 7) contains 7
        let x = RInt::from_i64(7);
        let r = x.ln(128).exp(128);
        assert!(r.contains_int(&BigInt::from(7)));
        assert!(r.width().to_f64(Dir::Up) < 1e-30);
        // big and small arguments
        let big = RInt::from_bigint(&BigInt::from(10).pow(40)).ln(128);
        check_contains(&big, 40.0 * std::f64::consts::LN_10);
        let tiny = RInt::from_ratio(&BigInt::from(1), &BigInt::from(10).pow(20), 128).ln(128);
        check_contains(&tiny, -20.0 * std::f64::consts::LN_10);
    }

    #[test]
    fn test_exp_negative() {
        let r = RInt::from_i64(-3).exp(96);
        check_contains(&r, (-3.0f64).exp());
    }

    #[test]
    fn test_mul_signs() {
        let a = RInt::new(Dyadic::from_i64(-2), Dyadic::from_i64(3));
        let b = RInt::new(Dyadic::from_i64(-5), Dyadic::from_i64(1));
        let p = a.mul(&b, 64);
        // extremes: -2*-5=10, -2*1=-2, 3*-5=-15, 3*1=3
        assert!(p.contains(&Dyadic::from_i64(10)));
        assert!(p.contains(&Dyadic::from_i64(-15)));
        assert!(!p.contains(&Dyadic::from_i64(11)));
    }

    #[test]
    fn test_unique_int() {
        let iv = RInt::new(Dyadic::from_f64(2.9), Dyadic::from_f64(3.1));
        assert_eq!(iv.unique_int(), Some(BigInt::from(3)));
        let iv = RInt::new(Dyadic::from_f64(2.9), Dyadic::from_f64(4.1));
        assert_eq!(iv.unique_int(), None);
    }
}
