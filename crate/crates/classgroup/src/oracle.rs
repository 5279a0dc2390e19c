//! Independent brute-force oracles used to cross-check the pipeline.
//!
//! Everything here is deliberately low-tech: exact integer arithmetic and
//! exhaustive enumeration only, sharing nothing with the factor-base
//! pipeline beyond bigint/polynomial primitives. The point is independence,
//! not speed.

use crate::arith::{factor_bounded, isqrt};
use crate::interval::RInt;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("discriminant is not fundamental")]
    NotFundamental,
    #[error("field too large for exhaustive oracle: {0}")]
    CapExceeded(String),
}

/// Is d a fundamental discriminant (of a quadratic field)?
pub fn is_fundamental(d: &BigInt) -> bool {
    let four = BigInt::from(4);
    let m4 = d.mod_floor(&four).to_i32().unwrap();
    if m4 == 1 {
        squarefree(d)
    } else if m4 == 0 {
        let m = d / &four;
        let mm4 = m.mod_floor(&four).to_i32().unwrap();
        (mm4 == 2 || mm4 == 3) && squarefree(&m)
    } else {
        false
    }
}

fn squarefree(n: &BigInt) -> bool {
    let f = factor_bounded(n, 100_000, 1 << 18);
    if let Some(c) = &f.cofactor {
        assert!(
            c.bits() < 64,
            "oracle squarefree test exceeded factoring budget"
        );
    }
    f.factors.iter().all(|(_, e)| *e == 1)
}

/// Class number of the imaginary quadratic field of fundamental
/// discriminant d < 0, by counting reduced binary quadratic forms (a, b, c):
/// b^2 - 4ac = d, |b| <= a <= c, b >= 0 when |b| = a or a = c.
pub fn forms_class_number(d: &BigInt) -> Result<u64, OracleError> {
    if !d.is_negative() || !is_fundamental(d) {
        return Err(OracleError::NotFundamental);
    }
    let mut count = 0u64;
    let mut b = BigInt::from(d.mod_floor(&BigInt::from(2)).to_i64().unwrap());
    let dabs = -d;
    loop {
        let b2 = &b * &b;
        if &b2 * 3 > dabs {
            break;
        }
        let rem = &b2 - d;
        debug_assert!((&rem % BigInt::from(4)).is_zero());
        let ac = rem / 4;
        let mut a = if b.is_zero() { BigInt::one() } else { b.clone() };
        loop {
            if &a * &a > ac {
                break;
            }
            if (&ac % &a).is_zero() {
                let c = &ac / &a;
                // here automatically b <= a <= c
                if b.is_zero() || a == b || a == c {
                    count += 1;
                } else {
                    count += 2; // forms (a, ±b, c)
                }
            }
            a += 1;
        }
        b += 2;
    }
    Ok(count)
}

/// A fundamental unit of the real quadratic field Q(sqrt(d)), found by the
/// continued fraction expansion of sqrt(d0) (or of (1+sqrt(d0))/2 when the
/// field discriminant is odd), d0 the squarefree part of d.
#[derive(Debug, Clone)]
pub struct CfUnit {
    /// Squarefree part of the input.
    pub d0: BigInt,
    /// Unit is x + y*theta.
    pub x: BigInt,
    pub y: BigInt,
    /// theta = (1+sqrt(d0))/2 when true, else sqrt(d0).
    pub half: bool,
    /// Norm of the unit, +1 or -1.
    pub norm_sign: i32,
}

impl CfUnit {
    /// Certified enclosure of the regulator log|x + y*theta|.
    pub fn regulator(&self, prec: u32) -> RInt {
        let sq = RInt::from_bigint(&self.d0).sqrt(prec);
        let theta = if self.half {
            sq.add(&RInt::one(), prec).div(&RInt::from_i64(2), prec)
        } else {
            sq
        };
        let v = RInt::from_bigint(&self.x).add(&theta.scale_int(&self.y, prec), prec);
        v.abs().ln(prec)
    }

    /// The unit as (a, b, den): (a + b*sqrt(d0)) / den.
    pub fn power_basis_coords(&self) -> (BigInt, BigInt, BigInt) {
        if self.half {
            ((&self.x * 2) + &self.y, self.y.clone(), BigInt::from(2))
        } else {
            (self.x.clone(), self.y.clone(), BigInt::one())
        }
    }
}

/// Squarefree part of positive n.
pub fn squarefree_part(n: &BigInt) -> BigInt {
    let f = factor_bounded(n, 1 << 20, 1 << 18);
    assert!(f.is_complete(), "squarefree_part exceeded factoring budget");
    let mut out = BigInt::one();
    for (p, e) in f.factors {
        if e % 2 == 1 {
            out *= p;
        }
    }
    out
}

/// Fundamental unit of the maximal order of Q(sqrt(d)) by continued
/// fractions. d > 1 nonsquare.
pub fn cf_fundamental_unit(d: &BigInt) -> CfUnit {
    assert!(d > &BigInt::one(), "d must be > 1");
    assert!(crate::arith::perfect_square(d).is_none(), "d must be nonsquare");
    let d0 = squarefree_part(d);
    let half = d0.mod_floor(&BigInt::from(4)).to_i32().unwrap() == 1;
    let dd = d0.clone();
    let (mut pp, mut qq) = if half {
        (BigInt::one(), BigInt::from(2))
    } else {
        (BigInt::zero(), BigInt::one())
    };
    let sq = isqrt(&dd);
    let (mut p0, mut p1) = (BigInt::one(), BigInt::zero());
    let (mut q0, mut q1) = (BigInt::zero(), BigInt::one());
    // norm forms: N(x + y*sqrt(d0)) = x^2 - d0 y^2;
    //             N(x + y*(1+sqrt(d0))/2) = x^2 + xy - y^2 (d0-1)/4
    let c = if half { (&d0 - 1) / 4 } else { BigInt::zero() };
    // convergent p/q approximates theta; the unit candidate is
    // u = p - q*conj(theta): conj(sqrt d0) = -sqrt d0; conj(omega) = 1 - omega
    for _iter in 0..200_000 {
        let a = (&pp + &sq).div_floor(&qq);
        let np = &a * &p0 + &p1;
        let nq = &a * &q0 + &q1;
        p1 = std::mem::replace(&mut p0, np);
        q1 = std::mem::replace(&mut q0, nq);
        let (x, y) = if half {
            (&p0 - &q0, q0.clone())
        } else {
            (p0.clone(), q0.clone())
        };
        if !y.is_zero() {
            let n = if half {
                &x * &x + &x * &y - &y * &y * &c
            } else {
                &x * &x - &y * &y * &d0
            };
            if n.magnitude().is_one() {
                return CfUnit {
                    d0,
                    x,
                    y,
                    half,
                    norm_sign: if n.is_negative() { -1 } else { 1 },
                };
            }
        }
        pp = &a * &qq - &pp;
        qq = (&dd - &pp * &pp) / &qq;
        debug_assert!(qq.is_positive(), "CF state invariant broken");
    }
    panic!("continued fraction did not terminate (period cap exceeded)");
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_fundamental() {
        assert!(is_fundamental(&BigInt::from(-4)));
        assert!(is_fundamental(&BigInt::from(-3)));
        assert!(is_fundamental(&BigInt::from(-20)));
        assert!(is_fundamental(&BigInt::from(-23)));
        assert!(!is_fundamental(&BigInt::from(-12)));
        assert!(!is_fundamental(&BigInt::from(-9)));
        assert!(!is_fundamental(&BigInt::from(-18)));
    }

    #[test]
    fn test_forms_class_number() {
        let h = |d: i64| forms_class_number(&BigInt::from(d)).unwrap();
        assert_eq!(h(-4), 1);
        assert_eq!(h(-3), 1);
        assert_eq!(h(-20), 2); // (1,0,5), (2,2,3)
        assert_eq!(h(-23), 3); // (1,1,6), (2,±1,3)
        assert_eq!(h(-163), 1);
        assert_eq!(h(-239), 15);
        assert_eq!(h(-248), 8);
        assert!(forms_class_number(&BigInt::from(-12)).is_err());
        assert!(forms_class_number(&BigInt::from(5)).is_err());
    }

    #[test]
    fn test_cf_unit_small() {
        // d=2: unit 1+sqrt(2), norm -1
        let u = cf_fundamental_unit(&BigInt::from(2));
        assert_eq!(
            (u.x.clone(), u.y.clone(), u.half, u.norm_sign),
            (BigInt::one(), BigInt::one(), false, -1)
        );
        assert!((u.regulator(128).mid_f64() - 0.881373587019543).abs() < 1e-12);
        // d=5: golden ratio
        let u = cf_fundamental_unit(&BigInt::from(5));
        assert!(u.half);
        assert_eq!((u.x.clone(), u.y.clone()), (BigInt::zero(), BigInt::one()));
        assert_eq!(u.norm_sign, -1);
        assert!((u.regulator(128).mid_f64() - 0.481211825059603).abs() < 1e-12);
        // d=8 reduces to the field Q(sqrt 2)
        let u = cf_fundamental_unit(&BigInt::from(8));
        assert_eq!(u.d0, BigInt::from(2));
        assert!((u.regulator(128).mid_f64() - 0.881373587019543).abs() < 1e-12);
        // d=13: unit (3+sqrt13)/2
        let u = cf_fundamental_unit(&BigInt::from(13));
        assert!(u.half);
        assert!((u.regulator(128).mid_f64() - 1.1947632172871094).abs() < 1e-10);
        // d=94: 2143295 + 221064 sqrt(94)
        let u = cf_fundamental_unit(&BigInt::from(94));
        assert_eq!(u.x, BigInt::from(2143295u64));
        assert_eq!(u.y, BigInt::from(221064u64));
        assert_eq!(u.norm_sign, 1);
    }

    #[test]
    fn test_cf_unit_norm_identity() {
        for d in 2i64..60 {
            let b = BigInt::from(d);
            if crate::arith::perfect_square(&b).is_some() {
                continue;
            }
            let u = cf_fundamental_unit(&b);
            let n = if u.half {
                let c = (&u.d0 - 1) / 4;
                &u.x * &u.x + &u.x * &u.y - &u.y * &u.y * c
            } else {
                &u.x * &u.x - &u.y * &u.y * &u.d0
            };
            assert!(n.magnitude().is_one(), "norm not ±1 for d={d}");
            assert!(u.regulator(96).lo_f64() > 0.0);
        }
    }

    #[test]
    fn test_cf_minimality_by_enumeration() {
        // no unit with smaller positive log exists (small d, brute force)
        for d in [2i64, 3, 5, 7, 10, 13, 21, 29] {
            let u = cf_fundamental_unit(&BigInt::from(d));
            let reg = u.regulator(96).mid_f64();
            let d0 = u.d0.to_i64().unwrap();
            let theta = if u.half {
                (1.0 + (d0 as f64).sqrt()) / 2.0
            } else {
                (d0 as f64).sqrt()
            };
            let mut best = f64::INFINITY;
            for x in -200i64..=200 {
                for y in -200i64..=200 {
                    if y == 0 {
                        continue;
                    }
                    let n = if u.half {
                        let c = (d0 - 1) / 4;
                        x * x + x * y - y * y * c
                    } else {
                        x * x - y * y * d0
                    };
                    if n.abs() == 1 {
                        let v: f64 = (x as f64 + y as f64 * theta).abs();
                        if v > 1.0 + 1e-12 {
                            best = best.min(v.ln());
                        }
                    }
                }
            }
            assert!((best - reg).abs() < 1e-9, "d={d}: enum {best} vs cf {reg}");
        }
    }
}
