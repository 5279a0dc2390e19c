//! Dense univariate polynomials over Z: arithmetic, subresultant gcd and
//! resultant, discriminant, Sturm sequences, and evaluation over the
//! certified interval types.

use crate::dyadic::Dyadic;
use crate::interval::{CBox, RInt};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Coefficients ascending; invariant: no trailing zeros (zero poly = empty).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    pub coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> IntPoly {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn zero() -> IntPoly {
        IntPoly { coeffs: vec![] }
    }

    pub fn one() -> IntPoly {
        IntPoly { coeffs: vec![BigInt::one()] }
    }

    pub fn x() -> IntPoly {
        IntPoly { coeffs: vec![BigInt::zero(), BigInt::one()] }
    }

    pub fn constant(c: BigInt) -> IntPoly {
        IntPoly::new(vec![c])
    }

    /// From coefficients highest degree first (CLI convention).
    pub fn from_desc(coeffs: &[BigInt]) -> IntPoly {
        let mut v: Vec<BigInt> = coeffs.to_vec();
        v.reverse();
        IntPoly::new(v)
    }

    pub fn from_i64_desc(coeffs: &[i64]) -> IntPoly {
        IntPoly::from_desc(&coeffs.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; -1 encoded as None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn deg(&self) -> usize {
        self.degree().expect("degree of zero polynomial")
    }

    pub fn lc(&self) -> &BigInt {
        self.coeffs.last().expect("lc of zero polynomial")
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().map_or(false, |c| c.is_one())
    }

    pub fn add(&self, o: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut v = vec![BigInt::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i] += c;
        }
        for (i, c) in o.coeffs.iter().enumerate() {
            v[i] += c;
        }
        IntPoly::new(v)
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, o: &IntPoly) -> IntPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &IntPoly) -> IntPoly {
        if self.is_zero() || o.is_zero() {
            return IntPoly::zero();
        }
        let mut v = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                v[i + j] += a * b;
            }
        }
        IntPoly::new(v)
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn derivative(&self) -> IntPoly {
        if self.coeffs.len() <= 1 {
            return IntPoly::zero();
        }
        IntPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigInt::from(i as u64 + 1))
                .collect(),
        )
    }

    /// Exact division; panics if not divisible.
    pub fn div_exact(&self, d: &IntPoly) -> IntPoly {
        let (q, r) = self.pseudo_divrem_exact(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Plain long division assuming all quotient steps are exact over Z
    /// (e.g. monic divisor). Returns (q, r).
    pub fn pseudo_divrem_exact(&self, d: &IntPoly) -> (IntPoly, IntPoly) {
        assert!(!d.is_zero());
        let dd = d.deg();
        if self.is_zero() || self.deg() < dd {
            return (IntPoly::zero(), self.clone());
        }
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); self.deg() - dd + 1];
        let lc = d.lc();
        for k in (dd..r.len()).rev() {
            if r[k].is_zero() {
                continue;
            }
            let (c, rem) = r[k].div_rem(lc);
            assert!(rem.is_zero(), "division step not exact over Z");
            q[k - dd] = c.clone();
            for (j, dc) in d.coeffs.iter().enumerate() {
                let t = dc * &c;
                r[k - dd + j] -= t;
            }
        }
        (IntPoly::new(q), IntPoly::new(r))
    }

    /// Content (gcd of coefficients, nonnegative).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        g
    }

    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let c = self.content();
        IntPoly::new(self.coeffs.iter().map(|x| x / &c).collect())
    }

    /// Pseudo-remainder: lc(d)^(deg f - deg d + 1) * f = q*d + r.
    pub fn prem(&self, d: &IntPoly) -> IntPoly {
        assert!(!d.is_zero());
        let dd = d.deg();
        if self.is_zero() || self.deg() < dd {
            return self.clone();
        }
        let mut r = self.clone();
        let lc = d.lc().clone();
        let steps = self.deg() - dd + 1;
        let mut count = 0;
        while !r.is_zero() && r.deg() >= dd {
            let k = r.deg();
            let c = r.lc().clone();
            // r = lc*r - c * x^(k-dd) * d
            let mut rr = r.scale(&lc).coeffs;
            for (j, dc) in d.coeffs.iter().enumerate() {
                rr[k - dd + j] -= dc * &c;
            }
            r = IntPoly::new(rr);
            count += 1;
        }
        // normalize to the full pseudo-remainder power
        for _ in count..steps {
            r = r.scale(&lc);
        }
        r
    }

    /// Subresultant polynomial gcd (primitive).
    pub fn gcd(&self, o: &IntPoly) -> IntPoly {
        let mut a = self.primitive_part();
        let mut b = o.primitive_part();
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.prem(&b).primitive_part();
            a = b;
            b = r;
        }
        if a.lc().is_negative() {
            a = a.neg();
        }
        a
    }

    /// Resultant Res(f, g) by the subresultant PRS algorithm.
    pub fn resultant(&self, o: &IntPoly) -> BigInt {
        resultant_prs(self, o)
    }

    /// disc(f) = (-1)^(n(n-1)/2) Res(f, f') / lc(f).
    pub fn discriminant(&self) -> BigInt {
        let n = self.deg();
        let res = self.resultant(&self.derivative());
        let sign = if (n * (n - 1) / 2) % 2 == 0 { 1 } else { -1 };
        let d = res / self.lc();
        if sign == 1 {
            d
        } else {
            -d
        }
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rint(&self, x: &RInt, prec: u32) -> RInt {
        let mut acc = RInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x, prec).add(&RInt::from_bigint(c), prec);
        }
        acc
    }

    pub fn eval_cbox(&self, z: &CBox, prec: u32) -> CBox {
        let mut acc = CBox::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z, prec);
            acc.re = acc.re.add(&RInt::from_bigint(c), prec);
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + bigint_to_f64(c);
        }
        acc
    }

    /// Squarefree over Q?
    pub fn is_squarefree(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        if self.deg() == 0 {
            return true;
        }
        self.gcd(&self.derivative()).deg() == 0
    }

    /// Sturm sequence count of real roots in (a, b], endpoints dyadic;
    /// pass None for ±infinity.
    pub fn count_real_roots(&self, a: Option<&Dyadic>, b: Option<&Dyadic>) -> usize {
        let chain = self.sturm_chain();
        let va = sign_changes(&chain, a, true);
        let vb = sign_changes(&chain, b, false);
        va.saturating_sub(vb)
    }

    fn sturm_chain(&self) -> Vec<IntPoly> {
        let mut chain = vec![self.primitive_part(), self.derivative().primitive_part()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            if chain[n - 1].deg() == 0 {
                break;
            }
            let mut r = chain[n - 2].prem(&chain[n - 1]);
            // prem multiplies by lc^k which may flip sign; fix sign to act like
            // a genuine remainder: need sign(lc^steps) accounted
            let lc = chain[n - 1].lc();
            let steps = chain[n - 2].deg() - chain[n - 1].deg() + 1;
            if lc.is_negative() && steps % 2 == 1 {
                // lc^steps < 0: prem = lc^steps * f mod g has flipped sign
                r = r.neg();
            }
            let r = r.neg().primitive_part();
            if r.is_zero() {
                break;
            }
            chain.push(r);
        }
        chain
    }

    /// Isolate all real roots into disjoint dyadic intervals (a, b] with
    /// exactly one root each, each of width <= 2^-min_prec.
    pub fn isolate_real_roots(&self, min_prec: u32) -> Vec<(Dyadic, Dyadic)> {
        let chain = self.sturm_chain();
        // Cauchy bound: 1 + max |a_i| / |lc|
        let lc = self.lc().magnitude().clone();
        let mut maxc = BigInt::zero();
        for c in &self.coeffs {
            let a = c.abs();
            if a > maxc {
                maxc = a;
            }
        }
        let bound = (&maxc / BigInt::from_biguint(num_bigint::Sign::Plus, lc)) + 2;
        let mut b = Dyadic::from_bigint(&bound);
        let mut a = b.neg();
        // extend until all roots inside (paranoia for rounding)
        let total = {
            let va = sign_changes(&chain, None, true);
            let vb = sign_changes(&chain, None, false);
            va.saturating_sub(vb)
        };
        while count_in(&chain, &a, &b) < total {
            a = a.mul_exact(&Dyadic::from_i64(2));
            b = b.mul_exact(&Dyadic::from_i64(2));
        }
        let mut out = Vec::new();
        let mut stack = vec![(a, b)];
        while let Some((a, b)) = stack.pop() {
            let c = count_in(&chain, &a, &b);
            if c == 0 {
                continue;
            }
            let width_ok = {
                let w = b.sub_exact(&a);
                w.cmp_val(&Dyadic::new(BigInt::one(), -(min_prec as i64))) != std::cmp::Ordering::Greater
            };
            if c == 1 && width_ok {
                out.push((a, b));
                continue;
            }
            let mid = a.add_exact(&b).mul_exact(&Dyadic::new(BigInt::one(), -1));
            stack.push((a, mid.clone()));
            stack.push((mid, b));
        }
        out.sort_by(|x, y| x.0.cmp_val(&y.0));
        out
    }
}

fn count_in(chain: &[IntPoly], a: &Dyadic, b: &Dyadic) -> usize {
    let va = sign_changes(chain, Some(a), true);
    let vb = sign_changes(chain, Some(b), false);
    va.saturating_sub(vb)
}

/// Sign changes of the chain at a point (or ±infinity when None;
/// at_neg_inf selects -inf).
fn sign_changes(chain: &[IntPoly], at: Option<&Dyadic>, at_neg_inf: bool) -> usize {
    let signs: Vec<i32> = chain
        .iter()
        .map(|p| match at {
            Some(x) => sign_at(p, x),
            None => sign_at_inf(p, at_neg_inf),
        })
        .collect();
    let mut changes = 0;
    let mut last = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

fn sign_at(p: &IntPoly, x: &Dyadic) -> i32 {
    // exact dyadic Horner evaluation
    let mut val = Dyadic::zero();
    for c in p.coeffs.iter().rev() {
        val = val.mul_exact(x).add_exact(&Dyadic::from_bigint(c));
    }
    if val.is_zero() {
        0
    } else if val.is_negative() {
        -1
    } else {
        1
    }
}

fn sign_at_inf(p: &IntPoly, neg: bool) -> i32 {
    if p.is_zero() {
        return 0;
    }
    let s = if p.lc().is_negative() { -1 } else { 1 };
    if neg && p.deg() % 2 == 1 {
        -s
    } else {
        s
    }
}

/// Resultant by modular computation + CRT, bounded by the Hadamard estimate
/// on the Sylvester matrix.
fn resultant_prs(f: &IntPoly, g: &IntPoly) -> BigInt {
    if f.is_zero() || g.is_zero() {
        return BigInt::zero();
    }
    if f.deg() == 0 {
        return f.coeffs[0].pow(g.deg() as u32);
    }
    if g.deg() == 0 {
        return g.coeffs[0].pow(f.deg() as u32);
    }
    // Hadamard bound: |Res| <= ||f||_2^deg(g) * ||g||_2^deg(f)
    let norm2_sq = |p: &IntPoly| -> BigInt {
        p.coeffs.iter().map(|c| c * c).sum::<BigInt>() + 1
    };
    let nf = norm2_sq(f);
    let ng = norm2_sq(g);
    let bound_sq = nf.pow(g.deg() as u32) * ng.pow(f.deg() as u32);
    let bound = crate::arith::isqrt(&bound_sq) + 1;
    let target = &bound * 2 + 1;
    let mut modulus = BigInt::one();
    let mut res = BigInt::zero();
    let mut p = (1u64 << 62) - 100;
    while modulus <= target {
        p = next_prime_u64(p + 1);
        let lf = f.lc().mod_floor(&BigInt::from(p));
        let lg = g.lc().mod_floor(&BigInt::from(p));
        if lf.is_zero() || lg.is_zero() {
            continue;
        }
        let rp = resultant_mod_p(f, g, p);
        let rpb = BigInt::from(rp);
        if modulus.is_one() {
            res = rpb;
            modulus = BigInt::from(p);
        } else {
            res = crate::arith::crt(&res, &modulus, &rpb, &BigInt::from(p));
            modulus = &modulus * BigInt::from(p);
        }
    }
    // symmetric lift
    let half = &modulus >> 1;
    if res > half {
        res -= &modulus;
    }
    res
}

fn next_prime_u64(mut n: u64) -> u64 {
    if n % 2 == 0 {
        n += 1;
    }
    while !crate::arith::is_prime_u64(n) {
        n += 2;
    }
    n
}

/// Resultant over F_p via the Euclidean PRS identity.
fn resultant_mod_p(f: &IntPoly, g: &IntPoly, p: u64) -> u64 {
    use crate::arith::{invmod, mulmod, powmod};
    use num_traits::ToPrimitive;
    let red = |poly: &IntPoly| -> Vec<u64> {
        let mut v: Vec<u64> = poly
            .coeffs
            .iter()
            .map(|c| c.mod_floor(&BigInt::from(p)).to_u64().unwrap())
            .collect();
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    };
    let mut a = red(f);
    let mut b = red(g);
    debug_assert!(!a.is_empty() && !b.is_empty());
    let mut res = 1u64;
    let mut sign_neg = false;
    if a.len() < b.len() {
        if (a.len() - 1) % 2 == 1 && (b.len() - 1) % 2 == 1 {
            sign_neg = !sign_neg;
        }
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let da = a.len() - 1;
        let db = b.len() - 1;
        if db == 0 {
            res = mulmod(res, powmod(b[0], da as u64, p), p);
            break;
        }
        // r = a mod b over F_p
        let mut r = a.clone();
        let lb_inv = invmod(b[db], p);
        for k in (db..r.len()).rev() {
            let c = mulmod(r[k], lb_inv, p);
            if c == 0 {
                continue;
            }
            for (j, &bc) in b.iter().enumerate() {
                let idx = k - db + j;
                let t = mulmod(c, bc, p);
                r[idx] = (r[idx] + p - t) % p;
            }
        }
        while r.last() == Some(&0) {
            r.pop();
        }
        if r.is_empty() {
            return 0;
        }
        let dr = r.len() - 1;
        // Res(a, b) = (-1)^(da*db) * lc(b)^(da-dr) * Res(b, r)
        if da % 2 == 1 && db % 2 == 1 {
            sign_neg = !sign_neg;
        }
        res = mulmod(res, powmod(b[db], (da - dr) as u64, p), p);
        a = b;
        b = r;
    }
    if sign_neg {
        (p - res) % p
    } else {
        res
    }
}

fn bigint_to_f64(c: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    c.to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_arith() {
        let f = IntPoly::from_i64_desc(&[1, 0, -2]); // x^2 - 2
        let g = IntPoly::from_i64_desc(&[1, 1]); // x + 1
        let p = f.mul(&g);
        assert_eq!(p, IntPoly::from_i64_desc(&[1, 1, -2, -2]));
        let (q, r) = p.pseudo_divrem_exact(&g);
        assert_eq!(q, f);
        assert!(r.is_zero());
    }

    #[test]
    fn test_discriminant() {
        // disc(x^2+1) = -4
        assert_eq!(IntPoly::from_i64_desc(&[1, 0, 1]).discriminant(), BigInt::from(-4));
        // disc(x^2-5) = 20
        assert_eq!(IntPoly::from_i64_desc(&[1, 0, -5]).discriminant(), BigInt::from(20));
        // disc(x^3-17) = -27*17^2 = -7803
        assert_eq!(IntPoly::from_i64_desc(&[1, 0, 0, -17]).discriminant(), BigInt::from(-7803));
        // disc(x^3 - x + 1) = -23
        assert_eq!(IntPoly::from_i64_desc(&[1, 0, -1, 1]).discriminant(), BigInt::from(-23));
        // disc(x^5 - x + 1) = 2869 = 19*151
        assert_eq!(IntPoly::from_i64_desc(&[1, 0, 0, 0, -1, 1]).discriminant(), BigInt::from(2869));
    }

    #[test]
    fn test_resultant_vs_eval() {
        // Res(f, g) = lc(f)^deg g * prod g(roots of f): for f = (x-2)(x-3)
        let f = IntPoly::from_i64_desc(&[1, -5, 6]);
        let g = IntPoly::from_i64_desc(&[1, 1]); // x + 1
        // prod g(2), g(3) = 3*4 = 12
        assert_eq!(f.resultant(&g), BigInt::from(12));
    }

    #[test]
    fn test_sturm() {
        let f = IntPoly::from_i64_desc(&[1, 0, -2]); // x^2-2: 2 real roots
        assert_eq!(f.count_real_roots(None, None), 2);
        let f = IntPoly::from_i64_desc(&[1, 0, 1]); // x^2+1: 0
        assert_eq!(f.count_real_roots(None, None), 0);
        let f = IntPoly::from_i64_desc(&[1, 0, 0, -17]);
        assert_eq!(f.count_real_roots(None, None), 1);
        // degree-13 benchmark: totally real
        let mut f = IntPoly::one();
        for i in -6i64..=6 {
            f = f.mul(&IntPoly::from_i64_desc(&[1, -i]));
        }
        f = f.add(&IntPoly::one());
        assert_eq!(f.count_real_roots(None, None), 13);
    }

    #[test]
    fn test_isolate() {
        let f = IntPoly::from_i64_desc(&[1, 0, -2]);
        let roots = f.isolate_real_roots(40);
        assert_eq!(roots.len(), 2);
        // sqrt(2) in second interval
        let s = Dyadic::from_f64(std::f64::consts::SQRT_2);
        assert!(roots[1].0.cmp_val(&s) == std::cmp::Ordering::Less);
        assert!(roots[1].1.cmp_val(&s) == std::cmp::Ordering::Greater);
    }

    #[test]
    fn test_gcd() {
        let f = IntPoly::from_i64_desc(&[1, -5, 6]); // (x-2)(x-3)
        let g = IntPoly::from_i64_desc(&[1, -4, 4]); // (x-2)^2
        assert_eq!(f.gcd(&g), IntPoly::from_i64_desc(&[1, -2]));
        assert!(f.is_squarefree());
        assert!(!g.is_squarefree());
    }

    #[test]
    fn test_deg13_disc() {
        let mut f = IntPoly::one();
        for i in -6i64..=6 {
            f = f.mul(&IntPoly::from_i64_desc(&[1, -i]));
        }
        f = f.add(&IntPoly::one());
        let d = f.discriminant();
        let expect = BigInt::parse_bytes(
            b"16208845250073382871510886046388846629643246419945630243203821655533925709449248691790397",
            10,
        )
        .unwrap();
        assert_eq!(d, expect);
    }
}
