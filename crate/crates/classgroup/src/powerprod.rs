//! Unexpanded power products of field elements — the compact representation
//! of units and principal generators. Expansion is available but the core
//! algorithms never need it: norms, valuations, log embeddings, residue
//! reductions, and exact identity checks all work factor by factor.

use crate::field::{FieldElement, NumberField};
use crate::ideal::PrimeIdeal;
use crate::interval::RInt;
use crate::modpoly;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PowerProductError {
    #[error("negative net valuation at a prime")]
    NegativeValuation,
    #[error("zero element in power product")]
    ZeroElement,
}

/// Formal product of (element, exponent) pairs; exponents may be negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerProduct {
    pub factors: Vec<(FieldElement, BigInt)>,
}

impl PowerProduct {
    pub fn one() -> PowerProduct {
        PowerProduct { factors: vec![] }
    }

    pub fn from_element(x: FieldElement) -> PowerProduct {
        PowerProduct { factors: vec![(x, BigInt::one())] }
    }

    pub fn mul(&self, other: &PowerProduct) -> PowerProduct {
        let mut out = self.clone();
        for (x, e) in &other.factors {
            out.push(x.clone(), e.clone());
        }
        out
    }

    pub fn push(&mut self, x: FieldElement, e: BigInt) {
        if e.is_zero() {
            return;
        }
        if let Some(f) = self.factors.iter_mut().find(|(y, _)| *y == x) {
            f.1 += e;
            if f.1.is_zero() {
                self.factors.retain(|(_, ee)| !ee.is_zero());
            }
        } else {
            self.factors.push((x, e));
        }
    }

    pub fn pow(&self, e: &BigInt) -> PowerProduct {
        if e.is_zero() {
            return PowerProduct::one();
        }
        PowerProduct {
            factors: self
                .factors
                .iter()
                .map(|(x, k)| (x.clone(), k * e))
                .collect(),
        }
    }

    pub fn inverse(&self) -> PowerProduct {
        self.pow(&BigInt::from(-1))
    }

    pub fn is_formally_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Expand to a field element. Fails only on negative exponents of
    /// non-units (inverse not integral is fine — result may be rational).
    pub fn expand(&self, k: &NumberField) -> FieldElement {
        let mut acc = k.one();
        for (x, e) in &self.factors {
            let mag = e.magnitude().to_u64().expect("exponent too large to expand");
            let p = k.pow(x, mag);
            if e.is_negative() {
                let inv = k.inverse(&p).expect("zero element in power product");
                acc = k.mul(&acc, &inv);
            } else {
                acc = k.mul(&acc, &p);
            }
        }
        acc
    }

    /// Norm as an exact rational: prod N(x_i)^(e_i).
    pub fn norm(&self, k: &NumberField) -> BigRational {
        let mut num = BigRational::one();
        for (x, e) in &self.factors {
            let n = k.norm(x);
            assert!(!n.is_zero(), "zero element in power product");
            let mag = e.magnitude().to_u32().expect("exponent too large");
            let p = power_rat(&n, mag);
            if e.is_negative() {
                num /= p;
            } else {
                num *= p;
            }
        }
        num
    }

    /// ord_P = sum e_i ord_P(x_i).
    pub fn valuation(&self, k: &NumberField, p: &PrimeIdeal) -> BigInt {
        let mut v = BigInt::zero();
        for (x, e) in &self.factors {
            let vx = p.valuation(k, x);
            v += BigInt::from(vx) * e;
        }
        v
    }

    /// log|sigma_i(.)| at every archimedean place (r1 + r2 entries, complex
    /// places once), computed factor by factor — never expanded.
    pub fn log_embeddings(&self, k: &NumberField, prec: u32) -> Vec<RInt> {
        let places = k.signature().0 + k.signature().1;
        let mut acc = vec![RInt::zero(); places];
        for (x, e) in &self.factors {
            let absv = k.abs_embeddings(x, prec + 8);
            for (i, a) in absv.into_iter().enumerate() {
                let l = a.ln(prec + 8).scale_int(e, prec + 8);
                acc[i] = acc[i].add(&l, prec + 8);
            }
        }
        acc
    }

    /// Upper bound on T2 of the expanded product, from the log embeddings.
    pub fn t2_upper(&self, k: &NumberField, prec: u32) -> RInt {
        let (r1, _r2) = k.signature();
        let logs = self.log_embeddings(k, prec);
        let mut acc = RInt::zero();
        for (i, l) in logs.iter().enumerate() {
            let sq = l.scale_int(&BigInt::from(2), prec).exp(prec);
            let w = if i < r1 { 1 } else { 2 };
            acc = acc.add(&sq.scale_int(&BigInt::from(w), prec), prec);
        }
        acc
    }

    /// Reduce modulo a prime ideal into its residue field, handling positive
    /// net valuation (-> 0) and valuation-zero products with non-unit factors
    /// (via exact division by uniformizer powers).
    pub fn expand_mod(
        &self,
        k: &NumberField,
        p: &PrimeIdeal,
    ) -> Result<modpoly::Poly, PowerProductError> {
        for (x, _) in &self.factors {
            if x.is_zero() {
                return Err(PowerProductError::ZeroElement);
            }
        }
        let vals: Vec<i64> = self.factors.iter().map(|(x, _)| p.valuation(k, x)).collect();
        let net: BigInt = self
            .factors
            .iter()
            .zip(&vals)
            .map(|((_, e), &v)| e * BigInt::from(v))
            .sum();
        if net.is_negative() {
            return Err(PowerProductError::NegativeValuation);
        }
        if net.is_positive() {
            return Ok(vec![]); // the zero residue
        }
        // net valuation 0: twist each positive-valuation factor by the
        // anti-uniformizer so每 factor reduces to a unit, exactly.
        let rf = &p.residue;
        let mut acc: modpoly::Poly = vec![1];
        for ((x, e), &v) in self.factors.iter().zip(&vals) {
            let img = if v == 0 {
                rf.reduce(x)
            } else {
                // y = x * vale^v / p^v is integral with valuation 0 at P
                let mut y = x.clone();
                let vale = FieldElement { num: p.vale_coords().to_vec(), den: BigInt::one() };
                for _ in 0..v {
                    y = k.mul(&y, &vale);
                    // exact division by p
                    let pb = BigInt::from(p.p);
                    assert!(y.is_integral());
                    let num: Vec<BigInt> = y
                        .num
                        .iter()
                        .map(|c| {
                            let (q, r) = c.div_rem(&pb);
                            assert!(r.is_zero(), "anti-uniformizer division not exact");
                            q
                        })
                        .collect();
                    y = FieldElement { num, den: BigInt::one() };
                }
                rf.reduce(&y)
            };
            debug_assert!(!img.is_empty(), "factor reduced to zero at valuation 0");
            let pw = rf.pow(&img, e);
            acc = rf.mul(&acc, &pw);
        }
        Ok(acc)
    }

    /// Reduce modulo q O for a rational prime q coprime to all denominators
    /// and to the norms of negative-exponent factors. Returns None if q is
    /// unsuitable.
    pub fn expand_mod_ring(&self, k: &NumberField, q: u64) -> Option<Vec<u64>> {
        let n = k.degree();
        let qb = BigInt::from(q);
        let mut acc = vec![0u64; n];
        acc[0] = 1;
        for (x, e) in &self.factors {
            let xm = element_mod_ring(k, x, q)?;
            let base = if e.is_negative() {
                ring_inverse(k, &xm, q)?
            } else {
                xm
            };
            let mut eb = BigInt::from_biguint(num_bigint::Sign::Plus, e.magnitude().clone());
            let mut b = base;
            let mut res = vec![0u64; n];
            res[0] = 1;
            while eb.is_positive() {
                if eb.is_odd() {
                    res = ring_mul(k, &res, &b, q);
                }
                eb >>= 1;
                if eb.is_positive() {
                    b = ring_mul(k, &b, &b, q);
                }
            }
            acc = ring_mul(k, &acc, &res, q);
        }
        let _ = qb;
        Some(acc)
    }
}

fn power_rat(x: &BigRational, e: u32) -> BigRational {
    let mut acc = BigRational::one();
    let mut base = x.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    acc
}

/// Coordinates of x in O/qO (requires q coprime to den(x)).
pub fn element_mod_ring(k: &NumberField, x: &FieldElement, q: u64) -> Option<Vec<u64>> {
    let qb = BigInt::from(q);
    let dm = x.den.mod_floor(&qb).to_u64().unwrap();
    if dm == 0 || num_integer::gcd(dm, q) != 1 {
        return None;
    }
    let dinv = crate::arith::invmod(dm, q);
    Some(
        x.num
            .iter()
            .map(|c| crate::arith::mulmod(c.mod_floor(&qb).to_u64().unwrap(), dinv, q))
            .collect(),
    )
}

/// Multiplication in O/qO via the integral-basis table.
pub fn ring_mul(k: &NumberField, a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let n = k.degree();
    let qb = BigInt::from(q);
    let mult = k.mult_table();
    let mut out = vec![0u64; n];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if bj == 0 {
                continue;
            }
            let c = crate::arith::mulmod(ai, bj, q);
            for (l, t) in mult[i][j].iter().enumerate() {
                if !t.is_zero() {
                    let tm = t.mod_floor(&qb).to_u64().unwrap();
                    out[l] = (out[l] + crate::arith::mulmod(c, tm, q)) % q;
                }
            }
        }
    }
    out
}

/// Inverse in O/qO (q prime, element a unit there), via linear solve.
pub fn ring_inverse(k: &NumberField, a: &[u64], q: u64) -> Option<Vec<u64>> {
    let n = k.degree();
    // solve x * M = e_0 where M rows = coords of b_i * a
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut ei = vec![0u64; n];
        ei[i] = 1;
        rows.push(ring_mul(k, &ei, a, q));
    }
    let mut target = vec![0u64; n];
    target[0] = 1;
    // transpose: solve M^T x = e_0
    let mt: Vec<Vec<u64>> = (0..n).map(|c| (0..n).map(|r| rows[r][c]).collect()).collect();
    crate::fpmat::solve(&mt, &target, q)
}

/// Exact verification of eta^ell == pp (as elements of K), without expanding
/// pp: compare modulo enough primes to exceed a certified coordinate bound.
pub fn verify_power_identity(
    k: &NumberField,
    eta: &FieldElement,
    ell: u64,
    pp: &PowerProduct,
) -> bool {
    // quick norm check
    let neta = k.norm(eta);
    let npp = pp.norm(k);
    if power_rat(&neta, ell as u32) != npp {
        return false;
    }
    // coordinate bound for both sides
    let prec = 64u32;
    let t2_eta = k.t2_norm(eta, prec);
    let t2l = t2_eta_pow_bound(k, eta, ell, prec);
    let t2_pp = pp.t2_upper(k, prec);
    let b1 = k.coordinate_bound(&t2l);
    let b2 = k.coordinate_bound(&t2_pp);
    let need: BigInt = (b1 + b2) * 2 + 2;
    // multiply denominators in: compare den^? — both sides may be rational;
    // scale by denominators: verify den_pp * eta^ell == den_pp * pp — keep it
    // simple: require integral eta and handle pp denominators via mod-q inverses.
    let mut modulus = BigInt::one();
    let mut q = 1_000_003u64;
    let mut checked = 0usize;
    while modulus < need {
        q = next_suitable_prime(k, q + 1, eta, pp);
        let em = match element_mod_ring(k, eta, q) {
            Some(v) => v,
            None => continue,
        };
        // eta^ell mod q
        let mut res = vec![0u64; k.degree()];
        res[0] = 1;
        let mut e = ell;
        let mut b = em;
        while e > 0 {
            if e & 1 == 1 {
                res = ring_mul(k, &res, &b, q);
            }
            e >>= 1;
            if e > 0 {
                b = ring_mul(k, &b, &b, q);
            }
        }
        let pm = match pp.expand_mod_ring(k, q) {
            Some(v) => v,
            None => continue,
        };
        if res != pm {
            return false;
        }
        modulus *= BigInt::from(q);
        checked += 1;
        assert!(checked < 10_000, "CRT verification runaway");
    }
    true
}

fn t2_eta_pow_bound(k: &NumberField, eta: &FieldElement, ell: u64, prec: u32) -> RInt {
    // T2(eta^ell) = sum |sigma(eta)|^(2 ell), weighted
    let (r1, _) = k.signature();
    let absv = k.abs_embeddings(eta, prec);
    let mut acc = RInt::zero();
    for (i, a) in absv.iter().enumerate() {
        let p = a.powi(2 * ell, prec);
        let w = if i < r1 { 1 } else { 2 };
        acc = acc.add(&p.scale_int(&BigInt::from(w), prec), prec);
    }
    acc
}

fn next_suitable_prime(k: &NumberField, from: u64, eta: &FieldElement, pp: &PowerProduct) -> u64 {
    let mut q = from;
    'outer: loop {
        while !crate::arith::is_prime_u64(q) {
            q += 1;
        }
        let qb = BigInt::from(q);
        // q must not divide any denominator or the norm of any factor, nor
        // den/norm of eta
        if (&eta.den % &qb).is_zero() {
            q += 1;
            continue;
        }
        let net = k.norm(eta);
        if (net.numer() % &qb).is_zero() || (net.denom() % &qb).is_zero() {
            q += 1;
            continue;
        }
        for (x, _) in &pp.factors {
            if (&x.den % &qb).is_zero() {
                q += 1;
                continue 'outer;
            }
            let nx = k.norm(x);
            if (nx.numer() % &qb).is_zero() || (nx.denom() % &qb).is_zero() {
                q += 1;
                continue 'outer;
            }
        }
        return q;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::decompose;
    use crate::intpoly::IntPoly;

    fn field(coeffs: &[i64]) -> NumberField {
        NumberField::new(IntPoly::from_i64_desc(coeffs)).unwrap()
    }

    #[test]
    fn test_expand_small() {
        let k = field(&[1, 0, -2]);
        let u = k.add(&k.one(), &k.gen()); // 1 + sqrt2
        let pp = PowerProduct::from_element(u.clone()).pow(&BigInt::from(2));
        let e = pp.expand(&k);
        // (1+sqrt2)^2 = 3 + 2 sqrt2
        let expect = k.add(
            &k.from_int(&BigInt::from(3)),
            &k.mul_int(&k.gen(), &BigInt::from(2)),
        );
        assert_eq!(e, expect);
        // empty product = 1
        assert_eq!(PowerProduct::one().expand(&k), k.one());
    }

    #[test]
    fn test_expand_mod_big_exponent() {
        // [(1+sqrt2, 100)] mod a degree-one prime above 7
        let k = field(&[1, 0, -2]);
        let u = k.add(&k.one(), &k.gen());
        let pp = PowerProduct::from_element(u.clone()).pow(&BigInt::from(100));
        for q in decompose(&k, 7) {
            let img = pp.expand_mod(&k, &q).unwrap();
            // oracle: (1 + s)^100 mod 7 where s = image of sqrt2
            let s = q.residue.reduce(&k.gen());
            assert_eq!(s.len(), 1);
            let base = (1 + s[0]) % 7;
            let expect = crate::arith::powmod(base, 100, 7);
            assert_eq!(img, if expect == 0 { vec![] } else { vec![expect] });
            // consistency with expansion
            let exp = pp.expand(&k);
            assert_eq!(q.residue.reduce(&exp), img);
        }
    }

    #[test]
    fn test_expand_mod_negative_valuation() {
        let k = field(&[1, 0, 1]);
        let p2 = &decompose(&k, 2)[0];
        let one_plus_i = k.add(&k.one(), &k.gen());
        let pp = PowerProduct::from_element(one_plus_i).pow(&BigInt::from(-1));
        assert!(matches!(
            pp.expand_mod(&k, p2),
            Err(PowerProductError::NegativeValuation)
        ));
        // positive net valuation reduces to 0
        let pp2 = PowerProduct::from_element(k.add(&k.one(), &k.gen()));
        assert_eq!(pp2.expand_mod(&k, p2).unwrap(), vec![]);
    }

    #[test]
    fn test_expand_mod_zero_valuation_twist() {
        // (1+i)^2 / 2 = i is a unit at P2; net valuation 0 with non-unit factors
        let k = field(&[1, 0, 1]);
        let p2 = &decompose(&k, 2)[0];
        let one_plus_i = k.add(&k.one(), &k.gen());
        let mut pp = PowerProduct::from_element(one_plus_i).pow(&BigInt::from(2));
        pp.push(k.from_int(&BigInt::from(2)), BigInt::from(-1));
        let img = pp.expand_mod(&k, p2).unwrap();
        // expected: image of i in O/P2 = F_2: i ≡ 1 (i = 1 - (1+i) + ... i ≡ 1 mod P2)
        assert_eq!(img, p2.residue.reduce(&k.gen()));
    }

    #[test]
    fn test_norm_and_valuation() {
        let k = field(&[1, 0, 1]);
        let p2 = &decompose(&k, 2)[0];
        let one_plus_i = k.add(&k.one(), &k.gen());
        let mut pp = PowerProduct::from_element(one_plus_i).pow(&BigInt::from(3));
        pp.push(k.from_int(&BigInt::from(2)), BigInt::from(-1));
        // norm: 2^3 / 4 = 2
        assert_eq!(pp.norm(&k), BigRational::from(BigInt::from(2)));
        // valuation: 3 - 2 = 1
        assert_eq!(pp.valuation(&k, p2), BigInt::one());
    }

    #[test]
    fn test_verify_power_identity() {
        let k = field(&[1, 0, -2]);
        let u = k.add(&k.one(), &k.gen());
        // eta^3 == (u^3) as power product
        let pp = PowerProduct::from_element(u.clone()).pow(&BigInt::from(3));
        assert!(verify_power_identity(&k, &u, 3, &pp));
        // wrong eta
        let v = k.add(&k.one(), &k.mul_int(&k.gen(), &BigInt::from(2)));
        assert!(!verify_power_identity(&k, &v, 3, &pp));
        // big exponents: u^210 = (u^30)^7
        let pp = PowerProduct::from_element(u.clone()).pow(&BigInt::from(210));
        let eta = k.pow(&u, 30);
        assert!(verify_power_identity(&k, &eta, 7, &pp));
    }

    #[test]
    fn test_log_embeddings_sum_zero_for_units() {
        let k = field(&[1, 0, -2]);
        let u = k.add(&k.one(), &k.gen());
        let pp = PowerProduct::from_element(u).pow(&BigInt::from(5));
        let logs = pp.log_embeddings(&k, 96);
        // sum over places (real weights 1) of logs = log|N| = 0
        let s = logs.iter().fold(RInt::zero(), |a, b| a.add(b, 96));
        assert!(s.contains_zero());
        assert!(s.width().to_f64(crate::dyadic::Dir::Up) < 1e-25);
    }
}
