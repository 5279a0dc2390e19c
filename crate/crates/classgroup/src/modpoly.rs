//! Univariate polynomial arithmetic and factorization over F_p (p < 2^62).
//!
//! Squarefree decomposition, distinct-degree factorization, and
//! Cantor-Zassenhaus equal-degree splitting. The splitting RNG is seeded
//! from (p, f) so factorizations are deterministic regardless of call order.

use crate::arith::{invmod, mulmod};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

/// Coefficients ascending, trimmed, reduced mod p.
pub type Poly = Vec<u64>;

pub fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn deg(a: &Poly) -> i64 {
    a.len() as i64 - 1
}

pub fn from_bigint_poly(f: &crate::intpoly::IntPoly, p: u64) -> Poly {
    let pb = BigInt::from(p);
    trim(
        f.coeffs
            .iter()
            .map(|c| c.mod_floor(&pb).to_u64().unwrap())
            .collect(),
    )
}

pub fn add(a: &Poly, b: &Poly, p: u64) -> Poly {
    let n = a.len().max(b.len());
    let mut v = vec![0u64; n];
    for (i, &c) in a.iter().enumerate() {
        v[i] = c;
    }
    for (i, &c) in b.iter().enumerate() {
        v[i] = (v[i] + c) % p;
    }
    trim(v)
}

pub fn sub(a: &Poly, b: &Poly, p: u64) -> Poly {
    let n = a.len().max(b.len());
    let mut v = vec![0u64; n];
    for (i, &c) in a.iter().enumerate() {
        v[i] = c;
    }
    for (i, &c) in b.iter().enumerate() {
        v[i] = (v[i] + p - c) % p;
    }
    trim(v)
}

pub fn mul(a: &Poly, b: &Poly, p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut v = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            v[i + j] = (v[i + j] + mulmod(ai, bj, p)) % p;
        }
    }
    trim(v)
}

pub fn scale(a: &Poly, k: u64, p: u64) -> Poly {
    trim(a.iter().map(|&c| mulmod(c, k, p)).collect())
}

/// Remainder of a mod b.
pub fn rem(a: &Poly, b: &Poly, p: u64) -> Poly {
    divrem(a, b, p).1
}

/// Quotient and remainder.
pub fn divrem(a: &Poly, b: &Poly, p: u64) -> (Poly, Poly) {
    assert!(!b.is_empty(), "poly division by zero");
    let db = b.len() - 1;
    if a.len() <= db {
        return (vec![], a.clone());
    }
    let mut r = a.clone();
    let mut q = vec![0u64; a.len() - db];
    let inv = invmod(b[db], p);
    for k in (db..r.len()).rev() {
        let c = mulmod(r[k], inv, p);
        q[k - db] = c;
        if c == 0 {
            continue;
        }
        for (j, &bc) in b.iter().enumerate() {
            let t = mulmod(c, bc, p);
            r[k - db + j] = (r[k - db + j] + p - t) % p;
        }
    }
    (trim(q), trim(r))
}

pub fn monic(a: &Poly, p: u64) -> Poly {
    if a.is_empty() {
        return vec![];
    }
    let inv = invmod(*a.last().unwrap(), p);
    scale(a, inv, p)
}

pub fn gcd(a: &Poly, b: &Poly, p: u64) -> Poly {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(&a, p)
}

pub fn mulrem(a: &Poly, b: &Poly, f: &Poly, p: u64) -> Poly {
    rem(&mul(a, b, p), f, p)
}

/// base^e mod f, exponent a BigInt.
pub fn powrem_big(base: &Poly, e: &BigInt, f: &Poly, p: u64) -> Poly {
    let mut result = vec![1u64];
    let mut b = rem(base, f, p);
    let bits = e.bits();
    for i in 0..bits {
        if e.bit(i) {
            result = mulrem(&result, &b, f, p);
        }
        if i + 1 < bits {
            b = mulrem(&b, &b, f, p);
        }
    }
    result
}

pub fn powrem(base: &Poly, e: u64, f: &Poly, p: u64) -> Poly {
    powrem_big(base, &BigInt::from(e), f, p)
}

pub fn eval(a: &Poly, x: u64, p: u64) -> u64 {
    let mut acc = 0u64;
    for &c in a.iter().rev() {
        acc = (mulmod(acc, x, p) + c) % p;
    }
    acc
}

/// Formal derivative.
pub fn derivative(a: &Poly, p: u64) -> Poly {
    if a.len() <= 1 {
        return vec![];
    }
    trim(
        a[1..]
            .iter()
            .enumerate()
            .map(|(i, &c)| mulmod(c, (i as u64 + 1) % p, p))
            .collect(),
    )
}

/// p-th root of h(x^p) (coefficients of F_p are their own p-th roots).
fn pth_root(f: &Poly, p: u64) -> Poly {
    let mut h = Vec::new();
    let mut i = 0usize;
    while i < f.len() {
        h.push(f[i]);
        i += p as usize;
    }
    trim(h)
}

/// Squarefree decomposition: f (nonzero) = prod g_i^(m_i) with g_i monic,
/// squarefree, pairwise coprime. Recursive; fine at desk-scale degrees.
pub fn squarefree_decomposition(f: &Poly, p: u64) -> Vec<(Poly, u32)> {
    let f = monic(f, p);
    if deg(&f) < 1 {
        return vec![];
    }
    let d = derivative(&f, p);
    if d.is_empty() {
        // f = h(x^p)
        let h = pth_root(&f, p);
        return squarefree_decomposition(&h, p)
            .into_iter()
            .map(|(g, m)| (g, m * p as u32))
            .collect();
    }
    let g0 = gcd(&f, &d, p);
    if deg(&g0) == 0 {
        return vec![(f, 1)];
    }
    let mut w = divrem(&f, &g0, p).0; // factors with p∤mult, each once
    let sub = squarefree_decomposition(&g0, p);
    let mut out: Vec<(Poly, u32)> = Vec::new();
    for (q, m) in sub {
        if rem(&w, &q, p).is_empty() {
            w = divrem(&w, &q, p).0;
            out.push((q, m + 1));
        } else {
            out.push((q, m));
        }
    }
    // leftover parts of w are multiplicity-1 factors
    if deg(&w) >= 1 {
        out.push((monic(&w, p), 1));
    }
    out
}

/// Distinct-degree factorization of a SQUAREFREE monic f:
/// returns [(product of irreducible factors of degree d, d)].
pub fn distinct_degree(f: &Poly, p: u64) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let mut fcur = monic(f, p);
    let x = vec![0u64, 1];
    let mut xq = rem(&x, &fcur, p);
    let mut d = 0usize;
    while deg(&fcur) >= 1 {
        d += 1;
        if (deg(&fcur) as usize) < 2 * d {
            out.push((fcur.clone(), deg(&fcur) as usize));
            break;
        }
        xq = powrem_big(&xq, &BigInt::from(p), &fcur, p);
        let diff = sub(&xq, &x, p);
        let g = if diff.is_empty() { fcur.clone() } else { gcd(&fcur, &diff, p) };
        if deg(&g) >= 1 {
            out.push((g.clone(), d));
            fcur = divrem(&fcur, &g, p).0;
            if deg(&fcur) >= 1 {
                xq = rem(&xq, &fcur, p);
            }
        }
    }
    out
}

/// Equal-degree splitting (Cantor-Zassenhaus): f squarefree monic with all
/// irreducible factors of degree d. Deterministic via a seed from (p, f).
pub fn equal_degree_factor(f: &Poly, d: usize, p: u64) -> Vec<Poly> {
    let f = monic(f, p);
    if deg(&f) as usize == d {
        return vec![f];
    }
    let mut state = splitmix_seed(&f, p);
    let mut stack = vec![f];
    let mut out = Vec::new();
    while let Some(g) = stack.pop() {
        let dg = deg(&g) as usize;
        if dg == d {
            out.push(g);
            continue;
        }
        loop {
            let r = random_poly(&mut state, dg, p);
            if deg(&r) < 1 {
                continue;
            }
            let split = if p == 2 {
                // trace map over F_2
                let mut t = r.clone();
                let mut acc = r.clone();
                for _ in 1..d {
                    acc = mulrem(&acc, &acc, &g, p);
                    t = add(&t, &acc, p);
                }
                gcd(&g, &t, p)
            } else {
                let e: BigInt = (BigInt::from(p).pow(d as u32) - 1) / 2;
                let s = powrem_big(&r, &e, &g, p);
                let s1 = sub(&s, &vec![1u64], p);
                if s1.is_empty() {
                    continue;
                }
                gcd(&g, &s1, p)
            };
            let ds = deg(&split);
            if ds >= 1 && (ds as usize) < dg {
                let other = divrem(&g, &split, p).0;
                stack.push(monic(&split, p));
                stack.push(monic(&other, p));
                break;
            }
        }
    }
    out.sort();
    out
}

fn splitmix_seed(f: &Poly, p: u64) -> u64 {
    let mut h = p ^ 0x9e3779b97f4a7c15;
    for &c in f {
        h = h.wrapping_mul(0xbf58476d1ce4e5b9).wrapping_add(c ^ 0x94d049bb133111eb);
        h ^= h >> 31;
    }
    h | 1
}

fn splitmix_next(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn random_poly(state: &mut u64, below_deg: usize, p: u64) -> Poly {
    let mut v = Vec::with_capacity(below_deg);
    for _ in 0..below_deg {
        v.push(splitmix_next(state) % p);
    }
    trim(v)
}

/// Full factorization of nonzero f over F_p: [(monic irreducible, multiplicity)],
/// sorted for determinism.
pub fn factor(f: &Poly, p: u64) -> Vec<(Poly, u32)> {
    assert!(!f.is_empty());
    let mut out: Vec<(Poly, u32)> = Vec::new();
    for (g, m) in squarefree_decomposition(f, p) {
        for (h, d) in distinct_degree(&g, p) {
            for irr in equal_degree_factor(&h, d, p) {
                out.push((irr, m));
            }
        }
    }
    out.sort();
    out
}

/// Splitting type only (no equal-degree splitting): one (degree, multiplicity)
/// entry per irreducible factor.
pub fn splitting_type(f: &Poly, p: u64) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    for (g, m) in squarefree_decomposition(f, p) {
        for (h, d) in distinct_degree(&g, p) {
            let count = deg(&h) as usize / d;
            for _ in 0..count {
                out.push((d, m));
            }
        }
    }
    out.sort();
    out
}

/// Roots of f in F_p (each once, ignoring multiplicity).
pub fn roots(f: &Poly, p: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for (g, _m) in squarefree_decomposition(f, p) {
        let x = vec![0u64, 1];
        let xp = powrem_big(&x, &BigInt::from(p), &g, p);
        let lin = gcd(&g, &sub(&xp, &x, p), p);
        if deg(&lin) >= 1 {
            for r in equal_degree_factor(&lin, 1, p) {
                out.push((p - r[0]) % p);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

pub fn is_irreducible(f: &Poly, p: u64) -> bool {
    let n = deg(f);
    if n <= 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let sq = squarefree_decomposition(f, p);
    if sq.len() != 1 || sq[0].1 != 1 {
        return false;
    }
    let dd = distinct_degree(&sq[0].0, p);
    dd.len() == 1 && dd[0].1 == n as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intpoly::IntPoly;

    #[test]
    fn test_factor_basic() {
        // x^2+1 mod 5 = (x+2)(x+3)
        let fac = factor(&vec![1u64, 0, 1], 5);
        assert_eq!(fac.len(), 2);
        assert_eq!(fac[0].0, vec![2, 1]);
        assert_eq!(fac[1].0, vec![3, 1]);
        assert!(is_irreducible(&vec![1, 0, 1], 7));
        // x^2+1 mod 2 = (x+1)^2
        assert_eq!(factor(&vec![1, 0, 1], 2), vec![(vec![1, 1], 2)]);
    }

    #[test]
    fn test_factor_x3_17_mod3() {
        let f = from_bigint_poly(&IntPoly::from_i64_desc(&[1, 0, 0, -17]), 3);
        assert_eq!(factor(&f, 3), vec![(vec![1, 1], 3)]);
    }

    #[test]
    fn test_splitting_type() {
        // x^4+x^3+x^2+x+1: mod 19 two quadratics; mod 11 four linears
        let f = vec![1u64, 1, 1, 1, 1];
        assert_eq!(splitting_type(&f, 19), vec![(2, 1), (2, 1)]);
        assert_eq!(splitting_type(&f, 11), vec![(1, 1), (1, 1), (1, 1), (1, 1)]);
    }

    #[test]
    fn test_roots() {
        assert_eq!(roots(&vec![5, 0, 1], 7), vec![3, 4]); // x^2-2 mod 7
        assert_eq!(roots(&vec![3, 0, 1], 5), vec![]); // x^2+3 mod 5
    }

    #[test]
    fn test_squarefree_decomposition_wild() {
        // (x+1)^2 (x+2)^3 mod 5
        let f = mul(
            &mul(&vec![1, 1], &vec![1, 1], 5),
            &mul(&mul(&vec![2, 1], &vec![2, 1], 5), &vec![2, 1], 5),
            5,
        );
        let mut sq = squarefree_decomposition(&f, 5);
        sq.sort_by_key(|x| x.1);
        assert_eq!(sq, vec![(vec![1, 1], 2), (vec![2, 1], 3)]);
        // x^5 + 1 mod 5 = (x+1)^5 (derivative-zero path)
        let sq = squarefree_decomposition(&vec![1u64, 0, 0, 0, 0, 1], 5);
        assert_eq!(sq, vec![(vec![1, 1], 5)]);
        // (x+1)^6 mod 2: mixed path
        let x1 = vec![1u64, 1];
        let mut f = vec![1u64];
        for _ in 0..6 {
            f = mul(&f, &x1, 2);
        }
        assert_eq!(squarefree_decomposition(&f, 2), vec![(vec![1, 1], 6)]);
    }

    #[test]
    fn test_big_prime() {
        let p = 1_000_000_007u64;
        assert_eq!(p % 8, 7); // 2 is a QR
        let fac = factor(&vec![p - 2, 0, 1], p);
        assert_eq!(fac.len(), 2);
        let r = (p - fac[0].0[0]) % p;
        assert_eq!(mulmod(r, r, p), 2);
    }

    #[test]
    fn test_reconstruct_product() {
        // random-ish poly mod 13: factor and multiply back
        let f = vec![7u64, 3, 0, 11, 1, 5, 9, 1];
        let fac = factor(&f, 13);
        let mut prod = vec![*f.last().unwrap()];
        for (g, m) in &fac {
            for _ in 0..*m {
                prod = mul(&prod, g, 13);
            }
        }
        assert_eq!(prod, f);
    }
}
