//! Integer utilities: modular arithmetic on machine words, primality,
//! budgeted factorization, an incremental prime sieve, and square roots.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// (a * b) mod m for u64 without overflow.
#[inline]
pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// a^e mod m for u64.
pub fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    a %= m;
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

/// Modular inverse of a mod m (m > 1, gcd(a, m) = 1).
pub fn invmod(a: u64, m: u64) -> u64 {
    let (mut t, mut newt) = (0i128, 1i128);
    let (mut r, mut newr) = (m as i128, (a % m) as i128);
    while newr != 0 {
        let q = r / newr;
        (t, newt) = (newt, t - q * newt);
        (r, newr) = (newr, r - q * newr);
    }
    debug_assert!(r == 1, "not invertible");
    ((t % m as i128 + m as i128) % m as i128) as u64
}

/// Kronecker symbol (a | b).
pub fn kronecker(a: &BigInt, b: &BigInt) -> i32 {
    let mut a = a.clone();
    let mut b = b.clone();
    if b.is_zero() {
        return if a.magnitude() == &BigUint::one() { 1 } else { 0 };
    }
    if a.is_even() && b.is_even() {
        return 0;
    }
    let mut k = 1i32;
    let v = b.trailing_zeros().unwrap_or(0);
    b >>= v;
    if v % 2 == 1 {
        // (a | 2) = (2 | a) for odd a: +1 for a ≡ ±1 (mod 8)
        let am8 = ((&a % 8i32 + 8i32) % 8i32).to_i32().unwrap();
        if am8 == 3 || am8 == 5 {
            k = -k;
        }
    }
    if b.is_negative() {
        b = -b;
        if a.is_negative() {
            k = -k;
        }
    }
    loop {
        // invariant: b odd, b > 0
        if a.is_zero() {
            return if b.is_one() { k } else { 0 };
        }
        if a.is_negative() {
            a = -a;
            if ((&b % 4i32).to_i32().unwrap()) == 3 {
                k = -k;
            }
        }
        let v = a.trailing_zeros().unwrap_or(0);
        a >>= v;
        if v % 2 == 1 {
            let bm8 = (&b % 8i32).to_i32().unwrap();
            if bm8 == 3 || bm8 == 5 {
                k = -k;
            }
        }
        // now a, b both odd positive: reciprocity
        if (&a % 4i32).to_i32().unwrap() == 3 && (&b % 4i32).to_i32().unwrap() == 3 {
            k = -k;
        }
        let r = b.mod_floor(&a);
        b = a;
        a = r;
    }
}

/// Integer square root of a nonnegative BigInt (floor).
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of negative");
    BigInt::from_biguint(Sign::Plus, n.magnitude().sqrt())
}

/// True if n is a perfect square; returns the root if so.
pub fn perfect_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = isqrt(n);
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Deterministic Miller-Rabin for u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin on BigInt. Deterministic witness set below 3.3e24; fixed
/// pseudorandom witnesses above (strong probable-prime test).
pub fn is_prime(n: &BigInt) -> bool {
    if let Some(u) = n.to_u64() {
        return is_prime_u64(u);
    }
    if n.is_negative() || n.is_even() {
        return false;
    }
    let n_m1: BigInt = n - 1;
    let s = n_m1.trailing_zeros().unwrap();
    let d = &n_m1 >> s;
    let witnesses: Vec<BigInt> = {
        let mut w: Vec<BigInt> = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]
            .iter()
            .map(|&x| BigInt::from(x))
            .collect();
        // extra fixed witnesses for large inputs
        let mut x = 0x9e3779b97f4a7c15u64;
        for _ in 0..28 {
            x = x.wrapping_mul(0xbf58476d1ce4e5b9).wrapping_add(0x94d049bb133111eb);
            w.push(BigInt::from((x >> 8) | 3));
        }
        w
    };
    'witness: for a in witnesses {
        let a = a.mod_floor(n);
        if a < BigInt::from(2) {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_m1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_m1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Pollard-Brent rho; returns a nontrivial factor or None within the
/// iteration budget. n must be composite, odd, > 1.
pub fn pollard_brent(n: &BigInt, seed: u64, max_iters: u64) -> Option<BigInt> {
    let c = BigInt::from(seed * 2 + 1);
    let f = |x: &BigInt| (x * x + &c) % n;
    let mut x = BigInt::from(2 + (seed % 1000));
    let mut ys = x.clone();
    let mut y = x.clone();
    let m = 128u64;
    let mut g = BigInt::one();
    let mut r = 1u64;
    let mut iters = 0u64;
    while g.is_one() && iters < max_iters {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0u64;
        while k < r && g.is_one() {
            ys = y.clone();
            let mut q = BigInt::one();
            let cnt = m.min(r - k);
            for _ in 0..cnt {
                y = f(&y);
                q = (q * (&x - &y)).mod_floor(n);
            }
            g = q.gcd(n);
            k += m;
            iters += cnt;
        }
        r *= 2;
    }
    if g == *n {
        // backtrack
        loop {
            ys = f(&ys);
            g = (&x - &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    if g.is_one() || g == *n {
        None
    } else {
        Some(g)
    }
}

/// Outcome of budgeted factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    /// (prime, exponent) pairs, sorted by prime.
    pub factors: Vec<(BigInt, u32)>,
    /// Composite cofactor that resisted factoring, if any. Coprime to all
    /// listed primes, not a perfect power, with no prime factor <= trial bound.
    pub cofactor: Option<BigInt>,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.cofactor.is_none()
    }
}

/// Factor |n| with bounded effort: trial division to `trial_bound`, perfect
/// power detection, then Pollard-Brent with `rho_iters` iterations per
/// attempt. Remaining composite pieces end up in `cofactor`.
pub fn factor_bounded(n: &BigInt, trial_bound: u64, rho_iters: u64) -> Factorization {
    let mut n = n.abs();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    if n.is_zero() || n.is_one() {
        return Factorization { factors, cofactor: None };
    }
    let push = |p: BigInt, e: u32, factors: &mut Vec<(BigInt, u32)>| {
        if let Some(f) = factors.iter_mut().find(|(q, _)| *q == p) {
            f.1 += e;
        } else {
            factors.push((p, e));
        }
    };
    // trial division
    let mut sieve = PrimeSieve::new();
    loop {
        let p = sieve.next_prime();
        if p > trial_bound {
            break;
        }
        let pb = BigInt::from(p);
        let mut e = 0u32;
        while (&n % &pb).is_zero() {
            n /= &pb;
            e += 1;
        }
        if e > 0 {
            push(pb.clone(), e, &mut factors);
        }
        if n.is_one() {
            break;
        }
        if &pb * &pb > n {
            // remainder is prime
            if !n.is_one() {
                push(std::mem::take(&mut n), 1, &mut factors);
                n = BigInt::one();
            }
            break;
        }
    }
    let mut cofactor: Option<BigInt> = None;
    let mut stack = vec![(n.clone(), 1u32)];
    while let Some((m, mult)) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            push(m, mult, &mut factors);
            continue;
        }
        // perfect power?
        if let Some((base, k)) = perfect_power(&m) {
            stack.push((base, mult * k));
            continue;
        }
        let mut found = None;
        for seed in 1..=6u64 {
            if let Some(g) = pollard_brent(&m, seed, rho_iters) {
                found = Some(g);
                break;
            }
        }
        match found {
            Some(g) => {
                let other = &m / &g;
                stack.push((g, mult));
                stack.push((other, mult));
            }
            None => {
                // give up on this piece
                cofactor = Some(match cofactor {
                    None => m.pow(mult),
                    Some(c) => c * m.pow(mult),
                });
            }
        }
    }
    factors.sort_by(|a, b| a.0.cmp(&b.0));
    Factorization { factors, cofactor }
}

/// If n = b^k with k >= 2 returns (b, k).
pub fn perfect_power(n: &BigInt) -> Option<(BigInt, u32)> {
    if n < &BigInt::from(4) {
        return None;
    }
    let bits = n.bits();
    for k in 2..=bits {
        let r = n.nth_root(k as u32);
        if r < BigInt::from(2) {
            break;
        }
        if r.pow(k as u32) == *n {
            // decompose the base fully
            return match perfect_power(&r) {
                Some((b, j)) => Some((b, j * k as u32)),
                None => Some((r, k as u32)),
            };
        }
    }
    None
}

/// Incremental, growable prime sieve (segmented Eratosthenes).
/// The stop rule doubles its bound repeatedly, so primes are cached across
/// re-entries.
#[derive(Debug, Clone)]
pub struct PrimeSieve {
    primes: Vec<u64>,
    next_idx: usize,
    sieved_to: u64,
}

impl Default for PrimeSieve {
    fn default() -> Self {
        Self::new()
    }
}

impl PrimeSieve {
    pub fn new() -> Self {
        PrimeSieve { primes: vec![2, 3, 5, 7, 11, 13], next_idx: 0, sieved_to: 13 }
    }

    fn grow(&mut self) {
        let lo = self.sieved_to + 1;
        let hi = (self.sieved_to * 2).max(1 << 16);
        let len = (hi - lo + 1) as usize;
        let mut composite = vec![false; len];
        // ensure base primes up to sqrt(hi)
        let mut base = self.primes.clone();
        let mut limit = 1u64;
        while limit * limit < hi + 1 {
            limit += 1;
        }
        // base primes are always enough: primes grows by doubling
        while base.last().copied().unwrap_or(0) < limit {
            // fall back to trial division extension of base list
            let mut cand = base.last().copied().unwrap_or(1) + 1;
            loop {
                if base.iter().take_while(|&&p| p * p <= cand).all(|&p| cand % p != 0) {
                    base.push(cand);
                    break;
                }
                cand += 1;
            }
        }
        for &p in &base {
            if p * p > hi {
                break;
            }
            let mut start = ((lo + p - 1) / p) * p;
            if start < p * p {
                start = p * p;
            }
            let mut m = start;
            while m <= hi {
                composite[(m - lo) as usize] = true;
                m += p;
            }
        }
        for (i, &c) in composite.iter().enumerate() {
            if !c {
                self.primes.push(lo + i as u64);
            }
        }
        self.sieved_to = hi;
    }

    /// Next prime in sequence (stateful iteration).
    pub fn next_prime(&mut self) -> u64 {
        while self.next_idx >= self.primes.len() {
            self.grow();
        }
        let p = self.primes[self.next_idx];
        self.next_idx += 1;
        p
    }

    /// Reset the iteration cursor (cached primes are kept).
    pub fn rewind(&mut self) {
        self.next_idx = 0;
    }

    /// All primes < bound.
    pub fn primes_below(&mut self, bound: u64) -> &[u64] {
        while self.sieved_to < bound {
            self.grow();
        }
        let idx = self.primes.partition_point(|&p| p < bound);
        &self.primes[..idx]
    }
}

/// Chinese remainder: combine x1 mod m1 and x2 mod m2 (coprime moduli).
pub fn crt(x1: &BigInt, m1: &BigInt, x2: &BigInt, m2: &BigInt) -> BigInt {
    let g = m1.extended_gcd(m2);
    debug_assert!(g.gcd.is_one());
    let m = m1 * m2;
    let r = (x1 * &g.y * m2 + x2 * &g.x * m1).mod_floor(&m);
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_powmod_invmod() {
        assert_eq!(powmod(3, 100, 101), 1); // Fermat
        assert_eq!(mulmod(invmod(7, 101), 7, 101), 1);
    }

    #[test]
    fn test_kronecker() {
        // (-5 | p) splitting in Q(sqrt(-5)): p=3: -5 ≡ 1 mod 3, QR -> 1
        assert_eq!(kronecker(&BigInt::from(-5), &BigInt::from(3)), 1);
        assert_eq!(kronecker(&BigInt::from(-5), &BigInt::from(11)), -1);
        assert_eq!(kronecker(&BigInt::from(2), &BigInt::from(7)), 1);
        assert_eq!(kronecker(&BigInt::from(2), &BigInt::from(5)), -1);
        assert_eq!(kronecker(&BigInt::from(-4), &BigInt::from(5)), 1); // 5 splits in Q(i)
        assert_eq!(kronecker(&BigInt::from(-4), &BigInt::from(7)), -1); // 7 inert
        assert_eq!(kronecker(&BigInt::from(-4), &BigInt::from(2)), 0); // ramified
    }

    #[test]
    fn test_primality() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(1_000_000_007u64 * 3));
        let p = BigInt::parse_bytes(b"2116933616771287", 10).unwrap();
        assert!(is_prime(&p));
        let c = &p * BigInt::from(1_000_003u64);
        assert!(!is_prime(&c));
    }

    #[test]
    fn test_factor_bounded() {
        let n = BigInt::from(2u64 * 2 * 3 * 1_000_003 * 1_000_033);
        let f = factor_bounded(&n, 100, 1 << 16);
        assert!(f.is_complete());
        let expect: Vec<(BigInt, u32)> = vec![
            (BigInt::from(2), 2),
            (BigInt::from(3), 1),
            (BigInt::from(1_000_003), 1),
            (BigInt::from(1_000_033), 1),
        ];
        assert_eq!(f.factors, expect);
    }

    #[test]
    fn test_sieve() {
        let mut s = PrimeSieve::new();
        let ps = s.primes_below(100);
        assert_eq!(ps.len(), 25);
        assert_eq!(ps[24], 97);
        s.rewind();
        assert_eq!(s.next_prime(), 2);
    }

    #[test]
    fn test_perfect_power() {
        assert_eq!(perfect_power(&BigInt::from(729)), Some((BigInt::from(3), 6)));
        assert_eq!(perfect_power(&BigInt::from(700)), None);
    }
}
