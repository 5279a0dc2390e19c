//! Factor bases and relation collection: elements whose principal ideals
//! factor completely over the factor base, found by a deterministic
//! interleaving of small-element enumeration and seeded randomized trials
//! (short vectors of random prime-ideal products and random small
//! coordinates). A farmer-worker mode runs several independently seeded
//! searches and merges their verified output.

use crate::field::{FieldElement, NumberField};
use crate::ideal::{decompose, Ideal, PrimeIdeal};
use crate::lattice::T2Lattice;
use crate::linalg::Mat;
use crate::powerprod::PowerProduct;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, HashSet};

/// All prime ideals of norm <= bound, sorted by (norm, p, HNF).
#[derive(Debug, Clone)]
pub struct FactorBase {
    pub primes: Vec<PrimeIdeal>,
    pub bound: BigInt,
    /// distinct rational primes below the factor base
    pub rational_primes: Vec<u64>,
    by_p: BTreeMap<u64, Vec<usize>>,
}

impl FactorBase {
    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn indices_above(&self, p: u64) -> &[usize] {
        self.by_p.get(&p).map(|v| v.as_slice()).unwrap_or(&[])
    }
}

/// Exactly the primes of norm <= bound (completeness is what the Full and
/// GRH proofs rely on).
pub fn build_factor_base(k: &NumberField, bound: &BigInt) -> FactorBase {
    let mut primes = Vec::new();
    let mut sieve = crate::arith::PrimeSieve::new();
    loop {
        let p = sieve.next_prime();
        if BigInt::from(p) > *bound {
            break;
        }
        for q in decompose(k, p) {
            if q.norm() <= *bound {
                primes.push(q);
            }
        }
    }
    primes.sort_by(|a, b| {
        a.norm()
            .cmp(&b.norm())
            .then(a.p.cmp(&b.p))
            .then(a.ideal.hnf.cmp(&b.ideal.hnf))
    });
    let mut by_p: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for (i, q) in primes.iter().enumerate() {
        by_p.entry(q.p).or_default().push(i);
    }
    let rational_primes = by_p.keys().copied().collect();
    FactorBase { primes, bound: bound.clone(), rational_primes, by_p }
}

/// A multiplicative relation: phi(element) = exponents over the factor base.
#[derive(Debug, Clone)]
pub struct Relation {
    pub element: PowerProduct,
    /// sparse sorted (factor-base index, exponent)
    pub exponents: Vec<(usize, BigInt)>,
}

impl Relation {
    pub fn dense(&self, m: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); m];
        for (i, e) in &self.exponents {
            v[*i] = e.clone();
        }
        v
    }
}

#[derive(Debug, Clone)]
pub struct RelationMatrix {
    pub rows: Vec<Relation>,
    pub m: usize,
}

impl RelationMatrix {
    pub fn new(m: usize) -> RelationMatrix {
        RelationMatrix { rows: vec![], m }
    }

    pub fn dense(&self) -> Mat {
        self.rows.iter().map(|r| r.dense(self.m)).collect()
    }

    /// Rank of the exponent matrix modulo a fixed large prime (cheap control
    /// statistic; exact linear algebra happens downstream).
    pub fn rank_quick(&self) -> usize {
        const P: u64 = (1 << 61) - 1;
        let rows: Vec<Vec<u64>> = self
            .rows
            .iter()
            .map(|r| {
                let mut v = vec![0u64; self.m];
                for (i, e) in &r.exponents {
                    v[*i] = e.mod_floor(&BigInt::from(P)).to_u64().unwrap();
                }
                v
            })
            .collect();
        crate::fpmat::rank(&rows, P)
    }

    /// Canonical ordering: by exponent vector, then element data. Downstream
    /// results are then independent of collection order.
    pub fn canonical_sort(&mut self) {
        self.rows.sort_by(|a, b| {
            a.exponents
                .cmp(&b.exponents)
                .then_with(|| format!("{:?}", a.element).cmp(&format!("{:?}", b.element)))
        });
        self.rows.dedup_by(|a, b| a.exponents == b.exponents && a.element == b.element);
    }
}

/// phi(x): the factorization of (x) over the factor base, or None when x is
/// not fb-smooth. Exact: |N(x)| must factor over the base's rational primes
/// with ideal valuations accounting for every factor.
pub fn smooth_factorize(
    k: &NumberField,
    fb: &FactorBase,
    x: &FieldElement,
) -> Option<Vec<(usize, BigInt)>> {
    assert!(!x.is_zero(), "smooth_factorize of zero");
    assert!(x.is_integral(), "smooth_factorize needs an integral element");
    let mut n = k.norm_int(x).abs();
    if n.is_zero() {
        return None;
    }
    let mut out = Vec::new();
    for &p in &fb.rational_primes {
        let pb = BigInt::from(p);
        let mut vp = 0u32;
        while (&n % &pb).is_zero() {
            n /= &pb;
            vp += 1;
        }
        if vp == 0 {
            continue;
        }
        // distribute vp over the primes above p
        let mut acc = 0u64;
        for &i in fb.indices_above(p) {
            let q = &fb.primes[i];
            let v = q.valuation(k, x);
            if v > 0 {
                out.push((i, BigInt::from(v)));
                acc += v as u64 * q.fdeg as u64;
            }
        }
        if acc != vp as u64 {
            // some valuation escapes to a prime above p outside the base
            return None;
        }
    }
    if !n.is_one() {
        return None;
    }
    out.sort_by_key(|(i, _)| *i);
    Some(out)
}

/// Exact re-verification of a stored relation (used by the formalizable
/// regime on every row): recompute valuations of the power product at every
/// factor-base prime and check the norm identity.
pub fn verify_relation(k: &NumberField, fb: &FactorBase, rel: &Relation) -> bool {
    // norm identity: |N(element)| = prod NP^e exactly
    let nrm = rel.element.norm(k);
    let mut expect = BigRational::one();
    for (i, e) in &rel.exponents {
        let np = BigRational::from(fb.primes[*i].norm());
        let mag = e.magnitude().to_u32().unwrap();
        let mut pw = BigRational::one();
        for _ in 0..mag {
            pw *= &np;
        }
        if e.is_negative() {
            expect /= pw;
        } else {
            expect *= pw;
        }
    }
    let mut nabs = nrm.clone();
    if nabs < BigRational::zero() {
        nabs = -nabs;
    }
    if nabs != expect {
        return false;
    }
    // per-prime valuations
    let dense = rel.dense(fb.len());
    for (i, q) in fb.primes.iter().enumerate() {
        if rel.element.valuation(k, q) != dense[i] {
            return false;
        }
    }
    true
}

/// Search configuration shared by collect_relations and the pipeline.
#[derive(Debug, Clone)]
pub struct SearchParams {
    pub seed: u64,
    /// budget in smoothness tests
    pub budget: u64,
    pub threads: usize,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams { seed: 1, budget: 1_000_000, threads: 1 }
    }
}

/// Stateful deterministic relation search; repeated `run` calls continue
/// where the previous round stopped.
pub struct RelationSearch<'a> {
    k: &'a NumberField,
    fb: &'a FactorBase,
    pub matrix: RelationMatrix,
    tested: HashSet<Vec<BigInt>>,
    seen_elements: HashSet<Vec<BigInt>>,
    radius: BigRational,
    order_lat: T2Lattice,
    prime_lats: BTreeMap<usize, T2Lattice>,
    pub tests_used: u64,
    enum_exhausted: bool,
}

impl<'a> RelationSearch<'a> {
    pub fn new(k: &'a NumberField, fb: &'a FactorBase) -> RelationSearch<'a> {
        let order_lat = T2Lattice::order(k, 96);
        // starting radius: a bit above the minimum basis norm, so the first
        // rounds see all tiny elements (units, torsion, small relations)
        let min_norm = (0..order_lat.dim())
            .map(|i| order_lat.basis_norm(i).hi_f64())
            .fold(f64::INFINITY, f64::min);
        let start = (min_norm * 2.0).max(k.degree() as f64 + 1.0);
        let radius = BigRational::from_float(start).unwrap_or_else(|| {
            BigRational::from(BigInt::from(k.degree() as i64 + 2))
        });
        RelationSearch {
            k,
            fb,
            matrix: RelationMatrix::new(fb.len()),
            tested: HashSet::new(),
            seen_elements: HashSet::new(),
            radius,
            order_lat,
            prime_lats: BTreeMap::new(),
            tests_used: 0,
            enum_exhausted: false,
        }
    }

    fn try_element(&mut self, x: &FieldElement, budget: &mut u64) -> bool {
        if x.is_zero() || !x.is_integral() {
            return false;
        }
        // canonical sign
        let mut key = x.num.clone();
        if let Some(c) = key.iter().find(|c| !c.is_zero()) {
            if c.is_negative() {
                key = key.iter().map(|c| -c).collect();
            }
        }
        if !self.tested.insert(key.clone()) {
            return false;
        }
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        self.tests_used += 1;
        let xx = FieldElement { num: key.clone(), den: BigInt::one() };
        if let Some(exps) = smooth_factorize(self.k, self.fb, &xx) {
            if self.seen_elements.insert(key) {
                self.matrix.rows.push(Relation {
                    element: PowerProduct::from_element(xx),
                    exponents: exps,
                });
                return true;
            }
        }
        false
    }

    /// One deterministic search round: enumerate small elements up to the
    /// current radius, then randomized trials, spending at most
    /// `budget_chunk` smoothness tests. Returns tests actually spent.
    pub fn run_round(&mut self, seed: u64, budget_chunk: u64) -> u64 {
        let mut budget = budget_chunk;
        let spent_before = self.tests_used;
        // (a) exhaustive small-element stream
        if !self.enum_exhausted {
            match self.order_lat.enumerate_below(&self.radius, 40_000) {
                Some(v) => {
                    for num in v {
                        if budget == 0 {
                            break;
                        }
                        let x = FieldElement { num, den: BigInt::one() };
                        self.try_element(&x, &mut budget);
                    }
                    // grow the radius for the next round
                    self.radius = &self.radius * BigRational::new(BigInt::from(3), BigInt::from(2));
                }
                None => {
                    self.enum_exhausted = true;
                }
            }
        }
        // (b) randomized trials
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e3779b97f4a7c15);
        let n = self.k.degree();
        while budget > 0 {
            let choice = rng.gen_range(0..3u32);
            match choice {
                0 => {
                    // random small coordinates
                    let c = 1 + (rng.gen_range(0..3u32) as i64);
                    let num: Vec<BigInt> = (0..n)
                        .map(|_| BigInt::from(rng.gen_range(-c..=c)))
                        .collect();
                    let x = FieldElement { num, den: BigInt::one() };
                    self.try_element(&x, &mut budget);
                }
                _ => {
                    if self.fb.is_empty() {
                        // no preferable direction; more random smalls
                        let num: Vec<BigInt> =
                            (0..n).map(|_| BigInt::from(rng.gen_range(-4i64..=4))).collect();
                        let x = FieldElement { num, den: BigInt::one() };
                        self.try_element(&x, &mut budget);
                        continue;
                    }
                    // short vectors of a random prime ideal (or product of two)
                    let i = rng.gen_range(0..self.fb.len());
                    let single = choice == 1 || self.fb.len() == 1;
                    let (lat, scale): (&T2Lattice, f64) = if single {
                        let np = self.fb.primes[i].norm().to_f64().unwrap();
                        let lat = self.prime_lats.entry(i).or_insert_with(|| {
                            T2Lattice::sublattice(self.k, &self.fb.primes[i].ideal.hnf, 96)
                        });
                        (lat, np)
                    } else {
                        let j = rng.gen_range(0..self.fb.len());
                        let prod = self.fb.primes[i].ideal.mul(self.k, &self.fb.primes[j].ideal);
                        let np = prod.norm.to_f64().unwrap();
                        // not cached: build on the fly
                        let lat = T2Lattice::sublattice(self.k, &prod.hnf, 96);
                        self.prime_lats.insert(usize::MAX, lat);
                        (self.prime_lats.get(&usize::MAX).unwrap(), np)
                    };
                    let minb = (0..lat.dim())
                        .map(|t| lat.basis_norm(t).hi_f64())
                        .fold(f64::INFINITY, f64::min);
                    let _ = scale;
                    let bound = BigRational::from_float(minb * (1.3 + rng.gen_range(0..5u32) as f64 * 0.2))
                        .unwrap_or_else(|| BigRational::from(BigInt::from(4)));
                    let cands = lat.enumerate_below(&bound, 600);
                    if let Some(cands) = cands {
                        for num in cands {
                            if budget == 0 {
                                break;
                            }
                            let x = FieldElement { num, den: BigInt::one() };
                            self.try_element(&x, &mut budget);
                        }
                    }
                }
            }
        }
        self.tests_used - spent_before
    }
}

/// One-shot collection: run rounds until the exponent matrix reaches
/// `target_rank` (or the budget is exhausted), collecting some extra rows
/// beyond rank for the unit kernel. Deterministic given (seed, budget).
pub fn collect_relations(
    k: &NumberField,
    fb: &FactorBase,
    target_rank: usize,
    params: &SearchParams,
) -> RelationMatrix {
    let mut search = RelationSearch::new(k, fb);
    collect_more(&mut search, target_rank, k.unit_rank() + 2, params);
    let mut m = search.matrix;
    m.canonical_sort();
    m
}

/// Drive a search until rank >= target_rank and rows >= rank + extra_rows,
/// within the budget. Farmer-worker when params.threads > 1: workers run
/// independently seeded rounds; the coordinator verifies and merges.
pub fn collect_more(
    search: &mut RelationSearch<'_>,
    target_rank: usize,
    extra_rows: usize,
    params: &SearchParams,
) {
    let chunk = 4_000u64;
    let mut round = 0u64;
    while search.tests_used < params.budget {
        let rank = search.matrix.rank_quick();
        if rank >= target_rank && search.matrix.rows.len() >= rank + extra_rows {
            break;
        }
        if params.threads <= 1 {
            let seed = params.seed.wrapping_add(round.wrapping_mul(0x9e37_79b9));
            search.run_round(seed, chunk.min(params.budget - search.tests_used));
        } else {
            // bulk-synchronous farmer-worker round: workers search with
            // distinct seeds over snapshots; verified results merge centrally
            let k = search.k;
            let fb = search.fb;
            let budget_each = (chunk / params.threads as u64).max(500);
            let seeds: Vec<u64> = (0..params.threads as u64)
                .map(|w| params.seed ^ (round << 20) ^ (w.wrapping_mul(0xbf58476d1ce4e5b9)))
                .collect();
            let results: Vec<Vec<Relation>> = std::thread::scope(|scope| {
                let handles: Vec<_> = seeds
                    .iter()
                    .map(|&s| {
                        scope.spawn(move || {
                            let mut w = RelationSearch::new(k, fb);
                            // jump-start worker radius differently per seed
                            w.run_round(s, budget_each);
                            w.matrix.rows
                        })
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().unwrap()).collect()
            });
            search.tests_used += budget_each * params.threads as u64;
            for rows in results {
                for rel in rows {
                    // coordinator: append-only verified insertion
                    if !verify_relation(k, fb, &rel) {
                        continue;
                    }
                    let key: Vec<BigInt> = match rel.element.factors.first() {
                        Some((x, _)) => x.num.clone(),
                        None => continue,
                    };
                    if search.seen_elements.insert(key) {
                        search.matrix.rows.push(rel);
                    }
                }
            }
        }
        round += 1;
        if round > 10_000 {
            break;
        }
    }
    search.matrix.canonical_sort();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intpoly::IntPoly;

    fn field(coeffs: &[i64]) -> NumberField {
        NumberField::new(IntPoly::from_i64_desc(coeffs)).unwrap()
    }

    #[test]
    fn test_factor_base_examples() {
        let k = field(&[1, 0, 1]);
        // B=1: empty
        assert!(build_factor_base(&k, &BigInt::one()).is_empty());
        // B=10: primes above 2 (one), 5 (two), 3 inert norm 9: total 4
        let fb = build_factor_base(&k, &BigInt::from(10));
        assert_eq!(fb.len(), 4);
        // sorted by norm: 2, 5, 5, 9
        let norms: Vec<BigInt> = fb.primes.iter().map(|q| q.norm()).collect();
        assert_eq!(
            norms,
            vec![BigInt::from(2), BigInt::from(5), BigInt::from(5), BigInt::from(9)]
        );
        // Q(sqrt-5), B=2: just the ramified prime above 2
        let k = field(&[1, 0, 5]);
        let fb = build_factor_base(&k, &BigInt::from(2));
        assert_eq!(fb.len(), 1);
        assert_eq!(fb.primes[0].p, 2);
    }

    #[test]
    fn test_smooth_factorize_examples() {
        let k = field(&[1, 0, 1]);
        let fb = build_factor_base(&k, &BigInt::from(10));
        // x = 1: zero vector
        assert_eq!(smooth_factorize(&k, &fb, &k.one()), Some(vec![]));
        // x = 1+i: single entry at the prime above 2
        let x = k.add(&k.one(), &k.gen());
        let v = smooth_factorize(&k, &fb, &x).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(fb.primes[v[0].0].p, 2);
        assert_eq!(v[0].1, BigInt::one());
        // x = 7: not smooth for B=5
        let fb5 = build_factor_base(&k, &BigInt::from(5));
        assert!(smooth_factorize(&k, &fb5, &k.from_int(&BigInt::from(7))).is_none());
        // x = 3 with B=10: 3 inert norm 9 <= 10: inert prime exponent 1
        let v = smooth_factorize(&k, &fb, &k.from_int(&BigInt::from(3))).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(fb.primes[v[0].0].norm(), BigInt::from(9));
    }

    #[test]
    fn test_collect_gaussian_trivial_class_group() {
        let k = field(&[1, 0, 1]);
        let fb = build_factor_base(&k, &BigInt::from(10));
        let params = SearchParams { seed: 7, budget: 50_000, threads: 1 };
        let m = collect_relations(&k, &fb, 4, &params);
        assert!(m.rank_quick() >= 4, "rank {} < 4", m.rank_quick());
        // every row verifies
        for r in &m.rows {
            assert!(verify_relation(&k, &fb, r));
        }
        // kernel of the full-rank lattice has unit determinant -> h = 1:
        // SNF of the dense matrix has all invariants 1
        let (s, _, _) = crate::linalg::snf_with_transforms(&m.dense());
        let mut h = BigInt::one();
        for i in 0..4 {
            h *= &s[i][i];
        }
        assert_eq!(h, BigInt::one());
    }

    #[test]
    fn test_collect_sqrt_m5_even_exponents() {
        // Q(sqrt-5), B=6: P2 is not principal; no relation hits it oddly alone
        let k = field(&[1, 0, 5]);
        let fb = build_factor_base(&k, &BigInt::from(6));
        let params = SearchParams { seed: 3, budget: 30_000, threads: 1 };
        let m = collect_relations(&k, &fb, fb.len(), &params);
        let i2 = fb.primes.iter().position(|q| q.p == 2).unwrap();
        for r in &m.rows {
            let d = r.dense(fb.len());
            // class of P2 has order 2: any relation supported ONLY at P2 must
            // have even exponent there
            let only_p2 = d
                .iter()
                .enumerate()
                .all(|(j, e)| j == i2 || e.is_zero());
            if only_p2 {
                assert!(d[i2].is_even(), "odd pure-P2 relation found");
            }
        }
        // and h = 2 from the SNF
        let (s, _, _) = crate::linalg::snf_with_transforms(&m.dense());
        let mut h = BigInt::one();
        for i in 0..fb.len() {
            h *= &s[i][i];
        }
        assert_eq!(h, BigInt::from(2));
    }

    #[test]
    fn test_determinism_and_fault() {
        let k = field(&[1, 0, -2]);
        let fb = build_factor_base(&k, &BigInt::from(20));
        let params = SearchParams { seed: 11, budget: 20_000, threads: 1 };
        let m1 = collect_relations(&k, &fb, fb.len(), &params);
        let m2 = collect_relations(&k, &fb, fb.len(), &params);
        assert_eq!(m1.dense(), m2.dense(), "same seed/budget must agree");
        assert!(!m1.rows.is_empty());
        // perturbing an exponent breaks verification
        let mut bad = m1.rows[m1.rows.len() - 1].clone();
        if bad.exponents.is_empty() {
            bad.exponents.push((0, BigInt::one()));
        } else {
            bad.exponents[0].1 += 1;
        }
        assert!(!verify_relation(&k, &fb, &bad));
    }

    #[test]
    fn test_unit_relation_zero_vector() {
        // Q(sqrt2): the unit 1+sqrt2 shows up as a zero-exponent relation
        let k = field(&[1, 0, -2]);
        let fb = build_factor_base(&k, &BigInt::from(20));
        let params = SearchParams { seed: 5, budget: 30_000, threads: 1 };
        let m = collect_relations(&k, &fb, fb.len(), &params);
        let u = k.add(&k.one(), &k.gen());
        let found = m.rows.iter().any(|r| {
            r.exponents.is_empty()
                && r.element.factors.len() == 1
                && (r.element.factors[0].0 == u || r.element.factors[0].0 == k.neg(&u))
        });
        assert!(found, "fundamental unit not found as zero relation");
    }

    #[test]
    fn test_farmer_worker_union() {
        let k = field(&[1, 0, 5]);
        let fb = build_factor_base(&k, &BigInt::from(20));
        let params = SearchParams { seed: 9, budget: 40_000, threads: 3 };
        let m = collect_relations(&k, &fb, fb.len(), &params);
        assert!(m.rank_quick() >= fb.len());
        for r in &m.rows {
            assert!(verify_relation(&k, &fb, r));
        }
    }
}
