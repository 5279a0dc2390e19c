//! Ideals of the maximal order: HNF lattices with cached norms, products,
//! prime decomposition (including primes dividing the index), valuations
//! via anti-uniformizers, and residue-field reduction maps.

use crate::arith::{invmod, mulmod};
use crate::field::{FieldElement, NumberField};
use crate::fpmat;
use crate::linalg::{det_bareiss, hnf, Mat};
use crate::modpoly;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Integral ideal as a full-rank row-HNF lattice in integral-basis
/// coordinates, with cached norm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ideal {
    pub hnf: Mat,
    pub norm: BigInt,
}

impl Ideal {
    fn from_lattice_rows(rows: Mat) -> Ideal {
        let h = hnf(&rows);
        let basis: Mat = h
            .into_iter()
            .filter(|r| r.iter().any(|c| !c.is_zero()))
            .collect();
        let n = basis.first().map_or(0, |r| r.len());
        assert_eq!(basis.len(), n, "ideal lattice must be full rank");
        let norm = basis.iter().enumerate().fold(BigInt::one(), |acc, (i, r)| acc * &r[i]);
        Ideal { hnf: basis, norm }
    }

    /// The unit ideal O.
    pub fn ring(k: &NumberField) -> Ideal {
        Ideal::from_lattice_rows(crate::linalg::identity(k.degree()))
    }

    /// Ideal generated by a set of integral elements (not all zero).
    pub fn from_generators(k: &NumberField, gens: &[FieldElement]) -> Ideal {
        let n = k.degree();
        let mut rows: Mat = Vec::new();
        for g in gens {
            assert!(g.is_integral(), "ideal generators must be integral");
            if g.is_zero() {
                continue;
            }
            let (m, _den) = k.mul_matrix(g);
            rows.extend(m);
        }
        assert!(!rows.is_empty(), "zero ideal");
        let _ = n;
        Ideal::from_lattice_rows(rows)
    }

    pub fn principal(k: &NumberField, g: &FieldElement) -> Ideal {
        Ideal::from_generators(k, std::slice::from_ref(g))
    }

    pub fn from_int(k: &NumberField, m: &BigInt) -> Ideal {
        Ideal::principal(k, &k.from_int(&m.abs()))
    }

    /// Product ideal.
    pub fn mul(&self, k: &NumberField, other: &Ideal) -> Ideal {
        let n = k.degree();
        let mut rows: Mat = Vec::with_capacity(n * n);
        for a in &self.hnf {
            let ea = FieldElement { num: a.clone(), den: BigInt::one() };
            for b in &other.hnf {
                let eb = FieldElement { num: b.clone(), den: BigInt::one() };
                let prod = k.mul(&ea, &eb);
                debug_assert!(prod.is_integral());
                rows.push(prod.num);
            }
        }
        Ideal::from_lattice_rows(rows)
    }

    pub fn pow(&self, k: &NumberField, e: u32) -> Ideal {
        let mut result = Ideal::ring(k);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(k, &base);
            }
            base = base.mul(k, &base);
            e >>= 1;
        }
        result
    }

    /// Canonical representative of an integer coordinate vector modulo the
    /// ideal lattice.
    pub fn reduce_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut v = v.to_vec();
        for r in &self.hnf {
            let pc = r.iter().position(|c| !c.is_zero()).unwrap();
            let q = v[pc].div_floor(&r[pc]);
            if !q.is_zero() {
                for t in 0..v.len() {
                    let s = &q * &r[t];
                    v[t] -= s;
                }
            }
        }
        v
    }

    /// Membership test for an integral element.
    pub fn contains(&self, x: &FieldElement) -> bool {
        assert!(x.is_integral());
        self.reduce_vec(&x.num).iter().all(|c| c.is_zero())
    }

    pub fn contains_ideal(&self, other: &Ideal) -> bool {
        other
            .hnf
            .iter()
            .all(|r| self.reduce_vec(r).iter().all(|c| c.is_zero()))
    }

    /// gcd of all coordinates over all rows (the content as a Z-lattice).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for r in &self.hnf {
            for c in r {
                g = g.gcd(c);
            }
        }
        g
    }

    pub fn divide_by_int(&self, c: &BigInt) -> Ideal {
        let rows: Mat = self
            .hnf
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| {
                        let (q, rem) = x.div_rem(c);
                        assert!(rem.is_zero());
                        q
                    })
                    .collect()
            })
            .collect();
        Ideal::from_lattice_rows(rows)
    }

    /// Inverse as (J, d) with self^{-1} = J / d, J integral.
    /// J = {z in O : z * self ⊆ N O} and d = N = norm(self).
    pub fn inverse_scaled(&self, k: &NumberField) -> (Ideal, BigInt) {
        let n = k.degree();
        let nrm = self.norm.clone();
        // conditions: for each ideal basis row m: z * m ≡ 0 (mod N) coordinatewise
        // solve as integer kernel: stack [C | N I] and take left kernel, project
        let mut cmat: Mat = Vec::with_capacity(n);
        for i in 0..n {
            let mut ei = vec![BigInt::zero(); n];
            ei[i] = BigInt::one();
            let e = FieldElement { num: ei, den: BigInt::one() };
            let mut row: Vec<BigInt> = Vec::with_capacity(n * n);
            for m in &self.hnf {
                let me = FieldElement { num: m.clone(), den: BigInt::one() };
                let prod = k.mul(&e, &me);
                row.extend(prod.num);
            }
            cmat.push(row);
        }
        let cols = n * n;
        let mut big: Mat = cmat;
        for j in 0..cols {
            let mut r = vec![BigInt::zero(); cols];
            r[j] = nrm.clone();
            big.push(r);
        }
        let ker = crate::linalg::left_kernel(&big);
        let mut rows: Mat = ker.into_iter().map(|r| r[..n].to_vec()).collect();
        rows.retain(|r| r.iter().any(|c| !c.is_zero()));
        assert!(!rows.is_empty());
        let j = Ideal::from_lattice_rows(rows);
        (j, nrm)
    }

    /// Two random-ish short generators certificate: self == (a) + (b)?
    pub fn equals_two_generated(&self, k: &NumberField, a: &FieldElement, b: &FieldElement) -> bool {
        let gen = Ideal::from_generators(k, &[a.clone(), b.clone()]);
        gen == *self
    }
}

/// Residue field O/P ≅ F_p[t]/(modulus), with the images of the integral
/// basis elements.
#[derive(Debug, Clone)]
pub struct ResidueField {
    pub p: u64,
    pub modulus: modpoly::Poly,
    pub basis_images: Vec<modpoly::Poly>,
}

impl ResidueField {
    pub fn fdeg(&self) -> usize {
        modpoly::deg(&self.modulus) as usize
    }

    /// Reduce an element with denominator prime to p.
    pub fn reduce(&self, x: &FieldElement) -> modpoly::Poly {
        let p = self.p;
        let pb = BigInt::from(p);
        let dmod = x.den.mod_floor(&pb).to_u64().unwrap();
        assert!(dmod != 0, "denominator not invertible at p");
        let dinv = invmod(dmod, p);
        let mut acc: modpoly::Poly = vec![];
        for (i, c) in x.num.iter().enumerate() {
            let cm = c.mod_floor(&pb).to_u64().unwrap();
            if cm == 0 {
                continue;
            }
            let t = modpoly::scale(&self.basis_images[i], cm, p);
            acc = modpoly::add(&acc, &t, p);
        }
        modpoly::scale(&modpoly::rem(&acc, &self.modulus, p), dinv, p)
    }

    /// Multiplicative group order p^f - 1.
    pub fn group_order(&self) -> BigInt {
        BigInt::from(self.p).pow(self.fdeg() as u32) - 1
    }

    pub fn mul(&self, a: &modpoly::Poly, b: &modpoly::Poly) -> modpoly::Poly {
        modpoly::mulrem(a, b, &self.modulus, self.p)
    }

    pub fn pow(&self, a: &modpoly::Poly, e: &BigInt) -> modpoly::Poly {
        if e.is_negative() {
            let inv = self.inv(a);
            return modpoly::powrem_big(&inv, &(-e), &self.modulus, self.p);
        }
        modpoly::powrem_big(a, e, &self.modulus, self.p)
    }

    pub fn inv(&self, a: &modpoly::Poly) -> modpoly::Poly {
        // a^(p^f - 2)
        let e = self.group_order() - 1;
        modpoly::powrem_big(a, &e, &self.modulus, self.p)
    }

    pub fn is_one(&self, a: &modpoly::Poly) -> bool {
        a == &vec![1u64]
    }
}

/// A prime ideal above p with decomposition data.
#[derive(Debug, Clone)]
pub struct PrimeIdeal {
    pub ideal: Ideal,
    pub p: u64,
    pub e: u32,
    pub fdeg: u32,
    pub two_elt: FieldElement,
    /// Element of (pO : P) \ pO used for valuations.
    vale: Vec<BigInt>,
    pub residue: ResidueField,
}

impl PrimeIdeal {
    /// Coordinates of the (pO : P) element used for valuations.
    pub fn vale_coords(&self) -> &[BigInt] {
        &self.vale
    }

    pub fn norm(&self) -> BigInt {
        BigInt::from(self.p).pow(self.fdeg)
    }

    /// ord_P of a nonzero element (any sign of valuation for rational den).
    pub fn valuation(&self, k: &NumberField, x: &FieldElement) -> i64 {
        assert!(!x.is_zero(), "valuation of zero");
        let pb = BigInt::from(self.p);
        // split denominator: v_P(x) = v_P(num) - e * v_p(den)
        let mut den_v = 0i64;
        let mut den = x.den.clone();
        while (&den % &pb).is_zero() {
            den /= &pb;
            den_v += 1;
        }
        let vnum = self.valuation_int_vec(k, &x.num);
        vnum - den_v * self.e as i64
    }

    fn valuation_int_vec(&self, k: &NumberField, num: &[BigInt]) -> i64 {
        let pb = BigInt::from(self.p);
        let vale = FieldElement { num: self.vale.clone(), den: BigInt::one() };
        let mut y = FieldElement { num: num.to_vec(), den: BigInt::one() };
        let mut v = 0i64;
        loop {
            let z = k.mul(&y, &vale);
            debug_assert!(z.is_integral());
            if z.num.iter().all(|c| (c % &pb).is_zero()) {
                y = FieldElement {
                    num: z.num.iter().map(|c| c / &pb).collect(),
                    den: BigInt::one(),
                };
                v += 1;
            } else {
                return v;
            }
        }
    }

    /// ord_P of an ideal (min over the HNF basis).
    pub fn ideal_valuation(&self, k: &NumberField, a: &Ideal) -> i64 {
        a.hnf
            .iter()
            .map(|r| self.valuation_int_vec(k, r))
            .min()
            .unwrap()
    }
}

/// All primes above p, sorted by (fdeg, two_elt coords) for determinism.
pub fn decompose(k: &NumberField, p: u64) -> Vec<PrimeIdeal> {
    let n = k.degree();
    let pb = BigInt::from(p);
    let index_div = (k.index() % &pb).is_zero();
    let mut out: Vec<PrimeIdeal> = if !index_div {
        decompose_unramified_index(k, p)
    } else {
        decompose_via_algebra(k, p)
    };
    // consistency: sum e*f = n
    let s: u32 = out.iter().map(|q| q.e * q.fdeg).sum();
    assert_eq!(s as usize, n, "sum e_i f_i must equal n at p={p}");
    out.sort_by(|a, b| {
        a.fdeg
            .cmp(&b.fdeg)
            .then_with(|| a.ideal.hnf.cmp(&b.ideal.hnf))
    });
    out
}

/// Residue degrees of the primes above p (fast path used by the analytic
/// sums: no HNF construction when p does not divide the index).
pub fn residue_degrees(k: &NumberField, p: u64) -> Vec<u32> {
    let pb = BigInt::from(p);
    if !(k.index() % &pb).is_zero() {
        let fp = modpoly::from_bigint_poly(k.poly(), p);
        return modpoly::splitting_type(&fp, p)
            .into_iter()
            .map(|(d, _m)| d as u32)
            .collect();
    }
    decompose(k, p).into_iter().map(|q| q.fdeg).collect()
}

/// Dedekind factorization: valid when p does not divide [O_K : Z[alpha]].
fn decompose_unramified_index(k: &NumberField, p: u64) -> Vec<PrimeIdeal> {
    let fp = modpoly::from_bigint_poly(k.poly(), p);
    let facs = modpoly::factor(&fp, p);
    let mut out = Vec::new();
    for (g, e) in facs {
        let fdeg = modpoly::deg(&g) as u32;
        // two-element generator beta = g(alpha)
        let gi = crate::intpoly::IntPoly::new(g.iter().map(|&c| BigInt::from(c)).collect());
        let beta = k.from_alpha_poly(&gi);
        debug_assert!(beta.is_integral());
        let ideal = Ideal::from_generators(k, &[k.from_int(&pb_big(p)), beta.clone()]);
        debug_assert_eq!(ideal.norm, BigInt::from(p).pow(fdeg));
        let vale = find_valuation_element(k, &ideal, p);
        let residue = residue_field_poly_case(k, p, &g);
        out.push(PrimeIdeal { ideal, p, e, fdeg, two_elt: beta, vale, residue });
    }
    out
}

fn pb_big(p: u64) -> BigInt {
    BigInt::from(p)
}

/// O/P for P = (p, g(alpha)): map alpha -> t mod (p, modulus).
fn residue_field_poly_case(k: &NumberField, p: u64, g: &modpoly::Poly) -> ResidueField {
    let n = k.degree();
    let (bnum, bden) = k.basis_matrix();
    let pb = BigInt::from(p);
    let mut basis_images = Vec::with_capacity(n);
    for i in 0..n {
        // normalize row so denominator is prime to p
        let mut row = bnum[i].clone();
        let mut den = bden.clone();
        let mut g0 = den.clone();
        for c in &row {
            g0 = g0.gcd(c);
        }
        if !g0.is_one() {
            for c in row.iter_mut() {
                *c /= &g0;
            }
            den /= &g0;
        }
        let dm = den.mod_floor(&pb).to_u64().unwrap();
        assert!(dm != 0, "basis denominator divisible by p in Dedekind case");
        let dinv = invmod(dm, p);
        let poly: modpoly::Poly = modpoly::trim(
            row.iter()
                .map(|c| mulmod(c.mod_floor(&pb).to_u64().unwrap(), dinv, p))
                .collect(),
        );
        basis_images.push(modpoly::rem(&poly, g, p));
    }
    ResidueField { p, modulus: g.clone(), basis_images }
}

/// Find an element of (pO : P) \ pO (integer coordinates), for valuations.
fn find_valuation_element(k: &NumberField, pideal: &Ideal, p: u64) -> Vec<BigInt> {
    let n = k.degree();
    let pb = BigInt::from(p);
    // rows_i = concat over P-basis m of coords(b_i * m) mod p
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut ei = vec![BigInt::zero(); n];
        ei[i] = BigInt::one();
        let e = FieldElement { num: ei, den: BigInt::one() };
        let mut row = Vec::with_capacity(n * n);
        for m in &pideal.hnf {
            let me = FieldElement { num: m.clone(), den: BigInt::one() };
            let prod = k.mul(&e, &me);
            row.extend(prod.num.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()));
        }
        rows.push(row);
    }
    let ker = fpmat::left_kernel(&rows, p);
    // pick a kernel vector not in pO (i.e. nonzero mod p)
    for c in &ker {
        if c.iter().any(|&x| x != 0) {
            return c.iter().map(|&x| BigInt::from(x)).collect();
        }
    }
    panic!("no valuation element found (not a prime above p?)");
}

/// General decomposition through the F_p-algebra O/pO (handles p | index).
fn decompose_via_algebra(k: &NumberField, p: u64) -> Vec<PrimeIdeal> {
    let n = k.degree();
    let pb = BigInt::from(p);
    let modp = |x: &BigInt| -> u64 { x.mod_floor(&pb).to_u64().unwrap() };
    let mult = k.mult_table();
    let mulvec = |a: &[u64], b: &[u64]| -> Vec<u64> {
        let mut out = vec![0u64; n];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (kk, &bk) in b.iter().enumerate() {
                if bk == 0 {
                    continue;
                }
                let c = mulmod(ai, bk, p);
                for (l, t) in mult[i][kk].iter().enumerate() {
                    if !t.is_zero() {
                        out[l] = (out[l] + mulmod(c, modp(t), p)) % p;
                    }
                }
            }
        }
        out
    };
    // radical via Frobenius kernel
    let mut q = p;
    while (q as usize) < n {
        q = q.saturating_mul(p);
    }
    let mut frob = Vec::with_capacity(n);
    for i in 0..n {
        let mut e = q;
        let mut base = vec![0u64; n];
        base[i] = 1;
        let mut acc: Option<Vec<u64>> = None;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => mulvec(&a, &base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = mulvec(&base, &base);
            }
        }
        frob.push(acc.unwrap());
    }
    let rad = fpmat::left_kernel(&frob, p); // basis of radical subspace
    // quotient algebra B = A / rad: choose coordinate representation
    let comps = split_semisimple(&rad, n, p, &mulvec);
    // each component: (subspace basis rows in A, unit element of component)
    let mut out = Vec::new();
    for comp in comps {
        // prime lattice: pO + radical + other components... kernel of the
        // projection onto this component = radical + sum of other components.
        // Build P = pO + span(radical) + span(all component spaces except this)
        let mut rows: Mat = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { pb.clone() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        for r in &rad {
            rows.push(r.iter().map(|&c| BigInt::from(c)).collect());
        }
        for other in &comp.others {
            rows.push(other.iter().map(|&c| BigInt::from(c)).collect());
        }
        let ideal = Ideal::from_lattice_rows(rows);
        let fdeg = comp.dim as u32;
        debug_assert_eq!(ideal.norm, BigInt::from(p).pow(fdeg));
        let vale = find_valuation_element(k, &ideal, p);
        // residue field: powers of the primitive element within the component
        let residue = residue_field_algebra_case(k, p, &comp, &mulvec);
        // e via valuation of p
        let mut pi = PrimeIdeal {
            ideal,
            p,
            e: 1,
            fdeg,
            two_elt: k.from_int(&pb), // fixed below
            vale,
            residue,
        };
        let pel = k.from_int(&pb);
        pi.e = pi.valuation(k, &pel) as u32;
        // two-element representation: p plus a short combination of the
        // HNF basis; try rows then deterministic small combos
        pi.two_elt = find_two_elt(k, &pi);
        out.push(pi);
    }
    out
}

/// A field component of the semisimple quotient.
struct Component {
    /// dimension over F_p
    dim: usize,
    /// primitive element (coords in A) and its min poly (the residue modulus)
    prim: Vec<u64>,
    minpoly: modpoly::Poly,
    /// projection images: for the residue map we store, per A-basis vector,
    /// its component part written in powers of prim
    proj_in_powers: Vec<modpoly::Poly>,
    /// spanning sets of the OTHER components + nothing else (lattice rows)
    others: Vec<Vec<u64>>,
}

/// Split the semisimple quotient A/rad into field components.
/// Works with subspaces of A directly: maintains a list of orthogonal
/// idempotent subalgebras, splitting each until its minimal polynomial
/// certificate shows a field.
fn split_semisimple(
    rad: &[Vec<u64>],
    n: usize,
    p: u64,
    mulvec: &dyn Fn(&[u64], &[u64]) -> Vec<u64>,
) -> Vec<Component> {
    // subspace representation: rows spanning (component + radical), plus the
    // component's identity element. We track each component as (basis of the
    // subspace W ⊆ A with W + rad = preimage, identity idempotent e).
    // Start: whole algebra with identity 1.
    let mut one = vec![0u64; n];
    one[0] = 1; // b_0 = 1 in the integral basis
    // complement basis of rad in A: take A-basis vectors completing rad
    // we represent a component by its idempotent e; the subspace is e*A.
    let mut stack: Vec<Vec<u64>> = vec![one];
    let mut fields: Vec<(Vec<u64>, Vec<Vec<u64>>)> = Vec::new(); // (idempotent, basis of e*A mod rad)
    let mut rng: u64 = 0x5eed5eed ^ (p.rotate_left(17));
    let mut next = move || {
        rng ^= rng << 13;
        rng ^= rng >> 7;
        rng ^= rng << 17;
        rng
    };
    // helper: basis of the subspace e*A modulo rad
    let subspace_mod_rad = |e: &[u64]| -> Vec<Vec<u64>> {
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for i in 0..n {
            let mut ei = vec![0u64; n];
            ei[i] = 1;
            rows.push(mulvec(e, &ei));
        }
        // reduce modulo radical: quotient coordinates = rref of [rad; rows]
        // we want a basis of (rows + rad)/rad: stack rad first, rref, take
        // rows whose pivots are new beyond rad's
        let mut all: Vec<Vec<u64>> = rad.to_vec();
        let rad_rank = {
            let mut c = all.clone();
            fpmat::rref(&mut c, p)
        }
        .len();
        all.extend(rows);
        let mut c = all.clone();
        let pivots = fpmat::rref(&mut c, p);
        let total = pivots.len();
        // basis of quotient: the rref rows beyond rad's span, lifted
        let basis: Vec<Vec<u64>> = c[rad_rank..total].to_vec();
        basis
    };
    while let Some(e) = stack.pop() {
        let basis = subspace_mod_rad(&e);
        let dim = basis.len();
        assert!(dim >= 1);
        // try random elements of e*A until min poly is squarefree with
        // a certificate: irreducible of degree dim -> field
        let mut attempts = 0;
        loop {
            attempts += 1;
            assert!(attempts < 200, "component splitting failed to converge");
            // random element x = e * (random combo of basis)
            let mut x = vec![0u64; n];
            for b in &basis {
                let c = next() % p;
                if c == 0 {
                    continue;
                }
                for t in 0..n {
                    x[t] = (x[t] + mulmod(c, b[t], p)) % p;
                }
            }
            // min poly of x in the quotient algebra (modulo rad):
            // compute powers of x, reduce into quotient coords, find dependency
            let (mp, _pows) = minpoly_mod_rad(&x, &e, rad, n, p, mulvec, dim);
            let facs = modpoly::factor(&mp, p);
            if facs.len() == 1 && facs[0].1 == 1 {
                let d = modpoly::deg(&facs[0].0) as usize;
                if d == dim {
                    // field component certified
                    fields.push((e.clone(), basis.clone()));
                    break;
                }
                // irreducible but small degree: x generates a subfield; retry
                continue;
            }
            // split along the first factor: u = q1(x), e1 = idempotent from
            // gcd decomposition: q1^a and m/q1^a coprime -> e1 = s(x) * m2(x)
            let m = mp.clone();
            let q1 = {
                let mut f0 = facs[0].0.clone();
                for _ in 1..facs[0].1 {
                    f0 = modpoly::mul(&f0, &facs[0].0, p);
                }
                f0
            };
            let m2 = modpoly::divrem(&m, &q1, p).0;
            // bezout: s*q1 + t*m2 = 1
            let (g, s, t) = poly_ext_gcd(&q1, &m2, p);
            if modpoly::deg(&g) != 0 {
                continue; // not coprime (shouldn't happen for exact powers)
            }
            let ginv = invmod(g[0], p);
            let s = modpoly::scale(&s, ginv, p);
            let _t = t;
            // idempotent1 = (s*q1)(x) evaluated in the algebra: component of m2
            let sq1 = modpoly::mul(&s, &q1, p);
            let e1 = eval_poly_in_algebra(&sq1, &x, &e, n, p, mulvec);
            // e2 = e - e1
            let mut e2 = vec![0u64; n];
            for t2 in 0..n {
                e2[t2] = (e[t2] + p - e1[t2]) % p;
            }
            stack.push(e1);
            stack.push(e2);
            break;
        }
    }
    // now build Components with projections
    let mut comps = Vec::new();
    for (idx, (e, basis)) in fields.iter().enumerate() {
        let dim = basis.len();
        // find primitive element: random x in e*A with irreducible min poly
        // of degree dim
        let mut rng2: u64 = 0xabcd1234 ^ (idx as u64) ^ (p << 1);
        let mut next2 = move || {
            rng2 ^= rng2 << 13;
            rng2 ^= rng2 >> 7;
            rng2 ^= rng2 << 17;
            rng2
        };
        let (prim, minpoly) = loop {
            let mut x = vec![0u64; n];
            for b in basis {
                let c = next2() % p;
                if c == 0 {
                    continue;
                }
                for t in 0..n {
                    x[t] = (x[t] + mulmod(c, b[t], p)) % p;
                }
            }
            let (mp, _) = minpoly_mod_rad(&x, e, rad, n, p, mulvec, dim);
            if modpoly::deg(&mp) as usize == dim && modpoly::is_irreducible(&mp, p) {
                break (x, mp);
            }
        };
        // projection of each A-basis vector onto this component in powers of prim:
        // solve in quotient coords: e*b_i = sum c_j prim^j (mod rad)
        // build matrix with columns = quotient coords of prim^j (j < dim)
        let quot_coords = |v: &[u64]| -> Vec<u64> {
            // coordinates of v in the quotient (A / (rad + other components))?
            // here: in the subspace basis of this component mod rad
            // solve: v*e ≡ sum x_j basis_j (mod rad): least squares via rref
            let ve = mulvec(v, e);
            // solve [basisT | radT] * coeffs = ve
            let mut cols: Vec<Vec<u64>> = Vec::new();
            for b in basis {
                cols.push(b.clone());
            }
            for r in rad {
                cols.push(r.clone());
            }
            // matrix n x (dim + #rad): solve M x = ve
            let rowsm: Vec<Vec<u64>> = (0..n)
                .map(|i| cols.iter().map(|c| c[i]).collect())
                .collect();
            let sol = fpmat::solve(&rowsm, &ve, p).expect("projection solve failed");
            sol[..dim].to_vec()
        };
        // powers of prim in quotient coords
        let mut pw = vec![0u64; n];
        pw[0] = 1;
        let pw0 = mulvec(&pw, e); // e itself = prim^0 in the component
        let mut pows_q: Vec<Vec<u64>> = vec![quot_coords(&pw0)];
        let mut cur = e.clone();
        for _ in 1..dim {
            cur = mulvec(&cur, &prim);
            pows_q.push(quot_coords(&cur));
        }
        // matrix P: rows = pows_q (dim x dim): solve c * P = quot(v)
        let pmat: Vec<Vec<u64>> = pows_q.clone();
        let mut proj_in_powers = Vec::with_capacity(n);
        for i in 0..n {
            let mut ei = vec![0u64; n];
            ei[i] = 1;
            let target = quot_coords(&ei);
            // solve x * pmat = target: transpose to pmat^T x = target
            let pt: Vec<Vec<u64>> = (0..dim)
                .map(|c| (0..dim).map(|r| pmat[r][c]).collect())
                .collect();
            let x = fpmat::solve(&pt, &target, p).expect("power-basis solve failed");
            proj_in_powers.push(modpoly::trim(x));
        }
        // others: union of the bases of all other components
        let mut others = Vec::new();
        for (jdx, (_, obasis)) in fields.iter().enumerate() {
            if jdx != idx {
                others.extend(obasis.iter().cloned());
            }
        }
        comps.push(Component { dim, prim, minpoly, proj_in_powers, others });
    }
    comps
}

/// Minimal polynomial of x acting in the quotient (e*A + rad)/rad.
fn minpoly_mod_rad(
    x: &[u64],
    e: &[u64],
    rad: &[Vec<u64>],
    n: usize,
    p: u64,
    mulvec: &dyn Fn(&[u64], &[u64]) -> Vec<u64>,
    dim_bound: usize,
) -> (modpoly::Poly, Vec<Vec<u64>>) {
    // powers e, x, x^2... in A; find first linear dependency mod rad
    let mut pows: Vec<Vec<u64>> = vec![e.to_vec()];
    let mut cur = e.to_vec();
    for _ in 0..dim_bound {
        cur = mulvec(&cur, x);
        pows.push(cur.clone());
    }
    // find minimal k with dependency among pows[0..=k] mod rad
    for k in 1..=dim_bound {
        let mut rows: Vec<Vec<u64>> = rad.to_vec();
        let rad_rank = fpmat::rank(&rows.clone(), p);
        rows.extend(pows[..=k].iter().cloned());
        let r = fpmat::rank(&rows, p);
        if r < rad_rank + k + 1 {
            // dependency: solve sum c_i pows[i] ∈ rad
            let mut m: Vec<Vec<u64>> = pows[..=k].to_vec();
            m.extend(rad.iter().cloned());
            let ker = fpmat::left_kernel(&m, p);
            // want kernel vector with nonzero coefficient on pows[k]
            for kv in &ker {
                if kv[k] != 0 {
                    let inv = invmod(kv[k], p);
                    let mp: modpoly::Poly =
                        modpoly::trim((0..=k).map(|i| mulmod(kv[i], inv, p)).collect());
                    return (mp, pows);
                }
            }
        }
    }
    panic!("minpoly not found within dimension bound");
}

fn eval_poly_in_algebra(
    g: &modpoly::Poly,
    x: &[u64],
    e: &[u64],
    n: usize,
    p: u64,
    mulvec: &dyn Fn(&[u64], &[u64]) -> Vec<u64>,
) -> Vec<u64> {
    // Horner relative to identity e
    let mut acc = vec![0u64; n];
    for &c in g.iter().rev() {
        acc = mulvec(&acc, x);
        if c != 0 {
            for t in 0..n {
                acc[t] = (acc[t] + mulmod(c, e[t], p)) % p;
            }
        }
    }
    acc
}

/// Extended gcd for F_p polynomials: returns (g, s, t) with s*a + t*b = g.
fn poly_ext_gcd(a: &modpoly::Poly, b: &modpoly::Poly, p: u64) -> (modpoly::Poly, modpoly::Poly, modpoly::Poly) {
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    let mut s0: modpoly::Poly = vec![1];
    let mut s1: modpoly::Poly = vec![];
    let mut t0: modpoly::Poly = vec![];
    let mut t1: modpoly::Poly = vec![1];
    while !r1.is_empty() {
        let (q, r) = modpoly::divrem(&r0, &r1, p);
        let ns = modpoly::sub(&s0, &modpoly::mul(&q, &s1, p), p);
        let nt = modpoly::sub(&t0, &modpoly::mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, ns);
        t0 = std::mem::replace(&mut t1, nt);
    }
    (r0, s0, t0)
}

/// Search for beta with P = (p, beta).
fn find_two_elt(k: &NumberField, pi: &PrimeIdeal) -> FieldElement {
    let p = k.from_int(&BigInt::from(pi.p));
    // try HNF rows
    for r in &pi.ideal.hnf {
        let beta = FieldElement { num: r.clone(), den: BigInt::one() };
        if pi.ideal.equals_two_generated(k, &p, &beta) {
            return beta;
        }
    }
    // deterministic small combinations
    let n = k.degree();
    let mut state: u64 = 0x2e1e_7e57_5eed;
    for _ in 0..2000 {
        let mut num = vec![BigInt::zero(); n];
        for (i, r) in pi.ideal.hnf.iter().enumerate() {
            let c = (splitmix(&mut state) % 5) as i64 - 2;
            if c == 0 {
                continue;
            }
            for t in 0..n {
                num[t] += BigInt::from(c) * &r[t];
            }
            let _ = i;
        }
        let beta = FieldElement { num, den: BigInt::one() };
        if beta.is_zero() {
            continue;
        }
        if pi.ideal.equals_two_generated(k, &p, &beta) {
            return beta;
        }
    }
    panic!("two-element representation not found");
}

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// O/P from a certified field component of O/pO.
fn residue_field_algebra_case(
    _k: &NumberField,
    p: u64,
    comp: &Component,
    _mulvec: &dyn Fn(&[u64], &[u64]) -> Vec<u64>,
) -> ResidueField {
    ResidueField {
        p,
        modulus: comp.minpoly.clone(),
        basis_images: comp.proj_in_powers.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intpoly::IntPoly;

    fn field(coeffs: &[i64]) -> NumberField {
        NumberField::new(IntPoly::from_i64_desc(coeffs)).unwrap()
    }

    #[test]
    fn test_decompose_gaussian() {
        let k = field(&[1, 0, 1]);
        // 5 ≡ 1 mod 4 splits
        let ps = decompose(&k, 5);
        assert_eq!(ps.len(), 2);
        for q in &ps {
            assert_eq!((q.e, q.fdeg), (1, 1));
            assert_eq!(q.norm(), BigInt::from(5));
        }
        // 2 ramifies
        let ps = decompose(&k, 2);
        assert_eq!(ps.len(), 1);
        assert_eq!((ps[0].e, ps[0].fdeg), (2, 1));
        // 3 inert
        let ps = decompose(&k, 3);
        assert_eq!(ps.len(), 1);
        assert_eq!((ps[0].e, ps[0].fdeg), (1, 2));
        assert_eq!(ps[0].norm(), BigInt::from(9));
    }

    #[test]
    fn test_decompose_sqrt_m5() {
        let k = field(&[1, 0, 5]); // x^2+5, disc -20
        let ps = decompose(&k, 3);
        assert_eq!(ps.len(), 2);
        for q in &ps {
            assert_eq!(q.norm(), BigInt::from(3));
        }
    }

    #[test]
    fn test_valuation_ramified() {
        let k = field(&[1, 0, 1]);
        let p2 = &decompose(&k, 2)[0];
        // ord_P(1+i) = 1 at the ramified prime above 2
        let one_plus_i = k.add(&k.one(), &k.gen());
        assert_eq!(p2.valuation(&k, &one_plus_i), 1);
        // ord_P(2) = 2
        assert_eq!(p2.valuation(&k, &k.from_int(&BigInt::from(2))), 2);
        // ord_P(1) = 0
        assert_eq!(p2.valuation(&k, &k.one()), 0);
        // additivity: ord((1+i)^3 * 2) = 3 + 2
        let x = k.mul(&k.pow(&one_plus_i, 3), &k.from_int(&BigInt::from(2)));
        assert_eq!(p2.valuation(&k, &x), 5);
    }

    #[test]
    fn test_norm_multiplicativity() {
        let k = field(&[1, 0, 1]);
        let ps = decompose(&k, 5);
        let prod = ps[0].ideal.mul(&k, &ps[1].ideal);
        assert_eq!(prod.norm, BigInt::from(25));
        assert_eq!(
            prod.norm,
            &ps[0].ideal.norm * &ps[1].ideal.norm
        );
        // product of all primes above 5 with multiplicity e = (5)
        assert_eq!(prod, Ideal::from_int(&k, &BigInt::from(5)));
    }

    #[test]
    fn test_decompose_index_prime() {
        // x^3 - 17: index 3; 17 ≡ -1 mod 9 so 3 = P^2 Q (algebra route)
        let k = field(&[1, 0, 0, -17]);
        assert_eq!(*k.index(), BigInt::from(3));
        let ps = decompose(&k, 3);
        assert_eq!(ps.len(), 2);
        let mut efs: Vec<(u32, u32)> = ps.iter().map(|q| (q.e, q.fdeg)).collect();
        efs.sort();
        assert_eq!(efs, vec![(1, 1), (2, 1)]);
        let p3 = k.from_int(&BigInt::from(3));
        for q in &ps {
            // valuation of 3 at each prime is its e
            assert_eq!(q.valuation(&k, &p3) as u32, q.e);
            // two-element representation generates
            assert!(q.ideal.equals_two_generated(&k, &p3, &q.two_elt));
        }
        // product P^2 * Q = (3)
        let prod = ps[0].ideal.pow(&k, ps[0].e).mul(&k, &ps[1].ideal.pow(&k, ps[1].e));
        assert_eq!(prod, Ideal::from_int(&k, &BigInt::from(3)));
        // 17 ramifies totally too: 17 = (alpha)^3 exactly
        let ps17 = decompose(&k, 17);
        assert_eq!(ps17.len(), 1);
        assert_eq!((ps17[0].e, ps17[0].fdeg), (3, 1));
        let alpha_ideal = Ideal::principal(&k, &k.gen());
        assert_eq!(alpha_ideal, ps17[0].ideal);
    }

    #[test]
    fn test_sum_ef_corpus() {
        for coeffs in [
            vec![1i64, 0, 1],
            vec![1, 0, -2],
            vec![1, 0, 5],
            vec![1, 0, -5],
            vec![1, 0, 0, -17],
            vec![1, 1, 1, 1, 1],
            vec![1, 0, -1, 1],
        ] {
            let k = field(&coeffs);
            let n = k.degree();
            for p in [2u64, 3, 5, 7, 11, 13] {
                let ps = decompose(&k, p);
                let s: u32 = ps.iter().map(|q| q.e * q.fdeg).sum();
                assert_eq!(s as usize, n, "sum ef != n for {coeffs:?} at {p}");
                for q in &ps {
                    // norm of the HNF lattice = p^f
                    assert_eq!(q.ideal.norm, BigInt::from(p).pow(q.fdeg));
                    // closed under multiplication by basis elements
                    for i in 0..n {
                        let mut ei = vec![BigInt::zero(); n];
                        ei[i] = BigInt::one();
                        let b = FieldElement { num: ei, den: BigInt::one() };
                        for r in &q.ideal.hnf {
                            let x = FieldElement { num: r.clone(), den: BigInt::one() };
                            assert!(q.ideal.contains(&k.mul(&b, &x)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn test_residue_field_reduction() {
        // Q(sqrt2), p=7 splits: alpha -> 3 or 4 mod 7
        let k = field(&[1, 0, -2]);
        let ps = decompose(&k, 7);
        assert_eq!(ps.len(), 2);
        for q in &ps {
            let img = q.residue.reduce(&k.gen());
            assert_eq!(img.len(), 1);
            let r = img[0];
            assert_eq!(mulmod(r, r, 7), 2);
            // reduction is multiplicative: (1+alpha)^2 -> (1+r)^2
            let a = k.add(&k.one(), &k.gen());
            let asq = k.mul(&a, &a);
            let lhs = q.residue.reduce(&asq);
            let rhs = q.residue.mul(&q.residue.reduce(&a), &q.residue.reduce(&a));
            assert_eq!(lhs, rhs);
        }
        // inert prime: residue field F_9 for p=3 in Q(i)
        let k = field(&[1, 0, 1]);
        let q = &decompose(&k, 3)[0];
        assert_eq!(q.residue.fdeg(), 2);
        let i_img = q.residue.reduce(&k.gen());
        // i^2 = -1 in F_9
        let sq = q.residue.mul(&i_img, &i_img);
        assert_eq!(sq, vec![2]); // -1 mod 3
    }

    #[test]
    fn test_ideal_inverse() {
        let k = field(&[1, 0, 5]);
        let q = &decompose(&k, 3)[0];
        let (j, d) = q.ideal.inverse_scaled(&k);
        // I * (J/d) = O: I*J = d*O
        let prod = q.ideal.mul(&k, &j);
        let expect = Ideal::from_int(&k, &d);
        assert_eq!(prod, expect);
    }

    #[test]
    fn test_degree16_decompose_index_primes() {
        let k = field(&[
            1, 0, -36, 0, 488, 0, -3186, 0, 10920, 0, -19804, 0, 17801, 0, -6264, 0, 64,
        ]);
        // index divisible by 2, 11, 13, 367
        for p in [2u64, 11, 13, 367] {
            assert!((k.index() % BigInt::from(p)).is_zero(), "index at {p}");
            let ps = decompose(&k, p);
            let s: u32 = ps.iter().map(|q| q.e * q.fdeg).sum();
            assert_eq!(s, 16, "sum ef at {p}");
        }
        // 113 divides disc but not the index: Dedekind route
        assert!(!(k.index() % BigInt::from(113u32)).is_zero());
        let ps = decompose(&k, 113);
        let s: u32 = ps.iter().map(|q| q.e * q.fdeg).sum();
        assert_eq!(s, 16);
    }
}
