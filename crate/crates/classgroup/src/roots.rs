//! Certified complex embeddings of a number field: all roots of the defining
//! polynomial enclosed in disjoint boxes/intervals at a requested precision.
//!
//! Real roots come from Sturm isolation + bisection (exact). Complex roots
//! are seeded by a float Aberth iteration, polished by Newton in dyadic
//! arithmetic, and certified by the inclusion bound
//! min_i |z - alpha_i| <= n |f(z)/f'(z)| for monic f.

use crate::dyadic::{Dir, Dyadic};
use crate::interval::{CBox, RInt};
use crate::intpoly::IntPoly;
use num_traits::ToPrimitive;
use std::cmp::Ordering;

/// Enclosures of the n embeddings: r1 real intervals and r2 upper-half-plane
/// boxes (conjugates implicit).
#[derive(Debug, Clone)]
pub struct Embeddings {
    pub prec: u32,
    pub reals: Vec<RInt>,
    pub complexes: Vec<CBox>,
}

impl Embeddings {
    pub fn r1(&self) -> usize {
        self.reals.len()
    }

    pub fn r2(&self) -> usize {
        self.complexes.len()
    }
}

/// Compute certified embeddings of monic squarefree f at precision `prec`.
pub fn embeddings(f: &IntPoly, prec: u32) -> Embeddings {
    assert!(f.is_monic(), "embeddings need a monic polynomial");
    let n = f.deg();
    if n == 0 {
        return Embeddings { prec, reals: vec![], complexes: vec![] };
    }
    let wp = prec + 24;
    // real roots: Sturm isolation + bisection to 2^-wp
    let iso = f.isolate_real_roots(wp);
    let reals: Vec<RInt> = iso
        .into_iter()
        .map(|(a, b)| RInt::new(a, b))
        .collect();
    let r1 = reals.len();
    assert!((n - r1) % 2 == 0, "real root count parity");
    let r2 = (n - r1) / 2;
    if r2 == 0 {
        return Embeddings { prec, reals, complexes: vec![] };
    }
    // complex roots: float Aberth seeds
    let fp = f.derivative();
    let mut attempt = 0u32;
    loop {
        attempt += 1;
        let seeds = aberth_f64(f, 200 * attempt as usize);
        // keep upper-half-plane candidates, farthest from the real axis first
        let mut cands: Vec<(f64, f64)> = seeds.into_iter().filter(|&(_, im)| im > 0.0).collect();
        cands.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(Ordering::Equal));
        cands.truncate(r2);
        if cands.len() < r2 {
            assert!(attempt < 8, "failed to seed complex roots");
            continue;
        }
        // polish each candidate by dyadic Newton
        let mut boxes = Vec::with_capacity(r2);
        let mut ok = true;
        for &(re, im) in &cands {
            match polish_newton(f, &fp, re, im, wp) {
                Some(b) => boxes.push(b),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && certify_disjoint(&reals, &boxes, wp) {
            boxes.sort_by(|a, b| {
                a.re.lo
                    .cmp_val(&b.re.lo)
                    .then(a.im.lo.cmp_val(&b.im.lo))
            });
            return Embeddings { prec, reals, complexes: boxes };
        }
        assert!(attempt < 8, "failed to certify complex embeddings");
    }
}

/// Float Aberth-Ehrlich iteration; returns approximate roots.
fn aberth_f64(f: &IntPoly, max_iters: usize) -> Vec<(f64, f64)> {
    let n = f.deg();
    let coeffs: Vec<f64> = f.coeffs.iter().map(|c| c.to_f64().unwrap_or(0.0)).collect();
    // Cauchy-style radius
    let lc = *coeffs.last().unwrap();
    let radius = 1.0
        + coeffs[..n]
            .iter()
            .map(|c| (c / lc).abs())
            .fold(0.0f64, f64::max);
    let radius = radius.min(1e100);
    // deterministic seeds on a slightly squashed circle
    let mut z: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.35) / n as f64 + 0.4321;
            (radius * 0.7 * theta.cos(), radius * 0.7 * theta.sin() + 1e-3)
        })
        .collect();
    let eval = |c: &[f64], (re, im): (f64, f64)| -> (f64, f64) {
        let mut ar = 0.0f64;
        let mut ai = 0.0f64;
        for &co in c.iter().rev() {
            let nr = ar * re - ai * im + co;
            let ni = ar * im + ai * re;
            ar = nr;
            ai = ni;
        }
        (ar, ai)
    };
    let dcoeffs: Vec<f64> = coeffs[1..]
        .iter()
        .enumerate()
        .map(|(i, c)| c * (i as f64 + 1.0))
        .collect();
    for _ in 0..max_iters {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (fr, fi) = eval(&coeffs, z[i]);
            let (dr, di) = eval(&dcoeffs, z[i]);
            let d2 = dr * dr + di * di;
            if d2 == 0.0 {
                z[i].0 += 1e-6;
                continue;
            }
            // w = f/f'
            let wr = (fr * dr + fi * di) / d2;
            let wi = (fi * dr - fr * di) / d2;
            // s = sum 1/(z_i - z_j)
            let mut sr = 0.0;
            let mut si = 0.0;
            for j in 0..n {
                if j == i {
                    continue;
                }
                let er = z[i].0 - z[j].0;
                let ei = z[i].1 - z[j].1;
                let e2 = er * er + ei * ei;
                if e2 == 0.0 {
                    continue;
                }
                sr += er / e2;
                si += -ei / e2;
            }
            // delta = w / (1 - w*s)
            let tr = 1.0 - (wr * sr - wi * si);
            let ti = -(wr * si + wi * sr);
            let t2 = tr * tr + ti * ti;
            let (dr2, di2) = if t2 > 1e-300 {
                ((wr * tr + wi * ti) / t2, (wi * tr - wr * ti) / t2)
            } else {
                (wr, wi)
            };
            z[i].0 -= dr2;
            z[i].1 -= di2;
            moved = moved.max(dr2.abs() + di2.abs());
        }
        if moved < 1e-13 {
            break;
        }
    }
    z
}

/// Newton polish at dyadic precision; returns a certified box (with
/// inclusion radius) or None if it failed to converge.
fn polish_newton(f: &IntPoly, fp: &IntPoly, re: f64, im: f64, wp: u32) -> Option<CBox> {
    let n = f.deg() as i64;
    let mut zr = Dyadic::from_f64(re);
    let mut zi = Dyadic::from_f64(im);
    // precision ladder
    let mut cur = 64u32;
    let mut last_rad = f64::INFINITY;
    for iter in 0..80 {
        let prec = cur.min(wp + 8);
        let zb = CBox { re: RInt::point(zr.round(prec, Dir::Down)), im: RInt::point(zi.round(prec, Dir::Down)) };
        let fv = f.eval_cbox(&zb, prec);
        let dv = fp.eval_cbox(&zb, prec);
        let d2 = dv.abs_sq(prec);
        if d2.contains_zero() {
            return None;
        }
        // newton delta = f * conj(f') / |f'|^2, midpoints
        let w = fv.mul(&dv.conj(), prec);
        let dr = w.re.div(&d2, prec);
        let di = w.im.div(&d2, prec);
        zr = zr.sub(&dr.lo.add_exact(&dr.hi).mul_exact(&Dyadic::new(num_bigint::BigInt::from(1), -1)), prec, Dir::Down);
        zi = zi.sub(&di.lo.add_exact(&di.hi).mul_exact(&Dyadic::new(num_bigint::BigInt::from(1), -1)), prec, Dir::Down);
        // inclusion radius: n |f(z)| / |f'(z)|
        let zb2 = CBox { re: RInt::point(zr.clone()), im: RInt::point(zi.clone()) };
        let fv2 = f.eval_cbox(&zb2, prec);
        let dv2 = fp.eval_cbox(&zb2, prec);
        let dabs = dv2.abs(prec);
        if !dabs.lo.is_positive() {
            cur = (cur * 2).min(wp + 8);
            continue;
        }
        let rad = fv2
            .abs(prec)
            .scale_int(&num_bigint::BigInt::from(n), prec)
            .div(&RInt::point(dabs.lo.clone()), prec)
            .hi;
        let rad_f = rad.to_f64(Dir::Up);
        let target = 2f64.powi(-(wp as i32));
        if rad_f < target && iter > 1 {
            // certified box: center ± rad
            let rr = RInt::new(zr.sub(&rad, prec + 8, Dir::Down), zr.add(&rad, prec + 8, Dir::Up));
            let ri = RInt::new(zi.sub(&rad, prec + 8, Dir::Down), zi.add(&rad, prec + 8, Dir::Up));
            return Some(CBox { re: rr, im: ri });
        }
        if rad_f >= last_rad * 0.5 {
            // not improving fast: raise working precision
            cur = (cur * 2).min(wp + 8);
        }
        last_rad = rad_f;
    }
    None
}

/// Verify all enclosures are pairwise disjoint, complex boxes stay off the
/// real axis, and conjugate boxes don't collide.
fn certify_disjoint(reals: &[RInt], boxes: &[CBox], _wp: u32) -> bool {
    for (i, r) in reals.iter().enumerate() {
        for (j, s) in reals.iter().enumerate() {
            if i < j && !(r.hi.cmp_val(&s.lo) == Ordering::Less || s.hi.cmp_val(&r.lo) == Ordering::Less) {
                return false;
            }
        }
    }
    for b in boxes {
        if !b.im.lo.is_positive() {
            return false; // touches or crosses the real axis
        }
    }
    for (i, a) in boxes.iter().enumerate() {
        for (j, b) in boxes.iter().enumerate() {
            if i < j {
                let re_sep = a.re.hi.cmp_val(&b.re.lo) == Ordering::Less
                    || b.re.hi.cmp_val(&a.re.lo) == Ordering::Less;
                let im_sep = a.im.hi.cmp_val(&b.im.lo) == Ordering::Less
                    || b.im.hi.cmp_val(&a.im.lo) == Ordering::Less;
                if !(re_sep || im_sep) {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_gaussian() {
        // x^2 + 1: roots ±i
        let f = IntPoly::from_i64_desc(&[1, 0, 1]);
        let e = embeddings(&f, 128);
        assert_eq!(e.r1(), 0);
        assert_eq!(e.r2(), 1);
        let b = &e.complexes[0];
        assert!(b.re.contains(&Dyadic::zero()));
        assert!(b.im.contains(&Dyadic::one()));
        assert!(b.im.width().to_f64(Dir::Up) < 1e-35);
    }

    #[test]
    fn test_sqrt2() {
        let f = IntPoly::from_i64_desc(&[1, 0, -2]);
        let e = embeddings(&f, 128);
        assert_eq!(e.r1(), 2);
        assert_eq!(e.r2(), 0);
        let s = Dyadic::from_f64(std::f64::consts::SQRT_2);
        assert!(e.reals[1].contains(&s) || e.reals[1].lo.cmp_val(&s) == Ordering::Less);
        assert!((e.reals[1].mid_f64() - std::f64::consts::SQRT_2).abs() < 1e-12);
        assert!((e.reals[0].mid_f64() + std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn test_cubic_17() {
        // x^3 - 17: one real, one conjugate pair
        let f = IntPoly::from_i64_desc(&[1, 0, 0, -17]);
        let e = embeddings(&f, 128);
        assert_eq!(e.r1(), 1);
        assert_eq!(e.r2(), 1);
        let real = e.reals[0].mid_f64();
        assert!((real - 17f64.powf(1.0 / 3.0)).abs() < 1e-12);
        let b = &e.complexes[0];
        // |complex root| = 17^(1/3)
        let m = b.abs_sq(128).sqrt(128).mid_f64();
        assert!((m - 17f64.powf(1.0 / 3.0)).abs() < 1e-10);
    }

    #[test]
    fn test_cyclotomic5() {
        // x^4+x^3+x^2+x+1: two conjugate pairs on unit circle
        let f = IntPoly::from_i64_desc(&[1, 1, 1, 1, 1]);
        let e = embeddings(&f, 96);
        assert_eq!(e.r1(), 0);
        assert_eq!(e.r2(), 2);
        for b in &e.complexes {
            let m = b.abs_sq(96).mid_f64();
            assert!((m - 1.0).abs() < 1e-20);
        }
    }

    #[test]
    fn test_degree13_totally_real() {
        let mut f = IntPoly::one();
        for i in -6i64..=6 {
            f = f.mul(&IntPoly::from_i64_desc(&[1, -i]));
        }
        f = f.add(&IntPoly::one());
        let e = embeddings(&f, 96);
        assert_eq!(e.r1(), 13);
        assert_eq!(e.r2(), 0);
    }
}
