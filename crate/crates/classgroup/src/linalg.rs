//! Exact integer linear algebra: Hermite and Smith normal forms with
//! transformation matrices, kernels, determinants, and the group-theoretic
//! consumers — tentative class group presentation and discrete logarithms
//! of ideals over a factor base.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Mat = Vec<Vec<BigInt>>;

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let mut out = vec![vec![BigInt::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if b[l][j].is_zero() {
                    continue;
                }
                let t = &a[i][l] * &b[l][j];
                out[i][j] += t;
            }
        }
    }
    out
}

pub fn mat_vec(v: &[BigInt], m: &Mat) -> Vec<BigInt> {
    // row vector times matrix
    if m.is_empty() {
        return vec![];
    }
    let cols = m[0].len();
    let mut out = vec![BigInt::zero(); cols];
    for (i, vi) in v.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        for j in 0..cols {
            if !m[i][j].is_zero() {
                out[j] += vi * &m[i][j];
            }
        }
    }
    out
}

/// Bareiss fraction-free determinant of a square matrix.
pub fn det_bareiss(m: &Mat) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Mat = m.to_vec();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            // pivot search
            let mut found = None;
            for i in k + 1..n {
                if !a[i][k].is_zero() {
                    found = Some(i);
                    break;
                }
            }
            match found {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                let (q, r) = t.div_rem(&prev);
                debug_assert!(r.is_zero());
                a[i][j] = q;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Row-style Hermite normal form: returns H with pivots left-to-right,
/// positive pivots, entries above each pivot reduced into [0, pivot),
/// zero rows at the bottom.
pub fn hnf(m: &Mat) -> Mat {
    hnf_with_transform(m).0
}

/// HNF with unimodular transform: U * M = H.
pub fn hnf_with_transform(m: &Mat) -> (Mat, Mat) {
    let k = m.len();
    let mut a: Mat = m.to_vec();
    let mut u = identity(k);
    if k == 0 {
        return (a, u);
    }
    let n = a[0].len();
    let mut r = 0usize; // next pivot row
    for col in 0..n {
        if r >= k {
            break;
        }
        // gather rows >= r with nonzero entry in col and reduce them to one
        loop {
            let mut nz: Vec<usize> = (r..k).filter(|&i| !a[i][col].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            if nz.len() == 1 {
                let i = nz[0];
                a.swap(r, i);
                u.swap(r, i);
                break;
            }
            // pick the two smallest by |entry|
            nz.sort_by_key(|&i| a[i][col].magnitude().clone());
            let (i, j) = (nz[0], nz[1]);
            let ai = a[i][col].clone();
            let aj = a[j][col].clone();
            let eg = ai.extended_gcd(&aj);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let ai_g = &ai / &g;
            let aj_g = &aj / &g;
            // rows: new_i = x*row_i + y*row_j ; new_j = -aj/g*row_i + ai/g*row_j
            for t in 0..n {
                let ri = a[i][t].clone();
                let rj = a[j][t].clone();
                a[i][t] = &x * &ri + &y * &rj;
                a[j][t] = -&aj_g * &ri + &ai_g * &rj;
            }
            for t in 0..k {
                let ri = u[i][t].clone();
                let rj = u[j][t].clone();
                u[i][t] = &x * &ri + &y * &rj;
                u[j][t] = -&aj_g * &ri + &ai_g * &rj;
            }
            debug_assert!(a[j][col].is_zero());
        }
        if r < k && !a[r][col].is_zero() {
            if a[r][col].is_negative() {
                for t in 0..n {
                    a[r][t] = -a[r][t].clone();
                }
                for t in 0..k {
                    u[r][t] = -u[r][t].clone();
                }
            }
            // reduce entries above the pivot
            let piv = a[r][col].clone();
            for i in 0..r {
                if a[i][col].is_zero() {
                    continue;
                }
                let q = a[i][col].div_floor(&piv);
                if q.is_zero() {
                    continue;
                }
                for t in 0..n {
                    let s = &q * &a[r][t];
                    a[i][t] -= s;
                }
                for t in 0..k {
                    let s = &q * &u[r][t];
                    u[i][t] -= s;
                }
            }
            r += 1;
        }
    }
    (a, u)
}

/// Basis of the left kernel {z : z M = 0} as rows (saturated lattice).
pub fn left_kernel(m: &Mat) -> Mat {
    let (h, u) = hnf_with_transform(m);
    let mut out = Vec::new();
    for (i, row) in h.iter().enumerate() {
        if row.iter().all(|c| c.is_zero()) {
            out.push(u[i].clone());
        }
    }
    out
}

/// Smith normal form with transforms: U * M * V = S, S diagonal with
/// d_1 | d_2 | ... (nonnegative), U and V unimodular.
pub fn snf_with_transforms(m: &Mat) -> (Mat, Mat, Mat) {
    let k = m.len();
    let n = if k == 0 { 0 } else { m[0].len() };
    let mut a: Mat = m.to_vec();
    let mut u = identity(k);
    let mut v = identity(n);
    let dim = k.min(n);
    let mut t = 0usize;
    while t < dim {
        // find a nonzero pivot in the submatrix
        let mut piv: Option<(usize, usize)> = None;
        let mut best: Option<BigInt> = None;
        for i in t..k {
            for j in t..n {
                if !a[i][j].is_zero() {
                    let mag = a[i][j].abs();
                    if best.as_ref().map_or(true, |b| &mag < b) {
                        best = Some(mag);
                        piv = Some((i, j));
                    }
                }
            }
        }
        let Some((pi, pj)) = piv else { break };
        a.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut a, t, pj);
        swap_cols(&mut v, t, pj);
        // clear row and column t
        let mut dirty = true;
        while dirty {
            dirty = false;
            // eliminate column below/above via row ops
            for i in 0..k {
                if i == t || a[i][t].is_zero() {
                    continue;
                }
                let (q, r) = a[i][t].div_rem(&a[t][t]);
                if !q.is_zero() {
                    row_sub(&mut a, i, t, &q);
                    row_sub(&mut u, i, t, &q);
                }
                if !r.is_zero() {
                    // swap rows to get smaller pivot, restart
                    a.swap(i, t);
                    u.swap(i, t);
                    dirty = true;
                }
            }
            // eliminate row via column ops
            for j in 0..n {
                if j == t || a[t][j].is_zero() {
                    continue;
                }
                let (q, r) = a[t][j].div_rem(&a[t][t]);
                if !q.is_zero() {
                    col_sub(&mut a, j, t, &q);
                    col_sub(&mut v, j, t, &q);
                }
                if !r.is_zero() {
                    swap_cols(&mut a, j, t);
                    swap_cols(&mut v, j, t);
                    dirty = true;
                }
            }
        }
        // pivot divides the rest of the submatrix?
        let mut fixed = true;
        'scan: for i in t + 1..k {
            for j in t + 1..n {
                if !(&a[i][j] % &a[t][t]).is_zero() {
                    // add row i to row t and redo
                    let one = BigInt::from(-1);
                    row_sub(&mut a, t, i, &one);
                    row_sub(&mut u, t, i, &one);
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if !fixed {
            continue;
        }
        if a[t][t].is_negative() {
            for j in 0..n {
                a[t][j] = -a[t][j].clone();
            }
            for j in 0..k {
                u[t][j] = -u[t][j].clone();
            }
        }
        t += 1;
    }
    (a, u, v)
}

fn swap_cols(m: &mut Mat, i: usize, j: usize) {
    if i == j {
        return;
    }
    for row in m.iter_mut() {
        row.swap(i, j);
    }
}

fn row_sub(m: &mut Mat, i: usize, t: usize, q: &BigInt) {
    let n = m[0].len();
    for c in 0..n {
        let s = q * &m[t][c];
        m[i][c] -= s;
    }
}

fn col_sub(m: &mut Mat, j: usize, t: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let s = q * &row[t];
        row[j] -= s;
    }
}

/// Solve z * M = target over Z. Returns None if unsolvable.
pub fn solve_left(m: &Mat, target: &[BigInt]) -> Option<Vec<BigInt>> {
    let (h, u) = hnf_with_transform(m);
    let k = m.len();
    if k == 0 {
        return if target.iter().all(|c| c.is_zero()) { Some(vec![]) } else { None };
    }
    let n = m[0].len();
    assert_eq!(target.len(), n);
    // back-substitute along pivot structure of H
    let mut z = vec![BigInt::zero(); k];
    let mut rem: Vec<BigInt> = target.to_vec();
    for (i, row) in h.iter().enumerate() {
        let Some(pc) = row.iter().position(|c| !c.is_zero()) else { break };
        if rem[pc].is_zero() {
            continue;
        }
        let (q, r) = rem[pc].div_rem(&row[pc]);
        if !r.is_zero() {
            return None;
        }
        z[i] = q.clone();
        for j in 0..n {
            let s = &q * &row[j];
            rem[j] -= s;
        }
    }
    if rem.iter().any(|c| !c.is_zero()) {
        return None;
    }
    Some(mat_vec(&z, &u))
}

/// Verify that a square matrix is unimodular (det ±1).
pub fn is_unimodular(m: &Mat) -> bool {
    let d = det_bareiss(m);
    d.magnitude().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_i64(rows: &[&[i64]]) -> Mat {
        rows.iter()
            .map(|r| r.iter().map(|&c| BigInt::from(c)).collect())
            .collect()
    }

    #[test]
    fn test_hnf_identity() {
        let m = identity(3);
        let (h, u) = hnf_with_transform(&m);
        assert_eq!(h, identity(3));
        assert_eq!(u, identity(3));
    }

    #[test]
    fn test_hnf_diag() {
        let m = from_i64(&[&[2, 0], &[0, 3]]);
        let (h, u) = hnf_with_transform(&m);
        assert_eq!(h, m);
        assert!(is_unimodular(&u));
    }

    #[test]
    fn test_hnf_transform_identity_property() {
        let m = from_i64(&[&[4, 6, 2], &[6, 9, 3], &[2, 7, 5], &[0, 0, 8]]);
        let (h, u) = hnf_with_transform(&m);
        assert_eq!(mat_mul(&u, &m), h);
        assert!(is_unimodular(&u));
        // pivots positive, above-reduction
        let mut last_pivot_col = None;
        for row in &h {
            if let Some(pc) = row.iter().position(|c| !c.is_zero()) {
                assert!(row[pc].is_positive());
                if let Some(l) = last_pivot_col {
                    assert!(pc > l);
                }
                last_pivot_col = Some(pc);
            }
        }
    }

    #[test]
    fn test_left_kernel() {
        // rows r1, r2, r1+r2: kernel rank 1
        let m = from_i64(&[&[1, 2, 3], &[4, 5, 6], &[5, 7, 9]]);
        let ker = left_kernel(&m);
        assert_eq!(ker.len(), 1);
        let z = mat_vec(&ker[0], &m);
        assert!(z.iter().all(|c| c.is_zero()));
    }

    #[test]
    fn test_snf_basic() {
        // diag(6,4) -> diag(2,12)
        let m = from_i64(&[&[6, 0], &[0, 4]]);
        let (s, u, v) = snf_with_transforms(&m);
        assert_eq!(s, from_i64(&[&[2, 0], &[0, 12]]));
        assert_eq!(mat_mul(&mat_mul(&u, &m), &v), s);
        assert!(is_unimodular(&u) && is_unimodular(&v));
        // zero matrix fixed point
        let m = from_i64(&[&[0, 0], &[0, 0]]);
        let (s, _, _) = snf_with_transforms(&m);
        assert_eq!(s, from_i64(&[&[0, 0], &[0, 0]]));
    }

    #[test]
    fn test_snf_random_identity() {
        let m = from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let (s, u, v) = snf_with_transforms(&m);
        assert_eq!(mat_mul(&mat_mul(&u, &m), &v), s);
        assert!(is_unimodular(&u) && is_unimodular(&v));
        // divisibility chain
        let mut prev: Option<BigInt> = None;
        for t in 0..3 {
            let d = s[t][t].clone();
            if let Some(p) = prev {
                if !d.is_zero() {
                    assert!((&d % &p).is_zero(), "chain broken: {p} ∤ {d}");
                }
            }
            if d.is_zero() {
                break;
            }
            prev = Some(d);
        }
    }

    #[test]
    fn test_solve_left() {
        let m = from_i64(&[&[2, 0, 1], &[0, 3, 1]]);
        // target = 1*r0 + 2*r1 = [2, 6, 3]
        let t: Vec<BigInt> = [2i64, 6, 3].iter().map(|&c| BigInt::from(c)).collect();
        let z = solve_left(&m, &t).unwrap();
        assert_eq!(mat_vec(&z, &m), t);
        // unsolvable
        let t: Vec<BigInt> = [1i64, 0, 0].iter().map(|&c| BigInt::from(c)).collect();
        assert!(solve_left(&m, &t).is_none());
    }

    #[test]
    fn test_det() {
        let m = from_i64(&[&[2, 3], &[1, 4]]);
        assert_eq!(det_bareiss(&m), BigInt::from(5));
        let m = from_i64(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]);
        assert_eq!(det_bareiss(&m), BigInt::from(-2));
    }
}
