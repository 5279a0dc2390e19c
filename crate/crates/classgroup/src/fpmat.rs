//! Dense linear algebra over F_p (p < 2^62): reduced row echelon form,
//! kernels, and solving. Used by prime decomposition, maximality
//! certification, and mod-l saturation.

use crate::arith::{invmod, mulmod};

pub type FpMat = Vec<Vec<u64>>;

/// Reduced row echelon form in place; returns pivot column per row-rank.
pub fn rref(m: &mut FpMat, p: u64) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        // find pivot
        let mut piv = None;
        for i in r..rows {
            if m[i][c] != 0 {
                piv = Some(i);
                break;
            }
        }
        let Some(pi) = piv else { continue };
        m.swap(r, pi);
        let inv = invmod(m[r][c], p);
        for j in c..cols {
            m[r][j] = mulmod(m[r][j], inv, p);
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in c..cols {
                    let t = mulmod(f, m[r][j], p);
                    m[i][j] = (m[i][j] + p - t) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

pub fn rank(m: &FpMat, p: u64) -> usize {
    let mut c = m.clone();
    rref(&mut c, p).len()
}

/// Right kernel {x : M x = 0}, returned as rows.
pub fn right_kernel(m: &FpMat, p: u64) -> Vec<Vec<u64>> {
    if m.is_empty() {
        return vec![];
    }
    let cols = m[0].len();
    let mut a = m.clone();
    let pivots = rref(&mut a, p);
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (ri, &pc) in pivots.iter().enumerate() {
            // x_pc = -a[ri][free]
            v[pc] = (p - a[ri][free]) % p;
        }
        basis.push(v);
    }
    basis
}

/// Left kernel {c : c M = 0}, rows of M given as `rows`.
pub fn left_kernel(rows: &FpMat, p: u64) -> Vec<Vec<u64>> {
    if rows.is_empty() {
        return vec![];
    }
    let n = rows.len();
    let cols = rows[0].len();
    let mut t = vec![vec![0u64; n]; cols];
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            t[j][i] = v;
        }
    }
    right_kernel(&t, p)
}

/// Solve M x = b (column conventions); returns one solution if consistent.
pub fn solve(m: &FpMat, b: &[u64], p: u64) -> Option<Vec<u64>> {
    if m.is_empty() {
        return if b.iter().all(|&x| x == 0) { Some(vec![]) } else { None };
    }
    let cols = m[0].len();
    let mut aug: FpMat = m
        .iter()
        .zip(b.iter())
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    let pivots = rref(&mut aug, p);
    // inconsistent if a pivot lands in the last column
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![0u64; cols];
    for (ri, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[ri][cols];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_kernels() {
        // M = [[1,1,0],[0,0,0],[1,1,0]] over F_3
        let m = vec![vec![1u64, 1, 0], vec![0, 0, 0], vec![1, 1, 0]];
        let rk = right_kernel(&m, 3);
        // kernel dim 2: (1,-1,0)-ish and (0,0,1)
        assert_eq!(rk.len(), 2);
        for v in &rk {
            for row in &m {
                let s: u64 = row.iter().zip(v).map(|(&a, &b)| mulmod(a, b, 3)).sum::<u64>() % 3;
                assert_eq!(s, 0);
            }
        }
        let lk = left_kernel(&m, 3);
        assert_eq!(lk.len(), 2);
        for c in &lk {
            for j in 0..3 {
                let s: u64 = (0..3).map(|i| mulmod(c[i], m[i][j], 3)).sum::<u64>() % 3;
                assert_eq!(s, 0);
            }
        }
    }

    #[test]
    fn test_solve() {
        let m = vec![vec![2u64, 1], vec![1, 3]];
        let b = vec![4u64, 6];
        let x = solve(&m, &b, 7).unwrap();
        for i in 0..2 {
            let s: u64 = (0..2).map(|j| mulmod(m[i][j], x[j], 7)).sum::<u64>() % 7;
            assert_eq!(s, b[i]);
        }
        // inconsistent
        let m = vec![vec![1u64, 1], vec![2, 2]];
        assert!(solve(&m, &vec![1, 3], 5).is_none());
    }
}
