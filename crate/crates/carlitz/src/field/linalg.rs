//! Gaussian elimination over the prime field GF(p).
//!
//! All kernel and solving problems in the crate (Artin-Schreier root
//! extraction, torsion kernels, character solves) are expanded to GF(p)
//! coordinates and land here. Matrices are dense row vectors of `u64`
//! residues.

fn inv_mod_p(a: u64, p: u64) -> u64 {
    // Fermat; p is prime and a != 0.
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = (result as u128 * base as u128 % p as u128) as u64;
        }
        base = (base as u128 * base as u128 % p as u128) as u64;
        e >>= 1;
    }
    result
}

/// Row-reduce `mat` in place; returns the pivot column of each pivot row.
pub fn rref(p: u64, mat: &mut [Vec<u64>]) -> Vec<usize> {
    let rows = mat.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = mat[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(src) = (r..rows).find(|&i| mat[i][c] != 0) else {
            continue;
        };
        mat.swap(r, src);
        let inv = inv_mod_p(mat[r][c], p);
        for x in mat[r].iter_mut() {
            *x = (*x as u128 * inv as u128 % p as u128) as u64;
        }
        for i in 0..rows {
            if i != r && mat[i][c] != 0 {
                let f = mat[i][c];
                for j in 0..cols {
                    let sub = (f as u128 * mat[r][j] as u128 % p as u128) as u64;
                    mat[i][j] = (mat[i][j] + p - sub) % p;
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

/// Solve `A x = b` where `a` holds the columns-as-unknowns matrix in row
/// form. Returns `(particular, kernel_basis)` or `None` when inconsistent.
pub fn solve_affine(
    p: u64,
    a: &[Vec<u64>],
    b: &[u64],
) -> Option<(Vec<u64>, Vec<Vec<u64>>)> {
    let rows = a.len();
    assert_eq!(rows, b.len());
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut aug: Vec<Vec<u64>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut v = row.clone();
            v.push(bi % p);
            v
        })
        .collect();
    let pivots = rref(p, &mut aug);
    // Inconsistent iff some pivot lands in the augmented column.
    if pivots.iter().any(|&c| c == cols) {
        return None;
    }
    let mut particular = vec![0u64; cols];
    for (row, &c) in pivots.iter().enumerate() {
        particular[c] = aug[row][cols];
    }
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut kernel = Vec::new();
    for free in 0..cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (row, &c) in pivots.iter().enumerate() {
            v[c] = (p - aug[row][free] % p) % p;
        }
        kernel.push(v);
    }
    Some((particular, kernel))
}

/// Kernel basis of `A`.
pub fn kernel(p: u64, a: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let b = vec![0u64; a.len()];
    solve_affine(p, a, &b).expect("homogeneous system is consistent").1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_2x2_mod5() {
        // x + 2y = 3, 4y = 2  =>  y = 3, x = 2 (mod 5)
        let a = vec![vec![1, 2], vec![0, 4]];
        let (sol, ker) = solve_affine(5, &a, &[3, 2]).unwrap();
        assert_eq!(sol, vec![2, 3]);
        assert!(ker.is_empty());
    }

    #[test]
    fn inconsistent_detected() {
        let a = vec![vec![1, 1], vec![2, 2]];
        assert!(solve_affine(3, &a, &[1, 1]).is_none());
    }

    #[test]
    fn kernel_of_rank_one() {
        let a = vec![vec![1, 2], vec![2, 4]];
        let ker = kernel(5, &a);
        assert_eq!(ker.len(), 1);
        // kernel vector (x, y) satisfies x + 2y = 0
        let v = &ker[0];
        assert_eq!((v[0] + 2 * v[1]) % 5, 0);
    }
}
