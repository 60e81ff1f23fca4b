//! Small exact linear algebra: integer HNF, rational matrices, duals.
//!
//! Everything here is 4×n at heart (quartic fields, rank-4 lattices), so the
//! implementations favour clarity over asymptotics.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type QMat = Vec<Vec<BigRational>>;
pub type IMat = Vec<Vec<BigInt>>;

pub fn qmat_zero(r: usize, c: usize) -> QMat {
    vec![vec![BigRational::zero(); c]; r]
}

pub fn qmat_identity(n: usize) -> QMat {
    let mut m = qmat_zero(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigRational::one();
    }
    m
}

pub fn imat_identity(n: usize) -> IMat {
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigInt::one();
    }
    m
}

pub fn qmat_mul(a: &QMat, b: &QMat) -> QMat {
    let (r, k, c) = (a.len(), b.len(), b[0].len());
    let mut out = qmat_zero(r, c);
    for i in 0..r {
        for j in 0..c {
            let mut s = BigRational::zero();
            for l in 0..k {
                if !a[i][l].is_zero() && !b[l][j].is_zero() {
                    s += &a[i][l] * &b[l][j];
                }
            }
            out[i][j] = s;
        }
    }
    out
}

pub fn imat_mul(a: &IMat, b: &IMat) -> IMat {
    let (r, k, c) = (a.len(), b.len(), b[0].len());
    let mut out = vec![vec![BigInt::zero(); c]; r];
    for i in 0..r {
        for j in 0..c {
            let mut s = BigInt::zero();
            for l in 0..k {
                s += &a[i][l] * &b[l][j];
            }
            out[i][j] = s;
        }
    }
    out
}

pub fn imat_transpose(a: &IMat) -> IMat {
    let (r, c) = (a.len(), a[0].len());
    let mut out = vec![vec![BigInt::zero(); r]; c];
    for i in 0..r {
        for (j, row) in out.iter_mut().enumerate() {
            row[i] = a[i][j].clone();
        }
    }
    out
}

pub fn qmat_transpose(a: &QMat) -> QMat {
    let (r, c) = (a.len(), a[0].len());
    let mut out = qmat_zero(c, r);
    for i in 0..r {
        for (j, row) in out.iter_mut().enumerate() {
            row[i] = a[i][j].clone();
        }
    }
    out
}

/// Determinant by cofactor expansion (sizes are ≤ 4-ish).
pub fn qmat_det(a: &QMat) -> BigRational {
    let n = a.len();
    if n == 1 {
        return a[0][0].clone();
    }
    let mut det = BigRational::zero();
    for j in 0..n {
        if a[0][j].is_zero() {
            continue;
        }
        let minor: QMat = (1..n)
            .map(|i| {
                (0..n)
                    .filter(|&c| c != j)
                    .map(|c| a[i][c].clone())
                    .collect()
            })
            .collect();
        let term = &a[0][j] * qmat_det(&minor);
        if j % 2 == 0 {
            det += term;
        } else {
            det -= term;
        }
    }
    det
}

pub fn imat_det(a: &IMat) -> BigInt {
    let q = imat_to_q(a);
    let d = qmat_det(&q);
    debug_assert!(d.is_integer());
    d.to_integer()
}

pub fn imat_to_q(a: &IMat) -> QMat {
    a.iter()
        .map(|r| {
            r.iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect()
}

/// Inverse by Gauss-Jordan over Q.
pub fn qmat_inv(a: &QMat) -> Result<QMat> {
    let n = a.len();
    let mut m: QMat = a.to_vec();
    let mut inv = qmat_identity(n);
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .ok_or_else(|| Error::InvalidInput("singular matrix".to_string()))?;
        m.swap(col, piv);
        inv.swap(col, piv);
        let p = m[col][col].clone();
        for j in 0..n {
            m[col][j] /= &p;
            inv[col][j] /= &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in 0..n {
                    let t = &f * &m[col][j];
                    m[r][j] -= t;
                    let t = &f * &inv[col][j];
                    inv[r][j] -= t;
                }
            }
        }
    }
    Ok(inv)
}

/// Column-style Hermite normal form of the lattice generated by the columns
/// of `a` (r×c, rank must be r). Returns the r×r upper-triangular basis with
/// positive diagonal and off-diagonal entries reduced into `[0, h_ii)`.
pub fn hnf_column(a: &IMat) -> Result<IMat> {
    let r = a.len();
    let mut cols: Vec<Vec<BigInt>> = (0..a[0].len())
        .map(|j| (0..r).map(|i| a[i][j].clone()).collect())
        .collect();
    cols.retain(|c| c.iter().any(|x| !x.is_zero()));

    // Process rows bottom-up so column `row` ends with its pivot on the
    // diagonal and zeros below (upper-triangular convention).
    let mut basis: Vec<Option<Vec<BigInt>>> = vec![None; r];
    for row in (0..r).rev() {
        loop {
            let nz: Vec<usize> = (0..cols.len())
                .filter(|&j| !cols[j][row].is_zero())
                .collect();
            if nz.is_empty() {
                return Err(Error::InvalidInput(
                    "matrix does not have full row rank".to_string(),
                ));
            }
            if nz.len() == 1 {
                let mut c = cols.swap_remove(nz[0]);
                if c[row].is_negative() {
                    for x in c.iter_mut() {
                        *x = -&*x;
                    }
                }
                basis[row] = Some(c);
                break;
            }
            // Reduce the larger head entry by the smallest one.
            let (mut j0, mut j1) = (nz[0], nz[1]);
            for &j in &nz {
                if cols[j][row].magnitude() < cols[j0][row].magnitude() {
                    j1 = j0;
                    j0 = j;
                } else if j != j0 && cols[j][row].magnitude() < cols[j1][row].magnitude() {
                    j1 = j;
                }
            }
            let q = &cols[j1][row] / &cols[j0][row];
            debug_assert!(!q.is_zero());
            for i in 0..r {
                let t = &q * &cols[j0][i];
                cols[j1][i] -= t;
            }
            if cols[j1].iter().all(|x| x.is_zero()) {
                cols.swap_remove(j1);
            }
        }
        debug_assert!(cols.iter().all(|c| c[row].is_zero()));
    }
    let mut basis: Vec<Vec<BigInt>> = basis.into_iter().map(|b| b.unwrap()).collect();

    // Reduce above-diagonal entries into [0, pivot). Each column is reduced
    // against pivots from the bottom up, so a reduction never disturbs an
    // already-reduced lower entry of the same column.
    for k in 1..r {
        for i in (0..k).rev() {
            let piv = basis[i].clone();
            let q = basis[k][i].div_floor(&piv[i]);
            if !q.is_zero() {
                for x in 0..r {
                    let t = &q * &piv[x];
                    basis[k][x] -= t;
                }
            }
        }
    }

    let mut h = vec![vec![BigInt::zero(); r]; r];
    for (k, b) in basis.iter().enumerate() {
        for i in 0..r {
            h[i][k] = b[i].clone();
        }
    }
    Ok(h)
}

/// Basis (as columns) of the lattice `{v ∈ Q^n : A·v ∈ Z^m}` for a rational
/// matrix `A` of full column rank: the dual of the row lattice of `A`.
pub fn integral_preimage(a: &QMat) -> Result<QMat> {
    let d = qmat_denominator(a);
    let n = a[0].len();
    // A' = d·A integer; row lattice of A is (1/d)·(column lattice of A'^T).
    let at: IMat = (0..n)
        .map(|j| {
            a.iter()
                .map(|row| {
                    let x = &row[j] * BigRational::from_integer(d.clone());
                    debug_assert!(x.is_integer());
                    x.to_integer()
                })
                .collect()
        })
        .collect();
    let h = hnf_column(&at)?;
    // {v : Av ∈ Z^m} = d·(H^T)^{-1}·Z^n
    let hq = imat_to_q(&imat_transpose(&h));
    let mut inv = qmat_inv(&hq)?;
    let dq = BigRational::from_integer(d);
    for row in inv.iter_mut() {
        for x in row.iter_mut() {
            *x *= &dq;
        }
    }
    Ok(inv)
}

/// Extended-gcd solve across a row: returns `v` with `Σ g_i v_i = 1`, or
/// `None` when `gcd(g) != 1`.
pub fn solve_unimodular_row(g: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = g.len();
    let mut acc = g[0].clone();
    let mut coeffs = vec![BigInt::zero(); n];
    coeffs[0] = BigInt::one();
    for i in 1..n {
        let e = acc.extended_gcd(&g[i]);
        for c in coeffs.iter_mut().take(i) {
            *c = &*c * &e.x;
        }
        coeffs[i] = e.y.clone();
        acc = e.gcd;
    }
    if acc.abs() == BigInt::one() {
        if acc.is_negative() {
            for c in coeffs.iter_mut() {
                *c = -&*c;
            }
        }
        Some(coeffs)
    } else {
        None
    }
}

/// Content (gcd of entries) of an integer vector.
pub fn content(v: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for x in v {
        g = g.gcd(x);
    }
    g
}

/// Common denominator of a rational matrix.
pub fn qmat_denominator(a: &QMat) -> BigInt {
    let mut d = BigInt::one();
    for row in a {
        for x in row {
            d = d.lcm(x.denom());
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn imat(rows: &[&[i64]]) -> IMat {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn hnf_shape_and_det() {
        let a = imat(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        let h = hnf_column(&a).unwrap();
        for i in 0..3 {
            assert!(h[i][i] > BigInt::zero());
            for row in h.iter().skip(i + 1) {
                assert!(row[i].is_zero());
            }
        }
        // The column span of a 3x3 sublattice has index |det|; HNF preserves it.
        let sub = imat(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        assert_eq!(imat_det(&h).magnitude(), imat_det(&sub).magnitude());
    }

    #[test]
    fn hnf_identity_span() {
        let a = imat(&[&[1, 0, 3], &[0, 1, 7]]);
        let h = hnf_column(&a).unwrap();
        assert_eq!(h, imat(&[&[1, 0], &[0, 1]]));
    }

    #[test]
    fn hnf_membership() {
        // 2Z x 3Z shifted: columns (2,0),(1,3) -> det 6 lattice
        let a = imat(&[&[2, 1], &[0, 3]]);
        let h = hnf_column(&a).unwrap();
        assert_eq!(imat_det(&h), BigInt::from(6));
        // (1,3) must be reachable: h = [[1?,..]] check by det of [h | v] staying 6
        assert_eq!(h[1][0], BigInt::zero());
    }

    #[test]
    fn inverse_roundtrip() {
        let q = imat_to_q(&imat(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]));
        let inv = qmat_inv(&q).unwrap();
        let prod = qmat_mul(&q, &inv);
        assert_eq!(prod, qmat_identity(3));
    }

    #[test]
    fn unimodular_row_solve() {
        let g = [BigInt::from(6), BigInt::from(10), BigInt::from(15)];
        let v = solve_unimodular_row(&g).unwrap();
        let dot: BigInt = g.iter().zip(&v).map(|(a, b)| a * b).sum();
        assert_eq!(dot, BigInt::one());
        let g2 = [BigInt::from(6), BigInt::from(10)];
        assert!(solve_unimodular_row(&g2).is_none());
    }
}
