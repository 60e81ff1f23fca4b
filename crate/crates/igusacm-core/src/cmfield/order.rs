//! Maximal order computation (round-2 style p-enlargement).

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::element::FieldElement;
use super::CMFieldSpec;
use crate::error::{Error, Result};
use crate::linalg::{hnf_column, integral_preimage, qmat_denominator, qmat_det, qmat_inv, qmat_mul, QMat};

/// A Z-basis of the maximal order `O_K`, as columns over the power basis.
#[derive(Clone, Debug)]
pub struct IntegralBasis {
    /// 4×4 rational matrix; column `j` is the `j`-th basis element.
    pub mat: QMat,
    /// Cached inverse for coordinate conversion.
    pub inv: QMat,
    /// Field discriminant Δ.
    pub disc: BigInt,
    /// Index `[O_K : Z[α]]`.
    pub index: BigInt,
}

impl IntegralBasis {
    pub fn elements(&self, _spec: &CMFieldSpec) -> Vec<FieldElement> {
        (0..4).map(|j| self.element(j)).collect()
    }

    pub fn element(&self, j: usize) -> FieldElement {
        FieldElement::from_coords(core::array::from_fn(|i| self.mat[i][j].clone()))
    }

    /// Coordinates of `x` with respect to this basis.
    pub fn coords_of(&self, x: &FieldElement) -> Vec<BigRational> {
        (0..4)
            .map(|i| {
                (0..4)
                    .map(|k| &self.inv[i][k] * &x.coords[k])
                    .sum::<BigRational>()
            })
            .collect()
    }

    /// The element with the given basis coordinates.
    pub fn element_from_coords(&self, v: &[BigRational]) -> FieldElement {
        FieldElement::from_coords(core::array::from_fn(|i| {
            (0..4).map(|k| &self.mat[i][k] * &v[k]).sum::<BigRational>()
        }))
    }

    /// Is `x` in the order (integer coordinates)?
    pub fn contains(&self, x: &FieldElement) -> bool {
        self.coords_of(x).iter().all(|c| c.is_integer())
    }
}

fn trace_matrix(basis: &[FieldElement], spec: &CMFieldSpec) -> QMat {
    let mut t = crate::linalg::qmat_zero(4, 4);
    for i in 0..4 {
        for j in 0..=i {
            let v = basis[i].mul(&basis[j], spec).trace(spec);
            t[i][j] = v.clone();
            t[j][i] = v;
        }
    }
    t
}

fn disc_of_basis(mat: &QMat, spec: &CMFieldSpec) -> BigRational {
    let basis: Vec<FieldElement> =
        (0..4).map(|j| FieldElement::from_coords(core::array::from_fn(|i| mat[i][j].clone()))).collect();
    qmat_det(&trace_matrix(&basis, spec))
}

/// Trial-factors `n`, returning the prime divisors (desk scale only).
fn prime_divisors(n: &BigInt) -> Result<Vec<u64>> {
    let mut m = n.magnitude().clone();
    let one = num_bigint::BigUint::one();
    let mut out = Vec::new();
    let mut p = 2u64;
    let cap = 2_000_000u64;
    while m > one {
        if num_bigint::BigUint::from(p) * num_bigint::BigUint::from(p) > m {
            // The cofactor is prime.
            let rest = m.to_u64().ok_or_else(|| {
                Error::ResourceBudget("oversized prime factor in discriminant".into())
            })?;
            out.push(rest);
            break;
        }
        if p > cap {
            // Only square factors matter to the caller; a cofactor that is a
            // perfect square of a prime beyond the trial range still counts.
            let s = m.sqrt();
            if &s * &s == m {
                out.push(s.to_u64().ok_or_else(|| {
                    Error::ResourceBudget("oversized square factor in discriminant".into())
                })?);
                break;
            }
            return Err(Error::ResourceBudget(format!(
                "discriminant factoring stalled at p={p}"
            )));
        }
        if (&m % num_bigint::BigUint::from(p)).is_zero() {
            out.push(p);
            while (&m % num_bigint::BigUint::from(p)).is_zero() {
                m /= num_bigint::BigUint::from(p);
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    Ok(out)
}

/// Computes a Z-basis of the maximal order of `K` and the discriminant.
pub fn maximal_order(spec: &CMFieldSpec) -> Result<IntegralBasis> {
    // Start from Z[α].
    let mut mat = crate::linalg::qmat_identity(4);
    let mut disc = disc_of_basis(&mat, spec)
        .to_integer();
    debug_assert!(disc.is_positive());

    let primes = prime_divisors(&disc)?;
    for p in primes {
        loop {
            let sq = BigInt::from(p) * BigInt::from(p);
            if !(&disc % &sq).is_zero() {
                break;
            }
            let enlarged = enlarge_at(&mat, p, spec)?;
            match enlarged {
                None => break,
                Some((newmat, index)) => {
                    mat = newmat;
                    let idx2 = &index * &index;
                    disc = &disc / idx2;
                }
            }
        }
    }

    let inv = qmat_inv(&mat)?;
    let full_index = {
        let d = qmat_det(&mat);
        // index = 1/|det| since det(power basis) = 1
        let di = d.recip();
        debug_assert!(di.is_integer());
        di.to_integer().magnitude().clone()
    };
    Ok(IntegralBasis {
        mat,
        inv,
        disc,
        index: BigInt::from(full_index),
    })
}

/// One enlargement step at `p`: returns the new basis and the index
/// `[O' : O]` when the order grows, `None` when already p-maximal.
fn enlarge_at(mat: &QMat, p: u64, spec: &CMFieldSpec) -> Result<Option<(QMat, BigInt)>> {
    let basis: Vec<FieldElement> =
        (0..4).map(|j| FieldElement::from_coords(core::array::from_fn(|i| mat[i][j].clone()))).collect();
    let inv = qmat_inv(mat)?;
    let coords_of = |x: &FieldElement| -> Result<Vec<BigInt>> {
        let v: Vec<BigRational> = (0..4)
            .map(|i| (0..4).map(|k| &inv[i][k] * &x.coords[k]).sum())
            .collect();
        v.iter()
            .map(|c| {
                if c.is_integer() {
                    Ok(c.to_integer())
                } else {
                    Err(Error::InvalidInput(
                        "element not integral over the current order".into(),
                    ))
                }
            })
            .collect()
    };

    // Frobenius matrix on O/pO.
    let k = if p >= 4 { 1 } else { 2 };
    let pb = BigInt::from(p);
    let mut frob = vec![vec![0u64; 4]; 4];
    for (j, b) in basis.iter().enumerate() {
        let mut x = b.clone();
        // x^p by square and multiply
        let mut acc = FieldElement::one();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&x, spec);
            }
            x = x.mul(&x, spec);
            e >>= 1;
        }
        let co = coords_of(&acc)?;
        for i in 0..4 {
            frob[i][j] = co[i].mod_floor(&pb).to_u64().unwrap();
        }
    }
    let fk = if k == 1 {
        frob.clone()
    } else {
        matmul_mod(&frob, &frob, p)
    };
    let kernel = kernel_mod(&fk, p);

    // I_p = p·O + (kernel lifts); columns in O-coordinates.
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    for i in 0..4 {
        let mut c = vec![BigInt::zero(); 4];
        c[i] = pb.clone();
        cols.push(c);
    }
    for v in &kernel {
        cols.push(v.iter().map(|&x| BigInt::from(x)).collect());
    }
    let stacked: crate::linalg::IMat = (0..4)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect();
    let h_i = hnf_column(&stacked)?;
    let h_i_q = crate::linalg::imat_to_q(&h_i);
    let h_i_inv = qmat_inv(&h_i_q)?;

    // Ring of multipliers of I_p: {x : x·I ⊆ I}.
    let ideal_gens: Vec<FieldElement> = (0..4)
        .map(|j| {
            let v: Vec<BigRational> = (0..4)
                .map(|i| BigRational::from_integer(h_i[i][j].clone()))
                .collect();
            // to field element: basis · v
            FieldElement::from_coords(core::array::from_fn(|i| {
                (0..4).map(|kk| &mat[i][kk] * &v[kk]).sum::<BigRational>()
            }))
        })
        .collect();

    let mut rows: QMat = Vec::new();
    for g in &ideal_gens {
        // multiplication-by-g matrix in O-coordinates
        let mut mg = crate::linalg::qmat_zero(4, 4);
        for (j, b) in basis.iter().enumerate() {
            let prod = g.mul(b, spec);
            let v: Vec<BigRational> = (0..4)
                .map(|i| (0..4).map(|kk| &inv[i][kk] * &prod.coords[kk]).sum())
                .collect();
            for i in 0..4 {
                mg[i][j] = v[i].clone();
            }
        }
        let cond = qmat_mul(&h_i_inv, &mg);
        rows.extend(cond);
    }
    let mult_ring = integral_preimage(&rows)?;

    // index [O' : O] = 1/det (det is 1/index).
    let det = qmat_det(&mult_ring);
    let index_q = det.recip();
    let index = index_q.to_integer().magnitude().clone();
    if index == num_bigint::BigUint::one() {
        return Ok(None);
    }

    // New basis in power coordinates: mat · mult_ring, then HNF-normalize the
    // denominator-cleared form to keep entries tidy.
    let new_mat = qmat_mul(mat, &mult_ring);
    let normalized = normalize_basis(&new_mat)?;
    Ok(Some((normalized, BigInt::from(index))))
}

/// Clears denominators, HNF-reduces, and rescales so the matrix columns form
/// the same lattice with upper-triangular structure over the power basis.
fn normalize_basis(m: &QMat) -> Result<QMat> {
    let d = qmat_denominator(m);
    let dq = BigRational::from_integer(d.clone());
    let im: crate::linalg::IMat = m
        .iter()
        .map(|row| row.iter().map(|x| (x * &dq).to_integer()).collect())
        .collect();
    let h = hnf_column(&im)?;
    Ok(h.iter()
        .map(|row| {
            row.iter()
                .map(|x| BigRational::new(x.clone(), d.clone()))
                .collect()
        })
        .collect())
}

fn matmul_mod(a: &[Vec<u64>], b: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    let mut out = vec![vec![0u64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0u128;
            for k in 0..n {
                s += a[i][k] as u128 * b[k][j] as u128;
            }
            out[i][j] = (s % p as u128) as u64;
        }
    }
    out
}

/// Kernel basis of a matrix over F_p (columns as vectors).
pub(crate) fn kernel_mod(m: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = m.len();
    let mut a: Vec<Vec<u64>> = m.to_vec();
    let cols = n;
    let mut pivot_row_of_col = vec![usize::MAX; cols];
    let mut rank = 0usize;
    for col in 0..cols {
        if let Some(r) = (rank..n).find(|&r| a[r][col] % p != 0) {
            a.swap(rank, r);
            let inv = mod_inverse(a[rank][col], p);
            for c in 0..cols {
                a[rank][c] = a[rank][c] % p * inv % p;
            }
            for rr in 0..n {
                if rr != rank && a[rr][col] % p != 0 {
                    let f = a[rr][col] % p;
                    for c in 0..cols {
                        a[rr][c] = (a[rr][c] + (p - f) * a[rank][c]) % p;
                    }
                }
            }
            pivot_row_of_col[col] = rank;
            rank += 1;
        }
    }
    let mut kernel = Vec::new();
    for col in 0..cols {
        if pivot_row_of_col[col] != usize::MAX {
            continue;
        }
        let mut v = vec![0u64; cols];
        v[col] = 1;
        for c in 0..cols {
            if pivot_row_of_col[c] != usize::MAX {
                let r = pivot_row_of_col[c];
                v[c] = (p - a[r][col] % p) % p;
            }
        }
        kernel.push(v);
    }
    kernel
}

pub(crate) fn mod_inverse(a: u64, p: u64) -> u64 {
    // p prime; Fermat.
    let mut base = a % p;
    let mut e = p - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * base as u128 % p as u128) as u64;
        }
        base = (base as u128 * base as u128 % p as u128) as u64;
        e >>= 1;
    }
    acc
}
