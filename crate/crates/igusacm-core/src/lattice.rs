//! Lattice tools over exact rational Gram matrices: LLL reduction and
//! Fincke-Pohst enumeration of short vectors.
//!
//! Bases are implicit; everything works on the Gram matrix and returns the
//! integer transformation applied to it. Rank is at most 4 here, so exact
//! rational arithmetic is affordable throughout.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{imat_identity, IMat, QMat};

/// LLL quality parameter δ = 99/100; only affects output sizes.
fn delta() -> BigRational {
    BigRational::new(BigInt::from(99), BigInt::from(100))
}

/// Gram-Schmidt data over Q: `b[i] = |b_i*|²` and the μ matrix.
fn gso(g: &QMat) -> (Vec<BigRational>, QMat) {
    let n = g.len();
    let mut b = vec![BigRational::zero(); n];
    let mut mu = crate::linalg::qmat_zero(n, n);
    let mut r = crate::linalg::qmat_zero(n, n); // r_ij = <b_i, b_j*>
    for i in 0..n {
        for j in 0..=i {
            let mut s = g[i][j].clone();
            for k in 0..j {
                s -= &mu[j][k] * &r[i][k];
            }
            r[i][j] = s;
            if j < i {
                mu[i][j] = &r[i][j] / &b[j];
            }
        }
        b[i] = r[i][i].clone();
    }
    (b, mu)
}

pub(crate) fn round_rational(q: &BigRational) -> BigInt {
    let two_n: BigInt = q.numer() << 1u32;
    let adj = if q.numer().is_negative() {
        -q.denom()
    } else {
        q.denom().clone()
    };
    (two_n + adj) / (q.denom() << 1u32)
}

/// In-place row+column operation on a Gram matrix: `b_k -= q·b_j`.
fn gram_row_op(g: &mut QMat, k: usize, j: usize, q: &BigRational) {
    let n = g.len();
    for c in 0..n {
        let t = q * &g[j][c];
        g[k][c] -= t;
    }
    for r in 0..n {
        let t = q * &g[r][j];
        g[r][k] -= t;
    }
}

fn gram_swap(g: &mut QMat, k: usize, j: usize) {
    g.swap(k, j);
    let n = g.len();
    for r in 0..n {
        g[r].swap(k, j);
    }
}

/// LLL-reduces the lattice described by the positive definite Gram matrix.
/// Returns `(u, g')` with `g' = u·g·uᵗ`: row `i` of `u` expresses the new
/// basis vector in terms of the old basis.
pub fn lll_gram(g0: &QMat) -> Result<(IMat, QMat)> {
    let n = g0.len();
    let mut g = g0.to_vec();
    let mut u = imat_identity(n);
    if n <= 1 {
        return Ok((u, g));
    }
    let d = delta();
    let mut k = 1usize;
    let mut steps = 0u64;
    while k < n {
        steps += 1;
        if steps > 100_000 {
            return Err(Error::ResourceBudget(format!(
                "LLL exceeded {steps} steps on rank-{n} lattice"
            )));
        }
        // Size-reduce row k against rows k-1..0.
        for j in (0..k).rev() {
            let (_, mu_now) = gso(&g);
            let q = round_rational(&mu_now[k][j]);
            if !q.is_zero() {
                let qq = BigRational::from_integer(q.clone());
                gram_row_op(&mut g, k, j, &qq);
                for c in 0..n {
                    let t = &q * &u[j][c];
                    u[k][c] -= t;
                }
            }
        }
        let (b, mu) = gso(&g);
        let lovasz = (&d - &mu[k][k - 1] * &mu[k][k - 1]) * &b[k - 1];
        if b[k] >= lovasz {
            k += 1;
        } else {
            gram_swap(&mut g, k, k - 1);
            u.swap(k, k - 1);
            k = k.max(2) - 1;
        }
    }
    Ok((u, g))
}

/// Floor of the square root of a nonnegative rational.
pub fn floor_sqrt_q(q: &BigRational) -> BigInt {
    debug_assert!(!q.is_negative());
    let nd = (q.numer() * q.denom()).magnitude().sqrt();
    BigInt::from(nd) / q.denom()
}

/// Enumerates all nonzero `x ∈ Zⁿ` with `xᵗ·g·x <= c`, one of each `±x`
/// pair. Errors out when more than `cap` vectors are found.
pub fn enumerate_short(g: &QMat, c: &BigRational, cap: usize) -> Result<Vec<Vec<BigInt>>> {
    let n = g.len();
    let (b, mu) = gso(g);
    if b.iter().any(|x| !x.is_positive()) {
        return Err(Error::InvalidInput(
            "enumeration needs a positive definite Gram matrix".into(),
        ));
    }
    let mut out = Vec::new();
    let mut x = vec![BigInt::zero(); n];
    // q(x) = Σ_i b_i (x_i + Σ_{j>i} mu_ji x_j)², processed from i = n-1 down.
    enumerate_rec(n, &b, &mu, c, &mut x, n, &mut out, cap)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn enumerate_rec(
    n: usize,
    b: &[BigRational],
    mu: &QMat,
    remaining: &BigRational,
    x: &mut Vec<BigInt>,
    level: usize,
    out: &mut Vec<Vec<BigInt>>,
    cap: usize,
) -> Result<()> {
    if level == 0 {
        if x.iter().any(|v| !v.is_zero()) {
            // Keep one representative of each ± pair: last nonzero > 0.
            let lead = x.iter().rev().find(|v| !v.is_zero()).unwrap();
            if lead.is_positive() {
                out.push(x.clone());
                if out.len() > cap {
                    return Err(Error::ResourceBudget(format!(
                        "short-vector enumeration exceeded {cap} results"
                    )));
                }
            }
        }
        return Ok(());
    }
    let i = level - 1;
    // center c_i = Σ_{j>i} mu_ji x_j
    let mut center = BigRational::zero();
    for j in level..n {
        center += &mu[j][i] * BigRational::from_integer(x[j].clone());
    }
    // b_i (x_i + center)² <= remaining
    let lim = remaining / &b[i];
    let root = floor_sqrt_q(&lim) + BigInt::one();
    let mid = round_rational(&(-&center));
    let lo = &mid - &root;
    let hi = mid + root;
    let mut xi = lo;
    while xi <= hi {
        let t = BigRational::from_integer(xi.clone()) + &center;
        let used = &b[i] * &t * &t;
        if used <= *remaining {
            x[i] = xi.clone();
            let rem = remaining - used;
            enumerate_rec(n, b, mu, &rem, x, i, out, cap)?;
        }
        xi += BigInt::one();
    }
    x[i] = BigInt::zero();
    Ok(())
}
