//! Polynomial arithmetic for the reconstruction stage: exact integer
//! products by Kronecker substitution, fixed-point complex polynomial
//! products with tracked errors, the product tree, and rational rounding.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::approx::{round_shift, ApproxComplex, Ball, ErrorBound};
use crate::error::{Error, Result};

/// `⌈log₂ x⌉` for a positive integer (0 for x = 1).
pub fn ceil_log2(x: &BigInt) -> u64 {
    debug_assert!(x.is_positive());
    let m = x - 1u32;
    m.bits()
}

/// Exact product of integer polynomials (ascending coefficients) by
/// evaluation at `2^k` and digit extraction.
///
/// `k` follows `⌈log₂|g₁|∞⌉+⌈log₂|g₂|∞⌉+⌈log₂(deg g₁+1)⌉`, raised when the
/// packed coefficients could collide (power-of-two extremes) and by one more
/// bit for signed inputs, which read off as balanced digits.
pub fn mult_int_poly(g1: &[BigInt], g2: &[BigInt], ) -> Vec<BigInt> {
    if g1.iter().all(|c| c.is_zero()) || g2.iter().all(|c| c.is_zero()) {
        return vec![BigInt::zero()];
    }
    let inf = |g: &[BigInt]| -> BigInt {
        g.iter().map(|c| c.magnitude().clone()).max().unwrap().into()
    };
    let n1 = inf(g1);
    let n2 = inf(g2);
    let d_min = g1.len().min(g2.len());
    let k_spec = ceil_log2(&n1) + ceil_log2(&n2) + ceil_log2(&BigInt::from(g1.len()));
    // Coefficients of the product are bounded by (d_min)·|g1|∞·|g2|∞; the
    // packing needs them strictly below 2^{k-1} for balanced digits.
    let bound = BigInt::from(d_min) * &n1 * &n2;
    let signed = g1.iter().chain(g2).any(|c| c.is_negative());
    let mut k = k_spec.max(bound.bits() + 1);
    if signed {
        k += 1;
    }

    let pack = |g: &[BigInt]| -> BigInt {
        let mut acc = BigInt::zero();
        for c in g.iter().rev() {
            acc = (acc << k) + c;
        }
        acc
    };
    let v = pack(g1) * pack(g2);

    // Balanced digit extraction base 2^k.
    let out_len = g1.len() + g2.len() - 1;
    let mut out = Vec::with_capacity(out_len);
    let mut rest = v;
    let half = BigInt::one() << (k - 1);
    let full = BigInt::one() << k;
    for _ in 0..out_len {
        let mut digit = &rest & (&full - 1u32);
        if digit >= half {
            digit -= &full;
        }
        rest = (rest - &digit) >> k;
        out.push(digit);
    }
    debug_assert!(rest.is_zero());
    while out.len() > 1 && out.last().unwrap().is_zero() {
        out.pop();
    }
    out
}

/// A complex polynomial approximation `2^{-p}(a + i·b)` with a tracked
/// coefficient-wise error bound `|f̃ − f|∞`.
#[derive(Clone, Debug)]
pub struct ApproxPolynomial {
    /// Ascending coefficients at common precision `prec`.
    pub coeffs: Vec<ApproxComplex>,
    pub prec: u32,
    pub err: ErrorBound,
}

impl ApproxPolynomial {
    pub fn constant_one(prec: u32) -> Self {
        ApproxPolynomial {
            coeffs: vec![ApproxComplex::one(prec)],
            prec,
            err: ErrorBound::ZERO,
        }
    }

    /// `X − z` from a root ball.
    pub fn linear_from_root(z: &Ball, prec: u32) -> Self {
        ApproxPolynomial {
            coeffs: vec![z.mid.neg().round_to(prec), ApproxComplex::one(prec)],
            prec,
            err: z.rad.add(crate::approx::rounding_err(prec)),
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Upper bound on `|f̃|₁` (sum of coefficient magnitudes).
    pub fn one_norm_upper(&self) -> ErrorBound {
        let mut s = ErrorBound::ZERO;
        for c in &self.coeffs {
            s = s.add(c.mag_upper());
        }
        s
    }

    /// Splits into the scaled integer polynomials `(a, b)`.
    fn parts(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        (
            self.coeffs.iter().map(|c| c.re_num().clone()).collect(),
            self.coeffs.iter().map(|c| c.im_num().clone()).collect(),
        )
    }
}

/// Product of approximations at common precision `p`: four Kronecker
/// products, then one rounding per coefficient. The tracked error follows
/// `ε ≤ |g₁|₁·ε₂ + |g₂|₁·ε₁ + (deg g₁+1)·ε₁ε₂ + 2^{-p}`.
pub fn mult_approx_poly(
    g1: &ApproxPolynomial,
    g2: &ApproxPolynomial,
    p: u32,
) -> Result<ApproxPolynomial> {
    if g1.prec != g2.prec {
        return Err(Error::InvalidInput(
            "operands must share a common precision".to_string(),
        ));
    }
    let (a1, b1) = g1.parts();
    let (a2, b2) = g2.parts();
    let aa = mult_int_poly(&a1, &a2);
    let bb = mult_int_poly(&b1, &b2);
    let ab = mult_int_poly(&a1, &b2);
    let ba = mult_int_poly(&b1, &a2);
    let out_len = g1.coeffs.len() + g2.coeffs.len() - 1;
    let take = |v: &[BigInt], i: usize| -> BigInt {
        v.get(i).cloned().unwrap_or_else(BigInt::zero)
    };
    // Exact product sits at precision 2·prec; round back to p.
    let shift = 2 * g1.prec - p;
    let mut coeffs = Vec::with_capacity(out_len);
    for i in 0..out_len {
        let re = take(&aa, i) - take(&bb, i);
        let im = take(&ab, i) + take(&ba, i);
        coeffs.push(ApproxComplex::new(
            round_shift(&re, shift),
            round_shift(&im, shift),
            p,
        ));
    }
    let n1 = g1.one_norm_upper();
    let n2 = g2.one_norm_upper();
    let err = n1
        .mul(g2.err)
        .add(n2.mul(g1.err))
        .add(g1.err.mul(g2.err).mul_u64(g1.coeffs.len() as u64))
        .add(ErrorBound::two_pow(-(p as i64)));
    Ok(ApproxPolynomial {
        coeffs,
        prec: p,
        err,
    })
}

/// Exact coefficient-wise sum at common precision.
pub fn add_approx_poly(g1: &ApproxPolynomial, g2: &ApproxPolynomial) -> Result<ApproxPolynomial> {
    if g1.prec != g2.prec {
        return Err(Error::InvalidInput(
            "operands must share a common precision".to_string(),
        ));
    }
    let len = g1.coeffs.len().max(g2.coeffs.len());
    let zero = ApproxComplex::zero(g1.prec);
    let mut coeffs = Vec::with_capacity(len);
    for i in 0..len {
        let a = g1.coeffs.get(i).unwrap_or(&zero);
        let b = g2.coeffs.get(i).unwrap_or(&zero);
        coeffs.push(a.add(b, g1.prec));
    }
    Ok(ApproxPolynomial {
        coeffs,
        prec: g1.prec,
        err: g1.err.add(g2.err),
    })
}

/// Reconstruction parameters: integer `⌈log₂ s_i⌉` bounds with
/// `|z_i| + 1 ≤ 2^{σ_i}`.
#[derive(Clone, Debug)]
pub struct RootBounds {
    pub sigma: Vec<u32>,
}

impl RootBounds {
    pub fn sum(&self) -> u64 {
        self.sigma.iter().map(|&x| x as u64).sum()
    }
}

/// Builds `∏ (X − z_i)` with coefficient error at most `2^{-u}` via a binary
/// product tree at internal precision `u + Σσ + 3⌈log₂ n⌉ + 3`.
///
/// Each root must come with error `≤ 2^{-u - Σ_{j≠i}σ_j - 3⌈log₂n⌉ - 3}`;
/// a violation is rejected with the required precision in the message.
pub fn poly_from_roots(roots: &[Ball], bounds: &RootBounds, u: u32) -> Result<ApproxPolynomial> {
    let n = roots.len();
    if n == 0 {
        return Ok(ApproxPolynomial::constant_one(u));
    }
    if bounds.sigma.len() != n {
        return Err(Error::InvalidInput("one bound per root required".to_string()));
    }
    let log_n = ceil_log2(&BigInt::from(n.max(1))) as u32;
    let sum_sigma = bounds.sum();
    let p = u as u64 + sum_sigma + 3 * log_n as u64 + 3;
    let p: u32 = p
        .try_into()
        .map_err(|_| Error::PrecisionCap {
            requested: u32::MAX,
            cap: crate::approx::PRECISION_CAP,
        })?;

    // Precondition on each root's certified error.
    for (i, z) in roots.iter().enumerate() {
        let need = (u as i64) + (sum_sigma - bounds.sigma[i] as u64) as i64 + 3 * log_n as i64 + 3;
        if !z.rad.le_two_pow(-need) {
            return Err(Error::PrecisionExhausted(format!(
                "root {i} needs error <= 2^-{need} for the product tree"
            )));
        }
    }

    // Leaves, padded to a power of two with the constant 1.
    let mut level: Vec<ApproxPolynomial> = roots
        .iter()
        .map(|z| ApproxPolynomial::linear_from_root(z, p))
        .collect();
    while !level.len().is_power_of_two() {
        level.push(ApproxPolynomial::constant_one(p));
    }
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len() / 2);
        let mut it = level.into_iter();
        while let (Some(a), Some(b)) = (it.next(), it.next()) {
            next.push(mult_approx_poly(&a, &b, p)?);
        }
        level = next;
    }
    let f = level.into_iter().next().unwrap();
    if !f.err.le_two_pow(-(u as i64)) {
        return Err(Error::PrecisionExhausted(format!(
            "product tree error bound exceeded 2^-{u}"
        )));
    }
    Ok(f)
}

/// A rational polynomial `Σ (nums[k]/den)·X^k` in lowest terms with a
/// positive denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPoly {
    pub nums: Vec<BigInt>,
    pub den: BigInt,
}

impl RationalPoly {
    pub fn degree(&self) -> usize {
        self.nums.len() - 1
    }

    pub fn is_monic(&self) -> bool {
        self.nums.last().map(|c| c == &self.den).unwrap_or(false)
    }
}

/// Rounds `D·f̃` to nearest integers: recovers `H` with `D·H ∈ Z[X]` when
/// `ε(f̃) < (2D)⁻¹`. A coefficient of `D·f̃` within `2Dε` of a half-integer
/// is an ambiguity error, as is an imaginary part exceeding `2ε`.
pub fn round_to_rational(f: &ApproxPolynomial, d: &BigInt) -> Result<RationalPoly> {
    // Precondition ε < (2D)⁻¹.
    let eps_cap = {
        let bits = (d << 1u32).bits() as i64;
        // 2^{-bits} <= 1/(2D)
        -bits
    };
    if !f.err.le_two_pow(eps_cap) {
        return Err(Error::RoundingAmbiguous(format!(
            "approximation error is not below (2D)^-1 (need 2^{eps_cap})"
        )));
    }
    let p = f.prec;
    let two_pow_p = BigInt::one() << p;
    let half = BigInt::one() << (p - 1);
    // 2Dε·2^p, rounded up.
    let slack = f.err.mul_u64(2).to_scaled_int_ceil(p) * d;
    // 2ε·2^p for the imaginary parts.
    let im_slack = f.err.mul_u64(2).to_scaled_int_ceil(p);

    let mut nums = Vec::with_capacity(f.coeffs.len());
    for (k, c) in f.coeffs.iter().enumerate() {
        if c.im_num().magnitude() > im_slack.magnitude() {
            return Err(Error::RoundingAmbiguous(format!(
                "coefficient {k} has imaginary part above 2·epsilon"
            )));
        }
        let v = d * c.re_num();
        let m = crate::approx::div_round_nearest(&v, &two_pow_p);
        // distance of v/2^p to the half-integer boundary around m
        let delta = (&v - &m * &two_pow_p).magnitude().clone();
        let margin = half.magnitude().clone() - delta;
        if BigInt::from(margin) <= slack {
            return Err(Error::RoundingAmbiguous(format!(
                "coefficient {k} of D·f lies within 2Dε of a half-integer"
            )));
        }
        nums.push(m);
    }
    // Reduce by the gcd with D.
    let mut g = d.clone();
    for c in &nums {
        g = g.gcd(c);
    }
    let den = d / &g;
    for c in nums.iter_mut() {
        *c = &*c / &g;
    }
    while nums.len() > 1 && nums.last().unwrap().is_zero() {
        nums.pop();
    }
    Ok(RationalPoly { nums, den })
}
