//! Fixed-point complex arithmetic with explicit error accounting.
//!
//! An [`ApproxComplex`] is an element of `2^{-n} Z[i]`: a pair of integers
//! `(re, im)` at absolute precision `n`, standing for `(re + i·im)·2^{-n}`.
//! Every value is an exactly representable dyadic Gaussian number; precision
//! changes are explicit operations and addition at a common precision is
//! exact. [`Ball`] pairs a value with a certified [`ErrorBound`] on its
//! distance to the real quantity it approximates.

mod bound;
mod transcend;

use alloc::string::ToString;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use bound::{ErrorBound, LowerBound};
pub use transcend::{exp_neg_real, exp_pi_i_tracked, pi_ball, sqrt_ball, PiCache, GUARD_BITS};

use crate::error::{Error, Result};

/// Hard cap on requested absolute precisions, in bits.
///
/// Large enough for any desk-scale run (the dominant consumer is the theta
/// precision `r_j`, which grows with `log D`); small enough that a runaway
/// retry loop fails loudly instead of thrashing.
pub const PRECISION_CAP: u32 = 1 << 23;

/// Distance to a nearest element of `2^{-n} Z[i]` is at most
/// `2^{-n-1}·√2 < 0.70711·2^{-n}`. We charge this for every rounding.
pub(crate) fn rounding_err(n: u32) -> ErrorBound {
    // 0.70711 < 13044243944972595/2^54, but a 64-bit mantissa is what we have:
    // ceil(0.7071068 * 2^63) = 6521908912666391107.
    ErrorBound::from_ratio(6_521_908_912_666_391_107, 63 + n as i64)
}

/// A dyadic Gaussian number `(re + i·im)·2^{-prec}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxComplex {
    re: BigInt,
    im: BigInt,
    prec: u32,
}

/// Rounds `m / 2^sh` to the nearest integer, ties away from zero.
pub(crate) fn round_shift(m: &BigInt, sh: u32) -> BigInt {
    if sh == 0 {
        return m.clone();
    }
    let half = BigInt::one() << (sh - 1);
    if m.is_negative() {
        -(((-m) + half) >> sh)
    } else {
        (m + half) >> sh
    }
}

impl ApproxComplex {
    pub fn new(re: BigInt, im: BigInt, prec: u32) -> Self {
        ApproxComplex { re, im, prec }
    }

    pub fn zero(prec: u32) -> Self {
        ApproxComplex {
            re: BigInt::zero(),
            im: BigInt::zero(),
            prec,
        }
    }

    pub fn one(prec: u32) -> Self {
        ApproxComplex {
            re: BigInt::one() << prec,
            im: BigInt::zero(),
            prec,
        }
    }

    pub fn from_int(re: i64, im: i64, prec: u32) -> Self {
        ApproxComplex {
            re: BigInt::from(re) << prec,
            im: BigInt::from(im) << prec,
            prec,
        }
    }

    /// Real dyadic from scaled integer parts.
    pub fn from_real_scaled(m: BigInt, prec: u32) -> Self {
        ApproxComplex {
            re: m,
            im: BigInt::zero(),
            prec,
        }
    }

    pub fn re_num(&self) -> &BigInt {
        &self.re
    }

    pub fn im_num(&self) -> &BigInt {
        &self.im
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        ApproxComplex {
            re: self.re.clone(),
            im: -&self.im,
            prec: self.prec,
        }
    }

    pub fn neg(&self) -> Self {
        ApproxComplex {
            re: -&self.re,
            im: -&self.im,
            prec: self.prec,
        }
    }

    /// Multiplication by `i^k`, exact.
    pub fn mul_i_pow(&self, k: u8) -> Self {
        match k % 4 {
            0 => self.clone(),
            1 => ApproxComplex {
                re: -&self.im,
                im: self.re.clone(),
                prec: self.prec,
            },
            2 => self.neg(),
            _ => ApproxComplex {
                re: self.im.clone(),
                im: -&self.re,
                prec: self.prec,
            },
        }
    }

    /// Exact precision raise (or no-op when `n <= prec`... callers must pass
    /// `n >= prec`; raising is always exact).
    pub fn raise_prec(&self, n: u32) -> Self {
        debug_assert!(n >= self.prec);
        let sh = n - self.prec;
        ApproxComplex {
            re: &self.re << sh,
            im: &self.im << sh,
            prec: n,
        }
    }

    /// Nearest element of `2^{-n} Z[i]`, ties away from zero. Exact when
    /// `n >= prec`.
    pub fn round_to(&self, n: u32) -> Self {
        if n >= self.prec {
            return self.raise_prec(n);
        }
        let sh = self.prec - n;
        ApproxComplex {
            re: round_shift(&self.re, sh),
            im: round_shift(&self.im, sh),
            prec: n,
        }
    }

    /// Exact multiplication by `2^k` (represented by adjusting the precision
    /// or shifting, so no information is lost).
    pub fn scale2(&self, k: i64) -> Self {
        if k >= 0 {
            ApproxComplex {
                re: &self.re << k as u32,
                im: &self.im << k as u32,
                prec: self.prec,
            }
        } else {
            let d = (-k) as u32;
            ApproxComplex {
                re: self.re.clone(),
                im: self.im.clone(),
                prec: self.prec + d,
            }
        }
    }

    /// Sum at precision `n`. Exact (no rounding error) when both inputs are
    /// at precision `<= n`; otherwise rounds once at the end.
    pub fn add(&self, other: &Self, n: u32) -> Self {
        let p = self.prec.max(other.prec).max(n);
        let a = self.raise_prec(p);
        let b = other.raise_prec(p);
        ApproxComplex {
            re: a.re + b.re,
            im: a.im + b.im,
            prec: p,
        }
        .round_to(n)
    }

    pub fn sub(&self, other: &Self, n: u32) -> Self {
        self.add(&other.neg(), n)
    }

    /// Product rounded to the nearest element of `2^{-n} Z[i]`.
    ///
    /// The product of the dyadic inputs is computed exactly (three big
    /// multiplications) and rounded once, so the rounding error is at most
    /// `2^{-n-1}·√2` and the total error obeys
    /// `ε ≤ ε(a)|b| + ε(b)|a| + ε(a)ε(b) + 2^{-n}`.
    pub fn mul(&self, other: &Self, n: u32) -> Self {
        // (a+bi)(c+di): k1 = c(a+b), k2 = a(d-c), k3 = b(c+d).
        let (a, b) = (&self.re, &self.im);
        let (c, d) = (&other.re, &other.im);
        let k1 = c * (a + b);
        let k2 = a * (d - c);
        let k3 = b * (c + d);
        let exact = ApproxComplex {
            re: &k1 - &k3,
            im: k1 + k2,
            prec: self.prec + other.prec,
        };
        exact.round_to(n)
    }

    /// Exact square of the value (precision doubles).
    pub fn square_exact(&self) -> Self {
        let (a, b) = (&self.re, &self.im);
        let re = (a + b) * (a - b);
        let im = (a * b) << 1;
        ApproxComplex {
            re,
            im,
            prec: 2 * self.prec,
        }
    }

    /// `|re|^2 + |im|^2` as an exact dyadic real.
    pub fn norm_sqr_exact(&self) -> (BigInt, u32) {
        (&self.re * &self.re + &self.im * &self.im, 2 * self.prec)
    }

    /// Certified upper bound on `|self|`, computed from 64-bit mantissa
    /// bounds of the parts (cheap; never touches the full big integers).
    pub fn mag_upper(&self) -> ErrorBound {
        let r = ErrorBound::from_scaled_int(&self.re, self.prec);
        let i = ErrorBound::from_scaled_int(&self.im, self.prec);
        r.mul(r).add(i.mul(i)).sqrt_up()
    }

    /// Certified lower bound on `|self|` (`None` when the value is 0).
    pub fn mag_lower(&self) -> Option<LowerBound> {
        // max(|re|,|im|) <= |z|; good enough for divisor bounds.
        let m = if self.re.magnitude() >= self.im.magnitude() {
            &self.re
        } else {
            &self.im
        };
        LowerBound::from_scaled_int(m, self.prec)
    }

    /// Exact value as a pair of rationals.
    pub fn to_rationals(&self) -> (BigRational, BigRational) {
        let den: BigInt = BigInt::one() << self.prec;
        (
            BigRational::new(self.re.clone(), den.clone()),
            BigRational::new(self.im.clone(), den),
        )
    }

    /// Nearest dyadic approximation of a rational point at precision `n`.
    pub fn from_rationals(re: &BigRational, im: &BigRational, n: u32) -> Self {
        fn round_q(q: &BigRational, n: u32) -> BigInt {
            let scaled = q * BigRational::from_integer(BigInt::one() << n);
            let (num, den) = (scaled.numer(), scaled.denom());
            // round(num/den), ties away from zero
            let two_num: BigInt = num << 1u32;
            let sgn_half = if num.is_negative() { -den } else { den.clone() };
            (two_num + sgn_half) / (den << 1u32)
        }
        ApproxComplex {
            re: round_q(re, n),
            im: round_q(im, n),
            prec: n,
        }
    }
}

impl fmt::Display for ApproxComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2^-{}*({} + {}i)", self.prec, self.re, self.im)
    }
}

/// A value together with a certified bound on its distance to the quantity it
/// approximates (midpoint/radius, i.e. ball arithmetic on dyadic midpoints).
#[derive(Clone, Debug)]
pub struct Ball {
    pub mid: ApproxComplex,
    pub rad: ErrorBound,
}

impl Ball {
    pub fn exact(v: ApproxComplex) -> Self {
        Ball {
            mid: v,
            rad: ErrorBound::ZERO,
        }
    }

    pub fn new(mid: ApproxComplex, rad: ErrorBound) -> Self {
        Ball { mid, rad }
    }

    pub fn zero(prec: u32) -> Self {
        Ball::exact(ApproxComplex::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        Ball::exact(ApproxComplex::one(prec))
    }

    pub fn conj(&self) -> Self {
        Ball {
            mid: self.mid.conj(),
            rad: self.rad,
        }
    }

    pub fn neg(&self) -> Self {
        Ball {
            mid: self.mid.neg(),
            rad: self.rad,
        }
    }

    pub fn mul_i_pow(&self, k: u8) -> Self {
        Ball {
            mid: self.mid.mul_i_pow(k),
            rad: self.rad,
        }
    }

    /// Exact scaling by `2^k`.
    pub fn scale2(&self, k: i64) -> Self {
        Ball {
            mid: self.mid.scale2(k),
            rad: self.rad.scale2(k),
        }
    }

    pub fn add(&self, other: &Self, n: u32) -> Self {
        let needs_round = self.mid.precision() > n || other.mid.precision() > n;
        let mid = self.mid.add(&other.mid, n);
        let mut rad = self.rad.add(other.rad);
        if needs_round {
            rad = rad.add(rounding_err(n));
        }
        Ball { mid, rad }
    }

    pub fn sub(&self, other: &Self, n: u32) -> Self {
        self.add(&other.neg(), n)
    }

    pub fn mul(&self, other: &Self, n: u32) -> Self {
        let mid = self.mid.mul(&other.mid, n);
        let ma = self.mid.mag_upper();
        let mb = other.mid.mag_upper();
        let rad = self
            .rad
            .mul(mb)
            .add(other.rad.mul(ma))
            .add(self.rad.mul(other.rad))
            .add(rounding_err(n));
        Ball { mid, rad }
    }

    /// Multiplication by a small exact integer.
    pub fn mul_int(&self, k: &BigInt) -> Self {
        let mag = ErrorBound::from_scaled_int(k, 0);
        Ball {
            mid: ApproxComplex {
                re: &self.mid.re * k,
                im: &self.mid.im * k,
                prec: self.mid.prec,
            },
            rad: self.rad.mul(mag),
        }
    }

    /// Ball division at precision `n`. Fails when the divisor is not
    /// certifiably nonzero.
    pub fn div(&self, other: &Self, n: u32) -> Result<Self> {
        let lb_mid = other.mid.mag_lower().ok_or_else(|| {
            Error::PrecisionExhausted("division by a value indistinguishable from 0".to_string())
        })?;
        let lb_true = lb_mid.sub_bound(&other.rad).ok_or_else(|| {
            Error::PrecisionExhausted(
                "divisor's certified magnitude does not exclude 0".to_string(),
            )
        })?;

        // mid = round(a * conj(b) / |b|^2) computed exactly on dyadics.
        let num = self.mid.mul_exact(&other.mid.conj());
        let (den, den_prec) = other.mid.norm_sqr_exact();
        // (num / 2^np) / (den / 2^dp) at target n:
        // round(num * 2^(n + dp - np) / den).
        let np = num.prec as i64;
        let dp = den_prec as i64;
        let sh = n as i64 + dp - np;
        let (sre, sim) = if sh >= 0 {
            (&num.re << sh as u32, &num.im << sh as u32)
        } else {
            // Fold the downshift into the divisor.
            (num.re.clone(), num.im.clone())
        };
        let d = if sh >= 0 { den.clone() } else { &den << (-sh) as u32 };
        let mid = ApproxComplex {
            re: div_round_nearest(&sre, &d),
            im: div_round_nearest(&sim, &d),
            prec: n,
        };

        // |a/b - ã/b̃| <= (ε_a|b̃| + ε_b|ã|) / (|b|·|b̃|), plus rounding.
        let ma = self.mid.mag_upper();
        let mb = other.mid.mag_upper();
        let num_err = self.rad.mul(mb).add(other.rad.mul(ma));
        let rad = num_err
            .div_by_lower(lb_true)
            .div_by_lower(lb_mid)
            .add(rounding_err(n));
        Ok(Ball { mid, rad })
    }

    pub fn inv(&self, n: u32) -> Result<Self> {
        Ball::one(n).div(self, n)
    }

    pub fn round_to(&self, n: u32) -> Self {
        if n >= self.mid.precision() {
            return Ball {
                mid: self.mid.raise_prec(n),
                rad: self.rad,
            };
        }
        Ball {
            mid: self.mid.round_to(n),
            rad: self.rad.add(rounding_err(n)),
        }
    }

    /// Upper bound on `|value|` (midpoint magnitude plus radius).
    pub fn mag_upper(&self) -> ErrorBound {
        self.mid.mag_upper().add(self.rad)
    }

    /// Certified lower bound on `|value|`.
    pub fn mag_lower(&self) -> Option<LowerBound> {
        self.mid.mag_lower()?.sub_bound(&self.rad)
    }
}

impl ApproxComplex {
    /// Exact product (precision adds up).
    pub fn mul_exact(&self, other: &Self) -> Self {
        let (a, b) = (&self.re, &self.im);
        let (c, d) = (&other.re, &other.im);
        let k1 = c * (a + b);
        let k2 = a * (d - c);
        let k3 = b * (c + d);
        ApproxComplex {
            re: &k1 - &k3,
            im: k1 + k2,
            prec: self.prec + other.prec,
        }
    }
}

/// `round(n/d)` for `d > 0`, ties away from zero.
pub(crate) fn div_round_nearest(n: &BigInt, d: &BigInt) -> BigInt {
    debug_assert!(d.is_positive());
    let two_n: BigInt = n << 1u32;
    let adj = if n.is_negative() { -d } else { d.clone() };
    (two_n + adj) / (d << 1u32)
}

/// Public entry points mirroring the operation contracts: totals over
/// dyadic values, with the error rules handled by [`Ball`].
pub fn add(a: &ApproxComplex, b: &ApproxComplex, n: u32) -> ApproxComplex {
    a.add(b, n)
}

pub fn mul(a: &ApproxComplex, b: &ApproxComplex, n: u32) -> ApproxComplex {
    a.mul(b, n)
}

pub fn round_to(a: &ApproxComplex, n: u32) -> ApproxComplex {
    a.round_to(n)
}

/// `E(z) = e^{πiz}` for `Im z >= 0`, with certified error `<= 2^{-n}` plus
/// propagated input error. See [`transcend`] for the kernel.
pub fn exp_pi_i(z: &ApproxComplex, n: u32) -> Result<ApproxComplex> {
    if n > PRECISION_CAP {
        return Err(Error::PrecisionCap {
            requested: n,
            cap: PRECISION_CAP,
        });
    }
    let cache = PiCache::new();
    let b = exp_pi_i_tracked(&Ball::exact(z.clone()), n, &cache)?;
    Ok(b.mid)
}

#[cfg(test)]
mod tests;
