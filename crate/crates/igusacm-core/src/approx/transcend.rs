//! Certified transcendental kernel: π, real exp, `E(z) = e^{πiz}`, and
//! square roots of positive reals.
//!
//! Everything here works on scaled big integers with explicit ulp counting;
//! the public functions return [`Ball`]s whose radii account for series
//! truncation, rounding, argument-reduction amplification, and propagated
//! input error.

use alloc::string::ToString;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{round_shift, Ball, ErrorBound, LowerBound};
use crate::approx::ApproxComplex;
use crate::error::{Error, Result};

/// Guard bits for internal transcendental evaluation; absorbs series
/// truncation and squaring amplification without per-call analysis.
pub const GUARD_BITS: u32 = 32;

/// π computed once per requested precision.
///
/// The cache is a frozen slot: build it with [`PiCache::for_precision`] at the
/// working precision of a pipeline stage and share it read-only between
/// workers. An empty cache still works; it just recomputes on each call.
#[derive(Clone, Debug, Default)]
pub struct PiCache {
    slot: Option<(u32, Ball)>,
}

impl PiCache {
    pub fn new() -> Self {
        PiCache { slot: None }
    }

    pub fn for_precision(n: u32) -> Self {
        PiCache {
            slot: Some((n, pi_machin(n))),
        }
    }

    /// π with error `<= 2^{-n}`, reusing the cached value when it is at least
    /// as precise.
    pub fn pi(&self, n: u32) -> Ball {
        match &self.slot {
            Some((p, ball)) if *p >= n => ball.clone(),
            _ => pi_machin(n),
        }
    }
}

/// π as a real ball at precision `n`.
pub fn pi_ball(n: u32) -> Ball {
    pi_machin(n)
}

/// Machin's formula `π = 16·atan(1/5) − 4·atan(1/239)` on scaled integers.
fn pi_machin(n: u32) -> Ball {
    let w = n + 64;
    let (a5, u5) = atan_recip_scaled(5, w);
    let (a239, u239) = atan_recip_scaled(239, w);
    let val = (a5 << 4u32) - (a239 << 2u32);
    let ulps = 16 * u5 + 4 * u239;
    let mid = ApproxComplex::from_real_scaled(val, w).round_to(n);
    let rad = ErrorBound::from_ratio(ulps, w as i64).add(super::rounding_err(n));
    Ball::new(mid, rad)
}

/// `atan(1/m) * 2^w` with a certified ulp error count.
fn atan_recip_scaled(m: u64, w: u32) -> (BigInt, u64) {
    let m2 = BigInt::from(m) * BigInt::from(m);
    let mut p = (BigInt::one() << w) / BigInt::from(m);
    let mut sum = p.clone();
    let mut k: u64 = 1;
    loop {
        p = p / &m2;
        if p.is_zero() {
            break;
        }
        let term = &p / BigInt::from(2 * k + 1);
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
    // Each term carries < 3 ulp of floor error; the tail after the first zero
    // partial is < 32 ulp.
    (sum, 3 * k + 32)
}

/// Square root of a certified-positive real ball, at precision `n`.
pub fn sqrt_ball(x: &Ball, n: u32) -> Result<Ball> {
    if !x.mid.im_num().is_zero() {
        return Err(Error::InvalidInput("sqrt of a non-real value".to_string()));
    }
    let lb = x.mag_lower().ok_or_else(|| {
        Error::PrecisionExhausted("sqrt argument not certifiably positive".to_string())
    })?;
    if x.mid.re_num().is_negative() {
        return Err(Error::InvalidInput("sqrt of a negative value".to_string()));
    }
    let p = x.mid.precision();
    let m = x.mid.re_num();
    // s = floor(sqrt(m * 2^(2n-p))), at most 2 ulp below the true root.
    let s = if 2 * n >= p {
        (m.magnitude() << (2 * n - p)).sqrt()
    } else {
        (m.magnitude() >> (p - 2 * n)).sqrt()
    };
    let mid = ApproxComplex::from_real_scaled(BigInt::from(s), n);
    // |√x − √x̃| ≤ ε_x / (2·√lower)
    let sqrt_lb = lb.sqrt_down();
    let prop = x.rad.div_by_lower(sqrt_lb).scale2(-1);
    let rad = ErrorBound::two_pow(-(n as i64) - 1)
        .scale2(2) // floor + shift slack: 2 ulp
        .add(prop);
    Ok(Ball::new(mid, rad))
}

impl LowerBound {
    /// Lower bound on the square root of the bound.
    pub fn sqrt_down(self) -> Self {
        let (m, e) = if self.exp % 2 != 0 {
            (self.mant as u128 >> 1, self.exp + 1)
        } else {
            (self.mant as u128, self.exp)
        };
        let s = super::bound::isqrt_u128(m) as u64;
        let lz = s.leading_zeros() as i64;
        LowerBound {
            mant: s << lz,
            exp: e / 2 - lz,
        }
    }
}

/// `e^{-t}` for a certified-nonnegative real `t`, at precision `n`.
///
/// Uses `e^{-t} = (e^{-t/2^m})^{2^m}` with the reduction depth balancing the
/// series length against the number of squarings.
pub fn exp_neg_real(t: &Ball, n: u32) -> Result<Ball> {
    if !t.mid.im_num().is_zero() {
        return Err(Error::InvalidInput(
            "exp_neg_real expects a real argument".to_string(),
        ));
    }
    let mut t = t.clone();
    if t.mid.re_num().is_negative() {
        // A certifiably negative argument is a caller bug; a midpoint that is
        // negative only within the radius gets clamped to 0.
        if t.mag_lower().is_some() {
            return Err(Error::InvalidInput(
                "exp_neg_real expects a nonnegative real".to_string(),
            ));
        }
        let mag = t.mid.mag_upper();
        t = Ball::new(ApproxComplex::zero(t.mid.precision()), t.rad.add(mag));
    }
    // Underflow: t >= n+2 forces e^{-t} < 2^{-(n+2)}.
    let p = t.mid.precision();
    if t.mid.re_num() >> (p as u64) >= BigInt::from(n + 2) {
        return Ok(Ball::new(
            ApproxComplex::zero(n),
            ErrorBound::two_pow(-(n as i64) - 1).add(t.rad),
        ));
    }

    let t_up = t.mag_upper();
    let l2t = t_up.log2_ceil().unwrap_or(-(n as i64)).max(-(n as i64));
    // Reduce so that r = t/2^m has r <= 2^{-e0}.
    let e0 = bit_budget(n);
    let m = (l2t + e0 as i64).max(0) as u32;
    let w = n + m + 64;
    let ulp = ErrorBound::two_pow(-(w as i64));

    // r at working precision, exact scalings only.
    let r = t.mid.raise_prec(w.max(p)).round_to(w).scale2(-(m as i64));
    let rm = r.re_num().clone();
    let rp = r.precision();
    // Series sum_{k} (-r)^k / k! on 2^w-scaled integers.
    let mut term = BigInt::one() << w;
    let mut sum = term.clone();
    let mut k: u64 = 1;
    let mut err = ulp.mul_u64(2);
    loop {
        term = round_shift(&(&term * &rm), rp);
        term = &term / BigInt::from(k);
        if term.is_zero() {
            break;
        }
        if k % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
        err = err.add(ulp.mul_u64(3));
        k += 1;
        if k > 4 * w as u64 {
            return Err(Error::PrecisionExhausted(
                "exp series failed to converge".to_string(),
            ));
        }
    }
    // Tail after the first vanishing term is below 2 ulp.
    err = err.add(ulp.mul_u64(2));

    // m squarings; each doubles the error (plus the quadratic tail) and adds
    // a rounding ulp.
    let mut v = sum;
    for _ in 0..m {
        v = round_shift(&(&v * &v), w);
        err = err.scale2(1).add(err.mul(err)).add(ulp);
    }

    let mid = ApproxComplex::from_real_scaled(v, w).round_to(n);
    // Lipschitz constant of e^{-t} on t >= 0 is 1.
    let rad = err.add(t.rad).add(super::rounding_err(n));
    Ok(Ball::new(mid, rad))
}

/// Reduction sharpness: larger targets shorten the series but add squarings.
fn bit_budget(n: u32) -> u32 {
    let mut e0 = 6u32;
    while e0 * e0 < n {
        e0 += e0 / 2 + 1;
    }
    e0.max(6)
}

/// `e^{iπx}` for a real ball `x`, at precision `n`. The argument is reduced
/// modulo 2 exactly (E is 2-periodic) before the series.
pub fn exp_i_pi_real(x: &Ball, n: u32, cache: &PiCache) -> Result<Ball> {
    if !x.mid.im_num().is_zero() {
        return Err(Error::InvalidInput(
            "exp_i_pi_real expects a real argument".to_string(),
        ));
    }
    let e0 = bit_budget(n);
    let m = e0 + 2;
    let w = n + m + 64;

    // x mod 2 into [-1, 1), exact on the dyadic midpoint.
    let p = x.mid.precision();
    let modulus = BigInt::one() << (p + 1);
    let mut xm = x.mid.re_num() % &modulus;
    let half = BigInt::one() << p;
    if xm >= half {
        xm -= &modulus;
    } else if xm < -&half {
        xm += &modulus;
    }

    // q = π·x / 2^m at precision w. Rounding happens before the scale-down,
    // so its effect on the reassembled exponent is 1:1, not 2^m-fold.
    let pi = cache.pi(w);
    let xr = Ball::new(ApproxComplex::from_real_scaled(xm, p), ErrorBound::ZERO);
    let q = pi.mul(&xr, w);
    let q_err_amplified = q.rad; // |2^m·(q/2^m) − π·x_mid|, no further scaling
    let q = q.scale2(-(m as i64));
    let qm = q.mid.re_num().clone();
    let qprec = q.mid.precision();
    let ulp = ErrorBound::two_pow(-(w as i64));

    // Complex series for e^{iq}: term *= i·q/k.
    let mut re_t = BigInt::one() << w;
    let mut im_t = BigInt::zero();
    let mut re_s = re_t.clone();
    let mut im_s = BigInt::zero();
    let mut k: u64 = 1;
    let mut err = ulp.mul_u64(2);
    loop {
        // (a+bi)·iq = -b·q + a·q·i
        let new_re = round_shift(&(-&im_t * &qm), qprec) / BigInt::from(k);
        let new_im = round_shift(&(&re_t * &qm), qprec) / BigInt::from(k);
        re_t = new_re;
        im_t = new_im;
        if re_t.is_zero() && im_t.is_zero() {
            break;
        }
        re_s += &re_t;
        im_s += &im_t;
        err = err.add(ulp.mul_u64(4));
        k += 1;
        if k > 4 * w as u64 {
            return Err(Error::PrecisionExhausted(
                "trig series failed to converge".to_string(),
            ));
        }
    }
    err = err.add(ulp.mul_u64(2));

    // m complex squarings (values stay on the unit circle up to err).
    let mut re_v = re_s;
    let mut im_v = im_s;
    for _ in 0..m {
        let rr = round_shift(&((&re_v + &im_v) * (&re_v - &im_v)), w);
        let ii = round_shift(&((&re_v * &im_v) << 1u32), w);
        re_v = rr;
        im_v = ii;
        err = err
            .scale2(1)
            .add(err.mul(err).mul_u64(2))
            .add(ulp.mul_u64(2));
    }

    let mid = ApproxComplex::new(re_v, im_v, w).round_to(n);
    // Exponent errors transfer 1:1 (|e^{ia}-e^{ib}| <= |a-b|): the amplified
    // q rounding, π·(input radius) with |d/dx e^{iπx}| = π < 4.
    let prop = x.rad.mul(ErrorBound::two_pow(2)).add(q_err_amplified);
    let rad = err.add(prop).add(super::rounding_err(n));
    Ok(Ball::new(mid, rad))
}

/// `E(z) = e^{πiz}` with certified error, for `Im z >= 0`.
pub fn exp_pi_i_tracked(z: &Ball, n: u32, cache: &PiCache) -> Result<Ball> {
    let w = n + GUARD_BITS;
    let x = Ball::new(
        ApproxComplex::from_real_scaled(z.mid.re_num().clone(), z.mid.precision()),
        z.rad,
    );
    let y = Ball::new(
        ApproxComplex::from_real_scaled(z.mid.im_num().clone(), z.mid.precision()),
        z.rad,
    );
    if y.mid.re_num().is_negative() && y.mag_lower().is_some() {
        return Err(Error::InvalidInput(
            "E(z) requires Im z >= 0".to_string(),
        ));
    }
    let pi = cache.pi(w);
    let t = pi.mul(&y, w);
    let damp = exp_neg_real(&t, w)?;
    let rot = exp_i_pi_real(&x, w, cache)?;
    Ok(damp.mul(&rot, w).round_to(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ball_to_f64(b: &Ball) -> (f64, f64) {
        let (re, im) = b.mid.to_rationals();
        fn q(r: &num_rational::BigRational) -> f64 {
            num_traits::ToPrimitive::to_f64(r).unwrap()
        }
        (q(&re), q(&im))
    }

    #[test]
    fn pi_value() {
        let p = pi_ball(64);
        let (re, _) = ball_to_f64(&p);
        assert!((re - core::f64::consts::PI).abs() < 1e-15);
        assert!(p.rad.le_two_pow(-60));
    }

    #[test]
    fn exp_neg_matches() {
        let cases = [(1i64, core::f64::consts::E.recip()), (2, 0.1353352832366127)];
        for (t, want) in cases {
            let tb = Ball::exact(ApproxComplex::from_int(t, 0, 32));
            let e = exp_neg_real(&tb, 80).unwrap();
            let (re, _) = ball_to_f64(&e);
            assert!((re - want).abs() < 1e-12, "e^-{t}: {re} vs {want}");
            assert!(e.rad.le_two_pow(-70));
        }
    }

    #[test]
    fn exp_i_pi_quarter() {
        // e^{iπ/4} = (√2/2)(1+i)
        let x = Ball::exact(ApproxComplex::new(
            num_bigint::BigInt::from(1),
            num_bigint::BigInt::from(0),
            2,
        ));
        let cache = PiCache::for_precision(96 + 64 + 64);
        let v = exp_i_pi_real(&x, 96, &cache).unwrap();
        let (re, im) = ball_to_f64(&v);
        let s = core::f64::consts::FRAC_1_SQRT_2;
        assert!((re - s).abs() < 1e-12);
        assert!((im - s).abs() < 1e-12);
    }

    #[test]
    fn exp_periodicity() {
        // E(z+2) = E(z) up to the certified radii.
        let cache = PiCache::new();
        let z = ApproxComplex::new(BigInt::from(7), BigInt::from(5), 3);
        let z2 = ApproxComplex::new(BigInt::from(7 + 16), BigInt::from(5), 3);
        let a = exp_pi_i_tracked(&Ball::exact(z), 100, &cache).unwrap();
        let b = exp_pi_i_tracked(&Ball::exact(z2), 100, &cache).unwrap();
        let d = a.sub(&b, 100);
        assert!(d.mag_upper().le_two_pow(-98));
    }

    #[test]
    fn sqrt_simple() {
        let x = Ball::exact(ApproxComplex::from_int(2, 0, 16));
        let s = sqrt_ball(&x, 100).unwrap();
        let (re, _) = ball_to_f64(&s);
        assert!((re - core::f64::consts::SQRT_2).abs() < 1e-14);
    }
}
