//! Cheap nonnegative dyadic upper bounds for error accounting.
//!
//! An [`ErrorBound`] is `mant * 2^exp` with a 64-bit mantissa. Every operation
//! rounds up, so a computed bound is always a true upper bound of the exact
//! real it stands for. This keeps error propagation O(1) per arithmetic
//! operation instead of dragging big rationals through the hot loops.

use core::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::Zero;

/// Upper bound on some nonnegative real quantity, `mant * 2^exp`.
///
/// `mant == 0` encodes an exact zero. Nonzero mantissas are kept normalized
/// to the top bit (`mant >= 2^63`) so comparisons are cheap.
#[derive(Clone, Copy, Debug)]
pub struct ErrorBound {
    mant: u64,
    exp: i64,
}

impl ErrorBound {
    pub const ZERO: ErrorBound = ErrorBound { mant: 0, exp: 0 };

    /// `2^k`.
    pub fn two_pow(k: i64) -> Self {
        ErrorBound {
            mant: 1 << 63,
            exp: k - 63,
        }
    }

    /// Smallest representable bound `>= num/2^shift`.
    pub fn from_ratio(num: u64, shift: i64) -> Self {
        if num == 0 {
            return Self::ZERO;
        }
        ErrorBound {
            mant: num,
            exp: -shift,
        }
        .normalize()
    }

    /// Upper bound on `|m| * 2^(-prec)` for a big integer `m`.
    pub fn from_scaled_int(m: &BigInt, prec: u32) -> Self {
        let mag = m.magnitude();
        if mag.is_zero() {
            return Self::ZERO;
        }
        let bits = mag.bits();
        if bits <= 64 {
            let digits = mag.to_u64_digits();
            return ErrorBound {
                mant: digits[0],
                exp: -(prec as i64),
            }
            .normalize();
        }
        // Keep the top 64 bits and round up.
        let shift = bits - 64;
        let top = mag >> shift;
        let mut mant = top.to_u64_digits()[0];
        // +1 covers the dropped low bits; on overflow fold into the exponent.
        let exp = if mant == u64::MAX {
            mant = 1 << 63;
            shift as i64 + 1 - prec as i64
        } else {
            mant += 1;
            shift as i64 - prec as i64
        };
        ErrorBound { mant, exp }.normalize()
    }

    fn normalize(self) -> Self {
        if self.mant == 0 {
            return Self::ZERO;
        }
        let lz = self.mant.leading_zeros() as i64;
        ErrorBound {
            mant: self.mant << lz,
            exp: self.exp - lz,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant == 0
    }

    /// Rounds up: shifts the mantissa right, adding one if bits are dropped.
    fn shr_up(mant: u64, sh: i64) -> u64 {
        debug_assert!(sh >= 0);
        if sh >= 64 {
            1
        } else if sh == 0 {
            mant
        } else {
            let dropped = mant & ((1u64 << sh) - 1) != 0;
            (mant >> sh) + u64::from(dropped)
        }
    }

    pub fn add(self, other: Self) -> Self {
        if self.mant == 0 {
            return other;
        }
        if other.mant == 0 {
            return self;
        }
        let (hi, lo) = if self.exp >= other.exp {
            (self, other)
        } else {
            (other, self)
        };
        // Align lo to hi's exponent (round up), then add with carry room.
        let lo_m = Self::shr_up(lo.mant, hi.exp - lo.exp);
        let (sum, ovf) = hi.mant.overflowing_add(lo_m);
        if ovf {
            ErrorBound {
                mant: Self::shr_up(hi.mant, 1) + Self::shr_up(lo_m, 1) + 1,
                exp: hi.exp + 1,
            }
            .normalize()
        } else {
            ErrorBound {
                mant: sum,
                exp: hi.exp,
            }
            .normalize()
        }
    }

    pub fn mul(self, other: Self) -> Self {
        if self.mant == 0 || other.mant == 0 {
            return Self::ZERO;
        }
        let prod = self.mant as u128 * other.mant as u128;
        let hi = (prod >> 64) as u64;
        let lo = prod as u64;
        ErrorBound {
            mant: hi + u64::from(lo != 0),
            exp: self.exp + other.exp + 64,
        }
        .normalize()
    }

    /// `self * 2^k`.
    pub fn scale2(self, k: i64) -> Self {
        if self.mant == 0 {
            return self;
        }
        ErrorBound {
            mant: self.mant,
            exp: self.exp + k,
        }
    }

    /// `self * n`, rounding up.
    pub fn mul_u64(self, n: u64) -> Self {
        self.mul(ErrorBound::from_ratio(n, 0))
    }

    /// Upper bound on `self / d` where `d` is a certified *lower* bound of
    /// the true divisor, given as `(mant, exp)` with value `mant * 2^exp`.
    pub fn div_by_lower(self, d: LowerBound) -> Self {
        if self.mant == 0 {
            return Self::ZERO;
        }
        debug_assert!(d.mant != 0);
        // self/d <= (mant_self * 2^64 / mant_d + 1) * 2^(exp_self - exp_d - 64)
        let num = (self.mant as u128) << 64;
        let q = num / d.mant as u128;
        // q fits in 65 bits at most since mant_self < 2^64 and mant_d >= 2^63.
        let (mant, extra) = if q >> 64 != 0 {
            ((q >> 1) as u64 + 1, 1)
        } else {
            (q as u64 + 1, 0)
        };
        ErrorBound {
            mant,
            exp: self.exp - d.exp - 64 + extra,
        }
        .normalize()
    }

    pub fn max(self, other: Self) -> Self {
        if self.cmp_bound(&other) == Ordering::Less {
            other
        } else {
            self
        }
    }

    fn cmp_bound(&self, other: &Self) -> Ordering {
        if self.mant == 0 || other.mant == 0 {
            return (self.mant != 0).cmp(&(other.mant != 0));
        }
        // Both normalized to the top bit, so exponents order first.
        self.exp.cmp(&other.exp).then(self.mant.cmp(&other.mant))
    }

    /// `self <= 2^k`?
    pub fn le_two_pow(&self, k: i64) -> bool {
        self.cmp_bound(&Self::two_pow(k)) != Ordering::Greater
    }

    /// Upper bound on the square root of the bound.
    pub fn sqrt_up(self) -> Self {
        if self.mant == 0 {
            return self;
        }
        let (m, e) = if self.exp % 2 != 0 {
            ((self.mant as u128) << 1, self.exp - 1)
        } else {
            (self.mant as u128, self.exp)
        };
        let mut s = isqrt_u128(m);
        if s * s < m {
            s += 1;
        }
        ErrorBound {
            mant: s as u64,
            exp: e / 2,
        }
        .normalize()
    }

    /// `log2` of the bound, rounded up (`None` for zero).
    pub fn log2_ceil(&self) -> Option<i64> {
        if self.mant == 0 {
            return None;
        }
        let exact = self.mant == 1 << 63;
        Some(self.exp + 63 + i64::from(!exact))
    }

    /// Exact conversion to a scaled big integer, rounding up:
    /// smallest `m` with `m * 2^(-prec) >= self`.
    pub fn to_scaled_int_ceil(&self, prec: u32) -> BigInt {
        if self.mant == 0 {
            return BigInt::zero();
        }
        let sh = self.exp + prec as i64;
        let m = BigInt::from(self.mant);
        if sh >= 0 {
            m << sh
        } else {
            let down = -sh as u64;
            let mask_nonzero = if down >= 64 {
                self.mant != 0
            } else {
                self.mant & ((1u64 << down) - 1) != 0
            };
            let shifted: BigInt = m >> down;
            shifted + BigInt::from(u8::from(mask_nonzero))
        }
    }
}

/// Floor of the integer square root, Newton iteration from above.
pub(crate) fn isqrt_u128(v: u128) -> u128 {
    if v == 0 {
        return 0;
    }
    let bits = 128 - v.leading_zeros();
    let mut x = 1u128 << bits.div_ceil(2);
    loop {
        let y = (x + v / x) >> 1;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// Certified lower bound on a positive quantity, `mant * 2^exp` with the
/// mantissa normalized to the top bit. Produced by magnitude estimates and
/// consumed by [`ErrorBound::div_by_lower`].
#[derive(Clone, Copy, Debug)]
pub struct LowerBound {
    pub(crate) mant: u64,
    pub(crate) exp: i64,
}

impl LowerBound {
    /// Lower bound on `|m| * 2^(-prec)`; `None` when `m == 0`.
    pub fn from_scaled_int(m: &BigInt, prec: u32) -> Option<Self> {
        let mag = m.magnitude();
        if mag.is_zero() {
            return None;
        }
        let bits = mag.bits();
        let (mant, exp) = if bits <= 64 {
            let d = mag.to_u64_digits()[0];
            let lz = d.leading_zeros() as i64;
            (d << lz, -lz - prec as i64)
        } else {
            let shift = bits - 64;
            let top = (mag >> shift).to_u64_digits()[0];
            (top, shift as i64 - prec as i64)
        };
        Some(LowerBound { mant, exp })
    }

    /// Shrinks the lower bound by an upper-bounded amount: returns a certified
    /// lower bound on `v - e` given `v >= self`. `None` when the result is not
    /// certainly positive.
    pub fn sub_bound(self, e: &ErrorBound) -> Option<Self> {
        if e.is_zero() {
            return Some(self);
        }
        if e.exp + 64 <= self.exp {
            // e < 2^(e.exp+64) <= one ulp of self's mantissa.
            let m = self.mant - 1;
            if m == 0 {
                return None;
            }
            let lz = m.leading_zeros() as i64;
            return Some(LowerBound {
                mant: m << lz,
                exp: self.exp - lz,
            });
        }
        if self.exp + 64 <= e.exp {
            return None;
        }
        // Exponent gap < 64 both ways: align exactly in 128 bits. Both sides
        // are exact dyadics, so the subtraction itself is exact.
        let exp = self.exp.min(e.exp);
        let sv = (self.mant as u128) << (self.exp - exp);
        let ev = (e.mant as u128) << (e.exp - exp);
        if sv <= ev {
            return None;
        }
        let diff = sv - ev;
        let bits = 128 - diff.leading_zeros() as i64;
        let adj = bits - 64;
        // Truncation rounds down, which is the safe direction here.
        let mant = if adj > 0 {
            (diff >> adj) as u64
        } else {
            (diff as u64) << (-adj)
        };
        Some(LowerBound {
            mant,
            exp: exp + adj,
        })
    }

    pub fn value_ge_two_pow(&self, k: i64) -> bool {
        // mant * 2^exp >= 2^63 * 2^exp, so exp+63 >= k suffices.
        self.exp + 63 >= k
    }

    /// `log2` of the bound, rounded down.
    pub fn log2_floor(&self) -> i64 {
        self.exp + 63
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn val(e: &ErrorBound) -> f64 {
        if e.is_zero() {
            0.0
        } else {
            e.mant as f64 * 2f64.powi(e.exp as i32)
        }
    }

    #[test]
    fn add_rounds_up() {
        let a = ErrorBound::from_ratio(3, 2); // 0.75
        let b = ErrorBound::from_ratio(5, 4); // 0.3125
        let s = a.add(b);
        assert!(val(&s) >= 1.0625);
        assert!(val(&s) <= 1.0626);
    }

    #[test]
    fn mul_rounds_up() {
        let a = ErrorBound::from_ratio(3, 1); // 1.5
        let b = ErrorBound::from_ratio(7, 2); // 1.75
        let p = a.mul(b);
        assert!(val(&p) >= 2.625);
        assert!(val(&p) < 2.6251);
    }

    #[test]
    fn scaled_int_roundtrip() {
        let m = BigInt::from(123456789u64);
        let e = ErrorBound::from_scaled_int(&m, 10);
        assert!(val(&e) >= 123456789.0 / 1024.0);
        let back = e.to_scaled_int_ceil(10);
        assert!(back >= m);
    }

    #[test]
    fn lower_bound_subtraction() {
        let m = BigInt::from(1 << 20);
        let lb = LowerBound::from_scaled_int(&m, 0).unwrap();
        let small = ErrorBound::from_ratio(1, 10);
        let lb2 = lb.sub_bound(&small).unwrap();
        assert!(lb2.log2_floor() >= 19);
        let huge = ErrorBound::from_ratio(1 << 21, 0);
        assert!(lb.sub_bound(&huge).is_none());
    }

    #[test]
    fn le_two_pow() {
        let e = ErrorBound::from_ratio(1, 5); // 2^-5
        assert!(e.le_two_pow(-5));
        assert!(!e.le_two_pow(-6));
    }
}
