//! The four embeddings `K → C`, with certified dyadic values and exact sign
//! information.
//!
//! All roots of `x⁴+2a·x²+(a²−b²Δ₀)` are purely imaginary:
//! `±i·√(a+b√Δ₀)` and `±i·√(a−b√Δ₀)`. Labels: `φ₁` is the root with
//! positive imaginary part of larger magnitude, `φ₂` the other positive one,
//! `φ₃ = φ̄₁`, `φ₄ = φ̄₂`. On the real subfield, `φ₁` acts by `√Δ₀ ↦ −√Δ₀`
//! and `φ₂` is the identity.

use core::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::element::{FieldElement, QuadElement};
use super::CMFieldSpec;
use crate::approx::{sqrt_ball, ApproxComplex, Ball, ErrorBound};
use crate::error::Result;

/// One of the four embeddings, `0..=3` standing for `φ₁..φ₄`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct EmbeddingId(pub u8);

impl EmbeddingId {
    pub fn conjugate(self) -> Self {
        EmbeddingId((self.0 + 2) % 4)
    }

    /// Sign of the imaginary part of `φ(α)`.
    fn im_sign(self) -> i8 {
        if self.0 < 2 {
            1
        } else {
            -1
        }
    }

    /// Does this embedding use the larger root `√(a+b√Δ₀)`?
    fn big_root(self) -> bool {
        self.0 % 2 == 0
    }

    /// Image of `√Δ₀`: `φ₁, φ₃` negate it, `φ₂, φ₄` fix it.
    pub fn fixes_sqrt_delta0(self) -> bool {
        !self.big_root()
    }

    pub fn all() -> [EmbeddingId; 4] {
        [EmbeddingId(0), EmbeddingId(1), EmbeddingId(2), EmbeddingId(3)]
    }
}

/// Certified numeric data for the embeddings at a fixed precision.
#[derive(Clone, Debug)]
pub struct Embeddings {
    pub spec: CMFieldSpec,
    pub prec: u32,
    sqrt_d0: Ball,
    r_big: Ball,
    r_small: Ball,
}

fn ball_from_rational(q: &BigRational, prec: u32) -> Ball {
    let mid = ApproxComplex::from_rationals(q, &BigRational::zero(), prec);
    Ball::new(mid, crate::approx::rounding_err(prec))
}

/// Computes the three square roots needed by all four embeddings, each with
/// certified error at precision `n`.
pub fn embeddings(spec: &CMFieldSpec, n: u32) -> Result<Embeddings> {
    let w = n + 16;
    let d0 = Ball::exact(ApproxComplex::from_int(spec.delta0 as i64, 0, 8));
    let sqrt_d0 = sqrt_ball(&d0, w)?;
    let a = Ball::exact(ApproxComplex::from_int(spec.a as i64, 0, 8));
    let b = BigInt::from(spec.b);
    let b_sqrt_d0 = sqrt_d0.mul_int(&b);
    let s_plus = a.add(&b_sqrt_d0, w);
    let s_minus = a.sub(&b_sqrt_d0, w);
    let r_big = sqrt_ball(&s_plus, w)?;
    let r_small = sqrt_ball(&s_minus, w)?;
    Ok(Embeddings {
        spec: spec.clone(),
        prec: n,
        sqrt_d0,
        r_big,
        r_small,
    })
}

impl Embeddings {
    /// `φ(x)` as a certified complex ball.
    pub fn apply(&self, id: EmbeddingId, x: &FieldElement) -> Ball {
        let w = self.prec + 16;
        // φ(α²) = −a + b·φ(√Δ₀)
        let sd = if id.fixes_sqrt_delta0() {
            self.sqrt_d0.clone()
        } else {
            self.sqrt_d0.neg()
        };
        let alpha_sq = sd
            .mul_int(&BigInt::from(self.spec.b))
            .sub(&Ball::exact(ApproxComplex::from_int(self.spec.a as i64, 0, 8)), w);
        let re = ball_from_rational(&x.coords[0], w).add(
            &ball_from_rational(&x.coords[2], w).mul(&alpha_sq, w),
            w,
        );
        let odd = ball_from_rational(&x.coords[1], w).add(
            &ball_from_rational(&x.coords[3], w).mul(&alpha_sq, w),
            w,
        );
        let r = if id.big_root() {
            &self.r_big
        } else {
            &self.r_small
        };
        let mut im = odd.mul(r, w);
        if id.im_sign() < 0 {
            im = im.neg();
        }
        // Assemble re + i·im from the two real balls (both at precision w).
        let assembled = Ball::new(
            ApproxComplex::new(re.mid.re_num().clone(), im.mid.re_num().clone(), w),
            re.rad.add(im.rad),
        );
        assembled.round_to(self.prec)
    }

    /// Exact sign of `Im φ(x)`.
    pub fn im_sign_exact(&self, id: EmbeddingId, x: &FieldElement) -> Ordering {
        im_sign_exact(&self.spec, id, x)
    }
}

/// Exact sign of `Im φ(x)` using only rational arithmetic:
/// `Im φ(x) = ±r·(c₁ + c₃·φ(α²))` with `r > 0`.
pub fn im_sign_exact(spec: &CMFieldSpec, id: EmbeddingId, x: &FieldElement) -> Ordering {
    let a = BigRational::from_integer(BigInt::from(spec.a));
    let b = BigRational::from_integer(BigInt::from(spec.b));
    // c₁ + c₃·(−a + b·φ(√Δ₀)) = (c₁ − a·c₃) + (±b·c₃)·√Δ₀
    let u = &x.coords[1] - &a * &x.coords[3];
    let v = if id.fixes_sqrt_delta0() {
        &b * &x.coords[3]
    } else {
        -(&b * &x.coords[3])
    };
    let q = QuadElement { a: u, b: v };
    let s = q.sign_at(spec.delta0, true);
    if id.im_sign() < 0 {
        s.reverse()
    } else {
        s
    }
}

/// Exact real-part data: `Re φ(x) = (c₀ − a·c₂) ± (b·c₂)√Δ₀` as an element
/// of `K₀` together with which root to substitute.
pub fn re_part_quad(spec: &CMFieldSpec, id: EmbeddingId, x: &FieldElement) -> QuadElement {
    let a = BigRational::from_integer(BigInt::from(spec.a));
    let b = BigRational::from_integer(BigInt::from(spec.b));
    let u = &x.coords[0] - &a * &x.coords[2];
    let v = if id.fixes_sqrt_delta0() {
        &b * &x.coords[2]
    } else {
        -(&b * &x.coords[2])
    };
    QuadElement { a: u, b: v }
}
