//! Exact arithmetic in the quartic CM field `K = Q(√(−a+b√Δ₀))`.
//!
//! `Δ₀` is a positive fundamental discriminant, `a, b` positive integers with
//! `−a+b√Δ₀` totally negative. `α = √(−a+b√Δ₀)` has minimal polynomial
//! `x⁴ + 2a·x² + (a²−b²Δ₀)`, all four roots purely imaginary, and complex
//! conjugation is `α ↦ −α`. The real quadratic subfield is `K₀ = Q(√Δ₀)`
//! with `√Δ₀ = (α²+a)/b`.

mod classgroup;
mod element;
mod embed;
mod ideal;
mod order;
pub mod quadratic;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub use classgroup::{class_group, is_principal, minkowski_bound, prime_ideals_over, ClassGroupData};
pub use element::{FieldElement, QuadElement};
pub use embed::{embeddings, im_sign_exact, re_part_quad, EmbeddingId, Embeddings};
pub use ideal::{different, IdealHNF};
pub use order::{maximal_order, IntegralBasis};
pub use quadratic::{fundamental_unit, real_class_number, UnitData};

use crate::error::{Error, Result};

/// Galois type of a primitive quartic CM field (the biquadadratic case is
/// rejected as non-primitive).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaloisType {
    Cyclic,
    NonGalois,
}

/// The input data `(Δ₀, a, b)` of a quartic CM field, with validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CMFieldSpec {
    pub delta0: u64,
    pub a: u64,
    pub b: u64,
}

impl CMFieldSpec {
    /// Validates the invariants: `Δ₀` fundamental, `−a+b√Δ₀` totally
    /// negative, and the field primitive (no imaginary quadratic subfield).
    pub fn new(delta0: u64, a: u64, b: u64) -> Result<Self> {
        if !is_fundamental_discriminant(delta0) {
            return Err(Error::InvalidField(format!(
                "delta0={delta0} is not a positive fundamental discriminant"
            )));
        }
        if a == 0 || b == 0 {
            return Err(Error::InvalidField("a and b must be positive".into()));
        }
        let spec = CMFieldSpec { delta0, a, b };
        // Totally negative: -a+b√Δ₀ < 0 and -a-b√Δ₀ < 0. The second is
        // automatic; the first needs a² > b²Δ₀.
        let a2 = BigInt::from(a) * BigInt::from(a);
        let b2d = BigInt::from(b) * BigInt::from(b) * BigInt::from(delta0);
        if a2 <= b2d {
            return Err(Error::InvalidField(format!(
                "-{a}+{b}*sqrt({delta0}) is not totally negative"
            )));
        }
        // Primitive: a² − b²Δ₀ must not be a perfect square.
        let n0 = &a2 - &b2d;
        let r = n0.sqrt();
        if &r * &r == n0 {
            return Err(Error::InvalidField(format!(
                "non-primitive: a^2 - b^2*delta0 = {n0} is a square"
            )));
        }
        Ok(spec)
    }

    /// `a² − b²Δ₀`, the constant term of the minimal polynomial of α.
    pub fn norm_const(&self) -> BigInt {
        BigInt::from(self.a) * BigInt::from(self.a)
            - BigInt::from(self.b) * BigInt::from(self.b) * BigInt::from(self.delta0)
    }

    /// Galois type: cyclic iff `(a²−b²Δ₀)·Δ₀` is a perfect square.
    pub fn galois_type(&self) -> GaloisType {
        let m = self.norm_const() * BigInt::from(self.delta0);
        debug_assert!(m.is_positive());
        let r = m.sqrt();
        if &r * &r == m {
            GaloisType::Cyclic
        } else {
            GaloisType::NonGalois
        }
    }

    pub fn describe(&self) -> String {
        format!("Q(sqrt(-{}+{}*sqrt({})))", self.a, self.b, self.delta0)
    }
}

/// `d` is a fundamental discriminant: `d ≡ 1 (mod 4)` squarefree, or
/// `d = 4m` with `m ≡ 2, 3 (mod 4)` squarefree.
pub fn is_fundamental_discriminant(d: u64) -> bool {
    if d <= 1 {
        return false;
    }
    match d % 4 {
        1 => is_squarefree(d),
        0 => {
            let m = d / 4;
            (m % 4 == 2 || m % 4 == 3) && is_squarefree(m)
        }
        _ => false,
    }
}

fn is_squarefree(mut n: u64) -> bool {
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// The field data shared by the whole pipeline: validated spec, maximal
/// order, discriminant split, and the different.
#[derive(Clone, Debug)]
pub struct CMField {
    pub spec: CMFieldSpec,
    pub basis: IntegralBasis,
    /// Field discriminant Δ (positive for a quartic CM field).
    pub delta: BigInt,
    /// Δ₁ = Δ / Δ₀² (norm of the relative discriminant).
    pub delta1: BigInt,
    pub galois: GaloisType,
    pub different: IdealHNF,
}

impl CMField {
    pub fn new(spec: CMFieldSpec) -> Result<CMField> {
        let basis = maximal_order(&spec)?;
        let delta = basis.disc.clone();
        let d0 = BigInt::from(spec.delta0);
        let d0sq = &d0 * &d0;
        let (delta1, rem) = delta.div_rem(&d0sq);
        if !rem.is_zero() || !delta1.is_positive() {
            return Err(Error::InvalidField(format!(
                "discriminant {delta} is not delta1*delta0^2"
            )));
        }
        let galois = spec.galois_type();
        let different = different(&spec, &basis)?;
        Ok(CMField {
            spec,
            basis,
            delta,
            delta1,
            galois,
            different,
        })
    }

    /// Ring of integers as the unit ideal.
    pub fn unit_ideal(&self) -> IdealHNF {
        IdealHNF::one()
    }

    /// Elements of the integral basis as field elements.
    pub fn basis_elements(&self) -> Vec<FieldElement> {
        self.basis.elements(&self.spec)
    }
}

#[cfg(test)]
mod tests;
