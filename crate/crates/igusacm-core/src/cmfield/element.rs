//! Field elements of `K` in the power basis `{1, α, α², α³}` and elements of
//! the real subfield `K₀ = Q(√Δ₀)`.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::CMFieldSpec;

/// An element of `K₀ = Q(√Δ₀)`: `a + b·√Δ₀`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadElement {
    pub a: BigRational,
    pub b: BigRational,
}

impl QuadElement {
    pub fn zero() -> Self {
        QuadElement {
            a: BigRational::zero(),
            b: BigRational::zero(),
        }
    }

    pub fn from_rational(a: BigRational) -> Self {
        QuadElement {
            a,
            b: BigRational::zero(),
        }
    }

    pub fn conj(&self) -> Self {
        QuadElement {
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    pub fn mul(&self, other: &Self, delta0: u64) -> Self {
        let d = BigRational::from_integer(BigInt::from(delta0));
        QuadElement {
            a: &self.a * &other.a + &d * &self.b * &other.b,
            b: &self.a * &other.b + &self.b * &other.a,
        }
    }

    pub fn norm(&self, delta0: u64) -> BigRational {
        let d = BigRational::from_integer(BigInt::from(delta0));
        &self.a * &self.a - d * &self.b * &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Exact sign of `a + b·√Δ₀` under the embedding sending `√Δ₀` to the
    /// positive (`positive_root = true`) or negative real root.
    pub fn sign_at(&self, delta0: u64, positive_root: bool) -> Ordering {
        let b = if positive_root {
            self.b.clone()
        } else {
            -self.b.clone()
        };
        // sign(a + b√d): compare a² and b²d with case analysis on signs.
        let d = BigRational::from_integer(BigInt::from(delta0));
        match (self.a.is_zero(), b.is_zero()) {
            (true, true) => Ordering::Equal,
            (false, true) => self.a.cmp(&BigRational::zero()),
            (true, false) => b.cmp(&BigRational::zero()),
            (false, false) => {
                let a_pos = self.a.is_positive();
                let b_pos = b.is_positive();
                if a_pos && b_pos {
                    Ordering::Greater
                } else if !a_pos && !b_pos {
                    Ordering::Less
                } else {
                    let lhs = &self.a * &self.a;
                    let rhs = &b * &b * &d;
                    if a_pos {
                        // a > 0 > b√d: sign = sign(a² − b²d)
                        lhs.cmp(&rhs)
                    } else {
                        rhs.cmp(&lhs)
                    }
                }
            }
        }
    }

    /// Totally positive: positive under both real embeddings.
    pub fn totally_positive(&self, delta0: u64) -> bool {
        self.sign_at(delta0, true) == Ordering::Greater
            && self.sign_at(delta0, false) == Ordering::Greater
    }

    pub fn totally_negative(&self, delta0: u64) -> bool {
        self.sign_at(delta0, true) == Ordering::Less
            && self.sign_at(delta0, false) == Ordering::Less
    }
}

/// An element of `K` as `c₀ + c₁α + c₂α² + c₃α³` with rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    pub coords: [BigRational; 4],
}

impl FieldElement {
    pub fn zero() -> Self {
        FieldElement {
            coords: core::array::from_fn(|_| BigRational::zero()),
        }
    }

    pub fn one() -> Self {
        let mut e = Self::zero();
        e.coords[0] = BigRational::one();
        e
    }

    pub fn alpha() -> Self {
        let mut e = Self::zero();
        e.coords[1] = BigRational::one();
        e
    }

    pub fn from_coords(coords: [BigRational; 4]) -> Self {
        FieldElement { coords }
    }

    pub fn from_int_coords(c: [i64; 4]) -> Self {
        FieldElement {
            coords: core::array::from_fn(|i| BigRational::from_integer(BigInt::from(c[i]))),
        }
    }

    pub fn from_rational(q: BigRational) -> Self {
        let mut e = Self::zero();
        e.coords[0] = q;
        e
    }

    /// Embeds `u + v√Δ₀ ∈ K₀` into `K` via `√Δ₀ = (α² + a)/b`.
    pub fn from_quad(q: &QuadElement, spec: &CMFieldSpec) -> Self {
        let a = BigRational::from_integer(BigInt::from(spec.a));
        let b = BigRational::from_integer(BigInt::from(spec.b));
        let mut e = Self::zero();
        e.coords[0] = &q.a + &q.b * &a / &b;
        e.coords[2] = &q.b / &b;
        e
    }

    /// The image in `K₀` when the element lies in the real subfield
    /// (coordinates 1 and 3 vanish); `None` otherwise.
    pub fn to_quad(&self, spec: &CMFieldSpec) -> Option<QuadElement> {
        if !self.coords[1].is_zero() || !self.coords[3].is_zero() {
            return None;
        }
        // c0 + c2·α² = (c0 − a·c2) + (b·c2)·√Δ₀
        let a = BigRational::from_integer(BigInt::from(spec.a));
        let b = BigRational::from_integer(BigInt::from(spec.b));
        Some(QuadElement {
            a: &self.coords[0] - &a * &self.coords[2],
            b: &b * &self.coords[2],
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        FieldElement {
            coords: core::array::from_fn(|i| &self.coords[i] + &other.coords[i]),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        FieldElement {
            coords: core::array::from_fn(|i| &self.coords[i] - &other.coords[i]),
        }
    }

    pub fn neg(&self) -> Self {
        FieldElement {
            coords: core::array::from_fn(|i| -self.coords[i].clone()),
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        FieldElement {
            coords: core::array::from_fn(|i| &self.coords[i] * q),
        }
    }

    /// Product in `K`, reducing with `α⁴ = −2a·α² − (a²−b²Δ₀)`.
    pub fn mul(&self, other: &Self, spec: &CMFieldSpec) -> Self {
        let mut raw = [
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
        ];
        for i in 0..4 {
            if self.coords[i].is_zero() {
                continue;
            }
            for j in 0..4 {
                if other.coords[j].is_zero() {
                    continue;
                }
                raw[i + j] += &self.coords[i] * &other.coords[j];
            }
        }
        let two_a = BigRational::from_integer(BigInt::from(2 * spec.a));
        let n0 = BigRational::from_integer(spec.norm_const());
        // Reduce degrees 6, 5, 4.
        for d in (4..=6).rev() {
            if raw[d].is_zero() {
                continue;
            }
            let c = raw[d].clone();
            raw[d] = BigRational::zero();
            raw[d - 2] -= &c * &two_a;
            raw[d - 4] -= &c * &n0;
        }
        FieldElement {
            coords: core::array::from_fn(|i| raw[i].clone()),
        }
    }

    /// Complex conjugation `α ↦ −α` (fixes `K₀` pointwise).
    pub fn conj(&self) -> Self {
        FieldElement {
            coords: [
                self.coords[0].clone(),
                -self.coords[1].clone(),
                self.coords[2].clone(),
                -self.coords[3].clone(),
            ],
        }
    }

    /// `Tr_{K/Q}`: `4c₀ − 4a·c₂`.
    pub fn trace(&self, spec: &CMFieldSpec) -> BigRational {
        let four = BigRational::from_integer(BigInt::from(4));
        let four_a = BigRational::from_integer(BigInt::from(4) * BigInt::from(spec.a));
        &four * &self.coords[0] - four_a * &self.coords[2]
    }

    /// Relative norm `N_{K/K₀}(x) = x·x̄ ∈ K₀`.
    pub fn relative_norm(&self, spec: &CMFieldSpec) -> QuadElement {
        let p = self.mul(&self.conj(), spec);
        p.to_quad(spec).expect("x·conj(x) lies in the real subfield")
    }

    /// Absolute norm `N_{K/Q}(x)`.
    pub fn norm(&self, spec: &CMFieldSpec) -> BigRational {
        self.relative_norm(spec).norm(spec.delta0)
    }

    /// Multiplicative inverse.
    pub fn inv(&self, spec: &CMFieldSpec) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // 1/x = x̄ · σ(x x̄) / N(x), with σ the conjugation of K₀.
        let xb = self.conj();
        let rn = self.relative_norm(spec); // x·x̄ ∈ K₀
        let rn_conj = FieldElement::from_quad(&rn.conj(), spec);
        let n = self.norm(spec);
        Some(xb.mul(&rn_conj, spec).scale(&n.recip()))
    }

    /// Common denominator of the coordinates.
    pub fn denominator(&self) -> BigInt {
        use num_integer::Integer;
        let mut d = BigInt::one();
        for c in &self.coords {
            d = d.lcm(c.denom());
        }
        d
    }

    pub fn coords_vec(&self) -> Vec<BigRational> {
        self.coords.to_vec()
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + {}*x + {}*x^2 + {}*x^3",
            self.coords[0], self.coords[1], self.coords[2], self.coords[3]
        )
    }
}
