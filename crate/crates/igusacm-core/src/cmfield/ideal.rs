//! Fractional `O_K`-ideals in Hermite normal form.
//!
//! An ideal is `(1/denom)·L` where `L` is the column lattice of a 4×4
//! upper-triangular integer matrix over the integral basis. The HNF plus the
//! reduced denominator is a canonical form, so equality is structural.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::element::FieldElement;
use super::order::IntegralBasis;
use super::CMFieldSpec;
use crate::error::{Error, Result};
use crate::linalg::{hnf_column, integral_preimage, qmat_mul, IMat, QMat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealHNF {
    pub hnf: IMat,
    pub denom: BigInt,
}

impl IdealHNF {
    /// The unit ideal `O_K`.
    pub fn one() -> Self {
        IdealHNF {
            hnf: crate::linalg::imat_identity(4),
            denom: BigInt::one(),
        }
    }

    fn normalize(mut self) -> Self {
        let mut g = self.denom.clone();
        for row in &self.hnf {
            for x in row {
                g = g.gcd(x);
            }
        }
        if g > BigInt::one() {
            for row in self.hnf.iter_mut() {
                for x in row.iter_mut() {
                    *x = &*x / &g;
                }
            }
            self.denom = &self.denom / &g;
        }
        self
    }

    /// Ideal from a rational basis matrix (columns, in integral-basis
    /// coordinates). The columns must span a full-rank lattice.
    pub fn from_basis_matrix(m: &QMat) -> Result<Self> {
        let d = crate::linalg::qmat_denominator(m);
        let dq = BigRational::from_integer(d.clone());
        let im: IMat = m
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| {
                        let y = x * &dq;
                        debug_assert!(y.is_integer());
                        y.to_integer()
                    })
                    .collect()
            })
            .collect();
        let h = hnf_column(&im)?;
        Ok(IdealHNF { hnf: h, denom: d }.normalize())
    }

    /// The fractional ideal generated by the given elements (as an
    /// `O_K`-module).
    pub fn from_generators(
        gens: &[FieldElement],
        spec: &CMFieldSpec,
        basis: &IntegralBasis,
    ) -> Result<Self> {
        let mut cols: Vec<Vec<BigRational>> = Vec::new();
        for g in gens {
            for j in 0..4 {
                let prod = g.mul(&basis.element(j), spec);
                cols.push(basis.coords_of(&prod));
            }
        }
        let m: QMat = (0..4)
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect();
        Self::from_basis_matrix(&m)
    }

    pub fn from_element(
        g: &FieldElement,
        spec: &CMFieldSpec,
        basis: &IntegralBasis,
    ) -> Result<Self> {
        if g.is_zero() {
            return Err(Error::InvalidInput("zero ideal".into()));
        }
        Self::from_generators(core::slice::from_ref(g), spec, basis)
    }

    /// Basis of the ideal as field elements.
    pub fn basis_elements(&self, basis: &IntegralBasis) -> Vec<FieldElement> {
        let dq = BigRational::from_integer(self.denom.clone());
        (0..4)
            .map(|j| {
                let v: Vec<BigRational> = (0..4)
                    .map(|i| BigRational::from_integer(self.hnf[i][j].clone()) / &dq)
                    .collect();
                basis.element_from_coords(&v)
            })
            .collect()
    }

    /// `N(𝔞) = det(hnf)/denom⁴`.
    pub fn norm(&self) -> BigRational {
        let det = crate::linalg::imat_det(&self.hnf);
        let d4 = &self.denom * &self.denom * &self.denom * &self.denom;
        BigRational::new(det, d4)
    }

    pub fn is_integral(&self) -> bool {
        self.denom == BigInt::one()
    }

    /// Multiplication of fractional ideals.
    pub fn mul(
        &self,
        other: &IdealHNF,
        spec: &CMFieldSpec,
        basis: &IntegralBasis,
    ) -> Result<IdealHNF> {
        let ga = self.basis_elements(basis);
        let gb = other.basis_elements(basis);
        let mut cols: Vec<Vec<BigRational>> = Vec::new();
        for x in &ga {
            for y in &gb {
                let prod = x.mul(y, spec);
                cols.push(basis.coords_of(&prod));
            }
        }
        let m: QMat = (0..4)
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect();
        // The product of the two bases already spans the product module (it
        // contains a full set of O_K-module generators times the basis).
        IdealHNF::from_basis_matrix(&m)
    }

    /// Inverse fractional ideal `(O_K : 𝔞)`.
    pub fn inverse(&self, spec: &CMFieldSpec, basis: &IntegralBasis) -> Result<IdealHNF> {
        let gens = self.basis_elements(basis);
        let mut rows: QMat = Vec::new();
        for g in &gens {
            // multiplication-by-g in integral-basis coordinates
            let mut mg = crate::linalg::qmat_zero(4, 4);
            for j in 0..4 {
                let prod = g.mul(&basis.element(j), spec);
                let v = basis.coords_of(&prod);
                for i in 0..4 {
                    mg[i][j] = v[i].clone();
                }
            }
            rows.extend(mg);
        }
        let sol = integral_preimage(&rows)?;
        IdealHNF::from_basis_matrix(&sol)
    }

    pub fn div(
        &self,
        other: &IdealHNF,
        spec: &CMFieldSpec,
        basis: &IntegralBasis,
    ) -> Result<IdealHNF> {
        let inv = other.inverse(spec, basis)?;
        self.mul(&inv, spec, basis)
    }

    /// Complex conjugate ideal.
    pub fn conj(&self, spec: &CMFieldSpec, basis: &IntegralBasis) -> Result<IdealHNF> {
        let gens: Vec<FieldElement> = self
            .basis_elements(basis)
            .iter()
            .map(|g| g.conj())
            .collect();
        let m: QMat = {
            let cols: Vec<Vec<BigRational>> = gens.iter().map(|g| basis.coords_of(g)).collect();
            (0..4)
                .map(|i| cols.iter().map(|c| c[i].clone()).collect())
                .collect()
        };
        let _ = spec;
        IdealHNF::from_basis_matrix(&m)
    }

    /// Does the ideal contain `x`?
    pub fn contains(&self, x: &FieldElement, basis: &IntegralBasis) -> bool {
        let v = basis.coords_of(x);
        // Solve hnf·y = denom·v by back substitution.
        let mut target: Vec<BigRational> = v
            .iter()
            .map(|c| c * BigRational::from_integer(self.denom.clone()))
            .collect();
        for i in (0..4).rev() {
            let y = &target[i] / BigRational::from_integer(self.hnf[i][i].clone());
            if !y.is_integer() {
                return false;
            }
            for r in 0..=i {
                let t = &y * BigRational::from_integer(self.hnf[r][i].clone());
                target[r] -= t;
            }
        }
        true
    }

    /// Exact scaling `γ·𝔞`.
    pub fn scale_by_element(
        &self,
        g: &FieldElement,
        spec: &CMFieldSpec,
        basis: &IntegralBasis,
    ) -> Result<IdealHNF> {
        let gens: Vec<FieldElement> = self
            .basis_elements(basis)
            .iter()
            .map(|b| b.mul(g, spec))
            .collect();
        let cols: Vec<Vec<BigRational>> = gens.iter().map(|e| basis.coords_of(e)).collect();
        let m: QMat = (0..4)
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect();
        IdealHNF::from_basis_matrix(&m)
    }

    /// Exact T2 Gram matrix `G_ij = Tr(g_i·conj(g_j))` of the ideal basis.
    pub fn t2_gram(&self, spec: &CMFieldSpec, basis: &IntegralBasis) -> QMat {
        let gens = self.basis_elements(basis);
        let mut g = crate::linalg::qmat_zero(4, 4);
        for i in 0..4 {
            for j in 0..=i {
                let v = gens[i].mul(&gens[j].conj(), spec).trace(spec);
                g[i][j] = v.clone();
                g[j][i] = v;
            }
        }
        g
    }
}

/// The different ideal `D_{K/Q}`, computed as the inverse of the trace dual
/// of `O_K`.
pub fn different(spec: &CMFieldSpec, basis: &IntegralBasis) -> Result<IdealHNF> {
    // Trace-dual condition on coordinates v: T·v ∈ Z^4, T_ij = Tr(b_i·b_j).
    let els = basis.elements(spec);
    let mut t = crate::linalg::qmat_zero(4, 4);
    for i in 0..4 {
        for j in 0..=i {
            let v = els[i].mul(&els[j], spec).trace(spec);
            t[i][j] = v.clone();
            t[j][i] = v;
        }
    }
    let dual = integral_preimage(&t)?;
    let codifferent = IdealHNF::from_basis_matrix(&dual)?;
    codifferent.inverse(spec, basis)
}

/// Product of an ideal power, exponent may be negative.
pub fn ideal_pow(
    a: &IdealHNF,
    e: i64,
    spec: &CMFieldSpec,
    basis: &IntegralBasis,
) -> Result<IdealHNF> {
    let mut acc = IdealHNF::one();
    let base = if e >= 0 {
        a.clone()
    } else {
        a.inverse(spec, basis)?
    };
    for _ in 0..e.unsigned_abs() {
        acc = acc.mul(&base, spec, basis)?;
    }
    Ok(acc)
}

/// Multiplies a set of column vectors into a 4×k rational matrix.
pub(crate) fn cols_to_mat(cols: &[Vec<BigRational>]) -> QMat {
    (0..4)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect()
}

// Re-exported for tests in the parent module.
pub(crate) fn _unused(_: &QMat) {
    let _ = qmat_mul;
    let _ = vec![0u8; 0];
}
