//! From a CM triple to a period matrix in the Siegel upper half space: the
//! exact integer polarization form, a symplectic basis for it, and the
//! certified complex period matrix.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::approx::{ApproxComplex, Ball, ErrorBound};
use crate::cmfield::{
    embeddings, im_sign_exact, CMField, CMFieldSpec, EmbeddingId, Embeddings, FieldElement,
    IdealHNF, QuadElement,
};
use crate::enumerate::{CMType, PPAVTriple};
use crate::error::{Error, Result};
use crate::linalg::{content, imat_identity, imat_mul, imat_transpose, solve_unimodular_row, IMat};

/// The alternating form `E(x,y) = Tr_{K/Q}(ξ·x·ȳ)` on the ideal basis, as an
/// exact integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarizationMatrix {
    pub entries: IMat,
}

/// `Ω = [[0, 1],[−1, 0]]` in 2×2 blocks (4×4).
pub fn omega_matrix() -> IMat {
    let mut m = vec![vec![BigInt::zero(); 4]; 4];
    m[0][2] = BigInt::one();
    m[1][3] = BigInt::one();
    m[2][0] = -BigInt::one();
    m[3][1] = -BigInt::one();
    m
}

/// Computes the polarization matrix of a triple with respect to its cached
/// (LLL-reduced) ideal basis. Exact; `det = 1` and antisymmetry are checked.
pub fn polarization_matrix(t: &PPAVTriple, spec: &CMFieldSpec) -> Result<PolarizationMatrix> {
    let b = &t.basis_elements;
    debug_assert_eq!(b.len(), 4);
    let mut a = vec![vec![BigInt::zero(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let v = t.xi.mul(&b[i], spec).mul(&b[j].conj(), spec).trace(spec);
            if !v.is_integer() {
                return Err(Error::InvalidInput(
                    "polarization form is not integral on the ideal".to_string(),
                ));
            }
            a[i][j] = v.to_integer();
        }
    }
    for i in 0..4 {
        for j in 0..4 {
            if a[i][j] != -a[j][i].clone() {
                return Err(Error::InvalidInput(
                    "polarization matrix is not antisymmetric".to_string(),
                ));
            }
        }
    }
    let det = crate::linalg::imat_det(&a);
    if det != BigInt::one() {
        return Err(Error::InvalidInput(alloc::format!(
            "polarization determinant is {det}, not 1 (broken triple)"
        )));
    }
    Ok(PolarizationMatrix { entries: a })
}

fn dot_av(a: &IMat, x: &[BigInt], y: &[BigInt]) -> BigInt {
    let mut s = BigInt::zero();
    for i in 0..4 {
        for j in 0..4 {
            if !x[i].is_zero() && !y[j].is_zero() {
                s += &x[i] * &a[i][j] * &y[j];
            }
        }
    }
    s
}

fn is_independent(vs: &[&[BigInt]]) -> bool {
    // rank over Q by elimination on a copy
    let rows: Vec<Vec<BigRational>> = vs
        .iter()
        .map(|v| {
            v.iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect();
    rank_q(&rows) == vs.len()
}

fn rank_q(rows: &[Vec<BigRational>]) -> usize {
    let mut a = rows.to_vec();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        if let Some(r) = (rank..a.len()).find(|&r| !a[r][col].is_zero()) {
            a.swap(rank, r);
            let p = a[rank][col].clone();
            for c in 0..ncols {
                a[rank][c] /= &p;
            }
            for rr in 0..a.len() {
                if rr != rank && !a[rr][col].is_zero() {
                    let f = a[rr][col].clone();
                    for c in 0..ncols {
                        let t = &f * &a[rank][c];
                        a[rr][c] -= t;
                    }
                }
            }
            rank += 1;
        }
    }
    rank
}

/// Symplectic-basis algorithm for an antisymmetric integer matrix of
/// determinant 1: returns `M ∈ GL₄(Z)` with `Mᵗ·A·M = Ω`, exactly.
pub fn symplectic_transform(a: &PolarizationMatrix) -> Result<IMat> {
    let a = &a.entries;
    let g = 2usize;
    let mut es: Vec<Vec<BigInt>> = Vec::new();
    let mut vs: Vec<Vec<BigInt>> = Vec::new();

    for _i in 0..g {
        // Step 1: lowest-index standard unit vector independent of the
        // vectors found so far.
        let mut e_raw = None;
        for idx in 0..4 {
            let mut cand = vec![BigInt::zero(); 4];
            cand[idx] = BigInt::one();
            let mut all: Vec<&[BigInt]> = Vec::new();
            for e in &es {
                all.push(e);
            }
            for v in &vs {
                all.push(v);
            }
            all.push(&cand);
            if is_independent(&all) {
                e_raw = Some(cand);
                break;
            }
        }
        let e_raw = e_raw.ok_or_else(|| {
            Error::InvalidInput("no independent unit vector found".to_string())
        })?;

        // Step 2: project against the previous hyperbolic pairs, then divide
        // by the content.
        let mut e = e_raw.clone();
        for j in 0..es.len() {
            let c_e = dot_av(a, &es[j], &e_raw); // e_j^t A e'
            let c_v = dot_av(a, &vs[j], &e_raw); // v_j^t A e'
            for k in 0..4 {
                let t = &c_e * &vs[j][k];
                e[k] -= t;
                let t = &c_v * &es[j][k];
                e[k] += t;
            }
        }
        let k = content(&e);
        if !k.is_zero() && k != BigInt::one() {
            for x in e.iter_mut() {
                *x = &*x / &k;
            }
        }

        // Step 3: solve e^t A v' = 1.
        let row: Vec<BigInt> = (0..4).map(|j| dot_av_row(a, &e, j)).collect();
        let vprime = solve_unimodular_row(&row).ok_or_else(|| {
            Error::InvalidInput(
                "step-3 equation e^t A v' = 1 is unsolvable (input not unimodular)".to_string(),
            )
        })?;

        // Step 4: correct v' against previous pairs.
        let mut v = vprime.clone();
        for j in 0..es.len() {
            let c_e = dot_av(a, &es[j], &vprime);
            let c_v = dot_av(a, &vs[j], &vprime);
            for kk in 0..4 {
                let t = &c_e * &vs[j][kk];
                v[kk] -= t;
                let t = &c_v * &es[j][kk];
                v[kk] += t;
            }
        }

        es.push(e);
        vs.push(v);
    }

    // Columns e1, e2, v1, v2.
    let mut m = vec![vec![BigInt::zero(); 4]; 4];
    for (j, e) in es.iter().chain(vs.iter()).enumerate() {
        for i in 0..4 {
            m[i][j] = e[i].clone();
        }
    }
    // Exact postcondition.
    let check = imat_mul(&imat_mul(&imat_transpose(&m), a), &m);
    if check != omega_matrix() {
        return Err(Error::InvalidInput(
            "symplectic transform postcondition M^t A M = Omega failed".to_string(),
        ));
    }
    Ok(m)
}

fn dot_av_row(a: &IMat, e: &[BigInt], j: usize) -> BigInt {
    let mut s = BigInt::zero();
    for i in 0..4 {
        if !e[i].is_zero() {
            s += &e[i] * &a[i][j];
        }
    }
    s
}

/// A point of the Siegel upper half space: `Z = [[z1, z3],[z3, z2]]` with
/// positive definite imaginary part, carried as certified balls at a source
/// precision.
#[derive(Clone, Debug)]
pub struct SiegelPoint {
    pub z1: Ball,
    pub z2: Ball,
    pub z3: Ball,
    pub prec: u32,
}

impl SiegelPoint {
    pub fn entries(&self) -> [&Ball; 3] {
        [&self.z1, &self.z2, &self.z3]
    }

    /// Imaginary parts as real balls `(y1, y2, y3)`.
    pub fn imag_parts(&self) -> (Ball, Ball, Ball) {
        (im_ball(&self.z1), im_ball(&self.z2), im_ball(&self.z3))
    }

    pub fn real_parts(&self) -> (Ball, Ball, Ball) {
        (re_ball(&self.z1), re_ball(&self.z2), re_ball(&self.z3))
    }

    /// Certified positive definiteness of `Im Z`: `y1 > 0` and
    /// `y1·y2 − y3² > 0`. A certified *negative* definite part reports
    /// `InvalidInput` (wrong orientation), an undecidable one
    /// `PrecisionExhausted`.
    pub fn certify_positive_definite(&self) -> Result<()> {
        let (y1, y2, y3) = self.imag_parts();
        let n = self.prec;
        let det = y1.mul(&y2, n).sub(&y3.mul(&y3, n), n);
        let certified_nonzero = |b: &Ball| b.mag_lower().is_some();
        if !certified_nonzero(&det) || !certified_nonzero(&y1) {
            return Err(Error::PrecisionExhausted(
                "cannot certify the definiteness of Im Z".to_string(),
            ));
        }
        if det.mid.re_num().is_negative() {
            return Err(Error::InvalidInput(
                "Im Z is indefinite; not a Siegel point".to_string(),
            ));
        }
        if y1.mid.re_num().is_negative() {
            return Err(Error::InvalidInput(
                "Im Z is negative definite (flipped orientation)".to_string(),
            ));
        }
        Ok(())
    }

    /// `det Im Z` as a certified ball at the source precision.
    pub fn det_im(&self) -> Ball {
        let (y1, y2, y3) = self.imag_parts();
        y1.mul(&y2, self.prec).sub(&y3.mul(&y3, self.prec), self.prec)
    }
}

pub(crate) fn re_ball(b: &Ball) -> Ball {
    Ball::new(
        ApproxComplex::from_real_scaled(b.mid.re_num().clone(), b.mid.precision()),
        b.rad,
    )
}

pub(crate) fn im_ball(b: &Ball) -> Ball {
    Ball::new(
        ApproxComplex::from_real_scaled(b.mid.im_num().clone(), b.mid.precision()),
        b.rad,
    )
}

/// Period matrix of a triple for a given symplectic transformation, at
/// absolute precision `n`: `Z = Ω'⁻¹·Ω` where `Ω` has columns `Φ(e_i)` and
/// `Ω'` columns `Φ(v_i)`.
///
/// The two orientations of a symplectic basis give `Im Z` positive or
/// negative definite; when the latter is certified, the basis is flipped by
/// `Ω` (i.e. `Z ← −Z⁻¹`, still the same `Sp₄(Z)`-orbit) and the matrix
/// actually used is returned alongside the point.
pub fn period_matrix(
    t: &PPAVTriple,
    m: &IMat,
    n: u32,
    spec: &CMFieldSpec,
) -> Result<(SiegelPoint, IMat)> {
    match period_matrix_oriented(t, m, n, spec) {
        Ok(p) => Ok((p, m.clone())),
        Err(Error::InvalidInput(_)) => {
            // Swap the e/v blocks (a symplectic basis for −E).
            let mut p_swap = vec![vec![BigInt::zero(); 4]; 4];
            p_swap[0][2] = BigInt::one();
            p_swap[1][3] = BigInt::one();
            p_swap[2][0] = BigInt::one();
            p_swap[3][1] = BigInt::one();
            let flipped = imat_mul(m, &p_swap);
            let p = period_matrix_oriented(t, &flipped, n, spec)?;
            Ok((p, flipped))
        }
        Err(e) => Err(e),
    }
}

fn period_matrix_oriented(
    t: &PPAVTriple,
    m: &IMat,
    n: u32,
    spec: &CMFieldSpec,
) -> Result<SiegelPoint> {
    let w = n + 32;
    let emb = embeddings(spec, w)?;
    // Symplectic basis elements from the columns of M.
    let combo = |col: usize| -> FieldElement {
        let mut e = FieldElement::zero();
        for (k, bk) in t.basis_elements.iter().enumerate() {
            e = e.add(&bk.scale(&BigRational::from_integer(m[k][col].clone())));
        }
        e
    };
    let e1 = combo(0);
    let e2 = combo(1);
    let v1 = combo(2);
    let v2 = combo(3);

    let phi = t.cm_type.pair;
    let mat = |x: &FieldElement| -> [Ball; 2] { [emb.apply(phi[0], x), emb.apply(phi[1], x)] };
    let oe1 = mat(&e1);
    let oe2 = mat(&e2);
    let ov1 = mat(&v1);
    let ov2 = mat(&v2);

    // Z = Ω_e⁻¹·Ω_v with Ω_e = [Φ(e1) Φ(e2)], Ω_v = [Φ(v1) Φ(v2)]: the
    // e-columns carry the C-basis. (The opposite role assignment produces
    // the anti-holomorphic orientation for E = Tr(ξ·x·ȳ) with Im φξ > 0
    // under the positivity convention H(x,y) = E(ix,y)+iE(x,y); the
    // orientation is certified below either way.)
    let det = oe1[0].mul(&oe2[1], w).sub(&oe1[1].mul(&oe2[0], w), w);
    let inv = |r: usize, c: usize| -> Ball {
        // adjugate of Ω_e = [[a, b],[c, d]]: a = oe1[0], b = oe2[0],
        // c = oe1[1], d = oe2[1].
        match (r, c) {
            (0, 0) => oe2[1].clone(),
            (0, 1) => oe2[0].neg(),
            (1, 0) => oe1[1].neg(),
            (1, 1) => oe1[0].clone(),
            _ => unreachable!(),
        }
    };
    let mut z = [[Ball::zero(w), Ball::zero(w)], [Ball::zero(w), Ball::zero(w)]];
    let omega = [[&ov1[0], &ov2[0]], [&ov1[1], &ov2[1]]];
    for r in 0..2 {
        for c in 0..2 {
            let num = inv(r, 0).mul(omega[0][c], w).add(&inv(r, 1).mul(omega[1][c], w), w);
            z[r][c] = num.div(&det, w)?;
        }
    }

    // Certify approximate symmetry (midpoints) and symmetrize.
    let dsym = z[0][1].mid.sub(&z[1][0].mid, w);
    if !dsym.mag_upper().le_two_pow(-(n as i64) + 4) {
        return Err(Error::PrecisionExhausted(
            "period matrix symmetry residual exceeds 2^{-n+4}".to_string(),
        ));
    }
    let half = z[0][1].add(&z[1][0], w).scale2(-1);

    let point = SiegelPoint {
        z1: z[0][0].round_to(n),
        z2: z[1][1].round_to(n),
        z3: half.round_to(n),
        prec: n,
    };
    point.certify_positive_definite()?;
    Ok(point)
}

/// Cross-check constructor: the period matrix attached to `z ∈ K` with
/// `z·O_{K₀} + O_{K₀}` an `O_K`-module, via
/// `Z_z = (φ₁+φ₂)(z·δ⁻¹·[[ω², ω],[ω, 1]])`.
pub fn period_matrix_from_z(
    z: &FieldElement,
    field: &CMField,
    n: u32,
) -> Result<(SiegelPoint, FieldElement, CMType)> {
    let spec = &field.spec;
    let basis = &field.basis;
    // Module check: L = z·O_{K₀} + O_{K₀} closed under O_K multiplication.
    let omega0 = omega_generator(spec);
    let gens = [
        z.clone(),
        z.mul(&omega0, spec),
        FieldElement::one(),
        omega0.clone(),
    ];
    let module = module_from_gens(&gens, basis)?;
    for g in &gens {
        for b in basis.elements(spec) {
            let prod = g.mul(&b, spec);
            if !lattice_contains(&module, &prod, basis) {
                return Err(Error::InvalidInput(
                    "z·O_K0 + O_K0 is not an O_K-module".to_string(),
                ));
            }
        }
    }

    // ξ = (z − z̄)⁻¹·δ⁻¹.
    let delta = FieldElement::from_quad(
        &QuadElement {
            a: BigRational::zero(),
            b: BigRational::one(),
        },
        spec,
    );
    let zdiff = z.sub(&z.conj());
    let xi = zdiff
        .inv(spec)
        .ok_or_else(|| Error::InvalidInput("z is real".to_string()))?
        .mul(&delta.inv(spec).expect("delta nonzero"), spec);

    // Embedding labels local to this construction: φ₁ω > φ₂ω and
    // Im φ₁ z > 0 > Im φ₂ z. The embeddings fixing √Δ₀ see the larger ω.
    let fixers = [EmbeddingId(1), EmbeddingId(3)];
    let negaters = [EmbeddingId(0), EmbeddingId(2)];
    let phi1 = *fixers
        .iter()
        .find(|id| im_sign_exact(spec, **id, z) == core::cmp::Ordering::Greater)
        .ok_or_else(|| Error::InvalidInput("no embedding with Im φz > 0 fixes √Δ₀".to_string()))?;
    let phi2 = *negaters
        .iter()
        .find(|id| im_sign_exact(spec, **id, z) == core::cmp::Ordering::Less)
        .ok_or_else(|| Error::InvalidInput("no embedding with Im φz < 0 negates √Δ₀".to_string()))?;

    let w = n + 32;
    let emb = embeddings(spec, w)?;
    let dinv = delta.inv(spec).expect("delta nonzero");
    let zd = z.mul(&dinv, spec);
    let entry = |factor: &FieldElement| -> Ball {
        let x = zd.mul(factor, spec);
        emb.apply(phi1, &x).add(&emb.apply(phi2, &x), w)
    };
    let om2 = omega0.mul(&omega0, spec);
    let point = SiegelPoint {
        z1: entry(&om2).round_to(n),
        z3: entry(&omega0).round_to(n),
        z2: entry(&FieldElement::one()).round_to(n),
        prec: n,
    };
    point.certify_positive_definite()?;

    // The CM type of ξ for downstream use.
    let cm = crate::enumerate::cm_type_of(spec, &xi)?;
    Ok((point, xi, cm))
}

/// Generator `ω = (Δ₀+√Δ₀)/2` of `O_{K₀}` over `Z`.
pub fn omega_generator(spec: &CMFieldSpec) -> FieldElement {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    FieldElement::from_quad(
        &QuadElement {
            a: BigRational::from_integer(BigInt::from(spec.delta0)) * &half,
            b: half,
        },
        spec,
    )
}

fn module_from_gens(
    gens: &[FieldElement],
    basis: &crate::cmfield::IntegralBasis,
) -> Result<IdealHNF> {
    let cols: Vec<Vec<BigRational>> = gens.iter().map(|g| basis.coords_of(g)).collect();
    let m: crate::linalg::QMat = (0..4)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect();
    IdealHNF::from_basis_matrix(&m)
}

fn lattice_contains(
    l: &IdealHNF,
    x: &FieldElement,
    basis: &crate::cmfield::IntegralBasis,
) -> bool {
    l.contains(x, basis)
}

/// `Im Z` of a Siegel point rounded into an exact rational matrix (midpoint
/// values); used by tests and reduction heuristics.
pub fn imag_matrix_rational(p: &SiegelPoint) -> [[BigRational; 2]; 2] {
    let q = |b: &Ball| -> BigRational {
        BigRational::new(
            b.mid.im_num().clone(),
            BigInt::one() << b.mid.precision(),
        )
    };
    let y1 = q(&p.z1);
    let y2 = q(&p.z2);
    let y3 = q(&p.z3);
    [[y1, y3.clone()], [y3, y2]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmfield::{class_group, fundamental_unit, CMFieldSpec};
    use crate::enumerate::enumerate_ppav;

    fn zeta5_triples() -> (CMField, Vec<PPAVTriple>) {
        let field = CMField::new(CMFieldSpec::new(5, 10, 2).unwrap()).unwrap();
        let cg = class_group(&field.spec, &field.basis).unwrap();
        let units = fundamental_unit(&field.spec, &field.delta).unwrap();
        let triples = enumerate_ppav(&field, &cg, &units).unwrap();
        (field, triples)
    }

    #[test]
    fn polarization_of_zeta5_triple() {
        let (field, triples) = zeta5_triples();
        let a = polarization_matrix(&triples[0], &field.spec).unwrap();
        // antisymmetric with det 1 (checked in the constructor); diagonal 0
        for i in 0..4 {
            assert!(a.entries[i][i].is_zero());
        }
    }

    #[test]
    fn polarization_trace_form_oracle() {
        // Recompute A_ij by summing the four embeddings of ξ·b_i·conj(b_j)
        // at high precision; the result must round to the same integer.
        let (field, triples) = zeta5_triples();
        let t = &triples[0];
        let a = polarization_matrix(t, &field.spec).unwrap();
        let emb = embeddings(&field.spec, 96).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let x = t
                    .xi
                    .mul(&t.basis_elements[i], &field.spec)
                    .mul(&t.basis_elements[j].conj(), &field.spec);
                let mut s = Ball::zero(96);
                for id in EmbeddingId::all() {
                    s = s.add(&emb.apply(id, &x), 96);
                }
                // imaginary parts cancel; real part rounds to A_ij
                let target = Ball::exact(ApproxComplex::from_int(0, 0, 96)).add(
                    &Ball::exact(ApproxComplex::from_rationals(
                        &BigRational::from_integer(a.entries[i][j].clone()),
                        &BigRational::zero(),
                        96,
                    )),
                    96,
                );
                let d = s.sub(&target, 96);
                assert!(d.mag_upper().le_two_pow(-60), "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn symplectic_on_omega_itself() {
        let a = PolarizationMatrix {
            entries: omega_matrix(),
        };
        let m = symplectic_transform(&a).unwrap();
        let check = imat_mul(&imat_mul(&imat_transpose(&m), &omega_matrix()), &m);
        assert_eq!(check, omega_matrix());
        // identity must also pass the postcondition
        let id = imat_identity(4);
        let check_id = imat_mul(&imat_mul(&imat_transpose(&id), &omega_matrix()), &id);
        assert_eq!(check_id, omega_matrix());
    }

    #[test]
    fn period_matrix_of_zeta5() {
        let (field, triples) = zeta5_triples();
        let t = &triples[0];
        let a = polarization_matrix(t, &field.spec).unwrap();
        let m = symplectic_transform(&a).unwrap();
        let (z, _) = period_matrix(t, &m, 80, &field.spec).unwrap();
        z.certify_positive_definite().unwrap();
        // z3 must be nonzero for a simple abelian surface
        assert!(z.z3.mag_lower().is_some());
    }

    #[test]
    fn from_z_constructor_on_zeta5() {
        // z = ζ₅ gives z·O_{K₀}+O_{K₀} = O_K = Z[ζ₅].
        let field = CMField::new(CMFieldSpec::new(5, 10, 2).unwrap()).unwrap();
        let zeta: FieldElement = FieldElement::from_coords([
            BigRational::from_integer(BigInt::one()),
            BigRational::new(BigInt::from(3), BigInt::from(4)),
            BigRational::new(BigInt::one(), BigInt::from(8)),
            BigRational::new(BigInt::one(), BigInt::from(16)),
        ]);
        // sanity: ζ⁵ = 1
        let mut p = FieldElement::one();
        for _ in 0..5 {
            p = p.mul(&zeta, &field.spec);
        }
        assert_eq!(p, FieldElement::one());

        let (point, xi, _cm) = period_matrix_from_z(&zeta, &field, 80).unwrap();
        point.certify_positive_definite().unwrap();
        // ξ generates (𝔞𝔞̄D)⁻¹ for 𝔞 = O_K.
        let xi_ideal = IdealHNF::from_element(&xi, &field.spec, &field.basis).unwrap();
        let rhs = field
            .different
            .inverse(&field.spec, &field.basis)
            .unwrap();
        assert_eq!(xi_ideal, rhs);
    }

    #[test]
    fn from_z_rejects_non_module() {
        let field = CMField::new(CMFieldSpec::new(5, 10, 2).unwrap()).unwrap();
        // generic small z will not produce an O_K-module
        let z = FieldElement::from_int_coords([0, 3, 1, 0]);
        assert!(period_matrix_from_z(&z, &field, 64).is_err());
    }
}
