use super::*;
use alloc::vec;
use alloc::vec::Vec;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::approx::Ball;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn zeta5_field() -> CMField {
    CMField::new(CMFieldSpec::new(5, 10, 2).unwrap()).unwrap()
}

#[test]
fn spec_validation() {
    assert!(CMFieldSpec::new(5, 10, 2).is_ok());
    // 3² − 1·5 = 4 is a square: non-primitive.
    let err = CMFieldSpec::new(5, 3, 1).unwrap_err();
    assert!(matches!(err, Error::InvalidField(_)));
    // not totally negative
    assert!(CMFieldSpec::new(8, 2, 1).is_err());
    // non-fundamental discriminant
    assert!(CMFieldSpec::new(9, 10, 1).is_err());
}

#[test]
fn zeta5_discriminant_is_125() {
    let f = zeta5_field();
    assert_eq!(f.delta, BigInt::from(125));
    assert_eq!(f.delta1, BigInt::from(5));
    assert_eq!(f.galois, GaloisType::Cyclic);
}

#[test]
fn discriminant_vs_power_basis_oracle() {
    // disc(x⁴+2a·x²+c) = 256·c·(a²−c)² = 256·(a²−b²Δ₀)·b⁴Δ₀²,
    // and Δ·[O_K:Z[α]]² must equal it exactly.
    for (d0, a, b) in [(5u64, 10u64, 2u64), (8, 4, 1), (5, 5, 1), (8, 5, 1), (13, 13, 3)] {
        let spec = CMFieldSpec::new(d0, a, b).unwrap();
        let basis = maximal_order(&spec).unwrap();
        let n0 = spec.norm_const();
        let b2d = BigInt::from(b) * BigInt::from(b) * BigInt::from(d0);
        let power_disc = BigInt::from(256) * &n0 * &b2d * &b2d;
        assert_eq!(
            &basis.disc * &basis.index * &basis.index,
            power_disc,
            "({d0},{a},{b})"
        );
        // Δ = Δ₁·Δ₀² with Δ₁ a positive integer.
        let d0sq = BigInt::from(d0) * BigInt::from(d0);
        assert!((&basis.disc % &d0sq).is_zero());
    }
}

#[test]
fn integral_basis_is_a_ring() {
    for (d0, a, b) in [(5u64, 10u64, 2u64), (8, 4, 1), (5, 13, 3)] {
        let spec = CMFieldSpec::new(d0, a, b).unwrap();
        let basis = maximal_order(&spec).unwrap();
        let els = basis.elements(&spec);
        for x in &els {
            for y in &els {
                assert!(basis.contains(&x.mul(y, &spec)), "ring closure ({d0},{a},{b})");
            }
        }
        assert!(basis.contains(&FieldElement::one()));
    }
}

/// Splitting-pattern oracle for the Galois type: count roots of the minimal
/// polynomial modulo many good primes. For this biquadratic-shaped quartic,
/// exactly two roots mod p forces the factor pattern 1+1+2, which happens
/// for dihedral (non-Galois) fields and never for cyclic ones.
fn galois_oracle(spec: &CMFieldSpec) -> GaloisType {
    let n0 = spec.norm_const();
    let mut saw_112 = false;
    let mut p = 3u64;
    let mut tested = 0;
    while tested < 40 {
        p += 2;
        if !miller_rabin_small(p) {
            continue;
        }
        let disc_like = &n0 * BigInt::from(spec.delta0) * BigInt::from(2 * spec.a);
        if (disc_like % BigInt::from(p)).is_zero() {
            continue;
        }
        tested += 1;
        let a2 = (2 * spec.a) % p;
        let c = n0.mod_floor(&BigInt::from(p)).to_u64().unwrap();
        let mut roots = 0;
        for x in 0..p {
            let x2 = x * x % p;
            let v = (x2 * x2 % p + a2 * x2 % p + c) % p;
            if v == 0 {
                roots += 1;
            }
        }
        if roots == 2 {
            saw_112 = true;
        }
    }
    if saw_112 {
        GaloisType::NonGalois
    } else {
        GaloisType::Cyclic
    }
}

fn miller_rabin_small(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for a in [2u64, 3, 5, 7, 11, 13, 17] {
        let mut x = 1u64;
        let mut base = a % n;
        let mut e = d;
        while e > 0 {
            if e & 1 == 1 {
                x = (x as u128 * base as u128 % n as u128) as u64;
            }
            base = (base as u128 * base as u128 % n as u128) as u64;
            e >>= 1;
        }
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = (x as u128 * x as u128 % n as u128) as u64;
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

#[test]
fn galois_type_matches_splitting_oracle() {
    for (d0, a, b) in [
        (5u64, 10u64, 2u64),
        (8, 4, 1),
        (5, 13, 3),
        (8, 5, 1),
        (13, 13, 3),
        (5, 5, 1),
    ] {
        let spec = CMFieldSpec::new(d0, a, b).unwrap();
        assert_eq!(
            spec.galois_type(),
            galois_oracle(&spec),
            "galois mismatch for ({d0},{a},{b})"
        );
    }
}

#[test]
fn ideal_arithmetic_basics() {
    let f = zeta5_field();
    let one = IdealHNF::one();
    let two = FieldElement::from_int_coords([2, 0, 0, 0]);
    let alpha = FieldElement::alpha();
    let a = IdealHNF::from_generators(&[two, alpha.clone()], &f.spec, &f.basis).unwrap();
    assert_eq!(a.mul(&one, &f.spec, &f.basis).unwrap(), a);
    let inv = a.inverse(&f.spec, &f.basis).unwrap();
    assert_eq!(a.mul(&inv, &f.spec, &f.basis).unwrap(), one);
}

#[test]
fn ideal_norm_multiplicative() {
    // Norm = lattice index; multiplicativity checked over products of the
    // primes of small norm.
    let f = zeta5_field();
    let mut small: Vec<IdealHNF> = vec![];
    for p in [2u64, 3, 5, 11] {
        for (ideal, _, _) in prime_ideals_over(p, &f.spec, &f.basis).unwrap() {
            small.push(ideal);
        }
    }
    assert!(small.len() >= 4);
    for x in &small {
        for y in &small {
            let prod = x.mul(y, &f.spec, &f.basis).unwrap();
            assert_eq!(prod.norm(), x.norm() * y.norm());
        }
    }
}

#[test]
fn prime_splitting_degree_sum() {
    // Σ e·f = 4 at every prime, including index divisors.
    for (d0, a, b) in [(5u64, 10u64, 2u64), (8, 5, 1), (5, 13, 3)] {
        let spec = CMFieldSpec::new(d0, a, b).unwrap();
        let basis = maximal_order(&spec).unwrap();
        for p in [2u64, 3, 5, 7, 11, 13] {
            let prims = prime_ideals_over(p, &spec, &basis).unwrap();
            let sum: u32 = prims.iter().map(|(_, e, f)| e * f).sum();
            assert_eq!(sum, 4, "p={p} field ({d0},{a},{b})");
            for (ideal, _e, f) in &prims {
                assert_eq!(
                    ideal.norm(),
                    q((p as i64).pow(*f)),
                    "prime norm p={p} ({d0},{a},{b})"
                );
            }
        }
    }
}

#[test]
fn conjugation_is_involutive() {
    let f = zeta5_field();
    let gens = [
        FieldElement::from_int_coords([3, 1, 0, 2]),
        FieldElement::from_int_coords([0, 5, 1, 0]),
    ];
    let a = IdealHNF::from_generators(&gens, &f.spec, &f.basis).unwrap();
    let bb = a
        .conj(&f.spec, &f.basis)
        .unwrap()
        .conj(&f.spec, &f.basis)
        .unwrap();
    assert_eq!(a, bb);
    for g in &gens {
        assert_eq!(g.conj().conj(), *g);
    }
}

#[test]
fn different_of_zeta5() {
    let f = zeta5_field();
    assert_eq!(f.different.norm(), q(125));
    assert!(f.different.is_integral());
    assert_eq!(f.different.conj(&f.spec, &f.basis).unwrap(), f.different);
}

#[test]
fn different_trace_dual_oracle() {
    // Brute force: every x in the codifferent must have Tr(x·O_K) ⊆ Z, and
    // N(D) = |Δ| pins the index.
    for (d0, a, b) in [(5u64, 10u64, 2u64), (8, 4, 1), (5, 13, 3)] {
        let spec = CMFieldSpec::new(d0, a, b).unwrap();
        let basis = maximal_order(&spec).unwrap();
        let d = different(&spec, &basis).unwrap();
        assert_eq!(d.norm(), BigRational::from_integer(basis.disc.clone()));
        let dinv = d.inverse(&spec, &basis).unwrap();
        for x in dinv.basis_elements(&basis) {
            for y in basis.elements(&spec) {
                let t = x.mul(&y, &spec).trace(&spec);
                assert!(t.is_integer(), "trace dual violated for ({d0},{a},{b})");
            }
        }
    }
}

#[test]
fn zeta5_class_group_trivial() {
    // Minkowski bound 3/(2π²)·√125 < 1.7, so the class group is trivial by
    // pure enumeration.
    let f = zeta5_field();
    let cg = class_group(&f.spec, &f.basis).unwrap();
    assert_eq!((cg.h, cg.h0, cg.h1), (1, 1, 1));
    assert!(cg.group_structure.is_empty());
    assert_eq!(cg.representatives.len(), 1);
}

#[test]
fn class_representative_norms_below_minkowski() {
    for (d0, a, b) in [(5u64, 10u64, 2u64), (8, 5, 1), (5, 13, 3)] {
        let spec = CMFieldSpec::new(d0, a, b).unwrap();
        let basis = maximal_order(&spec).unwrap();
        let cg = class_group(&spec, &basis).unwrap();
        let mk = minkowski_bound(&basis.disc);
        assert_eq!(cg.h % cg.h0, 0);
        assert_eq!(cg.h, cg.h0 * cg.h1);
        let structure_order: u64 = cg.group_structure.iter().product::<u64>().max(1);
        assert_eq!(structure_order, cg.h);
        for r in &cg.representatives {
            assert!(r.is_integral());
            assert!(r.norm() <= q(mk as i64), "representative too large");
        }
    }
}

#[test]
fn principality_tests() {
    let f = zeta5_field();
    let g = is_principal(&IdealHNF::one(), &f.spec, &f.basis)
        .unwrap()
        .expect("unit ideal is principal");
    assert_eq!(g.norm(&f.spec).to_integer().magnitude().to_u64(), Some(1));
    // (γ) recovers an associate of γ.
    let gamma = FieldElement::from_int_coords([2, 1, 0, 0]);
    let ideal = IdealHNF::from_element(&gamma, &f.spec, &f.basis).unwrap();
    let found = is_principal(&ideal, &f.spec, &f.basis)
        .unwrap()
        .expect("principal by construction");
    let regen = IdealHNF::from_element(&found, &f.spec, &f.basis).unwrap();
    assert_eq!(regen, ideal);
}

#[test]
fn nonprincipal_ideal_detected() {
    // In a field with h > 1 some class-group representative is certifiably
    // non-principal.
    let spec = CMFieldSpec::new(8, 5, 1).unwrap();
    let basis = maximal_order(&spec).unwrap();
    let cg = class_group(&spec, &basis).unwrap();
    if cg.h == 1 {
        return;
    }
    let nonprincipal = cg
        .representatives
        .iter()
        .find(|r| **r != IdealHNF::one())
        .expect("non-trivial class representative");
    assert!(is_principal(nonprincipal, &spec, &basis).unwrap().is_none());
}

#[test]
fn embeddings_satisfy_defining_relation() {
    let f = zeta5_field();
    let emb = embeddings(&f.spec, 64).unwrap();
    let alpha = FieldElement::alpha();
    for id in EmbeddingId::all() {
        // φ(α)² ≈ φ(α²)
        let va = emb.apply(id, &alpha);
        let sq = va.mul(&va, 64);
        let direct = emb.apply(id, &alpha.mul(&alpha, &f.spec));
        let d = sq.sub(&direct, 64);
        assert!(d.mag_upper().le_two_pow(-60), "embedding {id:?}");
    }
    // Conjugate pairing: φ₃ = conj ∘ φ₁.
    let x = FieldElement::from_int_coords([1, 2, 3, 4]);
    let v1 = emb.apply(EmbeddingId(0), &x);
    let v3 = emb.apply(EmbeddingId(2), &x);
    let d = v1.conj().sub(&v3, 64);
    assert!(d.mag_upper().le_two_pow(-60));
}

#[test]
fn embedding_values_match_minpoly_oracle() {
    // Evaluate x⁴+2a·x²+(a²−b²Δ₀) at each embedded α at high precision; the
    // residual must vanish to the certified error.
    let specs = [(5u64, 10u64, 2u64), (8, 5, 1)];
    for (d0, a, b) in specs {
        let spec = CMFieldSpec::new(d0, a, b).unwrap();
        let emb = embeddings(&spec, 128).unwrap();
        for id in EmbeddingId::all() {
            let va = emb.apply(id, &FieldElement::alpha());
            let v2 = va.mul(&va, 140);
            let v4 = v2.mul(&v2, 140);
            let term = v2.mul_int(&BigInt::from(2 * a));
            let c = Ball::exact(crate::approx::ApproxComplex::from_rationals(
                &BigRational::from_integer(spec.norm_const()),
                &BigRational::from_integer(BigInt::from(0)),
                140,
            ));
            let sum = v4.add(&term, 140).add(&c, 140);
            assert!(sum.mag_upper().le_two_pow(-100), "minpoly({d0},{a},{b})");
        }
    }
}

#[test]
fn exact_imaginary_signs_match_numerics() {
    let f = zeta5_field();
    let emb = embeddings(&f.spec, 80).unwrap();
    let xs = [
        FieldElement::alpha(),
        FieldElement::from_int_coords([0, 3, 0, -1]),
        FieldElement::from_int_coords([0, -7, 0, 2]),
    ];
    for x in &xs {
        for id in EmbeddingId::all() {
            let sign = emb.im_sign_exact(id, x);
            let v = emb.apply(id, x);
            let im = v.mid.im_num();
            match sign {
                core::cmp::Ordering::Greater => assert!(im.is_positive()),
                core::cmp::Ordering::Less => assert!(im.is_negative()),
                core::cmp::Ordering::Equal => {}
            }
        }
    }
}

#[test]
fn fundamental_unit_of_zeta5_subfield() {
    let f = zeta5_field();
    let u = fundamental_unit(&f.spec, &f.delta).unwrap();
    // ε₀ = (1+√5)/2; μ_K has order 10 exactly for Q(ζ₅).
    assert_eq!(u.epsilon0.a, BigRational::new(BigInt::one(), BigInt::from(2)));
    assert_eq!(u.epsilon0.b, BigRational::new(BigInt::one(), BigInt::from(2)));
    assert_eq!(u.mu_order, 10);
    assert_eq!(u.norm, -1);
    let n = u.epsilon0.norm(5);
    assert!(n == BigRational::one() || n == -BigRational::one());
    // A non-cyclotomic field gets μ of order 2.
    let spec2 = CMFieldSpec::new(8, 5, 1).unwrap();
    let basis2 = maximal_order(&spec2).unwrap();
    let u2 = fundamental_unit(&spec2, &basis2.disc).unwrap();
    assert_eq!(u2.mu_order, 2);
}

#[test]
fn field_element_algebra() {
    let spec = CMFieldSpec::new(5, 10, 2).unwrap();
    let alpha = FieldElement::alpha();
    // α⁴ + 2a·α² + (a²−b²Δ₀) = 0, by multiplying α by itself four times.
    let a2 = alpha.mul(&alpha, &spec);
    let a4 = a2.mul(&a2, &spec);
    let lhs = a4
        .add(&a2.scale(&q(2 * 10)))
        .add(&FieldElement::from_rational(BigRational::from_integer(
            spec.norm_const(),
        )));
    assert!(lhs.is_zero());
    // inverse
    let x = FieldElement::from_int_coords([3, -1, 2, 1]);
    let xi = x.inv(&spec).unwrap();
    let prod = x.mul(&xi, &spec);
    assert_eq!(prod, FieldElement::one());
    // trace/norm against conjugate products
    let n = x.norm(&spec);
    assert!(n.is_integer());
}
