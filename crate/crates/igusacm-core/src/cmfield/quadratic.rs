//! The real quadratic subfield `K₀ = Q(√Δ₀)`: fundamental unit by the
//! continued fraction of `(Δ₀+√Δ₀)/2`, class number by counting cycles of
//! reduced indefinite forms under the reduction operator (the form-language
//! version of the reduced-ideal cycle).

use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::element::QuadElement;
use super::CMFieldSpec;
use crate::error::{Error, Result};

/// Fundamental unit and torsion data of `O_K*`.
#[derive(Clone, Debug)]
pub struct UnitData {
    /// Fundamental unit of `K₀`, normalized to be `> 1` at the positive
    /// embedding of `√Δ₀`.
    pub epsilon0: QuadElement,
    /// `N_{K₀/Q}(ε₀) ∈ {±1}`.
    pub norm: i8,
    /// Order of the roots of unity in `K`: 10 for `Q(ζ₅)`, else 2.
    pub mu_order: u32,
}

fn isqrt_u64(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut x = 1u64 << (64 - n.leading_zeros()).div_ceil(2);
    loop {
        let y = (x + n / x) >> 1;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// Continued fraction of `(Δ₀+√Δ₀)/2`; returns the cycle multiplier as the
/// fundamental unit of `O_{K₀}`.
pub fn fundamental_unit_quad(delta0: u64) -> Result<QuadElement> {
    let d = delta0;
    let s = isqrt_u64(d);
    // ξ_k = (P_k + √d)/Q_k with Q | d − P².
    let (mut p, mut q) = (d as i64, 2i64);
    debug_assert!((d as i64 * (1 - d as i64)) % 2 == 0);
    let mut seen: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    let mut states: Vec<(i64, i64)> = Vec::new();
    let mut partials: Vec<i64> = Vec::new();
    for step in 0..10_000usize {
        if let Some(&j) = seen.get(&(p, q)) {
            // Cycle j..step: multiplier of the cycle fixes ξ_j.
            let (pj, qj) = states[j];
            let (mut m00, mut m01, mut m10, mut m11) =
                (BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one());
            for &a in &partials[j..step] {
                // M ← M · [[a,1],[1,0]]
                let (n00, n01) = (&m00 * a + &m01, m00.clone());
                let (n10, n11) = (&m10 * a + &m11, m10.clone());
                m00 = n00;
                m01 = n01;
                m10 = n10;
                m11 = n11;
            }
            // unit = m10·ξ_j + m11, ξ_j = (pj+√d)/qj
            let qj_q = BigRational::from_integer(BigInt::from(qj));
            let a_part = BigRational::from_integer(&m10 * BigInt::from(pj)) / &qj_q
                + BigRational::from_integer(m11);
            let b_part = BigRational::from_integer(m10) / qj_q;
            let mut eps = QuadElement {
                a: a_part,
                b: b_part,
            };
            let n = eps.norm(delta0);
            if !(n == BigRational::one() || n == -BigRational::one()) {
                return Err(Error::InvalidInput(
                    "continued fraction multiplier is not a unit".into(),
                ));
            }
            // Normalize to the value > 1 among ±ε, ±ε⁻¹.
            let inv = {
                let c = eps.conj();
                if n == BigRational::one() {
                    c
                } else {
                    QuadElement {
                        a: -c.a.clone(),
                        b: -c.b.clone(),
                    }
                }
            };
            let mut best: Option<QuadElement> = None;
            for cand in [
                eps.clone(),
                QuadElement {
                    a: -eps.a.clone(),
                    b: -eps.b.clone(),
                },
                inv.clone(),
                QuadElement {
                    a: -inv.a.clone(),
                    b: -inv.b.clone(),
                },
            ] {
                let gt1 = {
                    let m1 = QuadElement {
                        a: &cand.a - BigRational::one(),
                        b: cand.b.clone(),
                    };
                    m1.sign_at(delta0, true) == core::cmp::Ordering::Greater
                };
                if gt1 {
                    best = Some(cand);
                    break;
                }
            }
            eps = best.ok_or_else(|| {
                Error::InvalidInput("no candidate unit exceeds 1".into())
            })?;
            return Ok(eps);
        }
        seen.insert((p, q), step);
        states.push((p, q));
        // floor((P+√d)/Q): √d is irrational, so the floor equals the floor of
        // (P+s)/Q for Q > 0 and of (P+s+1)/Q for Q < 0.
        let a = if q > 0 {
            num_integer::Integer::div_floor(&(p + s as i64), &q)
        } else {
            num_integer::Integer::div_floor(&(p + s as i64 + 1), &q)
        };
        partials.push(a);
        let p_next = a * q - p;
        let q_next = (d as i64 - p_next * p_next) / q;
        p = p_next;
        q = q_next;
        if q == 0 {
            return Err(Error::InvalidInput(
                "continued fraction hit a rational point (Δ₀ square?)".into(),
            ));
        }
    }
    Err(Error::ResourceBudget(
        "continued fraction period exceeds 10000".into(),
    ))
}

/// Unit data for the CM field: `ε₀`, its norm, and the torsion order.
pub fn fundamental_unit(spec: &CMFieldSpec, field_disc: &BigInt) -> Result<UnitData> {
    let epsilon0 = fundamental_unit_quad(spec.delta0)?;
    let n = epsilon0.norm(spec.delta0);
    let norm = if n == BigRational::one() { 1 } else { -1 };
    // Q(ζ₅) is the unique primitive quartic CM field of discriminant 125.
    let mu_order = if *field_disc == BigInt::from(125) { 10 } else { 2 };
    Ok(UnitData {
        epsilon0,
        norm,
        mu_order,
    })
}

/// Reduced indefinite form `(a, b, c)` of discriminant `d = b²−4ac`:
/// `0 < b < √d` and `√d − b < 2|a| < √d + b`.
fn reduced_forms(d: u64) -> Vec<(i64, i64, i64)> {
    let s = isqrt_u64(d) as i64;
    let mut out = Vec::new();
    let mut b = if d % 2 == 0 { 2 } else { 1 };
    while b <= s {
        let m = (d as i64 - b * b) / 4; // = |a|·|c| when 4 | d−b²
        if (d as i64 - b * b) % 4 == 0 && m > 0 {
            let mut aa = 1;
            while aa * aa <= m {
                if m % aa == 0 {
                    for cand in [aa, m / aa] {
                        // reduced iff √d − b < 2|a| < √d + b
                        if 2 * cand > s - b && 2 * cand <= s + b {
                            // strictness: 2|a| < √d + b fails only on equality
                            // with the irrational √d, impossible; and
                            // 2|a| > √d − b ⟺ 2|a| ≥ s − b + 1.
                            out.push((cand, b, -(m / cand)));
                            out.push((-cand, b, m / cand));
                        }
                    }
                }
                aa += 1;
            }
        }
        b += 2;
    }
    out.sort();
    out.dedup();
    out
}

/// One reduction step `ρ(a,b,c) = (c, b', (b'²−d)/(4c))`.
fn rho(d: u64, f: (i64, i64, i64)) -> (i64, i64, i64) {
    let (_, b, c) = f;
    let s = isqrt_u64(d) as i64;
    let two_c = 2 * c.abs();
    // b' ≡ −b (mod 2|c|), b' ∈ [s − 2|c| + 1, s]
    let bp = s - (s + b).rem_euclid(two_c);
    let cp = (bp * bp - d as i64) / (4 * c);
    (c, bp, cp)
}

/// Narrow class number `h⁺`: the number of ρ-cycles of reduced forms.
pub fn narrow_class_number(delta0: u64) -> u64 {
    let forms = reduced_forms(delta0);
    let all: BTreeSet<(i64, i64, i64)> = forms.iter().copied().collect();
    let mut seen: BTreeSet<(i64, i64, i64)> = BTreeSet::new();
    let mut cycles = 0;
    for &f in &forms {
        if seen.contains(&f) {
            continue;
        }
        cycles += 1;
        let mut g = f;
        loop {
            seen.insert(g);
            g = rho(delta0, g);
            debug_assert!(all.contains(&g), "rho left the reduced set");
            if g == f {
                break;
            }
        }
    }
    cycles
}

/// Class number `h₀` of `K₀` from the narrow class number and the norm of
/// the fundamental unit.
pub fn real_class_number(delta0: u64) -> Result<u64> {
    let eps = fundamental_unit_quad(delta0)?;
    let n = eps.norm(delta0);
    let hp = narrow_class_number(delta0);
    if n == -BigRational::one() {
        Ok(hp)
    } else {
        debug_assert!(hp % 2 == 0);
        Ok(hp / 2)
    }
}
