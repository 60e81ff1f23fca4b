//! Denominator bound, precision budgeting, and the end-to-end pipeline that
//! assembles the three Igusa class polynomials.

mod poly;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use poly::{
    add_approx_poly, ceil_log2, mult_approx_poly, mult_int_poly, poly_from_roots,
    round_to_rational, ApproxPolynomial, RationalPoly, RootBounds,
};

use crate::approx::{pi_ball, Ball, ErrorBound};
use crate::cmfield::{class_group, fundamental_unit, CMField, CMFieldSpec, ClassGroupData};
use crate::enumerate::{enumerate_ppav, PPAVTriple};
use crate::error::{Error, Result};
use crate::executor::{Executor, Serial};
use crate::period::{period_matrix, polarization_matrix, symplectic_transform, SiegelPoint};
use crate::siegel::{apply_sp4, reduce, Domain, Sp4Matrix};
use crate::theta::{even_thetas_with, igusa_invariants, u_bound, working_precision, InvariantTriple};

/// The denominator bound `D = (Π_{p < 2⁸π⁻²Δ} p^{c₁+c₂⌊logΔ/log p⌋})^{h'}`.
#[derive(Clone, Debug)]
pub struct DenominatorBound {
    pub d: BigInt,
    pub c1: u32,
    pub c2: u32,
    pub h_prime: u32,
    /// The sieve limit actually used (largest admissible prime bound).
    pub prime_limit: u64,
}

/// Desk-scale cap on the sieve range for `D`.
const SIEVE_CAP: u64 = 200_000_000;

/// Exact prime cutoff `p < 2⁸·π⁻²·Δ`, decided with certified π bounds.
fn prime_cutoff(delta: &BigInt) -> Result<u64> {
    // limit = floor(256Δ/π²) unless 256Δ/π² is within certification error of
    // an integer, in which case we refine π. Start at 128 bits.
    let mut prec = 128u32;
    loop {
        let pi = pi_ball(prec);
        let pi2 = pi.mul(&pi, prec);
        // lower/upper rational bounds for π²
        let mid = num_rational::BigRational::new(
            pi2.mid.re_num().clone(),
            BigInt::one() << pi2.mid.precision(),
        );
        let rad = num_rational::BigRational::new(
            pi2.rad.to_scaled_int_ceil(prec),
            BigInt::one() << prec,
        );
        let lo = &mid - &rad;
        let hi = &mid + &rad;
        let num = num_rational::BigRational::from_integer(BigInt::from(256) * delta);
        let upper = (&num / lo).floor().to_integer();
        let lower = (&num / hi).floor().to_integer();
        if upper == lower {
            return upper.to_u64().ok_or_else(|| {
                Error::ResourceBudget("prime cutoff exceeds u64".to_string())
            });
        }
        prec *= 2;
        if prec > 1 << 16 {
            return Err(Error::ResourceBudget(
                "prime cutoff sits unreasonably close to an integer".to_string(),
            ));
        }
    }
}

/// Computes the exact denominator bound by sieve and a binary product tree.
pub fn denominator_d(
    delta: &BigInt,
    h_prime: u32,
    c1: u32,
    c2: u32,
) -> Result<DenominatorBound> {
    let limit = prime_cutoff(delta)?;
    if limit > SIEVE_CAP {
        return Err(Error::ResourceBudget(format!(
            "denominator sieve range {limit} exceeds the desk-scale cap"
        )));
    }
    // Sieve of Eratosthenes.
    let n = limit as usize;
    let mut comp = vec![false; n + 1];
    let mut factors: Vec<BigInt> = Vec::new();
    for p in 2..=n {
        if comp[p] {
            continue;
        }
        let mut q = p * p;
        while q <= n {
            comp[q] = true;
            q += p;
        }
        // ⌊logΔ/log p⌋ = largest k with p^k ≤ Δ.
        let pb = BigInt::from(p);
        let mut k = 0u32;
        let mut pk = pb.clone();
        while pk <= *delta {
            k += 1;
            pk *= &pb;
        }
        let e = c1 as u64 + c2 as u64 * k as u64;
        factors.push(pb.pow(e.try_into().map_err(|_| {
            Error::ResourceBudget("denominator exponent overflow".to_string())
        })?));
    }
    let base = product_tree(&factors);
    let d = base.pow(h_prime);
    Ok(DenominatorBound {
        d,
        c1,
        c2,
        h_prime,
        prime_limit: limit,
    })
}

/// Balanced product of a list of integers.
fn product_tree(v: &[BigInt]) -> BigInt {
    match v.len() {
        0 => BigInt::one(),
        1 => v[0].clone(),
        _ => {
            let mid = v.len() / 2;
            product_tree(&v[..mid]) * product_tree(&v[mid..])
        }
    }
}

/// Precision budget: `p = ⌈log₂D + 3log₂h' + 4⌉ + Σ(2u_j + 40)` and
/// `r_j = 101 + 7u_j + p`.
pub fn precision_budget(u_list: &[u32], d: &BigInt, h_prime: u32) -> Result<(u32, Vec<u32>)> {
    let inner = d * BigInt::from(h_prime).pow(3);
    let p64 = 4 + ceil_log2(&inner)
        + u_list.iter().map(|&u| 2 * u as u64 + 40).sum::<u64>();
    let p: u32 = p64.try_into().map_err(|_| Error::PrecisionCap {
        requested: u32::MAX,
        cap: crate::approx::PRECISION_CAP,
    })?;
    if p > crate::approx::PRECISION_CAP {
        return Err(Error::PrecisionCap {
            requested: p,
            cap: crate::approx::PRECISION_CAP,
        });
    }
    let r = u_list.iter().map(|&u| 101 + 7 * u + p).collect();
    Ok((p, r))
}

/// Configuration of a pipeline run.
#[derive(Clone, Debug)]
pub struct PipelineConfig {
    /// Denominator-bound exponent constants (conservative placeholders; the
    /// proven values are not published, so they are mandatory configuration).
    pub c1: u32,
    pub c2: u32,
    /// Also produce the interpolation polynomials Ĥ₂, Ĥ₃.
    pub emit_hhat: bool,
    /// Hard cap on any internally requested precision.
    pub precision_cap: u32,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            c1: 16,
            c2: 16,
            emit_hhat: false,
            precision_cap: crate::approx::PRECISION_CAP,
        }
    }
}

/// Everything the budget identities promise, retained for the audit trail.
#[derive(Clone, Debug)]
pub struct AuditTrail {
    pub delta0: u64,
    pub a: u64,
    pub b: u64,
    pub delta: BigInt,
    pub delta1: BigInt,
    pub galois_cyclic: bool,
    pub h: u64,
    pub h0: u64,
    pub h1: u64,
    pub h_prime: u32,
    pub c1: u32,
    pub c2: u32,
    pub d: BigInt,
    pub u: Vec<u32>,
    pub p: u32,
    pub r: Vec<u32>,
    /// 2 or 3 ramifies: the denominator bound is heuristic there.
    pub ramified_23: bool,
    /// Number of automatic precision-doubling retries that were needed.
    pub retries: u32,
}

/// The three class polynomials plus the optional interpolation pair and the
/// audit data.
#[derive(Clone, Debug)]
pub struct ClassPolynomialSet {
    pub h1: RationalPoly,
    pub h2: RationalPoly,
    pub h3: RationalPoly,
    pub hhat2: Option<RationalPoly>,
    pub hhat3: Option<RationalPoly>,
    pub audit: AuditTrail,
}

/// Reduced data of one triple: the moderate-precision reduced point, the
/// exact transformations, and the theta precision driver.
struct ReducedTriple {
    triple: PPAVTriple,
    symplectic: crate::linalg::IMat,
    reduction: Sp4Matrix,
    u: u32,
}

/// Recomputes the reduced period matrix of a triple at a precision high
/// enough that the ball radius is at most `2^{-t-1}` for `t` the theta
/// working precision of `r_target`.
fn siegel_point_for_theta(
    rt: &ReducedTriple,
    spec: &CMFieldSpec,
    r_target: u32,
    cap: u32,
) -> Result<SiegelPoint> {
    let t = working_precision(r_target);
    let mut high = t + 96;
    loop {
        if high > cap {
            return Err(Error::PrecisionCap {
                requested: high,
                cap,
            });
        }
        let (w, _) = period_matrix(&rt.triple, &rt.symplectic, high, spec)?;
        let z = apply_sp4(&rt.reduction, &w, high)?;
        let ok = z
            .entries()
            .iter()
            .all(|e| e.rad.le_two_pow(-(t as i64) - 1) || e.rad.is_zero());
        if ok {
            return Ok(z);
        }
        high = high + high / 2;
    }
}

/// Steps 1-4 of the pipeline: field data, enumeration, and per-triple
/// reduction at moderate precision.
fn prepare(spec: &CMFieldSpec) -> Result<(CMField, ClassGroupData, Vec<ReducedTriple>)> {
    let field = CMField::new(spec.clone())?;
    let cg = class_group(&field.spec, &field.basis)?;
    let units = fundamental_unit(&field.spec, &field.delta)?;
    let triples = enumerate_ppav(&field, &cg, &units)?;
    let mut reduced = Vec::new();
    for triple in triples {
        let mut prec = 128u32;
        let rt = loop {
            let a = polarization_matrix(&triple, &field.spec)?;
            let m = symplectic_transform(&a)?;
            let attempt = (|| -> Result<ReducedTriple> {
                let (w, m_used) = period_matrix(&triple, &m, prec, &field.spec)?;
                let red = reduce(&w, Domain::F2)?;
                let u = u_bound(&red.point)?;
                Ok(ReducedTriple {
                    triple: triple.clone(),
                    symplectic: m_used,
                    reduction: red.transform,
                    u,
                })
            })();
            match attempt {
                Ok(rt) => break rt,
                Err(Error::PrecisionExhausted(_)) if prec < 4096 => {
                    prec *= 2;
                }
                Err(e) => return Err(e),
            }
        };
        reduced.push(rt);
    }
    Ok((field, cg, reduced))
}

/// Per-triple invariants at precision `p` with theta precision `r_j`.
fn invariants_for_triple<E: Executor>(
    rt: &ReducedTriple,
    spec: &CMFieldSpec,
    r_j: u32,
    p: u32,
    cap: u32,
    exec: &E,
) -> Result<InvariantTriple> {
    let z = siegel_point_for_theta(rt, spec, r_j, cap)?;
    let thetas = even_thetas_with(&z, r_j, exec)?;
    let inv = igusa_invariants(&thetas, rt.u, r_j)?;
    // Represent at precision p (they arrive at r_j > p).
    Ok(InvariantTriple {
        i1: inv.i1.round_to(p),
        i2: inv.i2.round_to(p),
        i3: inv.i3.round_to(p),
        i4: inv.i4.round_to(p),
    })
}

/// Reconstructs one class polynomial from its invariant values.
fn assemble_poly(
    values: &[Ball],
    bounds: &RootBounds,
    d: &BigInt,
) -> Result<RationalPoly> {
    // Target |f̃ − f|∞ < (2D)⁻¹: u = bits(2D) suffices.
    let u: u32 = ((d << 1u32).bits())
        .try_into()
        .map_err(|_| Error::PrecisionCap {
            requested: u32::MAX,
            cap: crate::approx::PRECISION_CAP,
        })?;
    let f = poly_from_roots(values, bounds, u)?;
    let h = round_to_rational(&f, d)?;
    if !h.is_monic() {
        return Err(Error::RoundingAmbiguous(
            "reconstructed polynomial is not monic".to_string(),
        ));
    }
    Ok(h)
}

/// The interpolation polynomials `Ĥ_{K,n} = Σ_C i_n(C)·Π_{C'≠C}(X−i₁(C'))`,
/// rounded with `D·h'!` (a conservative guard on top of the proven `D`).
fn assemble_hhat(
    i1: &[Ball],
    inn: &[Ball],
    bounds: &RootBounds,
    d: &BigInt,
    p: u32,
) -> Result<RationalPoly> {
    let hp = i1.len();
    let mut guard = BigInt::one();
    for k in 1..=hp {
        guard *= BigInt::from(k);
    }
    let d_hat = d * &guard;
    let u: u32 = ((&d_hat << 1u32).bits() + 8)
        .try_into()
        .map_err(|_| Error::PrecisionCap {
            requested: u32::MAX,
            cap: crate::approx::PRECISION_CAP,
        })?;
    // Each summand: a product tree over the deleted root set, scaled by the
    // invariant value, then an exact addition tree.
    let mut summands: Vec<ApproxPolynomial> = Vec::new();
    let mut common_prec: Option<u32> = None;
    for c in 0..hp {
        let rest: Vec<Ball> = i1
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != c)
            .map(|(_, b)| b.clone())
            .collect();
        let rest_bounds = RootBounds {
            sigma: bounds
                .sigma
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != c)
                .map(|(_, s)| *s)
                .collect(),
        };
        let u_summand = u + bounds.sigma[c] + 2;
        let prod = poly_from_roots(&rest, &rest_bounds, u_summand)?;
        let scalar = ApproxPolynomial {
            coeffs: vec![inn[c].mid.round_to(prod.prec)],
            prec: prod.prec,
            err: inn[c].rad.add(crate::approx::rounding_err(prod.prec)),
        };
        let scaled = mult_approx_poly(&prod, &scalar, prod.prec)?;
        if let Some(cp) = common_prec {
            if scaled.prec != cp {
                // align precisions by re-rounding to the minimum
                let target = cp.min(scaled.prec);
                summands = summands
                    .into_iter()
                    .map(|s| reprec(&s, target))
                    .collect();
                common_prec = Some(target);
                summands.push(reprec(&scaled, target));
                continue;
            }
        }
        common_prec = Some(scaled.prec);
        summands.push(scaled);
    }
    // Addition tree (exact at common precision).
    while summands.len() > 1 {
        let mut next = Vec::with_capacity(summands.len() / 2 + 1);
        let mut it = summands.into_iter();
        while let Some(a) = it.next() {
            if let Some(b) = it.next() {
                next.push(add_approx_poly(&a, &b)?);
            } else {
                next.push(a);
            }
        }
        summands = next;
    }
    let f = summands
        .into_iter()
        .next()
        .unwrap_or_else(|| ApproxPolynomial::constant_one(p));
    round_to_rational(&f, &d_hat)
}

fn reprec(f: &ApproxPolynomial, target: u32) -> ApproxPolynomial {
    if f.prec == target {
        return f.clone();
    }
    ApproxPolynomial {
        coeffs: f.coeffs.iter().map(|c| c.round_to(target)).collect(),
        prec: target,
        err: f.err.add(crate::approx::rounding_err(target)),
    }
}

/// Runs the whole pipeline. Stage errors of the retry-with-higher-precision
/// kind trigger one automatic re-run with a doubled precision budget before
/// surfacing.
pub fn igusa_class_polynomials<E: Executor>(
    spec: &CMFieldSpec,
    config: &PipelineConfig,
    exec: &E,
) -> Result<ClassPolynomialSet> {
    let (field, cg, reduced) = prepare(spec)?;
    let h_prime = reduced.len() as u32;
    if h_prime == 0 {
        return Err(Error::InvalidInput(
            "no principally polarized classes found (broken input?)".to_string(),
        ));
    }
    let denom = denominator_d(&field.delta, h_prime, config.c1, config.c2)?;
    let u_list: Vec<u32> = reduced.iter().map(|r| r.u).collect();
    let (p0, r0) = precision_budget(&u_list, &denom.d, h_prime)?;

    let ramified_23 = (&field.delta % 2u32).is_zero() || (&field.delta % 3u32).is_zero();

    let mut retries = 0u32;
    let mut scale = 1u32;
    loop {
        let p = p0 * scale;
        let r_list: Vec<u32> = r0.iter().map(|&r| r + (p - p0)).collect();
        let attempt = (|| -> Result<ClassPolynomialSet> {
            let mut invs: Vec<InvariantTriple> = Vec::new();
            for (j, rt) in reduced.iter().enumerate() {
                invs.push(invariants_for_triple(
                    rt,
                    &field.spec,
                    r_list[j],
                    p,
                    config.precision_cap,
                    exec,
                )?);
            }
            let bounds = RootBounds {
                sigma: u_list.iter().map(|&u| 2 * u + 40).collect(),
            };
            let i1: Vec<Ball> = invs.iter().map(|v| v.i1.clone()).collect();
            let i2: Vec<Ball> = invs.iter().map(|v| v.i2.clone()).collect();
            let i3: Vec<Ball> = invs.iter().map(|v| v.i3.clone()).collect();
            let h1 = assemble_poly(&i1, &bounds, &denom.d)?;
            let h2 = assemble_poly(&i2, &bounds, &denom.d)?;
            let h3 = assemble_poly(&i3, &bounds, &denom.d)?;
            let (hhat2, hhat3) = if config.emit_hhat {
                (
                    Some(assemble_hhat(&i1, &i2, &bounds, &denom.d, p)?),
                    Some(assemble_hhat(&i1, &i3, &bounds, &denom.d, p)?),
                )
            } else {
                (None, None)
            };
            Ok(ClassPolynomialSet {
                h1,
                h2,
                h3,
                hhat2,
                hhat3,
                audit: AuditTrail {
                    delta0: spec.delta0,
                    a: spec.a,
                    b: spec.b,
                    delta: field.delta.clone(),
                    delta1: field.delta1.clone(),
                    galois_cyclic: field.galois == crate::cmfield::GaloisType::Cyclic,
                    h: cg.h,
                    h0: cg.h0,
                    h1: cg.h1,
                    h_prime,
                    c1: config.c1,
                    c2: config.c2,
                    d: denom.d.clone(),
                    u: u_list.clone(),
                    p: p0,
                    r: r0.clone(),
                    ramified_23,
                    retries,
                },
            })
        })();
        match attempt {
            Ok(mut out) => {
                out.audit.retries = retries;
                return Ok(out);
            }
            Err(Error::RoundingAmbiguous(_)) | Err(Error::PrecisionExhausted(_))
                if retries == 0 =>
            {
                retries += 1;
                scale = 2;
            }
            Err(e) => return Err(e),
        }
    }
}

/// Convenience wrapper with the serial executor.
pub fn igusa_class_polynomials_serial(
    spec: &CMFieldSpec,
    config: &PipelineConfig,
) -> Result<ClassPolynomialSet> {
    igusa_class_polynomials(spec, config, &Serial)
}

/// Interpolation polynomials as a standalone operation (the `Ĥ` variant of
/// the reconstruction step).
pub fn interpolation_polys(
    i1: &[Ball],
    i2: &[Ball],
    i3: &[Ball],
    sigma: &[u32],
    d: &BigInt,
    p: u32,
) -> Result<(RationalPoly, RationalPoly)> {
    let bounds = RootBounds {
        sigma: sigma.to_vec(),
    };
    Ok((
        assemble_hhat(i1, i2, &bounds, d, p)?,
        assemble_hhat(i1, i3, &bounds, d, p)?,
    ))
}

/// A bound audit helper: `log₂` of a positive integer rounded up.
pub fn log2_ceil_int(x: &BigInt) -> u64 {
    ceil_log2(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_formula_example() {
        // u = [11], D = 2, h' = 1 → p = ⌈1+0+4⌉ + 62 = 67, r = 101+77+67 = 245.
        let (p, r) = precision_budget(&[11], &BigInt::from(2), 1).unwrap();
        assert_eq!(p, 67);
        assert_eq!(r, vec![245]);
        // p strictly increases in each u_j and r_j − p = 101 + 7u_j.
        let (p2, r2) = precision_budget(&[12], &BigInt::from(2), 1).unwrap();
        assert!(p2 > p);
        assert_eq!(r2[0] - p2, 101 + 7 * 12);
    }

    #[test]
    fn denominator_small_case() {
        // Δ = 125: primes below 256·125/π² ≈ 3242.27…, c1 = c2 = 1, h' = 1.
        let d = denominator_d(&BigInt::from(125), 1, 1, 1).unwrap();
        assert_eq!(d.prime_limit, 3242);
        // direct small-scale product oracle
        let mut expect = BigInt::one();
        let mut sieve = vec![true; 3243];
        for p in 2..=3242usize {
            if !sieve[p] {
                continue;
            }
            let mut q = p * p;
            while q <= 3242 {
                sieve[q] = false;
                q += p;
            }
            let mut k = 0u32;
            let mut pk = p as u64;
            while pk <= 125 {
                k += 1;
                pk *= p as u64;
            }
            expect *= BigInt::from(p).pow(1 + k);
        }
        assert_eq!(d.d, expect);
        // h' doubling squares D.
        let d2 = denominator_d(&BigInt::from(125), 2, 1, 1).unwrap();
        assert_eq!(d2.d, &d.d * &d.d);
    }

    #[test]
    fn prime_cutoff_values() {
        // 256/π² = 25.93254…: floor for a few Δ
        assert_eq!(prime_cutoff(&BigInt::from(125)).unwrap(), 3242);
        assert_eq!(prime_cutoff(&BigInt::from(1)).unwrap(), 25);
    }
}
