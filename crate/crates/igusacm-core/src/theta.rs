//! Certified evaluation of the ten even theta constants and the absolute
//! Igusa invariants at points of the domain `B`.
//!
//! The series `θ[c](Z) = Σ_n E((n+c')Z(n+c')ᵗ + 2(n+c')c''ᵗ)` is summed over
//! the doubled indices `m_i = 2n_i + 2c_i`, using
//!
//! `z₁m₁² + z₂m₂² + 2z₃m₁m₂ = (z₁−z₃)m₁² + (z₂−z₃)m₂² + z₃(m₁+m₂)²`.
//!
//! All three bases have nonnegative imaginary part on `B`, so the power
//! tables `U[j] = E(j²(z₁−z₃)/4)`, `V[j] = E(j²(z₂−z₃)/4)`,
//! `T[j] = E(j²z₃/4)` consist of magnitudes ≤ 1 and every term is a product
//! of two table multiplications. The characteristic shift contributes the
//! exact factor `i^{m₁·2c₃+m₂·2c₄}`. Sums of fixed-point values are exact,
//! so chunked (parallel) summation is bit-identical to sequential.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::approx::{exp_pi_i_tracked, ApproxComplex, Ball, ErrorBound, PiCache};
use crate::error::{Error, Result};
use crate::executor::{Executor, Serial};
use crate::period::SiegelPoint;
use crate::siegel::{in_domain, Domain};

/// A theta characteristic `c ∈ {0, 1/2}⁴`, stored as numerators of halves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ThetaCharacteristic {
    /// `(c1, c2, c3, c4)` with entries in `{0, 1}` meaning `0` or `1/2`.
    pub half: [u8; 4],
}

impl ThetaCharacteristic {
    pub fn new(half: [u8; 4]) -> Self {
        debug_assert!(half.iter().all(|&x| x < 2));
        ThetaCharacteristic { half }
    }

    /// Index `16c₂+8c₁+4c₄+2c₃` evaluated on half-values, i.e.
    /// `8h₂+4h₁+2h₄+h₃` on the stored numerators.
    pub fn index(&self) -> u8 {
        4 * self.half[0] + 8 * self.half[1] + self.half[2] + 2 * self.half[3]
    }

    /// Even iff `4·c'c''ᵗ` is even.
    pub fn is_even(&self) -> bool {
        (self.half[0] * self.half[2] + self.half[1] * self.half[3]) % 2 == 0
    }

    /// The 10 even characteristics, ordered by index.
    pub fn even_all() -> Vec<ThetaCharacteristic> {
        let mut v = Vec::new();
        for c1 in 0..2u8 {
            for c2 in 0..2u8 {
                for c3 in 0..2u8 {
                    for c4 in 0..2u8 {
                        let c = ThetaCharacteristic::new([c1, c2, c3, c4]);
                        if c.is_even() {
                            v.push(c);
                        }
                    }
                }
            }
        }
        v.sort_by_key(|c| c.index());
        debug_assert_eq!(v.len(), 10);
        v
    }
}

/// Truncation radius `R = ⌈(0.4s+2.2)^{1/2}⌉`: smallest `R` with
/// `5R² ≥ 2s+11`.
pub fn truncation_radius(s: u32) -> u32 {
    let target = 2 * s as u64 + 11;
    let mut r = 1u64;
    while 5 * r * r < target {
        r += 1;
    }
    r as u32
}

/// Working precision `t = s + 1 + ⌊2·log₂(2R+1)⌋`.
pub fn working_precision(s: u32) -> u32 {
    let r = truncation_radius(s) as u64;
    let m = 2 * r + 1;
    let bits2 = 64 - (m * m).leading_zeros() as u64 - 1; // ⌊log₂ m²⌋
    s + 1 + bits2 as u32
}

/// Shared exponential tables for all characteristics at a fixed `Z`.
pub struct ThetaTables {
    /// `U[j] = E(j²(z₁−z₃)/4)`, up to `j = 2R+1`.
    u: Vec<Ball>,
    /// `V[j] = E(j²(z₂−z₃)/4)`.
    v: Vec<Ball>,
    /// `T[j] = E(j²·z₃/4)`, up to `j = 2(2R+1)`.
    t: Vec<Ball>,
    /// Per-entry decay `⌈−log₂|·|⌉` (saturating at the working precision).
    u_decay: Vec<u32>,
    t_decay: Vec<u32>,
    pub r: u32,
    /// Internal ball precision.
    pub prec: u32,
    /// Target precision `s` (output error `≤ 2^{-s}`).
    pub s: u32,
}

fn decay_profile(entries: &[Ball], w: u32) -> Vec<u32> {
    entries
        .iter()
        .map(|b| {
            b.mag_upper()
                .log2_ceil()
                .map(|l| (-l).clamp(0, w as i64) as u32)
                .unwrap_or(w)
        })
        .collect()
}

/// Builds the power table `base^(j²)` of length `len+1` at precision `w` via
/// `x^{(j+1)²} = x^{j²}·x^{2j+1}`, stopping early once entries vanish at the
/// working precision.
fn square_power_table(base: &Ball, len: usize, w: u32) -> Vec<Ball> {
    let mut out = Vec::with_capacity(len + 1);
    out.push(Ball::one(w));
    let sq = base.mul(base, w);
    let mut odd = base.clone(); // x^{2j+1} for current j
    let mut cur = Ball::one(w);
    for _j in 0..len {
        cur = cur.mul(&odd, w);
        odd = odd.mul(&sq, w);
        out.push(cur.clone());
        if cur.mid.is_zero() {
            // all further entries are zero too; fill and stop multiplying
            while out.len() <= len {
                out.push(cur.clone());
            }
            break;
        }
    }
    out
}

impl ThetaTables {
    /// Prepares the tables for target precision `s`. The input must be in
    /// `B` (dead-band membership) and carry error at most `2^{-t-1}`.
    pub fn build(z: &SiegelPoint, s: u32) -> Result<ThetaTables> {
        if !in_domain(z, Domain::B) {
            return Err(Error::InvalidInput(
                "theta evaluation requires Z in the domain B".to_string(),
            ));
        }
        let t = working_precision(s);
        let max_rad = ErrorBound::two_pow(-(t as i64) - 1);
        for e in z.entries() {
            if !(e.rad.le_two_pow(-(t as i64) - 1) || e.rad.is_zero()) {
                let _ = &max_rad;
                return Err(Error::PrecisionExhausted(alloc::format!(
                    "theta input must have error <= 2^-{}",
                    t + 1
                )));
            }
        }
        let w = t + crate::approx::GUARD_BITS;
        let r = truncation_radius(s);
        let cache = PiCache::for_precision(w + 64 + 64);

        // Bases (z₁−z₃)/4, (z₂−z₃)/4, z₃/4: exact dyadic manipulations.
        let b1 = z.z1.sub(&z.z3, w).scale2(-2);
        let b2 = z.z2.sub(&z.z3, w).scale2(-2);
        let b3 = z.z3.scale2(-2);
        let e1 = exp_pi_i_tracked(&b1, w, &cache)?;
        let e2 = exp_pi_i_tracked(&b2, w, &cache)?;
        let e3 = exp_pi_i_tracked(&b3, w, &cache)?;

        let len1 = (2 * r + 1) as usize;
        let len3 = 2 * len1;
        let u = square_power_table(&e1, len1, w);
        let v = square_power_table(&e2, len1, w);
        let t_tab = square_power_table(&e3, len3, w);
        let u_decay = decay_profile(&u, w);
        let t_decay = decay_profile(&t_tab, w);
        Ok(ThetaTables {
            u,
            v,
            t: t_tab,
            u_decay,
            t_decay,
            r,
            prec: w,
            s,
        })
    }

    /// The inner factor `U[|m₁|]·T[|m₁+m₂|]` of a term at the stripe
    /// precision `ws`; the `V[|m₂|]` factor is constant along an `m₂`-stripe
    /// and is multiplied in once per stripe. Each operand is truncated by
    /// the other's decay, so the multiplication costs only the term's
    /// surviving significance (magnitudes are ≤ 1 throughout, so truncation
    /// errors stay below the stripe ulp and the radii remain sound).
    fn inner_factor(&self, m1: i64, m2: i64, ws: u32) -> Ball {
        let iu = m1.unsigned_abs() as usize;
        let it = (m1 + m2).unsigned_abs() as usize;
        let eu = self.u_decay[iu];
        let et = self.t_decay[it];
        if eu as u64 + et as u64 + 8 >= ws as u64 {
            // |U·T| ≤ 2^{-eu-et}·(1+slack): below the stripe ulp scale; emit
            // the certified bound without multiplying.
            let rad = self.u[iu]
                .rad
                .add(self.t[it].rad)
                .add(ErrorBound::two_pow(-(ws as i64) + 9));
            return Ball::new(ApproxComplex::zero(ws), rad);
        }
        let u = self.u[iu].round_to(ws - et);
        let t = self.t[it].round_to(ws - eu);
        u.mul(&t, ws)
    }
}

/// Exact factor `i^k + i^{-k}` of a ± term pair: `2, 0, −2, 0`.
fn pair_coeff(k: i64) -> i64 {
    match k.rem_euclid(4) {
        0 => 2,
        2 => -2,
        _ => 0,
    }
}

/// Sums the theta series for a set of characteristics sharing the tables,
/// over `m₁`-stripes assigned by the executor. Summation is over the
/// symmetric box `|m_i| ≤ 2R+1` (a superset of the `|n_i| ≤ R` box; the
/// truncation theorem only improves) with the `±m` pairs folded.
fn theta_sums<E: Executor>(
    tables: &ThetaTables,
    chars: &[ThetaCharacteristic],
    exec: &E,
) -> Vec<Ball> {
    let w = tables.prec;
    let mmax = (2 * tables.r + 1) as i64;
    // Work items: one per nonnegative m1 stripe.
    let stripes: Vec<i64> = (0..=mmax).collect();
    let partials = exec.map(stripes.len(), |si| {
        // Stripes run over m₂: V decays at least as fast as U (y₂ ≥ y₁), so
        // the per-stripe truncation below bites hardest in this direction.
        let m2 = stripes[si];
        let v_m2 = &tables.v[m2.unsigned_abs() as usize];
        let m1_count = if m2 == 0 { mmax } else { 2 * mmax + 1 } as u64;

        // |V[m₂]| scales the whole stripe, so the inner sum only needs
        // w − ⌈−log₂|V|⌉ significant bits (plus guard); entries below that
        // vanish and their big multiplications collapse.
        let v_mag = v_m2.mag_upper();
        let Some(v_log) = v_mag.log2_ceil() else {
            // |V| = 0 exactly: the stripe is empty.
            return chars.iter().map(|_| Ball::zero(w)).collect::<Vec<Ball>>();
        };
        let decay = (-v_log).max(0) as u32;
        if decay >= w {
            // |V·inner| ≤ |V|·2·(2mmax+1): below one ulp of the target; emit
            // the certified bound without summing.
            let rad = v_mag.mul_u64(2 * m1_count + 2);
            return chars
                .iter()
                .map(|_| Ball::new(ApproxComplex::zero(w), rad))
                .collect::<Vec<Ball>>();
        }
        let ws = (w - decay).saturating_add(48).min(w).max(64);

        // Inner sums Σ_{m₁} coeff·U·T per characteristic at the stripe
        // precision; the shared factor V[|m₂|] is applied once at the end.
        let mut inner: Vec<Option<Ball>> = chars.iter().map(|_| None).collect();
        let m1_range: Vec<i64> = if m2 == 0 {
            (1..=mmax).collect()
        } else {
            (-mmax..=mmax).collect()
        };
        for &m1 in &m1_range {
            // representative of the ±(m1, m2) pair
            let mut factor: Option<Ball> = None;
            for (ci, c) in chars.iter().enumerate() {
                // parity selection: m_i ≡ 2c_i (mod 2)
                if (m1 - c.half[0] as i64) % 2 != 0 || (m2 - c.half[1] as i64) % 2 != 0 {
                    continue;
                }
                let k = m1 * c.half[2] as i64 + m2 * c.half[3] as i64;
                let coeff = pair_coeff(k);
                if coeff == 0 {
                    continue;
                }
                let f = factor.get_or_insert_with(|| tables.inner_factor(m1, m2, ws));
                let scaled = f.mul_int(&BigInt::from(coeff));
                let cur = inner[ci].take().unwrap_or_else(|| Ball::zero(ws));
                inner[ci] = Some(cur.add(&scaled, ws));
            }
        }
        inner
            .into_iter()
            .map(|s| match s {
                Some(b) => b.mul(v_m2, w),
                None => Ball::zero(w),
            })
            .collect::<Vec<Ball>>()
    });
    // Exact accumulation of the stripe sums, plus the self-paired (0,0) term.
    let mut out: Vec<Ball> = chars.iter().map(|_| Ball::zero(w)).collect();
    for p in &partials {
        for (o, q) in out.iter_mut().zip(p) {
            *o = o.add(q, w);
        }
    }
    for (ci, c) in chars.iter().enumerate() {
        if c.half[0] == 0 && c.half[1] == 0 {
            out[ci] = out[ci].add(&Ball::one(w), w);
        }
    }
    out
}

/// Truncation bound of the summed box: `5.29·Σᵢ exp(−(3π/4)yᵢR²) < 2^{-s-2}`
/// is guaranteed by the choice of `R` on `B`; we charge `2^{-s-2}`.
fn truncation_bound(s: u32) -> ErrorBound {
    ErrorBound::two_pow(-(s as i64) - 2)
}

/// One theta constant with certified error at most `2^{-s}`.
///
/// Odd characteristics return exactly 0 without summation.
pub fn theta_constant(
    c: &ThetaCharacteristic,
    z: &SiegelPoint,
    s: u32,
) -> Result<Ball> {
    if !c.is_even() {
        return Ok(Ball::exact(ApproxComplex::zero(s)));
    }
    let tables = ThetaTables::build(z, s)?;
    theta_from_tables(&tables, c)
}

/// Single theta constant from prebuilt tables.
pub fn theta_from_tables(tables: &ThetaTables, c: &ThetaCharacteristic) -> Result<Ball> {
    if !c.is_even() {
        return Ok(Ball::exact(ApproxComplex::zero(tables.s)));
    }
    let sums = theta_sums(tables, core::slice::from_ref(c), &Serial);
    finish_theta(tables, sums.into_iter().next().unwrap())
}

fn finish_theta(tables: &ThetaTables, sum: Ball) -> Result<Ball> {
    let s = tables.s;
    let out = sum.round_to(tables.prec.min(s + 32));
    let rad = out.rad.add(truncation_bound(s));
    if !rad.le_two_pow(-(s as i64)) {
        return Err(Error::PrecisionExhausted(alloc::format!(
            "theta error bound exceeded 2^-{s}"
        )));
    }
    Ok(Ball::new(out.mid, rad))
}

/// The ten even theta constants at `Z`, sharing the exponential tables and
/// the per-class term products; optionally parallel over stripes.
pub fn even_thetas(z: &SiegelPoint, s: u32) -> Result<Vec<Ball>> {
    even_thetas_with(z, s, &Serial)
}

pub fn even_thetas_with<E: Executor>(z: &SiegelPoint, s: u32, exec: &E) -> Result<Vec<Ball>> {
    let tables = ThetaTables::build(z, s)?;
    let chars = ThetaCharacteristic::even_all();
    let sums = theta_sums(&tables, &chars, exec);
    sums.into_iter().map(|b| finish_theta(&tables, b)).collect()
}

// ---------------------------------------------------------------------------
// Igusa invariants from theta constants

/// The modular forms `(h₄, h₁₀, h₁₂, h₁₆)` from the ten even thetas.
pub fn h_forms(thetas: &[Ball], s: u32) -> Result<[Ball; 4]> {
    if thetas.len() != 10 {
        return Err(Error::InvalidInput("need the 10 even thetas".to_string()));
    }
    let subsets = integral_six_subsets();
    debug_assert_eq!(subsets.len(), 15);

    let sq: Vec<Ball> = thetas.iter().map(|t| t.mul(t, s)).collect();
    let p4: Vec<Ball> = sq.iter().map(|t| t.mul(t, s)).collect();
    let p8: Vec<Ball> = p4.iter().map(|t| t.mul(t, s)).collect();

    // h₄ = Σ θ⁸ (10 terms)
    let mut h4 = Ball::zero(s);
    for t in &p8 {
        h4 = h4.add(t, s);
    }
    // h₁₀ = Π θ² (one monomial, factor by factor)
    let mut h10 = Ball::one(s);
    for t in &sq {
        h10 = h10.mul(t, s);
    }
    // h₁₂ = Σ_{C∈S} Π_{c∈C} θ⁴ (15 terms)
    let mut h12 = Ball::zero(s);
    for c in &subsets {
        let mut prod = Ball::one(s);
        for &i in c {
            prod = prod.mul(&p4[i], s);
        }
        h12 = h12.add(&prod, s);
    }
    // h₁₆ = Σ_{C∈S} Σ_{d∉C} θ[d]⁸·Π_{c∈C} θ⁴ (60 terms)
    let mut h16 = Ball::zero(s);
    for c in &subsets {
        let mut prod = Ball::one(s);
        for &i in c {
            prod = prod.mul(&p4[i], s);
        }
        for d in 0..10 {
            if !c.contains(&d) {
                h16 = h16.add(&p8[d].mul(&prod, s), s);
            }
        }
    }
    Ok([h4, h10, h12, h16])
}

/// The 15 six-element subsets of the even characteristics whose sum is
/// integral (all four components even in half-units).
pub fn integral_six_subsets() -> Vec<Vec<usize>> {
    let chars = ThetaCharacteristic::even_all();
    let mut out = Vec::new();
    let n = chars.len();
    // enumerate 6-subsets of 10
    let mut idx = [0usize; 6];
    fn rec(
        start: usize,
        depth: usize,
        n: usize,
        idx: &mut [usize; 6],
        chars: &[ThetaCharacteristic],
        out: &mut Vec<Vec<usize>>,
    ) {
        if depth == 6 {
            let mut sums = [0u32; 4];
            for &i in idx.iter() {
                for k in 0..4 {
                    sums[k] += chars[i].half[k] as u32;
                }
            }
            if sums.iter().all(|&x| x % 2 == 0) {
                out.push(idx.to_vec());
            }
            return;
        }
        for i in start..n {
            idx[depth] = i;
            rec(i + 1, depth + 1, n, idx, chars, out);
        }
    }
    rec(0, 0, n, &mut idx, &chars, &mut out);
    out
}

/// The precision driver `u = ⌈3 + π(y₁+y₂−y₃) + max{2, −log₂|z₃|}⌉`,
/// computed as a certified upper ceiling. Fails when `z₃` cannot be
/// separated from 0 at the working precision.
pub fn u_bound(z: &SiegelPoint) -> Result<u32> {
    let n = z.prec;
    let (y1, y2, y3) = z.imag_parts();
    let lin = y1.add(&y2, n).sub(&y3, n);
    // Upper rational for y1+y2−y3 (midpoint + radius).
    let up = {
        let mid = BigRational::new(
            lin.mid.re_num().clone(),
            BigInt::one() << lin.mid.precision(),
        );
        let rad = BigRational::new(
            lin.rad.to_scaled_int_ceil(n + 8),
            BigInt::one() << (n + 8),
        );
        mid + rad
    };
    // π upper bound: 3.14159265359 < 3.1415926536.
    let pi_up = BigRational::new(BigInt::from(31_415_926_536u64), BigInt::from(10_000_000_000u64));
    let l3 = z
        .z3
        .mag_lower()
        .ok_or_else(|| Error::PrecisionExhausted(
            "z3 indistinguishable from 0; cannot budget theta precision".to_string(),
        ))?;
    // −log₂|z₃| ≤ −(exp+63) for the normalized lower bound.
    let neg_log = -(l3.log2_floor());
    let log_term = BigRational::from_integer(BigInt::from(neg_log.max(2)));
    let total = BigRational::from_integer(BigInt::from(3)) + pi_up * up + log_term;
    let u = total.ceil().to_integer();
    if u.is_negative() {
        return Ok(0);
    }
    use num_traits::ToPrimitive;
    u.to_u32().ok_or_else(|| {
        Error::ResourceBudget("theta precision driver overflows u32".to_string())
    })
}

/// Absolute Igusa invariants; `i₄ = I₂⁵/I₁₀` is always computed alongside.
#[derive(Clone, Debug)]
pub struct InvariantTriple {
    pub i1: Ball,
    pub i2: Ball,
    pub i3: Ball,
    pub i4: Ball,
}

/// Evaluates `i₁ = h₄h₁₆h₁₀⁻², i₂ = h₄²h₁₂h₁₀⁻², i₃ = h₄⁵h₁₀⁻²` at
/// absolute precision `s` (plus `i₄ = h₁₂⁵h₁₀⁻⁶`).
///
/// Requires `s > 13 + 2u`; the output error is at most `2^{100+3u−s}`.
pub fn igusa_invariants(thetas: &[Ball], u: u32, s: u32) -> Result<InvariantTriple> {
    if s <= 13 + 2 * u {
        return Err(Error::InvalidInput(alloc::format!(
            "igusa_invariants requires s > 13 + 2u (s = {s}, u = {u})"
        )));
    }
    let [h4, h10, h12, h16] = h_forms(thetas, s)?;
    if h10.mag_lower().is_none() {
        return Err(Error::ProductOfEllipticCurves);
    }
    let h10inv = h10.inv(s)?;
    let h10inv2 = h10inv.mul(&h10inv, s);
    let i1 = h4.mul(&h16, s).mul(&h10inv2, s);
    let i2 = h4.mul(&h4, s).mul(&h12, s).mul(&h10inv2, s);
    let h4_5 = {
        let h4_2 = h4.mul(&h4, s);
        h4_2.mul(&h4_2, s).mul(&h4, s)
    };
    let i3 = h4_5.mul(&h10inv2, s);
    let i4 = {
        let h12_2 = h12.mul(&h12, s);
        let h12_5 = h12_2.mul(&h12_2, s).mul(&h12, s);
        let inv6 = h10inv2.mul(&h10inv2, s).mul(&h10inv2, s);
        h12_5.mul(&inv6, s)
    };
    // The worst-case envelope from the error analysis.
    let envelope = ErrorBound::two_pow(100 + 3 * u as i64 - s as i64);
    for b in [&i1, &i2, &i3] {
        if !b.rad.le_two_pow(envelope.log2_ceil().unwrap_or(0)) {
            return Err(Error::PrecisionExhausted(
                "invariant error exceeded the 2^{100+3u-s} envelope".to_string(),
            ));
        }
    }
    Ok(InvariantTriple { i1, i2, i3, i4 })
}

/// Homogeneous invariants `(I₂, I₄, I₆, I₁₀) = (h₁₂/h₁₀, h₄, h₁₆/h₁₀, h₁₀)`.
pub fn homogeneous_invariants(thetas: &[Ball], s: u32) -> Result<[Ball; 4]> {
    let [h4, h10, h12, h16] = h_forms(thetas, s)?;
    if h10.mag_lower().is_none() {
        return Err(Error::ProductOfEllipticCurves);
    }
    let i2 = h12.div(&h10, s)?;
    let i6 = h16.div(&h10, s)?;
    Ok([i2, h4, i6, h10])
}

/// `y₁+y₂−y₃` as a certified ball, used by pipeline audits.
pub fn y_linear_upper(z: &SiegelPoint) -> Ball {
    let (y1, y2, y3) = z.imag_parts();
    y1.add(&y2, z.prec).sub(&y3, z.prec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn characteristic_indexing() {
        let evens = ThetaCharacteristic::even_all();
        let idx: Vec<u8> = evens.iter().map(|c| c.index()).collect();
        assert_eq!(idx, vec![0, 1, 2, 3, 4, 6, 8, 9, 12, 15]);
    }

    #[test]
    fn fifteen_integral_subsets() {
        let s = integral_six_subsets();
        assert_eq!(s.len(), 15);
        for c in &s {
            assert_eq!(c.len(), 6);
        }
    }

    #[test]
    fn truncation_radius_examples() {
        // R = ⌈√(0.4s+2.2)⌉
        assert_eq!(truncation_radius(30), 4);
        assert_eq!(truncation_radius(60), 6);
        assert_eq!(truncation_radius(120), 8);
    }

    fn diag_2i_point(n: u32) -> SiegelPoint {
        // Z = diag(2i, 2i) with a tiny off-diagonal to stay "generic";
        // here exactly zero z3 is fine for theta itself.
        SiegelPoint {
            z1: Ball::exact(ApproxComplex::from_int(0, 2, n)),
            z2: Ball::exact(ApproxComplex::from_int(0, 2, n)),
            z3: Ball::exact(ApproxComplex::from_int(0, 0, n)),
            prec: n,
        }
    }

    #[test]
    fn theta_diag_matches_product_structure() {
        // At Z = diag(2i, 2i): θ[c](Z) factors into genus-1 theta values;
        // θ₀ = ϑ₃(2i)², with ϑ₃(2i) = Σ e^{2πi·n²·(2i)/2}... frozen below
        // from an independent evaluation: ϑ₃(q), q = e^{-4π}:
        // θ₀(Z) = (Σ q^{n²})² with q = e^{-4π} ≈ 1.0000069…²
        let n = 120;
        let z = diag_2i_point(n);
        let s = 80;
        let c0 = ThetaCharacteristic::new([0, 0, 0, 0]);
        let th = theta_constant(&c0, &z, s).unwrap();
        // Independent high-precision evaluation: θ₀(diag(2i,2i)) = ϑ₃(e^{-2π})²
        // = 1.00748372034508470616…
        let (re, im) = {
            use num_traits::ToPrimitive;
            let (r, i) = th.mid.to_rationals();
            (r.to_f64().unwrap(), i.to_f64().unwrap())
        };
        assert!((re - 1.007483720345084706).abs() < 1e-15, "re = {re}");
        assert!(im.abs() < 1e-15);
    }

    #[test]
    fn theta_at_rational_point_matches_frozen_oracle() {
        // Z = [[1/4+i, 1/8+3/8i],[1/8+3/8i, -3/8+3/2i]] ∈ B; values frozen
        // from an independent 300-bit direct summation, scaled by 2^100.
        use core::str::FromStr;
        let n = 160;
        let mk = |re_num: i64, im_num: i64| {
            Ball::exact(ApproxComplex::new(
                BigInt::from(re_num) << (n - 3),
                BigInt::from(im_num) << (n - 3),
                n,
            ))
        };
        let z = SiegelPoint {
            z1: mk(2, 8),  // 1/4 + i
            z2: mk(-3, 12), // -3/8 + 3/2 i
            z3: mk(1, 3),  // 1/8 + 3/8 i
            prec: n,
        };
        let cases: [([u8; 4], &str, &str); 5] = [
            (
                [0, 0, 0, 0],
                "1357896586607288053553300290441",
                "46874603273202880355557595286",
            ),
            (
                [1, 0, 0, 0],
                "1143099249863497620498025511152",
                "192403743243386739189825947324",
            ),
            (
                [1, 1, 0, 0],
                "812504746193838939778346440609",
                "-163747110397413423717174763646",
            ),
            (
                [0, 0, 1, 1],
                "1185506981100144862795516537562",
                "-65990579324929544724776528061",
            ),
            (
                [1, 1, 1, 1],
                "414889676608946001045348011306",
                "-208437368079341379117801379272",
            ),
        ];
        let s = 90;
        for (half, re_s, im_s) in cases {
            let c = ThetaCharacteristic::new(half);
            let th = theta_constant(&c, &z, s).unwrap();
            let want = Ball::exact(ApproxComplex::new(
                BigInt::from_str(re_s).unwrap(),
                BigInt::from_str(im_s).unwrap(),
                100,
            ));
            let d = th.sub(&want, 110);
            assert!(
                d.mid.mag_upper().le_two_pow(-(s as i64) + 1),
                "characteristic {:?} (index {})",
                half,
                c.index()
            );
        }
    }

    #[test]
    fn odd_characteristic_is_zero() {
        let z = diag_2i_point(100);
        let c = ThetaCharacteristic::new([1, 0, 1, 0]);
        assert!(!c.is_even());
        let th = theta_constant(&c, &z, 60).unwrap();
        assert!(th.mid.is_zero());
        assert!(th.rad.is_zero());
    }

    #[test]
    fn even_thetas_cache_consistency() {
        // The shared-table path and the single-characteristic path must
        // produce identical bit patterns.
        let z = diag_2i_point(120);
        let s = 64;
        let all = even_thetas(&z, s).unwrap();
        let chars = ThetaCharacteristic::even_all();
        for (c, got) in chars.iter().zip(&all) {
            let single = theta_constant(c, &z, s).unwrap();
            assert_eq!(single.mid, got.mid, "characteristic {}", c.index());
        }
    }

    #[test]
    fn u_bound_formula() {
        // y = (1, 1, 0.2), |z3| ≥ 1/4 → u = ⌈3 + 1.8π + 2⌉ = 11.
        let n = 64;
        let mk = |re_num: i64, im_num: i64| {
            Ball::exact(ApproxComplex::new(
                BigInt::from(re_num) << (n - 5),
                BigInt::from(im_num) << (n - 5),
                n,
            ))
        };
        // 0.2 ≈ 6.4/32 not dyadic: use 0.1875 = 6/32 (still y-linear sum
        // 1+1−0.1875: ⌈3+π·1.8125+2⌉ = ⌈10.69⌉ = 11)
        let z = SiegelPoint {
            z1: mk(0, 32),
            z2: mk(0, 32),
            z3: mk(8, 6), // 1/4 + 0.1875i
            prec: n,
        };
        assert_eq!(u_bound(&z).unwrap(), 11);
    }

    #[test]
    fn parallel_sum_is_bit_identical() {
        struct Chunky;
        impl Executor for Chunky {
            fn map<T: Send, F: Fn(usize) -> T + Sync>(&self, n: usize, f: F) -> Vec<T> {
                // reversed evaluation order; results still in index order
                let mut out: Vec<Option<T>> = (0..n).map(|_| None).collect();
                for i in (0..n).rev() {
                    out[i] = Some(f(i));
                }
                out.into_iter().map(Option::unwrap).collect()
            }
        }
        let z = diag_2i_point(120);
        let a = even_thetas_with(&z, 64, &Serial).unwrap();
        let b = even_thetas_with(&z, 64, &Chunky).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.mid, y.mid);
        }
    }
}
