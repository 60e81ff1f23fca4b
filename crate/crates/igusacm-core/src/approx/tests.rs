use super::*;
use alloc::vec::Vec;
use num_bigint::BigInt;
use proptest::prelude::*;
use std::str::FromStr;

type Q = BigRational;

fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Exact complex rational arithmetic: the oracle for add/mul.
fn exact_mul(a: &(Q, Q), b: &(Q, Q)) -> (Q, Q) {
    (
        &a.0 * &b.0 - &a.1 * &b.1,
        &a.0 * &b.1 + &a.1 * &b.0,
    )
}

fn exact_dist_sqr(a: &(Q, Q), b: &(Q, Q)) -> Q {
    let dr = &a.0 - &b.0;
    let di = &a.1 - &b.1;
    &dr * &dr + &di * &di
}

fn two_pow_q(k: i64) -> Q {
    if k >= 0 {
        Q::from_integer(BigInt::from(1) << k as u32)
    } else {
        Q::new(BigInt::from(1), BigInt::from(1) << (-k) as u32)
    }
}

#[test]
fn add_identity() {
    let a = ApproxComplex::from_int(1, 0, 8);
    let z = ApproxComplex::zero(8);
    assert_eq!(add(&a, &z, 8), a);
}

#[test]
fn add_dyadic_exact() {
    let a = ApproxComplex::new(BigInt::from(3), BigInt::from(0), 4);
    let b = ApproxComplex::new(BigInt::from(5), BigInt::from(0), 4);
    let s = add(&a, &b, 4);
    assert_eq!(s, ApproxComplex::new(BigInt::from(8), BigInt::from(0), 4));
}

#[test]
fn mul_i_squared() {
    let i = ApproxComplex::from_int(0, 1, 16);
    let m = mul(&i, &i, 16);
    assert_eq!(m, ApproxComplex::from_int(-1, 0, 16));
}

#[test]
fn mul_conjugate_pair() {
    let a = ApproxComplex::from_int(1, 1, 16);
    let b = ApproxComplex::from_int(1, -1, 16);
    assert_eq!(mul(&a, &b, 16), ApproxComplex::from_int(2, 0, 16));
}

#[test]
fn round_examples() {
    // 7/16 rounds to 1/2 at n=2
    let a = ApproxComplex::new(BigInt::from(7), BigInt::from(0), 4);
    let r = round_to(&a, 2);
    assert_eq!(r, ApproxComplex::new(BigInt::from(2), BigInt::from(0), 2));
    // a value already at precision n is unchanged
    let b = ApproxComplex::new(BigInt::from(13), BigInt::from(-7), 5);
    assert_eq!(round_to(&b, 5), b);
    // ties round half away from zero
    let t = ApproxComplex::new(BigInt::from(3), BigInt::from(-3), 3); // 3/8
    let r = round_to(&t, 2); // 3/8 -> 1/2 (tie between 1/4 and 1/2)
    assert_eq!(r, ApproxComplex::new(BigInt::from(2), BigInt::from(-2), 2));
}

#[test]
fn exp_pi_i_trivial() {
    // E(0) = 1
    let z = ApproxComplex::zero(8);
    let e = exp_pi_i(&z, 64).unwrap();
    let d = e.sub(&ApproxComplex::one(64), 64);
    assert!(d.mag_upper().le_two_pow(-62));
    // E(1) = -1
    let z1 = ApproxComplex::from_int(1, 0, 8);
    let e1 = exp_pi_i(&z1, 64).unwrap();
    let d1 = e1.sub(&ApproxComplex::from_int(-1, 0, 64), 64);
    assert!(d1.mag_upper().le_two_pow(-62));
}

#[test]
fn exp_pi_i_2i_matches_oracle() {
    // e^{-2π} frozen from an independent 400-bit evaluation.
    let want = ApproxComplex::new(
        BigInt::from_str("2482257159511318339143945022014829").unwrap(),
        BigInt::from(0),
        120,
    );
    let z = ApproxComplex::from_int(0, 2, 8);
    let e = exp_pi_i(&z, 80).unwrap();
    let d = e.sub(&want, 120);
    assert!(d.mag_upper().le_two_pow(-80));
}

#[test]
fn exp_pi_i_half_plane_values() {
    // E(1/2 + i/4) = i·e^{-π/4}, frozen at 2^-120.
    let want = ApproxComplex::new(
        BigInt::from(0),
        BigInt::from_str("606045723772322080519485293974893396").unwrap(),
        120,
    );
    let z = ApproxComplex::new(BigInt::from(2), BigInt::from(1), 2);
    let e = exp_pi_i(&z, 100).unwrap();
    assert!(e.sub(&want, 120).mag_upper().le_two_pow(-99));

    // E(-3/8 + 2i), frozen at 2^-140.
    let want2 = ApproxComplex::new(
        BigInt::from_str("996061940091043912986622708329555684816").unwrap(),
        BigInt::from_str("-2404706244731455507617625246097661235843").unwrap(),
        140,
    );
    let z2 = ApproxComplex::new(BigInt::from(-3), BigInt::from(16), 3);
    let e2 = exp_pi_i(&z2, 120).unwrap();
    assert!(e2.sub(&want2, 140).mag_upper().le_two_pow(-118));
}

#[test]
fn sqrt_five_matches_oracle() {
    let x = Ball::exact(ApproxComplex::from_int(5, 0, 8));
    let s = sqrt_ball(&x, 120).unwrap();
    let want = ApproxComplex::new(
        BigInt::from_str("2972244156170875819511122449999190928").unwrap(),
        BigInt::from(0),
        120,
    );
    assert!(s.mid.sub(&want, 120).mag_upper().le_two_pow(-118));
    assert!(s.rad.le_two_pow(-118));
}

#[test]
fn division_roundtrip() {
    // (a/b)*b ≈ a with certified radius.
    let a = Ball::exact(ApproxComplex::from_int(7, -3, 64));
    let b = Ball::exact(ApproxComplex::from_int(2, 5, 64));
    let q = a.div(&b, 64).unwrap();
    let back = q.mul(&b, 64);
    let d = back.sub(&a, 64);
    assert!(d.mag_upper().le_two_pow(-58));
    assert!(!q.rad.is_zero());
}

fn arb_coord() -> impl Strategy<Value = i64> {
    -(1i64 << 40)..(1i64 << 40)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Addition of two values at common precision n is exact.
    #[test]
    fn add_is_exact_at_common_precision(ar in arb_coord(), ai in arb_coord(),
                                         br in arb_coord(), bi in arb_coord()) {
        let n = 64u32;
        let a = ApproxComplex::new(BigInt::from(ar), BigInt::from(ai), n);
        let b = ApproxComplex::new(BigInt::from(br), BigInt::from(bi), n);
        let s = add(&a, &b, n);
        let (sr, si) = s.to_rationals();
        let (ar_q, ai_q) = a.to_rationals();
        let (br_q, bi_q) = b.to_rationals();
        prop_assert_eq!(sr, ar_q + br_q);
        prop_assert_eq!(si, ai_q + bi_q);
    }

    /// |mul(a,b,n) − ab| ≤ 2^{-n} for exact dyadic inputs (the ε(a)=ε(b)=0
    /// case of the multiplication error rule).
    #[test]
    fn mul_error_within_rule(ar in arb_coord(), ai in arb_coord(),
                             br in arb_coord(), bi in arb_coord(),
                             drop in 0u32..12) {
        let n = 64u32;
        let a = ApproxComplex::new(BigInt::from(ar), BigInt::from(ai), n);
        let b = ApproxComplex::new(BigInt::from(br), BigInt::from(bi), n);
        let target = n - drop;
        let m = mul(&a, &b, target);
        let (ar_q, ai_q) = a.to_rationals();
        let (br_q, bi_q) = b.to_rationals();
        let exact = exact_mul(&(ar_q, ai_q), &(br_q, bi_q));
        let (mr, mi) = m.to_rationals();
        let d2 = exact_dist_sqr(&(mr, mi), &exact);
        let lim = two_pow_q(-(target as i64));
        prop_assert!(d2 <= &lim * &lim);
    }

    /// Rounding moves a value by at most 2^{-n-1}·√2.
    #[test]
    fn round_to_distance(ar in arb_coord(), ai in arb_coord(), drop in 0u32..20) {
        let p = 48u32;
        let n = p - drop;
        let a = ApproxComplex::new(BigInt::from(ar), BigInt::from(ai), p);
        let r = round_to(&a, n);
        let d2 = exact_dist_sqr(&{
            let (x, y) = r.to_rationals();
            (x, y)
        }, &{
            let (x, y) = a.to_rationals();
            (x, y)
        });
        // (2^{-n-1}√2)^2 = 2^{-2n-1}
        prop_assert!(d2 <= two_pow_q(-(2 * n as i64) - 1));
    }

    /// Ball multiplication radius is a true error bound vs the rational oracle.
    #[test]
    fn ball_mul_radius_sound(ar in arb_coord(), ai in arb_coord(),
                             br in arb_coord(), bi in arb_coord(),
                             ea in 0i64..1000, eb in 0i64..1000) {
        let n = 64u32;
        // Perturb the "true" values by known amounts (≤ 1000·2^{-50} < 2^{-39})
        // so the radii are exercised while staying inside the declared balls.
        let a_true = (q(ar, 1 << 20) + q(ea, 1 << 50), q(ai, 1 << 20));
        let b_true = (q(br, 1 << 20), q(bi, 1 << 20) + q(eb, 1 << 50));
        let a_mid = ApproxComplex::from_rationals(&q(ar, 1 << 20), &q(ai, 1 << 20), n);
        let b_mid = ApproxComplex::from_rationals(&q(br, 1 << 20), &q(bi, 1 << 20), n);
        let a = Ball::new(a_mid, ErrorBound::two_pow(-39));
        let b = Ball::new(b_mid, ErrorBound::two_pow(-39));
        let prod = a.mul(&b, n);
        let exact = exact_mul(&a_true, &b_true);
        let (pr, pi_) = prod.mid.to_rationals();
        let d2 = exact_dist_sqr(&(pr, pi_), &exact);
        let rad = prod.rad;
        // compare d2 against rad^2 via a dyadic upper rational for rad
        let rad_q = {
            let m = rad.to_scaled_int_ceil(120);
            Q::new(m, BigInt::from(1) << 120u32)
        };
        prop_assert!(d2 <= &rad_q * &rad_q, "d2={d2} rad={rad_q}");
    }
}

#[test]
fn mul_i_pow_cycles() {
    let z = ApproxComplex::from_int(3, 4, 10);
    let mut w = z.clone();
    for _ in 0..4 {
        w = w.mul_i_pow(1);
    }
    assert_eq!(w, z);
    assert_eq!(z.mul_i_pow(2), z.neg());
}

#[test]
fn scaled_sums_are_order_independent() {
    // Exactness of addition makes chunked summation bit-identical.
    let vals: Vec<ApproxComplex> = (0..50)
        .map(|k| ApproxComplex::from_int(k * k - 17, 3 * k, 32))
        .collect();
    let mut forward = ApproxComplex::zero(32);
    for v in &vals {
        forward = add(&forward, v, 32);
    }
    let mut backward = ApproxComplex::zero(32);
    for v in vals.iter().rev() {
        backward = add(&backward, v, 32);
    }
    assert_eq!(forward, backward);
}
