//! Cross-validation paths: the relative-quadratic period-matrix constructor
//! against the symplectic pipeline, invariant identities, magnitude bounds,
//! and an analytic class-number oracle for the cyclic fields.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use igusacm_core::approx::{ApproxComplex, Ball};
use igusacm_core::classpoly::{igusa_class_polynomials_serial, PipelineConfig};
use igusacm_core::cmfield::{
    class_group, fundamental_unit, CMField, CMFieldSpec, FieldElement,
};
use igusacm_core::enumerate::enumerate_ppav;
use igusacm_core::period::{
    period_matrix, period_matrix_from_z, polarization_matrix, symplectic_transform, SiegelPoint,
};
use igusacm_core::siegel::{minima, reduce, Domain};
use igusacm_core::theta::{
    even_thetas, h_forms, homogeneous_invariants, igusa_invariants, u_bound,
    working_precision, ThetaCharacteristic,
};

fn zeta5() -> (CMField, FieldElement) {
    let field = CMField::new(CMFieldSpec::new(5, 10, 2).unwrap()).unwrap();
    // ζ₅ = 1 + (3/4)α + (1/8)α² + (1/16)α³ in the power basis.
    let z = FieldElement::from_coords([
        BigRational::one(),
        BigRational::new(BigInt::from(3), BigInt::from(4)),
        BigRational::new(BigInt::one(), BigInt::from(8)),
        BigRational::new(BigInt::one(), BigInt::from(16)),
    ]);
    (field, z)
}

fn ball_q(b: &Ball) -> BigRational {
    BigRational::new(
        b.mid.re_num().clone(),
        BigInt::one() << b.mid.precision(),
    )
}

fn close(a: &Ball, b: &Ball, tol_log2: i64) -> bool {
    let p = a.mid.precision().max(b.mid.precision());
    let d = a.mid.raise_prec(p).sub(&b.mid.raise_prec(p), p);
    d.mag_upper().le_two_pow(tol_log2)
}

/// The two period-matrix constructors land in the same Sp₄(Z) orbit: both
/// reduce into F₂ and the reduced points agree.
#[test]
fn from_z_matches_pipeline_after_reduction() {
    let (field, zeta) = zeta5();
    let n = 128;

    // Pipeline path.
    let cg = class_group(&field.spec, &field.basis).unwrap();
    let units = fundamental_unit(&field.spec, &field.delta).unwrap();
    let triples = enumerate_ppav(&field, &cg, &units).unwrap();
    let t = &triples[0];
    let a = polarization_matrix(t, &field.spec).unwrap();
    let m = symplectic_transform(&a).unwrap();
    let (w, _) = period_matrix(t, &m, n, &field.spec).unwrap();
    let red_pipeline = reduce(&w, Domain::F2).unwrap();

    // Relative-quadratic path with z = ζ₅.
    let (zz, _xi, _cm) = period_matrix_from_z(&zeta, &field, n).unwrap();
    let red_z = reduce(&zz, Domain::F2).unwrap();

    // Same orbit representative (the class is unique, the point interior up
    // to conjugation symmetries of the invariants; compare via the reduced
    // coordinates directly, allowing the x-sign identification z₃ ↦ −z₃
    // when y-parts agree).
    let direct = close(&red_pipeline.point.z1, &red_z.point.z1, -100)
        && close(&red_pipeline.point.z2, &red_z.point.z2, -100)
        && close(&red_pipeline.point.z3, &red_z.point.z3, -100);
    let mirrored = {
        let flip = |b: &Ball| -> Ball {
            Ball::new(
                ApproxComplex::new(
                    -b.mid.re_num().clone(),
                    b.mid.im_num().clone(),
                    b.mid.precision(),
                ),
                b.rad,
            )
        };
        close(&flip(&red_pipeline.point.z1), &red_z.point.z1, -100)
            && close(&flip(&red_pipeline.point.z2), &red_z.point.z2, -100)
            && close(&flip(&red_pipeline.point.z3), &red_z.point.z3, -100)
    };
    assert!(
        direct || mirrored,
        "reduced representatives disagree beyond the mirror identification"
    );
}

/// `det Im Z_z = I(z)·N(𝔟)²` and the window
/// `π²/(6Δ₀) ≤ det Im Z_z ≤ √Δ₁/4` on the minimizing path.
#[test]
fn from_z_determinant_identity_and_window() {
    let (field, zeta) = zeta5();
    let n = 160;
    let (zz, _, _) = period_matrix_from_z(&zeta, &field, n).unwrap();
    let det = zz.det_im();
    let detq = ball_q(&det);

    // I(z) via the embeddings at high precision: product of |Im φ z| over
    // the two non-conjugate embeddings.
    let emb = igusacm_core::cmfield::embeddings(&field.spec, n).unwrap();
    let mut iz = BigRational::one();
    for id in [
        igusacm_core::cmfield::EmbeddingId(0),
        igusacm_core::cmfield::EmbeddingId(1),
    ] {
        let v = emb.apply(id, &zeta);
        let im = BigRational::new(
            v.mid.im_num().clone(),
            BigInt::one() << v.mid.precision(),
        );
        iz *= if im.is_negative() { -im } else { im };
    }
    // N(𝔟) = 1 for 𝔟 = O_{K₀}: det Im Z = I(z).
    let diff = (&detq - &iz).abs();
    assert!(
        diff < BigRational::new(BigInt::one(), BigInt::one() << 100u32),
        "det Im Z != I(z)N(b)^2: {} vs {}",
        detq.to_f64().unwrap(),
        iz.to_f64().unwrap()
    );

    // Window: π²/(6·5) ≤ det ≤ √5/4. (Here det = √5/4 exactly, a boundary
    // case; compare squares with a hair of slack.)
    let lower = BigRational::new(BigInt::from(98696), BigInt::from(10000 * 30)); // < π²/30
    assert!(detq > lower);
    let det_sq = &detq * &detq;
    let upper_sq = BigRational::new(BigInt::from(5), BigInt::from(16));
    let slack = BigRational::new(BigInt::one(), BigInt::one() << 90u32);
    assert!(det_sq <= upper_sq + slack);
}

/// Reduced CM period matrices satisfy the m₂ bound, and the off-diagonal
/// never vanishes (simple abelian surfaces).
#[test]
fn reduced_cm_point_invariants() {
    for (d0, a, b) in [(5u64, 10u64, 2u64), (8, 5, 1)] {
        let field = CMField::new(CMFieldSpec::new(d0, a, b).unwrap()).unwrap();
        let cg = class_group(&field.spec, &field.basis).unwrap();
        let units = fundamental_unit(&field.spec, &field.delta).unwrap();
        for t in enumerate_ppav(&field, &cg, &units).unwrap() {
            let am = polarization_matrix(&t, &field.spec).unwrap();
            let m = symplectic_transform(&am).unwrap();
            let (w, _) = period_matrix(&t, &m, 160, &field.spec).unwrap();
            let red = reduce(&w, Domain::F2).unwrap();
            assert!(red.point.z3.mag_lower().is_some(), "z3 = 0 on a CM point");
            let (y1, y2, y3) = red.point.imag_parts();
            let (_, m2) = minima(&[y1, y2, y3], 160).unwrap();
            let m2q = ball_q(&m2);
            let m2sq = &m2q * &m2q;
            let d0q = BigInt::from(d0);
            // m2² ≤ max{6Δ₀³/(4π²), 4Δ₁Δ₀/81}; π² > 9.8696.
            let a_sq = BigRational::new(
                BigInt::from(6) * &d0q * &d0q * &d0q * BigInt::from(10_000_000),
                BigInt::from(4) * BigInt::from(98_696_044u64),
            );
            let b_sq = BigRational::new(
                BigInt::from(4) * &field.delta1 * &d0q,
                BigInt::from(81),
            );
            assert!(
                m2sq <= a_sq.clone().max(b_sq),
                "m2 bound violated for ({d0},{a},{b})"
            );
        }
    }
}

/// Identity web between the absolute and homogeneous invariants at a random
/// point of B, plus the u-driven magnitude bounds.
#[test]
fn invariant_identities_and_bounds() {
    let n = 400u32;
    // A fixed rational point of B.
    let mk = |re: i64, im: i64| {
        Ball::exact(ApproxComplex::new(
            BigInt::from(re) << (n - 5),
            BigInt::from(im) << (n - 5),
            n,
        ))
    };
    let z = SiegelPoint {
        z1: mk(7, 31),  // 7/32 + (31/32) i
        z2: mk(-5, 44), // -5/32 + (44/32) i
        z3: mk(3, 9),   // 3/32 + (9/32) i
        prec: n,
    };
    let u = u_bound(&z).unwrap();
    let s = 220u32;
    assert!(s > 13 + 2 * u);
    let thetas = even_thetas(&z, s).unwrap();
    let inv = igusa_invariants(&thetas, u, s).unwrap();
    let [i2h, i4h, i6h, i10h] = homogeneous_invariants(&thetas, s).unwrap();

    // i1 = I4·I6/I10, i3 = I4⁵/I10², i4 = I2⁵/I10.
    let tol = -(s as i64) + 60;
    let i10_inv = i10h.inv(s).unwrap();
    let i1_alt = i4h.mul(&i6h, s).mul(&i10_inv, s);
    assert!(close(&inv.i1, &i1_alt, tol), "i1 identity");
    let i4_5 = {
        let sq = i4h.mul(&i4h, s);
        sq.mul(&sq, s).mul(&i4h, s)
    };
    let i3_alt = i4_5.mul(&i10_inv, s).mul(&i10_inv, s);
    assert!(close(&inv.i3, &i3_alt, tol), "i3 identity");
    let i2_5 = {
        let sq = i2h.mul(&i2h, s);
        sq.mul(&sq, s).mul(&i2h, s)
    };
    let i4_alt = i2_5.mul(&i10_inv, s);
    assert!(close(&inv.i4, &i4_alt, tol), "i4 identity");

    // |h10| > 2^{-u} (the bound that justifies u as the precision driver).
    let [.., h10, _, _] = {
        let f = h_forms(&thetas, s).unwrap();
        [f[0].clone(), f[1].clone(), f[2].clone(), f[3].clone()]
    };
    let h10_mag = ball_q(&{
        let (n2, p) = h10.mid.norm_sqr_exact();
        Ball::exact(ApproxComplex::from_real_scaled(n2, p))
    });
    let lim = BigRational::new(BigInt::one(), BigInt::one() << (2 * u as u64));
    assert!(h10_mag > &lim * BigRational::one(), "|h10|^2 <= 2^-2u");

    // |i_n| < 2^{46 + 2π(y1+y2−y3) + 2max(2, −log2|z3|)} ≤ 2^{40+2u}.
    for b in [&inv.i1, &inv.i2, &inv.i3] {
        let (n2, p) = b.mid.norm_sqr_exact();
        let bits = n2.bits() as i64 - p as i64;
        assert!(bits / 2 < 40 + 2 * u as i64, "invariant magnitude bound");
    }

    // Self-convergence: doubling s leaves the midpoints consistent well
    // below the coarser certified error.
    let s2 = 2 * s;
    let thetas2 = even_thetas(&z, s2).unwrap();
    let inv2 = igusa_invariants(&thetas2, u, s2).unwrap();
    assert!(close(&inv.i1, &inv2.i1, -(s as i64) + 110));
    assert!(close(&inv.i2, &inv2.i2, -(s as i64) + 110));
    assert!(close(&inv.i3, &inv2.i3, -(s as i64) + 110));
}

/// Ratio bounds of the theta classes against their leading terms.
#[test]
fn theta_ratio_bounds() {
    let n = 300u32;
    let mk = |re: i64, im: i64| {
        Ball::exact(ApproxComplex::new(
            BigInt::from(re) << (n - 5),
            BigInt::from(im) << (n - 5),
            n,
        ))
    };
    // a handful of fixed B points
    let pts = [
        [(7, 31), (-5, 44), (3, 9)],
        [(0, 30), (0, 60), (0, 14)],
        [(-13, 36), (11, 52), (5, 11)],
    ];
    let s = 120u32;
    for p in pts {
        let z = SiegelPoint {
            z1: mk(p[0].0, p[0].1),
            z2: mk(p[1].0, p[1].1),
            z3: mk(p[2].0, p[2].1),
            prec: n,
        };
        let thetas = even_thetas(&z, s).unwrap();
        let chars = ThetaCharacteristic::even_all();
        let cache = igusacm_core::approx::PiCache::for_precision(s + 200);
        let e = |b: &Ball| -> Ball {
            igusacm_core::approx::exp_pi_i_tracked(&b.scale2(-2), s + 64, &cache).unwrap()
        };
        let two = Ball::exact(ApproxComplex::from_int(2, 0, s));
        let lead_14 = two.mul(&e(&z.z1), s); // 2E(z1/4)
        let lead_89 = two.mul(&e(&z.z2), s); // 2E(z2/4)
        let q348 = BigRational::new(BigInt::from(348), BigInt::from(1000));
        let mag = |b: &Ball| -> BigRational {
            let (n2, pp) = b.mid.norm_sqr_exact();
            BigRational::new(n2, BigInt::one() << pp)
        };
        for (c, th) in chars.iter().zip(&thetas) {
            match c.index() {
                4 | 6 => {
                    let r = th.div(&lead_14, s).unwrap();
                    let d = r.sub(&Ball::one(s), s);
                    assert!(mag(&d) < &q348 * &q348, "ratio bound θ_{}", c.index());
                }
                8 | 9 => {
                    let r = th.div(&lead_89, s).unwrap();
                    let d = r.sub(&Ball::one(s), s);
                    assert!(mag(&d) < &q348 * &q348, "ratio bound θ_{}", c.index());
                }
                _ => {}
            }
        }
    }
}

/// Interpolation consistency: with H₁ squarefree,
/// `i_n = Ĥ_n(i₁)/H₁'(i₁)` at every computed class.
#[test]
fn interpolation_consistency() {
    let spec = CMFieldSpec::new(5, 5, 1).unwrap();
    let config = PipelineConfig {
        c1: 1,
        c2: 1,
        emit_hhat: true,
        ..PipelineConfig::default()
    };
    let out = igusa_class_polynomials_serial(&spec, &config).unwrap();
    assert_eq!(out.audit.h_prime, 2);
    let h1 = &out.h1;
    let hhat2 = out.hhat2.as_ref().unwrap();
    let hhat3 = out.hhat3.as_ref().unwrap();

    // Roots of H1 = X² + pX + q over the rationals are not rational here;
    // instead verify the interpolation identity at the polynomial level:
    // for monic squarefree H1 with roots r_i, Σ_i (X − r_other) = H1', so
    // Ĥ_n ≡ Σ i_n(C)·(X − i1(C')) must satisfy deg Ĥ_n < deg H1 and the
    // exact resultant identity Res(H1, Ĥ_n − y·H1') as a polynomial in y
    // vanishing at y = i_n(C)... at desk scale, check the algebra that is
    // exactly testable: degree and the trace identity
    // Ĥ_n = Σ_C i_n(C)·(X − i1(C')) gives
    //   coeff_1(Ĥ_n) = Σ i_n(C), coeff_0(Ĥ_n) = −Σ i_n(C)·i1(C≠).
    // The sum Σ i_n(C) equals the degree-1 trace of H_n (up to sign), which
    // is rationally available: Σ i_n(C) = −coeff_{h'−1}(H_n).
    assert!(hhat2.degree() < h1.degree() || hhat2.nums.iter().all(|c| c.is_zero()));
    assert!(hhat3.degree() < h1.degree() || hhat3.nums.iter().all(|c| c.is_zero()));
    let lead = |p: &igusacm_core::classpoly::RationalPoly| -> BigRational {
        BigRational::new(p.nums[p.degree()].clone(), p.den.clone())
    };
    let trace_from_h = |p: &igusacm_core::classpoly::RationalPoly| -> BigRational {
        -BigRational::new(p.nums[p.degree() - 1].clone(), p.den.clone())
    };
    // leading coefficient of Ĥ_n is Σ_C i_n(C)
    assert_eq!(lead(hhat2), trace_from_h(&out.h2), "hhat2 trace identity");
    assert_eq!(lead(hhat3), trace_from_h(&out.h3), "hhat3 trace identity");
}

// ---------------------------------------------------------------------------
// Analytic class-number oracle for the cyclic fields.

/// Multiplicative characters of (Z/f)* with values in μ₄, by brute-force
/// basis decomposition of the unit group.
struct CharTable {
    f: u64,
    /// value index in {0..3} representing i^k, u64::MAX for non-units
    table: Vec<u64>,
}

fn unit_group_basis(f: u64) -> Vec<(u64, u64)> {
    // returns (generator, order) pairs whose direct span is the group
    let units: Vec<u64> = (1..f).filter(|&a| num_integer::gcd(a, f) == 1).collect();
    let mul = |a: u64, b: u64| a * b % f;
    let order = |a: u64| -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != 1 {
            x = mul(x, a);
            k += 1;
        }
        k
    };
    let mut basis: Vec<(u64, u64)> = Vec::new();
    let mut span: std::collections::BTreeSet<u64> = [1u64].into();
    while span.len() < units.len() {
        // element of maximal order among those not in the span
        let g = *units
            .iter()
            .filter(|u| !span.contains(u))
            .max_by_key(|&&u| order(u))
            .unwrap();
        let go = order(g);
        basis.push((g, go));
        // close the span
        let mut next = span.clone();
        for &s in &span {
            let mut p = s;
            for _ in 0..go {
                p = mul(p, g);
                next.insert(p);
            }
        }
        span = next;
    }
    basis
}

fn characters_mod(f: u64) -> Vec<CharTable> {
    let basis = unit_group_basis(f);
    // discrete log of each unit w.r.t. the basis by brute force
    let units: Vec<u64> = (1..f).filter(|&a| num_integer::gcd(a, f) == 1).collect();
    let mul = |a: u64, b: u64| a * b % f;
    let mut dlogs: std::collections::BTreeMap<u64, Vec<u64>> = std::collections::BTreeMap::new();
    let mut stack = vec![(1u64, vec![0u64; basis.len()])];
    while let Some((v, exps)) = stack.pop() {
        if dlogs.contains_key(&v) {
            continue;
        }
        dlogs.insert(v, exps.clone());
        for (i, &(g, go)) in basis.iter().enumerate() {
            let mut e = exps.clone();
            e[i] = (e[i] + 1) % go;
            stack.push((mul(v, g), e));
        }
    }
    assert_eq!(dlogs.len(), units.len());
    // characters with values in μ₄: assignment k_i with k_i·(4/gcd(order,4))
    // giving χ(g_i) = i^{k_i}, requiring χ(g_i)^{order_i} = 1.
    let mut out = Vec::new();
    let m = basis.len();
    let mut assign = vec![0u64; m];
    loop {
        // validity: (k_i · order_i) ≡ 0 mod 4
        if basis
            .iter()
            .zip(&assign)
            .all(|(&(_, o), &k)| (k * o) % 4 == 0)
        {
            let mut table = vec![u64::MAX; f as usize];
            for (&u, exps) in &dlogs {
                let k: u64 = exps
                    .iter()
                    .zip(&assign)
                    .map(|(&e, &kk)| e * kk)
                    .sum::<u64>()
                    % 4;
                table[u as usize] = k;
            }
            out.push(CharTable { f, table });
        }
        // increment the odometer
        let mut i = 0;
        loop {
            if i == m {
                return out;
            }
            assign[i] += 1;
            if assign[i] == 4 {
                assign[i] = 0;
                i += 1;
            } else {
                break;
            }
        }
    }
}

fn kronecker(mut a: i64, mut n: i64) -> i64 {
    // standard Kronecker symbol
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    let mut result = 1;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    while n % 2 == 0 {
        n /= 2;
        match a.rem_euclid(8) {
            1 | 7 => {}
            3 | 5 => result = -result,
            _ => return 0,
        }
    }
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            match n.rem_euclid(8) {
                1 | 7 => {}
                _ => result = -result,
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.rem_euclid(4) == 3 && n.rem_euclid(4) == 3 {
            result = -result;
        }
        a = a.rem_euclid(n);
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Analytic oracle: for a cyclic quartic CM field of conductor
/// `f = √(Δ/Δ0)`, `h = h₀·w·|B₁,χ|²/4` with `χ` the odd quartic character
/// with `χ² = (Δ₀|·)` matching the field's splitting data.
fn analytic_class_number(field: &CMField) -> u64 {
    let f2 = (&field.delta / BigInt::from(field.spec.delta0))
        .to_u64()
        .unwrap();
    let f = {
        let r = (f2 as f64).sqrt() as u64;
        assert_eq!(r * r, f2, "conductor must be sqrt(Delta/Delta0)");
        r
    };
    let chars = characters_mod(f);
    // Candidate quartic odd characters with the right square.
    let mut candidates: Vec<&CharTable> = chars
        .iter()
        .filter(|c| {
            let odd = c.table[(f - 1) as usize] == 2; // χ(−1) = −1
            if !odd {
                return false;
            }
            let order4 = c.table.iter().any(|&k| k == 1 || k == 3);
            if !order4 {
                return false;
            }
            // χ² = Kronecker(Δ₀|·) on all units
            (1..f).all(|a| {
                if num_integer::gcd(a, f) != 1 {
                    return true;
                }
                let sq = match c.table[a as usize] {
                    0 | 2 => 1i64,
                    _ => -1,
                };
                sq == kronecker(field.spec.delta0 as i64, a as i64)
            })
        })
        .collect();
    // Disambiguate via splitting: p splits completely iff χ(p) = 1
    // (p ∤ f, and the quartic has 4 roots mod p).
    let spec = &field.spec;
    let n0 = spec.norm_const();
    candidates.retain(|c| {
        let mut checked = 0;
        let mut p = 2u64;
        while checked < 12 {
            p += 1;
            if !(2..p).all(|d| d * d > p || p % d != 0) {
                continue;
            }
            if f % p == 0 || (&field.delta % BigInt::from(p)).is_zero() {
                continue;
            }
            checked += 1;
            let roots = {
                let a2 = (2 * spec.a) % p;
                let cc = num_integer::Integer::mod_floor(&n0, &BigInt::from(p))
                    .to_u64()
                    .unwrap();
                (0..p)
                    .filter(|&x| {
                        let x2 = x * x % p;
                        (x2 * x2 % p + a2 * x2 % p + cc) % p == 0
                    })
                    .count()
            };
            let chi_one = c.table[(p % f) as usize] == 0;
            if chi_one != (roots == 4) {
                return false;
            }
        }
        true
    });
    assert!(
        !candidates.is_empty(),
        "no quartic character matches the splitting data"
    );
    let chi = candidates[0];
    // B₁,χ = (1/f)·Σ χ(a)·a in Z[i]/f.
    let (mut x, mut y) = (BigInt::zero(), BigInt::zero());
    for a in 1..f {
        match chi.table[a as usize] {
            0 => x += a,
            1 => y += a,
            2 => x -= a,
            3 => y -= a,
            _ => {}
        }
    }
    // h⁻ = w·|B₁|²/4 = w·(x²+y²)/(4f²)
    let w = if field.delta == BigInt::from(125) { 10u64 } else { 2 };
    let num = (&x * &x + &y * &y) * BigInt::from(w);
    let den = BigInt::from(4u64) * BigInt::from(f) * BigInt::from(f);
    let (q, r) = num_integer::Integer::div_rem(&num, &den);
    assert!(r.is_zero(), "analytic h⁻ is not integral");
    let h_minus = q.to_u64().unwrap();
    let h0 = igusacm_core::cmfield::real_class_number(spec.delta0).unwrap();
    h_minus * h0
}

#[test]
fn class_numbers_match_analytic_oracle() {
    for (d0, a, b) in [(5u64, 10u64, 2u64), (8, 4, 1), (5, 5, 1), (13, 13, 3)] {
        let field = CMField::new(CMFieldSpec::new(d0, a, b).unwrap()).unwrap();
        assert_eq!(field.galois, igusacm_core::cmfield::GaloisType::Cyclic);
        let cg = class_group(&field.spec, &field.basis).unwrap();
        let analytic = analytic_class_number(&field);
        assert_eq!(
            cg.h, analytic,
            "class number mismatch for ({d0},{a},{b}): brute force {} vs analytic {}",
            cg.h, analytic
        );
    }
}

/// Boundary orbit sanity on a CM point: the reduced representative's orbit
/// has the stabilizer-predicted size and contains the point itself.
#[test]
fn boundary_orbit_on_cm_point() {
    let (field, _) = zeta5();
    let cg = class_group(&field.spec, &field.basis).unwrap();
    let units = fundamental_unit(&field.spec, &field.delta).unwrap();
    let triples = enumerate_ppav(&field, &cg, &units).unwrap();
    let t = &triples[0];
    let a = polarization_matrix(t, &field.spec).unwrap();
    let m = symplectic_transform(&a).unwrap();
    let (w, _) = period_matrix(t, &m, 128, &field.spec).unwrap();
    let red = reduce(&w, Domain::F2).unwrap();
    let orbit = igusacm_core::siegel::boundary_orbit(&red.point).unwrap();
    assert!(!orbit.is_empty());
    assert!(orbit
        .iter()
        .any(|p| close(&p.z1, &red.point.z1, -100)
            && close(&p.z2, &red.point.z2, -100)
            && close(&p.z3, &red.point.z3, -100)));
}

/// Working precision formula examples.
#[test]
fn theta_working_precision_values() {
    // t = s + 1 + ⌊2 log₂(2R+1)⌋
    assert_eq!(working_precision(30), 30 + 1 + 6); // R = 4: 2R+1 = 9, ⌊2·log₂9⌋ = 6
    assert_eq!(working_precision(60), 60 + 1 + 7); // R = 6: 13: ⌊2·3.70⌋ = 7
}
