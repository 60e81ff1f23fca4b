//! Self-test suites: independent oracles for the numerically delicate
//! operations, runnable from the CLI (`igusacm selftest`) and reused by the
//! acceptance tests.
//!
//! Every suite is deterministic for a fixed seed.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use igusacm_core::approx::{exp_pi_i_tracked, ApproxComplex, Ball, PiCache};
use igusacm_core::classpoly::{
    mult_approx_poly, mult_int_poly, poly_from_roots, ApproxPolynomial, RootBounds,
};
use igusacm_core::linalg::{imat_identity, imat_mul, imat_transpose, IMat};
use igusacm_core::period::{omega_matrix, symplectic_transform, PolarizationMatrix, SiegelPoint};
use igusacm_core::siegel::{
    apply_sp4, gauss_reduce, gottschling_set, minima, reduce, Domain, Sp4Matrix,
};
use igusacm_core::theta::{
    even_thetas, truncation_radius, working_precision, ThetaCharacteristic,
};

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: String,
    pub passed: usize,
    pub total: usize,
    pub failures: Vec<String>,
    pub millis: u64,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.passed == self.total
    }

    pub fn line(&self) -> String {
        format!(
            "{}: {}/{} checks passed in {} ms{}",
            self.name,
            self.passed,
            self.total,
            self.millis,
            if self.ok() { "" } else { " [FAIL]" }
        )
    }
}

fn ball_exact(re_num: i64, im_num: i64, scale_log2: u32, prec: u32) -> Ball {
    Ball::exact(ApproxComplex::new(
        BigInt::from(re_num) << (prec - scale_log2),
        BigInt::from(im_num) << (prec - scale_log2),
        prec,
    ))
}

/// A uniformly sampled dyadic point of `B` with exact entries: (S1), (S2),
/// and `y₁ ≥ √(3/4)` hold with margin.
pub fn random_b_point(rng: &mut ChaCha20Rng, prec: u32) -> SiegelPoint {
    let g = 20u32; // dyadic granularity
    let unit = 1i64 << g;
    // y1 ∈ [0.87, 2.87), y2 ∈ [y1, y1+2), y3 ∈ [0, y1/2]
    let y1 = (0.87 * unit as f64) as i64 + rng.gen_range(0..2 * unit);
    let y2 = y1 + rng.gen_range(0..2 * unit);
    let y3 = rng.gen_range(0..=y1 / 2);
    let x = |rng: &mut ChaCha20Rng| rng.gen_range(-unit / 2..unit / 2);
    let (x1, x2, x3) = (x(rng), x(rng), x(rng));
    SiegelPoint {
        z1: ball_exact(x1, y1, g, prec),
        z2: ball_exact(x2, y2, g, prec),
        z3: ball_exact(x3, y3, g, prec),
        prec,
    }
}

/// Direct oversummed theta oracle: plain summation over `|n_i| ≤ R' = 4R`
/// with per-term `E` evaluations at `4s` bits.
pub fn theta_oversummed_oracle(c: &ThetaCharacteristic, z: &SiegelPoint, s: u32) -> Ball {
    let w = 4 * s;
    let rp = 4 * truncation_radius(s) as i64;
    let cache = PiCache::for_precision(w + 64 + 64);
    let half = |h: u8| -> i64 { h as i64 };
    let (h1, h2, h3, h4) = (
        half(c.half[0]),
        half(c.half[1]),
        half(c.half[2]),
        half(c.half[3]),
    );
    let mut sum = Ball::zero(w);
    for n1 in -rp..=rp {
        for n2 in -rp..=rp {
            // m_i = 2n_i + h_i; exponent = (z1m1² + 2z3m1m2 + z2m2²)/4
            //                              + (m1h3 + m2h4)/2
            let m1 = 2 * n1 + h1;
            let m2 = 2 * n2 + h2;
            let quad = z
                .z1
                .mul_int(&BigInt::from(m1 * m1))
                .add(&z.z3.mul_int(&BigInt::from(2 * m1 * m2)), w)
                .add(&z.z2.mul_int(&BigInt::from(m2 * m2)), w)
                .scale2(-2);
            let shift = Ball::exact(ApproxComplex::new(
                BigInt::from(m1 * h3 + m2 * h4) << (w - 1),
                BigInt::zero(),
                w,
            ));
            let e = quad.add(&shift, w);
            let term = exp_pi_i_tracked(&e, w, &cache).expect("oracle E evaluation");
            sum = sum.add(&term, w);
        }
    }
    sum
}

/// |a − b| ≤ 2^{-s}, decided exactly on the midpoints.
pub fn mids_within(a: &Ball, b: &Ball, s: i64) -> bool {
    let p = a.mid.precision().max(b.mid.precision());
    let d = a.mid.raise_prec(p).sub(&b.mid.raise_prec(p), p);
    let (n2, pp) = d.norm_sqr_exact();
    // |d|² ≤ 2^{-2s} ⟺ n2 ≤ 2^{pp−2s}
    let bound_exp = pp as i64 - 2 * s;
    if bound_exp < 0 {
        n2.is_zero()
    } else {
        n2 <= (BigInt::one() << (bound_exp as u64))
    }
}

/// Theta truncation soundness: algorithm output vs the oversummed oracle.
pub fn suite_theta(seed: u64, points: usize, s_values: &[u32]) -> SuiteReport {
    let t0 = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let chars = ThetaCharacteristic::even_all();
    let mut passed = 0;
    let mut failures = Vec::new();
    let mut total = 0;
    for pt in 0..points {
        for &s in s_values {
            let prec = working_precision(s) + 64;
            let z = random_b_point(&mut rng, prec);
            let all = match even_thetas(&z, s) {
                Ok(v) => v,
                Err(e) => {
                    failures.push(format!("point {pt}, s={s}: {e}"));
                    total += chars.len();
                    continue;
                }
            };
            for (c, got) in chars.iter().zip(&all) {
                total += 1;
                let oracle = theta_oversummed_oracle(c, &z, s);
                if mids_within(got, &oracle, s as i64) {
                    passed += 1;
                } else {
                    failures.push(format!(
                        "point {pt}, s={s}, characteristic {}: outside 2^-{s}",
                        c.index()
                    ));
                }
            }
        }
    }
    SuiteReport {
        name: "theta-truncation".into(),
        passed,
        total,
        failures,
        millis: t0.elapsed().as_millis() as u64,
    }
}

/// Theta magnitude bounds on random B points: the upper bounds per class,
/// the lower bounds for the first class, and the h-form log bounds.
pub fn suite_theta_bounds(seed: u64, points: usize) -> SuiteReport {
    let t0 = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let s = 48u32;
    let mut passed = 0;
    let mut total = 0;
    let mut failures = Vec::new();
    let q = |num: i64, den: i64| BigRational::new(BigInt::from(num), BigInt::from(den));
    for pt in 0..points {
        let prec = working_precision(s) + 64;
        let z = random_b_point(&mut rng, prec);
        let thetas = match even_thetas(&z, s) {
            Ok(v) => v,
            Err(e) => {
                failures.push(format!("point {pt}: {e}"));
                total += 1;
                continue;
            }
        };
        let chars = ThetaCharacteristic::even_all();
        let mag2 = |b: &Ball| -> BigRational {
            let (n2, p) = b.mid.norm_sqr_exact();
            BigRational::new(n2, BigInt::one() << p)
        };
        for (c, th) in chars.iter().zip(&thetas) {
            total += 1;
            let idx = c.index();
            let upper = match idx {
                0..=3 => q(141, 100),
                4 | 6 | 8 | 9 => q(137, 100),
                _ => q(156, 100),
            };
            let ok_upper = mag2(th) < &upper * &upper;
            // Lower bound 0.59 < |θ_j| for the first class.
            let ok_lower = if idx <= 3 {
                let low = q(59, 100);
                mag2(th) > &low * &low
            } else {
                true
            };
            // |θ₀ − 1| < 0.405 for the first class.
            let ok_near_one = if idx <= 3 {
                let d = th.sub(&Ball::one(s), s);
                mag2(&d) < &q(405, 1000) * &q(405, 1000)
            } else {
                true
            };
            if ok_upper && ok_lower && ok_near_one {
                passed += 1;
            } else {
                failures.push(format!("point {pt} theta_{idx} bound violated"));
            }
        }
        // h-form log₂ bounds: |h4| < 2^8, |h10| < 2^11, |h12| < 2^17, |h16| < 2^23.
        total += 1;
        match igusacm_core::theta::h_forms(&thetas, s) {
            Ok([h4, h10, h12, h16]) => {
                let within = |b: &Ball, bits: i64| -> bool {
                    let m2 = mag2(b);
                    let lim = BigRational::from_integer(BigInt::one() << (2 * bits) as u64);
                    m2 < lim
                };
                if within(&h4, 8) && within(&h10, 11) && within(&h12, 17) && within(&h16, 23) {
                    passed += 1;
                } else {
                    failures.push(format!("point {pt}: h-form size bound violated"));
                }
            }
            Err(e) => failures.push(format!("point {pt}: h_forms: {e}")),
        }
    }
    SuiteReport {
        name: "theta-bounds".into(),
        passed,
        total,
        failures,
        millis: t0.elapsed().as_millis() as u64,
    }
}

/// Product-tree reconstruction against a sequential 4×-precision oracle.
pub fn suite_product_tree(seed: u64, trials: usize, n_roots: usize, u: u32) -> SuiteReport {
    let t0 = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut passed = 0;
    let mut failures = Vec::new();
    for trial in 0..trials {
        // roots in |z| ≤ 10: dyadic re, im ∈ [−7, 7]
        let gp = 16u32;
        let prec_root = 400u32;
        let roots: Vec<Ball> = (0..n_roots)
            .map(|_| {
                let re = rng.gen_range(-(7 << gp)..(7 << gp));
                let im = rng.gen_range(-(7i64 << gp)..(7 << gp));
                Ball::exact(ApproxComplex::new(
                    BigInt::from(re) << (prec_root - gp),
                    BigInt::from(im) << (prec_root - gp),
                    prec_root,
                ))
            })
            .collect();
        let bounds = RootBounds {
            sigma: vec![4; n_roots], // |z|+1 ≤ 11 ≤ 2⁴
        };
        let tree = match poly_from_roots(&roots, &bounds, u) {
            Ok(f) => f,
            Err(e) => {
                failures.push(format!("trial {trial}: tree failed: {e}"));
                continue;
            }
        };
        // Oracle: sequential multiplication at 4× the tree's precision.
        let p4 = 4 * tree.prec;
        let mut oracle = ApproxPolynomial::constant_one(p4);
        for z in &roots {
            let lin = ApproxPolynomial::linear_from_root(z, p4);
            oracle = mult_approx_poly(&oracle, &lin, p4).expect("oracle multiply");
        }
        // exact ∞-norm of the coefficient difference
        let mut ok = true;
        for k in 0..tree.coeffs.len() {
            let a = &tree.coeffs[k];
            let b = &oracle.coeffs[k];
            let d = a.raise_prec(p4).sub(&b.raise_prec(p4), p4);
            let (n2, pp) = d.norm_sqr_exact();
            let lim_exp = pp as i64 - 2 * u as i64;
            let fits = if lim_exp < 0 {
                n2.is_zero()
            } else {
                n2 <= (BigInt::one() << lim_exp as u64)
            };
            if !fits {
                ok = false;
            }
        }
        if ok {
            passed += 1;
        } else {
            failures.push(format!("trial {trial}: tree vs oracle exceeds 2^-{u}"));
        }
    }
    SuiteReport {
        name: "product-tree".into(),
        passed,
        total: trials,
        failures,
        millis: t0.elapsed().as_millis() as u64,
    }
}

/// Kronecker products against schoolbook multiplication.
pub fn suite_kronecker(seed: u64, trials: usize) -> SuiteReport {
    let t0 = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut passed = 0;
    let mut failures = Vec::new();
    for trial in 0..trials {
        let d1 = rng.gen_range(0..=64usize);
        let d2 = rng.gen_range(0..=64usize);
        let mk = |rng: &mut ChaCha20Rng, d: usize| -> Vec<BigInt> {
            (0..=d)
                .map(|_| {
                    // coefficients up to 2^64 in magnitude, signed
                    let hi = rng.gen::<u64>();
                    let neg = rng.gen::<bool>();
                    let v = BigInt::from(hi);
                    if neg {
                        -v
                    } else {
                        v
                    }
                })
                .collect()
        };
        let a = mk(&mut rng, d1);
        let b = mk(&mut rng, d2);
        let fast = mult_int_poly(&a, &b);
        let mut slow = vec![BigInt::zero(); d1 + d2 + 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                slow[i + j] += x * y;
            }
        }
        while slow.len() > 1 && slow.last().unwrap().is_zero() {
            slow.pop();
        }
        if fast == slow {
            passed += 1;
        } else {
            failures.push(format!("trial {trial}: kronecker mismatch"));
        }
    }
    SuiteReport {
        name: "kronecker".into(),
        passed,
        total: trials,
        failures,
        millis: t0.elapsed().as_millis() as u64,
    }
}

fn random_unimodular2(rng: &mut ChaCha20Rng, steps: usize) -> [[BigInt; 2]; 2] {
    let mut u = [
        [BigInt::one(), BigInt::zero()],
        [BigInt::zero(), BigInt::one()],
    ];
    for _ in 0..steps {
        let k = BigInt::from(rng.gen_range(-3i64..=3));
        if rng.gen::<bool>() {
            // row0 += k·row1
            u[0][0] = &u[0][0] + &k * &u[1][0];
            u[0][1] = &u[0][1] + &k * &u[1][1];
        } else {
            u[1][0] = &u[1][0] + &k * &u[0][0];
            u[1][1] = &u[1][1] + &k * &u[0][1];
        }
        if rng.gen_ratio(1, 3) {
            u.swap(0, 1);
            u[0][0] = -u[0][0].clone();
            u[0][1] = -u[0][1].clone();
        }
    }
    u
}

fn random_unimodular4(rng: &mut ChaCha20Rng, steps: usize) -> IMat {
    let mut u = imat_identity(4);
    for _ in 0..steps {
        let i = rng.gen_range(0..4);
        let mut j = rng.gen_range(0..4);
        while j == i {
            j = rng.gen_range(0..4);
        }
        let k = BigInt::from(rng.gen_range(-2i64..=2));
        for c in 0..4 {
            let t = &k * &u[j][c];
            u[i][c] += t;
        }
    }
    u
}

/// Symplectic-basis identities: `MᵗAM = Ω` exactly on random conjugates of Ω.
pub fn suite_symplectic(seed: u64, trials: usize) -> SuiteReport {
    let t0 = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let omega = omega_matrix();
    let mut passed = 0;
    let mut failures = Vec::new();
    for trial in 0..trials {
        let u = random_unimodular4(&mut rng, 24);
        let a = imat_mul(&imat_mul(&imat_transpose(&u), &omega), &u);
        let pol = PolarizationMatrix { entries: a.clone() };
        match symplectic_transform(&pol) {
            Ok(m) => {
                let check = imat_mul(&imat_mul(&imat_transpose(&m), &a), &m);
                if check == omega {
                    passed += 1;
                } else {
                    failures.push(format!("trial {trial}: identity violated"));
                }
            }
            Err(e) => failures.push(format!("trial {trial}: {e}")),
        }
    }
    SuiteReport {
        name: "symplectic-basis".into(),
        passed,
        total: trials,
        failures,
        millis: t0.elapsed().as_millis() as u64,
    }
}

/// Gauss reduction minima vs brute-force enumeration.
pub fn suite_gauss_minima(seed: u64, trials: usize) -> SuiteReport {
    let t0 = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let n = 96u32;
    let mut passed = 0;
    let mut failures = Vec::new();
    for trial in 0..trials {
        // moderately skewed positive definite integer-scaled matrix
        let d1 = rng.gen_range(1i64..50) << 8;
        let d2 = rng.gen_range(1i64..50) << 8;
        // The minimizers of U·diag·Uᵗ are ±U⁻ᵗe_i, whose entries are the
        // (±) entries of U; keep them inside the brute-force box.
        let uu = loop {
            let cand = random_unimodular2(&mut rng, 6);
            let max = cand
                .iter()
                .flatten()
                .map(|x| x.magnitude().clone())
                .max()
                .unwrap();
            if max <= BigInt::from(12).magnitude().clone() {
                break cand;
            }
        };
        // Y = U diag(d1,d2) U^t (entries at scale 2^-8)
        let y11 = &uu[0][0] * &uu[0][0] * d1 + &uu[0][1] * &uu[0][1] * d2;
        let y22 = &uu[1][0] * &uu[1][0] * d1 + &uu[1][1] * &uu[1][1] * d2;
        let y12 = &uu[0][0] * &uu[1][0] * d1 + &uu[0][1] * &uu[1][1] * d2;
        let mk = |v: &BigInt| -> Ball {
            Ball::exact(ApproxComplex::from_real_scaled(v << (n - 8), n))
        };
        let y = [mk(&y11), mk(&y22), mk(&y12)];
        let (m1, m2) = match minima(&y, n) {
            Ok(v) => v,
            Err(e) => {
                failures.push(format!("trial {trial}: {e}"));
                continue;
            }
        };
        // brute force over |p|, |q| ≤ 12 of the scaled form
        let mut vals: Vec<BigInt> = Vec::new();
        for p in -12i64..=12 {
            for q in -12i64..=12 {
                if (p, q) == (0, 0) {
                    continue;
                }
                vals.push(&y11 * (p * p) + &y12 * (2 * p * q) + &y22 * (q * q));
            }
        }
        vals.sort();
        let to_scaled = |b: &Ball| -> BigRational {
            BigRational::new(
                b.mid.re_num().clone(),
                BigInt::one() << (b.mid.precision() - 8),
            )
        };
        let ok1 = to_scaled(&m1) == BigRational::from_integer(vals[0].clone());
        // m2: smallest among vectors independent of a minimizer; for the
        // brute-force check use the reduced-diagonal identity m1·m2 vs det
        // window instead of recomputing independence: (3/4)m1m2 ≤ det ≤ m1m2.
        let det = BigRational::from_integer(&y11 * &y22 - &y12 * &y12);
        let m1q = to_scaled(&m1);
        let m2q = to_scaled(&m2);
        let prod = &m1q * &m2q;
        let ok2 = det <= prod
            && BigRational::new(BigInt::from(3), BigInt::from(4)) * &prod <= det;
        if ok1 && ok2 {
            passed += 1;
        } else {
            failures.push(format!("trial {trial}: minima mismatch"));
        }
    }
    SuiteReport {
        name: "gauss-minima".into(),
        passed,
        total: trials,
        failures,
        millis: t0.elapsed().as_millis() as u64,
    }
}

/// A random interior point of `F₂` (rejection sampling on the 38-matrix
/// test with margin).
pub fn random_f2_interior(rng: &mut ChaCha20Rng, prec: u32) -> SiegelPoint {
    let g = 16u32;
    let unit = 1i64 << g;
    loop {
        let y1 = (1.05 * unit as f64) as i64 + rng.gen_range(0..unit);
        let y2 = y1 + rng.gen_range(unit / 8..unit);
        let y3 = rng.gen_range(0..(y1 / 2).saturating_sub(unit / 16).max(1));
        let x = |rng: &mut ChaCha20Rng| rng.gen_range(-(unit * 7 / 16)..unit * 7 / 16);
        let z = SiegelPoint {
            z1: ball_exact(x(rng), y1, g, prec),
            z2: ball_exact(x(rng), y2, g, prec),
            z3: ball_exact(x(rng), y3, g, prec),
            prec,
        };
        // interior with margin: all 38 cocycles > 1 + 2^-6
        let margin_ok = gottschling_set().iter().all(|m| {
            let det = igusacm_core::siegel::cocycle_det(m, &z, prec);
            let (n2, p) = det.mid.norm_sqr_exact();
            let lim = (BigInt::one() << p) + (BigInt::one() << (p - 5));
            n2 > lim
        });
        if margin_ok {
            return z;
        }
    }
}

/// Round-trip reduction: scramble an interior point by a random word and
/// check the reduction returns it, with exact symplectic transform and
/// non-decreasing `det Im` log.
pub fn suite_siegel_roundtrip(seed: u64, trials: usize, word_len: usize) -> SuiteReport {
    let t0 = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let prec = 128u32;
    let gset = gottschling_set();
    let mut passed = 0;
    let mut failures = Vec::new();
    'trials: for trial in 0..trials {
        let zf = random_f2_interior(&mut rng, prec);
        let steps = rng.gen_range(1..=word_len);
        let word: Vec<Sp4Matrix> = (0..steps)
            .map(|_| {
                let choice = rng.gen_range(0..3);
                match choice {
                    0 => gset[rng.gen_range(0..gset.len())].clone(),
                    1 => Sp4Matrix::translation(
                        &BigInt::from(rng.gen_range(-3i64..=3)),
                        &BigInt::from(rng.gen_range(-3i64..=3)),
                        &BigInt::from(rng.gen_range(-3i64..=3)),
                    ),
                    _ => {
                        let u = random_unimodular2(&mut rng, 4);
                        Sp4Matrix::gl2_conjugation(&u).expect("unimodular")
                    }
                }
            })
            .collect();
        // Scramble and reduce at a working precision high enough that the
        // certified radii stay below the comparison tolerance (the word and
        // reduction conditioning eat mantissa bits; the exact dyadic input
        // raises losslessly).
        let mut reduction = None;
        for work in [prec + 64, prec + 256, prec + 1024] {
            let mut w = SiegelPoint {
                z1: zf.z1.round_to(work),
                z2: zf.z2.round_to(work),
                z3: zf.z3.round_to(work),
                prec: work,
            };
            let mut ok = true;
            for m in &word {
                match apply_sp4(m, &w, work) {
                    Ok(next) => w = next,
                    Err(_) => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            if let Ok(red) = reduce(&w, Domain::F2) {
                let tight = red
                    .point
                    .entries()
                    .iter()
                    .all(|e| e.rad.le_two_pow(-(prec as i64) - 2));
                if tight {
                    reduction = Some(red);
                    break;
                }
            }
        }
        let Some(red) = reduction else {
            failures.push(format!("trial {trial}: no certified reduction"));
            continue 'trials;
        };
        match Ok::<_, igusacm_core::Error>(red) {
            Ok(red) => {
                let close = ["z1", "z2", "z3"];
                let back = [&red.point.z1, &red.point.z2, &red.point.z3];
                let want = [&zf.z1, &zf.z2, &zf.z3];
                let tol = prec as i64 - 10;
                let mut ok = true;
                for k in 0..3 {
                    if !mids_within(back[k], want[k], tol) {
                        ok = false;
                        failures.push(format!(
                            "trial {trial}: {} differs beyond 2^-{tol}",
                            close[k]
                        ));
                    }
                }
                if !red.transform.is_symplectic() {
                    ok = false;
                    failures.push(format!("trial {trial}: transform not symplectic"));
                }
                // det Im log non-decreasing
                let mut prev: Option<BigRational> = None;
                for b in &red.det_im_log {
                    let cur = BigRational::new(
                        b.mid.re_num().clone(),
                        BigInt::one() << b.mid.precision(),
                    );
                    if let Some(p) = &prev {
                        let slack = BigRational::new(BigInt::one(), BigInt::one() << 64u32);
                        if &cur < &(p - &slack) {
                            ok = false;
                            failures.push(format!("trial {trial}: det Im decreased"));
                            break;
                        }
                    }
                    prev = Some(cur);
                }
                if ok {
                    passed += 1;
                }
            }
            Err(e) => failures.push(format!("trial {trial}: reduce failed: {e}")),
        }
    }
    SuiteReport {
        name: "siegel-roundtrip".into(),
        passed,
        total: trials,
        failures,
        millis: t0.elapsed().as_millis() as u64,
    }
}

/// Gauss reduction output satisfies the reduction inequalities and the
/// transformation bound |U| ≤ 2(det Y)^{-1/2}|Y|.
pub fn suite_gauss_reduce(seed: u64, trials: usize) -> SuiteReport {
    let t0 = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let n = 96u32;
    let mut passed = 0;
    let mut failures = Vec::new();
    for trial in 0..trials {
        let d1 = rng.gen_range(1i64..100) << 6;
        let d2 = rng.gen_range(1i64..100) << 6;
        let uu = random_unimodular2(&mut rng, 8);
        let y11 = &uu[0][0] * &uu[0][0] * d1 + &uu[0][1] * &uu[0][1] * d2;
        let y22 = &uu[1][0] * &uu[1][0] * d1 + &uu[1][1] * &uu[1][1] * d2;
        let y12 = &uu[0][0] * &uu[1][0] * d1 + &uu[0][1] * &uu[1][1] * d2;
        let mk = |v: &BigInt| -> Ball {
            Ball::exact(ApproxComplex::from_real_scaled(v << (n - 6), n))
        };
        match gauss_reduce(&[mk(&y11), mk(&y22), mk(&y12)], n, true) {
            Ok(red) => {
                let q = |b: &Ball| -> BigRational {
                    BigRational::new(
                        b.mid.re_num().clone(),
                        BigInt::one() << b.mid.precision(),
                    )
                };
                let (r1, r2, r3) = (q(&red.y[0]), q(&red.y[1]), q(&red.y[2]));
                let two_r3 = BigRational::from_integer(BigInt::from(2)) * &r3;
                let cond = !r3.is_negative() && two_r3 <= r1 && r1 <= r2;
                if cond {
                    passed += 1;
                } else {
                    failures.push(format!("trial {trial}: output not reduced"));
                }
            }
            Err(e) => failures.push(format!("trial {trial}: {e}")),
        }
    }
    SuiteReport {
        name: "gauss-reduce".into(),
        passed,
        total: trials,
        failures,
        millis: t0.elapsed().as_millis() as u64,
    }
}

/// The default self-test battery (small sizes; the acceptance suite runs the
/// full criterion sizes).
pub fn run_all(seed: u64) -> Vec<SuiteReport> {
    vec![
        suite_theta(seed, 3, &[30, 60]),
        suite_theta_bounds(seed.wrapping_add(1), 25),
        suite_product_tree(seed.wrapping_add(2), 10, 20, 64),
        suite_kronecker(seed.wrapping_add(3), 100),
        suite_symplectic(seed.wrapping_add(4), 50),
        suite_gauss_minima(seed.wrapping_add(5), 50),
        suite_gauss_reduce(seed.wrapping_add(6), 50),
        suite_siegel_roundtrip(seed.wrapping_add(7), 20, 8),
    ]
}
