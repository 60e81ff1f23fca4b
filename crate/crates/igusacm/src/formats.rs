//! Output formats: the polynomial text blocks and the audit JSON.
//!
//! Polynomial block (bit-exact):
//! ```text
//! poly H<n> degree=<d> denom=<D_n>
//! coeffs_ascending: c0 c1 ... cd
//! ```
//! with decimal integer coefficients, `H = Σ c_k X^k / D_n` and
//! `gcd(c0..cd, D_n) = 1`.

use std::fmt::Write as _;

use igusacm_core::classpoly::{AuditTrail, ClassPolynomialSet, RationalPoly};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

pub fn poly_block(name: &str, p: &RationalPoly) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "poly {} degree={} denom={}", name, p.degree(), p.den);
    let coeffs: Vec<String> = p.nums.iter().map(|c| c.to_string()).collect();
    let _ = writeln!(s, "coeffs_ascending: {}", coeffs.join(" "));
    s
}

/// All blocks of a run, in fixed order.
pub fn poly_file(set: &ClassPolynomialSet) -> String {
    let mut s = String::new();
    s.push_str(&poly_block("H1", &set.h1));
    s.push_str(&poly_block("H2", &set.h2));
    s.push_str(&poly_block("H3", &set.h3));
    if let Some(h) = &set.hhat2 {
        s.push_str(&poly_block("Hhat2", h));
    }
    if let Some(h) = &set.hhat3 {
        s.push_str(&poly_block("Hhat3", h));
    }
    s
}

/// Parses a polynomial file back (used by tests and downstream tooling).
pub fn parse_poly_file(text: &str) -> Result<Vec<(String, RationalPoly)>, String> {
    let mut out = Vec::new();
    let mut lines = text.lines().peekable();
    while let Some(header) = lines.next() {
        if header.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 4 || parts[0] != "poly" {
            return Err(format!("bad header line: {header}"));
        }
        let name = parts[1].to_string();
        let degree: usize = parts[2]
            .strip_prefix("degree=")
            .ok_or("missing degree=")?
            .parse()
            .map_err(|e| format!("degree: {e}"))?;
        let den: BigInt = parts[3]
            .strip_prefix("denom=")
            .ok_or("missing denom=")?
            .parse()
            .map_err(|e| format!("denom: {e}"))?;
        let coeff_line = lines.next().ok_or("missing coefficient line")?;
        let body = coeff_line
            .strip_prefix("coeffs_ascending: ")
            .ok_or("missing coeffs_ascending prefix")?;
        let nums: Vec<BigInt> = body
            .split_whitespace()
            .map(|t| t.parse::<BigInt>().map_err(|e| format!("coeff: {e}")))
            .collect::<Result<_, _>>()?;
        if nums.len() != degree + 1 {
            return Err(format!(
                "degree {} does not match {} coefficients",
                degree,
                nums.len()
            ));
        }
        out.push((name, RationalPoly { nums, den }));
    }
    Ok(out)
}

/// Audit JSON payload: every budget value used plus stage timings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AuditJson {
    pub delta0: u64,
    pub a: u64,
    pub b: u64,
    pub delta: String,
    pub delta1: String,
    pub galois_type: String,
    pub h: u64,
    pub h0: u64,
    pub h1: u64,
    pub h_prime: u32,
    pub c1: u32,
    pub c2: u32,
    /// Decimal; may be tens of thousands of digits.
    pub d: String,
    pub log2_d: u64,
    pub u: Vec<u32>,
    pub p: u32,
    pub r: Vec<u32>,
    pub ramified_23: bool,
    pub retries: u32,
    pub timings: Timings,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Timings {
    pub total_ms: u64,
    pub threads: usize,
}

pub fn audit_json(audit: &AuditTrail, timings: &Timings) -> AuditJson {
    AuditJson {
        delta0: audit.delta0,
        a: audit.a,
        b: audit.b,
        delta: audit.delta.to_string(),
        delta1: audit.delta1.to_string(),
        galois_type: if audit.galois_cyclic {
            "cyclic".to_string()
        } else {
            "non_galois".to_string()
        },
        h: audit.h,
        h0: audit.h0,
        h1: audit.h1,
        h_prime: audit.h_prime,
        c1: audit.c1,
        c2: audit.c2,
        d: audit.d.to_string(),
        log2_d: igusacm_core::classpoly::log2_ceil_int(&audit.d),
        u: audit.u.clone(),
        p: audit.p,
        r: audit.r.clone(),
        ramified_23: audit.ramified_23,
        retries: audit.retries,
        timings: timings.clone(),
    }
}
