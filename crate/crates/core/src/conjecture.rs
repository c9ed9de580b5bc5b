//! Range scans of `log(x!) > Q(x) > ψ(x)` (claimed for `x > 7`) and of
//! `√(log x!) > |M(x)|` (claimed for `x > 1`), where `Q(x) = Σ_{i≤x} M(⌊x/i⌋)²`.
//!
//! Float margins smaller than the guard band are re-decided exactly: `log(x!) > q`
//! becomes `x! > e^q`, and `q > ψ(x)` becomes `lcm(1..x) < e^q`, both settled with
//! rational enclosures of `e`.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::floorsum::square_msum;
use crate::mertens::{mertens_sieved, MertensLookup, MertensTable};
use crate::numeric::{compare_ln_with_int, NeumaierSum};
use crate::sieves::small_primes;

pub const DEFAULT_SCAN_CEILING: u64 = 5_000_000;
/// Float margins below `GUARD_REL · max(1, log x!)` are re-decided exactly.
pub const GUARD_REL: f64 = 1e-9;
const EXACT_MAX_BITS: u64 = 1 << 14;
const CHUNK: u64 = 4096;

/// `Q(x) = Σ_{i≤x} M(⌊x/i⌋)²`.
pub fn q_sum<M: MertensLookup + ?Sized>(x: u64, m: &M) -> u128 {
    square_msum(x, m)
}

/// `Σ_{i≤x} ln i` with compensated accumulation.
pub fn log_factorial(x: u64) -> f64 {
    let mut s = NeumaierSum::new();
    for i in 2..=x {
        s.add((i as f64).ln());
    }
    s.value()
}

/// Leading Stirling terms `x ln x − x`.
pub fn stirling_leading(x: u64) -> f64 {
    let xf = x as f64;
    xf * xf.ln() - xf
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    /// `log(x!) > Q(x)`, claimed for `x > 7`.
    Upper,
    /// `Q(x) > ψ(x)`, claimed for `x > 7`.
    Lower,
    /// `√(log x!) > |M(x)|`, claimed for `x > 1`.
    SqrtBound,
}

impl Claim {
    pub fn first_claimed(self) -> u64 {
        match self {
            Claim::Upper | Claim::Lower => 8,
            Claim::SqrtBound => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub x: u64,
    pub side: Claim,
    pub lhs: f64,
    pub rhs: f64,
    /// Decided by exact re-evaluation rather than the float margin.
    pub exact: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinMargin {
    pub value: f64,
    pub x: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesRow {
    pub x: u64,
    pub log_factorial: f64,
    pub q_sum: u128,
    pub psi: f64,
    pub mertens: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjectureReport {
    pub range: [u64; 2],
    pub claims: Vec<Claim>,
    /// In-claim `(x, claim)` evaluations.
    pub checked: u64,
    pub violations: Vec<Violation>,
    /// Failures below the claimed range (e.g. `x = 7`), reported but not counted.
    pub out_of_claim: Vec<Violation>,
    pub out_of_claim_checked: u64,
    pub min_margin_upper: Option<MinMargin>,
    pub min_margin_lower: Option<MinMargin>,
    pub min_margin_sqrt_bound: Option<MinMargin>,
    /// Points re-decided exactly because the float margin fell inside the guard band.
    pub exact_rechecks: u64,
    /// `x` where the upper inequality and `Q ≥ M²` held but the square-root bound did not.
    pub implication_failures: u64,
    /// `x` where `Q(x) < M(x)²`.
    pub q_below_m_squared: u64,
    #[serde(skip)]
    pub series: Option<Vec<SeriesRow>>,
}

impl ConjectureReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.implication_failures == 0 && self.q_below_m_squared == 0
    }
}

#[derive(Debug, Clone)]
pub struct ScanOptions {
    pub ceiling: u64,
    pub guard_rel: f64,
    pub keep_series: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self { ceiling: DEFAULT_SCAN_CEILING, guard_rel: GUARD_REL, keep_series: false }
    }
}

/// Exact decision of `ln(n) > q`.
fn ln_exceeds(n: &BigUint, q: u128) -> Option<bool> {
    let q = u64::try_from(q).ok()?;
    compare_ln_with_int(n, q, EXACT_MAX_BITS).map(|o| o == Ordering::Greater)
}

fn factorial(x: u64) -> BigUint {
    (2..=x).fold(BigUint::one(), |a, i| a * BigUint::from(i))
}

fn lcm_upto(x: u64) -> BigUint {
    (2..=x).fold(BigUint::one(), |a, i| a.lcm(&BigUint::from(i)))
}

/// Exact `log(x!) > q`.
pub fn exact_upper(x: u64, q: u128) -> Option<bool> {
    ln_exceeds(&factorial(x), q)
}

/// Exact `q > ψ(x)`, i.e. `ln lcm(1..x) < q`.
pub fn exact_lower(x: u64, q: u128) -> Option<bool> {
    let l = lcm_upto(x);
    let q64 = u64::try_from(q).ok()?;
    compare_ln_with_int(&l, q64, EXACT_MAX_BITS).map(|o| o == Ordering::Less)
}

/// Exact `√(log x!) > |m|`, i.e. `log(x!) > m²`.
pub fn exact_sqrt_bound(x: u64, m: i64) -> Option<bool> {
    ln_exceeds(&factorial(x), (m as i128 * m as i128) as u128)
}

struct PointResult {
    x: u64,
    row: SeriesRow,
    outcomes: Vec<(Claim, bool, f64, f64, f64, bool)>,
    implication_failure: bool,
    q_below: bool,
}

pub fn scan_conjecture1(a: u64, b: u64) -> Result<ConjectureReport> {
    scan(a, b, &[Claim::Upper, Claim::Lower], &ScanOptions::default())
}

pub fn scan_m_bound(a: u64, b: u64) -> Result<ConjectureReport> {
    scan(a, b, &[Claim::SqrtBound], &ScanOptions::default())
}

/// Evaluates every requested claim at each `x ∈ [a, b]`.
pub fn scan(a: u64, b: u64, claims: &[Claim], opts: &ScanOptions) -> Result<ConjectureReport> {
    if a == 0 || b < a {
        return Err(Error::OutOfRange(format!("scan range [{a}, {b}] is empty or starts at 0")));
    }
    if b > opts.ceiling {
        return Err(Error::Capacity {
            what: format!("conjecture scan to {b} (ceiling {})", opts.ceiling),
            needed_bytes: b * 20,
            ceiling_bytes: opts.ceiling * 20,
        });
    }
    let m = mertens_sieved(b)?;
    let (log_fact, psi) = log_tables(b);
    let guard_rel = opts.guard_rel;

    let chunks: Vec<(u64, u64)> =
        (0..).map(|c| (a + c * CHUNK, (a + (c + 1) * CHUNK - 1).min(b))).take_while(|&(lo, _)| lo <= b).collect();
    let results: Vec<Vec<PointResult>> = chunks
        .into_par_iter()
        .map(|(lo, hi)| (lo..=hi).map(|x| evaluate(x, &m, &log_fact, &psi, claims, guard_rel)).collect())
        .collect();

    let mut report = ConjectureReport {
        range: [a, b],
        claims: claims.to_vec(),
        checked: 0,
        violations: Vec::new(),
        out_of_claim: Vec::new(),
        out_of_claim_checked: 0,
        min_margin_upper: None,
        min_margin_lower: None,
        min_margin_sqrt_bound: None,
        exact_rechecks: 0,
        implication_failures: 0,
        q_below_m_squared: 0,
        series: opts.keep_series.then(Vec::new),
    };
    for p in results.into_iter().flatten() {
        if let Some(s) = report.series.as_mut() {
            s.push(p.row);
        }
        report.implication_failures += p.implication_failure as u64;
        report.q_below_m_squared += p.q_below as u64;
        for (claim, holds, lhs, rhs, margin, exact) in p.outcomes {
            report.exact_rechecks += exact as u64;
            let v = Violation { x: p.x, side: claim, lhs, rhs, exact };
            if p.x < claim.first_claimed() {
                report.out_of_claim_checked += 1;
                if !holds {
                    report.out_of_claim.push(v);
                }
                continue;
            }
            report.checked += 1;
            if !holds {
                report.violations.push(v);
            }
            let slot = match claim {
                Claim::Upper => &mut report.min_margin_upper,
                Claim::Lower => &mut report.min_margin_lower,
                Claim::SqrtBound => &mut report.min_margin_sqrt_bound,
            };
            if slot.map_or(true, |m| margin < m.value) {
                *slot = Some(MinMargin { value: margin, x: p.x });
            }
        }
    }
    Ok(report)
}

/// `log(x!)` and `ψ(x)` for `x = 0..=b`, ψ advanced by `Λ(x)` per step.
fn log_tables(b: u64) -> (Vec<f64>, Vec<f64>) {
    let mut base = vec![0u64; b as usize + 1];
    for p in small_primes(b) {
        let mut pk = p;
        loop {
            base[pk as usize] = p;
            match pk.checked_mul(p) {
                Some(v) if v <= b => pk = v,
                _ => break,
            }
        }
    }
    let mut lf = Vec::with_capacity(b as usize + 1);
    let mut psi = Vec::with_capacity(b as usize + 1);
    let (mut acc_lf, mut acc_psi) = (NeumaierSum::new(), NeumaierSum::new());
    for x in 0..=b {
        if x >= 2 {
            acc_lf.add((x as f64).ln());
            if base[x as usize] != 0 {
                acc_psi.add((base[x as usize] as f64).ln());
            }
        }
        lf.push(acc_lf.value());
        psi.push(acc_psi.value());
    }
    (lf, psi)
}

fn evaluate(x: u64, m: &MertensTable, log_fact: &[f64], psi: &[f64], claims: &[Claim], guard_rel: f64) -> PointResult {
    let q = q_sum(x, m);
    let mx = m.get(x);
    let lf = log_fact[x as usize];
    let ps = psi[x as usize];
    let band = guard_rel * lf.max(1.0);
    let mut outcomes = Vec::with_capacity(claims.len());
    for &claim in claims {
        let (lhs, rhs) = match claim {
            Claim::Upper => (lf, q as f64),
            Claim::Lower => (q as f64, ps),
            Claim::SqrtBound => (lf.sqrt(), mx.unsigned_abs() as f64),
        };
        let margin = lhs - rhs;
        let (holds, exact) = if margin.abs() > band {
            (margin > 0.0, false)
        } else {
            let decided = match claim {
                Claim::Upper => exact_upper(x, q),
                Claim::Lower => exact_lower(x, q),
                Claim::SqrtBound => exact_sqrt_bound(x, mx),
            };
            // undecidable at the precision cap counts as a failure
            (decided.unwrap_or(false), true)
        };
        outcomes.push((claim, holds, lhs, rhs, margin, exact));
    }
    let q_below = q < (mx as i128 * mx as i128) as u128;
    let upper_holds = lf - q as f64 > band || (lf - (q as f64)).abs() <= band && exact_upper(x, q) == Some(true);
    let sqrt_holds = lf.sqrt() > mx.unsigned_abs() as f64;
    let implication_failure = x >= 8 && upper_holds && !q_below && !sqrt_holds;
    PointResult {
        x,
        row: SeriesRow { x, log_factorial: lf, q_sum: q, psi: ps, mertens: mx },
        outcomes,
        implication_failure,
        q_below,
    }
}
