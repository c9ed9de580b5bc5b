//! Checks of the divisor-sum identities built on `M(⌊x/i⌋)`.
//!
//! Every identity below has the shape `Σ_{i≤x} M(⌊x/i⌋)·f(i) = Σ_{n≤x} g(n)` with
//! `f = g * 1` (Dirichlet convolution). The left side is evaluated block-wise through
//! [`weighted_msum`], the right side from an independent prefix table.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::floorsum::{square_msum, weighted_msum, BlockIter, Number};
use crate::mertens::{MertensLookup, MertensTable};
use crate::numeric::{E30, PI2_HI_E30, PI2_LO_E30, PI4_LO_E30};
use crate::sieves::{jordan_table, ArithFunction, PrefixSums, SieveTable, ValueKind};

/// Relative tolerance for float-mode identities.
pub const FLOAT_TOL: f64 = 1e-9;
/// Default ceiling for the exact product forms of ψ and T2.
pub const DEFAULT_EXACT_CAP: u64 = 300;
/// Largest `x` for which exact rational prefix tables (T10) are built.
pub const RATIONAL_CAP: u64 = 20_000;
/// Default relative band for asymptotic ratio checks.
pub const DEFAULT_RATIO_BAND: f64 = 0.01;

pub const ZETA3: f64 = 1.20205690315959;
pub const ZETA4: f64 = 1.08232323371114;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IdentityId {
    Lehman,
    LehmanGen(u64),
    T1,
    T2,
    T3(u32),
    T4(u32),
    T5,
    T6,
    T7,
    T8,
    T9,
    T10,
    Psi,
    PsiExact,
    T2Exact,
    Schwarz,
    WalfiszRatio,
    JordanRatio(u32),
    SquarefreeRatio,
    /// `√Q(x)/x` against `3√3/π`.
    SchwarzRatio,
    /// `√Q(x)/x > 3√3/π·((1+1/x)(1+1/2x))^{-1/2}` as a certified exact inequality.
    SchwarzLimit,
    /// `√Q(x) > (3/π²)x² / √(x(x+1)(2x+1)/6)` via the Schwarz chain.
    SchwarzRoute,
    TMatrixTotals,
    UMatrixTotals,
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use IdentityId::*;
        match self {
            Lehman => write!(f, "LEHMAN"),
            LehmanGen(n) => write!(f, "LEHMAN_GEN({n})"),
            T1 => write!(f, "T1"),
            T2 => write!(f, "T2"),
            T3(k) => write!(f, "T3(k={k})"),
            T4(k) => write!(f, "T4(k={k})"),
            T5 => write!(f, "T5"),
            T6 => write!(f, "T6"),
            T7 => write!(f, "T7"),
            T8 => write!(f, "T8"),
            T9 => write!(f, "T9"),
            T10 => write!(f, "T10"),
            Psi => write!(f, "PSI"),
            PsiExact => write!(f, "PSI_EXACT"),
            T2Exact => write!(f, "T2_EXACT"),
            Schwarz => write!(f, "SCHWARZ"),
            WalfiszRatio => write!(f, "WALFISZ_RATIO"),
            JordanRatio(k) => write!(f, "JORDAN_RATIO(k={k})"),
            SquarefreeRatio => write!(f, "SQUAREFREE_RATIO"),
            SchwarzRatio => write!(f, "SCHWARZ_RATIO"),
            SchwarzLimit => write!(f, "SCHWARZ_LIMIT"),
            SchwarzRoute => write!(f, "SCHWARZ_ROUTE"),
            TMatrixTotals => write!(f, "T_MATRIX_TOTALS"),
            UMatrixTotals => write!(f, "U_MATRIX_TOTALS"),
        }
    }
}

impl IdentityId {
    /// The ten divisor-sum theorems for a given list of `k`.
    pub fn theorems(ks: &[u32]) -> Vec<IdentityId> {
        use IdentityId::*;
        let mut out = vec![T1, T2];
        out.extend(ks.iter().map(|&k| T3(k)));
        out.extend(ks.iter().map(|&k| T4(k)));
        out.extend([T5, T6, T7, T8, T9, T10]);
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    ExactInteger,
    ExactRational,
    /// Products of integers compared as exact rationals.
    ExactProduct,
    /// Logarithmic identity compared through prime exponent vectors.
    ExactFactored,
    /// Exact (or certified) inequality `lhs ≥ rhs` / `lhs > rhs`.
    ExactInequality,
    Float,
    Ratio,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Mode::ExactInteger => "exact-integer",
            Mode::ExactRational => "exact-rational",
            Mode::ExactProduct => "exact-product",
            Mode::ExactFactored => "exact-factored",
            Mode::ExactInequality => "exact-inequality",
            Mode::Float => "float",
            Mode::Ratio => "ratio",
        };
        f.write_str(s)
    }
}

/// One side of a report.
#[derive(Debug, Clone, PartialEq)]
pub enum Side {
    Number(Number),
    /// Prime exponent vector `Π p^e`.
    Factored(BTreeMap<u64, i64>),
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Number(n) => write!(f, "{n}"),
            Side::Factored(m) => {
                if m.is_empty() {
                    return f.write_str("1");
                }
                let parts: Vec<String> = m.iter().map(|(p, e)| format!("{p}^{e}")).collect();
                f.write_str(&parts.join("*"))
            }
        }
    }
}

impl From<Number> for Side {
    fn from(n: Number) -> Self {
        Side::Number(n)
    }
}

#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub id: IdentityId,
    pub x: u64,
    pub mode: Mode,
    pub lhs: Side,
    pub rhs: Side,
    /// `|lhs − rhs|` (float view); for inequalities the signed slack `lhs − rhs`.
    pub margin: f64,
    pub pass: bool,
}

impl IdentityReport {
    fn exact(id: IdentityId, x: u64, lhs: Number, rhs: Number) -> Self {
        let mode = if matches!(lhs, Number::Rational(_)) || matches!(rhs, Number::Rational(_)) {
            Mode::ExactRational
        } else {
            Mode::ExactInteger
        };
        let pass = match (&lhs, &rhs) {
            (Number::Integer(a), Number::Integer(b)) => a == b,
            (Number::Rational(a), Number::Rational(b)) => a == b,
            (Number::Rational(a), Number::Integer(b)) | (Number::Integer(b), Number::Rational(a)) => {
                *a == BigRational::from_integer(b.clone())
            }
            _ => false,
        };
        let margin = if pass { 0.0 } else { (lhs.to_f64() - rhs.to_f64()).abs() };
        Self { id, x, mode, lhs: lhs.into(), rhs: rhs.into(), margin, pass }
    }

    fn float(id: IdentityId, x: u64, lhs: f64, rhs: f64) -> Self {
        let margin = (lhs - rhs).abs();
        let pass = margin <= FLOAT_TOL * rhs.abs().max(1.0);
        Self { id, x, mode: Mode::Float, lhs: Number::Float(lhs).into(), rhs: Number::Float(rhs).into(), margin, pass }
    }

    fn ratio(id: IdentityId, x: u64, ratio: f64, target: f64, band: f64) -> Self {
        let margin = (ratio - target).abs();
        Self {
            id,
            x,
            mode: Mode::Ratio,
            lhs: Number::Float(ratio).into(),
            rhs: Number::Float(target).into(),
            margin,
            pass: margin <= band * target.abs(),
        }
    }
}

impl Serialize for IdentityReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("IdentityReport", 7)?;
        st.serialize_field("id", &self.id.to_string())?;
        st.serialize_field("x", &self.x)?;
        st.serialize_field("mode", &self.mode.to_string())?;
        for (name, side) in [("lhs", &self.lhs), ("rhs", &self.rhs)] {
            match side {
                Side::Number(Number::Float(v)) => st.serialize_field(name, v)?,
                other => st.serialize_field(name, &other.to_string())?,
            }
        }
        st.serialize_field("margin", &self.margin)?;
        st.serialize_field("pass", &self.pass)?;
        st.end()
    }
}

/// `Σ_{i≥1} M(⌊x/(i·n)⌋)`, which must equal 1 for `1 ≤ n ≤ x`.
pub fn verify_lehman<M: MertensLookup + ?Sized>(x: u64, n: u64, m: &M) -> Result<IdentityReport> {
    if n == 0 || n > x {
        return Err(Error::OutOfRange(format!("Lehman check needs 1 ≤ n ≤ x, got n={n}, x={x}")));
    }
    let mut total = 0i64;
    let mut i = 1u64;
    while i * n <= x {
        let q = x / (i * n);
        let hi = x / (n * q);
        total += (hi - i + 1) as i64 * m.mertens(q);
        i = hi + 1;
    }
    let id = if n == 1 { IdentityId::Lehman } else { IdentityId::LehmanGen(n) };
    Ok(IdentityReport::exact(id, x, Number::Integer(total.into()), Number::Integer(1.into())))
}

/// `Q(x)·x(x+1)(2x+1) ≥ 6·A(x)²` with `Q(x) = Σ M(⌊x/i⌋)²`, `A(x) = Σ φ(i)`.
pub fn verify_schwarz(x: u64, q: u128, a: u128) -> IdentityReport {
    let s = BigInt::from(x) * BigInt::from(x + 1) * BigInt::from(2 * x + 1);
    let lhs = BigInt::from(q) * s;
    let rhs = BigInt::from(6u32) * BigInt::from(a) * BigInt::from(a);
    let pass = lhs >= rhs;
    let margin = (&lhs - &rhs).to_f64().unwrap_or(f64::NAN);
    IdentityReport {
        id: IdentityId::Schwarz,
        x,
        mode: Mode::ExactInequality,
        lhs: Number::Integer(lhs).into(),
        rhs: Number::Integer(rhs).into(),
        margin,
        pass,
    }
}

fn check_cap(x: u64, cap: u64) -> Result<()> {
    if x > cap {
        return Err(Error::CapExceeded { x, cap });
    }
    Ok(())
}

/// `∏ i^{e(i)}` split into numerator and denominator.
fn signed_power_product(x: u64, exponent: impl Fn(u64) -> i64) -> (BigUint, BigUint) {
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 2..=x {
        let e = exponent(i);
        if e > 0 {
            num *= BigUint::from(i).pow(e as u32);
        } else if e < 0 {
            den *= BigUint::from(i).pow((-e) as u32);
        }
    }
    (num, den)
}

/// `∏ i^{M(⌊x/i⌋)} = lcm(1, …, x)` exactly.
pub fn verify_psi_exact<M: MertensLookup + ?Sized>(x: u64, cap: u64, m: &M) -> Result<IdentityReport> {
    check_cap(x, cap)?;
    let (num, den) = signed_power_product(x, |i| m.mertens(x / i));
    let lcm = (1..=x).fold(BigUint::one(), |acc, i| acc.lcm(&BigUint::from(i)));
    Ok(product_report(IdentityId::PsiExact, x, num, den, lcm))
}

/// `∏ i^{M(⌊x/i⌋)·σ₀(i)} = (x!)²` exactly.
pub fn verify_t2_exact<M: MertensLookup + ?Sized>(
    x: u64,
    cap: u64,
    m: &M,
    sieve: &SieveTable,
) -> Result<IdentityReport> {
    check_cap(x, cap)?;
    if x > sieve.limit() {
        return Err(Error::PrefixTooShort { limit: sieve.limit(), x });
    }
    let (num, den) = signed_power_product(x, |i| m.mertens(x / i) * sieve.sigma0(i) as i64);
    let fact = (1..=x).fold(BigUint::one(), |acc, i| acc * BigUint::from(i));
    Ok(product_report(IdentityId::T2Exact, x, num, den, &fact * &fact))
}

fn product_report(id: IdentityId, x: u64, num: BigUint, den: BigUint, rhs: BigUint) -> IdentityReport {
    let pass = num == &rhs * &den;
    let lhs = BigRational::new(BigInt::from(num), BigInt::from(den));
    let rhs = BigRational::from_integer(BigInt::from(rhs));
    let margin = if pass { 0.0 } else { (lhs.to_f64().unwrap_or(0.0) - rhs.to_f64().unwrap_or(0.0)).abs() };
    IdentityReport {
        id,
        x,
        mode: Mode::ExactProduct,
        lhs: Number::Rational(lhs).into(),
        rhs: Number::Rational(rhs).into(),
        margin,
        pass,
    }
}

/// Shared tables for checking every theorem at all `x ≤ limit`.
pub struct Verifier {
    limit: u64,
    sieve: SieveTable,
    mertens: MertensTable,
    prefixes: HashMap<ArithFunction, OnceLock<std::result::Result<PrefixSums, String>>>,
}

fn lhs_weight(id: IdentityId) -> Option<ArithFunction> {
    use ArithFunction as F;
    use IdentityId::*;
    Some(match id {
        T1 => F::Power(1),
        T2 => F::LogSigma0Half,
        T3(k) => F::Power(k),
        T4(k) => F::SigmaK(k),
        T5 => F::SquareIndicator,
        T6 => F::Mangoldt,
        T7 => F::TwoPowOmega,
        T8 => F::DivisorsOfSquare,
        T9 => F::Sigma0Squared,
        T10 => F::IdOverPhi,
        Psi => F::Log,
        _ => return None,
    })
}

fn rhs_summand(id: IdentityId) -> Option<ArithFunction> {
    use ArithFunction as F;
    use IdentityId::*;
    Some(match id {
        T1 => F::Phi,
        T2 => F::Log,
        T3(k) => F::Jordan(k),
        T4(k) => F::Power(k),
        T5 => F::Liouville,
        T6 => F::MuLog,
        T7 => F::SquarefreeIndicator,
        T8 => F::TwoPowOmega,
        T9 => F::DivisorsOfSquare,
        T10 => F::MuSquaredOverPhi,
        Psi => F::Mangoldt,
        _ => return None,
    })
}

impl Verifier {
    pub fn new(limit: u64) -> Result<Self> {
        let sieve = SieveTable::build(limit, &[1, 2, 3])?;
        let mertens = MertensTable::from_sieve(&sieve);
        let mut prefixes = HashMap::new();
        let mut ids = IdentityId::theorems(&[1, 2, 3]);
        ids.push(IdentityId::Psi);
        for id in ids {
            for f in [lhs_weight(id), rhs_summand(id)].into_iter().flatten() {
                prefixes.entry(f).or_insert_with(OnceLock::new);
            }
        }
        Ok(Self { limit, sieve, mertens, prefixes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn sieve(&self) -> &SieveTable {
        &self.sieve
    }

    pub fn mertens(&self) -> &MertensTable {
        &self.mertens
    }

    fn prefix(&self, f: ArithFunction) -> Result<&PrefixSums> {
        if f.kind() == ValueKind::Rational && self.limit > RATIONAL_CAP {
            return Err(Error::CapExceeded { x: self.limit, cap: RATIONAL_CAP });
        }
        let cell = self.prefixes.get(&f).ok_or_else(|| Error::UnknownFunction(f.to_string()))?;
        cell.get_or_init(|| PrefixSums::build(&self.sieve, f, self.limit).map_err(|e| e.to_string()))
            .as_ref()
            .map_err(|e| Error::OutOfRange(e.clone()))
    }

    fn check_x(&self, x: u64) -> Result<()> {
        if x == 0 || x > self.limit {
            return Err(Error::PrefixTooShort { limit: self.limit, x });
        }
        Ok(())
    }

    pub fn lehman(&self, x: u64, n: u64) -> Result<IdentityReport> {
        self.check_x(x)?;
        verify_lehman(x, n, &self.mertens)
    }

    /// `Q(x) = Σ M(⌊x/i⌋)²`.
    pub fn q_sum(&self, x: u64) -> u128 {
        square_msum(x, &self.mertens)
    }

    pub fn schwarz(&self, x: u64) -> Result<IdentityReport> {
        self.check_x(x)?;
        let a = self.prefix(ArithFunction::Phi)?.exact_at(x)?.unwrap();
        Ok(verify_schwarz(x, self.q_sum(x), a.to_u128().unwrap()))
    }

    pub fn psi(&self, x: u64) -> Result<IdentityReport> {
        self.theorem(IdentityId::Psi, x)
    }

    pub fn psi_exact(&self, x: u64, cap: u64) -> Result<IdentityReport> {
        self.check_x(x)?;
        verify_psi_exact(x, cap, &self.mertens)
    }

    pub fn t2_exact(&self, x: u64, cap: u64) -> Result<IdentityReport> {
        self.check_x(x)?;
        verify_t2_exact(x, cap, &self.mertens, &self.sieve)
    }

    /// One of T1..T10 (or PSI in float mode) at `x`.
    pub fn theorem(&self, id: IdentityId, x: u64) -> Result<IdentityReport> {
        self.check_x(x)?;
        if let IdentityId::T3(k) | IdentityId::T4(k) = id {
            if !(1..=3).contains(&k) {
                return Err(Error::UnsupportedK(k));
            }
        }
        let (Some(wf), Some(rf)) = (lhs_weight(id), rhs_summand(id)) else {
            return Err(Error::OutOfRange(format!("{id} is not a divisor-sum theorem")));
        };
        let lhs = weighted_msum(x, self.prefix(wf)?, &self.mertens)?;
        let rhs_pre = self.prefix(rf)?;
        Ok(match id {
            IdentityId::T6 => self.t6_report(x, lhs.to_f64(), -rhs_pre.float_at(x)?),
            _ if rf.kind() == ValueKind::Float => IdentityReport::float(id, x, lhs.to_f64(), rhs_pre.float_at(x)?),
            _ if rf.kind() == ValueKind::Rational => {
                IdentityReport::exact(id, x, lhs, Number::Rational(rhs_pre.rational_at(x)?.unwrap()))
            }
            _ => IdentityReport::exact(id, x, lhs, Number::Integer(rhs_pre.exact_at(x)?.unwrap())),
        })
    }

    /// `Σ M(⌊x/i⌋)Λ(i) = −Σ μ(n) ln n`, compared as `Π p^{e_p}` on both sides.
    fn t6_report(&self, x: u64, lhs_float: f64, rhs_float: f64) -> IdentityReport {
        let mut lhs = BTreeMap::new();
        for &p in self.sieve.primes().iter().take_while(|&&p| p as u64 <= x) {
            let p = p as u64;
            let mut e = 0i64;
            let mut pk = p;
            while pk <= x {
                e += self.mertens.get(x / pk);
                pk = match pk.checked_mul(p) {
                    Some(v) => v,
                    None => break,
                };
            }
            if e != 0 {
                lhs.insert(p, e);
            }
        }
        let mut rhs: BTreeMap<u64, i64> = BTreeMap::new();
        for n in 2..=x {
            let mu = self.sieve.mu(n) as i64;
            if mu == 0 {
                continue;
            }
            for (p, _) in self.sieve.factorize(n) {
                *rhs.entry(p as u64).or_insert(0) -= mu;
            }
        }
        rhs.retain(|_, e| *e != 0);
        let margin = (lhs_float - rhs_float).abs();
        let pass = lhs == rhs && margin <= FLOAT_TOL * rhs_float.abs().max(1.0);
        IdentityReport {
            id: IdentityId::T6,
            x,
            mode: Mode::ExactFactored,
            lhs: Side::Factored(lhs),
            rhs: Side::Factored(rhs),
            margin,
            pass,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub xmax: u64,
    pub ks: Vec<u32>,
    pub exact_cap: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { xmax: 2000, ks: vec![1, 2, 3], exact_cap: DEFAULT_EXACT_CAP }
    }
}

/// Every theorem, LEHMAN, PSI and SCHWARZ at each `x ≤ xmax`, plus the exact product
/// forms for `x ≤ exact_cap`. Sorted by `(id, x)`.
pub fn run_suite(opts: &SuiteOptions) -> Result<Vec<IdentityReport>> {
    for &k in &opts.ks {
        if !(1..=3).contains(&k) {
            return Err(Error::UnsupportedK(k));
        }
    }
    let v = Verifier::new(opts.xmax)?;
    let mut ids = IdentityId::theorems(&opts.ks);
    ids.push(IdentityId::Psi);
    // materialize shared tables before fanning out
    for &id in &ids {
        for f in [lhs_weight(id), rhs_summand(id)].into_iter().flatten() {
            v.prefix(f)?;
        }
    }
    let per_x: Vec<Result<Vec<IdentityReport>>> = (1..=opts.xmax)
        .into_par_iter()
        .map(|x| {
            let mut out = Vec::with_capacity(ids.len() + 4);
            for &id in &ids {
                out.push(v.theorem(id, x)?);
            }
            out.push(v.lehman(x, 1)?);
            out.push(v.schwarz(x)?);
            if x <= opts.exact_cap {
                out.push(v.psi_exact(x, opts.exact_cap)?);
                out.push(v.t2_exact(x, opts.exact_cap)?);
            }
            Ok(out)
        })
        .collect();
    let mut reports = Vec::new();
    for r in per_x {
        reports.extend(r?);
    }
    reports.sort_by_key(|r| (r.id, r.x));
    Ok(reports)
}

/// Large-x ratio checks: `A(x)/x²`, `B_k(x)/x^{k+1}`, squarefree density, `√Q(x)/x`,
/// and the two exact Schwarz-bound forms.
pub fn asymptotic_ratios(x: u64, ks: &[u32], band: f64) -> Result<Vec<IdentityReport>> {
    let sieve = SieveTable::build(x, &[])?;
    let m = MertensTable::from_sieve(&sieve);
    let xf = x as f64;
    let pi2 = std::f64::consts::PI.powi(2);
    let mut out = Vec::new();

    let a: u128 = sieve.phi_slice()[1..].iter().map(|&v| v as u128).sum();
    out.push(IdentityReport::ratio(IdentityId::WalfiszRatio, x, a as f64 / (xf * xf), 3.0 / pi2, band));

    for &k in ks {
        let zeta = match k {
            1 => pi2 / 6.0,
            2 => ZETA3,
            3 => ZETA4,
            _ => return Err(Error::UnsupportedK(k)),
        };
        let b: u128 = jordan_table(&sieve, k)?[1..].iter().sum();
        let target = 1.0 / ((k + 1) as f64 * zeta);
        out.push(IdentityReport::ratio(IdentityId::JordanRatio(k), x, b as f64 / xf.powi(k as i32 + 1), target, band));
    }

    let squarefree = sieve.mu_slice()[1..].iter().filter(|&&v| v != 0).count();
    out.push(IdentityReport::ratio(IdentityId::SquarefreeRatio, x, squarefree as f64 / xf, 6.0 / pi2, band));

    let q = square_msum(x, &m);
    let limit_const = 3.0 * 3f64.sqrt() / std::f64::consts::PI;
    out.push(IdentityReport::ratio(IdentityId::SchwarzRatio, x, (q as f64).sqrt() / xf, limit_const, band));
    out.push(schwarz_limit(x, q));
    out.push(schwarz_route(x, q, a));
    Ok(out)
}

/// Certified check of `√Q/x > (3√3/π)·((1+1/x)(1+1/(2x)))^{-1/2}`,
/// equivalently `Q·π²·(x+1)(2x+1) > 54·x⁴`.
pub fn schwarz_limit(x: u64, q: u128) -> IdentityReport {
    let xb = BigInt::from(x);
    let base = BigInt::from(q) * BigInt::from(x + 1) * BigInt::from(2 * x + 1);
    let rhs = BigInt::from(54u32) * xb.pow(4) * BigInt::from(E30);
    let lhs_lo = &base * BigInt::from(PI2_LO_E30);
    let lhs_hi = &base * BigInt::from(PI2_HI_E30);
    // pass only when certified; an interval straddling the bound fails
    let pass = lhs_lo > rhs;
    debug_assert!(pass || lhs_hi <= rhs || lhs_lo <= rhs);
    let xf = x as f64;
    let lhs_f = (q as f64).sqrt() / xf;
    let rhs_f = 3.0 * 3f64.sqrt() / std::f64::consts::PI / ((1.0 + 1.0 / xf) * (1.0 + 0.5 / xf)).sqrt();
    IdentityReport {
        id: IdentityId::SchwarzLimit,
        x,
        mode: Mode::ExactInequality,
        lhs: Number::Float(lhs_f).into(),
        rhs: Number::Float(rhs_f).into(),
        margin: lhs_f - rhs_f,
        pass,
    }
}

/// Chain `Q ≥ 6A²/(x(x+1)(2x+1))` (exact) and `A > 3x²/π²` (certified), which together give
/// `√Q > (3/π²)x²/√(x(x+1)(2x+1)/6)`; the final inequality is also checked directly.
pub fn schwarz_route(x: u64, q: u128, a: u128) -> IdentityReport {
    let schwarz = verify_schwarz(x, q, a).pass;
    let xb = BigInt::from(x);
    let a_above = BigInt::from(a) * BigInt::from(PI2_LO_E30) > BigInt::from(3u32) * xb.pow(2) * BigInt::from(E30);
    let s = &xb * BigInt::from(x + 1) * BigInt::from(2 * x + 1);
    let direct = BigInt::from(q) * &s * BigInt::from(PI4_LO_E30) > BigInt::from(54u32) * xb.pow(4) * BigInt::from(E30);
    let xf = x as f64;
    let lhs_f = (q as f64).sqrt();
    let pi2 = std::f64::consts::PI.powi(2);
    let rhs_f = 3.0 / pi2 * xf * xf / (xf * (xf + 1.0) * (2.0 * xf + 1.0) / 6.0).sqrt();
    IdentityReport {
        id: IdentityId::SchwarzRoute,
        x,
        mode: Mode::ExactInequality,
        lhs: Number::Float(lhs_f).into(),
        rhs: Number::Float(rhs_f).into(),
        margin: lhs_f - rhs_f,
        pass: schwarz && a_above && direct,
    }
}

pub fn summarize(reports: &[IdentityReport]) -> (usize, usize) {
    let failed = reports.iter().filter(|r| !r.pass).count();
    (reports.len(), failed)
}

/// Failing `(x, n)` pairs of the generalized Lehman identity for `x ≤ xmax`.
pub fn lehman_sweep(xmax: u64) -> Result<Vec<IdentityReport>> {
    let m = crate::mertens::mertens_sieved(xmax)?;
    let failures: Vec<IdentityReport> = (1..=xmax)
        .into_par_iter()
        .flat_map_iter(|x| {
            let m = &m;
            (1..=x).filter_map(move |n| verify_lehman(x, n, m).ok().filter(|r| !r.pass))
        })
        .collect();
    Ok(failures)
}

/// Total of `Σ_blocks` visits for a weighted sum at `x`, exposed for scaling checks.
pub fn block_visits(x: u64) -> usize {
    BlockIter::new(x).count()
}
