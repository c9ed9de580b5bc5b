//! Sieved tables of the arithmetic functions behind the identity suite.
//!
//! [`SieveTable`] is built with one linear-sieve pass driven by the smallest prime
//! factor. Footprint per entry: `spf` 4 B, `mu` 1 B, `phi` 4 B, `liouville` 1 B,
//! `omega` 1 B, `sigma0` 4 B, `mangoldt_base` 4 B, plus a transient 4 B prime-power
//! column during construction (23 B total) and 16 B for every requested σ_k column.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::config::check_capacity;
use crate::error::{Error, Result};
use crate::numeric::{isqrt, NeumaierSum};

const BYTES_PER_ENTRY: u64 = 23;
/// Largest argument for which `PrefixSums` keeps the Λ values as prime bases.
pub const SYMBOLIC_PSI_LIMIT: u64 = 10_000;

#[derive(Debug, Clone)]
pub struct SieveTable {
    limit: u32,
    primes: Vec<u32>,
    spf: Vec<u32>,
    mu: Vec<i8>,
    phi: Vec<u32>,
    liouville: Vec<i8>,
    omega: Vec<u8>,
    sigma0: Vec<u32>,
    mangoldt_base: Vec<u32>,
    sigma_k: [Option<Vec<u128>>; 3],
}

/// Builds every table on `[1, n]` with no σ_k columns.
pub fn build_sieve(n: u64) -> Result<SieveTable> {
    SieveTable::build(n, &[])
}

impl SieveTable {
    /// `sigma_ks` lists the σ_k columns (k ∈ {1, 2, 3}) to materialize.
    pub fn build(n: u64, sigma_ks: &[u32]) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfRange("sieve limit must be at least 1".into()));
        }
        if n >= u32::MAX as u64 {
            return Err(Error::OutOfRange(format!("sieve limit {n} exceeds 32-bit index range")));
        }
        for &k in sigma_ks {
            if !(1..=3).contains(&k) {
                return Err(Error::UnsupportedK(k));
            }
        }
        let extra = 16 * sigma_ks.len() as u64;
        check_capacity("sieve table", n + 1, BYTES_PER_ENTRY + extra)?;

        let len = n as usize + 1;
        let mut spf = vec![0u32; len];
        // pk[n] = largest power of spf(n) dividing n
        let mut pk = vec![0u32; len];
        let mut primes = Vec::new();
        if len > 1 {
            spf[1] = 1;
            pk[1] = 1;
        }
        for i in 2..len {
            if spf[i] == 0 {
                spf[i] = i as u32;
                pk[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let m = i as u64 * p as u64;
                if m >= len as u64 || p > si {
                    break;
                }
                let m = m as usize;
                spf[m] = p;
                pk[m] = if p == si { pk[i] * p } else { p };
            }
        }

        let mut mu = vec![0i8; len];
        let mut phi = vec![0u32; len];
        let mut liouville = vec![0i8; len];
        let mut omega = vec![0u8; len];
        let mut sigma0 = vec![0u32; len];
        let mut mangoldt_base = vec![0u32; len];
        let mut sk: Vec<(u32, Vec<u128>)> = sigma_ks.iter().map(|&k| (k, vec![0u128; len])).collect();
        if len > 1 {
            mu[1] = 1;
            phi[1] = 1;
            liouville[1] = 1;
            sigma0[1] = 1;
            for (_, col) in sk.iter_mut() {
                col[1] = 1;
            }
        }
        for n in 2..len {
            let p = spf[n] as usize;
            let q = pk[n] as usize;
            if q == n {
                // n = p^e
                let prev = n / p;
                mu[n] = if prev == 1 { -1 } else { 0 };
                phi[n] = (n - prev) as u32;
                liouville[n] = -liouville[prev];
                omega[n] = 1;
                sigma0[n] = sigma0[prev] + 1;
                mangoldt_base[n] = p as u32;
                for (k, col) in sk.iter_mut() {
                    col[n] = col[prev] + (n as u128).pow(*k);
                }
            } else {
                let r = n / q;
                mu[n] = mu[q] * mu[r];
                phi[n] = phi[q] * phi[r];
                liouville[n] = liouville[q] * liouville[r];
                omega[n] = omega[q] + omega[r];
                sigma0[n] = sigma0[q] * sigma0[r];
                for (_, col) in sk.iter_mut() {
                    col[n] = col[q] * col[r];
                }
            }
        }
        drop(pk);

        let mut sigma_k: [Option<Vec<u128>>; 3] = [None, None, None];
        for (k, col) in sk {
            sigma_k[k as usize - 1] = Some(col);
        }
        Ok(Self { limit: n as u32, primes, spf, mu, phi, liouville, omega, sigma0, mangoldt_base, sigma_k })
    }

    pub fn limit(&self) -> u64 {
        self.limit as u64
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn spf(&self, n: u64) -> u32 {
        self.spf[n as usize]
    }

    pub fn mu(&self, n: u64) -> i8 {
        self.mu[n as usize]
    }

    pub fn phi(&self, n: u64) -> u32 {
        self.phi[n as usize]
    }

    pub fn liouville(&self, n: u64) -> i8 {
        self.liouville[n as usize]
    }

    pub fn omega(&self, n: u64) -> u8 {
        self.omega[n as usize]
    }

    pub fn sigma0(&self, n: u64) -> u32 {
        self.sigma0[n as usize]
    }

    /// `p` when `n = p^m`, else 0; Λ(n) = ln(mangoldt_base(n)).
    pub fn mangoldt_base(&self, n: u64) -> u32 {
        self.mangoldt_base[n as usize]
    }

    pub fn mangoldt(&self, n: u64) -> f64 {
        match self.mangoldt_base(n) {
            0 => 0.0,
            p => (p as f64).ln(),
        }
    }

    /// Raw column slices, index 0 unused.
    pub fn mu_slice(&self) -> &[i8] {
        &self.mu
    }

    pub fn phi_slice(&self) -> &[u32] {
        &self.phi
    }

    pub fn sigma0_slice(&self) -> &[u32] {
        &self.sigma0
    }

    /// σ_k(n) from a materialized column, or by factorization when the column was not built.
    pub fn sigma_k(&self, k: u32, n: u64) -> Result<u128> {
        if !(1..=3).contains(&k) {
            return Err(Error::UnsupportedK(k));
        }
        if let Some(col) = &self.sigma_k[k as usize - 1] {
            return Ok(col[n as usize]);
        }
        Ok(self.factorize(n).into_iter().map(|(p, e)| (0..=e).map(|i| (p as u128).pow(i * k)).sum::<u128>()).product())
    }

    /// Prime factorization `[(p, e)]` in increasing `p`, via `spf`.
    pub fn factorize(&self, mut n: u64) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        while n > 1 {
            let p = self.spf[n as usize];
            let mut e = 0;
            while n % p as u64 == 0 {
                n /= p as u64;
                e += 1;
            }
            out.push((p, e));
        }
        out
    }

    /// All divisors of `n` (unsorted).
    pub fn divisors(&self, n: u64) -> Vec<u64> {
        let mut divs = vec![1u64];
        for (p, e) in self.factorize(n) {
            let len = divs.len();
            let mut pw = 1u64;
            for _ in 0..e {
                pw *= p as u64;
                for i in 0..len {
                    divs.push(divs[i] * pw);
                }
            }
        }
        divs
    }

    fn check_n(&self, n: u64) -> Result<()> {
        if n > self.limit() {
            return Err(Error::PrefixTooShort { limit: self.limit(), x: n });
        }
        Ok(())
    }

    /// Exact integer value of `f(n)`; `None` for rational- or float-valued functions.
    pub fn int_value(&self, f: ArithFunction, n: u64) -> Option<i128> {
        use ArithFunction::*;
        let v = match f {
            Mu => self.mu(n) as i128,
            Phi => self.phi(n) as i128,
            Liouville => self.liouville(n) as i128,
            TwoPowOmega => 1i128 << self.omega(n),
            Sigma0 => self.sigma0(n) as i128,
            SigmaK(k) => self.sigma_k(k, n).ok()? as i128,
            Jordan(k) => jordan_value(&self.factorize(n), k) as i128,
            Power(k) => (n as i128).pow(k),
            SquarefreeIndicator => (self.mu(n) != 0) as i128,
            SquareIndicator => {
                let r = isqrt(n);
                (r * r == n) as i128
            }
            DivisorsOfSquare => self.factorize(n).iter().map(|&(_, e)| 2 * e as i128 + 1).product(),
            Sigma0Squared => (self.sigma0(n) as i128).pow(2),
            _ => return None,
        };
        Some(v)
    }

    /// `(numerator, denominator)` of a rational-valued function at `n`.
    pub fn rational_value(&self, f: ArithFunction, n: u64) -> Option<(u64, u64)> {
        match f {
            ArithFunction::IdOverPhi => Some((n, self.phi(n) as u64)),
            ArithFunction::MuSquaredOverPhi => Some(((self.mu(n) != 0) as u64, self.phi(n) as u64)),
            _ => self.int_value(f, n).map(|v| (v as u64, 1)),
        }
    }

    pub fn float_value(&self, f: ArithFunction, n: u64) -> f64 {
        use ArithFunction::*;
        match f {
            Mangoldt => self.mangoldt(n),
            MuLog => self.mu(n) as f64 * (n as f64).ln(),
            Log => (n as f64).ln(),
            LogSigma0Half => (n as f64).ln() * self.sigma0(n) as f64 / 2.0,
            _ => match self.rational_value(f, n) {
                Some((a, b)) => a as f64 / b as f64,
                None => self.int_value(f, n).map_or(f64::NAN, |v| v as f64),
            },
        }
    }
}

fn jordan_value(factors: &[(u32, u32)], k: u32) -> u128 {
    factors
        .iter()
        .map(|&(p, e)| {
            let p = p as u128;
            p.pow(e * k) - p.pow((e - 1) * k)
        })
        .product()
}

/// `J_k(n)` for `n = 0..=N` (index 0 is 0), computed multiplicatively from `spf`.
pub fn jordan_table(sieve: &SieveTable, k: u32) -> Result<Vec<u128>> {
    if !(1..=3).contains(&k) {
        return Err(Error::UnsupportedK(k));
    }
    let len = sieve.limit() as usize + 1;
    check_capacity("jordan table", len as u64, 16)?;
    let mut out = vec![0u128; len];
    if len > 1 {
        out[1] = 1;
    }
    for n in 2..len {
        let p = sieve.spf[n] as usize;
        let mut q = p;
        while (n / q) % p == 0 {
            q *= p;
        }
        out[n] = if q == n { (n as u128).pow(k) - ((n / p) as u128).pow(k) } else { out[q] * out[n / q] };
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArithFunction {
    Mu,
    Phi,
    Liouville,
    TwoPowOmega,
    Sigma0,
    SigmaK(u32),
    Jordan(u32),
    /// `n^k`; `Power(0)` is the constant 1.
    Power(u32),
    SquarefreeIndicator,
    SquareIndicator,
    DivisorsOfSquare,
    Sigma0Squared,
    IdOverPhi,
    MuSquaredOverPhi,
    Mangoldt,
    MuLog,
    Log,
    LogSigma0Half,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueKind {
    Integer,
    Rational,
    Float,
}

impl ArithFunction {
    pub fn kind(self) -> ValueKind {
        use ArithFunction::*;
        match self {
            IdOverPhi | MuSquaredOverPhi => ValueKind::Rational,
            Mangoldt | MuLog | Log | LogSigma0Half => ValueKind::Float,
            _ => ValueKind::Integer,
        }
    }
}

impl fmt::Display for ArithFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ArithFunction::*;
        match self {
            Mu => write!(f, "mu"),
            Phi => write!(f, "phi"),
            Liouville => write!(f, "lambda"),
            TwoPowOmega => write!(f, "two_pow_omega"),
            Sigma0 => write!(f, "sigma0"),
            SigmaK(k) => write!(f, "sigma{k}"),
            Jordan(k) => write!(f, "jordan{k}"),
            Power(k) => write!(f, "pow{k}"),
            SquarefreeIndicator => write!(f, "squarefree"),
            SquareIndicator => write!(f, "square"),
            DivisorsOfSquare => write!(f, "d_of_square"),
            Sigma0Squared => write!(f, "sigma0_squared"),
            IdOverPhi => write!(f, "id_over_phi"),
            MuSquaredOverPhi => write!(f, "mu2_over_phi"),
            Mangoldt => write!(f, "mangoldt"),
            MuLog => write!(f, "mu_log"),
            Log => write!(f, "log"),
            LogSigma0Half => write!(f, "log_sigma0_half"),
        }
    }
}

impl FromStr for ArithFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use ArithFunction::*;
        let f = match s {
            "mu" => Mu,
            "phi" => Phi,
            "lambda" | "liouville" => Liouville,
            "two_pow_omega" => TwoPowOmega,
            "sigma0" => Sigma0,
            "squarefree" => SquarefreeIndicator,
            "square" => SquareIndicator,
            "d_of_square" => DivisorsOfSquare,
            "sigma0_squared" => Sigma0Squared,
            "id_over_phi" => IdOverPhi,
            "mu2_over_phi" => MuSquaredOverPhi,
            "mangoldt" | "psi" => Mangoldt,
            "mu_log" => MuLog,
            "log" => Log,
            "log_sigma0_half" => LogSigma0Half,
            _ => {
                let parse_k = |prefix: &str| s.strip_prefix(prefix).and_then(|r| r.parse::<u32>().ok());
                if let Some(k) = parse_k("sigma").filter(|k| (1..=3).contains(k)) {
                    SigmaK(k)
                } else if let Some(k) = parse_k("jordan").filter(|k| (1..=3).contains(k)) {
                    Jordan(k)
                } else if let Some(k) = parse_k("pow") {
                    Power(k)
                } else {
                    return Err(Error::UnknownFunction(s.to_string()));
                }
            }
        };
        Ok(f)
    }
}

#[derive(Debug, Clone)]
pub enum PrefixValues {
    Integer(Vec<i128>),
    Big(Vec<BigInt>),
    /// Running sums scaled to a common denominator.
    Rational {
        numerators: Vec<BigInt>,
        denominator: BigInt,
    },
    Float(Vec<f64>),
}

/// Running sums `F(n) = Σ_{i≤n} f(i)`, index 0 holding `F(0) = 0`.
#[derive(Debug, Clone)]
pub struct PrefixSums {
    function: ArithFunction,
    limit: u64,
    values: PrefixValues,
    /// Λ stored as prime bases for `n ≤ SYMBOLIC_PSI_LIMIT` (Mangoldt only).
    symbolic: Option<Vec<u32>>,
}

/// Prefix sums of `f` over `[1, n]` using the sieve's pointwise values.
pub fn prefix(sieve: &SieveTable, f: ArithFunction, n: u64) -> Result<PrefixSums> {
    PrefixSums::build(sieve, f, n)
}

impl PrefixSums {
    pub fn build(sieve: &SieveTable, f: ArithFunction, n: u64) -> Result<Self> {
        sieve.check_n(n)?;
        if let ArithFunction::SigmaK(k) | ArithFunction::Jordan(k) = f {
            if !(1..=3).contains(&k) {
                return Err(Error::UnsupportedK(k));
            }
        }
        let len = n as usize + 1;
        let values = match f.kind() {
            ValueKind::Integer => {
                check_capacity("prefix sums", len as u64, 16)?;
                let mut vals = Vec::with_capacity(len);
                vals.push(0i128);
                let mut acc = 0i128;
                let mut overflowed = false;
                for i in 1..len {
                    let v = sieve.int_value(f, i as u64).expect("integer-valued function");
                    match acc.checked_add(v) {
                        Some(a) => {
                            acc = a;
                            vals.push(a);
                        }
                        None => {
                            overflowed = true;
                            break;
                        }
                    }
                }
                if overflowed {
                    let mut big = Vec::with_capacity(len);
                    let mut acc = BigInt::zero();
                    big.push(acc.clone());
                    for i in 1..len {
                        acc += sieve.int_value(f, i as u64).unwrap();
                        big.push(acc.clone());
                    }
                    PrefixValues::Big(big)
                } else {
                    PrefixValues::Integer(vals)
                }
            }
            ValueKind::Rational => {
                let mut denominator = BigInt::one();
                for i in 1..len {
                    let (_, d) = sieve.rational_value(f, i as u64).unwrap();
                    denominator = denominator.lcm(&BigInt::from(d));
                }
                let entry_bytes = denominator.bits() / 8 + 16;
                check_capacity("rational prefix sums", len as u64, entry_bytes)?;
                let mut numerators = Vec::with_capacity(len);
                let mut acc = BigInt::zero();
                numerators.push(acc.clone());
                for i in 1..len {
                    let (a, d) = sieve.rational_value(f, i as u64).unwrap();
                    if a != 0 {
                        acc += (&denominator / BigInt::from(d)) * BigInt::from(a);
                    }
                    numerators.push(acc.clone());
                }
                PrefixValues::Rational { numerators, denominator }
            }
            ValueKind::Float => {
                check_capacity("float prefix sums", len as u64, 8)?;
                let mut vals = Vec::with_capacity(len);
                vals.push(0.0);
                let mut acc = NeumaierSum::new();
                for i in 1..len {
                    acc.add(sieve.float_value(f, i as u64));
                    vals.push(acc.value());
                }
                PrefixValues::Float(vals)
            }
        };
        let symbolic = (f == ArithFunction::Mangoldt).then(|| {
            let cap = n.min(SYMBOLIC_PSI_LIMIT) as usize;
            (0..=cap).map(|i| if i == 0 { 0 } else { sieve.mangoldt_base(i as u64) }).collect()
        });
        Ok(Self { function: f, limit: n, values, symbolic })
    }

    pub fn function(&self) -> ArithFunction {
        self.function
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn values(&self) -> &PrefixValues {
        &self.values
    }

    fn check(&self, n: u64) -> Result<()> {
        if n > self.limit {
            return Err(Error::PrefixTooShort { limit: self.limit, x: n });
        }
        Ok(())
    }

    /// Exact `F(n)` as an integer; rational functions return `None`.
    pub fn exact_at(&self, n: u64) -> Result<Option<BigInt>> {
        self.check(n)?;
        Ok(match &self.values {
            PrefixValues::Integer(v) => Some(BigInt::from(v[n as usize])),
            PrefixValues::Big(v) => Some(v[n as usize].clone()),
            _ => None,
        })
    }

    pub fn rational_at(&self, n: u64) -> Result<Option<BigRational>> {
        self.check(n)?;
        Ok(match &self.values {
            PrefixValues::Rational { numerators, denominator } => {
                Some(BigRational::new(numerators[n as usize].clone(), denominator.clone()))
            }
            PrefixValues::Float(_) => None,
            _ => self.exact_at(n)?.map(BigRational::from_integer),
        })
    }

    pub fn float_at(&self, n: u64) -> Result<f64> {
        self.check(n)?;
        Ok(match &self.values {
            PrefixValues::Float(v) => v[n as usize],
            PrefixValues::Integer(v) => v[n as usize] as f64,
            PrefixValues::Big(v) => v[n as usize].to_f64().unwrap_or(f64::NAN),
            PrefixValues::Rational { numerators, denominator } => {
                BigRational::new(numerators[n as usize].clone(), denominator.clone()).to_f64().unwrap_or(f64::NAN)
            }
        })
    }

    /// For Λ prefix sums with `n ≤ 10⁴`: ψ(n) as `{p: multiplicity}`, i.e. `ψ(n) = Σ mult·ln p`.
    pub fn psi_prime_logs(&self, n: u64) -> Option<BTreeMap<u32, u32>> {
        let sym = self.symbolic.as_ref()?;
        if n as usize >= sym.len() {
            return None;
        }
        let mut out = BTreeMap::new();
        for &p in &sym[1..=n as usize] {
            if p != 0 {
                *out.entry(p).or_insert(0) += 1;
            }
        }
        Some(out)
    }
}

/// Entrywise rebuild of the sieve columns on `[lo, hi]` without touching `[1, lo)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveSegment {
    pub lo: u64,
    pub hi: u64,
    pub spf: Vec<u64>,
    pub mu: Vec<i8>,
    pub phi: Vec<u64>,
    pub liouville: Vec<i8>,
    pub omega: Vec<u8>,
    pub sigma0: Vec<u64>,
    pub mangoldt_base: Vec<u64>,
}

pub fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit as usize + 1];
    let mut out = Vec::new();
    for i in 2..=limit as usize {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit as usize {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

pub fn build_segment(lo: u64, hi: u64) -> Result<SieveSegment> {
    if lo == 0 || hi < lo {
        return Err(Error::OutOfRange(format!("segment [{lo}, {hi}] is empty or starts at 0")));
    }
    let len = (hi - lo + 1) as usize;
    check_capacity("sieve segment", len as u64, 48)?;
    let mut rem: Vec<u64> = (lo..=hi).collect();
    let mut seg = SieveSegment {
        lo,
        hi,
        spf: vec![0; len],
        mu: vec![1; len],
        phi: vec![1; len],
        liouville: vec![1; len],
        omega: vec![0; len],
        sigma0: vec![1; len],
        mangoldt_base: vec![0; len],
    };
    for p in small_primes(isqrt(hi)) {
        let first = lo.div_ceil(p) * p;
        let mut n = first;
        while n <= hi {
            let i = (n - lo) as usize;
            let mut e = 0u32;
            let mut pe = 1u64;
            while rem[i] % p == 0 {
                rem[i] /= p;
                e += 1;
                pe *= p;
            }
            if seg.spf[i] == 0 {
                seg.spf[i] = p;
            }
            seg.mu[i] = if e > 1 { 0 } else { -seg.mu[i] };
            seg.phi[i] *= pe - pe / p;
            if e % 2 == 1 {
                seg.liouville[i] = -seg.liouville[i];
            }
            seg.omega[i] += 1;
            seg.sigma0[i] *= e as u64 + 1;
            if pe == n {
                seg.mangoldt_base[i] = p;
            }
            n += p;
        }
    }
    for (i, n) in (lo..=hi).enumerate() {
        let r = rem[i];
        if r > 1 {
            // one prime factor above √hi remains
            if seg.spf[i] == 0 {
                seg.spf[i] = r;
            }
            seg.mu[i] = -seg.mu[i];
            seg.phi[i] *= r - 1;
            seg.liouville[i] = -seg.liouville[i];
            seg.omega[i] += 1;
            seg.sigma0[i] *= 2;
            if r == n {
                seg.mangoldt_base[i] = r;
            }
        }
        if n == 1 {
            seg.spf[i] = 1;
        }
    }
    Ok(seg)
}

/// Streams μ over `[1, limit]` in blocks of `block` entries, calling `visit(lo, mu_block)`.
pub fn for_each_mobius_block<F>(limit: u64, block: usize, mut visit: F)
where
    F: FnMut(u64, &[i8]),
{
    let primes = small_primes(isqrt(limit));
    let mut mu = vec![0i8; block];
    let mut prod = vec![0u64; block];
    let mut lo = 1u64;
    while lo <= limit {
        let hi = (lo + block as u64 - 1).min(limit);
        let len = (hi - lo + 1) as usize;
        mu[..len].fill(1);
        prod[..len].fill(1);
        for &p in &primes {
            if p * p > hi {
                break;
            }
            let mut n = lo.div_ceil(p) * p;
            while n <= hi {
                let i = (n - lo) as usize;
                mu[i] = -mu[i];
                prod[i] *= p;
                n += p;
            }
            let p2 = p * p;
            let mut n = lo.div_ceil(p2) * p2;
            while n <= hi {
                mu[(n - lo) as usize] = 0;
                n += p2;
            }
        }
        for i in 0..len {
            if mu[i] != 0 && prod[i] != lo + i as u64 {
                mu[i] = -mu[i];
            }
        }
        visit(lo, &mu[..len]);
        lo = hi + 1;
    }
}
