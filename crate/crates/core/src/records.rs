//! Champion scans and the per-figure datasets built from them.
//!
//! `j(x) = Σ_{d|x} M(x/d)²` is scanned exhaustively. Highly composite numbers come either
//! from a direct σ₀ scan or from nonincreasing exponent patterns over the first 15 primes,
//! filtered by the strict-record rule.

use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use serde::Serialize;

use crate::config::check_capacity;
use crate::conjecture::{q_sum, scan, Claim, ScanOptions};
use crate::error::{Error, Result};
use crate::mertens::{mertens_sieved, MertensLookup, MertensQuotientTable, MertensTable};
use crate::numeric::{ceil_two_thirds, fmt_sig9};
use crate::sieves::SieveTable;

pub const DEFAULT_J_LIMIT: u64 = 10_000_000;
/// HCN arguments up to this bound get `M(l)`, `Q(l)` and `j(l)` by default.
pub const DEFAULT_Q_LIMIT: u64 = 10_000_000_000;
pub const FIRST_PRIMES: [u64; 15] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RecordKind {
    #[serde(rename = "J_RECORDS")]
    JRecords,
    #[serde(rename = "HCN")]
    Hcn,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecordPoint {
    /// 1-based champion index `i`.
    pub index: usize,
    pub l: u64,
    /// `j(l)` for J_RECORDS, `σ₀(l)` for HCN.
    pub m: u128,
    pub sigma0: u64,
    pub mertens: Option<i64>,
    /// `Q(l) = Σ_n M(⌊l/n⌋)²`.
    pub q: Option<u128>,
    /// `m′ = j(l)`, HCN only.
    pub j: Option<u128>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RecordSeries {
    pub kind: RecordKind,
    pub limit: u64,
    pub points: Vec<RecordPoint>,
}

pub fn trial_factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn divisors_of(factors: &[(u64, u32)]) -> Vec<u64> {
    let mut divs = vec![1u64];
    for &(p, e) in factors {
        let len = divs.len();
        let mut pw = 1u64;
        for _ in 0..e {
            pw *= p;
            for i in 0..len {
                divs.push(divs[i] * pw);
            }
        }
    }
    divs
}

/// `j(x) = Σ_{d|x} M(x/d)²`; factors come from the sieve when it covers `x`.
pub fn j_of<M: MertensLookup + ?Sized>(x: u64, sieve: Option<&SieveTable>, m: &M) -> u128 {
    let factors = match sieve {
        Some(s) if x <= s.limit() => s.factorize(x).into_iter().map(|(p, e)| (p as u64, e)).collect(),
        _ => trial_factorize(x),
    };
    divisors_of(&factors)
        .into_iter()
        .map(|d| {
            let v = m.mertens(x / d) as i128;
            (v * v) as u128
        })
        .sum()
}

/// `j(1..=n)` by accumulating `M(e)²` over the multiples of each `e`.
pub fn j_table(m: &MertensTable) -> Vec<u64> {
    let n = m.limit() as usize;
    let mut j = vec![0u64; n + 1];
    for e in 1..=n {
        let w = m.get(e as u64).unsigned_abs().pow(2);
        if w == 0 {
            continue;
        }
        let mut x = e;
        while x <= n {
            j[x] += w;
            x += e;
        }
    }
    j
}

fn strict_records<I: IntoIterator<Item = (u64, u128)>>(it: I) -> Vec<(u64, u128)> {
    let mut best: Option<u128> = None;
    let mut out = Vec::new();
    for (l, v) in it {
        if best.map_or(true, |b| v > b) {
            best = Some(v);
            out.push((l, v));
        }
    }
    out
}

pub fn scan_j_records(limit: u64) -> Result<RecordSeries> {
    if limit == 0 {
        return Err(Error::OutOfRange("record scan needs limit ≥ 1".into()));
    }
    check_capacity("j-record scan", limit + 1, 4 + 8 + 23)?;
    let m = mertens_sieved(limit)?;
    let j = j_table(&m);
    let sieve = SieveTable::build(limit, &[])?;
    let points = strict_records((1..=limit).map(|x| (x, j[x as usize] as u128)))
        .into_iter()
        .enumerate()
        .map(|(i, (l, v))| RecordPoint {
            index: i + 1,
            l,
            m: v,
            sigma0: sieve.sigma0(l) as u64,
            mertens: Some(m.get(l)),
            q: Some(q_sum(l, &m)),
            j: None,
        })
        .collect();
    Ok(RecordSeries { kind: RecordKind::JRecords, limit, points })
}

/// Every `2^a₁·3^a₂·…·47^a₁₅ ≤ limit` with `a₁ ≥ a₂ ≥ … ≥ 0`, paired with its divisor count.
pub fn exponent_pattern_candidates(limit: u64) -> Vec<(u64, u64)> {
    fn rec(idx: usize, max_e: u32, value: u64, d: u64, limit: u64, out: &mut Vec<(u64, u64)>) {
        out.push((value, d));
        if idx == FIRST_PRIMES.len() {
            return;
        }
        let p = FIRST_PRIMES[idx];
        let mut v = value;
        for e in 1..=max_e {
            v = match v.checked_mul(p) {
                Some(nv) if nv <= limit => nv,
                _ => break,
            };
            rec(idx + 1, e, v, d * (e as u64 + 1), limit, out);
        }
    }
    let mut out = Vec::new();
    rec(0, 64, 1, 1, limit, &mut out);
    out.sort_unstable();
    out
}

/// Highly composite numbers `≤ limit` by exponent patterns.
pub fn hcn_generated(limit: u64) -> Vec<(u64, u64)> {
    strict_records(exponent_pattern_candidates(limit).into_iter().map(|(l, d)| (l, d as u128)))
        .into_iter()
        .map(|(l, d)| (l, d as u64))
        .collect()
}

/// Highly composite numbers `≤ limit` by a direct σ₀ scan.
pub fn hcn_direct(limit: u64) -> Result<Vec<(u64, u64)>> {
    let sieve = SieveTable::build(limit, &[])?;
    Ok(strict_records((1..=limit).map(|x| (x, sieve.sigma0(x) as u128)))
        .into_iter()
        .map(|(l, d)| (l, d as u64))
        .collect())
}

#[derive(Debug, Clone)]
pub struct HcnOptions {
    pub generate: bool,
    /// Largest `l` for which `M(l)`, `Q(l)` and `j(l)` are computed.
    pub q_limit: u64,
}

impl Default for HcnOptions {
    fn default() -> Self {
        Self { generate: true, q_limit: DEFAULT_Q_LIMIT }
    }
}

pub fn scan_hcn(limit: u64, opts: &HcnOptions) -> Result<RecordSeries> {
    if limit == 0 {
        return Err(Error::OutOfRange("record scan needs limit ≥ 1".into()));
    }
    let champions = if opts.generate { hcn_generated(limit) } else { hcn_direct(limit)? };
    let q_top = champions.iter().map(|&(l, _)| l).filter(|&l| l <= opts.q_limit).max().unwrap_or(1);
    let small = Arc::new(mertens_sieved(ceil_two_thirds(q_top).min(q_top))?);
    let mut points = Vec::with_capacity(champions.len());
    for (i, (l, d)) in champions.into_iter().enumerate() {
        let (mertens, q, j) = if l <= opts.q_limit {
            let mq = MertensQuotientTable::with_small(l, small.clone())?;
            (Some(mq.at_x()), Some(q_sum(l, &mq)), Some(j_of(l, None, &mq)))
        } else {
            (None, None, None)
        };
        points.push(RecordPoint { index: i + 1, l, m: d as u128, sigma0: d, mertens, q, j });
    }
    Ok(RecordSeries { kind: RecordKind::Hcn, limit, points })
}

/// `log(l) + ½·log(log l) > log Q(l) > log(l)`.
pub fn fig9_chain_holds(p: &RecordPoint) -> Option<bool> {
    let q = p.q? as f64;
    let ll = (p.l as f64).ln();
    Some(ll + 0.5 * ll.ln() > q.ln() && q.ln() > ll)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(i128),
    Float(f64),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => fmt_sig9(*v),
        }
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            Cell::Int(v) => *v as f64,
            Cell::Float(v) => *v,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Dataset {
    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(Cell::render).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(self.to_csv().as_bytes())?;
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.header.iter().position(|h| *h == name)?;
        Some(self.rows.iter().map(|r| r[idx].as_f64()).collect())
    }
}

/// `log(M(l)²)`, with the plotting convention of −1 when `M(l) = 0`.
fn log_m_squared(m: i64) -> f64 {
    if m == 0 {
        -1.0
    } else {
        ((m as f64) * (m as f64)).ln()
    }
}

/// Columns plotted by figure 2, 4, 5 (J_RECORDS) or 6–10 (HCN).
pub fn figure_series(series: &RecordSeries, figure: u32) -> Result<Dataset> {
    let need = |kind: RecordKind, expected: &'static str| {
        if series.kind != kind {
            Err(Error::WrongKind { figure, expected })
        } else {
            Ok(())
        }
    };
    let mut rows = Vec::new();
    let head = |p: &RecordPoint| vec![Cell::Int(p.index as i128), Cell::Int(p.l as i128)];
    let header: Vec<&'static str> = match figure {
        2 => {
            need(RecordKind::JRecords, "J_RECORDS")?;
            for p in series.points.iter().filter(|p| p.l > 1) {
                let (l, m, ll) = (p.l as f64, p.m as f64, (p.l as f64).ln());
                let mut r = head(p);
                r.extend([Cell::Float(l / (ll * m)), Cell::Float(m / l), Cell::Float(1.0 / ll)]);
                rows.push(r);
            }
            vec!["i", "l", "l_over_log_l_m", "m_over_l", "inv_log_l"]
        }
        4 => {
            need(RecordKind::JRecords, "J_RECORDS")?;
            for p in &series.points {
                let mut r = head(p);
                r.extend([
                    Cell::Float((p.l as f64).ln()),
                    Cell::Float((p.m as f64).ln()),
                    Cell::Float(log_m_squared(p.mertens.unwrap_or(0))),
                    Cell::Float((p.m as f64 / p.sigma0 as f64).ln()),
                ]);
                rows.push(r);
            }
            vec!["i", "l", "log_l", "log_m", "log_m_l_squared", "log_m_over_sigma0"]
        }
        5 => {
            need(RecordKind::JRecords, "J_RECORDS")?;
            for p in series.points.iter().filter(|p| p.mertens.is_some()) {
                let mut r = head(p);
                r.push(Cell::Float(p.mertens.unwrap().unsigned_abs() as f64 / (p.l as f64).sqrt()));
                rows.push(r);
            }
            vec!["i", "l", "abs_m_over_sqrt_l"]
        }
        6..=10 => {
            need(RecordKind::Hcn, "HCN")?;
            for p in series.points.iter().filter(|p| p.index >= 2 && p.j.is_some()) {
                let ll = (p.l as f64).ln();
                let lll = ll.ln();
                let mp = p.j.unwrap() as f64;
                let q = p.q.unwrap() as f64;
                let mut r = head(p);
                match figure {
                    6 => r.extend([
                        Cell::Float(p.l as f64 / (ll * mp)),
                        Cell::Float(mp / p.l as f64),
                        Cell::Float(1.0 / ll),
                    ]),
                    7 => r.extend([
                        Cell::Float(ll + lll),
                        Cell::Float(ll),
                        Cell::Float(mp.ln()),
                        Cell::Float(log_m_squared(p.mertens.unwrap())),
                    ]),
                    8 => r.push(Cell::Float(ll + lll - mp.ln())),
                    9 => r.extend([Cell::Float(ll + 0.5 * lll), Cell::Float(q.ln()), Cell::Float(ll)]),
                    _ => r.push(Cell::Float(ll + 0.5 * lll - q.ln())),
                }
                rows.push(r);
            }
            match figure {
                6 => vec!["i", "l", "l_over_log_l_mprime", "mprime_over_l", "inv_log_l"],
                7 => vec!["i", "l", "log_l_plus_loglog_l", "log_l", "log_mprime", "log_m_l_squared"],
                8 => vec!["i", "l", "log_l_plus_loglog_l_minus_log_mprime"],
                9 => vec!["i", "l", "log_l_plus_half_loglog_l", "log_q", "log_l"],
                _ => vec!["i", "l", "log_l_plus_half_loglog_l_minus_log_q"],
            }
        }
        _ => return Err(Error::OutOfRange(format!("no record figure {figure}"))),
    };
    Ok(Dataset { header, rows })
}

/// Figure 1: `x, log_factorial, q_sum, psi` for `x = 1..=xmax`.
pub fn fig1_dataset(xmax: u64) -> Result<Dataset> {
    let opts = ScanOptions { keep_series: true, ..Default::default() };
    let report = scan(1, xmax, &[Claim::Upper, Claim::Lower], &opts)?;
    let rows = report
        .series
        .unwrap_or_default()
        .into_iter()
        .map(|r| {
            vec![Cell::Int(r.x as i128), Cell::Float(r.log_factorial), Cell::Int(r.q_sum as i128), Cell::Float(r.psi)]
        })
        .collect();
    Ok(Dataset { header: vec!["x", "log_factorial", "q_sum", "psi"], rows })
}

/// Figure 3: `x, j, q` for `x = 1..=xmax`.
pub fn fig3_dataset(xmax: u64) -> Result<Dataset> {
    let m = mertens_sieved(xmax)?;
    let j = j_table(&m);
    let rows = (1..=xmax)
        .map(|x| vec![Cell::Int(x as i128), Cell::Int(j[x as usize] as i128), Cell::Int(q_sum(x, &m) as i128)])
        .collect();
    Ok(Dataset { header: vec!["x", "j", "q"], rows })
}

#[derive(Debug, Clone)]
pub struct FigureOptions {
    pub fig1_xmax: u64,
    pub fig3_xmax: u64,
    pub j_limit: u64,
    pub hcn_limit: u64,
    pub q_limit: u64,
}

impl Default for FigureOptions {
    fn default() -> Self {
        Self {
            fig1_xmax: 1000,
            fig3_xmax: 10_000,
            j_limit: DEFAULT_J_LIMIT,
            hcn_limit: DEFAULT_Q_LIMIT,
            q_limit: DEFAULT_Q_LIMIT,
        }
    }
}

/// Writes `fig1.csv … fig10.csv` into `outdir`; returns the written paths.
pub fn write_figures(outdir: &Path, opts: &FigureOptions) -> Result<Vec<std::path::PathBuf>> {
    std::fs::create_dir_all(outdir)?;
    let j = scan_j_records(opts.j_limit)?;
    let h = scan_hcn(opts.hcn_limit, &HcnOptions { generate: true, q_limit: opts.q_limit })?;
    let mut written = Vec::new();
    for fig in 1..=10u32 {
        let ds = match fig {
            1 => fig1_dataset(opts.fig1_xmax)?,
            3 => fig3_dataset(opts.fig3_xmax)?,
            2 | 4 | 5 => figure_series(&j, fig)?,
            _ => figure_series(&h, fig)?,
        };
        let path = outdir.join(format!("fig{fig}.csv"));
        ds.write_csv(&path)?;
        written.push(path);
    }
    Ok(written)
}

pub fn series_to_csv(series: &RecordSeries) -> String {
    let opt = |v: Option<i128>| v.map_or(String::new(), |v| v.to_string());
    let mut s = String::from("i,l,m,sigma0,mertens,q,j\n");
    for p in &series.points {
        s.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            p.index,
            p.l,
            p.m,
            p.sigma0,
            opt(p.mertens.map(|v| v as i128)),
            opt(p.q.map(|v| v as i128)),
            opt(p.j.map(|v| v as i128)),
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_j(x: u64, m: &MertensTable) -> u128 {
        (1..=x).filter(|d| x % d == 0).map(|d| (m.get(x / d) * m.get(x / d)) as u128).sum()
    }

    #[test]
    fn j_examples() {
        let m = mertens_sieved(12).unwrap();
        assert_eq!(j_of(12, None, &m), 8);
        assert_eq!(j_of(1, None, &m), 1);
        assert_eq!(j_of(4, None, &m), 2);
        let j = j_table(&m);
        for x in 1..=12 {
            assert_eq!(j[x as usize] as u128, brute_j(x, &m));
        }
    }

    #[test]
    fn j_records_match_brute_force() {
        let s = scan_j_records(3000).unwrap();
        let m = mertens_sieved(3000).unwrap();
        let oracle = strict_records((1..=3000).map(|x| (x, brute_j(x, &m))));
        let got: Vec<(u64, u128)> = s.points.iter().map(|p| (p.l, p.m)).collect();
        assert_eq!(got, oracle);
        assert_eq!(scan_j_records(1).unwrap().points[0].m, 1);
    }

    #[test]
    fn hcn_prefix() {
        let want = [1, 2, 4, 6, 12, 24, 36, 48, 60, 120];
        let gen: Vec<u64> = hcn_generated(130).into_iter().map(|(l, _)| l).collect();
        let dir: Vec<u64> = hcn_direct(130).unwrap().into_iter().map(|(l, _)| l).collect();
        assert_eq!(gen, want);
        assert_eq!(dir, want);
    }

    #[test]
    fn generated_hcn_confirmed_by_direct_scan() {
        assert_eq!(hcn_generated(1_000_000), hcn_direct(1_000_000).unwrap());
    }

    #[test]
    fn hcn_series_columns() {
        let s = scan_hcn(10_000, &HcnOptions::default()).unwrap();
        let m = mertens_sieved(10_000).unwrap();
        for p in &s.points {
            assert_eq!(p.mertens, Some(m.get(p.l)));
            assert_eq!(p.q, Some(q_sum(p.l, &m)));
            assert_eq!(p.j, Some(brute_j(p.l, &m)));
        }
        assert!(s.points.windows(2).all(|w| w[0].l < w[1].l && w[0].m < w[1].m));
    }

    #[test]
    fn figure_kinds_and_identities() {
        let j = scan_j_records(10_000).unwrap();
        let h = scan_hcn(10_000, &HcnOptions::default()).unwrap();
        assert!(matches!(figure_series(&j, 6), Err(Error::WrongKind { .. })));
        assert!(matches!(figure_series(&h, 2), Err(Error::WrongKind { .. })));
        let f2 = figure_series(&j, 2).unwrap();
        let (a, b, c) =
            (f2.column("l_over_log_l_m").unwrap(), f2.column("m_over_l").unwrap(), f2.column("inv_log_l").unwrap());
        for i in 0..a.len() {
            assert!((a[i] * b[i] - c[i]).abs() <= 1e-12 * c[i]);
        }
        let f4 = figure_series(&j, 4).unwrap();
        let row12 = f4.rows.iter().find(|r| r[1] == Cell::Int(12));
        if let Some(r) = row12 {
            // j(12) = 8, M(12) = −2
            assert!((r[3].as_f64() - 8f64.ln()).abs() < 1e-12);
            assert!((r[4].as_f64() - 4f64.ln()).abs() < 1e-12);
        }
        let f7 = figure_series(&h, 7).unwrap();
        assert_eq!(f7.rows[0][1], Cell::Int(2));
    }

    #[test]
    fn zero_mertens_plots_as_minus_one() {
        assert_eq!(log_m_squared(0), -1.0);
        assert!((log_m_squared(-2) - 4f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn csv_shape() {
        let d = fig3_dataset(12).unwrap();
        let csv = d.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("x,j,q"));
        assert_eq!(lines.nth(11), Some("12,8,13"));
    }

    #[test]
    fn trial_factorization() {
        assert_eq!(trial_factorize(7_766_892_000), vec![(2, 5), (3, 2), (5, 3), (7, 3), (17, 1), (37, 1)]);
        assert_eq!(trial_factorize(1), vec![]);
        assert_eq!(divisors_of(&trial_factorize(12)).len(), 6);
    }
}
