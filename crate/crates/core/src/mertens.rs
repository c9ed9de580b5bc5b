//! `M(x)` by sieve and by the memoized quotient-lattice recursion
//! `M(v) = 1 − Σ_{d=2}^{v} M(⌊v/d⌋)`.

use std::sync::Arc;

use crate::config::check_capacity;
use crate::error::{Error, Result};
use crate::numeric::ceil_two_thirds;
use crate::sieves::{for_each_mobius_block, SieveTable};

/// Block length of the streaming μ sieve.
pub const MOBIUS_BLOCK: usize = 1 << 22;

/// Anything that can answer `M(v)` for the values it was built for.
pub trait MertensLookup {
    fn mertens(&self, v: u64) -> i64;
}

/// `M(0..=N)` with `M(0) = 0`.
#[derive(Debug, Clone)]
pub struct MertensTable {
    values: Vec<i32>,
}

impl MertensTable {
    pub fn from_sieve(sieve: &SieveTable) -> Self {
        let mut values = Vec::with_capacity(sieve.limit() as usize + 1);
        values.push(0);
        let mut acc = 0i32;
        for &m in &sieve.mu_slice()[1..] {
            acc += m as i32;
            values.push(acc);
        }
        Self { values }
    }

    pub fn limit(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    pub fn get(&self, n: u64) -> i64 {
        self.values[n as usize] as i64
    }

    pub fn as_slice(&self) -> &[i32] {
        &self.values
    }
}

impl MertensLookup for MertensTable {
    fn mertens(&self, v: u64) -> i64 {
        self.get(v)
    }
}

/// `M(1..=n)` from a blockwise μ sieve.
pub fn mertens_sieved(n: u64) -> Result<MertensTable> {
    if n == 0 {
        return Err(Error::OutOfRange("mertens_sieved needs N ≥ 1".into()));
    }
    check_capacity("mertens table", n + 1, 4)?;
    let mut values = Vec::with_capacity(n as usize + 1);
    values.push(0i32);
    let mut acc = 0i32;
    for_each_mobius_block(n, MOBIUS_BLOCK.min(n as usize), |_, mu| {
        for &m in mu {
            acc += m as i32;
            values.push(acc);
        }
    });
    Ok(MertensTable { values })
}

/// `M(v)` for every distinct `v = ⌊x/k⌋`.
///
/// Values `v ≤ threshold` come from the sieved `small` table; the rest are stored by
/// quotient index `k` in `large[k] = M(⌊x/k⌋)`.
#[derive(Debug, Clone)]
pub struct MertensQuotientTable {
    x: u64,
    small: Arc<MertensTable>,
    large: Vec<i64>,
}

pub fn mertens_quotients(x: u64) -> Result<MertensQuotientTable> {
    MertensQuotientTable::new(x)
}

pub fn mertens_at(x: u64) -> Result<i64> {
    if x == 0 {
        return Err(Error::OutOfRange("mertens_at needs x ≥ 1".into()));
    }
    Ok(mertens_quotients(x)?.at_x())
}

impl MertensQuotientTable {
    /// Default threshold `⌈x^{2/3}⌉`.
    pub fn new(x: u64) -> Result<Self> {
        Self::with_threshold(x, ceil_two_thirds(x))
    }

    pub fn with_threshold(x: u64, threshold: u64) -> Result<Self> {
        if x == 0 {
            return Err(Error::OutOfRange("quotient table needs x ≥ 1".into()));
        }
        let b = threshold.clamp(1, x);
        let small = Arc::new(mertens_sieved(b)?);
        Self::with_small(x, small)
    }

    /// Reuses a prebuilt `M(1..=B)`; the threshold is `B`.
    pub fn with_small(x: u64, small: Arc<MertensTable>) -> Result<Self> {
        if x == 0 {
            return Err(Error::OutOfRange("quotient table needs x ≥ 1".into()));
        }
        let b = small.limit().max(1);
        let kmax = x / (b + 1);
        check_capacity("quotient table", kmax + 1, 8)?;
        let mut large = vec![0i64; kmax as usize + 1];
        for k in (1..=kmax).rev() {
            let v = x / k;
            let mut res = 1i64;
            let mut d = 2u64;
            while d <= v {
                let q = v / d;
                if q > b {
                    res -= large[(k * d) as usize];
                    d += 1;
                } else {
                    let d_hi = v / q;
                    res -= (d_hi - d + 1) as i64 * small.get(q);
                    d = d_hi + 1;
                }
            }
            large[k as usize] = res;
        }
        Ok(Self { x, small, large })
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn threshold(&self) -> u64 {
        self.small.limit()
    }

    pub fn small(&self) -> &Arc<MertensTable> {
        &self.small
    }

    pub fn at_x(&self) -> i64 {
        self.get(self.x)
    }

    /// `M(v)`; `v` must be `≤ threshold` or a quotient `⌊x/k⌋`.
    pub fn get(&self, v: u64) -> i64 {
        if v <= self.small.limit() {
            return self.small.get(v);
        }
        let k = self.x / v;
        debug_assert_eq!(self.x / k, v, "{v} is not a quotient of {}", self.x);
        self.large[k as usize]
    }

    /// `M(⌊x/j⌋)`.
    pub fn column(&self, j: u64) -> i64 {
        self.get(self.x / j)
    }

    /// Distinct quotient values `⌊x/k⌋` in decreasing order.
    pub fn quotient_values(&self) -> Vec<u64> {
        let mut out = Vec::new();
        let mut k = 1u64;
        while k <= self.x {
            let v = self.x / k;
            out.push(v);
            k = self.x / v + 1;
        }
        out
    }

    /// `Σ_{i=1}^{v} M(⌊v/i⌋)` evaluated from this table alone; 1 for every stored point.
    pub fn lehman_sum(&self, v: u64) -> i64 {
        let mut total = 0i64;
        let mut i = 1u64;
        while i <= v {
            let q = v / i;
            let hi = v / q;
            total += (hi - i + 1) as i64 * self.get(q);
            i = hi + 1;
        }
        total
    }
}

impl MertensLookup for MertensQuotientTable {
    fn mertens(&self, v: u64) -> i64 {
        self.get(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieves::build_sieve;

    fn mu_partial_sums(n: u64) -> Vec<i64> {
        // trial-division μ, independent of the sieves
        let mu = |mut n: u64| {
            let mut s = 1i64;
            let mut p = 2;
            while p * p <= n {
                if n % p == 0 {
                    n /= p;
                    if n % p == 0 {
                        return 0;
                    }
                    s = -s;
                }
                p += 1;
            }
            if n > 1 {
                -s
            } else {
                s
            }
        };
        let mut acc = 0;
        (1..=n)
            .map(|k| {
                acc += mu(k);
                acc
            })
            .collect()
    }

    #[test]
    fn sieved_first_twelve() {
        let t = mertens_sieved(12).unwrap();
        let got: Vec<i64> = (1..=12).map(|n| t.get(n)).collect();
        assert_eq!(got, vec![1, 0, -1, -1, -2, -1, -2, -2, -2, -1, -2, -2]);
        assert_eq!(got, mu_partial_sums(12));
        assert_eq!(mertens_sieved(1).unwrap().get(1), 1);
        let s = build_sieve(12).unwrap();
        assert_eq!(MertensTable::from_sieve(&s).as_slice(), t.as_slice());
    }

    #[test]
    fn quotient_columns_at_twelve() {
        let mq = mertens_quotients(12).unwrap();
        let cols: Vec<i64> = (1..=12).map(|j| mq.column(j)).collect();
        assert_eq!(cols, vec![-2, -1, -1, -1, 0, 0, 1, 1, 1, 1, 1, 1]);
        assert_eq!(cols.iter().sum::<i64>(), 1);
        // force the recursion path with a tiny threshold
        let mq = MertensQuotientTable::with_threshold(12, 2).unwrap();
        let cols2: Vec<i64> = (1..=12).map(|j| mq.column(j)).collect();
        assert_eq!(cols, cols2);
    }

    #[test]
    fn small_values() {
        assert_eq!(mertens_at(5).unwrap(), -2);
        assert_eq!(mertens_at(1).unwrap(), 1);
        assert!(mertens_at(0).is_err());
    }

    #[test]
    fn recursion_agrees_with_sieve_for_all_thresholds() {
        let oracle = mu_partial_sums(3000);
        for x in (1..=3000u64).step_by(37) {
            for b in [1, 2, 7, 50, x] {
                let mq = MertensQuotientTable::with_threshold(x, b).unwrap();
                for v in mq.quotient_values() {
                    assert_eq!(mq.get(v), oracle[v as usize - 1], "x={x} b={b} v={v}");
                    assert_eq!(mq.lehman_sum(v), 1);
                }
            }
        }
    }

    #[test]
    fn million_endpoint_cross_method() {
        let t = mertens_sieved(1_000_000).unwrap();
        assert_eq!(mertens_at(1_000_000).unwrap(), t.get(1_000_000));
        // published value M(10⁶) = 212
        assert_eq!(t.get(1_000_000), 212);
    }

    #[test]
    fn small_table_steps_are_unit() {
        let t = mertens_sieved(100_000).unwrap();
        assert_eq!(t.get(1), 1);
        for n in 2..=100_000 {
            assert!((t.get(n) - t.get(n - 1)).abs() <= 1);
        }
    }
}
