//! Integer partitions, hook numbers, and brute-force partition polynomials.
//!
//! Everything here works by direct enumeration and serves as ground truth for
//! the product expansions in [`crate::qseries`].

use std::sync::{Mutex, OnceLock};

use rug::Integer;

use crate::error::{Error, Result};
use crate::qseries::WPolynomial;

/// Default largest `n` the brute-force routines will enumerate (p(40) = 37338).
pub const DEFAULT_ENUMERATION_CAP: u32 = 40;

/// A partition: parts are non-increasing and positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Argument("partition parts must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            parts.sort_unstable_by(|a, b| b.cmp(a));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// |λ|
    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// ℓ(λ), the number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The transpose of the Young diagram, computed from column counts.
    pub fn conjugate(&self) -> Partition {
        let width = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=width)
            .map(|j| self.parts.iter().take_while(|&&p| p >= j).count() as u32)
            .collect();
        Partition { parts }
    }

    /// Multiset of hook numbers, listed row by row.
    pub fn hook_numbers(&self) -> HookMultiset {
        let conj = self.conjugate();
        let mut values = Vec::with_capacity(self.size() as usize);
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 0..row {
                let arm = row - j - 1;
                let leg = conj.parts[j as usize] - i as u32 - 1;
                values.push(arm + leg + 1);
            }
        }
        HookMultiset { values }
    }

    /// #H_t(λ): the number of hooks divisible by `t`.
    pub fn count_t_hooks(&self, t: u32) -> Result<u32> {
        if t == 0 {
            return Err(Error::Argument("t must be positive".into()));
        }
        Ok(self
            .hook_numbers()
            .values
            .iter()
            .filter(|&&h| h % t == 0)
            .count() as u32)
    }

    /// True if the parts pairwise differ by at least 2.
    pub fn is_superdistinct(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] >= w[1] + 2)
    }
}

/// Hook numbers of a partition, one per cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HookMultiset {
    values: Vec<u32>,
}

impl HookMultiset {
    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> Option<u32> {
        self.values.iter().copied().max()
    }

    pub fn sorted(&self) -> Vec<u32> {
        let mut v = self.values.clone();
        v.sort_unstable();
        v
    }
}

/// Enumerates partitions of `n` in lexicographically decreasing order,
/// starting from `(n)`. For `n = 0` yields the single empty partition.
pub fn enumerate_partitions(n: u32) -> PartitionIter {
    PartitionIter {
        next: Some(if n == 0 { Vec::new() } else { vec![n] }),
    }
}

pub struct PartitionIter {
    next: Option<Vec<u32>>,
}

impl Iterator for PartitionIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let current = self.next.take()?;
        self.next = successor(&current);
        Some(Partition { parts: current })
    }
}

fn successor(parts: &[u32]) -> Option<Vec<u32>> {
    let pos = parts.iter().rposition(|&p| p > 1)?;
    let mut out = parts[..pos].to_vec();
    let v = parts[pos] - 1;
    let mut rest: u32 = parts[pos + 1..].iter().sum::<u32>() + 1;
    out.push(v);
    while rest > 0 {
        let take = rest.min(v);
        out.push(take);
        rest -= take;
    }
    Some(out)
}

fn check_cap(n: u32, cap: u32) -> Result<()> {
    if n > cap {
        return Err(Error::ResourceLimit {
            what: "enumeration n",
            requested: n as u64,
            cap: cap as u64,
        });
    }
    Ok(())
}

fn tally(exponents: impl Iterator<Item = u32>) -> WPolynomial {
    let mut counts: Vec<u64> = Vec::new();
    for e in exponents {
        let e = e as usize;
        if counts.len() <= e {
            counts.resize(e + 1, 0);
        }
        counts[e] += 1;
    }
    WPolynomial::from_coeffs(counts.into_iter().map(Integer::from).collect())
}

/// ∑_{λ ⊢ n} w^{#H_t(λ)} by enumeration.
pub fn brute_force_pt(t: u32, n: u32, cap: u32) -> Result<WPolynomial> {
    if t == 0 {
        return Err(Error::Argument("t must be positive".into()));
    }
    check_cap(n, cap)?;
    Ok(tally(enumerate_partitions(n).map(|p| {
        p.hook_numbers()
            .values
            .iter()
            .filter(|&&h| h % t == 0)
            .count() as u32
    })))
}

/// Q_n(w) = ∑_{λ ⊢ n} w^{ℓ(λ)} by enumeration.
pub fn brute_force_qn(n: u32, cap: u32) -> Result<WPolynomial> {
    check_cap(n, cap)?;
    Ok(tally(enumerate_partitions(n).map(|p| p.len() as u32)))
}

/// p(0), …, p(n) from Euler's pentagonal recurrence.
pub fn partition_numbers(n: usize) -> Vec<Integer> {
    let mut p: Vec<Integer> = Vec::with_capacity(n + 1);
    p.push(Integer::from(1));
    for m in 1..=n {
        let mut acc = Integer::new();
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > m {
                break;
            }
            let g2 = k * (3 * k + 1) / 2;
            if k % 2 == 1 {
                acc += &p[m - g1];
                if g2 <= m {
                    acc += &p[m - g2];
                }
            } else {
                acc -= &p[m - g1];
                if g2 <= m {
                    acc -= &p[m - g2];
                }
            }
        }
        p.push(acc);
    }
    p
}

static PARTITION_CACHE: OnceLock<Mutex<Vec<Integer>>> = OnceLock::new();

/// Returns p(0..=n), reusing a process-wide table that only ever grows.
pub fn partition_table(n: usize) -> Vec<Integer> {
    let cache = PARTITION_CACHE.get_or_init(|| Mutex::new(Vec::new()));
    let mut guard = cache.lock().expect("partition cache poisoned");
    if guard.len() <= n {
        // Recompute with headroom; the recurrence is cheap next to its callers.
        *guard = partition_numbers((n + 1).next_power_of_two().max(64));
    }
    guard[..=n].to_vec()
}
