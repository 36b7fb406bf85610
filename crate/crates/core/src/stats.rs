//! Inversion and `Fib` distributions over the four classes: closed forms and
//! the tabulations they are checked against.
//!
//! Binomials outside their usual range are zero, which makes every sum below
//! a total function.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::classes::{generate, ClassId};
use crate::error::{Error, Result};
use crate::fib::{fib_number, fib_permutations, fib_stat};
use crate::perm::{inversions, Permutation};

/// Which reading of a formula to evaluate: as printed, or with a correction
/// from the registry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Paper,
    Corrected,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Paper => "paper",
            Variant::Corrected => "corrected",
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Variant::Paper),
            "corrected" => Ok(Variant::Corrected),
            _ => Err(Error::Parse {
                what: "variant",
                input: s.to_string(),
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stat {
    Inv,
    Fib,
    Joint,
}

impl std::str::FromStr for Stat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inv" => Ok(Stat::Inv),
            "fib" => Ok(Stat::Fib),
            "joint" => Ok(Stat::Joint),
            _ => Err(Error::Parse {
                what: "statistic",
                input: s.to_string(),
            }),
        }
    }
}

/// Exact counts keyed by statistic value. Zero counts are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distribution<K: Ord> {
    counts: BTreeMap<K, u128>,
}

impl<K: Ord> Default for Distribution<K> {
    fn default() -> Self {
        Distribution {
            counts: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Copy> Distribution<K> {
    pub fn add(&mut self, key: K, count: u128) {
        if count > 0 {
            *self.counts.entry(key).or_insert(0) += count;
        }
    }

    pub fn get(&self, key: K) -> u128 {
        self.counts.get(&key).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u128 {
        self.counts.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (K, u128)> + '_ {
        self.counts.iter().map(|(&k, &c)| (k, c))
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Merges another tabulation into this one; order of merging is irrelevant.
    pub fn merge(&mut self, other: &Distribution<K>) {
        for (k, c) in other.iter() {
            self.add(k, c);
        }
    }
}

impl<K: Ord + Copy> FromIterator<(K, u128)> for Distribution<K> {
    fn from_iter<I: IntoIterator<Item = (K, u128)>>(iter: I) -> Self {
        let mut d = Distribution::default();
        for (k, c) in iter {
            d.add(k, c);
        }
        d
    }
}

/// A tabulation of one statistic, or of the `(fib, inv)` pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tabulation {
    Single(Distribution<usize>),
    Joint(Distribution<(usize, usize)>),
}

/// `C(a, b)`, zero when `b < 0`, `b > a` or `a < 0`.
pub fn binomial(a: i64, b: i64) -> Result<u128> {
    if a < 0 || b < 0 || b > a {
        return Ok(0);
    }
    let b = b.min(a - b) as u128;
    let a = a as u128;
    let mut acc: u128 = 1;
    for i in 0..b {
        // acc * (a - i) is divisible by (i + 1) at every step.
        acc = acc
            .checked_mul(a - i)
            .ok_or_else(|| Error::Overflow(format!("C({a}, {b})")))?
            / (i + 1);
    }
    Ok(acc)
}

fn binom(a: i64, b: i64) -> u128 {
    binomial(a, b).expect("binomial within range")
}

fn choose2(x: i64) -> i64 {
    x * (x - 1) / 2
}

/// Fibonacci permutations of length `n` with `k` inversions: `C(n-k, k)`.
pub fn fib_inv_count(n: usize, k: usize) -> u128 {
    let (n, k) = (n as i64, k as i64);
    binom(n - k, k)
}

/// Members of the class of length `n` with `k` inversions.
pub fn inv_distribution_formula(class: ClassId, n: usize, k: usize) -> u128 {
    let (n, k) = (n as i64, k as i64);
    match class {
        ClassId::A1 if k >= 3 => binom(n - k, k) + binom(n - k + 1, k - 2),
        ClassId::A2 if k >= 2 => binom(n - k + 1, k),
        ClassId::A1 | ClassId::A2 => binom(n - k, k),
        ClassId::B1 => (1..=n)
            .map(|l| {
                let rest = k - choose2(l);
                binom(n - l - rest, rest)
            })
            .sum(),
        ClassId::B2 => (1..=n).map(|l| binom(n - k - 1, k - l + 1)).sum(),
    }
}

/// The A-class inversion counts in their un-collapsed summation form, before
/// the hockey-stick identity is applied.
pub fn inv_distribution_summation(class: ClassId, n: usize, k: usize) -> u128 {
    let (n, k) = (n as i64, k as i64);
    let core_inversions = match class {
        ClassId::A1 => 3,
        ClassId::A2 => 2,
        _ => return inv_distribution_formula(class, n as usize, k as usize),
    };
    if k < core_inversions {
        return binom(n - k, k);
    }
    let r = k - core_inversions;
    binom(n - k, k) + (r..=n - 3).map(|l| binom(l - r, r)).sum::<u128>()
}

/// Members of length `n` with `Fib = k`: `F_k` for `k <= n-3`, `F_n` for
/// `k = n`, and zero otherwise.
pub fn fib_distribution_formula(_class: ClassId, n: usize, k: usize) -> u128 {
    if k == n || (n >= 3 && k <= n - 3) {
        fib_number(k).expect("F_k fits")
    } else {
        0
    }
}

/// The same count read without the `k ∈ {n-2, n-1}` exclusion: `F_k` for
/// every `0 <= k <= n`.
pub fn fib_distribution_uncaveated(n: usize, k: usize) -> u128 {
    if k <= n {
        fib_number(k).expect("F_k fits")
    } else {
        0
    }
}

/// Members of length `n` with `Fib = k` and `j` inversions.
pub fn joint_distribution_formula(
    class: ClassId,
    n: usize,
    k: usize,
    j: usize,
    variant: Variant,
) -> u128 {
    if k == n {
        let (k, j) = (k as i64, j as i64);
        return binom(k - j, j);
    }
    if k > n || n - k < 3 {
        return 0;
    }
    let (n, k, j) = (n as i64, k as i64, j as i64);
    match (class, variant) {
        (ClassId::A1, _) => binom(k - j + 3, j - 3),
        (ClassId::A2, _) => binom(k - j + 2, j - 2),
        (ClassId::B1, _) => {
            let head = choose2(n - k);
            binom(k - j + head, j - head)
        }
        (ClassId::B2, Variant::Paper) => binom(2 * k + j + 1 - n, j + k + 1 - n),
        (ClassId::B2, Variant::Corrected) => binom(n - j - 1, j + k + 1 - n),
    }
}

fn members(class: ClassId, n: usize) -> Result<Vec<Permutation>> {
    generate(class, n)
}

pub fn inv_distribution_oracle(class: ClassId, n: usize) -> Result<Distribution<usize>> {
    Ok(members(class, n)?
        .iter()
        .map(|p| (inversions(p), 1))
        .collect())
}

pub fn fib_distribution_oracle(class: ClassId, n: usize) -> Result<Distribution<usize>> {
    Ok(members(class, n)?
        .iter()
        .map(|p| (fib_stat(p), 1))
        .collect())
}

/// Keys are `(fib, inv)`.
pub fn joint_distribution_oracle(class: ClassId, n: usize) -> Result<Distribution<(usize, usize)>> {
    Ok(members(class, n)?
        .iter()
        .map(|p| ((fib_stat(p), inversions(p)), 1))
        .collect())
}

/// Inversions over the Fibonacci permutations of length `n`.
pub fn fib_inv_oracle(n: usize) -> Distribution<usize> {
    fib_permutations(n)
        .iter()
        .map(|p| (inversions(p), 1))
        .collect()
}

pub fn distribution_oracle(class: ClassId, n: usize, stat: Stat) -> Result<Tabulation> {
    Ok(match stat {
        Stat::Inv => Tabulation::Single(inv_distribution_oracle(class, n)?),
        Stat::Fib => Tabulation::Single(fib_distribution_oracle(class, n)?),
        Stat::Joint => Tabulation::Joint(joint_distribution_oracle(class, n)?),
    })
}

/// Closed-form counterpart of [`distribution_oracle`], over every key that
/// can be non-zero at length `n`.
pub fn distribution_formula(class: ClassId, n: usize, stat: Stat, variant: Variant) -> Tabulation {
    let max_inv = n * n.saturating_sub(1) / 2;
    let fib = |k| match variant {
        Variant::Paper => fib_distribution_uncaveated(n, k),
        Variant::Corrected => fib_distribution_formula(class, n, k),
    };
    match stat {
        Stat::Inv => Tabulation::Single(
            (0..=max_inv)
                .map(|k| (k, inv_distribution_formula(class, n, k)))
                .collect(),
        ),
        Stat::Fib => Tabulation::Single((0..=n).map(|k| (k, fib(k))).collect()),
        Stat::Joint => Tabulation::Joint(
            (0..=n)
                .flat_map(|k| (0..=max_inv).map(move |j| (k, j)))
                .map(|(k, j)| ((k, j), joint_distribution_formula(class, n, k, j, variant)))
                .collect(),
        ),
    }
}
