//! Permutations in one-line notation, pattern containment, direct and skew
//! sums, inversions, and the exhaustive avoidance oracle.
//!
//! Everything here is deliberately simple: hosts are at most a couple of
//! dozen entries long and patterns at most five, so the oracle favours
//! obviously-correct search over clever algorithms.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest `n` accepted by [`brute_force_av`].
///
/// The search extends prefixes and discards any that already contain a
/// forbidden pattern, so the practical cost is the number of avoiding
/// prefixes rather than `n!`; the cap keeps pattern sets with very large
/// classes (or the empty set) from running away.
pub const BRUTE_FORCE_MAX_LEN: usize = 11;

/// A permutation of `1..=n` in one-line notation. The empty permutation is
/// allowed.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    /// Validates that `values` is a rearrangement of `1..=values.len()`.
    pub fn new(values: Vec<u32>) -> Result<Self> {
        let n = values.len();
        let mut seen = vec![false; n];
        for &v in &values {
            if v == 0 || v as usize > n {
                return Err(Error::OutOfRangeValue {
                    value: i64::from(v),
                    len: n,
                });
            }
            let slot = &mut seen[v as usize - 1];
            if *slot {
                return Err(Error::DuplicateValue(i64::from(v)));
            }
            *slot = true;
        }
        Ok(Permutation(values))
    }

    pub(crate) fn from_vec_unchecked(values: Vec<u32>) -> Self {
        debug_assert!(Permutation::new(values.clone()).is_ok());
        Permutation(values)
    }

    pub fn empty() -> Self {
        Permutation(Vec::new())
    }

    /// `1 2 ... n`.
    pub fn identity(n: usize) -> Self {
        Permutation((1..=n as u32).collect())
    }

    /// `n ... 2 1`.
    pub fn decreasing(n: usize) -> Self {
        Permutation((1..=n as u32).rev().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn into_values(self) -> Vec<u32> {
        self.0
    }

    /// Position (0-based) of `value`, if present.
    pub fn position_of(&self, value: u32) -> Option<usize> {
        self.0.iter().position(|&v| v == value)
    }

    pub fn contains_pattern(&self, pattern: &Permutation) -> bool {
        contains_pattern(self, pattern)
    }

    pub fn avoids_all(&self, patterns: &PatternSet) -> bool {
        avoids_all(self, patterns)
    }

    pub fn inversions(&self) -> usize {
        inversions(self)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.0 {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

/// Accepts space-separated entries (`"1 4 3 2 6 5"`), or a compact digit
/// string (`"143265"`) when the permutation has at most nine entries.
impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_err = || Error::Parse {
            what: "permutation",
            input: s.to_string(),
        };
        let raw: Vec<i64> = if s.is_empty() {
            Vec::new()
        } else if s.contains(char::is_whitespace) {
            s.split_whitespace()
                .map(|tok| tok.parse::<i64>().map_err(|_| parse_err()))
                .collect::<Result<_>>()?
        } else if s.len() <= 9 && s.bytes().all(|b| b.is_ascii_digit()) {
            s.bytes().map(|b| i64::from(b - b'0')).collect()
        } else if let Ok(single) = s.parse::<i64>() {
            vec![single]
        } else {
            return Err(parse_err());
        };
        let n = raw.len();
        let values = raw
            .into_iter()
            .map(|v| {
                if v < 1 || v as u64 > n as u64 {
                    Err(Error::OutOfRangeValue { value: v, len: n })
                } else {
                    Ok(v as u32)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::new(values)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

/// A finite set of forbidden patterns, stored as given.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PatternSet(Vec<Permutation>);

impl PatternSet {
    pub fn new(patterns: Vec<Permutation>) -> Self {
        PatternSet(patterns)
    }

    /// Builds a set from digit-string patterns such as `["231", "312"]`.
    ///
    /// Panics on malformed input; meant for literals.
    pub fn from_literals(patterns: &[&str]) -> Self {
        PatternSet(
            patterns
                .iter()
                .map(|p| p.parse().expect("pattern literal"))
                .collect(),
        )
    }

    pub fn patterns(&self) -> &[Permutation] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = &Permutation> {
        self.0.iter()
    }
}

impl fmt::Display for PatternSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            for v in p.values() {
                write!(f, "{v}")?;
            }
        }
        f.write_str("}")
    }
}

/// The unique permutation order-isomorphic to `seq`.
pub fn standardize<T: Copy + Ord + Into<i64>>(seq: &[T]) -> Result<Permutation> {
    let mut order: Vec<usize> = (0..seq.len()).collect();
    order.sort_by_key(|&i| seq[i]);
    if let Some(w) = order.windows(2).find(|w| seq[w[0]] == seq[w[1]]) {
        return Err(Error::DuplicateValue(seq[w[0]].into()));
    }
    let mut values = vec![0u32; seq.len()];
    for (rank, &i) in order.iter().enumerate() {
        values[i] = rank as u32 + 1;
    }
    Ok(Permutation(values))
}

/// Standardizes a slice already known to hold distinct values.
pub(crate) fn standardize_distinct(seq: &[u32]) -> Permutation {
    standardize(seq).expect("distinct entries")
}

/// True iff some subsequence of `text` is order-isomorphic to `pattern`.
///
/// `text` only needs distinct entries; it does not have to be a permutation.
pub fn sequence_contains(text: &[u32], pattern: &[u32]) -> bool {
    if pattern.len() > text.len() {
        return false;
    }
    let mut chosen = Vec::with_capacity(pattern.len());
    embed(text, pattern, 0, &mut chosen)
}

fn embed(text: &[u32], pattern: &[u32], start: usize, chosen: &mut Vec<u32>) -> bool {
    let k = chosen.len();
    if k == pattern.len() {
        return true;
    }
    let remaining = pattern.len() - k;
    let target = pattern[k];
    for i in start..=text.len() - remaining {
        let x = text[i];
        let consistent = chosen
            .iter()
            .zip(pattern)
            .all(|(&c, &p)| (c < x) == (p < target));
        if consistent {
            chosen.push(x);
            if embed(text, pattern, i + 1, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

pub fn contains_pattern(perm: &Permutation, pattern: &Permutation) -> bool {
    sequence_contains(&perm.0, &pattern.0)
}

pub fn avoids_all(perm: &Permutation, patterns: &PatternSet) -> bool {
    patterns.iter().all(|p| !contains_pattern(perm, p))
}

/// `a ⊕ b`: `a` followed by `b` shifted up by `|a|`.
pub fn direct_sum(a: &Permutation, b: &Permutation) -> Permutation {
    let shift = a.len() as u32;
    let mut values = a.0.clone();
    values.extend(b.0.iter().map(|&v| v + shift));
    Permutation(values)
}

/// `a ⊖ b`: `a` shifted up by `|b|`, followed by `b`.
pub fn skew_sum(a: &Permutation, b: &Permutation) -> Permutation {
    let shift = b.len() as u32;
    let mut values: Vec<u32> = a.0.iter().map(|&v| v + shift).collect();
    values.extend_from_slice(&b.0);
    Permutation(values)
}

/// Number of pairs `i < j` with `perm[i] > perm[j]`.
pub fn inversions(perm: &Permutation) -> usize {
    let v = &perm.0;
    (0..v.len())
        .map(|i| v[i + 1..].iter().filter(|&&w| w < v[i]).count())
        .sum()
}

/// Every permutation of length `n` avoiding all of `patterns`, in
/// lexicographic order.
///
/// Permutations are built left to right in increasing-value order and a
/// prefix is abandoned as soon as it contains a forbidden pattern (any
/// extension would contain it too).
pub fn brute_force_av(n: usize, patterns: &PatternSet) -> Result<Vec<Permutation>> {
    if n > BRUTE_FORCE_MAX_LEN {
        return Err(Error::SizeLimitExceeded {
            n,
            max: BRUTE_FORCE_MAX_LEN,
        });
    }
    let mut out = Vec::new();
    let mut used = vec![false; n + 1];
    let mut prefix = Vec::with_capacity(n);
    extend_avoiding(n, patterns, &mut used, &mut prefix, &mut out);
    Ok(out)
}

fn extend_avoiding(
    n: usize,
    patterns: &PatternSet,
    used: &mut [bool],
    prefix: &mut Vec<u32>,
    out: &mut Vec<Permutation>,
) {
    if prefix.len() == n {
        out.push(Permutation(prefix.clone()));
        return;
    }
    for v in 1..=n as u32 {
        if used[v as usize] {
            continue;
        }
        prefix.push(v);
        if patterns
            .iter()
            .all(|p| !sequence_contains(prefix, p.values()))
        {
            used[v as usize] = true;
            extend_avoiding(n, patterns, used, prefix, out);
            used[v as usize] = false;
        }
        prefix.pop();
    }
}

/// All `n!` permutations of length `n` in lexicographic order.
pub fn all_permutations(n: usize) -> Result<Vec<Permutation>> {
    brute_force_av(n, &PatternSet::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn make_permutation_validates() {
        assert_eq!(
            Permutation::new(vec![1, 4, 3, 2, 6, 5]).unwrap().values(),
            &[1, 4, 3, 2, 6, 5]
        );
        assert!(Permutation::new(vec![]).unwrap().is_empty());
        assert_eq!(
            Permutation::new(vec![1, 3, 3]),
            Err(Error::DuplicateValue(3))
        );
        assert!(matches!(
            Permutation::new(vec![1, 4]),
            Err(Error::OutOfRangeValue { value: 4, len: 2 })
        ));
        assert!(matches!(
            Permutation::new(vec![0]),
            Err(Error::OutOfRangeValue { .. })
        ));
    }

    #[test]
    fn text_format() {
        assert_eq!(p("1 4 3 2 6 5"), p("143265"));
        assert_eq!(p("143265").to_string(), "1 4 3 2 6 5");
        assert_eq!(p(""), Permutation::empty());
        assert_eq!(p("1"), Permutation::identity(1));
        let long = "1 2 3 4 5 6 7 8 9 10";
        assert_eq!(p(long).to_string(), long);
        assert!("12345678910".parse::<Permutation>().is_err());
        assert!("1 x".parse::<Permutation>().is_err());
        assert!(matches!(
            "1 -2".parse::<Permutation>(),
            Err(Error::OutOfRangeValue { value: -2, .. })
        ));
    }

    #[test]
    fn standardize_examples() {
        assert_eq!(standardize(&[1i64, 4, 3, 6, 5]).unwrap(), p("13254"));
        assert_eq!(standardize(&[7i64]).unwrap(), p("1"));
        assert_eq!(standardize::<i64>(&[]).unwrap(), Permutation::empty());
        assert_eq!(standardize(&[5i64, 2, 5]), Err(Error::DuplicateValue(5)));
    }

    #[test]
    fn containment_examples() {
        assert!(contains_pattern(&p("15324"), &p("21")));
        assert!(!contains_pattern(&p("123"), &p("21")));
        assert!(!contains_pattern(&p("15324"), &p("4321")));
        assert!(contains_pattern(&p("15324"), &p("321")));
    }

    #[test]
    fn avoidance_examples() {
        let s = PatternSet::from_literals(&["231", "312"]);
        assert!(avoids_all(&p("321"), &s));
        let s = PatternSet::from_literals(&["231", "312", "321"]);
        assert!(!avoids_all(&p("231"), &s));
        assert!(avoids_all(&Permutation::empty(), &s));
    }

    #[test]
    fn sums() {
        assert_eq!(direct_sum(&p("132"), &p("312")), p("132645"));
        assert_eq!(skew_sum(&p("132"), &p("312")), p("465312"));
        assert_eq!(direct_sum(&Permutation::empty(), &p("21")), p("21"));
        assert_eq!(skew_sum(&Permutation::empty(), &p("21")), p("21"));
        assert_eq!(direct_sum(&p("1"), &p("1")), p("12"));
        assert_eq!(skew_sum(&p("1"), &p("1")), p("21"));
    }

    #[test]
    fn inversion_examples() {
        assert_eq!(inversions(&p("15324")), 4);
        assert_eq!(inversions(&Permutation::identity(9)), 0);
        assert_eq!(inversions(&p("321")), 3);
    }

    #[test]
    fn brute_force_examples() {
        let fib = PatternSet::from_literals(&["231", "312", "321"]);
        let got = brute_force_av(3, &fib).unwrap();
        assert_eq!(got, vec![p("123"), p("132"), p("213")]);
        let s = PatternSet::from_literals(&["231", "312"]);
        let got = brute_force_av(3, &s).unwrap();
        assert_eq!(got, vec![p("123"), p("132"), p("213"), p("321")]);
        assert_eq!(brute_force_av(0, &fib).unwrap(), vec![Permutation::empty()]);
        assert!(matches!(
            brute_force_av(BRUTE_FORCE_MAX_LEN + 1, &fib),
            Err(Error::SizeLimitExceeded { .. })
        ));
    }

    #[test]
    fn all_permutations_are_lexicographic() {
        let all = all_permutations(5).unwrap();
        assert_eq!(all.len(), 120);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn fibonacci_class_counts_match_fib_numbers() {
        let fib = PatternSet::from_literals(&["231", "312", "321"]);
        let counts: Vec<usize> = (0..=10)
            .map(|n| brute_force_av(n, &fib).unwrap().len())
            .collect();
        let expected: Vec<usize> = (0..=10)
            .map(|n| crate::fib::fib_number(n).unwrap() as usize)
            .collect();
        assert_eq!(counts, expected);
    }

    fn arb_perm(max_len: usize) -> impl Strategy<Value = Permutation> {
        (0..=max_len).prop_flat_map(|n| {
            Just((1..=n as u32).collect::<Vec<_>>())
                .prop_shuffle()
                .prop_map(Permutation)
        })
    }

    proptest! {
        #[test]
        fn inversions_add_under_sums(a in arb_perm(8), b in arb_perm(8)) {
            let (ia, ib) = (inversions(&a), inversions(&b));
            prop_assert_eq!(inversions(&direct_sum(&a, &b)), ia + ib);
            prop_assert_eq!(inversions(&skew_sum(&a, &b)), ia + ib + a.len() * b.len());
        }

        #[test]
        fn sums_are_associative(a in arb_perm(5), b in arb_perm(5), c in arb_perm(5)) {
            prop_assert_eq!(
                direct_sum(&direct_sum(&a, &b), &c),
                direct_sum(&a, &direct_sum(&b, &c))
            );
            prop_assert_eq!(
                skew_sum(&skew_sum(&a, &b), &c),
                skew_sum(&a, &skew_sum(&b, &c))
            );
            let e = Permutation::empty();
            prop_assert_eq!(direct_sum(&e, &a), a.clone());
            prop_assert_eq!(direct_sum(&a, &e), a.clone());
            prop_assert_eq!(skew_sum(&e, &a), a.clone());
            prop_assert_eq!(skew_sum(&a, &e), a);
        }

        #[test]
        fn standardize_is_idempotent(a in arb_perm(12)) {
            prop_assert_eq!(standardize(a.values()).unwrap(), a);
        }

        #[test]
        fn containment_basics(a in arb_perm(7), b in arb_perm(7)) {
            if !a.is_empty() {
                prop_assert!(contains_pattern(&a, &a));
            }
            if b.len() > a.len() {
                prop_assert!(!contains_pattern(&a, &b));
            }
        }

        #[test]
        fn text_round_trip(a in arb_perm(14)) {
            prop_assert_eq!(a.to_string().parse::<Permutation>().unwrap(), a);
        }
    }
}
