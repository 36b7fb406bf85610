//! Fibonacci numbers (with `F_0 = F_1 = 1`), monomino/domino tilings,
//! Fibonacci permutations and the block bijection between them, and the
//! `Fib` statistic.
//!
//! A Fibonacci permutation is an increasing sequence of blocks, each block
//! either a single entry or a descent of two consecutive values (`i+1, i`).
//! Mapping single entries to monominoes and descents to dominoes gives the
//! bijection with tilings implemented by [`perm_to_tiling`] and
//! [`tiling_to_perm`].

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// `F_n` with `F_0 = F_1 = 1`.
pub fn fib_number(n: usize) -> Result<u128> {
    let (mut a, mut b) = (1u128, 1u128);
    for _ in 1..n {
        let next = a
            .checked_add(b)
            .ok_or_else(|| Error::Overflow(format!("F_{n}")))?;
        a = b;
        b = next;
    }
    Ok(b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tile {
    Monomino,
    Domino,
}

impl Tile {
    pub fn cells(self) -> usize {
        match self {
            Tile::Monomino => 1,
            Tile::Domino => 2,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Tile::Monomino => 'm',
            Tile::Domino => 'd',
        }
    }
}

/// A word of tiles covering a `1 × cells()` board.
///
/// `Ord` is positionwise with the monomino first, which is also the order
/// [`tilings`] produces.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tiling(Vec<Tile>);

impl Tiling {
    pub fn new(tiles: Vec<Tile>) -> Self {
        Tiling(tiles)
    }

    pub fn empty() -> Self {
        Tiling(Vec::new())
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.0
    }

    pub fn cells(&self) -> usize {
        self.0.iter().map(|t| t.cells()).sum()
    }

    pub fn dominoes(&self) -> usize {
        self.0.iter().filter(|&&t| t == Tile::Domino).count()
    }

    pub fn monominoes(&self) -> usize {
        self.0.len() - self.dominoes()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Tiling concatenation.
    pub fn concat(&self, other: &Tiling) -> Tiling {
        let mut tiles = self.0.clone();
        tiles.extend_from_slice(&other.0);
        Tiling(tiles)
    }

    pub fn prepend(&self, tile: Tile) -> Tiling {
        let mut tiles = Vec::with_capacity(self.0.len() + 1);
        tiles.push(tile);
        tiles.extend_from_slice(&self.0);
        Tiling(tiles)
    }
}

impl fmt::Display for Tiling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.0 {
            write!(f, "{}", t.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for Tiling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                'm' => Ok(Tile::Monomino),
                'd' => Ok(Tile::Domino),
                _ => Err(Error::MalformedTiling(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()
            .map(Tiling)
    }
}

impl Serialize for Tiling {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// All tilings of `cells` cells, monomino-first lexicographic order.
pub fn tilings(cells: usize) -> Vec<Tiling> {
    let mut out = Vec::new();
    let mut word = Vec::new();
    fill(cells, &mut word, &mut out);
    out
}

fn fill(remaining: usize, word: &mut Vec<Tile>, out: &mut Vec<Tiling>) {
    if remaining == 0 {
        out.push(Tiling(word.clone()));
        return;
    }
    word.push(Tile::Monomino);
    fill(remaining - 1, word, out);
    word.pop();
    if remaining >= 2 {
        word.push(Tile::Domino);
        fill(remaining - 2, word, out);
        word.pop();
    }
}

/// Block lengths of a Fibonacci permutation, or `None` if it is not one.
fn blocks(values: &[u32]) -> Option<Vec<Tile>> {
    let mut tiles = Vec::new();
    let mut i = 0;
    while i < values.len() {
        let next = i as u32 + 1;
        if values[i] == next {
            tiles.push(Tile::Monomino);
            i += 1;
        } else if values[i] == next + 1 && values.get(i + 1) == Some(&next) {
            tiles.push(Tile::Domino);
            i += 2;
        } else {
            return None;
        }
    }
    Some(tiles)
}

/// True iff `perm` avoids 231, 312 and 321.
///
/// Decided through the block structure in linear time; the tests check it
/// against direct pattern search.
pub fn is_fibonacci(perm: &Permutation) -> bool {
    blocks(perm.values()).is_some()
}

/// `Φ`: descent blocks become dominoes, single entries monominoes.
pub fn perm_to_tiling(perm: &Permutation) -> Result<Tiling> {
    blocks(perm.values()).map(Tiling).ok_or(Error::NotFibonacci)
}

/// `Φ⁻¹`.
pub fn tiling_to_perm(tiling: &Tiling) -> Permutation {
    Permutation::from_vec_unchecked(tiling_values(tiling.tiles(), 0))
}

/// Values of `Φ⁻¹(tiles)` shifted up by `offset`.
pub(crate) fn tiling_values(tiles: &[Tile], offset: u32) -> Vec<u32> {
    let mut values = Vec::new();
    let mut next = offset + 1;
    for t in tiles {
        match t {
            Tile::Monomino => {
                values.push(next);
                next += 1;
            }
            Tile::Domino => {
                values.push(next + 1);
                values.push(next);
                next += 2;
            }
        }
    }
    values
}

/// All Fibonacci permutations of length `n`, built from tilings, in
/// lexicographic order (the monomino-first tiling order maps onto it).
pub fn fib_permutations(n: usize) -> Vec<Permutation> {
    tilings(n).iter().map(tiling_to_perm).collect()
}

/// The `Fib` statistic: the largest `k` such that the last `k` entries are
/// exactly the values `n-k+1..=n` and form a Fibonacci permutation.
///
/// `k = 0` always qualifies, so the statistic is defined for every
/// permutation (including the empty one).
pub fn fib_stat(perm: &Permutation) -> usize {
    let v = perm.values();
    let n = v.len();
    let mut min = u32::MAX;
    // Last k entries are the top k values iff their minimum is n-k+1.
    let mut suffix_min = vec![u32::MAX; n + 1];
    for i in (0..n).rev() {
        min = min.min(v[i]);
        suffix_min[i] = min;
    }
    for k in (1..=n).rev() {
        let start = n - k;
        let low = (n - k + 1) as u32;
        if suffix_min[start] != low {
            continue;
        }
        let window: Vec<u32> = v[start..].iter().map(|&x| x - (low - 1)).collect();
        if blocks(&window).is_some() {
            return k;
        }
    }
    0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{all_permutations, avoids_all, inversions, standardize, PatternSet};

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn t(s: &str) -> Tiling {
        s.parse().unwrap()
    }

    #[test]
    fn fib_numbers() {
        let got: Vec<u128> = (0..=6).map(|n| fib_number(n).unwrap()).collect();
        assert_eq!(got, vec![1, 1, 2, 3, 5, 8, 13]);
        // F_n here is the standard Fibonacci number with index n + 1, and the
        // standard F_186 is the last one that fits in a u128.
        assert!(fib_number(185).is_ok());
        assert!(matches!(fib_number(186), Err(Error::Overflow(_))));
    }

    #[test]
    fn is_fibonacci_examples() {
        assert!(is_fibonacci(&p("213")));
        assert!(!is_fibonacci(&p("231")));
        assert!(is_fibonacci(&p("2135467")));
        assert!(is_fibonacci(&Permutation::empty()));
    }

    #[test]
    fn is_fibonacci_agrees_with_pattern_search() {
        let fib = PatternSet::from_literals(&["231", "312", "321"]);
        for n in 0..=8 {
            for q in all_permutations(n).unwrap() {
                assert_eq!(is_fibonacci(&q), avoids_all(&q, &fib), "{q}");
            }
        }
    }

    #[test]
    fn fib_permutations_examples() {
        assert_eq!(fib_permutations(3), vec![p("123"), p("132"), p("213")]);
        assert_eq!(fib_permutations(0), vec![Permutation::empty()]);
        assert_eq!(fib_permutations(2), vec![p("12"), p("21")]);
    }

    #[test]
    fn fib_permutations_match_brute_force() {
        let fib = PatternSet::from_literals(&["231", "312", "321"]);
        for n in 0..=10 {
            assert_eq!(
                fib_permutations(n),
                crate::perm::brute_force_av(n, &fib).unwrap()
            );
        }
    }

    #[test]
    fn tiling_examples() {
        assert_eq!(tilings(2), vec![t("mm"), t("d")]);
        assert_eq!(tilings(3), vec![t("mmm"), t("md"), t("dm")]);
        assert_eq!(tilings(0), vec![Tiling::empty()]);
        for cells in 0..=20 {
            assert_eq!(tilings(cells).len() as u128, fib_number(cells).unwrap());
        }
    }

    #[test]
    fn tiling_parse() {
        assert_eq!(t("mddmm").to_string(), "mddmm");
        assert_eq!(t("mddmm").cells(), 7);
        assert!(matches!(
            "mdx".parse::<Tiling>(),
            Err(Error::MalformedTiling(_))
        ));
    }

    #[test]
    fn phi_examples() {
        assert_eq!(perm_to_tiling(&p("1324576")).unwrap(), t("mdmmd"));
        assert_eq!(perm_to_tiling(&Permutation::empty()).unwrap(), t(""));
        assert_eq!(perm_to_tiling(&p("21")).unwrap(), t("d"));
        assert_eq!(perm_to_tiling(&p("231")), Err(Error::NotFibonacci));
        assert_eq!(tiling_to_perm(&t("dmdmm")), p("2135467"));
        assert_eq!(tiling_to_perm(&t("m")), p("1"));
        assert_eq!(tiling_to_perm(&t("dd")), p("2143"));
    }

    #[test]
    fn phi_is_a_bijection_counting_inversions_by_dominoes() {
        for n in 0..=12 {
            let perms = fib_permutations(n);
            let tiles = tilings(n);
            assert_eq!(perms.len(), tiles.len());
            for (q, tl) in perms.iter().zip(&tiles) {
                assert_eq!(&perm_to_tiling(q).unwrap(), tl);
                assert_eq!(&tiling_to_perm(tl), q);
                assert_eq!(tl.dominoes(), inversions(q));
                assert_eq!(tl.cells(), n);
            }
        }
    }

    #[test]
    fn eq1_corrected_lower_bound() {
        for n in 0..=30 {
            let sum: u128 = (0..=n).map(|k| fib_number(k).unwrap()).sum();
            assert_eq!(sum, fib_number(n + 2).unwrap() - 1);
        }
        // As printed, starting at k = 1, the identity already fails at n = 1.
        assert_ne!(fib_number(1).unwrap(), fib_number(3).unwrap() - 1);
    }

    #[test]
    fn fib_stat_examples() {
        assert_eq!(fib_stat(&p("321")), 0);
        assert_eq!(fib_stat(&p("2341657")), 3);
        assert_eq!(fib_stat(&p("1253467")), 2);
        assert_eq!(fib_stat(&p("132")), 3);
        assert_eq!(fib_stat(&p("231")), 0);
        assert_eq!(fib_stat(&Permutation::empty()), 0);
    }

    /// Direct reading of the definition: try every window length.
    fn fib_stat_oracle(q: &Permutation) -> usize {
        let n = q.len();
        (0..=n)
            .filter(|&k| {
                let window = &q.values()[n - k..];
                let top: Vec<u32> = ((n - k + 1) as u32..=n as u32).collect();
                let mut sorted = window.to_vec();
                sorted.sort_unstable();
                let fib = PatternSet::from_literals(&["231", "312", "321"]);
                sorted == top && avoids_all(&standardize(window).unwrap(), &fib)
            })
            .max()
            .unwrap()
    }

    #[test]
    fn fib_stat_agrees_with_definition() {
        for n in 0..=7 {
            for q in all_permutations(n).unwrap() {
                assert_eq!(fib_stat(&q), fib_stat_oracle(&q), "{q}");
            }
        }
    }

    #[test]
    fn fib_stat_is_full_length_on_fibonacci_permutations() {
        for n in 0..=12 {
            for q in fib_permutations(n) {
                assert_eq!(fib_stat(&q), n);
            }
        }
    }
}
