//! The four classes `Av(A1)`, `Av(A2)`, `Av(B1)`, `Av(B2)`.
//!
//! Every member is either a Fibonacci permutation or has a fixed
//! non-Fibonacci head followed by a Fibonacci tail on the top values:
//!
//! * `A1`: `1 2 … a` then `321` on the next three values, then the tail;
//! * `A2`: the same with `312` as the core;
//! * `B1`: `ℓ ℓ-1 … 1` then the tail;
//! * `B2`: `2 3 … ℓ 1` then the tail.
//!
//! [`generate`] builds each class directly from that shape, and
//! [`decompose`] / [`compose`] move between a member and its witness.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fib::{fib_number, fib_permutations, is_fibonacci};
use crate::perm::{avoids_all, standardize_distinct, PatternSet, Permutation};

/// Largest length [`generate`] will build.
pub const GENERATE_MAX_LEN: usize = 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ClassId {
    A1,
    A2,
    B1,
    B2,
}

impl ClassId {
    pub const ALL: [ClassId; 4] = [ClassId::A1, ClassId::A2, ClassId::B1, ClassId::B2];

    pub fn name(self) -> &'static str {
        match self {
            ClassId::A1 => "A1",
            ClassId::A2 => "A2",
            ClassId::B1 => "B1",
            ClassId::B2 => "B2",
        }
    }

    pub fn is_a(self) -> bool {
        matches!(self, ClassId::A1 | ClassId::A2)
    }

    pub fn patterns(self) -> PatternSet {
        patterns_of(self)
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A1" => Ok(ClassId::A1),
            "A2" => Ok(ClassId::A2),
            "B1" => Ok(ClassId::B1),
            "B2" => Ok(ClassId::B2),
            _ => Err(Error::Parse {
                what: "class",
                input: s.to_string(),
            }),
        }
    }
}

pub fn patterns_of(class: ClassId) -> PatternSet {
    PatternSet::from_literals(match class {
        ClassId::A1 => &["231", "312", "4321", "21543"],
        ClassId::A2 => &["231", "321", "4123", "21534"],
        ClassId::B1 => &["231", "312", "1432"],
        ClassId::B2 => &["312", "321", "1342"],
    })
}

/// Witness for a member of `Av(A1)` or `Av(A2)`: `1…incr_len ⊕ core ⊕ tau`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ADecomposition {
    pub incr_len: usize,
    pub core_present: bool,
    pub tau: Permutation,
}

/// Witness for a member of `Av(B1)` or `Av(B2)`: a head of `pre_len`
/// entries ending in the value 1, then `sigma` on the top values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BDecomposition {
    pub pre_len: usize,
    pub sigma: Permutation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Decomposition {
    A(ADecomposition),
    B(BDecomposition),
}

/// The three-entry core of an A-class, as it appears on values `1..=3`.
fn core(class: ClassId) -> [u32; 3] {
    match class {
        ClassId::A1 => [3, 2, 1],
        ClassId::A2 => [3, 1, 2],
        _ => unreachable!("B-classes have no core"),
    }
}

/// The head of a B-class member with `pre_len` entries.
fn pre_part(class: ClassId, pre_len: usize) -> Vec<u32> {
    let l = pre_len as u32;
    match class {
        ClassId::B1 => (1..=l).rev().collect(),
        ClassId::B2 => (2..=l).chain(std::iter::once(1)).collect(),
        _ => unreachable!("A-classes have no pre-part"),
    }
}

fn with_tail(mut head: Vec<u32>, tail: &Permutation) -> Permutation {
    let shift = head.len() as u32;
    head.extend(tail.values().iter().map(|&v| v + shift));
    Permutation::from_vec_unchecked(head)
}

fn a_member(class: ClassId, incr_len: usize, tau: &Permutation) -> Permutation {
    let a = incr_len as u32;
    let mut head: Vec<u32> = (1..=a).collect();
    head.extend(core(class).iter().map(|&c| c + a));
    with_tail(head, tau)
}

fn b_member(class: ClassId, pre_len: usize, sigma: &Permutation) -> Permutation {
    with_tail(pre_part(class, pre_len), sigma)
}

/// Every member of the class of length `n` exactly once, in lexicographic
/// order, built from the structure rather than by filtering.
pub fn generate(class: ClassId, n: usize) -> Result<Vec<Permutation>> {
    if n > GENERATE_MAX_LEN {
        return Err(Error::SizeLimitExceeded {
            n,
            max: GENERATE_MAX_LEN,
        });
    }
    let mut out = fib_permutations(n);
    if n >= 3 {
        for tail_len in 0..=n - 3 {
            for tail in fib_permutations(tail_len) {
                out.push(if class.is_a() {
                    a_member(class, n - 3 - tail_len, &tail)
                } else {
                    // Pre-parts of length 1 and 2 are Fibonacci already.
                    b_member(class, n - tail_len, &tail)
                });
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// `|Av_n| = F_{n+1} - 1` for `n >= 1`, by closed form.
pub fn count(_class: ClassId, n: usize) -> Result<u128> {
    if n == 0 {
        return Err(Error::UnsupportedLength { n, min: 1 });
    }
    Ok(fib_number(n + 1)? - 1)
}

fn find_core(class: ClassId, values: &[u32]) -> Option<usize> {
    let shape = core(class);
    values.windows(3).position(|w| {
        let low = *w.iter().min().unwrap();
        w.iter().zip(shape).all(|(&x, s)| x - low + 1 == s)
    })
}

/// Structural witness for a class member.
pub fn decompose(class: ClassId, perm: &Permutation) -> Result<Decomposition> {
    if !avoids_all(perm, &patterns_of(class)) {
        return Err(Error::NotInClass(class));
    }
    let v = perm.values();
    if class.is_a() {
        if is_fibonacci(perm) {
            return Ok(Decomposition::A(ADecomposition {
                incr_len: 0,
                core_present: false,
                tau: perm.clone(),
            }));
        }
        let start = find_core(class, v).ok_or(Error::NotInClass(class))?;
        Ok(Decomposition::A(ADecomposition {
            incr_len: start,
            core_present: true,
            tau: standardize_distinct(&v[start + 3..]),
        }))
    } else {
        let one = perm.position_of(1).ok_or_else(|| {
            Error::InvalidDecomposition("the empty permutation has no entry 1".into())
        })?;
        Ok(Decomposition::B(BDecomposition {
            pre_len: one + 1,
            sigma: standardize_distinct(&v[one + 1..]),
        }))
    }
}

/// Inverse of [`decompose`].
pub fn compose(class: ClassId, decomposition: &Decomposition) -> Result<Permutation> {
    match (class.is_a(), decomposition) {
        (true, Decomposition::A(d)) => {
            if !is_fibonacci(&d.tau) {
                return Err(Error::InvalidDecomposition("tau is not Fibonacci".into()));
            }
            if !d.core_present {
                if d.incr_len != 0 {
                    return Err(Error::InvalidDecomposition(
                        "an increasing prefix needs a core".into(),
                    ));
                }
                return Ok(d.tau.clone());
            }
            Ok(a_member(class, d.incr_len, &d.tau))
        }
        (false, Decomposition::B(d)) => {
            if d.pre_len == 0 {
                return Err(Error::InvalidDecomposition(
                    "pre_len must be at least 1".into(),
                ));
            }
            if !is_fibonacci(&d.sigma) {
                return Err(Error::InvalidDecomposition("sigma is not Fibonacci".into()));
            }
            Ok(b_member(class, d.pre_len, &d.sigma))
        }
        _ => Err(Error::InvalidDecomposition(format!(
            "decomposition kind does not match class {class}"
        ))),
    }
}
