//! Identity verification: every formula, construction and bijection checked
//! against exhaustive tabulation, with the first disagreement captured.
//!
//! Reports always put the ground truth (brute force, structural generation
//! or direct summation) on the left and the expression under test on the
//! right.
//!
//! Where a printed identity is false, the corrected reading lives in the
//! [`registry`]. A registry entry is only trusted after
//! [`validate_registry`] has re-checked it over its declared range.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::bijections::{phi, phi_inverse, rho, rho_inverse};
use crate::classes::{count, generate, patterns_of, ClassId};
use crate::error::{Error, Result};
use crate::fib::{fib_number, tilings, Tile, Tiling};
use crate::genfun::{
    genfun_addition, genfun_closed, genfun_oracle, genfun_recurrence, recurrence_rhs,
};
use crate::perm::brute_force_av;
use crate::poly::BivariatePolynomial as Poly;
use crate::stats::{
    binomial, fib_distribution_formula, fib_distribution_oracle, fib_distribution_uncaveated,
    fib_inv_count, fib_inv_oracle, inv_distribution_formula, inv_distribution_oracle,
    inv_distribution_summation, joint_distribution_formula, joint_distribution_oracle, Variant,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IdentityId {
    Counts,
    ARecurrence,
    Eq1,
    HockeyStick,
    FibInv,
    InvDist,
    FibDist,
    JointDist,
    GfClosed,
    GfRecurrence,
    GfAddition,
    BijectionImage,
    StructureOracle,
}

impl IdentityId {
    pub const ALL: [IdentityId; 13] = [
        IdentityId::Counts,
        IdentityId::ARecurrence,
        IdentityId::Eq1,
        IdentityId::HockeyStick,
        IdentityId::FibInv,
        IdentityId::InvDist,
        IdentityId::FibDist,
        IdentityId::JointDist,
        IdentityId::GfClosed,
        IdentityId::GfRecurrence,
        IdentityId::GfAddition,
        IdentityId::BijectionImage,
        IdentityId::StructureOracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::Counts => "counts",
            IdentityId::ARecurrence => "a-recurrence",
            IdentityId::Eq1 => "eq1",
            IdentityId::HockeyStick => "hockey-stick",
            IdentityId::FibInv => "fib-inv",
            IdentityId::InvDist => "inv-dist",
            IdentityId::FibDist => "fib-dist",
            IdentityId::JointDist => "joint-dist",
            IdentityId::GfClosed => "gf-closed",
            IdentityId::GfRecurrence => "gf-recurrence",
            IdentityId::GfAddition => "gf-addition",
            IdentityId::BijectionImage => "bijection-image",
            IdentityId::StructureOracle => "structure-oracle",
        }
    }

    /// One-line statement of what is being checked.
    pub fn statement(self) -> &'static str {
        match self {
            IdentityId::Counts => "|Av_n(C)| = F_{n+1} - 1",
            IdentityId::ARecurrence => "a_n = a_{n-1} + a_{n-2} + 1 with a_n = F_{n+1} - 1",
            IdentityId::Eq1 => "sum_{k=1..n} F_k = F_{n+2} - 1",
            IdentityId::HockeyStick => {
                "sum_{i=r..n} C(i,r) = C(n+1,r+1); A-class inversion sums collapse"
            }
            IdentityId::FibInv => "Fibonacci permutations with k inversions: C(n-k,k)",
            IdentityId::InvDist => "inversion distribution closed forms",
            IdentityId::FibDist => "members with Fib = k: F_k",
            IdentityId::JointDist => "joint (Fib, inv) distribution closed forms",
            IdentityId::GfClosed => "G_n = F_n(q) v^n + sum_{j=0}^{n-3} q^e(j) v^j F_j(q)",
            IdentityId::GfRecurrence => "G_n = head(n) + v G_{n-1} + q v^2 G_{n-2} for n >= 2",
            IdentityId::GfAddition => "addition formula for G_{m+n}",
            IdentityId::BijectionImage => "phi / rho are bijections onto the stated tilings",
            IdentityId::StructureOracle => "structural generation equals Av_n by brute force",
        }
    }

    pub fn needs_class(self) -> bool {
        !matches!(
            self,
            IdentityId::ARecurrence
                | IdentityId::Eq1
                | IdentityId::HockeyStick
                | IdentityId::FibInv
        )
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::UnknownIdentity(s.to_string()))
    }
}

impl Serialize for IdentityId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Inclusive parameter ranges. `m` is only read by the addition formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ParamRange {
    pub n_min: usize,
    pub n_max: usize,
    pub m_min: usize,
    pub m_max: usize,
}

impl ParamRange {
    pub fn n(n_min: usize, n_max: usize) -> Self {
        ParamRange {
            n_min,
            n_max,
            m_min: 0,
            m_max: 0,
        }
    }

    pub fn mn(m_min: usize, m_max: usize, n_min: usize, n_max: usize) -> Self {
        ParamRange {
            n_min,
            n_max,
            m_min,
            m_max,
        }
    }
}

impl fmt::Display for ParamRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m_max > 0 {
            write!(f, "m={}..{}, ", self.m_min, self.m_max)?;
        }
        write!(f, "n={}..{}", self.n_min, self.n_max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    NotEvaluable,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NotEvaluable => "not-evaluable",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Evidence {
    Coefficient {
        v_exp: u32,
        q_exp: u32,
        lhs: i128,
        rhs: i128,
    },
    Value {
        lhs: i128,
        rhs: i128,
    },
    Detail {
        detail: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub parameters: BTreeMap<&'static str, usize>,
    pub evidence: Evidence,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self
            .parameters
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        write!(f, "at {}: ", params.join(", "))?;
        match &self.evidence {
            Evidence::Coefficient {
                v_exp,
                q_exp,
                lhs,
                rhs,
            } => write!(
                f,
                "coefficient of v^{v_exp} q^{q_exp}: lhs {lhs}, rhs {rhs}"
            ),
            Evidence::Value { lhs, rhs } => write!(f, "lhs {lhs}, rhs {rhs}"),
            Evidence::Detail { detail } => f.write_str(detail),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub identity_id: IdentityId,
    pub class: Option<ClassId>,
    pub variant: Variant,
    pub parameter_range: ParamRange,
    pub status: Status,
    /// Number of parameter points compared.
    pub checked: usize,
    pub mismatches: usize,
    pub first_mismatch: Option<Mismatch>,
    /// The first [`MISMATCH_SAMPLE`] mismatches in parameter order.
    pub mismatch_sample: Vec<Mismatch>,
    pub notes: String,
}

pub const MISMATCH_SAMPLE: usize = 64;

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// A corrected reading of a printed identity.
#[derive(Clone, Debug, Serialize)]
pub struct Correction {
    pub identity: IdentityId,
    /// Classes the correction applies to; empty for class-free identities.
    pub classes: &'static [ClassId],
    pub printed: &'static str,
    pub corrected: &'static str,
    pub derivation: &'static str,
    pub range: ParamRange,
}

const ALL_CLASSES: &[ClassId] = &ClassId::ALL;

static REGISTRY: &[Correction] = &[
    Correction {
        identity: IdentityId::Eq1,
        classes: &[],
        printed: "sum_{k=1..n} F_k = F_{n+2} - 1",
        corrected: "sum_{k=0..n} F_k = F_{n+2} - 1",
        derivation: "with F_0 = F_1 = 1 the sum must include F_0; n = 1 gives 1 on the left and 2 on the right as printed",
        range: ParamRange { n_min: 0, n_max: 30, m_min: 0, m_max: 0 },
    },
    Correction {
        identity: IdentityId::FibDist,
        classes: ALL_CLASSES,
        printed: "F_k members with Fib = k, for every k",
        corrected: "F_k for 0 <= k <= n-3, F_n for k = n, 0 for k in {n-2, n-1}",
        derivation: "a non-Fibonacci member has a head of at least three entries, so Fib = n-1 and n-2 never occur",
        range: ParamRange { n_min: 1, n_max: 9, m_min: 0, m_max: 0 },
    },
    Correction {
        identity: IdentityId::JointDist,
        classes: &[ClassId::B2],
        printed: "C(2k+j+1-n, j+k+1-n)",
        corrected: "C(n-j-1, j+k+1-n)",
        derivation: "the head 2..l,1 has n-k-1 inversions, leaving i = j+k+1-n for a Fibonacci tail of length k: C(k-i, i)",
        range: ParamRange { n_min: 1, n_max: 9, m_min: 0, m_max: 0 },
    },
    Correction {
        identity: IdentityId::GfClosed,
        classes: &[ClassId::B1],
        printed: "q^C(j,2)",
        corrected: "q^C(n-j,2)",
        derivation: "the decreasing head has length n-j, not j",
        range: ParamRange { n_min: 3, n_max: 10, m_min: 0, m_max: 0 },
    },
    Correction {
        identity: IdentityId::GfClosed,
        classes: &[ClassId::B2],
        printed: "q^(j-1)",
        corrected: "q^(n-j-1)",
        derivation: "the head 2..l,1 has length n-j and n-j-1 inversions; the printed exponent is negative at j = 0",
        range: ParamRange { n_min: 3, n_max: 10, m_min: 0, m_max: 0 },
    },
    Correction {
        identity: IdentityId::GfRecurrence,
        classes: ALL_CLASSES,
        printed: "valid for n >= 2 (with G_0 = 1, G_1 = v)",
        corrected: "valid for n >= 3 with G_1 = v, G_2 = v^2 + q v^2",
        derivation: "the head term describes a member of length at least 3; at n = 2 it is spurious",
        range: ParamRange { n_min: 3, n_max: 12, m_min: 0, m_max: 0 },
    },
    Correction {
        identity: IdentityId::GfAddition,
        classes: &[ClassId::A1, ClassId::A2],
        printed: "v^{n+2} q G_{m-1} F_{n-1}",
        corrected: "v^{n+1} q G_{m-1} F_{n-1}",
        derivation: "pulling out the split descent adds 2 to Fib on top of the n-1 tail entries, total n+1",
        range: ParamRange { n_min: 2, n_max: 8, m_min: 2, m_max: 8 },
    },
    Correction {
        identity: IdentityId::GfAddition,
        classes: &[ClassId::B1],
        printed: "v^{n+2} q G_{m-1} F_{n-1} + v^C(m,2) sum_{i=0}^{n} v^i F_i q^(C(i,2)+im)",
        corrected: "v^{n+1} q G_{m-1} F_{n-1} + q^C(m,2) sum_{i=0}^{n-1} v^i F_i q^(C(n-i,2)+(n-i)m)",
        derivation: "a head longer than m has length m+n-i with C(m+n-i,2) inversions and Fib = i",
        range: ParamRange { n_min: 2, n_max: 8, m_min: 2, m_max: 8 },
    },
    Correction {
        identity: IdentityId::GfAddition,
        classes: &[ClassId::B2],
        printed: "q v^{n+2} G_{m-1} F_{n-1} + q^m v^{n-1} F_{n-1} + q^m (G_n - v^n F_n)",
        corrected: "q v^{n+1} G_{m-1} F_{n-1} + q^m v^{n-1} F_{n-1} + q^{m+1} v^{n-2} F_{n-2} + q^m (G_n - v^n F_n)",
        derivation: "a head of length m+2 (Fib = n-2, m+1 inversions) is counted by no printed term",
        range: ParamRange { n_min: 2, n_max: 8, m_min: 2, m_max: 8 },
    },
];

pub fn registry() -> &'static [Correction] {
    REGISTRY
}

/// The registry entry covering `identity` for `class`, if any.
pub fn correction_for(identity: IdentityId, class: Option<ClassId>) -> Option<&'static Correction> {
    REGISTRY.iter().find(|c| {
        c.identity == identity
            && match class {
                Some(cl) => c.classes.contains(&cl),
                None => c.classes.is_empty(),
            }
    })
}

/// Re-checks every registry entry over its declared range, one report per
/// class covered.
pub fn validate_registry() -> Result<Vec<IdentityReport>> {
    let mut out = Vec::new();
    for entry in REGISTRY {
        if entry.classes.is_empty() {
            out.push(check_identity(
                entry.identity,
                Variant::Corrected,
                None,
                &entry.range,
            )?);
        } else {
            for &c in entry.classes {
                out.push(check_identity(
                    entry.identity,
                    Variant::Corrected,
                    Some(c),
                    &entry.range,
                )?);
            }
        }
    }
    Ok(out)
}

/// Accumulates comparisons, remembering the first disagreement.
struct Tally {
    checked: usize,
    mismatches: usize,
    sample: Vec<Mismatch>,
    notes: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            checked: 0,
            mismatches: 0,
            sample: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn record(&mut self, params: &[(&'static str, usize)], evidence: Option<Evidence>) {
        self.checked += 1;
        if let Some(evidence) = evidence {
            self.mismatches += 1;
            if self.sample.len() < MISMATCH_SAMPLE {
                self.sample.push(Mismatch {
                    parameters: params.iter().copied().collect(),
                    evidence,
                });
            }
        }
    }

    fn values(&mut self, params: &[(&'static str, usize)], lhs: u128, rhs: u128) {
        let ev = (lhs != rhs).then_some(Evidence::Value {
            lhs: lhs as i128,
            rhs: rhs as i128,
        });
        self.record(params, ev);
    }

    fn polys(&mut self, params: &[(&'static str, usize)], lhs: &Poly, rhs: &Poly) {
        let ev = lhs
            .first_difference(rhs)
            .map(|(v_exp, q_exp, lhs, rhs)| Evidence::Coefficient {
                v_exp,
                q_exp,
                lhs,
                rhs,
            });
        self.record(params, ev);
    }

    fn detail(&mut self, params: &[(&'static str, usize)], problem: Option<String>) {
        self.record(params, problem.map(|detail| Evidence::Detail { detail }));
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

fn fib(n: usize) -> u128 {
    fib_number(n).expect("F_n within range")
}

/// Runs one identity check over `range`.
pub fn check_identity(
    identity: IdentityId,
    variant: Variant,
    class: Option<ClassId>,
    range: &ParamRange,
) -> Result<IdentityReport> {
    let class = if identity.needs_class() {
        Some(class.ok_or(Error::MissingClass(identity.name()))?)
    } else {
        None
    };
    let c = class.unwrap_or(ClassId::A1);
    let mut t = Tally::new();
    let mut range = *range;
    let mut not_evaluable: Option<String> = None;

    if variant == Variant::Corrected {
        match correction_for(identity, class) {
            Some(entry) => t.note(format!("corrected reading: {}", entry.corrected)),
            None => t.note("no correction registered; corrected reading is the printed one"),
        }
    }

    match identity {
        IdentityId::Counts => {
            range.n_min = range.n_min.max(1);
            for n in range.n_min..=range.n_max {
                let generated = generate(c, n)?.len() as u128;
                let closed = count(c, n)?;
                t.values(&[("n", n)], generated, closed);
                t.values(&[("n", n)], fib(n + 1) - 1, closed);
            }
        }
        IdentityId::ARecurrence => {
            range.n_min = range.n_min.max(2);
            let a = |n: usize| fib(n + 1) - 1;
            for n in range.n_min..=range.n_max {
                t.values(&[("n", n)], a(n), a(n - 1) + a(n - 2) + 1);
            }
        }
        IdentityId::Eq1 => {
            let start = match variant {
                Variant::Paper => 1,
                Variant::Corrected => 0,
            };
            for n in range.n_min..=range.n_max {
                let sum: u128 = (start..=n).map(fib).sum();
                t.values(&[("n", n)], sum, fib(n + 2) - 1);
            }
        }
        IdentityId::HockeyStick => {
            for n in range.n_min.max(1)..=range.n_max {
                let n_i = n as i64;
                for r in 0..n_i {
                    let lhs: u128 = (r..=n_i).map(|i| binomial(i, r)).sum::<Result<u128>>()?;
                    t.values(
                        &[("n", n), ("r", r as usize)],
                        lhs,
                        binomial(n_i + 1, r + 1)?,
                    );
                }
            }
            for cl in [ClassId::A1, ClassId::A2] {
                for n in range.n_min.max(1)..=range.n_max {
                    for k in 0..=n * (n - 1) / 2 {
                        t.values(
                            &[("class", cl as usize), ("n", n), ("k", k)],
                            inv_distribution_summation(cl, n, k),
                            inv_distribution_formula(cl, n, k),
                        );
                    }
                }
            }
            t.note("class parameter: 0 = A1, 1 = A2");
        }
        IdentityId::FibInv => {
            for n in range.n_min..=range.n_max {
                let oracle = fib_inv_oracle(n);
                for k in 0..=n {
                    t.values(&[("n", n), ("k", k)], oracle.get(k), fib_inv_count(n, k));
                }
            }
        }
        IdentityId::InvDist => {
            range.n_min = range.n_min.max(1);
            for n in range.n_min..=range.n_max {
                let oracle = inv_distribution_oracle(c, n)?;
                for k in 0..=n * (n - 1) / 2 {
                    t.values(
                        &[("n", n), ("k", k)],
                        oracle.get(k),
                        inv_distribution_formula(c, n, k),
                    );
                }
            }
        }
        IdentityId::FibDist => {
            range.n_min = range.n_min.max(1);
            for n in range.n_min..=range.n_max {
                let oracle = fib_distribution_oracle(c, n)?;
                for k in 0..=n {
                    let formula = match variant {
                        Variant::Paper => fib_distribution_uncaveated(n, k),
                        Variant::Corrected => fib_distribution_formula(c, n, k),
                    };
                    t.values(&[("n", n), ("k", k)], oracle.get(k), formula);
                }
            }
        }
        IdentityId::JointDist => {
            range.n_min = range.n_min.max(1);
            for n in range.n_min..=range.n_max {
                let oracle = joint_distribution_oracle(c, n)?;
                for k in 0..=n {
                    for j in 0..=n * (n - 1) / 2 {
                        t.values(
                            &[("n", n), ("k", k), ("j", j)],
                            oracle.get((k, j)),
                            joint_distribution_formula(c, n, k, j, variant),
                        );
                    }
                }
            }
        }
        IdentityId::GfClosed => {
            range.n_min = range.n_min.max(3);
            for n in range.n_min..=range.n_max {
                match genfun_closed(c, n, variant) {
                    Ok(closed) => t.polys(&[("n", n)], &genfun_oracle(c, n)?, &closed),
                    Err(Error::NotEvaluable(why)) => {
                        t.checked += 1;
                        not_evaluable.get_or_insert(why);
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        IdentityId::GfRecurrence => match variant {
            Variant::Paper => {
                range.n_min = range.n_min.max(2);
                for n in range.n_min..=range.n_max {
                    let rhs =
                        recurrence_rhs(c, n, &genfun_oracle(c, n - 1)?, &genfun_oracle(c, n - 2)?);
                    t.polys(&[("n", n)], &genfun_oracle(c, n)?, &rhs);
                }
                t.note("G_{n-1}, G_{n-2} taken from tabulation, G_0 = 1");
            }
            Variant::Corrected => {
                range.n_min = range.n_min.max(3);
                for n in range.n_min..=range.n_max {
                    t.polys(
                        &[("n", n)],
                        &genfun_oracle(c, n)?,
                        &genfun_recurrence(c, n)?,
                    );
                }
                t.note("unrolled from G_1 = v, G_2 = v^2 + q v^2");
            }
        },
        IdentityId::GfAddition => {
            range.n_min = range.n_min.max(2);
            range.m_min = range.m_min.max(2);
            range.m_max = range.m_max.max(range.m_min);
            for m in range.m_min..=range.m_max {
                for n in range.n_min..=range.n_max {
                    t.polys(
                        &[("m", m), ("n", n)],
                        &genfun_oracle(c, m + n)?,
                        &genfun_addition(c, m, n, variant)?,
                    );
                }
            }
        }
        IdentityId::BijectionImage => {
            range.n_min = range.n_min.max(1);
            for n in range.n_min..=range.n_max {
                let problem = bijection_problem(c, n)?;
                t.detail(&[("n", n)], problem);
            }
        }
        IdentityId::StructureOracle => {
            for n in range.n_min..=range.n_max {
                let generated = generate(c, n)?;
                let brute = brute_force_av(n, &patterns_of(c))?;
                let problem = (generated != brute).then(|| {
                    let g: BTreeSet<_> = generated.iter().collect();
                    let b: BTreeSet<_> = brute.iter().collect();
                    match (g.difference(&b).next(), b.difference(&g).next()) {
                        (Some(p), _) => format!("generated {p} is not in Av_n"),
                        (_, Some(p)) => format!("{p} in Av_n was not generated"),
                        _ => "generation produced duplicates".to_string(),
                    }
                });
                t.detail(&[("n", n)], problem);
            }
        }
    }

    let status = if let Some(why) = not_evaluable {
        t.note(why);
        Status::NotEvaluable
    } else if t.mismatches > 0 {
        Status::Fail
    } else {
        Status::Pass
    };
    if t.mismatches > 0 {
        t.note(format!(
            "{} of {} comparisons disagree",
            t.mismatches, t.checked
        ));
    }
    Ok(IdentityReport {
        identity_id: identity,
        class,
        variant,
        parameter_range: range,
        status,
        checked: t.checked,
        mismatches: t.mismatches,
        first_mismatch: t.sample.first().cloned(),
        mismatch_sample: t.sample,
        notes: t.notes.join("; "),
    })
}

/// Checks round trips, injectivity, cell counts and the exact image.
fn bijection_problem(c: ClassId, n: usize) -> Result<Option<String>> {
    let excluded = if c.is_a() {
        let mut tiles = vec![Tile::Domino];
        tiles.extend(std::iter::repeat_n(Tile::Monomino, n - 1));
        Tiling::new(tiles)
    } else {
        Tiling::new(vec![Tile::Monomino; n + 1])
    };
    let expected: BTreeSet<Tiling> = tilings(n + 1)
        .into_iter()
        .filter(|t| *t != excluded)
        .collect();
    let mut image = BTreeSet::new();
    for p in generate(c, n)? {
        let (tiling, back) = if c.is_a() {
            let t = phi(c, &p)?;
            let back = phi_inverse(c, &t)?;
            (t, back)
        } else {
            let t = rho(c, &p)?;
            let back = rho_inverse(c, &t)?;
            (t, back)
        };
        if back != p {
            return Ok(Some(format!(
                "{p} maps to {tiling}, which maps back to {back}"
            )));
        }
        if tiling.cells() != n + 1 {
            return Ok(Some(format!(
                "{p} maps to {tiling} with {} cells",
                tiling.cells()
            )));
        }
        if !image.insert(tiling.clone()) {
            return Ok(Some(format!("{tiling} is hit twice")));
        }
    }
    if image != expected {
        let detail = match (
            expected.difference(&image).next(),
            image.difference(&expected).next(),
        ) {
            (Some(t), _) => format!("tiling {t} is never hit"),
            (_, Some(t)) => format!("tiling {t} is outside the stated image"),
            _ => unreachable!(),
        };
        return Ok(Some(detail));
    }
    Ok(None)
}

/// Default range for an identity when driven by a single `n_max` (and
/// `m_max` for the addition formula). Identities on plain numbers use at
/// least `n <= 30`, since they cost nothing.
pub fn default_range(
    identity: IdentityId,
    variant: Variant,
    n_max: usize,
    m_max: usize,
) -> ParamRange {
    let scalar_max = n_max.max(30);
    match identity {
        IdentityId::Counts | IdentityId::InvDist | IdentityId::FibDist | IdentityId::JointDist => {
            ParamRange::n(1, n_max)
        }
        IdentityId::BijectionImage => ParamRange::n(1, n_max),
        IdentityId::ARecurrence => ParamRange::n(2, scalar_max),
        IdentityId::Eq1 => match variant {
            Variant::Paper => ParamRange::n(1, scalar_max),
            Variant::Corrected => ParamRange::n(0, scalar_max),
        },
        IdentityId::HockeyStick => ParamRange::n(1, scalar_max),
        IdentityId::FibInv => ParamRange::n(0, n_max),
        IdentityId::GfClosed => ParamRange::n(3, n_max),
        IdentityId::GfRecurrence => match variant {
            Variant::Paper => ParamRange::n(2, n_max),
            Variant::Corrected => ParamRange::n(3, n_max),
        },
        IdentityId::GfAddition => ParamRange::mn(2, m_max, 2, n_max),
        IdentityId::StructureOracle => {
            ParamRange::n(0, n_max.min(crate::perm::BRUTE_FORCE_MAX_LEN))
        }
    }
}

/// One unit of work in a verification run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Task {
    pub identity: IdentityId,
    pub class: Option<ClassId>,
    pub variant: Variant,
    pub range: ParamRange,
}

impl Task {
    pub fn run(&self) -> Result<IdentityReport> {
        check_identity(self.identity, self.variant, self.class, &self.range)
    }
}

/// The printed variant of every selected identity (per class where
/// relevant), plus the corrected variant wherever the registry has one.
pub fn plan(identities: &[IdentityId], n_max: usize, m_max: usize) -> Vec<Task> {
    let mut tasks = Vec::new();
    for &identity in identities {
        let classes: Vec<Option<ClassId>> = if identity.needs_class() {
            ClassId::ALL.iter().copied().map(Some).collect()
        } else {
            vec![None]
        };
        for class in classes {
            for variant in [Variant::Paper, Variant::Corrected] {
                if variant == Variant::Corrected && correction_for(identity, class).is_none() {
                    continue;
                }
                tasks.push(Task {
                    identity,
                    class,
                    variant,
                    range: default_range(identity, variant, n_max, m_max),
                });
            }
        }
    }
    tasks
}

/// Verdict for one `(identity, class)` family.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyVerdict {
    pub identity_id: IdentityId,
    pub class: Option<ClassId>,
    pub paper: Status,
    pub corrected: Option<Status>,
    /// Holds in at least one registered variant.
    pub verified: bool,
    /// Printed reading fails but a registered correction passes.
    pub deviation: Option<String>,
}

pub fn family_verdicts(reports: &[IdentityReport]) -> Vec<FamilyVerdict> {
    let mut keys: Vec<(IdentityId, Option<ClassId>)> =
        reports.iter().map(|r| (r.identity_id, r.class)).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .filter_map(|(identity_id, class)| {
            let find = |v: Variant| {
                reports
                    .iter()
                    .find(|r| r.identity_id == identity_id && r.class == class && r.variant == v)
            };
            let paper = find(Variant::Paper)?;
            let corrected = find(Variant::Corrected);
            let verified = paper.passed() || corrected.is_some_and(|r| r.passed());
            let deviation = match (paper.status, corrected) {
                (Status::Pass, _) => None,
                (_, Some(fixed)) if fixed.passed() => Some(deviation_note(paper, fixed)),
                _ => None,
            };
            Some(FamilyVerdict {
                identity_id,
                class,
                paper: paper.status,
                corrected: corrected.map(|r| r.status),
                verified,
                deviation,
            })
        })
        .collect()
}

fn deviation_note(paper: &IdentityReport, fixed: &IdentityReport) -> String {
    let evidence = match (&paper.first_mismatch, paper.status) {
        (Some(m), _) => format!("counterexample {m}"),
        (None, Status::NotEvaluable) => format!("not evaluable: {}", paper.notes),
        _ => paper.notes.clone(),
    };
    let correction = correction_for(paper.identity_id, paper.class)
        .map(|c| format!("{} -> {}", c.printed, c.corrected))
        .unwrap_or_default();
    format!(
        "printed reading {}: {evidence}; corrected ({correction}) passes over {}",
        paper.status, fixed.parameter_range
    )
}
