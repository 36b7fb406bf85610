//! Verification runs and their rendering: a terse stdout summary, a
//! markdown report, and a JSON twin of the same records.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use fibperm_core::classes::ClassId;
use fibperm_core::verify::{
    correction_for, family_verdicts, plan, registry, FamilyVerdict, IdentityId, IdentityReport,
    ParamRange, Status, Task,
};
use fibperm_core::{Result, Variant};

pub struct Run {
    pub n_max: usize,
    pub m_max: usize,
    pub identities: Vec<IdentityId>,
    pub reports: Vec<IdentityReport>,
    pub families: Vec<FamilyVerdict>,
    /// One validation report per registry entry and covered class.
    pub registry: Vec<IdentityReport>,
}

impl Run {
    pub fn all_verified(&self) -> bool {
        self.families.iter().all(|f| f.verified) && self.registry.iter().all(|r| r.passed())
    }
}

fn registry_tasks() -> Vec<Task> {
    let mut tasks = Vec::new();
    for entry in registry() {
        let classes: Vec<Option<ClassId>> = if entry.classes.is_empty() {
            vec![None]
        } else {
            entry.classes.iter().copied().map(Some).collect()
        };
        for class in classes {
            tasks.push(Task {
                identity: entry.identity,
                class,
                variant: Variant::Corrected,
                range: entry.range,
            });
        }
    }
    tasks
}

fn run_all(tasks: &[Task], jobs: usize) -> Result<Vec<IdentityReport>> {
    if jobs <= 1 {
        return tasks.iter().map(Task::run).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool");
    pool.install(|| tasks.par_iter().map(Task::run).collect())
}

fn sort_key(r: &IdentityReport) -> (IdentityId, Option<ClassId>, Variant) {
    (r.identity_id, r.class, r.variant)
}

pub fn execute(identities: &[IdentityId], n_max: usize, m_max: usize, jobs: usize) -> Result<Run> {
    let mut reports = run_all(&plan(identities, n_max, m_max), jobs)?;
    reports.sort_by_key(sort_key);
    let mut validations = run_all(&registry_tasks(), jobs)?;
    validations.sort_by_key(sort_key);
    Ok(Run {
        n_max,
        m_max,
        identities: identities.to_vec(),
        families: family_verdicts(&reports),
        reports,
        registry: validations,
    })
}

fn class_label(c: Option<ClassId>) -> &'static str {
    c.map_or("-", ClassId::name)
}

fn status_label(s: Option<Status>) -> String {
    s.map_or_else(|| "-".to_string(), |s| s.to_string())
}

pub fn summary(run: &Run) -> String {
    let mut out = String::new();
    for f in &run.families {
        writeln!(
            out,
            "{:<17} {:<2}  paper {:<13}  corrected {:<13}  {}",
            f.identity_id.name(),
            class_label(f.class),
            f.paper.to_string(),
            status_label(f.corrected),
            if f.verified { "verified" } else { "UNVERIFIED" }
        )
        .unwrap();
    }
    let unverified = run.families.iter().filter(|f| !f.verified).count();
    let validated = run.registry.iter().filter(|r| r.passed()).count();
    writeln!(
        out,
        "{} families, {} unverified; registry {}/{} validated",
        run.families.len(),
        unverified,
        validated,
        run.registry.len()
    )
    .unwrap();
    out
}

pub fn markdown(run: &Run, stamp: Option<&str>) -> String {
    let mut out = String::new();
    let w = &mut out;
    writeln!(w, "# Identity verification report\n").unwrap();
    if let Some(stamp) = stamp {
        writeln!(w, "Generated: {stamp}\n").unwrap();
    }
    let names: Vec<&str> = run.identities.iter().map(|i| i.name()).collect();
    writeln!(w, "Identities: {}", names.join(", ")).unwrap();
    writeln!(
        w,
        "Parameters: n-max {}, m-max {}; identities on plain numbers run to n = {}\n",
        run.n_max,
        run.m_max,
        run.n_max.max(30)
    )
    .unwrap();
    let printed = run
        .families
        .iter()
        .filter(|f| f.paper == Status::Pass)
        .count();
    let corrected = run
        .families
        .iter()
        .filter(|f| f.deviation.is_some())
        .count();
    let unverified = run.families.len() - printed - corrected;
    writeln!(
        w,
        "Result: **{}**. {} families: {} hold as printed, {} hold only in corrected form, {} unverified. Registry: {}/{} corrections validated.\n",
        if run.all_verified() { "verified" } else { "NOT verified" },
        run.families.len(),
        printed,
        corrected,
        unverified,
        run.registry.iter().filter(|r| r.passed()).count(),
        run.registry.len()
    )
    .unwrap();

    writeln!(w, "## Families\n").unwrap();
    writeln!(
        w,
        "| identity | class | statement | printed | corrected | verified |"
    )
    .unwrap();
    writeln!(w, "|---|---|---|---|---|---|").unwrap();
    for f in &run.families {
        writeln!(
            w,
            "| {} | {} | `{}` | {} | {} | {} |",
            f.identity_id,
            class_label(f.class),
            f.identity_id.statement(),
            f.paper,
            status_label(f.corrected),
            if f.verified { "yes" } else { "**no**" }
        )
        .unwrap();
    }

    writeln!(w, "\n## Deviations from the printed statements\n").unwrap();
    let deviations: Vec<&FamilyVerdict> = run
        .families
        .iter()
        .filter(|f| f.deviation.is_some())
        .collect();
    if deviations.is_empty() {
        writeln!(w, "None.").unwrap();
    }
    for f in deviations {
        writeln!(
            w,
            "- **{} {}**: {}",
            f.identity_id,
            class_label(f.class),
            f.deviation.as_deref().unwrap_or_default()
        )
        .unwrap();
    }
    let unresolved: Vec<&FamilyVerdict> = run.families.iter().filter(|f| !f.verified).collect();
    if !unresolved.is_empty() {
        writeln!(w, "\n## Unresolved\n").unwrap();
        for f in unresolved {
            writeln!(w, "- **{} {}**", f.identity_id, class_label(f.class)).unwrap();
        }
    }

    writeln!(w, "\n## Checks\n").unwrap();
    for r in &run.reports {
        write_check(w, r);
    }

    writeln!(w, "## Corrections registry\n").unwrap();
    for entry in registry() {
        let classes: Vec<&str> = entry.classes.iter().map(|c| c.name()).collect();
        let scope = if classes.is_empty() {
            "all".to_string()
        } else {
            classes.join(", ")
        };
        writeln!(w, "### {} ({scope})\n", entry.identity).unwrap();
        writeln!(w, "- printed: `{}`", entry.printed).unwrap();
        writeln!(w, "- corrected: `{}`", entry.corrected).unwrap();
        writeln!(w, "- derivation: {}", entry.derivation).unwrap();
        for v in run.registry.iter().filter(|r| {
            r.identity_id == entry.identity
                && correction_for(r.identity_id, r.class).is_some_and(|c| std::ptr::eq(c, entry))
        }) {
            writeln!(
                w,
                "- validation {} over {}: {}",
                class_label(v.class),
                v.parameter_range,
                v.status
            )
            .unwrap();
        }
        writeln!(w).unwrap();
    }
    out
}

fn write_check(w: &mut String, r: &IdentityReport) {
    writeln!(
        w,
        "### {} {} ({})\n",
        r.identity_id,
        class_label(r.class),
        r.variant
    )
    .unwrap();
    writeln!(w, "- range: {}", r.parameter_range).unwrap();
    writeln!(w, "- status: {}", r.status).unwrap();
    writeln!(
        w,
        "- comparisons: {}, mismatches: {}",
        r.checked, r.mismatches
    )
    .unwrap();
    if let Some(m) = &r.first_mismatch {
        writeln!(w, "- first mismatch {m}").unwrap();
    }
    if !r.notes.is_empty() {
        writeln!(w, "- notes: {}", r.notes).unwrap();
    }
    writeln!(w).unwrap();
}

#[derive(Serialize)]
pub struct JsonReport<'a> {
    generated: Option<&'a str>,
    n_max: usize,
    m_max: usize,
    verified: bool,
    families: &'a [FamilyVerdict],
    reports: &'a [IdentityReport],
    registry: Vec<RegistryRecord<'a>>,
}

#[derive(Serialize)]
struct RegistryRecord<'a> {
    identity_id: IdentityId,
    class: Option<ClassId>,
    printed: &'static str,
    corrected: &'static str,
    derivation: &'static str,
    parameter_range: ParamRange,
    status: Status,
    validation: &'a IdentityReport,
}

impl<'a> JsonReport<'a> {
    pub fn new(run: &'a Run, stamp: Option<&'a str>) -> Self {
        let registry = run
            .registry
            .iter()
            .filter_map(|v| {
                let entry = correction_for(v.identity_id, v.class)?;
                Some(RegistryRecord {
                    identity_id: v.identity_id,
                    class: v.class,
                    printed: entry.printed,
                    corrected: entry.corrected,
                    derivation: entry.derivation,
                    parameter_range: entry.range,
                    status: v.status,
                    validation: v,
                })
            })
            .collect();
        JsonReport {
            generated: stamp,
            n_max: run.n_max,
            m_max: run.m_max,
            verified: run.all_verified(),
            families: &run.families,
            reports: &run.reports,
            registry,
        }
    }
}
