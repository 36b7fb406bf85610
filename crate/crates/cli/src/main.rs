mod report;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use fibperm_core::bijections::{phi, phi_inverse, rho, rho_inverse};
use fibperm_core::classes::{count, generate, ClassId};
use fibperm_core::fib::{fib_number, Tiling};
use fibperm_core::genfun::{genfun_closed, genfun_oracle, genfun_recurrence};
use fibperm_core::perm::Permutation;
use fibperm_core::stats::{distribution_formula, distribution_oracle, Stat, Tabulation, Variant};
use fibperm_core::verify::IdentityId;
use fibperm_core::Error;

/// Closed forms are evaluated in fixed-width integers; past this length the
/// binomials and polynomial coefficients are no longer guaranteed to fit.
const FORMULA_MAX_LEN: usize = 100;

#[derive(Parser, Debug)]
#[command(
    name = "fibperm",
    version,
    about = "Fibonacci-minus-one permutation classes"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Class sizes for n = 1..n-max.
    Count {
        #[arg(long, value_parser = parse_class_or_all)]
        class: ClassSel,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n_max: u64,
    },
    /// List the members of length n in lexicographic order.
    Enumerate {
        #[arg(long, value_parser = parse_class)]
        class: ClassId,
        #[arg(long)]
        n: usize,
    },
    /// Distribution of inv, Fib, or both.
    Dist {
        #[arg(long, value_parser = parse_class)]
        class: ClassId,
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_stat)]
        stat: Stat,
        #[arg(long, value_enum, default_value_t = Source::Formula)]
        source: Source,
        #[arg(long, value_parser = parse_variant, default_value = "corrected")]
        variant: Variant,
    },
    /// The bivariate generating function G_n(v, q).
    Genfun {
        #[arg(long, value_parser = parse_class)]
        class: ClassId,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Method::Oracle)]
        method: Method,
        #[arg(long, value_parser = parse_variant, default_value = "corrected")]
        variant: Variant,
    },
    /// Apply phi (A-classes) or rho (B-classes), or their inverses.
    Map(MapArgs),
    /// The Fibonacci number F_n, with F_0 = F_1 = 1.
    Fib {
        #[arg(long)]
        n: usize,
    },
    /// Check every identity against exhaustive tabulation.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct MapArgs {
    #[arg(long, value_enum)]
    bijection: Bijection,
    #[arg(long, value_parser = parse_class)]
    class: ClassId,
    #[arg(long, required_unless_present = "inverse", conflicts_with = "inverse")]
    perm: Option<String>,
    #[arg(long, requires = "tiling")]
    inverse: bool,
    #[arg(long, requires = "inverse")]
    tiling: Option<String>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// `all` or a comma-separated list of identity ids.
    #[arg(long, default_value = "all", value_parser = parse_identities)]
    identity: IdentitySel,
    #[arg(long, default_value_t = 9, value_parser = clap::value_parser!(u64).range(1..))]
    n_max: u64,
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(2..))]
    m_max: u64,
    /// Write the report here, with a JSON twin beside it.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
    /// Put the generation time in the report header.
    #[arg(long)]
    stamp: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Source {
    Formula,
    Oracle,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Oracle,
    Closed,
    Recurrence,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Bijection {
    Phi,
    Rho,
}

#[derive(Clone, Debug)]
enum ClassSel {
    One(ClassId),
    All,
}

#[derive(Clone, Debug)]
struct IdentitySel(Vec<IdentityId>);

fn parse_class(s: &str) -> Result<ClassId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_class_or_all(s: &str) -> Result<ClassSel, String> {
    if s == "all" {
        Ok(ClassSel::All)
    } else {
        parse_class(s).map(ClassSel::One)
    }
}

fn parse_stat(s: &str) -> Result<Stat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_identities(s: &str) -> Result<IdentitySel, String> {
    if s == "all" {
        return Ok(IdentitySel(IdentityId::ALL.to_vec()));
    }
    let mut ids = s
        .split(',')
        .map(|part| part.trim().parse::<IdentityId>().map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    ids.sort();
    ids.dedup();
    Ok(IdentitySel(ids))
}

/// Failure of a subcommand, carrying its exit status.
#[derive(Debug)]
enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Lib(Error::SizeLimitExceeded { .. } | Error::Overflow(_)) => 3,
            Failure::Lib(
                Error::Parse { .. }
                | Error::MalformedTiling(_)
                | Error::DuplicateValue(_)
                | Error::OutOfRangeValue { .. },
            ) => 2,
            Failure::Lib(_) | Failure::Io(_) => 4,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Io(m) => m.clone(),
            Failure::Lib(e) => e.to_string(),
        }
    }
}

/// What a subcommand produced: text for stdout and the exit status.
struct Outcome {
    stdout: String,
    code: u8,
}

impl From<String> for Outcome {
    fn from(stdout: String) -> Self {
        Outcome { stdout, code: 0 }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let fmt = cli.format;
    match &cli.command {
        Command::Count { class, n_max } => cmd_count(class, *n_max as usize, fmt).map(Into::into),
        Command::Enumerate { class, n } => cmd_enumerate(*class, *n, fmt).map(Into::into),
        Command::Dist {
            class,
            n,
            stat,
            source,
            variant,
        } => cmd_dist(*class, *n, *stat, *source, *variant, fmt).map(Into::into),
        Command::Genfun {
            class,
            n,
            method,
            variant,
        } => cmd_genfun(*class, *n, *method, *variant, fmt).map(Into::into),
        Command::Map(args) => cmd_map(args, fmt).map(Into::into),
        Command::Fib { n } => cmd_fib(*n, fmt).map(Into::into),
        Command::Verify(args) => cmd_verify(args, fmt),
    }
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Right-aligned columns under a header row.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &mut dyn Iterator<Item = &str>| {
        let parts: Vec<String> = cells
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        out.push_str(&parts.join("  "));
        out.push('\n');
    };
    line(&mut header.iter().copied());
    for row in rows {
        line(&mut row.iter().map(String::as_str));
    }
    out
}

#[derive(Serialize)]
struct CountRow {
    n: usize,
    class: ClassId,
    count: u128,
}

fn cmd_count(class: &ClassSel, n_max: usize, fmt: Format) -> Result<String, Failure> {
    let classes: Vec<ClassId> = match class {
        ClassSel::One(c) => vec![*c],
        ClassSel::All => ClassId::ALL.to_vec(),
    };
    let mut records = Vec::new();
    for n in 1..=n_max {
        for &c in &classes {
            records.push(CountRow {
                n,
                class: c,
                count: count(c, n)?,
            });
        }
    }
    if fmt == Format::Json {
        return Ok(json(&records));
    }
    let mut header = vec!["n"];
    header.extend(classes.iter().map(|c| c.name()));
    let rows: Vec<Vec<String>> = records
        .chunks(classes.len())
        .map(|chunk| {
            let mut row = vec![chunk[0].n.to_string()];
            row.extend(chunk.iter().map(|r| r.count.to_string()));
            row
        })
        .collect();
    Ok(table(&header, &rows))
}

fn cmd_enumerate(class: ClassId, n: usize, fmt: Format) -> Result<String, Failure> {
    let members = generate(class, n)?;
    if fmt == Format::Json {
        return Ok(json(&members));
    }
    let mut out = String::new();
    for p in &members {
        writeln!(out, "{p}").unwrap();
    }
    Ok(out)
}

#[derive(Serialize)]
struct SingleRow {
    stat: &'static str,
    value: usize,
    count: u128,
}

#[derive(Serialize)]
struct JointRow {
    fib: usize,
    inv: usize,
    count: u128,
}

fn cmd_dist(
    class: ClassId,
    n: usize,
    stat: Stat,
    source: Source,
    variant: Variant,
    fmt: Format,
) -> Result<String, Failure> {
    let tabulation = match source {
        Source::Oracle => distribution_oracle(class, n, stat)?,
        Source::Formula => {
            if n > FORMULA_MAX_LEN {
                return Err(Error::SizeLimitExceeded {
                    n,
                    max: FORMULA_MAX_LEN,
                }
                .into());
            }
            distribution_formula(class, n, stat, variant)
        }
    };
    let stat_name = match stat {
        Stat::Inv => "inv",
        Stat::Fib => "fib",
        Stat::Joint => "joint",
    };
    match tabulation {
        Tabulation::Single(d) => {
            let rows: Vec<SingleRow> = d
                .iter()
                .map(|(value, count)| SingleRow {
                    stat: stat_name,
                    value,
                    count,
                })
                .collect();
            if fmt == Format::Json {
                return Ok(json(&rows));
            }
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| vec![r.value.to_string(), r.count.to_string()])
                .collect();
            Ok(table(&[stat_name, "count"], &cells))
        }
        Tabulation::Joint(d) => {
            let rows: Vec<JointRow> = d
                .iter()
                .map(|((fib, inv), count)| JointRow { fib, inv, count })
                .collect();
            if fmt == Format::Json {
                return Ok(json(&rows));
            }
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| vec![r.fib.to_string(), r.inv.to_string(), r.count.to_string()])
                .collect();
            Ok(table(&["fib", "inv", "count"], &cells))
        }
    }
}

fn cmd_genfun(
    class: ClassId,
    n: usize,
    method: Method,
    variant: Variant,
    fmt: Format,
) -> Result<String, Failure> {
    if method != Method::Oracle && n > FORMULA_MAX_LEN {
        return Err(Error::SizeLimitExceeded {
            n,
            max: FORMULA_MAX_LEN,
        }
        .into());
    }
    let g = match method {
        Method::Oracle => genfun_oracle(class, n)?,
        Method::Closed => genfun_closed(class, n, variant)?,
        Method::Recurrence => genfun_recurrence(class, n)?,
    };
    Ok(match fmt {
        Format::Json => json(&g),
        Format::Text => format!("{g}\n"),
    })
}

#[derive(Serialize)]
struct MapRecord {
    bijection: &'static str,
    class: ClassId,
    direction: &'static str,
    permutation: Permutation,
    tiling: Tiling,
}

fn cmd_map(args: &MapArgs, fmt: Format) -> Result<String, Failure> {
    let class = args.class;
    let (perm, tiling, text) = if args.inverse {
        let raw = args.tiling.as_deref().expect("clap enforces --tiling");
        let tiling: Tiling = raw.parse()?;
        let perm = match args.bijection {
            Bijection::Phi => phi_inverse(class, &tiling)?,
            Bijection::Rho => rho_inverse(class, &tiling)?,
        };
        let text = perm.to_string();
        (perm, tiling, text)
    } else {
        let raw = args.perm.as_deref().expect("clap enforces --perm");
        let perm: Permutation = raw.parse()?;
        let tiling = match args.bijection {
            Bijection::Phi => phi(class, &perm)?,
            Bijection::Rho => rho(class, &perm)?,
        };
        let text = tiling.to_string();
        (perm, tiling, text)
    };
    if fmt == Format::Text {
        return Ok(format!("{text}\n"));
    }
    Ok(json(&MapRecord {
        bijection: match args.bijection {
            Bijection::Phi => "phi",
            Bijection::Rho => "rho",
        },
        class,
        direction: if args.inverse { "inverse" } else { "forward" },
        permutation: perm,
        tiling,
    }))
}

#[derive(Serialize)]
struct FibRecord {
    n: usize,
    value: u128,
}

fn cmd_fib(n: usize, fmt: Format) -> Result<String, Failure> {
    let value = fib_number(n)?;
    Ok(match fmt {
        Format::Json => json(&FibRecord { n, value }),
        Format::Text => format!("{value}\n"),
    })
}

fn cmd_verify(args: &VerifyArgs, fmt: Format) -> Result<Outcome, Failure> {
    let run = report::execute(
        &args.identity.0,
        args.n_max as usize,
        args.m_max as usize,
        args.jobs as usize,
    )?;
    let stamp = args
        .stamp
        .then(|| chrono::Utc::now().format("%Y-%m-%dT%H:%M:%SZ").to_string());
    let markdown = report::markdown(&run, stamp.as_deref());
    let json_text = json(&report::JsonReport::new(&run, stamp.as_deref()));
    if let Some(path) = &args.report {
        std::fs::write(path, &markdown)
            .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        let twin = path.with_extension("json");
        std::fs::write(&twin, &json_text)
            .map_err(|e| Failure::Io(format!("{}: {e}", twin.display())))?;
    }
    let stdout = match fmt {
        Format::Json => json_text,
        Format::Text => report::summary(&run),
    };
    Ok(Outcome {
        stdout,
        code: if run.all_verified() { 0 } else { 1 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_aligns_right() {
        let t = table(
            &["n", "A1"],
            &[
                vec!["1".into(), "1".into()],
                vec!["10".into(), "143".into()],
            ],
        );
        assert_eq!(t, " n   A1\n 1    1\n10  143\n");
    }

    #[test]
    fn identity_lists_parse() {
        let sel = parse_identities("eq1, counts,eq1").unwrap();
        assert_eq!(sel.0, vec![IdentityId::Counts, IdentityId::Eq1]);
        assert!(parse_identities("bogus").is_err());
        assert_eq!(parse_identities("all").unwrap().0.len(), 13);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(Failure::Lib(Error::Overflow("x".into())).code(), 3);
        assert_eq!(Failure::Lib(Error::NotInClass(ClassId::A1)).code(), 4);
        assert_eq!(Failure::Lib(Error::MalformedTiling("x".into())).code(), 2);
        assert_eq!(Failure::Lib(Error::ExcludedTiling("dm".into())).code(), 4);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
