//! Command-line front end.
//!
//! [`run`] parses arguments, executes one command and returns the exit code
//! together with everything that should go to stdout and stderr, so the
//! binary is a thin wrapper and the whole surface is testable in-process.
//!
//! Exit codes: 0 success, 1 a mathematical check failed, 2 invalid input or
//! violated preconditions, 3 a resource cap was exceeded.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::braid::{BraidError, BraidWord};
use crate::congruence::{self, CatalogEntry, CongruenceError, SweepStatus, VerifyOptions};
use crate::dw::{self, DwError, XScope};
use crate::field::{self, FieldError, FqField};
use crate::group::{Elem, FiniteGroup, GroupError};
use crate::holonomy::{ClosedBraid, EnumOptions, HolonomyError, DEFAULT_SEARCH_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "pdw", version, about = "Dijkgraaf-Witten counts of closed braids and the periodic-link congruence")]
pub struct Cli {
    /// Worker threads for enumeration (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Human-readable tables instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct SearchArgs {
    /// Maximum number of candidate tuples per enumeration.
    #[arg(long, default_value_t = DEFAULT_SEARCH_CAP)]
    pub cap: u64,
    /// Ignore the search cap.
    #[arg(long)]
    pub allow_large: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Order, conjugacy classes and centralizer orders of a group.
    GroupInfo {
        #[arg(long)]
        group: String,
    },
    /// Permutation, components, writhes and linking matrix of a braid.
    BraidInfo {
        #[arg(long)]
        braid: String,
    },
    /// Homomorphisms from the group of the closed braid.
    Homs {
        #[arg(long)]
        braid: String,
        #[arg(long)]
        group: String,
        /// Comma-separated meridian images, one per component.
        #[arg(long)]
        x: Option<String>,
        /// Print only the number of homomorphisms.
        #[arg(long)]
        count: bool,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Dijkgraaf-Witten table of the closed braid.
    Dw {
        #[arg(long)]
        braid: String,
        #[arg(long)]
        group: String,
        /// Restrict to one comma-separated meridian tuple.
        #[arg(long)]
        x: Option<String>,
        /// Exact longitude entries instead of centralizer classes.
        #[arg(long, conflicts_with = "classes")]
        exact: bool,
        /// Class entries (default).
        #[arg(long)]
        classes: bool,
        /// Every meridian tuple rather than class representatives.
        #[arg(long)]
        all_x: bool,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Check the congruence for the closures of β^{p^k} and β.
    Verify {
        #[arg(long)]
        braid: String,
        #[arg(short = 'p', long = "prime")]
        p: u64,
        #[arg(short = 'k', long = "exponent")]
        k: u32,
        #[arg(long)]
        group: String,
        #[arg(long)]
        all_x: bool,
        /// Include wall time in the report.
        #[arg(long)]
        timing: bool,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Verify every entry of a JSON catalog.
    Sweep {
        #[arg(long)]
        catalog: PathBuf,
        #[arg(long)]
        all_x: bool,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Random test of tr(A^p) = tr(A)^p over F_{p^e}.
    Frobcheck {
        #[arg(short = 'p', long = "prime")]
        p: u64,
        #[arg(short = 'e', long = "degree", default_value_t = 1)]
        e: usize,
        #[arg(short = 'n', long = "dim")]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error(transparent)]
    Holonomy(#[from] HolonomyError),
    #[error(transparent)]
    Dw(#[from] DwError),
    #[error(transparent)]
    Congruence(#[from] CongruenceError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("{0}")]
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        let resource = match self {
            CliError::Group(GroupError::GroupTooLarge { .. }) => true,
            CliError::Holonomy(HolonomyError::SearchTooLarge { .. }) => true,
            CliError::Dw(DwError::Holonomy(HolonomyError::SearchTooLarge { .. })) => true,
            CliError::Congruence(c) => c.is_resource(),
            _ => false,
        };
        if resource {
            EXIT_RESOURCE
        } else {
            EXIT_INVALID
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Congruence(CongruenceError::NotPrime(_)) | CliError::Field(FieldError::NotPrime(_)) => "NotPrime",
            CliError::Congruence(CongruenceError::GroupOrderDivisible { .. }) => "GroupOrderDivisible",
            CliError::Congruence(CongruenceError::ComponentMismatch { .. }) => "ComponentMismatch",
            CliError::Congruence(CongruenceError::BadExponent) => "BadExponent",
            CliError::Congruence(CongruenceError::PeriodTooLarge { .. }) => "PeriodTooLarge",
            _ if self.exit_code() == EXIT_RESOURCE => "SearchTooLarge",
            CliError::Group(_) => "BadGroup",
            CliError::Braid(_) => "BadBraid",
            CliError::Field(_) => "BadField",
            CliError::Dw(DwError::HNotInCentralizer { .. }) => "HNotInCentralizer",
            _ => "InvalidInput",
        }
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match execute(&cli) {
        Ok((code, stdout)) => Outcome {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(e) => {
            let body = json!({ "error": e.kind(), "message": e.to_string() });
            Outcome {
                code: e.exit_code(),
                stdout: String::new(),
                stderr: format!("{body}\n"),
            }
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn parse_group(spec: &str) -> Result<Arc<FiniteGroup>, CliError> {
    Ok(Arc::new(FiniteGroup::from_spec(spec)?))
}

fn parse_x(g: &FiniteGroup, text: &str, n: usize) -> Result<Vec<Elem>, CliError> {
    let x = text
        .split(',')
        .map(|s| g.element_by_name(s))
        .collect::<Result<Vec<_>, _>>()?;
    if x.len() != n {
        return Err(CliError::Input(format!(
            "--x lists {} elements but the closure has {n} components",
            x.len()
        )));
    }
    Ok(x)
}

fn enum_options(threads: Option<usize>, search: &SearchArgs) -> EnumOptions {
    EnumOptions {
        threads,
        cap: search.cap,
        allow_large: search.allow_large,
    }
}

fn names(g: &FiniteGroup, v: &[Elem]) -> Vec<String> {
    v.iter().map(|&e| g.name(e).to_string()).collect()
}

fn execute(cli: &Cli) -> Result<(i32, String), CliError> {
    if cli.threads == Some(0) {
        return Err(CliError::Input("--threads must be positive".into()));
    }
    match &cli.command {
        Command::GroupInfo { group } => group_info(&*parse_group(group)?, cli.pretty),
        Command::BraidInfo { braid } => braid_info(&braid.parse()?, cli.pretty),
        Command::Homs {
            braid,
            group,
            x,
            count,
            search,
        } => {
            let beta: BraidWord = braid.parse()?;
            let g = parse_group(group)?;
            let closed = ClosedBraid::new(beta);
            let n = closed.components().count();
            let x = x.as_deref().map(|s| parse_x(&g, s, n)).transpose()?;
            let opts = enum_options(cli.threads, search);
            if *count {
                let c = closed.count(&g, x.as_deref(), &opts)?;
                let out = if cli.pretty {
                    format!("{c}\n")
                } else {
                    to_json(&json!({
                        "braid": closed.braid().to_string(),
                        "group": g.label(),
                        "components": n,
                        "count": c,
                    }))
                };
                return Ok((EXIT_OK, out));
            }
            let records = closed.enumerate(&g, x.as_deref(), &opts)?;
            if cli.pretty {
                let mut s = format!("{} homomorphisms\n", records.len());
                for r in &records {
                    let _ = writeln!(
                        s,
                        "tuple [{}]  meridians [{}]  longitudes [{}]",
                        names(&g, &r.tuple).join(", "),
                        names(&g, &r.meridian).join(", "),
                        names(&g, &r.longitude).join(", ")
                    );
                }
                return Ok((EXIT_OK, s));
            }
            let recs: Vec<_> = records
                .iter()
                .map(|r| {
                    json!({
                        "tuple": names(&g, &r.tuple),
                        "meridian": names(&g, &r.meridian),
                        "longitude": names(&g, &r.longitude),
                    })
                })
                .collect();
            Ok((
                EXIT_OK,
                to_json(&json!({
                    "braid": closed.braid().to_string(),
                    "group": g.label(),
                    "components": n,
                    "count": records.len(),
                    "records": recs,
                })),
            ))
        }
        Command::Dw {
            braid,
            group,
            x,
            exact,
            classes: _,
            all_x,
            search,
        } => {
            let beta: BraidWord = braid.parse()?;
            let g = parse_group(group)?;
            let closed = ClosedBraid::new(beta);
            let n = closed.components().count();
            let scope = if *all_x { XScope::All } else { XScope::Representatives };
            let xs = match x {
                Some(s) => vec![parse_x(&g, s, n)?],
                None => scope.tuples(&g, n),
            };
            let table = dw::dw_table_for(&closed, &g, &xs, scope, &enum_options(cli.threads, search))?;
            if cli.pretty {
                let mut s = format!("{} on {}  ({n} components)\n", table.braid, table.group);
                if *exact {
                    for (k, c) in &table.exact {
                        let _ = writeln!(s, "x=[{}]  h=[{}]  {c}", names(&g, &k.x).join(", "), names(&g, &k.h).join(", "));
                    }
                } else {
                    for (k, c) in &table.classes {
                        let _ = writeln!(
                            s,
                            "x=[{}]  [h]=[{}]  {c}",
                            names(&g, &k.x).join(", "),
                            names(&g, &k.hclass).join(", ")
                        );
                    }
                }
                return Ok((EXIT_OK, s));
            }
            Ok((EXIT_OK, to_json(&table.to_json(&g, *exact, !*exact))))
        }
        Command::Verify {
            braid,
            p,
            k,
            group,
            all_x,
            timing,
            search,
        } => {
            let beta: BraidWord = braid.parse()?;
            let g = parse_group(group)?;
            let inst = congruence::check_preconditions(&beta, *p, *k, g.clone())?;
            let opts = VerifyOptions {
                scope: if *all_x { XScope::All } else { XScope::Representatives },
                enumeration: enum_options(cli.threads, search),
                keep_cases: cli.pretty,
            };
            let report = congruence::verify(&inst, &opts)?;
            let code = if report.confirmed() { EXIT_OK } else { EXIT_VIOLATION };
            if cli.pretty {
                let mut s = format!(
                    "closure of ({})^{}^{} vs closure of ({}) over {}: {} components, {} cases, {} violations\n",
                    report.braid,
                    report.p,
                    report.k,
                    report.braid,
                    report.group,
                    report.n,
                    report.cases_checked,
                    report.violations.len()
                );
                let _ = writeln!(s, "{:<24} {:<24} {:>10} {:>10}", "x", "[h]", "periodic", "quotient");
                for c in report.cases.iter().flatten() {
                    let _ = writeln!(
                        s,
                        "{:<24} {:<24} {:>10} {:>10}",
                        names(&g, &c.x).join(","),
                        names(&g, &c.hclass).join(","),
                        c.lhs_count,
                        c.rhs_count
                    );
                }
                if *timing {
                    let _ = writeln!(s, "elapsed {:.3}s", report.elapsed);
                }
                return Ok((code, s));
            }
            Ok((code, to_json(&report.to_json(&g, *timing))))
        }
        Command::Sweep { catalog, all_x, search } => {
            let text = std::fs::read_to_string(catalog)
                .map_err(|e| CliError::Input(format!("{}: {e}", catalog.display())))?;
            let entries: Vec<CatalogEntry> = serde_json::from_str(&text)
                .map_err(|e| CliError::Input(format!("{}: {e}", catalog.display())))?;
            let opts = VerifyOptions {
                scope: if *all_x { XScope::All } else { XScope::Representatives },
                enumeration: enum_options(cli.threads, search),
                keep_cases: false,
            };
            let summary = congruence::sweep(&entries, &opts);
            if cli.pretty {
                let mut s = String::new();
                for e in &summary.entries {
                    let status = match e.status {
                        SweepStatus::Pass => "pass",
                        SweepStatus::Violation => "VIOLATION",
                        SweepStatus::PreconditionFailed => "precondition-failed",
                        SweepStatus::ResourceExceeded => "resource-exceeded",
                        SweepStatus::InvalidInput => "invalid-input",
                    };
                    let _ = writeln!(
                        s,
                        "{:<20} p={} k={} {:<40} {:<20} cases={} {:.3}s {}",
                        e.entry.braid,
                        e.entry.p,
                        e.entry.k,
                        e.entry.group,
                        status,
                        e.cases_checked,
                        e.elapsed,
                        e.message.as_deref().unwrap_or("")
                    );
                }
                let _ = writeln!(s, "{} passed, {} failed", summary.passed, summary.failed);
                return Ok((summary.exit_code(), s));
            }
            Ok((summary.exit_code(), to_json(&summary)))
        }
        Command::Frobcheck { p, e, n, trials, seed } => {
            if *trials == 0 || *n == 0 {
                return Err(CliError::Input("--trials and --dim must be positive".into()));
            }
            let f = Arc::new(FqField::new(*p, *e)?);
            let report = field::frobenius_trace_check(&f, *n, *trials, *seed);
            let code = if report.ok() { EXIT_OK } else { EXIT_VIOLATION };
            if cli.pretty {
                let s = format!(
                    "F_{}^{} (modulus {:?}), {}x{} matrices: {}/{} pass tr(A^p)=tr(A)^p; iterated k=1..3: {:?}\n",
                    report.p, report.e, report.modulus, report.dim, report.dim, report.passed, report.trials, report.iterated_passed
                );
                return Ok((code, s));
            }
            Ok((code, to_json(&report)))
        }
    }
}

fn group_info(g: &FiniteGroup, pretty: bool) -> Result<(i32, String), CliError> {
    if pretty {
        let mut s = format!("{}: order {}, {} conjugacy classes\n", g.label(), g.order(), g.conjugacy_classes().len());
        let _ = writeln!(s, "{:<20} {:>6} {:>12}", "representative", "size", "|Cen(x)|");
        for c in g.conjugacy_classes() {
            let _ = writeln!(
                s,
                "{:<20} {:>6} {:>12}",
                g.name(c.representative),
                c.len(),
                g.centralizer(c.representative).order()
            );
        }
        return Ok((EXIT_OK, s));
    }
    let classes: Vec<_> = g
        .conjugacy_classes()
        .iter()
        .map(|c| {
            json!({
                "representative": g.name(c.representative),
                "size": c.len(),
                "members": names(g, &c.members),
                "centralizer_order": g.centralizer(c.representative).order(),
            })
        })
        .collect();
    Ok((
        EXIT_OK,
        to_json(&json!({
            "group": g.label(),
            "order": g.order(),
            "identity": g.name(g.identity()),
            "abelian": g.is_abelian(),
            "elements": g.names(),
            "classes": classes,
        })),
    ))
}

fn braid_info(beta: &BraidWord, pretty: bool) -> Result<(i32, String), CliError> {
    let sigma = beta.permutation();
    let comps = beta.components();
    let one_based = |v: &[usize]| v.iter().map(|i| i + 1).collect::<Vec<_>>();
    if pretty {
        let mut s = format!("{beta}\n");
        let _ = writeln!(s, "permutation {:?}", one_based(sigma.images()));
        let _ = writeln!(s, "writhe {}", beta.writhe());
        for (t, c) in comps.cycles.iter().enumerate() {
            let _ = writeln!(
                s,
                "component {}: cycle {:?}, basepoint {}, self-writhe {}",
                t + 1,
                one_based(c),
                c[0] + 1,
                comps.self_writhe[t]
            );
        }
        let _ = writeln!(s, "linking {:?}", comps.linking);
        return Ok((EXIT_OK, s));
    }
    Ok((
        EXIT_OK,
        to_json(&json!({
            "braid": beta.to_string(),
            "strands": beta.strands(),
            "writhe": beta.writhe(),
            "permutation": one_based(sigma.images()),
            "components": comps.count(),
            "cycles": comps.cycles.iter().map(|c| one_based(c)).collect::<Vec<_>>(),
            "basepoints": one_based(&comps.basepoints()),
            "self_writhe": comps.self_writhe,
            "linking": comps.linking,
        })),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pdw(args: &[&str]) -> Outcome {
        run(std::iter::once("pdw").chain(args.iter().copied()))
    }

    fn json_out(o: &Outcome) -> serde_json::Value {
        serde_json::from_str(&o.stdout).unwrap_or_else(|e| panic!("{e}: {o:?}"))
    }

    #[test]
    fn verify_examples() {
        let ok = pdw(&["verify", "--braid", "2: 1", "-p", "3", "-k", "1", "--group", "cyclic:2"]);
        assert_eq!(ok.code, 0, "{ok:?}");
        assert_eq!(json_out(&ok)["violations"], json!([]));

        let bad = pdw(&["verify", "--braid", "2: 1", "-p", "2", "-k", "1", "--group", "cyclic:3"]);
        assert_eq!(bad.code, 2);
        assert!(bad.stderr.contains("ComponentMismatch"), "{bad:?}");

        let div = pdw(&["verify", "--braid", "2: 1", "-p", "3", "-k", "1", "--group", "symmetric:3"]);
        assert_eq!(div.code, 2);
        assert!(div.stderr.contains("GroupOrderDivisible"));
    }

    #[test]
    fn homs_count() {
        let o = pdw(&["homs", "--braid", "2:", "--group", "cyclic:3", "--count"]);
        assert_eq!(o.code, 0);
        assert_eq!(json_out(&o)["count"], 9);
        let o = pdw(&["--pretty", "homs", "--braid", "2:", "--group", "cyclic:3", "--count"]);
        assert_eq!(o.stdout, "9\n");
    }

    #[test]
    fn homs_records_with_constraint() {
        let o = pdw(&["homs", "--braid", "2: 1 1 1", "--group", "symmetric:3", "--x", "(1 2)"]);
        assert_eq!(o.code, 0, "{o:?}");
        let v = json_out(&o);
        assert_eq!(v["count"], 3);
        assert_eq!(v["records"][0]["meridian"], json!(["(1 2)"]));
        let o = pdw(&["homs", "--braid", "2: 1 1", "--group", "symmetric:3", "--x", "(1 2)"]);
        assert_eq!(o.code, 2);
    }

    #[test]
    fn resource_cap_exit_code() {
        let o = pdw(&["homs", "--braid", "4:", "--group", "symmetric:4", "--cap", "100"]);
        assert_eq!(o.code, 3);
        assert!(o.stderr.contains("SearchTooLarge"));
    }

    #[test]
    fn bad_inputs_exit_two() {
        for args in [
            vec!["homs", "--braid", "2: 3", "--group", "cyclic:3"],
            vec!["homs", "--braid", "2: 1", "--group", "cyclic"],
            vec!["frobcheck", "-p", "4", "-n", "2"],
            vec!["nonsense"],
            vec!["verify", "--braid", "2: 1", "-p", "3", "--group", "cyclic:2"],
            vec!["sweep", "--catalog", "/nonexistent/catalog.json"],
            vec!["--threads", "0", "group-info", "--group", "cyclic:2"],
        ] {
            let o = pdw(&args);
            assert_eq!(o.code, 2, "{args:?} {o:?}");
            assert!(o.stdout.is_empty());
        }
    }

    #[test]
    fn help_exits_zero() {
        let o = pdw(&["--help"]);
        assert_eq!(o.code, 0);
        assert!(o.stdout.contains("verify"));
    }

    #[test]
    fn group_and_braid_info() {
        let o = pdw(&["group-info", "--group", "symmetric:3"]);
        let v = json_out(&o);
        assert_eq!(v["order"], 6);
        let sizes: Vec<u64> = v["classes"].as_array().unwrap().iter().map(|c| c["size"].as_u64().unwrap()).collect();
        assert_eq!(sizes, vec![1, 3, 2]);
        let cen: Vec<u64> = v["classes"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c["centralizer_order"].as_u64().unwrap())
            .collect();
        assert_eq!(cen, vec![6, 2, 3]);

        let o = pdw(&["braid-info", "--braid", "2: 1 1"]);
        let v = json_out(&o);
        assert_eq!(v["components"], 2);
        assert_eq!(v["linking"], json!([[0, 1], [1, 0]]));
        assert_eq!(v["basepoints"], json!([1, 2]));
    }

    #[test]
    fn dw_output() {
        let o = pdw(&["dw", "--braid", "2: 1 1", "--group", "cyclic:2"]);
        let v = json_out(&o);
        assert_eq!(v["entries"].as_array().unwrap().len(), 4);
        let o = pdw(&["dw", "--braid", "2: 1 1", "--group", "cyclic:2", "--exact", "--x", "1,0"]);
        let v = json_out(&o);
        assert_eq!(v["exact_entries"], json!([{"x": ["1", "0"], "h": ["0", "1"], "count": 1}]));
        let o = pdw(&["dw", "--braid", "2: 1", "--group", "cyclic:2", "--exact", "--classes"]);
        assert_eq!(o.code, 2);
    }

    #[test]
    fn frobcheck_runs() {
        let o = pdw(&["frobcheck", "-p", "3", "-e", "2", "-n", "3", "--trials", "20"]);
        assert_eq!(o.code, 0);
        let v = json_out(&o);
        assert_eq!(v["all_passed"], 20);
        assert_eq!(v["modulus"], json!([1, 0, 1]));
    }

    #[test]
    fn verify_output_is_thread_invariant() {
        let base = ["verify", "--braid", "2: 1", "-p", "3", "-k", "1", "--group", "quaternion:8", "--all-x"];
        let a = pdw(&[&["--threads", "1"][..], &base[..]].concat());
        let b = pdw(&[&["--threads", "8"][..], &base[..]].concat());
        assert_eq!(a.code, 0);
        assert_eq!(a.stdout, b.stdout);
    }
}
