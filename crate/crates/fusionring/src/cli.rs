//! Command-line front end: group-spec parsing, one subcommand per
//! computation, text/JSON emission, and the cohomology cache.
//!
//! Exit codes: 0 success, 2 parse/usage error, 3 cap exceeded,
//! 4 verification failure, 1 I/O or internal error.

use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::burnside::BurnsideRing;
use crate::cache::H2Cache;
use crate::cohomology::{CohomologyCaps, CohomologyError};
use crate::group::{named_group, GroupError};
use crate::structure::small_group_name;
use crate::subgroup::SubgroupClassTable;
use crate::twisted::FusionRing;
use crate::verify::{verify_group, VerifyLevel};

pub use crate::groupspec::{parse as parse_spec, GroupPlan, ParseError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

const DEFAULT_ORDER_CAP_TWISTED: usize = 200;
const DEFAULT_ORDER_CAP_UNTWISTED: usize = 2000;

const USAGE: &str = "usage: fusionring <GROUP-SPEC> <COMMAND> [ARGS] [OPTIONS]

Group specs: C<n>, D<n> (dihedral, order 2n), S<n>, A<n>, Q8, products with
'x' (e.g. C2xC2xC3), or perm:<degree>:<cycle>[;<cycle>...] with 0-based
points, e.g. perm:3:(0,1);(0,1,2).

Commands:
  basis                 untwisted and twisted basis listings with ranks
  subgroups             subgroup classes up to conjugacy
  h2 <selector>         H²(H, k×): invariant factors and generator cocycles;
                        selector is G, all, or a class like H4#0
  burnside-table        full untwisted multiplication table
  fusion-table          full twisted multiplication table
  product <keyA> <keyB> one product of twisted basis keys (e.g. H4#0[1]),
                        with its untwisted shadow
  invertibles           invertible elements and their group structure
  verify                run the property suites and report pass/fail

Options:
  --format text|json    output format (default text)
  --order-cap N         max group order (default 200; 2000 for the
                        untwisted-only commands subgroups/burnside-table)
  --unknowns-cap N      max cocycle unknowns (|H|-1)^2 (default 40000)
  --cache PATH          cohomology cache file (JSON lines); the
                        FUSIONRING_CACHE environment variable overrides this
  --verify-level quick|full   thoroughness of `verify` (default full)
  -h, --help            show this help
  -V, --version         show version
";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Basis,
    Subgroups,
    H2 { selector: String },
    BurnsideTable,
    FusionTable,
    Product { left: String, right: String },
    Invertibles,
    Verify,
}

#[derive(Debug, Clone)]
pub struct CliConfig {
    pub group_spec: String,
    pub command: Command,
    pub format: Format,
    pub order_cap: usize,
    pub unknowns_cap: usize,
    pub cache_path: Option<PathBuf>,
    pub verify_level: VerifyLevel,
}

enum CliOutcome {
    Config(Box<CliConfig>),
    Help,
    Version,
}

fn parse_args(args: &[String]) -> Result<CliOutcome, String> {
    let mut positionals: Vec<String> = Vec::new();
    let mut format = None;
    let mut order_cap = None;
    let mut unknowns_cap = None;
    let mut cache = None;
    let mut verify_level = None;
    let mut it = args.iter().peekable();
    while let Some(arg) = it.next() {
        let (flag, inline_value) = match arg.split_once('=') {
            Some((f, v)) if f.starts_with("--") => (f.to_string(), Some(v.to_string())),
            _ => (arg.clone(), None),
        };
        let mut take_value = |name: &str| -> Result<String, String> {
            if let Some(v) = &inline_value {
                return Ok(v.clone());
            }
            it.next()
                .cloned()
                .ok_or_else(|| format!("{name} requires a value"))
        };
        match flag.as_str() {
            "-h" | "--help" => return Ok(CliOutcome::Help),
            "-V" | "--version" => return Ok(CliOutcome::Version),
            "--format" => {
                format = Some(match take_value("--format")?.as_str() {
                    "text" => Format::Text,
                    "json" => Format::Json,
                    other => return Err(format!("unknown format '{other}' (text|json)")),
                })
            }
            "--order-cap" => {
                order_cap = Some(
                    take_value("--order-cap")?
                        .parse::<usize>()
                        .map_err(|_| "--order-cap needs a positive integer".to_string())
                        .and_then(|v| {
                            if v == 0 {
                                Err("--order-cap needs a positive integer".to_string())
                            } else {
                                Ok(v)
                            }
                        })?,
                )
            }
            "--unknowns-cap" => {
                unknowns_cap = Some(
                    take_value("--unknowns-cap")?
                        .parse::<usize>()
                        .map_err(|_| "--unknowns-cap needs a positive integer".to_string())?,
                )
            }
            "--cache" => cache = Some(PathBuf::from(take_value("--cache")?)),
            "--verify-level" => {
                verify_level = Some(match take_value("--verify-level")?.as_str() {
                    "quick" => VerifyLevel::Quick,
                    "full" => VerifyLevel::Full,
                    other => return Err(format!("unknown verify level '{other}' (quick|full)")),
                })
            }
            other if other.starts_with('-') && other.len() > 1 => {
                return Err(format!("unknown option '{other}'"));
            }
            _ => positionals.push(arg.clone()),
        }
    }
    if positionals.len() < 2 {
        return Err("expected a group spec and a command".to_string());
    }
    let group_spec = positionals[0].clone();
    let mut rest = positionals[2..].iter().cloned();
    let expect_end = |mut rest: std::vec::IntoIter<String>, cmd: &str| -> Result<(), String> {
        match rest.next() {
            None => Ok(()),
            Some(extra) => Err(format!("unexpected argument '{extra}' after {cmd}")),
        }
    };
    let tail: Vec<String> = rest.by_ref().collect();
    let command = match positionals[1].as_str() {
        "basis" => {
            expect_end(tail.into_iter(), "basis")?;
            Command::Basis
        }
        "subgroups" => {
            expect_end(tail.into_iter(), "subgroups")?;
            Command::Subgroups
        }
        "h2" => {
            let mut t = tail.into_iter();
            let selector = t.next().ok_or("h2 needs a subgroup selector")?;
            expect_end(t, "h2")?;
            Command::H2 { selector }
        }
        "burnside-table" => {
            expect_end(tail.into_iter(), "burnside-table")?;
            Command::BurnsideTable
        }
        "fusion-table" => {
            expect_end(tail.into_iter(), "fusion-table")?;
            Command::FusionTable
        }
        "product" => {
            let mut t = tail.into_iter();
            let left = t.next().ok_or("product needs two basis keys")?;
            let right = t.next().ok_or("product needs two basis keys")?;
            expect_end(t, "product")?;
            Command::Product { left, right }
        }
        "invertibles" => {
            expect_end(tail.into_iter(), "invertibles")?;
            Command::Invertibles
        }
        "verify" => {
            expect_end(tail.into_iter(), "verify")?;
            Command::Verify
        }
        other => return Err(format!("unknown command '{other}'")),
    };
    let default_cap = match command {
        Command::Subgroups | Command::BurnsideTable => DEFAULT_ORDER_CAP_UNTWISTED,
        _ => DEFAULT_ORDER_CAP_TWISTED,
    };
    let cache_path = std::env::var_os("FUSIONRING_CACHE")
        .map(PathBuf::from)
        .or(cache);
    Ok(CliOutcome::Config(Box::new(CliConfig {
        group_spec,
        command,
        format: format.unwrap_or(Format::Text),
        order_cap: order_cap.unwrap_or(default_cap),
        unknowns_cap: unknowns_cap.unwrap_or_else(|| CohomologyCaps::default().unknowns_cap),
        cache_path,
        verify_level: verify_level.unwrap_or(VerifyLevel::Full),
    })))
}

// ------------------------------------------------------------------
// Report structures (the JSON schemas; text rendering reads the same data)
// ------------------------------------------------------------------

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug, Clone)]
pub struct UntwistedEntry {
    pub label: String,
    pub human: String,
    pub order: usize,
    pub conjugates: usize,
    pub normalizer_order: usize,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug, Clone)]
pub struct TwistedEntry {
    pub key: String,
    pub subgroup_label: String,
    pub h2_coords: Vec<i64>,
    pub projective_rank: usize,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug, Clone)]
pub struct Term {
    pub key: String,
    pub coeff: i64,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug, Clone)]
pub struct ProductEntry {
    pub left: String,
    pub right: String,
    pub terms: Vec<Term>,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug, Clone)]
pub struct BasisReport {
    pub group: String,
    pub order: usize,
    pub modulus: i64,
    pub untwisted: Vec<UntwistedEntry>,
    pub twisted: Vec<TwistedEntry>,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug, Clone)]
pub struct SubgroupClassEntry {
    pub label: String,
    pub human: String,
    pub order: usize,
    pub conjugates: usize,
    pub normalizer_order: usize,
    pub representative: Vec<usize>,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug, Clone)]
pub struct SubgroupsReport {
    pub group: String,
    pub order: usize,
    pub classes: Vec<SubgroupClassEntry>,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug, Clone)]
pub struct H2Entry {
    pub subgroup_label: String,
    pub members: Vec<usize>,
    pub modulus: i64,
    pub invariant_factors: Vec<i64>,
    /// Row-major value grid over subgroup members, one per generator.
    pub generators: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug, Clone)]
pub struct H2Report {
    pub group: String,
    pub modulus: i64,
    pub results: Vec<H2Entry>,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug, Clone)]
pub struct BurnsideTableReport {
    pub group: String,
    pub basis: Vec<UntwistedEntry>,
    pub products: Vec<ProductEntry>,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug, Clone)]
pub struct FusionTableReport {
    pub group: String,
    pub modulus: i64,
    pub basis: Vec<TwistedEntry>,
    pub products: Vec<ProductEntry>,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug, Clone)]
pub struct ProductReport {
    pub group: String,
    pub left: String,
    pub right: String,
    pub twisted: Vec<Term>,
    pub forgetful: Vec<Term>,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug, Clone)]
pub struct InvertiblesReportJson {
    pub group: String,
    pub elements: Vec<String>,
    pub invariant_factors: Vec<i64>,
    pub h2_invariant_factors: Vec<i64>,
    pub verdict: String,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug, Clone)]
pub struct CheckEntry {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug, Clone)]
pub struct VerifyReportJson {
    pub group: String,
    pub level: String,
    pub passed: bool,
    pub checks: Vec<CheckEntry>,
}

// ------------------------------------------------------------------
// Entry points
// ------------------------------------------------------------------

pub fn run(args: impl IntoIterator<Item = String>) -> i32 {
    let mut out = std::io::stdout();
    let mut err = std::io::stderr();
    run_to_writers(args, &mut out, &mut err)
}

/// Full CLI driver writing to explicit streams; returns the exit code.
pub fn run_to_writers(
    args: impl IntoIterator<Item = String>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let args: Vec<String> = args.into_iter().collect();
    let config = match parse_args(&args) {
        Ok(CliOutcome::Help) => {
            let _ = out.write_all(USAGE.as_bytes());
            return EXIT_OK;
        }
        Ok(CliOutcome::Version) => {
            let _ = writeln!(out, "fusionring {}", env!("CARGO_PKG_VERSION"));
            return EXIT_OK;
        }
        Ok(CliOutcome::Config(c)) => *c,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            let _ = err.write_all(USAGE.as_bytes());
            return EXIT_PARSE;
        }
    };
    match execute(&config, out, err) {
        Ok(code) => code,
        // A closed pipe downstream (e.g. `| head`) is not an error.
        Err(RunError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(e) => {
            let (code, msg) = classify_error(&config, &e);
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

enum RunError {
    Group(GroupError),
    Cohomology(CohomologyError),
    Usage(String),
    Io(std::io::Error),
}

impl From<GroupError> for RunError {
    fn from(e: GroupError) -> Self {
        RunError::Group(e)
    }
}

impl From<CohomologyError> for RunError {
    fn from(e: CohomologyError) -> Self {
        RunError::Cohomology(e)
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e)
    }
}

fn classify_error(config: &CliConfig, e: &RunError) -> (i32, String) {
    match e {
        RunError::Group(GroupError::Parse { pos, msg }) => {
            let caret = format!("{}^", " ".repeat(*pos));
            (
                EXIT_PARSE,
                format!(
                    "group spec parse error at position {pos}: {msg}\n  {}\n  {caret}",
                    config.group_spec
                ),
            )
        }
        RunError::Group(GroupError::OrderCapExceeded { cap }) => (
            EXIT_CAP,
            format!("group order exceeds cap {cap} (raise with --order-cap)"),
        ),
        RunError::Group(e) => (EXIT_INTERNAL, e.to_string()),
        RunError::Cohomology(CohomologyError::CapExceeded { unknowns, cap }) => (
            EXIT_CAP,
            format!("cohomology problem size {unknowns} exceeds cap {cap} (raise with --unknowns-cap)"),
        ),
        RunError::Cohomology(e) => (EXIT_INTERNAL, e.to_string()),
        RunError::Usage(msg) => (EXIT_PARSE, msg.clone()),
        RunError::Io(e) => (EXIT_INTERNAL, format!("i/o error: {e}")),
    }
}

fn class_label(classes: &SubgroupClassTable, ci: usize) -> String {
    format!("[{}:{}]", classes.class(ci).representative.order(), ci)
}

fn human_label(classes: &SubgroupClassTable, ci: usize) -> String {
    format!(
        "{}#{}",
        small_group_name(&classes.class(ci).representative),
        ci
    )
}

fn untwisted_entries(classes: &SubgroupClassTable) -> Vec<UntwistedEntry> {
    (0..classes.len())
        .map(|ci| {
            let class = classes.class(ci);
            UntwistedEntry {
                label: class_label(classes, ci),
                human: human_label(classes, ci),
                order: class.representative.order(),
                conjugates: class.conjugates.len(),
                normalizer_order: class.normalizer.order(),
            }
        })
        .collect()
}

fn twisted_entries(ring: &FusionRing) -> Result<Vec<TwistedEntry>, CohomologyError> {
    ring.basis()
        .iter()
        .map(|key| {
            Ok(TwistedEntry {
                key: ring.key_label(key),
                subgroup_label: human_label(ring.classes(), key.subgroup_class),
                h2_coords: key.coords.clone(),
                projective_rank: ring.projective_rank(key)?,
            })
        })
        .collect()
}

fn execute(config: &CliConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, RunError> {
    let group = named_group(&config.group_spec, config.order_cap)?;
    let classes = Arc::new(SubgroupClassTable::build(&group));
    let caps = CohomologyCaps {
        unknowns_cap: config.unknowns_cap,
    };
    let mut cache = config.cache_path.as_ref().map(H2Cache::open);
    if let Some(cache) = &cache {
        for warning in &cache.warnings {
            let _ = writeln!(err, "warning: {warning}");
        }
    }

    match &config.command {
        Command::Basis => {
            let ring = FusionRing::new(Arc::clone(&classes), &caps, cache.as_mut())?;
            let report = BasisReport {
                group: config.group_spec.clone(),
                order: group.order(),
                modulus: ring.modulus(),
                untwisted: untwisted_entries(&classes),
                twisted: twisted_entries(&ring)?,
            };
            match config.format {
                Format::Json => emit_json(out, &report)?,
                Format::Text => {
                    writeln!(
                        out,
                        "group {} (order {}, modulus {})",
                        report.group, report.order, report.modulus
                    )?;
                    writeln!(out, "untwisted basis ({} classes):", report.untwisted.len())?;
                    for e in &report.untwisted {
                        writeln!(
                            out,
                            "  {:<8} {:<10} order {:<4} conjugates {:<3} normalizer {}",
                            e.label, e.human, e.order, e.conjugates, e.normalizer_order
                        )?;
                    }
                    writeln!(out, "twisted basis ({} keys):", report.twisted.len())?;
                    for e in &report.twisted {
                        writeln!(
                            out,
                            "  {:<12} subgroup {:<10} rank {}",
                            e.key, e.subgroup_label, e.projective_rank
                        )?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::Subgroups => {
            let report = SubgroupsReport {
                group: config.group_spec.clone(),
                order: group.order(),
                classes: (0..classes.len())
                    .map(|ci| {
                        let class = classes.class(ci);
                        SubgroupClassEntry {
                            label: class_label(&classes, ci),
                            human: human_label(&classes, ci),
                            order: class.representative.order(),
                            conjugates: class.conjugates.len(),
                            normalizer_order: class.normalizer.order(),
                            representative: class.representative.members().to_vec(),
                        }
                    })
                    .collect(),
            };
            match config.format {
                Format::Json => emit_json(out, &report)?,
                Format::Text => {
                    writeln!(out, "group {} (order {})", report.group, report.order)?;
                    writeln!(out, "{} subgroup classes:", report.classes.len())?;
                    for e in &report.classes {
                        writeln!(
                            out,
                            "  {:<8} {:<10} order {:<4} conjugates {:<3} normalizer {:<4} members {:?}",
                            e.label, e.human, e.order, e.conjugates, e.normalizer_order,
                            e.representative
                        )?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::H2 { selector } => {
            let selected: Vec<usize> = match selector.as_str() {
                "G" => vec![classes.whole_group_class()],
                "all" => (0..classes.len()).collect(),
                other => {
                    let class = other
                        .strip_prefix('H')
                        .and_then(|rest| rest.split_once('#'))
                        .and_then(|(order, k)| {
                            Some((order.parse::<usize>().ok()?, k.parse::<usize>().ok()?))
                        })
                        .and_then(|(order, k)| classes.class_by_order_index(order, k))
                        .ok_or_else(|| {
                            RunError::Usage(format!(
                                "unknown subgroup selector '{other}' (use G, all, or H<order>#<k>)"
                            ))
                        })?;
                    vec![class]
                }
            };
            // Only the selected classes are computed, read-through cached.
            let modulus = group.order() as i64;
            let results: Vec<H2Entry> = selected
                .into_iter()
                .map(|ci| -> Result<H2Entry, RunError> {
                    let rep = &classes.class(ci).representative;
                    let hit = cache.as_ref().and_then(|c| {
                        c.get(&config.group_spec, rep.members(), modulus)
                            .and_then(|r| crate::cohomology::H2Group::from_record(
                                rep.clone(),
                                modulus,
                                r,
                            ))
                    });
                    let h2 = match hit {
                        Some(h2) => h2,
                        None => {
                            let h2 = crate::cohomology::h2_units(rep, modulus, &caps)?;
                            if let Some(cache) = cache.as_mut() {
                                let _ = cache.put(
                                    &config.group_spec,
                                    rep.members(),
                                    modulus,
                                    h2.to_record(),
                                );
                            }
                            h2
                        }
                    };
                    Ok(H2Entry {
                        subgroup_label: human_label(&classes, ci),
                        members: h2.subgroup().members().to_vec(),
                        modulus: h2.modulus(),
                        invariant_factors: h2.invariant_factors().to_vec(),
                        generators: h2
                            .generators()
                            .iter()
                            .map(|g| g.values_row_major().to_vec())
                            .collect(),
                    })
                })
                .collect::<Result<_, _>>()?;
            let report = H2Report {
                group: config.group_spec.clone(),
                modulus,
                results,
            };
            match config.format {
                Format::Json => emit_json(out, &report)?,
                Format::Text => {
                    writeln!(out, "group {} (modulus {})", report.group, report.modulus)?;
                    for entry in &report.results {
                        writeln!(
                            out,
                            "H²({}, k×): invariant factors {:?}  (members {:?})",
                            entry.subgroup_label, entry.invariant_factors, entry.members
                        )?;
                        let h = entry.members.len();
                        for (i, gen) in entry.generators.iter().enumerate() {
                            writeln!(out, "  generator {i} (rows over members):")?;
                            for r in 0..h {
                                writeln!(out, "    {:?}", &gen[r * h..(r + 1) * h])?;
                            }
                        }
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::BurnsideTable => {
            let ring = BurnsideRing::new(Arc::clone(&classes));
            let n = classes.len();
            let labels: Vec<String> = (0..n).map(|ci| class_label(&classes, ci)).collect();
            let products: Vec<ProductEntry> = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| {
                    let prod = ring.basis_product(i, j);
                    ProductEntry {
                        left: labels[i].clone(),
                        right: labels[j].clone(),
                        terms: prod
                            .coeffs()
                            .iter()
                            .map(|(&c, &v)| Term {
                                key: labels[c].clone(),
                                coeff: v,
                            })
                            .collect(),
                    }
                })
                .collect();
            let report = BurnsideTableReport {
                group: config.group_spec.clone(),
                basis: untwisted_entries(&classes),
                products,
            };
            match config.format {
                Format::Json => emit_json(out, &report)?,
                Format::Text => {
                    writeln!(out, "Burnside ring of {} ({} classes)", report.group, n)?;
                    for (i, e) in report.basis.iter().enumerate() {
                        writeln!(out, "  b{i} = {} {}", e.label, e.human)?;
                    }
                    let shorthand: Vec<String> = (0..n).map(|i| format!("b{i}")).collect();
                    let cell = |i: usize, j: usize| {
                        term_string(&report.products[i * n + j].terms, &report.basis, &shorthand)
                    };
                    render_grid(out, &shorthand, cell)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::FusionTable => {
            let ring = FusionRing::new(Arc::clone(&classes), &caps, cache.as_mut())?;
            let basis = twisted_entries(&ring)?;
            let n = ring.basis().len();
            let table = ring.fusion_table()?;
            let products: Vec<ProductEntry> = (0..n * n)
                .map(|idx| ProductEntry {
                    left: basis[idx / n].key.clone(),
                    right: basis[idx % n].key.clone(),
                    terms: table[idx]
                        .coeffs()
                        .iter()
                        .map(|(key, &v)| Term {
                            key: ring.key_label(key),
                            coeff: v,
                        })
                        .collect(),
                })
                .collect();
            let report = FusionTableReport {
                group: config.group_spec.clone(),
                modulus: ring.modulus(),
                basis,
                products,
            };
            match config.format {
                Format::Json => emit_json(out, &report)?,
                Format::Text => {
                    writeln!(
                        out,
                        "twisted Burnside ring of {} ({} keys, modulus {})",
                        report.group, n, report.modulus
                    )?;
                    for (i, e) in report.basis.iter().enumerate() {
                        writeln!(
                            out,
                            "  b{i} = {} (subgroup {}, rank {})",
                            e.key, e.subgroup_label, e.projective_rank
                        )?;
                    }
                    let shorthand: Vec<String> = (0..n).map(|i| format!("b{i}")).collect();
                    let keys: Vec<String> =
                        report.basis.iter().map(|e| e.key.clone()).collect();
                    let cell = |i: usize, j: usize| {
                        term_string_keys(&report.products[i * n + j].terms, &keys, &shorthand)
                    };
                    render_grid(out, &shorthand, cell)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Product { left, right } => {
            let ring = FusionRing::new(Arc::clone(&classes), &caps, cache.as_mut())?;
            let lk = ring.parse_key_label(left).map_err(RunError::Usage)?;
            let rk = ring.parse_key_label(right).map_err(RunError::Usage)?;
            let prod = ring.basis_product(&lk, &rk)?;
            let forgotten = ring.forget_twist(&prod);
            let report = ProductReport {
                group: config.group_spec.clone(),
                left: ring.key_label(&lk),
                right: ring.key_label(&rk),
                twisted: prod
                    .coeffs()
                    .iter()
                    .map(|(key, &v)| Term {
                        key: ring.key_label(key),
                        coeff: v,
                    })
                    .collect(),
                forgetful: forgotten
                    .coeffs()
                    .iter()
                    .map(|(&c, &v)| Term {
                        key: class_label(&classes, c),
                        coeff: v,
                    })
                    .collect(),
            };
            match config.format {
                Format::Json => emit_json(out, &report)?,
                Format::Text => {
                    writeln!(out, "{} · {} =", report.left, report.right)?;
                    for t in &report.twisted {
                        writeln!(out, "  {:>3} · {}", t.coeff, t.key)?;
                    }
                    writeln!(out, "untwisted shadow:")?;
                    for t in &report.forgetful {
                        writeln!(out, "  {:>3} · {}", t.coeff, t.key)?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::Invertibles => {
            let ring = FusionRing::new(Arc::clone(&classes), &caps, cache.as_mut())?;
            let inv = ring.invertibles()?;
            let report = InvertiblesReportJson {
                group: config.group_spec.clone(),
                elements: inv.elements.iter().map(|k| ring.key_label(k)).collect(),
                invariant_factors: inv.invariant_factors.clone(),
                h2_invariant_factors: inv.h2_invariant_factors.clone(),
                verdict: if inv.matches_h2 {
                    "MATCHES H2(G,kx)".to_string()
                } else {
                    "MISMATCH".to_string()
                },
            };
            match config.format {
                Format::Json => emit_json(out, &report)?,
                Format::Text => {
                    writeln!(
                        out,
                        "invertible elements of the twisted Burnside ring of {}:",
                        report.group
                    )?;
                    for key in &report.elements {
                        writeln!(out, "  {key}")?;
                    }
                    writeln!(
                        out,
                        "group structure: invariant factors {:?}",
                        report.invariant_factors
                    )?;
                    writeln!(
                        out,
                        "H²(G, k×) factors {:?} — {}",
                        report.h2_invariant_factors, report.verdict
                    )?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Verify => {
            let report = verify_group(&group, config.verify_level, &caps, cache.as_mut())?;
            let json = VerifyReportJson {
                group: config.group_spec.clone(),
                level: match config.verify_level {
                    VerifyLevel::Quick => "quick".to_string(),
                    VerifyLevel::Full => "full".to_string(),
                },
                passed: report.all_passed(),
                checks: report
                    .checks
                    .iter()
                    .map(|c| CheckEntry {
                        name: c.name.clone(),
                        passed: c.passed,
                        detail: c.detail.clone(),
                    })
                    .collect(),
            };
            match config.format {
                Format::Json => emit_json(out, &json)?,
                Format::Text => {
                    for c in &json.checks {
                        let tag = if c.passed { "PASS" } else { "FAIL" };
                        writeln!(out, "{tag} {} — {}", c.name, c.detail)?;
                    }
                    let failed = json.checks.iter().filter(|c| !c.passed).count();
                    writeln!(
                        out,
                        "{}: {} checks, {} failed",
                        if failed == 0 { "OK" } else { "FAILED" },
                        json.checks.len(),
                        failed
                    )?;
                }
            }
            Ok(if json.passed { EXIT_OK } else { EXIT_VERIFY })
        }
    }
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(value).expect("reports serialize");
    writeln!(out, "{text}")
}

fn term_string(terms: &[Term], basis: &[UntwistedEntry], shorthand: &[String]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    terms
        .iter()
        .map(|t| {
            let idx = basis
                .iter()
                .position(|b| b.label == t.key)
                .expect("term key in basis");
            if t.coeff == 1 {
                shorthand[idx].clone()
            } else {
                format!("{}{}", t.coeff, shorthand[idx])
            }
        })
        .collect::<Vec<_>>()
        .join("+")
}

fn term_string_keys(terms: &[Term], keys: &[String], shorthand: &[String]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    terms
        .iter()
        .map(|t| {
            let idx = keys.iter().position(|k| k == &t.key).expect("term key in basis");
            if t.coeff == 1 {
                shorthand[idx].clone()
            } else {
                format!("{}{}", t.coeff, shorthand[idx])
            }
        })
        .collect::<Vec<_>>()
        .join("+")
}

fn render_grid(
    out: &mut dyn Write,
    labels: &[String],
    cell: impl Fn(usize, usize) -> String,
) -> std::io::Result<()> {
    let n = labels.len();
    let cells: Vec<Vec<String>> = (0..n)
        .map(|i| (0..n).map(|j| cell(i, j)).collect())
        .collect();
    let mut widths: Vec<usize> = labels.iter().map(|l| l.len()).collect();
    for row in &cells {
        for (j, c) in row.iter().enumerate() {
            widths[j] = widths[j].max(c.len());
        }
    }
    let head_width = labels.iter().map(|l| l.len()).max().unwrap_or(1);
    write!(out, "{:>head_width$} |", "·")?;
    for (j, label) in labels.iter().enumerate() {
        write!(out, " {:>width$}", label, width = widths[j])?;
    }
    writeln!(out)?;
    let total: usize = head_width + 2 + widths.iter().map(|w| w + 1).sum::<usize>();
    writeln!(out, "{}", "-".repeat(total))?;
    for (i, row) in cells.iter().enumerate() {
        write!(out, "{:>head_width$} |", labels[i])?;
        for (j, c) in row.iter().enumerate() {
            write!(out, " {:>width$}", c, width = widths[j])?;
        }
        writeln!(out)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_to_writers(
            args.iter().map(|s| s.to_string()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn help_and_version() {
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("usage"));
        let (code, out, _) = run_capture(&["--version"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("fusionring"));
    }

    #[test]
    fn missing_command_is_usage_error() {
        let (code, _, err) = run_capture(&["S3"]);
        assert_eq!(code, EXIT_PARSE);
        assert!(err.contains("error"));
    }

    #[test]
    fn bad_group_spec_reports_position() {
        let (code, _, err) = run_capture(&["C2xB4", "basis"]);
        assert_eq!(code, EXIT_PARSE);
        assert!(err.contains("position 3"), "{err}");
        assert!(err.contains("^"));
    }

    #[test]
    fn cap_exceeded_is_exit_three() {
        let (code, _, err) = run_capture(&["S3", "basis", "--order-cap", "4"]);
        assert_eq!(code, EXIT_CAP);
        assert!(err.contains("cap"));
    }

    #[test]
    fn c1_basis_has_single_key() {
        let (code, out, _) = run_capture(&["C1", "basis"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("H1#0[]"), "{out}");
    }

    #[test]
    fn invertibles_verdict_for_c2xc2() {
        let (code, out, _) = run_capture(&["C2xC2", "invertibles"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("MATCHES"), "{out}");
        assert!(out.contains("[2]"), "{out}");
    }

    #[test]
    fn s3_burnside_table_json_entry() {
        let (code, out, _) = run_capture(&["S3", "burnside-table", "--format", "json"]);
        assert_eq!(code, EXIT_OK);
        let report: BurnsideTableReport = serde_json::from_str(&out).unwrap();
        assert_eq!(report.basis.len(), 4);
        // (C2, C2) entry lists C2 and the trivial class, coefficient 1 each.
        let entry = report
            .products
            .iter()
            .find(|p| p.left == "[2:1]" && p.right == "[2:1]")
            .unwrap();
        let mut keys: Vec<(&str, i64)> = entry
            .terms
            .iter()
            .map(|t| (t.key.as_str(), t.coeff))
            .collect();
        keys.sort();
        assert_eq!(keys, vec![("[1:0]", 1), ("[2:1]", 1)]);
    }

    #[test]
    fn verify_quick_exits_zero() {
        let (code, out, _) = run_capture(&["S3", "verify", "--verify-level", "quick"]);
        assert_eq!(code, EXIT_OK, "{out}");
        assert!(out.contains("PASS"));
        assert!(!out.contains("FAIL "));
    }
}
