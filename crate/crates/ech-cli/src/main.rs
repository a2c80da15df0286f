//! Command line front end for the ech library. Subcommands enumerate chain
//! complex generators, evaluate the index pairing, compute homology tables,
//! list partition and connector data, and drive the verification suites.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or configuration
//! error, 3 domain error.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ech::complex::verify_main_theorem;
use ech::connectors::{classify_connector, CoverData};
use ech::orbits::{action, degree, enumerate_generators};
use ech::partitions::{negative_partition, positive_partition, Partition, Rotation};
use ech::verify::{
    run_additivity, run_connectors, run_lens, run_main_theorem, run_parity, run_partitions,
    run_stability, run_trivialization, SuiteReport,
};
use ech::{ech_index, Bundle, MorseData, OrbitKind, OrbitSet, Rational};
use serde_json::json;

#[derive(Parser)]
#[command(name = "ech", version, about = "ECH generators, gradings, and homology of prequantization bundles over surfaces")]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "table")]
    format: Format,
    /// Write the output to a file instead of stdout
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Seed for the randomized verification suites
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Tsv,
}

#[derive(Args)]
struct BundleArgs {
    /// Genus of the base surface
    #[arg(long, default_value_t = 0)]
    genus: u32,
    /// Euler class of the bundle, a negative integer
    #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
    euler: i64,
}

#[derive(Clone, Copy, Debug)]
enum GammaArg {
    All,
    One(i64),
}

fn parse_gamma(s: &str) -> Result<GammaArg, String> {
    if s == "all" {
        return Ok(GammaArg::All);
    }
    s.parse::<i64>()
        .map(GammaArg::One)
        .map_err(|_| format!("expected an integer or \"all\", got {s:?}"))
}

fn parse_ratio(s: &str) -> Result<Rational, String> {
    let int = |t: &str| {
        t.trim()
            .parse::<i64>()
            .map_err(|_| format!("expected an integer, got {t:?}"))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let (p, q) = (int(p)?, int(q)?);
            if q == 0 {
                return Err(format!("zero denominator in {s:?}"));
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(int(s)?)),
    }
}

#[derive(Subcommand)]
enum Command {
    /// List generators with homology class, degree, and ECH index
    Generators {
        #[command(flatten)]
        bundle: BundleArgs,
        /// Homology class, or "all" for every class
        #[arg(long, default_value = "all", value_parser = parse_gamma, allow_hyphen_values = true)]
        gamma: GammaArg,
        /// Largest total multiplicity to enumerate
        #[arg(long, default_value_t = 6)]
        max_total: u64,
        /// Perturbation size for the action filter, as p/q
        #[arg(long, value_parser = parse_ratio, allow_hyphen_values = true)]
        eps: Option<Rational>,
        /// Keep only generators of action at most this multiple of pi
        #[arg(long, value_parser = parse_ratio, allow_hyphen_values = true)]
        action_cutoff: Option<Rational>,
    },
    /// Evaluate the index pairing I(a, c) of two orbit-set literals
    Index {
        #[command(flatten)]
        bundle: BundleArgs,
        /// First orbit set, e.g. "e-^2 h1 e+"
        a: String,
        /// Second orbit set; the empty string is the empty set
        c: String,
    },
    /// Homology dimensions by grading, with the certified bound
    Homology {
        #[command(flatten)]
        bundle: BundleArgs,
        /// Homology class, or "all" for every class
        #[arg(long, default_value = "all", value_parser = parse_gamma, allow_hyphen_values = true)]
        gamma: GammaArg,
        /// Largest total multiplicity in the truncation
        #[arg(long, default_value_t = 6)]
        max_total: u64,
    },
    /// Run a verification suite; exits 1 if any check fails
    Verify {
        /// Which suite to run
        suite: Suite,
        #[command(flatten)]
        bundle: BundleArgs,
        /// Homology class, or "all" for every class
        #[arg(long, default_value = "all", value_parser = parse_gamma, allow_hyphen_values = true)]
        gamma: GammaArg,
        /// Largest total multiplicity where the suite enumerates generators
        #[arg(long, default_value_t = 6)]
        max_total: u64,
        /// Largest covering multiplicity for the connector census
        #[arg(long, default_value_t = 4)]
        max_mult: u64,
        /// Sample count for the randomized suites
        #[arg(long, default_value_t = 1000)]
        samples: u64,
    },
    /// Incoming and outgoing partitions of an elliptic rotation number
    Partitions {
        /// Rotation angle as a rational p/q
        #[arg(long, value_parser = parse_ratio, allow_hyphen_values = true)]
        theta: Rational,
        /// Largest multiplicity to tabulate
        #[arg(long, default_value_t = 8)]
        max_m: u64,
    },
    /// Census of connector covering data with Fredholm index and case
    Connectors {
        /// Largest total covering multiplicity
        #[arg(long, default_value_t = 4)]
        max_mult: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    MainTheorem,
    Stability,
    Lens,
    Connectors,
    Partitions,
    Parity,
    Additivity,
    Trivialization,
}

enum CliError {
    Usage(String),
    Domain(String),
}

impl CliError {
    fn code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Domain(_) => ExitCode::from(3),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Domain(m) => f.write_str(m),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            err.code()
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let format = cli.format;
    let (text, code) = match cli.command {
        Command::Generators { bundle, gamma, max_total, eps, action_cutoff } => {
            cmd_generators(format, &bundle, gamma, max_total, eps, action_cutoff)?
        }
        Command::Index { bundle, a, c } => cmd_index(format, &bundle, &a, &c)?,
        Command::Homology { bundle, gamma, max_total } => {
            cmd_homology(format, &bundle, gamma, max_total)?
        }
        Command::Verify { suite, bundle, gamma, max_total, max_mult, samples } => {
            cmd_verify(format, suite, &bundle, gamma, max_total, max_mult, samples, cli.seed)?
        }
        Command::Partitions { theta, max_m } => cmd_partitions(format, theta, max_m)?,
        Command::Connectors { max_mult } => cmd_connectors(format, max_mult)?,
    };
    match cli.out {
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(code)
}

fn bundle(args: &BundleArgs) -> Result<Bundle, CliError> {
    Bundle::new(args.genus, args.euler).map_err(|e| CliError::Usage(e.to_string()))
}

fn classes(b: &Bundle, gamma: GammaArg) -> Result<Vec<i64>, CliError> {
    match gamma {
        GammaArg::All => Ok((0..b.abs_e()).collect()),
        GammaArg::One(g) if (0..b.abs_e()).contains(&g) => Ok(vec![g]),
        GammaArg::One(g) => Err(CliError::Usage(format!(
            "gamma {g} outside the class range 0..{}",
            b.abs_e()
        ))),
    }
}

/// Right-aligns every column but the first and joins with two spaces.
fn render_table(header: &[String], rows: &[Vec<String>]) -> String {
    let cols = header.len();
    let mut widths = vec![0usize; cols];
    for row in std::iter::once(header).chain(rows.iter().map(|r| &r[..]).map(|r| {
        debug_assert_eq!(r.len(), cols);
        r
    })) {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut s = String::new();
    for row in std::iter::once(header).chain(rows.iter().map(|r| &r[..])) {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            if i == 0 {
                write!(line, "{:<w$}", cell, w = widths[0]).unwrap();
            } else {
                write!(line, "{:>w$}", cell, w = widths[i]).unwrap();
            }
        }
        writeln!(s, "{}", line.trim_end()).unwrap();
    }
    s
}

fn tsv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = header.join("\t");
    s.push('\n');
    for row in rows {
        s.push_str(&row.join("\t"));
        s.push('\n');
    }
    s
}

fn json_lines(value: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&value).expect("serializable value");
    s.push('\n');
    s
}

struct GenRow {
    orbit: OrbitSet,
    gamma: i64,
    degree: u64,
    index: i64,
}

fn cmd_generators(
    format: Format,
    args: &BundleArgs,
    gamma: GammaArg,
    max_total: u64,
    eps: Option<Rational>,
    action_cutoff: Option<Rational>,
) -> Result<(String, ExitCode), CliError> {
    let b = bundle(args)?;
    let filter = match (eps, action_cutoff) {
        (None, None) => None,
        (Some(e), Some(c)) => {
            if e < Rational::from_integer(0) {
                return Err(CliError::Usage(format!("eps must be non-negative, got {e}")));
            }
            Some((e, c))
        }
        _ => {
            return Err(CliError::Usage(
                "--eps and --action-cutoff must be given together".to_string(),
            ))
        }
    };
    let md = MorseData::perfect(b.genus());
    let mut rows = Vec::new();
    for g in classes(&b, gamma)? {
        let base = OrbitSet::new(g as u64, vec![0; 2 * b.genus() as usize], 0);
        for a in enumerate_generators(&b, g, max_total) {
            if let Some((eps, cutoff)) = filter {
                let length = action(&b, &md, eps, &a).map_err(|e| CliError::Domain(e.to_string()))?;
                if length.coefficient() > cutoff {
                    continue;
                }
            }
            let degree = degree(&b, &a, &base).expect("base point lies in the class");
            let index = ech_index(&b, &a, &base).expect("base point lies in the class").total;
            rows.push(GenRow { orbit: a, gamma: g, degree, index });
        }
    }
    let text = match format {
        Format::Table => generators_table(&rows),
        Format::Json => json_lines(serde_json::Value::Array(
            rows.iter()
                .map(|r| {
                    json!({
                        "m_minus": r.orbit.m_minus(),
                        "m_hyp": r.orbit.m_hyp(),
                        "m_plus": r.orbit.m_plus(),
                        "gamma": r.gamma,
                        "degree": r.degree,
                        "index": r.index,
                    })
                })
                .collect(),
        )),
        Format::Tsv => tsv(
            &["m_minus", "m_hyp", "m_plus", "gamma", "degree", "index"],
            &rows
                .iter()
                .map(|r| {
                    vec![
                        r.orbit.m_minus().to_string(),
                        join(r.orbit.m_hyp(), ","),
                        r.orbit.m_plus().to_string(),
                        r.gamma.to_string(),
                        r.degree.to_string(),
                        r.index.to_string(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
    };
    Ok((text, ExitCode::SUCCESS))
}

/// Grid of generator counts, total multiplicity strata as rows and index
/// values as columns, one grid per homology class.
fn generators_table(rows: &[GenRow]) -> String {
    let mut by_class: BTreeMap<i64, BTreeMap<(u64, i64), u64>> = BTreeMap::new();
    for r in rows {
        *by_class.entry(r.gamma).or_default().entry((r.orbit.total(), r.index)).or_default() += 1;
    }
    let mut s = String::new();
    let multi = by_class.len() > 1;
    for (gamma, cells) in &by_class {
        if multi {
            if !s.is_empty() {
                s.push('\n');
            }
            writeln!(s, "class {gamma}").unwrap();
        }
        let totals: Vec<u64> = {
            let mut v: Vec<u64> = cells.keys().map(|&(t, _)| t).collect();
            v.dedup();
            v
        };
        let mut indices: Vec<i64> = cells.keys().map(|&(_, i)| i).collect();
        indices.sort_unstable();
        indices.dedup();
        let mut header: Vec<String> = vec!["M\\I".to_string()];
        header.extend(indices.iter().map(|i| i.to_string()));
        let grid: Vec<Vec<String>> = totals
            .iter()
            .map(|&t| {
                let mut row = vec![format!("M={t}")];
                row.extend(indices.iter().map(|&i| match cells.get(&(t, i)) {
                    Some(n) => n.to_string(),
                    None => ".".to_string(),
                }));
                row
            })
            .collect();
        s.push_str(&render_table(&header, &grid));
    }
    s
}

fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

fn cmd_index(
    format: Format,
    args: &BundleArgs,
    a: &str,
    c: &str,
) -> Result<(String, ExitCode), CliError> {
    let b = bundle(args)?;
    let a = OrbitSet::parse(a, b.genus()).map_err(|e| CliError::Usage(e.to_string()))?;
    let c = OrbitSet::parse(c, b.genus()).map_err(|e| CliError::Usage(e.to_string()))?;
    let bd = ech_index(&b, &a, &c).map_err(|e| CliError::Domain(e.to_string()))?;
    let text = match format {
        Format::Table => format!(
            "c_tau = {}\nq_tau = {}\ncz = {}\nI = {}\n",
            bd.c_tau, bd.q_tau, bd.cz_total, bd.total
        ),
        Format::Json => json_lines(json!({
            "c_tau": bd.c_tau,
            "q_tau": bd.q_tau,
            "cz": bd.cz_total,
            "total": bd.total,
        })),
        Format::Tsv => tsv(
            &["c_tau", "q_tau", "cz", "total"],
            &[vec![
                bd.c_tau.to_string(),
                bd.q_tau.to_string(),
                bd.cz_total.to_string(),
                bd.total.to_string(),
            ]],
        ),
    };
    Ok((text, ExitCode::SUCCESS))
}

fn cmd_homology(
    format: Format,
    args: &BundleArgs,
    gamma: GammaArg,
    max_total: u64,
) -> Result<(String, ExitCode), CliError> {
    let b = bundle(args)?;
    let mut reports = Vec::new();
    for g in classes(&b, gamma)? {
        let report = verify_main_theorem(&b, g, max_total)
            .map_err(|e| CliError::Domain(e.to_string()))?;
        reports.push((g, report));
    }
    let text = match format {
        Format::Table => {
            let mut s = String::new();
            for (g, report) in &reports {
                if !s.is_empty() {
                    s.push('\n');
                }
                writeln!(s, "class {g}: certified below grading {}", report.certified_below)
                    .unwrap();
                let rows: Vec<Vec<String>> = report
                    .computed
                    .iter()
                    .map(|(v, d)| vec![v.to_string(), d.to_string()])
                    .collect();
                s.push_str(&render_table(
                    &["grading".to_string(), "dim".to_string()],
                    &rows,
                ));
            }
            s
        }
        Format::Json => json_lines(serde_json::Value::Array(
            reports
                .iter()
                .map(|(g, report)| {
                    let dims: serde_json::Map<String, serde_json::Value> = report
                        .computed
                        .iter()
                        .map(|(v, d)| (v.to_string(), json!(d)))
                        .collect();
                    json!({
                        "gamma": g,
                        "certified_below": report.certified_below,
                        "dims": dims,
                    })
                })
                .collect(),
        )),
        Format::Tsv => tsv(
            &["gamma", "grading", "dim"],
            &reports
                .iter()
                .flat_map(|(g, report)| {
                    report
                        .computed
                        .iter()
                        .map(|(v, d)| vec![g.to_string(), v.to_string(), d.to_string()])
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>(),
        ),
    };
    Ok((text, ExitCode::SUCCESS))
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    format: Format,
    suite: Suite,
    args: &BundleArgs,
    gamma: GammaArg,
    max_total: u64,
    max_mult: u64,
    samples: u64,
    seed: u64,
) -> Result<(String, ExitCode), CliError> {
    let report: SuiteReport = match suite {
        Suite::MainTheorem => {
            let b = bundle(args)?;
            let g = gamma_option(&b, gamma)?;
            run_main_theorem(&b, g, max_total)
        }
        Suite::Stability => {
            let b = bundle(args)?;
            if b.genus() == 0 {
                return Err(CliError::Domain(
                    "the stable range needs a positive genus base".to_string(),
                ));
            }
            let g = gamma_option(&b, gamma)?;
            run_stability(&b, g)
        }
        Suite::Lens => {
            let b = bundle(args)?;
            if b.genus() != 0 {
                return Err(CliError::Domain(
                    "the lattice bijection needs a genus zero base".to_string(),
                ));
            }
            let g = gamma_option(&b, gamma)?;
            run_lens(&b, g, max_total)
        }
        Suite::Connectors => run_connectors(max_mult),
        Suite::Partitions => run_partitions(8, 9),
        Suite::Parity => run_parity(samples, seed),
        Suite::Additivity => run_additivity(samples, seed),
        Suite::Trivialization => run_trivialization(samples, seed),
    };
    let pass = report.passed();
    let text = match format {
        Format::Table => {
            let mut s = format!(
                "verify {}: {} ({} checks)\n",
                report.name,
                if pass { "pass" } else { "FAIL" },
                report.checked
            );
            for failure in &report.failures {
                writeln!(s, "  {failure}").unwrap();
            }
            s
        }
        Format::Json => json_lines(json!({
            "suite": report.name,
            "checked": report.checked,
            "failure_count": report.failure_count,
            "failures": report.failures,
            "pass": pass,
        })),
        Format::Tsv => tsv(
            &["suite", "checked", "failure_count", "pass"],
            &[vec![
                report.name.to_string(),
                report.checked.to_string(),
                report.failure_count.to_string(),
                pass.to_string(),
            ]],
        ),
    };
    Ok((text, if pass { ExitCode::SUCCESS } else { ExitCode::from(1) }))
}

fn gamma_option(b: &Bundle, gamma: GammaArg) -> Result<Option<i64>, CliError> {
    match gamma {
        GammaArg::All => Ok(None),
        GammaArg::One(_) => classes(b, gamma).map(|v| Some(v[0])),
    }
}

fn cmd_partitions(
    format: Format,
    theta: Rational,
    max_m: u64,
) -> Result<(String, ExitCode), CliError> {
    let mut rows: Vec<(u64, Partition, Partition)> = Vec::new();
    for m in 1..=max_m {
        // Integer multiples of the rotation have no transverse partitions.
        if (theta * Rational::from_integer(m as i64)).is_integer() {
            continue;
        }
        let pos = positive_partition(Rotation::Angle(theta), m)
            .map_err(|e| CliError::Domain(e.to_string()))?;
        let neg = negative_partition(Rotation::Angle(theta), m)
            .map_err(|e| CliError::Domain(e.to_string()))?;
        rows.push((m, pos, neg));
    }
    let text = match format {
        Format::Table => {
            let grid: Vec<Vec<String>> = rows
                .iter()
                .map(|(m, pos, neg)| {
                    vec![m.to_string(), join(pos.parts(), "+"), join(neg.parts(), "+")]
                })
                .collect();
            render_table(
                &["m".to_string(), "P+".to_string(), "P-".to_string()],
                &grid,
            )
        }
        Format::Json => json_lines(serde_json::Value::Array(
            rows.iter()
                .map(|(m, pos, neg)| {
                    json!({
                        "m": m,
                        "positive": pos.parts(),
                        "negative": neg.parts(),
                    })
                })
                .collect(),
        )),
        Format::Tsv => tsv(
            &["m", "positive", "negative"],
            &rows
                .iter()
                .map(|(m, pos, neg)| {
                    vec![m.to_string(), join(pos.parts(), "+"), join(neg.parts(), "+")]
                })
                .collect::<Vec<_>>(),
        ),
    };
    Ok((text, ExitCode::SUCCESS))
}

fn kind_label(kind: OrbitKind) -> &'static str {
    match kind {
        OrbitKind::EllipticMinus => "e-",
        OrbitKind::Hyperbolic => "h",
        OrbitKind::EllipticPlus => "e+",
    }
}

/// Partitions of `total` as non-increasing part lists.
fn mult_partitions(total: u64) -> Vec<Vec<u64>> {
    fn go(rem: u64, max: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=rem.min(max)).rev() {
            cur.push(k);
            go(rem - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(total, total, &mut Vec::new(), &mut out);
    out
}

fn cmd_connectors(format: Format, max_mult: u64) -> Result<(String, ExitCode), CliError> {
    let b = Bundle::new(1, -1).expect("reference bundle");
    let mut rows = Vec::new();
    for kind in [OrbitKind::EllipticMinus, OrbitKind::Hyperbolic, OrbitKind::EllipticPlus] {
        for genus in 0..=3u32 {
            for total in 1..=max_mult {
                for pos in mult_partitions(total) {
                    for neg in mult_partitions(total) {
                        let cover = CoverData::new(kind, genus, pos.clone(), neg.clone())
                            .expect("nonempty ends");
                        let report = classify_connector(&b, &[cover]);
                        let component = &report.components[0];
                        rows.push((kind, genus, pos.clone(), neg, component.index, component.case));
                    }
                }
            }
        }
    }
    let text = match format {
        Format::Table => {
            let grid: Vec<Vec<String>> = rows
                .iter()
                .map(|(kind, genus, pos, neg, index, case)| {
                    vec![
                        kind_label(*kind).to_string(),
                        genus.to_string(),
                        join(pos, "+"),
                        join(neg, "+"),
                        index.to_string(),
                        case.label().to_string(),
                    ]
                })
                .collect();
            render_table(
                &["base", "genus", "positive", "negative", "ind", "case"]
                    .map(str::to_string)
                    .to_vec(),
                &grid,
            )
        }
        Format::Json => json_lines(serde_json::Value::Array(
            rows.iter()
                .map(|(kind, genus, pos, neg, index, case)| {
                    json!({
                        "base": kind_label(*kind),
                        "genus": genus,
                        "positive": pos,
                        "negative": neg,
                        "index": index,
                        "case": case.label(),
                    })
                })
                .collect(),
        )),
        Format::Tsv => tsv(
            &["base", "genus", "positive", "negative", "index", "case"],
            &rows
                .iter()
                .map(|(kind, genus, pos, neg, index, case)| {
                    vec![
                        kind_label(*kind).to_string(),
                        genus.to_string(),
                        join(pos, "+"),
                        join(neg, "+"),
                        index.to_string(),
                        case.label().to_string(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
    };
    Ok((text, ExitCode::SUCCESS))
}
