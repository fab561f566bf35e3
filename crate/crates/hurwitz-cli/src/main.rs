//! Batch front end for the Hurwitz classification engine.
//!
//! Reads a finite group from a JSON spec and runs one of four commands:
//!
//! - `describe`: order, conjugacy classes, automorphism count, abelianization.
//! - `homology`: the Schur multiplier `H₂(G,ℤ)` and the branched-case
//!   quotients `K_Γ`, `H_{2,Γ}(G)` for a chosen union Γ of nontrivial
//!   conjugacy classes.
//! - `classify`: move-orbit classification of Hurwitz generating systems over
//!   a genus range, with per-ν̂ and per-ε̂ statistics and the comparison
//!   against the predicted admissible ε̂-classes.
//! - `verify`: property suites — move invariance of ε and ν (`epsilon`), the
//!   fold congruence families (`congruences`), the genus-stabilization
//!   experiment (`stabilization`), and the orbit ↔ admissible-ε̂ bijection at
//!   a single genus (`bijection`).
//!
//! All numeric output is exact. Every report embeds the tool version, a
//! configuration echo, and the enabled move families; reports are
//! byte-identical across runs and thread counts for a fixed configuration
//! and seed. Exit codes: 0 success, 1 invalid input, 2 resource-budget abort.
//! A budget abort prints no partial report.

use std::fmt::Write as _;
use std::io;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use hurwitz_core::bar::GroupContext;
use hurwitz_core::group::{build_group, ConjugacyClassTable, GroupSpec};
use hurwitz_core::hurwitz::{verify_congruences_exhaustive, verify_congruences_sampled, NuType};
use hurwitz_core::lattice::Int;
use hurwitz_core::moves::MoveSet;
use hurwitz_core::orbits::{
    classification_report, verify_epsilon_on_moves, verify_genus_stabilization,
    ClassificationReport, OrbitOptions,
};

/// Fixed default seed for sampled property checks, for reproducible CI runs.
const DEFAULT_SEED: u64 = 1729;

/// Largest group order verified exhaustively by `verify congruences`;
/// larger groups are verified on seeded random samples.
const CONGRUENCE_EXHAUSTIVE_MAX_ORDER: usize = 6;

/// Sample count for the sampled congruence suite.
const CONGRUENCE_SAMPLES: usize = 100_000;

#[derive(Parser)]
#[command(
    name = "hurwitz",
    version,
    about = "Exact classification of Hurwitz generating systems of finite groups"
)]
struct Cli {
    /// Group spec JSON: {"name", "table"} or {"name", "degree", "generators"}.
    #[arg(long, global = true, value_name = "PATH")]
    spec: Option<PathBuf>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Worker threads (0 or omitted: all cores). Never affects results.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    /// Budget: maximum raw tuples visited per enumeration (must be positive).
    #[arg(long, global = true, value_name = "N")]
    max_states: Option<u64>,

    /// Seed for sampled property checks.
    #[arg(long, global = true, value_name = "N", default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Enabled move families: "all" or a comma list of
    /// braid,handle,swap,mixed,trivial,conj.
    #[arg(long, global = true, value_name = "LIST", default_value = "all")]
    moves: String,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print order, conjugacy classes, |Aut(G)|, and the abelianization.
    Describe,
    /// Print H₂(G,ℤ) and the Γ-quotients K_Γ and H_{2,Γ}(G).
    Homology {
        /// Nontrivial conjugacy-class ids forming Γ (default: Γ = ∅).
        #[arg(long, value_name = "c1,c2,...")]
        gamma: Option<String>,
    },
    /// Classify HS move-orbits for fixed d over a genus range.
    Classify {
        /// Number of branch points.
        #[arg(long)]
        d: usize,
        /// Genus or inclusive genus range, e.g. "3" or "1..4".
        #[arg(long, value_name = "INT[..INT]")]
        genus: String,
        /// ν-type filter: comma list of CLASS:COUNT entries over nontrivial
        /// class ids (see `describe`).
        #[arg(long, value_name = "CLASS:COUNT,...")]
        nu: Option<String>,
    },
    /// Run a verification suite and report its verdict.
    Verify {
        #[command(subcommand)]
        check: VerifyCheck,
    },
}

#[derive(Subcommand)]
enum VerifyCheck {
    /// Exhaustive ν/ε move invariance over all shapes d ≤ D, genus ≤ G.
    Epsilon(VerifyArgs),
    /// Fold congruence families; exhaustive for small groups, sampled above.
    Congruences(VerifyArgs),
    /// Stabilization surjectivity, ε̂-injectivity and the orbit bijection up
    /// to the top genus.
    Stabilization(VerifyArgs),
    /// Orbit ↔ admissible-ε̂ bijection at the top genus only.
    Bijection(VerifyArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Number of branch points (for `epsilon`: the largest d checked).
    #[arg(long, default_value_t = 0)]
    d: usize,
    /// Top genus of the suite (for `epsilon`: the largest genus checked).
    #[arg(long, default_value_t = 2)]
    max_genus: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "text",
        }
    }
}

#[derive(Debug)]
enum CliError {
    /// Malformed configuration or spec; exit code 1.
    Invalid(String),
    /// Engine error; exit code 2 when it is a budget abort, 1 otherwise.
    Engine(hurwitz_core::Error),
}

impl From<hurwitz_core::Error> for CliError {
    fn from(e: hurwitz_core::Error) -> Self {
        CliError::Engine(e)
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(report) => {
            // A closed stdout (e.g. piped into `head`) is not an error;
            // anything else is.
            let mut out = io::stdout().lock();
            match writeln!(out, "{report}").and_then(|()| out.flush()) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: cannot write report: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Err(CliError::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Engine(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_budget() { 2 } else { 1 })
        }
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| invalid(format!("cannot configure {n} threads: {e}")))?;
    }
    if cli.max_states == Some(0) {
        return Err(invalid("--max-states must be positive"));
    }
    let moves = parse_moves(&cli.moves)?;

    let spec_path = cli
        .spec
        .as_ref()
        .ok_or_else(|| invalid("--spec PATH is required"))?;
    let raw = std::fs::read_to_string(spec_path)
        .map_err(|e| invalid(format!("cannot read {}: {e}", spec_path.display())))?;
    let spec: GroupSpec = serde_json::from_str(&raw)
        .map_err(|e| invalid(format!("malformed group spec {}: {e}", spec_path.display())))?;
    let group = build_group(&spec).map_err(hurwitz_core::Error::from)?;
    let ctx = GroupContext::new(group);

    let options = OrbitOptions {
        moves: moves.clone(),
        max_states: cli
            .max_states
            .map(u128::from)
            .unwrap_or(hurwitz_core::orbits::DEFAULT_MAX_STATES),
        ..OrbitOptions::default()
    };

    // Shared provenance: version, config echo, move tags. Thread count is
    // deliberately excluded — it never affects results and reports must be
    // byte-identical across thread counts.
    let mut prov: Vec<(&'static str, String)> = vec![
        ("version", env!("CARGO_PKG_VERSION").to_string()),
        ("command", command_name(&cli.command).to_string()),
        ("spec", spec_path.display().to_string()),
        ("group", ctx.group().name().to_string()),
        ("format", cli.format.name().to_string()),
        ("seed", cli.seed.to_string()),
        ("max_states", options.max_states.to_string()),
        ("moves", moves.families().join(",")),
    ];

    match &cli.command {
        Command::Describe => describe(&ctx, cli.format, prov),
        Command::Homology { gamma } => {
            let gamma = parse_gamma(gamma.as_deref(), &ctx)?;
            prov.push(("gamma", join(gamma.iter())));
            homology(&ctx, &gamma, cli.format, prov)
        }
        Command::Classify { d, genus, nu } => {
            let range = parse_genus_range(genus)?;
            let filter = nu
                .as_deref()
                .map(|s| parse_nu(s, ctx.classes()))
                .transpose()?;
            prov.push(("d", d.to_string()));
            prov.push(("genus", format!("{}..{}", range.0, range.1)));
            prov.push((
                "nu",
                filter
                    .as_ref()
                    .map_or_else(|| "-".to_string(), |f| join(f.counts().iter())),
            ));
            let report = classification_report(&ctx, *d, range, filter.as_ref(), &options)?;
            classify(&report, cli.format, prov)
        }
        Command::Verify { check } => {
            let args = match check {
                VerifyCheck::Epsilon(a)
                | VerifyCheck::Congruences(a)
                | VerifyCheck::Stabilization(a)
                | VerifyCheck::Bijection(a) => a,
            };
            prov.push(("d", args.d.to_string()));
            prov.push(("max_genus", args.max_genus.to_string()));
            match check {
                VerifyCheck::Epsilon(a) => verify_epsilon(&ctx, a, &options, cli.format, prov),
                VerifyCheck::Congruences(_) => {
                    verify_congruences(&ctx, cli.seed, cli.format, prov)
                }
                VerifyCheck::Stabilization(a) => {
                    verify_stabilization(&ctx, a, &options, cli.format, prov)
                }
                VerifyCheck::Bijection(a) => verify_bijection(&ctx, a, &options, cli.format, prov),
            }
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Describe => "describe",
        Command::Homology { .. } => "homology",
        Command::Classify { .. } => "classify",
        Command::Verify { check } => match check {
            VerifyCheck::Epsilon(_) => "verify epsilon",
            VerifyCheck::Congruences(_) => "verify congruences",
            VerifyCheck::Stabilization(_) => "verify stabilization",
            VerifyCheck::Bijection(_) => "verify bijection",
        },
    }
}

// ---------------------------------------------------------------------------
// Argument parsing helpers.

fn parse_moves(list: &str) -> Result<MoveSet, CliError> {
    if list.trim() == "all" {
        return Ok(MoveSet::all());
    }
    MoveSet::parse(list).map_err(|e| invalid(e.to_string()))
}

fn parse_genus_range(s: &str) -> Result<(usize, usize), CliError> {
    let parse_one = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| invalid(format!("invalid genus value {t:?} in {s:?}")))
    };
    if let Some((lo, hi)) = s.split_once("..") {
        let (lo, hi) = (parse_one(lo)?, parse_one(hi)?);
        if lo > hi {
            return Err(invalid(format!("empty genus range {s:?}")));
        }
        Ok((lo, hi))
    } else {
        let g = parse_one(s)?;
        Ok((g, g))
    }
}

/// Parse `CLASS:COUNT,...` over nontrivial conjugacy-class ids into a ν-type
/// counts vector (classes not mentioned get count 0).
fn parse_nu(s: &str, classes: &ConjugacyClassTable) -> Result<NuType, CliError> {
    let ids = classes.nontrivial_ids();
    let mut counts = vec![0usize; ids.len()];
    for part in s.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (class, count) = part
            .split_once(':')
            .ok_or_else(|| invalid(format!("ν entry {part:?} is not CLASS:COUNT")))?;
        let class: usize = class
            .trim()
            .parse()
            .map_err(|_| invalid(format!("invalid class id in ν entry {part:?}")))?;
        let count: usize = count
            .trim()
            .parse()
            .map_err(|_| invalid(format!("invalid count in ν entry {part:?}")))?;
        let pos = ids.iter().position(|&i| i == class).ok_or_else(|| {
            invalid(format!(
                "class {class} is not a nontrivial conjugacy class (valid ids: {})",
                join(ids.iter())
            ))
        })?;
        counts[pos] += count;
    }
    Ok(NuType::from_counts(counts))
}

fn parse_gamma(s: Option<&str>, ctx: &GroupContext) -> Result<Vec<usize>, CliError> {
    let mut ids = Vec::new();
    if let Some(s) = s {
        for part in s.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            ids.push(
                part.parse::<usize>()
                    .map_err(|_| invalid(format!("invalid class id {part:?} in --gamma")))?,
            );
        }
    }
    ctx.normalize_gamma(&ids)
        .map_err(|e| invalid(format!("invalid --gamma: {e}")))
}

fn factor_u64s(factors: &[Int]) -> Result<Vec<u64>, CliError> {
    factors
        .iter()
        .map(|f| {
            f.to_u64()
                .ok_or_else(|| invalid(format!("invariant factor {f} exceeds u64")))
        })
        .collect()
}

fn join<T: std::fmt::Display>(items: impl Iterator<Item = T>) -> String {
    items
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

// ---------------------------------------------------------------------------
// Report assembly. Each command produces a JSON object (with provenance), a
// text body, and a CSV body; the chosen format decides which is printed, at
// the very end — aborted runs emit nothing.

fn provenance_json(prov: &[(&'static str, String)]) -> Value {
    let mut m = Map::new();
    for (k, v) in prov {
        m.insert((*k).to_string(), Value::String(v.clone()));
    }
    Value::Object(m)
}

fn finish(
    format: Format,
    json: Value,
    prov: &[(&'static str, String)],
    text_body: String,
    csv_body: String,
) -> Result<String, CliError> {
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(&json).expect("report serializes"),
        Format::Text => {
            let mut s = String::new();
            for (k, v) in prov {
                let _ = writeln!(s, "{k}: {v}");
            }
            s.push('\n');
            s.push_str(text_body.trim_end());
            s
        }
        Format::Csv => {
            let mut s = String::new();
            for (k, v) in prov {
                let _ = writeln!(s, "# {k}={v}");
            }
            s.push_str(csv_body.trim_end());
            s
        }
    })
}

/// RFC-4180 table (quoting handled by the csv crate).
fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for row in rows {
        w.write_record(row).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8")
}

// ---------------------------------------------------------------------------
// describe

fn describe(
    ctx: &GroupContext,
    format: Format,
    prov: Vec<(&'static str, String)>,
) -> Result<String, CliError> {
    let group = ctx.group();
    let classes = ctx.classes();
    let aut_order = ctx.automorphisms()?.len();
    let ab = factor_u64s(ctx.abelianization().invariant_factors())?;

    let class_rows: Vec<(usize, usize, String, usize)> = (0..classes.class_count())
        .map(|id| {
            let rep = classes.representative(id);
            (
                id,
                classes.classes()[id].len(),
                group.label(rep),
                group.order_of(rep),
            )
        })
        .collect();

    let json = json!({
        "provenance": provenance_json(&prov),
        "group": group.name(),
        "order": group.order(),
        "abelian": group.is_abelian(),
        "classes": class_rows.iter().map(|(id, size, rep, ord)| json!({
            "id": id,
            "size": size,
            "representative": rep,
            "element_order": ord,
        })).collect::<Vec<_>>(),
        "nontrivial_class_ids": classes.nontrivial_ids(),
        "aut_order": aut_order,
        "abelianization": ab,
    });

    let mut text = String::new();
    let _ = writeln!(
        text,
        "group {} (order {}, {})",
        group.name(),
        group.order(),
        if group.is_abelian() { "abelian" } else { "nonabelian" }
    );
    let _ = writeln!(text, "conjugacy classes:");
    for (id, size, rep, ord) in &class_rows {
        let _ = writeln!(
            text,
            "  id {id}: size {size}, representative {rep}, element order {ord}"
        );
    }
    let _ = writeln!(text, "aut order: {aut_order}");
    let _ = writeln!(text, "abelianization invariant factors: [{}]", join(ab.iter()));

    let csv_rows: Vec<Vec<String>> = class_rows
        .iter()
        .map(|(id, size, rep, ord)| {
            vec![id.to_string(), size.to_string(), rep.clone(), ord.to_string()]
        })
        .collect();
    let mut csv = format!(
        "# order={}\n# abelian={}\n# aut_order={}\n# abelianization={}\n",
        group.order(),
        group.is_abelian(),
        aut_order,
        join(ab.iter())
    );
    csv.push_str(&csv_table(
        &["id", "size", "representative", "element_order"],
        &csv_rows,
    ));

    finish(format, json, &prov, text, csv)
}

// ---------------------------------------------------------------------------
// homology

fn homology(
    ctx: &GroupContext,
    gamma: &[usize],
    format: Format,
    prov: Vec<(&'static str, String)>,
) -> Result<String, CliError> {
    let h2 = factor_u64s(ctx.h2_factors()?)?;
    let kg = ctx.k_gamma(gamma)?;
    let h2g = ctx.h2_gamma(gamma)?;
    let torsion = factor_u64s(kg.torsion_factors())?;
    let h2_gamma = factor_u64s(h2g.invariant_factors())?;

    let json = json!({
        "provenance": provenance_json(&prov),
        "group": ctx.group().name(),
        "H2": h2,
        "gamma": gamma,
        "K_gamma_torsion": torsion,
        "K_gamma_free_rank": kg.free_rank(),
        "H2_gamma": h2_gamma,
    });

    let mut text = String::new();
    let _ = writeln!(text, "group {}", ctx.group().name());
    let _ = writeln!(text, "H2: [{}]", join(h2.iter()));
    let _ = writeln!(text, "gamma: [{}]", join(gamma.iter()));
    let _ = writeln!(
        text,
        "K_gamma: torsion [{}], free rank {}",
        join(torsion.iter()),
        kg.free_rank()
    );
    let _ = writeln!(text, "H2_gamma: [{}]", join(h2_gamma.iter()));

    let rows = vec![
        vec!["H2".to_string(), join(h2.iter())],
        vec!["gamma".to_string(), join(gamma.iter())],
        vec!["K_gamma_torsion".to_string(), join(torsion.iter())],
        vec!["K_gamma_free_rank".to_string(), kg.free_rank().to_string()],
        vec!["H2_gamma".to_string(), join(h2_gamma.iter())],
    ];
    let csv = csv_table(&["quantity", "value"], &rows);

    finish(format, json, &prov, text, csv)
}

// ---------------------------------------------------------------------------
// classify

fn classify_csv(report: &ClassificationReport) -> String {
    let rows: Vec<Vec<String>> = report
        .nu_rows
        .iter()
        .map(|r| {
            vec![
                r.genus.to_string(),
                r.nu.clone(),
                r.orbits.to_string(),
                r.realized_epsilon.to_string(),
                r.predicted_epsilon.to_string(),
                r.bijection.to_string(),
            ]
        })
        .collect();
    csv_table(
        &[
            "genus",
            "nu",
            "orbits",
            "realized_epsilon",
            "predicted_epsilon",
            "bijection",
        ],
        &rows,
    )
}

fn classify_text(report: &ClassificationReport) -> String {
    let mut text = String::new();
    let _ = writeln!(text, "group {}, d {}", report.group, report.d);
    for row in &report.rows {
        let _ = writeln!(
            text,
            "genus {}: orbits {}, admissible eps-classes {}, bijection {}",
            row.genus, row.orbits, row.admissible, row.bijection
        );
        for nu_row in report.nu_rows.iter().filter(|r| r.genus == row.genus) {
            let _ = writeln!(
                text,
                "  nu {}: orbits {}, eps-classes {}/{} realized",
                nu_row.nu, nu_row.orbits, nu_row.realized_epsilon, nu_row.predicted_epsilon
            );
        }
    }
    let _ = match report.stable_from {
        Some(g) => writeln!(text, "stable from genus {g}"),
        None => writeln!(text, "stable range not reached"),
    };
    text
}

fn classify(
    report: &ClassificationReport,
    format: Format,
    prov: Vec<(&'static str, String)>,
) -> Result<String, CliError> {
    let json = json!({
        "provenance": provenance_json(&prov),
        "group": report.group,
        "d": report.d,
        "rows": serde_json::to_value(&report.rows).expect("rows serialize"),
        "stable_from": report.stable_from,
    });
    let text = classify_text(report);
    let csv = classify_csv(report);
    finish(format, json, &prov, text, csv)
}

// ---------------------------------------------------------------------------
// verify

fn key_value_csv(pairs: &[(&str, String)]) -> String {
    let rows: Vec<Vec<String>> = pairs
        .iter()
        .map(|(k, v)| vec![(*k).to_string(), v.clone()])
        .collect();
    csv_table(&["quantity", "value"], &rows)
}

fn verify_epsilon(
    ctx: &GroupContext,
    args: &VerifyArgs,
    options: &OrbitOptions,
    format: Format,
    prov: Vec<(&'static str, String)>,
) -> Result<String, CliError> {
    let stats = verify_epsilon_on_moves(ctx, args.d, args.max_genus, options)?;
    let json = json!({
        "provenance": provenance_json(&prov),
        "group": ctx.group().name(),
        "check": "epsilon",
        "d": args.d,
        "max_genus": args.max_genus,
        "states": stats.states,
        "edges": stats.edges,
        "pass": true,
    });
    let text = format!(
        "check epsilon: every move preserves nu and eps on all shapes d <= {}, genus <= {}\nstates {}, edges {}\npass true\n",
        args.d, args.max_genus, stats.states, stats.edges
    );
    let csv = key_value_csv(&[
        ("check", "epsilon".to_string()),
        ("states", stats.states.to_string()),
        ("edges", stats.edges.to_string()),
        ("pass", "true".to_string()),
    ]);
    finish(format, json, &prov, text, csv)
}

fn verify_congruences(
    ctx: &GroupContext,
    seed: u64,
    format: Format,
    prov: Vec<(&'static str, String)>,
) -> Result<String, CliError> {
    let exhaustive = ctx.group().order() <= CONGRUENCE_EXHAUSTIVE_MAX_ORDER;
    let checked = if exhaustive {
        verify_congruences_exhaustive(ctx)?
    } else {
        verify_congruences_sampled(ctx, CONGRUENCE_SAMPLES, seed)?
    };
    let mode = if exhaustive { "exhaustive" } else { "sampled" };
    let json = json!({
        "provenance": provenance_json(&prov),
        "group": ctx.group().name(),
        "check": "congruences",
        "mode": mode,
        "checked": checked,
        "pass": true,
    });
    let text = format!(
        "check congruences ({mode}): {checked} identities hold exactly\npass true\n"
    );
    let csv = key_value_csv(&[
        ("check", "congruences".to_string()),
        ("mode", mode.to_string()),
        ("checked", checked.to_string()),
        ("pass", "true".to_string()),
    ]);
    finish(format, json, &prov, text, csv)
}

fn verify_stabilization(
    ctx: &GroupContext,
    args: &VerifyArgs,
    options: &OrbitOptions,
    format: Format,
    prov: Vec<(&'static str, String)>,
) -> Result<String, CliError> {
    let verdict = verify_genus_stabilization(ctx, args.d, args.max_genus, None, options)?;
    let pass = verdict.bijection_at_top
        && verdict.injective_at_top
        && verdict.surjectivity.iter().all(|s| s.pass);

    let json = json!({
        "provenance": provenance_json(&prov),
        "group": verdict.group,
        "check": "stabilization",
        "d": verdict.d,
        "max_genus": verdict.max_genus,
        "surjectivity": serde_json::to_value(&verdict.surjectivity).expect("serializes"),
        "injective_at_top": verdict.injective_at_top,
        "bijection_at_top": verdict.bijection_at_top,
        "stable_from": verdict.stable_from,
        "hypotheses": verdict.hypotheses,
        "report": {
            "group": verdict.report.group,
            "d": verdict.report.d,
            "rows": serde_json::to_value(&verdict.report.rows).expect("serializes"),
            "stable_from": verdict.report.stable_from,
        },
        "pass": pass,
    });

    let mut text = String::new();
    let _ = writeln!(
        text,
        "check stabilization: d {}, genus 0..{}",
        verdict.d, verdict.max_genus
    );
    for s in &verdict.surjectivity {
        let _ = writeln!(
            text,
            "surjectivity genus {} -> {}: {}/{} orbits covered, pass {}",
            s.from_genus, s.to_genus, s.covered, s.orbits, s.pass
        );
    }
    let _ = writeln!(text, "injective at top: {}", verdict.injective_at_top);
    let _ = writeln!(text, "bijection at top: {}", verdict.bijection_at_top);
    let _ = match verdict.stable_from {
        Some(g) => writeln!(text, "stable from genus {g}"),
        None => writeln!(text, "stable range not reached"),
    };
    for h in &verdict.hypotheses {
        let _ = writeln!(text, "hypothesis: {h}");
    }
    text.push('\n');
    text.push_str(&classify_text(&verdict.report));
    let _ = writeln!(text, "pass {pass}");

    let mut csv = format!(
        "# check=stabilization\n# injective_at_top={}\n# bijection_at_top={}\n# stable_from={}\n# pass={}\n",
        verdict.injective_at_top,
        verdict.bijection_at_top,
        verdict
            .stable_from
            .map_or_else(|| "-".to_string(), |g| g.to_string()),
        pass
    );
    csv.push_str(&classify_csv(&verdict.report));

    finish(format, json, &prov, text, csv)
}

fn verify_bijection(
    ctx: &GroupContext,
    args: &VerifyArgs,
    options: &OrbitOptions,
    format: Format,
    prov: Vec<(&'static str, String)>,
) -> Result<String, CliError> {
    let report = classification_report(ctx, args.d, (args.max_genus, args.max_genus), None, options)?;
    let row = report
        .rows
        .last()
        .ok_or_else(|| invalid("empty genus range"))?;
    let pass = row.bijection;

    let json = json!({
        "provenance": provenance_json(&prov),
        "group": report.group,
        "check": "bijection",
        "d": report.d,
        "genus": row.genus,
        "orbits": row.orbits,
        "admissible": row.admissible,
        "per_epsilon": row.per_epsilon,
        "bijection": row.bijection,
        "pass": pass,
    });

    let mut text = String::new();
    let _ = writeln!(
        text,
        "check bijection: d {}, genus {}: {} orbits vs {} admissible eps-classes",
        report.d, row.genus, row.orbits, row.admissible
    );
    for (label, count) in &row.per_epsilon {
        let _ = writeln!(text, "  eps {label}: {count} orbits");
    }
    let _ = writeln!(text, "pass {pass}");

    let mut csv = format!("# check=bijection\n# pass={pass}\n");
    csv.push_str(&classify_csv(&report));

    finish(format, json, &prov, text, csv)
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use hurwitz_core::group::FiniteGroup;

    #[test]
    fn genus_range_forms() {
        assert_eq!(parse_genus_range("3").unwrap(), (3, 3));
        assert_eq!(parse_genus_range("1..4").unwrap(), (1, 4));
        assert_eq!(parse_genus_range(" 0 .. 2 ").unwrap(), (0, 2));
        assert!(parse_genus_range("4..1").is_err());
        assert!(parse_genus_range("x").is_err());
        assert!(parse_genus_range("1..=3").is_err());
    }

    #[test]
    fn nu_filter_parsing() {
        let group = FiniteGroup::symmetric(3);
        let classes = group.conjugacy_classes();
        let nu = parse_nu("2:2", &classes).unwrap();
        assert_eq!(nu.counts(), &[0, 2]);
        let nu = parse_nu("1:1,2:1,1:1", &classes).unwrap();
        assert_eq!(nu.counts(), &[2, 1]);
        assert!(parse_nu("0:1", &classes).is_err());
        assert!(parse_nu("7:1", &classes).is_err());
        assert!(parse_nu("2", &classes).is_err());
        assert!(parse_nu("2:x", &classes).is_err());
    }

    #[test]
    fn move_list_parsing() {
        assert_eq!(parse_moves("all").unwrap(), MoveSet::all());
        let only = parse_moves("braid,conj").unwrap();
        assert!(only.contains("braid") && only.contains("conj"));
        assert!(!only.contains("handle"));
        assert!(parse_moves("bogus").is_err());
    }

    #[test]
    fn csv_quotes_fields_with_commas() {
        let table = csv_table(&["a", "b"], &[vec!["x,y".to_string(), "z".to_string()]]);
        assert_eq!(table, "a,b\n\"x,y\",z\n");
    }
}
