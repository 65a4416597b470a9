//! Command-line surface: construct polar spaces and their distinguished
//! sets, evaluate exact eigenvalue tables, certify set properties from
//! interchange files, and run exhaustive searches.
//!
//! Exit codes: 0 when the requested property is verified or the requested
//! object is constructed; 1 when a property is falsified (including a
//! non-integral set parameter); 2 on usage or input errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;

use polarspace::geometry::{parse_space, GeometryError, PolarSpace};
use polarspace::klein::{KleinContext, KleinError, KleinSetKind, LineClass, TacticalMatrix};
use polarspace::scheme::{legal_classes, PairClass};
use polarspace::sets::{
    check_regular_ovoid, construct_embedded_ovoid, construct_lift_cl, construct_trivial_cl,
    hemisystem_regular_ovoid, search_all_m_ovoids, search_m_ovoid, verify_cl, ClMethod, SetError,
    SubspaceSet, TrivialKind,
};
use polarspace::spectra::{eigenvalue_table, SpaceParams};

#[derive(Parser)]
#[command(
    name = "polarspace",
    version,
    about = "Exact arithmetic for finite classical polar spaces",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the primary artifact to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Cap the worker-thread count (default: all available cores).
    /// Results are independent of this setting.
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the totally isotropic a-spaces of a polar space and
    /// cross-check the count against the counting theorem.
    Enumerate(EnumerateArgs),
    /// Exact eigenvalue tables for the relation classes on a-spaces.
    Eigenvalues(EigenvaluesArgs),
    /// Klein-correspondence artifacts over GF(q): the tactical matrix of
    /// line classes against plane classes, or a derived generator set.
    Klein(KleinArgs),
    /// Build a named construction and write it as a set file.
    Construct(ConstructArgs),
    /// Certify a Cameron-Liebler (interchange) set from a set file.
    Verify(VerifyArgs),
    /// Search for (m, a)-ovoids, optionally exhaustively.
    Search(SearchArgs),
    /// Certify an m-ovoid from a set file, with the regularity analysis.
    OvoidCheck(OvoidCheckArgs),
}

#[derive(clap::Args)]
struct EnumerateArgs {
    /// Space name, e.g. Q+:5:3, Q-:5:2, Q:4:3, H:3:4, W:3:2 (projective
    /// dimension : field order).
    #[arg(long)]
    space: String,
    /// Vector-space dimension a of the enumerated subspaces.
    #[arg(long)]
    dim: u16,
    /// What to write: a count summary, or the full element list as a set
    /// file.
    #[arg(long, value_enum, default_value_t = EnumerateEmit::Summary)]
    emit: EnumerateEmit,
}

#[derive(Clone, Copy, ValueEnum)]
enum EnumerateEmit {
    Summary,
    Elements,
}

#[derive(clap::Args)]
struct EigenvaluesArgs {
    #[arg(long)]
    space: String,
    /// Vector-space dimension a of the spaces the relations act on.
    #[arg(long)]
    dim: u16,
    /// Restrict to one relation class "s,k" (comma-separated).
    #[arg(long, value_parser = parse_relation)]
    relation: Option<PairClass>,
    /// Output format for the table.
    #[arg(long, value_enum, default_value_t = TableFormat::Json)]
    emit: TableFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Json,
    Csv,
}

#[derive(clap::Args)]
struct KleinArgs {
    /// Odd prime field order.
    #[arg(long)]
    q: u16,
    /// One of: b-matrix, cl-set:squares, cl-set:nonsquares, cl-set:conics.
    #[arg(long)]
    emit: String,
}

#[derive(clap::Args)]
struct ConstructArgs {
    #[arg(long)]
    space: String,
    /// One of: pencil (all generators through the first point),
    /// embedded-cl (generators of the natural co-rank-1 section),
    /// embedded-ovoid (a-spaces of the natural co-rank-1 section; needs
    /// --dim), lift (lift a verified regular ovoid of the co-rank-2
    /// section; needs --set).
    #[arg(long)]
    emit: String,
    /// Dimension for embedded-ovoid.
    #[arg(long)]
    dim: Option<u16>,
    /// Input set file for lift.
    #[arg(long)]
    set: Option<PathBuf>,
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// Optional cross-check: must equal the space recorded in the set file.
    #[arg(long)]
    space: Option<String>,
    /// Set file to certify.
    #[arg(long)]
    set: PathBuf,
    /// Certification engine.
    #[arg(long, value_enum)]
    method: MethodArg,
    /// Meet-codimension exponent for the counts method (ignored by the
    /// other methods).
    #[arg(long, default_value_t = 1)]
    i: u16,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Counts,
    Image,
    Eigen,
}

#[derive(clap::Args)]
struct SearchArgs {
    #[arg(long)]
    space: String,
    /// Vector-space dimension a of the sought set's elements.
    #[arg(long)]
    dim: u16,
    /// Multiplicity: every generator must meet the set in exactly m
    /// elements.
    #[arg(long)]
    m: u64,
    /// Node budget for the branch-and-propagate search.
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
    /// Enumerate all solutions (up to --cap) instead of stopping at one.
    #[arg(long)]
    all: bool,
    /// Solution cap for --all; exceeding it is an error, so a returned
    /// list is always complete.
    #[arg(long, default_value_t = 1000)]
    cap: usize,
}

#[derive(clap::Args)]
struct OvoidCheckArgs {
    /// Optional cross-check against the set file (required with
    /// --hemisystem: the rank-3 parabolic target space).
    #[arg(long)]
    space: Option<String>,
    #[arg(long)]
    set: PathBuf,
    /// Treat the set file as a hemisystem of the elliptic hyperplane
    /// section and certify the derived line set of the parabolic space.
    #[arg(long)]
    hemisystem: bool,
    /// With --hemisystem: write the derived line set instead of the
    /// report.
    #[arg(long)]
    emit_derived: bool,
}

/// How a run ends, beyond successful verification.
enum Failure {
    /// A mathematical property the command was asked to certify is false.
    Falsified(String),
    /// Bad invocation or bad input data.
    Usage(String),
}

impl From<SetError> for Failure {
    fn from(err: SetError) -> Self {
        match &err {
            SetError::NotIntegerParameter { .. }
            | SetError::NotAnOvoid { .. }
            | SetError::NotAHemisystem { .. }
            | SetError::OvoidNotRegularType1 { .. } => Failure::Falsified(err.to_string()),
            _ => Failure::Usage(err.to_string()),
        }
    }
}

impl From<GeometryError> for Failure {
    fn from(err: GeometryError) -> Self {
        Failure::Usage(err.to_string())
    }
}

impl From<KleinError> for Failure {
    fn from(err: KleinError) -> Self {
        Failure::Usage(err.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Self {
        Failure::Usage(err.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(workers) = cli.workers {
        if rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .is_err()
        {
            eprintln!("error: worker pool already initialized");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Falsified(reason)) => {
            let body = serde_json::json!({ "verified": false, "reason": reason });
            if let Err(io) = emit(&cli.out, &to_pretty(&body)) {
                eprintln!("error: {io}");
                return ExitCode::from(2);
            }
            ExitCode::from(1)
        }
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

/// Ok(true): verified/constructed, exit 0.  Ok(false): the artifact was
/// written but records a falsified property, exit 1.
fn run(cli: &Cli) -> Result<bool, Failure> {
    match &cli.command {
        Command::Enumerate(args) => cmd_enumerate(cli, args),
        Command::Eigenvalues(args) => cmd_eigenvalues(cli, args),
        Command::Klein(args) => cmd_klein(cli, args),
        Command::Construct(args) => cmd_construct(cli, args),
        Command::Verify(args) => cmd_verify(cli, args),
        Command::Search(args) => cmd_search(cli, args),
        Command::OvoidCheck(args) => cmd_ovoid_check(cli, args),
    }
}

/// Cache directory for enumerations and pair tables: the environment
/// override, or a dot-directory under the working directory.
fn cache_dir() -> PathBuf {
    std::env::var_os("POLARSPACE_CACHE")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(".polarspace-cache"))
}

fn open_space(name: &str) -> Result<PolarSpace, Failure> {
    Ok(parse_space(name)?.with_disk_cache(cache_dir()))
}

fn emit(out: &Option<PathBuf>, text: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())
        }
    }
}

fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

/// Render a doubled type exponent as the conventional fraction.
fn render_e(e2: i64) -> String {
    if e2 % 2 == 0 {
        (e2 / 2).to_string()
    } else {
        format!("{e2}/2")
    }
}

fn parse_relation(text: &str) -> Result<PairClass, String> {
    let (s, k) = text
        .split_once(',')
        .ok_or_else(|| "expected \"s,k\" (comma-separated)".to_string())?;
    let s = s.trim().parse::<u16>().map_err(|e| e.to_string())?;
    let k = k.trim().parse::<u16>().map_err(|e| e.to_string())?;
    Ok(PairClass { s, k })
}

#[derive(Serialize)]
struct EnumerateReport {
    space: String,
    dim: u16,
    count: usize,
    theorem: String,
    matches: bool,
}

fn cmd_enumerate(cli: &Cli, args: &EnumerateArgs) -> Result<bool, Failure> {
    let space = open_space(&args.space)?;
    let elements = space.enumerate_isotropic(args.dim)?;
    match args.emit {
        EnumerateEmit::Summary => {
            let theorem = space.count_subspaces(0, args.dim)?;
            let report = EnumerateReport {
                space: space.name(),
                dim: args.dim,
                count: elements.len(),
                theorem: theorem.to_string(),
                matches: BigInt::from(elements.len()) == theorem,
            };
            emit(&cli.out, &to_pretty(&report))?;
            Ok(report.matches)
        }
        EnumerateEmit::Elements => {
            let indices: Vec<usize> = (0..elements.len()).collect();
            let set = SubspaceSet::from_indices(
                &space,
                args.dim,
                &indices,
                Some(format!("all totally isotropic {}-spaces", args.dim)),
            );
            emit(&cli.out, &set.to_json(&space)?)?;
            Ok(true)
        }
    }
}

#[derive(Serialize)]
struct EigenRow {
    d: u16,
    e: String,
    q: u64,
    a: u16,
    s: u16,
    k: u16,
    r: i64,
    i: i64,
    value: String,
    provenance: &'static str,
}

fn cmd_eigenvalues(cli: &Cli, args: &EigenvaluesArgs) -> Result<bool, Failure> {
    let space = open_space(&args.space)?;
    let classes = legal_classes(&space, args.dim, args.dim);
    if let Some(wanted) = args.relation {
        if !classes.contains(&wanted) {
            return Err(Failure::Usage(format!(
                "relation ({}, {}) is not a legal class for {}-spaces of {}",
                wanted.s,
                wanted.k,
                args.dim,
                space.name()
            )));
        }
    }
    let params = SpaceParams::from(&space);
    let mut rows = Vec::new();
    for class in classes {
        if args.relation.is_some_and(|wanted| wanted != class) {
            continue;
        }
        for ((r, i), value) in eigenvalue_table(params, i64::from(args.dim), class) {
            rows.push(EigenRow {
                d: space.rank(),
                e: render_e(space.e2()),
                q: space.q(),
                a: args.dim,
                s: class.s,
                k: class.k,
                r,
                i,
                value: value.to_string(),
                provenance: "general-closed-form",
            });
        }
    }
    match args.emit {
        TableFormat::Json => emit(&cli.out, &to_pretty(&rows))?,
        TableFormat::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            for row in &rows {
                writer.serialize(row).map_err(|e| Failure::Usage(e.to_string()))?;
            }
            let bytes = writer
                .into_inner()
                .map_err(|e| Failure::Usage(e.to_string()))?;
            emit(&cli.out, &String::from_utf8(bytes).expect("csv is utf-8"))?;
        }
    }
    Ok(true)
}

fn line_class_label(class: LineClass) -> &'static str {
    match class {
        LineClass::TangentSquare => "tangent_square",
        LineClass::TangentNonsquare => "tangent_nonsquare",
        LineClass::Secant => "secant",
        LineClass::External => "external",
        LineClass::OnQuadric => "on_quadric",
    }
}

fn tactical_matrix_csv(matrix: &TacticalMatrix) -> Result<String, Failure> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record([
            "line_class",
            "square_latin",
            "square_greek",
            "nonsquare_latin",
            "nonsquare_greek",
            "tangent_latin",
            "tangent_greek",
        ])
        .map_err(|e| Failure::Usage(e.to_string()))?;
    for class in LineClass::ALL {
        let mut record = vec![line_class_label(class).to_string()];
        record.extend(matrix[class.index()].iter().map(|n| n.to_string()));
        writer
            .write_record(&record)
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

fn cmd_klein(cli: &Cli, args: &KleinArgs) -> Result<bool, Failure> {
    let ctx = KleinContext::new(args.q)?.with_disk_cache(cache_dir());
    match args.emit.as_str() {
        "b-matrix" => {
            let matrix = ctx.tactical_matrix()?;
            emit(&cli.out, &tactical_matrix_csv(&matrix)?)?;
        }
        "cl-set:squares" => {
            let set = ctx.build_cl_set(KleinSetKind::Squares)?;
            emit(&cli.out, &set.to_json(&ctx.target)?)?;
        }
        "cl-set:nonsquares" => {
            let set = ctx.build_cl_set(KleinSetKind::Nonsquares)?;
            emit(&cli.out, &set.to_json(&ctx.target)?)?;
        }
        "cl-set:conics" => {
            let set = ctx.build_cl_set(KleinSetKind::Conics)?;
            emit(&cli.out, &set.to_json(&ctx.target)?)?;
        }
        other => {
            return Err(Failure::Usage(format!(
                "unknown --emit kind {other:?}; expected b-matrix or cl-set:{{squares|nonsquares|conics}}"
            )));
        }
    }
    Ok(true)
}

fn cmd_construct(cli: &Cli, args: &ConstructArgs) -> Result<bool, Failure> {
    let space = open_space(&args.space)?;
    let set = match args.emit.as_str() {
        "pencil" => {
            let vertex = space.enumerate_isotropic(1)?[0].row(0).to_vec();
            construct_trivial_cl(&space, TrivialKind::Pencil(vertex))?
        }
        "embedded-cl" => construct_trivial_cl(&space, TrivialKind::Embedded)?,
        "embedded-ovoid" => {
            let dim = args.dim.ok_or_else(|| {
                Failure::Usage("embedded-ovoid needs --dim (element dimension)".into())
            })?;
            construct_embedded_ovoid(&space, dim)?
        }
        "lift" => {
            let path = args
                .set
                .as_ref()
                .ok_or_else(|| Failure::Usage("lift needs --set (the ovoid to lift)".into()))?;
            let (section_space, m_set) = SubspaceSet::load(path, Some(cache_dir()))?;
            let _ = &section_space;
            construct_lift_cl(&space, None, &m_set)?
        }
        other => {
            return Err(Failure::Usage(format!(
                "unknown --emit kind {other:?}; expected pencil, embedded-cl, embedded-ovoid or lift"
            )));
        }
    };
    emit(&cli.out, &set.to_json(&space)?)?;
    Ok(true)
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> Result<bool, Failure> {
    let (space, set) = SubspaceSet::load(&args.set, Some(cache_dir()))?;
    if let Some(expected) = &args.space {
        let expected = parse_space(expected)?;
        if expected.name() != space.name() {
            return Err(Failure::Usage(format!(
                "--space {} does not match the set file's space {}",
                expected.name(),
                space.name()
            )));
        }
    }
    let method = match args.method {
        MethodArg::Counts => ClMethod::Counts { i: args.i },
        MethodArg::Image => ClMethod::Image,
        MethodArg::Eigen => ClMethod::Eigen,
    };
    let report = verify_cl(&space, &set, method)?;
    let verified = report.verified;
    emit(&cli.out, &to_pretty(&report))?;
    Ok(verified)
}

#[derive(Serialize)]
struct SearchReport {
    space: String,
    dim: u16,
    m: u64,
    /// True when the whole search space was exhausted, so the witness
    /// list is the complete catalogue.
    complete: bool,
    found: usize,
    witnesses: Vec<serde_json::Value>,
}

fn cmd_search(cli: &Cli, args: &SearchArgs) -> Result<bool, Failure> {
    let space = open_space(&args.space)?;
    let (complete, sets) = if args.all {
        let sets = search_all_m_ovoids(&space, args.dim, args.m, args.budget, args.cap)?;
        (true, sets)
    } else {
        match search_m_ovoid(&space, args.dim, args.m, args.budget)? {
            Some(set) => (false, vec![set]),
            None => (true, Vec::new()),
        }
    };
    let witnesses = sets
        .iter()
        .map(|set| {
            let text = set.to_json(&space)?;
            Ok(serde_json::from_str(&text).expect("set files are valid JSON"))
        })
        .collect::<Result<Vec<_>, SetError>>()?;
    let report = SearchReport {
        space: space.name(),
        dim: args.dim,
        m: args.m,
        complete,
        found: witnesses.len(),
        witnesses,
    };
    let found_any = report.found > 0;
    emit(&cli.out, &to_pretty(&report))?;
    Ok(found_any)
}

fn cmd_ovoid_check(cli: &Cli, args: &OvoidCheckArgs) -> Result<bool, Failure> {
    if args.hemisystem {
        let target_name = args.space.as_ref().ok_or_else(|| {
            Failure::Usage("--hemisystem needs --space (the rank-3 parabolic target)".into())
        })?;
        let target = open_space(target_name)?;
        let (_, hemi) = SubspaceSet::load(&args.set, Some(cache_dir()))?;
        let report = hemisystem_regular_ovoid(&target, &hemi)?;
        let verified = report.verified;
        if args.emit_derived {
            emit(&cli.out, &report.set.to_json(&target)?)?;
        } else {
            emit(&cli.out, &to_pretty(&report))?;
        }
        return Ok(verified);
    }
    let (space, set) = SubspaceSet::load(&args.set, Some(cache_dir()))?;
    if let Some(expected) = &args.space {
        let expected = parse_space(expected)?;
        if expected.name() != space.name() {
            return Err(Failure::Usage(format!(
                "--space {} does not match the set file's space {}",
                expected.name(),
                space.name()
            )));
        }
    }
    let report = check_regular_ovoid(&space, &set)?;
    let verified = report.is_ovoid;
    emit(&cli.out, &to_pretty(&report))?;
    Ok(verified)
}
