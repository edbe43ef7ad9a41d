//! `airmag`: ingest flight schedules into a MultiAspect Graph bundle, then
//! summarize, core-decompose, sub-determine and export it.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid flags, 3 parse failure,
//! 4 missing input, 5 unresolvable airports, 6 unknown airline, period,
//! aspect or element.

mod manifest;

use std::fmt::Display;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use airmag_core::analysis::{
    self, airlines, codeshare_count, core_report_with, format_tenths, layer_summary_with, percent_change_tenths,
    periods, AnalysisError, RouteCounting, Scope, NETWORK_LABEL,
};
use airmag_core::export::{to_dot, to_geojson, Bundle, DotOptions, ExportError, LabeledGraph};
use airmag_core::ingest::{
    build_mag, parse_airports, parse_schedule, records_from_mag, AirportRegistry, BuildConfig, IngestError,
    AIRPORT_ASPECT,
};
use airmag_core::kcore::{DegreeMode, Direction};
use airmag_core::mag::{enumerate_sub_determinations, GraphMode, MagError, Selector, SelfLoops, SubDetMask};
use airmag_core::report::{core_table, summary_table, Table};
use clap::{Args, Parser, Subcommand, ValueEnum};

use manifest::{sidecar_path, InputFile, RunManifest};

const EXIT_IO: u8 = 1;
const EXIT_INVALID_FLAGS: u8 = 2;
const EXIT_PARSE: u8 = 3;
const EXIT_MISSING_INPUT: u8 = 4;
const EXIT_UNRESOLVED_AIRPORTS: u8 = 5;
const EXIT_NOT_FOUND: u8 = 6;

#[derive(Parser)]
#[command(name = "airmag", version, about = "Multilayer, time-varying flight network analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse schedule and airport CSVs and write a MAG bundle.
    Ingest(IngestArgs),
    /// Airports, routes and flights per airline and period.
    Summarize(SummarizeArgs),
    /// Maximum (or k-th) core of an airport view.
    Kcore(KcoreArgs),
    /// Sub-determine the MAG onto any subset of its aspects.
    Subdet(SubdetArgs),
    /// Count flights sharing a leg and times across airlines.
    Codeshare(CodeshareArgs),
    /// Write an airport view as GeoJSON and/or DOT.
    Export(ExportArgs),
}

#[derive(Args)]
struct IngestArgs {
    /// Schedule CSV; repeat to concatenate several files.
    #[arg(long = "schedule", required = true)]
    schedules: Vec<PathBuf>,
    /// Airport registry CSV (iata,name,lat,lon).
    #[arg(long)]
    airports: PathBuf,
    /// Bundle to write.
    #[arg(long, short)]
    out: PathBuf,
    #[command(flatten)]
    config: ConfigArgs,
    /// Fail when any row or record is skipped.
    #[arg(long)]
    strict: bool,
}

/// Build settings: defaults, then the `--config` file, then these flags.
#[derive(Args)]
struct ConfigArgs {
    /// key=value file overriding build defaults (min_connect_minutes,
    /// max_connect_minutes, cross_airline_connections, airlines_filter).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Shortest connection in minutes [default: 30].
    #[arg(long)]
    min_connect: Option<u32>,
    /// Longest connection in minutes [default: 360].
    #[arg(long)]
    max_connect: Option<u32>,
    /// Allow connections between different airlines [default: false].
    #[arg(long)]
    cross_airline: bool,
    /// Keep only these airlines (comma-separated) [default: all].
    #[arg(long, value_delimiter = ',')]
    airlines: Vec<String>,
}

#[derive(Args)]
struct BundleArg {
    /// Bundle written by `airmag ingest`.
    bundle: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Digraph,
    Multidigraph,
}

impl From<Mode> for GraphMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Digraph => GraphMode::Digraph,
            Mode::Multidigraph => GraphMode::MultiDigraph,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DegreeArg {
    Total,
    In,
    Out,
    /// Distinct neighbours, ignoring direction and multiplicity.
    Undirected,
}

#[derive(Args)]
struct SummarizeArgs {
    #[command(flatten)]
    input: BundleArg,
    /// Periods to compare, in column order [default: all].
    #[arg(long = "period")]
    periods: Vec<u32>,
    /// Single airline, or ALL for the whole network [default: every airline plus TOTAL].
    #[arg(long)]
    airline: Option<String>,
    /// Count a route once per unordered airport pair.
    #[arg(long)]
    unordered_routes: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the table here (with a manifest sidecar) instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CoreArgs {
    #[arg(long, value_enum, default_value = "multidigraph")]
    mode: Mode,
    /// Airline code, or ALL for the whole network [default: ALL].
    #[arg(long)]
    airline: Option<String>,
    /// Period [default: the only period in the bundle].
    #[arg(long)]
    period: Option<u32>,
    /// Core level [default: the maximum for kcore, 0 (the whole view) for export].
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_enum, default_value = "total")]
    degree: DegreeArg,
    /// Count each connected ordered pair once regardless of parallel edges.
    #[arg(long)]
    ignore_multiplicity: bool,
    /// Write the core as GeoJSON.
    #[arg(long)]
    geojson: Option<PathBuf>,
    /// Write the core as DOT.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// DOT: one edge statement per airport pair with label=multiplicity.
    #[arg(long)]
    dot_labels: bool,
    /// Airport registry CSV overriding the coordinates stored in the bundle.
    #[arg(long)]
    airports: Option<PathBuf>,
}

#[derive(Args)]
struct KcoreArgs {
    #[command(flatten)]
    input: BundleArg,
    #[command(flatten)]
    core: CoreArgs,
    /// Print the maximum core of every airline and the network for every
    /// period (or each --period given) instead of a single core.
    #[arg(long, conflicts_with_all = ["airline", "k", "geojson", "dot"])]
    table: bool,
    /// Table rendering.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the table here (with a manifest sidecar) instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    input: BundleArg,
    /// Same selection flags as `kcore`; --k defaults to 0 (the whole view).
    #[command(flatten)]
    core: CoreArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum EdgeFormat {
    Csv,
    Dot,
}

#[derive(Args)]
struct SubdetArgs {
    #[command(flatten)]
    input: BundleArg,
    /// Aspects to keep, comma-separated (e.g. airport,time).
    #[arg(long, value_delimiter = ',', required_unless_present = "enumerate")]
    keep: Vec<String>,
    #[arg(long, value_enum, default_value = "multidigraph")]
    mode: Mode,
    /// Keep edges whose endpoints collapse to the same vertex.
    #[arg(long)]
    keep_self_loops: bool,
    /// Restrict an aspect before projecting: aspect=element[,element...].
    #[arg(long = "select", value_parser = parse_select)]
    select: Vec<(String, Vec<String>)>,
    #[arg(long, value_enum, default_value = "csv")]
    format: EdgeFormat,
    /// List every proper sub-determination with its size instead.
    #[arg(long, conflicts_with = "keep")]
    enumerate: bool,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CodeshareArgs {
    #[command(flatten)]
    input: BundleArg,
    /// Periods to count [default: all].
    #[arg(long = "period")]
    periods: Vec<u32>,
    /// Minutes by which departure and arrival times may differ.
    #[arg(long, default_value_t = 0)]
    tolerance: u32,
    /// List the participating flights instead of counting them.
    #[arg(long)]
    list: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn parse_select(s: &str) -> Result<(String, Vec<String>), String> {
    let (aspect, elements) = s.split_once('=').ok_or("expected aspect=element[,element...]")?;
    let elements: Vec<String> = elements.split(',').map(str::trim).map(str::to_string).collect();
    if aspect.trim().is_empty() || elements.iter().any(String::is_empty) {
        return Err("expected aspect=element[,element...]".into());
    }
    Ok((aspect.trim().to_string(), elements))
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Display) -> Self {
        Self {
            code,
            message: message.to_string(),
        }
    }
}

impl From<IngestError> for Failure {
    fn from(e: IngestError) -> Self {
        match e {
            IngestError::Config(_) => Failure::new(EXIT_INVALID_FLAGS, e),
            _ => Failure::new(EXIT_PARSE, e),
        }
    }
}

impl From<MagError> for Failure {
    fn from(e: MagError) -> Self {
        match e {
            MagError::UnknownAspect(_) | MagError::UnknownElement { .. } => Failure::new(EXIT_NOT_FOUND, e),
            MagError::InvalidMask(_) | MagError::InvalidSelector(_) => Failure::new(EXIT_INVALID_FLAGS, e),
            _ => Failure::new(EXIT_IO, e),
        }
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::UnknownAirline(_) | AnalysisError::UnknownPeriod(_) => Failure::new(EXIT_NOT_FOUND, e),
            AnalysisError::NotAFlightMag(_) => Failure::new(EXIT_PARSE, e),
            AnalysisError::Mag(m) => m.into(),
            AnalysisError::UndefinedDelta => Failure::new(EXIT_IO, e),
        }
    }
}

impl From<ExportError> for Failure {
    fn from(e: ExportError) -> Self {
        match e {
            ExportError::UnresolvedAirports(_) => Failure::new(EXIT_UNRESOLVED_AIRPORTS, e),
            _ => Failure::new(EXIT_PARSE, e),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Ingest(a) => ingest(a),
        Command::Summarize(a) => summarize(a),
        Command::Kcore(a) => kcore(a),
        Command::Subdet(a) => subdet(a),
        Command::Codeshare(a) => codeshare(a),
        Command::Export(a) => export(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("airmag: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_input(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => Failure::new(EXIT_MISSING_INPUT, format!("missing input {}", path.display())),
        _ => Failure::new(EXIT_IO, format!("{}: {e}", path.display())),
    })
}

fn write_file(path: &Path, content: &str) -> Outcome {
    std::fs::write(path, content).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))
}

/// Writes `content` and its manifest sidecar, or prints `content` to stdout.
fn emit(out: Option<&Path>, content: &str, manifest: &RunManifest) -> Outcome {
    match out {
        Some(path) => {
            write_file(path, content)?;
            write_file(&sidecar_path(path), &manifest.to_json())
        }
        None => io::stdout()
            .lock()
            .write_all(content.as_bytes())
            .map_err(|e| Failure::new(EXIT_IO, e)),
    }
}

fn load_bundle(path: &Path, command: &str) -> Result<(Bundle, RunManifest), Failure> {
    let bytes = read_input(path)?;
    let text = std::str::from_utf8(&bytes).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    let bundle = Bundle::from_json(text)?;
    let mut manifest = RunManifest::new(command, bundle.config.clone());
    manifest.inputs.push(InputFile::new(path, &bytes));
    Ok((bundle, manifest))
}

fn build_config(args: &ConfigArgs, manifest_inputs: &mut Vec<InputFile>) -> Result<BuildConfig, Failure> {
    let mut config = BuildConfig::default();
    if let Some(path) = &args.config {
        let bytes = read_input(path)?;
        let text = String::from_utf8_lossy(&bytes);
        config.apply_overrides(&text)?;
        manifest_inputs.push(InputFile::new(path, &bytes));
    }
    if let Some(m) = args.min_connect {
        config.min_connect_minutes = m;
    }
    if let Some(m) = args.max_connect {
        config.max_connect_minutes = m;
    }
    if args.cross_airline {
        config.cross_airline_connections = true;
    }
    if !args.airlines.is_empty() {
        config.airlines_filter = Some(args.airlines.iter().cloned().collect());
    }
    config.validate()?;
    Ok(config)
}

fn ingest(args: IngestArgs) -> Outcome {
    let mut inputs = Vec::new();
    let config = build_config(&args.config, &mut inputs)?;

    let airport_bytes = read_input(&args.airports)?;
    let registry = parse_airports(airport_bytes.as_slice())
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", args.airports.display())))?;
    inputs.push(InputFile::new(&args.airports, &airport_bytes));

    let mut records = Vec::new();
    let mut skipped = 0usize;
    for path in &args.schedules {
        let bytes = read_input(path)?;
        let parsed = parse_schedule(bytes.as_slice())
            .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
        for d in &parsed.diagnostics {
            eprintln!("{}: {d}", path.display());
        }
        skipped += parsed.diagnostics.len();
        records.extend(parsed.records);
        inputs.push(InputFile::new(path, &bytes));
    }

    let built = build_mag(&records, &config, &registry)?;
    for d in &built.diagnostics {
        eprintln!("{d}");
    }
    skipped += built.diagnostics.len();
    if args.strict && skipped > 0 {
        return Err(Failure::new(
            EXIT_PARSE,
            format!("{skipped} rows or records skipped (--strict)"),
        ));
    }

    let schema = built.mag.schema();
    let airport_aspect = schema.aspect(schema.aspect_index(AIRPORT_ASPECT).expect("flight MAG has airports"));
    let airports = registry.subset(airport_aspect.elements().iter().map(String::as_str));

    let mut manifest = RunManifest::new("ingest", config.clone());
    manifest.inputs = inputs;
    manifest.param("strict", args.strict);
    let bundle = Bundle {
        manifest: manifest.to_value(),
        config,
        airports,
        mag: built.mag,
    };
    write_file(&args.out, &bundle.to_json())?;
    write_file(&sidecar_path(&args.out), &manifest.to_json())?;

    let periods: Vec<String> = periods(&bundle.mag).iter().map(u32::to_string).collect();
    println!("records: {}", built.records.len());
    println!("skipped: {skipped}");
    println!("flight_edges: {}", built.flight_edges);
    println!("connection_edges: {}", built.connection_edges);
    println!("airports: {}", bundle.airports.len());
    println!("airlines: {}", airlines(&bundle.mag).join(","));
    println!("periods: {}", periods.join(","));
    Ok(())
}

fn scope_of(airline: Option<&str>) -> Scope {
    match airline {
        None | Some(NETWORK_LABEL) => Scope::Network,
        Some(a) => Scope::Airline(a.to_string()),
    }
}

fn resolve_periods(requested: &[u32], bundle: &Bundle) -> Result<Vec<u32>, Failure> {
    let available = periods(&bundle.mag);
    if requested.is_empty() {
        return Ok(available);
    }
    match requested.iter().find(|p| !available.contains(p)) {
        Some(&p) => Err(AnalysisError::UnknownPeriod(p).into()),
        None => Ok(requested.to_vec()),
    }
}

fn resolve_period(requested: Option<u32>, bundle: &Bundle) -> Result<u32, Failure> {
    if let Some(p) = requested {
        return Ok(p);
    }
    match periods(&bundle.mag).as_slice() {
        [only] => Ok(*only),
        many => Err(Failure::new(
            EXIT_INVALID_FLAGS,
            format!("--period is required (bundle has periods {many:?})"),
        )),
    }
}

fn report_header(config: &BuildConfig) -> String {
    format!(
        "# connections: {}..={} min, cross-airline: {}\n",
        config.min_connect_minutes, config.max_connect_minutes, config.cross_airline_connections
    )
}

fn render(table: &Table, format: Format, config: &BuildConfig) -> String {
    match format {
        Format::Csv => table.to_csv(),
        Format::Text => report_header(config) + &table.to_text(),
    }
}

fn summarize(args: SummarizeArgs) -> Outcome {
    let (bundle, mut manifest) = load_bundle(&args.input.bundle, "summarize")?;
    let periods = resolve_periods(&args.periods, &bundle)?;
    let counting = if args.unordered_routes {
        RouteCounting::Unordered
    } else {
        RouteCounting::Directed
    };
    let scopes: Vec<Scope> = match &args.airline {
        Some(a) => vec![scope_of(Some(a))],
        None => airlines(&bundle.mag).into_iter().map(Scope::Airline).collect(),
    };
    let mut rows = Vec::new();
    for scope in &scopes {
        let summaries = periods
            .iter()
            .map(|&p| layer_summary_with(&bundle.mag, scope, p, counting))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push((scope.label().to_string(), summaries));
    }
    let table = summary_table(&rows, &periods, args.airline.is_none());
    manifest
        .param("periods", format!("{periods:?}"))
        .param("airline", args.airline.as_deref().unwrap_or("*"))
        .param("unordered_routes", args.unordered_routes);
    let mut text = render(&table, args.format, &bundle.config);
    if matches!(args.format, Format::Text) && args.unordered_routes {
        text.insert_str(0, "# routes: unordered airport pairs\n");
    }
    emit(args.out.as_deref(), &text, &manifest)
}

fn degree_mode(core: &CoreArgs) -> DegreeMode {
    let direction = match core.degree {
        DegreeArg::Total => Direction::Total,
        DegreeArg::In => Direction::In,
        DegreeArg::Out => Direction::Out,
        DegreeArg::Undirected => Direction::Undirected,
    };
    DegreeMode::new(direction, !core.ignore_multiplicity)
}

fn registry_for(core: &CoreArgs, bundle: &Bundle, manifest: &mut RunManifest) -> Result<AirportRegistry, Failure> {
    match &core.airports {
        None => Ok(bundle.airports.clone()),
        Some(path) => {
            let bytes = read_input(path)?;
            let reg = parse_airports(bytes.as_slice())
                .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
            manifest.inputs.push(InputFile::new(path, &bytes));
            Ok(reg)
        }
    }
}

fn core_params(manifest: &mut RunManifest, core: &CoreArgs, period: u32, k: Option<usize>) {
    let mode = GraphMode::from(core.mode);
    let degree = degree_mode(core);
    manifest
        .param("mode", mode)
        .param("airline", core.airline.as_deref().unwrap_or(NETWORK_LABEL))
        .param("period", period)
        .param("k", k.map_or("max".to_string(), |k| k.to_string()))
        .param("degree", format!("{:?}", degree.direction).to_lowercase())
        .param("count_multiplicity", degree.count_multiplicity);
}

/// Runs one core query and writes the requested exports. Returns the
/// report and the layer's maximum coreness.
fn run_core(
    bundle: &Bundle,
    core: &CoreArgs,
    k: Option<usize>,
    manifest: &mut RunManifest,
) -> Result<(analysis::CoreReport, usize), Failure> {
    let period = resolve_period(core.period, bundle)?;
    let scope = scope_of(core.airline.as_deref());
    let mode = GraphMode::from(core.mode);
    let report = core_report_with(&bundle.mag, &scope, period, mode, degree_mode(core), k)?;
    let max_k = report.coreness.values().copied().max().unwrap_or(0);
    core_params(manifest, core, period, k);

    if let Some(path) = &core.geojson {
        let registry = registry_for(core, bundle, manifest)?;
        let text = to_geojson(&report.core, &registry, &report.coreness)?;
        emit(Some(path), &text, manifest)?;
    }
    if let Some(path) = &core.dot {
        let name = format!("{}_p{}_{}_k{}", scope.label(), period, mode, report.row.k);
        let opts = DotOptions {
            label_multiplicity: core.dot_labels,
        };
        emit(
            Some(path),
            &to_dot(&LabeledGraph::from(&report.core), &name, opts),
            manifest,
        )?;
    }
    Ok((report, max_k))
}

fn edge_noun(mode: GraphMode) -> &'static str {
    match mode {
        GraphMode::Digraph => "routes",
        GraphMode::MultiDigraph => "flights",
    }
}

fn kcore(args: KcoreArgs) -> Outcome {
    let (bundle, mut manifest) = load_bundle(&args.input.bundle, "kcore")?;
    if args.table {
        return kcore_table(&args, &bundle, manifest);
    }
    let (report, max_k) = run_core(&bundle, &args.core, args.core.k, &mut manifest)?;
    if report.row.k > max_k {
        eprintln!(
            "notice: k={} exceeds the maximum coreness {max_k}; the core is empty",
            report.row.k
        );
    }
    let r = &report.row;
    let mut out = format!(
        "K={}, airports={}, {}={}\n",
        r.k,
        r.airports,
        edge_noun(r.mode),
        r.edges
    );
    out.push_str(format!("airports: {}", report.core.vertices.join(" ")).trim_end());
    out.push('\n');
    emit(None, &out, &manifest)
}

fn kcore_table(args: &KcoreArgs, bundle: &Bundle, mut manifest: RunManifest) -> Outcome {
    let periods = resolve_periods(args.core.period.as_slice(), bundle)?;
    let mode = GraphMode::from(args.core.mode);
    let degree = degree_mode(&args.core);
    let scopes = airlines(&bundle.mag)
        .into_iter()
        .map(Scope::Airline)
        .chain([Scope::Network]);
    let mut rows = Vec::new();
    for scope in scopes {
        let reports = periods
            .iter()
            .map(|&p| core_report_with(&bundle.mag, &scope, p, mode, degree, None).map(|r| r.row))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push((scope.label().to_string(), reports));
    }
    manifest
        .param("table", true)
        .param("mode", mode)
        .param("periods", format!("{periods:?}"))
        .param("degree", format!("{:?}", degree.direction).to_lowercase())
        .param("count_multiplicity", degree.count_multiplicity);
    let table = core_table(&rows, &periods, mode);
    emit(
        args.out.as_deref(),
        &render(&table, args.format, &bundle.config),
        &manifest,
    )
}

fn export(args: ExportArgs) -> Outcome {
    if args.core.geojson.is_none() && args.core.dot.is_none() {
        return Err(Failure::new(
            EXIT_INVALID_FLAGS,
            "nothing to export: pass --geojson and/or --dot",
        ));
    }
    let (bundle, mut manifest) = load_bundle(&args.input.bundle, "export")?;
    let (report, _) = run_core(&bundle, &args.core, Some(args.core.k.unwrap_or(0)), &mut manifest)?;
    let r = &report.row;
    eprintln!(
        "exported k={} airports={} {}={}",
        r.k,
        r.airports,
        edge_noun(r.mode),
        r.edges
    );
    Ok(())
}

fn subdet(args: SubdetArgs) -> Outcome {
    let (bundle, mut manifest) = load_bundle(&args.input.bundle, "subdet")?;
    let mode = GraphMode::from(args.mode);
    let self_loops = if args.keep_self_loops {
        SelfLoops::Keep
    } else {
        SelfLoops::Drop
    };
    let mut selector = Selector::all();
    for (aspect, elements) in &args.select {
        selector = selector.restrict(aspect.as_str(), elements.iter().cloned());
    }
    let mag = if args.select.is_empty() {
        bundle.mag
    } else {
        bundle.mag.sub_mag(&selector)?
    };
    manifest
        .param("mode", mode)
        .param("self_loops", if args.keep_self_loops { "keep" } else { "drop" })
        .param(
            "select",
            args.select
                .iter()
                .map(|(a, e)| format!("{a}={}", e.join(",")))
                .collect::<Vec<_>>()
                .join(";"),
        );

    if args.enumerate {
        let schema = mag.schema();
        let table = Table {
            header: ["keep", "vertices", "edges", "multiplicity", "dropped_self_loops"]
                .map(String::from)
                .into(),
            rows: enumerate_sub_determinations(schema.order())
                .iter()
                .map(|mask| {
                    let view = mag.sub_determine(mask, mode, self_loops)?;
                    let names: Vec<&str> = mask.kept_indices().iter().map(|&i| schema.aspect(i).name()).collect();
                    Ok(vec![
                        names.join("+"),
                        view.graph().vertex_count().to_string(),
                        view.graph().edge_count().to_string(),
                        view.graph().total_multiplicity().to_string(),
                        view.dropped_self_loops().to_string(),
                    ])
                })
                .collect::<Result<_, MagError>>()?,
        };
        manifest.param("enumerate", true);
        return emit(args.out.as_deref(), &table.to_csv(), &manifest);
    }

    let keep: Vec<&str> = args.keep.iter().map(String::as_str).collect();
    let mask = SubDetMask::keeping_named(mag.schema(), &keep)?;
    let view = mag.sub_determine(&mask, mode, self_loops)?;
    manifest.param("keep", keep.join(","));
    eprintln!(
        "vertices={} edges={} multiplicity={} dropped_self_loops={}",
        view.graph().vertex_count(),
        view.graph().edge_count(),
        view.graph().total_multiplicity(),
        view.dropped_self_loops()
    );
    let graph = LabeledGraph::from_view(&view);
    let text = match args.format {
        EdgeFormat::Dot => to_dot(&graph, &keep.join("+"), DotOptions::default()),
        EdgeFormat::Csv => Table {
            header: ["source", "target", "multiplicity"].map(String::from).into(),
            rows: graph
                .edges
                .iter()
                .map(|((s, t), m)| vec![s.clone(), t.clone(), m.to_string()])
                .collect(),
        }
        .to_csv(),
    };
    emit(args.out.as_deref(), &text, &manifest)
}

fn codeshare(args: CodeshareArgs) -> Outcome {
    let (bundle, mut manifest) = load_bundle(&args.input.bundle, "codeshare")?;
    let periods = resolve_periods(&args.periods, &bundle)?;
    let records = records_from_mag(&bundle.mag)?;
    let reports: Vec<_> = periods
        .iter()
        .map(|&p| codeshare_count(&records, p, args.tolerance))
        .collect();
    manifest
        .param("periods", format!("{periods:?}"))
        .param("tolerance", args.tolerance)
        .param("list", args.list);

    let table = if args.list {
        Table {
            header: [
                "period",
                "airline",
                "flight_number",
                "origin",
                "destination",
                "dep_minute",
                "arr_minute",
            ]
            .map(String::from)
            .into(),
            rows: reports
                .iter()
                .flat_map(|r| &r.flights)
                .map(|f| {
                    vec![
                        f.period.to_string(),
                        f.airline.clone(),
                        f.flight_number.clone(),
                        f.origin.clone(),
                        f.destination.clone(),
                        f.dep_minute.to_string(),
                        f.arr_minute.to_string(),
                    ]
                })
                .collect(),
        }
    } else {
        Table {
            header: vec!["period".into(), "codeshare_flights".into()],
            rows: reports
                .iter()
                .map(|r| vec![r.period.to_string(), r.count.to_string()])
                .collect(),
        }
    };
    let mut text = match args.format {
        Format::Csv => table.to_csv(),
        Format::Text => table.to_text(),
    };
    if let (Format::Text, false, [a, b]) = (args.format, args.list, reports.as_slice()) {
        let change = percent_change_tenths(a.count as u64, b.count as u64)
            .map_or_else(|_| "n/a".to_string(), |t| format!("{}%", format_tenths(t)));
        text.push_str(&format!("change: {change}\n"));
    }
    emit(args.out.as_deref(), &text, &manifest)
}
