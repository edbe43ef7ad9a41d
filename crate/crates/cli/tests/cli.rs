use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use airmag_testkit::fixtures;
use serde_json::Value;
use tempfile::TempDir;

fn airmag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_airmag"))
        .args(args)
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        let ws = Self {
            dir: tempfile::tempdir().unwrap(),
        };
        std::fs::write(ws.path("schedule.csv"), fixtures::SCHEDULE_CSV).unwrap();
        std::fs::write(ws.path("airports.csv"), fixtures::AIRPORTS_CSV).unwrap();
        ws
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn p(&self, name: &str) -> String {
        self.path(name).to_str().unwrap().to_string()
    }

    fn ingest(&self) -> String {
        let out = airmag(&[
            "ingest",
            "--schedule",
            &self.p("schedule.csv"),
            "--airports",
            &self.p("airports.csv"),
            "-o",
            &self.p("b.json"),
        ]);
        stdout(&out);
        self.p("b.json")
    }
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn ingest_writes_bundle_and_manifest() {
    let ws = Workspace::new();
    let bundle = ws.ingest();
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&bundle).unwrap()).unwrap();
    assert_eq!(doc["format"], "airmag-bundle");
    assert_eq!(doc["version"], 1);
    assert_eq!(
        doc["edges"].as_array().unwrap().len(),
        fixtures::FLIGHT_EDGES + fixtures::CONNECTION_EDGES
    );
    assert_eq!(doc["airports"].as_object().unwrap().len(), fixtures::AIRPORTS);
    let sidecar: Value =
        serde_json::from_str(&std::fs::read_to_string(ws.path("b.json.manifest.json")).unwrap()).unwrap();
    assert_eq!(sidecar["command"], "ingest");
    assert_eq!(sidecar["created_unix"], 1700000000);
    assert_eq!(sidecar["inputs"].as_array().unwrap().len(), 2);
    assert_eq!(sidecar["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert_eq!(doc["manifest"], sidecar);
}

#[test]
fn bundles_differ_only_in_timestamp() {
    let ws = Workspace::new();
    let run = |epoch: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_airmag"))
            .args([
                "ingest",
                "--schedule",
                &ws.p("schedule.csv"),
                "--airports",
                &ws.p("airports.csv"),
                "-o",
                &ws.p("x.json"),
            ])
            .env("SOURCE_DATE_EPOCH", epoch)
            .output()
            .unwrap();
        assert!(out.status.success());
        let mut v: Value = serde_json::from_str(&std::fs::read_to_string(ws.path("x.json")).unwrap()).unwrap();
        let t = v["manifest"]["created_unix"].take();
        (v, t)
    };
    let (a, ta) = run("1");
    let (b, tb) = run("2");
    assert_eq!(a, b);
    assert_ne!(ta, tb);
}

#[test]
fn exit_codes() {
    let ws = Workspace::new();
    let missing = airmag(&[
        "ingest",
        "--schedule",
        &ws.p("schedule.csv"),
        "--airports",
        &ws.p("nope.csv"),
        "-o",
        &ws.p("b.json"),
    ]);
    assert_eq!(code(&missing), 4);

    std::fs::write(ws.path("bad.csv"), "airline,origin\nXA,CGH\n").unwrap();
    let parse = airmag(&[
        "ingest",
        "--schedule",
        &ws.p("bad.csv"),
        "--airports",
        &ws.p("airports.csv"),
        "-o",
        &ws.p("b.json"),
    ]);
    assert_eq!(code(&parse), 3);
    assert!(String::from_utf8_lossy(&parse.stderr).contains("missing required column"));

    let flags = airmag(&["summarize"]);
    assert_eq!(code(&flags), 2);
    let bad_mode = airmag(&["kcore", "x.json", "--mode", "graph"]);
    assert_eq!(code(&bad_mode), 2);

    let bundle = ws.ingest();
    let unknown = airmag(&["summarize", &bundle, "--airline", "QQ"]);
    assert_eq!(code(&unknown), 6);
    let period = airmag(&["kcore", &bundle, "--period", "9"]);
    assert_eq!(code(&period), 6);
    let ambiguous = airmag(&["kcore", &bundle]);
    assert_eq!(code(&ambiguous), 2);

    std::fs::write(ws.path("few.csv"), "iata,name,lat,lon\nCGH,Congonhas,-23.6,-46.6\n").unwrap();
    let unresolved = airmag(&[
        "kcore",
        &bundle,
        "--period",
        "1",
        "--geojson",
        &ws.p("c.geojson"),
        "--airports",
        &ws.p("few.csv"),
    ]);
    assert_eq!(code(&unresolved), 5);
    assert!(String::from_utf8_lossy(&unresolved.stderr).contains("SDU"));

    std::fs::write(ws.path("junk.json"), "{\"format\": \"other\"}").unwrap();
    assert_eq!(code(&airmag(&["summarize", &ws.p("junk.json")])), 3);
}

#[test]
fn skipped_rows_warn_or_fail_when_strict() {
    let ws = Workspace::new();
    let mut csv = fixtures::SCHEDULE_CSV.to_string();
    csv.push_str("XA,XA999,CGH,XXX,100,160,1\nXA,XA998,CGH,SDU,abc,160,1\n");
    std::fs::write(ws.path("dirty.csv"), csv).unwrap();
    let args = [
        "ingest",
        "--schedule",
        &ws.p("dirty.csv"),
        "--airports",
        &ws.p("airports.csv"),
        "-o",
        &ws.p("d.json"),
    ];
    let lenient = airmag(&args);
    assert!(stdout(&lenient).contains("skipped: 2"));
    let stderr = String::from_utf8_lossy(&lenient.stderr);
    assert!(stderr.contains("unknown airport XXX"), "{stderr}");
    assert!(stderr.contains("line 27"), "{stderr}");
    let strict = airmag(&[&args[..], &["--strict"]].concat());
    assert_eq!(code(&strict), 3);
}

#[test]
fn config_file_and_flags_layer_over_defaults() {
    let ws = Workspace::new();
    std::fs::write(ws.path("build.conf"), "# tighter window\nmax_connect_minutes = 60\n").unwrap();
    let base = [
        "ingest",
        "--schedule",
        &ws.p("schedule.csv"),
        "--airports",
        &ws.p("airports.csv"),
        "-o",
        &ws.p("c.json"),
    ];
    let narrow = stdout(&airmag(&[&base[..], &["--config", &ws.p("build.conf")]].concat()));
    let narrow_edges: usize = narrow
        .lines()
        .find_map(|l| l.strip_prefix("connection_edges: "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(narrow_edges < fixtures::CONNECTION_EDGES);
    let summary = stdout(&airmag(&["summarize", &ws.p("c.json")]));
    assert!(summary.starts_with("# connections: 30..=60 min"));

    let overridden = stdout(&airmag(
        &[&base[..], &["--config", &ws.p("build.conf"), "--max-connect", "360"]].concat(),
    ));
    assert!(overridden.contains(&format!("connection_edges: {}", fixtures::CONNECTION_EDGES)));

    std::fs::write(ws.path("bad.conf"), "min_connect_minutes = 500\n").unwrap();
    assert_eq!(
        code(&airmag(&[&base[..], &["--config", &ws.p("bad.conf")]].concat())),
        2
    );
    assert_eq!(code(&airmag(&[&base[..], &["--max-connect", "20000"]].concat())), 2);

    let filtered = stdout(&airmag(&[&base[..], &["--airlines", "XA"]].concat()));
    assert!(filtered.contains("airlines: XA\n"));
}

#[test]
fn summarize_shapes() {
    let ws = Workspace::new();
    let bundle = ws.ingest();
    let two = stdout(&airmag(&["summarize", &bundle, "--format", "csv"]));
    assert_eq!(
        two,
        "airline,airports_p1,airports_p2,airports_diff_pct,routes_p1,routes_p2,routes_diff_pct,flights_p1,flights_p2,flights_diff_pct\n\
         XA,4,3,-25,5,4,-20,7,6,-14\n\
         YB,4,3,-25,3,4,+33,5,6,+20\n\
         TOTAL,8,6,-25,8,8,0,12,12,0\n"
    );
    let one = stdout(&airmag(&["summarize", &bundle, "--format", "csv", "--period", "2"]));
    assert!(one.starts_with("airline,airports_p2,routes_p2,flights_p2\n"));
    let single = stdout(&airmag(&["summarize", &bundle, "--format", "csv", "--airline", "YB"]));
    assert_eq!(single.lines().count(), 2);
    let unordered = stdout(&airmag(&[
        "summarize",
        &bundle,
        "--format",
        "csv",
        "--airline",
        "XA",
        "--unordered-routes",
    ]));
    assert!(unordered.lines().nth(1).unwrap().starts_with("XA,4,3,-25,3,2,"));

    stdout(&airmag(&[
        "summarize",
        &bundle,
        "--format",
        "csv",
        "-o",
        &ws.p("s.csv"),
    ]));
    assert_eq!(std::fs::read_to_string(ws.path("s.csv")).unwrap(), two);
    assert!(ws.path("s.csv.manifest.json").exists());
}

fn shuttle_workspace(m: u32) -> (Workspace, String) {
    let ws = Workspace::new();
    let mut csv = String::from("airline,flight_number,origin,destination,dep_minute,arr_minute,period\n");
    for i in 0..m {
        let (o, d) = if i % 2 == 0 { ("CGH", "SDU") } else { ("SDU", "CGH") };
        csv.push_str(&format!("O6,O6{i},{o},{d},{},{},1\n", i * 60, i * 60 + 50));
    }
    std::fs::write(ws.path("shuttle.csv"), csv).unwrap();
    let out = airmag(&[
        "ingest",
        "--schedule",
        &ws.p("shuttle.csv"),
        "--airports",
        &ws.p("airports.csv"),
        "-o",
        &ws.p("s.json"),
    ]);
    stdout(&out);
    let bundle = ws.p("s.json");
    (ws, bundle)
}

#[test]
fn kcore_reports_parallel_edge_pattern() {
    let (_ws, bundle) = shuttle_workspace(160);
    let multi = stdout(&airmag(&[
        "kcore",
        &bundle,
        "--mode",
        "multidigraph",
        "--airline",
        "O6",
    ]));
    assert_eq!(multi, "K=160, airports=2, flights=160\nairports: CGH SDU\n");
    let di = stdout(&airmag(&["kcore", &bundle, "--mode", "digraph", "--airline", "O6"]));
    assert_eq!(di.lines().next().unwrap(), "K=2, airports=2, routes=2");
}

#[test]
fn kcore_levels_and_exports() {
    let ws = Workspace::new();
    let bundle = ws.ingest();
    let full = stdout(&airmag(&[
        "kcore",
        &bundle,
        "--airline",
        "XA",
        "--period",
        "1",
        "--k",
        "0",
    ]));
    assert_eq!(full.lines().next().unwrap(), "K=0, airports=4, flights=7");

    let beyond = airmag(&["kcore", &bundle, "--airline", "XA", "--period", "1", "--k", "50"]);
    assert_eq!(stdout(&beyond), "K=50, airports=0, flights=0\nairports:\n");
    assert!(String::from_utf8_lossy(&beyond.stderr).contains("empty"));

    let geo = ws.p("core.geojson");
    let dot = ws.p("core.dot");
    stdout(&airmag(&[
        "kcore",
        &bundle,
        "--period",
        "2",
        "--geojson",
        &geo,
        "--dot",
        &dot,
    ]));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&geo).unwrap()).unwrap();
    // Network period 2 multidigraph max core: 4 airports, distinct directed pairs below.
    let features = doc["features"].as_array().unwrap();
    let points = features.iter().filter(|f| f["geometry"]["type"] == "Point").count();
    assert_eq!(points, 4);
    let dot_text = std::fs::read_to_string(&dot).unwrap();
    assert_eq!(dot_text.lines().count(), 2 + 4 + 10);
    assert!(ws.path("core.geojson.manifest.json").exists());
    assert!(ws.path("core.dot.manifest.json").exists());

    let labeled = ws.p("labeled.dot");
    stdout(&airmag(&[
        "kcore",
        &bundle,
        "--period",
        "2",
        "--dot",
        &labeled,
        "--dot-labels",
    ]));
    let labeled_text = std::fs::read_to_string(&labeled).unwrap();
    assert_eq!(labeled_text.lines().count(), 2 + 4 + (features.len() - points));
}

#[test]
fn digraph_core_never_exceeds_multidigraph_core() {
    let ws = Workspace::new();
    let bundle = ws.ingest();
    let k = |mode: &str, airline: &str, period: &str| -> usize {
        let out = stdout(&airmag(&[
            "kcore",
            &bundle,
            "--mode",
            mode,
            "--airline",
            airline,
            "--period",
            period,
        ]));
        out.strip_prefix("K=")
            .unwrap()
            .split(',')
            .next()
            .unwrap()
            .parse()
            .unwrap()
    };
    for airline in ["XA", "YB", "ALL"] {
        for period in ["1", "2"] {
            assert!(k("digraph", airline, period) <= k("multidigraph", airline, period));
        }
    }
}

#[test]
fn kcore_table_shape() {
    let ws = Workspace::new();
    let bundle = ws.ingest();
    let table = stdout(&airmag(&[
        "kcore",
        &bundle,
        "--table",
        "--mode",
        "multidigraph",
        "--format",
        "csv",
    ]));
    assert_eq!(
        table,
        "airline,k_p1,airports_p1,flights_p1,k_p2,airports_p2,flights_p2\nXA,4,2,4,4,2,4\nYB,4,2,4,4,2,4\nALL,5,2,5,4,4,10\n"
    );
}

#[test]
fn export_writes_whole_layer() {
    let ws = Workspace::new();
    let bundle = ws.ingest();
    assert_eq!(code(&airmag(&["export", &bundle, "--period", "1"])), 2);
    let dot = ws.p("xa.dot");
    let out = airmag(&[
        "export",
        &bundle,
        "--period",
        "1",
        "--airline",
        "XA",
        "--mode",
        "digraph",
        "--dot",
        &dot,
    ]);
    stdout(&out);
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("digraph \"XA_p1_digraph_k0\" {\n"));
    assert_eq!(text.lines().count(), 2 + 4 + 5);
}

#[test]
fn subdet_dumps_any_projection() {
    let ws = Workspace::new();
    let bundle = ws.ingest();
    let listing = stdout(&airmag(&["subdet", &bundle, "--enumerate"]));
    assert_eq!(listing.lines().count(), 1 + 14);
    let airport_only = listing.lines().find(|l| l.starts_with("airport,")).unwrap();
    // Connection edges stay at one airport and collapse to self-loops.
    assert_eq!(
        airport_only,
        format!(
            "airport,6,{},{},{}",
            fixtures::FLIGHT_EDGES,
            fixtures::FLIGHT_EDGES,
            fixtures::CONNECTION_EDGES
        )
    );

    let edges = stdout(&airmag(&[
        "subdet",
        &bundle,
        "--keep",
        "airport,period",
        "--mode",
        "digraph",
    ]));
    assert_eq!(edges.lines().next().unwrap(), "source,target,multiplicity");
    let routes: usize = fixtures::NETWORK_ROUTES.iter().map(|(_, r)| r).sum();
    assert_eq!(edges.lines().count(), 1 + routes);

    let selected = stdout(&airmag(&[
        "subdet",
        &bundle,
        "--keep",
        "airport",
        "--select",
        "layer=XA-flight",
        "--select",
        "period=1",
        "--format",
        "dot",
    ]));
    assert_eq!(selected.lines().count(), 2 + 4 + 7);

    assert_eq!(code(&airmag(&["subdet", &bundle, "--keep", "gate"])), 6);
    assert_eq!(
        code(&airmag(&["subdet", &bundle, "--keep", "airport,layer,time,period"])),
        2
    );
}

#[test]
fn codeshare_counts_and_lists() {
    let ws = Workspace::new();
    let bundle = ws.ingest();
    let counts = stdout(&airmag(&["codeshare", &bundle, "--format", "csv"]));
    assert_eq!(counts, "period,codeshare_flights\n1,2\n2,0\n");
    let list = stdout(&airmag(&[
        "codeshare",
        &bundle,
        "--period",
        "1",
        "--list",
        "--format",
        "csv",
    ]));
    assert!(list.contains("1,XA,XA100,CGH,SDU,420,480\n"));
    assert!(list.contains("1,YB,YB204,CGH,SDU,420,480\n"));
    let text = stdout(&airmag(&["codeshare", &bundle]));
    assert!(text.ends_with("change: -100.0%\n"));
}

#[test]
fn outputs_are_deterministic() {
    let ws = Workspace::new();
    let bundle = ws.ingest();
    let run = |dir: &Path| {
        let g = dir.join("g.geojson");
        let d = dir.join("g.dot");
        let out = airmag(&[
            "kcore",
            &bundle,
            "--period",
            "1",
            "--geojson",
            g.to_str().unwrap(),
            "--dot",
            d.to_str().unwrap(),
        ]);
        (stdout(&out), std::fs::read(g).unwrap(), std::fs::read(d).unwrap())
    };
    let a = run(&ws.path(""));
    let b = run(&ws.path(""));
    assert_eq!(a, b);
}

#[test]
fn help_lists_defaults() {
    let help = stdout(&airmag(&["ingest", "--help"]));
    assert!(help.contains("[default: 30]") && help.contains("[default: 360]"));
    let help = stdout(&airmag(&["kcore", "--help"]));
    assert!(help.contains("[default: multidigraph]") && help.contains("[default: total]"));
}
