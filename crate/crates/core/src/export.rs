//! File emitters: GeoJSON and DOT for graphs and cores, and the versioned
//! JSON bundle that persists a frozen MAG between CLI invocations.
//!
//! Every emitter sorts its output, so identical inputs give identical bytes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::analysis::LabeledCore;
use crate::ingest::{Airport, AirportRegistry, BuildConfig};
use crate::mag::{Aspect, AspectGraph, AspectSchema, GraphMode, Mag, MagBuilder, MagEdge, MagError, Tags};

pub const BUNDLE_FORMAT: &str = "airmag-bundle";
pub const BUNDLE_VERSION: u32 = 1;

#[derive(Debug, Error, PartialEq)]
pub enum ExportError {
    #[error("airports missing from the registry: {}", .0.join(", "))]
    UnresolvedAirports(Vec<String>),
    #[error("invalid bundle: {0}")]
    Bundle(String),
    #[error("unsupported bundle version {found} (expected {BUNDLE_VERSION})")]
    BundleVersion { found: u64 },
    #[error(transparent)]
    Mag(#[from] MagError),
}

/// A graph over string node ids with multiplicity-weighted directed edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    pub mode: GraphMode,
    pub nodes: BTreeSet<String>,
    pub edges: BTreeMap<(String, String), u64>,
}

impl LabeledGraph {
    /// Node ids join the kept labels with `/`.
    pub fn from_view(view: &AspectGraph) -> Self {
        let id = |v: usize| view.vertex_labels(v).join("/");
        let g = view.graph();
        let nodes = (0..g.vertex_count()).map(id).collect();
        let mut edges = BTreeMap::new();
        for e in g.edges() {
            *edges.entry((id(e.source), id(e.target))).or_insert(0) += e.multiplicity as u64;
        }
        Self {
            mode: g.mode(),
            nodes,
            edges,
        }
    }
}

impl From<&LabeledCore> for LabeledGraph {
    fn from(core: &LabeledCore) -> Self {
        Self {
            mode: core.mode,
            nodes: core.vertices.iter().cloned().collect(),
            edges: core.edges.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DotOptions {
    /// Collapse parallel edges into one statement with `label=<multiplicity>`.
    pub label_multiplicity: bool,
}

/// DOT text: header, one statement per node, one per edge (or per parallel
/// edge in multi-digraph mode), footer.
pub fn to_dot(g: &LabeledGraph, name: &str, opts: DotOptions) -> String {
    let mut out = format!("digraph {} {{\n", quote(name));
    for n in &g.nodes {
        let _ = writeln!(out, "  {};", quote(n));
    }
    for ((s, t), &m) in &g.edges {
        let (s, t) = (quote(s), quote(t));
        if g.mode == GraphMode::MultiDigraph && opts.label_multiplicity {
            let _ = writeln!(out, "  {s} -> {t} [label={m}];");
        } else {
            let repeat = if g.mode == GraphMode::MultiDigraph { m } else { 1 };
            for _ in 0..repeat {
                let _ = writeln!(out, "  {s} -> {t};");
            }
        }
    }
    out.push_str("}\n");
    out
}

fn quote(id: &str) -> String {
    format!("\"{}\"", id.replace('\\', "\\\\").replace('"', "\\\""))
}

/// GeoJSON FeatureCollection of a core over airports: Points sorted by IATA
/// code, then one straight LineString per distinct directed pair sorted by
/// (origin, destination). Coordinates are `[lon, lat]`.
pub fn to_geojson(
    core: &LabeledCore,
    registry: &AirportRegistry,
    coreness: &BTreeMap<String, usize>,
) -> Result<String, ExportError> {
    let missing: Vec<String> = core
        .vertices
        .iter()
        .filter(|c| !registry.contains(c))
        .cloned()
        .collect();
    if !missing.is_empty() {
        return Err(ExportError::UnresolvedAirports(missing));
    }
    let position = |code: &str| {
        let a = registry.get(code).expect("resolved above");
        json!([a.lon, a.lat])
    };
    let degrees = core.degrees();
    let mut features = Vec::with_capacity(core.vertices.len() + core.edges.len());
    for code in &core.vertices {
        features.push(json!({
            "type": "Feature",
            "geometry": { "type": "Point", "coordinates": position(code) },
            "properties": {
                "iata": code,
                "name": registry.get(code).map(|a| a.name.as_str()),
                "coreness": coreness.get(code),
                "degree": degrees.get(code.as_str()),
            },
        }));
    }
    for ((s, t), &m) in &core.edges {
        let mut properties = json!({ "origin": s, "destination": t });
        if core.mode == GraphMode::MultiDigraph {
            properties["multiplicity"] = json!(m);
        }
        features.push(json!({
            "type": "Feature",
            "geometry": { "type": "LineString", "coordinates": [position(s), position(t)] },
            "properties": properties,
        }));
    }
    let doc = json!({
        "type": "FeatureCollection",
        "properties": { "k": core.k, "mode": core.mode.as_str() },
        "features": features,
    });
    Ok(pretty(&doc))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// A persisted MAG with the airport registry subset it was built against,
/// the build configuration and the producing run's manifest.
#[derive(Debug, Clone, PartialEq)]
pub struct Bundle {
    /// Opaque to this crate; written and read back verbatim.
    pub manifest: Value,
    pub config: BuildConfig,
    pub airports: AirportRegistry,
    pub mag: Mag,
}

#[derive(Serialize, Deserialize)]
struct AspectDoc {
    name: String,
    elements: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct EdgeDoc {
    from: u64,
    to: u64,
    multiplicity: u32,
    #[serde(default, skip_serializing_if = "Tags::is_empty")]
    tags: Tags,
}

/// Version 1 layout. Composite vertices are stored by their mixed-radix
/// index under `companion_tuple`; edges keep canonical order.
#[derive(Serialize, Deserialize)]
struct BundleDoc {
    format: String,
    version: u64,
    manifest: Value,
    config: BuildConfig,
    airports: BTreeMap<String, Airport>,
    schema: Vec<AspectDoc>,
    companion_tuple: Vec<usize>,
    vertices: Vec<u64>,
    edges: Vec<EdgeDoc>,
}

impl Bundle {
    pub fn to_json(&self) -> String {
        let tuple = self.mag.companion_tuple();
        let enc = |v| tuple.encode(v).expect("frozen MAG vertices are in range");
        let doc = BundleDoc {
            format: BUNDLE_FORMAT.into(),
            version: BUNDLE_VERSION as u64,
            manifest: self.manifest.clone(),
            config: self.config.clone(),
            airports: self.airports.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            schema: self
                .mag
                .schema()
                .aspects()
                .iter()
                .map(|a| AspectDoc {
                    name: a.name().into(),
                    elements: a.elements().to_vec(),
                })
                .collect(),
            companion_tuple: tuple.sizes().to_vec(),
            vertices: self.mag.registered_vertices().iter().map(enc).collect(),
            edges: self
                .mag
                .edges()
                .iter()
                .map(|e| EdgeDoc {
                    from: enc(&e.from),
                    to: enc(&e.to),
                    multiplicity: e.multiplicity,
                    tags: e.tags.clone(),
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("bundle always serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, ExportError> {
        let head: Value = serde_json::from_str(text).map_err(|e| ExportError::Bundle(e.to_string()))?;
        if head.get("format").and_then(Value::as_str) != Some(BUNDLE_FORMAT) {
            return Err(ExportError::Bundle(format!("missing `format: {BUNDLE_FORMAT}`")));
        }
        let found = head.get("version").and_then(Value::as_u64).unwrap_or(0);
        if found != BUNDLE_VERSION as u64 {
            return Err(ExportError::BundleVersion { found });
        }
        let doc: BundleDoc = serde_json::from_value(head).map_err(|e| ExportError::Bundle(e.to_string()))?;

        let aspects = doc
            .schema
            .into_iter()
            .map(|a| Aspect::new(a.name, a.elements))
            .collect::<Result<Vec<_>, _>>()?;
        let schema = AspectSchema::new(aspects)?;
        let tuple = schema.companion_tuple();
        if tuple.sizes() != doc.companion_tuple {
            return Err(ExportError::Bundle(format!(
                "companion tuple {:?} does not match schema {:?}",
                doc.companion_tuple,
                tuple.sizes()
            )));
        }
        let mut builder = MagBuilder::new(schema);
        for v in doc.vertices {
            builder.add_vertex(tuple.decode(v)?)?;
        }
        for e in doc.edges {
            let edge = MagEdge::new(tuple.decode(e.from)?, tuple.decode(e.to)?)
                .with_multiplicity(e.multiplicity)
                .with_tags(e.tags);
            builder.add_edge(edge)?;
        }
        let mut airports = AirportRegistry::new();
        for (code, a) in doc.airports {
            airports
                .insert(&code, a)
                .map_err(|e| ExportError::Bundle(e.to_string()))?;
        }
        doc.config.validate().map_err(|e| ExportError::Bundle(e.to_string()))?;
        Ok(Bundle {
            manifest: doc.manifest,
            config: doc.config,
            airports,
            mag: builder.freeze(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{core_report, core_report_with, Scope};
    use crate::ingest::{build_mag, parse_airports, parse_schedule};
    use crate::kcore::DegreeMode;
    use airmag_testkit::fixtures;

    fn fixture() -> (Mag, AirportRegistry) {
        let parsed = parse_schedule(fixtures::SCHEDULE_CSV.as_bytes()).unwrap();
        let reg = parse_airports(fixtures::AIRPORTS_CSV.as_bytes()).unwrap();
        let built = build_mag(&parsed.records, &BuildConfig::default(), &reg).unwrap();
        (built.mag, reg)
    }

    fn two_node(mode: GraphMode, m: u64) -> LabeledGraph {
        LabeledGraph {
            mode,
            nodes: ["AAA".to_string(), "BBB".to_string()].into(),
            edges: [(("AAA".to_string(), "BBB".to_string()), m)].into(),
        }
    }

    #[test]
    fn dot_single_edge_and_empty() {
        let dot = to_dot(&two_node(GraphMode::Digraph, 1), "g", DotOptions::default());
        assert_eq!(
            dot,
            "digraph \"g\" {\n  \"AAA\";\n  \"BBB\";\n  \"AAA\" -> \"BBB\";\n}\n"
        );
        let empty = LabeledGraph {
            mode: GraphMode::Digraph,
            nodes: BTreeSet::new(),
            edges: BTreeMap::new(),
        };
        assert_eq!(to_dot(&empty, "g", DotOptions::default()), "digraph \"g\" {\n}\n");
    }

    #[test]
    fn dot_parallel_edges() {
        let g = two_node(GraphMode::MultiDigraph, 3);
        assert_eq!(to_dot(&g, "g", DotOptions::default()).lines().count(), 2 + 2 + 3);
        let labeled = to_dot(
            &g,
            "g",
            DotOptions {
                label_multiplicity: true,
            },
        );
        assert!(labeled.contains("\"AAA\" -> \"BBB\" [label=3];"));
        assert_eq!(labeled.lines().count(), 5);
    }

    #[test]
    fn dot_fixture_statement_count() {
        let (m, _) = fixture();
        // XA period 1, multidigraph: 4 airports, 7 flights.
        let r = core_report_with(
            &m,
            &Scope::Airline("XA".into()),
            1,
            GraphMode::MultiDigraph,
            DegreeMode::TOTAL,
            Some(0),
        )
        .unwrap();
        let dot = to_dot(&LabeledGraph::from(&r.core), "XA", DotOptions::default());
        assert_eq!(dot.lines().count(), 2 + 4 + 7);
    }

    #[test]
    fn geojson_fixture_feature_count() {
        let (m, reg) = fixture();
        let r = core_report(&m, &Scope::Network, 2, GraphMode::MultiDigraph).unwrap();
        let text = to_geojson(&r.core, &reg, &r.coreness).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        let features = v["features"].as_array().unwrap();
        assert_eq!(features.len(), r.core.vertices.len() + r.core.edges.len());
        let first = &features[0];
        assert_eq!(first["geometry"]["type"], "Point");
        let code = first["properties"]["iata"].as_str().unwrap();
        let a = reg.get(code).unwrap();
        assert_eq!(first["geometry"]["coordinates"], json!([a.lon, a.lat]));
        let line = features.iter().find(|f| f["geometry"]["type"] == "LineString").unwrap();
        assert!(line["properties"]["multiplicity"].as_u64().unwrap() >= 1);
    }

    #[test]
    fn geojson_empty_and_unresolved() {
        let empty = LabeledCore {
            k: 0,
            mode: GraphMode::Digraph,
            vertices: Vec::new(),
            edges: BTreeMap::new(),
        };
        let v: Value =
            serde_json::from_str(&to_geojson(&empty, &AirportRegistry::new(), &BTreeMap::new()).unwrap()).unwrap();
        assert_eq!(v["features"].as_array().unwrap().len(), 0);

        let core = LabeledCore {
            k: 1,
            mode: GraphMode::Digraph,
            vertices: vec!["AAA".into(), "BBB".into(), "CCC".into()],
            edges: BTreeMap::new(),
        };
        let mut reg = AirportRegistry::new();
        reg.insert(
            "BBB",
            Airport {
                name: "b".into(),
                lat: 1.0,
                lon: 2.0,
            },
        )
        .unwrap();
        assert_eq!(
            to_geojson(&core, &reg, &BTreeMap::new()).unwrap_err(),
            ExportError::UnresolvedAirports(vec!["AAA".into(), "CCC".into()])
        );
    }

    #[test]
    fn bundle_round_trip() {
        let (m, reg) = fixture();
        let bundle = Bundle {
            manifest: json!({ "tool": "test" }),
            config: BuildConfig::default(),
            airports: reg,
            mag: m,
        };
        let text = bundle.to_json();
        let back = Bundle::from_json(&text).unwrap();
        assert_eq!(back, bundle);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn bundle_rejects_foreign_documents() {
        assert!(matches!(Bundle::from_json("{}"), Err(ExportError::Bundle(_))));
        let future = json!({ "format": BUNDLE_FORMAT, "version": 99 }).to_string();
        assert_eq!(
            Bundle::from_json(&future).unwrap_err(),
            ExportError::BundleVersion { found: 99 }
        );
        assert!(Bundle::from_json("not json").is_err());
    }
}
