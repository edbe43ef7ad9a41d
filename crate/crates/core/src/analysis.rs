//! Comparative reports over a flight MAG: served airports, routes and flights
//! per airline and period, maximum cores in the route (digraph) and flight
//! (multi-digraph) views, percent differences and codeshare counting.
//!
//! All views are computed the same way: sub-MAG to the airline's flight
//! layer (or every flight layer for the whole network) at one period, then
//! sub-determine onto the airport aspect. Connection layers never enter
//! these reports.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::ingest::{
    layer_name, parse_layer_name, LayerKind, ScheduleRecord, AIRPORT_ASPECT, LAYER_ASPECT, MINUTES_PER_WEEK,
    PERIOD_ASPECT,
};
use crate::kcore::{self, CoreSubgraph, DegreeMode};
use crate::mag::{AspectGraph, GraphMode, Mag, MagError, Selector, SelfLoops, SubDetMask};

/// Label used for the whole-network pseudo-airline.
pub const NETWORK_LABEL: &str = "ALL";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("unknown airline `{0}`")]
    UnknownAirline(String),
    #[error("unknown period `{0}`")]
    UnknownPeriod(u32),
    #[error("percent difference is undefined for a zero baseline")]
    UndefinedDelta,
    #[error("not a flight MAG: {0}")]
    NotAFlightMag(String),
    #[error(transparent)]
    Mag(#[from] MagError),
}

/// One airline's layer, or the whole network.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scope {
    Network,
    Airline(String),
}

impl Scope {
    pub fn label(&self) -> &str {
        match self {
            Scope::Network => NETWORK_LABEL,
            Scope::Airline(a) => a,
        }
    }
}

impl From<Option<&str>> for Scope {
    fn from(airline: Option<&str>) -> Self {
        airline.map_or(Scope::Network, |a| Scope::Airline(a.to_string()))
    }
}

/// Whether routes are directed origin-destination pairs or unordered pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RouteCounting {
    #[default]
    Directed,
    Unordered,
}

/// Airlines with a flight layer, in schema order.
pub fn airlines(m: &Mag) -> Vec<String> {
    let Some(i) = m.schema().aspect_index(LAYER_ASPECT) else {
        return Vec::new();
    };
    m.schema()
        .aspect(i)
        .elements()
        .iter()
        .filter_map(|l| match parse_layer_name(l) {
            Some((a, LayerKind::Flight)) => Some(a.to_string()),
            _ => None,
        })
        .collect()
}

/// Period ids in schema order.
pub fn periods(m: &Mag) -> Vec<u32> {
    let Some(i) = m.schema().aspect_index(PERIOD_ASPECT) else {
        return Vec::new();
    };
    m.schema()
        .aspect(i)
        .elements()
        .iter()
        .filter_map(|p| p.parse().ok())
        .collect()
}

/// The sub-MAG holding only the scope's flight layers at `period`.
pub fn flight_layer(m: &Mag, scope: &Scope, period: u32) -> Result<Mag, AnalysisError> {
    for aspect in [AIRPORT_ASPECT, LAYER_ASPECT, PERIOD_ASPECT] {
        if m.schema().aspect_index(aspect).is_none() {
            return Err(AnalysisError::NotAFlightMag(format!("missing aspect `{aspect}`")));
        }
    }
    let known = airlines(m);
    let layers: Vec<String> = match scope {
        Scope::Network => known.iter().map(|a| layer_name(a, LayerKind::Flight)).collect(),
        Scope::Airline(a) => {
            if !known.contains(a) {
                return Err(AnalysisError::UnknownAirline(a.clone()));
            }
            vec![layer_name(a, LayerKind::Flight)]
        }
    };
    if !periods(m).contains(&period) {
        return Err(AnalysisError::UnknownPeriod(period));
    }
    let selector = Selector::all()
        .restrict(LAYER_ASPECT, layers)
        .restrict(PERIOD_ASPECT, [period.to_string()]);
    Ok(m.sub_mag(&selector)?)
}

/// The scope's flight layer at `period`, sub-determined onto airports.
pub fn airport_view(m: &Mag, scope: &Scope, period: u32, mode: GraphMode) -> Result<AspectGraph, AnalysisError> {
    let layer = flight_layer(m, scope, period)?;
    let mask = SubDetMask::keeping_named(layer.schema(), &[AIRPORT_ASPECT])?;
    Ok(layer.sub_determine(&mask, mode, SelfLoops::Drop)?)
}

/// Served airports, routes and flights of one airline (or the network) in
/// one period.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LayerSummary {
    pub airline: String,
    pub period: u32,
    pub airports: usize,
    pub routes: usize,
    pub flights: usize,
}

pub fn layer_summary(m: &Mag, scope: &Scope, period: u32) -> Result<LayerSummary, AnalysisError> {
    layer_summary_with(m, scope, period, RouteCounting::Directed)
}

pub fn layer_summary_with(
    m: &Mag,
    scope: &Scope,
    period: u32,
    counting: RouteCounting,
) -> Result<LayerSummary, AnalysisError> {
    let layer = flight_layer(m, scope, period)?;
    let mask = SubDetMask::keeping_named(layer.schema(), &[AIRPORT_ASPECT])?;
    let multi = layer.sub_determine(&mask, GraphMode::MultiDigraph, SelfLoops::Drop)?;
    let di = layer.sub_determine(&mask, GraphMode::Digraph, SelfLoops::Drop)?;
    let routes = match counting {
        RouteCounting::Directed => di.graph().edge_count(),
        RouteCounting::Unordered => di
            .graph()
            .edges()
            .iter()
            .map(|e| (e.source.min(e.target), e.source.max(e.target)))
            .collect::<BTreeSet<_>>()
            .len(),
    };
    Ok(LayerSummary {
        airline: scope.label().to_string(),
        period,
        airports: di.graph().incident_vertex_count(),
        routes,
        flights: multi.graph().total_multiplicity() as usize,
    })
}

/// A core over airport codes, comparable across MAGs and periods.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabeledCore {
    pub k: usize,
    pub mode: GraphMode,
    /// Airport codes, sorted.
    pub vertices: Vec<String>,
    /// Directed airport pairs with their edge multiplicity.
    pub edges: BTreeMap<(String, String), u64>,
}

impl LabeledCore {
    pub fn from_core(view: &AspectGraph, core: &CoreSubgraph) -> Self {
        let code = |v: usize| view.vertex_labels(v)[0].to_string();
        let mut vertices: Vec<String> = core.vertices.iter().map(|&v| code(v)).collect();
        vertices.sort();
        let mut edges = BTreeMap::new();
        for &(s, t, m) in &core.edges {
            *edges.entry((code(s), code(t))).or_insert(0) += m as u64;
        }
        Self {
            k: core.k,
            mode: view.graph().mode(),
            vertices,
            edges,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Edges with multiplicity expanded (routes in digraph mode, flights in
    /// multi-digraph mode).
    pub fn edge_count(&self) -> u64 {
        self.edges.values().sum()
    }

    /// Total degree of every member, multiplicity-weighted.
    pub fn degrees(&self) -> BTreeMap<&str, u64> {
        let mut d: BTreeMap<&str, u64> = self.vertices.iter().map(|v| (v.as_str(), 0)).collect();
        for ((s, t), m) in &self.edges {
            *d.entry(s).or_insert(0) += m;
            *d.entry(t).or_insert(0) += m;
        }
        d
    }
}

/// Two cores are equal when they have the same airports linked by the same
/// edges (with the same multiplicities).
pub fn core_equal(a: &LabeledCore, b: &LabeledCore) -> bool {
    a.vertices == b.vertices && a.edges == b.edges
}

/// One row of the maximum-core comparison tables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoreReportRow {
    pub airline: String,
    pub period: u32,
    pub mode: GraphMode,
    pub k: usize,
    pub airports: usize,
    /// Routes in digraph mode, flights in multi-digraph mode.
    pub edges: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreReport {
    pub row: CoreReportRow,
    pub core: LabeledCore,
    /// Coreness of every airport in the layer view, by code.
    pub coreness: BTreeMap<String, usize>,
}

/// Maximum core of the scope's airport view, total degree.
pub fn core_report(m: &Mag, scope: &Scope, period: u32, mode: GraphMode) -> Result<CoreReport, AnalysisError> {
    core_report_with(m, scope, period, mode, DegreeMode::TOTAL, None)
}

/// Core of the scope's airport view at level `k`, or the maximum core when
/// `k` is `None`.
pub fn core_report_with(
    m: &Mag,
    scope: &Scope,
    period: u32,
    mode: GraphMode,
    degree: DegreeMode,
    k: Option<usize>,
) -> Result<CoreReport, AnalysisError> {
    let view = airport_view(m, scope, period, mode)?;
    let map = kcore::coreness(view.graph(), degree);
    let level = k.unwrap_or(map.max_k());
    let core = kcore::k_core_from(view.graph(), &map, level);
    let core = LabeledCore::from_core(&view, &core);
    let coreness = (0..view.graph().vertex_count())
        .map(|v| (view.vertex_labels(v)[0].to_string(), map.get(v)))
        .collect();
    Ok(CoreReport {
        row: CoreReportRow {
            airline: scope.label().to_string(),
            period,
            mode,
            k: level,
            airports: core.vertex_count(),
            edges: core.edge_count(),
        },
        core,
        coreness,
    })
}

/// `round(100 * (after - before) / before)`, halves away from zero, in
/// exact integer arithmetic.
pub fn percent_delta(before: u64, after: u64) -> Result<i64, AnalysisError> {
    rounded_ratio(after as i128 - before as i128, 100, before)
}

/// Percent change in tenths of a percent (`337` means `+33.7%`), rounded
/// half away from zero.
pub fn percent_change_tenths(before: u64, after: u64) -> Result<i64, AnalysisError> {
    rounded_ratio(after as i128 - before as i128, 1000, before)
}

fn rounded_ratio(diff: i128, scale: i128, before: u64) -> Result<i64, AnalysisError> {
    if before == 0 {
        return Err(AnalysisError::UndefinedDelta);
    }
    let num = diff * scale;
    let den = before as i128;
    let q = (2 * num.abs() + den) / (2 * den);
    Ok((num.signum() * q) as i64)
}

/// `+7`, `-25`, `0`.
pub fn format_percent(p: i64) -> String {
    if p > 0 {
        format!("+{p}")
    } else {
        p.to_string()
    }
}

/// `+33.7`, `-0.9`, `0.0`.
pub fn format_tenths(t: i64) -> String {
    let sign = match t.signum() {
        1 => "+",
        -1 => "-",
        _ => "",
    };
    format!("{sign}{}.{}", t.abs() / 10, t.abs() % 10)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CodeshareReport {
    pub period: u32,
    pub count: usize,
    /// Participating records, in input order.
    pub flights: Vec<ScheduleRecord>,
}

/// Counts records of `period` that share their leg with a record of another
/// airline: same origin and destination, and departure and arrival minutes
/// each within `tolerance` minutes (circularly over the week). With
/// `tolerance = 0` this is the exact-time match.
pub fn codeshare_count(records: &[ScheduleRecord], period: u32, tolerance: u32) -> CodeshareReport {
    let close = |a: u32, b: u32| {
        let d = a.abs_diff(b);
        d.min(MINUTES_PER_WEEK - d) <= tolerance
    };
    let mut legs: BTreeMap<(&str, &str), Vec<usize>> = BTreeMap::new();
    for (i, r) in records.iter().enumerate().filter(|(_, r)| r.period == period) {
        legs.entry((&r.origin, &r.destination)).or_default().push(i);
    }
    let mut participating = vec![false; records.len()];
    for members in legs.values() {
        for (x, &i) in members.iter().enumerate() {
            for &j in &members[x + 1..] {
                let (a, b) = (&records[i], &records[j]);
                if a.airline != b.airline && close(a.dep_minute, b.dep_minute) && close(a.arr_minute, b.arr_minute) {
                    participating[i] = true;
                    participating[j] = true;
                }
            }
        }
    }
    let flights: Vec<ScheduleRecord> = records
        .iter()
        .zip(&participating)
        .filter(|(_, &p)| p)
        .map(|(r, _)| r.clone())
        .collect();
    CodeshareReport {
        period,
        count: flights.len(),
        flights,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Airports,
    Routes,
    Flights,
}

impl Metric {
    pub fn of(self, row: &LayerSummary) -> usize {
        match self {
            Metric::Airports => row.airports,
            Metric::Routes => row.routes,
            Metric::Flights => row.flights,
        }
    }
}

/// An exact fraction `part / whole`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Share {
    pub part: u64,
    pub whole: u64,
}

impl Share {
    pub fn percent(&self) -> f64 {
        if self.whole == 0 {
            0.0
        } else {
            100.0 * self.part as f64 / self.whole as f64
        }
    }

    /// `part / whole >= percent / 100`, compared exactly.
    pub fn at_least(&self, percent: u64) -> bool {
        self.part as u128 * 100 >= percent as u128 * self.whole as u128
    }
}

/// Share of `metric` held by `airlines` among all rows.
pub fn share(rows: &[LayerSummary], airlines: &[&str], metric: Metric) -> Share {
    let whole = rows.iter().map(|r| metric.of(r) as u64).sum();
    let part = rows
        .iter()
        .filter(|r| airlines.contains(&r.airline.as_str()))
        .map(|r| metric.of(r) as u64)
        .sum();
    Share { part, whole }
}

/// Internal-consistency checks over every airline and period:
/// flights >= routes, airports <= 2 * routes, digraph k <= multi-digraph k,
/// and whole-network k >= each airline's k in both modes. Returns one line
/// per violation.
pub fn consistency_violations(m: &Mag) -> Result<Vec<String>, AnalysisError> {
    let mut out = Vec::new();
    for period in periods(m) {
        let mut network_k = BTreeMap::new();
        for mode in [GraphMode::Digraph, GraphMode::MultiDigraph] {
            network_k.insert(mode, core_report(m, &Scope::Network, period, mode)?.row.k);
        }
        let scopes = airlines(m).into_iter().map(Scope::Airline).chain([Scope::Network]);
        for scope in scopes {
            let s = layer_summary(m, &scope, period)?;
            let who = format!("{} p{period}", scope.label());
            if s.flights < s.routes {
                out.push(format!("{who}: flights {} < routes {}", s.flights, s.routes));
            }
            if s.airports > 2 * s.routes {
                out.push(format!("{who}: airports {} > 2 * routes {}", s.airports, s.routes));
            }
            let di = core_report(m, &scope, period, GraphMode::Digraph)?.row.k;
            let multi = core_report(m, &scope, period, GraphMode::MultiDigraph)?.row.k;
            if di > multi {
                out.push(format!("{who}: digraph k {di} > multidigraph k {multi}"));
            }
            for (mode, k) in [(GraphMode::Digraph, di), (GraphMode::MultiDigraph, multi)] {
                if k > network_k[&mode] {
                    out.push(format!("{who}: {mode} k {k} exceeds network k {}", network_k[&mode]));
                }
            }
        }
    }
    Ok(out)
}
