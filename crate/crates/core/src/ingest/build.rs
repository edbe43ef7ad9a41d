//! Building the four-aspect flight MAG: airport x layer x minute-of-week x
//! period, with a flight layer and a connection layer per airline.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::registry::AirportRegistry;
use super::schedule::{Diagnostic, ScheduleRecord};
use super::{IngestError, MINUTES_PER_WEEK};
use crate::mag::{Aspect, AspectSchema, CompositeVertex, Mag, MagBuilder, MagEdge, Tags};

pub const AIRPORT_ASPECT: &str = "airport";
pub const LAYER_ASPECT: &str = "layer";
pub const TIME_ASPECT: &str = "time";
pub const PERIOD_ASPECT: &str = "period";

pub const FLIGHT_TAG: &str = "flight";
pub const ARRIVAL_FLIGHT_TAG: &str = "arrival_flight";
pub const DEPARTURE_FLIGHT_TAG: &str = "departure_flight";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LayerKind {
    Flight,
    Connection,
}

impl LayerKind {
    fn suffix(self) -> &'static str {
        match self {
            LayerKind::Flight => "flight",
            LayerKind::Connection => "connection",
        }
    }
}

/// `XA-flight`, `XA-connection`.
pub fn layer_name(airline: &str, kind: LayerKind) -> String {
    format!("{airline}-{}", kind.suffix())
}

/// Inverse of [`layer_name`].
pub fn parse_layer_name(layer: &str) -> Option<(&str, LayerKind)> {
    let (airline, suffix) = layer.rsplit_once('-')?;
    let kind = match suffix {
        "flight" => LayerKind::Flight,
        "connection" => LayerKind::Connection,
        _ => return None,
    };
    Some((airline, kind))
}

/// Connection-layer construction parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildConfig {
    pub min_connect_minutes: u32,
    pub max_connect_minutes: u32,
    /// Allow connections between flights of different airlines.
    pub cross_airline_connections: bool,
    /// Keep only these airlines; `None` keeps all.
    pub airlines_filter: Option<BTreeSet<String>>,
}

impl Default for BuildConfig {
    fn default() -> Self {
        Self {
            min_connect_minutes: 30,
            max_connect_minutes: 360,
            cross_airline_connections: false,
            airlines_filter: None,
        }
    }
}

impl BuildConfig {
    pub fn validate(&self) -> Result<(), IngestError> {
        if self.min_connect_minutes == 0 {
            return Err(IngestError::Config("min_connect_minutes must be positive".into()));
        }
        if self.min_connect_minutes > self.max_connect_minutes {
            return Err(IngestError::Config(format!(
                "min_connect_minutes {} exceeds max_connect_minutes {}",
                self.min_connect_minutes, self.max_connect_minutes
            )));
        }
        if self.max_connect_minutes >= MINUTES_PER_WEEK {
            return Err(IngestError::Config(format!(
                "max_connect_minutes must be below {MINUTES_PER_WEEK}"
            )));
        }
        Ok(())
    }

    /// Applies `key=value` lines over the current values. Blank lines and
    /// lines starting with `#` are ignored.
    pub fn apply_overrides(&mut self, text: &str) -> Result<(), IngestError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: String| IngestError::Config(format!("line {}: {msg}", i + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let number = |v: &str| v.parse::<u32>().map_err(|_| bad(format!("`{v}` is not a number")));
            match key {
                "min_connect_minutes" => self.min_connect_minutes = number(value)?,
                "max_connect_minutes" => self.max_connect_minutes = number(value)?,
                "cross_airline_connections" => {
                    self.cross_airline_connections =
                        value.parse().map_err(|_| bad(format!("`{value}` is not true/false")))?
                }
                "airlines_filter" => {
                    let set: BTreeSet<String> = value
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(str::to_string)
                        .collect();
                    self.airlines_filter = (!set.is_empty()).then_some(set);
                }
                other => return Err(bad(format!("unknown key `{other}`"))),
            }
        }
        self.validate()
    }

    fn keeps(&self, airline: &str) -> bool {
        self.airlines_filter.as_ref().is_none_or(|f| f.contains(airline))
    }
}

/// A possible connection at `airport`: arriving flight to departing flight.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Connection {
    pub airport: String,
    pub period: u32,
    pub arrival_airline: String,
    pub arrival_flight: String,
    pub arr_minute: u32,
    pub departure_airline: String,
    pub departure_flight: String,
    pub dep_minute: u32,
}

impl Connection {
    /// Ground time, modulo one week.
    pub fn gap(&self) -> u32 {
        (self.dep_minute + MINUTES_PER_WEEK - self.arr_minute) % MINUTES_PER_WEEK
    }
}

/// Every arrival/departure pair at the same airport and period (and the
/// same airline unless cross-airline connections are enabled) whose gap,
/// taken modulo one week, lies in `[min_connect, max_connect]`.
///
/// Output is ordered by arrival record, then departure minute, then
/// departure record.
pub fn synthesize_connections(records: &[ScheduleRecord], config: &BuildConfig) -> Vec<Connection> {
    // Departures grouped by (airport, period, airline or "" when pooled),
    // sorted by minute.
    let group_airline = |r: &ScheduleRecord| -> String {
        if config.cross_airline_connections {
            String::new()
        } else {
            r.airline.clone()
        }
    };
    let mut departures: BTreeMap<(String, u32, String), Vec<(u32, usize)>> = BTreeMap::new();
    for (i, r) in records.iter().enumerate() {
        departures
            .entry((r.origin.clone(), r.period, group_airline(r)))
            .or_default()
            .push((r.dep_minute, i));
    }
    for list in departures.values_mut() {
        list.sort_unstable();
    }

    let (lo, hi) = (config.min_connect_minutes, config.max_connect_minutes);
    let mut out = Vec::new();
    for arrival in records {
        let Some(list) = departures.get(&(arrival.destination.clone(), arrival.period, group_airline(arrival))) else {
            continue;
        };
        let start = arrival.arr_minute + lo;
        let end = arrival.arr_minute + hi;
        // The window [start, end] may spill past the week end; split it.
        let mut windows = vec![(start.min(MINUTES_PER_WEEK), end.min(MINUTES_PER_WEEK - 1))];
        if end >= MINUTES_PER_WEEK {
            windows.push((start.saturating_sub(MINUTES_PER_WEEK), end - MINUTES_PER_WEEK));
        }
        for (from, to) in windows {
            if from > to {
                continue;
            }
            let first = list.partition_point(|&(m, _)| m < from);
            for &(m, j) in list[first..].iter().take_while(|&&(m, _)| m <= to) {
                let departure = &records[j];
                out.push(Connection {
                    airport: arrival.destination.clone(),
                    period: arrival.period,
                    arrival_airline: arrival.airline.clone(),
                    arrival_flight: arrival.flight_number.clone(),
                    arr_minute: arrival.arr_minute,
                    departure_airline: departure.airline.clone(),
                    departure_flight: departure.flight_number.clone(),
                    dep_minute: m,
                });
            }
        }
    }
    out
}

/// Result of [`build_mag`].
#[derive(Debug, Clone)]
pub struct BuiltMag {
    pub mag: Mag,
    /// Records dropped during the build (unknown airports).
    pub diagnostics: Vec<Diagnostic>,
    pub flight_edges: usize,
    pub connection_edges: usize,
    /// The records that made it into the MAG, in input order.
    pub records: Vec<ScheduleRecord>,
}

/// Builds the frozen four-aspect MAG from validated records.
///
/// Each record becomes one flight-layer edge
/// `(origin, A-flight, dep, period) -> (destination, A-flight, arr, period)`
/// tagged with its flight number. Each synthesized connection becomes one
/// edge inside the connection layer,
/// `(X, A-connection, arr, period) -> (X, B-connection, dep, period)`.
pub fn build_mag(
    records: &[ScheduleRecord],
    config: &BuildConfig,
    airports: &AirportRegistry,
) -> Result<BuiltMag, IngestError> {
    config.validate()?;
    let mut diagnostics = Vec::new();
    let mut kept = Vec::with_capacity(records.len());
    for (i, r) in records.iter().enumerate() {
        if !config.keeps(&r.airline) {
            continue;
        }
        if let Err(reason) = r.validate() {
            diagnostics.push(Diagnostic {
                line: None,
                message: format!("record {} ({r}) dropped: {reason}", i + 1),
            });
            continue;
        }
        let unknown: Vec<&str> = [r.origin.as_str(), r.destination.as_str()]
            .into_iter()
            .filter(|c| !airports.contains(c))
            .collect();
        if !unknown.is_empty() {
            diagnostics.push(Diagnostic {
                line: None,
                message: format!("record {} ({r}) dropped: unknown airport {}", i + 1, unknown.join(", ")),
            });
            continue;
        }
        kept.push(r.clone());
    }
    if kept.is_empty() {
        return Err(IngestError::EmptyInput);
    }

    let airport_codes: BTreeSet<&str> = kept
        .iter()
        .flat_map(|r| [r.origin.as_str(), r.destination.as_str()])
        .collect();
    let airlines: BTreeSet<&str> = kept.iter().map(|r| r.airline.as_str()).collect();
    let minutes: BTreeSet<u32> = kept.iter().flat_map(|r| [r.dep_minute, r.arr_minute]).collect();
    let periods: BTreeSet<u32> = kept.iter().map(|r| r.period).collect();
    let layers: Vec<String> = airlines
        .iter()
        .flat_map(|a| [layer_name(a, LayerKind::Flight), layer_name(a, LayerKind::Connection)])
        .collect();
    let schema = AspectSchema::new(vec![
        Aspect::new(AIRPORT_ASPECT, airport_codes.iter().copied())?,
        Aspect::new(LAYER_ASPECT, layers)?,
        Aspect::new(TIME_ASPECT, minutes.iter().map(u32::to_string))?,
        Aspect::new(PERIOD_ASPECT, periods.iter().map(u32::to_string))?,
    ])?;

    let airport_pos: BTreeMap<&str, u32> = airport_codes.iter().enumerate().map(|(i, &c)| (c, i as u32)).collect();
    let airline_pos: BTreeMap<&str, u32> = airlines.iter().enumerate().map(|(i, &a)| (a, i as u32)).collect();
    let minute_pos: BTreeMap<u32, u32> = minutes.iter().enumerate().map(|(i, &m)| (m, i as u32)).collect();
    let period_pos: BTreeMap<u32, u32> = periods.iter().enumerate().map(|(i, &p)| (p, i as u32)).collect();
    let vertex = |airport: &str, airline: &str, kind: LayerKind, minute: u32, period: u32| {
        let layer = airline_pos[airline] * 2 + (kind == LayerKind::Connection) as u32;
        CompositeVertex::new(vec![
            airport_pos[airport],
            layer,
            minute_pos[&minute],
            period_pos[&period],
        ])
    };

    let mut builder = MagBuilder::new(schema);
    for r in &kept {
        let from = vertex(&r.origin, &r.airline, LayerKind::Flight, r.dep_minute, r.period);
        let to = vertex(&r.destination, &r.airline, LayerKind::Flight, r.arr_minute, r.period);
        let tags = Tags::from([(FLIGHT_TAG.to_string(), r.flight_number.clone())]);
        builder.add_edge(MagEdge::new(from, to).with_tags(tags))?;
    }
    let connections = synthesize_connections(&kept, config);
    for c in &connections {
        let from = vertex(
            &c.airport,
            &c.arrival_airline,
            LayerKind::Connection,
            c.arr_minute,
            c.period,
        );
        let to = vertex(
            &c.airport,
            &c.departure_airline,
            LayerKind::Connection,
            c.dep_minute,
            c.period,
        );
        let tags = Tags::from([
            (ARRIVAL_FLIGHT_TAG.to_string(), c.arrival_flight.clone()),
            (DEPARTURE_FLIGHT_TAG.to_string(), c.departure_flight.clone()),
        ]);
        builder.add_edge(MagEdge::new(from, to).with_tags(tags))?;
    }
    Ok(BuiltMag {
        mag: builder.freeze(),
        diagnostics,
        flight_edges: kept.len(),
        connection_edges: connections.len(),
        records: kept,
    })
}

/// Recovers schedule records from the flight-layer edges of a MAG built by
/// [`build_mag`], in the MAG's canonical edge order.
pub fn records_from_mag(mag: &Mag) -> Result<Vec<ScheduleRecord>, IngestError> {
    let schema = mag.schema();
    let need = |name: &str| {
        schema
            .aspect_index(name)
            .ok_or_else(|| IngestError::NotAFlightMag(format!("missing aspect `{name}`")))
    };
    let (ia, il, it, ip) = (
        need(AIRPORT_ASPECT)?,
        need(LAYER_ASPECT)?,
        need(TIME_ASPECT)?,
        need(PERIOD_ASPECT)?,
    );
    let label =
        |v: &CompositeVertex, aspect: usize| schema.aspect(aspect).elements()[v.coords()[aspect] as usize].as_str();
    let number = |s: &str| {
        s.parse::<u32>()
            .map_err(|_| IngestError::NotAFlightMag(format!("`{s}` is not numeric")))
    };
    let mut out = Vec::new();
    for e in mag.edges() {
        let Some((airline, LayerKind::Flight)) = parse_layer_name(label(&e.from, il)) else {
            continue;
        };
        let flight_number = e.tags.get(FLIGHT_TAG).cloned().unwrap_or_default();
        for _ in 0..e.multiplicity {
            out.push(ScheduleRecord {
                airline: airline.to_string(),
                flight_number: flight_number.clone(),
                origin: label(&e.from, ia).to_string(),
                destination: label(&e.to, ia).to_string(),
                dep_minute: number(label(&e.from, it))?,
                arr_minute: number(label(&e.to, it))?,
                period: number(label(&e.from, ip))?,
            });
        }
    }
    Ok(out)
}
