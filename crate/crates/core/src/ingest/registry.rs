use std::collections::BTreeMap;
use std::io::Read;

use serde::{Deserialize, Serialize};

use super::schedule::is_iata;
use super::IngestError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Airport {
    pub name: String,
    pub lat: f64,
    pub lon: f64,
}

/// IATA code to name and coordinates.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AirportRegistry {
    airports: BTreeMap<String, Airport>,
}

impl AirportRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, iata: &str, airport: Airport) -> Result<(), IngestError> {
        if !is_iata(iata) {
            return Err(IngestError::Registry(format!("invalid IATA code `{iata}`")));
        }
        let in_range = |v: f64, limit: f64| v.abs() <= limit;
        if !in_range(airport.lat, 90.0) || !in_range(airport.lon, 180.0) {
            return Err(IngestError::Registry(format!(
                "{iata}: coordinates ({}, {}) out of range",
                airport.lat, airport.lon
            )));
        }
        if self.airports.contains_key(iata) {
            return Err(IngestError::Registry(format!("duplicate airport `{iata}`")));
        }
        self.airports.insert(iata.to_string(), airport);
        Ok(())
    }

    pub fn get(&self, iata: &str) -> Option<&Airport> {
        self.airports.get(iata)
    }

    pub fn contains(&self, iata: &str) -> bool {
        self.airports.contains_key(iata)
    }

    pub fn len(&self) -> usize {
        self.airports.len()
    }

    pub fn is_empty(&self) -> bool {
        self.airports.is_empty()
    }

    /// Airports in code order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &Airport)> {
        self.airports.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// The registry restricted to `codes`; unknown codes are ignored.
    pub fn subset<'a>(&self, codes: impl IntoIterator<Item = &'a str>) -> AirportRegistry {
        let airports = codes
            .into_iter()
            .filter_map(|c| self.airports.get_key_value(c))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        AirportRegistry { airports }
    }
}

#[derive(Debug, Deserialize)]
struct AirportRow {
    iata: String,
    name: String,
    lat: f64,
    lon: f64,
}

/// Parses an `iata,name,lat,lon` CSV. Any bad row fails the whole file.
pub fn parse_airports<R: Read>(input: R) -> Result<AirportRegistry, IngestError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = reader.headers().map_err(|e| IngestError::Csv(e.to_string()))?;
    for col in ["iata", "name", "lat", "lon"] {
        if !headers.iter().any(|h| h == col) {
            return Err(IngestError::MissingColumn(col.to_string()));
        }
    }
    let mut registry = AirportRegistry::new();
    for row in reader.deserialize::<AirportRow>() {
        let row = row.map_err(|e| IngestError::Registry(e.to_string()))?;
        registry.insert(
            &row.iata,
            Airport {
                name: row.name,
                lat: row.lat,
                lon: row.lon,
            },
        )?;
    }
    Ok(registry)
}
