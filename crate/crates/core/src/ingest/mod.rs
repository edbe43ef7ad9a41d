//! Schedule ingestion: canonical CSV parsing, the airport registry, and
//! construction of the flight MAG with its synthesized connection layers.

mod build;
mod registry;
mod schedule;

use thiserror::Error;

pub use build::{
    build_mag, layer_name, parse_layer_name, records_from_mag, synthesize_connections, BuildConfig, BuiltMag,
    Connection, LayerKind, AIRPORT_ASPECT, ARRIVAL_FLIGHT_TAG, DEPARTURE_FLIGHT_TAG, FLIGHT_TAG, LAYER_ASPECT,
    PERIOD_ASPECT, TIME_ASPECT,
};
pub use registry::{parse_airports, Airport, AirportRegistry};
pub use schedule::{
    is_airline_code, is_iata, parse_schedule, Diagnostic, ParsedSchedule, ScheduleRecord, SCHEDULE_COLUMNS,
};

use crate::mag::MagError;

pub const MINUTES_PER_WEEK: u32 = 7 * 24 * 60;
pub const MINUTES_PER_DAY: u32 = 24 * 60;

#[derive(Debug, Error, PartialEq)]
pub enum IngestError {
    #[error("input has no header row")]
    MissingHeader,
    #[error("missing required column `{0}`")]
    MissingColumn(String),
    #[error("csv: {0}")]
    Csv(String),
    #[error("airport registry: {0}")]
    Registry(String),
    #[error("invalid build configuration: {0}")]
    Config(String),
    #[error("no valid schedule records")]
    EmptyInput,
    #[error("not a flight MAG: {0}")]
    NotAFlightMag(String),
    #[error(transparent)]
    Mag(#[from] MagError),
}
