//! Hand-authored two-airline, two-period schedule and its hand-computed
//! expectations. Counts below were enumerated by hand row by row.

pub const SCHEDULE_CSV: &str = include_str!("../fixtures/schedule.csv");
pub const AIRPORTS_CSV: &str = include_str!("../fixtures/airports.csv");

pub const FLIGHT_EDGES: usize = 24;
/// XA p1: 7, YB p1: 3, XA p2: 5, YB p2: 5 with the default 30..=360 window.
pub const CONNECTION_EDGES: usize = 20;
/// CGH, SDU, BSB, CNF, GRU, POA.
pub const AIRPORTS: usize = 6;
/// Airline-collapsed directed routes per period.
pub const NETWORK_ROUTES: [(u32, usize); 2] = [(1, 7), (2, 8)];

/// (scope, period, airports, routes, flights); scope `None` is the whole network.
pub const SUMMARIES: [(Option<&str>, u32, usize, usize, usize); 6] = [
    (Some("XA"), 1, 4, 5, 7),
    (Some("XA"), 2, 3, 4, 6),
    (Some("YB"), 1, 4, 3, 5),
    (Some("YB"), 2, 3, 4, 6),
    (None, 1, 6, 7, 12),
    (None, 2, 5, 8, 12),
];

/// `(k, airports, edges)` of a maximum core.
pub type CoreCounts = (usize, usize, u64);

/// (scope, period, digraph (k, airports, routes), multidigraph (k, airports, flights)).
pub const CORES: [(Option<&str>, u32, CoreCounts, CoreCounts); 6] = [
    (Some("XA"), 1, (2, 3, 4), (4, 2, 4)),
    (Some("XA"), 2, (2, 3, 4), (4, 2, 4)),
    (Some("YB"), 1, (2, 2, 2), (4, 2, 4)),
    (Some("YB"), 2, (2, 3, 4), (4, 2, 4)),
    (None, 1, (2, 5, 6), (5, 2, 5)),
    (None, 2, (2, 5, 8), (4, 4, 10)),
];

/// XA100 and YB204 fly CGH->SDU 420->480 in period 1.
pub const CODESHARE: [(u32, usize); 2] = [(1, 2), (2, 0)];
