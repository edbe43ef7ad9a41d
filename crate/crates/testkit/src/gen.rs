//! Seeded random instance generators.

use rand::Rng;

/// A random multigraph on `1..=max_vertices` vertices with up to
/// `max_edges` edge records, each of multiplicity `1..=max_multiplicity`.
/// Self-loops and parallel records are allowed.
pub fn random_multigraph<R: Rng>(
    rng: &mut R,
    max_vertices: usize,
    max_edges: usize,
    max_multiplicity: u32,
) -> (usize, Vec<(usize, usize, u32)>) {
    let n = rng.gen_range(1..=max_vertices);
    let m = rng.gen_range(0..=max_edges);
    let pairs = (0..m)
        .map(|_| {
            (
                rng.gen_range(0..n),
                rng.gen_range(0..n),
                rng.gen_range(1..=max_multiplicity),
            )
        })
        .collect();
    (n, pairs)
}

/// One schedule row: airline, flight number, origin, destination, departure
/// minute, arrival minute, period.
pub type Row = (String, String, String, String, u32, u32, u32);

/// A synthetic schedule in canonical CSV form over the given airports and
/// airlines. Flights last 40..=300 minutes and may wrap past the week end.
pub fn random_schedule<R: Rng>(
    rng: &mut R,
    airports: &[&str],
    airlines: &[&str],
    periods: &[u32],
    rows: usize,
) -> Vec<Row> {
    (0..rows)
        .map(|i| {
            let airline = airlines[rng.gen_range(0..airlines.len())];
            let o = rng.gen_range(0..airports.len());
            let mut d = rng.gen_range(0..airports.len() - 1);
            if d >= o {
                d += 1;
            }
            let dep = rng.gen_range(0..10080u32);
            let arr = (dep + rng.gen_range(40..=300)) % 10080;
            (
                airline.to_string(),
                format!("{airline}{}", 1000 + i),
                airports[o].to_string(),
                airports[d].to_string(),
                dep,
                arr,
                periods[rng.gen_range(0..periods.len())],
            )
        })
        .collect()
}

pub fn schedule_csv(rows: &[Row]) -> String {
    let mut out = String::from("airline,flight_number,origin,destination,dep_minute,arr_minute,period\n");
    for (a, f, o, d, dep, arr, p) in rows {
        out.push_str(&format!("{a},{f},{o},{d},{dep},{arr},{p}\n"));
    }
    out
}

/// A MAG edge as raw coordinates: source tuple, target tuple, multiplicity.
pub type RawEdge = (Vec<u32>, Vec<u32>, u32);

/// Aspect sizes in `1..=max_aspect_size` for `order` aspects and up to
/// `max_edges` edges between uniformly drawn composite vertices.
pub fn random_mag_parts<R: Rng>(
    rng: &mut R,
    order: usize,
    max_aspect_size: usize,
    max_edges: usize,
    max_multiplicity: u32,
) -> (Vec<usize>, Vec<RawEdge>) {
    let sizes: Vec<usize> = (0..order).map(|_| rng.gen_range(1..=max_aspect_size)).collect();
    let vertex = |rng: &mut R| -> Vec<u32> { sizes.iter().map(|&n| rng.gen_range(0..n as u32)).collect() };
    let m = rng.gen_range(0..=max_edges);
    let edges = (0..m)
        .map(|_| {
            let from = vertex(rng);
            let to = vertex(rng);
            (from, to, rng.gen_range(1..=max_multiplicity))
        })
        .collect();
    (sizes, edges)
}
