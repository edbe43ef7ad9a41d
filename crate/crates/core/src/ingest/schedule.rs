use std::fmt;
use std::io::Read;

use serde::Serialize;

use super::{IngestError, MINUTES_PER_DAY, MINUTES_PER_WEEK};

pub const SCHEDULE_COLUMNS: [&str; 7] = [
    "airline",
    "flight_number",
    "origin",
    "destination",
    "dep_minute",
    "arr_minute",
    "period",
];

/// One weekly-periodic flight leg.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ScheduleRecord {
    pub airline: String,
    pub flight_number: String,
    pub origin: String,
    pub destination: String,
    /// Minute of week, `0..10080`.
    pub dep_minute: u32,
    pub arr_minute: u32,
    pub period: u32,
}

impl ScheduleRecord {
    /// Block time in minutes, wrapping past the end of the week.
    pub fn duration(&self) -> u32 {
        (self.arr_minute + MINUTES_PER_WEEK - self.dep_minute) % MINUTES_PER_WEEK
    }

    pub fn validate(&self) -> Result<(), String> {
        if !is_airline_code(&self.airline) {
            return Err(format!("invalid airline code `{}`", self.airline));
        }
        if self.flight_number.is_empty() {
            return Err("empty flight number".into());
        }
        for code in [&self.origin, &self.destination] {
            if !is_iata(code) {
                return Err(format!("invalid airport code `{code}`"));
            }
        }
        if self.origin == self.destination {
            return Err(format!("origin equals destination `{}`", self.origin));
        }
        for (name, m) in [("dep_minute", self.dep_minute), ("arr_minute", self.arr_minute)] {
            if m >= MINUTES_PER_WEEK {
                return Err(format!("{name} {m} outside 0..{MINUTES_PER_WEEK}"));
            }
        }
        if self.period == 0 {
            return Err("period must be positive".into());
        }
        let d = self.duration();
        if d == 0 || d > MINUTES_PER_DAY {
            return Err(format!("flight duration {d} min outside 1..={MINUTES_PER_DAY}"));
        }
        Ok(())
    }
}

impl fmt::Display for ScheduleRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {}->{} {}->{} p{}",
            self.airline,
            self.flight_number,
            self.origin,
            self.destination,
            self.dep_minute,
            self.arr_minute,
            self.period
        )
    }
}

/// Three uppercase ASCII letters.
pub fn is_iata(code: &str) -> bool {
    code.len() == 3 && code.bytes().all(|b| b.is_ascii_uppercase())
}

/// Uppercase letters and digits only; `-` is reserved for layer names.
pub fn is_airline_code(code: &str) -> bool {
    !code.is_empty() && code.bytes().all(|b| b.is_ascii_uppercase() || b.is_ascii_digit())
}

/// A skipped or dropped input with the reason.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    /// 1-based input line, when the problem came from a file row.
    pub line: Option<u64>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ParsedSchedule {
    pub records: Vec<ScheduleRecord>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Parses a canonical schedule CSV. Malformed rows are skipped with a
/// diagnostic; a missing header or required column is a hard error.
pub fn parse_schedule<R: Read>(input: R) -> Result<ParsedSchedule, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers = reader.headers().map_err(|e| IngestError::Csv(e.to_string()))?.clone();
    if headers.is_empty() || headers.iter().all(str::is_empty) {
        return Err(IngestError::MissingHeader);
    }
    let mut columns = [0usize; 7];
    for (slot, name) in columns.iter_mut().zip(SCHEDULE_COLUMNS) {
        *slot = headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| IngestError::MissingColumn(name.to_string()))?;
    }

    let mut parsed = ParsedSchedule::default();
    let mut record = csv::StringRecord::new();
    loop {
        let line = reader.position().line() + 1;
        match reader.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {}
            Err(e) => {
                parsed.diagnostics.push(Diagnostic {
                    line: Some(line),
                    message: e.to_string(),
                });
                continue;
            }
        }
        let line = record.position().map_or(line, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        match row_to_record(&record, &columns) {
            Ok(r) => parsed.records.push(r),
            Err(message) => parsed.diagnostics.push(Diagnostic {
                line: Some(line),
                message,
            }),
        }
    }
    Ok(parsed)
}

fn row_to_record(row: &csv::StringRecord, columns: &[usize; 7]) -> Result<ScheduleRecord, String> {
    let field = |i: usize| -> Result<&str, String> {
        row.get(columns[i])
            .ok_or_else(|| format!("missing field `{}`", SCHEDULE_COLUMNS[i]))
    };
    let number = |i: usize| -> Result<u32, String> {
        let raw = field(i)?;
        raw.parse::<u32>()
            .map_err(|_| format!("`{}` is not a valid {}", raw, SCHEDULE_COLUMNS[i]))
    };
    let record = ScheduleRecord {
        airline: field(0)?.to_string(),
        flight_number: field(1)?.to_string(),
        origin: field(2)?.to_string(),
        destination: field(3)?.to_string(),
        dep_minute: number(4)?,
        arr_minute: number(5)?,
        period: number(6)?,
    };
    record.validate()?;
    Ok(record)
}
