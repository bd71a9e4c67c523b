//! CSV ingestion for hourly wind records and turbine layouts.
//!
//! Wind data is sensor output: malformed rows are collected as warnings and
//! skipped, fatal only when nothing parses. Layouts are curated inputs and
//! parse strictly.

use crate::wind::{wind_from_met, WindSample};
use chrono::{DateTime, Utc};
use std::io::Read;
use thiserror::Error;

/// Highest latitude the planar projection accepts.
pub const MAX_ABS_LATITUDE_DEG: f64 = 85.05;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("file contains no data rows")]
    EmptyFile,
    #[error("all {rows} data rows failed to parse; first error: {first}")]
    AllRowsInvalid { rows: usize, first: String },
    #[error("duplicate turbine code {0}")]
    DuplicateCode(String),
    #[error("turbine {code}: latitude {lat} outside ±{MAX_ABS_LATITUDE_DEG}")]
    LatitudeOutOfRange { code: String, lat: f64 },
    #[error("missing required column `{0}`")]
    MissingColumn(&'static str),
    #[error("line {line}: {message}")]
    Row { line: usize, message: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// One hourly record as it appears on disk: meteorological degrees, gusts
/// optional.
#[derive(Debug, Clone, PartialEq)]
pub struct WindSampleRecord {
    pub timestamp: DateTime<Utc>,
    pub mean_speed_ms: f64,
    pub mean_dir_deg: f64,
    pub gust_speed_ms: Option<f64>,
    pub gust_dir_deg: Option<f64>,
}

impl WindSampleRecord {
    /// Converts to the planner's internal sample: direction to the polar
    /// convention, degrees to radians. This is the only place directions
    /// cross the met/polar boundary.
    pub fn to_sample(&self) -> WindSample {
        let mean = wind_from_met(self.mean_speed_ms, self.mean_dir_deg.to_radians())
            .expect("record speed validated non-negative at parse");
        WindSample { mean, gust_speed: self.gust_speed_ms }
    }
}

/// A turbine row: unique code and geographic position.
#[derive(Debug, Clone, PartialEq)]
pub struct TurbineRecord {
    pub code: String,
    pub lon_deg: f64,
    pub lat_deg: f64,
}

/// A recoverable per-row problem, reported with its 1-based line number.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseWarning {
    pub line: usize,
    pub message: String,
}

/// Wind records plus whatever rows had to be skipped.
#[derive(Debug)]
pub struct ParsedWind {
    pub records: Vec<WindSampleRecord>,
    pub warnings: Vec<ParseWarning>,
}

impl ParsedWind {
    pub fn to_samples(&self) -> Vec<WindSample> {
        self.records.iter().map(WindSampleRecord::to_sample).collect()
    }
}

fn column_index(headers: &csv::StringRecord, name: &'static str) -> Option<usize> {
    headers.iter().position(|h| h.trim() == name)
}

fn parse_f64(field: &str, name: &str) -> Result<f64, String> {
    field.trim().parse::<f64>().map_err(|_| format!("column {name}: `{field}` is not a number"))
}

/// Reads `timestamp,mean_speed_ms,mean_dir_deg[,gust_speed_ms,gust_dir_deg]`.
pub fn parse_wind_csv<R: Read>(reader: R) -> Result<ParsedWind, ParseError> {
    let mut csv_reader = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let headers = csv_reader.headers()?.clone();
    let ts_col = column_index(&headers, "timestamp").ok_or(ParseError::MissingColumn("timestamp"))?;
    let speed_col =
        column_index(&headers, "mean_speed_ms").ok_or(ParseError::MissingColumn("mean_speed_ms"))?;
    let dir_col =
        column_index(&headers, "mean_dir_deg").ok_or(ParseError::MissingColumn("mean_dir_deg"))?;
    let gust_speed_col = column_index(&headers, "gust_speed_ms");
    let gust_dir_col = column_index(&headers, "gust_dir_deg");

    let mut records = Vec::new();
    let mut warnings = Vec::new();
    let mut rows = 0usize;
    for (idx, row) in csv_reader.records().enumerate() {
        rows += 1;
        let line = idx + 2; // 1-based, after the header
        let fail = |message: String, warnings: &mut Vec<ParseWarning>| {
            warnings.push(ParseWarning { line, message });
        };
        let row = match row {
            Ok(r) => r,
            Err(e) => {
                fail(e.to_string(), &mut warnings);
                continue;
            }
        };
        let parsed = (|| -> Result<WindSampleRecord, String> {
            let ts_raw = row.get(ts_col).ok_or("missing timestamp field")?;
            let timestamp = DateTime::parse_from_rfc3339(ts_raw.trim())
                .map_err(|e| format!("timestamp `{ts_raw}`: {e}"))?
                .with_timezone(&Utc);
            let mean_speed_ms = parse_f64(row.get(speed_col).ok_or("missing speed field")?, "mean_speed_ms")?;
            if mean_speed_ms < 0.0 {
                return Err(format!("mean speed {mean_speed_ms} is negative"));
            }
            let mean_dir_deg = parse_f64(row.get(dir_col).ok_or("missing direction field")?, "mean_dir_deg")?;
            if !(0.0..360.0).contains(&mean_dir_deg) {
                return Err(format!("direction {mean_dir_deg} outside [0, 360)"));
            }
            let optional = |col: Option<usize>, name: &str| -> Result<Option<f64>, String> {
                match col.and_then(|c| row.get(c)) {
                    None => Ok(None),
                    Some(s) if s.trim().is_empty() => Ok(None),
                    Some(s) => parse_f64(s, name).map(Some),
                }
            };
            let gust_speed_ms = optional(gust_speed_col, "gust_speed_ms")?;
            if let Some(g) = gust_speed_ms {
                if g < 0.0 {
                    return Err(format!("gust speed {g} is negative"));
                }
            }
            let gust_dir_deg = optional(gust_dir_col, "gust_dir_deg")?;
            if let Some(d) = gust_dir_deg {
                if !(0.0..360.0).contains(&d) {
                    return Err(format!("gust direction {d} outside [0, 360)"));
                }
            }
            // Gust below mean is left alone: real archives contain such
            // rows, and the ratio statistics handle them fine.
            Ok(WindSampleRecord { timestamp, mean_speed_ms, mean_dir_deg, gust_speed_ms, gust_dir_deg })
        })();
        match parsed {
            Ok(record) => records.push(record),
            Err(message) => fail(message, &mut warnings),
        }
    }

    if rows == 0 {
        return Err(ParseError::EmptyFile);
    }
    if records.is_empty() {
        return Err(ParseError::AllRowsInvalid {
            rows,
            first: warnings.first().map(|w| format!("line {}: {}", w.line, w.message)).unwrap_or_default(),
        });
    }
    Ok(ParsedWind { records, warnings })
}

/// Reads `code,lon_deg,lat_deg`. Strict: any bad row fails the parse.
pub fn parse_layout_csv<R: Read>(reader: R) -> Result<Vec<TurbineRecord>, ParseError> {
    let mut csv_reader = csv::Reader::from_reader(reader);
    let headers = csv_reader.headers()?.clone();
    let code_col = column_index(&headers, "code").ok_or(ParseError::MissingColumn("code"))?;
    let lon_col = column_index(&headers, "lon_deg").ok_or(ParseError::MissingColumn("lon_deg"))?;
    let lat_col = column_index(&headers, "lat_deg").ok_or(ParseError::MissingColumn("lat_deg"))?;

    let mut records: Vec<TurbineRecord> = Vec::new();
    for (idx, row) in csv_reader.records().enumerate() {
        let line = idx + 2;
        let row = row?;
        let get = |col: usize, name: &'static str| {
            row.get(col)
                .ok_or(ParseError::Row { line, message: format!("missing column {name}") })
        };
        let code = get(code_col, "code")?.trim().to_string();
        if code.is_empty() {
            return Err(ParseError::Row { line, message: "empty turbine code".into() });
        }
        let lon_deg = parse_f64(get(lon_col, "lon_deg")?, "lon_deg")
            .map_err(|message| ParseError::Row { line, message })?;
        let lat_deg = parse_f64(get(lat_col, "lat_deg")?, "lat_deg")
            .map_err(|message| ParseError::Row { line, message })?;
        if lat_deg.abs() >= MAX_ABS_LATITUDE_DEG {
            return Err(ParseError::LatitudeOutOfRange { code, lat: lat_deg });
        }
        if records.iter().any(|r| r.code == code) {
            return Err(ParseError::DuplicateCode(code));
        }
        records.push(TurbineRecord { code, lon_deg, lat_deg });
    }
    if records.is_empty() {
        return Err(ParseError::EmptyFile);
    }
    Ok(records)
}
