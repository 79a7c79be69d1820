//! File ingest: hourly weather and demand tables from CSV.
//!
//! Both readers accept leading `# key: value` comment lines. Recognised
//! directives are `# year:` (calendar anchor, default 2019) and, for demand
//! and generic series, `# unit:` (default kWh). Files may carry a leap year
//! (8784 rows); the February 29th block is dropped so every loaded series is
//! exactly 8760 hours.
//!
//! Ingest is deterministic and performs no resampling: one CSV row is one
//! simulation hour.

use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::series::{HourlySeries, Unit, HOURS_PER_YEAR};

/// Hours in a leap-year file.
const HOURS_LEAP_YEAR: usize = 8784;
/// First hour of February 29th: 31 (Jan) + 28 (Feb) days.
const LEAP_BLOCK_START: usize = (31 + 28) * 24;

/// One year of hourly weather at a site.
#[derive(Debug, Clone, PartialEq)]
pub struct WeatherYear {
    /// Global horizontal irradiance, W/m².
    pub ghi: HourlySeries,
    /// Direct normal irradiance, W/m². Carried through ingest and validated,
    /// though the isotropic transposition derives beam from `ghi - dhi`.
    pub dni: HourlySeries,
    /// Diffuse horizontal irradiance, W/m².
    pub dhi: HourlySeries,
    /// Air temperature, °C.
    pub temperature: HourlySeries,
    /// Wind speed, m/s.
    pub wind_speed: HourlySeries,
    /// Site latitude, degrees north.
    pub latitude: f64,
    /// Site longitude, degrees east.
    pub longitude: f64,
}

impl WeatherYear {
    pub fn start_year(&self) -> i32 {
        self.ghi.start_year()
    }
}

/// Energy/power unit flag accepted on demand files. Power units are
/// interpreted as mean power over the hour, i.e. 1 MW ≙ 1 MWh.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum DemandUnit {
    KilowattHour,
    MegawattHour,
    GigawattHour,
    Kilowatt,
    Megawatt,
    Gigawatt,
}

impl DemandUnit {
    fn to_kwh(self) -> f64 {
        match self {
            DemandUnit::KilowattHour | DemandUnit::Kilowatt => 1.0,
            DemandUnit::MegawattHour | DemandUnit::Megawatt => 1e3,
            DemandUnit::GigawattHour | DemandUnit::Gigawatt => 1e6,
        }
    }
}

impl FromStr for DemandUnit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "kwh" => Ok(DemandUnit::KilowattHour),
            "mwh" => Ok(DemandUnit::MegawattHour),
            "gwh" => Ok(DemandUnit::GigawattHour),
            "kw" => Ok(DemandUnit::Kilowatt),
            "mw" => Ok(DemandUnit::Megawatt),
            "gw" => Ok(DemandUnit::Gigawatt),
            other => Err(Error::UnknownUnit(other.to_string())),
        }
    }
}

/// Leading `# key: value` directives of a CSV file plus the remaining body.
struct CsvDocument<'a> {
    unit: Option<&'a str>,
    year: Option<i32>,
    body: &'a str,
}

fn split_directives(text: &str) -> Result<CsvDocument<'_>> {
    let mut unit = None;
    let mut year = None;
    let mut offset = 0;
    for line in text.lines() {
        let trimmed = line.trim_start();
        if !trimmed.starts_with('#') {
            break;
        }
        let directive = trimmed.trim_start_matches('#').trim();
        if let Some((key, value)) = directive.split_once(':') {
            match key.trim().to_ascii_lowercase().as_str() {
                "unit" => unit = Some(value.trim()),
                "year" => {
                    year = Some(value.trim().parse::<i32>().map_err(|e| Error::BadCell {
                        row: 0,
                        column: "# year".into(),
                        message: e.to_string(),
                    })?)
                }
                _ => {} // unrecognised comments are ignored, not errors
            }
        }
        // Advance past this line and its terminator.
        offset += line.len();
        offset += text[offset..].starts_with("\r\n") as usize;
        offset += 1;
        offset = offset.min(text.len());
    }
    Ok(CsvDocument {
        unit,
        year,
        body: &text[offset.min(text.len())..],
    })
}

/// Parse the named columns of a CSV body into per-column `f64` vectors.
fn read_columns(body: &str, wanted: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(body.as_bytes());

    let headers = reader
        .headers()
        .map_err(|e| Error::BadCell {
            row: 0,
            column: "header".into(),
            message: e.to_string(),
        })?
        .clone();

    let mut indices = Vec::with_capacity(wanted.len());
    for name in wanted {
        let idx = headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::MissingColumn((*name).to_string()))?;
        indices.push(idx);
    }

    let mut columns: Vec<Vec<f64>> = wanted.iter().map(|_| Vec::new()).collect();
    for (row_no, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::BadCell {
            row: row_no + 1,
            column: "-".into(),
            message: e.to_string(),
        })?;
        for (slot, (&idx, name)) in indices.iter().zip(wanted).enumerate() {
            let cell = record.get(idx).unwrap_or("");
            let value: f64 = cell.parse().map_err(|_| Error::BadCell {
                row: row_no + 1,
                column: (*name).to_string(),
                message: format!("`{cell}` is not a number"),
            })?;
            columns[slot].push(value);
        }
    }
    Ok(columns)
}

/// Drop February 29th if the file carried a leap year; any other length is
/// an error.
fn normalize_year(mut values: Vec<f64>) -> Result<Vec<f64>> {
    match values.len() {
        HOURS_PER_YEAR => Ok(values),
        HOURS_LEAP_YEAR => {
            values.drain(LEAP_BLOCK_START..LEAP_BLOCK_START + 24);
            Ok(values)
        }
        n => Err(Error::WrongLength {
            expected: HOURS_PER_YEAR,
            actual: n,
        }),
    }
}

/// Load an hourly weather year from CSV.
///
/// The file must provide `ghi`, `dni`, `dhi`, `temp` and `wind` columns
/// (order free, extra columns ignored). `site` is `(latitude, longitude)` in
/// degrees; weather files do not carry their own coordinates.
pub fn load_weather(path: &Path, site: (f64, f64)) -> Result<WeatherYear> {
    let text = std::fs::read_to_string(path)?;
    let doc = split_directives(&text)?;
    let year = doc.year.unwrap_or(2019);

    let mut columns = read_columns(doc.body, &["ghi", "dni", "dhi", "temp", "wind"])?;
    let wind = normalize_year(columns.pop().unwrap())?;
    let temp = normalize_year(columns.pop().unwrap())?;
    let dhi = normalize_year(columns.pop().unwrap())?;
    let dni = normalize_year(columns.pop().unwrap())?;
    let ghi = normalize_year(columns.pop().unwrap())?;

    Ok(WeatherYear {
        ghi: HourlySeries::new(year, Unit::WattPerSquareMeter, ghi)?,
        dni: HourlySeries::new(year, Unit::WattPerSquareMeter, dni)?,
        dhi: HourlySeries::new(year, Unit::WattPerSquareMeter, dhi)?,
        temperature: HourlySeries::new(year, Unit::Celsius, temp)?,
        wind_speed: HourlySeries::new(year, Unit::MeterPerSecond, wind)?,
        latitude: site.0,
        longitude: site.1,
    })
}

/// Scale all three irradiance components by `coeff`, leaving temperature and
/// wind untouched. Used to map clear-sky-biased satellite irradiance onto
/// ground truth. `coeff` must lie in (0, 1.5].
pub fn scale_irradiance(weather: &WeatherYear, coeff: f64) -> Result<WeatherYear> {
    if !coeff.is_finite() || coeff <= 0.0 || coeff > 1.5 {
        return Err(Error::OutOfRange {
            field: "irradiance_scale",
            value: coeff,
            min: 0.0,
            max: 1.5,
        });
    }
    Ok(WeatherYear {
        ghi: weather.ghi.scaled(coeff)?,
        dni: weather.dni.scaled(coeff)?,
        dhi: weather.dhi.scaled(coeff)?,
        temperature: weather.temperature.clone(),
        wind_speed: weather.wind_speed.clone(),
        latitude: weather.latitude,
        longitude: weather.longitude,
    })
}

/// Load an hourly demand year from CSV (column `demand`), converting to kWh
/// per the `# unit:` directive (default kWh).
pub fn load_demand(path: &Path) -> Result<HourlySeries> {
    let text = std::fs::read_to_string(path)?;
    let doc = split_directives(&text)?;
    let year = doc.year.unwrap_or(2019);
    let unit = match doc.unit {
        Some(flag) => flag.parse::<DemandUnit>()?,
        None => DemandUnit::KilowattHour,
    };

    let mut columns = read_columns(doc.body, &["demand"])?;
    let values = normalize_year(columns.pop().unwrap())?;
    let factor = unit.to_kwh();
    HourlySeries::new(
        year,
        Unit::KilowattHour,
        values.into_iter().map(|v| v * factor).collect(),
    )
}

/// Load a generic single-column hourly series (any header name, first data
/// column used) for signal analysis. Values are taken as-is; the `# unit:`
/// flag, if present and recognised, is applied, otherwise values are
/// dimensionless.
pub fn load_series(path: &Path) -> Result<HourlySeries> {
    let text = std::fs::read_to_string(path)?;
    let doc = split_directives(&text)?;
    let year = doc.year.unwrap_or(2019);
    let factor = match doc.unit {
        Some(flag) => flag.parse::<DemandUnit>().map(DemandUnit::to_kwh)?,
        None => 1.0,
    };

    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(doc.body.as_bytes());
    let mut values = Vec::with_capacity(HOURS_PER_YEAR);
    for (row_no, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::BadCell {
            row: row_no + 1,
            column: "-".into(),
            message: e.to_string(),
        })?;
        let cell = record.get(0).unwrap_or("");
        let value: f64 = cell.parse().map_err(|_| Error::BadCell {
            row: row_no + 1,
            column: "1".into(),
            message: format!("`{cell}` is not a number"),
        })?;
        values.push(value * factor);
    }
    HourlySeries::new(year, Unit::Dimensionless, normalize_year(values)?)
}

/// Entry-wise demand rescaling (population or electrification factors).
/// `factor` must be strictly positive.
pub fn derive_scaled_demand(base: &HourlySeries, factor: f64) -> Result<HourlySeries> {
    if !factor.is_finite() || factor <= 0.0 {
        return Err(Error::OutOfRange {
            field: "demand_factor",
            value: factor,
            min: f64::MIN_POSITIVE,
            max: f64::INFINITY,
        });
    }
    base.scaled(factor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::io::Write;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f.flush().unwrap();
        f
    }

    fn weather_csv(rows: usize) -> String {
        let mut s = String::from("# year: 2019\nghi,dni,dhi,temp,wind\n");
        for h in 0..rows {
            // Simple but non-constant pattern so slicing bugs show up.
            s.push_str(&format!("{},{},{},10.0,3.0\n", h % 500, h % 700, h % 300));
        }
        s
    }

    #[test]
    fn loads_a_regular_year() {
        let f = write_temp(&weather_csv(8760));
        let w = load_weather(f.path(), (48.9, 2.4)).unwrap();
        assert_eq!(w.ghi.values().len(), 8760);
        assert_eq!(w.start_year(), 2019);
        assert_eq!(w.latitude, 48.9);
    }

    #[test]
    fn drops_the_leap_day_block() {
        let f = write_temp(&weather_csv(8784));
        let w = load_weather(f.path(), (48.9, 2.4)).unwrap();
        assert_eq!(w.ghi.values().len(), 8760);
        // Hour 1416 was Feb 29 00:00 (value 1416 % 500 = 416); after the drop
        // it must hold Mar 1 00:00 (value 1440 % 500 = 440).
        assert_eq!(w.ghi.values()[1416], 440.0 % 500.0);
    }

    #[test]
    fn misaligned_year_is_rejected() {
        let f = write_temp(&weather_csv(8000));
        let err = load_weather(f.path(), (0.0, 0.0)).unwrap_err();
        assert!(err.to_string().contains("expected 8760"), "got: {err}");
    }

    #[test]
    fn missing_column_is_named() {
        let f = write_temp("ghi,dni,temp,wind\n1,2,3,4\n");
        let err = load_weather(f.path(), (0.0, 0.0)).unwrap_err();
        assert!(err.to_string().contains("dhi"), "got: {err}");
    }

    #[test]
    fn bad_cell_is_located() {
        let mut csv = String::from("ghi,dni,dhi,temp,wind\n");
        csv.push_str("1,2,3,4,5\n");
        csv.push_str("1,x,3,4,5\n");
        let f = write_temp(&csv);
        let err = load_weather(f.path(), (0.0, 0.0)).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("row 2") && msg.contains("dni"), "got: {msg}");
    }

    #[test]
    fn demand_unit_flag_converts_to_kwh() {
        let mut csv = String::from("# unit: MWh\ndemand\n");
        for _ in 0..8760 {
            csv.push_str("1.0\n");
        }
        let f = write_temp(&csv);
        let d = load_demand(f.path()).unwrap();
        assert_eq!(d.values()[0], 1000.0);
        assert_relative_eq!(d.annual_sum(), 8.76e6, max_relative = 1e-12);
    }

    #[test]
    fn unknown_unit_flag_is_rejected() {
        let mut csv = String::from("# unit: furlongs\ndemand\n");
        for _ in 0..8760 {
            csv.push_str("1.0\n");
        }
        let f = write_temp(&csv);
        let err = load_demand(f.path()).unwrap_err();
        assert!(err.to_string().contains("furlongs"), "got: {err}");
    }

    #[test]
    fn empty_demand_file_reports_zero_rows() {
        let f = write_temp("demand\n");
        let err = load_demand(f.path()).unwrap_err();
        assert!(err.to_string().contains("row count 0"), "got: {err}");
    }

    #[test]
    fn irradiance_scaling_is_linear_and_leaves_weather_alone() {
        let f = write_temp(&weather_csv(8760));
        let w = load_weather(f.path(), (48.9, 2.4)).unwrap();
        let scaled = scale_irradiance(&w, 0.8).unwrap();
        assert_relative_eq!(
            scaled.ghi.annual_sum(),
            0.8 * w.ghi.annual_sum(),
            max_relative = 1e-12
        );
        assert_eq!(scaled.temperature, w.temperature);
        assert_eq!(scaled.wind_speed, w.wind_speed);
        assert!(scale_irradiance(&w, 0.0).is_err());
        assert!(scale_irradiance(&w, 1.6).is_err());
    }

    #[test]
    fn derived_demand_scaling_is_entrywise() {
        let base = HourlySeries::new(2019, Unit::KilowattHour, vec![2.0; 8760]).unwrap();
        let scaled = derive_scaled_demand(&base, 0.18).unwrap();
        assert_relative_eq!(scaled.values()[17], 0.36, max_relative = 1e-12);
        let identity = derive_scaled_demand(&base, 1.0).unwrap();
        assert_eq!(identity, base);
        assert!(derive_scaled_demand(&base, 0.0).is_err());
        assert!(derive_scaled_demand(&base, -1.0).is_err());
    }
}
