//! Fixed-length hourly series and the non-leap calendar they live on.
//!
//! Every simulation year is exactly 8760 hours; leap days are dropped at
//! ingest so downstream code never branches on year length. Hour 0 is
//! January 1st, 00:00–01:00 local standard time.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hours in one simulation year (365 days, leap day excluded).
pub const HOURS_PER_YEAR: usize = 8760;

/// Days per month in the non-leap simulation calendar.
pub const DAYS_PER_MONTH: [usize; 12] = [31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31];

/// Physical unit attached to a series. Energy and irradiance values must be
/// non-negative; temperatures and dimensionless signals may take any sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Unit {
    KilowattHour,
    WattPerSquareMeter,
    Celsius,
    MeterPerSecond,
    Dimensionless,
}

impl Unit {
    /// Units for which a negative entry is a data error.
    pub fn requires_non_negative(self) -> bool {
        matches!(self, Unit::KilowattHour | Unit::WattPerSquareMeter)
    }

    pub fn label(self) -> &'static str {
        match self {
            Unit::KilowattHour => "kWh",
            Unit::WattPerSquareMeter => "W/m2",
            Unit::Celsius => "degC",
            Unit::MeterPerSecond => "m/s",
            Unit::Dimensionless => "-",
        }
    }
}

/// One simulated year of hourly values with a fixed calendar anchor.
///
/// The constructor enforces the three structural invariants every consumer
/// relies on: exactly [`HOURS_PER_YEAR`] entries, all finite, and
/// non-negative where the unit demands it.
#[derive(Debug, Clone, PartialEq)]
pub struct HourlySeries {
    start_year: i32,
    unit: Unit,
    values: Vec<f64>,
}

impl HourlySeries {
    /// Build a validated series. See [`HourlySeries::validate`] for the rules.
    pub fn new(start_year: i32, unit: Unit, values: Vec<f64>) -> Result<Self> {
        let s = HourlySeries {
            start_year,
            unit,
            values,
        };
        s.validate()?;
        Ok(s)
    }

    /// Re-check the structural invariants. `new` already ran this; it is
    /// exposed so ingest code can re-validate after in-place edits.
    pub fn validate(&self) -> Result<()> {
        if self.values.len() != HOURS_PER_YEAR {
            return Err(Error::WrongLength {
                expected: HOURS_PER_YEAR,
                actual: self.values.len(),
            });
        }
        for (index, &v) in self.values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite { index });
            }
            if v < 0.0 && self.unit.requires_non_negative() {
                return Err(Error::Negative {
                    index,
                    value: v,
                    unit: self.unit.label(),
                });
            }
        }
        Ok(())
    }

    pub fn start_year(&self) -> i32 {
        self.start_year
    }

    pub fn unit(&self) -> Unit {
        self.unit
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Sum over the whole year.
    pub fn annual_sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Entry-wise multiple of this series. The caller is responsible for the
    /// factor's sign; a negative factor on an energy series will be rejected
    /// by the constructor.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        HourlySeries::new(
            self.start_year,
            self.unit,
            self.values.iter().map(|v| v * factor).collect(),
        )
    }

    /// Same values, relabelled calendar anchor.
    pub fn with_start_year(mut self, start_year: i32) -> Self {
        self.start_year = start_year;
        self
    }

    /// Sums partitioned by calendar month (non-leap year).
    pub fn monthly_sums(&self) -> [f64; 12] {
        let mut out = [0.0; 12];
        for (h, v) in self.values.iter().enumerate() {
            out[month_of_hour(h)] += v;
        }
        out
    }
}

/// Hour-of-day (0..24) for an hour index.
pub fn hour_of_day(hour_index: usize) -> usize {
    hour_index % 24
}

/// Zero-based day-of-year (0..365) for an hour index.
pub fn day_of_year(hour_index: usize) -> usize {
    hour_index / 24
}

/// Zero-based month (0..12) for an hour index in the non-leap calendar.
pub fn month_of_hour(hour_index: usize) -> usize {
    let day = day_of_year(hour_index);
    let mut cum = 0;
    for (m, &len) in DAYS_PER_MONTH.iter().enumerate() {
        cum += len;
        if day < cum {
            return m;
        }
    }
    11
}

/// Day of week (0 = Monday .. 6 = Sunday) of January 1st of `year`, from the
/// proleptic Gregorian calendar.
pub fn jan1_weekday(year: i32) -> u32 {
    use chrono::Datelike;
    chrono::NaiveDate::from_ymd_opt(year, 1, 1)
        .expect("January 1st exists in every year")
        .weekday()
        .num_days_from_monday()
}
