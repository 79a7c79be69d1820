//! Bundled synthetic reference data: a deterministic clear-sky weather year
//! and a matching demand shape.
//!
//! Real weather and metered demand are user-supplied files. The synthetic
//! year exists so that tests, benchmarks and demos run out of the box with
//! plausible magnitudes: a Haurwitz clear-sky envelope modulated by a
//! deterministic seasonal cloud index (no RNG — every build produces the
//! same bytes), and a winter-peaking double-hump demand profile.
//!
//! The Paris parameters are tuned so the default generation chain —
//! irradiance scale 0.8, tilt 40°, south-facing, default losses — lands on
//! the reference annual capacity factor of ≈ 11 % used by the cost studies.

use crate::ingest::WeatherYear;
use crate::pv::solar_position;
use crate::series::{day_of_year, hour_of_day, jan1_weekday, HourlySeries, Unit, HOURS_PER_YEAR};

/// Calendar year the synthetic data is anchored to.
pub const SYNTHETIC_YEAR: i32 = 2019;

/// Parameters of the synthetic climate generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticClimate {
    pub latitude: f64,
    pub longitude: f64,
    /// Annual-mean atmospheric clearness index in (0, 1].
    pub mean_clearness: f64,
    /// Seasonal clearness swing; positive means clearer summers.
    pub summer_clearness_swing: f64,
    /// Annual-mean air temperature, °C.
    pub temp_mean_c: f64,
    /// Seasonal temperature swing (half peak-to-peak), °C.
    pub temp_swing_c: f64,
}

impl SyntheticClimate {
    /// Paris-like: latitude 48.9°N, gloomy winters, mild temperatures.
    pub fn paris() -> Self {
        SyntheticClimate {
            latitude: 48.9,
            longitude: 2.4,
            mean_clearness: 0.72,
            summer_clearness_swing: 0.18,
            temp_mean_c: 11.5,
            temp_swing_c: 8.5,
        }
    }

    /// Kyoto-like: latitude 35°N, clear winters, cloudy early-summer rains.
    pub fn kyoto() -> Self {
        SyntheticClimate {
            latitude: 35.0,
            longitude: 135.75,
            mean_clearness: 0.70,
            summer_clearness_swing: -0.10,
            temp_mean_c: 15.5,
            temp_swing_c: 11.0,
        }
    }
}

/// Golden-angle increment (radians) used to decorrelate day-to-day cloud
/// variation without an RNG.
const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;

/// Deterministic cloudiness/transmittance index for a given day and hour.
fn clearness(climate: &SyntheticClimate, day: usize, hour: usize) -> f64 {
    use std::f64::consts::PI;
    // Day 172 ≈ the June solstice, so a positive swing peaks in summer.
    let seasonal = climate.mean_clearness
        + climate.summer_clearness_swing * (2.0 * PI * (day as f64 - 172.0) / 365.0).cos();
    // Pseudo-random but reproducible day-to-day weather; ±18 % around the
    // seasonal mean, with a mild intra-day component. Both factors average
    // to one so they redistribute rather than remove energy.
    let daily = 1.0 + 0.18 * (day as f64 * GOLDEN_ANGLE).sin();
    let hourly = 1.0 + 0.03 * ((hour % 24) as f64 * 1.7).sin();
    (seasonal * daily * hourly).clamp(0.05, 1.0)
}

/// One synthetic weather year for the given climate.
pub fn clear_sky_weather(climate: &SyntheticClimate) -> WeatherYear {
    use std::f64::consts::PI;

    let mut ghi = Vec::with_capacity(HOURS_PER_YEAR);
    let mut dni = Vec::with_capacity(HOURS_PER_YEAR);
    let mut dhi = Vec::with_capacity(HOURS_PER_YEAR);
    let mut temp = Vec::with_capacity(HOURS_PER_YEAR);
    let mut wind = Vec::with_capacity(HOURS_PER_YEAR);

    for h in 0..HOURS_PER_YEAR {
        let day = day_of_year(h);
        let hod = hour_of_day(h);
        let pos = solar_position(climate.latitude, climate.longitude, h, SYNTHETIC_YEAR);
        let cos_z = pos.zenith_deg.to_radians().cos();

        let (g, b_h) = if cos_z > 0.0 {
            // Haurwitz clear-sky global horizontal envelope.
            let clear = 1098.0 * cos_z * (-0.057 / cos_z).exp();
            let t = clearness(climate, day, hod);
            let g = clear * t;
            // Diffuse fraction rises as the sky gets murkier.
            let diffuse_fraction = (1.0 - 0.75 * t * t).clamp(0.15, 1.0);
            let b_h = g * (1.0 - diffuse_fraction);
            (g, b_h)
        } else {
            (0.0, 0.0)
        };

        ghi.push(g);
        dhi.push(g - b_h);
        // Report DNI consistent with the horizontal closure; near the horizon
        // the beam is folded into diffuse instead.
        dni.push(if cos_z > 0.087 { b_h / cos_z } else { 0.0 });

        let seasonal = -(2.0 * PI * (day as f64 - 19.0) / 365.0).cos();
        let diurnal = -(2.0 * PI * (hod as f64 - 3.0) / 24.0).cos();
        temp.push(climate.temp_mean_c + climate.temp_swing_c * seasonal + 4.0 * diurnal);
        wind.push(3.2 + 1.5 * (day as f64 * GOLDEN_ANGLE * 0.5).sin().abs());
    }

    WeatherYear {
        ghi: HourlySeries::new(SYNTHETIC_YEAR, Unit::WattPerSquareMeter, ghi).unwrap(),
        dni: HourlySeries::new(SYNTHETIC_YEAR, Unit::WattPerSquareMeter, dni).unwrap(),
        dhi: HourlySeries::new(SYNTHETIC_YEAR, Unit::WattPerSquareMeter, dhi).unwrap(),
        temperature: HourlySeries::new(SYNTHETIC_YEAR, Unit::Celsius, temp).unwrap(),
        wind_speed: HourlySeries::new(SYNTHETIC_YEAR, Unit::MeterPerSecond, wind).unwrap(),
        latitude: climate.latitude,
        longitude: climate.longitude,
    }
}

/// The bundled Paris-like weather year.
pub fn paris_weather() -> WeatherYear {
    clear_sky_weather(&SyntheticClimate::paris())
}

/// The bundled Kyoto-like weather year.
pub fn kyoto_weather() -> WeatherYear {
    clear_sky_weather(&SyntheticClimate::kyoto())
}

/// A winter-peaking residential demand year normalized to exactly
/// `annual_kwh`. Double daily hump (midday and evening), weekday/weekend
/// contrast on the 2019 calendar.
pub fn demand_series(annual_kwh: f64) -> HourlySeries {
    use std::f64::consts::PI;

    let jan1 = jan1_weekday(SYNTHETIC_YEAR) as usize;
    let mut weights = Vec::with_capacity(HOURS_PER_YEAR);
    for h in 0..HOURS_PER_YEAR {
        let day = day_of_year(h);
        let hod = hour_of_day(h) as f64;

        let seasonal = 1.0 + 0.30 * (2.0 * PI * (day as f64 - 15.0) / 365.0).cos();
        let midday = 0.22 * (-((hod - 12.5) / 3.2).powi(2)).exp();
        let evening = 0.38 * (-((hod - 19.5) / 2.6).powi(2)).exp();
        let night_dip = -0.25 * (-((hod - 3.5) / 3.0).powi(2)).exp();
        let weekday = (jan1 + day) % 7;
        let calendar = if weekday < 5 { 1.02 } else { 0.94 };

        weights.push(seasonal * (0.85 + midday + evening + night_dip) * calendar);
    }
    let total: f64 = weights.iter().sum();
    let scale = annual_kwh / total;
    HourlySeries::new(
        SYNTHETIC_YEAR,
        Unit::KilowattHour,
        weights.into_iter().map(|w| w * scale).collect(),
    )
    .expect("synthetic demand is valid")
}
