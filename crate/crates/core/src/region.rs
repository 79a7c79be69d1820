//! Region profiles: the demographic, building-stock and vehicle-fleet
//! statistics a scenario runs against.
//!
//! Three presets ship with the crate (Paris, Île-de-France, Kyoto). All
//! numbers are plain published statistics for each region; anything not
//! available for a region is filled with a documented assumption and can be
//! overridden by constructing a custom [`RegionProfile`].

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Static description of a study region.
///
/// Vehicle counts are `f64` because derived profiles (population-rescaled
/// hybrids built by sensitivity swaps) produce fractional fleets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionProfile {
    pub name: String,
    pub population: f64,
    /// Usable rooftop area, m².
    pub roof_area_m2: f64,
    /// Annual electricity demand, kWh/yr.
    pub annual_demand_kwh: f64,
    /// Registered passenger vehicles (count).
    pub n_vehicles: f64,
    /// Gasoline share of the fleet (count).
    pub n_gasoline: f64,
    /// Diesel share of the fleet (count).
    pub n_diesel: f64,
    /// Fraction of the fleet away from home during weekday working hours.
    pub weekday_use_fraction: f64,
    /// Mean distance per *driving* car per day, km.
    pub avg_km_per_car_day: f64,
    /// Grid carbon intensity, kg CO₂ per kWh.
    pub grid_emission_factor: f64,
    /// Retail electricity tariff, EUR/kWh.
    pub retail_tariff: f64,
    /// Feed-in tariff for exported PV energy, EUR/kWh.
    pub fit_rate: f64,
    /// Site latitude, degrees north.
    pub latitude: f64,
    /// Site longitude, degrees east.
    pub longitude: f64,
}

impl RegionProfile {
    pub fn per_capita_demand_kwh(&self) -> f64 {
        self.annual_demand_kwh / self.population
    }

    pub fn vehicles_per_capita(&self) -> f64 {
        self.n_vehicles / self.population
    }

    pub fn roof_area_per_capita_m2(&self) -> f64 {
        self.roof_area_m2 / self.population
    }

    /// TOML rendering used by `preset dump`.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("profile serializes")
    }
}

/// Built-in region presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Paris,
    IleDeFrance,
    Kyoto,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Paris, Preset::IleDeFrance, Preset::Kyoto];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Paris => "Paris",
            Preset::IleDeFrance => "IleDeFrance",
            Preset::Kyoto => "Kyoto",
        }
    }

    /// Materialize the preset's profile.
    pub fn profile(self) -> RegionProfile {
        match self {
            // City of Paris. 2.18 M inhabitants, 31 km² of usable roof,
            // 6031 kWh/yr of electricity per capita. 585 k registered cars
            // (334 k gasoline / 250 k diesel, rounded counts), 35 % of them
            // on the road during weekday working hours, 21.8 km per driving
            // car per day. French grid at 0.063 kgCO₂/kWh.
            Preset::Paris => RegionProfile {
                name: "Paris".into(),
                population: 2.18e6,
                roof_area_m2: 31.0e6,
                annual_demand_kwh: 6031.0 * 2.18e6,
                n_vehicles: 585_000.0,
                n_gasoline: 334_000.0,
                n_diesel: 250_000.0,
                weekday_use_fraction: 0.35,
                avg_km_per_car_day: 21.8,
                grid_emission_factor: 0.063,
                retail_tariff: 0.16,
                fit_rate: 0.04,
                latitude: 48.9,
                longitude: 2.4,
            },
            // Île-de-France: the greater Paris region. Larger roofs per
            // capita (33 m²), heavier car use (63 % weekday use, 26.3 km/day).
            Preset::IleDeFrance => RegionProfile {
                name: "IleDeFrance".into(),
                population: 12.2e6,
                roof_area_m2: 402.0e6,
                annual_demand_kwh: 6277.0 * 12.2e6,
                n_vehicles: 5_327_000.0,
                n_gasoline: 2_525_000.0,
                n_diesel: 2_802_000.0,
                weekday_use_fraction: 0.63,
                avg_km_per_car_day: 26.3,
                grid_emission_factor: 0.063,
                retail_tariff: 0.16,
                fit_rate: 0.04,
                latitude: 49.0,
                longitude: 2.5,
            },
            // Kyoto city. Published statistics give 485 k cars at 8.0 km/day
            // but no weekday-use share or fuel split; we assume a Paris-like
            // 35 % weekday use and an all-gasoline fleet (diesel passenger
            // cars are rare in Japan). Tariffs are kept at the European
            // defaults as placeholders; override them for cost studies.
            Preset::Kyoto => RegionProfile {
                name: "Kyoto".into(),
                population: 1.47e6,
                roof_area_m2: 52.0e6,
                annual_demand_kwh: 5678.0 * 1.47e6,
                n_vehicles: 485_000.0,
                n_gasoline: 485_000.0,
                n_diesel: 0.0,
                weekday_use_fraction: 0.35,
                avg_km_per_car_day: 8.0,
                grid_emission_factor: 0.352,
                retail_tariff: 0.16,
                fit_rate: 0.04,
                latitude: 35.0,
                longitude: 135.75,
            },
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        // Accept a few spellings people actually type; the canonical names
        // are the enum variants.
        match s.trim().to_ascii_lowercase().as_str() {
            "paris" => Ok(Preset::Paris),
            "iledefrance" | "ile-de-france" | "idf" => Ok(Preset::IleDeFrance),
            "kyoto" => Ok(Preset::Kyoto),
            _ => Err(Error::UnknownPreset(s.to_string())),
        }
    }
}
