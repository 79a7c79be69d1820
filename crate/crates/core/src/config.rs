//! Scenario configuration: one run's technology choices, prices and
//! simulation horizon, parsed from TOML with era-specific defaults.
//!
//! A configuration document only needs the keys the user wants to override;
//! [`build_scenario`] fills the rest from the defaults of the chosen
//! `(system, period)` pair and validates every bound. Unknown keys are
//! rejected so typos fail loudly instead of silently running defaults.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest fraction of roof area that can actually hold panels; the rest is
/// lost to access, shading and services.
pub const MAX_COVERAGE: f64 = 5.0 / 7.0;

/// Panel area needed per kW of nameplate capacity, m²/kW.
pub const PANEL_AREA_M2_PER_KW: f64 = 5.0;

/// Supply-side technology of a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum System {
    /// Rooftop PV only; vehicles stay combustion-engined.
    #[serde(rename = "PVOnly")]
    PvOnly,
    /// Rooftop PV plus a fully electrified fleet used as storage.
    #[serde(rename = "PVEV")]
    PvEv,
}

/// Cost era: today's installed prices or the projected cheaper future build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u16", into = "u16")]
pub enum Period {
    Y2019,
    Y2030,
}

impl TryFrom<u16> for Period {
    type Error = String;

    fn try_from(v: u16) -> std::result::Result<Self, String> {
        match v {
            2019 => Ok(Period::Y2019),
            2030 => Ok(Period::Y2030),
            other => Err(format!("period must be 2019 or 2030, got {other}")),
        }
    }
}

impl From<Period> for u16 {
    fn from(p: Period) -> u16 {
        match p {
            Period::Y2019 => 2019,
            Period::Y2030 => 2030,
        }
    }
}

/// How the electrified fleet's charging demand is added to the base load.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpliftMode {
    /// Scale base demand by `1 + ev_annual_energy / annual_base`, i.e. the
    /// uplift implied by the region's own fleet statistics.
    PerRegion,
    /// Scale base demand by a fixed externally chosen factor.
    Fixed,
}

/// Combustion-fleet fuel burn, emissions and prices used for the baseline
/// comparison. All six values are overridable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FuelAssumptions {
    /// L/100 km.
    pub gasoline_l_per_100km: f64,
    pub diesel_l_per_100km: f64,
    /// kg CO₂ per litre burned.
    pub gasoline_co2_kg_per_l: f64,
    pub diesel_co2_kg_per_l: f64,
    /// EUR per litre at the pump.
    pub gasoline_price_eur_per_l: f64,
    pub diesel_price_eur_per_l: f64,
}

impl Default for FuelAssumptions {
    fn default() -> Self {
        FuelAssumptions {
            gasoline_l_per_100km: 6.5,
            diesel_l_per_100km: 5.5,
            gasoline_co2_kg_per_l: 2.31,
            diesel_co2_kg_per_l: 2.68,
            gasoline_price_eur_per_l: 1.55,
            diesel_price_eur_per_l: 1.45,
        }
    }
}

/// Fully resolved scenario configuration. Every field is concrete; defaults
/// have been applied and bounds checked. Construct via [`build_scenario`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub system: System,
    pub period: Period,
    /// Whether exported PV energy earns the feed-in tariff. Never affects
    /// energy flows, only revenue.
    pub fit_enabled: bool,
    /// Fraction of roof area covered by panels, `[0, MAX_COVERAGE]`.
    pub coverage: f64,
    /// Installed PV cost, EUR per W.
    pub pv_capex: f64,
    /// Fixed operation & maintenance, EUR per kW per year.
    pub om_cost: f64,
    /// Bidirectional-charging enablement cost, EUR per kWh of fleet battery.
    pub v2h_capex: f64,
    /// Usable battery per vehicle, kWh.
    pub battery_per_vehicle: f64,
    /// Per-vehicle charger limit, kW, same both directions.
    pub charger_power: f64,
    /// State-of-charge window reserved for grid service, fractions of
    /// effective capacity.
    pub soc_min: f64,
    pub soc_max: f64,
    /// One-way battery conversion efficiency; applied once on charge and
    /// once on discharge.
    pub roundtrip_split_efficiency: f64,
    /// Real discount rate for NPV.
    pub discount_rate: f64,
    /// Project horizon in years.
    pub horizon: u32,
    /// PV output decay per year (fraction).
    pub pv_degradation: f64,
    /// Battery fade per full-cycle equivalent of throughput.
    pub battery_fade_per_fce: f64,
    /// Cost of one battery replacement event, EUR per vehicle.
    pub battery_replacement_cost: f64,
    /// Scalar applied to all irradiance inputs before generation.
    pub irradiance_scale: f64,
    /// Panel tilt from horizontal, degrees.
    pub tilt: f64,
    /// Panel azimuth, degrees clockwise from north (180 = south).
    pub azimuth: f64,
    /// EV drive efficiency, kWh per 100 km.
    pub ev_efficiency: f64,
    /// Retail electricity price, EUR/kWh.
    pub retail_tariff: f64,
    /// Feed-in tariff, EUR/kWh.
    pub fit_rate: f64,
    pub fuel_assumptions: FuelAssumptions,
    /// Demand uplift mode for the electrified fleet.
    pub uplift_mode: UpliftMode,
    /// Fixed uplift factor; present iff `uplift_mode == Fixed`.
    pub uplift_factor: Option<f64>,
    /// Weekday commuting window during which the `weekday_use_fraction` of
    /// the fleet is away, local hours.
    pub away_start_hour: u32,
    pub away_end_hour: u32,
    /// Fraction of the fleet away outside the weekday window (weekends,
    /// nights).
    pub weekend_fraction_away: f64,
    /// Optional cap on hourly grid export, kW; surplus beyond it is
    /// curtailed. `None` means unconstrained export.
    pub export_cap_kw: Option<f64>,
    /// Aggregate non-temperature array losses (soiling, wiring, mismatch).
    pub system_loss: f64,
    pub inverter_efficiency: f64,
    /// Nominal operating cell temperature, °C.
    pub noct: f64,
    /// Power temperature coefficient, 1/°C (negative).
    pub temp_coefficient: f64,
}

/// Raw TOML shape: everything optional, unknown keys rejected.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenarioConfig {
    system: Option<System>,
    period: Option<Period>,
    fit_enabled: Option<bool>,
    coverage: Option<f64>,
    pv_capex: Option<f64>,
    om_cost: Option<f64>,
    v2h_capex: Option<f64>,
    battery_per_vehicle: Option<f64>,
    charger_power: Option<f64>,
    soc_min: Option<f64>,
    soc_max: Option<f64>,
    roundtrip_split_efficiency: Option<f64>,
    discount_rate: Option<f64>,
    horizon: Option<u32>,
    pv_degradation: Option<f64>,
    battery_fade_per_fce: Option<f64>,
    battery_replacement_cost: Option<f64>,
    irradiance_scale: Option<f64>,
    tilt: Option<f64>,
    azimuth: Option<f64>,
    ev_efficiency: Option<f64>,
    retail_tariff: Option<f64>,
    fit_rate: Option<f64>,
    fuel_assumptions: Option<FuelAssumptions>,
    uplift_mode: Option<UpliftMode>,
    uplift_factor: Option<f64>,
    away_start_hour: Option<u32>,
    away_end_hour: Option<u32>,
    weekend_fraction_away: Option<f64>,
    export_cap_kw: Option<f64>,
    system_loss: Option<f64>,
    inverter_efficiency: Option<f64>,
    noct: Option<f64>,
    temp_coefficient: Option<f64>,
}

/// Installed PV price for a cost era, EUR/W.
fn default_pv_capex(period: Period) -> f64 {
    match period {
        Period::Y2019 => 1.9,
        Period::Y2030 => 1.31,
    }
}

/// Parse a TOML document into a fully resolved, validated configuration.
///
/// Missing keys take the defaults of the chosen `(system, period)`; if those
/// are missing too, the baseline is a 2019 PV-only build. An empty document
/// is therefore valid.
pub fn build_scenario(doc: &str) -> Result<ScenarioConfig> {
    let raw: RawScenarioConfig = toml::from_str(doc)?;

    let system = raw.system.unwrap_or(System::PvOnly);
    let period = raw.period.unwrap_or(Period::Y2019);

    if raw.v2h_capex.is_some() && system == System::PvOnly {
        return Err(Error::Inconsistent(
            "v2h_capex set for a PVOnly system (bidirectional charging needs PVEV)".into(),
        ));
    }
    let uplift_mode = raw.uplift_mode.unwrap_or(UpliftMode::PerRegion);
    match uplift_mode {
        UpliftMode::Fixed if raw.uplift_factor.is_none() => {
            return Err(Error::Inconsistent(
                "uplift_mode = \"fixed\" requires uplift_factor".into(),
            ));
        }
        UpliftMode::PerRegion if raw.uplift_factor.is_some() => {
            return Err(Error::Inconsistent(
                "uplift_factor only applies when uplift_mode = \"fixed\"".into(),
            ));
        }
        _ => {}
    }

    let config = ScenarioConfig {
        system,
        period,
        fit_enabled: raw.fit_enabled.unwrap_or(true),
        coverage: raw.coverage.unwrap_or(MAX_COVERAGE),
        pv_capex: raw.pv_capex.unwrap_or_else(|| default_pv_capex(period)),
        om_cost: raw.om_cost.unwrap_or(22.5),
        v2h_capex: raw.v2h_capex.unwrap_or(match system {
            System::PvEv => 25.0,
            System::PvOnly => 0.0,
        }),
        battery_per_vehicle: raw.battery_per_vehicle.unwrap_or(40.0),
        charger_power: raw.charger_power.unwrap_or(6.0),
        soc_min: raw.soc_min.unwrap_or(0.50),
        soc_max: raw.soc_max.unwrap_or(0.95),
        roundtrip_split_efficiency: raw.roundtrip_split_efficiency.unwrap_or(0.95),
        discount_rate: raw.discount_rate.unwrap_or(0.025),
        horizon: raw.horizon.unwrap_or(25),
        pv_degradation: raw.pv_degradation.unwrap_or(0.005),
        battery_fade_per_fce: raw.battery_fade_per_fce.unwrap_or(0.2 / 3000.0),
        battery_replacement_cost: raw.battery_replacement_cost.unwrap_or(91.0),
        irradiance_scale: raw.irradiance_scale.unwrap_or(0.8),
        tilt: raw.tilt.unwrap_or(40.0),
        azimuth: raw.azimuth.unwrap_or(180.0),
        ev_efficiency: raw.ev_efficiency.unwrap_or(17.2),
        retail_tariff: raw.retail_tariff.unwrap_or(0.16),
        fit_rate: raw.fit_rate.unwrap_or(0.04),
        fuel_assumptions: raw.fuel_assumptions.unwrap_or_default(),
        uplift_mode,
        uplift_factor: raw.uplift_factor,
        away_start_hour: raw.away_start_hour.unwrap_or(8),
        away_end_hour: raw.away_end_hour.unwrap_or(18),
        weekend_fraction_away: raw.weekend_fraction_away.unwrap_or(0.0),
        export_cap_kw: raw.export_cap_kw,
        system_loss: raw.system_loss.unwrap_or(0.14),
        inverter_efficiency: raw.inverter_efficiency.unwrap_or(0.96),
        noct: raw.noct.unwrap_or(45.0),
        temp_coefficient: raw.temp_coefficient.unwrap_or(-0.004),
    };
    config.validate()?;
    Ok(config)
}

/// Render the resolved configuration back to TOML. `build_scenario` on the
/// output reproduces the input config exactly.
pub fn serialize(config: &ScenarioConfig) -> String {
    toml::to_string(config).expect("resolved config serializes")
}

impl ScenarioConfig {
    /// Defaults for a `(system, period)` pair, equivalent to parsing a TOML
    /// document containing only those two keys.
    pub fn defaults(system: System, period: Period) -> Self {
        let doc = format!(
            "system = \"{}\"\nperiod = {}\n",
            match system {
                System::PvOnly => "PVOnly",
                System::PvEv => "PVEV",
            },
            u16::from(period)
        );
        build_scenario(&doc).expect("defaults are valid")
    }

    /// Re-check all bounds. [`build_scenario`] calls this; code that mutates
    /// a config programmatically (sweeps, CLI overrides) should call it again.
    pub fn validate(&self) -> Result<()> {
        fn bound(field: &'static str, value: f64, min: f64, max: f64) -> Result<()> {
            if !value.is_finite() || value < min || value > max {
                return Err(Error::OutOfRange {
                    field,
                    value,
                    min,
                    max,
                });
            }
            Ok(())
        }

        bound("coverage", self.coverage, 0.0, MAX_COVERAGE)?;
        bound("pv_capex", self.pv_capex, 0.0, 100.0)?;
        bound("om_cost", self.om_cost, 0.0, 1e4)?;
        bound("v2h_capex", self.v2h_capex, 0.0, 1e4)?;
        bound("battery_per_vehicle", self.battery_per_vehicle, 0.0, 1e4)?;
        bound("charger_power", self.charger_power, 0.0, 1e3)?;
        bound("soc_min", self.soc_min, 0.0, 1.0)?;
        bound("soc_max", self.soc_max, 0.0, 1.0)?;
        if self.soc_min >= self.soc_max {
            return Err(Error::Inconsistent(format!(
                "soc_min < soc_max violated (soc_min = {}, soc_max = {})",
                self.soc_min, self.soc_max
            )));
        }
        bound(
            "roundtrip_split_efficiency",
            self.roundtrip_split_efficiency,
            1e-6,
            1.0,
        )?;
        bound("discount_rate", self.discount_rate, -0.99, 1.0)?;
        if self.horizon == 0 {
            return Err(Error::OutOfRange {
                field: "horizon",
                value: 0.0,
                min: 1.0,
                max: 100.0,
            });
        }
        bound("pv_degradation", self.pv_degradation, 0.0, 0.999)?;
        bound("battery_fade_per_fce", self.battery_fade_per_fce, 0.0, 1.0)?;
        bound(
            "battery_replacement_cost",
            self.battery_replacement_cost,
            0.0,
            1e6,
        )?;
        bound("irradiance_scale", self.irradiance_scale, 1e-9, 1.5)?;
        bound("tilt", self.tilt, 0.0, 90.0)?;
        if !(0.0..360.0).contains(&self.azimuth) || !self.azimuth.is_finite() {
            return Err(Error::OutOfRange {
                field: "azimuth",
                value: self.azimuth,
                min: 0.0,
                max: 360.0,
            });
        }
        bound("ev_efficiency", self.ev_efficiency, 1e-9, 1e3)?;
        bound("retail_tariff", self.retail_tariff, 0.0, 100.0)?;
        bound("fit_rate", self.fit_rate, 0.0, 100.0)?;
        if let Some(f) = self.uplift_factor {
            bound("uplift_factor", f, 1e-9, 100.0)?;
        }
        if self.away_start_hour >= self.away_end_hour || self.away_end_hour > 24 {
            return Err(Error::Inconsistent(format!(
                "away window [{}, {}) must satisfy start < end <= 24",
                self.away_start_hour, self.away_end_hour
            )));
        }
        bound(
            "weekend_fraction_away",
            self.weekend_fraction_away,
            0.0,
            1.0,
        )?;
        if let Some(cap) = self.export_cap_kw {
            bound("export_cap_kw", cap, 0.0, f64::INFINITY)?;
        }
        bound("system_loss", self.system_loss, 0.0, 0.999)?;
        bound("inverter_efficiency", self.inverter_efficiency, 1e-6, 1.0)?;
        bound("noct", self.noct, -50.0, 150.0)?;
        bound("temp_coefficient", self.temp_coefficient, -1.0, 0.0)?;

        let f = &self.fuel_assumptions;
        bound("gasoline_l_per_100km", f.gasoline_l_per_100km, 0.0, 100.0)?;
        bound("diesel_l_per_100km", f.diesel_l_per_100km, 0.0, 100.0)?;
        bound("gasoline_co2_kg_per_l", f.gasoline_co2_kg_per_l, 0.0, 10.0)?;
        bound("diesel_co2_kg_per_l", f.diesel_co2_kg_per_l, 0.0, 10.0)?;
        bound(
            "gasoline_price_eur_per_l",
            f.gasoline_price_eur_per_l,
            0.0,
            100.0,
        )?;
        bound(
            "diesel_price_eur_per_l",
            f.diesel_price_eur_per_l,
            0.0,
            100.0,
        )?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_is_the_2019_pv_baseline() {
        let c = build_scenario("").unwrap();
        assert_eq!(c.system, System::PvOnly);
        assert_eq!(c.period, Period::Y2019);
        assert_eq!(c.pv_capex, 1.9);
        assert_eq!(c.v2h_capex, 0.0);
        assert_eq!(c.coverage, MAX_COVERAGE);
        assert_eq!(c.discount_rate, 0.025);
        assert_eq!(c.horizon, 25);
    }

    #[test]
    fn pvev_2030_defaults() {
        let c = build_scenario("system = \"PVEV\"\nperiod = 2030\n").unwrap();
        assert_eq!(c.pv_capex, 1.31);
        assert_eq!(c.v2h_capex, 25.0);
        assert_eq!(c.battery_per_vehicle, 40.0);
        assert_eq!(c.charger_power, 6.0);
        assert_eq!(c.soc_min, 0.50);
        assert_eq!(c.soc_max, 0.95);
        assert_eq!(c.irradiance_scale, 0.8);
        assert_eq!(c.tilt, 40.0);
        assert_eq!(c.azimuth, 180.0);
        assert_eq!(c.ev_efficiency, 17.2);
        assert_eq!(c.battery_replacement_cost, 91.0);
    }

    #[test]
    fn zero_coverage_is_a_valid_scenario() {
        let c = build_scenario("coverage = 0.0").unwrap();
        assert_eq!(c.coverage, 0.0);
    }

    #[test]
    fn unknown_key_is_named_in_the_error() {
        let err = build_scenario("coverrage = 0.5").unwrap_err();
        assert!(err.to_string().contains("coverrage"), "got: {err}");
    }

    #[test]
    fn inverted_soc_window_is_rejected() {
        let err = build_scenario("soc_min = 0.95\nsoc_max = 0.5").unwrap_err();
        assert!(
            err.to_string().contains("soc_min < soc_max"),
            "got: {err}"
        );
    }

    #[test]
    fn v2h_capex_on_pv_only_is_contradictory() {
        let err = build_scenario("v2h_capex = 25.0").unwrap_err();
        assert!(err.to_string().contains("v2h_capex"), "got: {err}");
    }

    #[test]
    fn coverage_beyond_roof_limit_is_rejected() {
        let err = build_scenario("coverage = 0.8").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("coverage"), "got: {msg}");
    }

    #[test]
    fn fixed_uplift_requires_a_factor() {
        assert!(build_scenario("uplift_mode = \"fixed\"").is_err());
        let c = build_scenario("uplift_mode = \"fixed\"\nuplift_factor = 1.08").unwrap();
        assert_eq!(c.uplift_factor, Some(1.08));
    }

    #[test]
    fn round_trip_through_toml_is_lossless() {
        let c = build_scenario("system = \"PVEV\"\nperiod = 2030\ncoverage = 0.42\n").unwrap();
        let doc = serialize(&c);
        let back = build_scenario(&doc).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn fuel_table_is_overridable_and_checked() {
        let c = build_scenario("[fuel_assumptions]\ngasoline_l_per_100km = 7.0\n").unwrap();
        assert_eq!(c.fuel_assumptions.gasoline_l_per_100km, 7.0);
        assert_eq!(c.fuel_assumptions.diesel_l_per_100km, 5.5);
        let err = build_scenario("[fuel_assumptions]\ngasoline_l_per_100km = -1.0\n").unwrap_err();
        assert!(err.to_string().contains("gasoline_l_per_100km"));
    }
}
