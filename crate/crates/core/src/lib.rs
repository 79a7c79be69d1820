//! Simulation engine for city-scale rooftop photovoltaics coupled to an
//! electric-vehicle fleet acting as distributed storage.
//!
//! The crate covers the full chain: ingesting (or synthesizing) hourly
//! weather and demand, transposing irradiance onto tilted arrays, hourly
//! dispatch of PV against demand with the parked fleet as a battery pool,
//! multi-decade cashflows with panel and battery aging, roof-coverage
//! optimization, cross-region sensitivity transplants, and wavelet
//! coherence analysis of the driving time series.
//!
//! Entry points:
//! * [`sweep::run_scenario_full`] — one scenario, end to end.
//! * [`sweep::sweep_coverage`] — indicators across roof-coverage levels.
//! * [`pv::tilt_azimuth_scan`] — annual yield over panel orientations.
//! * [`coherence::wavelet_coherence`] — time–frequency co-variability.

pub mod coherence;
pub mod config;
pub mod dispatch;
pub mod econ;
pub mod error;
pub mod fleet;
pub mod ingest;
pub mod pv;
pub mod region;
pub mod series;
pub mod sweep;
pub mod synthetic;

pub use config::{build_scenario, Period, ScenarioConfig, System, MAX_COVERAGE};
pub use dispatch::{simulate_horizon, EnergyFlows, EvFleet, HorizonResult};
pub use econ::IndicatorSet;
pub use error::{Error, Result};
pub use ingest::{load_demand, load_weather, WeatherYear};
pub use region::{Preset, RegionProfile};
pub use series::{HourlySeries, Unit, HOURS_PER_YEAR};
pub use sweep::{run_scenario, run_scenario_full, sweep_coverage, ScenarioRun};
