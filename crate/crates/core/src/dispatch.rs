//! Hourly energy dispatch and the multi-year simulation loop.
//!
//! Dispatch is a greedy self-consumption cascade, evaluated independently
//! every hour:
//!
//! 1. PV serves the load directly.
//! 2. Surplus charges the parked fleet up to its power and window bounds.
//! 3. Remaining surplus is exported (curtailed only past an export cap).
//! 4. Deficit draws on the fleet within its bounds.
//! 5. The grid covers the rest.
//!
//! The feed-in tariff never influences flows — it is pure revenue — and two
//! exact identities hold every hour: PV splits into its four sinks, and the
//! load is covered by its three sources.

use crate::config::ScenarioConfig;
use crate::error::{Error, Result};
use crate::fleet::{
    availability, fleet_limits, AvailabilityProfile, FleetLimits, FleetState,
};
use crate::region::RegionProfile;
use crate::series::{hour_of_day, HourlySeries, HOURS_PER_YEAR};

/// Where one hour's energy went, kWh.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HourFlows {
    pub pv_to_load: f64,
    pub pv_to_battery: f64,
    pub pv_to_grid: f64,
    pub battery_to_load: f64,
    pub grid_to_load: f64,
    pub curtailed: f64,
}

impl HourFlows {
    fn accumulate(&mut self, other: &HourFlows) {
        self.pv_to_load += other.pv_to_load;
        self.pv_to_battery += other.pv_to_battery;
        self.pv_to_grid += other.pv_to_grid;
        self.battery_to_load += other.battery_to_load;
        self.grid_to_load += other.grid_to_load;
        self.curtailed += other.curtailed;
    }
}

/// A full year of hourly flows plus their annual totals.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyFlows {
    pub hourly: Vec<HourFlows>,
    pub totals: HourFlows,
    /// Annual demand served, kWh.
    pub load_total: f64,
}

impl EnergyFlows {
    /// Annual PV production (all four sinks), kWh.
    pub fn pv_total(&self) -> f64 {
        self.totals.pv_to_load + self.totals.pv_to_battery + self.totals.pv_to_grid
            + self.totals.curtailed
    }
}

/// Electrical parameters the dispatcher needs each hour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispatchParams {
    /// One-way conversion efficiency, applied on charge and on discharge.
    pub charge_efficiency: f64,
    pub discharge_efficiency: f64,
    /// Hourly export limit, kWh; `None` = unconstrained.
    pub export_cap_kwh: Option<f64>,
}

impl DispatchParams {
    pub fn from_scenario(config: &ScenarioConfig) -> Self {
        DispatchParams {
            charge_efficiency: config.roundtrip_split_efficiency,
            discharge_efficiency: config.roundtrip_split_efficiency,
            export_cap_kwh: config.export_cap_kw,
        }
    }
}

/// One hour of the greedy cascade. `fleet` is `None` for storage-less
/// scenarios. `_fit_enabled` is accepted to make the call-site symmetric
/// with the economics, but deliberately cannot influence the result.
pub fn dispatch_hour(
    pv_kwh: f64,
    load_kwh: f64,
    fleet: Option<(&mut FleetState, &FleetLimits)>,
    params: &DispatchParams,
    _fit_enabled: bool,
) -> HourFlows {
    debug_assert!(pv_kwh >= 0.0 && load_kwh >= 0.0);
    let mut flows = HourFlows {
        pv_to_load: pv_kwh.min(load_kwh),
        ..HourFlows::default()
    };
    let surplus = pv_kwh - flows.pv_to_load;
    let deficit = load_kwh - flows.pv_to_load;

    match fleet {
        Some((state, limits)) => {
            if surplus > 0.0 {
                flows.pv_to_battery = surplus.min(limits.max_charge_kwh);
                state.deposit(flows.pv_to_battery * params.charge_efficiency);
            }
            let export = surplus - flows.pv_to_battery;
            (flows.pv_to_grid, flows.curtailed) = split_export(export, params);
            if deficit > 0.0 {
                flows.battery_to_load = deficit.min(limits.max_discharge_kwh);
                state.withdraw(flows.battery_to_load / params.discharge_efficiency);
            }
            flows.grid_to_load = deficit - flows.battery_to_load;
        }
        None => {
            (flows.pv_to_grid, flows.curtailed) = split_export(surplus, params);
            flows.grid_to_load = deficit;
        }
    }
    flows
}

fn split_export(surplus_kwh: f64, params: &DispatchParams) -> (f64, f64) {
    match params.export_cap_kwh {
        Some(cap) => {
            let exported = surplus_kwh.min(cap);
            (exported, surplus_kwh - exported)
        }
        None => (surplus_kwh, 0.0),
    }
}

/// A fleet bundled with its availability calendar and charger rating —
/// everything the year loop needs to derive per-hour limits.
#[derive(Debug, Clone, PartialEq)]
pub struct EvFleet {
    pub state: FleetState,
    pub availability: AvailabilityProfile,
    pub charger_power_kw: f64,
}

impl EvFleet {
    pub fn from_scenario(
        profile: &RegionProfile,
        config: &ScenarioConfig,
        start_year: i32,
    ) -> Self {
        EvFleet {
            state: FleetState::from_scenario(profile, config),
            availability: AvailabilityProfile::new(profile, config, start_year),
            charger_power_kw: config.charger_power,
        }
    }
}

/// Fold the cascade over one year. `year` (1-based) labels battery
/// replacement events. Fleet state carries over between calls, which is how
/// the horizon loop chains years.
pub fn simulate_year(
    generation: &HourlySeries,
    demand: &HourlySeries,
    mut fleet: Option<&mut EvFleet>,
    params: &DispatchParams,
    fit_enabled: bool,
    year: u32,
) -> Result<EnergyFlows> {
    let gen = generation.values();
    let load = demand.values();
    if gen.len() != load.len() {
        return Err(Error::LengthMismatch {
            left: gen.len(),
            right: load.len(),
        });
    }

    let mut hourly = Vec::with_capacity(HOURS_PER_YEAR);
    let mut totals = HourFlows::default();
    for h in 0..gen.len() {
        let flows = match fleet.as_deref_mut() {
            Some(ev) => {
                let avail = availability(h, &ev.availability);
                let limits = fleet_limits(
                    &ev.state,
                    avail,
                    ev.charger_power_kw,
                    params.charge_efficiency,
                    params.discharge_efficiency,
                );
                let flows =
                    dispatch_hour(gen[h], load[h], Some((&mut ev.state, &limits)), params, fit_enabled);
                if flows.battery_to_load > 0.0 {
                    let cells = flows.battery_to_load / params.discharge_efficiency;
                    ev.state.apply_degradation(cells, year);
                }
                flows
            }
            None => dispatch_hour(gen[h], load[h], None, params, fit_enabled),
        };
        totals.accumulate(&flows);
        hourly.push(flows);
    }

    Ok(EnergyFlows {
        hourly,
        totals,
        load_total: demand.annual_sum(),
    })
}

/// One simulated year within a horizon run.
#[derive(Debug, Clone, PartialEq)]
pub struct YearRecord {
    /// 1-based project year.
    pub year: u32,
    pub flows: EnergyFlows,
    /// PV output for the year after degradation, kWh.
    pub pv_annual_kwh: f64,
    /// Battery fade at year end (1.0 when no fleet).
    pub fade_end: f64,
}

/// Output of a multi-year run.
#[derive(Debug, Clone, PartialEq)]
pub struct HorizonResult {
    pub years: Vec<YearRecord>,
    /// Years (1-based) in which the fleet's batteries were replaced.
    pub replacement_years: Vec<u32>,
}

impl HorizonResult {
    /// Flows of the first (reference) year.
    pub fn reference_year(&self) -> &EnergyFlows {
        &self.years[0].flows
    }
}

/// Simulate `config.horizon` years: the weather and demand year repeats, PV
/// output decays geometrically, and the fleet's batteries age continuously
/// across year boundaries.
pub fn simulate_horizon(
    generation_year1: &HourlySeries,
    demand: &HourlySeries,
    fleet: Option<EvFleet>,
    config: &ScenarioConfig,
) -> Result<HorizonResult> {
    let params = DispatchParams::from_scenario(config);
    let mut fleet = fleet;
    let mut years = Vec::with_capacity(config.horizon as usize);

    for year in 1..=config.horizon {
        let derate = (1.0 - config.pv_degradation).powi(year as i32 - 1);
        let gen_y = generation_year1.scaled(derate)?;
        let pv_annual = gen_y.annual_sum();
        let flows = simulate_year(
            &gen_y,
            demand,
            fleet.as_mut(),
            &params,
            config.fit_enabled,
            year,
        )?;
        years.push(YearRecord {
            year,
            flows,
            pv_annual_kwh: pv_annual,
            fade_end: fleet.as_ref().map_or(1.0, |f| f.state.fade),
        });
    }

    Ok(HorizonResult {
        years,
        replacement_years: fleet.map_or_else(Vec::new, |f| f.state.replacement_years),
    })
}

/// Mean day: each supply component averaged over the year per hour-of-day.
#[derive(Debug, Clone, PartialEq)]
pub struct DailyProfile {
    pub pv_to_load: [f64; 24],
    pub battery_to_load: [f64; 24],
    pub grid_to_load: [f64; 24],
}

/// Average the supply components over all 365 days.
pub fn mean_daily_profile(flows: &EnergyFlows) -> DailyProfile {
    let mut profile = DailyProfile {
        pv_to_load: [0.0; 24],
        battery_to_load: [0.0; 24],
        grid_to_load: [0.0; 24],
    };
    for (h, f) in flows.hourly.iter().enumerate() {
        let hod = hour_of_day(h);
        profile.pv_to_load[hod] += f.pv_to_load;
        profile.battery_to_load[hod] += f.battery_to_load;
        profile.grid_to_load[hod] += f.grid_to_load;
    }
    let days = (flows.hourly.len() / 24) as f64;
    for hod in 0..24 {
        profile.pv_to_load[hod] /= days;
        profile.battery_to_load[hod] /= days;
        profile.grid_to_load[hod] /= days;
    }
    profile
}
