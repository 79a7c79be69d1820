//! Cashflows, net present value, energy-balance indicators and CO₂
//! accounting.
//!
//! The comparison baseline is "do nothing": keep buying every kilowatt-hour
//! at the retail tariff and keep fuelling the combustion fleet. A scenario
//! is the same city with panels on the roofs and, optionally, the fleet
//! electrified and dispatching its batteries.

use crate::config::{FuelAssumptions, ScenarioConfig, System};
use crate::dispatch::{EnergyFlows, HorizonResult};
use crate::error::{Error, Result};
use crate::region::RegionProfile;
use serde::Serialize;

/// Net present value of a cashflow vector. `cashflows[0]` falls at project
/// start and is not discounted; `cashflows[t]` is divided by `(1+r)^t`.
pub fn npv(cashflows: &[f64], discount_rate: f64) -> f64 {
    cashflows
        .iter()
        .enumerate()
        .map(|(t, cf)| cf / (1.0 + discount_rate).powi(t as i32))
        .sum()
}

/// Annual cost and emissions of the combustion fleet's driving.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnualFuel {
    pub cost_eur: f64,
    pub co2_kg: f64,
}

/// Fuel burned by the combustion fleet over one year, using the same
/// kilometres the electrified fleet would drive: each vehicle covers
/// `avg_km_per_car_day` on the `weekday_use_fraction` of days it is used.
pub fn annual_fuel(profile: &RegionProfile, fuel: &FuelAssumptions) -> AnnualFuel {
    let annual_km_per_car =
        profile.weekday_use_fraction * profile.avg_km_per_car_day * 365.0;
    let gasoline_l = profile.n_gasoline * annual_km_per_car * fuel.gasoline_l_per_100km / 100.0;
    let diesel_l = profile.n_diesel * annual_km_per_car * fuel.diesel_l_per_100km / 100.0;
    AnnualFuel {
        cost_eur: gasoline_l * fuel.gasoline_price_eur_per_l
            + diesel_l * fuel.diesel_price_eur_per_l,
        co2_kg: gasoline_l * fuel.gasoline_co2_kg_per_l + diesel_l * fuel.diesel_co2_kg_per_l,
    }
}

/// The scenario's yearly cash outlays next to the baseline's steady annual
/// cost, ready for discounting.
#[derive(Debug, Clone, PartialEq)]
pub struct CashflowLedger {
    /// Index = project year; `[0]` is the investment, `[y]` the net cost of
    /// year `y` (imports + O&M + replacements − export revenue + fuel).
    pub scenario: Vec<f64>,
    /// What one unchanged year costs: base load at the retail tariff, plus
    /// fleet fuel when fuel is inside the comparison boundary.
    pub base_annual_cost: f64,
    pub discount_rate: f64,
}

impl CashflowLedger {
    pub fn scenario_npv(&self) -> f64 {
        npv(&self.scenario, self.discount_rate)
    }

    /// NPV of paying `base_annual_cost` every year 1..=horizon.
    pub fn base_npv(&self) -> f64 {
        let mut cf = vec![self.base_annual_cost; self.scenario.len()];
        cf[0] = 0.0;
        npv(&cf, self.discount_rate)
    }

    pub fn npv_savings(&self) -> f64 {
        self.base_npv() - self.scenario_npv()
    }
}

/// Assemble the ledger for a simulated horizon.
///
/// `include_fuel` widens the comparison boundary to the fleet's fuel bill:
/// the baseline then pays it every year, and so does a scenario that keeps
/// combustion vehicles. An electrified fleet pays none.
pub fn build_cashflows(
    hr: &HorizonResult,
    config: &ScenarioConfig,
    profile: &RegionProfile,
    capacity_kw: f64,
    base_annual_load_kwh: f64,
    include_fuel: bool,
) -> CashflowLedger {
    let fuel = annual_fuel(profile, &config.fuel_assumptions);
    let electrified = config.system == System::PvEv;

    let mut investment = config.pv_capex * capacity_kw * 1000.0;
    if electrified {
        let fleet_nameplate_kwh = profile.n_vehicles * config.battery_per_vehicle;
        investment += config.v2h_capex * fleet_nameplate_kwh;
    }
    let replacement_event_cost = config.battery_replacement_cost * profile.n_vehicles;

    let mut scenario = Vec::with_capacity(hr.years.len() + 1);
    scenario.push(investment);
    for record in &hr.years {
        let totals = &record.flows.totals;
        let mut cost = config.om_cost * capacity_kw + totals.grid_to_load * config.retail_tariff;
        if config.fit_enabled {
            cost -= totals.pv_to_grid * config.fit_rate;
        }
        if hr.replacement_years.contains(&record.year) {
            cost += replacement_event_cost;
        }
        if include_fuel && !electrified {
            cost += fuel.cost_eur;
        }
        scenario.push(cost);
    }

    let mut base_annual_cost = base_annual_load_kwh * config.retail_tariff;
    if include_fuel {
        base_annual_cost += fuel.cost_eur;
    }

    CashflowLedger {
        scenario,
        base_annual_cost,
        discount_rate: config.discount_rate,
    }
}

/// The three energy-balance ratios of a dispatched year:
/// self-consumption, self-sufficiency and energy sufficiency.
///
/// * `es = (pv_to_load + battery_to_load + pv_to_grid) / load`
/// * `ss = (pv_to_load + battery_to_load) / load`
/// * `sc = (pv_to_load + battery_to_load) / (pv_to_load + battery_to_load + pv_to_grid)`
///
/// `sc` is undefined (`None`) when the system neither serves nor exports
/// anything; by construction `ss == sc × es` exactly otherwise.
pub fn energy_indicators(flows: &EnergyFlows) -> Result<(Option<f64>, f64, f64)> {
    if flows.load_total <= 0.0 {
        return Err(Error::ZeroLoad);
    }
    let t = &flows.totals;
    let own_use = t.pv_to_load + t.battery_to_load;
    let produced_used = own_use + t.pv_to_grid;
    let es = produced_used / flows.load_total;
    let ss = own_use / flows.load_total;
    let sc = if produced_used > 0.0 {
        Some(own_use / produced_used)
    } else {
        None
    };
    Ok((sc, ss, es))
}

/// `(1 − annualized scenario cost / baseline annual cost) × 100`.
pub fn cost_saving_pct(
    scenario_npv: f64,
    base_annual_cost: f64,
    horizon: u32,
) -> Result<f64> {
    if base_annual_cost <= 0.0 {
        return Err(Error::NonPositiveBaseCost(base_annual_cost));
    }
    Ok((1.0 - (scenario_npv / horizon as f64) / base_annual_cost) * 100.0)
}

/// Annual CO₂ balance of a scenario against the unchanged city.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Co2Metrics {
    /// Baseline: all load imported, whole fleet on fuel. kg/yr.
    pub base_kg: f64,
    /// Scenario: remaining imports, plus fuel if the fleet still burns it.
    pub scenario_kg: f64,
    pub reduction_pct: f64,
    /// Grid CO₂ displaced per kWh of load, `emission_factor × ss`. kg/kWh.
    pub abatement_kg_per_kwh: f64,
}

pub fn co2_metrics(
    flows: &EnergyFlows,
    profile: &RegionProfile,
    fuel: &FuelAssumptions,
    system: System,
    base_annual_load_kwh: f64,
) -> Result<Co2Metrics> {
    let fuel_co2 = annual_fuel(profile, fuel).co2_kg;
    let factor = profile.grid_emission_factor;
    let base_kg = base_annual_load_kwh * factor + fuel_co2;
    let scenario_kg = flows.totals.grid_to_load * factor
        + match system {
            System::PvOnly => fuel_co2,
            System::PvEv => 0.0,
        };
    let (_, ss, _) = energy_indicators(flows)?;
    Ok(Co2Metrics {
        base_kg,
        scenario_kg,
        reduction_pct: (1.0 - scenario_kg / base_kg) * 100.0,
        abatement_kg_per_kwh: factor * ss,
    })
}

/// Everything a scenario run reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndicatorSet {
    /// `None` when the system neither serves nor exports (e.g. no panels).
    pub self_consumption: Option<f64>,
    pub self_sufficiency: f64,
    pub energy_sufficiency: f64,
    pub npv_savings_eur: f64,
    pub scenario_npv_cost_eur: f64,
    pub cost_saving_pct: f64,
    pub co2_reduction_pct: f64,
    pub co2_abatement_kg_per_kwh: f64,
    pub capacity_factor: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::build_scenario;
    use crate::dispatch::{HourFlows, YearRecord};
    use crate::region::Preset;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn npv_discounts_from_year_one_only() {
        assert_eq!(npv(&[100.0], 0.99), 100.0);
        let cf = [0.0, 10.0];
        assert_relative_eq!(npv(&cf, 0.025), 10.0 / 1.025, max_relative = 1e-12);
    }

    #[test]
    fn npv_matches_the_annuity_closed_form() {
        let mut cf = vec![10.0; 26];
        cf[0] = 0.0;
        let oracle = 10.0 * (1.0 - 1.025_f64.powi(-25)) / 0.025;
        assert_relative_eq!(npv(&cf, 0.025), oracle, max_relative = 1e-12);
    }

    #[test]
    fn npv_is_linear() {
        let cf = [5.0, -2.0, 7.5, 3.0];
        let doubled: Vec<f64> = cf.iter().map(|x| 2.0 * x).collect();
        assert_relative_eq!(npv(&doubled, 0.07), 2.0 * npv(&cf, 0.07), max_relative = 1e-12);
    }

    #[test]
    fn paris_fuel_bill_from_first_principles() {
        let profile = Preset::Paris.profile();
        let fuel = FuelAssumptions::default();
        let out = annual_fuel(&profile, &fuel);
        let km_per_car = 0.35 * 21.8 * 365.0;
        let gas_l = 334_000.0 * km_per_car * 6.5 / 100.0;
        let diesel_l = 250_000.0 * km_per_car * 5.5 / 100.0;
        assert_relative_eq!(
            out.cost_eur,
            gas_l * 1.55 + diesel_l * 1.45,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            out.co2_kg,
            gas_l * 2.31 + diesel_l * 2.68,
            max_relative = 1e-12
        );
    }

    fn flows_with(totals: HourFlows, load_total: f64) -> EnergyFlows {
        EnergyFlows {
            hourly: Vec::new(),
            totals,
            load_total,
        }
    }

    fn horizon_with(years: Vec<EnergyFlows>, replacement_years: Vec<u32>) -> HorizonResult {
        HorizonResult {
            years: years
                .into_iter()
                .enumerate()
                .map(|(i, flows)| YearRecord {
                    year: i as u32 + 1,
                    pv_annual_kwh: flows.totals.pv_to_load + flows.totals.pv_to_grid,
                    fade_end: 1.0,
                    flows,
                })
                .collect(),
            replacement_years,
        }
    }

    #[test]
    fn ledger_lines_for_a_pv_only_system() {
        let config = build_scenario("horizon = 2").unwrap();
        let profile = Preset::Paris.profile();
        let year = flows_with(
            HourFlows {
                pv_to_load: 100.0,
                pv_to_grid: 50.0,
                grid_to_load: 900.0,
                ..HourFlows::default()
            },
            1000.0,
        );
        let hr = horizon_with(vec![year.clone(), year], vec![]);
        let ledger = build_cashflows(&hr, &config, &profile, 10.0, 1000.0, false);
        assert_eq!(ledger.scenario.len(), 3);
        assert_relative_eq!(ledger.scenario[0], 1.9 * 10.0 * 1000.0, max_relative = 1e-12);
        let annual = 22.5 * 10.0 + 900.0 * 0.16 - 50.0 * 0.04;
        assert_relative_eq!(ledger.scenario[1], annual, max_relative = 1e-12);
        assert_relative_eq!(ledger.scenario[2], annual, max_relative = 1e-12);
        assert_relative_eq!(ledger.base_annual_cost, 160.0, max_relative = 1e-12);
    }

    #[test]
    fn fit_disabled_drops_export_revenue_only() {
        let config = build_scenario("horizon = 1\nfit_enabled = false").unwrap();
        let profile = Preset::Paris.profile();
        let year = flows_with(
            HourFlows {
                pv_to_grid: 50.0,
                grid_to_load: 900.0,
                ..HourFlows::default()
            },
            1000.0,
        );
        let hr = horizon_with(vec![year], vec![]);
        let ledger = build_cashflows(&hr, &config, &profile, 10.0, 1000.0, false);
        assert_relative_eq!(
            ledger.scenario[1],
            22.5 * 10.0 + 900.0 * 0.16,
            max_relative = 1e-12
        );
    }

    #[test]
    fn electrified_fleet_pays_v2h_and_replacements_but_no_fuel() {
        let mut profile = Preset::Paris.profile();
        profile.n_vehicles = 100.0;
        profile.n_gasoline = 60.0;
        profile.n_diesel = 40.0;
        let config = build_scenario("system = \"PVEV\"\nhorizon = 2").unwrap();
        let year = flows_with(
            HourFlows {
                grid_to_load: 500.0,
                ..HourFlows::default()
            },
            1000.0,
        );
        let hr = horizon_with(vec![year.clone(), year], vec![2]);
        let ledger = build_cashflows(&hr, &config, &profile, 10.0, 1000.0, true);
        // Investment: panels plus bidirectional enablement of 100 × 40 kWh.
        assert_relative_eq!(
            ledger.scenario[0],
            1.9 * 10.0 * 1000.0 + 25.0 * 100.0 * 40.0,
            max_relative = 1e-12
        );
        let fuel = annual_fuel(&profile, &config.fuel_assumptions);
        // Year 1 has no fuel line (fleet is electric) and no replacement.
        assert_relative_eq!(
            ledger.scenario[1],
            22.5 * 10.0 + 500.0 * 0.16,
            max_relative = 1e-12
        );
        // Year 2 adds the replacement event.
        assert_relative_eq!(
            ledger.scenario[2],
            22.5 * 10.0 + 500.0 * 0.16 + 91.0 * 100.0,
            max_relative = 1e-12
        );
        // The baseline still fuels its combustion fleet.
        assert_relative_eq!(
            ledger.base_annual_cost,
            1000.0 * 0.16 + fuel.cost_eur,
            max_relative = 1e-12
        );
    }

    #[test]
    fn combustion_scenario_keeps_paying_fuel_when_in_boundary() {
        let mut profile = Preset::Paris.profile();
        profile.n_vehicles = 10.0;
        profile.n_gasoline = 10.0;
        profile.n_diesel = 0.0;
        let config = build_scenario("horizon = 1").unwrap();
        let year = flows_with(HourFlows::default(), 1000.0);
        let hr = horizon_with(vec![year], vec![]);
        let fuel = annual_fuel(&profile, &config.fuel_assumptions);
        let with = build_cashflows(&hr, &config, &profile, 0.0, 1000.0, true);
        let without = build_cashflows(&hr, &config, &profile, 0.0, 1000.0, false);
        assert_relative_eq!(
            with.scenario[1] - without.scenario[1],
            fuel.cost_eur,
            max_relative = 1e-9
        );
    }

    #[test]
    fn indicator_ratios_and_their_identity() {
        let flows = flows_with(
            HourFlows {
                pv_to_load: 200.0,
                battery_to_load: 100.0,
                pv_to_grid: 300.0,
                grid_to_load: 700.0,
                ..HourFlows::default()
            },
            1000.0,
        );
        let (sc, ss, es) = energy_indicators(&flows).unwrap();
        assert_relative_eq!(ss, 0.3, max_relative = 1e-12);
        assert_relative_eq!(es, 0.6, max_relative = 1e-12);
        assert_relative_eq!(sc.unwrap(), 0.5, max_relative = 1e-12);
        assert_abs_diff_eq!(ss, sc.unwrap() * es, epsilon = 1e-12);
    }

    #[test]
    fn self_consumption_is_undefined_without_production() {
        let flows = flows_with(
            HourFlows {
                grid_to_load: 1000.0,
                ..HourFlows::default()
            },
            1000.0,
        );
        let (sc, ss, es) = energy_indicators(&flows).unwrap();
        assert!(sc.is_none());
        assert_eq!((ss, es), (0.0, 0.0));
    }

    #[test]
    fn zero_load_is_an_error() {
        let flows = flows_with(HourFlows::default(), 0.0);
        assert!(matches!(energy_indicators(&flows), Err(Error::ZeroLoad)));
    }

    #[test]
    fn cost_saving_endpoints() {
        // Scenario exactly as expensive as the baseline: zero saving.
        assert_abs_diff_eq!(
            cost_saving_pct(25.0 * 160.0, 160.0, 25).unwrap(),
            0.0,
            epsilon = 1e-12
        );
        // Free scenario: 100 %.
        assert_abs_diff_eq!(cost_saving_pct(0.0, 160.0, 25).unwrap(), 100.0, epsilon = 1e-12);
        assert!(matches!(
            cost_saving_pct(1.0, 0.0, 25),
            Err(Error::NonPositiveBaseCost(_))
        ));
    }

    #[test]
    fn co2_balance_for_both_system_kinds() {
        let mut profile = Preset::Paris.profile();
        profile.n_vehicles = 10.0;
        profile.n_gasoline = 10.0;
        profile.n_diesel = 0.0;
        let fuel = FuelAssumptions::default();
        let fuel_co2 = annual_fuel(&profile, &fuel).co2_kg;
        let flows = flows_with(
            HourFlows {
                pv_to_load: 400.0,
                grid_to_load: 600.0,
                ..HourFlows::default()
            },
            1000.0,
        );
        let pv_only =
            co2_metrics(&flows, &profile, &fuel, System::PvOnly, 1000.0).unwrap();
        let factor = profile.grid_emission_factor;
        assert_relative_eq!(pv_only.base_kg, 1000.0 * factor + fuel_co2, max_relative = 1e-12);
        assert_relative_eq!(
            pv_only.scenario_kg,
            600.0 * factor + fuel_co2,
            max_relative = 1e-12
        );
        let pv_ev = co2_metrics(&flows, &profile, &fuel, System::PvEv, 1000.0).unwrap();
        assert_relative_eq!(pv_ev.scenario_kg, 600.0 * factor, max_relative = 1e-12);
        assert!(pv_ev.reduction_pct > pv_only.reduction_pct);
        assert_relative_eq!(
            pv_ev.abatement_kg_per_kwh,
            factor * 0.4,
            max_relative = 1e-12
        );
    }

    #[test]
    fn savings_equal_base_minus_scenario_npv() {
        let ledger = CashflowLedger {
            scenario: vec![1000.0, 50.0, 50.0],
            base_annual_cost: 160.0,
            discount_rate: 0.025,
        };
        let base = 160.0 / 1.025 + 160.0 / (1.025 * 1.025);
        assert_relative_eq!(ledger.base_npv(), base, max_relative = 1e-12);
        assert_relative_eq!(
            ledger.npv_savings(),
            base - ledger.scenario_npv(),
            max_relative = 1e-12
        );
    }
}
