//! The electrified vehicle fleet as one aggregate stationary battery.
//!
//! Driving itself never appears as an explicit discharge: charging demand
//! for mobility enters the load series as an annual uplift, and the pool's
//! usable window (SOC 50–95 % by default) is what grid service may touch.
//! Cars that are away carry their share of the pool's energy with them and
//! bring it back — the pool's state of charge is shared proportionally, so
//! presence changes scale the usable window but never create or destroy
//! energy.

use crate::config::ScenarioConfig;
use crate::error::Result;
use crate::region::RegionProfile;
use crate::series::{day_of_year, hour_of_day, jan1_weekday, HourlySeries};

/// When and how much of the fleet is parked at home.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AvailabilityProfile {
    /// Fraction of the fleet away during the weekday window.
    pub weekday_use_fraction: f64,
    /// Local hours `[start, end)` of the weekday away window.
    pub away_start_hour: u32,
    pub away_end_hour: u32,
    /// Fraction of the fleet away outside that window.
    pub weekend_fraction_away: f64,
    /// Day of week (0 = Monday) of hour index 0.
    pub jan1_weekday: u32,
}

impl AvailabilityProfile {
    pub fn new(profile: &RegionProfile, config: &ScenarioConfig, start_year: i32) -> Self {
        AvailabilityProfile {
            weekday_use_fraction: profile.weekday_use_fraction,
            away_start_hour: config.away_start_hour,
            away_end_hour: config.away_end_hour,
            weekend_fraction_away: config.weekend_fraction_away,
            jan1_weekday: jan1_weekday(start_year),
        }
    }
}

/// Fraction of the fleet parked at home during `hour_index`, in [0, 1].
/// Weekly periodic: `availability(h) == availability(h + 168)` wherever both
/// indices are valid.
pub fn availability(hour_index: usize, profile: &AvailabilityProfile) -> f64 {
    let weekday = (profile.jan1_weekday as usize + day_of_year(hour_index)) % 7;
    let hod = hour_of_day(hour_index) as u32;
    let in_away_window = weekday < 5 // Monday..Friday
        && hod >= profile.away_start_hour
        && hod < profile.away_end_hour;
    if in_away_window {
        1.0 - profile.weekday_use_fraction
    } else {
        1.0 - profile.weekend_fraction_away
    }
}

/// Mobility electricity for one year of fleet driving, kWh.
///
/// `n_vehicles × weekday_use_fraction × avg_km_per_car_day × 365 ×
/// efficiency / 100` — the same kilometres that previously burned fuel, at
/// `efficiency` kWh/100 km.
pub fn ev_annual_energy(profile: &RegionProfile, efficiency_kwh_per_100km: f64) -> f64 {
    profile.n_vehicles
        * profile.weekday_use_fraction
        * profile.avg_km_per_car_day
        * 365.0
        * efficiency_kwh_per_100km
        / 100.0
}

/// Scenario demand series: the base load plus the fleet's charging energy.
///
/// PV-only systems keep the base load unchanged. For electrified fleets the
/// uplift is either the region's own implied factor
/// (`1 + ev_annual_energy / annual_base`) or a fixed externally chosen one.
pub fn build_scenario_demand(
    base: &HourlySeries,
    config: &ScenarioConfig,
    profile: &RegionProfile,
) -> Result<HourlySeries> {
    use crate::config::{System, UpliftMode};

    if config.system == System::PvOnly {
        return Ok(base.clone());
    }
    let factor = match config.uplift_mode {
        UpliftMode::Fixed => config
            .uplift_factor
            .expect("validated config: fixed mode carries a factor"),
        UpliftMode::PerRegion => {
            1.0 + ev_annual_energy(profile, config.ev_efficiency) / base.annual_sum()
        }
    };
    base.scaled(factor)
}

/// Aggregate state of the vehicle pool's batteries.
#[derive(Debug, Clone, PartialEq)]
pub struct FleetState {
    pub n_vehicles: f64,
    /// Usable nameplate per vehicle, kWh.
    pub capacity_per_vehicle_kwh: f64,
    /// SOC window reserved for grid service, fractions of effective capacity.
    pub soc_min: f64,
    pub soc_max: f64,
    /// Capacity retention in (0.8, 1.0]; at ≤ 0.8 the pack is replaced.
    pub fade: f64,
    /// Pool energy, kWh, always inside the faded SOC window.
    pub soc_energy_kwh: f64,
    /// Lifetime cell-side discharge throughput, kWh.
    pub cumulative_discharge_kwh: f64,
    /// Fade per full-cycle equivalent.
    pub fade_per_fce: f64,
    /// Years (1-based) in which a replacement occurred.
    pub replacement_years: Vec<u32>,
}

/// Fade level at or below which the fleet's batteries are replaced.
pub const REPLACEMENT_FADE: f64 = 0.8;

impl FleetState {
    /// Fresh pool at the midpoint of its SOC window.
    pub fn new(
        n_vehicles: f64,
        capacity_per_vehicle_kwh: f64,
        soc_min: f64,
        soc_max: f64,
        fade_per_fce: f64,
    ) -> Self {
        let nameplate = n_vehicles * capacity_per_vehicle_kwh;
        FleetState {
            n_vehicles,
            capacity_per_vehicle_kwh,
            soc_min,
            soc_max,
            fade: 1.0,
            soc_energy_kwh: 0.5 * (soc_min + soc_max) * nameplate,
            cumulative_discharge_kwh: 0.0,
            fade_per_fce,
            replacement_years: Vec::new(),
        }
    }

    /// Pool sized from a region's fleet and a scenario's per-vehicle battery.
    pub fn from_scenario(profile: &RegionProfile, config: &ScenarioConfig) -> Self {
        FleetState::new(
            profile.n_vehicles,
            config.battery_per_vehicle,
            config.soc_min,
            config.soc_max,
            config.battery_fade_per_fce,
        )
    }

    /// Total as-built capacity, kWh (never faded).
    pub fn nameplate_kwh(&self) -> f64 {
        self.n_vehicles * self.capacity_per_vehicle_kwh
    }

    /// Current usable capacity after fade, kWh.
    pub fn effective_capacity_kwh(&self) -> f64 {
        self.nameplate_kwh() * self.fade
    }

    pub fn soc_floor_kwh(&self) -> f64 {
        self.soc_min * self.effective_capacity_kwh()
    }

    pub fn soc_ceiling_kwh(&self) -> f64 {
        self.soc_max * self.effective_capacity_kwh()
    }

    /// Add cell-side energy, clamping float dust at the window edges.
    pub(crate) fn deposit(&mut self, cells_kwh: f64) {
        self.soc_energy_kwh = (self.soc_energy_kwh + cells_kwh).min(self.soc_ceiling_kwh());
    }

    /// Remove cell-side energy, clamping float dust at the window edges.
    pub(crate) fn withdraw(&mut self, cells_kwh: f64) {
        self.soc_energy_kwh = (self.soc_energy_kwh - cells_kwh).max(self.soc_floor_kwh());
    }

    /// Account cell-side discharge throughput against battery life. Fade
    /// decreases linearly with full-cycle equivalents; at or below the 0.8
    /// retention threshold the pack is replaced (fade back to 1.0) and the
    /// event year recorded. The SOC is re-clamped into whatever window the
    /// new fade implies.
    pub fn apply_degradation(&mut self, discharged_kwh: f64, year: u32) {
        debug_assert!(discharged_kwh >= 0.0);
        let nameplate = self.nameplate_kwh();
        if nameplate <= 0.0 || discharged_kwh <= 0.0 {
            return;
        }
        self.cumulative_discharge_kwh += discharged_kwh;
        self.fade -= self.fade_per_fce * (discharged_kwh / nameplate);
        // The tolerance keeps a trajectory that reaches the threshold
        // exactly in real arithmetic from slipping past it by rounding dust.
        if self.fade <= REPLACEMENT_FADE + 1e-9 {
            self.fade = 1.0;
            self.replacement_years.push(year);
        }
        self.soc_energy_kwh = self
            .soc_energy_kwh
            .clamp(self.soc_floor_kwh(), self.soc_ceiling_kwh());
    }
}

/// Hourly transfer bounds for the present sub-pool.
///
/// `max_charge_kwh`/`max_discharge_kwh` are AC-side flows the dispatcher may
/// command this hour: the charger power cap and the SOC-window energy bound
/// (efficiency-adjusted) combined. `headroom_kwh`/`reserve_kwh` are the raw
/// cell-side window distances of the present sub-pool.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FleetLimits {
    pub max_charge_kwh: f64,
    pub max_discharge_kwh: f64,
    pub headroom_kwh: f64,
    pub reserve_kwh: f64,
}

/// Compute this hour's transfer bounds.
///
/// Present cars hold `availability × soc` of the pool's energy and the same
/// share of its capacity (proportional sharing), so both the power cap and
/// the window bounds scale with availability.
pub fn fleet_limits(
    state: &FleetState,
    availability: f64,
    charger_power_kw: f64,
    charge_efficiency: f64,
    discharge_efficiency: f64,
) -> FleetLimits {
    debug_assert!((0.0..=1.0).contains(&availability));
    let power_cap = availability * state.n_vehicles * charger_power_kw; // kWh over one hour
    let headroom = (availability * (state.soc_ceiling_kwh() - state.soc_energy_kwh)).max(0.0);
    let reserve = (availability * (state.soc_energy_kwh - state.soc_floor_kwh())).max(0.0);
    FleetLimits {
        max_charge_kwh: power_cap.min(headroom / charge_efficiency),
        max_discharge_kwh: power_cap.min(reserve * discharge_efficiency),
        headroom_kwh: headroom,
        reserve_kwh: reserve,
    }
}
