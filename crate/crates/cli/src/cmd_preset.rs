//! `sunfleet preset` — inspect the bundled region profiles.

use std::path::PathBuf;

use clap::{Args, Subcommand};
use sunfleet::region::Preset;

use crate::artifacts::OutDir;
use crate::error::CliResult;

#[derive(Debug, Args)]
pub struct PresetArgs {
    #[command(subcommand)]
    pub action: PresetAction,
}

#[derive(Debug, Subcommand)]
pub enum PresetAction {
    /// List bundled presets with their headline statistics.
    List,
    /// Write one preset as a TOML file (plus manifest) into --out.
    Dump {
        /// Preset name: Paris, IleDeFrance, or Kyoto.
        name: String,
        /// Output directory (created if missing).
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

pub fn main(args: &PresetArgs) -> CliResult<()> {
    match &args.action {
        PresetAction::List => {
            for preset in Preset::ALL {
                let p = preset.profile();
                println!(
                    "{:<14} pop {:>10.0}  demand {:>12.3e} kWh/yr  roof {:>10.2e} m²  vehicles {:>9.0}",
                    preset.name(),
                    p.population,
                    p.annual_demand_kwh,
                    p.roof_area_m2,
                    p.n_vehicles,
                );
            }
            Ok(())
        }
        PresetAction::Dump { name, out } => {
            let preset: Preset = name.parse()?;
            let profile = preset.profile();
            let body = profile.to_toml();
            let file_name = format!("{}.toml", preset.name().to_ascii_lowercase());
            let mut dir = OutDir::create(out)?;
            dir.write(&file_name, body.as_bytes())?;
            let parameters = serde_json::json!({ "preset": preset.name() });
            println!("wrote {file_name}, manifest.json to {}", dir.path().display());
            dir.finish("preset dump", parameters, std::collections::BTreeMap::new())
        }
    }
}
