//! `sunfleet coherence` — squared wavelet coherence, phase, and a
//! surrogate-tested significance mask for two hourly series, exported as
//! plot-ready CSV grids plus the cone-of-influence vector.

use std::path::PathBuf;

use clap::Args;
use sunfleet::coherence::{
    default_periods, detrend_linear, significance_mask, significance_thresholds,
    wavelet_coherence_with, SignificanceOptions, DEFAULT_PAD_LEN,
};

use crate::artifacts::{InputRecord, OutDir};
use crate::error::{CliError, CliResult};
use crate::inputs::read_series;

#[derive(Debug, Args)]
pub struct CoherenceArgs {
    /// First series CSV: one value per line or `index,value` rows.
    #[arg(long)]
    pub x: PathBuf,

    /// Second series CSV, same length as the first.
    #[arg(long)]
    pub y: PathBuf,

    /// RNG seed for the surrogate ensemble.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    /// Number of AR(1) surrogate pairs behind the significance threshold.
    #[arg(long, default_value_t = 300)]
    pub surrogates: usize,

    /// Significance level; 0.05 flags coherence above the surrogate 95th
    /// percentile.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,

    /// Remove a least-squares linear trend from both series first.
    #[arg(long)]
    pub detrend: bool,

    /// Drop periods shorter than this many hours from the default grid.
    #[arg(long)]
    pub min_period: Option<f64>,

    /// Drop periods longer than this many hours from the default grid.
    #[arg(long)]
    pub max_period: Option<f64>,

    /// FFT padding length, a power of two ≥ the series length
    /// (default: enough for the series and the default grid).
    #[arg(long)]
    pub pad: Option<usize>,

    /// Output directory (created if missing).
    #[arg(long)]
    pub out: PathBuf,
}

pub fn main(args: &CoherenceArgs) -> CliResult<()> {
    let mut inputs = std::collections::BTreeMap::new();
    inputs.insert("x".to_string(), InputRecord::file(&args.x)?);
    inputs.insert("y".to_string(), InputRecord::file(&args.y)?);
    let mut x = read_series(&args.x)?;
    let mut y = read_series(&args.y)?;
    if x.len() != y.len() {
        return Err(CliError::Validation(format!(
            "series lengths differ: {} has {}, {} has {}",
            args.x.display(),
            x.len(),
            args.y.display(),
            y.len()
        )));
    }
    if args.detrend {
        x = detrend_linear(&x);
        y = detrend_linear(&y);
    }

    let periods: Vec<f64> = default_periods()
        .into_iter()
        .filter(|p| {
            args.min_period.map_or(true, |lo| *p >= lo)
                && args.max_period.map_or(true, |hi| *p <= hi)
        })
        .collect();
    if periods.is_empty() {
        return Err(CliError::Validation(
            "period bounds leave an empty analysis grid".to_string(),
        ));
    }

    let pad = match args.pad {
        Some(p) => {
            if !p.is_power_of_two() || p < x.len() {
                return Err(CliError::Validation(format!(
                    "--pad {p} must be a power of two ≥ the series length {}",
                    x.len()
                )));
            }
            p
        }
        None => DEFAULT_PAD_LEN.max(x.len().next_power_of_two()),
    };

    let map = wavelet_coherence_with(&x, &y, &periods, pad)?;
    let opts = SignificanceOptions {
        n_surrogates: args.surrogates,
        seed: args.seed,
        alpha: args.alpha,
    };
    let thresholds = significance_thresholds(&x, &y, &periods, pad, &opts)?;
    let mask = significance_mask(&map, &thresholds);

    let n = map.n_times();
    let mut out = OutDir::create(&args.out)?;
    let header = {
        let mut h = String::from("period_h");
        for t in 0..n {
            h.push_str(&format!(",h{t}"));
        }
        h.push('\n');
        h
    };

    let mut coh = String::with_capacity(periods.len() * n * 20);
    let mut phase = String::with_capacity(periods.len() * n * 20);
    let mut mask_csv = String::with_capacity(periods.len() * n * 2 + n * 4);
    coh.push_str(&header);
    phase.push_str(&header);
    mask_csv.push_str(&header);
    for (j, period) in map.periods.iter().enumerate() {
        coh.push_str(&period.to_string());
        phase.push_str(&period.to_string());
        mask_csv.push_str(&period.to_string());
        for t in 0..n {
            coh.push_str(&format!(",{}", map.coherence[j][t]));
            phase.push_str(&format!(",{}", map.phase[j][t]));
            mask_csv.push_str(if mask[j][t] { ",1" } else { ",0" });
        }
        coh.push('\n');
        phase.push('\n');
        mask_csv.push('\n');
    }
    out.write("coherence.csv", coh.as_bytes())?;
    out.write("phase.csv", phase.as_bytes())?;
    out.write("mask.csv", mask_csv.as_bytes())?;

    let mut coi = String::from("hour,coi_period_h\n");
    for (t, p) in map.coi_period.iter().enumerate() {
        coi.push_str(&format!("{t},{p}\n"));
    }
    out.write("coi.csv", coi.as_bytes())?;

    let mut in_cone = 0usize;
    let mut flagged = 0usize;
    for j in 0..map.periods.len() {
        for t in 0..n {
            if map.in_coi(j, t) {
                in_cone += 1;
                if mask[j][t] {
                    flagged += 1;
                }
            }
        }
    }
    let parameters = serde_json::json!({
        "n_samples": n,
        "periods": map.periods,
        "pad": pad,
        "seed": args.seed,
        "surrogates": args.surrogates,
        "alpha": args.alpha,
        "detrend": args.detrend,
        "significance_thresholds": thresholds,
    });
    println!(
        "wrote coherence.csv, phase.csv, mask.csv, coi.csv, manifest.json to {}",
        out.path().display()
    );
    println!(
        "{} samples × {} periods; {:.1} % of the cone of influence is significant at alpha {}",
        n,
        map.periods.len(),
        100.0 * flagged as f64 / in_cone.max(1) as f64,
        args.alpha
    );
    out.finish("coherence", parameters, inputs)
}
