//! Continuous wavelet transform, squared wavelet coherence and its
//! surrogate-based significance test.
//!
//! The analyzing wavelet is the analytic Morlet with center frequency 6.
//! Coherence follows the usual recipe: transform both series, smooth the
//! cross- and auto-spectra in time (scale-matched Gaussian) and in scale
//! (boxcar over ±0.3 octaves), and take the normalized magnitude. Phase
//! comes from the smoothed cross spectrum; with these conventions a series
//! lagging a quarter period shows +π/2.
//!
//! Significance is empirical: red-noise surrogate pairs matching each
//! input's lag-1 autocorrelation are pushed through the identical pipeline,
//! and per-scale 95th percentiles are pooled over surrogates and in-cone
//! times. The pooling uses integer histograms, so the result is bit-stable
//! at any thread count.

use crate::error::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

/// Morlet center frequency.
pub const OMEGA0: f64 = 6.0;

/// Conversion from scale to equivalent Fourier period:
/// `4π / (ω₀ + √(2 + ω₀²))` ≈ 1.0330 for ω₀ = 6.
pub const FOURIER_FACTOR: f64 = 4.0 * PI / (OMEGA0 + 6.164414002968976);

/// Transform length the hourly year is zero-padded to.
pub const DEFAULT_PAD_LEN: usize = 16_384;

/// Fewest surrogate pairs accepted for a significance estimate.
pub const MIN_SURROGATES: usize = 100;

/// Scale-axis resolution, octaves per step.
const DJ: f64 = 1.0 / 8.0;

/// Histogram resolution for the pooled percentile.
const QUANTILE_BINS: usize = 2048;

/// Dyadic period grid from 2 h to 4096 h, eight steps per octave.
pub fn default_periods() -> Vec<f64> {
    let octaves = 11.0; // log2(4096 / 2)
    let steps = (octaves / DJ) as usize; // 88, inclusive end → 89 entries
    (0..=steps).map(|j| 2.0 * 2f64.powf(j as f64 * DJ)).collect()
}

/// Wavelet scale whose response peaks at `period_hours`.
pub fn period_to_scale(period_hours: f64) -> f64 {
    period_hours / FOURIER_FACTOR
}

/// Longest analyzable period at each time step: the cone of influence.
/// Symmetric, largest mid-series, shrinking toward both edges where the
/// padded transform is contaminated.
pub fn coi_periods(n: usize) -> Vec<f64> {
    (0..n)
        .map(|t| {
            let edge_distance = (t as f64 + 0.5).min(n as f64 - 0.5 - t as f64);
            FOURIER_FACTOR * edge_distance / std::f64::consts::SQRT_2
        })
        .collect()
}

fn zscore(x: &[f64]) -> Vec<f64> {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    if var <= 0.0 {
        return vec![0.0; x.len()];
    }
    let sd = var.sqrt();
    x.iter().map(|v| (v - mean) / sd).collect()
}

/// Remove the least-squares line from a series.
pub fn detrend_linear(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n < 2 {
        return x.to_vec();
    }
    let nf = n as f64;
    let t_mean = (nf - 1.0) / 2.0;
    let x_mean = x.iter().sum::<f64>() / nf;
    let mut num = 0.0;
    let mut den = 0.0;
    for (t, &v) in x.iter().enumerate() {
        let dt = t as f64 - t_mean;
        num += dt * (v - x_mean);
        den += dt * dt;
    }
    let slope = if den > 0.0 { num / den } else { 0.0 };
    x.iter()
        .enumerate()
        .map(|(t, &v)| v - x_mean - slope * (t as f64 - t_mean))
        .collect()
}

/// Lag-1 autocorrelation, clamped to `[0, 0.999]` for use as a red-noise
/// model coefficient.
pub fn ar1_coefficient(x: &[f64]) -> f64 {
    if x.len() < 2 {
        return 0.0;
    }
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..x.len() {
        let d = x[i] - mean;
        den += d * d;
        if i + 1 < x.len() {
            num += d * (x[i + 1] - mean);
        }
    }
    if den <= 0.0 {
        return 0.0;
    }
    (num / den).clamp(0.0, 0.999)
}

/// Signed angular frequency of FFT bin `k` for transform length `m`, δt = 1.
fn angular_frequency(k: usize, m: usize) -> f64 {
    if k <= m / 2 {
        2.0 * PI * k as f64 / m as f64
    } else {
        2.0 * PI * (k as f64 - m as f64) / m as f64
    }
}

fn validate_inputs(n: usize, periods: &[f64], pad_len: usize) -> Result<()> {
    if n < 16 {
        return Err(Error::Inconsistent(format!(
            "series of {n} samples is too short for wavelet analysis"
        )));
    }
    if periods.is_empty() {
        return Err(Error::Empty("period grid"));
    }
    if periods.iter().any(|p| !p.is_finite() || *p <= 0.0) {
        return Err(Error::Inconsistent("periods must be positive".into()));
    }
    if periods.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Inconsistent(
            "period grid must be strictly increasing".into(),
        ));
    }
    if pad_len < n {
        return Err(Error::Inconsistent(format!(
            "pad length {pad_len} is shorter than the series ({n})"
        )));
    }
    Ok(())
}

struct FftPair {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    len: usize,
}

impl FftPair {
    fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        FftPair {
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
            len,
        }
    }
}

/// Continuous wavelet transform of `x` at the given scales, one row per
/// scale, each row `x.len()` coefficients. The transform is FFT-based on a
/// zero-padded buffer of `pad_len` samples.
pub fn cwt_morlet(x: &[f64], scales: &[f64], pad_len: usize) -> Result<Vec<Vec<Complex64>>> {
    let as_periods: Vec<f64> = scales.iter().map(|s| s * FOURIER_FACTOR).collect();
    validate_inputs(x.len(), &as_periods, pad_len)?;
    let plans = FftPair::new(pad_len);
    Ok(cwt_rows(x, scales, &plans))
}

fn cwt_rows(x: &[f64], scales: &[f64], plans: &FftPair) -> Vec<Vec<Complex64>> {
    let n = x.len();
    let m = plans.len;
    let mut spectrum = vec![Complex64::new(0.0, 0.0); m];
    for (i, &v) in x.iter().enumerate() {
        spectrum[i] = Complex64::new(v, 0.0);
    }
    plans.forward.process(&mut spectrum);

    let omega: Vec<f64> = (0..m).map(|k| angular_frequency(k, m)).collect();
    let norm_base = PI.powf(-0.25);

    scales
        .par_iter()
        .map(|&s| {
            let gain = norm_base * (2.0 * PI * s).sqrt();
            let mut buf: Vec<Complex64> = (0..m)
                .map(|k| {
                    let w = omega[k];
                    if w > 0.0 {
                        let d = s * w - OMEGA0;
                        spectrum[k] * (gain * (-0.5 * d * d).exp())
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect();
            plans.inverse.process(&mut buf);
            buf.truncate(n);
            let scale_back = 1.0 / m as f64;
            for v in &mut buf {
                *v *= scale_back;
            }
            buf
        })
        .collect()
}

/// Gaussian smoothing along time with kernel width equal to the wavelet
/// scale, computed in the frequency domain on the padded grid.
fn smooth_time(row: &[Complex64], scale: f64, plans: &FftPair) -> Vec<Complex64> {
    let n = row.len();
    let m = plans.len;
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    buf[..n].copy_from_slice(row);
    plans.forward.process(&mut buf);
    for (k, v) in buf.iter_mut().enumerate() {
        let w = angular_frequency(k, m);
        *v *= (-0.5 * (scale * w) * (scale * w)).exp();
    }
    plans.inverse.process(&mut buf);
    buf.truncate(n);
    let scale_back = 1.0 / m as f64;
    for v in &mut buf {
        *v *= scale_back;
    }
    buf
}

/// Boxcar mean across scale rows, ±`halfwidth` rows, truncated at the ends.
fn smooth_scale(rows: &[Vec<Complex64>], halfwidth: usize) -> Vec<Vec<Complex64>> {
    let n_rows = rows.len();
    (0..n_rows)
        .map(|j| {
            let lo = j.saturating_sub(halfwidth);
            let hi = (j + halfwidth).min(n_rows - 1);
            let count = (hi - lo + 1) as f64;
            let n = rows[j].len();
            let mut out = vec![Complex64::new(0.0, 0.0); n];
            for row in &rows[lo..=hi] {
                for (o, v) in out.iter_mut().zip(row) {
                    *o += v;
                }
            }
            for o in &mut out {
                *o /= count;
            }
            out
        })
        .collect()
}

/// Squared wavelet coherence of two equally long series.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceMap {
    /// Equivalent Fourier periods, hours, ascending.
    pub periods: Vec<f64>,
    /// Wavelet scales, `periods / FOURIER_FACTOR`.
    pub scales: Vec<f64>,
    /// `coherence[scale][time]`, each in [0, 1].
    pub coherence: Vec<Vec<f64>>,
    /// Cross-spectrum phase, radians in (−π, π]. Positive: the second
    /// series lags the first.
    pub phase: Vec<Vec<f64>>,
    /// Longest analyzable period per time step.
    pub coi_period: Vec<f64>,
}

impl CoherenceMap {
    /// Whether `(scale_idx, t)` lies inside the cone of influence.
    pub fn in_coi(&self, scale_idx: usize, t: usize) -> bool {
        self.periods[scale_idx] < self.coi_period[t]
    }

    pub fn n_times(&self) -> usize {
        self.coi_period.len()
    }
}

/// [`wavelet_coherence_with`] on the default period grid and pad length.
pub fn wavelet_coherence(x: &[f64], y: &[f64]) -> Result<CoherenceMap> {
    wavelet_coherence_with(x, y, &default_periods(), DEFAULT_PAD_LEN)
}

/// Squared wavelet coherence of `x` and `y` on an explicit period grid.
///
/// Inputs are standardized internally; a constant series transforms to
/// zeros and yields zero coherence rather than NaN.
pub fn wavelet_coherence_with(
    x: &[f64],
    y: &[f64],
    periods: &[f64],
    pad_len: usize,
) -> Result<CoherenceMap> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    validate_inputs(x.len(), periods, pad_len)?;

    let n = x.len();
    let scales: Vec<f64> = periods.iter().map(|&p| period_to_scale(p)).collect();
    let plans = FftPair::new(pad_len);

    let wx = cwt_rows(&zscore(x), &scales, &plans);
    let wy = cwt_rows(&zscore(y), &scales, &plans);

    // Per-scale time smoothing of the scale-normalized spectra.
    let smoothed: Vec<(Vec<Complex64>, Vec<Complex64>, Vec<Complex64>)> = scales
        .par_iter()
        .enumerate()
        .map(|(j, &s)| {
            let inv_s = 1.0 / s;
            let mut pxx = Vec::with_capacity(n);
            let mut pyy = Vec::with_capacity(n);
            let mut pxy = Vec::with_capacity(n);
            for t in 0..n {
                pxx.push(Complex64::new(wx[j][t].norm_sqr() * inv_s, 0.0));
                pyy.push(Complex64::new(wy[j][t].norm_sqr() * inv_s, 0.0));
                pxy.push(wx[j][t] * wy[j][t].conj() * inv_s);
            }
            (
                smooth_time(&pxx, s, &plans),
                smooth_time(&pyy, s, &plans),
                smooth_time(&pxy, s, &plans),
            )
        })
        .collect();

    // Boxcar across scales, ±0.3 octaves.
    let dj = if periods.len() > 1 {
        (periods[periods.len() - 1] / periods[0]).log2() / (periods.len() - 1) as f64
    } else {
        DJ
    };
    let halfwidth = if dj > 0.0 { (0.3 / dj).round() as usize } else { 0 };
    let sxx = smooth_scale(&smoothed.iter().map(|r| r.0.clone()).collect::<Vec<_>>(), halfwidth);
    let syy = smooth_scale(&smoothed.iter().map(|r| r.1.clone()).collect::<Vec<_>>(), halfwidth);
    let sxy = smooth_scale(&smoothed.iter().map(|r| r.2.clone()).collect::<Vec<_>>(), halfwidth);

    let mut coherence = Vec::with_capacity(scales.len());
    let mut phase = Vec::with_capacity(scales.len());
    for j in 0..scales.len() {
        let mut coh_row = Vec::with_capacity(n);
        let mut phase_row = Vec::with_capacity(n);
        for t in 0..n {
            let denom = sxx[j][t].re.max(0.0) * syy[j][t].re.max(0.0);
            let num = sxy[j][t].norm_sqr();
            coh_row.push(if denom > 0.0 {
                (num / denom).clamp(0.0, 1.0)
            } else {
                0.0
            });
            phase_row.push(sxy[j][t].arg());
        }
        coherence.push(coh_row);
        phase.push(phase_row);
    }

    Ok(CoherenceMap {
        periods: periods.to_vec(),
        scales,
        coherence,
        phase,
        coi_period: coi_periods(n),
    })
}

/// Significance-test tuning: surrogate count, RNG seed and test level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignificanceOptions {
    pub n_surrogates: usize,
    pub seed: u64,
    /// Test level; 0.05 marks coherence above the surrogate 95th percentile.
    pub alpha: f64,
}

impl Default for SignificanceOptions {
    fn default() -> Self {
        SignificanceOptions {
            n_surrogates: 300,
            seed: 42,
            alpha: 0.05,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stationary AR(1) draw of length `n` with coefficient `r`.
fn ar1_series(n: usize, r: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let normal = StandardNormal;
    let mut prev: f64 = {
        let e: f64 = normal.sample(rng);
        e / (1.0 - r * r).sqrt()
    };
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(prev);
        let e: f64 = normal.sample(rng);
        prev = r * prev + e;
    }
    out
}

type ScaleHistograms = Vec<Vec<u64>>;

fn empty_histograms(n_scales: usize) -> ScaleHistograms {
    vec![vec![0u64; QUANTILE_BINS]; n_scales]
}

fn merge_histograms(mut a: ScaleHistograms, b: ScaleHistograms) -> ScaleHistograms {
    for (ra, rb) in a.iter_mut().zip(b) {
        for (ca, cb) in ra.iter_mut().zip(rb) {
            *ca += cb;
        }
    }
    a
}

/// Per-scale coherence threshold at level `alpha`, estimated from red-noise
/// surrogate pairs matching the two inputs' lag-1 autocorrelations.
///
/// Only in-cone coefficients enter the pool. Scales never inside the cone
/// get a threshold of 1.0, which no coefficient exceeds. Deterministic for
/// a given seed regardless of thread count: per-surrogate RNG streams are
/// derived by index, and pooling is integer histogram addition.
pub fn significance_thresholds(
    x: &[f64],
    y: &[f64],
    periods: &[f64],
    pad_len: usize,
    opts: &SignificanceOptions,
) -> Result<Vec<f64>> {
    if opts.n_surrogates < MIN_SURROGATES {
        return Err(Error::TooFewSurrogates {
            min: MIN_SURROGATES,
            got: opts.n_surrogates,
        });
    }
    if !(opts.alpha > 0.0 && opts.alpha < 1.0) {
        return Err(Error::OutOfRange {
            field: "alpha",
            value: opts.alpha,
            min: 0.0,
            max: 1.0,
        });
    }
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    validate_inputs(x.len(), periods, pad_len)?;

    let n = x.len();
    let rx = ar1_coefficient(x);
    let ry = ar1_coefficient(y);
    let coi = coi_periods(n);
    // In-cone column ranges per scale; empty for periods the record can
    // never resolve.
    let in_coi_cols: Vec<Vec<usize>> = periods
        .iter()
        .map(|&p| (0..n).filter(|&t| p < coi[t]).collect())
        .collect();

    let pooled: ScaleHistograms = (0..opts.n_surrogates)
        .into_par_iter()
        .map(|idx| -> Result<ScaleHistograms> {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ splitmix64(idx as u64));
            let sx = ar1_series(n, rx, &mut rng);
            let sy = ar1_series(n, ry, &mut rng);
            let map = wavelet_coherence_with(&sx, &sy, periods, pad_len)?;
            let mut hist = empty_histograms(periods.len());
            for (j, cols) in in_coi_cols.iter().enumerate() {
                for &t in cols {
                    let v = map.coherence[j][t];
                    let bin = ((v * QUANTILE_BINS as f64) as usize).min(QUANTILE_BINS - 1);
                    hist[j][bin] += 1;
                }
            }
            Ok(hist)
        })
        .try_reduce(|| empty_histograms(periods.len()), |a, b| Ok(merge_histograms(a, b)))?;

    let thresholds = pooled
        .iter()
        .map(|hist| {
            let total: u64 = hist.iter().sum();
            if total == 0 {
                return 1.0;
            }
            let target = (1.0 - opts.alpha) * total as f64;
            let mut cum = 0u64;
            for (b, &count) in hist.iter().enumerate() {
                cum += count;
                if cum as f64 >= target {
                    return (b + 1) as f64 / QUANTILE_BINS as f64;
                }
            }
            1.0
        })
        .collect();
    Ok(thresholds)
}

/// `mask[scale][time]`: coherence strictly above the scale's threshold.
pub fn significance_mask(map: &CoherenceMap, thresholds: &[f64]) -> Vec<Vec<bool>> {
    map.coherence
        .iter()
        .zip(thresholds)
        .map(|(row, &thr)| row.iter().map(|&c| c > thr).collect())
        .collect()
}
