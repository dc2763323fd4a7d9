//! Long-time attractor classification from a saved trajectory.
//!
//! The decision tree works on the post-transient window: steady states
//! split by spatial variance, oscillatory states by mode content, one
//! against two fundamental frequencies. Quasi-periodicity is detected
//! primarily through amplitude modulation of the dominant spatial
//! mode's envelope (two-peak detection alone is fragile at moderate
//! run lengths), with a sideband test on the probe spectrum as backup.

use super::Trajectory;
use crate::error::{Error, Result};
use num_complex::Complex64;
use rustfft::FftPlanner;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AttractorClass {
    ConstantSteady,
    NonconstantSteady,
    HomogeneousPeriodic,
    InhomogeneousPeriodic,
    InhomogeneousQuasiPeriodic,
    Unclassified,
}

impl std::fmt::Display for AttractorClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            AttractorClass::ConstantSteady => "constant-steady",
            AttractorClass::NonconstantSteady => "nonconstant-steady",
            AttractorClass::HomogeneousPeriodic => "homogeneous-periodic",
            AttractorClass::InhomogeneousPeriodic => "inhomogeneous-periodic",
            AttractorClass::InhomogeneousQuasiPeriodic => "inhomogeneous-quasi-periodic",
            AttractorClass::Unclassified => "unclassified",
        };
        f.write_str(s)
    }
}

impl AttractorClass {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "constant-steady" => AttractorClass::ConstantSteady,
            "nonconstant-steady" => AttractorClass::NonconstantSteady,
            "homogeneous-periodic" => AttractorClass::HomogeneousPeriodic,
            "inhomogeneous-periodic" => AttractorClass::InhomogeneousPeriodic,
            "inhomogeneous-quasi-periodic" => AttractorClass::InhomogeneousQuasiPeriodic,
            "unclassified" => AttractorClass::Unclassified,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ClassifierTolerances {
    /// Temporal-variance threshold separating steady from oscillatory.
    pub eps_temporal: f64,
    /// Spatial-variance threshold separating constant from patterned.
    pub eps_spatial: f64,
    /// Mode-amplitude threshold below which a mode counts as absent.
    pub eps_mode: f64,
    /// Fraction of the run discarded before classification.
    pub transient_frac: f64,
    /// Envelope spectral peak over noise floor for the modulation test.
    pub envelope_factor: f64,
    /// Largest denominator tried when testing frequency ratios for
    /// rationality.
    pub max_denominator: u32,
    pub min_window_samples: usize,
    /// Smallest relative envelope modulation depth that counts.
    pub depth_min: f64,
    /// Modulation depth accepted outright (slow, deep modulation shows
    /// very few cycles inside the window).
    pub depth_large: f64,
    /// Late-window over early-window modulation ratio below which the
    /// modulation is treated as a decaying transient.
    pub persistence_min: f64,
}

impl Default for ClassifierTolerances {
    fn default() -> Self {
        Self {
            eps_temporal: 1e-6,
            eps_spatial: 1e-6,
            eps_mode: 1e-4,
            transient_frac: 0.6,
            envelope_factor: 10.0,
            max_denominator: 10,
            min_window_samples: 64,
            depth_min: 0.05,
            depth_large: 0.4,
            persistence_min: 0.6,
        }
    }
}

/// Classification verdict plus the measurements behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassifierReport {
    pub class: AttractorClass,
    pub temporal_variance: f64,
    pub spatial_variance: f64,
    pub higher_mode_max: f64,
    pub dominant_mode: Option<usize>,
    pub envelope_depth: f64,
    pub envelope_crossings: usize,
    pub envelope_persistence: f64,
    pub envelope_spectral_ratio: f64,
    pub fundamental_frequencies: Vec<f64>,
}

pub fn classify_attractor(traj: &Trajectory, tol: &ClassifierTolerances) -> Result<AttractorClass> {
    classify_report(traj, tol).map(|r| r.class)
}

pub fn classify_report(traj: &Trajectory, tol: &ClassifierTolerances) -> Result<ClassifierReport> {
    let cutoff = tol.transient_frac * traj.t_end;
    let start = traj
        .times
        .iter()
        .position(|&t| t >= cutoff)
        .unwrap_or(traj.times.len());
    let n = traj.times.len() - start;
    if n < tol.min_window_samples {
        return Err(Error::InsufficientData(format!(
            "window holds {n} samples, need {}",
            tol.min_window_samples
        )));
    }

    let temporal_variance = traj
        .probes
        .iter()
        .flat_map(|series| {
            let u: Vec<f64> = series[start..].iter().map(|p| p.0).collect();
            let v: Vec<f64> = series[start..].iter().map(|p| p.1).collect();
            [variance(&u), variance(&v)]
        })
        .fold(0.0, f64::max);

    let last = traj.snapshots.last().expect("non-empty trajectory");
    let spatial_variance = variance(&last.u).max(variance(&last.v));

    let n_modes = traj.mode_amp_u[0].len();
    let mut higher_mode_max = 0.0f64;
    let mut dominant_mode = None;
    let mut dominant_mean = 0.0;
    for mode in 1..n_modes {
        let mut peak = 0.0f64;
        let mut mean = 0.0;
        for k in start..traj.times.len() {
            let a = traj.mode_amp_u[k][mode].abs();
            peak = peak.max(a);
            mean += a;
        }
        mean /= n as f64;
        higher_mode_max = higher_mode_max.max(peak);
        if mean > dominant_mean {
            dominant_mean = mean;
            dominant_mode = Some(mode);
        }
    }

    let mut report = ClassifierReport {
        class: AttractorClass::Unclassified,
        temporal_variance,
        spatial_variance,
        higher_mode_max,
        dominant_mode,
        envelope_depth: 0.0,
        envelope_crossings: 0,
        envelope_persistence: 0.0,
        envelope_spectral_ratio: 0.0,
        fundamental_frequencies: Vec::new(),
    };

    if temporal_variance < tol.eps_temporal {
        report.class = if spatial_variance < tol.eps_spatial {
            AttractorClass::ConstantSteady
        } else {
            AttractorClass::NonconstantSteady
        };
        return Ok(report);
    }

    if higher_mode_max < tol.eps_mode {
        report.class = AttractorClass::HomogeneousPeriodic;
        return Ok(report);
    }

    let dt_sample = traj.times[start + 1] - traj.times[start];
    if let Some(mode) = dominant_mode {
        let series: Vec<f64> = (start..traj.times.len())
            .map(|k| traj.mode_amp_u[k][mode])
            .collect();
        if envelope_modulated(&series, dt_sample, tol, &mut report) {
            report.class = AttractorClass::InhomogeneousQuasiPeriodic;
            return Ok(report);
        }
    }

    // Frequency census of the first probe.
    let probe_u: Vec<f64> = traj.probes[0][start..].iter().map(|p| p.0).collect();
    match frequency_census(&probe_u, dt_sample, tol) {
        FrequencyCensus::NoPeaks => report.class = AttractorClass::Unclassified,
        FrequencyCensus::SingleFundamental(f1) => {
            report.fundamental_frequencies = vec![f1];
            report.class = AttractorClass::InhomogeneousPeriodic;
        }
        FrequencyCensus::Incommensurate(f1, f2) => {
            report.fundamental_frequencies = vec![f1, f2];
            report.class = AttractorClass::InhomogeneousQuasiPeriodic;
        }
        FrequencyCensus::Ambiguous => report.class = AttractorClass::Unclassified,
    }
    Ok(report)
}

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

fn variance(x: &[f64]) -> f64 {
    let m = mean(x);
    x.iter().map(|&v| (v - m) * (v - m)).sum::<f64>() / x.len() as f64
}

fn rms(x: &[f64]) -> f64 {
    (x.iter().map(|&v| v * v).sum::<f64>() / x.len() as f64).sqrt()
}

/// Magnitude envelope of a real series via the analytic signal.
fn hilbert_envelope(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    // Keep DC and Nyquist, double positive frequencies, drop negative.
    for (k, val) in buf.iter_mut().enumerate() {
        if k == 0 || (n.is_multiple_of(2) && k == n / 2) {
            // unchanged
        } else if k < n.div_ceil(2) {
            *val *= 2.0;
        } else {
            *val = Complex64::new(0.0, 0.0);
        }
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    buf.iter().map(|z| z.norm() / n as f64).collect()
}

fn detrend(x: &mut [f64]) {
    let n = x.len() as f64;
    let tm = (n - 1.0) / 2.0;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let ym = mean(x);
    for (i, v) in x.iter().enumerate() {
        let d = i as f64 - tm;
        sxy += d * (v - ym);
        sxx += d * d;
    }
    let slope = sxy / sxx;
    for (i, v) in x.iter_mut().enumerate() {
        *v -= ym + slope * (i as f64 - tm);
    }
}

/// Tests whether the dominant-mode amplitude carries persistent
/// secondary modulation slower than its own carrier. The envelope of a
/// harmonic-rich but plain-periodic signal oscillates at the carrier
/// frequency itself, so only the sub-carrier band of the envelope
/// counts as modulation. Fills the envelope fields of the report.
fn envelope_modulated(
    series: &[f64],
    dt_sample: f64,
    tol: &ClassifierTolerances,
    report: &mut ClassifierReport,
) -> bool {
    let mut centered: Vec<f64> = series.to_vec();
    let m = mean(&centered);
    for v in centered.iter_mut() {
        *v -= m;
    }
    if rms(&centered) < 1e-9 {
        return false;
    }

    // Carrier frequency of the mode amplitude itself. The slow
    // modulation can dominate the raw spectrum, so the carrier search
    // skips the lowest bins.
    let mags_c = hann_spectrum(&centered);
    let df_c = 1.0 / (centered.len() as f64 * dt_sample);
    let k_min = 5.min(mags_c.len().saturating_sub(1)).max(1);
    let carrier_bin = (k_min..mags_c.len())
        .max_by(|&i, &j| mags_c[i].partial_cmp(&mags_c[j]).unwrap())
        .unwrap_or(k_min);
    let f_carrier = carrier_bin as f64 * df_c;

    let env_full = hilbert_envelope(&centered);
    // Edge effects of the analytic signal: drop 10% on both sides.
    let trim = env_full.len() / 10;
    let env = &env_full[trim..env_full.len() - trim];
    if env.len() < 16 {
        return false;
    }
    let env_mean = mean(env);
    if env_mean < 1e-12 {
        return false;
    }

    let mut env_d = env.to_vec();
    detrend(&mut env_d);

    // Keep only envelope content strictly below the carrier.
    let n = env_d.len();
    let df_env = 1.0 / (n as f64 * dt_sample);
    let cutoff_hz = 0.6 * f_carrier;
    let mut buf: Vec<Complex64> = env_d.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    let mut peak = 0.0f64;
    let all_mags: Vec<f64> = buf[1..n / 2 + 1].iter().map(|z| z.norm()).collect();
    #[allow(clippy::needless_range_loop)]
    for k in 0..n {
        let f = k.min(n - k) as f64 * df_env;
        if k == 0 || f >= cutoff_hz {
            buf[k] = Complex64::new(0.0, 0.0);
        } else if k <= n / 2 {
            peak = peak.max(buf[k].norm());
        }
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let slow_env: Vec<f64> = buf.iter().map(|z| z.re / n as f64).collect();

    let depth = (slow_env.iter().cloned().fold(f64::MIN, f64::max)
        - slow_env.iter().cloned().fold(f64::MAX, f64::min))
        / env_mean;
    let crossings = slow_env
        .windows(2)
        .filter(|w| w[0].signum() != w[1].signum())
        .count();
    let half = slow_env.len() / 2;
    let (early, late) = (rms(&slow_env[..half]), rms(&slow_env[half..]));
    let persistence = if early > 0.0 { late / early } else { 1.0 };
    let floor = median(&all_mags);
    let ratio = if floor > 0.0 { peak / floor } else { 0.0 };

    report.envelope_depth = depth;
    report.envelope_crossings = crossings;
    report.envelope_persistence = persistence;
    report.envelope_spectral_ratio = ratio;

    // Deep slow modulation shows few cycles in the window; moderate
    // modulation must be spectrally prominent and persistent (a decaying
    // ring-down toward a plain cycle fails the persistence bound).
    (depth > tol.depth_large && crossings >= 2)
        || (depth > tol.depth_min
            && crossings >= 3
            && persistence >= tol.persistence_min
            && ratio > tol.envelope_factor)
}

fn hann_spectrum(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut buf: Vec<Complex64> = x
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let w = 0.5 * (1.0 - (2.0 * std::f64::consts::PI * i as f64 / (n - 1) as f64).cos());
            Complex64::new(v * w, 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    buf[..n / 2 + 1].iter().map(|z| z.norm()).collect()
}

fn median(x: &[f64]) -> f64 {
    let mut v = x.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v[v.len() / 2]
}

enum FrequencyCensus {
    NoPeaks,
    SingleFundamental(f64),
    Incommensurate(f64, f64),
    Ambiguous,
}

/// Locates the major spectral peaks of the series and checks whether
/// they all sit on integer multiples of the dominant frequency.
fn frequency_census(series: &[f64], dt_sample: f64, tol: &ClassifierTolerances) -> FrequencyCensus {
    let mut centered = series.to_vec();
    let m = mean(&centered);
    for v in centered.iter_mut() {
        *v -= m;
    }
    let mags = hann_spectrum(&centered);
    let n = centered.len();
    let df = 1.0 / (n as f64 * dt_sample);

    let top = mags.iter().cloned().fold(0.0, f64::max);
    let floor = median(&mags[1..]);
    let threshold = (10.0 * floor).max(1e-3 * top);
    if top <= threshold || top == 0.0 {
        return FrequencyCensus::NoPeaks;
    }

    // Local maxima above the threshold, sub-bin refined.
    let mut peaks: Vec<(f64, f64)> = Vec::new();
    for k in 2..mags.len() - 1 {
        if mags[k] > threshold && mags[k] >= mags[k - 1] && mags[k] >= mags[k + 1] {
            let delta = parabolic_offset(mags[k - 1], mags[k], mags[k + 1]);
            peaks.push(((k as f64 + delta) * df, mags[k]));
        }
    }
    if peaks.is_empty() {
        return FrequencyCensus::NoPeaks;
    }
    let &(f1, _) = peaks
        .iter()
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .unwrap();

    let resolution = 1.5 * df / f1;
    let mut all_harmonic = true;
    for &(f, _) in &peaks {
        let ratio = f / f1;
        if (ratio - ratio.round()).abs() <= resolution * ratio.max(1.0) {
            continue;
        }
        all_harmonic = false;
        let mut rational = false;
        for q in 2..=tol.max_denominator {
            let scaled = ratio * q as f64;
            if (scaled - scaled.round()).abs() <= resolution * q as f64 * ratio.max(1.0) {
                rational = true;
                break;
            }
        }
        if !rational {
            return FrequencyCensus::Incommensurate(f1, f);
        }
    }
    if all_harmonic {
        FrequencyCensus::SingleFundamental(f1)
    } else {
        FrequencyCensus::Ambiguous
    }
}

/// Sub-bin offset of a spectral peak from its three-point neighborhood.
fn parabolic_offset(left: f64, center: f64, right: f64) -> f64 {
    let den = left - 2.0 * center + right;
    if den == 0.0 {
        0.0
    } else {
        0.5 * (left - right) / den
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdsim::{Field, Grid, Trajectory};

    /// Synthetic trajectory: probe and mode-1 series given by closures,
    /// spatial profile given by an amplitude.
    fn synthetic(
        probe: impl Fn(f64) -> f64,
        mode1: impl Fn(f64) -> f64,
        spatial_amp: f64,
    ) -> Trajectory {
        synthetic_n(3000, probe, mode1, spatial_amp)
    }

    fn synthetic_n(
        samples: usize,
        probe: impl Fn(f64) -> f64,
        mode1: impl Fn(f64) -> f64,
        spatial_amp: f64,
    ) -> Trajectory {
        let grid = Grid::new(1.6, 64).unwrap();
        let t_end = samples as f64;
        let times: Vec<f64> = (0..=samples).map(|k| k as f64).collect();
        let snapshots: Vec<Field> = times
            .iter()
            .map(|_| Field {
                u: (0..64)
                    .map(|j| 0.4 + spatial_amp * (std::f64::consts::PI * j as f64 / 63.0).cos())
                    .collect(),
                v: vec![0.4; 64],
            })
            .collect();
        let probes = vec![times.iter().map(|&t| (probe(t), probe(t))).collect()];
        let mode_amp_u: Vec<Vec<f64>> = times
            .iter()
            .map(|&t| vec![0.4, mode1(t), 0.0, 0.0])
            .collect();
        let mode_amp_v = mode_amp_u.clone();
        Trajectory {
            grid,
            t_end,
            times,
            snapshots,
            probe_x: vec![0.0],
            probes,
            mode_amp_u,
            mode_amp_v,
        }
    }

    #[test]
    fn constant_trajectory() {
        let traj = synthetic(|_| 0.4, |_| 0.0, 0.0);
        let c = classify_attractor(&traj, &ClassifierTolerances::default()).unwrap();
        assert_eq!(c, AttractorClass::ConstantSteady);
    }

    #[test]
    fn patterned_steady_trajectory() {
        let traj = synthetic(|_| 0.4, |_| 0.05, 0.05);
        let c = classify_attractor(&traj, &ClassifierTolerances::default()).unwrap();
        assert_eq!(c, AttractorClass::NonconstantSteady);
    }

    #[test]
    fn homogeneous_oscillation() {
        let traj = synthetic(|t| 0.4 + 0.1 * (0.27 * t).sin(), |_| 0.0, 0.0);
        let c = classify_attractor(&traj, &ClassifierTolerances::default()).unwrap();
        assert_eq!(c, AttractorClass::HomogeneousPeriodic);
    }

    #[test]
    fn single_frequency_pattern() {
        let traj = synthetic(
            |t| 0.4 + 0.1 * (0.27 * t).sin() + 0.03 * (0.54 * t).cos(),
            |t| 0.05 + 0.01 * (0.27 * t).sin(),
            0.05,
        );
        let c = classify_attractor(&traj, &ClassifierTolerances::default()).unwrap();
        assert_eq!(c, AttractorClass::InhomogeneousPeriodic);
    }

    #[test]
    fn modulated_pattern_is_quasi_periodic() {
        // Carrier at 0.27 rad/s, envelope at an incommensurate 0.027.
        let traj = synthetic(
            |t| 0.4 + 0.1 * (0.27 * t).sin(),
            |t| 0.05 + (0.012 + 0.008 * (0.0271 * t).sin()) * (0.27 * t).sin(),
            0.05,
        );
        let c = classify_attractor(&traj, &ClassifierTolerances::default()).unwrap();
        assert_eq!(c, AttractorClass::InhomogeneousQuasiPeriodic);
    }

    #[test]
    fn two_incommensurate_probe_frequencies() {
        // No mode modulation, but the probe carries sqrt(2)-related
        // frequencies; the census backup must fire. Separating sqrt(2)
        // from nearby small-denominator rationals needs a long window.
        let traj = synthetic_n(
            12000,
            |t| 0.4 + 0.1 * (0.27 * t).sin() + 0.05 * (0.27 * std::f64::consts::SQRT_2 * t).sin(),
            |t| 0.05 + 0.01 * (0.27 * t).sin(),
            0.05,
        );
        let c = classify_attractor(&traj, &ClassifierTolerances::default()).unwrap();
        assert_eq!(c, AttractorClass::InhomogeneousQuasiPeriodic);
    }

    #[test]
    fn short_window_is_rejected() {
        let mut traj = synthetic(|_| 0.4, |_| 0.0, 0.0);
        traj.times.truncate(40);
        traj.snapshots.truncate(40);
        traj.probes[0].truncate(40);
        traj.mode_amp_u.truncate(40);
        traj.mode_amp_v.truncate(40);
        traj.t_end = 39.0;
        assert!(matches!(
            classify_attractor(&traj, &ClassifierTolerances::default()),
            Err(Error::InsufficientData(_))
        ));
    }
}
