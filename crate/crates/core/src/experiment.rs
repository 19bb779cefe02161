//! End-to-end runs: event generation, screen histograms, fringe metrics and
//! the goodness-of-fit test against the analytic expectation.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::chi2_table::CHI2_CRIT_99;
use crate::error::{Error, Result};
use crate::pf::{validate_slit_width, BeamSpec, SlitGeometry, SlitIndex, ELECTRON_MASS, NEON20_MASS};
use crate::quadrature::simpson;
use crate::rng::RngStream;
use crate::sampler::{build_cdf, sample_launch, sample_theta, CdfTable, DEFAULT_CDF_RESOLUTION};
use crate::trajectory::{offset_to_theta, propagate, screen_offset, DetectionEvent, Launch, PropagationMode};
use crate::wavefield::{AngularDensityModel, DensityMode, FieldParams};

pub const DEFAULT_BINS: usize = 100;
pub const MIN_BINS: usize = 10;
/// Bins with fewer expected counts are pooled with their neighbours.
pub const POOLING_THRESHOLD: f64 = 5.0;
/// Below this many particles the chi-square verdict is not reported.
pub const MIN_PARTICLES_FOR_VERDICT: u64 = 30;
pub const DEFAULT_PARTICLES: u64 = 5000;
/// Peaks lower than this fraction of the tallest one are not fringe peaks.
pub const PEAK_PROMINENCE: f64 = 0.05;

const SCREEN_GRID_POINTS: usize = (1 << 16) + 1;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub beam: BeamSpec,
    pub geometry: SlitGeometry,
    pub field: FieldParams,
    pub theta_max: f64,
    pub n_particles: u64,
    pub seed: u64,
    pub density_mode: DensityMode,
    pub propagation_mode: PropagationMode,
    pub bins: usize,
    pub cdf_resolution: usize,
}

impl RunConfig {
    /// Electron two-slit set-up (λ₀ = 5 pm, d = 2 µm, a = 0.5 µm,
    /// L = 0.35 m, A₀ = 10, |θ| ≤ π/50000).
    pub fn electron() -> Self {
        let beam = BeamSpec::new(5e-12, ELECTRON_MASS, 10.0).expect("valid electron beam");
        Self::with_defaults(
            beam,
            SlitGeometry::symmetric(0.5e-6, 2e-6, 0.35).expect("valid electron slits"),
            PI / 50000.0,
        )
    }

    /// Ultracold neon set-up (λ₀ = 18 nm, d = 6 µm, a = 2 µm, L = 0.113 m,
    /// A₀ = 1, |θ| ≤ π/200).
    pub fn neon() -> Self {
        let beam = BeamSpec::new(1.8e-8, NEON20_MASS, 1.0).expect("valid neon beam");
        Self::with_defaults(
            beam,
            SlitGeometry::symmetric(2e-6, 6e-6, 0.113).expect("valid neon slits"),
            PI / 200.0,
        )
    }

    pub fn with_defaults(beam: BeamSpec, geometry: SlitGeometry, theta_max: f64) -> Self {
        RunConfig {
            beam,
            geometry,
            field: FieldParams::default_for(&beam),
            theta_max,
            n_particles: DEFAULT_PARTICLES,
            seed: 1,
            density_mode: DensityMode::Approximate,
            propagation_mode: PropagationMode::Paper,
            bins: DEFAULT_BINS,
            cdf_resolution: DEFAULT_CDF_RESOLUTION,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.beam.validate().map_err(|e| Error::Config(e.to_string()))?;
        self.geometry.validate().map_err(|e| Error::Config(e.to_string()))?;
        FieldParams::new(self.field.c_f, self.field.epsilon).map_err(|e| Error::Config(e.to_string()))?;
        if self.n_particles < 1 {
            return Err(Error::Config("n_particles must be at least 1".into()));
        }
        if self.bins < MIN_BINS {
            return Err(Error::Config(format!(
                "bins must be at least {MIN_BINS}, got {}",
                self.bins
            )));
        }
        let limit_ok = match self.propagation_mode {
            PropagationMode::Paper => self.theta_max <= FRAC_PI_2,
            PropagationMode::Geometric => self.theta_max < FRAC_PI_2,
        };
        if !(self.theta_max > 0.0 && limit_ok) {
            return Err(Error::Config(format!("theta_max {} out of range", self.theta_max)));
        }
        let check = validate_slit_width(&self.beam, &self.geometry);
        if !check.passes {
            return Err(Error::Config(format!(
                "slit width {} m is below the uncertainty bound 3*lambda0/(2*pi) (ratio {:.6})",
                self.geometry.width, check.margin
            )));
        }
        Ok(())
    }

    pub fn model(&self) -> Result<AngularDensityModel> {
        AngularDensityModel::new(self.beam, self.geometry, self.field, self.theta_max, self.density_mode)
    }

    /// Stable 64-bit FNV-1a digest of the canonical physical and analysis
    /// parameters. Seed and particle count are excluded; they are recorded
    /// separately wherever events are stored.
    pub fn digest(&self) -> String {
        let canonical = serde_json::json!({
            "lambda0_m": self.beam.lambda0,
            "mass_kg": self.beam.mass,
            "a0": self.beam.a0,
            "c_f_m": self.field.c_f,
            "epsilon_s": self.field.epsilon,
            "slit_width_m": self.geometry.width,
            "slit_y1_m": self.geometry.y1,
            "slit_y2_m": self.geometry.y2,
            "x0_m": self.geometry.x0,
            "z0_m": self.geometry.z0,
            "screen_distance_m": self.geometry.screen_distance,
            "theta_max_rad": self.theta_max,
            "bins": self.bins,
            "cdf_resolution": self.cdf_resolution,
            "density_mode": self.density_mode,
            "propagation_mode": self.propagation_mode,
        });
        format!("{:016x}", fnv1a64(canonical.to_string().as_bytes()))
    }
}

pub(crate) fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Analytic distribution of detected positions: the angular density pushed
/// through the propagation rule and convolved with the uniform launch
/// position of each slit.
#[derive(Debug, Clone)]
pub struct ScreenDistribution {
    beam: BeamSpec,
    geometry: SlitGeometry,
    mode: PropagationMode,
    theta_max: f64,
    thetas: Vec<f64>,
    /// Φ(θ) = ∫_{−θmax}^{θ} ρ, rescaled to end at 1.
    cumulative: Vec<f64>,
    /// P(y_det ≤ y) on a uniform grid over the support, for fast lookups.
    screen_grid: (f64, f64, Vec<f64>),
}

impl ScreenDistribution {
    pub fn new(model: &AngularDensityModel, mode: PropagationMode) -> Result<Self> {
        let g = model.geometry();
        let tm = model.theta_max();
        let oscillations = (g.separation + g.width) * tm.sin() / model.beam().lambda0;
        let nodes = ((2048.0 * oscillations).max(1.0) as usize)
            .next_power_of_two()
            .clamp(1 << 18, 1 << 22)
            + 1;
        let step = 2.0 * tm / (nodes - 1) as f64;
        let thetas: Vec<f64> = (0..nodes)
            .map(|i| if i + 1 == nodes { tm } else { -tm + i as f64 * step })
            .collect();
        let values = thetas.iter().map(|&t| model.density(t)).collect::<Result<Vec<f64>>>()?;
        let mut cumulative = Vec::with_capacity(nodes);
        let mut acc = 0.0;
        cumulative.push(0.0);
        for i in 1..nodes {
            acc += 0.5 * (values[i - 1] + values[i]) * (thetas[i] - thetas[i - 1]);
            cumulative.push(acc);
        }
        for c in cumulative.iter_mut() {
            *c /= acc;
        }
        let mut screen = ScreenDistribution {
            beam: *model.beam(),
            geometry: *g,
            mode,
            theta_max: tm,
            thetas,
            cumulative,
            screen_grid: (0.0, 0.0, Vec::new()),
        };
        let (lo, hi) = screen.support()?;
        let n = SCREEN_GRID_POINTS;
        let dy = (hi - lo) / (n - 1) as f64;
        let dens: Vec<f64> = (0..n).map(|i| screen.density(lo + i as f64 * dy)).collect();
        let mut grid = Vec::with_capacity(n);
        let mut acc = 0.0;
        grid.push(0.0);
        for i in 1..n {
            acc += 0.5 * (dens[i - 1] + dens[i]) * dy;
            grid.push(acc);
        }
        for c in grid.iter_mut() {
            *c /= acc;
        }
        screen.screen_grid = (lo, hi, grid);
        Ok(screen)
    }

    /// Tabulated P(y_det ≤ y); cheaper and slightly coarser than [`Self::cdf`].
    pub fn cdf_fast(&self, y: f64) -> f64 {
        let (lo, hi, ref grid) = self.screen_grid;
        if y <= lo {
            return 0.0;
        }
        if y >= hi {
            return 1.0;
        }
        let n = grid.len();
        let pos = (y - lo) / (hi - lo) * (n - 1) as f64;
        let i = (pos.floor() as usize).min(n - 2);
        let frac = pos - i as f64;
        grid[i] + frac * (grid[i + 1] - grid[i])
    }

    /// Φ at angle `theta`.
    pub fn angle_cdf(&self, theta: f64) -> f64 {
        let n = self.thetas.len();
        if theta <= -self.theta_max {
            return 0.0;
        }
        if theta >= self.theta_max {
            return 1.0;
        }
        let pos = (theta + self.theta_max) / (2.0 * self.theta_max) * (n - 1) as f64;
        let i = (pos.floor() as usize).min(n - 2);
        let frac = pos - i as f64;
        self.cumulative[i] + frac * (self.cumulative[i + 1] - self.cumulative[i])
    }

    /// P(offset ≤ u) for the screen displacement `y_det − y(ε)`.
    fn offset_cdf(&self, u: f64) -> f64 {
        self.angle_cdf(offset_to_theta(u, &self.geometry, &self.beam, self.mode))
    }

    fn centres(&self) -> [f64; 2] {
        [
            self.geometry.center(SlitIndex::First),
            self.geometry.center(SlitIndex::Second),
        ]
    }

    /// Support `[lo, hi]` of the detected position.
    pub fn support(&self) -> Result<(f64, f64)> {
        let reach = screen_offset(self.theta_max, &self.geometry, &self.beam, self.mode)?;
        let half = self.geometry.width / 2.0;
        let [c1, c2] = self.centres();
        Ok((c1.min(c2) - half - reach, c1.max(c2) + half + reach))
    }

    /// Largest displacement `|y_det − y(ε)|` the model allows.
    pub fn max_offset(&self) -> Result<f64> {
        screen_offset(self.theta_max, &self.geometry, &self.beam, self.mode)
    }

    /// P(y_det ≤ y).
    pub fn cdf(&self, y: f64) -> f64 {
        let a = self.geometry.width;
        let mut total = 0.0;
        for c in self.centres() {
            let centre = y - c;
            // (1/a) ∫ Φ(s⁻¹(u)) du over the launch window
            total += simpson(|u| self.offset_cdf(u), centre - a / 2.0, centre + a / 2.0, 129) / a;
        }
        0.5 * total
    }

    /// Density of y_det, 1/m.
    pub fn density(&self, y: f64) -> f64 {
        let a = self.geometry.width;
        self.centres()
            .iter()
            .map(|c| (self.offset_cdf(y - c + a / 2.0) - self.offset_cdf(y - c - a / 2.0)) / a)
            .sum::<f64>()
            * 0.5
    }

    /// Expected counts per bin for `n` particles.
    pub fn expected_counts(&self, edges: &[f64], n: u64) -> Vec<f64> {
        let cdf: Vec<f64> = edges.iter().map(|&e| self.cdf(e)).collect();
        cdf.windows(2).map(|w| n as f64 * (w[1] - w[0])).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScreenHistogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub expected: Vec<f64>,
}

impl ScreenHistogram {
    pub fn bin_width(&self) -> f64 {
        (self.edges[self.edges.len() - 1] - self.edges[0]) / self.counts.len() as f64
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

pub fn uniform_edges(lo: f64, hi: f64, bins: usize) -> Vec<f64> {
    let w = (hi - lo) / bins as f64;
    (0..=bins)
        .map(|k| if k == bins { hi } else { lo + k as f64 * w })
        .collect()
}

/// Bins `values` over `edges`; values outside land in the end bins.
pub fn bin_counts(edges: &[f64], values: impl IntoIterator<Item = f64>) -> Vec<u64> {
    let bins = edges.len() - 1;
    let mut counts = vec![0u64; bins];
    for v in values {
        let k = edges.partition_point(|&e| e <= v).clamp(1, bins) - 1;
        counts[k] += 1;
    }
    counts
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Unavailable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoodnessOfFit {
    pub chi_square: Option<f64>,
    pub dof: Option<usize>,
    pub critical_value: Option<f64>,
    pub pooled_bins: usize,
    pub verdict: Verdict,
}

/// Merges adjacent bins left to right until each group expects at least
/// `threshold` counts. A short tail is folded into the last full group.
pub fn pool_bins(counts: &[u64], expected: &[f64], threshold: f64) -> Vec<(u64, f64)> {
    let mut pooled: Vec<(u64, f64)> = Vec::new();
    let (mut c, mut e) = (0u64, 0.0);
    for (&ci, &ei) in counts.iter().zip(expected) {
        c += ci;
        e += ei;
        if e >= threshold {
            pooled.push((c, e));
            c = 0;
            e = 0.0;
        }
    }
    if c > 0 || e > 0.0 {
        match pooled.last_mut() {
            Some(last) => {
                last.0 += c;
                last.1 += e;
            }
            None => pooled.push((c, e)),
        }
    }
    pooled
}

/// Upper 1% point of the chi-square distribution. Tabulated up to 200
/// degrees of freedom, Wilson–Hilferty beyond.
pub fn chi2_critical_99(dof: usize) -> f64 {
    assert!(dof >= 1, "chi-square needs at least one degree of freedom");
    if dof <= CHI2_CRIT_99.len() {
        return CHI2_CRIT_99[dof - 1];
    }
    let k = dof as f64;
    let z = 2.326_347_874_040_841;
    let t = 1.0 - 2.0 / (9.0 * k) + z * (2.0 / (9.0 * k)).sqrt();
    k * t * t * t
}

pub fn goodness_of_fit(hist: &ScreenHistogram) -> GoodnessOfFit {
    let pooled = pool_bins(&hist.counts, &hist.expected, POOLING_THRESHOLD);
    let n = hist.total();
    if pooled.len() < 2 {
        return GoodnessOfFit {
            chi_square: None,
            dof: None,
            critical_value: None,
            pooled_bins: pooled.len(),
            verdict: Verdict::Unavailable,
        };
    }
    let stat: f64 = pooled
        .iter()
        .map(|&(c, e)| {
            let d = c as f64 - e;
            d * d / e
        })
        .sum();
    let dof = pooled.len() - 1;
    let critical = chi2_critical_99(dof);
    let verdict = if n < MIN_PARTICLES_FOR_VERDICT {
        Verdict::Unavailable
    } else if stat < critical {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    GoodnessOfFit {
        chi_square: Some(stat),
        dof: Some(dof),
        critical_value: Some(critical),
        pooled_bins: pooled.len(),
        verdict,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FringeMetrics {
    /// Mean gap between adjacent cos² fringe maxima inside the central
    /// envelope, m. Absent for a single slit or fewer than three maxima.
    pub fringe_spacing: Option<f64>,
    /// Screen positions of the cos² fringe maxima inside the central envelope.
    pub fringe_maxima: Vec<f64>,
    /// Screen positions where the sinc² envelope vanishes.
    pub envelope_zero_positions: Vec<f64>,
    /// Local maxima of the full screen density inside the central envelope,
    /// at least `PEAK_PROMINENCE` of the tallest one.
    pub analytic_peaks: Vec<f64>,
    /// Histogram estimate for each analytic peak (same order).
    pub empirical_peaks: Vec<Option<f64>>,
}

fn refine_peak(x: &[f64], f: &[f64], i: usize) -> f64 {
    let (a, b, c) = (f[i - 1], f[i], f[i + 1]);
    let denom = a - 2.0 * b + c;
    let shift = if denom < 0.0 { 0.5 * (a - c) / denom } else { 0.0 };
    x[i] + shift.clamp(-0.5, 0.5) * (x[i + 1] - x[i - 1]) / 2.0
}

fn local_maxima(x: &[f64], f: &[f64]) -> Vec<f64> {
    (1..f.len().saturating_sub(1))
        .filter(|&i| f[i] > f[i - 1] && f[i] >= f[i + 1])
        .map(|i| refine_peak(x, f, i))
        .collect()
}

/// Location of the fringe seen in `hist` near `target`.
///
/// The counts in `[target − half_window, target + half_window]` are fitted
/// with the analytic screen profile translated by a free shift δ (binned
/// Poisson likelihood, normalisation profiled out). Returns `target + δ̂`.
pub fn fit_peak_position(
    hist: &ScreenHistogram,
    screen: &ScreenDistribution,
    target: f64,
    half_window: f64,
) -> Option<f64> {
    let idx: Vec<usize> = hist
        .centers()
        .iter()
        .enumerate()
        .filter(|(_, &c)| (c - target).abs() <= half_window)
        .map(|(i, _)| i)
        .collect();
    if idx.len() < 3 {
        return None;
    }
    let observed: u64 = idx.iter().map(|&i| hist.counts[i]).sum();
    if observed == 0 {
        return None;
    }
    let log_likelihood = |shift: f64| {
        let probs: Vec<f64> = idx
            .iter()
            .map(|&i| screen.cdf_fast(hist.edges[i + 1] - shift) - screen.cdf_fast(hist.edges[i] - shift))
            .collect();
        let total: f64 = probs.iter().sum();
        if !(total > 0.0) {
            return f64::NEG_INFINITY;
        }
        idx.iter()
            .zip(&probs)
            .map(|(&i, &p)| {
                let c = hist.counts[i] as f64;
                if c == 0.0 {
                    0.0
                } else if p <= 0.0 {
                    f64::NEG_INFINITY
                } else {
                    c * (p / total).ln()
                }
            })
            .sum::<f64>()
    };
    const STEPS: usize = 200;
    let shifts: Vec<f64> = (0..=STEPS)
        .map(|k| -half_window + 2.0 * half_window * k as f64 / STEPS as f64)
        .collect();
    let values: Vec<f64> = shifts.iter().map(|&d| log_likelihood(d)).collect();
    let best = (0..values.len()).max_by(|&i, &j| values[i].total_cmp(&values[j]).then(j.cmp(&i)))?;
    if !values[best].is_finite() {
        return None;
    }
    let shift = if best > 0 && best < STEPS && values[best - 1].is_finite() && values[best + 1].is_finite() {
        refine_peak(&shifts, &values, best)
    } else {
        shifts[best]
    };
    Some(target + shift)
}

const PEAK_SCAN_POINTS: usize = 40_001;

pub fn fringe_metrics(
    hist: &ScreenHistogram,
    model: &AngularDensityModel,
    screen: &ScreenDistribution,
    mode: PropagationMode,
) -> Result<FringeMetrics> {
    let beam = model.beam();
    let g = model.geometry();
    let mid = g.midpoint();
    let tm = model.theta_max();

    // Envelope zeros: α = kπ, where the field vanishes and p_P = h/λ₀.
    let mut envelope_zero_positions = Vec::new();
    for k in 1.. {
        let s = 2.0 * k as f64 * beam.lambda0 / g.width;
        if s > tm.sin() {
            break;
        }
        let y = screen_offset(s.asin(), g, beam, mode)?;
        envelope_zero_positions.push(mid - y);
        envelope_zero_positions.push(mid + y);
    }
    envelope_zero_positions.sort_by(f64::total_cmp);

    let central_theta = (2.0 * beam.lambda0 / g.width).min(1.0).asin().min(tm);
    let central = screen_offset(central_theta, g, beam, mode)?;

    let mut fringe_maxima = Vec::new();
    if g.separation > 0.0 {
        let n = (screen.thetas.len()).min(1 << 18);
        let thetas: Vec<f64> = (0..n)
            .map(|i| -central_theta + 2.0 * central_theta * i as f64 / (n - 1) as f64)
            .collect();
        let factor = thetas
            .iter()
            .map(|&t| model.fringe_factor(t))
            .collect::<Result<Vec<f64>>>()?;
        for t in local_maxima(&thetas, &factor) {
            fringe_maxima.push(mid + screen_offset(t, g, beam, mode)?);
        }
    }
    let fringe_spacing = if fringe_maxima.len() >= 3 {
        Some((fringe_maxima[fringe_maxima.len() - 1] - fringe_maxima[0]) / (fringe_maxima.len() - 1) as f64)
    } else {
        None
    };

    // Maxima within the convolution reach of a θmax cut-off are truncation
    // artefacts, not fringes.
    let margin = if central_theta < tm {
        0.0
    } else {
        g.separation / 2.0 + g.width
    };
    let (lo, hi) = (mid - central, mid + central);
    let ys: Vec<f64> = (0..PEAK_SCAN_POINTS)
        .map(|i| lo + (hi - lo) * i as f64 / (PEAK_SCAN_POINTS - 1) as f64)
        .collect();
    let dens: Vec<f64> = ys.iter().map(|&y| screen.density(y)).collect();
    let candidates: Vec<f64> = local_maxima(&ys, &dens)
        .into_iter()
        .filter(|&y| y - lo > margin && hi - y > margin)
        .collect();
    let tallest = candidates.iter().map(|&y| screen.density(y)).fold(0.0, f64::max);
    let analytic_peaks: Vec<f64> = candidates
        .into_iter()
        .filter(|&y| screen.density(y) >= PEAK_PROMINENCE * tallest)
        .collect();

    let half_window = fringe_spacing.map_or(central, |s| 0.5 * s);
    let empirical_peaks = analytic_peaks
        .iter()
        .map(|&p| fit_peak_position(hist, screen, p, half_window))
        .collect();

    Ok(FringeMetrics {
        fringe_spacing,
        fringe_maxima,
        envelope_zero_positions,
        analytic_peaks,
        empirical_peaks,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub n_particles: u64,
    pub config_digest: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScreenExtent {
    /// `2 s(θmax)`: full width swept by the displacement, m.
    pub analytic: f64,
    /// Largest `|y_det − y(ε)|` in the run, m.
    pub max_offset: f64,
    /// `max(y_det) − min(y_det)` over the run, m.
    pub observed_span: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub histogram: ScreenHistogram,
    pub fringe_spacing: Option<f64>,
    pub envelope_zero_positions: Vec<f64>,
    pub fringes: FringeMetrics,
    pub extent: ScreenExtent,
    pub chi_square: Option<f64>,
    pub dof: Option<usize>,
    pub critical_value: Option<f64>,
    pub verdict: Verdict,
    pub provenance: Provenance,
}

/// Precomputed pieces shared by every run of one configuration.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub model: AngularDensityModel,
    pub table: CdfTable,
    pub screen: ScreenDistribution,
    pub edges: Vec<f64>,
    /// Bin probabilities under the analytic model.
    pub bin_probabilities: Vec<f64>,
}

impl Analysis {
    pub fn new(config: &RunConfig) -> Result<Self> {
        config.validate()?;
        let model = config.model()?;
        let table = build_cdf(&model, config.cdf_resolution)?;
        let screen = ScreenDistribution::new(&model, config.propagation_mode)?;
        let (lo, hi) = screen.support()?;
        let edges = uniform_edges(lo, hi, config.bins);
        let bin_probabilities = screen.expected_counts(&edges, 1);
        Ok(Analysis {
            model,
            table,
            screen,
            edges,
            bin_probabilities,
        })
    }

    /// Event for particle `id`: its own substream `(seed, id)` drives the
    /// slit choice, the launch position and then the angle.
    pub fn event(&self, config: &RunConfig, id: u64) -> Result<DetectionEvent> {
        let mut rng = RngStream::new(config.seed, id);
        let (slit, y_eps) = sample_launch(&config.geometry, &mut rng);
        let theta = sample_theta(&self.table, &mut rng);
        propagate(
            id,
            Launch { slit, y_eps, theta },
            &config.geometry,
            &config.beam,
            config.propagation_mode,
        )
    }

    /// Events `0..n` generated by `workers` threads over contiguous id
    /// ranges. The result does not depend on `workers`.
    pub fn events(&self, config: &RunConfig, workers: usize) -> Result<Vec<DetectionEvent>> {
        let n = config.n_particles;
        let workers = (workers.max(1) as u64).min(n.max(1));
        let chunk = n.div_ceil(workers);
        let parts: Vec<Result<Vec<DetectionEvent>>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let (start, end) = (w * chunk, ((w + 1) * chunk).min(n));
                    scope.spawn(move || (start..end).map(|id| self.event(config, id)).collect())
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("event worker panicked"))
                .collect()
        });
        let mut events = Vec::with_capacity(n as usize);
        for part in parts {
            events.extend(part?);
        }
        Ok(events)
    }

    pub fn histogram(&self, events: &[DetectionEvent]) -> ScreenHistogram {
        let n = events.len() as u64;
        ScreenHistogram {
            edges: self.edges.clone(),
            counts: bin_counts(&self.edges, events.iter().map(|e| e.y_det)),
            expected: self.bin_probabilities.iter().map(|p| p * n as f64).collect(),
        }
    }

    pub fn summarize(&self, config: &RunConfig, events: &[DetectionEvent]) -> Result<RunSummary> {
        let histogram = self.histogram(events);
        let fringes = fringe_metrics(&histogram, &self.model, &self.screen, config.propagation_mode)?;
        let fit = goodness_of_fit(&histogram);
        let max_offset = events.iter().map(|e| (e.y_det - e.y_eps).abs()).fold(0.0, f64::max);
        let (ymin, ymax) = events.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), e| {
            (lo.min(e.y_det), hi.max(e.y_det))
        });
        Ok(RunSummary {
            fringe_spacing: fringes.fringe_spacing,
            envelope_zero_positions: fringes.envelope_zero_positions.clone(),
            fringes,
            extent: ScreenExtent {
                analytic: 2.0 * self.screen.max_offset()?,
                max_offset,
                observed_span: if events.is_empty() { 0.0 } else { ymax - ymin },
            },
            chi_square: fit.chi_square,
            dof: fit.dof,
            critical_value: fit.critical_value,
            verdict: fit.verdict,
            provenance: Provenance {
                seed: config.seed,
                n_particles: events.len() as u64,
                config_digest: config.digest(),
            },
            histogram,
        })
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub events: Vec<DetectionEvent>,
    pub summary: RunSummary,
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

pub fn run(config: &RunConfig) -> Result<RunOutput> {
    run_with_workers(config, default_workers())
}

pub fn run_with_workers(config: &RunConfig, workers: usize) -> Result<RunOutput> {
    let analysis = Analysis::new(config)?;
    let events = analysis.events(config, workers)?;
    let summary = analysis.summarize(config, &events)?;
    Ok(RunOutput { events, summary })
}

/// Rebuilds the summary of a stored run.
pub fn analyze(config: &RunConfig, events: &[DetectionEvent]) -> Result<RunSummary> {
    Analysis::new(config)?.summarize(config, events)
}
