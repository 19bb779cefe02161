//! Drawing scattering events: slit choice, launch position and angle.

use crate::error::{Error, Result};
use crate::pf::{SlitGeometry, SlitIndex};
use crate::rng::RngStream;
use crate::wavefield::AngularDensityModel;

pub const DEFAULT_CDF_RESOLUTION: usize = 1 << 14;
pub const MIN_CDF_RESOLUTION: usize = 1024;

/// Tabulated cumulative distribution on a uniform angle grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfTable {
    thetas: Vec<f64>,
    cdf: Vec<f64>,
}

impl CdfTable {
    /// Trapezoid-accumulated CDF of `density` on `resolution` uniform nodes
    /// spanning `[lo, hi]`, rescaled to end at exactly 1.
    pub fn from_density<F>(lo: f64, hi: f64, resolution: usize, mut density: F) -> Result<Self>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        if resolution < MIN_CDF_RESOLUTION {
            return Err(Error::Domain(format!(
                "CDF resolution must be at least {MIN_CDF_RESOLUTION}, got {resolution}"
            )));
        }
        if !(hi > lo) {
            return Err(Error::Domain(format!("empty angle range [{lo}, {hi}]")));
        }
        let step = (hi - lo) / (resolution - 1) as f64;
        let thetas: Vec<f64> = (0..resolution)
            .map(|i| if i + 1 == resolution { hi } else { lo + i as f64 * step })
            .collect();
        let values = thetas.iter().map(|&t| density(t)).collect::<Result<Vec<f64>>>()?;
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::Domain("density must be finite and non-negative".into()));
        }
        let mut cdf = Vec::with_capacity(resolution);
        let mut acc = 0.0;
        cdf.push(0.0);
        for i in 1..resolution {
            acc += 0.5 * (values[i - 1] + values[i]) * (thetas[i] - thetas[i - 1]);
            cdf.push(acc);
        }
        if !(acc > 0.0) {
            return Err(Error::Domain("density has zero mass".into()));
        }
        for c in cdf.iter_mut() {
            *c /= acc;
        }
        cdf[resolution - 1] = 1.0;
        Ok(CdfTable { thetas, cdf })
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn values(&self) -> &[f64] {
        &self.cdf
    }

    pub fn len(&self) -> usize {
        self.cdf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cdf.is_empty()
    }

    /// Angle at which the tabulated CDF reaches `u` (linear interpolation).
    pub fn invert(&self, u: f64) -> f64 {
        let n = self.cdf.len();
        let upper = self.cdf.partition_point(|&c| c <= u).clamp(1, n - 1);
        let i = upper - 1;
        let (c0, c1) = (self.cdf[i], self.cdf[upper]);
        let frac = if c1 > c0 {
            ((u - c0) / (c1 - c0)).clamp(0.0, 1.0)
        } else {
            0.0
        };
        self.thetas[i] + frac * (self.thetas[upper] - self.thetas[i])
    }

    /// Tabulated CDF at angle `theta` (linear interpolation).
    pub fn cdf_at(&self, theta: f64) -> f64 {
        let n = self.thetas.len();
        if theta <= self.thetas[0] {
            return 0.0;
        }
        if theta >= self.thetas[n - 1] {
            return 1.0;
        }
        let upper = self.thetas.partition_point(|&t| t <= theta).clamp(1, n - 1);
        let i = upper - 1;
        let frac = (theta - self.thetas[i]) / (self.thetas[upper] - self.thetas[i]);
        self.cdf[i] + frac * (self.cdf[upper] - self.cdf[i])
    }
}

pub fn build_cdf(model: &AngularDensityModel, resolution: usize) -> Result<CdfTable> {
    let tm = model.theta_max();
    CdfTable::from_density(-tm, tm, resolution, |t| model.density(t))
}

/// Inverse-CDF draw of a scattering angle.
pub fn sample_theta(table: &CdfTable, rng: &mut RngStream) -> f64 {
    table.invert(rng.next_f64())
}

/// Rejection sampling against the flat envelope `density(0)`, the density's
/// global maximum. Test oracle for [`sample_theta`].
pub fn sample_rejection(model: &AngularDensityModel, rng: &mut RngStream) -> Result<f64> {
    let tm = model.theta_max();
    let ceiling = model.density(0.0)?;
    loop {
        let theta = tm * (2.0 * rng.next_f64() - 1.0);
        if rng.next_f64() * ceiling < model.density(theta)? {
            return Ok(theta);
        }
    }
}

/// Slit (equal odds) and uniform launch position across its width.
pub fn sample_launch(geometry: &SlitGeometry, rng: &mut RngStream) -> (SlitIndex, f64) {
    let slit = if rng.next_f64() < 0.5 {
        SlitIndex::First
    } else {
        SlitIndex::Second
    };
    let y = geometry.center(slit) + geometry.width * (rng.next_f64() - 0.5);
    (slit, y)
}
