//! Free flight of PF systems from the slits to the screen.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pf::{BeamSpec, SlitGeometry, SlitIndex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PropagationMode {
    /// Flight length `v⁰(T − ε) ≈ L` with the A₀-scaled displacement:
    /// `y = A₀ L sin θ + y(ε)`, `x = x₀ + A₀ L cos θ`.
    Paper,
    /// Straight line that crosses the plane `x = x₀ + L`:
    /// `y = y(ε) + L tan θ`.
    Geometric,
}

/// One particle as it leaves the slit plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Launch {
    pub slit: SlitIndex,
    pub y_eps: f64,
    pub theta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionEvent {
    pub particle_id: u64,
    pub slit: SlitIndex,
    pub y_eps: f64,
    pub theta: f64,
    pub y_det: f64,
    pub x_det: f64,
    /// Length standing in for `v⁰(T − ε)`, m.
    pub flight_scale: f64,
}

fn check_theta(theta: f64, mode: PropagationMode) -> Result<()> {
    if theta.is_nan() {
        return Err(Error::Domain("scattering angle is NaN".into()));
    }
    match mode {
        PropagationMode::Geometric if theta.cos() <= 0.0 || theta.abs() >= FRAC_PI_2 => {
            Err(Error::NoScreenCrossing { theta })
        }
        PropagationMode::Paper if theta.abs() > FRAC_PI_2 => {
            Err(Error::Domain(format!("scattering angle {theta} outside [-pi/2, pi/2]")))
        }
        _ => Ok(()),
    }
}

/// Transverse displacement `y_det − y(ε)` for scattering angle `theta`.
pub fn screen_offset(theta: f64, geometry: &SlitGeometry, beam: &BeamSpec, mode: PropagationMode) -> Result<f64> {
    check_theta(theta, mode)?;
    let l = geometry.screen_distance;
    Ok(match mode {
        PropagationMode::Paper => beam.a0 * l * theta.sin(),
        PropagationMode::Geometric => l * theta.tan(),
    })
}

/// Angle whose displacement is `offset`, clamped to ±π/2. Inverse of
/// [`screen_offset`] on its monotone range.
pub fn offset_to_theta(offset: f64, geometry: &SlitGeometry, beam: &BeamSpec, mode: PropagationMode) -> f64 {
    let l = geometry.screen_distance;
    match mode {
        PropagationMode::Paper => (offset / (beam.a0 * l)).clamp(-1.0, 1.0).asin(),
        PropagationMode::Geometric => (offset / l).atan(),
    }
}

pub fn propagate(
    particle_id: u64,
    launch: Launch,
    geometry: &SlitGeometry,
    beam: &BeamSpec,
    mode: PropagationMode,
) -> Result<DetectionEvent> {
    let offset = screen_offset(launch.theta, geometry, beam, mode)?;
    let l = geometry.screen_distance;
    let (x_det, flight_scale) = match mode {
        PropagationMode::Paper => (geometry.x0 + beam.a0 * l * launch.theta.cos(), l),
        PropagationMode::Geometric => (geometry.x0 + l, l / launch.theta.cos()),
    };
    Ok(DetectionEvent {
        particle_id,
        slit: launch.slit,
        y_eps: launch.y_eps,
        theta: launch.theta,
        y_det: launch.y_eps + offset,
        x_det,
        flight_scale,
    })
}

fn flight_time(t: f64, epsilon: f64) -> Result<f64> {
    let dt = t - epsilon;
    if !(dt >= 0.0) {
        return Err(Error::Domain(format!("time {t} s precedes epsilon {epsilon} s")));
    }
    Ok(dt)
}

/// `y(t) = y(ε) + (t − ε) p_{P,y} / m`.
pub fn particle_trajectory_y(t: f64, y_eps: f64, p_py: f64, mass: f64, epsilon: f64) -> Result<f64> {
    Ok(y_eps + flight_time(t, epsilon)? * p_py / mass)
}

/// `x(t) = x(ε) + (t − ε) p_{P,x} / m`.
pub fn particle_trajectory_x(t: f64, x_eps: f64, p_px: f64, mass: f64, epsilon: f64) -> Result<f64> {
    Ok(x_eps + flight_time(t, epsilon)? * p_px / mass)
}
