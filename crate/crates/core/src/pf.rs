//! Beam and slit descriptions plus the momentum and energy algebra of a
//! particle-field (PF) system.
//!
//! Unit audit: the probability field |χ|² is an area (m²). With momenta in
//! kg·m/s and ħ in J·s, the combination p²|χ|²/ħ² is dimensionless, which is
//! what the energy balance `p² = p_P² (1 + p_P² |χ|² / 4ħ²)` needs.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Planck constant (exact SI value), J·s.
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Reduced Planck constant, J·s.
pub const HBAR: f64 = PLANCK / (2.0 * PI);

/// Electron rest mass, kg.
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;
/// Mass of a neon-20 atom, kg.
pub const NEON20_MASS: f64 = 19.992_440_176_2 * 1.660_539_066_60e-27;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub h: f64,
    pub hbar: f64,
}

impl Constants {
    pub const SI: Constants = Constants { h: PLANCK, hbar: HBAR };
}

/// Incident beam of PF systems.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamSpec {
    /// de Broglie wavelength before the slits, m.
    pub lambda0: f64,
    /// Particle mass, kg.
    pub mass: f64,
    /// Plane-field amplitude A_p, when known.
    pub a_p: Option<f64>,
    /// Scale factor A₀ = p⁰ / p_P⁰.
    pub a0: f64,
}

impl BeamSpec {
    /// Beam with a given scale factor. The plane-field amplitude is left
    /// unspecified; [`BeamSpec::field_amplitude`] back-computes it.
    pub fn new(lambda0: f64, mass: f64, a0: f64) -> Result<Self> {
        let beam = BeamSpec {
            lambda0,
            mass,
            a_p: None,
            a0,
        };
        beam.validate()?;
        Ok(beam)
    }

    /// Beam whose scale factor follows from the plane-field amplitude.
    pub fn with_field_amplitude(lambda0: f64, mass: f64, a_p: f64) -> Result<Self> {
        let a0 = a0_from_field_amplitude(lambda0, a_p)?;
        let beam = BeamSpec {
            lambda0,
            mass,
            a_p: Some(a_p),
            a0,
        };
        beam.validate()?;
        Ok(beam)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda0.is_finite() && self.lambda0 > 0.0) {
            return Err(Error::InvalidBeam(format!(
                "lambda0 must be positive, got {}",
                self.lambda0
            )));
        }
        if !(self.mass.is_finite() && self.mass > 0.0) {
            return Err(Error::InvalidBeam(format!("mass must be positive, got {}", self.mass)));
        }
        if !(self.a0.is_finite() && self.a0 >= 1.0) {
            return Err(Error::InvalidBeam(format!("A0 must be at least 1, got {}", self.a0)));
        }
        if let Some(a_p) = self.a_p {
            if !(a_p.is_finite() && a_p >= 0.0) {
                return Err(Error::InvalidBeam(format!(
                    "field amplitude must be non-negative, got {a_p}"
                )));
            }
        }
        Ok(())
    }

    /// de Broglie momentum p⁰ = h/λ₀.
    pub fn momentum(&self) -> f64 {
        PLANCK / self.lambda0
    }

    /// Particle momentum before the slits, p_P⁰ = p⁰/A₀.
    pub fn particle_momentum(&self) -> f64 {
        self.momentum() / self.a0
    }

    /// Plane-field amplitude A_p, either as given or inverted from A₀.
    pub fn field_amplitude(&self) -> f64 {
        self.a_p
            .unwrap_or_else(|| field_amplitude_for_a0(self.lambda0, self.a0))
    }
}

/// Scale factor A₀ for an isotropic beam with plane-field amplitude `a_p`.
///
/// For an isotropic momentum every Cartesian component of the particle
/// momentum is `±p⁰/(√3 A₀)`. The three components are taken with one common
/// sign, so `π_p⁰² = (Σ_β p⁰_{P,β})² = 9 p⁰_{P,β}² = 3 p⁰²/A₀²`. Inserting this
/// into `A₀² = 1 / (1 − A_p² π_p⁰² / 3h²)` gives an equation in A₀ alone whose
/// solution is `A₀² = 1 + (A_p/λ₀)²`.
pub fn a0_from_field_amplitude(lambda0: f64, a_p: f64) -> Result<f64> {
    if !(lambda0.is_finite() && lambda0 > 0.0) {
        return Err(Error::InvalidBeam(format!("lambda0 must be positive, got {lambda0}")));
    }
    if !(a_p.is_finite() && a_p >= 0.0) {
        return Err(Error::InvalidBeam(format!(
            "field amplitude must be non-negative, got {a_p}"
        )));
    }
    let ratio = a_p / lambda0;
    let a0_sq = 1.0 + ratio * ratio;
    if !a0_sq.is_finite() {
        return Err(Error::InvalidBeam(format!(
            "field amplitude {a_p} too large for lambda0 {lambda0}"
        )));
    }
    Ok(a0_sq.sqrt())
}

/// Inverse of [`a0_from_field_amplitude`].
pub fn field_amplitude_for_a0(lambda0: f64, a0: f64) -> f64 {
    lambda0 * (a0 * a0 - 1.0).max(0.0).sqrt()
}

/// Denominator `1 − A_p² π_p⁰² / 3h²` of the isotropic energy balance,
/// evaluated from explicit momentum components.
pub fn isotropic_denominator(a_p: f64, components: [f64; 3]) -> f64 {
    let sum: f64 = components.iter().sum();
    1.0 - a_p * a_p * sum * sum / (3.0 * PLANCK * PLANCK)
}

/// Magnitude of one Cartesian component of the particle momentum before the
/// slits, `(h/λ₀) / (√3 A₀)`. The sign is left to the caller.
pub fn isotropic_component_momentum(beam: &BeamSpec) -> f64 {
    beam.momentum() / (3f64.sqrt() * beam.a0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SlitIndex {
    First,
    Second,
}

impl SlitIndex {
    pub fn from_number(n: i64) -> Result<Self> {
        match n {
            1 => Ok(SlitIndex::First),
            2 => Ok(SlitIndex::Second),
            other => Err(Error::InvalidSlitIndex(other)),
        }
    }

    pub fn number(self) -> u8 {
        match self {
            SlitIndex::First => 1,
            SlitIndex::Second => 2,
        }
    }
}

/// Two slits along y in the plane x = x₀, z = z₀, and a screen at distance L.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlitGeometry {
    pub width: f64,
    pub separation: f64,
    pub y1: f64,
    pub y2: f64,
    pub x0: f64,
    pub z0: f64,
    pub screen_distance: f64,
}

impl SlitGeometry {
    /// Slits centred at `∓separation/2` in the plane x = z = 0.
    pub fn symmetric(width: f64, separation: f64, screen_distance: f64) -> Result<Self> {
        Self::new(width, -separation / 2.0, separation / 2.0, 0.0, 0.0, screen_distance)
    }

    pub fn new(width: f64, y1: f64, y2: f64, x0: f64, z0: f64, screen_distance: f64) -> Result<Self> {
        let g = SlitGeometry {
            width,
            separation: (y2 - y1).abs(),
            y1,
            y2,
            x0,
            z0,
            screen_distance,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.width, self.y1, self.y2, self.x0, self.z0, self.screen_distance]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidGeometry("non-finite coordinate".into()));
        }
        if self.width <= 0.0 {
            return Err(Error::InvalidGeometry(format!(
                "slit width must be positive, got {}",
                self.width
            )));
        }
        if self.screen_distance <= 0.0 {
            return Err(Error::InvalidGeometry(format!(
                "screen distance must be positive, got {}",
                self.screen_distance
            )));
        }
        if (self.separation - (self.y2 - self.y1).abs()).abs() > 1e-12 * self.separation.max(self.width) {
            return Err(Error::InvalidGeometry("separation disagrees with slit centres".into()));
        }
        Ok(())
    }

    pub fn center(&self, slit: SlitIndex) -> f64 {
        match slit {
            SlitIndex::First => self.y1,
            SlitIndex::Second => self.y2,
        }
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.y1 + self.y2)
    }

    /// Same geometry with both slits shifted by `dy`.
    pub fn shifted(&self, dy: f64) -> Self {
        SlitGeometry {
            y1: self.y1 + dy,
            y2: self.y2 + dy,
            ..*self
        }
    }
}

/// Mean and variance of the uniform launch position across one slit.
pub fn slit_position_moments(geometry: &SlitGeometry, slit: i64) -> Result<(f64, f64)> {
    let slit = SlitIndex::from_number(slit)?;
    let a = geometry.width;
    Ok((geometry.center(slit), a * a / 12.0))
}

/// Smallest slit width allowed by the uncertainty bound, `3λ₀/(2π)`.
pub fn min_slit_width(lambda0: f64) -> f64 {
    3.0 * lambda0 / (2.0 * PI)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlitWidthCheck {
    pub passes: bool,
    /// `a / (3λ₀/2π)`; at least 1 when the check passes.
    pub margin: f64,
}

pub fn validate_slit_width(beam: &BeamSpec, geometry: &SlitGeometry) -> SlitWidthCheck {
    let bound = min_slit_width(beam.lambda0);
    SlitWidthCheck {
        passes: geometry.width >= bound,
        margin: geometry.width / bound,
    }
}

/// Quantum number of a one-dimensional box of width `a` whose mean squared
/// momentum `n²h²/4a²` matches `h²/3λ₀²`. Diagnostic only.
pub fn estimate_box_quantum_number(beam: &BeamSpec, geometry: &SlitGeometry) -> u64 {
    (2.0 * geometry.width / (3f64.sqrt() * beam.lambda0)).round() as u64
}

/// Particle momentum magnitude p_P after the slits for a probability-field
/// value `chi_sq` (m²), from energy conservation `p = h/λ₀`.
///
/// Uses `p_P² = 2p⁰² / (1 + sqrt(1 + x))` with `x = p⁰²|χ|²/ħ²`, the
/// rationalised form of `(−1 + sqrt(1 + x)) / (|χ|²/2ħ²)`.
pub fn solve_particle_momentum(beam: &BeamSpec, chi_sq: f64) -> Result<f64> {
    particle_momentum_for(beam.momentum(), chi_sq)
}

pub(crate) fn particle_momentum_for(p0: f64, chi_sq: f64) -> Result<f64> {
    if !(chi_sq >= 0.0) || !chi_sq.is_finite() {
        return Err(Error::Domain(format!(
            "probability field must be finite and non-negative, got {chi_sq}"
        )));
    }
    let x = p0 * p0 * chi_sq / (HBAR * HBAR);
    Ok(p0 * (2.0 / (1.0 + (1.0 + x).sqrt())).sqrt())
}

/// Momentum of the PF system, `p_P sqrt(1 + p_P² |χ|² / 4ħ²)`.
pub fn pf_total_momentum(p_particle: f64, chi_sq: f64) -> f64 {
    p_particle * energy_factor(p_particle, chi_sq)
}

fn energy_factor(p_particle: f64, chi_sq: f64) -> f64 {
    (1.0 + p_particle * p_particle * chi_sq / (4.0 * HBAR * HBAR)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumState {
    pub p_total: f64,
    pub p_particle: f64,
    pub p_x: f64,
    pub p_y: f64,
}

/// In-plane momentum components of the PF system for scattering angle
/// `theta` (polar angle fixed at π/2).
pub fn momentum_components(p_particle: f64, theta: f64, chi_sq: f64) -> MomentumState {
    let factor = energy_factor(p_particle, chi_sq);
    let (sin, cos) = theta.sin_cos();
    MomentumState {
        p_total: p_particle * factor,
        p_particle,
        p_x: p_particle * cos * factor,
        p_y: p_particle * sin * factor,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldMotion {
    /// Field velocity |A_p Σ v_β k_β|.
    pub velocity: f64,
    /// Field kinetic energy ½ m v², J.
    pub kinetic_energy: f64,
}

/// Velocity and kinetic energy of the plane field before the slits.
pub fn field_velocity(beam: &BeamSpec, particle_velocity: [f64; 3], wavevector: [f64; 3]) -> FieldMotion {
    let dot: f64 = particle_velocity
        .iter()
        .zip(wavevector.iter())
        .map(|(v, k)| v * k)
        .sum();
    let velocity = (beam.field_amplitude() * dot).abs();
    FieldMotion {
        velocity,
        kinetic_energy: 0.5 * beam.mass * velocity * velocity,
    }
}
