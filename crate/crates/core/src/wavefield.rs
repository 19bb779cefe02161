//! Wavefunctions, the probability field and the angular scattering density.
//!
//! Phases use `p/2ħ` throughout (not `p/ħ`). The scattering angle of the PF
//! model is therefore twice the conventional one; do not "fix" this.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pf::{particle_momentum_for, BeamSpec, SlitGeometry, SlitIndex, HBAR};
use crate::quadrature::{simpson_samples, AdaptiveSimpson};

/// Default field amplitude as a multiple of λ₀.
pub const DEFAULT_CF_PER_LAMBDA: f64 = 1e-4;
/// Default post-slit reference time ε, s.
pub const DEFAULT_EPSILON: f64 = 1e-9;

const FIXED_POINT_TOL: f64 = 1e-12;
const FIXED_POINT_MAX_ITER: usize = 100;

const NORM_NODES: usize = (1 << 15) + 1;
const NORM_MAX_NODES: usize = (1 << 22) + 1;
const NORM_REL_TOL: f64 = 1e-10;

/// Below this value of `sinc²(α)cos²(φ/2)` the field counts as vanished.
const VANISHING_FIELD: f64 = 1e-24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldParams {
    /// Entire-field amplitude c_F, m.
    pub c_f: f64,
    /// Reference time ε just after the slits, s.
    pub epsilon: f64,
}

impl FieldParams {
    pub fn new(c_f: f64, epsilon: f64) -> Result<Self> {
        if !(c_f.is_finite() && c_f >= 0.0) {
            return Err(Error::Domain(format!("c_F must be non-negative, got {c_f}")));
        }
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::Domain(format!("epsilon must be positive, got {epsilon}")));
        }
        Ok(FieldParams { c_f, epsilon })
    }

    pub fn default_for(beam: &BeamSpec) -> Self {
        FieldParams {
            c_f: DEFAULT_CF_PER_LAMBDA * beam.lambda0,
            epsilon: DEFAULT_EPSILON,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DensityMode {
    /// p_P ≈ h/λ₀ inside α and φ.
    Approximate,
    /// p_P(θ) solved self-consistently with the probability field.
    Exact,
}

/// Single-slit envelope parameter `a p_{P,y} / 4ħ`.
pub fn alpha(p_py: f64, geometry: &SlitGeometry) -> f64 {
    geometry.width * p_py / (4.0 * HBAR)
}

/// Two-slit phase `d p_{P,y} / 2ħ`.
pub fn phi(p_py: f64, geometry: &SlitGeometry) -> f64 {
    geometry.separation * p_py / (2.0 * HBAR)
}

/// `α ≈ (aπ / 2λ₀) sin θ`.
pub fn alpha_approx(theta: f64, beam: &BeamSpec, geometry: &SlitGeometry) -> f64 {
    geometry.width * PI * theta.sin() / (2.0 * beam.lambda0)
}

/// `φ ≈ (dπ / λ₀) sin θ`.
pub fn phi_approx(theta: f64, beam: &BeamSpec, geometry: &SlitGeometry) -> f64 {
    geometry.separation * PI * theta.sin() / beam.lambda0
}

/// `(sin α / α)²`, equal to 1 at α = 0.
pub fn sinc_sq(alpha: f64) -> f64 {
    let s = sinc(alpha);
    s * s
}

pub(crate) fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// `sinc²(α) cos²(φ/2)` at a given transverse particle momentum.
fn fringe_profile(p_py: f64, geometry: &SlitGeometry) -> f64 {
    let c = (0.5 * phi(p_py, geometry)).cos();
    sinc_sq(alpha(p_py, geometry)) * c * c
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoint {
    pub p_particle: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergyRegime {
    /// sin θ = 0: field energy maximal, no transverse particle momentum.
    FieldMaximal,
    /// |χ|² = 0: no field energy, particle momentum at its maximum h/λ₀.
    FieldVanishing,
    Intermediate,
}

/// Normalised angular density |ψ(θ)|² on `[−θmax, θmax]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularDensityModel {
    beam: BeamSpec,
    geometry: SlitGeometry,
    field: FieldParams,
    theta_max: f64,
    mode: DensityMode,
    norm: f64,
}

impl AngularDensityModel {
    pub fn new(
        beam: BeamSpec,
        geometry: SlitGeometry,
        field: FieldParams,
        theta_max: f64,
        mode: DensityMode,
    ) -> Result<Self> {
        beam.validate()?;
        geometry.validate()?;
        FieldParams::new(field.c_f, field.epsilon)?;
        if !(theta_max > 0.0 && theta_max <= PI / 2.0) {
            return Err(Error::Domain(format!(
                "theta_max must lie in (0, pi/2], got {theta_max}"
            )));
        }
        let mut model = AngularDensityModel {
            beam,
            geometry,
            field,
            theta_max,
            mode,
            norm: 1.0,
        };
        model.norm = 1.0 / model.integrate_profile()?;
        Ok(model)
    }

    /// ∫ sinc²cos² dθ by composite Simpson, doubling the node count until
    /// two successive rules agree to `NORM_REL_TOL`.
    fn integrate_profile(&self) -> Result<f64> {
        let (lo, hi) = (-self.theta_max, self.theta_max);
        let mut nodes = NORM_NODES;
        let mut coarse = self.simpson_profile(nodes)?;
        loop {
            let fine_nodes = 2 * nodes - 1;
            let fine = self.simpson_profile(fine_nodes)?;
            if (fine - coarse).abs() <= NORM_REL_TOL * fine.abs() {
                let value = fine + (fine - coarse) / 15.0;
                if !(value > 0.0) {
                    return Err(Error::Domain("angular density integrates to zero".into()));
                }
                return Ok(value);
            }
            if fine_nodes >= NORM_MAX_NODES {
                return Err(Error::Quadrature { lo, hi });
            }
            coarse = fine;
            nodes = fine_nodes;
        }
    }

    fn simpson_profile(&self, nodes: usize) -> Result<f64> {
        let (lo, hi) = (-self.theta_max, self.theta_max);
        let h = (hi - lo) / (nodes - 1) as f64;
        let values = (0..nodes)
            .map(|i| self.profile(if i + 1 == nodes { hi } else { lo + i as f64 * h }))
            .collect::<Result<Vec<f64>>>()?;
        Ok(simpson_samples(&values, h))
    }

    pub fn beam(&self) -> &BeamSpec {
        &self.beam
    }

    pub fn geometry(&self) -> &SlitGeometry {
        &self.geometry
    }

    pub fn field(&self) -> &FieldParams {
        &self.field
    }

    pub fn theta_max(&self) -> f64 {
        self.theta_max
    }

    pub fn mode(&self) -> DensityMode {
        self.mode
    }

    /// Normalisation constant 𝒩², 1/rad.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// Particle momentum magnitude used inside α and φ at angle `theta`.
    pub fn particle_momentum(&self, theta: f64) -> Result<f64> {
        match self.mode {
            DensityMode::Approximate => Ok(self.beam.momentum()),
            DensityMode::Exact => Ok(self.fixed_point_momentum(theta)?.p_particle),
        }
    }

    /// Solves `p_P = p_P(|χ(θ; p_P)|²)` by direct iteration from h/λ₀.
    pub fn fixed_point_momentum(&self, theta: f64) -> Result<FixedPoint> {
        self.fixed_point_with(theta, FIXED_POINT_TOL, FIXED_POINT_MAX_ITER)
    }

    pub fn fixed_point_with(&self, theta: f64, rel_tol: f64, max_iter: usize) -> Result<FixedPoint> {
        let p0 = self.beam.momentum();
        let sin = theta.sin();
        let amp = 4.0 * self.field.c_f * self.field.c_f;
        let mut previous = p0;
        let mut p = p0;
        for iteration in 1..=max_iter {
            let chi_sq = amp * fringe_profile(p * sin, &self.geometry);
            let next = particle_momentum_for(p0, chi_sq)?;
            previous = p;
            p = next;
            if (p - previous).abs() <= rel_tol * p {
                return Ok(FixedPoint {
                    p_particle: p,
                    iterations: iteration,
                });
            }
        }
        Err(Error::NonConvergence {
            iterations: max_iter,
            previous,
            last: p,
        })
    }

    /// `sinc²(α) cos²(φ/2)` with the mode's particle momentum.
    pub fn profile(&self, theta: f64) -> Result<f64> {
        let p = self.particle_momentum(theta)?;
        Ok(fringe_profile(p * theta.sin(), &self.geometry))
    }

    /// Interference factor `cos²(φ/2)` alone.
    pub fn fringe_factor(&self, theta: f64) -> Result<f64> {
        let p = self.particle_momentum(theta)?;
        let c = (0.5 * phi(p * theta.sin(), &self.geometry)).cos();
        Ok(c * c)
    }

    /// Probability field `|χ(θ)|² = 4c_F² sinc²(α) cos²(φ/2)`, m².
    pub fn chi_sq(&self, theta: f64) -> Result<f64> {
        check_angle(theta, PI / 2.0)?;
        Ok(4.0 * self.field.c_f * self.field.c_f * self.profile(theta)?)
    }

    /// Normalised density, 1/rad. Zero outside `[−θmax, θmax]`.
    pub fn density(&self, theta: f64) -> Result<f64> {
        if theta.abs() > self.theta_max {
            return Ok(0.0);
        }
        Ok(self.norm * self.profile(theta)?)
    }

    /// Field kinetic energy `p_P⁴ c_F² sinc²(α) cos²(φ/2) / 2mħ²` and the
    /// regime it falls in.
    pub fn field_kinetic_energy(&self, theta: f64) -> Result<(f64, EnergyRegime)> {
        let p = self.particle_momentum(theta)?;
        let profile = fringe_profile(p * theta.sin(), &self.geometry);
        let c_f = self.field.c_f;
        let energy = p.powi(4) * c_f * c_f * profile / (2.0 * self.beam.mass * HBAR * HBAR);
        let regime = if c_f == 0.0 || profile <= VANISHING_FIELD {
            EnergyRegime::FieldVanishing
        } else if theta.sin() == 0.0 {
            EnergyRegime::FieldMaximal
        } else {
            EnergyRegime::Intermediate
        };
        Ok((energy, regime))
    }
}

fn check_angle(theta: f64, limit: f64) -> Result<()> {
    if theta.abs() > limit || theta.is_nan() {
        return Err(Error::Domain(format!("angle {theta} outside [-{limit}, {limit}]")));
    }
    Ok(())
}

fn check_time(t: f64, field: &FieldParams) -> Result<f64> {
    let dt = t - field.epsilon;
    if !(dt > 0.0) {
        return Err(Error::Domain(format!(
            "time {t} s must exceed epsilon {} s",
            field.epsilon
        )));
    }
    Ok(dt)
}

/// Closed-form y-wavefunction after the slits, up to a constant factor:
/// `sinc(α) exp(i p y/2ħ) / sqrt(t−ε) · Σᵢ exp(−i p y'ᵢ/2ħ)`.
pub fn psi_y_closed(y: f64, t: f64, p_py: f64, geometry: &SlitGeometry, field: &FieldParams) -> Result<Complex64> {
    let dt = check_time(t, field)?;
    let k = p_py / (2.0 * HBAR);
    let sum = Complex64::from_polar(1.0, -k * geometry.y1) + Complex64::from_polar(1.0, -k * geometry.y2);
    Ok(Complex64::from_polar(sinc(alpha(p_py, geometry)) / dt.sqrt(), k * y) * sum)
}

/// Direct quadrature of the propagated wavefunction over both slit windows.
pub fn psi_y_quadrature(
    y: f64,
    t: f64,
    p_py: f64,
    geometry: &SlitGeometry,
    field: &FieldParams,
    mass: f64,
) -> Result<Complex64> {
    psi_y_quadrature_windows(
        y,
        t,
        p_py,
        geometry,
        field,
        mass,
        &[SlitIndex::First, SlitIndex::Second],
    )
}

/// As [`psi_y_quadrature`], restricted to the listed slits.
pub fn psi_y_quadrature_windows(
    y: f64,
    t: f64,
    p_py: f64,
    geometry: &SlitGeometry,
    field: &FieldParams,
    mass: f64,
    slits: &[SlitIndex],
) -> Result<Complex64> {
    let dt = check_time(t, field)?;
    let a = geometry.width;
    // sqrt(m / iħτ) / sqrt(2a)
    let prefactor = Complex64::from_polar((mass / (HBAR * dt)).sqrt() / (2.0 * a).sqrt(), -PI / 4.0);
    let k = p_py / (2.0 * HBAR);
    // Integrate exp(i k (y − u)) over each window; scale ~ a.
    let quad = AdaptiveSimpson::with_tol(1e-12 * a).panels(8);
    let mut total = Complex64::new(0.0, 0.0);
    for &slit in slits {
        let c = geometry.center(slit);
        total += quad.integrate(
            |u: f64| Complex64::from_polar(1.0, k * (y - u)),
            c - a / 2.0,
            c + a / 2.0,
        )?;
    }
    Ok(prefactor * total)
}

/// Free-particle propagator along y,
/// `sqrt(m / 2πiħτ) exp(i m (y − y_ε)² / 2ħτ)` with τ = t − ε.
pub fn propagator_ky(y: f64, t: f64, y_eps: f64, field: &FieldParams, mass: f64) -> Result<Complex64> {
    let dt = check_time(t, field)?;
    let amp = (mass / (2.0 * PI * HBAR * dt)).sqrt();
    let dy = y - y_eps;
    let phase = mass * dy * dy / (2.0 * HBAR * dt);
    Ok(Complex64::from_polar(amp, phase - PI / 4.0))
}

/// x-direction field `c_{F,x} exp(i p_{P,x} (x − x₀) / 2ħ)`. The z-direction
/// field has the same form.
pub fn chi_x(x: f64, p_px: f64, x0: f64, c_fx: f64) -> Complex64 {
    Complex64::from_polar(c_fx, p_px * (x - x0) / (2.0 * HBAR))
}

/// y-direction field
/// `c_{F,y} sinc(α) exp(i p y/2ħ) Σᵢ exp(−i p y'ᵢ/2ħ)`.
pub fn chi_y(y: f64, p_py: f64, geometry: &SlitGeometry, c_fy: f64) -> Complex64 {
    let k = p_py / (2.0 * HBAR);
    let sum = Complex64::from_polar(1.0, -k * geometry.y1) + Complex64::from_polar(1.0, -k * geometry.y2);
    Complex64::from_polar(c_fy * sinc(alpha(p_py, geometry)), k * y) * sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pf::{ELECTRON_MASS, NEON20_MASS, PLANCK};
    use crate::quadrature::simpson;

    fn electron_model(mode: DensityMode) -> AngularDensityModel {
        let beam = BeamSpec::new(5e-12, ELECTRON_MASS, 10.0).unwrap();
        let g = SlitGeometry::symmetric(0.5e-6, 2e-6, 0.35).unwrap();
        AngularDensityModel::new(beam, g, FieldParams::default_for(&beam), PI / 50000.0, mode).unwrap()
    }

    #[test]
    fn alpha_and_phi_values() {
        let beam = BeamSpec::new(5e-12, ELECTRON_MASS, 10.0).unwrap();
        let g = SlitGeometry::symmetric(0.5e-6, 2e-6, 0.35).unwrap();
        assert_eq!(alpha(0.0, &g), 0.0);
        assert_eq!(phi(0.0, &g), 0.0);

        let p0 = beam.momentum();
        let sin_env = 2.0 * beam.lambda0 / g.width;
        assert!((alpha(p0 * sin_env, &g) - PI).abs() < 1e-12);
        let sin_dark = beam.lambda0 / g.separation;
        assert!((phi(p0 * sin_dark, &g) - PI).abs() < 1e-12);
        assert!((phi(p0 * 2.0 * sin_dark, &g) - 2.0 * PI).abs() < 1e-12);

        let theta = PI / 50000.0;
        let exact = alpha(p0 * theta.sin(), &g);
        assert!((exact - alpha_approx(theta, &beam, &g)).abs() < 1e-12);
        assert!((exact - 9.8696).abs() < 1e-3);
        assert!((phi(p0 * theta.sin(), &g) - phi_approx(theta, &beam, &g)).abs() < 1e-11);
    }

    #[test]
    fn sinc_sq_values() {
        assert_eq!(sinc_sq(0.0), 1.0);
        assert!(sinc_sq(PI) < 1e-32);
        assert!((sinc_sq(PI / 2.0) - 4.0 / (PI * PI)).abs() < 1e-15);
        // series branch joins the direct formula smoothly
        let x: f64 = 0.99e-4;
        let direct = (x.sin() / x).powi(2);
        assert!((sinc_sq(x) - direct).abs() < 1e-15);
    }

    #[test]
    fn chi_sq_values() {
        let m = electron_model(DensityMode::Approximate);
        let c_f = m.field().c_f;
        assert!((m.chi_sq(0.0).unwrap() - 4.0 * c_f * c_f).abs() < 1e-30);
        let dark = (m.beam().lambda0 / m.geometry().separation).asin();
        assert!(m.chi_sq(dark).unwrap() < 1e-28 * c_f * c_f);
        assert!(m.chi_sq(2.0).is_err());

        let beam = *m.beam();
        let zero = AngularDensityModel::new(
            beam,
            *m.geometry(),
            FieldParams::new(0.0, DEFAULT_EPSILON).unwrap(),
            m.theta_max(),
            DensityMode::Exact,
        )
        .unwrap();
        for t in [-1e-5, 0.0, 3e-5] {
            assert_eq!(zero.chi_sq(t).unwrap(), 0.0);
        }
        let fp = zero.fixed_point_momentum(2e-5).unwrap();
        assert_eq!(fp.p_particle, beam.momentum());
        assert_eq!(fp.iterations, 1);
    }

    #[test]
    fn fixed_point_matches_perturbation_and_long_run() {
        let base = electron_model(DensityMode::Exact);
        let beam = *base.beam();
        let p0 = beam.momentum();
        // x = p⁰² 4c_F² / ħ² ≈ 1e-5: first-order correction ~1e-6
        let c_f = (1e-5f64).sqrt() * HBAR / (2.0 * p0);
        let m = AngularDensityModel::new(
            beam,
            *base.geometry(),
            FieldParams::new(c_f, DEFAULT_EPSILON).unwrap(),
            base.theta_max(),
            DensityMode::Exact,
        )
        .unwrap();
        let x = p0 * p0 * 4.0 * c_f * c_f / (HBAR * HBAR);
        for theta in [0.0, 3e-6, -1.1e-5, 4e-5] {
            let fp = m.fixed_point_momentum(theta).unwrap();
            let long = m.fixed_point_with(theta, 0.0, 200).or_else(|e| match e {
                Error::NonConvergence { last, .. } => Ok(FixedPoint {
                    p_particle: last,
                    iterations: 200,
                }),
                e => Err(e),
            });
            let long = long.unwrap().p_particle;
            assert!(((fp.p_particle - long) / long).abs() < 1e-12);
            let g = fringe_profile(p0 * theta.sin(), m.geometry());
            let first_order = p0 * (1.0 - x * g / 8.0);
            assert!(((fp.p_particle - first_order) / p0).abs() < x * x);
            let chi = m.chi_sq(theta).unwrap();
            let total = crate::pf::pf_total_momentum(fp.p_particle, chi);
            assert!(((total - p0) / p0).abs() < 1e-10);
        }
    }

    #[test]
    fn fixed_point_reports_non_convergence() {
        let m = electron_model(DensityMode::Exact);
        let theta = 1e-6;
        match m.fixed_point_with(theta, 0.0, 1) {
            Err(Error::NonConvergence {
                iterations,
                previous,
                last,
            }) => {
                assert_eq!(iterations, 1);
                assert_eq!(previous, m.beam().momentum());
                assert!(last < previous);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn density_is_normalised_even_and_peaked() {
        for mode in [DensityMode::Approximate, DensityMode::Exact] {
            let m = electron_model(mode);
            let tm = m.theta_max();
            let total = simpson(|t| m.density(t).unwrap(), -tm, tm, (1 << 17) + 1);
            assert!((total - 1.0).abs() < 1e-9, "{mode:?}: {total}");
            let peak = m.density(0.0).unwrap();
            for i in 0..=1000 {
                let t = -tm + 2.0 * tm * i as f64 / 1000.0;
                let d = m.density(t).unwrap();
                assert!(d >= 0.0 && d <= peak);
                assert_eq!(d, m.density(-t).unwrap());
            }
        }
    }

    #[test]
    fn single_slit_density_is_sinc_squared() {
        let beam = BeamSpec::new(1.8e-8, NEON20_MASS, 1.0).unwrap();
        let g = SlitGeometry::symmetric(2e-6, 0.0, 0.113).unwrap();
        let m = AngularDensityModel::new(
            beam,
            g,
            FieldParams::default_for(&beam),
            PI / 200.0,
            DensityMode::Approximate,
        )
        .unwrap();
        let t = 3e-3;
        let ratio = m.density(t).unwrap() / m.density(0.0).unwrap();
        assert!((ratio - sinc_sq(alpha_approx(t, &beam, &g))).abs() < 1e-14);
    }

    #[test]
    fn kinetic_energy_regimes() {
        let m = electron_model(DensityMode::Approximate);
        let beam = m.beam();
        let p0 = beam.momentum();
        let c_f = m.field().c_f;

        let (k0, regime) = m.field_kinetic_energy(0.0).unwrap();
        assert_eq!(regime, EnergyRegime::FieldMaximal);
        let expected = p0.powi(4) * c_f * c_f / (2.0 * beam.mass * HBAR * HBAR);
        assert!(((k0 - expected) / expected).abs() < 1e-14);
        let tm = m.theta_max();
        for i in 1..200 {
            let t = tm * i as f64 / 200.0;
            assert!(m.field_kinetic_energy(t).unwrap().0 <= k0);
        }

        let dark = (beam.lambda0 / m.geometry().separation).asin();
        let (kd, regime) = m.field_kinetic_energy(dark).unwrap();
        assert_eq!(regime, EnergyRegime::FieldVanishing);
        assert!(kd < 1e-20 * k0);

        let (_, regime) = m.field_kinetic_energy(dark / 2.0).unwrap();
        assert_eq!(regime, EnergyRegime::Intermediate);

        // K_F = p_P⁴ |χ|² / (8 m ħ²) at the same p_P
        let mx = electron_model(DensityMode::Exact);
        for i in -20..=20 {
            let t = tm * i as f64 / 21.0;
            let (k, _) = mx.field_kinetic_energy(t).unwrap();
            let p = mx.particle_momentum(t).unwrap();
            let via_chi = p.powi(4) * mx.chi_sq(t).unwrap() / (8.0 * beam.mass * HBAR * HBAR);
            assert!((k - via_chi).abs() <= 1e-14 * k0);
        }
    }

    #[test]
    fn closed_psi_special_cases() {
        let field = FieldParams::new(0.0, 1e-9).unwrap();
        let g = SlitGeometry::symmetric(0.5e-6, 2e-6, 0.35).unwrap();
        let t = 1e-9 + 4e-6;
        let v = psi_y_closed(1e-7, t, 0.0, &g, &field).unwrap();
        assert!((v - Complex64::new(2.0 / 4e-6f64.sqrt(), 0.0)).norm() < 1e-9);
        assert!(psi_y_closed(0.0, 1e-9, 1e-24, &g, &field).is_err());

        let same = SlitGeometry::new(0.5e-6, 1e-6, 1e-6, 0.0, 0.0, 0.35).unwrap();
        for p in [1e-25, 3.3e-25, -8e-25] {
            let v = psi_y_closed(0.0, 1.0, p, &same, &field).unwrap();
            let env = sinc(alpha(p, &same)).abs();
            assert!((v.norm() - 2.0 * env / (1.0 - 1e-9f64).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_psi_modulus_is_fringe_profile() {
        let field = FieldParams::new(0.0, 1e-9).unwrap();
        let g = SlitGeometry::symmetric(0.5e-6, 2e-6, 0.35).unwrap();
        for i in 0..50 {
            let p = (i as f64 - 25.0) * 3e-26;
            let v = psi_y_closed(4e-6, 1e-6, p, &g, &field).unwrap();
            let dt = 1e-6 - 1e-9;
            let expected = 4.0 * fringe_profile(p, &g) / dt;
            assert!((v.norm_sqr() - expected).abs() < 1e-12 * 4.0 / dt);
        }
    }

    #[test]
    fn single_window_quadrature_is_sinc_envelope() {
        let field = FieldParams::new(0.0, 1e-9).unwrap();
        let g = SlitGeometry::symmetric(0.5e-6, 2e-6, 0.35).unwrap();
        let (t, y) = (2e-9, 1e-6);
        let dt = t - field.epsilon;
        for i in 1..20 {
            let p = i as f64 * 1.1e-25;
            let q = psi_y_quadrature_windows(y, t, p, &g, &field, ELECTRON_MASS, &[SlitIndex::First]).unwrap();
            // analytic: pref · a sinc(α) exp(i k (y − y₁))
            let k = p / (2.0 * HBAR);
            let pref = (ELECTRON_MASS / (HBAR * dt)).sqrt() / (2.0 * g.width).sqrt();
            let analytic = Complex64::from_polar(pref * g.width * sinc(alpha(p, &g)), k * (y - g.y1) - PI / 4.0);
            assert!((q - analytic).norm() < 1e-10 * pref * g.width);
        }
    }

    #[test]
    fn propagator_modulus_and_time_domain() {
        let field = FieldParams::new(0.0, 1e-9).unwrap();
        for y in [-1e-3, 0.0, 2.5e-6] {
            let k = propagator_ky(y, 1e-6, 1e-7, &field, NEON20_MASS).unwrap();
            let dt = 1e-6 - 1e-9;
            let expected = NEON20_MASS / (2.0 * PI * HBAR * dt);
            assert!(((k.norm_sqr() - expected) / expected).abs() < 1e-13);
        }
        assert!(propagator_ky(0.0, 1e-9, 0.0, &field, NEON20_MASS).is_err());
    }

    #[test]
    fn propagator_has_unit_total_weight() {
        // ∫ K e^{−η u²} du → ∫ K du as η → 0; compare with the Gaussian-Fresnel
        // closed form sqrt(π / (η − iβ)).
        let field = FieldParams::new(0.0, 1e-9).unwrap();
        let dt = 1e-5;
        let t = field.epsilon + dt;
        let beta = NEON20_MASS / (2.0 * HBAR * dt);
        let eta = 0.05 * beta;
        let half = (40.0 / eta).sqrt();
        let quad = AdaptiveSimpson::with_tol(1e-10).panels(256);
        let numeric: Complex64 = quad
            .integrate(
                |u: f64| propagator_ky(u, t, 0.0, &field, NEON20_MASS).unwrap() * (-eta * u * u).exp(),
                -half,
                half,
            )
            .unwrap();
        let amp = propagator_ky(0.0, t, 0.0, &field, NEON20_MASS).unwrap();
        let analytic = amp * (Complex64::new(PI, 0.0) / Complex64::new(eta, -beta)).sqrt();
        assert!((numeric - analytic).norm() < 1e-8, "{numeric} vs {analytic}");
        // η → 0 limit of the closed form has modulus one.
        let limit = amp * (Complex64::new(PI, 0.0) / Complex64::new(0.0, -beta)).sqrt();
        assert!((limit.norm() - 1.0).abs() < 1e-14);
        assert!((limit - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn factorised_field_reproduces_probability_field() {
        let m = electron_model(DensityMode::Approximate);
        let (cx, cy, cz) = (0.3, 2.0e-15, 0.7);
        let c_f = cx * cy * cz;
        let model = AngularDensityModel::new(
            *m.beam(),
            *m.geometry(),
            FieldParams::new(c_f, DEFAULT_EPSILON).unwrap(),
            m.theta_max(),
            DensityMode::Approximate,
        )
        .unwrap();
        let p0 = PLANCK / m.beam().lambda0;
        let tm = m.theta_max();
        assert_eq!(chi_x(1.5, 1e-24, 1.5, cx), Complex64::new(cx, 0.0));
        for i in 0..=100 {
            let theta = -tm + 2.0 * tm * i as f64 / 100.0;
            let (px, py) = (p0 * theta.cos(), p0 * theta.sin());
            let x = 0.35 * theta.cos();
            let y = 0.35 * theta.sin();
            let total = chi_x(x, px, 0.0, cx) * chi_y(y, py, model.geometry(), cy) * chi_x(0.0, 0.0, 0.0, cz);
            let expected = model.chi_sq(theta).unwrap();
            assert!((total.norm_sqr() - expected).abs() <= 1e-12 * 4.0 * c_f * c_f);
            assert!((chi_x(x, px, 0.0, cx).norm_sqr() - cx * cx).abs() < 1e-15);
        }
    }
}
