//! Physical-optics scattering from a single rectangular conducting patch.
//!
//! The plate lies in the xy-plane centred on the origin, `a` along x and `b`
//! along y. Incident waves are perpendicularly polarized plane waves. The
//! closed forms hold in the far field and neglect edge diffraction.
//!
//! [`po_radiation_integrals`] evaluates the same scattering problem from the
//! induced surface current by 2-D Gauss–Legendre quadrature. It shares no code
//! with the closed forms beyond the wave constants and is used as an oracle.

use std::f64::consts::PI;
use std::ops::{Add, AddAssign, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::em::{sampling_sa, Direction, ObservationPoint, WaveContext};
use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;

/// Rectangular plate of size `a × b` with collecting area `area`.
///
/// The collecting area defaults to `a·b` but is kept independent: the
/// amplitude scales with `area`, the directivity with `a` and `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Patch {
    pub a: f64,
    pub b: f64,
    pub area: f64,
}

impl Patch {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        Self::with_area(a, b, a * b)
    }

    pub fn with_area(a: f64, b: f64, area: f64) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b), ("area", area)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::validation(name, format!("must be positive, got {v}")));
            }
        }
        Ok(Self { a, b, area })
    }
}

/// Uniform plane wave arriving from `direction` with real amplitude `amplitude`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneWave {
    pub direction: Direction,
    pub amplitude: f64,
}

impl PlaneWave {
    pub const fn new(direction: Direction, amplitude: f64) -> Self {
        Self { direction, amplitude }
    }
}

/// Complex `(r, θ, φ)` field components at an observation point.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SphericalField {
    pub e_r: Complex64,
    pub e_theta: Complex64,
    pub e_phi: Complex64,
}

impl SphericalField {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn magnitude(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.e_r.norm_sqr() + self.e_theta.norm_sqr() + self.e_phi.norm_sqr()
    }
}

impl Add for SphericalField {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            e_r: self.e_r + rhs.e_r,
            e_theta: self.e_theta + rhs.e_theta,
            e_phi: self.e_phi + rhs.e_phi,
        }
    }
}

impl AddAssign for SphericalField {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Mul<Complex64> for SphericalField {
    type Output = Self;
    fn mul(self, rhs: Complex64) -> Self {
        Self {
            e_r: self.e_r * rhs,
            e_theta: self.e_theta * rhs,
            e_phi: self.e_phi * rhs,
        }
    }
}

/// Polarization factors `(θ-factor, φ-factor)` for the perpendicular
/// incident polarization:
/// `cosθs (cosφi sinφs − sinφi cosφs)` and `sinφi sinφs + cosφi cosφs`.
pub(crate) fn polarization_factors(incident: Direction, scatter: Direction) -> (f64, f64) {
    let (spi, cpi) = incident.phi.sin_cos();
    let (sps, cps) = scatter.phi.sin_cos();
    (scatter.theta.cos() * (cpi * sps - spi * cps), spi * sps + cpi * cps)
}

pub fn patch_scattered_field(
    patch: &Patch,
    wave: &PlaneWave,
    obs: &ObservationPoint,
    ctx: &WaveContext,
) -> SphericalField {
    let inc = wave.direction;
    let sct = obs.direction;
    let sa = sampling_sa(patch.a, patch.b, sct, inc, ctx);
    let common =
        ctx.c() * (patch.area / ctx.wavelength()) * ctx.propagation(obs.r) * (wave.amplitude * inc.theta.cos() * sa);
    let (f_theta, f_phi) = polarization_factors(inc, sct);
    SphericalField {
        e_r: Complex64::new(0.0, 0.0),
        e_theta: common * f_theta,
        e_phi: common * f_phi,
    }
}

/// Closed-form scattered field strength.
pub fn patch_field_strength(patch: &Patch, wave: &PlaneWave, obs: &ObservationPoint, ctx: &WaveContext) -> f64 {
    let inc = wave.direction;
    let sct = obs.direction;
    let (f_theta, f_phi) = polarization_factors(inc, sct);
    ctx.c().norm() * patch.area / (ctx.wavelength() * obs.r)
        * wave.amplitude
        * inc.theta.cos()
        * sampling_sa(patch.a, patch.b, sct, inc, ctx).abs()
        * (f_theta * f_theta + f_phi * f_phi).sqrt()
}

/// Bistatic radar cross section in squared length units.
pub fn patch_bistatic_rcs(patch: &Patch, incident: Direction, scatter: Direction, ctx: &WaveContext) -> f64 {
    let (f_theta, f_phi) = polarization_factors(incident, scatter);
    let sa = sampling_sa(patch.a, patch.b, scatter, incident, ctx);
    let ratio = patch.area / ctx.wavelength();
    let cos_i = incident.theta.cos();
    4.0 * PI * ctx.c().norm_sqr() * ratio * ratio * cos_i * cos_i * (f_theta * f_theta + f_phi * f_phi) * sa * sa
}

/// Superposition of the fields produced by each incident wave.
pub fn patch_scattered_field_multi(
    patch: &Patch,
    waves: &[PlaneWave],
    obs: &ObservationPoint,
    ctx: &WaveContext,
) -> SphericalField {
    waves.iter().fold(SphericalField::zero(), |acc, w| {
        acc + patch_scattered_field(patch, w, obs, ctx)
    })
}

/// Radiation integrals `(N_θ, N_φ)` of the physical-optics surface current.
///
/// Currents are scaled by the medium impedance `η`, which cancels in the
/// far-field step. The returned values are therefore `η·N_θ` and `η·N_φ`.
pub fn po_radiation_integrals(
    patch: &Patch,
    wave: &PlaneWave,
    scatter: Direction,
    ctx: &WaveContext,
    quadrature_order: usize,
) -> Result<(Complex64, Complex64)> {
    if quadrature_order < 2 {
        return Err(Error::InvalidArgument(format!(
            "quadrature order must be at least 2, got {quadrature_order}"
        )));
    }
    let inc = wave.direction;
    let k = ctx.wavenumber();
    let (sti, cti) = inc.theta.sin_cos();
    let (spi, cpi) = inc.phi.sin_cos();
    let (sts, cts) = scatter.theta.sin_cos();
    let (sps, cps) = scatter.phi.sin_cos();

    // n × (1 − Γ) H^i on z = 0, with H^i = (E/η)(cosθ cosφ, cosθ sinφ, −sinθ)
    let strength = (Complex64::new(1.0, 0.0) - ctx.reflection()) * wave.amplitude;
    let jx_amp = -strength * (cti * spi);
    let jy_amp = strength * (cti * cpi);

    // project the current onto the spherical unit vectors of the scatter direction
    let n_theta_amp = jx_amp * (cts * cps) + jy_amp * (cts * sps);
    let n_phi_amp = -jx_amp * sps + jy_amp * cps;

    let (nodes, weights) = gauss_legendre(quadrature_order);
    let (hx, hy) = (patch.a / 2.0, patch.b / 2.0);
    let mut integral = Complex64::new(0.0, 0.0);
    for (xi, wx) in nodes.iter().zip(&weights) {
        let x = hx * xi;
        for (yj, wy) in nodes.iter().zip(&weights) {
            let y = hy * yj;
            // incident phase along the plate plus the r'·cosψ radiation kernel
            let phase = k * (x * sti * cpi + y * sti * spi) + k * (x * sts * cps + y * sts * sps);
            integral += Complex64::from_polar(wx * wy, phase);
        }
    }
    integral *= hx * hy;
    Ok((n_theta_amp * integral, n_phi_amp * integral))
}

/// Far-field components from impedance-scaled radiation integrals (no
/// magnetic current): `E_θ,φ = −j k e^{−jkr}/(4π r) · ηN_θ,φ`.
pub fn po_far_field(n_theta: Complex64, n_phi: Complex64, r: f64, ctx: &WaveContext) -> SphericalField {
    let k = ctx.wavenumber();
    let prefactor = -Complex64::i() * (k / (4.0 * PI)) * ctx.propagation(r);
    SphericalField {
        e_r: Complex64::new(0.0, 0.0),
        e_theta: prefactor * n_theta,
        e_phi: prefactor * n_phi,
    }
}
