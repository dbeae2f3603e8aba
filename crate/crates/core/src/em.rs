//! Shared geometric and electromagnetic primitives.
//!
//! Angles are radians throughout the library. Lengths may use any unit as long
//! as the wavelength uses the same one; every model depends only on
//! length/wavelength ratios plus the `1/r` far-field attenuation.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Below this magnitude `sinc_normalized` switches to its Taylor expansion.
pub const SINC_TAYLOR_THRESHOLD: f64 = 1e-6;

/// Narrowband wave constants shared by every model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveContext {
    wavelength: f64,
    reflection: Complex64,
}

impl WaveContext {
    /// Builds a context; returns `None` unless `wavelength` is finite and positive.
    pub fn new(wavelength: f64, reflection: Complex64) -> Option<Self> {
        (wavelength.is_finite() && wavelength > 0.0).then_some(Self { wavelength, reflection })
    }

    /// Perfect electric conductor (`Γ = -1`) at the given wavelength.
    pub fn pec(wavelength: f64) -> Option<Self> {
        Self::new(wavelength, Complex64::new(-1.0, 0.0))
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn reflection(&self) -> Complex64 {
        self.reflection
    }

    /// Wavenumber `2π/λ`.
    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    /// Scattering constant `C = -j(1 - Γ)/2`, always derived from `Γ`.
    pub fn c(&self) -> Complex64 {
        -Complex64::i() * (Complex64::new(1.0, 0.0) - self.reflection) * 0.5
    }

    /// Spherical propagation factor `e^{-j2πr/λ} / r`.
    pub fn propagation(&self, r: f64) -> Complex64 {
        Complex64::from_polar(1.0 / r, -self.wavenumber() * r)
    }
}

impl Default for WaveContext {
    /// Wavelength-normalized PEC context (`λ = 1`, `Γ = -1`).
    fn default() -> Self {
        Self {
            wavelength: 1.0,
            reflection: Complex64::new(-1.0, 0.0),
        }
    }
}

/// A direction in spherical coordinates, measured from the z-axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    pub theta: f64,
    pub phi: f64,
}

impl Direction {
    pub const fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    pub fn from_degrees(theta_deg: f64, phi_deg: f64) -> Self {
        Self::new(theta_deg.to_radians(), phi_deg.to_radians())
    }

    /// Maps a signed in-plane angle of the yoz plane onto a full spherical
    /// direction: positive angles lie on `φ = π/2`, negative ones on `φ = -π/2`.
    pub fn from_yoz(theta: f64) -> Self {
        let phi = if theta < 0.0 { -PI / 2.0 } else { PI / 2.0 };
        Self::new(theta.abs(), phi)
    }

    /// True when `θ ∈ [0, π]` and `φ ∈ [-π, π]`.
    pub fn is_spherical(&self) -> bool {
        (0.0..=PI).contains(&self.theta) && (-PI..=PI).contains(&self.phi)
    }

    /// Unit vector `[sinθ cosφ, sinθ sinφ, cosθ]`.
    pub fn unit_vector(&self) -> [f64; 3] {
        direction_vector(*self)
    }
}

/// Observation point in the far field of the scatterer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservationPoint {
    pub r: f64,
    pub direction: Direction,
}

impl ObservationPoint {
    pub const fn new(r: f64, direction: Direction) -> Self {
        Self { r, direction }
    }
}

pub fn direction_vector(d: Direction) -> [f64; 3] {
    let (st, ct) = d.theta.sin_cos();
    let (sp, cp) = d.phi.sin_cos();
    [st * cp, st * sp, ct]
}

pub fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// `sin(x)/x` with the removable singularity at zero filled in.
pub fn sinc_normalized(x: f64) -> f64 {
    if x.abs() < SINC_TAYLOR_THRESHOLD {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Intrinsic directivity of an `a × b` plate: the product of two sinc terms
/// whose arguments are symmetric sums over the scatter and incident angles.
pub fn sampling_sa(a: f64, b: f64, scatter: Direction, incident: Direction, ctx: &WaveContext) -> f64 {
    let us = direction_vector(scatter);
    let ui = direction_vector(incident);
    let lambda = ctx.wavelength();
    sinc_normalized(PI * a / lambda * (us[0] + ui[0])) * sinc_normalized(PI * b / lambda * (us[1] + ui[1]))
}

/// Single-sinc directivity for the in-plane (yoz) model with signed angles.
pub fn sampling_sa_linear(b: f64, theta_s: f64, theta_i: f64, ctx: &WaveContext) -> f64 {
    sinc_normalized(PI * b / ctx.wavelength() * (theta_s.sin() + theta_i.sin()))
}

/// Wraps an angle onto `[0, 2π)`.
pub fn wrap_phase(angle: f64) -> f64 {
    let w = angle.rem_euclid(2.0 * PI);
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if w >= 2.0 * PI {
        0.0
    } else {
        w
    }
}
