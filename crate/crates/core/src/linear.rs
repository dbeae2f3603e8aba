//! Uniform linear RIS along the y-axis, observed in the yoz plane.
//!
//! Cell `n` (zero-based here) sits at `[0, n·d, 0]`. Incident and scatter
//! angles are signed, `θ ∈ [-π/2, π/2]`, both measured from the z-axis; in
//! this plane the vector field collapses to a scalar.
//!
//! A cell width `b = 0` is accepted and means an isotropic point scatterer
//! (`Sa ≡ 1` exactly), the `b ≪ λ` limit used by the matrix model.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::array::{RisGeometry, UnitCell};
use crate::em::{sampling_sa_linear, wrap_phase, WaveContext};
use crate::error::{Error, Result};
use crate::patch::Patch;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearCell {
    pub area: f64,
    pub b: f64,
    phase_shift: f64,
}

impl LinearCell {
    pub fn new(area: f64, b: f64, phase_shift: f64) -> Self {
        Self {
            area,
            b,
            phase_shift: wrap_phase(phase_shift),
        }
    }

    pub fn phase_shift(&self) -> f64 {
        self.phase_shift
    }

    /// Complex weight `A e^{jΩ}`.
    pub fn weight(&self) -> Complex64 {
        Complex64::from_polar(self.area, self.phase_shift)
    }
}

/// Plane wave in the yoz plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InPlaneWave {
    pub theta: f64,
    pub amplitude: f64,
}

impl InPlaneWave {
    pub const fn new(theta: f64, amplitude: f64) -> Self {
        Self { theta, amplitude }
    }
}

/// Far-field observation point `(r, θ)` in the yoz plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InPlanePoint {
    pub r: f64,
    pub theta: f64,
}

impl InPlanePoint {
    pub const fn new(r: f64, theta: f64) -> Self {
        Self { r, theta }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearRis {
    cells: Vec<LinearCell>,
    spacing: f64,
    pub ctx: WaveContext,
}

impl LinearRis {
    pub fn new(cells: Vec<LinearCell>, spacing: f64, ctx: WaveContext) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::validation("n", "a linear RIS needs at least one cell"));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::validation("spacing", format!("must be positive, got {spacing}")));
        }
        for c in &cells {
            if !(c.area.is_finite() && c.area >= 0.0) {
                return Err(Error::validation(
                    "area",
                    format!("must be non-negative, got {}", c.area),
                ));
            }
            if !(c.b.is_finite() && c.b >= 0.0) {
                return Err(Error::validation("b", format!("must be non-negative, got {}", c.b)));
            }
        }
        Ok(Self { cells, spacing, ctx })
    }

    /// `n` identical cells with zero phase.
    pub fn uniform(n: usize, spacing: f64, area: f64, b: f64, ctx: WaveContext) -> Result<Self> {
        Self::new(vec![LinearCell::new(area, b, 0.0); n], spacing, ctx)
    }

    pub fn cells(&self) -> &[LinearCell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn phases(&self) -> Vec<f64> {
        self.cells.iter().map(|c| c.phase_shift).collect()
    }

    pub fn weights(&self) -> Vec<Complex64> {
        self.cells.iter().map(LinearCell::weight).collect()
    }

    pub fn total_area(&self) -> f64 {
        self.cells.iter().map(|c| c.area).sum()
    }

    /// Common collecting area, if every cell shares one.
    pub fn uniform_area(&self) -> Option<f64> {
        let a = self.cells[0].area;
        self.cells.iter().all(|c| c.area == a).then_some(a)
    }

    pub fn max_cell_width(&self) -> f64 {
        self.cells.iter().map(|c| c.b).fold(0.0, f64::max)
    }

    pub fn set_phases(&mut self, phases: &[f64]) -> Result<()> {
        if phases.len() != self.cells.len() {
            return Err(Error::DimensionMismatch {
                expected: self.cells.len(),
                actual: phases.len(),
                context: "phase vector",
            });
        }
        for (c, &p) in self.cells.iter_mut().zip(phases) {
            c.phase_shift = wrap_phase(p);
        }
        Ok(())
    }

    pub fn with_phases(mut self, phases: &[f64]) -> Result<Self> {
        self.set_phases(phases)?;
        Ok(self)
    }

    /// Replaces area and phase of every cell from complex weights `A_n e^{jΩ_n}`.
    pub fn set_weights(&mut self, weights: &[Complex64]) -> Result<()> {
        if weights.len() != self.cells.len() {
            return Err(Error::DimensionMismatch {
                expected: self.cells.len(),
                actual: weights.len(),
                context: "weight vector",
            });
        }
        for (c, w) in self.cells.iter_mut().zip(weights) {
            c.area = w.norm();
            c.phase_shift = wrap_phase(w.arg());
        }
        Ok(())
    }

    /// Equivalent general array; cells become `a × b_n` patches on the y-axis.
    /// `a` only enters through the x-directed sinc, which is 1 in the yoz plane.
    pub fn to_geometry(&self, a: f64) -> Result<RisGeometry> {
        let cells = self
            .cells
            .iter()
            .enumerate()
            .map(|(n, c)| {
                Ok(UnitCell::new(
                    [0.0, n as f64 * self.spacing, 0.0],
                    Patch::with_area(a, c.b, c.area)?,
                    c.phase_shift,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        RisGeometry::new(cells, self.ctx)
    }

    /// Per-cell progressive phase `2π d (sinθi + sinθs)/λ`.
    pub(crate) fn progressive_phase(&self, theta_i: f64, theta_s: f64) -> f64 {
        self.ctx.wavenumber() * self.spacing * (theta_i.sin() + theta_s.sin())
    }
}

/// `C Σ_n (A_n/λ) e^{jΩ_n} Sa(b_n; θs; θi) e^{j2π n d (sinθi + sinθs)/λ}`.
///
/// The polarization factor `cosθi` is not part of the steering function.
pub fn steering_function(ris: &LinearRis, theta_i: f64, theta_s: f64) -> Complex64 {
    let ctx = &ris.ctx;
    let lambda = ctx.wavelength();
    let psi = ris.progressive_phase(theta_i, theta_s);
    let sum = ris
        .cells
        .iter()
        .enumerate()
        .fold(Complex64::new(0.0, 0.0), |acc, (n, c)| {
            let sa = sampling_sa_linear(c.b, theta_s, theta_i, ctx);
            acc + Complex64::from_polar(c.area / lambda * sa, c.phase_shift + n as f64 * psi)
        });
    ctx.c() * sum
}

pub fn linear_field(ris: &LinearRis, wave: &InPlaneWave, obs: &InPlanePoint) -> Complex64 {
    ris.ctx.propagation(obs.r) * (wave.amplitude * wave.theta.cos()) * steering_function(ris, wave.theta, obs.theta)
}

pub fn linear_rcs(ris: &LinearRis, theta_i: f64, theta_s: f64) -> f64 {
    let c = theta_i.cos();
    4.0 * PI * c * c * steering_function(ris, theta_i, theta_s).norm_sqr()
}

pub fn linear_field_multi(ris: &LinearRis, waves: &[InPlaneWave], obs: &InPlanePoint) -> Complex64 {
    waves
        .iter()
        .fold(Complex64::new(0.0, 0.0), |acc, w| acc + linear_field(ris, w, obs))
}
