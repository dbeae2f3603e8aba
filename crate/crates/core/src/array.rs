//! Scattering from planar or conformal arrays of patches.
//!
//! Each cell is a patch parallel to the xy-plane at an arbitrary position.
//! Cells are superposed coherently with a configured phase `e^{jΩ_n}` and the
//! interelement path-length phase of both the incident and scattered paths.
//! Mutual coupling and shadowing are ignored.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::em::{direction_vector, dot, sampling_sa, wrap_phase, Direction, ObservationPoint, WaveContext};
use crate::error::{Error, Result};
use crate::patch::{polarization_factors, Patch, PlaneWave, SphericalField};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitCell {
    pub position: [f64; 3],
    pub patch: Patch,
    /// Configured phase shift, kept on `[0, 2π)`.
    phase_shift: f64,
}

impl UnitCell {
    pub fn new(position: [f64; 3], patch: Patch, phase_shift: f64) -> Self {
        Self {
            position,
            patch,
            phase_shift: wrap_phase(phase_shift),
        }
    }

    pub fn phase_shift(&self) -> f64 {
        self.phase_shift
    }

    pub fn set_phase_shift(&mut self, omega: f64) {
        self.phase_shift = wrap_phase(omega);
    }
}

/// Ordered cells plus the wave constants; the cell order is the sum index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RisGeometry {
    cells: Vec<UnitCell>,
    pub ctx: WaveContext,
}

impl RisGeometry {
    pub fn new(cells: Vec<UnitCell>, ctx: WaveContext) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::validation("cells", "an array needs at least one cell"));
        }
        Ok(Self { cells, ctx })
    }

    /// `nx × ny` grid in the xy-plane with spacings `dx`, `dy`, first cell at
    /// the origin, x index varying fastest. All phases zero.
    pub fn rectangular(nx: usize, ny: usize, dx: f64, dy: f64, patch: Patch, ctx: WaveContext) -> Result<Self> {
        let cells = (0..ny)
            .flat_map(|iy| (0..nx).map(move |ix| (ix, iy)))
            .map(|(ix, iy)| UnitCell::new([ix as f64 * dx, iy as f64 * dy, 0.0], patch, 0.0))
            .collect();
        Self::new(cells, ctx)
    }

    pub fn cells(&self) -> &[UnitCell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn set_phases(&mut self, phases: &[f64]) -> Result<()> {
        if phases.len() != self.cells.len() {
            return Err(Error::DimensionMismatch {
                expected: self.cells.len(),
                actual: phases.len(),
                context: "phase vector",
            });
        }
        for (cell, &omega) in self.cells.iter_mut().zip(phases) {
            cell.set_phase_shift(omega);
        }
        Ok(())
    }

    pub fn translated(&self, t: [f64; 3]) -> Self {
        let cells = self
            .cells
            .iter()
            .map(|c| {
                let p = c.position;
                UnitCell {
                    position: [p[0] + t[0], p[1] + t[1], p[2] + t[2]],
                    ..*c
                }
            })
            .collect();
        Self { cells, ctx: self.ctx }
    }
}

/// Phase `e^{j2π p·u(d)/λ}` accumulated by a cell at `p` relative to the origin.
pub fn path_length_phase(p: [f64; 3], d: Direction, ctx: &WaveContext) -> Complex64 {
    Complex64::from_polar(1.0, ctx.wavenumber() * dot(p, direction_vector(d)))
}

/// `Σ_n (A_n/λ) e^{jΩ_n} Sa_n e^{j2π p_n·(u_i + u_s)/λ}` for one incident direction.
pub fn array_factor(ris: &RisGeometry, incident: Direction, scatter: Direction) -> Complex64 {
    let ctx = &ris.ctx;
    let lambda = ctx.wavelength();
    let k = ctx.wavenumber();
    let ui = direction_vector(incident);
    let us = direction_vector(scatter);
    let u = [ui[0] + us[0], ui[1] + us[1], ui[2] + us[2]];
    ris.cells.iter().fold(Complex64::new(0.0, 0.0), |acc, cell| {
        let sa = sampling_sa(cell.patch.a, cell.patch.b, scatter, incident, ctx);
        let phase = cell.phase_shift + k * dot(cell.position, u);
        acc + Complex64::from_polar(cell.patch.area / lambda * sa, phase)
    })
}

pub fn ris_scattered_field(ris: &RisGeometry, wave: &PlaneWave, obs: &ObservationPoint) -> SphericalField {
    let ctx = &ris.ctx;
    let inc = wave.direction;
    let sct = obs.direction;
    let (f_theta, f_phi) = polarization_factors(inc, sct);
    let common = ctx.c() * ctx.propagation(obs.r) * (wave.amplitude * inc.theta.cos()) * array_factor(ris, inc, sct);
    SphericalField {
        e_r: Complex64::new(0.0, 0.0),
        e_theta: common * f_theta,
        e_phi: common * f_phi,
    }
}

/// Double sum over waves and cells.
pub fn ris_scattered_field_multi(ris: &RisGeometry, waves: &[PlaneWave], obs: &ObservationPoint) -> SphericalField {
    waves
        .iter()
        .fold(SphericalField::zero(), |acc, w| acc + ris_scattered_field(ris, w, obs))
}

/// Closed-form strength of the single-wave array field.
pub fn ris_field_strength(ris: &RisGeometry, wave: &PlaneWave, obs: &ObservationPoint) -> f64 {
    let inc = wave.direction;
    let sct = obs.direction;
    let (f_theta, f_phi) = polarization_factors(inc, sct);
    ris.ctx.c().norm() * wave.amplitude / obs.r
        * inc.theta.cos()
        * (f_theta * f_theta + f_phi * f_phi).sqrt()
        * array_factor(ris, inc, sct).norm()
}

pub fn ris_bistatic_rcs(ris: &RisGeometry, incident: Direction, scatter: Direction) -> f64 {
    let (f_theta, f_phi) = polarization_factors(incident, scatter);
    let cos_i = incident.theta.cos();
    4.0 * PI
        * ris.ctx.c().norm_sqr()
        * cos_i
        * cos_i
        * (f_theta * f_theta + f_phi * f_phi)
        * array_factor(ris, incident, scatter).norm_sqr()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patch::{patch_bistatic_rcs, patch_field_strength, patch_scattered_field};

    fn single_cell() -> (RisGeometry, Patch) {
        let patch = Patch::with_area(0.8, 1.3, 0.9).unwrap();
        let ris = RisGeometry::new(vec![UnitCell::new([0.0; 3], patch, 0.0)], WaveContext::default()).unwrap();
        (ris, patch)
    }

    #[test]
    fn path_phase_examples() {
        let ctx = WaveContext::default();
        assert_eq!(
            path_length_phase([0.0; 3], Direction::new(0.3, 0.1), &ctx),
            Complex64::new(1.0, 0.0)
        );
        let p = path_length_phase([0.0, 0.5, 0.0], Direction::new(PI / 2.0, PI / 2.0), &ctx);
        assert!((p - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        let p = path_length_phase([0.0, 0.5, 0.0], Direction::new(0.0, 1.3), &ctx);
        assert!((p - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn empty_geometry_rejected() {
        assert!(RisGeometry::new(vec![], WaveContext::default()).is_err());
    }

    #[test]
    fn single_cell_reduces_to_patch() {
        let (ris, patch) = single_cell();
        let ctx = ris.ctx;
        let wave = PlaneWave::new(Direction::new(0.4, 0.7), 1.3);
        let obs = ObservationPoint::new(40.0, Direction::new(1.1, -2.0));
        assert_eq!(
            ris_scattered_field(&ris, &wave, &obs),
            patch_scattered_field(&patch, &wave, &obs, &ctx)
        );
        let s = ris_field_strength(&ris, &wave, &obs);
        let p = patch_field_strength(&patch, &wave, &obs, &ctx);
        assert!((s - p).abs() <= 1e-14 * p);
        let r = ris_bistatic_rcs(&ris, wave.direction, obs.direction);
        let q = patch_bistatic_rcs(&patch, wave.direction, obs.direction, &ctx);
        assert!((r - q).abs() <= 1e-14 * q);
    }

    #[test]
    fn coincident_cells_add_coherently() {
        let patch = Patch::new(0.3, 0.4).unwrap();
        let n = 7;
        let ris = RisGeometry::new(vec![UnitCell::new([0.0; 3], patch, 0.0); n], WaveContext::default()).unwrap();
        let (one, _) = single_cell();
        let one = RisGeometry::new(vec![UnitCell::new([0.0; 3], patch, 0.0)], one.ctx).unwrap();
        let wave = PlaneWave::new(Direction::new(0.2, 0.1), 1.0);
        let obs = ObservationPoint::new(10.0, Direction::new(0.6, 2.0));
        let many = ris_scattered_field(&ris, &wave, &obs);
        let single = ris_scattered_field(&one, &wave, &obs);
        assert!((many.e_phi - single.e_phi * n as f64).norm() < 1e-15);
        let ratio = ris_bistatic_rcs(&ris, wave.direction, obs.direction)
            / ris_bistatic_rcs(&one, wave.direction, obs.direction);
        assert!((ratio - (n * n) as f64).abs() < 1e-10);
    }

    #[test]
    fn set_phases_checks_length() {
        let (mut ris, _) = single_cell();
        assert!(ris.set_phases(&[0.0, 1.0]).is_err());
        ris.set_phases(&[-PI / 2.0]).unwrap();
        assert!((ris.cells()[0].phase_shift() - 1.5 * PI).abs() < 1e-15);
    }
}
