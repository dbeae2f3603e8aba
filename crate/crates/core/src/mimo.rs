//! Canonical linear system for a uniform linear RIS:
//!
//! ```text
//! E^s = (C/λ) · L · V_s · W · V_iᵀ · cos_i · E^i
//! ```
//!
//! `L` holds the per-observation propagation factors, `V_s` (T×N) and `V_i`
//! (M×N) are Vandermonde steering matrices, `W` the complex cell weights and
//! `cos_i` the incident obliquity factors. The model assumes `b_n ≪ λ`, i.e.
//! `Sa ≡ 1`; this is recorded as `sa_model = "unity"` in the serialized form.
//!
//! Only the factors are stored. [`apply_mimo`] evaluates the chain right to
//! left without forming the dense product.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::em::WaveContext;
use crate::error::{Error, Result};
use crate::linear::{InPlanePoint, LinearRis};

pub const DOCUMENT_FORMAT: &str = "ris-models/mimo-system";
pub const DOCUMENT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct MimoSystem {
    ctx: WaveContext,
    spacing: f64,
    observation_radii: Vec<f64>,
    scatter_angles: Vec<f64>,
    incident_angles: Vec<f64>,
    weights: Vec<Complex64>,
    max_cell_width: f64,
}

/// Entry `(row, col)` of `Vander(x_1..x_m)`, i.e. `x_row^col` with
/// `x = e^{j·phase_step}`, computed directly from the phase.
fn vander_entry(phase_step: f64, col: usize) -> Complex64 {
    Complex64::from_polar(1.0, phase_step * col as f64)
}

/// `rows × n` Vandermonde matrix on unit-modulus knots `e^{j·steps[r]}`.
pub fn vandermonde(steps: &[f64], n: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(steps.len(), n, |r, c| vander_entry(steps[r], c))
}

impl MimoSystem {
    pub fn cells(&self) -> usize {
        self.weights.len()
    }

    pub fn observations(&self) -> usize {
        self.scatter_angles.len()
    }

    pub fn incident(&self) -> usize {
        self.incident_angles.len()
    }

    pub fn ctx(&self) -> &WaveContext {
        &self.ctx
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn scatter_angles(&self) -> &[f64] {
        &self.scatter_angles
    }

    pub fn incident_angles(&self) -> &[f64] {
        &self.incident_angles
    }

    pub fn observation_radii(&self) -> &[f64] {
        &self.observation_radii
    }

    /// Largest cell width of the RIS the system was built from; a diagnostic
    /// for how well `Sa ≡ 1` holds.
    pub fn max_cell_width(&self) -> f64 {
        self.max_cell_width
    }

    /// Scalar prefactor `C/λ`.
    pub fn prefactor(&self) -> Complex64 {
        self.ctx.c() / self.ctx.wavelength()
    }

    /// Diagonal of `L`.
    pub fn propagation(&self) -> Vec<Complex64> {
        self.observation_radii
            .iter()
            .map(|&r| self.ctx.propagation(r))
            .collect()
    }

    /// Diagonal of `cos_i`.
    pub fn incident_cos(&self) -> Vec<f64> {
        self.incident_angles.iter().map(|t| t.cos()).collect()
    }

    fn step(&self, theta: f64) -> f64 {
        self.ctx.wavenumber() * self.spacing * theta.sin()
    }

    fn scatter_steps(&self) -> Vec<f64> {
        self.scatter_angles.iter().map(|&t| self.step(t)).collect()
    }

    fn incident_steps(&self) -> Vec<f64> {
        self.incident_angles.iter().map(|&t| self.step(t)).collect()
    }

    pub fn scatter_knots(&self) -> Vec<Complex64> {
        self.scatter_steps()
            .into_iter()
            .map(|s| Complex64::from_polar(1.0, s))
            .collect()
    }

    pub fn incident_knots(&self) -> Vec<Complex64> {
        self.incident_steps()
            .into_iter()
            .map(|s| Complex64::from_polar(1.0, s))
            .collect()
    }

    /// `V_s`, T × N.
    pub fn scatter_vandermonde(&self) -> DMatrix<Complex64> {
        vandermonde(&self.scatter_steps(), self.cells())
    }

    /// `V_i`, M × N.
    pub fn incident_vandermonde(&self) -> DMatrix<Complex64> {
        vandermonde(&self.incident_steps(), self.cells())
    }

    /// Same factors with the weight diagonal replaced.
    pub fn with_weights(&self, weights: &[Complex64]) -> Result<Self> {
        if weights.len() != self.cells() {
            return Err(Error::DimensionMismatch {
                expected: self.cells(),
                actual: weights.len(),
                context: "weight vector",
            });
        }
        Ok(Self {
            weights: weights.to_vec(),
            ..self.clone()
        })
    }

    /// `Ê^i = V_iᵀ · cos_i · E^i`, the per-cell effective illumination.
    pub fn effective_incident(&self, incident: &[Complex64]) -> Result<Vec<Complex64>> {
        if incident.len() != self.incident() {
            return Err(Error::DimensionMismatch {
                expected: self.incident(),
                actual: incident.len(),
                context: "incident amplitude vector",
            });
        }
        let steps = self.incident_steps();
        let scaled: Vec<Complex64> = incident
            .iter()
            .zip(&self.incident_angles)
            .map(|(e, t)| e * t.cos())
            .collect();
        Ok((0..self.cells())
            .map(|n| {
                steps
                    .iter()
                    .zip(&scaled)
                    .fold(Complex64::new(0.0, 0.0), |acc, (&s, &x)| acc + vander_entry(s, n) * x)
            })
            .collect())
    }

    /// `(C/λ) · L · V_s · z` for a per-cell vector `z`.
    pub(crate) fn radiate(&self, per_cell: &[Complex64]) -> Vec<Complex64> {
        let pre = self.prefactor();
        self.scatter_steps()
            .iter()
            .zip(self.propagation())
            .map(|(&s, l)| {
                let row = per_cell
                    .iter()
                    .enumerate()
                    .fold(Complex64::new(0.0, 0.0), |acc, (n, z)| acc + vander_entry(s, n) * z);
                pre * l * row
            })
            .collect()
    }

    /// Dense T × M transfer matrix. Intended for small systems and checks.
    pub fn transfer_matrix(&self) -> DMatrix<Complex64> {
        let l = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.propagation()));
        let w = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.weights.clone()));
        let cos = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.incident(),
            self.incident_cos().into_iter().map(|c| Complex64::new(c, 0.0)),
        ));
        (l * self.scatter_vandermonde() * w * self.incident_vandermonde().transpose() * cos) * self.prefactor()
    }

    /// 2-norm condition number of `V_s` (ratio of extreme singular values).
    pub fn scatter_condition_number(&self) -> f64 {
        condition_number(self.scatter_vandermonde())
    }

    pub fn incident_condition_number(&self) -> f64 {
        condition_number(self.incident_vandermonde())
    }

    pub fn to_document(&self) -> MimoDocument {
        MimoDocument {
            format: DOCUMENT_FORMAT.to_string(),
            version: DOCUMENT_VERSION,
            sa_model: SaModel::Unity,
            dimensions: Dimensions {
                observations: self.observations(),
                cells: self.cells(),
                incident: self.incident(),
            },
            wavelength: self.ctx.wavelength(),
            reflection: self.ctx.reflection(),
            spacing: self.spacing,
            max_cell_width: self.max_cell_width,
            prefactor: self.prefactor(),
            observation_radii: self.observation_radii.clone(),
            propagation: self.propagation(),
            scatter_angles_rad: self.scatter_angles.clone(),
            scatter_knots: self.scatter_knots(),
            weights: self.weights.clone(),
            incident_angles_rad: self.incident_angles.clone(),
            incident_knots: self.incident_knots(),
            incident_cos: self.incident_cos(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_document())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: MimoDocument = serde_json::from_str(text)?;
        Self::from_document(&doc)
    }

    /// Rebuilds a system from its document. Derived lists (knots,
    /// propagation, cosines, prefactor) are checked against the primary
    /// fields and rejected if inconsistent.
    pub fn from_document(doc: &MimoDocument) -> Result<Self> {
        if doc.format != DOCUMENT_FORMAT || doc.version != DOCUMENT_VERSION {
            return Err(Error::validation(
                "format",
                format!("unsupported document {} v{}", doc.format, doc.version),
            ));
        }
        let ctx = WaveContext::new(doc.wavelength, doc.reflection)
            .ok_or_else(|| Error::validation("wavelength", "must be positive"))?;
        let d = &doc.dimensions;
        let lens = [
            ("observation_radii", doc.observation_radii.len(), d.observations),
            ("propagation", doc.propagation.len(), d.observations),
            ("scatter_angles_rad", doc.scatter_angles_rad.len(), d.observations),
            ("scatter_knots", doc.scatter_knots.len(), d.observations),
            ("weights", doc.weights.len(), d.cells),
            ("incident_angles_rad", doc.incident_angles_rad.len(), d.incident),
            ("incident_knots", doc.incident_knots.len(), d.incident),
            ("incident_cos", doc.incident_cos.len(), d.incident),
        ];
        for (field, got, want) in lens {
            if got != want {
                return Err(Error::validation(
                    field,
                    format!("expected {want} entries, found {got}"),
                ));
            }
        }
        let sys = Self {
            ctx,
            spacing: doc.spacing,
            observation_radii: doc.observation_radii.clone(),
            scatter_angles: doc.scatter_angles_rad.clone(),
            incident_angles: doc.incident_angles_rad.clone(),
            weights: doc.weights.clone(),
            max_cell_width: doc.max_cell_width,
        };
        let close = |a: Complex64, b: Complex64| (a - b).norm() <= 1e-9 * (1.0 + b.norm());
        let derived = sys.to_document();
        let consistent = close(doc.prefactor, derived.prefactor)
            && doc
                .propagation
                .iter()
                .zip(&derived.propagation)
                .all(|(a, b)| close(*a, *b))
            && doc
                .scatter_knots
                .iter()
                .zip(&derived.scatter_knots)
                .all(|(a, b)| close(*a, *b))
            && doc
                .incident_knots
                .iter()
                .zip(&derived.incident_knots)
                .all(|(a, b)| close(*a, *b))
            && doc
                .incident_cos
                .iter()
                .zip(&derived.incident_cos)
                .all(|(a, b)| (a - b).abs() <= 1e-9);
        if !consistent {
            return Err(Error::validation(
                "knots",
                "derived factors disagree with angles and wavelength",
            ));
        }
        Ok(sys)
    }
}

fn condition_number(m: DMatrix<Complex64>) -> f64 {
    let sv = m.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    max / min
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SaModel {
    /// Cell directivity replaced by one (`b ≪ λ`).
    Unity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dimensions {
    pub observations: usize,
    pub cells: usize,
    pub incident: usize,
}

/// JSON layout of a [`MimoSystem`]. Complex numbers are `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MimoDocument {
    pub format: String,
    pub version: u32,
    pub sa_model: SaModel,
    pub dimensions: Dimensions,
    pub wavelength: f64,
    pub reflection: Complex64,
    pub spacing: f64,
    pub max_cell_width: f64,
    pub prefactor: Complex64,
    pub observation_radii: Vec<f64>,
    pub propagation: Vec<Complex64>,
    pub scatter_angles_rad: Vec<f64>,
    pub scatter_knots: Vec<Complex64>,
    pub weights: Vec<Complex64>,
    pub incident_angles_rad: Vec<f64>,
    pub incident_knots: Vec<Complex64>,
    pub incident_cos: Vec<f64>,
}

/// Builds the factored system for `ris` with the given incident angles and
/// observation points. Cell widths are ignored (`Sa ≡ 1`).
pub fn assemble_mimo(ris: &LinearRis, incident_angles: &[f64], obs_points: &[InPlanePoint]) -> Result<MimoSystem> {
    if incident_angles.is_empty() {
        return Err(Error::InvalidArgument("at least one incident angle is required".into()));
    }
    if obs_points.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one observation point is required".into(),
        ));
    }
    if let Some(p) = obs_points.iter().find(|p| !(p.r.is_finite() && p.r > 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "observation radius must be positive, got {}",
            p.r
        )));
    }
    Ok(MimoSystem {
        ctx: ris.ctx,
        spacing: ris.spacing(),
        observation_radii: obs_points.iter().map(|p| p.r).collect(),
        scatter_angles: obs_points.iter().map(|p| p.theta).collect(),
        incident_angles: incident_angles.to_vec(),
        weights: ris.weights(),
        max_cell_width: ris.max_cell_width(),
    })
}

/// Evaluates the factored chain for one incident amplitude vector.
pub fn apply_mimo(sys: &MimoSystem, incident_amplitudes: &[Complex64]) -> Result<Vec<Complex64>> {
    let effective = sys.effective_incident(incident_amplitudes)?;
    let weighted: Vec<Complex64> = effective.iter().zip(&sys.weights).map(|(e, w)| e * w).collect();
    Ok(sys.radiate(&weighted))
}

/// Regular grid `sinθ_n = -1 + 2n/N`, n = 0..N-1, on which `V_s/√N` is a
/// DFT matrix when `d = λ/2`.
pub fn dft_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| (-1.0 + 2.0 * k as f64 / n as f64).asin()).collect()
}
