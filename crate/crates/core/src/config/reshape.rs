//! Least-squares beam reshaping with joint area and phase weights.
//!
//! With `g_t = (C/λ) L_t` the scattered field is `E^s = diag(g) V_s y` where
//! `y_n = W_n Ê^i_n`. We solve `diag(g) V_s y ≈ E_d` for `y` and divide out
//! the illumination. On the regular grid `sinθ_t = -1 + 2t/N` with `d = λ/2`
//! and `T = N`, `V_s V_sᴴ = N·I` and the solve is a single adjoint product;
//! otherwise a truncated SVD is used.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mimo::{apply_mimo, MimoSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverChoice {
    /// DFT path when the grid qualifies, SVD otherwise.
    #[default]
    Auto,
    Dft,
    Svd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverPath {
    Dft,
    Svd,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReshapeOptions {
    /// Singular values below `truncation_tol · σ_max` are dropped.
    pub truncation_tol: f64,
    /// Largest tolerated `‖discarded part of E_d‖ / ‖E_d‖`.
    pub max_discarded_fraction: f64,
    /// Optional cap on the number of retained singular directions.
    pub max_rank: Option<usize>,
    pub solver: SolverChoice,
}

impl Default for ReshapeOptions {
    fn default() -> Self {
        Self {
            truncation_tol: 1e-8,
            max_discarded_fraction: 1e-2,
            max_rank: None,
            solver: SolverChoice::Auto,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditioningReport {
    pub solver: SolverPath,
    pub rank: usize,
    pub full_rank: usize,
    pub sigma_max: f64,
    pub sigma_min_retained: f64,
    pub truncation_threshold: f64,
    pub discarded_fraction: f64,
    /// Cells whose illumination fell under the zero guard and got `W_n = 0`.
    pub unlit_cells: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReshapeSolution {
    pub weights: Vec<Complex64>,
    pub residual_norm: f64,
    pub desired_norm: f64,
    pub conditioning: ConditioningReport,
}

impl ReshapeSolution {
    pub fn areas(&self) -> Vec<f64> {
        self.weights.iter().map(|w| w.norm()).collect()
    }

    pub fn phases(&self) -> Vec<f64> {
        self.weights.iter().map(|w| crate::em::wrap_phase(w.arg())).collect()
    }

    pub fn relative_residual(&self) -> f64 {
        if self.desired_norm == 0.0 {
            self.residual_norm
        } else {
            self.residual_norm / self.desired_norm
        }
    }
}

/// Relative illumination below which a cell counts as unlit.
const ZERO_GUARD: f64 = 1e-12;

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn is_dft_grid(sys: &MimoSystem) -> bool {
    let n = sys.cells();
    if sys.observations() != n || (sys.spacing() / sys.ctx().wavelength() - 0.5).abs() > 1e-12 {
        return false;
    }
    let r0 = sys.observation_radii()[0];
    sys.observation_radii().iter().all(|&r| r == r0)
        && sys
            .scatter_angles()
            .iter()
            .enumerate()
            .all(|(t, th)| (th.sin() - (-1.0 + 2.0 * t as f64 / n as f64)).abs() <= 1e-12)
}

fn solve_dft(sys: &MimoSystem, gains: &[Complex64], desired: &[Complex64]) -> (Vec<Complex64>, ConditioningReport) {
    let n = sys.cells();
    let v = sys.scatter_vandermonde();
    let g = gains[0];
    let y = (0..n)
        .map(|c| (0..n).fold(Complex64::new(0.0, 0.0), |acc, t| acc + v[(t, c)].conj() * desired[t]) / (g * n as f64))
        .collect();
    let sigma = g.norm() * (n as f64).sqrt();
    let report = ConditioningReport {
        solver: SolverPath::Dft,
        rank: n,
        full_rank: n,
        sigma_max: sigma,
        sigma_min_retained: sigma,
        truncation_threshold: 0.0,
        discarded_fraction: 0.0,
        unlit_cells: Vec::new(),
    };
    (y, report)
}

fn solve_svd(
    sys: &MimoSystem,
    gains: &[Complex64],
    desired: &[Complex64],
    opts: &ReshapeOptions,
) -> Result<(Vec<Complex64>, ConditioningReport)> {
    let v = sys.scatter_vandermonde();
    let m = DMatrix::from_fn(v.nrows(), v.ncols(), |t, c| gains[t] * v[(t, c)]);
    let svd = m.svd(true, true);
    let u = svd.u.expect("left singular vectors requested");
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sv = &svd.singular_values;

    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&a, &b| sv[b].total_cmp(&sv[a]));
    let sigma_max = order.first().map_or(0.0, |&i| sv[i]);
    let threshold = opts.truncation_tol * sigma_max;
    let cap = opts.max_rank.unwrap_or(usize::MAX);

    let e = DVector::from_column_slice(desired);
    let mut y = DVector::<Complex64>::zeros(sys.cells());
    let mut rank = 0;
    let mut sigma_min_retained = 0.0;
    let mut discarded_sq = 0.0;
    for &i in &order {
        let coeff = u.column(i).dotc(&e);
        if sv[i] > threshold && sv[i] > 0.0 && rank < cap {
            y += v_t.row(i).adjoint() * (coeff / sv[i]);
            rank += 1;
            sigma_min_retained = sv[i];
        } else {
            discarded_sq += coeff.norm_sqr();
        }
    }
    let e_norm = e.norm();
    let discarded_fraction = if e_norm == 0.0 {
        0.0
    } else {
        discarded_sq.sqrt() / e_norm
    };
    if discarded_fraction > opts.max_discarded_fraction {
        return Err(Error::IllConditioned {
            discarded_fraction,
            limit: opts.max_discarded_fraction,
        });
    }
    let report = ConditioningReport {
        solver: SolverPath::Svd,
        rank,
        full_rank: sv.len(),
        sigma_max,
        sigma_min_retained,
        truncation_threshold: threshold,
        discarded_fraction,
        unlit_cells: Vec::new(),
    };
    Ok((y.iter().copied().collect(), report))
}

/// Weights `W` whose scattered field best matches `desired` at the system's
/// observation points, for the given incident amplitudes.
pub fn beam_reshape(
    sys: &MimoSystem,
    incident: &[Complex64],
    desired: &[Complex64],
    opts: &ReshapeOptions,
) -> Result<ReshapeSolution> {
    if desired.len() != sys.observations() {
        return Err(Error::DimensionMismatch {
            expected: sys.observations(),
            actual: desired.len(),
            context: "desired field vector",
        });
    }
    if !(opts.truncation_tol >= 0.0 && opts.max_discarded_fraction >= 0.0) {
        return Err(Error::InvalidArgument("reshape tolerances must be non-negative".into()));
    }
    let e_hat = sys.effective_incident(incident)?;
    let pre = sys.prefactor();
    let gains: Vec<Complex64> = sys.propagation().into_iter().map(|l| pre * l).collect();

    let dft = is_dft_grid(sys);
    let (y, mut report) = match opts.solver {
        SolverChoice::Dft if !dft => {
            return Err(Error::InvalidArgument(
                "DFT solver needs T = N, d = λ/2, equal radii and the regular sine grid".into(),
            ))
        }
        SolverChoice::Dft => solve_dft(sys, &gains, desired),
        SolverChoice::Auto if dft && opts.max_rank.is_none() => solve_dft(sys, &gains, desired),
        _ => solve_svd(sys, &gains, desired, opts)?,
    };

    let peak = e_hat.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let floor = ZERO_GUARD * peak;
    let weights: Vec<Complex64> = y
        .iter()
        .zip(&e_hat)
        .enumerate()
        .map(|(n, (yn, en))| {
            if peak == 0.0 || en.norm() < floor {
                report.unlit_cells.push(n);
                Complex64::new(0.0, 0.0)
            } else {
                yn / en
            }
        })
        .collect();

    let achieved = apply_mimo(&sys.with_weights(&weights)?, incident)?;
    let diff: Vec<Complex64> = achieved.iter().zip(desired).map(|(a, d)| a - d).collect();
    Ok(ReshapeSolution {
        weights,
        residual_norm: norm(&diff),
        desired_norm: norm(desired),
        conditioning: report,
    })
}
