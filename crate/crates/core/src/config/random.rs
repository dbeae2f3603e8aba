//! Random binary phase configuration and its closed-form moments.
//!
//! Phases are i.i.d. on `{0, π}` with equal probability, so `E[e^{jΩ}] = 0`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::em::sampling_sa_linear;
use crate::error::{Error, Result};
use crate::linear::{linear_field_multi, InPlanePoint, InPlaneWave, LinearRis};

/// Binary phase law. Only the seed is configurable; the support is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomPhaseLaw {
    pub seed: u64,
}

impl RandomPhaseLaw {
    pub const SUPPORT: [f64; 2] = [0.0, PI];

    pub fn draw(&self, n: usize) -> Vec<f64> {
        random_phase_draw(n, self.seed)
    }

    /// Draw for Monte Carlo trial `trial`; independent of evaluation order.
    pub fn draw_trial(&self, n: usize, trial: u64) -> Vec<f64> {
        draw_from(&mut trial_rng(self.seed, trial), n)
    }
}

/// Generator for one Monte Carlo trial: the seed selects the key, the trial
/// index the ChaCha stream.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn draw_from(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| if rng.random::<bool>() { PI } else { 0.0 }).collect()
}

/// `n` i.i.d. phases on `{0, π}`, deterministic in `seed`.
pub fn random_phase_draw(n: usize, seed: u64) -> Vec<f64> {
    draw_from(&mut ChaCha8Rng::seed_from_u64(seed), n)
}

/// `Σ_n (A_n/λ)² Sa_n²` for one incident/scatter pair.
fn incoherent_area_sum(ris: &LinearRis, theta_i: f64, theta_s: f64) -> f64 {
    let lambda = ris.ctx.wavelength();
    ris.cells()
        .iter()
        .map(|c| {
            let r = c.area / lambda * sampling_sa_linear(c.b, theta_s, theta_i, &ris.ctx);
            r * r
        })
        .sum()
}

/// Expected `|E^s|²` at `obs` for a single incident wave.
pub fn random_phase_expected_power(ris: &LinearRis, wave: &InPlaneWave, obs: &InPlanePoint) -> f64 {
    let e = wave.amplitude * wave.theta.cos() / obs.r;
    ris.ctx.c().norm_sqr() * e * e * incoherent_area_sum(ris, wave.theta, obs.theta)
}

/// Expected bistatic RCS; independent of `θs` when every `b_n = 0`.
pub fn random_phase_expected_rcs(ris: &LinearRis, theta_i: f64, theta_s: f64) -> f64 {
    let c = theta_i.cos();
    4.0 * PI * ris.ctx.c().norm_sqr() * c * c * incoherent_area_sum(ris, theta_i, theta_s)
}

/// Expected `|E^s|²` at radius `r` under several incident waves, in the
/// `Sa ≡ 1` model: `|C|² r⁻² Σ_n (A_n/λ)² |Ê^i_n|²` with
/// `Ê^i = V_iᵀ cos_i E^i`.
pub fn random_phase_miso_expected_power(ris: &LinearRis, waves: &[InPlaneWave], r: f64) -> f64 {
    let lambda = ris.ctx.wavelength();
    let k = ris.ctx.wavenumber();
    let d = ris.spacing();
    let sum: f64 = ris
        .cells()
        .iter()
        .enumerate()
        .map(|(n, c)| {
            let e_hat = waves.iter().fold(Complex64::new(0.0, 0.0), |acc, w| {
                acc + Complex64::from_polar(w.amplitude * w.theta.cos(), k * d * n as f64 * w.theta.sin())
            });
            (c.area / lambda).powi(2) * e_hat.norm_sqr()
        })
        .sum();
    ris.ctx.c().norm_sqr() * sum / (r * r)
}

/// Expected `|E^s|²` at `obs` under several incident waves with each cell's
/// own `Sa` factor: `|C|² r⁻² Σ_n (A_n/λ)² |Σ_m E_m cosθ_m Sa_nm e^{jk n d sinθ_m}|²`.
/// Reduces to [`random_phase_expected_power`] for one wave and to
/// [`random_phase_miso_expected_power`] when every `b_n = 0`.
pub fn random_phase_expected_power_multi(ris: &LinearRis, waves: &[InPlaneWave], obs: &InPlanePoint) -> f64 {
    let lambda = ris.ctx.wavelength();
    let k = ris.ctx.wavenumber();
    let d = ris.spacing();
    let sum: f64 = ris
        .cells()
        .iter()
        .enumerate()
        .map(|(n, c)| {
            let e_hat = waves.iter().fold(Complex64::new(0.0, 0.0), |acc, w| {
                let sa = sampling_sa_linear(c.b, obs.theta, w.theta, &ris.ctx);
                acc + Complex64::from_polar(w.amplitude * w.theta.cos() * sa, k * d * n as f64 * w.theta.sin())
            });
            (c.area / lambda).powi(2) * e_hat.norm_sqr()
        })
        .sum();
    ris.ctx.c().norm_sqr() * sum / (obs.r * obs.r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
}

/// Sample mean of `|E^s|²` at each observation point over `trials` random
/// phase draws. Trials run in parallel; each draws from its own stream and
/// the reduction runs in trial order, so results do not depend on the
/// thread count.
pub fn monte_carlo_power(
    ris: &LinearRis,
    waves: &[InPlaneWave],
    points: &[InPlanePoint],
    trials: u64,
    seed: u64,
) -> Result<Vec<MonteCarloEstimate>> {
    if trials < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 trials, got {trials}")));
    }
    let law = RandomPhaseLaw { seed };
    let samples: Vec<Vec<f64>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let configured = ris.clone().with_phases(&law.draw_trial(ris.len(), t))?;
            Ok(points
                .iter()
                .map(|p| linear_field_multi(&configured, waves, p).norm_sqr())
                .collect())
        })
        .collect::<Result<_>>()?;

    let tf = trials as f64;
    Ok((0..points.len())
        .map(|j| {
            let mean = samples.iter().map(|s| s[j]).sum::<f64>() / tf;
            let var = samples.iter().map(|s| (s[j] - mean).powi(2)).sum::<f64>() / (tf - 1.0);
            MonteCarloEstimate {
                mean,
                std_error: (var / tf).sqrt(),
                trials,
            }
        })
        .collect())
}
