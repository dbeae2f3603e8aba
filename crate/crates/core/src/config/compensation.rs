//! Continuous phase compensation and the lobes it produces.
//!
//! With `Δ = sinθi + sinθs` the phases `Ω_n = -2π n d Δ/λ` make every cell
//! add in phase for the designed pair. The same phases also steer any other
//! pair satisfying `d (sinθ̃i + sinθ̃s − Δ)/λ ∈ ℤ` (anomalous reflection) and,
//! for `d > λ/2`, can put additional copies of the main lobe in the visible
//! region (grating lobes).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::em::wrap_phase;
use crate::linear::LinearRis;

/// Sine-space slack when deciding whether a lobe is in the visible region.
const VISIBLE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseCompensation {
    pub delta: f64,
}

impl PhaseCompensation {
    pub fn steer(theta_i: f64, theta_s: f64) -> Self {
        Self {
            delta: theta_i.sin() + theta_s.sin(),
        }
    }

    pub fn specular() -> Self {
        Self { delta: 0.0 }
    }

    /// `Ω_n = -2π n d Δ/λ` wrapped onto `[0, 2π)`.
    pub fn phases(&self, n: usize, spacing: f64, wavelength: f64) -> Vec<f64> {
        (0..n)
            .map(|k| wrap_phase(-2.0 * PI * k as f64 * spacing * self.delta / wavelength))
            .collect()
    }
}

/// Phases that steer a wave from `theta_i` to `theta_s`.
pub fn phase_compensation(theta_i: f64, theta_s: f64, ris: &LinearRis) -> Vec<f64> {
    PhaseCompensation::steer(theta_i, theta_s).phases(ris.len(), ris.spacing(), ris.ctx.wavelength())
}

fn lobe_angles(base: f64, spacing: f64, wavelength: f64, include_zero: bool) -> Vec<f64> {
    let step = wavelength / spacing;
    // Every k with |base + k·step| ≤ 1, padded by one on each side.
    let k_lo = ((-1.0 - base) / step).floor() as i64 - 1;
    let k_hi = ((1.0 - base) / step).ceil() as i64 + 1;
    let mut out: Vec<f64> = (k_lo..=k_hi)
        .filter(|&k| include_zero || k != 0)
        .map(|k| base + k as f64 * step)
        .filter(|s| s.abs() <= 1.0 + VISIBLE_EPS)
        .map(|s| s.clamp(-1.0, 1.0).asin())
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

/// Grating lobes of a compensated array illuminated from `theta_i`.
///
/// Solutions of `sinθ̃ = Δ − sinθi + kλ/d` with `k ≠ 0` inside the visible
/// region, sorted ascending. Lobes are defined relative to a visible main
/// lobe, so the list is empty when `|Δ − sinθi| > 1`. Endpoints `±90°` count
/// as visible.
pub fn grating_lobes(delta: f64, spacing: f64, wavelength: f64, theta_i: f64) -> Vec<f64> {
    let main = delta - theta_i.sin();
    if main.abs() > 1.0 + VISIBLE_EPS {
        return Vec::new();
    }
    lobe_angles(main, spacing, wavelength, false)
}

/// Every scatter angle to which a compensated array redirects a wave from
/// `theta_i_tilde`, including `k = 0`, sorted ascending.
pub fn anomalous_pairs(delta: f64, spacing: f64, wavelength: f64, theta_i_tilde: f64) -> Vec<f64> {
    lobe_angles(delta - theta_i_tilde.sin(), spacing, wavelength, true)
}

/// `Σ_{n<N} e^{jnψ}` in closed form.
fn geometric_sum(n: usize, psi: f64) -> Complex64 {
    let nf = n as f64;
    let half = psi / 2.0;
    let den = half.sin();
    let mag = if den.abs() < 1e-12 {
        nf * (nf * half).cos() / half.cos()
    } else {
        (nf * half).sin() / den
    };
    Complex64::from_polar(1.0, (nf - 1.0) * half) * mag
}

/// Steering function of a compensated array with offset `delta`, using the
/// array's areas and `b ≪ λ`. The array's own phases are ignored.
pub fn compensated_steering(ris: &LinearRis, delta: f64, theta_i: f64, theta_s: f64) -> Complex64 {
    let lambda = ris.ctx.wavelength();
    let psi = 2.0 * PI * ris.spacing() * (theta_i.sin() + theta_s.sin() - delta) / lambda;
    let sum = match ris.uniform_area() {
        Some(a) => geometric_sum(ris.len(), psi) * (a / lambda),
        None => ris
            .cells()
            .iter()
            .enumerate()
            .fold(Complex64::new(0.0, 0.0), |acc, (n, c)| {
                acc + Complex64::from_polar(c.area / lambda, n as f64 * psi)
            }),
    };
    ris.ctx.c() * sum
}

pub fn compensated_rcs(ris: &LinearRis, delta: f64, theta_i: f64, theta_s: f64) -> f64 {
    let c = theta_i.cos();
    4.0 * PI * c * c * compensated_steering(ris, delta, theta_i, theta_s).norm_sqr()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::em::WaveContext;
    use crate::linear::{steering_function, LinearCell};

    fn deg(x: f64) -> f64 {
        x.to_radians()
    }

    #[test]
    fn specular_mirror_has_zero_phases() {
        let ris = LinearRis::uniform(8, 0.5, 0.01, 0.0, WaveContext::default()).unwrap();
        assert!(phase_compensation(deg(35.0), deg(-35.0), &ris)
            .iter()
            .all(|&p| p == 0.0));
    }

    #[test]
    fn delta_for_design_pair() {
        let pc = PhaseCompensation::steer(deg(30.0), deg(-50.0));
        assert!((pc.delta - (0.5 - deg(50.0).sin())).abs() < 1e-15);
        assert!((pc.delta + 0.266_044_443_118_978).abs() < 1e-12);
    }

    #[test]
    fn grating_lobe_examples() {
        let delta = deg(30.0).sin() + deg(-50.0).sin();
        assert!(grating_lobes(delta, 0.5, 1.0, deg(30.0)).is_empty());
        let lobes = grating_lobes(delta, 0.7, 1.0, deg(30.0));
        assert_eq!(lobes.len(), 1);
        assert!(
            (lobes[0].to_degrees() - 41.49).abs() < 0.05,
            "{}",
            lobes[0].to_degrees()
        );

        let lobes: Vec<f64> = grating_lobes(0.0, 2.0, 1.0, 0.0)
            .iter()
            .map(|t| t.to_degrees())
            .collect();
        let want = [-90.0, -30.0, 30.0, 90.0];
        assert_eq!(lobes.len(), 4);
        for (g, w) in lobes.iter().zip(want) {
            assert!((g - w).abs() < 1e-9, "{lobes:?}");
        }
    }

    #[test]
    fn anomalous_examples() {
        let delta = deg(30.0).sin() + deg(-50.0).sin();
        let pairs = anomalous_pairs(delta, 0.5, 1.0, deg(30.0));
        assert!(pairs.iter().any(|t| (t - deg(-50.0)).abs() < 1e-12));
        let pairs = anomalous_pairs(delta, 0.5, 1.0, deg(70.0));
        assert_eq!(pairs.len(), 1);
        assert!((pairs[0].to_degrees() - 52.59).abs() < 0.05);
        let mirror = anomalous_pairs(0.0, 0.5, 1.0, deg(40.0));
        assert_eq!(mirror.len(), 1);
        assert!((mirror[0] + deg(40.0)).abs() < 1e-12);
    }

    #[test]
    fn geometric_sum_matches_direct_sum() {
        for psi in [0.0, 1e-13, 0.3, PI, 2.0 * PI, 2.0 * PI + 1e-13, -4.0 * PI, 7.1] {
            for n in [1, 2, 5, 100] {
                let direct = (0..n).fold(Complex64::new(0.0, 0.0), |a, k| {
                    a + Complex64::from_polar(1.0, k as f64 * psi)
                });
                assert!(
                    (geometric_sum(n, psi) - direct).norm() < 1e-9 * n as f64,
                    "psi {psi} n {n}"
                );
            }
        }
    }

    #[test]
    fn closed_form_matches_configured_steering() {
        let ctx = WaveContext::default();
        let base = LinearRis::uniform(40, 0.6, 0.02, 0.0, ctx).unwrap();
        let (ti, ts) = (deg(20.0), deg(-40.0));
        let phases = phase_compensation(ti, ts, &base);
        let ris = base.clone().with_phases(&phases).unwrap();
        let delta = PhaseCompensation::steer(ti, ts).delta;
        for (a, b) in [(ti, ts), (deg(5.0), deg(33.0)), (deg(-60.0), deg(10.0))] {
            let closed = compensated_steering(&base, delta, a, b);
            let direct = steering_function(&ris, a, b);
            assert!((closed - direct).norm() < 1e-12, "{closed} vs {direct}");
        }
        let peak = compensated_steering(&base, delta, ti, ts);
        assert!((peak.norm() - ctx.c().norm() * 40.0 * 0.02).abs() < 1e-13);
    }

    #[test]
    fn nonuniform_areas_use_direct_sum() {
        let ctx = WaveContext::default();
        let cells = (0..6)
            .map(|k| LinearCell::new(0.01 + 0.002 * k as f64, 0.0, 0.0))
            .collect();
        let ris = LinearRis::new(cells, 0.5, ctx).unwrap();
        let t = compensated_steering(&ris, 0.0, 0.3, -0.3);
        assert!((t.norm() - ris.total_area()).abs() < 1e-15);
    }

    #[test]
    fn compensated_map_is_shifted_specular_map() {
        let ris = LinearRis::uniform(30, 0.5, 0.01, 0.0, WaveContext::default()).unwrap();
        let delta = deg(30.0).sin() + deg(-50.0).sin();
        for ti in [-60.0, -10.0, 0.0, 25.0, 70.0] {
            for ts in [-80.0, -40.0, 0.0, 15.0, 60.0] {
                let shifted = deg(ts).sin() - delta;
                if shifted.abs() > 1.0 {
                    continue;
                }
                let a = compensated_rcs(&ris, delta, deg(ti), deg(ts));
                let b = compensated_rcs(&ris, 0.0, deg(ti), shifted.asin());
                assert!((a - b).abs() <= 1e-12 * a.max(1e-12), "ti {ti} ts {ts}: {a} vs {b}");
            }
        }
    }
}
