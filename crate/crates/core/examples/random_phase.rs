//! Random {0, π} phases: the expected RCS is flat in the scattering angle,
//! and a seeded Monte Carlo estimate agrees with it.

use std::f64::consts::PI;

use ris_models::config::{monte_carlo_power, random_phase_draw, random_phase_expected_rcs};
use ris_models::em::WaveContext;
use ris_models::linear::{linear_rcs, InPlanePoint, InPlaneWave, LinearRis};
use ris_models::pattern::{linspace, power_db};

fn main() -> ris_models::Result<()> {
    let base = LinearRis::uniform(100, 0.5, 0.01, 0.0, WaveContext::default())?;
    let ti = 30f64.to_radians();
    let r = 100.0;

    let one = base.clone().with_phases(&random_phase_draw(base.len(), 7))?;
    let points: Vec<InPlanePoint> = linspace(-90.0, 90.0, 7)
        .into_iter()
        .map(|t| InPlanePoint::new(r, t.to_radians()))
        .collect();
    let mc = monte_carlo_power(&base, &[InPlaneWave::new(ti, 1.0)], &points, 4000, 7)?;

    println!("theta_s  one draw (dB)  expected  monte carlo (λ²)");
    for (p, est) in points.iter().zip(&mc) {
        let draw = linear_rcs(&one, ti, p.theta);
        let expected = random_phase_expected_rcs(&base, ti, p.theta);
        let scale = 4.0 * PI * r * r;
        println!(
            "{:7.1} {:14.2} {:9.5} {:9.5} ± {:.5}",
            p.theta.to_degrees(),
            power_db(draw),
            expected,
            scale * est.mean,
            scale * est.std_error
        );
    }
    Ok(())
}
