//! Solve for the cell weights that produce a chosen pattern under two
//! incident waves, on the regular sine grid.

use num_complex::Complex64;
use ris_models::config::{beam_reshape, ReshapeOptions};
use ris_models::em::WaveContext;
use ris_models::linear::{InPlanePoint, LinearRis};
use ris_models::mimo::{assemble_mimo, dft_grid};

fn main() -> ris_models::Result<()> {
    let n = 64;
    let ris = LinearRis::uniform(n, 0.5, 0.01, 0.0, WaveContext::default())?;
    let points: Vec<InPlanePoint> = dft_grid(n).into_iter().map(|t| InPlanePoint::new(100.0, t)).collect();
    let sys = assemble_mimo(&ris, &[30f64.to_radians(), 70f64.to_radians()], &points)?;
    let incident = [Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0)];

    // A single beam toward -50°: energy only in the nearest grid direction.
    let target = (-50f64).to_radians().sin();
    let best = points
        .iter()
        .enumerate()
        .min_by(|a, b| {
            (a.1.theta.sin() - target)
                .abs()
                .total_cmp(&(b.1.theta.sin() - target).abs())
        })
        .map(|(i, _)| i)
        .unwrap();
    let mut desired = vec![Complex64::new(0.0, 0.0); n];
    desired[best] = Complex64::new(1e-4, 0.0);

    let sol = beam_reshape(&sys, &incident, &desired, &ReshapeOptions::default())?;
    println!("solver: {:?}, rank {}", sol.conditioning.solver, sol.conditioning.rank);
    println!("relative residual: {:.2e}", sol.relative_residual());
    let areas = sol.areas();
    let max = areas.iter().copied().fold(0.0, f64::max);
    println!(
        "beam at {:.2} deg; largest cell area {max:.3e} λ²",
        points[best].theta.to_degrees()
    );
    Ok(())
}
