//! The array as a linear map from incident amplitudes to scattered fields.
//! The factored matrix product agrees with the direct per-cell sum.

use num_complex::Complex64;
use ris_models::em::WaveContext;
use ris_models::linear::{linear_field_multi, InPlanePoint, InPlaneWave, LinearRis};
use ris_models::mimo::{apply_mimo, assemble_mimo};

fn main() -> ris_models::Result<()> {
    let ris = LinearRis::uniform(16, 0.5, 0.01, 0.0, WaveContext::default())?
        .with_phases(&(0..16).map(|n| 0.3 * n as f64).collect::<Vec<_>>())?;
    let incident = [20f64.to_radians(), 55f64.to_radians()];
    let amps = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.5)];
    let points: Vec<InPlanePoint> = [-60.0, -20.0, 0.0, 35.0, 80.0]
        .iter()
        .map(|t: &f64| InPlanePoint::new(50.0, t.to_radians()))
        .collect();

    let sys = assemble_mimo(&ris, &incident, &points)?;
    let fields = apply_mimo(&sys, &amps)?;
    let waves: Vec<InPlaneWave> = incident
        .iter()
        .zip(&amps)
        .map(|(&t, a)| InPlaneWave::new(t, a.norm()))
        .collect();

    println!("transfer matrix is {} × {}", sys.observations(), sys.incident());
    for (p, e) in points.iter().zip(&fields) {
        println!("{:6.1} deg  |E| = {:.6e}", p.theta.to_degrees(), e.norm());
    }
    // Real amplitudes only, so compare against the direct sum for the first wave.
    let direct = linear_field_multi(&ris, &waves[..1], &points[0]);
    let single = apply_mimo(&sys, &[amps[0], Complex64::new(0.0, 0.0)])?[0];
    println!("factored vs direct at -60 deg: {:.2e}", (direct - single).norm());
    std::fs::write(std::env::temp_dir().join("mimo_system.json"), sys.to_json()?)?;
    Ok(())
}
