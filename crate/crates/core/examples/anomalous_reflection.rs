//! Two waves on an array compensated for only one of them. The second wave
//! leaves along its own anomalous direction.

use ris_models::config::phase_compensation;
use ris_models::em::WaveContext;
use ris_models::linear::{linear_field_multi, InPlanePoint, InPlaneWave, LinearRis};
use ris_models::pattern::{field_db, find_peaks, linspace};

fn main() -> ris_models::Result<()> {
    let mut ris = LinearRis::uniform(100, 0.5, 0.01, 0.1, WaveContext::default())?;
    ris.set_phases(&phase_compensation(30f64.to_radians(), (-50f64).to_radians(), &ris))?;
    let waves = [
        InPlaneWave::new(30f64.to_radians(), 1.0),
        InPlaneWave::new(70f64.to_radians(), 0.5),
    ];

    let grid = linspace(-90.0, 90.0, 1801);
    for (label, w) in [("both", &waves[..]), ("30 only", &waves[..1]), ("70 only", &waves[1..])] {
        let f = |t: f64| linear_field_multi(&ris, w, &InPlanePoint::new(100.0, t.to_radians())).norm();
        let peaks = find_peaks(f, &grid, 1e-9);
        let top = peaks[0].value;
        let listed: Vec<String> = peaks
            .iter()
            .take(3)
            .map(|p| format!("{:.3} ({:.1} dB)", p.x, field_db(p.value / top)))
            .collect();
        println!("{label:8} {}", listed.join("  "));
    }
    Ok(())
}
