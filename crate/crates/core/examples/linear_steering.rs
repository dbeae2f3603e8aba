//! Phase compensation on a 100-cell linear array: steer a 30° wave to -50°.

use ris_models::config::phase_compensation;
use ris_models::em::WaveContext;
use ris_models::linear::{linear_field, InPlanePoint, InPlaneWave, LinearRis};
use ris_models::pattern::{field_db, find_peaks, linspace};

fn main() -> ris_models::Result<()> {
    let ctx = WaveContext::default();
    let mut ris = LinearRis::uniform(100, 0.5, 0.01, 0.1, ctx)?;
    let (ti, ts) = (30f64.to_radians(), (-50f64).to_radians());
    ris.set_phases(&phase_compensation(ti, ts, &ris))?;

    let wave = InPlaneWave::new(ti, 1.0);
    let f = |t: f64| linear_field(&ris, &wave, &InPlanePoint::new(100.0, t.to_radians())).norm();
    let peaks = find_peaks(f, &linspace(-90.0, 90.0, 1801), 1e-9);
    let main = peaks[0].value;
    for p in peaks.iter().take(4) {
        println!("{:8.3} deg  {:7.2} dB", p.x, field_db(p.value / main));
    }
    Ok(())
}
