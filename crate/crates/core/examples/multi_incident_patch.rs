//! Two waves on one patch. Fields add coherently, so the pattern has a
//! specular lobe per wave.

use ris_models::em::{Direction, ObservationPoint, WaveContext};
use ris_models::patch::{patch_scattered_field_multi, Patch, PlaneWave};

fn main() -> ris_models::Result<()> {
    let ctx = WaveContext::default();
    let patch = Patch::new(5.0, 5.0)?;
    let waves = [
        PlaneWave::new(Direction::from_degrees(15.0, -45.0), 1.0),
        PlaneWave::new(Direction::from_degrees(45.0, 135.0), 1.0),
    ];
    let r = 100.0;

    for (theta, phi) in [(15.0, 135.0), (45.0, -45.0), (0.0, 0.0), (30.0, 45.0)] {
        let obs = ObservationPoint::new(r, Direction::from_degrees(theta, phi));
        let e = patch_scattered_field_multi(&patch, &waves, &obs, &ctx);
        println!("({theta:5.1}, {phi:6.1})  |E| = {:.6e}", e.magnitude());
    }
    Ok(())
}
