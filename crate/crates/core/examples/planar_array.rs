//! A 10 × 10 array of λ/2 patches. With zero phase shifts it reflects
//! specularly; a linear phase gradient along y steers the beam.

use std::f64::consts::PI;

use ris_models::array::{ris_bistatic_rcs, RisGeometry};
use ris_models::em::{Direction, WaveContext};
use ris_models::patch::Patch;
use ris_models::pattern::{linspace, power_db};
use ris_models::scenario::signed_cut;

fn main() -> ris_models::Result<()> {
    let ctx = WaveContext::default();
    let patch = Patch::new(0.5, 0.5)?;
    let mut ris = RisGeometry::rectangular(10, 10, 0.5, 0.5, patch, ctx)?;
    let incident = Direction::from_degrees(20.0, 90.0);

    let cut = |ris: &RisGeometry| {
        linspace(-90.0, 90.0, 721)
            .into_iter()
            .map(|t| (t, ris_bistatic_rcs(ris, incident, signed_cut(t, 90.0))))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap()
    };
    let (t, rcs) = cut(&ris);
    println!("unconfigured: peak {:.2} dBλ² at {t:.2} deg", power_db(rcs));

    // Gradient that moves the reflection from sinθ = -sin20° to sinθ = sin10°.
    let target = 10f64.to_radians().sin();
    let shift = -(20f64.to_radians().sin() + target);
    let phases: Vec<f64> = ris.cells().iter().map(|c| 2.0 * PI * c.position[1] * shift).collect();
    ris.set_phases(&phases)?;
    let (t, rcs) = cut(&ris);
    println!("steered:      peak {:.2} dBλ² at {t:.2} deg", power_db(rcs));
    Ok(())
}
