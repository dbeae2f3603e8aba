//! Bistatic RCS of a 5λ × 5λ PEC patch under normal incidence, on the two
//! principal cuts.

use ris_models::em::{Direction, WaveContext};
use ris_models::patch::{patch_bistatic_rcs, Patch};
use ris_models::pattern::{linspace, power_db};

fn main() -> ris_models::Result<()> {
    let ctx = WaveContext::default();
    let patch = Patch::new(5.0, 5.0)?;
    let incident = Direction::from_degrees(0.0, 0.0);

    println!("theta_deg  xoz_db   yoz_db");
    for t in linspace(-90.0, 90.0, 37) {
        let xoz = patch_bistatic_rcs(&patch, incident, ris_models::scenario::signed_cut(t, 0.0), &ctx);
        let yoz = patch_bistatic_rcs(&patch, incident, ris_models::scenario::signed_cut(t, 90.0), &ctx);
        println!("{t:9.1} {:8.2} {:8.2}", power_db(xoz), power_db(yoz));
    }

    // sinc nulls where sinθ = λ/a
    let null = (1.0 / 5.0f64).asin().to_degrees();
    println!("first nulls expected at ±{null:.3} deg");
    Ok(())
}
