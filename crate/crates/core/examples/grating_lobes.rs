//! Where the extra lobes of a compensated array appear, and how spacing
//! controls them.

use ris_models::config::{anomalous_pairs, grating_lobes, PhaseCompensation};

fn main() {
    let (ti, ts) = (30f64.to_radians(), (-50f64).to_radians());
    let delta = PhaseCompensation::steer(ti, ts).delta;

    for d in [0.5, 0.7, 1.0, 2.0] {
        let lobes: Vec<String> = grating_lobes(delta, d, 1.0, ti)
            .iter()
            .map(|t| format!("{:.2}", t.to_degrees()))
            .collect();
        println!("d = {d:.1}λ: grating lobes [{}]", lobes.join(", "));
    }

    // A second wave at 70° meets the same phase profile.
    let pairs: Vec<String> = anomalous_pairs(delta, 0.5, 1.0, 70f64.to_radians())
        .iter()
        .map(|t| format!("{:.2}", t.to_degrees()))
        .collect();
    println!("70 deg wave on the d = 0.5λ design scatters to [{}]", pairs.join(", "));
}
