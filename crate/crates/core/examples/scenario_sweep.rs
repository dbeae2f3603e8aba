//! Load a TOML scenario, run the sweep, and write CSV to stdout.

use ris_models::scenario::parse_scenario;
use ris_models::sweep::run_sweep;

const SCENARIO: &str = r#"
[wave]
wavelength = 1.0

[geometry]
kind = "linear"
n = 32
spacing = 0.5
b = 0.0
area = 0.01

[[incident]]
theta_deg = 20.0

[observation]
radius = 50.0
grid = { start_deg = -60.0, stop_deg = 60.0, count = 13 }

[config]
scheme = "compensate"
theta_i_deg = 20.0
theta_s_deg = -30.0
"#;

fn main() -> ris_models::Result<()> {
    let path = std::env::args().nth(1);
    let scn = match &path {
        Some(p) => ris_models::scenario::Scenario::load(std::path::Path::new(p))?,
        None => parse_scenario(SCENARIO)?,
    };
    let res = run_sweep(&scn)?;
    print!("{}", String::from_utf8_lossy(&res.to_csv()?));
    eprintln!("defaults applied: {:?}", scn.defaults_applied);
    Ok(())
}
