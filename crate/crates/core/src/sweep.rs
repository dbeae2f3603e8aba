//! Scenario evaluation over an observation grid, and CSV/JSON emission.

use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::array::ris_scattered_field_multi;
use crate::config::{
    beam_reshape, monte_carlo_power, phase_compensation, random_phase_draw, random_phase_expected_power_multi,
    MonteCarloEstimate, ReshapeOptions, ReshapeSolution,
};
use crate::error::{Error, Result};
use crate::linear::{linear_field_multi, InPlanePoint, LinearRis};
use crate::mimo::{assemble_mimo, MimoSystem};
use crate::patch::patch_scattered_field_multi;
use crate::pattern::{field_db, power_db};
use crate::scenario::{load_desired_pattern, ConfigSpec, GeometrySpec, OutputFormat, RandomMode, Scenario};

/// Floats in emitted files: 12 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.11e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub theta_deg: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_deg: Option<f64>,
    pub field: f64,
    pub field_db: f64,
    pub rcs: f64,
    pub rcs_db: f64,
}

impl SweepRow {
    fn new(theta_deg: f64, phi_deg: Option<f64>, power: f64, radius: f64, incident_power: f64) -> Self {
        let field = power.sqrt();
        let rcs = if incident_power > 0.0 {
            4.0 * PI * radius * radius * power / incident_power
        } else {
            0.0
        };
        Self {
            theta_deg,
            phi_deg,
            field,
            field_db: field_db(field),
            rcs,
            rcs_db: power_db(rcs),
        }
    }
}

/// A linear array after its configuration scheme has been applied.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Configured {
    pub scheme: String,
    pub ris: LinearRis,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reshape: Option<ReshapeSolution>,
    #[serde(skip)]
    pub mimo: Option<MimoSystem>,
}

impl Configured {
    pub fn weights(&self) -> Vec<Complex64> {
        self.ris.weights()
    }
}

/// Applies the scenario's configuration scheme to its linear array.
pub fn configure(scn: &Scenario) -> Result<Configured> {
    let mut ris = scn.linear_ris()?;
    let mut reshape = None;
    let mut mimo = None;
    let scheme = match &scn.config {
        ConfigSpec::None => "none",
        ConfigSpec::Random { seed, .. } => {
            ris.set_phases(&random_phase_draw(ris.len(), *seed))?;
            "random"
        }
        ConfigSpec::Compensate {
            theta_i_deg,
            theta_s_deg,
        } => {
            let phases = phase_compensation(theta_i_deg.to_radians(), theta_s_deg.to_radians(), &ris);
            ris.set_phases(&phases)?;
            "compensate"
        }
        ConfigSpec::Reshape {
            desired_pattern_file,
            truncation_tol,
            max_discarded_fraction,
        } => {
            let desired = load_desired_pattern(&scn.resolve_path(desired_pattern_file))?;
            let r = scn.radius();
            let points: Vec<InPlanePoint> = desired
                .iter()
                .map(|(t, _)| InPlanePoint::new(r, t.to_radians()))
                .collect();
            let target: Vec<Complex64> = desired.iter().map(|(_, z)| *z).collect();
            let angles: Vec<f64> = scn.incident.iter().map(|w| w.theta_deg.to_radians()).collect();
            let amplitudes: Vec<Complex64> = scn.incident.iter().map(|w| Complex64::new(w.amplitude, 0.0)).collect();
            let sys = assemble_mimo(&ris, &angles, &points)?;
            let opts = ReshapeOptions {
                truncation_tol: *truncation_tol,
                max_discarded_fraction: *max_discarded_fraction,
                ..Default::default()
            };
            let sol = beam_reshape(&sys, &amplitudes, &target, &opts)?;
            ris.set_weights(&sol.weights)?;
            mimo = Some(sys.with_weights(&sol.weights)?);
            reshape = Some(sol);
            "reshape"
        }
    };
    Ok(Configured {
        scheme: scheme.to_string(),
        ris,
        reshape,
        mimo,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub has_phi: bool,
    pub rows: Vec<SweepRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub configuration: Option<Configured>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monte_carlo: Option<Vec<MonteCarloEstimate>>,
}

impl SweepResult {
    pub fn header(&self) -> Vec<&'static str> {
        let mut h = vec!["theta_deg"];
        if self.has_phi {
            h.push("phi_deg");
        }
        h.extend(["field", "field_db", "rcs", "rcs_db"]);
        h
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(self.header()).map_err(crate::scenario::csv_error)?;
        for r in &self.rows {
            let mut rec = vec![fmt_float(r.theta_deg)];
            if let Some(phi) = r.phi_deg {
                rec.push(fmt_float(phi));
            }
            rec.extend([r.field, r.field_db, r.rcs, r.rcs_db].map(fmt_float));
            w.write_record(&rec).map_err(crate::scenario::csv_error)?;
        }
        w.into_inner().map_err(|e| Error::Io(e.into_error()))
    }

    pub fn to_json(&self) -> Result<Vec<u8>> {
        let mut out = serde_json::to_vec_pretty(self)?;
        out.push(b'\n');
        Ok(out)
    }

    pub fn render(&self, format: OutputFormat) -> Result<Vec<u8>> {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }

    pub fn write(&self, path: &Path, format: OutputFormat) -> Result<()> {
        let bytes = self.render(format)?;
        std::fs::File::create(path)?.write_all(&bytes)?;
        Ok(())
    }
}

/// Evaluates the scenario at every observation point, in grid order.
pub fn run_sweep(scn: &Scenario) -> Result<SweepResult> {
    let angles = scn.observation_angles();
    let incident_power: f64 = scn.incident.iter().map(|w| w.amplitude * w.amplitude).sum();
    let row = |(t, p, r): (f64, Option<f64>, f64), power: f64| SweepRow::new(t, p, power, r, incident_power);

    match &scn.geometry {
        GeometrySpec::Patch { .. } => {
            let patch = scn.patch()?;
            let ctx = scn.context()?;
            let waves = scn.plane_waves();
            let points = scn.spherical_points();
            let rows = angles
                .par_iter()
                .zip(&points)
                .map(|(&a, obs)| row(a, patch_scattered_field_multi(&patch, &waves, obs, &ctx).norm_sqr()))
                .collect();
            Ok(SweepResult {
                has_phi: true,
                rows,
                configuration: None,
                monte_carlo: None,
            })
        }
        GeometrySpec::Planar { .. } => {
            let ris = scn.planar()?;
            let waves = scn.plane_waves();
            let points = scn.spherical_points();
            let rows = angles
                .par_iter()
                .zip(&points)
                .map(|(&a, obs)| row(a, ris_scattered_field_multi(&ris, &waves, obs).norm_sqr()))
                .collect();
            Ok(SweepResult {
                has_phi: true,
                rows,
                configuration: None,
                monte_carlo: None,
            })
        }
        GeometrySpec::Linear { .. } => {
            let configured = configure(scn)?;
            let waves = scn.in_plane_waves();
            let points = scn.in_plane_points();
            let ris = &configured.ris;
            let mut monte_carlo = None;
            let powers: Vec<f64> = match &scn.config {
                ConfigSpec::Random {
                    mode: RandomMode::Expectation,
                    ..
                } => {
                    let base = scn.linear_ris()?;
                    points
                        .par_iter()
                        .map(|p| random_phase_expected_power_multi(&base, &waves, p))
                        .collect()
                }
                ConfigSpec::Random {
                    mode: RandomMode::MonteCarlo,
                    seed,
                    trials,
                } => {
                    let est = monte_carlo_power(&scn.linear_ris()?, &waves, &points, *trials, *seed)?;
                    let means = est.iter().map(|e| e.mean).collect();
                    monte_carlo = Some(est);
                    means
                }
                _ => points
                    .par_iter()
                    .map(|p| linear_field_multi(ris, &waves, p).norm_sqr())
                    .collect(),
            };
            let rows = angles.into_iter().zip(powers).map(|(a, p)| row(a, p)).collect();
            Ok(SweepResult {
                has_phi: false,
                rows,
                configuration: Some(configured),
                monte_carlo,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::parse_scenario;

    const STEER: &str = r#"
[geometry]
kind = "linear"
n = 100
spacing = 0.7
a = 0.1
b = 0.1

[[incident]]
theta_deg = 30.0

[observation]
grid = { start_deg = -90.0, stop_deg = 90.0, count = 181 }

[config]
scheme = "compensate"
theta_i_deg = 30.0
theta_s_deg = -50.0
"#;

    #[test]
    fn compensated_sweep_peaks_at_target() {
        let res = run_sweep(&parse_scenario(STEER).unwrap()).unwrap();
        assert_eq!(res.rows.len(), 181);
        let best = res.rows.iter().max_by(|a, b| a.field.total_cmp(&b.field)).unwrap();
        assert_eq!(best.theta_deg, -50.0);
        for r in &res.rows {
            if r.field > 0.0 {
                assert!((r.field_db - 20.0 * r.field.log10()).abs() <= 1e-9);
                assert!((r.rcs_db - 10.0 * r.rcs.log10()).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn empty_incident_list_gives_zero_columns() {
        let text = STEER.replace("[[incident]]\ntheta_deg = 30.0\n", "");
        let res = run_sweep(&parse_scenario(&text).unwrap()).unwrap();
        assert!(res.rows.iter().all(|r| r.field == 0.0 && r.rcs == 0.0));
        let csv = String::from_utf8(res.to_csv().unwrap()).unwrap();
        assert!(csv.lines().nth(1).unwrap().contains("-inf"));
    }

    #[test]
    fn csv_is_deterministic_and_lf_terminated() {
        let scn = parse_scenario(STEER).unwrap();
        let a = run_sweep(&scn).unwrap().to_csv().unwrap();
        let b = run_sweep(&scn).unwrap().to_csv().unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(!text.contains('\r'));
        assert!(text.starts_with("theta_deg,field,field_db,rcs,rcs_db\n"));
    }

    #[test]
    fn expectation_mode_is_flat_for_point_cells() {
        let text = STEER
            .replace("b = 0.1", "b = 0.0\narea = 0.01")
            .replace("a = 0.1\n", "")
            .replace(
                "scheme = \"compensate\"\ntheta_i_deg = 30.0\ntheta_s_deg = -50.0",
                "scheme = \"random\"\nseed = 3\nmode = \"expectation\"",
            );
        let res = run_sweep(&parse_scenario(&text).unwrap()).unwrap();
        let first = res.rows[0].rcs;
        assert!(res.rows.iter().all(|r| r.rcs == first));
        let want = 4.0 * PI * 100.0 * 1e-4 * 30f64.to_radians().cos().powi(2);
        assert!((first - want).abs() <= 1e-12 * want);
    }
}
