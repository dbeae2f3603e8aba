//! TOML scenario files.
//!
//! ```toml
//! [wave]                      # optional
//! wavelength = 1.0            # default 1
//! gamma = [-1.0, 0.0]         # reflection coefficient [re, im], default PEC
//!
//! [geometry]
//! kind = "linear"             # "patch" | "planar" | "linear"
//! n = 100
//! spacing = 0.5
//! a = 0.1                     # or `area = ...`; area defaults to a·b
//! b = 0.1
//!
//! [[incident]]                # zero or more
//! theta_deg = 30.0
//! amplitude = 1.0             # default 1
//!
//! [observation]
//! radius = 100.0              # default 100 wavelengths
//! grid = { start_deg = -90.0, stop_deg = 90.0, count = 1801 }
//!
//! [config]                    # optional, default scheme = "none"
//! scheme = "compensate"
//! theta_i_deg = 30.0
//! theta_s_deg = -50.0
//!
//! [output]                    # optional
//! format = "csv"              # "csv" | "json"
//! path = "out.csv"
//! ```
//!
//! Linear geometries use signed in-plane angles in `[-90°, 90°]` and take no
//! `phi_deg`. Patch and planar geometries take incident `theta_deg ∈ [0°, 90°]`
//! with `phi_deg`; their observation grid is a signed cut in the plane
//! `observation.phi_deg` (default 0), optionally swept over `phi_grid`.
//!
//! Planar geometries give either `grid = { nx, ny, dx, dy, a, b }` or an
//! explicit `[[geometry.cells]]` list of `{ x, y, z, a, b, area, phase_deg }`.
//!
//! Schemes: `none`; `random { seed, mode = "draw" | "expectation" |
//! "monte-carlo", trials }`; `compensate { theta_i_deg, theta_s_deg }`;
//! `reshape { desired_pattern_file, truncation_tol, max_discarded_fraction }`.
//! Schemes other than `none` need a linear geometry. The desired pattern is a
//! CSV with header `theta_deg,re,im`, resolved relative to the scenario file.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::array::{RisGeometry, UnitCell};
use crate::em::{Direction, ObservationPoint, WaveContext};
use crate::error::{Error, Result};
use crate::linear::{InPlanePoint, InPlaneWave, LinearCell, LinearRis};
use crate::patch::{Patch, PlaneWave};
use crate::pattern::linspace;

/// Default observation radius in wavelengths.
pub const DEFAULT_RADIUS_WAVELENGTHS: f64 = 100.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub wave: WaveSpec,
    pub geometry: GeometrySpec,
    #[serde(default)]
    pub incident: Vec<IncidentSpec>,
    pub observation: ObservationSpec,
    #[serde(default)]
    pub config: ConfigSpec,
    #[serde(default)]
    pub output: OutputSpec,
    /// Directory that relative paths resolve against.
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
    /// Names of the keys that were filled from defaults, with their values.
    #[serde(skip)]
    pub defaults_applied: Vec<(String, String)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveSpec {
    #[serde(default = "one")]
    pub wavelength: f64,
    #[serde(default = "pec")]
    pub gamma: [f64; 2],
}

impl Default for WaveSpec {
    fn default() -> Self {
        Self {
            wavelength: 1.0,
            gamma: pec(),
        }
    }
}

fn one() -> f64 {
    1.0
}

fn pec() -> [f64; 2] {
    [-1.0, 0.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GeometrySpec {
    Patch {
        a: f64,
        b: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        area: Option<f64>,
    },
    Planar {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid: Option<PlanarGridSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cells: Option<Vec<CellSpec>>,
    },
    Linear {
        n: usize,
        spacing: f64,
        b: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        a: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        area: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        phases_deg: Option<Vec<f64>>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanarGridSpec {
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: f64,
    pub a: f64,
    pub b: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub area: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellSpec {
    pub x: f64,
    pub y: f64,
    #[serde(default)]
    pub z: f64,
    pub a: f64,
    pub b: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub area: Option<f64>,
    #[serde(default)]
    pub phase_deg: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IncidentSpec {
    pub theta_deg: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_deg: Option<f64>,
    #[serde(default = "one")]
    pub amplitude: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub start_deg: f64,
    pub stop_deg: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn degrees(&self) -> Vec<f64> {
        linspace(self.start_deg, self.stop_deg, self.count)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub theta_deg: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_deg: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservationSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_deg: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<PointSpec>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RandomMode {
    /// One draw from the seed; the sweep shows that realization.
    #[default]
    Draw,
    /// Closed-form expected power.
    Expectation,
    /// Sample mean over `trials` draws.
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ConfigSpec {
    #[default]
    None,
    Random {
        seed: u64,
        #[serde(default)]
        mode: RandomMode,
        #[serde(default = "default_trials")]
        trials: u64,
    },
    Compensate {
        theta_i_deg: f64,
        theta_s_deg: f64,
    },
    Reshape {
        desired_pattern_file: PathBuf,
        #[serde(default = "default_truncation_tol")]
        truncation_tol: f64,
        #[serde(default = "default_discard_limit")]
        max_discarded_fraction: f64,
    },
}

fn default_trials() -> u64 {
    1000
}

fn default_truncation_tol() -> f64 {
    1e-8
}

fn default_discard_limit() -> f64 {
    1e-2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

/// 1-based line and column of a byte offset.
fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Parses and validates scenario text. Relative paths resolve against the
/// current directory unless [`Scenario::base_dir`] is set afterwards.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let mut scn: Scenario = toml::from_str(text).map_err(|e| {
        let offset = e
            .span()
            .map(|s| unknown_key_offset(text, s.clone(), e.message()).unwrap_or(s.start));
        let (line, column) = offset.map_or((0, 0), |o| line_column(text, o));
        Error::Parse {
            line,
            column,
            message: e.message().trim().to_string(),
        }
    })?;
    scn.defaults_applied = record_defaults(text, &mut scn);
    scn.validate()?;
    Ok(scn)
}

/// Tagged tables report unknown keys at the table header; point at the key
/// within that table instead.
fn unknown_key_offset(text: &str, span: std::ops::Range<usize>, message: &str) -> Option<usize> {
    let key = message.strip_prefix("unknown field `")?.split('`').next()?;
    let mut offset = span.start;
    for (i, line) in text.get(span.start..)?.split_inclusive('\n').enumerate() {
        let trimmed = line.trim_start();
        if i > 0 && trimmed.starts_with('[') {
            break;
        }
        let rest = trimmed.strip_prefix(key).map(str::trim_start);
        if matches!(rest, Some(r) if r.starts_with('=')) {
            return Some(offset + line.len() - trimmed.len());
        }
        offset += line.len();
    }
    None
}

/// Fills the observation radius and cut plane, and lists every key that
/// came from a default.
fn record_defaults(text: &str, scn: &mut Scenario) -> Vec<(String, String)> {
    let raw: toml::Table = toml::from_str(text).unwrap_or_default();
    let has = |path: &[&str]| {
        let mut v: Option<&toml::Value> = None;
        let mut table = &raw;
        for (i, key) in path.iter().enumerate() {
            v = table.get(*key);
            match v {
                Some(toml::Value::Table(t)) if i + 1 < path.len() => table = t,
                Some(_) if i + 1 == path.len() => {}
                _ => return false,
            }
        }
        v.is_some()
    };
    let mut out = Vec::new();
    if !has(&["wave", "wavelength"]) {
        out.push(("wave.wavelength".into(), format!("{}", scn.wave.wavelength)));
    }
    if !has(&["wave", "gamma"]) {
        out.push(("wave.gamma".into(), format!("{:?}", scn.wave.gamma)));
    }
    if scn.observation.radius.is_none() {
        let r = DEFAULT_RADIUS_WAVELENGTHS * scn.wave.wavelength;
        scn.observation.radius = Some(r);
        out.push(("observation.radius".into(), format!("{r}")));
    }
    let linear = matches!(scn.geometry, GeometrySpec::Linear { .. });
    if !linear && scn.observation.phi_deg.is_none() {
        scn.observation.phi_deg = Some(0.0);
        out.push(("observation.phi_deg".into(), "0".into()));
    }
    let incident = raw.get("incident").and_then(|v| v.as_array());
    for (i, spec) in scn.incident.iter_mut().enumerate() {
        let entry = incident.and_then(|a| a.get(i)).and_then(|v| v.as_table());
        if !entry.is_some_and(|t| t.contains_key("amplitude")) {
            out.push((format!("incident[{i}].amplitude"), "1".into()));
        }
        if !linear && spec.phi_deg.is_none() {
            spec.phi_deg = Some(0.0);
            out.push((format!("incident[{i}].phi_deg"), "0".into()));
        }
    }
    if !has(&["config"]) {
        out.push(("config.scheme".into(), "none".into()));
    }
    match &scn.config {
        ConfigSpec::Random { mode, trials, .. } => {
            if !has(&["config", "mode"]) {
                out.push(("config.mode".into(), format!("{mode:?}").to_lowercase()));
            }
            if !has(&["config", "trials"]) {
                out.push(("config.trials".into(), format!("{trials}")));
            }
        }
        ConfigSpec::Reshape {
            truncation_tol,
            max_discarded_fraction,
            ..
        } => {
            if !has(&["config", "truncation_tol"]) {
                out.push(("config.truncation_tol".into(), format!("{truncation_tol:e}")));
            }
            if !has(&["config", "max_discarded_fraction"]) {
                out.push((
                    "config.max_discarded_fraction".into(),
                    format!("{max_discarded_fraction:e}"),
                ));
            }
        }
        _ => {}
    }
    if !has(&["output", "format"]) {
        out.push(("output.format".into(), "csv".into()));
    }
    out
}

fn check(cond: bool, field: impl Into<String>, message: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::validation(field, message))
    }
}

fn positive(v: f64, field: &str) -> Result<()> {
    check(
        v.is_finite() && v > 0.0,
        field,
        format!("must be positive and finite, got {v}"),
    )
}

fn in_range(v: f64, lo: f64, hi: f64, field: &str) -> Result<()> {
    check(
        v.is_finite() && (lo..=hi).contains(&v),
        field,
        format!("{v} is outside [{lo}, {hi}]"),
    )
}

fn check_grid(g: &GridSpec, lo: f64, hi: f64, field: &str) -> Result<()> {
    check(g.count >= 1, format!("{field}.count"), "must be at least 1")?;
    in_range(g.start_deg, lo, hi, &format!("{field}.start_deg"))?;
    in_range(g.stop_deg, lo, hi, &format!("{field}.stop_deg"))?;
    check(
        g.count == 1 || g.stop_deg > g.start_deg,
        field,
        "grid must be strictly increasing (stop_deg > start_deg)",
    )
}

impl Scenario {
    /// Reads a scenario file; relative paths inside it resolve against the
    /// file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut scn = parse_scenario(&text)?;
        scn.base_dir = path.parent().map(Path::to_path_buf);
        Ok(scn)
    }

    pub fn is_linear(&self) -> bool {
        matches!(self.geometry, GeometrySpec::Linear { .. })
    }

    pub fn resolve_path(&self, p: &Path) -> PathBuf {
        match &self.base_dir {
            Some(dir) if p.is_relative() => dir.join(p),
            _ => p.to_path_buf(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        positive(self.wave.wavelength, "wave.wavelength")?;
        check(
            self.wave.gamma.iter().all(|g| g.is_finite()),
            "wave.gamma",
            "must be finite",
        )?;
        let linear = self.is_linear();
        match &self.geometry {
            GeometrySpec::Patch { a, b, area } => {
                positive(*a, "geometry.a")?;
                positive(*b, "geometry.b")?;
                if let Some(area) = area {
                    positive(*area, "geometry.area")?;
                }
            }
            GeometrySpec::Planar { grid, cells } => match (grid, cells) {
                (Some(g), None) => {
                    check(g.nx >= 1 && g.ny >= 1, "geometry.grid", "nx and ny must be at least 1")?;
                    positive(g.dx, "geometry.grid.dx")?;
                    positive(g.dy, "geometry.grid.dy")?;
                    positive(g.a, "geometry.grid.a")?;
                    positive(g.b, "geometry.grid.b")?;
                    if let Some(area) = g.area {
                        positive(area, "geometry.grid.area")?;
                    }
                }
                (None, Some(cells)) => {
                    check(!cells.is_empty(), "geometry.cells", "needs at least one cell")?;
                    for (i, c) in cells.iter().enumerate() {
                        let f = format!("geometry.cells[{i}]");
                        check(
                            [c.x, c.y, c.z, c.phase_deg].iter().all(|v| v.is_finite()),
                            &f,
                            "position and phase must be finite",
                        )?;
                        positive(c.a, &format!("{f}.a"))?;
                        positive(c.b, &format!("{f}.b"))?;
                        if let Some(area) = c.area {
                            positive(area, &format!("{f}.area"))?;
                        }
                    }
                }
                _ => {
                    return Err(Error::validation(
                        "geometry",
                        "planar geometry needs exactly one of `grid` or `cells`",
                    ))
                }
            },
            GeometrySpec::Linear {
                n,
                spacing,
                b,
                a,
                area,
                phases_deg,
            } => {
                check(*n >= 1, "geometry.n", "must be at least 1")?;
                positive(*spacing, "geometry.spacing")?;
                check(
                    b.is_finite() && *b >= 0.0,
                    "geometry.b",
                    format!("must be non-negative, got {b}"),
                )?;
                match (a, area) {
                    (_, Some(area)) => check(
                        area.is_finite() && *area >= 0.0,
                        "geometry.area",
                        format!("must be non-negative, got {area}"),
                    )?,
                    (Some(a), None) => positive(*a, "geometry.a")?,
                    (None, None) => return Err(Error::validation("geometry", "linear geometry needs `area` or `a`")),
                }
                if let Some(p) = phases_deg {
                    check(
                        p.len() == *n,
                        "geometry.phases_deg",
                        format!("expected {n} entries, found {}", p.len()),
                    )?;
                    check(p.iter().all(|v| v.is_finite()), "geometry.phases_deg", "must be finite")?;
                }
            }
        }

        for (i, w) in self.incident.iter().enumerate() {
            let f = format!("incident[{i}]");
            check(w.amplitude.is_finite(), format!("{f}.amplitude"), "must be finite")?;
            if linear {
                in_range(w.theta_deg, -90.0, 90.0, &format!("{f}.theta_deg"))?;
                check(
                    w.phi_deg.is_none(),
                    format!("{f}.phi_deg"),
                    "not used by linear geometries",
                )?;
            } else {
                in_range(w.theta_deg, 0.0, 90.0, &format!("{f}.theta_deg"))?;
                in_range(w.phi_deg.unwrap_or(0.0), -360.0, 360.0, &format!("{f}.phi_deg"))?;
            }
        }

        let obs = &self.observation;
        positive(obs.radius.unwrap_or(1.0), "observation.radius")?;
        if linear {
            check(
                obs.phi_deg.is_none(),
                "observation.phi_deg",
                "not used by linear geometries",
            )?;
            check(
                obs.phi_grid.is_none(),
                "observation.phi_grid",
                "not used by linear geometries",
            )?;
        } else {
            in_range(obs.phi_deg.unwrap_or(0.0), -360.0, 360.0, "observation.phi_deg")?;
        }
        match (&obs.grid, &obs.points) {
            (Some(g), None) => {
                check_grid(g, -90.0, 90.0, "observation.grid")?;
                if let Some(pg) = &obs.phi_grid {
                    check_grid(pg, -360.0, 360.0, "observation.phi_grid")?;
                }
            }
            (None, Some(points)) => {
                check(!points.is_empty(), "observation.points", "needs at least one point")?;
                check(obs.phi_grid.is_none(), "observation.phi_grid", "only valid with `grid`")?;
                for (i, p) in points.iter().enumerate() {
                    let f = format!("observation.points[{i}]");
                    in_range(p.theta_deg, -90.0, 90.0, &format!("{f}.theta_deg"))?;
                    if let Some(r) = p.radius {
                        positive(r, &format!("{f}.radius"))?;
                    }
                    match (linear, p.phi_deg) {
                        (true, Some(_)) => {
                            return Err(Error::validation(
                                format!("{f}.phi_deg"),
                                "not used by linear geometries",
                            ))
                        }
                        (false, Some(phi)) => in_range(phi, -360.0, 360.0, &format!("{f}.phi_deg"))?,
                        _ => {}
                    }
                }
            }
            _ => {
                return Err(Error::validation(
                    "observation",
                    "needs exactly one of `grid` or `points`",
                ))
            }
        }

        match &self.config {
            ConfigSpec::None => {}
            _ if !linear => {
                return Err(Error::validation(
                    "config.scheme",
                    "configuration schemes need a linear geometry",
                ))
            }
            ConfigSpec::Random { mode, trials, .. } => {
                check(
                    *mode != RandomMode::MonteCarlo || *trials >= 2,
                    "config.trials",
                    "Monte Carlo needs at least 2 trials",
                )?;
            }
            ConfigSpec::Compensate {
                theta_i_deg,
                theta_s_deg,
            } => {
                in_range(*theta_i_deg, -90.0, 90.0, "config.theta_i_deg")?;
                in_range(*theta_s_deg, -90.0, 90.0, "config.theta_s_deg")?;
            }
            ConfigSpec::Reshape {
                truncation_tol,
                max_discarded_fraction,
                ..
            } => {
                check(
                    truncation_tol.is_finite() && *truncation_tol >= 0.0,
                    "config.truncation_tol",
                    "must be non-negative",
                )?;
                check(
                    max_discarded_fraction.is_finite() && *max_discarded_fraction >= 0.0,
                    "config.max_discarded_fraction",
                    "must be non-negative",
                )?;
                check(
                    !self.incident.is_empty(),
                    "incident",
                    "reshaping needs at least one incident wave",
                )?;
            }
        }
        Ok(())
    }

    pub fn context(&self) -> Result<WaveContext> {
        let g = Complex64::new(self.wave.gamma[0], self.wave.gamma[1]);
        WaveContext::new(self.wave.wavelength, g)
            .ok_or_else(|| Error::validation("wave.wavelength", "must be positive"))
    }

    pub fn radius(&self) -> f64 {
        self.observation
            .radius
            .unwrap_or(DEFAULT_RADIUS_WAVELENGTHS * self.wave.wavelength)
    }

    /// The linear array as described by the geometry, before any scheme.
    pub fn linear_ris(&self) -> Result<LinearRis> {
        let GeometrySpec::Linear {
            n,
            spacing,
            b,
            a,
            area,
            phases_deg,
        } = &self.geometry
        else {
            return Err(Error::validation("geometry.kind", "expected a linear geometry"));
        };
        let area = area.unwrap_or_else(|| a.unwrap_or(0.0) * b);
        let cells = (0..*n)
            .map(|k| {
                let phase = phases_deg.as_ref().map_or(0.0, |p| p[k].to_radians());
                LinearCell::new(area, *b, phase)
            })
            .collect();
        LinearRis::new(cells, *spacing, self.context()?)
    }

    /// The single patch of a `patch` geometry.
    pub fn patch(&self) -> Result<Patch> {
        match &self.geometry {
            GeometrySpec::Patch { a, b, area } => Patch::with_area(*a, *b, area.unwrap_or(a * b)),
            _ => Err(Error::validation("geometry.kind", "expected a patch geometry")),
        }
    }

    pub fn planar(&self) -> Result<RisGeometry> {
        let ctx = self.context()?;
        match &self.geometry {
            GeometrySpec::Planar { grid: Some(g), .. } => {
                let patch = Patch::with_area(g.a, g.b, g.area.unwrap_or(g.a * g.b))?;
                RisGeometry::rectangular(g.nx, g.ny, g.dx, g.dy, patch, ctx)
            }
            GeometrySpec::Planar { cells: Some(cells), .. } => {
                let cells = cells
                    .iter()
                    .map(|c| {
                        let patch = Patch::with_area(c.a, c.b, c.area.unwrap_or(c.a * c.b))?;
                        Ok(UnitCell::new([c.x, c.y, c.z], patch, c.phase_deg.to_radians()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                RisGeometry::new(cells, ctx)
            }
            _ => Err(Error::validation("geometry.kind", "expected a planar geometry")),
        }
    }

    pub fn in_plane_waves(&self) -> Vec<InPlaneWave> {
        self.incident
            .iter()
            .map(|w| InPlaneWave::new(w.theta_deg.to_radians(), w.amplitude))
            .collect()
    }

    pub fn plane_waves(&self) -> Vec<PlaneWave> {
        self.incident
            .iter()
            .map(|w| {
                PlaneWave::new(
                    Direction::from_degrees(w.theta_deg, w.phi_deg.unwrap_or(0.0)),
                    w.amplitude,
                )
            })
            .collect()
    }

    /// Observation angles in degrees as `(theta, phi)`, in output order.
    /// `phi` is `None` for linear geometries. With a `phi_grid` the theta
    /// index varies fastest.
    pub fn observation_angles(&self) -> Vec<(f64, Option<f64>, f64)> {
        let r = self.radius();
        let obs = &self.observation;
        let linear = self.is_linear();
        let cut = if linear { None } else { Some(obs.phi_deg.unwrap_or(0.0)) };
        match (&obs.grid, &obs.points) {
            (Some(g), _) => {
                let thetas = g.degrees();
                let phis: Vec<Option<f64>> = match &obs.phi_grid {
                    Some(pg) if !linear => pg.degrees().into_iter().map(Some).collect(),
                    _ => vec![cut],
                };
                phis.iter()
                    .flat_map(|&p| thetas.iter().map(move |&t| (t, p, r)))
                    .collect()
            }
            (None, Some(points)) => points
                .iter()
                .map(|p| {
                    (
                        p.theta_deg,
                        if linear { None } else { p.phi_deg.or(cut) },
                        p.radius.unwrap_or(r),
                    )
                })
                .collect(),
            (None, None) => Vec::new(),
        }
    }

    pub fn in_plane_points(&self) -> Vec<InPlanePoint> {
        self.observation_angles()
            .into_iter()
            .map(|(t, _, r)| InPlanePoint::new(r, t.to_radians()))
            .collect()
    }

    /// Spherical observation points; a negative theta in the cut plane `φ`
    /// maps to `(|θ|, φ + 180°)`.
    pub fn spherical_points(&self) -> Vec<ObservationPoint> {
        self.observation_angles()
            .into_iter()
            .map(|(t, p, r)| ObservationPoint::new(r, signed_cut(t, p.unwrap_or(0.0))))
            .collect()
    }
}

/// Direction for a signed angle `theta_deg` in the vertical plane `phi_deg`.
pub fn signed_cut(theta_deg: f64, phi_deg: f64) -> Direction {
    let mut phi = phi_deg.to_radians();
    if theta_deg < 0.0 {
        phi += PI;
    }
    // Fold onto [-π, π].
    let phi = (phi + PI).rem_euclid(2.0 * PI) - PI;
    Direction::new(theta_deg.abs().to_radians(), phi)
}

/// Reads a desired pattern CSV with header `theta_deg,re,im`.
pub fn load_desired_pattern(path: &Path) -> Result<Vec<(f64, Complex64)>> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Row {
        theta_deg: f64,
        re: f64,
        im: f64,
    }
    let mut reader = csv::Reader::from_path(path).map_err(csv_error)?;
    let mut out = Vec::new();
    for row in reader.deserialize::<Row>() {
        let row = row.map_err(csv_error)?;
        out.push((row.theta_deg, Complex64::new(row.re, row.im)));
    }
    if out.is_empty() {
        return Err(Error::validation("desired_pattern_file", "no rows"));
    }
    if out.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(Error::validation(
            "desired_pattern_file",
            "theta_deg must be strictly increasing",
        ));
    }
    if out.iter().any(|(t, _)| !(-90.0..=90.0).contains(t)) {
        return Err(Error::validation("desired_pattern_file", "theta_deg outside [-90, 90]"));
    }
    Ok(out)
}

/// Writes a desired pattern in the format read by [`load_desired_pattern`].
pub fn write_desired_pattern(path: &Path, rows: &[(f64, Complex64)]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().from_path(path).map_err(csv_error)?;
    w.write_record(["theta_deg", "re", "im"]).map_err(csv_error)?;
    for (t, z) in rows {
        w.write_record([
            crate::sweep::fmt_float(*t),
            crate::sweep::fmt_float(z.re),
            crate::sweep::fmt_float(z.im),
        ])
        .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub(crate) fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Parse {
            line,
            column: 0,
            message: format!("{other:?}"),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[geometry]
kind = "linear"
n = 10
spacing = 0.5
a = 0.1
b = 0.1

[[incident]]
theta_deg = 30.0

[observation]
grid = { start_deg = -90.0, stop_deg = 90.0, count = 181 }
"#;

    #[test]
    fn minimal_scenario_gets_defaults() {
        let s = parse_scenario(MINIMAL).unwrap();
        assert_eq!(s.wave.wavelength, 1.0);
        assert_eq!(s.wave.gamma, [-1.0, 0.0]);
        assert_eq!(s.radius(), 100.0);
        assert_eq!(s.config, ConfigSpec::None);
        assert_eq!(s.incident[0].amplitude, 1.0);
        let names: Vec<_> = s.defaults_applied.iter().map(|(k, _)| k.as_str()).collect();
        assert!(names.contains(&"observation.radius"));
        assert!(names.contains(&"wave.gamma"));
        assert!(names.contains(&"incident[0].amplitude"));
        let ris = s.linear_ris().unwrap();
        assert_eq!(ris.len(), 10);
        assert!((ris.cells()[0].area - 0.01).abs() < 1e-17);
    }

    #[test]
    fn radius_default_scales_with_wavelength() {
        let text = format!("[wave]\nwavelength = 0.25\n{MINIMAL}");
        assert_eq!(parse_scenario(&text).unwrap().radius(), 25.0);
    }

    #[test]
    fn out_of_range_linear_angle_is_rejected() {
        let text = MINIMAL.replace("theta_deg = 30.0", "theta_deg = 120.0");
        match parse_scenario(&text) {
            Err(Error::Validation { field, .. }) => assert_eq!(field, "incident[0].theta_deg"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_key_reports_position() {
        let text = MINIMAL.replace("spacing = 0.5", "spacing = 0.5\ncolour = 3");
        match parse_scenario(&text) {
            Err(Error::Parse { line, column, message }) => {
                assert!(line >= 2, "line {line}");
                assert!(column >= 1);
                assert!(message.contains("colour"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_key_in_tagged_table_points_at_key() {
        let text = "[geometry]\nkind = \"linear\"\nn = 4\n  spcing = 0.5\n\n[observation]\nradius = 10.0\n";
        match parse_scenario(text) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (4, 3)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn syntax_error_reports_line() {
        let text = "[geometry]\nkind = \"linear\"\nn = = 3\n";
        match parse_scenario(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn non_monotone_grid_is_rejected() {
        let text = MINIMAL.replace(
            "start_deg = -90.0, stop_deg = 90.0",
            "start_deg = 10.0, stop_deg = -10.0",
        );
        assert!(matches!(parse_scenario(&text), Err(Error::Validation { .. })));
    }

    #[test]
    fn scheme_requires_linear_geometry() {
        let text = r#"
[geometry]
kind = "patch"
a = 5.0
b = 5.0
[observation]
grid = { start_deg = -90.0, stop_deg = 90.0, count = 3 }
[config]
scheme = "random"
seed = 1
"#;
        assert!(matches!(parse_scenario(text), Err(Error::Validation { .. })));
    }

    #[test]
    fn signed_cut_folds_phi() {
        let d = signed_cut(-30.0, 0.0);
        assert!((d.theta - 30f64.to_radians()).abs() < 1e-15);
        assert!((d.phi.abs() - PI).abs() < 1e-15);
        let d = signed_cut(-10.0, 90.0);
        assert!((d.phi + PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn patch_defaults_cut_plane() {
        let text = r#"
[geometry]
kind = "patch"
a = 5.0
b = 5.0
[[incident]]
theta_deg = 0.0
[observation]
grid = { start_deg = -90.0, stop_deg = 90.0, count = 3 }
phi_grid = { start_deg = 0.0, stop_deg = 90.0, count = 2 }
"#;
        let s = parse_scenario(text).unwrap();
        assert_eq!(s.incident[0].phi_deg, Some(0.0));
        let angles = s.observation_angles();
        assert_eq!(angles.len(), 6);
        assert_eq!(angles[3], (-90.0, Some(90.0), 100.0));
    }
}
