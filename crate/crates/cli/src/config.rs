//! Scenario configuration files.
//!
//! Configurations are TOML documents validated against schema version 1.
//! Every key is optional apart from `schema_version`; omitted keys fall back
//! to the defaults of the chosen subcommand. Unknown keys are rejected.
//!
//! ```toml
//! schema_version = 1
//! scenario = "unit sphere"
//! seed = 7
//!
//! [geometry]
//! radius = 1.0
//! center = [0.0, 0.0, 0.0]
//! level = 4
//! # mesh = "body.mesh"   (text mesh, resolved relative to the config file)
//!
//! [params]
//! nu = [1.0, 0.5]        # re, im; or `omega` + `m`; or `alpha = [[re, im], [re, im], [re, im]]`
//!
//! [[sources]]
//! position = [0.0, 0.0, 3.0]
//! coefficient = [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]
//!
//! targets = [[0.0, 0.0, 0.0]]
//! radii = [2.0, 4.0, 8.0, 16.0]
//!
//! [tolerances]
//! relative_error = 1e-3
//! ```

use std::path::{Path, PathBuf};

use qdirac::kernels::Source;
use qdirac::surface::icosphere;
use qdirac::{Complex, ComplexQuaternion, KernelParams, Point, SurfaceMesh};
use serde::Deserialize;

use crate::RunError;

pub const SCHEMA_VERSION: u32 = 1;

/// Subdivision levels above this are refused (level 8 already has 1.3M panels).
pub const MAX_LEVEL: u32 = 7;

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    pub scenario: Option<String>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub geometry: GeometryConfig,
    pub params: Option<ParamsConfig>,
    pub sources: Option<Vec<SourceConfig>>,
    pub targets: Option<Vec<Point>>,
    pub radii: Option<Vec<f64>>,
    pub levels: Option<Vec<u32>>,
    pub samples: Option<usize>,
    pub spacing: Option<f64>,
    #[serde(default)]
    pub tolerances: Tolerances,
    pub output: Option<PathBuf>,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub radius: Option<f64>,
    pub center: Option<Point>,
    pub level: Option<u32>,
    pub mesh: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    pub nu: Option<[f64; 2]>,
    pub omega: Option<f64>,
    pub m: Option<f64>,
    pub alpha: Option<[[f64; 2]; 3]>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceConfig {
    pub position: Point,
    pub coefficient: [[f64; 2]; 4],
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub relative_error: Option<f64>,
    pub algebra: Option<f64>,
    pub order: Option<f64>,
    pub l2_ratio: Option<f64>,
    /// Required drop of `r · residual` per decade.
    pub decade_factor: Option<f64>,
    pub stokes: Option<f64>,
}

fn invalid(msg: impl Into<String>) -> RunError {
    RunError::ConfigInvalid(msg.into())
}

fn finite(values: &[f64]) -> bool {
    values.iter().all(|v| v.is_finite())
}

impl ScenarioConfig {
    pub fn from_toml(text: &str, base_dir: &Path) -> Result<Self, RunError> {
        let mut cfg: ScenarioConfig = toml::from_str(text).map_err(|e| invalid(e.to_string()))?;
        cfg.base_dir = base_dir.to_path_buf();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, RunError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_toml(&text, &base)
    }

    /// The configuration used when no file is given.
    pub fn empty() -> Self {
        Self { schema_version: SCHEMA_VERSION, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), RunError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(invalid(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let g = &self.geometry;
        if let Some(r) = g.radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(invalid("geometry.radius must be positive"));
            }
        }
        if let Some(c) = g.center {
            if !finite(&c) {
                return Err(invalid("geometry.center must be finite"));
            }
        }
        if let Some(level) = g.level {
            if level > MAX_LEVEL {
                return Err(invalid(format!("geometry.level must be at most {MAX_LEVEL}")));
            }
        }
        if g.mesh.is_some() && (g.radius.is_some() || g.center.is_some() || g.level.is_some()) {
            return Err(invalid("geometry.mesh excludes radius, center and level"));
        }
        if let Some(p) = &self.params {
            p.validate()?;
        }
        for s in self.sources.iter().flatten() {
            if !finite(&s.position) || !finite(&s.coefficient.concat()) {
                return Err(invalid("sources must be finite"));
            }
        }
        if let Some(t) = &self.targets {
            if t.is_empty() || !t.iter().all(|p| finite(p)) {
                return Err(invalid("targets must be a non-empty list of finite points"));
            }
        }
        if let Some(r) = &self.radii {
            if r.len() < 2 || !r.iter().all(|&v| v > 0.0 && v.is_finite()) {
                return Err(invalid("radii needs at least two positive values"));
            }
            if !r.windows(2).all(|w| w[1] > w[0]) {
                return Err(invalid("radii must be increasing"));
            }
        }
        if let Some(levels) = &self.levels {
            if levels.len() < 2 || levels.iter().any(|&l| l > MAX_LEVEL) {
                return Err(invalid(format!("levels needs at least two entries, each at most {MAX_LEVEL}")));
            }
            if !levels.windows(2).all(|w| w[1] > w[0]) {
                return Err(invalid("levels must be increasing"));
            }
        }
        if self.samples == Some(0) {
            return Err(invalid("samples must be positive"));
        }
        if let Some(h) = self.spacing {
            if !(h > 0.0 && h < 1.0) {
                return Err(invalid("spacing must lie in (0, 1)"));
            }
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("relative_error", t.relative_error),
            ("algebra", t.algebra),
            ("order", t.order),
            ("l2_ratio", t.l2_ratio),
            ("decade_factor", t.decade_factor),
            ("stokes", t.stokes),
        ] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(invalid(format!("tolerances.{name} must be positive")));
                }
            }
        }
        Ok(())
    }

    /// The surface, either an icosphere or an imported mesh.
    pub fn mesh(&self, default_level: u32) -> Result<SurfaceMesh, RunError> {
        let g = &self.geometry;
        match &g.mesh {
            Some(path) => {
                let path = self.base_dir.join(path);
                SurfaceMesh::read(&path)
                    .map_err(|e| invalid(format!("mesh {}: {e}", path.display())))
            }
            None => Ok(icosphere(
                g.radius.unwrap_or(1.0),
                g.level.unwrap_or(default_level),
                g.center.unwrap_or([0.0; 3]),
            )),
        }
    }

    pub fn params_or(&self, default: KernelParams) -> Result<KernelParams, RunError> {
        match &self.params {
            Some(p) => p.to_kernel_params(),
            None => Ok(default),
        }
    }

    pub fn sources_or(&self, default: Vec<Source>) -> Vec<Source> {
        match &self.sources {
            Some(list) => list.iter().map(SourceConfig::to_source).collect(),
            None => default,
        }
    }

    pub fn targets_or(&self, default: Vec<Point>) -> Vec<Point> {
        self.targets.clone().unwrap_or(default)
    }

    pub fn radii_or(&self, default: &[f64]) -> Vec<f64> {
        self.radii.clone().unwrap_or_else(|| default.to_vec())
    }
}

impl ParamsConfig {
    fn validate(&self) -> Result<(), RunError> {
        let families = [
            self.nu.is_some(),
            self.omega.is_some() || self.m.is_some(),
            self.alpha.is_some(),
        ];
        if families.iter().filter(|&&b| b).count() != 1 {
            return Err(invalid("params needs exactly one of: nu, omega + m, alpha"));
        }
        if (self.omega.is_some()) != (self.m.is_some()) {
            return Err(invalid("params.omega and params.m go together"));
        }
        if let Some(nu) = self.nu {
            if !finite(&nu) || nu[1] < 0.0 {
                return Err(invalid("params.nu must be finite with Im nu >= 0"));
            }
        }
        if let (Some(w), Some(m)) = (self.omega, self.m) {
            if !finite(&[w, m]) {
                return Err(invalid("params.omega and params.m must be finite"));
            }
        }
        if let Some(a) = self.alpha {
            if !finite(&a.concat()) || a.concat().iter().all(|&v| v == 0.0) {
                return Err(invalid("params.alpha must be finite and non-zero"));
            }
        }
        Ok(())
    }

    pub fn to_kernel_params(&self) -> Result<KernelParams, RunError> {
        self.validate()?;
        if let Some([re, im]) = self.nu {
            return Ok(KernelParams::Nu(Complex::new(re, im)));
        }
        if let (Some(omega), Some(m)) = (self.omega, self.m) {
            return Ok(KernelParams::SpinorWM { omega, m });
        }
        let a = self.alpha.expect("validated");
        Ok(KernelParams::Alpha(ComplexQuaternion::vector(a.map(|[re, im]| Complex::new(re, im)))))
    }
}

impl SourceConfig {
    pub fn to_source(&self) -> Source {
        let c = self.coefficient.map(|[re, im]| Complex::new(re, im));
        Source::new(self.position, ComplexQuaternion { c })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ScenarioConfig, RunError> {
        ScenarioConfig::from_toml(text, Path::new("."))
    }

    #[test]
    fn minimal_config() {
        let cfg = parse("schema_version = 1").unwrap();
        assert!(cfg.params.is_none());
        assert_eq!(cfg.mesh(3).unwrap().level, Some(3));
    }

    #[test]
    fn full_config() {
        let cfg = parse(
            r#"
            schema_version = 1
            scenario = "demo"
            seed = 3
            targets = [[0.0, 0.0, 0.0], [0.1, 0.2, 0.3]]
            radii = [2.0, 4.0]
            [geometry]
            radius = 2.0
            level = 2
            [params]
            omega = 2.0
            m = 1.0
            [[sources]]
            position = [0.0, 0.0, 3.0]
            coefficient = [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]
            [tolerances]
            relative_error = 1e-2
            "#,
        )
        .unwrap();
        assert_eq!(cfg.params_or(KernelParams::Nu(Complex::new(1.0, 0.0))).unwrap(), KernelParams::SpinorWM {
            omega: 2.0,
            m: 1.0
        });
        assert_eq!(cfg.sources_or(Vec::new()).len(), 1);
        assert_eq!(cfg.mesh(4).unwrap().enclosing_radius, 2.0);
    }

    #[test]
    fn rejects_bad_documents() {
        for text in [
            "schema_version = 2",
            "schema_version = 1\nunknown = 3",
            "schema_version = 1\n[geometry]\nradius = -1.0",
            "schema_version = 1\n[geometry]\nlevel = 9",
            "schema_version = 1\n[params]\nnu = [1.0, 0.0]\nomega = 1.0\nm = 1.0",
            "schema_version = 1\n[params]\nomega = 1.0",
            "schema_version = 1\n[params]\nnu = [1.0, -0.5]",
            "schema_version = 1\nradii = [4.0, 2.0]",
            "schema_version = 1\ntargets = []",
            "schema_version = 1\n[tolerances]\nrelative_error = 0.0",
            "scenario = \"no version\"",
        ] {
            assert!(matches!(parse(text), Err(RunError::ConfigInvalid(_))), "{text}");
        }
    }
}
