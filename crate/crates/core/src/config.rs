//! Beam and grid configuration shared by the CLI and JSON config files.

use std::f64::consts::FRAC_PI_3;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::beam::{
    make_fourfold_beam, make_ghz_beam, make_noon_beam, make_pp_beam, make_ps_beam, make_radial_beam, make_w_beam,
    VectorBeam,
};
use crate::error::{Error, Result};
use crate::grid::{make_grid, FieldGrid};

pub const DEFAULT_W0: f64 = 1.0;
pub const DEFAULT_EXTENT: f64 = 8.0;
pub const DEFAULT_GRID: usize = 512;
pub const DEFAULT_PP_SEPARATION: f64 = 3.0;
pub const DEFAULT_FOURFOLD_SEPARATION: f64 = 1.0;
pub const DEFAULT_FOURFOLD_WIDTH: f64 = 0.5;
pub const DEFAULT_NOON_ORDER: u32 = 4;
pub const DEFAULT_NOON_THETA: f64 = FRAC_PI_3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Pp,
    Fourfold,
    Ps,
    Radial,
    Ghz,
    W,
    Noon,
}

impl Family {
    pub const ALL: [Family; 7] =
        [Family::Pp, Family::Fourfold, Family::Ps, Family::Radial, Family::Ghz, Family::W, Family::Noon];

    pub fn name(self) -> &'static str {
        match self {
            Family::Pp => "pp",
            Family::Fourfold => "fourfold",
            Family::Ps => "ps",
            Family::Radial => "radial",
            Family::Ghz => "ghz",
            Family::W => "w",
            Family::Noon => "noon",
        }
    }

    pub fn parse(s: &str) -> Result<Family> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown beam family '{s}'")))
    }

    fn accepts(self, key: &str) -> bool {
        let allowed: &[&str] = match self {
            Family::Pp => &["a", "w0"],
            Family::Fourfold => &["a", "b", "A", "allow_overlap"],
            Family::Ps => &["A", "w0"],
            Family::Radial | Family::Ghz | Family::W => &["w0"],
            Family::Noon => &["N", "theta", "w0"],
        };
        allowed.contains(&key)
    }
}

/// Beam family, its parameters and the sampling grid.
///
/// Every field is optional so that a config file and command-line flags can
/// be layered with [`BeamConfig::merged_with`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w0: Option<f64>,
    #[serde(default, rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    /// `A00, A01, A10, A11` as `[re, im]` pairs.
    #[serde(default, rename = "A", skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub allow_overlap: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nx: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ny: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extent: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<f64>,
}

impl BeamConfig {
    pub fn for_family(family: Family) -> Self {
        BeamConfig { family: Some(family), ..Default::default() }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        BeamConfig::from_json(&text)
    }

    /// Configuration reproducing figure `n` (1 to 6) of the beam catalog:
    /// twofold polarization-position, fourfold, radial, GHZ, W and NOON
    /// (`N = 4`, `θ = π/3`), all at `z = 0`.
    pub fn figure(n: u32) -> Option<Self> {
        let family = match n {
            1 => Family::Pp,
            2 => Family::Fourfold,
            3 => Family::Radial,
            4 => Family::Ghz,
            5 => Family::W,
            6 => Family::Noon,
            _ => return None,
        };
        Some(BeamConfig::for_family(family))
    }

    /// Fields set in `overrides` replace those in `self`.
    pub fn merged_with(self, overrides: BeamConfig) -> Self {
        BeamConfig {
            family: overrides.family.or(self.family),
            a: overrides.a.or(self.a),
            b: overrides.b.or(self.b),
            w0: overrides.w0.or(self.w0),
            n: overrides.n.or(self.n),
            theta: overrides.theta.or(self.theta),
            coeffs: overrides.coeffs.or(self.coeffs),
            allow_overlap: overrides.allow_overlap.or(self.allow_overlap),
            nx: overrides.nx.or(self.nx),
            ny: overrides.ny.or(self.ny),
            extent: overrides.extent.or(self.extent),
            z: overrides.z.or(self.z),
        }
    }

    pub fn family(&self) -> Result<Family> {
        self.family.ok_or_else(|| Error::InvalidParameter("no beam family given".into()))
    }

    fn check_keys(&self, family: Family) -> Result<()> {
        let present = [
            ("a", self.a.is_some()),
            ("b", self.b.is_some()),
            ("w0", self.w0.is_some()),
            ("N", self.n.is_some()),
            ("theta", self.theta.is_some()),
            ("A", self.coeffs.is_some()),
            ("allow_overlap", self.allow_overlap.is_some()),
        ];
        for (key, set) in present {
            if set && !family.accepts(key) {
                return Err(Error::InvalidParameter(format!(
                    "parameter '{key}' does not apply to the {} family",
                    family.name()
                )));
            }
        }
        Ok(())
    }

    fn coefficient_matrix(&self, default: [[Complex64; 2]; 2]) -> Result<[[Complex64; 2]; 2]> {
        match &self.coeffs {
            None => Ok(default),
            Some(v) if v.len() == 4 => {
                let z: Vec<Complex64> = v.iter().map(|p| Complex64::new(p[0], p[1])).collect();
                Ok([[z[0], z[1]], [z[2], z[3]]])
            }
            Some(v) => Err(Error::InvalidParameter(format!("expected 4 coefficients, got {}", v.len()))),
        }
    }

    pub fn build_beam(&self) -> Result<VectorBeam> {
        let family = self.family()?;
        self.check_keys(family)?;
        let w0 = self.w0.unwrap_or(DEFAULT_W0);
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        match family {
            Family::Pp => make_pp_beam(self.a.unwrap_or(DEFAULT_PP_SEPARATION), w0),
            Family::Fourfold => make_fourfold_beam(
                self.coefficient_matrix([[one; 2]; 2])?,
                self.a.unwrap_or(DEFAULT_FOURFOLD_SEPARATION),
                self.b.unwrap_or(DEFAULT_FOURFOLD_WIDTH),
                self.allow_overlap.unwrap_or(false),
            ),
            Family::Ps => make_ps_beam(self.coefficient_matrix([[one, zero], [zero, one]])?, w0),
            Family::Radial => make_radial_beam(w0),
            Family::Ghz => make_ghz_beam(w0),
            Family::W => make_w_beam(w0),
            Family::Noon => {
                make_noon_beam(self.n.unwrap_or(DEFAULT_NOON_ORDER), self.theta.unwrap_or(DEFAULT_NOON_THETA), w0)
            }
        }
    }

    /// Grid from the config, with `default_n` samples per axis when `nx` or
    /// `ny` is unset.
    pub fn build_grid(&self, default_n: usize) -> Result<FieldGrid> {
        make_grid(
            self.nx.unwrap_or(default_n),
            self.ny.unwrap_or(default_n),
            self.extent.unwrap_or(DEFAULT_EXTENT),
            self.z.unwrap_or(0.0),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beam::BeamFamily;

    #[test]
    fn defaults() {
        let g = BeamConfig::for_family(Family::Radial).build_grid(DEFAULT_GRID).unwrap();
        assert_eq!((g.nx(), g.ny(), g.x_bounds(), g.z()), (512, 512, (-8.0, 8.0), 0.0));
        let b = BeamConfig::for_family(Family::Noon).build_beam().unwrap();
        assert_eq!(b.family(), BeamFamily::Noon);
        assert_eq!(b.params().n, Some(4));
        assert_eq!(b.params().theta, Some(FRAC_PI_3));
    }

    #[test]
    fn json_round_trip_and_merge() {
        let cfg = BeamConfig::from_json(r#"{"family":"pp","a":1.5,"nx":64,"ny":64}"#).unwrap();
        assert_eq!(cfg.family, Some(Family::Pp));
        let merged = cfg.clone().merged_with(BeamConfig { a: Some(2.0), ..Default::default() });
        assert_eq!(merged.a, Some(2.0));
        assert_eq!(merged.nx, Some(64));
        let text = serde_json::to_string(&merged).unwrap();
        assert_eq!(BeamConfig::from_json(&text).unwrap(), merged);
    }

    #[test]
    fn rejects_unknown_and_mismatched_parameters() {
        assert!(matches!(BeamConfig::from_json(r#"{"family":"pp","bogus":1}"#), Err(Error::Parse(_))));
        let cfg = BeamConfig { b: Some(0.5), ..BeamConfig::for_family(Family::Radial) };
        assert!(matches!(cfg.build_beam(), Err(Error::InvalidParameter(_))));
        let cfg = BeamConfig { coeffs: Some(vec![[1.0, 0.0]; 3]), ..BeamConfig::for_family(Family::Ps) };
        assert!(cfg.build_beam().is_err());
        assert!(BeamConfig::default().build_beam().is_err());
        assert!(Family::parse("laguerre").is_err());
    }

    #[test]
    fn fourfold_geometry_is_checked() {
        let cfg = BeamConfig { a: Some(1.0), b: Some(2.5), ..BeamConfig::for_family(Family::Fourfold) };
        assert!(matches!(cfg.build_beam(), Err(Error::InvalidGeometry(_))));
        let cfg = BeamConfig { allow_overlap: Some(true), ..cfg };
        assert!(cfg.build_beam().is_ok());
    }

    #[test]
    fn figures_cover_every_family() {
        let fams: Vec<Family> = (1..=6).map(|n| BeamConfig::figure(n).unwrap().family().unwrap()).collect();
        assert_eq!(fams.len(), 6);
        assert!(BeamConfig::figure(7).is_none());
        for n in 1..=6 {
            assert!(BeamConfig::figure(n).unwrap().build_beam().is_ok());
        }
    }
}
