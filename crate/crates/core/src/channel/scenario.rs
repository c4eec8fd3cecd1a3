//! Scenario description: geometry, propagation constants, and power budget.
//!
//! Scenario files are JSON with snake_case field names. Powers may be plain numbers
//! (watts) or strings carrying a `dBm` / `dB` suffix; everything is converted to
//! linear watts on load.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};

pub type Point3 = [f64; 3];

/// LoS angle pair `(azimuth, elevation)` in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LosAngles {
    pub azimuth: f64,
    pub elevation: f64,
}

/// Explicit per-link distances and LoS angles. Any field left out falls back to
/// coordinate geometry.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinkOverrides {
    pub ap_irs_m: Option<f64>,
    pub ap_user_m: Option<Vec<f64>>,
    pub irs_user_m: Option<Vec<f64>>,
    pub ap_irs_aoa: Option<LosAngles>,
    pub irs_user_aod: Option<Vec<LosAngles>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub ap_position: Point3,
    pub irs_position: Point3,
    /// User 0 (index 1 in the usual numbering) is the confidential-service user.
    pub user_positions: Vec<Point3>,
    pub n_y: usize,
    pub n_z: usize,
    #[serde(default = "default_spacing")]
    pub element_spacing_over_wavelength: f64,
    pub rician_kappa: f64,
    #[serde(default = "default_direct_exponent")]
    pub pathloss_exponent_direct: f64,
    #[serde(default = "default_irs_exponent")]
    pub pathloss_exponent_irs: f64,
    #[serde(default = "default_reference_loss")]
    pub reference_loss_db: f64,
    #[serde(default = "default_reference_distance")]
    pub reference_distance_m: f64,
    #[serde(deserialize_with = "deserialize_powers")]
    pub noise_powers_w: Vec<f64>,
    #[serde(deserialize_with = "deserialize_power")]
    pub total_power_w: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub distance_overrides: Option<LinkOverrides>,
}

fn default_spacing() -> f64 {
    0.5
}
fn default_direct_exponent() -> f64 {
    3.75
}
fn default_irs_exponent() -> f64 {
    2.2
}
fn default_reference_loss() -> f64 {
    30.0
}
fn default_reference_distance() -> f64 {
    1.0
}

/// Parses a power given in watts, `"<x>dBm"`, or `"<x>dB"` (dB relative to 1 W).
pub fn parse_power(text: &str) -> Result<f64> {
    let t = text.trim();
    let lower = t.to_ascii_lowercase();
    let value = if let Some(num) = lower.strip_suffix("dbm") {
        let db: f64 = parse_number(num)?;
        10f64.powf(db / 10.0) * 1e-3
    } else if let Some(num) = lower.strip_suffix("dbw").or_else(|| lower.strip_suffix("db")) {
        let db: f64 = parse_number(num)?;
        10f64.powf(db / 10.0)
    } else if let Some(num) = lower.strip_suffix('w') {
        parse_number(num)?
    } else {
        parse_number(&lower)?
    };
    if !(value.is_finite() && value > 0.0) {
        return Err(Error::Config(format!("power must be positive and finite: {text:?}")));
    }
    Ok(value)
}

fn parse_number(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Config(format!("not a number: {s:?}")))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PowerRepr {
    Watts(f64),
    Text(String),
}

impl PowerRepr {
    fn watts(self) -> Result<f64> {
        match self {
            PowerRepr::Watts(w) if w.is_finite() && w > 0.0 => Ok(w),
            PowerRepr::Watts(w) => Err(Error::Config(format!("power must be positive: {w}"))),
            PowerRepr::Text(s) => parse_power(&s),
        }
    }
}

fn deserialize_power<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    PowerRepr::deserialize(d)?.watts().map_err(serde::de::Error::custom)
}

fn deserialize_powers<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<f64>, D::Error> {
    Vec::<PowerRepr>::deserialize(d)?
        .into_iter()
        .map(|p| p.watts().map_err(serde::de::Error::custom))
        .collect()
}

fn distance(a: &Point3, b: &Point3) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// In-plane angle of `d`, measured from the −z axis towards −x.
fn plane_angle(d: &Point3) -> f64 {
    (-d[0]).atan2(-d[2])
}

/// Resolved link geometry consumed by the channel generator.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkGeometry {
    pub ap_irs_m: f64,
    pub ap_user_m: Vec<f64>,
    pub irs_user_m: Vec<f64>,
    pub ap_irs_aoa: LosAngles,
    pub irs_user_aod: Vec<LosAngles>,
}

impl ScenarioConfig {
    pub fn num_users(&self) -> usize {
        self.user_positions.len()
    }

    pub fn num_elements(&self) -> usize {
        self.n_y * self.n_z
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.num_users();
        if k < 2 {
            return Err(Error::Config(format!("need at least 2 users, got {k}")));
        }
        if self.n_y == 0 || self.n_z == 0 {
            return Err(Error::Config("IRS grid dimensions must be positive".into()));
        }
        if self.noise_powers_w.len() != k {
            return Err(Error::Config(format!(
                "noise_powers_w has {} entries for {k} users",
                self.noise_powers_w.len()
            )));
        }
        if self.noise_powers_w.iter().any(|&s| !(s.is_finite() && s > 0.0)) {
            return Err(Error::Config("noise powers must be strictly positive".into()));
        }
        if !(self.total_power_w.is_finite() && self.total_power_w > 0.0) {
            return Err(Error::Config("total power must be strictly positive".into()));
        }
        if !(self.rician_kappa >= 0.0) {
            return Err(Error::Config("rician_kappa must be nonnegative".into()));
        }
        if !(self.element_spacing_over_wavelength > 0.0) {
            return Err(Error::Config("element spacing must be positive".into()));
        }
        if !(self.reference_distance_m > 0.0) {
            return Err(Error::Config("reference distance must be positive".into()));
        }
        let geo = self.geometry()?;
        let all = std::iter::once(geo.ap_irs_m)
            .chain(geo.ap_user_m.iter().copied())
            .chain(geo.irs_user_m.iter().copied());
        for d in all {
            if !(d.is_finite() && d > 0.0) {
                return Err(Error::Config(format!("link distance must be positive, got {d}")));
            }
        }
        Ok(())
    }

    /// Distances and LoS angles, honouring overrides where present.
    ///
    /// Angles default to an in-plane frame whose boresight points from the IRS towards
    /// the origin; elevation is measured from the +y axis, so terminals in the x-z plane
    /// sit at `π/2`.
    pub fn geometry(&self) -> Result<LinkGeometry> {
        let k = self.num_users();
        let ov = self.distance_overrides.clone().unwrap_or_default();
        let check_len = |name: &str, len: usize| -> Result<()> {
            if len != k {
                return Err(Error::Config(format!("override {name} has {len} entries for {k} users")));
            }
            Ok(())
        };

        let irs = self.irs_position;
        let boresight = [-irs[0], -irs[1], -irs[2]];
        let boresight_angle = plane_angle(&boresight);
        let angles_towards = |p: &Point3| -> LosAngles {
            let d = [p[0] - irs[0], p[1] - irs[1], p[2] - irs[2]];
            let norm = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
            let elevation = if norm > 0.0 { (d[1] / norm).clamp(-1.0, 1.0).acos() } else { FRAC_PI_2 };
            LosAngles { azimuth: boresight_angle - plane_angle(&d), elevation }
        };

        let ap_irs_m = ov.ap_irs_m.unwrap_or_else(|| distance(&self.ap_position, &irs));
        let ap_user_m = match ov.ap_user_m {
            Some(v) => {
                check_len("ap_user_m", v.len())?;
                v
            }
            None => self.user_positions.iter().map(|u| distance(&self.ap_position, u)).collect(),
        };
        let irs_user_m = match ov.irs_user_m {
            Some(v) => {
                check_len("irs_user_m", v.len())?;
                v
            }
            None => self.user_positions.iter().map(|u| distance(&irs, u)).collect(),
        };
        let ap_irs_aoa = ov.ap_irs_aoa.unwrap_or_else(|| angles_towards(&self.ap_position));
        let irs_user_aod = match ov.irs_user_aod {
            Some(v) => {
                check_len("irs_user_aod", v.len())?;
                v
            }
            None => self.user_positions.iter().map(angles_towards).collect(),
        };
        Ok(LinkGeometry { ap_irs_m, ap_user_m, irs_user_m, ap_irs_aoa, irs_user_aod })
    }

    /// Two-user layout: AP at (0,0,30), IRS at (30,0,30), user 1 at (0,0,d1), user 2 at
    /// (30,0,−10), with the tabulated link distances and angles applied as overrides.
    pub fn two_user(d1: f64, n_y: usize, n_z: usize, kappa: f64, seed: u64) -> Self {
        let aod_user1 = 30f64.atan2(30.0 - d1) - FRAC_PI_4;
        ScenarioConfig {
            ap_position: [0.0, 0.0, 30.0],
            irs_position: [30.0, 0.0, 30.0],
            user_positions: vec![[0.0, 0.0, d1], [30.0, 0.0, -10.0]],
            n_y,
            n_z,
            element_spacing_over_wavelength: 0.5,
            rician_kappa: kappa,
            pathloss_exponent_direct: 3.75,
            pathloss_exponent_irs: 2.2,
            reference_loss_db: 30.0,
            reference_distance_m: 1.0,
            noise_powers_w: vec![1e-11; 2],
            total_power_w: 1.0,
            seed,
            distance_overrides: Some(LinkOverrides {
                ap_irs_m: Some(30.0),
                ap_user_m: Some(vec![(900.0 + d1 * d1).sqrt(), 50.0]),
                irs_user_m: Some(vec![(900.0 + (30.0 - d1).powi(2)).sqrt(), 40.0]),
                ap_irs_aoa: Some(LosAngles { azimuth: -FRAC_PI_4, elevation: FRAC_PI_2 }),
                irs_user_aod: Some(vec![
                    LosAngles { azimuth: aod_user1, elevation: FRAC_PI_2 },
                    LosAngles { azimuth: FRAC_PI_4, elevation: FRAC_PI_2 },
                ]),
            }),
        }
    }

    /// Multi-user layout: user k sits at a ground offset of 10k metres; the AP-user
    /// distance follows the two-user pattern `sqrt(30² + (10k)²)`.
    pub fn multi_user(users: usize, n_y: usize, n_z: usize, kappa: f64, seed: u64) -> Self {
        let offsets: Vec<f64> = (1..=users).map(|k| 10.0 * k as f64).collect();
        ScenarioConfig {
            ap_position: [0.0, 0.0, 30.0],
            irs_position: [30.0, 0.0, 30.0],
            user_positions: offsets.iter().map(|&z| [0.0, 0.0, z]).collect(),
            n_y,
            n_z,
            element_spacing_over_wavelength: 0.5,
            rician_kappa: kappa,
            pathloss_exponent_direct: 3.75,
            pathloss_exponent_irs: 2.2,
            reference_loss_db: 30.0,
            reference_distance_m: 1.0,
            noise_powers_w: vec![1e-11; users],
            total_power_w: 1.0,
            seed,
            distance_overrides: Some(LinkOverrides {
                ap_irs_m: Some(30.0),
                ap_user_m: Some(offsets.iter().map(|z| (900.0 + z * z).sqrt()).collect()),
                irs_user_m: Some(offsets.iter().map(|z| (900.0 + (30.0 - z).powi(2)).sqrt()).collect()),
                ap_irs_aoa: Some(LosAngles { azimuth: -FRAC_PI_4, elevation: FRAC_PI_2 }),
                irs_user_aod: Some(
                    offsets
                        .iter()
                        .map(|z| LosAngles { azimuth: 30f64.atan2(30.0 - z) - FRAC_PI_4, elevation: FRAC_PI_2 })
                        .collect(),
                ),
            }),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("scenario JSON: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_units() {
        assert!((parse_power("-80dBm").unwrap() - 1e-11).abs() < 1e-24);
        assert!((parse_power("30 dBm").unwrap() - 1.0).abs() < 1e-12);
        assert!((parse_power("10dB").unwrap() - 10.0).abs() < 1e-12);
        assert_eq!(parse_power("0.5").unwrap(), 0.5);
        assert!(parse_power("-1").is_err());
        assert!(parse_power("abc").is_err());
    }

    #[test]
    fn json_accepts_mixed_power_units() {
        let text = r#"{
            "ap_position": [0, 0, 30], "irs_position": [30, 0, 30],
            "user_positions": [[0, 0, 10], [30, 0, -10]],
            "n_y": 2, "n_z": 1, "rician_kappa": 10,
            "noise_powers_w": ["-80dBm", 1e-11], "total_power_w": "30dBm"
        }"#;
        let cfg = ScenarioConfig::from_json(text).unwrap();
        assert!((cfg.noise_powers_w[0] - 1e-11).abs() < 1e-24);
        assert!((cfg.total_power_w - 1.0).abs() < 1e-12);
        assert_eq!(cfg.pathloss_exponent_direct, 3.75);
        assert_eq!(cfg.element_spacing_over_wavelength, 0.5);
    }

    #[test]
    fn rejects_single_user_and_zero_distance() {
        let mut cfg = ScenarioConfig::two_user(20.0, 2, 1, 10.0, 1);
        cfg.user_positions.pop();
        cfg.noise_powers_w.pop();
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));

        let mut cfg = ScenarioConfig::two_user(20.0, 2, 1, 10.0, 1);
        cfg.distance_overrides = None;
        cfg.user_positions[0] = cfg.ap_position;
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn two_user_table_values() {
        let g = ScenarioConfig::two_user(20.0, 2, 1, 10.0, 1).geometry().unwrap();
        assert_eq!(g.ap_irs_m, 30.0);
        assert_eq!(g.ap_user_m[1], 50.0);
        assert_eq!(g.irs_user_m[1], 40.0);
        assert!((g.irs_user_m[0] - 1000f64.sqrt()).abs() < 1e-12);
        // d1 = 30 puts user 1 level with the IRS: quadrant-aware arctangent gives π/4.
        let g30 = ScenarioConfig::two_user(30.0, 2, 1, 10.0, 1).geometry().unwrap();
        assert!((g30.irs_user_aod[0].azimuth - FRAC_PI_4).abs() < 1e-12);
    }

    #[test]
    fn coordinate_angles_match_tabulated_ap_and_user2() {
        let mut cfg = ScenarioConfig::two_user(20.0, 2, 1, 10.0, 1);
        cfg.distance_overrides = None;
        let g = cfg.geometry().unwrap();
        assert!((g.ap_irs_aoa.azimuth + FRAC_PI_4).abs() < 1e-12);
        assert!((g.irs_user_aod[1].azimuth - FRAC_PI_4).abs() < 1e-12);
        assert!((g.ap_irs_aoa.elevation - FRAC_PI_2).abs() < 1e-12);
        assert_eq!(g.irs_user_m[1], 40.0);
        assert_eq!(g.ap_user_m[1], 50.0);
    }
}
