//! Scenario loading. A scenario file is either a geometric description, from which
//! channels are drawn, or an explicit channel realization under a `channels` key.

use std::fs;
use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use irsi_core::channel::parse_power;
use irsi_core::linalg::{c, CVector, C64};
use irsi_core::rng::stream;
use irsi_core::{generate_channels, ChannelSet, Error, PhaseVector, Result, ScenarioConfig};

/// A channel realization with its power budget.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub channels: ChannelSet,
    pub total_power_w: f64,
    pub seed: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExplicitScenario {
    channels: ExplicitChannels,
    noise_powers_w: Vec<Value>,
    total_power_w: Value,
    #[serde(default)]
    seed: u64,
}

/// Complex entries are `[re, im]` pairs.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExplicitChannels {
    g: Vec<[f64; 2]>,
    m: Vec<Vec<[f64; 2]>>,
    h: Vec<[f64; 2]>,
}

fn power(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(w) if w.is_finite() && w > 0.0 => Ok(w),
            _ => Err(Error::Config(format!("power must be positive: {n}"))),
        },
        Value::String(s) => parse_power(s),
        other => Err(Error::Config(format!("power must be a number or a string: {other}"))),
    }
}

fn complex_vector(entries: &[[f64; 2]]) -> CVector {
    CVector::from_iterator(entries.len(), entries.iter().map(|[re, im]| c(*re, *im)))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))
}

/// Loads a scenario. Channels of a geometric scenario are drawn from `seed`, falling
/// back to the seed stored in the file.
pub fn load_scenario(path: &Path, seed: Option<u64>) -> Result<Scenario> {
    let text = read(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    if value.get("channels").is_some() {
        let ex: ExplicitScenario =
            serde_json::from_value(value).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let sigma2 = ex.noise_powers_w.iter().map(power).collect::<Result<Vec<_>>>()?;
        let m = ex.channels.m.iter().map(|row| complex_vector(row)).collect();
        let h: Vec<C64> = ex.channels.h.iter().map(|[re, im]| c(*re, *im)).collect();
        let channels = ChannelSet::new(complex_vector(&ex.channels.g), m, h, sigma2)?;
        return Ok(Scenario { channels, total_power_w: power(&ex.total_power_w)?, seed: seed.unwrap_or(ex.seed) });
    }
    let cfg = ScenarioConfig::from_json(&text)?;
    let seed = seed.unwrap_or(cfg.seed);
    let channels = generate_channels(&cfg, &mut stream(seed))?;
    Ok(Scenario { channels, total_power_w: cfg.total_power_w, seed })
}

/// Reads a JSON array of `n` phases in radians.
pub fn load_phases(path: &Path, n: usize) -> Result<PhaseVector> {
    let phases: Vec<f64> =
        serde_json::from_str(&read(path)?).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    if phases.len() != n {
        return Err(Error::Config(format!("{} holds {} phases, the scenario has {n} elements", path.display(), phases.len())));
    }
    if phases.iter().any(|p| !p.is_finite()) {
        return Err(Error::Config(format!("{} holds a non-finite phase", path.display())));
    }
    Ok(PhaseVector::from_phases(&phases))
}
