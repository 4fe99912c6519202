//! Configuration file schema and scenario resolution.
//!
//! A run is described by a JSON document with a `scenario` section and an
//! optional `run` section. The scenario comes from exactly one of three
//! sources: explicit per-user gains, plane geometry with path loss, or a
//! fading ensemble sampled at trial zero. Quantities with a dB variant
//! accept exactly one of the two spellings.

use std::fs;
use std::path::Path;

use serde::Deserialize;

use relay_market::model::Scenario;
use relay_market::scenarios::{pathloss_scenario, sample_rayleigh, FadingSpec, Geometry};

use crate::CliError;

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub scenario: Option<ScenarioSection>,
    #[serde(default)]
    pub run: RunSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    pub users: Option<Vec<UserEntry>>,
    pub geometry: Option<GeometrySection>,
    pub fading: Option<FadingSection>,
    pub q: Option<f64>,
    pub q_db: Option<f64>,
    pub relay_power: Option<f64>,
    pub relay_power_db: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UserEntry {
    pub q: Option<f64>,
    pub q_db: Option<f64>,
    pub f2: f64,
    pub g2: f64,
    pub h2: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySection {
    pub user_positions: Vec<[f64; 2]>,
    pub destination_positions: Vec<[f64; 2]>,
    pub relay_position: [f64; 2],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FadingSection {
    pub n_users: usize,
    pub var_f: f64,
    pub var_g: f64,
    pub var_h: f64,
    pub q_db: f64,
    pub p_db: f64,
    pub seed: Option<u64>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub lambda: Option<f64>,
    pub lambda_grid: Option<Vec<f64>>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub scheme: Option<String>,
}

pub fn load_config(path: &Path) -> Result<ConfigFile, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("malformed config {}: {e}", path.display())))
}

pub fn load_scenario_file(path: &Path) -> Result<ScenarioSection, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("malformed scenario {}: {e}", path.display())))
}

fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Picks exactly one of a linear and a dB spelling of the same quantity,
/// returning the value in dB.
fn exclusive_db(
    what: &str,
    linear: Option<f64>,
    db: Option<f64>,
) -> Result<f64, CliError> {
    match (linear, db) {
        (Some(_), Some(_)) => Err(CliError::Config(format!(
            "{what} and {what}_db are mutually exclusive"
        ))),
        (Some(v), None) => {
            if v <= 0.0 {
                return Err(CliError::Config(format!("{what} must be positive")));
            }
            Ok(linear_to_db(v))
        }
        (None, Some(v)) => Ok(v),
        (None, None) => Err(CliError::Config(format!(
            "missing {what} (or {what}_db)"
        ))),
    }
}

/// Builds the concrete scenario from one of the three sources, mapping
/// validation failures to config errors.
pub fn resolve_scenario(
    section: &ScenarioSection,
    default_seed: u64,
) -> Result<Scenario, CliError> {
    let sources = [
        section.users.is_some(),
        section.geometry.is_some(),
        section.fading.is_some(),
    ]
    .iter()
    .filter(|&&s| s)
    .count();
    if sources != 1 {
        return Err(CliError::Config(
            "scenario needs exactly one of users, geometry, or fading".into(),
        ));
    }

    if let Some(users) = &section.users {
        if section.q.is_some() || section.q_db.is_some() {
            return Err(CliError::Config(
                "scenario-level q applies only to geometry scenarios".into(),
            ));
        }
        let p_db = exclusive_db("relay_power", section.relay_power, section.relay_power_db)?;
        let p = relay_market::model::db_to_linear(p_db);
        let mut links = Vec::with_capacity(users.len());
        for (i, entry) in users.iter().enumerate() {
            let q_db = exclusive_db("q", entry.q, entry.q_db)
                .map_err(|e| match e {
                    CliError::Config(msg) => CliError::Config(format!("user {i}: {msg}")),
                    other => other,
                })?;
            let q = relay_market::model::db_to_linear(q_db);
            let link = relay_market::model::UserLink::new(q, entry.f2, entry.g2, entry.h2)
                .map_err(|e| CliError::Config(format!("user {i}: {e}")))?;
            links.push(link);
        }
        return Scenario::new(links, p).map_err(|e| CliError::Config(e.to_string()));
    }

    if let Some(geometry) = &section.geometry {
        let q_db = exclusive_db("q", section.q, section.q_db)?;
        let p_db = exclusive_db("relay_power", section.relay_power, section.relay_power_db)?;
        let geometry = Geometry::new(
            geometry.user_positions.clone(),
            geometry.destination_positions.clone(),
            geometry.relay_position,
        )
        .map_err(|e| CliError::Config(e.to_string()))?;
        return pathloss_scenario(&geometry, q_db, p_db)
            .map_err(|e| CliError::Config(e.to_string()));
    }

    let fading = section.fading.as_ref().expect("one source is present");
    if section.q.is_some()
        || section.q_db.is_some()
        || section.relay_power.is_some()
        || section.relay_power_db.is_some()
    {
        return Err(CliError::Config(
            "fading scenarios carry their own q_db and p_db".into(),
        ));
    }
    let spec = FadingSpec::new(
        fading.n_users,
        fading.var_f,
        fading.var_g,
        fading.var_h,
        fading.q_db,
        fading.p_db,
        fading.seed.unwrap_or(default_seed),
    )
    .map_err(|e| CliError::Config(e.to_string()))?;
    Ok(sample_rayleigh(&spec, 0))
}
