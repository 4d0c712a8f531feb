//! TOML model files.
//!
//! ```toml
//! group = "Z+Zomega"          # or "Z", "Q", or a list such as ["Q", "Z"]
//! precision = "[4;0]"
//! u = "1"
//!
//! [character]
//! omega = "t^[-1;0]"
//! unit = "0"
//!
//! [coeff]
//! th1 = "t^-3"
//!
//! [[generator]]               # optional provenance for entries of [coeff]
//! index = 1
//! exponent = "[0;1]"
//! purpose = "density"
//! ```
//!
//! Character keys are `omega`, `unit` in rank 2, `unit` in rank 1, and
//! `e0`, `e1`, … (most significant first) otherwise.  Missing keys mean 0.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::deriv::DerivationSpec;
use crate::dvmodel::DvModel;
use crate::error::{Error, Result};
use crate::hahn::HahnSeries;
use crate::ordgroup::{CoordKind, ValueGroupDesc};
use crate::parse::{parse_group_elem, parse_series};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum GroupSpec {
    Named(String),
    Kinds(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct GeneratorEntry {
    index: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    exponent: Option<String>,
    #[serde(default = "declared")]
    purpose: String,
}

fn declared() -> String {
    "declared".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    group: GroupSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    precision: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    u: Option<String>,
    #[serde(default)]
    character: BTreeMap<String, String>,
    #[serde(default)]
    coeff: BTreeMap<String, String>,
    #[serde(default, rename = "generator", skip_serializing_if = "Vec::is_empty")]
    generators: Vec<GeneratorEntry>,
}

fn kind(name: &str) -> Result<CoordKind> {
    match name {
        "Z" | "integers" => Ok(CoordKind::Integers),
        "Q" | "rationals" => Ok(CoordKind::Rationals),
        other => Err(Error::Model(format!("unknown group factor {other:?}; use \"Z\" or \"Q\""))),
    }
}

fn group_of(spec: &GroupSpec) -> Result<ValueGroupDesc> {
    match spec {
        GroupSpec::Named(n) => match n.as_str() {
            "Z+Zomega" | "Z+Zw" => Ok(ValueGroupDesc::z_plus_z_omega()),
            other => ValueGroupDesc::new(vec![kind(other)?]),
        },
        GroupSpec::Kinds(ks) => ValueGroupDesc::new(ks.iter().map(|k| kind(k)).collect::<Result<_>>()?),
    }
}

fn character_keys(rank: usize) -> Vec<String> {
    match rank {
        1 => vec!["unit".into()],
        2 => vec!["omega".into(), "unit".into()],
        r => (0..r).map(|i| format!("e{i}")).collect(),
    }
}

fn generator_index(key: &str) -> Result<usize> {
    key.strip_prefix("th")
        .and_then(|n| n.parse::<usize>().ok())
        .filter(|n| *n >= 1)
        .ok_or_else(|| Error::Model(format!("coefficient key {key:?} is not of the form th<k>")))
}

fn field<T>(what: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Model(format!("{what}: {e}")))
}

/// Builds a model from TOML text.
pub fn load_model_str(text: &str) -> Result<DvModel> {
    let file: ModelFile = toml::from_str(text).map_err(|e| Error::Model(e.to_string()))?;
    let group = group_of(&file.group)?;
    let rank = group.rank();
    let keys = character_keys(rank);
    if let Some(bad) = file.character.keys().find(|k| !keys.contains(k)) {
        return Err(Error::Model(format!("character key {bad:?} not valid in rank {rank}; expected {keys:?}")));
    }
    let character = keys
        .iter()
        .map(|k| match file.character.get(k) {
            Some(s) => field(&format!("character.{k}"), parse_series(s, rank)),
            None => Ok(HahnSeries::zero(rank)),
        })
        .collect::<Result<Vec<_>>>()?;
    let mut coeffs = Vec::new();
    for (k, v) in &file.coeff {
        coeffs.push((generator_index(k)?, field(&format!("coeff.{k}"), parse_series(v, rank))?));
    }
    coeffs.sort_by_key(|(m, _)| *m);
    let precision = match &file.precision {
        Some(p) => field("precision", parse_group_elem(p, rank))?,
        None => DvModel::default_precision(rank),
    };
    let mut model = DvModel::new(group, DerivationSpec::new(character)?, precision)?;
    // Declare every generator first so that dθ may mention later ones.
    for (m, _) in &coeffs {
        model.declare_generator(*m, HahnSeries::zero(rank), "declared")?;
    }
    for (m, d) in coeffs {
        model.redefine_generator(m, d)?;
    }
    if let Some(u) = &file.u {
        model.set_multiplier(field("u", parse_series(u, rank))?)?;
    }
    for g in &file.generators {
        let exponent = g.exponent.as_ref().map(|e| field("generator.exponent", parse_group_elem(e, rank))).transpose()?;
        model.annotate_generator(g.index, exponent, &g.purpose)?;
    }
    Ok(model)
}

pub fn load_model(path: &std::path::Path) -> Result<DvModel> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Model(format!("{}: {e}", path.display())))?;
    load_model_str(&text)
}

/// TOML text that [`load_model_str`] reads back to an equal model.
pub fn save_model_str(m: &DvModel) -> String {
    let kinds: Vec<String> = m
        .group()
        .kinds()
        .iter()
        .map(|k| match k {
            CoordKind::Integers => "Z".to_string(),
            CoordKind::Rationals => "Q".to_string(),
        })
        .collect();
    let character = character_keys(m.rank())
        .into_iter()
        .zip(m.deriv().character())
        .filter(|(_, s)| !s.is_exact_zero())
        .map(|(k, s)| (k, s.to_string()))
        .collect();
    let coeff = m.deriv().coeff_table().iter().map(|(k, s)| (format!("th{k}"), s.to_string())).collect();
    let generators = m
        .generators()
        .iter()
        .map(|g| GeneratorEntry {
            index: g.index,
            exponent: g.exponent.as_ref().map(|e| e.to_string()),
            purpose: g.purpose.clone(),
        })
        .collect();
    let u = m.deriv().multiplier();
    let file = ModelFile {
        group: GroupSpec::Kinds(kinds),
        precision: Some(m.precision().to_string()),
        u: (!u.is_exact_one()).then(|| u.to_string()),
        character,
        coeff,
        generators,
    };
    toml::to_string(&file).expect("model files serialize")
}

pub fn save_model(m: &DvModel, path: &std::path::Path) -> Result<()> {
    std::fs::write(path, save_model_str(m)).map_err(|e| Error::Model(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
group = "Z+Zomega"
precision = "[4;0]"
[character]
omega = "t^[-1;0]"
"#;

    #[test]
    fn base_model_matches_builtin() {
        assert_eq!(load_model_str(BASE).unwrap(), DvModel::partial_zero());
    }

    #[test]
    fn generators_may_reference_each_other() {
        let text = format!("{BASE}\n[coeff]\nth1 = \"th2*t^-1\"\nth2 = \"1\"\n");
        let m = load_model_str(&text).unwrap();
        assert_eq!(m.generators().len(), 2);
        let back = load_model_str(&save_model_str(&m)).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn grown_model_round_trips() {
        let mut m = load_model_str(BASE).unwrap();
        let unit = m.unit();
        m.weird_witness(&unit).unwrap();
        let back = load_model_str(&save_model_str(&m)).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn bad_files_are_model_errors() {
        assert!(matches!(load_model_str("group = \"R\""), Err(Error::Model(_))));
        assert!(matches!(load_model_str("group = \"Z\"\n[character]\nomega = \"1\""), Err(Error::Model(_))));
        assert!(matches!(load_model_str("group = \"Z\"\n[coeff]\nx1 = \"1\""), Err(Error::Model(_))));
        assert!(load_model_str("group = \"Z\"\n[coeff]\nth1 = \"th3\"").is_err());
    }
}
