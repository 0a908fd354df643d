//! Scenario documents: UTF-8 JSON with a `scenarios` array and an optional
//! `defaults` object.
//!
//! Each entry is resolved by layering, lowest first:
//!
//! 1. the catalog entry of the same name, or for new names the catalog's
//!    shared constants (category-specific fields stripped);
//! 2. the document's `defaults`;
//! 3. the entry itself.
//!
//! Objects merge key by key, everything else replaces. `null` clears an
//! optional field, which is how an entry switches a catalog category from
//! `gamma_override` to `odd_dimensions`.

use std::collections::HashSet;
use std::path::Path;
use std::sync::OnceLock;

use jsonschema::Validator;
use serde_json::{Map, Value};

use crate::error::{Error, Result};

use super::{builtin_catalog, CategoryScenario};

const SCHEMA_TEXT: &str = include_str!("../../../../docs/scenario.schema.json");

/// Fields that describe one category and are never inherited by new names.
const CATEGORY_SPECIFIC: [&str; 7] = [
    "name",
    "notes",
    "n_objects",
    "chi",
    "gamma_override",
    "odd_dimensions",
    "prod_reg_years",
];

/// The scenario document JSON Schema.
pub fn scenario_schema() -> &'static str {
    SCHEMA_TEXT
}

fn validator() -> &'static Validator {
    static VALIDATOR: OnceLock<Validator> = OnceLock::new();
    VALIDATOR.get_or_init(|| {
        let schema: Value = serde_json::from_str(SCHEMA_TEXT).expect("bundled schema is valid JSON");
        jsonschema::validator_for(&schema).expect("bundled schema compiles")
    })
}

/// Serializes scenarios as a complete scenario document.
pub fn serialize_scenarios(scenarios: &[CategoryScenario]) -> Result<String> {
    let doc = serde_json::json!({ "scenarios": scenarios });
    serde_json::to_string_pretty(&doc).map_err(|e| Error::Serialize(e.to_string()))
}

pub fn load_scenarios_file(path: &Path) -> Result<Vec<CategoryScenario>> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    load_scenarios(&text)
}

/// Parses, resolves and validates a scenario document.
pub fn load_scenarios(document: &str) -> Result<Vec<CategoryScenario>> {
    let doc: Value = serde_json::from_str(document).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let root = doc.as_object().ok_or_else(|| Error::Schema {
        pointer: String::new(),
        message: "document must be a JSON object".into(),
    })?;
    for key in root.keys() {
        if key != "scenarios" && key != "defaults" {
            return Err(Error::Schema {
                pointer: format!("/{key}"),
                message: format!("unknown key `{key}`; expected `scenarios` or `defaults`"),
            });
        }
    }
    let defaults = match root.get("defaults") {
        None => Map::new(),
        Some(Value::Object(map)) => {
            if map.contains_key("name") {
                return Err(Error::Schema {
                    pointer: "/defaults/name".into(),
                    message: "defaults cannot set a scenario name".into(),
                });
            }
            map.clone()
        }
        Some(_) => {
            return Err(Error::Schema {
                pointer: "/defaults".into(),
                message: "defaults must be an object".into(),
            })
        }
    };
    let entries = root
        .get("scenarios")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Schema {
            pointer: "/scenarios".into(),
            message: "document needs a `scenarios` array".into(),
        })?;

    let catalog = builtin_catalog();
    let mut seen = HashSet::new();
    let mut scenarios = Vec::with_capacity(entries.len());
    for (index, entry) in entries.iter().enumerate() {
        let name = entry
            .get("name")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Schema {
                pointer: format!("/scenarios/{index}/name"),
                message: "every scenario needs a string `name`".into(),
            })?;
        if !seen.insert(name.to_string()) {
            return Err(Error::Schema {
                pointer: format!("/scenarios/{index}/name"),
                message: format!("duplicate scenario name `{name}`"),
            });
        }
        let mut resolved = base_for(name, &catalog)?;
        merge(&mut resolved, &Value::Object(defaults.clone()));
        merge(&mut resolved, entry);
        let scenario: CategoryScenario = serde_json::from_value(resolved).map_err(|e| {
            Error::Schema {
                pointer: format!("/scenarios/{index}"),
                message: e.to_string(),
            }
            .in_scenario(name)
        })?;
        scenario.validate()?;
        scenarios.push(scenario);
    }

    // field-level checks above give the friendlier messages; the schema is the final gate
    if let Err(e) = validator().validate(&doc) {
        return Err(Error::Schema {
            pointer: e.instance_path().to_string(),
            message: e.to_string(),
        });
    }
    Ok(scenarios)
}

fn base_for(name: &str, catalog: &[CategoryScenario]) -> Result<Value> {
    let to_value = |s: &CategoryScenario| {
        serde_json::to_value(s).map_err(|e| Error::Serialize(e.to_string()))
    };
    if let Some(entry) = catalog.iter().find(|s| s.name == name) {
        return to_value(entry);
    }
    let mut shared = to_value(&catalog[0])?;
    if let Value::Object(map) = &mut shared {
        for key in CATEGORY_SPECIFIC {
            map.remove(key);
        }
        if let Some(Value::Object(crow)) = map.get_mut("crow") {
            crow.remove("severity");
        }
    }
    Ok(shared)
}

fn merge(base: &mut Value, overlay: &Value) {
    match (base, overlay) {
        (Value::Object(base), Value::Object(overlay)) => {
            for (key, value) in overlay {
                match base.get_mut(key) {
                    Some(slot) if slot.is_object() && value.is_object() => merge(slot, value),
                    _ => {
                        base.insert(key.clone(), value.clone());
                    }
                }
            }
        }
        (base, overlay) => *base = overlay.clone(),
    }
}
