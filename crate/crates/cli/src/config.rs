//! JSON config files with command-line overrides.
//!
//! Every subcommand's flags double as config keys (with underscores). Flags
//! given on the command line win over the file.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use crate::error::{usage, CliError, CliResult};

pub fn merge<T: Serialize + DeserializeOwned>(flags: T, config: Option<&Path>) -> CliResult<T> {
    let Some(path) = config else {
        return Ok(flags);
    };
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut base: Value =
        serde_json::from_str(&text).map_err(|e| usage(format!("config {}: {e}", path.display())))?;
    let Value::Object(file) = &mut base else {
        return Err(usage(format!("config {} must hold a JSON object", path.display())));
    };
    let Value::Object(given) = serde_json::to_value(&flags).map_err(|e| usage(e.to_string()))? else {
        return Err(usage("flags did not serialize to an object"));
    };
    for (key, value) in given {
        if !value.is_null() {
            file.insert(key, value);
        }
    }
    serde_json::from_value(base).map_err(|e| usage(format!("config {}: {e}", path.display())))
}
