//! CSV and JSON rendering of report rows.

use serde::Serialize;

use crate::config::{CliError, OutputFormat};

/// Renders `rows` with a header (CSV) or as a JSON array, newline-terminated.
pub fn render<R: Serialize>(rows: &[R], format: OutputFormat) -> Result<String, CliError> {
    match format {
        OutputFormat::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            for row in rows {
                writer
                    .serialize(row)
                    .map_err(|e| CliError::Output(e.to_string()))?;
            }
            let bytes = writer
                .into_inner()
                .map_err(|e| CliError::Output(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
        }
        OutputFormat::Json => {
            let mut text =
                serde_json::to_string_pretty(rows).map_err(|e| CliError::Output(e.to_string()))?;
            text.push('\n');
            Ok(text)
        }
    }
}
