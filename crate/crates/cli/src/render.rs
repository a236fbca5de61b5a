use serde_json::{json, Value};

use crate::commands::CommandResult;
use crate::{Format, JobConfig, SCHEMA_VERSION};

pub(crate) fn render(config: &JobConfig, results: &[(String, CommandResult)]) -> String {
    match config.format {
        Format::Text => {
            let mut out = String::new();
            let headers = results.len() > 1;
            for (input, r) in results {
                if headers {
                    out.push_str(&format!("== {input} ==\n"));
                }
                out.push_str(&r.text);
            }
            out
        }
        Format::Json => {
            let results: Vec<Value> = results
                .iter()
                .map(|(input, r)| {
                    json!({
                        "input": input,
                        "witness": r.witness,
                        "failure": r.failure,
                        "result": r.json,
                    })
                })
                .collect();
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "command": config.command.name(),
                "results": results,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("values serialize");
            s.push('\n');
            s
        }
    }
}
