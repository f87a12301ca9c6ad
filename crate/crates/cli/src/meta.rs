//! Run metadata: every command writes its fully resolved configuration and
//! the code version next to its outputs.

use std::path::Path;

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Write `config.json` into the output directory, creating it if needed.
pub fn write_run_metadata(out: &Path, command: &str, config: serde_json::Value) -> std::io::Result<()> {
    std::fs::create_dir_all(out)?;
    let doc = serde_json::json!({
        "command": command,
        "code_version": CODE_VERSION,
        "config": config,
    });
    std::fs::write(out.join("config.json"), serde_json::to_string_pretty(&doc).unwrap())
}

/// Machine-readable failure line on stderr.
pub fn emit_error(command: &str, kind: &str, message: &str) {
    let doc = serde_json::json!({ "command": command, "kind": kind, "message": message });
    eprintln!("error: {doc}");
}
