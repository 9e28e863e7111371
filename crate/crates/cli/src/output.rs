use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};

/// Writes to `out` if given, else to standard output.
pub fn emit(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            std::fs::write(p, content).with_context(|| format!("writing {}", p.display()))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

/// Logs the resolved configuration of a run to standard error.
pub fn log_config(config: &serde_json::Value) {
    eprintln!("config: {config}");
}

/// Shortest representation that reads back to the same value; `inf` for
/// infinity.
pub fn real(x: f64) -> String {
    wsrank::barcode::fmt_real(x)
}

pub fn matrix_csv(ids: &[String], d: &[Vec<f64>]) -> String {
    let mut s = String::from("id");
    for id in ids {
        s.push(',');
        s.push_str(id);
    }
    s.push('\n');
    for (id, row) in ids.iter().zip(d) {
        s.push_str(id);
        for &v in row {
            s.push(',');
            s.push_str(&real(v));
        }
        s.push('\n');
    }
    s
}
