//! Output helpers shared by the commands.

use std::io::{ErrorKind, Write};

use serde::Serialize;

use crate::{Failure, Outcome};

/// Formats `v` with six significant digits, switching to lowercase
/// scientific notation when `|v| >= 1e6` or `|v| < 1e-4`.
pub fn number(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let magnitude = v.abs();
    if !(1e-4..1e6).contains(&magnitude) {
        return format!("{v:.5e}");
    }
    let digits = (5 - magnitude.log10().floor() as i32).max(0) as usize;
    let text = format!("{v:.digits$}");
    if text.contains('.') {
        text.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        text
    }
}

/// Writes `text` to stdout; a closed pipe (e.g. `| head`) is not an error.
pub fn emit(text: &str) -> Outcome {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(Failure::Run(e.into())),
        _ => Ok(()),
    }
}

pub fn print_json<T: Serialize>(value: &T) -> Outcome {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::Run(e.into()))?;
    text.push('\n');
    emit(&text)
}
