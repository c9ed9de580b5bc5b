//! Memory ceiling shared by every table builder.

use crate::error::{Error, Result};

pub const DEFAULT_MEM_GB: f64 = 8.0;
pub const MEM_ENV_VAR: &str = "MERTENS_LAB_MEM_GB";

/// Ceiling in bytes: `MERTENS_LAB_MEM_GB` when set and parseable, 8 GB otherwise.
pub fn memory_ceiling() -> u64 {
    let gb = std::env::var(MEM_ENV_VAR)
        .ok()
        .and_then(|s| s.trim().parse::<f64>().ok())
        .filter(|g| g.is_finite() && *g > 0.0)
        .unwrap_or(DEFAULT_MEM_GB);
    (gb * (1u64 << 30) as f64) as u64
}

pub fn check_capacity(what: &str, entries: u64, bytes_per_entry: u64) -> Result<()> {
    let needed = entries.saturating_mul(bytes_per_entry);
    let ceiling = memory_ceiling();
    if needed > ceiling {
        return Err(Error::Capacity { what: what.to_string(), needed_bytes: needed, ceiling_bytes: ceiling });
    }
    Ok(())
}
