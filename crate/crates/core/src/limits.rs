//! Process-wide cap on the size of exhaustive enumeration boxes.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::{Error, Result};

pub const DEFAULT_MAX_ENUM: u64 = 50_000_000;

static MAX_ENUM: AtomicU64 = AtomicU64::new(DEFAULT_MAX_ENUM);

pub fn max_enum() -> u64 {
    MAX_ENUM.load(Ordering::Relaxed)
}

pub fn set_max_enum(cap: u64) {
    MAX_ENUM.store(cap, Ordering::Relaxed);
}

/// Rejects a box `[0, bounds[0]] x ... x [0, bounds[n-1]]` whose point count
/// exceeds the cap.
pub(crate) fn check_box(bounds: &[u32]) -> Result<()> {
    let cap = max_enum();
    let mut points: u128 = 1;
    for &b in bounds {
        points = points.saturating_mul(b as u128 + 1);
    }
    if points > cap as u128 {
        return Err(Error::EnumerationLimit {
            requested: points,
            cap,
        });
    }
    Ok(())
}
