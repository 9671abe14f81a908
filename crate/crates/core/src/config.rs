//! Global size limits.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Default limit on the number of words any exhaustive scan may visit.
pub const DEFAULT_ENUM_CAP: u64 = 1 << 24;

/// Environment variable overriding [`DEFAULT_ENUM_CAP`].
pub const ENUM_CAP_ENV: &str = "QTHRESHOLD_ENUM_CAP";

/// Limit on the number of cached codewords (`q^k`).
pub const CODEWORD_CAP: u64 = 1 << 20;

/// The enumeration cap governing every exhaustive mode. Read once from
/// `QTHRESHOLD_ENUM_CAP`; unparsable values fall back to the default.
pub fn enumeration_cap() -> u64 {
    static CAP: OnceLock<u64> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var(ENUM_CAP_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_ENUM_CAP)
    })
}

/// `base^exp`, or `None` on overflow.
pub(crate) fn checked_pow(base: u64, exp: usize) -> Option<u64> {
    let exp = u32::try_from(exp).ok()?;
    base.checked_pow(exp)
}

/// Errors unless `base^exp` words fit under the enumeration cap.
pub(crate) fn ensure_enumerable(what: &str, base: u64, exp: usize) -> Result<u64> {
    let cap = enumeration_cap();
    match checked_pow(base, exp) {
        Some(count) if count <= cap => Ok(count),
        count => Err(Error::Resource {
            what: what.to_string(),
            needed: count
                .map(u128::from)
                .unwrap_or_else(|| (base as u128).saturating_pow(exp as u32)),
            cap: cap as u128,
        }),
    }
}
