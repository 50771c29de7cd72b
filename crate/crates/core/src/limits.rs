/// Ceilings for the potentially exponential computations. Defaults may be
/// overridden through the environment (`SPLICE_MAX_STATES`,
/// `SPLICE_MAX_WORDS`).
#[derive(Debug, Clone, Copy)]
pub struct ResourceLimits {
    /// Cap on states materialized by a subset-style construction.
    pub max_states: usize,
    /// Cap on the word set held by the bounded closure oracle.
    pub max_words: usize,
}

impl Default for ResourceLimits {
    fn default() -> Self {
        ResourceLimits {
            max_states: 1 << 20,
            max_words: 12_000_000,
        }
    }
}

impl ResourceLimits {
    /// Defaults overridden by `SPLICE_MAX_STATES` / `SPLICE_MAX_WORDS`.
    pub fn from_env() -> Self {
        let mut limits = ResourceLimits::default();
        if let Some(v) = read_env("SPLICE_MAX_STATES") {
            limits.max_states = v;
        }
        if let Some(v) = read_env("SPLICE_MAX_WORDS") {
            limits.max_words = v;
        }
        limits
    }
}

fn read_env(name: &str) -> Option<usize> {
    std::env::var(name).ok()?.trim().parse().ok()
}
