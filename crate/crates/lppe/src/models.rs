//! Models shipped with the crate.

use crate::{parse, LppeError, Spec};

pub const EXAMPLE4: &str = include_str!("../models/example4.lppe");
pub const LEADER: &str = include_str!("../models/leader.lppe");
/// The leader protocol with two-sided dice, small enough for full bisimulation checks.
pub const LEADER_2SIDED: &str = include_str!("../models/leader-2sided.lppe");

pub const BUNDLED_NAMES: &[&str] = &["example4", "leader", "leader-2sided"];

/// Source text of a bundled model. Accepts the name with or without `.lppe`, any case,
/// and `_` for `-`.
pub fn bundled(name: &str) -> Option<&'static str> {
    let key = name.trim_end_matches(".lppe").to_ascii_lowercase().replace('_', "-");
    match key.as_str() {
        "example4" => Some(EXAMPLE4),
        "leader" => Some(LEADER),
        "leader-2sided" => Some(LEADER_2SIDED),
        _ => None,
    }
}

pub fn load_bundled(name: &str) -> Option<Result<Spec, LppeError>> {
    bundled(name).map(parse)
}
