//! Type 3 concept scheduling.

use crate::wrappers::config::{DriftConfig, DriftMode};

pub const CONCEPT_DEFAULT: u8 = 1;
pub const CONCEPT_DRIFTED: u8 = 2;

/// Which concept governs the step with 0-based index `step_index`.
pub fn drift_active_concept(step_index: u64, drift: &DriftConfig) -> u8 {
    let drifted = match drift.mode {
        DriftMode::Sudden => step_index >= drift.switch_step,
        DriftMode::Cyclic => (step_index / drift.period) % 2 == 1,
    };
    if drifted {
        CONCEPT_DRIFTED
    } else {
        CONCEPT_DEFAULT
    }
}
