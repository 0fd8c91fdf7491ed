//! Experiment harness (placeholder during bring-up).

/// Errors from the harness.
#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("placeholder")]
    Placeholder,
}
