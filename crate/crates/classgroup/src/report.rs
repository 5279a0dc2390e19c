//! CLI output schema (placeholder).
pub fn placeholder() {}
