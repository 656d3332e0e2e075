//! Artifact formats: tablespec text, JSON reports, and SVG scenes.

pub mod report;
pub mod svg;
pub mod tablespec;
