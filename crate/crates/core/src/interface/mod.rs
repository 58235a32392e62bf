//! Manifest parsing, the command driver and reports.

pub mod manifest;
pub mod parse;
pub mod report;
pub mod run;

pub use manifest::{parse_manifest, parse_manifest_with, Manifest, ManifestOptions, NamedPoint};
pub use parse::{parse_poly, parse_rational, ParseContext};
pub use report::{Provenance, Report};
pub use run::{run, Command, Outcome, RunOptions};
