//! Shared inputs for the benchmarks.

use divcyl_core::code::GeneratorMatrix;
use divcyl_core::io::parse_matrix;

/// Parses a matrix from the workspace fixtures directory.
pub fn fixture(name: &str) -> GeneratorMatrix {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    parse_matrix(&text, None).unwrap()
}
