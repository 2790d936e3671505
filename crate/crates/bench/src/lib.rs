//! Inputs shared by the criterion benchmarks in `benches/`.

use std::path::Path;

use wao_core::{complement, parse_dimacs, Graph};

/// The complement of a shipped benchmark instance.
pub fn complemented_instance(name: &str) -> Graph {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../instances")
        .join(format!("{name}.clq"));
    let text = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("cannot read {}: {e}", path.display()));
    complement(&parse_dimacs(&text).expect("valid instance").graph)
}
