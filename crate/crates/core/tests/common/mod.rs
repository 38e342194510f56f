//! Seeded runners shared by the property suites. Set `EXOTIC_SEED` to vary the stream.

#![allow(dead_code)]

use std::path::PathBuf;

use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

pub fn seed() -> u64 {
    std::env::var("EXOTIC_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_SEED)
}

/// A deterministic runner; `salt` keeps suites from sharing one stream.
pub fn runner(cases: u32, salt: u64) -> TestRunner {
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed().to_le_bytes());
    bytes[8..16].copy_from_slice(&salt.to_le_bytes());
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &bytes))
}

pub fn scenarios_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

use exotic_core::embedding::Genus;
use exotic_core::lattice::gram;
use exotic_core::swsearch::AdjunctionConstraint;
use exotic_core::{BigInt, Class};
use serde_json::Value;

pub struct Constraints {
    pub basis: Vec<Class>,
    pub basis_constraints: Vec<AdjunctionConstraint<BigInt>>,
    pub derived: Vec<AdjunctionConstraint<BigInt>>,
}

fn genus(v: &Value) -> Genus {
    serde_json::from_value(v.clone()).unwrap()
}

/// Builds the constraint set of the x1 scenario over `basis`, which must list
/// classes in the same order as the file.
pub fn x1_constraints_over(basis: Vec<Class>) -> Constraints {
    let text = std::fs::read_to_string(scenarios_dir().join("x1_constraints.json")).unwrap();
    let c: Value = serde_json::from_str(&text).unwrap();
    let g = gram(&basis).unwrap();
    let basis_constraints = c["constraints"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| AdjunctionConstraint::basis(e["index"].as_u64().unwrap() as usize, genus(&e["genus"]), &g).unwrap())
        .collect();
    let derived = c["derived"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            let mut combo = vec![BigInt::from(0); basis.len()];
            for i in e["combo"].as_array().unwrap() {
                combo[i.as_u64().unwrap() as usize] += 1;
            }
            AdjunctionConstraint::derived(combo, genus(&e["genus"]), &g).unwrap()
        })
        .collect();
    Constraints { basis, basis_constraints, derived }
}

pub fn x1_basis() -> Vec<Class> {
    let text = std::fs::read_to_string(scenarios_dir().join("x1_constraints.json")).unwrap();
    let c: Value = serde_json::from_str(&text).unwrap();
    c["basis"].as_array().unwrap().iter().map(|s| Class::parse(17, s.as_str().unwrap()).unwrap()).collect()
}
