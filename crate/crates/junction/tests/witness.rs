mod common;

use junction::fredholm::Status;
use junction::pipeline::{diagnose, DiagnoseConfig};
use junction::spec::ProblemSpec;
use junction::witness::{witness, WitnessConfig, WitnessCurve, WitnessError, FROZEN_THRESHOLDS};

use common::*;

const SIZES: [usize; 5] = [16, 32, 64, 128, 256];

fn curve(spec: &ProblemSpec) -> (Status, WitnessCurve) {
    let d = diagnose(spec, &DiagnoseConfig::default()).unwrap();
    let cfg = WitnessConfig {
        n_samples: 4096,
        scale: spec.k0.norm(),
        thresholds: FROZEN_THRESHOLDS,
    };
    (d.verdict.status, witness(d.lifted.as_ref().unwrap(), &SIZES, &cfg).unwrap())
}

#[test]
fn antisymmetric_jump_sigma_decreases() {
    let mut r = rng(41);
    for _ in 0..3 {
        let (status, c) = curve(&higher_order(&mut r, 0));
        assert_eq!(status, Status::NotNormallySolvable);
        assert!(c.sigma_min.windows(2).all(|w| w[1] < w[0]), "{:?}", c.sigma_min);
    }
}

/// Not normally solvable, yet the smallest singular value grows with the section size.
#[test]
fn sigma_min_is_not_monotone_in_section_size() {
    let corpus = witness_corpus();
    let found = corpus
        .iter()
        .filter(|e| e.cell == "pairwise_odd_sum")
        .map(|e| curve(&e.spec))
        .any(|(status, c)| status == Status::NotNormallySolvable && c.ratio > 1.0);
    assert!(found);
}

#[test]
fn sizes_are_validated() {
    let mut r = rng(42);
    let spec = higher_order(&mut r, 0);
    let d = diagnose(&spec, &DiagnoseConfig::default()).unwrap();
    let cfg = WitnessConfig {
        n_samples: 1024,
        scale: 1.0,
        thresholds: FROZEN_THRESHOLDS,
    };
    let phi0 = d.lifted.as_ref().unwrap();
    assert!(matches!(witness(phi0, &[32, 16], &cfg), Err(WitnessError::InvalidSizes(_))));
    assert!(matches!(witness(phi0, &[4, 16], &cfg), Err(WitnessError::InvalidSizes(_))));
    assert!(matches!(witness(phi0, &[16, 512], &cfg), Err(WitnessError::SizeMismatch { .. })));
    let cfg = WitnessConfig { n_samples: 1000, ..cfg };
    assert!(matches!(witness(phi0, &[16, 32], &cfg), Err(WitnessError::InvalidSampleCount(1000))));
}

#[test]
fn witness_is_deterministic() {
    let mut r = rng(43);
    let spec = oblique(&mut r, 1, 0);
    assert_eq!(curve(&spec).1, curve(&spec).1);
}
