//! Prints witness ratios and slopes per corpus entry, grouped by numeric verdict.

#[path = "../tests/common/mod.rs"]
mod common;

use junction::pipeline::{diagnose, DiagnoseConfig};
use junction::witness::{witness, WitnessConfig, FROZEN_THRESHOLDS};

fn main() {
    let sizes = [16, 32, 64, 128, 256];
    for entry in common::witness_corpus() {
        let d = diagnose(&entry.spec, &DiagnoseConfig::default()).expect("diagnosis");
        let Some(phi0) = d.lifted.as_ref() else { continue };
        let config = WitnessConfig {
            n_samples: 4096,
            scale: entry.spec.k0.norm(),
            thresholds: FROZEN_THRESHOLDS,
        };
        let t = std::time::Instant::now();
        let res = witness(phi0, &sizes, &config);
        eprint!("[{:.2}s] ", t.elapsed().as_secs_f64());
        match res {
            Ok(c) => println!(
                "{:<20} {:<22} ratio {:>9.4} slope {:>8.4} tau {:>8.4} {:?} sigma {:?}",
                entry.cell,
                d.verdict.status.as_str(),
                c.ratio,
                c.fit_exponent,
                d.plan.as_ref().map_or(f64::NAN, |_| d.verdict.jump.as_ref().unwrap().tau),
                c.classification,
                c.sigma_min.iter().map(|s| format!("{s:.3e}")).collect::<Vec<_>>()
            ),
            Err(e) => println!("{:<20} error {e}", entry.cell),
        }
    }
}
