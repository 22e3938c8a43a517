use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use junction::fredholm::{SamplingPlan, Status};
use junction::pipeline::{cross_validate, diagnose, DiagnoseConfig, PipelineError};
use junction::witness::{witness, WitnessConfig, WitnessError, FROZEN_THRESHOLDS};

use crate::config::{Emit, RunConfig};
use crate::input::{parse_spec, InputError, SpecFile};
use crate::report::{
    write_symbol_trace, write_witness_csv, CriticalMuSection, JumpSection, PlanSection, Report, ValidationSection,
    VerdictSection, WitnessSection,
};

pub const EXIT_NORMALLY_SOLVABLE: u8 = 0;
pub const EXIT_INPUT_ERROR: u8 = 1;
pub const EXIT_NUMERICAL_FAILURE: u8 = 2;
pub const EXIT_NOT_NORMALLY_SOLVABLE: u8 = 10;
pub const EXIT_DEGENERATE: u8 = 20;

pub const REPORT_JSON: &str = "report.json";
pub const REPORT_TEXT: &str = "report.txt";
pub const WITNESS_CSV: &str = "witness.csv";
pub const SYMBOL_TRACE_CSV: &str = "symbol_trace.csv";

#[derive(thiserror::Error, Debug)]
pub enum RunError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error("witness failed: {0}")]
    Witness(#[from] WitnessError),
    #[error("cannot write {path}: {message}")]
    Output { path: PathBuf, message: String },
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Input(_) | RunError::Output { .. } => EXIT_INPUT_ERROR,
            RunError::Pipeline(_) | RunError::Witness(_) => EXIT_NUMERICAL_FAILURE,
        }
    }
}

pub fn exit_code(status: Status) -> u8 {
    match status {
        Status::NormallySolvable => EXIT_NORMALLY_SOLVABLE,
        Status::NotNormallySolvable => EXIT_NOT_NORMALLY_SOLVABLE,
        Status::DegenerateSymbol => EXIT_DEGENERATE,
    }
}

#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub written: Vec<PathBuf>,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        exit_code(self.report.verdict.status)
    }
}

fn output_error(path: &Path) -> impl FnOnce(String) -> RunError + '_ {
    move |message| RunError::Output {
        path: path.to_path_buf(),
        message,
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), RunError> {
    fs::write(path, contents).map_err(|e| output_error(path)(e.to_string()))
}

fn create(path: &Path) -> Result<BufWriter<File>, RunError> {
    File::create(path).map(BufWriter::new).map_err(|e| output_error(path)(e.to_string()))
}

/// Smallest power of two ≥ 4096 leaving at least four samples per section row.
fn witness_samples(sizes: &[usize]) -> usize {
    (4 * sizes.iter().copied().max().unwrap_or(0)).next_power_of_two().max(4096)
}

pub fn run(config: &RunConfig) -> Result<Outcome, RunError> {
    let spec = parse_spec(&config.input_path)?;
    let diag_config = DiagnoseConfig {
        grid_points: config.grid_points,
        scale: None,
    };
    let d = diagnose(&spec, &diag_config)?;
    let mut warnings = d.warnings.clone();

    let validation = config.mode.validates().then(|| {
        let v = cross_validate(&spec, &diag_config);
        for disc in &v.discrepancies {
            warnings.push(format!(
                "oracle mismatch on {}: numeric {} vs predicted {}",
                disc.field, disc.numeric, disc.predicted
            ));
        }
        ValidationSection::new(&v)
    });

    let mut witness_section = None;
    if config.mode.witnesses() {
        match (&d.lifted, d.verdict.status) {
            (Some(phi0), Status::NormallySolvable | Status::NotNormallySolvable) => {
                let cfg = WitnessConfig {
                    n_samples: witness_samples(&config.witness_sizes),
                    scale: spec.k0.norm(),
                    thresholds: FROZEN_THRESHOLDS,
                };
                let curve = witness(phi0, &config.witness_sizes, &cfg)?;
                witness_section = Some(WitnessSection::new(&curve, cfg.n_samples, cfg.scale));
            }
            _ => warnings.push("witness skipped: symbol is degenerate".into()),
        }
    }

    let report = Report {
        spec_echo: SpecFile::from_spec(&spec),
        mode: config.mode,
        verdict: VerdictSection::new(&d.verdict, d.ellipticity.as_ref(), config.grid_points),
        critical_mu: CriticalMuSection::new(&d.verdict),
        jump: d.verdict.jump.as_ref().map(JumpSection::new),
        plan: d.plan.as_ref().map(PlanSection::new),
        validation,
        witness: witness_section,
        warnings,
    };

    let dir = &config.output_dir;
    fs::create_dir_all(dir).map_err(|e| output_error(dir)(e.to_string()))?;
    let mut written = Vec::new();
    if config.emit.contains(&Emit::Json) {
        let path = dir.join(REPORT_JSON);
        let json = report.to_json().map_err(|e| output_error(&path)(e.to_string()))?;
        write_file(&path, &json)?;
        written.push(path);
    }
    if config.emit.contains(&Emit::Text) {
        let path = dir.join(REPORT_TEXT);
        write_file(&path, &report.to_text())?;
        written.push(path);
    }
    if config.emit.contains(&Emit::Csv) {
        if let Some(w) = &report.witness {
            let path = dir.join(WITNESS_CSV);
            write_witness_csv(w, create(&path)?).map_err(|e| output_error(&path)(e.to_string()))?;
            written.push(path);
        }
        if let Some(phi0) = &d.lifted {
            let path = dir.join(SYMBOL_TRACE_CSV);
            let plan = SamplingPlan::new(config.grid_points, spec.k0.norm());
            write_symbol_trace(phi0, &plan, create(&path)?).map_err(|e| output_error(&path)(e.to_string()))?;
            written.push(path);
        }
    }
    Ok(Outcome { report, written })
}
