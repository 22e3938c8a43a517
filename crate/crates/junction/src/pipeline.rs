//! End-to-end diagnosis and cross-validation against the closed-form oracle.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::asymptotic::{extract_asymptotics, AsymptoticError};
use crate::closed_form::{cross_check_higher_order, TermResidual};
use crate::fredholm::{
    analyze_jump, check_ellipticity, fredholm_criterion, limits_at_infinity, AnalysisError,
    Ellipticity, FredholmVerdict, SamplingPlan, Status, SymbolLimits,
};
use crate::planner::{plan_matrix, NormalizationPlan, PlanError};
use crate::spec::{Family, ProblemSpec};
use crate::symbol::{build_phi_minus, build_phi_plus, compose_phi, lift, MatrixSymbol, SymbolError};
use crate::theorems::{theorem_oracle, TheoremId, TheoremPrediction};

/// Relative tolerance for eigenvalue multiset comparison.
pub const EIGEN_MATCH_TOLERANCE: f64 = 1e-8;
/// Absolute tolerance for critical μ set comparison.
pub const MU_MATCH_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnoseConfig {
    pub grid_points: usize,
    /// Compactification scale; |k₀| when `None`.
    pub scale: Option<f64>,
}

impl Default for DiagnoseConfig {
    fn default() -> Self {
        Self {
            grid_points: 4096,
            scale: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Build,
    Compose,
    Lift,
    Asymptotics,
    Ellipticity,
    Criterion,
    Jump,
    Plan,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Build => "build",
            Stage::Compose => "compose",
            Stage::Lift => "lift",
            Stage::Asymptotics => "asymptotics",
            Stage::Ellipticity => "ellipticity",
            Stage::Criterion => "criterion",
            Stage::Jump => "jump",
            Stage::Plan => "plan",
        };
        f.write_str(s)
    }
}

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum StageFailure {
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Asymptotic(#[from] AsymptoticError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Plan(#[from] PlanError),
}

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
#[error("{stage} stage failed: {source}")]
pub struct PipelineError {
    pub stage: Stage,
    pub source: StageFailure,
}

fn at<E: Into<StageFailure>>(stage: Stage) -> impl FnOnce(E) -> PipelineError {
    move |e| PipelineError {
        stage,
        source: e.into(),
    }
}

#[derive(Debug, Clone)]
pub struct Diagnosis {
    pub verdict: FredholmVerdict,
    pub plan: Option<NormalizationPlan>,
    pub ellipticity: Option<Ellipticity>,
    pub limits: Option<SymbolLimits>,
    /// The lifted symbol, absent when the build stages found it degenerate.
    pub lifted: Option<MatrixSymbol>,
    pub warnings: Vec<String>,
}

impl Diagnosis {
    fn degenerate(lifted: Option<MatrixSymbol>, warning: String) -> Self {
        Self {
            verdict: FredholmVerdict::degenerate(),
            plan: None,
            ellipticity: None,
            limits: None,
            lifted,
            warnings: vec![warning],
        }
    }
}

/// build → compose → lift → asymptotics → ellipticity → criterion → jump → plan.
pub fn diagnose(spec: &ProblemSpec, config: &DiagnoseConfig) -> Result<Diagnosis, PipelineError> {
    let minus = match build_phi_minus(spec) {
        Err(SymbolError::DegenerateSymbol) => {
            return Ok(Diagnosis::degenerate(None, "left symbol is identically singular".into()))
        }
        r => r.map_err(at(Stage::Build))?,
    };
    let plus = build_phi_plus(spec).map_err(at(Stage::Build))?;
    let phi = compose_phi(&plus, &minus);
    let lifted = lift(&phi, spec.k0).map_err(at(Stage::Lift))?;
    let form = match extract_asymptotics(spec) {
        Err(AsymptoticError::LeadingOrderDegenerate(what)) => {
            return Ok(Diagnosis::degenerate(
                Some(lifted),
                format!("leading-order asymptotics degenerate: {what}"),
            ))
        }
        r => r.map_err(at(Stage::Asymptotics))?,
    };
    let lifted = lifted.with_asymptotics(form);

    let scale = config.scale.unwrap_or_else(|| spec.k0.norm());
    let ellipticity = check_ellipticity(&lifted, &SamplingPlan::new(config.grid_points, scale));
    let limits = limits_at_infinity(lifted.asymptotic.as_ref()).map_err(at(Stage::Ellipticity))?;
    let mut diagnosis = Diagnosis {
        verdict: FredholmVerdict::degenerate(),
        plan: None,
        ellipticity: Some(ellipticity),
        limits: Some(limits),
        lifted: Some(lifted),
        warnings: Vec::new(),
    };
    if !ellipticity.is_ok() {
        return Ok(diagnosis);
    }

    let mut verdict = fredholm_criterion(&limits);
    if verdict.status == Status::DegenerateSymbol {
        diagnosis.verdict = verdict;
        return Ok(diagnosis);
    }
    let jump = analyze_jump(&limits).map_err(at(Stage::Jump))?;
    let needs_plan = !verdict.critical_mu.is_empty();
    if !jump.diagonalizable {
        if needs_plan {
            return Err(PipelineError {
                stage: Stage::Jump,
                source: AnalysisError::NotDiagonalizable(jump.eigenvalues[0], jump.eigenvalues[1]).into(),
            });
        }
        diagnosis
            .warnings
            .push("jump matrix is not diagonalizable; no plan required".into());
    }
    if !needs_plan && jump.critical_count() > 0 {
        diagnosis.warnings.push(format!(
            "criterion found no critical mu but jump eigenvalue {} lies on the negative real axis",
            jump.eigenvalues[0]
        ));
    }
    if needs_plan {
        let plan = plan_matrix(&jump, spec.image_orders()).map_err(at(Stage::Plan))?;
        if plan.beyond_closed_form {
            diagnosis.warnings.push(
                "beyond closed-form theory: both jump eigenvalues are critical and distinct".into(),
            );
        }
        diagnosis.plan = Some(plan);
    }
    verdict.jump = Some(jump);
    diagnosis.verdict = verdict;
    Ok(diagnosis)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub field: String,
    pub numeric: String,
    pub predicted: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub theorem_id: Option<TheoremId>,
    pub prediction: Option<TheoremPrediction>,
    pub numeric_status: Option<Status>,
    pub numeric_mu: Vec<f64>,
    pub numeric_eigenvalues: Option<[Complex64; 2]>,
    pub status_agrees: Option<bool>,
    pub mu_agrees: Option<bool>,
    pub eigenvalues_agree: Option<bool>,
    pub discrepancies: Vec<Discrepancy>,
    /// Per-term residuals of the printed higher-order expansion.
    pub expansion_residuals: Vec<TermResidual>,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn agrees(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm()).max(f64::MIN_POSITIVE)
}

/// Unordered comparison of two eigenvalue pairs at a relative tolerance.
pub fn eigen_multiset_eq(a: [Complex64; 2], b: [Complex64; 2], tol: f64) -> bool {
    (close(a[0], b[0], tol) && close(a[1], b[1], tol)) || (close(a[0], b[1], tol) && close(a[1], b[0], tol))
}

fn mu_sets_eq(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= MU_MATCH_TOLERANCE)
}

fn fmt_pair(p: &[Complex64; 2]) -> String {
    format!("({}, {})", p[0], p[1])
}

/// Runs the numeric pipeline and the theorem oracle and compares their outputs.
pub fn cross_validate(spec: &ProblemSpec, config: &DiagnoseConfig) -> ValidationReport {
    let mut report = ValidationReport {
        theorem_id: None,
        prediction: None,
        numeric_status: None,
        numeric_mu: Vec::new(),
        numeric_eigenvalues: None,
        status_agrees: None,
        mu_agrees: None,
        eigenvalues_agree: None,
        discrepancies: Vec::new(),
        expansion_residuals: Vec::new(),
        notes: Vec::new(),
    };
    if spec.family == Family::GeneralHigherOrder {
        let xis: Vec<f64> = [-7.0, -1.3, -0.2, 0.4, 2.5, 11.0].to_vec();
        match cross_check_higher_order(spec, &xis) {
            Ok(check) => report.expansion_residuals = check.residuals,
            Err(e) => report.notes.push(format!("expansion check skipped: {e}")),
        }
    }
    let diagnosis = match diagnose(spec, config) {
        Ok(d) => d,
        Err(e) => {
            report.notes.push(format!("numeric path failed: {e}"));
            return report;
        }
    };
    let prediction = match theorem_oracle(spec) {
        Ok(p) => p,
        Err(e) => {
            report.notes.push(e.to_string());
            report.numeric_status = Some(diagnosis.verdict.status);
            return report;
        }
    };
    let numeric = &diagnosis.verdict;
    report.theorem_id = Some(prediction.theorem_id);
    report.numeric_status = Some(numeric.status);
    report.numeric_mu = numeric.critical_mu.clone();
    report.numeric_eigenvalues = numeric.jump.as_ref().map(|j| j.eigenvalues);

    let status_ok = numeric.status == prediction.predicted_status;
    report.status_agrees = Some(status_ok);
    if !status_ok {
        report.discrepancies.push(Discrepancy {
            field: "status".into(),
            numeric: numeric.status.as_str().into(),
            predicted: prediction.predicted_status.as_str().into(),
        });
    }
    if numeric.status != Status::DegenerateSymbol && prediction.normal_type_condition_holds {
        let mu_ok = mu_sets_eq(&numeric.critical_mu, &prediction.predicted_mu);
        report.mu_agrees = Some(mu_ok);
        if !mu_ok {
            report.discrepancies.push(Discrepancy {
                field: "critical_mu".into(),
                numeric: format!("{:?}", numeric.critical_mu),
                predicted: format!("{:?}", prediction.predicted_mu),
            });
        }
        if let (Some(n), Some(p)) = (report.numeric_eigenvalues, prediction.predicted_eigenvalues) {
            let ok = eigen_multiset_eq(n, p, EIGEN_MATCH_TOLERANCE);
            report.eigenvalues_agree = Some(ok);
            if !ok {
                report.discrepancies.push(Discrepancy {
                    field: "eigenvalues".into(),
                    numeric: fmt_pair(&n),
                    predicted: fmt_pair(&p),
                });
            }
        }
    }
    report.prediction = Some(prediction);
    report
}
