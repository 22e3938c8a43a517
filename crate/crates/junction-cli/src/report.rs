//! Machine-readable report and its text, JSON and CSV renderings.

use std::fmt::Write as _;
use std::io;

use junction::fredholm::{
    Ellipticity, FredholmVerdict, JumpAnalysis, SamplingPlan, Status, ARG_TOLERANCE, ELLIPTICITY_THRESHOLD,
    LIMIT_SINGULARITY, MU_TOLERANCE,
};
use junction::linalg::Mat2;
use junction::pipeline::{ValidationReport, EIGEN_MATCH_TOLERANCE, MU_MATCH_TOLERANCE};
use junction::planner::{ComponentTag, NormalizationPlan, TAU_ZERO};
use junction::symbol::MatrixSymbol;
use junction::theorems::TheoremId;
use junction::witness::{Classification, Thresholds, WitnessCurve};
use serde::{Deserialize, Serialize};

use crate::config::Mode;
use crate::input::{cx, Cx, SpecFile};

pub type CxMat = [[Cx; 2]; 2];

pub fn cx_mat(m: &Mat2) -> CxMat {
    [[cx(m[(0, 0)]), cx(m[(0, 1)])], [cx(m[(1, 0)]), cx(m[(1, 1)])]]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictSection {
    pub status: Status,
    /// Smallest |det Φ₀| / row-norm product seen on the grid; absent when the build stages failed.
    pub min_det_ratio: Option<f64>,
    pub degenerate_at: Option<String>,
    pub grid_points: usize,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalMuSection {
    pub values: Vec<f64>,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpSection {
    pub limit_minus: CxMat,
    pub limit_plus: CxMat,
    pub j: CxMat,
    pub eigenvalues: [Cx; 2],
    pub t: Option<CxMat>,
    pub w: [Cx; 2],
    pub tau: f64,
    pub critical: [bool; 2],
    pub reconstruction_residual: f64,
    pub arg_tolerance: f64,
    pub singularity_tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanSection {
    pub space: String,
    pub s_orders: Vec<f64>,
    pub t: Option<CxMat>,
    pub components: Vec<ComponentTag>,
    pub beyond_closed_form: bool,
    pub tau_tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison<T> {
    pub numeric: Option<T>,
    pub predicted: Option<T>,
    pub agrees: Option<bool>,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualRow {
    pub entry: String,
    pub term: String,
    pub printed: Cx,
    pub rederived: Cx,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationSection {
    pub theorem_id: Option<TheoremId>,
    pub normal_type_condition_holds: Option<bool>,
    pub theta_roots: Option<Vec<f64>>,
    pub status: Comparison<Status>,
    pub critical_mu: Comparison<Vec<f64>>,
    pub eigenvalues: Comparison<[Cx; 2]>,
    pub expansion_residuals: Vec<ResidualRow>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessSection {
    pub sizes: Vec<usize>,
    pub sigma_min: Vec<f64>,
    pub ratio: f64,
    pub fit_exponent: f64,
    pub classification: Classification,
    pub thresholds: Thresholds,
    pub n_samples: usize,
    pub scale: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub spec_echo: SpecFile,
    pub mode: Mode,
    pub verdict: VerdictSection,
    pub critical_mu: CriticalMuSection,
    pub jump: Option<JumpSection>,
    pub plan: Option<PlanSection>,
    pub validation: Option<ValidationSection>,
    pub witness: Option<WitnessSection>,
    pub warnings: Vec<String>,
}

impl VerdictSection {
    pub fn new(verdict: &FredholmVerdict, ellipticity: Option<&Ellipticity>, grid_points: usize) -> Self {
        let (min_det_ratio, degenerate_at) = match ellipticity {
            Some(Ellipticity::Ok { min_ratio }) => (Some(*min_ratio), None),
            Some(Ellipticity::Degenerate { at, ratio }) => (Some(*ratio), Some(format!("{at:?}"))),
            None => (None, None),
        };
        Self {
            status: verdict.status,
            min_det_ratio,
            degenerate_at,
            grid_points,
            tolerance: ELLIPTICITY_THRESHOLD,
        }
    }
}

impl CriticalMuSection {
    pub fn new(verdict: &FredholmVerdict) -> Self {
        Self {
            values: verdict.critical_mu.clone(),
            tolerance: MU_TOLERANCE,
        }
    }
}

impl JumpSection {
    pub fn new(jump: &JumpAnalysis) -> Self {
        Self {
            limit_minus: cx_mat(&jump.limits.at_minus_inf),
            limit_plus: cx_mat(&jump.limits.at_plus_inf),
            j: cx_mat(&jump.j),
            eigenvalues: jump.eigenvalues.map(cx),
            t: jump.t.as_ref().map(cx_mat),
            w: jump.exponents.map(cx),
            tau: jump.tau + 0.0,
            critical: jump.critical,
            reconstruction_residual: jump.reconstruction_residual,
            arg_tolerance: ARG_TOLERANCE,
            singularity_tolerance: LIMIT_SINGULARITY,
        }
    }
}

impl PlanSection {
    pub fn new(plan: &NormalizationPlan) -> Self {
        Self {
            space: plan.space_description.clone(),
            s_orders: plan.s_orders.clone(),
            t: plan.t.as_ref().map(cx_mat),
            components: plan.components.clone(),
            beyond_closed_form: plan.beyond_closed_form,
            tau_tolerance: TAU_ZERO,
        }
    }
}

impl ValidationSection {
    pub fn new(v: &ValidationReport) -> Self {
        let p = v.prediction.as_ref();
        Self {
            theorem_id: v.theorem_id,
            normal_type_condition_holds: p.map(|p| p.normal_type_condition_holds),
            theta_roots: p.and_then(|p| p.theta_roots.clone()),
            status: Comparison {
                numeric: v.numeric_status,
                predicted: p.map(|p| p.predicted_status),
                agrees: v.status_agrees,
                tolerance: 0.0,
            },
            critical_mu: Comparison {
                numeric: v.numeric_status.map(|_| v.numeric_mu.clone()),
                predicted: p.map(|p| p.predicted_mu.clone()),
                agrees: v.mu_agrees,
                tolerance: MU_MATCH_TOLERANCE,
            },
            eigenvalues: Comparison {
                numeric: v.numeric_eigenvalues.map(|e| e.map(cx)),
                predicted: p.and_then(|p| p.predicted_eigenvalues).map(|e| e.map(cx)),
                agrees: v.eigenvalues_agree,
                tolerance: EIGEN_MATCH_TOLERANCE,
            },
            expansion_residuals: v
                .expansion_residuals
                .iter()
                .map(|r| ResidualRow {
                    entry: r.entry.clone(),
                    term: r.term.to_string(),
                    printed: cx(r.printed),
                    rederived: cx(r.rederived),
                })
                .collect(),
            notes: v.notes.clone(),
        }
    }
}

impl WitnessSection {
    pub fn new(curve: &WitnessCurve, n_samples: usize, scale: f64) -> Self {
        Self {
            sizes: curve.sizes.clone(),
            sigma_min: curve.sigma_min.clone(),
            ratio: curve.ratio,
            fit_exponent: curve.fit_exponent,
            classification: curve.classification,
            thresholds: curve.thresholds,
            n_samples,
            scale,
        }
    }
}

fn fmt_cx(z: Cx) -> String {
    format!("{:.10} {} {:.10}i", z[0], if z[1] < 0.0 { '-' } else { '+' }, z[1].abs())
}

fn fmt_mat(m: &CxMat) -> String {
    format!("[[{}, {}], [{}, {}]]", fmt_cx(m[0][0]), fmt_cx(m[0][1]), fmt_cx(m[1][0]), fmt_cx(m[1][1]))
}

fn fmt_opt<T: std::fmt::Debug>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "-".into(), |v| format!("{v:?}"))
}

impl Report {
    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self).map(|s| s + "\n")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let spec = &self.spec_echo;
        let orders = [spec.left[0].order, spec.left[1].order, spec.right[0].order, spec.right[1].order];
        let _ = writeln!(s, "family      {}", spec.family);
        let _ = writeln!(s, "k0          {}", fmt_cx(spec.k0));
        let _ = writeln!(s, "orders      {orders:?}");
        let _ = writeln!(s, "verdict     {}", self.verdict.status.as_str());
        if let Some(at) = &self.verdict.degenerate_at {
            let _ = writeln!(s, "degenerate  at {at}");
        }
        let _ = writeln!(s, "critical mu {:?}", self.critical_mu.values);
        if let Some(j) = &self.jump {
            let _ = writeln!(s, "\njump J      {}", fmt_mat(&j.j));
            let _ = writeln!(s, "eigenvalues {}, {}", fmt_cx(j.eigenvalues[0]), fmt_cx(j.eigenvalues[1]));
            let _ = writeln!(s, "w           {}, {}", fmt_cx(j.w[0]), fmt_cx(j.w[1]));
            let _ = writeln!(s, "tau         {:.10}", j.tau);
        }
        if let Some(p) = &self.plan {
            let _ = writeln!(s, "\nplan        {}", p.space);
        }
        if let Some(v) = &self.validation {
            let _ = writeln!(s, "\ntheorem     {}", v.theorem_id.map_or("-", |t| t.as_str()));
            let _ = writeln!(s, "{:<12}{:<12}{:<12}", "quantity", "agrees", "tolerance");
            for (name, agrees, tol) in [
                ("status", v.status.agrees, v.status.tolerance),
                ("critical_mu", v.critical_mu.agrees, v.critical_mu.tolerance),
                ("eigenvalues", v.eigenvalues.agrees, v.eigenvalues.tolerance),
            ] {
                let _ = writeln!(s, "{name:<12}{:<12}{tol:e}", fmt_opt(&agrees));
            }
            if let (Some(n), Some(p)) = (&v.eigenvalues.numeric, &v.eigenvalues.predicted) {
                let _ = writeln!(s, "numeric     {}, {}", fmt_cx(n[0]), fmt_cx(n[1]));
                let _ = writeln!(s, "predicted   {}, {}", fmt_cx(p[0]), fmt_cx(p[1]));
            }
            for r in &v.expansion_residuals {
                let _ = writeln!(s, "residual    {} {}: {} vs {}", r.entry, r.term, fmt_cx(r.printed), fmt_cx(r.rederived));
            }
            for n in &v.notes {
                let _ = writeln!(s, "note        {n}");
            }
        }
        if let Some(w) = &self.witness {
            let _ = writeln!(s, "\nwitness     {:?} (ratio {:.4}, slope {:.4})", w.classification, w.ratio, w.fit_exponent);
            for (n, sigma) in w.sizes.iter().zip(&w.sigma_min) {
                let _ = writeln!(s, "  n = {n:<6} sigma_min = {sigma:.6e}");
            }
        }
        if !self.warnings.is_empty() {
            let _ = writeln!(s, "\nwarnings");
            for w in &self.warnings {
                let _ = writeln!(s, "  {w}");
            }
        }
        s
    }
}

pub fn write_witness_csv<W: io::Write>(w: &WitnessSection, out: W) -> csv::Result<()> {
    let mut csv = csv::Writer::from_writer(out);
    csv.write_record(["n", "sigma_min"])?;
    for (n, sigma) in w.sizes.iter().zip(&w.sigma_min) {
        csv.write_record([n.to_string(), format!("{sigma:.16e}")])?;
    }
    csv.flush()?;
    Ok(())
}

/// Φ₀ on the diagnosis grid; rows where evaluation fails are written as NaN.
pub fn write_symbol_trace<W: io::Write>(phi0: &MatrixSymbol, plan: &SamplingPlan, out: W) -> csv::Result<()> {
    let mut csv = csv::Writer::from_writer(out);
    csv.write_record(["xi", "re00", "im00", "re01", "im01", "re10", "im10", "re11", "im11"])?;
    for xi in plan.nodes() {
        let mut row = vec![format!("{xi:.16e}")];
        match phi0.eval(xi) {
            Ok(m) => {
                for z in [m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]] {
                    row.push(format!("{:.16e}", z.re));
                    row.push(format!("{:.16e}", z.im));
                }
            }
            Err(_) => row.extend(std::iter::repeat_n("NaN".to_string(), 8)),
        }
        csv.write_record(&row)?;
    }
    csv.flush()?;
    Ok(())
}
