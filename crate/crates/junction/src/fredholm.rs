//! Limits at infinity, ellipticity, the Fredholm criterion and the jump at infinity.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::asymptotic::AsymptoticForm;
use crate::branch::Sign;
use crate::linalg::{det2, diag2, frob, inv2, is_finite, row_norm_product, Mat2};
use crate::symbol::MatrixSymbol;

/// Relative threshold on |det Φ₀| / (row-norm product) below which the symbol is degenerate.
pub const ELLIPTICITY_THRESHOLD: f64 = 1e-8;
/// Tolerance on |arg λ + π| for an eigenvalue to count as critical.
pub const ARG_TOLERANCE: f64 = 1e-8;
/// Relative tolerance on Im μ for a root of the criterion quadratic to count as real.
pub const MU_TOLERANCE: f64 = 1e-9;
/// Relative discriminant below which the criterion quadratic has a double root.
pub const DOUBLE_ROOT_TOLERANCE: f64 = 1e-12;
/// Relative |det| threshold for invertibility of a limit matrix.
pub const LIMIT_SINGULARITY: f64 = 1e-12;

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("symbol carries no asymptotic form")]
    MissingAsymptotics,
    #[error("limit at infinity is not finite")]
    NonFiniteLimits,
    #[error("limit at {0} infinity is singular")]
    SingularLimit(&'static str),
    #[error("jump matrix is not diagonalizable (eigenvalues {0} and {1})")]
    NotDiagonalizable(Complex64, Complex64),
    #[error("argument step exceeds pi/2 near xi = {0}; refine the grid")]
    WindingUnresolved(f64),
    #[error("scalar symbol vanishes near xi = {0}")]
    ScalarVanishes(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolLimits {
    pub at_minus_inf: Mat2,
    pub at_plus_inf: Mat2,
}

/// Φ₀(±∞) by substituting ρ = t = ±1 into the asymptotic form.
pub fn limits_at_infinity(asym: Option<&AsymptoticForm>) -> Result<SymbolLimits, AnalysisError> {
    let form = asym.ok_or(AnalysisError::MissingAsymptotics)?;
    let limits = SymbolLimits {
        at_minus_inf: form.limit(Sign::Minus),
        at_plus_inf: form.limit(Sign::Plus),
    };
    if !is_finite(&limits.at_minus_inf) || !is_finite(&limits.at_plus_inf) {
        return Err(AnalysisError::NonFiniteLimits);
    }
    Ok(limits)
}

/// Chebyshev nodes in the compactified coordinate u ∈ (−1, 1), ξ = scale·tan(πu/2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingPlan {
    pub points: usize,
    pub scale: f64,
}

impl SamplingPlan {
    pub fn new(points: usize, scale: f64) -> Self {
        Self { points, scale }
    }

    /// Increasing abscissae.
    pub fn nodes(&self) -> Vec<f64> {
        let n = self.points as f64;
        (0..self.points)
            .rev()
            .map(|k| {
                let u = ((2 * k + 1) as f64 * PI / (2.0 * n)).cos();
                self.scale * (0.5 * PI * u).tan()
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "xi")]
pub enum DegeneratePoint {
    Xi(f64),
    PlusInfinity,
    MinusInfinity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ellipticity {
    Ok { min_ratio: f64 },
    Degenerate { at: DegeneratePoint, ratio: f64 },
}

impl Ellipticity {
    pub fn is_ok(&self) -> bool {
        matches!(self, Ellipticity::Ok { .. })
    }
}

fn det_ratio(m: &Mat2) -> f64 {
    let scale = row_norm_product(m);
    let r = det2(m).norm() / scale;
    if r.is_finite() {
        r
    } else {
        0.0
    }
}

/// |det Φ₀| relative to the row-norm product over the grid and both endpoints.
pub fn check_ellipticity(phi0: &MatrixSymbol, plan: &SamplingPlan) -> Ellipticity {
    let mut min_ratio = f64::INFINITY;
    if let Ok(limits) = limits_at_infinity(phi0.asymptotic.as_ref()) {
        for (m, at) in [
            (limits.at_minus_inf, DegeneratePoint::MinusInfinity),
            (limits.at_plus_inf, DegeneratePoint::PlusInfinity),
        ] {
            let ratio = det_ratio(&m);
            if ratio < ELLIPTICITY_THRESHOLD {
                return Ellipticity::Degenerate { at, ratio };
            }
            min_ratio = min_ratio.min(ratio);
        }
    }
    for xi in plan.nodes() {
        let ratio = phi0.eval(xi).map_or(0.0, |m| det_ratio(&m));
        if ratio < ELLIPTICITY_THRESHOLD {
            return Ellipticity::Degenerate {
                at: DegeneratePoint::Xi(xi),
                ratio,
            };
        }
        min_ratio = min_ratio.min(ratio);
    }
    Ellipticity::Ok { min_ratio }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    NormallySolvable,
    NotNormallySolvable,
    DegenerateSymbol,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::NormallySolvable => "normally_solvable",
            Status::NotNormallySolvable => "not_normally_solvable",
            Status::DegenerateSymbol => "degenerate_symbol",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FredholmVerdict {
    pub status: Status,
    pub critical_mu: Vec<f64>,
    pub jump: Option<JumpAnalysis>,
}

impl FredholmVerdict {
    pub fn degenerate() -> Self {
        Self {
            status: Status::DegenerateSymbol,
            critical_mu: Vec::new(),
            jump: None,
        }
    }
}

fn is_singular(m: &Mat2) -> bool {
    !(det2(m).norm() > LIMIT_SINGULARITY * frob(m).powi(2))
}

/// Coefficients (c₀, c₁, c₂) of det(μA + (1−μ)B) = c₀ + c₁μ + c₂μ².
pub fn criterion_polynomial(limits: &SymbolLimits) -> [Complex64; 3] {
    let a = &limits.at_minus_inf;
    let b = &limits.at_plus_inf;
    let c0 = det2(b);
    let c2 = det2(&(a - b));
    let c1 = det2(a) - c0 - c2;
    [c0, c1, c2]
}

/// Roots of c₂x² + c₁x + c₀ by the cancellation-free quadratic formula.
pub fn quadratic_roots(c0: Complex64, c1: Complex64, c2: Complex64) -> Vec<Complex64> {
    let scale = c0.norm().max(c1.norm()).max(c2.norm());
    if scale == 0.0 {
        return Vec::new();
    }
    if c2.norm() <= 1e-14 * scale {
        if c1.norm() <= 1e-14 * scale {
            return Vec::new();
        }
        return vec![-c0 / c1];
    }
    let sq = (c1 * c1 - c2 * c0 * 4.0).sqrt();
    let plus = c1 + sq;
    let minus = c1 - sq;
    let q = if plus.norm() >= minus.norm() { plus } else { minus } * -0.5;
    if q.norm() == 0.0 {
        return vec![Complex64::new(0.0, 0.0); 2];
    }
    vec![q / c2, c0 / q]
}

/// Real roots of the criterion quadratic in the open interval (0, 1).
pub fn fredholm_criterion(limits: &SymbolLimits) -> FredholmVerdict {
    if is_singular(&limits.at_minus_inf) || is_singular(&limits.at_plus_inf) {
        return FredholmVerdict::degenerate();
    }
    let [c0, c1, c2] = criterion_polynomial(limits);
    let disc = c1 * c1 - c2 * c0 * 4.0;
    let double_root = c2.norm() > 0.0
        && disc.norm() <= DOUBLE_ROOT_TOLERANCE * (c1.norm_sqr()).max((c2 * c0 * 4.0).norm());
    let roots = if double_root {
        vec![-c1 / (c2 * 2.0)]
    } else {
        quadratic_roots(c0, c1, c2)
    };
    let mut mus: Vec<f64> = roots
        .into_iter()
        .filter(|z| z.im.abs() <= MU_TOLERANCE * z.norm().max(1.0))
        .map(|z| z.re)
        .filter(|&m| m > 0.0 && m < 1.0)
        .collect();
    mus.sort_by(f64::total_cmp);
    mus.dedup_by(|a, b| (*a - *b).abs() <= MU_TOLERANCE);
    FredholmVerdict {
        status: if mus.is_empty() {
            Status::NormallySolvable
        } else {
            Status::NotNormallySolvable
        },
        critical_mu: mus,
        jump: None,
    }
}

/// arg in (−2π, 0].
pub fn arg_nonpositive(z: Complex64) -> f64 {
    let a = z.arg();
    if a > 0.0 {
        a - 2.0 * PI
    } else {
        a
    }
}

pub fn is_critical_eigenvalue(z: Complex64) -> bool {
    (arg_nonpositive(z) + PI).abs() <= ARG_TOLERANCE
}

/// w with λ = e^{2πiw}: Re w = arg λ/2π ∈ (−1, 0], Im w = −ln|λ|/2π.
pub fn exponent(z: Complex64) -> Complex64 {
    Complex64::new(arg_nonpositive(z) / (2.0 * PI), -z.norm().ln() / (2.0 * PI))
}

#[derive(Debug, Clone, PartialEq)]
pub struct JumpAnalysis {
    pub limits: SymbolLimits,
    /// J = Φ₀(−∞)⁻¹Φ₀(+∞).
    pub j: Mat2,
    pub eigenvalues: [Complex64; 2],
    /// T with J = T⁻¹ diag(λ₁, λ₂) T; absent when J is defective.
    pub t: Option<Mat2>,
    pub diagonalizable: bool,
    pub exponents: [Complex64; 2],
    pub tau: f64,
    pub critical: [bool; 2],
    /// ‖T⁻¹ diag T − J‖ / ‖J‖.
    pub reconstruction_residual: f64,
}

impl JumpAnalysis {
    pub fn critical_count(&self) -> usize {
        self.critical.iter().filter(|&&c| c).count()
    }

    pub fn tau_of(&self, k: usize) -> f64 {
        -self.eigenvalues[k].norm().ln() / (2.0 * PI)
    }
}

/// Unit eigenvector with its largest component real and positive.
fn unit_eigenvector(j: &Mat2, lambda: Complex64) -> [Complex64; 2] {
    let (a, b, c, d) = (j[(0, 0)], j[(0, 1)], j[(1, 0)], j[(1, 1)]);
    let v1 = [b, lambda - a];
    let v2 = [lambda - d, c];
    let n1 = (v1[0].norm_sqr() + v1[1].norm_sqr()).sqrt();
    let n2 = (v2[0].norm_sqr() + v2[1].norm_sqr()).sqrt();
    let v = if n1 >= n2 {
        [v1[0] / n1, v1[1] / n1]
    } else {
        [v2[0] / n2, v2[1] / n2]
    };
    let big = if v[0].norm() >= v[1].norm() { v[0] } else { v[1] };
    let phase = big.conj() / big.norm();
    [v[0] * phase, v[1] * phase]
}

/// Eigen-decomposition of the jump; defective jumps are returned with `diagonalizable = false`.
pub fn analyze_jump(limits: &SymbolLimits) -> Result<JumpAnalysis, AnalysisError> {
    let a_inv = inv2(&limits.at_minus_inf, LIMIT_SINGULARITY).ok_or(AnalysisError::SingularLimit("-"))?;
    if is_singular(&limits.at_plus_inf) {
        return Err(AnalysisError::SingularLimit("+"));
    }
    let j = a_inv * limits.at_plus_inf;
    let mut eigenvalues = crate::linalg::eigenvalues2(&j);
    if !is_critical_eigenvalue(eigenvalues[0]) && is_critical_eigenvalue(eigenvalues[1]) {
        eigenvalues.swap(0, 1);
    }
    let norm = frob(&j);
    let scalar = j[(0, 1)].norm() <= 1e-12 * norm
        && j[(1, 0)].norm() <= 1e-12 * norm
        && (j[(0, 0)] - j[(1, 1)]).norm() <= 1e-12 * norm;
    let t = if scalar {
        Some(Mat2::identity())
    } else {
        let v1 = unit_eigenvector(&j, eigenvalues[0]);
        let v2 = unit_eigenvector(&j, eigenvalues[1]);
        let v = Mat2::new(v1[0], v2[0], v1[1], v2[1]);
        if det2(&v).norm() <= 1e-8 {
            None
        } else {
            inv2(&v, 0.0)
        }
    };
    let reconstruction_residual = match &t {
        Some(t) => {
            let t_inv = inv2(t, 0.0).unwrap_or_else(Mat2::identity);
            frob(&(t_inv * diag2(eigenvalues[0], eigenvalues[1]) * t - j)) / norm
        }
        None => f64::NAN,
    };
    Ok(JumpAnalysis {
        limits: *limits,
        j,
        eigenvalues,
        diagonalizable: t.is_some(),
        t,
        exponents: eigenvalues.map(exponent),
        tau: -eigenvalues[0].norm().ln() / (2.0 * PI),
        critical: eigenvalues.map(is_critical_eigenvalue),
        reconstruction_residual,
    })
}

/// Jump analysis that treats a defective jump matrix as an error.
pub fn jump_and_eigen(limits: &SymbolLimits) -> Result<JumpAnalysis, AnalysisError> {
    let jump = analyze_jump(limits)?;
    if !jump.diagonalizable {
        return Err(AnalysisError::NotDiagonalizable(
            jump.eigenvalues[0],
            jump.eigenvalues[1],
        ));
    }
    Ok(jump)
}

/// Winding η = (total continuous increment of arg Φ)/2π along the grid.
pub fn scalar_winding<F>(phi: F, plan: &SamplingPlan) -> Result<f64, AnalysisError>
where
    F: Fn(f64) -> Complex64,
{
    let mut total = 0.0;
    let mut prev: Option<(f64, Complex64)> = None;
    for xi in plan.nodes() {
        let z = phi(xi);
        if !(z.norm() > 0.0) || !z.re.is_finite() || !z.im.is_finite() {
            return Err(AnalysisError::ScalarVanishes(xi));
        }
        if let Some((_, p)) = prev {
            let step = (z / p).arg();
            if step.abs() > 0.5 * PI {
                return Err(AnalysisError::WindingUnresolved(xi));
            }
            total += step;
        }
        prev = Some((xi, z));
    }
    Ok(total / (2.0 * PI))
}

/// s + η + 1/2 within 1e-9 of an integer.
pub fn scalar_critical(s: f64, eta: f64) -> bool {
    let x = s + eta + 0.5;
    (x - x.round()).abs() <= 1e-9
}
