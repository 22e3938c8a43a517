//! Image-normalization plans and their symbolic rendering.

use serde::{Deserialize, Serialize};

use crate::fredholm::{scalar_critical, JumpAnalysis};
use crate::linalg::{frob, Mat2};

/// τ below this magnitude renders as the H̆⁰ space.
pub const TAU_ZERO: f64 = 1e-10;

/// Definition appended whenever H̆⁰ appears in a rendering.
pub const H0_DEFINITION: &str = "H̆⁰(ℝ₊)=r₊Λ₋^{−1/2}H₊^{−1/2}";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ComponentTag {
    DenseSubspace { tau: f64 },
    Unchanged,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationPlan {
    /// Lift orders appearing as Λ₋^{−s}; one entry for scalar plans.
    pub s_orders: Vec<f64>,
    /// Diagonalizer; `None` means the identity.
    pub t: Option<Mat2>,
    pub components: Vec<ComponentTag>,
    pub space_description: String,
    /// Both eigenvalues critical with distinct values: not covered by the closed-form theory.
    pub beyond_closed_form: bool,
}

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum PlanError {
    #[error("jump has no eigenvalue with argument -pi")]
    NoCriticalEigenvalue,
    #[error("jump matrix is not diagonalizable")]
    NotDiagonalizable,
    #[error("s + eta + 1/2 = {0} is not an integer")]
    NotCritical(f64),
}

fn snap(tau: f64) -> f64 {
    if tau.abs() <= TAU_ZERO {
        0.0
    } else {
        tau
    }
}

fn is_identity(t: &Mat2) -> bool {
    frob(&(t - Mat2::identity())) <= 1e-12
}

/// Plan for a 2×2 jump with at least one eigenvalue of argument −π.
pub fn plan_matrix(jump: &JumpAnalysis, s_orders: [f64; 2]) -> Result<NormalizationPlan, PlanError> {
    let t = jump.t.ok_or(PlanError::NotDiagonalizable)?;
    let t = if is_identity(&t) { None } else { Some(t) };
    let (components, extension) = match jump.critical {
        [false, false] => return Err(PlanError::NoCriticalEigenvalue),
        [true, true] => {
            let [l1, l2] = jump.eigenvalues;
            let distinct = (l1 - l2).norm() > 1e-8 * l1.norm().max(l2.norm());
            (
                vec![
                    ComponentTag::DenseSubspace { tau: snap(jump.tau_of(0)) },
                    ComponentTag::DenseSubspace { tau: snap(jump.tau_of(1)) },
                ],
                distinct,
            )
        }
        [true, false] => (
            vec![
                ComponentTag::DenseSubspace { tau: snap(jump.tau_of(0)) },
                ComponentTag::Unchanged,
            ],
            false,
        ),
        [false, true] => (
            vec![
                ComponentTag::Unchanged,
                ComponentTag::DenseSubspace { tau: snap(jump.tau_of(1)) },
            ],
            false,
        ),
    };
    let space_description = render_matrix(&s_orders, t.is_some(), &components);
    Ok(NormalizationPlan {
        s_orders: s_orders.to_vec(),
        t,
        components,
        space_description,
        beyond_closed_form: extension,
    })
}

/// Plan for a scalar symbol at a critical order.
pub fn plan_scalar(s: f64, eta: f64, tau: f64) -> Result<NormalizationPlan, PlanError> {
    if !scalar_critical(s, eta) {
        return Err(PlanError::NotCritical(s + eta + 0.5));
    }
    let left = if s == 0.0 && tau == 0.0 {
        "H̆⁰(ℝ₊)".to_string()
    } else {
        format!("H̆^{{{}}}(ℝ₊)", exponent_real_first(s, -tau))
    };
    let right = exponent_imag_first(-s - 0.5, tau);
    Ok(NormalizationPlan {
        s_orders: vec![s],
        t: None,
        components: vec![ComponentTag::DenseSubspace { tau }],
        space_description: format!("{left}=r₊Λ₋^{{{right}}}H₊^{{−1/2}}; s = {s}; τ = {tau}"),
        beyond_closed_form: false,
    })
}

fn dense_tau(tag: &ComponentTag) -> Option<f64> {
    match tag {
        ComponentTag::DenseSubspace { tau } => Some(*tau),
        ComponentTag::Unchanged => None,
    }
}

fn render_matrix(s_orders: &[f64; 2], has_t: bool, components: &[ComponentTag]) -> String {
    let dense: Vec<f64> = components.iter().filter_map(dense_tau).collect();
    let mut k = 0;
    let factors: Vec<String> = components
        .iter()
        .map(|c| match c {
            ComponentTag::Unchanged => "L²(ℝ₊)".to_string(),
            ComponentTag::DenseSubspace { tau } => {
                k += 1;
                if tau.abs() <= TAU_ZERO {
                    "H̆⁰(ℝ₊)".to_string()
                } else if dense.len() == 1 {
                    "H̆^{−iτ}(ℝ₊)".to_string()
                } else {
                    format!("H̆^{{−iτ{}}}(ℝ₊)", subscript(k))
                }
            }
        })
        .collect();
    let t = if has_t { " T" } else { "" };
    let mut out = format!("r₊Λ₋^{{−s}}{t} ℓ⁽⁰⁾{{{}}}", factors.join("×"));
    out.push_str(&format!("; s = ({}, {})", s_orders[0], s_orders[1]));
    match dense.as_slice() {
        [tau] => out.push_str(&format!("; τ = {tau}")),
        taus => {
            for (i, tau) in taus.iter().enumerate() {
                out.push_str(&format!("; τ{} = {tau}", subscript(i + 1)));
            }
        }
    }
    if factors.iter().any(|f| f == "H̆⁰(ℝ₊)") {
        out.push_str("; ");
        out.push_str(H0_DEFINITION);
    }
    out
}

fn subscript(k: usize) -> &'static str {
    match k {
        1 => "₁",
        2 => "₂",
        _ => "?",
    }
}

/// Exact-looking rendering of a real number: integers, halves, otherwise decimal.
fn fmt_real(x: f64) -> String {
    let sign = if x < 0.0 { "−" } else { "" };
    let a = x.abs();
    let body = if (a - a.round()).abs() < 1e-12 {
        format!("{}", a.round())
    } else if (2.0 * a - (2.0 * a).round()).abs() < 1e-12 {
        format!("{}/2", (2.0 * a).round())
    } else {
        format!("{a}")
    };
    format!("{sign}{body}")
}

fn fmt_imag(y: f64) -> String {
    let sign = if y < 0.0 { "−" } else { "" };
    let a = y.abs();
    if (a - 1.0).abs() < 1e-12 {
        format!("{sign}i")
    } else {
        format!("{sign}{}i", fmt_real(a))
    }
}

fn signed(part: String) -> String {
    if part.starts_with('−') {
        part
    } else {
        format!("+{part}")
    }
}

/// re + i·im written as e.g. "1/2−i".
fn exponent_real_first(re: f64, im: f64) -> String {
    match (re == 0.0, im == 0.0) {
        (true, true) => "0".into(),
        (false, true) => fmt_real(re),
        (true, false) => fmt_imag(im),
        (false, false) => format!("{}{}", fmt_real(re), signed(fmt_imag(im))),
    }
}

/// re + i·im written as e.g. "i−1/2".
fn exponent_imag_first(re: f64, im: f64) -> String {
    match (re == 0.0, im == 0.0) {
        (true, true) => "0".into(),
        (false, true) => fmt_real(re),
        (true, false) => fmt_imag(im),
        (false, false) => format!("{}{}", fmt_imag(im), signed(fmt_real(re))),
    }
}

/// Structural content recovered from a rendered space description.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedSpace {
    pub s_orders: Vec<f64>,
    pub has_t: bool,
    pub components: Vec<ComponentTag>,
}

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
#[error("cannot parse space description: {0}")]
pub struct ParseSpaceError(String);

fn parse_param(segments: &[&str], key: &str) -> Option<String> {
    segments
        .iter()
        .find_map(|s| s.strip_prefix(key).and_then(|r| r.strip_prefix(" = ")))
        .map(str::to_string)
}

fn parse_f64(s: &str) -> Result<f64, ParseSpaceError> {
    s.trim().parse().map_err(|_| ParseSpaceError(format!("bad number {s:?}")))
}

/// Parses the output of plan rendering back into orders, T-presence and component tags.
pub fn parse_space_description(text: &str) -> Result<ParsedSpace, ParseSpaceError> {
    let segments: Vec<&str> = text.split("; ").collect();
    let form = segments[0];
    let s_raw = parse_param(&segments, "s").ok_or_else(|| ParseSpaceError("missing s".into()))?;
    let s_orders = match s_raw.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        Some(inner) => inner.split(", ").map(parse_f64).collect::<Result<Vec<_>, _>>()?,
        None => vec![parse_f64(&s_raw)?],
    };
    let tau = |key: &str| -> Result<f64, ParseSpaceError> {
        parse_f64(&parse_param(&segments, key).ok_or_else(|| ParseSpaceError(format!("missing {key}")))?)
    };
    if form.starts_with("H̆") {
        return Ok(ParsedSpace {
            s_orders,
            has_t: false,
            components: vec![ComponentTag::DenseSubspace { tau: tau("τ")? }],
        });
    }
    let body = form
        .strip_prefix("r₊Λ₋^{−s}")
        .ok_or_else(|| ParseSpaceError(format!("unknown form {form:?}")))?;
    let has_t = body.starts_with(" T ");
    let inner = body
        .split_once("ℓ⁽⁰⁾{")
        .and_then(|(_, r)| r.strip_suffix('}'))
        .ok_or_else(|| ParseSpaceError("missing ℓ⁽⁰⁾{...}".into()))?;
    let factors: Vec<&str> = inner.split('×').collect();
    let dense_count = factors.iter().filter(|f| f.starts_with("H̆")).count();
    let mut k = 0;
    let mut components = Vec::new();
    for f in factors {
        if f == "L²(ℝ₊)" {
            components.push(ComponentTag::Unchanged);
        } else if f.starts_with("H̆") {
            k += 1;
            let key = if dense_count == 1 {
                "τ".to_string()
            } else {
                format!("τ{}", subscript(k))
            };
            components.push(ComponentTag::DenseSubspace { tau: tau(&key)? });
        } else {
            return Err(ParseSpaceError(format!("unknown factor {f:?}")));
        }
    }
    Ok(ParsedSpace {
        s_orders,
        has_t,
        components,
    })
}
