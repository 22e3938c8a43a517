//! Closed-form predictions for the structured problem families.
//!
//! Each family and order-parity cell is dispatched to a [`TheoremId`]; the oracle
//! evaluates the normal-type condition, the real roots θ ∈ [−1, 1] of the
//! θ-equation and the closed-form eigenvalue formulas, independently of the
//! generic numeric pipeline.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::branch::{i_pow, lambda_power, neg_i_pow, parity, primitives};
use crate::closed_form::{higher_order_expansion, Expansion};
use crate::fredholm::{quadratic_roots, SamplingPlan, Status, ELLIPTICITY_THRESHOLD};
use crate::linalg::{c, det2, row_norm_product, Mat2};
use crate::spec::{Family, ProblemSpec};

/// Relative tolerance on |q(θ)| at the real minimizer for θ to count as a real root.
pub const THETA_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TheoremId {
    #[serde(rename = "T4.2")]
    T4_2,
    #[serde(rename = "T5.2")]
    T5_2,
    #[serde(rename = "T5.3")]
    T5_3,
    #[serde(rename = "T6.2")]
    T6_2,
    #[serde(rename = "T6.3")]
    T6_3,
    #[serde(rename = "T6.4")]
    T6_4,
    #[serde(rename = "T6.5")]
    T6_5,
}

impl TheoremId {
    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::T4_2 => "T4.2",
            TheoremId::T5_2 => "T5.2",
            TheoremId::T5_3 => "T5.3",
            TheoremId::T6_2 => "T6.2",
            TheoremId::T6_3 => "T6.3",
            TheoremId::T6_4 => "T6.4",
            TheoremId::T6_5 => "T6.5",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum OracleError {
    #[error("no closed-form theorem covers family {family} with orders {orders:?}")]
    UnsupportedFamily { family: Family, orders: [u32; 4] },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremPrediction {
    pub theorem_id: TheoremId,
    pub normal_type_condition_holds: bool,
    pub predicted_status: Status,
    pub predicted_eigenvalues: Option<[Complex64; 2]>,
    pub theta_roots: Option<Vec<f64>>,
    /// μ = (1 − θ)/2 for the accepted roots in the open interval.
    pub predicted_mu: Vec<f64>,
}

fn even(m: u32) -> bool {
    m.is_multiple_of(2)
}

/// The theorem covering a spec, selected by family and order parities.
pub fn dispatch(spec: &ProblemSpec) -> Result<TheoremId, OracleError> {
    let orders = spec.orders();
    let unsupported = || OracleError::UnsupportedFamily {
        family: spec.family,
        orders,
    };
    match spec.family {
        Family::GeneralHigherOrder => {
            let m = orders[0];
            let tables = spec
                .left
                .iter()
                .chain(spec.right.iter())
                .any(|op| op.general_table.is_some());
            if !tables && orders.iter().all(|&o| o == m) && even(m) {
                Ok(TheoremId::T4_2)
            } else {
                Err(unsupported())
            }
        }
        Family::PairwiseNormal => {
            if even(orders[0] + orders[1]) {
                Ok(TheoremId::T5_2)
            } else {
                Ok(TheoremId::T5_3)
            }
        }
        Family::ObliqueRight => match (even(spec.left[0].order), even(spec.right[0].order)) {
            (true, true) => Ok(TheoremId::T6_2),
            (false, false) => Ok(TheoremId::T6_3),
            (true, false) => Ok(TheoremId::T6_4),
            (false, true) => Ok(TheoremId::T6_5),
        },
        Family::GeneralMultiindex => Err(unsupported()),
    }
}

fn eval_quadratic(q: [Complex64; 3], x: f64) -> (Complex64, Complex64, Complex64) {
    let [a, b, c0] = q;
    (a * x * x + b * x + c0, a * 2.0 * x + b, a * 2.0)
}

/// Real roots in [−1, 1] of aθ² + bθ + c with complex coefficients.
///
/// Each complex root seeds a Newton search for the real minimizer of |q|²; the
/// minimizer is accepted when |q| there is below [`THETA_TOLERANCE`] times the
/// coefficient scale, so both real and imaginary parts vanish together.
pub fn real_theta_roots(a: Complex64, b: Complex64, c0: Complex64) -> Vec<f64> {
    let scale = a.norm() + b.norm() + c0.norm();
    if scale == 0.0 {
        return Vec::new();
    }
    let q = [a, b, c0];
    let mut roots: Vec<f64> = Vec::new();
    for z in quadratic_roots(c0, b, a) {
        let mut x = z.re;
        for _ in 0..50 {
            let (v, d1, d2) = eval_quadratic(q, x);
            let g = (v.conj() * d1).re;
            let h = d1.norm_sqr() + (v.conj() * d2).re;
            if !(h > 0.0) {
                break;
            }
            let step = g / h;
            x -= step;
            if step.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        let (v, _, _) = eval_quadratic(q, x);
        if v.norm() <= THETA_TOLERANCE * scale && x.abs() <= 1.0 + 1e-12 {
            roots.push(x.clamp(-1.0, 1.0));
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|p, q| (*p - *q).abs() <= 1e-9);
    roots
}

fn mu_of(theta: &[f64]) -> Vec<f64> {
    let mut mu: Vec<f64> = theta
        .iter()
        .map(|t| 0.5 * (1.0 - t))
        .filter(|&m| m > 0.0 && m < 1.0)
        .collect();
    mu.sort_by(f64::total_cmp);
    mu
}

fn oracle_grid() -> SamplingPlan {
    SamplingPlan::new(512, 1.0)
}

/// Ellipticity of the re-derived higher-order expansion, lifted, on a grid and at large |ξ|.
fn higher_order_normal_type(spec: &ProblemSpec) -> bool {
    let exp = higher_order_expansion(spec, Expansion::Rederived);
    let s = spec.image_orders();
    let r = spec.domain_orders();
    let plan = SamplingPlan::new(oracle_grid().points, spec.k0.norm());
    let mut xis = plan.nodes();
    xis.extend([-1e8, 1e8]);
    xis.iter().all(|&xi| {
        let pv = primitives(xi, spec.k0);
        let phi = exp.composed(spec, xi);
        let lifted = Mat2::from_fn(|i, j| {
            lambda_power(pv.lambda_minus, s[i]) * phi[(i, j)] * lambda_power(pv.lambda_plus, -r[j])
        });
        let ratio = det2(&lifted).norm() / row_norm_product(&lifted);
        ratio.is_finite() && ratio >= ELLIPTICITY_THRESHOLD
    })
}

/// (a₁⁺a₂⁻ − σa₁⁻a₂⁺)(b₁⁺b₂⁻ − σb₁⁻b₂⁺) ≠ 0 with σ = (−1)^{m₁+m₂}.
fn pairwise_normal_type(spec: &ProblemSpec) -> bool {
    let [m1, m2, _, _] = spec.orders();
    let sigma = parity((m1 + m2) as i64);
    let [a1p, a1m] = spec.left[0].normal;
    let [a2p, a2m] = spec.left[1].normal;
    let [b1p, b1m] = spec.right[0].normal;
    let [b2p, b2m] = spec.right[1].normal;
    let left = a1p * a2m - a1m * a2p * sigma;
    let right = b1p * b2m - b1m * b2p * sigma;
    let scale = (a1p.norm() * a2m.norm() + a1m.norm() * a2p.norm())
        * (b1p.norm() * b2m.norm() + b1m.norm() * b2p.norm());
    (left * right).norm() > ELLIPTICITY_THRESHOLD * scale
}

struct ObliqueCoefficients {
    b: [Complex64; 2],
    bc: [Complex64; 2],
    c: [Complex64; 2],
    cc: [Complex64; 2],
}

fn oblique_coefficients(spec: &ProblemSpec) -> ObliqueCoefficients {
    ObliqueCoefficients {
        b: spec.right[0].normal,
        bc: spec.right[0].tangential,
        c: spec.right[1].normal,
        cc: spec.right[1].tangential,
    }
}

/// The normal-type polynomial in z = (−iξ/β)^{m₂} on the grid and at both endpoints.
fn oblique_normal_type(spec: &ProblemSpec) -> bool {
    let m2 = spec.right[0].order;
    let k = oblique_coefficients(spec);
    let (bp, bm, bcp, bcm) = (k.b[0], k.b[1], k.bc[0], k.bc[1]);
    let (cp, cm, ccp, ccm) = (k.c[0], k.c[1], k.cc[0], k.cc[1]);
    let s = parity(m2 as i64);
    let p0 = (bp * cm - bm * cp) * s;
    let p1 = (bp * ccm - bcm * cp) * s + bcp * cm - bm * ccp;
    let p2 = bcp * ccm - bcm * ccp;
    let scale = [bp, bm, bcp, bcm].iter().map(|x| x.norm()).fold(0.0, f64::max)
        * [cp, cm, ccp, ccm].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let plan = SamplingPlan::new(oracle_grid().points, spec.k0.norm());
    let mut zs: Vec<Complex64> = plan
        .nodes()
        .into_iter()
        .map(|xi| neg_i_pow(m2) * primitives(xi, spec.k0).t.powi(m2 as i32))
        .collect();
    zs.push(neg_i_pow(m2));
    zs.push(neg_i_pow(m2) * parity(m2 as i64));
    zs.iter().all(|&z| {
        let v = p0 + p1 * z + p2 * z * z;
        v.norm() > ELLIPTICITY_THRESHOLD * scale * z.norm().max(1.0).powi(2)
    })
}

struct PairwiseTerms {
    p: Complex64,
    q: Complex64,
    r: Complex64,
    s: Complex64,
    den: Complex64,
}

fn pairwise_terms(spec: &ProblemSpec) -> PairwiseTerms {
    let [a1p, a1m] = spec.left[0].normal;
    let [a2p, a2m] = spec.left[1].normal;
    let [b1p, b1m] = spec.right[0].normal;
    let [b2p, b2m] = spec.right[1].normal;
    PairwiseTerms {
        p: a2m * b1p + a2p * b1m,
        q: a1p * b1m - a1m * b1p,
        r: a2p * b2m - a2m * b2p,
        s: a1p * b2m + a1m * b2p,
        den: (a1p * a2m + a1m * a2p) * (b1p * b2m + b1m * b2p),
    }
}

/// θ² = QR/(SP) as a quadratic SPθ² − QR = 0, and λ = ±√((1−θ²)²A₁₁² + A₁₂A₂₁).
fn odd_pairwise(spec: &ProblemSpec) -> (Vec<f64>, [Complex64; 2]) {
    let t = pairwise_terms(spec);
    let theta2 = t.q * t.r / (t.s * t.p);
    let a11 = t.s * t.p / t.den;
    let a12 = t.s * t.q * -2.0 / t.den;
    let a21 = t.p * t.r * -2.0 / t.den;
    let one_minus = Complex64::new(1.0, 0.0) - theta2;
    let lam = (one_minus * one_minus * a11 * a11 + a12 * a21).sqrt();
    let roots = real_theta_roots(t.s * t.p, c(0.0, 0.0), -t.q * t.r);
    (roots, [lam, -lam])
}

struct ObliqueTerms {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
    e: Complex64,
}

fn oblique_terms(spec: &ProblemSpec) -> ObliqueTerms {
    let m2 = spec.right[0].order;
    let k = oblique_coefficients(spec);
    let (bp, bm, bcp, bcm) = (k.b[0], k.b[1], k.bc[0], k.bc[1]);
    let (cp, cm, ccp, ccm) = (k.c[0], k.c[1], k.cc[0], k.cc[1]);
    let a = bm * cp - bp * cm + bcp * ccm - bcm * ccp;
    let b = bcm * ccp + bm * ccp - bcp * cm - bp * ccm;
    ObliqueTerms {
        a,
        b,
        c: bm * cp - bp * cm + bcm * ccm + bcm * ccp + i_pow(m2) * b,
        d: bm * ccm - bcm * cm,
        e: bp * ccp - bcp * cp,
    }
}

fn oblique_theta_roots(spec: &ProblemSpec, id: TheoremId) -> Vec<f64> {
    let m2 = spec.right[0].order;
    let k = oblique_coefficients(spec);
    let (bp, bm, bcp, bcm) = (k.b[0], k.b[1], k.bc[0], k.bc[1]);
    let (cp, cm, ccp, ccm) = (k.c[0], k.c[1], k.cc[0], k.cc[1]);
    let mixed = bcp * cm - bp * ccm + bcm * cp - bm * ccp;
    let im = i_pow(m2);
    if id == TheoremId::T6_3 {
        real_theta_roots(bp * cm - bm * cp, im * mixed, bcp * ccm - bcm * ccp)
    } else {
        real_theta_roots(bcm * ccp - bcp * ccm, -im * mixed, bm * cp - bp * cm)
    }
}

fn oblique_eigenvalues(spec: &ProblemSpec, id: TheoremId) -> [Complex64; 2] {
    let t = oblique_terms(spec);
    let root = Complex64::i() * (t.b * t.b + t.d * t.e * 4.0).sqrt();
    let lead = if id == TheoremId::T6_3 { -t.a } else { t.a };
    [(lead + root) / t.c, (lead - root) / t.c]
}

/// Predictions of the closed-form theorems for a structured spec.
pub fn theorem_oracle(spec: &ProblemSpec) -> Result<TheoremPrediction, OracleError> {
    let id = dispatch(spec)?;
    let minus_one = c(-1.0, 0.0);
    let normal = match spec.family {
        Family::GeneralHigherOrder => higher_order_normal_type(spec),
        Family::PairwiseNormal => pairwise_normal_type(spec),
        _ => oblique_normal_type(spec),
    };
    let (status, eigenvalues, theta) = match id {
        TheoremId::T4_2 | TheoremId::T5_2 | TheoremId::T6_2 => (
            Status::NotNormallySolvable,
            Some([minus_one; 2]),
            Some(vec![0.0]),
        ),
        TheoremId::T6_5 => (Status::NormallySolvable, Some([c(1.0, 0.0); 2]), None),
        TheoremId::T5_3 => {
            let (roots, lam) = odd_pairwise(spec);
            (theta_status(&roots), Some(lam), Some(roots))
        }
        TheoremId::T6_3 | TheoremId::T6_4 => {
            let roots = oblique_theta_roots(spec, id);
            (
                theta_status(&roots),
                Some(oblique_eigenvalues(spec, id)),
                Some(roots),
            )
        }
    };
    let (status, predicted_mu) = if normal {
        (status, theta.as_deref().map(mu_of).unwrap_or_default())
    } else {
        (Status::DegenerateSymbol, Vec::new())
    };
    Ok(TheoremPrediction {
        theorem_id: id,
        normal_type_condition_holds: normal,
        predicted_status: status,
        predicted_eigenvalues: eigenvalues,
        theta_roots: theta,
        predicted_mu,
    })
}

fn theta_status(roots: &[f64]) -> Status {
    if roots.is_empty() {
        Status::NormallySolvable
    } else {
        Status::NotNormallySolvable
    }
}
