//! Expanded closed-form symbols for the three structured problem families.
//!
//! These are independent of the matrix-product path in [`crate::symbol`] and serve as
//! cross-checks. For general higher-order conditions two variants of the expanded
//! entries are provided: the expansion in its printed form, and a re-derived
//! expansion. Residuals between them and the product path are reported per term.

use num_complex::Complex64;

use crate::branch::{neg_i_pow, parity, primitives};
use crate::linalg::{det2, Mat2};
use crate::spec::{Family, ProblemSpec};
use crate::symbol::{composed_symbol, SymbolError};

/// Lifted symbol of a pairwise-normal problem:
/// (1/A)[[P₁ρ^{1−2m₁}, Q₁ρ^{1−m₁−m₂}], [Q₂ρ^{1−m₁−m₂}, P₂ρ^{1−2m₂}]].
pub fn pairwise_normal_lifted(spec: &ProblemSpec, xi: f64) -> Mat2 {
    let [m1, m2, _, _] = spec.orders().map(|m| m as i64);
    let [a1p, a1m] = spec.left[0].normal;
    let [a2p, a2m] = spec.left[1].normal;
    let [b1p, b1m] = spec.right[0].normal;
    let [b2p, b2m] = spec.right[1].normal;
    let (s1, s2) = (parity(m1), parity(m2));
    let a = s1 * a1p * a2m - s2 * a1m * a2p;
    let rho = primitives(xi, spec.k0).rho;
    let p = |e: i64| rho.powi(e as i32);
    Mat2::new(
        (s1 * a2m * b1p - s2 * a2p * b1m) * p(1 - 2 * m1),
        s1 * (a1p * b1m - a1m * b1p) * p(1 - m1 - m2),
        s2 * (a2m * b2p - a2p * b2m) * p(1 - m1 - m2),
        (s1 * a1p * b2m - s2 * a1m * b2p) * p(1 - 2 * m2),
    ) / a
}

/// Lifted symbol of an oblique problem with left order m₁ and right order m₂:
/// (−1)^{m₁}ρ^{1−m₁−m₂}[[(−1)^{m₂}b⁺ + b̌⁺z, (−1)^{m₁}(b⁻ + b̌⁻z)], [.. c ..]], z = (−iξ/β)^{m₂}.
pub fn oblique_lifted(spec: &ProblemSpec, xi: f64) -> Mat2 {
    let m1 = spec.left[0].order as i64;
    let m2 = spec.right[0].order;
    let pv = primitives(xi, spec.k0);
    let z = neg_i_pow(m2) * pv.t.powi(m2 as i32);
    let (s1, s2) = (parity(m1), parity(m2 as i64));
    let row = |op: &crate::spec::BoundaryOpSpec| {
        let [p, m] = op.normal;
        let [cp, cm] = op.tangential;
        (s2 * p + cp * z, s1 * (m + cm * z))
    };
    let (b0, b1) = row(&spec.right[0]);
    let (c0, c1) = row(&spec.right[1]);
    Mat2::new(b0, b1, c0, c1) * (s1 * pv.rho.powi((1 - m1 - m2 as i64) as i32))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expansion {
    /// The expansion in its printed form.
    Printed,
    /// The expansion re-derived from Φ₊ adj(Φ₋).
    Rederived,
}

/// β^{mₐ+m_b}(base + both·z^{mₐ+m_b} + first·z^{mₐ} + second·z^{m_b}) with z = −iξ/β.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpandedEntry {
    pub orders: (u32, u32),
    pub base: Complex64,
    pub both: Complex64,
    pub first: Complex64,
    pub second: Complex64,
}

impl ExpandedEntry {
    pub fn eval(&self, beta: Complex64, t: Complex64) -> Complex64 {
        let (ma, mb) = self.orders;
        let z = |m: u32| neg_i_pow(m) * t.powi(m as i32);
        beta.powi((ma + mb) as i32)
            * (self.base + self.both * z(ma + mb) + self.first * z(ma) + self.second * z(mb))
    }

    fn groups(&self) -> [(&'static str, Complex64); 4] {
        [
            ("1", self.base),
            ("z^(ma+mb)", self.both),
            ("z^ma", self.first),
            ("z^mb", self.second),
        ]
    }
}

/// det Φ₋ and the entries A₁₁..A₂₂ of Φ₊ adj(Φ₋) for normal/tangential conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HigherOrderExpansion {
    pub det_minus: ExpandedEntry,
    pub entries: [[ExpandedEntry; 2]; 2],
}

impl HigherOrderExpansion {
    pub fn composed(&self, spec: &ProblemSpec, xi: f64) -> Mat2 {
        let pv = primitives(xi, spec.k0);
        let e = |x: &ExpandedEntry| x.eval(pv.beta, pv.t);
        Mat2::new(
            e(&self.entries[0][0]),
            e(&self.entries[0][1]),
            e(&self.entries[1][0]),
            e(&self.entries[1][1]),
        ) / e(&self.det_minus)
    }
}

struct Coeffs {
    p: Complex64,
    m: Complex64,
    cp: Complex64,
    cm: Complex64,
    order: u32,
}

fn coeffs(op: &crate::spec::BoundaryOpSpec) -> Coeffs {
    Coeffs {
        p: op.normal[0],
        m: op.normal[1],
        cp: op.tangential[0],
        cm: op.tangential[1],
        order: op.order,
    }
}

/// Entries in the first column: right row `b` against left row 2 (`a`).
fn first_column(a: &Coeffs, b: &Coeffs, expansion: Expansion) -> ExpandedEntry {
    let (sa, sb) = (parity(a.order as i64), parity(b.order as i64));
    match expansion {
        Expansion::Printed => ExpandedEntry {
            orders: (a.order, b.order),
            base: sb * a.m * b.p - sa * a.p * b.m,
            both: a.cm * b.cp + a.cp * b.cm,
            first: sb * a.cm * b.p + a.cp * b.m,
            second: a.m * b.cp - sa * a.p * b.cm,
        },
        Expansion::Rederived => ExpandedEntry {
            orders: (a.order, b.order),
            base: sb * b.p * a.m - sa * b.m * a.p,
            both: b.cp * a.cm - b.cm * a.cp,
            first: sb * b.p * a.cm - b.m * a.cp,
            second: b.cp * a.m - sa * b.cm * a.p,
        },
    }
}

/// Entries in the second column: right row `b` against left row 1 (`a`).
/// The printed first-row and second-row expansions differ, so `row` selects which.
fn second_column(a: &Coeffs, b: &Coeffs, row: usize, expansion: Expansion) -> ExpandedEntry {
    let (sa, sb) = (parity(a.order as i64), parity(b.order as i64));
    let rederived = ExpandedEntry {
        orders: (a.order, b.order),
        base: sa * a.p * b.m - sb * b.p * a.m,
        both: a.cp * b.cm - a.cm * b.cp,
        first: a.cp * b.m - sb * b.p * a.cm,
        second: sa * a.p * b.cm - a.m * b.cp,
    };
    match (expansion, row) {
        (Expansion::Rederived, _) | (Expansion::Printed, 1) => rederived,
        (Expansion::Printed, _) => ExpandedEntry {
            orders: (a.order, b.order),
            base: sa * a.p * b.m - sb * a.m * b.p,
            both: a.cp * b.cm - a.m * b.cp,
            first: sb * a.cm * b.p + a.cp * b.m,
            second: sa * a.p * b.cm - a.cm * b.cp,
        },
    }
}

fn det_minus(a1: &Coeffs, a2: &Coeffs, expansion: Expansion) -> ExpandedEntry {
    let (s1, s2) = (parity(a1.order as i64), parity(a2.order as i64));
    let (f1, f2) = match expansion {
        Expansion::Printed => (s1, s2),
        Expansion::Rederived => (1.0, 1.0),
    };
    ExpandedEntry {
        orders: (a1.order, a2.order),
        base: s1 * a1.p * a2.m - s2 * a1.m * a2.p,
        both: a1.cp * a2.cm - a1.cm * a2.cp,
        first: f1 * a1.cp * a2.m - s2 * a1.cm * a2.p,
        second: s1 * a1.p * a2.cm - f2 * a1.m * a2.cp,
    }
}

/// Expanded composed symbol for normal/tangential boundary conditions of any orders.
pub fn higher_order_expansion(spec: &ProblemSpec, expansion: Expansion) -> HigherOrderExpansion {
    let a1 = coeffs(&spec.left[0]);
    let a2 = coeffs(&spec.left[1]);
    let b3 = coeffs(&spec.right[0]);
    let b4 = coeffs(&spec.right[1]);
    HigherOrderExpansion {
        det_minus: det_minus(&a1, &a2, expansion),
        entries: [
            [
                first_column(&a2, &b3, expansion),
                second_column(&a1, &b3, 0, expansion),
            ],
            [
                first_column(&a2, &b4, expansion),
                second_column(&a1, &b4, 1, expansion),
            ],
        ],
    }
}

/// A coefficient group where the printed and re-derived expansions differ.
#[derive(Debug, Clone, PartialEq)]
pub struct TermResidual {
    pub entry: String,
    pub term: &'static str,
    pub printed: Complex64,
    pub rederived: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HigherOrderCheck {
    /// Symbolic residuals: coefficient groups that differ beyond rounding.
    pub residuals: Vec<TermResidual>,
    /// max over sample points of ‖Φ_expansion − Φ_product‖ / ‖Φ_product‖.
    pub printed_error: f64,
    pub rederived_error: f64,
}

impl HigherOrderCheck {
    pub fn printed_agrees(&self, tol: f64) -> bool {
        self.printed_error <= tol
    }
}

fn rel_error(a: &Mat2, b: &Mat2) -> f64 {
    let scale = b.iter().map(|z| z.norm()).fold(0.0, f64::max);
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
        / scale.max(f64::MIN_POSITIVE)
}

/// Compares both expansions with the matrix-product path at the given points.
pub fn cross_check_higher_order(spec: &ProblemSpec, xis: &[f64]) -> Result<HigherOrderCheck, SymbolError> {
    let printed = higher_order_expansion(spec, Expansion::Printed);
    let rederived = higher_order_expansion(spec, Expansion::Rederived);
    let mut residuals = Vec::new();
    let named = [
        ("det", printed.det_minus, rederived.det_minus),
        ("A11", printed.entries[0][0], rederived.entries[0][0]),
        ("A12", printed.entries[0][1], rederived.entries[0][1]),
        ("A21", printed.entries[1][0], rederived.entries[1][0]),
        ("A22", printed.entries[1][1], rederived.entries[1][1]),
    ];
    for (name, p, r) in named {
        for ((term, pc), (_, rc)) in p.groups().into_iter().zip(r.groups()) {
            let scale = pc.norm().max(rc.norm());
            if (pc - rc).norm() > 1e-12 * scale {
                residuals.push(TermResidual {
                    entry: name.to_string(),
                    term,
                    printed: pc,
                    rederived: rc,
                });
            }
        }
    }
    let phi = composed_symbol(spec)?;
    let mut printed_error: f64 = 0.0;
    let mut rederived_error: f64 = 0.0;
    for &xi in xis {
        let product = phi.eval(xi)?;
        printed_error = printed_error.max(rel_error(&printed.composed(spec, xi), &product));
        rederived_error = rederived_error.max(rel_error(&rederived.composed(spec, xi), &product));
    }
    Ok(HigherOrderCheck {
        residuals,
        printed_error,
        rederived_error,
    })
}

/// The closed-form lifted symbol for structured families, if one is available.
pub fn closed_form_lifted(spec: &ProblemSpec, xi: f64) -> Option<Mat2> {
    match spec.family {
        Family::PairwiseNormal => Some(pairwise_normal_lifted(spec, xi)),
        Family::ObliqueRight => Some(oblique_lifted(spec, xi)),
        _ => None,
    }
}

/// det of the closed-form lifted symbol, used by the normal-type tests.
pub fn closed_form_det(spec: &ProblemSpec, xi: f64) -> Option<Complex64> {
    closed_form_lifted(spec, xi).map(|m| det2(&m))
}
