//! Boundary-operator and problem specifications.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::branch::{Wavenumber, WavenumberError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    GeneralHigherOrder,
    PairwiseNormal,
    ObliqueRight,
    GeneralMultiindex,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::GeneralHigherOrder => "general_higher_order",
            Family::PairwiseNormal => "pairwise_normal",
            Family::ObliqueRight => "oblique_right",
            Family::GeneralMultiindex => "general_multiindex",
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OpSide {
    Left,
    Right,
}

/// One term c·∂_tangential^{σ₁}∂_normal^{σ₂} with separate coefficients on the two banks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeTerm {
    pub tangential: u32,
    pub normal: u32,
    pub upper: Complex64,
    pub lower: Complex64,
}

impl DerivativeTerm {
    pub fn order(&self) -> u32 {
        self.tangential + self.normal
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryOpSpec {
    pub order: u32,
    pub side: OpSide,
    pub bank_index: u8,
    /// (c⁺, c⁻) multiplying the order-m normal-derivative traces.
    pub normal: [Complex64; 2],
    /// (č⁺, č⁻) multiplying the order-m tangential-derivative traces.
    pub tangential: [Complex64; 2],
    pub general_table: Option<Vec<DerivativeTerm>>,
}

impl BoundaryOpSpec {
    pub fn new(
        order: u32,
        side: OpSide,
        bank_index: u8,
        normal: [Complex64; 2],
        tangential: [Complex64; 2],
    ) -> Self {
        Self {
            order,
            side,
            bank_index,
            normal,
            tangential,
            general_table: None,
        }
    }

    pub fn with_table(order: u32, side: OpSide, bank_index: u8, table: Vec<DerivativeTerm>) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self {
            order,
            side,
            bank_index,
            normal: [zero; 2],
            tangential: [zero; 2],
            general_table: Some(table),
        }
    }

    /// All terms of the operator. Without a table these are the (0,m) normal and
    /// (m,0) tangential terms.
    pub fn terms(&self) -> Vec<DerivativeTerm> {
        match &self.general_table {
            Some(t) => t.clone(),
            None => vec![
                DerivativeTerm {
                    tangential: 0,
                    normal: self.order,
                    upper: self.normal[0],
                    lower: self.normal[1],
                },
                DerivativeTerm {
                    tangential: self.order,
                    normal: 0,
                    upper: self.tangential[0],
                    lower: self.tangential[1],
                },
            ],
        }
    }

    /// Terms of total order equal to `order`.
    pub fn leading_terms(&self) -> Vec<DerivativeTerm> {
        self.terms()
            .into_iter()
            .filter(|t| t.order() == self.order)
            .collect()
    }

    pub fn has_tangential(&self) -> bool {
        self.terms()
            .iter()
            .any(|t| t.tangential > 0 && (t.upper != Complex64::default() || t.lower != Complex64::default()))
    }

    fn validate(&self) -> Result<(), SpecError> {
        let label = self.label();
        if let Some(table) = &self.general_table {
            if let Some(t) = table.iter().find(|t| t.order() > self.order) {
                return Err(SpecError::MultiIndexExceedsOrder {
                    op: label,
                    sigma: (t.tangential, t.normal),
                    order: self.order,
                });
            }
        }
        let terms = self.terms();
        if terms
            .iter()
            .any(|t| !(t.upper.re.is_finite() && t.upper.im.is_finite() && t.lower.re.is_finite() && t.lower.im.is_finite()))
        {
            return Err(SpecError::NonFiniteCoefficient { op: label });
        }
        if terms
            .iter()
            .all(|t| t.upper == Complex64::default() && t.lower == Complex64::default())
        {
            return Err(SpecError::AllCoefficientsZero { op: label });
        }
        Ok(())
    }

    fn label(&self) -> String {
        let side = match self.side {
            OpSide::Left => "left",
            OpSide::Right => "right",
        };
        format!("{side}[{}]", self.bank_index)
    }
}

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum SpecError {
    #[error(transparent)]
    Wavenumber(#[from] WavenumberError),
    #[error("{op}: multi-index {sigma:?} exceeds the operator order {order}")]
    MultiIndexExceedsOrder {
        op: String,
        sigma: (u32, u32),
        order: u32,
    },
    #[error("{op}: at least one coefficient must be nonzero")]
    AllCoefficientsZero { op: String },
    #[error("{op}: coefficients must be finite")]
    NonFiniteCoefficient { op: String },
    #[error("family {family} requires {rule}")]
    FamilyRule { family: Family, rule: &'static str },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub k0: Wavenumber,
    pub left: [BoundaryOpSpec; 2],
    pub right: [BoundaryOpSpec; 2],
    pub family: Family,
}

impl ProblemSpec {
    pub fn new(
        k0: Wavenumber,
        left: [BoundaryOpSpec; 2],
        right: [BoundaryOpSpec; 2],
        family: Family,
    ) -> Result<Self, SpecError> {
        let spec = Self {
            k0,
            left,
            right,
            family,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Orders (m₁, m₂, m₃, m₄): left ops then right ops.
    pub fn orders(&self) -> [u32; 4] {
        [
            self.left[0].order,
            self.left[1].order,
            self.right[0].order,
            self.right[1].order,
        ]
    }

    /// Image Sobolev orders (1/2 − m₃, 1/2 − m₄).
    pub fn image_orders(&self) -> [f64; 2] {
        [0.5 - self.right[0].order as f64, 0.5 - self.right[1].order as f64]
    }

    /// Domain Sobolev orders (1/2 − m₁, 1/2 − m₂).
    pub fn domain_orders(&self) -> [f64; 2] {
        [0.5 - self.left[0].order as f64, 0.5 - self.left[1].order as f64]
    }

    fn validate(&self) -> Result<(), SpecError> {
        for op in self.left.iter().chain(self.right.iter()) {
            op.validate()?;
        }
        let fail = |rule| {
            Err(SpecError::FamilyRule {
                family: self.family,
                rule,
            })
        };
        let no_tables = self
            .left
            .iter()
            .chain(self.right.iter())
            .all(|op| op.general_table.is_none());
        let [m1, m2, m3, m4] = self.orders();
        match self.family {
            Family::GeneralMultiindex => {}
            Family::GeneralHigherOrder => {
                if !no_tables {
                    return fail("normal/tangential coefficients only (no general table)");
                }
            }
            Family::PairwiseNormal => {
                if !no_tables {
                    return fail("normal/tangential coefficients only (no general table)");
                }
                let zero = Complex64::default();
                if self
                    .left
                    .iter()
                    .chain(self.right.iter())
                    .any(|op| op.tangential != [zero; 2])
                {
                    return fail("tangential coefficients equal to zero");
                }
                if m3 != m1 || m4 != m2 {
                    return fail("right orders equal to left orders (m3 = m1, m4 = m2)");
                }
                if m1 == m2 {
                    return fail("distinct orders m1 != m2");
                }
            }
            Family::ObliqueRight => {
                if !no_tables {
                    return fail("normal/tangential coefficients only (no general table)");
                }
                let one = Complex64::new(1.0, 0.0);
                let zero = Complex64::default();
                let unit = |op: &BoundaryOpSpec, n: [Complex64; 2]| {
                    op.normal == n && op.tangential == [zero; 2]
                };
                let left_ok = unit(&self.left[0], [one, zero]) && unit(&self.left[1], [zero, one]);
                if !left_ok {
                    return fail(
                        "left ops to be pure normal derivatives on the upper and lower bank with unit coefficients",
                    );
                }
                if m1 != m2 || m3 != m4 {
                    return fail("equal left orders (m1 = m2) and equal right orders (m3 = m4)");
                }
            }
        }
        Ok(())
    }
}
