//! Matrix Fourier symbols Φ₋, Φ₊, Φ = Φ₊Φ₋⁻¹ and the lifted symbol Φ₀.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::asymptotic::{extract_asymptotics, AsymptoticError, AsymptoticForm};
use crate::branch::{beta, lambda_pm, lambda_power, neg_i_pow, parity, Sign, Wavenumber};
use crate::linalg::{det2, inv2, row_norm_product, Mat2};
use crate::spec::{BoundaryOpSpec, DerivativeTerm, ProblemSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    PhiMinus,
    PhiPlus,
    Composed,
    Lifted,
}

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum SymbolError {
    #[error("determinant of the boundary symbol vanishes identically on the probe grid")]
    DegenerateSymbol,
    #[error("symbol is numerically singular at xi = {0}")]
    SingularAtXi(f64),
    #[error("symbol is already lifted")]
    AlreadyLifted,
    #[error(transparent)]
    Asymptotic(#[from] AsymptoticError),
}

type MatrixFn = Arc<dyn Fn(f64) -> Mat2 + Send + Sync>;

#[derive(Clone)]
enum Evaluator {
    Rows {
        k0: Wavenumber,
        rows: [Vec<DerivativeTerm>; 2],
    },
    Composed {
        plus: Box<MatrixSymbol>,
        minus: Box<MatrixSymbol>,
    },
    Lifted {
        inner: Box<MatrixSymbol>,
        k0: Wavenumber,
        row_exponents: [f64; 2],
        col_exponents: [f64; 2],
    },
    Function(MatrixFn),
}

/// A 2×2 matrix symbol on the real line.
#[derive(Clone)]
pub struct MatrixSymbol {
    evaluator: Evaluator,
    pub r_orders: [f64; 2],
    pub s_orders: [f64; 2],
    pub asymptotic: Option<AsymptoticForm>,
    pub provenance: Provenance,
}

impl fmt::Debug for MatrixSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatrixSymbol")
            .field("provenance", &self.provenance)
            .field("r_orders", &self.r_orders)
            .field("s_orders", &self.s_orders)
            .field("asymptotic", &self.asymptotic.is_some())
            .finish()
    }
}

/// Probe abscissae in units of |k₀| for the identically-vanishing determinant test.
const PROBE: [f64; 12] = [
    -41.0, -7.3, -1.9, -0.6, -0.13, 0.0, 0.21, 0.77, 1.4, 3.9, 17.0, 260.0,
];

impl MatrixSymbol {
    /// Wraps an arbitrary evaluator.
    pub fn from_fn<F>(f: F, r_orders: [f64; 2], s_orders: [f64; 2], provenance: Provenance) -> Self
    where
        F: Fn(f64) -> Mat2 + Send + Sync + 'static,
    {
        Self {
            evaluator: Evaluator::Function(Arc::new(f)),
            r_orders,
            s_orders,
            asymptotic: None,
            provenance,
        }
    }

    pub fn with_asymptotics(mut self, form: AsymptoticForm) -> Self {
        self.asymptotic = Some(form);
        self
    }

    pub fn eval(&self, xi: f64) -> Result<Mat2, SymbolError> {
        match &self.evaluator {
            Evaluator::Rows { k0, rows } => Ok(eval_rows(rows, xi, *k0)),
            Evaluator::Composed { plus, minus } => {
                let m = minus.eval(xi)?;
                if !(det2(&m).norm() > 1e-12 * row_norm_product(&m)) {
                    return Err(SymbolError::SingularAtXi(xi));
                }
                let inv = inv2(&m, 0.0).ok_or(SymbolError::SingularAtXi(xi))?;
                Ok(plus.eval(xi)? * inv)
            }
            Evaluator::Lifted {
                inner,
                k0,
                row_exponents,
                col_exponents,
            } => {
                let phi = inner.eval(xi)?;
                let lm = lambda_pm(xi, *k0, Sign::Minus);
                let lp = lambda_pm(xi, *k0, Sign::Plus);
                let row = row_exponents.map(|w| lambda_power(lm, w));
                let col = col_exponents.map(|w| lambda_power(lp, w));
                Ok(Mat2::from_fn(|i, j| row[i] * phi[(i, j)] * col[j]))
            }
            Evaluator::Function(f) => Ok(f(xi)),
        }
    }
}

/// Σ c (−iξ)^{σ₁}(∓β)^{σ₂}: minus sign of β on the upper bank.
fn eval_rows(rows: &[Vec<DerivativeTerm>; 2], xi: f64, k0: Wavenumber) -> Mat2 {
    let b = beta(xi, k0);
    let x = Complex64::new(xi, 0.0);
    let mut m = Mat2::zeros();
    for (r, terms) in rows.iter().enumerate() {
        for term in terms {
            let tangential = neg_i_pow(term.tangential) * x.powi(term.tangential as i32);
            let normal = b.powi(term.normal as i32);
            m[(r, 0)] += term.upper * tangential * normal * parity(term.normal as i64);
            m[(r, 1)] += term.lower * tangential * normal;
        }
    }
    m
}

fn build_rows(
    ops: &[BoundaryOpSpec; 2],
    k0: Wavenumber,
    provenance: Provenance,
) -> Result<MatrixSymbol, SymbolError> {
    let rows = [ops[0].terms(), ops[1].terms()];
    let degenerate = PROBE.iter().all(|&u| {
        let m = eval_rows(&rows, u * k0.norm(), k0);
        let scale = row_norm_product(&m);
        !(det2(&m).norm() > 1e-12 * scale)
    });
    if degenerate {
        return Err(SymbolError::DegenerateSymbol);
    }
    let orders = [0.5 - ops[0].order as f64, 0.5 - ops[1].order as f64];
    Ok(MatrixSymbol {
        evaluator: Evaluator::Rows { k0, rows },
        r_orders: orders,
        s_orders: orders,
        asymptotic: None,
        provenance,
    })
}

/// Φ₋ from the left operators; row j is built from left operator j.
pub fn build_phi_minus(spec: &ProblemSpec) -> Result<MatrixSymbol, SymbolError> {
    build_rows(&spec.left, spec.k0, Provenance::PhiMinus)
}

/// Φ₊ from the right operators.
pub fn build_phi_plus(spec: &ProblemSpec) -> Result<MatrixSymbol, SymbolError> {
    build_rows(&spec.right, spec.k0, Provenance::PhiPlus)
}

/// Φ = Φ₊Φ₋⁻¹, mapping order r (image orders of Φ₋) to order s (image orders of Φ₊).
pub fn compose_phi(phi_plus: &MatrixSymbol, phi_minus: &MatrixSymbol) -> MatrixSymbol {
    MatrixSymbol {
        r_orders: phi_minus.s_orders,
        s_orders: phi_plus.s_orders,
        evaluator: Evaluator::Composed {
            plus: Box::new(phi_plus.clone()),
            minus: Box::new(phi_minus.clone()),
        },
        asymptotic: None,
        provenance: Provenance::Composed,
    }
}

/// Φ₀ = diag(λ₋^{s₁}, λ₋^{s₂}) Φ diag(λ₊^{−r₁}, λ₊^{−r₂}).
pub fn lift(phi: &MatrixSymbol, k0: Wavenumber) -> Result<MatrixSymbol, SymbolError> {
    if phi.provenance == Provenance::Lifted {
        return Err(SymbolError::AlreadyLifted);
    }
    Ok(MatrixSymbol {
        evaluator: Evaluator::Lifted {
            inner: Box::new(phi.clone()),
            k0,
            row_exponents: phi.s_orders,
            col_exponents: phi.r_orders.map(|r| -r),
        },
        r_orders: [0.0; 2],
        s_orders: [0.0; 2],
        asymptotic: None,
        provenance: Provenance::Lifted,
    })
}

/// The composed symbol Φ of a problem.
pub fn composed_symbol(spec: &ProblemSpec) -> Result<MatrixSymbol, SymbolError> {
    let minus = build_phi_minus(spec)?;
    let plus = build_phi_plus(spec)?;
    Ok(compose_phi(&plus, &minus))
}

/// The lifted symbol Φ₀ with its asymptotic normal form attached.
pub fn lifted_symbol(spec: &ProblemSpec) -> Result<MatrixSymbol, SymbolError> {
    let phi = composed_symbol(spec)?;
    let form = extract_asymptotics(spec)?;
    Ok(lift(&phi, spec.k0)?.with_asymptotics(form))
}
