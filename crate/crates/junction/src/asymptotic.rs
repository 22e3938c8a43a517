//! Asymptotic normal form of lifted symbols: rational expressions in ρ and t = ξ/β.
//!
//! Each entry of Φ₀ behaves at infinity like Σ c·ρ^p·t^k divided by a common
//! polynomial in t. Limits at ±∞ are exact substitutions ρ = t = ±1.

use num_complex::Complex64;

use crate::branch::{neg_i_pow, parity, Sign};
use crate::linalg::Mat2;
use crate::spec::{BoundaryOpSpec, ProblemSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticTerm {
    pub p: i32,
    pub k: u32,
    pub c: Complex64,
}

/// Σ c·ρ^p·t^k.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AsymptoticEntry {
    pub terms: Vec<AsymptoticTerm>,
}

impl AsymptoticEntry {
    pub fn constant(c: Complex64) -> Self {
        Self {
            terms: vec![AsymptoticTerm { p: 0, k: 0, c }],
        }
    }

    pub fn eval(&self, rho: Complex64, t: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|term| term.c * rho.powi(term.p) * t.powi(term.k as i32))
            .sum()
    }

    /// Value at ρ = t = ±1. Signs are applied by integer parity so that the two
    /// limits of an even expression agree bit for bit.
    pub fn limit(&self, at: Sign) -> Complex64 {
        self.terms
            .iter()
            .map(|term| match at {
                Sign::Plus => term.c,
                Sign::Minus => term.c * parity(term.p as i64 + term.k as i64),
            })
            .sum()
    }
}

/// Entries over an optional common denominator (a polynomial in t, stored with p = 0).
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticForm {
    pub entries: [[AsymptoticEntry; 2]; 2],
    pub denominator: Option<AsymptoticEntry>,
}

impl AsymptoticForm {
    pub fn identity() -> Self {
        let one = AsymptoticEntry::constant(Complex64::new(1.0, 0.0));
        Self {
            entries: [
                [one.clone(), AsymptoticEntry::default()],
                [AsymptoticEntry::default(), one],
            ],
            denominator: None,
        }
    }

    pub fn eval(&self, rho: Complex64, t: Complex64) -> Mat2 {
        let den = self
            .denominator
            .as_ref()
            .map_or(Complex64::new(1.0, 0.0), |d| d.eval(rho, t));
        let e = &self.entries;
        Mat2::new(
            e[0][0].eval(rho, t),
            e[0][1].eval(rho, t),
            e[1][0].eval(rho, t),
            e[1][1].eval(rho, t),
        ) / den
    }

    pub fn limit(&self, at: Sign) -> Mat2 {
        let e = &self.entries;
        let m = Mat2::new(
            e[0][0].limit(at),
            e[0][1].limit(at),
            e[1][0].limit(at),
            e[1][1].limit(at),
        );
        match &self.denominator {
            Some(d) => m / d.limit(at),
            None => m,
        }
    }
}

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum AsymptoticError {
    #[error("leading-order extraction unsupported: {0}")]
    UnsupportedFamily(String),
    #[error("leading-order determinant of the left operators vanishes at {0} infinity")]
    LeadingOrderDegenerate(&'static str),
}

/// Dense polynomial in t, coefficient index = power.
#[derive(Debug, Clone, PartialEq)]
struct TPoly(Vec<Complex64>);

impl TPoly {
    fn zero() -> Self {
        TPoly(Vec::new())
    }

    fn add_term(&mut self, k: usize, c: Complex64) {
        if self.0.len() <= k {
            self.0.resize(k + 1, Complex64::default());
        }
        self.0[k] += c;
    }

    fn mul(&self, other: &TPoly) -> TPoly {
        let mut out = TPoly::zero();
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out.add_term(i + j, a * b);
            }
        }
        out
    }

    fn sub(&self, other: &TPoly) -> TPoly {
        let mut out = self.clone();
        for (k, b) in other.0.iter().enumerate() {
            out.add_term(k, -b);
        }
        out
    }

    fn neg(&self) -> TPoly {
        TPoly(self.0.iter().map(|z| -z).collect())
    }

    fn is_zero(&self) -> bool {
        self.0.iter().all(|z| *z == Complex64::default())
    }

    fn at_unit(&self, at: Sign) -> Complex64 {
        self.0
            .iter()
            .enumerate()
            .map(|(k, c)| match at {
                Sign::Plus => *c,
                Sign::Minus => c * parity(k as i64),
            })
            .sum()
    }

    fn abs_sum(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).sum()
    }

    fn nonzero_terms(&self) -> impl Iterator<Item = (u32, Complex64)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != Complex64::default())
            .map(|(k, c)| (k as u32, *c))
    }
}

/// Leading-order row of Φ± divided by β^m, as polynomials in t for the two banks.
fn leading_row(op: &BoundaryOpSpec) -> Result<[TPoly; 2], AsymptoticError> {
    let mut upper = TPoly::zero();
    let mut lower = TPoly::zero();
    for term in op.leading_terms() {
        let tangential = neg_i_pow(term.tangential);
        let k = term.tangential as usize;
        upper.add_term(k, term.upper * tangential * parity(term.normal as i64));
        lower.add_term(k, term.lower * tangential);
    }
    if upper.is_zero() && lower.is_zero() {
        return Err(AsymptoticError::UnsupportedFamily(format!(
            "order-{} terms of an operator vanish; declare its true order",
            op.order
        )));
    }
    Ok([upper, lower])
}

/// Leading-order asymptotic form of the lifted symbol of `spec`.
///
/// With Φ± = diag(β^{m}) M±(t), entry (i, j) of Φ₀ is
/// ρ^{1−m_{right,i}−m_{left,j}} (M₊ adj M₋)_{ij}(t) / det M₋(t).
pub fn extract_asymptotics(spec: &ProblemSpec) -> Result<AsymptoticForm, AsymptoticError> {
    let [l0, l1] = [leading_row(&spec.left[0])?, leading_row(&spec.left[1])?];
    let [r0, r1] = [leading_row(&spec.right[0])?, leading_row(&spec.right[1])?];
    let minus = [l0, l1];
    let plus = [r0, r1];

    let det = minus[0][0].mul(&minus[1][1]).sub(&minus[0][1].mul(&minus[1][0]));
    let scale = (minus[0][0].abs_sum() + minus[0][1].abs_sum())
        * (minus[1][0].abs_sum() + minus[1][1].abs_sum());
    for (at, label) in [(Sign::Plus, "+"), (Sign::Minus, "-")] {
        if !(det.at_unit(at).norm() > 1e-12 * scale) {
            return Err(AsymptoticError::LeadingOrderDegenerate(label));
        }
    }

    let adj = [
        [minus[1][1].clone(), minus[0][1].neg()],
        [minus[1][0].neg(), minus[0][0].clone()],
    ];
    let orders = spec.orders();
    let constant_det = det.0.iter().skip(1).all(|z| *z == Complex64::default());
    let fold = if constant_det { Some(det.0[0]) } else { None };

    let entry = |i: usize, j: usize| {
        let numerator = plus[i][0].mul(&adj[0][j]);
        let numerator = {
            let mut n = numerator;
            for (k, c) in plus[i][1].mul(&adj[1][j]).0.iter().enumerate() {
                n.add_term(k, *c);
            }
            n
        };
        let p = 1 - orders[2 + i] as i32 - orders[j] as i32;
        AsymptoticEntry {
            terms: numerator
                .nonzero_terms()
                .map(|(k, c)| AsymptoticTerm {
                    p,
                    k,
                    c: fold.map_or(c, |d| c / d),
                })
                .collect(),
        }
    };
    let entries = [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]];
    let denominator = if fold.is_some() {
        None
    } else {
        Some(AsymptoticEntry {
            terms: det
                .nonzero_terms()
                .map(|(k, c)| AsymptoticTerm { p: 0, k, c })
                .collect(),
        })
    };
    Ok(AsymptoticForm {
        entries,
        denominator,
    })
}
