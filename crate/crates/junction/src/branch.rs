//! Branch kernel: the square-root primitives β, ρ, t and the affine factors λ±.
//!
//! Every primitive is derived from a single branch decision for β, the root of
//! ξ² − k₀² with positive real part on the real line.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Complex wavenumber with strictly positive real and imaginary parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Complex64", into = "Complex64")]
pub struct Wavenumber(Complex64);

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum WavenumberError {
    #[error("Re k0 must be positive (got {0})")]
    NonPositiveReal(f64),
    #[error("Im k0 must be positive (got {0})")]
    NonPositiveImag(f64),
    #[error("k0 must be finite")]
    NotFinite,
}

impl Wavenumber {
    pub fn new(k0: Complex64) -> Result<Self, WavenumberError> {
        if !k0.re.is_finite() || !k0.im.is_finite() {
            return Err(WavenumberError::NotFinite);
        }
        if k0.im <= 0.0 {
            return Err(WavenumberError::NonPositiveImag(k0.im));
        }
        if k0.re <= 0.0 {
            return Err(WavenumberError::NonPositiveReal(k0.re));
        }
        Ok(Self(k0))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }

    pub fn norm(self) -> f64 {
        self.0.norm()
    }
}

impl TryFrom<Complex64> for Wavenumber {
    type Error = WavenumberError;
    fn try_from(k0: Complex64) -> Result<Self, Self::Error> {
        Wavenumber::new(k0)
    }
}

impl From<Wavenumber> for Complex64 {
    fn from(k: Wavenumber) -> Self {
        k.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

/// λ±(ξ) = ξ ± k₀.
pub fn lambda_pm(xi: f64, k0: Wavenumber, sign: Sign) -> Complex64 {
    match sign {
        Sign::Plus => Complex64::new(xi, 0.0) + k0.0,
        Sign::Minus => Complex64::new(xi, 0.0) - k0.0,
    }
}

/// β(ξ) = (ξ² − k₀²)^{1/2} with Re β > 0 on ℝ.
///
/// Evaluated as the principal root of λ₋λ₊, whose imaginary part is −2·Re k₀·Im k₀ < 0
/// for every real ξ, so the principal branch is continuous on ℝ.
pub fn beta(xi: f64, k0: Wavenumber) -> Complex64 {
    (lambda_pm(xi, k0, Sign::Minus) * lambda_pm(xi, k0, Sign::Plus)).sqrt()
}

/// ρ(ξ) = β(ξ)/λ₊(ξ), a square root of λ₋/λ₊ sharing the branch of β.
pub fn rho(xi: f64, k0: Wavenumber) -> Complex64 {
    beta(xi, k0) / lambda_pm(xi, k0, Sign::Plus)
}

/// t(ξ) = ξ/β(ξ).
pub fn t_ratio(xi: f64, k0: Wavenumber) -> Complex64 {
    Complex64::new(xi, 0.0) / beta(xi, k0)
}

/// All primitives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimitiveValue {
    pub xi: f64,
    pub beta: Complex64,
    pub rho: Complex64,
    pub t: Complex64,
    pub lambda_plus: Complex64,
    pub lambda_minus: Complex64,
}

pub fn primitives(xi: f64, k0: Wavenumber) -> PrimitiveValue {
    let lambda_plus = lambda_pm(xi, k0, Sign::Plus);
    let lambda_minus = lambda_pm(xi, k0, Sign::Minus);
    let beta = (lambda_minus * lambda_plus).sqrt();
    PrimitiveValue {
        xi,
        beta,
        rho: beta / lambda_plus,
        t: Complex64::new(xi, 0.0) / beta,
        lambda_plus,
        lambda_minus,
    }
}

/// λ^w for λ = λ±(ξ) off the real axis.
///
/// Half-integer and integer exponents use sqrt and integer powers; other real
/// exponents fall back to the principal power, which is continuous because λ±
/// stays in an open half-plane.
pub fn lambda_power(lambda: Complex64, w: f64) -> Complex64 {
    let twice = 2.0 * w;
    if (twice - twice.round()).abs() < 1e-12 {
        let n = twice.round() as i64;
        if n % 2 == 0 {
            lambda.powi((n / 2) as i32)
        } else {
            lambda.sqrt() * lambda.powi(((n - 1) / 2) as i32)
        }
    } else {
        lambda.powf(w)
    }
}

/// (−i)^n for integer n ≥ 0 by lookup.
pub fn neg_i_pow(n: u32) -> Complex64 {
    match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// i^n for integer n ≥ 0 by lookup.
pub fn i_pow(n: u32) -> Complex64 {
    match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// (−1)^n as ±1.
pub fn parity(n: i64) -> f64 {
    if n.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}
