//! Finite sections of the block-Toeplitz operator of a lifted symbol.
//!
//! The real line is compactified onto the unit circle by ξ = scale·tan(θ/2), so the
//! jump at infinity sits at θ = π. The smallest singular value of growing sections
//! is numerical evidence for (or against) a closed range.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::fredholm::{limits_at_infinity, AnalysisError};
use crate::linalg::Mat2;
use crate::symbol::{MatrixSymbol, SymbolError};

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum WitnessError {
    #[error("sample count {0} is not a power of two >= 4")]
    InvalidSampleCount(usize),
    #[error("section size {n} exceeds a quarter of the {samples} samples")]
    SizeMismatch { n: usize, samples: usize },
    #[error("witness sizes must be strictly increasing within [8, 1024] (got {0:?})")]
    InvalidSizes(Vec<usize>),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Limits(#[from] AnalysisError),
}

/// A 2×2 symbol sampled at θ_k = 2πk/N, k = 0..N.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSymbol {
    pub values: Vec<Mat2>,
    pub scale: f64,
}

/// θ_k folded into (−π, π].
pub fn circle_angle(k: usize, n: usize) -> f64 {
    let theta = 2.0 * PI * k as f64 / n as f64;
    if 2 * k > n {
        theta - 2.0 * PI
    } else {
        theta
    }
}

/// Samples Φ₀ on the circle; θ = π receives the average of the two limits.
pub fn circle_samples(phi0: &MatrixSymbol, n_samples: usize, scale: f64) -> Result<SampledSymbol, WitnessError> {
    if n_samples < 4 || !n_samples.is_power_of_two() {
        return Err(WitnessError::InvalidSampleCount(n_samples));
    }
    let limits = limits_at_infinity(phi0.asymptotic.as_ref())?;
    let values = (0..n_samples)
        .map(|k| {
            if 2 * k == n_samples {
                Ok((limits.at_minus_inf + limits.at_plus_inf) * Complex64::new(0.5, 0.0))
            } else {
                phi0.eval(scale * (0.5 * circle_angle(k, n_samples)).tan())
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SampledSymbol { values, scale })
}

impl SampledSymbol {
    /// From samples of a function of θ, for symbols given directly on the circle.
    pub fn from_circle_fn<F: Fn(f64) -> Mat2>(f: F, n_samples: usize) -> Result<Self, WitnessError> {
        if n_samples < 4 || !n_samples.is_power_of_two() {
            return Err(WitnessError::InvalidSampleCount(n_samples));
        }
        Ok(Self {
            values: (0..n_samples).map(|k| f(circle_angle(k, n_samples))).collect(),
            scale: 1.0,
        })
    }

    /// Discrete Fourier coefficients a_j = (1/N) Σ_k Φ(θ_k) e^{−ijθ_k}, indexed mod N.
    pub fn fourier(&self) -> BlockFourier {
        let n = self.values.len();
        let fft = FftPlanner::new().plan_fft_forward(n);
        let mut coeffs = vec![Mat2::zeros(); n];
        for r in 0..2 {
            for s in 0..2 {
                let mut buf: Vec<Complex64> = self.values.iter().map(|m| m[(r, s)]).collect();
                fft.process(&mut buf);
                for (j, v) in buf.into_iter().enumerate() {
                    coeffs[j][(r, s)] = v / n as f64;
                }
            }
        }
        BlockFourier { coeffs }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockFourier {
    coeffs: Vec<Mat2>,
}

impl BlockFourier {
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of index j (negative indices wrap).
    pub fn coefficient(&self, j: i64) -> Mat2 {
        let n = self.coeffs.len() as i64;
        self.coeffs[j.rem_euclid(n) as usize]
    }
}

/// The 2n×2n section with block (j, k) equal to the coefficient of index j − k.
pub fn toeplitz_section(fourier: &BlockFourier, n: usize) -> Result<DMatrix<Complex64>, WitnessError> {
    if 4 * n > fourier.len() {
        return Err(WitnessError::SizeMismatch {
            n,
            samples: fourier.len(),
        });
    }
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        for k in 0..n {
            let a = fourier.coefficient(j as i64 - k as i64);
            for r in 0..2 {
                for s in 0..2 {
                    m[(2 * j + r, 2 * k + s)] = a[(r, s)];
                }
            }
        }
    }
    Ok(m)
}

/// Smallest singular value of a complex matrix.
pub fn sigma_min(m: DMatrix<Complex64>) -> f64 {
    m.singular_values().iter().copied().fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    BoundedBelow,
    Decaying,
    Inconclusive,
}

/// Heuristic classification thresholds; calibrated once on a fixed corpus and frozen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// Decaying requires σ(n_max)/σ(n_min) below this.
    pub decay_ratio: f64,
    /// Decaying also requires the fitted log-log slope below this.
    pub decay_slope: f64,
    /// Bounded below requires the ratio above this.
    pub bounded_ratio: f64,
}

pub const FROZEN_THRESHOLDS: Thresholds = Thresholds {
    decay_ratio: 0.1,
    decay_slope: -0.3,
    bounded_ratio: 0.5,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessConfig {
    pub n_samples: usize,
    /// Compactification scale; |k₀| is the usual choice.
    pub scale: f64,
    pub thresholds: Thresholds,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessCurve {
    pub sizes: Vec<usize>,
    pub sigma_min: Vec<f64>,
    pub classification: Classification,
    pub fit_exponent: f64,
    pub ratio: f64,
    pub thresholds: Thresholds,
}

/// Least-squares slope of ln y against ln x.
pub fn loglog_slope(x: &[usize], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|&v| (v as f64).ln()).collect();
    let ly: Vec<f64> = y.iter().map(|&v| v.max(f64::MIN_POSITIVE).ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

pub fn classify(ratio: f64, slope: f64, t: &Thresholds) -> Classification {
    if ratio < t.decay_ratio && slope < t.decay_slope {
        Classification::Decaying
    } else if ratio > t.bounded_ratio {
        Classification::BoundedBelow
    } else {
        Classification::Inconclusive
    }
}

fn validate_sizes(sizes: &[usize]) -> Result<(), WitnessError> {
    let in_range = sizes.iter().all(|n| (8..=1024).contains(n));
    let increasing = sizes.windows(2).all(|w| w[0] < w[1]);
    if sizes.len() < 2 || !in_range || !increasing {
        return Err(WitnessError::InvalidSizes(sizes.to_vec()));
    }
    Ok(())
}

/// σ_min curve from pre-sampled data.
pub fn witness_sampled(
    samples: &SampledSymbol,
    sizes: &[usize],
    thresholds: Thresholds,
) -> Result<WitnessCurve, WitnessError> {
    validate_sizes(sizes)?;
    let fourier = samples.fourier();
    let sigma = sizes
        .iter()
        .map(|&n| toeplitz_section(&fourier, n).map(sigma_min))
        .collect::<Result<Vec<_>, _>>()?;
    let ratio = sigma[sigma.len() - 1] / sigma[0];
    let ratio = if ratio.is_nan() { 0.0 } else { ratio };
    let fit_exponent = loglog_slope(sizes, &sigma);
    Ok(WitnessCurve {
        sizes: sizes.to_vec(),
        classification: classify(ratio, fit_exponent, &thresholds),
        sigma_min: sigma,
        fit_exponent,
        ratio,
        thresholds,
    })
}

/// σ_min of growing finite sections of the lifted symbol's Toeplitz operator.
pub fn witness(phi0: &MatrixSymbol, sizes: &[usize], config: &WitnessConfig) -> Result<WitnessCurve, WitnessError> {
    validate_sizes(sizes)?;
    let samples = circle_samples(phi0, config.n_samples, config.scale)?;
    witness_sampled(&samples, sizes, config.thresholds)
}
