//! Small dense helpers for 2×2 complex matrices.

use nalgebra::Matrix2;
use num_complex::Complex64;

pub type Mat2 = Matrix2<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn mat2(a: Complex64, b: Complex64, c_: Complex64, d: Complex64) -> Mat2 {
    Mat2::new(a, b, c_, d)
}

pub fn diag2(a: Complex64, b: Complex64) -> Mat2 {
    Mat2::new(a, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), b)
}

pub fn det2(m: &Mat2) -> Complex64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

/// Frobenius norm.
pub fn frob(m: &Mat2) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(m: &Mat2) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Product of the Euclidean norms of the two rows.
pub fn row_norm_product(m: &Mat2) -> f64 {
    let r0 = (m[(0, 0)].norm_sqr() + m[(0, 1)].norm_sqr()).sqrt();
    let r1 = (m[(1, 0)].norm_sqr() + m[(1, 1)].norm_sqr()).sqrt();
    r0 * r1
}

/// Inverse via the adjugate; `None` when |det| ≤ rel_tol·‖m‖².
pub fn inv2(m: &Mat2, rel_tol: f64) -> Option<Mat2> {
    let d = det2(m);
    let scale = frob(m).powi(2);
    if !(d.norm() > rel_tol * scale) {
        return None;
    }
    Some(Mat2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]) / d)
}

pub fn is_finite(m: &Mat2) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Eigenvalues of a 2×2 matrix from its characteristic polynomial.
///
/// Uses λ = (a+d)/2 ± sqrt(((a−d)/2)² + bc), which avoids cancellation in tr² − 4det.
pub fn eigenvalues2(m: &Mat2) -> [Complex64; 2] {
    let (a, b, cc, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let half_tr = (a + d) * 0.5;
    let half_diff = (a - d) * 0.5;
    let s = (half_diff * half_diff + b * cc).sqrt();
    [half_tr + s, half_tr - s]
}

pub fn to_array(m: &Mat2) -> [[Complex64; 2]; 2] {
    [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]
}

pub fn from_array(a: &[[Complex64; 2]; 2]) -> Mat2 {
    Mat2::new(a[0][0], a[0][1], a[1][0], a[1][1])
}
