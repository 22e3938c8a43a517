//! Deterministic spec generators shared by the integration tests.
#![allow(dead_code)]

use junction::asymptotic::extract_asymptotics;
use junction::branch::Wavenumber;
use junction::fredholm::limits_at_infinity;
use junction::linalg::det2;
use junction::spec::{BoundaryOpSpec, Family, OpSide, ProblemSpec};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn cx<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn k0<R: Rng>(rng: &mut R) -> Wavenumber {
    Wavenumber::new(Complex64::new(rng.gen_range(0.2..3.0), rng.gen_range(0.05..2.0))).unwrap()
}

fn op(order: u32, side: OpSide, idx: u8, normal: [Complex64; 2], tangential: [Complex64; 2]) -> BoundaryOpSpec {
    BoundaryOpSpec::new(order, side, idx, normal, tangential)
}

/// All four orders equal to m, random normal and tangential coefficients.
pub fn higher_order<R: Rng>(rng: &mut R, m: u32) -> ProblemSpec {
    let mut make = |side, idx| {
        let t = if m == 0 { [ZERO; 2] } else { [cx(rng), cx(rng)] };
        op(m, side, idx, [cx(rng), cx(rng)], t)
    };
    let left = [make(OpSide::Left, 1), make(OpSide::Left, 2)];
    let right = [make(OpSide::Right, 1), make(OpSide::Right, 2)];
    ProblemSpec::new(k0(rng), left, right, Family::GeneralHigherOrder).unwrap()
}

pub fn pairwise_from(k: Wavenumber, m1: u32, m2: u32, a: [Complex64; 4], b: [Complex64; 4]) -> ProblemSpec {
    ProblemSpec::new(
        k,
        [
            op(m1, OpSide::Left, 1, [a[0], a[1]], [ZERO; 2]),
            op(m2, OpSide::Left, 2, [a[2], a[3]], [ZERO; 2]),
        ],
        [
            op(m1, OpSide::Right, 1, [b[0], b[1]], [ZERO; 2]),
            op(m2, OpSide::Right, 2, [b[2], b[3]], [ZERO; 2]),
        ],
        Family::PairwiseNormal,
    )
    .unwrap()
}

pub fn pairwise<R: Rng>(rng: &mut R, m1: u32, m2: u32) -> ProblemSpec {
    let k = k0(rng);
    let a = [cx(rng), cx(rng), cx(rng), cx(rng)];
    let b = [cx(rng), cx(rng), cx(rng), cx(rng)];
    pairwise_from(k, m1, m2, a, b)
}

/// Right rows (b⁺, b⁻, b̌⁺, b̌⁻) and (c⁺, c⁻, č⁺, č⁻).
pub fn oblique_from(k: Wavenumber, m1: u32, m2: u32, b: [Complex64; 4], c: [Complex64; 4]) -> ProblemSpec {
    ProblemSpec::new(
        k,
        [
            op(m1, OpSide::Left, 1, [ONE, ZERO], [ZERO; 2]),
            op(m1, OpSide::Left, 2, [ZERO, ONE], [ZERO; 2]),
        ],
        [
            op(m2, OpSide::Right, 1, [b[0], b[1]], [b[2], b[3]]),
            op(m2, OpSide::Right, 2, [c[0], c[1]], [c[2], c[3]]),
        ],
        Family::ObliqueRight,
    )
    .unwrap()
}

pub fn oblique<R: Rng>(rng: &mut R, m1: u32, m2: u32) -> ProblemSpec {
    let k = k0(rng);
    let mut row = || {
        let t = if m2 == 0 { [ZERO; 2] } else { [cx(rng), cx(rng)] };
        [cx(rng), cx(rng), t[0], t[1]]
    };
    let (b, c) = (row(), row());
    oblique_from(k, m1, m2, b, c)
}

/// det(μA + (1−μ)B) for the exact limits of a spec.
pub fn criterion_at(spec: &ProblemSpec, mu: f64) -> Option<Complex64> {
    let form = extract_asymptotics(spec).ok()?;
    let l = limits_at_infinity(Some(&form)).ok()?;
    let m = l.at_minus_inf * Complex64::new(mu, 0.0) + l.at_plus_inf * Complex64::new(1.0 - mu, 0.0);
    Some(det2(&m))
}

const MAX_TUNING_ATTEMPTS: usize = 200;

/// Solves for one coefficient x so that the criterion vanishes at μ, by the secant method.
pub fn tune_critical<F>(build: F, x0: Complex64, mu: f64) -> Option<ProblemSpec>
where
    F: Fn(Complex64) -> ProblemSpec,
{
    let f = |x: Complex64| criterion_at(&build(x), mu);
    let (mut xa, mut xb) = (x0, x0 * 1.1 + Complex64::new(0.05, 0.02));
    let (mut fa, mut fb) = (f(xa)?, f(xb)?);
    for _ in 0..100 {
        if fb.norm() < 1e-15 {
            break;
        }
        let xn = xb - fb * (xb - xa) / (fb - fa);
        if !(xn.re.is_finite() && xn.im.is_finite()) {
            return None;
        }
        xa = xb;
        fa = fb;
        xb = xn;
        fb = f(xb)?;
    }
    (fb.norm() < 1e-13).then(|| build(xb))
}

/// Pairwise spec with b₁⁺ tuned so that μ is a critical value.
pub fn critical_pairwise<R: Rng>(rng: &mut R, m1: u32, m2: u32, mu: f64) -> ProblemSpec {
    for _ in 0..MAX_TUNING_ATTEMPTS {
        let k = k0(rng);
        let a = [cx(rng), cx(rng), cx(rng), cx(rng)];
        let b = [cx(rng), cx(rng), cx(rng), cx(rng)];
        let build = |x| pairwise_from(k, m1, m2, a, [x, b[1], b[2], b[3]]);
        if let Some(s) = tune_critical(build, b[0], mu) {
            return s;
        }
    }
    panic!("no critical pairwise spec for orders ({m1}, {m2}) at mu = {mu}");
}

/// Oblique spec with b⁺ tuned so that μ is a critical value.
pub fn critical_oblique<R: Rng>(rng: &mut R, m1: u32, m2: u32, mu: f64) -> ProblemSpec {
    for _ in 0..MAX_TUNING_ATTEMPTS {
        let k = k0(rng);
        let t = |rng: &mut R| if m2 == 0 { ZERO } else { cx(rng) };
        let b = [cx(rng), cx(rng), t(rng), t(rng)];
        let c = [cx(rng), cx(rng), t(rng), t(rng)];
        let build = |x| oblique_from(k, m1, m2, [x, b[1], b[2], b[3]], c);
        if let Some(s) = tune_critical(build, b[0], mu) {
            return s;
        }
    }
    panic!("no critical oblique spec for orders ({m1}, {m2}) at mu = {mu}");
}

/// A labelled spec of the witness corpus.
pub struct CorpusEntry {
    pub cell: &'static str,
    pub spec: ProblemSpec,
}

/// Fixed corpus: five specs for each structured cell, lowest admissible orders.
/// Coefficient-dependent cells mix generic draws with tuned critical members.
pub fn witness_corpus() -> Vec<CorpusEntry> {
    let mut r = rng(0x5eed_0007);
    let mut out = Vec::new();
    let mut push = |cell, spec| out.push(CorpusEntry { cell, spec });
    for i in 0..5 {
        push("higher_order_even", higher_order(&mut r, if i < 3 { 0 } else { 2 }));
    }
    for _ in 0..5 {
        push("pairwise_even_sum", pairwise(&mut r, 0, 2));
    }
    for i in 0..5 {
        let spec = if i < 3 { pairwise(&mut r, 0, 1) } else { critical_pairwise(&mut r, 0, 1, 0.3 + 0.2 * (i - 3) as f64) };
        push("pairwise_odd_sum", spec);
    }
    for _ in 0..5 {
        push("oblique_even_even", oblique(&mut r, 0, 0));
    }
    for i in 0..5 {
        let spec = if i < 3 { oblique(&mut r, 1, 1) } else { critical_oblique(&mut r, 1, 1, 0.35 + 0.3 * (i - 3) as f64) };
        push("oblique_odd_odd", spec);
    }
    for i in 0..5 {
        let spec = if i < 3 { oblique(&mut r, 0, 1) } else { critical_oblique(&mut r, 0, 1, 0.4 + 0.2 * (i - 3) as f64) };
        push("oblique_even_odd", spec);
    }
    for _ in 0..5 {
        push("oblique_odd_even", oblique(&mut r, 1, 0));
    }
    out
}
