//! Independent oracles for limits, asymptotics and the Fredholm criterion.

mod common;

use junction::asymptotic::extract_asymptotics;
use junction::branch::{rho, t_ratio};
use junction::fredholm::{fredholm_criterion, limits_at_infinity, SymbolLimits};
use junction::linalg::{det2, diag2, frob, inv2, Mat2};
use junction::spec::{BoundaryOpSpec, Family, OpSide, ProblemSpec};
use junction::symbol::lifted_symbol;
use num_complex::Complex64;
use rand::Rng;

use common::*;

/// A mixed-order general spec with tangential terms everywhere they are meaningful.
fn mixed_order<R: Rng>(r: &mut R, orders: [u32; 4]) -> ProblemSpec {
    let k = k0(r);
    let mut make = |m: u32, side, idx| {
        let t = if m == 0 { [ZERO; 2] } else { [cx(r), cx(r)] };
        BoundaryOpSpec::new(m, side, idx, [cx(r), cx(r)], t)
    };
    let left = [make(orders[0], OpSide::Left, 1), make(orders[1], OpSide::Left, 2)];
    let right = [make(orders[2], OpSide::Right, 1), make(orders[3], OpSide::Right, 2)];
    ProblemSpec::new(k, left, right, Family::GeneralHigherOrder).unwrap()
}

fn structured_specs() -> Vec<ProblemSpec> {
    let mut r = rng(21);
    let mut specs = Vec::new();
    for _ in 0..10 {
        let orders = [r.gen_range(0..3), r.gen_range(0..3), r.gen_range(0..3), r.gen_range(0..3)];
        specs.push(mixed_order(&mut r, orders));
        let m = 2 * r.gen_range(0..2);
        specs.push(higher_order(&mut r, m));
        let m1 = r.gen_range(0..3);
        let m2 = (m1 + r.gen_range(1..3)) % 3;
        specs.push(pairwise(&mut r, m1, m2));
        let (m1, m2) = (r.gen_range(0..3), r.gen_range(0..3));
        specs.push(oblique(&mut r, m1, m2));
    }
    specs
}

#[test]
fn exact_limits_match_large_argument_evaluation() {
    let mut worst: f64 = 0.0;
    for spec in structured_specs() {
        let phi0 = lifted_symbol(&spec).unwrap();
        let limits = limits_at_infinity(phi0.asymptotic.as_ref()).unwrap();
        for (xi, exact) in [(-1e8, limits.at_minus_inf), (1e8, limits.at_plus_inf)] {
            let brute = phi0.eval(xi).unwrap();
            worst = worst.max(frob(&(brute - exact)) / frob(&exact));
        }
    }
    assert!(worst < 1e-6, "worst relative deviation {worst:e}");
}

#[test]
fn asymptotic_form_tracks_product_path() {
    let mut worst: f64 = 0.0;
    for spec in structured_specs() {
        let phi0 = lifted_symbol(&spec).unwrap();
        let form = extract_asymptotics(&spec).unwrap();
        for xi in [-1e6, 1e6] {
            let asym = form.eval(rho(xi, spec.k0), t_ratio(xi, spec.k0));
            let product = phi0.eval(xi).unwrap();
            worst = worst.max(frob(&(asym - product)) / frob(&product));
        }
    }
    assert!(worst < 1e-4, "worst relative deviation {worst:e}");
}

fn det_ratio(limits: &SymbolLimits, mu: f64) -> f64 {
    let a = limits.at_minus_inf * Complex64::new(mu, 0.0);
    let b = limits.at_plus_inf * Complex64::new(1.0 - mu, 0.0);
    let m = a + b;
    det2(&m).norm() / (frob(&limits.at_minus_inf) * frob(&limits.at_plus_inf))
}

/// Local minima of |det(μA + (1−μ)B)| on a uniform μ grid, refined by golden section.
fn sampled_zeros(limits: &SymbolLimits) -> Vec<f64> {
    let n = 20_000;
    let values: Vec<f64> = (0..=n).map(|i| det_ratio(limits, i as f64 / n as f64)).collect();
    let mut zeros = Vec::new();
    for i in 1..n {
        if values[i] <= values[i - 1] && values[i] <= values[i + 1] {
            let (mut lo, mut hi) = ((i - 1) as f64 / n as f64, (i + 1) as f64 / n as f64);
            let g = 0.5 * (5f64.sqrt() - 1.0);
            for _ in 0..80 {
                let a = hi - g * (hi - lo);
                let b = lo + g * (hi - lo);
                if det_ratio(limits, a) < det_ratio(limits, b) {
                    hi = b;
                } else {
                    lo = a;
                }
            }
            let mu = 0.5 * (lo + hi);
            if det_ratio(limits, mu) < 1e-10 {
                zeros.push(mu);
            }
        }
    }
    zeros
}

#[test]
fn criterion_roots_match_sampled_determinant_zeros() {
    let mut r = rng(22);
    let mut with_roots = 0;
    for i in 0..300 {
        let a = Mat2::new(cx(&mut r), cx(&mut r), cx(&mut r), cx(&mut r));
        let b = if i % 3 == 0 {
            Mat2::new(cx(&mut r), cx(&mut r), cx(&mut r), cx(&mut r))
        } else {
            let v = Mat2::new(cx(&mut r), cx(&mut r), cx(&mut r), cx(&mut r));
            let Some(v_inv) = inv2(&v, 1e-3) else { continue };
            let lam = Complex64::new(-r.gen_range(0.1..10.0), 0.0);
            a * v * diag2(lam, cx(&mut r) * 2.0) * v_inv
        };
        let limits = SymbolLimits {
            at_minus_inf: a,
            at_plus_inf: b,
        };
        if inv2(&a, 1e-6).is_none() || inv2(&b, 1e-6).is_none() {
            continue;
        }
        let verdict = fredholm_criterion(&limits);
        let sampled = sampled_zeros(&limits);
        with_roots += usize::from(!sampled.is_empty());
        assert_eq!(verdict.critical_mu.len(), sampled.len(), "{verdict:?} vs {sampled:?}");
        for (x, y) in verdict.critical_mu.iter().zip(&sampled) {
            assert!((x - y).abs() < 1e-6, "{x} vs {y}");
        }
    }
    assert!(with_roots > 100, "{with_roots}");
}

#[test]
fn equal_even_orders_have_antisymmetric_limits() {
    let mut r = rng(23);
    for _ in 0..50 {
        let m = 2 * r.gen_range(0..3);
        let spec = higher_order(&mut r, m);
        let form = extract_asymptotics(&spec).unwrap();
        let limits = limits_at_infinity(Some(&form)).unwrap();
        assert_eq!(limits.at_minus_inf, -limits.at_plus_inf);
    }
}
