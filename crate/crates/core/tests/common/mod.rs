#![allow(dead_code)]

use adam_apriori::sop::{catalog, Problem};

/// Catalog problems with `d ≤ 8` exercised by the property suites.
pub fn problems() -> Vec<(&'static str, Problem)> {
    vec![
        ("regularized_2d", catalog::regularized_2d()),
        ("mixed_4d", catalog::mixed_4d()),
        ("triangular_8d", catalog::triangular_8d()),
    ]
}

/// Central difference of `f` along coordinate `k`.
pub fn central_diff(f: impl Fn(&[f64]) -> f64, at: &[f64], k: usize, h: f64) -> f64 {
    let mut plus = at.to_vec();
    let mut minus = at.to_vec();
    plus[k] += h;
    minus[k] -= h;
    (f(&plus) - f(&minus)) / (2.0 * h)
}

/// `|a − b| ≤ tol · max(1, |a|, |b|)`.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
