//! Two-sample Kolmogorov–Smirnov comparison of degree sequences.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsResult {
    /// Largest vertical gap between the two empirical CDFs.
    #[serde(rename = "d")]
    pub d_stat: f64,
    #[serde(rename = "p")]
    pub p_value: f64,
    pub n_a: usize,
    pub n_b: usize,
}

/// Sup-norm distance between the empirical CDFs of two sorted samples.
/// Ties are consumed together on both sides before the gap is measured.
fn sup_gap<T: Ord>(a: &[T], b: &[T]) -> f64 {
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0f64;
    while i < a.len() && j < b.len() {
        let v = if a[i] <= b[j] { &a[i] } else { &b[j] };
        while i < a.len() && a[i] == *v {
            i += 1;
        }
        while j < b.len() && b[j] == *v {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

/// Asymptotic Kolmogorov survival function
/// `Q(λ) = 2 Σ_{k≥1} (-1)^{k-1} exp(-2 k² λ²)`, summed until a term drops
/// below 1e-10.
///
/// Below λ = 1.18 the alternating series converges slowly and its rounding
/// noise breaks monotonicity, so the equivalent theta-function form
/// `1 - (√(2π)/λ) Σ_{k≥1} exp(-(2k-1)² π² / (8λ²))` is used instead.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        let c = -std::f64::consts::PI * std::f64::consts::PI / (8.0 * lambda * lambda);
        let mut sum = 0.0;
        let mut k = 1.0f64;
        loop {
            let odd = 2.0 * k - 1.0;
            let term = (c * odd * odd).exp();
            sum += term;
            if term < 1e-16 {
                break;
            }
            k += 1.0;
        }
        return (1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * sum).clamp(0.0, 1.0);
    }
    let a = -2.0 * lambda * lambda;
    let mut sum = 0.0;
    let mut sign = 1.0;
    let mut k = 1.0f64;
    loop {
        let term = (a * k * k).exp();
        sum += sign * term;
        if term < 1e-10 {
            break;
        }
        sign = -sign;
        k += 1.0;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// p-value for statistic `d` with sample sizes `n_a`, `n_b`, using the
/// effective size `n_e = n_a n_b / (n_a + n_b)` and
/// `λ = (√n_e + 0.12 + 0.11/√n_e) d`.
pub fn ks_p_value(d: f64, n_a: usize, n_b: usize) -> f64 {
    if d <= 0.0 {
        return 1.0;
    }
    let ne = (n_a as f64 * n_b as f64) / (n_a + n_b) as f64;
    let sq = ne.sqrt();
    kolmogorov_q((sq + 0.12 + 0.11 / sq) * d)
}

pub fn ks_two_sample<T: Ord + Clone>(a: &[T], b: &[T]) -> Result<KsResult> {
    if a.is_empty() {
        return Err(Error::EmptySample("a"));
    }
    if b.is_empty() {
        return Err(Error::EmptySample("b"));
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    let d = sup_gap(&a, &b);
    Ok(KsResult {
        d_stat: d,
        p_value: ks_p_value(d, a.len(), b.len()),
        n_a: a.len(),
        n_b: b.len(),
    })
}
