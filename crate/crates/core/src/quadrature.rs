//! Gauss–Legendre rules and trapezoid sums.

use gauss_quad::legendre::GaussLegendre;
use std::num::NonZeroUsize;
use std::sync::OnceLock;

/// Nodes and weights on [a, b], nodes ascending.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let rule = GaussLegendre::new(NonZeroUsize::new(n.max(1)).unwrap());
    let mut pairs: Vec<(f64, f64)> = rule.as_node_weight_pairs().to_vec();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    pairs.into_iter().map(|(x, w)| (mid + half * x, half * w)).unzip()
}

fn rule16() -> &'static (Vec<f64>, Vec<f64>) {
    static R: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    R.get_or_init(|| gauss_legendre(16, -1.0, 1.0))
}

/// Composite 16-point rule with panels no longer than `panel`.
pub fn composite_nodes(a: f64, b: f64, panel: f64) -> Vec<(f64, f64)> {
    if b <= a {
        return Vec::new();
    }
    let n = ((b - a) / panel).ceil().max(1.0) as usize;
    let h = (b - a) / n as f64;
    let (xs, ws) = rule16();
    let mut out = Vec::with_capacity(16 * n);
    for i in 0..n {
        let lo = a + i as f64 * h;
        let mid = lo + 0.5 * h;
        for (x, w) in xs.iter().zip(ws) {
            out.push((mid + 0.5 * h * x, 0.5 * h * w));
        }
    }
    out
}

pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, panel: f64) -> f64 {
    composite_nodes(a, b, panel).into_iter().map(|(x, w)| w * f(x)).sum()
}

/// Trapezoid rule on a possibly nonuniform grid.
pub fn trapezoid(t: &[f64], y: &[f64]) -> f64 {
    t.windows(2)
        .zip(y.windows(2))
        .map(|(tw, yw)| 0.5 * (tw[1] - tw[0]) * (yw[0] + yw[1]))
        .sum()
}

/// Running trapezoid integral, starting at zero.
pub fn cumulative_trapezoid(t: &[f64], y: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(t.len());
    if !t.is_empty() {
        out.push(0.0);
    }
    for i in 1..t.len() {
        acc += 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
        out.push(acc);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_integrates_polynomials() {
        let (x, w) = gauss_legendre(5, 0.0, 2.0);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(9)).sum();
        assert!((s - 2f64.powi(10) / 10.0).abs() < 1e-11);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn composite_handles_oscillation() {
        let s = integrate(|x| (3.0 * x).cos(), 0.0, 40.0, 2.0);
        assert!((s - (120f64).sin() / 3.0).abs() < 1e-12);
    }

    #[test]
    fn trapezoid_exact_for_lines() {
        let t = [0.0, 0.5, 2.0];
        let y = [1.0, 2.0, 5.0];
        assert!((trapezoid(&t, &y) - 6.0).abs() < 1e-15);
        assert_eq!(cumulative_trapezoid(&t, &y).last().copied(), Some(6.0));
    }
}
