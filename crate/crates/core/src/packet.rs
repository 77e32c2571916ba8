//! Gaussian spectral packets on a Gauss–Legendre k grid.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;

pub const DEFAULT_NODES: usize = 513;
pub const K_FLOOR: f64 = 1e-4;
pub const SPAN: f64 = 5.0;

/// f(k−k0) = exp[−(k−k0)²/2Δk²] sampled on [max(1e-4, k0−5Δk), k0+5Δk].
/// The spectral phase e^{−ik·x0} puts the free centroid at x0 when t = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralPacket {
    pub k0: f64,
    pub dk: f64,
    pub x0: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Chosen so that ∫|c·f|² dk = 1 on the grid.
    pub c: f64,
}

impl SpectralPacket {
    pub fn new(k0: f64, dk: f64) -> Result<Self> {
        Self::with_nodes(k0, dk, DEFAULT_NODES)
    }

    pub fn with_nodes(k0: f64, dk: f64, n: usize) -> Result<Self> {
        if !(k0 > 0.0 && k0.is_finite()) {
            return Err(Error::Domain(format!("k0 must be positive, got {k0}")));
        }
        if !(dk > 0.0 && dk.is_finite()) {
            return Err(Error::Domain(format!("dk must be positive, got {dk}")));
        }
        if n < 2 {
            return Err(Error::Domain("need at least two quadrature nodes".into()));
        }
        let lo = (k0 - SPAN * dk).max(K_FLOOR);
        let hi = k0 + SPAN * dk;
        let (nodes, weights) = gauss_legendre(n, lo, hi);
        let mut p = Self { k0, dk, x0: 0.0, nodes, weights, c: 1.0 };
        let s: f64 = p.nodes.iter().zip(&p.weights).map(|(&k, w)| w * p.f(k).powi(2)).sum();
        p.c = 1.0 / s.sqrt();
        Ok(p)
    }

    pub fn centered_at(mut self, x0: f64) -> Self {
        self.x0 = x0;
        self
    }

    /// Unnormalised gaussian weight.
    pub fn f(&self, k: f64) -> f64 {
        let u = (k - self.k0) / self.dk;
        (-0.5 * u * u).exp()
    }

    /// |c·f(k_j)|² w_j for each node, summing to one.
    pub fn probability_weights(&self) -> Vec<f64> {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&k, w)| w * (self.c * self.f(k)).powi(2))
            .collect()
    }

    /// Quadrature coefficients of Ψ(x,t) = (2π)^{-1/2} ∫ c·f(k)e^{−ikx0} ψ(x;k) e^{−iωt} dk.
    pub fn coefficients(&self) -> Vec<Complex64> {
        let pre = self.c / (2.0 * std::f64::consts::PI).sqrt();
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&k, w)| Complex64::from_polar(pre * w * self.f(k), -k * self.x0))
            .collect()
    }

    /// Weighted mean of g over |c·f|²·extra.
    pub fn spectral_mean<G, W>(&self, mut g: G, mut extra: W) -> Option<f64>
    where
        G: FnMut(usize, f64) -> f64,
        W: FnMut(usize, f64) -> f64,
    {
        let pw = self.probability_weights();
        let mut num = 0.0;
        let mut den = 0.0;
        for (j, (&k, p)) in self.nodes.iter().zip(pw).enumerate() {
            let w = p * extra(j, k);
            num += w * g(j, k);
            den += w;
        }
        (den > 0.0).then(|| num / den)
    }
}
