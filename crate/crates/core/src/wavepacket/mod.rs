//! Gaussian packets built by superposing stationary scattering states.
//!
//! Ψ(x,t) = Σ_j a_j ψ(x;k_j) e^{−iω_j t} on the packet's Gauss–Legendre grid,
//! so every evaluation is exact in t and only the k quadrature is approximate.

mod bohm;
mod centroid;
mod checks;
mod flux;

pub use bohm::{
    bohm_transmission_time, bohm_trajectories, bohm_velocity, quantile_seeds, BohmConfig, BohmTimes, Seed,
    SeedStrata, Trajectory,
};
pub use centroid::{centroid_trajectory, fit_line, CentroidSample, LineFit};
pub use checks::{continuity_residual, norm_series, quantum_potential, quantum_potential_profile, ContinuityCheck};
pub use flux::{
    dwell_time_packet, flux_records, flux_series, mean_times, penetration_profile, separated_packet_times,
    ArrivalStats, FluxRecord, MeanTimes, ProfilePoint, SeparatedTimes, TimeGrid, TimeGridSpec, FLUX_FLOOR,
};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::Result;
use crate::packet::SpectralPacket;
use crate::potential::PiecewisePotential;
use crate::scattering::{solve_transfer_matrix, ScatteringState};
use crate::units::UnitSystem;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Which part of the stationary state enters the superposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Channel {
    #[default]
    Full,
    /// e^{ikx} alone: the free incident packet.
    Incident,
    /// amp_r·e^{−ikx} continued over all x.
    Reflected,
}

/// A packet together with the stationary states at its quadrature nodes.
#[derive(Debug, Clone)]
pub struct PacketField {
    pub packet: SpectralPacket,
    pub potential: PiecewisePotential,
    pub units: UnitSystem,
    states: Vec<ScatteringState>,
    coeffs: Vec<Complex64>,
    omegas: Vec<f64>,
}

impl PacketField {
    pub fn new(packet: SpectralPacket, potential: PiecewisePotential, units: UnitSystem) -> Result<Self> {
        let states = packet
            .nodes
            .par_iter()
            .map(|&k| solve_transfer_matrix(&potential, k, &units))
            .collect::<Result<Vec<_>>>()?;
        let coeffs = packet.coefficients();
        let omegas = packet.nodes.iter().map(|&k| units.omega(k)).collect();
        Ok(Self { packet, potential, units, states, coeffs, omegas })
    }

    pub fn states(&self) -> &[ScatteringState] {
        &self.states
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    fn node_values(&self, j: usize, x: f64, channel: Channel) -> (Complex64, Complex64) {
        let st = &self.states[j];
        let k = st.k;
        match channel {
            Channel::Full => st.psi(x),
            Channel::Incident => {
                let e = (I * k * x).exp();
                (e, I * k * e)
            }
            Channel::Reflected => {
                let e = st.amp_r * (-I * k * x).exp();
                (e, -I * k * e)
            }
        }
    }

    /// Time-independent part of Ψ at `x`, ready for fast evaluation in t.
    pub fn probe(&self, x: f64, channel: Channel) -> Probe<'_> {
        let mut psi = Vec::with_capacity(self.coeffs.len());
        let mut dpsi = Vec::with_capacity(self.coeffs.len());
        for (j, c) in self.coeffs.iter().enumerate() {
            let (p, dp) = self.node_values(j, x, channel);
            psi.push(c * p);
            dpsi.push(c * dp);
        }
        Probe { x, psi, dpsi, omegas: &self.omegas, hbar_over_m: self.units.hbar_over_m() }
    }

    /// Ψ(x,t) and ∂Ψ/∂x.
    pub fn evolve(&self, x: f64, t: f64) -> (Complex64, Complex64) {
        self.evolve_channel(x, t, Channel::Full)
    }

    pub fn evolve_channel(&self, x: f64, t: f64, channel: Channel) -> (Complex64, Complex64) {
        let mut psi = Complex64::new(0.0, 0.0);
        let mut dpsi = Complex64::new(0.0, 0.0);
        for (j, (c, &w)) in self.coeffs.iter().zip(&self.omegas).enumerate() {
            let (p, dp) = self.node_values(j, x, channel);
            let ph = c * Complex64::from_polar(1.0, -w * t);
            psi += ph * p;
            dpsi += ph * dp;
        }
        (psi, dpsi)
    }

    /// ρ in Å⁻¹ and J in s⁻¹.
    pub fn density_current(&self, x: f64, t: f64) -> (f64, f64) {
        let (p, dp) = self.evolve(x, t);
        (p.norm_sqr(), self.units.hbar_over_m() * (p.conj() * dp).im)
    }

    /// Spectral transmitted probability Σ|c f T|² w.
    pub fn transmitted_weight(&self) -> f64 {
        self.spectral_sum(|s| s.transmission().powi(2))
    }

    pub fn reflected_weight(&self) -> f64 {
        self.spectral_sum(|s| s.reflection().powi(2))
    }

    /// Σ|c f|² w · g(state), e.g. the spectral average of a stationary time.
    pub fn spectral_sum<G: Fn(&ScatteringState) -> f64>(&self, g: G) -> f64 {
        self.packet.probability_weights().iter().zip(&self.states).map(|(p, s)| p * g(s)).sum()
    }
}

/// Ψ at a fixed x as a function of t.
#[derive(Debug, Clone)]
pub struct Probe<'a> {
    pub x: f64,
    psi: Vec<Complex64>,
    dpsi: Vec<Complex64>,
    omegas: &'a [f64],
    hbar_over_m: f64,
}

/// Phase factors are recomputed exactly this often along a uniform series.
const RESYNC: usize = 512;

impl Probe<'_> {
    pub fn at(&self, t: f64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for ((a, b), &w) in self.psi.iter().zip(&self.dpsi).zip(self.omegas) {
            let ph = Complex64::from_polar(1.0, -w * t);
            p += a * ph;
            dp += b * ph;
        }
        (p, dp)
    }

    pub fn current(&self, t: f64) -> f64 {
        let (p, dp) = self.at(t);
        self.hbar_over_m * (p.conj() * dp).im
    }

    /// J on the uniform grid t0 + i·dt, i < n.
    pub fn current_series(&self, t0: f64, dt: f64, n: usize) -> Vec<f64> {
        let step: Vec<Complex64> = self.omegas.iter().map(|&w| Complex64::from_polar(1.0, -w * dt)).collect();
        let mut ph: Vec<Complex64> = Vec::new();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            if i % RESYNC == 0 {
                let t = t0 + i as f64 * dt;
                ph = self.omegas.iter().map(|&w| Complex64::from_polar(1.0, -w * t)).collect();
            }
            let mut p = Complex64::new(0.0, 0.0);
            let mut dp = Complex64::new(0.0, 0.0);
            for (((a, b), f), s) in self.psi.iter().zip(&self.dpsi).zip(ph.iter_mut()).zip(&step) {
                p += a * *f;
                dp += b * *f;
                *f *= s;
            }
            out.push(self.hbar_over_m * (p.conj() * dp).im);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free_field(dk: f64) -> PacketField {
        let u = UnitSystem::ELECTRON;
        let pk = SpectralPacket::new(u.k_of_e(5.0), dk).unwrap();
        PacketField::new(pk, PiecewisePotential::free(), u).unwrap()
    }

    /// Analytic free gaussian for f = exp[−(k−k0)²/2Δk²], normalised over all k.
    fn analytic_free(k0: f64, dk: f64, x: f64, t: f64, u: &UnitSystem) -> Complex64 {
        let hm = u.hbar_over_m();
        let a = Complex64::new(1.0 / (2.0 * dk * dk), 0.5 * hm * t);
        let c = (std::f64::consts::PI.sqrt() * dk).recip().sqrt();
        let pre = c / (2.0 * std::f64::consts::PI).sqrt();
        let z = Complex64::new(0.0, x) - Complex64::new(0.0, hm * k0 * t);
        let arg = I * k0 * x - I * 0.5 * hm * k0 * k0 * t + z * z / (4.0 * a);
        pre * (std::f64::consts::PI / a).sqrt() * arg.exp()
    }

    #[test]
    fn free_packet_matches_spreading_gaussian() {
        let u = UnitSystem::ELECTRON;
        let f = free_field(0.02);
        let k0 = f.packet.k0;
        let peak = analytic_free(k0, 0.02, 0.0, 0.0, &u).norm();
        for &t in &[-5e-14, 0.0, 3e-14] {
            let xc = u.velocity(k0) * t;
            for dx in [-40.0, 0.0, 25.0] {
                let x = xc + dx;
                let num = f.evolve(x, t).0.norm();
                let ana = analytic_free(k0, 0.02, x, t, &u).norm();
                assert!((num - ana).abs() < 1e-6 * peak, "t={t} x={x} {num} {ana}");
            }
        }
    }

    #[test]
    fn probe_series_matches_direct() {
        let f = free_field(0.02);
        let p = f.probe(3.0, Channel::Full);
        let s = p.current_series(-2e-15, 1e-17, 1200);
        for i in [0, 511, 512, 513, 1199] {
            let t = -2e-15 + i as f64 * 1e-17;
            let d = p.current(t);
            assert!((s[i] - d).abs() <= 1e-9 * d.abs().max(1e3), "{i}");
        }
    }

    #[test]
    fn incident_channel_is_free_motion() {
        let u = UnitSystem::ELECTRON;
        let pk = SpectralPacket::new(u.k_of_e(5.0), 0.02).unwrap();
        let fb = PacketField::new(pk.clone(), PiecewisePotential::square(10.0, 5.0).unwrap(), u).unwrap();
        let ff = PacketField::new(pk, PiecewisePotential::free(), u).unwrap();
        let a = fb.evolve_channel(-7.0, 1e-15, Channel::Incident).0;
        let b = ff.evolve(-7.0, 1e-15).0;
        assert!((a - b).norm() < 1e-14);
    }
}
