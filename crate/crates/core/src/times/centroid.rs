use super::phase::K_STEP;
use super::richardson;
use crate::error::{Error, Result};
use crate::packet::SpectralPacket;
use crate::potential::PiecewisePotential;
use crate::scattering::solve_transfer_matrix;
use crate::units::UnitSystem;

/// Spectral averages feeding the centroid times. Lengths in Å, wavenumbers in Å⁻¹.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketSpectrumSummary {
    pub k0: f64,
    pub dk: f64,
    pub x0: f64,
    /// Window faces the times refer to.
    pub x_i: f64,
    pub x_f: f64,
    pub mean_k_in: f64,
    pub mean_k_t: Option<f64>,
    pub mean_k_r: Option<f64>,
    pub mean_alpha_prime_t: Option<f64>,
    pub mean_beta_prime_r: Option<f64>,
    /// ∫|fT|² with ∫|f|² = 1.
    pub transmitted_weight: f64,
    pub reflected_weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CentroidTimes {
    pub tau_t: f64,
    /// `None` without a reflected channel.
    pub tau_r: Option<f64>,
}

/// Weights below this fraction of the incident norm count as absent.
const WEIGHT_FLOOR: f64 = 1e-30;

/// Summary with the window faces on the potential's own edges.
pub fn summarize_spectrum(
    packet: &SpectralPacket,
    potential: &PiecewisePotential,
    units: &UnitSystem,
) -> Result<PacketSpectrumSummary> {
    summarize_spectrum_window(packet, potential, potential.x_left(), potential.x_right(), units)
}

pub fn summarize_spectrum_window(
    packet: &SpectralPacket,
    potential: &PiecewisePotential,
    x_i: f64,
    x_f: f64,
    units: &UnitSystem,
) -> Result<PacketSpectrumSummary> {
    if x_i > potential.x_left() || x_f < potential.x_right() {
        return Err(Error::Domain("window faces must enclose the potential".into()));
    }
    let pw = packet.probability_weights();
    let mut s = [0.0; 9];
    for (&k, w) in packet.nodes.iter().zip(pw) {
        let st = solve_transfer_matrix(potential, k, units)?;
        let t2 = st.transmission().powi(2);
        let r2 = st.reflection().powi(2);
        let h = K_STEP * k;
        let ap = if t2 > 0.0 {
            richardson(|kk| Ok(solve_transfer_matrix(potential, kk, units)?.alpha()), k, h, true)?
        } else {
            0.0
        };
        let bp = if r2 > 0.0 {
            richardson(|kk| Ok(solve_transfer_matrix(potential, kk, units)?.beta()), k, h, true)?
        } else {
            0.0
        };
        let vals = [w, w * k, w * t2, w * t2 * k, w * t2 * ap, w * r2, w * r2 * k, w * r2 * bp, 0.0];
        for (a, v) in s.iter_mut().zip(vals) {
            *a += v;
        }
    }
    let ratio = |n: f64, d: f64| (d > WEIGHT_FLOOR * s[0]).then(|| n / d);
    Ok(PacketSpectrumSummary {
        k0: packet.k0,
        dk: packet.dk,
        x0: packet.x0,
        x_i,
        x_f,
        mean_k_in: s[1] / s[0],
        mean_k_t: ratio(s[3], s[2]),
        mean_alpha_prime_t: ratio(s[4], s[2]),
        mean_k_r: ratio(s[6], s[5]),
        mean_beta_prime_r: ratio(s[7], s[5]),
        transmitted_weight: s[2] / s[0],
        reflected_weight: s[5] / s[0],
    })
}

/// Centroid transmission and reflection times between the window faces:
/// τ_T = (m/ħ)[(x_f − x0 + ⟨α'⟩_T)/⟨k⟩_T − (x_i − x0)/⟨k⟩_in],
/// τ_R = (m/ħ)[(⟨β'⟩_R − x0 − x_i)/⟨k⟩_R − (x_i − x0)/⟨k⟩_in].
pub fn centroid_times(summary: &PacketSpectrumSummary, units: &UnitSystem) -> Result<CentroidTimes> {
    let hm = units.hbar_over_m();
    let s = summary;
    let (kt, ap) = match (s.mean_k_t, s.mean_alpha_prime_t) {
        (Some(kt), Some(ap)) => (kt, ap),
        _ => return Err(Error::Undefined("no transmitted weight".into())),
    };
    let t_in = (s.x_i - s.x0) / (hm * s.mean_k_in);
    let tau_t = (s.x_f - s.x0 + ap) / (hm * kt) - t_in;
    let tau_r = match (s.mean_k_r, s.mean_beta_prime_r) {
        (Some(kr), Some(bp)) => Some((bp - s.x0 - s.x_i) / (hm * kr) - t_in),
        _ => None,
    };
    Ok(CentroidTimes { tau_t, tau_r })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_packet_is_ballistic() {
        let u = UnitSystem::ELECTRON;
        let pk = SpectralPacket::new(1.2, 0.02).unwrap().centered_at(-30.0);
        let s = summarize_spectrum_window(&pk, &PiecewisePotential::free(), -5.0, 15.0, &u).unwrap();
        assert_eq!(s.mean_alpha_prime_t, Some(0.0));
        let c = centroid_times(&s, &u).unwrap();
        assert!((c.tau_t / (20.0 / (u.hbar_over_m() * s.mean_k_in)) - 1.0).abs() < 1e-12);
        assert!(c.tau_r.is_none());
    }

    #[test]
    fn narrow_packet_approaches_phase_time() {
        let u = UnitSystem::ELECTRON;
        let p = crate::scattering::SquareBarrierParams::new(10.0, 5.0).unwrap();
        let k0 = u.k_of_e(5.0);
        let pk = SpectralPacket::new(k0, 0.005).unwrap();
        let s = summarize_spectrum(&pk, &p.potential(), &u).unwrap();
        let c = centroid_times(&s, &u).unwrap();
        let ph = super::super::phase_time_closed(&p, k0, &u);
        assert!((c.tau_t / ph - 1.0).abs() < 1e-2, "{} {}", c.tau_t, ph);
        assert!((c.tau_r.unwrap() / ph - 1.0).abs() < 1e-2);
    }

    #[test]
    fn opaque_without_transmission_is_undefined() {
        let u = UnitSystem::ELECTRON;
        let pk = SpectralPacket::new(0.5, 0.01).unwrap();
        let s = summarize_spectrum(&pk, &PiecewisePotential::step(10.0), &u).unwrap();
        assert!(centroid_times(&s, &u).is_err());
    }
}
