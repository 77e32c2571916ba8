use super::check_k;
use crate::error::{Error, Result};
use crate::scattering::SquareBarrierParams;
use crate::units::UnitSystem;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ButtikerLandauer {
    /// md/(ħκ).
    pub tau_t: f64,
    /// ħk/(V0κ).
    pub tau_r: f64,
    /// Relative sideband intensities at E ± ħω.
    pub i_plus: f64,
    pub i_minus: f64,
    /// (I₊ − I₋)/(I₊ + I₋) = tanh(ωτ_T).
    pub band_ratio: f64,
    /// False when ħω or δV is not small against E and V0 − E, or E > V0.
    pub valid: bool,
}

/// (e^{x} − 1)/x with the x → 0 limit.
fn expm1_ratio(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.exp_m1() / x
    }
}

/// Sideband analysis of a barrier oscillating with amplitude δV at frequency ω.
/// Above the barrier the times use |κ| and `valid` is false.
pub fn buttiker_landauer(
    params: &SquareBarrierParams,
    k: f64,
    omega: f64,
    delta_v: f64,
    units: &UnitSystem,
) -> Result<ButtikerLandauer> {
    check_k(k)?;
    if !(omega >= 0.0 && omega.is_finite()) {
        return Err(Error::Domain(format!("ω must be non-negative, got {omega}")));
    }
    let kap2 = params.kappa2(k, units);
    if kap2 == 0.0 {
        return Err(Error::Domain("Büttiker–Landauer time undefined at the barrier top".into()));
    }
    let kap = kap2.abs().sqrt();
    let hbar = units.hbar_ev_s;
    let tau_t = params.d / (units.hbar_over_m() * kap);
    let tau_r = hbar * k / (params.v0 * kap);
    let x = omega * tau_t;
    let base = (delta_v * tau_t / (2.0 * hbar)).powi(2);
    let i_plus = base * expm1_ratio(x).powi(2);
    let i_minus = base * expm1_ratio(-x).powi(2);
    let band_ratio = if i_plus + i_minus > 0.0 { (i_plus - i_minus) / (i_plus + i_minus) } else { 0.0 };
    let e = units.e_of_k(k);
    let hw = hbar * omega;
    let valid = kap2 > 0.0 && hw < 0.1 * e && hw < 0.1 * (params.v0 - e) && delta_v.abs() < 0.1 * params.v0;
    Ok(ButtikerLandauer { tau_t, tau_r, i_plus, i_minus, band_ratio, valid })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (UnitSystem, SquareBarrierParams, f64) {
        let u = UnitSystem::ELECTRON;
        (u, SquareBarrierParams::new(10.0, 5.0).unwrap(), u.k_of_e(5.0))
    }

    #[test]
    fn static_limit() {
        let (u, p, k) = setup();
        let b = buttiker_landauer(&p, k, 0.0, 0.1, &u).unwrap();
        let lim = (0.1 * b.tau_t / (2.0 * u.hbar_ev_s)).powi(2);
        assert!((b.i_plus / lim - 1.0).abs() < 1e-15);
        assert!((b.i_minus / lim - 1.0).abs() < 1e-15);
        let tiny = buttiker_landauer(&p, k, 1e-6 / b.tau_t, 0.1, &u).unwrap();
        assert!((tiny.i_plus / lim - 1.0).abs() < 2e-6);
    }

    #[test]
    fn ratio_at_inverse_time() {
        let (u, p, k) = setup();
        let tau = buttiker_landauer(&p, k, 0.0, 0.1, &u).unwrap().tau_t;
        let b = buttiker_landauer(&p, k, 1.0 / tau, 0.1, &u).unwrap();
        assert!((b.band_ratio - 1f64.tanh()).abs() < 1e-12);
        assert!((b.band_ratio - 0.7616).abs() < 1e-4);
    }

    #[test]
    fn linear_in_width() {
        let (u, p, k) = setup();
        let p2 = SquareBarrierParams::new(10.0, 10.0).unwrap();
        let a = buttiker_landauer(&p, k, 0.0, 0.1, &u).unwrap();
        let b = buttiker_landauer(&p2, k, 0.0, 0.1, &u).unwrap();
        assert!((b.tau_t / a.tau_t - 2.0).abs() < 1e-14);
    }

    #[test]
    fn barrier_top_is_an_error() {
        let u = UnitSystem::ELECTRON;
        let p = SquareBarrierParams::new(u.e_of_k(1.0), 5.0).unwrap();
        assert!(buttiker_landauer(&p, 1.0, 0.0, 0.1, &u).is_err());
    }
}
