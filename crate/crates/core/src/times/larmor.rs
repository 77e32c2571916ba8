use num_complex::Complex64;

use super::{check_k, continued, richardson};
use crate::error::{Error, Result};
use crate::potential::PiecewisePotential;
use crate::scattering::{closed_form_square, solve_transfer_matrix, square_cs, SquareBarrierParams};
use crate::units::UnitSystem;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LarmorTimes {
    pub tau_y: f64,
    pub tau_z: f64,
    pub tau_x: f64,
}

impl LarmorTimes {
    fn new(tau_y: f64, tau_z: f64) -> Self {
        Self { tau_y, tau_z, tau_x: tau_y.hypot(tau_z) }
    }
}

fn z_kernel(params: &SquareBarrierParams, k: f64, units: &UnitSystem) -> f64 {
    let d = params.d;
    let eps2 = params.eps2(units);
    let s = eps2 - k * k;
    let (c, sn) = square_cs(s, d);
    let num = (s - k * k) * sn * sn + d * eps2 * c * sn;
    let den = s * (4.0 * k * k + eps2 * eps2 * sn * sn);
    eps2 * num / (den * units.hbar_over_m())
}

/// Closed forms. τ_y carries the prefactor mk/(ħκ) and coincides with the dwell time.
pub fn larmor_times(params: &SquareBarrierParams, k: f64, units: &UnitSystem) -> Result<LarmorTimes> {
    check_k(k)?;
    if params.d == 0.0 || params.v0 == 0.0 {
        return Ok(LarmorTimes::new(0.0, 0.0));
    }
    let ty = super::dwell_time_closed(params, k, units);
    let tz = continued(params.eps(units), k, |kk| z_kernel(params, kk, units));
    Ok(LarmorTimes::new(ty, tz))
}

/// −(m/ħκ)·∂(ln T, α)/∂κ at fixed k, by finite differences of the closed-form
/// amplitudes. Below the barrier only.
pub fn larmor_times_kappa_fd(params: &SquareBarrierParams, k: f64, units: &UnitSystem) -> Result<LarmorTimes> {
    check_k(k)?;
    let kap2 = params.kappa2(k, units);
    if kap2 <= 0.0 {
        return Err(Error::Domain("κ-derivative form needs E < V0".into()));
    }
    let kap = kap2.sqrt();
    let h2m = units.hbar2_2m();
    let at = |kk: f64| {
        let p = SquareBarrierParams::new(h2m * (k * k + kk * kk), params.d)?;
        closed_form_square(&p, k, units)
    };
    let h = 1e-5 * kap;
    let dln = richardson(|kk| Ok(at(kk)?.t.ln()), kap, h, false)?;
    let dal = richardson(|kk| Ok(at(kk)?.alpha), kap, h, true)?;
    let pre = 1.0 / (units.hbar_over_m() * kap);
    Ok(LarmorTimes::new(-pre * dal, -pre * dln))
}

/// τ_z = −ħ ∂ln T/∂V and τ_y = −ħ ∂α/∂V at fixed energy, every nonzero region
/// shifted together. Works for any potential with free leads.
pub fn larmor_times_numeric(potential: &PiecewisePotential, k: f64, units: &UnitSystem) -> Result<LarmorTimes> {
    check_k(k)?;
    if potential.tail().is_some() {
        return Err(Error::Domain("no transmitted channel for a step".into()));
    }
    let vmax = potential.segments().iter().map(|s| s.v.abs()).fold(0.0, f64::max);
    if vmax == 0.0 {
        return Ok(LarmorTimes::new(0.0, 0.0));
    }
    let h = 1e-6 * vmax;
    let dln = richardson(|dv| Ok(solve_transfer_matrix(&potential.shifted(dv), k, units)?.transmission().ln()), 0.0, h, false)?;
    let dal = richardson(|dv| Ok(solve_transfer_matrix(&potential.shifted(dv), k, units)?.alpha()), 0.0, h, true)?;
    Ok(LarmorTimes::new(-units.hbar_ev_s * dal, -units.hbar_ev_s * dln))
}

/// (τ_z, τ_y) → (md/ħκ, 2mk/(ħε²κ)) for opaque barriers. `None` at or above the barrier top.
pub fn larmor_thick_limits(params: &SquareBarrierParams, k: f64, units: &UnitSystem) -> Option<(f64, f64)> {
    let kap2 = params.kappa2(k, units);
    if kap2 <= 0.0 {
        return None;
    }
    let kap = kap2.sqrt();
    let hm = units.hbar_over_m();
    Some((params.d / (hm * kap), 2.0 * k / (hm * params.eps2(units) * kap)))
}

/// τ_y + iτ_z.
pub fn complex_time(params: &SquareBarrierParams, k: f64, units: &UnitSystem) -> Result<Complex64> {
    let l = larmor_times(params, k, units)?;
    Ok(Complex64::new(l.tau_y, l.tau_z))
}
