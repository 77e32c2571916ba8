use super::{check_k, continued, richardson};
use crate::error::Result;
use crate::potential::PiecewisePotential;
use crate::scattering::{closed_form_square, solve_transfer_matrix, square_cs, SquareBarrierParams};
use crate::units::UnitSystem;

/// Relative step for numerical k-derivatives.
pub const K_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseTimes {
    /// Closed form; identical for transmission and reflection on a square barrier.
    pub closed_t: f64,
    pub closed_r: f64,
    /// From numerical phase derivatives of the transfer-matrix solution.
    pub numeric_t: f64,
    pub numeric_r: f64,
}

fn phase_kernel(params: &SquareBarrierParams, k: f64, units: &UnitSystem) -> f64 {
    let d = params.d;
    let eps2 = params.eps2(units);
    let s = eps2 - k * k;
    let (c, sn) = square_cs(s, d);
    let num = 2.0 * d * k * k * (s - k * k) + 2.0 * eps2 * eps2 * c * sn;
    let den = s * (4.0 * k * k + eps2 * eps2 * sn * sn);
    num / (den * units.hbar_over_m() * k)
}

/// Extrapolated phase time of the square barrier, valid on both sides of the barrier top.
pub fn phase_time_closed(params: &SquareBarrierParams, k: f64, units: &UnitSystem) -> f64 {
    if params.d == 0.0 || params.v0 == 0.0 {
        return 0.0;
    }
    continued(params.eps(units), k, |kk| phase_kernel(params, kk, units))
}

/// The factor that multiplies m/(ħkκ) in the phase time; it tends to 2 for opaque
/// barriers. `None` at or above the barrier top.
pub fn hartman_bracket(params: &SquareBarrierParams, k: f64, units: &UnitSystem) -> Option<f64> {
    let kap2 = params.kappa2(k, units);
    (kap2 > 0.0).then(|| phase_time_closed(params, k, units) * units.hbar_over_m() * k * kap2.sqrt())
}

/// (dα/dk, dβ/dk) of a general potential from the transfer matrix.
pub fn phase_derivatives(potential: &PiecewisePotential, k: f64, units: &UnitSystem) -> Result<(f64, f64)> {
    check_k(k)?;
    let h = K_STEP * k;
    let da = richardson(|kk| Ok(solve_transfer_matrix(potential, kk, units)?.alpha()), k, h, true)?;
    let db = richardson(|kk| Ok(solve_transfer_matrix(potential, kk, units)?.beta()), k, h, true)?;
    Ok((da, db))
}

/// Extrapolated phase times referred to the faces x_L, x_R of a general potential:
/// Δτ_T = (x_R − x_L + α')/v and Δτ_R = (β' − 2x_L)/v. Δτ_T is `None` for a step.
pub fn phase_times_numeric(potential: &PiecewisePotential, k: f64, units: &UnitSystem) -> Result<(Option<f64>, f64)> {
    let (da, db) = phase_derivatives(potential, k, units)?;
    let v = units.velocity(k);
    let (xl, xr) = (potential.x_left(), potential.x_right());
    let t = potential.tail().is_none().then(|| (xr - xl + da) / v);
    Ok((t, (db - 2.0 * xl) / v))
}

/// Both routes for the square barrier.
pub fn extrapolated_phase_times(params: &SquareBarrierParams, k: f64, units: &UnitSystem) -> Result<PhaseTimes> {
    check_k(k)?;
    let closed = phase_time_closed(params, k, units);
    let (nt, nr) = phase_times_numeric(&params.potential(), k, units)?;
    Ok(PhaseTimes { closed_t: closed, closed_r: closed, numeric_t: nt.unwrap_or(f64::NAN), numeric_r: nr })
}

/// dα/dk of the closed form; used where the square-barrier phases are wanted exactly.
pub(crate) fn closed_alpha_prime(params: &SquareBarrierParams, k: f64, units: &UnitSystem) -> f64 {
    units.velocity(k) * phase_time_closed(params, k, units) - params.d
}

#[allow(dead_code)]
pub(crate) fn closed_beta_prime_numeric(params: &SquareBarrierParams, k: f64, units: &UnitSystem) -> Result<f64> {
    richardson(|kk| Ok(closed_form_square(params, kk, units)?.beta), k, K_STEP * k, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thick_barrier_value() {
        let u = UnitSystem::ELECTRON;
        let k = u.k_of_e(5.0);
        let p = SquareBarrierParams::new(10.0, 20.0).unwrap();
        let kap = p.kappa2(k, &u).sqrt();
        let lim = 2.0 / (u.velocity(k) * kap);
        assert!((phase_time_closed(&p, k, &u) / lim - 1.0).abs() < 1e-9);
        assert!((lim / 1.3164239138e-16 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn numeric_and_closed_agree_on_both_sides() {
        let u = UnitSystem::ELECTRON;
        let p = SquareBarrierParams::new(10.0, 5.0).unwrap();
        let eps = p.eps(&u);
        for f in [0.3, 0.7, 0.95, 1.05, 1.4, 2.5] {
            let pt = extrapolated_phase_times(&p, f * eps, &u).unwrap();
            assert!((pt.numeric_t / pt.closed_t - 1.0).abs() < 1e-6, "{f} {pt:?}");
            assert!((pt.numeric_r / pt.closed_r - 1.0).abs() < 1e-6, "{f} {pt:?}");
        }
    }

    #[test]
    fn shifted_barrier_keeps_its_times() {
        let u = UnitSystem::ELECTRON;
        let p = PiecewisePotential::square(10.0, 5.0).unwrap();
        let k = 1.0;
        let a = phase_times_numeric(&p, k, &u).unwrap();
        let b = phase_times_numeric(&p.translated(-7.3), k, &u).unwrap();
        assert!((a.0.unwrap() / b.0.unwrap() - 1.0).abs() < 1e-7);
        assert!((a.1 / b.1 - 1.0).abs() < 1e-7);
    }
}
