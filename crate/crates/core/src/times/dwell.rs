use super::{check_k, continued};
use crate::error::{Error, Result};
use crate::potential::PiecewisePotential;
use crate::quadrature::integrate;
use crate::scattering::{solve_transfer_matrix, square_cs, SquareBarrierParams};
use crate::units::UnitSystem;

/// ∫|ψ|²dx over [x1, x2] divided by the incident flux ħk/m.
pub fn dwell_time(potential: &PiecewisePotential, k: f64, x1: f64, x2: f64, units: &UnitSystem) -> Result<f64> {
    check_k(k)?;
    if !(x1 < x2) {
        return Err(Error::Domain(format!("need x1 < x2, got {x1}, {x2}")));
    }
    let st = solve_transfer_matrix(potential, k, units)?;
    let mut kmax = k;
    for sg in &st.segments {
        kmax = kmax.max(sg.s.abs().sqrt());
    }
    kmax = kmax.max(st.tail_s.abs().sqrt());
    let panel = 3.0 / kmax;
    let mut cuts = vec![x1];
    for sg in potential.segments() {
        for x in [sg.x_left, sg.x_right] {
            if x > x1 && x < x2 {
                cuts.push(x);
            }
        }
    }
    cuts.push(x2);
    cuts.dedup();
    let mut total = 0.0;
    for w in cuts.windows(2) {
        total += integrate(|x| st.psi(x).0.norm_sqr(), w[0], w[1], panel);
    }
    Ok(total / units.velocity(k))
}

fn dwell_kernel(params: &SquareBarrierParams, k: f64, units: &UnitSystem) -> f64 {
    let d = params.d;
    let eps2 = params.eps2(units);
    let s = eps2 - k * k;
    let (c, sn) = square_cs(s, d);
    let num = 2.0 * d * (s - k * k) + 2.0 * eps2 * c * sn;
    let den = s * (4.0 * k * k + eps2 * eps2 * sn * sn);
    k * num / (den * units.hbar_over_m())
}

/// Dwell time inside (0, d), closed form with prefactor mk/(ħκ).
pub fn dwell_time_closed(params: &SquareBarrierParams, k: f64, units: &UnitSystem) -> f64 {
    if params.d == 0.0 || params.v0 == 0.0 {
        return 0.0;
    }
    continued(params.eps(units), k, |kk| dwell_kernel(params, kk, units))
}

/// ħk/(V0κ), the opaque-barrier value. `None` at or above the barrier top.
pub fn dwell_thick_limit(params: &SquareBarrierParams, k: f64, units: &UnitSystem) -> Option<f64> {
    let kap2 = params.kappa2(k, units);
    (kap2 > 0.0).then(|| units.hbar_ev_s * k / (params.v0 * kap2.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numeric_matches_closed() {
        let u = UnitSystem::ELECTRON;
        let p = SquareBarrierParams::new(10.0, 5.0).unwrap();
        let eps = p.eps(&u);
        for f in [0.2, 0.707, 0.99, 1.01, 1.7] {
            let k = f * eps;
            let n = dwell_time(&p.potential(), k, 0.0, 5.0, &u).unwrap();
            let c = dwell_time_closed(&p, k, &u);
            assert!((n / c - 1.0).abs() < 1e-8, "{f}: {n} {c}");
        }
    }

    #[test]
    fn oracle_value() {
        // mpmath quadrature of |ψ|² over the barrier
        let u = UnitSystem::ELECTRON;
        let p = SquareBarrierParams::new(10.0, 5.0).unwrap();
        let c = dwell_time_closed(&p, u.k_of_e(5.0), &u);
        assert!((c / 6.581980182060962e-17 - 1.0).abs() < 1e-10, "{c}");
        let k15 = u.k_of_e(15.0);
        assert!((dwell_time_closed(&p, k15, &u) / 4.140070948893559e-16 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn free_dwell_is_ballistic() {
        let u = UnitSystem::ELECTRON;
        let t = dwell_time(&PiecewisePotential::free(), 1.3, -2.0, 8.0, &u).unwrap();
        assert!((t / (10.0 / u.velocity(1.3)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_reversed_interval() {
        let u = UnitSystem::ELECTRON;
        assert!(dwell_time(&PiecewisePotential::free(), 1.0, 1.0, 0.0, &u).is_err());
    }
}
