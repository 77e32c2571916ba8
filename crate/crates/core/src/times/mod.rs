//! Stationary tunnelling-time catalogue.

mod bl;
mod centroid;
mod dwell;
mod interference;
mod larmor;
mod phase;
mod reshaping;

pub use bl::{buttiker_landauer, ButtikerLandauer};
pub use centroid::{centroid_times, summarize_spectrum, summarize_spectrum_window, CentroidTimes, PacketSpectrumSummary};
pub use dwell::{dwell_thick_limit, dwell_time, dwell_time_closed};
pub use interference::{
    delta_barrier_times, packet_dwell_decomposition, self_interference_identity, step_barrier_times, DeltaTimes,
    PacketDwellCheck, SelfInterference, StepTimes,
};
pub use larmor::{
    complex_time, larmor_thick_limits, larmor_times, larmor_times_kappa_fd, larmor_times_numeric, LarmorTimes,
};
pub use phase::{
    extrapolated_phase_times, hartman_bracket, phase_derivatives, phase_time_closed, phase_times_numeric,
    PhaseTimes,
};
pub use reshaping::{reshaping_check, reshaping_table, ReshapingReport, ReshapingRow};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scattering::{closed_form_square, wrap_phase, SquareBarrierParams};
use crate::units::UnitSystem;

/// Relative half-width of the window around k = ε replaced by the two-sided continuation.
pub const DEGENERATE_REL: f64 = 1e-7;

/// Evaluate `f` at k, or average it at ε(1 ± 1e-7) when k sits on the barrier top.
pub(crate) fn continued<F: Fn(f64) -> f64>(eps: f64, k: f64, f: F) -> f64 {
    if eps > 0.0 && ((k - eps) / eps).abs() < DEGENERATE_REL {
        0.5 * (f(eps * (1.0 - DEGENERATE_REL)) + f(eps * (1.0 + DEGENERATE_REL)))
    } else {
        f(k)
    }
}

/// Centred difference refined once by Richardson extrapolation.
/// With `wrap`, differences of angles are taken modulo 2π.
pub(crate) fn richardson<F: FnMut(f64) -> Result<f64>>(mut f: F, x: f64, h: f64, wrap: bool) -> Result<f64> {
    let diff = |a: f64, b: f64| if wrap { wrap_phase(a - b) } else { a - b };
    let (p1, m1) = (f(x + h)?, f(x - h)?);
    let (p2, m2) = (f(x + 0.5 * h)?, f(x - 0.5 * h)?);
    let d1 = diff(p1, m1) / (2.0 * h);
    let d2 = diff(p2, m2) / h;
    Ok((4.0 * d2 - d1) / 3.0)
}

fn check_k(k: f64) -> Result<()> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("wavenumber must be positive, got {k}")))
    }
}

/// Every stationary time at one (barrier, k) point. Times in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeReport {
    pub k: f64,
    pub e: f64,
    pub t: f64,
    pub r: f64,
    pub alpha: f64,
    pub beta: f64,
    pub tau_eq: f64,
    pub dtau_phase_t: f64,
    pub dtau_phase_r: f64,
    pub tau_dwell: f64,
    pub tau_larmor_y: f64,
    pub tau_larmor_z: f64,
    pub tau_larmor_x: f64,
    pub tau_bl_t: f64,
    pub tau_bl_r: f64,
    pub tau_semiclassical: f64,
    pub tau_complex: Complex64,
    pub above_barrier: bool,
}

/// Square-barrier catalogue from the closed forms. Above the barrier the
/// Büttiker–Landauer and semiclassical entries use |κ| and are outside their
/// range of validity.
pub fn time_report(params: &SquareBarrierParams, k: f64, units: &UnitSystem) -> Result<TimeReport> {
    check_k(k)?;
    let sol = closed_form_square(params, k, units)?;
    let eps = params.eps(units);
    let hm = units.hbar_over_m();
    let phase = phase_time_closed(params, k, units);
    let lar = larmor_times(params, k, units)?;
    let barrier = params.d > 0.0 && params.v0 > 0.0;
    let abs_kappa = |kk: f64| params.kappa2(kk, units).abs().sqrt();
    let tau_bl_t = if barrier { continued(eps, k, |kk| params.d / (hm * abs_kappa(kk))) } else { 0.0 };
    let tau_bl_r = if barrier {
        continued(eps, k, |kk| units.hbar_ev_s * kk / (params.v0 * abs_kappa(kk)))
    } else {
        0.0
    };
    Ok(TimeReport {
        k,
        e: units.e_of_k(k),
        t: sol.t,
        r: sol.r,
        alpha: sol.alpha,
        beta: sol.beta,
        tau_eq: params.d / (hm * k),
        dtau_phase_t: phase,
        dtau_phase_r: phase,
        tau_dwell: dwell_time_closed(params, k, units),
        tau_larmor_y: lar.tau_y,
        tau_larmor_z: lar.tau_z,
        tau_larmor_x: lar.tau_x,
        tau_bl_t,
        tau_bl_r,
        tau_semiclassical: tau_bl_t,
        tau_complex: Complex64::new(lar.tau_y, lar.tau_z),
        above_barrier: k * k > params.eps2(units),
    })
}

/// Reports for many wavenumbers, in input order.
pub fn time_report_sweep(params: &SquareBarrierParams, ks: &[f64], units: &UnitSystem) -> Vec<Result<TimeReport>> {
    ks.par_iter().map(|&k| time_report(params, k, units)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_invariants_below_barrier() {
        let u = UnitSystem::ELECTRON;
        let p = SquareBarrierParams::new(10.0, 5.0).unwrap();
        let r = time_report(&p, u.k_of_e(5.0), &u).unwrap();
        assert!((r.tau_larmor_x / (r.tau_larmor_y.hypot(r.tau_larmor_z)) - 1.0).abs() < 1e-12);
        assert!((r.tau_complex.norm() / r.tau_larmor_x - 1.0).abs() < 1e-12);
        assert!((r.tau_dwell / r.tau_larmor_y - 1.0).abs() < 1e-12);
        for v in [r.tau_eq, r.dtau_phase_t, r.tau_dwell, r.tau_larmor_z, r.tau_bl_t, r.tau_bl_r] {
            assert!(v > 0.0);
        }
    }

    #[test]
    fn sweep_through_barrier_top_is_finite() {
        let u = UnitSystem::ELECTRON;
        let p = SquareBarrierParams::new(10.0, 5.0).unwrap();
        let eps = p.eps(&u);
        let ks: Vec<f64> = (0..41).map(|i| eps * (0.8 + 0.01 * i as f64)).collect();
        for r in time_report_sweep(&p, &ks, &u) {
            let r = r.unwrap();
            for v in [r.dtau_phase_t, r.tau_dwell, r.tau_larmor_x, r.tau_bl_t, r.tau_bl_r, r.alpha, r.beta] {
                assert!(v.is_finite());
            }
        }
    }

    #[test]
    fn free_report_is_zero() {
        let u = UnitSystem::ELECTRON;
        let p = SquareBarrierParams::new(10.0, 0.0).unwrap();
        let r = time_report(&p, 1.0, &u).unwrap();
        assert_eq!(r.t, 1.0);
        assert_eq!(r.alpha, 0.0);
        assert_eq!(r.dtau_phase_t, 0.0);
        assert_eq!(r.tau_complex, Complex64::new(0.0, 0.0));
    }
}

#[cfg(test)]
mod properties {
    use super::*;
    use crate::potential::PiecewisePotential;
    use proptest::prelude::*;

    const U: UnitSystem = UnitSystem::ELECTRON;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn larmor_components_are_orthogonal(v0 in 0.5f64..20.0, d in 0.1f64..12.0, k in 0.05f64..3.0) {
            let l = larmor_times(&SquareBarrierParams::new(v0, d).unwrap(), k, &U).unwrap();
            let x = (l.tau_y * l.tau_y + l.tau_z * l.tau_z).sqrt();
            prop_assert!((l.tau_x - x).abs() <= 1e-10 * x);
        }

        #[test]
        fn dwell_equals_larmor_y(v0 in 0.5f64..20.0, d in 0.1f64..12.0, k in 0.05f64..3.0) {
            let p = SquareBarrierParams::new(v0, d).unwrap();
            let num = dwell_time(&p.potential(), k, 0.0, d, &U).unwrap();
            let ty = larmor_times(&p, k, &U).unwrap().tau_y;
            prop_assert!((num / ty - 1.0).abs() < 1e-8, "{num} {ty}");
        }

        #[test]
        fn interference_identity_holds(
            v0 in 0.5f64..20.0, d in 0.1f64..12.0, k in 0.05f64..3.0, a in 0.0f64..3.0, b in 0.0f64..3.0,
        ) {
            let p = SquareBarrierParams::new(v0, d).unwrap();
            let s = self_interference_identity(&p, k, -a, d + b, &U).unwrap();
            prop_assert!((s.residual / s.tau_dwell).abs() < 1e-8, "{s:?}");
        }

        #[test]
        fn catalogue_is_finite(v0 in 0.5f64..20.0, d in 0.0f64..12.0, k in 0.05f64..3.0) {
            let r = time_report(&SquareBarrierParams::new(v0, d).unwrap(), k, &U).unwrap();
            for v in [r.t, r.r, r.alpha, r.beta, r.tau_eq, r.dtau_phase_t, r.tau_dwell, r.tau_larmor_x, r.tau_bl_t] {
                prop_assert!(v.is_finite());
            }
            prop_assert!(r.tau_dwell >= 0.0);
        }

        #[test]
        fn face_referred_times_ignore_translation(
            segs in prop::collection::vec((0.2f64..4.0, 0.5f64..15.0), 1..4), k in 0.1f64..3.0, dx in -5.0f64..5.0,
        ) {
            let mut x = 0.0;
            let triples: Vec<(f64, f64, f64)> = segs.iter().map(|&(w, v)| { x += w; (x - w, x, v) }).collect();
            let p = PiecewisePotential::from_triples(&triples).unwrap();
            // β is undefined without reflection
            prop_assume!(crate::scattering::solve_transfer_matrix(&p, k, &U).unwrap().reflection() > 1e-3);
            let (t0, r0) = phase_times_numeric(&p, k, &U).unwrap();
            let (t1, r1) = phase_times_numeric(&p.translated(dx), k, &U).unwrap();
            let (t0, t1) = (t0.unwrap(), t1.unwrap());
            let scale = 1e-6 * (t0.abs() + r0.abs());
            prop_assert!((t1 - t0).abs() < scale, "{t0} {t1}");
            prop_assert!((r1 - r0).abs() < scale, "{r0} {r1}");
        }
    }
}
