//! Evanescent waveguide modes as a classical model of tunnelling.
//!
//! Waveguide quantities are SI (m, s, rad/s). The quantum side uses the crate's
//! eV/Å/s units, except for the mapped problem which is expressed in SI through a
//! dedicated [`UnitSystem`].

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::potential::PiecewisePotential;
use crate::scattering::{closed_form_square, solve_transfer_matrix, SquareBarrierParams};
use crate::times::{phase_derivatives, phase_time_closed};
use crate::units::UnitSystem;

pub const C_SI: f64 = 299_792_458.0;

/// Off-resonance margin on |sin(kL + β)| used when none is given.
pub const DEFAULT_MARGIN: f64 = 0.2;

/// Single-mode guide of transverse size `b` (m) driven at `omega` (rad/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveguideSpec {
    pub b: f64,
    pub omega: f64,
}

impl WaveguideSpec {
    pub fn new(b: f64, omega: f64) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) || !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::Domain(format!("need b > 0 and omega > 0, got b = {b}, omega = {omega}")));
        }
        Ok(Self { b, omega })
    }

    /// Drive at a given fraction of the cut-off.
    pub fn at_ratio(b: f64, ratio: f64) -> Result<Self> {
        Self::new(b, ratio * PI * C_SI / b)
    }

    pub fn omega_c(&self) -> f64 {
        PI * C_SI / self.b
    }

    pub fn lambda_c(&self) -> f64 {
        2.0 * self.b
    }

    pub fn is_evanescent(&self) -> bool {
        self.omega < self.omega_c()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dispersion {
    /// (ω/c)·sqrt(1 − (ω_c/ω)²) on the principal branch: imaginary below cut-off.
    pub kappa: Complex64,
    /// c²κ/ω, only for a propagating mode.
    pub v_group: Option<f64>,
}

pub fn waveguide_dispersion(spec: &WaveguideSpec) -> Dispersion {
    let r = spec.omega_c() / spec.omega;
    let kappa = (spec.omega / C_SI) * Complex64::new(1.0 - r * r, 0.0).sqrt();
    let v_group = (!spec.is_evanescent()).then(|| C_SI * C_SI * kappa.re / spec.omega);
    Dispersion { kappa, v_group }
}

/// Square-barrier problem equivalent to an undersized guide segment of length L.
/// Outside the segment the field propagates with wavenumber ω/c; inside, the cut-off
/// plays the barrier height. Lengths in m, times in s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MappedBarrier {
    pub params: SquareBarrierParams,
    pub k: f64,
    pub units: UnitSystem,
}

/// Constants that make ħ/m = c²/ω, i.e. ħω = mc², with ħ = 1 and lengths in m.
pub fn mapped_units(omega: f64) -> UnitSystem {
    UnitSystem { hbar_ev_s: 1.0, hbarc_ev_a: 1.0, electron_rest_ev: omega / (C_SI * C_SI), c_a_per_s: C_SI }
}

pub fn map_quantum_waveguide(spec: &WaveguideSpec, length: f64) -> Result<MappedBarrier> {
    let units = mapped_units(spec.omega);
    let eps = PI / spec.b;
    let v0 = eps * eps * units.hbar2_2m();
    Ok(MappedBarrier { params: SquareBarrierParams::new(v0, length)?, k: spec.omega / C_SI, units })
}

/// Back from the mapped problem to (guide, segment length).
pub fn unmap_quantum_waveguide(m: &MappedBarrier) -> Result<(WaveguideSpec, f64)> {
    let omega = m.k * m.units.c_a_per_s;
    let eps = m.params.eps(&m.units);
    Ok((WaveguideSpec::new(PI / eps, omega)?, m.params.d))
}

/// Phase traversal time of the segment from the quantum kernel with mapped constants.
pub fn traversal_time_mapped(spec: &WaveguideSpec, length: f64) -> Result<f64> {
    let m = map_quantum_waveguide(spec, length)?;
    Ok(phase_time_closed(&m.params, m.k, &m.units))
}

/// dφ/dω of the segment transmission, φ = −arg Δ with
/// Δ = 2k·cosh κL − i(k² − κ²)·sinh(κL)/κ, k = ω/c and κ from the guide dispersion.
pub fn traversal_time_direct(spec: &WaveguideSpec, length: f64) -> Result<f64> {
    let w = spec.omega;
    if (w / spec.omega_c() - 1.0).abs() < 1e-12 {
        // the formula divides by κ, but Δ is analytic in κ²: two-sided means
        // at h and 2h, Richardson-combined
        let mean = |h: f64| -> Result<f64> {
            let lo = traversal_time_direct(&WaveguideSpec::new(spec.b, w * (1.0 - h))?, length)?;
            let hi = traversal_time_direct(&WaveguideSpec::new(spec.b, w * (1.0 + h))?, length)?;
            Ok(0.5 * (lo + hi))
        };
        return Ok((4.0 * mean(5e-5)? - mean(1e-4)?) / 3.0);
    }
    let k = w / C_SI;
    let eps = PI / spec.b;
    // evanescent decay constant, imaginary for a propagating mode
    let kap = Complex64::new(eps * eps - k * k, 0.0).sqrt();
    let l = length;
    let x = kap * l;
    // cosh and sinh scaled by e^{−Re κL}; the common factor cancels in Δ'/Δ
    let (ep, em) = ((x - x.re).exp(), (-x - x.re).exp());
    let ch = 0.5 * (ep + em);
    let sh = 0.5 * (ep - em);
    let i = Complex64::new(0.0, 1.0);
    let k2m = k * k - kap * kap;
    let delta = 2.0 * k * ch - i * k2m * sh / kap;
    let d_k = 2.0 * ch - 2.0 * i * k * sh / kap;
    let d_kap = 2.0 * k * l * sh - i * (-2.0 * sh + k2m * (l * ch / kap - sh / (kap * kap)));
    let dk_dw = 1.0 / C_SI;
    let dkap_dw = -w / (C_SI * C_SI * kap);
    let dd = d_k * dk_dw + d_kap * dkap_dw;
    Ok(-(dd / delta).im)
}

/// Smallest |κ|L above which the mean traversal speed L/τ exceeds c.
pub fn superluminal_threshold(spec: &WaveguideSpec) -> Result<f64> {
    if !spec.is_evanescent() {
        return Err(Error::Domain("threshold needs an evanescent segment".into()));
    }
    let kap = waveguide_dispersion(spec).kappa.im;
    let excess = |kl: f64| -> Result<f64> {
        let l = kl / kap;
        Ok(l / traversal_time_mapped(spec, l)? - C_SI)
    };
    let (mut lo, mut hi) = (1e-3, 50.0);
    if excess(lo)? > 0.0 || excess(hi)? < 0.0 {
        return Err(Error::Undefined("no sign change of L/τ − c on (1e-3, 50)".into()));
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if excess(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleBarrierTime {
    pub gap: f64,
    /// (2d + L + α')/v.
    pub tau: f64,
    pub transmission: f64,
    /// |sin(kL + β₁)|, zero on a gap resonance.
    pub off_resonance: f64,
    pub near_resonance: bool,
}

/// Extrapolated phase time across two barriers of height `v0` and width `d`
/// separated by `gap` (eV, Å).
pub fn double_barrier_time(
    d: f64,
    gap: f64,
    v0: f64,
    k: f64,
    margin: f64,
    units: &UnitSystem,
) -> Result<DoubleBarrierTime> {
    if !(gap >= 0.0) {
        return Err(Error::Domain("gap must be non-negative".into()));
    }
    let pot = if v0 == 0.0 {
        PiecewisePotential::from_triples(&[(0.0, 2.0 * d + gap, 0.0)])?
    } else {
        PiecewisePotential::double_barrier(v0, d, gap)?
    };
    let (da, _) = phase_derivatives(&pot, k, units)?;
    let st = solve_transfer_matrix(&pot, k, units)?;
    let beta1 = closed_form_square(&SquareBarrierParams::new(v0, d)?, k, units)?.beta;
    let off = (k * gap + beta1).sin().abs();
    Ok(DoubleBarrierTime {
        gap,
        tau: (pot.x_right() - pot.x_left() + da) / units.velocity(k),
        transmission: st.transmission().powi(2),
        off_resonance: off,
        near_resonance: gap > 0.0 && off < margin,
    })
}

pub fn gap_sweep(
    d: f64,
    gaps: &[f64],
    v0: f64,
    k: f64,
    margin: f64,
    units: &UnitSystem,
) -> Result<Vec<DoubleBarrierTime>> {
    gaps.par_iter().map(|&g| double_barrier_time(d, g, v0, k, margin, units)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const B: f64 = 0.02;

    #[test]
    fn cutoff_and_group_velocity() {
        let s = WaveguideSpec::at_ratio(B, 1.0).unwrap();
        assert!(waveguide_dispersion(&s).kappa.norm() < 1e-6);
        let s = WaveguideSpec::at_ratio(B, 2f64.sqrt()).unwrap();
        let v = waveguide_dispersion(&s).v_group.unwrap();
        assert!((v / (C_SI / 2f64.sqrt()) - 1.0).abs() < 1e-12);
        let s = WaveguideSpec::at_ratio(B, 0.5).unwrap();
        let d = waveguide_dispersion(&s);
        assert!(d.kappa.re.abs() < 1e-12 && d.kappa.im > 0.0);
        let wc = s.omega_c();
        assert!((d.kappa.im / ((wc * wc - s.omega * s.omega).sqrt() / C_SI) - 1.0).abs() < 1e-12);
        assert_eq!(s.lambda_c(), 2.0 * B);
    }

    #[test]
    fn direct_route_at_cutoff() {
        let s = WaveguideSpec::at_ratio(B, 1.0).unwrap();
        let m = traversal_time_mapped(&s, 0.05).unwrap();
        let d = traversal_time_direct(&s, 0.05).unwrap();
        assert!(((m - d) / m).abs() < 1e-10, "{m} {d}");
    }

    #[test]
    fn branch_continuity_at_cutoff() {
        for r in [1.0 - 1e-9, 1.0 + 1e-9] {
            let s = WaveguideSpec::at_ratio(B, r).unwrap();
            assert!(waveguide_dispersion(&s).kappa.norm() < 1e-2);
        }
    }

    #[test]
    fn map_round_trip() {
        let s = WaveguideSpec::at_ratio(B, 0.8).unwrap();
        let m = map_quantum_waveguide(&s, 0.05).unwrap();
        let (s2, l) = unmap_quantum_waveguide(&m).unwrap();
        assert!((s2.b / s.b - 1.0).abs() < 1e-12);
        assert!((s2.omega / s.omega - 1.0).abs() < 1e-12);
        assert_eq!(l, 0.05);
        let kap = waveguide_dispersion(&s).kappa.im;
        assert!((m.params.kappa2(m.k, &m.units).sqrt() / kap - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mapped_equals_direct() {
        for r in [0.3, 0.8, 0.99, 1.2, 2.0] {
            let s = WaveguideSpec::at_ratio(B, r).unwrap();
            for l in [0.001, 0.02, 0.1] {
                let a = traversal_time_mapped(&s, l).unwrap();
                let b = traversal_time_direct(&s, l).unwrap();
                assert!((a / b - 1.0).abs() < 1e-10, "r={r} l={l} {a} {b}");
            }
        }
    }

    #[test]
    fn opaque_segment_saturates_and_beats_c() {
        let s = WaveguideSpec::at_ratio(B, 0.8).unwrap();
        let kap = waveguide_dispersion(&s).kappa.im;
        let t1 = traversal_time_mapped(&s, 15.0 / kap).unwrap();
        let t2 = traversal_time_mapped(&s, 30.0 / kap).unwrap();
        assert!((t2 / t1 - 1.0).abs() < 1e-6);
        // the opaque limit 2/(v κ) with v = c
        assert!((t1 * C_SI * kap / 2.0 - 1.0).abs() < 1e-6);
        let th = superluminal_threshold(&s).unwrap();
        assert!(th > 0.0 && th < 15.0);
        let l = 1.01 * th / kap;
        assert!(l / traversal_time_mapped(&s, l).unwrap() > C_SI);
    }

    #[test]
    fn zero_gap_is_single_wide_barrier() {
        let u = UnitSystem::ELECTRON;
        let k = u.k_of_e(5.0);
        let a = double_barrier_time(3.0, 0.0, 10.0, k, DEFAULT_MARGIN, &u).unwrap();
        let b = phase_time_closed(&SquareBarrierParams::new(10.0, 6.0).unwrap(), k, &u);
        assert!((a.tau / b - 1.0).abs() < 1e-6);
    }

    #[test]
    fn transparent_limit_is_ballistic() {
        let u = UnitSystem::ELECTRON;
        let k = u.k_of_e(5.0);
        let a = double_barrier_time(3.0, 4.0, 0.0, k, DEFAULT_MARGIN, &u).unwrap();
        assert!((a.tau / (10.0 / u.velocity(k)) - 1.0).abs() < 1e-9);
    }
}
