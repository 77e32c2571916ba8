//! Stationary scattering states for piecewise-constant potentials.
//!
//! Phase convention: for x below the potential, ψ = e^{ikx} + amp_r·e^{-ikx};
//! above it, ψ = amp_t·e^{ikx}. So α = arg amp_t carries the -kd free-flight
//! term, and d = 0 gives α = 0.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::potential::{PiecewisePotential, Segment};
use crate::units::UnitSystem;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Beyond this κL the propagator is evaluated with e^{κL} factored out.
const SCALE_THRESHOLD: f64 = 20.0;

/// cos/cosh-type and sin/sinh-type solutions of ψ'' = sψ over a length `len`,
/// with `s·S` returned as the third entry. The returned log factor multiplies
/// all three.
fn propagator(s: f64, len: f64) -> (f64, f64, f64, f64) {
    if s > 0.0 {
        let kap = s.sqrt();
        let x = kap * len;
        if x > SCALE_THRESHOLD {
            let e = (-2.0 * x).exp();
            let c = 0.5 * (1.0 + e);
            let sh = 0.5 * (1.0 - e);
            (c, sh / kap, kap * sh, x)
        } else {
            let sh = x.sinh();
            (x.cosh(), sh / kap, kap * sh, 0.0)
        }
    } else if s < 0.0 {
        let q = (-s).sqrt();
        let x = q * len;
        let sn = x.sin();
        (x.cos(), sn / q, -q * sn, 0.0)
    } else {
        (1.0, len, 0.0, 0.0)
    }
}

/// Carry (ψ, ψ') from the right edge of a region of length `len` to its left edge.
fn step_left(s: f64, len: f64, psi: Complex64, dpsi: Complex64) -> (Complex64, Complex64, f64) {
    let (c, sn, s_sn, lg) = propagator(s, len);
    (psi * c - dpsi * sn, -psi * s_sn + dpsi * c, lg)
}

/// Solution inside one segment: ψ = A·e^{-κ(x-x_l)} + B·e^{κ(x-x_l)} with κ = sqrt(s)
/// on the principal branch, or ψ = A + B·(x-x_l) when s = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentSolution {
    pub segment: Segment,
    /// 2m(V-E)/ħ² in Å⁻².
    pub s: f64,
    pub kappa: Complex64,
    pub a: Complex64,
    pub b: Complex64,
    pub psi_left: Complex64,
    pub dpsi_left: Complex64,
    pub psi_right: Complex64,
    pub dpsi_right: Complex64,
}

impl SegmentSolution {
    pub fn eval(&self, x: f64) -> (Complex64, Complex64) {
        let (c, sn, s_sn, lg) = propagator(self.s, self.segment.x_right - x);
        let psi = self.psi_right * c - self.dpsi_right * sn;
        let dpsi = -self.psi_right * s_sn + self.dpsi_right * c;
        if lg > 0.0 {
            let f = lg.exp();
            (psi * f, dpsi * f)
        } else {
            (psi, dpsi)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringState {
    pub k: f64,
    pub e: f64,
    pub amp_t: Complex64,
    pub amp_r: Complex64,
    pub segments: Vec<SegmentSolution>,
    pub x_left: f64,
    pub x_right: f64,
    /// s of the region beyond `x_right` (−k² for free leads).
    pub tail_s: f64,
    /// ψ and ψ' at `x_right`.
    pub psi_right: Complex64,
    pub dpsi_right: Complex64,
    pub units: UnitSystem,
}

impl ScatteringState {
    pub fn transmission(&self) -> f64 {
        self.amp_t.norm()
    }

    pub fn reflection(&self) -> f64 {
        self.amp_r.norm()
    }

    pub fn alpha(&self) -> f64 {
        self.amp_t.arg()
    }

    pub fn beta(&self) -> f64 {
        self.amp_r.arg()
    }

    /// Incident probability flux ħk/m.
    pub fn incident_flux(&self) -> f64 {
        self.units.velocity(self.k)
    }

    /// ψ(x) and dψ/dx(x).
    pub fn psi(&self, x: f64) -> (Complex64, Complex64) {
        let k = self.k;
        if x < self.x_left {
            let e = (I * k * x).exp();
            let ei = e.inv();
            return (e + self.amp_r * ei, I * k * (e - self.amp_r * ei));
        }
        if x >= self.x_right {
            let y = x - self.x_right;
            let s = self.tail_s;
            return if s < 0.0 {
                let q = (-s).sqrt();
                let e = (I * q * y).exp();
                (self.psi_right * e, I * q * self.psi_right * e)
            } else if s > 0.0 {
                let kap = s.sqrt();
                let e = (-kap * y).exp();
                (self.psi_right * e, -kap * self.psi_right * e)
            } else {
                (self.psi_right, Complex64::new(0.0, 0.0))
            };
        }
        let idx = self
            .segments
            .partition_point(|sg| sg.segment.x_right <= x)
            .min(self.segments.len() - 1);
        self.segments[idx].eval(x)
    }

    pub fn density_and_current(&self, x: f64) -> (f64, f64) {
        let (p, dp) = self.psi(x);
        density_and_current(p, dp, &self.units)
    }
}

/// ρ = |ψ|² and j = (ħ/m)·Im(ψ*·ψ').
pub fn density_and_current(psi: Complex64, dpsi: Complex64, units: &UnitSystem) -> (f64, f64) {
    (psi.norm_sqr(), units.hbar_over_m() * (psi.conj() * dpsi).im)
}

/// General solver: integrate from the transmitted side back to the incident side.
pub fn solve_transfer_matrix(potential: &PiecewisePotential, k: f64, units: &UnitSystem) -> Result<ScatteringState> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::Domain(format!("wavenumber must be positive, got {k}")));
    }
    let e = units.e_of_k(k);
    let x_l = potential.x_left();
    let x_r = potential.x_right();
    let tail_s = units.s_of(potential.tail_v(), k);

    let mut psi = Complex64::new(1.0, 0.0);
    let mut dpsi = if tail_s < 0.0 {
        I * (-tail_s).sqrt()
    } else if tail_s > 0.0 {
        Complex64::new(-tail_s.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, 0.0)
    };
    let mut log_scale = 0.0;

    let n = potential.segments().len();
    // (ψ_r, ψ'_r, log at right edge, ψ_l, ψ'_l, log at left edge) per segment
    let mut raw = vec![(psi, dpsi, 0.0, psi, dpsi, 0.0); n];
    for (j, seg) in potential.segments().iter().enumerate().rev() {
        let s = units.s_of(seg.v, k);
        let right = (psi, dpsi, log_scale);
        let (p, dp, lg) = step_left(s, seg.x_right - seg.x_left, psi, dpsi);
        let norm = p.norm() + dp.norm() / k;
        psi = p / norm;
        dpsi = dp / norm;
        log_scale += lg + norm.ln();
        raw[j] = (right.0, right.1, right.2, psi, dpsi, log_scale);
    }

    let ik = I * k;
    let a_s = 0.5 * (psi + dpsi / ik) * (-ik * x_l).exp();
    let b_s = 0.5 * (psi - dpsi / ik) * (ik * x_l).exp();
    if a_s.norm() == 0.0 {
        return Err(Error::Undefined("vanishing incident coefficient".into()));
    }
    let amp_r = b_s / a_s;
    let phys = |p: Complex64, lg: f64| p * (lg - log_scale).exp() / a_s;
    let psi_right = phys(Complex64::new(1.0, 0.0), 0.0);
    let dpsi_right = psi_right * if tail_s < 0.0 {
        I * (-tail_s).sqrt()
    } else if tail_s > 0.0 {
        Complex64::new(-tail_s.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, 0.0)
    };
    let amp_t = if tail_s < 0.0 {
        let q = (-tail_s).sqrt();
        (q / k).sqrt() * psi_right * (-I * q * x_r).exp()
    } else {
        Complex64::new(0.0, 0.0)
    };

    let segments = potential
        .segments()
        .iter()
        .zip(raw)
        .map(|(seg, (pr, dpr, lr, pl, dpl, ll))| {
            let s = units.s_of(seg.v, k);
            let psi_left = phys(pl, ll);
            let dpsi_left = phys(dpl, ll);
            let kappa = Complex64::new(s, 0.0).sqrt();
            let (a, b) = if s == 0.0 {
                (psi_left, dpsi_left)
            } else {
                (0.5 * (psi_left - dpsi_left / kappa), 0.5 * (psi_left + dpsi_left / kappa))
            };
            SegmentSolution {
                segment: *seg,
                s,
                kappa,
                a,
                b,
                psi_left,
                dpsi_left,
                psi_right: phys(pr, lr),
                dpsi_right: phys(dpr, lr),
            }
        })
        .collect();

    Ok(ScatteringState {
        k,
        e,
        amp_t,
        amp_r,
        segments,
        x_left: x_l,
        x_right: x_r,
        tail_s,
        psi_right,
        dpsi_right,
        units: *units,
    })
}

/// Square barrier of height `v0` (eV) on (0, d) (Å).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquareBarrierParams {
    pub v0: f64,
    pub d: f64,
}

impl SquareBarrierParams {
    pub fn new(v0: f64, d: f64) -> Result<Self> {
        if !(v0 >= 0.0 && v0.is_finite()) {
            return Err(Error::Domain(format!("barrier height must be non-negative, got {v0}")));
        }
        if !(d >= 0.0 && d.is_finite()) {
            return Err(Error::Domain(format!("barrier width must be non-negative, got {d}")));
        }
        Ok(Self { v0, d })
    }

    /// ε² = 2mV0/ħ².
    pub fn eps2(&self, units: &UnitSystem) -> f64 {
        self.v0 / units.hbar2_2m()
    }

    pub fn eps(&self, units: &UnitSystem) -> f64 {
        self.eps2(units).sqrt()
    }

    /// Signed κ² = ε² − k²; negative above the barrier.
    pub fn kappa2(&self, k: f64, units: &UnitSystem) -> f64 {
        self.eps2(units) - k * k
    }

    pub fn potential(&self) -> PiecewisePotential {
        PiecewisePotential::square(self.v0, self.d).expect("validated params")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquareSolution {
    pub k: f64,
    pub t: f64,
    pub r: f64,
    /// Continuous in k.
    pub alpha: f64,
    /// Continuous except for π jumps where r passes through zero.
    pub beta: f64,
    pub amp_t: Complex64,
    pub amp_r: Complex64,
}

/// cosh(κd)/cos(qd) and sinh(κd)/κ or sin(qd)/q, with the κ = 0 limit exact.
pub(crate) fn square_cs(kappa2: f64, d: f64) -> (f64, f64) {
    let (c, sn, _, lg) = propagator(kappa2, d);
    if lg > 0.0 {
        let f = lg.exp();
        (c * f, sn * f)
    } else {
        (c, sn)
    }
}

/// Closed-form square-barrier amplitudes and unwrapped phases.
pub fn closed_form_square(params: &SquareBarrierParams, k: f64, units: &UnitSystem) -> Result<SquareSolution> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::Domain(format!("wavenumber must be positive, got {k}")));
    }
    let d = params.d;
    let eps2 = params.eps2(units);
    let kap2 = eps2 - k * k;
    let (c, sn) = square_cs(kap2, d);
    let num = (2.0 * k * k - eps2) * sn;
    let den = 2.0 * k * c;
    let delta = Complex64::new(den, -num);
    let amp_t = 2.0 * k * (-I * k * d).exp() / delta;
    let amp_r = -I * eps2 * sn / delta;
    let turns = if kap2 < 0.0 { ((-kap2).sqrt() * d / PI).round() } else { 0.0 };
    let phi = (num / den).atan() + turns * PI;
    let alpha = -k * d + phi;
    let beta = phi - 0.5 * PI + if sn < 0.0 { PI } else { 0.0 };
    Ok(SquareSolution { k, t: amp_t.norm(), r: amp_r.norm(), alpha, beta, amp_t, amp_r })
}

/// Dirac-delta barrier g·δ(x), g in eV·Å.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaSolution {
    /// |t|; the transmission probability is `t * t`.
    pub t: f64,
    pub r: f64,
    pub alpha: f64,
    pub beta: f64,
    /// mg/(ħ²k).
    pub gamma: f64,
}

pub fn delta_barrier_limit(strength: f64, k: f64, units: &UnitSystem) -> Result<DeltaSolution> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::Domain(format!("wavenumber must be positive, got {k}")));
    }
    let gamma = strength / (2.0 * units.hbar2_2m() * k);
    let amp_t = Complex64::new(1.0, 0.0) / Complex64::new(1.0, gamma);
    let amp_r = amp_t - 1.0;
    Ok(DeltaSolution {
        t: amp_t.norm(),
        r: amp_r.norm(),
        alpha: -gamma.atan(),
        beta: -0.5 * PI * gamma.signum() - gamma.atan(),
        gamma,
    })
}

/// Transmission magnitudes of barriers (0, d) with V0·d = `strength`, one per width.
pub fn delta_limit_sequence(strength: f64, k: f64, widths: &[f64], units: &UnitSystem) -> Result<Vec<f64>> {
    widths
        .iter()
        .map(|&d| {
            let p = PiecewisePotential::square(strength / d, d)?;
            Ok(solve_transfer_matrix(&p, k, units)?.transmission())
        })
        .collect()
}

/// Wrap to (−π, π].
pub fn wrap_phase(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Remove 2π jumps along a sweep.
pub fn unwrap_phases(phases: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(phases.len());
    let mut prev: Option<f64> = None;
    for &p in phases {
        let v = match prev {
            None => p,
            Some(q) => q + wrap_phase(p - q),
        };
        out.push(v);
        prev = Some(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u() -> UnitSystem {
        UnitSystem::ELECTRON
    }

    #[test]
    fn free_potential_is_transparent() {
        let s = solve_transfer_matrix(&PiecewisePotential::free(), 1.0, &u()).unwrap();
        assert!((s.amp_t - 1.0).norm() < 1e-15);
        assert!(s.amp_r.norm() < 1e-15);
    }

    #[test]
    fn rejects_nonpositive_k() {
        assert!(solve_transfer_matrix(&PiecewisePotential::free(), 0.0, &u()).is_err());
        assert!(solve_transfer_matrix(&PiecewisePotential::free(), -1.0, &u()).is_err());
    }

    #[test]
    fn square_matches_closed_form() {
        let p = SquareBarrierParams::new(10.0, 5.0).unwrap();
        let k = u().k_of_e(5.0);
        let tm = solve_transfer_matrix(&p.potential(), k, &u()).unwrap();
        let cf = closed_form_square(&p, k, &u()).unwrap();
        assert!((tm.transmission() / cf.t - 1.0).abs() < 1e-10);
        assert!(wrap_phase(tm.alpha() - cf.alpha).abs() < 1e-8);
        assert!(wrap_phase(tm.beta() - cf.beta).abs() < 1e-8);
        // frozen from an mpmath evaluation
        assert!((cf.t / 6.507899767409726e-3 - 1.0).abs() < 1e-9, "{}", cf.t);
    }

    #[test]
    fn step_reflects_totally() {
        let st = solve_transfer_matrix(&PiecewisePotential::step(10.0), u().k_of_e(5.0), &u()).unwrap();
        assert!((st.reflection() - 1.0).abs() < 1e-12);
        assert_eq!(st.transmission(), 0.0);
    }

    #[test]
    fn barrier_top_is_finite() {
        let p = SquareBarrierParams::new(10.0, 5.0).unwrap();
        let k = p.eps(&u());
        let tm = solve_transfer_matrix(&p.potential(), k, &u()).unwrap();
        let cf = closed_form_square(&p, k, &u()).unwrap();
        let e2d2 = p.eps2(&u()) * 25.0;
        assert!((cf.t - 1.0 / (1.0 + e2d2 / 4.0).sqrt()).abs() < 1e-12);
        assert!((tm.transmission() - cf.t).abs() < 1e-12);
    }

    #[test]
    fn interfaces_are_smooth() {
        let p = PiecewisePotential::double_barrier(10.0, 3.0, 4.0).unwrap();
        let st = solve_transfer_matrix(&p, 1.1, &u()).unwrap();
        for x in [0.0, 3.0, 7.0, 10.0] {
            let (a, da) = st.psi(x - 1e-12);
            let (b, db) = st.psi(x + 1e-12);
            assert!((a - b).norm() <= 1e-9 * a.norm().max(1e-300) + 1e-11);
            assert!((da - db).norm() <= 1e-9 * da.norm().max(1e-300) + 1e-11);
        }
    }

    #[test]
    fn opaque_interior_is_continuous() {
        // κd ≈ 40, well past the scaled-propagator threshold
        let p = PiecewisePotential::square(10.0, 35.0).unwrap();
        let st = solve_transfer_matrix(&p, u().k_of_e(5.0), &u()).unwrap();
        let (a, da) = st.psi(-1e-12);
        let (b, db) = st.psi(1e-12);
        assert!((a - b).norm() <= 1e-9 * a.norm(), "{a} {b}");
        assert!((da - db).norm() <= 1e-9 * da.norm(), "{da} {db}");
    }

    #[test]
    fn delta_matches_thin_barrier() {
        let k = 1.0;
        let g = 5.0;
        let seq = delta_limit_sequence(g, k, &[1.0, 0.1, 0.01, 0.001], &u()).unwrap();
        let exact = delta_barrier_limit(g, k, &u()).unwrap().t;
        let errs: Vec<f64> = seq.iter().map(|t| (t - exact).abs()).collect();
        // first-order convergence once d is small: tenfold thinning, tenfold smaller error
        for w in errs[1..].windows(2) {
            let ratio = w[1] / w[0];
            assert!(ratio > 0.05 && ratio < 0.2, "{errs:?}");
        }
    }

    #[test]
    fn unwrap_removes_jumps() {
        let v = unwrap_phases(&[3.0, -3.0, -2.5]);
        assert!((v[1] - (-3.0 + 2.0 * PI)).abs() < 1e-12);
    }
}

#[cfg(test)]
mod properties {
    use super::*;
    use proptest::prelude::*;

    const U: UnitSystem = UnitSystem::ELECTRON;

    fn stack() -> impl Strategy<Value = PiecewisePotential> {
        prop::collection::vec((0.2f64..4.0, -5.0f64..15.0), 1..5).prop_map(|segs| {
            let mut x = 0.0;
            let triples: Vec<(f64, f64, f64)> = segs
                .iter()
                .map(|&(w, v)| {
                    x += w;
                    (x - w, x, v)
                })
                .collect();
            PiecewisePotential::from_triples(&triples).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn unitarity_for_any_stack(p in stack(), k in 0.05f64..3.0) {
            let st = solve_transfer_matrix(&p, k, &U).unwrap();
            let sum = st.transmission().powi(2) + st.reflection().powi(2);
            prop_assert!((sum - 1.0).abs() < 1e-10, "{sum}");
        }

        #[test]
        fn transmission_is_reciprocal(p in stack(), k in 0.05f64..3.0) {
            let a = solve_transfer_matrix(&p, k, &U).unwrap();
            let b = solve_transfer_matrix(&p.reversed().unwrap(), k, &U).unwrap();
            prop_assert!((a.transmission() - b.transmission()).abs() < 1e-10 * a.transmission().max(1e-30));
        }

        #[test]
        fn translation_moves_only_the_reflection_phase(p in stack(), k in 0.05f64..3.0, dx in -5.0f64..5.0) {
            let a = solve_transfer_matrix(&p, k, &U).unwrap();
            let b = solve_transfer_matrix(&p.translated(dx), k, &U).unwrap();
            prop_assert!((a.amp_t - b.amp_t).norm() < 1e-10);
            let shifted = a.amp_r * Complex64::from_polar(1.0, 2.0 * k * dx);
            prop_assert!((b.amp_r - shifted).norm() < 1e-9);
        }

        #[test]
        fn closed_form_matches_transfer_matrix(v0 in 0.5f64..20.0, d in 0.1f64..12.0, k in 0.05f64..3.0) {
            let p = SquareBarrierParams::new(v0, d).unwrap();
            let c = closed_form_square(&p, k, &U).unwrap();
            let s = solve_transfer_matrix(&p.potential(), k, &U).unwrap();
            prop_assert!((c.t - s.transmission()).abs() < 1e-10);
            prop_assert!(wrap_phase(c.alpha - s.alpha()).abs() < 1e-8);
            if c.r > 1e-6 {
                prop_assert!(wrap_phase(c.beta - s.beta()).abs() < 1e-8);
            }
        }
    }
}
