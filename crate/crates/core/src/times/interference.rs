use super::phase::{closed_alpha_prime, K_STEP};
use super::{check_k, dwell_time, phase_time_closed, richardson};
use crate::error::{Error, Result};
use crate::packet::SpectralPacket;
use crate::potential::PiecewisePotential;
use crate::scattering::{closed_form_square, delta_barrier_limit, solve_transfer_matrix, SquareBarrierParams};
use crate::units::UnitSystem;

/// Dwell time over (x1, x2) split into channel phase times and the interference term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfInterference {
    pub tau_dwell: f64,
    /// (x2 − x1 + α')/v.
    pub tau_t: f64,
    /// (β' − 2x1)/v.
    pub tau_r: f64,
    pub t2: f64,
    pub r2: f64,
    /// (mR/ħk²)·sin(β − 2kx1).
    pub interference_term: f64,
    /// τ^D − [|T|²τ_T + |R|²τ_R + interference term].
    pub residual: f64,
    /// τ^D − (|T|²τ_T + |R|²τ_R).
    pub delta_dwell: f64,
}

pub fn self_interference_identity(
    params: &SquareBarrierParams,
    k: f64,
    x1: f64,
    x2: f64,
    units: &UnitSystem,
) -> Result<SelfInterference> {
    check_k(k)?;
    if x1 > 0.0 || x2 < params.d {
        return Err(Error::Domain(format!("need x1 <= 0 and x2 >= d, got {x1}, {x2}")));
    }
    let sol = closed_form_square(params, k, units)?;
    let v = units.velocity(k);
    let ap = closed_alpha_prime(params, k, units);
    let bp = v * phase_time_closed(params, k, units);
    let tau_t = (x2 - x1 + ap) / v;
    let tau_r = (bp - 2.0 * x1) / v;
    let tau_dwell = dwell_time(&params.potential(), k, x1, x2, units)?;
    let interference_term = sol.r * (sol.beta - 2.0 * k * x1).sin() / (units.hbar_over_m() * k * k);
    let (t2, r2) = (sol.t * sol.t, sol.r * sol.r);
    let delta_dwell = tau_dwell - (t2 * tau_t + r2 * tau_r);
    Ok(SelfInterference {
        tau_dwell,
        tau_t,
        tau_r,
        t2,
        r2,
        interference_term,
        residual: delta_dwell - interference_term,
        delta_dwell,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepTimes {
    /// β'/v from the transfer matrix.
    pub dtau_r: f64,
    /// 2m/(ħkκ).
    pub dtau_r_closed: f64,
    /// Dwell time in the step region (0, ∞).
    pub dwell: f64,
    /// dwell − |R|²Δτ_R.
    pub delta_dwell: f64,
}

/// Times for an infinitely thick barrier below its top.
pub fn step_barrier_times(v0: f64, k: f64, units: &UnitSystem) -> Result<StepTimes> {
    check_k(k)?;
    let kap2 = units.s_of(v0, k);
    if kap2 <= 0.0 {
        return Err(Error::Domain("step times need E < V0".into()));
    }
    let kap = kap2.sqrt();
    let step = PiecewisePotential::step(v0);
    let st = solve_transfer_matrix(&step, k, units)?;
    let v = units.velocity(k);
    let db = richardson(|kk| Ok(solve_transfer_matrix(&step, kk, units)?.beta()), k, K_STEP * k, true)?;
    let dtau_r = db / v;
    let dwell = st.psi(0.0).0.norm_sqr() / (2.0 * kap * v);
    let r2 = st.reflection().powi(2);
    Ok(StepTimes { dtau_r, dtau_r_closed: 2.0 / (kap * v), dwell, delta_dwell: dwell - r2 * dtau_r })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaTimes {
    pub dtau_t: f64,
    pub dtau_r: f64,
    pub dwell: f64,
    pub transmission_probability: f64,
}

/// Phase times of g·δ(x): both equal |T|²·g/(m v³), while the dwell time vanishes.
pub fn delta_barrier_times(strength: f64, k: f64, units: &UnitSystem) -> Result<DeltaTimes> {
    let s = delta_barrier_limit(strength, k, units)?;
    let v = units.velocity(k);
    let p = s.t * s.t;
    let m = units.hbar_ev_s / units.hbar_over_m();
    let dt = p * strength / (m * v * v * v);
    Ok(DeltaTimes { dtau_t: dt, dtau_r: dt, dwell: 0.0, transmission_probability: p })
}

/// Packet averages of the dwell-time decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketDwellCheck {
    pub mean_dwell: f64,
    /// ⟨|T|²⟩⟨τ_T⟩ + ⟨|R|²⟩⟨τ_R⟩.
    pub product_form: f64,
    /// ⟨|T|²τ_T⟩ + ⟨|R|²τ_R⟩.
    pub channel_form: f64,
    pub mean_interference: f64,
}

impl PacketDwellCheck {
    pub fn relative_residual(&self) -> f64 {
        (self.mean_dwell - self.product_form).abs() / self.mean_dwell.abs()
    }
}

/// Average the stationary decomposition over the packet's |f|² weights.
pub fn packet_dwell_decomposition(
    params: &SquareBarrierParams,
    packet: &SpectralPacket,
    x1: f64,
    x2: f64,
    units: &UnitSystem,
) -> Result<PacketDwellCheck> {
    let pw = packet.probability_weights();
    let mut acc = [0.0; 7];
    for (&k, w) in packet.nodes.iter().zip(pw) {
        let s = self_interference_identity(params, k, x1, x2, units)?;
        let vals = [s.tau_dwell, s.t2, s.tau_t, s.r2, s.tau_r, s.t2 * s.tau_t + s.r2 * s.tau_r, s.interference_term];
        for (a, v) in acc.iter_mut().zip(vals) {
            *a += w * v;
        }
    }
    Ok(PacketDwellCheck {
        mean_dwell: acc[0],
        product_form: acc[1] * acc[2] + acc[3] * acc[4],
        channel_form: acc[5],
        mean_interference: acc[6],
    })
}
