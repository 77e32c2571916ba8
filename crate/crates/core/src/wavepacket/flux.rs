//! Sign-separated probability flux through fixed points and the mean times built on it.

use rayon::prelude::*;

use super::{Channel, PacketField, Probe};
use crate::error::{Error, Result};
use crate::quadrature::{cumulative_trapezoid, trapezoid};

/// Below this integrated |J±| (incident norm is one) a probe is low-confidence.
pub const FLUX_FLOOR: f64 = 1e-6;

/// Coarse scan to find where |J| lives, then a fine uniform grid over it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGridSpec {
    pub coarse_dt: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub fine_dt: f64,
    /// Coarse steps added on each side of the detected support.
    pub pad_steps: usize,
    /// |J| above this fraction of its maximum counts as support.
    pub rel_threshold: f64,
    /// How many times the scan window may double when the support touches an edge.
    pub max_expansions: usize,
}

impl Default for TimeGridSpec {
    fn default() -> Self {
        Self {
            coarse_dt: 1e-15,
            t_min: -1e-13,
            t_max: 1e-13,
            fine_dt: 1e-17,
            pad_steps: 10,
            rel_threshold: 1e-12,
            max_expansions: 4,
        }
    }
}

/// Uniform time grid t0 + i·dt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t0: f64,
    pub dt: f64,
    pub n: usize,
    /// |J| was still above threshold at an edge after the last expansion.
    pub truncated: bool,
}

impl TimeGrid {
    pub fn times(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.t0 + i as f64 * self.dt).collect()
    }

    pub fn t_end(&self) -> f64 {
        self.t0 + (self.n.saturating_sub(1)) as f64 * self.dt
    }

    fn covering(lo: f64, hi: f64, dt: f64) -> Self {
        let n = ((hi - lo) / dt).ceil() as usize + 1;
        Self { t0: lo, dt, n, truncated: false }
    }

    /// Support of |J| at one probe, padded.
    fn support(probe: &Probe, spec: &TimeGridSpec) -> (f64, f64, bool) {
        let (mut lo, mut hi) = (spec.t_min, spec.t_max);
        for _ in 0..=spec.max_expansions {
            let g = Self::covering(lo, hi, spec.coarse_dt);
            let j = probe.current_series(g.t0, g.dt, g.n);
            let jmax = j.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let thr = spec.rel_threshold * jmax;
            let first = j.iter().position(|v| v.abs() >= thr).unwrap_or(0);
            let last = j.iter().rposition(|v| v.abs() >= thr).unwrap_or(g.n - 1);
            let pad = spec.pad_steps;
            let touches_lo = first < pad;
            let touches_hi = last + pad >= g.n;
            if !(touches_lo || touches_hi) {
                let dt = spec.coarse_dt;
                return (g.t0 + (first - pad) as f64 * dt, g.t0 + (last + pad) as f64 * dt, false);
            }
            let w = hi - lo;
            if touches_lo {
                lo -= w;
            }
            if touches_hi {
                hi += w;
            }
        }
        (lo, hi, true)
    }

    /// Fine grid covering the union of the probes' supports.
    pub fn shared(probes: &[Probe], spec: &TimeGridSpec) -> Self {
        let (lo, hi, truncated) = probes
            .par_iter()
            .map(|p| Self::support(p, spec))
            .reduce(|| (f64::INFINITY, f64::NEG_INFINITY, false), |a, b| (a.0.min(b.0), a.1.max(b.1), a.2 || b.2));
        Self { truncated, ..Self::covering(lo, hi, spec.fine_dt) }
    }
}

/// J(x,t) split by sign with the running counts of forward and backward passages.
#[derive(Debug, Clone, PartialEq)]
pub struct FluxRecord {
    pub x: f64,
    pub grid: TimeGrid,
    pub j: Vec<f64>,
    pub j_plus: Vec<f64>,
    pub j_minus: Vec<f64>,
    /// ∫_{−∞}^t J₊ dt'.
    pub n_gt: Vec<f64>,
    /// ∫_{−∞}^t |J₋| dt'.
    pub n_lt: Vec<f64>,
}

impl FluxRecord {
    pub fn from_current(x: f64, grid: TimeGrid, j: Vec<f64>) -> Self {
        let j_plus: Vec<f64> = j.iter().map(|v| v.max(0.0)).collect();
        let j_minus: Vec<f64> = j.iter().map(|v| v.min(0.0)).collect();
        let t = grid.times();
        let n_gt = cumulative_trapezoid(&t, &j_plus);
        let abs_minus: Vec<f64> = j_minus.iter().map(|v| -v).collect();
        let n_lt = cumulative_trapezoid(&t, &abs_minus);
        Self { x, grid, j, j_plus, j_minus, n_gt, n_lt }
    }

    pub fn times(&self) -> Vec<f64> {
        self.grid.times()
    }

    pub fn total(&self) -> f64 {
        trapezoid(&self.times(), &self.j)
    }

    fn weights(v: &[f64], t: &[f64]) -> Vec<f64> {
        let total = trapezoid(t, v);
        if total == 0.0 {
            return vec![0.0; v.len()];
        }
        v.iter().map(|x| x / total).collect()
    }

    /// w₊ = J₊/∫J₊, a probability density in t.
    pub fn w_plus(&self) -> Vec<f64> {
        Self::weights(&self.j_plus, &self.times())
    }

    /// w₋ = J₋/∫J₋.
    pub fn w_minus(&self) -> Vec<f64> {
        Self::weights(&self.j_minus, &self.times())
    }

    pub fn stats(&self) -> ArrivalStats {
        let t = self.times();
        let moments = |v: &[f64]| {
            let m0 = trapezoid(&t, v);
            let ty: Vec<f64> = t.iter().zip(v).map(|(t, y)| t * y).collect();
            let m1 = trapezoid(&t, &ty) / m0;
            let dy: Vec<f64> = t.iter().zip(v).map(|(t, y)| (t - m1).powi(2) * y).collect();
            (m0, m1, (trapezoid(&t, &dy) / m0).max(0.0))
        };
        let (p0, p1, p2) = moments(&self.j_plus);
        let (m0, m1, m2) = moments(&self.j_minus);
        ArrivalStats {
            mean_t_plus: p1,
            mean_t_minus: m1,
            var_t_plus: p2,
            var_t_minus: m2,
            total_plus_flux: p0,
            total_minus_flux: -m0,
            plus_low_confidence: self.grid.truncated || !(p0 >= FLUX_FLOOR),
            minus_low_confidence: self.grid.truncated || !(-m0 >= FLUX_FLOOR),
        }
    }
}

/// Means and variances of the forward and backward passage times at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrivalStats {
    pub mean_t_plus: f64,
    pub mean_t_minus: f64,
    pub var_t_plus: f64,
    pub var_t_minus: f64,
    pub total_plus_flux: f64,
    /// ∫|J₋|dt.
    pub total_minus_flux: f64,
    pub plus_low_confidence: bool,
    pub minus_low_confidence: bool,
}

/// Flux record at one point on its own fine grid.
pub fn flux_series(field: &PacketField, x: f64, spec: &TimeGridSpec) -> FluxRecord {
    flux_records(field, &[x], spec).pop().expect("one record")
}

/// Records at several points on one shared grid.
pub fn flux_records(field: &PacketField, xs: &[f64], spec: &TimeGridSpec) -> Vec<FluxRecord> {
    let probes: Vec<Probe> = xs.iter().map(|&x| field.probe(x, Channel::Full)).collect();
    let grid = TimeGrid::shared(&probes, spec);
    probes
        .par_iter()
        .map(|p| FluxRecord::from_current(p.x, grid, p.current_series(grid.t0, grid.dt, grid.n)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanTimes {
    /// t̄₊(x_f) − t̄₊(x_i); the penetration time when x_f lies inside the barrier.
    pub tau_t: f64,
    /// t̄₋(x_i) − t̄₊(x_i).
    pub tau_r: f64,
    pub tau_pen: f64,
    /// t̄₋(x_f) − t̄₊(x_f).
    pub tau_ret: f64,
    /// σ²(t₊(x_f)) + σ²(t₊(x_i)), which assumes independent entry and exit.
    pub var_tau_t_additive: f64,
    pub at_xi: ArrivalStats,
    pub at_xf: ArrivalStats,
    pub low_confidence: bool,
}

pub fn mean_times(at_xi: &FluxRecord, at_xf: &FluxRecord) -> Result<MeanTimes> {
    if at_xi.grid != at_xf.grid {
        return Err(Error::Domain("flux records must share one time grid".into()));
    }
    let si = at_xi.stats();
    let sf = at_xf.stats();
    let tau_t = sf.mean_t_plus - si.mean_t_plus;
    Ok(MeanTimes {
        tau_t,
        tau_r: si.mean_t_minus - si.mean_t_plus,
        tau_pen: tau_t,
        tau_ret: sf.mean_t_minus - sf.mean_t_plus,
        var_tau_t_additive: sf.var_t_plus + si.var_t_plus,
        at_xi: si,
        at_xf: sf,
        low_confidence: si.plus_low_confidence || sf.plus_low_confidence,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    pub x: f64,
    /// τ_Pen(x_ref, x).
    pub tau_pen: f64,
    /// τ_Ret(x, x).
    pub tau_ret: f64,
    pub plus_low_confidence: bool,
    pub minus_low_confidence: bool,
}

/// Penetration times from `x_ref` and return times at each x, all on one grid.
pub fn penetration_profile(
    field: &PacketField,
    x_ref: f64,
    xs: &[f64],
    spec: &TimeGridSpec,
) -> Result<Vec<ProfilePoint>> {
    let mut all = vec![x_ref];
    all.extend_from_slice(xs);
    let recs = flux_records(field, &all, spec);
    let r0 = recs[0].stats();
    Ok(recs[1..]
        .iter()
        .map(|r| {
            let s = r.stats();
            ProfilePoint {
                x: r.x,
                tau_pen: s.mean_t_plus - r0.mean_t_plus,
                tau_ret: s.mean_t_minus - s.mean_t_plus,
                plus_low_confidence: s.plus_low_confidence || r0.plus_low_confidence,
                minus_low_confidence: s.minus_low_confidence,
            }
        })
        .collect())
}

/// [∫t J(x2,t)dt − ∫t J(x1,t)dt] / ∫J_in(x1,t)dt.
pub fn dwell_time_packet(field: &PacketField, x1: f64, x2: f64, spec: &TimeGridSpec) -> Result<f64> {
    if x2 <= x1 {
        return Err(Error::Domain("dwell interval must have x2 > x1".into()));
    }
    let probes = [
        field.probe(x1, Channel::Full),
        field.probe(x2, Channel::Full),
        field.probe(x1, Channel::Incident),
    ];
    let grid = TimeGrid::shared(&probes, spec);
    let t = grid.times();
    let js: Vec<Vec<f64>> = probes.iter().map(|p| p.current_series(grid.t0, grid.dt, grid.n)).collect();
    let first = |j: &[f64]| trapezoid(&t, &t.iter().zip(j).map(|(t, y)| t * y).collect::<Vec<_>>());
    let j_in = trapezoid(&t, &js[2]);
    if !(j_in > 0.0) {
        return Err(Error::Undefined("no incident flux".into()));
    }
    Ok((first(&js[1]) - first(&js[0])) / j_in)
}

/// Channel-separated mean times. Meaningful only when incident, reflected and
/// transmitted packets are fully separated at the probe points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparatedTimes {
    pub tau_t: f64,
    pub tau_r: f64,
    pub valid_only_for_separated_packets: bool,
}

pub fn separated_packet_times(field: &PacketField, x_i: f64, x_f: f64, spec: &TimeGridSpec) -> Result<SeparatedTimes> {
    if x_i > field.potential.x_left() || x_f < field.potential.x_right() {
        return Err(Error::Domain("x_i must lie before and x_f after the potential".into()));
    }
    let probes = [
        field.probe(x_i, Channel::Incident),
        field.probe(x_f, Channel::Full),
        field.probe(x_i, Channel::Reflected),
    ];
    let grid = TimeGrid::shared(&probes, spec);
    let t = grid.times();
    let mean = |j: &[f64]| {
        let ty: Vec<f64> = t.iter().zip(j).map(|(t, y)| t * y).collect();
        trapezoid(&t, &ty) / trapezoid(&t, j)
    };
    let js: Vec<Vec<f64>> = probes.iter().map(|p| p.current_series(grid.t0, grid.dt, grid.n)).collect();
    let t_in = mean(&js[0]);
    Ok(SeparatedTimes {
        tau_t: mean(&js[1]) - t_in,
        tau_r: mean(&js[2]) - t_in,
        valid_only_for_separated_packets: true,
    })
}
