//! Bohm trajectories dx/dt = J/ρ through the packet's flow.

use rayon::prelude::*;

use super::PacketField;
use crate::error::{Error, Result};
use crate::quadrature::composite_nodes;

/// Local velocity J/ρ in Å/s.
pub fn bohm_velocity(field: &PacketField, x: f64, t: f64, rho_floor: f64) -> Result<f64> {
    let (rho, j) = field.density_current(x, t);
    if !(rho > rho_floor) {
        return Err(Error::NodeProximity { x, rho });
    }
    Ok(j / rho)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BohmConfig {
    pub t_start: f64,
    pub t_end: f64,
    /// Local error target on x, in Å.
    pub tol: f64,
    pub max_step: f64,
    pub rho_floor: f64,
    /// Integration stops once x passes this point.
    pub x_stop: f64,
}

impl Default for BohmConfig {
    fn default() -> Self {
        Self { t_start: -6e-14, t_end: 6e-14, tol: 1e-6, max_step: 2e-16, rho_floor: 1e-30, x_stop: f64::INFINITY }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub x0: f64,
    pub weight: f64,
    pub t: Vec<f64>,
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    /// Stopped at a density node.
    pub degenerate: bool,
}

impl Trajectory {
    /// Times of every upward passage through `xc`, on the cubic Hermite interpolant.
    pub fn upward_crossings(&self, xc: f64) -> Vec<f64> {
        let mut out = Vec::new();
        for i in 1..self.t.len() {
            let (x0, x1) = (self.x[i - 1], self.x[i]);
            if x0 < xc && x1 >= xc {
                out.push(self.hermite_root(i, xc));
            }
        }
        out
    }

    fn hermite_root(&self, i: usize, xc: f64) -> f64 {
        let (t0, t1) = (self.t[i - 1], self.t[i]);
        let h = t1 - t0;
        let (x0, x1, v0, v1) = (self.x[i - 1], self.x[i], self.v[i - 1], self.v[i]);
        let at = |s: f64| {
            let (s2, s3) = (s * s, s * s * s);
            (2.0 * s3 - 3.0 * s2 + 1.0) * x0 + (s3 - 2.0 * s2 + s) * h * v0 + (-2.0 * s3 + 3.0 * s2) * x1
                + (s3 - s2) * h * v1
        };
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if at(mid) < xc {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        t0 + 0.5 * (lo + hi) * h
    }

    pub fn final_x(&self) -> f64 {
        *self.x.last().unwrap_or(&self.x0)
    }
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn integrate(field: &PacketField, x0: f64, weight: f64, cfg: &BohmConfig) -> Trajectory {
    let mut tr = Trajectory { x0, weight, t: vec![cfg.t_start], x: vec![x0], v: Vec::new(), degenerate: false };
    let f = |x: f64, t: f64| bohm_velocity(field, x, t, cfg.rho_floor);
    let mut t = cfg.t_start;
    let mut x = x0;
    let mut k1 = match f(x, t) {
        Ok(v) => v,
        Err(_) => {
            tr.degenerate = true;
            tr.v.push(f64::NAN);
            return tr;
        }
    };
    tr.v.push(k1);
    let mut h = cfg.max_step.min(cfg.t_end - t);
    while t < cfg.t_end && x < cfg.x_stop {
        h = h.min(cfg.t_end - t);
        let mut k = [0.0; 7];
        k[0] = k1;
        let mut failed = false;
        for s in 1..7 {
            let xs = x + h * (0..s).map(|j| A[s][j] * k[j]).sum::<f64>();
            match f(xs, t + C[s] * h) {
                Ok(v) => k[s] = v,
                Err(_) => {
                    failed = true;
                    break;
                }
            }
        }
        if failed {
            if h < 1e-6 * cfg.max_step {
                tr.degenerate = true;
                break;
            }
            h *= 0.25;
            continue;
        }
        let x5 = x + h * (0..7).map(|j| B5[j] * k[j]).sum::<f64>();
        let x4 = x + h * (0..7).map(|j| B4[j] * k[j]).sum::<f64>();
        let err = (x5 - x4).abs();
        if err <= cfg.tol {
            t += h;
            x = x5;
            k1 = k[6];
            tr.t.push(t);
            tr.x.push(x);
            tr.v.push(k1);
        }
        let fac = if err == 0.0 { 5.0 } else { (0.9 * (cfg.tol / err).powf(0.2)).clamp(0.2, 5.0) };
        h = (h * fac).min(cfg.max_step);
        if h < 1e-30 {
            tr.degenerate = true;
            break;
        }
    }
    tr
}

/// A starting position with its share of the initial probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Seed {
    pub x: f64,
    pub weight: f64,
}

/// Trajectories integrated independently from each seed.
pub fn bohm_trajectories(field: &PacketField, seeds: &[Seed], cfg: &BohmConfig) -> Vec<Trajectory> {
    seeds.par_iter().map(|s| integrate(field, s.x, s.weight, cfg)).collect()
}

/// Seed counts per stratum of the initial distribution, ordered from the front.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedStrata {
    /// Front mass P_T, the part that ends up transmitted.
    pub transmitted: usize,
    /// The next slice up to cumulative front mass `front_mass`.
    pub front: usize,
    pub front_mass: f64,
    /// Everything behind.
    pub rest: usize,
}

/// Seeds at mid-quantiles of |Ψ(x, t_start)|² inside each stratum. Trajectories
/// cannot cross, so the leading fraction P_T of the probability is what transmits.
pub fn quantile_seeds(field: &PacketField, t_start: f64, strata: &SeedStrata) -> Result<Vec<Seed>> {
    let v = field.units.velocity(field.packet.k0);
    let xc = field.packet.x0 + v * t_start;
    let spread = 1.0 / field.packet.dk + field.units.hbar_over_m() * field.packet.dk * t_start.abs();
    let (a, b) = (xc - 12.0 * spread, xc + 12.0 * spread);
    if !field.potential.is_free() && b > field.potential.x_left() {
        return Err(Error::Domain("packet overlaps the potential at t_start".into()));
    }
    let nodes = composite_nodes(a, b, 1.0);
    // upper tail mass G(x) = ∫_x^b ρ, accumulated from the right
    let mut xs = Vec::with_capacity(nodes.len());
    let mut tail = Vec::with_capacity(nodes.len());
    let mut acc = 0.0;
    for &(x, w) in nodes.iter().rev() {
        acc += w * field.evolve(x, t_start).0.norm_sqr();
        xs.push(x);
        tail.push(acc);
    }
    let total = acc;
    let locate = |g: f64| -> f64 {
        let target = g * total;
        let i = tail.partition_point(|&m| m < target).min(tail.len() - 1);
        if i == 0 {
            return xs[0];
        }
        let (m0, m1) = (tail[i - 1], tail[i]);
        let s = if m1 > m0 { (target - m0) / (m1 - m0) } else { 0.0 };
        xs[i - 1] + s * (xs[i] - xs[i - 1])
    };
    let pt = field.transmitted_weight().min(1.0);
    let pf = strata.front_mass.clamp(pt, 1.0);
    let mut seeds = Vec::new();
    let mut stratum = |lo: f64, hi: f64, n: usize| {
        for i in 0..n {
            let g = lo + (hi - lo) * (i as f64 + 0.5) / n as f64;
            seeds.push(Seed { x: locate(g), weight: (hi - lo) / n as f64 });
        }
    };
    stratum(0.0, pt, strata.transmitted);
    stratum(pt, pf, strata.front);
    stratum(pf, 1.0, strata.rest);
    Ok(seeds)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BohmTimes {
    /// Weighted mean upward passage time at x_f minus the same at x_i.
    pub tau_t: f64,
    /// Weighted variance of t(x_f) − t(x_i) over trajectories crossing both.
    pub var_direct: f64,
    pub n_transmitted: usize,
    pub degenerate: usize,
}

pub fn bohm_transmission_time(trajs: &[Trajectory], x_i: f64, x_f: f64) -> Result<BohmTimes> {
    let mut wi = (0.0, 0.0);
    let mut wf = (0.0, 0.0);
    let mut pairs = Vec::new();
    for tr in trajs {
        let ci = tr.upward_crossings(x_i);
        let cf = tr.upward_crossings(x_f);
        for t in &ci {
            wi.0 += tr.weight;
            wi.1 += tr.weight * t;
        }
        for t in &cf {
            wf.0 += tr.weight;
            wf.1 += tr.weight * t;
        }
        if let (Some(a), Some(b)) = (ci.first(), cf.last()) {
            pairs.push((tr.weight, b - a));
        }
    }
    if wf.0 == 0.0 || wi.0 == 0.0 {
        return Err(Error::Undefined("no trajectory crosses both points".into()));
    }
    let wsum: f64 = pairs.iter().map(|p| p.0).sum();
    let mean: f64 = pairs.iter().map(|p| p.0 * p.1).sum::<f64>() / wsum;
    let var_direct = pairs.iter().map(|p| p.0 * (p.1 - mean).powi(2)).sum::<f64>() / wsum;
    Ok(BohmTimes {
        tau_t: wf.1 / wf.0 - wi.1 / wi.0,
        var_direct,
        n_transmitted: pairs.len(),
        degenerate: trajs.iter().filter(|t| t.degenerate).count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packet::SpectralPacket;
    use crate::potential::PiecewisePotential;
    use crate::units::UnitSystem;

    #[test]
    fn free_trajectories_do_not_cross() {
        let u = UnitSystem::ELECTRON;
        let pk = SpectralPacket::new(u.k_of_e(5.0), 0.02).unwrap();
        let f = PacketField::new(pk, PiecewisePotential::free(), u).unwrap();
        let strata = SeedStrata { transmitted: 6, front: 0, front_mass: 1.0, rest: 0 };
        let seeds = quantile_seeds(&f, -3e-14, &strata).unwrap();
        let cfg = BohmConfig { t_start: -3e-14, t_end: 1e-14, ..Default::default() };
        let tr = bohm_trajectories(&f, &seeds, &cfg);
        // seeds run from the front backwards
        for w in tr.windows(2) {
            assert!(!w[0].degenerate && !w[1].degenerate);
            assert!(w[0].final_x() > w[1].final_x());
        }
        // the median seed moves at ħk0/m to within the spreading correction
        let mid = &tr[2];
        let v = (mid.final_x() - mid.x0) / 4e-14;
        assert!((v / u.velocity(f.packet.k0) - 1.0).abs() < 0.02);
    }

    #[test]
    fn plane_wave_limit_velocity() {
        let u = UnitSystem::ELECTRON;
        let pk = SpectralPacket::new(u.k_of_e(5.0), 1e-4).unwrap();
        let f = PacketField::new(pk, PiecewisePotential::free(), u).unwrap();
        let v = bohm_velocity(&f, 3.0, 0.0, 1e-30).unwrap();
        assert!((v / u.velocity(f.packet.k0) - 1.0).abs() < 1e-6);
    }
}
