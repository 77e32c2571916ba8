use super::PacketField;
use crate::error::{Error, Result};
use crate::quadrature::composite_nodes;
use crate::units::UnitSystem;

/// Step sizes of the centred differences in the continuity check.
const DT: f64 = 1e-18;
const DX: f64 = 1e-3;
/// Density below which |Ψ|'' / |Ψ| is not evaluated.
const RHO_FLOOR: f64 = 1e-24;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuityCheck {
    pub max_residual: f64,
    pub max_djdx: f64,
}

impl ContinuityCheck {
    pub fn relative(&self) -> f64 {
        self.max_residual / self.max_djdx
    }
}

/// max |∂ρ/∂t + ∂J/∂x| over the (x, t) grid, both derivatives by centred differences.
pub fn continuity_residual(field: &PacketField, xs: &[f64], ts: &[f64]) -> ContinuityCheck {
    let mut out = ContinuityCheck { max_residual: 0.0, max_djdx: 0.0 };
    for &x in xs {
        for &t in ts {
            let drho = (field.density_current(x, t + DT).0 - field.density_current(x, t - DT).0) / (2.0 * DT);
            let dj = (field.density_current(x + DX, t).1 - field.density_current(x - DX, t).1) / (2.0 * DX);
            out.max_residual = out.max_residual.max((drho + dj).abs());
            out.max_djdx = out.max_djdx.max(dj.abs());
        }
    }
    out
}

/// ∫|Ψ|² over [a, b] at each time.
pub fn norm_series(field: &PacketField, a: f64, b: f64, ts: &[f64]) -> Vec<f64> {
    let nodes = composite_nodes(a, b, 2.0);
    ts.iter()
        .map(|&t| nodes.iter().map(|&(x, w)| w * field.evolve(x, t).0.norm_sqr()).sum())
        .collect()
}

/// −(ħ²/2m)·(d²A/dx²)/A for an amplitude profile A(x), three-point stencil of width h.
pub fn quantum_potential_profile<F: Fn(f64) -> f64>(amp: F, x: f64, h: f64, units: &UnitSystem) -> Result<f64> {
    let a0 = amp(x);
    if !(a0 * a0 > RHO_FLOOR) {
        return Err(Error::NodeProximity { x, rho: a0 * a0 });
    }
    let d2 = (amp(x + h) - 2.0 * a0 + amp(x - h)) / (h * h);
    Ok(-units.hbar2_2m() * d2 / a0)
}

/// Quantum potential of the packet at (x, t) in eV.
pub fn quantum_potential(field: &PacketField, x: f64, t: f64) -> Result<f64> {
    quantum_potential_profile(|y| field.evolve(y, t).0.norm(), x, 0.05, &field.units)
}
