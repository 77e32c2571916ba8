use super::PacketField;
use crate::error::{Error, Result};
use crate::quadrature::composite_nodes;

/// GL panel length in Å for spatial integrals of |Ψ|².
const PANEL: f64 = 1.0;
/// Window probability below which the centroid is not reported.
const MIN_NORM: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CentroidSample {
    pub t: f64,
    pub x_mean: f64,
    /// ∫_window |Ψ|² dx.
    pub norm: f64,
}

/// Centre of mass of |Ψ(x,t)|² restricted to [a, b].
pub fn centroid_trajectory(field: &PacketField, t: f64, a: f64, b: f64) -> Result<CentroidSample> {
    if !(b > a) {
        return Err(Error::Domain("window must have b > a".into()));
    }
    let (mut m0, mut m1) = (0.0, 0.0);
    for (x, w) in composite_nodes(a, b, PANEL) {
        let rho = field.evolve(x, t).0.norm_sqr();
        m0 += w * rho;
        m1 += w * x * rho;
    }
    if m0 < MIN_NORM {
        return Err(Error::Undefined(format!("window [{a}, {b}] holds only {m0:e} of the probability")));
    }
    Ok(CentroidSample { t, x_mean: m1 / m0, norm: m0 })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
}

/// Least-squares line through (t, x̄) samples.
pub fn fit_line(samples: &[CentroidSample]) -> Result<LineFit> {
    let n = samples.len() as f64;
    if samples.len() < 2 {
        return Err(Error::Domain("need at least two samples".into()));
    }
    let tm = samples.iter().map(|s| s.t).sum::<f64>() / n;
    let xm = samples.iter().map(|s| s.x_mean).sum::<f64>() / n;
    let stt: f64 = samples.iter().map(|s| (s.t - tm).powi(2)).sum();
    let stx: f64 = samples.iter().map(|s| (s.t - tm) * (s.x_mean - xm)).sum();
    if stt == 0.0 {
        return Err(Error::Domain("samples share one time".into()));
    }
    let slope = stx / stt;
    let intercept = xm - slope * tm;
    let max_residual = samples
        .iter()
        .map(|s| (s.x_mean - intercept - slope * s.t).abs())
        .fold(0.0, f64::max);
    Ok(LineFit { slope, intercept, max_residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packet::SpectralPacket;
    use crate::potential::PiecewisePotential;
    use crate::scattering::solve_transfer_matrix;
    use crate::units::UnitSystem;

    #[test]
    fn free_centroid_is_linear() {
        let u = UnitSystem::ELECTRON;
        let pk = SpectralPacket::new(u.k_of_e(5.0), 0.02).unwrap();
        let f = PacketField::new(pk, PiecewisePotential::free(), u).unwrap();
        let v = u.velocity(f.packet.k0);
        let s: Vec<_> = [-2e-14, 0.0, 2e-14]
            .iter()
            .map(|&t| centroid_trajectory(&f, t, v * t - 400.0, v * t + 400.0).unwrap())
            .collect();
        let fit = fit_line(&s).unwrap();
        assert!((fit.slope / v - 1.0).abs() < 1e-6);
        assert!(fit.intercept.abs() < 1e-4);
        assert!(fit.max_residual < 1e-4);
    }

    #[test]
    fn downstream_fit_recovers_spectral_averages() {
        let u = UnitSystem::ELECTRON;
        let pot = PiecewisePotential::square(10.0, 5.0).unwrap();
        let pk = SpectralPacket::new(u.k_of_e(5.0), 0.02).unwrap();
        let f = PacketField::new(pk, pot.clone(), u).unwrap();
        let w = f.transmitted_weight();
        let kt = f.spectral_sum(|s| s.transmission().powi(2) * s.k) / w;
        let ap = f.spectral_sum(|s| {
            let h = 1e-6 * s.k;
            let a = |k: f64| solve_transfer_matrix(&pot, k, &u).unwrap().alpha();
            s.transmission().powi(2) * crate::scattering::wrap_phase(a(s.k + h) - a(s.k - h)) / (2.0 * h)
        }) / w;
        let vt = u.hbar_over_m() * kt;
        let s: Vec<_> = [6e-14, 8e-14, 1e-13]
            .iter()
            .map(|&t| centroid_trajectory(&f, t, 5.0, vt * t + 500.0).unwrap())
            .collect();
        let fit = fit_line(&s).unwrap();
        assert!((fit.slope / vt - 1.0).abs() < 1e-3, "{} {}", fit.slope, vt);
        assert!((fit.intercept + ap).abs() < 0.5, "{} {}", fit.intercept, -ap);
    }
}
