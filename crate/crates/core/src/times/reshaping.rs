use super::{check_k, richardson};
use crate::error::{Error, Result};
use crate::quadrature::trapezoid;
use crate::scattering::{closed_form_square, SquareBarrierParams};
use crate::units::UnitSystem;

pub const DEFAULT_POINTS: usize = 4001;
const HALF_SPAN: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReshapingRow {
    pub k: f64,
    pub t: f64,
    pub f: f64,
    pub product: f64,
    pub t_prime: f64,
    /// True where k > k0 and T' > T·(k − k0)/Δk², i.e. T·f still rises.
    pub violates: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReshapingReport {
    pub k0: f64,
    pub dk: f64,
    /// argmax of T(k)f(k − k0).
    pub peak_k: f64,
    pub peak_shift: f64,
    /// Same on a grid twice as fine.
    pub peak_shift_refined: f64,
    /// Maximal k-intervals above k0 where T·f is still increasing.
    pub violations: Vec<(f64, f64)>,
    /// ∫_{k>k0}(Tf)² / ∫(Tf)².
    pub upper_weight_fraction: f64,
}

fn gaussian(k: f64, k0: f64, dk: f64) -> f64 {
    let u = (k - k0) / dk;
    (-0.5 * u * u).exp()
}

/// T, f, their product and T' on a uniform grid over k0 ± 8Δk (clipped at k > 0).
pub fn reshaping_table(
    params: &SquareBarrierParams,
    k0: f64,
    dk: f64,
    n: usize,
    units: &UnitSystem,
) -> Result<Vec<ReshapingRow>> {
    check_k(k0)?;
    if !(dk > 0.0) || n < 3 {
        return Err(Error::Domain("need dk > 0 and at least three grid points".into()));
    }
    let lo = (k0 - HALF_SPAN * dk).max(1e-6 * k0);
    let hi = k0 + HALF_SPAN * dk;
    let h = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| {
            let k = lo + h * i as f64;
            let t = closed_form_square(params, k, units)?.t;
            let tp = richardson(|kk| Ok(closed_form_square(params, kk, units)?.t), k, 1e-6 * k, false)?;
            let f = gaussian(k, k0, dk);
            let violates = k > k0 && tp > t * (k - k0) / (dk * dk);
            Ok(ReshapingRow { k, t, f, product: t * f, t_prime: tp, violates })
        })
        .collect()
}

fn refined_argmax(rows: &[ReshapingRow]) -> f64 {
    let (i, _) = rows
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.product.total_cmp(&b.1.product))
        .expect("non-empty grid");
    if i == 0 || i + 1 == rows.len() {
        return rows[i].k;
    }
    let (y0, y1, y2) = (rows[i - 1].product, rows[i].product, rows[i + 1].product);
    let den = y0 - 2.0 * y1 + y2;
    let h = rows[i + 1].k - rows[i].k;
    if den == 0.0 {
        rows[i].k
    } else {
        rows[i].k + 0.5 * h * (y0 - y2) / den
    }
}

pub fn reshaping_check(params: &SquareBarrierParams, k0: f64, dk: f64, units: &UnitSystem) -> Result<ReshapingReport> {
    let rows = reshaping_table(params, k0, dk, DEFAULT_POINTS, units)?;
    let fine = reshaping_table(params, k0, dk, 2 * DEFAULT_POINTS - 1, units)?;
    let peak_k = refined_argmax(&rows);
    let peak_fine = refined_argmax(&fine);

    let mut violations = Vec::new();
    let mut open: Option<f64> = None;
    for (i, r) in rows.iter().enumerate() {
        match (r.violates, open) {
            (true, None) => open = Some(r.k),
            (false, Some(s)) => {
                violations.push((s, rows[i - 1].k));
                open = None;
            }
            _ => {}
        }
    }
    if let Some(s) = open {
        violations.push((s, rows.last().unwrap().k));
    }

    let ks: Vec<f64> = rows.iter().map(|r| r.k).collect();
    let p2: Vec<f64> = rows.iter().map(|r| r.product * r.product).collect();
    let upper: Vec<f64> = rows.iter().zip(&p2).map(|(r, &y)| if r.k > k0 { y } else { 0.0 }).collect();
    let total = trapezoid(&ks, &p2);
    let upper_weight_fraction = if total > 0.0 { trapezoid(&ks, &upper) / total } else { f64::NAN };

    Ok(ReshapingReport {
        k0,
        dk,
        peak_k,
        peak_shift: peak_k - k0,
        peak_shift_refined: peak_fine - k0,
        violations,
        upper_weight_fraction,
    })
}
