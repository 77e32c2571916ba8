//! Mean passage times from the probability current of a Gaussian packet,
//! including penetration and return times inside the barrier.
use tunneltime::wavepacket::{flux_records, mean_times, penetration_profile, TimeGridSpec};
use tunneltime::{PacketField, PiecewisePotential, SpectralPacket, UnitSystem};

fn main() -> tunneltime::Result<()> {
    let u = UnitSystem::ELECTRON;
    let d = 5.0;
    let field = PacketField::new(
        SpectralPacket::with_nodes(u.k_of_e(5.0), 0.02, 257)?,
        PiecewisePotential::square(10.0, d)?,
        u,
    )?;
    let spec = TimeGridSpec::default();
    let recs = flux_records(&field, &[0.0, d], &spec);
    let m = mean_times(&recs[0], &recs[1])?;
    println!("transmitted weight {:.4e}", field.transmitted_weight());
    println!("tau_T = {:.4e} s  tau_R = {:.4e} s  low confidence: {}", m.tau_t, m.tau_r, m.low_confidence);

    let xs: Vec<f64> = (0..=10).map(|i| d * i as f64 / 10.0).collect();
    println!("{:>6} {:>12} {:>12}", "x_A", "tau_pen", "tau_ret");
    for p in penetration_profile(&field, 0.0, &xs, &spec)? {
        let flag = if p.minus_low_confidence { " (J- weak)" } else { "" };
        println!("{:>6.2} {:>12.4e} {:>12.4e}{flag}", p.x, p.tau_pen, p.tau_ret);
    }
    Ok(())
}
