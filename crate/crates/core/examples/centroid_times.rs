//! Packet centroid times from spectral averages, compared with the phase time
//! at the carrier wavenumber as the packet narrows in k.
use tunneltime::times::{centroid_times, summarize_spectrum};
use tunneltime::{time_report, SpectralPacket, SquareBarrierParams, UnitSystem};

fn main() -> tunneltime::Result<()> {
    let u = UnitSystem::ELECTRON;
    let p = SquareBarrierParams::new(10.0, 5.0)?;
    let k0 = u.k_of_e(5.0);
    let phase = time_report(&p, k0, &u)?.dtau_phase_t;
    println!("phase time at k0: {phase:.6e} s");
    println!("{:>8} {:>13} {:>13} {:>10}", "dk", "tau_T", "tau_R", "P_T");
    for dk in [0.08, 0.04, 0.02, 0.01, 0.005] {
        let s = summarize_spectrum(&SpectralPacket::new(k0, dk)?, &p.potential(), &u)?;
        let c = centroid_times(&s, &u)?;
        println!(
            "{dk:>8.3} {:>13.6e} {:>13.6e} {:>10.3e}",
            c.tau_t,
            c.tau_r.unwrap_or(f64::NAN),
            s.transmitted_weight
        );
    }
    Ok(())
}
