//! Phase time saturating with barrier width while the equal-speed time grows.
use tunneltime::{time_report, SquareBarrierParams, UnitSystem};

fn main() -> tunneltime::Result<()> {
    let u = UnitSystem::ELECTRON;
    let k = u.k_of_e(5.0);
    let p = SquareBarrierParams::new(10.0, 1.0)?;
    // opaque limit of the phase time, 2m/(ħkκ)
    let sat = 2.0 / (u.hbar_over_m() * k * p.kappa2(k, &u).sqrt());
    println!("saturation {sat:.4e} s");
    println!("{:>6} {:>12} {:>12} {:>12}", "d_A", "tau_eq", "phase_T", "dwell");
    for d in [1.0, 2.0, 5.0, 10.0, 15.0, 20.0, 30.0] {
        let p = SquareBarrierParams::new(10.0, d)?;
        let r = time_report(&p, k, &u)?;
        println!("{d:>6.1} {:>12.4e} {:>12.4e} {:>12.4e}", r.tau_eq, r.dtau_phase_t, r.tau_dwell);
    }
    Ok(())
}
