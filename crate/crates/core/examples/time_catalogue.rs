//! Every stationary time for one barrier across an energy sweep.
use tunneltime::times::time_report_sweep;
use tunneltime::{SquareBarrierParams, UnitSystem};

fn main() -> tunneltime::Result<()> {
    let u = UnitSystem::ELECTRON;
    let params = SquareBarrierParams::new(10.0, 5.0)?;
    let ks: Vec<f64> = (1..=12).map(|i| u.k_of_e(i as f64)).collect();
    println!(
        "{:>6} {:>11} {:>11} {:>11} {:>11} {:>11} {:>11}",
        "E_eV", "tau_eq", "phase_T", "dwell", "larmor_y", "larmor_z", "BL_T"
    );
    for r in time_report_sweep(&params, &ks, &u) {
        let r = r?;
        println!(
            "{:>6.2} {:>11.3e} {:>11.3e} {:>11.3e} {:>11.3e} {:>11.3e} {:>11.3e}",
            r.e, r.tau_eq, r.dtau_phase_t, r.tau_dwell, r.tau_larmor_y, r.tau_larmor_z, r.tau_bl_t
        );
    }
    Ok(())
}
