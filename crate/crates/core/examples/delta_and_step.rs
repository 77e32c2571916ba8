//! The two limiting shapes: a delta barrier, where phase times are finite but
//! the dwell time vanishes, and a step, where reflection delay equals 2m/(ħkκ).
use tunneltime::scattering::delta_limit_sequence;
use tunneltime::times::{delta_barrier_times, step_barrier_times};
use tunneltime::UnitSystem;

fn main() -> tunneltime::Result<()> {
    let u = UnitSystem::ELECTRON;
    let k = u.k_of_e(5.0);
    let g = 20.0;
    let dt = delta_barrier_times(g, k, &u)?;
    println!("delta g = {g} eV A: |T|^2 = {:.5}  phase time = {:.4e} s  dwell = {}", dt.transmission_probability, dt.dtau_t, dt.dwell);
    let widths = [1.0, 0.3, 0.1, 0.03, 0.01];
    for (w, t) in widths.iter().zip(delta_limit_sequence(g, k, &widths, &u)?) {
        println!("  width {w:>5} A  |T| = {t:.6}");
    }
    let s = step_barrier_times(10.0, k, &u)?;
    println!("step: reflection delay {:.6e} s, closed form {:.6e} s, dwell {:.6e} s", s.dtau_r, s.dtau_r_closed, s.dwell);
    Ok(())
}
