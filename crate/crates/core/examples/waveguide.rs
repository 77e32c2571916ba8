//! Evanescent microwave waveguide treated as a quantum barrier, plus the
//! gap independence of the traversal time through two opaque sections.
use tunneltime::optical::{gap_sweep, traversal_time_direct, traversal_time_mapped, WaveguideSpec};
use tunneltime::UnitSystem;

fn main() -> tunneltime::Result<()> {
    let b = 0.02;
    let length = 0.05;
    println!("{:>8} {:>13} {:>13} {:>10}", "w/w_c", "mapped_s", "direct_s", "evanescent");
    for ratio in [0.5, 0.7, 0.9, 1.1, 1.5] {
        let s = WaveguideSpec::at_ratio(b, ratio)?;
        let m = traversal_time_mapped(&s, length)?;
        let d = traversal_time_direct(&s, length)?;
        println!("{ratio:>8.2} {m:>13.6e} {d:>13.6e} {:>10}", s.is_evanescent());
    }

    let u = UnitSystem::ELECTRON;
    let k = u.k_of_e(5.0);
    // barrier width for kappa·d = 15 at 5 eV over a 10 eV barrier
    let d = 15.0 / u.s_of(10.0, k).sqrt();
    println!("\n{:>8} {:>13} {:>10}", "gap_A", "tau_s", "near_res");
    for g in gap_sweep(d, &[1.0, 2.0, 3.0, 5.5, 8.0], 10.0, k, 0.2, &u)? {
        println!("{:>8.2} {:>13.6e} {:>10}", g.gap, g.tau, g.near_resonance);
    }
    Ok(())
}
