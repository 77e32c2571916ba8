//! Bohmian trajectories seeded by quantiles of the initial density. Only the
//! leading part of the packet makes it through the barrier.
use tunneltime::wavepacket::{
    bohm_trajectories, bohm_transmission_time, quantile_seeds, BohmConfig, SeedStrata,
};
use tunneltime::{PacketField, PiecewisePotential, SpectralPacket, UnitSystem};

fn main() -> tunneltime::Result<()> {
    let u = UnitSystem::ELECTRON;
    let d = 5.0;
    let field = PacketField::new(
        SpectralPacket::with_nodes(u.k_of_e(5.0), 0.02, 257)?,
        PiecewisePotential::square(10.0, d)?,
        u,
    )?;
    let cfg = BohmConfig::default();
    let strata = SeedStrata { transmitted: 12, front: 4, front_mass: 0.02, rest: 4 };
    let seeds = quantile_seeds(&field, cfg.t_start, &strata)?;
    let trajs = bohm_trajectories(&field, &seeds, &cfg);
    for t in &trajs {
        println!("x0 = {:>9.2} A  weight {:.3e}  final x = {:>9.2} A", t.x0, t.weight, t.final_x());
    }
    let b = bohm_transmission_time(&trajs, 0.0, d)?;
    println!("tau_T = {:.4e} s from {} transmitted trajectories", b.tau_t, b.n_transmitted);
    Ok(())
}
