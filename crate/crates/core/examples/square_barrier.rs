//! Transmission amplitude and phases of a square barrier, closed form against
//! the transfer matrix.
use tunneltime::{closed_form_square, solve_transfer_matrix, SquareBarrierParams, UnitSystem};

fn main() -> tunneltime::Result<()> {
    let u = UnitSystem::ELECTRON;
    let params = SquareBarrierParams::new(10.0, 5.0)?;
    println!("{:>6} {:>14} {:>14} {:>12} {:>12}", "E_eV", "|T|^2", "|T|^2 matrix", "alpha", "beta");
    for e in [1.0, 3.0, 5.0, 7.0, 9.0, 11.0] {
        let k = u.k_of_e(e);
        let c = closed_form_square(&params, k, &u)?;
        let s = solve_transfer_matrix(&params.potential(), k, &u)?;
        println!(
            "{e:>6.1} {:>14.6e} {:>14.6e} {:>12.6} {:>12.6}",
            c.t * c.t,
            s.transmission().powi(2),
            c.alpha,
            c.beta
        );
    }
    Ok(())
}
