//! Where the transmitted spectrum T(k)f(k − k0) peaks relative to k0.
use tunneltime::times::reshaping_check;
use tunneltime::{SquareBarrierParams, UnitSystem};

fn main() -> tunneltime::Result<()> {
    let u = UnitSystem::ELECTRON;
    let p = SquareBarrierParams::new(10.0, 5.0)?;
    let eps = p.eps(&u);
    println!("{:>8} {:>12} {:>12} {:>12}", "k0/eps", "shift/dk", "upper_wt", "violations");
    for ratio in [0.3, 0.5, 0.7, 0.9] {
        let k0 = ratio * eps;
        let dk = 0.1 * k0;
        let r = reshaping_check(&p, k0, dk, &u)?;
        println!("{ratio:>8.2} {:>12.4} {:>12.4} {:>12}", r.peak_shift / dk, r.upper_weight_fraction, r.violations.len());
    }
    Ok(())
}
