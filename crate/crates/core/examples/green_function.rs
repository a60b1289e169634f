//! Rest-frame Green function: closed form against direct integration, then
//! its pole-sum representation.

use elliptica::green::{kl_weights, z_delta, RestFrameGreen};
use elliptica::oracle::{integrate, OdeProblem};
use elliptica::solutions::FieldConfig;

fn main() -> elliptica::Result<()> {
    let c = FieldConfig::massive(1.0, 1.0, 2.0)?;
    let g = RestFrameGreen::new(c, 0)?;
    println!("Z = {:.16} (sqrt(2)/3 = {:.16})", z_delta(&c)?, 2f64.sqrt() / 3.0);

    let end = 2.0 * g.period();
    let ode = integrate(&OdeProblem::new(|t| g.potential(t), 0.0, end).with_tol(1e-10))?;
    println!("\n{:>10} {:>20} {:>20}", "t", "closed form", "integrated");
    for i in 0..=10 {
        let t = end * i as f64 / 10.0;
        println!("{t:>10.5} {:>20.14} {:>20.14}", g.value(t), ode.eval(t)[0]);
    }

    let poles = kl_weights(&c, 8)?;
    println!("\n{:>3} {:>20} {:>22}", "r", "mass", "weight");
    for (r, p) in poles.entries.iter().enumerate() {
        println!("{r:>3} {:>20.14} {:>22.14e}", p.mass, p.residue);
    }
    println!("sum of weights = {:.15}", poles.residue_sum());
    let p2 = 0.5 * poles.entries[0].mass.powi(2);
    println!("propagator at p^2 = {p2:.6}: {:.12}", poles.propagator(p2));
    Ok(())
}
