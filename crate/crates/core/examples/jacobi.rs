//! Quarter periods, nomes and Jacobi functions, including negative parameters.

use elliptica::elliptic::EllipticParameter;

fn main() -> elliptica::Result<()> {
    println!("{:>6} {:>20} {:>22}", "m", "K(m)", "q(m)");
    for m in [-5.0, -1.0, -0.3, 0.0, 0.5, 0.9] {
        let p = EllipticParameter::new(m)?;
        println!("{m:>6} {:>20.16} {:>22.16e}", p.k(), p.nome());
    }

    let p = EllipticParameter::new(-1.0)?;
    println!("\nm = -1, one period (4K = {:.12})", p.period());
    println!("{:>8} {:>12} {:>12} {:>12}", "u/K", "sn", "cn", "dn");
    for i in 0..=8 {
        let u = 0.5 * i as f64 * p.k();
        let j = p.jacobi(u);
        println!("{:>8.2} {:>12.8} {:>12.8} {:>12.8}", u / p.k(), j.sn, j.cn, j.dn);
    }
    Ok(())
}
