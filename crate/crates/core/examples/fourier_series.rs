//! Nome expansions of sn and dn at m = -1 and the frequency ladders.

use elliptica::elliptic::EllipticParameter;
use elliptica::fourier::{epsilon_spectrum, SeriesSpec};
use elliptica::solutions::FieldConfig;

fn main() -> elliptica::Result<()> {
    let e = EllipticParameter::new(-1.0)?;
    let sn = SeriesSpec::sn(-1.0, 16)?;
    let dn = SeriesSpec::dn(-1.0, 16)?;
    println!("nome q = {:.16}", sn.nome());
    println!("first sn coefficients: {:?}", &sn.coefficients()[..4]);
    println!("dn constant term {:.16}, first cosines {:?}", dn.constant(), &dn.coefficients()[..3]);

    let mut worst = 0.0f64;
    for i in 0..1000 {
        let u = e.period() * i as f64 / 1000.0;
        let j = e.jacobi(u);
        worst = worst.max((sn.eval(u) - j.sn).abs()).max((dn.eval(u) - j.dn).abs());
    }
    println!("max series error over a period: {worst:.2e}");
    println!("sn(K) with 8 terms: {:.12}", SeriesSpec::sn(-1.0, 8)?.eval(e.k()));

    let massless = FieldConfig::massless(1.0, 2.0)?;
    let ssb = FieldConfig::ssb(3f64.sqrt(), 2.0)?;
    println!("massless ladder: {:?}", epsilon_spectrum(&massless, 4));
    println!("ssb ladder:      {:?}", epsilon_spectrum(&ssb, 4));
    print!("\n{}", SeriesSpec::for_family(&massless, 4)?.table(massless.effective_mass()).to_csv_string());
    Ok(())
}
