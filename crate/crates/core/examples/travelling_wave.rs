//! Builds each wave family in a boosted frame and checks the field equation
//! by finite differences at a few spacetime points.

use elliptica::solutions::{Branch, Family, FieldConfig, Solution, WaveFrame};

fn main() -> elliptica::Result<()> {
    let configs = [
        FieldConfig::massive(1.0, 1.0, 2.0)?,
        FieldConfig::massless(1.0, 2.0)?,
        FieldConfig::ssb(1.0, 2.0)?,
    ];
    for c in configs {
        let frame = WaveFrame::moving(&c, [0.4, -0.1, 0.2], 0.3);
        let wave = Solution::new(c, frame, Branch::Plus)?;
        println!(
            "{:<9} m = {:+.6}  p^2 = {:.6}  amplitude = {:.6}",
            c.kind().to_string(),
            c.parameter(),
            c.dispersion(),
            if c.kind() == Family::SsbDn { c.vev() } else { c.amplitude() },
        );
        for x in [[0.0, 0.0, 0.0, 0.0], [1.3, -0.7, 2.0, 0.5], [-2.2, 1.1, 0.0, -3.0]] {
            let r = wave.eom_residual(x, 1e-3)?;
            println!(
                "    phi{x:?} = {:+.10}  energy density {:.6}  residual {:.1e}",
                wave.evaluate(x),
                wave.hamiltonian_density(x),
                r.relative()
            );
        }
    }

    // A frame that misses the dispersion relation is rejected.
    let c = FieldConfig::massless(1.0, 2.0)?;
    let off = WaveFrame::new([1.1, 0.0, 0.0, 0.0], 0.0);
    println!("\noff-shell frame: {}", Solution::new(c, off, Branch::Plus).unwrap_err());
    Ok(())
}
