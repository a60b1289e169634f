//! Eigenpairs of the fluctuation operators around the massless and
//! symmetry-breaking waves, and the zero modes at fixed phase.

use elliptica::modes::{eigenvalue_check, fixed_phase_form, LinearizedOperator};
use elliptica::solutions::{Branch, FieldConfig, Solution, WaveFrame};

fn main() -> elliptica::Result<()> {
    for c in [FieldConfig::massless(1.0, 2.0)?, FieldConfig::ssb(1.0, 2.0)?] {
        let wave = Solution::new(c, WaveFrame::rest(&c, 0.0), Branch::Plus)?;
        let op = LinearizedOperator::new(wave)?;
        println!("{} (p^2 = {:.6})", c.kind(), op.p_squared());
        for mode in op.claimed_modes() {
            let check = eigenvalue_check(&op, &mode)?;
            println!(
                "    {}: claimed {:.12}, measured {:+.12}, residual {:.1e}",
                mode.product.name(),
                check.claimed,
                check.measured,
                check.residual
            );
        }
        let zero = op.claimed_modes()[0];
        let f = fixed_phase_form(&zero, 0.4, 0)?;
        println!(
            "    zero mode at u = 0.4, fixed phase: {:+.12} (closed form {:+.12}, quoted {:+.12})",
            f.shifted, f.closed_form, f.quoted
        );
    }
    Ok(())
}
