//! Runs the invariant suite in-process, then again with a 1% error in p^2.

use elliptica::checks::{run_checks, VerifySettings};

fn main() {
    let settings = VerifySettings::default();
    for c in run_checks(&settings, None) {
        println!("{:<20} {:<5} {:.3e} (tol {:.0e})", c.name, c.pass, c.value, c.tol);
    }

    let broken = VerifySettings { dispersion_error: 0.01, ..settings };
    println!("\nwith p^2 off by 1%:");
    for c in run_checks(&broken, Some("eom")) {
        println!("{:<20} {:<5} {:.3e}", c.name, c.pass, c.value);
    }
}
