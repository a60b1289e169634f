use elliptica::green::{kl_weights, RestFrameGreen, PoleSum};
use elliptica::oracle::{finite_diff, integrate, OdeProblem};
use elliptica::solutions::{Family, FieldConfig};

fn configs() -> Vec<FieldConfig> {
    vec![
        FieldConfig::massive(1.0, 1.0, 2.0).unwrap(),
        FieldConfig::massive(0.4, 1.7, 0.3).unwrap(),
        FieldConfig::massive(2.0, 0.5, 4.0).unwrap(),
        FieldConfig::massless(1.0, 2.0).unwrap(),
        FieldConfig::massless(0.6, 5.0).unwrap(),
        FieldConfig::ssb(1.0, 2.0).unwrap(),
        FieldConfig::ssb(2.5, 0.7).unwrap(),
    ]
}

fn max_ode_gap(g: &RestFrameGreen) -> f64 {
    let c = *g.config();
    let end = 2.0 * g.period();
    let problem = OdeProblem::new(|t| c.curvature(phi0(g, t)), 0.0, end)
        .with_initial(0.0, 1.0)
        .with_tol(1e-10);
    let traj = integrate(&problem).unwrap();
    (1..=1500)
        .map(|i| end * i as f64 / 1500.0)
        .map(|t| (traj.eval(t)[0] - g.value(t)).abs())
        .fold(0.0, f64::max)
}

fn phi0(g: &RestFrameGreen, t: f64) -> f64 {
    let c = g.config();
    let j = c.modulus().jacobi(g.frequency() * t + g.phase());
    c.amplitude() * if c.kind() == Family::SsbDn { j.dn } else { j.sn }
}

#[test]
fn closed_form_matches_integrated_green_function() {
    for c in configs() {
        for n in [0, 1, -2] {
            let g = RestFrameGreen::new(c, n).unwrap();
            let gap = max_ode_gap(&g);
            assert!(gap < 1e-6, "{c:?} n = {n}: {gap:e}");
        }
    }
}

#[test]
fn unit_jump_at_the_source() {
    for c in configs() {
        let g = RestFrameGreen::new(c, 0).unwrap();
        assert!(g.value(0.0).abs() < 1e-15);
        assert!((g.slope(0.0) - 1.0).abs() < 1e-12, "{c:?}");
        let fd = finite_diff(|t| g.value(t), 0.3, 1, 1e-3).unwrap();
        assert!((fd - g.slope(0.3)).abs() < 1e-9);
        assert_eq!(g.value(-0.5), 0.0);
    }
}

#[test]
fn pole_sum_reconstructs_the_time_domain_green_function() {
    for c in [FieldConfig::massless(1.0, 2.0).unwrap(), FieldConfig::ssb(1.0, 2.0).unwrap()] {
        let g = RestFrameGreen::new(c, 0).unwrap();
        let poles = kl_weights(&c, 24).unwrap();
        for i in 1..200 {
            let t = 2.0 * g.period() * i as f64 / 200.0;
            assert!((poles.time_domain(t) - g.value(t)).abs() < 1e-12, "{c:?} t = {t}");
        }
    }
}

#[test]
fn massive_sum_rule_converges() {
    let c = FieldConfig::massive(0.4, 1.7, 0.3).unwrap();
    let sum = kl_weights(&c, 32).unwrap().residue_sum();
    assert!((sum - 1.0).abs() < 1e-10, "{sum}");
}

#[test]
fn ssb_zero_frequency_pole_is_kept_with_zero_weight() {
    let poles = kl_weights(&FieldConfig::ssb(1.0, 2.0).unwrap(), 12).unwrap();
    assert!(poles.has_zero_mass_pole());
    assert_eq!(poles.entries[0].residue, 0.0);
    assert!((poles.residue_sum() - 1.0).abs() < 1e-12);
    // Quoted leading weights of the symmetry-breaking spectrum.
    assert!((poles.entries[1].residue - 0.8393465788).abs() < 1e-9);
    assert!((poles.entries[2].residue - 0.14535625).abs() < 1e-8);
}

#[test]
fn propagator_has_poles_at_the_masses() {
    let c = FieldConfig::massless(1.0, 2.0).unwrap();
    let poles = kl_weights(&c, 8).unwrap();
    let m0 = poles.entries[0].mass;
    let near = poles.propagator(m0 * m0 * (1.0 + 1e-6)).re.abs();
    let far = poles.propagator(0.5 * m0 * m0).re.abs();
    assert!(near > 1e4 * far);
    let p = poles.propagator(m0 * m0);
    assert!(p.im < 0.0 && p.im.abs() > 1e6);
}

#[test]
fn pole_tables_round_trip() {
    let poles = kl_weights(&FieldConfig::massive(1.0, 1.0, 2.0).unwrap(), 10).unwrap();
    let back = PoleSum::from_csv(&poles.to_csv()).unwrap();
    assert_eq!(back.entries, poles.entries);
    let back = PoleSum::from_json(&poles.to_json()).unwrap();
    assert_eq!(back.entries, poles.entries);
}
