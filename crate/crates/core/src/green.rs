//! Rest-frame Green functions of the linearized field equations, their
//! normalization, and the pole-sum (Källén–Lehmann) form of the propagator.
//!
//! The Green function solves the retarded problem
//!
//! ```text
//! Δ̄″(t) + W(t)·Δ̄(t) = δ(t),   W(t) = V″(φ₀(t)),   Δ̄ = 0 for t < 0
//! ```
//!
//! so `Δ̄(0⁺) = 0` and `Δ̄′(0⁺) = 1`. Expanding it in the plane-wave
//! frequencies `ωᵣ` gives `Δ̄(t) = Σ (ρᵣ/ωᵣ) sin(ωᵣt)` and therefore
//! `Σ ρᵣ = Δ̄′(0⁺) = 1` for the untruncated sum.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Deserialize;

use crate::elliptic::EllipticParameter;
use crate::error::{Error, Result};
use crate::fourier::SeriesSpec;
use crate::io::{Cell, Table};
use crate::solutions::{Family, FieldConfig};

/// Default truncation of pole sums.
pub const DEFAULT_POLES: usize = 16;

pub fn effective_mass(config: &FieldConfig) -> f64 {
    config.effective_mass()
}

fn sn_family_only(config: &FieldConfig) -> Result<()> {
    if config.kind() == Family::SsbDn {
        return Err(Error::Unsupported(
            "Z_Δ is defined for the massive and massless families".into(),
        ));
    }
    if config.effective_mass() == 0.0 {
        return Err(Error::InvalidConfig(
            "Z_Δ needs a non-zero effective mass (mu0 and mu both vanish)".into(),
        ));
    }
    Ok(())
}

/// Closed-form normalization
/// `(2m²)^{7/2} / 4(9√2μ₀⁴μ⁴λ + √8μ₀⁸ + 10μ₀⁶μ²√λ + √2μ⁸λ² + 7μ₀²μ⁶λ^{3/2})`.
pub fn z_delta(config: &FieldConfig) -> Result<f64> {
    sn_family_only(config)?;
    let (mu0, mu, lambda) = (config.mu0(), config.mu(), config.lambda());
    let m2 = config.dispersion();
    let sqrt2 = 2f64.sqrt();
    let denom = sqrt2 * 9.0 * mu0.powi(4) * mu.powi(4) * lambda
        + 8f64.sqrt() * mu0.powi(8)
        + 10.0 * mu0.powi(6) * mu * mu * lambda.sqrt()
        + sqrt2 * mu.powi(8) * lambda * lambda
        + 7.0 * mu0 * mu0 * mu.powi(6) * lambda.powf(1.5);
    Ok((2.0 * m2).powf(3.5) / (4.0 * denom))
}

/// Reduced form `m / (μ₀² + √(2λ)μ²)`.
pub fn z_delta_reduced(config: &FieldConfig) -> Result<f64> {
    sn_family_only(config)?;
    let (mu0, mu, lambda) = (config.mu0(), config.mu(), config.lambda());
    Ok(config.effective_mass() / (mu0 * mu0 + (2.0 * lambda).sqrt() * mu * mu))
}

/// Unit-jump normalization `1 / (m(1 − k²))`.
pub fn z_delta_jump(config: &FieldConfig) -> Result<f64> {
    sn_family_only(config)?;
    Ok(1.0 / (config.effective_mass() * (1.0 - config.parameter())))
}

/// `Δ̄ₙ(t)` for one phase index `n`.
///
/// sn families: `−Z_Δ·cn·dn(mt + θₙ)` with `θₙ = (4n+1)K`.
/// SsbDn: `−√(3/2)/μ₀·sn·cn(μ₀t/√3 + θₙ)` with `θₙ = (2n+1)K(−1)`.
#[derive(Debug, Clone)]
pub struct RestFrameGreen {
    config: FieldConfig,
    n: i64,
    normalization: f64,
    frequency: f64,
    phase: f64,
    elliptic: EllipticParameter,
}

impl RestFrameGreen {
    pub fn new(config: FieldConfig, n: i64) -> Result<Self> {
        let elliptic = config.modulus();
        let k = elliptic.k();
        let (normalization, frequency, phase) = match config.kind() {
            Family::SsbDn => (
                1.5f64.sqrt() / config.mu0(),
                config.mu0() / 3f64.sqrt(),
                (2 * n + 1) as f64 * k,
            ),
            _ => (
                z_delta(&config)?,
                config.effective_mass(),
                (4 * n + 1) as f64 * k,
            ),
        };
        Ok(RestFrameGreen {
            config,
            n,
            normalization,
            frequency,
            phase,
            elliptic,
        })
    }

    pub fn config(&self) -> &FieldConfig {
        &self.config
    }

    pub fn index(&self) -> i64 {
        self.n
    }

    /// `Z_Δ` for the sn families, `√(3/2)/μ₀` for SsbDn.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// Rate at which the elliptic argument advances with `t`.
    pub fn frequency(&self) -> f64 {
        self.frequency
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// Period in `t`: `4K/m` for the sn families, `2K/(μ₀/√3)` for SsbDn.
    pub fn period(&self) -> f64 {
        let quarters = match self.config.kind() {
            Family::SsbDn => 2.0,
            _ => 4.0,
        };
        quarters * self.elliptic.k() / self.frequency
    }

    fn argument(&self, t: f64) -> f64 {
        self.frequency * t + self.phase
    }

    /// `Δ̄(t)`; zero for `t ≤ 0`.
    pub fn value(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let j = self.elliptic.jacobi(self.argument(t));
        let product = match self.config.kind() {
            Family::SsbDn => j.sn * j.cn,
            _ => j.cn * j.dn,
        };
        -self.normalization * product
    }

    /// `dΔ̄/dt` for `t > 0`; the right limit at `t = 0`.
    pub fn slope(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        let j = self.elliptic.jacobi(self.argument(t));
        let m = self.elliptic.m();
        let d = match self.config.kind() {
            // (sn·cn)′ = dn(cn² − sn²)
            Family::SsbDn => j.dn * (j.cn * j.cn - j.sn * j.sn),
            // (cn·dn)′ = −sn·dn² − m·sn·cn²
            _ => -j.sn * (j.dn * j.dn + m * j.cn * j.cn),
        };
        -self.normalization * self.frequency * d
    }

    /// `W(t) = V″(φ₀(t))` along the background with phase `θₙ`.
    pub fn potential(&self, t: f64) -> f64 {
        let j = self.elliptic.jacobi(self.argument(t));
        let shape = match self.config.kind() {
            Family::SsbDn => j.dn,
            _ => j.sn,
        };
        self.config.curvature(self.config.amplitude() * shape)
    }
}

pub fn rest_frame_green(config: &FieldConfig, n: i64, t: f64) -> Result<f64> {
    Ok(RestFrameGreen::new(*config, n)?.value(t))
}

/// Pole masses: `(2n+1)π/(2K)·m` for the sn families, `kπ/K(−1)·μ₀/√3` for SsbDn.
pub fn mass_spectrum(config: &FieldConfig, count: usize) -> Vec<f64> {
    let k = config.modulus().k();
    match config.kind() {
        Family::SsbDn => {
            let scale = config.mu0() / 3f64.sqrt();
            (0..count).map(|r| r as f64 * PI / k * scale).collect()
        }
        _ => {
            let m = effective_mass(config);
            (0..count)
                .map(|r| (2 * r + 1) as f64 * PI / (2.0 * k) * m)
                .collect()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct Pole {
    pub mass: f64,
    pub residue: f64,
}

/// Truncated spectral representation `Δ(p²) = Σ ρᵣ/(p² − mᵣ² + iε)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleSum {
    pub entries: Vec<Pole>,
    pub epsilon: f64,
}

impl PoleSum {
    /// Uses `ε = 1e-9·m²` with `m` the lightest non-zero mass.
    pub fn new(entries: Vec<Pole>) -> Self {
        let lightest = entries
            .iter()
            .map(|p| p.mass)
            .find(|&m| m > 0.0)
            .unwrap_or(1.0);
        PoleSum {
            entries,
            epsilon: 1e-9 * lightest * lightest,
        }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn masses(&self) -> Vec<f64> {
        self.entries.iter().map(|p| p.mass).collect()
    }

    pub fn residues(&self) -> Vec<f64> {
        self.entries.iter().map(|p| p.residue).collect()
    }

    pub fn residue_sum(&self) -> f64 {
        self.entries.iter().map(|p| p.residue).sum()
    }

    /// A massless entry is kept (with whatever residue it carries) rather than
    /// dropped; this reports whether one is present.
    pub fn has_zero_mass_pole(&self) -> bool {
        self.entries.iter().any(|p| p.mass == 0.0)
    }

    pub fn propagator(&self, p_squared: f64) -> Complex64 {
        self.entries
            .iter()
            .map(|p| {
                Complex64::new(p.residue, 0.0)
                    / Complex64::new(p_squared - p.mass * p.mass, self.epsilon)
            })
            .sum()
    }

    /// Retarded time-domain form `Σ (ρᵣ/mᵣ) sin(mᵣt)` for `t > 0`, zero
    /// otherwise. Massless entries contribute nothing.
    pub fn time_domain(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        self.entries
            .iter()
            .filter(|p| p.mass > 0.0)
            .map(|p| p.residue / p.mass * (p.mass * t).sin())
            .sum()
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(&["r", "mass", "residue"]);
        for (r, p) in self.entries.iter().enumerate() {
            t.push(vec![Cell::from(r), Cell::Real(p.mass), Cell::Real(p.residue)]);
        }
        t
    }

    /// CSV with columns `r, mass, residue`.
    pub fn to_csv(&self) -> String {
        self.table().to_csv_string()
    }

    /// JSON array of `{mass, residue}` objects.
    pub fn to_json(&self) -> String {
        let mut t = Table::new(&["mass", "residue"]);
        for p in &self.entries {
            t.push(vec![Cell::Real(p.mass), Cell::Real(p.residue)]);
        }
        serde_json::to_string(&t).expect("finite table serializes")
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let table = Table::read_csv(text.as_bytes())?;
        let masses = table
            .column("mass")
            .ok_or_else(|| Error::Parse("missing column \"mass\"".into()))?;
        let residues = table
            .column("residue")
            .ok_or_else(|| Error::Parse("missing column \"residue\"".into()))?;
        Ok(Self::new(
            masses
                .into_iter()
                .zip(residues)
                .map(|(mass, residue)| Pole { mass, residue })
                .collect(),
        ))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let entries: Vec<Pole> = serde_json::from_str(text)?;
        Ok(Self::new(entries))
    }
}

/// Spectral weights of the first `count` poles.
///
/// The residues follow from expanding the Green function in the plane-wave
/// components of the background's derivative: `ρᵣ = Z·ω·(±cᵣ)·κᵣ²`, where
/// `cᵣ` is the r-th series coefficient, `κᵣ` its wavenumber and `ω` the
/// rest-frame frequency. At `m = −1` this reproduces
/// `π³/(4K³)(2r+1)² e^{−(r+½)π}/(1+e^{−(2r+1)π})` (massless) and
/// `√2π³/K³ k² e^{−kπ}/(1+e^{−2kπ})` (SsbDn).
pub fn kl_weights(config: &FieldConfig, count: usize) -> Result<PoleSum> {
    if count == 0 {
        return Err(Error::Unsupported("at least one pole is required".into()));
    }
    let masses = mass_spectrum(config, count);
    let green = RestFrameGreen::new(*config, 0)?;
    let scale = green.normalization() * green.frequency();
    let residues: Vec<f64> = match config.kind() {
        Family::SsbDn => {
            // r = 0 is the zero-frequency term; its weight carries k² = 0.
            let series = SeriesSpec::dn(-1.0, count.saturating_sub(1).max(1))?;
            std::iter::once(0.0)
                .chain(series.coefficients().iter().enumerate().map(|(i, c)| {
                    let kappa = series.wavenumber(i);
                    let alt = if i % 2 == 0 { -1.0 } else { 1.0 };
                    scale * alt * c * kappa * kappa
                }))
                .take(count)
                .collect()
        }
        _ => {
            let series = SeriesSpec::sn(config.parameter(), count)?;
            series
                .coefficients()
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let kappa = series.wavenumber(i);
                    let alt = if i % 2 == 0 { 1.0 } else { -1.0 };
                    scale * alt * c * kappa * kappa
                })
                .collect()
        }
    };
    Ok(PoleSum::new(
        masses
            .into_iter()
            .zip(residues)
            .map(|(mass, residue)| Pole { mass, residue })
            .collect(),
    ))
}

/// `Σ_{r<count} ρᵣ/(p² − mᵣ² + iε)`.
pub fn propagator(config: &FieldConfig, p_squared: f64, count: usize, epsilon: f64) -> Result<Complex64> {
    if !(epsilon > 0.0) {
        return Err(Error::Unsupported(format!("epsilon must be positive, got {epsilon}")));
    }
    Ok(kl_weights(config, count)?.with_epsilon(epsilon).propagator(p_squared))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn massless() -> FieldConfig {
        FieldConfig::massless(1.0, 2.0).unwrap()
    }

    #[test]
    fn z_delta_spot_values() {
        let c = FieldConfig::massive(1.0, 1.0, 2.0).unwrap();
        let want = 2f64.sqrt() / 3.0;
        assert!((z_delta(&c).unwrap() - want).abs() < 1e-15);
        assert!((z_delta_reduced(&c).unwrap() - want).abs() < 1e-15);
        assert!((z_delta_jump(&c).unwrap() - want).abs() < 1e-15);

        let c = FieldConfig::massless(1.7, 0.6).unwrap();
        let m = c.effective_mass();
        assert!((z_delta(&c).unwrap() - 0.5 / m).abs() < 1e-14 / m);
        let direct = 2f64.powf(-0.75) / (1.7 * 0.6f64.powf(0.25));
        assert!((z_delta(&c).unwrap() - direct).abs() < 1e-14);
    }

    #[test]
    fn z_delta_rejects_ssb_and_vacuum() {
        assert!(z_delta(&FieldConfig::ssb(1.0, 1.0).unwrap()).is_err());
        assert!(z_delta(&FieldConfig::massive(0.0, 0.0, 1.0).unwrap()).is_err());
    }

    #[test]
    fn effective_mass_limits() {
        assert_eq!(effective_mass(&FieldConfig::massive(1.3, 0.0, 2.0).unwrap()), 1.3);
        let c = FieldConfig::massless(2.0, 0.5).unwrap();
        assert!((effective_mass(&c) - 2.0 * 0.25f64.powf(0.25)).abs() < 1e-15);
    }

    #[test]
    fn green_starts_at_zero_with_unit_slope() {
        for c in [
            FieldConfig::massive(0.8, 1.3, 1.1).unwrap(),
            massless(),
            FieldConfig::ssb(1.4, 0.7).unwrap(),
        ] {
            for n in [-2, 0, 1, 3] {
                let g = RestFrameGreen::new(c, n).unwrap();
                assert_eq!(g.value(-0.5), 0.0);
                assert!(g.value(1e-300).abs() < 1e-14);
                assert!((g.slope(0.0) - 1.0).abs() < 1e-13, "{} n={n}", c.kind());
            }
        }
    }

    #[test]
    fn massless_residues_match_closed_form_coefficients() {
        let poles = kl_weights(&massless(), 10).unwrap();
        let k = crate::elliptic::complete_k(-1.0).unwrap();
        for (r, p) in poles.entries.iter().enumerate() {
            let rf = r as f64;
            let want = PI.powi(3) / (4.0 * k.powi(3)) * (2.0 * rf + 1.0).powi(2)
                * (-(rf + 0.5) * PI).exp()
                / (1.0 + (-(2.0 * rf + 1.0) * PI).exp());
            assert!((p.residue - want).abs() < 1e-14, "r = {r}");
        }
        assert!((poles.residue_sum() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn ssb_residues_match_closed_form_coefficients() {
        let poles = kl_weights(&FieldConfig::ssb(1.9, 0.4).unwrap(), 8).unwrap();
        assert_eq!(poles.entries[0], Pole { mass: 0.0, residue: 0.0 });
        assert!(poles.has_zero_mass_pole());
        let k = crate::elliptic::complete_k(-1.0).unwrap();
        for (j, p) in poles.entries.iter().enumerate().skip(1) {
            let kf = j as f64;
            let want = 2f64.sqrt() * PI.powi(3) / k.powi(3) * kf * kf * (-kf * PI).exp()
                / (1.0 + (-2.0 * kf * PI).exp());
            assert!((p.residue - want).abs() < 1e-14, "k = {j}");
        }
        assert_eq!(kl_weights(&FieldConfig::ssb(1.0, 1.0).unwrap(), 1).unwrap().entries.len(), 1);
    }

    #[test]
    fn free_massive_limit_is_single_pole() {
        let c = FieldConfig::massive(1.3, 0.0, 2.0).unwrap();
        let poles = kl_weights(&c, 4).unwrap();
        assert!((poles.entries[0].residue - 1.0).abs() < 1e-15);
        assert!((poles.entries[0].mass - 1.3).abs() < 1e-15);
        assert!(poles.entries[1..].iter().all(|p| p.residue == 0.0));
    }

    #[test]
    fn propagator_pole_and_asymptotics() {
        let c = massless();
        let poles = kl_weights(&c, DEFAULT_POLES).unwrap();
        let m0 = poles.entries[0].mass;
        let near = poles.propagator(m0 * m0);
        assert!(near.norm() > 1e6);
        let p2 = 1e10;
        let far = propagator(&c, p2, DEFAULT_POLES, 1e-9).unwrap();
        assert!((far.re * p2 - poles.residue_sum()).abs() < 1e-5);
        assert!(propagator(&c, 1.0, 4, 0.0).is_err());
    }

    #[test]
    fn pole_sum_serialization() {
        let poles = kl_weights(&massless(), 3).unwrap();
        let csv = poles.to_csv();
        assert!(csv.starts_with("r,mass,residue\n0,"));
        assert_eq!(PoleSum::from_csv(&csv).unwrap().entries, poles.entries);
        let json = poles.to_json();
        assert!(json.starts_with("[{\"mass\":"));
        assert_eq!(PoleSum::from_json(&json).unwrap().entries, poles.entries);
        assert!(PoleSum::from_csv("r,mass\n0,1.0\n").is_err());
    }
}
