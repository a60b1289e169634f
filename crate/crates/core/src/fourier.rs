//! Trigonometric (nome) expansions of the wave profiles and the frequency
//! ladders read off from them.
//!
//! ```text
//! sn(u|m) = 2π/(K√m) Σ_{n≥0} q^{n+½}/(1 − q^{2n+1}) sin((2n+1)πu/2K)
//! dn(u|m) = π/2K + 2π/K Σ_{n≥1} qⁿ/(1 + q^{2n}) cos(nπu/K)
//! ```
//!
//! For `m < 0` the nome is negative and `√m` imaginary; the two imaginary
//! units cancel, leaving real coefficients with an alternating sign. At
//! `m = −1` this gives `(−1)ⁿ e^{−(n+½)π}/(1 + e^{−(2n+1)π})` for `sn`, and a
//! `dn` series with constant term `+π/2K` and alternating cosine terms.

use std::f64::consts::PI;

use crate::elliptic::EllipticParameter;
use crate::error::{Error, Result};
use crate::io::{Cell, Table};
use crate::solutions::{Family, FieldConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    /// Sine series over odd harmonics of `π/2K`.
    Sn,
    /// Constant plus cosine series over harmonics of `π/K`.
    Dn,
}

/// A truncated expansion `constant + amplitude·Σ cₙ·trig(kₙu)`.
#[derive(Debug, Clone)]
pub struct SeriesSpec {
    kind: SeriesKind,
    m: f64,
    q: f64,
    k: f64,
    amplitude: f64,
    constant: f64,
    coefficients: Vec<f64>,
}

impl SeriesSpec {
    pub fn sn(m: f64, terms: usize) -> Result<Self> {
        check_terms(terms)?;
        let p = EllipticParameter::new(m)?;
        let (k, q) = (p.k(), p.nome());
        let coefficients = if m == 0.0 {
            let mut c = vec![0.0; terms];
            c[0] = 1.0;
            c
        } else {
            let sign = q.signum();
            let aq = q.abs();
            let lead = 2.0 * PI / (k * m.abs().sqrt());
            (0..terms)
                .map(|n| {
                    let alt = if n % 2 == 1 { sign } else { 1.0 };
                    let odd = aq.powi(2 * n as i32 + 1);
                    lead * alt * aq.powf(n as f64 + 0.5) / (1.0 - sign * odd)
                })
                .collect()
        };
        Ok(SeriesSpec {
            kind: SeriesKind::Sn,
            m,
            q,
            k,
            amplitude: 1.0,
            constant: 0.0,
            coefficients,
        })
    }

    /// `terms` counts the cosine harmonics `n = 1..=terms`; the constant
    /// (zero-frequency) term is always present.
    pub fn dn(m: f64, terms: usize) -> Result<Self> {
        check_terms(terms)?;
        let p = EllipticParameter::new(m)?;
        let (k, q) = (p.k(), p.nome());
        let coefficients = (1..=terms)
            .map(|n| {
                let qn = q.powi(n as i32);
                2.0 * PI / k * qn / (1.0 + qn * qn)
            })
            .collect();
        Ok(SeriesSpec {
            kind: SeriesKind::Dn,
            m,
            q,
            k,
            amplitude: 1.0,
            constant: PI / (2.0 * k),
            coefficients,
        })
    }

    /// Expansion of the family's wave profile, amplitude included.
    pub fn for_family(config: &FieldConfig, terms: usize) -> Result<Self> {
        let spec = match config.kind() {
            Family::SsbDn => Self::dn(-1.0, terms)?,
            _ => Self::sn(config.parameter(), terms)?,
        };
        Ok(spec.with_amplitude(config.amplitude()))
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn nome(&self) -> f64 {
        self.q
    }

    pub fn quarter_period(&self) -> f64 {
        self.k
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    /// Zero-frequency term before the amplitude is applied.
    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Angular wavenumber (in `u`) of coefficient `i`.
    pub fn wavenumber(&self, i: usize) -> f64 {
        match self.kind {
            SeriesKind::Sn => (2 * i + 1) as f64 * PI / (2.0 * self.k),
            SeriesKind::Dn => (i + 1) as f64 * PI / self.k,
        }
    }

    pub fn eval(&self, u: f64) -> f64 {
        let sum: f64 = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let arg = self.wavenumber(i) * u;
                match self.kind {
                    SeriesKind::Sn => c * arg.sin(),
                    SeriesKind::Dn => c * arg.cos(),
                }
            })
            .sum();
        self.amplitude * (self.constant + sum)
    }

    /// `(n, coefficient, εₙ)` rows; `εₙ` is the wavenumber times `frequency`.
    /// For the dn series row 0 is the constant term with `ε₀ = 0`.
    pub fn table(&self, frequency: f64) -> Table {
        let mut t = Table::new(&["n", "coefficient", "epsilon"]);
        if self.kind == SeriesKind::Dn {
            t.push(vec![Cell::Int(0), Cell::Real(self.amplitude * self.constant), Cell::Real(0.0)]);
        }
        for (i, c) in self.coefficients.iter().enumerate() {
            let n = match self.kind {
                SeriesKind::Sn => i,
                SeriesKind::Dn => i + 1,
            };
            t.push(vec![
                Cell::Int(n as i64),
                Cell::Real(self.amplitude * c),
                Cell::Real(self.wavenumber(i) * frequency),
            ]);
        }
        t
    }
}

fn check_terms(terms: usize) -> Result<()> {
    if terms == 0 {
        Err(Error::Unsupported("a series needs at least one term".into()))
    } else {
        Ok(())
    }
}

/// Truncated sine series of `sn(u|m)`.
pub fn sn_series(u: f64, m: f64, terms: usize) -> Result<f64> {
    Ok(SeriesSpec::sn(m, terms)?.eval(u))
}

/// Truncated cosine series of `dn(u|−1)`, zero-frequency term included.
pub fn dn_series(u: f64, terms: usize) -> Result<f64> {
    Ok(SeriesSpec::dn(-1.0, terms)?.eval(u))
}

/// Frequencies `εₙ` of the plane-wave components of the rest-frame solution:
/// `(2n+1)π/(2K)·m` for the sn families and `nπ/K(−1)·μ₀/√3` for SsbDn.
pub fn epsilon_spectrum(config: &FieldConfig, count: usize) -> Vec<f64> {
    let k = config.modulus().k();
    match config.kind() {
        Family::SsbDn => {
            let scale = config.mu0() / 3f64.sqrt();
            (0..count).map(|n| n as f64 * PI / k * scale).collect()
        }
        _ => {
            let mass = config.effective_mass();
            (0..count)
                .map(|n| (2 * n + 1) as f64 * PI / (2.0 * k) * mass)
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::EllipticParameter;

    #[test]
    fn imaginary_modulus_sn_coefficients_match_closed_form() {
        let spec = SeriesSpec::sn(-1.0, 6).unwrap();
        let k = spec.quarter_period();
        for (n, c) in spec.coefficients().iter().enumerate() {
            let nf = n as f64;
            let want = (-1f64).powi(n as i32) * 2.0 * PI / k * (-(nf + 0.5) * PI).exp()
                / (1.0 + (-(2.0 * nf + 1.0) * PI).exp());
            assert!((c - want).abs() < 1e-15, "n = {n}: {c} vs {want}");
        }
    }

    #[test]
    fn odd_and_even_symmetry() {
        assert_eq!(sn_series(0.0, -0.4, 10).unwrap(), 0.0);
        let spec = SeriesSpec::dn(-1.0, 12).unwrap();
        let two_k = 2.0 * spec.quarter_period();
        for u in [0.1, 0.9, 2.2] {
            assert!((spec.eval(u) - spec.eval(u + two_k)).abs() < 1e-14);
            assert!((spec.eval(u) - spec.eval(-u)).abs() < 1e-15);
        }
    }

    #[test]
    fn peak_and_origin_values() {
        let k = EllipticParameter::new(-1.0).unwrap().k();
        assert!((sn_series(k, -1.0, 8).unwrap() - 1.0).abs() < 1e-4);
        assert!((dn_series(0.0, 8).unwrap() - 1.0).abs() < 1e-8);
        let spec = SeriesSpec::dn(-1.0, 1).unwrap();
        assert!((spec.constant() - 1.198_140_234_735_592_2).abs() < 1e-15);
    }

    #[test]
    fn trivial_parameter_is_a_pure_sine() {
        let spec = SeriesSpec::sn(0.0, 4).unwrap();
        assert!((spec.eval(0.7) - 0.7f64.sin()).abs() < 1e-15);
        let dn = SeriesSpec::dn(0.0, 4).unwrap();
        assert_eq!(dn.eval(0.3), 1.0);
    }

    #[test]
    fn coefficient_table_layout() {
        let c = FieldConfig::ssb(3f64.sqrt(), 2.0).unwrap();
        let spec = SeriesSpec::for_family(&c, 4).unwrap();
        let t = spec.table(1.0);
        assert_eq!(t.len(), 5);
        assert_eq!(t.column("epsilon").unwrap()[0], 0.0);
        assert!(SeriesSpec::sn(-1.0, 0).is_err());
    }

    #[test]
    fn ssb_ladder_starts_at_zero() {
        let c = FieldConfig::ssb(3f64.sqrt(), 2.0).unwrap();
        let eps = epsilon_spectrum(&c, 3);
        assert_eq!(eps[0], 0.0);
        assert!((eps[1] - 2.396_280_469_471_184_4).abs() < 1e-14);
        let m = FieldConfig::massless(1.0, 2.0).unwrap();
        assert!((epsilon_spectrum(&m, 1)[0] - 1.198_140_234_735_592_2).abs() < 1e-14);
    }
}
