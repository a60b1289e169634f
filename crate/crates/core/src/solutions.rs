//! Exact travelling-wave solutions of the quartic scalar field equations
//!
//! ```text
//! ∂_t²φ − ∇²φ + μ₀²φ + λφ³ = 0     MassiveSn:  φ = ±μ(2/λ)^¼ sn(p·x+θ | m)
//!                                   MasslessSn: same with μ₀ = 0, m = −1
//! ∂_t²φ − ∇²φ − μ₀²φ + λφ³ = 0     SsbDn:      φ = ±v dn(p·x+θ | −1)
//! ```
//!
//! with metric signature (+,−,−,−) and `p·x = p⁰t − p⃗·x⃗`.

use std::fmt;
use std::str::FromStr;

use crate::elliptic::EllipticParameter;
use crate::error::{Error, Result};
use crate::oracle::finite_diff;

/// Relative tolerance for accepting a frame as on shell.
pub const ON_SHELL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    MassiveSn,
    MasslessSn,
    SsbDn,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::MassiveSn, Family::MasslessSn, Family::SsbDn];

    pub fn name(self) -> &'static str {
        match self {
            Family::MassiveSn => "massive",
            Family::MasslessSn => "massless",
            Family::SsbDn => "ssb",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "massive" | "massive-sn" | "massivesn" => Ok(Family::MassiveSn),
            "massless" | "massless-sn" | "masslesssn" => Ok(Family::MasslessSn),
            "ssb" | "ssb-dn" | "ssbdn" => Ok(Family::SsbDn),
            other => Err(Error::InvalidConfig(format!(
                "unknown family {other:?} (expected massive, massless or ssb)"
            ))),
        }
    }
}

/// Sign branch of the Z₂-symmetric solution pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Branch {
    #[default]
    Plus,
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Physical inputs of one solution family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldConfig {
    kind: Family,
    mu0: f64,
    mu: f64,
    lambda: f64,
}

impl FieldConfig {
    pub fn new(kind: Family, mu0: f64, mu: f64, lambda: f64) -> Result<Self> {
        let finite = |x: f64, name: &str| {
            if x.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!("{name} must be finite, got {x}")))
            }
        };
        finite(mu0, "mu0")?;
        finite(mu, "mu")?;
        finite(lambda, "lambda")?;
        if !(lambda > 0.0) {
            return Err(Error::InvalidConfig(format!("lambda must be positive, got {lambda}")));
        }
        if mu0 < 0.0 || mu < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "mass scales must be non-negative (mu0 = {mu0}, mu = {mu})"
            )));
        }
        match kind {
            Family::MasslessSn if mu0 != 0.0 => Err(Error::InvalidConfig(format!(
                "the massless family requires mu0 = 0, got {mu0}"
            ))),
            Family::SsbDn if mu0 == 0.0 => Err(Error::InvalidConfig(
                "the symmetry-breaking family requires mu0 > 0".into(),
            )),
            _ => Ok(FieldConfig { kind, mu0, mu, lambda }),
        }
    }

    pub fn massive(mu0: f64, mu: f64, lambda: f64) -> Result<Self> {
        Self::new(Family::MassiveSn, mu0, mu, lambda)
    }

    pub fn massless(mu: f64, lambda: f64) -> Result<Self> {
        Self::new(Family::MasslessSn, 0.0, mu, lambda)
    }

    /// The `μ` integration constant plays no role for this family and is set to 0.
    pub fn ssb(mu0: f64, lambda: f64) -> Result<Self> {
        Self::new(Family::SsbDn, mu0, 0.0, lambda)
    }

    pub fn kind(&self) -> Family {
        self.kind
    }

    pub fn mu0(&self) -> f64 {
        self.mu0
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `v = √(2μ₀²/3λ)`.
    pub fn vev(&self) -> f64 {
        (2.0 * self.mu0 * self.mu0 / (3.0 * self.lambda)).sqrt()
    }

    /// Wave amplitude: `μ(2/λ)^¼` for the sn families, `v` for SsbDn.
    pub fn amplitude(&self) -> f64 {
        match self.kind {
            Family::SsbDn => self.vev(),
            _ => self.mu * (2.0 / self.lambda).powf(0.25),
        }
    }

    /// Squared on-shell momentum `p²`.
    pub fn dispersion(&self) -> f64 {
        match self.kind {
            Family::MassiveSn | Family::MasslessSn => {
                self.mu0 * self.mu0 + self.mu * self.mu * (self.lambda / 2.0).sqrt()
            }
            Family::SsbDn => {
                let v = self.vev();
                self.lambda * v * v / 2.0
            }
        }
    }

    /// `√p²`: `√(μ₀² + μ²√(λ/2))` for the sn families, `μ₀/√3` for SsbDn.
    pub fn effective_mass(&self) -> f64 {
        self.dispersion().sqrt()
    }

    /// Elliptic parameter `m = k²` of the wave profile.
    pub fn parameter(&self) -> f64 {
        match self.kind {
            Family::MassiveSn => {
                let s = (2.0 * self.lambda).sqrt() * self.mu * self.mu;
                if s == 0.0 {
                    0.0
                } else {
                    -s / (2.0 * self.mu0 * self.mu0 + s)
                }
            }
            Family::MasslessSn | Family::SsbDn => -1.0,
        }
    }

    pub fn modulus(&self) -> EllipticParameter {
        EllipticParameter::new(self.parameter())
            .expect("solution parameters always lie in [-1, 0]")
    }

    /// Sign of the quadratic term in the field equation.
    fn mass_sign(&self) -> f64 {
        match self.kind {
            Family::SsbDn => -1.0,
            _ => 1.0,
        }
    }

    /// `V(φ) = ±μ₀²φ²/2 + λφ⁴/4`.
    pub fn potential(&self, phi: f64) -> f64 {
        let phi2 = phi * phi;
        0.5 * self.mass_sign() * self.mu0 * self.mu0 * phi2 + 0.25 * self.lambda * phi2 * phi2
    }

    /// `V″(φ) = ±μ₀² + 3λφ²`, the potential of the linearized operator.
    pub fn curvature(&self, phi: f64) -> f64 {
        self.mass_sign() * self.mu0 * self.mu0 + 3.0 * self.lambda * phi * phi
    }
}

/// Free-function form of [`FieldConfig::dispersion`].
pub fn dispersion(config: &FieldConfig) -> f64 {
    config.dispersion()
}

/// Free-function form of [`FieldConfig::modulus`].
pub fn modulus(config: &FieldConfig) -> EllipticParameter {
    config.modulus()
}

/// Four-momentum and phase offset of a plane elliptic wave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveFrame {
    pub p: [f64; 4],
    pub theta: f64,
}

impl WaveFrame {
    pub fn new(p: [f64; 4], theta: f64) -> Self {
        WaveFrame { p, theta }
    }

    /// Rest frame `p = (√p², 0, 0, 0)`.
    pub fn rest(config: &FieldConfig, theta: f64) -> Self {
        Self::moving(config, [0.0; 3], theta)
    }

    /// On-shell frame with the given spatial momentum.
    pub fn moving(config: &FieldConfig, spatial: [f64; 3], theta: f64) -> Self {
        let p3 = spatial.iter().map(|x| x * x).sum::<f64>();
        let energy = (config.dispersion() + p3).sqrt();
        WaveFrame {
            p: [energy, spatial[0], spatial[1], spatial[2]],
            theta,
        }
    }

    /// `p·p = (p⁰)² − |p⃗|²`.
    pub fn p_squared(&self) -> f64 {
        let [e, a, b, c] = self.p;
        e * e - (a * a + b * b + c * c)
    }

    /// `p⁰² + |p⃗|²`, the Euclidean size of the momentum.
    pub fn p_euclid_squared(&self) -> f64 {
        self.p.iter().map(|x| x * x).sum()
    }

    /// `p·x + θ` for `x = (t, x, y, z)`.
    pub fn phase(&self, x: [f64; 4]) -> f64 {
        self.p[0] * x[0] - self.p[1] * x[1] - self.p[2] * x[2] - self.p[3] * x[3] + self.theta
    }

    pub fn is_on_shell(&self, config: &FieldConfig) -> bool {
        let expected = config.dispersion();
        let scale = expected.abs().max(self.p[0] * self.p[0]);
        (self.p_squared() - expected).abs() <= ON_SHELL_TOL * scale
    }
}

/// Finite-difference residual of the field equation at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EomResidual {
    pub residual: f64,
    /// Sum of the magnitudes of the equation's coefficients times the amplitude.
    pub scale: f64,
}

impl EomResidual {
    pub fn relative(&self) -> f64 {
        if self.residual == 0.0 {
            0.0
        } else {
            self.residual.abs() / self.scale.max(f64::MIN_POSITIVE)
        }
    }
}

/// A solution family bound to a frame and sign branch.
#[derive(Debug, Clone)]
pub struct Solution {
    config: FieldConfig,
    frame: WaveFrame,
    branch: Branch,
    elliptic: EllipticParameter,
}

impl Solution {
    /// Rejects frames that do not satisfy the family's dispersion relation.
    pub fn new(config: FieldConfig, frame: WaveFrame, branch: Branch) -> Result<Self> {
        if !frame.is_on_shell(&config) {
            return Err(Error::OffShell {
                actual: frame.p_squared(),
                expected: config.dispersion(),
            });
        }
        Ok(Self::new_unchecked(config, frame, branch))
    }

    /// Skips the on-shell check; the result is generally not a solution.
    /// Used for negative controls of the residual checks.
    pub fn new_unchecked(config: FieldConfig, frame: WaveFrame, branch: Branch) -> Self {
        Solution {
            elliptic: config.modulus(),
            config,
            frame,
            branch,
        }
    }

    pub fn config(&self) -> &FieldConfig {
        &self.config
    }

    pub fn frame(&self) -> &WaveFrame {
        &self.frame
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn elliptic(&self) -> &EllipticParameter {
        &self.elliptic
    }

    fn signed_amplitude(&self) -> f64 {
        self.branch.sign() * self.config.amplitude()
    }

    /// Field value as a function of the phase `u = p·x + θ`.
    pub fn profile(&self, u: f64) -> f64 {
        let t = self.elliptic.jacobi(u);
        let shape = match self.config.kind {
            Family::SsbDn => t.dn,
            _ => t.sn,
        };
        self.signed_amplitude() * shape
    }

    /// `dφ/du` from the exact derivative identities.
    pub fn profile_slope(&self, u: f64) -> f64 {
        let (dsn, _, ddn) = self.elliptic.derivatives(u);
        let shape = match self.config.kind {
            Family::SsbDn => ddn,
            _ => dsn,
        };
        self.signed_amplitude() * shape
    }

    pub fn evaluate(&self, x: [f64; 4]) -> f64 {
        self.profile(self.frame.phase(x))
    }

    /// `∂_t²φ − ∇²φ ± μ₀²φ + λφ³` at `x`, with each second derivative taken by
    /// Richardson-extrapolated central differences (fourth order in `h`).
    pub fn eom_residual(&self, x: [f64; 4], h: f64) -> Result<EomResidual> {
        if !(h > 0.0) {
            return Err(Error::InvalidStep(h));
        }
        let mut wave = 0.0;
        for axis in 0..4 {
            let along = |s: f64| {
                let mut y = x;
                y[axis] += s;
                self.evaluate(y)
            };
            let d2 = finite_diff(along, 0.0, 2, h)?;
            wave += if axis == 0 { d2 } else { -d2 };
        }
        let phi = self.evaluate(x);
        let cfg = &self.config;
        let residual =
            wave + cfg.mass_sign() * cfg.mu0 * cfg.mu0 * phi + cfg.lambda * phi * phi * phi;
        let a = cfg.amplitude();
        let scale = a * (self.frame.p_euclid_squared() + cfg.mu0 * cfg.mu0 + cfg.lambda * a * a);
        Ok(EomResidual { residual, scale })
    }

    /// `½(∂_tφ)² + ½|∇φ|² + V(φ)`.
    pub fn hamiltonian_density(&self, x: [f64; 4]) -> f64 {
        let u = self.frame.phase(x);
        let phi = self.profile(u);
        let slope = self.profile_slope(u);
        0.5 * slope * slope * self.frame.p_euclid_squared() + self.config.potential(phi)
    }
}
