//! Jacobi elliptic functions and the complete elliptic integral of the first
//! kind for real argument and real parameter `m = k² < 1`.
//!
//! Negative parameters (imaginary modulus) are evaluated through the
//! imaginary-modulus transformation
//!
//! ```text
//! μ = -m / (1 - m),   v = u √(1 - m)
//! sn(u|m) = sd(v|μ) / √(1 - m),   cn(u|m) = cd(v|μ),   dn(u|m) = nd(v|μ)
//! K(m)    = K(μ) / √(1 - m)
//! ```
//!
//! so every evaluation runs on real arithmetic with a parameter in `[0, 1)`.
//! The nome is returned signed: for `m < 0` it is `-q(μ)`, which is what makes
//! the trigonometric series of `sn` and `dn` real with alternating signs.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// AGM iterations stop once `|c_n| <= AGM_TOL * a_n`.
const AGM_TOL: f64 = 1e-17;
const AGM_MAX_ITER: usize = 40;

/// Values of `(sn, cn, dn)` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiTriple {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

impl JacobiTriple {
    /// `(sn′, cn′, dn′) = (cn·dn, −sn·dn, −m·sn·cn)`.
    pub fn derivatives(&self, m: f64) -> (f64, f64, f64) {
        (
            self.cn * self.dn,
            -self.sn * self.dn,
            -m * self.sn * self.cn,
        )
    }
}

/// Arithmetic-geometric mean ladder for a parameter in `[0, 1)`.
#[derive(Debug, Clone)]
struct AgmLadder {
    m: f64,
    /// `(a_n, c_n)` for n = 0..=N.
    steps: Vec<(f64, f64)>,
    quarter_period: f64,
}

impl AgmLadder {
    fn new(m: f64) -> Self {
        debug_assert!((0.0..1.0).contains(&m));
        let mut a = 1.0;
        let mut b = (1.0 - m).sqrt();
        let mut steps = vec![(a, m.sqrt())];
        for _ in 0..AGM_MAX_ITER {
            let c = 0.5 * (a - b);
            let a_next = 0.5 * (a + b);
            b = (a * b).sqrt();
            a = a_next;
            steps.push((a, c));
            if c.abs() <= AGM_TOL * a {
                break;
            }
        }
        AgmLadder {
            m,
            steps,
            quarter_period: PI / (2.0 * a),
        }
    }

    /// Descending-Landen evaluation of the amplitude, then `(sn, cn, dn)`.
    fn sncndn(&self, u: f64) -> JacobiTriple {
        if self.m == 0.0 {
            let (s, c) = u.sin_cos();
            return JacobiTriple { sn: s, cn: c, dn: 1.0 };
        }
        let period = 4.0 * self.quarter_period;
        let u = u - period * (u / period).round();

        let n = self.steps.len() - 1;
        let (a_n, _) = self.steps[n];
        let mut phi = a_n * u * 2f64.powi(n as i32);
        for &(a, c) in self.steps[1..].iter().rev() {
            phi = 0.5 * (phi + (c / a * phi.sin()).asin());
        }
        let (sn, cn) = phi.sin_cos();
        let dn = (1.0 - self.m * sn * sn).sqrt();
        JacobiTriple { sn, cn, dn }
    }
}

/// Elliptic parameter `m = k²` with its derived periods and nome.
#[derive(Debug, Clone)]
pub struct EllipticParameter {
    m: f64,
    k: f64,
    kprime: f64,
    q: f64,
    /// Ladder for `m` itself when `m >= 0`, for the transformed `μ` otherwise.
    ladder: AgmLadder,
    /// `√(1 − m)` for negative parameters, 1 otherwise.
    stretch: f64,
}

impl EllipticParameter {
    pub fn new(m: f64) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFinite("elliptic parameter"));
        }
        if m >= 1.0 {
            return Err(Error::ParameterDomain(m));
        }
        if m >= 0.0 {
            let ladder = AgmLadder::new(m);
            let k = ladder.quarter_period;
            let (kprime, q) = co_period_and_nome(m, k);
            Ok(EllipticParameter {
                m,
                k,
                kprime,
                q,
                ladder,
                stretch: 1.0,
            })
        } else {
            let stretch = (1.0 - m).sqrt();
            let mu = -m / (1.0 - m);
            let ladder = AgmLadder::new(mu);
            let k = ladder.quarter_period / stretch;
            // |q(m)| = q(μ), K′ = K(1 − μ)/√(1 − m).
            let (kprime_mu, q_mu) = co_period_and_nome(mu, ladder.quarter_period);
            let kprime = kprime_mu / stretch;
            let q = -q_mu;
            Ok(EllipticParameter {
                m,
                k,
                kprime,
                q,
                ladder,
                stretch,
            })
        }
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    /// Quarter period `K(m)`.
    pub fn k(&self) -> f64 {
        self.k
    }

    /// Co-period magnitude, defined so that `|q| = exp(−π K′/K)`.
    /// Infinite at `m = 0`.
    pub fn kprime(&self) -> f64 {
        self.kprime
    }

    /// Signed nome: positive for `m ∈ (0,1)`, negative for `m < 0`.
    pub fn nome(&self) -> f64 {
        self.q
    }

    /// Real period `4K` of `sn` and `cn`.
    pub fn period(&self) -> f64 {
        4.0 * self.k
    }

    pub fn jacobi(&self, u: f64) -> JacobiTriple {
        if self.m >= 0.0 {
            return self.ladder.sncndn(u);
        }
        let t = self.ladder.sncndn(u * self.stretch);
        JacobiTriple {
            sn: t.sn / (t.dn * self.stretch),
            cn: t.cn / t.dn,
            dn: 1.0 / t.dn,
        }
    }

    pub fn derivatives(&self, u: f64) -> (f64, f64, f64) {
        self.jacobi(u).derivatives(self.m)
    }
}

/// `(K(1 − m), q(m))` for `m ∈ [0, 1)` given `K(m)`.
fn co_period_and_nome(m: f64, k: f64) -> (f64, f64) {
    if m == 0.0 {
        return (f64::INFINITY, 0.0);
    }
    if 1.0 - m == 1.0 {
        // K(1 − m) is not representable; the leading term of q is exact here.
        return (f64::INFINITY, m / 16.0);
    }
    let kprime = AgmLadder::new(1.0 - m).quarter_period;
    (kprime, (-PI * kprime / k).exp())
}

/// Complete elliptic integral of the first kind `K(m)` for `m < 1`.
pub fn complete_k(m: f64) -> Result<f64> {
    Ok(EllipticParameter::new(m)?.k())
}

/// `(sn, cn, dn)(u | m)`.
pub fn jacobi(u: f64, m: f64) -> Result<JacobiTriple> {
    if !u.is_finite() {
        return Err(Error::NonFinite("elliptic argument"));
    }
    Ok(EllipticParameter::new(m)?.jacobi(u))
}

/// Signed nome `q(m)`.
pub fn nome(m: f64) -> Result<f64> {
    Ok(EllipticParameter::new(m)?.nome())
}

/// `(sn′, cn′, dn′)(u | m)` from the exact derivative identities.
pub fn jacobi_derivatives(u: f64, m: f64) -> Result<(f64, f64, f64)> {
    Ok(jacobi(u, m)?.derivatives(m))
}
