//! Fluctuation operators around the massless and symmetry-breaking waves and
//! checks of their elliptic eigenpairs.
//!
//! On functions of `u = p·x + θ` the operator `−□ + V″(φ₀)` reduces to
//!
//! ```text
//! L g = p² g″(u) + W(u) g(u)
//! W/p² = 6 sn²(u|−1)          massless
//! W/p² = −3 + 6 dn²(u|−1)     symmetry breaking
//! ```
//!
//! The eigenpairs are checked, not searched for.

use std::f64::consts::{PI, SQRT_2};

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::elliptic::EllipticParameter;
use crate::error::{Error, Result};
use crate::io::{Cell, Table};
use crate::solutions::{Family, Solution};

/// Fewer points per period than this are rejected by [`apply_reduced`].
pub const MIN_POINTS_PER_PERIOD: usize = 64;
pub const DEFAULT_POINTS_PER_PERIOD: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    /// `−□ + 3λφ₀²`
    Massless,
    /// `−□ − μ₀² + 3λφ²`
    Ssb,
}

#[derive(Debug, Clone)]
pub struct LinearizedOperator {
    kind: OperatorKind,
    solution: Solution,
}

impl LinearizedOperator {
    pub fn new(solution: Solution) -> Result<Self> {
        let kind = match solution.config().kind() {
            Family::MasslessSn => OperatorKind::Massless,
            Family::SsbDn => OperatorKind::Ssb,
            Family::MassiveSn => {
                return Err(Error::Unsupported(
                    "fluctuation operators are provided for the massless and symmetry-breaking families".into(),
                ))
            }
        };
        Ok(LinearizedOperator { kind, solution })
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn solution(&self) -> &Solution {
        &self.solution
    }

    pub fn p_squared(&self) -> f64 {
        self.solution.frame().p_squared()
    }

    /// `W(u) = V″(φ₀(u))`.
    pub fn potential(&self, u: f64) -> f64 {
        self.solution.config().curvature(self.solution.profile(u))
    }

    /// Period in `u` shared by the potential and every mode product: `4K(−1)`.
    pub fn period(&self) -> f64 {
        self.solution.elliptic().period()
    }

    /// The zero mode and the non-zero mode with their claimed eigenvalues:
    /// massless `cn·dn → 0`, `sn·dn → 3μ²√(λ/2)`;
    /// symmetry breaking `sn·cn → 0`, `cn·dn → μ₀²`.
    pub fn claimed_modes(&self) -> [ModeFunction; 2] {
        let cfg = self.solution.config();
        match self.kind {
            OperatorKind::Massless => [
                ModeFunction::new(self.kind, Product::CnDn, 1.0, 0.0),
                ModeFunction::new(
                    self.kind,
                    Product::SnDn,
                    1.0,
                    3.0 * cfg.mu() * cfg.mu() * (cfg.lambda() / 2.0).sqrt(),
                ),
            ],
            OperatorKind::Ssb => [
                ModeFunction::new(self.kind, Product::SnCn, 1.0, 0.0),
                ModeFunction::new(self.kind, Product::CnDn, 1.0, cfg.mu0() * cfg.mu0()),
            ],
        }
    }

    pub fn grid(&self, points: usize) -> UGrid {
        UGrid {
            start: self.solution.frame().theta,
            period: self.period(),
            points,
        }
    }
}

/// Uniform periodic sampling `u_j = start + j·period/points`, `j < points`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UGrid {
    pub start: f64,
    pub period: f64,
    pub points: usize,
}

impl UGrid {
    pub fn nodes(&self) -> Vec<f64> {
        (0..self.points)
            .map(|j| self.start + self.period * j as f64 / self.points as f64)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Product {
    CnDn,
    SnDn,
    SnCn,
}

impl Product {
    pub fn eval(self, elliptic: &EllipticParameter, u: f64) -> f64 {
        let j = elliptic.jacobi(u);
        match self {
            Product::CnDn => j.cn * j.dn,
            Product::SnDn => j.sn * j.dn,
            Product::SnCn => j.sn * j.cn,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Product::CnDn => "cn*dn",
            Product::SnDn => "sn*dn",
            Product::SnCn => "sn*cn",
        }
    }
}

/// `normalization · product(u)` with the eigenvalue it is claimed to carry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeFunction {
    pub operator: OperatorKind,
    pub product: Product,
    pub normalization: f64,
    pub claimed_eigenvalue: f64,
}

impl ModeFunction {
    pub fn new(operator: OperatorKind, product: Product, normalization: f64, claimed: f64) -> Self {
        ModeFunction {
            operator,
            product,
            normalization,
            claimed_eigenvalue: claimed,
        }
    }

    pub fn is_zero_mode(&self) -> bool {
        matches!(
            (self.operator, self.product),
            (OperatorKind::Massless, Product::CnDn) | (OperatorKind::Ssb, Product::SnCn)
        )
    }

    pub fn eval(&self, elliptic: &EllipticParameter, u: f64) -> f64 {
        self.normalization * self.product.eval(elliptic, u)
    }
}

/// Spectral second derivative of samples of a `period`-periodic function.
fn spectral_second_derivative(g: &[f64], period: f64) -> Vec<f64> {
    let n = g.len();
    let mut planner = FftPlanner::new();
    let mut buf: Vec<Complex64> = g.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    planner.plan_fft_forward(n).process(&mut buf);
    for (i, c) in buf.iter_mut().enumerate() {
        let k = if i <= n / 2 { i as f64 } else { i as f64 - n as f64 };
        let omega = 2.0 * PI * k / period;
        *c *= -omega * omega / n as f64;
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    buf.into_iter().map(|c| c.re).collect()
}

/// `p²·g″ + W·g` on a periodic grid covering one period of `W`.
pub fn apply_reduced(op: &LinearizedOperator, grid: &UGrid, g: &[f64]) -> Result<Vec<f64>> {
    if grid.points < MIN_POINTS_PER_PERIOD {
        return Err(Error::GridTooCoarse {
            points: grid.points,
            min: MIN_POINTS_PER_PERIOD,
        });
    }
    if g.len() != grid.points {
        return Err(Error::Unsupported(format!(
            "sample count {} does not match the grid ({} points)",
            g.len(),
            grid.points
        )));
    }
    let ratio = grid.period / op.period();
    if (ratio - ratio.round()).abs() > 1e-12 || ratio.round() < 1.0 {
        return Err(Error::Unsupported(
            "the grid must span a whole number of periods of the potential".into(),
        ));
    }
    let p2 = op.p_squared();
    let d2 = spectral_second_derivative(g, grid.period);
    Ok(grid
        .nodes()
        .iter()
        .zip(g)
        .zip(d2)
        .map(|((&u, &gv), d)| p2 * d + op.potential(u) * gv)
        .collect())
}

/// Outcome of [`eigenvalue_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenCheck {
    pub claimed: f64,
    /// Rayleigh quotient `⟨χ, Lχ⟩ / ⟨χ, χ⟩` over one period.
    pub measured: f64,
    /// `max |Lχ − εχ| / max |χ|` with the measured `ε`.
    pub residual: f64,
}

impl EigenCheck {
    pub fn error(&self) -> f64 {
        (self.measured - self.claimed).abs()
    }
}

pub fn eigenvalue_check(op: &LinearizedOperator, mode: &ModeFunction) -> Result<EigenCheck> {
    eigenvalue_check_on(op, mode, &op.grid(DEFAULT_POINTS_PER_PERIOD))
}

pub fn eigenvalue_check_on(
    op: &LinearizedOperator,
    mode: &ModeFunction,
    grid: &UGrid,
) -> Result<EigenCheck> {
    let elliptic = op.solution().elliptic();
    let chi: Vec<f64> = grid.nodes().iter().map(|&u| mode.eval(elliptic, u)).collect();
    let l_chi = apply_reduced(op, grid, &chi)?;
    let num: f64 = chi.iter().zip(&l_chi).map(|(a, b)| a * b).sum();
    let den: f64 = chi.iter().map(|a| a * a).sum();
    let measured = num / den;
    let peak = chi.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let worst = chi
        .iter()
        .zip(&l_chi)
        .fold(0.0f64, |acc, (c, l)| acc.max((l - measured * c).abs()));
    Ok(EigenCheck {
        claimed: mode.claimed_eigenvalue,
        measured,
        residual: worst / peak,
    })
}

/// `(u, mode value, |Lχ − εχ|)` rows over one grid, `ε` the claimed eigenvalue.
pub fn mode_table(op: &LinearizedOperator, mode: &ModeFunction, grid: &UGrid) -> Result<Table> {
    let elliptic = op.solution().elliptic();
    let nodes = grid.nodes();
    let chi: Vec<f64> = nodes.iter().map(|&u| mode.eval(elliptic, u)).collect();
    let l_chi = apply_reduced(op, grid, &chi)?;
    let mut t = Table::new(&["u", "mode", "residual"]);
    for ((u, c), l) in nodes.iter().zip(&chi).zip(&l_chi) {
        t.push(vec![
            Cell::Real(*u),
            Cell::Real(*c),
            Cell::Real((l - mode.claimed_eigenvalue * c).abs()),
        ]);
    }
    Ok(t)
}

/// Zero mode with its phase fixed to `θₙ`, next to its closed form in `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPhaseForm {
    /// `χ₀(u + θₙ)`.
    pub shifted: f64,
    /// Closed form from the quarter-period shift identities:
    /// `−2a·sn/dn²` (massless), `−√2·b·sn·cn/dn²` (symmetry breaking).
    pub closed_form: f64,
    /// The `−2·(normalization)·…/dn²` form in which both are usually quoted.
    /// Equal to `closed_form` for the massless mode; for the
    /// symmetry-breaking mode the factor differs by `√2`, which a
    /// normalization constant can absorb.
    pub quoted: f64,
}

/// Phases `θₙ = (4n+1)K(−1)` (massless) or `(2n+1)K(−1)` (symmetry breaking).
pub fn fixed_phase_form(mode: &ModeFunction, u: f64, n: i64) -> Result<FixedPhaseForm> {
    if !mode.is_zero_mode() {
        return Err(Error::Unsupported(format!(
            "{} is not the zero mode of this operator",
            mode.product.name()
        )));
    }
    let elliptic = EllipticParameter::new(-1.0)?;
    let k = elliptic.k();
    let j = elliptic.jacobi(u);
    let a = mode.normalization;
    Ok(match mode.operator {
        OperatorKind::Massless => {
            let shifted = mode.eval(&elliptic, u + (4 * n + 1) as f64 * k);
            let closed = -2.0 * a * j.sn / (j.dn * j.dn);
            FixedPhaseForm {
                shifted,
                closed_form: closed,
                quoted: closed,
            }
        }
        OperatorKind::Ssb => {
            let shifted = mode.eval(&elliptic, u + (2 * n + 1) as f64 * k);
            let ratio = j.sn * j.cn / (j.dn * j.dn);
            FixedPhaseForm {
                shifted,
                closed_form: -SQRT_2 * a * ratio,
                quoted: -2.0 * a * ratio,
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solutions::{Branch, FieldConfig, WaveFrame};

    fn massless_op() -> LinearizedOperator {
        let c = FieldConfig::massless(1.2, 2.0).unwrap();
        let s = Solution::new(c, WaveFrame::moving(&c, [0.3, -0.2, 0.1], 0.4), Branch::Plus).unwrap();
        LinearizedOperator::new(s).unwrap()
    }

    #[test]
    fn zero_function_maps_to_zero() {
        let op = massless_op();
        let grid = op.grid(128);
        let out = apply_reduced(&op, &grid, &vec![0.0; 128]).unwrap();
        assert!(out.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn coarse_or_mismatched_grids_are_rejected() {
        let op = massless_op();
        let grid = op.grid(32);
        assert!(matches!(
            apply_reduced(&op, &grid, &vec![0.0; 32]),
            Err(Error::GridTooCoarse { points: 32, .. })
        ));
        let grid = op.grid(128);
        assert!(apply_reduced(&op, &grid, &vec![0.0; 100]).is_err());
        let half = UGrid { period: 0.5 * grid.period, ..grid };
        assert!(apply_reduced(&op, &half, &vec![0.0; 128]).is_err());
    }

    #[test]
    fn reduced_potentials() {
        let op = massless_op();
        let e = op.solution().elliptic().clone();
        let p2 = op.p_squared();
        for u in [0.0, 0.3, 1.9] {
            let sn = e.jacobi(u).sn;
            assert!((op.potential(u) / p2 - 6.0 * sn * sn).abs() < 1e-12);
        }
        let c = FieldConfig::ssb(1.5, 0.3).unwrap();
        let op = LinearizedOperator::new(Solution::new(c, WaveFrame::rest(&c, 0.0), Branch::Minus).unwrap()).unwrap();
        let p2 = op.p_squared();
        for u in [0.0, 0.3, 1.9] {
            let dn = e.jacobi(u).dn;
            assert!((op.potential(u) / p2 - (-3.0 + 6.0 * dn * dn)).abs() < 1e-12);
        }
    }

    #[test]
    fn massive_family_has_no_operator_here() {
        let c = FieldConfig::massive(1.0, 1.0, 1.0).unwrap();
        let s = Solution::new(c, WaveFrame::rest(&c, 0.0), Branch::Plus).unwrap();
        assert!(LinearizedOperator::new(s).is_err());
    }

    #[test]
    fn fixed_phase_rejects_nonzero_modes() {
        let m = ModeFunction::new(OperatorKind::Massless, Product::SnDn, 1.0, 3.0);
        assert!(fixed_phase_form(&m, 0.2, 0).is_err());
        let z = ModeFunction::new(OperatorKind::Ssb, Product::SnCn, 1.0, 0.0);
        let f = fixed_phase_form(&z, 0.0, 0).unwrap();
        assert_eq!((f.closed_form, f.quoted), (0.0, 0.0));
        assert!(f.shifted.abs() < 1e-15);
    }

    #[test]
    fn mode_table_columns() {
        let op = massless_op();
        let [zero, _] = op.claimed_modes();
        let t = mode_table(&op, &zero, &op.grid(256)).unwrap();
        assert_eq!(t.columns(), ["u", "mode", "residual"]);
        assert_eq!(t.len(), 256);
        let worst = t.column("residual").unwrap().into_iter().fold(0.0, f64::max);
        assert!(worst < 1e-8);
    }
}
