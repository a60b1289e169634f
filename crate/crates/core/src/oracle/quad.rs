#![allow(clippy::excessive_precision)]

use std::f64::consts::PI;

use crate::error::{Error, Result};

// Gauss–Kronrod 7/15 nodes on [-1, 1]; index 7 is the centre.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_DEPTH: u32 = 60;

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

fn recurse(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, floor: f64, depth: u32) -> Result<f64> {
    let (value, err) = gk15(f, a, b);
    if err <= tol.max(floor) || (b - a).abs() < f64::EPSILON * a.abs().max(b.abs()) {
        return Ok(value);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::Integration(format!(
            "quadrature did not converge on [{a}, {b}] (error estimate {err:e})"
        )));
    }
    let mid = 0.5 * (a + b);
    Ok(recurse(f, a, mid, 0.5 * tol, floor, depth + 1)?
        + recurse(f, mid, b, 0.5 * tol, floor, depth + 1)?)
}

/// Adaptive Gauss–Kronrod quadrature of `f` over `[a, b]`.
///
/// `tol` is absolute after scaling by the magnitude of a first coarse
/// estimate, so it behaves like a relative tolerance for integrals of order
/// one and larger.
pub fn integrate_adaptive(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    let (coarse, _) = gk15(&f, a, b);
    let scale = coarse.abs().max(1.0);
    // Sub-intervals whose error is already at rounding level are accepted.
    recurse(&f, a, b, tol * scale, 4.0 * f64::EPSILON * scale, 0)
}

/// Cosine and sine Fourier coefficients of a periodic function.
///
/// With `f(t) = c₀ + Σ_k [aₖ cos(2πkt/T) + bₖ sin(2πkt/T)]`, index 0 yields
/// the mean `c₀` in `cos` (and 0 in `sin`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierCoefficient {
    pub cos: f64,
    pub sin: f64,
}

/// Trapezoidal-rule Fourier coefficient with 1024 nodes per period.
pub fn periodic_quadrature(f: impl Fn(f64) -> f64, period: f64, harmonic: usize) -> FourierCoefficient {
    periodic_quadrature_with(f, period, harmonic, 1024)
}

pub fn periodic_quadrature_with(
    f: impl Fn(f64) -> f64,
    period: f64,
    harmonic: usize,
    points: usize,
) -> FourierCoefficient {
    let n = points as f64;
    let mut c = 0.0;
    let mut s = 0.0;
    for j in 0..points {
        let t = period * j as f64 / n;
        let phase = 2.0 * PI * (harmonic * j % points) as f64 / n;
        let v = f(t);
        c += v * phase.cos();
        s += v * phase.sin();
    }
    if harmonic == 0 {
        FourierCoefficient { cos: c / n, sin: 0.0 }
    } else {
        FourierCoefficient {
            cos: 2.0 * c / n,
            sin: 2.0 * s / n,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elementary_integrals() {
        let v = integrate_adaptive(f64::sin, 0.0, PI, 1e-14).unwrap();
        assert!((v - 2.0).abs() < 1e-14);
        let v = integrate_adaptive(|x| (-x * x).exp(), -8.0, 8.0, 1e-14).unwrap();
        assert!((v - PI.sqrt()).abs() < 1e-13);
        let v = integrate_adaptive(|x| x.sqrt(), 0.0, 1.0, 1e-13).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn cosine_harmonic() {
        let period = 3.7;
        let c = periodic_quadrature(|t| (2.0 * PI * t / period).cos(), period, 1);
        assert!((c.cos - 1.0).abs() < 1e-14);
        assert!(c.sin.abs() < 1e-14);
        let c = periodic_quadrature(|t| 0.25 + (6.0 * PI * t / period).sin(), period, 0);
        assert!((c.cos - 0.25).abs() < 1e-14);
        let c = periodic_quadrature(|t| (6.0 * PI * t / period).sin(), period, 3);
        assert!((c.sin - 1.0).abs() < 1e-14);
    }
}
