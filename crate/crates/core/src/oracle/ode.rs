//! Dormand–Prince 5(4) with the standard fourth-order continuous extension.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// Difference between the fifth- and fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const MAX_STEPS: usize = 2_000_000;

#[derive(Debug, Clone)]
struct DenseStep<const N: usize> {
    t: f64,
    h: f64,
    coef: [[f64; N]; 5],
}

impl<const N: usize> DenseStep<N> {
    fn eval(&self, t: f64) -> [f64; N] {
        let s = (t - self.t) / self.h;
        let s1 = 1.0 - s;
        let c = &self.coef;
        std::array::from_fn(|i| {
            c[0][i] + s * (c[1][i] + s1 * (c[2][i] + s * (c[3][i] + s1 * c[4][i])))
        })
    }
}

/// Dense solution of an initial value problem.
#[derive(Debug, Clone)]
pub struct Trajectory<const N: usize> {
    start: f64,
    end: f64,
    initial: [f64; N],
    steps: Vec<DenseStep<N>>,
}

impl<const N: usize> Trajectory<N> {
    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    pub fn step_count(&self) -> usize {
        self.steps.len()
    }

    /// State at `t`, interpolated from the step containing it.
    /// Times outside the integrated range are clamped.
    pub fn eval(&self, t: f64) -> [f64; N] {
        if self.steps.is_empty() {
            return self.initial;
        }
        let t = t.clamp(self.start, self.end);
        let idx = self
            .steps
            .partition_point(|s| s.t + s.h < t)
            .min(self.steps.len() - 1);
        self.steps[idx].eval(t)
    }

    pub fn sample(&self, times: &[f64]) -> Vec<[f64; N]> {
        times.iter().map(|&t| self.eval(t)).collect()
    }
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    std::array::from_fn(|i| y[i] + h * terms.iter().map(|(a, k)| a * k[i]).sum::<f64>())
}

/// Integrates `y′ = rhs(t, y)` from `t0` to `t1 > t0` with mixed
/// absolute/relative local error tolerance `tol`.
pub fn integrate_system<const N: usize>(
    rhs: impl Fn(f64, &[f64; N]) -> [f64; N],
    t0: f64,
    y0: [f64; N],
    t1: f64,
    tol: f64,
) -> Result<Trajectory<N>> {
    if !(t1 > t0) {
        return Err(Error::Integration(format!("empty interval [{t0}, {t1}]")));
    }
    if !(tol > 0.0) {
        return Err(Error::Integration(format!("tolerance must be positive, got {tol}")));
    }
    let span = t1 - t0;
    let mut t = t0;
    let mut y = y0;
    let mut k1 = rhs(t, &y);
    let mut h = (span * 1e-3).min(tol.powf(0.2) * 0.1).max(span * 1e-12);
    let mut steps = Vec::new();
    let mut last_reject = false;

    while t < t1 {
        if steps.len() >= MAX_STEPS {
            return Err(Error::Integration(format!("step limit reached at t = {t}")));
        }
        if t + h > t1 {
            h = t1 - t;
        }
        let k2 = rhs(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = rhs(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(t + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = rhs(
            t + C5 * h,
            &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = rhs(
            t + h,
            &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let y1 = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let k7 = rhs(t + h, &y1);

        let mut err = 0.0;
        for i in 0..N {
            let e = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = tol + tol * y[i].abs().max(y1[i].abs());
            err += (e / scale).powi(2);
        }
        let err = (err / N as f64).sqrt();

        if err <= 1.0 {
            let coef = {
                let diff: [f64; N] = std::array::from_fn(|i| y1[i] - y[i]);
                let bspl: [f64; N] = std::array::from_fn(|i| h * k1[i] - diff[i]);
                let c3: [f64; N] = std::array::from_fn(|i| diff[i] - h * k7[i] - bspl[i]);
                let c4: [f64; N] = std::array::from_fn(|i| {
                    h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i])
                });
                [y, diff, bspl, c3, c4]
            };
            steps.push(DenseStep { t, h, coef });
            t += h;
            y = y1;
            k1 = k7;
            let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h *= if last_reject { grow.min(1.0) } else { grow };
            last_reject = false;
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
            last_reject = true;
            if h < span * 1e-15 {
                return Err(Error::Integration(format!("step size underflow at t = {t}")));
            }
        }
    }

    Ok(Trajectory {
        start: t0,
        end: t1,
        initial: y0,
        steps,
    })
}

/// Time-dependent oscillator `y″ + W(t)·y = 0` on `[start, end]`.
///
/// A unit point source at `start` for the retarded Green function is encoded
/// as `value = 0`, `slope = 1`.
pub struct OdeProblem<'a> {
    pub potential: Box<dyn Fn(f64) -> f64 + 'a>,
    pub value: f64,
    pub slope: f64,
    pub start: f64,
    pub end: f64,
    pub tol: f64,
}

impl<'a> OdeProblem<'a> {
    pub fn new(potential: impl Fn(f64) -> f64 + 'a, start: f64, end: f64) -> Self {
        OdeProblem {
            potential: Box::new(potential),
            value: 0.0,
            slope: 1.0,
            start,
            end,
            tol: 1e-10,
        }
    }

    pub fn with_initial(mut self, value: f64, slope: f64) -> Self {
        self.value = value;
        self.slope = slope;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }
}

/// Local tolerance handed to the stepper, relative to the problem tolerance,
/// so that accumulated error over a few periods stays below `tol`.
const LOCAL_SAFETY: f64 = 0.05;

/// Integrates an [`OdeProblem`]; the trajectory state is `[y, y′]`.
pub fn integrate(problem: &OdeProblem<'_>) -> Result<Trajectory<2>> {
    if !(1e-14..=1e-6).contains(&problem.tol) {
        return Err(Error::Integration(format!(
            "tolerance {} outside [1e-14, 1e-6]",
            problem.tol
        )));
    }
    let w = &problem.potential;
    integrate_system(
        |t, y: &[f64; 2]| [y[1], -w(t) * y[0]],
        problem.start,
        [problem.value, problem.slope],
        problem.end,
        (LOCAL_SAFETY * problem.tol).max(1e-15),
    )
}
