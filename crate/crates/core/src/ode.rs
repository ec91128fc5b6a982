//! Dormand-Prince 5(4) integrator with step-size control and the
//! fourth-order continuous extension (dense output).

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

/// Integrator settings. Local error is measured per component against
/// `abs_tol + rel_tol * max(|y_old|, |y_new|)` in the RMS norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub h_init: Option<f64>,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 1e-12, h_init: None, h_max: f64::INFINITY, max_steps: 1_000_000 }
    }
}

/// One accepted step together with its dense-output coefficients.
#[derive(Debug, Clone, Copy)]
pub struct Step<const D: usize> {
    pub t_old: f64,
    pub t_new: f64,
    pub y_old: [f64; D],
    pub y_new: [f64; D],
    cont: [[f64; D]; 5],
}

impl<const D: usize> Step<D> {
    pub fn h(&self) -> f64 {
        self.t_new - self.t_old
    }

    /// Interpolated state at `t` in `[t_old, t_new]`.
    pub fn dense(&self, t: f64) -> [f64; D] {
        let theta = (t - self.t_old) / self.h();
        let theta1 = 1.0 - theta;
        let [r1, r2, r3, r4, r5] = &self.cont;
        std::array::from_fn(|i| r1[i] + theta * (r2[i] + theta1 * (r3[i] + theta * (r4[i] + theta1 * r5[i]))))
    }
}

/// What the observer wants after seeing a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

/// How an integration ended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination {
    Completed,
    Stopped { t: f64 },
}

fn axpy<const D: usize>(y: &[f64; D], h: f64, terms: &[(f64, &[f64; D])]) -> [f64; D] {
    std::array::from_fn(|i| y[i] + h * terms.iter().map(|(c, k)| c * k[i]).sum::<f64>())
}

fn rms_error<const D: usize>(err: &[f64; D], y0: &[f64; D], y1: &[f64; D], tol: &Tolerances) -> f64 {
    let sum: f64 = (0..D)
        .map(|i| {
            let sc = tol.abs_tol + tol.rel_tol * y0[i].abs().max(y1[i].abs());
            (err[i] / sc).powi(2)
        })
        .sum();
    (sum / D as f64).sqrt()
}

fn initial_step<const D: usize, F>(f: &F, t0: f64, y0: &[f64; D], k1: &[f64; D], tol: &Tolerances, dir: f64) -> f64
where
    F: Fn(f64, &[f64; D]) -> [f64; D],
{
    let sc: [f64; D] = std::array::from_fn(|i| tol.abs_tol + tol.rel_tol * y0[i].abs());
    let norm = |v: &[f64; D]| ((0..D).map(|i| (v[i] / sc[i]).powi(2)).sum::<f64>() / D as f64).sqrt();
    let d0 = norm(y0);
    let d1 = norm(k1);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let h0 = h0.min(tol.h_max);
    let y1 = axpy(y0, dir * h0, &[(1.0, k1)]);
    let k2 = f(t0 + dir * h0, &y1);
    let diff: [f64; D] = std::array::from_fn(|i| k2[i] - k1[i]);
    let d2 = norm(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { (0.01 / d1.max(d2)).powf(1.0 / 5.0) };
    (100.0 * h0).min(h1).min(tol.h_max)
}

/// Integrates `y' = f(t, y)` from `t0` to `t_end`, handing every accepted step
/// to `observer`. The observer may stop the integration early.
pub fn integrate<const D: usize, F, O>(
    f: F,
    t0: f64,
    y0: [f64; D],
    t_end: f64,
    tol: &Tolerances,
    mut observer: O,
) -> Result<Termination>
where
    F: Fn(f64, &[f64; D]) -> [f64; D],
    O: FnMut(&Step<D>) -> Control,
{
    if !(tol.rel_tol > 0.0) || !(tol.abs_tol >= 0.0) {
        return Err(Error::InvalidConfig("tolerances must be positive".into()));
    }
    if t_end == t0 {
        return Ok(Termination::Completed);
    }
    let dir = (t_end - t0).signum();
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let mut h = tol.h_init.unwrap_or_else(|| initial_step(&f, t0, &y0, &k1, tol, dir)).abs();
    let mut steps = 0usize;
    let mut last_rejected = false;

    loop {
        if steps >= tol.max_steps {
            return Err(Error::TooManySteps(t));
        }
        h = h.min(tol.h_max);
        let mut last = false;
        if (t + dir * h - t_end) * dir >= 0.0 {
            h = (t_end - t).abs();
            last = true;
        }
        if h <= 1e-14 * t.abs().max(1.0) {
            return Err(Error::StepSizeUnderflow(t));
        }
        let hs = dir * h;
        let k2 = f(t + C2 * hs, &axpy(&y, hs, &[(A21, &k1)]));
        let k3 = f(t + C3 * hs, &axpy(&y, hs, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(t + C4 * hs, &axpy(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(t + C5 * hs, &axpy(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = f(t + hs, &axpy(&y, hs, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
        let y_new = axpy(&y, hs, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let k7 = f(t + hs, &y_new);
        steps += 1;

        let err: [f64; D] =
            std::array::from_fn(|i| hs * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]));
        let e = rms_error(&err, &y, &y_new, tol);
        if !e.is_finite() {
            h *= 0.1;
            last_rejected = true;
            continue;
        }
        if e <= 1.0 {
            let t_new = if last { t_end } else { t + hs };
            let ydiff: [f64; D] = std::array::from_fn(|i| y_new[i] - y[i]);
            let bspl: [f64; D] = std::array::from_fn(|i| hs * k1[i] - ydiff[i]);
            let step = Step {
                t_old: t,
                t_new,
                y_old: y,
                y_new,
                cont: [
                    y,
                    ydiff,
                    bspl,
                    std::array::from_fn(|i| ydiff[i] - hs * k7[i] - bspl[i]),
                    std::array::from_fn(|i| {
                        hs * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i])
                    }),
                ],
            };
            if observer(&step) == Control::Stop {
                return Ok(Termination::Stopped { t: t_new });
            }
            if last {
                return Ok(Termination::Completed);
            }
            t = t_new;
            y = y_new;
            k1 = k7;
            let mut fac = 0.9 * e.max(1e-10).powf(-0.2);
            fac = fac.clamp(0.2, 5.0);
            if last_rejected {
                fac = fac.min(1.0);
            }
            h *= fac;
            last_rejected = false;
        } else {
            h *= (0.9 * e.powf(-0.2)).max(0.2);
            last_rejected = true;
        }
    }
}

/// Bisection on the dense output of `step` for a root of `g` inside the step.
/// `g` must change sign between `t_old` and `t_new`.
pub fn locate_root<const D: usize, G>(step: &Step<D>, g: G, t_tol: f64) -> (f64, [f64; D])
where
    G: Fn(f64, &[f64; D]) -> f64,
{
    let mut lo = step.t_old;
    let mut hi = step.t_new;
    let g_lo = g(lo, &step.y_old);
    for _ in 0..200 {
        if (hi - lo).abs() <= t_tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let y_mid = step.dense(mid);
        if g(mid, &y_mid).signum() == g_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    (t, step.dense(t))
}
