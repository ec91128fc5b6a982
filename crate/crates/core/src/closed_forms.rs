//! Explicit radial solutions: the critical bubble family and the singular
//! power-law solution, plus pointwise residuals of the radial equation
//!
//! ```text
//! v'' + (N-1+a)/r v' + r^(b-a) v^p = 0.
//! ```
//!
//! With `s = (lambda r)^sigma`, `m = (N-2+a)/sigma` and `gamma = (N-2+a)/2`,
//! the bubble is `A lambda^gamma (1 + s)^(-m)` where
//! `A^(p-1) = m (m+1) sigma^2`. Substituting into the divergence form
//! `(r^(N-1+a) v')' = -A m (m+1) sigma^2 r^(N-1+b) (1+s)^(-m-2)` and using
//! `m p = m + 2` at the critical exponent gives the amplitude. Only the
//! radially centred family is modelled; the translated bubbles that exist
//! for `a = b = 0` are not.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ProblemParams;

/// Above this value of `sigma ln(lambda r)` the bubble is evaluated through
/// the asymptotic log form.
const LOG_SPACE_SWITCH: f64 = 500.0;

/// `ln(1 + e^x)` without overflow.
fn ln1p_exp(x: f64) -> f64 {
    if x > 35.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Amplitude `A` making `A (1 + r^sigma)^(-m)` an exact solution at `p = p_critical`.
pub fn bubble_amplitude(params: &ProblemParams) -> Result<f64> {
    let params = params.validate_solver()?;
    params.admissible_weights()?;
    if !params.is_critical() {
        return Err(Error::NotCritical { p: params.p, p_critical: params.p_critical() });
    }
    let sigma = params.sigma();
    let m = params.weight_dim() / sigma;
    let amplitude = (m * (m + 1.0) * sigma * sigma).powf(1.0 / (params.p - 1.0));
    debug_assert!({
        let probe = BubbleProfile { params, m, amplitude, lambda_scale: 1.0 };
        probe.relative_residual(1.0).abs() < 1e-10
    });
    Ok(amplitude)
}

/// `amplitude * lambda^gamma * (1 + (lambda r)^sigma)^(-m)` at the critical exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BubbleProfile {
    pub params: ProblemParams,
    pub m: f64,
    pub amplitude: f64,
    pub lambda_scale: f64,
}

impl BubbleProfile {
    pub fn new(params: &ProblemParams, lambda_scale: f64) -> Result<Self> {
        let amplitude = bubble_amplitude(params)?;
        if !(lambda_scale > 0.0) || !lambda_scale.is_finite() {
            return Err(Error::InvalidConfig(format!("lambda_scale = {lambda_scale} must be positive")));
        }
        Ok(Self { params: *params, m: params.weight_dim() / params.sigma(), amplitude, lambda_scale })
    }

    /// The member of the family with `v(0) = 1`: `lambda = A^(-2/(N-2+a))`.
    pub fn normalized(params: &ProblemParams) -> Result<Self> {
        let amplitude = bubble_amplitude(params)?;
        Self::new(params, amplitude.powf(-2.0 / params.weight_dim()))
    }

    pub fn sigma(&self) -> f64 {
        self.params.sigma()
    }

    /// Dilation exponent `gamma = (N-2+a)/2`.
    pub fn gamma(&self) -> f64 {
        0.5 * self.params.weight_dim()
    }

    /// `v(0) = amplitude * lambda^gamma`.
    pub fn peak(&self) -> f64 {
        self.amplitude * self.lambda_scale.powf(self.gamma())
    }

    fn ln_peak(&self) -> f64 {
        self.amplitude.ln() + self.gamma() * self.lambda_scale.ln()
    }

    /// Returns `(ln x, ln(1 + x^sigma))` with `x = lambda r`, `r > 0`.
    fn logs(&self, r: f64) -> (f64, f64) {
        let ln_x = (self.lambda_scale * r).ln();
        let ls = self.sigma() * ln_x;
        let ln_1ps = if ls > LOG_SPACE_SWITCH { ls } else { ln1p_exp(ls) };
        (ln_x, ln_1ps)
    }

    pub fn value(&self, r: f64) -> f64 {
        if r == 0.0 {
            return self.peak();
        }
        let (_, l) = self.logs(r);
        (self.ln_peak() - self.m * l).exp()
    }

    /// Value and radial derivative at `r >= 0`.
    pub fn eval(&self, r: f64) -> Result<(f64, f64)> {
        if r < 0.0 || r.is_nan() {
            return Err(Error::NonpositiveRadius(r));
        }
        let sigma = self.sigma();
        if r == 0.0 {
            let dv = if sigma > 1.0 {
                0.0
            } else if sigma == 1.0 {
                -self.peak() * self.m * self.lambda_scale
            } else {
                return Err(Error::DerivativeUndefinedAtOrigin(sigma));
            };
            return Ok((self.peak(), dv));
        }
        let (ln_x, l) = self.logs(r);
        let v = (self.ln_peak() - self.m * l).exp();
        let dv = -(self.ln_peak() + (self.m * sigma * self.lambda_scale).ln() + (sigma - 1.0) * ln_x
            - (self.m + 1.0) * l)
            .exp();
        Ok((v, dv))
    }

    /// Second radial derivative at `r > 0`.
    pub fn second_derivative(&self, r: f64) -> f64 {
        let sigma = self.sigma();
        let (ln_x, l) = self.logs(r);
        let scale = self.ln_peak() + (self.m * sigma).ln() + 2.0 * self.lambda_scale.ln() - (self.m + 2.0) * l;
        let t1 = (scale + (sigma - 2.0) * ln_x).exp();
        let t2 = (scale + (2.0 * sigma - 2.0) * ln_x).exp();
        -((sigma - 1.0) * t1 - (self.m * sigma + 1.0) * t2)
    }

    /// Closed-form derivative of the flux `r^(N-1+a) v'(r)`.
    pub fn flux_derivative(&self, r: f64) -> f64 {
        let sigma = self.sigma();
        let n1 = self.params.dim() - 1.0 + self.params.a;
        let (ln_x, l) = self.logs(r);
        -(self.ln_peak()
            + (self.m * (self.m + 1.0) * sigma * sigma).ln()
            + (2.0 - n1) * self.lambda_scale.ln()
            + (self.m * sigma + sigma - 1.0) * ln_x
            - (self.m + 2.0) * l)
            .exp()
    }

    /// Relative defect of the divergence form
    /// `((r^(N-1+a) v')' + r^(N-1+b) v^p) / (r^(N-1+b) v^p)` at `r > 0`.
    ///
    /// Both terms are single closed-form products, so no cancellation occurs
    /// even where `v''` and `v'/r` are many orders larger than the source.
    pub fn relative_residual(&self, r: f64) -> f64 {
        let p = &self.params;
        let (_, l) = self.logs(r);
        let ln_source = (p.dim() - 1.0 + p.b) * r.ln() + p.p * (self.ln_peak() - self.m * l);
        let source = ln_source.exp();
        (self.flux_derivative(r) + source) / source
    }
}

/// `[gamma (N-2+a-gamma)]^(1/(p-1)) r^(-gamma)`, defined for `p > p_serrin`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularProfile {
    pub params: ProblemParams,
    pub gamma: f64,
    pub amplitude: f64,
}

impl SingularProfile {
    pub fn new(params: &ProblemParams) -> Result<Self> {
        let params = params.validate_solver()?;
        params.admissible_weights()?;
        let p_serrin = params.p_serrin();
        if !(params.p > p_serrin) {
            return Err(Error::NotInSerrinSupercriticalRange { p: params.p, p_serrin });
        }
        let gamma = params.sigma() / (params.p - 1.0);
        let amplitude = (gamma * (params.weight_dim() - gamma)).powf(1.0 / (params.p - 1.0));
        Ok(Self { params, gamma, amplitude })
    }

    pub fn value(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::NonpositiveRadius(r));
        }
        Ok(self.amplitude * r.powf(-self.gamma))
    }

    /// `(v, v', v'')` at `r > 0`.
    pub fn derivatives(&self, r: f64) -> Result<(f64, f64, f64)> {
        let v = self.value(r)?;
        let g = self.gamma;
        Ok((v, -g * v / r, g * (g + 1.0) * v / (r * r)))
    }
}

pub fn singular_eval(params: &ProblemParams, r: f64) -> Result<f64> {
    SingularProfile::new(params)?.value(r)
}

/// `v'' + ((N-1+a)/r) v' + r^(b-a) v^p`, the pointwise defect of the radial equation.
pub fn residual(params: &ProblemParams, v: f64, dv: f64, ddv: f64, r: f64) -> f64 {
    ddv + (params.dim() - 1.0 + params.a) / r * dv + source_term(params, v, r)
}

/// [`residual`] divided by the source `r^(b-a) v^p`.
pub fn relative_residual(params: &ProblemParams, v: f64, dv: f64, ddv: f64, r: f64) -> f64 {
    residual(params, v, dv, ddv, r) / source_term(params, v, r)
}

fn source_term(params: &ProblemParams, v: f64, r: f64) -> f64 {
    r.powf(params.b - params.a) * v.signum() * v.abs().powf(params.p)
}
