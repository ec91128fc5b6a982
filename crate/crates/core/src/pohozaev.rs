//! Rellich-Pohozaev identity on balls `B_R` for radial solutions:
//!
//! ```text
//! ((N+b)/(p+1) - (N-2+a)/2) int_{B_R} |x|^b u^(p+1)
//!     = (N-2+a)/2 int_{dB_R} R^a u du/dnu
//!     + 1/(p+1) int_{dB_R} R^b u^(p+1) (x.nu)
//!     + 1/2 int_{dB_R} (du/dnu)^2 (x.nu) |x|^a.
//! ```
//!
//! For radial `u` every surface integral is `omega_{N-1} R^(N-1)` times the
//! integrand at `R`, with `x.nu = R`.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::params::ProblemParams;
use crate::quadrature::{hermite3, hermite3_derivative, hermite5, GaussLegendre};
use crate::shooter::{node_jet, RadialNode, RadialTrajectory};

/// Denominator floor for [`PohozaevReport::relative_residual`].
pub const RELATIVE_FLOOR: f64 = 1e-30;

const GAUSS_POINTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PohozaevReport {
    #[serde(rename = "R")]
    pub radius: f64,
    pub omega: f64,
    pub interior_coeff: f64,
    pub interior_integral: f64,
    pub boundary_1: f64,
    pub boundary_2: f64,
    pub boundary_3: f64,
    pub residual: f64,
    pub relative_residual: f64,
    /// Relative change of the boundary sum when the quintic interpolant at
    /// `R` is replaced by the cubic one; zero when `R` is a node.
    pub interpolation_error: f64,
}

impl PohozaevReport {
    pub const CSV_HEADER: &'static str = "R,interior,boundary1,boundary2,boundary3,residual,relative_residual";

    /// One CSV row; `interior` is `interior_coeff * interior_integral`.
    pub fn csv_row(&self) -> String {
        format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            self.radius,
            self.interior_coeff * self.interior_integral,
            self.boundary_1,
            self.boundary_2,
            self.boundary_3,
            self.residual,
            self.relative_residual
        )
    }
}

/// Area of the unit sphere `S^(N-1)`: `2 pi^(N/2) / Gamma(N/2)`.
pub fn sphere_area(n: u32) -> f64 {
    let half = 0.5 * f64::from(n);
    2.0 * std::f64::consts::PI.powf(half) / gamma(half)
}

/// `(N+b)/(p+1) - (N-2+a)/2`; positive exactly below the critical exponent.
pub fn ball_nonexistence_coeff(params: &ProblemParams) -> Result<f64> {
    let params = params.validate_solver()?;
    Ok(interior_coeff(&params))
}

fn interior_coeff(params: &ProblemParams) -> f64 {
    (params.dim() + params.b) / (params.p + 1.0) - params.weight_dim() / 2.0
}

/// `int_0^{r1} r^(N-1+b) v^(p+1) dr` from the origin expansion
/// `v = beta - c r^sigma` matched to the first node.
fn origin_integral(params: &ProblemParams, first: &RadialNode) -> f64 {
    let sigma = params.sigma();
    let q = params.p + 1.0;
    let k = params.dim() + params.b;
    let r1 = first.r;
    let c = -first.dv * r1.powf(1.0 - sigma) / sigma;
    let beta = first.v + c * r1.powf(sigma);
    let ratio = c / beta;
    beta.powf(q)
        * (r1.powf(k) / k - q * ratio * r1.powf(k + sigma) / (k + sigma)
            + 0.5 * q * (q - 1.0) * ratio * ratio * r1.powf(k + 2.0 * sigma) / (k + 2.0 * sigma))
}

/// Both sides of the identity on `B_R` from the nodes of `traj`.
pub fn evaluate(traj: &RadialTrajectory, radius: f64) -> Result<PohozaevReport> {
    let params = traj.params.validate_solver()?;
    params.admissible_weights()?;
    let (lo, hi) = traj.r_range();
    if !(radius >= lo && radius <= hi) {
        return Err(Error::RangeExceeded { radius, lo, hi });
    }
    let positive = traj.positive_nodes();
    if positive.is_empty() || radius > positive[positive.len() - 1].r {
        return Err(Error::NonpositiveSolution(radius));
    }

    let rule = GaussLegendre::new(GAUSS_POINTS);
    let weight_exp = params.dim() - 1.0 + params.b;
    let q = params.p + 1.0;
    let integrand = |r: f64, v: f64| r.powf(weight_exp) * v.abs().powf(q);

    let mut integral = origin_integral(&params, &positive[0]);
    let mut boundary = None;
    for pair in positive.windows(2) {
        let (left, right) = (node_jet(&params, &pair[0]), node_jet(&params, &pair[1]));
        if radius <= left.x {
            break;
        }
        let upper = radius.min(right.x);
        integral += rule.integrate(left.x, upper, |r| integrand(r, hermite5(&left, &right, r).0));
        if radius <= right.x {
            boundary = Some((left, right));
            break;
        }
    }

    let (v_r, dv_r, cubic) = match boundary {
        Some((_, right)) if radius == right.x => (right.f, right.d1, None),
        Some((left, right)) => {
            let (v, dv) = hermite5(&left, &right, radius);
            let v3 = hermite3(left.x, left.f, left.d1, right.x, right.f, right.d1, radius);
            let dv3 = hermite3_derivative(left.x, left.f, left.d1, right.x, right.f, right.d1, radius);
            (v, dv, Some((v3, dv3)))
        }
        None => (positive[0].v, positive[0].dv, None),
    };

    let omega = sphere_area(params.n);
    let area = omega * radius.powf(params.dim() - 1.0);
    let boundaries = |v: f64, dv: f64| {
        [
            0.5 * params.weight_dim() * area * radius.powf(params.a) * v * dv,
            area * radius.powf(params.b + 1.0) * v.abs().powf(q) / q,
            0.5 * area * radius.powf(params.a + 1.0) * dv * dv,
        ]
    };
    let [b1, b2, b3] = boundaries(v_r, dv_r);
    let coeff = interior_coeff(&params);
    let interior_integral = omega * integral;
    let lhs = coeff * interior_integral;
    let residual = lhs - (b1 + b2 + b3);
    let scale = lhs.abs().max(b1.abs() + b2.abs() + b3.abs()).max(RELATIVE_FLOOR);
    let interpolation_error = cubic.map_or(0.0, |(v3, dv3)| {
        let alt: f64 = boundaries(v3, dv3).iter().sum();
        (alt - (b1 + b2 + b3)).abs() / scale
    });

    Ok(PohozaevReport {
        radius,
        omega,
        interior_coeff: coeff,
        interior_integral,
        boundary_1: b1,
        boundary_2: b2,
        boundary_3: b3,
        residual,
        relative_residual: residual / scale,
        interpolation_error,
    })
}
