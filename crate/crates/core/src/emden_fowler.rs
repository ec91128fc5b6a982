//! Emden-Fowler variables for radial solutions.
//!
//! With `t = ln r` and `w = r^gamma v`, `gamma = (2+b-a)/(p-1)`, the radial
//! equation becomes the autonomous system
//!
//! ```text
//! w'' = -L1 w' + L2 w - w^p,   L1 = N-2+a-2 gamma,   L2 = gamma (N-2+a-gamma).
//! ```
//!
//! Derivation: `r v' = e^{-gamma t}(w' - gamma w)` and
//! `r^2 v'' = e^{-gamma t}(w'' - (2 gamma + 1) w' + gamma (gamma + 1) w)`;
//! multiplying the radial equation by `r^2` and using `sigma = gamma (p-1)`
//! collects the terms above. The equilibrium `w_star = L2^(1/(p-1))` is the
//! singular solution. At the critical exponent `L1 = 0` and
//! `H = w'^2/2 - L2 w^2/2 + w^(p+1)/(p+1)` is conserved; the bubble is the
//! homoclinic orbit on `H = 0`. For the `v(0) = 1` bubble at `(3,0,0,5)`,
//! `w(t) = e^{t/2} (1 + e^{2t}/3)^{-1/2}` returns to the origin with
//! `w e^{t/2} -> sqrt(3)` as `t -> +inf`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::{self, Control, Tolerances};
use crate::params::{derive, ProblemParams};
use crate::shooter::RadialTrajectory;

/// Below this `|discriminant|` the equilibrium is reported as degenerate.
pub const DEGENERATE_DISCRIMINANT: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylinderNode {
    pub t: f64,
    pub w: f64,
    pub dw: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CylinderTrajectory {
    pub params: ProblemParams,
    pub nodes: Vec<CylinderNode>,
}

/// The damped oscillator `w'' = -L1 w' + L2 w - sign(w)|w|^p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderSystem {
    pub lambda1: f64,
    pub lambda2: f64,
    pub gamma: f64,
    pub p: f64,
}

impl CylinderSystem {
    pub fn new(params: &ProblemParams) -> Result<Self> {
        let d = derive(params)?;
        Ok(Self { lambda1: d.lambda1, lambda2: d.lambda2, gamma: d.gamma, p: params.p })
    }

    pub fn rhs(&self, w: f64, dw: f64) -> (f64, f64) {
        (dw, -self.lambda1 * dw + self.lambda2 * w - w.signum() * w.abs().powf(self.p))
    }

    pub fn hamiltonian(&self, w: f64, dw: f64) -> f64 {
        0.5 * dw * dw - 0.5 * self.lambda2 * w * w + w.abs().powf(self.p + 1.0) / (self.p + 1.0)
    }
}

pub fn rhs(params: &ProblemParams, w: f64, dw: f64) -> Result<(f64, f64)> {
    Ok(CylinderSystem::new(params)?.rhs(w, dw))
}

/// Maps every node `(r, v, v')` to `(ln r, r^gamma v, r^gamma (gamma v + r v'))`.
/// A terminal crossing node with `v = 0` is dropped.
pub fn to_cylinder(traj: &RadialTrajectory) -> Result<CylinderTrajectory> {
    let params = traj.params.validate_solver()?;
    let gamma = params.sigma() / (params.p - 1.0);
    let mut nodes = traj.nodes.as_slice();
    if let [rest @ .., last] = nodes {
        if last.v == 0.0 && !rest.is_empty() {
            nodes = rest;
        }
    }
    nodes
        .iter()
        .enumerate()
        .map(|(i, n)| {
            if !(n.r > 0.0 && n.v > 0.0) {
                return Err(Error::NonpositiveNode(i));
            }
            let rg = n.r.powf(gamma);
            Ok(CylinderNode { t: n.r.ln(), w: rg * n.v, dw: rg * (gamma * n.v + n.r * n.dv) })
        })
        .collect::<Result<Vec<_>>>()
        .map(|nodes| CylinderTrajectory { params, nodes })
}

/// Integrates the cylinder system directly from `(t0, w0, dw0)` to `t1`.
pub fn integrate_cylinder(
    params: &ProblemParams,
    t0: f64,
    w0: f64,
    dw0: f64,
    t1: f64,
    tol: &Tolerances,
) -> Result<CylinderTrajectory> {
    let system = CylinderSystem::new(params)?;
    let mut nodes = vec![CylinderNode { t: t0, w: w0, dw: dw0 }];
    ode::integrate(
        |_, y: &[f64; 2]| {
            let (a, b) = system.rhs(y[0], y[1]);
            [a, b]
        },
        t0,
        [w0, dw0],
        t1,
        tol,
        |step| {
            nodes.push(CylinderNode { t: step.t_new, w: step.y_new[0], dw: step.y_new[1] });
            Control::Continue
        },
    )?;
    Ok(CylinderTrajectory { params: *params, nodes })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FixedPointKind {
    Center,
    StableSpiral,
    UnstableSpiral,
    StableNode,
    UnstableNode,
    Saddle,
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPointReport {
    pub w_star: f64,
    /// Roots of `mu^2 + L1 mu + (p-1) L2 = 0`.
    pub eigenvalues: [Complex64; 2],
    pub kind: FixedPointKind,
    pub positive_real_part: bool,
    pub discriminant: f64,
}

/// Linearization at the non-trivial equilibrium `(w_star, 0)`.
pub fn fixed_points(params: &ProblemParams) -> Result<FixedPointReport> {
    let params = params.validate_solver()?;
    let p_serrin = params.p_serrin();
    if !(params.p > p_serrin) {
        return Err(Error::NotInSerrinSupercriticalRange { p: params.p, p_serrin });
    }
    let system = CylinderSystem::new(&params)?;
    let l1 = system.lambda1;
    let product = (params.p - 1.0) * system.lambda2;
    let discriminant = l1 * l1 - 4.0 * product;
    let root = Complex64::new(discriminant, 0.0).sqrt();
    let eigenvalues = [(-l1 + root) / 2.0, (-l1 - root) / 2.0];
    let center = params.is_critical() || l1 == 0.0;
    let kind = if product < 0.0 {
        FixedPointKind::Saddle
    } else if discriminant.abs() < DEGENERATE_DISCRIMINANT {
        FixedPointKind::Degenerate
    } else if discriminant < 0.0 {
        if center {
            FixedPointKind::Center
        } else if l1 > 0.0 {
            FixedPointKind::StableSpiral
        } else {
            FixedPointKind::UnstableSpiral
        }
    } else if l1 > 0.0 {
        FixedPointKind::StableNode
    } else {
        FixedPointKind::UnstableNode
    };
    Ok(FixedPointReport {
        w_star: system.lambda2.powf(1.0 / (params.p - 1.0)),
        eigenvalues,
        kind,
        positive_real_part: eigenvalues.iter().any(|mu| mu.re > 0.0),
        discriminant,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianValue {
    pub h: f64,
    /// False off the critical exponent, where `H` is not a first integral.
    pub conserved: bool,
}

pub fn hamiltonian(params: &ProblemParams, w: f64, dw: f64) -> Result<HamiltonianValue> {
    let system = CylinderSystem::new(params)?;
    Ok(HamiltonianValue { h: system.hamiltonian(w, dw), conserved: params.is_critical() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_forms::SingularProfile;
    use crate::shooter::RadialNode;
    use approx::assert_relative_eq;

    #[test]
    fn rhs_examples() {
        let params = ProblemParams::new(3, 0.0, 0.0, 5.0);
        let w_star = 0.25f64.powf(0.25);
        assert!(rhs(&params, w_star, 0.0).unwrap().1.abs() < 1e-15);
        assert_eq!(rhs(&params, 0.0, 0.0).unwrap(), (0.0, 0.0));
        assert_eq!(rhs(&params, 1.0, 0.0).unwrap().1, -0.75);
    }

    #[test]
    fn fixed_point_center() {
        let fp = fixed_points(&ProblemParams::new(3, 0.0, 0.0, 5.0)).unwrap();
        assert_eq!(fp.kind, FixedPointKind::Center);
        assert!((fp.eigenvalues[0] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((fp.eigenvalues[1] - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn fixed_point_stable_spiral() {
        let fp = fixed_points(&ProblemParams::new(3, 0.0, 0.0, 6.0)).unwrap();
        assert_eq!(fp.kind, FixedPointKind::StableSpiral);
        assert_relative_eq!(fp.eigenvalues[0].re, -0.1, max_relative = 1e-12);
        assert!(!fp.positive_real_part);
    }

    #[test]
    fn fixed_point_subcritical_unstable() {
        let fp = fixed_points(&ProblemParams::new(3, 0.0, 0.0, 4.0)).unwrap();
        assert!(fp.positive_real_part);
        assert!(matches!(fp.kind, FixedPointKind::UnstableSpiral | FixedPointKind::UnstableNode));
        let sum = fp.eigenvalues[0] + fp.eigenvalues[1];
        let l1 = derive(&ProblemParams::new(3, 0.0, 0.0, 4.0)).unwrap().lambda1;
        assert!((sum.re + l1).abs() < 1e-12);
        assert!(fixed_points(&ProblemParams::new(3, 0.0, 0.0, 2.5)).is_err());
    }

    #[test]
    fn hamiltonian_examples() {
        let params = ProblemParams::new(3, 0.0, 0.0, 5.0);
        assert_eq!(hamiltonian(&params, 0.0, 0.0).unwrap().h, 0.0);
        let w_star = 0.25f64.powf(0.25);
        // independent arithmetic: -0.25 * 0.5 / 2 + 0.5^3 / 6
        let expected = -0.0625 + 0.125 / 6.0;
        let h = hamiltonian(&params, w_star, 0.0).unwrap();
        assert!(h.conserved);
        assert_relative_eq!(h.h, expected, max_relative = 1e-14);
        assert_relative_eq!(h.h, -0.041667, max_relative = 1e-4);
        assert!(!hamiltonian(&ProblemParams::new(3, 0.0, 0.0, 6.0), 0.1, 0.0).unwrap().conserved);
    }

    #[test]
    fn singular_maps_to_fixed_point() {
        let params = ProblemParams::new(3, 0.5, 1.0, 6.0);
        let s = SingularProfile::new(&params).unwrap();
        let nodes = (1..50)
            .map(|i| {
                let r = 0.1 * i as f64;
                let (v, dv, _) = s.derivatives(r).unwrap();
                RadialNode { r, v, dv }
            })
            .collect();
        let traj = RadialTrajectory::from_nodes(params, nodes).unwrap();
        let cyl = to_cylinder(&traj).unwrap();
        let w_star = fixed_points(&params).unwrap().w_star;
        for n in &cyl.nodes {
            assert_relative_eq!(n.w, w_star, max_relative = 1e-13);
            assert!(n.dw.abs() < 1e-13);
        }
    }

    #[test]
    fn closed_form_bubble_cylinder_limit() {
        // w(t) = e^{t/2}(1 + e^{2t}/3)^{-1/2}; w e^{t/2} -> sqrt(3)
        let w = |t: f64| (0.5 * t).exp() * (1.0 + (2.0 * t).exp() / 3.0).powf(-0.5);
        let t = 30.0;
        assert_relative_eq!(w(t) * (0.5 * t).exp(), 3f64.sqrt(), max_relative = 1e-12);
        assert!(w(t) < 1e-6);
    }

    #[test]
    fn nonpositive_node_rejected() {
        let params = ProblemParams::new(3, 0.0, 0.0, 3.0);
        let nodes = vec![
            RadialNode { r: 1.0, v: 1.0, dv: -1.0 },
            RadialNode { r: 2.0, v: -0.5, dv: -1.0 },
            RadialNode { r: 3.0, v: 0.0, dv: -1.0 },
        ];
        let traj = RadialTrajectory::from_nodes(params, nodes).unwrap();
        assert_eq!(to_cylinder(&traj).unwrap_err().name(), "NonpositiveNode");
    }
}
