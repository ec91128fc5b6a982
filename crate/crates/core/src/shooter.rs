//! Shooting for the radial initial value problem
//!
//! ```text
//! -(v'' + (N-1+a)/r v') = r^(b-a) v^p,   v(0) = beta,  v'(0) = 0,
//! ```
//!
//! started from a two-term series at a small radius and integrated in
//! `s = ln r` with the state `(v, r v')`, which keeps both the `1/r`
//! coefficient and the `r^(b-a)` weight smooth near the origin.

use log::{debug, warn};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::{self, Control, Tolerances};
use crate::params::{derive, ProblemParams};
use crate::quadrature::{hermite5, Jet};

/// Radius of the fixed-point ball (relative to `w_star`) that an
/// Emden-Fowler image must stay in over the fit window to count as
/// converged to the singular solution.
pub const FIXED_POINT_BALL: f64 = 0.05;

/// Largest step in `ln r`; bounds the node spacing of stored trajectories.
const MAX_LOG_STEP: f64 = 0.1;

/// Crossing radii are refined to this tolerance in `ln r`.
const CROSSING_LOG_TOL: f64 = 1e-10;

/// A sign change counts only if `v` exceeded this multiple of `abs_tol`
/// somewhere on `[r0/2, r0)`. Below that the integration error, which
/// enters as a constant offset in `v`, decides the sign.
pub const CROSSING_RESOLUTION: f64 = 1e3;

/// Length of the prefix of `nodes` on which `v` is resolved, when the
/// terminal sign change lies below the resolution floor.
fn unresolved_crossing(nodes: &[RadialNode], abs_tol: f64) -> Option<usize> {
    let last = nodes.last()?;
    if last.v > 0.0 {
        return None;
    }
    let floor = CROSSING_RESOLUTION * abs_tol;
    let peak = nodes.iter().filter(|n| n.r >= 0.5 * last.r && n.v > 0.0).map(|n| n.v).fold(0.0, f64::max);
    if peak >= floor {
        return None;
    }
    Some(nodes.iter().rposition(|n| n.v > floor).map_or(0, |i| i + 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootConfig {
    /// Initial value `v(0)`.
    pub beta: f64,
    pub r_max: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Series hand-off radius; `None` selects `1e-4 * min(1, sigma)`.
    pub epsilon0: Option<f64>,
}

impl Default for ShootConfig {
    fn default() -> Self {
        Self { beta: 1.0, r_max: 1e4, rel_tol: 1e-10, abs_tol: 1e-12, epsilon0: None }
    }
}

impl ShootConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0) || !self.beta.is_finite() {
            return Err(Error::InvalidConfig(format!("beta = {} must be positive", self.beta)));
        }
        if !(self.r_max >= 1.0) || !self.r_max.is_finite() {
            return Err(Error::InvalidConfig(format!("r_max = {} must be >= 1", self.r_max)));
        }
        for (name, tol) in [("rel_tol", self.rel_tol), ("abs_tol", self.abs_tol)] {
            if !(tol > 0.0 && tol <= 1e-3) {
                return Err(Error::InvalidConfig(format!("{name} = {tol} outside (0, 1e-3]")));
            }
        }
        if let Some(eps) = self.epsilon0 {
            if !(eps > 0.0 && eps < 1.0) {
                return Err(Error::InvalidConfig(format!("epsilon0 = {eps} outside (0, 1)")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialNode {
    pub r: f64,
    pub v: f64,
    pub dv: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "fields", rename_all = "snake_case")]
pub enum ShotOutcome {
    CrossedZero { r0: f64 },
    PositiveGlobal { r_reached: f64, decay_exponent_estimate: f64 },
    ConvergedToSingular { r_reached: f64, oscillation_count: usize },
    Inconclusive { reason: String },
}

impl ShotOutcome {
    pub fn crossed(&self) -> bool {
        matches!(self, ShotOutcome::CrossedZero { .. })
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, ShotOutcome::Inconclusive { .. })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ShotOutcome::CrossedZero { .. } => "crossed_zero",
            ShotOutcome::PositiveGlobal { .. } => "positive_global",
            ShotOutcome::ConvergedToSingular { .. } => "converged_to_singular",
            ShotOutcome::Inconclusive { .. } => "inconclusive",
        }
    }
}

/// A solution of the radial IVP sampled at the integrator's accepted steps.
///
/// Nodes have strictly increasing `r > 0`; `v > 0` except possibly at a
/// terminal crossing node where `v = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialTrajectory {
    pub params: ProblemParams,
    /// `None` for trajectories built from external data.
    pub config: Option<ShootConfig>,
    pub nodes: Vec<RadialNode>,
    pub outcome: ShotOutcome,
}

impl RadialTrajectory {
    /// Wraps externally produced nodes and classifies them.
    pub fn from_nodes(params: ProblemParams, nodes: Vec<RadialNode>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::Parse("trajectory has no nodes".into()));
        }
        if let Some(i) = nodes.windows(2).position(|w| !(w[1].r > w[0].r)) {
            return Err(Error::Parse(format!("radii not strictly increasing at node {}", i + 1)));
        }
        if let Some(i) = nodes.iter().position(|n| !(n.r > 0.0)) {
            return Err(Error::NonpositiveNode(i));
        }
        let mut traj =
            Self { params, config: None, nodes, outcome: ShotOutcome::Inconclusive { reason: "unclassified".into() } };
        traj.outcome = classify_trajectory(&traj);
        Ok(traj)
    }

    pub fn r_range(&self) -> (f64, f64) {
        (self.nodes[0].r, self.nodes[self.nodes.len() - 1].r)
    }

    /// Nodes with `v > 0`.
    pub fn positive_nodes(&self) -> &[RadialNode] {
        let end = self.nodes.iter().position(|n| !(n.v > 0.0)).unwrap_or(self.nodes.len());
        &self.nodes[..end]
    }

    /// `v` at `r` by quintic Hermite interpolation between nodes, with the
    /// second derivative taken from the equation; below the first node the
    /// expansion `v = beta - c r^sigma` matched to that node is used.
    pub fn interpolate(&self, r: f64) -> Option<f64> {
        let i = self.nodes.partition_point(|n| n.r < r);
        if i == 0 {
            let first = &self.nodes[0];
            if r == first.r {
                return Some(first.v);
            }
            if !(r >= 0.0) {
                return None;
            }
            let sigma = self.params.sigma();
            let c = -first.dv * first.r.powf(1.0 - sigma) / sigma;
            return Some(first.v + c * (first.r.powf(sigma) - r.powf(sigma)));
        }
        let right = self.nodes.get(i)?;
        let left = &self.nodes[i - 1];
        Some(hermite5(&node_jet(&self.params, left), &node_jet(&self.params, right), r).0)
    }
}

/// Value, slope and curvature at a node, the last from the equation.
pub(crate) fn node_jet(params: &ProblemParams, node: &RadialNode) -> Jet {
    let n1 = params.dim() - 1.0 + params.a;
    let ddv = -n1 / node.r * node.dv - node.r.powf(params.b - params.a) * node.v.signum() * node.v.abs().powf(params.p);
    Jet { x: node.r, f: node.v, d1: node.dv, d2: ddv }
}

/// Initial data handed from the origin series to the integrator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesStart {
    pub r: f64,
    pub v: f64,
    pub dv: f64,
    /// Size of the first omitted term, `c2 r^(2 sigma)`.
    pub truncation_bound: f64,
}

/// Two-term expansion of the fixed point of
/// `T(v) = beta - int_0^r int_0^t s^(N-1+b) / t^(N-1+a) v(s)^p ds dt`:
///
/// `v = beta - beta^p r^sigma / (sigma (N+b))`,
/// `v' = -beta^p r^(sigma-1) / (N+b)`.
pub fn series_start(params: &ProblemParams, config: &ShootConfig) -> Result<SeriesStart> {
    let params = params.validate_solver()?;
    config.validate()?;
    params.admissible_weights()?;
    let sigma = params.sigma();
    let nb = params.dim() + params.b;
    let beta = config.beta;
    let c1 = beta.powf(params.p) / (sigma * nb);
    let c2 = params.p * beta.powf(params.p - 1.0) * c1 / (2.0 * sigma * (nb + sigma));
    let mut eps = config.epsilon0.unwrap_or(1e-4 * sigma.min(1.0));
    while c2 * eps.powf(2.0 * sigma) > config.rel_tol * beta && eps > 1e-200 {
        eps *= 0.5;
    }
    Ok(SeriesStart {
        r: eps,
        v: beta - c1 * eps.powf(sigma),
        dv: -beta.powf(params.p) * eps.powf(sigma - 1.0) / nb,
        truncation_bound: c2 * eps.powf(2.0 * sigma),
    })
}

/// Right-hand side in `s = ln r` for the state `(v, y = r v')`:
/// `v_s = y`, `y_s = -(N-2+a) y - r^sigma |v|^p sign(v)`.
pub(crate) fn log_rhs(params: &ProblemParams) -> impl Fn(f64, &[f64; 2]) -> [f64; 2] + '_ {
    let wd = params.weight_dim();
    let sigma = params.sigma();
    let p = params.p;
    move |s, y| {
        let v = y[0];
        [y[1], -wd * y[1] - (sigma * s).exp() * v.signum() * v.abs().powf(p)]
    }
}

pub fn shoot(params: &ProblemParams, config: &ShootConfig) -> Result<RadialTrajectory> {
    let start = series_start(params, config)?;
    let params = *params;
    let s0 = start.r.ln();
    let s_end = config.r_max.ln();
    let tol =
        Tolerances { rel_tol: config.rel_tol, abs_tol: config.abs_tol, h_max: MAX_LOG_STEP, ..Default::default() };
    let mut nodes = vec![RadialNode { r: start.r, v: start.v, dv: start.dv }];
    let mut crossing = None;
    let mut blew_up = false;

    let run = ode::integrate(log_rhs(&params), s0, [start.v, start.r * start.dv], s_end, &tol, |step| {
        if !step.y_new.iter().all(|x| x.is_finite()) {
            blew_up = true;
            return Control::Stop;
        }
        if step.y_new[0] <= 0.0 {
            let (s, y) = ode::locate_root(step, |_, y| y[0], CROSSING_LOG_TOL);
            let r0 = s.exp();
            crossing = Some(r0);
            nodes.push(RadialNode { r: r0, v: 0.0, dv: y[1] / r0 });
            return Control::Stop;
        }
        let r = step.t_new.exp();
        nodes.push(RadialNode { r, v: step.y_new[0], dv: step.y_new[1] / r });
        Control::Continue
    });

    let mut traj = RadialTrajectory {
        params,
        config: Some(*config),
        nodes,
        outcome: ShotOutcome::Inconclusive { reason: String::new() },
    };
    traj.outcome = match run {
        Err(e @ (Error::StepSizeUnderflow(_) | Error::TooManySteps(_))) => {
            ShotOutcome::Inconclusive { reason: e.to_string() }
        }
        Err(e) => return Err(e),
        Ok(_) if blew_up => ShotOutcome::Inconclusive { reason: "non-finite state".into() },
        Ok(_) => match (crossing, unresolved_crossing(&traj.nodes, config.abs_tol)) {
            (Some(r0), None) => ShotOutcome::CrossedZero { r0 },
            (Some(r0), Some(len)) => {
                debug!("sign change at r = {r0:.6e} is below the resolution floor; truncating to {len} nodes");
                traj.nodes.truncate(len);
                if traj.nodes.is_empty() {
                    ShotOutcome::Inconclusive { reason: "solution never resolved above the floor".into() }
                } else {
                    classify_trajectory(&traj)
                }
            }
            (None, _) => classify_trajectory(&traj),
        },
    };
    Ok(traj)
}

/// Classifies a trajectory integrated to termination.
///
/// A terminal node with `v <= 0` preceded by positive nodes is a crossing,
/// unless `v` had already fallen below the resolution floor (see
/// [`CROSSING_RESOLUTION`]); then the resolved prefix is classified.
/// Otherwise the last decade `[r_end/10, r_end]` is examined; it must lie in
/// `r >= 1`, so horizons below `r = 10` are inconclusive. If the
/// Emden-Fowler image stays within [`FIXED_POINT_BALL`] of the singular
/// fixed point over that decade the trajectory has converged to the
/// singular solution; otherwise the decay exponent `-d ln v / d ln r` is fitted
/// by least squares. A positive verdict only covers `r <= r_end`.
pub fn classify_trajectory(traj: &RadialTrajectory) -> ShotOutcome {
    let abs_tol = traj.config.unwrap_or_default().abs_tol;
    let nodes = match unresolved_crossing(&traj.nodes, abs_tol) {
        Some(0) => return ShotOutcome::Inconclusive { reason: "solution never resolved above the floor".into() },
        Some(len) => &traj.nodes[..len],
        None => &traj.nodes[..],
    };
    classify_nodes(&traj.params, nodes)
}

fn classify_nodes(params: &ProblemParams, nodes: &[RadialNode]) -> ShotOutcome {
    let last = nodes[nodes.len() - 1];
    if !(last.v > 0.0) {
        return if nodes.len() >= 2 && nodes[nodes.len() - 2].v > 0.0 {
            ShotOutcome::CrossedZero { r0: last.r }
        } else {
            ShotOutcome::Inconclusive { reason: "no positive node before the sign change".into() }
        };
    }
    let r_end = last.r;
    if r_end < 10.0 {
        return ShotOutcome::Inconclusive { reason: format!("fit window shorter than one decade (r_end = {r_end})") };
    }
    let window: Vec<&RadialNode> = nodes.iter().filter(|n| n.r >= r_end / 10.0).collect();
    if window.len() < 3 {
        return ShotOutcome::Inconclusive { reason: "too few nodes in the fit window".into() };
    }

    if let Ok(d) = derive(params) {
        if params.p > params.p_serrin() && d.lambda2 > 0.0 {
            let w_star = d.lambda2.powf(1.0 / (params.p - 1.0));
            let dist = |n: &RadialNode| {
                let rg = n.r.powf(d.gamma);
                let w = rg * n.v;
                let dw = rg * (d.gamma * n.v + n.r * n.dv);
                ((w - w_star).powi(2) + dw * dw).sqrt()
            };
            if window.iter().all(|n| dist(n) <= FIXED_POINT_BALL * w_star) {
                let oscillation_count = nodes
                    .windows(2)
                    .filter(|pair| {
                        let f = |n: &RadialNode| n.r.powf(d.gamma) * n.v - w_star;
                        f(&pair[0]).signum() != f(&pair[1]).signum()
                    })
                    .count();
                return ShotOutcome::ConvergedToSingular { r_reached: r_end, oscillation_count };
            }
        }
    }

    let xs: Vec<f64> = window.iter().map(|n| n.r.ln()).collect();
    let ys: Vec<f64> = window.iter().map(|n| n.v.ln()).collect();
    let count = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / count;
    let my = ys.iter().sum::<f64>() / count;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    if !slope.is_finite() {
        return ShotOutcome::Inconclusive { reason: "decay fit failed".into() };
    }
    ShotOutcome::PositiveGlobal { r_reached: r_end, decay_exponent_estimate: -slope }
}

/// One shot taken during [`threshold_bisect`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub p: f64,
    pub crossed: bool,
    pub outcome: ShotOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    /// Threshold estimate: the horizon-corrected extrapolation when
    /// available, else the bracket midpoint.
    pub p_star: f64,
    /// Midpoint of the final bisection bracket.
    pub p_bisect: f64,
    pub bracket: (f64, f64),
    pub extrapolated: bool,
    pub probes: Vec<Probe>,
}

/// Bisects on `p` for the change from crossing to non-crossing behaviour of
/// the `beta = 1` shot.
///
/// Crossing is assumed monotone in `p`; every probe is logged. Because the
/// crossing radius diverges like `(p* - p)^(-1/kappa)` with `kappa` the gap
/// between the unstable and stable exponents of the Emden-Fowler origin,
/// probes near the threshold cross beyond any finite `r_max`. The two
/// crossing probes nearest the bracket are therefore extrapolated along
/// `r0^(-kappa) -> 0`; the extrapolation is kept when it lies between the
/// last crossing probe and the initial upper end.
pub fn threshold_bisect(
    n: u32,
    a: f64,
    b: f64,
    p_lo: f64,
    p_hi: f64,
    tol_p: f64,
    config: &ShootConfig,
) -> Result<ThresholdResult> {
    let config = ShootConfig { beta: 1.0, ..*config };
    if !(p_lo < p_hi) || !(tol_p > 0.0) {
        return Err(Error::BracketInvalid(format!("need p_lo < p_hi and tol > 0, got [{p_lo}, {p_hi}], {tol_p}")));
    }
    let base = ProblemParams::new(n, a, b, p_lo);
    base.validate_solver()?;
    base.admissible_weights()?;
    if !(p_lo > base.p_serrin()) {
        return Err(Error::BracketInvalid(format!("p_lo = {p_lo} <= p_serrin = {}", base.p_serrin())));
    }

    let mut probes = Vec::new();
    let mut probe = |p: f64| -> Result<bool> {
        let traj = shoot(&ProblemParams { p, ..base }, &config)?;
        let crossed = traj.outcome.crossed();
        debug!("threshold probe p = {p}: {:?}", traj.outcome);
        probes.push(Probe { p, crossed, outcome: traj.outcome });
        Ok(crossed)
    };

    if !probe(p_lo)? {
        return Err(Error::BracketInvalid(format!("no crossing at p_lo = {p_lo}")));
    }
    if probe(p_hi)? {
        return Err(Error::BracketInvalid(format!("crossing at p_hi = {p_hi}")));
    }
    let (mut lo, mut hi) = (p_lo, p_hi);
    while hi - lo >= tol_p {
        let mid = 0.5 * (lo + hi);
        if probe(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let p_bisect = 0.5 * (lo + hi);

    let mut crossings: Vec<(f64, f64)> = probes
        .iter()
        .filter_map(|pr| match pr.outcome {
            ShotOutcome::CrossedZero { r0 } => Some((pr.p, r0)),
            _ => None,
        })
        .collect();
    crossings.sort_by(|x, y| x.0.total_cmp(&y.0));
    for pair in crossings.windows(2) {
        if pair[1].1 < pair[0].1 {
            warn!(
                "crossing radius not monotone in p: r0({}) = {} > r0({}) = {}",
                pair[0].0, pair[0].1, pair[1].0, pair[1].1
            );
        }
    }

    let extrapolation = match crossings.as_slice() {
        [.., (p1, r1), (p2, r2)] => {
            let z = |p: f64, r0: f64| -> Option<f64> {
                let d = derive(&ProblemParams { p, ..base }).ok()?;
                let kappa = (d.lambda1 * d.lambda1 + 4.0 * d.lambda2).sqrt();
                Some(r0.powf(-kappa))
            };
            match (z(*p1, *r1), z(*p2, *r2)) {
                (Some(z1), Some(z2)) if z1 > z2 => {
                    let p_ext = p2 + z2 * (p2 - p1) / (z1 - z2);
                    (p_ext.is_finite() && p_ext >= lo && p_ext <= p_hi).then_some(p_ext)
                }
                _ => None,
            }
        }
        _ => None,
    };

    Ok(ThresholdResult {
        p_star: extrapolation.unwrap_or(p_bisect),
        p_bisect,
        bracket: (lo, hi),
        extrapolated: extrapolation.is_some(),
        probes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn series_start_example() {
        let params = ProblemParams::new(3, 0.0, 0.0, 5.0);
        let config = ShootConfig { epsilon0: Some(1e-3), ..Default::default() };
        let s = series_start(&params, &config).unwrap();
        assert_eq!(s.r, 1e-3);
        assert_relative_eq!(s.v, 1.0 - 1e-6 / 6.0, max_relative = 1e-15);
        assert_relative_eq!(s.dv, -1e-3 / 3.0, max_relative = 1e-15);
    }

    #[test]
    fn series_start_small_sigma_is_finite() {
        let params = ProblemParams::new(3, 0.0, -1.5, 2.0);
        let config = ShootConfig { epsilon0: Some(1e-3), ..Default::default() };
        let s = series_start(&params, &config).unwrap();
        assert!(s.r <= 1e-3);
        assert!(s.v.is_finite() && s.dv.is_finite());
        assert!(s.dv < -1.0);
        assert!(s.truncation_bound <= config.rel_tol);
    }

    #[test]
    fn series_start_tends_to_initial_data() {
        let params = ProblemParams::new(4, 0.0, 0.0, 2.0);
        let s = series_start(&params, &ShootConfig { epsilon0: Some(1e-8), ..Default::default() }).unwrap();
        assert!((s.v - 1.0).abs() < 1e-15);
        assert!(s.dv.abs() < 1e-7);
    }

    #[test]
    fn series_start_rejects_inadmissible() {
        let params = ProblemParams::new(3, 0.0, -2.5, 2.0);
        let err = series_start(&params, &ShootConfig::default()).unwrap_err();
        assert_eq!(err.name(), "InadmissibleWeights");
    }

    #[test]
    fn config_validation() {
        let bad = ShootConfig { rel_tol: 1e-2, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = ShootConfig { r_max: 0.5, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = ShootConfig { epsilon0: Some(1.0), ..Default::default() };
        assert!(bad.validate().is_err());
    }

    fn synthetic(params: ProblemParams, f: impl Fn(f64) -> (f64, f64), r_hi: f64) -> RadialTrajectory {
        let count = 400;
        let nodes = (0..=count)
            .map(|i| {
                let r = 1e-3 * (r_hi / 1e-3f64).powf(i as f64 / count as f64);
                let (v, dv) = f(r);
                RadialNode { r, v, dv }
            })
            .collect();
        RadialTrajectory::from_nodes(params, nodes).unwrap()
    }

    #[test]
    fn classify_synthetic_bubble() {
        let params = ProblemParams::new(3, 0.0, 0.0, 5.0);
        let traj = synthetic(
            params,
            |r| {
                let q = 1.0 + r * r / 3.0;
                (q.powf(-0.5), -r / 3.0 * q.powf(-1.5))
            },
            1e4,
        );
        match traj.outcome {
            ShotOutcome::PositiveGlobal { decay_exponent_estimate, .. } => {
                assert!((decay_exponent_estimate - 1.0).abs() < 1e-4, "{decay_exponent_estimate}")
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn classify_synthetic_power_law() {
        let params = ProblemParams::new(3, 0.0, 0.0, 3.0);
        let traj = synthetic(params, |r| (r.powf(-0.5), -0.5 * r.powf(-1.5)), 1e3);
        match traj.outcome {
            ShotOutcome::PositiveGlobal { decay_exponent_estimate, .. } => {
                assert!((decay_exponent_estimate - 0.5).abs() < 1e-12)
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn classify_short_horizon_inconclusive() {
        let params = ProblemParams::new(3, 0.0, 0.0, 5.0);
        let traj = synthetic(params, |r| (1.0 / (1.0 + r), -1.0 / (1.0 + r).powi(2)), 2.0);
        assert!(traj.outcome.is_inconclusive());
    }

    #[test]
    fn classify_singular_tail_as_converged() {
        let params = ProblemParams::new(3, 0.0, 0.0, 6.0);
        let s = crate::closed_forms::SingularProfile::new(&params).unwrap();
        let traj = synthetic(
            params,
            |r| {
                let (v, dv, _) = s.derivatives(r).unwrap();
                (v, dv)
            },
            1e3,
        );
        assert!(matches!(traj.outcome, ShotOutcome::ConvergedToSingular { .. }), "{:?}", traj.outcome);
    }

    #[test]
    fn lane_emden_index_one() {
        // N = 3, p = 1 limit is excluded; p = 1.0001 stays close to sin(r)/r with zero near pi.
        let params = ProblemParams::new(3, 0.0, 0.0, 1.0001);
        let traj = shoot(&params, &ShootConfig::default()).unwrap();
        match traj.outcome {
            ShotOutcome::CrossedZero { r0 } => assert!((r0 - std::f64::consts::PI).abs() < 1e-3, "{r0}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn monotone_decreasing() {
        let params = ProblemParams::new(3, 0.0, 1.0, 8.0);
        let traj = shoot(&params, &ShootConfig { r_max: 100.0, ..Default::default() }).unwrap();
        assert!(traj.nodes.iter().all(|n| n.dv < 0.0));
        assert!(traj.nodes.windows(2).all(|w| w[1].r > w[0].r));
    }

    #[test]
    fn outcome_json_shape() {
        let json = serde_json::to_value(ShotOutcome::CrossedZero { r0: 1.5 }).unwrap();
        assert_eq!(json["kind"], "crossed_zero");
        assert_eq!(json["fields"]["r0"], 1.5);
    }

    #[test]
    fn bracket_validation() {
        let config = ShootConfig { r_max: 1e3, ..Default::default() };
        let err = threshold_bisect(3, 0.0, 0.0, 5.5, 6.0, 1e-2, &config).unwrap_err();
        assert_eq!(err.name(), "BracketInvalid");
        let err = threshold_bisect(3, 0.0, 0.0, 2.5, 6.0, 1e-2, &config).unwrap_err();
        assert_eq!(err.name(), "BracketInvalid");
    }
}
