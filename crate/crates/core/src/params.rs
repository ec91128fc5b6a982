//! Problem parameters, derived exponents and the existence/nonexistence
//! regime classifier for `div(|x|^a Du) + |x|^b u^p = 0` in `R^N`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance on `|p - p_critical| / p_critical` below which `p` is
/// treated as the critical exponent.
pub const CRIT_REL_TOL: f64 = 1e-12;

/// Absolute tolerance for the dimensional balance `(N+b)/q + 1 = (N+a)/2`.
pub const BALANCE_TOL: f64 = 1e-10;

/// The quadruple `(N, a, b, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemParams {
    #[serde(rename = "N")]
    pub n: u32,
    pub a: f64,
    pub b: f64,
    pub p: f64,
}

impl ProblemParams {
    pub const fn new(n: u32, a: f64, b: f64, p: f64) -> Self {
        Self { n, a, b, p }
    }

    pub fn dim(&self) -> f64 {
        f64::from(self.n)
    }

    /// `N - 2 + a`, the effective dimension minus two.
    pub fn weight_dim(&self) -> f64 {
        self.dim() - 2.0 + self.a
    }

    /// `2 + b - a`.
    pub fn sigma(&self) -> f64 {
        2.0 + self.b - self.a
    }

    pub fn p_serrin(&self) -> f64 {
        (self.dim() + self.b) / self.weight_dim()
    }

    pub fn p_critical(&self) -> f64 {
        (self.dim() + 2.0 + 2.0 * self.b - self.a) / self.weight_dim()
    }

    /// Returns the params unchanged when `N >= 3` and `N - 2 + a > 0`.
    pub fn validate(self) -> Result<Self> {
        if self.n < 3 {
            return Err(Error::DimensionTooSmall(self.n));
        }
        let wd = self.weight_dim();
        if !(wd > 0.0) {
            return Err(Error::DegenerateWeight(wd));
        }
        Ok(self)
    }

    /// Validation plus `p > 1`, required by every solver-facing operation.
    pub fn validate_solver(self) -> Result<Self> {
        let params = self.validate()?;
        if !(params.p > 1.0) {
            return Err(Error::InvalidExponent(params.p));
        }
        Ok(params)
    }

    /// `N + b > 0` and `b > a - 2`: the weights admit local positive solutions.
    pub fn admissible_weights(&self) -> Result<()> {
        if self.dim() + self.b <= 0.0 {
            return Err(Error::InadmissibleWeights("N+b<=0"));
        }
        if self.b <= self.a - 2.0 {
            return Err(Error::InadmissibleWeights("b<=a-2"));
        }
        Ok(())
    }

    pub fn is_critical(&self) -> bool {
        is_critical(self.p, self.p_critical())
    }

    /// Residual of the dimensional balance `(N+b)/(p+1) + 1 - (N+a)/2`.
    pub fn balance_defect(&self) -> f64 {
        (self.dim() + self.b) / (self.p + 1.0) + 1.0 - (self.dim() + self.a) / 2.0
    }
}

pub fn is_critical(p: f64, p_critical: f64) -> bool {
    ((p - p_critical) / p_critical).abs() <= CRIT_REL_TOL
}

/// `beta_FS(a) = ((N-2+a)/2) (1 - N [(N-2+a)^2 + 4(N-1)]^{-1/2})`.
///
/// Only meaningful for `a > 0`; callers decide what to do otherwise.
pub fn beta_fs(n: u32, a: f64) -> f64 {
    let dim = f64::from(n);
    let wd = dim - 2.0 + a;
    0.5 * wd * (1.0 - dim / (wd * wd + 4.0 * (dim - 1.0)).sqrt())
}

/// Scalars derived from [`ProblemParams`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedExponents {
    pub sigma: f64,
    pub p_serrin: f64,
    pub p_critical: f64,
    pub gamma: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    /// `q * beta_FS(a)` with `q = p + 1`; absent for `a <= 0`.
    pub fs_b_threshold: Option<f64>,
}

pub fn derive(params: &ProblemParams) -> Result<DerivedExponents> {
    let params = params.validate_solver()?;
    let wd = params.weight_dim();
    let sigma = params.sigma();
    let gamma = sigma / (params.p - 1.0);
    let fs_b_threshold = (params.a > 0.0).then(|| (params.p + 1.0) * beta_fs(params.n, params.a));
    Ok(DerivedExponents {
        sigma,
        p_serrin: params.p_serrin(),
        p_critical: params.p_critical(),
        gamma,
        lambda1: wd - 2.0 * gamma,
        lambda2: gamma * (wd - gamma),
        fs_b_threshold,
    })
}

/// Existence/nonexistence regime of a parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeKind {
    InadmissibleWeights,
    NoPositiveSolutionSerrin,
    SubcriticalLiouville,
    Critical,
    Supercritical,
}

/// The inequality that decided a [`Regime`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Witness {
    #[serde(rename = "N+b<=0")]
    NPlusBNonpositive,
    #[serde(rename = "b<=a-2")]
    BAtMostAMinusTwo,
    #[serde(rename = "p=1")]
    PEqualsOne,
    #[serde(rename = "p<=p_serrin")]
    PAtMostSerrin,
    #[serde(rename = "p<p_critical")]
    PBelowCritical,
    #[serde(rename = "p=p_critical")]
    PEqualsCritical,
    #[serde(rename = "p>p_critical")]
    PAboveCritical,
}

impl Witness {
    pub fn tag(&self) -> &'static str {
        match self {
            Witness::NPlusBNonpositive => "N+b<=0",
            Witness::BAtMostAMinusTwo => "b<=a-2",
            Witness::PEqualsOne => "p=1",
            Witness::PAtMostSerrin => "p<=p_serrin",
            Witness::PBelowCritical => "p<p_critical",
            Witness::PEqualsCritical => "p=p_critical",
            Witness::PAboveCritical => "p>p_critical",
        }
    }

    /// Re-evaluates the inequality on `params`.
    pub fn holds(&self, params: &ProblemParams) -> bool {
        let p = params.p;
        match self {
            Witness::NPlusBNonpositive => params.dim() + params.b <= 0.0,
            Witness::BAtMostAMinusTwo => params.b <= params.a - 2.0,
            Witness::PEqualsOne => p == 1.0,
            Witness::PAtMostSerrin => p <= params.p_serrin(),
            Witness::PBelowCritical => p < params.p_critical() && !params.is_critical(),
            Witness::PEqualsCritical => params.is_critical(),
            Witness::PAboveCritical => p > params.p_critical() && !params.is_critical(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Regime {
    pub regime: RegimeKind,
    pub witness: Witness,
}

/// Places `params` in exactly one regime.
///
/// `p = 1` is accepted and reported as [`RegimeKind::NoPositiveSolutionSerrin`];
/// `p < 1` is rejected.
pub fn classify(params: &ProblemParams) -> Result<Regime> {
    let params = params.validate()?;
    if !(params.p >= 1.0) {
        return Err(Error::InvalidExponent(params.p));
    }
    let (regime, witness) = if params.dim() + params.b <= 0.0 {
        (RegimeKind::InadmissibleWeights, Witness::NPlusBNonpositive)
    } else if params.b <= params.a - 2.0 {
        (RegimeKind::InadmissibleWeights, Witness::BAtMostAMinusTwo)
    } else if params.p == 1.0 {
        (RegimeKind::NoPositiveSolutionSerrin, Witness::PEqualsOne)
    } else if params.p <= params.p_serrin() {
        (RegimeKind::NoPositiveSolutionSerrin, Witness::PAtMostSerrin)
    } else if params.is_critical() {
        (RegimeKind::Critical, Witness::PEqualsCritical)
    } else if params.p < params.p_critical() {
        (RegimeKind::SubcriticalLiouville, Witness::PBelowCritical)
    } else {
        (RegimeKind::Supercritical, Witness::PAboveCritical)
    };
    Ok(Regime { regime, witness })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FsRegion {
    RadialMinimizer,
    SymmetryBreaking,
    NotApplicable,
}

/// Radial-minimizer versus symmetry-breaking flag on the CKN balance manifold.
pub fn fs_region(params: &ProblemParams) -> Result<FsRegion> {
    let params = params.validate_solver()?;
    let defect = params.balance_defect();
    if defect.abs() > BALANCE_TOL {
        let rhs = (params.dim() + params.a) / 2.0;
        return Err(Error::BalanceViolated { lhs: rhs + defect, rhs });
    }
    Ok(fs_region_unchecked(params.n, params.a, params.b, params.p + 1.0))
}

pub(crate) fn fs_region_unchecked(n: u32, a: f64, b: f64, q: f64) -> FsRegion {
    let dim = f64::from(n);
    if a > 0.0 {
        if b <= q * beta_fs(n, a) {
            FsRegion::RadialMinimizer
        } else {
            FsRegion::SymmetryBreaking
        }
    } else if -(dim - 2.0) < a && b < 0.0 {
        FsRegion::RadialMinimizer
    } else {
        FsRegion::NotApplicable
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn validate_examples() {
        assert!(ProblemParams::new(3, 0.0, 0.0, 5.0).validate().is_ok());
        assert_eq!(ProblemParams::new(3, -1.0, 0.0, 2.0).validate().unwrap_err().name(), "DegenerateWeight");
        assert_eq!(ProblemParams::new(2, 0.0, 0.0, 2.0).validate().unwrap_err().name(), "DimensionTooSmall");
    }

    #[test]
    fn derive_examples() {
        let d = derive(&ProblemParams::new(3, 0.0, 0.0, 5.0)).unwrap();
        assert_eq!((d.sigma, d.p_serrin, d.p_critical), (2.0, 3.0, 5.0));
        assert_eq!((d.gamma, d.lambda1, d.lambda2), (0.5, 0.0, 0.25));
        assert_eq!(d.fs_b_threshold, None);

        let d = derive(&ProblemParams::new(3, 0.0, 1.0, 7.0)).unwrap();
        assert_eq!((d.sigma, d.p_serrin, d.p_critical), (3.0, 4.0, 7.0));
        assert_eq!((d.gamma, d.lambda1), (0.5, 0.0));

        let d = derive(&ProblemParams::new(4, 0.0, 0.0, 3.0)).unwrap();
        assert_eq!((d.sigma, d.p_serrin, d.p_critical), (2.0, 2.0, 3.0));
        assert_eq!((d.gamma, d.lambda1, d.lambda2), (1.0, 0.0, 1.0));
    }

    #[test]
    fn derive_rejects_p_one() {
        let err = derive(&ProblemParams::new(3, 0.0, 0.0, 1.0)).unwrap_err();
        assert_eq!(err.name(), "InvalidExponent");
    }

    #[test]
    fn classify_examples() {
        let r = classify(&ProblemParams::new(3, 0.0, 0.0, 2.0)).unwrap();
        assert_eq!(r.regime, RegimeKind::NoPositiveSolutionSerrin);
        let r = classify(&ProblemParams::new(3, 0.0, -4.0, 2.0)).unwrap();
        assert_eq!(r.regime, RegimeKind::InadmissibleWeights);
        assert_eq!(r.witness.tag(), "N+b<=0");
        let r = classify(&ProblemParams::new(3, 0.0, 0.0, 6.0)).unwrap();
        assert_eq!(r.regime, RegimeKind::Supercritical);
        let r = classify(&ProblemParams::new(3, 0.0, 0.0, 5.0)).unwrap();
        assert_eq!(r.regime, RegimeKind::Critical);
    }

    #[test]
    fn classify_p_one_is_serrin() {
        let r = classify(&ProblemParams::new(3, 0.0, 0.0, 1.0)).unwrap();
        assert_eq!(r.regime, RegimeKind::NoPositiveSolutionSerrin);
        assert_eq!(r.witness, Witness::PEqualsOne);
        assert!(classify(&ProblemParams::new(3, 0.0, 0.0, 0.5)).is_err());
    }

    #[test]
    fn critical_tolerance_is_relative() {
        let p = 5.0 * (1.0 + 5e-13);
        let r = classify(&ProblemParams::new(3, 0.0, 0.0, p)).unwrap();
        assert_eq!(r.regime, RegimeKind::Critical);
        let r = classify(&ProblemParams::new(3, 0.0, 0.0, 5.0 + 1e-9)).unwrap();
        assert_eq!(r.regime, RegimeKind::Supercritical);
    }

    #[test]
    fn unweighted_reduction() {
        for n in 3..12u32 {
            let nn = f64::from(n);
            let params = ProblemParams::new(n, 0.0, 0.0, 2.0);
            assert_relative_eq!(params.p_critical(), (nn + 2.0) / (nn - 2.0), max_relative = 1e-15);
            assert_relative_eq!(params.p_serrin(), nn / (nn - 2.0), max_relative = 1e-15);
        }
    }

    #[test]
    fn beta_fs_vanishes_at_a_zero_n3() {
        assert_eq!(beta_fs(3, 0.0), 0.0);
    }

    #[test]
    fn fs_region_examples() {
        // a = 0.5, N = 3: q*beta_FS(0.5) with q = p_c + 1; pick b well below.
        let n = 3;
        let a = 0.5;
        let b = 0.1;
        let params = ProblemParams::new(n, a, b, 0.0);
        let params = ProblemParams { p: params.p_critical(), ..params };
        assert_eq!(fs_region(&params).unwrap(), FsRegion::RadialMinimizer);

        let params = ProblemParams::new(3, 0.5, 1.0, 0.0);
        let params = ProblemParams { p: params.p_critical(), ..params };
        assert_eq!(fs_region(&params).unwrap(), FsRegion::SymmetryBreaking);

        // a = 0, b < 0 on the balance curve.
        let params = ProblemParams::new(3, 0.0, -0.5, 0.0);
        let params = ProblemParams { p: params.p_critical(), ..params };
        assert_eq!(fs_region(&params).unwrap(), FsRegion::RadialMinimizer);

        let params = ProblemParams::new(3, 0.0, 0.0, 5.0);
        assert_eq!(fs_region(&params).unwrap(), FsRegion::NotApplicable);

        let err = fs_region(&ProblemParams::new(3, 0.0, 0.0, 4.0)).unwrap_err();
        assert_eq!(err.name(), "BalanceViolated");
    }

    #[test]
    fn derived_serializes_snake_case() {
        let d = derive(&ProblemParams::new(3, 0.0, 0.0, 5.0)).unwrap();
        let json = serde_json::to_value(d).unwrap();
        for key in ["sigma", "p_serrin", "p_critical", "gamma", "lambda1", "lambda2", "fs_b_threshold"] {
            assert!(json.get(key).is_some(), "{key}");
        }
        let r = classify(&ProblemParams::new(3, 0.0, -4.0, 2.0)).unwrap();
        let json = serde_json::to_value(r).unwrap();
        assert_eq!(json["regime"], "inadmissible_weights");
        assert_eq!(json["witness"], "N+b<=0");
    }
}
