//! Caffarelli-Kohn-Nirenberg energies of radial profiles.
//!
//! `E(u) = int |x|^a |Du|^2 / (int |x|^b |u|^q)^(2/q)`, evaluated for radial
//! `u` as one-dimensional integrals in `s = ln r`, where power weights turn
//! into exponentials and both ends of the half-line become exponentially
//! decaying tails.

use serde::{Deserialize, Serialize};
use statrs::function::beta::ln_beta;

use crate::closed_forms::BubbleProfile;
use crate::error::{Error, Result};
use crate::params::{fs_region_unchecked, FsRegion, ProblemParams, BALANCE_TOL};
use crate::pohozaev::sphere_area;
use crate::quadrature::GaussLegendre;

/// Truncation target: the fitted tail beyond the cut must be below this
/// fraction of the accumulated integral.
pub const TAIL_REL_TOL: f64 = 1e-10;

const PANEL_WIDTH: f64 = 0.25;
const PANEL_POINTS: usize = 20;
const LOG_RADIUS_LIMIT: f64 = 300.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CknTriple {
    #[serde(rename = "N")]
    pub n: u32,
    pub a: f64,
    pub b: f64,
    pub q: f64,
}

impl CknTriple {
    pub const fn new(n: u32, a: f64, b: f64, q: f64) -> Self {
        Self { n, a, b, q }
    }

    /// Problem parameters of the Euler-Lagrange equation, `p = q - 1`.
    pub fn problem(&self) -> ProblemParams {
        ProblemParams::new(self.n, self.a, self.b, self.q - 1.0)
    }

    fn dim(&self) -> f64 {
        f64::from(self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BalanceVerdict {
    Admissible,
    BandViolated,
    BalanceViolated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BalanceCheck {
    pub verdict: BalanceVerdict,
    /// `q > 2`, `b > a - 2 > -N` and the balance: the necessary conditions
    /// for a finite energy solution.
    pub finite_energy_necessary: bool,
}

/// Checks `(N+b)/q + 1 = (N+a)/2` first, then the band `a - 2 <= 2b/q <= a`.
pub fn check_balance(triple: &CknTriple) -> Result<BalanceCheck> {
    if triple.n < 3 {
        return Err(Error::DimensionTooSmall(triple.n));
    }
    if !(triple.q >= 2.0) {
        return Err(Error::InvalidExponent(triple.q - 1.0));
    }
    let balance = ((triple.dim() + triple.b) / triple.q + 1.0 - (triple.dim() + triple.a) / 2.0).abs() <= BALANCE_TOL;
    let ratio = 2.0 * triple.b / triple.q;
    let band = triple.a - 2.0 <= ratio + BALANCE_TOL && ratio <= triple.a + BALANCE_TOL;
    let verdict = if !balance {
        BalanceVerdict::BalanceViolated
    } else if !band {
        BalanceVerdict::BandViolated
    } else {
        BalanceVerdict::Admissible
    };
    let finite_energy_necessary =
        balance && triple.q > 2.0 && triple.b > triple.a - 2.0 && triple.a - 2.0 > -triple.dim();
    Ok(BalanceCheck { verdict, finite_energy_necessary })
}

/// A radial function returning `(u(r), u'(r))` for `r > 0`.
pub trait RadialProfile {
    fn eval(&self, r: f64) -> (f64, f64);
}

impl<F: Fn(f64) -> (f64, f64)> RadialProfile for F {
    fn eval(&self, r: f64) -> (f64, f64) {
        self(r)
    }
}

impl RadialProfile for BubbleProfile {
    fn eval(&self, r: f64) -> (f64, f64) {
        BubbleProfile::eval(self, r).unwrap_or((f64::NAN, f64::NAN))
    }
}

/// `c * profile`.
#[derive(Debug, Clone, Copy)]
pub struct Scaled<P>(pub f64, pub P);

impl<P: RadialProfile> RadialProfile for Scaled<P> {
    fn eval(&self, r: f64) -> (f64, f64) {
        let (v, dv) = self.1.eval(r);
        (self.0 * v, self.0 * dv)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    /// `omega_{N-1} int_0^inf r^(N-1+a) u'^2 dr`.
    pub grad_norm_sq: f64,
    /// `(omega_{N-1} int_0^inf r^(N-1+b) |u|^q dr)^(1/q)`.
    pub q_norm: f64,
    pub rayleigh: f64,
    /// Beta-function value of the Rayleigh quotient of the bubble.
    pub closed_form: Option<f64>,
    pub s_estimate: f64,
}

/// `int_{-inf}^{inf} exp(g(s)) ds` where `g` is the log of the integrand;
/// panels are added outwards from `s = 0` until the exponential tail fitted
/// to the last panel is below [`TAIL_REL_TOL`] of the running total.
fn integrate_log_line<G: Fn(f64) -> f64>(log_integrand: G, what: &str) -> Result<f64> {
    let rule = GaussLegendre::new(PANEL_POINTS);
    let f = |s: f64| {
        let g = log_integrand(s);
        if g == f64::NEG_INFINITY {
            0.0
        } else {
            g.exp()
        }
    };
    let mut total = 0.0;
    for dir in [1.0, -1.0] {
        let mut s = 0.0;
        loop {
            let next = s + dir * PANEL_WIDTH;
            let piece = rule.integrate(s.min(next), s.max(next), f);
            if !piece.is_finite() {
                return Err(Error::NonintegrableProfile(format!("{what}: non-finite integrand near ln r = {s}")));
            }
            total += piece;
            s = next;
            let g_end = log_integrand(s);
            if g_end == f64::NEG_INFINITY {
                break;
            }
            let g_prev = log_integrand(s - dir * PANEL_WIDTH);
            let rate = (g_prev - g_end) / PANEL_WIDTH;
            if rate > 0.0 && g_end.exp() / rate <= TAIL_REL_TOL * total {
                break;
            }
            if s.abs() > LOG_RADIUS_LIMIT {
                return Err(Error::NonintegrableProfile(format!(
                    "{what}: integrand does not decay as ln r -> {}",
                    if dir > 0.0 { "+inf" } else { "-inf" }
                )));
            }
        }
    }
    Ok(total)
}

fn ln_abs(x: f64) -> f64 {
    if x == 0.0 {
        f64::NEG_INFINITY
    } else {
        x.abs().ln()
    }
}

/// Rayleigh quotient of a radial profile.
pub fn energy<P: RadialProfile + ?Sized>(triple: &CknTriple, profile: &P) -> Result<EnergyReport> {
    if triple.n < 3 {
        return Err(Error::DimensionTooSmall(triple.n));
    }
    let dim = triple.dim();
    let grad = integrate_log_line(
        |s| {
            let (_, dv) = profile.eval(s.exp());
            (dim + triple.a) * s + 2.0 * ln_abs(dv)
        },
        "gradient norm",
    )?;
    let mass = integrate_log_line(
        |s| {
            let (v, _) = profile.eval(s.exp());
            (dim + triple.b) * s + triple.q * ln_abs(v)
        },
        "weighted q-norm",
    )?;
    let omega = sphere_area(triple.n);
    let grad_norm_sq = omega * grad;
    let q_norm = (omega * mass).powf(1.0 / triple.q);
    if !(q_norm > 0.0) {
        return Err(Error::NonintegrableProfile("profile vanishes identically".into()));
    }
    let rayleigh = grad_norm_sq / (q_norm * q_norm);
    Ok(EnergyReport { grad_norm_sq, q_norm, rayleigh, closed_form: None, s_estimate: rayleigh })
}

/// `E(h)` for `h = (1 + r^sigma)^(-m)`: with `t = r^sigma` both integrals are
/// Beta functions,
/// `int r^(N-1+a) h'^2 = m^2 sigma B(m+2, m)` and
/// `int r^(N-1+b) h^q = B(qm/2, qm/2) / sigma` on the balance manifold.
pub fn bubble_rayleigh_closed_form(triple: &CknTriple) -> f64 {
    let sigma = 2.0 + triple.b - triple.a;
    let m = (triple.dim() - 2.0 + triple.a) / sigma;
    let q = triple.q;
    let omega = sphere_area(triple.n);
    let ln_grad = 2.0 * m.ln() + sigma.ln() + ln_beta(m + 2.0, m);
    let ln_mass = ln_beta(0.5 * q * m, 0.5 * q * m) - sigma.ln();
    (omega.ln() * (1.0 - 2.0 / q) + ln_grad - 2.0 / q * ln_mass).exp()
}

/// Best constant in the radial-minimizer region: the energy of the bubble.
pub fn best_constant(triple: &CknTriple) -> Result<EnergyReport> {
    let check = check_balance(triple)?;
    match check.verdict {
        BalanceVerdict::Admissible => {}
        BalanceVerdict::BalanceViolated => {
            let rhs = (triple.dim() + triple.a) / 2.0;
            return Err(Error::BalanceViolated { lhs: (triple.dim() + triple.b) / triple.q + 1.0, rhs });
        }
        BalanceVerdict::BandViolated => return Err(Error::BandViolated(2.0 * triple.b / triple.q)),
    }
    if fs_region(triple) == FsRegion::SymmetryBreaking {
        let threshold = triple.q * crate::params::beta_fs(triple.n, triple.a);
        return Err(Error::SymmetryBreakingRegion { b: triple.b, threshold });
    }
    let params = triple.problem();
    let params = ProblemParams { p: params.p_critical(), ..params };
    let bubble = BubbleProfile::new(&params, 1.0)?;
    let mut report = energy(triple, &bubble)?;
    report.closed_form = Some(bubble_rayleigh_closed_form(triple));
    Ok(report)
}

/// Radial-minimizer flag for a triple assumed to be on the balance manifold.
pub fn fs_region(triple: &CknTriple) -> FsRegion {
    fs_region_unchecked(triple.n, triple.a, triple.b, triple.q)
}

/// One row of the `(a, b)` sweep: `a,b,q,s_estimate,fs_flag`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub a: f64,
    pub b: f64,
    pub q: f64,
    pub s_estimate: Option<f64>,
    pub fs_flag: FsRegion,
}

impl SweepRow {
    pub const CSV_HEADER: &'static str = "a,b,q,s_estimate,fs_flag";

    /// Evaluates the balance-manifold exponent `q = 2(N+b)/(N-2+a)` at `(a, b)`.
    pub fn compute(n: u32, a: f64, b: f64) -> Self {
        let q = 2.0 * (f64::from(n) + b) / (f64::from(n) - 2.0 + a);
        let triple = CknTriple::new(n, a, b, q);
        let fs_flag = fs_region(&triple);
        let s_estimate = best_constant(&triple).ok().map(|r| r.s_estimate);
        Self { a, b, q, s_estimate, fs_flag }
    }

    pub fn csv_row(&self) -> String {
        let s = self.s_estimate.map_or_else(|| "nan".to_string(), |s| format!("{s:.16e}"));
        let flag = match self.fs_flag {
            FsRegion::RadialMinimizer => "radial_minimizer",
            FsRegion::SymmetryBreaking => "symmetry_breaking",
            FsRegion::NotApplicable => "not_applicable",
        };
        format!("{:.16e},{:.16e},{:.16e},{s},{flag}", self.a, self.b, self.q)
    }
}
