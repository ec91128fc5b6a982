//! Radial solutions of the weighted Lane-Emden equation
//! `div(|x|^a Du) + |x|^b u^p = 0` in `R^N`.
//!
//! Modules, roughly bottom-up:
//! - [`params`]: exponents, critical and Serrin thresholds, regime classification
//! - [`closed_forms`]: the explicit bubble and singular solutions
//! - [`shooter`]: shooting from the origin and the existence threshold search
//! - [`emden_fowler`]: the autonomous system on the cylinder `t = ln r`
//! - [`pohozaev`]: the integral identity on balls
//! - [`ckn`]: weighted Sobolev energies and best constants

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ckn;
pub mod closed_forms;
pub mod emden_fowler;
pub mod error;
pub mod io;
pub mod ode;
pub mod params;
pub mod pohozaev;
pub mod quadrature;
pub mod shooter;

pub use error::{Error, Result};
pub use params::{classify, derive, DerivedExponents, FsRegion, ProblemParams, Regime, RegimeKind, Witness};
pub use shooter::{shoot, threshold_bisect, RadialNode, RadialTrajectory, ShootConfig, ShotOutcome};
