//! CSV encodings of trajectories. Floats are written with 17 significant
//! digits so that parsing a written file reproduces the nodes exactly.

use std::fmt::Write as _;

use crate::emden_fowler::CylinderTrajectory;
use crate::error::{Error, Result};
use crate::shooter::RadialNode;

pub const TRAJECTORY_HEADER: &str = "r,v,dv";
pub const CYLINDER_HEADER: &str = "t,w,dw";

pub fn trajectory_csv(nodes: &[RadialNode]) -> String {
    let mut out = String::with_capacity(64 * (nodes.len() + 1));
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for n in nodes {
        let _ = writeln!(out, "{:.16e},{:.16e},{:.16e}", n.r, n.v, n.dv);
    }
    out
}

pub fn cylinder_csv(traj: &CylinderTrajectory) -> String {
    let mut out = String::with_capacity(64 * (traj.nodes.len() + 1));
    out.push_str(CYLINDER_HEADER);
    out.push('\n');
    for n in &traj.nodes {
        let _ = writeln!(out, "{:.16e},{:.16e},{:.16e}", n.t, n.w, n.dw);
    }
    out
}

/// Parses `r,v,dv` rows; the header line is required.
pub fn parse_trajectory_csv(text: &str) -> Result<Vec<RadialNode>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == TRAJECTORY_HEADER => {}
        other => {
            return Err(Error::Parse(format!(
                "expected header `{TRAJECTORY_HEADER}`, found {:?}",
                other.map(|(_, l)| l)
            )))
        }
    }
    lines
        .map(|(i, line)| {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(Error::Parse(format!("line {}: expected 3 fields, found {}", i + 1, fields.len())));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|e| Error::Parse(format!("line {}: {e}: {s:?}", i + 1)));
            Ok(RadialNode { r: num(fields[0])?, v: num(fields[1])?, dv: num(fields[2])? })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trajectory_round_trip_is_exact() {
        let nodes: Vec<RadialNode> = (1..50)
            .map(|i| {
                let r = 0.1 * f64::from(i) + 1.0 / 3.0;
                RadialNode { r, v: (-r).exp() / 7.0, dv: -(-r).exp() / 7.0 }
            })
            .collect();
        let parsed = parse_trajectory_csv(&trajectory_csv(&nodes)).unwrap();
        assert_eq!(parsed, nodes);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_trajectory_csv("x,y\n1,2").unwrap_err().name(), "Parse");
        assert_eq!(parse_trajectory_csv("r,v,dv\n1,2").unwrap_err().name(), "Parse");
        assert_eq!(parse_trajectory_csv("r,v,dv\n1,2,abc").unwrap_err().name(), "Parse");
    }
}
