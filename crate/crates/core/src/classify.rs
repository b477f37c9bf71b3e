//! Which of CHSH (per source) and bilocality (whole network) a pair of
//! sources can violate, and parameter scans over the Werner and
//! colored-noise families.
//!
//! Classification only looks at the maxima of these two inequalities, so a
//! pair flagged bilocal may still be non-bilocal under some other test.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::criteria::{self, violates};
use crate::error::{Error, Result};
use crate::qstate::{colored_noise_state, werner_state, TwoQubitState};
use crate::report::csv_num;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RegionFlags {
    pub ab_nonlocal: bool,
    pub bc_nonlocal: bool,
    pub nonbilocal: bool,
}

impl RegionFlags {
    /// Both sources CHSH-local yet the network non-bilocal; never produced
    /// by two-qubit sources.
    pub fn is_forbidden(&self) -> bool {
        !self.ab_nonlocal && !self.bc_nonlocal && self.nonbilocal
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub params: [f64; 2],
    pub s_ab: f64,
    pub s_bc: f64,
    pub b_max: f64,
    pub flags: RegionFlags,
}

impl ScanRow {
    fn new(params: [f64; 2], ab: &TwoQubitState, bc: &TwoQubitState) -> Self {
        let a = criteria::state_spectrum(ab);
        let c = criteria::state_spectrum(bc);
        let s_ab = criteria::chsh_from_spectrum(&a);
        let s_bc = criteria::chsh_from_spectrum(&c);
        let b_max = criteria::bilocality_from_spectra(&a, &c);
        let flags = RegionFlags { ab_nonlocal: violates(s_ab), bc_nonlocal: violates(s_bc), nonbilocal: violates(b_max) };
        Self { params, s_ab, s_bc, b_max, flags }
    }
}

pub fn classify_pair(rho_ab: &TwoQubitState, rho_bc: &TwoQubitState) -> RegionFlags {
    ScanRow::new([0.0; 2], rho_ab, rho_bc).flags
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanFamily {
    /// Independent Werner sources, grid over `(v_ab, v_bc)`.
    Werner,
    /// Both sources `rho(v, lambda)`, grid over `(v, lambda)`.
    Colored,
}

impl ScanFamily {
    pub fn csv_header(self) -> &'static str {
        match self {
            ScanFamily::Werner => "v_ab,v_bc,s_ab,s_bc,b_max,ab_nl,bc_nl,nonbiloc",
            ScanFamily::Colored => "v,lambda,s_ab,s_bc,b_max,ab_nl,bc_nl,nonbiloc",
        }
    }
}

impl FromStr for ScanFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "werner" => Ok(ScanFamily::Werner),
            "colored" => Ok(ScanFamily::Colored),
            other => Err(Error::Parse(format!("unknown scan family `{other}` (expected werner or colored)"))),
        }
    }
}

pub fn werner_scan(grid: &[(f64, f64)]) -> Result<Vec<ScanRow>> {
    scan(ScanFamily::Werner, grid)
}

pub fn colored_scan(grid: &[(f64, f64)]) -> Result<Vec<ScanRow>> {
    scan(ScanFamily::Colored, grid)
}

/// Evaluate every grid point; rows come back in grid order.
pub fn scan(family: ScanFamily, grid: &[(f64, f64)]) -> Result<Vec<ScanRow>> {
    grid.par_iter()
        .map(|&(p, q)| {
            let (ab, bc) = match family {
                ScanFamily::Werner => (werner_state(p)?, werner_state(q)?),
                ScanFamily::Colored => {
                    let s = colored_noise_state(p, q)?;
                    (s.clone(), s)
                }
            };
            Ok(ScanRow::new([p, q], &ab, &bc))
        })
        .collect()
}

/// Floats at 12 significant digits, booleans as `true`/`false`.
pub fn scan_csv(family: ScanFamily, rows: &[ScanRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(family.csv_header());
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            csv_num(r.params[0]),
            csv_num(r.params[1]),
            csv_num(r.s_ab),
            csv_num(r.s_bc),
            csv_num(r.b_max),
            r.flags.ab_nonlocal,
            r.flags.bc_nonlocal,
            r.flags.nonbilocal,
        );
    }
    out
}

/// One axis of a scan grid, written `start:stop:step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxis {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl GridAxis {
    /// Points `start + k step` up to `stop` inclusive, snapped to 1e-12 so
    /// that decimal steps land on their decimal values.
    pub fn values(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|k| ((self.start + k as f64 * self.step) * 1e12).round() / 1e12)
            .collect()
    }
}

impl FromStr for GridAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::Parse(format!("grid axis `{s}` is not start:stop:step"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
        let axis = GridAxis { start: num(parts[0])?, stop: num(parts[1])?, step: num(parts[2])? };
        if !(axis.step > 0.0) || !(axis.stop >= axis.start) || !axis.start.is_finite() || !axis.stop.is_finite() {
            return Err(Error::Parse(format!("grid axis `{s}` needs step > 0 and stop >= start")));
        }
        Ok(axis)
    }
}

/// Parse `axis[,axis]`; a single axis is used for both parameters.
pub fn parse_grid(s: &str) -> Result<Vec<(f64, f64)>> {
    let axes: Vec<GridAxis> = s.split(',').map(str::parse).collect::<Result<_>>()?;
    let (first, second) = match axes.as_slice() {
        [a] => (a.values(), a.values()),
        [a, b] => (a.values(), b.values()),
        _ => return Err(Error::Parse(format!("grid `{s}` must have one or two axes"))),
    };
    Ok(first.iter().flat_map(|&p| second.iter().map(move |&q| (p, q))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{bell_state, mix, BellState};

    #[test]
    fn counterexample_is_nonlocal_but_bilocal() {
        let ab = mix(&bell_state(BellState::PsiPlus), 0.6, &bell_state(BellState::PhiPlus));
        let bc = colored_noise_state(0.7, 1.0 / 3.0).unwrap();
        let flags = classify_pair(&ab, &bc);
        assert_eq!(flags, RegionFlags { ab_nonlocal: true, bc_nonlocal: true, nonbilocal: false });
    }

    #[test]
    fn werner_regions() {
        let w = |v| werner_state(v).unwrap();
        assert_eq!(
            classify_pair(&w(1.0), &w(0.0)),
            RegionFlags { ab_nonlocal: true, bc_nonlocal: false, nonbilocal: false }
        );
        assert_eq!(
            classify_pair(&w(1.0), &w(0.68)),
            RegionFlags { ab_nonlocal: true, bc_nonlocal: false, nonbilocal: true }
        );
    }

    #[test]
    fn werner_scan_rows() {
        let rows = werner_scan(&[(0.8, 0.8), (0.7, 0.7), (1.0, 0.51)]).unwrap();
        let f = |r: &ScanRow| (r.flags.ab_nonlocal, r.flags.bc_nonlocal, r.flags.nonbilocal);
        assert_eq!(f(&rows[0]), (true, true, true));
        assert!((rows[0].b_max - 1.28_f64.sqrt()).abs() < 1e-12);
        assert_eq!(f(&rows[1]), (false, false, false));
        assert!((rows[1].s_ab - 0.7 * std::f64::consts::SQRT_2).abs() < 1e-12);
        assert_eq!(f(&rows[2]), (true, false, true));
        assert!(matches!(werner_scan(&[(0.5, 1.1)]), Err(Error::ParameterOutOfRange { .. })));
    }

    #[test]
    fn boundary_is_not_a_violation() {
        let rows = werner_scan(&[(0.5, 1.0), (1.0, 0.5)]).unwrap();
        for r in rows {
            assert!(!r.flags.nonbilocal, "{r:?}");
        }
    }

    #[test]
    fn grids() {
        let g = parse_grid("0:1:0.1").unwrap();
        assert_eq!(g.len(), 121);
        assert_eq!(g[3 * 11 + 7], (0.3, 0.7));
        assert_eq!(g.last(), Some(&(1.0, 1.0)));
        let g = parse_grid("0.5:0.6:0.05,0:1:0.5").unwrap();
        assert_eq!(g, vec![(0.5, 0.0), (0.5, 0.5), (0.5, 1.0), (0.55, 0.0), (0.55, 0.5), (0.55, 1.0), (0.6, 0.0), (0.6, 0.5), (0.6, 1.0)]);
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("0:1:0.5,0:1:0.5,0:1:0.5").is_err());
        assert_eq!(GridAxis { start: 0.0, stop: 1.0, step: 0.001 }.values().len(), 1001);
    }

    #[test]
    fn csv_output() {
        let rows = werner_scan(&[(1.0, 0.5)]).unwrap();
        let csv = scan_csv(ScanFamily::Werner, &rows);
        assert_eq!(csv, "v_ab,v_bc,s_ab,s_bc,b_max,ab_nl,bc_nl,nonbiloc\n1,0.5,1.41421356237,0.707106781187,1,true,false,false\n");
        let rows = colored_scan(&[(0.7, 0.5)]).unwrap();
        assert!(scan_csv(ScanFamily::Colored, &rows).starts_with("v,lambda,"));
    }
}
