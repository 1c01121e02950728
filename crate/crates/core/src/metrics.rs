//! Counted quantities of a drawing and the exact edge-count identities.
//!
//! All arithmetic here is exact over `Rational64`.

use std::collections::BTreeSet;

use num_rational::Rational64;
use serde::Serialize;
use thiserror::Error;

use crate::connectivity::components_and_cuts;
use crate::planarization::{EdgeId, Planarization, PlanarizationError};
use crate::saturation::is_filled;
use crate::styles::{Restriction, StyleSpec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountsReport {
    pub n: usize,
    pub n_real: usize,
    pub m: usize,
    pub m_p: usize,
    pub m_x: usize,
    pub cr: usize,
    pub iso: usize,
    pub c_0: usize,
    pub c_1: usize,
    pub c_2: usize,
    pub c_3: usize,
    pub c_4plus: usize,
    pub c2_prime: usize,
    pub cells: usize,
    #[serde(serialize_with = "ser_rational")]
    pub epsilon: Rational64,
}

pub(crate) fn ser_rational<S: serde::Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    #[serde(serialize_with = "ser_rational")]
    pub lhs: Rational64,
    #[serde(serialize_with = "ser_rational")]
    pub rhs: Rational64,
    pub holds: bool,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("alpha is unresolved for {0}")]
    Unresolved(StyleSpec),
    #[error("alpha needs k >= 4, got {0}")]
    BadK(u32),
    #[error(transparent)]
    Planarization(#[from] PlanarizationError),
}

fn ri(x: usize) -> Rational64 {
    Rational64::from_integer(x as i64)
}

/// `(k/2·m_x - cr) + (k-4)/2·m_p + c'_2 + c_3`. Euler's formula forces the
/// factor 1/2 on `m_p`; with 1/4 the identity fails for planar edges once
/// `k != 4`.
pub fn epsilon_of(k: u32, m_x: usize, cr: usize, m_p: usize, c2_prime: usize, c_3: usize) -> Rational64 {
    let k = Rational64::from_integer(k as i64);
    (k / 2 * ri(m_x) - ri(cr)) + (k - 4) / 2 * ri(m_p) + ri(c2_prime) + ri(c_3)
}

pub fn counts(p: &Planarization, k: u32) -> Result<CountsReport, PlanarizationError> {
    let traces = p.trace_edges()?;
    let cm = p.cells()?;
    let n = p.vertices().count();
    let iso = p.isolated_vertices().count();
    let m = traces.len();
    let uncrossed: BTreeSet<EdgeId> = traces.iter().filter(|t| t.crossing_count == 0).map(|t| t.edge).collect();
    let m_p = uncrossed.len();
    let cr = p.crossing_nodes().count();
    let mut c = [0usize; 4];
    let mut c_4plus = 0;
    let mut c2_prime = 0;
    for cell in &cm.cells {
        let i = cell.incident_vertices.len();
        if i < 4 {
            c[i] += 1;
        } else {
            c_4plus += 1;
        }
        let planar_on_boundary: BTreeSet<EdgeId> = cell
            .boundary_walks
            .iter()
            .flatten()
            .map(|&d| p.edge_of(d))
            .filter(|e| uncrossed.contains(e))
            .collect();
        if planar_on_boundary.len() == 2 {
            c2_prime += 1;
        }
    }
    let m_x = m - m_p;
    Ok(CountsReport {
        n,
        n_real: n - iso,
        m,
        m_p,
        m_x,
        cr,
        iso,
        c_0: c[0],
        c_1: c[1],
        c_2: c[2],
        c_3: c[3],
        c_4plus,
        c2_prime,
        cells: cm.cells.len(),
        epsilon: epsilon_of(k, m_x, cr, m_p, c2_prime, c[3]),
    })
}

fn require_counting_regime(p: &Planarization, need_three: bool) -> Result<(), MetricsError> {
    let conn = components_and_cuts(p)?;
    if !conn.essentially_2_connected {
        return Err(MetricsError::NotApplicable("drawing is not essentially 2-connected".into()));
    }
    if !is_filled(p)?.filled {
        return Err(MetricsError::NotApplicable("drawing is not filled".into()));
    }
    if need_three && p.vertices().count() < 3 {
        return Err(MetricsError::NotApplicable("fewer than three vertices".into()));
    }
    Ok(())
}

/// Counts vertex-cell incidences along angles: `iso + 2m = c_1 + 2c_2 + 3c_3`.
pub fn verify_angle_identity(p: &Planarization) -> Result<bool, MetricsError> {
    require_counting_regime(p, false)?;
    let c = counts(p, 4)?;
    Ok(c.iso + 2 * c.m == c.c_1 + 2 * c.c_2 + 3 * c.c_3 && c.c_4plus == 0)
}

/// Counts along both sides of the uncrossed edges: `2m_p = c_2 + c'_2 + 3c_3`.
pub fn verify_planar_side_identity(p: &Planarization) -> Result<bool, MetricsError> {
    require_counting_regime(p, true)?;
    let c = counts(p, 4)?;
    Ok(2 * c.m_p == c.c_2 + c.c2_prime + 3 * c.c_3)
}

/// Euler's formula on the planarization: `V - E + F = 1 + #components`.
pub fn verify_euler(p: &Planarization) -> Result<bool, PlanarizationError> {
    let cm = p.cells()?;
    let v = p.node_count() as i64;
    let e = (p.dart_count() / 2) as i64;
    let f = cm.cells.len() as i64;
    let comps = p.components().members.len() as i64;
    Ok(v - e + f == 1 + comps)
}

/// `m = 2/(k-2) · (n + c_0 - 2 + ε)` for filled, essentially 2-connected
/// drawings on at least three vertices.
pub fn verify_edge_count_identity(p: &Planarization, k: u32) -> Result<IdentityReport, MetricsError> {
    if k <= 2 {
        return Err(MetricsError::PreconditionFailed(format!("k > 2 required, got {k}")));
    }
    let conn = components_and_cuts(p)?;
    if !conn.essentially_2_connected {
        return Err(MetricsError::PreconditionFailed("connectivity: not essentially 2-connected".into()));
    }
    if !is_filled(p)?.filled {
        return Err(MetricsError::PreconditionFailed("filled: drawing is not filled".into()));
    }
    let c = counts(p, k)?;
    if c.n < 3 {
        return Err(MetricsError::PreconditionFailed(format!("n >= 3 required, got {}", c.n)));
    }
    let lhs = ri(c.m);
    let rhs = Rational64::new(2, k as i64 - 2) * (ri(c.n) + ri(c.c_0) - ri(2) + c.epsilon);
    Ok(IdentityReport { lhs, rhs, holds: lhs == rhs })
}

/// The extremal density coefficient of a drawing style.
pub fn alpha(s: &StyleSpec) -> Result<Rational64, MetricsError> {
    let k = s.k as i64;
    if s.k < 4 {
        return Err(MetricsError::BadK(s.k));
    }
    let x = s.restrictions;
    let has = |r| x.contains(r);
    let (sr, ir, mr, hr) = (has(Restriction::S), has(Restriction::I), has(Restriction::M), has(Restriction::H));
    let r = |a: i64, b: i64| Rational64::new(a, b);
    let star = r(2 * (k - 1), (k - 1) * (k - 2) + 2);
    let cycle = r(2 * (k + 1), k * (k - 1));
    let value = match (sr, ir, mr, hr) {
        (false, _, false, false) => r(2, k - k % 2),
        (true, _, false, false) => r(2, k - 1),
        (false, false, true, false) => star,
        (true, false, true, false) => cycle,
        (false, true, true, false) => {
            if k == 4 {
                r(4, 5)
            } else {
                star
            }
        }
        (true, true, true, _) => {
            if k >= 7 {
                cycle
            } else {
                return Err(MetricsError::Unresolved(*s));
            }
        }
        _ => return Err(MetricsError::Unresolved(*s)),
    };
    Ok(value)
}

/// `m >= α · (n + c_0 - 1)` for filled drawings in the style.
pub fn verify_density_bound(p: &Planarization, s: &StyleSpec) -> Result<bool, MetricsError> {
    let a = alpha(s)?;
    let c = counts(p, s.k)?;
    Ok(ri(c.m) >= a * (ri(c.n) + ri(c.c_0) - ri(1)))
}
