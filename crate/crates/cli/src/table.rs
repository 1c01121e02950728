//! The table of extremal densities, with every cell re-verified.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use kplanar::families::{generate, Family, FamilyId};
use kplanar::metrics::{alpha, verify_edge_count_identity, MetricsError};
use kplanar::{check_saturated, check_style, counts, is_tight, Planarization, Restriction, Restrictions, StyleSpec};
use num_rational::Rational64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail(String),
    /// No extremal value is known for this style and k.
    Open,
}

#[derive(Clone, Debug)]
pub struct Row {
    pub style: StyleSpec,
    pub family: Option<Family>,
    /// Exact coefficient, e.g. `5/6`.
    pub alpha: Option<String>,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub status: Status,
}

/// Restriction sets listed in the table, in display order.
pub fn styles() -> Vec<Restrictions> {
    use Restriction::*;
    vec![
        Restrictions::NONE,
        Restrictions::new(&[I]),
        Restrictions::new(&[S]),
        Restrictions::new(&[S, I]),
        Restrictions::new(&[M]),
        Restrictions::new(&[S, M]),
        Restrictions::new(&[I, M]),
        Restrictions::new(&[S, I, M]),
        Restrictions::new(&[S, I, M, H]),
    ]
}

/// Runs generate, style, tightness, saturation, the edge-count identity
/// and `m = α(n-1)` on the instance for `s`.
pub fn verify_cell(s: StyleSpec) -> Row {
    verify_cell_with(s, &mut |id| generate(id).map_err(|e| e.to_string()))
}

/// Like [`verify_cell`], taking instances from `get`.
pub fn verify_cell_with(s: StyleSpec, get: &mut dyn FnMut(FamilyId) -> Result<Planarization, String>) -> Row {
    let mut row = Row { style: s, family: None, alpha: None, m: None, n: None, status: Status::Open };
    let a = match alpha(&s) {
        Ok(a) => a,
        Err(MetricsError::Unresolved(_)) => return row,
        Err(e) => {
            row.status = Status::Fail(e.to_string());
            return row;
        }
    };
    row.alpha = Some(a.to_string());
    let Some(id) = Family::for_style(&s) else {
        row.status = Status::Fail("no family provides this style".into());
        return row;
    };
    row.family = Some(id.family);
    row.status = match get(id).and_then(|p| check_instance(&mut row, s, a, &p)) {
        Ok(()) => Status::Pass,
        Err(msg) => Status::Fail(msg),
    };
    row
}

fn check_instance(row: &mut Row, s: StyleSpec, a: Rational64, p: &Planarization) -> Result<(), String> {
    p.ensure_valid().map_err(|e| e.to_string())?;
    let c = counts(p, s.k).map_err(|e| e.to_string())?;
    row.m = Some(c.m);
    row.n = Some(c.n);
    if !check_style(p, &s).map_err(|e| e.to_string())?.in_style {
        return Err("not in style".into());
    }
    if !is_tight(p, s.k).map_err(|e| e.to_string())? {
        return Err("not tight".into());
    }
    if !check_saturated(p, &s).map_err(|e| e.to_string())?.is_saturated() {
        return Err("not saturated".into());
    }
    if !verify_edge_count_identity(p, s.k).map_err(|e| e.to_string())?.holds {
        return Err("edge-count identity fails".into());
    }
    let m = Rational64::from_integer(c.m as i64);
    let rhs = a * Rational64::from_integer(c.n as i64 - 1);
    if m != rhs {
        return Err(format!("m = {m} but α(n-1) = {rhs}"));
    }
    Ok(())
}

/// All table cells for the given range of k.
pub fn rows(ks: RangeInclusive<u32>) -> Vec<Row> {
    rows_with(ks, &mut |id| generate(id).map_err(|e| e.to_string()))
}

pub fn rows_with(ks: RangeInclusive<u32>, get: &mut dyn FnMut(FamilyId) -> Result<Planarization, String>) -> Vec<Row> {
    let mut out = Vec::new();
    for r in styles() {
        for k in ks.clone() {
            out.push(verify_cell_with(StyleSpec::new(k, r), get));
        }
    }
    out
}

pub fn format(rows: &[Row]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<10} {:>3} {:<13} {:>8} {:>4} {:>4}  status", "style", "k", "family", "alpha", "m", "n");
    for r in rows {
        let opt = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
        let status = match &r.status {
            Status::Pass => "PASS".to_string(),
            Status::Fail(why) => format!("FAIL ({why})"),
            Status::Open => "OPEN".to_string(),
        };
        let _ = writeln!(
            s,
            "{:<10} {:>3} {:<13} {:>8} {:>4} {:>4}  {}",
            r.style.restrictions.to_string(),
            r.style.k,
            r.family.map_or("-", |f| f.name()),
            r.alpha.as_deref().unwrap_or("-"),
            opt(r.m),
            opt(r.n),
            status
        );
    }
    s
}
