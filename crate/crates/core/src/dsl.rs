//! Plain-text format for drawings.
//!
//! ```text
//! kplanar-dsl 1
//! k 4
//! restrict s,m
//! real n0 label "a" : d0 d1
//! crossing n1 : d2 d3 d4 d5
//! isolated n2
//! segment d0 d2 e0
//! anchor n2 in d1
//! ```
//!
//! `real`, `crossing` and `isolated` declare nodes in order; the names after
//! the colon list the darts at the node counterclockwise. `segment a b e`
//! makes `a` and `b` twins on edge `e`. `anchor x [via d] (in d | outer)`
//! places the component of `x` in the face left of a dart (or the outer face
//! of the root component); `via` names a dart of the placed component whose
//! left face looks into that host face. Everything after `#` is a comment.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::planarization::{Anchor, DartId, Host, NodeId, NodeKind, Planarization, PlanarizationError};
use crate::styles::Restrictions;

pub const HEADER: &str = "kplanar-dsl 1";

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum DslError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("invalid drawing: {0}")]
    Validation(String),
    #[error(transparent)]
    Planarization(#[from] PlanarizationError),
}

/// A parsed file: the drawing plus the optional style header lines.
#[derive(Clone, Debug)]
pub struct Document {
    pub k: Option<u32>,
    pub restrictions: Option<Restrictions>,
    pub drawing: Planarization,
}

struct Token<'a> {
    text: std::borrow::Cow<'a, str>,
    col: usize,
    quoted: bool,
}

fn tokenize(line: &str, lineno: usize) -> Result<Vec<Token<'_>>, DslError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = line.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let col = line[..pos].chars().count() + 1;
        if c == '"' {
            let mut s = String::new();
            i += 1;
            loop {
                match chars.get(i) {
                    None => {
                        return Err(DslError::Syntax { line: lineno, col, msg: "unterminated string".into() });
                    }
                    Some(&(_, '"')) => break,
                    Some(&(_, '\\')) => {
                        match chars.get(i + 1) {
                            Some(&(_, e)) => s.push(e),
                            None => {
                                return Err(DslError::Syntax { line: lineno, col, msg: "unterminated string".into() })
                            }
                        }
                        i += 2;
                        continue;
                    }
                    Some(&(_, ch)) => s.push(ch),
                }
                i += 1;
            }
            i += 1;
            out.push(Token { text: s.into(), col, quoted: true });
            continue;
        }
        if c == ':' {
            out.push(Token { text: ":".into(), col, quoted: false });
            i += 1;
            continue;
        }
        let start = pos;
        while i < chars.len() && !chars[i].1.is_whitespace() && chars[i].1 != ':' && chars[i].1 != '#' && chars[i].1 != '"'
        {
            i += 1;
        }
        let end = chars.get(i).map_or(line.len(), |&(p, _)| p);
        out.push(Token { text: line[start..end].into(), col, quoted: false });
    }
    Ok(out)
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.')
}

struct Parser {
    node_ids: HashMap<String, u32>,
    kinds: Vec<(NodeKind, Option<String>)>,
    rotations: Vec<Vec<u32>>,
    dart_ids: HashMap<String, u32>,
    dart_pos: Vec<(usize, usize)>,
    edge_ids: HashMap<String, u32>,
    twins: Vec<(u32, u32, u32)>,
    twinned: Vec<bool>,
    anchors: Vec<(usize, usize, String, Option<(String, usize)>, Option<(String, usize)>)>,
}

impl Parser {
    fn dart(&mut self, name: &str, line: usize, col: usize) -> u32 {
        if let Some(&d) = self.dart_ids.get(name) {
            return d;
        }
        let d = self.dart_ids.len() as u32;
        self.dart_ids.insert(name.to_string(), d);
        self.dart_pos.push((line, col));
        self.twinned.push(false);
        d
    }
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> DslError {
    DslError::Syntax { line, col, msg: msg.into() }
}

pub fn parse(text: &str) -> Result<Document, DslError> {
    let mut doc_k = None;
    let mut doc_r = None;
    let mut ps = Parser {
        node_ids: HashMap::new(),
        kinds: Vec::new(),
        rotations: Vec::new(),
        dart_ids: HashMap::new(),
        dart_pos: Vec::new(),
        edge_ids: HashMap::new(),
        twins: Vec::new(),
        twinned: Vec::new(),
        anchors: Vec::new(),
    };
    let mut placed: Vec<bool> = Vec::new();
    let mut header_seen = false;
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let toks = tokenize(raw, ln)?;
        if toks.is_empty() {
            continue;
        }
        let kw = &toks[0];
        if !header_seen {
            if toks.len() == 2 && kw.text == "kplanar-dsl" {
                if toks[1].text != "1" {
                    return Err(err(ln, toks[1].col, format!("unsupported format version {}", toks[1].text)));
                }
                header_seen = true;
                continue;
            }
            return Err(err(ln, kw.col, format!("expected header `{HEADER}`")));
        }
        let want_ident = |t: &Token, what: &str| -> Result<String, DslError> {
            if t.quoted || !is_ident(&t.text) {
                Err(err(ln, t.col, format!("expected {what}, found `{}`", t.text)))
            } else {
                Ok(t.text.to_string())
            }
        };
        match kw.text.as_ref() {
            "k" => {
                let [_, v] = &toks[..] else { return Err(err(ln, kw.col, "expected `k <integer>`")) };
                let k: u32 = v.text.parse().map_err(|_| err(ln, v.col, format!("bad k `{}`", v.text)))?;
                doc_k = Some(k);
            }
            "restrict" => {
                let rest: Vec<&str> = toks[1..].iter().map(|t| t.text.as_ref()).collect();
                let joined = rest.join("");
                let r: Restrictions = joined
                    .parse()
                    .map_err(|_| err(ln, toks.get(1).map_or(kw.col, |t| t.col), format!("bad restriction set `{joined}`")))?;
                doc_r = Some(r);
            }
            "real" | "crossing" | "isolated" => {
                let kind = match kw.text.as_ref() {
                    "real" => NodeKind::RealVertex,
                    "crossing" => NodeKind::Crossing,
                    _ => NodeKind::IsolatedVertex,
                };
                let name_tok = toks.get(1).ok_or_else(|| err(ln, kw.col, "missing node name"))?;
                let name = want_ident(name_tok, "node name")?;
                if ps.node_ids.contains_key(&name) {
                    return Err(err(ln, name_tok.col, format!("node `{name}` declared twice")));
                }
                let mut j = 2;
                let mut label = None;
                if toks.get(j).is_some_and(|t| !t.quoted && t.text == "label") {
                    let l = toks.get(j + 1).filter(|t| t.quoted).ok_or_else(|| err(ln, toks[j].col, "expected quoted label"))?;
                    label = Some(l.text.to_string());
                    j += 2;
                }
                let mut rot = Vec::new();
                if let Some(t) = toks.get(j) {
                    if t.text != ":" || t.quoted {
                        return Err(err(ln, t.col, format!("expected `:`, found `{}`", t.text)));
                    }
                    for t in &toks[j + 1..] {
                        let dn = want_ident(t, "dart name")?;
                        let d = ps.dart(&dn, ln, t.col);
                        if placed.len() <= d as usize {
                            placed.resize(d as usize + 1, false);
                        }
                        if placed[d as usize] {
                            return Err(err(ln, t.col, format!("dart `{dn}` listed at two places")));
                        }
                        placed[d as usize] = true;
                        rot.push(d);
                    }
                }
                ps.node_ids.insert(name, ps.kinds.len() as u32);
                ps.kinds.push((kind, label));
                ps.rotations.push(rot);
            }
            "segment" => {
                let [_, a, b, e] = &toks[..] else { return Err(err(ln, kw.col, "expected `segment <dart> <dart> <edge>`")) };
                let an = want_ident(a, "dart name")?;
                let bn = want_ident(b, "dart name")?;
                let en = want_ident(e, "edge name")?;
                let mut ids = [0u32; 2];
                for (slot, (n, t)) in ids.iter_mut().zip([(&an, a), (&bn, b)]) {
                    let d = *ps.dart_ids.get(n.as_str()).ok_or_else(|| err(ln, t.col, format!("unknown dart `{n}`")))?;
                    if ps.twinned[d as usize] {
                        return Err(err(ln, t.col, format!("dart `{n}` is in two segments")));
                    }
                    ps.twinned[d as usize] = true;
                    *slot = d;
                }
                if ids[0] == ids[1] {
                    return Err(err(ln, b.col, format!("segment joins dart `{bn}` to itself")));
                }
                let next_e = ps.edge_ids.len() as u32;
                let eid = *ps.edge_ids.entry(en).or_insert(next_e);
                ps.twins.push((ids[0], ids[1], eid));
            }
            "anchor" => {
                let node = toks.get(1).ok_or_else(|| err(ln, kw.col, "missing node name"))?;
                let name = want_ident(node, "node name")?;
                let mut j = 2;
                let mut via = None;
                if toks.get(j).is_some_and(|t| t.text == "via") {
                    let t = toks.get(j + 1).ok_or_else(|| err(ln, toks[j].col, "expected dart after `via`"))?;
                    via = Some((want_ident(t, "dart name")?, t.col));
                    j += 2;
                }
                let host = match toks.get(j).map(|t| t.text.as_ref()) {
                    Some("outer") if toks.len() == j + 1 => None,
                    Some("in") if toks.len() == j + 2 => {
                        let t = &toks[j + 1];
                        Some((want_ident(t, "dart name")?, t.col))
                    }
                    _ => return Err(err(ln, toks.get(j).map_or(kw.col, |t| t.col), "expected `in <dart>` or `outer`")),
                };
                ps.anchors.push((ln, node.col, name, via, host));
            }
            other => return Err(err(ln, kw.col, format!("unknown statement `{other}`"))),
        }
    }
    if !header_seen {
        return Err(err(1, 1, format!("missing header `{HEADER}`")));
    }
    // Every dart must be placed at a node and belong to a segment.
    let mut by_id: Vec<(&String, u32)> = ps.dart_ids.iter().map(|(n, &d)| (n, d)).collect();
    by_id.sort_by_key(|x| x.1);
    for (name, d) in &by_id {
        let (l, c) = ps.dart_pos[*d as usize];
        if !ps.twinned[*d as usize] {
            return Err(err(l, c, format!("dangling dart `{name}` has no segment")));
        }
        if !placed.get(*d as usize).copied().unwrap_or(false) {
            return Err(err(l, c, format!("dangling dart `{name}` is not placed at any node")));
        }
    }
    let mut anchors = BTreeMap::new();
    for (ln, col, name, via, host) in &ps.anchors {
        let node = *ps.node_ids.get(name).ok_or_else(|| err(*ln, *col, format!("unknown node `{name}`")))?;
        let look = |x: &Option<(String, usize)>| -> Result<Option<DartId>, DslError> {
            match x {
                None => Ok(None),
                Some((n, c)) => ps
                    .dart_ids
                    .get(n)
                    .map(|&d| Some(DartId(d)))
                    .ok_or_else(|| err(*ln, *c, format!("unknown dart `{n}`"))),
            }
        };
        let inner = look(via)?;
        let host = match look(host)? {
            None => Host::Outer,
            Some(d) => Host::Face(d),
        };
        if anchors.insert(NodeId(node), Anchor { inner, host }).is_some() {
            return Err(err(*ln, *col, format!("node `{name}` anchored twice")));
        }
    }
    let p = Planarization::from_rotations(ps.kinds, ps.rotations, ps.twins, anchors)?;
    let report = p.validate();
    if !report.is_valid() {
        let msgs: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        return Err(DslError::Validation(msgs.join("; ")));
    }
    Ok(Document { k: doc_k, restrictions: doc_r, drawing: p })
}

/// Parses a drawing, ignoring the style header.
pub fn parse_drawing(text: &str) -> Result<Planarization, DslError> {
    parse(text).map(|d| d.drawing)
}

fn quote(s: &str) -> String {
    let mut o = String::from("\"");
    for c in s.chars() {
        if c == '"' || c == '\\' {
            o.push('\\');
        }
        o.push(c);
    }
    o.push('"');
    o
}

/// Serializes a drawing. Darts are renamed in node order following each
/// rotation, and edges by first appearance, so emitting a parsed document
/// reproduces it byte for byte.
pub fn emit(p: &Planarization, k: Option<u32>, restrictions: Option<Restrictions>) -> String {
    let mut p = p.clone();
    p.normalize_anchors();
    let mut dart_name = vec![u32::MAX; p.dart_count()];
    let mut next = 0u32;
    for n in p.nodes() {
        for d in p.darts_at(n) {
            dart_name[d.index()] = next;
            next += 1;
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, "{HEADER}");
    if let Some(k) = k {
        let _ = writeln!(out, "k {k}");
    }
    if let Some(r) = restrictions {
        let s = r.iter().map(|x| x.to_string().to_lowercase()).collect::<Vec<_>>().join(",");
        let _ = writeln!(out, "restrict {}", if s.is_empty() { "none".to_string() } else { s });
    }
    for n in p.nodes() {
        let kw = match p.kind(n) {
            NodeKind::RealVertex => "real",
            NodeKind::Crossing => "crossing",
            NodeKind::IsolatedVertex => "isolated",
        };
        let _ = write!(out, "{kw} n{}", n.0);
        if let Some(l) = &p.node(n).label {
            let _ = write!(out, " label {}", quote(l));
        }
        if p.degree(n) > 0 {
            out.push_str(" :");
            for d in p.darts_at(n) {
                let _ = write!(out, " d{}", dart_name[d.index()]);
            }
        }
        out.push('\n');
    }
    let mut order: Vec<DartId> = p.darts().collect();
    order.sort_by_key(|d| dart_name[d.index()]);
    let mut edge_name: HashMap<u32, u32> = HashMap::new();
    for d in order {
        let t = p.twin(d);
        if dart_name[t.index()] < dart_name[d.index()] {
            continue;
        }
        let ne = edge_name.len() as u32;
        let e = *edge_name.entry(p.edge_of(d).0).or_insert(ne);
        let _ = writeln!(out, "segment d{} d{} e{e}", dart_name[d.index()], dart_name[t.index()]);
    }
    for (key, a) in p.anchors() {
        let _ = write!(out, "anchor n{}", key.0);
        if let Some(d) = a.inner {
            let _ = write!(out, " via d{}", dart_name[d.index()]);
        }
        match a.host {
            Host::Outer => out.push_str(" outer\n"),
            Host::Face(d) => {
                let _ = writeln!(out, " in d{}", dart_name[d.index()]);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_only_is_empty() {
        let d = parse("kplanar-dsl 1\n").unwrap();
        assert_eq!(d.drawing.node_count(), 0);
        assert_eq!(emit(&d.drawing, None, None), "kplanar-dsl 1\n");
    }

    #[test]
    fn single_edge_round_trip() {
        let text = "kplanar-dsl 1\nk 4\nreal a label \"u\" : x\nreal b : y # other end\nsegment x y edge\n";
        let d = parse(text).unwrap();
        assert_eq!(d.k, Some(4));
        assert_eq!(d.drawing.edge_count(), 1);
        let once = emit(&d.drawing, d.k, d.restrictions);
        let twice = emit(&parse(&once).unwrap().drawing, d.k, d.restrictions);
        assert_eq!(once, twice);
    }

    #[test]
    fn dangling_dart_is_named() {
        let text = "kplanar-dsl 1\nreal a : x\nreal b : y zz\nsegment x y e\n";
        match parse(text) {
            Err(DslError::Syntax { line, msg, .. }) => {
                assert_eq!(line, 3);
                assert!(msg.contains("zz"), "{msg}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_dart_in_segment() {
        let text = "kplanar-dsl 1\nreal a : x\nreal b : y\nsegment x q e\n";
        let Err(DslError::Syntax { line: 4, col: 11, msg }) = parse(text) else { panic!() };
        assert!(msg.contains('q'));
    }
}
