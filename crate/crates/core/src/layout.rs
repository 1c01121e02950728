//! Straight-line coordinates for a planarization, and SVG output.
//!
//! Every segment is drawn as a polyline through two bend points. The
//! coordinates come from a barycentric (Tutte) embedding of an auxiliary
//! triangulation: segments are subdivided twice, every face gets a centre
//! vertex joined to each face corner through its own spoke vertex, and the
//! resulting pentagons are cut into triangles. Nested components are laid
//! out on their own and scaled into an empty triangle of their host face.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::Float;
use thiserror::Error;

use crate::planarization::{DartId, Host, NodeId, NodeKind, Planarization, PlanarizationError};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum LayoutError {
    #[error("barycentric layout is degenerate: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Planarization(#[from] PlanarizationError),
}

/// Coordinates of every node and the bend points of every segment.
#[derive(Clone, Debug, PartialEq)]
pub struct Layout<T> {
    pub nodes: Vec<[T; 2]>,
    /// For each segment, keyed by its lower dart: the two bend points in
    /// order from the tail of that dart.
    pub bends: BTreeMap<DartId, [[T; 2]; 2]>,
    /// Set when the barycentric layout failed and nodes sit on a circle.
    pub fallback: bool,
}

pub type Layout64 = Layout<f64>;
pub type Layout32 = Layout<f32>;

fn c<T: Float>(x: f64) -> T {
    T::from(x).expect("float conversion")
}

impl<T: Float> Layout<T> {
    /// The polyline of dart `d` from its tail to its head.
    pub fn polyline(&self, p: &Planarization, d: DartId) -> [[T; 2]; 4] {
        let t = p.twin(d);
        let tail = self.nodes[p.dart(d).node.index()];
        let head = self.nodes[p.dart(t).node.index()];
        if d < t {
            let b = self.bends[&d];
            [tail, b[0], b[1], head]
        } else {
            let b = self.bends[&t];
            [tail, b[1], b[0], head]
        }
    }
}

/// Auxiliary triangulation of one component.
struct Aux {
    n: usize,
    adj: Vec<Vec<usize>>,
    node_of: BTreeMap<NodeId, usize>,
    /// Bend vertices of each lower dart.
    bend_of: BTreeMap<DartId, [usize; 2]>,
    /// Per face: centre vertex and its spoke vertices in walk order.
    faces: Vec<(usize, Vec<usize>)>,
    face_ids: BTreeMap<usize, usize>,
}

impl Aux {
    fn add(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.n += 1;
        self.n - 1
    }

    fn link(&mut self, a: usize, b: usize) {
        self.adj[a].push(b);
        self.adj[b].push(a);
    }
}

fn build_aux(p: &Planarization, members: &[NodeId], faces: &[Vec<DartId>], face_of: &[usize]) -> Aux {
    let mut aux = Aux {
        n: 0,
        adj: Vec::new(),
        node_of: BTreeMap::new(),
        bend_of: BTreeMap::new(),
        faces: Vec::new(),
        face_ids: BTreeMap::new(),
    };
    for &v in members {
        let i = aux.add();
        aux.node_of.insert(v, i);
    }
    for &v in members {
        for d in p.darts_at(v) {
            let t = p.twin(d);
            if d > t {
                continue;
            }
            let a = aux.add();
            let b = aux.add();
            let (x, y) = (aux.node_of[&v], aux.node_of[&p.dart(t).node]);
            aux.link(x, a);
            aux.link(a, b);
            aux.link(b, y);
            aux.bend_of.insert(d, [a, b]);
        }
    }
    let mut face_list: Vec<usize> = members
        .iter()
        .flat_map(|&v| p.darts_at(v).map(|d| face_of[d.index()]).collect::<Vec<_>>())
        .collect();
    face_list.sort();
    face_list.dedup();
    for f in face_list {
        let walk: Vec<usize> = faces[f]
            .iter()
            .flat_map(|&d| {
                let t = p.twin(d);
                let tail = aux.node_of[&p.dart(d).node];
                let [a, b] = if d < t { aux.bend_of[&d] } else { let [a, b] = aux.bend_of[&t]; [b, a] };
                [tail, a, b]
            })
            .collect();
        let centre = aux.add();
        let spokes: Vec<usize> = walk.iter().map(|_| aux.add()).collect();
        let len = walk.len();
        for i in 0..len {
            let j = (i + 1) % len;
            aux.link(centre, spokes[i]);
            aux.link(spokes[i], walk[i]);
            aux.link(spokes[i], walk[j]);
            aux.link(spokes[i], spokes[j]);
        }
        aux.face_ids.insert(f, aux.faces.len());
        aux.faces.push((centre, spokes));
    }
    aux
}

/// Solves the barycentric system with the given fixed vertices by
/// conjugate gradients, one coordinate at a time.
fn barycentric<T: Float>(adj: &[Vec<usize>], fixed: &BTreeMap<usize, [T; 2]>) -> Result<Vec<[T; 2]>, LayoutError> {
    let n = adj.len();
    let free: Vec<usize> = (0..n).filter(|v| !fixed.contains_key(v)).collect();
    let mut idx = vec![usize::MAX; n];
    for (i, &v) in free.iter().enumerate() {
        idx[v] = i;
    }
    let mut out = vec![[T::zero(); 2]; n];
    for (&v, &x) in fixed {
        out[v] = x;
    }
    let m = free.len();
    let apply = |x: &[T], y: &mut [T]| {
        for (i, &v) in free.iter().enumerate() {
            let mut s = c::<T>(adj[v].len() as f64) * x[i];
            for &u in &adj[v] {
                if idx[u] != usize::MAX {
                    s = s - x[idx[u]];
                }
            }
            y[i] = s;
        }
    };
    for axis in 0..2 {
        let mut rhs = vec![T::zero(); m];
        for (i, &v) in free.iter().enumerate() {
            for &u in &adj[v] {
                if let Some(x) = fixed.get(&u) {
                    rhs[i] = rhs[i] + x[axis];
                }
            }
        }
        let mut x = vec![T::zero(); m];
        let mut r = rhs.clone();
        let mut d = r.clone();
        let mut q = vec![T::zero(); m];
        let dot = |a: &[T], b: &[T]| a.iter().zip(b).fold(T::zero(), |s, (&x, &y)| s + x * y);
        let mut rr = dot(&r, &r);
        let tol = dot(&rhs, &rhs) * c::<T>(1e-32);
        let mut iters = 0;
        while rr > tol && iters < 20 * m + 100 {
            apply(&d, &mut q);
            let dq = dot(&d, &q);
            if dq <= T::zero() || !dq.is_finite() {
                return Err(LayoutError::Degenerate("system is not positive definite".into()));
            }
            let alpha = rr / dq;
            for i in 0..m {
                x[i] = x[i] + alpha * d[i];
                r[i] = r[i] - alpha * q[i];
            }
            let rr2 = dot(&r, &r);
            let beta = rr2 / rr;
            for i in 0..m {
                d[i] = r[i] + beta * d[i];
            }
            rr = rr2;
            iters += 1;
        }
        if !rr.is_finite() {
            return Err(LayoutError::Degenerate("solver diverged".into()));
        }
        for (i, &v) in free.iter().enumerate() {
            out[v][axis] = x[i];
        }
    }
    Ok(out)
}

struct Ctx<'a> {
    p: &'a Planarization,
    comps: crate::planarization::Components,
    faces: Vec<Vec<DartId>>,
    face_of: Vec<usize>,
    /// Children of each component: (host face or `None` for a dartless host, child, inner dart).
    children: Vec<Vec<(Option<usize>, usize, Option<DartId>)>>,
}

type Placed<T> = (BTreeMap<NodeId, [T; 2]>, BTreeMap<DartId, [[T; 2]; 2]>);

fn transform<T: Float>(placed: &mut Placed<T>, centre: [T; 2], radius: T) {
    let pts: Vec<[T; 2]> = placed.0.values().copied().chain(placed.1.values().flat_map(|b| b.iter().copied())).collect();
    let (mut lo, mut hi) = ([T::infinity(); 2], [T::neg_infinity(); 2]);
    for q in &pts {
        for a in 0..2 {
            lo[a] = lo[a].min(q[a]);
            hi[a] = hi[a].max(q[a]);
        }
    }
    let mid = [(lo[0] + hi[0]) / c(2.0), (lo[1] + hi[1]) / c(2.0)];
    let half = pts
        .iter()
        .map(|q| ((q[0] - mid[0]).powi(2) + (q[1] - mid[1]).powi(2)).sqrt())
        .fold(T::zero(), T::max);
    let s = if half > T::zero() { radius / half } else { T::one() };
    let f = |q: [T; 2]| [centre[0] + (q[0] - mid[0]) * s, centre[1] + (q[1] - mid[1]) * s];
    for q in placed.0.values_mut() {
        *q = f(*q);
    }
    for b in placed.1.values_mut() {
        for q in b.iter_mut() {
            *q = f(*q);
        }
    }
}

fn incircle<T: Float>(a: [T; 2], b: [T; 2], cc: [T; 2]) -> ([T; 2], T) {
    let dist = |x: [T; 2], y: [T; 2]| ((x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2)).sqrt();
    let (la, lb, lc) = (dist(b, cc), dist(a, cc), dist(a, b));
    let per = la + lb + lc;
    let centre = [(la * a[0] + lb * b[0] + lc * cc[0]) / per, (la * a[1] + lb * b[1] + lc * cc[1]) / per];
    let area = ((b[0] - a[0]) * (cc[1] - a[1]) - (cc[0] - a[0]) * (b[1] - a[1])).abs() / c(2.0);
    (centre, c::<T>(2.0) * area / per)
}

impl Ctx<'_> {
    fn layout_comp<T: Float>(&self, comp: usize, outer: Option<DartId>) -> Result<Placed<T>, LayoutError> {
        let p = self.p;
        let members = &self.comps.members[comp];
        let mut placed: Placed<T> = (BTreeMap::new(), BTreeMap::new());
        let has_darts = members.iter().any(|&v| p.degree(v) > 0);
        if !has_darts {
            placed.0.insert(members[0], [T::zero(), T::zero()]);
            // A dartless root can host components: put them side by side.
            for (i, &(_, child, inner)) in self.children[comp].iter().enumerate() {
                let mut sub = self.layout_comp::<T>(child, inner)?;
                transform(&mut sub, [c(3.0 * (i as f64 + 1.0)), T::zero()], c(1.0));
                placed.0.extend(sub.0);
                placed.1.extend(sub.1);
            }
            return Ok(placed);
        }
        let aux = build_aux(p, members, &self.faces, &self.face_of);
        let outer_dart = outer.unwrap_or_else(|| members.iter().filter_map(|&v| p.darts_at(v).min()).min().expect("darts"));
        let outer_face = aux.face_ids[&self.face_of[outer_dart.index()]];
        let (centre, spokes) = &aux.faces[outer_face];
        let mut fixed = BTreeMap::new();
        fixed.insert(*centre, [c::<T>(0.0), c::<T>(1.0)]);
        fixed.insert(spokes[0], [c::<T>(-0.866_025_403_784_438_6), c::<T>(-0.5)]);
        fixed.insert(spokes[1], [c::<T>(0.866_025_403_784_438_6), c::<T>(-0.5)]);
        let mut pos = barycentric::<T>(&aux.adj, &fixed)?;
        for (&v, &i) in &aux.node_of {
            placed.0.insert(v, pos[i]);
        }
        for (&d, &[a, b]) in &aux.bend_of {
            placed.1.insert(d, [pos[a], pos[b]]);
        }
        // Rotations of degree-2 nodes cannot tell a mirror image apart, so
        // orient by the unbounded face, which must run clockwise.
        let mut poly = Vec::new();
        for &d in &self.faces[self.face_of[outer_dart.index()]] {
            let t = p.twin(d);
            poly.push(placed.0[&p.dart(d).node]);
            match placed.1.get(&d) {
                Some(b) => poly.extend([b[0], b[1]]),
                None => poly.extend([placed.1[&t][1], placed.1[&t][0]]),
            }
        }
        if signed_area(&poly) > T::zero() {
            let flip = |q: &mut [T; 2]| q[0] = -q[0];
            placed.0.values_mut().for_each(flip);
            placed.1.values_mut().flat_map(|b| b.iter_mut()).for_each(flip);
            for q in pos.iter_mut() {
                flip(q);
            }
        }
        // Nested components go into empty triangles around the centre of
        // their host face, skipping the unbounded one.
        let mut used: BTreeMap<usize, usize> = BTreeMap::new();
        for &(host, child, inner) in &self.children[comp] {
            let host = host.expect("host with darts");
            let fi = aux.face_ids[&host];
            let (centre, spokes) = &aux.faces[fi];
            let len = spokes.len();
            let slot = used.entry(fi).or_insert(0);
            let mut i = *slot;
            if fi == outer_face {
                i += 1;
            }
            *slot += 1;
            let i = i % len;
            let (mid, r) = incircle(pos[*centre], pos[spokes[i]], pos[spokes[(i + 1) % len]]);
            let mut sub = self.layout_comp::<T>(child, inner)?;
            // Several children in one triangle would overlap; the counter
            // wraps only for faces with more children than corners.
            let shrink = c::<T>(0.8) / c::<T>((1 + *slot / len.max(1)) as f64);
            transform(&mut sub, mid, r * shrink);
            placed.0.extend(sub.0);
            placed.1.extend(sub.1);
        }
        Ok(placed)
    }
}

/// Barycentric layout of `p`.
pub fn layout<T: Float>(p: &Planarization) -> Result<Layout<T>, LayoutError> {
    p.ensure_valid()?;
    let comps = p.components();
    let (faces, face_of) = p.faces();
    let mut q = p.clone();
    q.normalize_anchors();
    let mut children = vec![Vec::new(); comps.members.len()];
    let mut anchored = vec![false; comps.members.len()];
    for (&key, a) in q.anchors() {
        let child = comps.node_comp[key.index()];
        anchored[child] = true;
        match a.host {
            Host::Face(h) => {
                let host = comps.node_comp[p.dart(h).node.index()];
                children[host].push((Some(face_of[h.index()]), child, a.inner));
            }
            Host::Outer => {
                // Only a dartless root keeps `Outer` after normalising.
                let root = (0..comps.members.len()).find(|&c| !q.anchors().keys().any(|k| comps.node_comp[k.index()] == c));
                if let Some(r) = root {
                    children[r].push((None, child, a.inner));
                }
            }
        }
    }
    let ctx = Ctx { p, comps, faces, face_of, children };
    let mut out = Layout { nodes: vec![[T::zero(); 2]; p.node_count()], bends: BTreeMap::new(), fallback: false };
    if p.node_count() == 0 {
        return Ok(out);
    }
    let root = (0..anchored.len()).find(|&c| !anchored[c]).ok_or(PlanarizationError::AnchorCycle(NodeId(0)))?;
    let placed = ctx.layout_comp::<T>(root, None)?;
    for (v, x) in placed.0 {
        out.nodes[v.index()] = x;
    }
    out.bends = placed.1;
    if out.nodes.iter().any(|q| !q[0].is_finite() || !q[1].is_finite()) {
        return Err(LayoutError::Degenerate("non-finite coordinates".into()));
    }
    // The embedding may come out mirrored; reflect if rotations disagree.
    if let Some(v) = p.nodes().find(|&v| p.degree(v) >= 3) {
        if !rotation_matches(p, &out, v) {
            for q in out.nodes.iter_mut() {
                q[0] = -q[0];
            }
            for b in out.bends.values_mut() {
                for q in b.iter_mut() {
                    q[0] = -q[0];
                }
            }
        }
    }
    Ok(out)
}

/// Barycentric layout, or nodes on a circle with `fallback` set.
pub fn layout_or_circular<T: Float>(p: &Planarization) -> Result<(Layout<T>, Option<LayoutError>), PlanarizationError> {
    match layout::<T>(p) {
        Ok(l) => Ok((l, None)),
        Err(LayoutError::Planarization(e)) => Err(e),
        Err(e) => {
            let n = p.node_count().max(1);
            let nodes: Vec<[T; 2]> = (0..p.node_count())
                .map(|i| {
                    let a = std::f64::consts::TAU * i as f64 / n as f64;
                    [c(a.cos()), c(a.sin())]
                })
                .collect();
            let mut bends = BTreeMap::new();
            for d in p.darts().filter(|&d| d < p.twin(d)) {
                let a = nodes[p.dart(d).node.index()];
                let b = nodes[p.head(d).index()];
                let lerp = |t: f64| [a[0] + (b[0] - a[0]) * c(t), a[1] + (b[1] - a[1]) * c(t)];
                bends.insert(d, [lerp(1.0 / 3.0), lerp(2.0 / 3.0)]);
            }
            Ok((Layout { nodes, bends, fallback: true }, Some(e)))
        }
    }
}

fn angle<T: Float>(from: [T; 2], to: [T; 2]) -> T {
    (to[1] - from[1]).atan2(to[0] - from[0])
}

/// Whether the counterclockwise order of first bend points around `v`
/// equals the rotation at `v`.
fn rotation_matches<T: Float>(p: &Planarization, l: &Layout<T>, v: NodeId) -> bool {
    let rot: Vec<DartId> = p.darts_at(v).collect();
    if rot.len() < 3 {
        return true;
    }
    let mut by_angle: Vec<(T, DartId)> =
        rot.iter().map(|&d| (angle(l.nodes[v.index()], l.polyline(p, d)[1]), d)).collect();
    by_angle.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    let sorted: Vec<DartId> = by_angle.into_iter().map(|x| x.1).collect();
    let start = sorted.iter().position(|&d| d == rot[0]).expect("same darts");
    (0..rot.len()).all(|i| sorted[(start + i) % rot.len()] == rot[i])
}

fn orient<T: Float>(a: [T; 2], b: [T; 2], q: [T; 2]) -> T {
    (b[0] - a[0]) * (q[1] - a[1]) - (b[1] - a[1]) * (q[0] - a[0])
}

fn proper_cross<T: Float>(a: [T; 2], b: [T; 2], x: [T; 2], y: [T; 2]) -> bool {
    let o1 = orient(a, b, x);
    let o2 = orient(a, b, y);
    let o3 = orient(x, y, a);
    let o4 = orient(x, y, b);
    o1 * o2 < T::zero() && o3 * o4 < T::zero()
}

/// Winding number of the closed polyline `poly` around `q`.
fn winding<T: Float>(poly: &[[T; 2]], q: [T; 2]) -> i32 {
    let mut w = 0;
    for i in 0..poly.len() {
        let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
        if a[1] <= q[1] {
            if b[1] > q[1] && orient(a, b, q) > T::zero() {
                w += 1;
            }
        } else if b[1] <= q[1] && orient(a, b, q) < T::zero() {
            w -= 1;
        }
    }
    w
}

fn signed_area<T: Float>(poly: &[[T; 2]]) -> T {
    let mut a = T::zero();
    for i in 0..poly.len() {
        let (x, y) = (poly[i], poly[(i + 1) % poly.len()]);
        a = a + x[0] * y[1] - y[0] * x[1];
    }
    a / c(2.0)
}

/// Checks that the coordinates realise `p`: rotations read off the layout
/// agree with the stored ones, no two polyline pieces cross, and every
/// nested component lies inside its host face.
pub fn check_topology<T: Float>(p: &Planarization, l: &Layout<T>) -> Result<(), String> {
    for v in p.nodes() {
        if !rotation_matches(p, l, v) {
            return Err(format!("rotation at {v} differs in the layout"));
        }
    }
    let (faces, face_of) = p.faces();
    let polys: Vec<Vec<[T; 2]>> =
        faces.iter().map(|f| f.iter().flat_map(|&d| l.polyline(p, d)[..3].to_vec()).collect()).collect();
    // The unbounded face of each component is the one of least signed area;
    // tiny bounded faces can round to zero area.
    let comps = p.components();
    let mut unbounded: BTreeMap<usize, (T, usize)> = BTreeMap::new();
    for (f, walk) in faces.iter().enumerate() {
        let comp = comps.node_comp[p.dart(walk[0]).node.index()];
        let a = signed_area(&polys[f]);
        let e = unbounded.entry(comp).or_insert((a, f));
        if a < e.0 {
            *e = (a, f);
        }
    }
    let mut q = p.clone();
    q.normalize_anchors();
    for (&key, a) in q.anchors() {
        let Host::Face(h) = a.host else { continue };
        let f = face_of[h.index()];
        let comp = comps.node_comp[p.dart(h).node.index()];
        let w = winding(&polys[f], l.nodes[key.index()]);
        let inside = if unbounded[&comp].1 == f { w == 0 } else { w != 0 };
        if !inside {
            return Err(format!("component of {key} is not inside its host face"));
        }
    }
    let mut pieces: Vec<([T; 2], [T; 2])> = Vec::new();
    for d in p.darts().filter(|&d| d < p.twin(d)) {
        let pl = l.polyline(p, d);
        for w in pl.windows(2) {
            pieces.push((w[0], w[1]));
        }
    }
    for i in 0..pieces.len() {
        for j in i + 1..pieces.len() {
            let (a, b) = pieces[i];
            let (x, y) = pieces[j];
            if proper_cross(a, b, x, y) {
                return Err(format!("polyline pieces {i} and {j} cross"));
            }
        }
    }
    Ok(())
}

/// Renders the drawing: polylines for segments, filled disks for real
/// vertices and hollow disks for isolated ones. Crossings are plain
/// intersections.
pub fn render_svg(p: &Planarization, l: &Layout64) -> String {
    let pts: Vec<[f64; 2]> = l.nodes.iter().copied().chain(l.bends.values().flat_map(|b| b.iter().copied())).collect();
    let (mut lo, mut hi) = ([0.0f64; 2], [1.0f64; 2]);
    if !pts.is_empty() {
        lo = [f64::INFINITY; 2];
        hi = [f64::NEG_INFINITY; 2];
        for q in &pts {
            for a in 0..2 {
                lo[a] = lo[a].min(q[a]);
                hi[a] = hi[a].max(q[a]);
            }
        }
    }
    let size = 600.0;
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
    let margin = 20.0;
    let sx = |q: [f64; 2]| -> (f64, f64) {
        // SVG's y axis points down; flip so counterclockwise stays so.
        (margin + (q[0] - lo[0]) / span * size, margin + (hi[1] - q[1]) / span * size)
    };
    let total = size + 2.0 * margin;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{total:.0}" height="{total:.0}" viewBox="0 0 {total:.0} {total:.0}">"#
    );
    if l.fallback {
        out.push_str("<!-- circular fallback layout -->\n");
    }
    out.push_str(r#"<g fill="none" stroke="black" stroke-width="1.2" stroke-linejoin="round">"#);
    out.push('\n');
    for d in p.darts().filter(|&d| d < p.twin(d)) {
        let pl = l.polyline(p, d);
        let coords: Vec<String> = pl
            .iter()
            .map(|&q| {
                let (x, y) = sx(q);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(out, r#"<polyline data-edge="{}" points="{}"/>"#, p.edge_of(d), coords.join(" "));
    }
    out.push_str("</g>\n");
    for v in p.nodes() {
        let (x, y) = sx(l.nodes[v.index()]);
        match p.kind(v) {
            NodeKind::RealVertex => {
                let _ = writeln!(out, r#"<circle data-node="{v}" cx="{x:.3}" cy="{y:.3}" r="4" fill="black"/>"#);
            }
            NodeKind::IsolatedVertex => {
                let _ = writeln!(
                    out,
                    r#"<circle data-node="{v}" cx="{x:.3}" cy="{y:.3}" r="4" fill="white" stroke="black"/>"#
                );
            }
            NodeKind::Crossing => {}
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{catalog, generate, Family, FamilyId};

    #[test]
    fn catalog_layouts_keep_topology() {
        for e in catalog().unwrap() {
            let l = layout::<f64>(&e.drawing).unwrap();
            check_topology(&e.drawing, &l).unwrap();
        }
    }

    #[test]
    fn small_families_with_isolated_vertices() {
        for (family, k) in [(Family::Spiral, 6), (Family::Weave, 5), (Family::Star, 5)] {
            let p = generate(FamilyId { family, k }).unwrap().add_isolated_in_empty_cells().unwrap();
            let l = layout::<f64>(&p).unwrap();
            assert!(!l.fallback);
            check_topology(&p, &l).unwrap();
            let svg = render_svg(&p, &l);
            assert!(svg.starts_with("<svg"));
            assert_eq!(svg.matches("<polyline").count(), p.dart_count() / 2);
        }
    }

    #[test]
    fn single_precision_layout() {
        let p = generate(FamilyId { family: Family::Weave, k: 4 }).unwrap();
        let l = layout::<f32>(&p).unwrap();
        check_topology(&p, &l).unwrap();
    }
}
