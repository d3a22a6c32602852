//! Marching squares on a [`GridField`], polyline assembly, winding numbers
//! and the oval census.

use num_complex::Complex64;
use serde::Serialize;
use std::collections::HashMap;
use std::f64::consts::TAU;

use super::field::GridField;
use super::GammaError;

#[derive(Clone, Debug, Serialize)]
pub struct Component {
    /// Polyline vertices; for closed components the first point is repeated at the end.
    pub points: Vec<(f64, f64)>,
    pub closed: bool,
    pub simple: bool,
    /// Passes within one cell of the box boundary or of the masked region.
    pub unreliable: bool,
    /// Two stretches of the polyline that are far apart along the curve come
    /// within one cell of each other, so whether they touch is not resolved.
    pub pinched: bool,
    /// Winding number about the origin (closed components only).
    pub winding: Option<i64>,
    pub length: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContourSet {
    /// Sorted by length descending, then first point.
    pub components: Vec<Component>,
    /// Open ends that stop inside the valid region (should be zero).
    pub interior_endpoints: usize,
    /// Pairs of components that come within one cell of each other.
    pub near_contacts: usize,
    pub cell: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Census {
    pub enclosing: usize,
    pub non_enclosing: usize,
    pub open_or_unreliable: usize,
    pub non_simple: usize,
    pub pinched: usize,
    pub near_contacts: usize,
}

fn edge_h(nx: usize, ix: usize, iy: usize) -> usize {
    2 * (iy * nx + ix)
}

fn edge_v(nx: usize, ix: usize, iy: usize) -> usize {
    2 * (iy * nx + ix) + 1
}

/// Traces the zero set of `field` by marching squares.
///
/// `centre` evaluates the underlying function at a cell centre and decides
/// the topology of saddle cells; when it fails the corner average is used.
pub fn trace_contours(field: &GridField, centre: impl Fn(f64, f64) -> Option<f64>) -> ContourSet {
    let nx = field.nx();
    let ny = field.ny();
    let mut points: HashMap<usize, (f64, f64)> = HashMap::new();
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    let pos = |v: f64| v >= 0.0;
    let interp = |a: (f64, f64, f64), b: (f64, f64, f64)| {
        let t = a.2 / (a.2 - b.2);
        (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1))
    };
    let cell_valid = |ix: usize, iy: usize| -> bool {
        ix + 1 < nx
            && iy + 1 < ny
            && [(ix, iy), (ix + 1, iy), (ix, iy + 1), (ix + 1, iy + 1)].iter().all(|&(a, b)| field.valid[b * nx + a])
    };
    for iy in 0..ny.saturating_sub(1) {
        for ix in 0..nx.saturating_sub(1) {
            if !cell_valid(ix, iy) {
                continue;
            }
            let c00 = (field.xs[ix], field.ys[iy], field.values[iy * nx + ix]);
            let c10 = (field.xs[ix + 1], field.ys[iy], field.values[iy * nx + ix + 1]);
            let c11 = (field.xs[ix + 1], field.ys[iy + 1], field.values[(iy + 1) * nx + ix + 1]);
            let c01 = (field.xs[ix], field.ys[iy + 1], field.values[(iy + 1) * nx + ix]);
            let bottom = edge_h(nx, ix, iy);
            let top = edge_h(nx, ix, iy + 1);
            let left = edge_v(nx, ix, iy);
            let right = edge_v(nx, ix + 1, iy);
            let mut crossing = Vec::with_capacity(4);
            if pos(c00.2) != pos(c10.2) {
                points.entry(bottom).or_insert_with(|| interp(c00, c10));
                crossing.push(bottom);
            }
            if pos(c10.2) != pos(c11.2) {
                points.entry(right).or_insert_with(|| interp(c10, c11));
                crossing.push(right);
            }
            if pos(c01.2) != pos(c11.2) {
                points.entry(top).or_insert_with(|| interp(c01, c11));
                crossing.push(top);
            }
            if pos(c00.2) != pos(c01.2) {
                points.entry(left).or_insert_with(|| interp(c00, c01));
                crossing.push(left);
            }
            let mut link = |a: usize, b: usize| {
                adj.entry(a).or_default().push(b);
                adj.entry(b).or_default().push(a);
            };
            match crossing.len() {
                2 => link(crossing[0], crossing[1]),
                4 => {
                    let mid = centre((c00.0 + c10.0) / 2.0, (c00.1 + c01.1) / 2.0)
                        .unwrap_or((c00.2 + c10.2 + c11.2 + c01.2) / 4.0);
                    if pos(mid) == pos(c00.2) {
                        // c00 and c11 joined through the centre: cut off c10 and c01.
                        link(bottom, right);
                        link(top, left);
                    } else {
                        link(left, bottom);
                        link(right, top);
                    }
                }
                _ => {}
            }
        }
    }
    let mut edges: Vec<usize> = adj.keys().copied().collect();
    edges.sort_unstable();
    let mut visited: HashMap<usize, bool> = HashMap::new();
    let mut raw: Vec<(Vec<usize>, bool)> = Vec::new();
    let walk = |start: usize, visited: &mut HashMap<usize, bool>| -> Vec<usize> {
        let mut chain = vec![start];
        visited.insert(start, true);
        let mut prev = usize::MAX;
        let mut cur = start;
        loop {
            let next = adj[&cur].iter().copied().find(|&n| n != prev && !visited.get(&n).copied().unwrap_or(false));
            match next {
                Some(n) => {
                    visited.insert(n, true);
                    chain.push(n);
                    prev = cur;
                    cur = n;
                }
                None => break,
            }
        }
        chain
    };
    for &e in &edges {
        if adj[&e].len() == 1 && !visited.get(&e).copied().unwrap_or(false) {
            raw.push((walk(e, &mut visited), false));
        }
    }
    for &e in &edges {
        if !visited.get(&e).copied().unwrap_or(false) {
            let chain = walk(e, &mut visited);
            let closed = chain.len() > 2 && adj[chain.last().unwrap()].contains(&e);
            raw.push((chain, closed));
        }
    }
    // An open end is legitimate only when the neighbouring cell across its edge is invalid.
    let mut interior_endpoints = 0;
    for (chain, closed) in &raw {
        if *closed {
            continue;
        }
        for &end in [chain.first().unwrap(), chain.last().unwrap()] {
            let id = end / 2;
            let (ix, iy) = (id % nx, id / nx);
            let (a, b) = if end % 2 == 0 {
                ((iy > 0).then(|| (ix, iy - 1)), Some((ix, iy)))
            } else {
                ((ix > 0).then(|| (ix - 1, iy)), Some((ix, iy)))
            };
            let both_valid = [a, b].iter().all(|c| c.map(|(cx, cy)| cell_valid(cx, cy)).unwrap_or(false));
            if both_valid {
                interior_endpoints += 1;
            }
        }
    }
    let cell = field.spacing();
    let mask_reach = field
        .xs
        .iter()
        .enumerate()
        .flat_map(|(ix, x)| field.ys.iter().enumerate().map(move |(iy, y)| (ix, iy, *x, *y)))
        .filter(|&(ix, iy, _, _)| !field.valid[iy * nx + ix])
        .map(|(_, _, x, y)| (x, y))
        .collect::<Vec<_>>();
    let masked = MaskIndex::new(&mask_reach, cell);
    let bbox = field.bbox;
    let mut components: Vec<Component> = raw
        .into_iter()
        .map(|(chain, closed)| {
            let mut pts: Vec<(f64, f64)> = chain.iter().map(|e| points[e]).collect();
            if closed {
                pts.push(pts[0]);
            }
            let length = pts.windows(2).map(|w| (w[1].0 - w[0].0).hypot(w[1].1 - w[0].1)).sum();
            let unreliable = pts.iter().any(|&(x, y)| {
                x - bbox.x0 < cell || bbox.x1 - x < cell || y - bbox.y0 < cell || bbox.y1 - y < cell || masked.near(x, y)
            });
            let winding = if closed { winding_number(&pts, Complex64::new(0.0, 0.0)).ok() } else { None };
            Component { simple: is_simple(&pts), pinched: is_pinched(&pts, closed, cell), points: pts, closed, unreliable, winding, length }
        })
        .collect();
    components.sort_by(|a, b| {
        b.length
            .total_cmp(&a.length)
            .then(a.points[0].0.total_cmp(&b.points[0].0))
            .then(a.points[0].1.total_cmp(&b.points[0].1))
    });
    let near_contacts = count_near_contacts(&components, cell);
    ContourSet { components, interior_endpoints, near_contacts, cell }
}

/// Spatial hash of masked nodes for "within one cell of the mask" queries.
struct MaskIndex {
    cell: f64,
    buckets: HashMap<(i64, i64), Vec<(f64, f64)>>,
}

impl MaskIndex {
    fn new(pts: &[(f64, f64)], cell: f64) -> Self {
        let mut buckets: HashMap<(i64, i64), Vec<(f64, f64)>> = HashMap::new();
        for &(x, y) in pts {
            buckets.entry(((x / cell).floor() as i64, (y / cell).floor() as i64)).or_default().push((x, y));
        }
        MaskIndex { cell, buckets }
    }

    fn near(&self, x: f64, y: f64) -> bool {
        let (bx, by) = ((x / self.cell).floor() as i64, (y / self.cell).floor() as i64);
        for dx in -2..=2 {
            for dy in -2..=2 {
                if let Some(list) = self.buckets.get(&(bx + dx, by + dy)) {
                    if list.iter().any(|&(u, v)| (u - x).hypot(v - y) <= 1.5 * self.cell) {
                        return true;
                    }
                }
            }
        }
        false
    }
}

fn count_near_contacts(components: &[Component], cell: f64) -> usize {
    let mut buckets: HashMap<(i64, i64), Vec<(usize, f64, f64)>> = HashMap::new();
    for (c, comp) in components.iter().enumerate() {
        for &(x, y) in &comp.points {
            buckets.entry(((x / cell).floor() as i64, (y / cell).floor() as i64)).or_default().push((c, x, y));
        }
    }
    let mut pairs = std::collections::BTreeSet::new();
    for (&(bx, by), list) in &buckets {
        for dx in -1..=1 {
            for dy in -1..=1 {
                let Some(other) = buckets.get(&(bx + dx, by + dy)) else { continue };
                for &(a, x, y) in list {
                    for &(b, u, v) in other {
                        if a < b && (x - u).hypot(y - v) < cell {
                            pairs.insert((a, b));
                        }
                    }
                }
            }
        }
    }
    pairs.len()
}

/// Arc separation, in cells, beyond which a close approach counts as a pinch.
const PINCH_ARC_CELLS: f64 = 8.0;

/// Whether vertices more than [`PINCH_ARC_CELLS`] apart along the polyline lie within one cell.
pub fn is_pinched(points: &[(f64, f64)], closed: bool, cell: f64) -> bool {
    let n = points.len();
    let mut arc = vec![0.0; n];
    for i in 1..n {
        arc[i] = arc[i - 1] + (points[i].0 - points[i - 1].0).hypot(points[i].1 - points[i - 1].1);
    }
    let total = arc[n.saturating_sub(1)];
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, &(x, y)) in points.iter().enumerate() {
        buckets.entry(((x / cell).floor() as i64, (y / cell).floor() as i64)).or_default().push(i);
    }
    for (&(bx, by), list) in &buckets {
        for dx in -1..=1 {
            for dy in -1..=1 {
                let Some(other) = buckets.get(&(bx + dx, by + dy)) else { continue };
                for &i in list {
                    for &j in other {
                        if j <= i {
                            continue;
                        }
                        let mut sep = arc[j] - arc[i];
                        if closed {
                            sep = sep.min(total - sep);
                        }
                        if sep > PINCH_ARC_CELLS * cell
                            && (points[i].0 - points[j].0).hypot(points[i].1 - points[j].1) < cell
                        {
                            return true;
                        }
                    }
                }
            }
        }
    }
    false
}

fn segments_cross(p1: (f64, f64), p2: (f64, f64), q1: (f64, f64), q2: (f64, f64)) -> bool {
    let orient = |a: (f64, f64), b: (f64, f64), c: (f64, f64)| (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0);
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

/// No two non-adjacent segments cross (proper intersections only).
pub fn is_simple(points: &[(f64, f64)]) -> bool {
    let n = points.len();
    if n < 4 {
        return true;
    }
    let segs = n - 1;
    let closed = points[0] == points[n - 1];
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in points {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let side = ((segs as f64).sqrt().ceil() as usize).max(1);
    let cw = ((x1 - x0) / side as f64).max(f64::MIN_POSITIVE);
    let ch = ((y1 - y0) / side as f64).max(f64::MIN_POSITIVE);
    let bucket = |x: f64, y: f64| {
        (((x - x0) / cw).floor().min(side as f64 - 1.0) as usize, ((y - y0) / ch).floor().min(side as f64 - 1.0) as usize)
    };
    let mut grid: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for s in 0..segs {
        let (a, b) = (points[s], points[s + 1]);
        let (bx0, by0) = bucket(a.0.min(b.0), a.1.min(b.1));
        let (bx1, by1) = bucket(a.0.max(b.0), a.1.max(b.1));
        for bx in bx0..=bx1 {
            for by in by0..=by1 {
                grid.entry((bx, by)).or_default().push(s);
            }
        }
    }
    for list in grid.values() {
        for (i, &s) in list.iter().enumerate() {
            for &t in &list[i + 1..] {
                let (s, t) = (s.min(t), s.max(t));
                if t == s + 1 || (closed && s == 0 && t == segs - 1) {
                    continue;
                }
                if segments_cross(points[s], points[s + 1], points[t], points[t + 1]) {
                    return false;
                }
            }
        }
    }
    true
}

/// Winding number of a closed polyline about `base`.
pub fn winding_number(points: &[(f64, f64)], base: Complex64) -> Result<i64, GammaError> {
    if points.len() < 2 || points[0] != points[points.len() - 1] {
        return Err(GammaError::InvalidInput("polyline is not closed".into()));
    }
    let mut total = 0.0;
    for w in points.windows(2) {
        let a = Complex64::new(w[0].0, w[0].1) - base;
        let b = Complex64::new(w[1].0, w[1].1) - base;
        if distance_to_segment(base, w[0], w[1]) <= 1e-12 {
            return Err(GammaError::BaseOnCurve);
        }
        total += (b / a).arg();
    }
    let turns = total / TAU;
    let rounded = turns.round();
    if (turns - rounded).abs() > 1e-6 {
        return Err(GammaError::WindingResidual(turns));
    }
    Ok(rounded as i64)
}

fn distance_to_segment(p: Complex64, a: (f64, f64), b: (f64, f64)) -> f64 {
    let a = Complex64::new(a.0, a.1);
    let b = Complex64::new(b.0, b.1);
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (p - (a + d * t)).norm()
}

pub fn oval_census(c: &ContourSet) -> Census {
    let mut out =
        Census { enclosing: 0, non_enclosing: 0, open_or_unreliable: 0, non_simple: 0, pinched: 0, near_contacts: c.near_contacts };
    for comp in &c.components {
        if !comp.closed || comp.unreliable {
            out.open_or_unreliable += 1;
        } else if !comp.simple {
            out.non_simple += 1;
        } else if comp.pinched {
            out.pinched += 1;
        } else {
            match comp.winding {
                Some(0) => out.non_enclosing += 1,
                Some(_) => out.enclosing += 1,
                None => out.open_or_unreliable += 1,
            }
        }
    }
    out
}
