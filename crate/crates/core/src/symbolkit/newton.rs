use super::charfn::CharFunction;

/// Convex hull of the exponent support `(m, l)`, counterclockwise, no collinear vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub vertices: Vec<(i64, i64)>,
}

impl NewtonPolygon {
    pub fn from_points(points: &[(i64, i64)]) -> Self {
        NewtonPolygon { vertices: convex_hull(points) }
    }

    /// Whether the hull is exactly the triangle `(-p,0), (q,0), (0,k)`.
    pub fn is_triangle(&self, p: i64, q: i64, k: i64) -> bool {
        let mut want = vec![(-p, 0), (q, 0), (0, k)];
        let mut have = self.vertices.clone();
        want.sort_unstable();
        have.sort_unstable();
        want == have
    }

    /// Whether every point lies in the closed triangle `(-p,0), (q,0), (0,k)`.
    pub fn inside_triangle(&self, p: i64, q: i64, k: i64) -> bool {
        self.vertices.iter().all(|&(d, e)| e >= 0 && k * d + q * e <= q * k && k * d - p * e >= -p * k)
    }
}

pub fn newton_polygon(f: &CharFunction) -> NewtonPolygon {
    let pts: Vec<(i64, i64)> = f.float().support().into_iter().map(|(m, l)| (m as i64, l as i64)).collect();
    NewtonPolygon::from_points(&pts)
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i128 {
    (a.0 - o.0) as i128 * (b.1 - o.1) as i128 - (a.1 - o.1) as i128 * (b.0 - o.0) as i128
}

/// Andrew's monotone chain.
pub fn convex_hull(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<(i64, i64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(i64, i64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}
