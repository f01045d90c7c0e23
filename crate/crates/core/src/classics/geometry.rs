use std::cmp::Ordering;
use std::f64::consts::PI;

/// Angle differences below this are reported as zero.
pub const ANGLE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("sides {0}, {1}, {2} do not form a triangle")]
    Degenerate(f64, f64, f64),
    #[error("need at least two points, got {0}")]
    TooFewPoints(usize),
    #[error("point {0} appears twice")]
    DuplicatePoint(Point),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Triangle {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Triangle {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Triangle, GeometryError> {
        let ok = [a, b, c].iter().all(|s| s.is_finite() && *s > 0.0) && a + b > c && b + c > a && a + c > b;
        if ok {
            Ok(Triangle { a, b, c })
        } else {
            Err(GeometryError::Degenerate(a, b, c))
        }
    }

    /// Angles opposite `a`, `b`, `c` by the law of cosines.
    pub fn angles(&self) -> (f64, f64, f64) {
        let (a, b, c) = (self.a, self.b, self.c);
        let angle = |opp: f64, x: f64, y: f64| ((x * x + y * y - opp * opp) / (2.0 * x * y)).clamp(-1.0, 1.0).acos();
        (angle(a, b, c), angle(b, a, c), angle(c, a, b))
    }
}

fn sign(x: f64, tolerance: f64) -> Ordering {
    if x.abs() <= tolerance {
        Ordering::Equal
    } else if x > 0.0 {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// Signs of `a² + b² - c²` and of `α + β - γ`. The first is computed
/// directly; the second from the angles, with differences within
/// [`ANGLE_TOLERANCE`] counted as zero.
pub fn pythagoras_signs(t: &Triangle) -> (Ordering, Ordering) {
    let side = t.a * t.a + t.b * t.b - t.c * t.c;
    let (alpha, beta, gamma) = t.angles();
    (sign(side, 0.0), sign(alpha + beta - gamma, ANGLE_TOLERANCE))
}

/// `α + β - γ`, which equals `π - 2γ`.
pub fn angle_excess(t: &Triangle) -> f64 {
    PI - 2.0 * t.angles().2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub fn new(x: i64, y: i64) -> Point {
        Point { x, y }
    }
}

impl std::fmt::Display for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Twice the signed area of `pqr`; zero iff the points are collinear.
pub fn cross(p: Point, q: Point, r: Point) -> i128 {
    let (ux, uy) = (q.x as i128 - p.x as i128, q.y as i128 - p.y as i128);
    let (vx, vy) = (r.x as i128 - p.x as i128, r.y as i128 - p.y as i128);
    ux * vy - uy * vx
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SylvesterLine {
    Collinear,
    /// The line through these two points contains no other point of the set.
    Ordinary(Point, Point),
}

/// Either all points are collinear, or some line passes through exactly two
/// of them. Pairs are tried in input order.
pub fn sylvester_line(points: &[Point]) -> Result<SylvesterLine, GeometryError> {
    if points.len() < 2 {
        return Err(GeometryError::TooFewPoints(points.len()));
    }
    let mut sorted = points.to_vec();
    sorted.sort();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(GeometryError::DuplicatePoint(w[0]));
    }
    let (p0, p1) = (points[0], points[1]);
    if points.iter().all(|&r| cross(p0, p1, r) == 0) {
        return Ok(SylvesterLine::Collinear);
    }
    for (i, &p) in points.iter().enumerate() {
        for &q in &points[i + 1..] {
            if points.iter().filter(|&&r| cross(p, q, r) == 0).count() == 2 {
                return Ok(SylvesterLine::Ordinary(p, q));
            }
        }
    }
    unreachable!("a finite non-collinear set always has an ordinary line")
}

/// Parse points as `x<TAB>y` (or comma/space separated) lines.
pub fn parse_points(text: &str) -> Result<Vec<Point>, String> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            let nums: Vec<&str> = l.split(['\t', ',', ' ']).filter(|s| !s.is_empty()).collect();
            match nums[..] {
                [x, y] => match (x.parse(), y.parse()) {
                    (Ok(x), Ok(y)) => Ok(Point { x, y }),
                    _ => Err(format!("line {}: coordinates must be integers", i + 1)),
                },
                _ => Err(format!("line {}: expected two coordinates", i + 1)),
            }
        })
        .collect()
}
