//! Planar predicates and the affine maps of a linear triangle.
//!
//! Conventions: a positive signed area means the vertices run
//! counterclockwise. The in-circle determinant is always evaluated on the
//! clockwise ordering of the triangle, so a negative value means the query
//! point lies strictly inside the circumcircle.

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

/// A point (or vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the cross product of two planar vectors.
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn midpoint(self, other: Point2) -> Point2 {
        Point2::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, rhs: f64) -> Point2 {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

/// Half the determinant `[[x2-x1, x3-x1], [y2-y1, y3-y1]]`.
pub fn signed_area(p1: Point2, p2: Point2, p3: Point2) -> f64 {
    0.5 * (p2 - p1).cross(p3 - p1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Clockwise,
    Counterclockwise,
    Degenerate,
}

/// Area coordinates of a point with respect to a triangle.
///
/// Only `l1` and `l2` are stored; `l3` is always `1 - l1 - l2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaCoords {
    pub l1: f64,
    pub l2: f64,
}

impl AreaCoords {
    pub fn new(l1: f64, l2: f64) -> Self {
        Self { l1, l2 }
    }

    pub fn l3(&self) -> f64 {
        1.0 - self.l1 - self.l2
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.l1, self.l2, self.l3()]
    }
}

/// A triangle together with its signed area and the coefficients
/// `a_k, b_k, c_k` of `L_k = (a_k x + b_k y + c_k) / (2 Δ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleGeom {
    pub vertices: [Point2; 3],
    pub signed_area: f64,
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub c: [f64; 3],
}

impl TriangleGeom {
    pub fn new(p1: Point2, p2: Point2, p3: Point2) -> Self {
        let v = [p1, p2, p3];
        let mut a = [0.0; 3];
        let mut b = [0.0; 3];
        let mut c = [0.0; 3];
        for k in 0..3 {
            let (i, j) = ((k + 1) % 3, (k + 2) % 3);
            a[k] = v[i].y - v[j].y;
            b[k] = v[j].x - v[i].x;
            c[k] = v[i].x * v[j].y - v[j].x * v[i].y;
        }
        Self {
            vertices: v,
            signed_area: signed_area(p1, p2, p3),
            a,
            b,
            c,
        }
    }

    pub fn from_array(v: [Point2; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    /// Unsigned area Δ.
    pub fn area(&self) -> f64 {
        self.signed_area.abs()
    }

    /// The Jacobian `∂(x, y, L1+L2+L3) / ∂(L1, L2, L3)`.
    pub fn jacobian(&self) -> [[f64; 3]; 3] {
        let v = &self.vertices;
        [[v[0].x, v[1].x, v[2].x], [v[0].y, v[1].y, v[2].y], [1.0, 1.0, 1.0]]
    }

    /// Determinant of [`Self::jacobian`]; equals twice the signed area.
    pub fn det_jacobian(&self) -> f64 {
        let m = self.jacobian();
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// The 3x2 matrix `T` with rows `(a_k, b_k) / (2Δ)`, mapping area-coordinate
    /// derivatives onto cartesian ones. Uses the signed area so the map is
    /// correct for either orientation.
    pub fn gradient_transform(&self) -> Result<[[f64; 2]; 3]> {
        if self.signed_area == 0.0 {
            return Err(Error::SingularTransform(self.signed_area));
        }
        let inv = 1.0 / (2.0 * self.signed_area);
        Ok([
            [self.a[0] * inv, self.b[0] * inv],
            [self.a[1] * inv, self.b[1] * inv],
            [self.a[2] * inv, self.b[2] * inv],
        ])
    }

    pub fn centroid(&self) -> Point2 {
        let v = &self.vertices;
        Point2::new((v[0].x + v[1].x + v[2].x) / 3.0, (v[0].y + v[1].y + v[2].y) / 3.0)
    }

    /// Cartesian point for given area coordinates.
    pub fn to_cartesian(&self, l: AreaCoords) -> Point2 {
        let [l1, l2, l3] = l.as_array();
        let v = &self.vertices;
        Point2::new(
            l1 * v[0].x + l2 * v[1].x + l3 * v[2].x,
            l1 * v[0].y + l2 * v[1].y + l3 * v[2].y,
        )
    }

    /// Longest edge length.
    pub fn longest_edge(&self) -> f64 {
        let v = &self.vertices;
        v[0].distance(v[1]).max(v[1].distance(v[2])).max(v[2].distance(v[0]))
    }
}

/// Degeneracy threshold for a domain whose bounding box has the given diagonal.
pub fn degeneracy_epsilon(bbox_diagonal: f64) -> f64 {
    1e-12 * bbox_diagonal * bbox_diagonal
}

/// Orientation by the sign of `t12 × t13`, with `|signed area| < eps` degenerate.
pub fn orientation(tri: &TriangleGeom, eps: f64) -> Orientation {
    if tri.signed_area.abs() < eps {
        Orientation::Degenerate
    } else if tri.signed_area > 0.0 {
        Orientation::Counterclockwise
    } else {
        Orientation::Clockwise
    }
}

/// Area coordinates of `p`; fails for a triangle of zero area.
pub fn area_coords(tri: &TriangleGeom, p: Point2) -> Result<AreaCoords> {
    if tri.signed_area == 0.0 || !tri.signed_area.is_finite() {
        return Err(Error::SingularTransform(tri.signed_area));
    }
    let two_area = 2.0 * tri.signed_area;
    let l1 = (tri.a[0] * p.x + tri.b[0] * p.y + tri.c[0]) / two_area;
    let l2 = (tri.a[1] * p.x + tri.b[1] * p.y + tri.c[1]) / two_area;
    Ok(AreaCoords::new(l1, l2))
}

/// In-circle determinant with rows `(x, y, x² + y², 1)` for the three
/// vertices (taken in clockwise order) followed by `p`.
///
/// Negative: `p` strictly inside the circumcircle. Positive: outside.
/// Zero: co-circular. Coordinates are shifted to `p` before expanding,
/// which leaves the determinant unchanged and reduces cancellation.
pub fn in_circumcircle(tri: &TriangleGeom, p: Point2) -> f64 {
    let mut v = tri.vertices;
    if tri.signed_area > 0.0 {
        v.swap(1, 2);
    }
    let rows: [[f64; 3]; 3] = std::array::from_fn(|k| {
        let d = v[k] - p;
        [d.x, d.y, d.norm_sq()]
    });
    // After translation the fourth row is (0, 0, 0, 1); expanding along it
    // leaves the 3x3 minor.
    rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1])
        - rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0])
        + rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0])
}

/// Circumcenter and squared circumradius, or `None` for a degenerate triangle.
pub fn circumcircle(tri: &TriangleGeom) -> Option<(Point2, f64)> {
    let [a, b, c] = tri.vertices;
    let d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
    if d == 0.0 {
        return None;
    }
    let ux = (a.norm_sq() * (b.y - c.y) + b.norm_sq() * (c.y - a.y) + c.norm_sq() * (a.y - b.y)) / d;
    let uy = (a.norm_sq() * (c.x - b.x) + b.norm_sq() * (a.x - c.x) + c.norm_sq() * (b.x - a.x)) / d;
    let u = Point2::new(ux, uy);
    Some((u, (a - u).norm_sq()))
}

/// Distance from `p` to the segment `a`-`b` together with the projection
/// parameter `t` (0 at `a`, 1 at `b`).
pub fn segment_distance(p: Point2, a: Point2, b: Point2) -> (f64, f64) {
    let d = b - a;
    let len_sq = d.norm_sq();
    if len_sq == 0.0 {
        return (p.distance(a), 0.0);
    }
    let t = (p - a).dot(d) / len_sq;
    let foot = a + d * t.clamp(0.0, 1.0);
    (p.distance(foot), t)
}
