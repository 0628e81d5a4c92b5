use super::Mesh;
use crate::geometry::Point2;

/// Line carrying a rim segment: `y = a x + b`, or `x = a` when vertical.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentKind {
    Sloped { a: f64, b: f64 },
    Vertical { a: f64 },
}

/// One rim edge between two consecutive constant nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySegment {
    pub kind: SegmentKind,
    pub y_min: f64,
    pub y_max: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub endpoints: [usize; 2],
    start: Point2,
    end: Point2,
}

impl BoundarySegment {
    fn new(start: Point2, end: Point2, endpoints: [usize; 2], tol: f64) -> Self {
        let dx = start.x - end.x;
        let kind = if dx > tol || dx < -tol {
            let a = (start.y - end.y) / dx;
            SegmentKind::Sloped {
                a,
                b: start.y - start.x * a,
            }
        } else {
            SegmentKind::Vertical { a: start.x }
        };
        Self {
            kind,
            y_min: start.y.min(end.y),
            y_max: start.y.max(end.y),
            x_min: start.x.min(end.x),
            x_max: start.x.max(end.x),
            endpoints,
            start,
            end,
        }
    }

    pub fn start(&self) -> Point2 {
        self.start
    }

    pub fn end(&self) -> Point2 {
        self.end
    }

    /// Unit vector from the first endpoint to the second.
    pub fn direction(&self) -> Point2 {
        let d = self.end - self.start;
        d * (1.0 / d.norm())
    }

    pub fn length(&self) -> f64 {
        self.start.distance(self.end)
    }

    /// Distance from `p` to the segment's line, measured along the normal.
    pub fn residual(&self, p: Point2) -> f64 {
        match self.kind {
            SegmentKind::Sloped { a, b } => (p.y - a * p.x - b).abs() / (1.0 + a * a).sqrt(),
            SegmentKind::Vertical { a } => (p.x - a).abs(),
        }
    }

    /// Whether `p` satisfies the segment equation within `tol` and lies in
    /// the segment's coordinate range.
    pub fn contains(&self, p: Point2, tol: f64) -> bool {
        if self.residual(p) > tol {
            return false;
        }
        match self.kind {
            SegmentKind::Sloped { .. } => p.x >= self.x_min - tol && p.x <= self.x_max + tol,
            SegmentKind::Vertical { .. } => p.y >= self.y_min - tol && p.y <= self.y_max + tol,
        }
    }

    /// Arc-length parameter of the projection of `p` onto the segment line.
    pub fn parameter(&self, p: Point2) -> f64 {
        (p - self.start).dot(self.direction())
    }

    pub fn point_at(&self, s: f64) -> Point2 {
        self.start + self.direction() * s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeClass {
    Boundary,
    Internal,
}

/// One segment per pair of consecutive rim nodes, closing the polygon.
pub fn build_boundary_segments(mesh: &Mesh) -> Vec<BoundarySegment> {
    let n = mesh.rim_len;
    let tol = mesh.boundary_tol();
    (0..n)
        .map(|i| {
            let j = (i + 1) % n;
            BoundarySegment::new(mesh.points[i], mesh.points[j], [i, j], tol)
        })
        .collect()
}

pub fn classify_node(p: Point2, segments: &[BoundarySegment], tol: f64) -> NodeClass {
    if segments.iter().any(|s| s.contains(p, tol)) {
        NodeClass::Boundary
    } else {
        NodeClass::Internal
    }
}
