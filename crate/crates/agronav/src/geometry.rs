//! Line parameterization and raster geometry.
//!
//! Lines are stored in a signed normal form `(r, theta)` about the image
//! center: `theta` in `[0, pi)` is the angle between the line and the
//! horizontal axis (measured counter-clockwise with the y axis pointing up,
//! i.e. a line with `theta = pi/4` runs from the bottom-left to the top-right
//! of the displayed image), and `r` is the signed perpendicular distance from
//! the image center. A point `(x, y)` in image coordinates lies on the line
//! exactly when
//!
//! ```text
//! (x - cx) * sin(theta) + (y - cy) * cos(theta) = r
//! ```
//!
//! with `(cx, cy)` the image center `((w-1)/2, (h-1)/2)`.

use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("degenerate input: endpoints coincide")]
    DegenerateInput,
    #[error("point ({x}, {y}) lies outside the {width}x{height} image")]
    OutOfBounds {
        x: f64,
        y: f64,
        width: u32,
        height: u32,
    },
    #[error("line does not intersect the image")]
    NoIntersection,
    #[error("centerline covers only {valid_rows} rows, need at least 2")]
    InsufficientOverlap { valid_rows: usize },
    #[error("fraction {0} outside (0, 1]")]
    InvalidFraction(f64),
    #[error("image dimensions must be at least 2x2, got {width}x{height}")]
    InvalidDims { width: u32, height: u32 },
}

/// Pixel dimensions of an image. Both sides are at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ImageDims {
    width: u32,
    height: u32,
}

impl ImageDims {
    pub fn new(width: u32, height: u32) -> Result<Self, GeometryError> {
        if width < 2 || height < 2 {
            return Err(GeometryError::InvalidDims { width, height });
        }
        Ok(Self { width, height })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    /// Continuous coordinates of the image center, `((w-1)/2, (h-1)/2)`.
    pub fn center(&self) -> (f64, f64) {
        (
            (self.width - 1) as f64 / 2.0,
            (self.height - 1) as f64 / 2.0,
        )
    }

    /// Full diagonal length `hypot(w, h)`.
    pub fn diagonal(&self) -> f64 {
        (self.width as f64).hypot(self.height as f64)
    }

    pub fn pixel_count(&self) -> usize {
        self.width as usize * self.height as usize
    }

    fn contains(&self, x: f64, y: f64) -> bool {
        x >= 0.0 && x <= (self.width - 1) as f64 && y >= 0.0 && y <= (self.height - 1) as f64
    }
}

/// A straight line in canonical `(r, theta)` form about the image center.
///
/// `theta` is always in `[0, pi)`; normalizing an angle by `pi` flips the
/// sign of `r`, so every line has exactly one representation (lines through
/// the center share `r = 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemanticLine {
    r: f64,
    theta: f64,
}

impl SemanticLine {
    /// Build a line from any `(r, theta)` pair, normalizing into canonical form.
    pub fn new(r: f64, theta: f64) -> Self {
        let mut t = theta.rem_euclid(std::f64::consts::PI * 2.0);
        let mut r = r;
        // rem_euclid can round up to the modulus itself for tiny negative inputs.
        for _ in 0..2 {
            if t >= std::f64::consts::PI {
                t -= std::f64::consts::PI;
                r = -r;
            }
        }
        if r == 0.0 {
            r = 0.0; // normalize -0.0
        }
        if t == 0.0 {
            t = 0.0;
        }
        Self { r, theta: t }
    }

    /// Signed perpendicular distance from the image center.
    pub fn r(&self) -> f64 {
        self.r
    }

    /// Angle with the horizontal axis, in `[0, pi)`.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Unit normal `(sin theta, cos theta)`; `r = (p - center) . normal`.
    pub fn normal(&self) -> (f64, f64) {
        (self.theta.sin(), self.theta.cos())
    }

    /// Unit direction along the line, `(cos theta, -sin theta)` in image
    /// coordinates (y pointing down).
    pub fn direction(&self) -> (f64, f64) {
        (self.theta.cos(), -self.theta.sin())
    }

    /// Signed distance of a point from the line.
    pub fn signed_distance(&self, x: f64, y: f64, dims: &ImageDims) -> f64 {
        let (cx, cy) = dims.center();
        let (nx, ny) = self.normal();
        (x - cx) * nx + (y - cy) * ny - self.r
    }

    /// Acute angle between two lines, in `[0, pi/2]`.
    pub fn angle_between(&self, other: &SemanticLine) -> f64 {
        let d = (self.theta - other.theta).abs();
        d.min(std::f64::consts::PI - d)
    }
}

/// A line segment whose endpoints lie on the image border
/// (`x` in `{0, w-1}` or `y` in `{0, h-1}`). Coordinates are `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BorderSegment {
    pub p0: (f64, f64),
    pub p1: (f64, f64),
}

impl BorderSegment {
    pub fn midpoint(&self) -> (f64, f64) {
        (
            (self.p0.0 + self.p1.0) / 2.0,
            (self.p0.1 + self.p1.1) / 2.0,
        )
    }
}

/// Row-wise midpoint curve between two lines. Points are `(x, y)` with `x`
/// continuous and `y` an integer row; rows strictly increase.
#[derive(Debug, Clone, PartialEq)]
pub struct Centerline {
    pub points: Vec<(f64, u32)>,
    pub row_range: (u32, u32),
}

/// Fit the canonical line through two points.
///
/// Both points must lie inside the image; identical points are rejected.
pub fn endpoints_to_line(
    p0: (f64, f64),
    p1: (f64, f64),
    dims: &ImageDims,
) -> Result<SemanticLine, GeometryError> {
    for &(x, y) in &[p0, p1] {
        if !dims.contains(x, y) {
            return Err(GeometryError::OutOfBounds {
                x,
                y,
                width: dims.width,
                height: dims.height,
            });
        }
    }
    let dx = p1.0 - p0.0;
    let dy = p1.1 - p0.1;
    if dx == 0.0 && dy == 0.0 {
        return Err(GeometryError::DegenerateInput);
    }
    // Angle with y pointing up, folded into [0, pi).
    let theta = SemanticLine::new(0.0, (-dy).atan2(dx)).theta();
    let (cx, cy) = dims.center();
    let r = (p0.0 - cx) * theta.sin() + (p0.1 - cy) * theta.cos();
    Ok(SemanticLine::new(r, theta))
}

/// Clip a line to the image rectangle, returning the border-to-border segment.
///
/// Fails with [`GeometryError::NoIntersection`] when the line misses the
/// rectangle or only touches a corner.
pub fn line_to_border_segment(
    line: &SemanticLine,
    dims: &ImageDims,
) -> Result<BorderSegment, GeometryError> {
    let (cx, cy) = dims.center();
    let (nx, ny) = line.normal();
    let (dx, dy) = line.direction();
    // Foot of the perpendicular from the center.
    let fx = cx + line.r * nx;
    let fy = cy + line.r * ny;
    let w = (dims.width - 1) as f64;
    let h = (dims.height - 1) as f64;

    let mut hits: Vec<(f64, f64, f64)> = Vec::with_capacity(4); // (t, x, y)
    let mut push = |t: f64, x: f64, y: f64| {
        const EPS: f64 = 1e-9;
        if x >= -EPS && x <= w + EPS && y >= -EPS && y <= h + EPS {
            hits.push((t, x.clamp(0.0, w), y.clamp(0.0, h)));
        }
    };
    if dx != 0.0 {
        for edge_x in [0.0, w] {
            let t = (edge_x - fx) / dx;
            push(t, edge_x, fy + t * dy);
        }
    }
    if dy != 0.0 {
        for edge_y in [0.0, h] {
            let t = (edge_y - fy) / dy;
            push(t, fx + t * dx, edge_y);
        }
    }
    hits.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (first, last) = match (hits.first(), hits.last()) {
        (Some(a), Some(b)) => (*a, *b),
        _ => return Err(GeometryError::NoIntersection),
    };
    if last.0 - first.0 < 1e-9 {
        return Err(GeometryError::NoIntersection);
    }
    let mut p0 = (first.1, first.2);
    let mut p1 = (last.1, last.2);
    // Deterministic endpoint order.
    if (p1.0, p1.1) < (p0.0, p0.1) {
        std::mem::swap(&mut p0, &mut p1);
    }
    Ok(BorderSegment { p0, p1 })
}

/// Continuous x coordinate of the line at integer row `y`, or `None` when the
/// line is horizontal or the intersection falls outside `[0, w-1]`.
pub fn x_at_row(line: &SemanticLine, y: u32, dims: &ImageDims) -> Option<f64> {
    if y >= dims.height {
        return None;
    }
    let x = x_at_row_raw(line, y as f64, dims)?;
    if x >= 0.0 && x <= (dims.width - 1) as f64 {
        Some(x)
    } else {
        None
    }
}

fn x_at_row_raw(line: &SemanticLine, y: f64, dims: &ImageDims) -> Option<f64> {
    let s = line.theta.sin();
    if s == 0.0 {
        return None;
    }
    let (cx, cy) = dims.center();
    Some(cx + (line.r - (y - cy) * line.theta.cos()) / s)
}

/// Rasterize a line into an 8-connected pixel chain.
///
/// Steep lines (`|theta - pi/2| < pi/4`) emit one pixel per intersected row,
/// shallow ones one per intersected column; every emitted pixel lies within
/// `sqrt(2)/2` of the continuous line. Returns an empty list when the line
/// misses the image.
pub fn rasterize_line(line: &SemanticLine, dims: &ImageDims) -> Vec<(u32, u32)> {
    let (cx, cy) = dims.center();
    let s = line.theta.sin();
    let c = line.theta.cos();
    let mut pixels = Vec::new();
    if (line.theta - std::f64::consts::FRAC_PI_2).abs() < std::f64::consts::FRAC_PI_4 {
        for y in 0..dims.height {
            let x = cx + (line.r - (y as f64 - cy) * c) / s;
            let xi = x.round();
            if xi >= 0.0 && xi <= (dims.width - 1) as f64 {
                pixels.push((xi as u32, y));
            }
        }
    } else {
        for x in 0..dims.width {
            let y = cy + (line.r - (x as f64 - cx) * s) / c;
            let yi = y.round();
            if yi >= 0.0 && yi <= (dims.height - 1) as f64 {
                pixels.push((x, yi as u32));
            }
        }
    }
    pixels
}

/// Row-wise midpoints between two lines over the bottom `fraction` of the
/// image. Rows where either line is undefined or off-image are skipped.
pub fn centerline(
    l1: &SemanticLine,
    l2: &SemanticLine,
    dims: &ImageDims,
    fraction: f64,
) -> Result<Centerline, GeometryError> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(GeometryError::InvalidFraction(fraction));
    }
    if l1 == l2 {
        return Err(GeometryError::DegenerateInput);
    }
    let y_start = ((1.0 - fraction) * dims.height as f64).ceil() as u32;
    let mut points = Vec::new();
    for y in y_start..dims.height {
        if let (Some(x1), Some(x2)) = (x_at_row(l1, y, dims), x_at_row(l2, y, dims)) {
            points.push(((x1 + x2) / 2.0, y));
        }
    }
    if points.len() < 2 {
        return Err(GeometryError::InsufficientOverlap {
            valid_rows: points.len(),
        });
    }
    let row_range = (points[0].1, points[points.len() - 1].1);
    Ok(Centerline { points, row_range })
}

/// Serialize a centerline: header line, then one `y x` pair per row with x at
/// three decimals.
pub fn write_centerline(cl: &Centerline, dims: &ImageDims, fraction: f64) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# centerline w={} h={} fraction={}",
        dims.width, dims.height, fraction
    );
    for &(x, y) in &cl.points {
        let _ = writeln!(out, "{} {:.3}", y, x);
    }
    out
}
