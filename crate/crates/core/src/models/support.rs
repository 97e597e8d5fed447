use std::fmt;
use std::sync::Arc;

type Boundary = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SupportKind {
    Rectangle,
    Triangle,
    Curvilinear,
}

/// Support of a bivariate lifetime density, described by its sections.
#[derive(Clone)]
pub enum Support {
    /// `[0, x_max] × [0, y_max]`; either bound may be infinite.
    Rectangle { x_max: f64, y_max: f64 },
    /// `{x, y >= 0, αx + βy <= 1}`.
    Triangle { alpha: f64, beta: f64 },
    /// `{x, y >= 0, y <= y_upper(x)}` with a decreasing boundary; `x_upper`
    /// is its inverse.
    Curvilinear { x_max: f64, y_max: f64, y_upper: Boundary, x_upper: Boundary },
    /// Point reflection `(x, y) -> (cx - x, cy - y)` of another support.
    Reflected { inner: Box<Support>, cx: f64, cy: f64 },
}

impl fmt::Debug for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Rectangle { x_max, y_max } => write!(f, "Rectangle([0, {x_max}] x [0, {y_max}])"),
            Self::Triangle { alpha, beta } => write!(f, "Triangle({alpha} x + {beta} y <= 1)"),
            Self::Curvilinear { x_max, y_max, .. } => write!(f, "Curvilinear(x <= {x_max}, y <= {y_max})"),
            Self::Reflected { inner, cx, cy } => write!(f, "Reflected({inner:?} about ({cx}, {cy}))"),
        }
    }
}

impl Support {
    pub fn kind(&self) -> SupportKind {
        match self {
            Self::Rectangle { .. } => SupportKind::Rectangle,
            Self::Triangle { .. } => SupportKind::Triangle,
            Self::Curvilinear { .. } | Self::Reflected { .. } => SupportKind::Curvilinear,
        }
    }

    pub fn x_bounds(&self) -> (f64, f64) {
        match self {
            Self::Rectangle { x_max, .. } | Self::Curvilinear { x_max, .. } => (0.0, *x_max),
            Self::Triangle { alpha, .. } => (0.0, 1.0 / alpha),
            Self::Reflected { inner, cx, .. } => {
                let (lo, hi) = inner.x_bounds();
                (cx - hi, cx - lo)
            }
        }
    }

    pub fn y_bounds(&self) -> (f64, f64) {
        match self {
            Self::Rectangle { y_max, .. } | Self::Curvilinear { y_max, .. } => (0.0, *y_max),
            Self::Triangle { beta, .. } => (0.0, 1.0 / beta),
            Self::Reflected { inner, cy, .. } => {
                let (lo, hi) = inner.y_bounds();
                (cy - hi, cy - lo)
            }
        }
    }

    /// `y`-range of the support above `x` (empty when `lo >= hi`).
    pub fn y_section(&self, x: f64) -> (f64, f64) {
        let (xlo, xhi) = self.x_bounds();
        if x < xlo || x > xhi {
            return (0.0, 0.0);
        }
        match self {
            Self::Rectangle { y_max, .. } => (0.0, *y_max),
            Self::Triangle { alpha, beta } => (0.0, ((1.0 - alpha * x) / beta).max(0.0)),
            Self::Curvilinear { y_upper, .. } => (0.0, y_upper(x).max(0.0)),
            Self::Reflected { inner, cx, cy } => {
                let (lo, hi) = inner.y_section(cx - x);
                (cy - hi, cy - lo)
            }
        }
    }

    /// `x`-range of the support at height `y`.
    pub fn x_section(&self, y: f64) -> (f64, f64) {
        let (ylo, yhi) = self.y_bounds();
        if y < ylo || y > yhi {
            return (0.0, 0.0);
        }
        match self {
            Self::Rectangle { x_max, .. } => (0.0, *x_max),
            Self::Triangle { alpha, beta } => (0.0, ((1.0 - beta * y) / alpha).max(0.0)),
            Self::Curvilinear { x_upper, .. } => (0.0, x_upper(y).max(0.0)),
            Self::Reflected { inner, cx, cy } => {
                let (lo, hi) = inner.x_section(cy - y);
                (cx - hi, cx - lo)
            }
        }
    }

    /// Range of `x` whose section meets the band `ya <= y <= yb`.
    pub fn x_window(&self, ya: f64, yb: f64) -> (f64, f64) {
        let (ylo, yhi) = self.y_bounds();
        let (a, b) = (ya.max(ylo), yb.min(yhi));
        if !(a < b) {
            return (0.0, 0.0);
        }
        match self {
            Self::Rectangle { x_max, .. } => (0.0, *x_max),
            Self::Triangle { alpha, beta } => (0.0, (1.0 - beta * a) / alpha),
            Self::Curvilinear { x_upper, .. } => (0.0, x_upper(a)),
            Self::Reflected { inner, cx, cy } => {
                let (lo, hi) = inner.x_window(cy - b, cy - a);
                (cx - hi, cx - lo)
            }
        }
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        let (lo, hi) = self.y_section(x);
        let (xlo, xhi) = self.x_bounds();
        x >= xlo && x <= xhi && y >= lo && y <= hi
    }

    pub fn is_bounded(&self) -> bool {
        let (_, xh) = self.x_bounds();
        let (_, yh) = self.y_bounds();
        xh.is_finite() && yh.is_finite()
    }
}
