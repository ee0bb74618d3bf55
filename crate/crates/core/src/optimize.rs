//! One-dimensional bracketed minimization.

/// `(√5 − 1)/2`
const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    pub evaluations: usize,
}

/// Golden-section search for a minimum of `f` on `[lo, hi]`.
///
/// Stops once the bracket is narrower than `xtol` (absolute) or after
/// `max_iter` shrink steps. For a unimodal `f` the returned point is within
/// `xtol` of the minimizer; otherwise it is some local minimum in the bracket.
pub fn golden_section<F>(mut f: F, lo: f64, hi: f64, xtol: f64, max_iter: usize) -> Minimum
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut evaluations = 2;

    for _ in 0..max_iter {
        if (b - a).abs() <= xtol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        evaluations += 1;
    }

    let (x, value) = if fc < fd { (c, fc) } else { (d, fd) };
    Minimum { x, value, evaluations }
}

/// Vertex of the parabola through three points, `(x, y)` of the extremum.
///
/// Returns `None` for collinear or coincident abscissae.
pub fn parabola_vertex(p0: (f64, f64), p1: (f64, f64), p2: (f64, f64)) -> Option<(f64, f64)> {
    let (x0, y0) = p0;
    let (x1, y1) = p1;
    let (x2, y2) = p2;
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let curv = (d12 - d01) / (x2 - x0);
    if !curv.is_finite() || curv == 0.0 {
        return None;
    }
    // y = y1 + slope·(x − x1) + curv·(x − x1)²  with slope taken at x1
    let slope = d01 + curv * (x1 - x0);
    let dx = -slope / (2.0 * curv);
    Some((x1 + dx, y1 + slope * dx + curv * dx * dx))
}
