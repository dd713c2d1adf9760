//! Upper bound sets built from a nondominated collection, and the fathoming
//! test against a convex piecewise-linear lower bound curve.

use thiserror::Error;

use crate::geometry::{ordered_pair_ok, ParetoElement, Point, EPS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundSetError {
    #[error("elements {0} and {1} are not mutually nondominated")]
    NotNondominated(ParetoElement, ParetoElement),
    #[error("invalid lower bound curve: {0}")]
    InvalidCurve(&'static str),
}

/// Local nadir points plus the segments of the source collection.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BoundSet {
    pub nadir_points: Vec<Point>,
    pub nadir_segments: Vec<ParetoElement>,
}

impl BoundSet {
    pub fn is_empty(&self) -> bool {
        self.nadir_points.is_empty() && self.nadir_segments.is_empty()
    }

    /// Every member as an element; nadir points become point elements.
    pub fn elements(&self) -> impl Iterator<Item = ParetoElement> + '_ {
        self.nadir_points
            .iter()
            .map(|p| ParetoElement::point(p.x, p.y))
            .chain(self.nadir_segments.iter().copied())
    }
}

/// Convex, decreasing, piecewise linear.
#[derive(Clone, Debug, PartialEq)]
pub struct LowerBoundCurve {
    breakpoints: Vec<Point>,
}

impl LowerBoundCurve {
    pub fn new(breakpoints: Vec<Point>) -> Result<Self, BoundSetError> {
        if breakpoints.is_empty() {
            return Err(BoundSetError::InvalidCurve("no breakpoints"));
        }
        if breakpoints.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(BoundSetError::InvalidCurve("non-finite breakpoint"));
        }
        let mut prev_slope = f64::NEG_INFINITY;
        for w in breakpoints.windows(2) {
            if !(w[1].x > w[0].x && w[1].y < w[0].y) {
                return Err(BoundSetError::InvalidCurve("breakpoints must move down and right"));
            }
            let slope = (w[1].y - w[0].y) / (w[1].x - w[0].x);
            if slope < prev_slope - EPS {
                return Err(BoundSetError::InvalidCurve("slopes must be non-decreasing"));
            }
            prev_slope = slope;
        }
        Ok(LowerBoundCurve { breakpoints })
    }

    pub fn breakpoints(&self) -> &[Point] {
        &self.breakpoints
    }

    /// Curve value at `x`, or `None` outside its x-range.
    pub fn eval(&self, x: f64) -> Option<f64> {
        let bp = &self.breakpoints;
        if x < bp[0].x || x > bp[bp.len() - 1].x {
            return None;
        }
        let i = bp.partition_point(|p| p.x <= x);
        if i == 0 || i == bp.len() {
            return Some(bp[i.saturating_sub(1)].y);
        }
        let (a, b) = (bp[i - 1], bp[i]);
        Some(a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x))
    }

    fn pieces(&self) -> Vec<ParetoElement> {
        if self.breakpoints.len() == 1 {
            let p = self.breakpoints[0];
            return vec![ParetoElement::point(p.x, p.y)];
        }
        self.breakpoints
            .windows(2)
            .map(|w| ParetoElement::segment(w[0], w[1]).expect("validated breakpoints"))
            .collect()
    }
}

/// Nadir points between neighbours whose facing endpoints differ, plus all
/// segments.
pub fn theta(nd: &[ParetoElement]) -> Result<BoundSet, BoundSetError> {
    let mut sorted = nd.to_vec();
    sorted.sort_by(|a, b| a.x1().total_cmp(&b.x1()).then(b.y1().total_cmp(&a.y1())));
    let mut out = BoundSet::default();
    for w in sorted.windows(2) {
        let (a, b) = (w[0], w[1]);
        if !ordered_pair_ok(&a, &b) {
            return Err(BoundSetError::NotNondominated(a, b));
        }
        if !a.se().approx_eq(&b.nw(), EPS) {
            out.nadir_points.push(Point::new(b.x1(), a.y2()));
        }
    }
    out.nadir_segments = sorted.into_iter().filter(|e| !e.is_point()).collect();
    Ok(out)
}

/// Signed gap between `elem` and the region dominated by `piece`; zero or
/// below means some point of `piece` weakly dominates part of `elem`.
/// Positive values measure how far `elem` stays below or left of it.
fn gap(piece: &ParetoElement, elem: &ParetoElement) -> f64 {
    let lo = elem.x1().max(piece.x1());
    if lo > elem.x2() {
        return lo - elem.x2();
    }
    // staircase(x) - elem(x) is linear between these breakpoints
    let mut best = f64::INFINITY;
    for x in [lo, elem.x2(), piece.x1(), piece.x2()] {
        if x >= lo && x <= elem.x2() {
            best = best.min(piece.y_at(x) - elem.y_at(x));
        }
    }
    best
}

/// Smallest gap between the curve's dominated region and any bound-set
/// member; positive when separable.
pub fn separation_margin(lower: &LowerBoundCurve, upper: &BoundSet) -> f64 {
    let pieces = lower.pieces();
    upper
        .elements()
        .flat_map(|u| pieces.iter().map(move |c| gap(c, &u)))
        .fold(f64::INFINITY, f64::min)
}

/// True when no point of the curve weakly dominates any bound-set member,
/// so the node may be fathomed.
pub fn is_separable(lower: &LowerBoundCurve, upper: &BoundSet) -> bool {
    separation_margin(lower, upper) > EPS
}

fn sample(e: &ParetoElement, samples: usize) -> Vec<Point> {
    if e.is_point() {
        return vec![e.nw()];
    }
    (0..samples)
        .map(|i| {
            let t = i as f64 / (samples - 1) as f64;
            Point::new(e.x1() + t * (e.x2() - e.x1()), e.y1() + t * (e.y2() - e.y1()))
        })
        .collect()
}

/// Sampling check used to cross-validate [`is_separable`].
pub fn brute_force_separable(lower: &LowerBoundCurve, upper: &BoundSet, samples: usize) -> bool {
    assert!(samples >= 2, "need at least two samples");
    let mut curve: Vec<Point> = Vec::new();
    for w in lower.breakpoints.windows(2) {
        let seg = ParetoElement::segment(w[0], w[1]).expect("validated breakpoints");
        curve.extend(sample(&seg, samples));
    }
    if lower.breakpoints.len() == 1 {
        curve.push(lower.breakpoints[0]);
    }
    curve.sort_by(|a, b| a.x.total_cmp(&b.x));
    for u in upper.elements() {
        for q in sample(&u, samples) {
            // the lowest sampled curve point not to the right of q
            let i = curve.partition_point(|p| p.x <= q.x);
            if i > 0 && curve[i - 1].y <= q.y {
                return false;
            }
            if let Some(y) = lower.eval(q.x) {
                if y <= q.y {
                    return false;
                }
            }
        }
    }
    true
}
