//! Dominance geometry for points and negative-slope segments in the plane
//! (both objectives minimized).
//!
//! Relative to a stored element the plane splits into four regions:
//!
//! * `R1` up-left of the north-west endpoint (incomparable, routed left),
//! * `R2` weakly dominated by the element (the element itself included),
//! * `R3` dominating some part of the element,
//! * `R4` down-right of the south-east endpoint (incomparable, routed right).
//!
//! Each region owns its lower and left boundaries but not its upper or right
//! ones. All comparisons use the absolute tolerance [`EPS`].

use std::cmp::Ordering;
use std::fmt;

use arrayvec::ArrayVec;
use thiserror::Error;

/// Absolute coordinate tolerance shared by every geometric predicate.
pub const EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Componentwise `self <= other` (weak domination).
    pub fn weakly_dominates(&self, other: &Point) -> bool {
        self.x <= other.x + EPS && self.y <= other.y + EPS
    }

    pub fn approx_eq(&self, other: &Point, tol: f64) -> bool {
        (self.x - other.x).abs() <= tol && (self.y - other.y).abs() <= tol
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ElementKind {
    Point,
    Segment,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("segment {nw} - {se} does not have a strictly negative slope")]
    NotNegativeSlope { nw: Point, se: Point },
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("dominated pair found: {first} and {second}")]
    DominatedPairFound {
        first: ParetoElement,
        second: ParetoElement,
    },
}

/// A point or a closed segment with strictly negative slope.
///
/// For a segment `(x1, y1)` is the north-west endpoint and `(x2, y2)` the
/// south-east one; a point stores the same coordinates twice.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParetoElement {
    kind: ElementKind,
    x1: f64,
    y1: f64,
    x2: f64,
    y2: f64,
}

impl fmt::Display for ParetoElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ElementKind::Point => write!(f, "pt({}, {})", self.x1, self.y1),
            ElementKind::Segment => write!(
                f,
                "seg({}, {})-({}, {})",
                self.x1, self.y1, self.x2, self.y2
            ),
        }
    }
}

impl ParetoElement {
    pub fn point(x: f64, y: f64) -> Self {
        ParetoElement {
            kind: ElementKind::Point,
            x1: x,
            y1: y,
            x2: x,
            y2: y,
        }
    }

    /// Strict segment constructor: `nw` must lie strictly up-left of `se`.
    pub fn segment(nw: Point, se: Point) -> Result<Self, GeometryError> {
        if ![nw.x, nw.y, se.x, se.y].iter().all(|v| v.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        if !(nw.x < se.x && nw.y > se.y) {
            return Err(GeometryError::NotNegativeSlope { nw, se });
        }
        Ok(Self::segment_unchecked(nw, se))
    }

    fn segment_unchecked(nw: Point, se: Point) -> Self {
        ParetoElement {
            kind: ElementKind::Segment,
            x1: nw.x,
            y1: nw.y,
            x2: se.x,
            y2: se.y,
        }
    }

    /// Builds an element from two arbitrary endpoints, trimming it to its own
    /// nondominated subset: horizontal keeps the left end, vertical the bottom
    /// end, positive slope the south-west end. Near-coincident endpoints
    /// collapse to a point.
    pub fn from_endpoints(a: Point, b: Point) -> Result<Self, GeometryError> {
        if ![a.x, a.y, b.x, b.y].iter().all(|v| v.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let (l, r) = if a.x < b.x || (a.x == b.x && a.y > b.y) {
            (a, b)
        } else {
            (b, a)
        };
        let dx = r.x - l.x;
        let dy = l.y - r.y;
        if dx <= EPS && dy.abs() <= EPS {
            return Ok(Self::point(l.x, l.y));
        }
        if dy.abs() <= EPS {
            // horizontal
            return Ok(Self::point(l.x, l.y));
        }
        if dx <= EPS {
            // vertical: bottom endpoint
            return Ok(if l.y < r.y {
                Self::point(l.x, l.y)
            } else {
                Self::point(r.x, r.y)
            });
        }
        if dy < 0.0 {
            // positive slope: the left end is also the lower one
            return Ok(Self::point(l.x, l.y));
        }
        Ok(Self::segment_unchecked(l, r))
    }

    pub fn kind(&self) -> ElementKind {
        self.kind
    }

    pub fn is_point(&self) -> bool {
        self.kind == ElementKind::Point
    }

    pub fn x1(&self) -> f64 {
        self.x1
    }
    pub fn y1(&self) -> f64 {
        self.y1
    }
    pub fn x2(&self) -> f64 {
        self.x2
    }
    pub fn y2(&self) -> f64 {
        self.y2
    }

    /// North-west endpoint.
    pub fn nw(&self) -> Point {
        Point::new(self.x1, self.y1)
    }

    /// South-east endpoint.
    pub fn se(&self) -> Point {
        Point::new(self.x2, self.y2)
    }

    fn is_degenerate(&self) -> bool {
        self.x2 - self.x1 <= EPS && self.y1 - self.y2 <= EPS
    }

    /// y on the supporting line at `x` (only meaningful within `[x1, x2]`).
    pub fn y_at(&self, x: f64) -> f64 {
        if self.kind == ElementKind::Point || x <= self.x1 {
            return self.y1;
        }
        if x >= self.x2 {
            return self.y2;
        }
        self.y1 + (x - self.x1) * (self.y2 - self.y1) / (self.x2 - self.x1)
    }

    /// x on the supporting line at height `y`, clamped to the element.
    pub fn x_at(&self, y: f64) -> f64 {
        if self.kind == ElementKind::Point || y >= self.y1 {
            return self.x1;
        }
        if y <= self.y2 {
            return self.x2;
        }
        self.x1 + (y - self.y1) * (self.x2 - self.x1) / (self.y2 - self.y1)
    }

    /// Lower envelope of the dominated region: `y1` left of the element,
    /// the segment itself across it, `y2` to the right.
    fn staircase(&self, x: f64) -> f64 {
        self.y_at(x)
    }

    /// The piece of this element over `[xa, xb]`, collapsing to a point when
    /// shorter than the tolerance. `keep_se` picks which end survives a
    /// collapse.
    fn piece(&self, xa: f64, xb: f64, keep_se: bool) -> ParetoElement {
        if self.kind == ElementKind::Point {
            return *self;
        }
        let a = if xa <= self.x1 {
            self.nw()
        } else {
            Point::new(xa, self.y_at(xa))
        };
        let b = if xb >= self.x2 {
            self.se()
        } else {
            Point::new(xb, self.y_at(xb))
        };
        if b.x - a.x <= EPS && a.y - b.y <= EPS {
            let p = if keep_se { b } else { a };
            return Self::point(p.x, p.y);
        }
        Self::segment_unchecked(a, b)
    }

    fn approx_eq(&self, other: &ParetoElement, tol: f64) -> bool {
        self.kind == other.kind
            && self.nw().approx_eq(&other.nw(), tol)
            && self.se().approx_eq(&other.se(), tol)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RegionId {
    R1,
    R2,
    R3,
    R4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DominanceRelation {
    /// `a` weakly dominates all of `b`.
    Dominates,
    DominatedBy,
    /// `a` dominates (or repeats) a proper part of `b`.
    PartialDominates,
    PartiallyDominatedBy,
    Incomparable,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClipResult {
    pub pieces: Vec<ParetoElement>,
    pub was_split: bool,
}

impl ClipResult {
    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// True when the clip removed nothing of positive measure.
    pub fn is_unchanged(&self, target: &ParetoElement) -> bool {
        self.pieces.len() == 1 && self.pieces[0] == *target
    }
}

/// `q` lies in `R2(dominator)`, i.e. some point of `dominator` is `<= q`.
pub fn dominated_region_contains(dominator: &ParetoElement, q: Point) -> bool {
    q.x >= dominator.x1 - EPS && q.y >= dominator.staircase(q.x) - EPS
}

/// Membership in a single region. The four predicates are written out
/// independently; exactly one of them accepts any finite `q`.
pub fn in_region(base: &ParetoElement, q: Point, r: RegionId) -> bool {
    match r {
        RegionId::R1 => q.x < base.x1 - EPS && q.y >= base.y1 - EPS,
        RegionId::R2 => dominated_region_contains(base, q),
        RegionId::R3 => {
            (q.x < base.x1 - EPS && q.y < base.y1 - EPS)
                || (q.x >= base.x1 - EPS
                    && q.x < base.x2 - EPS
                    && q.y < base.staircase(q.x) - EPS)
        }
        RegionId::R4 => q.x >= base.x2 - EPS && q.y < base.staircase(q.x) - EPS,
    }
}

pub fn region_of(base: &ParetoElement, q: Point) -> RegionId {
    if dominated_region_contains(base, q) {
        RegionId::R2
    } else if q.x < base.x1 - EPS && q.y >= base.y1 - EPS {
        RegionId::R1
    } else if q.x >= base.x2 - EPS {
        RegionId::R4
    } else {
        RegionId::R3
    }
}

/// x-interval of `target` that lies in `cl(R2(dominator))`, if any.
fn dominated_interval(target: &ParetoElement, dominator: &ParetoElement) -> Option<(f64, f64)> {
    debug_assert_eq!(target.kind, ElementKind::Segment);
    let hi = target.x2;
    let lo = target.x1.max(dominator.x1);
    if lo > hi {
        // only the tolerance band left of the dominator can still reach
        let touch = hi >= dominator.x1 - EPS && target.y2 - dominator.y1 >= -EPS;
        return touch.then_some((hi, hi));
    }
    // h(x) = target(x) - staircase(x) is linear between these breakpoints.
    let mut xs = [lo, hi, hi, hi];
    let mut n = 1;
    for b in [dominator.x1, dominator.x2] {
        if b > lo && b < hi {
            xs[n] = b;
            n += 1;
        }
    }
    xs[n] = hi;
    n += 1;
    let h = |x: f64| target.y_at(x) - dominator.staircase(x);
    let mut found: Option<(f64, f64)> = None;
    let mut extend = |a: f64, b: f64| {
        found = Some(match found {
            None => (a, b),
            Some((s, e)) => (s.min(a), e.max(b)),
        });
    };
    for w in xs[..n].windows(2) {
        let (u, v) = (w[0], w[1]);
        let (hu, hv) = (h(u), h(v));
        let (pu, pv) = (hu >= -EPS, hv >= -EPS);
        match (pu, pv) {
            (true, true) => extend(u, v),
            (false, false) => {}
            _ => {
                // a tolerated touch near u or v degenerates to that end
                let t = -hu / (hv - hu);
                let r = u + t.clamp(0.0, 1.0) * (v - u);
                if pu {
                    extend(u, r)
                } else {
                    extend(r, v)
                }
            }
        }
    }
    found.map(|(a, b)| {
        if a == lo && lo > target.x1 && target.x1 >= dominator.x1 - EPS {
            (target.x1, b)
        } else {
            (a, b)
        }
    })
}

/// Cheap box test: false guarantees `clip(target, dominator)` leaves
/// `target` untouched.
pub fn may_clip(target: &ParetoElement, dominator: &ParetoElement) -> bool {
    dominator.x1 <= target.x2 + EPS && dominator.y2 <= target.y1 + EPS
}

/// At most two residual pieces, without allocating.
pub(crate) type Pieces = ArrayVec<ParetoElement, 2>;

/// `target` with its part inside `cl(R2(dominator))` removed. Residual pieces
/// are kept closed; removing a single interior point leaves `target` as is.
pub fn clip(target: &ParetoElement, dominator: &ParetoElement) -> ClipResult {
    let pieces = clip_parts(target, dominator);
    ClipResult {
        was_split: pieces.len() == 2,
        pieces: pieces.to_vec(),
    }
}

pub(crate) fn clip_parts(target: &ParetoElement, dominator: &ParetoElement) -> Pieces {
    let mut out = Pieces::new();
    if !may_clip(target, dominator) {
        out.push(*target);
        return out;
    }
    if target.kind == ElementKind::Point {
        if !dominated_region_contains(dominator, target.nw()) {
            out.push(*target);
        }
        return out;
    }
    let Some((p, q)) = dominated_interval(target, dominator) else {
        out.push(*target);
        return out;
    };
    let left = target.piece(target.x1, p, false);
    let right = target.piece(q, target.x2, true);
    let left_ok = p > target.x1 && !left.is_point();
    let right_ok = q < target.x2 && !right.is_point();
    let removed = target.piece(p, q, false);
    if removed.is_point() && (left_ok || right_ok) {
        out.push(*target);
        return out;
    }
    if left_ok {
        out.push(left);
    }
    if right_ok {
        out.push(right);
    }
    out
}

/// The maximal part of `target` in region `r` (R1 or R4) of `base`.
pub fn restrict_to_region(
    target: &ParetoElement,
    base: &ParetoElement,
    r: RegionId,
) -> Option<ParetoElement> {
    match r {
        RegionId::R1 => {
            // a prefix of target
            if !in_region(base, target.nw(), RegionId::R1) {
                return None;
            }
            if target.kind == ElementKind::Point {
                return Some(*target);
            }
            let mut hi = target.x2.min(base.x1);
            if target.y2 < base.y1 {
                hi = hi.min(target.x_at(base.y1));
            }
            Some(target.piece(target.x1, hi, false))
        }
        RegionId::R4 => {
            // a suffix of target
            if !in_region(base, target.se(), RegionId::R4) {
                return None;
            }
            if target.kind == ElementKind::Point {
                return Some(*target);
            }
            let mut lo = target.x1.max(base.x2);
            if target.y1 > base.y2 {
                lo = lo.max(target.x_at(base.y2));
            }
            Some(target.piece(lo, target.x2, true))
        }
        RegionId::R2 | RegionId::R3 => {
            panic!("restrict_to_region only supports R1 and R4, got {r:?}")
        }
    }
}

pub fn compare(a: &ParetoElement, b: &ParetoElement) -> DominanceRelation {
    let b_by_a = clip(b, a);
    if b_by_a.is_empty() {
        return DominanceRelation::Dominates;
    }
    let a_by_b = clip(a, b);
    if a_by_b.is_empty() {
        return DominanceRelation::DominatedBy;
    }
    if !b_by_a.is_unchanged(b) {
        return DominanceRelation::PartialDominates;
    }
    if !a_by_b.is_unchanged(a) {
        return DominanceRelation::PartiallyDominatedBy;
    }
    DominanceRelation::Incomparable
}

/// Checks that `next` (later in north-west order) does not dominate or get
/// dominated by `prev` beyond a shared or weakly dominated endpoint.
pub(crate) fn ordered_pair_ok(prev: &ParetoElement, next: &ParetoElement) -> bool {
    if next.x1 < prev.x2 - EPS || next.y1 > prev.y2 + EPS {
        return false;
    }
    let same_x = (next.x1 - prev.x2).abs() <= EPS;
    let same_y = (next.y1 - prev.y2).abs() <= EPS;
    if same_x && same_y {
        return true;
    }
    // a whole point may not be weakly dominated by a neighbour's endpoint
    if prev.is_point() && same_x {
        return false;
    }
    if next.is_point() && same_y {
        return false;
    }
    true
}

fn nw_order(a: &ParetoElement, b: &ParetoElement) -> Ordering {
    a.x1.total_cmp(&b.x1)
        .then(b.y1.total_cmp(&a.y1))
        .then_with(|| match (a.is_point(), b.is_point()) {
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => Ordering::Equal,
        })
        .then(a.x2.total_cmp(&b.x2))
}

fn distance_to_line(p: Point, a: Point, b: Point) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len = dx.hypot(dy);
    if len == 0.0 {
        return (p.x - a.x).hypot(p.y - a.y);
    }
    ((p.x - a.x) * dy - (p.y - a.y) * dx).abs() / len
}

/// Deterministic canonical form of a nondominated collection: sorted by
/// north-west x, collinear neighbours sharing an endpoint merged, points on a
/// neighbour's endpoint dropped, zero-length segments collapsed.
pub fn canonicalize<I>(elements: I) -> Result<Vec<ParetoElement>, GeometryError>
where
    I: IntoIterator<Item = ParetoElement>,
{
    let mut items: Vec<ParetoElement> = elements
        .into_iter()
        .map(|e| {
            if e.kind == ElementKind::Segment && e.is_degenerate() {
                ParetoElement::point(e.x1, e.y1)
            } else {
                e
            }
        })
        .collect();
    items.sort_by(nw_order);

    let mut out: Vec<ParetoElement> = Vec::with_capacity(items.len());
    for e in items {
        push_canonical(&mut out, e)?;
    }
    Ok(out)
}

fn push_canonical(out: &mut Vec<ParetoElement>, e: ParetoElement) -> Result<(), GeometryError> {
    loop {
        let Some(last) = out.last().copied() else {
            out.push(e);
            return Ok(());
        };
        if e.is_point() && (last.se().approx_eq(&e.nw(), EPS) || last.nw().approx_eq(&e.nw(), EPS))
        {
            return Ok(());
        }
        if last.is_point() && last.nw().approx_eq(&e.nw(), EPS) {
            out.pop();
            continue;
        }
        if !ordered_pair_ok(&last, &e) {
            return Err(GeometryError::DominatedPairFound {
                first: last,
                second: e,
            });
        }
        if !last.is_point()
            && !e.is_point()
            && last.se().approx_eq(&e.nw(), EPS)
            && distance_to_line(last.se(), last.nw(), e.se()) <= EPS
        {
            out.pop();
            out.push(ParetoElement::segment_unchecked(last.nw(), e.se()));
        } else {
            out.push(e);
        }
        return Ok(());
    }
}

/// Element-for-element comparison of two canonical forms.
pub fn sets_match(a: &[ParetoElement], b: &[ParetoElement], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.approx_eq(y, tol))
}
