//! Closed rectilinear regions as vertical slab decompositions.
//!
//! A [`Region`] stores sorted x-breakpoints, a 1-D fiber (closed interval
//! set) for every open slab between consecutive breakpoints, and a fiber for
//! every breakpoint line itself. Keeping the line fibers explicit lets the
//! representation carry measure-zero features: a corridor of width exactly 1
//! erodes to a degenerate segment, and robots may legally travel along it.

use serde::{Deserialize, Serialize};

use crate::geometry::{AxisSegment, Point, Rect};
use crate::scalar::Scalar;

// ---------------------------------------------------------------------------
// 1-D closed interval sets
// ---------------------------------------------------------------------------

/// Finite union of closed intervals, canonical form: sorted, pairwise
/// disjoint, non-touching (touching intervals are merged). Degenerate
/// single-point intervals are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct IntervalSet {
    intervals: Vec<(Scalar, Scalar)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { intervals: vec![] }
    }

    pub fn single(lo: Scalar, hi: Scalar) -> Self {
        assert!(lo <= hi, "inverted interval");
        IntervalSet {
            intervals: vec![(lo, hi)],
        }
    }

    pub fn from_intervals(mut raw: Vec<(Scalar, Scalar)>) -> Self {
        raw.retain(|(lo, hi)| lo <= hi);
        raw.sort();
        let mut out: Vec<(Scalar, Scalar)> = Vec::with_capacity(raw.len());
        for (lo, hi) in raw {
            match out.last_mut() {
                Some((_, phi)) if lo <= *phi => {
                    if hi > *phi {
                        *phi = hi;
                    }
                }
                _ => out.push((lo, hi)),
            }
        }
        IntervalSet { intervals: out }
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn intervals(&self) -> &[(Scalar, Scalar)] {
        &self.intervals
    }

    pub fn contains(&self, v: &Scalar) -> bool {
        self.intervals
            .binary_search_by(|(lo, hi)| {
                if hi < v {
                    std::cmp::Ordering::Less
                } else if lo > v {
                    std::cmp::Ordering::Greater
                } else {
                    std::cmp::Ordering::Equal
                }
            })
            .is_ok()
    }

    /// True when the whole closed interval `[lo, hi]` lies in the set.
    pub fn contains_interval(&self, lo: &Scalar, hi: &Scalar) -> bool {
        debug_assert!(lo <= hi);
        self.intervals
            .iter()
            .any(|(a, b)| a <= lo && hi <= b)
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        let mut raw = self.intervals.clone();
        raw.extend(other.intervals.iter().cloned());
        IntervalSet::from_intervals(raw)
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.intervals.len() && j < other.intervals.len() {
            let (alo, ahi) = &self.intervals[i];
            let (blo, bhi) = &other.intervals[j];
            let lo = alo.clone().max(blo.clone());
            let hi = ahi.clone().min(bhi.clone());
            if lo <= hi {
                out.push((lo, hi));
            }
            if ahi <= bhi {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet { intervals: out }
    }

    /// `self` minus the open interiors of `other`'s intervals. The result is
    /// closed and keeps degenerate pinch points and touching endpoints.
    pub fn subtract_open(&self, other: &IntervalSet) -> IntervalSet {
        self.subtract_impl(other, false)
    }

    /// Closure of the set difference `self \ other` (both closed). Degenerate
    /// leftovers that lie inside `other` are dropped.
    pub fn subtract_closed(&self, other: &IntervalSet) -> IntervalSet {
        self.subtract_impl(other, true)
    }

    fn subtract_impl(&self, other: &IntervalSet, closure_semantics: bool) -> IntervalSet {
        let mut out: Vec<(Scalar, Scalar)> = Vec::new();
        for (alo, ahi) in &self.intervals {
            let mut cur = alo.clone();
            let mut alive = true;
            for (blo, bhi) in &other.intervals {
                if bhi < &cur {
                    continue;
                }
                if blo > ahi {
                    break;
                }
                if blo == bhi {
                    // Degenerate subtrahend has empty interior.
                    continue;
                }
                if *blo >= cur {
                    out.push((cur.clone(), blo.clone()));
                }
                if *bhi >= cur {
                    cur = bhi.clone();
                }
                if cur > *ahi {
                    alive = false;
                    break;
                }
            }
            if alive && cur <= *ahi {
                out.push((cur, ahi.clone()));
            }
        }
        if closure_semantics {
            out.retain(|(lo, hi)| lo < hi || !other.contains(lo));
        }
        IntervalSet::from_intervals(out)
    }

    /// Total measure (degenerate intervals contribute zero).
    pub fn measure(&self) -> Scalar {
        let mut total = Scalar::zero();
        for (lo, hi) in &self.intervals {
            total += hi - lo;
        }
        total
    }

    /// Gaps between consecutive intervals, as (gap_lo, gap_hi) pairs.
    pub fn gaps(&self) -> Vec<(Scalar, Scalar)> {
        self.intervals
            .windows(2)
            .map(|w| (w[0].1.clone(), w[1].0.clone()))
            .collect()
    }

    pub fn endpoints(&self) -> impl Iterator<Item = &Scalar> {
        self.intervals.iter().flat_map(|(lo, hi)| [lo, hi])
    }
}

// ---------------------------------------------------------------------------
// 2-D regions
// ---------------------------------------------------------------------------

/// Boolean operations on regions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoolOp {
    Union,
    Intersect,
    Difference,
}

/// Closed rectilinear region; see module docs for the representation.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Region {
    xs: Vec<Scalar>,
    /// Fiber at `xs[i]`; `lines.len() == xs.len()`.
    lines: Vec<IntervalSet>,
    /// Fiber on the open slab `(xs[i], xs[i+1])`; `slabs.len() + 1 == xs.len()`
    /// whenever `xs` is nonempty.
    slabs: Vec<IntervalSet>,
}

impl Region {
    pub fn empty() -> Self {
        Region::default()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn from_rect(r: &Rect) -> Self {
        Region::from_rects(std::slice::from_ref(r))
    }

    pub fn from_rects(rects: &[Rect]) -> Self {
        let mut xs: Vec<Scalar> = Vec::new();
        for r in rects {
            xs.push(r.x_lo.clone());
            xs.push(r.x_hi.clone());
        }
        xs.sort();
        xs.dedup();
        if xs.is_empty() {
            return Region::empty();
        }
        let lines = xs
            .iter()
            .map(|x| {
                IntervalSet::from_intervals(
                    rects
                        .iter()
                        .filter(|r| &r.x_lo <= x && x <= &r.x_hi)
                        .map(|r| (r.y_lo.clone(), r.y_hi.clone()))
                        .collect(),
                )
            })
            .collect();
        let slabs = xs
            .windows(2)
            .map(|w| {
                IntervalSet::from_intervals(
                    rects
                        .iter()
                        .filter(|r| r.x_lo <= w[0] && w[1] <= r.x_hi)
                        .map(|r| (r.y_lo.clone(), r.y_hi.clone()))
                        .collect(),
                )
            })
            .collect();
        let mut region = Region { xs, lines, slabs };
        region.canonicalize();
        region
    }

    fn canonicalize(&mut self) {
        // Trim empty boundary breakpoints.
        while let Some(first) = self.lines.first() {
            if first.is_empty() && self.slabs.first().map_or(true, |s| s.is_empty()) {
                self.xs.remove(0);
                self.lines.remove(0);
                if !self.slabs.is_empty() {
                    self.slabs.remove(0);
                }
            } else {
                break;
            }
        }
        while let Some(last) = self.lines.last() {
            if last.is_empty() && self.slabs.last().map_or(true, |s| s.is_empty()) {
                self.xs.pop();
                self.lines.pop();
                self.slabs.pop();
            } else {
                break;
            }
        }
        if self.xs.is_empty() {
            self.slabs.clear();
            return;
        }
        if self.xs.len() == 1 {
            self.slabs.clear();
            if self.lines[0].is_empty() {
                *self = Region::empty();
            }
            return;
        }
        // Remove interior breakpoints where line and both slabs agree.
        let mut i = 1;
        while i + 1 < self.xs.len() {
            if self.lines[i] == self.slabs[i - 1] && self.lines[i] == self.slabs[i] {
                self.xs.remove(i);
                self.lines.remove(i);
                self.slabs.remove(i);
            } else {
                i += 1;
            }
        }
    }

    /// Fiber of the region on the vertical line at `x`.
    pub fn fiber_at(&self, x: &Scalar) -> IntervalSet {
        match self.xs.binary_search(x) {
            Ok(i) => self.lines[i].clone(),
            Err(0) => IntervalSet::empty(),
            Err(i) if i == self.xs.len() => IntervalSet::empty(),
            Err(i) => self.slabs[i - 1].clone(),
        }
    }

    /// Fiber on an open x-interval `(a, b)` that contains no breakpoint of
    /// this region strictly inside.
    fn slab_fiber_spanning(&self, a: &Scalar, b: &Scalar) -> IntervalSet {
        debug_assert!(a < b);
        let idx = match self.xs.binary_search(a) {
            Ok(k) => k,
            Err(0) => return IntervalSet::empty(),
            Err(k) => k - 1,
        };
        if idx + 1 >= self.xs.len() {
            return IntervalSet::empty();
        }
        debug_assert!(self.xs[idx] <= *a && *b <= self.xs[idx + 1]);
        self.slabs[idx].clone()
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        match self.xs.binary_search(&p.x) {
            Ok(i) => self.lines[i].contains(&p.y),
            Err(0) => false,
            Err(i) if i == self.xs.len() => false,
            Err(i) => self.slabs[i - 1].contains(&p.y),
        }
    }

    /// True when the whole axis-parallel segment lies in the region.
    pub fn contains_segment(&self, s: &AxisSegment) -> bool {
        if s.is_vertical() {
            let (lo, hi) = if s.a.y <= s.b.y {
                (&s.a.y, &s.b.y)
            } else {
                (&s.b.y, &s.a.y)
            };
            self.fiber_at(&s.a.x).contains_interval(lo, hi)
        } else {
            let (lo, hi) = if s.a.x <= s.b.x {
                (&s.a.x, &s.b.x)
            } else {
                (&s.b.x, &s.a.x)
            };
            self.contains_horizontal_span(lo, hi, &s.a.y, &s.a.y)
        }
    }

    /// True when the whole closed rectangle lies in the region.
    pub fn contains_rect(&self, r: &Rect) -> bool {
        self.contains_horizontal_span(&r.x_lo, &r.x_hi, &r.y_lo, &r.y_hi)
    }

    fn contains_horizontal_span(
        &self,
        x_lo: &Scalar,
        x_hi: &Scalar,
        y_lo: &Scalar,
        y_hi: &Scalar,
    ) -> bool {
        if self.xs.is_empty() || x_lo < &self.xs[0] || x_hi > self.xs.last().unwrap() {
            return false;
        }
        if x_lo == x_hi {
            return self.fiber_at(x_lo).contains_interval(y_lo, y_hi);
        }
        // Indices of the slabs whose open spans intersect (x_lo, x_hi).
        let start = match self.xs.binary_search(x_lo) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let mut i = start;
        while i + 1 < self.xs.len() && self.xs[i] < *x_hi {
            if self.xs[i + 1] > *x_lo && !self.slabs[i].contains_interval(y_lo, y_hi) {
                return false;
            }
            i += 1;
        }
        // Breakpoint lines inside [x_lo, x_hi] are supersets of the adjacent
        // slab fibers, except possibly at the span's endpoints.
        for j in [start, i] {
            if self.xs[j] >= *x_lo
                && self.xs[j] <= *x_hi
                && !self.lines[j].contains_interval(y_lo, y_hi)
            {
                return false;
            }
        }
        true
    }

    /// Region as a list of disjoint-interior rectangles (degenerate rects for
    /// measure-zero features).
    pub fn to_rects(&self) -> Vec<Rect> {
        let mut out = Vec::new();
        for (i, slab) in self.slabs.iter().enumerate() {
            for (lo, hi) in slab.intervals() {
                out.push(Rect::new(
                    self.xs[i].clone(),
                    self.xs[i + 1].clone(),
                    lo.clone(),
                    hi.clone(),
                ));
            }
        }
        for (i, line) in self.lines.iter().enumerate() {
            let mut neighbors = IntervalSet::empty();
            if i > 0 {
                neighbors = neighbors.union(&self.slabs[i - 1]);
            }
            if i < self.slabs.len() {
                neighbors = neighbors.union(&self.slabs[i]);
            }
            for (lo, hi) in line.subtract_closed(&neighbors).intervals() {
                out.push(Rect::new(
                    self.xs[i].clone(),
                    self.xs[i].clone(),
                    lo.clone(),
                    hi.clone(),
                ));
            }
        }
        out
    }

    pub fn area(&self) -> Scalar {
        let mut total = Scalar::zero();
        for (i, slab) in self.slabs.iter().enumerate() {
            total += (&self.xs[i + 1] - &self.xs[i]) * slab.measure();
        }
        total
    }

    pub fn breakpoints(&self) -> &[Scalar] {
        &self.xs
    }

    /// Boolean operation with closed-set semantics; `Difference` returns the
    /// closure of the open difference.
    pub fn boolean(op: BoolOp, a: &Region, b: &Region) -> Region {
        let mut xs: Vec<Scalar> = a.xs.iter().chain(b.xs.iter()).cloned().collect();
        xs.sort();
        xs.dedup();
        if xs.is_empty() {
            return Region::empty();
        }
        let lines: Vec<IntervalSet> = xs
            .iter()
            .map(|x| {
                let fa = a.fiber_at(x);
                let fb = b.fiber_at(x);
                match op {
                    BoolOp::Union => fa.union(&fb),
                    BoolOp::Intersect => fa.intersect(&fb),
                    BoolOp::Difference => fa.subtract_closed(&fb),
                }
            })
            .collect();
        let slabs: Vec<IntervalSet> = xs
            .windows(2)
            .map(|w| {
                let fa = a.slab_fiber_spanning(&w[0], &w[1]);
                let fb = b.slab_fiber_spanning(&w[0], &w[1]);
                match op {
                    BoolOp::Union => fa.union(&fb),
                    BoolOp::Intersect => fa.intersect(&fb),
                    BoolOp::Difference => fa.subtract_closed(&fb),
                }
            })
            .collect();
        let mut lines = lines;
        if matches!(op, BoolOp::Difference) {
            // Closure: breakpoint lines absorb the limits of adjacent slabs.
            for i in 0..xs.len() {
                if i > 0 {
                    lines[i] = lines[i].union(&slabs[i - 1]);
                }
                if i < slabs.len() {
                    lines[i] = lines[i].union(&slabs[i]);
                }
            }
        }
        let mut region = Region { xs, lines, slabs };
        region.canonicalize();
        region
    }

    pub fn union_with(&self, other: &Region) -> Region {
        Region::boolean(BoolOp::Union, self, other)
    }

    pub fn intersect_with(&self, other: &Region) -> Region {
        Region::boolean(BoolOp::Intersect, self, other)
    }

    pub fn difference_with(&self, other: &Region) -> Region {
        Region::boolean(BoolOp::Difference, self, other)
    }

    /// Minkowski sum with the closed square `[-r, r]^2`: every rectangle of
    /// the decomposition grows by `r` per side, then everything is unioned.
    pub fn dilate_by_square(&self, r: &Scalar) -> Region {
        assert!(!r.is_negative(), "dilation radius must be nonnegative");
        if r.is_zero() {
            return self.clone();
        }
        let rects: Vec<Rect> = self.to_rects().iter().map(|rc| rc.dilated(r)).collect();
        Region::from_rects(&rects)
    }

    /// `self` minus the union of the open interiors of the given rectangles.
    /// Degenerate free slivers between touching interiors are kept: this is
    /// the operation behind free-space erosion, where a corridor of width
    /// exactly 1 must survive as a zero-thickness strip.
    pub fn subtract_open_rects(&self, rects: &[Rect]) -> Region {
        let solid: Vec<&Rect> = rects.iter().filter(|r| !r.is_degenerate()).collect();
        let mut xs: Vec<Scalar> = self.xs.clone();
        for r in &solid {
            xs.push(r.x_lo.clone());
            xs.push(r.x_hi.clone());
        }
        xs.sort();
        xs.dedup();
        if xs.is_empty() {
            return Region::empty();
        }
        // Each rectangle's open interior is subtracted separately: merging
        // them first would swallow the pinch line between two rectangles that
        // touch, and that line is exactly the degenerate corridor we keep.
        let lines: Vec<IntervalSet> = xs
            .iter()
            .map(|x| {
                let mut fiber = self.fiber_at(x);
                for r in solid.iter().filter(|r| r.x_lo < *x && *x < r.x_hi) {
                    fiber = fiber
                        .subtract_open(&IntervalSet::single(r.y_lo.clone(), r.y_hi.clone()));
                }
                fiber
            })
            .collect();
        let slabs: Vec<IntervalSet> = xs
            .windows(2)
            .map(|w| {
                let mut fiber = self.slab_fiber_spanning(&w[0], &w[1]);
                for r in solid.iter().filter(|r| r.x_lo <= w[0] && w[1] <= r.x_hi) {
                    fiber = fiber
                        .subtract_open(&IntervalSet::single(r.y_lo.clone(), r.y_hi.clone()));
                }
                fiber
            })
            .collect();
        let mut region = Region { xs, lines, slabs };
        region.canonicalize();
        region
    }

    /// True when the straight segment from `p0` to `p1` (any slope) lies in
    /// the region. Axis-parallel segments defer to [`Self::contains_segment`];
    /// sloped segments are clipped against the slab decomposition, using the
    /// linearity of y(x) on each slab.
    pub fn contains_linear_motion(&self, p0: &Point, p1: &Point) -> bool {
        if p0.x == p1.x || p0.y == p1.y {
            let seg = AxisSegment {
                a: p0.clone(),
                b: p1.clone(),
            };
            return self.contains_segment(&seg);
        }
        if !self.contains_point(p0) || !self.contains_point(p1) {
            return false;
        }
        let (lo, hi) = if p0.x < p1.x { (p0, p1) } else { (p1, p0) };
        let slope = (&hi.y - &lo.y) / (&hi.x - &lo.x);
        let y_at = |x: &Scalar| -> Scalar { &lo.y + &(slope.clone() * (x - &lo.x)) };
        // Cut the x-range at region breakpoints; each piece lies in one slab.
        let mut cuts: Vec<Scalar> = vec![lo.x.clone(), hi.x.clone()];
        for x in &self.xs {
            if *x > lo.x && *x < hi.x {
                cuts.push(x.clone());
            }
        }
        cuts.sort();
        cuts.dedup();
        for w in cuts.windows(2) {
            let fiber = self.slab_fiber_spanning(&w[0], &w[1]);
            let (ya, yb) = (y_at(&w[0]), y_at(&w[1]));
            let (ylo, yhi) = if ya <= yb { (ya, yb) } else { (yb, ya) };
            if !fiber.contains_interval(&ylo, &yhi) {
                return false;
            }
        }
        true
    }

    /// Fiber of the region along the horizontal line at `y` (set of x values).
    pub fn horizontal_fiber(&self, y: &Scalar) -> IntervalSet {
        let mut raw = Vec::new();
        for (i, line) in self.lines.iter().enumerate() {
            if line.contains(y) {
                raw.push((self.xs[i].clone(), self.xs[i].clone()));
            }
        }
        for (i, slab) in self.slabs.iter().enumerate() {
            if slab.contains(y) {
                raw.push((self.xs[i].clone(), self.xs[i + 1].clone()));
            }
        }
        IntervalSet::from_intervals(raw)
    }

    /// Maximal vertical boundary segments, grouped per breakpoint line.
    pub fn vertical_boundary(&self) -> Vec<(Scalar, IntervalSet)> {
        let mut out = Vec::new();
        for (i, line) in self.lines.iter().enumerate() {
            let mut interior = if i > 0 {
                self.slabs[i - 1].clone()
            } else {
                IntervalSet::empty()
            };
            interior = if i < self.slabs.len() {
                interior.intersect(&self.slabs[i])
            } else {
                IntervalSet::empty()
            };
            let boundary = line.subtract_open(&interior);
            if !boundary.is_empty() {
                out.push((self.xs[i].clone(), boundary));
            }
        }
        out
    }

    /// All distinct y-endpoints appearing in any fiber. Superset of the
    /// y-coordinates of horizontal boundary edges.
    pub fn fiber_endpoint_ys(&self) -> Vec<Scalar> {
        let mut ys: Vec<Scalar> = Vec::new();
        for set in self.lines.iter().chain(self.slabs.iter()) {
            ys.extend(set.endpoints().cloned());
        }
        ys.sort();
        ys.dedup();
        ys
    }

    /// Region mirrored across the diagonal (x and y swapped).
    pub fn transpose(&self) -> Region {
        let rects: Vec<Rect> = self
            .to_rects()
            .into_iter()
            .map(|r| Rect::new(r.y_lo, r.y_hi, r.x_lo, r.x_hi))
            .collect();
        Region::from_rects(&rects)
    }

    pub fn bounding_box(&self) -> Option<Rect> {
        if self.is_empty() {
            return None;
        }
        let mut y_lo: Option<Scalar> = None;
        let mut y_hi: Option<Scalar> = None;
        for set in self.lines.iter().chain(self.slabs.iter()) {
            for (lo, hi) in set.intervals() {
                if y_lo.as_ref().map_or(true, |v| lo < v) {
                    y_lo = Some(lo.clone());
                }
                if y_hi.as_ref().map_or(true, |v| hi > v) {
                    y_hi = Some(hi.clone());
                }
            }
        }
        Some(Rect::new(
            self.xs[0].clone(),
            self.xs.last().unwrap().clone(),
            y_lo.unwrap(),
            y_hi.unwrap(),
        ))
    }
}
