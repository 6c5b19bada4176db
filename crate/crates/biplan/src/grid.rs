//! The canonical grid: axis-parallel lines at distances 0, 1, 2 from the
//! free-space boundary edges and from the four terminal points, and the grid
//! graph of their arrangement restricted to the free space.

use std::collections::HashMap;

use serde::Serialize;

use crate::freespace::FreeSpace;
use crate::geometry::{AxisSegment, Point};
use crate::scalar::Scalar;

/// One family of grid lines with the minimum offset level each line carries.
#[derive(Clone, Debug, Default, Serialize)]
pub struct LineFamily {
    /// Sorted, deduplicated coordinates.
    pub coords: Vec<Scalar>,
    /// Minimum level in {0, 1, 2, ...} per coordinate, parallel to `coords`.
    pub levels: Vec<u8>,
}

impl LineFamily {
    fn from_pairs(mut pairs: Vec<(Scalar, u8)>) -> Self {
        pairs.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut coords = Vec::new();
        let mut levels: Vec<u8> = Vec::new();
        for (c, l) in pairs {
            if coords.last() == Some(&c) {
                continue; // first occurrence has the minimum level
            }
            coords.push(c);
            levels.push(l);
        }
        LineFamily { coords, levels }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

/// Horizontal and vertical grid lines.
#[derive(Clone, Debug, Default, Serialize)]
pub struct GridLines {
    /// Lines y = c (seeded by horizontal boundary edges and terminal ys).
    pub horizontal: LineFamily,
    /// Lines x = c.
    pub vertical: LineFamily,
}

/// Offsets used for the canonical construction: distance i on both sides for
/// i in 0..=max_level.
fn offsets(max_level: u8) -> Vec<(Scalar, u8)> {
    let mut out = vec![(Scalar::zero(), 0)];
    for i in 1..=max_level {
        out.push((Scalar::from_int(i as i64), i));
        out.push((Scalar::from_int(-(i as i64)), i));
    }
    out
}

/// Computes the grid lines for the given free space and terminal points
/// (the four start/goal centers; duplicates are fine).
pub fn compute_ilines(f: &FreeSpace, specials: &[Point]) -> GridLines {
    compute_ilines_leveled(f, specials, 2, false)
}

/// Generalized line construction: levels up to `max_level`, optionally with
/// midpoints between consecutive lines inserted (used by the refinement
/// oracle; the planner always uses `max_level = 2` without midpoints).
pub fn compute_ilines_leveled(
    f: &FreeSpace,
    specials: &[Point],
    max_level: u8,
    midpoints: bool,
) -> GridLines {
    let offs = offsets(max_level);
    let mut hseeds: Vec<Scalar> = f
        .horizontal_edges()
        .iter()
        .map(|e| e.a.y.clone())
        .collect();
    hseeds.extend(specials.iter().map(|p| p.y.clone()));
    let mut vseeds: Vec<Scalar> = f.vertical_edges().iter().map(|e| e.a.x.clone()).collect();
    vseeds.extend(specials.iter().map(|p| p.x.clone()));

    let expand = |seeds: &[Scalar]| -> LineFamily {
        let mut pairs = Vec::with_capacity(seeds.len() * offs.len());
        for s in seeds {
            for (d, lvl) in &offs {
                pairs.push((s + d, *lvl));
            }
        }
        let mut fam = LineFamily::from_pairs(pairs);
        if midpoints {
            let mut extra = Vec::new();
            for w in fam.coords.windows(2) {
                extra.push((Scalar::mid(&w[0], &w[1]), max_level));
            }
            let mut pairs: Vec<(Scalar, u8)> = fam
                .coords
                .iter()
                .cloned()
                .zip(fam.levels.iter().cloned())
                .collect();
            pairs.extend(extra);
            fam = LineFamily::from_pairs(pairs);
        }
        fam
    };

    GridLines {
        horizontal: expand(&hseeds),
        vertical: expand(&vseeds),
    }
}

/// Outcome of a grid point lookup.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Located {
    Index(u32),
    NotOnGrid,
}

/// The grid graph: arrangement vertices inside the free space with
/// 4-neighborhood adjacency along grid lines.
#[derive(Clone, Debug)]
pub struct GridGraph {
    points: Vec<Point>,
    /// Neighbor indices in order [left, right, down, up]; `u32::MAX` = none.
    neighbors: Vec<[u32; 4]>,
    /// Edge lengths parallel to `neighbors` (zero where there is none).
    weights: Vec<[Scalar; 4]>,
    index_of: HashMap<Point, u32>,
}

pub const NO_NEIGHBOR: u32 = u32::MAX;

pub const LEFT: usize = 0;
pub const RIGHT: usize = 1;
pub const DOWN: usize = 2;
pub const UP: usize = 3;

impl GridGraph {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: u32) -> &Point {
        &self.points[i as usize]
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn neighbors(&self, i: u32) -> impl Iterator<Item = u32> + '_ {
        self.neighbors[i as usize]
            .iter()
            .copied()
            .filter(|&n| n != NO_NEIGHBOR)
    }

    /// Neighbors with precomputed edge lengths.
    pub fn neighbors_with_weights(&self, i: u32) -> impl Iterator<Item = (u32, &Scalar)> + '_ {
        self.neighbors[i as usize]
            .iter()
            .zip(self.weights[i as usize].iter())
            .filter(|(&n, _)| n != NO_NEIGHBOR)
            .map(|(&n, w)| (n, w))
    }

    pub fn neighbor_array(&self, i: u32) -> &[u32; 4] {
        &self.neighbors[i as usize]
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors
            .iter()
            .map(|n| n.iter().filter(|&&v| v != NO_NEIGHBOR).count())
            .sum::<usize>()
            / 2
    }

    /// Exact-match lookup; scalars compare in lowest terms, so non-canonical
    /// rational inputs still locate their grid point.
    pub fn locate(&self, p: &Point) -> Located {
        match self.index_of.get(p) {
            Some(&i) => Located::Index(i),
            None => Located::NotOnGrid,
        }
    }
}

/// Builds the grid graph: intersections of the line families that lie in the
/// free space, with edges between consecutive intersections along a line
/// whenever the connecting segment stays in the free space.
pub fn build_grid_graph(f: &FreeSpace, lines: &GridLines) -> GridGraph {
    let xs = &lines.vertical.coords;
    let ys = &lines.horizontal.coords;
    let mut points = Vec::new();
    let mut index_of = HashMap::new();
    // Column-major cell index for (xi, yi) -> point index.
    let mut cell: Vec<Vec<Option<u32>>> = vec![vec![None; ys.len()]; xs.len()];
    for (xi, x) in xs.iter().enumerate() {
        let fiber = f.region().fiber_at(x);
        if fiber.is_empty() {
            continue;
        }
        for (yi, y) in ys.iter().enumerate() {
            if fiber.contains(y) {
                let p = Point::new(x.clone(), y.clone());
                let id = points.len() as u32;
                points.push(p.clone());
                index_of.insert(p, id);
                cell[xi][yi] = Some(id);
            }
        }
    }
    let mut neighbors = vec![[NO_NEIGHBOR; 4]; points.len()];
    let mut weights = vec![
        [
            Scalar::zero(),
            Scalar::zero(),
            Scalar::zero(),
            Scalar::zero(),
        ];
        points.len()
    ];
    // Vertical adjacency: consecutive points in a column.
    for (xi, x) in xs.iter().enumerate() {
        let mut prev: Option<(usize, u32)> = None;
        for (yi, _y) in ys.iter().enumerate() {
            let Some(id) = cell[xi][yi] else { continue };
            if let Some((pyi, pid)) = prev {
                let seg = AxisSegment::new(
                    Point::new(x.clone(), ys[pyi].clone()),
                    Point::new(x.clone(), ys[yi].clone()),
                )
                .expect("vertical");
                if f.segment_in_free(&seg) {
                    let w = seg.length();
                    neighbors[pid as usize][UP] = id;
                    neighbors[id as usize][DOWN] = pid;
                    weights[pid as usize][UP] = w.clone();
                    weights[id as usize][DOWN] = w;
                }
            }
            prev = Some((yi, id));
        }
    }
    // Horizontal adjacency: consecutive points in a row.
    for (yi, y) in ys.iter().enumerate() {
        let mut prev: Option<(usize, u32)> = None;
        for (xi, _x) in xs.iter().enumerate() {
            let Some(id) = cell[xi][yi] else { continue };
            if let Some((pxi, pid)) = prev {
                let seg = AxisSegment::new(
                    Point::new(xs[pxi].clone(), y.clone()),
                    Point::new(xs[xi].clone(), y.clone()),
                )
                .expect("horizontal");
                if f.segment_in_free(&seg) {
                    let w = seg.length();
                    neighbors[pid as usize][RIGHT] = id;
                    neighbors[id as usize][LEFT] = pid;
                    weights[pid as usize][RIGHT] = w.clone();
                    weights[id as usize][LEFT] = w;
                }
            }
            prev = Some((xi, id));
        }
    }
    GridGraph {
        points,
        neighbors,
        weights,
        index_of,
    }
}

/// Integer re-encoding of a grid graph: every coordinate multiplied by the
/// least common denominator. Searches run on plain integers and reconstruct
/// the exact rational cost afterwards; nothing is approximated.
#[derive(Clone, Debug)]
pub struct IntegerView {
    /// The common scale L (all scaled values are coordinate × L).
    pub scale: Scalar,
    /// L itself; the ℓ∞ separation threshold in scaled units.
    pub unit: i64,
    /// Scaled point coordinates, parallel to the graph's points.
    pub pts: Vec<(i64, i64)>,
    /// Scaled edge lengths, parallel to the neighbor slots.
    pub weights: Vec<[u64; 4]>,
}

impl GridGraph {
    /// Attempts the integer re-encoding; `None` when the common denominator
    /// or the scaled coordinates would not comfortably fit machine integers.
    pub fn integer_view(&self) -> Option<IntegerView> {
        use num_integer::Integer;
        let mut lcm = num_bigint::BigInt::from(1);
        for p in &self.points {
            lcm = lcm.lcm(p.x.denom());
            lcm = lcm.lcm(p.y.denom());
            if lcm.bits() > 24 {
                return None;
            }
        }
        let unit = i64::try_from(&lcm).ok()?;
        let scale = Scalar::from_bigint(lcm);
        let conv = |v: &Scalar| -> Option<i64> {
            let s = v * &scale;
            debug_assert!(s.is_integer());
            let n = i64::try_from(s.numer()).ok()?;
            (n.unsigned_abs() <= (1 << 40)).then_some(n)
        };
        let mut pts = Vec::with_capacity(self.points.len());
        for p in &self.points {
            pts.push((conv(&p.x)?, conv(&p.y)?));
        }
        let mut weights = Vec::with_capacity(self.points.len());
        for (i, nbrs) in self.neighbors.iter().enumerate() {
            let mut row = [0u64; 4];
            for (slot, &n) in nbrs.iter().enumerate() {
                if n != NO_NEIGHBOR {
                    let (ax, ay) = pts[i];
                    let (bx, by) = pts[n as usize];
                    row[slot] = ((ax - bx).abs() + (ay - by).abs()) as u64;
                }
            }
            weights.push(row);
        }
        Some(IntegerView {
            scale,
            unit,
            pts,
            weights,
        })
    }
}

/// JSON-friendly debug dump of lines and graph.
#[derive(Serialize)]
pub struct GridDump {
    pub horizontal: Vec<String>,
    pub vertical: Vec<String>,
    pub points: Vec<[String; 2]>,
    pub edges: Vec<[u32; 2]>,
}

pub fn dump_grid(lines: &GridLines, g: &GridGraph) -> GridDump {
    let mut edges = Vec::new();
    for i in 0..g.len() as u32 {
        for n in g.neighbors(i) {
            if i < n {
                edges.push([i, n]);
            }
        }
    }
    GridDump {
        horizontal: lines.horizontal.coords.iter().map(|c| c.to_string()).collect(),
        vertical: lines.vertical.coords.iter().map(|c| c.to_string()).collect(),
        points: g
            .points()
            .iter()
            .map(|p| [p.x.to_string(), p.y.to_string()])
            .collect(),
        edges,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freespace::{compute_free_space, Workspace};
    use crate::geometry::Rect;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn sh(n: i64) -> Scalar {
        Scalar::ratio(n, 2)
    }

    #[test]
    fn iline_levels_for_eroded_rectangle() {
        // F = [1/2,7/2] x [1/2,5/2]; terminals on existing lines.
        let w = Workspace::rectangle(&Rect::of_ints(0, 4, 0, 3));
        let f = compute_free_space(&w).unwrap();
        let specials = vec![
            Point::new(sh(1), sh(1)),
            Point::new(sh(7), sh(1)),
            Point::new(sh(1), sh(5)),
            Point::new(sh(7), sh(5)),
        ];
        let lines = compute_ilines(&f, &specials);
        let level_of = |c: Scalar| -> Option<u8> {
            lines
                .horizontal
                .coords
                .iter()
                .position(|v| *v == c)
                .map(|i| lines.horizontal.levels[i])
        };
        assert_eq!(level_of(sh(1)), Some(0));
        assert_eq!(level_of(sh(5)), Some(0));
        assert_eq!(level_of(sh(-1)), Some(1));
        assert_eq!(level_of(sh(3)), Some(1));
        assert_eq!(level_of(sh(7)), Some(1));
        assert_eq!(level_of(sh(-3)), Some(2));
        assert_eq!(level_of(sh(9)), Some(2));
    }

    #[test]
    fn ilines_from_special_point_only() {
        let w = Workspace::rectangle(&Rect::new(
            Scalar::zero(),
            Scalar::ratio(3, 4),
            Scalar::zero(),
            Scalar::one(),
        ));
        let f = compute_free_space(&w).unwrap();
        assert!(f.is_empty());
        let lines = compute_ilines(&f, &[Point::new(s(0), s(0))]);
        let hs: Vec<Scalar> = lines.horizontal.coords.clone();
        assert_eq!(hs, vec![s(-2), s(-1), s(0), s(1), s(2)]);
    }

    #[test]
    fn two_edge_levels_superset() {
        // F with horizontal edges at y = 0 and y = 5 must produce all shifts.
        let w = Workspace::rectangle(&Rect::new(
            -Scalar::half(),
            Scalar::ratio(21, 2),
            -Scalar::half(),
            Scalar::ratio(11, 2),
        ));
        let f = compute_free_space(&w).unwrap();
        let lines = compute_ilines(&f, &[]);
        for v in [-2i64, -1, 0, 1, 2, 3, 4, 5, 6, 7] {
            assert!(
                lines.horizontal.coords.contains(&s(v)),
                "missing horizontal line at {v}"
            );
        }
    }

    #[test]
    fn grid_counts_on_eroded_rectangle() {
        // Restrict to the in-F line subset from the module example: 3
        // horizontal x 4 vertical lines inside F gives 12 points, 17 edges.
        let w = Workspace::rectangle(&Rect::of_ints(0, 4, 0, 3));
        let f = compute_free_space(&w).unwrap();
        let lines = GridLines {
            horizontal: LineFamily {
                coords: vec![sh(1), sh(3), sh(5)],
                levels: vec![0, 0, 0],
            },
            vertical: LineFamily {
                coords: vec![sh(1), sh(3), sh(5), sh(7)],
                levels: vec![0, 0, 0, 0],
            },
        };
        let g = build_grid_graph(&f, &lines);
        assert_eq!(g.len(), 12);
        assert_eq!(g.edge_count(), 17);
        // Independent brute-force count over the same line sets.
        let mut expect_points = 0;
        for x in &lines.vertical.coords {
            for y in &lines.horizontal.coords {
                if f.contains_point(&Point::new(x.clone(), y.clone())) {
                    expect_points += 1;
                }
            }
        }
        assert_eq!(g.len(), expect_points);
    }

    #[test]
    fn empty_free_space_gives_empty_grid() {
        let w = Workspace::rectangle(&Rect::new(
            Scalar::zero(),
            Scalar::ratio(3, 4),
            Scalar::zero(),
            Scalar::one(),
        ));
        let f = compute_free_space(&w).unwrap();
        let lines = compute_ilines(&f, &[Point::new(s(0), s(0))]);
        let g = build_grid_graph(&f, &lines);
        assert!(g.is_empty());
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn adjacency_does_not_bridge_components() {
        use crate::geometry::RectilinearPolygon;
        // Two chambers connected by a too-narrow neck: F disconnected.
        let ring = vec![
            Point::new(s(0), s(0)),
            Point::new(s(3), s(0)),
            Point::new(s(3), s(1)),
            Point::new(s(5), s(1)),
            Point::new(s(5), s(0)),
            Point::new(s(8), s(0)),
            Point::new(s(8), s(3)),
            Point::new(s(5), s(3)),
            Point::new(s(5), sh(3)),
            Point::new(s(3), sh(3)),
            Point::new(s(3), s(3)),
            Point::new(s(0), s(3)),
        ];
        let w = Workspace::new(RectilinearPolygon::new(ring, vec![]).unwrap()).unwrap();
        let f = compute_free_space(&w).unwrap();
        let lines = compute_ilines(&f, &[]);
        let g = build_grid_graph(&f, &lines);
        // No horizontal edge spans the blocked x-range (3,5) at any height.
        for i in 0..g.len() as u32 {
            for n in g.neighbors(i) {
                let a = g.point(i);
                let b = g.point(n);
                assert!(
                    !(a.x < s(4) && b.x > s(4) || (b.x < s(4) && a.x > s(4))),
                    "edge bridges the gap: {a:?} - {b:?}"
                );
            }
        }
    }

    #[test]
    fn locate_handles_non_canonical_rationals() {
        let w = Workspace::rectangle(&Rect::of_ints(0, 4, 0, 3));
        let f = compute_free_space(&w).unwrap();
        let specials = vec![Point::new(s(1), s(1))];
        let lines = compute_ilines(&f, &specials);
        let g = build_grid_graph(&f, &lines);
        assert!(matches!(
            g.locate(&Point::new(s(1), s(1))),
            Located::Index(_)
        ));
        assert_eq!(
            g.locate(&Point::new(Scalar::ratio(1, 3), Scalar::ratio(1, 3))),
            Located::NotOnGrid
        );
        assert!(matches!(
            g.locate(&Point::new(Scalar::ratio(2, 2), Scalar::ratio(3, 3))),
            Located::Index(_)
        ));
    }

    #[test]
    fn boundary_vertices_are_grid_points() {
        let w = Workspace::rectangle(&Rect::of_ints(0, 4, 0, 3));
        let f = compute_free_space(&w).unwrap();
        let lines = compute_ilines(&f, &[]);
        let g = build_grid_graph(&f, &lines);
        for corner in [
            Point::new(sh(1), sh(1)),
            Point::new(sh(7), sh(1)),
            Point::new(sh(1), sh(5)),
            Point::new(sh(7), sh(5)),
        ] {
            assert!(matches!(g.locate(&corner), Located::Index(_)));
        }
    }
}
