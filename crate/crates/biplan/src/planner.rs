//! Shortest-path search over the two-robot configuration graph.
//!
//! Nodes are pairs of grid points at ℓ∞ distance ≥ 1; an edge moves exactly
//! one robot along one grid edge while the other is parked, weighted by the
//! ℓ1 length of the move. The graph is never materialized: Dijkstra expands
//! neighbors lazily, with exact rational keys and deterministic tie-breaking
//! on the pair indices.

use std::cmp::Reverse;
use std::collections::hash_map::Entry;
use std::collections::{BinaryHeap, HashMap};

use crate::error::PlanError;
use crate::freespace::{Config, FreeSpace};
use crate::geometry::{linf_dist, AxisSegment, Point};
use crate::grid::{build_grid_graph, compute_ilines, GridGraph, IntegerView, Located};
use crate::plan::{DecoupledPlan, Move, Robot};
use crate::scalar::Scalar;

/// A node of the configuration graph: grid-point indices of both robots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConfigNode {
    pub ia: u32,
    pub ib: u32,
}

impl ConfigNode {
    fn key(self) -> u64 {
        ((self.ia as u64) << 32) | self.ib as u64
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchStatus {
    Optimal,
    Infeasible,
}

/// Result of a configuration-graph search.
#[derive(Clone, Debug)]
pub struct SearchResult {
    pub status: SearchStatus,
    /// Exact minimal cost; zero when infeasible.
    pub cost: Scalar,
    /// Node path from start to goal; empty when infeasible.
    pub node_path: Vec<ConfigNode>,
}

impl SearchResult {
    pub fn is_optimal(&self) -> bool {
        self.status == SearchStatus::Optimal
    }
}

/// Exact ℓ∞ distance from a point to an axis-parallel segment.
pub fn linf_point_to_segment(q: &Point, seg: &AxisSegment) -> Scalar {
    fn axis_dist(v: &Scalar, lo: &Scalar, hi: &Scalar) -> Scalar {
        if v < lo {
            lo - v
        } else if v > hi {
            v - hi
        } else {
            Scalar::zero()
        }
    }
    if seg.is_horizontal() {
        let (lo, hi) = if seg.a.x <= seg.b.x {
            (&seg.a.x, &seg.b.x)
        } else {
            (&seg.b.x, &seg.a.x)
        };
        axis_dist(&q.x, lo, hi).max((&q.y - &seg.a.y).abs())
    } else {
        let (lo, hi) = if seg.a.y <= seg.b.y {
            (&seg.a.y, &seg.b.y)
        } else {
            (&seg.b.y, &seg.a.y)
        };
        axis_dist(&q.y, lo, hi).max((&q.x - &seg.a.x).abs())
    }
}

/// All configuration-graph neighbors of `u` with their edge weights: one
/// robot steps to an adjacent grid point, the new pair keeps ℓ∞ ≥ 1.
pub fn config_neighbors(g: &GridGraph, u: ConfigNode) -> Vec<(ConfigNode, Scalar)> {
    let mut out = Vec::with_capacity(8);
    let pa = g.point(u.ia);
    let pb = g.point(u.ib);
    for (ja, w) in g.neighbors_with_weights(u.ia) {
        let qa = g.point(ja);
        if linf_dist(qa, pb) >= Scalar::one() {
            debug_assert!(
                {
                    let seg = AxisSegment::new(pa.clone(), qa.clone()).unwrap();
                    linf_point_to_segment(pb, &seg) >= Scalar::one()
                },
                "parked robot conflicts with the interior of a grid move"
            );
            out.push((ConfigNode { ia: ja, ib: u.ib }, w.clone()));
        }
    }
    for (jb, w) in g.neighbors_with_weights(u.ib) {
        let qb = g.point(jb);
        if linf_dist(pa, qb) >= Scalar::one() {
            debug_assert!(
                {
                    let seg = AxisSegment::new(pb.clone(), qb.clone()).unwrap();
                    linf_point_to_segment(pa, &seg) >= Scalar::one()
                },
                "parked robot conflicts with the interior of a grid move"
            );
            out.push((ConfigNode { ia: u.ia, ib: jb }, w.clone()));
        }
    }
    out
}

/// Dijkstra (or A* when `heuristic` is set) from `s` to `t` over the implicit
/// configuration graph. Infeasibility is reported by queue exhaustion.
///
/// When every grid coordinate fits a common machine-integer scale the search
/// runs on scaled integers; this is a re-encoding of the same exact
/// arithmetic, and the cost is reconstructed as an exact rational.
pub fn shortest_plan(
    f: &FreeSpace,
    g: &GridGraph,
    s: &Config,
    t: &Config,
    heuristic: bool,
) -> Result<SearchResult, PlanError> {
    if !f.is_free_config(s) || !f.is_free_config(t) {
        return Err(PlanError::StartOrGoalNotFree);
    }
    let locate = |p: &Point| -> Result<u32, PlanError> {
        match g.locate(p) {
            Located::Index(i) => Ok(i),
            Located::NotOnGrid => Err(PlanError::StartOrGoalNotOnGrid),
        }
    };
    let start = ConfigNode {
        ia: locate(&s.a)?,
        ib: locate(&s.b)?,
    };
    let goal = ConfigNode {
        ia: locate(&t.a)?,
        ib: locate(&t.b)?,
    };
    if let Some(iv) = g.integer_view() {
        return Ok(shortest_plan_int(g, &iv, start, goal, heuristic));
    }
    shortest_plan_rational(g, start, goal, heuristic)
}

fn shortest_plan_rational(
    g: &GridGraph,
    start: ConfigNode,
    goal: ConfigNode,
    heuristic: bool,
) -> Result<SearchResult, PlanError> {
    // Optional admissible potential: sum of single-robot grid distances to
    // the two targets, each ignoring the other robot.
    let potentials = if heuristic {
        Some((
            grid_distances_from(g, goal.ia),
            grid_distances_from(g, goal.ib),
        ))
    } else {
        None
    };
    let h = |n: ConfigNode| -> Option<Scalar> {
        match &potentials {
            None => Some(Scalar::zero()),
            Some((da, db)) => match (&da[n.ia as usize], &db[n.ib as usize]) {
                (Some(x), Some(y)) => Some(x + y),
                _ => None,
            },
        }
    };

    let mut dist: HashMap<u64, Scalar> = HashMap::new();
    let mut pred: HashMap<u64, ConfigNode> = HashMap::new();
    let mut heap: BinaryHeap<Reverse<(Scalar, u32, u32)>> = BinaryHeap::new();

    if let Some(h0) = h(start) {
        dist.insert(start.key(), Scalar::zero());
        heap.push(Reverse((h0, start.ia, start.ib)));
    }

    while let Some(Reverse((prio, ia, ib))) = heap.pop() {
        let u = ConfigNode { ia, ib };
        let du = dist
            .get(&u.key())
            .expect("queued node has a distance")
            .clone();
        let hu = h(u).expect("queued node has a finite potential");
        if prio != &du + &hu {
            continue; // stale entry
        }
        if u == goal {
            let mut path = vec![u];
            let mut cur = u;
            while cur != start {
                cur = pred[&cur.key()];
                path.push(cur);
            }
            path.reverse();
            return Ok(SearchResult {
                status: SearchStatus::Optimal,
                cost: du,
                node_path: path,
            });
        }
        for (v, w) in config_neighbors(g, u) {
            let Some(hv) = h(v) else { continue };
            let nd = &du + &w;
            let better = match dist.entry(v.key()) {
                Entry::Occupied(mut e) => {
                    if nd < *e.get() {
                        e.insert(nd.clone());
                        true
                    } else {
                        false
                    }
                }
                Entry::Vacant(e) => {
                    e.insert(nd.clone());
                    true
                }
            };
            if better {
                pred.insert(v.key(), u);
                heap.push(Reverse((&nd + &hv, v.ia, v.ib)));
            }
        }
    }

    Ok(SearchResult {
        status: SearchStatus::Infeasible,
        cost: Scalar::zero(),
        node_path: vec![],
    })
}

/// Fast hash state for u64 node keys (splitmix64 finalizer).
#[derive(Default, Clone)]
struct Mix64(u64);

impl std::hash::Hasher for Mix64 {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0 ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3);
        }
    }

    fn write_u64(&mut self, v: u64) {
        let mut x = v.wrapping_add(0x9E37_79B9_7F4A_7C15);
        x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        self.0 = x ^ (x >> 31);
    }
}

type FastState = std::hash::BuildHasherDefault<Mix64>;

const UNREACHED: u64 = u64::MAX;

/// Distance and predecessor storage for the integer search: flat arrays for
/// modest graphs, hashed otherwise.
enum IntStore {
    Flat { n: usize, dist: Vec<u64>, pred: Vec<u32> },
    Map {
        dist: HashMap<u64, u64, FastState>,
        pred: HashMap<u64, u64, FastState>,
    },
}

impl IntStore {
    fn new(points: usize) -> IntStore {
        let pairs = points.saturating_mul(points);
        if pairs <= 9_000_000 {
            IntStore::Flat {
                n: points,
                dist: vec![UNREACHED; pairs],
                pred: vec![u32::MAX; pairs],
            }
        } else {
            IntStore::Map {
                dist: HashMap::default(),
                pred: HashMap::default(),
            }
        }
    }

    #[inline]
    fn dist(&self, u: ConfigNode) -> u64 {
        match self {
            IntStore::Flat { n, dist, .. } => dist[u.ia as usize * n + u.ib as usize],
            IntStore::Map { dist, .. } => dist.get(&u.key()).copied().unwrap_or(UNREACHED),
        }
    }

    #[inline]
    fn improve(&mut self, u: ConfigNode, d: u64, from: ConfigNode) -> bool {
        match self {
            IntStore::Flat { n, dist, pred } => {
                let k = u.ia as usize * *n + u.ib as usize;
                if d < dist[k] {
                    dist[k] = d;
                    pred[k] = (from.ia as usize * *n + from.ib as usize) as u32;
                    true
                } else {
                    false
                }
            }
            IntStore::Map { dist, pred } => {
                let cur = dist.entry(u.key()).or_insert(UNREACHED);
                if d < *cur {
                    *cur = d;
                    pred.insert(u.key(), from.key());
                    true
                } else {
                    false
                }
            }
        }
    }

    fn predecessor(&self, u: ConfigNode) -> ConfigNode {
        match self {
            IntStore::Flat { n, pred, .. } => {
                let p = pred[u.ia as usize * *n + u.ib as usize] as usize;
                ConfigNode {
                    ia: (p / *n) as u32,
                    ib: (p % *n) as u32,
                }
            }
            IntStore::Map { pred, .. } => {
                let p = pred[&u.key()];
                ConfigNode {
                    ia: (p >> 32) as u32,
                    ib: p as u32,
                }
            }
        }
    }
}

fn shortest_plan_int(
    g: &GridGraph,
    iv: &IntegerView,
    start: ConfigNode,
    goal: ConfigNode,
    heuristic: bool,
) -> SearchResult {
    let potentials = heuristic.then(|| {
        (
            grid_distances_int(g, iv, goal.ia),
            grid_distances_int(g, iv, goal.ib),
        )
    });
    let h = |n: ConfigNode| -> Option<u64> {
        match &potentials {
            None => Some(0),
            Some((da, db)) => {
                let (x, y) = (da[n.ia as usize], db[n.ib as usize]);
                (x != UNREACHED && y != UNREACHED).then(|| x + y)
            }
        }
    };
    let mut store = IntStore::new(g.len());
    let mut heap: BinaryHeap<Reverse<(u64, u32, u32)>> = BinaryHeap::new();
    if let Some(h0) = h(start) {
        store.improve(start, 0, start);
        heap.push(Reverse((h0, start.ia, start.ib)));
    }
    let unit = iv.unit;
    let sep_ok = |a: u32, b: u32| -> bool {
        let (ax, ay) = iv.pts[a as usize];
        let (bx, by) = iv.pts[b as usize];
        (ax - bx).abs().max((ay - by).abs()) >= unit
    };
    while let Some(Reverse((prio, ia, ib))) = heap.pop() {
        let u = ConfigNode { ia, ib };
        let du = store.dist(u);
        debug_assert_ne!(du, UNREACHED);
        let hu = h(u).expect("queued node has a finite potential");
        if prio != du + hu {
            continue; // stale entry
        }
        if u == goal {
            let mut path = vec![u];
            let mut cur = u;
            while cur != start {
                cur = store.predecessor(cur);
                path.push(cur);
            }
            path.reverse();
            return SearchResult {
                status: SearchStatus::Optimal,
                cost: Scalar::big_ratio(du.into(), iv.scale.numer().clone()),
                node_path: path,
            };
        }
        // Robot A steps; then robot B. Slot order fixes tie-breaking.
        for (moved_is_a, fixed, moving) in [(true, u.ib, u.ia), (false, u.ia, u.ib)] {
            let nbrs = g.neighbor_array(moving);
            let wts = &iv.weights[moving as usize];
            for slot in 0..4 {
                let j = nbrs[slot];
                if j == crate::grid::NO_NEIGHBOR {
                    continue;
                }
                let ok = if moved_is_a {
                    sep_ok(j, fixed)
                } else {
                    sep_ok(fixed, j)
                };
                if !ok {
                    continue;
                }
                debug_assert!(
                    int_segment_separation_ok(iv, moving, j, fixed),
                    "parked robot conflicts with the interior of a grid move"
                );
                let v = if moved_is_a {
                    ConfigNode { ia: j, ib: fixed }
                } else {
                    ConfigNode { ia: fixed, ib: j }
                };
                let Some(hv) = h(v) else { continue };
                let nd = du + wts[slot];
                if store.improve(v, nd, u) {
                    heap.push(Reverse((nd + hv, v.ia, v.ib)));
                }
            }
        }
    }
    SearchResult {
        status: SearchStatus::Infeasible,
        cost: Scalar::zero(),
        node_path: vec![],
    }
}

/// Integer counterpart of the free-segment lemma check: the parked point's
/// ℓ∞ distance to the whole moved edge stays at least one robot width.
fn int_segment_separation_ok(iv: &IntegerView, from: u32, to: u32, parked: u32) -> bool {
    let (ax, ay) = iv.pts[from as usize];
    let (bx, by) = iv.pts[to as usize];
    let (px, py) = iv.pts[parked as usize];
    let axis = |v: i64, lo: i64, hi: i64| -> i64 {
        if v < lo {
            lo - v
        } else if v > hi {
            v - hi
        } else {
            0
        }
    };
    let dx = axis(px, ax.min(bx), ax.max(bx));
    let dy = axis(py, ay.min(by), ay.max(by));
    dx.max(dy) >= iv.unit
}

/// Single-robot integer Dijkstra; `UNREACHED` marks unreachable points.
pub(crate) fn grid_distances_int(g: &GridGraph, iv: &IntegerView, src: u32) -> Vec<u64> {
    let mut dist = vec![UNREACHED; g.len()];
    let mut heap: BinaryHeap<Reverse<(u64, u32)>> = BinaryHeap::new();
    dist[src as usize] = 0;
    heap.push(Reverse((0, src)));
    while let Some(Reverse((d, i))) = heap.pop() {
        if dist[i as usize] != d {
            continue;
        }
        let nbrs = g.neighbor_array(i);
        let wts = &iv.weights[i as usize];
        for slot in 0..4 {
            let j = nbrs[slot];
            if j == crate::grid::NO_NEIGHBOR {
                continue;
            }
            let nd = d + wts[slot];
            if nd < dist[j as usize] {
                dist[j as usize] = nd;
                heap.push(Reverse((nd, j)));
            }
        }
    }
    dist
}

/// Single-robot Dijkstra over the grid from `src`; `None` = unreachable.
pub fn grid_distances_from(g: &GridGraph, src: u32) -> Vec<Option<Scalar>> {
    let mut dist: Vec<Option<Scalar>> = vec![None; g.len()];
    let mut heap: BinaryHeap<Reverse<(Scalar, u32)>> = BinaryHeap::new();
    dist[src as usize] = Some(Scalar::zero());
    heap.push(Reverse((Scalar::zero(), src)));
    while let Some(Reverse((d, i))) = heap.pop() {
        match &dist[i as usize] {
            Some(cur) if *cur == d => {}
            _ => continue,
        }
        for (j, w) in g.neighbors_with_weights(i) {
            let nd = &d + w;
            if dist[j as usize].as_ref().map_or(true, |old| nd < *old) {
                dist[j as usize] = Some(nd.clone());
                heap.push(Reverse((nd, j)));
            }
        }
    }
    dist
}

/// Converts a search result into a decoupled plan: consecutive steps of the
/// same robot merge into one move, collinear continuations collapse.
pub fn extract_plan(g: &GridGraph, r: &SearchResult) -> DecoupledPlan {
    assert!(r.is_optimal(), "extract_plan requires an optimal result");
    let path = &r.node_path;
    let start = Config::new(g.point(path[0].ia).clone(), g.point(path[0].ib).clone());
    let mut moves: Vec<Move> = Vec::new();
    for w in path.windows(2) {
        let (u, v) = (w[0], w[1]);
        let (robot, from, to) = if u.ia != v.ia {
            debug_assert_eq!(u.ib, v.ib);
            (Robot::A, g.point(u.ia).clone(), g.point(v.ia).clone())
        } else {
            debug_assert_ne!(u.ib, v.ib);
            (Robot::B, g.point(u.ib).clone(), g.point(v.ib).clone())
        };
        match moves.last_mut() {
            Some(m) if m.robot == robot => {
                m.push_collapsing(to);
            }
            _ => {
                moves.push(Move {
                    robot,
                    polyline: vec![from, to],
                });
            }
        }
    }
    DecoupledPlan { start, moves }
}

/// Builds the canonical grid for the instance and runs the search.
pub fn plan_min_sum(
    f: &FreeSpace,
    s: &Config,
    t: &Config,
    heuristic: bool,
) -> Result<SearchResult, PlanError> {
    Ok(plan_min_sum_with_plan(f, s, t, heuristic)?.0)
}

/// Full pipeline returning both the search result and, when optimal, the
/// extracted decoupled plan.
pub fn plan_min_sum_with_plan(
    f: &FreeSpace,
    s: &Config,
    t: &Config,
    heuristic: bool,
) -> Result<(SearchResult, Option<DecoupledPlan>), PlanError> {
    let specials = [s.a.clone(), s.b.clone(), t.a.clone(), t.b.clone()];
    let lines = compute_ilines(f, &specials);
    let g = build_grid_graph(f, &lines);
    let r = shortest_plan(f, &g, s, t, heuristic)?;
    let plan = r.is_optimal().then(|| extract_plan(&g, &r));
    Ok((r, plan))
}

/// Exact single-robot shortest ℓ1 path length inside the free space, on the
/// grid seeded by the free-space boundary edges and the two endpoints.
/// Returns `None` when `q` is unreachable from `p`.
pub fn single_robot_shortest(
    f: &FreeSpace,
    p: &Point,
    q: &Point,
) -> Result<Option<Scalar>, PlanError> {
    if !f.contains_point(p) || !f.contains_point(q) {
        return Err(PlanError::PointNotFree);
    }
    let lines = crate::grid::compute_ilines_leveled(f, &[p.clone(), q.clone()], 0, false);
    let g = build_grid_graph(f, &lines);
    let (Located::Index(pi), Located::Index(qi)) = (g.locate(p), g.locate(q)) else {
        return Err(PlanError::StartOrGoalNotOnGrid);
    };
    if let Some(iv) = g.integer_view() {
        let d = grid_distances_int(&g, &iv, pi)[qi as usize];
        return Ok((d != UNREACHED)
            .then(|| Scalar::big_ratio(d.into(), iv.scale.numer().clone())));
    }
    let dist = grid_distances_from(&g, pi);
    Ok(dist[qi as usize].clone())
}
