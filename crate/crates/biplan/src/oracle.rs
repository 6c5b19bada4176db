//! Independent brute-force optimality oracles and a seeded random instance
//! generator.
//!
//! Two oracles certify the planner from different directions: the refined
//! oracle reruns the regular pipeline on a strictly richer grid (extra
//! offset levels plus midpoints), while the dense oracle searches the
//! coupled lattice of all half-integer-spaced point pairs and shares no line
//! generation code with the planner.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{OracleError, PlanError};
use crate::freespace::{compute_free_space, Config, FreeSpace, Workspace};
use crate::geometry::{linf_dist, AxisSegment, Point, Rect, RectilinearPolygon};
use crate::grid::{build_grid_graph, compute_ilines_leveled};
use crate::planner::{shortest_plan, SearchStatus};
use crate::scalar::Scalar;

/// Default cap on coupled lattice pairs (overridable via BIPLAN_NODE_BUDGET).
pub const DEFAULT_NODE_BUDGET: u64 = 5_000_000;

/// Oracle selection for the command-line checker.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleMode {
    RefinedLines { extra_levels: u8 },
    DenseCoupledGrid { spacing: Scalar },
}

/// Parameters of the seeded random instance generator.
#[derive(Clone, Debug)]
pub struct RandomWorkspaceParams {
    pub seed: u64,
    pub bbox: Rect,
    pub max_vertices: usize,
    pub holes: (usize, usize),
}

impl RandomWorkspaceParams {
    pub fn new(seed: u64) -> Self {
        RandomWorkspaceParams {
            seed,
            bbox: Rect::of_ints(0, 12, 0, 12),
            max_vertices: 16,
            holes: (0, 1),
        }
    }
}

/// Optimal cost on the enriched grid: offset levels up to `2 + extra_levels`
/// and midpoints between consecutive lines. Equality with the base planner
/// cost is what the grid-refinement acceptance criterion asserts.
pub fn refined_plan_cost(
    f: &FreeSpace,
    s: &Config,
    t: &Config,
    extra_levels: u8,
) -> Result<Option<Scalar>, PlanError> {
    let specials = [s.a.clone(), s.b.clone(), t.a.clone(), t.b.clone()];
    let lines = compute_ilines_leveled(f, &specials, 2 + extra_levels, true);
    let g = build_grid_graph(f, &lines);
    let r = shortest_plan(f, &g, s, t, false)?;
    Ok(match r.status {
        SearchStatus::Optimal => Some(r.cost),
        SearchStatus::Infeasible => None,
    })
}

/// Breadth-first search over the coupled lattice: all pairs of
/// `spacing`-spaced free points at ℓ∞ ≥ 1, single-robot single-step moves of
/// length `spacing`. Exact when the spacing divides 1/2 and every instance
/// coordinate, because every canonical grid coordinate then lies on the
/// lattice.
pub fn dense_coupled_cost(
    f: &FreeSpace,
    s: &Config,
    t: &Config,
    spacing: &Scalar,
    node_budget: u64,
) -> Result<Option<Scalar>, OracleError> {
    if !spacing.is_positive() {
        return Err(OracleError::SpacingViolation(spacing.to_string()));
    }
    let check_multiple = |v: &Scalar| -> Result<(), OracleError> {
        if !(v / spacing).is_integer() {
            return Err(OracleError::SpacingViolation(v.to_string()));
        }
        Ok(())
    };
    if !(Scalar::half() / spacing.clone()).is_integer() {
        return Err(OracleError::SpacingViolation(spacing.to_string()));
    }
    // All geometric features of F and the terminals must be on the lattice.
    for x in f.region().breakpoints() {
        check_multiple(x)?;
    }
    for y in f.region().fiber_endpoint_ys() {
        check_multiple(&y)?;
    }
    for p in [&s.a, &s.b, &t.a, &t.b] {
        check_multiple(&p.x)?;
        check_multiple(&p.y)?;
    }

    let Some(bbox) = f.region().bounding_box() else {
        return Ok(None);
    };
    // Enumerate lattice points inside F.
    let mut points: Vec<Point> = Vec::new();
    let mut index = std::collections::HashMap::new();
    let mut x = bbox.x_lo.clone();
    while x <= bbox.x_hi {
        let fiber = f.region().fiber_at(&x);
        if !fiber.is_empty() {
            let mut y = bbox.y_lo.clone();
            while y <= bbox.y_hi {
                if fiber.contains(&y) {
                    let p = Point::new(x.clone(), y.clone());
                    index.insert(p.clone(), points.len() as u32);
                    points.push(p);
                }
                y = &y + spacing;
            }
        }
        x = &x + spacing;
    }
    let n = points.len() as u64;
    if n * n > node_budget {
        return Err(OracleError::BudgetExceeded {
            needed: n * n,
            budget: node_budget,
        });
    }
    let n = points.len();
    if n == 0 {
        return Ok(None);
    }
    // Single-robot lattice adjacency with swept-segment membership.
    let mut nbrs: Vec<Vec<u32>> = vec![Vec::with_capacity(4); n];
    for (i, p) in points.iter().enumerate() {
        for (dx, dy) in [
            (spacing.clone(), Scalar::zero()),
            (Scalar::zero(), spacing.clone()),
        ] {
            let q = Point::new(&p.x + &dx, &p.y + &dy);
            if let Some(&j) = index.get(&q) {
                let seg = AxisSegment { a: p.clone(), b: q };
                if f.segment_in_free(&seg) {
                    nbrs[i].push(j as u32);
                    nbrs[j as usize].push(i as u32);
                }
            }
        }
    }
    let locate = |p: &Point| index.get(p).copied();
    let (Some(sa), Some(sb), Some(ta), Some(tb)) =
        (locate(&s.a), locate(&s.b), locate(&t.a), locate(&t.b))
    else {
        return Ok(None);
    };
    let one = Scalar::one();
    let pair_ok = |a: u32, b: u32| -> bool {
        linf_dist(&points[a as usize], &points[b as usize]) >= one
    };
    if !pair_ok(sa, sb) || !pair_ok(ta, tb) {
        return Ok(None);
    }
    let key = |a: u32, b: u32| -> usize { a as usize * n + b as usize };
    let mut dist: Vec<u32> = vec![u32::MAX; n * n];
    let mut queue = std::collections::VecDeque::new();
    dist[key(sa, sb)] = 0;
    queue.push_back((sa, sb));
    let goal = (ta, tb);
    while let Some((a, b)) = queue.pop_front() {
        let d = dist[key(a, b)];
        if (a, b) == goal {
            return Ok(Some(Scalar::from_int(d as i64) * spacing.clone()));
        }
        for &a2 in &nbrs[a as usize] {
            if dist[key(a2, b)] == u32::MAX && pair_ok(a2, b) {
                dist[key(a2, b)] = d + 1;
                queue.push_back((a2, b));
            }
        }
        for &b2 in &nbrs[b as usize] {
            if dist[key(a, b2)] == u32::MAX && pair_ok(a, b2) {
                dist[key(a, b2)] = d + 1;
                queue.push_back((a, b2));
            }
        }
    }
    Ok(None)
}

/// Deterministic random instance: staircase outer boundary with rectangular
/// holes on the half-integer lattice, plus free start and goal configurations
/// sampled from the computed free space.
pub fn random_workspace(
    params: &RandomWorkspaceParams,
) -> Result<(Workspace, Config, Config), OracleError> {
    const WORKSPACE_ATTEMPTS: usize = 64;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    for _ in 0..WORKSPACE_ATTEMPTS {
        let Some(w) = sample_workspace(&mut rng, params) else {
            continue;
        };
        let Ok(f) = compute_free_space(&w) else {
            continue;
        };
        if f.is_empty() {
            continue;
        }
        let lattice = half_integer_points_in(&f);
        if lattice.len() < 2 {
            continue;
        }
        let Some(s) = sample_free_config(&mut rng, &lattice) else {
            continue;
        };
        let Some(t) = sample_free_config(&mut rng, &lattice) else {
            continue;
        };
        return Ok((w, s, t));
    }
    Err(OracleError::GenerationExhausted(WORKSPACE_ATTEMPTS))
}

fn half_integer_points_in(f: &FreeSpace) -> Vec<Point> {
    let Some(bbox) = f.region().bounding_box() else {
        return vec![];
    };
    let step = Scalar::half();
    let mut out = Vec::new();
    let mut x = bbox.x_lo.clone();
    while x <= bbox.x_hi {
        let fiber = f.region().fiber_at(&x);
        if !fiber.is_empty() {
            let mut y = bbox.y_lo.clone();
            while y <= bbox.y_hi {
                if fiber.contains(&y) {
                    out.push(Point::new(x.clone(), y.clone()));
                }
                y = &y + &step;
            }
        }
        x = &x + &step;
    }
    out
}

fn sample_free_config(rng: &mut ChaCha8Rng, lattice: &[Point]) -> Option<Config> {
    const ATTEMPTS: usize = 256;
    let one = Scalar::one();
    for _ in 0..ATTEMPTS {
        let a = lattice[rng.gen_range(0..lattice.len())].clone();
        let b = lattice[rng.gen_range(0..lattice.len())].clone();
        if linf_dist(&a, &b) >= one {
            return Some(Config::new(a, b));
        }
    }
    None
}

/// Draws a half-integer value in [lo, hi] (inclusive, step 1/2).
fn half_int_in(rng: &mut ChaCha8Rng, lo: &Scalar, hi: &Scalar) -> Scalar {
    let two = Scalar::from_int(2);
    let lo2 = (lo * &two).numer().clone();
    let hi2 = (hi * &two).numer().clone();
    let lo2: i64 = i64::try_from(&lo2).expect("generator bounds fit i64");
    let hi2: i64 = i64::try_from(&hi2).expect("generator bounds fit i64");
    let v = rng.gen_range(lo2..=hi2);
    Scalar::ratio(v, 2)
}

fn sample_workspace(rng: &mut ChaCha8Rng, params: &RandomWorkspaceParams) -> Option<Workspace> {
    let bb = &params.bbox;
    if bb.width() < Scalar::from_int(2) || bb.height() < Scalar::from_int(2) {
        return None;
    }
    // Corner cuts: each costs 2 extra vertices.
    let max_cuts = (params.max_vertices.saturating_sub(4) / 2).min(4);
    let n_cuts = if max_cuts == 0 {
        0
    } else {
        rng.gen_range(0..=max_cuts)
    };
    let mut corners = [false; 4]; // bl, br, tr, tl
    let mut placed = 0;
    while placed < n_cuts {
        let c = rng.gen_range(0..4);
        if !corners[c] {
            corners[c] = true;
            placed += 1;
        }
    }
    let ring = staircase_vertices(rng, bb, corners)?;
    let outer = RectilinearPolygon::new(ring, vec![]).ok()?;
    finish_with_holes(rng, params, outer)
}

fn staircase_vertices(
    rng: &mut ChaCha8Rng,
    bb: &Rect,
    corners: [bool; 4],
) -> Option<Vec<Point>> {
    let half = Scalar::half();
    let max_cut_w = (&bb.width() / Scalar::from_int(2)) - &half;
    let max_cut_h = (&bb.height() / Scalar::from_int(2)) - &half;
    if max_cut_w < half || max_cut_h < half {
        return None;
    }
    let mut draw = |have: bool| -> Option<(Scalar, Scalar)> {
        if !have {
            return None;
        }
        Some((
            half_int_in(rng, &half, &max_cut_w),
            half_int_in(rng, &half, &max_cut_h),
        ))
    };
    let bl = draw(corners[0]);
    let br = draw(corners[1]);
    let tr = draw(corners[2]);
    let tl = draw(corners[3]);
    let (x0, x1, y0, y1) = (
        bb.x_lo.clone(),
        bb.x_hi.clone(),
        bb.y_lo.clone(),
        bb.y_hi.clone(),
    );
    let mut ring: Vec<Point> = Vec::new();
    // Counterclockwise from the bottom-left area.
    match &bl {
        Some((a, _)) => ring.push(Point::new(&x0 + a, y0.clone())),
        None => ring.push(Point::new(x0.clone(), y0.clone())),
    }
    match &br {
        Some((a, b)) => {
            ring.push(Point::new(&x1 - a, y0.clone()));
            ring.push(Point::new(&x1 - a, &y0 + b));
            ring.push(Point::new(x1.clone(), &y0 + b));
        }
        None => ring.push(Point::new(x1.clone(), y0.clone())),
    }
    match &tr {
        Some((a, b)) => {
            ring.push(Point::new(x1.clone(), &y1 - b));
            ring.push(Point::new(&x1 - a, &y1 - b));
            ring.push(Point::new(&x1 - a, y1.clone()));
        }
        None => ring.push(Point::new(x1.clone(), y1.clone())),
    }
    match &tl {
        Some((a, b)) => {
            ring.push(Point::new(&x0 + a, y1.clone()));
            ring.push(Point::new(&x0 + a, &y1 - b));
            ring.push(Point::new(x0.clone(), &y1 - b));
        }
        None => ring.push(Point::new(x0.clone(), y1.clone())),
    }
    if let Some((a, b)) = &bl {
        ring.push(Point::new(x0.clone(), &y0 + b));
        ring.push(Point::new(&x0 + a, &y0 + b));
    }
    Some(ring)
}

fn finish_with_holes(
    rng: &mut ChaCha8Rng,
    params: &RandomWorkspaceParams,
    outer: RectilinearPolygon,
) -> Option<Workspace> {
    let (lo, hi) = params.holes;
    let target = if hi == 0 { 0 } else { rng.gen_range(lo..=hi) };
    let outer_region = Workspace::new(outer.clone()).ok()?.region();
    let margin = Scalar::ratio(1, 4);
    let half = Scalar::half();
    let bb = outer.bounding_box();
    let mut holes: Vec<Rect> = Vec::new();
    let mut rings: Vec<Vec<Point>> = Vec::new();
    let vertex_budget = params.max_vertices.saturating_sub(outer.vertex_count());
    let max_holes = (vertex_budget / 4).min(target);
    for _ in 0..8 * max_holes.max(1) {
        if holes.len() >= max_holes {
            break;
        }
        let wmax = (&bb.width() - &Scalar::from_int(2)).max(half.clone());
        let hmax = (&bb.height() - &Scalar::from_int(2)).max(half.clone());
        let hw = half_int_in(rng, &half, &wmax.min(Scalar::from_int(4)));
        let hh = half_int_in(rng, &half, &hmax.min(Scalar::from_int(4)));
        let x_lo_min = &bb.x_lo + &half;
        let x_lo_max = &(&bb.x_hi - &half) - &hw;
        let y_lo_min = &bb.y_lo + &half;
        let y_lo_max = &(&bb.y_hi - &half) - &hh;
        if x_lo_max < x_lo_min || y_lo_max < y_lo_min {
            continue;
        }
        let hx = half_int_in(rng, &x_lo_min, &x_lo_max);
        let hy = half_int_in(rng, &y_lo_min, &y_lo_max);
        let rect = Rect::new(hx.clone(), &hx + &hw, hy.clone(), &hy + &hh);
        // Strictly inside the outer boundary, with a quarter-unit margin.
        if !outer_region.contains_rect(&rect.dilated(&margin)) {
            continue;
        }
        // Not touching previously placed holes.
        let separated = holes.iter().all(|h| {
            rect.x_hi < h.x_lo || h.x_hi < rect.x_lo || rect.y_hi < h.y_lo || h.y_hi < rect.y_lo
        });
        if !separated {
            continue;
        }
        rings.push(vec![
            Point::new(rect.x_lo.clone(), rect.y_lo.clone()),
            Point::new(rect.x_hi.clone(), rect.y_lo.clone()),
            Point::new(rect.x_hi.clone(), rect.y_hi.clone()),
            Point::new(rect.x_lo.clone(), rect.y_hi.clone()),
        ]);
        holes.push(rect);
    }
    let poly = RectilinearPolygon::new(outer.outer, rings).ok()?;
    Workspace::new(poly).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planner::plan_min_sum;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn p(x: i64, y: i64) -> Point {
        Point::new(s(x), s(y))
    }

    #[test]
    fn dense_oracle_on_rectangle_example() {
        let w = Workspace::rectangle(&Rect::of_ints(0, 5, 0, 4));
        let f = compute_free_space(&w).unwrap();
        let start = Config::new(p(1, 1), p(4, 1));
        let goal = Config::new(p(4, 3), p(1, 3));
        let c = dense_coupled_cost(&f, &start, &goal, &Scalar::half(), DEFAULT_NODE_BUDGET)
            .unwrap();
        assert_eq!(c, Some(s(10)));
    }

    #[test]
    fn dense_oracle_identity() {
        let w = Workspace::rectangle(&Rect::of_ints(0, 5, 0, 4));
        let f = compute_free_space(&w).unwrap();
        let c = Config::new(p(1, 1), p(4, 1));
        let d = dense_coupled_cost(&f, &c, &c, &Scalar::half(), DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(d, Some(Scalar::zero()));
    }

    #[test]
    fn dense_oracle_rejects_bad_spacing() {
        let w = Workspace::rectangle(&Rect::of_ints(0, 5, 0, 4));
        let f = compute_free_space(&w).unwrap();
        let c = Config::new(p(1, 1), p(4, 1));
        let err = dense_coupled_cost(&f, &c, &c, &Scalar::ratio(1, 3), DEFAULT_NODE_BUDGET)
            .unwrap_err();
        assert!(matches!(err, OracleError::SpacingViolation(_)));
    }

    #[test]
    fn corridor_swap_matches_dense_oracle() {
        // Width-2 corridor; the robots must swap.
        let w = Workspace::rectangle(&Rect::of_ints(0, 3, 0, 10));
        let f = compute_free_space(&w).unwrap();
        let start = Config::new(p(1, 1), p(1, 9));
        let goal = Config::new(p(1, 9), p(1, 1));
        let planner = plan_min_sum(&f, &start, &goal, false).unwrap();
        assert!(planner.is_optimal());
        let oracle =
            dense_coupled_cost(&f, &start, &goal, &Scalar::half(), DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(Some(planner.cost.clone()), oracle);
        // And the refined oracle agrees as well.
        let refined = refined_plan_cost(&f, &start, &goal, 0).unwrap();
        assert_eq!(Some(planner.cost), refined);
    }

    #[test]
    fn generator_is_deterministic_and_valid() {
        let params = RandomWorkspaceParams::new(1);
        let (w1, s1, t1) = random_workspace(&params).unwrap();
        let (w2, s2, t2) = random_workspace(&params).unwrap();
        assert_eq!(w1.polygon(), w2.polygon());
        assert_eq!(s1, s2);
        assert_eq!(t1, t2);
        let f = compute_free_space(&w1).unwrap();
        assert!(f.is_free_config(&s1));
        assert!(f.is_free_config(&t1));
    }

    #[test]
    fn generator_minimal_vertex_budget_gives_rectangle() {
        let mut params = RandomWorkspaceParams::new(7);
        params.max_vertices = 4;
        let (w, _, _) = random_workspace(&params).unwrap();
        assert_eq!(w.vertex_count(), 4);
    }
}
