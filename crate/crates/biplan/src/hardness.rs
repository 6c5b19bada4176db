//! Min-makespan hardness instances: a chain of gadgets derived from a
//! Partition instance, witness plans for valid partitions, and a small
//! resolution-bounded search used as negative evidence.
//!
//! Gadget geometry (width 9, centerline y = 0, all walls 1/100 thick with
//! their right faces at the nominal offsets):
//!
//! - entries s_A = (0, 1/2), s_B = (0, -1/2); exits at x = 9, same heights;
//! - gate column at x = 2: an upper stub [1 - y/2, 1] and a lower stub
//!   [-1, -1 + y/2] leave the gate, a free vertical span of length 2 - y
//!   centered on y = 0;
//! - a hanging wall at x = 4 spanning [y/2, 1] and a standing wall at x = 6
//!   spanning [-1, -y/2] force every gate route to duck to -1/2 + y/2 and
//!   climb to 1/2 - y/2 afterwards;
//! - the outer box spans y in [-2, 2], so above all walls (robot center
//!   3/2) and below them (-3/2) run two detour corridors of width exactly 1.
//!
//! With these offsets the shortest gate route costs exactly 11 - y, the
//! shortest gate-avoiding route exactly 11, reaching the gate from the entry
//! costs exactly 5/2 + y/2, and the post-gate remainder of the lower robot's
//! gate route costs exactly 17/2 - (3/2)y. All of this is asserted at build
//! time against the single-robot planner.

use serde::Serialize;

use crate::error::HardnessError;
use crate::freespace::{compute_free_space, Config, Workspace};
use crate::geometry::{l1_dist, AxisSegment, Point, Rect, RectilinearPolygon};
use crate::plan::{validate_timed, TimedPlan, Trajectory};
use crate::planner::single_robot_shortest;
use crate::scalar::Scalar;

/// Wall thickness. Positive so the workspace stays a valid polygon; the
/// right faces sit on the nominal offsets, which keeps every asserted path
/// length exact.
fn wall_eps() -> Scalar {
    Scalar::ratio(1, 100)
}

/// A Partition instance: positive integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionInstance {
    pub values: Vec<u64>,
}

impl PartitionInstance {
    pub fn new(values: Vec<u64>) -> Result<Self, HardnessError> {
        if values.is_empty() {
            return Err(HardnessError::EmptyInstance);
        }
        if values.iter().any(|&v| v == 0) {
            return Err(HardnessError::NonPositiveValue);
        }
        Ok(PartitionInstance { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// The instance scaled so the elements sum to exactly 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledInstance {
    pub y: Vec<Scalar>,
}

/// Exact rational scaling y_i = x_i / sum(x).
pub fn scale_instance(x: &PartitionInstance) -> ScaledInstance {
    let total: u64 = x.values.iter().sum();
    let total = Scalar::from_int(total as i64);
    ScaledInstance {
        y: x.values
            .iter()
            .map(|&v| Scalar::from_int(v as i64) / total.clone())
            .collect(),
    }
}

/// Geometry and canonical paths of one gadget in the chain.
#[derive(Clone, Debug, Serialize)]
pub struct GadgetLayout {
    /// 1-based position in the chain.
    pub index: usize,
    pub y: Scalar,
    pub s_a: Point,
    pub s_b: Point,
    pub t_a: Point,
    pub t_b: Point,
    /// The free vertical span both robots cannot cross simultaneously.
    pub gate: AxisSegment,
    /// The four thin walls of this gadget.
    pub obstacles: Vec<Rect>,
    /// Shortest route of A through the gate, length 11 - y.
    pub gate_path_a: Vec<Point>,
    /// Shortest route of B through the gate, length 11 - y.
    pub gate_path_b: Vec<Point>,
    /// Gate-avoiding route of A over the top corridor, length 11.
    pub detour_path_a: Vec<Point>,
    /// Gate-avoiding route of B under the bottom corridor, length 11.
    pub detour_path_b: Vec<Point>,
}

/// A complete hardness instance.
#[derive(Clone, Debug)]
pub struct HardnessInstance {
    pub workspace: Workspace,
    pub start: Config,
    pub goal: Config,
    pub layouts: Vec<GadgetLayout>,
    /// Decision threshold: a plan of makespan at most this exists iff the
    /// Partition instance has a valid split.
    pub t_max: Scalar,
}

fn s64(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn half() -> Scalar {
    Scalar::half()
}

fn pt(x: Scalar, y: Scalar) -> Point {
    Point::new(x, y)
}

/// Builds the chained workspace for a scaled instance, asserting the gadget
/// arithmetic against the single-robot planner.
pub fn build_hardness_workspace(y: &ScaledInstance) -> Result<HardnessInstance, HardnessError> {
    let m = y.y.len();
    assert!(m >= 1);
    let eps = wall_eps();
    let width = s64(9);
    let mut holes: Vec<Vec<Point>> = Vec::new();
    let mut layouts: Vec<GadgetLayout> = Vec::new();

    for (idx, yi) in y.y.iter().enumerate() {
        let x0 = s64(9 * idx as i64);
        let yhalf = yi.clone() / s64(2);
        // Wall columns (right faces).
        let gate_x = &x0 + &s64(2);
        let w2_x = &x0 + &s64(4);
        let w3_x = &x0 + &s64(6);
        let stub_up = Rect::new(
            &gate_x - &eps,
            gate_x.clone(),
            s64(1) - yhalf.clone(),
            s64(1),
        );
        let stub_down = Rect::new(
            &gate_x - &eps,
            gate_x.clone(),
            s64(-1),
            s64(-1) + yhalf.clone(),
        );
        let wall_hang = Rect::new(&w2_x - &eps, w2_x.clone(), yhalf.clone(), s64(1));
        let wall_stand = Rect::new(&w3_x - &eps, w3_x.clone(), s64(-1), -yhalf.clone());
        let obstacles = vec![
            stub_up.clone(),
            stub_down.clone(),
            wall_hang.clone(),
            wall_stand.clone(),
        ];
        for r in &obstacles {
            holes.push(vec![
                pt(r.x_lo.clone(), r.y_lo.clone()),
                pt(r.x_hi.clone(), r.y_lo.clone()),
                pt(r.x_hi.clone(), r.y_hi.clone()),
                pt(r.x_lo.clone(), r.y_hi.clone()),
            ]);
        }
        let gate = AxisSegment::new(
            pt(gate_x.clone(), s64(-1) + yhalf.clone()),
            pt(gate_x.clone(), s64(1) - yhalf.clone()),
        )
        .expect("gate is vertical");

        let s_a = pt(x0.clone(), half());
        let s_b = pt(x0.clone(), -half());
        let t_a = pt(&x0 + &width, half());
        let t_b = pt(&x0 + &width, -half());

        // Route heights.
        let gate_top = half() - &yhalf; // highest crossing center
        let gate_bot = -half() + &yhalf; // lowest crossing center
        let over = Scalar::ratio(3, 2);
        let under = Scalar::ratio(-3, 2);
        // Column positions for vertical jogs; the two early columns stay one
        // unit apart so the two robots' jogs never conflict.
        let early_a = &x0 + &(Scalar::ratio(3, 2) - &eps);
        let early_b = &x0 + &(half() - &eps);
        let mid_drop = &x0 + &s64(3);
        let mid_rise = &x0 + &Scalar::ratio(9, 2);
        let late_b_down = &x0 + &Scalar::ratio(13, 2);
        let late_a_detour = &x0 + &s64(8);
        // The lower detour resurfaces just before the interface pinch walls.
        let late_b_detour = &x0 + &(Scalar::ratio(17, 2) - &(Scalar::from_int(2) * eps.clone()));

        let gate_path_a = vec![
            s_a.clone(),
            pt(early_a.clone(), half()),
            pt(early_a.clone(), gate_top.clone()),
            pt(mid_drop.clone(), gate_top.clone()),
            pt(mid_drop.clone(), gate_bot.clone()),
            pt(mid_rise.clone(), gate_bot.clone()),
            pt(mid_rise.clone(), half()),
            t_a.clone(),
        ];
        let gate_path_b = vec![
            s_b.clone(),
            pt(early_a.clone(), -half()),
            pt(early_a.clone(), gate_bot.clone()),
            pt(mid_rise.clone(), gate_bot.clone()),
            pt(mid_rise.clone(), gate_top.clone()),
            pt(late_b_down.clone(), gate_top.clone()),
            pt(late_b_down.clone(), -half()),
            t_b.clone(),
        ];
        let detour_path_a = vec![
            s_a.clone(),
            pt(early_b.clone(), half()),
            pt(early_b.clone(), over.clone()),
            pt(late_a_detour.clone(), over.clone()),
            pt(late_a_detour.clone(), half()),
            t_a.clone(),
        ];
        let detour_path_b = vec![
            s_b.clone(),
            pt(early_b.clone(), -half()),
            pt(early_b.clone(), under.clone()),
            pt(late_b_detour.clone(), under.clone()),
            pt(late_b_detour.clone(), -half()),
            t_b.clone(),
        ];

        layouts.push(GadgetLayout {
            index: idx + 1,
            y: yi.clone(),
            s_a,
            s_b,
            t_a,
            t_b,
            gate,
            obstacles,
            gate_path_a,
            gate_path_b,
            detour_path_a,
            detour_path_b,
        });
    }

    // Interface pinches: at every interior gadget boundary, a ceiling wall
    // down to y = 1 and a floor wall up to y = -1 restrict the passage to
    // robot centers in [-1/2, 1/2]. Without them the two detour corridors
    // would run uninterrupted along the whole chain, and a robot could cross
    // every gadget high (or low) for 9 per gadget instead of 11.
    for idx in 1..m {
        let xw = s64(9 * idx as i64);
        let two_eps = Scalar::from_int(2) * eps.clone();
        for (lo, hi) in [(s64(1), s64(2)), (s64(-2), s64(-1))] {
            let r = Rect::new(&xw - &two_eps, &xw - &eps, lo, hi);
            holes.push(vec![
                pt(r.x_lo.clone(), r.y_lo.clone()),
                pt(r.x_hi.clone(), r.y_lo.clone()),
                pt(r.x_hi.clone(), r.y_hi.clone()),
                pt(r.x_lo.clone(), r.y_hi.clone()),
            ]);
        }
    }

    let outer = Rect::new(
        -half(),
        s64(9 * m as i64) + half(),
        s64(-2),
        s64(2),
    );
    let outer_ring = RectilinearPolygon::rectangle(&outer).outer;
    let polygon = RectilinearPolygon::new(outer_ring, holes)
        .map_err(|e| HardnessError::GeometryConstraintViolated(e.to_string()))?;
    let workspace = Workspace::new(polygon)
        .map_err(|e| HardnessError::GeometryConstraintViolated(e.to_string()))?;

    let start = Config::new(layouts[0].s_a.clone(), layouts[0].s_b.clone());
    let goal = Config::new(
        layouts[m - 1].t_a.clone(),
        layouts[m - 1].t_b.clone(),
    );
    let t_max = s64(11 * m as i64) - half();

    let instance = HardnessInstance {
        workspace,
        start,
        goal,
        layouts,
        t_max,
    };
    assert_gadget_arithmetic(&instance, y)?;
    Ok(instance)
}

fn polyline_length(poly: &[Point]) -> Scalar {
    let mut total = Scalar::zero();
    for w in poly.windows(2) {
        total += l1_dist(&w[0], &w[1]);
    }
    total
}

/// Minimum ℓ∞ distance between two axis-parallel segments. Because each
/// segment varies in only one coordinate, its x- and y-ranges are
/// independent, so the minimum is the componentwise interval distance.
pub fn min_linf_between_segments(s1: &AxisSegment, s2: &AxisSegment) -> Scalar {
    fn span(a: &Scalar, b: &Scalar) -> (Scalar, Scalar) {
        if a <= b {
            (a.clone(), b.clone())
        } else {
            (b.clone(), a.clone())
        }
    }
    fn interval_dist(a: (Scalar, Scalar), b: (Scalar, Scalar)) -> Scalar {
        if a.1 < b.0 {
            b.0 - a.1
        } else if b.1 < a.0 {
            a.0 - b.1
        } else {
            Scalar::zero()
        }
    }
    let dx = interval_dist(span(&s1.a.x, &s1.b.x), span(&s2.a.x, &s2.b.x));
    let dy = interval_dist(span(&s1.a.y, &s1.b.y), span(&s2.a.y, &s2.b.y));
    dx.max(dy)
}

/// Minimum ℓ∞ distance between any point of one polyline and any point of
/// the other.
pub fn min_linf_between_polylines(p1: &[Point], p2: &[Point]) -> Scalar {
    let mut best: Option<Scalar> = None;
    for w1 in p1.windows(2) {
        let s1 = AxisSegment {
            a: w1[0].clone(),
            b: w1[1].clone(),
        };
        for w2 in p2.windows(2) {
            let s2 = AxisSegment {
                a: w2[0].clone(),
                b: w2[1].clone(),
            };
            let d = min_linf_between_segments(&s1, &s2);
            best = Some(match best {
                None => d,
                Some(b) => b.min(d),
            });
        }
    }
    best.expect("polylines have at least one segment")
}

/// Verifies the metric constraints of every gadget against the single-robot
/// planner; any failure is a construction bug.
fn assert_gadget_arithmetic(
    inst: &HardnessInstance,
    y: &ScaledInstance,
) -> Result<(), HardnessError> {
    let f = compute_free_space(&inst.workspace)
        .map_err(|e| HardnessError::GeometryConstraintViolated(e.to_string()))?;
    let fail = |msg: String| Err(HardnessError::GeometryConstraintViolated(msg));
    let eleven = s64(11);
    for (lay, yi) in inst.layouts.iter().zip(&y.y) {
        let expect_gate = &eleven - yi;
        // (e) gate length is exactly 2 - y_i, too short for both robots.
        let gate_len = lay.gate.length();
        if gate_len != s64(2) - yi {
            return fail(format!("gadget {}: gate length {}", lay.index, gate_len));
        }
        // Paths stay inside the free space.
        for (name, path) in [
            ("gate path A", &lay.gate_path_a),
            ("gate path B", &lay.gate_path_b),
            ("detour A", &lay.detour_path_a),
            ("detour B", &lay.detour_path_b),
        ] {
            for w in path.windows(2) {
                let seg = AxisSegment {
                    a: w[0].clone(),
                    b: w[1].clone(),
                };
                if !f.segment_in_free(&seg) {
                    return fail(format!(
                        "gadget {}: {name} segment {:?} -> {:?} leaves the free space",
                        lay.index, seg.a, seg.b
                    ));
                }
            }
        }
        // (a) shortest paths equal 11 - y_i and the canonical routes attain it.
        for (name, path, s, t) in [
            ("A", &lay.gate_path_a, &lay.s_a, &lay.t_a),
            ("B", &lay.gate_path_b, &lay.s_b, &lay.t_b),
        ] {
            if polyline_length(path) != expect_gate {
                return fail(format!(
                    "gadget {}: gate path {name} has length {}",
                    lay.index,
                    polyline_length(path)
                ));
            }
            let d = single_robot_shortest(&f, s, t)
                .map_err(|e| HardnessError::GeometryConstraintViolated(e.to_string()))?;
            if d != Some(expect_gate.clone()) {
                return fail(format!(
                    "gadget {}: single-robot shortest for {name} is {:?}, want {}",
                    lay.index, d, expect_gate
                ));
            }
        }
        // (b) detours have length exactly 11, and with the gate sealed they
        // are shortest.
        for (name, path) in [("A", &lay.detour_path_a), ("B", &lay.detour_path_b)] {
            if polyline_length(path) != eleven {
                return fail(format!(
                    "gadget {}: detour {name} has length {}",
                    lay.index,
                    polyline_length(path)
                ));
            }
        }
        let sealed = seal_gate(inst, lay)?;
        let fs = compute_free_space(&sealed)
            .map_err(|e| HardnessError::GeometryConstraintViolated(e.to_string()))?;
        for (name, s, t) in [("A", &lay.s_a, &lay.t_a), ("B", &lay.s_b, &lay.t_b)] {
            let d = single_robot_shortest(&fs, s, t)
                .map_err(|e| HardnessError::GeometryConstraintViolated(e.to_string()))?;
            if d != Some(eleven.clone()) {
                return fail(format!(
                    "gadget {}: sealed-gate shortest for {name} is {:?}, want 11",
                    lay.index, d
                ));
            }
        }
        // (c) each robot's gate route never conflicts with the partner's
        // detour, no matter the timing.
        let one = Scalar::one();
        if min_linf_between_polylines(&lay.gate_path_a, &lay.detour_path_b) < one {
            return fail(format!(
                "gadget {}: gate path A conflicts with detour B",
                lay.index
            ));
        }
        if min_linf_between_polylines(&lay.detour_path_a, &lay.gate_path_b) < one {
            return fail(format!(
                "gadget {}: detour A conflicts with gate path B",
                lay.index
            ));
        }
        // (d) entry-to-crossing and post-crossing remainders.
        let yhalf = yi.clone() / s64(2);
        let crossed_x = &lay.gate.a.x + &half();
        let cross_a = pt(crossed_x.clone(), half() - &yhalf);
        let cross_b = pt(crossed_x.clone(), -half() + &yhalf);
        let expect_entry = Scalar::ratio(5, 2) + yhalf.clone();
        let expect_rest = Scalar::ratio(17, 2) - Scalar::from_int(3) * yhalf.clone();
        let da = single_robot_shortest(&f, &lay.s_a, &cross_a)
            .map_err(|e| HardnessError::GeometryConstraintViolated(e.to_string()))?;
        if da != Some(expect_entry.clone()) {
            return fail(format!(
                "gadget {}: entry run of A is {:?}, want {}",
                lay.index, da, expect_entry
            ));
        }
        let db = single_robot_shortest(&f, &lay.s_b, &cross_b)
            .map_err(|e| HardnessError::GeometryConstraintViolated(e.to_string()))?;
        if db != Some(expect_entry.clone()) {
            return fail(format!(
                "gadget {}: entry run of B is {:?}, want {}",
                lay.index, db, expect_entry
            ));
        }
        let rest = single_robot_shortest(&f, &cross_b, &lay.t_b)
            .map_err(|e| HardnessError::GeometryConstraintViolated(e.to_string()))?;
        if rest != Some(expect_rest.clone()) {
            return fail(format!(
                "gadget {}: post-crossing remainder of B is {:?}, want {}",
                lay.index, rest, expect_rest
            ));
        }
    }
    Ok(())
}

/// Shortest gate-avoiding path lengths (robot A, robot B) through gadget
/// `index` (1-based), measured on a variant workspace whose gate is sealed.
pub fn gate_avoiding_shortest(
    inst: &HardnessInstance,
    index: usize,
) -> Result<(Option<Scalar>, Option<Scalar>), HardnessError> {
    let lay = inst
        .layouts
        .iter()
        .find(|l| l.index == index)
        .ok_or(HardnessError::InvalidPartition(index))?;
    let sealed = seal_gate(inst, lay)?;
    let f = compute_free_space(&sealed)
        .map_err(|e| HardnessError::GeometryConstraintViolated(e.to_string()))?;
    let da = single_robot_shortest(&f, &lay.s_a, &lay.t_a)
        .map_err(|e| HardnessError::GeometryConstraintViolated(e.to_string()))?;
    let db = single_robot_shortest(&f, &lay.s_b, &lay.t_b)
        .map_err(|e| HardnessError::GeometryConstraintViolated(e.to_string()))?;
    Ok((da, db))
}

/// Workspace with one gadget's gate filled by an obstacle, used to measure
/// gate-avoiding shortest paths.
fn seal_gate(inst: &HardnessInstance, lay: &GadgetLayout) -> Result<Workspace, HardnessError> {
    let eps = wall_eps();
    let gate_x = lay.gate.a.x.clone();
    let (lo, hi) = if lay.gate.a.y <= lay.gate.b.y {
        (lay.gate.a.y.clone(), lay.gate.b.y.clone())
    } else {
        (lay.gate.b.y.clone(), lay.gate.a.y.clone())
    };
    let mut poly = inst.workspace.polygon().clone();
    // Replace the two stubs and the open gate by one full wall.
    let seal = Rect::new(&gate_x - &eps, gate_x.clone(), s64(-1), s64(1));
    poly.holes.retain(|h| {
        // Drop this gadget's two stub holes; they are subsumed by the seal.
        !h.iter().all(|p| {
            (p.x == gate_x || p.x == &gate_x - &eps)
                && (p.y.abs() == s64(1)
                    || p.y == lo.clone()
                    || p.y == hi.clone())
        })
    });
    poly.holes.push(vec![
        pt(seal.x_lo.clone(), seal.y_lo.clone()),
        pt(seal.x_hi.clone(), seal.y_lo.clone()),
        pt(seal.x_hi.clone(), seal.y_hi.clone()),
        pt(seal.x_lo.clone(), seal.y_hi.clone()),
    ]);
    Workspace::new(poly).map_err(|e| HardnessError::GeometryConstraintViolated(e.to_string()))
}

/// The witness plan for a partition: each robot runs its composite path at
/// speed 1; robot A takes the gate route in gadgets of `part_a`, the detour
/// elsewhere, and B symmetrically.
pub fn plan_from_partition(
    layouts: &[GadgetLayout],
    part_a: &[usize],
    part_b: &[usize],
) -> Result<TimedPlan, HardnessError> {
    let m = layouts.len();
    let mut seen = vec![false; m + 1];
    for &i in part_a.iter().chain(part_b) {
        if i == 0 || i > m || seen[i] {
            return Err(HardnessError::InvalidPartition(i));
        }
        seen[i] = true;
    }
    if let Some(missing) = (1..=m).find(|&i| !seen[i]) {
        return Err(HardnessError::InvalidPartition(missing));
    }
    let in_a = |i: usize| part_a.contains(&i);
    let mut path_a: Vec<Point> = Vec::new();
    let mut path_b: Vec<Point> = Vec::new();
    for lay in layouts {
        let (pa, pb) = if in_a(lay.index) {
            (&lay.gate_path_a, &lay.detour_path_b)
        } else {
            (&lay.detour_path_a, &lay.gate_path_b)
        };
        let skip = usize::from(!path_a.is_empty());
        path_a.extend(pa.iter().skip(skip).cloned());
        let skip = usize::from(!path_b.is_empty());
        path_b.extend(pb.iter().skip(skip).cloned());
    }
    let len_a = polyline_length(&path_a);
    let len_b = polyline_length(&path_b);
    let horizon = len_a.clone().max(len_b.clone());
    let traj = |path: &[Point], total_end: &Scalar| -> Trajectory {
        let mut t = Scalar::zero();
        let mut out: Trajectory = vec![(t.clone(), path[0].clone())];
        for w in path.windows(2) {
            let d = l1_dist(&w[0], &w[1]);
            if d.is_zero() {
                continue;
            }
            t = &t + &d;
            out.push((t.clone(), w[1].clone()));
        }
        if &t != total_end {
            out.push((total_end.clone(), path.last().unwrap().clone()));
        }
        out
    };
    Ok(TimedPlan {
        traj_a: traj(&path_a, &horizon),
        traj_b: traj(&path_b, &horizon),
        horizon,
    })
}

/// Outcome of the resolution-bounded makespan search.
#[derive(Clone, Debug)]
pub enum TinySearchOutcome {
    Feasible(TimedPlan),
    NotFoundAtResolution,
}

/// Exhaustive BFS over synchronized lattice motions: both robots may move
/// one `spacing` step (or stay) per `time_step`, with exact swept-segment and
/// separation checks per joint step. Finding a plan proves feasibility at
/// this makespan; not finding one is evidence, not proof.
#[allow(clippy::too_many_arguments)]
pub fn tiny_makespan_search(
    w: &Workspace,
    s: &Config,
    t: &Config,
    t_max: &Scalar,
    spacing: &Scalar,
    time_step: &Scalar,
    budget: u64,
) -> Result<TinySearchOutcome, HardnessError> {
    if !spacing.is_positive() || !time_step.is_positive() || spacing > time_step {
        return Err(HardnessError::BudgetExceeded(
            "spacing and time step must be positive with spacing <= time_step".into(),
        ));
    }
    // Integer lattice: separation tests run on scaled coordinates.
    let scale = Scalar::one() / spacing.clone();
    if !scale.is_integer() {
        return Err(HardnessError::BudgetExceeded(
            "spacing must divide 1".into(),
        ));
    }
    let sep_units: i64 = i64::try_from(scale.numer()).expect("scale fits i64");
    let f = compute_free_space(w)
        .map_err(|e| HardnessError::GeometryConstraintViolated(e.to_string()))?;
    if !f.is_free_config(s) || !f.is_free_config(t) {
        return Err(HardnessError::GeometryConstraintViolated(
            "terminal configuration is not free".into(),
        ));
    }
    let Some(bbox) = f.region().bounding_box() else {
        return Ok(TinySearchOutcome::NotFoundAtResolution);
    };
    // Lattice points of F, indexed; coordinates snap to ceil/floor multiples.
    let to_units = |v: &Scalar| -> Option<i64> {
        let scaled = v / spacing;
        if scaled.is_integer() {
            i64::try_from(scaled.numer()).ok()
        } else {
            None
        }
    };
    // Ceiling of v/spacing; BigInt division truncates toward zero.
    let ceil_units = |v: &Scalar| -> i64 {
        let scaled = v / spacing;
        let q: i64 = i64::try_from(&(scaled.numer() / scaled.denom())).expect("fits i64");
        if scaled.is_integer() || scaled.is_negative() {
            q
        } else {
            q + 1
        }
    };
    let x_lo = ceil_units(&bbox.x_lo);
    let y_lo = ceil_units(&bbox.y_lo);
    let from_units = |ux: i64, uy: i64| -> Point {
        Point::new(
            Scalar::from_int(ux) * spacing.clone(),
            Scalar::from_int(uy) * spacing.clone(),
        )
    };
    let mut pts: Vec<(i64, i64)> = Vec::new();
    let mut index = std::collections::HashMap::new();
    {
        let mut ux = x_lo;
        loop {
            let x = Scalar::from_int(ux) * spacing.clone();
            if x > bbox.x_hi {
                break;
            }
            let fiber = f.region().fiber_at(&x);
            if !fiber.is_empty() {
                let mut uy = y_lo;
                loop {
                    let y = Scalar::from_int(uy) * spacing.clone();
                    if y > bbox.y_hi {
                        break;
                    }
                    if fiber.contains(&y) {
                        index.insert((ux, uy), pts.len() as u32);
                        pts.push((ux, uy));
                    }
                    uy += 1;
                }
            }
            ux += 1;
        }
    }
    let n = pts.len();
    if (n as u64) * (n as u64) > budget {
        return Err(HardnessError::BudgetExceeded(format!(
            "lattice needs {} pairs, budget {}",
            (n as u64) * (n as u64),
            budget
        )));
    }
    // Per-point moves: stay plus the four axis steps with a free swept
    // segment. Move 0 is always "stay".
    let dirs: [(i64, i64); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];
    let mut moves: Vec<Vec<u32>> = vec![Vec::with_capacity(5); n];
    for (i, &(ux, uy)) in pts.iter().enumerate() {
        moves[i].push(i as u32);
        for (dx, dy) in dirs {
            if let Some(&j) = index.get(&(ux + dx, uy + dy)) {
                let seg = AxisSegment {
                    a: from_units(ux, uy),
                    b: from_units(ux + dx, uy + dy),
                };
                if f.segment_in_free(&seg) {
                    moves[i].push(j);
                }
            }
        }
    }
    let locate = |p: &Point| -> Option<u32> {
        let ux = to_units(&p.x)?;
        let uy = to_units(&p.y)?;
        index.get(&(ux, uy)).copied()
    };
    let (Some(sa), Some(sb), Some(ta), Some(tb)) =
        (locate(&s.a), locate(&s.b), locate(&t.a), locate(&t.b))
    else {
        return Ok(TinySearchOutcome::NotFoundAtResolution);
    };
    // Joint BFS with exact integer separation checks per step.
    let max_steps_exact = t_max / time_step;
    let max_steps: i64 = {
        let num = max_steps_exact.numer();
        let den = max_steps_exact.denom();
        i64::try_from(&(num / den)).expect("step bound fits i64")
    };
    if max_steps < 0 {
        return Ok(TinySearchOutcome::NotFoundAtResolution);
    }
    let key = |a: u32, b: u32| -> usize { a as usize * n + b as usize };
    let mut dist: Vec<u32> = vec![u32::MAX; n * n];
    let mut pred: Vec<u32> = vec![u32::MAX; n * n];
    let mut queue = std::collections::VecDeque::new();
    if sep_ok_static(&pts, sa, sb, sep_units) {
        dist[key(sa, sb)] = 0;
        queue.push_back((sa, sb));
    }
    let goal = (ta, tb);
    let mut found = false;
    while let Some((a, b)) = queue.pop_front() {
        let d = dist[key(a, b)];
        if (a, b) == goal {
            found = d as i64 <= max_steps;
            break;
        }
        if d as i64 >= max_steps {
            continue; // deeper layers cannot finish in time
        }
        for &a2 in &moves[a as usize] {
            for &b2 in &moves[b as usize] {
                let k = key(a2, b2);
                if dist[k] != u32::MAX {
                    continue;
                }
                if !joint_step_ok(&pts, a, b, a2, b2, sep_units) {
                    continue;
                }
                dist[k] = d + 1;
                pred[k] = key(a, b) as u32;
                queue.push_back((a2, b2));
            }
        }
    }
    if !found {
        return Ok(TinySearchOutcome::NotFoundAtResolution);
    }
    // Reconstruct the witness trajectory.
    let mut states: Vec<(u32, u32)> = vec![goal];
    let mut cur = key(goal.0, goal.1);
    while dist[cur] != 0 {
        let p = pred[cur] as usize;
        states.push(((p / n) as u32, (p % n) as u32));
        cur = p;
    }
    states.reverse();
    let mut traj_a: Trajectory = Vec::with_capacity(states.len());
    let mut traj_b: Trajectory = Vec::with_capacity(states.len());
    for (k, (a, b)) in states.iter().enumerate() {
        let t = Scalar::from_int(k as i64) * time_step.clone();
        let (ax, ay) = pts[*a as usize];
        let (bx, by) = pts[*b as usize];
        traj_a.push((t.clone(), from_units(ax, ay)));
        traj_b.push((t, from_units(bx, by)));
    }
    let horizon = Scalar::from_int((states.len() - 1) as i64) * time_step.clone();
    let plan = TimedPlan {
        traj_a,
        traj_b,
        horizon,
    };
    let report = validate_timed(&f, &plan);
    assert!(
        report.ok(),
        "lattice witness failed validation: {:?}",
        report.violations
    );
    Ok(TinySearchOutcome::Feasible(plan))
}

fn sep_ok_static(pts: &[(i64, i64)], a: u32, b: u32, sep: i64) -> bool {
    let (ax, ay) = pts[a as usize];
    let (bx, by) = pts[b as usize];
    (ax - bx).abs().max((ay - by).abs()) >= sep
}

/// Exact separation over one synchronized linear step, in lattice units.
/// min over λ of max(|dx0 + λ·ddx|, |dy0 + λ·ddy|) ≥ sep, decided by the
/// endpoint values plus the interior kink candidates, whose common value is
/// |dy0·ddx - dx0·ddy| / |den| for den in {ddx, ddy, ddx-ddy, ddx+ddy}.
fn joint_step_ok(pts: &[(i64, i64)], a0: u32, b0: u32, a1: u32, b1: u32, sep: i64) -> bool {
    let (ax0, ay0) = pts[a0 as usize];
    let (bx0, by0) = pts[b0 as usize];
    let (ax1, ay1) = pts[a1 as usize];
    let (bx1, by1) = pts[b1 as usize];
    let dx0 = ax0 - bx0;
    let dy0 = ay0 - by0;
    let dx1 = ax1 - bx1;
    let dy1 = ay1 - by1;
    // Endpoints.
    if dx0.abs().max(dy0.abs()) < sep || dx1.abs().max(dy1.abs()) < sep {
        return false;
    }
    let ddx = dx1 - dx0;
    let ddy = dy1 - dy0;
    let cross = (dy0 * ddx - dx0 * ddy).abs();
    // Zero of dx inside (0,1): the envelope value there is |cross|/|ddx|.
    if ddx != 0 && dx0.signum() * dx1.signum() < 0 && cross < sep * ddx.abs() {
        return false;
    }
    if ddy != 0 && dy0.signum() * dy1.signum() < 0 && cross < sep * ddy.abs() {
        return false;
    }
    // Kinks where |dx| = |dy|.
    let u0 = dx0 - dy0;
    let u1 = dx1 - dy1;
    if u0.signum() * u1.signum() < 0 {
        let den = (ddx - ddy).abs();
        if den != 0 && cross < sep * den {
            return false;
        }
    }
    let v0 = dx0 + dy0;
    let v1 = dx1 + dy1;
    if v0.signum() * v1.signum() < 0 {
        let den = (ddx + ddy).abs();
        if den != 0 && cross < sep * den {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sc(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    #[test]
    fn scaling_examples() {
        let x = PartitionInstance::new(vec![1, 1]).unwrap();
        assert_eq!(scale_instance(&x).y, vec![sc(1, 2), sc(1, 2)]);
        let x = PartitionInstance::new(vec![3, 1, 4, 2]).unwrap();
        assert_eq!(
            scale_instance(&x).y,
            vec![sc(3, 10), sc(1, 10), sc(2, 5), sc(1, 5)]
        );
        let x = PartitionInstance::new(vec![5]).unwrap();
        assert_eq!(scale_instance(&x).y, vec![Scalar::one()]);
    }

    #[test]
    fn bad_instances_rejected() {
        assert!(PartitionInstance::new(vec![]).is_err());
        assert!(PartitionInstance::new(vec![1, 0]).is_err());
    }

    #[test]
    fn two_equal_elements_build_and_measure() {
        let x = PartitionInstance::new(vec![1, 1]).unwrap();
        let y = scale_instance(&x);
        let inst = build_hardness_workspace(&y).unwrap();
        assert_eq!(inst.t_max, sc(43, 2));
        assert_eq!(inst.layouts.len(), 2);
        for lay in &inst.layouts {
            assert_eq!(lay.gate.length(), sc(3, 2));
            assert_eq!(polyline_length(&lay.gate_path_a), sc(21, 2));
            assert_eq!(polyline_length(&lay.detour_path_a), Scalar::from_int(11));
        }
        // Chaining: exits coincide with the next entries.
        assert_eq!(inst.layouts[0].t_a, inst.layouts[1].s_a);
        assert_eq!(inst.layouts[0].t_b, inst.layouts[1].s_b);
    }

    #[test]
    fn single_element_instance() {
        let x = PartitionInstance::new(vec![5]).unwrap();
        let y = scale_instance(&x);
        let inst = build_hardness_workspace(&y).unwrap();
        assert_eq!(inst.t_max, sc(21, 2));
        let lay = &inst.layouts[0];
        assert_eq!(lay.gate.length(), Scalar::one());
        assert_eq!(polyline_length(&lay.gate_path_a), Scalar::from_int(10));
        assert_eq!(polyline_length(&lay.detour_path_a), Scalar::from_int(11));
    }

    #[test]
    fn vertex_count_is_linear_in_m() {
        for m in [1usize, 2, 3] {
            let x = PartitionInstance::new(vec![1; m]).unwrap();
            let inst = build_hardness_workspace(&scale_instance(&x)).unwrap();
            assert_eq!(inst.workspace.vertex_count(), 4 + 16 * m);
        }
    }

    #[test]
    fn witness_plan_for_valid_partition() {
        let x = PartitionInstance::new(vec![1, 1]).unwrap();
        let inst = build_hardness_workspace(&scale_instance(&x)).unwrap();
        let plan = plan_from_partition(&inst.layouts, &[1], &[2]).unwrap();
        assert_eq!(plan.horizon, sc(43, 2));
        let f = compute_free_space(&inst.workspace).unwrap();
        let report = validate_timed(&f, &plan);
        assert!(report.ok(), "{:?}", report.violations);
    }

    #[test]
    fn invalid_partition_rejected() {
        let x = PartitionInstance::new(vec![1, 1]).unwrap();
        let inst = build_hardness_workspace(&scale_instance(&x)).unwrap();
        assert!(plan_from_partition(&inst.layouts, &[1, 2], &[2]).is_err());
        assert!(plan_from_partition(&inst.layouts, &[1], &[]).is_err());
        assert!(plan_from_partition(&inst.layouts, &[], &[1]).is_err());
    }

    #[test]
    fn unbalanced_split_still_validates_but_is_slower() {
        // Both elements assigned to A: A uses both gates (length 21), B
        // detours everywhere (length 22); makespan is the maximum, 22.
        let x = PartitionInstance::new(vec![1, 1]).unwrap();
        let inst = build_hardness_workspace(&scale_instance(&x)).unwrap();
        let plan = plan_from_partition(&inst.layouts, &[1, 2], &[]).unwrap_or_else(|_| {
            panic!("full assignment to A is a disjoint cover");
        });
        assert_eq!(plan.horizon, Scalar::from_int(22));
        let f = compute_free_space(&inst.workspace).unwrap();
        assert!(validate_timed(&f, &plan).ok());
        assert!(plan.horizon > inst.t_max);
    }
}
