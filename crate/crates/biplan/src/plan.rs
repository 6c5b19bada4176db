//! Plan data model: decoupled move sequences, time-parameterized
//! trajectories, exact cost/makespan evaluation and feasibility validation.
//!
//! All validation verdicts are exact. Continuous separation between the two
//! robots over a time interval is decided by evaluating the piecewise-linear
//! function max(|Δx|, |Δy|) at its O(1) kink candidates, never by sampling.

use serde::{Deserialize, Serialize};

use crate::error::PlanError;
use crate::freespace::{Config, FreeSpace};
use crate::geometry::{l1_dist, AxisSegment, Point};
use crate::planner::linf_point_to_segment;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Robot {
    A,
    B,
}

impl Robot {
    pub fn other(self) -> Robot {
        match self {
            Robot::A => Robot::B,
            Robot::B => Robot::A,
        }
    }
}

/// One move of a decoupled plan: a single robot follows an axis-parallel
/// polyline while the other stays parked. Zero-length segments are legal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub robot: Robot,
    pub polyline: Vec<Point>,
}

impl Move {
    /// Consecutive polyline points must differ in at most one coordinate.
    pub fn is_rectilinear(&self) -> bool {
        self.polyline
            .windows(2)
            .all(|w| w[0].x == w[1].x || w[0].y == w[1].y)
    }

    pub fn length(&self) -> Scalar {
        let mut total = Scalar::zero();
        for w in self.polyline.windows(2) {
            total += l1_dist(&w[0], &w[1]);
        }
        total
    }

    pub fn segments(&self) -> impl Iterator<Item = AxisSegment> + '_ {
        self.polyline.windows(2).map(|w| AxisSegment {
            a: w[0].clone(),
            b: w[1].clone(),
        })
    }

    /// Appends a vertex, collapsing a monotone collinear continuation.
    pub fn push_collapsing(&mut self, to: Point) {
        let n = self.polyline.len();
        if n >= 2 {
            let a = &self.polyline[n - 2];
            let b = &self.polyline[n - 1];
            let same_col = a.x == b.x && b.x == to.x;
            let same_row = a.y == b.y && b.y == to.y;
            let monotone = if same_col {
                (a.y <= b.y && b.y <= to.y) || (a.y >= b.y && b.y >= to.y)
            } else if same_row {
                (a.x <= b.x && b.x <= to.x) || (a.x >= b.x && b.x >= to.x)
            } else {
                false
            };
            if monotone {
                self.polyline[n - 1] = to;
                return;
            }
        }
        self.polyline.push(to);
    }
}

/// A decoupled plan: a start configuration and a sequence of moves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoupledPlan {
    pub start: Config,
    pub moves: Vec<Move>,
}

impl DecoupledPlan {
    /// Position of each robot just before move `i` (continuity assumed).
    fn positions_before(&self, idx: usize) -> Config {
        let mut a = self.start.a.clone();
        let mut b = self.start.b.clone();
        for m in &self.moves[..idx] {
            if let Some(last) = m.polyline.last() {
                match m.robot {
                    Robot::A => a = last.clone(),
                    Robot::B => b = last.clone(),
                }
            }
        }
        Config::new(a, b)
    }

    pub fn end(&self) -> Config {
        self.positions_before(self.moves.len())
    }

    /// Checks move chaining: every polyline starts where its robot last
    /// ended. Returns the index of the first broken move.
    pub fn continuity_break(&self) -> Option<usize> {
        let mut a = self.start.a.clone();
        let mut b = self.start.b.clone();
        for (i, m) in self.moves.iter().enumerate() {
            let Some(first) = self.moves[i].polyline.first() else {
                return Some(i);
            };
            let cur = match m.robot {
                Robot::A => &a,
                Robot::B => &b,
            };
            if first != cur || !m.is_rectilinear() {
                return Some(i);
            }
            let last = m.polyline.last().unwrap().clone();
            match m.robot {
                Robot::A => a = last,
                Robot::B => b = last,
            }
        }
        None
    }
}

/// Exact total ℓ1 length of all moves.
pub fn plan_cost(p: &DecoupledPlan) -> Result<Scalar, PlanError> {
    if let Some(i) = p.continuity_break() {
        return Err(PlanError::DiscontinuousPlan(i));
    }
    let mut total = Scalar::zero();
    for m in &p.moves {
        total += m.length();
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ViolationKind {
    OutsideFree,
    RobotCollision,
    Discontinuity,
    Overspeed,
}

/// One validation failure with its locus and witness data.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Index of the offending move (decoupled) or interval (timed).
    pub index: usize,
    /// Witness time for timed plans.
    pub time: Option<Scalar>,
    pub detail: String,
}

/// Validation outcome; `ok` iff no violations.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, kind: ViolationKind, index: usize, time: Option<Scalar>, detail: String) {
        self.violations.push(Violation {
            kind,
            index,
            time,
            detail,
        });
    }
}

/// Validates a decoupled plan: continuity, every swept segment inside the
/// free space, and ℓ∞ separation ≥ 1 between the moving robot's segments and
/// the parked robot.
pub fn validate_decoupled(f: &FreeSpace, p: &DecoupledPlan) -> ValidationReport {
    let mut report = ValidationReport::default();
    if let Some(i) = p.continuity_break() {
        report.push(
            ViolationKind::Discontinuity,
            i,
            None,
            "move does not start at the robot's current position".into(),
        );
        return report;
    }
    for (q, who) in [(&p.start.a, "A"), (&p.start.b, "B")] {
        if !f.contains_point(q) {
            report.push(
                ViolationKind::OutsideFree,
                0,
                None,
                format!("start position of {who} at {q:?} is outside the free space"),
            );
        }
    }
    let one = Scalar::one();
    for (i, m) in p.moves.iter().enumerate() {
        let parked = match m.robot {
            Robot::A => p.positions_before(i).b,
            Robot::B => p.positions_before(i).a,
        };
        for seg in m.segments() {
            if !f.segment_in_free(&seg) {
                report.push(
                    ViolationKind::OutsideFree,
                    i,
                    None,
                    format!("segment {:?} -> {:?} leaves the free space", seg.a, seg.b),
                );
            }
            let sep = linf_point_to_segment(&parked, &seg);
            if sep < one {
                report.push(
                    ViolationKind::RobotCollision,
                    i,
                    None,
                    format!(
                        "segment {:?} -> {:?} passes at ℓ∞ distance {} from the parked robot at {:?}",
                        seg.a, seg.b, sep, parked
                    ),
                );
            }
        }
    }
    report
}

/// Piecewise-linear trajectory: (time, position) breakpoints with
/// nondecreasing times.
pub type Trajectory = Vec<(Scalar, Point)>;

/// Time-parameterized simultaneous plan for both robots on `[0, T]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimedPlan {
    pub traj_a: Trajectory,
    pub traj_b: Trajectory,
    pub horizon: Scalar,
}

/// Makespan of a timed plan.
pub fn makespan(tp: &TimedPlan) -> Scalar {
    tp.horizon.clone()
}

/// Converts a decoupled plan to a timed plan: moves execute sequentially at
/// unit speed, the parked robot holds position, and T equals the plan cost.
pub fn to_timed(p: &DecoupledPlan) -> Result<TimedPlan, PlanError> {
    if let Some(i) = p.continuity_break() {
        return Err(PlanError::InvalidPlan(format!(
            "discontinuous at move {i}"
        )));
    }
    let mut t = Scalar::zero();
    let mut traj_a: Trajectory = vec![(t.clone(), p.start.a.clone())];
    let mut traj_b: Trajectory = vec![(t.clone(), p.start.b.clone())];
    for m in &p.moves {
        // Pin the mover at its position until this move starts; otherwise the
        // piecewise-linear interpolation would let it drift during the wait.
        {
            let traj = match m.robot {
                Robot::A => &mut traj_a,
                Robot::B => &mut traj_b,
            };
            let last = traj.last().unwrap().clone();
            if last.0 != t {
                traj.push((t.clone(), last.1));
            }
        }
        for w in m.polyline.windows(2) {
            let d = l1_dist(&w[0], &w[1]);
            if d.is_zero() {
                continue;
            }
            t = &t + &d;
            match m.robot {
                Robot::A => traj_a.push((t.clone(), w[1].clone())),
                Robot::B => traj_b.push((t.clone(), w[1].clone())),
            }
        }
    }
    // Close both trajectories at the horizon.
    for traj in [&mut traj_a, &mut traj_b] {
        let last = traj.last().unwrap().clone();
        if last.0 != t {
            traj.push((t.clone(), last.1));
        }
    }
    Ok(TimedPlan {
        traj_a,
        traj_b,
        horizon: t,
    })
}

/// Position on a trajectory at time `t` (constant before the first and after
/// the last breakpoint).
pub fn position_at(traj: &Trajectory, t: &Scalar) -> Point {
    debug_assert!(!traj.is_empty());
    if *t <= traj[0].0 {
        return traj[0].1.clone();
    }
    for w in traj.windows(2) {
        let (t0, p0) = &w[0];
        let (t1, p1) = &w[1];
        if t0 <= t && t <= t1 {
            if t0 == t1 {
                continue;
            }
            let lam = (t - t0) / (t1 - t0);
            return Point::new(
                &p0.x + &(lam.clone() * (&p1.x - &p0.x)),
                &p0.y + &(lam * (&p1.y - &p0.y)),
            );
        }
    }
    traj.last().unwrap().1.clone()
}

/// Minimum over λ ∈ [0,1] of max(|dx(λ)|, |dy(λ)|) for linear dx, dy, with
/// the witness λ. The candidates are the endpoints and the kinks of the
/// piecewise-linear envelope: zeros of dx, dy, of dx ∓ dy, and the crossings
/// of ±1 by either coordinate.
fn min_linf_separation(
    dx0: &Scalar,
    ddx: &Scalar,
    dy0: &Scalar,
    ddy: &Scalar,
) -> (Scalar, Scalar) {
    let mut candidates = vec![Scalar::zero(), Scalar::one()];
    let mut add_root = |num: Scalar, den: Scalar| {
        if !den.is_zero() {
            let lam = num / den;
            if !lam.is_negative() && lam <= Scalar::one() {
                candidates.push(lam);
            }
        }
    };
    // dx = 0, dy = 0
    add_root(-dx0.clone(), ddx.clone());
    add_root(-dy0.clone(), ddy.clone());
    // dx = dy, dx = -dy
    add_root(dy0 - dx0, ddx - ddy);
    add_root(-(dy0 + dx0), ddx + ddy);
    // |dx| = 1, |dy| = 1
    for sign in [Scalar::one(), -Scalar::one()] {
        add_root(&sign - dx0, ddx.clone());
        add_root(&sign - dy0, ddy.clone());
    }
    let eval = |lam: &Scalar| -> Scalar {
        let dx = (dx0 + &(lam * ddx)).abs();
        let dy = (dy0 + &(lam * ddy)).abs();
        dx.max(dy)
    };
    let mut best_lam = candidates[0].clone();
    let mut best = eval(&best_lam);
    for lam in &candidates[1..] {
        let v = eval(lam);
        if v < best {
            best = v;
            best_lam = lam.clone();
        }
    }
    (best, best_lam)
}

/// Validates a timed plan exactly: on the merged breakpoint grid, every
/// interval gets (i) swept-region membership per robot, (ii) the continuous
/// ℓ∞ separation check, (iii) the ℓ1 speed bound.
pub fn validate_timed(f: &FreeSpace, tp: &TimedPlan) -> ValidationReport {
    let mut report = ValidationReport::default();
    for (traj, who) in [(&tp.traj_a, "A"), (&tp.traj_b, "B")] {
        if traj.is_empty() {
            report.push(
                ViolationKind::Discontinuity,
                0,
                None,
                format!("trajectory of {who} is empty"),
            );
            return report;
        }
        for (i, w) in traj.windows(2).enumerate() {
            if w[1].0 < w[0].0 {
                report.push(
                    ViolationKind::Discontinuity,
                    i,
                    Some(w[1].0.clone()),
                    format!("times of {who} decrease at breakpoint {}", i + 1),
                );
                return report;
            }
            if w[1].0 == w[0].0 && w[1].1 != w[0].1 {
                report.push(
                    ViolationKind::Discontinuity,
                    i,
                    Some(w[0].0.clone()),
                    format!("{who} jumps position instantaneously at t={}", w[0].0),
                );
                return report;
            }
        }
    }
    // Merged time grid over [0, T].
    let mut times: Vec<Scalar> = vec![Scalar::zero(), tp.horizon.clone()];
    times.extend(tp.traj_a.iter().map(|(t, _)| t.clone()));
    times.extend(tp.traj_b.iter().map(|(t, _)| t.clone()));
    times.retain(|t| !t.is_negative() && *t <= tp.horizon);
    times.sort();
    times.dedup();

    let one = Scalar::one();
    for (idx, w) in times.windows(2).enumerate() {
        let (t0, t1) = (&w[0], &w[1]);
        let dt = t1 - t0;
        let a0 = position_at(&tp.traj_a, t0);
        let a1 = position_at(&tp.traj_a, t1);
        let b0 = position_at(&tp.traj_b, t0);
        let b1 = position_at(&tp.traj_b, t1);
        // (iii) speed: ℓ1 displacement per unit time ≤ 1 per robot.
        for (p0, p1, who) in [(&a0, &a1, "A"), (&b0, &b1, "B")] {
            let d = l1_dist(p0, p1);
            if d > dt {
                report.push(
                    ViolationKind::Overspeed,
                    idx,
                    Some(t0.clone()),
                    format!(
                        "{who} covers ℓ1 distance {} in time {} on [{}, {}]",
                        d, dt, t0, t1
                    ),
                );
            }
        }
        // (i) swept motion inside the free space.
        for (p0, p1, who) in [(&a0, &a1, "A"), (&b0, &b1, "B")] {
            if !f.region().contains_linear_motion(p0, p1) {
                report.push(
                    ViolationKind::OutsideFree,
                    idx,
                    Some(t0.clone()),
                    format!("{who} sweeps {:?} -> {:?} outside the free space", p0, p1),
                );
            }
        }
        // (ii) continuous separation.
        let dx0 = &a0.x - &b0.x;
        let dy0 = &a0.y - &b0.y;
        let ddx = &(&a1.x - &b1.x) - &dx0;
        let ddy = &(&a1.y - &b1.y) - &dy0;
        let (min_sep, lam) = min_linf_separation(&dx0, &ddx, &dy0, &ddy);
        if min_sep < one {
            let witness = t0 + &(lam * dt);
            report.push(
                ViolationKind::RobotCollision,
                idx,
                Some(witness.clone()),
                format!("ℓ∞ separation drops to {} at t={}", min_sep, witness),
            );
        }
    }
    report
}
