//! JSON file formats: workspace instances and plans. All rationals travel as
//! `"p/q"` strings, field order is fixed by the struct declarations, and
//! serialization contains nothing nondeterministic.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::GeometryError;
use crate::freespace::{Config, Workspace};
use crate::geometry::{Point, RectilinearPolygon};
use crate::hardness::GadgetLayout;
use crate::plan::{DecoupledPlan, Move, Robot, TimedPlan, Trajectory};
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema: {0}")]
    Schema(String),
    #[error("geometry: {0}")]
    Geometry(#[from] GeometryError),
}

pub type Pair = (Scalar, Scalar);

fn to_pair(p: &Point) -> Pair {
    (p.x.clone(), p.y.clone())
}

fn to_point(p: &Pair) -> Point {
    Point::new(p.0.clone(), p.1.clone())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConfigDto {
    pub a: Pair,
    pub b: Pair,
}

impl ConfigDto {
    pub fn from_config(c: &Config) -> Self {
        ConfigDto {
            a: to_pair(&c.a),
            b: to_pair(&c.b),
        }
    }

    pub fn to_config(&self) -> Config {
        Config::new(to_point(&self.a), to_point(&self.b))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GadgetLayoutDto {
    pub index: usize,
    pub y: Scalar,
    pub s_a: Pair,
    pub s_b: Pair,
    pub t_a: Pair,
    pub t_b: Pair,
    pub gate: (Pair, Pair),
}

impl GadgetLayoutDto {
    pub fn from_layout(l: &GadgetLayout) -> Self {
        GadgetLayoutDto {
            index: l.index,
            y: l.y.clone(),
            s_a: to_pair(&l.s_a),
            s_b: to_pair(&l.s_b),
            t_a: to_pair(&l.t_a),
            t_b: to_pair(&l.t_b),
            gate: (to_pair(&l.gate.a), to_pair(&l.gate.b)),
        }
    }
}

/// Workspace instance file, schema version 1.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WorkspaceFile {
    pub v: u32,
    pub outer: Vec<Pair>,
    pub holes: Vec<Vec<Pair>>,
    pub start: ConfigDto,
    pub goal: ConfigDto,
    /// Present on hardness instances: the makespan decision threshold.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<Scalar>,
    /// Present on hardness instances: per-gadget geometry.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layouts: Option<Vec<GadgetLayoutDto>>,
}

impl WorkspaceFile {
    pub fn from_instance(w: &Workspace, start: &Config, goal: &Config) -> Self {
        let poly = w.polygon();
        WorkspaceFile {
            v: 1,
            outer: poly.outer.iter().map(to_pair).collect(),
            holes: poly
                .holes
                .iter()
                .map(|h| h.iter().map(to_pair).collect())
                .collect(),
            start: ConfigDto::from_config(start),
            goal: ConfigDto::from_config(goal),
            t_max: None,
            layouts: None,
        }
    }

    pub fn parse(json: &str) -> Result<Self, IoError> {
        let file: WorkspaceFile = serde_json::from_str(json)?;
        if file.v != 1 {
            return Err(IoError::Schema(format!(
                "unsupported schema version {}",
                file.v
            )));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("workspace file serializes")
    }

    /// Validated geometric instance.
    pub fn to_instance(&self) -> Result<(Workspace, Config, Config), IoError> {
        let outer = self.outer.iter().map(to_point).collect();
        let holes = self
            .holes
            .iter()
            .map(|h| h.iter().map(to_point).collect())
            .collect();
        let poly = RectilinearPolygon::new(outer, holes)?;
        let w = Workspace::new(poly).map_err(|e| IoError::Schema(e.to_string()))?;
        Ok((w, self.start.to_config(), self.goal.to_config()))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MoveDto {
    pub robot: Robot,
    pub points: Vec<Pair>,
}

/// Plan file: decoupled moves plus an optional timed form.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlanFile {
    pub cost: Scalar,
    pub start: ConfigDto,
    pub moves: Vec<MoveDto>,
    #[serde(rename = "T", default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub traj_a: Option<Vec<(Scalar, Pair)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub traj_b: Option<Vec<(Scalar, Pair)>>,
}

impl PlanFile {
    pub fn from_plan(cost: &Scalar, plan: &DecoupledPlan, timed: Option<&TimedPlan>) -> Self {
        let traj = |t: &Trajectory| -> Vec<(Scalar, Pair)> {
            t.iter().map(|(tt, p)| (tt.clone(), to_pair(p))).collect()
        };
        PlanFile {
            cost: cost.clone(),
            start: ConfigDto::from_config(&plan.start),
            moves: plan
                .moves
                .iter()
                .map(|m| MoveDto {
                    robot: m.robot,
                    points: m.polyline.iter().map(to_pair).collect(),
                })
                .collect(),
            t: timed.map(|tp| tp.horizon.clone()),
            traj_a: timed.map(|tp| traj(&tp.traj_a)),
            traj_b: timed.map(|tp| traj(&tp.traj_b)),
        }
    }

    pub fn parse(json: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(json)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plan file serializes")
    }

    pub fn to_decoupled(&self) -> Result<DecoupledPlan, IoError> {
        let plan = DecoupledPlan {
            start: self.start.to_config(),
            moves: self
                .moves
                .iter()
                .map(|m| Move {
                    robot: m.robot,
                    polyline: m.points.iter().map(to_point).collect(),
                })
                .collect(),
        };
        for (i, m) in plan.moves.iter().enumerate() {
            if m.polyline.is_empty() {
                return Err(IoError::Schema(format!("move {i} has no points")));
            }
            if !m.is_rectilinear() {
                return Err(IoError::Schema(format!(
                    "move {i} contains a non-axis-parallel segment"
                )));
            }
        }
        Ok(plan)
    }

    pub fn to_timed(&self) -> Result<Option<TimedPlan>, IoError> {
        let (Some(t), Some(ta), Some(tb)) = (&self.t, &self.traj_a, &self.traj_b) else {
            return Ok(None);
        };
        let conv = |v: &Vec<(Scalar, Pair)>| -> Trajectory {
            v.iter().map(|(tt, p)| (tt.clone(), to_point(p))).collect()
        };
        let (ta, tb) = (conv(ta), conv(tb));
        if ta.is_empty() || tb.is_empty() {
            return Err(IoError::Schema("timed trajectories must be nonempty".into()));
        }
        Ok(Some(TimedPlan {
            traj_a: ta,
            traj_b: tb,
            horizon: t.clone(),
        }))
    }
}

/// Structured error object printed to stderr by the CLI.
#[derive(Serialize)]
pub struct CliError {
    pub error: String,
    pub detail: String,
}

impl CliError {
    pub fn new(error: &str, detail: impl ToString) -> Self {
        CliError {
            error: error.to_string(),
            detail: detail.to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("error serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Rect;

    #[test]
    fn workspace_file_round_trip() {
        let w = Workspace::rectangle(&Rect::of_ints(0, 5, 0, 4));
        let s = Config::new(
            Point::new(Scalar::from_int(1), Scalar::from_int(1)),
            Point::new(Scalar::from_int(4), Scalar::from_int(1)),
        );
        let t = Config::new(
            Point::new(Scalar::from_int(4), Scalar::from_int(3)),
            Point::new(Scalar::from_int(1), Scalar::from_int(3)),
        );
        let file = WorkspaceFile::from_instance(&w, &s, &t);
        let json = file.to_json();
        let parsed = WorkspaceFile::parse(&json).unwrap();
        assert_eq!(json, parsed.to_json());
        let (w2, s2, t2) = parsed.to_instance().unwrap();
        assert_eq!(w.polygon(), w2.polygon());
        assert_eq!(s, s2);
        assert_eq!(t, t2);
    }

    #[test]
    fn rejects_wrong_version() {
        let w = Workspace::rectangle(&Rect::of_ints(0, 5, 0, 4));
        let c = Config::new(
            Point::new(Scalar::from_int(1), Scalar::from_int(1)),
            Point::new(Scalar::from_int(3), Scalar::from_int(1)),
        );
        let mut file = WorkspaceFile::from_instance(&w, &c, &c);
        file.v = 2;
        assert!(WorkspaceFile::parse(&file.to_json()).is_err());
    }

    #[test]
    fn plan_file_round_trip() {
        let plan = DecoupledPlan {
            start: Config::new(
                Point::new(Scalar::from_int(1), Scalar::from_int(1)),
                Point::new(Scalar::from_int(4), Scalar::from_int(1)),
            ),
            moves: vec![Move {
                robot: Robot::A,
                polyline: vec![
                    Point::new(Scalar::from_int(1), Scalar::from_int(1)),
                    Point::new(Scalar::from_int(1), Scalar::ratio(7, 2)),
                ],
            }],
        };
        let file = PlanFile::from_plan(&Scalar::ratio(5, 2), &plan, None);
        let json = file.to_json();
        let parsed = PlanFile::parse(&json).unwrap();
        assert_eq!(json, parsed.to_json());
        assert_eq!(parsed.to_decoupled().unwrap(), plan);
        assert!(parsed.to_timed().unwrap().is_none());
    }

    #[test]
    fn plan_file_rejects_diagonal_moves() {
        let json = r#"{
            "cost": "2",
            "start": {"a": ["0","0"], "b": ["3","0"]},
            "moves": [{"robot": "A", "points": [["0","0"], ["1","1"]]}]
        }"#;
        let parsed = PlanFile::parse(json).unwrap();
        assert!(parsed.to_decoupled().is_err());
    }
}
