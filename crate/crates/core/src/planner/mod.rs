//! Coverage planners.
//!
//! Every planner is a pure function of the known map, the robot pose and a
//! seed. [`Planner::plan`] returns what the robot should follow next: a single
//! goal, a fixed route, or a whole tour.

mod tour;

pub use tour::{improve_tour, nearest_neighbor_tour, seeded_nearest_neighbor_tour, Tour, Waypoint};

use rand::seq::index;
use rand::SeedableRng;

use crate::error::{Error, Result};
use crate::mapmodel::{Cell, CellState, FeatureMap};
use crate::matcomp::{sample_bound, LogBase};
use crate::rng::{derive_seed, SimRng, Stream};

/// Candidate pool drawn by the myopic planner.
pub const MYOPIC_CANDIDATES: usize = 32;
/// Default number of 2-opt passes.
pub const DEFAULT_TWO_OPT_BUDGET: usize = 50;
/// Default rank assumed by the TSP planner when sizing its waypoint set.
pub const DEFAULT_RANK_HINT: usize = 11;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlannerKind {
    Lawnmower,
    MyopicGreedy,
    FeatureFrontier,
    TspEps { epsilon: f64, coefficient_c: f64 },
}

impl PlannerKind {
    pub fn validate(&self) -> Result<()> {
        if let PlannerKind::TspEps {
            epsilon,
            coefficient_c,
        } = *self
        {
            if !(epsilon.is_finite() && epsilon > 0.0) {
                return Err(Error::invalid(format!("epsilon must be positive, got {epsilon}")));
            }
            if !(coefficient_c.is_finite() && coefficient_c > 0.0) {
                return Err(Error::invalid(format!(
                    "coefficient C must be positive, got {coefficient_c}"
                )));
            }
        }
        Ok(())
    }

    /// Short label: `lm`, `mg`, `ff`, or `tsp:<eps>` (`tsp:<eps>:<C>` when C
    /// differs from 2).
    pub fn label(&self) -> String {
        match *self {
            PlannerKind::Lawnmower => "lm".into(),
            PlannerKind::MyopicGreedy => "mg".into(),
            PlannerKind::FeatureFrontier => "ff".into(),
            PlannerKind::TspEps {
                epsilon,
                coefficient_c,
            } => {
                if coefficient_c == 2.0 {
                    format!("tsp:{epsilon}")
                } else {
                    format!("tsp:{epsilon}:{coefficient_c}")
                }
            }
        }
    }

    /// Inverse of [`PlannerKind::label`]; also accepts long names.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let lower = s.to_ascii_lowercase();
        let kind = match lower.as_str() {
            "lm" | "lawnmower" => PlannerKind::Lawnmower,
            "mg" | "grs" | "myopic" | "myopic_greedy" => PlannerKind::MyopicGreedy,
            "ff" | "frontier" | "feature_frontier" => PlannerKind::FeatureFrontier,
            _ => {
                let rest = lower
                    .strip_prefix("tsp:")
                    .ok_or_else(|| Error::invalid(format!("unknown planner `{s}`")))?;
                let mut parts = rest.split(':');
                let num = |p: Option<&str>, what: &str| -> Result<f64> {
                    p.ok_or_else(|| Error::invalid(format!("planner `{s}` is missing {what}")))?
                        .parse::<f64>()
                        .map_err(|_| Error::invalid(format!("planner `{s}` has a bad {what}")))
                };
                let epsilon = num(parts.next(), "epsilon")?;
                let coefficient_c = match parts.next() {
                    Some(c) => num(Some(c), "coefficient")?,
                    None => 2.0,
                };
                if parts.next().is_some() {
                    return Err(Error::invalid(format!("planner `{s}` has trailing fields")));
                }
                PlannerKind::TspEps {
                    epsilon,
                    coefficient_c,
                }
            }
        };
        kind.validate()?;
        Ok(kind)
    }
}

/// What the robot should follow next.
#[derive(Debug, Clone, PartialEq)]
pub enum Plan {
    /// Travel to one cell, then ask again.
    Goal(Waypoint),
    /// Follow a fixed polyline to its end.
    Route(Vec<Waypoint>),
    /// Visit every waypoint of the tour in order.
    Tour(Tour),
    /// Nothing is left to explore.
    Complete,
}

/// A planner together with the sensing and sizing parameters it depends on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Planner {
    pub kind: PlannerKind,
    pub footprint_half_extent: usize,
    pub rank_hint: usize,
    pub two_opt_budget: usize,
    pub log_base: LogBase,
    /// Whether a TSP tour returns to its first waypoint.
    pub closed_tour: bool,
}

impl Planner {
    pub fn new(kind: PlannerKind) -> Self {
        Self {
            kind,
            footprint_half_extent: 5,
            rank_hint: DEFAULT_RANK_HINT,
            two_opt_budget: DEFAULT_TWO_OPT_BUDGET,
            log_base: LogBase::default(),
            closed_tour: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.kind.validate()?;
        if self.rank_hint == 0 {
            return Err(Error::invalid("rank hint must be positive"));
        }
        Ok(())
    }

    pub fn footprint_side(&self) -> usize {
        2 * self.footprint_half_extent + 1
    }

    pub fn plan(&self, known: &FeatureMap, pose: Cell, seed: u64) -> Result<Plan> {
        self.validate()?;
        if !known.in_bounds(pose) {
            return Err(Error::invalid(format!(
                "pose {pose:?} outside {}x{} map",
                known.rows(),
                known.cols()
            )));
        }
        if known.is_fully_known() {
            return Ok(Plan::Complete);
        }
        let plan = match self.kind {
            PlannerKind::Lawnmower => {
                Plan::Route(lawnmower_route(known.rows(), known.cols(), self.footprint_side()))
            }
            PlannerKind::MyopicGreedy => Plan::Goal(myopic_goal(known, pose, seed)),
            PlannerKind::FeatureFrontier => Plan::Goal(
                frontier_goal(known, pose).unwrap_or_else(|| myopic_goal(known, pose, seed)),
            ),
            PlannerKind::TspEps {
                epsilon,
                coefficient_c,
            } => {
                let n = known.rows().max(known.cols());
                let count = waypoint_count(
                    coefficient_c,
                    n,
                    self.rank_hint,
                    self.footprint_side().pow(2),
                    epsilon,
                    self.log_base,
                )?;
                let total = known.len();
                if count > total as u64 {
                    return Err(Error::DegeneratePlan(format!(
                        "{count} waypoints requested on a map of {total} cells"
                    )));
                }
                let points = sample_waypoints(known.dims(), count as usize, seed)?;
                Plan::Tour(tsp_tour(&points, pose, self.two_opt_budget))
            }
        };
        Ok(plan)
    }
}

/// One-shot planning with default parameters.
pub fn plan(kind: PlannerKind, known: &FeatureMap, pose: Cell, rng_seed: u64) -> Result<Plan> {
    Planner::new(kind).plan(known, pose, rng_seed)
}

/// Number of TSP waypoints: `floor(eps * floor(m / footprint_cells))` where
/// `m` is the completion sample bound.
pub fn waypoint_count(
    coefficient_c: f64,
    n: usize,
    r: usize,
    footprint_cells: usize,
    epsilon: f64,
    base: LogBase,
) -> Result<u64> {
    if footprint_cells == 0 {
        return Err(Error::invalid("footprint must cover at least one cell"));
    }
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::invalid(format!("epsilon must be positive, got {epsilon}")));
    }
    let m = sample_bound(n, r, coefficient_c, base)?;
    let per_footprint = m / footprint_cells as u64;
    let count = (epsilon * per_footprint as f64).floor() as u64;
    if count == 0 {
        return Err(Error::DegeneratePlan(format!(
            "waypoint count is 0 (C = {coefficient_c}, eps = {epsilon}, n = {n}, r = {r}); \
             raise epsilon or C"
        )));
    }
    Ok(count)
}

/// `count` distinct cells drawn uniformly, in draw order.
pub fn sample_waypoints(dims: (usize, usize), count: usize, seed: u64) -> Result<Vec<Waypoint>> {
    let (rows, cols) = dims;
    let total = rows * cols;
    if count > total {
        return Err(Error::invalid(format!(
            "cannot sample {count} distinct waypoints from {total} cells"
        )));
    }
    let mut rng = SimRng::seed_from_u64(derive_seed(seed, Stream::Waypoints, 0));
    Ok(index::sample(&mut rng, total, count)
        .into_iter()
        .map(|k| Waypoint::new(k / cols, k % cols))
        .collect())
}

/// Nearest-neighbor tour from the waypoint closest to `pose`, then 2-opt.
fn tsp_tour(points: &[Waypoint], pose: Cell, budget: usize) -> Tour {
    let here = Waypoint::from(pose);
    let start = points
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| here.distance(**a).total_cmp(&here.distance(**b)).then(a.cmp(b)))
        .map(|(i, _)| i)
        .unwrap_or(0);
    improve_tour(&nearest_neighbor_tour(points, start), budget)
}

/// Boustrophedon sweep over rows `0, s, 2s, ...`, finishing on the last row.
pub fn lawnmower_route(rows: usize, cols: usize, spacing: usize) -> Vec<Waypoint> {
    let spacing = spacing.max(1);
    let mut sweep_rows: Vec<usize> = (0..rows).step_by(spacing).collect();
    if sweep_rows.last() != Some(&(rows - 1)) && rows > 0 {
        let last = *sweep_rows.last().unwrap();
        // a trailing strip wider than half a footprint needs its own pass
        if rows - 1 - last > spacing / 2 {
            sweep_rows.push(rows - 1);
        }
    }
    let mut route = Vec::with_capacity(2 * sweep_rows.len());
    for (k, &r) in sweep_rows.iter().enumerate() {
        let (a, b) = if k % 2 == 0 { (0, cols - 1) } else { (cols - 1, 0) };
        route.push(Waypoint::new(r, a));
        if b != a {
            route.push(Waypoint::new(r, b));
        }
    }
    route
}

fn nearest(pose: Cell, cells: impl Iterator<Item = Cell>) -> Option<Cell> {
    let here = Waypoint::from(pose);
    cells.min_by(|a, b| {
        here.distance((*a).into())
            .total_cmp(&here.distance((*b).into()))
            .then(a.cmp(b))
    })
}

fn myopic_goal(known: &FeatureMap, pose: Cell, seed: u64) -> Waypoint {
    let unknown: Vec<Cell> = known
        .iter()
        .filter(|(_, s)| *s == CellState::Unknown)
        .map(|(c, _)| c)
        .collect();
    let mut rng = SimRng::seed_from_u64(derive_seed(seed, Stream::Planner, 0));
    let take = MYOPIC_CANDIDATES.min(unknown.len());
    let picks = index::sample(&mut rng, unknown.len(), take);
    nearest(pose, picks.into_iter().map(|k| unknown[k]))
        .expect("at least one unknown cell")
        .into()
}

/// Nearest unknown cell 4-adjacent to a known featured cell.
fn frontier_goal(known: &FeatureMap, pose: Cell) -> Option<Waypoint> {
    let (rows, cols) = known.dims();
    let frontier = known.iter().filter_map(|((r, c), s)| {
        if s != CellState::Unknown {
            return None;
        }
        let featured = |rr: usize, cc: usize| known.get((rr, cc)) == CellState::Featured;
        let touches = (r > 0 && featured(r - 1, c))
            || (r + 1 < rows && featured(r + 1, c))
            || (c > 0 && featured(r, c - 1))
            || (c + 1 < cols && featured(r, c + 1));
        touches.then_some((r, c))
    });
    nearest(pose, frontier).map(Waypoint::from)
}
