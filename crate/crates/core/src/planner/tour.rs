//! Waypoint tours: nearest-neighbor construction and 2-opt improvement.

use rand::Rng;

use crate::mapmodel::Cell;
use crate::rng::SimRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Waypoint {
    pub row: usize,
    pub col: usize,
}

impl Waypoint {
    pub fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }

    pub fn cell(self) -> Cell {
        (self.row, self.col)
    }

    pub fn distance(self, other: Waypoint) -> f64 {
        let dr = self.row as f64 - other.row as f64;
        let dc = self.col as f64 - other.col as f64;
        (dr * dr + dc * dc).sqrt()
    }
}

impl From<Cell> for Waypoint {
    fn from((row, col): Cell) -> Self {
        Self { row, col }
    }
}

/// Closed tour over distinct waypoints; `length` includes the closing edge.
#[derive(Debug, Clone, PartialEq)]
pub struct Tour {
    order: Vec<Waypoint>,
    length: f64,
}

pub(crate) fn closed_length(order: &[Waypoint]) -> f64 {
    if order.len() < 2 {
        return 0.0;
    }
    let open: f64 = order.windows(2).map(|w| w[0].distance(w[1])).sum();
    open + order[order.len() - 1].distance(order[0])
}

impl Tour {
    pub fn new(order: Vec<Waypoint>) -> Self {
        let length = closed_length(&order);
        Self { order, length }
    }

    pub fn order(&self) -> &[Waypoint] {
        &self.order
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn into_order(self) -> Vec<Waypoint> {
        self.order
    }
}

/// Greedy nearest-neighbor tour starting at `points[start]`.
///
/// Distance ties go to the lexicographically smallest waypoint.
pub fn nearest_neighbor_tour(points: &[Waypoint], start: usize) -> Tour {
    if points.is_empty() {
        return Tour::new(Vec::new());
    }
    let mut remaining: Vec<Waypoint> = points.to_vec();
    let mut current = remaining.swap_remove(start);
    let mut order = Vec::with_capacity(points.len());
    order.push(current);
    while !remaining.is_empty() {
        let (idx, _) = remaining
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                current
                    .distance(**a)
                    .total_cmp(&current.distance(**b))
                    .then(a.cmp(b))
            })
            .expect("non-empty");
        current = remaining.swap_remove(idx);
        order.push(current);
    }
    Tour::new(order)
}

/// Nearest-neighbor construction from a seeded random start.
pub fn seeded_nearest_neighbor_tour(points: &[Waypoint], rng: &mut SimRng) -> Tour {
    if points.is_empty() {
        return Tour::new(Vec::new());
    }
    let start = rng.random_range(0..points.len());
    nearest_neighbor_tour(points, start)
}

const IMPROVEMENT_EPS: f64 = 1e-10;

/// First-improvement 2-opt.
///
/// Each pass scans edge pairs `(i, j)` in index order and applies every
/// strictly improving segment reversal as soon as it is found. Stops after a
/// pass without improvement or after `budget` passes. The first waypoint never
/// moves. Tours with fewer than four waypoints are returned unchanged.
pub fn improve_tour(initial: &Tour, budget: usize) -> Tour {
    let n = initial.len();
    if n < 4 {
        return initial.clone();
    }
    let mut order = initial.order.clone();
    for _ in 0..budget {
        let mut improved = false;
        for i in 0..n - 2 {
            // edge (i, i+1) against edge (j, j+1 mod n); the pair sharing
            // node 0 is skipped
            let last = if i == 0 { n - 1 } else { n };
            for j in i + 2..last {
                let (a, b) = (order[i], order[i + 1]);
                let (c, d) = (order[j], order[(j + 1) % n]);
                let delta = a.distance(c) + b.distance(d) - a.distance(b) - c.distance(d);
                if delta < -IMPROVEMENT_EPS {
                    order[i + 1..=j].reverse();
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
    let improved = Tour::new(order);
    if improved.length <= initial.length {
        improved
    } else {
        initial.clone()
    }
}
