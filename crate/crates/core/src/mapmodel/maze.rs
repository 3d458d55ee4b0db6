//! Recursive-division maze generator with measured rank control.
//!
//! Mazes live on a coarse lattice of `unit x unit` cell blocks. Walls occupy
//! odd lattice lines and span their chamber except for a one-unit door on an
//! even lattice index, so later perpendicular walls never close an earlier
//! door. Chambers are divided largest-first and the encoded matrix's numeric
//! rank is measured after every wall; division stops once the rank reaches
//! the target. The lattice unit starts at `min(rows, cols) / (target + 2)`
//! (never below `corridor_width`) and is refined when a fully divided maze
//! still falls short of the rank band.

use rand::Rng;

use super::{encode, CellState, EncodingScheme, FeatureMap};
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::matcomp::{structure_report, DEFAULT_RANK_TOLERANCE};
use crate::rng::{stream_rng, SimRng, Stream};

/// Accepted distance between measured and target rank.
pub const RANK_BAND: usize = 3;
/// Attempts (each with a fresh derived seed) before giving up.
pub const MAX_ATTEMPTS: u64 = 20;
const DEFAULT_RESOLUTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MazeSpec {
    pub rows: usize,
    pub cols: usize,
    pub target_rank: usize,
    /// Smallest lattice unit (corridor and wall width) in cells.
    pub corridor_width: usize,
    pub seed: u64,
}

impl MazeSpec {
    pub fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::invalid("maze dimensions must be positive"));
        }
        if self.target_rank == 0 {
            return Err(Error::invalid("maze target_rank must be positive"));
        }
        if self.target_rank > self.rows.min(self.cols) {
            return Err(Error::invalid(format!(
                "maze target_rank {} exceeds min(rows, cols) = {}",
                self.target_rank,
                self.rows.min(self.cols)
            )));
        }
        if self.corridor_width == 0 {
            return Err(Error::invalid("maze corridor_width must be at least 1"));
        }
        Ok(())
    }
}

/// Generator output with the measurements that accepted it.
#[derive(Debug, Clone)]
pub struct MazeReport {
    pub map: FeatureMap,
    pub measured_rank: usize,
    pub attempts: u64,
    /// Lattice unit in cells used by the accepted attempt.
    pub unit: usize,
}

#[derive(Debug, Clone, Copy)]
struct Chamber {
    r0: usize,
    r1: usize,
    c0: usize,
    c1: usize,
}

impl Chamber {
    fn area(&self) -> usize {
        (self.r1 - self.r0) * (self.c1 - self.c0)
    }

    // odd lattice lines strictly inside, leaving a passage on each side
    fn wall_slots(lo: usize, hi: usize) -> usize {
        if hi < lo + 3 {
            0
        } else {
            (hi - lo - 1) / 2
        }
    }

    fn can_split_rows(&self) -> bool {
        Self::wall_slots(self.r0, self.r1) > 0
    }

    fn can_split_cols(&self) -> bool {
        Self::wall_slots(self.c0, self.c1) > 0
    }
}

struct Lattice {
    rows: usize,
    cols: usize,
    wall: Vec<bool>,
}

impl Lattice {
    fn new(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            wall: vec![false; rows * cols],
        }
    }

    fn rank(&self, scheme: &EncodingScheme) -> Result<usize> {
        let m = DenseMatrix::from_fn(self.rows, self.cols, |i, j| {
            if self.wall[i * self.cols + j] {
                scheme.featured_value
            } else {
                scheme.free_value
            }
        });
        Ok(structure_report(&m, DEFAULT_RANK_TOLERANCE)?.numeric_rank)
    }

    /// Divide `ch`, returning the two child chambers.
    fn divide(&mut self, ch: Chamber, rng: &mut SimRng) -> (Chamber, Chamber) {
        let (h, w) = (ch.r1 - ch.r0, ch.c1 - ch.c0);
        let horizontal = match (ch.can_split_rows(), ch.can_split_cols()) {
            (true, false) => true,
            (false, true) => false,
            _ => match h.cmp(&w) {
                std::cmp::Ordering::Greater => true,
                std::cmp::Ordering::Less => false,
                std::cmp::Ordering::Equal => rng.random_bool(0.5),
            },
        };
        if horizontal {
            let slot = rng.random_range(0..Chamber::wall_slots(ch.r0, ch.r1));
            let line = ch.r0 + 1 + 2 * slot;
            let door = ch.c0 + 2 * rng.random_range(0..w.div_ceil(2));
            for c in ch.c0..ch.c1 {
                self.wall[line * self.cols + c] = c != door;
            }
            (
                Chamber { r1: line, ..ch },
                Chamber { r0: line + 1, ..ch },
            )
        } else {
            let slot = rng.random_range(0..Chamber::wall_slots(ch.c0, ch.c1));
            let line = ch.c0 + 1 + 2 * slot;
            let door = ch.r0 + 2 * rng.random_range(0..h.div_ceil(2));
            for r in ch.r0..ch.r1 {
                self.wall[r * self.cols + line] = r != door;
            }
            (
                Chamber { c1: line, ..ch },
                Chamber { c0: line + 1, ..ch },
            )
        }
    }

    fn to_map(&self, spec: &MazeSpec, unit: usize) -> FeatureMap {
        let cells = (0..spec.rows)
            .flat_map(|i| (0..spec.cols).map(move |j| (i, j)))
            .map(|(i, j)| {
                let (li, lj) = ((i / unit).min(self.rows - 1), (j / unit).min(self.cols - 1));
                if self.wall[li * self.cols + lj] {
                    CellState::Featured
                } else {
                    CellState::Free
                }
            })
            .collect();
        FeatureMap::from_cells(spec.rows, spec.cols, DEFAULT_RESOLUTION, cells)
            .expect("spec dimensions validated")
    }
}

/// Divide chambers largest-first until the lattice rank reaches `target`.
fn grow(
    spec: &MazeSpec,
    unit: usize,
    rng: &mut SimRng,
    scheme: &EncodingScheme,
) -> Result<(Lattice, usize)> {
    let (lr, lc) = ((spec.rows / unit).max(1), (spec.cols / unit).max(1));
    let mut lattice = Lattice::new(lr, lc);
    let mut chambers = vec![Chamber {
        r0: 0,
        r1: lr,
        c0: 0,
        c1: lc,
    }];
    let mut rank = lattice.rank(scheme)?;
    while rank < spec.target_rank {
        let pick = chambers
            .iter()
            .enumerate()
            .filter(|(_, c)| c.can_split_rows() || c.can_split_cols())
            .max_by(|(ia, a), (ib, b)| a.area().cmp(&b.area()).then(ib.cmp(ia)))
            .map(|(i, _)| i);
        let Some(idx) = pick else { break };
        let chamber = chambers.swap_remove(idx);
        let (a, b) = lattice.divide(chamber, rng);
        chambers.push(a);
        chambers.push(b);
        rank = lattice.rank(scheme)?;
    }
    Ok((lattice, rank))
}

/// Generate a maze whose measured rank is within [`RANK_BAND`] of the target.
///
/// On failure the error carries the closest map achieved.
pub fn generate_maze(spec: &MazeSpec) -> Result<FeatureMap> {
    generate_maze_report(spec).map(|r| r.map)
}

pub fn generate_maze_report(spec: &MazeSpec) -> Result<MazeReport> {
    spec.validate()?;
    let scheme = EncodingScheme::default();
    let measure = |map: &FeatureMap| -> Result<usize> {
        let values = encode(map, &scheme).filled(scheme.free_value);
        Ok(structure_report(&values, DEFAULT_RANK_TOLERANCE)?.numeric_rank)
    };

    if spec.target_rank == 1 {
        let map = FeatureMap::new(spec.rows, spec.cols, DEFAULT_RESOLUTION, CellState::Free)?;
        let measured_rank = measure(&map)?;
        return Ok(MazeReport {
            map,
            measured_rank,
            attempts: 1,
            unit: spec.rows.min(spec.cols),
        });
    }

    let short = spec.rows.min(spec.cols);
    let mut unit = (short / (spec.target_rank + 2)).max(spec.corridor_width).max(1);
    let mut best: Option<(usize, usize, FeatureMap)> = None;
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = stream_rng(spec.seed, Stream::Maze, attempt);
        let (lattice, lattice_rank) = grow(spec, unit, &mut rng, &scheme)?;
        let map = lattice.to_map(spec, unit);
        let rank = measure(&map)?;
        debug_assert_eq!(rank, lattice_rank);
        let dist = rank.abs_diff(spec.target_rank);
        if dist <= RANK_BAND {
            return Ok(MazeReport {
                map,
                measured_rank: rank,
                attempts: attempt + 1,
                unit,
            });
        }
        if best.as_ref().is_none_or(|(d, _, _)| dist < *d) {
            best = Some((dist, rank, map));
        }
        if rank < spec.target_rank && unit > spec.corridor_width {
            unit = (unit - (unit / 8).max(1)).max(spec.corridor_width);
        }
    }
    let (_, closest, map) = best.expect("at least one attempt");
    Err(Error::RankBandMissed {
        target: spec.target_rank,
        closest,
        map: Box::new(map),
    })
}
