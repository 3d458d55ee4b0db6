//! Feature maps: grid model, maze generation, matrix encoding and file I/O.

mod encoding;
mod format;
mod maze;

pub use encoding::{classify, decode, encode, EncodingScheme};
pub use format::{load_map, save_map};
pub use maze::{generate_maze, generate_maze_report, MazeReport, MazeSpec};

use crate::error::{Error, Result};

/// Grid cell coordinate `(row, col)`.
pub type Cell = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellState {
    Featured,
    Free,
    Unknown,
}

impl CellState {
    pub fn is_known(self) -> bool {
        self != CellState::Unknown
    }

    pub(crate) fn glyph(self) -> u8 {
        match self {
            CellState::Featured => b'#',
            CellState::Free => b'.',
            CellState::Unknown => b'?',
        }
    }

    pub(crate) fn from_glyph(g: u8) -> Option<Self> {
        match g {
            b'#' => Some(CellState::Featured),
            b'.' => Some(CellState::Free),
            b'?' => Some(CellState::Unknown),
            _ => None,
        }
    }
}

/// A discrete 2-D feature map with physical resolution in meters per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMap {
    rows: usize,
    cols: usize,
    resolution: f64,
    cells: Vec<CellState>,
}

impl FeatureMap {
    pub fn new(rows: usize, cols: usize, resolution: f64, fill: CellState) -> Result<Self> {
        Self::from_cells(rows, cols, resolution, vec![fill; rows * cols])
    }

    pub fn from_cells(
        rows: usize,
        cols: usize,
        resolution: f64,
        cells: Vec<CellState>,
    ) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid("map dimensions must be positive"));
        }
        if !(resolution > 0.0 && resolution.is_finite()) {
            return Err(Error::invalid(format!(
                "map resolution must be positive and finite, got {resolution}"
            )));
        }
        if cells.len() != rows * cols {
            return Err(Error::invalid(format!(
                "expected {} cells, got {}",
                rows * cols,
                cells.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            resolution,
            cells,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn cells(&self) -> &[CellState] {
        &self.cells
    }

    pub fn in_bounds(&self, (r, c): Cell) -> bool {
        r < self.rows && c < self.cols
    }

    pub fn get(&self, (r, c): Cell) -> CellState {
        self.cells[r * self.cols + c]
    }

    pub fn set(&mut self, (r, c): Cell, state: CellState) {
        self.cells[r * self.cols + c] = state;
    }

    pub fn known_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_known()).count()
    }

    pub fn known_fraction(&self) -> f64 {
        self.known_count() as f64 / self.len() as f64
    }

    pub fn is_fully_known(&self) -> bool {
        self.cells.iter().all(|c| c.is_known())
    }

    pub fn count(&self, state: CellState) -> usize {
        self.cells.iter().filter(|c| **c == state).count()
    }

    /// Iterate `(cell, state)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (Cell, CellState)> + '_ {
        let cols = self.cols;
        self.cells
            .iter()
            .enumerate()
            .map(move |(k, s)| ((k / cols, k % cols), *s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructor_invariants() {
        assert!(FeatureMap::new(0, 3, 0.1, CellState::Free).is_err());
        assert!(FeatureMap::new(2, 3, 0.0, CellState::Free).is_err());
        assert!(FeatureMap::from_cells(2, 2, 1.0, vec![CellState::Free; 3]).is_err());
        let mut m = FeatureMap::new(2, 3, 0.1, CellState::Unknown).unwrap();
        m.set((1, 2), CellState::Featured);
        assert_eq!(m.get((1, 2)), CellState::Featured);
        assert_eq!(m.known_count(), 1);
        assert!(!m.is_fully_known());
    }
}
