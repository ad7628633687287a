use serde::{Deserialize, Serialize};

use super::blocks::BlockLattice;
use crate::error::{Error, Result};
use crate::percolation::circuit::{winding_around_center, AnnulusWindow};

pub type BlockPos = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChemicalPath {
    /// Closed cycle of Good blocks surrounding the center block.
    pub cycle: Vec<BlockPos>,
    /// Good-block path from the center block to its first cycle block.
    pub path: Vec<BlockPos>,
    /// Distinct blocks used: `|cycle| + |path| - 1`.
    pub total_length: usize,
}

fn window(blocks: &BlockLattice, center: BlockPos, outer: usize) -> AnnulusWindow {
    AnnulusWindow::new(outer, |dr, dc| {
        blocks.is_good((center.0 as i64 + dr) as usize, (center.1 as i64 + dc) as usize)
    })
}

/// Good-block cycle inside the block annulus `r <= d_inf <= 3r` around
/// `center`, plus a shortest Good path from the center block to it.
/// Absent when a Bad 8-connected crossing blocks the annulus or no path
/// reaches the cycle.
pub fn find_chemical_path(blocks: &BlockLattice, center: BlockPos, r_blocks: usize) -> Result<Option<ChemicalPath>> {
    let outer = 3 * r_blocks;
    if r_blocks == 0
        || center.0 < outer
        || center.1 < outer
        || center.0 + outer >= blocks.rows
        || center.1 + outer >= blocks.cols
    {
        return Err(Error::RegionTooLarge { radius: outer, n: blocks.rows.min(blocks.cols) });
    }
    let win = window(blocks, center, outer);
    let Some(cycle) = win.surrounding_cycle(r_blocks) else {
        return Ok(None);
    };
    debug_assert_eq!(winding_around_center(&cycle).abs(), 1);
    let Some(path) = win.path_to(&cycle) else {
        return Ok(None);
    };
    let abs = |(dr, dc): (i64, i64)| ((center.0 as i64 + dr) as usize, (center.1 as i64 + dc) as usize);
    let total_length = cycle.len() + path.len() - 1;
    Ok(Some(ChemicalPath {
        cycle: cycle.into_iter().map(abs).collect(),
        path: path.into_iter().map(abs).collect(),
        total_length,
    }))
}
