use rayon::prelude::*;
use tverberg::report::{run_cell, sort_rows, Cell, Row};
use tverberg::{Result, SolveOptions};

/// Runs every cell in parallel; rows come back in a fixed order.
pub fn bench(cells: Vec<Cell>, opts: &SolveOptions) -> Result<Vec<Row>> {
    let mut rows = cells.into_par_iter().map(|c| run_cell(c, opts)).collect::<Result<Vec<_>>>()?;
    sort_rows(&mut rows);
    Ok(rows)
}
