use std::io::Write;

use super::numfmt::format_exact;
use crate::arith::{apply, BinaryOp};
use crate::dimension::{ArityN, Dimension};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridCell {
    pub da: f64,
    pub db: f64,
    /// `None` where the operator is undefined.
    pub dc: Option<f64>,
}

/// Operator values sampled at the cell centers of an `R × R` grid over
/// `(0, 1)²`, row-major with `da` varying slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSheet {
    pub op: BinaryOp,
    pub resolution: usize,
    pub n: ArityN,
    pub cells: Vec<GridCell>,
}

impl GridSheet {
    pub fn cell(&self, row: usize, col: usize) -> &GridCell {
        &self.cells[row * self.resolution + col]
    }

    /// CSV with header `da,db,dc`; undefined cells are written as `nan`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "da,db,dc")?;
        for c in &self.cells {
            writeln!(
                out,
                "{},{},{}",
                format_exact(c.da),
                format_exact(c.db),
                c.dc.map_or_else(|| "nan".to_string(), format_exact)
            )?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("ASCII output")
    }
}

/// Cell center `(k + 0.5)/R`.
pub fn grid_coordinate(k: usize, resolution: usize) -> f64 {
    (k as f64 + 0.5) / resolution as f64
}

pub fn emit_operator_grid(op: BinaryOp, resolution: usize, n: ArityN) -> Result<GridSheet> {
    if resolution < 2 {
        return Err(Error::domain(format!(
            "grid resolution must be >= 2, got {resolution}"
        )));
    }
    let mut cells = Vec::with_capacity(resolution * resolution);
    for i in 0..resolution {
        let da = grid_coordinate(i, resolution);
        for j in 0..resolution {
            let db = grid_coordinate(j, resolution);
            let dc = apply(op, Dimension::new(da)?, Dimension::new(db)?, n)
                .ok()
                .map(|r| r.d.get());
            cells.push(GridCell { da, db, dc });
        }
    }
    Ok(GridSheet {
        op,
        resolution,
        n,
        cells,
    })
}
