//! Golden reproduction of the reference comparison table: four schemes on
//! `T(x) = (x+2)^{1/3}` from `x_0 = 1.99` with `α_n = β_n = 1/4`, 11 steps.

use fixiter_core::mappings::builtin_cbrt_map;
use fixiter_core::schemes::{run, StopRule};
use fixiter_core::{ParamSchedule, Point, SchemeId};

use crate::error::{CliError, Result};

/// Column order of the published table.
pub const COLUMNS: [SchemeId; 4] = [SchemeId::K, SchemeId::VatanTwoStep, SchemeId::ThakurNew, SchemeId::PicardS];

pub const X0: f64 = 1.99;
pub const ALPHA: f64 = 0.25;
pub const BETA: f64 = 0.25;
pub const STEPS: usize = 11;

/// Absolute tolerance per cell.
pub const CELL_TOLERANCE: f64 = 1e-12;

/// Published values, rows `x_0..x_11`, columns in [`COLUMNS`] order.
// digits as printed, trailing zeros included
#[allow(clippy::excessive_precision)]
pub const GOLDEN: [[f64; 4]; 12] = [
    [1.99, 1.99, 1.99, 1.99],
    [1.522643193061496, 1.527152378405542, 1.530163443560674, 1.530160376515624],
    [1.521383278248461, 1.521453635507796, 1.521551978236029, 1.521551916843118],
    [1.521379716901169, 1.521380654057891, 1.521383088492668, 1.521383087287047],
    [1.521379706833111, 1.521379718941864, 1.521379773188262, 1.521379773164595],
    [1.521379706804648, 1.521379706960085, 1.521379708107703, 1.521379708107238],
    [1.521379706804568, 1.521379706806560, 1.521379706830149, 1.521379706830139],
    [1.521379706804568, 1.521379706804593, 1.521379706805070, 1.521379706805069],
    [1.521379706804568, 1.521379706804568, 1.521379706804577, 1.521379706804577],
    [1.521379706804568, 1.521379706804568, 1.521379706804568, 1.521379706804568],
    [1.521379706804568, 1.521379706804568, 1.521379706804568, 1.521379706804568],
    [1.521379706804568, 1.521379706804568, 1.521379706804568, 1.521379706804568],
];

/// Computed table, `values[row][column]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table1 {
    pub values: Vec<[f64; 4]>,
}

/// Runs the four schemes and assembles the table.
pub fn compute() -> Result<Table1> {
    let m = builtin_cbrt_map();
    let s = ParamSchedule::constant(ALPHA, BETA).expect("valid schedule");
    let x0 = Point::scalar(X0);
    let mut values = vec![[0.0; 4]; STEPS + 1];
    for (col, id) in COLUMNS.into_iter().enumerate() {
        let traj = run(id, &m, &x0, &s, &StopRule::fixed_count(STEPS)).map_err(CliError::numeric(id.as_str()))?;
        for (row, x) in traj.iterates().enumerate() {
            values[row][col] = x[0];
        }
    }
    Ok(Table1 { values })
}

/// Largest absolute deviation from [`GOLDEN`] and its cell.
pub fn max_deviation(t: &Table1) -> (f64, usize, usize) {
    let mut worst = (0.0, 0, 0);
    for (r, row) in t.values.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            let d = (v - GOLDEN[r][c]).abs();
            if d > worst.0 {
                worst = (d, r, c);
            }
        }
    }
    worst
}

/// First cell (row-major) deviating from [`GOLDEN`] by more than the tolerance.
pub fn check(t: &Table1) -> Result<()> {
    for (r, row) in t.values.iter().enumerate() {
        for (c, &got) in row.iter().enumerate() {
            let expected = GOLDEN[r][c];
            let diff = (got - expected).abs();
            if !(diff <= CELL_TOLERANCE) {
                return Err(CliError::GoldenMismatch { row: r, column: COLUMNS[c].as_str(), got, expected, diff });
            }
        }
    }
    Ok(())
}
