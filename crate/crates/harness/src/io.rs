//! CSV output of runs and order studies.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use solverlab_core::IdealGas;

use crate::error::Result;
use crate::models::FieldData;
use crate::run::{OrderStudy, RunResult};

pub const GAS_HEADER: [&str; 7] = ["x", "rho", "momentum", "energy", "velocity", "pressure", "internal_energy"];
pub const ISO_HEADER: [&str; 4] = ["x", "rho", "momentum", "velocity"];
pub const SCALAR_HEADER: [&str; 2] = ["x", "u"];
pub const ORDER_HEADER: [&str; 6] = ["cells", "dx", "l1_rho", "l1_momentum", "l1_energy", "slope"];

/// Final field, one row per cell, at full precision.
pub fn write_run<W: Write>(out: W, result: &RunResult) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    match &result.field {
        FieldData::Scalar(cells) => {
            w.write_record(SCALAR_HEADER)?;
            for (x, u) in result.x.iter().zip(cells) {
                w.write_record([x.to_string(), u[0].to_string()])?;
            }
        }
        FieldData::Iso(cells) => {
            w.write_record(ISO_HEADER)?;
            for (x, u) in result.x.iter().zip(cells) {
                w.write_record([x, &u[0], &u[1], &(u[1] / u[0])].map(f64::to_string))?;
            }
        }
        FieldData::Gas(cells) => {
            let gas = IdealGas::new(result.gamma);
            w.write_record(GAS_HEADER)?;
            for (x, u) in result.x.iter().zip(cells) {
                let row = [*x, u[0], u[1], u[2], u[1] / u[0], gas.pressure(u), gas.internal_energy(u)];
                w.write_record(row.map(|v| v.to_string()))?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Error table of an order study; the fitted slope sits on the last row.
pub fn write_order<W: Write>(out: W, study: &OrderStudy) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(ORDER_HEADER)?;
    for (i, row) in study.rows.iter().enumerate() {
        let l1 = |k: usize| row.l1.get(k).map(f64::to_string).unwrap_or_default();
        let slope = if i + 1 == study.rows.len() { study.order.to_string() } else { String::new() };
        w.write_record([row.cells.to_string(), row.dx.to_string(), l1(0), l1(1), l1(2), slope])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_run_file(path: &Path, result: &RunResult) -> Result<()> {
    write_run(File::create(path)?, result)
}

pub fn write_order_file(path: &Path, study: &OrderStudy) -> Result<()> {
    write_order(File::create(path)?, study)
}
