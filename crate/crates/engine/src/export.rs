use std::io::{self, Write};

use crate::ring::SpaceTimeTrace;
use crate::rule::Cell;

/// Binary PGM, one row per recorded time step. State 0 is white and the highest state black.
pub fn write_pgm(trace: &SpaceTimeTrace, out: &mut impl Write) -> io::Result<()> {
    let top = trace.states.saturating_sub(1).max(1) as u64;
    write!(out, "P5\n{} {}\n255\n", trace.width, trace.rows.len())?;
    let mut line = Vec::with_capacity(trace.width);
    for row in &trace.rows {
        line.clear();
        line.extend(row.iter().map(|&c| (255 - (c.min(top as u32) as u64 * 255 / top)) as u8));
        out.write_all(&line)?;
    }
    Ok(())
}

/// Binary PPM with a caller-supplied palette.
pub fn write_ppm(trace: &SpaceTimeTrace, palette: impl Fn(Cell) -> [u8; 3], out: &mut impl Write) -> io::Result<()> {
    write!(out, "P6\n{} {}\n255\n", trace.width, trace.rows.len())?;
    let mut line = Vec::with_capacity(3 * trace.width);
    for row in &trace.rows {
        line.clear();
        for &c in row {
            line.extend_from_slice(&palette(c));
        }
        out.write_all(&line)?;
    }
    Ok(())
}
