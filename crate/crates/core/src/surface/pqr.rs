use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use super::ChargeSet;
use crate::{Error, Result, Vec3};

/// Read `ATOM`/`HETATM` records of a PQR file.
///
/// The last five whitespace-separated fields of a record are
/// `x y z charge radius`; everything else on the line is ignored, as are
/// non-record lines (`REMARK`, `TER`, `END`, ...).
pub fn load_pqr(input: impl BufRead) -> Result<ChargeSet> {
    let mut positions = Vec::new();
    let mut charges = Vec::new();
    let mut radii = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let trimmed = line.trim_start();
        if !(trimmed.starts_with("ATOM") || trimmed.starts_with("HETATM")) {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        let tail: Vec<f64> = fields
            .iter()
            .rev()
            .take(5)
            .map_while(|s| s.parse::<f64>().ok())
            .collect();
        // Record name plus five numbers is the bare minimum.
        if tail.len() < 5 || fields.len() < 6 {
            return Err(Error::Parse {
                line: lineno,
                msg: format!(
                    "record needs 5 trailing numeric fields (x y z charge radius), found {}",
                    tail.len()
                ),
            });
        }
        // `tail` is reversed: radius, charge, z, y, x.
        positions.push(Vec3::new(tail[4], tail[3], tail[2]));
        charges.push(tail[1]);
        radii.push(tail[0]);
    }
    Ok(ChargeSet::with_radii(positions, charges, radii))
}

pub fn load_pqr_file(path: impl AsRef<Path>) -> Result<ChargeSet> {
    load_pqr(BufReader::new(File::open(path)?))
}
