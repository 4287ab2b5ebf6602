//! On-disk formats for annotations and density maps.
//!
//! Point annotations: CSV with header `x,y`, one row per person, float pixel
//! coordinates. Density maps: little-endian binary with an 8-byte header
//! (`u32 H`, `u32 W`) followed by `H*W` row-major `f32` values.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use ndarray::Array2;

use crate::error::{Error, Result};

use super::{DensityMap, PointSet};

pub fn write_points_csv(path: &Path, points: &PointSet) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut wtr = csv::Writer::from_writer(BufWriter::new(file));
    wtr.write_record(["x", "y"]).map_err(|e| Error::parse(path, e.to_string()))?;
    for &(x, y) in points.points() {
        wtr.write_record([format!("{x:?}"), format!("{y:?}")])
            .map_err(|e| Error::parse(path, e.to_string()))?;
    }
    wtr.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

pub fn read_points_csv(path: &Path, h: usize, w: usize) -> Result<PointSet> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(BufReader::new(file));
    {
        let headers = rdr.headers().map_err(|e| Error::parse(path, e.to_string()))?;
        if headers.len() != 2 || &headers[0] != "x" || &headers[1] != "y" {
            return Err(Error::parse(path, format!("expected header `x,y`, got {headers:?}")));
        }
    }
    let mut points = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| Error::parse(path, e.to_string()))?;
        if record.len() != 2 {
            return Err(Error::parse(path, format!("row {i} has {} fields, expected 2", record.len())));
        }
        let x: f64 = record[0]
            .parse()
            .map_err(|e| Error::parse(path, format!("row {i} x: {e}")))?;
        let y: f64 = record[1]
            .parse()
            .map_err(|e| Error::parse(path, format!("row {i} y: {e}")))?;
        points.push((x, y));
    }
    PointSet::new(points, h, w)
}

pub fn write_density_bin(path: &Path, map: &DensityMap) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    let write = |out: &mut BufWriter<File>, bytes: &[u8]| -> Result<()> {
        out.write_all(bytes).map_err(|e| Error::io(path, e))
    };
    write(&mut out, &(map.h() as u32).to_le_bytes())?;
    write(&mut out, &(map.w() as u32).to_le_bytes())?;
    for &v in map.values().iter() {
        write(&mut out, &(v as f32).to_le_bytes())?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

pub fn read_density_bin(path: &Path) -> Result<DensityMap> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = BufReader::new(file);
    let mut header = [0u8; 8];
    rdr.read_exact(&mut header)
        .map_err(|_| Error::parse(path, "truncated header (need 8 bytes)"))?;
    let h = u32::from_le_bytes(header[0..4].try_into().unwrap()) as usize;
    let w = u32::from_le_bytes(header[4..8].try_into().unwrap()) as usize;
    let mut buf = vec![0u8; h * w * 4];
    rdr.read_exact(&mut buf)
        .map_err(|_| Error::parse(path, format!("truncated payload (need {} f32 values)", h * w)))?;
    let mut values = Array2::zeros((h, w));
    for (i, chunk) in buf.chunks_exact(4).enumerate() {
        values[(i / w, i % w)] = f32::from_le_bytes(chunk.try_into().unwrap()) as f64;
    }
    DensityMap::new(values)
}
