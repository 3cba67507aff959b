//! Grid-function exports: `x,y,value` CSV and the `SGW1` binary dump.
//!
//! `SGW1` layout, little-endian: bytes 0..4 magic `SGW1`, 4..8 `nx` (u32),
//! 8..12 `ny` (u32), 12..16 zero, 16..48 `xmin, xmax, ymin, ymax` (f64),
//! 48..64 zero, then `nx * ny` f64 values in row-major node order
//! (`iy * nx + ix`).

use std::io::{self, Read, Write};

use super::grid::Grid2D;

pub const SGW1_MAGIC: [u8; 4] = *b"SGW1";
pub const SGW1_HEADER_LEN: usize = 64;

fn check_len(grid: &Grid2D, values: &[f64]) -> io::Result<()> {
    if values.len() != grid.len() {
        return Err(io::Error::new(
            io::ErrorKind::InvalidInput,
            format!("{} values for a {}x{} grid", values.len(), grid.nx, grid.ny),
        ));
    }
    Ok(())
}

/// Header `x,y,value`, one row per node in index order, 17 significant
/// digits, LF line endings, no negative zeros.
pub fn write_csv<W: Write>(mut w: W, grid: &Grid2D, values: &[f64]) -> io::Result<()> {
    check_len(grid, values)?;
    w.write_all(b"x,y,value\n")?;
    for (i, v) in values.iter().enumerate() {
        let p = grid.node(i);
        writeln!(w, "{:.16e},{:.16e},{:.16e}", p.x + 0.0, p.y + 0.0, v + 0.0)?;
    }
    Ok(())
}

pub fn write_sgw1<W: Write>(mut w: W, grid: &Grid2D, values: &[f64]) -> io::Result<()> {
    check_len(grid, values)?;
    let dim = |n: usize| {
        u32::try_from(n).map_err(|_| io::Error::new(io::ErrorKind::InvalidInput, "grid too large"))
    };
    let mut header = [0u8; SGW1_HEADER_LEN];
    header[0..4].copy_from_slice(&SGW1_MAGIC);
    header[4..8].copy_from_slice(&dim(grid.nx)?.to_le_bytes());
    header[8..12].copy_from_slice(&dim(grid.ny)?.to_le_bytes());
    for (k, b) in [grid.xmin, grid.xmax, grid.ymin, grid.ymax]
        .iter()
        .enumerate()
    {
        header[16 + 8 * k..24 + 8 * k].copy_from_slice(&b.to_le_bytes());
    }
    w.write_all(&header)?;
    let mut body = Vec::with_capacity(8 * values.len());
    for v in values {
        body.extend_from_slice(&v.to_le_bytes());
    }
    w.write_all(&body)
}

pub fn read_sgw1<R: Read>(mut r: R) -> io::Result<(Grid2D, Vec<f64>)> {
    let bad = |msg: &str| io::Error::new(io::ErrorKind::InvalidData, msg.to_string());
    let mut header = [0u8; SGW1_HEADER_LEN];
    r.read_exact(&mut header)?;
    if header[0..4] != SGW1_MAGIC {
        return Err(bad("missing SGW1 magic"));
    }
    let u32_at = |o: usize| u32::from_le_bytes(header[o..o + 4].try_into().unwrap()) as usize;
    let f64_at = |o: usize| f64::from_le_bytes(header[o..o + 8].try_into().unwrap());
    let (nx, ny) = (u32_at(4), u32_at(8));
    let grid = Grid2D::new(f64_at(16), f64_at(24), f64_at(32), f64_at(40), nx, ny)
        .map_err(|e| bad(&e.to_string()))?;
    let mut body = vec![0u8; 8 * grid.len()];
    r.read_exact(&mut body)?;
    let values = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok((grid, values))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sgw1_round_trip_and_layout() {
        let g = Grid2D::new(-1.0, 2.0, 0.0, 0.5, 4, 3).unwrap();
        let v: Vec<f64> = (0..12).map(|i| i as f64 * 0.1 - 0.3).collect();
        let mut buf = Vec::new();
        write_sgw1(&mut buf, &g, &v).unwrap();
        assert_eq!(buf.len(), 64 + 8 * 12);
        assert_eq!(&buf[0..4], b"SGW1");
        assert_eq!(u32::from_le_bytes(buf[4..8].try_into().unwrap()), 4);
        assert_eq!(&buf[12..16], &[0; 4]);
        assert_eq!(&buf[48..64], &[0; 16]);
        assert_eq!(f64::from_le_bytes(buf[24..32].try_into().unwrap()), 2.0);
        let (g2, v2) = read_sgw1(buf.as_slice()).unwrap();
        assert_eq!(g2, g);
        assert_eq!(v2, v);
    }

    #[test]
    fn csv_rows() {
        let g = Grid2D::new(0.0, 1.0, 0.0, 1.0, 2, 2).unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &g, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "x,y,value");
        assert_eq!(lines.len(), 5);
        assert_eq!(
            lines[2],
            "1.0000000000000000e0,0.0000000000000000e0,2.0000000000000000e0"
        );
        assert!(!s.contains('\r'));
    }

    #[test]
    fn rejects_garbage() {
        assert!(read_sgw1(&[0u8; 64][..]).is_err());
        let g = Grid2D::new(0.0, 1.0, 0.0, 1.0, 2, 2).unwrap();
        assert!(write_csv(Vec::new(), &g, &[1.0]).is_err());
    }
}
