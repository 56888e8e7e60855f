//! File formats: field CSV, Stokes CSV, 16-bit PGM and the JSON report.
//!
//! Field CSV v1:
//!
//! ```text
//! # cebeam-field v1 z=<z>
//! x,y,re_ex,im_ex,re_ey,im_ey
//! <rows, y outer ascending, x inner ascending>
//! ```
//!
//! Numbers are written with 17 significant digits, which round-trips every
//! `f64` exactly. The Stokes CSV uses the same layout with a
//! `# cebeam-stokes v1 z=<z>` banner and columns `x,y,s0,s1,s2,s3`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::beam::{sample_beam, VectorBeam};
use crate::coherence::{coherence_density_of, covariance_matrix, degree_of_polarization};
use crate::error::{Error, Result};
use crate::grid::{FieldGrid, SampledVectorField};
use crate::schmidt::schmidt_decompose;

pub const FIELD_BANNER: &str = "# cebeam-field v1";
pub const FIELD_HEADER: &str = "x,y,re_ex,im_ex,re_ey,im_ey";
pub const STOKES_BANNER: &str = "# cebeam-stokes v1";
pub const STOKES_HEADER: &str = "x,y,s0,s1,s2,s3";
pub const PGM_MAXVAL: u16 = 65535;

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_field_csv<W: Write>(field: &SampledVectorField, mut out: W) -> Result<()> {
    let grid = field.grid();
    writeln!(out, "{FIELD_BANNER} z={}", grid.z())?;
    writeln!(out, "{FIELD_HEADER}")?;
    for (k, (x, y)) in grid.nodes().enumerate() {
        let (h, v) = (field.ex()[k], field.ey()[k]);
        writeln!(out, "{},{},{},{},{},{}", num(x), num(y), num(h.re), num(h.im), num(v.re), num(v.im))?;
    }
    out.flush()?;
    Ok(())
}

pub fn dump_field_csv(field: &SampledVectorField, path: &Path) -> Result<()> {
    write_field_csv(field, BufWriter::new(File::create(path)?))
}

fn parse_z(banner: &str, expected: &str) -> Result<f64> {
    let rest = banner
        .strip_prefix(expected)
        .and_then(|r| r.trim().strip_prefix("z="))
        .ok_or_else(|| Error::Parse(format!("bad banner line '{banner}'")))?;
    rest.trim().parse().map_err(|_| Error::Parse(format!("bad z in '{banner}'")))
}

/// Read a field CSV back. Samples are restored bit-exactly; the grid is
/// rebuilt from the first and last node coordinates of each axis.
pub fn read_field_csv<R: Read>(input: R) -> Result<SampledVectorField> {
    let mut lines = BufReader::new(input).lines();
    let banner = lines.next().ok_or_else(|| Error::Parse("empty field file".into()))??;
    let z = parse_z(&banner, FIELD_BANNER)?;
    let header = lines.next().ok_or_else(|| Error::Parse("missing header".into()))??;
    if header != FIELD_HEADER {
        return Err(Error::Parse(format!("unexpected header '{header}'")));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut ex = Vec::new();
    let mut ey = Vec::new();
    for (n, line) in lines.enumerate() {
        let line = line?;
        let cols: Vec<f64> = line
            .split(',')
            .map(|c| c.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse(format!("row {}: {e}", n + 1)))?;
        if cols.len() != 6 {
            return Err(Error::Parse(format!("row {} has {} columns", n + 1, cols.len())));
        }
        xs.push(cols[0]);
        ys.push(cols[1]);
        ex.push(Complex64::new(cols[2], cols[3]));
        ey.push(Complex64::new(cols[4], cols[5]));
    }
    if xs.is_empty() {
        return Err(Error::Parse("field file has no samples".into()));
    }
    let nx = ys.iter().take_while(|&&y| y == ys[0]).count();
    if nx == 0 || xs.len() % nx != 0 {
        return Err(Error::Parse("rows do not form a rectangular grid".into()));
    }
    let ny = xs.len() / nx;
    let grid = FieldGrid::new(nx, ny, (xs[0], xs[nx - 1]), (ys[0], ys[ys.len() - 1]), z)?;
    SampledVectorField::new(grid, ex, ey)
}

/// Stokes parameters `[S0, S1, S2, S3]` per node.
pub fn stokes(field: &SampledVectorField) -> Vec<[f64; 4]> {
    field
        .ex()
        .iter()
        .zip(field.ey())
        .map(|(h, v)| {
            let cross = h.conj() * v;
            let (ih, iv) = (h.norm_sqr(), v.norm_sqr());
            [ih + iv, ih - iv, 2.0 * cross.re, 2.0 * cross.im]
        })
        .collect()
}

pub fn write_stokes_csv<W: Write>(field: &SampledVectorField, mut out: W) -> Result<()> {
    let grid = field.grid();
    writeln!(out, "{STOKES_BANNER} z={}", grid.z())?;
    writeln!(out, "{STOKES_HEADER}")?;
    for ((x, y), s) in grid.nodes().zip(stokes(field)) {
        writeln!(out, "{},{},{},{},{},{}", num(x), num(y), num(s[0]), num(s[1]), num(s[2]), num(s[3]))?;
    }
    out.flush()?;
    Ok(())
}

pub fn render_stokes_csv(field: &SampledVectorField, path: &Path) -> Result<()> {
    write_stokes_csv(field, BufWriter::new(File::create(path)?))
}

/// Binary PGM (`P5`, maxval 65535, big-endian samples) of the intensity,
/// scaled linearly so the brightest node maps to 65535. The first image
/// row is the largest `y`. An all-zero field renders black.
pub fn pgm_bytes(field: &SampledVectorField) -> Vec<u8> {
    let grid = field.grid();
    let (nx, ny) = (grid.nx(), grid.ny());
    let intensity = field.intensity();
    let peak = intensity.iter().copied().fold(0.0, f64::max);
    let mut out = format!("P5\n{nx} {ny}\n{PGM_MAXVAL}\n").into_bytes();
    out.reserve(2 * nx * ny);
    for j in (0..ny).rev() {
        for i in 0..nx {
            let level =
                if peak > 0.0 { (intensity[grid.index(i, j)] / peak * PGM_MAXVAL as f64).round() as u16 } else { 0 };
            out.extend_from_slice(&level.to_be_bytes());
        }
    }
    out
}

pub fn render_intensity_pgm(field: &SampledVectorField, path: &Path) -> Result<()> {
    let mut f = File::create(path)?;
    f.write_all(&pgm_bytes(field))?;
    Ok(())
}

/// Parse a `P5` 16-bit PGM into `(width, height, samples in file order)`.
pub fn parse_pgm(bytes: &[u8]) -> Result<(usize, usize, Vec<u16>)> {
    let text_end = {
        // Header is three whitespace-terminated tokens after the magic.
        let mut fields = 0;
        let mut idx = 0;
        let mut in_token = false;
        while idx < bytes.len() && fields < 4 {
            let ws = bytes[idx].is_ascii_whitespace();
            if in_token && ws {
                fields += 1;
            }
            in_token = !ws;
            idx += 1;
        }
        if fields < 4 {
            return Err(Error::Parse("truncated PGM header".into()));
        }
        idx
    };
    let header = std::str::from_utf8(&bytes[..text_end]).map_err(|_| Error::Parse("bad PGM header".into()))?;
    let tokens: Vec<&str> = header.split_ascii_whitespace().collect();
    if tokens[0] != "P5" {
        return Err(Error::Parse(format!("unexpected magic {}", tokens[0])));
    }
    let parse = |s: &str| s.parse::<usize>().map_err(|_| Error::Parse(format!("bad PGM field '{s}'")));
    let (w, h, maxval) = (parse(tokens[1])?, parse(tokens[2])?, parse(tokens[3])?);
    if maxval != PGM_MAXVAL as usize {
        return Err(Error::Parse(format!("expected maxval 65535, got {maxval}")));
    }
    let body = &bytes[text_end..];
    if body.len() != 2 * w * h {
        return Err(Error::Parse("PGM body has the wrong size".into()));
    }
    let samples = body.chunks_exact(2).map(|c| u16::from_be_bytes([c[0], c[1]])).collect();
    Ok((w, h, samples))
}

/// JSON analysis summary of one beam on one grid.
///
/// Keys: `family, params, lambda1, lambda2, K, residual, covariance, dop,
/// total_intensity`. `covariance` is `J` flattened row-major as
/// `[re, im]` pairs.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub family: String,
    pub params: Value,
    pub lambda1: f64,
    pub lambda2: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub residual: f64,
    pub covariance: [f64; 8],
    pub dop: f64,
    pub total_intensity: f64,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Beam parameters plus grid description, as echoed in reports.
pub fn params_json(beam: &VectorBeam, grid: &FieldGrid) -> Value {
    let mut params = serde_json::to_value(beam.params()).expect("params serialize");
    let obj = params.as_object_mut().expect("params are an object");
    obj.insert(
        "grid".into(),
        json!({
            "nx": grid.nx(),
            "ny": grid.ny(),
            "x_range": [grid.x_bounds().0, grid.x_bounds().1],
            "y_range": [grid.y_bounds().0, grid.y_bounds().1],
            "z": grid.z(),
        }),
    );
    params
}

/// Schmidt decomposition plus integrated coherence of `beam` on `grid`.
pub fn analyze(beam: &VectorBeam, grid: &FieldGrid) -> Result<AnalysisReport> {
    let schmidt = schmidt_decompose(beam, grid)?;
    let field = sample_beam(beam, grid);
    let j = covariance_matrix(&coherence_density_of(&field));
    Ok(AnalysisReport {
        family: beam.family().to_string(),
        params: params_json(beam, grid),
        lambda1: schmidt.lambda1,
        lambda2: schmidt.lambda2,
        k: schmidt.k,
        residual: schmidt.residual,
        covariance: j.j.to_reals(),
        dop: degree_of_polarization(&j)?,
        total_intensity: field.total_intensity(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beam::{make_pp_beam, make_radial_beam};
    use crate::grid::make_grid;

    #[test]
    fn small_grid_dump_has_six_lines() {
        let grid = make_grid(2, 2, 1.0, 0.0).unwrap();
        let field = sample_beam(&make_radial_beam(1.0).unwrap(), &grid);
        let mut buf = Vec::new();
        write_field_csv(&field, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 6);
        assert_eq!(lines[0], "# cebeam-field v1 z=0");
        assert_eq!(lines[1], FIELD_HEADER);
        assert!(lines[2].starts_with("-1.0000000000000000e0,-1.0000000000000000e0,"));
    }

    #[test]
    fn field_csv_round_trip_is_bit_exact() {
        let grid = make_grid(17, 9, 3.0, 0.7).unwrap();
        let field = sample_beam(&make_pp_beam(0.8, 1.0).unwrap(), &grid);
        let mut buf = Vec::new();
        write_field_csv(&field, &mut buf).unwrap();
        let back = read_field_csv(buf.as_slice()).unwrap();
        assert_eq!(back.grid().nx(), 17);
        assert_eq!(back.grid().ny(), 9);
        assert_eq!(back.grid().z(), 0.7);
        for (a, b) in field.ex().iter().chain(field.ey()).zip(back.ex().iter().chain(back.ey())) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }

    #[test]
    fn malformed_csv_is_rejected() {
        assert!(read_field_csv("".as_bytes()).is_err());
        assert!(read_field_csv("# cebeam-field v1 z=0\nx,y\n".as_bytes()).is_err());
        let bad = format!("{FIELD_BANNER} z=0\n{FIELD_HEADER}\n1,2,3\n");
        assert!(read_field_csv(bad.as_bytes()).is_err());
    }

    #[test]
    fn radial_dump_has_no_vertical_field_on_x_axis() {
        let grid = make_grid(9, 9, 2.0, 0.0).unwrap();
        let field = sample_beam(&make_radial_beam(1.0).unwrap(), &grid);
        let mut buf = Vec::new();
        write_field_csv(&field, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        for row in text.lines().skip(2) {
            let cols: Vec<f64> = row.split(',').map(|c| c.parse().unwrap()).collect();
            if cols[1] == 0.0 {
                assert_eq!(cols[4], 0.0);
                assert_eq!(cols[5], 0.0);
            }
        }
    }

    #[test]
    fn pgm_layout() {
        let grid = make_grid(4, 3, 1.0, 0.0).unwrap();
        let bytes = pgm_bytes(&sample_beam(&make_pp_beam(0.5, 0.3).unwrap(), &grid));
        assert!(bytes.starts_with(b"P5\n4 3\n65535\n"));
        let (w, h, px) = parse_pgm(&bytes).unwrap();
        assert_eq!((w, h, px.len()), (4, 3, 12));
        assert_eq!(*px.iter().max().unwrap(), PGM_MAXVAL);
    }

    #[test]
    fn zero_field_renders_black() {
        let grid = make_grid(5, 5, 1.0, 0.0).unwrap();
        let zeros = vec![Complex64::new(0.0, 0.0); 25];
        let field = SampledVectorField::new(grid, zeros.clone(), zeros).unwrap();
        let (_, _, px) = parse_pgm(&pgm_bytes(&field)).unwrap();
        assert!(px.iter().all(|&p| p == 0));
    }

    #[test]
    fn stokes_of_pure_states() {
        let grid = make_grid(33, 33, 3.0, 0.0).unwrap();
        let field = sample_beam(&make_radial_beam(1.0).unwrap(), &grid);
        for (n, s) in stokes(&field).iter().enumerate() {
            let pol = s[1] * s[1] + s[2] * s[2] + s[3] * s[3];
            assert!((s[0] * s[0] - pol).abs() <= 1e-12 * s[0].max(1.0));
            let (_, y) = grid.nodes().nth(n).unwrap();
            if y == 0.0 {
                assert_eq!(s[1], s[0]);
                assert_eq!(s[2], 0.0);
                assert_eq!(s[3], 0.0);
            }
        }
        let mut buf = Vec::new();
        write_stokes_csv(&field, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().nth(1), Some(STOKES_HEADER));
        assert_eq!(text.lines().count(), 2 + 33 * 33);
    }

    #[test]
    fn report_keys() {
        let grid = make_grid(128, 128, 8.0, 0.0).unwrap();
        let report = analyze(&make_radial_beam(1.0).unwrap(), &grid).unwrap();
        let v: Value = serde_json::from_str(&report.to_json()).unwrap();
        let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        keys.sort_unstable();
        assert_eq!(
            keys,
            ["K", "covariance", "dop", "family", "lambda1", "lambda2", "params", "residual", "total_intensity"]
        );
        assert_eq!(v["family"], "radial");
        assert_eq!(v["covariance"].as_array().unwrap().len(), 8);
    }
}
