//! Legacy ASCII VTK output on a sampled hexahedral grid.

use std::io::{self, Write};

use lfmaxwell::mesh::Mesh;
use lfmaxwell::physics::{DerivedFields, FieldSample};
use lfmaxwell::Complex64;

/// VTK cell type of a linear hexahedron.
pub const VTK_HEXAHEDRON: u8 = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub name: String,
    pub values: Vec<[f64; 3]>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleGrid {
    pub points: Vec<[f64; 3]>,
    /// Point indices in VTK hexahedron order.
    pub cells: Vec<[usize; 8]>,
}

/// Structured grid with `density` sample cells per mesh cell and axis.
pub fn sample_grid(mesh: &Mesh, density: usize) -> SampleGrid {
    let density = density.max(1);
    let ext = mesh.extents();
    let n = mesh.subdivisions().map(|s| s * density);
    let coord = |d: usize, i: usize| {
        if i == n[d] {
            ext[d][1]
        } else {
            ext[d][0] + (ext[d][1] - ext[d][0]) * i as f64 / n[d] as f64
        }
    };
    let idx = |i: usize, j: usize, k: usize| i + (n[0] + 1) * (j + (n[1] + 1) * k);
    let mut points = Vec::with_capacity((n[0] + 1) * (n[1] + 1) * (n[2] + 1));
    for k in 0..=n[2] {
        for j in 0..=n[1] {
            for i in 0..=n[0] {
                points.push([coord(0, i), coord(1, j), coord(2, k)]);
            }
        }
    }
    let mut cells = Vec::with_capacity(n[0] * n[1] * n[2]);
    for k in 0..n[2] {
        for j in 0..n[1] {
            for i in 0..n[0] {
                cells.push([
                    idx(i, j, k),
                    idx(i + 1, j, k),
                    idx(i + 1, j + 1, k),
                    idx(i, j + 1, k),
                    idx(i, j, k + 1),
                    idx(i + 1, j, k + 1),
                    idx(i + 1, j + 1, k + 1),
                    idx(i, j + 1, k + 1),
                ]);
            }
        }
    }
    SampleGrid { points, cells }
}

/// Re/Im parts of B, E, D, J and their quasistatic (e) and correction (m)
/// parts, evaluated at every grid point.
pub fn field_arrays(grid: &SampleGrid, fields: &DerivedFields) -> lfmaxwell::Result<Vec<VectorField>> {
    let samples: Vec<FieldSample> = grid
        .points
        .iter()
        .map(|&p| fields.evaluate(p))
        .collect::<lfmaxwell::Result<_>>()?;
    type Pick = fn(&FieldSample) -> [Complex64; 3];
    let picks: [(&str, Pick); 8] = [
        ("B", |s| s.b),
        ("E", |s| s.e),
        ("D", |s| s.d),
        ("D_e", |s| s.d_e),
        ("D_m", |s| s.d_m),
        ("J", |s| s.j),
        ("J_e", |s| s.j_e),
        ("J_m", |s| s.j_m),
    ];
    let mut out = Vec::new();
    for (name, pick) in picks {
        out.push(VectorField {
            name: format!("{name}_re"),
            values: samples.iter().map(|s| pick(s).map(|z| z.re)).collect(),
        });
        out.push(VectorField {
            name: format!("{name}_im"),
            values: samples.iter().map(|s| pick(s).map(|z| z.im)).collect(),
        });
    }
    Ok(out)
}

/// Coordinates use the shortest round-trip formatting, so parsing them back
/// gives the same bits.
pub fn write_vtk(grid: &SampleGrid, fields: &[VectorField], title: &str, out: &mut dyn Write) -> io::Result<()> {
    for f in fields {
        if f.values.len() != grid.points.len() {
            return Err(io::Error::new(
                io::ErrorKind::InvalidInput,
                format!("field {} has {} values for {} points", f.name, f.values.len(), grid.points.len()),
            ));
        }
    }
    writeln!(out, "# vtk DataFile Version 3.0")?;
    writeln!(out, "{}", title.replace('\n', " "))?;
    writeln!(out, "ASCII")?;
    writeln!(out, "DATASET UNSTRUCTURED_GRID")?;
    writeln!(out, "POINTS {} double", grid.points.len())?;
    for p in &grid.points {
        writeln!(out, "{} {} {}", p[0], p[1], p[2])?;
    }
    writeln!(out, "CELLS {} {}", grid.cells.len(), grid.cells.len() * 9)?;
    for c in &grid.cells {
        writeln!(out, "8 {} {} {} {} {} {} {} {}", c[0], c[1], c[2], c[3], c[4], c[5], c[6], c[7])?;
    }
    writeln!(out, "CELL_TYPES {}", grid.cells.len())?;
    for _ in &grid.cells {
        writeln!(out, "{VTK_HEXAHEDRON}")?;
    }
    if !fields.is_empty() {
        writeln!(out, "POINT_DATA {}", grid.points.len())?;
        for f in fields {
            writeln!(out, "VECTORS {} double", f.name)?;
            for v in &f.values {
                writeln!(out, "{:e} {:e} {:e}", v[0], v[1], v[2])?;
            }
        }
    }
    Ok(())
}

/// Reads the POINTS block back from a legacy ASCII file.
pub fn parse_points(text: &str) -> Result<Vec<[f64; 3]>, String> {
    let mut lines = text.lines();
    let header = lines
        .by_ref()
        .find(|l| l.starts_with("POINTS"))
        .ok_or("no POINTS section")?;
    let count: usize = header
        .split_whitespace()
        .nth(1)
        .and_then(|n| n.parse().ok())
        .ok_or("bad POINTS header")?;
    let mut values = Vec::with_capacity(3 * count);
    for line in lines {
        if values.len() == 3 * count {
            break;
        }
        for w in line.split_whitespace() {
            values.push(w.parse::<f64>().map_err(|_| format!("bad coordinate `{w}`"))?);
        }
    }
    if values.len() != 3 * count {
        return Err(format!("expected {} coordinates, found {}", 3 * count, values.len()));
    }
    Ok(values.chunks(3).map(|c| [c[0], c[1], c[2]]).collect())
}
