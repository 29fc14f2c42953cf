//! Error norms, convergence tables, entropy series and file output.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::grid::{Dim, GridField};
use crate::scalar::Real;
use crate::scheme::SchemeOrder;
use crate::state::{PrimitiveState, StateError};

pub const PRIMITIVE_NAMES: [&str; 6] = ["h", "v1", "v2", "P11", "P12", "P22"];

#[derive(Debug, thiserror::Error)]
pub enum DiagnosticsError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },
    #[error("inadmissible cell ({i}, {j}): {source}")]
    State { i: usize, j: usize, source: StateError },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> DiagnosticsError + '_ {
    move |source| DiagnosticsError::Io { path: path.to_path_buf(), source }
}

/// Interior primitive variables in row-major order, converted to `f64`.
pub fn primitives<T: Real>(field: &GridField<T>) -> Result<Vec<PrimitiveState<f64>>, DiagnosticsError> {
    let mesh = &field.mesh;
    let mut out = Vec::with_capacity(mesh.cells());
    for j in 0..mesh.ny {
        for i in 0..mesh.nx {
            let w = field.get(i, j).to_primitive().map_err(|source| DiagnosticsError::State { i, j, source })?;
            out.push(w.cast());
        }
    }
    Ok(out)
}

/// `Σ |w_k − w_k^exact(x, y)| ΔV` with the exact solution sampled at cell
/// centres.
pub fn l1_error<T: Real>(
    field: &GridField<T>,
    exact: impl Fn(f64, f64) -> PrimitiveState<f64>,
    component: usize,
) -> Result<f64, DiagnosticsError> {
    let mesh = &field.mesh;
    let w = primitives(field)?;
    let mut s = 0.0;
    for j in 0..mesh.ny {
        for i in 0..mesh.nx {
            s += (w[j * mesh.nx + i].0[component] - exact(mesh.x(i), mesh.y(j)).0[component]).abs();
        }
    }
    Ok(s * mesh.cell_volume())
}

/// L1 distance in one primitive component between two fields on the same mesh.
pub fn l1_distance<T: Real>(a: &GridField<T>, b: &GridField<T>, component: usize) -> Result<f64, DiagnosticsError> {
    assert_eq!((a.mesh.nx, a.mesh.ny), (b.mesh.nx, b.mesh.ny), "mesh mismatch");
    let (wa, wb) = (primitives(a)?, primitives(b)?);
    let s: f64 = wa.iter().zip(&wb).map(|(x, y)| (x.0[component] - y.0[component]).abs()).sum();
    Ok(s * a.mesh.cell_volume())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub l1_error: f64,
    /// `None` for the first row.
    pub order: Option<f64>,
}

/// Observed orders `log(e_{k−1}/e_k) / log(N_k/N_{k−1})`.
pub fn convergence_orders(data: &[(usize, f64)]) -> Vec<ConvergenceRow> {
    data.iter()
        .enumerate()
        .map(|(k, &(n, e))| ConvergenceRow {
            n,
            l1_error: e,
            order: (k > 0).then(|| {
                let (n0, e0) = data[k - 1];
                (e0 / e).ln() / (n as f64 / n0 as f64).ln()
            }),
        })
        .collect()
}

pub fn format_convergence_table(rows: &[ConvergenceRow]) -> String {
    let mut s = String::from("N,L1_error,order\n");
    for r in rows {
        let o = r.order.map_or("--".to_string(), |o| format!("{o:.2}"));
        let _ = writeln!(s, "{},{:.3e},{}", r.n, r.l1_error, o);
    }
    s
}

/// Total entropy `Σ η ΔV`, summed sequentially in row-major order.
pub fn total_entropy<T: Real>(field: &GridField<T>) -> Result<f64, StateError> {
    let mesh = &field.mesh;
    let mut s = 0.0f64;
    for j in 0..mesh.ny {
        for i in 0..mesh.nx {
            s += field.get(i, j).to_primitive()?.entropy().0.as_f64();
        }
    }
    Ok(s * mesh.cell_volume())
}

/// Total mass `Σ h ΔV`.
pub fn total_mass<T: Real>(field: &GridField<T>) -> f64 {
    field.interior_sum(0).as_f64() * field.mesh.cell_volume()
}

/// Largest single-step entropy increase relative to `max(1, |S|)`.
pub fn max_entropy_increase(series: &[(f64, f64)]) -> f64 {
    series
        .windows(2)
        .map(|p| (p[1].1 - p[0].1) / p[0].1.abs().max(1.0))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Sampled profile of primitive variables, as read from CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct Profile {
    pub x: Vec<f64>,
    pub y: Option<Vec<f64>>,
    pub w: Vec<[f64; 6]>,
}

impl Profile {
    pub fn from_field<T: Real>(field: &GridField<T>) -> Result<Self, DiagnosticsError> {
        let mesh = &field.mesh;
        let w = primitives(field)?;
        let mut x = Vec::with_capacity(w.len());
        let mut y = Vec::with_capacity(w.len());
        for j in 0..mesh.ny {
            for i in 0..mesh.nx {
                x.push(mesh.x(i));
                y.push(mesh.y(j));
            }
        }
        Ok(Self { x, y: (mesh.dim == Dim::Two).then_some(y), w: w.into_iter().map(|p| p.0).collect() })
    }

    /// Linear interpolation of component `k` of a 1D profile; constant
    /// extrapolation outside the sampled range.
    pub fn sample(&self, x: f64, k: usize) -> f64 {
        let n = self.x.len();
        if x <= self.x[0] {
            return self.w[0][k];
        }
        if x >= self.x[n - 1] {
            return self.w[n - 1][k];
        }
        let r = self.x.partition_point(|xi| *xi <= x);
        let (x0, x1) = (self.x[r - 1], self.x[r]);
        let t = (x - x0) / (x1 - x0);
        self.w[r - 1][k] * (1.0 - t) + self.w[r][k] * t
    }

    /// Averages consecutive blocks of a 1D profile down to `n` samples.
    pub fn block_average(&self, n: usize) -> Option<Profile> {
        let m = self.x.len();
        if n == 0 || !m.is_multiple_of(n) {
            return None;
        }
        let r = m / n;
        let inv = 1.0 / r as f64;
        let mut out = Profile { x: Vec::with_capacity(n), y: None, w: Vec::with_capacity(n) };
        for b in 0..n {
            let xs = &self.x[b * r..(b + 1) * r];
            out.x.push(xs.iter().sum::<f64>() * inv);
            out.w.push(std::array::from_fn(|k| self.w[b * r..(b + 1) * r].iter().map(|w| w[k]).sum::<f64>() * inv));
        }
        Some(out)
    }
}

/// L1 distance in component `k` between a 1D field and a reference profile.
/// The reference is block averaged when its size is a multiple of the mesh
/// size, otherwise sampled linearly at cell centres.
pub fn l1_distance_to_profile<T: Real>(field: &GridField<T>, reference: &Profile, k: usize) -> Result<f64, DiagnosticsError> {
    let mesh = &field.mesh;
    let w = primitives(field)?;
    let s: f64 = match reference.block_average(mesh.nx) {
        Some(r) => w.iter().zip(&r.w).map(|(a, b)| (a.0[k] - b[k]).abs()).sum(),
        None => (0..mesh.nx).map(|i| (w[i].0[k] - reference.sample(mesh.x(i), k)).abs()).sum(),
    };
    Ok(s * mesh.dx)
}

/// `<case>_<scheme>_<N>[_t<time>].<ext>`
pub fn output_name(case: &str, order: SchemeOrder, n: usize, time: Option<f64>, ext: &str) -> String {
    match time {
        Some(t) => format!("{case}_{}_{n}_t{t}.{ext}", order.name()),
        None => format!("{case}_{}_{n}.{ext}", order.name()),
    }
}

fn create(path: &Path) -> Result<BufWriter<fs::File>, DiagnosticsError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err(path))?;
    }
    Ok(BufWriter::new(fs::File::create(path).map_err(io_err(path))?))
}

/// Writes cell-centre primitive variables with 17 significant digits.
pub fn write_csv<T: Real>(field: &GridField<T>, path: &Path) -> Result<(), DiagnosticsError> {
    let p = Profile::from_field(field)?;
    let mut f = create(path)?;
    let mut s = String::new();
    s.push_str(if p.y.is_some() { "x,y," } else { "x," });
    s.push_str(&PRIMITIVE_NAMES.join(","));
    s.push('\n');
    for (n, w) in p.w.iter().enumerate() {
        let _ = write!(s, "{:.16e}", p.x[n]);
        if let Some(y) = &p.y {
            let _ = write!(s, ",{:.16e}", y[n]);
        }
        for v in w {
            let _ = write!(s, ",{v:.16e}");
        }
        s.push('\n');
    }
    f.write_all(s.as_bytes()).map_err(io_err(path))?;
    f.flush().map_err(io_err(path))
}

pub fn read_csv(path: &Path) -> Result<Profile, DiagnosticsError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let parse_err = |line: usize, msg: String| DiagnosticsError::Parse { path: path.to_path_buf(), line, msg };
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty file".into()))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    let has_y = match cols.as_slice() {
        ["x", rest @ ..] if rest == PRIMITIVE_NAMES => false,
        ["x", "y", rest @ ..] if rest == PRIMITIVE_NAMES => true,
        _ => return Err(parse_err(1, format!("unexpected header `{header}`"))),
    };
    let mut p = Profile { x: Vec::new(), y: has_y.then(Vec::new), w: Vec::new() };
    for (ln, line) in lines {
        let vals: Result<Vec<f64>, _> = line.split(',').map(|v| v.trim().parse::<f64>()).collect();
        let vals = vals.map_err(|e| parse_err(ln + 1, e.to_string()))?;
        if vals.len() != cols.len() {
            return Err(parse_err(ln + 1, format!("expected {} columns, got {}", cols.len(), vals.len())));
        }
        let off = if has_y { 2 } else { 1 };
        if !has_y && p.x.last().is_some_and(|&x| vals[0] <= x) {
            return Err(parse_err(ln + 1, "x must be increasing".into()));
        }
        p.x.push(vals[0]);
        if let Some(y) = &mut p.y {
            y.push(vals[1]);
        }
        p.w.push(std::array::from_fn(|k| vals[off + k]));
    }
    Ok(p)
}

/// Writes a `(t, S)` series.
pub fn write_entropy_csv(series: &[(f64, f64)], path: &Path) -> Result<(), DiagnosticsError> {
    let mut f = create(path)?;
    let mut s = String::from("t,entropy\n");
    for (t, e) in series {
        let _ = writeln!(s, "{t:.16e},{e:.16e}");
    }
    f.write_all(s.as_bytes()).map_err(io_err(path))?;
    f.flush().map_err(io_err(path))
}

/// Legacy ASCII VTK structured points with one scalar per primitive variable.
pub fn write_vtk<T: Real>(field: &GridField<T>, path: &Path) -> Result<(), DiagnosticsError> {
    let mesh = &field.mesh;
    let w = primitives(field)?;
    let mut s = String::new();
    s.push_str("# vtk DataFile Version 3.0\nshear shallow water\nASCII\nDATASET STRUCTURED_POINTS\n");
    let _ = writeln!(s, "DIMENSIONS {} {} 1", mesh.nx, mesh.ny);
    let _ = writeln!(s, "ORIGIN {:.16e} {:.16e} 0", mesh.x(0), mesh.y(0));
    let dy = if mesh.dim == Dim::Two { mesh.dy } else { 1.0 };
    let _ = writeln!(s, "SPACING {:.16e} {:.16e} 1", mesh.dx, dy);
    let _ = writeln!(s, "POINT_DATA {}", w.len());
    for (k, name) in PRIMITIVE_NAMES.iter().enumerate() {
        let _ = writeln!(s, "SCALARS {name} double 1\nLOOKUP_TABLE default");
        for p in &w {
            let _ = writeln!(s, "{:.16e}", p.0[k]);
        }
    }
    let mut f = create(path)?;
    f.write_all(s.as_bytes()).map_err(io_err(path))?;
    f.flush().map_err(io_err(path))
}
