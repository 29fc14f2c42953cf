//! Uniform cell-centred meshes, ghost layers and field storage.

use crate::scalar::Real;
use crate::state::{ConservedState, PrimitiveState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dim {
    One,
    Two,
}

/// Uniform mesh of `nx × ny` cells with `ghost` layers on every side of an
/// active direction. One-dimensional meshes have `ny = 1` and no y ghosts.
#[derive(Clone, Debug, PartialEq)]
pub struct Mesh {
    pub dim: Dim,
    pub xa: f64,
    pub xb: f64,
    pub ya: f64,
    pub yb: f64,
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: f64,
    pub ghost: usize,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum MeshError {
    #[error("cell count must be positive")]
    Empty,
    #[error("domain bounds must satisfy a < b, got [{0}, {1}]")]
    Bounds(f64, f64),
}

impl Mesh {
    pub fn new_1d(xa: f64, xb: f64, nx: usize, ghost: usize) -> Result<Self, MeshError> {
        if nx == 0 {
            return Err(MeshError::Empty);
        }
        if !(xa < xb) {
            return Err(MeshError::Bounds(xa, xb));
        }
        Ok(Self {
            dim: Dim::One,
            xa,
            xb,
            ya: 0.0,
            yb: 1.0,
            nx,
            ny: 1,
            dx: (xb - xa) / nx as f64,
            dy: 1.0,
            ghost,
        })
    }

    pub fn new_2d(bounds: [f64; 4], nx: usize, ny: usize, ghost: usize) -> Result<Self, MeshError> {
        let [xa, xb, ya, yb] = bounds;
        if nx == 0 || ny == 0 {
            return Err(MeshError::Empty);
        }
        if !(xa < xb) {
            return Err(MeshError::Bounds(xa, xb));
        }
        if !(ya < yb) {
            return Err(MeshError::Bounds(ya, yb));
        }
        Ok(Self {
            dim: Dim::Two,
            xa,
            xb,
            ya,
            yb,
            nx,
            ny,
            dx: (xb - xa) / nx as f64,
            dy: (yb - ya) / ny as f64,
            ghost,
        })
    }

    /// Ghost layers in y, zero for one-dimensional meshes.
    #[inline]
    pub fn ghost_y(&self) -> usize {
        match self.dim {
            Dim::One => 0,
            Dim::Two => self.ghost,
        }
    }

    #[inline]
    pub fn nx_total(&self) -> usize {
        self.nx + 2 * self.ghost
    }

    #[inline]
    pub fn ny_total(&self) -> usize {
        self.ny + 2 * self.ghost_y()
    }

    #[inline]
    pub fn len_total(&self) -> usize {
        self.nx_total() * self.ny_total()
    }

    /// Storage index of interior cell `(i, j)`.
    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        (j + self.ghost_y()) * self.nx_total() + i + self.ghost
    }

    /// Storage index of a cell given in padded coordinates.
    #[inline]
    pub fn idx_padded(&self, ip: usize, jp: usize) -> usize {
        jp * self.nx_total() + ip
    }

    /// Cell centre `x_i = xa + (i + 1/2) Δx`.
    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.xa + (i as f64 + 0.5) * self.dx
    }

    #[inline]
    pub fn y(&self, j: usize) -> f64 {
        match self.dim {
            Dim::One => 0.0,
            Dim::Two => self.ya + (j as f64 + 0.5) * self.dy,
        }
    }

    /// Volume of one cell, `Δx` in 1D and `Δx Δy` in 2D.
    #[inline]
    pub fn cell_volume(&self) -> f64 {
        match self.dim {
            Dim::One => self.dx,
            Dim::Two => self.dx * self.dy,
        }
    }

    pub fn cells(&self) -> usize {
        self.nx * self.ny
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BcKind {
    Periodic,
    /// Zero-gradient: ghosts copy the nearest interior cell.
    Neumann,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BoundaryCondition {
    pub x: BcKind,
    pub y: BcKind,
}

impl BoundaryCondition {
    pub fn periodic() -> Self {
        Self { x: BcKind::Periodic, y: BcKind::Periodic }
    }

    pub fn neumann() -> Self {
        Self { x: BcKind::Neumann, y: BcKind::Neumann }
    }

    /// Both kinds work for any positive cell count, including fewer cells
    /// than ghost layers.
    pub fn validate(&self, mesh: &Mesh) -> Result<(), MeshError> {
        if mesh.nx == 0 || mesh.ny == 0 {
            return Err(MeshError::Empty);
        }
        Ok(())
    }
}

/// Source index for ghost position `p` of a padded line with `g` ghosts and
/// `n` interior cells.
#[inline]
fn ghost_source(p: usize, g: usize, n: usize, kind: BcKind) -> usize {
    match kind {
        BcKind::Periodic => g + (p + n - g % n) % n,
        BcKind::Neumann => p.clamp(g, g + n - 1),
    }
}

/// Conserved variables on a mesh, stored as six component arrays in
/// row-major `(j, i)` order including ghosts.
#[derive(Clone, Debug, PartialEq)]
pub struct GridField<T> {
    pub mesh: Mesh,
    pub data: [Vec<T>; 6],
}

impl<T: Real> GridField<T> {
    pub fn zeros(mesh: Mesh) -> Self {
        let n = mesh.len_total();
        Self { data: std::array::from_fn(|_| vec![T::zero(); n]), mesh }
    }

    /// Fills the interior from a function of the cell centre.
    pub fn from_fn(mesh: Mesh, mut f: impl FnMut(f64, f64) -> PrimitiveState<T>) -> Self {
        let mut field = Self::zeros(mesh);
        for j in 0..field.mesh.ny {
            for i in 0..field.mesh.nx {
                let u = f(field.mesh.x(i), field.mesh.y(j)).to_conserved();
                field.set(i, j, &u);
            }
        }
        field
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> ConservedState<T> {
        self.get_padded(self.mesh.idx(i, j))
    }

    #[inline]
    pub fn get_padded(&self, n: usize) -> ConservedState<T> {
        ConservedState(std::array::from_fn(|k| self.data[k][n]))
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, u: &ConservedState<T>) {
        let n = self.mesh.idx(i, j);
        self.set_padded(n, u);
    }

    #[inline]
    pub fn set_padded(&mut self, n: usize, u: &ConservedState<T>) {
        for k in 0..6 {
            self.data[k][n] = u.0[k];
        }
    }

    /// Copies interior values into the ghost layers. Corners are filled by
    /// the y pass over padded columns, so periodic corners wrap twice.
    pub fn fill_ghosts(&mut self, bc: &BoundaryCondition) {
        let m = &self.mesh;
        let (g, nx, nxt) = (m.ghost, m.nx, m.nx_total());
        let (gy, ny, nyt) = (m.ghost_y(), m.ny, m.ny_total());
        for comp in self.data.iter_mut() {
            for jp in gy..gy + ny {
                let row = &mut comp[jp * nxt..(jp + 1) * nxt];
                for p in (0..g).chain(g + nx..nxt) {
                    row[p] = row[ghost_source(p, g, nx, bc.x)];
                }
            }
            if gy > 0 {
                for p in (0..gy).chain(gy + ny..nyt) {
                    let src = ghost_source(p, gy, ny, bc.y);
                    let (a, b) = (p * nxt, src * nxt);
                    comp.copy_within(b..b + nxt, a);
                }
            }
        }
    }

    /// Interior states as primitive variables, row-major.
    pub fn interior_primitives(&self) -> Result<Vec<PrimitiveState<T>>, (usize, usize, crate::state::StateError)> {
        let mut out = Vec::with_capacity(self.mesh.cells());
        for j in 0..self.mesh.ny {
            for i in 0..self.mesh.nx {
                out.push(self.get(i, j).to_primitive().map_err(|e| (i, j, e))?);
            }
        }
        Ok(out)
    }

    /// Sum over interior cells of component `k`, in fixed row-major order.
    pub fn interior_sum(&self, k: usize) -> T {
        let mut s = T::zero();
        for j in 0..self.mesh.ny {
            let start = self.mesh.idx(0, j);
            for v in &self.data[k][start..start + self.mesh.nx] {
                s += *v;
            }
        }
        s
    }

    pub fn cast<U: Real>(&self) -> GridField<U> {
        GridField {
            mesh: self.mesh.clone(),
            data: std::array::from_fn(|k| self.data[k].iter().map(|x| U::lit(x.as_f64())).collect()),
        }
    }
}

/// Central difference of `h` along a padded line. Returns one value per
/// interior entry `g..len - g`, `order ∈ {2, 4}`.
pub fn central_diff_h<T: Real>(line: &[T], g: usize, order: usize, spacing: T) -> Vec<T> {
    let mut out = Vec::with_capacity(line.len().saturating_sub(2 * g));
    central_diff_into(line, g, order, spacing, &mut out);
    out
}

#[inline]
pub(crate) fn central_diff_into<T: Real>(line: &[T], g: usize, order: usize, spacing: T, out: &mut Vec<T>) {
    out.clear();
    let n = line.len() - 2 * g;
    match order {
        2 => {
            assert!(g >= 1);
            let c = T::one() / (T::lit(2.0) * spacing);
            out.extend((g..g + n).map(|i| (line[i + 1] - line[i - 1]) * c));
        }
        4 => {
            assert!(g >= 2);
            let c = T::one() / (T::lit(12.0) * spacing);
            let eight = T::lit(8.0);
            out.extend(
                (g..g + n).map(|i| (-line[i + 2] + eight * line[i + 1] - eight * line[i - 1] + line[i - 2]) * c),
            );
        }
        _ => panic!("central difference order must be 2 or 4"),
    }
}
