//! Library of test problems.

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::sync::Arc;

use crate::grid::{BoundaryCondition, Dim, Mesh, MeshError};
use crate::state::{ModelParams, PrimitiveState};

/// Initial condition `(x, y) ↦ W`.
pub type InitialFn = Arc<dyn Fn(f64, f64, &ModelParams<f64>) -> PrimitiveState<f64> + Send + Sync>;
/// Manufactured forcing `(x, y, t) ↦ 𝒮`.
pub type ForcingFn = Arc<dyn Fn(f64, f64, f64, &ModelParams<f64>) -> [f64; 6] + Send + Sync>;
/// Bottom `(x, y) ↦ (b, ∂b/∂x, ∂b/∂y)`.
pub type BottomFn = Arc<dyn Fn(f64, f64, &ModelParams<f64>) -> (f64, f64, f64) + Send + Sync>;
/// Exact solution `(x, y, t) ↦ W`.
pub type ExactFn = Arc<dyn Fn(f64, f64, f64, &ModelParams<f64>) -> PrimitiveState<f64> + Send + Sync>;

#[derive(Clone)]
pub struct CaseSpec {
    pub name: String,
    pub dim: Dim,
    /// `[xa, xb, ya, yb]`; the y bounds are ignored in 1D.
    pub bounds: [f64; 4],
    pub default_nx: usize,
    pub default_ny: Option<usize>,
    pub bc: BoundaryCondition,
    pub end_time: f64,
    pub params: ModelParams<f64>,
    /// Whether the physical source `S` is active.
    pub source: bool,
    pub ic: InitialFn,
    pub forcing: Option<ForcingFn>,
    pub bottom: Option<BottomFn>,
    pub exact: Option<ExactFn>,
    /// Optional reference profile in CSV form.
    pub reference: Option<PathBuf>,
}

impl fmt::Debug for CaseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CaseSpec")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("bounds", &self.bounds)
            .field("bc", &self.bc)
            .field("end_time", &self.end_time)
            .field("params", &self.params)
            .field("source", &self.source)
            .field("forcing", &self.forcing.is_some())
            .field("exact", &self.exact.is_some())
            .finish()
    }
}

impl CaseSpec {
    /// Mesh with `nx` cells in x. In 2D a missing `ny` keeps the cells square.
    pub fn mesh(&self, nx: usize, ny: Option<usize>, ghost: usize) -> Result<Mesh, MeshError> {
        let [xa, xb, ya, yb] = self.bounds;
        match self.dim {
            Dim::One => Mesh::new_1d(xa, xb, nx, ghost),
            Dim::Two => {
                let ny = ny.unwrap_or_else(|| ((nx as f64) * (yb - ya) / (xb - xa)).round().max(1.0) as usize);
                Mesh::new_2d(self.bounds, nx, ny, ghost)
            }
        }
    }

    /// No source and no forcing: total entropy must not grow.
    pub fn is_homogeneous(&self) -> bool {
        !self.source && self.forcing.is_none()
    }

    pub fn initial(&self, x: f64, y: f64) -> PrimitiveState<f64> {
        (self.ic)(x, y, &self.params)
    }
}

pub const CASE_NAMES: [&str; 10] = [
    "accuracy_1d",
    "accuracy_2d",
    "dam_break",
    "dam_break_eps",
    "five_wave",
    "shear",
    "single_shock",
    "roll_wave_1",
    "roll_wave_2",
    "roll_wave_2d",
];

pub fn by_name(name: &str) -> Option<CaseSpec> {
    Some(match name {
        "accuracy_1d" => accuracy_1d(),
        "accuracy_2d" => accuracy_2d(),
        "dam_break" => dam_break(DamBreakVariant::P12Zero),
        "dam_break_eps" => dam_break(DamBreakVariant::P12Eps),
        "five_wave" => five_wave(),
        "shear" => shear(),
        "single_shock" => single_shock(),
        "roll_wave_1" => roll_wave_1d(RollWaveCase::One),
        "roll_wave_2" => roll_wave_1d(RollWaveCase::Two),
        "roll_wave_2d" => roll_wave_2d(),
        _ => return None,
    })
}

fn prim(w: [f64; 6]) -> PrimitiveState<f64> {
    PrimitiveState(w)
}

fn base_1d(name: &str, bounds: (f64, f64), bc: BoundaryCondition, end_time: f64, ic: InitialFn) -> CaseSpec {
    CaseSpec {
        name: name.to_string(),
        dim: Dim::One,
        bounds: [bounds.0, bounds.1, 0.0, 1.0],
        default_nx: 500,
        default_ny: None,
        bc,
        end_time,
        params: ModelParams::default(),
        source: false,
        ic,
        forcing: None,
        bottom: None,
        exact: None,
        reference: None,
    }
}

fn riemann(name: &str, left: [f64; 6], right: [f64; 6], end_time: f64) -> CaseSpec {
    base_1d(
        name,
        (-0.5, 0.5),
        BoundaryCondition::neumann(),
        end_time,
        Arc::new(move |x, _, _| prim(if x < 0.0 { left } else { right })),
    )
}

/// Smooth periodic solution `h = 2 + sin 2π(x − t)` driven by a forcing term.
pub fn accuracy_1d() -> CaseSpec {
    let exact: ExactFn = Arc::new(|x, _, t, _| prim([2.0 + (2.0 * PI * (x - t)).sin(), 1.0, 0.0, 1.0, 0.0, 1.0]));
    let e = Arc::clone(&exact);
    let mut c = base_1d("accuracy_1d", (-0.5, 0.5), BoundaryCondition::periodic(), 0.5, Arc::new(move |x, y, p| e(x, y, 0.0, p)));
    c.default_nx = 100;
    c.forcing = Some(Arc::new(|x, _, t, p| {
        let th = 2.0 * PI * (x - t);
        let s = 2.0 * PI * th.cos() * (1.0 + 2.0 * p.g + p.g * th.sin());
        [0.0, s, 0.0, s, 0.0, 0.0]
    }));
    c.exact = Some(exact);
    c
}

/// Two-dimensional smooth solution `h = 2 + sin 2π(x + y − t)`.
pub fn accuracy_2d() -> CaseSpec {
    let exact: ExactFn =
        Arc::new(|x, y, t, _| prim([2.0 + (2.0 * PI * (x + y - t)).sin(), 0.5, 0.5, 1.0, 0.0, 1.0]));
    let e = Arc::clone(&exact);
    CaseSpec {
        name: "accuracy_2d".into(),
        dim: Dim::Two,
        bounds: [-0.5, 0.5, -0.5, 0.5],
        default_nx: 40,
        default_ny: Some(40),
        bc: BoundaryCondition::periodic(),
        end_time: 0.5,
        params: ModelParams::default(),
        source: false,
        ic: Arc::new(move |x, y, p| e(x, y, 0.0, p)),
        forcing: Some(Arc::new(|x, y, t, p| {
            let th = 2.0 * PI * (x + y - t);
            let a = PI * th.cos() * (1.0 + 2.0 * p.g + p.g * th.sin());
            [0.0, 2.0 * a, 2.0 * a, a, a, a]
        })),
        bottom: None,
        exact: Some(exact),
        reference: None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DamBreakVariant {
    P12Zero,
    /// `P12 = 1e-8` on both sides.
    P12Eps,
}

pub fn dam_break(variant: DamBreakVariant) -> CaseSpec {
    let p12 = match variant {
        DamBreakVariant::P12Zero => 0.0,
        DamBreakVariant::P12Eps => 1e-8,
    };
    let name = match variant {
        DamBreakVariant::P12Zero => "dam_break",
        DamBreakVariant::P12Eps => "dam_break_eps",
    };
    riemann(name, [0.02, 0.0, 0.0, 4e-2, p12, 4e-2], [0.01, 0.0, 0.0, 4e-2, p12, 4e-2], 0.5)
}

pub fn five_wave() -> CaseSpec {
    riemann("five_wave", [0.01, 0.1, 0.2, 4e-2, 1e-8, 4e-2], [0.02, 0.1, -0.2, 4e-2, 1e-8, 4e-2], 0.5)
}

pub fn shear() -> CaseSpec {
    riemann("shear", [0.01, 0.0, 0.2, 1e-4, 0.0, 1e-4], [0.01, 0.0, -0.2, 1e-4, 0.0, 1e-4], 10.0)
}

pub fn single_shock() -> CaseSpec {
    let mut c = riemann(
        "single_shock",
        [0.02, 0.0, 0.0, 1e-1, 0.0, 1e-1],
        [0.03, -7.010706099, 0.0, 16.616666666666658, 0.0, 1e-1],
        0.015811388,
    );
    c.params.g = 9.81e3;
    c
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RollWaveCase {
    One,
    Two,
}

/// Roll wave parameters besides those in [`ModelParams`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RollWaveData {
    pub h0: f64,
    pub amplitude: f64,
    pub lx: f64,
}

pub fn roll_wave_data(which: RollWaveCase) -> (ModelParams<f64>, RollWaveData) {
    match which {
        RollWaveCase::One => (
            ModelParams { g: 9.81, c_f: 0.0036, c_r: 0.00035, phi: 22.7, theta: 0.05011 },
            RollWaveData { h0: 7.98e-3, amplitude: 0.05, lx: 1.3 },
        ),
        RollWaveCase::Two => (
            ModelParams { g: 9.81, c_f: 0.0038, c_r: 0.002, phi: 153.501, theta: 0.11928 },
            RollWaveData { h0: 5.33e-3, amplitude: 0.05, lx: 1.8 },
        ),
    }
}

/// Uniform-flow velocity balancing gravity and friction.
pub fn roll_wave_velocity(p: &ModelParams<f64>, h0: f64) -> f64 {
    (p.g * h0 * p.theta.tan() / p.c_f).sqrt()
}

fn inclined_bottom() -> BottomFn {
    Arc::new(|x, _, p| {
        let s = p.theta.tan();
        (-x * s, -s, 0.0)
    })
}

pub fn roll_wave_1d(which: RollWaveCase) -> CaseSpec {
    let (params, d) = roll_wave_data(which);
    let name = match which {
        RollWaveCase::One => "roll_wave_1",
        RollWaveCase::Two => "roll_wave_2",
    };
    let ic: InitialFn = Arc::new(move |x, _, p| {
        let h = d.h0 * (1.0 + d.amplitude * (2.0 * PI * x / d.lx).sin());
        let pp = 0.5 * p.phi * h * h;
        prim([h, roll_wave_velocity(p, d.h0), 0.0, pp, 0.0, pp])
    });
    let mut c = base_1d(name, (0.0, d.lx), BoundaryCondition::periodic(), 25.0, ic);
    c.params = params;
    c.source = true;
    c.bottom = Some(inclined_bottom());
    c
}

/// Two-dimensional roll waves on `[0, 1.3] × [0, 0.5]`.
pub fn roll_wave_2d() -> CaseSpec {
    let (params, d) = roll_wave_data(RollWaveCase::One);
    let ly = 0.5;
    CaseSpec {
        name: "roll_wave_2d".into(),
        dim: Dim::Two,
        bounds: [0.0, d.lx, 0.0, ly],
        default_nx: 260,
        default_ny: Some(100),
        bc: BoundaryCondition::periodic(),
        end_time: 36.0,
        params,
        source: true,
        ic: Arc::new(move |x, y, p| {
            let h = d.h0 * (1.0 + d.amplitude * (2.0 * PI * x / d.lx).sin() + d.amplitude * (2.0 * PI * y / ly).sin());
            let pp = 0.5 * p.phi * h * h;
            prim([h, roll_wave_velocity(p, d.h0), 0.0, pp, 0.0, pp])
        }),
        forcing: None,
        bottom: Some(inclined_bottom()),
        exact: None,
        reference: None,
    }
}

/// Constant state on a periodic unit interval.
pub fn uniform_state_1d(w: [f64; 6], g: f64) -> CaseSpec {
    let mut c = base_1d("uniform_1d", (0.0, 1.0), BoundaryCondition::periodic(), 1.0, Arc::new(move |_, _, _| prim(w)));
    c.params.g = g;
    c
}

/// Constant state on a periodic unit square.
pub fn uniform_state_2d(w: [f64; 6], g: f64) -> CaseSpec {
    CaseSpec {
        name: "uniform_2d".into(),
        dim: Dim::Two,
        bounds: [0.0, 1.0, 0.0, 1.0],
        default_nx: 16,
        default_ny: Some(16),
        bc: BoundaryCondition::periodic(),
        end_time: 1.0,
        params: ModelParams { g, ..ModelParams::default() },
        source: false,
        ic: Arc::new(move |_, _, _| prim(w)),
        forcing: None,
        bottom: None,
        exact: None,
        reference: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physics::{flux, noncons, source, Dir};

    #[test]
    fn registry_is_complete() {
        for name in CASE_NAMES {
            let c = by_name(name).unwrap();
            assert_eq!(c.name, name);
        }
        assert!(by_name("nope").is_none());
    }

    #[test]
    fn initial_conditions_are_admissible() {
        for name in CASE_NAMES {
            let c = by_name(name).unwrap();
            let mesh = c.mesh(64, None, 2).unwrap();
            for j in 0..mesh.ny {
                for i in 0..mesh.nx {
                    c.initial(mesh.x(i), mesh.y(j)).check_admissible().unwrap();
                }
            }
        }
    }

    #[test]
    fn accuracy_1d_data() {
        let c = accuracy_1d();
        let e = c.exact.as_ref().unwrap();
        assert_eq!(e(0.0, 0.0, 0.0, &c.params).h(), 2.0);
        let f = c.forcing.as_ref().unwrap()(0.13, 0.0, 0.2, &c.params);
        assert!(f[0] == 0.0 && f[2] == 0.0 && f[4] == 0.0 && f[5] == 0.0);
        assert_eq!(f[1], f[3]);
        assert_eq!(c.bc, BoundaryCondition::periodic());
    }

    #[test]
    fn accuracy_2d_forcing_shape() {
        let c = accuracy_2d();
        let f = c.forcing.as_ref().unwrap()(0.1, 0.3, 0.2, &c.params);
        assert_eq!(f[0], 0.0);
        assert_eq!(f[1], f[2]);
        assert_eq!(f[1], 2.0 * f[3]);
        assert!(f[3] == f[4] && f[4] == f[5]);
    }

    /// ∂U/∂t + ∂F/∂x + B ∂h/∂x − 𝒮 evaluated on the exact solution with
    /// central differences in space and time.
    fn manufactured_residual(c: &CaseSpec, x: f64, y: f64, t: f64) -> f64 {
        let e = c.exact.as_ref().unwrap();
        let p = &c.params;
        let u = |x: f64, y: f64, t: f64| e(x, y, t, p).to_conserved().0;
        let eps = 1e-5;
        let mut res = [0.0; 6];
        let up = u(x, y, t + eps);
        let um = u(x, y, t - eps);
        for k in 0..6 {
            res[k] += (up[k] - um[k]) / (2.0 * eps);
        }
        let w = e(x, y, t, p);
        let dirs: &[(Dir, f64, f64)] = match c.dim {
            Dim::One => &[(Dir::X, 1.0, 0.0)],
            Dim::Two => &[(Dir::X, 1.0, 0.0), (Dir::Y, 0.0, 1.0)],
        };
        for &(dir, ax, ay) in dirs {
            let fp = flux(&e(x + ax * eps, y + ay * eps, t, p), dir);
            let fm = flux(&e(x - ax * eps, y - ay * eps, t, p), dir);
            let dh = (e(x + ax * eps, y + ay * eps, t, p).h() - e(x - ax * eps, y - ay * eps, t, p).h()) / (2.0 * eps);
            let b = noncons(&w, p.g, dir);
            for k in 0..6 {
                res[k] += (fp[k] - fm[k]) / (2.0 * eps) + b[k] * dh;
            }
        }
        let s = c.forcing.as_ref().unwrap()(x, y, t, p);
        (0..6).map(|k| (res[k] - s[k]).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn forcing_matches_exact_solution() {
        for c in [accuracy_1d(), accuracy_2d()] {
            for &(x, y, t) in &[(0.1, 0.0, 0.0), (-0.37, 0.21, 0.3), (0.44, -0.1, 0.5)] {
                let r = manufactured_residual(&c, x, y, t);
                assert!(r < 1e-6, "{} residual {r}", c.name);
            }
        }
    }

    #[test]
    fn riemann_states() {
        let c = dam_break(DamBreakVariant::P12Zero);
        assert_eq!(c.initial(-0.1, 0.0).0, [0.02, 0.0, 0.0, 4e-2, 0.0, 4e-2]);
        assert_eq!(c.initial(0.1, 0.0).0, [0.01, 0.0, 0.0, 4e-2, 0.0, 4e-2]);
        assert_eq!(c.end_time, 0.5);
        assert_eq!(c.bc, BoundaryCondition::neumann());
        assert_eq!(dam_break(DamBreakVariant::P12Eps).initial(0.1, 0.0).p12(), 1e-8);

        let f = five_wave();
        let (l, r) = (f.initial(-0.1, 0.0), f.initial(0.1, 0.0));
        assert_eq!(l.v1(), r.v1());
        assert_eq!(r.h() / l.h(), 2.0);

        let s = shear();
        assert_eq!(s.end_time, 10.0);
        let (l, r) = (s.initial(-0.2, 0.0), s.initial(0.2, 0.0));
        assert_eq!(l.v2(), -r.v2());

        let sh = single_shock();
        assert_eq!(sh.params.g, 9.81e3);
        assert_eq!(sh.initial(-0.1, 0.0).v1(), 0.0);
        assert_eq!(sh.initial(0.1, 0.0).0, [0.03, -7.010706099, 0.0, 16.616666666666658, 0.0, 0.1]);
        assert_eq!(sh.end_time, 0.015811388);
    }

    #[test]
    fn roll_wave_setup() {
        let c = roll_wave_1d(RollWaveCase::One);
        assert_eq!(c.params.c_r, 0.00035);
        assert_eq!(c.params.phi, 22.7);
        assert_eq!(c.bounds[1], 1.3);
        let (_, bx, by) = c.bottom.as_ref().unwrap()(0.4, 0.0, &c.params);
        assert_eq!((bx, by), (-c.params.theta.tan(), 0.0));
        let w = c.initial(0.3, 0.0);
        assert!((w.p11() - 0.5 * 22.7 * w.h() * w.h()).abs() < 1e-18);
        assert_eq!(crate::physics::alpha_closure(&w, &c.params), 0.0);

        // momentum source vanishes for the unperturbed depth
        let h0 = 7.98e-3;
        let v = roll_wave_velocity(&c.params, h0);
        let w0 = PrimitiveState([h0, v, 0.0, 0.5 * 22.7 * h0 * h0, 0.0, 0.5 * 22.7 * h0 * h0]);
        let s = source(&w0, (bx, by), &c.params);
        assert!(s[1].abs() < 1e-15);

        let c2 = roll_wave_1d(RollWaveCase::Two);
        assert_eq!(c2.params.theta, 0.11928);
        assert_eq!(c2.bounds[1], 1.8);
    }

    #[test]
    fn roll_wave_2d_mesh_aspect() {
        let c = roll_wave_2d();
        let m = c.mesh(260, None, 2).unwrap();
        assert_eq!((m.nx, m.ny), (260, 100));
        assert_eq!(c.end_time, 36.0);
    }
}
