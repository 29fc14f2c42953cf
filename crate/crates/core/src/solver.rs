//! Semi-discrete operator and SSP Runge-Kutta time integration.

use std::sync::Arc;

use rayon::prelude::*;

use crate::cases::{BottomFn, CaseSpec, ForcingFn};
use crate::diagnostics::total_entropy;
use crate::dissipation::{dissipation_oriented, WaveSpeeds};
use crate::ec_flux::{combine4, ec_flux_nodes, FluxNode};
use crate::grid::{central_diff_into, BoundaryCondition, Dim, GridField, Mesh};
use crate::linalg::Vec6;
use crate::physics::{max_wave_speed, noncons_x, source, Dir};
use crate::scalar::Real;
use crate::scheme::SchemeOrder;
use crate::state::{ModelParams, PrimitiveState, StateError};

/// Default Courant number.
pub const DEFAULT_CFL: f64 = 0.45;

/// Default number of step halvings after an inadmissible stage.
pub const DEFAULT_MAX_HALVINGS: u32 = 6;

#[derive(Clone, Debug, PartialEq)]
pub struct SchemeConfig {
    pub order: SchemeOrder,
    pub cfl: f64,
    pub end_time: f64,
    pub wave_speeds: WaveSpeeds,
    /// How often a step that produces an inadmissible state is retried with
    /// half the time step before the run aborts.
    pub max_halvings: u32,
    /// Evaluate topography, friction and turbulent dissipation sources.
    pub source_enabled: bool,
    /// Times at which snapshots of the field are stored.
    pub output_times: Vec<f64>,
}

impl SchemeConfig {
    pub fn new(order: SchemeOrder, end_time: f64) -> Self {
        Self {
            order,
            cfl: DEFAULT_CFL,
            end_time,
            wave_speeds: WaveSpeeds::default(),
            max_halvings: DEFAULT_MAX_HALVINGS,
            source_enabled: true,
            output_times: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.cfl > 0.0 && self.cfl.is_finite()) {
            return Err(SolverError::InvalidConfig(format!("cfl must be positive, got {}", self.cfl)));
        }
        if !(self.end_time >= 0.0 && self.end_time.is_finite()) {
            return Err(SolverError::InvalidConfig(format!("end time must be non-negative, got {}", self.end_time)));
        }
        if self.output_times.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
            return Err(SolverError::InvalidConfig("output times must be non-negative".into()));
        }
        Ok(())
    }
}

/// Cell state dump attached to solver failures.
#[derive(Clone, Debug, PartialEq)]
pub struct CellDump {
    pub i: usize,
    pub j: usize,
    pub u: [f64; 6],
}

#[derive(Clone, Debug, thiserror::Error)]
pub enum SolverError {
    #[error("inadmissible state at cell ({i}, {j}), stage {stage}, t = {time:e}: {source}")]
    Admissibility {
        i: usize,
        j: usize,
        stage: usize,
        time: f64,
        source: StateError,
        neighbourhood: Vec<CellDump>,
    },
    #[error("non-finite time step at t = {time:e}")]
    NonFinite { time: f64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

/// Shu-Osher form `U⁽ᵏ⁾ = Σ γ_kl U⁽ˡ⁾ + δ_kl Δt M(U⁽ˡ⁾)` of an explicit
/// SSP Runge-Kutta method; row `k - 1` holds the coefficients of stage `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct RkTableau {
    pub gamma: Vec<Vec<f64>>,
    pub delta: Vec<Vec<f64>>,
}

impl RkTableau {
    pub fn forward_euler() -> Self {
        Self { gamma: vec![vec![1.0]], delta: vec![vec![1.0]] }
    }

    pub fn ssp2() -> Self {
        Self { gamma: vec![vec![1.0], vec![0.5, 0.5]], delta: vec![vec![1.0], vec![0.0, 0.5]] }
    }

    pub fn ssp3() -> Self {
        Self {
            gamma: vec![vec![1.0], vec![0.75, 0.25], vec![1.0 / 3.0, 0.0, 2.0 / 3.0]],
            delta: vec![vec![1.0], vec![0.0, 0.25], vec![0.0, 0.0, 2.0 / 3.0]],
        }
    }

    /// Five-stage fourth-order SSP method.
    pub fn ssp4() -> Self {
        Self {
            gamma: vec![
                vec![1.0],
                vec![0.44437049406734, 0.55562950593266],
                vec![0.62010185138540, 0.0, 0.37989814861460],
                vec![0.17807995410773, 0.0, 0.0, 0.82192004589227],
                // leading weight closes the row sum exactly
                vec![1.0 - (0.51723167208978 + 0.12759831133288 + 0.34833675773694), 0.0, 0.51723167208978, 0.12759831133288, 0.34833675773694],
            ],
            delta: vec![
                vec![0.39175222700392],
                vec![0.0, 0.36841059262959],
                vec![0.0, 0.0, 0.25189177424738],
                vec![0.0, 0.0, 0.0, 0.54497475021237],
                vec![0.0, 0.0, 0.0, 0.08460416338212, 0.22600748319395],
            ],
        }
    }

    pub fn for_order(order: SchemeOrder) -> Self {
        match order {
            SchemeOrder::O1 => Self::forward_euler(),
            SchemeOrder::O2 => Self::ssp2(),
            SchemeOrder::O3 => Self::ssp3(),
            SchemeOrder::O4 => Self::ssp4(),
        }
    }

    pub fn stages(&self) -> usize {
        self.gamma.len()
    }

    /// Time offsets (in units of Δt) of the states `U⁽⁰⁾ … U⁽ᵐ⁾`.
    pub fn stage_times(&self) -> Vec<f64> {
        let mut c = vec![0.0];
        for (g, d) in self.gamma.iter().zip(&self.delta) {
            let ck = g.iter().zip(&c).map(|(a, b)| a * b).sum::<f64>() + d.iter().sum::<f64>();
            c.push(ck);
        }
        c
    }
}

/// One step of `tab` for an abstract state. `rhs(u, stage, t)` evaluates
/// `M(u)`; `lincomb` forms linear combinations of states.
pub fn ssp_step<S, E>(
    tab: &RkTableau,
    u0: S,
    t: f64,
    dt: f64,
    mut rhs: impl FnMut(&S, usize, f64) -> Result<S, E>,
    lincomb: impl Fn(&[(f64, &S)]) -> S,
) -> Result<S, E> {
    let c = tab.stage_times();
    let m = tab.stages();
    let mut states: Vec<S> = Vec::with_capacity(m + 1);
    let mut rates: Vec<Option<S>> = Vec::with_capacity(m);
    states.push(u0);
    for k in 0..m {
        let needed = tab.delta[k..].iter().any(|row| row.get(k).is_some_and(|d| *d != 0.0));
        rates.push(if needed { Some(rhs(&states[k], k, t + c[k] * dt)?) } else { None });
        let mut terms: Vec<(f64, &S)> = Vec::new();
        for l in 0..=k {
            let g = tab.gamma[k][l];
            if g != 0.0 {
                terms.push((g, &states[l]));
            }
            let d = tab.delta[k][l];
            if d != 0.0 {
                terms.push((d * dt, rates[l].as_ref().expect("rate evaluated")));
            }
        }
        let next = lincomb(&terms);
        states.push(next);
    }
    Ok(states.pop().expect("final stage"))
}

/// Semi-discrete operator `M(U)` for a fixed mesh and model.
#[derive(Clone)]
pub struct Operator<T: Real> {
    pub mesh: Mesh,
    pub bc: BoundaryCondition,
    pub order: SchemeOrder,
    pub params: ModelParams<T>,
    pub speeds: WaveSpeeds,
    params_f64: ModelParams<f64>,
    source_enabled: bool,
    forcing: Option<ForcingFn>,
    /// Bottom gradient per interior cell, row-major.
    grad_b: Vec<(T, T)>,
}

struct LineBuf<T> {
    w: Vec<PrimitiveState<T>>,
    v: Vec<Vec6<T>>,
    h: Vec<T>,
    dh: Vec<T>,
    nodes: Vec<FluxNode<T>>,
    near: Vec<Vec6<T>>,
    wide: Vec<Vec6<T>>,
    faces: Vec<Vec6<T>>,
    out: Vec<Vec6<T>>,
}

impl<T> Default for LineBuf<T> {
    fn default() -> Self {
        Self {
            w: Vec::new(),
            v: Vec::new(),
            h: Vec::new(),
            dh: Vec::new(),
            nodes: Vec::new(),
            near: Vec::new(),
            wide: Vec::new(),
            faces: Vec::new(),
            out: Vec::new(),
        }
    }
}

impl<T: Real> Operator<T> {
    pub fn new(
        mesh: Mesh,
        bc: BoundaryCondition,
        order: SchemeOrder,
        params: ModelParams<f64>,
        source_enabled: bool,
        forcing: Option<ForcingFn>,
        bottom: Option<BottomFn>,
    ) -> Self {
        let mut grad_b = Vec::with_capacity(mesh.cells());
        for j in 0..mesh.ny {
            for i in 0..mesh.nx {
                let (bx, by) = match &bottom {
                    Some(b) => {
                        let (_, bx, by) = b(mesh.x(i), mesh.y(j), &params);
                        (bx, by)
                    }
                    None => (0.0, 0.0),
                };
                grad_b.push((T::lit(bx), T::lit(by)));
            }
        }
        Self {
            mesh,
            bc,
            order,
            params: params.cast(),
            speeds: WaveSpeeds::default(),
            params_f64: params,
            source_enabled,
            forcing,
            grad_b,
        }
    }

    /// Evaluates `M(U)` at time `t`. Ghost layers of `field` are refilled.
    pub fn eval(&self, field: &mut GridField<T>, t: f64, stage: usize) -> Result<GridField<T>, SolverError> {
        field.fill_ghosts(&self.bc);
        let prims = self.primitives(field, t, stage)?;
        let vars: Vec<Vec6<T>> = prims.par_iter().map(|w| w.entropy_vars().0).collect();
        let mesh = &self.mesh;
        let (nx, ny, nxt) = (mesh.nx, mesh.ny, mesh.nx_total());
        let (g, gy) = (mesh.ghost, mesh.ghost_y());
        let gconst = self.params.g;
        let order = self.order;
        let speeds = self.speeds;

        // x sweep, one padded row per interior j
        let inv_dx = T::one() / T::lit(mesh.dx);
        let dx = T::lit(mesh.dx);
        let rows: Vec<Vec<Vec6<T>>> = (0..ny)
            .into_par_iter()
            .map_init(LineBuf::default, |buf, j| {
                let base = (j + gy) * nxt;
                buf.w.clear();
                buf.v.clear();
                buf.w.extend_from_slice(&prims[base..base + nxt]);
                buf.v.extend_from_slice(&vars[base..base + nxt]);
                line_operator(buf, g, order, gconst, speeds, inv_dx, dx);
                buf.out.clone()
            })
            .collect();

        let mut out = GridField::zeros(mesh.clone());
        for (j, row) in rows.iter().enumerate() {
            let base = mesh.idx(0, j);
            for (i, r) in row.iter().enumerate() {
                for k in 0..6 {
                    out.data[k][base + i] = r[k];
                }
            }
        }

        if mesh.dim == Dim::Two {
            let inv_dy = T::one() / T::lit(mesh.dy);
            let dy = T::lit(mesh.dy);
            let nyt = mesh.ny_total();
            let cols: Vec<Vec<Vec6<T>>> = (0..nx)
                .into_par_iter()
                .map_init(LineBuf::default, |buf, i| {
                    buf.w.clear();
                    buf.v.clear();
                    for jp in 0..nyt {
                        let n = jp * nxt + i + g;
                        buf.w.push(prims[n].swapped());
                        buf.v.push(Dir::Y.orient_vec(vars[n]));
                    }
                    line_operator(buf, gy, order, gconst, speeds, inv_dy, dy);
                    buf.out.iter().map(|r| Dir::Y.restore(*r)).collect()
                })
                .collect();
            for (i, col) in cols.iter().enumerate() {
                for (j, r) in col.iter().enumerate() {
                    let n = mesh.idx(i, j);
                    for k in 0..6 {
                        out.data[k][n] += r[k];
                    }
                }
            }
        }

        if self.source_enabled || self.forcing.is_some() {
            for j in 0..ny {
                for i in 0..nx {
                    let n = mesh.idx(i, j);
                    let mut add = [T::zero(); 6];
                    if self.source_enabled {
                        let w = &prims[n];
                        let s = source(w, self.grad_b[j * nx + i], &self.params);
                        for k in 0..6 {
                            add[k] += s[k];
                        }
                    }
                    if let Some(f) = &self.forcing {
                        let s = f(mesh.x(i), mesh.y(j), t, &self.params_f64);
                        for k in 0..6 {
                            add[k] += T::lit(s[k]);
                        }
                    }
                    for k in 0..6 {
                        out.data[k][n] += add[k];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Primitive variables on every padded cell; interior failures are
    /// reported with their neighbourhood.
    fn primitives(&self, field: &GridField<T>, t: f64, stage: usize) -> Result<Vec<PrimitiveState<T>>, SolverError> {
        let n = self.mesh.len_total();
        let res: Vec<Result<PrimitiveState<T>, StateError>> =
            (0..n).into_par_iter().map(|p| field.get_padded(p).to_primitive()).collect();
        let mut out = Vec::with_capacity(n);
        for (p, r) in res.into_iter().enumerate() {
            match r {
                Ok(w) => out.push(w),
                Err(source) => return Err(self.admissibility_error(field, p, stage, t, source)),
            }
        }
        Ok(out)
    }

    fn admissibility_error(&self, field: &GridField<T>, p: usize, stage: usize, time: f64, source: StateError) -> SolverError {
        let mesh = &self.mesh;
        let nxt = mesh.nx_total();
        let (ip, jp) = (p % nxt, p / nxt);
        let i = ip.saturating_sub(mesh.ghost).min(mesh.nx - 1);
        let j = jp.saturating_sub(mesh.ghost_y()).min(mesh.ny - 1);
        let mut neighbourhood = Vec::new();
        let (dy_lo, dy_hi) = if mesh.dim == Dim::Two { (j.saturating_sub(2), (j + 2).min(mesh.ny - 1)) } else { (0, 0) };
        for jj in dy_lo..=dy_hi {
            for ii in i.saturating_sub(2)..=(i + 2).min(mesh.nx - 1) {
                neighbourhood.push(CellDump { i: ii, j: jj, u: field.get(ii, jj).0.map(|x| x.as_f64()) });
            }
        }
        SolverError::Admissibility { i, j, stage, time, source, neighbourhood }
    }

    /// Stable time step `CFL / max(λx/Δx + λy/Δy)`.
    pub fn compute_dt(&self, field: &GridField<T>, cfl: f64) -> Result<f64, SolverError> {
        let mesh = &self.mesh;
        let g = self.params.g;
        let inv_dx = 1.0 / mesh.dx;
        let inv_dy = 1.0 / mesh.dy;
        let two_d = mesh.dim == Dim::Two;
        let rate = (0..mesh.ny)
            .into_par_iter()
            .map(|j| {
                let mut m = 0.0f64;
                for i in 0..mesh.nx {
                    let w = field.get(i, j).to_primitive_unchecked().map_err(|_| ())?;
                    let mut r = max_wave_speed(&w, g, Dir::X).as_f64() * inv_dx;
                    if two_d {
                        r += max_wave_speed(&w, g, Dir::Y).as_f64() * inv_dy;
                    }
                    if !r.is_finite() {
                        return Err(());
                    }
                    m = m.max(r);
                }
                Ok(m)
            })
            .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
            .map_err(|_| SolverError::NonFinite { time: f64::NAN })?;
        if !(rate > 0.0) {
            return Err(SolverError::NonFinite { time: f64::NAN });
        }
        Ok(cfl / rate)
    }
}

/// Operator contribution along one oriented line with `g` ghosts on each
/// side: flux divergence and the non-conservative gravity term. Results for
/// the interior cells are left in `buf.out`.
fn line_operator<T: Real>(
    buf: &mut LineBuf<T>,
    g: usize,
    order: SchemeOrder,
    gconst: T,
    speeds: WaveSpeeds,
    inv_dx: T,
    dx: T,
) {
    let len = buf.w.len();
    let n = len - 2 * g;
    let w_half = order.half_width();

    buf.nodes.clear();
    buf.nodes.extend(buf.w.iter().map(FluxNode::new));

    // two-point fluxes between i and i + 1 for faces g - 1 .. g + n - 1
    buf.near.clear();
    for l in g - 1..g + n {
        buf.near.push(ec_flux_nodes(&buf.nodes[l], &buf.nodes[l + 1]));
    }
    let four = order.four_point_flux();
    if four {
        // fluxes between i and i + 2 for i = g - 2 .. g + n - 1
        buf.wide.clear();
        for l in g - 2..g + n {
            buf.wide.push(ec_flux_nodes(&buf.nodes[l], &buf.nodes[l + 2]));
        }
    }

    buf.faces.clear();
    for f in 0..=n {
        let l = g - 1 + f;
        let ec = if four { combine4(&buf.near[f], &buf.wide[f], &buf.wide[f + 1]) } else { buf.near[f] };
        let stencil = &buf.v[l + 1 - w_half..l + 1 + w_half];
        let d = dissipation_oriented(&buf.w[l], &buf.w[l + 1], stencil, order, gconst, speeds);
        buf.faces.push(std::array::from_fn(|k| ec[k] - d[k]));
    }

    buf.h.clear();
    buf.h.extend(buf.w.iter().map(|w| w.h()));
    central_diff_into(&buf.h, g, order.central_diff_order(), dx, &mut buf.dh);

    buf.out.clear();
    for i in 0..n {
        let b = noncons_x(&buf.w[g + i], gconst);
        let (fl, fr) = (&buf.faces[i], &buf.faces[i + 1]);
        let dh = buf.dh[i];
        buf.out.push(std::array::from_fn(|k| -(fr[k] - fl[k]) * inv_dx - b[k] * dh));
    }
}

/// Everything produced by [`run`].
#[derive(Clone, Debug)]
pub struct SolutionRecord<T> {
    pub field: GridField<T>,
    pub time: f64,
    pub steps: usize,
    /// Step attempts discarded because a stage left the admissible set.
    pub rejected: usize,
    /// `(t, Σ η ΔV)` after every step, starting with the initial field.
    pub entropy: Vec<(f64, f64)>,
    pub snapshots: Vec<(f64, GridField<T>)>,
}

/// Progress information passed to observers after each step.
#[derive(Clone, Copy, Debug)]
pub struct StepInfo {
    pub step: usize,
    pub time: f64,
    pub dt: f64,
}

/// Time integrator bound to one problem.
pub struct Solver<T: Real> {
    pub op: Operator<T>,
    pub config: SchemeConfig,
    tableau: RkTableau,
}

impl<T: Real> Solver<T> {
    /// Binds `op` to `config`; the operator takes its wave speed model from
    /// the configuration.
    pub fn new(mut op: Operator<T>, config: SchemeConfig) -> Result<Self, SolverError> {
        config.validate()?;
        op.speeds = config.wave_speeds;
        op.bc.validate(&op.mesh).map_err(|e| SolverError::InvalidConfig(e.to_string()))?;
        let tableau = RkTableau::for_order(config.order);
        Ok(Self { op, config, tableau })
    }

    /// Advances `field` by one step of size `dt` from time `t`.
    pub fn step(&self, field: GridField<T>, t: f64, dt: f64) -> Result<GridField<T>, SolverError> {
        let next = ssp_step(
            &self.tableau,
            field,
            t,
            dt,
            |u: &GridField<T>, stage, ts| {
                let mut u = u.clone();
                self.op.eval(&mut u, ts, stage)
            },
            combine_fields,
        )?;
        Ok(next)
    }

    pub fn run(&self, initial: GridField<T>) -> Result<SolutionRecord<T>, SolverError> {
        self.run_with(initial, |_| {})
    }

    /// Integrates to the configured end time, hitting every output time
    /// exactly.
    pub fn run_with(
        &self,
        initial: GridField<T>,
        mut observer: impl FnMut(&StepInfo),
    ) -> Result<SolutionRecord<T>, SolverError> {
        let end = self.config.end_time;
        let mut outputs: Vec<f64> = self.config.output_times.iter().copied().filter(|t| *t <= end).collect();
        outputs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        outputs.dedup();
        let mut next_out = 0;
        let mut field = initial;
        field.fill_ghosts(&self.op.bc);
        let entropy_of = |f: &GridField<T>, t: f64, stage: usize| {
            total_entropy(f).map_err(|source| self.first_bad_cell(f, t, stage, source))
        };
        let mut t = 0.0f64;
        let mut steps = 0usize;
        let mut rejected = 0usize;
        let mut entropy = vec![(0.0, entropy_of(&field, 0.0, 0)?)];
        let mut snapshots = Vec::new();
        while next_out < outputs.len() && outputs[next_out] <= 0.0 {
            snapshots.push((0.0, field.clone()));
            next_out += 1;
        }
        while t < end {
            let mut dt = self.op.compute_dt(&field, self.config.cfl).map_err(|_| SolverError::NonFinite { time: t })?;
            let target = if next_out < outputs.len() { outputs[next_out].min(end) } else { end };
            let mut t_next = t + dt;
            if t_next >= target {
                dt = target - t;
                t_next = target;
            }
            if !(dt > 0.0) {
                break;
            }
            let stages = self.tableau.stages();
            let mut halvings = 0;
            let (next, s) = loop {
                let attempt = self.step(field.clone(), t, dt).and_then(|f| {
                    let s = entropy_of(&f, t + dt, stages)?;
                    Ok((f, s))
                });
                match attempt {
                    Err(SolverError::Admissibility { .. }) if halvings < self.config.max_halvings => {
                        halvings += 1;
                        rejected += 1;
                        dt *= 0.5;
                        t_next = t + dt;
                    }
                    other => break other?,
                }
            };
            field = next;
            t = t_next;
            steps += 1;
            entropy.push((t, s));
            while next_out < outputs.len() && outputs[next_out] <= t {
                snapshots.push((t, field.clone()));
                next_out += 1;
            }
            observer(&StepInfo { step: steps, time: t, dt });
        }
        field.fill_ghosts(&self.op.bc);
        Ok(SolutionRecord { field, time: t, steps, rejected, entropy, snapshots })
    }

    fn first_bad_cell(&self, field: &GridField<T>, t: f64, stage: usize, source: StateError) -> SolverError {
        let mesh = &field.mesh;
        for j in 0..mesh.ny {
            for i in 0..mesh.nx {
                if let Err(e) = field.get(i, j).to_primitive() {
                    return self.op.admissibility_error(field, mesh.idx(i, j), stage, t, e);
                }
            }
        }
        SolverError::Admissibility { i: 0, j: 0, stage, time: t, source, neighbourhood: Vec::new() }
    }
}

/// `Σ c_k F_k` over fields; coefficients multiplying rates already carry Δt.
fn combine_fields<T: Real>(terms: &[(f64, &GridField<T>)]) -> GridField<T> {
    let mut out = GridField::zeros(terms[0].1.mesh.clone());
    let coeffs: Vec<T> = terms.iter().map(|(c, _)| T::lit(*c)).collect();
    for k in 0..6 {
        let dst = &mut out.data[k];
        dst.par_chunks_mut(4096).enumerate().for_each(|(ci, chunk)| {
            let off = ci * 4096;
            for (n, d) in chunk.iter_mut().enumerate() {
                let mut s = T::zero();
                for (c, (_, f)) in coeffs.iter().zip(terms) {
                    s += *c * f.data[k][off + n];
                }
                *d = s;
            }
        });
    }
    out
}

/// Builds the operator and initial field of a case on the given mesh.
pub fn setup<T: Real>(
    case: &CaseSpec,
    order: SchemeOrder,
    nx: usize,
    ny: Option<usize>,
) -> Result<(Operator<T>, GridField<T>), SolverError> {
    let mesh = case.mesh(nx, ny, order.ghost_layers()).map_err(|e| SolverError::InvalidConfig(e.to_string()))?;
    case.params.validate().map_err(|e| SolverError::InvalidConfig(e.to_string()))?;
    let params = case.params;
    let ic = Arc::clone(&case.ic);
    let initial = GridField::from_fn(mesh.clone(), |x, y| ic(x, y, &params).cast());
    let op = Operator::new(
        mesh,
        case.bc,
        order,
        params,
        case.source,
        case.forcing.clone(),
        case.bottom.clone(),
    );
    Ok((op, initial))
}

/// Runs `case` with `config` on an `nx × ny` mesh.
pub fn run<T: Real>(case: &CaseSpec, config: &SchemeConfig, nx: usize, ny: Option<usize>) -> Result<SolutionRecord<T>, SolverError> {
    let (op, initial) = setup::<T>(case, config.order, nx, ny)?;
    let mut config = config.clone();
    config.source_enabled = config.source_enabled && case.source;
    let op = Operator { source_enabled: config.source_enabled, ..op };
    Solver::new(op, config)?.run(initial)
}
