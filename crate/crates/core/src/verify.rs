//! Seeded randomized checks of the discrete identities the schemes rely on.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dissipation::{scaled_eigensystem, scaling_matrix, scaling_target, WaveSpeeds};
use crate::ec_flux::ec_flux;
use crate::linalg::{matmul, matvec_t, transpose, Mat6};
use crate::physics::{noncons, Dir};
use crate::reconstruct::scaled_face_jump;
use crate::scheme::SchemeOrder;
use crate::state::{ConservedState, EntropyVars, PrimitiveState};

/// Outcome of one randomized check.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// Largest observed value of the checked quantity.
    pub worst: f64,
    pub tolerance: f64,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn new(name: &'static str, tolerance: f64) -> Self {
        Self { name, cases: 0, failures: 0, worst: 0.0, tolerance }
    }

    fn record(&mut self, value: f64) {
        self.cases += 1;
        if value.is_nan() || value > self.tolerance {
            self.failures += 1;
        }
        if value.is_nan() || value > self.worst {
            self.worst = value;
        }
    }

    fn record_bool(&mut self, ok: bool) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            self.worst += 1.0;
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random admissible state: depth and stress eigenvalues log-uniform over
/// several decades, stress axes at a random angle.
pub fn random_state(rng: &mut impl Rng) -> PrimitiveState<f64> {
    let h = 10f64.powf(rng.gen_range(-2.5..0.5));
    let v1 = rng.gen_range(-2.0..2.0);
    let v2 = rng.gen_range(-2.0..2.0);
    let l1 = 10f64.powf(rng.gen_range(-3.0..0.5));
    let l2 = l1 * 10f64.powf(rng.gen_range(-1.5..1.5));
    let (s, c) = rng.gen_range(0.0..std::f64::consts::PI).sin_cos();
    PrimitiveState([h, v1, v2, l1 * c * c + l2 * s * s, (l1 - l2) * s * c, l1 * s * s + l2 * c * c])
}

/// `w` with every component perturbed by a relative amount up to `eps`,
/// kept admissible.
pub fn perturbed(rng: &mut impl Rng, w: &PrimitiveState<f64>, eps: f64) -> PrimitiveState<f64> {
    loop {
        let p = PrimitiveState(std::array::from_fn(|k| {
            let scale = if k == 1 || k == 2 { 1.0 } else { w.0[k].abs().max(1e-3) };
            w.0[k] + eps * scale * rng.gen_range(-1.0..1.0)
        }));
        if p.check_admissible().is_ok() {
            return p;
        }
    }
}

fn random_pair<R: Rng>(rng: &mut R, gen: fn(&mut R) -> PrimitiveState<f64>) -> (PrimitiveState<f64>, PrimitiveState<f64>) {
    let a = gen(rng);
    let b = match rng.gen_range(0..3) {
        0 => gen(rng),
        1 => perturbed(rng, &a, 1e-2),
        _ => perturbed(rng, &a, 1e-7),
    };
    (a, b)
}

/// `⟦V⟧ᵀF̃ − ⟦ψ⟧` for the two-point flux in direction `dir`, together with
/// `⟦ψ⟧` and `Σ (|V_k^L| + |V_k^R|) |F̃_k| + |ψ^L| + |ψ^R|`, the scale of
/// rounding errors in the evaluation.
pub fn jump_terms(wl: &PrimitiveState<f64>, wr: &PrimitiveState<f64>, dir: Dir) -> (f64, f64, f64) {
    let f = ec_flux(wl, wr, dir);
    let (vl, vr) = (wl.entropy_vars().0, wr.entropy_vars().0);
    let lhs: f64 = (0..6).map(|k| (vr[k] - vl[k]) * f[k]).sum();
    let (pl, pr) = match dir {
        Dir::X => (wl.entropy_potential().0, wr.entropy_potential().0),
        Dir::Y => (wl.entropy_potential().1, wr.entropy_potential().1),
    };
    let size: f64 = (0..6).map(|k| (vr[k].abs() + vl[k].abs()) * f[k].abs()).sum::<f64>() + pl.abs() + pr.abs();
    (lhs - (pr - pl), pr - pl, size)
}

/// `|⟦V⟧ᵀF̃ − ⟦ψ⟧| / (1 + |⟦ψ⟧|)`
pub fn jump_residual(wl: &PrimitiveState<f64>, wr: &PrimitiveState<f64>, dir: Dir) -> f64 {
    let (r, dpsi, _) = jump_terms(wl, wr, dir);
    r.abs() / (1.0 + dpsi.abs())
}

/// Jump identity on pairs of order-one states.
pub fn check_jump_identity(rng: &mut impl Rng, pairs: usize) -> CheckReport {
    let mut r = CheckReport::new("ec jump identity", 1e-11);
    for _ in 0..pairs {
        let (a, b) = random_pair(rng, random_unit_state);
        r.record(jump_residual(&a, &b, Dir::X));
        r.record(jump_residual(&a, &b, Dir::Y));
    }
    r
}

/// Jump identity over several decades of depth and stress, measured
/// against the rounding scale of its evaluation.
pub fn check_jump_identity_wide(rng: &mut impl Rng, pairs: usize) -> CheckReport {
    let mut r = CheckReport::new("ec jump identity, wide range", 1e-13);
    for _ in 0..pairs {
        let (a, b) = random_pair(rng, random_state);
        for dir in [Dir::X, Dir::Y] {
            let (res, _, size) = jump_terms(&a, &b, dir);
            r.record(res.abs() / size.max(f64::MIN_POSITIVE));
        }
    }
    r
}

/// `∂U/∂V` by fourth-order central differences of the inverse entropy map.
pub fn dudv_fd(w: &PrimitiveState<f64>) -> Mat6<f64> {
    let v = w.entropy_vars().0;
    let mut out = [[0.0; 6]; 6];
    let u_of = |x: [f64; 6]| EntropyVars(x).to_conserved().map(|u| u.0);
    for k in 0..6 {
        let step = 3e-5 * v[k].abs().max(1.0);
        let at = |m: f64| {
            let mut x = v;
            x[k] += m * step;
            u_of(x).unwrap_or([f64::NAN; 6])
        };
        let (p1, m1, p2, m2) = (at(1.0), at(-1.0), at(2.0), at(-2.0));
        for r in 0..6 {
            out[r][k] = (8.0 * (p1[r] - m1[r]) - (p2[r] - m2[r])) / (12.0 * step);
        }
    }
    out
}

fn max_abs(m: &Mat6<f64>) -> f64 {
    m.iter().flatten().fold(0.0f64, |a, x| a.max(x.abs()))
}

fn max_diff(a: &Mat6<f64>, b: &Mat6<f64>) -> f64 {
    let mut d = 0.0f64;
    for i in 0..6 {
        for j in 0..6 {
            let e = (a[i][j] - b[i][j]).abs();
            d = if e.is_nan() { f64::NAN } else { d.max(e) };
        }
    }
    d
}

/// Relative error of `R̃R̃ᵀ` against finite differences of `U(V)`.
pub fn scaling_residual(w: &PrimitiveState<f64>, g: f64, dir: Dir) -> f64 {
    let e = scaled_eigensystem(w, g, WaveSpeeds::default(), dir);
    let rrt = matmul(&e.r_tilde, &transpose(&e.r_tilde));
    let fd = dudv_fd(w);
    max_diff(&rrt, &fd) / max_abs(&fd)
}

/// Relative error of `T²` against `Y`.
pub fn square_root_residual(w: &PrimitiveState<f64>, dir: Dir) -> f64 {
    let t = scaling_matrix(w, dir);
    let y = scaling_target(w, dir);
    max_diff(&matmul(&t, &t), &y) / max_abs(&y)
}

/// State with all primitive variables of order one.
pub fn random_unit_state(rng: &mut impl Rng) -> PrimitiveState<f64> {
    let h = rng.gen_range(0.05..3.0);
    let v1 = rng.gen_range(-2.0..2.0);
    let v2 = rng.gen_range(-2.0..2.0);
    let l1 = rng.gen_range(0.05..2.0);
    let l2 = rng.gen_range(0.05..2.0);
    let (s, c) = rng.gen_range(0.0..std::f64::consts::PI).sin_cos();
    PrimitiveState([h, v1, v2, l1 * c * c + l2 * s * s, (l1 - l2) * s * c, l1 * s * s + l2 * c * c])
}

pub fn check_scaling_identity(rng: &mut impl Rng, states: usize) -> [CheckReport; 2] {
    let mut a = CheckReport::new("scaling identity R R^T = dU/dV", 1e-9);
    let mut b = CheckReport::new("scaling square root T^2 = Y", 1e-12);
    for _ in 0..states {
        let w = random_unit_state(rng);
        let dir = if rng.gen_bool(0.5) { Dir::Y } else { Dir::X };
        a.record(scaling_residual(&w, 9.81, dir));
        let w2 = random_state(rng);
        b.record(square_root_residual(&w2, dir));
    }
    [a, b]
}

/// Random line of `2w` entropy variables around one face, mixing smooth,
/// constant and discontinuous data.
fn random_row(rng: &mut impl Rng, len: usize) -> Vec<PrimitiveState<f64>> {
    let base = random_state(rng);
    match rng.gen_range(0..4) {
        0 => (0..len).map(|_| random_state(rng)).collect(),
        1 => (0..len).map(|_| perturbed(rng, &base, 1e-3)).collect(),
        2 => {
            let other = random_state(rng);
            let cut = rng.gen_range(0..=len);
            (0..len).map(|i| if i < cut { base } else { other }).collect()
        }
        _ => {
            let slope: [f64; 6] = std::array::from_fn(|_| rng.gen_range(-1e-2..1e-2));
            (0..len)
                .map(|i| {
                    let t = i as f64;
                    let w = PrimitiveState(std::array::from_fn(|k| base.0[k] * (1.0 + slope[k] * t)));
                    if w.check_admissible().is_ok() { w } else { base }
                })
                .collect()
        }
    }
}

/// Sign property of reconstructed scaled-variable jumps for one order, on
/// `faces` random faces with 6 components each.
pub fn check_sign_property(rng: &mut impl Rng, order: SchemeOrder, faces: usize) -> CheckReport {
    let name = match order {
        SchemeOrder::O1 => "sign property o1",
        SchemeOrder::O2 => "sign property minmod",
        SchemeOrder::O3 => "sign property eno3",
        SchemeOrder::O4 => "sign property eno4",
    };
    let mut r = CheckReport::new(name, 0.0);
    let w = order.half_width();
    for _ in 0..faces {
        let row = random_row(rng, 2 * w);
        let dir = if rng.gen_bool(0.5) { Dir::Y } else { Dir::X };
        let vars: Vec<[f64; 6]> = row.iter().map(|p| dir.orient_vec(p.entropy_vars().0)).collect();
        let mid = crate::dissipation::interface_state(&dir.orient(&row[w - 1]), &dir.orient(&row[w]));
        let e = crate::dissipation::scaled_eigensystem_oriented(&mid, 9.81, WaveSpeeds::default());
        let rec = scaled_face_jump(&vars, &e.r_tilde, order);
        let (pl, pr) = (matvec_t(&e.r_tilde, &vars[w - 1]), matvec_t(&e.r_tilde, &vars[w]));
        let ok = (0..6).all(|k| {
            let plain = pr[k] - pl[k];
            rec[k] == 0.0 || (rec[k] > 0.0) == (plain > 0.0) && plain != 0.0
        });
        r.record_bool(ok);
    }
    r
}

/// Relative mismatch between `V` and a central-difference gradient of `η(U)`.
pub fn entropy_gradient_residual(w: &PrimitiveState<f64>) -> f64 {
    let u = w.to_conserved().0;
    let v = w.entropy_vars().0;
    let eta = |x: [f64; 6]| ConservedState(x).to_primitive().map(|p| p.entropy().0).unwrap_or(f64::NAN);
    let mut worst = 0.0f64;
    let scale = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    for k in 0..6 {
        let step = 1e-6 * u[k].abs().max(1e-3 * u[0]);
        let (mut p, mut m) = (u, u);
        p[k] += step;
        m[k] -= step;
        let d = (eta(p) - eta(m)) / (2.0 * step);
        worst = worst.max((d - v[k]).abs() / scale);
    }
    worst
}

pub fn check_entropy_gradient(rng: &mut impl Rng, states: usize) -> CheckReport {
    let mut r = CheckReport::new("entropy variables = grad eta", 1e-6);
    for _ in 0..states {
        r.record(entropy_gradient_residual(&random_unit_state(rng)));
    }
    r
}

/// `|Vᵀ B| / (|V| |B|)` in both directions.
pub fn orthogonality_residual(w: &PrimitiveState<f64>, g: f64) -> f64 {
    let v = w.entropy_vars().0;
    [Dir::X, Dir::Y]
        .iter()
        .map(|&d| {
            let b = noncons(w, g, d);
            let dot: f64 = (0..6).map(|k| v[k] * b[k]).sum();
            let scale: f64 = (0..6).map(|k| (v[k] * b[k]).abs()).sum::<f64>().max(f64::MIN_POSITIVE);
            dot.abs() / scale
        })
        .fold(0.0, f64::max)
}

pub fn check_orthogonality(rng: &mut impl Rng, states: usize) -> CheckReport {
    let mut r = CheckReport::new("V . B = 0", 1e-12);
    for _ in 0..states {
        r.record(orthogonality_residual(&random_state(rng), 9.81));
    }
    r
}

/// Runs every check with case counts multiplied by `scale`.
pub fn run_suite(seed: u64, scale: usize) -> Vec<CheckReport> {
    let mut g = rng(seed);
    let mut out = vec![check_jump_identity(&mut g, 1000 * scale), check_jump_identity_wide(&mut g, 1000 * scale)];
    out.extend(check_scaling_identity(&mut g, 100 * scale));
    for o in [SchemeOrder::O2, SchemeOrder::O3, SchemeOrder::O4] {
        out.push(check_sign_property(&mut g, o, 100 * scale));
    }
    out.push(check_entropy_gradient(&mut g, 100 * scale));
    out.push(check_orthogonality(&mut g, 1000 * scale));
    out
}

pub fn format_report(seed: u64, reports: &[CheckReport]) -> String {
    let mut s = format!("seed {seed}\n");
    for r in reports {
        s.push_str(&format!(
            "{} {:<32} cases {:>7} failures {:>5} worst {:.3e} tol {:.0e}\n",
            if r.passed() { "PASS" } else { "FAIL" },
            r.name,
            r.cases,
            r.failures,
            r.worst,
            r.tolerance
        ));
    }
    s
}
