//! Scaled entropy eigenvectors and the entropy stable interface flux.
//!
//! The eigenvectors `R` of the conservative part are rescaled by a
//! symmetric positive definite `T` such that `R̃ = R T` satisfies
//! `R̃ R̃ᵀ = ∂U/∂V`. The dissipation added to the entropy conservative
//! flux is `½ R̃ Λ ⟦𝒱⟧`, with `𝒱 = R̃ᵀ V` reconstructed across the face and
//! `Λ` a non-negative diagonal of wave speeds chosen by [`WaveSpeeds`].

use crate::ec_flux::{combine4, ec_flux_nodes, FluxNode};
use crate::linalg::{mat_zeros, matmul, matvec, Mat6, Vec6};
use crate::physics::{dudw, Dir};
use crate::reconstruct::scaled_face_jump;
use crate::scalar::Real;
use crate::scheme::SchemeOrder;
use crate::state::{EntropyVars, PrimitiveState};

/// Diagonal of `Λ` in the dissipation matrix `R̃ Λ R̃ᵀ`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum WaveSpeeds {
    /// The largest full-system speed `|v₁| + √(gh + 3P₁₁)` on every wave.
    #[default]
    Rusanov,
    /// `|λ_k|` of the conservative flux Jacobian on the `k`-th scaled
    /// eigenvector. Less diffusive on smooth flows, but leaves stationary
    /// contact and shear waves undamped.
    Characteristic,
}

impl WaveSpeeds {
    pub const ALL: [WaveSpeeds; 2] = [WaveSpeeds::Rusanov, WaveSpeeds::Characteristic];

    pub fn name(self) -> &'static str {
        match self {
            WaveSpeeds::Characteristic => "characteristic",
            WaveSpeeds::Rusanov => "rusanov",
        }
    }
}

impl std::fmt::Display for WaveSpeeds {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for WaveSpeeds {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        WaveSpeeds::ALL
            .into_iter()
            .find(|w| w.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown wave speed model '{s}' (expected rusanov or characteristic)"))
    }
}

/// Scaled eigensystem at one interface.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledEigen<T> {
    pub r_tilde: Mat6<T>,
    /// Diagonal of `Λ`, in the column order of `r_tilde`.
    pub lambda: Vec6<T>,
    pub t: Mat6<T>,
}

/// `Y = R⁻¹ (∂U/∂V) R⁻ᵀ` in the x frame.
fn scaling_target_x<T: Real>(w: &PrimitiveState<T>) -> Mat6<T> {
    let h = w.h();
    let p11 = w.p11();
    let p12 = w.p12();
    let d = w.det_p();
    let three = T::lit(3.0);
    let hp2 = h * p11 * p11;
    let mut y = mat_zeros();
    y[0][0] = T::one() / (T::lit(12.0) * hp2);
    y[1][1] = d / (T::lit(4.0) * hp2);
    y[2][2] = T::one() / (three * h);
    let off = p12 * p12 / (three * h * p11);
    y[2][3] = off;
    y[3][2] = off;
    let p12_4 = p12 * p12 * p12 * p12;
    y[3][3] = (three * d * d + p12_4) / (three * hp2);
    y[4][4] = y[1][1];
    y[5][5] = y[0][0];
    y
}

/// Symmetric square root of [`scaling_target_x`].
fn scaling_matrix_x<T: Real>(w: &PrimitiveState<T>) -> Mat6<T> {
    let y = scaling_target_x(w);
    let mut t = mat_zeros();
    t[0][0] = y[0][0].sqrt();
    t[1][1] = y[1][1].sqrt();
    t[4][4] = t[1][1];
    t[5][5] = t[0][0];
    // 2x2 block: (Y_b + r I) / sqrt(tr Y_b + 2 r), r = sqrt(det Y_b)
    let r1 = w.det_p() / (T::lit(3.0).sqrt() * w.h() * w.p11());
    let norm = T::one() / (y[2][2] + y[3][3] + T::lit(2.0) * r1).sqrt();
    t[2][2] = (y[2][2] + r1) * norm;
    t[3][3] = (y[3][3] + r1) * norm;
    t[2][3] = y[2][3] * norm;
    t[3][2] = t[2][3];
    t
}

/// The matrix `Y` whose square root is the scaling matrix in direction `dir`.
pub fn scaling_target<T: Real>(w: &PrimitiveState<T>, dir: Dir) -> Mat6<T> {
    scaling_target_x(&dir.orient(w))
}

/// The scaling matrix `T` with `T² = Y`.
pub fn scaling_matrix<T: Real>(w: &PrimitiveState<T>, dir: Dir) -> Mat6<T> {
    scaling_matrix_x(&dir.orient(w))
}

/// Scaled eigensystem of a state already oriented along x.
#[inline]
pub fn scaled_eigensystem_oriented<T: Real>(w: &PrimitiveState<T>, g: T, speeds: WaveSpeeds) -> ScaledEigen<T> {
    let t = scaling_matrix_x(w);
    let [h, _, _, p11, p12, _] = w.0;
    let z = T::zero();
    let two = T::lit(2.0);
    let c = p11.sqrt();
    let a = (T::lit(3.0) * p11).sqrt();
    // columns of R_W T: diagonal scaling except the coupled pair 2, 3
    let (t0, t1, tb2, tb3, tbo) = (t[0][0], t[1][1], t[2][2], t[3][3], t[2][3]);
    let rw2 = [-h, z, z, p11, p12, z];
    let rw3 = [z, z, z, z, z, T::one()];
    let col2: Vec6<T> = std::array::from_fn(|k| tb2 * rw2[k] + tbo * rw3[k]);
    let col3: Vec6<T> = std::array::from_fn(|k| tbo * rw2[k] + tb3 * rw3[k]);
    let rwt: Mat6<T> = [
        [t0 * h * p11, z, col2[0], col3[0], z, t0 * h * p11],
        [-t0 * a * p11, z, col2[1], col3[1], z, t0 * a * p11],
        [-t0 * a * p12, -t1 * c, col2[2], col3[2], t1 * c, t0 * a * p12],
        [t0 * two * p11 * p11, z, col2[3], col3[3], z, t0 * two * p11 * p11],
        [t0 * two * p11 * p12, t1 * p11, col2[4], col3[4], t1 * p11, t0 * two * p11 * p12],
        [t0 * two * p12 * p12, t1 * two * p12, col2[5], col3[5], t1 * two * p12, t0 * two * p12 * p12],
    ];
    let r_tilde = matmul(&dudw(w), &rwt);
    let v = w.v1();
    let lambda = match speeds {
        WaveSpeeds::Characteristic => [(v - a).abs(), (v - c).abs(), v.abs(), v.abs(), (v + c).abs(), (v + a).abs()],
        WaveSpeeds::Rusanov => [v.abs() + (g * h + T::lit(3.0) * p11).sqrt(); 6],
    };
    ScaledEigen { r_tilde, lambda, t }
}

/// Scaled eigensystem in direction `dir`; rows of `r_tilde` are in the lab
/// frame, columns follow the ascending eigenvalue order.
pub fn scaled_eigensystem<T: Real>(w: &PrimitiveState<T>, g: T, speeds: WaveSpeeds, dir: Dir) -> ScaledEigen<T> {
    let mut e = scaled_eigensystem_oriented(&dir.orient(w), g, speeds);
    e.r_tilde = dir.restore_rows(e.r_tilde);
    e
}

/// State at which the interface dissipation is evaluated: the arithmetic
/// mean of the two adjacent primitive states.
#[inline]
pub fn interface_state<T: Real>(wl: &PrimitiveState<T>, wr: &PrimitiveState<T>) -> PrimitiveState<T> {
    PrimitiveState(std::array::from_fn(|k| T::half() * (wl.0[k] + wr.0[k])))
}

/// Dissipative correction `½ R̃ Λ ⟦𝒱⟧` at the face in the middle of an
/// oriented stencil. `vars` holds the `2w` oriented entropy variables.
#[inline]
pub fn dissipation_oriented<T: Real>(
    wl: &PrimitiveState<T>,
    wr: &PrimitiveState<T>,
    vars: &[Vec6<T>],
    order: SchemeOrder,
    g: T,
    speeds: WaveSpeeds,
) -> Vec6<T> {
    let e = scaled_eigensystem_oriented(&interface_state(wl, wr), g, speeds);
    let jump = scaled_face_jump(vars, &e.r_tilde, order);
    let scaled: Vec6<T> = std::array::from_fn(|k| T::half() * e.lambda[k] * jump[k]);
    matvec(&e.r_tilde, &scaled)
}

/// Entropy stable flux at the face in the middle of a stencil of `2w`
/// states, `w` the half width of `order`.
pub fn es_flux<T: Real>(
    prims: &[PrimitiveState<T>],
    vars: &[EntropyVars<T>],
    order: SchemeOrder,
    g: T,
    speeds: WaveSpeeds,
    dir: Dir,
) -> Vec6<T> {
    let w = order.half_width();
    assert_eq!(prims.len(), 2 * w, "stencil length");
    assert_eq!(vars.len(), 2 * w, "stencil length");
    let oriented: Vec<PrimitiveState<T>> = prims.iter().map(|p| dir.orient(p)).collect();
    let ovars: Vec<Vec6<T>> = vars.iter().map(|v| dir.orient_vec(v.0)).collect();
    let (l, r) = (w - 1, w);
    let nodes: Vec<FluxNode<T>> = oriented.iter().map(FluxNode::new).collect();
    let ec = if order.four_point_flux() {
        combine4(
            &ec_flux_nodes(&nodes[l], &nodes[r]),
            &ec_flux_nodes(&nodes[l - 1], &nodes[r]),
            &ec_flux_nodes(&nodes[l], &nodes[r + 1]),
        )
    } else {
        ec_flux_nodes(&nodes[l], &nodes[r])
    };
    let d = dissipation_oriented(&oriented[l], &oriented[r], &ovars, order, g, speeds);
    dir.restore(std::array::from_fn(|k| ec[k] - d[k]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{matmul, transpose};
    use crate::physics::{flux, flux_jacobian_eigenvalues, right_eigenvectors};
    use approx::assert_relative_eq;
    use nalgebra::SMatrix;
    use proptest::prelude::*;

    fn prim(a: [f64; 6]) -> PrimitiveState<f64> {
        PrimitiveState(a)
    }

    prop_compose! {
        fn admissible()(
            h in 0.05f64..3.0,
            v1 in -2.0f64..2.0,
            v2 in -2.0f64..2.0,
            l1 in 0.05f64..2.0,
            l2 in 0.05f64..2.0,
            angle in 0.0f64..std::f64::consts::PI,
        ) -> PrimitiveState<f64> {
            let (s, c) = angle.sin_cos();
            PrimitiveState([h, v1, v2, l1 * c * c + l2 * s * s, (l1 - l2) * s * c, l1 * s * s + l2 * c * c])
        }
    }

    fn to_na(m: &Mat6<f64>) -> SMatrix<f64, 6, 6> {
        SMatrix::from_fn(|i, j| m[i][j])
    }

    /// `∂U/∂V` by fourth-order central differences of the inverse entropy map.
    fn dudv_fd(w: &PrimitiveState<f64>) -> SMatrix<f64, 6, 6> {
        let v = w.entropy_vars().0;
        let mut out = SMatrix::<f64, 6, 6>::zeros();
        let u_of = |x: [f64; 6]| EntropyVars(x).to_conserved().unwrap().0;
        for k in 0..6 {
            let step = 3e-5 * v[k].abs().max(1.0);
            let at = |m: f64| {
                let mut x = v;
                x[k] += m * step;
                u_of(x)
            };
            let (p1, m1, p2, m2) = (at(1.0), at(-1.0), at(2.0), at(-2.0));
            for r in 0..6 {
                out[(r, k)] = (8.0 * (p1[r] - m1[r]) - (p2[r] - m2[r])) / (12.0 * step);
            }
        }
        out
    }

    #[test]
    fn scaling_example_identity_stress() {
        let w = prim([1.0, 0.0, 0.0, 1.0, 0.0, 1.0]);
        let y = scaling_target(&w, Dir::X);
        assert_relative_eq!(y[0][0], 1.0 / 12.0, max_relative = 1e-15);
        assert_relative_eq!(y[1][1], 0.25, max_relative = 1e-15);
        assert_relative_eq!(y[2][2], 1.0 / 3.0, max_relative = 1e-15);
        assert_eq!(y[2][3], 0.0);
        assert_relative_eq!(y[3][3], 1.0, max_relative = 1e-15);
        let t = scaling_matrix(&w, Dir::X);
        assert_relative_eq!(t[0][0], (1.0f64 / 12.0).sqrt(), max_relative = 1e-15);
        assert_relative_eq!(t[1][1], 0.5, max_relative = 1e-15);
        assert_relative_eq!(t[2][2], (1.0f64 / 3.0).sqrt(), max_relative = 1e-15);
        assert_relative_eq!(t[3][3], 1.0, max_relative = 1e-15);
        assert_eq!(t[2][3], 0.0);
    }

    #[test]
    fn rusanov_speed_examples() {
        let e = scaled_eigensystem(&prim([1.0, 0.0, 0.0, 1.0, 0.0, 1.0]), 0.0, WaveSpeeds::Rusanov, Dir::X);
        assert_eq!(e.lambda, [3f64.sqrt(); 6]);
        let e = scaled_eigensystem(&prim([0.01, 0.0, 0.2, 1e-4, 0.0, 1e-4]), 9.81, WaveSpeeds::Rusanov, Dir::X);
        for l in e.lambda {
            assert_relative_eq!(l, 0.0984f64.sqrt(), max_relative = 1e-15);
        }
    }

    #[test]
    fn characteristic_speeds_follow_columns() {
        let w = prim([1.2, 0.3, -0.4, 0.8, 0.1, 0.6]);
        for dir in [Dir::X, Dir::Y] {
            let e = scaled_eigensystem(&w, 9.81, WaveSpeeds::Characteristic, dir);
            let ev = flux_jacobian_eigenvalues(&w, dir);
            let u = w.to_conserved().0;
            let f_of = |x: [f64; 6]| flux(&crate::state::ConservedState(x).to_primitive().unwrap(), dir);
            for k in 0..6 {
                assert_relative_eq!(e.lambda[k], ev[k].abs(), max_relative = 1e-15);
                // directional derivative of the flux along the column
                let col: Vec6<f64> = std::array::from_fn(|i| e.r_tilde[i][k]);
                let eps = 1e-6;
                let fp = f_of(std::array::from_fn(|i| u[i] + eps * col[i]));
                let fm = f_of(std::array::from_fn(|i| u[i] - eps * col[i]));
                for i in 0..6 {
                    let jr = (fp[i] - fm[i]) / (2.0 * eps);
                    assert!((jr - ev[k] * col[i]).abs() < 1e-6, "column {k} row {i}");
                }
            }
        }
    }

    #[test]
    fn speed_names_round_trip() {
        for s in WaveSpeeds::ALL {
            assert_eq!(s.name().parse::<WaveSpeeds>(), Ok(s));
        }
        assert!("roe".parse::<WaveSpeeds>().is_err());
    }

    #[test]
    fn y_direction_is_swapped_x() {
        let w = prim([1.3, 0.2, -0.7, 0.9, 0.1, 0.4]);
        assert_eq!(scaling_matrix(&w, Dir::Y), scaling_matrix(&w.swapped(), Dir::X));
        assert_eq!(scaling_target(&w, Dir::Y), scaling_target(&w.swapped(), Dir::X));
    }

    #[test]
    fn consistency_equal_states() {
        let w = prim([1.3, 0.2, -0.7, 0.9, 0.1, 0.4]);
        let v = w.entropy_vars();
        for order in SchemeOrder::ALL {
            let n = 2 * order.half_width();
            for dir in [Dir::X, Dir::Y] {
                for speeds in WaveSpeeds::ALL {
                    let f = es_flux(&vec![w; n], &vec![v; n], order, 9.81, speeds, dir);
                    let exact = flux(&w, dir);
                    for k in 0..6 {
                        assert!((f[k] - exact[k]).abs() <= 1e-13 * (1.0 + exact[k].abs()));
                    }
                }
            }
        }
    }

    #[test]
    fn dam_break_interface_produces_entropy() {
        let l = prim([0.02, 0.0, 0.0, 4e-2, 0.0, 4e-2]);
        let r = prim([0.01, 0.0, 0.0, 4e-2, 0.0, 4e-2]);
        let vl = l.entropy_vars();
        let vr = r.entropy_vars();
        for speeds in WaveSpeeds::ALL {
            let f = es_flux(&[l, r], &[vl, vr], SchemeOrder::O1, 9.81, speeds, Dir::X);
            let prod: f64 = (0..6).map(|k| (vr.0[k] - vl.0[k]) * f[k]).sum::<f64>()
                - (r.entropy_potential().0 - l.entropy_potential().0);
            assert!(prod < 0.0);
        }
    }

    #[test]
    fn order_two_reduces_to_order_one_at_extrema() {
        // cells L and R are local extrema in every scaled component, so
        // minmod slopes vanish and both orders see the raw jump
        let a = prim([1.0, 0.1, 0.0, 1.0, 0.0, 1.0]);
        let b = prim([1.4, -0.2, 0.1, 1.3, 0.05, 0.9]);
        let prims = [b, a, b, a];
        let vars: Vec<_> = prims.iter().map(|p| p.entropy_vars()).collect();
        let f2 = es_flux(&prims, &vars, SchemeOrder::O2, 9.81, WaveSpeeds::Characteristic, Dir::X);
        let f1 = es_flux(&prims[1..3], &vars[1..3], SchemeOrder::O1, 9.81, WaveSpeeds::Characteristic, Dir::X);
        for k in 0..6 {
            assert_relative_eq!(f1[k], f2[k], max_relative = 1e-13, epsilon = 1e-15);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(5000))]

        #[test]
        fn scaling_identity(w in admissible(), y in any::<bool>()) {
            let dir = if y { Dir::Y } else { Dir::X };
            let e = scaled_eigensystem(&w, 9.81, WaveSpeeds::Characteristic, dir);
            let rrt = to_na(&matmul(&e.r_tilde, &transpose(&e.r_tilde)));
            let fd = dudv_fd(&w);
            let rel = (rrt - fd).abs().max() / fd.abs().max();
            prop_assert!(rel < 1e-9, "relative {rel}");
        }

        #[test]
        fn t_squared_is_y(w in admissible(), y in any::<bool>()) {
            let dir = if y { Dir::Y } else { Dir::X };
            let t = scaling_matrix(&w, dir);
            let yy = scaling_target(&w, dir);
            let tt = matmul(&t, &t);
            let scale = yy.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
            for i in 0..6 {
                for j in 0..6 {
                    prop_assert!((tt[i][j] - yy[i][j]).abs() <= 1e-12 * scale);
                }
            }
            let tn = to_na(&t);
            prop_assert!((tn - tn.transpose()).abs().max() == 0.0);
            prop_assert!(tn.symmetric_eigenvalues().min() > 0.0);
        }

        #[test]
        fn scaled_matrix_is_r_times_t(w in admissible()) {
            let e = scaled_eigensystem(&w, 9.81, WaveSpeeds::Characteristic, Dir::X);
            let direct = matmul(&right_eigenvectors(&w, Dir::X), &e.t);
            for i in 0..6 {
                for j in 0..6 {
                    prop_assert!((direct[i][j] - e.r_tilde[i][j]).abs() <= 1e-12 * (1.0 + direct[i][j].abs()));
                }
            }
        }

        #[test]
        fn dissipation_matrix_is_psd(w in admissible(), rusanov in any::<bool>()) {
            let speeds = if rusanov { WaveSpeeds::Rusanov } else { WaveSpeeds::Characteristic };
            let e = scaled_eigensystem(&w, 9.81, speeds, Dir::Y);
            let r = to_na(&e.r_tilde);
            let lam = SMatrix::<f64, 6, 6>::from_diagonal(&e.lambda.into());
            let d = r * lam * r.transpose();
            let ev = d.symmetric_eigenvalues();
            prop_assert!(ev.min() >= -1e-12 * d.abs().max());
        }

        #[test]
        fn first_order_entropy_production(wl in admissible(), wr in admissible(), y in any::<bool>(), rusanov in any::<bool>()) {
            let dir = if y { Dir::Y } else { Dir::X };
            let speeds = if rusanov { WaveSpeeds::Rusanov } else { WaveSpeeds::Characteristic };
            let vl = wl.entropy_vars();
            let vr = wr.entropy_vars();
            let f = es_flux(&[wl, wr], &[vl, vr], SchemeOrder::O1, 9.81, speeds, dir);
            let (pl, pr) = match dir {
                Dir::X => (wl.entropy_potential().0, wr.entropy_potential().0),
                Dir::Y => (wl.entropy_potential().1, wr.entropy_potential().1),
            };
            let prod: f64 = (0..6).map(|k| (vr.0[k] - vl.0[k]) * f[k]).sum::<f64>() - (pr - pl);
            prop_assert!(prod <= 1e-12, "{prod}");
        }
    }
}
