//! Entropy conservative two-point fluxes and their fourth-order combination.

use crate::linalg::Vec6;
use crate::physics::Dir;
use crate::scalar::Real;
use crate::state::PrimitiveState;

/// Logarithmic mean `(b - a)/(ln b - ln a)` of two positive numbers.
#[inline]
pub fn log_mean<T: Real>(a: T, b: T) -> T {
    log_mean_with_logs(a, b, a.ln(), b.ln())
}

/// [`log_mean`] with the logarithms supplied by the caller.
#[inline]
pub fn log_mean_with_logs<T: Real>(a: T, b: T, ln_a: T, ln_b: T) -> T {
    let zeta = a / b;
    let d = T::one() - zeta;
    if d * d < T::lit(1e-4) {
        let f = (a - b) / (a + b);
        let u = f * f;
        let series = T::one() + u * (T::lit(1.0 / 3.0) + u * (T::lit(0.2) + u * T::lit(1.0 / 7.0)));
        (a + b) / (T::lit(2.0) * series)
    } else {
        (b - a) / (ln_b - ln_a)
    }
}

/// Per-state quantities entering the two-point flux, in oriented frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FluxNode<T> {
    pub h: T,
    pub ln_h: T,
    pub v1: T,
    pub v2: T,
    pub b11: T,
    pub b12: T,
    pub b22: T,
    /// `D_β = 1 / det P`
    pub d_beta: T,
    pub ln_d_beta: T,
}

impl<T: Real> FluxNode<T> {
    /// Builds the node for a state already oriented along the flux direction.
    #[inline]
    pub fn new(w: &PrimitiveState<T>) -> Self {
        let det = w.det_p();
        let inv = T::one() / det;
        let h = w.h();
        Self {
            h,
            ln_h: h.ln(),
            v1: w.v1(),
            v2: w.v2(),
            b11: w.p11() * inv,
            b12: w.p12() * inv,
            b22: w.p22() * inv,
            d_beta: inv,
            ln_d_beta: -det.ln(),
        }
    }
}

/// Arithmetic and logarithmic averages of two adjacent states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AveragedPair<T> {
    pub h: T,
    pub v1: T,
    pub v2: T,
    pub b11: T,
    pub b12: T,
    pub b22: T,
    pub v1_sq: T,
    pub v2_sq: T,
    pub v1v2: T,
    pub h_ln: T,
    pub d_beta_ln: T,
}

impl<T: Real> AveragedPair<T> {
    #[inline]
    pub fn from_nodes(l: &FluxNode<T>, r: &FluxNode<T>) -> Self {
        let half = T::half();
        Self {
            h: half * (l.h + r.h),
            v1: half * (l.v1 + r.v1),
            v2: half * (l.v2 + r.v2),
            b11: half * (l.b11 + r.b11),
            b12: half * (l.b12 + r.b12),
            b22: half * (l.b22 + r.b22),
            v1_sq: half * (l.v1 * l.v1 + r.v1 * r.v1),
            v2_sq: half * (l.v2 * l.v2 + r.v2 * r.v2),
            v1v2: half * (l.v1 * l.v2 + r.v1 * r.v2),
            h_ln: log_mean_with_logs(l.h, r.h, l.ln_h, r.ln_h),
            d_beta_ln: log_mean_with_logs(l.d_beta, r.d_beta, l.ln_d_beta, r.ln_d_beta),
        }
    }

    pub fn new(wl: &PrimitiveState<T>, wr: &PrimitiveState<T>) -> Self {
        Self::from_nodes(&FluxNode::new(wl), &FluxNode::new(wr))
    }

    /// Two-point flux in the x direction of the frame the averages live in.
    #[inline]
    pub fn flux(&self) -> Vec6<T> {
        let half = T::half();
        let den = self.b11 * self.b22 - self.b12 * self.b12;
        let hp = self.h / den;
        let f1 = self.h_ln * self.v1;
        let f2 = self.v1 * f1 + self.b11 * hp;
        let f3 = self.v2 * f1 + self.b12 * hp;
        let inv_d = T::one() / self.d_beta_ln;
        let f4 = half * (self.b11 * inv_d - self.v1_sq) * f1 + self.v1 * f2;
        let f5 = half * ((self.b12 * inv_d - self.v1v2) * f1 + self.v1 * f3 + self.v2 * f2);
        let f6 = half * (self.b22 * inv_d - self.v2_sq) * f1 + self.v2 * f3;
        [f1, f2, f3, f4, f5, f6]
    }
}

/// Two-point flux from precomputed nodes, oriented frame.
#[inline]
pub fn ec_flux_nodes<T: Real>(l: &FluxNode<T>, r: &FluxNode<T>) -> Vec6<T> {
    AveragedPair::from_nodes(l, r).flux()
}

/// Entropy conservative two-point flux between `wl` and `wr`.
pub fn ec_flux<T: Real>(wl: &PrimitiveState<T>, wr: &PrimitiveState<T>, dir: Dir) -> Vec6<T> {
    let l = FluxNode::new(&dir.orient(wl));
    let r = FluxNode::new(&dir.orient(wr));
    dir.restore(ec_flux_nodes(&l, &r))
}

pub fn ec_flux_x<T: Real>(wl: &PrimitiveState<T>, wr: &PrimitiveState<T>) -> Vec6<T> {
    ec_flux(wl, wr, Dir::X)
}

pub fn ec_flux_y<T: Real>(wl: &PrimitiveState<T>, wr: &PrimitiveState<T>) -> Vec6<T> {
    ec_flux(wl, wr, Dir::Y)
}

/// Combines two-point fluxes into the fourth-order flux at `i + 1/2`:
/// `4/3 F(i, i+1) - 1/6 [F(i-1, i+1) + F(i, i+2)]`.
#[inline]
pub fn combine4<T: Real>(near: &Vec6<T>, wide_left: &Vec6<T>, wide_right: &Vec6<T>) -> Vec6<T> {
    let a = T::lit(4.0 / 3.0);
    let b = T::lit(1.0 / 6.0);
    std::array::from_fn(|k| a * near[k] - b * (wide_left[k] + wide_right[k]))
}

/// Fourth-order entropy conservative flux at the face between `w[1]` and `w[2]`.
pub fn ec_flux4<T: Real>(w: &[PrimitiveState<T>; 4], dir: Dir) -> Vec6<T> {
    let n: [FluxNode<T>; 4] = std::array::from_fn(|k| FluxNode::new(&dir.orient(&w[k])));
    let f = combine4(
        &ec_flux_nodes(&n[1], &n[2]),
        &ec_flux_nodes(&n[0], &n[2]),
        &ec_flux_nodes(&n[1], &n[3]),
    );
    dir.restore(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physics::flux;
    use approx::assert_relative_eq;
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

    fn jump_residual(wl: &PrimitiveState<f64>, wr: &PrimitiveState<f64>, dir: Dir) -> (f64, f64) {
        let f = ec_flux(wl, wr, dir);
        let vl = wl.entropy_vars().0;
        let vr = wr.entropy_vars().0;
        let lhs: f64 = (0..6).map(|k| (vr[k] - vl[k]) * f[k]).sum();
        let (pl, pr) = match dir {
            Dir::X => (wl.entropy_potential().0, wr.entropy_potential().0),
            Dir::Y => (wl.entropy_potential().1, wr.entropy_potential().1),
        };
        ((lhs - (pr - pl)).abs(), pr - pl)
    }

    #[test]
    fn log_mean_examples() {
        assert_eq!(log_mean(2.5f64, 2.5), 2.5);
        assert_relative_eq!(log_mean(1.0f64, std::f64::consts::E), std::f64::consts::E - 1.0, max_relative = 1e-15);
        assert!((log_mean(1.0f64, 1.0 + 1e-9) - (1.0 + 5e-10)).abs() < 1e-15);
        // series and direct branches agree near the switch
        let (a, b) = (1.0f64, 1.0101);
        let direct = (b - a) / (b.ln() - a.ln());
        assert_relative_eq!(log_mean(a, b), direct, max_relative = 1e-13);
        assert!(log_mean(1.0f32, 1.0 + 1e-4) > 1.0);
    }

    #[test]
    fn consistency() {
        let w = prim([1.3, 0.2, -0.7, 0.9, 0.1, 0.4]);
        for dir in [Dir::X, Dir::Y] {
            let f = ec_flux(&w, &w, dir);
            let exact = flux(&w, dir);
            for k in 0..6 {
                assert!((f[k] - exact[k]).abs() <= 1e-14 * (1.0 + exact[k].abs()));
            }
            let f4 = ec_flux4(&[w; 4], dir);
            for k in 0..6 {
                assert!((f4[k] - exact[k]).abs() <= 1e-14 * (1.0 + exact[k].abs()));
            }
        }
    }

    #[test]
    fn dam_break_pair_jump_identity() {
        let l = prim([0.02, 0.0, 0.0, 4e-2, 0.0, 4e-2]);
        let r = prim([0.01, 0.0, 0.0, 4e-2, 0.0, 4e-2]);
        let (res, _) = jump_residual(&l, &r, Dir::X);
        let scale: f64 = l.entropy_vars().0.iter().zip(ec_flux_x(&l, &r)).map(|(a, b)| (a * b).abs()).sum();
        assert!(res <= 1e-12 * scale, "{res}");
    }

    #[test]
    fn four_point_is_linear_combination() {
        let w = [
            prim([1.0, 0.1, 0.2, 1.0, 0.1, 0.8]),
            prim([1.2, 0.0, 0.3, 0.9, 0.0, 1.0]),
            prim([0.8, -0.2, 0.1, 1.1, -0.1, 0.7]),
            prim([1.1, 0.3, -0.1, 0.6, 0.2, 0.9]),
        ];
        let a = ec_flux_x(&w[1], &w[2]);
        let b = ec_flux_x(&w[0], &w[2]);
        let c = ec_flux_x(&w[1], &w[3]);
        let f = ec_flux4(&w, Dir::X);
        for k in 0..6 {
            assert_relative_eq!(f[k], 4.0 / 3.0 * a[k] - (b[k] + c[k]) / 6.0, max_relative = 1e-14, epsilon = 1e-15);
        }
    }

    /// Flux difference of the manufactured profile converges to `∂F/∂x` at
    /// fourth order.
    #[test]
    fn four_point_divergence_order() {
        let state = |x: f64| {
            let h = 2.0 + (2.0 * std::f64::consts::PI * x).sin();
            prim([h, 1.0, 0.0, 1.0, 0.0, 1.0])
        };
        let x0 = 0.1234;
        let dfdx = |x: f64| {
            let d = 1e-4;
            let fp = flux(&state(x + d), Dir::X);
            let fm = flux(&state(x - d), Dir::X);
            let fp2 = flux(&state(x + 2.0 * d), Dir::X);
            let fm2 = flux(&state(x - 2.0 * d), Dir::X);
            std::array::from_fn::<f64, 6, _>(|k| (8.0 * (fp[k] - fm[k]) - (fp2[k] - fm2[k])) / (12.0 * d))
        };
        let exact = dfdx(x0);
        let err = |dx: f64| {
            let w: Vec<_> = (-2..=2).map(|j| state(x0 + j as f64 * dx)).collect();
            let fr = ec_flux4(&[w[1], w[2], w[3], w[4]], Dir::X);
            let fl = ec_flux4(&[w[0], w[1], w[2], w[3]], Dir::X);
            (0..6).map(|k| ((fr[k] - fl[k]) / dx - exact[k]).abs()).fold(0.0, f64::max)
        };
        let e1 = err(0.02);
        let e2 = err(0.01);
        let order = (e1 / e2).log2();
        assert!(order > 3.7, "order {order}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn jump_identity(wl in admissible(), wr in admissible()) {
            for dir in [Dir::X, Dir::Y] {
                let (res, dpsi) = jump_residual(&wl, &wr, dir);
                prop_assert!(res / (1.0 + dpsi.abs()) < 1e-11, "{dir:?} residual {res}");
            }
        }

        #[test]
        fn symmetric_in_arguments(wl in admissible(), wr in admissible()) {
            let a = ec_flux_x(&wl, &wr);
            let b = ec_flux_x(&wr, &wl);
            for k in 0..6 {
                prop_assert!((a[k] - b[k]).abs() <= 1e-13 * (1.0 + a[k].abs()));
            }
        }

        #[test]
        fn axis_swap_symmetry(wl in admissible(), wr in admissible()) {
            let fy = ec_flux_y(&wl.swapped(), &wr.swapped());
            let fx = crate::state::swap_components(&ec_flux_x(&wl, &wr));
            prop_assert_eq!(fy, fx);
        }
    }
}
