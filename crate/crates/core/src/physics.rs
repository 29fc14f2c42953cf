//! Physical fluxes, non-conservative gravity terms, sources and the
//! eigenstructure of the shear shallow water model.
//!
//! Every directional quantity is implemented for the x direction; the y
//! direction is obtained by exchanging the axes through
//! [`swap_components`], which maps `(h, 1, 2, 11, 12, 22)` to
//! `(h, 2, 1, 22, 12, 11)`.

use crate::linalg::{Mat6, Vec6};
use crate::scalar::Real;
use crate::state::{swap_components, ModelParams, PrimitiveState};

/// Sweep direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dir {
    X,
    Y,
}

impl Dir {
    /// Primitive state rotated so that `dir` becomes the x axis.
    #[inline]
    pub fn orient<T: Real>(self, w: &PrimitiveState<T>) -> PrimitiveState<T> {
        match self {
            Dir::X => *w,
            Dir::Y => w.swapped(),
        }
    }

    /// Maps a vector computed in oriented coordinates back to the lab frame.
    #[inline]
    pub fn restore<T: Copy>(self, a: Vec6<T>) -> Vec6<T> {
        match self {
            Dir::X => a,
            Dir::Y => swap_components(&a),
        }
    }

    /// Maps a lab-frame vector into the oriented frame.
    #[inline]
    pub fn orient_vec<T: Copy>(self, a: Vec6<T>) -> Vec6<T> {
        self.restore(a)
    }

    /// Row permutation counterpart of [`Dir::restore`] for matrices.
    pub fn restore_rows<T: Copy>(self, m: Mat6<T>) -> Mat6<T> {
        match self {
            Dir::X => m,
            Dir::Y => swap_components(&m),
        }
    }
}

/// Conservative flux in x.
pub fn flux_x<T: Real>(w: &PrimitiveState<T>) -> Vec6<T> {
    let [h, v1, v2, p11, p12, p22] = w.0;
    let half = T::half();
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let m1 = h * v1;
    [
        m1,
        h * (v1 * v1 + p11),
        h * (v1 * v2 + p12),
        half * m1 * (v1 * v1 + three * p11),
        half * h * (v1 * v1 * v2 + two * v1 * p12 + v2 * p11),
        half * h * (v1 * v2 * v2 + two * v2 * p12 + v1 * p22),
    ]
}

pub fn flux_y<T: Real>(w: &PrimitiveState<T>) -> Vec6<T> {
    swap_components(&flux_x(&w.swapped()))
}

pub fn flux<T: Real>(w: &PrimitiveState<T>, dir: Dir) -> Vec6<T> {
    match dir {
        Dir::X => flux_x(w),
        Dir::Y => flux_y(w),
    }
}

/// Coefficient of `∂h/∂x` in the non-conservative gravity term.
pub fn noncons_x<T: Real>(w: &PrimitiveState<T>, g: T) -> Vec6<T> {
    let gh = g * w.h();
    [T::zero(), gh, T::zero(), gh * w.v1(), T::half() * gh * w.v2(), T::zero()]
}

pub fn noncons_y<T: Real>(w: &PrimitiveState<T>, g: T) -> Vec6<T> {
    swap_components(&noncons_x(&w.swapped(), g))
}

pub fn noncons<T: Real>(w: &PrimitiveState<T>, g: T, dir: Dir) -> Vec6<T> {
    match dir {
        Dir::X => noncons_x(w, g),
        Dir::Y => noncons_y(w, g),
    }
}

/// Turbulent dissipation coefficient `α = max(0, C_r (T - φh²)/T²)` with
/// `T = tr P`.
pub fn alpha_closure<T: Real>(w: &PrimitiveState<T>, p: &ModelParams<T>) -> T {
    let tr = w.trace_p();
    let h = w.h();
    let a = p.c_r * (tr - p.phi * h * h) / (tr * tr);
    a.max(T::zero())
}

/// Topography, friction and turbulent dissipation source.
pub fn source<T: Real>(w: &PrimitiveState<T>, grad_b: (T, T), p: &ModelParams<T>) -> Vec6<T> {
    let [h, v1, v2, p11, p12, p22] = w.0;
    let (bx, by) = grad_b;
    let half = T::half();
    let speed = (v1 * v1 + v2 * v2).sqrt();
    let fr = p.c_f * speed;
    let diss = alpha_closure(w, p) * speed * speed * speed;
    let gh = p.g * h;
    [
        T::zero(),
        -gh * bx - fr * v1,
        -gh * by - fr * v2,
        -diss * p11 - gh * v1 * bx - fr * v1 * v1,
        -diss * p12 - half * gh * v2 * bx - half * gh * v1 * by - fr * v1 * v2,
        -diss * p22 - gh * v2 * by - fr * v2 * v2,
    ]
}

/// Eigenvalues of the complete system in direction `dir`, ascending:
/// `v - √(gh+3P), v - √P, v, v, v + √P, v + √(gh+3P)`.
pub fn eigenvalues<T: Real>(w: &PrimitiveState<T>, g: T, dir: Dir) -> Vec6<T> {
    let w = dir.orient(w);
    let v = w.v1();
    let fast = (g * w.h() + T::lit(3.0) * w.p11()).sqrt();
    let slow = w.p11().sqrt();
    [v - fast, v - slow, v, v, v + slow, v + fast]
}

/// Eigenvalues of the conservative flux Jacobian `∂F/∂U` alone, ascending:
/// `v - √(3P), v - √P, v, v, v + √P, v + √(3P)`.
pub fn flux_jacobian_eigenvalues<T: Real>(w: &PrimitiveState<T>, dir: Dir) -> Vec6<T> {
    let w = dir.orient(w);
    let v = w.v1();
    let fast = (T::lit(3.0) * w.p11()).sqrt();
    let slow = w.p11().sqrt();
    [v - fast, v - slow, v, v, v + slow, v + fast]
}

/// Largest characteristic speed `|v| + √(gh + 3P)` of the full system.
#[inline]
pub fn max_wave_speed<T: Real>(w: &PrimitiveState<T>, g: T, dir: Dir) -> T {
    let (v, p) = match dir {
        Dir::X => (w.v1(), w.p11()),
        Dir::Y => (w.v2(), w.p22()),
    };
    v.abs() + (g * w.h() + T::lit(3.0) * p).sqrt()
}

/// Jacobian `∂U/∂W` of the equation of state.
pub fn dudw<T: Real>(w: &PrimitiveState<T>) -> Mat6<T> {
    let [h, v1, v2, p11, p12, p22] = w.0;
    let z = T::zero();
    let one = T::one();
    let half = T::half();
    [
        [one, z, z, z, z, z],
        [v1, h, z, z, z, z],
        [v2, z, h, z, z, z],
        [half * (v1 * v1 + p11), h * v1, z, half * h, z, z],
        [half * (v1 * v2 + p12), half * h * v2, half * h * v1, z, half * h, z],
        [half * (v2 * v2 + p22), z, h * v2, z, z, half * h],
    ]
}

/// Right eigenvectors of the conservative part in primitive variables, x
/// direction, columns ordered like [`flux_jacobian_eigenvalues`].
fn right_eigenvectors_prim_x<T: Real>(w: &PrimitiveState<T>) -> Mat6<T> {
    let [h, _, _, p11, p12, _] = w.0;
    let z = T::zero();
    let two = T::lit(2.0);
    let c = p11.sqrt();
    let a = (T::lit(3.0) * p11).sqrt();
    [
        [h * p11, z, -h, z, z, h * p11],
        [-a * p11, z, z, z, z, a * p11],
        [-a * p12, -c, z, z, c, a * p12],
        [two * p11 * p11, z, p11, z, z, two * p11 * p11],
        [two * p11 * p12, p11, p12, z, p11, two * p11 * p12],
        [two * p12 * p12, two * p12, z, T::one(), two * p12, two * p12 * p12],
    ]
}

/// Right eigenvectors of the conservative part in primitive variables.
pub fn right_eigenvectors_prim<T: Real>(w: &PrimitiveState<T>, dir: Dir) -> Mat6<T> {
    dir.restore_rows(right_eigenvectors_prim_x(&dir.orient(w)))
}

/// Right eigenvectors of `∂F/∂U` in conserved variables, `R = ∂U/∂W · R_W`.
pub fn right_eigenvectors<T: Real>(w: &PrimitiveState<T>, dir: Dir) -> Mat6<T> {
    let wo = dir.orient(w);
    let r = crate::linalg::matmul(&dudw(&wo), &right_eigenvectors_prim_x(&wo));
    dir.restore_rows(r)
}
