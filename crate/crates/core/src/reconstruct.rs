//! Reconstruction of scaled entropy variables with the sign property:
//! minmod for second order, cell-average ENO of order three and four.
//!
//! Each face sees a window of `2w` cells, `w` on either side, already
//! projected onto the face's scaled eigenbasis. The reconstructed jump
//! `(left trace of the right cell) - (right trace of the left cell)` then
//! has the same sign as the plain difference of the two cells, or is zero.

use crate::linalg::{matvec_t, Mat6, Vec6};
use crate::scalar::Real;
use crate::scheme::SchemeOrder;

/// Which face of a cell a reconstructed value belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Face {
    Left,
    Right,
}

#[inline]
pub fn minmod<T: Real>(a: T, b: T) -> T {
    if a * b <= T::zero() {
        T::zero()
    } else if a.abs() < b.abs() {
        a
    } else {
        b
    }
}

/// Left and right face values of the centre cell with minmod slope.
#[inline]
pub fn minmod_faces<T: Real>(vm: T, v0: T, vp: T) -> (T, T) {
    let half_slope = T::half() * minmod(v0 - vm, vp - v0);
    (v0 - half_slope, v0 + half_slope)
}

/// Reconstruction weights `c[r + 1][j]` for stencil offset `r` and the right
/// face, order 3.
const ENO3: [[f64; 3]; 4] = [
    [11.0 / 6.0, -7.0 / 6.0, 1.0 / 3.0],
    [1.0 / 3.0, 5.0 / 6.0, -1.0 / 6.0],
    [-1.0 / 6.0, 5.0 / 6.0, 1.0 / 3.0],
    [1.0 / 3.0, -7.0 / 6.0, 11.0 / 6.0],
];

const ENO4: [[f64; 4]; 5] = [
    [25.0 / 12.0, -23.0 / 12.0, 13.0 / 12.0, -1.0 / 4.0],
    [1.0 / 4.0, 13.0 / 12.0, -5.0 / 12.0, 1.0 / 12.0],
    [-1.0 / 12.0, 7.0 / 12.0, 7.0 / 12.0, -1.0 / 12.0],
    [1.0 / 12.0, -5.0 / 12.0, 13.0 / 12.0, 1.0 / 4.0],
    [-1.0 / 4.0, 13.0 / 12.0, -23.0 / 12.0, 25.0 / 12.0],
];

/// Undivided difference of order `len - 1` of `v[start..start + len]`.
#[inline]
fn undivided<T: Real>(v: &[T], start: usize, len: usize) -> T {
    let mut d = [T::zero(); 4];
    d[..len].copy_from_slice(&v[start..start + len]);
    for l in 1..len {
        for j in 0..len - l {
            d[j] = d[j + 1] - d[j];
        }
    }
    d[0]
}

/// ENO stencil choice: start index of the `k`-cell stencil within `v`
/// around cell `c`. Ties keep the left-biased stencil.
#[inline]
fn eno_stencil_start<T: Real>(v: &[T], c: usize, k: usize) -> usize {
    let mut start = c;
    for l in 1..k {
        let left = undivided(v, start - 1, l + 1).abs();
        let right = undivided(v, start, l + 1).abs();
        if left <= right {
            start -= 1;
        }
    }
    start
}

/// Offsets of the left and right face values from the centre value `v[c]`
/// using the stencil starting at `start`. Working with offsets keeps flat
/// data exactly flat.
#[inline]
fn eno_offsets_on<T: Real>(v: &[T], c: usize, k: usize, start: usize) -> (T, T) {
    let r = c - start;
    let mut left = T::zero();
    let mut right = T::zero();
    let vc = v[c];
    match k {
        3 => {
            for j in 0..3 {
                let d = v[start + j] - vc;
                right += T::lit(ENO3[r + 1][j]) * d;
                left += T::lit(ENO3[r][j]) * d;
            }
        }
        4 => {
            for j in 0..4 {
                let d = v[start + j] - vc;
                right += T::lit(ENO4[r + 1][j]) * d;
                left += T::lit(ENO4[r][j]) * d;
            }
        }
        _ => unreachable!("ENO order {k}"),
    }
    (left, right)
}

#[inline]
fn eno_offsets<T: Real>(v: &[T], c: usize, k: usize) -> (T, T) {
    eno_offsets_on(v, c, k, eno_stencil_start(v, c, k))
}

/// ENO jump at the face between cells `k - 1` and `k` of `s`.
#[inline]
fn eno_jump<T: Real>(s: &[T], k: usize) -> T {
    let start_l = eno_stencil_start(s, k - 1, k);
    let start_r = eno_stencil_start(s, k, k);
    if start_l == start_r {
        // one polynomial serves both cells, so it is continuous at the face
        return T::zero();
    }
    let (_, l_plus) = eno_offsets_on(s, k - 1, k, start_l);
    let (r_minus, _) = eno_offsets_on(s, k, k, start_r);
    (s[k] - s[k - 1]) + (r_minus - l_plus)
}

#[inline]
fn eno_pair_from<T: Real>(v: &[T], c: usize, k: usize) -> (T, T) {
    let (l, r) = eno_offsets(v, c, k);
    (v[c] + l, v[c] + r)
}

/// Left and right face values of the centre cell of `window`, which holds
/// `2k - 1` cell values, by ENO reconstruction of order `k ∈ {3, 4}`.
pub fn eno_faces<T: Real>(window: &[T], k: usize) -> (T, T) {
    assert!(k == 3 || k == 4, "ENO order must be 3 or 4");
    assert_eq!(window.len(), 2 * k - 1, "ENO window length");
    eno_pair_from(window, k - 1, k)
}

pub fn eno_reconstruct<T: Real>(window: &[T], k: usize, face: Face) -> T {
    let (l, r) = eno_faces(window, k);
    match face {
        Face::Left => l,
        Face::Right => r,
    }
}

/// Reconstructed jump at the face in the middle of `s`, which holds `2w`
/// values of one scalar component, `w` the half width of `order`.
#[inline]
pub fn face_jump<T: Real>(s: &[T], order: SchemeOrder) -> T {
    debug_assert_eq!(s.len(), 2 * order.half_width());
    match order {
        SchemeOrder::O1 => s[1] - s[0],
        SchemeOrder::O2 => {
            let d = s[2] - s[1];
            let sl = minmod(s[1] - s[0], d);
            let sr = minmod(d, s[3] - s[2]);
            d - T::half() * (sl + sr)
        }
        SchemeOrder::O3 => eno_jump(s, 3),
        SchemeOrder::O4 => eno_jump(s, 4),
    }
}

/// Jump of the reconstructed scaled variables `𝒱 = R̃ᵀ V` at one face.
///
/// `vars` holds the `2w` entropy variable vectors around the face; all of
/// them are projected with the same face matrix `r_tilde`.
pub fn scaled_face_jump<T: Real>(vars: &[Vec6<T>], r_tilde: &Mat6<T>, order: SchemeOrder) -> Vec6<T> {
    let w = order.half_width();
    debug_assert_eq!(vars.len(), 2 * w);
    let mut proj = [[T::zero(); 8]; 6];
    for (m, v) in vars.iter().enumerate() {
        let p = matvec_t(r_tilde, v);
        for k in 0..6 {
            proj[k][m] = p[k];
        }
    }
    std::array::from_fn(|k| face_jump(&proj[k][..2 * w], order))
}

/// Face jumps along a line of cells. Face `f` separates cells `f + w - 1`
/// and `f + w`; `r_tildes[f]` is its scaled eigenvector matrix.
pub fn scaled_face_jumps<T: Real>(vars: &[Vec6<T>], r_tildes: &[Mat6<T>], order: SchemeOrder) -> Vec<Vec6<T>> {
    let w = order.half_width();
    assert!(vars.len() >= 2 * w);
    assert_eq!(r_tildes.len(), vars.len() + 1 - 2 * w);
    r_tildes
        .iter()
        .enumerate()
        .map(|(f, r)| scaled_face_jump(&vars[f..f + 2 * w], r, order))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::identity;
    use proptest::prelude::*;

    #[test]
    fn minmod_examples() {
        assert_eq!(minmod_faces(0.0, 1.0, 2.0), (0.5, 1.5));
        assert_eq!(minmod_faces(0.0, 1.0, 0.0), (1.0, 1.0));
        assert_eq!(minmod_faces(0.0, 1.0, 3.0), (0.5, 1.5));
        assert_eq!(minmod(-1.0, 2.0), 0.0);
        assert_eq!(minmod(-1.0, -2.0), -1.0);
    }

    #[test]
    fn eno_constant() {
        for k in [3, 4] {
            let w = vec![2.5; 2 * k - 1];
            let (l, r) = eno_faces(&w, k);
            assert!((l - 2.5f64).abs() < 1e-14 && (r - 2.5f64).abs() < 1e-14);
        }
    }

    /// Cell averages of a polynomial of degree `k - 1` are reconstructed to
    /// the exact point values at the faces.
    #[test]
    fn eno_polynomial_exactness() {
        let poly = |x: f64| 0.3 - 1.2 * x + 0.7 * x * x - 0.25 * x * x * x;
        // antiderivative for exact cell averages
        let anti = |x: f64| 0.3 * x - 0.6 * x * x + 0.7 / 3.0 * x.powi(3) - 0.0625 * x.powi(4);
        let dx = 0.37;
        let x0 = 0.11;
        for k in [3usize, 4] {
            let quad = |x: f64| if k == 3 { 0.3 - 1.2 * x + 0.7 * x * x } else { poly(x) };
            let quad_anti = |x: f64| {
                if k == 3 {
                    0.3 * x - 0.6 * x * x + 0.7 / 3.0 * x.powi(3)
                } else {
                    anti(x)
                }
            };
            let c = k as i32 - 1;
            let window: Vec<f64> = (0..2 * k as i32 - 1)
                .map(|j| {
                    let a = x0 + (j - c) as f64 * dx - 0.5 * dx;
                    (quad_anti(a + dx) - quad_anti(a)) / dx
                })
                .collect();
            let (l, r) = eno_faces(&window, k);
            assert!((l - quad(x0 - 0.5 * dx)).abs() < 1e-12, "k={k} left {l}");
            assert!((r - quad(x0 + 0.5 * dx)).abs() < 1e-12, "k={k} right {r}");
        }
    }

    #[test]
    fn eno_step_keeps_sign() {
        for (order, w) in [(SchemeOrder::O3, 3usize), (SchemeOrder::O4, 4)] {
            let s: Vec<f64> = (0..2 * w).map(|m| if m < w { 0.0 } else { 1.0 }).collect();
            assert!(face_jump(&s, order) > 0.0);
            let s: Vec<f64> = s.iter().map(|x| -x).collect();
            assert!(face_jump(&s, order) < 0.0);
        }
    }

    #[test]
    fn eno_tie_prefers_left() {
        // symmetric data: both candidate extensions have equal magnitude
        let v = [0.0, 1.0, 0.0, 1.0, 0.0];
        assert_eq!(eno_stencil_start(&v, 2, 3), 0);
    }

    #[test]
    fn order_one_path_is_plain_jump() {
        let vars = vec![[1.0, 2.0, 3.0, 4.0, 5.0, 6.0], [2.0, 0.0, 3.5, 4.0, -5.0, 6.5]];
        let j = scaled_face_jump(&vars, &identity(), SchemeOrder::O1);
        assert_eq!(j, [1.0, -2.0, 0.5, 0.0, -10.0, 0.5]);
    }

    #[test]
    fn uniform_row_has_zero_jumps() {
        for order in SchemeOrder::ALL {
            let vars = vec![[1.0, -2.0, 3.0, 4.0, 5.0, 6.0]; 12];
            let faces = vars.len() + 1 - 2 * order.half_width();
            let jumps = scaled_face_jumps(&vars, &vec![identity(); faces], order);
            assert!(jumps.iter().all(|j| j.iter().all(|x| *x == 0.0)));
        }
    }

    #[test]
    fn smooth_accuracy() {
        // jump at the face of sampled sin data decays like dx^k
        for (order, k) in [(SchemeOrder::O2, 2.0), (SchemeOrder::O3, 3.0), (SchemeOrder::O4, 4.0)] {
            let w = order.half_width();
            let err = |dx: f64| {
                let s: Vec<f64> = (0..2 * w).map(|m| (1.3 + (m as f64 - w as f64 + 0.5) * dx).sin()).collect();
                face_jump(&s, order).abs()
            };
            let observed = (err(0.02) / err(0.01)).log2();
            assert!(observed > k - 0.3, "{order}: {observed}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20000))]

        #[test]
        fn sign_property(s in proptest::collection::vec(-10.0f64..10.0, 8), o in 2u8..=4) {
            let order = SchemeOrder::from_u8(o).unwrap();
            let w = order.half_width();
            let s = &s[4 - w..4 + w];
            let plain = s[w] - s[w - 1];
            let rec = face_jump(s, order);
            prop_assert!(rec == 0.0 || rec.signum() == plain.signum(), "{s:?}: {rec} vs {plain}");
        }
    }
}
