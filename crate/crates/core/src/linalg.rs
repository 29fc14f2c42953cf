//! Fixed-size 6-vector and 6x6 matrix helpers.

use crate::scalar::Real;

pub type Vec6<T> = [T; 6];
pub type Mat6<T> = [[T; 6]; 6];

#[inline]
pub fn zeros<T: Real>() -> Vec6<T> {
    [T::zero(); 6]
}

#[inline]
pub fn mat_zeros<T: Real>() -> Mat6<T> {
    [[T::zero(); 6]; 6]
}

pub fn identity<T: Real>() -> Mat6<T> {
    let mut m = mat_zeros();
    for (k, row) in m.iter_mut().enumerate() {
        row[k] = T::one();
    }
    m
}

#[inline]
pub fn dot<T: Real>(a: &Vec6<T>, b: &Vec6<T>) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

#[inline]
pub fn sub<T: Real>(a: &Vec6<T>, b: &Vec6<T>) -> Vec6<T> {
    std::array::from_fn(|k| a[k] - b[k])
}

#[inline]
pub fn add<T: Real>(a: &Vec6<T>, b: &Vec6<T>) -> Vec6<T> {
    std::array::from_fn(|k| a[k] + b[k])
}

#[inline]
pub fn scale<T: Real>(s: T, a: &Vec6<T>) -> Vec6<T> {
    std::array::from_fn(|k| s * a[k])
}

/// `m * x`
#[inline]
pub fn matvec<T: Real>(m: &Mat6<T>, x: &Vec6<T>) -> Vec6<T> {
    std::array::from_fn(|r| dot(&m[r], x))
}

/// `mᵀ * x`
#[inline]
pub fn matvec_t<T: Real>(m: &Mat6<T>, x: &Vec6<T>) -> Vec6<T> {
    let mut out = zeros();
    for (r, row) in m.iter().enumerate() {
        for c in 0..6 {
            out[c] += row[c] * x[r];
        }
    }
    out
}

pub fn matmul<T: Real>(a: &Mat6<T>, b: &Mat6<T>) -> Mat6<T> {
    let mut out = mat_zeros();
    for r in 0..6 {
        for k in 0..6 {
            let ark = a[r][k];
            if ark == T::zero() {
                continue;
            }
            for c in 0..6 {
                out[r][c] += ark * b[k][c];
            }
        }
    }
    out
}

pub fn transpose<T: Real>(a: &Mat6<T>) -> Mat6<T> {
    std::array::from_fn(|r| std::array::from_fn(|c| a[c][r]))
}

/// Max-row-sum norm.
pub fn norm_inf<T: Real>(a: &Mat6<T>) -> T {
    a.iter()
        .map(|row| row.iter().fold(T::zero(), |s, &x| s + x.abs()))
        .fold(T::zero(), T::max)
}

pub fn mat_sub<T: Real>(a: &Mat6<T>, b: &Mat6<T>) -> Mat6<T> {
    std::array::from_fn(|r| sub(&a[r], &b[r]))
}
