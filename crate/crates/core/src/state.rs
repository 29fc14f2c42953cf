//! State representations of the shear shallow water system and the
//! entropy quantities attached to them.
//!
//! All three vectors share the component ordering `(h, 1, 2, 11, 12, 22)`:
//!
//! * [`PrimitiveState`] holds `(h, v1, v2, P11, P12, P22)`,
//! * [`ConservedState`] holds `(h, h v1, h v2, E11, E12, E22)` with
//!   `E = h/2 (v ⊗ v + P)`,
//! * [`EntropyVars`] holds `V = ∂η/∂U` for the entropy `η = -h log(det P / h²)`.

use thiserror::Error;

use crate::linalg::Vec6;
use crate::scalar::Real;

/// Default lower bound on `h` and `det P` for a state to count as admissible.
pub const ADMISSIBILITY_FLOOR: f64 = 1e-13;

/// Which leading minor of the stress tensor failed the positivity test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StressMinor {
    /// `P11 > 0`
    First,
    /// `P11 P22 - P12² > 0`
    Determinant,
}

impl std::fmt::Display for StressMinor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StressMinor::First => f.write_str("P11"),
            StressMinor::Determinant => f.write_str("det P"),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum StateError {
    #[error("non-positive depth h = {h:e}")]
    NonPositiveDepth { h: f64 },
    #[error("stress tensor not positive definite: {minor} = {value:e}")]
    NonPositiveStress { minor: StressMinor, value: f64 },
    #[error("non-finite state component")]
    NonFinite,
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum ParamError {
    #[error("gravity must be positive, got {0}")]
    Gravity(f64),
    #[error("model constant {name} must be non-negative, got {value}")]
    Negative { name: &'static str, value: f64 },
}

/// Physical constants of the model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams<T> {
    /// Gravitational acceleration.
    pub g: T,
    /// Chezy friction coefficient.
    pub c_f: T,
    /// Constant of the turbulent dissipation closure.
    pub c_r: T,
    /// Enstrophy-like constant of the closure.
    pub phi: T,
    /// Bottom slope angle in radians.
    pub theta: T,
}

impl<T: Real> Default for ModelParams<T> {
    fn default() -> Self {
        Self {
            g: T::lit(9.81),
            c_f: T::zero(),
            c_r: T::zero(),
            phi: T::zero(),
            theta: T::zero(),
        }
    }
}

impl<T: Real> ModelParams<T> {
    pub fn with_gravity(g: T) -> Self {
        Self { g, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        if !(self.g > T::zero()) {
            return Err(ParamError::Gravity(self.g.as_f64()));
        }
        for (name, value) in [("C_f", self.c_f), ("C_r", self.c_r), ("phi", self.phi)] {
            if !(value >= T::zero()) {
                return Err(ParamError::Negative { name, value: value.as_f64() });
            }
        }
        Ok(())
    }

    pub fn cast<U: Real>(&self) -> ModelParams<U> {
        ModelParams {
            g: U::lit(self.g.as_f64()),
            c_f: U::lit(self.c_f.as_f64()),
            c_r: U::lit(self.c_r.as_f64()),
            phi: U::lit(self.phi.as_f64()),
            theta: U::lit(self.theta.as_f64()),
        }
    }
}

/// `(h, v1, v2, P11, P12, P22)`
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrimitiveState<T>(pub Vec6<T>);

/// `(h, h v1, h v2, E11, E12, E22)`
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConservedState<T>(pub Vec6<T>);

/// `V = ∂η/∂U`
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyVars<T>(pub Vec6<T>);

/// Exchanges the roles of the two horizontal directions in a 6-vector
/// ordered `(h, 1, 2, 11, 12, 22)`.
#[inline]
pub fn swap_components<T: Copy>(a: &Vec6<T>) -> Vec6<T> {
    [a[0], a[2], a[1], a[5], a[4], a[3]]
}

impl<T: Real> PrimitiveState<T> {
    pub fn new(h: T, v1: T, v2: T, p11: T, p12: T, p22: T) -> Self {
        Self([h, v1, v2, p11, p12, p22])
    }

    #[inline]
    pub fn h(&self) -> T {
        self.0[0]
    }
    #[inline]
    pub fn v1(&self) -> T {
        self.0[1]
    }
    #[inline]
    pub fn v2(&self) -> T {
        self.0[2]
    }
    #[inline]
    pub fn p11(&self) -> T {
        self.0[3]
    }
    #[inline]
    pub fn p12(&self) -> T {
        self.0[4]
    }
    #[inline]
    pub fn p22(&self) -> T {
        self.0[5]
    }

    #[inline]
    pub fn det_p(&self) -> T {
        self.p11() * self.p22() - self.p12() * self.p12()
    }

    #[inline]
    pub fn trace_p(&self) -> T {
        self.p11() + self.p22()
    }

    /// Same physical state seen with the x and y axes exchanged.
    pub fn swapped(&self) -> Self {
        Self(swap_components(&self.0))
    }

    pub fn check_admissible(&self) -> Result<(), StateError> {
        self.check_admissible_with_floor(T::lit(ADMISSIBILITY_FLOOR))
    }

    pub fn check_admissible_with_floor(&self, floor: T) -> Result<(), StateError> {
        if self.0.iter().any(|x| !x.is_finite()) {
            return Err(StateError::NonFinite);
        }
        if !(self.h() > floor) {
            return Err(StateError::NonPositiveDepth { h: self.h().as_f64() });
        }
        if !(self.p11() > T::zero()) {
            return Err(StateError::NonPositiveStress {
                minor: StressMinor::First,
                value: self.p11().as_f64(),
            });
        }
        let det = self.det_p();
        if !(det > floor) {
            return Err(StateError::NonPositiveStress {
                minor: StressMinor::Determinant,
                value: det.as_f64(),
            });
        }
        Ok(())
    }

    pub fn to_conserved(&self) -> ConservedState<T> {
        let [h, v1, v2, p11, p12, p22] = self.0;
        let hh = T::half() * h;
        ConservedState([
            h,
            h * v1,
            h * v2,
            hh * (v1 * v1 + p11),
            hh * (v1 * v2 + p12),
            hh * (v2 * v2 + p22),
        ])
    }

    /// `s = log(det P / h²)`
    #[inline]
    pub fn specific_entropy(&self) -> T {
        let h = self.h();
        (self.det_p() / (h * h)).ln()
    }

    /// `(η, s)` with `η = -h s`.
    pub fn entropy(&self) -> (T, T) {
        let s = self.specific_entropy();
        (-self.h() * s, s)
    }

    pub fn entropy_vars(&self) -> EntropyVars<T> {
        let [_, v1, v2, p11, p12, p22] = self.0;
        let two = T::lit(2.0);
        let det = self.det_p();
        let inv = T::one() / det;
        let s = self.specific_entropy();
        let quad = (p11 * v2 * v2 + p22 * v1 * v1 - two * p12 * v1 * v2) * inv;
        EntropyVars([
            T::lit(4.0) - s - quad,
            two * (p22 * v1 - p12 * v2) * inv,
            two * (p11 * v2 - p12 * v1) * inv,
            -two * p22 * inv,
            T::lit(4.0) * p12 * inv,
            -two * p11 * inv,
        ])
    }

    /// Entropy flux `(q^x, q^y) = (-h v1 s, -h v2 s)`.
    pub fn entropy_flux(&self) -> (T, T) {
        let s = self.specific_entropy();
        let h = self.h();
        (-h * self.v1() * s, -h * self.v2() * s)
    }

    /// Entropy potentials `(ψ^x, ψ^y) = (2 h v1, 2 h v2)`.
    #[inline]
    pub fn entropy_potential(&self) -> (T, T) {
        let two_h = T::lit(2.0) * self.h();
        (two_h * self.v1(), two_h * self.v2())
    }

    pub fn cast<U: Real>(&self) -> PrimitiveState<U> {
        PrimitiveState(self.0.map(|x| U::lit(x.as_f64())))
    }
}

impl<T: Real> ConservedState<T> {
    #[inline]
    pub fn h(&self) -> T {
        self.0[0]
    }

    /// Recovers the primitive state, failing outside the admissible set.
    pub fn to_primitive(&self) -> Result<PrimitiveState<T>, StateError> {
        self.to_primitive_with_floor(T::lit(ADMISSIBILITY_FLOOR))
    }

    pub fn to_primitive_with_floor(&self, floor: T) -> Result<PrimitiveState<T>, StateError> {
        let w = self.to_primitive_unchecked()?;
        w.check_admissible_with_floor(floor)?;
        Ok(w)
    }

    /// Applies the inverse equation of state, only rejecting `h ≤ 0` and
    /// non-finite input.
    pub fn to_primitive_unchecked(&self) -> Result<PrimitiveState<T>, StateError> {
        let [h, m1, m2, e11, e12, e22] = self.0;
        if self.0.iter().any(|x| !x.is_finite()) {
            return Err(StateError::NonFinite);
        }
        if !(h > T::zero()) {
            return Err(StateError::NonPositiveDepth { h: h.as_f64() });
        }
        let inv_h = T::one() / h;
        let v1 = m1 * inv_h;
        let v2 = m2 * inv_h;
        let two_inv_h = T::lit(2.0) * inv_h;
        Ok(PrimitiveState([
            h,
            v1,
            v2,
            two_inv_h * e11 - v1 * v1,
            two_inv_h * e12 - v1 * v2,
            two_inv_h * e22 - v2 * v2,
        ]))
    }

    pub fn swapped(&self) -> Self {
        Self(swap_components(&self.0))
    }
}

impl<T: Real> EntropyVars<T> {
    /// Inverse entropy map `V ↦ U`.
    ///
    /// Components 4–6 of `V` encode `-2 P⁻¹`, components 2–3 encode
    /// `2 P⁻¹ v`, and the first component fixes `s` and hence `h`.
    pub fn to_conserved(&self) -> Result<ConservedState<T>, StateError> {
        let [q1, q2, q3, q4, q5, q6] = self.0;
        let two = T::lit(2.0);
        let four = T::lit(4.0);
        // P⁻¹ = [[a, b], [b, c]]
        let a = -q4 / two;
        let b = -q5 / four;
        let c = -q6 / two;
        let det_inv = a * c - b * b;
        if !(a > T::zero()) || !(det_inv > T::zero()) {
            return Err(StateError::NonPositiveStress {
                minor: StressMinor::Determinant,
                value: det_inv.as_f64(),
            });
        }
        let det_p = T::one() / det_inv;
        let p11 = c * det_p;
        let p12 = -b * det_p;
        let p22 = a * det_p;
        // v = P (q2, q3) / 2
        let v1 = (p11 * q2 + p12 * q3) / two;
        let v2 = (p12 * q2 + p22 * q3) / two;
        let quad = a * v1 * v1 + two * b * v1 * v2 + c * v2 * v2;
        let s = four - q1 - quad;
        let h = (det_p * (-s).exp()).sqrt();
        let w = PrimitiveState([h, v1, v2, p11, p12, p22]);
        w.check_admissible()?;
        Ok(w.to_conserved())
    }
}

/// `U(W)` from the equation of state.
pub fn prim_to_cons<T: Real>(w: &PrimitiveState<T>) -> ConservedState<T> {
    w.to_conserved()
}

/// `W(U)`; errors when the state leaves the admissible set.
pub fn cons_to_prim<T: Real>(u: &ConservedState<T>) -> Result<PrimitiveState<T>, StateError> {
    u.to_primitive()
}

/// Returns `(η, s)`.
pub fn entropy<T: Real>(u: &ConservedState<T>) -> Result<(T, T), StateError> {
    Ok(u.to_primitive()?.entropy())
}

pub fn entropy_vars<T: Real>(u: &ConservedState<T>) -> Result<EntropyVars<T>, StateError> {
    Ok(u.to_primitive()?.entropy_vars())
}

/// Returns `(ψ^x, ψ^y)`.
pub fn entropy_potential<T: Real>(u: &ConservedState<T>) -> Result<(T, T), StateError> {
    Ok(u.to_primitive()?.entropy_potential())
}
