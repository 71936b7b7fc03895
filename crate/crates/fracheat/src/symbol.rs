//! Fourier symbol of the operator: principal-branch complex powers of
//! `i rho + |xi|^2` (left) and `-i rho + |xi|^2` (right).

use crate::order::FracOrder;
use crate::scalar::Real;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

/// Which side of the operator a computation refers to: `Left` integrates
/// over past times, `Right` over future times.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// A point of the frequency lattice: spatial frequency vector and temporal
/// frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolPoint<T> {
    pub xi: Vec<T>,
    pub rho: T,
}

impl<T: Real> SymbolPoint<T> {
    pub fn new(xi: Vec<T>, rho: T) -> Self {
        debug_assert!(xi.iter().all(|c| c.is_finite()) && rho.is_finite());
        SymbolPoint { xi, rho }
    }

    pub fn xi_norm_sq(&self) -> T {
        self.xi.iter().map(|&c| c * c).sum()
    }
}

/// Principal-branch power of the symbol base `|xi|^2 ± i rho`.
///
/// The base lies in the closed right half-plane, so the principal branch is
/// unambiguous away from zero; the value at base zero is defined as 0.
pub fn complex_power_symbol<T: Real>(
    p: &SymbolPoint<T>,
    s: FracOrder<T>,
    side: Side,
) -> Complex<T> {
    let re = p.xi_norm_sq();
    let im = match side {
        Side::Left => p.rho,
        Side::Right => -p.rho,
    };
    principal_power(Complex::new(re, im), s.get())
}

/// `z^s` by `exp(s log z)` with the principal logarithm; `0^s = 0`.
pub fn principal_power<T: Real>(z: Complex<T>, s: T) -> Complex<T> {
    if z.re == T::zero() && z.im == T::zero() {
        return Complex::new(T::zero(), T::zero());
    }
    let r = z.norm();
    let theta = z.im.atan2(z.re);
    let mag = r.powf(s);
    let phase = theta * s;
    Complex::new(mag * phase.cos(), mag * phase.sin())
}
