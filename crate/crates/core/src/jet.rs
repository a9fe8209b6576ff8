//! Truncated Taylor arithmetic and derivative jets.
//!
//! `Taylor<N>` stores the normalized coefficients `f⁽ᵏ⁾(t)/k!` for
//! `k < N`. Arithmetic on these propagates exact derivatives through closed
//! form expressions, which is how family curves and generated curves get
//! their higher derivatives.

use alloc::vec::Vec;
use core::ops::{Add, Div, Mul, Neg, Sub};
#[allow(unused_imports)] // inherent when `std` is linked
use num_traits::Float;

use crate::error::{Error, Result};

/// Highest derivative order supported by [`Jet`].
pub const MAX_ORDER: usize = 4;

fn factorial(k: usize) -> f64 {
    (1..=k).map(|j| j as f64).product()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Taylor<const N: usize>(pub [f64; N]);

impl<const N: usize> Taylor<N> {
    pub fn constant(v: f64) -> Self {
        let mut c = [0.0; N];
        c[0] = v;
        Taylor(c)
    }

    /// The independent variable expanded at `t`.
    pub fn variable(t: f64) -> Self {
        let mut c = [0.0; N];
        c[0] = t;
        if N > 1 {
            c[1] = 1.0;
        }
        Taylor(c)
    }

    /// Builds a series from plain derivatives `f, f′, f″, …`.
    pub fn from_derivatives(d: &[f64]) -> Self {
        let mut c = [0.0; N];
        for (k, slot) in c.iter_mut().enumerate().take(d.len()) {
            *slot = d[k] / factorial(k);
        }
        Taylor(c)
    }

    pub fn value(&self) -> f64 {
        self.0[0]
    }

    /// The `k`-th derivative.
    pub fn derivative(&self, k: usize) -> f64 {
        self.0[k] * factorial(k)
    }

    pub fn scale(self, s: f64) -> Self {
        let mut c = self.0;
        c.iter_mut().for_each(|x| *x *= s);
        Taylor(c)
    }

    pub fn sin_cos(self) -> (Self, Self) {
        let u = &self.0;
        let mut s = [0.0; N];
        let mut c = [0.0; N];
        let (s0, c0) = u[0].sin_cos();
        s[0] = s0;
        c[0] = c0;
        for k in 1..N {
            let mut ss = 0.0;
            let mut cc = 0.0;
            for j in 1..=k {
                let w = j as f64 * u[j];
                ss += w * c[k - j];
                cc += w * s[k - j];
            }
            s[k] = ss / k as f64;
            c[k] = -cc / k as f64;
        }
        (Taylor(s), Taylor(c))
    }

    pub fn sin(self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(self) -> Self {
        self.sin_cos().1
    }

    pub fn sqrt(self) -> Self {
        let u = &self.0;
        let mut r = [0.0; N];
        r[0] = u[0].sqrt();
        for k in 1..N {
            let mut acc = u[k];
            for j in 1..k {
                acc -= r[j] * r[k - j];
            }
            r[k] = acc / (2.0 * r[0]);
        }
        Taylor(r)
    }

    pub fn recip(self) -> Self {
        Self::constant(1.0) / self
    }

    pub fn powi(self, n: u32) -> Self {
        let mut acc = Self::constant(1.0);
        for _ in 0..n {
            acc = acc * self;
        }
        acc
    }
}

impl<const N: usize> Add for Taylor<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut c = self.0;
        c.iter_mut().zip(rhs.0).for_each(|(a, b)| *a += b);
        Taylor(c)
    }
}

impl<const N: usize> Sub for Taylor<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut c = self.0;
        c.iter_mut().zip(rhs.0).for_each(|(a, b)| *a -= b);
        Taylor(c)
    }
}

impl<const N: usize> Neg for Taylor<N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl<const N: usize> Mul for Taylor<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut c = [0.0; N];
        for (k, slot) in c.iter_mut().enumerate() {
            *slot = (0..=k).map(|i| self.0[i] * rhs.0[k - i]).sum();
        }
        Taylor(c)
    }
}

impl<const N: usize> Div for Taylor<N> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let b = &rhs.0;
        let mut q = [0.0; N];
        for k in 0..N {
            let mut acc = self.0[k];
            for i in 1..=k {
                acc -= b[i] * q[k - i];
            }
            q[k] = acc / b[0];
        }
        Taylor(q)
    }
}

impl<const N: usize> Add<f64> for Taylor<N> {
    type Output = Self;
    fn add(mut self, rhs: f64) -> Self {
        self.0[0] += rhs;
        self
    }
}

impl<const N: usize> Mul<f64> for Taylor<N> {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(rhs)
    }
}

/// Position and derivatives of a curve at one parameter value.
///
/// Entry `j` holds the `j`-th derivative as an `n`-vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    order: usize,
    dimension: usize,
    data: Vec<f64>,
}

impl Jet {
    pub fn new(order: usize, dimension: usize, data: Vec<f64>) -> Result<Self> {
        if order > MAX_ORDER {
            return Err(Error::UnsupportedOrder(order));
        }
        debug_assert_eq!(data.len(), (order + 1) * dimension);
        Ok(Jet {
            order,
            dimension,
            data,
        })
    }

    pub fn zeros(order: usize, dimension: usize) -> Self {
        Jet {
            order,
            dimension,
            data: alloc::vec![0.0; (order + 1) * dimension],
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn derivative(&self, j: usize) -> &[f64] {
        &self.data[j * self.dimension..(j + 1) * self.dimension]
    }

    pub fn derivative_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.dimension..(j + 1) * self.dimension]
    }

    pub fn position(&self) -> &[f64] {
        self.derivative(0)
    }

    pub fn values(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.dimension)
    }

    /// Writes coordinate `i` from a Taylor series.
    pub(crate) fn set_coordinate<const N: usize>(&mut self, i: usize, series: &Taylor<N>) {
        for j in 0..=self.order.min(N - 1) {
            self.data[j * self.dimension + i] = series.derivative(j);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type T5 = Taylor<5>;

    #[test]
    fn sin_derivatives_cycle() {
        let t = 0.7;
        let s = T5::variable(t).sin();
        let expected = [t.sin(), t.cos(), -t.sin(), -t.cos(), t.sin()];
        for (k, e) in expected.iter().enumerate() {
            assert!((s.derivative(k) - e).abs() < 1e-15, "k = {k}");
        }
    }

    #[test]
    fn quotient_matches_hand_derivatives() {
        // f = 1 / (2 + t), f⁽ᵏ⁾ = (-1)^k k! / (2 + t)^(k+1)
        let t = 0.3;
        let f = T5::variable(t).add(2.0).recip();
        let mut sign = 1.0;
        for k in 0..5 {
            let expected = sign * factorial(k) / (2.0 + t).powi(k as i32 + 1);
            assert!((f.derivative(k) - expected).abs() < 1e-13);
            sign = -sign;
        }
    }

    #[test]
    fn sqrt_squares_back() {
        let x = T5::variable(1.3).sin().add(2.0);
        let r = x.sqrt();
        let back = r * r;
        for k in 0..5 {
            assert!((back.0[k] - x.0[k]).abs() < 1e-14);
        }
    }

    #[test]
    fn jet_rejects_order_five() {
        assert_eq!(
            Jet::new(5, 2, alloc::vec![0.0; 12]),
            Err(Error::UnsupportedOrder(5))
        );
    }
}
