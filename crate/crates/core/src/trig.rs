//! Trigonometric polynomials.

use alloc::vec::Vec;
#[allow(unused_imports)] // inherent when `std` is linked
use num_traits::Float;

use crate::jet::Taylor;

/// `c₀ + Σₖ aₖ cos(kωt) + bₖ sin(kωt)` for `k = 1..=degree`.
///
/// With `ω = 1` the polynomial is 2π-periodic. With `ω = 1/2` and only odd
/// harmonics it is 2π-antiperiodic, which is what non-co-orientable tangent
/// fields and speed functions need.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPoly {
    pub constant: f64,
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
    pub frequency: f64,
}

impl TrigPoly {
    pub fn new(constant: f64, cos: Vec<f64>, sin: Vec<f64>) -> Self {
        TrigPoly {
            constant,
            cos,
            sin,
            frequency: 1.0,
        }
    }

    pub fn with_frequency(mut self, frequency: f64) -> Self {
        self.frequency = frequency;
        self
    }

    pub fn zero() -> Self {
        TrigPoly::new(0.0, Vec::new(), Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.cos.len().max(self.sin.len())
    }

    fn coeff(&self, k: usize) -> (f64, f64) {
        (
            self.cos.get(k - 1).copied().unwrap_or(0.0),
            self.sin.get(k - 1).copied().unwrap_or(0.0),
        )
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.taylor::<1>(t).value()
    }

    /// Normalized Taylor coefficients at `t` by term-wise differentiation.
    pub fn taylor<const N: usize>(&self, t: f64) -> Taylor<N> {
        let mut d = [0.0; N];
        d[0] = self.constant;
        for k in 1..=self.degree() {
            let (a, b) = self.coeff(k);
            if a == 0.0 && b == 0.0 {
                continue;
            }
            let w = k as f64 * self.frequency;
            let (s, c) = (w * t).sin_cos();
            let mut p = 1.0;
            for (j, slot) in d.iter_mut().enumerate() {
                let v = match j % 4 {
                    0 => a * c + b * s,
                    1 => b * c - a * s,
                    2 => -(a * c + b * s),
                    _ => a * s - b * c,
                };
                *slot += p * v;
                p *= w / (j + 1) as f64;
            }
        }
        Taylor(d)
    }

    pub fn derivative(&self) -> TrigPoly {
        let n = self.degree();
        let mut cos = Vec::with_capacity(n);
        let mut sin = Vec::with_capacity(n);
        for k in 1..=n {
            let (a, b) = self.coeff(k);
            let w = k as f64 * self.frequency;
            cos.push(w * b);
            sin.push(-w * a);
        }
        TrigPoly {
            constant: 0.0,
            cos,
            sin,
            frequency: self.frequency,
        }
    }

    /// Upper bound on `sup |f′|`.
    pub fn derivative_bound(&self) -> f64 {
        (1..=self.degree())
            .map(|k| {
                let (a, b) = self.coeff(k);
                k as f64 * self.frequency * (a.abs() + b.abs())
            })
            .sum()
    }

    pub fn scale(&self, s: f64) -> TrigPoly {
        TrigPoly {
            constant: self.constant * s,
            cos: self.cos.iter().map(|x| x * s).collect(),
            sin: self.sin.iter().map(|x| x * s).collect(),
            frequency: self.frequency,
        }
    }

    /// The polynomial `t ↦ f(t + c)`.
    pub fn shifted(&self, c: f64) -> TrigPoly {
        let n = self.degree();
        let mut cos = Vec::with_capacity(n);
        let mut sin = Vec::with_capacity(n);
        for k in 1..=n {
            let (a, b) = self.coeff(k);
            let (s, co) = (k as f64 * self.frequency * c).sin_cos();
            cos.push(a * co + b * s);
            sin.push(b * co - a * s);
        }
        TrigPoly {
            constant: self.constant,
            cos,
            sin,
            frequency: self.frequency,
        }
    }

    /// The polynomial `t ↦ f(−t)`.
    pub fn reversed(&self) -> TrigPoly {
        TrigPoly {
            constant: self.constant,
            cos: self.cos.clone(),
            sin: self.sin.iter().map(|x| -x).collect(),
            frequency: self.frequency,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.constant == 0.0 && self.cos.iter().chain(&self.sin).all(|&x| x == 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn derivative_poly_agrees_with_taylor() {
        let p = TrigPoly::new(0.3, vec![1.0, -0.5, 0.25], vec![0.2, 0.0, 0.7]);
        let dp = p.derivative();
        for &t in &[0.0, 0.4, 2.0, 5.5] {
            let tp = p.taylor::<5>(t);
            let tdp = dp.taylor::<4>(t);
            for k in 0..4 {
                assert!((tp.derivative(k + 1) - tdp.derivative(k)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn half_frequency_odd_harmonics_are_antiperiodic() {
        let p = TrigPoly::new(0.0, vec![1.0, 0.0, 0.3], vec![0.5, 0.0, -0.2]).with_frequency(0.5);
        for &t in &[0.1, 1.0, 3.0] {
            assert!((p.eval(t + crate::PERIOD) + p.eval(t)).abs() < 1e-12);
        }
    }

    #[test]
    fn shift_and_reverse() {
        let p = TrigPoly::new(0.1, vec![1.0, 2.0], vec![-1.0, 0.5]);
        let q = p.shifted(0.9);
        let r = p.reversed();
        for &t in &[0.0, 1.3, 4.0] {
            assert!((q.eval(t) - p.eval(t + 0.9)).abs() < 1e-13);
            assert!((r.eval(t) - p.eval(-t)).abs() < 1e-13);
        }
    }
}
