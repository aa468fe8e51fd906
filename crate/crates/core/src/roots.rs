//! Real roots of low-degree polynomials.
//!
//! Roots are isolated recursively: the real roots of the derivative split the
//! line into intervals on which the polynomial is monotone, so each interval
//! holds at most one root, bracketed by a sign change and refined by bisection
//! down to adjacent floating-point values. A critical point where the
//! polynomial vanishes is reported directly, which recovers multiple roots to
//! the accuracy of the derivative's simple root.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{PlanError, Result};

/// Dense polynomial with coefficients in ascending powers.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Self::new(vec![0.0, 1.0])
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[f64]) -> Self {
        roots.iter().fold(Self::constant(1.0), |acc, &r| {
            acc * Self::new(vec![-r, 1.0])
        })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Sum of `|c_i| |x|^i`, the scale against which `eval` rounding is judged.
    fn magnitude(&self, x: f64) -> f64 {
        let ax = x.abs();
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * ax + c.abs())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::constant(0.0);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Multiplies by `x^n`.
    pub fn shift(&self, n: usize) -> Self {
        let mut coeffs = vec![0.0; n];
        coeffs.extend_from_slice(&self.coeffs);
        Self::new(coeffs)
    }

    /// Drops leading coefficients that are negligible against the largest one.
    pub fn trimmed(&self, rel: f64) -> Self {
        let big = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let mut coeffs = self.coeffs.clone();
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.abs() <= rel * big) {
            coeffs.pop();
        }
        Self::new(coeffs)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&0.0) + rhs.coeffs.get(i).unwrap_or(&0.0))
                .collect(),
        )
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Add<f64> for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: f64) -> Polynomial {
        &self + &Polynomial::constant(rhs)
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs.scale(-1.0)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Mul<f64> for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: f64) -> Polynomial {
        self.scale(rhs)
    }
}

/// All real roots of the polynomial with ascending `coefficients`, sorted and
/// without repetition (a multiple root is listed once).
pub fn solve_real_roots(coefficients: &[f64]) -> Result<Vec<f64>> {
    let p = Polynomial::new(coefficients.to_vec());
    if p.coeffs.iter().any(|c| !c.is_finite()) {
        return Err(PlanError::NonFinite("polynomial coefficient"));
    }
    if p.is_zero() {
        return Err(PlanError::DegeneratePolynomial);
    }
    Ok(real_roots(&p))
}

/// Cauchy bound on the modulus of every root.
fn root_bound(p: &Polynomial) -> f64 {
    let lead = *p.coeffs.last().unwrap();
    1.0 + p.coeffs[..p.degree()]
        .iter()
        .fold(0.0f64, |m, c| m.max((c / lead).abs()))
}

fn real_roots(p: &Polynomial) -> Vec<f64> {
    match p.degree() {
        0 => Vec::new(),
        1 => vec![-p.coeffs[0] / p.coeffs[1]],
        _ => {
            let bound = root_bound(p);
            let mut knots = vec![-bound];
            knots.extend(
                real_roots(&p.derivative())
                    .into_iter()
                    .filter(|c| c.abs() < bound),
            );
            knots.push(bound);

            let vanishes = |x: f64| p.eval(x).abs() <= 64.0 * f64::EPSILON * p.magnitude(x);
            let mut roots: Vec<f64> = Vec::new();
            let push = |r: f64, roots: &mut Vec<f64>| {
                if roots.last().is_none_or(|&last| r - last > 1e-14 * (1.0 + r.abs())) {
                    roots.push(r);
                }
            };
            for w in knots.windows(2) {
                let (lo, hi) = (w[0], w[1]);
                let (flo, fhi) = (p.eval(lo), p.eval(hi));
                if vanishes(lo) {
                    push(lo, &mut roots);
                    continue;
                }
                if vanishes(hi) {
                    continue;
                }
                if flo.signum() != fhi.signum() {
                    push(bisect(p, lo, hi, flo), &mut roots);
                }
            }
            if let Some(&last) = knots.last() {
                if vanishes(last) {
                    push(last, &mut roots);
                }
            }
            roots
        }
    }
}

/// Bisection down to adjacent doubles on a bracket with `f(lo) = flo`.
fn bisect(p: &Polynomial, mut lo: f64, mut hi: f64, flo: f64) -> f64 {
    let lo_sign = flo.signum();
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = p.eval(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if p.eval(lo).abs() <= p.eval(hi).abs() {
        lo
    } else {
        hi
    }
}
