//! Univariate polynomials over the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::sarith::Rational;

/// Coefficients in ascending order: `coeffs[i]` multiplies `X^i`. No trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// From leading-first coefficients `a_0 X^d + ... + a_d`.
    pub fn from_descending(coeffs: &[Rational]) -> Self {
        Self::new(coeffs.iter().rev().cloned().collect())
    }

    pub fn from_int_descending(coeffs: &[BigInt]) -> Self {
        Self::new(coeffs.iter().rev().map(|c| Rational::from_integer(c.clone())).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let lead = self.leading();
        Poly::new(self.coeffs.iter().map(|c| c / &lead).collect())
    }

    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let dd = divisor.coeffs.len() - 1;
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let q = &rem[i + dd] / &lead;
            if q.is_zero() {
                continue;
            }
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &q * c;
            }
            quot[i] = q;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Yun's decomposition: `self = c * prod g_i^i` with squarefree, pairwise coprime `g_i`.
    /// Returns `(g_i, i)` for the nonconstant factors.
    pub fn squarefree_decomposition(&self) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let d = self.derivative();
        let mut a = self.gcd(&d);
        let mut b = self.div_rem(&a).0;
        let mut c = d.div_rem(&a).0;
        let mut e = sub(&c, &b.derivative());
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            a = b.gcd(&e);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_rem(&a).0;
            c = e.div_rem(&a).0;
            e = sub(&c, &b.derivative());
            i += 1;
        }
        out
    }

    /// Number of distinct complex roots.
    pub fn distinct_root_count(&self) -> usize {
        self.squarefree_decomposition()
            .iter()
            .map(|(g, _)| g.degree().unwrap_or(0))
            .sum()
    }
}

fn sub(a: &Poly, b: &Poly) -> Poly {
    let n = a.coeffs.len().max(b.coeffs.len());
    Poly::new(
        (0..n)
            .map(|i| {
                let x = a.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
                let y = b.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
                x - y
            })
            .collect(),
    )
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 if c.is_one() => "X".to_string(),
                1 => format!("{c}*X"),
                _ if c.is_one() => format!("X^{i}"),
                _ => format!("{c}*X^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sarith::int;

    fn p(desc: &[i64]) -> Poly {
        Poly::from_descending(&desc.iter().map(|&c| int(c)).collect::<Vec<_>>())
    }

    #[test]
    fn eval_and_derivative() {
        let f = p(&[1, 0, 0, -2]);
        assert_eq!(f.eval(&int(2)), int(6));
        assert_eq!(f.derivative(), p(&[3, 0, 0]));
        assert_eq!(f.degree(), Some(3));
    }

    #[test]
    fn gcd_and_squarefree() {
        let f = p(&[1, 0, -1]); // (X-1)(X+1)
        let g = p(&[1, -2, 1]); // (X-1)^2
        assert_eq!(f.gcd(&g), p(&[1, -1]));
        assert!(f.is_squarefree());
        assert!(!g.is_squarefree());
    }

    #[test]
    fn yun_decomposition() {
        // X (X-1)^2 (X+2)^3
        let x = p(&[1, 0]);
        let a = p(&[1, -1]);
        let b = p(&[1, 2]);
        let mul = |u: &Poly, v: &Poly| {
            let mut c = vec![Rational::zero(); u.coeffs().len() + v.coeffs().len() - 1];
            for (i, s) in u.coeffs().iter().enumerate() {
                for (j, t) in v.coeffs().iter().enumerate() {
                    c[i + j] += s * t;
                }
            }
            Poly::new(c)
        };
        let f = mul(&mul(&mul(&x, &mul(&a, &a)), &mul(&b, &b)), &b);
        let dec = f.squarefree_decomposition();
        assert_eq!(dec, vec![(x, 1), (a, 2), (b, 3)]);
        assert_eq!(f.distinct_root_count(), 3);
    }
}
