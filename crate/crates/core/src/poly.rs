//! Dense univariate polynomials over `Q_p`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::padic::Padic;

/// Coefficients are stored lowest degree first.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    p: u64,
    coeffs: Vec<Padic>,
}

impl Poly {
    pub fn new(p: u64, coeffs: Vec<Padic>) -> Self {
        assert!(coeffs.iter().all(|c| c.prime() == p));
        let mut out = Poly { p, coeffs };
        out.trim();
        out
    }

    pub fn from_i64s(p: u64, values: &[i64], prec: i64) -> Self {
        Self::new(p, values.iter().map(|&v| Padic::from_i64(v, p, prec)).collect())
    }

    pub fn zero(p: u64) -> Self {
        Poly { p, coeffs: Vec::new() }
    }

    pub fn constant(c: Padic) -> Self {
        Self::new(c.prime(), vec![c])
    }

    /// The monomial `c * x^k`.
    pub fn monomial(c: Padic, k: usize) -> Self {
        let p = c.prime();
        let mut coeffs = vec![Padic::exact_zero(p); k];
        coeffs.push(c);
        Self::new(p, coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Padic::is_exact_zero) {
            self.coeffs.pop();
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[Padic] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Padic {
        self.coeffs.get(k).cloned().unwrap_or_else(|| Padic::exact_zero(self.p))
    }

    /// Degree counting every stored coefficient, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// True when every coefficient is indistinguishable from zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Padic::is_zero)
    }

    pub fn min_prec(&self) -> i64 {
        self.coeffs.iter().map(Padic::prec).min().unwrap_or(crate::padic::EXACT)
    }

    pub fn eval(&self, x: &Padic) -> Padic {
        let mut acc = Padic::exact_zero(self.p);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.mul_int(i as i64)).collect();
        Self::new(self.p, coeffs)
    }

    /// Coefficients of `f(c + y)` as a polynomial in `y`.
    pub fn taylor_shift(&self, c: &Padic) -> Self {
        let mut t = self.coeffs.clone();
        let n = t.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                t[j] = &t[j] + &(c * &t[j + 1]);
            }
        }
        Self::new(self.p, t)
    }

    pub fn scale(&self, c: &Padic) -> Self {
        Self::new(self.p, self.coeffs.iter().map(|a| a * c).collect())
    }

    fn add_impl(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(self.p, (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    fn sub_impl(&self, other: &Self) -> Self {
        self.add_impl(&-other)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero(self.p);
        }
        let mut coeffs = vec![Padic::exact_zero(self.p); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_exact_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &(a * b);
                }
            }
        }
        Self::new(self.p, coeffs)
    }

    pub fn pow(&self, e: u32) -> Self {
        let one = match self.coeffs.iter().find(|c| !c.is_exact_zero()) {
            Some(c) => c.one_like(),
            None => return if e == 0 { Self::constant(Padic::one(self.p, 1)) } else { Self::zero(self.p) },
        };
        let mut acc = Self::constant(one);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.p, self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! poly_binop {
    ($trait:ident, $method:ident, $imp:ident) => {
        impl $trait<&Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                self.$imp(rhs)
            }
        }
        impl $trait<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$imp(&rhs)
            }
        }
    };
}

poly_binop!(Add, add, add_impl);
poly_binop!(Sub, sub, sub_impl);
poly_binop!(Mul, mul, mul_impl);

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_exact_zero())
            .map(|(i, c)| format!("({c})*x^{i}"))
            .collect();
        if terms.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn taylor_shift_matches_direct_evaluation() {
        let f = Poly::from_i64s(5, &[3, -1, 4, 1, -5], 20);
        let c = Padic::from_i64(7, 5, 20);
        let g = f.taylor_shift(&c);
        for y in [0, 1, 2, 13, -6] {
            let y = Padic::from_i64(y, 5, 20);
            assert!((&f.eval(&(&c + &y)) - &g.eval(&y)).is_zero());
        }
    }

    #[test]
    fn product_and_derivative() {
        let f = Poly::from_i64s(5, &[-1, 1], 10);
        let g = Poly::from_i64s(5, &[1, 1], 10);
        assert!((&(&f * &g) - &Poly::from_i64s(5, &[-1, 0, 1], 10)).is_zero());
        assert!((&(&f * &g).derivative() - &Poly::from_i64s(5, &[0, 2], 10)).is_zero());
        assert_eq!((&f * &g).degree(), Some(2));
    }
}
