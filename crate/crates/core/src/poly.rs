//! Integer Laurent polynomials in one variable.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Laurent {
    terms: BTreeMap<i32, i64>,
}

impl Laurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(coeff: i64, exp: i32) -> Self {
        let mut p = Self::zero();
        p.add_term(coeff, exp);
        p
    }

    pub fn from_coeffs(terms: impl IntoIterator<Item = (i32, i64)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(c, e);
        }
        p
    }

    pub fn add_term(&mut self, coeff: i64, exp: i32) {
        let c = self.terms.entry(exp).or_insert(0);
        *c += coeff;
        if *c == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i32) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn eval_at_one(&self) -> i64 {
        self.terms.values().sum()
    }

    /// `p(1/x)`.
    pub fn invert(&self) -> Self {
        Self::from_coeffs(self.terms().map(|(e, c)| (-e, c)))
    }

    pub fn shift(&self, by: i32) -> Self {
        Self::from_coeffs(self.terms().map(|(e, c)| (e + by, c)))
    }

    pub fn negate(&self) -> Self {
        Self::from_coeffs(self.terms().map(|(e, c)| (e, -c)))
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.invert()
    }

    /// Equality up to multiplication by `±x^k`.
    pub fn equals_up_to_unit(&self, other: &Laurent) -> bool {
        match (self.min_degree(), other.min_degree()) {
            (None, None) => true,
            (Some(a), Some(b)) => {
                let s = other.shift(a - b);
                *self == s || *self == s.negate()
            }
            _ => false,
        }
    }

    /// Exact division by a polynomial whose lowest coefficient is ±1.
    /// Returns `None` if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Laurent) -> Option<Laurent> {
        let (dlo, dhi) = (divisor.min_degree()?, divisor.max_degree()?);
        let lead = divisor.coeff(dlo);
        if lead.abs() != 1 {
            return None;
        }
        let mut rem = self.clone();
        let mut q = Laurent::zero();
        while let Some(lo) = rem.min_degree() {
            if rem.max_degree()? - lo < dhi - dlo {
                return None;
            }
            let c = rem.coeff(lo) * lead;
            let e = lo - dlo;
            q.add_term(c, e);
            rem = rem + divisor.clone() * Laurent::monomial(-c, e);
        }
        Some(q)
    }
}

impl Add for Laurent {
    type Output = Laurent;
    fn add(mut self, rhs: Laurent) -> Laurent {
        for (e, c) in rhs.terms() {
            self.add_term(c, e);
        }
        self
    }
}

impl Mul for Laurent {
    type Output = Laurent;
    fn mul(self, rhs: Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(c1 * c2, e1 + e2);
            }
        }
        out
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let (e, c) = (*e, *c);
            let sign = if c < 0 { "-" } else { "+" };
            if i == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            match e {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != 1 {
                        write!(f, "{a}")?;
                    }
                    if e == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Symmetrized Alexander polynomial of the torus knot `T(p, q)`:
/// `(t^{pq} - 1)(t - 1) / ((t^p - 1)(t^q - 1))`, centered at degree 0.
pub fn torus_alexander(p: u32, q: u32) -> Laurent {
    let binom = |n: u32| Laurent::from_coeffs([(n as i32, 1), (0, -1)]);
    let num = binom(p * q) * binom(1);
    let den = binom(p) * binom(q);
    let quotient = num.div_exact(&den).expect("torus knot quotient is exact");
    let (lo, hi) = (
        quotient.min_degree().unwrap(),
        quotient.max_degree().unwrap(),
    );
    quotient.shift(-(lo + hi) / 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_knot_polynomials() {
        let trefoil = torus_alexander(2, 3);
        assert_eq!(trefoil, Laurent::from_coeffs([(1, 1), (0, -1), (-1, 1)]));
        let t34 = torus_alexander(3, 4);
        assert_eq!(
            t34,
            Laurent::from_coeffs([(3, 1), (2, -1), (0, 1), (-2, -1), (-3, 1)])
        );
        assert!(t34.is_symmetric());
        assert_eq!(t34.eval_at_one(), 1);
        assert_eq!(t34.to_string(), "x^3 - x^2 + 1 - x^-2 + x^-3");
    }

    #[test]
    fn unit_equivalence() {
        let p = Laurent::from_coeffs([(0, 1), (1, -3), (2, 1)]);
        assert!(p.equals_up_to_unit(&p.shift(5).negate()));
        assert!(!p.equals_up_to_unit(&(p.clone() + Laurent::monomial(1, 0))));
    }
}
