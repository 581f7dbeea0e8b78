//! Dense univariate polynomials over the integers.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use smallvec::SmallVec;

use super::int::Int;

type Coeffs = SmallVec<[Int; 4]>;

/// A polynomial in `q` with integer coefficients, stored low degree first
/// without trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Coeffs,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly {
            coeffs: Coeffs::new(),
        }
    }

    pub fn one() -> Poly {
        Poly::constant(Int::ONE)
    }

    pub fn constant(c: Int) -> Poly {
        let mut p = Poly {
            coeffs: Coeffs::new(),
        };
        if !c.is_zero() {
            p.coeffs.push(c);
        }
        p
    }

    /// `c * q^k`.
    pub fn monomial(c: Int, k: usize) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = Coeffs::with_capacity(k + 1);
        coeffs.extend(std::iter::repeat_n(Int::ZERO, k));
        coeffs.push(c);
        Poly { coeffs }
    }

    pub fn from_coeffs<I: IntoIterator<Item = Int>>(it: I) -> Poly {
        let mut p = Poly {
            coeffs: it.into_iter().collect(),
        };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Int::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> &Int {
        self.coeffs.last().unwrap_or(&Int::ZERO)
    }

    pub fn constant_term(&self) -> &Int {
        self.coeffs.first().unwrap_or(&Int::ZERO)
    }

    /// Constant polynomial (degree 0), excluding zero.
    pub fn as_constant(&self) -> Option<&Int> {
        if self.coeffs.len() == 1 {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// Number of nonzero coefficients.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Largest `k` with `q^k` dividing `self` (zero for the zero polynomial).
    pub fn q_valuation(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut coeffs = Coeffs::with_capacity(self.coeffs.len() + k);
        coeffs.extend(std::iter::repeat_n(Int::ZERO, k));
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Divide by `q^k`; the caller guarantees divisibility.
    pub fn shift_down(&self, k: usize) -> Poly {
        debug_assert!(k <= self.q_valuation() || self.is_zero());
        if k == 0 {
            return self.clone();
        }
        Poly {
            coeffs: self.coeffs.iter().skip(k).cloned().collect(),
        }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (slot, c) in coeffs.iter_mut().zip(short.coeffs.iter()) {
            *slot = &*slot + c;
        }
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Coeffs::with_capacity(n);
        for k in 0..n {
            let a = self.coeffs.get(k).unwrap_or(&Int::ZERO);
            let b = other.coeffs.get(k).unwrap_or(&Int::ZERO);
            coeffs.push(a - b);
        }
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.as_constant() {
            return other.scale(c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(c);
        }
        let mut coeffs: Coeffs =
            std::iter::repeat_n(Int::ZERO, self.coeffs.len() + other.coeffs.len() - 1).collect();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let prod = a * b;
                coeffs[i + j] = &coeffs[i + j] + &prod;
            }
        }
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn scale(&self, c: &Int) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Divide every coefficient by `c`, which must divide all of them.
    pub fn div_exact_int(&self, c: &Int) -> Poly {
        if c.is_one() {
            return self.clone();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a.div_exact(c)).collect(),
        }
    }

    /// Gcd of the coefficients, non-negative.
    pub fn content(&self) -> Int {
        let mut g = Int::ZERO;
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// `self / content`, with positive leading coefficient.
    pub fn primitive_part(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = self.content();
        if self.lead().is_negative() {
            c = -c;
        }
        self.div_exact_int(&c)
    }

    /// Pseudo-remainder of `self` by `divisor`.
    fn pseudo_rem(&self, divisor: &Poly) -> Poly {
        let dd = divisor
            .degree()
            .expect("pseudo-division by zero polynomial");
        let lead = divisor.lead().clone();
        let mut rem = self.clone();
        while let Some(dr) = rem.degree() {
            if dr < dd {
                break;
            }
            let factor = rem.lead().clone();
            let shifted = divisor.shift_up(dr - dd).scale(&factor);
            rem = rem.scale(&lead).sub(&shifted);
        }
        rem
    }

    /// Primitive gcd over `Q[q]`, normalized to positive leading coefficient.
    /// Returns the zero polynomial only if both inputs are zero.
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.primitive_part();
        }
        if other.is_zero() {
            return self.primitive_part();
        }
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.primitive_part(), other.primitive_part())
        } else {
            (other.primitive_part(), self.primitive_part())
        };
        loop {
            if b.degree() == Some(0) {
                return Poly::one();
            }
            let r = a.pseudo_rem(&b);
            if r.is_zero() {
                return b;
            }
            a = b;
            b = r.primitive_part();
        }
    }

    /// Exact division in `Z[q]`; the caller guarantees `divisor | self`.
    pub fn div_exact(&self, divisor: &Poly) -> Poly {
        let dd = divisor.degree().expect("division by zero polynomial");
        if dd == 0 {
            return self.div_exact_int(divisor.lead());
        }
        let lead = divisor.lead();
        let mut rem = self.clone();
        let Some(dn) = self.degree() else {
            return Poly::zero();
        };
        if dn < dd {
            debug_assert!(rem.is_zero());
            return Poly::zero();
        }
        let mut quo: Coeffs = std::iter::repeat_n(Int::ZERO, dn - dd + 1).collect();
        while let Some(dr) = rem.degree() {
            if dr < dd {
                break;
            }
            let c = rem.lead().div_exact(lead);
            rem = rem.sub(&divisor.shift_up(dr - dd).scale(&c));
            quo[dr - dd] = c;
        }
        debug_assert!(rem.is_zero(), "inexact polynomial division");
        let mut p = Poly { coeffs: quo };
        p.trim();
        p
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.to_big());
        }
        acc
    }

    pub fn eval_big(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_big();
        }
        acc
    }

    /// Render with descending powers, e.g. `-2*q^2+q-1`.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push(if neg { '-' } else { '+' });
            }
            let var = match k {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{k}"),
            };
            if var.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&var);
            } else {
                out.push_str(&format!("{mag}*{var}"));
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self.render())
    }
}
