//! Exact arithmetic in the rational function field `Q(q)`.
//!
//! A [`RatFunc`] is stored as `q^shift * num / den` where neither `num` nor
//! `den` is divisible by `q`. Together with the usual reduction (coprime,
//! coprime contents, positive leading denominator coefficient) this makes the
//! representation canonical, so `==` is equality of field elements.
//!
//! Laurent monomials, which dominate the structure constants of the sphere,
//! therefore carry a denominator of `1` and never reach the polynomial gcd.

mod int;
mod poly;

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

pub use int::Int;
pub use poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at q = {at}")]
    Pole { at: String },
}

/// An element of `Q(q)` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    shift: i64,
    num: Poly,
    den: Poly,
}

/// The four field operations, for callers that dispatch on an operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn rf_arith(op: ArithOp, a: &RatFunc, b: &RatFunc) -> Result<RatFunc, FieldError> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(b)?,
    })
}

impl RatFunc {
    pub fn zero() -> RatFunc {
        RatFunc {
            shift: 0,
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> RatFunc {
        RatFunc::from_int(1)
    }

    pub fn from_int(n: i64) -> RatFunc {
        RatFunc::from_integer(Int::from(n))
    }

    pub fn from_integer(n: Int) -> RatFunc {
        if n.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            shift: 0,
            num: Poly::constant(n),
            den: Poly::one(),
        }
    }

    /// The rational number `n / d`.
    pub fn from_ratio(n: i64, d: i64) -> Result<RatFunc, FieldError> {
        if d == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(RatFunc::normalize(
            0,
            Poly::constant(Int::from(n)),
            Poly::constant(Int::from(d)),
        ))
    }

    /// `q^i` for any integer `i`.
    pub fn q_power(i: i64) -> RatFunc {
        RatFunc {
            shift: i,
            num: Poly::one(),
            den: Poly::one(),
        }
    }

    pub fn q() -> RatFunc {
        RatFunc::q_power(1)
    }

    /// Build `num / den` from arbitrary integer polynomials.
    pub fn from_polys(num: Poly, den: Poly) -> Result<RatFunc, FieldError> {
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(RatFunc::normalize(0, num, den))
    }

    fn normalize(shift: i64, num: Poly, den: Poly) -> RatFunc {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RatFunc::zero();
        }
        let vn = num.q_valuation();
        let vd = den.q_valuation();
        let mut num = num.shift_down(vn);
        let mut den = den.shift_down(vd);
        let shift = shift + vn as i64 - vd as i64;

        if let Some(c) = den.as_constant() {
            let mut g = num.content().gcd(c);
            if c.is_negative() {
                g = -g;
            }
            let den = Poly::constant(c.div_exact(&g));
            return RatFunc {
                shift,
                num: num.div_exact_int(&g),
                den,
            };
        }

        let g = num.gcd(&den);
        if g.degree().unwrap_or(0) > 0 {
            num = num.div_exact(&g);
            den = den.div_exact(&g);
        }
        let mut c = num.content().gcd(&den.content());
        if den.lead().is_negative() {
            c = -c;
        }
        RatFunc {
            shift,
            num: num.div_exact_int(&c),
            den: den.div_exact_int(&c),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0 && self.num.is_one() && self.den.is_one()
    }

    /// Returns `i` when `self == q^i` exactly.
    pub fn detect_q_power(&self) -> Option<i64> {
        if self.num.is_one() && self.den.is_one() {
            Some(self.shift)
        } else {
            None
        }
    }

    /// Numerator as a polynomial in `q` (the `q`-power folded back in).
    pub fn numerator(&self) -> Poly {
        if self.shift > 0 {
            self.num.shift_up(self.shift as usize)
        } else {
            self.num.clone()
        }
    }

    /// Denominator as a polynomial in `q`.
    pub fn denominator(&self) -> Poly {
        if self.shift < 0 {
            self.den.shift_up(self.shift.unsigned_abs() as usize)
        } else {
            self.den.clone()
        }
    }

    /// True when the value is an integer-coefficient Laurent polynomial.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    pub fn inv(&self) -> Result<RatFunc, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let (num, den) = if self.num.lead().is_negative() {
            (self.den.neg(), self.num.neg())
        } else {
            (self.den.clone(), self.num.clone())
        };
        Ok(RatFunc {
            shift: -self.shift,
            num,
            den,
        })
    }

    pub fn checked_div(&self, other: &RatFunc) -> Result<RatFunc, FieldError> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, exp: i64) -> Result<RatFunc, FieldError> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        if base.num.is_one() && base.den.is_one() {
            return Ok(RatFunc::q_power(base.shift * exp.abs()));
        }
        let mut e = exp.unsigned_abs();
        let mut acc = RatFunc::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Exact evaluation at a rational point.
    pub fn eval_at(&self, q0: &BigRational) -> Result<BigRational, FieldError> {
        let pole = || FieldError::Pole { at: q0.to_string() };
        if self.is_zero() {
            return Ok(BigRational::zero());
        }
        let d = self.den.eval(q0);
        if d.is_zero() {
            return Err(pole());
        }
        let n = self.num.eval(q0);
        if q0.is_zero() {
            return match self.shift {
                s if s < 0 => Err(pole()),
                0 => Ok(n / d),
                _ => Ok(BigRational::zero()),
            };
        }
        let mut scale = BigRational::one();
        let step = if self.shift >= 0 {
            q0.clone()
        } else {
            q0.recip()
        };
        for _ in 0..self.shift.unsigned_abs() {
            scale *= &step;
        }
        Ok(n / d * scale)
    }

    pub fn eval_at_int(&self, q0: i64) -> Result<BigRational, FieldError> {
        self.eval_at(&BigRational::from_integer(BigInt::from(q0)))
    }

    fn add_impl(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let shift = self.shift.min(other.shift);
        let na = self.num.shift_up((self.shift - shift) as usize);
        let nb = other.num.shift_up((other.shift - shift) as usize);
        if self.den == other.den {
            let num = na.add(&nb);
            if self.den.is_one() {
                if num.is_zero() {
                    return RatFunc::zero();
                }
                let v = num.q_valuation();
                return RatFunc {
                    shift: shift + v as i64,
                    num: num.shift_down(v),
                    den: Poly::one(),
                };
            }
            return RatFunc::normalize(shift, num, self.den.clone());
        }
        if let (Some(ca), Some(cb)) = (self.den.as_constant(), other.den.as_constant()) {
            let g = ca.gcd(cb);
            let fa = cb.div_exact(&g);
            let fb = ca.div_exact(&g);
            let den = Poly::constant(&fa * ca);
            let num = na.scale(&fa).add(&nb.scale(&fb));
            return RatFunc::normalize(shift, num, den);
        }
        let num = na.mul(&other.den).add(&nb.mul(&self.den));
        RatFunc::normalize(shift, num, self.den.mul(&other.den))
    }

    fn mul_impl(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero();
        }
        let shift = self.shift + other.shift;
        if self.den.is_one() && other.den.is_one() {
            return RatFunc {
                shift,
                num: self.num.mul(&other.num),
                den: Poly::one(),
            };
        }
        RatFunc::normalize(shift, self.num.mul(&other.num), self.den.mul(&other.den))
    }

    /// Canonical text form, e.g. `(-q^2+1)/q^3` or `1/q`.
    pub fn render(&self) -> String {
        let num = self.numerator();
        let den = self.denominator();
        if den.is_one() {
            return num.render();
        }
        let n = if num.term_count() > 1 {
            format!("({})", num.render())
        } else {
            num.render()
        };
        let den_bare = den.term_count() == 1 && (den.degree() == Some(0) || den.lead().is_one());
        let d = if den_bare {
            den.render()
        } else {
            format!("({})", den.render())
        };
        format!("{n}/{d}")
    }

    /// Whether [`render`](Self::render) needs parentheses when used as a factor.
    pub fn is_atomic_text(&self) -> bool {
        self.den.is_one()
            && self.shift >= 0
            && self.num.term_count() == 1
            && !self.num.lead().is_negative()
    }
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({})", self.render())
    }
}

impl FromStr for RatFunc {
    type Err = crate::expr::ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        crate::expr::parse_scalar(s)
    }
}

impl From<i64> for RatFunc {
    fn from(n: i64) -> Self {
        RatFunc::from_int(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $imp:ident) => {
        impl<'a> $trait<&'a RatFunc> for &'a RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: &'a RatFunc) -> RatFunc {
                self.$imp(rhs)
            }
        }
        impl $trait<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: RatFunc) -> RatFunc {
                (&self).$imp(&rhs)
            }
        }
        impl<'a> $trait<&'a RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: &'a RatFunc) -> RatFunc {
                (&self).$imp(rhs)
            }
        }
        impl<'a> $trait<RatFunc> for &'a RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: RatFunc) -> RatFunc {
                self.$imp(&rhs)
            }
        }
    };
}

impl RatFunc {
    fn sub_impl(&self, other: &RatFunc) -> RatFunc {
        self.add_impl(&-other)
    }

    /// Panics on a zero divisor; use [`checked_div`](Self::checked_div) otherwise.
    fn div_impl(&self, other: &RatFunc) -> RatFunc {
        self.checked_div(other).expect("RatFunc division by zero")
    }
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, sub_impl);
forward_binop!(Mul, mul, mul_impl);
forward_binop!(Div, div, div_impl);

impl Neg for &RatFunc {
    type Output = RatFunc;

    fn neg(self) -> RatFunc {
        RatFunc {
            shift: self.shift,
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;

    fn neg(mut self) -> RatFunc {
        self.num = self.num.neg();
        self
    }
}

impl AddAssign<&RatFunc> for RatFunc {
    fn add_assign(&mut self, rhs: &RatFunc) {
        *self = self.add_impl(rhs);
    }
}

impl SubAssign<&RatFunc> for RatFunc {
    fn sub_assign(&mut self, rhs: &RatFunc) {
        *self = self.sub_impl(rhs);
    }
}

impl MulAssign<&RatFunc> for RatFunc {
    fn mul_assign(&mut self, rhs: &RatFunc) {
        *self = self.mul_impl(rhs);
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }

    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc::one()
    }
}
