//! Numeric backends.
//!
//! Every probabilistic type in this crate is generic over a [`Scalar`]. Two
//! backends ship with the crate:
//!
//! - `f64`, compared with a configurable absolute/relative tolerance;
//! - [`Rational`] (arbitrary-precision fractions), compared exactly.
//!
//! The float backend is what you want for large spaces; the rational backend
//! turns every identity in the crate into an exact, decidable check.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// Exact arbitrary-precision rational number.
pub type Rational = BigRational;

/// Default float tolerance.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Which arithmetic a computation ran in.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NumericMode {
    Float { tolerance: f64 },
    Rational,
}

impl NumericMode {
    pub fn float() -> Self {
        NumericMode::Float {
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, NumericMode::Rational)
    }
}

impl Display for NumericMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NumericMode::Float { tolerance } => write!(f, "float(tol={tolerance:e})"),
            NumericMode::Rational => write!(f, "rational"),
        }
    }
}

/// Field operations plus the comparison and conversion hooks the crate needs.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Signed + Send + Sync + 'static
{
    /// True when arithmetic is exact and `near` ignores the tolerance.
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_f64(x: f64) -> Self;

    fn to_f64(&self) -> f64;

    /// Equality up to `tol` (relative for large magnitudes). Exact for rationals.
    fn near(&self, other: &Self, tol: f64) -> bool;

    /// Principal `n`-th root of a nonnegative value.
    ///
    /// Rationals return the exact root when numerator and denominator are
    /// perfect powers (in particular for 0 and 1), and the nearest
    /// double-precision root otherwise.
    fn nth_root(&self, n: u32) -> Self;

    /// Parses `"a"`, `"a/b"` or a decimal literal.
    fn parse_text(s: &str) -> Option<Self>;

    fn mode(tol: f64) -> NumericMode {
        if Self::EXACT {
            NumericMode::Rational
        } else {
            NumericMode::Float { tolerance: tol }
        }
    }

    fn from_usize(n: usize) -> Self {
        Self::from_ratio(n as i64, 1)
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }

    fn is_near_zero(&self, tol: f64) -> bool {
        self.near(&Self::zero(), tol)
    }

    /// `Σ a_i b_i` over paired iterators.
    fn dot<'a, I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (&'a Self, &'a Self)>,
    {
        pairs
            .into_iter()
            .fold(Self::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_f64(x: f64) -> Self {
        x
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn near(&self, other: &Self, tol: f64) -> bool {
        let scale = 1f64.max(self.abs()).max(other.abs());
        (self - other).abs() <= tol * scale
    }

    fn nth_root(&self, n: u32) -> Self {
        match n {
            1 => *self,
            2 => self.sqrt(),
            _ => self.powf(1.0 / n as f64),
        }
    }

    fn parse_text(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Some((a, b)) = s.split_once('/') {
            let a: f64 = a.trim().parse().ok()?;
            let b: f64 = b.trim().parse().ok()?;
            return Some(a / b);
        }
        s.parse().ok()
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64(x: f64) -> Self {
        <BigRational as FromPrimitive>::from_f64(x).expect("finite float")
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn near(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn nth_root(&self, n: u32) -> Self {
        if n == 1 || self.is_zero() || self.is_one() {
            return self.clone();
        }
        let num = self.numer().nth_root(n);
        let den = self.denom().nth_root(n);
        if num.pow(n) == *self.numer() && den.pow(n) == *self.denom() {
            return BigRational::new(num, den);
        }
        <Self as Scalar>::from_f64(Scalar::to_f64(self).powf(1.0 / n as f64))
    }

    // Accumulates over a running denominator and reduces once at the end;
    // on dyadic spaces every term shares it, so no gcd is taken per term.
    fn dot<'a, I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (&'a Self, &'a Self)>,
    {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for (a, b) in pairs {
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let tn = a.numer() * b.numer();
            let td = a.denom() * b.denom();
            if td == den {
                num += tn;
            } else {
                let g = den.gcd(&td);
                let (scale_acc, scale_term) = (&td / &g, &den / &g);
                num = num * scale_acc + tn * scale_term;
                den = den / &g * &td;
            }
        }
        BigRational::new(num, den)
    }

    fn parse_text(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Some((a, b)) = s.split_once('/') {
            let a: BigInt = a.trim().parse().ok()?;
            let b: BigInt = b.trim().parse().ok()?;
            if b.is_zero() {
                return None;
            }
            return Some(BigRational::new(a, b));
        }
        if let Ok(i) = s.parse::<BigInt>() {
            return Some(BigRational::from_integer(i));
        }
        // Decimal literals are read as the exact decimal fraction.
        let (int_part, frac_part) = s.split_once('.')?;
        let digits = format!("{int_part}{frac_part}");
        let num: BigInt = digits.parse().ok()?;
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        Some(BigRational::new(num, den))
    }
}

/// Sum of a slice of scalars.
pub fn sum<S: Scalar>(xs: &[S]) -> S {
    xs.iter().fold(S::zero(), |acc, x| acc + x.clone())
}
