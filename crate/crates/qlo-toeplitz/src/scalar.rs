//! Exact Gaussian rationals `a + bi` with `a, b ∈ ℚ`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, Zero};

/// An element of `ℚ(i)`. Field arithmetic is exact; there is no rounding
/// anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar {
    re: BigRational,
    im: BigRational,
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Scalar {
        Scalar { re, im }
    }

    pub fn real(re: BigRational) -> Scalar {
        Scalar {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn zero() -> Scalar {
        Scalar::real(BigRational::zero())
    }

    pub fn one() -> Scalar {
        Scalar::real(BigRational::one())
    }

    pub fn i() -> Scalar {
        Scalar {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn from_integer(n: i64) -> Scalar {
        Scalar::real(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Scalar {
        Scalar::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    /// True when the imaginary part vanishes and the real part is ≥ 0.
    pub fn is_nonnegative_real(&self) -> bool {
        self.im.is_zero() && !self.re.is_negative()
    }

    pub fn conj(&self) -> Scalar {
        Scalar {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// Squared modulus `a² + b²`, a rational.
    pub fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Scalar {
        let n = self.norm_sq();
        assert!(!n.is_zero(), "division by zero scalar");
        Scalar {
            re: &self.re / &n,
            im: -&self.im / &n,
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let write_im = |f: &mut fmt::Formatter<'_>, im: &BigRational| {
            if im.is_one() {
                write!(f, "i")
            } else if (-im).is_one() {
                write!(f, "-i")
            } else {
                write!(f, "{im}*i")
            }
        };
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write_im(f, &self.im)
        } else if self.im.is_negative() {
            write!(f, "({}-", self.re)?;
            let pos = -self.im.clone();
            if pos.is_one() {
                write!(f, "i)")
            } else {
                write!(f, "{pos}*i)")
            }
        } else {
            write!(f, "({}+", self.re)?;
            write_im(f, &self.im)?;
            write!(f, ")")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_arithmetic() {
        let z = Scalar::new(
            BigRational::from_integer(2.into()),
            BigRational::from_integer(1.into()),
        );
        let w = &z * &z.inv();
        assert!(w.is_one());
        assert_eq!(z.conj().conj(), z);
        let i = Scalar::i();
        assert_eq!(&i * &i, -Scalar::one());
    }

    #[test]
    fn display_forms() {
        assert_eq!(Scalar::zero().to_string(), "0");
        assert_eq!(Scalar::from_ratio(-1, 2).to_string(), "-1/2");
        assert_eq!(Scalar::i().to_string(), "i");
        assert_eq!((&Scalar::from_integer(2) * &Scalar::i()).to_string(), "2*i");
        let z = Scalar::new(
            BigRational::new(1.into(), 2.into()),
            BigRational::from_integer((-3).into()),
        );
        assert_eq!(z.to_string(), "(1/2-3*i)");
    }
}
