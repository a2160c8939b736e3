//! Dense polynomials with exact rational coefficients.
//!
//! Fixed-point equations of rational maps are cleared to this form before
//! root finding; keeping coefficients as exact rationals means clearing,
//! composition and Newton-polygon data never lose a digit.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::padic::{rational_valuation, PAdic};

/// Polynomial over Q with `coeffs[i]` the coefficient of x^i.
/// Trailing zero coefficients are trimmed; the zero polynomial is `[]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QpPoly {
    coeffs: Vec<BigRational>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// x^e for possibly negative e (x nonzero when e < 0).
pub fn rat_pow(x: &BigRational, e: i64) -> BigRational {
    x.pow(i32::try_from(e).expect("exponent out of range"))
}

impl QpPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> QpPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QpPoly { coeffs }
    }

    pub fn zero() -> QpPoly {
        QpPoly { coeffs: vec![] }
    }

    pub fn constant(c: BigRational) -> QpPoly {
        QpPoly::new(vec![c])
    }

    pub fn monomial(c: BigRational, n: usize) -> QpPoly {
        let mut v = vec![BigRational::zero(); n + 1];
        v[n] = c;
        QpPoly::new(v)
    }

    pub fn x() -> QpPoly {
        QpPoly::monomial(BigRational::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &QpPoly) -> QpPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        QpPoly::new(out)
    }

    pub fn sub(&self, other: &QpPoly) -> QpPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> QpPoly {
        QpPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn mul(&self, other: &QpPoly) -> QpPoly {
        if self.is_zero() || other.is_zero() {
            return QpPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QpPoly::new(out)
    }

    pub fn scale(&self, c: &BigRational) -> QpPoly {
        QpPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: usize) -> QpPoly {
        let mut acc = QpPoly::constant(BigRational::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self) -> QpPoly {
        if self.coeffs.len() <= 1 {
            return QpPoly::zero();
        }
        QpPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Horner evaluation with p-adic arithmetic; coefficients are converted
    /// at the precision of `x`.
    pub fn eval_padic(&self, x: &PAdic) -> Result<PAdic> {
        let p = x.prime();
        let prec = x.precision();
        let mut acc = PAdic::zero(p, prec);
        for c in self.coeffs.iter().rev() {
            let ck = PAdic::from_rational(c, p, prec)?;
            acc = match acc.mul(x).add(&ck) {
                Ok(v) => v,
                // a cancelled partial sum is an exact-to-precision zero here;
                // continuing with exact zero only strengthens later digits
                Err(Error::PrecisionExhausted(_)) => PAdic::zero(p, prec),
                Err(e) => return Err(e),
            };
        }
        Ok(acc)
    }

    /// Substitute x -> num/den and clear the denominator: returns the
    /// polynomial sum_i c_i * num^i * den^(d-i) where d = deg(self).
    pub fn compose_rational_function(&self, num: &QpPoly, den: &QpPoly) -> QpPoly {
        let d = match self.degree() {
            None => return QpPoly::zero(),
            Some(d) => d,
        };
        let mut acc = QpPoly::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = num.pow(i).mul(&den.pow(d - i)).scale(c);
            acc = acc.add(&term);
        }
        acc
    }

    /// Candidate valuations of roots in Q_p: the negated integer slopes of
    /// the lower Newton polygon of the coefficient valuations.
    pub fn newton_polygon_valuations(&self, p: u64) -> Vec<i64> {
        let pts: Vec<(i64, i64)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter_map(|(i, c)| rational_valuation(c, p).map(|v| (i as i64, v)))
            .collect();
        if pts.len() < 2 {
            return vec![];
        }
        // lower convex hull, left to right
        let mut hull: Vec<(i64, i64)> = Vec::new();
        for &pt in &pts {
            while hull.len() >= 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                // keep b only if it is strictly below segment a->pt
                if (b.1 - a.1) * (pt.0 - a.0) >= (pt.1 - a.1) * (b.0 - a.0) {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(pt);
        }
        let mut vals = Vec::new();
        for w in hull.windows(2) {
            let (x0, y0) = w[0];
            let (x1, y1) = w[1];
            let dy = y1 - y0;
            let dx = x1 - x0;
            if dy % dx == 0 {
                let slope = dy / dx;
                let v = -slope;
                if !vals.contains(&v) {
                    vals.push(v);
                }
            }
        }
        vals.sort_unstable();
        vals
    }
}
