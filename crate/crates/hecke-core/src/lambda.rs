//! Exact arithmetic in Q(λ): rational functions in a generic eigenvalue λ
//! with rational coefficients.
//!
//! The eigenvalue is never specialized during elimination; dimension
//! statements that hold for every nonzero λ are captured by computing over
//! this field. Numeric specialization is available for spot checks.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Polynomial in λ with exact rational coefficients, ascending, trailing
/// zeros stripped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaPoly {
    coeffs: Vec<BigRational>,
}

impl LambdaPoly {
    pub fn zero() -> Self {
        LambdaPoly { coeffs: vec![] }
    }
    pub fn one() -> Self {
        LambdaPoly { coeffs: vec![BigRational::one()] }
    }
    pub fn lambda() -> Self {
        LambdaPoly { coeffs: vec![BigRational::zero(), BigRational::one()] }
    }
    pub fn constant(c: BigRational) -> Self {
        let mut p = LambdaPoly { coeffs: vec![c] };
        p.normalize();
        p
    }
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut p = LambdaPoly { coeffs };
        p.normalize();
        p
    }
    fn normalize(&mut self) {
        while self.coeffs.last().map(|c| c.is_zero()) == Some(true) {
            self.coeffs.pop();
        }
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    pub fn deg(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }
    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }
    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        LambdaPoly::from_coeffs((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
    pub fn neg(&self) -> Self {
        LambdaPoly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return LambdaPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        LambdaPoly::from_coeffs(coeffs)
    }
    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return LambdaPoly::zero();
        }
        LambdaPoly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.deg().unwrap();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd)];
        let lead_inv = d.leading().recip();
        while r.len() > dd {
            let lead = r.last().unwrap().clone();
            let k = r.len() - 1 - dd;
            if !lead.is_zero() {
                let c = lead * &lead_inv;
                for i in 0..=dd {
                    let s = &c * &d.coeffs[i];
                    r[k + i] -= s;
                }
                q[k] = c;
            }
            r.pop();
        }
        (LambdaPoly::from_coeffs(q), LambdaPoly::from_coeffs(r))
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            // Monic remainders keep the rational coefficients small.
            let bm = b.scale(&b.leading().recip());
            let r = a.divrem(&bm).1;
            a = bm;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.scale(&a.leading().recip())
        }
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Renders with integer coefficients (the caller scales beforehand).
    fn format_int(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let ci = c.to_integer();
            let abs = ci.abs();
            let body = match i {
                0 => format!("{abs}"),
                1 if abs.is_one() => "λ".to_string(),
                1 => format!("{abs}*λ"),
                _ if abs.is_one() => format!("λ^{i}"),
                _ => format!("{abs}*λ^{i}"),
            };
            if parts.is_empty() {
                parts.push(if ci.is_negative() { format!("-{body}") } else { body });
            } else {
                parts.push(if ci.is_negative() {
                    format!(" - {body}")
                } else {
                    format!(" + {body}")
                });
            }
        }
        parts.concat()
    }
}

/// An element of Q(λ) in reduced form: gcd(num, den) = 1 and den monic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaScalar {
    num: LambdaPoly,
    den: LambdaPoly,
}

impl LambdaScalar {
    pub fn zero() -> Self {
        LambdaScalar { num: LambdaPoly::zero(), den: LambdaPoly::one() }
    }
    pub fn one() -> Self {
        LambdaScalar { num: LambdaPoly::one(), den: LambdaPoly::one() }
    }
    /// The generic eigenvalue λ itself.
    pub fn lambda() -> Self {
        LambdaScalar { num: LambdaPoly::lambda(), den: LambdaPoly::one() }
    }
    pub fn from_int(n: i64) -> Self {
        LambdaScalar {
            num: LambdaPoly::constant(BigRational::from_integer(BigInt::from(n))),
            den: LambdaPoly::one(),
        }
    }
    pub fn from_rational(c: BigRational) -> Self {
        LambdaScalar { num: LambdaPoly::constant(c), den: LambdaPoly::one() }
    }
    pub fn new(num: LambdaPoly, den: LambdaPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return LambdaScalar::zero();
        }
        let g = num.gcd(&den);
        let (num, den) = if g.deg() == Some(0) {
            (num, den)
        } else {
            (num.divrem(&g).0, den.divrem(&g).0)
        };
        let lead = den.leading().recip();
        LambdaScalar { num: num.scale(&lead), den: den.scale(&lead) }
    }

    pub fn num(&self) -> &LambdaPoly {
        &self.num
    }
    pub fn den(&self) -> &LambdaPoly {
        &self.den
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        LambdaScalar::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }
    pub fn neg(&self) -> Self {
        LambdaScalar { num: self.num.neg(), den: self.den.clone() }
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    pub fn mul(&self, o: &Self) -> Self {
        LambdaScalar::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }
    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        LambdaScalar::new(self.den.clone(), self.num.clone())
    }
    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }
    pub fn scale_int(&self, n: i64) -> Self {
        self.mul(&LambdaScalar::from_int(n))
    }

    /// Evaluation at λ = x; `None` when the denominator vanishes there.
    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x) / d)
    }
}

impl fmt::Display for LambdaScalar {
    /// Reduced ratio of integer-coefficient polynomials in λ: numerator and
    /// denominator are scaled by the lcm of coefficient denominators over
    /// the gcd of numerators, with a positive denominator leading
    /// coefficient.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Common scale factor turning both parts integral and primitive.
        let mut denom_lcm = BigInt::one();
        let mut numer_gcd = BigInt::zero();
        for c in self.num.coeffs.iter().chain(self.den.coeffs.iter()) {
            if c.is_zero() {
                continue;
            }
            denom_lcm = num_integer::lcm(denom_lcm, c.denom().clone());
        }
        let scaled = |p: &LambdaPoly| -> Vec<BigInt> {
            p.coeffs
                .iter()
                .map(|c| (c * BigRational::from_integer(denom_lcm.clone())).to_integer())
                .collect()
        };
        let ni = scaled(&self.num);
        let di = scaled(&self.den);
        for c in ni.iter().chain(di.iter()) {
            numer_gcd = num_integer::gcd(numer_gcd, c.clone());
        }
        if numer_gcd.is_zero() {
            numer_gcd = BigInt::one();
        }
        let lead_sign = di.last().map(|c| c.is_negative()).unwrap_or(false);
        let adjust = if lead_sign { -numer_gcd } else { numer_gcd };
        let to_poly = |v: Vec<BigInt>| {
            LambdaPoly::from_coeffs(
                v.into_iter()
                    .map(|c| BigRational::from_integer(c / &adjust))
                    .collect(),
            )
        };
        let np = to_poly(ni);
        let dp = to_poly(di);
        if dp == LambdaPoly::one() {
            write!(f, "{}", np.format_int())
        } else {
            write!(f, "({})/({})", np.format_int(), dp.format_int())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam() -> LambdaScalar {
        LambdaScalar::lambda()
    }

    #[test]
    fn field_identities() {
        let a = lam().add(&LambdaScalar::from_int(3));
        let b = lam().mul(&lam()).sub(&LambdaScalar::from_int(9));
        let c = b.div(&a); // (λ²-9)/(λ+3) = λ-3
        assert_eq!(c, lam().sub(&LambdaScalar::from_int(3)));
        assert_eq!(a.mul(&a.inv()), LambdaScalar::one());
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn eval_specializes() {
        let s = lam().mul(&lam()).div(&lam().add(&LambdaScalar::one()));
        let two = BigRational::from_integer(BigInt::from(2));
        assert_eq!(
            s.eval(&two).unwrap(),
            BigRational::new(BigInt::from(4), BigInt::from(3))
        );
        let minus_one = BigRational::from_integer(BigInt::from(-1));
        assert_eq!(s.eval(&minus_one), None);
    }

    #[test]
    fn display_is_integer_reduced() {
        // λ/2 / (λ/4 + 1) reduces to (2*λ)/(λ + 4).
        let half = LambdaScalar::from_rational(BigRational::new(
            BigInt::from(1),
            BigInt::from(2),
        ));
        let quarter = LambdaScalar::from_rational(BigRational::new(
            BigInt::from(1),
            BigInt::from(4),
        ));
        let s = lam().mul(&half).div(&lam().mul(&quarter).add(&LambdaScalar::one()));
        assert_eq!(s.to_string(), "(2*λ)/(λ + 4)");
        assert_eq!(LambdaScalar::from_int(-3).to_string(), "-3");
    }
}
