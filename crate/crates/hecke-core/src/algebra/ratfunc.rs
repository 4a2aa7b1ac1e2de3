//! Rational functions in t over F_q, in canonical form.
//!
//! Canonical form: denominator monic and coprime to the numerator; zero is
//! 0/1. Every element of the function field F_q(t) has a unique such
//! representation, so equality is structural.
//!
//! Local data at the place of t (valuations, Laurent coefficients) is
//! extracted on demand by exact long division, so no series truncation ever
//! enters the arithmetic.

use super::field::{FieldSpec, Fq};
use super::poly::Poly;
use crate::error::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn zero() -> RatFunc {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }
    pub fn one() -> RatFunc {
        RatFunc { num: Poly::one(), den: Poly::one() }
    }
    pub fn constant(c: Fq) -> RatFunc {
        RatFunc { num: Poly::constant(c), den: Poly::one() }
    }
    pub fn from_poly(p: Poly) -> RatFunc {
        RatFunc { num: p, den: Poly::one() }
    }
    /// t^k for k of either sign.
    pub fn t_pow(k: i64) -> RatFunc {
        if k >= 0 {
            RatFunc::from_poly(Poly::monomial(Fq::ONE, k as usize))
        } else {
            RatFunc { num: Poly::one(), den: Poly::monomial(Fq::ONE, (-k) as usize) }
        }
    }

    pub fn new(num: Poly, den: Poly, f: &FieldSpec) -> RatFunc {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc::zero();
        }
        let g = num.gcd(&den, f);
        let (mut num, mut den) = if g.deg() == Some(0) {
            (num, den)
        } else {
            (num.divrem(&g, f).0, den.divrem(&g, f).0)
        };
        let lead = den.leading();
        if lead != Fq::ONE {
            let inv = f.inv(lead);
            num = num.scale(inv, f);
            den = den.scale(inv, f);
        }
        RatFunc { num, den }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }
    pub fn den(&self) -> &Poly {
        &self.den
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &RatFunc, f: &FieldSpec) -> RatFunc {
        let num = self.num.mul(&other.den, f).add(&other.num.mul(&self.den, f), f);
        let den = self.den.mul(&other.den, f);
        RatFunc::new(num, den, f)
    }
    pub fn neg(&self, f: &FieldSpec) -> RatFunc {
        RatFunc { num: self.num.neg(f), den: self.den.clone() }
    }
    pub fn sub(&self, other: &RatFunc, f: &FieldSpec) -> RatFunc {
        self.add(&other.neg(f), f)
    }
    pub fn mul(&self, other: &RatFunc, f: &FieldSpec) -> RatFunc {
        RatFunc::new(self.num.mul(&other.num, f), self.den.mul(&other.den, f), f)
    }
    pub fn inv(&self, f: &FieldSpec) -> RatFunc {
        assert!(!self.is_zero(), "inverse of zero");
        RatFunc::new(self.den.clone(), self.num.clone(), f)
    }
    pub fn div(&self, other: &RatFunc, f: &FieldSpec) -> RatFunc {
        self.mul(&other.inv(f), f)
    }
    pub fn scale(&self, c: Fq, f: &FieldSpec) -> RatFunc {
        if c == Fq::ZERO {
            return RatFunc::zero();
        }
        RatFunc { num: self.num.scale(c, f), den: self.den.clone() }
    }

    /// t-adic valuation: the order of vanishing at t = 0, negative at a pole.
    pub fn valuation_at_t(&self) -> Result<i64, Error> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(self.num.valuation().unwrap() as i64 - self.den.valuation().unwrap() as i64)
    }

    /// True iff the function has no pole at t = 0 (lies in the local ring).
    pub fn is_integral_at_t(&self) -> bool {
        self.is_zero() || self.valuation_at_t().unwrap() >= 0
    }

    /// True iff the function is a polynomial in t⁻¹, i.e. lies in F_q[t⁻¹].
    /// In canonical form that means den = t^k and deg num ≤ k.
    pub fn is_poly_in_t_inv(&self) -> bool {
        if self.is_zero() {
            return true;
        }
        let k = match self.den.deg() {
            Some(k) => k,
            None => return false,
        };
        self.den.valuation() == Some(k) && self.num.deg().unwrap() <= k
    }

    /// Evaluation at t = 0; requires integrality there.
    pub fn eval_at_zero(&self, f: &FieldSpec) -> Fq {
        if self.is_zero() {
            return Fq::ZERO;
        }
        assert!(self.is_integral_at_t(), "pole at t = 0");
        let d0 = self.den.coeff(0);
        // den coprime to num and t | num if val > 0, so d0 ≠ 0 unless the
        // valuation bookkeeping is broken.
        debug_assert!(d0 != Fq::ZERO);
        f.mul(self.num.coeff(0), f.inv(d0))
    }

    /// Coefficient of t^i in the t-adic Laurent expansion, by exact long
    /// division of the numerator by the denominator. The zero function
    /// returns 0 for every i.
    pub fn series_coeff(&self, i: i64, f: &FieldSpec) -> Fq {
        if self.is_zero() {
            return Fq::ZERO;
        }
        let v = self.valuation_at_t().unwrap();
        if i < v {
            return Fq::ZERO;
        }
        self.series_prefix(i, f).pop().unwrap()
    }

    /// Laurent coefficients (a_v, ..., a_n) for v = val(self) up to t^n;
    /// empty when n < v. Standard unit-series long division.
    pub fn series_prefix(&self, n: i64, f: &FieldSpec) -> Vec<Fq> {
        assert!(!self.is_zero());
        let v = self.valuation_at_t().unwrap();
        if n < v {
            return vec![];
        }
        let count = (n - v + 1) as usize;
        // Strip t-powers so both parts become units at t = 0.
        let nv = self.num.valuation().unwrap();
        let dv = self.den.valuation().unwrap();
        let num_u: Vec<Fq> = (0..count).map(|i| self.num.coeff(nv + i)).collect();
        let den_u: Vec<Fq> = (0..count).map(|i| self.den.coeff(dv + i)).collect();
        let d0_inv = f.inv(den_u[0]);
        let mut out = Vec::with_capacity(count);
        for k in 0..count {
            let mut acc = num_u[k];
            for j in 0..k {
                acc = f.sub(acc, f.mul(out[j], den_u[k - j]));
            }
            out.push(f.mul(acc, d0_inv));
        }
        out
    }

    /// The Laurent part Σ_{v ≤ i ≤ hi} a_i t^i of the expansion at t = 0,
    /// as an exact rational function.
    pub fn laurent_part_up_to(&self, hi: i64, f: &FieldSpec) -> RatFunc {
        if self.is_zero() {
            return RatFunc::zero();
        }
        let v = self.valuation_at_t().unwrap();
        if hi < v {
            return RatFunc::zero();
        }
        let coeffs = self.series_prefix(hi, f);
        let mut acc = RatFunc::zero();
        for (k, &c) in coeffs.iter().enumerate() {
            if c != Fq::ZERO {
                acc = acc.add(&RatFunc::t_pow(v + k as i64).scale(c, f), f);
            }
        }
        acc
    }

    pub fn format(&self, f: &FieldSpec) -> String {
        if self.den == Poly::one() {
            self.num.format(f)
        } else {
            format!("({})/({})", self.num.format(f), self.den.format(f))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_field;

    fn t() -> RatFunc {
        RatFunc::t_pow(1)
    }

    #[test]
    fn valuation_examples() {
        let f = make_field(2, 1).unwrap();
        assert_eq!(RatFunc::t_pow(2).valuation_at_t().unwrap(), 2);
        // (t^2+t+1)/t^2: unit numerator over a double zero.
        let num = Poly::from_coeffs(vec![Fq::ONE, Fq::ONE, Fq::ONE]);
        let g = RatFunc::new(num, Poly::monomial(Fq::ONE, 2), &f);
        assert_eq!(g.valuation_at_t().unwrap(), -2);
        let h = RatFunc::from_poly(Poly::from_coeffs(vec![Fq::ONE, Fq::ONE]));
        assert_eq!(h.valuation_at_t().unwrap(), 0);
        assert_eq!(RatFunc::zero().valuation_at_t().unwrap_err(), Error::ZeroInput);
    }

    #[test]
    fn valuation_is_additive() {
        let f = make_field(3, 1).unwrap();
        let a = RatFunc::new(
            Poly::from_coeffs(vec![f.elem(2), Fq::ZERO, Fq::ONE]),
            Poly::monomial(Fq::ONE, 3),
            &f,
        );
        let b = RatFunc::new(
            Poly::from_coeffs(vec![Fq::ZERO, Fq::ONE, f.elem(2)]),
            Poly::from_coeffs(vec![Fq::ONE, Fq::ONE]),
            &f,
        );
        let prod = a.mul(&b, &f);
        assert_eq!(
            prod.valuation_at_t().unwrap(),
            a.valuation_at_t().unwrap() + b.valuation_at_t().unwrap()
        );
    }

    #[test]
    fn geometric_series_over_f2() {
        // 1/(1+t) = 1 + t + t^2 + t^3 + ... over F_2.
        let f = make_field(2, 1).unwrap();
        let g = RatFunc::one().div(&RatFunc::one().add(&t(), &f), &f);
        for i in 0..8 {
            assert_eq!(g.series_coeff(i, &f), Fq::ONE);
        }
        assert_eq!(RatFunc::t_pow(2).series_coeff(2, &f), Fq::ONE);
        assert_eq!(RatFunc::t_pow(2).series_coeff(0, &f), Fq::ZERO);
    }

    #[test]
    fn series_prefix_reproduces_function_mod_t_pow() {
        // Σ_{i≤N} a_i t^i agrees with f modulo t^{N+1}: the difference has
        // valuation > N. Checked by exact subtraction.
        let f = make_field(3, 1).unwrap();
        let g = RatFunc::new(
            Poly::from_coeffs(vec![f.elem(1), f.elem(2), f.elem(1)]),
            Poly::from_coeffs(vec![f.elem(2), f.elem(1), Fq::ZERO, Fq::ONE]),
            &f,
        );
        for n in 0..10 {
            let part = g.laurent_part_up_to(n, &f);
            let diff = g.sub(&part, &f);
            if !diff.is_zero() {
                assert!(diff.valuation_at_t().unwrap() > n);
            }
        }
    }
}
