//! Polynomials in t over F_q.
//!
//! Coefficients ascend; trailing zeros are stripped, so the zero polynomial
//! is the empty vector and its degree is the sentinel `None` (never an
//! ordinary integer).

use super::field::{FieldSpec, Fq};
use std::cmp::Ordering;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Fq>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: vec![] }
    }
    pub fn one() -> Poly {
        Poly { coeffs: vec![Fq::ONE] }
    }
    pub fn constant(c: Fq) -> Poly {
        if c == Fq::ZERO {
            Poly::zero()
        } else {
            Poly { coeffs: vec![c] }
        }
    }
    /// The monomial c·t^k.
    pub fn monomial(c: Fq, k: usize) -> Poly {
        if c == Fq::ZERO {
            return Poly::zero();
        }
        let mut coeffs = vec![Fq::ZERO; k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }
    pub fn t() -> Poly {
        Poly::monomial(Fq::ONE, 1)
    }

    pub fn from_coeffs(coeffs: Vec<Fq>) -> Poly {
        let mut p = Poly { coeffs };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&Fq::ZERO) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    /// Degree, or `None` for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }
    pub fn coeff(&self, i: usize) -> Fq {
        self.coeffs.get(i).copied().unwrap_or(Fq::ZERO)
    }
    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }
    pub fn leading(&self) -> Fq {
        self.coeffs.last().copied().unwrap_or(Fq::ZERO)
    }
    pub fn is_monic(&self) -> bool {
        self.leading() == Fq::ONE
    }
    /// Order of vanishing at t = 0; `None` for the zero polynomial.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != Fq::ZERO)
    }

    pub fn add(&self, other: &Poly, f: &FieldSpec) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Poly::from_coeffs(coeffs)
    }
    pub fn neg(&self, f: &FieldSpec) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect() }
    }
    pub fn sub(&self, other: &Poly, f: &FieldSpec) -> Poly {
        self.add(&other.neg(f), f)
    }
    pub fn mul(&self, other: &Poly, f: &FieldSpec) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Fq::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == Fq::ZERO {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = f.add(coeffs[i + j], f.mul(a, b));
            }
        }
        Poly::from_coeffs(coeffs)
    }
    pub fn scale(&self, c: Fq, f: &FieldSpec) -> Poly {
        if c == Fq::ZERO {
            return Poly::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect() }
    }
    /// Multiplication by t^k.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Fq::ZERO; k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { coeffs }
    }

    /// Euclidean division: (quotient, remainder) with deg r < deg d.
    pub fn divrem(&self, d: &Poly, f: &FieldSpec) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.deg().unwrap();
        let mut r = self.coeffs.clone();
        let mut q = vec![Fq::ZERO; self.coeffs.len().saturating_sub(dd)];
        let dlead_inv = f.inv(d.leading());
        while r.len() > dd {
            let lead = *r.last().unwrap();
            let k = r.len() - 1 - dd;
            if lead != Fq::ZERO {
                let c = f.mul(lead, dlead_inv);
                q[k] = c;
                for i in 0..=dd {
                    let s = f.mul(c, d.coeff(i));
                    r[k + i] = f.sub(r[k + i], s);
                }
            }
            r.pop();
        }
        (Poly::from_coeffs(q), Poly::from_coeffs(r))
    }
    pub fn rem(&self, d: &Poly, f: &FieldSpec) -> Poly {
        self.divrem(d, f).1
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly, f: &FieldSpec) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b, f);
            a = b;
            b = r;
        }
        a.monic(f)
    }
    pub fn monic(&self, f: &FieldSpec) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        self.scale(f.inv(self.leading()), f)
    }

    pub fn eval(&self, x: Fq, f: &FieldSpec) -> Fq {
        let mut acc = Fq::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = f.add(f.mul(acc, x), c);
        }
        acc
    }

    /// Deterministic ordering key: (degree, coefficients as a base-q code).
    pub fn order_key(&self) -> (usize, Vec<u16>) {
        (self.coeffs.len(), self.coeffs.iter().rev().map(|c| c.0).collect())
    }
    pub fn cmp_key(&self, other: &Poly) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }

    pub fn format(&self, f: &FieldSpec) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == Fq::ZERO {
                continue;
            }
            let cs = f.format_elem(c);
            let part = match i {
                0 => cs,
                1 if c == Fq::ONE => "t".to_string(),
                1 => format!("{cs}*t"),
                _ if c == Fq::ONE => format!("t^{i}"),
                _ => format!("{cs}*t^{i}"),
            };
            parts.push(part);
        }
        parts.join(" + ")
    }
}
