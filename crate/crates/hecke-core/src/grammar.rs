//! Text grammars: polynomials and rational functions in t, matrices,
//! vertex labels, and rational functions in λ for eigenform seeds.
//!
//! Polynomial entries are sums of terms `c*t^k` with integer coefficients
//! (reduced mod p) for prime q, or `g^j` powers of the field generator for
//! extension fields. Whitespace is ignored and `-` is allowed. Matrix
//! entries may be ratios `p/q` and may use negative exponents (`t^-3`).

use crate::algebra::{FieldSpec, Fq, Poly, RatFunc};
use crate::error::Error;
use crate::hecke::GraphVertex;
use crate::lambda::{LambdaPoly, LambdaScalar};
use crate::matrix::Mat2;
use crate::reduction::{RamVertex, UnramVertex};
use num_bigint::BigInt;
use num_rational::BigRational;

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Cursor<'a> {
        Cursor { chars: s.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0, src: s }
    }
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }
    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at position {} in {:?}", self.pos, self.src))
    }
    fn at_digit(&self) -> bool {
        matches!(self.peek(), Some(c) if c.is_ascii_digit())
    }
    fn uint(&mut self) -> Result<u64, Error> {
        let start = self.pos;
        while self.at_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a number"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err("number out of range"))
    }
    fn sint(&mut self) -> Result<i64, Error> {
        let neg = self.eat('-');
        let n = self.uint()? as i64;
        Ok(if neg { -n } else { n })
    }
}

/// One field element: an integer (reduced mod p) or `g`, `g^j` for the
/// generator of an extension field.
pub fn parse_fq(s: &str, f: &FieldSpec) -> Result<Fq, Error> {
    let mut cur = Cursor::new(s);
    let v = fq_atom(&mut cur, f)?;
    if cur.peek().is_some() {
        return Err(cur.err("trailing input"));
    }
    Ok(v)
}

fn fq_atom(cur: &mut Cursor, f: &FieldSpec) -> Result<Fq, Error> {
    if cur.eat('g') {
        let j = if cur.eat('^') { cur.uint()? } else { 1 };
        return Ok(f.pow(f.generator(), j));
    }
    let neg = cur.eat('-');
    let n = cur.uint()? as i64;
    let v = f.from_int(n);
    Ok(if neg { f.neg(v) } else { v })
}

/// A term c, t^k, or c*t^k (k possibly negative), as a rational function.
fn term(cur: &mut Cursor, f: &FieldSpec) -> Result<RatFunc, Error> {
    let mut coef = Fq::ONE;
    let mut have_coef = false;
    if matches!(cur.peek(), Some(c) if c.is_ascii_digit() || c == 'g') {
        coef = fq_atom(cur, f)?;
        have_coef = true;
        if !cur.eat('*') && cur.peek() == Some('t') {
            // implicit product like "2t" is accepted
        }
    }
    if cur.eat('t') {
        let k = if cur.eat('^') { cur.sint()? } else { 1 };
        Ok(RatFunc::t_pow(k).scale(coef, f))
    } else if have_coef {
        Ok(RatFunc::constant(coef))
    } else {
        Err(cur.err("expected a term"))
    }
}

/// A sum of signed terms, optionally parenthesized.
fn term_sum(cur: &mut Cursor, f: &FieldSpec) -> Result<RatFunc, Error> {
    if cur.eat('(') {
        let inner = term_sum(cur, f)?;
        if !cur.eat(')') {
            return Err(cur.err("expected )"));
        }
        return Ok(inner);
    }
    let mut acc;
    let neg = cur.eat('-');
    let first = term(cur, f)?;
    acc = if neg { first.neg(f) } else { first };
    loop {
        if cur.eat('+') {
            let t = term(cur, f)?;
            acc = acc.add(&t, f);
        } else if cur.eat('-') {
            let t = term(cur, f)?;
            acc = acc.sub(&t, f);
        } else {
            break;
        }
    }
    Ok(acc)
}

/// A matrix entry: a term sum, optionally divided by another term sum.
fn entry(cur: &mut Cursor, f: &FieldSpec) -> Result<RatFunc, Error> {
    let num = term_sum(cur, f)?;
    if cur.eat('/') {
        let den = term_sum(cur, f)?;
        if den.is_zero() {
            return Err(cur.err("division by zero"));
        }
        Ok(num.div(&den, f))
    } else {
        Ok(num)
    }
}

/// A polynomial in t (no division, no negative exponents).
pub fn parse_poly(s: &str, f: &FieldSpec) -> Result<Poly, Error> {
    let r = parse_ratfunc(s, f)?;
    if r.den().deg() != Some(0) {
        return Err(Error::Parse(format!("{s:?} is not a polynomial")));
    }
    Ok(r.num().clone())
}

/// A rational function in t.
pub fn parse_ratfunc(s: &str, f: &FieldSpec) -> Result<RatFunc, Error> {
    let mut cur = Cursor::new(s);
    let v = entry(&mut cur, f)?;
    if cur.peek().is_some() {
        return Err(cur.err("trailing input"));
    }
    Ok(v)
}

/// A 2×2 matrix: four entries separated by `,` within rows and `;` between
/// rows, e.g. `t^-3, (1+t)/t ; 0, 1`.
pub fn parse_mat2(s: &str, f: &FieldSpec) -> Result<Mat2, Error> {
    let rows: Vec<&str> = s.split(';').collect();
    if rows.len() != 2 {
        return Err(Error::Parse("matrix needs two rows separated by ;".into()));
    }
    let mut entries = Vec::with_capacity(4);
    for row in rows {
        let cells: Vec<&str> = row.split(',').collect();
        if cells.len() != 2 {
            return Err(Error::Parse("each matrix row needs two entries".into()));
        }
        for cell in cells {
            entries.push(parse_ratfunc(cell, f)?);
        }
    }
    let d = entries.pop().unwrap();
    let c = entries.pop().unwrap();
    let b = entries.pop().unwrap();
    let a = entries.pop().unwrap();
    Ok(Mat2::new(a, b, c, d))
}

/// A vertex label: `c_3`, `c'_0`, or `c'_{3,[1:0]}`.
pub fn parse_vertex(s: &str, f: &FieldSpec) -> Result<GraphVertex, Error> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some(rest) = s.strip_prefix("c'_") {
        if rest == "0" {
            return Ok(GraphVertex::Ram(RamVertex::Base));
        }
        let body = rest
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("bad vertex label {s}")))?;
        let (n_str, w_str) = body
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("bad vertex label {s}")))?;
        let n: u32 = n_str
            .parse()
            .map_err(|_| Error::Parse(format!("bad vertex index in {s}")))?;
        if n == 0 {
            return Err(Error::Parse("labelled vertex needs index >= 1".into()));
        }
        let w = crate::export::parse_proj(w_str, f)?;
        return Ok(GraphVertex::Ram(RamVertex::Pair(n, w)));
    }
    if let Some(rest) = s.strip_prefix("c_") {
        let n: u32 = rest
            .parse()
            .map_err(|_| Error::Parse(format!("bad vertex index in {s}")))?;
        return Ok(GraphVertex::Unram(UnramVertex(n)));
    }
    Err(Error::Parse(format!("bad vertex label {s}")))
}

/// A rational function in λ with integer coefficients, e.g. `(λ^2+1)/(λ-2)`.
/// `l` and `L` are accepted for λ.
pub fn parse_lambda_scalar(s: &str) -> Result<LambdaScalar, Error> {
    let normalized: String = s
        .chars()
        .map(|c| if c == 'λ' || c == 'L' { 'l' } else { c })
        .filter(|c| !c.is_whitespace())
        .collect();
    let mut cur = Cursor::new(&normalized);
    let num = lambda_sum(&mut cur)?;
    let out = if cur.eat('/') {
        let den = lambda_sum(&mut cur)?;
        if den.is_zero() {
            return Err(cur.err("division by zero"));
        }
        LambdaScalar::new(num, den)
    } else {
        LambdaScalar::new(num, LambdaPoly::one())
    };
    if cur.peek().is_some() {
        return Err(cur.err("trailing input"));
    }
    Ok(out)
}

fn lambda_sum(cur: &mut Cursor) -> Result<LambdaPoly, Error> {
    if cur.eat('(') {
        let inner = lambda_sum(cur)?;
        if !cur.eat(')') {
            return Err(cur.err("expected )"));
        }
        return Ok(inner);
    }
    let mut acc = LambdaPoly::zero();
    let mut sign = if cur.eat('-') { -1i64 } else { 1 };
    loop {
        let t = lambda_term(cur, sign)?;
        acc = acc.add(&t);
        if cur.eat('+') {
            sign = 1;
        } else if cur.eat('-') {
            sign = -1;
        } else {
            break;
        }
    }
    Ok(acc)
}

fn lambda_term(cur: &mut Cursor, sign: i64) -> Result<LambdaPoly, Error> {
    let mut coef: i64 = 1;
    let mut have_coef = false;
    if cur.at_digit() {
        coef = cur.uint()? as i64;
        have_coef = true;
        cur.eat('*');
    }
    let coef = BigRational::from_integer(BigInt::from(sign * coef));
    if cur.eat('l') {
        let k = if cur.eat('^') { cur.uint()? as usize } else { 1 };
        let mut coeffs = vec![BigRational::from_integer(BigInt::from(0)); k + 1];
        coeffs[k] = coef;
        Ok(LambdaPoly::from_coeffs(coeffs))
    } else if have_coef {
        Ok(LambdaPoly::constant(coef))
    } else {
        Err(cur.err("expected a λ term"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_field;
    use crate::algebra::{Fq, ProjPoint};

    #[test]
    fn poly_and_ratfunc() {
        let f = make_field(3, 1).unwrap();
        let p = parse_poly("2*t^2 + t - 1", &f).unwrap();
        assert_eq!(p.coeff(0), f.elem(2));
        assert_eq!(p.coeff(1), f.elem(1));
        assert_eq!(p.coeff(2), f.elem(2));
        let r = parse_ratfunc("(1+t)/t", &f).unwrap();
        assert_eq!(r.valuation_at_t().unwrap(), -1);
        let neg = parse_ratfunc("t^-3", &f).unwrap();
        assert_eq!(neg, RatFunc::t_pow(-3));
        assert!(parse_poly("1/t", &f).is_err());
    }

    #[test]
    fn generator_notation() {
        let f = make_field(2, 2).unwrap();
        let g = f.generator();
        assert_eq!(parse_fq("g", &f).unwrap(), g);
        assert_eq!(parse_fq("g^2", &f).unwrap(), f.mul(g, g));
        let p = parse_poly("g*t + 1", &f).unwrap();
        assert_eq!(p.coeff(1), g);
    }

    #[test]
    fn matrix_entry_grammar() {
        let f = make_field(2, 1).unwrap();
        let m = parse_mat2("t^-3, 0 ; 0, 1", &f).unwrap();
        assert_eq!(m, Mat2::p_n(3));
        let m2 = parse_mat2("t^-1, (1+t)/t ; 0, 1", &f).unwrap();
        assert_eq!(m2.b.valuation_at_t().unwrap(), -1);
        assert!(parse_mat2("1,2,3", &f).is_err());
    }

    #[test]
    fn vertex_labels() {
        let f = make_field(2, 1).unwrap();
        assert_eq!(
            parse_vertex("c_4", &f).unwrap(),
            GraphVertex::Unram(UnramVertex(4))
        );
        assert_eq!(
            parse_vertex("c'_0", &f).unwrap(),
            GraphVertex::Ram(RamVertex::Base)
        );
        assert_eq!(
            parse_vertex("c'_{3,[1:0]}", &f).unwrap(),
            GraphVertex::Ram(RamVertex::Pair(3, ProjPoint::Finite(Fq::ZERO)))
        );
        assert_eq!(
            parse_vertex("c'_{2,[0:1]}", &f).unwrap(),
            GraphVertex::Ram(RamVertex::Pair(2, ProjPoint::Infinity))
        );
        // Round trip through the display form.
        for s in ["c_7", "c'_0", "c'_{1,[1:1]}", "c'_{5,[0:1]}"] {
            let v = parse_vertex(s, &f).unwrap();
            assert_eq!(parse_vertex(&v.format(&f), &f).unwrap(), v);
        }
    }

    #[test]
    fn lambda_expressions() {
        let lam = LambdaScalar::lambda();
        assert_eq!(parse_lambda_scalar("λ").unwrap(), lam);
        assert_eq!(parse_lambda_scalar("l^2").unwrap(), lam.mul(&lam));
        assert_eq!(
            parse_lambda_scalar("(l^2 - 1)/(l - 1)").unwrap(),
            lam.add(&LambdaScalar::one())
        );
        assert_eq!(parse_lambda_scalar("3/4").unwrap().to_string(), "(3)/(4)");
        assert_eq!(parse_lambda_scalar("-2").unwrap(), LambdaScalar::from_int(-2));
        assert!(parse_lambda_scalar("t").is_err());
    }
}
