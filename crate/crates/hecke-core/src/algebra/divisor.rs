//! Places of the projective line over F_q, divisors of rational functions,
//! and the uniformizer construction with divisor y − deg(y)·X.

use super::field::{FieldSpec, Fq};
use super::poly::Poly;
use super::ratfunc::RatFunc;
use crate::error::Error;
use std::collections::BTreeMap;

/// A closed point of the projective line: the distinguished degree-one place
/// X with uniformizer t, a finite place given by a monic irreducible
/// polynomial ≠ t, or the place at infinity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Place {
    X,
    Finite(Poly),
    Infinity,
}

impl Place {
    pub fn degree(&self) -> usize {
        match self {
            Place::X | Place::Infinity => 1,
            Place::Finite(p) => p.deg().expect("finite place with zero polynomial"),
        }
    }

    /// Validated constructor for a finite place.
    pub fn finite(p: Poly, f: &FieldSpec) -> Result<Place, Error> {
        if p == Poly::t() {
            return Ok(Place::X);
        }
        if !p.is_monic() || !is_irreducible(&p, f) {
            return Err(Error::BadPlace);
        }
        Ok(Place::Finite(p))
    }

    fn order_key(&self) -> (u8, usize, Vec<u16>) {
        match self {
            Place::X => (0, 1, vec![]),
            Place::Finite(p) => (1, p.deg().unwrap(), p.order_key().1),
            Place::Infinity => (2, 1, vec![]),
        }
    }

    pub fn format(&self, f: &FieldSpec) -> String {
        match self {
            Place::X => "t".to_string(),
            Place::Finite(p) => p.format(f),
            Place::Infinity => "inf".to_string(),
        }
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Place {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

/// A divisor: a finite formal sum of places with integer multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Divisor {
    support: BTreeMap<Place, i64>,
}

impl Divisor {
    pub fn new() -> Divisor {
        Divisor::default()
    }
    pub fn add_place(&mut self, place: Place, mult: i64) {
        if mult == 0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.support.entry(place) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += mult;
                if *e.get() == 0 {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(mult);
            }
        }
    }
    pub fn support(&self) -> &BTreeMap<Place, i64> {
        &self.support
    }
    pub fn multiplicity(&self, place: &Place) -> i64 {
        self.support.get(place).copied().unwrap_or(0)
    }
    pub fn degree(&self) -> i64 {
        self.support.iter().map(|(p, &m)| m * p.degree() as i64).sum()
    }
    pub fn plus(&self, other: &Divisor) -> Divisor {
        let mut out = self.clone();
        for (p, &m) in &other.support {
            out.add_place(p.clone(), m);
        }
        out
    }

    pub fn format(&self, f: &FieldSpec) -> String {
        if self.support.is_empty() {
            return "0".to_string();
        }
        self.support
            .iter()
            .map(|(p, m)| format!("{:+}·({})", m, p.format(f)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Irreducibility over F_q by trial division against all monic polynomials
/// of degree up to deg/2.
pub fn is_irreducible(p: &Poly, f: &FieldSpec) -> bool {
    let d = match p.deg() {
        None | Some(0) => return false,
        Some(d) => d,
    };
    if d == 1 {
        return true;
    }
    let q = f.q();
    for deg in 1..=d / 2 {
        let count = q.pow(deg as u32);
        for code in 0..count {
            let mut coeffs = Vec::with_capacity(deg + 1);
            let mut c = code;
            for _ in 0..deg {
                coeffs.push(f.elem(c % q));
                c /= q;
            }
            coeffs.push(Fq::ONE);
            let div = Poly::from_coeffs(coeffs);
            if p.rem(&div, f).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Factors a nonzero polynomial into monic irreducibles (with the leading
/// constant dropped). Trial division in increasing degree; whatever is left
/// after removing all factors of degree ≤ deg/2 is itself irreducible.
pub fn factor_monic(p: &Poly, f: &FieldSpec) -> Vec<(Poly, u32)> {
    assert!(!p.is_zero());
    let mut rest = p.monic(f);
    let mut out: Vec<(Poly, u32)> = Vec::new();
    let q = f.q();
    // One pass per degree extracts every factor of that degree, so by the
    // time degree k is scanned any degree-k divisor is irreducible.
    let mut deg = 1usize;
    while rest.deg().unwrap() > 0 {
        if deg > rest.deg().unwrap() / 2 {
            out.push((rest.clone(), 1));
            break;
        }
        let count = q.pow(deg as u32);
        for code in 0..count {
            if rest.deg().unwrap() < deg {
                break;
            }
            let mut coeffs = Vec::with_capacity(deg + 1);
            let mut c = code;
            for _ in 0..deg {
                coeffs.push(f.elem(c % q));
                c /= q;
            }
            coeffs.push(Fq::ONE);
            let cand = Poly::from_coeffs(coeffs);
            let mut mult = 0u32;
            loop {
                let (quo, rem) = rest.divrem(&cand, f);
                if rem.is_zero() && !quo.is_zero() {
                    mult += 1;
                    rest = quo;
                } else {
                    break;
                }
            }
            if mult > 0 {
                out.push((cand, mult));
            }
        }
        deg += 1;
    }
    out
}

/// The full divisor of a nonzero rational function over the projective line.
/// Finite places come from factoring numerator and denominator; the
/// multiplicity at infinity is deg(den) − deg(num), so the total degree is 0.
pub fn divisor_of(g: &RatFunc, f: &FieldSpec) -> Result<Divisor, Error> {
    if g.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut div = Divisor::new();
    for (p, m) in factor_monic(g.num(), f) {
        let place = if p == Poly::t() { Place::X } else { Place::Finite(p) };
        div.add_place(place, m as i64);
    }
    for (p, m) in factor_monic(g.den(), f) {
        let place = if p == Poly::t() { Place::X } else { Place::Finite(p) };
        div.add_place(place, -(m as i64));
    }
    let vinf = g.den().deg().unwrap() as i64 - g.num().deg().unwrap() as i64;
    div.add_place(Place::Infinity, vinf);
    debug_assert_eq!(div.degree(), 0);
    Ok(div)
}

/// The uniformizer p(t)/t^d for a finite place y = (p(t)) of degree d,
/// p ≠ t. Its divisor is exactly y − d·X (post-checked), so it is a unit at
/// every other place including infinity.
pub fn uniformizer_for(y: &Place, f: &FieldSpec) -> Result<RatFunc, Error> {
    let p = match y {
        Place::Finite(p) => p,
        _ => return Err(Error::BadPlace),
    };
    let d = p.deg().unwrap();
    let u = RatFunc::new(p.clone(), Poly::monomial(Fq::ONE, d), f);
    let div = divisor_of(&u, f)?;
    let mut expected = Divisor::new();
    expected.add_place(y.clone(), 1);
    expected.add_place(Place::X, -(d as i64));
    debug_assert_eq!(div, expected, "uniformizer divisor must be y - d·X");
    Ok(u)
}
