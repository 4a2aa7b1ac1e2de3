//! The finite field F_q with q = p^e, and the projective line over it.
//!
//! An element is stored as its index in `0..q`, encoding the coordinate
//! vector (c_0, ..., c_{e-1}) in the power basis of the modulus root as the
//! base-p integer Σ c_i p^i. All operations are table lookups; the tables are
//! filled once at construction by polynomial arithmetic mod the modulus.

use crate::error::Error;
use std::fmt;

/// An element of F_q, identified by its index in the ambient [`FieldSpec`].
///
/// The index encodes the power-basis coordinates; `FieldSpec::coords`
/// recovers them. Elements only make sense together with their field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fq(pub u16);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);
}

/// A concrete model of F_q: the prime p, the exponent e, and the monic
/// irreducible modulus of degree e over F_p that defines the extension.
///
/// Invariants established at construction: p is prime, the modulus is
/// irreducible (trial division against every lower-degree monic), and
/// q = p^e.
#[derive(Clone)]
pub struct FieldSpec {
    p: u64,
    e: u32,
    q: u64,
    /// Modulus coefficients c_0..c_e over F_p, ascending, c_e = 1.
    modulus: Vec<u16>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    /// Smallest element (by index) of multiplicative order q-1.
    generator: u16,
    /// dlog[a] = j for a = generator^j, a ≠ 0; dlog[0] is unused.
    dlog: Vec<u16>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}
impl Eq for FieldSpec {}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Coefficient vectors over F_p, used only while building the tables.
fn fp_poly_mul(a: &[u16], b: &[u16], p: u64) -> Vec<u16> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p;
        }
    }
    out.into_iter().map(|c| c as u16).collect()
}

fn fp_poly_rem(a: &[u16], m: &[u16], p: u64) -> Vec<u16> {
    // m monic of degree d; returns a mod m with d coefficients.
    let d = m.len() - 1;
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    while r.len() > d {
        let lead = *r.last().unwrap() % p;
        let k = r.len() - 1 - d;
        if lead != 0 {
            for i in 0..=d {
                let sub = lead * m[i] as u64 % p;
                r[k + i] = (r[k + i] + p - sub) % p;
            }
        }
        r.pop();
    }
    r.resize(d.max(1), 0);
    r.into_iter().map(|c| c as u16).collect()
}

/// True iff the monic polynomial `m` over F_p has no monic divisor of lower
/// positive degree. Trial division over all lower-degree monics.
fn fp_is_irreducible(m: &[u16], p: u64) -> bool {
    let d = m.len() - 1;
    if d == 0 {
        return false;
    }
    for deg in 1..d {
        let count = p.pow(deg as u32);
        for code in 0..count {
            let mut div = Vec::with_capacity(deg + 1);
            let mut c = code;
            for _ in 0..deg {
                div.push((c % p) as u16);
                c /= p;
            }
            div.push(1);
            let r = fp_poly_rem(m, &div, p);
            if r.iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

/// Constructs F_q for q = p^e, with the smallest monic irreducible modulus of
/// degree e over F_p. "Smallest" compares the base-p integer Σ c_i p^i of the
/// non-leading coefficients, so the choice is deterministic across runs.
pub fn make_field(p: u64, e: u32) -> Result<FieldSpec, Error> {
    if !is_prime(p) {
        return Err(Error::NonPrime(p));
    }
    assert!(e >= 1, "extension degree must be at least 1");
    let q = p.checked_pow(e).expect("field cardinality overflow");
    assert!(q <= 1024, "field cardinality {q} too large for table-based arithmetic");

    let modulus: Vec<u16> = if e == 1 {
        vec![0, 1] // t itself; arithmetic is plain mod-p
    } else {
        let mut found = None;
        'outer: for code in 0..q {
            let mut m = Vec::with_capacity(e as usize + 1);
            let mut c = code;
            for _ in 0..e {
                m.push((c % p) as u16);
                c /= p;
            }
            m.push(1);
            if fp_is_irreducible(&m, p) {
                found = Some(m);
                break 'outer;
            }
        }
        found.expect("an irreducible polynomial of every degree exists over F_p")
    };

    let qs = q as usize;
    let e_us = e as usize;
    let decode = |idx: u64| -> Vec<u16> {
        let mut v = Vec::with_capacity(e_us);
        let mut c = idx;
        for _ in 0..e {
            v.push((c % p) as u16);
            c /= p;
        }
        v
    };
    let encode = |v: &[u16]| -> u16 {
        let mut idx = 0u64;
        for i in (0..e_us).rev() {
            idx = idx * p + v.get(i).copied().unwrap_or(0) as u64;
        }
        idx as u16
    };

    let mut add = vec![0u16; qs * qs];
    let mut mul = vec![0u16; qs * qs];
    let mut neg = vec![0u16; qs];
    for a in 0..q {
        let va = decode(a);
        let vn: Vec<u16> = va.iter().map(|&c| ((p - c as u64) % p) as u16).collect();
        neg[a as usize] = encode(&vn);
        for b in 0..q {
            let vb = decode(b);
            let vs: Vec<u16> = (0..e_us)
                .map(|i| ((va[i] as u64 + vb[i] as u64) % p) as u16)
                .collect();
            add[(a * q + b) as usize] = encode(&vs);
            let prod = fp_poly_mul(&va, &vb, p);
            let red = fp_poly_rem(&prod, &modulus, p);
            mul[(a * q + b) as usize] = encode(&red);
        }
    }

    let mut inv = vec![0u16; qs];
    for a in 1..qs {
        for b in 1..qs {
            if mul[a * qs + b] == 1 {
                inv[a] = b as u16;
                break;
            }
        }
        assert!(inv[a] != 0, "nonzero element without inverse; modulus not irreducible");
    }

    // Multiplicative generator: smallest index of order q-1.
    let mut generator = 0u16;
    'gen: for a in 1..qs {
        let mut x = a;
        for ord in 1..qs {
            if x == 1 {
                if ord == qs - 1 {
                    generator = a as u16;
                    break 'gen;
                }
                break;
            }
            x = mul[x * qs + a] as usize;
        }
    }
    assert!(generator != 0 || q == 2, "no multiplicative generator found");
    if q == 2 {
        generator = 1;
    }

    let mut dlog = vec![0u16; qs];
    let mut x = 1usize;
    for j in 0..(qs - 1) {
        dlog[x] = j as u16;
        x = mul[x * qs + generator as usize] as usize;
    }

    Ok(FieldSpec { p, e, q, modulus, add, mul, neg, inv, generator, dlog })
}

impl FieldSpec {
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    /// The cardinality q = p^e.
    pub fn q(&self) -> u64 {
        self.q
    }
    /// Modulus coefficients c_0..c_e over F_p, ascending; c_e = 1.
    pub fn modulus(&self) -> &[u16] {
        &self.modulus
    }
    pub fn generator(&self) -> Fq {
        Fq(self.generator)
    }

    pub fn elem(&self, idx: u64) -> Fq {
        debug_assert!(idx < self.q);
        Fq(idx as u16)
    }
    /// The image of an integer under Z → F_q (lands in the prime field).
    pub fn from_int(&self, n: i64) -> Fq {
        let r = n.rem_euclid(self.p as i64) as u16;
        Fq(r)
    }
    /// Power-basis coordinates of `a` over F_p, length e.
    pub fn coords(&self, a: Fq) -> Vec<u16> {
        let mut v = Vec::with_capacity(self.e as usize);
        let mut c = a.0 as u64;
        for _ in 0..self.e {
            v.push((c % self.p) as u16);
            c /= self.p;
        }
        v
    }
    pub fn from_coords(&self, coords: &[u16]) -> Fq {
        let mut idx = 0u64;
        for i in (0..self.e as usize).rev() {
            idx = idx * self.p + coords.get(i).map_or(0, |&c| c as u64 % self.p);
        }
        Fq(idx as u16)
    }

    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        Fq(self.add[a.0 as usize * self.q as usize + b.0 as usize])
    }
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        Fq(self.mul[a.0 as usize * self.q as usize + b.0 as usize])
    }
    pub fn neg(&self, a: Fq) -> Fq {
        Fq(self.neg[a.0 as usize])
    }
    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: Fq) -> Fq {
        assert!(a.0 != 0, "inverse of zero");
        Fq(self.inv[a.0 as usize])
    }
    pub fn div(&self, a: Fq, b: Fq) -> Fq {
        self.mul(a, self.inv(b))
    }
    pub fn pow(&self, a: Fq, n: u64) -> Fq {
        let mut acc = Fq::ONE;
        let mut base = a;
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// Discrete log of a nonzero element with respect to the fixed generator.
    pub fn dlog(&self, a: Fq) -> u16 {
        assert!(a.0 != 0, "dlog of zero");
        self.dlog[a.0 as usize]
    }

    /// All elements in index order: 0, 1, ..., q-1.
    pub fn elems(&self) -> impl Iterator<Item = Fq> {
        (0..self.q).map(|i| Fq(i as u16))
    }

    /// Enumeration position used for deterministic vertex ordering:
    /// 0 ↦ 0 and g^j ↦ j+1.
    pub fn order_index(&self, a: Fq) -> u64 {
        if a.0 == 0 {
            0
        } else {
            self.dlog(a) as u64 + 1
        }
    }

    /// Renders an element: plain integer for prime q, powers `g^j` of the
    /// generator otherwise (matching the input grammar).
    pub fn format_elem(&self, a: Fq) -> String {
        if self.e == 1 {
            return format!("{}", a.0);
        }
        if a.0 == 0 {
            return "0".to_string();
        }
        match self.dlog(a) {
            0 => "1".to_string(),
            1 => "g".to_string(),
            j => format!("g^{j}"),
        }
    }
}

/// A point of P^1(F_q): either [1 : a] or [0 : 1]. Exactly q+1 values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProjPoint {
    /// [1 : a]
    Finite(Fq),
    /// [0 : 1]
    Infinity,
}

impl ProjPoint {
    /// Normalizes a nonzero row (c, d) to [1 : c·d⁻¹] when d ≠ 0 and to
    /// [0 : 1] when d = 0. Two rows normalize equally iff c·d' = c'·d.
    pub fn normalize(field: &FieldSpec, c: Fq, d: Fq) -> Result<ProjPoint, Error> {
        if c == Fq::ZERO && d == Fq::ZERO {
            return Err(Error::ZeroRow);
        }
        if d == Fq::ZERO {
            Ok(ProjPoint::Infinity)
        } else {
            Ok(ProjPoint::Finite(field.mul(c, field.inv(d))))
        }
    }

    /// Deterministic ordering position: [1:0], [1:1], [1:g], ..., [1:g^{q-2}],
    /// then [0:1] last.
    pub fn order_index(&self, field: &FieldSpec) -> u64 {
        match self {
            ProjPoint::Finite(a) => field.order_index(*a),
            ProjPoint::Infinity => field.q(),
        }
    }

    /// All q+1 points in the deterministic order.
    pub fn all(field: &FieldSpec) -> Vec<ProjPoint> {
        let mut pts = vec![ProjPoint::Finite(Fq::ZERO)];
        let mut x = Fq::ONE;
        for _ in 0..(field.q() - 1) {
            pts.push(ProjPoint::Finite(x));
            x = field.mul(x, field.generator());
        }
        pts.push(ProjPoint::Infinity);
        pts
    }

    pub fn format(&self, field: &FieldSpec) -> String {
        match self {
            ProjPoint::Finite(a) => format!("[1:{}]", field.format_elem(*a)),
            ProjPoint::Infinity => "[0:1]".to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_modulus_is_t() {
        let f = make_field(2, 1).unwrap();
        assert_eq!(f.q(), 2);
        assert_eq!(f.modulus(), &[0, 1]);
    }

    #[test]
    fn f4_modulus_is_the_unique_irreducible_quadratic() {
        // Exhaustive: over F_2 the monic quadratics are t^2, t^2+1, t^2+t,
        // t^2+t+1, and only the last has no root, hence no linear factor.
        let f = make_field(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        for code in 0..4u16 {
            let m = [code & 1, (code >> 1) & 1, 1];
            let irreducible = super::fp_is_irreducible(&m, 2);
            assert_eq!(irreducible, m == [1, 1, 1]);
        }
    }

    #[test]
    fn non_prime_p_is_rejected() {
        assert_eq!(make_field(4, 1).unwrap_err(), Error::NonPrime(4));
        assert_eq!(make_field(1, 1).unwrap_err(), Error::NonPrime(1));
    }

    #[test]
    fn field_axioms_exhaustive_small_q() {
        // Associativity, commutativity, distributivity, inverses for q ≤ 9.
        for (p, e) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)] {
            let f = make_field(p, e).unwrap();
            let q = f.q();
            for a in f.elems() {
                assert_eq!(f.add(a, f.neg(a)), Fq::ZERO);
                if a != Fq::ZERO {
                    assert_eq!(f.mul(a, f.inv(a)), Fq::ONE);
                }
                for b in f.elems() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elems() {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(
                            f.mul(a, f.add(b, c)),
                            f.add(f.mul(a, b), f.mul(a, c))
                        );
                    }
                }
            }
            let g = f.generator();
            let mut seen = std::collections::HashSet::new();
            let mut x = Fq::ONE;
            for _ in 0..q - 1 {
                seen.insert(x);
                x = f.mul(x, g);
            }
            assert_eq!(seen.len() as u64, q - 1, "generator has full order");
        }
    }

    #[test]
    fn proj_normalization_matches_cross_ratio_rule() {
        // proj(c,d) == proj(c',d') ⇔ c·d' == c'·d, exhaustively for q ≤ 5.
        for (p, e) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
            let f = make_field(p, e).unwrap();
            let rows: Vec<(Fq, Fq)> = f
                .elems()
                .flat_map(|c| f.elems().map(move |d| (c, d)))
                .filter(|&(c, d)| c != Fq::ZERO || d != Fq::ZERO)
                .collect();
            for &(c, d) in &rows {
                for &(c2, d2) in &rows {
                    let same = ProjPoint::normalize(&f, c, d).unwrap()
                        == ProjPoint::normalize(&f, c2, d2).unwrap();
                    assert_eq!(same, f.mul(c, d2) == f.mul(c2, d));
                }
            }
            assert_eq!(ProjPoint::all(&f).len() as u64, f.q() + 1);
        }
    }

    #[test]
    fn proj_examples() {
        let f = make_field(3, 1).unwrap();
        assert_eq!(
            ProjPoint::normalize(&f, Fq::ZERO, Fq::ONE).unwrap(),
            ProjPoint::Finite(Fq::ZERO)
        );
        assert_eq!(
            ProjPoint::normalize(&f, Fq::ONE, Fq::ZERO).unwrap(),
            ProjPoint::Infinity
        );
        let a = f.elem(2);
        assert_eq!(
            ProjPoint::normalize(&f, a, Fq::ONE).unwrap(),
            ProjPoint::Finite(a)
        );
        assert_eq!(
            ProjPoint::normalize(&f, Fq::ZERO, Fq::ZERO).unwrap_err(),
            Error::ZeroRow
        );
    }
}
