//! Brute-force machinery at ramification exponent r: the finite equivalence
//! oracle, fiber enumeration over the unramified vertices, level-r neighbor
//! multisets, and the experimental fiber-count reports.
//!
//! A fiber element over c_n is p_n·(g_0 + g_1 t + ... + g_{r-1} t^{r-1})
//! with g_0 invertible. Two elements with the same n are equivalent iff some
//! member k of the finite truncated congruence set (matrices ≡ id mod t^r
//! with polynomial entries of degree ≤ 2(r-1)) makes
//! p_n·A·k·B⁻¹·p_n⁻¹ land in Z_x·Γ_x; that membership is decided exactly.

use crate::algebra::{FieldSpec, Fq, RatFunc};
use crate::error::Error;
use crate::hecke::at_x_reps;
use crate::matrix::{FqMat2, Mat2};
use crate::reduction::{full_reduce, membership_central_gamma};
use serde::{Deserialize, Serialize};

/// Enumeration budget for the pairwise-oracle machinery; the CLI can
/// override it via `HECKE_BUDGET`.
pub const DEFAULT_BUDGET: u64 = 100_000;

/// A lift of a level-r class candidate: p_n times a polynomial matrix of
/// degree < r with invertible constant term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelRElement {
    pub n: u32,
    /// g_0, ..., g_{r-1}; det(g_0) ≠ 0.
    pub coeffs: Vec<FqMat2>,
}

impl LevelRElement {
    pub fn new(n: u32, coeffs: Vec<FqMat2>, f: &FieldSpec) -> LevelRElement {
        assert!(!coeffs.is_empty(), "need at least the constant coefficient");
        assert!(coeffs[0].det(f) != Fq::ZERO, "constant term must be invertible");
        LevelRElement { n, coeffs }
    }
    /// The polynomial part g_0 + g_1 t + ... as a matrix over F_q(t).
    pub fn poly_part(&self, f: &FieldSpec) -> Mat2 {
        Mat2::from_fq_poly(&self.coeffs, f)
    }
    /// The full representative p_n · (polynomial part).
    pub fn matrix(&self, f: &FieldSpec) -> Mat2 {
        Mat2::p_n(self.n as i64).mul(&self.poly_part(f), f)
    }
}

/// The finite truncation of the congruence subgroup at exponent r: matrices
/// ≡ id mod t^r whose entries are polynomials of degree ≤ 2(r-1). For r = 1
/// this is just the identity.
pub fn klift_enum(f: &FieldSpec, r: u32, budget: u64) -> Result<Vec<Mat2>, Error> {
    assert!(r >= 1, "ramification exponent must be >= 1");
    if r == 1 {
        return Ok(vec![Mat2::identity()]);
    }
    let q = f.q();
    let slots = (r - 1) as usize; // degrees r .. 2(r-1)
    let needed = q.pow(4 * slots as u32);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let all_m2 = FqMat2::m2(f);
    let mut out = Vec::with_capacity(needed as usize);
    let total = all_m2.len().pow(slots as u32);
    for code in 0..total {
        let mut m = Mat2::identity();
        let mut c = code;
        for slot in 0..slots {
            let coeff = &all_m2[c % all_m2.len()];
            c /= all_m2.len();
            let deg = r as usize + slot;
            let term = Mat2::from_fq(coeff).scale(&RatFunc::t_pow(deg as i64), f);
            m = Mat2::new(
                m.a.add(&term.a, f),
                m.b.add(&term.b, f),
                m.c.add(&term.c, f),
                m.d.add(&term.d, f),
            );
        }
        // det ≡ 1 mod t^r, so the constant term is 1 and m is automatically
        // invertible over O_x.
        debug_assert!(m.is_in_kx(f));
        out.push(m);
    }
    Ok(out)
}

/// Decides equivalence of two level-r elements over the same unramified
/// vertex by exhausting the finite congruence truncation. Different n are
/// never equivalent.
pub fn equivalent_at_level(
    a: &LevelRElement,
    b: &LevelRElement,
    r: u32,
    f: &FieldSpec,
    klift: &[Mat2],
) -> Result<bool, Error> {
    let _ = r;
    if a.n != b.n {
        return Ok(false);
    }
    let p = Mat2::p_n(a.n as i64);
    let p_inv = Mat2::p_n(-(a.n as i64));
    let ma = a.poly_part(f);
    let mb_inv = b.poly_part(f).inverse(f)?;
    for k in klift {
        let cand = p.mul(&ma, f).mul(k, f).mul(&mb_inv, f).mul(&p_inv, f);
        if membership_central_gamma(&cand, f)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// One equivalence class of the fiber over c_n, carrying its first-found
/// representative and the class size.
#[derive(Debug, Clone)]
pub struct FiberClass {
    pub rep: LevelRElement,
    pub size: u64,
}

/// Partitions the fiber {p_n·(g_0 + ... + g_{r-1}t^{r-1})} into equivalence
/// classes. Deterministic: candidates in enumeration order join the first
/// matching class; matching more than one class would contradict
/// transitivity of the oracle and aborts.
pub fn enumerate_fiber_classes(
    f: &FieldSpec,
    n: u32,
    r: u32,
    budget: u64,
) -> Result<Vec<FiberClass>, Error> {
    assert!(r >= 1);
    let q = f.q();
    let gl2 = FqMat2::gl2(f);
    let m2 = FqMat2::m2(f);
    let tail_slots = (r - 1) as usize;
    let needed = gl2.len() as u64 * q.pow(4 * tail_slots as u32);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let klift = klift_enum(f, r, budget)?;
    let mut classes: Vec<FiberClass> = Vec::new();
    let tail_total = m2.len().pow(tail_slots as u32);
    for g0 in &gl2 {
        for code in 0..tail_total {
            let mut coeffs = vec![*g0];
            let mut c = code;
            for _ in 0..tail_slots {
                coeffs.push(m2[c % m2.len()]);
                c /= m2.len();
            }
            let cand = LevelRElement::new(n, coeffs, f);
            let mut matched: Option<usize> = None;
            for (i, class) in classes.iter().enumerate() {
                if equivalent_at_level(&cand, &class.rep, r, f, &klift)? {
                    if let Some(prev) = matched {
                        return Err(Error::OracleInconsistency(format!(
                            "candidate matches classes {prev} and {i} over c_{n}"
                        )));
                    }
                    matched = Some(i);
                }
            }
            match matched {
                Some(i) => classes[i].size += 1,
                None => classes.push(FiberClass { rep: cand, size: 1 }),
            }
        }
    }
    Ok(classes)
}

/// Which upper-entry exponent the level-r translate matrices at t use.
/// `Derived` is t^r (selected by the disjointness check); `Printed` is the
/// t^{r-1} variant, kept available for comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepExponent {
    Derived,
    Printed,
}

impl RepExponent {
    pub fn exponent(&self, r: u32) -> i64 {
        match self {
            RepExponent::Derived => r as i64,
            RepExponent::Printed => r as i64 - 1,
        }
    }
}

/// Validates a translate-matrix variant for exponent r: each upper entry
/// must vanish mod t^r (a membership condition for the double coset) and the
/// entries must be pairwise distinct mod t^{r+1} (coset disjointness).
pub fn validate_at_x_reps(f: &FieldSpec, r: u32, variant: RepExponent) -> Result<(), Error> {
    let e = variant.exponent(r);
    let reps = at_x_reps(f, e);
    for (i, m) in reps.iter().enumerate() {
        if !m.b.is_zero() && m.b.valuation_at_t().unwrap() < r as i64 {
            return Err(Error::RepCheckFailed(format!(
                "upper entry of representative {i} is nonzero mod t^{r}"
            )));
        }
        for other in reps.iter().skip(i + 1) {
            let diff = m.b.sub(&other.b, f);
            if diff.is_zero() || diff.valuation_at_t().unwrap() > r as i64 {
                return Err(Error::RepCheckFailed(format!(
                    "representatives not distinct mod t^{}",
                    r + 1
                )));
            }
        }
    }
    Ok(())
}

/// Neighbor multiset of a level-r element, as (class representative, mult)
/// pairs. At t the translates are right multiplications by
/// [[t, a·t^r], [0,1]]; away from t they are the usual left translate
/// matrices. Each product is reduced to p_{n'}·k, the cofactor is truncated
/// mod t^r, and the truncation is classified against the enumerated fiber.
pub fn neighbors_general_r(
    f: &FieldSpec,
    v: &LevelRElement,
    r: u32,
    place_degree: Option<u32>,
    variant: RepExponent,
    budget: u64,
) -> Result<Vec<(LevelRElement, u64)>, Error> {
    let mv = v.matrix(f);
    let products: Vec<Mat2> = match place_degree {
        None => {
            validate_at_x_reps(f, r, variant)?;
            at_x_reps(f, variant.exponent(r))
                .iter()
                .map(|xi| mv.mul(xi, f))
                .collect()
        }
        Some(d) => {
            let q = f.q();
            let mut out = Vec::with_capacity(q.pow(d) as usize + 1);
            for code in 0..q.pow(d) {
                let mut coeffs = Vec::with_capacity(d as usize);
                let mut c = code;
                for _ in 0..d {
                    coeffs.push(f.elem(c % q));
                    c /= q;
                }
                let xi = Mat2::new(
                    RatFunc::t_pow(d as i64),
                    RatFunc::from_poly(crate::algebra::Poly::from_coeffs(coeffs)),
                    RatFunc::zero(),
                    RatFunc::one(),
                );
                out.push(xi.mul(&mv, f));
            }
            out.push(Mat2::diag(RatFunc::one(), RatFunc::t_pow(d as i64)).mul(&mv, f));
            out
        }
    };

    let klift = klift_enum(f, r, budget)?;
    let mut class_cache: std::collections::BTreeMap<u32, Vec<FiberClass>> = Default::default();
    let mut tally: Vec<(LevelRElement, u64)> = Vec::new();
    for m in products {
        let fac = full_reduce(&m, f)?;
        let coeffs = fac.k.series_coeffs(r as usize, f);
        let elem = LevelRElement::new(fac.n, coeffs, f);
        if !class_cache.contains_key(&fac.n) {
            let c = enumerate_fiber_classes(f, fac.n, r, budget)?;
            class_cache.insert(fac.n, c);
        }
        let classes = &class_cache[&fac.n];
        let mut found: Option<&LevelRElement> = None;
        for class in classes {
            if equivalent_at_level(&elem, &class.rep, r, f, &klift)? {
                if found.is_some() {
                    return Err(Error::OracleInconsistency(
                        "neighbor matches two fiber classes".into(),
                    ));
                }
                found = Some(&class.rep);
            }
        }
        let rep = found
            .ok_or_else(|| Error::OracleInconsistency("neighbor matches no fiber class".into()))?
            .clone();
        match tally.iter_mut().find(|(e, _)| e == &rep) {
            Some((_, c)) => *c += 1,
            None => tally.push((rep, 1)),
        }
    }
    let total: u64 = tally.iter().map(|(_, c)| c).sum();
    let expected = match place_degree {
        None => f.q(),
        Some(d) => f.q().pow(d) + 1,
    };
    assert_eq!(total, expected, "level-r row sum");
    Ok(tally)
}

/// Per-n class counts of the fibers over c_0..c_{n_max}, with the observed
/// stabilization index and the tail count. For r ≥ 2 these are experimental
/// observations, reported but never asserted.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct FiberReport {
    pub q: u64,
    pub r: u32,
    pub counts: Vec<u64>,
    pub stabilized_at: Option<u32>,
    pub tail_count: Option<u64>,
}

impl FiberReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("serialization");
        s.push('\n');
        s
    }
}

/// Computes the fiber report. r = 0 is the degenerate unramified case where
/// every fiber is a single class.
pub fn fiber_report(f: &FieldSpec, r: u32, n_max: u32, budget: u64) -> Result<FiberReport, Error> {
    let counts: Vec<u64> = if r == 0 {
        vec![1; n_max as usize + 1]
    } else {
        (0..=n_max)
            .map(|n| enumerate_fiber_classes(f, n, r, budget).map(|c| c.len() as u64))
            .collect::<Result<_, _>>()?
    };
    // Smallest m with counts constant from m through n_max; requires at
    // least two agreeing entries to call it stabilized.
    let tail = *counts.last().unwrap();
    let mut m = counts.len() - 1;
    while m > 0 && counts[m - 1] == tail {
        m -= 1;
    }
    let stabilized = if m < counts.len() - 1 { Some(m as u32) } else { None };
    Ok(FiberReport {
        q: f.q(),
        r,
        counts,
        stabilized_at: stabilized,
        tail_count: stabilized.map(|_| tail),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_field;

    #[test]
    fn klift_counts() {
        let f2 = make_field(2, 1).unwrap();
        assert_eq!(klift_enum(&f2, 1, DEFAULT_BUDGET).unwrap(), vec![Mat2::identity()]);
        assert_eq!(klift_enum(&f2, 2, DEFAULT_BUDGET).unwrap().len(), 16);
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(klift_enum(&f3, 2, DEFAULT_BUDGET).unwrap().len(), 81);
        assert!(matches!(
            klift_enum(&f3, 2, 10),
            Err(Error::BudgetExceeded { needed: 81, budget: 10 })
        ));
    }

    #[test]
    fn reflexive_and_distinct_theta() {
        let f = make_field(2, 1).unwrap();
        let klift = klift_enum(&f, 1, DEFAULT_BUDGET).unwrap();
        let id = FqMat2::identity();
        let swap = FqMat2([[Fq::ZERO, Fq::ONE], [Fq::ONE, Fq::ZERO]]);
        let a = LevelRElement::new(2, vec![id], &f);
        let b = LevelRElement::new(2, vec![swap], &f);
        assert!(equivalent_at_level(&a, &a, 1, &f, &klift).unwrap());
        assert!(!equivalent_at_level(&a, &b, 1, &f, &klift).unwrap());
        let other_n = LevelRElement::new(3, vec![id], &f);
        assert!(!equivalent_at_level(&a, &other_n, 1, &f, &klift).unwrap());
    }

    #[test]
    fn fiber_counts_r1() {
        let f = make_field(2, 1).unwrap();
        let report = fiber_report(&f, 1, 4, DEFAULT_BUDGET).unwrap();
        assert_eq!(report.counts, vec![1, 3, 3, 3, 3]);
        assert_eq!(report.stabilized_at, Some(1));
        assert_eq!(report.tail_count, Some(3));
    }

    #[test]
    fn fiber_report_r0_degenerate() {
        let f = make_field(3, 1).unwrap();
        let report = fiber_report(&f, 0, 5, DEFAULT_BUDGET).unwrap();
        assert_eq!(report.counts, vec![1; 6]);
        assert_eq!(report.stabilized_at, Some(0));
    }

    #[test]
    fn rep_validation_selects_derived_exponent() {
        let f = make_field(2, 1).unwrap();
        for r in [1u32, 2, 3] {
            assert!(validate_at_x_reps(&f, r, RepExponent::Derived).is_ok());
        }
        // The printed variant coincides at no r: at r = 1 the entries are
        // constants a (nonzero mod t), at r ≥ 2 they are nonzero mod t^r.
        for r in [1u32, 2, 3] {
            assert!(validate_at_x_reps(&f, r, RepExponent::Printed).is_err());
        }
    }
}
