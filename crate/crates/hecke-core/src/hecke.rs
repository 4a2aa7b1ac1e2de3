//! Hecke operator descriptors, coset representatives, neighbor computation,
//! and construction of the weighted directed graph of an operator.
//!
//! Vertices are the double-coset classes: c_n at the unramified level,
//! c'_0 and c'_{n,w} (w ∈ P¹(F_q)) at the level with degree-one
//! ramification. The out-neighbors of a vertex with representative R are the
//! classes of
//!
//! * [[t^{d-n}, b_0 + ... + b_{d-1}t^{d-1}], [0,1]]·ϑ_w and
//!   diag(t^{-n}, t^d)·ϑ_w for an operator attached to a degree-d place
//!   away from t (the q^d+1 translate matrices with p_n absorbed), and
//! * R·[[t, a·t], [0,1]] for the ramified operator at t itself (q matrices).
//!
//! Every target is classified by the reduction engine; equal targets merge
//! into one edge whose multiplicity is the count. Row sums are asserted:
//! q^d+1 away from t, q at t.

use crate::algebra::{is_irreducible, FieldSpec, Poly, ProjPoint, RatFunc};
use crate::error::Error;
use crate::matrix::Mat2;
use crate::reduction::{reduce_ramified1, reduce_unramified, RamVertex, UnramVertex};
use std::collections::{BTreeMap, BTreeSet};

/// Congruence level of the operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    /// Full maximal compact: level K.
    Unramified,
    /// Matrices ≡ id mod t at the place of t: level K'.
    RamifiedL1,
    /// Matrices ≡ id mod t^r at the place of t, r ≥ 2.
    GeneralR(u32),
}

/// The place the operator is attached to: the distinguished degree-one place
/// of t itself, or a place of given degree away from it. Only the degree
/// enters the computation; an explicit polynomial may be attached for
/// documentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaceSpec {
    AtX,
    DegreeD(u32),
}

/// A validated operator descriptor.
#[derive(Debug, Clone)]
pub struct OperatorDesc {
    pub field: FieldSpec,
    pub level: Level,
    pub place: PlaceSpec,
    pub place_poly: Option<Poly>,
}

impl OperatorDesc {
    pub fn new(field: FieldSpec, level: Level, place: PlaceSpec) -> Result<OperatorDesc, Error> {
        match (level, place) {
            (Level::Unramified, PlaceSpec::AtX) => {
                return Err(Error::UnsupportedDescriptor(
                    "the unramified operator at the place of t is the degree-1 case".into(),
                ))
            }
            (Level::GeneralR(r), _) if r < 2 => {
                return Err(Error::UnsupportedDescriptor(
                    "general ramification level requires r >= 2".into(),
                ))
            }
            (_, PlaceSpec::DegreeD(d)) if d < 1 => {
                return Err(Error::UnsupportedDescriptor("place degree must be >= 1".into()))
            }
            _ => {}
        }
        Ok(OperatorDesc { field, level, place, place_poly: None })
    }

    /// Attaches an explicit monic irreducible polynomial for the auxiliary
    /// place. Its degree must match; it is not used in computation.
    pub fn with_place_poly(mut self, p: Poly) -> Result<OperatorDesc, Error> {
        match self.place {
            PlaceSpec::DegreeD(d) => {
                if p == Poly::t()
                    || !p.is_monic()
                    || p.deg() != Some(d as usize)
                    || !is_irreducible(&p, &self.field)
                {
                    return Err(Error::BadPlace);
                }
            }
            PlaceSpec::AtX => return Err(Error::BadPlace),
        }
        self.place_poly = Some(p);
        Ok(self)
    }

    pub fn degree(&self) -> u32 {
        match self.place {
            PlaceSpec::AtX => 1,
            PlaceSpec::DegreeD(d) => d,
        }
    }

    /// The total out-multiplicity at every vertex: q^d+1 away from t, q at t.
    pub fn expected_row_sum(&self) -> u64 {
        match self.place {
            PlaceSpec::AtX => self.field.q(),
            PlaceSpec::DegreeD(d) => self.field.q().pow(d) + 1,
        }
    }
}

/// A vertex of either graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphVertex {
    Unram(UnramVertex),
    Ram(RamVertex),
}

impl GraphVertex {
    pub fn level_index(&self) -> u32 {
        match self {
            GraphVertex::Unram(UnramVertex(n)) => *n,
            GraphVertex::Ram(v) => v.level(),
        }
    }
    /// Deterministic sort key: level index first, then the fixed projective
    /// point order [1:0], [1:1], ..., [1:g^{q-2}], [0:1].
    pub fn order_key(&self, f: &FieldSpec) -> (u32, u64) {
        match self {
            GraphVertex::Unram(UnramVertex(n)) => (*n, 0),
            GraphVertex::Ram(RamVertex::Base) => (0, 0),
            GraphVertex::Ram(RamVertex::Pair(n, w)) => (*n, w.order_index(f)),
        }
    }
    pub fn format(&self, f: &FieldSpec) -> String {
        match self {
            GraphVertex::Unram(UnramVertex(n)) => format!("c_{n}"),
            GraphVertex::Ram(RamVertex::Base) => "c'_0".to_string(),
            GraphVertex::Ram(RamVertex::Pair(n, w)) => {
                format!("c'_{{{n},{}}}", w.format(f))
            }
        }
    }
}

/// Directed edge with positive multiplicity; at most one edge per ordered
/// pair of vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub mult: u64,
}

/// The graph of a Hecke operator out to a finite radius.
///
/// Vertices with level index < radius are complete: their full neighbor
/// multiset is present and sums to the operator degree. Vertices at or
/// beyond the radius are in `frontier` and carry no out-edges.
#[derive(Debug, Clone)]
pub struct HeckeGraph {
    pub desc: OperatorDesc,
    pub radius: u32,
    pub vertices: Vec<GraphVertex>,
    pub edges: Vec<Edge>,
    pub frontier: BTreeSet<usize>,
}

impl HeckeGraph {
    pub fn index_of(&self, v: &GraphVertex) -> Option<usize> {
        let f = &self.desc.field;
        self.vertices
            .binary_search_by(|u| u.order_key(f).cmp(&v.order_key(f)))
            .ok()
    }
    pub fn out_edges(&self, src: usize) -> &[Edge] {
        let lo = self.edges.partition_point(|e| e.src < src);
        let hi = self.edges.partition_point(|e| e.src <= src);
        &self.edges[lo..hi]
    }
    pub fn mult(&self, src: usize, dst: usize) -> u64 {
        self.out_edges(src)
            .iter()
            .find(|e| e.dst == dst)
            .map_or(0, |e| e.mult)
    }
    pub fn is_frontier(&self, idx: usize) -> bool {
        self.frontier.contains(&idx)
    }
    /// Completed vertices whose out-neighbors are all completed too; the
    /// eigen equations are imposed exactly there.
    pub fn interior(&self) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&i| {
                !self.is_frontier(i)
                    && self.out_edges(i).iter().all(|e| !self.is_frontier(e.dst))
            })
            .collect()
    }
}

/// The matrices whose right translates define the operator.
///
/// Away from t these are the q^d matrices [[t^d, Σ b_i t^i], [0,1]] together
/// with diag(1, t^d) (the translates absorb p_n when applied at a vertex);
/// at t they are the q matrices [[t, a·t^r], [0,1]] with r = 1 at the
/// degree-one ramification level.
pub fn coset_reps(desc: &OperatorDesc) -> Result<Vec<Mat2>, Error> {
    let f = &desc.field;
    let q = f.q();
    match (desc.level, desc.place) {
        (Level::Unramified | Level::RamifiedL1 | Level::GeneralR(_), PlaceSpec::DegreeD(d)) => {
            let mut reps = Vec::with_capacity(q.pow(d) as usize + 1);
            for code in 0..q.pow(d) {
                let mut coeffs = Vec::with_capacity(d as usize);
                let mut c = code;
                for _ in 0..d {
                    coeffs.push(f.elem(c % q));
                    c /= q;
                }
                reps.push(Mat2::new(
                    RatFunc::t_pow(d as i64),
                    RatFunc::from_poly(Poly::from_coeffs(coeffs)),
                    RatFunc::zero(),
                    RatFunc::one(),
                ));
            }
            reps.push(Mat2::diag(RatFunc::one(), RatFunc::t_pow(d as i64)));
            Ok(reps)
        }
        (Level::RamifiedL1, PlaceSpec::AtX) => Ok(at_x_reps(f, 1)),
        (Level::GeneralR(r), PlaceSpec::AtX) => Ok(at_x_reps(f, r as i64)),
        (Level::Unramified, PlaceSpec::AtX) => Err(Error::UnsupportedDescriptor(
            "unramified operator at the place of t".into(),
        )),
    }
}

/// [[t, a·t^r], [0,1]] for a ∈ F_q; pairwise inequivalent mod the right
/// congruence subgroup because their upper entries differ mod t^{r+1}.
pub fn at_x_reps(f: &FieldSpec, r: i64) -> Vec<Mat2> {
    f.elems()
        .map(|a| {
            Mat2::new(
                RatFunc::t_pow(1),
                RatFunc::t_pow(r).scale(a, f),
                RatFunc::zero(),
                RatFunc::one(),
            )
        })
        .collect()
}

/// The full neighbor multiset of a vertex, as (target, multiplicity) pairs
/// sorted by target. The multiplicities sum to the operator degree.
pub fn neighbors(desc: &OperatorDesc, v: &GraphVertex) -> Result<Vec<(GraphVertex, u64)>, Error> {
    let f = &desc.field;
    let q = f.q();
    let mut counts: BTreeMap<(u32, u64), (GraphVertex, u64)> = BTreeMap::new();
    let mut record = |tv: GraphVertex| {
        let key = tv.order_key(f);
        counts.entry(key).or_insert((tv, 0)).1 += 1;
    };

    match (desc.level, desc.place, v) {
        (Level::Unramified, PlaceSpec::DegreeD(d), GraphVertex::Unram(UnramVertex(n))) => {
            for m in translate_matrices(f, d, *n, None) {
                record(GraphVertex::Unram(UnramVertex(reduce_unramified(&m, f)?.n)));
            }
        }
        (Level::RamifiedL1, PlaceSpec::DegreeD(d), GraphVertex::Ram(rv)) => {
            let theta = match rv {
                RamVertex::Base => None,
                RamVertex::Pair(_, w) => Some(*w),
            };
            for m in translate_matrices(f, d, rv.level(), theta) {
                record(GraphVertex::Ram(reduce_ramified1(&m, f)?));
            }
        }
        (Level::RamifiedL1, PlaceSpec::AtX, GraphVertex::Ram(rv)) => {
            let rep = rv.representative_in(f);
            for xi in at_x_reps(f, 1) {
                let m = rep.mul(&xi, f);
                record(GraphVertex::Ram(reduce_ramified1(&m, f)?));
            }
        }
        _ => {
            return Err(Error::UnsupportedDescriptor(format!(
                "neighbors for level {:?} at {:?}",
                desc.level, desc.place
            )))
        }
    }

    let out: Vec<(GraphVertex, u64)> = counts.into_values().collect();
    let total: u64 = out.iter().map(|(_, m)| m).sum();
    let expected = desc.expected_row_sum();
    assert_eq!(total, expected, "row sum must be {expected}, got {total} (q = {q})");
    Ok(out)
}

/// The q^d+1 matrices [[t^{d-n}, Σ b_i t^i], [0,1]]·ϑ_w and
/// diag(t^{-n}, t^d)·ϑ_w.
fn translate_matrices(
    f: &FieldSpec,
    d: u32,
    n: u32,
    theta: Option<ProjPoint>,
) -> Vec<Mat2> {
    let q = f.q();
    let th = theta.map(Mat2::theta);
    let apply = |m: Mat2| match &th {
        Some(t) => m.mul(t, f),
        None => m,
    };
    let mut out = Vec::with_capacity(q.pow(d) as usize + 1);
    for code in 0..q.pow(d) {
        let mut coeffs = Vec::with_capacity(d as usize);
        let mut c = code;
        for _ in 0..d {
            coeffs.push(f.elem(c % q));
            c /= q;
        }
        out.push(apply(Mat2::new(
            RatFunc::t_pow(d as i64 - n as i64),
            RatFunc::from_poly(Poly::from_coeffs(coeffs)),
            RatFunc::zero(),
            RatFunc::one(),
        )));
    }
    out.push(apply(Mat2::diag(RatFunc::t_pow(-(n as i64)), RatFunc::t_pow(d as i64))));
    out
}

/// Canonical vertices with level index < radius, in sort order.
fn completed_vertices(desc: &OperatorDesc, radius: u32) -> Vec<GraphVertex> {
    match desc.level {
        Level::Unramified => (0..radius)
            .map(|n| GraphVertex::Unram(UnramVertex(n)))
            .collect(),
        Level::RamifiedL1 => {
            let mut out = Vec::new();
            if radius > 0 {
                out.push(GraphVertex::Ram(RamVertex::Base));
                for n in 1..radius {
                    for w in ProjPoint::all(&desc.field) {
                        out.push(GraphVertex::Ram(RamVertex::Pair(n, w)));
                    }
                }
            }
            out
        }
        Level::GeneralR(_) => vec![],
    }
}

/// Builds the graph out to the given radius: every canonical vertex with
/// level index < radius gets its full neighbor multiset; targets beyond the
/// radius enter the vertex set as frontier vertices without out-edges.
/// Output is deterministic: vertices sorted by (level, projective index),
/// edges by (src, dst).
pub fn build_graph(desc: &OperatorDesc, radius: u32) -> Result<HeckeGraph, Error> {
    if matches!(desc.level, Level::GeneralR(_)) {
        return Err(Error::UnsupportedDescriptor(
            "graphs at general ramification level use the brute-force class machinery".into(),
        ));
    }
    let f = &desc.field;
    let completed = completed_vertices(desc, radius);
    let mut vertex_set: BTreeMap<(u32, u64), GraphVertex> = BTreeMap::new();
    let base = match desc.level {
        Level::Unramified => GraphVertex::Unram(UnramVertex(0)),
        _ => GraphVertex::Ram(RamVertex::Base),
    };
    vertex_set.insert(base.order_key(f), base);
    for v in &completed {
        vertex_set.insert(v.order_key(f), *v);
    }

    let mut adjacency: Vec<(GraphVertex, Vec<(GraphVertex, u64)>)> = Vec::new();
    for v in &completed {
        let nbrs = neighbors(desc, v)?;
        for (u, _) in &nbrs {
            vertex_set.insert(u.order_key(f), *u);
        }
        adjacency.push((*v, nbrs));
    }

    let vertices: Vec<GraphVertex> = vertex_set.into_values().collect();
    let index: BTreeMap<(u32, u64), usize> = vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.order_key(f), i))
        .collect();

    let mut edges = Vec::new();
    for (v, nbrs) in adjacency {
        let src = index[&v.order_key(f)];
        for (u, mult) in nbrs {
            edges.push(Edge { src, dst: index[&u.order_key(f)], mult });
        }
    }
    edges.sort_by_key(|e| (e.src, e.dst));

    let completed_keys: BTreeSet<(u32, u64)> =
        completed.iter().map(|v| v.order_key(f)).collect();
    let frontier: BTreeSet<usize> = vertices
        .iter()
        .enumerate()
        .filter(|(_, v)| !completed_keys.contains(&v.order_key(f)))
        .map(|(i, _)| i)
        .collect();

    Ok(HeckeGraph { desc: desc.clone(), radius, vertices, edges, frontier })
}

/// The nucleus: the finite vertex set that determines an eigenform of the
/// operator everywhere. Unramified: {c_0, ..., c_{d-1}}, d vertices.
/// Ramified away from t: {c'_0} ∪ {c'_{n,w} : 1 ≤ n ≤ d} minus
/// c'_{d,[1:0]}, which has d(q+1) vertices.
pub fn nucleus(desc: &OperatorDesc) -> Result<Vec<GraphVertex>, Error> {
    let f = &desc.field;
    let q = f.q();
    match (desc.level, desc.place) {
        (Level::Unramified, PlaceSpec::DegreeD(d)) => {
            let out: Vec<GraphVertex> =
                (0..d).map(|n| GraphVertex::Unram(UnramVertex(n))).collect();
            assert_eq!(out.len() as u32, d);
            Ok(out)
        }
        (Level::RamifiedL1, PlaceSpec::DegreeD(d)) => {
            let mut out = vec![GraphVertex::Ram(RamVertex::Base)];
            for n in 1..=d {
                for w in ProjPoint::all(f) {
                    if n == d && w == ProjPoint::Finite(crate::algebra::Fq::ZERO) {
                        continue;
                    }
                    out.push(GraphVertex::Ram(RamVertex::Pair(n, w)));
                }
            }
            assert_eq!(out.len() as u64, d as u64 * (q + 1));
            Ok(out)
        }
        _ => Err(Error::UnsupportedDescriptor(
            "nucleus is defined for operators away from t at levels K and K'".into(),
        )),
    }
}

/// The canonical projection onto the unramified vertex set.
pub fn project_vertex(v: &RamVertex) -> UnramVertex {
    match v {
        RamVertex::Base => UnramVertex(0),
        RamVertex::Pair(n, _) => UnramVertex(*n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_field;

    fn desc_unram(q: (u64, u32), d: u32) -> OperatorDesc {
        OperatorDesc::new(
            make_field(q.0, q.1).unwrap(),
            Level::Unramified,
            PlaceSpec::DegreeD(d),
        )
        .unwrap()
    }

    #[test]
    fn descriptor_validation() {
        let f = make_field(2, 1).unwrap();
        assert!(OperatorDesc::new(f.clone(), Level::Unramified, PlaceSpec::AtX).is_err());
        assert!(OperatorDesc::new(f.clone(), Level::GeneralR(1), PlaceSpec::AtX).is_err());
        assert!(OperatorDesc::new(f.clone(), Level::RamifiedL1, PlaceSpec::AtX).is_ok());
        assert!(OperatorDesc::new(f, Level::Unramified, PlaceSpec::DegreeD(0)).is_err());
    }

    #[test]
    fn coset_rep_counts() {
        let f = make_field(2, 1).unwrap();
        let d1 = desc_unram((2, 1), 1);
        assert_eq!(coset_reps(&d1).unwrap().len(), 3);
        let atx =
            OperatorDesc::new(f.clone(), Level::RamifiedL1, PlaceSpec::AtX).unwrap();
        let reps = coset_reps(&atx).unwrap();
        assert_eq!(reps.len(), 2);
        assert_eq!(reps[0], Mat2::new(RatFunc::t_pow(1), RatFunc::zero(), RatFunc::zero(), RatFunc::one()));
        assert_eq!(
            reps[1],
            Mat2::new(RatFunc::t_pow(1), RatFunc::t_pow(1), RatFunc::zero(), RatFunc::one())
        );
        let r2 = OperatorDesc::new(f, Level::GeneralR(2), PlaceSpec::AtX).unwrap();
        let reps2 = coset_reps(&r2).unwrap();
        assert_eq!(reps2.len(), 2);
        assert_eq!(
            reps2[1],
            Mat2::new(RatFunc::t_pow(1), RatFunc::t_pow(2), RatFunc::zero(), RatFunc::one())
        );
    }

    #[test]
    fn two_neighbor_pattern_above_the_nucleus() {
        // c_n for n ≥ d has exactly the neighbors c_{n-d} (mult q^d) and
        // c_{n+d} (mult 1).
        for (q, d) in [((2u64, 1u32), 1u32), ((3, 1), 2), ((2, 2), 2)] {
            let desc = desc_unram(q, d);
            let qd = desc.field.q().pow(d);
            for n in d..d + 3 {
                let nbrs = neighbors(&desc, &GraphVertex::Unram(UnramVertex(n))).unwrap();
                assert_eq!(
                    nbrs,
                    vec![
                        (GraphVertex::Unram(UnramVertex(n - d)), qd),
                        (GraphVertex::Unram(UnramVertex(n + d)), 1),
                    ]
                );
            }
        }
    }

    #[test]
    fn radius_zero_graph_is_one_frontier_vertex() {
        let desc = desc_unram((2, 1), 1);
        let g = build_graph(&desc, 0).unwrap();
        assert_eq!(g.vertices.len(), 1);
        assert!(g.edges.is_empty());
        assert_eq!(g.frontier.len(), 1);
    }

    #[test]
    fn chain_for_degree_one() {
        // Radius 3, d = 1: chain c_0..c_3 with frontier {c_3};
        // c_0 → c_1 has mult q+1, forward mult 1, backward mult q.
        let desc = desc_unram((2, 1), 1);
        let g = build_graph(&desc, 3).unwrap();
        assert_eq!(g.vertices.len(), 4);
        let idx = |n: u32| g.index_of(&GraphVertex::Unram(UnramVertex(n))).unwrap();
        assert_eq!(g.mult(idx(0), idx(1)), 3);
        assert_eq!(g.mult(idx(1), idx(0)), 2);
        assert_eq!(g.mult(idx(1), idx(2)), 1);
        assert_eq!(g.mult(idx(2), idx(1)), 2);
        assert_eq!(g.mult(idx(2), idx(3)), 1);
        assert!(g.is_frontier(idx(3)));
        assert!(g.out_edges(idx(3)).is_empty());
    }

    #[test]
    fn nucleus_sizes() {
        assert_eq!(nucleus(&desc_unram((2, 1), 6)).unwrap().len(), 6);
        assert_eq!(nucleus(&desc_unram((2, 1), 1)).unwrap().len(), 1);
        let f = make_field(2, 1).unwrap();
        let ram = OperatorDesc::new(f, Level::RamifiedL1, PlaceSpec::DegreeD(2)).unwrap();
        let nuc = nucleus(&ram).unwrap();
        assert_eq!(nuc.len(), 6);
        assert!(!nuc.contains(&GraphVertex::Ram(RamVertex::Pair(
            2,
            ProjPoint::Finite(crate::algebra::Fq::ZERO)
        ))));
    }

    #[test]
    fn projection_forgets_the_label() {
        assert_eq!(project_vertex(&RamVertex::Base), UnramVertex(0));
        let f = make_field(3, 1).unwrap();
        for w in ProjPoint::all(&f) {
            assert_eq!(project_vertex(&RamVertex::Pair(3, w)), UnramVertex(3));
        }
    }
}
