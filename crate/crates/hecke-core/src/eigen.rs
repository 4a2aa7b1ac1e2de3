//! Eigenspace dimensions by exact λ-generic linear algebra, and eigenform
//! propagation from nucleus values.
//!
//! The windowed eigen system imposes λ·f(v) = Σ_u m(v,u)·f(u) at every
//! interior vertex (a completed vertex whose out-neighbors are all
//! completed), with one unknown per completed vertex. The nullspace
//! dimension of this system reproduces the eigenspace dimension of the
//! operator: d at the unramified level, 1 for the ramified operator at t,
//! d(q+1) for the ramified operator away from t.

use crate::algebra::FieldSpec;
use crate::error::Error;
use crate::hecke::{build_graph, nucleus, GraphVertex, HeckeGraph, Level, OperatorDesc, PlaceSpec};
use crate::lambda::LambdaScalar;
use crate::reduction::RamVertex;
use std::collections::BTreeMap;

/// The window of a graph: completed vertices as unknowns, interior vertices
/// as equations.
#[derive(Debug)]
pub struct EigenWindow {
    /// Indices (into graph.vertices) of the completed vertices, in order.
    pub window: Vec<usize>,
    /// Indices of interior vertices: completed, with every out-neighbor
    /// completed.
    pub interior: Vec<usize>,
    /// Position of each window vertex in the unknown vector.
    pub col: BTreeMap<usize, usize>,
}

impl EigenWindow {
    pub fn of(graph: &HeckeGraph) -> EigenWindow {
        let window: Vec<usize> =
            (0..graph.vertices.len()).filter(|i| !graph.is_frontier(*i)).collect();
        let interior = graph.interior();
        let col = window.iter().enumerate().map(|(c, &i)| (i, c)).collect();
        EigenWindow { window, interior, col }
    }
}

/// Sparse row representation of one eigen equation over Q(λ).
type Row = BTreeMap<usize, LambdaScalar>;

fn eigen_rows(graph: &HeckeGraph, win: &EigenWindow) -> Vec<Row> {
    let mut rows = Vec::with_capacity(win.interior.len());
    for &v in &win.interior {
        let mut row: Row = BTreeMap::new();
        row.insert(win.col[&v], LambdaScalar::lambda());
        for e in graph.out_edges(v) {
            let c = win.col[&e.dst];
            let prev = row.remove(&c).unwrap_or_else(LambdaScalar::zero);
            row.insert(c, prev.sub(&LambdaScalar::from_int(e.mult as i64)));
        }
        row.retain(|_, s| !s.is_zero());
        rows.push(row);
    }
    rows
}

/// Rank of a sparse system over Q(λ) by elimination with deterministic
/// pivoting: columns in the fixed vertex order, first available row each.
fn rank(mut rows: Vec<Row>, ncols: usize) -> usize {
    let mut rank = 0usize;
    let mut used = vec![false; rows.len()];
    for col in 0..ncols {
        let pivot = (0..rows.len())
            .find(|&i| !used[i] && rows[i].contains_key(&col));
        let Some(p) = pivot else { continue };
        used[p] = true;
        rank += 1;
        let pval = rows[p][&col].clone();
        let prow: Vec<(usize, LambdaScalar)> = rows[p]
            .iter()
            .map(|(c, s)| (*c, s.div(&pval)))
            .collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if used[i] || !row.contains_key(&col) {
                continue;
            }
            let factor = row[&col].clone();
            for (c, s) in &prow {
                let cur = row.remove(c).unwrap_or_else(LambdaScalar::zero);
                let next = cur.sub(&factor.mul(s));
                if !next.is_zero() {
                    row.insert(*c, next);
                }
            }
            row.remove(&col);
        }
    }
    rank
}

fn min_radius(desc: &OperatorDesc) -> u32 {
    match desc.place {
        PlaceSpec::AtX => 3,
        PlaceSpec::DegreeD(d) => 3 * d,
    }
}

/// Nullspace dimension of the windowed eigen system, with λ generic.
pub fn window_dimension(desc: &OperatorDesc, radius: u32) -> Result<usize, Error> {
    let needed = min_radius(desc);
    if radius < needed {
        return Err(Error::RadiusTooSmall { radius, needed });
    }
    let graph = build_graph(desc, radius)?;
    let win = EigenWindow::of(&graph);
    let rows = eigen_rows(&graph, &win);
    Ok(win.window.len() - rank(rows, win.window.len()))
}

/// An eigenform on the window: exact values in Q(λ) per vertex, satisfying
/// the eigen equation at every interior vertex.
#[derive(Debug, Clone)]
pub struct Eigenform {
    pub values: BTreeMap<(u32, u64), (GraphVertex, LambdaScalar)>,
}

impl Eigenform {
    pub fn get(&self, f: &FieldSpec, v: &GraphVertex) -> Option<&LambdaScalar> {
        self.values.get(&v.order_key(f)).map(|(_, s)| s)
    }

    /// CSV rows "vertex,value" in vertex order, values as reduced ratios of
    /// integer-coefficient polynomials in λ.
    pub fn to_csv(&self, f: &FieldSpec) -> String {
        let mut out = String::from("vertex,value\n");
        for (v, s) in self.values.values() {
            out.push_str(&format!("{},{}\n", v.format(f), s));
        }
        out
    }
}

/// The seed domain of propagation: the nucleus for operators away from t,
/// and the single base vertex for the ramified operator at t.
pub fn seed_domain(desc: &OperatorDesc) -> Result<Vec<GraphVertex>, Error> {
    match (desc.level, desc.place) {
        (Level::RamifiedL1, PlaceSpec::AtX) => Ok(vec![GraphVertex::Ram(RamVertex::Base)]),
        _ => nucleus(desc),
    }
}

/// Extends seed values on the nucleus to an eigenform on the whole window by
/// frontier propagation: repeatedly pick an interior equation with exactly
/// one unvalued position (the vertex itself or one of its targets) and solve
/// for it; the dividing coefficient is the edge multiplicity, or λ minus the
/// loop multiplicity, both invertible over Q(λ).
pub fn extend_from_nucleus(
    desc: &OperatorDesc,
    seed: &BTreeMap<(u32, u64), LambdaScalar>,
    radius: u32,
) -> Result<Eigenform, Error> {
    let f = &desc.field;
    let needed = min_radius(desc);
    if radius < needed {
        return Err(Error::RadiusTooSmall { radius, needed });
    }
    let domain = seed_domain(desc)?;
    let domain_keys: Vec<(u32, u64)> = domain.iter().map(|v| v.order_key(f)).collect();
    if seed.len() != domain_keys.len()
        || domain_keys.iter().any(|k| !seed.contains_key(k))
    {
        return Err(Error::SeedDomainMismatch(format!(
            "seed must be defined on exactly the {} nucleus vertices",
            domain_keys.len()
        )));
    }

    let graph = build_graph(desc, radius)?;
    let win = EigenWindow::of(&graph);
    let mut values: Vec<Option<LambdaScalar>> = vec![None; graph.vertices.len()];
    for (k, s) in seed {
        let v = domain[domain_keys.iter().position(|dk| dk == k).unwrap()];
        let idx = graph
            .index_of(&v)
            .ok_or(Error::RadiusTooSmall { radius, needed })?;
        values[idx] = Some(s.clone());
    }

    let lambda = LambdaScalar::lambda();
    loop {
        let mut progress = false;
        for &v in &win.interior {
            // λ·f(v) - Σ m(v,u)·f(u) = 0 with at most one unvalued slot.
            let mut unknown: Option<usize> = None;
            let mut degenerate = false;
            let mut slots: Vec<usize> = vec![v];
            slots.extend(graph.out_edges(v).iter().map(|e| e.dst));
            slots.sort_unstable();
            slots.dedup();
            for u in slots {
                if values[u].is_none() {
                    if unknown.replace(u).is_some() {
                        degenerate = true;
                        break;
                    }
                }
            }
            let Some(u) = unknown else { continue };
            if degenerate {
                continue;
            }
            // Write the equation as coeff·f(u) + known = 0 and solve.
            let mut known = LambdaScalar::zero();
            let mut coeff = LambdaScalar::zero();
            if u == v {
                coeff = lambda.clone();
            } else {
                known = known.add(&lambda.mul(values[v].as_ref().unwrap()));
            }
            for e in graph.out_edges(v) {
                let m = LambdaScalar::from_int(e.mult as i64);
                if e.dst == u {
                    coeff = coeff.sub(&m);
                } else {
                    known = known.sub(&m.mul(values[e.dst].as_ref().unwrap()));
                }
            }
            // coeff is λ minus a loop multiplicity, or a negated edge
            // multiplicity: nonzero over Q(λ) either way.
            debug_assert!(!coeff.is_zero());
            values[u] = Some(known.neg().div(&coeff));
            progress = true;
        }
        if !progress {
            break;
        }
    }

    let mut out = BTreeMap::new();
    for &i in &win.window {
        let v = graph.vertices[i];
        match &values[i] {
            Some(s) => {
                out.insert(v.order_key(f), (v, s.clone()));
            }
            None => {
                return Err(Error::Stuck(format!(
                    "no solvable equation reaches {}",
                    v.format(f)
                )))
            }
        }
    }
    Ok(Eigenform { values: out })
}

/// Lists every interior vertex where λ·f(v) ≠ Σ m(v,u)·f(u); `lambda` is the
/// generic indeterminate for symbolic forms or any fixed value for numeric
/// spot checks. An empty report means f is an eigenform on the window.
pub fn check_eigen_with(
    graph: &HeckeGraph,
    form: &Eigenform,
    lambda: &LambdaScalar,
) -> Vec<GraphVertex> {
    let f = &graph.desc.field;
    let win = EigenWindow::of(graph);
    let mut bad = Vec::new();
    for &v in &win.interior {
        let Some(fv) = form.get(f, &graph.vertices[v]) else { continue };
        let mut rhs = LambdaScalar::zero();
        let mut defined = true;
        for e in graph.out_edges(v) {
            match form.get(f, &graph.vertices[e.dst]) {
                Some(fu) => {
                    rhs = rhs.add(&fu.scale_int(e.mult as i64));
                }
                None => {
                    defined = false;
                    break;
                }
            }
        }
        if defined && !lambda.mul(fv).sub(&rhs).is_zero() {
            bad.push(graph.vertices[v]);
        }
    }
    bad
}

/// `check_eigen_with` at the generic λ.
pub fn check_eigen(graph: &HeckeGraph, form: &Eigenform) -> Vec<GraphVertex> {
    check_eigen_with(graph, form, &LambdaScalar::lambda())
}

/// Non-normative growth probe: specializes λ and reports, per level index n,
/// the maximum |f| as a float together with log_q of it. Propagated forms
/// grow like powers of q along the rays, so the log-magnitude column grows
/// roughly linearly in n.
pub fn growth_probe(
    graph: &HeckeGraph,
    form: &Eigenform,
    lambda: &num_rational::BigRational,
) -> Vec<(u32, f64, f64)> {
    use num_traits::ToPrimitive;
    let f = &graph.desc.field;
    let q = f.q() as f64;
    let mut per_level: BTreeMap<u32, f64> = BTreeMap::new();
    for (v, s) in form.values.values() {
        if let Some(val) = s.eval(lambda) {
            let mag = val.to_f64().map(f64::abs).unwrap_or(f64::INFINITY);
            let e = per_level.entry(v.level_index()).or_insert(0.0);
            if mag > *e {
                *e = mag;
            }
        }
    }
    per_level
        .into_iter()
        .map(|(n, mag)| (n, mag, if mag > 0.0 { mag.ln() / q.ln() } else { f64::NEG_INFINITY }))
        .collect()
}
