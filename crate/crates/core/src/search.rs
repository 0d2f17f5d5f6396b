//! The relation-based construction scheme: monoid structures on a relation
//! `R ⊆ X × B` with maps `u: B -> X`, `q: R -> X`, enumeration of all
//! semi-biproducts over `X` and `B`, and completion of a bare extension.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{enumerate_pointed_maps, partial_assoc_ok, FiniteMonoid, Homomorphism, Map, PointedMap};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::semibiproduct::SemiBiproduct;

/// `R ⊆ X × B` with `u: B -> X` and `q: R -> X`. The relation is kept in
/// lexicographic `(x, b)` order and `q[i]` is the value on `relation[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationSeed {
    x: Arc<FiniteMonoid>,
    b: Arc<FiniteMonoid>,
    relation: Vec<(usize, usize)>,
    u: Vec<usize>,
    q: Vec<usize>,
}

impl RelationSeed {
    pub fn new(
        x: Arc<FiniteMonoid>,
        b: Arc<FiniteMonoid>,
        relation: Vec<(usize, usize)>,
        u: Vec<usize>,
        q: Vec<usize>,
    ) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidSeed(msg));
        if q.len() != relation.len() {
            return bad(format!("q has {} values for {} related pairs", q.len(), relation.len()));
        }
        if u.len() != b.size() {
            return bad(format!("u has {} values, B has {} elements", u.len(), b.size()));
        }
        if relation.iter().any(|&(xi, bi)| xi >= x.size() || bi >= b.size())
            || u.iter().chain(&q).any(|&v| v >= x.size())
        {
            return bad("index out of range".into());
        }
        let mut rows: Vec<((usize, usize), usize)> = relation.into_iter().zip(q).collect();
        rows.sort();
        if let Some(w) = rows.windows(2).find(|w| w[0].0 == w[1].0) {
            return bad(format!("pair {} listed twice", pair_name(&x, &b, w[0].0)));
        }
        let (relation, q): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
        let seed = RelationSeed { x, b, relation, u, q };
        seed.check_conditions()?;
        Ok(seed)
    }

    /// `R = X × B`, `u = 0`, `q = π_X`.
    pub fn full(x: Arc<FiniteMonoid>, b: Arc<FiniteMonoid>) -> Self {
        let relation: Vec<_> = (0..x.size())
            .flat_map(|xi| (0..b.size()).map(move |bi| (xi, bi)))
            .collect();
        let q = relation.iter().map(|&(xi, _)| xi).collect();
        let u = vec![x.identity(); b.size()];
        RelationSeed::new(x, b, relation, u, q).expect("full relation is a valid seed")
    }

    fn check_conditions(&self) -> Result<()> {
        let (x, b) = (&self.x, &self.b);
        let one = b.identity();
        for xi in 0..x.size() {
            match self.position((xi, one)) {
                None => {
                    return Err(Error::InvalidSeed(format!(
                        "{} is not related",
                        pair_name(x, b, (xi, one))
                    )))
                }
                Some(i) if self.q[i] != xi => {
                    return Err(Error::InvalidSeed(format!(
                        "q{} = {}, expected {}",
                        pair_name(x, b, (xi, one)),
                        x.element_name(self.q[i]),
                        x.element_name(xi)
                    )))
                }
                _ => {}
            }
        }
        for bi in 0..b.size() {
            let pair = (self.u[bi], bi);
            match self.position(pair) {
                None => {
                    return Err(Error::InvalidSeed(format!(
                        "{} = (u({}),{}) is not related",
                        pair_name(x, b, pair),
                        b.element_name(bi),
                        b.element_name(bi)
                    )))
                }
                Some(i) if self.q[i] != x.identity() => {
                    return Err(Error::InvalidSeed(format!("q{} is not 0", pair_name(x, b, pair))))
                }
                _ => {}
            }
        }
        for (i, &(x1, b1)) in self.relation.iter().enumerate() {
            for (j, &(x2, b2)) in self.relation.iter().enumerate().skip(i + 1) {
                if b1 == b2 && self.q[i] == self.q[j] {
                    return Err(Error::InvalidSeed(format!(
                        "q is not injective on the fibre over {}: {} and {}",
                        b.element_name(b1),
                        x.element_name(x1),
                        x.element_name(x2)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn x(&self) -> &Arc<FiniteMonoid> {
        &self.x
    }

    pub fn b(&self) -> &Arc<FiniteMonoid> {
        &self.b
    }

    pub fn relation(&self) -> &[(usize, usize)] {
        &self.relation
    }

    pub fn u(&self) -> &[usize] {
        &self.u
    }

    pub fn q(&self) -> &[usize] {
        &self.q
    }

    pub fn position(&self, pair: (usize, usize)) -> Option<usize> {
        self.relation.binary_search(&pair).ok()
    }

    pub fn element_names(&self) -> Vec<String> {
        self.relation.iter().map(|&p| pair_name(&self.x, &self.b, p)).collect()
    }
}

fn pair_name(x: &FiniteMonoid, b: &FiniteMonoid, (xi, bi): (usize, usize)) -> String {
    format!("({},{})", x.element_name(xi), b.element_name(bi))
}

/// Why a monoid structure on `R` does not yield a semi-biproduct.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "reason")]
pub enum Rejection {
    #[serde(rename = "not-neutral")]
    NotNeutral { element: String },
    #[serde(rename = "projection-not-hom")]
    ProjectionNotHom { left: String, right: String },
    #[serde(rename = "⊕≠+")]
    OplusMismatch {
        x: String,
        y: String,
        oplus: String,
        sum: String,
    },
    #[serde(rename = "q(x,b)^b≠q(x,b)")]
    UnstableRetraction { pair: String, corrected: String },
}

impl Rejection {
    pub fn label(&self) -> &'static str {
        match self {
            Rejection::NotNeutral { .. } => "not-neutral",
            Rejection::ProjectionNotHom { .. } => "projection-not-hom",
            Rejection::OplusMismatch { .. } => "⊕≠+",
            Rejection::UnstableRetraction { .. } => "q(x,b)^b≠q(x,b)",
        }
    }
}

/// The four tables read off a structure on `R`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedTables {
    /// `oplus[x * |X| + x']`
    pub oplus: Vec<usize>,
    /// `times[b * |B| + b']`
    pub times: Vec<usize>,
    /// `dot[b * |X| + x]`
    pub dot: Vec<usize>,
    /// `hat[x * |B| + b]`
    pub hat: Vec<usize>,
}

/// `x⊕x' = q((x,1)+(x',1))`, `b×b' = q((u(b),b)+(u(b'),b'))`,
/// `b·x = q((u(b),b)+(x,1))`, `x^b = q((x,1)+(u(b),b))`.
pub fn derive_tables(seed: &RelationSeed, r: &FiniteMonoid) -> DerivedTables {
    let (nx, nb) = (seed.x.size(), seed.b.size());
    let one = seed.b.identity();
    let xr = |xi: usize| seed.position((xi, one)).expect("(x,1) ∈ R");
    let ur = |bi: usize| seed.position((seed.u[bi], bi)).expect("(u(b),b) ∈ R");
    let q = |i: usize| seed.q[i];
    DerivedTables {
        oplus: (0..nx * nx).map(|i| q(r.op(xr(i / nx), xr(i % nx)))).collect(),
        times: (0..nb * nb).map(|i| q(r.op(ur(i / nb), ur(i % nb)))).collect(),
        dot: (0..nb * nx).map(|i| q(r.op(ur(i / nx), xr(i % nx)))).collect(),
        hat: (0..nx * nb).map(|i| q(r.op(xr(i / nb), ur(i % nb)))).collect(),
    }
}

/// Checks a structure on `R` against the scheme, in the order: neutral
/// element, projection, `⊕ = +`, `q(x,b)^b = q(x,b)`.
pub fn classify_table(seed: &RelationSeed, r: &FiniteMonoid) -> std::result::Result<DerivedTables, Rejection> {
    let (x, b) = (&*seed.x, &*seed.b);
    let n = seed.relation.len();
    assert_eq!(r.size(), n, "table lives on R");
    let unit = seed.position((x.identity(), b.identity())).expect("(0,1) ∈ R");
    if let Some(i) = (0..n).find(|&i| r.op(unit, i) != i || r.op(i, unit) != i) {
        return Err(Rejection::NotNeutral {
            element: r.element_name(i).to_string(),
        });
    }
    let bs = |i: usize| seed.relation[i].1;
    if let Some((i, j)) = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| bs(r.op(i, j)) != b.op(bs(i), bs(j)))
    {
        return Err(Rejection::ProjectionNotHom {
            left: r.element_name(i).to_string(),
            right: r.element_name(j).to_string(),
        });
    }
    let t = derive_tables(seed, r);
    let nx = x.size();
    if let Some(i) = (0..nx * nx).find(|&i| t.oplus[i] != x.op(i / nx, i % nx)) {
        return Err(Rejection::OplusMismatch {
            x: x.element_name(i / nx).to_string(),
            y: x.element_name(i % nx).to_string(),
            oplus: x.element_name(t.oplus[i]).to_string(),
            sum: x.element_name(x.op(i / nx, i % nx)).to_string(),
        });
    }
    let nb = b.size();
    if let Some(i) = (0..n).find(|&i| {
        let (qi, bi) = (seed.q[i], seed.relation[i].1);
        t.hat[qi * nb + bi] != qi
    }) {
        let (qi, bi) = (seed.q[i], seed.relation[i].1);
        return Err(Rejection::UnstableRetraction {
            pair: r.element_name(i).to_string(),
            corrected: x.element_name(t.hat[qi * nb + bi]).to_string(),
        });
    }
    Ok(t)
}

/// The diagram `X -> R -> B` induced by a structure on `R`:
/// `p(x,b) = b`, `k(x) = (x,1)`, `s(b) = (u(b),b)`. Fails with
/// [`Error::NotHomomorphism`] when `k` or `p` is not a homomorphism.
pub fn induced_diagram(seed: &RelationSeed, r: &Arc<FiniteMonoid>) -> Result<SemiBiproduct> {
    let (x, b) = (&seed.x, &seed.b);
    let one = b.identity();
    let rel = seed.relation.clone();
    let p = Homomorphism::new(Map::from_fn("p", r.clone(), b.clone(), |i| rel[i].1)?)?;
    let k = Homomorphism::new(Map::from_fn("k", x.clone(), r.clone(), |xi| {
        seed.position((xi, one)).expect("(x,1) ∈ R")
    })?)?;
    let q = PointedMap::new(Map::new("q", r.clone(), x.clone(), seed.q.clone())?)?;
    let s = PointedMap::new(Map::from_fn("s", b.clone(), r.clone(), |bi| {
        seed.position((seed.u[bi], bi)).expect("(u(b),b) ∈ R")
    })?)?;
    SemiBiproduct::new(p, k, q, s)
}

#[derive(Debug, Clone)]
pub struct Accepted {
    pub monoid: Arc<FiniteMonoid>,
    pub diagram: SemiBiproduct,
    pub tables: DerivedTables,
}

#[derive(Debug, Clone)]
pub struct Rejected {
    pub monoid: Arc<FiniteMonoid>,
    pub reason: Rejection,
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub seed: RelationSeed,
    /// Structures on `R` with `(0,1)` neutral and `π_B` a homomorphism.
    pub candidate_tables: usize,
    pub accepted: Vec<Accepted>,
    pub rejected: Vec<Rejected>,
}

/// Every associative table on `R` with `(0,1)` neutral and `π_B` a
/// homomorphism, in lexicographic order of the free cells.
pub fn candidate_structures(seed: &RelationSeed, exec: Execution) -> Vec<Arc<FiniteMonoid>> {
    let n = seed.relation.len();
    let (x, b) = (&*seed.x, &*seed.b);
    let unit = seed.position((x.identity(), b.identity())).expect("(0,1) ∈ R");
    let bs: Vec<usize> = seed.relation.iter().map(|p| p.1).collect();
    let free: Vec<(usize, usize)> = (0..n)
        .filter(|&i| i != unit)
        .flat_map(|i| (0..n).filter(move |&j| j != unit).map(move |j| (i, j)))
        .collect();
    // The projection forces the B-component of every product.
    let choices: Vec<Vec<usize>> = free
        .iter()
        .map(|&(i, j)| {
            let target = b.op(bs[i], bs[j]);
            (0..n).filter(|&v| bs[v] == target).collect()
        })
        .collect();
    let mut base = vec![usize::MAX; n * n];
    for i in 0..n {
        base[unit * n + i] = i;
        base[i * n + unit] = i;
    }
    let tables = if free.is_empty() {
        vec![base]
    } else {
        exec.flat_map(choices[0].len(), |c| {
            let mut t = base.clone();
            t[free[0].0 * n + free[0].1] = choices[0][c];
            let mut out = Vec::new();
            if partial_assoc_ok(&t, n) {
                fill(&mut t, n, &free, &choices, 1, &mut out);
            }
            out
        })
    };
    let names = seed.element_names();
    tables
        .into_iter()
        .map(|t| Arc::new(FiniteMonoid::from_parts_unchecked("R".into(), names.clone(), unit, t)))
        .collect()
}

fn fill(
    t: &mut [usize],
    n: usize,
    free: &[(usize, usize)],
    choices: &[Vec<usize>],
    pos: usize,
    out: &mut Vec<Vec<usize>>,
) {
    if pos == free.len() {
        out.push(t.to_vec());
        return;
    }
    let (i, j) = free[pos];
    for &v in &choices[pos] {
        t[i * n + j] = v;
        if partial_assoc_ok(t, n) {
            fill(t, n, free, choices, pos + 1, out);
        }
    }
    t[i * n + j] = usize::MAX;
}

/// Runs the scheme on every candidate structure.
pub fn build_from_relation(seed: &RelationSeed, exec: Execution) -> SearchResult {
    let candidates = candidate_structures(seed, exec);
    let mut accepted = Vec::new();
    let mut rejected = Vec::new();
    for r in &candidates {
        match classify_table(seed, r) {
            Ok(tables) => {
                let diagram = induced_diagram(seed, r).expect("⊕ = + makes k a homomorphism");
                assert!(diagram.is_verified(), "accepted structure gives a semi-biproduct");
                let one = seed.b.identity();
                for (i, &(_, bi)) in seed.relation.iter().enumerate() {
                    let lhs = seed.position((seed.q[i], one)).expect("(x,1) ∈ R");
                    let rhs = seed.position((seed.u[bi], bi)).expect("(u(b),b) ∈ R");
                    assert_eq!(r.op(lhs, rhs), i, "(x,b) = (q(x,b),1)+(u(b),b)");
                }
                accepted.push(Accepted {
                    monoid: r.clone(),
                    diagram,
                    tables,
                });
            }
            Err(reason) => rejected.push(Rejected {
                monoid: r.clone(),
                reason,
            }),
        }
    }
    SearchResult {
        seed: seed.clone(),
        candidate_tables: candidates.len(),
        accepted,
        rejected,
    }
}

/// Every seed over `X`, `B`: `u` with `u(1) = 0` in lexicographic order,
/// then relations by bitmask over the optional pairs, then fibre-injective
/// `q` in lexicographic order.
pub struct SeedIter {
    x: Arc<FiniteMonoid>,
    b: Arc<FiniteMonoid>,
    pending: std::vec::IntoIter<RelationSeed>,
    u: Option<Vec<usize>>,
}

impl SeedIter {
    pub fn new(x: Arc<FiniteMonoid>, b: Arc<FiniteMonoid>) -> Self {
        let mut u = vec![0; b.size()];
        u[b.identity()] = x.identity();
        SeedIter {
            x,
            b,
            pending: Vec::new().into_iter(),
            u: Some(u),
        }
    }

    fn advance_u(&mut self) -> Option<Vec<usize>> {
        let cur = self.u.take()?;
        let mut next = cur.clone();
        let fixed = self.b.identity();
        let top = self.x.size();
        let mut pos = next.len();
        while pos > 0 {
            pos -= 1;
            if pos == fixed {
                continue;
            }
            if next[pos] + 1 < top {
                next[pos] += 1;
                self.u = Some(next);
                break;
            }
            next[pos] = 0;
        }
        Some(cur)
    }

    fn seeds_for(&self, u: &[usize]) -> Vec<RelationSeed> {
        let (x, b) = (&self.x, &self.b);
        let one = b.identity();
        let optional: Vec<(usize, usize)> = (0..x.size())
            .flat_map(|xi| (0..b.size()).map(move |bi| (xi, bi)))
            .filter(|&(xi, bi)| bi != one && xi != u[bi])
            .collect();
        assert!(optional.len() < 64, "relation search space too large");
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << optional.len()) {
            let mut relation: Vec<(usize, usize)> = (0..x.size()).map(|xi| (xi, one)).collect();
            relation.extend((0..b.size()).filter(|&bi| bi != one).map(|bi| (u[bi], bi)));
            relation.extend((0..optional.len()).filter(|&i| mask >> i & 1 == 1).map(|i| optional[i]));
            relation.sort();
            // q is fixed on (x,1) and (u(b),b); the rest range over X with
            // distinct values per fibre, never 0 since 0 = q(u(b),b).
            let free: Vec<usize> = (0..relation.len())
                .filter(|&i| {
                    let (xi, bi) = relation[i];
                    bi != one && xi != u[bi]
                })
                .collect();
            let mut q: Vec<usize> = relation
                .iter()
                .map(|&(xi, bi)| if bi == one { xi } else { x.identity() })
                .collect();
            assign_q(&relation, &free, 0, &mut q, x, &mut |q| {
                out.push(RelationSeed {
                    x: x.clone(),
                    b: b.clone(),
                    relation: relation.clone(),
                    u: u.to_vec(),
                    q: q.to_vec(),
                })
            });
        }
        out
    }
}

fn assign_q(
    relation: &[(usize, usize)],
    free: &[usize],
    pos: usize,
    q: &mut Vec<usize>,
    x: &FiniteMonoid,
    emit: &mut dyn FnMut(&[usize]),
) {
    if pos == free.len() {
        emit(q);
        return;
    }
    let i = free[pos];
    let fibre = relation[i].1;
    for v in 0..x.size() {
        let clash = (0..relation.len()).any(|j| relation[j].1 == fibre && q[j] == v && !free[pos..].contains(&j));
        if clash {
            continue;
        }
        q[i] = v;
        assign_q(relation, free, pos + 1, q, x, emit);
    }
    q[i] = x.identity();
}

impl Iterator for SeedIter {
    type Item = RelationSeed;

    fn next(&mut self) -> Option<RelationSeed> {
        loop {
            if let Some(s) = self.pending.next() {
                return Some(s);
            }
            let u = self.advance_u()?;
            self.pending = self.seeds_for(&u).into_iter();
        }
    }
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    pub diagrams: Vec<SemiBiproduct>,
    pub seeds: usize,
    pub candidate_tables: usize,
    /// `false` when the seed budget ran out first.
    pub complete: bool,
}

pub const DEFAULT_SEED_BUDGET: usize = 100_000;

/// All semi-biproducts produced by the scheme over `X` and `B`, examining
/// at most `budget` seeds. Identical diagrams are reported once.
pub fn enumerate_semibiproducts(
    x: &Arc<FiniteMonoid>,
    b: &Arc<FiniteMonoid>,
    budget: usize,
    exec: Execution,
) -> Enumeration {
    let mut seeds: Vec<RelationSeed> = SeedIter::new(x.clone(), b.clone()).take(budget + 1).collect();
    let complete = seeds.len() <= budget;
    seeds.truncate(budget);
    let results = exec.map(seeds.len(), |i| build_from_relation(&seeds[i], Execution::Sequential));
    let mut diagrams: Vec<SemiBiproduct> = Vec::new();
    let mut candidate_tables = 0;
    for res in results {
        candidate_tables += res.candidate_tables;
        for acc in res.accepted {
            if !diagrams.contains(&acc.diagram) {
                diagrams.push(acc.diagram);
            }
        }
    }
    Enumeration {
        diagrams,
        seeds: seeds.len(),
        candidate_tables,
        complete,
    }
}

/// All `(q, s)` completing `X -k-> A -p-> B` to a semi-biproduct, ordered
/// by `s` then `q` lexicographically.
pub fn complete_extension(
    k: &Homomorphism,
    p: &Homomorphism,
    exec: Execution,
) -> Result<Vec<(PointedMap, PointedMap)>> {
    let (x, a, b) = (k.domain().clone(), p.domain().clone(), p.codomain().clone());
    if !crate::algebra::same_monoid(k.codomain(), &a) {
        return Err(Error::Structural(format!(
            "`{}` does not land in `{}`",
            k.name(),
            a.name()
        )));
    }
    if let Some(xi) = (0..x.size()).find(|&xi| p.apply(k.apply(xi)) != b.identity()) {
        return Err(Error::Precondition(format!(
            "pk({}) is not the identity",
            x.element_name(xi)
        )));
    }
    if !k.is_injective() || k.image() != p.preimage_of_identity() {
        return Err(Error::Precondition(format!(
            "`{}` is not the kernel inclusion of `{}`",
            k.name(),
            p.name()
        )));
    }
    // s(b) ranges over the fibre p⁻¹(b).
    let fibres: Vec<Vec<usize>> = (0..b.size())
        .map(|bi| {
            if bi == b.identity() {
                vec![a.identity()]
            } else {
                (0..a.size()).filter(|&ai| p.apply(ai) == bi).collect()
            }
        })
        .collect();
    let s_count: usize = fibres.iter().map(Vec::len).product();
    let k_inv: Vec<Option<usize>> = (0..a.size())
        .map(|ai| (0..x.size()).find(|&xi| k.apply(xi) == ai))
        .collect();
    let found = exec.flat_map(s_count, |code| {
        let mut s_map = vec![0; b.size()];
        let mut c = code;
        for bi in (0..b.size()).rev() {
            s_map[bi] = fibres[bi][c % fibres[bi].len()];
            c /= fibres[bi].len();
        }
        // q is forced on im k and im s; the other values are free.
        let mut forced: Vec<Option<usize>> = k_inv.clone();
        for &ai in &s_map {
            match forced[ai] {
                Some(v) if v != x.identity() => return Vec::new(),
                _ => forced[ai] = Some(x.identity()),
            }
        }
        let free: Vec<usize> = (0..a.size()).filter(|&ai| forced[ai].is_none()).collect();
        let mut out = Vec::new();
        let total = x.size().pow(free.len() as u32);
        for qcode in 0..total {
            let mut q_map: Vec<usize> = forced.iter().map(|v| v.unwrap_or(0)).collect();
            let mut c = qcode;
            for &ai in free.iter().rev() {
                q_map[ai] = c % x.size();
                c /= x.size();
            }
            let splits = (0..a.size()).all(|ai| a.op(k.apply(q_map[ai]), s_map[p.apply(ai)]) == ai);
            if splits {
                out.push((q_map, s_map.clone()));
            }
        }
        out
    });
    found
        .into_iter()
        .map(|(q_map, s_map)| {
            let q = PointedMap::new(Map::new("q", a.clone(), x.clone(), q_map)?)?;
            let s = PointedMap::new(Map::new("s", b.clone(), a.clone(), s_map)?)?;
            Ok((q, s))
        })
        .collect()
}

/// All pointed maps `s: B -> A` with `ps = 1`; exposed for oracles.
pub fn sections(p: &Homomorphism) -> Vec<PointedMap> {
    enumerate_pointed_maps(p.codomain(), p.domain())
        .filter(|s| (0..p.codomain().size()).all(|bi| p.apply(s.apply(bi)) == bi))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NatCheck {
    pub name: String,
    pub holds: bool,
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NatDemoReport {
    pub bound: u64,
    pub scope: String,
    pub domain_size: usize,
    pub ok: bool,
    pub checks: Vec<NatCheck>,
}

/// The order relation `{(x, b) : x ≥ b}` on ℕ as a semi-biproduct, checked
/// pointwise on `x ≤ bound` and on sums that stay within the bound.
pub fn nat_order_demo(bound: u64) -> Result<NatDemoReport> {
    if bound == 0 {
        return Err(Error::Precondition("bound must be at least 1".into()));
    }
    type Pair = (u64, u64);
    let dom: Vec<Pair> = (0..=bound).flat_map(|x| (0..=x).map(move |b| (x, b))).collect();
    let nats: Vec<u64> = (0..=bound).collect();
    let add = |(x, b): Pair, (y, c): Pair| (x + y, b + c);
    let p = |(_, b): Pair| b;
    let k = |x: u64| (x, 0);
    let q = |(x, b): Pair| x - b;
    let s = |b: u64| (b, b);
    let beta = |a: Pair| (q(a), p(a));
    let alpha = |(x, b): Pair| (x + b, b);
    let show = |(x, b): Pair| format!("{x}≥{b}");

    let mut checks = Vec::new();
    let mut check = |name: &str, items: Vec<(bool, String)>| {
        let checked = items.len();
        let witness = items.into_iter().find(|(ok, _)| !ok).map(|(_, w)| w);
        checks.push(NatCheck {
            name: name.to_string(),
            holds: witness.is_none(),
            checked,
            witness,
        });
    };
    check("ps=1", nats.iter().map(|&b| (p(s(b)) == b, b.to_string())).collect());
    check("qk=1", nats.iter().map(|&x| (q(k(x)) == x, x.to_string())).collect());
    check("pk=0", nats.iter().map(|&x| (p(k(x)) == 0, x.to_string())).collect());
    check("qs=0", nats.iter().map(|&b| (q(s(b)) == 0, b.to_string())).collect());
    check(
        "kq+sp=1",
        dom.iter().map(|&a| (add(k(q(a)), s(p(a))) == a, show(a))).collect(),
    );
    check(
        "alpha∘beta=1",
        dom.iter().map(|&a| (alpha(beta(a)) == a, show(a))).collect(),
    );
    let pairs_in_bound: Vec<Pair> = dom
        .iter()
        .map(|&(x, b)| (x - b, b))
        .filter(|&(x, b)| x + b <= bound)
        .collect();
    check(
        "beta∘alpha=1",
        pairs_in_bound
            .iter()
            .map(|&xb| (beta(alpha(xb)) == xb, format!("({},{})", xb.0, xb.1)))
            .collect(),
    );
    let sums: Vec<(Pair, Pair)> = dom
        .iter()
        .flat_map(|&a| dom.iter().map(move |&a2| (a, a2)))
        .filter(|&(a, a2)| add(a, a2).0 <= bound)
        .collect();
    check(
        "p,q homomorphic",
        sums.iter()
            .map(|&(a, a2)| {
                let sum = add(a, a2);
                (
                    p(sum) == p(a) + p(a2) && q(sum) == q(a) + q(a2),
                    format!("{}+{}", show(a), show(a2)),
                )
            })
            .collect(),
    );
    check(
        "beta preserves +",
        sums.iter()
            .map(|&(a, a2)| {
                let (l, r) = (beta(add(a, a2)), beta(a));
                let r2 = beta(a2);
                (l == (r.0 + r2.0, r.1 + r2.1), format!("{}+{}", show(a), show(a2)))
            })
            .collect(),
    );
    check(
        "alpha preserves +",
        pairs_in_bound
            .iter()
            .flat_map(|&u| pairs_in_bound.iter().map(move |&v| (u, v)))
            .filter(|&(u, v)| u.0 + u.1 + v.0 + v.1 <= bound)
            .map(|(u, v)| {
                (
                    alpha((u.0 + v.0, u.1 + v.1)) == add(alpha(u), alpha(v)),
                    format!("({},{})+({},{})", u.0, u.1, v.0, v.1),
                )
            })
            .collect(),
    );
    check(
        "x^b=x",
        pairs_in_bound
            .iter()
            .map(|&(x, b)| (q(add(k(x), s(b))) == x, format!("({x},{b})")))
            .collect(),
    );
    let ok = checks.iter().all(|c| c.holds);
    Ok(NatDemoReport {
        bound,
        scope: "partial verification (bounded)".into(),
        domain_size: dom.len(),
        ok,
        checks,
    })
}

/// Whether a rejection is confirmed by the induced diagram: either `k` is
/// not a homomorphism or the diagram fails verification.
pub fn rejection_is_sound(seed: &RelationSeed, r: &Arc<FiniteMonoid>) -> bool {
    match induced_diagram(seed, r) {
        Err(Error::NotHomomorphism(..)) => true,
        Err(_) => false,
        Ok(d) => !d.is_verified(),
    }
}
