use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{FiniteMonoid, Homomorphism, Map};
use crate::error::{Error, Result};

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    /// Returns `false` when `a` and `b` were already together.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

/// An assignment of class ids to the elements of a monoid.
///
/// Class ids are contiguous from 0 and numbered by least member, so class
/// `0` contains element `0` and classes are ordered by representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Partition {
    class_of: Vec<usize>,
}

impl Partition {
    /// Normalizes arbitrary labels into canonical class ids.
    pub fn from_labels<T: PartialEq>(labels: &[T]) -> Self {
        let mut reps: Vec<usize> = Vec::new();
        let class_of = (0..labels.len())
            .map(|i| match reps.iter().position(|&r| labels[r] == labels[i]) {
                Some(c) => c,
                None => {
                    reps.push(i);
                    reps.len() - 1
                }
            })
            .collect();
        Partition { class_of }
    }

    pub fn discrete(n: usize) -> Self {
        Partition {
            class_of: (0..n).collect(),
        }
    }

    pub fn single(n: usize) -> Self {
        Partition { class_of: vec![0; n] }
    }

    /// `a ~ b` iff `f(a) = f(b)`.
    pub fn kernel_pair(f: &Map) -> Self {
        Self::from_labels(f.mapping())
    }

    pub fn class_of(&self, a: usize) -> usize {
        self.class_of[a]
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.class_count()];
        for (a, &c) in self.class_of.iter().enumerate() {
            out[c].push(a);
        }
        out
    }

    pub fn class_count(&self) -> usize {
        self.class_of.iter().max().map_or(0, |m| m + 1)
    }

    pub fn len(&self) -> usize {
        self.class_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_of.is_empty()
    }

    /// First `(a, b, c)` with `a ~ b` but `a+c ≁ b+c` or `c+a ≁ c+b`.
    pub fn congruence_witness(&self, m: &FiniteMonoid) -> Option<(usize, usize, usize)> {
        let n = m.size();
        for a in 0..n {
            for b in 0..n {
                if self.class_of[a] != self.class_of[b] {
                    continue;
                }
                for c in 0..n {
                    if self.class_of[m.op(a, c)] != self.class_of[m.op(b, c)]
                        || self.class_of[m.op(c, a)] != self.class_of[m.op(c, b)]
                    {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }
}

/// The smallest congruence on `m` containing `pairs`.
///
/// Union-find seeded with the generating pairs; every successful merge of
/// `(a, b)` queues `(a+c, b+c)` and `(c+a, c+b)` for all `c` until nothing
/// new merges. Merging along generating pairs and their translates
/// suffices: translation is compatible with composing equivalences.
pub fn congruence_closure(m: &FiniteMonoid, pairs: &[(usize, usize)]) -> Partition {
    let n = m.size();
    let mut uf = UnionFind::new(n);
    let mut work: Vec<(usize, usize)> = pairs.to_vec();
    while let Some((a, b)) = work.pop() {
        if !uf.union(a, b) {
            continue;
        }
        for c in 0..n {
            work.push((m.op(a, c), m.op(b, c)));
            work.push((m.op(c, a), m.op(c, b)));
        }
    }
    let roots: Vec<usize> = (0..n).map(|i| uf.find(i)).collect();
    Partition::from_labels(&roots)
}

/// The monoid of classes with `[a]+[b] = [a+b]` and its projection.
/// Class `i` is named `[r]` after its least member `r`.
pub fn quotient(m: &Arc<FiniteMonoid>, part: &Partition) -> Result<(Arc<FiniteMonoid>, Homomorphism)> {
    if part.len() != m.size() {
        return Err(Error::Structural(format!(
            "partition covers {} elements, monoid `{}` has {}",
            part.len(),
            m.name(),
            m.size()
        )));
    }
    if let Some((a, b, c)) = part.congruence_witness(m) {
        return Err(Error::NotCongruence(format!(
            "{} ~ {} but translating by {} separates them",
            m.element_name(a),
            m.element_name(b),
            m.element_name(c)
        )));
    }
    let classes = part.classes();
    let k = classes.len();
    let mut table = Vec::with_capacity(k * k);
    for ca in &classes {
        for cb in &classes {
            table.push(part.class_of(m.op(ca[0], cb[0])));
        }
    }
    let q = Arc::new(FiniteMonoid::from_parts_unchecked(
        format!("{}/~", m.name()),
        classes.iter().map(|c| format!("[{}]", m.element_name(c[0]))).collect(),
        part.class_of(m.identity()),
        table,
    ));
    let proj = Map::from_fn("proj", m.clone(), q.clone(), |a| part.class_of(a))?;
    Ok((q, Homomorphism::new_unchecked(proj)))
}
