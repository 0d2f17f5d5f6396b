use std::sync::Arc;

use crate::algebra::{FiniteMonoid, Homomorphism, Map, PointedMap};
use crate::exec::Execution;

/// All identity-preserving maps `M -> N` in lexicographic order of the
/// mapping array: `|N|^(|M|-1)` of them.
pub struct PointedMapIter {
    domain: Arc<FiniteMonoid>,
    codomain: Arc<FiniteMonoid>,
    current: Option<Vec<usize>>,
}

impl PointedMapIter {
    pub fn new(domain: Arc<FiniteMonoid>, codomain: Arc<FiniteMonoid>) -> Self {
        let mut start = vec![0; domain.size()];
        start[domain.identity()] = codomain.identity();
        PointedMapIter {
            domain,
            codomain,
            current: Some(start),
        }
    }
}

impl Iterator for PointedMapIter {
    type Item = PointedMap;

    fn next(&mut self) -> Option<PointedMap> {
        let cur = self.current.take()?;
        // Odometer step on every position but the identity's.
        let mut next = cur.clone();
        let fixed = self.domain.identity();
        let top = self.codomain.size();
        let mut pos = next.len();
        let mut advanced = false;
        while pos > 0 {
            pos -= 1;
            if pos == fixed {
                continue;
            }
            if next[pos] + 1 < top {
                next[pos] += 1;
                advanced = true;
                break;
            }
            next[pos] = 0;
        }
        if advanced {
            self.current = Some(next);
        }
        let map = Map::new("f", self.domain.clone(), self.codomain.clone(), cur).expect("in range");
        Some(PointedMap::new(map).expect("identity fixed"))
    }
}

pub fn enumerate_pointed_maps(m: &Arc<FiniteMonoid>, n: &Arc<FiniteMonoid>) -> PointedMapIter {
    PointedMapIter::new(m.clone(), n.clone())
}

/// Constraint `f(a) + f(b) = f(c)` where `c = a + b`, checked as soon as
/// the last of `a`, `b`, `c` is assigned.
#[derive(Clone, Copy)]
struct Triple {
    a: usize,
    b: usize,
    c: usize,
}

/// Depth-first enumeration of homomorphisms `M -> N`.
///
/// Positions are assigned in index order with values in increasing order,
/// so output is lexicographic in the mapping array. A partial assignment is
/// extended only while every product among assigned elements is preserved.
pub struct HomIter {
    domain: Arc<FiniteMonoid>,
    codomain: Arc<FiniteMonoid>,
    /// `checks[i]`: triples whose last assigned position is `i`.
    checks: Vec<Vec<Triple>>,
    order: Vec<usize>,
    mapping: Vec<usize>,
    /// Next value to try at each depth.
    next_value: Vec<usize>,
    depth: usize,
    prefix_len: usize,
    started: bool,
    done: bool,
}

impl HomIter {
    pub fn new(domain: Arc<FiniteMonoid>, codomain: Arc<FiniteMonoid>) -> Self {
        Self::with_prefix(domain, codomain, &[])
    }

    /// Restricts the search to maps whose first free positions take the
    /// given values. Used to split the search across workers.
    fn with_prefix(domain: Arc<FiniteMonoid>, codomain: Arc<FiniteMonoid>, prefix: &[usize]) -> Self {
        let n = domain.size();
        let e = domain.identity();
        let order: Vec<usize> = (0..n).filter(|&i| i != e).collect();
        // rank[i]: step at which i gets its value; the identity is preset.
        let mut rank = vec![0usize; n];
        for (step, &i) in order.iter().enumerate() {
            rank[i] = step + 1;
        }
        let mut checks = vec![Vec::new(); order.len() + 1];
        for a in 0..n {
            for b in 0..n {
                let c = domain.op(a, b);
                let last = rank[a].max(rank[b]).max(rank[c]);
                if last > 0 {
                    checks[last].push(Triple { a, b, c });
                }
            }
        }
        let mut mapping = vec![usize::MAX; n];
        mapping[e] = codomain.identity();
        let mut it = HomIter {
            next_value: vec![0; order.len()],
            domain,
            codomain,
            checks,
            order,
            mapping,
            depth: 0,
            prefix_len: 0,
            started: false,
            done: false,
        };
        for &v in prefix {
            if it.depth >= it.order.len() || !it.assign(v) {
                it.done = true;
                break;
            }
            it.depth += 1;
        }
        it.prefix_len = it.depth;
        it
    }

    fn assign(&mut self, value: usize) -> bool {
        let pos = self.order[self.depth];
        self.mapping[pos] = value;
        let (d, c) = (&self.codomain, &self.mapping);
        self.checks[self.depth + 1]
            .iter()
            .all(|t| d.op(c[t.a], c[t.b]) == c[t.c])
    }
}

impl Iterator for HomIter {
    type Item = Homomorphism;

    fn next(&mut self) -> Option<Homomorphism> {
        if self.done {
            return None;
        }
        let top = self.codomain.size();
        let floor = self.prefix_len;
        let len = self.order.len();
        if !self.started {
            self.started = true;
            if self.depth == len {
                self.done = true;
                return Some(self.emit());
            }
        } else {
            // The previous call returned a complete assignment.
            self.depth -= 1;
        }
        loop {
            let v = self.next_value[self.depth];
            if v >= top {
                self.next_value[self.depth] = 0;
                self.mapping[self.order[self.depth]] = usize::MAX;
                if self.depth == floor {
                    self.done = true;
                    return None;
                }
                self.depth -= 1;
                continue;
            }
            self.next_value[self.depth] = v + 1;
            if self.assign(v) {
                self.depth += 1;
                if self.depth == len {
                    return Some(self.emit());
                }
            }
        }
    }
}

impl HomIter {
    fn emit(&self) -> Homomorphism {
        let map = Map::new("h", self.domain.clone(), self.codomain.clone(), self.mapping.clone()).expect("in range");
        Homomorphism::new_unchecked(map)
    }
}

/// Every homomorphism `M -> N` in lexicographic order of the mapping array.
/// In parallel mode the search is split on the value of the first free
/// position and merged back in order.
pub fn enumerate_homs(m: &Arc<FiniteMonoid>, n: &Arc<FiniteMonoid>, exec: Execution) -> Vec<Homomorphism> {
    if m.size() <= 1 {
        return HomIter::new(m.clone(), n.clone()).collect();
    }
    exec.flat_map(n.size(), |v| HomIter::with_prefix(m.clone(), n.clone(), &[v]).collect())
}
