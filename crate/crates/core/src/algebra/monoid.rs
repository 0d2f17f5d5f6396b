use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::report::{LawFailure, ValidationReport};

/// Largest carrier accepted unless the caller raises the limit.
pub const DEFAULT_MAX_SIZE: usize = 64;

/// Law names used by [`validate_monoid`].
pub mod law {
    pub const MALFORMED: &str = "malformed";
    pub const SIZE_LIMIT: &str = "size-limit";
    pub const TOTALITY: &str = "totality";
    pub const IDENTITY: &str = "identity";
    pub const ASSOCIATIVITY: &str = "associativity";
}

/// A finite monoid given by its Cayley table.
///
/// Elements are addressed by index in memory and by name at the I/O
/// boundary. `op(i, j)` is the index of `elements[i] + elements[j]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteMonoid {
    name: String,
    elements: Vec<String>,
    identity: usize,
    table: Vec<usize>,
}

impl FiniteMonoid {
    /// Builds a monoid from an index table, rejecting anything that fails
    /// [`validate_monoid`].
    pub fn new(
        name: impl Into<String>,
        elements: Vec<String>,
        identity: usize,
        table: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let name = name.into();
        let raw = RawMonoid {
            name: name.clone(),
            identity: elements
                .get(identity)
                .cloned()
                .unwrap_or_else(|| format!("#{identity}")),
            table: table
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|&c| Some(elements.get(c).cloned().unwrap_or_else(|| format!("#{c}"))))
                        .collect()
                })
                .collect(),
            elements: elements.clone(),
        };
        raw.into_monoid(usize::MAX)
    }

    /// Builds a monoid from a closure `(i, j) -> i + j`.
    pub fn from_fn<S: Into<String>>(
        name: impl Into<String>,
        elements: Vec<S>,
        identity: usize,
        op: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        let n = elements.len();
        let table = (0..n).map(|i| (0..n).map(|j| op(i, j)).collect()).collect();
        Self::new(name, elements, identity, table)
    }

    /// Builds a monoid from a table of element names (row = left operand).
    pub fn from_names(name: &str, elements: &[&str], identity: &str, table: &[&[&str]]) -> Result<Self> {
        RawMonoid {
            name: name.to_string(),
            elements: elements.iter().map(|s| s.to_string()).collect(),
            identity: identity.to_string(),
            table: table
                .iter()
                .map(|row| row.iter().map(|s| Some(s.to_string())).collect())
                .collect(),
        }
        .into_monoid(usize::MAX)
    }

    /// Skips validation. Callers guarantee the monoid laws.
    pub(crate) fn from_parts_unchecked(
        name: String,
        elements: Vec<String>,
        identity: usize,
        table: Vec<usize>,
    ) -> Self {
        debug_assert_eq!(table.len(), elements.len() * elements.len());
        FiniteMonoid {
            name,
            elements,
            identity,
            table,
        }
    }

    /// The one-element monoid.
    pub fn trivial(name: impl Into<String>, element: impl Into<String>) -> Self {
        Self::from_parts_unchecked(name.into(), vec![element.into()], 0, vec![0])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn element_name(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name).ok_or_else(|| Error::UnknownElement {
            monoid: self.name.clone(),
            element: name.to_string(),
        })
    }

    #[inline]
    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a * self.elements.len() + b]
    }

    /// Sum of a sequence, left to right; the identity for an empty one.
    pub fn sum(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().fold(self.identity, |acc, x| self.op(acc, x))
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.size()).map(<[usize]>::to_vec).collect()
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.size();
        (0..n).all(|a| (a + 1..n).all(|b| self.op(a, b) == self.op(b, a)))
    }

    pub fn is_idempotent(&self, a: usize) -> bool {
        self.op(a, a) == a
    }

    /// Right-cancellable: `a + c = b + c` implies `a = b`.
    pub fn is_right_cancellable(&self) -> bool {
        let n = self.size();
        (0..n).all(|c| {
            let mut seen = vec![false; n];
            (0..n).all(|a| !std::mem::replace(&mut seen[self.op(a, c)], true))
        })
    }

    /// Every element has a two-sided inverse.
    pub fn is_group(&self) -> bool {
        let n = self.size();
        (0..n).all(|a| (0..n).any(|b| self.op(a, b) == self.identity && self.op(b, a) == self.identity))
    }

    /// First triple violating associativity, in lexicographic index order.
    pub fn associativity_witness(&self, exec: Execution) -> Option<(usize, usize, usize)> {
        let n = self.size();
        exec.find_first(n, |a| {
            for b in 0..n {
                let ab = self.op(a, b);
                for c in 0..n {
                    if self.op(ab, c) != self.op(a, self.op(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
            None
        })
    }
}

impl fmt::Debug for FiniteMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} (identity {}):", self.name, self.elements[self.identity])?;
        let n = self.size();
        for a in 0..n {
            let row: Vec<&str> = (0..n).map(|b| self.elements[self.op(a, b)].as_str()).collect();
            writeln!(f, "  {:>6} | {}", self.elements[a], row.join(" "))?;
        }
        Ok(())
    }
}

/// Candidate monoid data as read from a file: names everywhere, cells may
/// be missing (`null`) or name elements that do not exist.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMonoid {
    pub name: String,
    pub elements: Vec<String>,
    pub identity: String,
    pub table: Vec<Vec<Option<String>>>,
}

impl From<&FiniteMonoid> for RawMonoid {
    fn from(m: &FiniteMonoid) -> Self {
        let n = m.size();
        RawMonoid {
            name: m.name.clone(),
            elements: m.elements.clone(),
            identity: m.elements[m.identity].clone(),
            table: (0..n)
                .map(|a| (0..n).map(|b| Some(m.elements[m.op(a, b)].clone())).collect())
                .collect(),
        }
    }
}

impl RawMonoid {
    pub fn into_monoid(self, max_size: usize) -> Result<FiniteMonoid> {
        let report = validate_monoid_with(&self, max_size, Execution::default());
        if !report.ok {
            return Err(Error::InvalidMonoid {
                name: self.name,
                report,
            });
        }
        let n = self.elements.len();
        let idx = |s: &str| self.elements.iter().position(|e| e == s).expect("validated");
        let identity = idx(&self.identity);
        let mut table = Vec::with_capacity(n * n);
        for row in &self.table {
            for cell in row {
                table.push(idx(cell.as_deref().expect("validated")));
            }
        }
        Ok(FiniteMonoid {
            name: self.name,
            elements: self.elements,
            identity,
            table,
        })
    }
}

/// Checks a candidate table against the monoid laws with the default size
/// limit.
pub fn validate_monoid(candidate: &RawMonoid) -> ValidationReport {
    validate_monoid_with(candidate, DEFAULT_MAX_SIZE, Execution::default())
}

/// Reports every violated law (malformed shape, size limit, totality,
/// identity, associativity) with the first witness per law in lexicographic
/// index order.
pub fn validate_monoid_with(candidate: &RawMonoid, max_size: usize, exec: Execution) -> ValidationReport {
    let n = candidate.elements.len();
    let mut failures = Vec::new();

    if n == 0 {
        failures.push(LawFailure::new(law::MALFORMED, vec![]).with_detail("empty element list"));
        return ValidationReport::from_failures(failures);
    }
    if n > max_size {
        failures.push(
            LawFailure::new(law::SIZE_LIMIT, vec![])
                .with_detail(format!("{n} elements exceed the limit of {max_size}")),
        );
        return ValidationReport::from_failures(failures);
    }
    for (i, e) in candidate.elements.iter().enumerate() {
        if candidate.elements[..i].contains(e) {
            failures.push(LawFailure::new(law::MALFORMED, vec![e.clone()]).with_detail("duplicate element name"));
            break;
        }
    }
    if candidate.table.len() != n {
        failures.push(
            LawFailure::new(law::MALFORMED, vec![])
                .with_detail(format!("table has {} rows, expected {n}", candidate.table.len())),
        );
    } else if let Some((i, row)) = candidate.table.iter().enumerate().find(|(_, r)| r.len() != n) {
        failures.push(
            LawFailure::new(law::MALFORMED, vec![candidate.elements[i].clone()])
                .with_detail(format!("row has {} cells, expected {n}", row.len())),
        );
    }
    let lookup = |s: &str| candidate.elements.iter().position(|e| e == s);
    let identity = lookup(&candidate.identity);
    if identity.is_none() {
        failures.push(
            LawFailure::new(law::MALFORMED, vec![candidate.identity.clone()]).with_detail("identity is not an element"),
        );
    }
    if !failures.is_empty() {
        return ValidationReport::from_failures(failures);
    }
    let identity = identity.expect("checked above");

    // Partial table: None marks an undefined or unknown cell.
    let cells: Vec<Option<usize>> = candidate
        .table
        .iter()
        .flat_map(|row| row.iter().map(|c| c.as_deref().and_then(lookup)))
        .collect();
    let cell = |a: usize, b: usize| cells[a * n + b];
    let name = |i: usize| candidate.elements[i].clone();

    if let Some(pos) = cells.iter().position(Option::is_none) {
        let (a, b) = (pos / n, pos % n);
        let detail = match &candidate.table[a][b] {
            None => "undefined cell".to_string(),
            Some(s) => format!("unknown element `{s}`"),
        };
        failures.push(LawFailure::new(law::TOTALITY, vec![name(a), name(b)]).with_detail(detail));
    }

    let identity_witness = (0..n).find_map(|i| {
        let left = cell(identity, i);
        let right = cell(i, identity);
        if left.is_some_and(|v| v != i) {
            Some((i, "e + x", left))
        } else if right.is_some_and(|v| v != i) {
            Some((i, "x + e", right))
        } else {
            None
        }
    });
    if let Some((i, side, got)) = identity_witness {
        failures.push(
            LawFailure::new(law::IDENTITY, vec![name(i)])
                .with_detail(format!("{side} = {}", name(got.expect("defined")))),
        );
    }

    let assoc = exec.find_first(n, |a| {
        for b in 0..n {
            let Some(ab) = cell(a, b) else { continue };
            for c in 0..n {
                let (Some(l), Some(bc)) = (cell(ab, c), cell(b, c)) else {
                    continue;
                };
                let Some(r) = cell(a, bc) else { continue };
                if l != r {
                    return Some((a, b, c, l, r));
                }
            }
        }
        None
    });
    if let Some((a, b, c, l, r)) = assoc {
        failures.push(
            LawFailure::new(law::ASSOCIATIVITY, vec![name(a), name(b), name(c)]).with_detail(format!(
                "(x+y)+z = {}, x+(y+z) = {}",
                name(l),
                name(r)
            )),
        );
    }
    ValidationReport::from_failures(failures)
}

/// Cartesian product with componentwise operation. Elements are named
/// `(m,n)` and ordered lexicographically by `(M-index, N-index)`.
pub fn product(m: &FiniteMonoid, n: &FiniteMonoid) -> FiniteMonoid {
    let (sm, sn) = (m.size(), n.size());
    let elements = (0..sm * sn)
        .map(|i| format!("({},{})", m.element_name(i / sn), n.element_name(i % sn)))
        .collect();
    let mut table = Vec::with_capacity(sm * sn * sm * sn);
    for i in 0..sm * sn {
        for j in 0..sm * sn {
            let a = m.op(i / sn, j / sn);
            let b = n.op(i % sn, j % sn);
            table.push(a * sn + b);
        }
    }
    FiniteMonoid::from_parts_unchecked(
        format!("{}x{}", m.name(), n.name()),
        elements,
        m.identity() * sn + n.identity(),
        table,
    )
}

/// All associative tables on `{0, .., n-1}` with identity `0`, in
/// lexicographic order of the free cells. Element `i` is named `e{i}`
/// (`e0` is the identity).
pub fn enumerate_monoid_tables(n: usize, exec: Execution) -> Vec<FiniteMonoid> {
    assert!(n >= 1);
    let free: Vec<(usize, usize)> = (1..n).flat_map(|a| (1..n).map(move |b| (a, b))).collect();
    if free.is_empty() {
        return vec![FiniteMonoid::trivial("T1", "e0")];
    }
    // The first free cell splits the search for parallel execution.
    let mut found = exec.flat_map(n, |first| {
        let mut table = vec![usize::MAX; n * n];
        for i in 0..n {
            table[i] = i;
            table[i * n] = i;
        }
        let mut out = Vec::new();
        table[free[0].0 * n + free[0].1] = first;
        if partial_assoc_ok(&table, n) {
            fill_tables(&mut table, n, &free, 1, &mut out);
        }
        out
    });
    let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    found
        .drain(..)
        .enumerate()
        .map(|(k, t)| FiniteMonoid::from_parts_unchecked(format!("M{n}_{k}"), names.clone(), 0, t))
        .collect()
}

fn fill_tables(table: &mut [usize], n: usize, free: &[(usize, usize)], pos: usize, out: &mut Vec<Vec<usize>>) {
    if pos == free.len() {
        out.push(table.to_vec());
        return;
    }
    let (a, b) = free[pos];
    for v in 0..n {
        table[a * n + b] = v;
        if partial_assoc_ok(table, n) {
            fill_tables(table, n, free, pos + 1, out);
        }
    }
    table[a * n + b] = usize::MAX;
}

/// Associativity on every triple whose four products are already defined.
pub(crate) fn partial_assoc_ok(table: &[usize], n: usize) -> bool {
    for a in 0..n {
        for b in 0..n {
            let ab = table[a * n + b];
            if ab == usize::MAX {
                continue;
            }
            for c in 0..n {
                let bc = table[b * n + c];
                if bc == usize::MAX {
                    continue;
                }
                let l = table[ab * n + c];
                let r = table[a * n + bc];
                if l != usize::MAX && r != usize::MAX && l != r {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(elements: &[&str], identity: &str, table: &[&[Option<&str>]]) -> RawMonoid {
        RawMonoid {
            name: "M".into(),
            elements: elements.iter().map(|s| s.to_string()).collect(),
            identity: identity.into(),
            table: table
                .iter()
                .map(|r| r.iter().map(|c| c.map(str::to_string)).collect())
                .collect(),
        }
    }

    #[test]
    fn semilattice_on_two_elements_is_valid() {
        let r = raw(&["0", "s"], "0", &[&[Some("0"), Some("s")], &[Some("s"), Some("s")]]);
        assert!(validate_monoid(&r).ok);
    }

    #[test]
    fn trivial_monoid_is_valid() {
        let r = raw(&["0"], "0", &[&[Some("0")]]);
        assert!(validate_monoid(&r).ok);
    }

    #[test]
    fn undefined_cell_is_a_totality_failure() {
        let r = raw(&["0", "a"], "0", &[&[Some("0"), Some("a")], &[Some("a"), None]]);
        let rep = validate_monoid(&r);
        assert!(!rep.ok);
        let f = rep.failure(law::TOTALITY).unwrap();
        assert_eq!(f.witness, vec!["a", "a"]);
        assert!(rep.failure(law::ASSOCIATIVITY).is_none());
    }

    #[test]
    fn unknown_cell_name_is_a_totality_failure() {
        let r = raw(&["0", "a"], "0", &[&[Some("0"), Some("a")], &[Some("a"), Some("zz")]]);
        let rep = validate_monoid(&r);
        assert_eq!(rep.failures.len(), 1);
        assert_eq!(rep.failures[0].law, law::TOTALITY);
    }

    #[test]
    fn malformed_inputs_are_their_own_category() {
        let non_square = raw(&["0", "a"], "0", &[&[Some("0"), Some("a")]]);
        assert_eq!(validate_monoid(&non_square).failures[0].law, law::MALFORMED);
        let bad_identity = raw(&["0"], "x", &[&[Some("0")]]);
        assert_eq!(validate_monoid(&bad_identity).failures[0].law, law::MALFORMED);
        let dup = raw(&["0", "0"], "0", &[&[Some("0"), Some("0")], &[Some("0"), Some("0")]]);
        assert_eq!(validate_monoid(&dup).failures[0].law, law::MALFORMED);
    }

    #[test]
    fn identity_and_associativity_witnesses() {
        // a+a = 0, a+b = 0, b+a = a: identity fine, associativity broken.
        let r = raw(
            &["0", "a", "b"],
            "0",
            &[
                &[Some("0"), Some("a"), Some("b")],
                &[Some("a"), Some("0"), Some("0")],
                &[Some("b"), Some("a"), Some("b")],
            ],
        );
        let rep = validate_monoid(&r);
        assert!(rep.failure(law::IDENTITY).is_none());
        let w = &rep.failure(law::ASSOCIATIVITY).unwrap().witness;
        // (a+a)+b = b but a+(a+b) = a+0 = a.
        assert_eq!(w, &vec!["a".to_string(), "a".into(), "b".into()]);

        let r = raw(&["0", "a"], "0", &[&[Some("0"), Some("0")], &[Some("a"), Some("a")]]);
        let rep = validate_monoid(&r);
        assert_eq!(rep.failure(law::IDENTITY).unwrap().witness, vec!["a"]);
    }

    #[test]
    fn size_limit_is_enforced() {
        let m = FiniteMonoid::from_fn("Z5", vec!["0", "1", "2", "3", "4"], 0, |a, b| (a + b) % 5).unwrap();
        let r = RawMonoid::from(&m);
        assert!(validate_monoid_with(&r, 5, Execution::Sequential).ok);
        let rep = validate_monoid_with(&r, 4, Execution::Sequential);
        assert_eq!(rep.failures[0].law, law::SIZE_LIMIT);
    }

    #[test]
    fn product_of_two_element_monoids() {
        let x = FiniteMonoid::from_names("X", &["0", "s"], "0", &[&["0", "s"], &["s", "s"]]).unwrap();
        let b = FiniteMonoid::from_names("B", &["1", "t"], "1", &[&["1", "t"], &["t", "t"]]).unwrap();
        let p = product(&x, &b);
        assert_eq!(p.size(), 4);
        assert_eq!(p.elements(), &["(0,1)", "(0,t)", "(s,1)", "(s,t)"]);
        assert_eq!(p.identity(), 0);
        assert!(validate_monoid(&RawMonoid::from(&p)).ok);

        // {0,s} x {0,s}: every element idempotent, commutative.
        let xx = product(&x, &x);
        assert!(xx.is_commutative());
        assert!((0..4).all(|i| xx.is_idempotent(i)));
        // (0,s) + (s,0) = (s,s)
        assert_eq!(xx.op(1, 2), 3);
    }

    #[test]
    fn product_with_trivial_is_the_same_table() {
        let x = FiniteMonoid::from_names("X", &["0", "s"], "0", &[&["0", "s"], &["s", "s"]]).unwrap();
        let t = FiniteMonoid::trivial("T", "1");
        let p = product(&x, &t);
        assert_eq!(p.table_rows(), x.table_rows());
        assert_eq!(p.identity(), x.identity());
    }

    #[test]
    fn monoid_table_counts() {
        // Orders 1, 2, 3 with a fixed identity: brute-force the full table
        // space and filter by the laws.
        for n in 1usize..=3 {
            let free = (n - 1) * (n - 1);
            let mut brute = 0;
            for code in 0..n.pow(free as u32) {
                let m = FiniteMonoid::from_fn("M", (0..n).map(|i| i.to_string()).collect(), 0, |a, b| {
                    if a == 0 {
                        b
                    } else if b == 0 {
                        a
                    } else {
                        (code / n.pow(((a - 1) * (n - 1) + (b - 1)) as u32)) % n
                    }
                });
                if m.is_ok() {
                    brute += 1;
                }
            }
            for exec in [Execution::Sequential, Execution::Parallel] {
                assert_eq!(enumerate_monoid_tables(n, exec).len(), brute, "n = {n}");
            }
        }
    }

    #[test]
    fn group_and_cancellation_predicates() {
        let z2 = FiniteMonoid::from_fn("Z2", vec!["0", "1"], 0, |a, b| (a + b) % 2).unwrap();
        assert!(z2.is_group() && z2.is_right_cancellable());
        let sl = FiniteMonoid::from_names("X", &["0", "s"], "0", &[&["0", "s"], &["s", "s"]]).unwrap();
        assert!(!sl.is_group() && !sl.is_right_cancellable());
    }
}
