use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::FiniteMonoid;
use crate::error::{Error, Result};

/// A total function between the carriers of two monoids.
#[derive(Clone, PartialEq, Eq)]
pub struct Map {
    name: String,
    domain: Arc<FiniteMonoid>,
    codomain: Arc<FiniteMonoid>,
    mapping: Vec<usize>,
}

impl Map {
    pub fn new(
        name: impl Into<String>,
        domain: Arc<FiniteMonoid>,
        codomain: Arc<FiniteMonoid>,
        mapping: Vec<usize>,
    ) -> Result<Self> {
        let name = name.into();
        if mapping.len() != domain.size() {
            return Err(Error::Structural(format!(
                "map `{name}` has {} values but its domain `{}` has {} elements",
                mapping.len(),
                domain.name(),
                domain.size()
            )));
        }
        if let Some(&bad) = mapping.iter().find(|&&v| v >= codomain.size()) {
            return Err(Error::Structural(format!(
                "map `{name}` sends an element to index {bad}, outside `{}`",
                codomain.name()
            )));
        }
        Ok(Map {
            name,
            domain,
            codomain,
            mapping,
        })
    }

    pub fn from_fn(
        name: impl Into<String>,
        domain: Arc<FiniteMonoid>,
        codomain: Arc<FiniteMonoid>,
        f: impl Fn(usize) -> usize,
    ) -> Result<Self> {
        let mapping = (0..domain.size()).map(f).collect();
        Self::new(name, domain, codomain, mapping)
    }

    /// Builds a map from `(source name, target name)` pairs. Every domain
    /// element must be listed exactly once.
    pub fn from_pairs(
        name: impl Into<String>,
        domain: Arc<FiniteMonoid>,
        codomain: Arc<FiniteMonoid>,
        pairs: &[(&str, &str)],
    ) -> Result<Self> {
        let name = name.into();
        let mut mapping = vec![usize::MAX; domain.size()];
        for (from, to) in pairs {
            let i = domain.require(from)?;
            if mapping[i] != usize::MAX {
                return Err(Error::Structural(format!("map `{name}` lists `{from}` twice")));
            }
            mapping[i] = codomain.require(to)?;
        }
        if let Some(i) = mapping.iter().position(|&v| v == usize::MAX) {
            return Err(Error::Structural(format!(
                "map `{name}` leaves `{}` unassigned",
                domain.element_name(i)
            )));
        }
        Self::new(name, domain, codomain, mapping)
    }

    pub fn identity(name: impl Into<String>, m: Arc<FiniteMonoid>) -> Self {
        let mapping = (0..m.size()).collect();
        Map {
            name: name.into(),
            domain: m.clone(),
            codomain: m,
            mapping,
        }
    }

    /// Sends everything to the codomain identity.
    pub fn constant_identity(name: impl Into<String>, domain: Arc<FiniteMonoid>, codomain: Arc<FiniteMonoid>) -> Self {
        let mapping = vec![codomain.identity(); domain.size()];
        Map {
            name: name.into(),
            domain,
            codomain,
            mapping,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn domain(&self) -> &Arc<FiniteMonoid> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FiniteMonoid> {
        &self.codomain
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.mapping[a]
    }

    pub fn is_pointed(&self) -> bool {
        self.mapping[self.domain.identity()] == self.codomain.identity()
    }

    /// First pair `(a, b)` with `f(a+b) != f(a)+f(b)`, lexicographic.
    pub fn preservation_witness(&self) -> Option<(usize, usize)> {
        let (d, c) = (&*self.domain, &*self.codomain);
        let n = d.size();
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .find(|&(a, b)| self.apply(d.op(a, b)) != c.op(self.apply(a), self.apply(b)))
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.codomain.size()];
        self.mapping.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.codomain.size()];
        for &v in &self.mapping {
            seen[v] = true;
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_bijective(&self) -> bool {
        self.domain.size() == self.codomain.size() && self.is_injective()
    }

    /// `self` after `first`, i.e. `a -> self(first(a))`.
    pub fn after(&self, first: &Map) -> Result<Map> {
        if !same_monoid(first.codomain(), self.domain()) {
            return Err(Error::Structural(format!(
                "cannot compose `{}` after `{}`: `{}` is not `{}`",
                self.name,
                first.name,
                first.codomain.name(),
                self.domain.name()
            )));
        }
        Ok(Map {
            name: format!("{}∘{}", self.name, first.name),
            domain: first.domain.clone(),
            codomain: self.codomain.clone(),
            mapping: first.mapping.iter().map(|&a| self.mapping[a]).collect(),
        })
    }

    /// Elements of the domain sent to the codomain identity.
    pub fn preimage_of_identity(&self) -> Vec<usize> {
        let e = self.codomain.identity();
        (0..self.domain.size()).filter(|&a| self.mapping[a] == e).collect()
    }

    pub fn image(&self) -> Vec<usize> {
        let mut v = self.mapping.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// `(source, target)` name pairs in domain order.
    pub fn named_pairs(&self) -> Vec<(String, String)> {
        self.mapping
            .iter()
            .enumerate()
            .map(|(a, &b)| {
                (
                    self.domain.element_name(a).to_string(),
                    self.codomain.element_name(b).to_string(),
                )
            })
            .collect()
    }
}

impl fmt::Debug for Map {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} -> {} {{",
            self.name,
            self.domain.name(),
            self.codomain.name()
        )?;
        for (i, (a, b)) in self.named_pairs().into_iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}↦{b}")?;
        }
        write!(f, "}}")
    }
}

/// Structural equality, with a pointer fast path.
pub fn same_monoid(a: &Arc<FiniteMonoid>, b: &Arc<FiniteMonoid>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// An identity-preserving map.
#[derive(Clone, PartialEq, Eq)]
pub struct PointedMap(Map);

impl PointedMap {
    pub fn new(map: Map) -> Result<Self> {
        if !map.is_pointed() {
            return Err(Error::NotPointed(map.name.clone()));
        }
        Ok(PointedMap(map))
    }

    pub fn into_map(self) -> Map {
        self.0
    }
}

impl Deref for PointedMap {
    type Target = Map;
    fn deref(&self) -> &Map {
        &self.0
    }
}

impl fmt::Debug for PointedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// An identity-preserving map that also preserves the operation.
#[derive(Clone, PartialEq, Eq)]
pub struct Homomorphism(Map);

impl Homomorphism {
    pub fn new(map: Map) -> Result<Self> {
        match classify_map(&map) {
            MapClass::Homomorphism => Ok(Homomorphism(map)),
            MapClass::NotPointed => Err(Error::NotPointed(map.name.clone())),
            MapClass::PointedOnly { witness } => {
                let d = map.domain();
                Err(Error::NotHomomorphism(
                    map.name.clone(),
                    format!(
                        "f({a}+{b}) != f({a})+f({b})",
                        a = d.element_name(witness.0),
                        b = d.element_name(witness.1)
                    ),
                ))
            }
        }
    }

    pub(crate) fn new_unchecked(map: Map) -> Self {
        debug_assert!(classify_map(&map) == MapClass::Homomorphism);
        Homomorphism(map)
    }

    pub fn identity(name: impl Into<String>, m: Arc<FiniteMonoid>) -> Self {
        Homomorphism(Map::identity(name, m))
    }

    pub fn constant_identity(name: impl Into<String>, domain: Arc<FiniteMonoid>, codomain: Arc<FiniteMonoid>) -> Self {
        Homomorphism(Map::constant_identity(name, domain, codomain))
    }

    pub fn as_map(&self) -> &Map {
        &self.0
    }

    pub fn into_map(self) -> Map {
        self.0
    }

    pub fn to_pointed(&self) -> PointedMap {
        PointedMap(self.0.clone())
    }

    pub fn after(&self, first: &Homomorphism) -> Result<Homomorphism> {
        Ok(Homomorphism(self.0.after(&first.0)?))
    }

    pub fn renamed(self, name: impl Into<String>) -> Self {
        Homomorphism(self.0.renamed(name))
    }
}

impl Deref for Homomorphism {
    type Target = Map;
    fn deref(&self) -> &Map {
        &self.0
    }
}

impl fmt::Debug for Homomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Outcome of [`classify_map`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum MapClass {
    NotPointed,
    /// Preserves the identity but not the operation; `witness` is the first
    /// offending pair in lexicographic index order.
    PointedOnly {
        witness: (usize, usize),
    },
    Homomorphism,
}

impl MapClass {
    pub fn label(&self) -> &'static str {
        match self {
            MapClass::NotPointed => "not_pointed",
            MapClass::PointedOnly { .. } => "pointed_only",
            MapClass::Homomorphism => "homomorphism",
        }
    }
}

pub fn classify_map(m: &Map) -> MapClass {
    if !m.is_pointed() {
        return MapClass::NotPointed;
    }
    match m.preservation_witness() {
        Some(witness) => MapClass::PointedOnly { witness },
        None => MapClass::Homomorphism,
    }
}

/// True iff the homomorphism is a bijection.
pub fn is_isomorphism(f: &Homomorphism) -> bool {
    f.is_bijective()
}

/// The submonoid `p⁻¹(e)` as a fresh monoid (elements in domain order)
/// together with its inclusion.
pub fn kernel(p: &Homomorphism) -> (Arc<FiniteMonoid>, Homomorphism) {
    let dom = p.domain();
    let members = p.preimage_of_identity();
    let mut position = vec![usize::MAX; dom.size()];
    for (i, &a) in members.iter().enumerate() {
        position[a] = i;
    }
    let k = members.len();
    let mut table = Vec::with_capacity(k * k);
    for &a in &members {
        for &b in &members {
            table.push(position[dom.op(a, b)]);
        }
    }
    let ker = Arc::new(FiniteMonoid::from_parts_unchecked(
        format!("Ker({})", p.name()),
        members.iter().map(|&a| dom.element_name(a).to_string()).collect(),
        position[dom.identity()],
        table,
    ));
    let incl = Map::new(format!("ker({})", p.name()), ker.clone(), dom.clone(), members)
        .expect("kernel members lie in the domain");
    (ker, Homomorphism::new_unchecked(incl))
}
