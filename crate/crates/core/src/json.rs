//! JSON interchange: monoids, maps, diagrams, pseudo-actions, relation
//! seeds and extension bundles. Unknown keys are rejected everywhere.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{FiniteMonoid, Homomorphism, Map, PointedMap, RawMonoid, DEFAULT_MAX_SIZE};
use crate::error::{Error, Result};
use crate::pseudoaction::PseudoAction;
use crate::search::RelationSeed;
use crate::semibiproduct::SemiBiproduct;

/// A JSON object read and written in key order, with duplicate keys
/// rejected.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NamedPairs(pub Vec<(String, String)>);

impl Serialize for NamedPairs {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = ser.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for NamedPairs {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = NamedPairs;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object of element names")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> std::result::Result<NamedPairs, A::Error> {
                let mut out: Vec<(String, String)> = Vec::new();
                while let Some((k, v)) = access.next_entry::<String, String>()? {
                    if out.iter().any(|(seen, _)| *seen == k) {
                        return Err(serde::de::Error::custom(format!("duplicate key `{k}`")));
                    }
                    out.push((k, v));
                }
                Ok(NamedPairs(out))
            }
        }
        de.deserialize_map(V)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    Hom,
    Pointed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMap {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub domain: String,
    pub codomain: String,
    pub kind: MapKind,
    pub map: NamedPairs,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDiagram {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monoids: Option<Vec<RawMonoid>>,
    /// Path of a sibling file holding `{"monoids": [...]}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bundle: Option<String>,
    #[serde(rename = "X")]
    pub x: String,
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "B")]
    pub b: String,
    pub p: RawMap,
    pub k: RawMap,
    pub q: RawMap,
    pub s: RawMap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPseudoAction {
    #[serde(rename = "X")]
    pub x: RawMonoid,
    #[serde(rename = "B")]
    pub b: RawMonoid,
    pub rho: NamedPairs,
    pub phi: NamedPairs,
    pub gamma: NamedPairs,
}

/// `u` defaults to `0` and `q` to the first projection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSeed {
    pub relation: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<NamedPairs>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<NamedPairs>,
}

/// `X -k-> A -p-> B` without `q`, `s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawExtension {
    pub monoids: Vec<RawMonoid>,
    #[serde(rename = "X")]
    pub x: String,
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "B")]
    pub b: String,
    pub k: RawMap,
    pub p: RawMap,
}

/// A single map with the monoids it needs beyond those already known.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMapBundle {
    #[serde(default)]
    pub monoids: Vec<RawMonoid>,
    pub map: RawMap,
}

/// Only monoids; the target of a diagram's `"bundle"` path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMonoidBundle {
    pub monoids: Vec<RawMonoid>,
}

/// Validated monoids by name.
#[derive(Debug, Clone)]
pub struct MonoidLibrary {
    by_name: BTreeMap<String, Arc<FiniteMonoid>>,
    max_size: usize,
}

impl Default for MonoidLibrary {
    fn default() -> Self {
        MonoidLibrary::new(DEFAULT_MAX_SIZE)
    }
}

impl MonoidLibrary {
    pub fn new(max_size: usize) -> Self {
        MonoidLibrary {
            by_name: BTreeMap::new(),
            max_size,
        }
    }

    pub fn max_size(&self) -> usize {
        self.max_size
    }

    /// Validates and registers a monoid. Re-registering an identical
    /// definition is allowed; a different one under the same name is not.
    pub fn add_raw(&mut self, raw: RawMonoid) -> Result<Arc<FiniteMonoid>> {
        let m = Arc::new(raw.into_monoid(self.max_size)?);
        self.insert(m)
    }

    pub fn insert(&mut self, m: Arc<FiniteMonoid>) -> Result<Arc<FiniteMonoid>> {
        match self.by_name.get(m.name()) {
            Some(old) if **old == *m => Ok(old.clone()),
            Some(_) => Err(Error::Structural(format!("monoid `{}` defined twice", m.name()))),
            None => {
                self.by_name.insert(m.name().to_string(), m.clone());
                Ok(m)
            }
        }
    }

    pub fn extend(&mut self, raws: impl IntoIterator<Item = RawMonoid>) -> Result<()> {
        for r in raws {
            self.add_raw(r)?;
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<Arc<FiniteMonoid>> {
        self.by_name
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownMonoid(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.by_name.keys().map(String::as_str)
    }
}

pub fn monoid_from_json(text: &str, max_size: usize) -> Result<FiniteMonoid> {
    let raw: RawMonoid = serde_json::from_str(text)?;
    raw.into_monoid(max_size)
}

pub fn monoid_to_raw(m: &FiniteMonoid) -> RawMonoid {
    RawMonoid::from(m)
}

fn element(m: &FiniteMonoid, name: &str) -> Result<usize> {
    m.index_of(name).ok_or_else(|| Error::UnknownElement {
        monoid: m.name().to_string(),
        element: name.to_string(),
    })
}

/// Resolves `"x,b"` against two monoids. Element names may contain commas,
/// so every split point is tried and exactly one must name valid elements.
pub fn split_pair_key(key: &str, left: &FiniteMonoid, right: &FiniteMonoid) -> Result<(usize, usize)> {
    let hits: Vec<(usize, usize)> = key
        .match_indices(',')
        .filter_map(|(i, _)| Some((left.index_of(&key[..i])?, right.index_of(&key[i + 1..])?)))
        .collect();
    match hits.as_slice() {
        [one] => Ok(*one),
        [] => Err(Error::UnknownElement {
            monoid: format!("{}×{}", left.name(), right.name()),
            element: key.to_string(),
        }),
        _ => Err(Error::Structural(format!("key `{key}` splits ambiguously"))),
    }
}

pub fn pair_key(left: &FiniteMonoid, l: usize, right: &FiniteMonoid, r: usize) -> String {
    format!("{},{}", left.element_name(l), right.element_name(r))
}

/// Builds the map and checks the declared kind.
pub fn map_from_raw(lib: &MonoidLibrary, raw: &RawMap, default_name: &str) -> Result<(Map, MapKind)> {
    let name = raw.name.clone().unwrap_or_else(|| default_name.to_string());
    let dom = lib.get(&raw.domain)?;
    let cod = lib.get(&raw.codomain)?;
    let pairs: Vec<(&str, &str)> = raw.map.0.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
    let map = Map::from_pairs(name, dom, cod, &pairs)?;
    match raw.kind {
        MapKind::Hom => {
            Homomorphism::new(map.clone())?;
        }
        MapKind::Pointed => {
            PointedMap::new(map.clone())?;
        }
    }
    Ok((map, raw.kind))
}

pub fn hom_from_raw(lib: &MonoidLibrary, raw: &RawMap, default_name: &str) -> Result<Homomorphism> {
    Homomorphism::new(map_from_raw(lib, raw, default_name)?.0)
}

pub fn pointed_from_raw(lib: &MonoidLibrary, raw: &RawMap, default_name: &str) -> Result<PointedMap> {
    PointedMap::new(map_from_raw(lib, raw, default_name)?.0)
}

pub fn map_to_raw(map: &Map, kind: MapKind) -> RawMap {
    RawMap {
        name: Some(map.name().to_string()),
        domain: map.domain().name().to_string(),
        codomain: map.codomain().name().to_string(),
        kind,
        map: NamedPairs(map.named_pairs()),
    }
}

/// Builds a diagram from a [`RawDiagram`] whose monoids are already in
/// `lib` (inline `"monoids"` are added first).
pub fn diagram_from_raw(lib: &mut MonoidLibrary, raw: &RawDiagram) -> Result<SemiBiproduct> {
    if let Some(ms) = &raw.monoids {
        lib.extend(ms.iter().cloned())?;
    }
    let (x, a, b) = (lib.get(&raw.x)?, lib.get(&raw.a)?, lib.get(&raw.b)?);
    let p = hom_from_raw(lib, &raw.p, "p")?;
    let k = hom_from_raw(lib, &raw.k, "k")?;
    let q = pointed_from_raw(lib, &raw.q, "q")?;
    let s = pointed_from_raw(lib, &raw.s, "s")?;
    let ends = [("p", p.domain(), &a), ("p", p.codomain(), &b), ("k", k.domain(), &x)];
    for (what, got, want) in ends {
        if got.name() != want.name() {
            return Err(Error::Structural(format!(
                "`{what}` runs through `{}`, the diagram names `{}`",
                got.name(),
                want.name()
            )));
        }
    }
    SemiBiproduct::new(p, k, q, s)
}

fn kind_of(map: &Map) -> MapKind {
    match crate::algebra::classify_map(map) {
        crate::algebra::MapClass::Homomorphism => MapKind::Hom,
        _ => MapKind::Pointed,
    }
}

/// Self-contained diagram JSON with `X`, `A`, `B` inline.
pub fn diagram_to_raw(d: &SemiBiproduct) -> RawDiagram {
    let mut monoids: Vec<RawMonoid> = Vec::new();
    for m in [d.x(), d.a(), d.b()] {
        let raw = monoid_to_raw(m);
        if !monoids.contains(&raw) {
            monoids.push(raw);
        }
    }
    RawDiagram {
        monoids: Some(monoids),
        bundle: None,
        x: d.x().name().to_string(),
        a: d.a().name().to_string(),
        b: d.b().name().to_string(),
        p: map_to_raw(d.p(), MapKind::Hom),
        k: map_to_raw(d.k(), MapKind::Hom),
        q: map_to_raw(d.q(), kind_of(d.q())),
        s: map_to_raw(d.s(), kind_of(d.s())),
    }
}

fn fill_table(
    what: &str,
    entries: &NamedPairs,
    left: &FiniteMonoid,
    right: &FiniteMonoid,
    values: &FiniteMonoid,
) -> Result<Vec<usize>> {
    let n = right.size();
    let mut out = vec![usize::MAX; left.size() * n];
    for (key, val) in &entries.0 {
        let (l, r) = split_pair_key(key, left, right)?;
        if out[l * n + r] != usize::MAX {
            return Err(Error::Structural(format!("{what} lists `{key}` twice")));
        }
        out[l * n + r] = element(values, val)?;
    }
    if let Some(i) = out.iter().position(|&v| v == usize::MAX) {
        return Err(Error::Structural(format!(
            "{what} has no entry for `{}`",
            pair_key(left, i / n, right, i % n)
        )));
    }
    Ok(out)
}

pub fn pa_from_raw(raw: &RawPseudoAction, max_size: usize) -> Result<PseudoAction> {
    let x = Arc::new(raw.x.clone().into_monoid(max_size)?);
    let b = Arc::new(raw.b.clone().into_monoid(max_size)?);
    let rho = fill_table("rho", &raw.rho, &x, &b, &x)?;
    let phi = fill_table("phi", &raw.phi, &b, &x, &x)?;
    let gamma = fill_table("gamma", &raw.gamma, &b, &b, &x)?;
    PseudoAction::new(x, b, rho, phi, gamma)
}

pub fn pa_to_raw(pa: &PseudoAction) -> RawPseudoAction {
    let (x, b) = (&**pa.x(), &**pa.b());
    let table = |left: &FiniteMonoid, right: &FiniteMonoid, f: &dyn Fn(usize, usize) -> usize| {
        NamedPairs(
            (0..left.size())
                .flat_map(|l| (0..right.size()).map(move |r| (l, r)))
                .map(|(l, r)| (pair_key(left, l, right, r), x.element_name(f(l, r)).to_string()))
                .collect(),
        )
    };
    RawPseudoAction {
        x: monoid_to_raw(x),
        b: monoid_to_raw(b),
        rho: table(x, b, &|xi, bi| pa.correct(xi, bi)),
        phi: table(b, x, &|bi, xi| pa.act(bi, xi)),
        gamma: table(b, b, &|b1, b2| pa.factor(b1, b2)),
    }
}

pub fn seed_from_raw(x: Arc<FiniteMonoid>, b: Arc<FiniteMonoid>, raw: &RawSeed) -> Result<RelationSeed> {
    let relation = raw
        .relation
        .iter()
        .map(|[xn, bn]| Ok((element(&x, xn)?, element(&b, bn)?)))
        .collect::<Result<Vec<_>>>()?;
    let u = match &raw.u {
        None => vec![x.identity(); b.size()],
        Some(pairs) => {
            let mut u = vec![usize::MAX; b.size()];
            for (bn, xn) in &pairs.0 {
                u[element(&b, bn)?] = element(&x, xn)?;
            }
            if let Some(i) = u.iter().position(|&v| v == usize::MAX) {
                return Err(Error::InvalidSeed(format!("u has no value at `{}`", b.element_name(i))));
            }
            u
        }
    };
    let q = match &raw.q {
        None => relation.iter().map(|&(xi, _)| xi).collect(),
        Some(pairs) => {
            let mut q = vec![usize::MAX; relation.len()];
            for (key, xn) in &pairs.0 {
                let pair = split_pair_key(key, &x, &b)?;
                let pos = relation
                    .iter()
                    .position(|&p| p == pair)
                    .ok_or_else(|| Error::InvalidSeed(format!("q is given at `{key}`, which is not related")))?;
                q[pos] = element(&x, xn)?;
            }
            if let Some(i) = q.iter().position(|&v| v == usize::MAX) {
                let (xi, bi) = relation[i];
                return Err(Error::InvalidSeed(format!(
                    "q has no value at `{}`",
                    pair_key(&x, xi, &b, bi)
                )));
            }
            q
        }
    };
    RelationSeed::new(x, b, relation, u, q)
}

/// `(k, p)` from an extension bundle, with their monoids registered.
pub fn extension_from_raw(lib: &mut MonoidLibrary, raw: &RawExtension) -> Result<(Homomorphism, Homomorphism)> {
    lib.extend(raw.monoids.iter().cloned())?;
    let k = hom_from_raw(lib, &raw.k, "k")?;
    let p = hom_from_raw(lib, &raw.p, "p")?;
    if k.domain().name() != raw.x || p.domain().name() != raw.a || p.codomain().name() != raw.b {
        return Err(Error::Structural("k and p do not run X -> A -> B as named".into()));
    }
    Ok((k, p))
}
