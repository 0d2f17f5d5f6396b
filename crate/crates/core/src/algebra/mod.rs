//! Finite monoids as Cayley tables, maps between them, congruences,
//! quotients, products, kernels, and exhaustive enumeration of maps.

mod congruence;
mod enumerate;
mod map;
mod monoid;

pub use congruence::{congruence_closure, quotient, Partition, UnionFind};
pub use enumerate::{enumerate_homs, enumerate_pointed_maps, HomIter, PointedMapIter};
pub use map::{classify_map, is_isomorphism, kernel, same_monoid, Homomorphism, Map, MapClass, PointedMap};
pub(crate) use monoid::partial_assoc_ok;
pub use monoid::{
    enumerate_monoid_tables, law, product, validate_monoid, validate_monoid_with, FiniteMonoid, RawMonoid,
    DEFAULT_MAX_SIZE,
};
