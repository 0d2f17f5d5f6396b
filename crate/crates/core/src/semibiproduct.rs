//! Semi-biproduct diagrams `X -k-> A -p-> B` with retraction `q: A -> X`
//! and section `s: B -> A`, their verification, the comparison maps into
//! `X × B`, morphisms, and the kernel/cokernel/pullback constructions.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{congruence_closure, same_monoid, FiniteMonoid, Homomorphism, Map, Partition, PointedMap};
use crate::error::{Error, Result};
use crate::report::{LawFailure, ValidationReport};

/// Axiom names, in the order they are reported.
pub mod axiom {
    pub const PS: &str = "ps=1";
    pub const QK: &str = "qk=1";
    pub const PK: &str = "pk=0";
    pub const QS: &str = "qs=0";
    pub const SPLIT: &str = "kq+sp=1";
    pub const ALL: [&str; 5] = [PS, QK, PK, QS, SPLIT];
}

/// First element at which an axiom fails, with both sides evaluated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomWitness {
    pub elements: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomStatus {
    pub axiom: String,
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<AxiomWitness>,
}

/// Result of [`verify`]: one status per axiom, `ok` iff all five hold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SbpReport {
    pub ok: bool,
    pub axioms: Vec<AxiomStatus>,
}

impl SbpReport {
    pub fn status(&self, axiom: &str) -> Option<&AxiomStatus> {
        self.axioms.iter().find(|s| s.axiom == axiom)
    }

    pub fn failed(&self) -> impl Iterator<Item = &AxiomStatus> {
        self.axioms.iter().filter(|s| !s.holds)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct SemiBiproduct {
    x: Arc<FiniteMonoid>,
    a: Arc<FiniteMonoid>,
    b: Arc<FiniteMonoid>,
    p: Homomorphism,
    k: Homomorphism,
    q: PointedMap,
    s: PointedMap,
    verified: bool,
}

impl std::fmt::Debug for SemiBiproduct {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SemiBiproduct")
            .field("A", &self.a)
            .field("p", &self.p)
            .field("k", &self.k)
            .field("q", &self.q)
            .field("s", &self.s)
            .field("verified", &self.verified)
            .finish()
    }
}

impl SemiBiproduct {
    /// Assembles a diagram. Only the shape is checked here (every map must
    /// run between the right monoids); the five identities are checked by
    /// [`verify`] and the verdict is cached.
    pub fn new(p: Homomorphism, k: Homomorphism, q: PointedMap, s: PointedMap) -> Result<Self> {
        let a = p.domain().clone();
        let b = p.codomain().clone();
        let x = k.domain().clone();
        let expect = |what: &str, got: &Arc<FiniteMonoid>, want: &Arc<FiniteMonoid>| {
            if same_monoid(got, want) {
                Ok(())
            } else {
                Err(Error::Structural(format!(
                    "{what} is `{}`, expected `{}`",
                    got.name(),
                    want.name()
                )))
            }
        };
        expect("codomain of k", k.codomain(), &a)?;
        expect("domain of q", q.domain(), &a)?;
        expect("codomain of q", q.codomain(), &x)?;
        expect("domain of s", s.domain(), &b)?;
        expect("codomain of s", s.codomain(), &a)?;
        let mut d = SemiBiproduct {
            x,
            a,
            b,
            p,
            k,
            q,
            s,
            verified: false,
        };
        d.verified = verify(&d).ok;
        Ok(d)
    }

    pub fn x(&self) -> &Arc<FiniteMonoid> {
        &self.x
    }
    pub fn a(&self) -> &Arc<FiniteMonoid> {
        &self.a
    }
    pub fn b(&self) -> &Arc<FiniteMonoid> {
        &self.b
    }
    pub fn p(&self) -> &Homomorphism {
        &self.p
    }
    pub fn k(&self) -> &Homomorphism {
        &self.k
    }
    pub fn q(&self) -> &PointedMap {
        &self.q
    }
    pub fn s(&self) -> &PointedMap {
        &self.s
    }

    /// Cached verdict of [`verify`].
    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub fn require_verified(&self, op: &str) -> Result<()> {
        if self.verified {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "{op} needs a verified semi-biproduct; `{}` fails {}",
                self.a.name(),
                verify(self)
                    .failed()
                    .map(|s| s.axiom.as_str())
                    .collect::<Vec<_>>()
                    .join(", ")
            )))
        }
    }

    /// `k(q(a)) + s(p(a))`.
    pub fn recompose(&self, a: usize) -> usize {
        self.a.op(self.k.apply(self.q.apply(a)), self.s.apply(self.p.apply(a)))
    }

    /// Correction system `x^b = q(k(x) + s(b))`.
    pub fn correction(&self, x: usize, b: usize) -> usize {
        self.q.apply(self.a.op(self.k.apply(x), self.s.apply(b)))
    }

    /// Pre-action `b·x = q(s(b) + k(x))`.
    pub fn action(&self, b: usize, x: usize) -> usize {
        self.q.apply(self.a.op(self.s.apply(b), self.k.apply(x)))
    }

    /// Factor system `b×b' = q(s(b) + s(b'))`.
    pub fn factor(&self, b: usize, b2: usize) -> usize {
        self.q.apply(self.a.op(self.s.apply(b), self.s.apply(b2)))
    }

    /// `β(a) = (q(a), p(a))`.
    pub fn beta(&self, a: usize) -> Result<(usize, usize)> {
        self.require_verified("beta")?;
        Ok((self.q.apply(a), self.p.apply(a)))
    }

    /// `α(x, b) = k(x) + s(b)`.
    pub fn alpha(&self, x: usize, b: usize) -> Result<usize> {
        self.require_verified("alpha")?;
        Ok(self.a.op(self.k.apply(x), self.s.apply(b)))
    }

    /// `{(q(a), p(a)) : a ∈ A}`. Asserts that it coincides with
    /// `{(x^b, b) : x ∈ X, b ∈ B}` and that β is injective.
    pub fn image_of_beta(&self) -> Result<BTreeSet<(usize, usize)>> {
        self.require_verified("image_of_beta")?;
        let image: BTreeSet<_> = (0..self.a.size()).map(|a| (self.q.apply(a), self.p.apply(a))).collect();
        assert_eq!(image.len(), self.a.size(), "β is injective on a verified diagram");
        let corrected: BTreeSet<_> = (0..self.x.size())
            .flat_map(|x| (0..self.b.size()).map(move |b| (x, b)))
            .map(|(x, b)| (self.correction(x, b), b))
            .collect();
        assert_eq!(image, corrected, "image of β is {{(x^b, b)}}");
        Ok(image)
    }

    /// Schreier: `x^b = x` for all `x`, `b`. Asserts agreement with
    /// `|A| = |X|·|B|` and with surjectivity of β.
    pub fn is_schreier(&self) -> Result<bool> {
        self.require_verified("is_schreier")?;
        let (nx, nb) = (self.x.size(), self.b.size());
        let trivial = (0..nx).all(|x| (0..nb).all(|b| self.correction(x, b) == x));
        let by_count = self.a.size() == nx * nb;
        let surjective = self.image_of_beta()?.len() == nx * nb;
        assert_eq!(trivial, by_count, "Schreier iff |A| = |X||B|");
        assert_eq!(trivial, surjective, "Schreier iff β is onto");
        Ok(trivial)
    }

    /// First element `a` where `g(a) != g(kq(a)) + g(sp(a))`.
    pub fn jointly_epi_witness(&self, g: &Homomorphism) -> Result<Option<usize>> {
        if !same_monoid(g.domain(), &self.a) {
            return Err(Error::Structural(format!(
                "`{}` does not start at `{}`",
                g.name(),
                self.a.name()
            )));
        }
        let y = g.codomain();
        Ok((0..self.a.size()).find(|&a| {
            let split = y.op(
                g.apply(self.k.apply(self.q.apply(a))),
                g.apply(self.s.apply(self.p.apply(a))),
            );
            g.apply(a) != split
        }))
    }

    /// First `z` where `f(z) != kq(f(z)) + sp(f(z))`.
    pub fn jointly_mono_witness(&self, f: &Homomorphism) -> Result<Option<usize>> {
        if !same_monoid(f.codomain(), &self.a) {
            return Err(Error::Structural(format!(
                "`{}` does not end at `{}`",
                f.name(),
                self.a.name()
            )));
        }
        Ok((0..f.domain().size()).find(|&z| self.recompose(f.apply(z)) != f.apply(z)))
    }

    /// First pair where `a + a' != k(q(a) + p(a)·q(a') + p(a)×p(a')) + s(p(a + a'))`.
    pub fn decomposition_witness(&self) -> Option<(usize, usize)> {
        let n = self.a.size();
        (0..n).flat_map(|a| (0..n).map(move |a2| (a, a2))).find(|&(a, a2)| {
            let (pa, pa2) = (self.p.apply(a), self.p.apply(a2));
            let u = self
                .x
                .sum([self.q.apply(a), self.action(pa, self.q.apply(a2)), self.factor(pa, pa2)]);
            let rhs = self.a.op(self.k.apply(u), self.s.apply(self.p.apply(self.a.op(a, a2))));
            self.a.op(a, a2) != rhs
        })
    }

    /// First `a` where `q(a) != q(a)^{p(a)}`.
    pub fn stable_retraction_witness(&self) -> Option<usize> {
        (0..self.a.size()).find(|&a| {
            let qa = self.q.apply(a);
            self.correction(qa, self.p.apply(a)) != qa
        })
    }
}

/// Checks `ps = 1`, `qk = 1`, `pk = 0`, `qs = 0` and `kq + sp = 1` on every
/// element. Every axiom is reported independently with its least failing
/// element.
pub fn verify(d: &SemiBiproduct) -> SbpReport {
    let (x, a, b) = (&d.x, &d.a, &d.b);
    let status = |name: &str,
                  n: usize,
                  dom: &FiniteMonoid,
                  tgt: &FiniteMonoid,
                  lhs: &dyn Fn(usize) -> usize,
                  rhs: &dyn Fn(usize) -> usize| {
        let witness = (0..n).find(|&i| lhs(i) != rhs(i)).map(|i| AxiomWitness {
            elements: vec![dom.element_name(i).to_string()],
            lhs: tgt.element_name(lhs(i)).to_string(),
            rhs: tgt.element_name(rhs(i)).to_string(),
        });
        AxiomStatus {
            axiom: name.to_string(),
            holds: witness.is_none(),
            witness,
        }
    };
    let axioms = vec![
        status(axiom::PS, b.size(), b, b, &|i| d.p.apply(d.s.apply(i)), &|i| i),
        status(axiom::QK, x.size(), x, x, &|i| d.q.apply(d.k.apply(i)), &|i| i),
        status(axiom::PK, x.size(), x, b, &|i| d.p.apply(d.k.apply(i)), &|_| {
            b.identity()
        }),
        status(axiom::QS, b.size(), b, x, &|i| d.q.apply(d.s.apply(i)), &|_| {
            x.identity()
        }),
        status(axiom::SPLIT, a.size(), a, a, &|i| d.recompose(i), &|i| i),
    ];
    SbpReport {
        ok: axioms.iter().all(|s| s.holds),
        axioms,
    }
}

/// `k` is the kernel of `p`: `k` injective with image exactly `p⁻¹(0)`.
pub fn check_kernel(d: &SemiBiproduct) -> bool {
    d.k.is_injective() && d.k.image() == d.p.preimage_of_identity()
}

/// `p` is the cokernel of `k`: `p` is onto and its kernel pair is the
/// congruence generated by `k(x) ~ 0`.
pub fn check_cokernel(d: &SemiBiproduct) -> bool {
    let pairs: Vec<(usize, usize)> = (0..d.x.size()).map(|x| (d.k.apply(x), d.a.identity())).collect();
    let theta = congruence_closure(&d.a, &pairs);
    d.p.is_surjective() && Partition::kernel_pair(&d.p) == theta
}

/// Pullback of `d` along `h: C -> B`. The carrier `{(a, c) : p(a) = h(c)}`
/// is ordered lexicographically by `(A-index, C-index)`.
pub fn pullback(d: &SemiBiproduct, h: &Homomorphism) -> Result<SemiBiproduct> {
    d.require_verified("pullback")?;
    if !same_monoid(h.codomain(), &d.b) {
        return Err(Error::Structural(format!(
            "`{}` does not land in `{}`",
            h.name(),
            d.b.name()
        )));
    }
    let (a, c) = (&d.a, h.domain());
    let pairs: Vec<(usize, usize)> = (0..a.size())
        .flat_map(|i| (0..c.size()).map(move |j| (i, j)))
        .filter(|&(i, j)| d.p.apply(i) == h.apply(j))
        .collect();
    let index = |pair: (usize, usize)| pairs.binary_search(&pair).expect("pullback is closed");
    let n = pairs.len();
    let mut table = Vec::with_capacity(n * n);
    for &(a1, c1) in &pairs {
        for &(a2, c2) in &pairs {
            table.push(index((a.op(a1, a2), c.op(c1, c2))));
        }
    }
    let carrier = Arc::new(FiniteMonoid::from_parts_unchecked(
        format!("{}x_{}{}", a.name(), d.b.name(), c.name()),
        pairs
            .iter()
            .map(|&(i, j)| format!("({},{})", a.element_name(i), c.element_name(j)))
            .collect(),
        index((a.identity(), c.identity())),
        table,
    ));
    let p2 = Homomorphism::new(Map::from_fn("p", carrier.clone(), c.clone(), |i| pairs[i].1)?)?;
    let k2 = Homomorphism::new(Map::from_fn("k", d.x.clone(), carrier.clone(), |x| {
        index((d.k.apply(x), c.identity()))
    })?)?;
    let q2 = PointedMap::new(Map::from_fn("q", carrier.clone(), d.x.clone(), |i| {
        d.q.apply(pairs[i].0)
    })?)?;
    let s2 = PointedMap::new(Map::from_fn("s", c.clone(), carrier.clone(), |j| {
        index((d.s.apply(h.apply(j)), j))
    })?)?;
    let out = SemiBiproduct::new(p2, k2, q2, s2)?;
    assert!(out.is_verified(), "pullbacks of semi-biproducts are semi-biproducts");
    Ok(out)
}

/// Names of the law checks made by [`verify_morphism`].
pub mod square {
    pub const KERNEL: &str = "f2k=k'f1";
    pub const PROJECTION: &str = "p'f2=f3p";
    pub const SECTION: &str = "f2s=s'f3";
    pub const RETRACTION: &str = "q'f2=f1q";
}

/// A morphism of semi-biproducts: homomorphisms on all three objects.
#[derive(Debug, Clone)]
pub struct SbpMorphism {
    pub source: Arc<SemiBiproduct>,
    pub target: Arc<SemiBiproduct>,
    pub f1: Homomorphism,
    pub f2: Homomorphism,
    pub f3: Homomorphism,
}

impl SbpMorphism {
    pub fn new(
        source: Arc<SemiBiproduct>,
        target: Arc<SemiBiproduct>,
        f1: Homomorphism,
        f2: Homomorphism,
        f3: Homomorphism,
    ) -> Result<Self> {
        let check = |name: &str, f: &Homomorphism, from: &Arc<FiniteMonoid>, to: &Arc<FiniteMonoid>| {
            if same_monoid(f.domain(), from) && same_monoid(f.codomain(), to) {
                Ok(())
            } else {
                Err(Error::Structural(format!(
                    "{name} must run `{}` -> `{}`, got `{}` -> `{}`",
                    from.name(),
                    to.name(),
                    f.domain().name(),
                    f.codomain().name()
                )))
            }
        };
        check("f1", &f1, &source.x, &target.x)?;
        check("f2", &f2, &source.a, &target.a)?;
        check("f3", &f3, &source.b, &target.b)?;
        Ok(SbpMorphism {
            source,
            target,
            f1,
            f2,
            f3,
        })
    }

    pub fn identity(d: Arc<SemiBiproduct>) -> Self {
        SbpMorphism {
            f1: Homomorphism::identity("1_X", d.x.clone()),
            f2: Homomorphism::identity("1_A", d.a.clone()),
            f3: Homomorphism::identity("1_B", d.b.clone()),
            source: d.clone(),
            target: d,
        }
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &SbpMorphism) -> Result<SbpMorphism> {
        SbpMorphism::new(
            first.source.clone(),
            self.target.clone(),
            self.f1.after(&first.f1)?,
            self.f2.after(&first.f2)?,
            self.f3.after(&first.f3)?,
        )
    }
}

/// Checks the four compatibility squares elementwise.
pub fn verify_morphism(m: &SbpMorphism) -> Result<ValidationReport> {
    m.source.require_verified("verify_morphism (source)")?;
    m.target.require_verified("verify_morphism (target)")?;
    let (s, t) = (&*m.source, &*m.target);
    let mut failures = Vec::new();
    let mut square = |law: &str, dom: &FiniteMonoid, lhs: &dyn Fn(usize) -> usize, rhs: &dyn Fn(usize) -> usize| {
        if let Some(i) = (0..dom.size()).find(|&i| lhs(i) != rhs(i)) {
            failures.push(LawFailure::new(law, vec![dom.element_name(i).to_string()]));
        }
    };
    square(square::KERNEL, &s.x, &|x| m.f2.apply(s.k.apply(x)), &|x| {
        t.k.apply(m.f1.apply(x))
    });
    square(square::PROJECTION, &s.a, &|a| t.p.apply(m.f2.apply(a)), &|a| {
        m.f3.apply(s.p.apply(a))
    });
    square(square::SECTION, &s.b, &|b| m.f2.apply(s.s.apply(b)), &|b| {
        t.s.apply(m.f3.apply(b))
    });
    square(square::RETRACTION, &s.a, &|a| t.q.apply(m.f2.apply(a)), &|a| {
        m.f1.apply(s.q.apply(a))
    });
    Ok(ValidationReport::from_failures(failures))
}

/// The biproduct `X -> X×B -> B` with the product projections and
/// injections.
pub fn biproduct(x: &Arc<FiniteMonoid>, b: &Arc<FiniteMonoid>) -> SemiBiproduct {
    let prod = Arc::new(crate::algebra::product(x, b));
    let nb = b.size();
    let hom = |name: &str, m: Result<Map>| Homomorphism::new(m.expect("in range").renamed(name)).expect("hom");
    let p = hom("p", Map::from_fn("p", prod.clone(), b.clone(), |i| i % nb));
    let k = hom(
        "k",
        Map::from_fn("k", x.clone(), prod.clone(), |i| i * nb + b.identity()),
    );
    let q = hom("q", Map::from_fn("q", prod.clone(), x.clone(), |i| i / nb)).to_pointed();
    let s = hom(
        "s",
        Map::from_fn("s", b.clone(), prod.clone(), |j| x.identity() * nb + j),
    )
    .to_pointed();
    SemiBiproduct::new(p, k, q, s).expect("product diagram is well formed")
}
