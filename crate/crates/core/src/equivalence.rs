//! Extraction of the pseudo-action of a semi-biproduct, synthesis of the
//! semi-biproduct on `R = {(x, b) : x^b = x}`, both on morphisms, and the
//! round-trip certificates built from the comparison maps α and β.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{FiniteMonoid, Homomorphism, Map, PointedMap};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::pseudoaction::{verify_pa_morphism, verify_pseudo_action, PaMorphism, PseudoAction};
use crate::report::{LawFailure, ValidationReport};
use crate::semibiproduct::{verify_morphism, SbpMorphism, SemiBiproduct};

/// The pairs `(x, b)` with `x^b = x`, in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntheticCarrier {
    pairs: Vec<(usize, usize)>,
}

impl SyntheticCarrier {
    pub fn new(pa: &PseudoAction) -> Self {
        let (nx, nb) = (pa.x().size(), pa.b().size());
        let pairs = (0..nx)
            .flat_map(|x| (0..nb).map(move |b| (x, b)))
            .filter(|&(x, b)| pa.correct(x, b) == x)
            .collect();
        SyntheticCarrier { pairs }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn index_of(&self, pair: (usize, usize)) -> Option<usize> {
        self.pairs.binary_search(&pair).ok()
    }
}

/// Why a table on the synthetic carrier is not a monoid. Only reachable
/// from pseudo-actions that fail verification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SynthesisFailure {
    MissingIdentity,
    NotClosed { left: String, right: String },
    NotNeutral { element: String },
    NotAssociative { triple: [String; 3] },
}

impl std::fmt::Display for SynthesisFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SynthesisFailure::MissingIdentity => write!(f, "(0,1) is not in the carrier"),
            SynthesisFailure::NotClosed { left, right } => write!(f, "{left} + {right} leaves the carrier"),
            SynthesisFailure::NotNeutral { element } => write!(f, "(0,1) is not neutral for {element}"),
            SynthesisFailure::NotAssociative { triple } => {
                write!(f, "not associative on ({}, {}, {})", triple[0], triple[1], triple[2])
            }
        }
    }
}

fn pair_name(pa: &PseudoAction, (x, b): (usize, usize)) -> String {
    format!("({},{})", pa.x().element_name(x), pa.b().element_name(b))
}

/// Builds the monoid on the synthetic carrier without assuming the
/// pseudo-action is verified, reporting the first obstruction.
pub fn synthetic_monoid(
    pa: &PseudoAction,
    exec: Execution,
) -> std::result::Result<(SyntheticCarrier, Arc<FiniteMonoid>), SynthesisFailure> {
    let carrier = SyntheticCarrier::new(pa);
    let n = carrier.len();
    let unit = carrier
        .index_of((pa.x().identity(), pa.b().identity()))
        .ok_or(SynthesisFailure::MissingIdentity)?;
    let rows: Vec<std::result::Result<Vec<usize>, (usize, usize)>> = exec.map(n, |i| {
        (0..n)
            .map(|j| {
                let sum = pa.add_pairs(carrier.pairs[i], carrier.pairs[j]);
                carrier.index_of(sum).ok_or((i, j))
            })
            .collect()
    });
    let mut table = Vec::with_capacity(n * n);
    for row in rows {
        match row {
            Ok(r) => table.extend(r),
            Err((i, j)) => {
                return Err(SynthesisFailure::NotClosed {
                    left: pair_name(pa, carrier.pairs[i]),
                    right: pair_name(pa, carrier.pairs[j]),
                })
            }
        }
    }
    if let Some(i) = (0..n).find(|&i| table[unit * n + i] != i || table[i * n + unit] != i) {
        return Err(SynthesisFailure::NotNeutral {
            element: pair_name(pa, carrier.pairs[i]),
        });
    }
    let names: Vec<String> = carrier.pairs.iter().map(|&p| pair_name(pa, p)).collect();
    let m = FiniteMonoid::from_parts_unchecked("R".into(), names, unit, table);
    if let Some((a, b, c)) = m.associativity_witness(exec) {
        return Err(SynthesisFailure::NotAssociative {
            triple: [a, b, c].map(|i| m.element_name(i).to_string()),
        });
    }
    Ok((carrier, Arc::new(m)))
}

fn precondition(what: &str) -> Error {
    Error::Precondition(format!("{what} needs a verified pseudo-action"))
}

/// The synthetic semi-biproduct `X -> R -> B` with `k = ⟨1,0⟩`,
/// `p = π_B`, `q = π_X`, `s = ⟨0,1⟩`.
pub fn synthesize(pa: &PseudoAction) -> Result<SemiBiproduct> {
    synthesize_with(pa, Execution::default())
}

pub fn synthesize_with(pa: &PseudoAction, exec: Execution) -> Result<SemiBiproduct> {
    if !verify_pseudo_action(pa).ok {
        return Err(precondition("synthesize"));
    }
    let (carrier, r) =
        synthetic_monoid(pa, exec).unwrap_or_else(|e| panic!("verified pseudo-action gave a non-monoid: {e}"));
    let (x, b) = (pa.x(), pa.b());
    let (zero, one) = (x.identity(), b.identity());
    let at = |pair| carrier.index_of(pair).expect("in carrier");
    let pairs = carrier.pairs().to_vec();
    let p = Homomorphism::new(Map::from_fn("p", r.clone(), b.clone(), |i| pairs[i].1)?)?;
    let k = Homomorphism::new(Map::from_fn("k", x.clone(), r.clone(), |xi| at((xi, one)))?)?;
    let q = PointedMap::new(Map::from_fn("q", r.clone(), x.clone(), |i| pairs[i].0)?)?;
    let s = PointedMap::new(Map::from_fn("s", b.clone(), r, |bi| at((zero, bi)))?)?;
    let d = SemiBiproduct::new(p, k, q, s)?;
    assert!(d.is_verified(), "the synthetic diagram is a semi-biproduct");
    Ok(d)
}

/// `x^b = q(k(x)+s(b))`, `b·x = q(s(b)+k(x))`, `b×b' = q(s(b)+s(b'))`.
pub fn extract(d: &SemiBiproduct) -> Result<PseudoAction> {
    d.require_verified("extract")?;
    let pa = PseudoAction::from_fns(
        d.x().clone(),
        d.b().clone(),
        |x, b| d.correction(x, b),
        |b, x| d.action(b, x),
        |b, b2| d.factor(b, b2),
    )?;
    let rep = verify_pseudo_action(&pa);
    assert!(rep.ok, "extracted pseudo-action fails {:?}", rep.failed().next());
    Ok(pa)
}

/// `(f1, f3)` between the extracted pseudo-actions.
pub fn extract_morphism(m: &SbpMorphism) -> Result<PaMorphism> {
    if !verify_morphism(m)?.ok {
        return Err(Error::Precondition("extract_morphism needs a verified morphism".into()));
    }
    let pm = PaMorphism::new(
        Arc::new(extract(&m.source)?),
        Arc::new(extract(&m.target)?),
        m.f1.clone(),
        m.f3.clone(),
    )?;
    assert!(
        verify_pa_morphism(&pm)?.ok,
        "extracted morphism is a pseudo-action morphism"
    );
    Ok(pm)
}

/// `(f, h, g)` with `h(x, b) = (f(x), g(b))` between the synthetic diagrams.
pub fn synthesize_morphism(m: &PaMorphism) -> Result<SbpMorphism> {
    if !verify_pa_morphism(m)?.ok {
        return Err(Error::Precondition(
            "synthesize_morphism needs a verified morphism".into(),
        ));
    }
    let source = Arc::new(synthesize(&m.source)?);
    let target = Arc::new(synthesize(&m.target)?);
    let (src, tgt) = (SyntheticCarrier::new(&m.source), SyntheticCarrier::new(&m.target));
    let h = Map::from_fn("h", source.a().clone(), target.a().clone(), |i| {
        let (x, b) = src.pairs()[i];
        tgt.index_of((m.f.apply(x), m.g.apply(b)))
            .expect("f(x)^g(b) = f(x^b) = f(x)")
    })?;
    let h = Homomorphism::new(h).expect("h preserves the synthetic operation");
    let out = SbpMorphism::new(source, target, m.f.clone(), h, m.g.clone())?;
    assert!(verify_morphism(&out)?.ok, "synthesized morphism commutes");
    Ok(out)
}

/// `extract(synthesize(pa)) == pa` by array comparison.
pub fn roundtrip_action(pa: &PseudoAction) -> Result<bool> {
    let d = synthesize(pa)?;
    Ok(extract(&d)? == *pa)
}

/// Checks performed by [`roundtrip_diagram`].
pub mod certificate {
    pub const BETA_HOM: &str = "beta-hom";
    pub const ALPHA_HOM: &str = "alpha-hom";
    pub const ALPHA_BETA: &str = "alpha∘beta=1";
    pub const BETA_ALPHA: &str = "beta∘alpha=1";
    pub const BETA_MORPHISM: &str = "(1,beta,1)";
    pub const ALPHA_MORPHISM: &str = "(1,alpha,1)";
    pub const Q_SUM: &str = "q(a+a')=(q(a)+p(a)·q(a')+p(a)×p(a'))^p(a+a')";
    pub const BETA_HOM_AGREES: &str = "beta-hom⇔q-sum";
}

/// The two comparison morphisms between `d` and its synthetic diagram.
#[derive(Debug, Clone)]
pub struct RoundTrip {
    pub synthetic: Arc<SemiBiproduct>,
    /// `(1_X, β, 1_B): d -> synthetic`
    pub beta: SbpMorphism,
    /// `(1_X, α, 1_B): synthetic -> d`
    pub alpha: SbpMorphism,
    pub report: ValidationReport,
}

/// Builds `synthesize(extract(d))` and certifies that α and β are mutually
/// inverse homomorphisms commuting with the structure maps.
pub fn roundtrip_diagram(d: &Arc<SemiBiproduct>) -> Result<RoundTrip> {
    let pa = extract(d)?;
    let synthetic = Arc::new(synthesize(&pa)?);
    let carrier = SyntheticCarrier::new(&pa);
    let (a, r) = (d.a(), synthetic.a());
    let beta = Map::from_fn("beta", a.clone(), r.clone(), |i| {
        carrier
            .index_of(d.beta(i).expect("verified"))
            .expect("q(a)^p(a) = q(a)")
    })?;
    let alpha = Map::from_fn("alpha", r.clone(), a.clone(), |i| {
        let (x, b) = carrier.pairs()[i];
        d.alpha(x, b).expect("verified")
    })?;
    let name = |m: &FiniteMonoid, i: usize| m.element_name(i).to_string();
    let mut failures = Vec::new();

    let beta_wit = beta.preservation_witness();
    if let Some((i, j)) = beta_wit {
        failures.push(LawFailure::new(certificate::BETA_HOM, vec![name(a, i), name(a, j)]));
    }
    if let Some((i, j)) = alpha.preservation_witness() {
        failures.push(LawFailure::new(certificate::ALPHA_HOM, vec![name(r, i), name(r, j)]));
    }
    if let Some(i) = (0..a.size()).find(|&i| alpha.apply(beta.apply(i)) != i) {
        failures.push(LawFailure::new(certificate::ALPHA_BETA, vec![name(a, i)]));
    }
    if let Some(i) = (0..r.size()).find(|&i| beta.apply(alpha.apply(i)) != i) {
        failures.push(LawFailure::new(certificate::BETA_ALPHA, vec![name(r, i)]));
    }

    // β preserves sums iff the q-component of a sum is given by the
    // synthetic formula; checked independently of `beta`.
    let n = a.size();
    let q_sum_wit = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| {
        let (qi, qj, pi, pj) = (d.q().apply(i), d.q().apply(j), d.p().apply(i), d.p().apply(j));
        d.q().apply(a.op(i, j)) != pa.combine(qi, pi, qj, pj)
    });
    if let Some((i, j)) = q_sum_wit {
        failures.push(LawFailure::new(certificate::Q_SUM, vec![name(a, i), name(a, j)]));
    }
    if beta_wit.is_some() != q_sum_wit.is_some() {
        failures.push(LawFailure::new(certificate::BETA_HOM_AGREES, vec![]));
    }

    let (beta, alpha) = if failures.is_empty() {
        (Homomorphism::new(beta)?, Homomorphism::new(alpha)?)
    } else {
        return Ok(RoundTrip {
            beta: SbpMorphism::identity(d.clone()),
            alpha: SbpMorphism::identity(d.clone()),
            synthetic,
            report: ValidationReport::from_failures(failures),
        });
    };
    let id_x = Homomorphism::identity("1_X", d.x().clone());
    let id_b = Homomorphism::identity("1_B", d.b().clone());
    let beta_m = SbpMorphism::new(d.clone(), synthetic.clone(), id_x.clone(), beta, id_b.clone())?;
    let alpha_m = SbpMorphism::new(synthetic.clone(), d.clone(), id_x, alpha, id_b)?;
    for (law, m) in [
        (certificate::BETA_MORPHISM, &beta_m),
        (certificate::ALPHA_MORPHISM, &alpha_m),
    ] {
        let rep = verify_morphism(m)?;
        failures.extend(rep.failures.into_iter().map(|f| {
            let detail = f.law.clone();
            LawFailure::new(law, f.witness).with_detail(detail)
        }));
    }
    Ok(RoundTrip {
        synthetic,
        beta: beta_m,
        alpha: alpha_m,
        report: ValidationReport::from_failures(failures),
    })
}

/// Naturality of α and β along `m: d -> d'`: with `h` the synthesized
/// image of the extracted morphism, `hβ = β'f2` and `f2α = α'h`.
pub fn check_naturality(m: &SbpMorphism) -> Result<ValidationReport> {
    let src = roundtrip_diagram(&m.source)?;
    let tgt = roundtrip_diagram(&m.target)?;
    if !src.report.ok || !tgt.report.ok {
        return Err(Error::Precondition("round trips of both endpoints must certify".into()));
    }
    let h = synthesize_morphism(&extract_morphism(m)?)?;
    let (a, r) = (m.source.a(), src.synthetic.a());
    let mut failures = Vec::new();
    if let Some(i) = (0..a.size()).find(|&i| h.f2.apply(src.beta.f2.apply(i)) != tgt.beta.f2.apply(m.f2.apply(i))) {
        failures.push(LawFailure::new("h∘beta=beta'∘f2", vec![a.element_name(i).to_string()]));
    }
    if let Some(i) = (0..r.size()).find(|&i| m.f2.apply(src.alpha.f2.apply(i)) != tgt.alpha.f2.apply(h.f2.apply(i))) {
        failures.push(LawFailure::new(
            "f2∘alpha=alpha'∘h",
            vec![r.element_name(i).to_string()],
        ));
    }
    Ok(ValidationReport::from_failures(failures))
}
