//! Built-in example records with their expected facts.
//!
//! Everything here is constructed in memory. Each record carries a list of
//! [`Expect`] facts which [`run_record`] re-derives with the engine and
//! compares value by value.

use std::sync::Arc;

use sbp_core::algebra::{classify_map, enumerate_homs, product, FiniteMonoid, Homomorphism, Map, RawMonoid};
use sbp_core::equivalence::{extract, roundtrip_action, roundtrip_diagram, synthesize, SyntheticCarrier};
use sbp_core::json::{
    diagram_from_raw, diagram_to_raw, map_from_raw, pa_from_raw, seed_from_raw, MapKind, MonoidLibrary, NamedPairs,
    RawDiagram, RawMap, RawPseudoAction, RawSeed,
};
use sbp_core::pseudoaction::{check_derived_identities, verify_pseudo_action};
use sbp_core::search::{build_from_relation, complete_extension};
use sbp_core::semibiproduct::{biproduct, check_cokernel, check_kernel, verify, SemiBiproduct};
use sbp_core::{Error, Execution};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

// Records are built once per run; boxing the diagram buys nothing.
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Bundle {
    /// A diagram with inline monoids, plus extra monoids and maps the
    /// expectations refer to by name.
    Diagram {
        diagram: RawDiagram,
        extra_monoids: Vec<RawMonoid>,
        maps: Vec<RawMap>,
    },
    PseudoAction {
        action: RawPseudoAction,
    },
    Seed {
        x: RawMonoid,
        b: RawMonoid,
        seed: RawSeed,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomFailure {
    pub axiom: String,
    pub element: String,
    pub lhs: String,
    pub rhs: String,
}

/// One row of the derived table of an accepted structure:
/// `x⊕x'`, `b×b'`, `b·x`, `x^b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivedRow {
    pub x: String,
    pub b: String,
    pub x2: String,
    pub b2: String,
    pub oplus: String,
    pub times: String,
    pub dot: String,
    pub hat: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "fact", rename_all = "kebab-case")]
pub enum Expect {
    Verified {
        value: bool,
    },
    FailedAxioms {
        value: Vec<AxiomFailure>,
    },
    Schreier {
        value: bool,
    },
    ImageOfBeta {
        value: Vec<[String; 2]>,
    },
    Commutative {
        value: bool,
    },
    MapClass {
        map: String,
        class: String,
    },
    /// `map(l + r)` and `map(l) + map(r)`.
    Violates {
        map: String,
        pair: [String; 2],
        image_of_sum: String,
        sum_of_images: String,
    },
    /// `p ∘ map = 1_B`.
    SplitsP {
        map: String,
    },
    Kernel {
        value: bool,
    },
    Cokernel {
        value: bool,
    },
    JointlyMonoWitness {
        map: String,
        element: String,
    },
    JointlyEpiWitness {
        map: String,
        element: String,
    },
    /// Number of homomorphisms `ḡ: B -> Y` with `map = ḡ ∘ p`.
    Factorizations {
        map: String,
        count: usize,
    },
    Completions {
        count: usize,
        contains_given: bool,
    },
    Beta {
        element: String,
        image: [String; 2],
    },
    Extracted {
        system: String,
        key: String,
        value: String,
    },
    Roundtrip {
        value: bool,
    },
    ActionVerified {
        value: bool,
    },
    DerivedIdentities {
        value: bool,
    },
    RoundtripAction {
        value: bool,
    },
    SyntheticElements {
        value: Vec<String>,
    },
    SyntheticSchreier {
        value: bool,
    },
    CandidateTables {
        value: usize,
    },
    Accepted {
        value: usize,
    },
    Rejections {
        value: Vec<Value>,
    },
    /// Full table of the first accepted structure as `[l, r, l+r]`.
    AcceptedTable {
        value: Vec<[String; 3]>,
    },
    AcceptedRows {
        value: Vec<DerivedRow>,
    },
    AcceptedSchreier {
        value: bool,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct ExampleRecord {
    pub name: String,
    pub summary: String,
    pub bundle: Bundle,
    pub expected: Vec<Expect>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub fact: String,
    pub expected: Value,
    pub actual: Value,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordOutcome {
    pub name: String,
    /// Verdict of the diagram or pseudo-action checks, when the record has
    /// one.
    pub verified: Option<bool>,
    pub reproduced: bool,
    pub checks: Vec<Check>,
}

impl RecordOutcome {
    pub fn check(&self, fact: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.fact == fact)
    }
}

fn s(v: &str) -> String {
    v.to_string()
}

/// A monoid whose elements are single characters; `rows[i]` lists
/// `e_i + e_0, e_i + e_1, ..`.
fn chars(name: &str, elements: &str, rows: &[&str]) -> RawMonoid {
    let els: Vec<String> = elements.chars().map(String::from).collect();
    RawMonoid {
        name: s(name),
        identity: els[0].clone(),
        table: rows
            .iter()
            .map(|r| r.chars().map(|c| Some(c.to_string())).collect())
            .collect(),
        elements: els,
    }
}

fn named(name: &str, elements: &[&str], rows: &[&[&str]]) -> RawMonoid {
    RawMonoid {
        name: s(name),
        elements: elements.iter().map(|e| s(e)).collect(),
        identity: s(elements[0]),
        table: rows.iter().map(|r| r.iter().map(|c| Some(s(c))).collect()).collect(),
    }
}

fn pairs(entries: &[(&str, &str)]) -> NamedPairs {
    NamedPairs(entries.iter().map(|(k, v)| (s(k), s(v))).collect())
}

fn raw_map(name: &str, dom: &str, cod: &str, kind: MapKind, entries: &[(&str, &str)]) -> RawMap {
    RawMap {
        name: Some(s(name)),
        domain: s(dom),
        codomain: s(cod),
        kind,
        map: pairs(entries),
    }
}

fn chain3() -> RawMonoid {
    chars("X", "0ab", &["0ab", "aab", "bbb"])
}

fn chain2(name: &str, e: &str, t: &str) -> RawMonoid {
    named(name, &[e, t], &[&[e, t], &[t, t]])
}

const A_TABLES: [[&str; 5]; 8] = [
    ["0abcd", "aabcd", "bbbcd", "ccddd", "ddddd"],
    ["0abcd", "aabcd", "bbbcd", "cccdc", "dddcd"],
    ["0abcd", "aabcc", "bbbcc", "ccccc", "ddccc"],
    ["0abcd", "aabcc", "bbbcc", "ccccc", "dcccc"],
    ["0abcd", "aabdd", "bbbdd", "cccdd", "ddddd"],
    ["0abcd", "aabdd", "bbbdd", "cdddd", "ddddd"],
    ["0abcd", "aabdd", "bbbdd", "ccccc", "ddddd"],
    ["0abcd", "aabdd", "bbbdd", "cddcd", "ddddd"],
];

fn case_study(i: usize) -> ExampleRecord {
    let a = format!("A{i}");
    let am = chars(&a, "0abcd", &A_TABLES[i - 1]);
    let diagram = RawDiagram {
        monoids: Some(vec![chain3(), am, chain2("B", "0", "c")]),
        bundle: None,
        x: s("X"),
        a: a.clone(),
        b: s("B"),
        p: raw_map(
            "p",
            &a,
            "B",
            MapKind::Hom,
            &[("0", "0"), ("a", "0"), ("b", "0"), ("c", "c"), ("d", "c")],
        ),
        k: raw_map("k", "X", &a, MapKind::Hom, &[("0", "0"), ("a", "a"), ("b", "b")]),
        q: raw_map(
            "q",
            &a,
            "X",
            MapKind::Pointed,
            &[("0", "0"), ("a", "a"), ("b", "b"), ("c", "0"), ("d", "a")],
        ),
        s: raw_map("s", "B", &a, MapKind::Pointed, &[("0", "0"), ("c", "c")]),
    };
    let semi = i >= 5;
    let s_hom = matches!(i, 3 | 4 | 7 | 8);
    let mut expected = vec![
        Expect::Verified { value: semi },
        Expect::FailedAxioms {
            value: if semi {
                vec![]
            } else {
                vec![AxiomFailure {
                    axiom: s("kq+sp=1"),
                    element: s("d"),
                    lhs: s("c"),
                    rhs: s("d"),
                }]
            },
        },
        Expect::MapClass {
            map: s("s"),
            class: s(if s_hom { "homomorphism" } else { "pointed_only" }),
        },
        Expect::MapClass {
            map: s("q"),
            class: s("pointed_only"),
        },
        Expect::Violates {
            map: s("q"),
            pair: [s("b"), s("c")],
            image_of_sum: s(if semi { "a" } else { "0" }),
            sum_of_images: s("b"),
        },
        Expect::Commutative {
            value: i.is_multiple_of(2),
        },
        Expect::Kernel { value: true },
        Expect::Cokernel { value: i != 2 },
        Expect::Completions {
            count: if i <= 2 { 0 } else { 2 },
            contains_given: semi,
        },
    ];
    let mut extra_monoids = Vec::new();
    let mut maps = Vec::new();
    if i == 1 {
        maps.push(raw_map("s'", "B", &a, MapKind::Hom, &[("0", "0"), ("c", "d")]));
        expected.push(Expect::MapClass {
            map: s("s'"),
            class: s("homomorphism"),
        });
        expected.push(Expect::SplitsP { map: s("s'") });
    }
    if matches!(i, 3 | 4) {
        expected.push(Expect::SplitsP { map: s("s") });
    }
    if i <= 2 {
        extra_monoids.push(chars("Z", "0d", &["0d", "dd"]));
        maps.push(raw_map("f", "Z", &a, MapKind::Hom, &[("0", "0"), ("d", "d")]));
        expected.push(Expect::JointlyMonoWitness {
            map: s("f"),
            element: s("d"),
        });
    }
    if i == 2 {
        extra_monoids.push(chars("Y", "0cd", &["0cd", "cdc", "dcd"]));
        maps.push(raw_map(
            "g",
            &a,
            "Y",
            MapKind::Hom,
            &[("0", "0"), ("a", "0"), ("b", "0"), ("c", "c"), ("d", "d")],
        ));
        expected.push(Expect::JointlyEpiWitness {
            map: s("g"),
            element: s("d"),
        });
        expected.push(Expect::Factorizations { map: s("g"), count: 0 });
    }
    if semi {
        expected.push(Expect::Schreier { value: false });
        expected.push(Expect::ImageOfBeta {
            value: [("0", "0"), ("0", "c"), ("a", "0"), ("a", "c"), ("b", "0")]
                .map(|(x, b)| [s(x), s(b)])
                .to_vec(),
        });
        expected.push(Expect::Extracted {
            system: s("rho"),
            key: s("b,c"),
            value: s("a"),
        });
        expected.push(Expect::Roundtrip { value: true });
    }
    ExampleRecord {
        name: a,
        summary: format!(
            "X = 3-chain, B = 2-chain, A{i}; {}",
            if semi { "a semi-biproduct" } else { "kq+sp fails at d" }
        ),
        bundle: Bundle::Diagram {
            diagram,
            extra_monoids,
            maps,
        },
        expected,
    }
}

fn example_seven() -> ExampleRecord {
    let diagram = RawDiagram {
        monoids: Some(vec![
            chain2("X", "1", "a"),
            named(
                "A",
                &["1", "a", "b"],
                &[&["1", "a", "b"], &["a", "a", "b"], &["b", "b", "b"]],
            ),
            chain2("B", "1", "b"),
        ]),
        bundle: None,
        x: s("X"),
        a: s("A"),
        b: s("B"),
        p: raw_map("p", "A", "B", MapKind::Hom, &[("1", "1"), ("a", "1"), ("b", "b")]),
        k: raw_map("k", "X", "A", MapKind::Hom, &[("1", "1"), ("a", "a")]),
        q: raw_map("q", "A", "X", MapKind::Pointed, &[("1", "1"), ("a", "a"), ("b", "1")]),
        s: raw_map("s", "B", "A", MapKind::Hom, &[("1", "1"), ("b", "b")]),
    };
    ExampleRecord {
        name: s("example-7"),
        summary: s("{1,a} -> {1,a,b} -> {1,b} with the obvious q and s"),
        bundle: Bundle::Diagram {
            diagram,
            extra_monoids: vec![],
            maps: vec![],
        },
        expected: vec![
            Expect::Verified { value: true },
            Expect::Schreier { value: false },
            Expect::ImageOfBeta {
                value: vec![[s("1"), s("1")], [s("1"), s("b")], [s("a"), s("1")]],
            },
            Expect::Beta {
                element: s("b"),
                image: [s("1"), s("b")],
            },
            Expect::Extracted {
                system: s("rho"),
                key: s("a,b"),
                value: s("1"),
            },
            Expect::Extracted {
                system: s("phi"),
                key: s("b,a"),
                value: s("1"),
            },
            Expect::Extracted {
                system: s("gamma"),
                key: s("b,b"),
                value: s("1"),
            },
            Expect::Roundtrip { value: true },
        ],
    }
}

/// `X = {1,a}` idempotent, `B = {1,b}` a group, `A = {1} ∪ {a,b}` with
/// `{a,b}` a group of order two.
fn group_quotient() -> ExampleRecord {
    let diagram = RawDiagram {
        monoids: Some(vec![
            chain2("X", "1", "a"),
            named(
                "A",
                &["1", "a", "b"],
                &[&["1", "a", "b"], &["a", "a", "b"], &["b", "b", "a"]],
            ),
            named("B", &["1", "b"], &[&["1", "b"], &["b", "1"]]),
        ]),
        bundle: None,
        x: s("X"),
        a: s("A"),
        b: s("B"),
        p: raw_map("p", "A", "B", MapKind::Hom, &[("1", "1"), ("a", "1"), ("b", "b")]),
        k: raw_map("k", "X", "A", MapKind::Hom, &[("1", "1"), ("a", "a")]),
        q: raw_map("q", "A", "X", MapKind::Pointed, &[("1", "1"), ("a", "a"), ("b", "1")]),
        s: raw_map("s", "B", "A", MapKind::Pointed, &[("1", "1"), ("b", "b")]),
    };
    ExampleRecord {
        name: s("group-quotient"),
        summary: s("B a group, X not right cancellable: a non-trivial correction system"),
        bundle: Bundle::Diagram {
            diagram,
            extra_monoids: vec![],
            maps: vec![],
        },
        expected: vec![
            Expect::Verified { value: true },
            Expect::Schreier { value: false },
            Expect::Extracted {
                system: s("rho"),
                key: s("a,b"),
                value: s("1"),
            },
            Expect::Extracted {
                system: s("gamma"),
                key: s("b,b"),
                value: s("a"),
            },
            Expect::Kernel { value: true },
            Expect::Cokernel { value: true },
            Expect::Roundtrip { value: true },
        ],
    }
}

fn product_baseline() -> ExampleRecord {
    let x = Arc::new(FiniteMonoid::from_names("X", &["0", "s"], "0", &[&["0", "s"], &["s", "s"]]).expect("chain"));
    let b = Arc::new(FiniteMonoid::from_names("B", &["1", "t"], "1", &[&["1", "t"], &["t", "t"]]).expect("chain"));
    let d = biproduct(&x, &b);
    let prod = product(&x, &b);
    let image = (0..prod.size())
        .map(|i| [s(x.element_name(i / 2)), s(b.element_name(i % 2))])
        .collect();
    ExampleRecord {
        name: s("product"),
        summary: s("the biproduct X -> X×B -> B of two 2-chains"),
        bundle: Bundle::Diagram {
            diagram: diagram_to_raw(&d),
            extra_monoids: vec![],
            maps: vec![],
        },
        expected: vec![
            Expect::Verified { value: true },
            Expect::Schreier { value: true },
            Expect::ImageOfBeta { value: image },
            Expect::MapClass {
                map: s("q"),
                class: s("homomorphism"),
            },
            Expect::MapClass {
                map: s("s"),
                class: s("homomorphism"),
            },
            Expect::Commutative { value: true },
            Expect::Cokernel { value: true },
            Expect::Roundtrip { value: true },
        ],
    }
}

fn case_two_action() -> ExampleRecord {
    let action = RawPseudoAction {
        x: chain2("X", "0", "s"),
        b: chain2("B", "1", "t"),
        rho: pairs(&[("0,1", "0"), ("0,t", "0"), ("s,1", "s"), ("s,t", "0")]),
        phi: pairs(&[("1,0", "0"), ("1,s", "s"), ("t,0", "0"), ("t,s", "0")]),
        gamma: pairs(&[("1,1", "0"), ("1,t", "0"), ("t,1", "0"), ("t,t", "0")]),
    };
    ExampleRecord {
        name: s("case-2-action"),
        summary: s("t·s = 0, s^t = 0, γ ≡ 0 on X = {0,s}, B = {1,t}"),
        bundle: Bundle::PseudoAction { action },
        expected: vec![
            Expect::ActionVerified { value: true },
            Expect::DerivedIdentities { value: true },
            Expect::SyntheticElements {
                value: vec![s("(0,1)"), s("(0,t)"), s("(s,1)")],
            },
            Expect::SyntheticSchreier { value: false },
            Expect::RoundtripAction { value: true },
        ],
    }
}

fn relation_rows(rows: &[[&str; 8]]) -> Vec<DerivedRow> {
    rows.iter()
        .map(|r| DerivedRow {
            x: s(r[0]),
            b: s(r[1]),
            x2: s(r[2]),
            b2: s(r[3]),
            oplus: s(r[4]),
            times: s(r[5]),
            dot: s(r[6]),
            hat: s(r[7]),
        })
        .collect()
}

fn table3(rows: &[[&str; 3]]) -> Vec<[String; 3]> {
    rows.iter().map(|r| r.map(s)).collect()
}

fn relation_seed() -> RawSeed {
    RawSeed {
        relation: vec![[s("0"), s("1")], [s("s"), s("1")], [s("0"), s("t")]],
        u: None,
        q: None,
    }
}

fn relation_chain() -> ExampleRecord {
    let x = chain2("X", "0", "s");
    ExampleRecord {
        name: s("relation-chain"),
        summary: s("R = {(0,1),(s,1),(0,t)} over X = {0,s} idempotent, B = {1,t}"),
        bundle: Bundle::Seed {
            seed: relation_seed(),
            x,
            b: chain2("B", "1", "t"),
        },
        expected: vec![
            Expect::CandidateTables { value: 2 },
            Expect::Accepted { value: 1 },
            Expect::Rejections {
                value: vec![json!({"reason": "⊕≠+", "x": "s", "y": "s", "oplus": "0", "sum": "s"})],
            },
            Expect::AcceptedTable {
                value: table3(&[
                    ["(0,1)", "(0,1)", "(0,1)"],
                    ["(0,1)", "(s,1)", "(s,1)"],
                    ["(0,1)", "(0,t)", "(0,t)"],
                    ["(s,1)", "(0,1)", "(s,1)"],
                    ["(s,1)", "(s,1)", "(s,1)"],
                    ["(s,1)", "(0,t)", "(0,t)"],
                    ["(0,t)", "(0,1)", "(0,t)"],
                    ["(0,t)", "(s,1)", "(0,t)"],
                    ["(0,t)", "(0,t)", "(0,t)"],
                ]),
            },
            Expect::AcceptedRows {
                value: relation_rows(&[
                    ["0", "1", "0", "1", "0", "0", "0", "0"],
                    ["0", "t", "s", "1", "s", "0", "0", "0"],
                    ["s", "1", "0", "t", "s", "0", "s", "s"],
                    ["s", "t", "s", "t", "s", "0", "0", "0"],
                ]),
            },
            Expect::AcceptedSchreier { value: false },
        ],
    }
}

fn relation_sign() -> ExampleRecord {
    let x = named("X", &["0", "s"], &[&["0", "s"], &["s", "0"]]);
    ExampleRecord {
        name: s("relation-sign"),
        summary: s("the same R over X = {0,s} with s+s = 0: the {1,-1,0} multiplication"),
        bundle: Bundle::Seed {
            seed: relation_seed(),
            x,
            b: chain2("B", "1", "t"),
        },
        expected: vec![
            Expect::CandidateTables { value: 2 },
            Expect::Accepted { value: 1 },
            Expect::Rejections {
                value: vec![json!({"reason": "⊕≠+", "x": "s", "y": "s", "oplus": "s", "sum": "0"})],
            },
            Expect::AcceptedTable {
                value: table3(&[
                    ["(0,1)", "(0,1)", "(0,1)"],
                    ["(0,1)", "(s,1)", "(s,1)"],
                    ["(0,1)", "(0,t)", "(0,t)"],
                    ["(s,1)", "(0,1)", "(s,1)"],
                    ["(s,1)", "(s,1)", "(0,1)"],
                    ["(s,1)", "(0,t)", "(0,t)"],
                    ["(0,t)", "(0,1)", "(0,t)"],
                    ["(0,t)", "(s,1)", "(0,t)"],
                    ["(0,t)", "(0,t)", "(0,t)"],
                ]),
            },
            Expect::AcceptedSchreier { value: false },
        ],
    }
}

/// The full built-in corpus in a fixed order.
pub fn examples_corpus() -> Vec<ExampleRecord> {
    let mut out: Vec<ExampleRecord> = (1..=8).map(case_study).collect();
    out.push(example_seven());
    out.push(relation_chain());
    out.push(relation_sign());
    out.push(case_two_action());
    out.push(group_quotient());
    out.push(product_baseline());
    out
}

pub fn find_record(name: &str) -> Option<ExampleRecord> {
    examples_corpus().into_iter().find(|r| r.name == name)
}

/// Every monoid the record carries.
pub fn record_monoids(rec: &ExampleRecord) -> Vec<RawMonoid> {
    match &rec.bundle {
        Bundle::Diagram {
            diagram, extra_monoids, ..
        } => diagram.monoids.iter().flatten().chain(extra_monoids).cloned().collect(),
        Bundle::PseudoAction { action } => vec![action.x.clone(), action.b.clone()],
        Bundle::Seed { x, b, .. } => vec![x.clone(), b.clone()],
    }
}

/// The diagram of a diagram record, with the extra maps resolved.
pub fn load_diagram(rec: &ExampleRecord, max_size: usize) -> sbp_core::Result<(Arc<SemiBiproduct>, Vec<Map>)> {
    let Bundle::Diagram {
        diagram,
        extra_monoids,
        maps,
    } = &rec.bundle
    else {
        return Err(Error::Structural(format!("`{}` is not a diagram record", rec.name)));
    };
    let mut lib = MonoidLibrary::new(max_size);
    let d = Arc::new(diagram_from_raw(&mut lib, diagram)?);
    lib.extend(extra_monoids.iter().cloned())?;
    let maps = maps
        .iter()
        .map(|m| map_from_raw(&lib, m, "map").map(|(m, _)| m))
        .collect::<sbp_core::Result<Vec<_>>>()?;
    Ok((d, maps))
}

fn err_value(e: impl std::fmt::Display) -> Value {
    json!({ "error": e.to_string() })
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data")
}

struct Ctx<'a> {
    d: &'a Arc<SemiBiproduct>,
    maps: &'a [Map],
    exec: Execution,
}

impl Ctx<'_> {
    fn map(&self, name: &str) -> Option<Map> {
        let d = self.d;
        match name {
            "p" => Some(d.p().as_map().clone()),
            "k" => Some(d.k().as_map().clone()),
            "q" => Some((**d.q()).clone()),
            "s" => Some((**d.s()).clone()),
            _ => self.maps.iter().find(|m| m.name() == name).cloned(),
        }
    }

    fn hom(&self, name: &str) -> Result<Homomorphism, Value> {
        let m = self.map(name).ok_or_else(|| err_value(format!("no map `{name}`")))?;
        Homomorphism::new(m).map_err(err_value)
    }

    /// `(fact, expected, actual)`; `None` when the fact does not apply to a
    /// diagram.
    fn eval(&self, e: &Expect) -> Option<(String, Value, Value)> {
        let d = self.d;
        let (a, x, b) = (d.a(), d.x(), d.b());
        let nm = |m: &FiniteMonoid, i: usize| s(m.element_name(i));
        Some(match e {
            Expect::Verified { value } => (s("verified"), json!(value), json!(verify(d).ok)),
            Expect::FailedAxioms { value } => {
                let actual: Vec<AxiomFailure> = verify(d)
                    .failed()
                    .map(|st| {
                        let w = st.witness.as_ref().expect("failed axioms carry a witness");
                        AxiomFailure {
                            axiom: st.axiom.clone(),
                            element: w.elements.join(","),
                            lhs: w.lhs.clone(),
                            rhs: w.rhs.clone(),
                        }
                    })
                    .collect();
                (s("failed-axioms"), to_value(value), to_value(&actual))
            }
            Expect::Schreier { value } => (
                s("schreier"),
                json!(value),
                d.is_schreier().map(|v| json!(v)).unwrap_or_else(err_value),
            ),
            Expect::ImageOfBeta { value } => {
                let actual = d
                    .image_of_beta()
                    .map(|set| {
                        let v: Vec<[String; 2]> = set.iter().map(|&(xi, bi)| [nm(x, xi), nm(b, bi)]).collect();
                        to_value(&v)
                    })
                    .unwrap_or_else(err_value);
                (s("image-of-beta"), to_value(value), actual)
            }
            Expect::Commutative { value } => (s("commutative"), json!(value), json!(a.is_commutative())),
            Expect::MapClass { map, class } => {
                let actual = self
                    .map(map)
                    .map(|m| json!(classify_map(&m).label()))
                    .unwrap_or_else(|| err_value(format!("no map `{map}`")));
                (format!("class({map})"), json!(class), actual)
            }
            Expect::Violates {
                map,
                pair,
                image_of_sum,
                sum_of_images,
            } => {
                let actual = match self.map(map) {
                    None => err_value(format!("no map `{map}`")),
                    Some(m) => {
                        let (dom, cod) = (m.domain(), m.codomain());
                        match (dom.index_of(&pair[0]), dom.index_of(&pair[1])) {
                            (Some(l), Some(r)) => json!({
                                "image_of_sum": nm(cod, m.apply(dom.op(l, r))),
                                "sum_of_images": nm(cod, cod.op(m.apply(l), m.apply(r))),
                            }),
                            _ => err_value("unknown element"),
                        }
                    }
                };
                (
                    format!("{map}({}+{})", pair[0], pair[1]),
                    json!({"image_of_sum": image_of_sum, "sum_of_images": sum_of_images}),
                    actual,
                )
            }
            Expect::SplitsP { map } => {
                let actual = match self.map(map) {
                    None => err_value(format!("no map `{map}`")),
                    Some(m) => json!((0..b.size()).all(|i| d.p().apply(m.apply(i)) == i)),
                };
                (format!("p∘{map}=1"), json!(true), actual)
            }
            Expect::Kernel { value } => (s("kernel"), json!(value), json!(check_kernel(d))),
            Expect::Cokernel { value } => (s("cokernel"), json!(value), json!(check_cokernel(d))),
            Expect::JointlyMonoWitness { map, element } => {
                let actual = self.hom(map).and_then(|f| {
                    d.jointly_mono_witness(&f)
                        .map(|w| json!(w.map(|i| nm(f.domain(), i))))
                        .map_err(err_value)
                });
                (
                    format!("jointly-mono({map})"),
                    json!(element),
                    actual.unwrap_or_else(|e| e),
                )
            }
            Expect::JointlyEpiWitness { map, element } => {
                let actual = self.hom(map).and_then(|g| {
                    d.jointly_epi_witness(&g)
                        .map(|w| json!(w.map(|i| nm(a, i))))
                        .map_err(err_value)
                });
                (
                    format!("jointly-epi({map})"),
                    json!(element),
                    actual.unwrap_or_else(|e| e),
                )
            }
            Expect::Factorizations { map, count } => {
                let actual = self.hom(map).map(|g| {
                    let found = enumerate_homs(b, g.codomain(), self.exec)
                        .into_iter()
                        .filter(|gb| (0..a.size()).all(|i| gb.apply(d.p().apply(i)) == g.apply(i)))
                        .count();
                    json!(found)
                });
                (
                    format!("factorizations({map})"),
                    json!(count),
                    actual.unwrap_or_else(|e| e),
                )
            }
            Expect::Completions { count, contains_given } => {
                let actual = complete_extension(d.k(), d.p(), self.exec)
                    .map(|list| {
                        let given = list
                            .iter()
                            .any(|(q, s2)| q.mapping() == d.q().mapping() && s2.mapping() == d.s().mapping());
                        json!({"count": list.len(), "contains_given": given})
                    })
                    .unwrap_or_else(err_value);
                (
                    s("completions"),
                    json!({"count": count, "contains_given": contains_given}),
                    actual,
                )
            }
            Expect::Beta { element, image } => {
                let actual = a
                    .require(element)
                    .and_then(|i| d.beta(i))
                    .map(|(xi, bi)| json!([nm(x, xi), nm(b, bi)]))
                    .unwrap_or_else(err_value);
                (format!("beta({element})"), json!(image), actual)
            }
            Expect::Extracted { system, key, value } => {
                let actual = extract(d)
                    .and_then(|pa| {
                        let raw = sbp_core::json::pa_to_raw(&pa);
                        let table = match system.as_str() {
                            "rho" => raw.rho,
                            "phi" => raw.phi,
                            _ => raw.gamma,
                        };
                        table
                            .0
                            .into_iter()
                            .find(|(k, _)| k == key)
                            .map(|(_, v)| json!(v))
                            .ok_or_else(|| Error::Structural(format!("no entry `{key}`")))
                    })
                    .unwrap_or_else(err_value);
                (format!("{system}({key})"), json!(value), actual)
            }
            Expect::Roundtrip { value } => (
                s("roundtrip"),
                json!(value),
                roundtrip_diagram(d)
                    .map(|rt| json!(rt.report.ok))
                    .unwrap_or_else(err_value),
            ),
            _ => return None,
        })
    }
}

fn eval_action(raw: &RawPseudoAction, max_size: usize, e: &Expect) -> Option<(String, Value, Value)> {
    let pa = match pa_from_raw(raw, max_size) {
        Ok(pa) => pa,
        Err(err) => return Some((s("load"), json!("ok"), err_value(err))),
    };
    Some(match e {
        Expect::ActionVerified { value } => (s("verified"), json!(value), json!(verify_pseudo_action(&pa).ok)),
        Expect::DerivedIdentities { value } => (
            s("derived-identities"),
            json!(value),
            check_derived_identities(&pa)
                .map(|r| json!(r.ok))
                .unwrap_or_else(err_value),
        ),
        Expect::RoundtripAction { value } => (
            s("roundtrip-action"),
            json!(value),
            roundtrip_action(&pa).map(|v| json!(v)).unwrap_or_else(err_value),
        ),
        Expect::SyntheticElements { value } => {
            let names: Vec<String> = SyntheticCarrier::new(&pa)
                .pairs()
                .iter()
                .map(|&(xi, bi)| format!("({},{})", pa.x().element_name(xi), pa.b().element_name(bi)))
                .collect();
            (s("synthetic-elements"), json!(value), json!(names))
        }
        Expect::SyntheticSchreier { value } => (
            s("synthetic-schreier"),
            json!(value),
            synthesize(&pa)
                .and_then(|d| d.is_schreier())
                .map(|v| json!(v))
                .unwrap_or_else(err_value),
        ),
        _ => return None,
    })
}

fn eval_seed(
    x: &RawMonoid,
    b: &RawMonoid,
    raw: &RawSeed,
    max_size: usize,
    exec: Execution,
    facts: &[Expect],
) -> Vec<(String, Value, Value)> {
    let seed = (|| {
        let x = Arc::new(x.clone().into_monoid(max_size)?);
        let b = Arc::new(b.clone().into_monoid(max_size)?);
        seed_from_raw(x, b, raw)
    })();
    let seed = match seed {
        Ok(s) => s,
        Err(err) => return vec![(s("load"), json!("ok"), err_value(err))],
    };
    let res = build_from_relation(&seed, exec);
    let first = res.accepted.first();
    let (xm, bm) = (seed.x(), seed.b());
    facts
        .iter()
        .filter_map(|e| {
            Some(match e {
                Expect::CandidateTables { value } => (s("candidate-tables"), json!(value), json!(res.candidate_tables)),
                Expect::Accepted { value } => (s("accepted"), json!(value), json!(res.accepted.len())),
                Expect::Rejections { value } => {
                    let actual: Vec<Value> = res.rejected.iter().map(|r| to_value(&r.reason)).collect();
                    (s("rejections"), json!(value), json!(actual))
                }
                Expect::AcceptedTable { value } => {
                    let actual = first.map(|acc| {
                        let m = &acc.monoid;
                        // rows in the order of the expected table
                        let order: Vec<usize> = value.iter().filter_map(|r| m.index_of(&r[0])).collect();
                        let mut seen = Vec::new();
                        for i in order {
                            if !seen.contains(&i) {
                                seen.push(i);
                            }
                        }
                        let rows: Vec<[String; 3]> = seen
                            .iter()
                            .flat_map(|&l| seen.iter().map(move |&r| (l, r)))
                            .map(|(l, r)| {
                                [
                                    s(m.element_name(l)),
                                    s(m.element_name(r)),
                                    s(m.element_name(m.op(l, r))),
                                ]
                            })
                            .collect();
                        to_value(&rows)
                    });
                    (s("accepted-table"), to_value(value), actual.unwrap_or(Value::Null))
                }
                Expect::AcceptedRows { value } => {
                    let actual = first.map(|acc| {
                        let t = &acc.tables;
                        let (nx, nb) = (xm.size(), bm.size());
                        let rows: Option<Vec<DerivedRow>> = value
                            .iter()
                            .map(|r| {
                                let (xi, bi) = (xm.index_of(&r.x)?, bm.index_of(&r.b)?);
                                let (x2, b2) = (xm.index_of(&r.x2)?, bm.index_of(&r.b2)?);
                                Some(DerivedRow {
                                    x: r.x.clone(),
                                    b: r.b.clone(),
                                    x2: r.x2.clone(),
                                    b2: r.b2.clone(),
                                    oplus: s(xm.element_name(t.oplus[xi * nx + x2])),
                                    times: s(xm.element_name(t.times[bi * nb + b2])),
                                    dot: s(xm.element_name(t.dot[bi * nx + xi])),
                                    hat: s(xm.element_name(t.hat[xi * nb + bi])),
                                })
                            })
                            .collect();
                        rows.map(|r| to_value(&r))
                            .unwrap_or_else(|| err_value("unknown element"))
                    });
                    (s("accepted-rows"), to_value(value), actual.unwrap_or(Value::Null))
                }
                Expect::AcceptedSchreier { value } => {
                    let actual = first
                        .map(|acc| acc.diagram.is_schreier().map(|v| json!(v)).unwrap_or_else(err_value))
                        .unwrap_or(Value::Null);
                    (s("accepted-schreier"), json!(value), actual)
                }
                _ => return None,
            })
        })
        .collect()
}

/// Re-derives every expected fact of `rec`.
pub fn run_record(rec: &ExampleRecord, max_size: usize, exec: Execution) -> RecordOutcome {
    let mut verified = None;
    let triples: Vec<(String, Value, Value)> = match &rec.bundle {
        Bundle::Diagram { .. } => match load_diagram(rec, max_size) {
            Ok((d, maps)) => {
                verified = Some(d.is_verified());
                let ctx = Ctx {
                    d: &d,
                    maps: &maps,
                    exec,
                };
                rec.expected.iter().filter_map(|e| ctx.eval(e)).collect()
            }
            Err(err) => vec![(s("load"), json!("ok"), err_value(err))],
        },
        Bundle::PseudoAction { action } => {
            verified = pa_from_raw(action, max_size)
                .ok()
                .map(|pa| verify_pseudo_action(&pa).ok);
            rec.expected
                .iter()
                .filter_map(|e| eval_action(action, max_size, e))
                .collect()
        }
        Bundle::Seed { x, b, seed } => eval_seed(x, b, seed, max_size, exec, &rec.expected),
    };
    let mut checks: Vec<Check> = triples
        .into_iter()
        .map(|(fact, expected, actual)| Check {
            pass: expected == actual,
            fact,
            expected,
            actual,
        })
        .collect();
    if checks.len() != rec.expected.len() && checks.iter().all(|c| c.fact != "load") {
        checks.push(Check {
            fact: s("applicable-facts"),
            expected: json!(rec.expected.len()),
            actual: json!(checks.len()),
            pass: false,
        });
    }
    RecordOutcome {
        name: rec.name.clone(),
        verified,
        reproduced: checks.iter().all(|c| c.pass),
        checks,
    }
}
