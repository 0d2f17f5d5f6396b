//! Pseudo-actions of a monoid `B` on a monoid `X`: a correction system
//! `x^b`, a pre-action `b·x` and a factor system `b×b'`, all stored as dense
//! index arrays so that two pseudo-actions compare by array equality.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{same_monoid, FiniteMonoid, Homomorphism};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::report::{LawFailure, ValidationReport};

/// Law names checked by [`verify_pseudo_action`].
pub mod law {
    pub const CORRECTION_UNIT: &str = "x^1=x";
    pub const CORRECTION_ZERO: &str = "0^b=0";
    pub const ACTION_UNIT: &str = "1·x=x";
    pub const ACTION_ZERO: &str = "b·0=0";
    pub const FACTOR_LEFT_UNIT: &str = "1×b=0";
    pub const FACTOR_RIGHT_UNIT: &str = "b×1=0";
    pub const MAJOR: &str = "major";
    pub const ACTION_COMPAT: &str = "(b·x)^b=b·x";
    pub const FACTOR_COMPAT: &str = "(b×b')^bb'=b×b'";
}

/// Identities implied by the major condition, checked by
/// [`check_derived_identities`].
pub mod derived {
    pub const IDEMPOTENT: &str = "(x^b)^b=x^b";
    pub const ACTION_SUM: &str = "(b·(x+y))^b=(b·x+b·y)^b";
    pub const CORRECT_RIGHT: &str = "(x+y)^b=(x+y^b)^b";
    pub const CORRECT_ACTION: &str = "(x^b+b·y)^b=(x+(b·y)^b)^b";
    pub const ACTION_SPLIT: &str = "(b·(x+y))^b=((b·x)^b+b·y)^b";
    pub const FACTOR_COCYCLE: &str = "factor-cocycle";
    pub const FACTOR_CORRECTION: &str = "(x^b+b×b')^bb'=(x+b×b')^bb'";
    pub const CONJUGATION: &str = "conjugation";
}

#[derive(Clone, PartialEq, Eq)]
pub struct PseudoAction {
    x: Arc<FiniteMonoid>,
    b: Arc<FiniteMonoid>,
    /// `rho[x * |B| + b] = x^b`
    rho: Vec<usize>,
    /// `phi[b * |X| + x] = b·x`
    phi: Vec<usize>,
    /// `gamma[b * |B| + b'] = b×b'`
    gamma: Vec<usize>,
}

impl std::fmt::Debug for PseudoAction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (x, b) = (&self.x, &self.b);
        writeln!(f, "PseudoAction of {} on {}", b.name(), x.name())?;
        for xi in 0..x.size() {
            for bi in 0..b.size() {
                write!(
                    f,
                    "  {}^{}={}",
                    x.element_name(xi),
                    b.element_name(bi),
                    x.element_name(self.correct(xi, bi))
                )?;
            }
            writeln!(f)?;
        }
        for bi in 0..b.size() {
            for xi in 0..x.size() {
                write!(
                    f,
                    "  {}·{}={}",
                    b.element_name(bi),
                    x.element_name(xi),
                    x.element_name(self.act(bi, xi))
                )?;
            }
            writeln!(f)?;
        }
        for b1 in 0..b.size() {
            for b2 in 0..b.size() {
                write!(
                    f,
                    "  {}×{}={}",
                    b.element_name(b1),
                    b.element_name(b2),
                    x.element_name(self.factor(b1, b2))
                )?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl PseudoAction {
    /// Checks array dimensions and ranges only; the laws are checked by
    /// [`verify_pseudo_action`].
    pub fn new(
        x: Arc<FiniteMonoid>,
        b: Arc<FiniteMonoid>,
        rho: Vec<usize>,
        phi: Vec<usize>,
        gamma: Vec<usize>,
    ) -> Result<Self> {
        let (nx, nb) = (x.size(), b.size());
        for (name, arr, len) in [
            ("rho", &rho, nx * nb),
            ("phi", &phi, nb * nx),
            ("gamma", &gamma, nb * nb),
        ] {
            if arr.len() != len {
                return Err(Error::Structural(format!(
                    "{name} has {} entries, expected {len}",
                    arr.len()
                )));
            }
            if arr.iter().any(|&v| v >= nx) {
                return Err(Error::Structural(format!("{name} has a value outside `{}`", x.name())));
            }
        }
        Ok(PseudoAction { x, b, rho, phi, gamma })
    }

    pub fn from_fns(
        x: Arc<FiniteMonoid>,
        b: Arc<FiniteMonoid>,
        rho: impl Fn(usize, usize) -> usize,
        phi: impl Fn(usize, usize) -> usize,
        gamma: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let (nx, nb) = (x.size(), b.size());
        let rho = (0..nx * nb).map(|i| rho(i / nb, i % nb)).collect();
        let phi = (0..nb * nx).map(|i| phi(i / nx, i % nx)).collect();
        let gamma = (0..nb * nb).map(|i| gamma(i / nb, i % nb)).collect();
        Self::new(x, b, rho, phi, gamma)
    }

    pub fn x(&self) -> &Arc<FiniteMonoid> {
        &self.x
    }

    pub fn b(&self) -> &Arc<FiniteMonoid> {
        &self.b
    }

    pub fn rho(&self) -> &[usize] {
        &self.rho
    }

    pub fn phi(&self) -> &[usize] {
        &self.phi
    }

    pub fn gamma(&self) -> &[usize] {
        &self.gamma
    }

    /// Mutable access for fuzzing and negative controls.
    pub fn arrays_mut(&mut self) -> (&mut [usize], &mut [usize], &mut [usize]) {
        (&mut self.rho, &mut self.phi, &mut self.gamma)
    }

    /// `x^b`
    #[inline]
    pub fn correct(&self, x: usize, b: usize) -> usize {
        self.rho[x * self.b.size() + b]
    }

    /// `b·x`
    #[inline]
    pub fn act(&self, b: usize, x: usize) -> usize {
        self.phi[b * self.x.size() + x]
    }

    /// `b×b'`
    #[inline]
    pub fn factor(&self, b: usize, b2: usize) -> usize {
        self.gamma[b * self.b.size() + b2]
    }

    /// `(x + b·x' + b×b')^{bb'}`: the first component of
    /// `(x, b) + (x', b')` in the synthetic monoid.
    #[inline]
    pub fn combine(&self, x: usize, b: usize, x2: usize, b2: usize) -> usize {
        let xm = &*self.x;
        let s = xm.op(xm.op(x, self.act(b, x2)), self.factor(b, b2));
        self.correct(s, self.b.op(b, b2))
    }

    /// The synthetic operation on all of `X × B`.
    #[inline]
    pub fn add_pairs(&self, (x, b): (usize, usize), (x2, b2): (usize, usize)) -> (usize, usize) {
        (self.combine(x, b, x2, b2), self.b.op(b, b2))
    }

    fn x_name(&self, i: usize) -> String {
        self.x.element_name(i).to_string()
    }

    fn b_name(&self, i: usize) -> String {
        self.b.element_name(i).to_string()
    }
}

/// The pseudo-action with `x^b = x`, `b·x = x`, `b×b' = 0`.
pub fn trivial_action(x: &Arc<FiniteMonoid>, b: &Arc<FiniteMonoid>) -> PseudoAction {
    let zero = x.identity();
    PseudoAction::from_fns(x.clone(), b.clone(), |x, _| x, |_, x| x, |_, _| zero).expect("in range")
}

/// Input tuple and both evaluated sides of a violated law.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaWitness {
    pub inputs: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawStatus {
    pub law: String,
    pub holds: bool,
    /// The least witness, or every witness when exhaustive witnesses were
    /// requested.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<PaWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaReport {
    pub ok: bool,
    pub laws: Vec<LawStatus>,
}

impl PaReport {
    fn from_laws(laws: Vec<LawStatus>) -> Self {
        PaReport {
            ok: laws.iter().all(|l| l.holds),
            laws,
        }
    }

    pub fn status(&self, law: &str) -> Option<&LawStatus> {
        self.laws.iter().find(|l| l.law == law)
    }

    pub fn failed(&self) -> impl Iterator<Item = &LawStatus> {
        self.laws.iter().filter(|l| !l.holds)
    }
}

/// Options for [`verify_pseudo_action_with`].
#[derive(Debug, Clone, Copy, Default)]
pub struct PaCheck {
    /// Collect every violating tuple instead of the least one.
    pub exhaustive_witnesses: bool,
    pub exec: Execution,
}

/// A law over `arity` variables, each ranging over `X` or `B`.
struct Law<'a> {
    name: &'static str,
    /// `true` for a `B` variable.
    vars: &'a [bool],
    eval: &'a (dyn Fn(&[usize]) -> (usize, usize) + Sync),
}

fn check_law(pa: &PseudoAction, law: &Law<'_>, opts: PaCheck) -> LawStatus {
    let dims: Vec<usize> = law
        .vars
        .iter()
        .map(|&is_b| if is_b { pa.b.size() } else { pa.x.size() })
        .collect();
    let outer = dims.first().copied().unwrap_or(1);
    let inner: usize = dims.iter().skip(1).product();
    let decode = |first: usize, rest: usize| {
        let mut t = vec![first; dims.len()];
        let mut r = rest;
        for i in (1..dims.len()).rev() {
            t[i] = r % dims[i];
            r /= dims[i];
        }
        t
    };
    let witness = |t: &[usize], (l, r): (usize, usize)| PaWitness {
        inputs: t
            .iter()
            .zip(law.vars)
            .map(|(&v, &is_b)| if is_b { pa.b_name(v) } else { pa.x_name(v) })
            .collect(),
        lhs: pa.x_name(l),
        rhs: pa.x_name(r),
    };
    let witnesses = if opts.exhaustive_witnesses {
        opts.exec.flat_map(outer, |first| {
            (0..inner)
                .filter_map(|rest| {
                    let t = decode(first, rest);
                    let sides = (law.eval)(&t);
                    (sides.0 != sides.1).then(|| witness(&t, sides))
                })
                .collect()
        })
    } else {
        opts.exec
            .find_first(outer, |first| {
                (0..inner).find_map(|rest| {
                    let t = decode(first, rest);
                    let sides = (law.eval)(&t);
                    (sides.0 != sides.1).then(|| witness(&t, sides))
                })
            })
            .into_iter()
            .collect()
    };
    LawStatus {
        law: law.name.to_string(),
        holds: witnesses.is_empty(),
        witnesses,
    }
}

pub fn verify_pseudo_action(pa: &PseudoAction) -> PaReport {
    verify_pseudo_action_with(pa, PaCheck::default())
}

/// Checks the unit laws, the major condition over all `(|X||B|)³` triples,
/// and the two compatibility conditions. Cheap laws are checked first; by
/// default the major condition stops at its least witness.
pub fn verify_pseudo_action_with(pa: &PseudoAction, opts: PaCheck) -> PaReport {
    let (x, b) = (&*pa.x, &*pa.b);
    let (zero, one) = (x.identity(), b.identity());
    let cheap = PaCheck {
        exec: Execution::Sequential,
        ..opts
    };
    let simple = |name, vars: &[bool], eval: &(dyn Fn(&[usize]) -> (usize, usize) + Sync)| {
        check_law(pa, &Law { name, vars, eval }, cheap)
    };
    let mut laws = vec![
        simple(law::CORRECTION_UNIT, &[false], &|t| (pa.correct(t[0], one), t[0])),
        simple(law::CORRECTION_ZERO, &[true], &|t| (pa.correct(zero, t[0]), zero)),
        simple(law::ACTION_UNIT, &[false], &|t| (pa.act(one, t[0]), t[0])),
        simple(law::ACTION_ZERO, &[true], &|t| (pa.act(t[0], zero), zero)),
        simple(law::FACTOR_LEFT_UNIT, &[true], &|t| (pa.factor(one, t[0]), zero)),
        simple(law::FACTOR_RIGHT_UNIT, &[true], &|t| (pa.factor(t[0], one), zero)),
        simple(law::ACTION_COMPAT, &[true, false], &|t| {
            let bx = pa.act(t[0], t[1]);
            (pa.correct(bx, t[0]), bx)
        }),
        simple(law::FACTOR_COMPAT, &[true, true], &|t| {
            let f = pa.factor(t[0], t[1]);
            (pa.correct(f, b.op(t[0], t[1])), f)
        }),
    ];
    // Major condition: associativity of the synthetic operation on X × B,
    //   w(x, b, w(x', b', x'', b''), b'b'') = w(w(x, b, x', b'), bb', x'', b'').
    let major = |t: &[usize]| {
        let (x1, b1, x2, b2, x3, b3) = (t[0], t[1], t[2], t[3], t[4], t[5]);
        let lhs = pa.combine(x1, b1, pa.combine(x2, b2, x3, b3), b.op(b2, b3));
        let rhs = pa.combine(pa.combine(x1, b1, x2, b2), b.op(b1, b2), x3, b3);
        (lhs, rhs)
    };
    let major_law = Law {
        name: law::MAJOR,
        vars: &[false, true, false, true, false, true],
        eval: &major,
    };
    laws.insert(6, check_law(pa, &major_law, opts));
    PaReport::from_laws(laws)
}

/// Identities that follow from a verified pseudo-action. A failure here on
/// a verified input means the major-condition checker is wrong.
pub fn check_derived_identities(pa: &PseudoAction) -> Result<PaReport> {
    let report = verify_pseudo_action(pa);
    if !report.ok {
        return Err(Error::Precondition(
            "derived identities are only implied for verified pseudo-actions".into(),
        ));
    }
    let (x, b) = (&*pa.x, &*pa.b);
    let opts = PaCheck::default();
    let law = |name, vars: &[bool], eval: &(dyn Fn(&[usize]) -> (usize, usize) + Sync)| {
        check_law(pa, &Law { name, vars, eval }, opts)
    };
    let (c, a, f) = (
        |x: usize, b: usize| pa.correct(x, b),
        |b: usize, x: usize| pa.act(b, x),
        |b: usize, b2: usize| pa.factor(b, b2),
    );
    let laws = vec![
        law(derived::IDEMPOTENT, &[false, true], &|t| {
            (c(c(t[0], t[1]), t[1]), c(t[0], t[1]))
        }),
        law(derived::ACTION_SUM, &[true, false, false], &|t| {
            let (bb, xx, yy) = (t[0], t[1], t[2]);
            (c(a(bb, x.op(xx, yy)), bb), c(x.op(a(bb, xx), a(bb, yy)), bb))
        }),
        law(derived::CORRECT_RIGHT, &[false, false, true], &|t| {
            let (xx, yy, bb) = (t[0], t[1], t[2]);
            (c(x.op(xx, yy), bb), c(x.op(xx, c(yy, bb)), bb))
        }),
        law(derived::CORRECT_ACTION, &[false, false, true], &|t| {
            let (xx, yy, bb) = (t[0], t[1], t[2]);
            (c(x.op(c(xx, bb), a(bb, yy)), bb), c(x.op(xx, c(a(bb, yy), bb)), bb))
        }),
        law(derived::ACTION_SPLIT, &[true, false, false], &|t| {
            let (bb, xx, yy) = (t[0], t[1], t[2]);
            (c(a(bb, x.op(xx, yy)), bb), c(x.op(c(a(bb, xx), bb), a(bb, yy)), bb))
        }),
        // (b·(b'×b'')^{b'b''} + b×b'b'')^{bb'b''} = ((b×b')^{bb'} + bb'×b'')^{bb'b''}
        law(derived::FACTOR_COCYCLE, &[true, true, true], &|t| {
            let (b1, b2, b3) = (t[0], t[1], t[2]);
            let (b12, b23) = (b.op(b1, b2), b.op(b2, b3));
            let b123 = b.op(b12, b3);
            let lhs = c(x.op(a(b1, c(f(b2, b3), b23)), f(b1, b23)), b123);
            let rhs = c(x.op(c(f(b1, b2), b12), f(b12, b3)), b123);
            (lhs, rhs)
        }),
        law(derived::FACTOR_CORRECTION, &[false, true, true], &|t| {
            let (xx, b1, b2) = (t[0], t[1], t[2]);
            let b12 = b.op(b1, b2);
            (c(x.op(c(xx, b1), f(b1, b2)), b12), c(x.op(xx, f(b1, b2)), b12))
        }),
        // (b·(b'·x)^{b'} + b×b')^{bb'} = ((b×b')^{bb'} + bb'·x)^{bb'}
        law(derived::CONJUGATION, &[true, true, false], &|t| {
            let (b1, b2, xx) = (t[0], t[1], t[2]);
            let b12 = b.op(b1, b2);
            let lhs = c(x.op(a(b1, c(a(b2, xx), b2)), f(b1, b2)), b12);
            let rhs = c(x.op(c(f(b1, b2), b12), a(b12, xx)), b12);
            (lhs, rhs)
        }),
    ];
    Ok(PaReport::from_laws(laws))
}

/// Names of the checks made by [`verify_pa_morphism`].
pub mod morphism_law {
    pub const CORRECTION: &str = "f(x^b)=f(x)^g(b)";
    pub const ACTION: &str = "f(b·x)=g(b)·f(x)";
    pub const FACTOR: &str = "f(b×b')=g(b)×g(b')";
    pub const COMBINED: &str = "f(w(x,b,x',b'))=w'(f(x),g(b),f(x'),g(b'))";
}

/// A morphism of pseudo-actions: `f: X -> X'`, `g: B -> B'`.
#[derive(Debug, Clone)]
pub struct PaMorphism {
    pub source: Arc<PseudoAction>,
    pub target: Arc<PseudoAction>,
    pub f: Homomorphism,
    pub g: Homomorphism,
}

impl PaMorphism {
    pub fn new(source: Arc<PseudoAction>, target: Arc<PseudoAction>, f: Homomorphism, g: Homomorphism) -> Result<Self> {
        let ok = same_monoid(f.domain(), &source.x)
            && same_monoid(f.codomain(), &target.x)
            && same_monoid(g.domain(), &source.b)
            && same_monoid(g.codomain(), &target.b);
        if !ok {
            return Err(Error::Structural(format!(
                "({}, {}) does not run between the given pseudo-actions",
                f.name(),
                g.name()
            )));
        }
        Ok(PaMorphism { source, target, f, g })
    }

    pub fn identity(pa: Arc<PseudoAction>) -> Self {
        PaMorphism {
            f: Homomorphism::identity("1_X", pa.x.clone()),
            g: Homomorphism::identity("1_B", pa.b.clone()),
            source: pa.clone(),
            target: pa,
        }
    }

    pub fn after(&self, first: &PaMorphism) -> Result<PaMorphism> {
        PaMorphism::new(
            first.source.clone(),
            self.target.clone(),
            self.f.after(&first.f)?,
            self.g.after(&first.g)?,
        )
    }
}

/// Checks preservation of the three components. When they hold, the
/// implied preservation of the synthetic combination is also checked and a
/// failure there is reported as an internal inconsistency.
pub fn verify_pa_morphism(m: &PaMorphism) -> Result<ValidationReport> {
    if !verify_pseudo_action(&m.source).ok || !verify_pseudo_action(&m.target).ok {
        return Err(Error::Precondition("both pseudo-actions must be verified".into()));
    }
    let (s, t, f, g) = (&*m.source, &*m.target, &m.f, &m.g);
    let (nx, nb) = (s.x.size(), s.b.size());
    let mut failures = Vec::new();
    let xb = (0..nx).flat_map(|x| (0..nb).map(move |b| (x, b)));
    if let Some((x, b)) = xb
        .clone()
        .find(|&(x, b)| f.apply(s.correct(x, b)) != t.correct(f.apply(x), g.apply(b)))
    {
        failures.push(LawFailure::new(
            morphism_law::CORRECTION,
            vec![s.x_name(x), s.b_name(b)],
        ));
    }
    if let Some((x, b)) = xb
        .clone()
        .find(|&(x, b)| f.apply(s.act(b, x)) != t.act(g.apply(b), f.apply(x)))
    {
        failures.push(LawFailure::new(morphism_law::ACTION, vec![s.b_name(b), s.x_name(x)]));
    }
    let bb = (0..nb).flat_map(|b| (0..nb).map(move |b2| (b, b2)));
    if let Some((b1, b2)) = bb
        .clone()
        .find(|&(b1, b2)| f.apply(s.factor(b1, b2)) != t.factor(g.apply(b1), g.apply(b2)))
    {
        failures.push(LawFailure::new(morphism_law::FACTOR, vec![s.b_name(b1), s.b_name(b2)]));
    }
    if failures.is_empty() {
        let bad = xb
            .clone()
            .flat_map(|(x1, b1)| xb.clone().map(move |(x2, b2)| (x1, b1, x2, b2)))
            .find(|&(x1, b1, x2, b2)| {
                f.apply(s.combine(x1, b1, x2, b2)) != t.combine(f.apply(x1), g.apply(b1), f.apply(x2), g.apply(b2))
            });
        if let Some((x1, b1, x2, b2)) = bad {
            failures.push(
                LawFailure::new(
                    morphism_law::COMBINED,
                    vec![s.x_name(x1), s.b_name(b1), s.x_name(x2), s.b_name(b2)],
                )
                .with_detail("internal inconsistency: implied by the three component laws"),
            );
        }
    }
    Ok(ValidationReport::from_failures(failures))
}
