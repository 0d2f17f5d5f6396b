//! Argument parsing and the subcommands.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use sbp_core::algebra::{validate_monoid_with, RawMonoid, DEFAULT_MAX_SIZE};
use sbp_core::equivalence::{extract, roundtrip_action, roundtrip_diagram, synthesize_with};
use sbp_core::json::{
    diagram_from_raw, diagram_to_raw, extension_from_raw, hom_from_raw, pa_from_raw, pa_to_raw, seed_from_raw,
    MonoidLibrary, NamedPairs, RawDiagram, RawExtension, RawMapBundle, RawMonoidBundle, RawPseudoAction, RawSeed,
};
use sbp_core::pseudoaction::{verify_pseudo_action_with, PaCheck};
use sbp_core::search::{
    build_from_relation, complete_extension, enumerate_semibiproducts, nat_order_demo, DEFAULT_SEED_BUDGET,
};
use sbp_core::semibiproduct::{check_cokernel, check_kernel, pullback, verify, SbpReport, SemiBiproduct};
use sbp_core::Execution;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::corpus::{self, Bundle};
use crate::report::{InputDigest, Report};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "sbp",
    version,
    about = "Semi-biproducts and pseudo-actions of finite monoids"
)]
pub struct Cli {
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Largest monoid accepted from input files.
    #[arg(long, global = true, env = "SBP_MAX_SIZE", default_value_t = DEFAULT_MAX_SIZE)]
    pub max_size: usize,
    /// Worker threads; 1 runs every kernel sequentially.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Report every violating tuple, not only the least one.
    #[arg(long, global = true)]
    pub exhaustive_witnesses: bool,
    /// Include wall time in the report.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a monoid table against the monoid laws.
    Validate { monoid: PathBuf },
    /// Check the five semi-biproduct identities.
    Verify { diagram: PathBuf },
    /// Decide whether a verified diagram is a Schreier extension.
    Schreier { diagram: PathBuf },
    /// Pull a verified diagram back along a homomorphism into B.
    Pullback {
        diagram: PathBuf,
        hom: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check that k is the kernel of p and p the cokernel of k.
    Cokernel { diagram: PathBuf },
    /// Extract the pseudo-action of a verified diagram.
    Extract {
        diagram: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build the synthetic diagram of a pseudo-action.
    Synthesize {
        action: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Certify the round trip through the equivalence for a diagram or a
    /// pseudo-action.
    Roundtrip { input: PathBuf },
    /// Check the pseudo-action laws.
    PaVerify { action: PathBuf },
    /// Search the monoid structures on a relation R ⊆ X×B.
    Construct {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        relation: PathBuf,
    },
    /// Enumerate the semi-biproducts produced by every relation seed.
    Enumerate {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Maximum number of relation seeds to examine.
        #[arg(long, default_value_t = DEFAULT_SEED_BUDGET)]
        budget: usize,
    },
    /// All (q, s) completing X -> A -> B to a semi-biproduct.
    Complete {
        #[arg(long)]
        bundle: PathBuf,
    },
    /// The order relation on ℕ, checked up to a bound.
    NatDemo {
        #[arg(long)]
        bound: u64,
    },
    /// The built-in example corpus.
    Examples(ExamplesArgs),
}

#[derive(Debug, Args)]
pub struct ExamplesArgs {
    #[command(subcommand)]
    pub action: ExamplesAction,
}

#[derive(Debug, Subcommand)]
pub enum ExamplesAction {
    /// Names of all records.
    List,
    /// Re-derive the expected facts of one record or of all of them.
    Run {
        #[arg(required_unless_present = "all", conflicts_with = "all")]
        name: Option<String>,
        #[arg(long)]
        all: bool,
    },
    /// Print a record's input as JSON.
    Show { name: String },
}

/// What a subcommand hands back before rendering.
struct Outcome {
    exit_code: i32,
    verdicts: Value,
    witnesses: Vec<Value>,
    text: Vec<String>,
    /// Printed verbatim instead of the text lines, when set.
    raw: Option<String>,
}

impl Outcome {
    fn new(pass: bool, verdicts: Value) -> Self {
        Outcome {
            exit_code: if pass { EXIT_PASS } else { EXIT_FAIL },
            verdicts,
            witnesses: Vec::new(),
            text: Vec::new(),
            raw: None,
        }
    }

    fn line(mut self, l: impl Into<String>) -> Self {
        self.text.push(l.into());
        self
    }
}

type CmdResult = Result<Outcome, String>;

struct Env {
    max_size: usize,
    exec: Execution,
    exhaustive: bool,
    digest: InputDigest,
}

impl Env {
    fn read(&mut self, path: &Path) -> Result<Vec<u8>, String> {
        let bytes = fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
        self.digest.add(&path.display().to_string(), &bytes);
        Ok(bytes)
    }

    fn parse<T: DeserializeOwned>(&mut self, path: &Path) -> Result<T, String> {
        let bytes = self.read(path)?;
        serde_json::from_slice(&bytes).map_err(|e| format!("{}: {e}", path.display()))
    }

    fn library(&self) -> MonoidLibrary {
        MonoidLibrary::new(self.max_size)
    }

    fn monoid(&mut self, path: &Path) -> Result<Arc<sbp_core::algebra::FiniteMonoid>, String> {
        let raw: RawMonoid = self.parse(path)?;
        raw.into_monoid(self.max_size)
            .map(Arc::new)
            .map_err(|e| format!("{}: {e}", path.display()))
    }

    /// Reads a diagram, following its `"bundle"` path relative to the
    /// diagram file.
    fn diagram(&mut self, path: &Path) -> Result<(Arc<SemiBiproduct>, MonoidLibrary), String> {
        let raw: RawDiagram = self.parse(path)?;
        let mut lib = self.library();
        if let Some(rel) = &raw.bundle {
            let bundle_path = path.parent().unwrap_or(Path::new(".")).join(rel);
            let bundle: RawMonoidBundle = self.parse(&bundle_path)?;
            lib.extend(bundle.monoids)
                .map_err(|e| format!("{}: {e}", bundle_path.display()))?;
        }
        let d = diagram_from_raw(&mut lib, &raw).map_err(|e| format!("{}: {e}", path.display()))?;
        Ok((Arc::new(d), lib))
    }

    fn action(&mut self, path: &Path) -> Result<sbp_core::pseudoaction::PseudoAction, String> {
        let raw: RawPseudoAction = self.parse(path)?;
        pa_from_raw(&raw, self.max_size).map_err(|e| format!("{}: {e}", path.display()))
    }
}

fn value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data")
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("plain data")
}

fn write_output(path: &Path, text: &str) -> Result<(), String> {
    fs::write(path, format!("{text}\n")).map_err(|e| format!("{}: {e}", path.display()))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn sbp_outcome(rep: &SbpReport) -> Outcome {
    let mut out = Outcome::new(rep.ok, json!({"verified": rep.ok, "axioms": value(&rep.axioms)}));
    out = out.line(format!("verified: {}", yes(rep.ok)));
    for st in rep.failed() {
        let w = st.witness.as_ref().expect("failed axioms carry a witness");
        out.witnesses
            .push(json!({"axiom": st.axiom, "elements": w.elements, "lhs": w.lhs, "rhs": w.rhs}));
        out.text.push(format!(
            "  {} fails at {}: got {}, expected {}",
            st.axiom,
            w.elements.join(","),
            w.lhs,
            w.rhs
        ));
    }
    out
}

/// The verify outcome for a diagram that must be verified first.
fn unverified(d: &SemiBiproduct, what: &str) -> Outcome {
    let mut out = sbp_outcome(&verify(d));
    out.text.insert(0, format!("{what} needs a verified diagram"));
    out
}

/// Writes `doc` to `output`, or attaches it to the outcome and prints it.
fn emit<T: Serialize>(mut out: Outcome, key: &str, doc: &T, output: &Option<PathBuf>) -> CmdResult {
    let text = pretty(doc);
    match output {
        Some(path) => {
            write_output(path, &text)?;
            out.verdicts[key] = json!({"written": path.display().to_string()});
            out.text.push(format!("wrote {}", path.display()));
        }
        None => {
            out.verdicts[key] = value(doc);
            out.raw = Some(text);
        }
    }
    Ok(out)
}

fn cmd_validate(env: &mut Env, path: &Path) -> CmdResult {
    let raw: RawMonoid = env.parse(path)?;
    let rep = validate_monoid_with(&raw, env.max_size, env.exec);
    let mut out = Outcome::new(
        rep.ok,
        json!({"valid": rep.ok, "name": raw.name, "size": raw.elements.len()}),
    );
    out = out.line(format!(
        "{}: {}",
        raw.name,
        if rep.ok { "a monoid" } else { "not a monoid" }
    ));
    for f in &rep.failures {
        out.witnesses.push(value(f));
        out.text.push(format!(
            "  {} at ({}){}",
            f.law,
            f.witness.join(", "),
            f.detail.as_ref().map(|d| format!(": {d}")).unwrap_or_default()
        ));
    }
    Ok(out)
}

fn cmd_verify(env: &mut Env, path: &Path) -> CmdResult {
    let (d, _) = env.diagram(path)?;
    Ok(sbp_outcome(&verify(&d)))
}

fn cmd_schreier(env: &mut Env, path: &Path) -> CmdResult {
    let (d, _) = env.diagram(path)?;
    if !d.is_verified() {
        return Ok(unverified(&d, "schreier"));
    }
    let schreier = d.is_schreier().map_err(|e| e.to_string())?;
    let image = d.image_of_beta().map_err(|e| e.to_string())?;
    let names: Vec<[&str; 2]> = image
        .iter()
        .map(|&(x, b)| [d.x().element_name(x), d.b().element_name(b)])
        .collect();
    let full = d.x().size() * d.b().size();
    Ok(Outcome::new(
        true,
        json!({"schreier": schreier, "image_of_beta": names, "image_size": image.len(), "product_size": full}),
    )
    .line(format!("schreier: {}", yes(schreier)))
    .line(format!("|image of beta| = {} of |X×B| = {full}", image.len())))
}

fn cmd_pullback(env: &mut Env, path: &Path, hom: &Path, output: &Option<PathBuf>) -> CmdResult {
    let (d, mut lib) = env.diagram(path)?;
    let raw: RawMapBundle = env.parse(hom)?;
    lib.extend(raw.monoids).map_err(|e| format!("{}: {e}", hom.display()))?;
    let h = hom_from_raw(&lib, &raw.map, "h").map_err(|e| format!("{}: {e}", hom.display()))?;
    if !d.is_verified() {
        return Ok(unverified(&d, "pullback"));
    }
    let pb = pullback(&d, &h).map_err(|e| e.to_string())?;
    let out = sbp_outcome(&verify(&pb));
    emit(out, "diagram", &diagram_to_raw(&pb), output)
}

fn cmd_cokernel(env: &mut Env, path: &Path) -> CmdResult {
    let (d, _) = env.diagram(path)?;
    let (kernel, cokernel) = (check_kernel(&d), check_cokernel(&d));
    Ok(
        Outcome::new(kernel && cokernel, json!({"kernel": kernel, "cokernel": cokernel}))
            .line(format!("k is the kernel of p: {}", yes(kernel)))
            .line(format!("p is the cokernel of k: {}", yes(cokernel))),
    )
}

fn cmd_extract(env: &mut Env, path: &Path, output: &Option<PathBuf>) -> CmdResult {
    let (d, _) = env.diagram(path)?;
    if !d.is_verified() {
        return Ok(unverified(&d, "extract"));
    }
    let pa = extract(&d).map_err(|e| e.to_string())?;
    emit(Outcome::new(true, json!({})), "pseudo_action", &pa_to_raw(&pa), output)
}

fn cmd_synthesize(env: &mut Env, path: &Path, output: &Option<PathBuf>) -> CmdResult {
    let pa = env.action(path)?;
    let rep = verify_pseudo_action_with(
        &pa,
        PaCheck {
            exhaustive_witnesses: false,
            exec: env.exec,
        },
    );
    if !rep.ok {
        return Ok(pa_outcome(&rep).line("synthesize needs a verified pseudo-action"));
    }
    let d = synthesize_with(&pa, env.exec).map_err(|e| e.to_string())?;
    let out = Outcome::new(
        true,
        json!({"elements": d.a().elements(), "schreier": d.is_schreier().map_err(|e| e.to_string())?}),
    )
    .line(format!("synthetic carrier: {}", d.a().elements().join(" ")));
    emit(out, "diagram", &diagram_to_raw(&d), output)
}

fn cmd_roundtrip(env: &mut Env, path: &Path) -> CmdResult {
    let probe: Value = env.parse(path)?;
    if probe.get("rho").is_some() {
        let pa = env.action(path)?;
        if !verify_pseudo_action_with(
            &pa,
            PaCheck {
                exhaustive_witnesses: false,
                exec: env.exec,
            },
        )
        .ok
        {
            return Err(format!("{}: not a pseudo-action (run pa-verify)", path.display()));
        }
        let back = roundtrip_action(&pa).map_err(|e| e.to_string())?;
        return Ok(Outcome::new(back, json!({"input": "pseudo-action", "roundtrip": back}))
            .line(format!("extract(synthesize(pa)) = pa: {}", yes(back))));
    }
    let (d, _) = env.diagram(path)?;
    if !d.is_verified() {
        return Ok(unverified(&d, "roundtrip"));
    }
    let rt = roundtrip_diagram(&d).map_err(|e| e.to_string())?;
    let mut out = Outcome::new(
        rt.report.ok,
        json!({"input": "diagram", "roundtrip": rt.report.ok, "synthetic_elements": rt.synthetic.a().elements()}),
    )
    .line(format!(
        "alpha and beta mutually inverse morphisms: {}",
        yes(rt.report.ok)
    ));
    for f in &rt.report.failures {
        out.witnesses.push(value(f));
        out.text.push(format!("  {} at ({})", f.law, f.witness.join(", ")));
    }
    Ok(out)
}

fn pa_outcome(rep: &sbp_core::pseudoaction::PaReport) -> Outcome {
    let laws: Vec<Value> = rep
        .laws
        .iter()
        .map(|l| json!({"law": l.law, "holds": l.holds}))
        .collect();
    let mut out =
        Outcome::new(rep.ok, json!({"verified": rep.ok, "laws": laws})).line(format!("pseudo-action: {}", yes(rep.ok)));
    for law in rep.failed() {
        for w in &law.witnesses {
            out.witnesses
                .push(json!({"law": law.law, "inputs": w.inputs, "lhs": w.lhs, "rhs": w.rhs}));
            out.text.push(format!(
                "  {} fails at ({}): {} ≠ {}",
                law.law,
                w.inputs.join(", "),
                w.lhs,
                w.rhs
            ));
        }
    }
    out
}

fn cmd_pa_verify(env: &mut Env, path: &Path) -> CmdResult {
    let pa = env.action(path)?;
    let rep = verify_pseudo_action_with(
        &pa,
        PaCheck {
            exhaustive_witnesses: env.exhaustive,
            exec: env.exec,
        },
    );
    Ok(pa_outcome(&rep))
}

fn cmd_construct(env: &mut Env, x: &Path, b: &Path, relation: &Path) -> CmdResult {
    let (xm, bm) = (env.monoid(x)?, env.monoid(b)?);
    let raw: RawSeed = env.parse(relation)?;
    let seed = seed_from_raw(xm, bm, &raw).map_err(|e| format!("{}: {e}", relation.display()))?;
    let res = build_from_relation(&seed, env.exec);
    let mut accepted = Vec::new();
    let mut out = Outcome::new(true, json!({}))
        .line(format!("R = {{{}}}", seed.element_names().join(", ")))
        .line(format!("candidate tables: {}", res.candidate_tables));
    for acc in &res.accepted {
        let schreier = acc.diagram.is_schreier().map_err(|e| e.to_string())?;
        accepted.push(json!({"table": value(&RawMonoid::from(&*acc.monoid)), "schreier": schreier}));
        out.text.push(format!("  accepted (schreier: {})", yes(schreier)));
    }
    let rejected: Vec<Value> = res
        .rejected
        .iter()
        .map(|r| json!({"table": value(&RawMonoid::from(&*r.monoid)), "rejection": value(&r.reason)}))
        .collect();
    for r in &res.rejected {
        out.text.push(format!("  rejected: {}", r.reason.label()));
    }
    out.verdicts = json!({
        "relation": seed.element_names(),
        "candidate_tables": res.candidate_tables,
        "accepted": accepted,
        "rejected": rejected,
    });
    Ok(out)
}

fn cmd_enumerate(env: &mut Env, x: &Path, b: &Path, budget: usize) -> CmdResult {
    let (xm, bm) = (env.monoid(x)?, env.monoid(b)?);
    env.digest.add("budget", budget.to_string().as_bytes());
    let en = enumerate_semibiproducts(&xm, &bm, budget, env.exec);
    let mut diagrams = Vec::new();
    let mut schreier_count = 0;
    for d in &en.diagrams {
        let s = d.is_schreier().map_err(|e| e.to_string())?;
        schreier_count += usize::from(s);
        diagrams.push(json!({"schreier": s, "diagram": value(&diagram_to_raw(d))}));
    }
    let mut out = Outcome::new(
        true,
        json!({
            "seeds": en.seeds,
            "candidate_tables": en.candidate_tables,
            "complete": en.complete,
            "count": en.diagrams.len(),
            "schreier_count": schreier_count,
            "diagrams": diagrams,
        }),
    )
    .line(format!(
        "{} diagrams ({} Schreier) from {} seeds, {} candidate tables",
        en.diagrams.len(),
        schreier_count,
        en.seeds,
        en.candidate_tables
    ));
    if !en.complete {
        out.text
            .push(format!("budget of {budget} seeds exceeded: partial result"));
    }
    for d in &en.diagrams {
        out.text.push(format!("  {{{}}}", d.a().elements().join(", ")));
    }
    Ok(out)
}

fn cmd_complete(env: &mut Env, bundle: &Path) -> CmdResult {
    let raw: RawExtension = env.parse(bundle)?;
    let mut lib = env.library();
    let (k, p) = extension_from_raw(&mut lib, &raw).map_err(|e| format!("{}: {e}", bundle.display()))?;
    let list = complete_extension(&k, &p, env.exec).map_err(|e| format!("{}: {e}", bundle.display()))?;
    let entries: Vec<Value> = list
        .iter()
        .map(|(q, s)| json!({"q": value(&NamedPairs(q.named_pairs())), "s": value(&NamedPairs(s.named_pairs()))}))
        .collect();
    let mut out = Outcome::new(true, json!({"count": list.len(), "completions": entries}))
        .line(format!("{} completions", list.len()));
    for (q, s) in &list {
        let show = |m: &sbp_core::algebra::Map| {
            m.named_pairs()
                .iter()
                .map(|(a, b)| format!("{a}↦{b}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        out.text.push(format!("  q: {}   s: {}", show(q), show(s)));
    }
    Ok(out)
}

fn cmd_nat_demo(env: &mut Env, bound: u64) -> CmdResult {
    env.digest.add("bound", bound.to_string().as_bytes());
    let rep = nat_order_demo(bound).map_err(|e| e.to_string())?;
    let mut out =
        Outcome::new(rep.ok, value(&rep)).line(format!("{} up to {bound}: {} pairs", rep.scope, rep.domain_size));
    for c in &rep.checks {
        out.text.push(format!(
            "  {}: {} ({} checked)",
            c.name,
            if c.holds { "ok" } else { "fails" },
            c.checked
        ));
        if let Some(w) = &c.witness {
            out.witnesses.push(json!({"check": c.name, "at": w}));
        }
    }
    Ok(out)
}

fn cmd_examples(env: &mut Env, action: &ExamplesAction) -> CmdResult {
    match action {
        ExamplesAction::List => {
            let recs = corpus::examples_corpus();
            let names: Vec<&str> = recs.iter().map(|r| r.name.as_str()).collect();
            let mut out = Outcome::new(true, json!({"records": names}));
            for r in &recs {
                out.text.push(format!("{:<16} {}", r.name, r.summary));
            }
            Ok(out)
        }
        ExamplesAction::Show { name } => {
            let rec = corpus::find_record(name).ok_or_else(|| format!("no example named `{name}`"))?;
            let out = Outcome::new(true, json!({}));
            match &rec.bundle {
                Bundle::Diagram { diagram, .. } => emit(out, "bundle", diagram, &None),
                Bundle::PseudoAction { action } => emit(out, "bundle", action, &None),
                Bundle::Seed { .. } => emit(out, "bundle", &rec.bundle, &None),
            }
        }
        ExamplesAction::Run { name, all } => {
            let recs = match (name, all) {
                (Some(n), false) => vec![corpus::find_record(n).ok_or_else(|| format!("no example named `{n}`"))?],
                _ => corpus::examples_corpus(),
            };
            let mut outcomes = Vec::new();
            for rec in &recs {
                env.digest
                    .add(&rec.name, &serde_json::to_vec(&rec.bundle).expect("plain data"));
                outcomes.push(corpus::run_record(rec, env.max_size, env.exec));
            }
            let reproduced = outcomes.iter().all(|o| o.reproduced);
            let mut out = if let [single] = outcomes.as_slice() {
                // one record: the exit status is the record's own verdict
                let pass = single.reproduced && single.verified != Some(false);
                let facts: serde_json::Map<String, Value> = single
                    .checks
                    .iter()
                    .map(|c| (c.fact.clone(), c.actual.clone()))
                    .collect();
                let mut o = Outcome::new(pass, value(single));
                o.verdicts["facts"] = Value::Object(facts);
                if let Some(f) = single.check("failed-axioms") {
                    if let Some(list) = f.actual.as_array() {
                        o.witnesses.extend(list.iter().cloned());
                    }
                }
                o
            } else {
                Outcome::new(
                    reproduced,
                    json!({"reproduced": reproduced, "records": value(&outcomes)}),
                )
            };
            for o in &outcomes {
                let verdict = match o.verified {
                    Some(true) => " (verified)",
                    Some(false) => " (not verified)",
                    None => "",
                };
                out.text.push(format!(
                    "{:<16} {}{verdict}",
                    o.name,
                    if o.reproduced { "reproduced" } else { "DRIFT" }
                ));
                for c in &o.checks {
                    if !c.pass || recs.len() == 1 {
                        out.text.push(format!(
                            "  {:<4} {}: {}{}",
                            if c.pass { "ok" } else { "FAIL" },
                            c.fact,
                            c.actual,
                            if c.pass {
                                String::new()
                            } else {
                                format!(" (expected {})", c.expected)
                            }
                        ));
                    }
                }
            }
            Ok(out)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Verify { .. } => "verify",
        Command::Schreier { .. } => "schreier",
        Command::Pullback { .. } => "pullback",
        Command::Cokernel { .. } => "cokernel",
        Command::Extract { .. } => "extract",
        Command::Synthesize { .. } => "synthesize",
        Command::Roundtrip { .. } => "roundtrip",
        Command::PaVerify { .. } => "pa-verify",
        Command::Construct { .. } => "construct",
        Command::Enumerate { .. } => "enumerate",
        Command::Complete { .. } => "complete",
        Command::NatDemo { .. } => "nat-demo",
        Command::Examples(a) => match a.action {
            ExamplesAction::List => "examples list",
            ExamplesAction::Run { .. } => "examples run",
            ExamplesAction::Show { .. } => "examples show",
        },
    }
}

fn dispatch(env: &mut Env, c: &Command) -> CmdResult {
    match c {
        Command::Validate { monoid } => cmd_validate(env, monoid),
        Command::Verify { diagram } => cmd_verify(env, diagram),
        Command::Schreier { diagram } => cmd_schreier(env, diagram),
        Command::Pullback { diagram, hom, output } => cmd_pullback(env, diagram, hom, output),
        Command::Cokernel { diagram } => cmd_cokernel(env, diagram),
        Command::Extract { diagram, output } => cmd_extract(env, diagram, output),
        Command::Synthesize { action, output } => cmd_synthesize(env, action, output),
        Command::Roundtrip { input } => cmd_roundtrip(env, input),
        Command::PaVerify { action } => cmd_pa_verify(env, action),
        Command::Construct { x, b, relation } => cmd_construct(env, x, b, relation),
        Command::Enumerate { x, b, budget } => cmd_enumerate(env, x, b, *budget),
        Command::Complete { bundle } => cmd_complete(env, bundle),
        Command::NatDemo { bound } => cmd_nat_demo(env, *bound),
        Command::Examples(a) => cmd_examples(env, &a.action),
    }
}

/// Exit status, stdout and stderr of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invocation {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn execute(cli: &Cli) -> Invocation {
    let name = command_name(&cli.command);
    let exec = match cli.jobs {
        Some(1) => Execution::Sequential,
        _ => Execution::default(),
    };
    let mut env = Env {
        max_size: cli.max_size,
        exec,
        exhaustive: cli.exhaustive_witnesses,
        digest: InputDigest::new(name),
    };
    let start = Instant::now();
    let result = dispatch(&mut env, &cli.command);
    let elapsed = start.elapsed();
    let timing_us = cli.timing.then_some(elapsed.as_micros() as u64);
    let (out, error) = match result {
        Ok(out) => (out, None),
        Err(msg) => (
            Outcome {
                exit_code: EXIT_INPUT,
                verdicts: json!({"error": msg}),
                witnesses: Vec::new(),
                text: Vec::new(),
                raw: None,
            },
            Some(msg),
        ),
    };
    let report = Report {
        command: name.to_string(),
        inputs_digest: env.digest.hex(),
        ok: out.exit_code == EXIT_PASS,
        exit_code: out.exit_code,
        verdicts: out.verdicts,
        witnesses: out.witnesses,
        timing_us,
    };
    let mut stdout = String::new();
    let mut stderr = String::new();
    if cli.json {
        stdout = report.to_json();
        stdout.push('\n');
        if let Some(msg) = error {
            stderr = format!("error: {msg}\n");
        }
    } else {
        if let Some(msg) = error {
            stderr = format!("error: {msg}\n");
        }
        for l in out.text {
            stdout.push_str(&l);
            stdout.push('\n');
        }
        if let Some(raw) = out.raw {
            stdout.push_str(&raw);
            stdout.push('\n');
        }
        if let Some(us) = timing_us {
            stdout.push_str(&format!("time: {:.3} ms\n", us as f64 / 1000.0));
        }
    }
    Invocation {
        code: report.exit_code,
        stdout,
        stderr,
    }
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Invocation {
                    code: EXIT_INPUT,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Invocation {
                    code: EXIT_PASS,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match cli.jobs {
        #[cfg(feature = "parallel")]
        Some(n) if n > 1 => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Invocation {
                code: EXIT_INPUT,
                stdout: String::new(),
                stderr: format!("error: cannot start {n} threads: {e}\n"),
            },
        },
        Some(0) => Invocation {
            code: EXIT_INPUT,
            stdout: String::new(),
            stderr: "error: --jobs must be at least 1\n".to_string(),
        },
        _ => execute(&cli),
    }
}
