use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use sbp_cli::report::Report;
use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn sbp_in(dir: &Path, args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sbp"));
    cmd.current_dir(dir).args(args).env_remove("SBP_MAX_SIZE");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn sbp(dir: &Path, args: &[&str]) -> Run {
    sbp_in(dir, args, &[])
}

fn report(run: &Run) -> Report {
    serde_json::from_str(&run.stdout).unwrap_or_else(|e| panic!("{e}: {}", run.stdout))
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

/// Writes the corpus record `name` to `<name>.json` and returns the file
/// name.
fn show(dir: &Path, name: &str) -> String {
    let run = sbp(dir, &["examples", "show", name]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let file = format!("{name}.json");
    write(dir, &file, &run.stdout);
    file
}

const CHAIN_X: &str = r#"{"name":"X","elements":["0","s"],"identity":"0","table":[["0","s"],["s","s"]]}"#;
const CHAIN_B: &str = r#"{"name":"B","elements":["1","t"],"identity":"1","table":[["1","t"],["t","t"]]}"#;

#[test]
fn a1_run_fails_with_the_split_witness() {
    let dir = tempfile::tempdir().unwrap();
    let run = sbp(dir.path(), &["examples", "run", "A1", "--json"]);
    assert_eq!(run.code, 1);
    let rep = report(&run);
    assert!(!rep.ok);
    assert_eq!(rep.witnesses.len(), 1);
    assert_eq!(rep.witnesses[0]["axiom"], "kq+sp=1");
    assert_eq!(rep.witnesses[0]["element"], "d");
    assert_eq!(rep.verdicts["reproduced"], true);
}

#[test]
fn a6_run_passes_and_is_commutative() {
    let dir = tempfile::tempdir().unwrap();
    let run = sbp(dir.path(), &["examples", "run", "A6", "--json"]);
    assert_eq!(run.code, 0);
    let rep = report(&run);
    assert_eq!(rep.verdicts["facts"]["verified"], true);
    assert_eq!(rep.verdicts["facts"]["commutative"], true);
}

#[test]
fn list_and_run_all() {
    let dir = tempfile::tempdir().unwrap();
    let run = sbp(dir.path(), &["examples", "list", "--json"]);
    assert_eq!(run.code, 0);
    let names = report(&run).verdicts["records"].as_array().unwrap().len();
    assert!(names >= 13);
    let all = sbp(dir.path(), &["examples", "run", "--all"]);
    assert_eq!(all.code, 0, "{}", all.stdout);
    assert_eq!(all.stdout.lines().filter(|l| l.contains("reproduced")).count(), names);
    assert_eq!(sbp(dir.path(), &["examples", "run", "nope"]).code, 2);
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [&["frobnicate"][..], &["verify"], &["verify", "x.json", "--bogus"], &[]] {
        let run = sbp(dir.path(), args);
        assert_eq!(run.code, 2, "{args:?}");
        assert!(run.stderr.contains("Usage"), "{}", run.stderr);
    }
    assert_eq!(sbp(dir.path(), &["--help"]).code, 0);
}

#[test]
fn json_reports_round_trip_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    let a5 = show(dir.path(), "A5");
    let a1 = show(dir.path(), "A1");
    let runs = [
        vec!["verify", a5.as_str(), "--json"],
        vec!["verify", a1.as_str(), "--json"],
        vec!["schreier", a5.as_str(), "--json"],
        vec!["roundtrip", a5.as_str(), "--json"],
        vec!["examples", "run", "--all", "--json"],
        vec!["nat-demo", "--bound", "5", "--json", "--timing"],
        vec!["verify", "missing.json", "--json"],
    ];
    for args in runs {
        let run = sbp(dir.path(), &args);
        let text = run.stdout.trim_end();
        let parsed: Report = serde_json::from_str(text).unwrap();
        assert_eq!(parsed.to_json(), text, "{args:?}");
        let again: Value = serde_json::from_str(text).unwrap();
        assert_eq!(serde_json::to_string_pretty(&again).unwrap(), text, "{args:?}");
    }
}

#[test]
fn identical_inputs_give_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    let a5 = show(dir.path(), "A5");
    let first = sbp(dir.path(), &["verify", &a5, "--json"]).stdout;
    assert_eq!(first, sbp(dir.path(), &["verify", &a5, "--json"]).stdout);
    let other = sbp(dir.path(), &["verify", &show(dir.path(), "A6"), "--json"]).stdout;
    let digest = |s: &str| serde_json::from_str::<Report>(s).unwrap().inputs_digest;
    assert_ne!(digest(&first), digest(&other));
    // worker count does not change the report
    let seq = sbp(dir.path(), &["examples", "run", "--all", "--json", "--jobs", "1"]).stdout;
    let par = sbp(dir.path(), &["examples", "run", "--all", "--json", "--jobs", "4"]).stdout;
    assert_eq!(seq, par);
}

#[test]
fn timing_only_on_request() {
    let dir = tempfile::tempdir().unwrap();
    let plain = report(&sbp(dir.path(), &["nat-demo", "--bound", "3", "--json"]));
    assert!(plain.timing_us.is_none());
    let timed = report(&sbp(dir.path(), &["nat-demo", "--bound", "3", "--json", "--timing"]));
    assert!(timed.timing_us.is_some());
}

#[test]
fn equivalence_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let a7 = show(d, "A7");
    assert_eq!(sbp(d, &["extract", &a7, "-o", "pa.json"]).code, 0);
    assert_eq!(sbp(d, &["pa-verify", "pa.json"]).code, 0);
    assert_eq!(sbp(d, &["synthesize", "pa.json", "-o", "syn.json"]).code, 0);
    assert_eq!(sbp(d, &["verify", "syn.json"]).code, 0);
    assert_eq!(sbp(d, &["roundtrip", "syn.json"]).code, 0);
    assert_eq!(sbp(d, &["roundtrip", "pa.json"]).code, 0);
    let sch = report(&sbp(d, &["schreier", "syn.json", "--json"]));
    assert_eq!(sch.verdicts["schreier"], false);
    assert_eq!(sch.verdicts["image_size"], 5);
    // extracting from a non-diagram is a verification failure, not a crash
    let a3 = show(d, "A3");
    let run = sbp(d, &["extract", &a3, "--json"]);
    assert_eq!(run.code, 1);
    assert_eq!(report(&run).witnesses[0]["elements"][0], "d");
}

#[test]
fn diagram_with_sibling_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::create_dir(d.join("sub")).unwrap();
    write(
        d,
        "sub/monoids.json",
        &format!(
            r#"{{"monoids":[{CHAIN_X},{CHAIN_B},
        {{"name":"P","elements":["(0,1)","(0,t)","(s,1)","(s,t)"],"identity":"(0,1)","table":[
          ["(0,1)","(0,t)","(s,1)","(s,t)"],["(0,t)","(0,t)","(s,t)","(s,t)"],
          ["(s,1)","(s,t)","(s,1)","(s,t)"],["(s,t)","(s,t)","(s,t)","(s,t)"]]}}]}}"#
        ),
    );
    write(
        d,
        "sub/diagram.json",
        r#"{"bundle":"monoids.json","X":"X","A":"P","B":"B",
        "p":{"domain":"P","codomain":"B","kind":"hom","map":{"(0,1)":"1","(0,t)":"t","(s,1)":"1","(s,t)":"t"}},
        "k":{"domain":"X","codomain":"P","kind":"hom","map":{"0":"(0,1)","s":"(s,1)"}},
        "q":{"domain":"P","codomain":"X","kind":"hom","map":{"(0,1)":"0","(0,t)":"0","(s,1)":"s","(s,t)":"s"}},
        "s":{"domain":"B","codomain":"P","kind":"hom","map":{"1":"(0,1)","t":"(0,t)"}}}"#,
    );
    let run = sbp(d, &["verify", "sub/diagram.json"]);
    assert_eq!(run.code, 0, "{}{}", run.stdout, run.stderr);
    let sch = report(&sbp(d, &["schreier", "sub/diagram.json", "--json"]));
    assert_eq!(sch.verdicts["schreier"], true);
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(d, "junk.json", "{");
    assert_eq!(sbp(d, &["verify", "junk.json"]).code, 2);
    assert_eq!(sbp(d, &["verify", "absent.json"]).code, 2);
    let a5 = sbp(d, &["examples", "show", "A5"]).stdout;
    let extra = a5.replacen('{', "{\"colour\": \"red\",", 1);
    write(d, "extra.json", &extra);
    let run = sbp(d, &["verify", "extra.json"]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("colour"), "{}", run.stderr);
    // a declared homomorphism that is not one
    let fake = a5.replacen("\"kind\": \"pointed\"", "\"kind\": \"hom\"", 1);
    write(d, "fake.json", &fake);
    assert_eq!(sbp(d, &["verify", "fake.json"]).code, 2);
    assert_eq!(sbp(d, &["nat-demo", "--bound", "0"]).code, 2);
    assert_eq!(sbp(d, &["nat-demo", "--bound", "3", "--jobs", "0"]).code, 2);
}

#[test]
fn size_limit_flag_and_env() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let a5 = show(d, "A5");
    assert_eq!(sbp(d, &["verify", &a5, "--max-size", "4"]).code, 2);
    assert_eq!(sbp(d, &["verify", &a5, "--max-size", "5"]).code, 0);
    assert_eq!(sbp_in(d, &["verify", &a5], &[("SBP_MAX_SIZE", "4")]).code, 2);
    assert_eq!(sbp_in(d, &["verify", &a5], &[("SBP_MAX_SIZE", "5")]).code, 0);
}

#[test]
fn validate_reports_broken_tables() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(d, "x.json", CHAIN_X);
    assert_eq!(sbp(d, &["validate", "x.json"]).code, 0);
    write(
        d,
        "nonassoc.json",
        r#"{"name":"M","elements":["e","x","y"],"identity":"e","table":[["e","x","y"],["x","y","e"],["y","y","y"]]}"#,
    );
    let run = sbp(d, &["validate", "nonassoc.json", "--json"]);
    assert_eq!(run.code, 1);
    assert_eq!(report(&run).witnesses[0]["law"], "associativity");
}

#[test]
fn pa_verify_exhaustive_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let pa = sbp(d, &["examples", "show", "case-2-action"]).stdout;
    // 0^t = s breaks several laws, the major one many times over
    let broken = pa.replace("\"0,t\": \"0\"", "\"0,t\": \"s\"");
    assert_ne!(broken, pa);
    write(d, "broken.json", &broken);
    let least = report(&sbp(d, &["pa-verify", "broken.json", "--json"]));
    let all = report(&sbp(
        d,
        &["pa-verify", "broken.json", "--json", "--exhaustive-witnesses"],
    ));
    assert_eq!(least.exit_code, 1);
    assert_eq!(all.exit_code, 1);
    assert!(all.witnesses.len() > least.witnesses.len());
}

#[test]
fn search_commands() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(d, "x.json", CHAIN_X);
    write(d, "b.json", CHAIN_B);
    write(d, "r.json", r#"{"relation":[["0","1"],["s","1"],["0","t"]]}"#);
    let c = report(&sbp(
        d,
        &[
            "construct",
            "--x",
            "x.json",
            "--b",
            "b.json",
            "--relation",
            "r.json",
            "--json",
        ],
    ));
    assert_eq!(c.verdicts["candidate_tables"], 2);
    assert_eq!(c.verdicts["rejected"][0]["rejection"]["reason"], "⊕≠+");
    let e = report(&sbp(d, &["enumerate", "--x", "x.json", "--b", "b.json", "--json"]));
    assert_eq!(e.verdicts["complete"], true);
    let partial = report(&sbp(
        d,
        &["enumerate", "--x", "x.json", "--b", "b.json", "--budget", "1", "--json"],
    ));
    assert_eq!(partial.verdicts["complete"], false);
    assert!(partial.verdicts["count"].as_u64() <= e.verdicts["count"].as_u64());
    write(d, "bad-seed.json", r#"{"relation":[["0","1"],["0","t"]]}"#);
    assert_eq!(
        sbp(
            d,
            &[
                "construct",
                "--x",
                "x.json",
                "--b",
                "b.json",
                "--relation",
                "bad-seed.json"
            ]
        )
        .code,
        2
    );
}

#[test]
fn complete_and_pullback() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(
        d,
        "ext.json",
        r#"{"monoids":[{"name":"T","elements":["0"],"identity":"0","table":[["0"]]},
         {"name":"A","elements":["0","a","b"],"identity":"0","table":[["0","a","b"],["a","a","b"],["b","b","b"]]},
         {"name":"C","elements":["0","c"],"identity":"0","table":[["0","c"],["c","c"]]}],
         "X":"T","A":"A","B":"C",
         "k":{"domain":"T","codomain":"A","kind":"hom","map":{"0":"0"}},
         "p":{"domain":"A","codomain":"C","kind":"hom","map":{"0":"0","a":"c","b":"c"}}}"#,
    );
    let rep = report(&sbp(d, &["complete", "--bundle", "ext.json", "--json"]));
    assert_eq!(rep.verdicts["count"], 0);

    let a6 = show(d, "A6");
    write(
        d,
        "h.json",
        r#"{"monoids":[{"name":"C","elements":["e","u","v"],"identity":"e","table":[["e","u","v"],["u","u","v"],["v","v","v"]]}],
         "map":{"name":"h","domain":"C","codomain":"B","kind":"hom","map":{"e":"0","u":"c","v":"c"}}}"#,
    );
    let run = sbp(d, &["pullback", &a6, "h.json", "-o", "pb.json"]);
    assert_eq!(run.code, 0, "{}{}", run.stdout, run.stderr);
    assert_eq!(sbp(d, &["verify", "pb.json"]).code, 0);
    // A2 is not a semi-biproduct, so there is nothing to pull back
    let a2 = show(d, "A2");
    assert_eq!(sbp(d, &["pullback", &a2, "h.json"]).code, 1);
}

#[test]
fn cokernel_command() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let a2 = show(d, "A2");
    let rep = report(&sbp(d, &["cokernel", &a2, "--json"]));
    assert_eq!(rep.exit_code, 1);
    assert_eq!(rep.verdicts["kernel"], true);
    assert_eq!(rep.verdicts["cokernel"], false);
    assert_eq!(sbp(d, &["cokernel", &show(d, "A1")]).code, 0);
}
