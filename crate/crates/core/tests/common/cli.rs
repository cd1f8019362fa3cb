//! Drives the `rsframe` binary.

#![allow(dead_code)]

use std::fs;
use std::path::PathBuf;
use std::process::Command;

use rsframe::io;

use super::laws::Check;

pub fn fixture(name: &str) -> String {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    dir.join(name).to_string_lossy().into_owned()
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_rsframe"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

pub const CXT: [&str; 3] = ["CTX_DIAG2.cxt", "CTX_DIAG3.cxt", "CTX_VITAMIN.cxt"];
pub const REL: [&str; 4] = [
    "incidence.rel",
    "incidence2.rel",
    "empty.rel",
    "misattributed.rel",
];

/// Every fixture file reparses and rewrites to the same bytes.
pub fn fixture_roundtrip() -> Check {
    for name in CXT {
        let text = fs::read_to_string(fixture(name)).map_err(|e| e.to_string())?;
        let ctx = io::parse_cxt(&text).map_err(|e| format!("{name}: {e}"))?;
        if io::write_cxt(&ctx) != text {
            return Err(format!("{name} does not rewrite byte-identically"));
        }
        if io::parse_cxt(&io::write_cxt(&ctx)).ok() != Some(ctx) {
            return Err(format!("{name}: load(save(ctx)) != ctx"));
        }
    }
    let diag2 = io::load_cxt(fixture("CTX_DIAG2.cxt")).map_err(|e| e.to_string())?;
    for name in REL {
        let text = fs::read_to_string(fixture(name)).map_err(|e| e.to_string())?;
        let r = io::parse_rel(&text, &diag2).map_err(|e| format!("{name}: {e}"))?;
        if io::write_rel(&r) != text {
            return Err(format!("{name} does not rewrite byte-identically"));
        }
    }
    let out = tempfile::tempdir().map_err(|e| e.to_string())?;
    let target = out.path().join("pruned.cxt");
    let target = target.to_string_lossy();
    let r = run(&["prune", &fixture("CTX_DIAG3.cxt"), "-o", &target]);
    if r.code != 0 {
        return Err(format!("prune exited {}: {}", r.code, r.stderr));
    }
    let written = fs::read_to_string(&*target).map_err(|e| e.to_string())?;
    let original = fs::read_to_string(fixture("CTX_DIAG3.cxt")).map_err(|e| e.to_string())?;
    if written != original {
        return Err("pruning an RS fixture changed its file".into());
    }
    Ok(())
}

/// `(args, exit code, text expected on stdout)`.
pub fn matrix() -> Vec<(Vec<String>, i32, &'static str)> {
    let d2 = fixture("CTX_DIAG2.cxt");
    let d3 = fixture("CTX_DIAG3.cxt");
    let vit = fixture("CTX_VITAMIN.cxt");
    let inc = fixture("incidence.rel");
    let inc2 = fixture("incidence2.rel");
    let empty = fixture("empty.rel");
    let mis = fixture("misattributed.rel");
    let args = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    vec![
        (args(&["lattice", &d2]), 0, "c3: {a1, a2} | {}"),
        (args(&["lattice", &d3, "--dot"]), 0, "digraph lattice"),
        (args(&["check-rs", &d2]), 0, "RS-polarity: yes"),
        (args(&["check-rs", &vit]), 1, "r2 violation: vAC"),
        (args(&["check-rel", &d2, &inc]), 0, "factive: yes"),
        (args(&["check-rel", &d2, &empty]), 0, "compatible: yes"),
        (args(&["check-rel", &d2, &mis]), 0, "factive: no"),
        (
            args(&[
                "eval", &d2, &inc, "-v", "p=obj:a1", "-f", "[1]p", "--at", "a1",
            ]),
            0,
            "a1 |= [1]p: true",
        ),
        (
            args(&[
                "eval", &d2, &inc, "-v", "p=obj:a1", "-f", "[1]p", "--at", "a2",
            ]),
            1,
            "false",
        ),
        (
            args(&[
                "eval", &d2, &inc, "-v", "p=obj:a1", "-f", "[1]p", "--co", "x1",
            ]),
            0,
            "true",
        ),
        (
            args(&["eval", &d2, &empty, "-v", "p=obj:a1", "-f", "[1]p"]),
            0,
            "extent: {}",
        ),
        (
            args(&["eval", &d2, &inc, "-v", "p=obj:a1", "-f", "[1]p &"]),
            2,
            "",
        ),
        (args(&["eval", &d2, &inc, "-f", "[1]q"]), 2, ""),
        (
            args(&["eval", &d2, &inc, "-v", "p=obj:zz", "-f", "p"]),
            2,
            "",
        ),
        (args(&["eval", &d2, &inc, "-v", "p", "-f", "p"]), 2, ""),
        (
            args(&["eval", &d2, &inc, "-v", "p=obj:a1", "-f", "[7]p"]),
            2,
            "",
        ),
        (
            args(&["valid", &d2, &inc, "-i", "[1]p <= p"]),
            0,
            "valid: yes",
        ),
        (
            args(&["valid", &d2, &mis, "-i", "[1]p <= p"]),
            1,
            "counterexample: p := {a2} | {x2}",
        ),
        (
            args(&["valid", &d2, &inc, "-i", "[1]p <= p", "--mode", "conominal"]),
            0,
            "valid: yes",
        ),
        (
            args(&["valid", &d2, &inc, "-i", "[1]p <= p", "--mode", "bogus"]),
            2,
            "",
        ),
        (
            args(&["valid", &d3, "-i", "p & q & r & s & t & u & v & w & z <= p"]),
            3,
            "",
        ),
        (args(&["valid", &vit, "-i", "p <= p"]), 3, ""),
        (
            args(&["translate", "-i", "[1]p <= p"]),
            0,
            "∀a(∀x(P₂(x) → aR₁x) → P₁(a))",
        ),
        (
            args(&["translate", "-i", "[1]p <= p", "--ascii"]),
            0,
            "all a.(all x.(P2(x) -> R1(a,x)) -> P1(a))",
        ),
        (args(&["translate", "-i", "p <="]), 2, ""),
        (
            args(&["correspond", &d2, &inc, "--axiom", "factivity"]),
            0,
            "AGREE",
        ),
        (
            args(&["correspond", &d2, &mis, "--axiom", "pos_intro"]),
            0,
            "frame validity: false",
        ),
        (
            args(&["correspond", &d2, &empty, "--axiom", "box_zero"]),
            0,
            "first-order verdict: true",
        ),
        (args(&["correspond", &d2, &inc, "--axiom", "nope"]), 2, ""),
        (
            args(&["common", &d2, &inc, &inc2]),
            0,
            "C(x1) = {a1} | {x1}",
        ),
        (
            args(&["common", &d2, &inc, &empty, "--feature", "x2"]),
            3,
            "",
        ),
        (
            args(&["common", &d2, &inc, &inc2, "--feature", "x2"]),
            0,
            "C(x2) = {a2} | {x2}",
        ),
        (args(&["common", &d2, &mis, &inc2]), 3, "# agent 1"),
        (args(&["common", &d2, &mis, &inc2, "--force"]), 0, "C*(x1)"),
        (args(&["common", &d3, &inc]), 2, ""),
        (args(&["lattice", "/nonexistent/ctx.cxt"]), 2, ""),
        (args(&["frobnicate"]), 2, ""),
        (args(&[]), 2, ""),
        (args(&["--version"]), 0, "rsframe"),
    ]
}

/// Each matrix row exits as stated, prints the expected text, and reports
/// failures as a single `error[kind]:` line.
pub fn exit_code_matrix() -> Check {
    for (args, code, expect) in matrix() {
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let r = run(&argv);
        if r.code != code {
            return Err(format!(
                "{argv:?}: exit {} (want {code}); stderr {}",
                r.code, r.stderr
            ));
        }
        if !r.stdout.contains(expect) {
            return Err(format!("{argv:?}: stdout lacks {expect:?}:\n{}", r.stdout));
        }
        if code >= 2 {
            let lines: Vec<&str> = r.stderr.lines().collect();
            if lines.len() != 1 || !lines[0].starts_with("error[") {
                return Err(format!(
                    "{argv:?}: stderr is not one error line: {:?}",
                    r.stderr
                ));
            }
        } else if !r.stderr.is_empty() {
            return Err(format!("{argv:?}: unexpected stderr {:?}", r.stderr));
        }
    }
    Ok(())
}

/// Repeated invocations print byte-identical output.
pub fn determinism() -> Check {
    for (args, _, _) in matrix() {
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let (a, b) = (run(&argv), run(&argv));
        if a.stdout != b.stdout || a.stderr != b.stderr || a.code != b.code {
            return Err(format!("{argv:?} is not deterministic"));
        }
    }
    Ok(())
}
