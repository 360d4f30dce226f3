//! Golden-output harness shared by the `golden` and `acceptance` targets.

#![allow(dead_code)]

use std::path::{Path, PathBuf};

use hypermyerson_cli::{run, EXIT_FAILS, EXIT_OK};

pub fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(name)
}

/// (golden file stem, input file, extra arguments, expected exit code)
pub const CASES: &[(&str, &str, &[&str], i32)] = &[
    (
        "example.components",
        "example.json",
        &["components"],
        EXIT_OK,
    ),
    (
        "example.components-weak",
        "example.json",
        &["components", "--semantics", "weak"],
        EXIT_OK,
    ),
    ("example.bridges", "example.json", &["bridges"], EXIT_OK),
    (
        "example.critical-5-2",
        "example.json",
        &["critical", "--from", "5", "--to", "2"],
        EXIT_OK,
    ),
    (
        "example.critical-1-5",
        "example.json",
        &["critical", "--from", "1", "--to", "5"],
        EXIT_OK,
    ),
    ("example.myerson", "example.json", &["myerson"], EXIT_OK),
    (
        "example.stability-e4",
        "example.json",
        &["stability", "--edge", "4"],
        EXIT_OK,
    ),
    (
        "example.safety-e2",
        "example.json",
        &["safety", "--edge", "2"],
        EXIT_OK,
    ),
    (
        "example.verify-axioms",
        "example.json",
        &["verify-axioms"],
        EXIT_OK,
    ),
    (
        "example.verify-theorem",
        "example.json",
        &["verify-theorem"],
        EXIT_FAILS,
    ),
    (
        "example.decomposition",
        "example.json",
        &["decomposition"],
        EXIT_OK,
    ),
    (
        "example.estimate",
        "example.json",
        &["estimate", "--samples", "2000", "--seed", "1"],
        EXIT_OK,
    ),
    (
        "example-quadratic.myerson",
        "example-quadratic.json",
        &["myerson"],
        EXIT_OK,
    ),
    (
        "example-quadratic.verify-axioms",
        "example-quadratic.json",
        &["verify-axioms"],
        EXIT_FAILS,
    ),
    (
        "example-quadratic.verify-theorem",
        "example-quadratic.json",
        &["verify-theorem"],
        EXIT_OK,
    ),
    (
        "example-quadratic.decomposition",
        "example-quadratic.json",
        &["decomposition"],
        EXIT_OK,
    ),
    (
        "example-quadratic.safety-e2",
        "example-quadratic.json",
        &["safety", "--edge", "2"],
        EXIT_OK,
    ),
    (
        "empty-edges.myerson",
        "empty-edges.json",
        &["myerson"],
        EXIT_OK,
    ),
    (
        "empty-edges.shapley",
        "empty-edges.json",
        &["shapley"],
        EXIT_OK,
    ),
    (
        "random-weak.verify-axioms",
        "random-weak.json",
        &["verify-axioms", "--semantics", "weak"],
        EXIT_OK,
    ),
    (
        "strict-suite.verify-theorem",
        "strict-suite.json",
        &["verify-theorem"],
        EXIT_FAILS,
    ),
    (
        "convex-suite.verify-theorem",
        "convex-suite.json",
        &["verify-theorem"],
        EXIT_FAILS,
    ),
    (
        "bridge-unsafe.verify-theorem",
        "bridge-unsafe.json",
        &["verify-theorem"],
        EXIT_FAILS,
    ),
    (
        "bridge-unsafe.safety-e1",
        "bridge-unsafe.json",
        &["safety", "--edge", "1"],
        EXIT_OK,
    ),
];

fn invoke(input: &str, args: &[&str]) -> hypermyerson_cli::Outcome {
    let input = corpus(input);
    let reported = corpus("example.paper-values.json");
    let mut argv = vec!["hypermyerson".to_string()];
    argv.extend(args.iter().map(|a| a.to_string()));
    argv.push("--input".into());
    argv.push(input.display().to_string());
    if args.first() == Some(&"audit") {
        argv.push("--reported".into());
        argv.push(reported.display().to_string());
    }
    run(argv, || unreachable!("input comes from a file"))
}

fn check(stem: &str, input: &str, args: &[&str], code: i32) -> Result<(), String> {
    let out = invoke(input, args);
    if out.code != code {
        return Err(format!(
            "{stem}: exit {} (expected {code}), stderr {}",
            out.code, out.stderr
        ));
    }
    let path = corpus("golden").join(format!("{stem}.json"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &out.stdout).unwrap();
        return Ok(());
    }
    let committed = std::fs::read_to_string(&path)
        .map_err(|e| format!("{stem}: cannot read {}: {e}", path.display()))?;
    if committed != out.stdout {
        return Err(format!("{stem}: output differs from {}", path.display()));
    }
    Ok(())
}

/// Every committed golden file reproduces byte for byte.
pub fn check_all() -> Vec<String> {
    let mut cases: Vec<(&str, &str, &[&str], i32)> = CASES.to_vec();
    cases.push(("example.audit", "example.json", &["audit"], EXIT_OK));
    cases
        .into_iter()
        .filter_map(|(stem, input, args, code)| check(stem, input, args, code).err())
        .collect()
}

/// Golden stems covered by [`check_all`].
pub fn stems() -> Vec<&'static str> {
    let mut stems: Vec<&str> = CASES.iter().map(|c| c.0).collect();
    stems.push("example.audit");
    stems
}
