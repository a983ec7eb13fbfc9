//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! fails. Every criterion is exact, so a skipped check counts as a failure.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::Instant;

use forge_cli::sha256_hex;
use forge_core::limits::{stage_ceiling, CatalogParams};
use forge_core::lifting::CayleyRoot;
use forge_core::morphism::classify_map;
use forge_core::presets::RootPreset;
use forge_core::pushout::pushout_1phep;
use forge_core::suites::{self, one_point_spans, SuiteReport};
use forge_core::{FiniteStructure, Rational, StructureClass};
use rayon::prelude::*;
use tempfile::TempDir;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn grid(values: &[i64]) -> Vec<Rational> {
    values.iter().map(|&v| Rational::integer(v)).collect()
}

fn ceiling() -> usize {
    stage_ceiling().unwrap()
}

fn preset(spec: &str) -> Arc<FiniteStructure> {
    Arc::new(spec.parse::<RootPreset>().unwrap().build().unwrap())
}

fn params_for(class: StructureClass, max_base: usize, g: &[i64]) -> CatalogParams {
    if class == StructureClass::Metric {
        CatalogParams::with_grid(max_base, grid(g))
    } else {
        CatalogParams::new(max_base)
    }
}

/// Folds reports into a verdict; skips and failures both reject.
fn judge(reports: &[SuiteReport]) -> Verdict {
    let mut parts = Vec::new();
    for r in reports {
        if !r.passed() || r.has_skips() {
            let first = r.failures.first().cloned().unwrap_or_default();
            return Err(format!(
                "{}: {}/{} passed, {} skipped {first}",
                r.suite, r.passed, r.checked, r.skipped
            ));
        }
        parts.push(format!("{} {}/{}", r.suite, r.passed, r.checked));
    }
    Ok(parts.join(", "))
}

fn criterion_1() -> Verdict {
    let mut reports = Vec::new();
    for class in [StructureClass::Graph, StructureClass::Poset, StructureClass::Semilattice] {
        reports.push(suites::pushout_oracle_suite(class, 3, 3, &[]).map_err(|e| e.to_string())?);
    }
    reports.push(suites::pushout_oracle_suite(StructureClass::Metric, 3, 3, &grid(&[1, 2, 3])).map_err(|e| e.to_string())?);
    judge(&reports)
}

fn criterion_2() -> Verdict {
    let mut reports = Vec::new();
    for class in StructureClass::ALL {
        let g = grid(if class == StructureClass::Metric { &[1, 2, 3] } else { &[] });
        let spans = one_point_spans(class, 3, &g).map_err(|e| e.to_string())?;
        let bad: Vec<String> = spans
            .into_par_iter()
            .filter_map(|span| {
                let sq = match pushout_1phep(span) {
                    Ok(sq) => sq,
                    Err(e) => return Some(e.to_string()),
                };
                let p = sq.object();
                let l = classify_map(sq.left_leg().source(), p, sq.left_leg().map()).ok()?;
                let r = classify_map(sq.right_leg().source(), p, sq.right_leg().map()).ok()?;
                (!(l.is_surjection() && r.is_embedding())).then(|| format!("legs {l} / {r}"))
            })
            .collect();
        let mut report = SuiteReport {
            suite: format!("1phep-legs/{class}"),
            ..Default::default()
        };
        let total = one_point_spans(class, 3, &g).map_err(|e| e.to_string())?.len();
        report.checked = total;
        report.passed = total - bad.len();
        report.failures = bad.into_iter().take(3).collect();
        reports.push(report);
        reports.push(suites::amalgam_legs_suite(class, 3, &g).map_err(|e| e.to_string())?);
    }
    judge(&reports)
}

fn criterion_3() -> Verdict {
    judge(&[suites::congruence_extension_suite(4).map_err(|e| e.to_string())?])
}

fn criterion_4() -> Verdict {
    let mut reports = Vec::new();
    for class in StructureClass::ALL {
        let g = grid(if class == StructureClass::Metric { &[1, 2] } else { &[] });
        reports.push(suites::free_sum_coherence_suite(class, 2, 3, &g).map_err(|e| e.to_string())?);
    }
    judge(&reports)
}

fn criterion_5() -> Verdict {
    let mut reports = Vec::new();
    for spec in ["edgeless:4", "antichain:4", "simplex:3:1", "freesemilattice:2"] {
        let root = preset(spec);
        let params = params_for(root.class(), 2, &[1, 2]);
        reports.extend(suites::functoriality_suite(root, &params, ceiling()).map_err(|e| e.to_string())?);
    }
    judge(&reports)
}

fn criterion_6() -> Verdict {
    let mut reports = Vec::new();
    for class in StructureClass::ALL {
        let params = params_for(class, 2, &[1, 2]);
        let r = suites::cayley_suite(CayleyRoot::for_class(class), &params, ceiling()).map_err(|e| e.to_string())?;
        reports.push(r);
    }
    judge(&reports)
}

fn graph_chain() -> Result<forge_core::limits::StageChain, String> {
    suites::chain_for(preset("edgeless:2"), 1, &CatalogParams::new(2), ceiling()).map_err(|e| e.to_string())
}

fn criterion_7() -> Verdict {
    let mut reports = vec![suites::homogeneity_suite(&graph_chain()?).map_err(|e| e.to_string())?];
    for (spec, params) in [
        ("antichain:2", CatalogParams::new(2)),
        ("simplex:2:1", CatalogParams::with_grid(2, grid(&[1, 2]))),
    ] {
        let chain = suites::chain_for(preset(spec), 1, &params, ceiling()).map_err(|e| e.to_string())?;
        reports.push(suites::homogeneity_suite(&chain).map_err(|e| e.to_string())?);
    }
    judge(&reports)
}

fn criterion_8() -> Verdict {
    judge(&[suites::extension_property_suite(&graph_chain()?).map_err(|e| e.to_string())?])
}

fn forge(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_forge")).args(args).output().map_err(|e| e.to_string())?;
    if out.status.code() != Some(0) {
        return Err(format!("forge {} exited with {:?}", args.join(" "), out.status.code()));
    }
    Ok(out.stdout)
}

fn file_hashes(dir: &Path) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    for entry in fs::read_dir(dir).map_err(|e| e.to_string())? {
        let path = entry.map_err(|e| e.to_string())?.path();
        let bytes = fs::read(&path).map_err(|e| e.to_string())?;
        out.insert(path.file_name().unwrap().to_string_lossy().into_owned(), sha256_hex(&bytes));
    }
    Ok(out)
}

fn criterion_9() -> Verdict {
    let builds: [&[&str]; 3] = [
        &["--root", "edgeless:2", "--stages", "1", "--dot"],
        &["--root", "simplex:2:1", "--stages", "1", "--grid", "1,2"],
        &["--root", "freesemilattice:2", "--stages", "1", "--max-base", "1"],
    ];
    let mut files = 0;
    for args in builds {
        let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
        let mut runs = Vec::new();
        for dir in [&a, &b] {
            let mut all = vec!["build", "--out", dir.path().to_str().unwrap()];
            all.extend_from_slice(args);
            runs.push((forge(&all)?, file_hashes(dir.path())?));
        }
        if runs[0] != runs[1] {
            return Err(format!("build {} differs between runs", args.join(" ")));
        }
        files += runs[0].1.len();

        let chain = a.path().to_str().unwrap();
        for suite in ["axioms", "homogeneity"] {
            let args = ["verify", "--suite", suite, "--chain", chain];
            if forge(&args)? != forge(&args)? {
                return Err(format!("verify --suite {suite} on {chain} differs between runs"));
            }
        }
    }
    for args in [
        &["verify", "--suite", "functoriality", "--root", "edgeless:2"][..],
        &["verify", "--suite", "cayley"][..],
        &["verify", "--suite", "free-sum", "--class", "semilattice"][..],
        &["lift", "--root", "antichain:3", "--map", "1,2,0"][..],
    ] {
        if forge(args)? != forge(args)? {
            return Err(format!("{} differs between runs", args.join(" ")));
        }
    }
    Ok(format!("3 builds ({files} files) and 10 report commands byte-identical across two runs"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("pushout-oracle equivalence", criterion_1),
        ("strict 1PHEP and strict AP leg contract", criterion_2),
        ("congruence extension on semilattices up to 4", criterion_3),
        ("free-sum coherence", criterion_4),
        ("functoriality of the lift", criterion_5),
        ("Cayley embedding of T2", criterion_6),
        ("weak homogeneity of F1", criterion_7),
        ("random-graph extension property", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = run();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("PASS criterion {}: {name} [{detail}] ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name} [{detail}] ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
