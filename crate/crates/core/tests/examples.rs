//! Runs every example binary that `cargo test` built alongside this test.

use std::path::PathBuf;
use std::process::Command;

fn examples_dir() -> PathBuf {
    // target/<profile>/deps/<this test> → target/<profile>/examples
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(|d| d.parent()).unwrap().join("examples")
}

fn example_names() -> Vec<String> {
    let src = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples");
    let mut names: Vec<String> = std::fs::read_dir(src)
        .unwrap()
        .filter_map(|e| {
            let p = e.ok()?.path();
            let stem = p.file_stem()?.to_string_lossy().into_owned();
            (p.extension()? == "rs").then_some(stem)
        })
        .collect();
    names.sort();
    names
}

#[test]
fn every_example_runs() {
    let dir = examples_dir();
    let names = example_names();
    assert!(names.len() >= 7);
    let present: Vec<&String> = names.iter().filter(|n| dir.join(n).exists()).collect();
    if present.is_empty() {
        eprintln!("examples not built in {}; run the whole test suite to build them", dir.display());
        return;
    }
    assert_eq!(present.len(), names.len(), "some examples missing from {}", dir.display());
    let cache = tempfile::tempdir().unwrap();
    for name in names {
        let out = Command::new(dir.join(&name)).env("GL3LAB_CACHE_DIR", cache.path()).output().unwrap();
        assert!(
            out.status.success(),
            "example {name} failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(!out.stdout.is_empty(), "example {name} printed nothing");
    }
}
