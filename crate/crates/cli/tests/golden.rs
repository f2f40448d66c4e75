use std::path::Path;
use std::process::Command;

fn manifest() -> Vec<(String, Vec<String>)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/golden");
    std::fs::read_to_string(dir.join("MANIFEST"))
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let (file, args) = l.split_once('|').unwrap();
            (file.trim().to_string(), args.split_whitespace().map(str::to_string).collect())
        })
        .collect()
}

#[test]
fn reports_match_golden_files() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/golden");
    let entries = manifest();
    assert!(entries.len() >= 20);
    for (file, args) in entries {
        let out = Command::new(env!("CARGO_BIN_EXE_tfr")).args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let want = std::fs::read_to_string(dir.join(&file)).unwrap();
        assert_eq!(String::from_utf8(out.stdout).unwrap(), want, "{file} differs from `tfr {}`", args.join(" "));
    }
}
