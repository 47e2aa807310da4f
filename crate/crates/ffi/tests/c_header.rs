//! Compiles and runs `examples/smoke.c` against the generated header and the
//! static library.

use std::path::{Path, PathBuf};
use std::process::Command;

fn target_dir() -> PathBuf {
    // <target>/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_is_current() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/feature_clock.h");
    let text = std::fs::read_to_string(header).unwrap();
    for symbol in [
        "fc_run_global",
        "fc_run_local",
        "fc_run_intergroup",
        "fc_config_set_alpha",
        "fc_config_set_cluster",
        "fc_last_error_message",
        "FC_STATUS_COMPUTE_ERROR = 3",
        "typedef struct FcDataset FcDataset;",
    ] {
        assert!(text.contains(symbol), "header lacks {symbol}");
    }
}

#[test]
fn c_program_links_and_runs() {
    let lib = target_dir().join("libfeature_clock_ffi.a");
    if !lib.exists() {
        panic!("static library not found at {}", lib.display());
    }
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let out = std::env::temp_dir().join(format!("fc_smoke_{}", std::process::id()));
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("examples/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&out)
        .status()
        .expect("C compiler available");
    assert!(status.success(), "C compilation failed");
    let run = Command::new(&out).output().unwrap();
    let _ = std::fs::remove_file(&out);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok "));
}
