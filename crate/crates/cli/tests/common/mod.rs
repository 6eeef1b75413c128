//! Golden-file cases for the `posmap` binary. Each case runs with the
//! fixtures directory as working directory and its stdout is compared byte
//! for byte with `tests/golden/<name>.json`. Set `UPDATE_GOLDEN=1` to
//! rewrite the golden files.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    /// Fixture piped to stdin.
    pub stdin: Option<&'static str>,
    pub env: &'static [(&'static str, &'static str)],
    pub exit: i32,
}

const fn case(name: &'static str, args: &'static [&'static str], exit: i32) -> Case {
    Case {
        name,
        args,
        stdin: None,
        env: &[],
        exit,
    }
}

pub const CASES: &[Case] = &[
    case(
        "convert_transfer",
        &["convert", "--to", "transfer", "transpose2.json"],
        0,
    ),
    case(
        "convert_choi",
        &["convert", "--to", "choi", "amplitude_damping2.json"],
        0,
    ),
    case(
        "convert_aform_gell_mann",
        &[
            "convert",
            "--to",
            "aform",
            "--basis",
            "gell-mann-with-identity",
            "amplitude_damping2.json",
        ],
        0,
    ),
    case(
        "convert_transfer_fourier",
        &[
            "convert",
            "--to",
            "transfer",
            "--basis",
            "fourier-diagonal-plus-offdiag",
            "identity2.json",
        ],
        0,
    ),
    case(
        "convert_kraus",
        &["convert", "--to", "kraus", "amplitude_damping2.json"],
        0,
    ),
    case(
        "convert_kraus_not_cp",
        &["convert", "--to", "kraus", "transpose2.json"],
        1,
    ),
    case(
        "check_cp_transpose",
        &["check", "--cp", "transpose2.json"],
        0,
    ),
    case("check_all", &["check", "amplitude_damping2.json"], 0),
    case(
        "check_positive_sample",
        &[
            "check",
            "--ccp",
            "--positive-sample",
            "200",
            "--seed",
            "3",
            "transpose2.json",
        ],
        0,
    ),
    case("spectrum_identity", &["spectrum", "identity2.json"], 0),
    case(
        "spectrum_amplitude_damping",
        &["spectrum", "amplitude_damping2.json"],
        0,
    ),
    case(
        "decompose_biorth",
        &["decompose", "--biorth", "amplitude_damping2.json"],
        0,
    ),
    case(
        "decompose_defective",
        &["decompose", "--biorth", "defective2.json"],
        1,
    ),
    case("gen_werner", &["gen", "werner", "2"], 0),
    case("gen_isotropic", &["gen", "isotropic", "2"], 0),
    case("gen_pinching", &["gen", "pinching", "projectors2.json"], 0),
    case("gen_ball", &["gen", "ball", "3"], 0),
    case("gen_ball_too_small", &["gen", "ball", "1"], 1),
    case(
        "gen_example",
        &[
            "gen",
            "example",
            "--alpha",
            "0.5,0.3,0.2",
            "--beta",
            "beta3.json",
        ],
        0,
    ),
    case(
        "gen_example_bad_beta",
        &[
            "gen",
            "example",
            "--alpha",
            "0.5,0.3,0.2",
            "--beta",
            "beta3_not_psd.json",
        ],
        1,
    ),
    case(
        "member_ball_inside",
        &["member", "--ball", "3", "mixed3.json"],
        0,
    ),
    case(
        "member_ball_outside",
        &["member", "--ball", "3", "pure3.json"],
        0,
    ),
    case(
        "member_ball_wrong_dim",
        &["member", "--ball", "4", "pure3.json"],
        1,
    ),
    case(
        "member_projection_member",
        &["member", "--projection", "pinching2.json", "diag2.json"],
        0,
    ),
    Case {
        name: "member_projection_stdin",
        args: &["member", "--projection", "-", "plus2.json"],
        stdin: Some("pinching2.json"),
        env: &[],
        exit: 0,
    },
    case(
        "witness_ball_pure",
        &["witness", "--ball", "3", "pure3.json"],
        0,
    ),
    case(
        "witness_ball_in_ball",
        &["witness", "--ball", "3", "mixed3.json"],
        1,
    ),
    case(
        "demo_example_map",
        &["demo", "example-map", "--d", "4", "--seed", "11"],
        0,
    ),
    case("schema_error", &["spectrum", "bad_schema.json"], 2),
    case("usage_error", &["spectrum", "--bogus", "identity2.json"], 2),
    Case {
        name: "atol_env_invalid",
        args: &["spectrum", "identity2.json"],
        stdin: None,
        env: &[("POSMAP_ATOL", "not-a-number")],
        exit: 2,
    },
    Case {
        name: "atol_env_loose",
        args: &["member", "--ball", "3", "pure3.json"],
        stdin: None,
        env: &[("POSMAP_ATOL", "0.6")],
        exit: 0,
    },
];

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn golden_path(case: &Case) -> PathBuf {
    crate_dir()
        .join("tests/golden")
        .join(format!("{}.json", case.name))
}

/// Runs the binary once, returning `(exit code, stdout)`.
pub fn run(case: &Case) -> (i32, Vec<u8>) {
    let fixtures = crate_dir().join("tests/fixtures");
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_posmap"));
    cmd.args(case.args)
        .current_dir(&fixtures)
        .env_remove("POSMAP_ATOL")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    for (k, v) in case.env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("spawn posmap");
    let input = case
        .stdin
        .map(|f| std::fs::read(fixtures.join(f)).expect("read stdin fixture"));
    {
        let mut stdin = child.stdin.take().expect("piped stdin");
        if let Some(bytes) = input {
            stdin.write_all(&bytes).expect("write stdin");
        }
    }
    let out = child.wait_with_output().expect("wait for posmap");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn updating() -> bool {
    std::env::var_os("UPDATE_GOLDEN").is_some_and(|v| !v.is_empty() && v != "0")
}

/// Runs a case twice and compares both runs with each other and with the
/// golden file.
pub fn check(case: &Case) -> Result<(), String> {
    let (code, first) = run(case);
    let (code2, second) = run(case);
    if code != case.exit {
        return Err(format!(
            "{}: exit {code}, expected {}; stdout:\n{}",
            case.name,
            case.exit,
            String::from_utf8_lossy(&first)
        ));
    }
    if code2 != code || first != second {
        return Err(format!("{}: reruns differ", case.name));
    }
    let path = golden_path(case);
    if updating() {
        std::fs::create_dir_all(path.parent().unwrap()).map_err(|e| e.to_string())?;
        std::fs::write(&path, &first).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let want = std::fs::read(&path).map_err(|e| {
        format!(
            "{}: {e} (run with UPDATE_GOLDEN=1 to create it)",
            display(&path)
        )
    })?;
    if want != first {
        return Err(format!(
            "{}: stdout differs from {}\n--- got ---\n{}",
            case.name,
            display(&path),
            String::from_utf8_lossy(&first)
        ));
    }
    Ok(())
}

fn display(p: &Path) -> String {
    p.display().to_string()
}

#[allow(dead_code)]
pub fn find(name: &str) -> &'static Case {
    CASES
        .iter()
        .find(|c| c.name == name)
        .unwrap_or_else(|| panic!("no case {name}"))
}
