//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::path::Path;
use std::process::Command;
use std::sync::OnceLock;

use fivefold_cli::{run_suite, Report, ScenarioConfig};

const BIN: &str = env!("CARGO_BIN_EXE_fivefold");

/// Runs `suites` under the scenario given as TOML.
fn run(toml: &str, suites: &[&str]) -> Report {
    let mut cfg = ScenarioConfig::parse(toml).expect("scenario parses");
    cfg.suites = Some(suites.iter().map(|s| s.to_string()).collect());
    run_suite(&cfg.settings().expect("scenario is valid"))
}

/// Requires every listed check to be present and passing; returns a short summary.
fn require(report: &Report, ids: &[&str]) -> Result<String, String> {
    let mut notes = vec![];
    for id in ids {
        let c = report
            .checks
            .iter()
            .find(|c| c.id == *id)
            .ok_or_else(|| format!("missing check {id}"))?;
        let last = c.residuals.last().copied().unwrap_or(f64::NAN);
        let note = match c.order {
            Some(o) => format!("{id} {last:.1e} (order {o:.2})"),
            None => format!("{id} {last:.1e}"),
        };
        if !c.pass {
            return Err(format!("{note} failed"));
        }
        notes.push(note);
    }
    Ok(notes.join(", "))
}

fn metric(preset: &str) -> String {
    let amplitude = if preset == "diagonal-wave" { 0.05 } else { 0.1 };
    format!("seed = 7\n[metric]\npreset = \"{preset}\"\namplitude = {amplitude}\n")
}

/// The conformal gauge suite, shared by the Bianchi and dF criteria.
fn conformal_gauge() -> &'static Report {
    static REPORT: OnceLock<Report> = OnceLock::new();
    REPORT.get_or_init(|| run(&metric("conformal"), &["gauge"]))
}

fn metric_torsion(preset: &str, torsion: &str, amplitude: f64) -> String {
    format!(
        "{}[torsion]\npreset = \"{torsion}\"\namplitude = {amplitude}\n",
        metric(preset)
    )
}

fn bijection() -> Result<String, String> {
    let r = run("seed = 7\nsamples = 1000\n", &["torsion-bijection"]);
    require(&r, &["torsion-roundtrip", "contorsion-roundtrip"])
}

fn poincare() -> Result<String, String> {
    let r = run("seed = 7\n", &["poincare-algebra"]);
    require(
        &r,
        &[
            "with-translation",
            "rotation-only",
            "rotation-only-translations",
        ],
    )
}

fn curvature_family() -> Result<String, String> {
    let mut out = vec![];
    for m in ["flat", "conformal", "diagonal-wave"] {
        let r = run(&metric(m), &["curvature-family"]);
        let s = require(
            &r,
            &[
                "riemann-block",
                "mixed-block-zero",
                "printed-zz-block",
                "zz-block-without-bracket",
                "halved-zz-block-flat",
                "halved-zz-block",
                "fifth-row-translation-block",
                "fifth-row-metric-block",
            ],
        )
        .map_err(|e| format!("{m}: {e}"))?;
        if m != "flat" {
            out.push(format!("{m}: {}", s.split(", ").next().unwrap_or("")));
        }
    }
    Ok(out.join("; "))
}

fn jacobi() -> Result<String, String> {
    let mut out = vec![];
    for m in ["conformal", "diagonal-wave"] {
        let r = run(&metric(m), &["jacobi-bianchi"]);
        out.push(
            require(&r, &["jacobi-with-defect", "jacobi-without-defect"])
                .map_err(|e| format!("{m}: {e}"))?,
        );
    }
    Ok(out.join("; "))
}

fn bianchi() -> Result<String, String> {
    let curved = run(&metric("conformal"), &["jacobi-bianchi"]);
    let a = require(
        &curved,
        &[
            "bianchi-with-defect",
            "bianchi-flipped-defect",
            "bianchi-flat",
        ],
    )?;
    let g = require(
        conformal_gauge(),
        &[
            "gauge-bianchi",
            "gauge-bianchi-without-defect",
            "gauge-bianchi-trivial",
        ],
    )?;
    let flat = run(&metric("flat"), &["gauge"]);
    let b = require(&flat, &["gauge-bianchi-abelian", "gauge-bianchi-trivial"])?;
    Ok(format!("{a}, {g}; flat {b}"))
}

fn commuting_basis() -> Result<String, String> {
    let r = run(&metric("flat"), &["curvature-family"]);
    require(&r, &["commuting-basis-flat", "commuting-basis-curved"])
}

fn gravity_identities() -> Result<String, String> {
    let mut out = vec![];
    for (m, t, a) in [
        ("conformal", "trig", 0.1),
        ("diagonal-wave", "trig", 0.1),
        ("conformal", "constant", 0.2),
    ] {
        let r = run(&metric_torsion(m, t, a), &["gravity-identities"]);
        out.push(
            require(
                &r,
                &[
                    "torsion-divergence",
                    "einstein-divergence",
                    "contracted-bianchi",
                ],
            )
            .map_err(|e| format!("{m}/{t}: {e}"))?,
        );
    }
    Ok(out.join("; "))
}

fn field_equations() -> Result<String, String> {
    let r = run("seed = 7\n", &["field-equations"]);
    require(
        &r,
        &[
            "y-closed-form-flat",
            "y-torsion-block-flat",
            "y-closed-form-lattice",
            "y-fifth-row-zero",
            "manufactured-point",
            "manufactured-perturbed",
            "manufactured-lattice",
        ],
    )
}

fn electrodynamics() -> Result<String, String> {
    let mut out = vec![];
    for kappa in [1.0, 1.7] {
        let toml = format!("seed = 7\n[constants]\nkappa = {kappa}\n");
        let r = run(&toml, &["electrodynamics"]);
        out.push(
            require(
                &r,
                &[
                    "lagrangian-coefficients",
                    "dispersion-masses",
                    "ratio-massless",
                    "ratio-massive",
                    "evolver-massive",
                    "evolver-kaluza-klein",
                    "evolver-photon",
                ],
            )
            .map_err(|e| format!("kappa {kappa}: {e}"))?,
        );
    }
    Ok(out.join("; "))
}

fn exterior_derivative() -> Result<String, String> {
    require(conformal_gauge(), &["df-abelian", "df-nonabelian"])
}

fn adjoint_integration() -> Result<String, String> {
    let r = run("seed = 7\n", &["adjoint-integration"]);
    require(
        &r,
        &[
            "reparametrization-affine",
            "reparametrization-nonlinear",
            "duality-first-kind",
            "duality-second-kind",
            "stokes-constant",
            "stokes-varying",
        ],
    )
}

fn verify(config: &Path, extra: &[&str]) -> i32 {
    Command::new(BIN)
        .arg("verify")
        .arg("--config")
        .arg(config)
        .args(extra)
        .output()
        .expect("binary runs")
        .status
        .code()
        .unwrap_or(-1)
}

fn determinism() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path();
    let write = |name: &str, text: &str| {
        let p = d.join(name);
        std::fs::write(&p, text).expect("temp file");
        p
    };
    let expect = |what: &str, got: i32, want: i32| {
        if got == want {
            Ok(())
        } else {
            Err(format!("{what}: exit {got}, expected {want}"))
        }
    };

    let cheap = write(
        "cheap.toml",
        "seed = 11\nsuites = [\"torsion-bijection\", \"poincare-algebra\", \"field-equations\", \"adjoint-integration\"]\n",
    );
    let mut payloads = vec![];
    for run in ["a", "b"] {
        let out = d.join(run);
        expect(
            "repeat run",
            verify(&cheap, &["--out", out.to_str().unwrap()]),
            0,
        )?;
        let csv = std::fs::read(out.join("report.csv")).map_err(|e| e.to_string())?;
        let json = std::fs::read_to_string(out.join("report.json")).map_err(|e| e.to_string())?;
        let report = Report::from_json(&json).map_err(|e| e.to_string())?;
        payloads.push((csv, report.numeric_payload()));
    }
    if payloads[0] != payloads[1] {
        return Err("same seed gave different output".into());
    }

    let corrupted = write(
        "corrupted.toml",
        "seed = 7\nsuites = [\"curvature-family\"]\n[conventions]\nprinted_zz_block = \"halved\"\n",
    );
    expect("corrupted convention", verify(&corrupted, &[]), 1)?;
    let unknown = write("unknown.toml", "seed = 7\ncolour = \"blue\"\n");
    expect("unknown key", verify(&unknown, &[]), 2)?;
    let bad_suite = write("bad.toml", "seed = 7\nsuites = [\"no-such-suite\"]\n");
    expect("unknown suite", verify(&bad_suite, &[]), 2)?;
    expect("missing file", verify(&d.join("absent.toml"), &[]), 2)?;

    let empty = write("empty.toml", "seed = 7\nsuites = []\n");
    let out = d.join("empty");
    expect(
        "empty suite list",
        verify(&empty, &["--out", out.to_str().unwrap()]),
        0,
    )?;
    let json = std::fs::read_to_string(out.join("report.json")).map_err(|e| e.to_string())?;
    let report = Report::from_json(&json).map_err(|e| e.to_string())?;
    let csv = std::fs::read_to_string(out.join("report.csv")).map_err(|e| e.to_string())?;
    if !report.checks.is_empty() || csv.lines().count() != 1 {
        return Err("empty suite list produced checks".into());
    }

    let full = write("flat.toml", &metric("flat"));
    expect("full flat run", verify(&full, &[]), 0)?;
    Ok("byte-identical reruns; exit codes 0/1/2 as specified".into())
}

type Criterion = fn() -> Result<String, String>;

fn main() {
    let criteria: [(&str, Criterion); 12] = [
        ("torsion/contorsion bijection", bijection),
        ("Poincare algebra of the connection coefficients", poincare),
        ("curvature family closed forms", curvature_family),
        ("Jacobi replacement", jacobi),
        ("Bianchi analog and gauge identity", bianchi),
        ("flat-space commuting basis", commuting_basis),
        (
            "torsion and Einstein divergence identities",
            gravity_identities,
        ),
        (
            "Y tensor closed forms and manufactured solutions",
            field_equations,
        ),
        ("electrodynamics numbers", electrodynamics),
        ("dF = 0", exterior_derivative),
        ("adjoint integration", adjoint_integration),
        ("harness determinism and exit codes", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = std::time::Instant::now();
        match check() {
            Ok(detail) => println!(
                "criterion {:>2} PASS {name} [{:.1}s]: {detail}",
                i + 1,
                t.elapsed().as_secs_f64()
            ),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {why}", i + 1)
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
