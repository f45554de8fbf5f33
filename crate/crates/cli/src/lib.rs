//! Library side of the `xmodcat` binary: document parsing, command dispatch
//! and report rendering. [`run`] is pure apart from the `--out`/`--csv` files.

pub mod document;
pub mod report;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::Instant;

use serde_json::{json, Value};
use xmodcat_core::objects::run_object_checks;
use xmodcat_core::premodular::{vacuum_analysis, verify_suite, ModularData, VerificationReport};
use xmodcat_core::xchar::{CharacterTheory, FusionTensor};
use xmodcat_core::xmod::CrossedModule;

pub use document::{parse, DocumentError, ParseError, XmodDocument};
use report::ObjectStatus;

/// Object checks build R⊗R of dimension (|X1||X2|)², so they stop here.
pub const OBJECT_LIMIT: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Validate,
    Irr,
    Modular,
    Fusion,
    Vacuum,
    Verify,
    Report,
}

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub json: bool,
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub fast: bool,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    /// One JSON object per line.
    pub stderr: Vec<String>,
}

impl Outcome {
    fn error(&mut self, code: i32, line: Value) {
        self.code = self.code.max(code);
        self.stderr.push(line.to_string());
    }
}

struct Computed {
    theory: CharacterTheory,
    data: ModularData,
    fusion: FusionTensor,
}

fn compute(x: CrossedModule) -> Result<Computed, String> {
    let theory = CharacterTheory::new(x).map_err(|e| e.to_string())?;
    let data = ModularData::compute(&theory).map_err(|e| e.to_string())?;
    let fusion = theory.fusion_tensor().map_err(|e| e.to_string())?;
    Ok(Computed { theory, data, fusion })
}

fn verification(c: &Computed, fast: bool) -> (VerificationReport, ObjectStatus) {
    let report = verify_suite(&c.theory, &c.data, &c.fusion, false);
    let x = c.theory.xmod();
    let size = x.x1().order() * x.x2().order();
    let objects = if fast {
        ObjectStatus::SkippedFast
    } else if size > OBJECT_LIMIT {
        ObjectStatus::SkippedSize(size)
    } else {
        ObjectStatus::Ran(run_object_checks(&c.theory))
    };
    (report, objects)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn write_file(out: &mut Outcome, path: &PathBuf, contents: &str) -> bool {
    match std::fs::write(path, contents) {
        Ok(()) => true,
        Err(e) => {
            out.error(EXIT_PARSE, json!({"error": "io", "path": path.display().to_string(), "message": e.to_string()}));
            false
        }
    }
}

/// Runs `command` on document text. Panics inside the engine are caught and
/// reported as internal failures.
pub fn run(command: Command, text: &str, opts: &Options) -> Outcome {
    match catch_unwind(AssertUnwindSafe(|| run_inner(command, text, opts))) {
        Ok(o) => o,
        Err(payload) => {
            let message = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            let mut o = Outcome::default();
            o.error(EXIT_INTERNAL, json!({"error": "internal", "message": message}));
            o
        }
    }
}

fn run_inner(command: Command, text: &str, opts: &Options) -> Outcome {
    let start = Instant::now();
    let mut out = Outcome::default();
    let doc = match parse(text) {
        Ok(d) => d,
        Err(e) => {
            out.error(EXIT_PARSE, json!({"error": e.kind(), "path": e.path(), "message": e.to_string()}));
            return out;
        }
    };
    let x = match doc.build() {
        Ok(x) => x,
        Err(DocumentError::Parse(e)) => {
            out.error(EXIT_PARSE, json!({"error": e.kind(), "path": e.path(), "message": e.to_string()}));
            return out;
        }
        Err(DocumentError::Build(e)) => {
            out.error(EXIT_FAILURE, json!({"error": "group", "path": e.path, "message": e.source.to_string()}));
            return out;
        }
    };
    let name = doc.display_name(&x);
    let validation = x.validate();
    for f in &validation.failures {
        let mut line = serde_json::to_value(f).expect("failures serialize");
        line["error"] = Value::from("validation");
        line["message"] = Value::from(f.to_string());
        out.error(EXIT_FAILURE, line);
    }
    let mut full = json!({
        "name": name,
        "document": doc.source,
        "xmod": report::xmod_json(&x),
        "validation": report::validation_json(&validation),
    });

    if !validation.is_ok() {
        match command {
            Command::Validate => {
                out.stdout = if opts.json { pretty(&json!({"name": name, "validation": full["validation"]})) } else { report::validation_text(&name, &x, &validation) };
            }
            Command::Report => emit_report(&mut out, opts, full, start),
            _ => {}
        }
        return out;
    }

    let exactness = match x.exactness() {
        Ok(e) => e,
        Err(e) => {
            out.error(EXIT_INTERNAL, json!({"error": "internal", "message": e.to_string()}));
            return out;
        }
    };
    full["exactness"] = report::exactness_json(&x, &exactness);
    if command == Command::Validate {
        out.stdout = if opts.json {
            pretty(&json!({"name": name, "validation": full["validation"], "exactness": full["exactness"]}))
        } else {
            report::validation_text(&name, &x, &validation) + &report::exactness_text(&exactness)
        };
        return out;
    }

    let c = match compute(x) {
        Ok(c) => c,
        Err(e) => {
            out.error(EXIT_INTERNAL, json!({"error": "internal", "message": e}));
            return out;
        }
    };
    let section = |v: Value| pretty(&json!({"name": name, "result": v}));
    match command {
        Command::Validate => unreachable!(),
        Command::Irr => {
            out.stdout = if opts.json { section(report::irr_json(&c.theory)) } else { report::irr_text(&name, &c.theory) };
        }
        Command::Modular => {
            out.stdout = if opts.json { section(report::modular_json(&c.data)) } else { report::modular_text(&c.data) };
        }
        Command::Fusion => {
            if let Some(path) = &opts.csv {
                if !write_file(&mut out, path, &c.fusion.to_csv()) {
                    return out;
                }
            }
            out.stdout = if opts.json { section(report::fusion_json(&c.fusion)) } else { report::fusion_text(&c.fusion) };
        }
        Command::Vacuum => match vacuum_analysis(&c.theory, &c.data) {
            Ok(v) => out.stdout = if opts.json { section(report::vacuum_json(&v)) } else { report::vacuum_text(&v) },
            Err(e) => out.error(EXIT_INTERNAL, json!({"error": "internal", "message": e.to_string()})),
        },
        Command::Verify | Command::Report => {
            let vacuum = match vacuum_analysis(&c.theory, &c.data) {
                Ok(v) => v,
                Err(e) => {
                    out.error(EXIT_INTERNAL, json!({"error": "internal", "message": e.to_string()}));
                    return out;
                }
            };
            let (ver, objects) = verification(&c, opts.fast);
            for chk in ver.checks.iter().filter(|k| !k.passed) {
                out.error(EXIT_FAILURE, json!({"error": "check", "id": chk.id, "name": chk.name, "counterexample": chk.counterexample}));
            }
            if let ObjectStatus::Ran(o) = &objects {
                for f in &o.failures {
                    out.error(EXIT_FAILURE, json!({"error": "objects", "message": f}));
                }
            }
            let dims = c.theory.dims();
            let summary = json!({
                "irreducibles": c.theory.len(),
                "sum_of_squares": dims.iter().map(|d| d * d).sum::<usize>(),
                "s_invertible": c.data.rank_s == c.theory.len(),
                "rank_S": c.data.rank_s,
                "verdict": vacuum.verdict,
                "all_passed": ver.all_passed() && objects.passed(),
            });
            if command == Command::Verify {
                out.stdout = if opts.json {
                    let mut v = json!({"name": name, "summary": summary, "verification": report::verification_json(&ver, &objects)});
                    v["summary"]["name"] = Value::from(name.clone());
                    pretty(&v)
                } else {
                    format!(
                        "{name}: {} irreducibles, sum of d^2 = {}, S invertible: {}, verdict {:?}\n{}",
                        summary["irreducibles"],
                        summary["sum_of_squares"],
                        if c.data.rank_s == c.theory.len() { "yes" } else { "no" },
                        vacuum.verdict,
                        report::verification_text(&ver, &objects)
                    )
                };
            } else {
                full["irreducibles"] = report::irr_json(&c.theory);
                full["modular"] = report::modular_json(&c.data);
                full["fusion"] = report::fusion_json(&c.fusion);
                full["vacuum"] = report::vacuum_json(&vacuum);
                full["verification"] = report::verification_json(&ver, &objects);
                full["summary"] = summary;
                emit_report(&mut out, opts, full, start);
            }
        }
    }
    out
}

fn emit_report(out: &mut Outcome, opts: &Options, mut full: Value, start: Instant) {
    full["timing"] = json!({"total_ms": start.elapsed().as_secs_f64() * 1000.0});
    let text = pretty(&full);
    match &opts.out {
        Some(path) => {
            if write_file(out, path, &text) {
                out.stdout = format!("report for {} written to {}\n", full["name"].as_str().unwrap_or(""), path.display());
            }
        }
        None => out.stdout = text,
    }
}
