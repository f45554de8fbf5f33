//! JSON sections and human-readable tables.

use serde_json::{json, Value};
use xmodcat_core::objects::ObjectChecks;
use xmodcat_core::premodular::{ModularData, VacuumReport, VerificationReport};
use xmodcat_core::xchar::{CharacterTheory, FusionTensor};
use xmodcat_core::xmod::{CrossedModule, ExactnessData, ValidationReport};
use xmodcat_core::Cyclotomic;

fn cyc(x: &Cyclotomic) -> Value {
    serde_json::to_value(x).expect("cyclotomics serialize")
}

pub fn xmod_json(x: &CrossedModule) -> Value {
    json!({
        "x1": x.x1().table(),
        "x2": x.x2().table(),
        "action": x.action_rows(),
        "boundary": x.boundary_map(),
    })
}

pub fn validation_json(r: &ValidationReport) -> Value {
    let failures: Vec<Value> = r
        .failures
        .iter()
        .map(|f| {
            let mut v = serde_json::to_value(f).expect("failures serialize");
            v["message"] = Value::from(f.to_string());
            v
        })
        .collect();
    json!({ "valid": r.is_ok(), "failures": failures })
}

pub fn exactness_json(x: &CrossedModule, e: &ExactnessData) -> Value {
    json!({
        "x1_order": x.x1().order(),
        "x2_order": x.x2().order(),
        "kernel": e.kernel,
        "image": e.image,
        "cosets": e.cosets.iter().map(|c| json!({"representative": c.representative, "elements": c.elements})).collect::<Vec<_>>(),
        "global_order": e.global_order,
    })
}

pub fn irr_json(t: &CharacterTheory) -> Value {
    let x = t.xmod();
    let (n1, n2) = (x.x1().order(), x.x2().order());
    let characters: Vec<Value> = t
        .irreducibles()
        .iter()
        .map(|psi| Value::Array((0..n2).map(|m| Value::Array((0..n1).map(|g| cyc(&psi.value(m, g))).collect())).collect()))
        .collect();
    let dims = t.dims();
    json!({
        "count": t.len(),
        "sum_of_squares": dims.iter().map(|d| d * d).sum::<usize>(),
        "unit_index": t.unit_index(),
        "labels": t.labels(),
        "dims": dims,
        "characters": characters,
    })
}

pub fn modular_json(d: &ModularData) -> Value {
    json!({
        "global_order": d.global_order,
        "identity_index": d.identity_index,
        "dims": d.dims,
        "omega": d.omega.iter().map(cyc).collect::<Vec<_>>(),
        "S": d.smatrix.iter().map(|row| row.iter().map(cyc).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "T": d.tmatrix.iter().map(cyc).collect::<Vec<_>>(),
        "fs_indicators": d.fs_indicators,
        "rank_S": d.rank_s,
        "rank_S4": d.rank_s4,
    })
}

pub fn fusion_json(f: &FusionTensor) -> Value {
    let mut entries = Vec::new();
    for p in 0..f.n {
        for q in 0..f.n {
            for r in 0..f.n {
                let v = f.get(p, q, r);
                if v != 0 {
                    entries.push(json!([p, q, r, v]));
                }
            }
        }
    }
    json!({ "rank": f.n, "entries": entries })
}

pub fn vacuum_json(v: &VacuumReport) -> Value {
    serde_json::to_value(v).expect("vacuum report serializes")
}

pub fn verification_json(r: &VerificationReport, objects: &ObjectStatus) -> Value {
    let mut v = serde_json::to_value(r).expect("verification report serializes");
    v["objects"] = match objects {
        ObjectStatus::Ran(o) => json!({"status": if o.passed() { "passed" } else { "failed" }, "checks": o}),
        ObjectStatus::SkippedFast => json!({"status": "skipped", "reason": "--fast"}),
        ObjectStatus::SkippedSize(n) => json!({"status": "skipped", "reason": format!("|X1||X2| = {n} exceeds the object-check limit")}),
    };
    v
}

/// Whether the explicit-object checks ran.
#[derive(Debug, Clone)]
pub enum ObjectStatus {
    Ran(ObjectChecks),
    SkippedFast,
    SkippedSize(usize),
}

impl ObjectStatus {
    pub fn passed(&self) -> bool {
        match self {
            ObjectStatus::Ran(o) => o.passed(),
            _ => true,
        }
    }
}

/// Representatives (m, g) with m^g = m of the classes under simultaneous
/// action, in lexicographic order.
pub fn class_pairs(x: &CrossedModule) -> Vec<(usize, usize)> {
    let (g1, n1, n2) = (x.x1(), x.x1().order(), x.x2().order());
    let mut seen = vec![false; n1 * n2];
    let mut reps = Vec::new();
    for m in 0..n2 {
        for g in 0..n1 {
            if x.act(m, g) != m || seen[m * n1 + g] {
                continue;
            }
            reps.push((m, g));
            for h in 0..n1 {
                seen[x.act(m, h) * n1 + g1.conjugate(g, h)] = true;
            }
        }
    }
    reps
}

fn table(header: &[String], rows: &[Vec<String>]) -> String {
    let cols = header.len();
    let mut width = vec![0; cols];
    for row in std::iter::once(header).chain(rows.iter().map(Vec::as_slice)) {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |row: &[String]| {
        let cells: Vec<String> = row.iter().zip(&width).map(|(c, &w)| format!("{c:>w$}")).collect();
        format!("  {}\n", cells.join("  ").trim_end())
    };
    let mut out = line(header);
    for r in rows {
        out.push_str(&line(r));
    }
    out
}

pub fn validation_text(name: &str, x: &CrossedModule, r: &ValidationReport) -> String {
    let mut out = format!("crossed module {name}: |X1| = {}, |X2| = {}\n", x.x1().order(), x.x2().order());
    if r.is_ok() {
        out.push_str("axioms: all hold\n");
    } else {
        for f in &r.failures {
            out.push_str(&format!("axiom failure: {f}\n"));
        }
    }
    out
}

pub fn exactness_text(e: &ExactnessData) -> String {
    format!(
        "|K| = {}, |I| = {}, |C| = {}, |X| = {}\nkernel {:?}\nimage  {:?}\n",
        e.kernel.len(),
        e.image.len(),
        e.cosets.len(),
        e.global_order,
        e.kernel,
        e.image
    )
}

pub fn irr_text(name: &str, t: &CharacterTheory) -> String {
    let dims = t.dims();
    let total: usize = dims.iter().map(|d| d * d).sum();
    let mut out = format!("{} irreducibles of {name}, sum of d^2 = {total}\n", t.len());
    let pairs = class_pairs(t.xmod());
    let mut header = vec!["#".to_string(), "orbit".into(), "stab".into(), "dim".into()];
    header.extend(pairs.iter().map(|(m, g)| format!("({m},{g})")));
    let rows: Vec<Vec<String>> = t
        .labels()
        .iter()
        .zip(t.irreducibles())
        .enumerate()
        .map(|(p, (l, psi))| {
            let mut row = vec![p.to_string(), l.orbit_rep.to_string(), l.stab_irr.to_string(), l.dim.to_string()];
            row.extend(pairs.iter().map(|&(m, g)| psi.value(m, g).to_string()));
            row
        })
        .collect();
    out.push_str(&table(&header, &rows));
    out
}

pub fn modular_text(d: &ModularData) -> String {
    let n = d.omega.len();
    let mut out = format!("|X| = {}, rank(S) = {} of {n}, rank(S^4) = {}\n", d.global_order, d.rank_s, d.rank_s4);
    let header: Vec<String> = ["#", "dim", "omega", "T", "nu"].iter().map(|s| s.to_string()).collect();
    let rows: Vec<Vec<String>> = (0..n)
        .map(|p| {
            vec![p.to_string(), d.dims[p].to_string(), d.omega[p].to_string(), d.tmatrix[p].to_string(), d.fs_indicators[p].to_string()]
        })
        .collect();
    out.push_str(&table(&header, &rows));
    out.push_str("S =\n");
    let header: Vec<String> = std::iter::once(String::new()).chain((0..n).map(|q| q.to_string())).collect();
    let rows: Vec<Vec<String>> = d
        .smatrix
        .iter()
        .enumerate()
        .map(|(p, row)| std::iter::once(p.to_string()).chain(row.iter().map(|s| s.to_string())).collect())
        .collect();
    out.push_str(&table(&header, &rows));
    out
}

pub fn fusion_text(f: &FusionTensor) -> String {
    let mut out = String::new();
    for p in 0..f.n {
        for q in p..f.n {
            let terms: Vec<String> = (0..f.n)
                .filter_map(|r| match f.get(p, q, r) {
                    0 => None,
                    1 => Some(format!("{r}")),
                    k => Some(format!("{k}*{r}")),
                })
                .collect();
            out.push_str(&format!("{p} x {q} = {}\n", terms.join(" + ")));
        }
    }
    out
}

pub fn vacuum_text(v: &VacuumReport) -> String {
    format!(
        "vacuum multiplicities {:?}\nvacuum dimension {}\ntransparent {:?}\nboundary bijective: {}\nrank(S) = {}\nverdict: {:?}\n",
        v.mu, v.vacuum_dim, v.transparent, v.boundary_bijective, v.s_rank, v.verdict
    )
}

pub fn verification_text(r: &VerificationReport, objects: &ObjectStatus) -> String {
    let mut out = String::new();
    for c in &r.checks {
        let mark = if c.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!("[{mark}] ({}) {}", c.id, c.name));
        if let Some(ce) = &c.counterexample {
            out.push_str(&format!(": {ce}"));
        }
        out.push('\n');
    }
    if let Some(s) = &r.second_orthogonality {
        out.push_str(&format!(
            "second orthogonality: {} failures in {}x{} comparisons with m^g = m; {} mismatches in {}x{} off that domain (recorded)\n",
            s.domain_failures, s.domain_pairs, s.checked_against, s.off_domain_mismatches, s.off_domain_pairs, s.checked_against
        ));
    }
    match objects {
        ObjectStatus::Ran(o) => {
            let mark = if o.passed() { "PASS" } else { "FAIL" };
            out.push_str(&format!("[{mark}] explicit objects (trivial, regular, vacuum)\n"));
            for f in &o.failures {
                out.push_str(&format!("  {f}\n"));
            }
            let braid: Vec<String> = o
                .braid_relation
                .iter()
                .map(|b| match b {
                    Some(true) => "holds".into(),
                    Some(false) => "fails".into(),
                    None => "not checked".into(),
                })
                .collect();
            out.push_str(&format!("  braid relation (recorded): {}\n", braid.join(", ")));
        }
        ObjectStatus::SkippedFast => out.push_str("[SKIP] explicit objects (--fast)\n"),
        ObjectStatus::SkippedSize(n) => out.push_str(&format!("[SKIP] explicit objects (|X1||X2| = {n})\n")),
    }
    out
}
