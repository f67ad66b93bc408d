use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use steiner_core::cohomology::{
    betti, boundary_dim_even_m, euler_formula, euler_ml, hodge_ml_vector, strata_codim,
    GoldenTable, ModuliParams,
};
use steiner_core::gitstab::{
    boundary_point_even_m, check_instability_certificate, CertificateOutcome, K2Analysis,
    MatrixFile, Verdict, Witness,
};
use steiner_core::selftest::{run_selftest, SelftestConfig};
use steiner_core::tangweights::{
    closed_form_n1_n2, solve_weights, tangent_counts, tangent_report, type1_weights, type2_weights,
    SignConvention,
};
use steiner_core::torusfix::{enum_type1, enum_type2, FixedPoint};

use crate::config::{Format, RunConfig};
use crate::{Command, Outcome};

pub fn run(command: Command, config: &RunConfig) -> Result<Outcome> {
    match command {
        Command::Betti { n, m } => cmd_betti(n, m.unwrap_or(n), config),
        Command::Euler { n, m } => cmd_euler(n, m.unwrap_or(n), config),
        Command::HodgeMl { l } => cmd_hodge_ml(l, config),
        Command::FixedPoints { n, m } => cmd_fixed_points(n, m.unwrap_or(n), config),
        Command::Weights { n, point } => cmd_weights(n, &point, config),
        Command::Stability { file } => cmd_stability(&file, config),
        Command::Degeneracy { file } => cmd_degeneracy(&file, config),
        Command::Strata {
            file: Some(file), ..
        } => cmd_strata_file(&file, config),
        Command::Strata {
            n: Some(n), m, j, ..
        } => cmd_strata_codim(n, m.unwrap_or(n), j, config),
        Command::Strata { .. } => bail!("strata needs a matrix file or --n"),
        Command::Selftest { golden } => cmd_selftest(golden.as_deref(), config),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".to_string(),
        other => other.to_string(),
    }
}

/// `key: value` lines for the top-level fields of an object.
fn table_of(v: &Value) -> String {
    let mut s = String::new();
    if let Value::Object(map) = v {
        let width = map.keys().map(String::len).max().unwrap_or(0);
        for (k, x) in map {
            let _ = writeln!(s, "{k:<width$}  {}", scalar_text(x));
        }
    }
    s
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

/// A header row of keys and one row of values.
fn csv_of(v: &Value) -> String {
    let Value::Object(map) = v else {
        return String::new();
    };
    let header: Vec<_> = map.keys().map(|k| csv_field(k)).collect();
    let row: Vec<_> = map.values().map(|x| csv_field(&scalar_text(x))).collect();
    format!("{}\n{}\n", header.join(","), row.join(","))
}

fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => format!("{v}\n"),
        Format::Table => table_of(v),
        Format::Csv => csv_of(v),
    }
}

fn cmd_betti(n: usize, m: usize, config: &RunConfig) -> Result<Outcome> {
    let params = ModuliParams::new(n, m)?;
    let conv = config.convention()?;
    let h = betti(&params, conv)?;
    let text = match config.format {
        Format::Json => {
            let v = json!({
                "n": n,
                "m": m,
                "dim": params.dim,
                "hodge": h.hodge(),
                "betti": h.betti_numbers(),
                "euler": h.euler(),
            });
            format!("{v}\n")
        }
        Format::Table => {
            let mut s = format!("n={n} m={m} dim={}\n", params.dim);
            for (p, x) in h.hodge().iter().enumerate() {
                let _ = writeln!(s, "b{:<4} {x}", 2 * p);
            }
            let _ = writeln!(s, "euler {}", h.euler());
            s
        }
        Format::Csv => {
            let mut s = "n,i,b_i\n".to_string();
            for (p, x) in h.hodge().iter().enumerate() {
                let _ = writeln!(s, "{n},{},{x}", 2 * p);
            }
            s
        }
    };
    Ok(Outcome::Done(text))
}

fn cmd_euler(n: usize, m: usize, config: &RunConfig) -> Result<Outcome> {
    let params = ModuliParams::new(n, m)?;
    let v = json!({ "n": n, "m": m, "euler": euler_formula(&params).to_string() });
    Ok(Outcome::Done(render(&v, config.format)))
}

fn cmd_hodge_ml(l: usize, config: &RunConfig) -> Result<Outcome> {
    let h = hodge_ml_vector(l)?;
    let text = match config.format {
        Format::Json => format!("{}\n", json!({ "l": l, "hodge": h, "euler": euler_ml(l)? })),
        Format::Table => {
            let mut s = String::new();
            for (p, x) in h.iter().enumerate() {
                let _ = writeln!(s, "h{p},{p:<3} {x}");
            }
            let _ = writeln!(s, "euler    {}", euler_ml(l)?);
            s
        }
        Format::Csv => {
            let mut s = "l,p,h_pp\n".to_string();
            for (p, x) in h.iter().enumerate() {
                let _ = writeln!(s, "{l},{p},{x}");
            }
            s
        }
    };
    Ok(Outcome::Done(text))
}

fn point_record(p: &FixedPoint, conv: SignConvention) -> Result<Map<String, Value>> {
    let (w, indices, weight) = match p {
        FixedPoint::Type1(q) => (type1_weights(q), json!({ "I": q.i, "J": q.j }), 1),
        FixedPoint::Type2(q) => (type2_weights(q), json!(q.i), euler_ml(q.l())?),
    };
    let c = tangent_counts(&w, conv)?;
    let mut rec = Map::new();
    rec.insert("type".into(), json!(p.kind()));
    rec.insert("indices".into(), indices);
    rec.insert("l".into(), json!(p.l()));
    rec.insert("count_weight".into(), json!(weight));
    rec.insert("a".into(), json!(w.a));
    rec.insert("b".into(), json!(w.b));
    rec.insert("n1".into(), json!(c.n1));
    rec.insert("n2".into(), json!(c.n2));
    rec.insert("n".into(), json!(c.n()));
    Ok(rec)
}

fn cmd_fixed_points(n: usize, m: usize, config: &RunConfig) -> Result<Outcome> {
    let conv = config.convention()?;
    let mut points: Vec<FixedPoint> = enum_type1(n, m)?.map(FixedPoint::from).collect();
    points.extend(enum_type2(n, m)?.map(FixedPoint::from));
    let records = points
        .par_iter()
        .map(|p| point_record(p, conv).map(|r| (p.to_string(), r)))
        .collect::<Result<Vec<_>>>()?;

    let type1 = points.iter().filter(|p| p.kind() == 1).count();
    let mut per_l: BTreeMap<usize, usize> = BTreeMap::new();
    for l in points.iter().filter_map(FixedPoint::l) {
        *per_l.entry(l).or_default() += 1;
    }
    let mut type2 = Map::new();
    for (l, count) in &per_l {
        type2.insert(format!("l={l}"), json!(count));
    }
    let summary = json!({ "type1": type1, "type2": type2 });

    let mut s = String::new();
    match config.format {
        Format::Json => {
            for (_, r) in &records {
                let _ = writeln!(s, "{}", Value::Object(r.clone()));
            }
            let _ = writeln!(s, "{summary}");
        }
        Format::Table | Format::Csv => {
            let sep = if config.format == Format::Csv {
                ","
            } else {
                "\t"
            };
            let _ = writeln!(
                s,
                "{}",
                ["point", "l", "count_weight", "n1", "n2", "n"].join(sep)
            );
            for (name, r) in &records {
                let name = if config.format == Format::Csv {
                    csv_field(name)
                } else {
                    name.clone()
                };
                let cols: Vec<String> = ["l", "count_weight", "n1", "n2", "n"]
                    .iter()
                    .map(|k| scalar_text(&r[*k]))
                    .collect();
                let _ = writeln!(s, "{name}{sep}{}", cols.join(sep));
            }
            if config.format == Format::Table {
                let _ = writeln!(s, "type1 {type1}");
                for (l, count) in &per_l {
                    let _ = writeln!(s, "type2 l={l} {count}");
                }
            }
        }
    }
    Ok(Outcome::Done(s))
}

fn cmd_weights(n: usize, point: &str, config: &RunConfig) -> Result<Outcome> {
    let p = FixedPoint::parse(n, point)?;
    let conv = config.convention()?;
    let w = solve_weights(&p)?;
    let r = tangent_report(&w, conv)?;
    let (cf1, cf2) = closed_form_n1_n2(&p);
    let v = json!({
        "point": p.to_string(),
        "convention": conv.to_string(),
        "c": w.c,
        "a": w.a,
        "b": w.b,
        "w2": r.w2,
        "w3": r.w3,
        "n1": r.n1,
        "n2": r.n2,
        "n": r.n,
        "zero_count": r.zero_count,
        "closed_form": { "n1": cf1, "n2": cf2 },
    });
    let text = match config.format {
        Format::Json => format!("{v}\n"),
        _ => render(&v, config.format),
    };
    Ok(Outcome::Done(text))
}

fn read_matrix(path: &Path) -> Result<MatrixFile> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(MatrixFile::from_json(&text)?)
}

fn witness_json(w: &Option<Witness>) -> Value {
    match w {
        None => Value::Null,
        Some(Witness::Point(p)) => json!({ "point": p.to_string() }),
        Some(Witness::Violation(v)) => json!({ "violation": v }),
    }
}

fn cmd_stability(path: &Path, config: &RunConfig) -> Result<Outcome> {
    let file = read_matrix(path)?;
    let a = &file.matrix;
    if a.k() != 2 {
        let violations = steiner_core::gitstab::validate(a);
        if !violations.is_empty() {
            let v = json!({ "status": "decided", "verdict": Verdict::Unstable, "violations": violations });
            return Ok(Outcome::Done(render(&v, config.format)));
        }
        let Some(cert) = &file.certificate else {
            let v = json!({ "status": "undecided", "reason": format!("k = {} needs a certificate", a.k()) });
            return Ok(Outcome::Undecided(render(&v, config.format)));
        };
        let outcome = check_instability_certificate(cert);
        let verdict = match outcome {
            CertificateOutcome::NonSemistable => "Unstable",
            CertificateOutcome::NonStable => "NotStable",
            CertificateOutcome::Invalid => {
                let v = json!({ "status": "undecided", "certificate": cert, "outcome": outcome.to_string() });
                return Ok(Outcome::Undecided(render(&v, config.format)));
            }
        };
        let v = json!({ "status": "decided", "verdict": verdict, "certificate": cert, "outcome": outcome.to_string() });
        return Ok(Outcome::Done(render(&v, config.format)));
    }
    let k = K2Analysis::compute(a)?;
    let strata = k.strata(a).ok().map_or(
        Value::Null,
        |s| json!({ "j_S": s.j_s, "j_tilde": s.j_tilde }),
    );
    let drop_locus: Vec<Value> = k
        .pencil
        .iter()
        .flat_map(|p| &p.drop_locus)
        .map(|e| json!({ "point": e.point.to_string(), "rank": e.rank }))
        .collect();
    let boundary = match (k.verdict.verdict, boundary_point_even_m(a)) {
        (Verdict::StrictlySemistable, Ok(p)) => json!([p.first.to_string(), p.second.to_string()]),
        _ => Value::Null,
    };
    let v = json!({
        "verdict": k.verdict.verdict,
        "s_max": k.verdict.s_max,
        "witness": witness_json(&k.verdict.witness),
        "violations": k.violations,
        "strata": strata,
        "degeneracy_dim": k.degeneracy_dim,
        "drop_locus": drop_locus,
        "boundary_pair": boundary,
    });
    let text = match config.format {
        Format::Json => format!("{v}\n"),
        _ => render(&v, config.format),
    };
    Ok(Outcome::Done(text))
}

fn cmd_degeneracy(path: &Path, config: &RunConfig) -> Result<Outcome> {
    let file = read_matrix(path)?;
    let d = steiner_core::gitstab::degeneracy_dim_k2(&file.matrix)?;
    Ok(Outcome::Done(render(
        &json!({ "degeneracy_dim": d }),
        config.format,
    )))
}

fn cmd_strata_file(path: &Path, config: &RunConfig) -> Result<Outcome> {
    let file = read_matrix(path)?;
    let s = steiner_core::gitstab::strata_indices(&file.matrix)?;
    Ok(Outcome::Done(render(
        &json!({ "j_S": s.j_s, "j_tilde": s.j_tilde }),
        config.format,
    )))
}

fn cmd_strata_codim(n: usize, m: usize, j: Option<usize>, config: &RunConfig) -> Result<Outcome> {
    let v = match j {
        Some(j) => json!({ "n": n, "m": m, "j": j, "codim": strata_codim(n, m, j)? }),
        None => {
            let j_m = (m + 3) / 2;
            let mut codims = Map::new();
            for j in 2..j_m {
                codims.insert(format!("S{j}"), json!(strata_codim(n, m, j)?));
            }
            let mut obj = Map::new();
            obj.insert("n".into(), json!(n));
            obj.insert("m".into(), json!(m));
            obj.insert("j_m".into(), json!(j_m));
            obj.extend(codims);
            if m.is_multiple_of(2) {
                obj.insert("boundary_dim".into(), json!(boundary_dim_even_m(n, m)?));
            }
            Value::Object(obj)
        }
    };
    Ok(Outcome::Done(render(&v, config.format)))
}

fn cmd_selftest(golden: Option<&Path>, config: &RunConfig) -> Result<Outcome> {
    let golden = match golden {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            GoldenTable::from_csv(&text)?
        }
        None => GoldenTable::embedded(),
    };
    let cfg = SelftestConfig {
        golden,
        convention: config.convention,
        ..SelftestConfig::default()
    };
    let report = run_selftest(&cfg);
    let text = match config.format {
        Format::Table => report.render(),
        Format::Json => {
            let checks: Vec<Value> = report
                .checks
                .iter()
                .map(|c| json!({ "criterion": c.criterion, "name": c.name, "passed": c.passed, "detail": c.detail }))
                .collect();
            let calibration = match &report.calibration {
                Ok(c) => json!(c),
                Err(e) => json!({ "error": e }),
            };
            let v = json!({
                "passed": report.passed(),
                "calibration": calibration,
                "checks": checks,
                "warnings": report.warnings,
            });
            format!("{v}\n")
        }
        Format::Csv => {
            let mut s = "criterion,check,passed\n".to_string();
            for c in &report.checks {
                let _ = writeln!(s, "{},{},{}", c.criterion, csv_field(&c.name), c.passed);
            }
            s
        }
    };
    Ok(if report.passed() {
        Outcome::Done(text)
    } else {
        Outcome::SelftestFailed(text)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn renderings() {
        let v = json!({ "n": 3, "name": "x,y", "none": null });
        assert_eq!(
            render(&v, Format::Json),
            "{\"n\":3,\"name\":\"x,y\",\"none\":null}\n"
        );
        assert_eq!(render(&v, Format::Csv), "n,name,none\n3,\"x,y\",-\n");
        assert_eq!(render(&v, Format::Table), "n     3\nname  x,y\nnone  -\n");
    }
}
