//! Runs a validated job and assembles its result document.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use boij_core::cone::{
    generators, greedy_steps, membership, short_complex_membership, verify_verdict, Decomposition,
    Functional, GreedyFailure, GreedyFailureReason, MembershipVerdict,
};
use boij_core::hilbert::{hilb_from_betti, multiplicity_bounds, regularity_from_betti, HilbertSeries};
use boij_core::io::{
    parse_betti_table, parse_monomial_module, rational_string, table_entries, window_string,
};
use boij_core::koszul::{
    dim_codim, koszul_betti_with, monomial_hilbert, multiplicity_with, KoszulOptions, MonomialModule,
};
use boij_core::pure::{enumerate_degree_sequences, herzog_kuhl, is_pure};
use boij_core::sheaf::{
    en_sequence, euler_characteristic, frobenius_pushforward, lim_ulrich_check, line_bundle_table,
    product_p1_table, u_trivial_check, ulrich_test, CohomTable, DecaySummary, TableSequence, UlrichReport,
};
use boij_core::tables::{BettiTable, CodimensionSequence, DegreeSequence, Rational, Region};
use num_bigint::BigUint;
use serde_json::{json, Map, Value};

use crate::config::{Command, Family, Resolved, UScale};

pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable overriding the Koszul oracle's degree cap.
pub const DEGREE_CAP_ENV: &str = "BOIJ_DEGREE_CAP";

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub document: Value,
    pub warnings: Vec<String>,
}

impl Outcome {
    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn render(&self) -> String {
        let mut text = serde_json::to_string_pretty(&canonical(&self.document)).expect("documents serialize");
        text.push('\n');
        text
    }
}

/// Rebuilds every object with its keys in sorted order, whatever map
/// implementation serde_json was compiled with.
pub fn canonical(value: &Value) -> Value {
    match value {
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            let mut out = Map::new();
            for k in keys {
                out.insert(k.clone(), canonical(&map[k]));
            }
            Value::Object(out)
        }
        Value::Array(items) => Value::Array(items.iter().map(canonical).collect()),
        other => other.clone(),
    }
}

pub fn koszul_options() -> Result<KoszulOptions> {
    let mut options = KoszulOptions::default();
    if let Ok(text) = std::env::var(DEGREE_CAP_ENV) {
        options.degree_cap = text
            .trim()
            .parse()
            .map_err(|_| anyhow!("{DEGREE_CAP_ENV}=`{text}` is not a nonnegative integer"))?;
    }
    Ok(options)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_table(path: &Path, warnings: &mut Vec<String>) -> Result<BettiTable> {
    let parsed = parse_betti_table(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    warnings.extend(parsed.warnings.into_iter().map(|w| format!("{}: {w}", path.display())));
    Ok(parsed.value)
}

fn load_module(path: &Path, warnings: &mut Vec<String>) -> Result<MonomialModule> {
    let parsed =
        parse_monomial_module(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    warnings.extend(parsed.warnings.into_iter().map(|w| format!("{}: {w}", path.display())));
    Ok(parsed.value)
}

fn is_module_document(text: &str) -> bool {
    text.trim_start().starts_with('{')
        && serde_json::from_str::<Value>(text).map(|v| v.get("summands").is_some()).unwrap_or(false)
}

pub fn q(r: &Rational) -> Value {
    Value::String(rational_string(r))
}

fn big(n: &BigUint) -> Value {
    Value::String(n.to_string())
}

fn degrees_doc(t: &DegreeSequence) -> Value {
    json!({ "start": t.start(), "degrees": t.degrees() })
}

fn table_doc(table: &BettiTable) -> Value {
    serde_json::to_value(table_entries(table)).expect("entries serialize")
}

fn terms_doc(d: &Decomposition) -> Value {
    Value::Array(
        d.terms
            .iter()
            .map(|(c, t)| json!({ "coefficient": q(c), "start": t.start(), "degrees": t.degrees() }))
            .collect(),
    )
}

fn functional_doc(f: &Functional) -> Value {
    Value::Array(f.iter().map(|(&(i, j), v)| json!({ "i": i, "j": j, "value": q(v) })).collect())
}

fn verdict_doc(
    beta: &BettiTable,
    verdict: &MembershipVerdict,
    verified: bool,
    generator_count: usize,
) -> Value {
    json!({
        "inside": verdict.is_inside(),
        "generators": generator_count,
        "witness": verdict.witness().map(terms_doc),
        "certificate": verdict.certificate().map(functional_doc),
        "certificate_value": verdict.certificate().map(|f| q(&beta.pair(f))),
        "verified": verified,
    })
}

fn greedy_failure_doc(failure: &GreedyFailure) -> Value {
    let reason = match &failure.reason {
        GreedyFailureReason::NegativeEntry((i, j)) => json!({ "kind": "negative_entry", "i": i, "j": j }),
        GreedyFailureReason::MissingPosition(i) => json!({ "kind": "missing_position", "i": i }),
        GreedyFailureReason::NotIncreasing { start, degrees } => {
            json!({ "kind": "not_increasing", "start": start, "degrees": degrees })
        }
        GreedyFailureReason::Stalled => json!({ "kind": "stalled" }),
    };
    json!({
        "reason": reason,
        "partial": terms_doc(&failure.partial),
        "remainder": table_doc(&failure.remainder),
    })
}

fn hilbert_doc(series: &HilbertSeries) -> Value {
    json!({
        "numerator": series
            .numerator()
            .terms()
            .map(|(k, c)| json!({ "exponent": k, "coefficient": q(c) }))
            .collect::<Vec<_>>(),
        "pole_order": series.pole_order(),
        "dim": series.dim(),
        "multiplicity": q(&series.multiplicity()),
    })
}

fn ulrich_doc(report: &UlrichReport) -> Value {
    json!({
        "window": window_string(&report.window),
        "vanishing": report.vanishing,
        "ulrich": report.ulrich,
        "rank": big(&report.rank),
        "violations": report
            .violations
            .iter()
            .map(|((i, t), v)| json!({ "i": i, "t": t, "value": big(v) }))
            .collect::<Vec<_>>(),
    })
}

fn decay_doc(decay: &DecaySummary) -> Value {
    json!({
        "pass": decay.pass,
        "max_final": q(&decay.max_final),
        "max_final_at": decay.max_final_at.map(|(i, t)| json!({ "i": i, "t": t })),
        "tails_non_increasing": decay.tails_non_increasing,
        "tracks": decay
            .tracks
            .iter()
            .map(|track| json!({
                "i": track.i,
                "t": track.t,
                "final": q(track.last()),
                "tail_non_increasing": track.tail_non_increasing,
                "ratios": track.ratios.iter().map(|(n, r)| json!({ "n": n, "ratio": q(r) })).collect::<Vec<_>>(),
            }))
            .collect::<Vec<_>>(),
    })
}

fn single_table(job: &Resolved) -> Result<CohomTable> {
    let m = job.m.expect("validated");
    let c = &job.config;
    let base = match job.family.as_ref().expect("validated") {
        Family::Line(a) => line_bundle_table(m, *a)?,
        Family::Product(twists) => product_p1_table(twists)?,
        Family::En => return Ok(en_sequence(m, c.p.expect("validated"))?.table(c.n.expect("validated"))),
    };
    Ok(match (c.p, c.n) {
        (Some(p), Some(n)) => frobenius_pushforward(&base, p, n)?,
        _ => base,
    })
}

fn sequence(job: &Resolved) -> Result<TableSequence> {
    let m = job.m.expect("validated");
    Ok(match job.family.as_ref().expect("validated") {
        Family::En => en_sequence(m, job.config.p.expect("validated"))?,
        Family::Line(a) => TableSequence::constant(line_bundle_table(m, *a)?, 1),
        Family::Product(twists) => TableSequence::constant(product_p1_table(twists)?, 1),
    })
}

fn u_normalized(seq: &TableSequence, u: UScale) -> TableSequence {
    let base = seq.clone();
    seq.with_scale(move |n| match u {
        UScale::Const(k) => BigUint::from(k),
        UScale::Power(k) => BigUint::from(n).pow(k),
        UScale::ScalePower(k) => base.scale(n).pow(k),
    })
}

/// Runs one job. Verdicts of any kind are results; only bad input or a
/// violated internal invariant is an error.
pub fn execute(job: &Resolved) -> Result<Outcome> {
    let mut warnings = Vec::new();
    let input = job.config.inputs.first().map(|p| p.as_path());
    let mut table_out: Option<Value> = None;

    let result = match job.command {
        Command::Pure => {
            if let Some(path) = input {
                let beta = load_table(path, &mut warnings)?;
                match is_pure(&beta) {
                    Some((b, t)) => json!({ "pure": true, "scale": q(&b), "sequence": degrees_doc(&t) }),
                    None => json!({ "pure": false, "scale": null, "sequence": null }),
                }
            } else if let Some(degrees) = &job.config.degrees {
                let t = DegreeSequence::new(job.config.start.unwrap_or(0), degrees.clone())?;
                let diagram = herzog_kuhl(&t);
                table_out = Some(table_doc(&diagram.table));
                json!({ "sequence": degrees_doc(&t), "normalization": q(&diagram.normalization) })
            } else {
                let window = job.window.expect("validated");
                let codim = job.codim.as_ref().expect("validated");
                let found = enumerate_degree_sequences(&Region::from(window), codim);
                json!({ "count": found.len(), "sequences": found.iter().map(degrees_doc).collect::<Vec<_>>() })
            }
        }
        Command::Decompose => {
            let beta = load_table(input.expect("validated"), &mut warnings)?;
            let codim = job.codim.as_ref().expect("validated");
            let greedy = codim.as_constant().map(|c| greedy_steps(&beta, c));
            match greedy {
                Some(Ok(steps)) => json!({
                    "method": "greedy",
                    "inside": true,
                    "terms": steps
                        .iter()
                        .map(|s| json!({
                            "coefficient": q(&s.coefficient),
                            "start": s.degrees.start(),
                            "degrees": s.degrees.degrees(),
                            "binding": { "i": s.binding.0, "j": s.binding.1 },
                        }))
                        .collect::<Vec<_>>(),
                    "greedy_failure": null,
                    "certificate": null,
                }),
                other => {
                    let verdict = membership(&beta, codim);
                    if !verify_verdict(&beta, codim, &verdict) {
                        bail!("internal error: linear program returned an unverifiable verdict");
                    }
                    json!({
                        "method": "lp",
                        "inside": verdict.is_inside(),
                        "terms": verdict.witness().map(terms_doc),
                        "greedy_failure": other.and_then(|g| g.err()).as_ref().map(greedy_failure_doc),
                        "certificate": verdict.certificate().map(functional_doc),
                    })
                }
            }
        }
        Command::Member => {
            let beta = load_table(input.expect("validated"), &mut warnings)?;
            let codim = job.codim.as_ref().expect("validated");
            let verdict = membership(&beta, codim);
            let verified = verify_verdict(&beta, codim, &verdict);
            verdict_doc(&beta, &verdict, verified, generators(&beta, codim).len())
        }
        Command::Short => {
            let beta = load_table(input.expect("validated"), &mut warnings)?;
            let d = job.config.dim.expect("validated");
            let verdict = short_complex_membership(&beta, d)?;
            let codim = CodimensionSequence::short(d);
            let verified = verify_verdict(&beta, &codim, &verdict);
            verdict_doc(&beta, &verdict, verified, generators(&beta, &codim).len())
        }
        Command::Bounds => {
            let beta = load_table(input.expect("validated"), &mut warnings)?;
            let report = multiplicity_bounds(&beta, &job.er)?;
            json!({
                "codim": report.codim,
                "lower": q(&report.lower),
                "e": q(&report.e),
                "upper": q(&report.upper),
                "pure": report.pure,
                "holds": report.holds(),
                "regularity": regularity_from_betti(&beta).ok(),
            })
        }
        Command::Hilb => {
            let path = input.expect("validated");
            let text = read(path)?;
            if is_module_document(&text) {
                let module = load_module(path, &mut warnings)?;
                let mut doc = hilbert_doc(&monomial_hilbert(&module));
                doc["source"] = json!("module");
                doc
            } else {
                let d = job.config.dim.ok_or_else(|| {
                    anyhow!("hilb: a Betti table input needs --dim\nusage: boij {}", Command::Hilb.usage())
                })?;
                let beta = load_table(path, &mut warnings)?;
                let mut doc = hilbert_doc(&hilb_from_betti(&beta, &HilbertSeries::polynomial_ring(d)));
                doc["source"] = json!("table");
                doc
            }
        }
        Command::Koszul => {
            let module = load_module(input.expect("validated"), &mut warnings)?;
            let beta = koszul_betti_with(&module, &koszul_options()?)?;
            table_out = Some(table_doc(&beta));
            json!({
                "entries": beta.len(),
                "projective_dimension": beta.positions().iter().next_back(),
                "regularity": regularity_from_betti(&beta).ok(),
            })
        }
        Command::Dims => {
            let module = load_module(input.expect("validated"), &mut warnings)?;
            let dc = dim_codim(&module)?;
            json!({ "d": module.d(), "dim": dc.dim, "codim": dc.codim })
        }
        Command::Mult => {
            let module = load_module(input.expect("validated"), &mut warnings)?;
            let report = multiplicity_with(&module, &koszul_options()?)?;
            json!({
                "e": q(&report.e),
                "dim": report.dim,
                "euler_characteristic": report.euler.as_ref().map(q),
                "summands": report
                    .summands
                    .iter()
                    .map(|s| json!({ "dim": s.dim, "chi": q(&s.chi) }))
                    .collect::<Vec<_>>(),
            })
        }
        Command::Cohom => {
            let table = single_table(job)?;
            let window = job.window.expect("defaulted");
            let entries: Vec<Value> = table
                .materialize(&window)
                .iter()
                .filter(|(_, v)| v.bits() > 0)
                .map(|((i, t), v)| json!({ "i": i, "t": t, "value": big(v) }))
                .collect();
            let euler: Vec<Value> = (window.j_min..=window.j_max)
                .map(|t| json!({ "t": t, "chi": euler_characteristic(&table, t).to_string() }))
                .collect();
            let ulrich = match ulrich_test(&table, &window) {
                Ok(report) => ulrich_doc(&report),
                Err(e) => {
                    warnings.push(format!("Ulrich test skipped: {e}"));
                    Value::Null
                }
            };
            json!({ "label": table.label(), "entries": entries, "euler": euler, "ulrich": ulrich })
        }
        Command::Limulrich => {
            let seq = sequence(job)?;
            let window = job.window.expect("validated");
            let report =
                lim_ulrich_check(&seq, &window, job.config.nmax.expect("validated"), &job.threshold)?;
            json!({
                "pass": report.pass,
                "window": window_string(&report.window),
                "n_min": report.n_min,
                "n_max": report.n_max,
                "threshold": q(&report.threshold),
                "sections_nonzero": report.sections_nonzero,
                "sections_zero_at": report.sections_zero_at,
                "t0": report.t0,
                "t1": report.t1,
                "decay": decay_doc(&report.decay),
            })
        }
        Command::Utrivial => {
            let seq = u_normalized(&sequence(job)?, job.u.expect("validated"));
            let window = job.window.expect("validated");
            let report = u_trivial_check(&seq, &window, job.config.nmax.expect("validated"), &job.threshold)?;
            json!({
                "pass": report.pass,
                "window": window_string(&report.window),
                "n_max": report.n_max,
                "threshold": q(&report.threshold),
                "decay": decay_doc(&report.decay),
            })
        }
    };

    let mut document = json!({
        "schema_version": SCHEMA_VERSION,
        "command": job.command.name(),
        "config": job.echo(),
        "result": result,
    });
    if let Some(table) = table_out {
        document["table"] = table;
    }
    Ok(Outcome { document, warnings })
}
