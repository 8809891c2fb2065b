use std::collections::BTreeSet;
use std::fmt::Write as _;

use bcinv_core::equivalence::{
    compare, fingerprint, invariant_pipeline_with, root_certificate, CompareMode, PipelineOptions,
    RootCertificate, SplittingFingerprint,
};
use bcinv_core::numberfield::{split_prime, NumberField, PrimeIdeal};
use bcinv_core::rayclass::{
    chain, trace_range_with_chain, ChainMode, OracleOptions, RayClassChain,
};
use bcinv_core::spectrum::{
    classify, closure, components_of_i2, count_by_label, PrimeUniverse, SpectrumPoint,
};
use bcinv_core::zeta::{
    euler_product, ideal_counts_skipping, zeta_equal_up_to_skipping, Exponent, ZetaOutcome,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::output::{CliError, Outcome};

/// Largest prime used when searching for residue-field obstructions.
const CERTIFICATE_PRIME_BOUND: u64 = 1000;

fn field_json(k: &NumberField) -> Value {
    json!({
        "label": k.label(),
        "poly": k.poly().to_string(),
        "degree": k.degree(),
        "disc_poly": k.disc_poly().to_string(),
        "irreducibility": k.irreducibility(),
    })
}

fn prime_json(q: &PrimeIdeal) -> Value {
    json!({
        "p": q.p,
        "e": q.ramification,
        "f": q.residue_degree,
        "generator": q.generator_string(),
        "norm": q.norm.to_string(),
    })
}

fn set_list(s: &BTreeSet<u64>) -> String {
    s.iter().map(u64::to_string).collect::<Vec<_>>().join(", ")
}

pub fn split(k: &NumberField, p: u64) -> Result<Outcome, CliError> {
    let s = split_prime(k, p)?;
    let json = json!({
        "field": k.label(),
        "p": s.p,
        "g": s.g,
        "pairs": s.pairs,
        "p_maximal": s.p_maximal,
        "primes": s.primes.iter().map(prime_json).collect::<Vec<_>>(),
    });
    let mut human = format!("{}: p = {} splits into g = {} primes\n", k.label(), p, s.g);
    for q in &s.primes {
        writeln!(
            human,
            "  {q}  e = {}  f = {}",
            q.ramification, q.residue_degree
        )
        .unwrap();
    }
    Ok(Outcome { json, human })
}

pub fn zeta(k: &NumberField, s: &str, bound: u64, digits: usize) -> Result<Outcome, CliError> {
    let s = Exponent::parse(s)?;
    let e = euler_product(k, &s, bound, digits)?;
    let json = json!({
        "field": k.label(),
        "s": e.s,
        "bound": e.bound,
        "digits": e.digits,
        "factors": e.factors,
        "value": e.value_string(),
    });
    let human = format!(
        "{}: Euler product at s = {} over {} prime ideals of norm <= {}: {}\n",
        k.label(),
        e.s,
        e.factors,
        e.bound,
        e.value_string()
    );
    Ok(Outcome { json, human })
}

pub fn coeffs(k: &NumberField, n_max: u64) -> Result<Outcome, CliError> {
    let c = ideal_counts_skipping(k, n_max)?;
    let values: Vec<Option<u64>> = (1..=n_max).map(|n| c.get(n)).collect();
    let json = json!({
        "field": k.label(),
        "n_max": n_max,
        "skipped": c.skipped(),
        "coefficients": values,
    });
    let mut human = format!("{}: a_n for n <= {}\n", k.label(), n_max);
    for (i, v) in values.iter().enumerate() {
        match v {
            Some(a) => writeln!(human, "  a_{} = {}", i + 1, a).unwrap(),
            None => writeln!(human, "  a_{} unknown", i + 1).unwrap(),
        }
    }
    if !c.is_complete() {
        writeln!(
            human,
            "  (Z[theta] not p-maximal at {{{}}})",
            set_list(c.skipped())
        )
        .unwrap();
    }
    Ok(Outcome { json, human })
}

pub struct EquivOptions {
    pub bound: u64,
    pub mode: CompareMode,
    pub coefficients: Option<u64>,
    pub certify: bool,
    pub dump_table: bool,
    pub inject_fault: bool,
}

fn certificate_json(c: &RootCertificate) -> Value {
    serde_json::to_value(c).expect("certificate serializes")
}

pub fn equiv(a: &NumberField, b: &NumberField, opts: &EquivOptions) -> Result<Outcome, CliError> {
    let pipeline = invariant_pipeline_with(
        a,
        b,
        opts.bound,
        PipelineOptions {
            inject_fault: opts.inject_fault,
        },
    )?;
    let fa = fingerprint(a, opts.bound)?;
    let fb = fingerprint(b, opts.bound)?;
    let g_verdict = compare(&fa, &fb, CompareMode::SplittingNumbersOnly)?;
    if g_verdict != pipeline.verdict {
        return Err(CliError::from(bcinv_core::Error::Internal(format!(
            "invariant pipeline says \"{}\" but compare says \"{}\"",
            pipeline.verdict, g_verdict
        ))));
    }
    let verdict = compare(&fa, &fb, opts.mode)?;

    let mut human = format!(
        "{} vs {} ({:?}): {}\n",
        a.label(),
        b.label(),
        opts.mode,
        verdict
    );
    writeln!(human, "  {}", verdict.caveat).unwrap();
    let mut json = json!({
        "field_a": field_json(a),
        "field_b": field_json(b),
        "verdict": verdict,
        "summary": verdict.to_string(),
        "pipeline": {
            "verdict": pipeline.verdict.to_string(),
            "consistent": pipeline.consistent,
        },
    });
    if opts.dump_table {
        let entry = |fp: &SplittingFingerprint, p: u64| {
            fp.entries
                .get(&p)
                .map(|e| json!({ "g": e.g, "pairs": e.pairs }))
        };
        json["table"] = pipeline
            .rows
            .iter()
            .map(|r| {
                json!({
                    "p": r.p,
                    "a": entry(&fa, r.p),
                    "b": entry(&fb, r.p),
                    "components_a": r.count_a,
                    "components_b": r.count_b,
                })
            })
            .collect();
        for r in &pipeline.rows {
            let show = |c: Option<usize>| c.map_or("skipped".to_string(), |c| c.to_string());
            writeln!(
                human,
                "  p = {:>5}: g = {} vs {}",
                r.p,
                show(r.count_a),
                show(r.count_b)
            )
            .unwrap();
        }
    }
    if let Some(n) = opts.coefficients {
        let z = zeta_equal_up_to_skipping(a, b, n)?;
        let outcome = match z.outcome {
            ZetaOutcome::Agree => json!({ "result": "agree" }),
            ZetaOutcome::FirstDisagreement { n, a, b } => {
                json!({ "result": "disagree", "n": n, "a": a, "b": b })
            }
        };
        match z.outcome {
            ZetaOutcome::Agree => {
                writeln!(human, "  a_n agree for n <= {n} ({} compared)", z.compared)
            }
            ZetaOutcome::FirstDisagreement { n, a, b } => {
                writeln!(human, "  a_{n} differ: {a} vs {b}")
            }
        }
        .unwrap();
        json["coefficients"] = json!({
            "bound": z.bound,
            "outcome": outcome,
            "compared": z.compared,
            "skipped": z.skipped,
            "caveat": z.caveat(),
        });
    }
    if opts.certify {
        let ab = root_certificate(b, a.poly(), CERTIFICATE_PRIME_BOUND)?;
        let ba = root_certificate(a, b.poly(), CERTIFICATE_PRIME_BOUND)?;
        for (what, c) in [
            (format!("root of {} in {}", a.poly(), b.label()), &ab),
            (format!("root of {} in {}", b.poly(), a.label()), &ba),
        ] {
            let status = match c {
                RootCertificate::NoRoot { .. } => "none (certified)".to_string(),
                RootCertificate::Root { root } => root.clone(),
                RootCertificate::Inconclusive { reason } => format!("inconclusive: {reason}"),
            };
            writeln!(human, "  {what}: {status}").unwrap();
        }
        json["certificates"] = json!({
            "a_in_b": certificate_json(&ab),
            "b_in_a": certificate_json(&ba),
        });
    }
    Ok(Outcome { json, human })
}

fn chain_json(c: &RayClassChain) -> Value {
    json!({
        "mode": c.mode,
        "h": c.levels.iter().map(|l| l.h).collect::<Vec<_>>(),
        "local_unit_orders": c.levels.iter().map(|l| l.local_unit_order.to_string()).collect::<Vec<_>>(),
        "ratios": c.ratios.iter().map(|r| json!({
            "m": r.m,
            "value": r.value.map(|v| v.to_string()),
            "expected": r.expected.to_string(),
            "asserted": r.asserted,
        })).collect::<Vec<_>>(),
        "growth_certified": c.growth_certified,
        "enumeration_bound": c.enumeration_bound,
        "discrepancies": c.discrepancies,
    })
}

pub fn invariant(
    k: &NumberField,
    p: u64,
    index: usize,
    levels: u32,
    mode: ChainMode,
) -> Result<Outcome, CliError> {
    let s = split_prime(k, p)?;
    let q = s.primes.get(index).ok_or_else(|| {
        CliError::input(
            "invalid_argument",
            format!(
                "prime index {index} out of range: {p} has {} primes above it",
                s.g
            ),
        )
    })?;
    let c = chain(k, q, levels, mode, &OracleOptions::default())?;
    let d = trace_range_with_chain(q, c.clone())?;
    let mut json = json!({
        "field": k.label(),
        "prime": d.prime,
        "generator": q.generator_string(),
        "label": d.label,
        "certified": d.certified,
    });
    let cj = chain_json(&c);
    for (key, v) in cj.as_object().expect("object") {
        json[key] = v.clone();
    }
    let mut human = format!(
        "{}: prime {} (e = {}, f = {}), {:?} mode\n",
        k.label(),
        q,
        q.ramification,
        q.residue_degree,
        mode
    );
    for l in &c.levels {
        match l.h {
            Some(h) => writeln!(human, "  h_{} = {}", l.m, h),
            None => writeln!(human, "  h_{} not computed", l.m),
        }
        .unwrap();
    }
    for r in &c.ratios {
        let v = r
            .value
            .map_or("non-integral".to_string(), |v| v.to_string());
        let tag = if r.asserted { " (asserted)" } else { "" };
        writeln!(
            human,
            "  h_{}/h_{} = {} (p^f = {}){}",
            r.m + 1,
            r.m,
            v,
            r.expected,
            tag
        )
        .unwrap();
    }
    for line in &c.discrepancies {
        writeln!(human, "  discrepancy: {line}").unwrap();
    }
    writeln!(human, "  label {}, certified = {}", d.label, d.certified).unwrap();
    Ok(Outcome { json, human })
}

/// Subset syntax: `all`, `none`, `0,2,5` (prime indices) or `c:1,3` (complement).
pub fn parse_subset(u: &PrimeUniverse, text: &str, fiber: &str) -> Result<SpectrumPoint, CliError> {
    let text = text.trim();
    let indices = |s: &str| -> Result<BTreeSet<usize>, CliError> {
        s.split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| CliError::input("parse", format!("bad prime index {t:?}")))
            })
            .collect()
    };
    let point = match text {
        "all" => u.full(fiber),
        "none" => u.empty(fiber),
        _ => match text.strip_prefix("c:") {
            Some(rest) => {
                let out = indices(rest)?;
                if let Some(&i) = out.iter().next_back().filter(|&&i| i >= u.len()) {
                    return Err(CliError::input(
                        "invalid_argument",
                        format!("prime index {i} outside a universe of {} primes", u.len()),
                    ));
                }
                u.point((0..u.len()).filter(|i| !out.contains(i)), fiber)?
            }
            None => u.point(indices(text)?, fiber)?,
        },
    };
    Ok(point)
}

pub fn spectrum(k: &NumberField, bound: u64, subset: Option<&str>) -> Result<Outcome, CliError> {
    let u = PrimeUniverse::by_norm_skipping(k, bound)?;
    let comps = components_of_i2(&u);
    let counts = count_by_label(&comps);
    let mut json = json!({
        "field": k.label(),
        "bound": bound,
        "skipped": u.skipped(),
        "components": comps,
        "counts_by_label": counts,
    });
    let mut human = format!(
        "{}: {} components of I_2 over primes of norm <= {}\n",
        k.label(),
        comps.len(),
        bound
    );
    for c in &comps {
        writeln!(
            human,
            "  [{}] ({}, {})  norm {}  {}",
            c.index, c.prime.p, c.generator, c.norm, c.label
        )
        .unwrap();
    }
    if !u.skipped().is_empty() {
        writeln!(
            human,
            "  not p-maximal, omitted: {{{}}}",
            set_list(u.skipped())
        )
        .unwrap();
    }
    if let Some(text) = subset {
        let point = parse_subset(&u, text, "gamma")?;
        let class = classify(&point);
        let above = closure(&u, &point)?;
        writeln!(
            human,
            "  {point}: {class:?}; closure has {} points",
            above.len()
        )
        .unwrap();
        json["classify"] = json!({
            "point": point.to_string(),
            "set": point.set,
            "classification": class,
            "closure": above.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
        });
    }
    Ok(Outcome { json, human })
}

fn section<T>(r: Result<T, CliError>, f: impl FnOnce(T) -> Value) -> (Value, bool) {
    match r {
        Ok(v) => (f(v), true),
        Err(e) => (json!({ "error": e.to_json() }), false),
    }
}

fn fingerprint_json(fp: &SplittingFingerprint) -> Value {
    json!({
        "bound": fp.bound,
        "entries": fp.entries.iter().map(|(p, e)| json!({ "p": p, "g": e.g, "pairs": e.pairs })).collect::<Vec<_>>(),
        "skipped": fp.skipped,
    })
}

/// Oracle chain for `q`, falling back to the closed form when the oracle fails.
fn report_chain(k: &NumberField, q: &PrimeIdeal, levels: u32) -> Value {
    let oracle = chain(k, q, levels, ChainMode::Oracle, &OracleOptions::default());
    let (c, fallback) = match oracle {
        Ok(c) => (Ok(c), None),
        Err(e) => (
            chain(k, q, levels, ChainMode::Formula, &OracleOptions::default()),
            Some(CliError::from(e)),
        ),
    };
    let mut v = match c {
        Ok(c) => {
            let d = trace_range_with_chain(q, c.clone());
            let mut v = chain_json(&c);
            match d {
                Ok(d) => {
                    v["label"] = json!(d.label);
                    v["certified"] = json!(d.certified);
                }
                Err(e) => v["label_error"] = CliError::from(e).to_json(),
            }
            v
        }
        Err(e) => json!({ "error": CliError::from(e).to_json() }),
    };
    v["prime"] = prime_json(q);
    if let Some(e) = fallback {
        v["oracle_error"] = e.to_json();
    }
    v
}

pub struct ReportOptions {
    pub bound: u64,
    pub levels: u32,
    pub s: String,
    pub digits: usize,
}

pub fn report(k: &NumberField, opts: &ReportOptions) -> Result<Outcome, CliError> {
    let mut human = format!("report for {} = Q[x]/({})\n", k.label(), k.poly());
    let mut errors = 0;

    let (fp, ok) = section(fingerprint(k, opts.bound).map_err(CliError::from), |f| {
        fingerprint_json(&f)
    });
    errors += usize::from(!ok);
    if !ok {
        writeln!(
            human,
            "  fingerprint: {}",
            fp["error"]["message"].as_str().unwrap_or("")
        )
        .unwrap();
    } else {
        let gs: Vec<String> = fp["entries"]
            .as_array()
            .expect("entries")
            .iter()
            .map(|e| format!("{}:{}", e["p"], e["g"]))
            .collect();
        writeln!(human, "  g_K(p), p <= {}: {}", opts.bound, gs.join(" ")).unwrap();
    }

    let universe = PrimeUniverse::by_norm_skipping(k, opts.bound).map_err(CliError::from);
    let (components, chains) = match &universe {
        Ok(u) => {
            let comps = components_of_i2(u);
            let counts = count_by_label(&comps);
            for (label, n) in &counts {
                writeln!(human, "  {n} component(s) labelled {label}").unwrap();
            }
            let components = json!({
                "bound": opts.bound,
                "skipped": u.skipped(),
                "list": comps,
                "counts_by_label": counts,
            });
            let chains: Vec<Value> = u
                .primes()
                .par_iter()
                .map(|q| report_chain(k, q, opts.levels))
                .collect();
            for c in &chains {
                errors += usize::from(c.get("error").is_some());
                let hs = c["h"].as_array().map(|h| {
                    h.iter()
                        .map(|x| {
                            if x.is_null() {
                                "?".into()
                            } else {
                                x.to_string()
                            }
                        })
                        .collect::<Vec<String>>()
                        .join(", ")
                });
                write!(
                    human,
                    "  chain at ({}, {}): h = [{}] {}",
                    c["prime"]["p"],
                    c["prime"]["generator"].as_str().unwrap_or(""),
                    hs.unwrap_or_default(),
                    c["mode"].as_str().unwrap_or("error")
                )
                .unwrap();
                match c.get("oracle_error") {
                    Some(e) => {
                        writeln!(human, " (oracle: {})", e["message"].as_str().unwrap_or(""))
                    }
                    None => writeln!(human),
                }
                .unwrap();
            }
            (components, Value::Array(chains))
        }
        Err(e) => {
            errors += 2;
            writeln!(human, "  components and chains: {e}").unwrap();
            (
                json!({ "error": e.to_json() }),
                json!({ "error": e.to_json() }),
            )
        }
    };

    let z = Exponent::parse(&opts.s)
        .and_then(|s| euler_product(k, &s, opts.bound, opts.digits))
        .map_err(CliError::from);
    let (zeta, ok) = section(
        z,
        |e| json!({ "s": e.s, "bound": e.bound, "digits": e.digits, "factors": e.factors, "value": e.value_string() }),
    );
    errors += usize::from(!ok);
    if ok {
        writeln!(
            human,
            "  Euler product at s = {}: {}",
            opts.s,
            zeta["value"].as_str().unwrap_or("")
        )
        .unwrap();
    } else {
        writeln!(
            human,
            "  zeta: {}",
            zeta["error"]["message"].as_str().unwrap_or("")
        )
        .unwrap();
    }
    if errors > 0 {
        writeln!(human, "  {errors} section(s) reported errors").unwrap();
    }

    let json = json!({
        "field": field_json(k),
        "fingerprint": fp,
        "components": components,
        "chains": chains,
        "zeta": zeta,
        "section_errors": errors,
    });
    Ok(Outcome { json, human })
}
