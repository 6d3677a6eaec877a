//! The subcommands.

use std::path::Path;

use lrb::algebra::{primitive_idempotents, tsetlin_nu_family, AlgebraElement};
use lrb::derangement::{derangement_routes, mahajan_profile, stanley_check};
use lrb::descent::{
    beta_and_h, descent_walk, phi_check, top_to_random_idempotents, CoxeterComplexSn,
    GroupAlgebraElement, SymmetricGroup,
};
use lrb::exact::to_f64;
use lrb::poset::FinitePoset;
use lrb::semigroup::{ElementId, Level, Semigroup};
use lrb::spectral::{
    sorted_chambers, spectrum, transition_matrix, verify_diagonalizable, WeightVector,
};
use lrb::support::{derive_support, SupportStructure};
use lrb::walks::{convergence_report, simulate, stationary_exact};
use serde_json::{json, Map, Value};

use crate::cli::{
    Command, ConvergeArgs, DerangementArgs, DescentArgs, IdempotentArgs, RunConfig, SimulateArgs,
    SpecArgs, SpectrumArgs, StationaryArgs, StationaryMethod, WalkArgs,
};
use crate::error::CliError;
use crate::input::{
    load_semigroup, parse_weights, read_graph, read_json, PosetInput, SemigroupSource,
};
use crate::output::{csv_table, float, pretty, rational, Artifact, Format, Outcome};
use crate::sampling::sample_parallel;
use crate::selftest;

pub fn dispatch(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match &cfg.command {
        Command::Build(a) => build(cfg, a),
        Command::Spectrum(a) => spectrum_cmd(cfg, a),
        Command::Idempotents(a) => idempotents(cfg, a),
        Command::Simulate(a) => simulate_cmd(cfg, a),
        Command::Stationary(a) => stationary(cfg, a),
        Command::Converge(a) => converge(cfg, a),
        Command::Derangement(a) => derangement(a),
        Command::Descent(a) => descent(cfg, a),
        Command::Selftest(a) => selftest::run(&a.criteria, cfg.threads),
    }
}

fn falsified(message: impl Into<String>, report: &Value) -> CliError {
    CliError::Falsified {
        message: message.into(),
        report: Some(pretty(report)),
    }
}

struct Walk {
    source: SemigroupSource,
    s: Semigroup,
    l: SupportStructure,
    w: WeightVector,
}

fn load_walk(cfg: &RunConfig, a: &WalkArgs) -> Result<Walk, CliError> {
    let (source, s) = load_semigroup(&a.spec.spec, &cfg.guards.build)?;
    let l = derive_support(&s)?;
    let w = a.weights.source().load(&s)?;
    Ok(Walk { source, s, l, w })
}

fn chamber_arg(
    s: &Semigroup,
    l: &SupportStructure,
    key: Option<&str>,
) -> Result<ElementId, CliError> {
    match key {
        None => Ok(sorted_chambers(s, l)[0]),
        Some(k) => {
            let c = s.id_of(k)?;
            if l.supp(c) != l.top() {
                return Err(CliError::parse(format!("`{k}` is not a chamber")));
            }
            Ok(c)
        }
    }
}

fn build(cfg: &RunConfig, a: &SpecArgs) -> Result<Outcome, CliError> {
    let (_, s) = load_semigroup(&a.spec, &cfg.guards.build)?;
    let report = s.verify_lrb();
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            let level = match c.level {
                Level::Exhaustive => json!("exhaustive"),
                Level::Sampled(k) => json!(format!("sampled {k}")),
            };
            let witness = c
                .witness
                .as_ref()
                .map(|w| w.iter().map(|&x| s.key(x).to_string()).collect::<Vec<_>>());
            json!({"axiom": c.axiom.name(), "level": level, "witness": witness})
        })
        .collect();
    if !report.passed() {
        let v = json!({"label": s.label(), "axioms": checks});
        return Err(falsified(
            format!("{} is not a left-regular band", s.label()),
            &v,
        ));
    }
    let l = derive_support(&s)?;
    l.check_invariants(&s)?;
    let natural = s.natural_support().map(|_| l.check_natural(&s).is_ok());
    let support = json!({
        "flats": l.flats().map(|f| l.flat_key(f)).collect::<Vec<_>>(),
        "leq": l.leq_matrix(),
        "supp": l.supp_map(),
        "chambers": l.chambers(),
    });
    let summary = json!({
        "label": s.label(),
        "elements": s.len(),
        "tabulated": s.is_tabulated(),
        "flats": l.len(),
        "chambers": l.chambers().len(),
        "axioms": checks,
        "natural_lattice": natural,
    });
    let mut out = Outcome::new(pretty(&summary)).with(Artifact::json("support.json", &support));
    if s.is_tabulated() {
        let exchange = json!({"label": s.label(), "elements": s.keys(), "identity": s.identity(), "table": s.table()});
        out = out.with(Artifact::json("semigroup.json", &exchange));
    }
    Ok(out)
}

fn spectrum_cmd(cfg: &RunConfig, a: &SpectrumArgs) -> Result<Outcome, CliError> {
    let Walk { s, l, w, .. } = load_walk(cfg, &a.walk)?;
    let spec = spectrum(&s, &l, &w)?;
    spec.check_identities(&l)?;
    let p = transition_matrix(&s, &l, &w)?;
    let records: Vec<Value> = spec
        .records
        .iter()
        .map(|r| json!({"flat": l.flat_key(r.flat), "lambda": rational(&r.lambda), "c": r.c, "m": r.m}))
        .collect();
    let groups: Vec<Value> = spec
        .groups
        .iter()
        .map(|g| {
            json!({
                "lambda": rational(&g.lambda),
                "flats": g.flats.iter().map(|&f| l.flat_key(f)).collect::<Vec<_>>(),
                "multiplicity": g.multiplicity,
            })
        })
        .collect();
    let header: Vec<String> = std::iter::once("chamber".to_string())
        .chain(p.chambers.iter().map(|&c| s.key(c).to_string()))
        .collect();
    let rows: Vec<Vec<String>> = p
        .chambers
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            std::iter::once(s.key(c).to_string())
                .chain(p.matrix.row(i).iter().map(lrb::exact::render))
                .collect()
        })
        .collect();
    let matrix_csv = csv_table(&header, &rows)?;
    let certificate = a.certify.then(|| verify_diagonalizable(&p, &spec));
    let cert_json = certificate.as_ref().map(|c| {
        json!({
            "passed": c.passed(),
            "size": c.size,
            "observed_total": c.total_observed(),
            "entries": c.entries.iter().map(|e| json!({
                "lambda": rational(&e.lambda), "expected": e.expected, "observed": e.observed,
            })).collect::<Vec<_>>(),
        })
    });
    let summary = json!({
        "semigroup": s.label(),
        "chambers": p.size(),
        "generic": spec.is_generic(),
        "spectrum": records,
        "groups": groups,
        "certificate": cert_json,
    });
    if let Some(c) = &certificate {
        if !c.passed() {
            return Err(falsified("diagonalizability certificate failed", &summary));
        }
    }
    let stdout = match cfg.format {
        Format::Json => pretty(&summary),
        Format::Csv => matrix_csv.clone(),
    };
    let mut out = Outcome::new(stdout)
        .with(Artifact::json("spectrum.json", &Value::from(records)))
        .with(Artifact {
            name: "matrix.csv".into(),
            contents: matrix_csv,
        });
    if let Some(c) = cert_json {
        out = out.with(Artifact::json("certificate.json", &c));
    }
    Ok(out)
}

fn coefficients(s: &Semigroup, e: &AlgebraElement) -> Value {
    let map: Map<String, Value> = e
        .iter()
        .map(|(x, c)| (s.key(x).to_string(), rational(c)))
        .collect();
    Value::Object(map)
}

fn idempotents(cfg: &RunConfig, a: &IdempotentArgs) -> Result<Outcome, CliError> {
    let Walk { source, s, l, w } = load_walk(cfg, &a.walk)?;
    let fam = primitive_idempotents(&s, &l, &w, a.restrict, cfg.guards.words)?;
    let list: Vec<Value> = if a.grouped {
        fam.groups
            .iter()
            .map(|g| {
                json!({
                    "lambda": rational(&g.lambda),
                    "flats": g.flats.iter().map(|&f| l.flat_key(f)).collect::<Vec<_>>(),
                    "coefficients": coefficients(&s, &g.element),
                })
            })
            .collect()
    } else {
        fam.flats
            .iter()
            .zip(&fam.lambdas)
            .zip(&fam.elements)
            .map(|((&f, lam), e)| json!({"flat": l.flat_key(f), "lambda": rational(lam), "coefficients": coefficients(&s, e)}))
            .collect()
    };
    let mut summary =
        json!({"semigroup": s.label(), "restricted": fam.restricted, "idempotents": list});
    if a.check_nu {
        let n = match &source {
            SemigroupSource::Construction(c) => c.free_rank(),
            SemigroupSource::Table(_) => None,
        }
        .ok_or_else(|| CliError::parse("--check-nu needs a free_lrb spec"))?;
        let nu = tsetlin_nu_family(&s, n, &w)?;
        let mut mismatches = Vec::new();
        for mask in 0u32..1 << n {
            let items: Vec<String> = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| (i + 1).to_string())
                .collect();
            let key = format!("{{{}}}", items.join(","));
            let flat = l
                .flat_of_key(&key)
                .ok_or_else(|| CliError::Other(format!("no flat {key}")))?;
            let e = fam
                .element(flat)
                .ok_or_else(|| CliError::Other(format!("no idempotent for {key}")))?;
            if nu.reconstruct(&s, mask)? != *e {
                mismatches.push(key);
            }
        }
        summary["nu_check"] = json!({"passed": mismatches.is_empty(), "mismatches": mismatches});
        if !mismatches.is_empty() {
            return Err(falsified("signed-measure idempotents differ", &summary));
        }
    }
    Ok(Outcome::new(pretty(&summary))
        .with(Artifact::json("idempotents.json", &summary["idempotents"])))
}

fn simulate_cmd(cfg: &RunConfig, a: &SimulateArgs) -> Result<Outcome, CliError> {
    let Walk { s, l, w, .. } = load_walk(cfg, &a.walk)?;
    let c0 = chamber_arg(&s, &l, a.start.as_deref())?;
    let t = simulate(&s, &l, &w, c0, a.steps, a.seed)?;
    let header = ["step", "element", "chamber"].map(String::from);
    let rows: Vec<Vec<String>> = t
        .steps
        .iter()
        .map(|st| {
            vec![
                st.index.to_string(),
                s.key(st.element).to_string(),
                s.key(st.chamber).to_string(),
            ]
        })
        .collect();
    let table = csv_table(&header, &rows)?;
    let v = json!({
        "semigroup": s.label(),
        "start": s.key(t.start),
        "seed": t.seed,
        "hitting_time": t.hitting_time,
        "steps": t.steps.iter().map(|st| json!({
            "step": st.index, "element": s.key(st.element), "chamber": s.key(st.chamber),
        })).collect::<Vec<_>>(),
    });
    let stdout = match cfg.format {
        Format::Json => pretty(&v),
        Format::Csv => table.clone(),
    };
    Ok(Outcome::new(stdout)
        .with(Artifact::json("trajectory.json", &v))
        .with(Artifact {
            name: "trajectory.csv".into(),
            contents: table,
        }))
}

fn stationary(cfg: &RunConfig, a: &StationaryArgs) -> Result<Outcome, CliError> {
    let Walk { s, l, w, .. } = load_walk(cfg, &a.walk)?;
    let (header, rows, v): (Vec<String>, Vec<Vec<String>>, Value) = match a.method {
        StationaryMethod::Exact | StationaryMethod::Idempotent => {
            let p = transition_matrix(&s, &l, &w)?;
            let pi = if a.method == StationaryMethod::Exact {
                stationary_exact(&p)?
            } else {
                let fam = primitive_idempotents(&s, &l, &w, false, cfg.guards.words)?;
                let top = fam
                    .element(l.top())
                    .ok_or_else(|| CliError::Other("no idempotent for the top flat".into()))?;
                p.chambers.iter().map(|&c| top.get(c)).collect()
            };
            let rows: Vec<Vec<String>> = p
                .chambers
                .iter()
                .zip(&pi)
                .map(|(&c, x)| vec![s.key(c).to_string(), lrb::exact::render(x)])
                .collect();
            let v = json!({
                "semigroup": s.label(),
                "method": format!("{:?}", a.method).to_lowercase(),
                "distribution": p.chambers.iter().zip(&pi).map(|(&c, x)| json!({"chamber": s.key(c), "probability": rational(x)})).collect::<Vec<_>>(),
            });
            (vec!["chamber".into(), "probability".into()], rows, v)
        }
        StationaryMethod::Sample => {
            let est =
                sample_parallel(&s, &l, &w, a.seed, a.samples, cfg.guards.draws, cfg.threads)?;
            let n = est.samples as f64;
            let probs = est.probabilities();
            let rows: Vec<Vec<String>> = est
                .chambers
                .iter()
                .zip(&probs)
                .map(|(&c, &q)| {
                    vec![
                        s.key(c).to_string(),
                        float(q),
                        float((q * (1.0 - q) / n).sqrt()),
                    ]
                })
                .collect();
            let v = json!({
                "semigroup": s.label(),
                "method": "sample",
                "seed": a.seed,
                "samples": est.samples,
                "distribution": est.chambers.iter().zip(&probs).map(|(&c, &q)| json!({
                    "chamber": s.key(c), "probability": float(q), "standard_error": float((q * (1.0 - q) / n).sqrt()),
                })).collect::<Vec<_>>(),
                "stopping_times": est.stopping,
            });
            (
                vec![
                    "chamber".into(),
                    "probability".into(),
                    "standard_error".into(),
                ],
                rows,
                v,
            )
        }
    };
    let table = csv_table(&header, &rows)?;
    let stdout = match cfg.format {
        Format::Json => pretty(&v),
        Format::Csv => table.clone(),
    };
    Ok(Outcome::new(stdout)
        .with(Artifact::json("stationary.json", &v))
        .with(Artifact {
            name: "stationary.csv".into(),
            contents: table,
        }))
}

fn converge(cfg: &RunConfig, a: &ConvergeArgs) -> Result<Outcome, CliError> {
    let Walk { s, l, w, .. } = load_walk(cfg, &a.walk)?;
    let c0 = chamber_arg(&s, &l, a.start.as_deref())?;
    let report = convergence_report(&s, &l, &w, c0, a.mmax)?;
    let est = if a.samples > 0 {
        Some(sample_parallel(
            &s,
            &l,
            &w,
            a.seed,
            a.samples,
            cfg.guards.draws,
            cfg.threads,
        )?)
    } else {
        None
    };
    let mut header: Vec<String> = ["m", "tv", "bound"].map(String::from).to_vec();
    if est.is_some() {
        header.extend(["tail", "tail_standard_error"].map(String::from));
    }
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    for r in &report.rows {
        let mut row = vec![
            r.m.to_string(),
            lrb::exact::render(&r.tv),
            lrb::exact::render(&r.bound),
        ];
        let mut jr = json!({"m": r.m, "tv": rational(&r.tv), "bound": rational(&r.bound)});
        if let Some(e) = &est {
            let t = e.tail(r.m);
            let se = (t * (1.0 - t) / e.samples as f64).sqrt();
            row.extend([float(t), float(se)]);
            jr["tail"] = json!(float(t));
            jr["tail_standard_error"] = json!(float(se));
        }
        rows.push(row);
        json_rows.push(jr);
    }
    let v = json!({
        "semigroup": s.label(),
        "start": s.key(c0),
        "holds": report.holds(),
        "approximate_tv": report.rows.iter().map(|r| float(to_f64(&r.tv))).collect::<Vec<_>>(),
        "rows": json_rows,
    });
    if !report.holds() {
        return Err(falsified("total variation exceeds the coatom bound", &v));
    }
    let table = csv_table(&header, &rows)?;
    let stdout = match cfg.format {
        Format::Json => pretty(&v),
        Format::Csv => table.clone(),
    };
    Ok(Outcome::new(stdout)
        .with(Artifact::json("convergence.json", &v))
        .with(Artifact {
            name: "convergence.csv".into(),
            contents: table,
        }))
}

fn poset_of(a: &DerangementArgs) -> Result<(String, FinitePoset), CliError> {
    if let Some(p) = &a.poset {
        let input: PosetInput = serde_json::from_value(read_json(p)?)?;
        return Ok((p.display().to_string(), input.to_poset()?));
    }
    if let Some(n) = a.boolean {
        guard_rank("boolean", n, 12)?;
        return Ok((format!("boolean({n})"), FinitePoset::boolean(n)));
    }
    if let Some(nq) = &a.subspace {
        let (n, q) = (nq[0], nq[1]);
        guard_rank("subspace", n, 4)?;
        return Ok((format!("subspace({n},{q})"), FinitePoset::subspace(n, q)?));
    }
    if let Some(n) = a.partitions {
        guard_rank("partition", n, 7)?;
        return Ok((
            format!("partitions({n})"),
            FinitePoset::partition_lattice(n),
        ));
    }
    if let Some(g) = &a.graph {
        let edges = read_graph(g)?;
        let vertices = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(1);
        return Ok((
            g.display().to_string(),
            FinitePoset::contraction_lattice(vertices, &edges)?,
        ));
    }
    unreachable!("clap requires one poset source")
}

fn guard_rank(what: &str, n: usize, limit: usize) -> Result<(), CliError> {
    if n > limit {
        return Err(CliError::Guard(format!(
            "{what} lattice of rank {n} exceeds the limit {limit}"
        )));
    }
    Ok(())
}

fn derangement(a: &DerangementArgs) -> Result<Outcome, CliError> {
    let (name, p) = poset_of(a)?;
    let r = derangement_routes(&p);
    let mut v = json!({
        "poset": name,
        "elements": p.len(),
        "d": r.recurrence.to_string(),
        "routes": {"recurrence": r.recurrence.to_string(), "moebius": r.moebius.to_string(), "covers": r.covers.to_string()},
        "agree": r.agree(),
    });
    let mut ok = r.agree();
    if a.stanley {
        let c = stanley_check(&p)?;
        ok &= c.passed();
        v["stanley"] =
            json!({"d": c.d.to_string(), "h_sum": c.h_sum.to_string(), "passed": c.passed()});
    }
    if a.mahajan {
        let m = mahajan_profile(&p)?;
        ok &= m.passed();
        v["mahajan"] = json!({
            "rank": m.rank,
            "passed": m.passed(),
            "rows": m.rows.iter().map(|r| json!({"rank": r.r, "d_sum": r.d_sum.to_string(), "h_sum": r.h_sum.to_string()})).collect::<Vec<_>>(),
        });
    }
    if !ok {
        return Err(falsified(
            format!("derangement identities fail on {name}"),
            &v,
        ));
    }
    Ok(Outcome::new(pretty(&v)).with(Artifact::json("derangement.json", &v)))
}

fn group_coefficients(g: &SymmetricGroup, e: &GroupAlgebraElement) -> Value {
    let map: Map<String, Value> = (0..g.order())
        .filter(|&i| !num_traits::Zero::is_zero(e.get(i)))
        .map(|i| {
            let w: Vec<String> = g.perm(i).iter().map(|x| x.to_string()).collect();
            (w.join(" "), rational(e.get(i)))
        })
        .collect();
    Value::Object(map)
}

fn descent(cfg: &RunConfig, a: &DescentArgs) -> Result<Outcome, CliError> {
    let n = a.n;
    if n == 0 {
        return Err(CliError::parse("--n must be positive"));
    }
    let cx = CoxeterComplexSn::new(n, &cfg.guards.build)?;
    let nothing = !(a.beta || a.phi_check || a.idempotents || a.walk.is_some());
    let mut v = json!({"n": n});
    let mut ok = true;
    let mut beta_csv = None;
    if a.beta || nothing {
        let rows = beta_and_h(&cx);
        ok &= rows.iter().all(|r| r.beta as i64 == r.h);
        let header: Vec<String> = ["J", "beta", "f", "h"]
            .iter()
            .map(|h| h.to_string())
            .collect();
        let table: Vec<Vec<String>> = rows
            .iter()
            .map(|r| {
                let set: Vec<String> = r.set.iter().map(|i| i.to_string()).collect();
                vec![
                    set.join(" "),
                    r.beta.to_string(),
                    r.f.to_string(),
                    r.h.to_string(),
                ]
            })
            .collect();
        beta_csv = Some(csv_table(&header, &table)?);
        v["beta"] = Value::from(
            rows.iter()
                .map(|r| json!({"J": r.set, "beta": r.beta, "f": r.f, "h": r.h}))
                .collect::<Vec<_>>(),
        );
    }
    let group = if a.phi_check || a.idempotents || a.walk.is_some() {
        Some(SymmetricGroup::new(n)?)
    } else {
        None
    };
    if a.phi_check {
        let g = group.as_ref().unwrap();
        let r = phi_check(&cx, g)?;
        ok &= r.passed(n);
        v["phi_check"] = json!({
            "passed": r.passed(n), "bases": r.bases, "anti_homomorphism": r.anti_homomorphism,
            "closed": r.closed, "rank": r.rank, "pairs": r.pairs,
        });
    }
    if a.idempotents {
        let g = group.as_ref().unwrap();
        let t = top_to_random_idempotents(g);
        let rep = t.verify(g);
        ok &= rep.passed();
        v["idempotents"] = json!({
            "passed": rep.passed(),
            "vanishing": rep.vanishing, "idempotent": rep.idempotent, "orthogonal": rep.orthogonal,
            "complete": rep.complete, "decomposes": rep.decomposes,
            "E": t.e.iter().enumerate().map(|(i, e)| json!({
                "i": i, "lambda": format!("{i}/{n}"), "coefficients": group_coefficients(g, e),
            })).collect::<Vec<_>>(),
        });
    }
    if let Some(path) = &a.walk {
        let g = group.as_ref().unwrap();
        let w = parse_weights(cx.semigroup(), &read_json(path)?)?;
        let walk = descent_walk(&cx, g, &w)?;
        ok &= walk.passed();
        v["walk"] = json!({"passed": walk.passed(), "mismatches": walk.mismatches, "mu": group_coefficients(g, &walk.mu)});
    }
    if !ok {
        return Err(falsified(
            format!("descent algebra checks fail for n = {n}"),
            &v,
        ));
    }
    let mut outcome = Outcome::new(pretty(&v)).with(Artifact::json("descent.json", &v));
    if let Some(table) = beta_csv {
        if cfg.format == Format::Csv {
            outcome.stdout = table.clone();
        }
        outcome = outcome.with(Artifact {
            name: "beta.csv".into(),
            contents: table,
        });
    }
    Ok(outcome)
}

/// Writes the artifacts when `--out` is set, returning the text for stdout.
pub fn finish(cfg: &RunConfig, outcome: &Outcome) -> Result<String, CliError> {
    let mut text = outcome.stdout.clone();
    if let Some(dir) = &cfg.out {
        for p in outcome.write_to(dir)? {
            if cfg.verbose > 0 {
                eprintln!("wrote {}", p.display());
            }
        }
    }
    if !text.ends_with('\n') {
        text.push('\n');
    }
    Ok(text)
}

/// Where a falsification report goes: `report.json` under `--out`, if set.
pub fn write_report(
    out: Option<&Path>,
    report: &str,
) -> Result<Option<std::path::PathBuf>, CliError> {
    match out {
        None => Ok(None),
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            let p = dir.join("report.json");
            std::fs::write(&p, report)?;
            Ok(Some(p))
        }
    }
}
