use crate::args::*;
use crate::error::CliError;
use num_traits::ToPrimitive;
use outsplit_core::generators::{
    disjoint_union, random_digraph_min_outdegree, random_k_partite_tournament, random_tournament,
    rotational_tournament, shuffle_labels,
};
use outsplit_core::lll::{
    admissible_max_indegree, check_weighted_lll, delta0_lll, moser_tardos_split,
};
use outsplit_core::oracle::{
    exact_xv_distribution, exhaustive_bipartite_minimal_scan, exists_split,
};
use outsplit_core::pairing::{find_good_bisection, random_pairing};
use outsplit_core::peeling::{
    is_minimal_core, is_s_minimal, minimal_core_bound, peel_split, split_multipartite,
    strong_split, uniform_threshold,
};
use outsplit_core::probability::{
    bad_probability, chernoff_cap, delta0_pairing, expected_bad_exact, expected_bad_upper,
    prob_too_few, prob_too_many,
};
use outsplit_core::report::{verify_split, SplitCriterion};
use outsplit_core::sweep::{
    empirical_frontier, sweep_expected_bad, sweep_success_threshold, write_csv,
};
use outsplit_core::{
    read_edge_list, write_edge_list, Digraph, Epsilon, Family, HypothesisGate, PairProfile,
    Pairing, PartnerRelation, SplitDocument, SplitParams, SplitSpec, Threshold,
};
use serde::Serialize;
use serde_json::{json, Value};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

type Result<T> = std::result::Result<T, CliError>;

fn read_text(source: &str) -> Result<String> {
    if source == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::input(format!("standard input: {e}")))?;
        Ok(text)
    } else {
        std::fs::read_to_string(source).map_err(|e| CliError::input(format!("{source}: {e}")))
    }
}

fn read_graph(source: &str) -> Result<Digraph> {
    read_edge_list(&read_text(source)?).map_err(|e| CliError::input(format!("{source}: {e}")))
}

fn require_graph(source: &Option<String>) -> Result<Digraph> {
    read_graph(
        source
            .as_deref()
            .ok_or_else(|| CliError::usage("--in is required"))?,
    )
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::input(format!("standard output: {e}"))),
    }
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    text
}

fn epsilon(eps: Option<f64>) -> Result<Epsilon> {
    Epsilon::new(eps.ok_or_else(|| CliError::usage("--eps is required"))?).map_err(CliError::usage)
}

fn spec(s: Option<usize>, t: Option<usize>) -> Result<SplitSpec> {
    match (s, t) {
        (Some(s), Some(t)) => SplitSpec::new(s, t).map_err(CliError::usage),
        _ => Err(CliError::usage("--s and --t are required")),
    }
}

fn load_pairing(n: usize, file: &Option<PathBuf>, seed: Option<u64>) -> Result<Pairing> {
    match (file, seed) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            Pairing::parse(n, &text)
                .map_err(|e| CliError::input(format!("{}: {e}", path.display())))
        }
        (None, Some(seed)) => Ok(random_pairing(n, seed)),
        _ => Err(CliError::usage(
            "give exactly one of --pairing and --pairing-seed",
        )),
    }
}

fn rational(q: &num_rational::BigRational) -> Value {
    json!({ "exact": q.to_string(), "approx": q.to_f64() })
}

pub fn generate(args: GenerateArgs) -> Result<()> {
    let need_n = || {
        args.n
            .ok_or_else(|| CliError::usage("--n is required for this family"))
    };
    let one = |seed: u64| -> Result<Digraph> {
        let g = match args.family {
            GenFamily::Rotational => rotational_tournament(need_n()?),
            GenFamily::Tournament => random_tournament(need_n()?, seed),
            GenFamily::Multipartite => random_k_partite_tournament(&args.parts, seed),
            GenFamily::MinOutdegree => {
                let d = args
                    .d
                    .ok_or_else(|| CliError::usage("--d is required for min-outdegree"))?;
                random_digraph_min_outdegree(need_n()?, d, seed)
            }
        };
        g.map_err(CliError::usage)
    };
    if args.copies == 0 {
        return Err(CliError::usage("--copies must be positive"));
    }
    let mut g = one(args.seed)?;
    for i in 1..args.copies {
        g = disjoint_union(&g, &one(args.seed.wrapping_add(i as u64))?);
    }
    if args.shuffle {
        g = shuffle_labels(&g, args.seed);
    }
    write_output(&args.out, &write_edge_list(&g))
}

pub fn split(args: SplitArgs) -> Result<()> {
    let g = read_graph(&args.input)?;
    let doc = match args.method {
        Method::Pairing | Method::Strong => {
            let eps = epsilon(args.eps)?;
            let threshold = Threshold::Relative(eps);
            let report = find_good_bisection(&g, &threshold, args.max_trials, args.seed).map_err(|e| {
                let details = json!({
                    "trials": e.trials,
                    "best_bad": e.best_bad,
                    "seed": e.seed,
                    "trial_bad_counts": e.trial_bad_counts,
                });
                CliError::failure(&e, details)
            })?;
            let stats = json!({
                "trials_used": report.trials_used,
                "trial_bad_counts": report.trial_bad_counts,
                "bad": report.bad.len(),
            });
            if args.method == Method::Pairing {
                SplitDocument::new(&g, "pairing", Some(args.seed), SplitParams::relative(eps.value(), true), &report.bipartition, stats)
            } else {
                let strong = strong_split(&g, &report.bipartition, eps).map_err(|e| CliError::failure(e, Value::Null))?;
                let stats = json!({
                    "trials_used": report.trials_used,
                    "bisection_side_a": report.bipartition.len_a(),
                    "core_size": strong.len_a(),
                });
                SplitDocument::new(&g, "strong", Some(args.seed), SplitParams::relative(eps.value(), false), &strong, stats)
            }
        }
        Method::Lll => {
            let eps = epsilon(args.eps)?;
            let check = check_weighted_lll(&g, eps);
            if !check.passed {
                log::warn!("the local lemma conditions do not hold; resampling without a guarantee");
            }
            let report = moser_tardos_split(&g, &Threshold::Relative(eps), args.seed, args.max_resamples)
                .map_err(|e| {
                    let details = json!({ "resamples": e.resamples, "remaining_bad": e.remaining_bad, "seed": e.seed });
                    CliError::failure(&e, details)
                })?;
            let stats = json!({ "resamples": report.resamples, "conditions_hold": check.passed });
            SplitDocument::new(&g, "lll", Some(args.seed), SplitParams::relative(eps.value(), true), &report.bipartition, stats)
        }
        Method::Peel => {
            let spec = spec(args.s, args.t)?;
            let (outcome, extra) = if g.parts().is_some() {
                let gate = match args.gate {
                    Gate::Warn => HypothesisGate::Warn,
                    Gate::Enforce => HypothesisGate::Enforce,
                };
                let split = split_multipartite(&g, spec, gate).map_err(|e| CliError::failure(e, Value::Null))?;
                let extra = json!({
                    "k": split.k,
                    "required_min_out_degree": split.required_min_out_degree.to_string(),
                    "hypothesis_met": split.hypothesis_met,
                });
                (split.outcome, extra)
            } else {
                let outcome = peel_split(&g, spec).map_err(|e| CliError::failure(e, Value::Null))?;
                (outcome, Value::Null)
            };
            let mut stats = json!({
                "size_a": outcome.bipartition.len_a(),
                "min_out_a": outcome.min_out_a,
                "min_out_b": outcome.min_out_b,
            });
            if let Value::Object(map) = extra {
                stats.as_object_mut().unwrap().extend(map);
            }
            SplitDocument::new(&g, "peel", None, SplitParams::min_out(spec.s(), spec.t()), &outcome.bipartition, stats)
        }
    }
    .map_err(CliError::usage)?;
    if !doc.verified {
        return Err(CliError::failure(
            "the split did not re-verify",
            serde_json::to_value(&doc).unwrap(),
        ));
    }
    write_output(&args.out, &pretty(&doc))
}

pub fn prob(args: ProbArgs) -> Result<()> {
    let threshold = match (args.eps, args.t) {
        (Some(e), None) => Threshold::Relative(Epsilon::new(e).map_err(CliError::usage)?),
        (None, Some(t)) => Threshold::Absolute(t),
        _ => return Err(CliError::usage("give exactly one of --eps and --t")),
    };
    let describe = |profile: &PairProfile| {
        let t = threshold.for_degree(profile.dplus());
        let mut doc = json!({
            "a": profile.a(),
            "b": profile.b(),
            "partner": profile.partner().as_str(),
            "dplus": profile.dplus(),
            "t": t,
            "free_coins": profile.free_coins(),
            "too_few": rational(&prob_too_few(profile, t)),
            "too_many": rational(&prob_too_many(profile, t)),
            "bad": rational(&bad_probability(profile, t)),
        });
        if let Some(eps) = threshold.epsilon() {
            doc["chernoff_cap"] = match chernoff_cap(profile.dplus(), eps) {
                Ok(cap) => json!(2.0 * cap),
                Err(e) => json!({ "invalid": e.to_string() }),
            };
        }
        doc
    };
    let doc = if let Some(text) = &args.profile {
        let fields: Vec<&str> = text.split(',').map(str::trim).collect();
        let [a, b, rel] = fields[..] else {
            return Err(CliError::usage("--profile expects a,b,rel"));
        };
        let a = a
            .parse()
            .map_err(|_| CliError::usage("--profile: a is not a count"))?;
        let b = b
            .parse()
            .map_err(|_| CliError::usage("--profile: b is not a count"))?;
        let rel: PartnerRelation = rel.parse().map_err(CliError::usage)?;
        describe(&PairProfile::new(a, b, rel).map_err(CliError::usage)?)
    } else {
        let g = require_graph(&args.input)?;
        let pairing = load_pairing(g.n(), &args.pairing, args.pairing_seed)?;
        if let Some(v) = args.vertex {
            g.check_vertex(v).map_err(CliError::usage)?;
            let mut doc = describe(&PairProfile::from_pairing(&g, v, &pairing));
            doc["vertex"] = json!(v);
            doc
        } else {
            let mut doc =
                json!({ "exact": rational(&expected_bad_exact(&g, &pairing, &threshold)) });
            if let Some(eps) = threshold.epsilon() {
                doc["analytic_bound"] = match expected_bad_upper(&g, eps) {
                    Ok(bound) => json!(bound),
                    Err(e) => json!({ "invalid": e.to_string() }),
                };
            }
            doc
        }
    };
    write_output(&None, &pretty(&doc))
}

fn read_split(path: &Path) -> Result<SplitDocument> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn verdict(valid: bool, report: Value, what: &str) -> Result<()> {
    write_output(&None, &pretty(&report))?;
    if valid {
        Ok(())
    } else {
        Err(CliError::Invalid {
            message: format!("{what} does not hold"),
            details: report,
        })
    }
}

pub fn verify(args: VerifyArgs) -> Result<()> {
    let g = read_graph(&args.input)?;
    if args.lll {
        let report = check_weighted_lll(&g, epsilon(args.eps)?);
        return verdict(
            report.passed,
            serde_json::to_value(&report).unwrap(),
            "the local lemma condition set",
        );
    }
    if args.minimal {
        let s = args
            .s
            .ok_or_else(|| CliError::usage("--minimal needs --s"))?;
        return match &args.split {
            Some(path) => {
                let doc = read_split(path)?;
                let theta = uniform_threshold(&g, s);
                let minimal = is_minimal_core(&g, &doc.a, &theta).map_err(CliError::input)?;
                verdict(
                    minimal,
                    json!({ "s": s, "minimal_core": minimal, "size": doc.a.len() }),
                    "minimality of side A",
                )
            }
            None => {
                let minimal = is_s_minimal(&g, s);
                verdict(
                    minimal,
                    json!({ "s": s, "s_minimal": minimal }),
                    "s-minimality",
                )
            }
        };
    }
    let path = args.split.as_ref().expect("clap requires a mode");
    let doc = read_split(path)?;
    let criterion = match (args.eps, args.s, args.t) {
        (None, None, None) => doc.params.criterion().map_err(CliError::input)?,
        (Some(e), None, None) => SplitCriterion::Balanced {
            threshold: Threshold::Relative(Epsilon::new(e).map_err(CliError::usage)?),
            bisection: doc.params.bisection,
        },
        (None, Some(s), Some(t)) => SplitCriterion::MinOut {
            s,
            t,
            bisection: doc.params.bisection,
        },
        _ => return Err(CliError::usage("give either --eps or both --s and --t")),
    };
    let report = verify_split(&g, &doc.a, &doc.b, &criterion);
    verdict(
        report.valid,
        serde_json::to_value(&report).unwrap(),
        "the split criterion",
    )
}

pub fn bound(args: BoundArgs) -> Result<()> {
    let line = if let Some(e) = args.delta0 {
        let eps = Epsilon::new(e).map_err(CliError::usage)?;
        delta0_pairing(eps)
            .map_err(|e| CliError::failure(e, Value::Null))?
            .to_string()
    } else if let Some(e) = args.delta0_lll {
        let eps = Epsilon::new(e).map_err(CliError::usage)?;
        delta0_lll(eps)
            .ok_or_else(|| CliError::failure("no delta_0 below the scan limit", Value::Null))?
            .to_string()
    } else if let Some(sk) = args.core_bound {
        minimal_core_bound(sk[0], sk[1])
            .map_err(CliError::usage)?
            .value()
            .to_string()
    } else if let Some(ed) = args.max_indegree {
        let eps = Epsilon::new(ed[0]).map_err(CliError::usage)?;
        if ed[1] < 1.0 || ed[1].fract() != 0.0 {
            return Err(CliError::usage("DELTA must be a positive integer"));
        }
        format!("{:e}", admissible_max_indegree(eps, ed[1] as usize))
    } else {
        unreachable!("clap requires one bound")
    };
    write_output(&None, &format!("{line}\n"))
}

pub fn sweep(args: SweepArgs) -> Result<()> {
    let family: Family = args.family.parse().map_err(CliError::usage)?;
    let rows = match args.mode {
        SweepMode::Expected => {
            sweep_expected_bad(family, &args.eps, &args.n, args.trials, args.seed)
        }
        SweepMode::Success => {
            let [eps] = args.eps[..] else {
                return Err(CliError::usage("success mode takes a single --eps"));
            };
            sweep_success_threshold(family, eps, &args.n, args.trials, args.attempts, args.seed)
        }
    }
    .map_err(CliError::usage)?;
    if args.mode == SweepMode::Success {
        match empirical_frontier(&rows, 0.99) {
            Some(n) => log::info!("empirical 99% frontier on this grid: n = {n}"),
            None => log::info!("no 99% frontier on this grid"),
        }
    }
    let mut out = Vec::new();
    write_csv(&rows, &mut out).map_err(CliError::input)?;
    write_output(&args.out, &String::from_utf8(out).expect("csv is utf-8"))
}

pub fn oracle(args: OracleArgs) -> Result<()> {
    let doc = if args.exists_split {
        let g = require_graph(&args.input)?;
        let (s, t) = match (args.s, args.t) {
            (Some(s), Some(t)) => (s, t),
            _ => return Err(CliError::usage("--exists-split needs --s and --t")),
        };
        let found = exists_split(&g, s, t, args.bisection).map_err(CliError::usage)?;
        json!({
            "exists": found.is_some(),
            "A": found.as_ref().map(|b| b.side_a()),
            "B": found.as_ref().map(|b| b.side_b()),
        })
    } else if args.xv_dist {
        let g = require_graph(&args.input)?;
        let v = args
            .vertex
            .ok_or_else(|| CliError::usage("--xv-dist needs --vertex"))?;
        let pairing = load_pairing(g.n(), &args.pairing, args.pairing_seed)?;
        let law = exact_xv_distribution(&g, v, &pairing).map_err(CliError::usage)?;
        let law: serde_json::Map<String, Value> = law
            .iter()
            .map(|(x, p)| (x.to_string(), rational(p)))
            .collect();
        json!({ "vertex": v, "distribution": law })
    } else {
        let s = args
            .s
            .ok_or_else(|| CliError::usage("--scan-minimal needs --s"))?;
        let hits = exhaustive_bipartite_minimal_scan(args.max_part, s).map_err(CliError::usage)?;
        let hits: Vec<Value> = hits
            .iter()
            .map(|h| json!({ "parts": [h.parts.0, h.parts.1], "arcs": h.graph.arcs().collect::<Vec<_>>() }))
            .collect();
        json!({ "s": s, "max_part": args.max_part, "count": hits.len(), "digraphs": hits })
    };
    write_output(&None, &pretty(&doc))
}
