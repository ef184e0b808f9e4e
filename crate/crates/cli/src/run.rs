//! Dispatch from a parsed command to the library, building a report.

use std::io::Read;
use std::path::Path;

use dickson::apps::ica::{compare_with_bfs, ica_saturate, rounds_bound, witness_norms_ok, Ica};
use dickson::apps::km::{km_tree, uncovered_reachable, vas_queries, Vas};
use dickson::apps::program::{LoopProgram, RankingSpec};
use dickson::apps::termination::{input_grid, term_check};
use dickson::oracle::{longest_bad, longest_run, predicted_bound, verify_witness};
use dickson::sequences::{
    collapse_sum, decompose_regions, first_increasing_pair, first_uncontrolled, gen_lex_max, goodness_profile_with,
    layer_by_goodness, TaggedSequence,
};
use dickson::{lex_len, lex_rbad_lower, ubound, verify, Error, Result};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::args::{Cli, Cmd};

/// A finished command: named fields for JSON output and lines for text.
#[derive(Default)]
pub struct Report {
    pub fields: Map<String, Value>,
    pub text: Vec<String>,
    /// Set when `verify` saw a failing suite.
    pub failed: bool,
}

impl Report {
    fn put(&mut self, key: &str, value: impl Into<Value>) {
        self.fields.insert(key.to_string(), value.into());
    }

    fn line(&mut self, s: impl Into<String>) {
        self.text.push(s.into());
    }

    /// Puts a field and prints it as `key: value`.
    fn show(&mut self, key: &str, value: impl Into<Value>) {
        let value = value.into();
        let shown = match &value {
            Value::String(s) => s.clone(),
            Value::Null => "-".into(),
            other => other.to_string(),
        };
        self.line(format!("{key}: {shown}"));
        self.put(key, value);
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Usage { token: "-".into(), message: format!("cannot read stdin: {e}") })?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Error::Usage {
        token: path.display().to_string(),
        message: format!("cannot read file: {e}"),
    })
}

fn load_program(spec: &str) -> Result<LoopProgram> {
    if spec == "builtin:choice" {
        return Ok(LoopProgram::choice());
    }
    if let Some(k) = spec.strip_prefix("builtin:lex:") {
        return match k.parse::<usize>() {
            Ok(k) if k >= 1 => Ok(LoopProgram::lex(k)),
            _ => Err(Error::Usage { token: spec.into(), message: "expected builtin:lex:K with K >= 1".into() }),
        };
    }
    read_text(Path::new(spec))?.parse()
}

fn load_sequence(path: &Path) -> Result<TaggedSequence> {
    read_text(path)?.parse()
}

fn seq_lines(seq: &TaggedSequence) -> Vec<String> {
    seq.to_string().lines().map(str::to_string).collect()
}

fn show_seq(r: &mut Report, key: &str, seq: &TaggedSequence) {
    r.put(key, seq_lines(seq));
    r.put(&format!("{key}_type"), seq.tau().to_string());
    r.line(format!("{key} over {} ({} items):", seq.tau(), seq.len()));
    for l in seq_lines(seq) {
        r.line(format!("  {l}"));
    }
}

fn parse_inputs(text: &str) -> Result<Vec<BigInt>> {
    text.split(',')
        .map(|v| {
            v.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Usage { token: v.to_string(), message: "expected an integer".into() })
        })
        .collect()
}

pub fn execute(cli: &Cli) -> Result<Report> {
    let budget = cli.budget();
    let exec = cli.exec();
    let mut r = Report::default();
    match &cli.command {
        Cmd::Bound { tau, t, f, method } => {
            r.show("tau", tau.to_string());
            r.show("t", t.to_string());
            r.show("f", f.to_string());
            let mut rows = Vec::new();
            let mut first_err = None;
            let mut values = Vec::new();
            for m in method {
                match ubound(tau, t, f, *m, budget) {
                    Ok(b) => {
                        r.line(format!("{m}: {} ({} steps)", b.value, b.steps_used));
                        rows.push(json!({"method": m.as_str(), "value": b.value.to_string(), "steps_used": b.steps_used}));
                        values.push(b.value);
                    }
                    Err(e) => {
                        r.line(format!("{m}: {} ({e})", e.name()));
                        rows.push(json!({"method": m.as_str(), "error": e.name(), "message": e.to_string()}));
                        first_err.get_or_insert(e);
                    }
                }
            }
            r.put("results", rows);
            if let Some(e) = first_err {
                return Err(e);
            }
            if values.windows(2).any(|w| w[0] != w[1]) {
                return Err(Error::Precondition("evaluation methods disagree".into()));
            }
            r.put("value", values[0].to_string());
        }
        Cmd::Lex { k, t, f, r: rr } => {
            let l = lex_len(*k, t, f, budget)?;
            r.show("k", *k);
            r.show("t", t.to_string());
            r.show("f", f.to_string());
            r.show("length", l.length.to_string());
            r.show("offset", l.offset.to_string());
            r.put("steps_used", l.steps_used);
            if let Some(rr) = rr {
                r.show("r", *rr);
                r.show("r_bad_length", lex_rbad_lower(*rr, *k, t, f, budget)?.to_string());
            }
        }
        Cmd::GenerateLex { k, t, f } => {
            let seq = gen_lex_max(*k, *t, f, budget)?;
            r.put("k", *k);
            r.put("t", *t);
            r.put("f", f.to_string());
            r.put("length", seq.len());
            show_seq(&mut r, "sequence", &seq);
        }
        Cmd::Analyze { file, order, t, f } => {
            let seq = load_sequence(file)?;
            let p = goodness_profile_with(&seq, *order, exec);
            r.show("type", seq.tau().to_string());
            r.show("length", seq.len());
            r.show("order", order.to_string());
            r.show("max_goodness", p.max_goodness);
            r.show("bad", p.is_bad());
            let r_bad = if seq.is_empty() { 1 } else { p.max_goodness + 1 };
            r.show("least_r_bad", r_bad);
            r.show("first_increasing_pair", first_increasing_pair(&seq, *order).map(|(i, j)| json!([i, j])));
            r.put("goodness", p.goodness.clone());
            r.line("index  goodness  item");
            for (i, (g, l)) in p.goodness.iter().zip(seq_lines(&seq).iter().skip_while(|l| l.starts_with("type"))).enumerate() {
                r.line(format!("{i:>5}  {g:>8}  {l}"));
            }
            if let (Some(t), Some(f)) = (t, f) {
                r.show("t", *t);
                r.show("f", f.to_string());
                match first_uncontrolled(&seq, *t, f, budget)? {
                    None => r.show("controlled", true),
                    Some((i, norm, bound)) => {
                        r.show("controlled", false);
                        r.show("first_uncontrolled", json!({"index": i, "norm": norm, "bound": bound.to_string()}));
                    }
                }
            }
        }
        Cmd::Decompose { file, t, f } => {
            let seq = load_sequence(file)?;
            let d = decompose_regions(&seq, *t, f, budget)?;
            r.show("input_type", seq.tau().to_string());
            r.show("t", *t);
            r.show("f", f.to_string());
            show_seq(&mut r, "decomposed", &d);
        }
        Cmd::Layer { file, r: rr, collapse } => {
            let seq = load_sequence(file)?;
            let p = goodness_profile_with(&seq, dickson::sequences::SeqOrder::Product, exec);
            let rr = rr.unwrap_or(p.max_goodness + 1);
            r.show("r", rr);
            let out = if *collapse { collapse_sum(&seq, rr)? } else { layer_by_goodness(&seq, rr)? };
            r.show("direction", if *collapse { "collapse" } else { "layer" });
            show_seq(&mut r, "sequence", &out);
        }
        Cmd::Oracle { tau, t, f, order, r: rr } => {
            let res = longest_bad(tau, *t, f, *order, *rr, budget, exec)?;
            r.show("tau", tau.to_string());
            r.show("t", *t);
            r.show("f", f.to_string());
            r.show("order", order.to_string());
            r.show("r", *rr);
            r.show("length", res.length);
            r.show("exhausted", res.exhausted);
            r.show("steps_used", res.steps_used);
            r.show("witness_valid", verify_witness(&res, *t, f, *order, *rr, budget)?);
            let upper = match predicted_bound(tau, *t, f, *rr, budget) {
                Ok(v) => Value::String(v.to_string()),
                Err(e) if e.is_budget() => Value::Null,
                Err(e) => return Err(e),
            };
            r.show("upper_bound", upper);
            show_seq(&mut r, "witness", &res.witness);
        }
        Cmd::RunProgram { program, inputs, trace } => {
            let p = load_program(program)?;
            let run = longest_run(&p, inputs, budget)?;
            r.put("program", p.to_string());
            r.show("inputs", inputs.iter().map(ToString::to_string).collect::<Vec<_>>().join(","));
            r.show("longest_run", run.length);
            r.show("exhausted", run.exhausted);
            r.show("steps_used", run.steps_used);
            if *trace {
                let states: Vec<String> = run
                    .trace
                    .iter()
                    .map(|s| {
                        let kv: Vec<String> = p.vars.iter().zip(s).map(|(v, x)| format!("{v}={x}")).collect();
                        format!("({})", kv.join(", "))
                    })
                    .collect();
                r.line("trace:");
                for s in &states {
                    r.line(format!("  {s}"));
                }
                r.put("trace", states);
            }
        }
        Cmd::Km { file, explore } => {
            let vas: Vas = read_text(file)?.parse()?;
            let tree = km_tree(&vas, budget)?;
            let rep = vas_queries(&vas, &tree, exec);
            r.put("vas", vas.to_string());
            r.show("k", vas.k);
            r.show("nodes", rep.nodes);
            r.show("max_branch_len", rep.max_branch_len);
            r.show("branches_bad", rep.branches_bad);
            r.show("sizes_ok", rep.sizes_ok);
            let unbounded: Vec<usize> = (0..vas.k).filter(|&j| rep.unbounded[j]).map(|j| j + 1).collect();
            r.show("unbounded_coordinates", unbounded);
            let covering: Vec<String> = rep.covering.iter().map(ToString::to_string).collect();
            r.show("covering", covering.join(" "));
            r.put("covering", covering);
            let miss = uncovered_reachable(&vas, &tree, *explore);
            r.show("covering_sound_on_sample", miss.is_none());
            if let Some(v) = miss {
                r.show("uncovered", format!("{v:?}"));
            }
            let nodes: Vec<Value> = tree
                .nodes
                .iter()
                .map(|n| json!({"label": n.label.to_string(), "parent": n.parent, "delta": n.delta}))
                .collect();
            r.put("tree", nodes);
            r.line("tree:");
            for (i, n) in tree.nodes.iter().enumerate() {
                let depth = tree.path(i).len() - 1;
                r.line(format!("  {}{}", "  ".repeat(depth), n.label));
            }
        }
        Cmd::Ica { file, bfs_cap } => {
            let m: Ica = read_text(file)?.parse()?;
            let sat = ica_saturate(&m, budget)?;
            r.put("machine", m.to_string());
            r.show("rounds", sat.rounds);
            let mins: Vec<String> = sat.reach_min.elems().iter().map(|c| m.show(c)).collect();
            r.show("reach_min", mins.join(" "));
            r.put("reach_min", mins);
            r.show("witness_bad", dickson::sequences::is_bad(&sat.witness));
            r.show("witness_controlled", witness_norms_ok(&sat.witness));
            let bound = match rounds_bound(&m, budget) {
                Ok(v) => Value::String(v.to_string()),
                Err(e) if e.is_budget() => Value::Null,
                Err(e) => return Err(e),
            };
            r.show("rounds_bound", bound);
            show_seq(&mut r, "witness", &sat.witness);
            if let Some(cap) = bfs_cap {
                let diff = compare_with_bfs(&m, &sat, *cap, budget)?;
                r.show("bfs_cap", *cap);
                r.show("bfs_agrees", diff.is_none());
                if let Some(c) = diff {
                    r.show("bfs_disagreement", m.show(&c));
                }
            }
        }
        Cmd::Terminate { program, ranks, inits, grid } => {
            let p = load_program(program)?;
            let spec = RankingSpec::parse(&read_text(ranks)?, &p)?;
            let mut all: Vec<Vec<BigInt>> = inits.iter().map(|s| parse_inputs(s)).collect::<Result<_>>()?;
            if let Some(g) = grid {
                all.extend(input_grid(p.inputs().len(), *g));
            }
            if all.is_empty() {
                return Err(Error::Usage { token: "terminate".into(), message: "give --init or --grid".into() });
            }
            let rep = term_check(&p, &spec, &all, budget, exec)?;
            r.put("program", p.to_string());
            r.put("ranks", spec.render(&p));
            r.show("scope", "verified on explored behaviours");
            r.show("inits", rep.per_init.len());
            r.show("pairs_checked", rep.pairs_checked());
            r.show("tuples_bad", rep.tuples_bad());
            r.show("bound_ok", rep.bound_ok());
            if let Some(best) = rep.max_run() {
                let ins: Vec<String> = best.inputs.iter().map(ToString::to_string).collect();
                r.show("max_run", best.max_run);
                r.show("max_run_at", ins.join(","));
            }
            r.line("inputs  max_run  runs  t  controlled  predicted");
            let mut rows = Vec::new();
            for i in &rep.per_init {
                let ins: Vec<String> = i.inputs.iter().map(ToString::to_string).collect();
                let pred = i.predicted.as_ref().map(ToString::to_string);
                r.line(format!(
                    "{}  {}  {}  {}  {}  {}",
                    ins.join(","),
                    i.max_run,
                    i.runs,
                    i.t,
                    i.control_ok,
                    pred.clone().unwrap_or_else(|| "-".into())
                ));
                rows.push(json!({
                    "inputs": ins.join(","),
                    "max_run": i.max_run,
                    "runs": i.runs,
                    "pairs_checked": i.pairs_checked,
                    "tuples_bad": i.tuples_bad,
                    "t": i.t.to_string(),
                    "control_ok": i.control_ok,
                    "predicted": pred,
                    "bound_ok": i.bound_ok(),
                }));
            }
            r.put("per_init", rows);
        }
        Cmd::Verify { suite, list } => {
            if *list {
                let names = verify::suite_names();
                for n in &names {
                    r.line(*n);
                }
                r.put("suites", names);
                return Ok(r);
            }
            let outcomes = verify::run_suites(suite.as_deref(), exec);
            if outcomes.is_empty() {
                return Err(Error::Usage {
                    token: suite.clone().unwrap_or_default(),
                    message: "no suite matches".into(),
                });
            }
            let mut rows = Vec::new();
            for o in &outcomes {
                r.line(format!(
                    "[{}] {} ({} checks)",
                    if o.passed { "PASS" } else { "FAIL" },
                    o.name,
                    o.checked
                ));
                for f in &o.failures {
                    r.line(format!("    {f}"));
                }
                rows.push(json!({"suite": o.name, "passed": o.passed, "checked": o.checked, "failures": o.failures}));
            }
            let passed = outcomes.iter().filter(|o| o.passed).count();
            r.line(format!("{passed}/{} suites passed", outcomes.len()));
            r.put("suites", rows);
            r.put("passed", passed == outcomes.len());
            r.failed = passed != outcomes.len();
        }
    }
    Ok(r)
}
