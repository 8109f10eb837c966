//! The `ddl` command line.
//!
//! Exit codes: 0 when the check comes out as asked (valid, confirmed,
//! satisfiable, pattern matches), 1 when it does not (refuted, UNSAT up to
//! the bound, timeout), 2 on usage errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::casestudy::{self, CaseConfig};
use crate::finder::{self, find_model, with_workers, Budget, SearchSpec, SearchStatus};
use crate::formula::{parse, Formula, ParseError};
use crate::model::{parse_model, serialize_model, ModelError, PreferenceModel};
use crate::relprops::{self, parse_property_list, Implication, RelationProperty};
use crate::report::{to_json, FrameWitnessJson, ModelWitnessJson};
use crate::schemas::{self, AxiomName, Background, CheckOutcome, ConverseReport};
use crate::semantics::{
    default_frame_bound, truth_set, truth_set_strict, valid_on_frame, Assignment, EvalError, EvalRule,
    FrameVerdict,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Model { path: PathBuf, source: ModelError },
    #[error("formula `{text}`: {source}")]
    Parse { text: String, source: ParseError },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Search(#[from] finder::SearchError),
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Debug, Parser)]
#[command(name = "ddl", version, about = "Finite-model checks for preference-based dyadic deontic logic")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Truth condition for O(../..): opt, max or lewis.
    #[arg(long, global = true)]
    pub rule: Option<EvalRule>,
    /// Comma-separated relation properties, e.g. `transitive,total`.
    #[arg(long, global = true, default_value = "")]
    pub props: String,
    /// Largest number of worlds to search.
    #[arg(long, global = true)]
    pub max_n: Option<usize>,
    #[arg(long, global = true)]
    pub json: bool,
    /// Visit one frame per isomorphism class (allows up to 7 worlds).
    #[arg(long, global = true)]
    pub iso_reject: bool,
    /// Atoms without a valuation are errors instead of denoting {}.
    #[arg(long, global = true)]
    pub strict_atoms: bool,
    /// Wall-clock budget in seconds; 0 disables it.
    #[arg(long, global = true, default_value_t = 60.0)]
    pub timeout: f64,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Section {
    Grid,
    Prop1,
    Remark,
    Fmp,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Truth set of a formula in a model (frame validity if it has metavariables).
    Eval {
        #[arg(long)]
        model: PathBuf,
        formula: String,
    },
    /// Re-check a model: properties from --props, formulas valid under --rule.
    CheckModel {
        #[arg(long)]
        model: PathBuf,
        formulas: Vec<String>,
    },
    /// Smallest model making every formula true everywhere (or, with --refute, some false somewhere).
    FindModel {
        #[arg(required = true)]
        formulas: Vec<String>,
        #[arg(long)]
        refute: bool,
        /// Properties the frame must lack.
        #[arg(long, default_value = "")]
        forbid: String,
        /// Comma-separated atoms to search, most significant first.
        #[arg(long)]
        atoms: Option<String>,
        #[arg(long, default_value_t = 1)]
        min_n: usize,
    },
    /// Property/axiom correspondence checks.
    Correspond {
        /// Run the whole table for --rule.
        #[arg(long)]
        table: bool,
        /// Axiom name (K, T, Five, COK, ..., DEX) or a schema over ?f ?g ?h.
        #[arg(long)]
        axiom: Option<String>,
        /// Search for frames validating the axiom but lacking the property.
        #[arg(long)]
        converse: bool,
        /// Converse search over models with fixed atoms instead of frames.
        #[arg(long)]
        model_level: bool,
        /// Assume limitedness and D* in the background.
        #[arg(long)]
        background: bool,
        /// DEX under max and lewis.
        #[arg(long)]
        dex: bool,
    },
    /// Do opt, max and lewis agree on every frame with --props?
    Collapse,
    /// The mere addition scenario.
    Paradox {
        #[arg(long, value_enum, default_value = "grid")]
        section: Section,
    },
    /// Implications and independence among the weakenings of transitivity.
    Lattice,
    /// Properties of a model's relation, or a bounded implication check.
    Props {
        #[arg(long)]
        model: Option<PathBuf>,
        /// Conclusion property: check that --props implies it.
        #[arg(long)]
        implies: Option<RelationProperty>,
    },
}

/// Parses `argv` (including the program name), runs the command and writes
/// its report; returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
            } else {
                let _ = out.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let workers = cli.common.workers;
    match with_workers(workers, || dispatch(&cli)) {
        Ok((report, code)) => {
            let _ = out.write_all(report.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

type Outcome = Result<(String, i32), CliError>;

fn code(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_REFUTED
    }
}

fn read_model(path: &Path) -> Result<PreferenceModel, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    parse_model(&text).map_err(|source| CliError::Model { path: path.into(), source })
}

fn parse_formula(text: &str) -> Result<Formula, CliError> {
    parse(text).map_err(|source| CliError::Parse { text: text.into(), source })
}

impl Common {
    fn properties(&self) -> Result<Vec<RelationProperty>, CliError> {
        parse_property_list(&self.props).map_err(CliError::Usage)
    }

    fn rule_or_max(&self) -> EvalRule {
        self.rule.unwrap_or(EvalRule::Max)
    }

    fn timeout(&self) -> Option<Duration> {
        (self.timeout > 0.0).then(|| Duration::from_secs_f64(self.timeout))
    }

    fn bound(&self, default: usize, cap: usize) -> Result<usize, CliError> {
        let n = self.max_n.unwrap_or(default);
        if n == 0 || n > cap {
            return Err(usage(format!("--max-n {n} out of range 1..={cap}")));
        }
        Ok(n)
    }
}

fn dispatch(cli: &Cli) -> Outcome {
    let c = &cli.common;
    match &cli.command {
        Command::Eval { model, formula } => eval(c, model, formula),
        Command::CheckModel { model, formulas } => check_model(c, model, formulas),
        Command::FindModel { formulas, refute, forbid, atoms, min_n } => {
            find(c, formulas, *refute, forbid, atoms.as_deref(), *min_n)
        }
        Command::Correspond { table, axiom, converse, model_level, background, dex } => {
            correspond(c, *table, axiom.as_deref(), *converse, *model_level, *background, *dex)
        }
        Command::Collapse => collapse(c),
        Command::Paradox { section } => paradox(c, *section),
        Command::Lattice => lattice(c),
        Command::Props { model, implies } => props(c, model.as_deref(), *implies),
    }
}

fn frame_bound(c: &Common, schema: &Formula) -> Result<usize, CliError> {
    c.bound(default_frame_bound(schema.metavars().len()), schemas::MAX_CHECK_WORLDS)
}

fn eval(c: &Common, path: &Path, text: &str) -> Outcome {
    let model = read_model(path)?;
    let f = parse_formula(text)?;
    let rules: Vec<EvalRule> = c.rule.map_or(EvalRule::ALL.to_vec(), |r| vec![r]);
    let universe = model.universe();
    let mut rows = Vec::new();
    let mut text_out = String::new();
    let mut all_valid = true;
    for rule in rules {
        if f.metavars().is_empty() {
            let set = if c.strict_atoms {
                truth_set_strict(&f, &model, &Assignment::new(), rule)?
            } else {
                truth_set(&f, &model, &Assignment::new(), rule)?
            };
            let valid = set == universe;
            all_valid &= valid;
            let worlds: Vec<bool> = (0..model.world_count()).map(|w| set.contains(w)).collect();
            let _ = writeln!(text_out, "{rule}: {set} valid={valid}");
            for (w, t) in worlds.iter().enumerate() {
                let _ = writeln!(text_out, "  {w}: {t}");
            }
            rows.push(json!({"rule": rule, "truth_set": set, "worlds": worlds, "valid": valid}));
        } else {
            let verdict = valid_on_frame(&f, model.betterness(), rule)?;
            let valid = verdict.is_valid();
            all_valid &= valid;
            let _ = writeln!(text_out, "{rule}: frame-valid={valid}");
            let mut row = json!({"rule": rule, "frame_valid": valid});
            if let FrameVerdict::Invalid(cx) = verdict {
                let w = FrameWitnessJson::falsifying(model.betterness(), &cx.assignment, cx.falsified_at);
                let _ = writeln!(text_out, "  falsified at {} under {:?}", cx.falsified_at, cx.assignment);
                row["counterexample"] = serde_json::to_value(w).expect("serializes");
            }
            rows.push(row);
        }
    }
    let report = if c.json {
        to_json(&json!({"formula": f.to_string(), "results": rows}))
    } else {
        text_out
    };
    Ok((report, code(all_valid)))
}

fn check_model(c: &Common, path: &Path, texts: &[String]) -> Outcome {
    let model = read_model(path)?;
    let rule = c.rule_or_max();
    let props = c.properties()?;
    let mut ok = true;
    let mut text_out = String::new();
    let mut prop_rows = Vec::new();
    for p in &props {
        let holds = p.holds(model.betterness());
        ok &= holds;
        let _ = writeln!(text_out, "property {p}: {holds}");
        prop_rows.push(json!({"property": p, "holds": holds}));
    }
    let mut formula_rows = Vec::new();
    for t in texts {
        let f = parse_formula(t)?;
        let valid = if f.metavars().is_empty() {
            let set = if c.strict_atoms {
                truth_set_strict(&f, &model, &Assignment::new(), rule)?
            } else {
                truth_set(&f, &model, &Assignment::new(), rule)?
            };
            set == model.universe()
        } else {
            valid_on_frame(&f, model.betterness(), rule)?.is_valid()
        };
        ok &= valid;
        let _ = writeln!(text_out, "{f}: {valid}");
        formula_rows.push(json!({"formula": f.to_string(), "valid": valid}));
    }
    let _ = writeln!(text_out, "{}", if ok { "ok" } else { "FAILED" });
    let report = if c.json {
        to_json(&json!({
            "rule": rule,
            "worlds": model.world_count(),
            "properties": prop_rows,
            "formulas": formula_rows,
            "ok": ok,
        }))
    } else {
        text_out
    };
    Ok((report, code(ok)))
}

fn find(c: &Common, texts: &[String], refute: bool, forbid: &str, atoms: Option<&str>, min_n: usize) -> Outcome {
    let targets = texts.iter().map(|t| parse_formula(t)).collect::<Result<Vec<_>, _>>()?;
    let cap = if c.iso_reject { finder::MAX_ENUM_WORLDS } else { finder::MAX_PLAIN_WORLDS };
    let max_n = c.bound(finder::MAX_PLAIN_WORLDS.min(cap), cap)?;
    if min_n == 0 || min_n > max_n {
        return Err(usage(format!("--min-n {min_n} out of range 1..={max_n}")));
    }
    let rule = c.rule_or_max();
    let props = c.properties()?;
    let forbidden = parse_property_list(forbid).map_err(CliError::Usage)?;
    let mut spec = if refute {
        SearchSpec::refute(targets, rule, &props, max_n)
    } else {
        SearchSpec::satisfy(targets, rule, &props, max_n)
    };
    if let Some(list) = atoms {
        spec = spec.with_atoms(list.split(',').map(|a| a.trim().to_string()).filter(|a| !a.is_empty()).collect());
    }
    let spec = spec
        .with_sizes(min_n, max_n)
        .with_forbidden(&forbidden)
        .with_iso_reject(c.iso_reject)
        .with_timeout(c.timeout());
    let res = find_model(&spec)?;
    let status = match res.status {
        SearchStatus::Found => "found",
        SearchStatus::UnsatUpToBound => "unsat_up_to_bound",
        SearchStatus::Timeout => "timeout",
    };
    let n_checked = res.witness.as_ref().map_or(res.exhausted_up_to, PreferenceModel::world_count);
    let report = if c.json {
        let mut v = json!({
            "status": status,
            "rule": rule,
            "n_checked": n_checked,
            "frames_checked": res.frames_checked,
            "elapsed_ms": res.elapsed.as_millis() as u64,
        });
        if let Some(m) = &res.witness {
            v["witness"] = serde_json::to_value(ModelWitnessJson::new(m)).expect("serializes");
        }
        to_json(&v)
    } else {
        let mut s = format!("{status} (sizes up to {n_checked}, {} frames)\n", res.frames_checked);
        if let Some(m) = &res.witness {
            s.push_str(&serialize_model(m));
        }
        s
    };
    Ok((report, code(res.is_found())))
}

fn axiom_formula(text: &str) -> Result<(Option<AxiomName>, Formula), CliError> {
    if let Ok(name) = text.parse::<AxiomName>() {
        return Ok((Some(name), name.schema().formula));
    }
    let f = parse_formula(text)?;
    if let Some(a) = f.atoms().into_iter().next() {
        return Err(EvalError::HasAtoms(a).into());
    }
    Ok((None, f))
}

fn correspond(
    c: &Common,
    table: bool,
    axiom: Option<&str>,
    converse: bool,
    model_level: bool,
    background: bool,
    dex: bool,
) -> Outcome {
    let budget = Budget::new(c.timeout());
    if table {
        let rule = c.rule_or_max();
        let n = c.bound(3, 4)?;
        let rep = schemas::table_sweep_with_budget(rule, n, &budget);
        let ok = rep.all_match();
        let report = if c.json { to_json(&rep) } else { sweep_text(&rep) };
        return Ok((report, code(ok)));
    }
    if dex {
        let n = c.bound(3, 4)?;
        let rep = schemas::dex_report(n);
        let ok = rep.max_outcome == "confirmed" && rep.lewis_outcome == "counterexample";
        let report = if c.json {
            to_json(&rep)
        } else {
            format!("DEX up to n={n}: max {}, lewis {}\n", rep.max_outcome, rep.lewis_outcome)
        };
        return Ok((report, code(ok)));
    }
    let Some(axiom) = axiom else {
        return Err(usage("correspond needs --table, --dex or --axiom"));
    };
    let (name, formula) = axiom_formula(axiom)?;
    let rule = c.rule_or_max();
    let props = c.properties()?;
    if converse {
        let [property] = props[..] else {
            return Err(usage("converse search takes exactly one property in --props"));
        };
        let Some(name) = name else {
            return Err(usage("converse search needs a registered axiom name"));
        };
        let n = frame_bound(c, &formula)?;
        let outcome = if model_level {
            schemas::converse_search_models(&name.schema(), property, rule, n, c.timeout())
        } else {
            schemas::converse_search_frames(&name.schema(), property, rule, n, &budget)
        };
        let rep = ConverseReport::new(name, property, rule, n, &outcome);
        let found = rep.outcome == "witness";
        let report = if c.json {
            to_json(&rep)
        } else {
            let mut s = format!("converse {name} => {property} ({rule}, n<={n}): {}\n", rep.outcome);
            if let Some(w) = &rep.frame_witness {
                s.push_str(&w.model);
            }
            if let Some(w) = &rep.model_witness {
                s.push_str(&w.model);
            }
            s
        };
        return Ok((report, code(found)));
    }
    let n = frame_bound(c, &formula)?;
    let bg = if background { Background::limited(rule) } else { Background::none() };
    let outcome = schemas::forward_check_with(&props, &bg, &formula, rule, n, &budget);
    let witness = outcome.witness().map(|w| w.to_json());
    let report = if c.json {
        let mut v = json!({
            "rule": rule,
            "properties": props,
            "background": bg,
            "axiom": name.map_or_else(|| formula.to_string(), |a| a.to_string()),
            "bound": n,
            "outcome": outcome.label(),
        });
        if let CheckOutcome::Confirmed { frames_checked } = outcome {
            v["frames_checked"] = json!(frames_checked);
        }
        if let Some(w) = &witness {
            v["witness"] = serde_json::to_value(w).expect("serializes");
        }
        to_json(&v)
    } else {
        let mut s = format!("{formula} on {props:?} frames ({rule}, n<={n}): {}\n", outcome.label());
        if let Some(w) = &witness {
            s.push_str(&w.model);
            let _ = writeln!(s, "assignment {:?}", w.assignment);
        }
        s
    };
    Ok((report, code(outcome.is_confirmed())))
}

fn sweep_text(rep: &schemas::SweepReport) -> String {
    let mut s = format!("correspondences under {} up to n={}\n", rep.rule, rep.bound);
    for r in &rep.rows {
        let props: Vec<String> = r.properties.iter().map(|p| p.slug().to_string()).collect();
        let props = if props.is_empty() { "-".to_string() } else { props.join("+") };
        let _ = writeln!(
            s,
            "  {:<26} {:<16} {:<6} {:<15} {}",
            r.label,
            props,
            r.axiom.to_string(),
            r.outcome,
            if r.matches_expected { "ok" } else { "MISMATCH" }
        );
        for d in &r.drops {
            let _ = writeln!(s, "      without {}: {}", d.dropped.slug(), d.outcome);
        }
    }
    for neg in &rep.negative_rows {
        let added: Vec<String> = neg.added_validities_up_to_bound.iter().map(|a| a.to_string()).collect();
        let _ = writeln!(
            s,
            "  x {:<24} validated up to bound: {}",
            neg.label,
            if added.is_empty() { "none".into() } else { added.join(", ") }
        );
    }
    s
}

fn collapse(c: &Common) -> Outcome {
    let n = c.bound(4, 5)?;
    let mut props = c.properties()?;
    if props.is_empty() {
        props = vec![RelationProperty::Reflexive, RelationProperty::Total, RelationProperty::Transitive];
    }
    let rep = schemas::rule_collapse(&props, n);
    let report = if c.json {
        to_json(&rep)
    } else {
        let mut s = format!(
            "rules collapse on {:?} frames up to n={n}: {} ({} frames)\n",
            props, rep.collapsed, rep.frames_checked
        );
        if let Some(m) = &rep.mismatch {
            let _ = writeln!(
                s,
                "  antecedent {} consequent {}: opt={} max={} lewis={}",
                m.antecedent, m.consequent, m.opt, m.max, m.lewis
            );
            s.push_str(&m.frame.model);
        }
        s
    };
    Ok((report, code(rep.collapsed)))
}

fn paradox(c: &Common, section: Section) -> Outcome {
    let cap = if c.iso_reject { finder::MAX_ENUM_WORLDS } else { finder::MAX_PLAIN_WORLDS };
    let n = c.bound(4, cap)?;
    let cfg = CaseConfig { max_n: n, iso_reject: c.iso_reject, timeout: c.timeout() };
    let want = |s: Section| section == s || section == Section::All;
    let mut ok = true;
    let mut json_parts = serde_json::Map::new();
    let mut text = String::new();
    if want(Section::Grid) {
        let g = casestudy::run_grid(&cfg);
        ok &= g.all_match;
        text.push_str(&g.text_table());
        json_parts.insert("grid".into(), value(&g));
    }
    if want(Section::Prop1) {
        let p = casestudy::proposition1_evidence(&cfg);
        ok &= p.holds;
        let _ = writeln!(text, "eq1-eq3 under max: no (quasi-)transitive model up to n={n}: {}", p.holds);
        json_parts.insert("proposition1".into(), value(&p));
    }
    if want(Section::Remark) {
        let r = casestudy::interval_remark(&cfg);
        ok &= r.holds;
        let _ = writeln!(text, "eq1,eq3,eq4 under max: no interval-order model up to n={n}: {}", r.holds);
        let _ = writeln!(text, "eq1-eq4 under max: no interval-order model up to n={n}: {}", r.holds_with_eq2);
        json_parts.insert("interval_remark".into(), value(&r));
    }
    if want(Section::Fmp) {
        let f = casestudy::fmp_evidence(&cfg);
        ok &= f.holds;
        let _ = writeln!(text, "eq1&eq2&eq3 under max: no finite model in any class up to n={n}: {}", f.holds);
        let _ = writeln!(text, "note: {}", f.note);
        json_parts.insert("fmp".into(), value(&f));
    }
    let report = if c.json {
        if json_parts.len() == 1 {
            to_json(json_parts.values().next().expect("one part"))
        } else {
            to_json(&json_parts)
        }
    } else {
        text
    };
    Ok((report, code(ok)))
}

fn value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("report serializes")
}

fn lattice(c: &Common) -> Outcome {
    let n = c.bound(4, 5)?;
    let rep = relprops::lattice_report(n);
    let report = if c.json {
        to_json(&rep)
    } else {
        let mut s = format!("weakenings of transitivity up to n={n}\n");
        for a in rep.arrows.iter().chain(&rep.definitional) {
            let _ = writeln!(s, "  {} => {}: {}", a.from.slug(), a.to.slug(), if a.confirmed { "confirmed" } else { "FAILS" });
        }
        let found = rep.independence.iter().filter(|i| i.witness.is_some()).count();
        let _ = writeln!(s, "  independence witnesses: {found}/{}", rep.independence.len());
        for i in rep.independence.iter().filter(|i| i.witness.is_none()) {
            let _ = writeln!(s, "    missing: {} without {}", i.from.slug(), i.to.slug());
        }
        s
    };
    Ok((report, code(rep.all_hold())))
}

fn props(c: &Common, model: Option<&Path>, implies: Option<RelationProperty>) -> Outcome {
    let props = c.properties()?;
    if let Some(conclusion) = implies {
        let n = c.bound(4, 5)?;
        let result = relprops::property_implication(&props, conclusion, n);
        let (ok, witness) = match &result {
            Implication::Confirmed { .. } => (true, None),
            Implication::Witness(r) => (false, Some(FrameWitnessJson::frame(r))),
        };
        let report = if c.json {
            let mut v = json!({"premises": props, "conclusion": conclusion, "bound": n, "confirmed": ok});
            if let Implication::Confirmed { relations_checked } = result {
                v["relations_checked"] = json!(relations_checked);
            }
            if let Some(w) = &witness {
                v["witness"] = value(w);
            }
            to_json(&v)
        } else {
            let mut s = format!("{props:?} => {conclusion} up to n={n}: {}\n", if ok { "confirmed" } else { "witness" });
            if let Some(w) = &witness {
                s.push_str(&w.model);
            }
            s
        };
        return Ok((report, code(ok)));
    }
    let Some(path) = model else {
        return Err(usage("props needs --model or --implies"));
    };
    let m = read_model(path)?;
    let mut ok = true;
    let mut rows = serde_json::Map::new();
    let mut text = String::new();
    for p in RelationProperty::ALL {
        let holds = p.holds(m.betterness());
        if props.contains(&p) {
            ok &= holds;
        }
        rows.insert(p.slug().to_string(), json!(holds));
        let _ = writeln!(text, "{:<20} {holds}", p.slug());
    }
    let report = if c.json { to_json(&json!({"worlds": m.world_count(), "properties": rows})) } else { text };
    Ok((report, code(ok)))
}
