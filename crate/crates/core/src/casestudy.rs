//! The mere addition paradox as a finite satisfiability problem.
//!
//! Three populations: `A`, `Ap` (A plus extra lives worth living) and `B`.
//! The scenario says A is strictly better than B, Ap is at least as good as
//! A, and B is strictly better than Ap, with the preference operators on
//! formulas unfolded into permissions and obligations.
//!
//! Where the interesting claims are about infinite models, everything here
//! is bounded evidence: "UNSAT up to n" means that no model with at most n
//! worlds exists, nothing more.

use std::fmt::Write as _;
use std::time::Duration;

use rayon::prelude::*;
use serde::Serialize;

use crate::finder::{
    all_models, find_model, longest_strict_chain, ChainLength, SearchResult, SearchSpec, SearchStatus,
};
use crate::formula::{parse, Formula};
use crate::model::PreferenceModel;
use crate::relprops::{check_all, RelationProperty};
use crate::report::ModelWitnessJson;
use crate::semantics::{valid_in_model, EvalRule};

pub const ATOMS: [&str; 3] = ["A", "Ap", "B"];

/// The five scenario formulas, `eq0` to `eq4`.
pub const EQ_SOURCES: [&str; 5] = [
    "P(A / A | B)",
    "P(Ap / A | Ap)",
    "O(~Ap / Ap | B)",
    "O(~B / A | B)",
    "P(B / Ap | B)",
];

/// The three comparisons written with the preference sugar.
pub const SUGAR_SOURCES: [&str; 3] = ["(A > B)", "(Ap >= A)", "(B > Ap)"];

/// Which of the five formulas encode which comparison.
pub const GROUPS: [(&str, &[usize]); 3] = [("PP0", &[0, 3]), ("PP1", &[1]), ("PP2", &[2, 4])];

#[derive(Clone, Debug)]
pub struct Scenario {
    eqs: Vec<Formula>,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario::new()
    }
}

impl Scenario {
    pub fn new() -> Self {
        Scenario { eqs: EQ_SOURCES.iter().map(|s| parse(s).expect("scenario formula")).collect() }
    }

    pub fn eq(&self, k: usize) -> &Formula {
        &self.eqs[k]
    }

    pub fn all(&self) -> Vec<Formula> {
        self.eqs.clone()
    }

    pub fn select(&self, indices: &[usize]) -> Vec<Formula> {
        indices.iter().map(|&k| self.eqs[k].clone()).collect()
    }

    pub fn group(&self, name: &str) -> Option<Vec<Formula>> {
        GROUPS.iter().find(|(g, _)| *g == name).map(|(_, ix)| self.select(ix))
    }

    pub fn sugar(&self) -> Vec<Formula> {
        SUGAR_SOURCES.iter().map(|s| parse(s).expect("scenario formula")).collect()
    }
}

/// Search knobs shared by the case-study reports.
#[derive(Clone, Copy, Debug)]
pub struct CaseConfig {
    pub max_n: usize,
    pub iso_reject: bool,
    pub timeout: Option<Duration>,
}

impl CaseConfig {
    pub fn new(max_n: usize) -> Self {
        CaseConfig { max_n, iso_reject: true, timeout: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Sat,
    UnsatUpToBound,
    Timeout,
}

impl Verdict {
    fn of(status: SearchStatus) -> Self {
        match status {
            SearchStatus::Found => Verdict::Sat,
            SearchStatus::UnsatUpToBound => Verdict::UnsatUpToBound,
            SearchStatus::Timeout => Verdict::Timeout,
        }
    }
}

/// Grid rows: label and imposed properties.
pub const GRID_ROWS: [(&str, &[RelationProperty]); 6] = [
    ("none", &[]),
    ("transitivity + totality", &[RelationProperty::Total, RelationProperty::Transitive]),
    ("transitivity", &[RelationProperty::Transitive]),
    ("interval order", &[RelationProperty::IntervalOrder]),
    ("quasi-transitivity", &[RelationProperty::QuasiTransitive]),
    ("acyclicity", &[RelationProperty::Acyclic]),
];

/// Expected satisfiability of the whole scenario per grid row and rule.
pub fn expected_sat(row: usize, rule: EvalRule) -> bool {
    match row {
        0 | 5 => true,
        4 => rule != EvalRule::Max,
        _ => false,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CellReport {
    pub rule: EvalRule,
    pub label: &'static str,
    pub properties: Vec<RelationProperty>,
    pub bound: usize,
    pub expected: Verdict,
    pub verdict: Verdict,
    pub matches_expected: bool,
    pub frames_checked: u64,
    /// Largest size exhausted without finding a model.
    pub exhausted_up_to: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ModelWitnessJson>,
    /// The witness re-checks: every target valid, every property holds.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_verified: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GridReport {
    pub bound: usize,
    pub iso_reject: bool,
    pub formulas: Vec<&'static str>,
    pub cells: Vec<CellReport>,
    pub all_match: bool,
}

/// Re-evaluates a witness from scratch.
pub fn verify_witness(model: &PreferenceModel, targets: &[Formula], properties: &[RelationProperty], rule: EvalRule) -> bool {
    check_all(properties, model.betterness())
        && targets.iter().all(|f| valid_in_model(f, model, rule).unwrap_or(false))
}

fn search(targets: Vec<Formula>, rule: EvalRule, properties: &[RelationProperty], sizes: (usize, usize), cfg: &CaseConfig) -> SearchResult {
    let spec = SearchSpec::satisfy(targets, rule, properties, sizes.1)
        .with_sizes(sizes.0, sizes.1)
        .with_atoms(ATOMS.iter().map(|a| a.to_string()).collect())
        .with_iso_reject(cfg.iso_reject)
        .with_timeout(cfg.timeout);
    find_model(&spec).expect("case-study search is well formed")
}

/// The scenario under every rule and grid row, cells searched concurrently.
pub fn run_grid(cfg: &CaseConfig) -> GridReport {
    let scenario = Scenario::new();
    let jobs: Vec<(usize, EvalRule)> =
        (0..GRID_ROWS.len()).flat_map(|row| EvalRule::ALL.into_iter().map(move |rule| (row, rule))).collect();
    let cells: Vec<CellReport> = jobs
        .par_iter()
        .map(|&(row, rule)| {
            let (label, props) = GRID_ROWS[row];
            let res = search(scenario.all(), rule, props, (1, cfg.max_n), cfg);
            let verdict = Verdict::of(res.status);
            let expected = if expected_sat(row, rule) { Verdict::Sat } else { Verdict::UnsatUpToBound };
            let witness_verified = res.witness.as_ref().map(|m| verify_witness(m, &scenario.all(), props, rule));
            CellReport {
                rule,
                label,
                properties: props.to_vec(),
                bound: cfg.max_n,
                expected,
                verdict,
                matches_expected: verdict == expected && witness_verified != Some(false),
                frames_checked: res.frames_checked,
                exhausted_up_to: res.exhausted_up_to,
                witness: res.witness.as_ref().map(ModelWitnessJson::new),
                witness_verified,
            }
        })
        .collect();
    let all_match = cells.iter().all(|c| c.matches_expected);
    GridReport { bound: cfg.max_n, iso_reject: cfg.iso_reject, formulas: EQ_SOURCES.to_vec(), cells, all_match }
}

impl GridReport {
    pub fn cell(&self, label: &str, rule: EvalRule) -> Option<&CellReport> {
        self.cells.iter().find(|c| c.label == label && c.rule == rule)
    }

    /// Plain-text grid, one row per property set.
    pub fn text_table(&self) -> String {
        let mut out = String::new();
        let head = ["property", "opt", "max", "lewis"];
        let header = format!("{:<26}| {:<16}| {:<16}| {}", head[0], head[1], head[2], head[3]);
        let _ = writeln!(out, "{header}");
        let _ = writeln!(out, "{}", "-".repeat(26 + 3 * 18));
        for (label, _) in GRID_ROWS {
            let mut line = format!("{label:<26}");
            for rule in EvalRule::ALL {
                let text = match self.cell(label, rule) {
                    Some(c) => {
                        let mark = if c.matches_expected { "" } else { " !" };
                        match c.verdict {
                            Verdict::Sat => {
                                let n = c.witness.as_ref().map_or(0, |w| w.worlds);
                                format!("SAT (n={n}){mark}")
                            }
                            Verdict::UnsatUpToBound => format!("UNSAT (n<={}){mark}", c.exhausted_up_to),
                            Verdict::Timeout => format!("timeout (n<={}){mark}", c.exhausted_up_to),
                        }
                    }
                    None => "-".to_string(),
                };
                let _ = write!(line, "| {text:<16}");
            }
            let _ = writeln!(out, "{}", line.trim_end());
        }
        let _ = writeln!(
            out,
            "\nUNSAT means no model with at most {} worlds; it is not a proof of inconsistency.",
            self.bound
        );
        out
    }
}

/// One search per size, so each size gets its own verdict.
#[derive(Clone, Debug, Serialize)]
pub struct SizeResult {
    pub n: usize,
    pub verdict: Verdict,
    pub frames_checked: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassReport {
    pub properties: Vec<RelationProperty>,
    pub sizes: Vec<SizeResult>,
    /// Every size up to the bound came back UNSAT.
    pub unsat_all_sizes: bool,
}

fn per_size(targets: &[Formula], rule: EvalRule, properties: &[RelationProperty], cfg: &CaseConfig) -> ClassReport {
    let sizes: Vec<SizeResult> = (1..=cfg.max_n)
        .map(|n| {
            let res = search(targets.to_vec(), rule, properties, (n, n), cfg);
            SizeResult { n, verdict: Verdict::of(res.status), frames_checked: res.frames_checked }
        })
        .collect();
    let unsat_all_sizes = sizes.iter().all(|s| s.verdict == Verdict::UnsatUpToBound);
    ClassReport { properties: properties.to_vec(), sizes, unsat_all_sizes }
}

#[derive(Clone, Debug, Serialize)]
pub struct SatReport {
    pub targets: Vec<String>,
    pub properties: Vec<RelationProperty>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub forbidden: Vec<RelationProperty>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ModelWitnessJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_verified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub longest_strict_chain: Option<ChainLength>,
}

fn sat_report(
    targets: &[Formula],
    rule: EvalRule,
    properties: &[RelationProperty],
    forbidden: &[RelationProperty],
    cfg: &CaseConfig,
) -> SatReport {
    let spec = SearchSpec::satisfy(targets.to_vec(), rule, properties, cfg.max_n)
        .with_atoms(ATOMS.iter().map(|a| a.to_string()).collect())
        .with_forbidden(forbidden)
        .with_iso_reject(cfg.iso_reject)
        .with_timeout(cfg.timeout);
    let res = find_model(&spec).expect("case-study search is well formed");
    SatReport {
        targets: targets.iter().map(Formula::to_string).collect(),
        properties: properties.to_vec(),
        forbidden: forbidden.to_vec(),
        verdict: Verdict::of(res.status),
        witness_verified: res.witness.as_ref().map(|m| {
            verify_witness(m, targets, properties, rule) && forbidden.iter().all(|p| !p.holds(m.betterness()))
        }),
        longest_strict_chain: res.witness.as_ref().map(longest_strict_chain),
        witness: res.witness.as_ref().map(ModelWitnessJson::new),
    }
}

/// Chain lengths among models of a weaker formula set, as a sanity check on
/// the chain-building argument.
#[derive(Clone, Debug, Serialize)]
pub struct NearMissReport {
    pub targets: Vec<String>,
    pub properties: Vec<RelationProperty>,
    pub bound: usize,
    pub models: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_chain: Option<usize>,
    pub cyclic: usize,
}

const NEAR_MISS_BOUND: usize = 3;

fn near_miss(targets: &[Formula], properties: &[RelationProperty], max_n: usize) -> NearMissReport {
    let bound = max_n.min(NEAR_MISS_BOUND);
    let spec = SearchSpec::satisfy(targets.to_vec(), EvalRule::Max, properties, bound)
        .with_atoms(ATOMS.iter().map(|a| a.to_string()).collect());
    let models = all_models(&spec).expect("case-study search is well formed");
    let mut min_chain = None;
    let mut cyclic = 0;
    for m in &models {
        match longest_strict_chain(m) {
            ChainLength::Cyclic => cyclic += 1,
            ChainLength::Length(k) => min_chain = Some(min_chain.map_or(k, |c: usize| c.min(k))),
        }
    }
    NearMissReport {
        targets: targets.iter().map(Formula::to_string).collect(),
        properties: properties.to_vec(),
        bound,
        models: models.len(),
        min_chain,
        cyclic,
    }
}

pub const OUT_OF_SCOPE: &str = "the formula is satisfiable in an infinite model (an unbounded increasing \
strict chain); constructing or checking that model is outside this tool, which only shows that no \
finite model up to the bound exists";

#[derive(Clone, Debug, Serialize)]
pub struct Proposition1Report {
    pub rule: EvalRule,
    pub bound: usize,
    pub targets: Vec<String>,
    pub classes: Vec<ClassReport>,
    /// Smallest model with no property imposed.
    pub unrestricted: SatReport,
    /// Smallest model whose strict part has a cycle.
    pub cyclic: SatReport,
    pub near_miss: NearMissReport,
    pub holds: bool,
    pub note: &'static str,
}

/// `eq1, eq2, eq3` under Max: no finite quasi-transitive (or transitive)
/// model, but models exist once the strict part may cycle.
pub fn proposition1_evidence(cfg: &CaseConfig) -> Proposition1Report {
    use RelationProperty as P;
    let sc = Scenario::new();
    let targets = sc.select(&[1, 2, 3]);
    let classes: Vec<ClassReport> = [vec![P::QuasiTransitive], vec![P::Transitive]]
        .iter()
        .map(|props| per_size(&targets, EvalRule::Max, props, cfg))
        .collect();
    let unrestricted = sat_report(&targets, EvalRule::Max, &[], &[], cfg);
    let cyclic = sat_report(&targets, EvalRule::Max, &[], &[P::Acyclic], cfg);
    let near_miss = near_miss(&sc.select(&[1, 2]), &[P::QuasiTransitive], cfg.max_n);
    let holds = classes.iter().all(|c| c.unsat_all_sizes)
        && unrestricted.verdict == Verdict::Sat
        && unrestricted.witness_verified == Some(true)
        && cyclic.verdict == Verdict::Sat
        && cyclic.witness_verified == Some(true)
        && cyclic.longest_strict_chain == Some(ChainLength::Cyclic)
        && near_miss.min_chain.is_none_or(|k| k >= 2);
    Proposition1Report {
        rule: EvalRule::Max,
        bound: cfg.max_n,
        targets: targets.iter().map(Formula::to_string).collect(),
        classes,
        unrestricted,
        cyclic,
        near_miss,
        holds,
        note: OUT_OF_SCOPE,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IntervalRemarkReport {
    pub rule: EvalRule,
    pub bound: usize,
    /// `eq1, eq3, eq4` on interval orders.
    pub targets: Vec<String>,
    pub interval_order: ClassReport,
    /// Smallest interval-order model of `eq1, eq3, eq4`, if any.
    pub interval_order_model: SatReport,
    /// `eq1, eq3` without `eq4`, interval orders.
    pub without_eq4: SatReport,
    /// `eq1, eq3, eq4` with no property.
    pub unrestricted: SatReport,
    /// The chain argument also uses the world bettering the `Ap`-world
    /// that `eq2` supplies, so the refutation really concerns
    /// `eq1, eq2, eq3, eq4`.
    pub with_eq2: ClassReport,
    /// `eq1, eq3, eq4` has no interval-order model up to the bound.
    pub holds: bool,
    /// `eq1, eq2, eq3, eq4` has none.
    pub holds_with_eq2: bool,
}

/// `eq4` against interval orders under Max.
///
/// Without `eq2` the three formulas do have small interval-order models;
/// the report keeps the smallest one alongside the per-size results for
/// the four-formula set.
pub fn interval_remark(cfg: &CaseConfig) -> IntervalRemarkReport {
    let sc = Scenario::new();
    let io = [RelationProperty::IntervalOrder];
    let targets = sc.select(&[1, 3, 4]);
    let interval_order = per_size(&targets, EvalRule::Max, &io, cfg);
    let interval_order_model = sat_report(&targets, EvalRule::Max, &io, &[], cfg);
    let without_eq4 = sat_report(&sc.select(&[1, 3]), EvalRule::Max, &io, &[], cfg);
    let unrestricted = sat_report(&targets, EvalRule::Max, &[], &[], cfg);
    let with_eq2 = per_size(&sc.select(&[1, 2, 3, 4]), EvalRule::Max, &io, cfg);
    let holds = interval_order.unsat_all_sizes
        && without_eq4.witness_verified == Some(true)
        && unrestricted.witness_verified == Some(true);
    let holds_with_eq2 = with_eq2.unsat_all_sizes;
    IntervalRemarkReport {
        rule: EvalRule::Max,
        bound: cfg.max_n,
        targets: targets.iter().map(Formula::to_string).collect(),
        interval_order,
        interval_order_model,
        without_eq4,
        unrestricted,
        with_eq2,
        holds,
        holds_with_eq2,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FmpReport {
    pub rule: EvalRule,
    pub bound: usize,
    pub formula: String,
    pub classes: Vec<ClassReport>,
    pub holds: bool,
    pub note: &'static str,
}

/// The conjunction `eq1 & eq2 & eq3` has no finite model in any of the
/// three classes, up to the bound.
pub fn fmp_evidence(cfg: &CaseConfig) -> FmpReport {
    use RelationProperty as P;
    let sc = Scenario::new();
    let phi = Formula::conj(sc.select(&[1, 2, 3])).expect("non-empty");
    let classes: Vec<ClassReport> = [
        vec![P::QuasiTransitive],
        vec![P::Transitive],
        // interval orders are reflexive by definition; listed for the record
        vec![P::Reflexive, P::IntervalOrder],
    ]
    .iter()
    .map(|props| per_size(std::slice::from_ref(&phi), EvalRule::Max, props, cfg))
    .collect();
    let holds = classes.iter().all(|c| c.unsat_all_sizes);
    FmpReport { rule: EvalRule::Max, bound: cfg.max_n, formula: phi.to_string(), classes, holds, note: OUT_OF_SCOPE }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::truth_set;

    #[test]
    fn groups_cover_all_formulas() {
        let mut ix: Vec<usize> = GROUPS.iter().flat_map(|(_, g)| g.iter().copied()).collect();
        ix.sort_unstable();
        assert_eq!(ix, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn sugar_matches_expanded_groups() {
        let sc = Scenario::new();
        let sugar = sc.sugar();
        // exhaustive over 2-world models and every valuation of the atoms
        for code in 0..16 {
            let r = crate::model::Relation::from_code(2, code);
            for bits in 0..64u16 {
                let m = PreferenceModel::with_valuation(
                    r,
                    ATOMS.iter().enumerate().map(|(k, a)| {
                        (a.to_string(), crate::model::WorldSet::from_bits((bits >> (2 * k)) & 3))
                    }),
                );
                for rule in EvalRule::ALL {
                    for (k, (_, ix)) in GROUPS.iter().enumerate() {
                        let lhs = truth_set(&sugar[k], &m, &Default::default(), rule).unwrap();
                        let rhs = truth_set(&Formula::conj(sc.select(ix)).unwrap(), &m, &Default::default(), rule).unwrap();
                        assert_eq!(lhs, rhs, "group {k} rule {rule} on {m:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn grid_pattern_at_four() {
        let rep = run_grid(&CaseConfig::new(4));
        assert!(rep.all_match, "{}", rep.text_table());
    }
}
