//! Axiom schemata and bounded correspondence checks.
//!
//! "Forward" checks confirm that every frame with a set of properties (up to
//! a size bound) validates an axiom; "converse" searches look for frames
//! validating the axiom but lacking the property.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::finder::{find_model, scan_frames, Budget, FrameFilter, SearchSpec};
use crate::formula::{parse, Formula};
use crate::model::{PreferenceModel, Relation, WorldSet};
use crate::relprops::RelationProperty;
use crate::report::{FrameWitnessJson, ModelWitnessJson};
use crate::semantics::{Assignment, EvalRule, Frame, FrameVerdict, Schema};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum AxiomName {
    K,
    T,
    Five,
    COK,
    Abs,
    Nec,
    Ext,
    Id,
    Sh,
    Dstar,
    CM,
    DR,
    Sp,
    RM,
    DEX,
}

impl AxiomName {
    pub const ALL: [AxiomName; 15] = [
        AxiomName::K,
        AxiomName::T,
        AxiomName::Five,
        AxiomName::COK,
        AxiomName::Abs,
        AxiomName::Nec,
        AxiomName::Ext,
        AxiomName::Id,
        AxiomName::Sh,
        AxiomName::Dstar,
        AxiomName::CM,
        AxiomName::DR,
        AxiomName::Sp,
        AxiomName::RM,
        AxiomName::DEX,
    ];

    /// The S5 block plus the axioms of the base system.
    pub const BASE: [AxiomName; 9] = [
        AxiomName::K,
        AxiomName::T,
        AxiomName::Five,
        AxiomName::COK,
        AxiomName::Abs,
        AxiomName::Nec,
        AxiomName::Ext,
        AxiomName::Id,
        AxiomName::Sh,
    ];

    pub fn source(self) -> &'static str {
        use AxiomName as A;
        match self {
            A::K => "[](?f -> ?g) -> ([]?f -> []?g)",
            A::T => "[]?f -> ?f",
            A::Five => "<>?f -> []<>?f",
            A::COK => "O(?g -> ?h / ?f) -> (O(?g / ?f) -> O(?h / ?f))",
            A::Abs => "O(?g / ?f) -> []O(?g / ?f)",
            A::Nec => "[]?f -> O(?f / ?g)",
            A::Ext => "[](?f <-> ?g) -> (O(?h / ?f) <-> O(?h / ?g))",
            A::Id => "O(?f / ?f)",
            A::Sh => "O(?h / ?f & ?g) -> O(?g -> ?h / ?f)",
            A::Dstar => "<>?f -> (O(?g / ?f) -> P(?g / ?f))",
            A::CM => "O(?g / ?f) & O(?h / ?f) -> O(?h / ?f & ?g)",
            A::DR => "O(?h / ?f | ?g) -> O(?h / ?f) | O(?h / ?g)",
            A::Sp => "P(?g / ?f) & O(?g -> ?h / ?f) -> O(?h / ?f & ?g)",
            A::RM => "P(?g / ?f) & O(?h / ?f) -> O(?h / ?f & ?g)",
            A::DEX => "<>?f & O(?g / ?f) & O(~?g / ?f) -> O(?h / ?f)",
        }
    }

    pub fn schema(self) -> AxiomSchema {
        AxiomSchema { name: self, formula: parse(self.source()).expect("registry schema parses") }
    }
}

impl fmt::Display for AxiomName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for AxiomName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase();
        let key = match key.as_str() {
            "d*" | "dstar" | "d-star" => "dstar",
            "5" => "five",
            other => other,
        };
        AxiomName::ALL
            .into_iter()
            .find(|a| a.to_string().to_ascii_lowercase() == key)
            .ok_or_else(|| format!("unknown axiom `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomSchema {
    pub name: AxiomName,
    /// Formula over the metavariables `?f`, `?g`, `?h`.
    pub formula: Formula,
}

pub fn registry() -> Vec<AxiomSchema> {
    AxiomName::ALL.iter().map(|a| a.schema()).collect()
}

/// `(?f >= ?g) & (?g >= ?h) -> (?f >= ?h)`: transitivity of the weak
/// preference operator on formulas.
pub fn preference_transitivity() -> Formula {
    parse("(?f >= ?g) & (?g >= ?h) -> (?f >= ?h)").expect("parses")
}

/// Restricts the frames a check ranges over beyond the row's own
/// properties: extra properties plus axioms the frame must validate.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Background {
    pub properties: Vec<RelationProperty>,
    pub axioms: Vec<AxiomName>,
}

impl Background {
    pub fn none() -> Self {
        Background::default()
    }

    /// Limitedness for the rule's notion of best, plus D*.
    pub fn limited(rule: EvalRule) -> Self {
        let limited = match rule {
            EvalRule::Opt => RelationProperty::OptLimited,
            _ => RelationProperty::MaxLimited,
        };
        Background { properties: vec![limited], axioms: vec![AxiomName::Dstar] }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameWitness {
    pub frame: Relation,
    pub assignment: Assignment,
    pub falsified_at: WorldSet,
}

impl FrameWitness {
    pub fn to_json(&self) -> FrameWitnessJson {
        FrameWitnessJson::falsifying(&self.frame, &self.assignment, self.falsified_at)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckOutcome {
    Confirmed { frames_checked: u64 },
    /// Smallest frame (fewest worlds, then least relation) in the class on
    /// which the axiom fails.
    Counterexample(FrameWitness),
    Timeout,
}

impl CheckOutcome {
    pub fn is_confirmed(&self) -> bool {
        matches!(self, CheckOutcome::Confirmed { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            CheckOutcome::Confirmed { .. } => "confirmed",
            CheckOutcome::Counterexample(_) => "counterexample",
            CheckOutcome::Timeout => "timeout",
        }
    }

    pub fn witness(&self) -> Option<&FrameWitness> {
        match self {
            CheckOutcome::Counterexample(w) => Some(w),
            _ => None,
        }
    }
}

pub const MAX_CHECK_WORLDS: usize = 5;

fn union_props(a: &[RelationProperty], b: &[RelationProperty]) -> Vec<RelationProperty> {
    let mut out: Vec<_> = a.iter().chain(b).copied().collect();
    out.sort();
    out.dedup();
    out
}

/// Every frame of size `1..=max_n` with `properties` (and the background)
/// validates `axiom`, or the least frame that does not.
pub fn forward_check_with(
    properties: &[RelationProperty],
    background: &Background,
    axiom: &Formula,
    rule: EvalRule,
    max_n: usize,
    budget: &Budget,
) -> CheckOutcome {
    assert!((1..=MAX_CHECK_WORLDS).contains(&max_n), "bound {max_n} outside 1..={MAX_CHECK_WORLDS}");
    let schema = Schema::new(axiom).expect("axiom schemas use metavariables only");
    let background_schemas: Vec<Schema> = background
        .axioms
        .iter()
        .map(|a| Schema::new(&a.schema().formula).expect("registry schema"))
        .collect();
    let filter = FrameFilter::requiring(&union_props(properties, &background.properties));
    let mut frames_checked = 0;
    for n in 1..=max_n {
        let scan = scan_frames(n, &filter, budget, |r| {
            let frame = Frame::new(*r);
            if !background_schemas.iter().all(|s| s.check_frame(&frame, rule).is_valid()) {
                return None;
            }
            match schema.check_frame(&frame, rule) {
                FrameVerdict::Valid => None,
                FrameVerdict::Invalid(cx) => Some(cx),
            }
        });
        frames_checked += scan.frames_checked;
        if scan.timed_out {
            return CheckOutcome::Timeout;
        }
        if let Some((frame, cx)) = scan.hit {
            return CheckOutcome::Counterexample(FrameWitness {
                frame,
                assignment: cx.assignment,
                falsified_at: cx.falsified_at,
            });
        }
    }
    CheckOutcome::Confirmed { frames_checked }
}

/// `forwardCheck` without background assumptions.
pub fn forward_check(
    properties: &[RelationProperty],
    axiom: &AxiomSchema,
    rule: EvalRule,
    max_n: usize,
) -> CheckOutcome {
    forward_check_with(properties, &Background::none(), &axiom.formula, rule, max_n, &Budget::unlimited())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConverseOutcome {
    /// A frame validating the axiom but lacking the property.
    WitnessFrame(Relation),
    /// A model (fixed atoms standing for the metavariables) in which the
    /// instantiated axiom is valid but whose relation lacks the property.
    WitnessModel(PreferenceModel),
    NoneUpToBound,
    Timeout,
}

impl ConverseOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            ConverseOutcome::WitnessFrame(_) | ConverseOutcome::WitnessModel(_) => "witness",
            ConverseOutcome::NoneUpToBound => "none_up_to_bound",
            ConverseOutcome::Timeout => "timeout",
        }
    }
}

/// Looks for a frame on which `axiom` is valid but `property` fails.
pub fn converse_search(
    axiom: &AxiomSchema,
    property: RelationProperty,
    rule: EvalRule,
    max_n: usize,
) -> ConverseOutcome {
    converse_search_frames(axiom, property, rule, max_n, &Budget::unlimited())
}

pub fn converse_search_frames(
    axiom: &AxiomSchema,
    property: RelationProperty,
    rule: EvalRule,
    max_n: usize,
    budget: &Budget,
) -> ConverseOutcome {
    assert!((1..=MAX_CHECK_WORLDS).contains(&max_n), "bound {max_n} outside 1..={MAX_CHECK_WORLDS}");
    let schema = Schema::new(&axiom.formula).expect("axiom schemas use metavariables only");
    let filter = FrameFilter { forbidden: vec![property], ..FrameFilter::default() };
    for n in 1..=max_n {
        let scan = scan_frames(n, &filter, budget, |r| {
            schema.check_frame(&Frame::new(*r), rule).is_valid().then_some(())
        });
        if scan.timed_out {
            return ConverseOutcome::Timeout;
        }
        if let Some((frame, ())) = scan.hit {
            return ConverseOutcome::WitnessFrame(frame);
        }
    }
    ConverseOutcome::NoneUpToBound
}

/// Model-level converse: each metavariable `?x` becomes the atom `x`, and
/// valuations are searched along with frames.
pub fn converse_search_models(
    axiom: &AxiomSchema,
    property: RelationProperty,
    rule: EvalRule,
    max_n: usize,
    timeout: Option<std::time::Duration>,
) -> ConverseOutcome {
    let instance = axiom.formula.substitute(&|name| Some(Formula::atom(name)));
    let spec = SearchSpec::satisfy(vec![instance], rule, &[], max_n)
        .with_forbidden(&[property])
        .with_timeout(timeout);
    match find_model(&spec) {
        Ok(res) if res.is_found() => ConverseOutcome::WitnessModel(res.witness.expect("found")),
        Ok(res) if res.status == crate::finder::SearchStatus::Timeout => ConverseOutcome::Timeout,
        Ok(_) => ConverseOutcome::NoneUpToBound,
        Err(e) => panic!("model-level converse search rejected: {e}"),
    }
}

/// What a table row is expected to show.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Confirmed,
    Counterexample,
}

#[derive(Clone, Debug)]
pub struct TableRow {
    pub label: &'static str,
    pub properties: Vec<RelationProperty>,
    pub background: Background,
    pub axiom: AxiomName,
    pub expect: Expectation,
}

/// A property that is not expected to add validities.
#[derive(Clone, Debug)]
pub struct NegativeRow {
    pub label: &'static str,
    pub properties: Vec<RelationProperty>,
}

/// Candidate axioms probed on the negative rows.
pub const EXTENSION_AXIOMS: [AxiomName; 4] = [AxiomName::Dstar, AxiomName::CM, AxiomName::DR, AxiomName::Sp];

fn row(
    label: &'static str,
    properties: &[RelationProperty],
    background: Background,
    axiom: AxiomName,
) -> TableRow {
    TableRow { label, properties: properties.to_vec(), background, axiom, expect: Expectation::Confirmed }
}

fn base_rows(rule: EvalRule) -> Vec<TableRow> {
    [AxiomName::COK, AxiomName::Abs, AxiomName::Nec, AxiomName::Ext, AxiomName::Id, AxiomName::Sh]
        .into_iter()
        .map(|a| TableRow {
            label: "no property",
            properties: Vec::new(),
            background: Background::none(),
            axiom: a,
            expect: if rule == EvalRule::Lewis && a == AxiomName::COK {
                Expectation::Counterexample
            } else {
                Expectation::Confirmed
            },
        })
        .collect()
}

/// Rows of the correspondence table for `rule`, with the background each
/// row assumes.
pub fn table_rows(rule: EvalRule) -> (Vec<TableRow>, Vec<NegativeRow>) {
    use RelationProperty as P;
    let bg = || Background::limited(rule);
    let mut rows = base_rows(rule);
    let negative = match rule {
        EvalRule::Max => {
            rows.extend([
                row("limitedness", &[P::MaxLimited], Background::none(), AxiomName::Dstar),
                row("smoothness", &[P::MaxSmooth], bg(), AxiomName::CM),
                row("transitivity + totality", &[P::Total, P::Transitive], bg(), AxiomName::Sp),
                row("interval order", &[P::IntervalOrder], bg(), AxiomName::DR),
            ]);
            vec![
                NegativeRow { label: "reflexivity", properties: vec![P::Reflexive] },
                NegativeRow { label: "totality", properties: vec![P::Total] },
                NegativeRow { label: "transitivity", properties: vec![P::Transitive] },
            ]
        }
        EvalRule::Opt => {
            rows.extend([
                row("limitedness", &[P::OptLimited], Background::none(), AxiomName::Dstar),
                row("smoothness", &[P::OptSmooth], bg(), AxiomName::CM),
                row("transitivity", &[P::Transitive], bg(), AxiomName::Sp),
                row("interval order", &[P::IntervalOrder], bg(), AxiomName::DR),
            ]);
            vec![
                NegativeRow { label: "reflexivity", properties: vec![P::Reflexive] },
                NegativeRow { label: "totality", properties: vec![P::Total] },
                NegativeRow { label: "transitivity + totality", properties: vec![P::Total, P::Transitive] },
            ]
        }
        EvalRule::Lewis => {
            rows.extend([
                row("totality", &[P::Total], Background::none(), AxiomName::Dstar),
                row("transitivity", &[P::Transitive], Background::none(), AxiomName::Sp),
                row("transitivity + totality", &[P::Total, P::Transitive], Background::none(), AxiomName::COK),
                row("transitivity + totality", &[P::Total, P::Transitive], Background::none(), AxiomName::CM),
            ]);
            // the Lewis table has no negative rows
            Vec::new()
        }
    };
    (rows, negative)
}

#[derive(Clone, Debug, Serialize)]
pub struct DropReport {
    pub dropped: RelationProperty,
    pub remaining: Vec<RelationProperty>,
    pub outcome: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<FrameWitnessJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RowReport {
    pub rule: EvalRule,
    pub label: &'static str,
    pub properties: Vec<RelationProperty>,
    pub background: Background,
    pub axiom: AxiomName,
    pub bound: usize,
    pub expected: Expectation,
    pub outcome: &'static str,
    pub matches_expected: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frames_checked: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<FrameWitnessJson>,
    /// The same check with one property removed at a time.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub drops: Vec<DropReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NegativeReport {
    pub rule: EvalRule,
    pub label: &'static str,
    pub properties: Vec<RelationProperty>,
    pub bound: usize,
    /// Candidate axioms invalid on some frame in general but valid on every
    /// frame of the class up to the bound.
    pub added_validities_up_to_bound: Vec<AxiomName>,
    pub note: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub rule: EvalRule,
    pub bound: usize,
    pub rows: Vec<RowReport>,
    pub negative_rows: Vec<NegativeReport>,
}

impl SweepReport {
    pub fn all_match(&self) -> bool {
        self.rows.iter().all(|r| r.matches_expected)
    }
}

const NEGATIVE_NOTE: &str = "bounded evidence only; finite frames can validate axioms the property \
does not validate on infinite models, and absence of added validities up to the bound is not a proof";

fn outcome_witness(o: &CheckOutcome) -> Option<FrameWitnessJson> {
    o.witness().map(FrameWitness::to_json)
}

/// Runs every row of the table for `rule` up to `max_n` worlds.
pub fn table_sweep(rule: EvalRule, max_n: usize) -> SweepReport {
    table_sweep_with_budget(rule, max_n, &Budget::unlimited())
}

pub fn table_sweep_with_budget(rule: EvalRule, max_n: usize, budget: &Budget) -> SweepReport {
    assert!((1..=4).contains(&max_n), "sweep bound must be in 1..=4");
    let (rows, negatives) = table_rows(rule);
    let mut reports = Vec::new();
    for r in rows {
        let formula = r.axiom.schema().formula;
        let outcome = forward_check_with(&r.properties, &r.background, &formula, rule, max_n, budget);
        let drops = r
            .properties
            .iter()
            .map(|&dropped| {
                let remaining: Vec<_> = r.properties.iter().copied().filter(|p| *p != dropped).collect();
                let o = forward_check_with(&remaining, &r.background, &formula, rule, max_n, budget);
                DropReport { dropped, remaining, outcome: o.label(), witness: outcome_witness(&o) }
            })
            .collect();
        let matches_expected = match r.expect {
            Expectation::Confirmed => outcome.is_confirmed(),
            Expectation::Counterexample => matches!(outcome, CheckOutcome::Counterexample(_)),
        };
        reports.push(RowReport {
            rule,
            label: r.label,
            properties: r.properties,
            background: r.background,
            axiom: r.axiom,
            bound: max_n,
            expected: r.expect,
            outcome: outcome.label(),
            matches_expected,
            frames_checked: match outcome {
                CheckOutcome::Confirmed { frames_checked } => Some(frames_checked),
                _ => None,
            },
            witness: outcome_witness(&outcome),
            drops,
        });
    }
    let negative_rows = negatives
        .into_iter()
        .map(|neg| {
            let added = EXTENSION_AXIOMS
                .into_iter()
                .filter(|a| {
                    let f = a.schema().formula;
                    let general = forward_check_with(&[], &Background::none(), &f, rule, max_n, budget);
                    !general.is_confirmed()
                        && forward_check_with(&neg.properties, &Background::none(), &f, rule, max_n, budget)
                            .is_confirmed()
                })
                .collect();
            NegativeReport {
                rule,
                label: neg.label,
                properties: neg.properties,
                bound: max_n,
                added_validities_up_to_bound: added,
                note: NEGATIVE_NOTE,
            }
        })
        .collect();
    SweepReport { rule, bound: max_n, rows: reports, negative_rows }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConverseReport {
    pub rule: EvalRule,
    pub axiom: AxiomName,
    pub property: RelationProperty,
    pub bound: usize,
    pub level: &'static str,
    pub outcome: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frame_witness: Option<FrameWitnessJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model_witness: Option<ModelWitnessJson>,
}

impl ConverseReport {
    pub fn new(axiom: AxiomName, property: RelationProperty, rule: EvalRule, bound: usize, outcome: &ConverseOutcome) -> Self {
        let (level, frame_witness, model_witness) = match outcome {
            ConverseOutcome::WitnessFrame(r) => ("frame", Some(FrameWitnessJson::frame(r)), None),
            ConverseOutcome::WitnessModel(m) => ("model", None, Some(ModelWitnessJson::new(m))),
            _ => ("frame", None, None),
        };
        ConverseReport { rule, axiom, property, bound, level, outcome: outcome.label(), frame_witness, model_witness }
    }
}

/// DEX is frame-valid under one rule and refuted under another.
#[derive(Clone, Debug, Serialize)]
pub struct DexReport {
    pub bound: usize,
    pub max_outcome: &'static str,
    pub lewis_outcome: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lewis_witness: Option<FrameWitnessJson>,
}

pub fn dex_report(max_n: usize) -> DexReport {
    let dex = AxiomName::DEX.schema();
    let max = forward_check(&[], &dex, EvalRule::Max, max_n);
    let lewis = forward_check(&[], &dex, EvalRule::Lewis, max_n);
    DexReport {
        bound: max_n,
        max_outcome: max.label(),
        lewis_outcome: lewis.label(),
        lewis_witness: outcome_witness(&lewis),
    }
}

/// A pair of antecedent/consequent sets on which the three rules disagree.
#[derive(Clone, Debug, Serialize)]
pub struct CollapseMismatch {
    pub frame: FrameWitnessJson,
    pub antecedent: WorldSet,
    pub consequent: WorldSet,
    pub opt: bool,
    pub max: bool,
    pub lewis: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CollapseReport {
    pub bound: usize,
    pub properties: Vec<RelationProperty>,
    pub frames_checked: u64,
    pub collapsed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mismatch: Option<CollapseMismatch>,
}

/// Checks that the three conditionals agree on every pair of sets, on
/// every frame with `properties` up to `max_n` worlds.
pub fn rule_collapse(properties: &[RelationProperty], max_n: usize) -> CollapseReport {
    let filter = FrameFilter::requiring(properties);
    let budget = Budget::unlimited();
    let mut frames_checked = 0;
    for n in 1..=max_n {
        let scan = scan_frames(n, &filter, &budget, |r| {
            let frame = Frame::new(*r);
            let universe = frame.universe();
            for x in universe.subsets() {
                for y in universe.subsets() {
                    let opt = frame.cond_holds(EvalRule::Opt, y, x);
                    let max = frame.cond_holds(EvalRule::Max, y, x);
                    let lewis = frame.cond_holds(EvalRule::Lewis, y, x);
                    if opt != max || max != lewis {
                        return Some((x, y, opt, max, lewis));
                    }
                }
            }
            None
        });
        frames_checked += scan.frames_checked;
        if let Some((frame, (x, y, opt, max, lewis))) = scan.hit {
            return CollapseReport {
                bound: max_n,
                properties: properties.to_vec(),
                frames_checked,
                collapsed: false,
                mismatch: Some(CollapseMismatch {
                    frame: FrameWitnessJson::frame(&frame),
                    antecedent: x,
                    consequent: y,
                    opt,
                    max,
                    lewis,
                }),
            };
        }
    }
    CollapseReport { bound: max_n, properties: properties.to_vec(), frames_checked, collapsed: true, mismatch: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use RelationProperty as P;

    #[test]
    fn registry_is_complete_and_parses() {
        let reg = registry();
        assert_eq!(reg.len(), 15);
        for a in &reg {
            assert!(a.formula.atoms().is_empty(), "{}", a.name);
            assert!(!a.formula.metavars().is_empty(), "{}", a.name);
        }
    }

    #[test]
    fn axiom_names_parse() {
        assert_eq!("D*".parse::<AxiomName>(), Ok(AxiomName::Dstar));
        assert_eq!("cm".parse::<AxiomName>(), Ok(AxiomName::CM));
        assert_eq!("Five".parse::<AxiomName>(), Ok(AxiomName::Five));
        assert!("Q".parse::<AxiomName>().is_err());
    }

    #[test]
    fn forward_examples() {
        assert!(forward_check(&[P::MaxLimited], &AxiomName::Dstar.schema(), EvalRule::Max, 3).is_confirmed());
        assert!(forward_check(&[P::MaxSmooth], &AxiomName::CM.schema(), EvalRule::Max, 3).is_confirmed());
        let cx = forward_check(&[P::Transitive], &AxiomName::Sp.schema(), EvalRule::Max, 3);
        let w = cx.witness().expect("counterexample");
        assert!(P::Transitive.holds(&w.frame));
        assert!(!crate::semantics::valid_on_frame(&AxiomName::Sp.schema().formula, &w.frame, EvalRule::Max)
            .unwrap()
            .is_valid());
    }

    #[test]
    fn converse_identity_has_trivial_witness() {
        let out = converse_search(&AxiomName::Id.schema(), P::Transitive, EvalRule::Max, 3);
        let ConverseOutcome::WitnessFrame(frame) = out else { panic!("expected witness") };
        assert!(!P::Transitive.holds(&frame));
    }

    #[test]
    fn dstar_converse_finds_nothing_on_small_frames() {
        let out = converse_search(&AxiomName::Dstar.schema(), P::MaxLimited, EvalRule::Max, 3);
        assert_eq!(out, ConverseOutcome::NoneUpToBound);
    }

    #[test]
    fn model_level_cm_witness_is_non_smooth() {
        let out = converse_search_models(&AxiomName::CM.schema(), P::MaxSmooth, EvalRule::Max, 3, None);
        let ConverseOutcome::WitnessModel(m) = out else { panic!("expected model witness") };
        assert!(!P::MaxSmooth.holds(m.betterness()));
        let instance = AxiomName::CM.schema().formula.substitute(&|n| Some(Formula::atom(n)));
        assert!(crate::semantics::valid_in_model(&instance, &m, EvalRule::Max).unwrap());
    }

    #[test]
    fn collapse_fails_without_properties() {
        let rep = rule_collapse(&[], 2);
        assert!(!rep.collapsed);
        assert!(rule_collapse(&[P::Reflexive, P::Total, P::Transitive], 3).collapsed);
    }
}
