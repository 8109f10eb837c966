//! Truth conditions under the three rules for conditional obligation.
//!
//! Deontic and alethic formulas are world-independent: their extension is
//! either empty or the whole universe. `[]` is the universal modality.

mod compiled;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::formula::Formula;
use crate::model::{PreferenceModel, Relation, WorldSet};

pub use compiled::{Compiled, Leaf};

/// Which truth condition is used for `O(consequent / antecedent)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalRule {
    /// Best antecedent-worlds are the optimal ones.
    Opt,
    /// Best antecedent-worlds are the maximal ones.
    Max,
    /// No antecedent-world, or some antecedent-and-consequent world whose
    /// every at-least-as-good world satisfies antecedent -> consequent.
    Lewis,
}

impl EvalRule {
    pub const ALL: [EvalRule; 3] = [EvalRule::Opt, EvalRule::Max, EvalRule::Lewis];

    pub fn selection(self) -> Option<Selection> {
        match self {
            EvalRule::Opt => Some(Selection::Opt),
            EvalRule::Max => Some(Selection::Max),
            EvalRule::Lewis => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EvalRule::Opt => "opt",
            EvalRule::Max => "max",
            EvalRule::Lewis => "lewis",
        }
    }
}

impl fmt::Display for EvalRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EvalRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "opt" => Ok(EvalRule::Opt),
            "max" => Ok(EvalRule::Max),
            "lewis" | "ea" | "exists-forall" => Ok(EvalRule::Lewis),
            other => Err(format!("unknown rule `{other}` (expected opt, max or lewis)")),
        }
    }
}

/// The two notions of "best".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Selection {
    Opt,
    Max,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("metavariable `?{0}` has no assignment")]
    UnboundMetaVar(String),
    #[error("atom `{0}` has no valuation (strict atoms)")]
    UnboundAtom(String),
    #[error("formula contains metavariables; use frame validity instead")]
    HasMetaVars,
    #[error("schema contains the ordinary atom `{0}`; frame validity needs metavariables only")]
    HasAtoms(String),
}

/// A betterness relation with the derived lookups evaluation needs.
#[derive(Clone, Debug)]
pub struct Frame {
    relation: Relation,
    universe: WorldSet,
    // succ[a] = {b : a >= b}; pred[a] = {b : b >= a}; beaten_by[a] = {b : b > a}
    succ: [u16; 16],
    pred: [u16; 16],
    beaten_by: [u16; 16],
}

impl Frame {
    pub fn new(relation: Relation) -> Self {
        let n = relation.len();
        let mut succ = [0u16; 16];
        let mut pred = [0u16; 16];
        let mut beaten_by = [0u16; 16];
        for a in 0..n {
            succ[a] = relation.successors(a).bits();
            pred[a] = relation.predecessors(a).bits();
        }
        for a in 0..n {
            beaten_by[a] = pred[a] & !succ[a];
        }
        Frame { relation, universe: relation.universe(), succ, pred, beaten_by }
    }

    pub fn relation(&self) -> &Relation {
        &self.relation
    }

    pub fn universe(&self) -> WorldSet {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.relation.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Optimal elements: members of `x` at least as good as every member.
    pub fn opt(&self, x: WorldSet) -> WorldSet {
        let xb = x.bits();
        let mut out = 0u16;
        for a in x.iter() {
            if xb & !self.succ[a] == 0 {
                out |= 1 << a;
            }
        }
        WorldSet::from_bits(out)
    }

    /// Maximal elements: members of `x` not strictly bettered inside `x`.
    pub fn max(&self, x: WorldSet) -> WorldSet {
        let xb = x.bits();
        let mut out = 0u16;
        for a in x.iter() {
            if self.beaten_by[a] & xb == 0 {
                out |= 1 << a;
            }
        }
        WorldSet::from_bits(out)
    }

    pub fn best(&self, selection: Selection, x: WorldSet) -> WorldSet {
        match selection {
            Selection::Opt => self.opt(x),
            Selection::Max => self.max(x),
        }
    }

    /// Worlds strictly better than `a`.
    pub fn strictly_above(&self, a: usize) -> WorldSet {
        WorldSet::from_bits(self.beaten_by[a])
    }

    /// Does `O(y / x)` hold?
    pub fn cond_holds(&self, rule: EvalRule, y: WorldSet, x: WorldSet) -> bool {
        match rule {
            EvalRule::Opt => self.opt(x).is_subset_of(y),
            EvalRule::Max => self.max(x).is_subset_of(y),
            EvalRule::Lewis => {
                if x.is_empty() {
                    return true;
                }
                let safe = x.complement_in(self.universe).union(y).bits();
                x.intersect(y).iter().any(|b| self.pred[b] & !safe == 0)
            }
        }
    }
}

/// `bestSet` of the given selection over `x`.
pub fn best_set(selection: Selection, x: WorldSet, model: &PreferenceModel) -> WorldSet {
    Frame::new(*model.betterness()).best(selection, x)
}

/// `condHolds(rule, y, x)`: the extensional truth condition of `O(y / x)`.
pub fn cond_holds(rule: EvalRule, y: WorldSet, x: WorldSet, model: &PreferenceModel) -> bool {
    Frame::new(*model.betterness()).cond_holds(rule, y, x)
}

/// Metavariable assignment.
pub type Assignment = BTreeMap<String, WorldSet>;

fn resolve(
    compiled: &Compiled,
    model: &PreferenceModel,
    assignment: &Assignment,
    strict_atoms: bool,
) -> Result<Vec<WorldSet>, EvalError> {
    let universe = model.universe();
    compiled
        .leaves()
        .iter()
        .map(|leaf| match leaf {
            Leaf::Atom(name) => match model.extension(name) {
                Some(set) => Ok(set),
                None if strict_atoms => Err(EvalError::UnboundAtom(name.clone())),
                None => Ok(WorldSet::EMPTY),
            },
            Leaf::Meta(name) => assignment
                .get(name)
                .map(|s| s.intersect(universe))
                .ok_or_else(|| EvalError::UnboundMetaVar(name.clone())),
        })
        .collect()
}

/// The set of worlds where `f` is true. Atoms missing from the valuation
/// denote the empty set.
pub fn truth_set(
    f: &Formula,
    model: &PreferenceModel,
    assignment: &Assignment,
    rule: EvalRule,
) -> Result<WorldSet, EvalError> {
    let compiled = Compiled::new(f);
    let slots = resolve(&compiled, model, assignment, false)?;
    Ok(compiled.eval(&Frame::new(*model.betterness()), rule, &slots))
}

/// Like [`truth_set`] but an atom without a valuation entry is an error.
pub fn truth_set_strict(
    f: &Formula,
    model: &PreferenceModel,
    assignment: &Assignment,
    rule: EvalRule,
) -> Result<WorldSet, EvalError> {
    let compiled = Compiled::new(f);
    let slots = resolve(&compiled, model, assignment, true)?;
    Ok(compiled.eval(&Frame::new(*model.betterness()), rule, &slots))
}

/// True at every world of the model. `f` must be metavariable-free.
pub fn valid_in_model(f: &Formula, model: &PreferenceModel, rule: EvalRule) -> Result<bool, EvalError> {
    if !f.metavars().is_empty() {
        return Err(EvalError::HasMetaVars);
    }
    Ok(truth_set(f, model, &Assignment::new(), rule)? == model.universe())
}

/// First falsifying assignment found on a frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameCounterexample {
    pub assignment: Assignment,
    pub falsified_at: WorldSet,
}

/// Outcome of a frame-validity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FrameVerdict {
    Valid,
    Invalid(FrameCounterexample),
}

impl FrameVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, FrameVerdict::Valid)
    }
}

/// A schema prepared for repeated frame-validity checks.
#[derive(Clone, Debug)]
pub struct Schema {
    compiled: Compiled,
    metas: Vec<String>,
}

impl Schema {
    pub fn new(schema: &Formula) -> Result<Self, EvalError> {
        if let Some(atom) = schema.atoms().into_iter().next() {
            return Err(EvalError::HasAtoms(atom));
        }
        let compiled = Compiled::new(schema);
        let metas = compiled
            .leaves()
            .iter()
            .map(|leaf| match leaf {
                Leaf::Meta(name) => name.clone(),
                Leaf::Atom(_) => unreachable!("atoms rejected above"),
            })
            .collect();
        Ok(Schema { compiled, metas })
    }

    /// Metavariable names in slot order (sorted).
    pub fn metavars(&self) -> &[String] {
        &self.metas
    }

    /// Tries every assignment of subsets to the metavariables, in
    /// lexicographic order with the alphabetically first metavariable most
    /// significant; reports the first that falsifies the schema somewhere.
    pub fn check_frame(&self, frame: &Frame, rule: EvalRule) -> FrameVerdict {
        let n = frame.len();
        let k = self.metas.len();
        let universe = frame.universe();
        let mut slots = vec![WorldSet::EMPTY; k];
        let mut stack = Vec::with_capacity(16);
        let total: u64 = 1u64 << (n * k);
        for index in 0..total {
            for (pos, slot) in slots.iter_mut().enumerate() {
                let shift = n * (k - 1 - pos);
                *slot = WorldSet::from_bits(((index >> shift) as u16) & universe.bits());
            }
            let value = self.compiled.eval_with(frame, rule, &slots, &mut stack);
            if value != universe {
                let assignment = self.metas.iter().cloned().zip(slots.iter().copied()).collect();
                return FrameVerdict::Invalid(FrameCounterexample {
                    assignment,
                    falsified_at: value.complement_in(universe),
                });
            }
        }
        FrameVerdict::Valid
    }
}

/// Frame validity: valid in every model on the frame, i.e. under every
/// assignment of world-sets to the schema's metavariables.
pub fn valid_on_frame(schema: &Formula, frame: &Relation, rule: EvalRule) -> Result<FrameVerdict, EvalError> {
    Ok(Schema::new(schema)?.check_frame(&Frame::new(*frame), rule))
}

/// Default ceiling on frame size for frame-validity sweeps, by metavariable
/// count: 4 worlds for up to two metavariables, 3 beyond.
pub fn default_frame_bound(metavar_count: usize) -> usize {
    if metavar_count <= 2 {
        4
    } else {
        3
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn model(n: usize, pairs: &[(usize, usize)], val: &[(&str, &[usize])]) -> PreferenceModel {
        PreferenceModel::with_valuation(
            Relation::from_pairs(n, pairs.iter().copied()),
            val.iter()
                .map(|(a, ws)| (a.to_string(), WorldSet::from_worlds(ws.iter().copied()))),
        )
    }

    fn ws(worlds: &[usize]) -> WorldSet {
        WorldSet::from_worlds(worlds.iter().copied())
    }

    #[test]
    fn best_sets_two_worlds() {
        let m = model(2, &[(0, 0), (1, 1), (1, 0)], &[]);
        assert_eq!(best_set(Selection::Opt, ws(&[0, 1]), &m), ws(&[1]));
        assert_eq!(best_set(Selection::Max, ws(&[0, 1]), &m), ws(&[1]));
        assert!(best_set(Selection::Opt, WorldSet::EMPTY, &m).is_empty());
        assert!(best_set(Selection::Max, WorldSet::EMPTY, &m).is_empty());
        let bare = model(2, &[], &[]);
        assert!(best_set(Selection::Opt, ws(&[0, 1]), &bare).is_empty());
        assert_eq!(best_set(Selection::Max, ws(&[0, 1]), &bare), ws(&[0, 1]));
    }

    #[test]
    fn empty_antecedent_is_vacuous() {
        let m = model(2, &[(0, 1)], &[]);
        for rule in EvalRule::ALL {
            assert!(cond_holds(rule, WorldSet::EMPTY, WorldSet::EMPTY, &m));
        }
    }

    #[test]
    fn cond_holds_regressions() {
        let m = model(2, &[(0, 0), (1, 1), (1, 0)], &[]);
        for rule in EvalRule::ALL {
            assert!(cond_holds(rule, ws(&[1]), ws(&[0, 1]), &m), "{rule}");
        }
        let bare = model(2, &[], &[]);
        assert!(!cond_holds(EvalRule::Max, ws(&[1]), ws(&[0, 1]), &bare));
        assert!(cond_holds(EvalRule::Opt, ws(&[1]), ws(&[0, 1]), &bare));
        assert!(cond_holds(EvalRule::Lewis, ws(&[1]), ws(&[0, 1]), &bare));
    }

    #[test]
    fn truth_sets() {
        let m = model(2, &[(0, 0), (1, 1), (1, 0)], &[("p", &[1])]);
        let none = Assignment::new();
        let t = |s: &str, rule| truth_set(&parse(s).unwrap(), &m, &none, rule).unwrap();
        assert_eq!(t("p", EvalRule::Max), ws(&[1]));
        assert_eq!(t("[](p | ~p)", EvalRule::Max), m.universe());
        assert_eq!(t("O(p / T)", EvalRule::Opt), m.universe());
        assert_eq!(t("q", EvalRule::Opt), WorldSet::EMPTY);
        assert_eq!(t("<>p & ~p", EvalRule::Opt), ws(&[0]));
        assert_eq!(t("p >= ~p", EvalRule::Max), m.universe());
        assert_eq!(t("~p > p", EvalRule::Max), WorldSet::EMPTY);
    }

    #[test]
    fn strict_atoms_rejects_missing_valuation() {
        let m = model(1, &[], &[]);
        let f = parse("q").unwrap();
        assert_eq!(
            truth_set_strict(&f, &m, &Assignment::new(), EvalRule::Max),
            Err(EvalError::UnboundAtom("q".into()))
        );
    }

    #[test]
    fn unbound_metavariable_is_an_error() {
        let m = model(1, &[], &[]);
        let f = parse("?x").unwrap();
        assert!(matches!(
            truth_set(&f, &m, &Assignment::new(), EvalRule::Opt),
            Err(EvalError::UnboundMetaVar(_))
        ));
        assert_eq!(valid_in_model(&f, &m, EvalRule::Opt), Err(EvalError::HasMetaVars));
    }

    #[test]
    fn unconditional_obligation_fails_with_empty_extension() {
        let m = model(2, &[(0, 0), (1, 1)], &[("p", &[])]);
        assert!(!valid_in_model(&parse("O(p / T)").unwrap(), &m, EvalRule::Max).unwrap());
    }

    #[test]
    fn identity_instance_holds_in_small_models() {
        let f = parse("O(p / p)").unwrap();
        for n in 1..=2 {
            for code in 0..1u64 << (n * n) {
                for p in WorldSet::universe(n).subsets() {
                    let mut m = PreferenceModel::new(Relation::from_code(n, code));
                    m.assign("p", p);
                    assert!(valid_in_model(&f, &m, EvalRule::Opt).unwrap() || !p.is_empty());
                    assert!(valid_in_model(&f, &m, EvalRule::Max).unwrap() || !p.is_empty());
                }
            }
        }
    }

    #[test]
    fn frame_validity_rejects_atoms() {
        let f = parse("O(p / ?f)").unwrap();
        assert_eq!(
            valid_on_frame(&f, &Relation::empty(1), EvalRule::Max),
            Err(EvalError::HasAtoms("p".into()))
        );
    }

    #[test]
    fn dstar_fails_on_strict_cycle_under_max() {
        let f = parse("<>?f -> (O(?g / ?f) -> P(?g / ?f))").unwrap();
        let cycle = Relation::from_pairs(3, [(0, 1), (1, 2), (2, 0)]);
        let verdict = valid_on_frame(&f, &cycle, EvalRule::Max).unwrap();
        let FrameVerdict::Invalid(cx) = verdict else { panic!("expected counterexample") };
        assert_eq!(cx.assignment["f"], WorldSet::universe(3));
        assert_eq!(cx.assignment["g"], WorldSet::EMPTY);
    }

    #[test]
    fn cok_fails_on_two_world_frame_under_lewis() {
        let cok = parse("O(?g -> ?h / ?f) -> (O(?g / ?f) -> O(?h / ?f))").unwrap();
        let frame = Relation::from_pairs(2, [(0, 0), (1, 1)]);
        assert!(!valid_on_frame(&cok, &frame, EvalRule::Lewis).unwrap().is_valid());
    }
}
