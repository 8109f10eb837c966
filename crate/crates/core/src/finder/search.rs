use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::formula::Formula;
use crate::model::{PreferenceModel, Relation, WorldSet};
use crate::relprops::RelationProperty;
use crate::semantics::{Compiled, EvalRule, Frame, Leaf};

use super::enumerate::{scan_frames, Budget, FrameFilter, MAX_ENUM_WORLDS, MAX_PLAIN_WORLDS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    /// Every target true at every world.
    Satisfy,
    /// Some target false at some world.
    Refute,
}

/// What to look for and where.
#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub min_n: usize,
    pub max_n: usize,
    pub properties: Vec<RelationProperty>,
    /// Frames must lack each of these.
    pub forbidden: Vec<RelationProperty>,
    pub rule: EvalRule,
    pub targets: Vec<Formula>,
    pub mode: SearchMode,
    /// Atoms whose valuations range over all subsets; the first listed is
    /// the most significant in the search order.
    pub atoms: Vec<String>,
    pub iso_reject: bool,
    pub timeout: Option<Duration>,
}

impl SearchSpec {
    /// Satisfy-mode spec over sizes `1..=max_n` using exactly the atoms of
    /// the targets (sorted).
    pub fn satisfy(targets: Vec<Formula>, rule: EvalRule, properties: &[RelationProperty], max_n: usize) -> Self {
        let atoms = targets
            .iter()
            .flat_map(Formula::atoms)
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        SearchSpec {
            min_n: 1,
            max_n,
            properties: properties.to_vec(),
            forbidden: Vec::new(),
            rule,
            targets,
            mode: SearchMode::Satisfy,
            atoms,
            iso_reject: false,
            timeout: None,
        }
    }

    pub fn refute(targets: Vec<Formula>, rule: EvalRule, properties: &[RelationProperty], max_n: usize) -> Self {
        SearchSpec { mode: SearchMode::Refute, ..SearchSpec::satisfy(targets, rule, properties, max_n) }
    }

    pub fn with_iso_reject(mut self, on: bool) -> Self {
        self.iso_reject = on;
        self
    }

    pub fn with_forbidden(mut self, forbidden: &[RelationProperty]) -> Self {
        self.forbidden = forbidden.to_vec();
        self
    }

    pub fn with_atoms(mut self, atoms: Vec<String>) -> Self {
        self.atoms = atoms;
        self
    }

    pub fn with_sizes(mut self, min_n: usize, max_n: usize) -> Self {
        self.min_n = min_n;
        self.max_n = max_n;
        self
    }

    pub fn with_timeout(mut self, timeout: Option<Duration>) -> Self {
        self.timeout = timeout;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("no target formulas")]
    NoTargets,
    #[error("target contains metavariables: {0}")]
    MetaVarTarget(String),
    #[error("atom `{0}` occurs in a target but is not searched")]
    UncoveredAtom(String),
    #[error("size bound {0} out of range (1..={MAX_PLAIN_WORLDS}, or ..={MAX_ENUM_WORLDS} with isomorph rejection)")]
    BadBound(usize),
    #[error("too many searched atoms ({0})")]
    TooManyAtoms(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Found,
    UnsatUpToBound,
    Timeout,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub status: SearchStatus,
    pub witness: Option<PreferenceModel>,
    /// Admitted frames examined, in search order, up to the witness.
    pub frames_checked: u64,
    /// Largest size fully searched without a hit.
    pub exhausted_up_to: usize,
    pub elapsed: Duration,
}

impl SearchResult {
    pub fn is_found(&self) -> bool {
        self.status == SearchStatus::Found
    }
}

struct Target {
    compiled: Compiled,
    // compiled leaf k reads values[atom_index[k]]
    atom_index: Vec<usize>,
    // number of leading atoms that must be fixed before evaluation
    ready_at: usize,
}

struct Prepared {
    targets: Vec<Target>,
    atom_count: usize,
    mode: SearchMode,
    rule: EvalRule,
}

fn prepare(spec: &SearchSpec) -> Result<Prepared, SearchError> {
    if spec.targets.is_empty() {
        return Err(SearchError::NoTargets);
    }
    let cap = if spec.iso_reject { MAX_ENUM_WORLDS } else { MAX_PLAIN_WORLDS };
    if spec.max_n == 0 || spec.max_n > cap || spec.min_n == 0 {
        return Err(SearchError::BadBound(spec.max_n));
    }
    if spec.atoms.len() > 8 {
        return Err(SearchError::TooManyAtoms(spec.atoms.len()));
    }
    let mut targets = Vec::new();
    for f in &spec.targets {
        if !f.metavars().is_empty() {
            return Err(SearchError::MetaVarTarget(f.to_string()));
        }
        let compiled = Compiled::new(f);
        let mut atom_index = Vec::new();
        for leaf in compiled.leaves() {
            let Leaf::Atom(name) = leaf else { unreachable!("metavariables rejected") };
            let k = spec
                .atoms
                .iter()
                .position(|a| a == name)
                .ok_or_else(|| SearchError::UncoveredAtom(name.clone()))?;
            atom_index.push(k);
        }
        let ready_at = atom_index.iter().map(|k| k + 1).max().unwrap_or(0);
        targets.push(Target { compiled, atom_index, ready_at });
    }
    Ok(Prepared { targets, atom_count: spec.atoms.len(), mode: spec.mode, rule: spec.rule })
}

impl Prepared {
    fn holds(&self, t: &Target, frame: &Frame, values: &[WorldSet], scratch: &mut Scratch) -> bool {
        scratch.slots.clear();
        scratch.slots.extend(t.atom_index.iter().map(|&k| values[k]));
        t.compiled.eval_with(frame, self.rule, &scratch.slots, &mut scratch.stack) == frame.universe()
    }

    /// Depth-first over valuations in lexicographic order; returns the first
    /// valuation meeting the mode.
    fn search(&self, frame: &Frame) -> Option<Vec<WorldSet>> {
        let mut values = vec![WorldSet::EMPTY; self.atom_count];
        let mut scratch = Scratch { slots: Vec::new(), stack: Vec::with_capacity(16) };
        self.descend(frame, 0, &mut values, &mut scratch).then_some(values)
    }

    fn descend(&self, frame: &Frame, depth: usize, values: &mut [WorldSet], scratch: &mut Scratch) -> bool {
        let ready = self.targets.iter().filter(|t| t.ready_at == depth);
        match self.mode {
            SearchMode::Satisfy => {
                for t in ready {
                    if !self.holds(t, frame, values, scratch) {
                        return false;
                    }
                }
            }
            SearchMode::Refute => {
                for t in ready {
                    if !self.holds(t, frame, values, scratch) {
                        // later atoms stay empty: the least completion
                        for v in values[depth..].iter_mut() {
                            *v = WorldSet::EMPTY;
                        }
                        return true;
                    }
                }
            }
        }
        if depth == self.atom_count {
            return self.mode == SearchMode::Satisfy;
        }
        for subset in frame.universe().subsets() {
            values[depth] = subset;
            if self.descend(frame, depth + 1, values, scratch) {
                return true;
            }
        }
        values[depth] = WorldSet::EMPTY;
        false
    }
}

struct Scratch {
    slots: Vec<WorldSet>,
    stack: Vec<WorldSet>,
}

fn build_model(frame: &Relation, atoms: &[String], values: Vec<WorldSet>) -> PreferenceModel {
    PreferenceModel::with_valuation(*frame, atoms.iter().cloned().zip(values))
}

/// Smallest model (fewest worlds, then least relation, then least
/// valuation) meeting the spec's mode.
pub fn find_model(spec: &SearchSpec) -> Result<SearchResult, SearchError> {
    let prepared = prepare(spec)?;
    let started = Instant::now();
    let budget = Budget::new(spec.timeout);
    let filter = FrameFilter {
        required: spec.properties.clone(),
        forbidden: spec.forbidden.clone(),
        iso_reject: spec.iso_reject,
    };
    let mut frames_checked = 0u64;
    let mut exhausted_up_to = spec.min_n - 1;
    for n in spec.min_n..=spec.max_n {
        let scan = scan_frames(n, &filter, &budget, |r| prepared.search(&Frame::new(*r)));
        frames_checked += scan.frames_checked;
        if scan.timed_out {
            return Ok(SearchResult {
                status: SearchStatus::Timeout,
                witness: None,
                frames_checked,
                exhausted_up_to,
                elapsed: started.elapsed(),
            });
        }
        if let Some((frame, values)) = scan.hit {
            return Ok(SearchResult {
                status: SearchStatus::Found,
                witness: Some(build_model(&frame, &spec.atoms, values)),
                frames_checked,
                exhausted_up_to,
                elapsed: started.elapsed(),
            });
        }
        exhausted_up_to = n;
    }
    Ok(SearchResult {
        status: SearchStatus::UnsatUpToBound,
        witness: None,
        frames_checked,
        exhausted_up_to,
        elapsed: started.elapsed(),
    })
}

/// `findSatisfyingModel`: the spec's mode decides between satisfying and
/// refuting.
pub fn find_satisfying_model(spec: &SearchSpec) -> Result<SearchResult, SearchError> {
    find_model(spec)
}

/// Every model meeting a Satisfy-mode spec, in search order. Intended for
/// small bounds only.
pub fn all_models(spec: &SearchSpec) -> Result<Vec<PreferenceModel>, SearchError> {
    let prepared = prepare(spec)?;
    let filter = FrameFilter {
        required: spec.properties.clone(),
        forbidden: spec.forbidden.clone(),
        iso_reject: spec.iso_reject,
    };
    let mut out = Vec::new();
    for n in spec.min_n..=spec.max_n {
        for r in super::enumerate::enumerate_frames(n, &[], filter.iso_reject) {
            if !filter.admits_properties(&r) {
                continue;
            }
            let frame = Frame::new(r);
            let universe = frame.universe();
            let count = prepared.atom_count;
            let total = 1u64 << (n * count);
            let mut scratch = Scratch { slots: Vec::new(), stack: Vec::new() };
            for index in 0..total {
                let values: Vec<WorldSet> = (0..count)
                    .map(|k| {
                        let shift = n * (count - 1 - k);
                        WorldSet::from_bits((index >> shift) as u16 & universe.bits())
                    })
                    .collect();
                let ok = prepared
                    .targets
                    .iter()
                    .all(|t| prepared.holds(t, &frame, &values, &mut scratch));
                let keep = match spec.mode {
                    SearchMode::Satisfy => ok,
                    SearchMode::Refute => !ok,
                };
                if keep {
                    out.push(build_model(&r, &spec.atoms, values));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::semantics::valid_in_model;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn conflicting_obligations_explode_under_max() {
        let targets = vec![f("O(p / T)"), f("O(~p / T)"), f("<>T"), f("~O(q / T)")];
        let spec = SearchSpec::satisfy(targets, EvalRule::Max, &[], 3);
        let res = find_model(&spec).unwrap();
        assert_eq!(res.status, SearchStatus::UnsatUpToBound);
        assert_eq!(res.exhausted_up_to, 3);
    }

    #[test]
    fn found_models_revalidate() {
        let targets = vec![f("O(p / T)"), f("~O(q / p)"), f("<>~p")];
        for rule in EvalRule::ALL {
            let spec = SearchSpec::satisfy(targets.clone(), rule, &[], 3);
            let res = find_model(&spec).unwrap();
            let m = res.witness.expect("satisfiable");
            for t in &targets {
                assert!(valid_in_model(t, &m, rule).unwrap(), "{rule} {t}");
            }
        }
    }

    #[test]
    fn refute_mode_finds_smallest_countermodel() {
        let spec = SearchSpec::refute(vec![f("p -> O(p / T)")], EvalRule::Opt, &[], 3);
        let res = find_model(&spec).unwrap();
        let m = res.witness.unwrap();
        assert!(!valid_in_model(&f("p -> O(p / T)"), &m, EvalRule::Opt).unwrap());
        // valid on every one-world frame; least countermodel has 1 >= 0, 1 >= 1
        assert_eq!(m.world_count(), 2);
        assert_eq!(*m.betterness(), Relation::from_pairs(2, [(1, 0), (1, 1)]));
        assert_eq!(m.extension("p"), Some(WorldSet::singleton(0)));
    }

    #[test]
    fn iso_reject_does_not_change_the_witness() {
        let targets = vec![f("O(p / T)"), f("P(q / p)"), f("~O(q / T)")];
        let plain = find_model(&SearchSpec::satisfy(targets.clone(), EvalRule::Max, &[], 3)).unwrap();
        let iso = find_model(&SearchSpec::satisfy(targets, EvalRule::Max, &[], 3).with_iso_reject(true)).unwrap();
        assert_eq!(plain.witness, iso.witness);
    }

    #[test]
    fn spec_errors() {
        assert_eq!(
            find_model(&SearchSpec::satisfy(vec![], EvalRule::Max, &[], 2)).unwrap_err(),
            SearchError::NoTargets
        );
        assert!(matches!(
            find_model(&SearchSpec::satisfy(vec![f("?x")], EvalRule::Max, &[], 2)),
            Err(SearchError::MetaVarTarget(_))
        ));
        let spec = SearchSpec::satisfy(vec![f("p")], EvalRule::Max, &[], 2).with_atoms(vec![]);
        assert_eq!(find_model(&spec).unwrap_err(), SearchError::UncoveredAtom("p".into()));
        let spec = SearchSpec::satisfy(vec![f("p")], EvalRule::Max, &[], 6);
        assert_eq!(find_model(&spec).unwrap_err(), SearchError::BadBound(6));
    }

    #[test]
    fn all_models_agrees_with_first_model() {
        let spec = SearchSpec::satisfy(vec![f("O(p / T)"), f("<>~p")], EvalRule::Max, &[], 2);
        let all = all_models(&spec).unwrap();
        let first = find_model(&spec).unwrap().witness.unwrap();
        assert_eq!(all.first(), Some(&first));
        for m in &all {
            assert!(valid_in_model(&f("O(p / T) & <>~p"), m, EvalRule::Max).unwrap());
        }
    }
}
