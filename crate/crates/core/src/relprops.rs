//! Properties of betterness relations and bounded checks of implications
//! between them.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::model::Relation;
use crate::semantics::{Frame, Selection};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RelationProperty {
    Reflexive,
    Total,
    Transitive,
    QuasiTransitive,
    Acyclic,
    SuzumuraConsistent,
    Ferrers,
    IntervalOrder,
    OptLimited,
    MaxLimited,
    OptSmooth,
    MaxSmooth,
}

impl RelationProperty {
    pub const ALL: [RelationProperty; 12] = [
        RelationProperty::Reflexive,
        RelationProperty::Total,
        RelationProperty::Transitive,
        RelationProperty::QuasiTransitive,
        RelationProperty::Acyclic,
        RelationProperty::SuzumuraConsistent,
        RelationProperty::Ferrers,
        RelationProperty::IntervalOrder,
        RelationProperty::OptLimited,
        RelationProperty::MaxLimited,
        RelationProperty::OptSmooth,
        RelationProperty::MaxSmooth,
    ];

    /// Command-line spelling.
    pub fn slug(self) -> &'static str {
        use RelationProperty as P;
        match self {
            P::Reflexive => "reflexive",
            P::Total => "total",
            P::Transitive => "transitive",
            P::QuasiTransitive => "quasi-transitive",
            P::Acyclic => "acyclic",
            P::SuzumuraConsistent => "suzumura",
            P::Ferrers => "ferrers",
            P::IntervalOrder => "interval-order",
            P::OptLimited => "opt-limited",
            P::MaxLimited => "max-limited",
            P::OptSmooth => "opt-smooth",
            P::MaxSmooth => "max-smooth",
        }
    }

    pub fn holds(self, rel: &Relation) -> bool {
        check_property(self, rel)
    }
}

impl fmt::Display for RelationProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for RelationProperty {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .map(|c| c.to_ascii_lowercase())
            .collect();
        let found = RelationProperty::ALL.into_iter().find(|p| {
            let slug: String = p.slug().chars().filter(|c| *c != '-').collect();
            slug == key || format!("{p:?}").to_ascii_lowercase() == key
        });
        match (found, key.as_str()) {
            (Some(p), _) => Ok(p),
            (None, "suzumuraconsistency") => Ok(RelationProperty::SuzumuraConsistent),
            (None, "totality") => Ok(RelationProperty::Total),
            (None, "reflexivity") => Ok(RelationProperty::Reflexive),
            (None, "transitivity") => Ok(RelationProperty::Transitive),
            (None, "quasitransitivity") => Ok(RelationProperty::QuasiTransitive),
            (None, "acyclicity") => Ok(RelationProperty::Acyclic),
            _ => Err(format!("unknown relation property `{s}`")),
        }
    }
}

/// Parses a comma-separated property list; the empty string is the empty set.
pub fn parse_property_list(s: &str) -> Result<Vec<RelationProperty>, String> {
    let mut out: Vec<RelationProperty> = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty() && *t != "none")
        .map(str::parse)
        .collect::<Result<_, _>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

fn all_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (0..n).map(move |j| (i, j)))
}

fn is_reflexive(r: &Relation) -> bool {
    (0..r.len()).all(|i| r.get(i, i))
}

fn is_total(r: &Relation) -> bool {
    all_pairs(r.len()).all(|(i, j)| r.get(i, j) || r.get(j, i))
}

fn is_transitive(r: &Relation) -> bool {
    (0..r.len()).all(|i| {
        r.successors(i)
            .iter()
            .all(|j| r.successors(j).is_subset_of(r.successors(i)))
    })
}

fn is_ferrers(r: &Relation) -> bool {
    let pairs: Vec<_> = r.pairs().collect();
    pairs.iter().all(|&(a, b)| {
        pairs.iter().all(|&(c, d)| r.get(a, d) || r.get(c, b))
    })
}

/// `a >* b` implies not `b > a`, with `>*` the transitive closure of `>`.
fn is_acyclic(r: &Relation) -> bool {
    let strict = r.strict_part();
    let closure = strict.transitive_closure();
    let ok = closure.pairs().all(|(a, b)| !strict.get(b, a));
    ok
}

/// `a >=* b` implies not `b > a`, with `>=*` the transitive closure of `>=`.
fn is_suzumura(r: &Relation) -> bool {
    let strict = r.strict_part();
    let closure = r.transitive_closure();
    let ok = closure.pairs().all(|(a, b)| !strict.get(b, a));
    ok
}

fn is_limited(r: &Relation, selection: Selection) -> bool {
    let frame = Frame::new(*r);
    frame
        .universe()
        .subsets()
        .skip(1)
        .all(|x| !frame.best(selection, x).is_empty())
}

fn is_smooth(r: &Relation, selection: Selection) -> bool {
    let frame = Frame::new(*r);
    frame.universe().subsets().all(|x| {
        let best = frame.best(selection, x);
        x.minus(best)
            .iter()
            .all(|a| !frame.strictly_above(a).intersect(best).is_empty())
    })
}

/// Decides a property of a relation. Limitedness and smoothness quantify
/// over every subset of the universe.
pub fn check_property(p: RelationProperty, r: &Relation) -> bool {
    use RelationProperty as P;
    match p {
        P::Reflexive => is_reflexive(r),
        P::Total => is_total(r),
        P::Transitive => is_transitive(r),
        P::QuasiTransitive => is_transitive(&r.strict_part()),
        P::Acyclic => is_acyclic(r),
        P::SuzumuraConsistent => is_suzumura(r),
        P::Ferrers => is_ferrers(r),
        P::IntervalOrder => is_reflexive(r) && is_ferrers(r),
        P::OptLimited => is_limited(r, Selection::Opt),
        P::MaxLimited => is_limited(r, Selection::Max),
        P::OptSmooth => is_smooth(r, Selection::Opt),
        P::MaxSmooth => is_smooth(r, Selection::Max),
    }
}

pub fn check_all(props: &[RelationProperty], r: &Relation) -> bool {
    props.iter().all(|p| check_property(*p, r))
}

/// Outcome of a bounded implication check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Implication {
    /// Every relation up to the bound with the premises has the conclusion.
    Confirmed { relations_checked: u64 },
    /// Smallest relation (fewest worlds, then lexicographic) with the
    /// premises but not the conclusion.
    Witness(Relation),
}

impl Implication {
    pub fn is_confirmed(&self) -> bool {
        matches!(self, Implication::Confirmed { .. })
    }
}

/// Checks `premises => conclusion` on every relation with 1..=max_n worlds.
pub fn property_implication(
    premises: &[RelationProperty],
    conclusion: RelationProperty,
    max_n: usize,
) -> Implication {
    assert!((1..=5).contains(&max_n), "implication bound must be in 1..=5");
    let mut checked = 0u64;
    for n in 1..=max_n {
        let cells = (n * n) as u32;
        let witness = (0..1u64 << cells).into_par_iter().find_first(|&code| {
            let r = Relation::from_code(n, code);
            check_all(premises, &r) && !check_property(conclusion, &r)
        });
        if let Some(code) = witness {
            return Implication::Witness(Relation::from_code(n, code));
        }
        checked += 1u64 << cells;
    }
    Implication::Confirmed { relations_checked: checked }
}

/// Nodes of the weakenings-of-transitivity diagram.
pub const LATTICE_NODES: [RelationProperty; 7] = [
    RelationProperty::Reflexive,
    RelationProperty::Total,
    RelationProperty::Transitive,
    RelationProperty::QuasiTransitive,
    RelationProperty::SuzumuraConsistent,
    RelationProperty::Acyclic,
    RelationProperty::IntervalOrder,
];

/// Drawn arrows of the diagram.
pub const LATTICE_ARROWS: [(RelationProperty, RelationProperty); 6] = [
    (RelationProperty::Transitive, RelationProperty::SuzumuraConsistent),
    (RelationProperty::SuzumuraConsistent, RelationProperty::Acyclic),
    (RelationProperty::Transitive, RelationProperty::QuasiTransitive),
    (RelationProperty::QuasiTransitive, RelationProperty::Acyclic),
    (RelationProperty::IntervalOrder, RelationProperty::QuasiTransitive),
    (RelationProperty::Total, RelationProperty::Reflexive),
];

/// Implications that hold by definition of interval order rather than by a
/// drawn arrow: it contains reflexivity, and with Ferrers gives totality.
pub const DEFINITIONAL: [(RelationProperty, RelationProperty); 2] = [
    (RelationProperty::IntervalOrder, RelationProperty::Reflexive),
    (RelationProperty::IntervalOrder, RelationProperty::Total),
];

/// Whether `from => to` follows from the arrows (plus the definitional
/// facts) by chaining.
pub fn lattice_entails(from: RelationProperty, to: RelationProperty) -> bool {
    let edges: Vec<_> = LATTICE_ARROWS.iter().chain(DEFINITIONAL.iter()).copied().collect();
    let mut reached = vec![from];
    let mut frontier = vec![from];
    while let Some(p) = frontier.pop() {
        for &(a, b) in &edges {
            if a == p && !reached.contains(&b) {
                reached.push(b);
                frontier.push(b);
            }
        }
    }
    reached.contains(&to)
}

#[derive(Clone, Debug, Serialize)]
pub struct ArrowResult {
    pub from: RelationProperty,
    pub to: RelationProperty,
    pub confirmed: bool,
    pub relations_checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IndependenceResult {
    pub from: RelationProperty,
    pub to: RelationProperty,
    /// Serialized relation with `from` but not `to`, if one exists.
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticeReport {
    pub bound: usize,
    pub arrows: Vec<ArrowResult>,
    pub independence: Vec<IndependenceResult>,
    pub definitional: Vec<ArrowResult>,
}

impl LatticeReport {
    pub fn all_hold(&self) -> bool {
        self.arrows.iter().all(|a| a.confirmed)
            && self.definitional.iter().all(|a| a.confirmed)
            && self.independence.iter().all(|i| i.witness.is_some())
    }
}

fn frame_text(r: &Relation) -> String {
    crate::model::serialize_model(&crate::model::PreferenceModel::new(*r))
}

fn arrow(from: RelationProperty, to: RelationProperty, bound: usize) -> ArrowResult {
    match property_implication(&[from], to, bound) {
        Implication::Confirmed { relations_checked } => ArrowResult {
            from,
            to,
            confirmed: true,
            relations_checked,
            counterexample: None,
        },
        Implication::Witness(r) => ArrowResult {
            from,
            to,
            confirmed: false,
            relations_checked: 0,
            counterexample: Some(frame_text(&r)),
        },
    }
}

/// Confirms every drawn arrow up to `bound` worlds and looks for an
/// independence witness for every ordered pair the diagram does not entail.
pub fn lattice_report(bound: usize) -> LatticeReport {
    let arrows = LATTICE_ARROWS.iter().map(|&(a, b)| arrow(a, b, bound)).collect();
    let definitional = DEFINITIONAL.iter().map(|&(a, b)| arrow(a, b, bound)).collect();
    let mut independence = Vec::new();
    for from in LATTICE_NODES {
        for to in LATTICE_NODES {
            if from == to || lattice_entails(from, to) {
                continue;
            }
            let witness = match property_implication(&[from], to, bound) {
                Implication::Witness(r) => Some(frame_text(&r)),
                Implication::Confirmed { .. } => None,
            };
            independence.push(IndependenceResult { from, to, witness });
        }
    }
    LatticeReport { bound, arrows, independence, definitional }
}

#[cfg(test)]
mod tests {
    use super::*;
    use RelationProperty as P;

    fn rel(n: usize, pairs: &[(usize, usize)]) -> Relation {
        Relation::from_pairs(n, pairs.iter().copied())
    }

    #[test]
    fn strict_three_cycle_is_not_acyclic() {
        let r = rel(3, &[(0, 1), (1, 2), (2, 0)]);
        assert!(!check_property(P::Acyclic, &r));
        assert!(!check_property(P::QuasiTransitive, &r));
        assert!(!check_property(P::MaxLimited, &r));
    }

    #[test]
    fn equal_goodness_chain_is_quasi_transitive_not_transitive() {
        let r = rel(3, &[(0, 1), (1, 0), (1, 2), (2, 1), (0, 0), (1, 1), (2, 2)]);
        assert!(r.strict_part().is_empty());
        assert!(check_property(P::QuasiTransitive, &r));
        assert!(!check_property(P::Transitive, &r));
        assert!(check_property(P::Acyclic, &r));
        assert!(check_property(P::SuzumuraConsistent, &r));
    }

    #[test]
    fn interval_order_need_not_be_suzumura_consistent() {
        // b > a, a ~ c, c ~ b: intervals [0,1], [2,3], [0.5,2.5]
        let (a, b, c) = (0, 1, 2);
        let r = rel(3, &[(a, a), (b, b), (c, c), (b, a), (a, c), (c, a), (c, b), (b, c)]);
        assert!(check_property(P::IntervalOrder, &r));
        assert!(!check_property(P::SuzumuraConsistent, &r));
    }

    #[test]
    fn empty_relation() {
        let r = Relation::empty(2);
        assert!(check_property(P::Transitive, &r));
        assert!(check_property(P::Acyclic, &r));
        assert!(check_property(P::MaxLimited, &r));
        assert!(check_property(P::MaxSmooth, &r));
        assert!(!check_property(P::OptLimited, &r));
        assert!(!check_property(P::Reflexive, &r));
    }

    #[test]
    fn limited_but_not_smooth_under_max() {
        // z > y > x with x, z incomparable
        let r = rel(3, &[(2, 1), (1, 0)]);
        assert!(check_property(P::MaxLimited, &r));
        assert!(!check_property(P::MaxSmooth, &r));
    }

    #[test]
    fn implication_examples() {
        assert!(property_implication(&[P::Transitive], P::QuasiTransitive, 3).is_confirmed());
        let Implication::Witness(w) = property_implication(&[P::QuasiTransitive], P::Transitive, 3)
        else {
            panic!("expected witness");
        };
        assert!(check_property(P::QuasiTransitive, &w) && !check_property(P::Transitive, &w));
        assert!(property_implication(&[P::Ferrers, P::Reflexive], P::Total, 3).is_confirmed());
    }

    #[test]
    fn parse_names() {
        assert_eq!("quasi-transitive".parse::<P>(), Ok(P::QuasiTransitive));
        assert_eq!("QuasiTransitive".parse::<P>(), Ok(P::QuasiTransitive));
        assert_eq!("interval_order".parse::<P>(), Ok(P::IntervalOrder));
        assert_eq!("suzumura".parse::<P>(), Ok(P::SuzumuraConsistent));
        assert!("nope".parse::<P>().is_err());
        assert_eq!(
            parse_property_list("total, transitive").unwrap(),
            vec![P::Total, P::Transitive]
        );
        assert!(parse_property_list("").unwrap().is_empty());
    }

    #[test]
    fn entailment_closure() {
        assert!(lattice_entails(P::Transitive, P::Acyclic));
        assert!(lattice_entails(P::IntervalOrder, P::Acyclic));
        assert!(!lattice_entails(P::IntervalOrder, P::SuzumuraConsistent));
        assert!(!lattice_entails(P::Acyclic, P::Transitive));
    }
}
