//! The object language: conditional obligation over a global necessity
//! modality, plus the derived connectives and formula-level preference.
//!
//! Surface syntax (ASCII):
//!
//! ```text
//! formula  := iff ((">=" | ">") iff)?
//! iff      := impl ("<->" impl)*
//! impl     := or ("->" impl)?
//! or       := and ("|" and)*
//! and      := unary ("&" unary)*
//! unary    := "~" unary | "[]" unary | "<>" unary | atomlike
//! atomlike := "T" | "F" | IDENT | "?" IDENT
//!           | "O(" formula "/" formula ")" | "P(" formula "/" formula ")"
//!           | "(" formula ")"
//! ```

mod parser;
mod printer;

use std::collections::BTreeSet;
use std::fmt;

pub use parser::{parse, ParseError};

/// Abstract syntax of a formula.
///
/// `Oblig` and `Perm` store the consequent first and the antecedent second,
/// mirroring the surface form `O(consequent / antecedent)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    MetaVar(String),
    Top,
    Bot,
    Not(Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
    Diamond(Box<Formula>),
    Oblig(Box<Formula>, Box<Formula>),
    Perm(Box<Formula>, Box<Formula>),
    PrefGeq(Box<Formula>, Box<Formula>),
    PrefGt(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn meta(name: impl Into<String>) -> Self {
        Formula::MetaVar(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn nec(f: Formula) -> Self {
        Formula::Box(Box::new(f))
    }

    pub fn poss(f: Formula) -> Self {
        Formula::Diamond(Box::new(f))
    }

    /// `O(consequent / antecedent)`.
    pub fn oblig(consequent: Formula, antecedent: Formula) -> Self {
        Formula::Oblig(Box::new(consequent), Box::new(antecedent))
    }

    /// `P(consequent / antecedent)`.
    pub fn perm(consequent: Formula, antecedent: Formula) -> Self {
        Formula::Perm(Box::new(consequent), Box::new(antecedent))
    }

    /// Unconditional obligation, `O(f / T)`.
    pub fn oblig_unconditional(f: Formula) -> Self {
        Formula::oblig(f, Formula::Top)
    }

    pub fn pref_geq(a: Formula, b: Formula) -> Self {
        Formula::PrefGeq(Box::new(a), Box::new(b))
    }

    pub fn pref_gt(a: Formula, b: Formula) -> Self {
        Formula::PrefGt(Box::new(a), Box::new(b))
    }

    /// Conjunction of a non-empty list, associated to the left.
    pub fn conj(parts: impl IntoIterator<Item = Formula>) -> Option<Self> {
        parts.into_iter().reduce(Formula::and)
    }

    /// Rewrites every derived connective into the core set
    /// {atom, metavariable, T, ~, |, [], O}.
    pub fn expand(&self) -> Formula {
        use Formula as F;
        match self {
            F::Atom(_) | F::MetaVar(_) | F::Top => self.clone(),
            F::Bot => F::not(F::Top),
            F::Not(a) => F::not(a.expand()),
            F::Or(a, b) => F::or(a.expand(), b.expand()),
            F::And(a, b) => F::not(F::or(F::not(a.expand()), F::not(b.expand()))),
            F::Implies(a, b) => F::or(F::not(a.expand()), b.expand()),
            F::Iff(a, b) => F::and(
                F::implies((**a).clone(), (**b).clone()),
                F::implies((**b).clone(), (**a).clone()),
            )
            .expand(),
            F::Box(a) => F::nec(a.expand()),
            F::Diamond(a) => F::not(F::nec(F::not(a.expand()))),
            F::Oblig(c, a) => F::oblig(c.expand(), a.expand()),
            F::Perm(c, a) => F::not(F::oblig(F::not(c.expand()), a.expand())),
            F::PrefGeq(a, b) => {
                F::perm((**a).clone(), F::or((**a).clone(), (**b).clone())).expand()
            }
            F::PrefGt(a, b) => {
                let context = F::or((**a).clone(), (**b).clone());
                F::and(
                    F::perm((**a).clone(), context.clone()),
                    F::oblig(F::not((**b).clone()), context),
                )
                .expand()
            }
        }
    }

    /// True when only core constructors occur.
    pub fn is_core(&self) -> bool {
        use Formula as F;
        match self {
            F::Atom(_) | F::MetaVar(_) | F::Top => true,
            F::Not(a) | F::Box(a) => a.is_core(),
            F::Or(a, b) | F::Oblig(a, b) => a.is_core() && b.is_core(),
            _ => false,
        }
    }

    pub fn metavars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::MetaVar(name) = f {
                out.insert(name.clone());
            }
        });
        out
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Atom(name) = f {
                out.insert(name.clone());
            }
        });
        out
    }

    /// Replaces metavariables by the given formulas; unmapped ones are kept.
    pub fn substitute(&self, map: &dyn Fn(&str) -> Option<Formula>) -> Formula {
        self.map_leaves(&mut |leaf| match leaf {
            Formula::MetaVar(name) => map(name).unwrap_or_else(|| leaf.clone()),
            other => other.clone(),
        })
    }

    pub fn depth(&self) -> usize {
        match self.children() {
            (None, None) => 0,
            (Some(a), None) => 1 + a.depth(),
            (Some(a), Some(b)) => 1 + a.depth().max(b.depth()),
            (None, Some(_)) => unreachable!(),
        }
    }

    fn children(&self) -> (Option<&Formula>, Option<&Formula>) {
        use Formula as F;
        match self {
            F::Atom(_) | F::MetaVar(_) | F::Top | F::Bot => (None, None),
            F::Not(a) | F::Box(a) | F::Diamond(a) => (Some(a), None),
            F::Or(a, b)
            | F::And(a, b)
            | F::Implies(a, b)
            | F::Iff(a, b)
            | F::Oblig(a, b)
            | F::Perm(a, b)
            | F::PrefGeq(a, b)
            | F::PrefGt(a, b) => (Some(a), Some(b)),
        }
    }

    fn visit(&self, f: &mut dyn FnMut(&Formula)) {
        f(self);
        let (a, b) = self.children();
        if let Some(a) = a {
            a.visit(f);
        }
        if let Some(b) = b {
            b.visit(f);
        }
    }

    fn map_leaves(&self, leaf: &mut dyn FnMut(&Formula) -> Formula) -> Formula {
        use Formula as F;
        let mut go = |x: &Formula| Box::new(x.map_leaves(leaf));
        match self {
            F::Atom(_) | F::MetaVar(_) | F::Top | F::Bot => leaf(self),
            F::Not(a) => F::Not(go(a)),
            F::Box(a) => F::Box(go(a)),
            F::Diamond(a) => F::Diamond(go(a)),
            F::Or(a, b) => F::Or(go(a), go(b)),
            F::And(a, b) => F::And(go(a), go(b)),
            F::Implies(a, b) => F::Implies(go(a), go(b)),
            F::Iff(a, b) => F::Iff(go(a), go(b)),
            F::Oblig(a, b) => F::Oblig(go(a), go(b)),
            F::Perm(a, b) => F::Perm(go(a), go(b)),
            F::PrefGeq(a, b) => F::PrefGeq(go(a), go(b)),
            F::PrefGt(a, b) => F::PrefGt(go(a), go(b)),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&printer::render(self))
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

pub fn render(f: &Formula) -> String {
    printer::render(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(name: &str) -> Formula {
        Formula::atom(name)
    }

    #[test]
    fn diamond_expands_to_negated_box() {
        assert_eq!(
            Formula::poss(p("p")).expand(),
            Formula::not(Formula::nec(Formula::not(p("p"))))
        );
    }

    #[test]
    fn weak_preference_expands_to_permission_of_disjunction() {
        let want = Formula::not(Formula::oblig(
            Formula::not(p("A")),
            Formula::or(p("A"), p("B")),
        ));
        assert_eq!(Formula::pref_geq(p("A"), p("B")).expand(), want);
    }

    #[test]
    fn atom_is_fixed_by_expansion() {
        assert_eq!(p("p").expand(), p("p"));
    }

    #[test]
    fn strict_preference_expansion_shape() {
        let ctx = Formula::or(p("A"), p("B"));
        let want = Formula::and(
            Formula::perm(p("A"), ctx.clone()),
            Formula::oblig(Formula::not(p("B")), ctx),
        )
        .expand();
        let got = Formula::pref_gt(p("A"), p("B")).expand();
        assert_eq!(got, want);
        assert!(got.is_core());
    }

    #[test]
    fn metavars_collects_set() {
        let f = Formula::oblig(Formula::meta("x"), Formula::meta("y"));
        let names: Vec<_> = f.metavars().into_iter().collect();
        assert_eq!(names, ["x", "y"]);
        assert!(p("p").metavars().is_empty());
        let dup = Formula::and(Formula::meta("x"), Formula::meta("x"));
        assert_eq!(dup.metavars().len(), 1);
    }

    #[test]
    fn substitute_replaces_only_bound_metavars() {
        let f = Formula::oblig(Formula::meta("f"), Formula::meta("g"));
        let g = f.substitute(&|name| (name == "f").then(|| p("q")));
        assert_eq!(g, Formula::oblig(p("q"), Formula::meta("g")));
    }

    #[test]
    fn depth_counts_nesting() {
        assert_eq!(p("p").depth(), 0);
        assert_eq!(Formula::not(Formula::not(p("p"))).depth(), 2);
    }
}
