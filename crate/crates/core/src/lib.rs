//! Finite-model toolkit for preference-based dyadic deontic logic.
//!
//! Formulas of a language with a global necessity operator and a dyadic
//! obligation operator `O(consequent / antecedent)` are evaluated on finite
//! preference models under three truth conditions (optimality, maximality
//! and the exists-forall rule). On top of that sit bounded checks of
//! property/axiom correspondences, exhaustive model search, and an encoding
//! of the mere addition paradox.

pub mod casestudy;
pub mod cli;
pub mod finder;
pub mod formula;
pub mod model;
pub mod relprops;
pub mod report;
pub mod schemas;
pub mod semantics;

pub use formula::{parse, Formula};
pub use model::{parse_model, serialize_model, PreferenceModel, Relation, WorldSet};
pub use relprops::RelationProperty;
pub use semantics::EvalRule;
