use crate::formula::Formula;
use crate::model::WorldSet;

use super::{EvalRule, Frame};

/// A leaf slot of a compiled formula.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Leaf {
    Atom(String),
    Meta(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    Slot(u8),
    Top,
    Bot,
    Not,
    Or,
    And,
    Implies,
    Iff,
    Box,
    Diamond,
    Oblig,
    Perm,
}

/// A formula flattened to postfix form with its leaves resolved to slots,
/// so repeated evaluation does no allocation or string lookups.
#[derive(Clone, Debug)]
pub struct Compiled {
    ops: Vec<Op>,
    leaves: Vec<Leaf>,
}

impl Compiled {
    /// Leaves are numbered atoms first, then metavariables, each sorted by
    /// name.
    pub fn new(f: &Formula) -> Self {
        let mut leaves: Vec<Leaf> = f
            .atoms()
            .into_iter()
            .map(Leaf::Atom)
            .chain(f.metavars().into_iter().map(Leaf::Meta))
            .collect();
        leaves.sort();
        assert!(leaves.len() <= u8::MAX as usize, "too many distinct leaves");
        let mut ops = Vec::new();
        emit(f, &leaves, &mut ops);
        Compiled { ops, leaves }
    }

    pub fn leaves(&self) -> &[Leaf] {
        &self.leaves
    }

    pub fn eval(&self, frame: &Frame, rule: EvalRule, slots: &[WorldSet]) -> WorldSet {
        let mut stack = Vec::with_capacity(16);
        self.eval_with(frame, rule, slots, &mut stack)
    }

    /// Evaluates with a caller-provided scratch stack.
    pub fn eval_with(
        &self,
        frame: &Frame,
        rule: EvalRule,
        slots: &[WorldSet],
        stack: &mut Vec<WorldSet>,
    ) -> WorldSet {
        let universe = frame.universe();
        let everywhere = |b: bool| if b { universe } else { WorldSet::EMPTY };
        stack.clear();
        for op in &self.ops {
            let value = match *op {
                Op::Slot(k) => slots[k as usize],
                Op::Top => universe,
                Op::Bot => WorldSet::EMPTY,
                Op::Not => stack.pop().unwrap().complement_in(universe),
                Op::Box => everywhere(stack.pop().unwrap() == universe),
                Op::Diamond => everywhere(!stack.pop().unwrap().is_empty()),
                _ => {
                    let right = stack.pop().unwrap();
                    let left = stack.pop().unwrap();
                    match *op {
                        Op::Or => left.union(right),
                        Op::And => left.intersect(right),
                        Op::Implies => left.complement_in(universe).union(right),
                        Op::Iff => {
                            let both = left.intersect(right);
                            let neither = left.union(right).complement_in(universe);
                            both.union(neither)
                        }
                        // left = consequent, right = antecedent
                        Op::Oblig => everywhere(frame.cond_holds(rule, left, right)),
                        Op::Perm => everywhere(!frame.cond_holds(
                            rule,
                            left.complement_in(universe),
                            right,
                        )),
                        _ => unreachable!(),
                    }
                }
            };
            stack.push(value);
        }
        debug_assert_eq!(stack.len(), 1);
        stack.pop().unwrap()
    }
}

fn emit(f: &Formula, leaves: &[Leaf], ops: &mut Vec<Op>) {
    use Formula as F;
    let slot = |leaf: Leaf| {
        let k = leaves.binary_search(&leaf).expect("leaf collected");
        Op::Slot(k as u8)
    };
    match f {
        F::Atom(name) => ops.push(slot(Leaf::Atom(name.clone()))),
        F::MetaVar(name) => ops.push(slot(Leaf::Meta(name.clone()))),
        F::Top => ops.push(Op::Top),
        F::Bot => ops.push(Op::Bot),
        F::Not(a) | F::Box(a) | F::Diamond(a) => {
            emit(a, leaves, ops);
            ops.push(match f {
                F::Not(_) => Op::Not,
                F::Box(_) => Op::Box,
                _ => Op::Diamond,
            });
        }
        F::Or(a, b)
        | F::And(a, b)
        | F::Implies(a, b)
        | F::Iff(a, b)
        | F::Oblig(a, b)
        | F::Perm(a, b) => {
            emit(a, leaves, ops);
            emit(b, leaves, ops);
            ops.push(match f {
                F::Or(..) => Op::Or,
                F::And(..) => Op::And,
                F::Implies(..) => Op::Implies,
                F::Iff(..) => Op::Iff,
                F::Oblig(..) => Op::Oblig,
                _ => Op::Perm,
            });
        }
        F::PrefGeq(..) | F::PrefGt(..) => emit(&f.expand(), leaves, ops),
    }
}
