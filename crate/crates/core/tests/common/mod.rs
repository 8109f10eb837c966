//! Shared test helpers: formula generators and an independent evaluator.
//!
//! The evaluator below works on plain `Vec<bool>` sets and a `Vec<Vec<bool>>`
//! relation and reads every truth condition straight off its definition. It
//! deliberately uses nothing from the crate except the formula AST.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::HashMap;

use ddl_core::semantics::EvalRule;
use ddl_core::Formula;
use proptest::prelude::*;
use rand::Rng;

pub const ATOM_NAMES: [&str; 4] = ["p", "q", "r", "Ap"];

/// Formulas over atoms (and, with `metas`, metavariables) of the given depth.
pub fn formula_strategy(depth: u32, metas: bool) -> BoxedStrategy<Formula> {
    let mut leaves: Vec<BoxedStrategy<Formula>> = vec![
        prop::sample::select(ATOM_NAMES.to_vec()).prop_map(Formula::atom).boxed(),
        Just(Formula::Top).boxed(),
        Just(Formula::Bot).boxed(),
    ];
    if metas {
        leaves.push(prop::sample::select(vec!["f", "g", "h"]).prop_map(Formula::meta).boxed());
    }
    let leaf = prop::strategy::Union::new(leaves);
    leaf.prop_recursive(depth, 64, 2, |inner| {
        let b = || inner.clone();
        prop_oneof![
            b().prop_map(Formula::not),
            b().prop_map(Formula::nec),
            b().prop_map(Formula::poss),
            (b(), b()).prop_map(|(x, y)| Formula::or(x, y)),
            (b(), b()).prop_map(|(x, y)| Formula::and(x, y)),
            (b(), b()).prop_map(|(x, y)| Formula::implies(x, y)),
            (b(), b()).prop_map(|(x, y)| Formula::iff(x, y)),
            (b(), b()).prop_map(|(x, y)| Formula::oblig(x, y)),
            (b(), b()).prop_map(|(x, y)| Formula::perm(x, y)),
            (b(), b()).prop_map(|(x, y)| Formula::pref_geq(x, y)),
            (b(), b()).prop_map(|(x, y)| Formula::pref_gt(x, y)),
        ]
    })
    .boxed()
}

/// Random formula of depth at most `depth` over `atoms`.
pub fn random_formula(rng: &mut impl Rng, depth: u32, atoms: &[&str]) -> Formula {
    if depth == 0 || rng.random_bool(0.25) {
        return match rng.random_range(0..6) {
            0 => Formula::Top,
            1 => Formula::Bot,
            _ => Formula::atom(atoms[rng.random_range(0..atoms.len())]),
        };
    }
    let sub = |rng: &mut _| random_formula(rng, depth - 1, atoms);
    match rng.random_range(0..11) {
        0 => Formula::not(sub(rng)),
        1 => Formula::nec(sub(rng)),
        2 => Formula::poss(sub(rng)),
        3 => Formula::or(sub(rng), sub(rng)),
        4 => Formula::and(sub(rng), sub(rng)),
        5 => Formula::implies(sub(rng), sub(rng)),
        6 => Formula::iff(sub(rng), sub(rng)),
        7 => Formula::oblig(sub(rng), sub(rng)),
        8 => Formula::perm(sub(rng), sub(rng)),
        9 => Formula::pref_geq(sub(rng), sub(rng)),
        _ => Formula::pref_gt(sub(rng), sub(rng)),
    }
}

/// A model in the oracle's own representation.
#[derive(Clone, Debug)]
pub struct NaiveModel {
    pub n: usize,
    /// `geq[a][b]`: a is at least as good as b.
    pub geq: Vec<Vec<bool>>,
    pub val: HashMap<String, Vec<bool>>,
}

impl NaiveModel {
    pub fn random(rng: &mut impl Rng, n: usize, atoms: &[&str]) -> Self {
        let geq = (0..n).map(|_| (0..n).map(|_| rng.random_bool(0.5)).collect()).collect();
        let val = atoms
            .iter()
            .map(|a| (a.to_string(), (0..n).map(|_| rng.random_bool(0.5)).collect()))
            .collect();
        NaiveModel { n, geq, val }
    }

    /// The same model in the crate's file format.
    pub fn to_text(&self) -> String {
        let mut s = format!("worlds {}\nrel", self.n);
        for a in 0..self.n {
            for b in 0..self.n {
                if self.geq[a][b] {
                    s.push_str(&format!(" {a}>={b}"));
                }
            }
        }
        s.push('\n');
        let mut atoms: Vec<_> = self.val.keys().collect();
        atoms.sort();
        for a in atoms {
            let ws: Vec<String> =
                (0..self.n).filter(|&w| self.val[a][w]).map(|w| w.to_string()).collect();
            s.push_str(&format!("val {a} = {{{}}}\n", ws.join(",")));
        }
        s
    }

    fn strictly(&self, a: usize, b: usize) -> bool {
        self.geq[a][b] && !self.geq[b][a]
    }

    /// Conditional obligation of `y` given `x`, by the textbook definitions.
    pub fn ought(&self, rule: EvalRule, y: &[bool], x: &[bool]) -> bool {
        let w = 0..self.n;
        match rule {
            EvalRule::Opt => w
                .clone()
                .filter(|&a| x[a] && (0..self.n).all(|b| !x[b] || self.geq[a][b]))
                .all(|a| y[a]),
            EvalRule::Max => w
                .clone()
                .filter(|&a| x[a] && !(0..self.n).any(|b| x[b] && self.strictly(b, a)))
                .all(|a| y[a]),
            EvalRule::Lewis => {
                !x.iter().any(|&t| t)
                    || w.clone().any(|b| {
                        x[b] && y[b] && (0..self.n).all(|c| !self.geq[c][b] || !x[c] || y[c])
                    })
            }
        }
    }

    pub fn eval(&self, f: &Formula, rule: EvalRule) -> Vec<bool> {
        let n = self.n;
        let constant = |v: bool| vec![v; n];
        let pointwise = |a: Vec<bool>, b: Vec<bool>, op: fn(bool, bool) -> bool| -> Vec<bool> {
            a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
        };
        let neg = |a: Vec<bool>| -> Vec<bool> { a.into_iter().map(|x| !x).collect() };
        match f {
            Formula::Atom(name) => self.val.get(name).cloned().unwrap_or_else(|| constant(false)),
            Formula::MetaVar(name) => panic!("oracle got metavariable ?{name}"),
            Formula::Top => constant(true),
            Formula::Bot => constant(false),
            Formula::Not(a) => neg(self.eval(a, rule)),
            Formula::Or(a, b) => pointwise(self.eval(a, rule), self.eval(b, rule), |x, y| x || y),
            Formula::And(a, b) => pointwise(self.eval(a, rule), self.eval(b, rule), |x, y| x && y),
            Formula::Implies(a, b) => pointwise(self.eval(a, rule), self.eval(b, rule), |x, y| !x || y),
            Formula::Iff(a, b) => pointwise(self.eval(a, rule), self.eval(b, rule), |x, y| x == y),
            Formula::Box(a) => constant(self.eval(a, rule).iter().all(|&t| t)),
            Formula::Diamond(a) => constant(self.eval(a, rule).iter().any(|&t| t)),
            Formula::Oblig(c, a) => constant(self.ought(rule, &self.eval(c, rule), &self.eval(a, rule))),
            Formula::Perm(c, a) => {
                constant(!self.ought(rule, &neg(self.eval(c, rule)), &self.eval(a, rule)))
            }
            Formula::PrefGeq(x, y) => {
                let (vx, vy) = (self.eval(x, rule), self.eval(y, rule));
                let either = pointwise(vx.clone(), vy, |s, t| s || t);
                constant(!self.ought(rule, &neg(vx), &either))
            }
            Formula::PrefGt(x, y) => {
                let (vx, vy) = (self.eval(x, rule), self.eval(y, rule));
                let either = pointwise(vx.clone(), vy.clone(), |s, t| s || t);
                constant(!self.ought(rule, &neg(vx), &either) && self.ought(rule, &neg(vy), &either))
            }
        }
    }

    pub fn eval_bits(&self, f: &Formula, rule: EvalRule) -> u16 {
        self.eval(f, rule)
            .into_iter()
            .enumerate()
            .fold(0, |acc, (w, t)| if t { acc | 1 << w } else { acc })
    }
}

impl NaiveModel {
    /// Copies a crate model into the oracle's representation.
    pub fn from_model(m: &ddl_core::PreferenceModel) -> Self {
        let n = m.world_count();
        let rel = m.betterness();
        let geq = (0..n).map(|a| (0..n).map(|b| rel.get(a, b)).collect()).collect();
        let val = m
            .valuation()
            .iter()
            .map(|(k, v)| (k.clone(), (0..n).map(|w| v.contains(w)).collect()))
            .collect();
        NaiveModel { n, geq, val }
    }

    pub fn frame(n: usize, geq: Vec<Vec<bool>>) -> Self {
        NaiveModel { n, geq, val: HashMap::new() }
    }

    /// Some world reachable from `from` in one or more steps of `step`.
    fn reachable(&self, from: usize, step: &dyn Fn(usize, usize) -> bool) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        let mut stack = vec![from];
        while let Some(a) = stack.pop() {
            for b in 0..self.n {
                if step(a, b) && !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
        seen
    }

    pub fn reflexive(&self) -> bool {
        (0..self.n).all(|a| self.geq[a][a])
    }

    pub fn total(&self) -> bool {
        (0..self.n).all(|a| (0..self.n).all(|b| self.geq[a][b] || self.geq[b][a]))
    }

    pub fn transitive(&self) -> bool {
        let w = 0..self.n;
        w.clone().all(|a| {
            w.clone().all(|b| w.clone().all(|c| !(self.geq[a][b] && self.geq[b][c]) || self.geq[a][c]))
        })
    }

    pub fn quasi_transitive(&self) -> bool {
        let w = 0..self.n;
        w.clone().all(|a| {
            w.clone().all(|b| {
                w.clone().all(|c| !(self.strictly(a, b) && self.strictly(b, c)) || self.strictly(a, c))
            })
        })
    }

    pub fn acyclic(&self) -> bool {
        (0..self.n).all(|a| !self.reachable(a, &|x, y| self.strictly(x, y))[a])
    }

    pub fn suzumura(&self) -> bool {
        (0..self.n).all(|a| {
            let up = self.reachable(a, &|x, y| self.geq[x][y]);
            (0..self.n).all(|b| !up[b] || !self.strictly(b, a))
        })
    }

    pub fn ferrers(&self) -> bool {
        let w = 0..self.n;
        w.clone().all(|a| {
            w.clone().all(|b| {
                w.clone().all(|c| {
                    w.clone().all(|d| !(self.geq[a][b] && self.geq[c][d]) || self.geq[a][d] || self.geq[c][b])
                })
            })
        })
    }

    pub fn interval_order(&self) -> bool {
        self.reflexive() && self.ferrers()
    }

    /// The oracle's verdict for the properties it knows.
    pub fn has(&self, p: ddl_core::RelationProperty) -> Option<bool> {
        use ddl_core::RelationProperty as P;
        Some(match p {
            P::Reflexive => self.reflexive(),
            P::Total => self.total(),
            P::Transitive => self.transitive(),
            P::QuasiTransitive => self.quasi_transitive(),
            P::Acyclic => self.acyclic(),
            P::SuzumuraConsistent => self.suzumura(),
            P::Ferrers => self.ferrers(),
            P::IntervalOrder => self.interval_order(),
            _ => return None,
        })
    }
}
