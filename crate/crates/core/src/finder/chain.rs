use serde::Serialize;

use crate::model::{PreferenceModel, Relation};

/// Length of the longest strict-betterness path, counted in worlds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainLength {
    Length(usize),
    /// The strict part contains a cycle.
    Cyclic,
}

/// Longest repetition-free path in the strict part of the betterness
/// relation, or [`ChainLength::Cyclic`].
pub fn longest_strict_chain(model: &PreferenceModel) -> ChainLength {
    longest_chain_in(&model.strict_part())
}

/// Same, for an arbitrary relation read as a directed graph.
pub fn longest_chain_in(strict: &Relation) -> ChainLength {
    let n = strict.len();
    let closure = strict.transitive_closure();
    if (0..n).any(|a| closure.get(a, a)) {
        return ChainLength::Cyclic;
    }
    // acyclic: longest path ending at each node, by memoized DFS
    fn depth(a: usize, strict: &Relation, memo: &mut [Option<usize>]) -> usize {
        if let Some(d) = memo[a] {
            return d;
        }
        let d = 1 + strict
            .successors(a)
            .iter()
            .map(|b| depth(b, strict, memo))
            .max()
            .unwrap_or(0);
        memo[a] = Some(d);
        d
    }
    let mut memo = vec![None; n];
    ChainLength::Length((0..n).map(|a| depth(a, strict, &mut memo)).max().unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_examples() {
        let two_steps = Relation::from_pairs(3, [(1, 0), (2, 1)]);
        assert_eq!(longest_chain_in(&two_steps), ChainLength::Length(3));
        assert_eq!(longest_chain_in(&Relation::empty(3)), ChainLength::Length(1));
        let loop2 = Relation::from_pairs(2, [(0, 1), (1, 0)]);
        assert_eq!(longest_chain_in(&loop2), ChainLength::Cyclic);
    }

    #[test]
    fn model_chain_uses_strict_part() {
        // mutual weak preference is not a strict cycle
        let m = PreferenceModel::new(Relation::from_pairs(2, [(0, 1), (1, 0)]));
        assert_eq!(longest_strict_chain(&m), ChainLength::Length(1));
        let m = PreferenceModel::new(Relation::from_pairs(3, [(0, 1), (1, 2), (2, 0)]));
        assert_eq!(longest_strict_chain(&m), ChainLength::Cyclic);
    }
}
