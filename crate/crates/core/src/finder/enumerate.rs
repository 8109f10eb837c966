use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::model::Relation;
use crate::relprops::{check_property, RelationProperty};

/// Largest frame size enumeration accepts.
pub const MAX_ENUM_WORLDS: usize = 7;
/// Largest frame size enumeration accepts without isomorph rejection.
pub const MAX_PLAIN_WORLDS: usize = 5;

const CHUNK: u64 = 1 << 18;

/// All permutations of `0..n`, in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                prefix.push(k);
                go(prefix, used, out);
                prefix.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// True when `r` is the lexicographically least relation in its orbit under
/// world permutations.
pub fn is_canonical(r: &Relation, perms: &[Vec<usize>]) -> bool {
    let n = r.len();
    'perm: for q in perms {
        for a in 0..n {
            for b in 0..n {
                let permuted = r.get(q[a], q[b]);
                let original = r.get(a, b);
                if permuted != original {
                    if !permuted {
                        return false;
                    }
                    continue 'perm;
                }
            }
        }
    }
    true
}

/// Number of distinct relations obtained by permuting the worlds of `r`.
pub fn orbit_size(r: &Relation, perms: &[Vec<usize>]) -> usize {
    let mut codes: Vec<u64> = perms.iter().map(|p| r.permuted(p).code()).collect();
    codes.sort_unstable();
    codes.dedup();
    codes.len()
}

/// Which frames a search visits.
#[derive(Clone, Debug, Default)]
pub struct FrameFilter {
    pub required: Vec<RelationProperty>,
    pub forbidden: Vec<RelationProperty>,
    pub iso_reject: bool,
}

impl FrameFilter {
    pub fn requiring(required: &[RelationProperty]) -> Self {
        FrameFilter { required: required.to_vec(), ..FrameFilter::default() }
    }

    pub fn admits_properties(&self, r: &Relation) -> bool {
        self.required.iter().all(|p| check_property(*p, r))
            && self.forbidden.iter().all(|p| !check_property(*p, r))
    }
}

/// Wall-clock budget shared by the workers of one search.
#[derive(Debug)]
pub struct Budget {
    deadline: Option<Instant>,
    expired: AtomicBool,
}

impl Budget {
    pub fn new(timeout: Option<Duration>) -> Self {
        Budget { deadline: timeout.map(|t| Instant::now() + t), expired: AtomicBool::new(false) }
    }

    pub fn unlimited() -> Self {
        Budget::new(None)
    }

    pub fn expired(&self) -> bool {
        if self.expired.load(Ordering::Relaxed) {
            return true;
        }
        match self.deadline {
            Some(d) if Instant::now() >= d => {
                self.expired.store(true, Ordering::Relaxed);
                true
            }
            _ => false,
        }
    }
}

/// Outcome of scanning the frames of one size.
#[derive(Debug)]
pub struct FrameScan<T> {
    /// First hit in lexicographic frame order.
    pub hit: Option<(Relation, T)>,
    /// Admitted frames up to and including the hit (all of them if none).
    pub frames_checked: u64,
    pub timed_out: bool,
}

fn check_size(n: usize, iso_reject: bool) {
    let cap = if iso_reject { MAX_ENUM_WORLDS } else { MAX_PLAIN_WORLDS };
    assert!(
        (1..=cap).contains(&n),
        "frame size {n} outside 1..={cap} (iso_reject = {iso_reject})"
    );
}

/// Visits the admitted frames with `n` worlds in lexicographic order, in
/// parallel, and returns the first for which `visit` yields a value. The
/// result does not depend on the number of workers.
pub fn scan_frames<T, F>(n: usize, filter: &FrameFilter, budget: &Budget, visit: F) -> FrameScan<T>
where
    T: Send,
    F: Fn(&Relation) -> Option<T> + Sync,
{
    check_size(n, filter.iso_reject);
    let perms = if filter.iso_reject { permutations(n) } else { Vec::new() };
    let total: u64 = 1u64 << (n * n);
    let mut frames_checked = 0u64;
    let mut start = 0u64;
    while start < total {
        if budget.expired() {
            return FrameScan { hit: None, frames_checked, timed_out: true };
        }
        let end = (start + CHUNK).min(total);
        let admitted: Vec<u64> = (start..end)
            .into_par_iter()
            .filter(|&code| {
                let r = Relation::from_code(n, code);
                filter.admits_properties(&r) && (!filter.iso_reject || is_canonical(&r, &perms))
            })
            .collect();
        let hit = admitted.par_iter().enumerate().find_map_first(|(k, &code)| {
            if budget.expired() {
                return None;
            }
            let r = Relation::from_code(n, code);
            visit(&r).map(|t| (k, r, t))
        });
        if budget.expired() {
            return FrameScan { hit: None, frames_checked, timed_out: true };
        }
        if let Some((k, r, t)) = hit {
            frames_checked += k as u64 + 1;
            return FrameScan { hit: Some((r, t)), frames_checked, timed_out: false };
        }
        frames_checked += admitted.len() as u64;
        start = end;
    }
    FrameScan { hit: None, frames_checked, timed_out: false }
}

/// Every frame with `n` worlds satisfying all of `properties`, in
/// lexicographic order; with `iso_reject`, one representative (the least)
/// per isomorphism class.
pub fn enumerate_frames(
    n: usize,
    properties: &[RelationProperty],
    iso_reject: bool,
) -> impl Iterator<Item = Relation> {
    check_size(n, iso_reject);
    let filter = FrameFilter { required: properties.to_vec(), forbidden: Vec::new(), iso_reject };
    let perms = if iso_reject { permutations(n) } else { Vec::new() };
    (0..1u64 << (n * n)).filter_map(move |code| {
        let r = Relation::from_code(n, code);
        (filter.admits_properties(&r) && (!filter.iso_reject || is_canonical(&r, &perms)))
            .then_some(r)
    })
}

/// Runs `f` on a pool with `workers` threads (0 = rayon's default).
pub fn with_workers<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> R {
    if workers == 0 {
        return f();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool")
        .install(f)
}
