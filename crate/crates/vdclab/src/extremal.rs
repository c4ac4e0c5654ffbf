//! Largest `A ⊆ [N]` whose difference set avoids `S`: exact branch-and-bound
//! at small `N`, deterministic greedy at any scale.
//!
//! Difference-avoidance is an independent-set problem on the graph with an
//! edge between `a` and `b` whenever `|a - b| ∈ S`. The search branches on
//! candidates in increasing numeric order with bitset conflict masks, so the
//! first optimum found (and the one returned) is the lexicographically
//! smallest, making outputs reproducible.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::IntegerSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Exact,
    LowerBound,
}

/// Result of an extremal search.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExtremalResult {
    pub set_id: String,
    #[serde(rename = "N")]
    pub n: u64,
    pub best_size: u32,
    pub status: SolveStatus,
    pub witness_set: Vec<u64>,
    pub nodes_explored: u64,
}

impl ExtremalResult {
    /// Density `|A| / N`.
    pub fn density(&self) -> f64 {
        self.best_size as f64 / self.n as f64
    }
}

/// Pairwise difference check: every `a - a'` with `a > a'` avoids `S`.
pub fn witness_is_valid(witness: &[u64], s: &IntegerSet) -> bool {
    for (i, &a) in witness.iter().enumerate() {
        for &b in &witness[..i] {
            if s.contains(a.abs_diff(b)) {
                return false;
            }
        }
    }
    true
}

/// Word-block bitset over the values `1..=n`.
#[derive(Clone)]
struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    fn full(n: usize) -> Self {
        let mut words = vec![!0u64; n.div_ceil(64)];
        let spare = words.len() * 64 - n;
        if spare > 0 {
            *words.last_mut().unwrap() >>= spare;
        }
        Self { words }
    }

    #[inline]
    fn count(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    #[inline]
    fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1u64 << (i % 64));
    }

    #[inline]
    fn and_not(&mut self, other: &BitSet) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w &= !*o;
        }
    }

    /// Lowest set index, if any.
    #[inline]
    fn first(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }
}

struct SearchCtx<'a> {
    /// conflicts[i] = bitset of j > i with (j - i) in S (0-based values i+1)
    conflicts: &'a [BitSet],
    budget: u64,
    nodes: u64,
    complete: bool,
    best_size: u32,
    best: Vec<usize>,
    chosen: Vec<usize>,
}

fn dfs(ctx: &mut SearchCtx, cands: &BitSet) {
    ctx.nodes += 1;
    if ctx.nodes > ctx.budget {
        ctx.complete = false;
        return;
    }
    if ctx.chosen.len() as u32 > ctx.best_size {
        ctx.best_size = ctx.chosen.len() as u32;
        ctx.best = ctx.chosen.clone();
    }
    let mut rest = cands.clone();
    loop {
        let remaining = rest.count();
        if ctx.chosen.len() as u32 + remaining <= ctx.best_size {
            return;
        }
        let Some(x) = rest.first() else { return };
        rest.remove(x);
        let mut next = rest.clone();
        next.and_not(&ctx.conflicts[x]);
        ctx.chosen.push(x);
        dfs(ctx, &next);
        ctx.chosen.pop();
        if !ctx.complete {
            return;
        }
    }
}

/// Exact branch-and-bound. Returns status `LowerBound` with the best set
/// found if the node budget runs out; that is a result, not an error.
pub fn solve_exact(s: &IntegerSet, n: u64, node_budget: u64) -> Result<ExtremalResult> {
    if n == 0 {
        return Err(Error::Domain("N must be >= 1".into()));
    }
    if n > 100_000 {
        return Err(Error::Overflow(format!("exact search at N = {n} is not tractable")));
    }
    let nu = n as usize;
    let shifts: Vec<u64> = s.elements().iter().copied().filter(|&x| x < n).collect();
    let mut conflicts = Vec::with_capacity(nu);
    for i in 0..nu {
        // conflicts of value i+1: values (i+1) + s <= n
        let mut b = BitSet { words: vec![0u64; nu.div_ceil(64)] };
        for &sh in &shifts {
            let j = i + sh as usize; // 0-based index of value i+1+sh
            if j < nu {
                b.words[j / 64] |= 1u64 << (j % 64);
            }
        }
        conflicts.push(b);
    }

    let mut ctx = SearchCtx {
        conflicts: &conflicts,
        budget: node_budget,
        nodes: 0,
        complete: true,
        best_size: 0,
        best: Vec::new(),
        chosen: Vec::new(),
    };
    dfs(&mut ctx, &BitSet::full(nu));

    let witness: Vec<u64> = ctx.best.iter().map(|&i| i as u64 + 1).collect();
    debug_assert!(witness_is_valid(&witness, s));
    Ok(ExtremalResult {
        set_id: s.source().to_string(),
        n,
        best_size: ctx.best_size,
        status: if ctx.complete { SolveStatus::Exact } else { SolveStatus::LowerBound },
        witness_set: witness,
        nodes_explored: ctx.nodes,
    })
}

/// Deterministic greedy scan: take every element whose differences with the
/// current set avoid `S`. Always a valid lower bound.
pub fn solve_greedy(s: &IntegerSet, n: u64) -> ExtremalResult {
    let mut chosen: Vec<u64> = Vec::new();
    for x in 1..=n {
        if chosen.iter().all(|&a| !s.contains(x - a)) {
            chosen.push(x);
        }
    }
    ExtremalResult {
        set_id: s.source().to_string(),
        n,
        best_size: chosen.len() as u32,
        status: SolveStatus::LowerBound,
        witness_set: chosen,
        nodes_explored: n,
    }
}

/// Independent search oracles, used by the tests and the acceptance suite.
pub mod oracle {
    use super::*;

    /// Exhaustive scan over all `2^N` subsets (N <= 24). Returns the maximum
    /// size and the lexicographically smallest witness of that size.
    pub fn exhaustive(s: &IntegerSet, n: u64) -> (u32, Vec<u64>) {
        assert!(n <= 24, "exhaustive oracle capped at N = 24");
        let nu = n as u32;
        let shifts: Vec<u32> = s
            .elements()
            .iter()
            .copied()
            .filter(|&x| x < n)
            .map(|x| x as u32)
            .collect();
        let mut best_size = 0u32;
        let mut best: Vec<u64> = Vec::new();
        'outer: for mask in 0u32..(1u32 << nu) {
            for &sh in &shifts {
                if mask & (mask >> sh) != 0 {
                    continue 'outer;
                }
            }
            let size = mask.count_ones();
            if size < best_size {
                continue;
            }
            let elems: Vec<u64> = (0..nu)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| i as u64 + 1)
                .collect();
            if size > best_size || elems < best {
                best_size = size;
                best = elems;
            }
        }
        (best_size, best)
    }

    /// Meet-in-the-middle oracle for N = 40: enumerate the low half, table the
    /// high half with a subset DP. A second independent search path against
    /// branch-and-bound.
    pub fn meet_in_the_middle_40(s: &IntegerSet) -> u32 {
        const HALF: usize = 20;
        let shifts: Vec<usize> = s
            .elements()
            .iter()
            .copied()
            .filter(|&x| x < 40)
            .map(|x| x as usize)
            .collect();

        // conflicts within the high half [21,40], 0-based offsets
        let mut high_conf = [0u32; HALF];
        for (i, hc) in high_conf.iter_mut().enumerate() {
            for &sh in &shifts {
                if i + sh < HALF {
                    *hc |= 1 << (i + sh);
                }
            }
        }
        // f[allowed] = max independent subset of the high half within `allowed`
        let mut f = vec![0u8; 1 << HALF];
        for m in 1u32..(1 << HALF) {
            let i = m.trailing_zeros() as usize;
            let without = m & !(1 << i);
            let with = without & !high_conf[i];
            f[m as usize] = f[without as usize].max(1 + f[with as usize]);
        }

        // conflicts of a low element (value i+1) into the high half
        let mut cross = [0u32; HALF];
        for (i, cr) in cross.iter_mut().enumerate() {
            for &sh in &shifts {
                let v = i + 1 + sh; // conflicting value
                if (21..=40).contains(&v) {
                    *cr |= 1 << (v - 21);
                }
            }
        }
        let mut low_conf = [0u32; HALF];
        for (i, lc) in low_conf.iter_mut().enumerate() {
            for &sh in &shifts {
                if i + sh < HALF {
                    *lc |= 1 << (i + sh);
                }
            }
        }

        let full = (1u32 << HALF) - 1;
        let mut best = 0u32;
        'outer: for mask in 0u32..(1 << HALF) {
            let mut blocked = 0u32;
            let mut m = mask;
            while m != 0 {
                let i = m.trailing_zeros() as usize;
                if low_conf[i] & mask != 0 {
                    continue 'outer; // low half internally invalid
                }
                blocked |= cross[i];
                m &= m - 1;
            }
            let size = mask.count_ones() + f[(full & !blocked) as usize] as u32;
            best = best.max(size);
        }
        best
    }
}
