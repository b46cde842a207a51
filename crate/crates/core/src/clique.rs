//! Branch-and-bound search for a clique of a prescribed size.
//!
//! Candidates are expanded in a caller-supplied vertex order; a greedy
//! colouring of the remaining candidates bounds the clique that can still be
//! completed. The search is iterative so deep cliques do not grow the stack.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;

/// Dense undirected graph with adjacency rows stored as bitsets.
#[derive(Debug, Clone)]
pub(crate) struct BitGraph {
    words: usize,
    bits: Vec<u64>,
}

impl BitGraph {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Self {
            words,
            bits: vec![0; n * words],
        }
    }

    #[cfg(test)]
    pub fn len(&self) -> usize {
        self.bits.len() / self.words
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v);
        self.bits[u * self.words + v / 64] |= 1 << (v % 64);
        self.bits[v * self.words + u / 64] |= 1 << (u % 64);
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.words..(u + 1) * self.words]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum CliqueSearch {
    Found(Vec<usize>),
    Exhausted,
    BudgetExceeded,
}

struct Searcher<'a> {
    graph: &'a BitGraph,
    nodes: AtomicU64,
    max_nodes: u64,
    overrun: AtomicBool,
}

struct Frame {
    cands: Vec<usize>,
    pos: usize,
}

impl Searcher<'_> {
    fn tick(&self) -> bool {
        if self.overrun.load(Ordering::Relaxed) {
            return false;
        }
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.max_nodes {
            self.overrun.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    /// Number of colours used by a greedy colouring of `cands`, stopping as
    /// soon as `need` colours are reached.
    fn colour_bound(&self, cands: &[usize], need: usize) -> usize {
        if cands.len() < need {
            return cands.len();
        }
        let words = self.graph.words;
        let mut uncoloured = vec![0u64; words];
        for &v in cands {
            uncoloured[v / 64] |= 1 << (v % 64);
        }
        let mut left = cands.len();
        let mut colours = 0;
        let mut avail = vec![0u64; words];
        while left > 0 {
            colours += 1;
            if colours >= need {
                return colours;
            }
            avail.copy_from_slice(&uncoloured);
            let mut w = 0;
            while w < words {
                if avail[w] == 0 {
                    w += 1;
                    continue;
                }
                let v = w * 64 + avail[w].trailing_zeros() as usize;
                uncoloured[v / 64] &= !(1 << (v % 64));
                left -= 1;
                for (a, r) in avail.iter_mut().zip(self.graph.row(v)) {
                    *a &= !r;
                }
                avail[v / 64] &= !(1 << (v % 64));
            }
        }
        colours
    }

    fn viable(&self, cands: &[usize], need: usize) -> bool {
        need == 0 || (cands.len() >= need && self.colour_bound(cands, need) >= need)
    }

    fn restrict(&self, v: usize, rest: &[usize]) -> Vec<usize> {
        rest.iter()
            .copied()
            .filter(|&u| self.graph.has_edge(v, u))
            .collect()
    }

    /// Extends `prefix` by `target` vertices from `cands`.
    fn run(&self, prefix: Vec<usize>, cands: Vec<usize>, target: usize) -> Option<Vec<usize>> {
        let mut chosen = prefix;
        let base = chosen.len();
        if target == 0 {
            return Some(chosen);
        }
        if !self.viable(&cands, target) {
            return None;
        }
        let mut stack = vec![Frame { cands, pos: 0 }];
        while let Some(frame) = stack.last_mut() {
            let need = target - (chosen.len() - base);
            if frame.pos >= frame.cands.len() || frame.cands.len() - frame.pos < need {
                stack.pop();
                if chosen.len() > base {
                    chosen.pop();
                }
                continue;
            }
            if !self.tick() {
                return None;
            }
            let v = frame.cands[frame.pos];
            frame.pos += 1;
            if need == 1 {
                chosen.push(v);
                return Some(chosen);
            }
            let next = self.restrict(v, &frame.cands[frame.pos..]);
            if self.viable(&next, need - 1) {
                chosen.push(v);
                stack.push(Frame {
                    cands: next,
                    pos: 0,
                });
            }
        }
        None
    }
}

/// Looks for a clique of exactly `size` vertices, expanding vertices in
/// `order`. With more than one thread the top-level branches are explored in
/// parallel and the first branch in `order` that succeeds wins, so the
/// witness does not depend on scheduling.
pub(crate) fn find_clique(
    graph: &BitGraph,
    order: &[usize],
    size: usize,
    max_nodes: u64,
    threads: usize,
) -> CliqueSearch {
    let searcher = Searcher {
        graph,
        nodes: AtomicU64::new(0),
        max_nodes,
        overrun: AtomicBool::new(false),
    };
    let found = if threads <= 1 || size <= 1 {
        searcher.run(Vec::new(), order.to_vec(), size)
    } else if order.len() < size || searcher.colour_bound(order, size) < size {
        None
    } else {
        crate::search::with_threads(threads, || {
            (0..order.len()).into_par_iter().find_map_first(|i| {
                if order.len() - i < size || !searcher.tick() {
                    return None;
                }
                let v = order[i];
                let next = searcher.restrict(v, &order[i + 1..]);
                searcher.run(vec![v], next, size - 1)
            })
        })
    };
    match found {
        Some(c) => CliqueSearch::Found(c),
        None if searcher.overrun.load(Ordering::Relaxed) => CliqueSearch::BudgetExceeded,
        None => CliqueSearch::Exhausted,
    }
}
