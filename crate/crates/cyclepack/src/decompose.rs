//! Cycle decompositions of balanced digraphs: an exact memoized search for
//! the maximum number of arc-disjoint cycles covering every arc, and a
//! shortest-cycle-first heuristic above the exact-size cap.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::BipartiteTournament;

/// A plain digraph over dense vertex ids; arcs are indexed by position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    pub vertex_count: usize,
    pub arcs: Vec<(usize, usize)>,
}

impl Digraph {
    pub fn new(vertex_count: usize, arcs: Vec<(usize, usize)>) -> Self {
        Self { vertex_count, arcs }
    }

    /// All arcs of a complete bipartite orientation, in arc-index order.
    pub fn from_bipartite(g: &BipartiteTournament) -> Self {
        Self {
            vertex_count: g.m() + g.n(),
            arcs: g.arcs().iter().map(|a| (a.tail, a.head)).collect(),
        }
    }

    /// In-degree equals out-degree at every vertex.
    pub fn is_balanced(&self) -> bool {
        let mut balance = vec![0i64; self.vertex_count];
        for &(u, v) in &self.arcs {
            balance[u] += 1;
            balance[v] -= 1;
        }
        balance.iter().all(|&b| b == 0)
    }
}

/// A partition of every arc into directed cycles. `q` is the cycle count;
/// `certified_maximum` marks results from the exhaustive search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    /// each cycle as arc indices in traversal order
    pub cycles: Vec<Vec<usize>>,
    pub q: usize,
    pub certified_maximum: bool,
}

/// Size cap for the exact search; larger inputs get the heuristic.
#[derive(Debug, Clone, Copy)]
pub struct DecomposeLimits {
    pub max_arcs: usize,
}

impl Default for DecomposeLimits {
    fn default() -> Self {
        Self { max_arcs: 32 }
    }
}

/// Decomposes a balanced digraph into arc-disjoint directed cycles covering
/// every arc exactly once, maximizing the cycle count when the arc count is
/// within `limits.max_arcs` (certified), otherwise peeling shortest cycles
/// first (uncertified).
pub fn max_cycle_decomposition(d: &Digraph, limits: &DecomposeLimits) -> Result<Decomposition> {
    if !d.is_balanced() {
        return Err(Error::Domain(
            "cycle decompositions need in-degree = out-degree at every vertex".into(),
        ));
    }
    if d.arcs.is_empty() {
        return Ok(Decomposition { cycles: Vec::new(), q: 0, certified_maximum: true });
    }
    if d.arcs.len() <= limits.max_arcs.min(64) {
        Ok(exact_decomposition(d))
    } else {
        Ok(heuristic_decomposition(d))
    }
}

/// Simple cycles through the lowest-indexed arc of `mask`, as arc masks.
/// Splitting any closed walk at a repeated vertex only increases the cycle
/// count, so restricting the search to simple cycles loses nothing.
fn cycles_through_least(d: &Digraph, mask: u64) -> Vec<u64> {
    let least = mask.trailing_zeros() as usize;
    let (start_tail, start_head) = d.arcs[least];
    let mut out = Vec::new();
    let mut visited = vec![false; d.vertex_count];
    visited[start_head] = true;

    fn dfs(
        d: &Digraph,
        mask: u64,
        least: usize,
        target: usize,
        at: usize,
        cycle_mask: u64,
        visited: &mut Vec<bool>,
        out: &mut Vec<u64>,
    ) {
        for (idx, &(u, v)) in d.arcs.iter().enumerate() {
            if idx == least || mask & (1 << idx) == 0 || u != at {
                continue;
            }
            if v == target {
                out.push(cycle_mask | 1 << idx);
            } else if !visited[v] {
                visited[v] = true;
                dfs(d, mask, least, target, v, cycle_mask | 1 << idx, visited, out);
                visited[v] = false;
            }
        }
    }
    dfs(d, mask, least, start_tail, start_head, 1 << least, &mut visited, &mut out);
    out
}

fn exact_decomposition(d: &Digraph) -> Decomposition {
    // memo: remaining arc mask -> (max cycles, best cycle through least arc)
    fn solve(d: &Digraph, mask: u64, memo: &mut HashMap<u64, (usize, u64)>) -> usize {
        if mask == 0 {
            return 0;
        }
        if let Some(&(q, _)) = memo.get(&mask) {
            return q;
        }
        let mut best = 0;
        let mut best_cycle = 0;
        for cycle in cycles_through_least(d, mask) {
            let q = 1 + solve(d, mask & !cycle, memo);
            if q > best {
                best = q;
                best_cycle = cycle;
            }
        }
        // a balanced digraph always has a cycle through every arc
        assert!(best > 0, "no cycle through the least remaining arc");
        memo.insert(mask, (best, best_cycle));
        best
    }

    let full: u64 = if d.arcs.len() == 64 { !0 } else { (1 << d.arcs.len()) - 1 };
    let mut memo = HashMap::new();
    let q = solve(d, full, &mut memo);

    let mut cycles = Vec::with_capacity(q);
    let mut mask = full;
    while mask != 0 {
        let (_, cycle_mask) = memo[&mask];
        cycles.push(order_cycle(d, cycle_mask));
        mask &= !cycle_mask;
    }
    Decomposition { q, cycles, certified_maximum: true }
}

/// Orders the arcs of a simple cycle mask into traversal order.
fn order_cycle(d: &Digraph, cycle_mask: u64) -> Vec<usize> {
    let least = cycle_mask.trailing_zeros() as usize;
    let mut seq = vec![least];
    let mut at = d.arcs[least].1;
    let target = d.arcs[least].0;
    while at != target {
        let next = (0..d.arcs.len())
            .find(|&idx| cycle_mask & (1 << idx) != 0 && d.arcs[idx].0 == at)
            .expect("cycle mask does not chain");
        seq.push(next);
        at = d.arcs[next].1;
    }
    seq
}

/// Peels a globally shortest remaining cycle until no arcs remain. Removing
/// a cycle keeps the digraph balanced, so the peel always terminates with
/// full coverage.
fn heuristic_decomposition(d: &Digraph) -> Decomposition {
    let mut alive = vec![true; d.arcs.len()];
    let mut remaining = d.arcs.len();
    let mut cycles = Vec::new();
    while remaining > 0 {
        let cycle = shortest_cycle(d, &alive).expect("balanced digraph ran out of cycles");
        for &idx in &cycle {
            alive[idx] = false;
        }
        remaining -= cycle.len();
        cycles.push(cycle);
    }
    Decomposition { q: cycles.len(), cycles, certified_maximum: false }
}

/// BFS from each live arc: shortest path from its head back to its tail.
fn shortest_cycle(d: &Digraph, alive: &[bool]) -> Option<Vec<usize>> {
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); d.vertex_count];
    for (idx, &(u, _)) in d.arcs.iter().enumerate() {
        if alive[idx] {
            adjacency[u].push(idx);
        }
    }
    let mut best: Option<Vec<usize>> = None;
    for (start, &(tail, head)) in d.arcs.iter().enumerate() {
        if !alive[start] {
            continue;
        }
        // BFS over vertices, tracking the entering arc
        let mut entered: Vec<Option<usize>> = vec![None; d.vertex_count];
        let mut queue = std::collections::VecDeque::new();
        entered[head] = Some(start);
        queue.push_back(head);
        'bfs: while let Some(at) = queue.pop_front() {
            for &idx in &adjacency[at] {
                if idx == start {
                    continue;
                }
                let v = d.arcs[idx].1;
                if entered[v].is_none() {
                    entered[v] = Some(idx);
                    if v == tail {
                        break 'bfs;
                    }
                    queue.push_back(v);
                }
            }
        }
        if entered[tail].is_none() {
            continue;
        }
        // walk back tail -> head, then close with the start arc
        let mut seq = Vec::new();
        let mut at = tail;
        while at != head {
            let idx = entered[at].expect("path broke during walk-back");
            seq.push(idx);
            at = d.arcs[idx].0;
        }
        seq.push(start);
        seq.reverse();
        if best.as_ref().is_none_or(|b| seq.len() < b.len()) {
            best = Some(seq);
        }
    }
    best
}

/// Re-checks a decomposition against the raw digraph: every arc covered
/// exactly once, every cycle a closed simple directed cycle.
pub fn verify_decomposition(d: &Digraph, dec: &Decomposition) -> Result<()> {
    if dec.q != dec.cycles.len() {
        return Err(Error::Structural("q does not match the cycle list".into()));
    }
    let mut covered = vec![false; d.arcs.len()];
    for (pos, cycle) in dec.cycles.iter().enumerate() {
        if cycle.len() < 2 {
            return Err(Error::Structural(format!("cycle {pos} is too short")));
        }
        let mut tails = Vec::with_capacity(cycle.len());
        for window in 0..cycle.len() {
            let here = cycle[window];
            let next = cycle[(window + 1) % cycle.len()];
            if here >= d.arcs.len() {
                return Err(Error::Structural(format!("cycle {pos} has a bad arc index")));
            }
            if covered[here] {
                return Err(Error::Structural(format!(
                    "arc {here} is covered more than once"
                )));
            }
            covered[here] = true;
            if d.arcs[here].1 != d.arcs[next].0 {
                return Err(Error::Structural(format!("cycle {pos} does not chain")));
            }
            tails.push(d.arcs[here].0);
        }
        let mut dedup = tails.clone();
        dedup.sort_unstable();
        dedup.dedup();
        if dedup.len() != tails.len() {
            return Err(Error::Structural(format!("cycle {pos} repeats a vertex")));
        }
    }
    if let Some(missing) = covered.iter().position(|&c| !c) {
        return Err(Error::Structural(format!("arc {missing} is not covered")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{canonical_bipartite, randomize_bipartite, SamplerConfig};

    #[test]
    fn single_cycle() {
        let d = Digraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]);
        let dec = max_cycle_decomposition(&d, &DecomposeLimits::default()).unwrap();
        assert_eq!(dec.q, 1);
        assert!(dec.certified_maximum);
        verify_decomposition(&d, &dec).unwrap();
    }

    #[test]
    fn antipodal_2x2_difference() {
        // identity minus anti-identity: one 4-cycle over rows {0,1}, cols {2,3}
        let d = Digraph::new(4, vec![(0, 2), (3, 0), (2, 1), (1, 3)]);
        assert!(d.is_balanced());
        let dec = max_cycle_decomposition(&d, &DecomposeLimits::default()).unwrap();
        assert_eq!(dec.q, 1);
    }

    #[test]
    fn balanced_k24_splits_into_two() {
        let g = canonical_bipartite(2, 4).unwrap();
        let d = Digraph::from_bipartite(&g);
        let dec = max_cycle_decomposition(&d, &DecomposeLimits::default()).unwrap();
        assert_eq!(dec.q, 2);
        assert!(dec.certified_maximum);
        verify_decomposition(&d, &dec).unwrap();
    }

    #[test]
    fn rejects_unbalanced() {
        let d = Digraph::new(3, vec![(0, 1), (1, 2)]);
        assert!(max_cycle_decomposition(&d, &DecomposeLimits::default()).is_err());
    }

    #[test]
    fn empty_digraph() {
        let d = Digraph::new(3, Vec::new());
        let dec = max_cycle_decomposition(&d, &DecomposeLimits::default()).unwrap();
        assert_eq!(dec.q, 0);
    }

    #[test]
    fn exact_decomposition_of_balanced_k44() {
        let g = canonical_bipartite(4, 4).unwrap();
        let d = Digraph::from_bipartite(&g);
        let dec = max_cycle_decomposition(&d, &DecomposeLimits::default()).unwrap();
        assert!(dec.certified_maximum);
        verify_decomposition(&d, &dec).unwrap();
        // cycle-count window: arcs/longest-cycle <= q <= arcs/4
        assert!(dec.q >= 16 / 8 && dec.q <= 4);
    }

    #[test]
    fn heuristic_covers_everything() {
        for seed in 0..5 {
            let g = randomize_bipartite(
                &canonical_bipartite(6, 6).unwrap(),
                SamplerConfig::new(seed, 720),
            )
            .unwrap();
            let d = Digraph::from_bipartite(&g);
            let dec = max_cycle_decomposition(&d, &DecomposeLimits::default()).unwrap();
            assert!(!dec.certified_maximum);
            verify_decomposition(&d, &dec).unwrap();
            assert!(dec.q <= 36 / 4);
        }
    }

    #[test]
    fn exact_beats_or_matches_heuristic() {
        for seed in 0..8 {
            let g = randomize_bipartite(
                &canonical_bipartite(2, 6).unwrap(),
                SamplerConfig::new(seed, 240),
            )
            .unwrap();
            let d = Digraph::from_bipartite(&g);
            let exact = max_cycle_decomposition(&d, &DecomposeLimits::default()).unwrap();
            let heur = heuristic_decomposition(&d);
            verify_decomposition(&d, &heur).unwrap();
            assert!(exact.q >= heur.q, "seed {seed}");
        }
    }

    #[test]
    fn verifier_rejects_gaps() {
        let d = Digraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]);
        let dec = Decomposition { cycles: vec![], q: 0, certified_maximum: false };
        assert!(verify_decomposition(&d, &dec).is_err());
    }

    #[test]
    fn verifier_rejects_broken_chain() {
        let d = Digraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]);
        let dec = Decomposition {
            cycles: vec![vec![0, 2, 1, 3]],
            q: 1,
            certified_maximum: false,
        };
        assert!(verify_decomposition(&d, &dec).is_err());
    }
}
