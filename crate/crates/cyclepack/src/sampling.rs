//! Instance generation: canonical balanced orientations, seed-deterministic
//! randomization by measure-preserving chain moves, and exhaustive
//! enumeration of all Eulerian orientations at tiny sizes.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::model::{BipartiteTournament, RegularTournament};

/// RNG algorithm name recorded in JSON reports for reproducibility.
pub const RNG_ALGORITHM: &str = "chacha12";

/// Enumeration guard: `m * n` may not exceed this.
pub const ENUMERATION_MAX_ARCS: usize = 36;

/// Seeded chain configuration. `steps` counts *attempted* moves, accepted
/// or not, so a run's length is independent of the acceptance rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerConfig {
    pub seed: u64,
    pub steps: u64,
}

impl SamplerConfig {
    pub fn new(seed: u64, steps: u64) -> Self {
        Self { seed, steps }
    }
}

/// Default chain length for a "well-mixed" bipartite sample: 20 moves per arc.
pub fn default_bipartite_steps(m: usize, n: usize) -> u64 {
    20 * (m as u64) * (n as u64)
}

/// Default chain length for a "well-mixed" tournament sample.
pub fn default_tournament_steps(n: usize) -> u64 {
    20 * (n as u64) * (n as u64)
}

/// The canonical balanced orientation of K_{m,n}: row `i` points forward on
/// the block of `n/2` consecutive columns starting at `floor(i*n/m)`,
/// wrapping mod n. Every window of `n/2` consecutive residues contains
/// exactly `m/2` of the start offsets, so columns balance too.
pub fn canonical_bipartite(m: usize, n: usize) -> Result<BipartiteTournament> {
    if m < 2 || n < 2 || m % 2 != 0 || n % 2 != 0 {
        return Err(Error::Domain(format!(
            "no Eulerian orientation of K_{{{m},{n}}}: class sizes must be even and >= 2"
        )));
    }
    let mut signs = vec![-1i8; m * n];
    for i in 0..m {
        let start = i * n / m;
        for t in 0..n / 2 {
            signs[i * n + (start + t) % n] = 1;
        }
    }
    let g = BipartiteTournament::from_signs(m, n, signs)?;
    debug_assert!(g.is_eulerian());
    Ok(g)
}

/// The rotational tournament on odd `n`: `i -> j` iff
/// `(j - i) mod n` lies in `1..=(n-1)/2`.
pub fn canonical_regular_tournament(n: usize) -> Result<RegularTournament> {
    if n == 0 || n % 2 == 0 {
        return Err(Error::Domain(format!(
            "no regular tournament on {n} vertices: n must be odd"
        )));
    }
    let half = (n - 1) / 2;
    let mut adj = vec![0u8; n * n];
    for i in 0..n {
        for d in 1..=half {
            adj[i * n + (i + d) % n] = 1;
        }
    }
    RegularTournament::from_adjacency(n, adj)
}

/// Splitmix-style derivation of an independent stream seed from a base
/// seed and two indices.
pub(crate) fn mix_seed(seed: u64, a: u64, b: u64) -> u64 {
    let mut z = seed ^ (a << 32) ^ b;
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[inline]
fn sample_excluding(rng: &mut ChaCha12Rng, bound: usize, skip: usize) -> usize {
    let r = rng.random_range(0..bound - 1);
    if r >= skip {
        r + 1
    } else {
        r
    }
}

/// Runs `cfg.steps` attempted rectangle flips on a balanced instance.
///
/// Each attempt picks rows `i != j` and columns `k != l` uniformly; when the
/// four signs alternate (`+ -` over `- +` or its mirror) all four are
/// negated, which preserves every row and column sum. Other sign patterns
/// are no-ops. The walk is the interchange move on the sign matrix.
pub fn randomize_bipartite(
    g: &BipartiteTournament,
    cfg: SamplerConfig,
) -> Result<BipartiteTournament> {
    if !g.is_eulerian() {
        return Err(Error::Domain(
            "chain moves require a balanced (Eulerian) starting instance".into(),
        ));
    }
    let (m, n) = (g.m(), g.n());
    let mut signs = g.signs_slice().to_vec();
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.steps {
        let i = rng.random_range(0..m);
        let j = sample_excluding(&mut rng, m, i);
        let k = rng.random_range(0..n);
        let l = sample_excluding(&mut rng, n, k);
        let s = signs[i * n + k];
        if signs[i * n + l] == -s && signs[j * n + k] == -s && signs[j * n + l] == s {
            signs[i * n + k] = -s;
            signs[i * n + l] = s;
            signs[j * n + k] = s;
            signs[j * n + l] = -s;
            // the flip only touches rows i, j and columns k, l
            debug_assert!(
                [i, j].iter().all(|&r| {
                    (0..n).filter(|&c| signs[r * n + c] == 1).count() * 2 == n
                }) && [k, l].iter().all(|&c| {
                    (0..m).filter(|&r| signs[r * n + c] == 1).count() * 2 == m
                })
            );
        }
    }
    BipartiteTournament::from_signs(m, n, signs)
}

/// Runs `cfg.steps` attempted triangle reversals on a regular tournament.
///
/// Each attempt picks three distinct vertices uniformly; when they induce a
/// directed triangle all three arcs are reversed, which preserves every
/// out-degree. The sampled distribution carries no uniformity claim; outputs
/// are heuristic-random regular tournaments.
pub fn randomize_tournament(
    t: &RegularTournament,
    cfg: SamplerConfig,
) -> Result<RegularTournament> {
    if !t.is_regular() {
        return Err(Error::Domain(
            "triangle reversals require a regular starting tournament".into(),
        ));
    }
    let n = t.n();
    if n < 3 {
        return Ok(t.clone());
    }
    let mut adj = t.adj_slice().to_vec();
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    let beats = |adj: &[u8], u: usize, v: usize| adj[u * n + v] == 1;
    for _ in 0..cfg.steps {
        let a = rng.random_range(0..n);
        let b = sample_excluding(&mut rng, n, a);
        let c = {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let mut r = rng.random_range(0..n - 2);
            if r >= lo {
                r += 1;
            }
            if r >= hi {
                r += 1;
            }
            r
        };
        let cycle = if beats(&adj, a, b) && beats(&adj, b, c) && beats(&adj, c, a) {
            Some([(a, b), (b, c), (c, a)])
        } else if beats(&adj, a, c) && beats(&adj, c, b) && beats(&adj, b, a) {
            Some([(a, c), (c, b), (b, a)])
        } else {
            None
        };
        if let Some(arcs) = cycle {
            for (u, v) in arcs {
                adj[u * n + v] = 0;
                adj[v * n + u] = 1;
            }
            // the reversal only touches the three triangle vertices
            debug_assert!([a, b, c].iter().all(|&v| {
                (0..n).filter(|&u| adj[v * n + u] == 1).count() * 2 == n - 1
            }));
        }
    }
    RegularTournament::from_adjacency(n, adj)
}

/// Streams every Eulerian orientation of K_{m,n} exactly once, in
/// lexicographic order of the row-major `+`/`-` string.
pub fn enumerate_eulerian_bipartite(m: usize, n: usize) -> Result<EulerianBipartiteIter> {
    if m < 2 || n < 2 || m % 2 != 0 || n % 2 != 0 {
        return Err(Error::Domain(format!(
            "no Eulerian orientation of K_{{{m},{n}}}: class sizes must be even and >= 2"
        )));
    }
    if m * n > ENUMERATION_MAX_ARCS {
        return Err(Error::Resource(format!(
            "enumeration guard: {m}x{n} = {} arcs exceeds the {ENUMERATION_MAX_ARCS}-arc cap",
            m * n
        )));
    }
    Ok(EulerianBipartiteIter::new(m, n))
}

/// Backtracking iterator over balanced sign matrices. Rows are filled top
/// down from a precomputed list of balanced row patterns sorted by their
/// `+`/`-` string, with column-count feasibility pruning.
pub struct EulerianBipartiteIter {
    m: usize,
    n: usize,
    patterns: Vec<Vec<i8>>,
    chosen: Vec<usize>,
    col_plus: Vec<usize>,
    started: bool,
    done: bool,
}

impl EulerianBipartiteIter {
    fn new(m: usize, n: usize) -> Self {
        let mut patterns = balanced_rows(n);
        // '+' sorts before '-': order by the sign string, not numeric value
        patterns.sort_by_key(|p| p.iter().map(|&s| s < 0).collect::<Vec<bool>>());
        Self {
            m,
            n,
            patterns,
            chosen: Vec::with_capacity(m),
            col_plus: vec![0; n],
            started: false,
            done: false,
        }
    }

    fn fits(&self, depth: usize, pattern: usize) -> bool {
        let rows_after = self.m - depth - 1;
        let target = self.m / 2;
        self.patterns[pattern].iter().zip(&self.col_plus).all(|(&s, &c)| {
            let c = c + usize::from(s == 1);
            c <= target && target - c <= rows_after
        })
    }

    fn push(&mut self, pattern: usize) {
        for (j, &s) in self.patterns[pattern].iter().enumerate() {
            self.col_plus[j] += usize::from(s == 1);
        }
        self.chosen.push(pattern);
    }

    fn pop(&mut self) -> usize {
        let pattern = self.chosen.pop().expect("pop on empty assignment");
        for (j, &s) in self.patterns[pattern].iter().enumerate() {
            self.col_plus[j] -= usize::from(s == 1);
        }
        pattern
    }

    fn build(&self) -> BipartiteTournament {
        let mut signs = Vec::with_capacity(self.m * self.n);
        for &p in &self.chosen {
            signs.extend_from_slice(&self.patterns[p]);
        }
        BipartiteTournament::from_signs(self.m, self.n, signs)
            .expect("enumerated signs are complete by construction")
    }
}

impl Iterator for EulerianBipartiteIter {
    type Item = BipartiteTournament;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let mut next_start = if self.started {
            self.pop() + 1 // resume past the previously yielded leaf
        } else {
            self.started = true;
            0
        };
        loop {
            let depth = self.chosen.len();
            let found = (next_start..self.patterns.len()).find(|&p| self.fits(depth, p));
            match found {
                Some(p) => {
                    self.push(p);
                    if self.chosen.len() == self.m {
                        return Some(self.build());
                    }
                    next_start = 0;
                }
                None => {
                    if self.chosen.is_empty() {
                        self.done = true;
                        return None;
                    }
                    next_start = self.pop() + 1;
                }
            }
        }
    }
}

/// All length-n sign rows with exactly n/2 entries equal to +1.
fn balanced_rows(n: usize) -> Vec<Vec<i8>> {
    let mut out = Vec::new();
    let mut row = vec![-1i8; n];
    fn rec(row: &mut Vec<i8>, start: usize, left: usize, out: &mut Vec<Vec<i8>>) {
        if left == 0 {
            out.push(row.clone());
            return;
        }
        let n = row.len();
        for pos in start..=(n - left) {
            row[pos] = 1;
            rec(row, pos + 1, left - 1, out);
            row[pos] = -1;
        }
    }
    rec(&mut row, 0, n / 2, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::bipartite_from_rows;
    use std::collections::HashSet;

    #[test]
    fn canonical_smallest() {
        let g = canonical_bipartite(2, 2).unwrap();
        assert_eq!(g.to_file_string(), "2 2\n+-\n-+\n");
    }

    #[test]
    fn canonical_2x4_blocks() {
        let g = canonical_bipartite(2, 4).unwrap();
        assert_eq!(g.to_file_string(), "2 4\n++--\n--++\n");
        for j in 0..4 {
            assert_eq!(2 - g.col_out_degree(j), 1, "column {j} +1 count");
        }
    }

    #[test]
    fn canonical_4x4_column_counts() {
        let g = canonical_bipartite(4, 4).unwrap();
        for j in 0..4 {
            assert_eq!(4 - g.col_out_degree(j), 2);
        }
        assert!(g.validate().is_eulerian);
    }

    #[test]
    fn canonical_is_eulerian_for_all_small_even_sizes() {
        for m in (2..=12).step_by(2) {
            for n in (2..=12).step_by(2) {
                let g = canonical_bipartite(m, n).unwrap();
                assert!(g.is_eulerian(), "canonical K_{{{m},{n}}} unbalanced");
            }
        }
    }

    #[test]
    fn canonical_rejects_odd_sizes() {
        assert!(canonical_bipartite(3, 4).is_err());
        assert!(canonical_bipartite(4, 5).is_err());
    }

    #[test]
    fn chain_zero_steps_is_identity() {
        let g = canonical_bipartite(4, 6).unwrap();
        let out = randomize_bipartite(&g, SamplerConfig::new(7, 0)).unwrap();
        assert_eq!(out, g);
    }

    #[test]
    fn chain_stays_within_k22_orbit() {
        let both: Vec<_> = enumerate_eulerian_bipartite(2, 2).unwrap().collect();
        assert_eq!(both.len(), 2);
        let g = canonical_bipartite(2, 2).unwrap();
        for seed in 0..20 {
            let out = randomize_bipartite(&g, SamplerConfig::new(seed, 50)).unwrap();
            assert!(both.contains(&out));
        }
    }

    #[test]
    fn chain_preserves_balance_k44() {
        let g = canonical_bipartite(4, 4).unwrap();
        let out = randomize_bipartite(&g, SamplerConfig::new(42, 10_000)).unwrap();
        assert!(out.validate().is_eulerian);
    }

    #[test]
    fn chain_is_deterministic() {
        let g = canonical_bipartite(6, 8).unwrap();
        let a = randomize_bipartite(&g, SamplerConfig::new(99, 2_000)).unwrap();
        let b = randomize_bipartite(&g, SamplerConfig::new(99, 2_000)).unwrap();
        assert_eq!(a.to_file_string(), b.to_file_string());
    }

    #[test]
    fn chain_rejects_unbalanced_input() {
        let g = bipartite_from_rows(&["++", "++"]).unwrap();
        assert!(randomize_bipartite(&g, SamplerConfig::new(0, 5)).is_err());
    }

    #[test]
    fn rotational_tournaments_are_regular() {
        for (n, deg) in [(3, 1), (5, 2), (7, 3)] {
            let t = canonical_regular_tournament(n).unwrap();
            for v in 0..n {
                assert_eq!(t.out_degree(v), deg);
            }
            assert!(t.validate().is_eulerian);
        }
        assert!(canonical_regular_tournament(4).is_err());
    }

    #[test]
    fn tournament_chain_identity_and_regularity() {
        let t = canonical_regular_tournament(5).unwrap();
        assert_eq!(randomize_tournament(&t, SamplerConfig::new(3, 0)).unwrap(), t);
        let out = randomize_tournament(&t, SamplerConfig::new(3, 1_000)).unwrap();
        assert!(out.validate().is_eulerian);
    }

    #[test]
    fn tournament_chain_on_triangle() {
        let t = canonical_regular_tournament(3).unwrap();
        let flipped = canonical_regular_tournament(3).unwrap().validate();
        assert!(flipped.is_eulerian);
        for seed in 0..10 {
            let out = randomize_tournament(&t, SamplerConfig::new(seed, 17)).unwrap();
            // only two regular tournaments exist on 3 vertices
            assert!(out.is_regular());
        }
    }

    #[test]
    fn enumeration_counts_match_brute_force() {
        for (m, n, expected) in [(2, 2, 2usize), (2, 4, 6), (4, 4, 90)] {
            let enumerated: Vec<_> = enumerate_eulerian_bipartite(m, n).unwrap().collect();
            assert_eq!(enumerated.len(), expected, "count for {m}x{n}");
            assert_eq!(brute_force_count(m, n), expected, "oracle for {m}x{n}");
            let unique: HashSet<String> =
                enumerated.iter().map(|g| g.to_file_string()).collect();
            assert_eq!(unique.len(), expected, "duplicates for {m}x{n}");
        }
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let strings: Vec<String> = enumerate_eulerian_bipartite(4, 4)
            .unwrap()
            .map(|g| g.to_file_string())
            .collect();
        let mut sorted = strings.clone();
        sorted.sort();
        assert_eq!(strings, sorted);
    }

    #[test]
    fn enumeration_guard() {
        assert!(matches!(
            enumerate_eulerian_bipartite(6, 8),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn chain_orbit_covers_every_orientation_2x4() {
        let all: HashSet<String> = enumerate_eulerian_bipartite(2, 4)
            .unwrap()
            .map(|g| g.to_file_string())
            .collect();
        let mut seen = HashSet::new();
        let mut state = canonical_bipartite(2, 4).unwrap();
        seen.insert(state.to_file_string());
        for step in 0..2_000u64 {
            state = randomize_bipartite(&state, SamplerConfig::new(step, 1)).unwrap();
            seen.insert(state.to_file_string());
            if seen.len() == all.len() {
                break;
            }
        }
        assert_eq!(seen, all);
    }

    #[test]
    fn chain_orbit_covers_every_orientation_4x4() {
        let all: HashSet<String> = enumerate_eulerian_bipartite(4, 4)
            .unwrap()
            .map(|g| g.to_file_string())
            .collect();
        let mut seen = HashSet::new();
        let mut state = canonical_bipartite(4, 4).unwrap();
        seen.insert(state.to_file_string());
        for step in 0..100_000u64 {
            state = randomize_bipartite(&state, SamplerConfig::new(step, 1)).unwrap();
            seen.insert(state.to_file_string());
            if seen.len() == all.len() {
                break;
            }
        }
        assert_eq!(seen.len(), all.len());
    }

    /// Oracle: test all 2^(mn) sign matrices, keep the balanced ones.
    fn brute_force_count(m: usize, n: usize) -> usize {
        let arcs = m * n;
        (0u32..1 << arcs)
            .filter(|&bits| {
                let signs: Vec<i8> = (0..arcs)
                    .map(|p| if bits >> p & 1 == 1 { 1 } else { -1 })
                    .collect();
                BipartiteTournament::from_signs(m, n, signs)
                    .map(|g| g.is_eulerian())
                    .unwrap_or(false)
            })
            .count()
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn chain_preserves_balance(
                m in prop::sample::select(vec![2usize, 4, 6]),
                n in prop::sample::select(vec![2usize, 4, 6]),
                seed in any::<u64>(),
                steps in 0u64..300,
            ) {
                let g = canonical_bipartite(m, n).unwrap();
                let out = randomize_bipartite(&g, SamplerConfig::new(seed, steps)).unwrap();
                prop_assert!(out.is_eulerian());
            }

            #[test]
            fn reversal_keeps_chain_output_balanced(
                seed in any::<u64>(),
                steps in 0u64..200,
            ) {
                let g = canonical_bipartite(4, 6).unwrap();
                let out = randomize_bipartite(&g, SamplerConfig::new(seed, steps)).unwrap();
                prop_assert!(out.reversed().is_eulerian());
            }

            #[test]
            fn bipartite_file_round_trip(seed in any::<u64>()) {
                let g = canonical_bipartite(6, 4).unwrap();
                let out = randomize_bipartite(&g, SamplerConfig::new(seed, 100)).unwrap();
                let text = out.to_file_string();
                prop_assert_eq!(BipartiteTournament::parse_str(&text).unwrap(), out);
            }

            #[test]
            fn tournament_chain_preserves_regularity(
                n in prop::sample::select(vec![3usize, 5, 7, 9]),
                seed in any::<u64>(),
                steps in 0u64..300,
            ) {
                let t = canonical_regular_tournament(n).unwrap();
                let out = randomize_tournament(&t, SamplerConfig::new(seed, steps)).unwrap();
                prop_assert!(out.is_regular());
                let text = out.to_file_string();
                prop_assert_eq!(RegularTournament::parse_str(&text).unwrap(), out);
            }
        }
    }
}
