//! Random vertex partitions of regular tournaments, the bipartite pair
//! graphs they induce, per-pair cycle packing, and the aggregated report
//! against the quadratic packing target.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::model::{BipartiteTournament, RegularTournament};
use crate::packing::{local_search_pack, verify_packing};
use crate::sampling::mix_seed;

/// Result of one random class assignment: the classes, per-vertex
/// per-class out/in neighbor counts, and the worst relative deviation of
/// any count from its expectation `(n-1)/(2m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionOutcome {
    pub classes: Vec<Vec<usize>>,
    pub class_sizes: Vec<usize>,
    /// `d_plus[i][v]`: out-neighbors of `v` inside class `i`
    pub d_plus: Vec<Vec<usize>>,
    pub d_minus: Vec<Vec<usize>>,
    pub delta_observed: f64,
    /// filled in by the experiment once a threshold is fixed
    pub all_pairs_delta_eulerian: Option<bool>,
}

/// Assigns each vertex a uniform independent class in `0..m` and tabulates
/// all neighbor counts exactly.
pub fn partition_vertices(
    t: &RegularTournament,
    m: usize,
    seed: u64,
) -> Result<PartitionOutcome> {
    if m == 0 {
        return Err(Error::Domain("need at least one class".into()));
    }
    let n = t.n();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut classes = vec![Vec::new(); m];
    let mut assignment = vec![0usize; n];
    for v in 0..n {
        let c = rng.random_range(0..m);
        assignment[v] = c;
        classes[c].push(v);
    }
    let mut d_plus = vec![vec![0usize; n]; m];
    let mut d_minus = vec![vec![0usize; n]; m];
    for v in 0..n {
        for u in 0..n {
            if u == v {
                continue;
            }
            if t.beats(v, u) {
                d_plus[assignment[u]][v] += 1;
            } else {
                d_minus[assignment[u]][v] += 1;
            }
        }
    }
    let expected = (n as f64 - 1.0) / (2.0 * m as f64);
    let mut delta_observed: f64 = 0.0;
    for i in 0..m {
        for v in 0..n {
            for d in [d_plus[i][v], d_minus[i][v]] {
                delta_observed = delta_observed.max((d as f64 - expected).abs() / expected);
            }
        }
    }
    Ok(PartitionOutcome {
        class_sizes: classes.iter().map(Vec::len).collect(),
        classes,
        d_plus,
        d_minus,
        delta_observed,
        all_pairs_delta_eulerian: None,
    })
}

/// The complete bipartite orientation between two partition classes, with
/// the vertex lists needed to map arcs back into the tournament.
#[derive(Debug, Clone)]
pub struct PairGraph {
    pub graph: BipartiteTournament,
    pub row_vertices: Vec<usize>,
    pub col_vertices: Vec<usize>,
}

/// Restricts the tournament to the arcs between classes `i` and `j`. The
/// orientation is inherited; nothing about it is balanced in general.
pub fn pair_graph(
    t: &RegularTournament,
    outcome: &PartitionOutcome,
    i: usize,
    j: usize,
) -> Result<PairGraph> {
    if i == j {
        return Err(Error::Domain("a pair graph needs two distinct classes".into()));
    }
    let rows = outcome.classes[i].clone();
    let cols = outcome.classes[j].clone();
    if rows.is_empty() || cols.is_empty() {
        return Err(Error::Domain(format!("class {} is empty", if rows.is_empty() { i } else { j })));
    }
    let mut signs = Vec::with_capacity(rows.len() * cols.len());
    for &r in &rows {
        for &c in &cols {
            signs.push(if t.beats(r, c) { 1 } else { -1 });
        }
    }
    Ok(PairGraph {
        graph: BipartiteTournament::from_signs(rows.len(), cols.len(), signs)?,
        row_vertices: rows,
        col_vertices: cols,
    })
}

/// Per-pair packing summary.
#[derive(Debug, Clone, PartialEq)]
pub struct PairPackingRecord {
    pub class_a: usize,
    pub class_b: usize,
    pub rows: usize,
    pub cols: usize,
    pub arc_count: usize,
    pub delta_margin: f64,
    pub delta_clean: bool,
    pub packed: usize,
}

/// Aggregated experiment summary.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub delta_target: f64,
    pub delta_observed: f64,
    pub class_sizes: Vec<usize>,
    /// all class sizes within (1 +- delta/4)(n-1)/m
    pub size_bounds_ok: bool,
    pub size_lower: f64,
    pub size_upper: f64,
    pub all_pairs_delta_eulerian: bool,
    pub skipped_pairs: usize,
    pub per_pair: Vec<PairPackingRecord>,
    pub total_packed: usize,
    /// `n^2 / (8 + sqrt 32)`
    pub target: f64,
    pub ratio: f64,
    /// `4 n^2 exp(-delta^2 n / 128)` at `delta = delta_target`
    pub chernoff_tail_estimate: f64,
    pub sum_squared_class_sizes: usize,
    pub cross_arcs: usize,
    /// `cross_arcs == (n^2 - sum |V_i|^2) / 2`
    pub cross_arcs_identity_ok: bool,
    pub global_certificate_ok: bool,
    /// aggregated size stays under the global cap `floor(arcs/4)`
    pub packing_cap_ok: bool,
}

/// Full experiment output: the summary plus the aggregated certificate
/// (cycles as tournament vertex-pair arcs) for independent re-verification.
#[derive(Debug, Clone)]
pub struct ExperimentRun {
    pub report: ExperimentReport,
    pub outcome: PartitionOutcome,
    pub packed_cycles: Vec<[(usize, usize); 4]>,
}

/// Re-checks an aggregated certificate against the raw tournament: every
/// 4-tuple is a directed cycle of `t` and no arc (unordered vertex pair)
/// appears twice.
pub fn verify_global_packing(
    t: &RegularTournament,
    cycles: &[[(usize, usize); 4]],
) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for (pos, cycle) in cycles.iter().enumerate() {
        for k in 0..4 {
            let (tail, head) = cycle[k];
            if tail >= t.n() || head >= t.n() {
                return Err(Error::Structural(format!("cycle {pos} leaves the vertex range")));
            }
            if !t.beats(tail, head) {
                return Err(Error::Structural(format!(
                    "cycle {pos} uses non-arc {tail}->{head}"
                )));
            }
            if head != cycle[(k + 1) % 4].0 {
                return Err(Error::Structural(format!("cycle {pos} does not chain")));
            }
            let key = (tail.min(head), tail.max(head));
            if !seen.insert(key) {
                return Err(Error::Structural(format!(
                    "arc {{{}, {}}} appears in two cycles",
                    key.0, key.1
                )));
            }
        }
        let mut tails: Vec<usize> = cycle.iter().map(|&(tail, _)| tail).collect();
        tails.sort_unstable();
        tails.dedup();
        if tails.len() != 4 {
            return Err(Error::Structural(format!("cycle {pos} repeats a vertex")));
        }
    }
    Ok(())
}

/// Partitions a regular tournament into `round(sqrt n)` classes, packs
/// 4-cycles in every cross-class pair graph independently, and aggregates.
/// Pair graphs failing the delta threshold are still packed; the report
/// separates clean pairs from violators.
pub fn run_partition_experiment(
    t: &RegularTournament,
    seed: u64,
    delta_target: f64,
) -> Result<ExperimentRun> {
    if !t.is_regular() {
        return Err(Error::Domain("the experiment needs a regular tournament".into()));
    }
    let n = t.n();
    if n < 9 {
        return Err(Error::Domain("the experiment needs n >= 9".into()));
    }
    let m = (n as f64).sqrt().round() as usize;
    let mut outcome = partition_vertices(t, m, seed)?;

    let mut per_pair = Vec::new();
    let mut packed_cycles: Vec<[(usize, usize); 4]> = Vec::new();
    let mut skipped_pairs = 0;
    let mut all_clean = true;
    for i in 0..m {
        for j in (i + 1)..m {
            let pair = match pair_graph(t, &outcome, i, j) {
                Ok(pair) => pair,
                Err(_) => {
                    skipped_pairs += 1;
                    continue;
                }
            };
            let delta_margin = pair.graph.validate().delta_margin;
            let delta_clean = delta_margin <= delta_target;
            all_clean &= delta_clean;
            let arc_count = pair.graph.arc_count();
            let budget = (arc_count as u64).min(300);
            let packing = local_search_pack(&pair.graph, mix_seed(seed, i as u64, j as u64), budget);
            verify_packing(&pair.graph, &packing)?;
            for cycle in &packing.cycles {
                let map = |vertex: usize| {
                    if vertex < pair.row_vertices.len() {
                        pair.row_vertices[vertex]
                    } else {
                        pair.col_vertices[vertex - pair.row_vertices.len()]
                    }
                };
                packed_cycles.push([
                    (map(cycle[0].tail), map(cycle[0].head)),
                    (map(cycle[1].tail), map(cycle[1].head)),
                    (map(cycle[2].tail), map(cycle[2].head)),
                    (map(cycle[3].tail), map(cycle[3].head)),
                ]);
            }
            per_pair.push(PairPackingRecord {
                class_a: i,
                class_b: j,
                rows: pair.row_vertices.len(),
                cols: pair.col_vertices.len(),
                arc_count,
                delta_margin,
                delta_clean,
                packed: packing.size(),
            });
        }
    }
    outcome.all_pairs_delta_eulerian = Some(all_clean);

    let global_certificate_ok = verify_global_packing(t, &packed_cycles).is_ok();
    let total_packed: usize = per_pair.iter().map(|p| p.packed).sum();
    debug_assert_eq!(total_packed, packed_cycles.len());

    let sum_squared: usize = outcome.class_sizes.iter().map(|&s| s * s).sum();
    let cross_arcs: usize = per_pair.iter().map(|p| p.arc_count).sum();
    let cross_arcs_identity_ok = 2 * cross_arcs == n * n - sum_squared;

    let expected_size = (n as f64 - 1.0) / m as f64;
    let size_lower = (1.0 - delta_target / 4.0) * expected_size;
    let size_upper = (1.0 + delta_target / 4.0) * expected_size;
    let size_bounds_ok = outcome
        .class_sizes
        .iter()
        .all(|&s| size_lower <= s as f64 && (s as f64) <= size_upper);

    let target = (n * n) as f64 / (8.0 + 32.0_f64.sqrt());
    let nf = n as f64;
    let report = ExperimentReport {
        n,
        m,
        seed,
        delta_target,
        delta_observed: outcome.delta_observed,
        class_sizes: outcome.class_sizes.clone(),
        size_bounds_ok,
        size_lower,
        size_upper,
        all_pairs_delta_eulerian: all_clean,
        skipped_pairs,
        total_packed,
        target,
        ratio: total_packed as f64 / target,
        chernoff_tail_estimate: 4.0 * nf * nf * (-delta_target * delta_target * nf / 128.0).exp(),
        sum_squared_class_sizes: sum_squared,
        cross_arcs,
        cross_arcs_identity_ok,
        global_certificate_ok,
        packing_cap_ok: total_packed <= t.arc_count() / 4,
        per_pair,
    };
    Ok(ExperimentRun { report, outcome, packed_cycles })
}
