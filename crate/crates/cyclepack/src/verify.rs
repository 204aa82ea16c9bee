//! Batch verification sweeps: run a named family of checks over exhaustive
//! tiny instances plus seeded samples, and report per-instance pass/fail
//! with aggregate ratios. A failing instance is serialized so it can be
//! re-loaded through the normal parsers.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::census::{
    arc_profile, four_cycle_census, four_cycle_count_fast, codegree_table, pair_count_identity_ok,
};
use crate::error::Result;
use crate::interchange::{bfs_distance, enumerate_matrix_class, walkup_distance, ClassLimits};
use crate::model::BipartiteTournament;
use crate::sampling::{
    canonical_bipartite, default_bipartite_steps, enumerate_eulerian_bipartite, mix_seed,
    randomize_bipartite, SamplerConfig,
};

/// The verifiable claim families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyTarget {
    /// every balanced instance has at least `m^2 n^2 / 32` directed 4-cycles
    Lemma21,
    /// the alpha-dependent cycle floor, plus the per-arc degree sum and the
    /// `mn/8` floor for the busiest arc
    Lemma22,
    /// interchange distance equals `d/2 - q` against breadth-first search
    Walkup,
    /// the four counting identities and the co-degree identity
    CensusIdentities,
}

impl VerifyTarget {
    pub fn name(self) -> &'static str {
        match self {
            VerifyTarget::Lemma21 => "lemma21",
            VerifyTarget::Lemma22 => "lemma22",
            VerifyTarget::Walkup => "walkup",
            VerifyTarget::CensusIdentities => "census_identities",
        }
    }
}

/// One instance's verdict. `ratio` is the slack of the checked inequality
/// (checked quantity over its floor) where that makes sense.
#[derive(Debug, Clone)]
pub struct CheckRecord {
    pub label: String,
    pub pass: bool,
    pub ratio: Option<f64>,
}

/// Everything a sweep produced.
#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub target: VerifyTarget,
    pub checks: Vec<CheckRecord>,
    pub all_pass: bool,
    pub min_ratio: Option<f64>,
    /// serialized failing inputs as (suggested file name, file content)
    pub counterexamples: Vec<(String, String)>,
}

impl SweepOutcome {
    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass).count()
    }
}

/// Exhaustive tiny sizes swept by every bipartite target.
pub const EXHAUSTIVE_SIZES: [(usize, usize); 3] = [(2, 2), (2, 4), (4, 4)];

fn bipartite_instances(
    sizes: &[(usize, usize)],
    samples: usize,
    seed: u64,
) -> Result<Vec<(String, BipartiteTournament)>> {
    let mut out = Vec::new();
    for (m, n) in EXHAUSTIVE_SIZES {
        for (idx, g) in enumerate_eulerian_bipartite(m, n)?.enumerate() {
            out.push((format!("exhaustive {m}x{n} #{idx}"), g));
        }
    }
    for (si, &(m, n)) in sizes.iter().enumerate() {
        let base = canonical_bipartite(m, n)?;
        for k in 0..samples {
            let s = mix_seed(seed, si as u64, k as u64);
            let cfg = SamplerConfig::new(s, default_bipartite_steps(m, n));
            out.push((format!("sampled {m}x{n} #{k}"), randomize_bipartite(&base, cfg)?));
        }
    }
    Ok(out)
}

fn sweep_bipartite<F>(
    target: VerifyTarget,
    sizes: &[(usize, usize)],
    samples: usize,
    seed: u64,
    check: F,
) -> Result<SweepOutcome>
where
    F: Fn(&BipartiteTournament) -> (bool, Option<f64>) + Sync,
{
    let instances = bipartite_instances(sizes, samples, seed)?;
    let checks: Vec<CheckRecord> = instances
        .par_iter()
        .map(|(label, g)| {
            let (pass, ratio) = check(g);
            CheckRecord { label: label.clone(), pass, ratio }
        })
        .collect();
    let mut counterexamples = Vec::new();
    if let Some(pos) = checks.iter().position(|c| !c.pass) {
        counterexamples.push((
            format!("counterexample-{}.txt", target.name()),
            instances[pos].1.to_file_string(),
        ));
    }
    Ok(finish(target, checks, counterexamples))
}

fn finish(
    target: VerifyTarget,
    checks: Vec<CheckRecord>,
    counterexamples: Vec<(String, String)>,
) -> SweepOutcome {
    let all_pass = checks.iter().all(|c| c.pass);
    let min_ratio = checks
        .iter()
        .filter_map(|c| c.ratio)
        .min_by(|a, b| a.partial_cmp(b).expect("ratios are finite"));
    SweepOutcome { target, checks, all_pass, min_ratio, counterexamples }
}

/// Runs one verification sweep. `sizes`/`samples` drive the sampled part
/// of the bipartite targets and the random-pair count of the distance
/// target; the exhaustive part is always included.
pub fn run_sweep(
    target: VerifyTarget,
    sizes: &[(usize, usize)],
    samples: usize,
    seed: u64,
) -> Result<SweepOutcome> {
    match target {
        VerifyTarget::Lemma21 => sweep_bipartite(target, sizes, samples, seed, |g| {
            let c = four_cycle_census(g);
            let m2n2 = (g.m() * g.m() * g.n() * g.n()) as u64;
            let pass = 32 * c.x >= m2n2;
            (pass, Some(32.0 * c.x as f64 / m2n2 as f64))
        }),
        VerifyTarget::Lemma22 => sweep_bipartite(target, sizes, samples, seed, |g| {
            let c = four_cycle_census(g);
            let profile = match arc_profile(g) {
                Ok(p) => p,
                Err(_) => return (false, None),
            };
            let mn = (g.m() * g.n()) as i128;
            let k = profile.alpha_g_scaled as i128;
            let floor_scaled_16 = mn * mn - 16 * k * mn + 64 * k * k;
            let floor_ok = 16 * c.x as i128 >= floor_scaled_16;
            let degree_sum_ok = profile.d.iter().sum::<u64>() == 4 * c.x;
            let busiest_ok = 8 * profile.max_d as i128 >= mn;
            let ratio = (floor_scaled_16 > 0)
                .then(|| 16.0 * c.x as f64 / floor_scaled_16 as f64);
            (floor_ok && degree_sum_ok && busiest_ok, ratio)
        }),
        VerifyTarget::CensusIdentities => sweep_bipartite(target, sizes, samples, seed, |g| {
            let c = four_cycle_census(g);
            let table = codegree_table(g);
            let pass = c.identities_ok(true)
                && pair_count_identity_ok(&c, &table)
                && four_cycle_count_fast(g) == c.x;
            (pass, None)
        }),
        VerifyTarget::Walkup => sweep_walkup(samples, seed),
    }
}

/// Distance checks: every pair of the three fixed tiny classes, plus
/// `samples` random pairs from the balanced 4x4 class.
fn sweep_walkup(samples: usize, seed: u64) -> Result<SweepOutcome> {
    let limits = ClassLimits::default();
    let mut pairs = Vec::new();
    for (rows, cols) in [
        (vec![1usize, 1], vec![1usize, 1]),
        (vec![1, 1, 1], vec![1, 1, 1]),
        (vec![2, 2], vec![2, 2]),
    ] {
        let class = enumerate_matrix_class(&rows, &cols, &limits)?;
        let tag = format!("{}x{}", rows.len(), cols.len());
        for i in 0..class.len() {
            for j in i..class.len() {
                pairs.push((
                    format!("class {tag} pair {i}-{j}"),
                    class[i].clone(),
                    class[j].clone(),
                ));
            }
        }
    }
    let class44 = enumerate_matrix_class(&[2; 4], &[2; 4], &limits)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    for k in 0..samples {
        let i = rng.random_range(0..class44.len());
        let mut j = rng.random_range(0..class44.len() - 1);
        if j >= i {
            j += 1;
        }
        pairs.push((
            format!("sampled 4x4 pair #{k} ({i}-{j})"),
            class44[i].clone(),
            class44[j].clone(),
        ));
    }

    let checks: Vec<CheckRecord> = pairs
        .par_iter()
        .map(|(label, a, b)| {
            let pass = match walkup_distance(a, b, &limits, false) {
                Ok(record) => {
                    record.q_certified
                        && bfs_distance(a, b, &limits)
                            .map(|bfs| bfs == record.i_walkup)
                            .unwrap_or(false)
                }
                Err(_) => false,
            };
            CheckRecord { label: label.clone(), pass, ratio: None }
        })
        .collect();

    let mut counterexamples = Vec::new();
    if let Some(pos) = checks.iter().position(|c| !c.pass) {
        counterexamples.push((
            "counterexample-walkup-a.txt".to_string(),
            pairs[pos].1.to_file_string(),
        ));
        counterexamples.push((
            "counterexample-walkup-b.txt".to_string(),
            pairs[pos].2.to_file_string(),
        ));
    }
    Ok(finish(VerifyTarget::Walkup, checks, counterexamples))
}
