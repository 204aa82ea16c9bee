//! Fixed-margin 0/1 matrix classes, their interchange graphs, true
//! distances by breadth-first search, and the difference-digraph route to
//! the same distances through maximum cycle decompositions.

use std::collections::{BTreeSet, HashMap, VecDeque};

use rayon::prelude::*;

use crate::decompose::{max_cycle_decomposition, DecomposeLimits, Digraph};
use crate::error::{Error, Result};
use crate::model::{parse_dims2, strict_lines};

/// A 0/1 matrix with its row and column sums recorded.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarginMatrix {
    m: usize,
    n: usize,
    entries: Vec<u8>,
    row_sums: Vec<usize>,
    col_sums: Vec<usize>,
}

impl MarginMatrix {
    pub fn from_entries(m: usize, n: usize, entries: Vec<u8>) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::Structural(format!("degenerate shape {m}x{n}")));
        }
        if entries.len() != m * n {
            return Err(Error::Structural(format!(
                "entry vector has {} cells, expected {}",
                entries.len(),
                m * n
            )));
        }
        if let Some(pos) = entries.iter().position(|&e| e > 1) {
            return Err(Error::Encoding(format!(
                "entry at ({}, {}) is {}, expected 0 or 1",
                pos / n,
                pos % n,
                entries[pos]
            )));
        }
        let row_sums = (0..m)
            .map(|i| entries[i * n..(i + 1) * n].iter().map(|&e| e as usize).sum())
            .collect();
        let col_sums = (0..n)
            .map(|j| (0..m).map(|i| entries[i * n + j] as usize).sum())
            .collect();
        Ok(Self { m, n, entries, row_sums, col_sums })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.n + j]
    }

    pub fn row_sums(&self) -> &[usize] {
        &self.row_sums
    }

    pub fn col_sums(&self) -> &[usize] {
        &self.col_sums
    }

    pub fn same_margins(&self, other: &Self) -> bool {
        self.m == other.m
            && self.n == other.n
            && self.row_sums == other.row_sums
            && self.col_sums == other.col_sums
    }

    /// The matrix with every entry flipped; together they sum to all-ones.
    pub fn complement(&self) -> Self {
        let entries = self.entries.iter().map(|&e| 1 - e).collect();
        Self::from_entries(self.m, self.n, entries).expect("complement preserves shape")
    }

    pub fn to_file_string(&self) -> String {
        let mut out = format!("{} {}\n", self.m, self.n);
        for i in 0..self.m {
            for j in 0..self.n {
                out.push(if self.get(i, j) == 1 { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    pub fn parse_str(text: &str) -> Result<Self> {
        let mut lines = strict_lines(text)?;
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty input".into()))?;
        let (m, n) = parse_dims2(header)?;
        let mut entries = Vec::with_capacity(m * n);
        for i in 0..m {
            let row = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing row {i}")))?;
            if row.chars().count() != n {
                return Err(Error::Parse(format!(
                    "row {i} has {} characters, expected {n}",
                    row.chars().count()
                )));
            }
            for (j, c) in row.chars().enumerate() {
                match c {
                    '0' => entries.push(0),
                    '1' => entries.push(1),
                    other => {
                        return Err(Error::Parse(format!(
                            "row {i} column {j}: unexpected character {other:?}"
                        )))
                    }
                }
            }
        }
        if let Some(extra) = lines.next() {
            return Err(Error::Parse(format!("trailing content: {extra:?}")));
        }
        Self::from_entries(m, n, entries)
    }
}

/// Resource caps for class enumeration and distance computations.
#[derive(Debug, Clone, Copy)]
pub struct ClassLimits {
    /// largest number of matrices enumerated or visited before bailing out
    pub max_class: usize,
    pub decompose: DecomposeLimits,
}

impl Default for ClassLimits {
    fn default() -> Self {
        Self { max_class: 20_000, decompose: DecomposeLimits::default() }
    }
}

/// All length-n 0/1 rows with `ones` set bits, ascending as bit strings.
fn row_patterns(n: usize, ones: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut row = vec![0u8; n];
    fn rec(row: &mut Vec<u8>, pos: usize, left: usize, out: &mut Vec<Vec<u8>>) {
        let n = row.len();
        if left > n - pos {
            return;
        }
        if pos == n {
            out.push(row.clone());
            return;
        }
        rec(row, pos + 1, left, out); // 0 first keeps the order lexicographic
        if left > 0 {
            row[pos] = 1;
            rec(row, pos + 1, left - 1, out);
            row[pos] = 0;
        }
    }
    rec(&mut row, 0, ones, &mut out);
    out
}

/// Every 0/1 matrix with the given margins, in lexicographic row-major
/// order. Infeasible margins yield an empty list; blowing the class-size
/// cap is a resource error.
pub fn enumerate_matrix_class(
    row_sums: &[usize],
    col_sums: &[usize],
    limits: &ClassLimits,
) -> Result<Vec<MarginMatrix>> {
    let m = row_sums.len();
    let n = col_sums.len();
    if m == 0 || n == 0 {
        return Ok(Vec::new());
    }
    let total: usize = row_sums.iter().sum();
    if total != col_sums.iter().sum::<usize>()
        || row_sums.iter().any(|&r| r > n)
        || col_sums.iter().any(|&c| c > m)
    {
        return Ok(Vec::new());
    }

    let mut pattern_cache: HashMap<usize, Vec<Vec<u8>>> = HashMap::new();
    for &r in row_sums {
        pattern_cache.entry(r).or_insert_with(|| row_patterns(n, r));
    }

    let mut out = Vec::new();
    let mut stacked: Vec<u8> = Vec::with_capacity(m * n);
    let mut col_fill = vec![0usize; n];

    fn rec(
        depth: usize,
        row_sums: &[usize],
        col_sums: &[usize],
        pattern_cache: &HashMap<usize, Vec<Vec<u8>>>,
        stacked: &mut Vec<u8>,
        col_fill: &mut Vec<usize>,
        out: &mut Vec<MarginMatrix>,
        max_class: usize,
    ) -> Result<()> {
        let m = row_sums.len();
        let n = col_sums.len();
        if depth == m {
            if out.len() == max_class {
                return Err(Error::Resource(format!(
                    "matrix class exceeds the {max_class}-element cap"
                )));
            }
            out.push(MarginMatrix::from_entries(m, n, stacked.clone())?);
            return Ok(());
        }
        let rows_after = m - depth - 1;
        for pattern in &pattern_cache[&row_sums[depth]] {
            let ok = pattern.iter().zip(col_fill.iter()).zip(col_sums).all(
                |((&bit, &fill), &target)| {
                    let fill = fill + bit as usize;
                    fill <= target && target - fill <= rows_after
                },
            );
            if !ok {
                continue;
            }
            stacked.extend_from_slice(pattern);
            for (j, &bit) in pattern.iter().enumerate() {
                col_fill[j] += bit as usize;
            }
            rec(depth + 1, row_sums, col_sums, pattern_cache, stacked, col_fill, out, max_class)?;
            for (j, &bit) in pattern.iter().enumerate() {
                col_fill[j] -= bit as usize;
            }
            stacked.truncate(stacked.len() - n);
        }
        Ok(())
    }

    rec(0, row_sums, col_sums, &pattern_cache, &mut stacked, &mut col_fill, &mut out, limits.max_class)?;
    Ok(out)
}

/// All matrices one interchange away: every 2x2 submatrix equal to the
/// identity or anti-identity pattern, swapped. Results are deduplicated by
/// matrix value and returned in ascending entry order.
pub fn interchange_neighbors(a: &MarginMatrix) -> Vec<MarginMatrix> {
    let (m, n) = (a.m(), a.n());
    let mut seen: BTreeSet<Vec<u8>> = BTreeSet::new();
    for i in 0..m {
        for j in (i + 1)..m {
            for k in 0..n {
                for l in (k + 1)..n {
                    let quad = (a.get(i, k), a.get(i, l), a.get(j, k), a.get(j, l));
                    if quad == (1, 0, 0, 1) || quad == (0, 1, 1, 0) {
                        let mut entries = a.entries.clone();
                        for &(r, c) in &[(i, k), (i, l), (j, k), (j, l)] {
                            entries[r * n + c] = 1 - entries[r * n + c];
                        }
                        seen.insert(entries);
                    }
                }
            }
        }
    }
    seen.into_iter()
        .map(|entries| {
            let neighbor = MarginMatrix::from_entries(m, n, entries)
                .expect("interchange preserves shape");
            debug_assert!(neighbor.same_margins(a));
            neighbor
        })
        .collect()
}

/// Exact interchange distance by breadth-first search over the class.
pub fn bfs_distance(a: &MarginMatrix, b: &MarginMatrix, limits: &ClassLimits) -> Result<usize> {
    if !a.same_margins(b) {
        return Err(Error::Domain("matrices live in different margin classes".into()));
    }
    if a == b {
        return Ok(0);
    }
    let mut dist: HashMap<Vec<u8>, usize> = HashMap::new();
    dist.insert(a.entries.clone(), 0);
    let mut queue = VecDeque::new();
    queue.push_back(a.clone());
    while let Some(current) = queue.pop_front() {
        let here = dist[&current.entries];
        for neighbor in interchange_neighbors(&current) {
            if dist.contains_key(&neighbor.entries) {
                continue;
            }
            if neighbor == *b {
                return Ok(here + 1);
            }
            if dist.len() == limits.max_class {
                return Err(Error::Resource(format!(
                    "breadth-first search exceeded the {}-matrix cap",
                    limits.max_class
                )));
            }
            dist.insert(neighbor.entries.clone(), here + 1);
            queue.push_back(neighbor);
        }
    }
    Err(Error::Structural(
        "target unreachable inside its own margin class".into(),
    ))
}

/// The difference digraph of two same-margin matrices: `+1` cells of `A - B`
/// become row-to-column arcs, `-1` cells column-to-row arcs. Rows use
/// vertex ids `0..m`, columns `m..m+n`. Matching margins make it balanced.
pub fn difference_digraph(a: &MarginMatrix, b: &MarginMatrix) -> Result<Digraph> {
    if !a.same_margins(b) {
        return Err(Error::Domain("matrices live in different margin classes".into()));
    }
    let (m, n) = (a.m(), a.n());
    let mut arcs = Vec::new();
    for i in 0..m {
        for j in 0..n {
            match (a.get(i, j), b.get(i, j)) {
                (1, 0) => arcs.push((i, m + j)),
                (0, 1) => arcs.push((m + j, i)),
                _ => {}
            }
        }
    }
    let digraph = Digraph::new(m + n, arcs);
    debug_assert!(digraph.is_balanced());
    Ok(digraph)
}

/// Distance facts for one matrix pair: differing-cell count, maximum cycle
/// decomposition size of the difference digraph, the derived distance, and
/// optionally the breadth-first-search distance for cross-checking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceRecord {
    pub d: usize,
    pub q: usize,
    pub q_certified: bool,
    pub i_walkup: usize,
    pub i_bfs: Option<usize>,
}

/// Computes the interchange distance as `d/2 - q`. With a certified `q`
/// and a BFS distance both present the two routes must agree, and that is
/// asserted; an uncertified (heuristic) `q` only bounds the distance.
pub fn walkup_distance(
    a: &MarginMatrix,
    b: &MarginMatrix,
    limits: &ClassLimits,
    with_bfs: bool,
) -> Result<DistanceRecord> {
    let diff = difference_digraph(a, b)?;
    let d = diff.arcs.len();
    debug_assert_eq!(d % 2, 0);
    let dec = max_cycle_decomposition(&diff, &limits.decompose)?;
    let i_walkup = d / 2 - dec.q;
    let i_bfs = if with_bfs { Some(bfs_distance(a, b, limits)?) } else { None };
    if dec.certified_maximum {
        if let Some(bfs) = i_bfs {
            assert_eq!(
                i_walkup, bfs,
                "distance routes disagree: d/2 - q = {i_walkup}, bfs = {bfs}"
            );
        }
    }
    Ok(DistanceRecord { d, q: dec.q, q_certified: dec.certified_maximum, i_walkup, i_bfs })
}

/// Distances between complementary matrix pairs in the balanced class
/// (all row sums `n/2`, all column sums `m/2`).
#[derive(Debug, Clone, PartialEq)]
pub struct AntipodalAudit {
    pub m: usize,
    pub n: usize,
    pub class_size: usize,
    pub pair_count: usize,
    pub min_distance: usize,
    pub max_distance: usize,
    /// every pair met the `mn/4` floor
    pub floor_ok: bool,
    /// `mn/4`
    pub floor: f64,
    /// `(sqrt 2 / 4) mn`, the reference ceiling constant
    pub ceiling_reference: f64,
    pub all_q_certified: bool,
}

/// Audits every complementary pair in the balanced class of m-by-n matrices.
pub fn antipodal_audit(m: usize, n: usize, limits: &ClassLimits) -> Result<AntipodalAudit> {
    if m % 2 != 0 || n % 2 != 0 {
        return Err(Error::Domain(
            "complementary pairs need even dimensions so margins halve".into(),
        ));
    }
    let rows = vec![n / 2; m];
    let cols = vec![m / 2; n];
    let class = enumerate_matrix_class(&rows, &cols, limits)?;
    let mut min_distance = usize::MAX;
    let mut max_distance = 0;
    let mut floor_ok = true;
    let mut all_q_certified = true;
    let mut pair_count = 0;
    for a in &class {
        let b = a.complement();
        if a.entries > b.entries {
            continue; // each unordered pair once
        }
        let record = walkup_distance(a, &b, limits, false)?;
        pair_count += 1;
        min_distance = min_distance.min(record.i_walkup);
        max_distance = max_distance.max(record.i_walkup);
        floor_ok &= 4 * record.i_walkup >= m * n;
        all_q_certified &= record.q_certified;
    }
    Ok(AntipodalAudit {
        m,
        n,
        class_size: class.len(),
        pair_count,
        min_distance,
        max_distance,
        floor_ok,
        floor: (m * n) as f64 / 4.0,
        ceiling_reference: (m * n) as f64 * std::f64::consts::SQRT_2 / 4.0,
        all_q_certified,
    })
}

/// Diameter of one interchange graph, with an achieving pair.
#[derive(Debug, Clone, PartialEq)]
pub struct DiameterReport {
    pub class_size: usize,
    pub diameter: usize,
    pub witness_a: MarginMatrix,
    pub witness_b: MarginMatrix,
    /// `mn/4`
    pub quarter_bound: f64,
    /// `5mn/12`
    pub five_twelfths_bound: f64,
    pub within_quarter_bound: bool,
}

/// All-sources breadth-first search over the whole class. Errors out if the
/// class is not connected (it always is for genuine margin classes) or the
/// enumeration cap is hit.
pub fn diameter(
    row_sums: &[usize],
    col_sums: &[usize],
    limits: &ClassLimits,
) -> Result<DiameterReport> {
    let class = enumerate_matrix_class(row_sums, col_sums, limits)?;
    if class.is_empty() {
        return Err(Error::Domain("empty matrix class has no diameter".into()));
    }
    let index: HashMap<Vec<u8>, usize> = class
        .iter()
        .enumerate()
        .map(|(i, mat)| (mat.entries.clone(), i))
        .collect();
    let adjacency: Vec<Vec<usize>> = class
        .par_iter()
        .map(|mat| {
            interchange_neighbors(mat)
                .into_iter()
                .map(|nb| {
                    *index
                        .get(&nb.entries)
                        .expect("neighbor escaped its margin class")
                })
                .collect()
        })
        .collect();

    let eccentricities: Vec<Result<(usize, usize)>> = (0..class.len())
        .into_par_iter()
        .map(|source| {
            let mut dist = vec![usize::MAX; class.len()];
            dist[source] = 0;
            let mut queue = VecDeque::new();
            queue.push_back(source);
            let mut far = (0, source);
            let mut reached = 1;
            while let Some(at) = queue.pop_front() {
                for &nb in &adjacency[at] {
                    if dist[nb] == usize::MAX {
                        dist[nb] = dist[at] + 1;
                        reached += 1;
                        if dist[nb] > far.0 || (dist[nb] == far.0 && nb < far.1) {
                            far = (dist[nb], nb);
                        }
                        queue.push_back(nb);
                    }
                }
            }
            if reached != class.len() {
                return Err(Error::Structural(format!(
                    "class disconnected: {reached} of {} reached from vertex {source}",
                    class.len()
                )));
            }
            Ok(far)
        })
        .collect();

    let mut diameter = 0;
    let mut witness = (0, 0);
    for (source, ecc) in eccentricities.into_iter().enumerate() {
        let (dist, target) = ecc?;
        if dist > diameter {
            diameter = dist;
            witness = (source, target);
        }
    }
    let mn = (row_sums.len() * col_sums.len()) as f64;
    Ok(DiameterReport {
        class_size: class.len(),
        diameter,
        witness_a: class[witness.0].clone(),
        witness_b: class[witness.1].clone(),
        quarter_bound: mn / 4.0,
        five_twelfths_bound: 5.0 * mn / 12.0,
        within_quarter_bound: (diameter as f64) <= mn / 4.0,
    })
}
