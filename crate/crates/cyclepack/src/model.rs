//! Orientation data types for complete bipartite graphs and complete graphs,
//! arc indexing, and the validation predicates used everywhere else.
//!
//! Vertex ids live in a single dense space: for a bipartite instance the
//! row-class vertices are `0..m` and the column-class vertices are `m..m+n`;
//! for a tournament they are `0..n`.

use crate::error::{Error, Result};

/// One arc of a host graph: tail, head, and a dense index into the host's
/// arc universe (`0..m*n` for bipartite hosts, `0..n*(n-1)/2` for tournaments).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ArcRef {
    pub tail: usize,
    pub head: usize,
    pub index: usize,
}

/// Per-vertex balance violation: observed out/in degrees of a vertex whose
/// in-degree and out-degree differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeViolation {
    pub vertex: usize,
    pub out_degree: usize,
    pub in_degree: usize,
}

/// Result of validating an orientation.
///
/// `delta_margin` is the smallest `d` such that every vertex has in- and
/// out-degree at least `(1-d)` times half its total degree, capped at 1.
/// An exactly balanced orientation has `delta_margin == 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub is_complete: bool,
    pub is_eulerian: bool,
    pub delta_margin: f64,
    pub violations: Vec<DegreeViolation>,
}

/// A complete orientation of K_{m,n}, stored as an m-by-n sign matrix.
/// `+1` at `(i, j)` means the arc runs from row vertex `a_i` to column
/// vertex `b_j`; `-1` means `b_j -> a_i`.
///
/// Instances are immutable after construction. Balance (the Eulerian
/// predicate) is *not* a construction invariant; it is what `validate`
/// reports, so partially balanced instances are first-class values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BipartiteTournament {
    m: usize,
    n: usize,
    signs: Vec<i8>,
}

impl BipartiteTournament {
    /// Builds an instance from a row-major sign matrix.
    pub fn from_signs(m: usize, n: usize, signs: Vec<i8>) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::Structural(format!(
                "class sizes must be positive, got {m}x{n}"
            )));
        }
        if signs.len() != m * n {
            return Err(Error::Structural(format!(
                "sign matrix has {} entries, expected {}x{} = {}",
                signs.len(),
                m,
                n,
                m * n
            )));
        }
        if let Some(pos) = signs.iter().position(|&s| s != 1 && s != -1) {
            return Err(Error::Encoding(format!(
                "entry at ({}, {}) is {}, expected +1 or -1",
                pos / n,
                pos % n,
                signs[pos]
            )));
        }
        Ok(Self { m, n, signs })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Total number of arcs, `m * n`.
    pub fn arc_count(&self) -> usize {
        self.m * self.n
    }

    #[inline]
    pub fn sign(&self, i: usize, j: usize) -> i8 {
        self.signs[i * self.n + j]
    }

    /// True when the arc between `a_i` and `b_j` runs `a_i -> b_j`.
    #[inline]
    pub fn forward(&self, i: usize, j: usize) -> bool {
        self.sign(i, j) == 1
    }

    /// Dense vertex id of column vertex `b_j`.
    #[inline]
    pub fn b_vertex(&self, j: usize) -> usize {
        self.m + j
    }

    /// The arc between row `i` and column `j`; its index is `i * n + j`.
    pub fn arc(&self, i: usize, j: usize) -> ArcRef {
        let index = i * self.n + j;
        if self.forward(i, j) {
            ArcRef { tail: i, head: self.b_vertex(j), index }
        } else {
            ArcRef { tail: self.b_vertex(j), head: i, index }
        }
    }

    /// All arcs in index order.
    pub fn arcs(&self) -> Vec<ArcRef> {
        (0..self.m)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .map(|(i, j)| self.arc(i, j))
            .collect()
    }

    /// Out-degree of row vertex `a_i` (count of `+1` entries in row `i`).
    pub fn row_out_degree(&self, i: usize) -> usize {
        (0..self.n).filter(|&j| self.forward(i, j)).count()
    }

    /// Out-degree of column vertex `b_j` (count of `-1` entries in column `j`).
    pub fn col_out_degree(&self, j: usize) -> usize {
        (0..self.m).filter(|&i| !self.forward(i, j)).count()
    }

    /// The instance with every arc reversed.
    pub fn reversed(&self) -> Self {
        Self {
            m: self.m,
            n: self.n,
            signs: self.signs.iter().map(|s| -s).collect(),
        }
    }

    pub(crate) fn signs_slice(&self) -> &[i8] {
        &self.signs
    }

    /// Checks completeness and balance. `is_eulerian` requires even class
    /// sizes and every row/column to carry exactly half its arcs outward.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let mut delta: f64 = 0.0;
        for i in 0..self.m {
            let out = self.row_out_degree(i);
            let inn = self.n - out;
            if out != inn {
                violations.push(DegreeViolation { vertex: i, out_degree: out, in_degree: inn });
            }
            let half = self.n as f64 / 2.0;
            delta = delta.max(1.0 - (out.min(inn) as f64) / half);
        }
        for j in 0..self.n {
            let out = self.col_out_degree(j);
            let inn = self.m - out;
            if out != inn {
                violations.push(DegreeViolation {
                    vertex: self.b_vertex(j),
                    out_degree: out,
                    in_degree: inn,
                });
            }
            let half = self.m as f64 / 2.0;
            delta = delta.max(1.0 - (out.min(inn) as f64) / half);
        }
        let is_eulerian = violations.is_empty() && self.m % 2 == 0 && self.n % 2 == 0;
        ValidationReport {
            is_complete: true,
            is_eulerian,
            delta_margin: delta.clamp(0.0, 1.0),
            violations,
        }
    }

    /// True iff `validate().is_eulerian`; cheaper name for preconditions.
    pub fn is_eulerian(&self) -> bool {
        self.m % 2 == 0
            && self.n % 2 == 0
            && (0..self.m).all(|i| self.row_out_degree(i) * 2 == self.n)
            && (0..self.n).all(|j| self.col_out_degree(j) * 2 == self.m)
    }

    /// Serializes to the on-disk format: `"m n"` then m rows of `+`/`-`.
    pub fn to_file_string(&self) -> String {
        let mut out = format!("{} {}\n", self.m, self.n);
        for i in 0..self.m {
            for j in 0..self.n {
                out.push(if self.forward(i, j) { '+' } else { '-' });
            }
            out.push('\n');
        }
        out
    }

    /// Parses the on-disk format produced by `to_file_string`. A trailing
    /// newline is optional; any other deviation is a parse error.
    pub fn parse_str(text: &str) -> Result<Self> {
        let mut lines = strict_lines(text)?;
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty input".into()))?;
        let (m, n) = parse_dims2(header)?;
        let mut signs = Vec::with_capacity(m * n);
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
                    '+' => signs.push(1),
                    '-' => signs.push(-1),
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
        Self::from_signs(m, n, signs)
    }
}

/// An orientation of K_n with odd n, stored as a 0/1 adjacency matrix with
/// `adj[i][j] = 1` meaning arc `i -> j`. Antisymmetry and a zero diagonal
/// are construction invariants; regularity (all out-degrees `(n-1)/2`) is
/// what `validate` reports.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RegularTournament {
    n: usize,
    adj: Vec<u8>,
}

impl RegularTournament {
    pub fn from_adjacency(n: usize, adj: Vec<u8>) -> Result<Self> {
        if n == 0 || n % 2 == 0 {
            return Err(Error::Domain(format!(
                "regular tournaments need odd n >= 1, got {n}"
            )));
        }
        if adj.len() != n * n {
            return Err(Error::Structural(format!(
                "adjacency has {} entries, expected {}",
                adj.len(),
                n * n
            )));
        }
        if let Some(pos) = adj.iter().position(|&b| b > 1) {
            return Err(Error::Encoding(format!(
                "entry at ({}, {}) is {}, expected 0 or 1",
                pos / n,
                pos % n,
                adj[pos]
            )));
        }
        for i in 0..n {
            if adj[i * n + i] != 0 {
                return Err(Error::Encoding(format!("self-loop at vertex {i}")));
            }
            for j in (i + 1)..n {
                if adj[i * n + j] + adj[j * n + i] != 1 {
                    return Err(Error::Encoding(format!(
                        "pair ({i}, {j}) is not oriented exactly once"
                    )));
                }
            }
        }
        Ok(Self { n, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Total number of arcs, `n * (n - 1) / 2`.
    pub fn arc_count(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    #[inline]
    pub fn beats(&self, i: usize, j: usize) -> bool {
        self.adj[i * self.n + j] == 1
    }

    pub fn out_degree(&self, v: usize) -> usize {
        (0..self.n).filter(|&u| self.beats(v, u)).count()
    }

    /// All arcs: unordered pairs `{i, j}` with `i < j` in lexicographic
    /// order, oriented by the adjacency matrix.
    pub fn arcs(&self) -> Vec<ArcRef> {
        let mut out = Vec::with_capacity(self.arc_count());
        let mut index = 0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let (tail, head) = if self.beats(i, j) { (i, j) } else { (j, i) };
                out.push(ArcRef { tail, head, index });
                index += 1;
            }
        }
        out
    }

    pub(crate) fn adj_slice(&self) -> &[u8] {
        &self.adj
    }

    pub fn validate(&self) -> ValidationReport {
        let half = (self.n - 1) as f64 / 2.0;
        let mut violations = Vec::new();
        let mut delta: f64 = 0.0;
        for v in 0..self.n {
            let out = self.out_degree(v);
            let inn = self.n - 1 - out;
            if out != inn {
                violations.push(DegreeViolation { vertex: v, out_degree: out, in_degree: inn });
            }
            if half > 0.0 {
                delta = delta.max(1.0 - (out.min(inn) as f64) / half);
            }
        }
        let is_eulerian = violations.is_empty();
        ValidationReport {
            is_complete: true,
            is_eulerian,
            delta_margin: delta.clamp(0.0, 1.0),
            violations,
        }
    }

    pub fn is_regular(&self) -> bool {
        (0..self.n).all(|v| self.out_degree(v) * 2 == self.n - 1)
    }

    /// Serializes to the on-disk format: `"n"` then n rows of `0`/`1`.
    pub fn to_file_string(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.push(if self.beats(i, j) { '1' } else { '0' });
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
        let n: usize = header
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad header line {header:?}")))?;
        let mut adj = Vec::with_capacity(n * n);
        for i in 0..n {
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
                    '0' => adj.push(0),
                    '1' => adj.push(1),
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
        Self::from_adjacency(n, adj)
    }
}

/// Splits into lines, allowing one optional trailing newline and nothing else.
pub(crate) fn strict_lines(text: &str) -> Result<impl Iterator<Item = &str>> {
    let body = text.strip_suffix('\n').unwrap_or(text);
    if body.is_empty() {
        return Err(Error::Parse("empty input".into()));
    }
    Ok(body.split('\n'))
}

pub(crate) fn parse_dims2(header: &str) -> Result<(usize, usize)> {
    let mut it = header.split(' ');
    let m = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad header line {header:?}")))?;
    let n = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad header line {header:?}")))?;
    if it.next().is_some() {
        return Err(Error::Parse(format!("bad header line {header:?}")));
    }
    Ok((m, n))
}

/// Parses a bipartite sign matrix from `+`/`-` row strings; test/dev helper.
pub fn bipartite_from_rows(rows: &[&str]) -> Result<BipartiteTournament> {
    let m = rows.len();
    let n = rows.first().map_or(0, |r| r.len());
    let mut signs = Vec::with_capacity(m * n);
    for row in rows {
        for c in row.chars() {
            signs.push(match c {
                '+' => 1,
                '-' => -1,
                other => return Err(Error::Encoding(format!("bad sign char {other:?}"))),
            });
        }
    }
    BipartiteTournament::from_signs(m, n, signs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k22_eulerian() -> BipartiteTournament {
        bipartite_from_rows(&["+-", "-+"]).unwrap()
    }

    #[test]
    fn k22_cycle_is_eulerian() {
        let report = k22_eulerian().validate();
        assert!(report.is_complete);
        assert!(report.is_eulerian);
        assert_eq!(report.delta_margin, 0.0);
        assert!(report.violations.is_empty());
    }

    #[test]
    fn all_arcs_one_way_is_not_eulerian() {
        let g = bipartite_from_rows(&["++", "++"]).unwrap();
        let report = g.validate();
        assert!(!report.is_eulerian);
        let violated: Vec<usize> = report.violations.iter().map(|v| v.vertex).collect();
        // both column vertices are starved of out-arcs
        assert!(violated.contains(&2) && violated.contains(&3));
        assert_eq!(report.delta_margin, 1.0);
    }

    #[test]
    fn arc_counts_match_universe() {
        assert_eq!(k22_eulerian().arcs().len(), 4);
        let g46 = BipartiteTournament::from_signs(4, 6, vec![1; 24]).unwrap();
        assert_eq!(g46.arcs().len(), 24);
    }

    #[test]
    fn arc_index_is_position() {
        let g = k22_eulerian();
        for (pos, arc) in g.arcs().into_iter().enumerate() {
            assert_eq!(arc.index, pos);
        }
        // sign -1 at (0,1) means b_1 -> a_0
        let arc = g.arc(0, 1);
        assert_eq!((arc.tail, arc.head), (3, 0));
    }

    #[test]
    fn eulerian_sign_sum_is_zero() {
        let g = k22_eulerian();
        let mut total = 0i32;
        for i in 0..2 {
            for j in 0..2 {
                total += g.sign(i, j) as i32;
            }
        }
        assert_eq!(total, 0);
    }

    #[test]
    fn reversal_preserves_eulerian() {
        let g = k22_eulerian();
        assert!(g.reversed().validate().is_eulerian);
    }

    #[test]
    fn single_flip_delta_margin() {
        // flipping one entry of an Eulerian instance gives max(2/n, 2/m)
        let g = bipartite_from_rows(&["++--", "-++-", "--++", "+--+"]).unwrap();
        assert!(g.is_eulerian());
        let mut signs = g.signs_slice().to_vec();
        signs[0] = -signs[0];
        let flipped = BipartiteTournament::from_signs(4, 4, signs).unwrap();
        let report = flipped.validate();
        assert!(!report.is_eulerian);
        assert_eq!(report.delta_margin, 0.5);

        let g = bipartite_from_rows(&["++--", "--++"]).unwrap();
        assert!(g.is_eulerian());
        let mut signs = g.signs_slice().to_vec();
        signs[0] = -signs[0];
        let flipped = BipartiteTournament::from_signs(2, 4, signs).unwrap();
        // max(2/4, 2/2) = 1
        assert_eq!(flipped.validate().delta_margin, 1.0);
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            BipartiteTournament::from_signs(2, 2, vec![1, 1, 1]),
            Err(Error::Structural(_))
        ));
        assert!(matches!(
            BipartiteTournament::from_signs(2, 2, vec![1, 0, 1, 1]),
            Err(Error::Encoding(_))
        ));
    }

    #[test]
    fn cyclic_triangle_is_regular() {
        let t = RegularTournament::from_adjacency(3, vec![0, 1, 0, 0, 0, 1, 1, 0, 0]).unwrap();
        let report = t.validate();
        assert!(report.is_eulerian);
        assert_eq!(report.delta_margin, 0.0);
    }

    #[test]
    fn transitive_triangle_is_not_regular() {
        let t = RegularTournament::from_adjacency(3, vec![0, 1, 1, 0, 0, 1, 0, 0, 0]).unwrap();
        let report = t.validate();
        assert!(!report.is_eulerian);
        assert_eq!(report.violations.len(), 2); // out-degrees 2, 1, 0
    }

    #[test]
    fn tournament_construction_errors() {
        assert!(matches!(
            RegularTournament::from_adjacency(4, vec![0; 16]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            RegularTournament::from_adjacency(3, vec![0, 1, 0, 1, 0, 1, 1, 0, 0]),
            Err(Error::Encoding(_))
        ));
    }

    #[test]
    fn tournament_arcs() {
        let t = RegularTournament::from_adjacency(3, vec![0, 1, 0, 0, 0, 1, 1, 0, 0]).unwrap();
        let arcs = t.arcs();
        assert_eq!(arcs.len(), 3);
        assert_eq!(arcs[0], ArcRef { tail: 0, head: 1, index: 0 });
        assert_eq!(arcs[1], ArcRef { tail: 2, head: 0, index: 1 });
        assert_eq!(arcs[2], ArcRef { tail: 1, head: 2, index: 2 });

        let mut adj = vec![0u8; 25];
        for i in 0..5usize {
            for d in 1..=2usize {
                adj[i * 5 + (i + d) % 5] = 1;
            }
        }
        let t5 = RegularTournament::from_adjacency(5, adj).unwrap();
        assert_eq!(t5.arcs().len(), 10);
    }

    #[test]
    fn bipartite_round_trip() {
        let g = bipartite_from_rows(&["++--", "-++-", "--++", "+--+"]).unwrap();
        let text = g.to_file_string();
        assert_eq!(BipartiteTournament::parse_str(&text).unwrap(), g);
        // trailing newline is optional
        assert_eq!(
            BipartiteTournament::parse_str(text.trim_end_matches('\n')).unwrap(),
            g
        );
    }

    #[test]
    fn tournament_round_trip() {
        let t = RegularTournament::from_adjacency(3, vec![0, 1, 0, 0, 0, 1, 1, 0, 0]).unwrap();
        let text = t.to_file_string();
        assert_eq!(RegularTournament::parse_str(&text).unwrap(), t);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(matches!(
            BipartiteTournament::parse_str("2 2\n+-\n-x\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            BipartiteTournament::parse_str("2 2\n+-\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            BipartiteTournament::parse_str("2 2\n+-\n-+\n\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            BipartiteTournament::parse_str("2 2 9\n+-\n-+\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            RegularTournament::parse_str("3\n010\n001\n10\n"),
            Err(Error::Parse(_))
        ));
    }
}
