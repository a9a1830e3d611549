//! Vietoris–Rips graphs, flag (clique) complexes and GF(2) boundary matrices.
//!
//! The closed convention is used throughout: `u ~ v` iff `0 < d(u, v) <= k`.
//! Simplices are stored per dimension in flat vertex arrays, sorted
//! lexicographically, so the `i`-th simplex of dimension `d` occupies
//! `data[i * (d + 1) .. (i + 1) * (d + 1)]`.

use std::fmt;

use crate::error::{Error, Result};
use crate::metric::{FiniteMetricSpace, Vertex};

/// Default cap on the total number of enumerated simplices.
pub const DEFAULT_SIMPLEX_BUDGET: usize = 50_000_000;

/// Simple undirected graph with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<Vertex>>,
}

impl Graph {
    pub fn empty(vertex_count: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); vertex_count],
        }
    }

    pub fn complete(vertex_count: usize) -> Self {
        let adjacency = (0..vertex_count as Vertex)
            .map(|v| (0..vertex_count as Vertex).filter(|&u| u != v).collect())
            .collect();
        Graph { adjacency }
    }

    /// Builds a graph from an edge list; duplicate edges collapse.
    pub fn from_edges(vertex_count: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); vertex_count];
        for &(u, v) in edges {
            if u == v {
                return Err(Error::invalid(format!("self-loop at {u}")));
            }
            if u as usize >= vertex_count || v as usize >= vertex_count {
                return Err(Error::invalid(format!("edge ({u}, {v}) out of range")));
            }
            adjacency[u as usize].push(v);
            adjacency[v as usize].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { adjacency })
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v as usize]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v as usize].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adjacency[u as usize].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_complete(&self) -> bool {
        let n = self.vertex_count();
        self.adjacency.iter().all(|a| a.len() + 1 == n)
    }

    /// Whether every pair of `vertices` is adjacent.
    pub fn is_clique(&self, vertices: &[Vertex]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(i, &u)| vertices[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    /// Relabels vertices: vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[Vertex]) -> Result<Self> {
        if perm.len() != self.vertex_count() {
            return Err(Error::invalid("permutation length mismatch"));
        }
        let mut edges = Vec::with_capacity(self.edge_count());
        for (u, list) in self.adjacency.iter().enumerate() {
            for &v in list {
                if (u as Vertex) < v {
                    edges.push((perm[u], perm[v as usize]));
                }
            }
        }
        Graph::from_edges(self.vertex_count(), &edges)
    }
}

/// The 1-skeleton of `VR(space, k)`.
pub fn vr_graph(space: &FiniteMetricSpace, k: u32) -> Graph {
    let n = space.point_count() as Vertex;
    let adjacency = (0..n)
        .map(|u| {
            (0..n)
                .filter(|&v| v != u && space.distance(u, v) <= k)
                .collect()
        })
        .collect();
    Graph { adjacency }
}

/// A simplex: a nonempty strictly ascending vertex list.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex(Vec<Vertex>);

impl Simplex {
    pub fn new(vertices: Vec<Vertex>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::invalid("empty simplex"));
        }
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid(format!(
                "simplex vertices not strictly ascending: {vertices:?}"
            )));
        }
        Ok(Simplex(vertices))
    }

    /// Sorts and deduplicates an arbitrary vertex collection.
    pub fn from_unsorted(mut vertices: Vec<Vertex>) -> Result<Self> {
        vertices.sort_unstable();
        vertices.dedup();
        Simplex::new(vertices)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_subset_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.0 {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

/// All simplices of one dimension, flat and lexicographically sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexList {
    dim: usize,
    data: Vec<Vertex>,
}

impl SimplexList {
    fn new(dim: usize) -> Self {
        SimplexList {
            dim,
            data: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len() / (self.dim + 1)
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, i: usize) -> &[Vertex] {
        let w = self.dim + 1;
        &self.data[i * w..(i + 1) * w]
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, Vertex> {
        self.data.chunks_exact(self.dim + 1)
    }

    /// Index of `simplex` in this list.
    pub fn position(&self, simplex: &[Vertex]) -> Option<usize> {
        debug_assert_eq!(simplex.len(), self.dim + 1);
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(mid).cmp(simplex) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }
}

/// The clique complex of a graph, enumerated up to a dimension cap.
#[derive(Clone, Debug)]
pub struct FlagComplex {
    graph: Graph,
    max_dim: usize,
    levels: Vec<SimplexList>,
    truncated: bool,
}

impl FlagComplex {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    /// Simplices of dimension `d` (empty past the cap).
    pub fn simplices(&self, d: usize) -> Option<&SimplexList> {
        self.levels.get(d)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.levels.iter().map(SimplexList::len).collect()
    }

    /// True when cliques of dimension `max_dim + 1` exist but were not listed.
    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    /// `Some(max_dim)` if the enumeration cap cut off higher simplices.
    pub fn truncated_at(&self) -> Option<usize> {
        self.truncated.then_some(self.max_dim)
    }

    /// Highest dimension with at least one simplex.
    pub fn top_dim(&self) -> Option<usize> {
        self.levels.iter().rposition(|l| !l.is_empty())
    }

    pub fn total_simplices(&self) -> usize {
        self.levels.iter().map(SimplexList::len).sum()
    }
}

struct BitAdjacency {
    words: usize,
    bits: Vec<u64>,
}

impl BitAdjacency {
    fn new(graph: &Graph) -> Self {
        let n = graph.vertex_count();
        let words = n.div_ceil(64).max(1);
        let mut bits = vec![0u64; words * n];
        for v in 0..n {
            for &u in graph.neighbors(v as Vertex) {
                bits[v * words + u as usize / 64] |= 1 << (u % 64);
            }
        }
        BitAdjacency { words, bits }
    }

    fn row(&self, v: Vertex) -> &[u64] {
        let start = v as usize * self.words;
        &self.bits[start..start + self.words]
    }
}

/// Sets `out = cand ∩ adj(w) ∩ {x > w}`; returns whether the result is nonempty.
#[inline]
fn extend_candidates(cand: &[u64], adj: &[u64], w: Vertex, out: &mut [u64]) -> bool {
    let first = w as usize / 64;
    let mut any = 0u64;
    for i in 0..first {
        out[i] = 0;
    }
    let above = if w % 64 == 63 { 0 } else { !0u64 << (w % 64 + 1) };
    out[first] = cand[first] & adj[first] & above;
    any |= out[first];
    for i in first + 1..cand.len() {
        out[i] = cand[i] & adj[i];
        any |= out[i];
    }
    any != 0
}

struct Enumerator {
    adj: BitAdjacency,
    max_dim: usize,
    budget: usize,
    total: usize,
    levels: Vec<SimplexList>,
    truncated: bool,
    stack: Vec<Vertex>,
    scratch: Vec<Vec<u64>>,
}

impl Enumerator {
    fn emit(&mut self) -> Result<()> {
        let d = self.stack.len() - 1;
        self.total += 1;
        if self.total > self.budget {
            return Err(Error::Budget {
                what: "simplex",
                limit: self.budget,
                reached_dim: d,
            });
        }
        self.levels[d].data.extend_from_slice(&self.stack);
        Ok(())
    }

    /// Candidates for the current stack live in `scratch[depth]`.
    fn expand(&mut self, depth: usize) -> Result<()> {
        self.emit()?;
        if depth == self.max_dim {
            if self.scratch[depth].iter().any(|&w| w != 0) {
                self.truncated = true;
            }
            return Ok(());
        }
        let words = self.adj.words;
        for wi in 0..words {
            let mut word = self.scratch[depth][wi];
            while word != 0 {
                let bit = word.trailing_zeros();
                word &= word - 1;
                let w = (wi * 64) as Vertex + bit;
                let (lo, hi) = self.scratch.split_at_mut(depth + 1);
                extend_candidates(&lo[depth], self.adj.row(w), w, &mut hi[0]);
                self.stack.push(w);
                self.expand(depth + 1)?;
                self.stack.pop();
            }
        }
        Ok(())
    }
}

/// Enumerates all cliques of `graph` up to dimension `max_dim` with the
/// default simplex budget.
pub fn enumerate_simplices(graph: &Graph, max_dim: usize) -> Result<FlagComplex> {
    enumerate_with_budget(graph, max_dim, DEFAULT_SIMPLEX_BUDGET)
}

/// Enumerates every clique. Dimensions are capped by the maximum degree, so
/// the result is never truncated.
pub fn enumerate_all(graph: &Graph, budget: usize) -> Result<FlagComplex> {
    let max_deg = (0..graph.vertex_count() as Vertex)
        .map(|v| graph.degree(v))
        .max()
        .unwrap_or(0);
    enumerate_with_budget(graph, max_deg, budget)
}

/// Enumerates all cliques up to `max_dim`, failing once more than `budget`
/// simplices have been produced.
pub fn enumerate_with_budget(graph: &Graph, max_dim: usize, budget: usize) -> Result<FlagComplex> {
    let n = graph.vertex_count();
    let adj = BitAdjacency::new(graph);
    let words = adj.words;
    let mut e = Enumerator {
        adj,
        max_dim,
        budget,
        total: 0,
        levels: (0..=max_dim).map(SimplexList::new).collect(),
        truncated: false,
        stack: Vec::with_capacity(max_dim + 1),
        scratch: vec![vec![0u64; words]; max_dim + 1],
    };
    let all = vec![!0u64; words];
    for v in 0..n as Vertex {
        let mut root = vec![0u64; words];
        extend_candidates(&all, e.adj.row(v), v, &mut root);
        e.scratch[0].copy_from_slice(&root);
        e.stack.push(v);
        e.expand(0)?;
        e.stack.pop();
    }
    Ok(FlagComplex {
        graph: graph.clone(),
        max_dim,
        levels: e.levels,
        truncated: e.truncated,
    })
}

/// Alternating simplex count; refuses truncated complexes.
pub fn euler_characteristic(complex: &FlagComplex) -> Result<i64> {
    if complex.is_truncated() {
        return Err(Error::Truncated(complex.max_dim()));
    }
    Ok(complex
        .counts()
        .iter()
        .enumerate()
        .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum())
}

/// A GF(2) matrix stored as sorted row supports per column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseBitMatrix {
    n_rows: usize,
    columns: Vec<Vec<u32>>,
}

impl SparseBitMatrix {
    pub fn new(n_rows: usize, columns: Vec<Vec<u32>>) -> Result<Self> {
        for (j, col) in columns.iter().enumerate() {
            if col.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::invalid(format!("column {j} not strictly ascending")));
            }
            if col.last().is_some_and(|&r| r as usize >= n_rows) {
                return Err(Error::invalid(format!("column {j} has row >= {n_rows}")));
            }
        }
        Ok(SparseBitMatrix { n_rows, columns })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[u32] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vec<u32>] {
        &self.columns
    }

    pub fn into_columns(self) -> Vec<Vec<u32>> {
        self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    /// `self * rhs` over GF(2).
    pub fn compose(&self, rhs: &SparseBitMatrix) -> Result<SparseBitMatrix> {
        if rhs.n_rows != self.n_cols() {
            return Err(Error::invalid(format!(
                "shape mismatch: {} columns vs {} rows",
                self.n_cols(),
                rhs.n_rows
            )));
        }
        let mut acc = vec![false; self.n_rows];
        let mut touched = Vec::new();
        let columns = rhs
            .columns
            .iter()
            .map(|col| {
                for &k in col {
                    for &r in &self.columns[k as usize] {
                        if !acc[r as usize] {
                            touched.push(r);
                        }
                        acc[r as usize] ^= true;
                    }
                }
                let mut out: Vec<u32> = touched.drain(..).filter(|&r| acc[r as usize]).collect();
                for &r in &out {
                    acc[r as usize] = false;
                }
                out.sort_unstable();
                out.dedup();
                out
            })
            .collect();
        Ok(SparseBitMatrix {
            n_rows: self.n_rows,
            columns,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }
}

/// Row indices (into the dimension `d - 1` list) of the facets of each
/// `d`-simplex, in the order the facets appear.
pub(crate) fn facet_rows(complex: &FlagComplex, d: usize) -> Result<(usize, Vec<Vec<u32>>)> {
    if d == 0 || d > complex.max_dim() {
        return Err(Error::invalid(format!(
            "boundary dimension {d} outside 1..={}",
            complex.max_dim()
        )));
    }
    let rows = &complex.levels[d - 1];
    let mut face = vec![0; d];
    let cols = complex.levels[d]
        .iter()
        .map(|s| {
            // dropping vertex i, for i = d..=0, yields facets in ascending order
            (0..=d)
                .rev()
                .map(|i| {
                    face[..i].copy_from_slice(&s[..i]);
                    face[i..].copy_from_slice(&s[i + 1..]);
                    rows.position(&face).expect("flag complex closed under faces") as u32
                })
                .collect()
        })
        .collect();
    Ok((rows.len(), cols))
}

/// The GF(2) boundary matrix `∂_d`: columns are `d`-simplices, rows are
/// `(d - 1)`-simplices, both in canonical order.
pub fn boundary_matrix(complex: &FlagComplex, d: usize) -> Result<SparseBitMatrix> {
    let (n_rows, columns) = facet_rows(complex, d)?;
    Ok(SparseBitMatrix { n_rows, columns })
}

/// Header metadata of a simplex list file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexFileHeader {
    pub space: String,
    pub n: Option<u32>,
    pub k: u32,
    pub dim: Option<usize>,
}

/// Writes simplices one per line, ascending vertices, lines in
/// lexicographic tuple order, preceded by `#` header lines.
pub fn write_simplex_list<W: std::io::Write>(
    mut out: W,
    header: &SimplexFileHeader,
    simplices: &[Simplex],
) -> Result<()> {
    let mut sorted: Vec<&Simplex> = simplices.iter().collect();
    sorted.sort();
    writeln!(out, "# space {}", header.space)?;
    if let Some(n) = header.n {
        writeln!(out, "# n {n}")?;
    }
    writeln!(out, "# k {}", header.k)?;
    match header.dim {
        Some(d) => writeln!(out, "# dim {d}")?,
        None => writeln!(out, "# dim mixed")?,
    }
    for s in sorted {
        writeln!(out, "{s}")?;
    }
    Ok(())
}

/// Parses the format produced by [`write_simplex_list`].
pub fn read_simplex_list(text: &str) -> Result<(SimplexFileHeader, Vec<Simplex>)> {
    let mut header = SimplexFileHeader {
        space: String::new(),
        n: None,
        k: 0,
        dim: None,
    };
    let mut simplices = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let bad = |what: &str| Error::invalid(format!("line {}: {what}", lineno + 1));
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            let (key, value) = rest.split_once(' ').unwrap_or((rest, ""));
            let value = value.trim();
            match key {
                "space" => header.space = value.to_string(),
                "n" => header.n = Some(value.parse().map_err(|_| bad("bad n"))?),
                "k" => header.k = value.parse().map_err(|_| bad("bad k"))?,
                "dim" if value == "mixed" => header.dim = None,
                "dim" => header.dim = Some(value.parse().map_err(|_| bad("bad dim"))?),
                _ => {}
            }
            continue;
        }
        let vertices = line
            .split_whitespace()
            .map(|t| t.parse::<Vertex>().map_err(|_| bad("bad vertex")))
            .collect::<Result<Vec<_>>>()?;
        simplices.push(Simplex::new(vertices)?);
    }
    Ok((header, simplices))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::FiniteMetricSpace;

    fn binom(n: u64, k: u64) -> u64 {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    /// Independent oracle: test every vertex subset of size d+1 pairwise.
    fn brute_cliques(graph: &Graph, max_dim: usize) -> Vec<Vec<Vec<Vertex>>> {
        let n = graph.vertex_count() as Vertex;
        let mut out = vec![Vec::new(); max_dim + 1];
        fn rec(
            g: &Graph,
            n: Vertex,
            start: Vertex,
            cur: &mut Vec<Vertex>,
            max_dim: usize,
            out: &mut Vec<Vec<Vec<Vertex>>>,
        ) {
            for v in start..n {
                cur.push(v);
                if g.is_clique(cur) {
                    out[cur.len() - 1].push(cur.clone());
                    if cur.len() <= max_dim {
                        rec(g, n, v + 1, cur, max_dim, out);
                    }
                }
                cur.pop();
            }
        }
        rec(graph, n, 0, &mut Vec::new(), max_dim, &mut out);
        for l in &mut out {
            l.sort();
        }
        out
    }

    #[test]
    fn vr_graph_degrees() {
        let t4 = FiniteMetricSpace::torus(4).unwrap();
        let g = vr_graph(&t4, 3);
        assert!((0..16).all(|v| g.degree(v) == 14));
        let t5 = FiniteMetricSpace::torus(5).unwrap();
        let g = vr_graph(&t5, 3);
        assert!((0..25).all(|v| g.degree(v) == 20));
        let c = FiniteMetricSpace::cycle(9).unwrap();
        assert_eq!(vr_graph(&c, 0).edge_count(), 0);
    }

    #[test]
    fn torus_scale_one_counts() {
        let g = vr_graph(&FiniteMetricSpace::torus(4).unwrap(), 1);
        let c = enumerate_simplices(&g, 3).unwrap();
        assert_eq!(c.counts(), vec![16, 32, 0, 0]);
        assert!(!c.is_truncated());
        assert_eq!(euler_characteristic(&c).unwrap(), -16);
    }

    #[test]
    fn cross_polytope_counts() {
        let g = vr_graph(&FiniteMetricSpace::torus(4).unwrap(), 3);
        let c = enumerate_simplices(&g, 8).unwrap();
        let counts = c.counts();
        for d in 0..=7 {
            assert_eq!(counts[d] as u64, (1 << (d + 1)) * binom(8, d as u64 + 1), "d={d}");
        }
        assert_eq!(counts[8], 0);
        assert_eq!(euler_characteristic(&c).unwrap(), 0);
        // brute-force agreement on the low dimensions
        let brute = brute_cliques(&g, 3);
        for d in 0..=3 {
            assert_eq!(c.simplices(d).unwrap().iter().map(<[u32]>::to_vec).collect::<Vec<_>>(), brute[d]);
        }
    }

    #[test]
    fn truncation_and_euler_refusal() {
        let g = vr_graph(&FiniteMetricSpace::torus(4).unwrap(), 3);
        let c = enumerate_simplices(&g, 4).unwrap();
        assert!(c.is_truncated());
        assert_eq!(c.truncated_at(), Some(4));
        assert!(matches!(euler_characteristic(&c), Err(Error::Truncated(4))));
    }

    #[test]
    fn budget_is_an_error() {
        let g = vr_graph(&FiniteMetricSpace::torus(4).unwrap(), 3);
        let err = enumerate_with_budget(&g, 8, 100).unwrap_err();
        assert!(matches!(err, Error::Budget { limit: 100, .. }));
    }

    #[test]
    fn empty_graph_and_single_vertex() {
        let c = enumerate_simplices(&Graph::empty(5), 3).unwrap();
        assert_eq!(c.counts(), vec![5, 0, 0, 0]);
        let one = enumerate_simplices(&Graph::empty(1), 0).unwrap();
        assert_eq!(euler_characteristic(&one).unwrap(), 1);
    }

    #[test]
    fn flag_property_matches_oracle() {
        for (n, k) in [(5, 2), (6, 2), (5, 3), (7, 2), (6, 3)] {
            let g = vr_graph(&FiniteMetricSpace::torus(n).unwrap(), k);
            let c = enumerate_simplices(&g, 4).unwrap();
            let brute = brute_cliques(&g, 4);
            for d in 0..=4 {
                let got: Vec<Vec<u32>> =
                    c.simplices(d).unwrap().iter().map(<[u32]>::to_vec).collect();
                assert_eq!(got, brute[d], "n={n} k={k} d={d}");
            }
        }
    }

    #[test]
    fn boundary_examples() {
        let tri = enumerate_simplices(&Graph::complete(3), 2).unwrap();
        let b2 = boundary_matrix(&tri, 2).unwrap();
        assert_eq!(b2.n_cols(), 1);
        assert_eq!(b2.column(0), &[0, 1, 2]);

        let c4 = enumerate_simplices(&vr_graph(&FiniteMetricSpace::cycle(4).unwrap(), 1), 2).unwrap();
        let b1 = boundary_matrix(&c4, 1).unwrap();
        assert_eq!((b1.n_rows(), b1.n_cols()), (4, 4));
        assert!(b1.columns().iter().all(|c| c.len() == 2));
        assert!(boundary_matrix(&c4, 3).is_err());
        assert!(boundary_matrix(&c4, 0).is_err());
    }

    #[test]
    fn boundary_squared_is_zero() {
        let g = vr_graph(&FiniteMetricSpace::torus(6).unwrap(), 2);
        let c = enumerate_simplices(&g, 4).unwrap();
        for d in 1..4 {
            let lo = boundary_matrix(&c, d).unwrap();
            let hi = boundary_matrix(&c, d + 1).unwrap();
            assert!(lo.compose(&hi).unwrap().is_zero(), "d={d}");
        }
    }

    #[test]
    fn enumeration_is_deterministic() {
        let g = vr_graph(&FiniteMetricSpace::torus(7).unwrap(), 3);
        let a = enumerate_simplices(&g, 3).unwrap();
        let b = enumerate_simplices(&g, 3).unwrap();
        for d in 0..=3 {
            assert_eq!(a.simplices(d), b.simplices(d));
        }
    }

    #[test]
    fn simplex_text_format() {
        let header = SimplexFileHeader {
            space: "torus".into(),
            n: Some(4),
            k: 2,
            dim: Some(1),
        };
        let s = vec![
            Simplex::new(vec![1, 3]).unwrap(),
            Simplex::new(vec![0, 12]).unwrap(),
            Simplex::new(vec![0, 2]).unwrap(),
        ];
        let mut buf = Vec::new();
        write_simplex_list(&mut buf, &header, &s).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "# space torus\n# n 4\n# k 2\n# dim 1\n0 2\n0 12\n1 3\n");
        let (h, parsed) = read_simplex_list(&text).unwrap();
        assert_eq!(h, header);
        assert_eq!(parsed.len(), 3);
        assert!(read_simplex_list("3 1\n").is_err());
    }

    #[test]
    fn simplex_validation() {
        assert!(Simplex::new(vec![]).is_err());
        assert!(Simplex::new(vec![2, 2]).is_err());
        assert_eq!(Simplex::from_unsorted(vec![5, 1, 5]).unwrap().vertices(), &[1, 5]);
    }
}
