//! Closed-form facet catalogs for `VR(C_n, k)`, `VR(ℤ², k)` and
//! `VR(T_{n,n}, k)`, plus a Bron–Kerbosch oracle that enumerates maximal
//! cliques of an arbitrary graph.
//!
//! Facets of `VR(ℤ², k)` are lattice points of closed ℓ¹ balls of radius
//! `k/2` around integer or half-integer centers:
//!
//! * `k` even: centers `(i, j)` and `(i + ½, j + ½)`;
//! * `k` odd: centers `(i + ½, j)` and `(i, j + ½)`.
//!
//! On the torus these project to `M_{n,k}`. At `n = 3k` the row and column
//! triangles `{a, a+k, a+2k}` are added, and at `n = 3k - 1` the tetrahedra
//! `{a, a+k, a+2k-1, a+2k}`.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::complex::{Graph, Simplex};
use crate::error::{Error, Result};
use crate::metric::{reduce_mod, HalfIntegerPoint, LatticePoint, TorusPoint, Vertex, Window};

/// Largest graph accepted by [`brute_force_facets`].
pub const BRUTE_FORCE_VERTEX_LIMIT: usize = 2_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FacetSource {
    CycleClosedForm,
    Z2ClosedForm,
    TorusClosedForm,
    BruteForce,
}

impl fmt::Display for FacetSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FacetSource::CycleClosedForm => "cycle-closed-form",
            FacetSource::Z2ClosedForm => "z2-closed-form",
            FacetSource::TorusClosedForm => "torus-closed-form",
            FacetSource::BruteForce => "brute-force",
        })
    }
}

/// A set of maximal simplices; duplicates collapse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetSet {
    facets: BTreeSet<Simplex>,
    source: FacetSource,
}

/// Facets present in only one of two sets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FacetDiff {
    pub only_left: Vec<Simplex>,
    pub only_right: Vec<Simplex>,
}

impl FacetDiff {
    pub fn is_empty(&self) -> bool {
        self.only_left.is_empty() && self.only_right.is_empty()
    }
}

impl FacetSet {
    pub fn new(source: FacetSource, facets: impl IntoIterator<Item = Simplex>) -> Self {
        FacetSet {
            facets: facets.into_iter().collect(),
            source,
        }
    }

    pub fn source(&self) -> FacetSource {
        self.source
    }

    pub fn len(&self) -> usize {
        self.facets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Simplex> {
        self.facets.iter()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.facets.contains(s)
    }

    /// Same facets, ignoring the source tag.
    pub fn same_facets(&self, other: &FacetSet) -> bool {
        self.facets == other.facets
    }

    pub fn diff(&self, other: &FacetSet) -> FacetDiff {
        FacetDiff {
            only_left: self.facets.difference(&other.facets).cloned().collect(),
            only_right: other.facets.difference(&self.facets).cloned().collect(),
        }
    }

    /// Keeps facets satisfying `keep`.
    pub fn filtered(&self, keep: impl Fn(&Simplex) -> bool) -> FacetSet {
        FacetSet {
            facets: self.facets.iter().filter(|s| keep(s)).cloned().collect(),
            source: self.source,
        }
    }

    pub fn to_vec(&self) -> Vec<Simplex> {
        self.facets.iter().cloned().collect()
    }

    /// Count of facets per vertex-cardinality.
    pub fn size_histogram(&self) -> Vec<(usize, usize)> {
        let mut h = std::collections::BTreeMap::new();
        for s in &self.facets {
            *h.entry(s.len()).or_insert(0) += 1;
        }
        h.into_iter().collect()
    }
}

/// Whether `facet` is a clique of `graph` to which no vertex can be added.
pub fn is_maximal_clique(graph: &Graph, facet: &Simplex) -> bool {
    let vs = facet.vertices();
    if !graph.is_clique(vs) {
        return false;
    }
    let first = vs[0];
    !graph
        .neighbors(first)
        .iter()
        .any(|&w| !facet.contains(w) && vs.iter().all(|&u| graph.has_edge(u, w)))
}

fn cycle_regime(n: u32, k: u32) -> bool {
    n >= 3 && k >= 1 && (n > 3 * k || (n == 3 * k && k >= 2) || (n + 1 == 3 * k && k >= 3))
}

/// Facets of `VR(C_n, k)` in the three classified regimes.
pub fn cycle_facets(n: u32, k: u32) -> Result<FacetSet> {
    if !cycle_regime(n, k) {
        return Err(Error::UnsupportedRegime {
            space: "cycle",
            n,
            k,
        });
    }
    let modn = |i: u32| i % n;
    let mut out = Vec::new();
    for i in 0..n {
        out.push(Simplex::from_unsorted((0..=k).map(|t| modn(i + t)).collect())?);
        if n == 3 * k {
            out.push(Simplex::from_unsorted(vec![i, modn(i + k), modn(i + 2 * k)])?);
        }
        if n + 1 == 3 * k {
            out.push(Simplex::from_unsorted(vec![
                i,
                modn(i + k),
                modn(i + 2 * k - 1),
                modn(i + 2 * k),
            ])?);
        }
    }
    Ok(FacetSet::new(FacetSource::CycleClosedForm, out))
}

/// Center of a facet of `VR(ℤ², k)`, in doubled coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DiamondCenter {
    center: HalfIntegerPoint,
    scale: u32,
}

impl DiamondCenter {
    pub fn new(center: HalfIntegerPoint, scale: u32) -> Result<Self> {
        let (ox, oy) = (center.x2.rem_euclid(2), center.y2.rem_euclid(2));
        let ok = if scale % 2 == 0 { ox == oy } else { ox != oy };
        if !ok {
            return Err(Error::invalid(format!(
                "center ({}/2, {}/2) has the wrong parity for scale {scale}",
                center.x2, center.y2
            )));
        }
        Ok(DiamondCenter { center, scale })
    }

    pub fn center(&self) -> HalfIntegerPoint {
        self.center
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }
}

/// Lattice points within ℓ¹ distance `k/2` of the center, sorted.
pub fn z2_facet(c: DiamondCenter) -> Vec<LatticePoint> {
    let k = c.scale as i64;
    let HalfIntegerPoint { x2, y2 } = c.center;
    let mut pts = Vec::new();
    for x in (x2 - k).div_euclid(2)..=(x2 + k).div_euclid(2) + 1 {
        for y in (y2 - k).div_euclid(2)..=(y2 + k).div_euclid(2) + 1 {
            let p = LatticePoint::new(x, y);
            if c.center.doubled_l1(p) <= c.scale as u64 {
                pts.push(p);
            }
        }
    }
    pts
}

/// The two facet centers of one unit cell anchored at lattice point `(i, j)`.
fn cell_centers(i: i64, j: i64, k: u32) -> [HalfIntegerPoint; 2] {
    if k % 2 == 0 {
        [
            HalfIntegerPoint::new(2 * i, 2 * j),
            HalfIntegerPoint::new(2 * i + 1, 2 * j + 1),
        ]
    } else {
        [
            HalfIntegerPoint::new(2 * i + 1, 2 * j),
            HalfIntegerPoint::new(2 * i, 2 * j + 1),
        ]
    }
}

/// Margin from the window boundary for interior facets: `⌈k/2⌉`.
pub fn window_margin(k: u32) -> i64 {
    k.div_ceil(2) as i64
}

/// Closed-form facets lying entirely at least `⌈k/2⌉` inside `window`,
/// as window vertex indices.
pub fn z2_facets_in_window(window: Window, k: u32) -> Result<FacetSet> {
    let need = 2 * k as u64 + 3;
    if window.width() < need || window.height() < need {
        return Err(Error::invalid(format!(
            "window {window} too small for scale {k}; each side needs {need} points"
        )));
    }
    let margin = window_margin(k);
    let mut out = Vec::new();
    for i in window.x_min - 1..=window.x_max {
        for j in window.y_min - 1..=window.y_max {
            for center in cell_centers(i, j, k) {
                let pts = z2_facet(DiamondCenter::new(center, k)?);
                if pts.iter().all(|&p| window.contains_with_margin(p, margin)) {
                    let idx = pts
                        .iter()
                        .map(|&p| window.index_of(p).expect("inside window"))
                        .collect();
                    out.push(Simplex::from_unsorted(idx)?);
                }
            }
        }
    }
    Ok(FacetSet::new(FacetSource::Z2ClosedForm, out))
}

/// Whether a window simplex lies entirely in the interior band used by
/// [`z2_facets_in_window`].
pub fn window_interior(window: Window, k: u32, s: &Simplex) -> bool {
    let margin = window_margin(k);
    s.vertices()
        .iter()
        .all(|&v| window.contains_with_margin(window.point(v), margin))
}

/// Reduces a `ℤ²` simplex onto `T_{n,n}` (row = x, col = y).
pub fn project_facet(points: &[LatticePoint], n: u32) -> Result<Simplex> {
    let verts: Vec<Vertex> = points
        .iter()
        .map(|&p| reduce_mod(n, p).index(n))
        .collect();
    let s = Simplex::from_unsorted(verts)?;
    if s.len() != points.len() {
        return Err(Error::ProjectionCollision {
            before: points.len(),
            after: s.len(),
        });
    }
    Ok(s)
}

fn torus_regime(n: u32, k: u32) -> bool {
    k >= 2 && (n > 3 * k || n == 3 * k || (n + 1 == 3 * k && k >= 3))
}

/// `M_{n,k}`: projections of one fundamental domain of `ℤ²` facets.
pub fn projected_facets(n: u32, k: u32) -> Result<Vec<Simplex>> {
    let mut out = Vec::with_capacity(2 * (n * n) as usize);
    for i in 0..n as i64 {
        for j in 0..n as i64 {
            for center in cell_centers(i, j, k) {
                out.push(project_facet(&z2_facet(DiamondCenter::new(center, k)?), n)?);
            }
        }
    }
    Ok(out)
}

/// Row and column simplices `{a, a+o_1, …}` for each offset list, all
/// coordinates mod `n`.
fn line_family(n: u32, offsets: &[u32]) -> Result<Vec<Simplex>> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let along_rows: Vec<Vertex> = offsets
                .iter()
                .map(|&o| TorusPoint { row: (a + o) % n, col: b }.index(n))
                .collect();
            let along_cols: Vec<Vertex> = offsets
                .iter()
                .map(|&o| TorusPoint { row: a, col: (b + o) % n }.index(n))
                .collect();
            out.push(Simplex::from_unsorted(along_rows)?);
            out.push(Simplex::from_unsorted(along_cols)?);
        }
    }
    Ok(out)
}

/// `N_{3k,k}`: triangles spaced `k` apart along a row or column.
pub fn triangle_family(k: u32) -> Result<Vec<Simplex>> {
    line_family(3 * k, &[0, k, 2 * k])
}

/// `N_{3k-1,k}`: tetrahedra `{a, a+k, a+2k-1, a+2k}` along a row or column.
pub fn tetrahedron_family(k: u32) -> Result<Vec<Simplex>> {
    line_family(3 * k - 1, &[0, k, 2 * k - 1, 2 * k])
}

/// Facets of `VR(T_{n,n}, k)` in the classified regimes.
pub fn torus_facets(n: u32, k: u32) -> Result<FacetSet> {
    if n < 3 || !torus_regime(n, k) {
        return Err(Error::UnsupportedRegime {
            space: "torus",
            n,
            k,
        });
    }
    let mut all = projected_facets(n, k)?;
    if n == 3 * k {
        all.extend(triangle_family(k)?);
    } else if n + 1 == 3 * k {
        all.extend(tetrahedron_family(k)?);
    }
    Ok(FacetSet::new(FacetSource::TorusClosedForm, all))
}

struct BronKerbosch<'a> {
    adj: Vec<Vec<u64>>,
    out: &'a mut Vec<Simplex>,
}

impl BronKerbosch<'_> {
    fn count(bits: &[u64]) -> u32 {
        bits.iter().map(|w| w.count_ones()).sum()
    }

    fn ones(bits: &[u64]) -> Vec<Vertex> {
        let mut v = Vec::new();
        for (i, &w) in bits.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                v.push((i * 64) as Vertex + w.trailing_zeros());
                w &= w - 1;
            }
        }
        v
    }

    fn run(&mut self, r: &mut Vec<Vertex>, mut p: Vec<u64>, mut x: Vec<u64>) {
        if p.iter().all(|&w| w == 0) {
            if x.iter().all(|&w| w == 0) {
                self.out
                    .push(Simplex::from_unsorted(r.clone()).expect("nonempty clique"));
            }
            return;
        }
        // pivot maximizing |P ∩ N(u)| over P ∪ X
        let union: Vec<u64> = p.iter().zip(&x).map(|(a, b)| a | b).collect();
        let pivot = Self::ones(&union)
            .into_iter()
            .max_by_key(|&u| {
                let inter: Vec<u64> = p.iter().zip(&self.adj[u as usize]).map(|(a, b)| a & b).collect();
                (Self::count(&inter), std::cmp::Reverse(u))
            })
            .expect("P nonempty");
        let cand: Vec<u64> = p
            .iter()
            .zip(&self.adj[pivot as usize])
            .map(|(a, b)| a & !b)
            .collect();
        for v in Self::ones(&cand) {
            let nv = &self.adj[v as usize];
            let np = p.iter().zip(nv).map(|(a, b)| a & b).collect();
            let nx = x.iter().zip(nv).map(|(a, b)| a & b).collect();
            r.push(v);
            self.run(r, np, nx);
            r.pop();
            p[v as usize / 64] &= !(1 << (v % 64));
            x[v as usize / 64] |= 1 << (v % 64);
        }
    }
}

/// All maximal cliques of `graph` by Bron–Kerbosch with Tomita pivoting.
pub fn brute_force_facets(graph: &Graph) -> Result<FacetSet> {
    let n = graph.vertex_count();
    if n > BRUTE_FORCE_VERTEX_LIMIT {
        return Err(Error::Budget {
            what: "brute-force vertex",
            limit: BRUTE_FORCE_VERTEX_LIMIT,
            reached_dim: 0,
        });
    }
    let words = n.div_ceil(64).max(1);
    let adj = (0..n)
        .map(|v| {
            let mut row = vec![0u64; words];
            for &u in graph.neighbors(v as Vertex) {
                row[u as usize / 64] |= 1 << (u % 64);
            }
            row
        })
        .collect();
    let mut p = vec![0u64; words];
    for v in 0..n {
        p[v / 64] |= 1 << (v % 64);
    }
    let mut out = Vec::new();
    if n > 0 {
        let mut bk = BronKerbosch { adj, out: &mut out };
        bk.run(&mut Vec::new(), p, vec![0u64; words]);
    }
    Ok(FacetSet::new(FacetSource::BruteForce, out))
}
