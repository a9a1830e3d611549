//! Finite metric spaces with exact integer ℓ¹ distances: the cycle `C_n`,
//! the square torus grid `T_{n,n}` and axis-aligned windows of `ℤ²`.
//!
//! Torus vertices are indexed `row * n + col`. Window points are indexed in
//! lexicographic `(x, y)` order, i.e. `(x - x_min) * height + (y - y_min)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vertex index inside a [`FiniteMetricSpace`].
pub type Vertex = u32;

/// A vertex of the cycle `C_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CyclePoint {
    pub index: u32,
}

/// A vertex of `T_{n,n}`; both coordinates lie in `[0, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TorusPoint {
    pub row: u32,
    pub col: u32,
}

impl TorusPoint {
    pub fn new(n: u32, row: u32, col: u32) -> Result<Self> {
        if row >= n || col >= n {
            return Err(Error::invalid(format!(
                "torus point ({row}, {col}) outside [0, {n})^2"
            )));
        }
        Ok(TorusPoint { row, col })
    }

    pub fn index(self, n: u32) -> Vertex {
        self.row * n + self.col
    }

    pub fn from_index(n: u32, v: Vertex) -> Self {
        TorusPoint {
            row: v / n,
            col: v % n,
        }
    }
}

/// A point of the integer lattice `ℤ²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const fn new(x: i64, y: i64) -> Self {
        LatticePoint { x, y }
    }

    pub fn l1(self, other: LatticePoint) -> u64 {
        self.x.abs_diff(other.x) + self.y.abs_diff(other.y)
    }
}

/// A point with integer or half-integer coordinates, stored doubled:
/// the represented point is `(x2 / 2, y2 / 2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HalfIntegerPoint {
    pub x2: i64,
    pub y2: i64,
}

impl HalfIntegerPoint {
    pub const fn new(x2: i64, y2: i64) -> Self {
        HalfIntegerPoint { x2, y2 }
    }

    /// Twice the ℓ¹ distance to a lattice point.
    pub fn doubled_l1(self, p: LatticePoint) -> u64 {
        (2 * p.x).abs_diff(self.x2) + (2 * p.y).abs_diff(self.y2)
    }
}

/// An axis-aligned window `[x_min, x_max] × [y_min, y_max]` of `ℤ²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub x_min: i64,
    pub x_max: i64,
    pub y_min: i64,
    pub y_max: i64,
}

impl Window {
    pub fn new(x_min: i64, x_max: i64, y_min: i64, y_max: i64) -> Result<Self> {
        if x_min > x_max || y_min > y_max {
            return Err(Error::invalid(format!(
                "empty window [{x_min},{x_max}]x[{y_min},{y_max}]"
            )));
        }
        Ok(Window {
            x_min,
            x_max,
            y_min,
            y_max,
        })
    }

    /// The square window `[-r, r]²`.
    pub fn centered(r: i64) -> Result<Self> {
        Window::new(-r, r, -r, r)
    }

    pub fn width(&self) -> u64 {
        (self.x_max - self.x_min + 1) as u64
    }

    pub fn height(&self) -> u64 {
        (self.y_max - self.y_min + 1) as u64
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        (self.x_min..=self.x_max).contains(&p.x) && (self.y_min..=self.y_max).contains(&p.y)
    }

    /// Whether `p` sits at least `margin` steps inside every side.
    pub fn contains_with_margin(&self, p: LatticePoint, margin: i64) -> bool {
        p.x - self.x_min >= margin
            && self.x_max - p.x >= margin
            && p.y - self.y_min >= margin
            && self.y_max - p.y >= margin
    }

    pub fn index_of(&self, p: LatticePoint) -> Option<Vertex> {
        if !self.contains(p) {
            return None;
        }
        let i = (p.x - self.x_min) as u64 * self.height() + (p.y - self.y_min) as u64;
        Some(i as Vertex)
    }

    pub fn point(&self, v: Vertex) -> LatticePoint {
        let h = self.height();
        LatticePoint {
            x: self.x_min + (v as u64 / h) as i64,
            y: self.y_min + (v as u64 % h) as i64,
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{},{}]x[{},{}]",
            self.x_min, self.x_max, self.y_min, self.y_max
        )
    }
}

/// Which space a [`FiniteMetricSpace`] models.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SpaceLabel {
    Cycle { n: u32 },
    Torus { n: u32 },
    Window { window: Window },
}

impl fmt::Display for SpaceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceLabel::Cycle { n } => write!(f, "cycle {n}"),
            SpaceLabel::Torus { n } => write!(f, "torus {n}"),
            SpaceLabel::Window { window } => write!(f, "window {window}"),
        }
    }
}

/// A finite metric space with integer distances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMetricSpace {
    label: SpaceLabel,
    point_count: usize,
}

const MAX_POINTS: u64 = 1 << 24;

impl FiniteMetricSpace {
    pub fn cycle(n: u32) -> Result<Self> {
        check_size(n)?;
        Ok(FiniteMetricSpace {
            label: SpaceLabel::Cycle { n },
            point_count: n as usize,
        })
    }

    pub fn torus(n: u32) -> Result<Self> {
        check_size(n)?;
        if (n as u64) * (n as u64) > MAX_POINTS {
            return Err(Error::invalid(format!("torus size {n} too large")));
        }
        Ok(FiniteMetricSpace {
            label: SpaceLabel::Torus { n },
            point_count: (n * n) as usize,
        })
    }

    pub fn window(window: Window) -> Result<Self> {
        let count = window.width() * window.height();
        if count > MAX_POINTS {
            return Err(Error::invalid(format!("window {window} too large")));
        }
        Ok(FiniteMetricSpace {
            label: SpaceLabel::Window { window },
            point_count: count as usize,
        })
    }

    pub fn label(&self) -> SpaceLabel {
        self.label
    }

    pub fn point_count(&self) -> usize {
        self.point_count
    }

    /// Distance between two vertex indices. Indices must be in range.
    pub fn distance(&self, i: Vertex, j: Vertex) -> u32 {
        debug_assert!((i as usize) < self.point_count && (j as usize) < self.point_count);
        match self.label {
            SpaceLabel::Cycle { n } => cyclic(n, i, j),
            SpaceLabel::Torus { n } => {
                let (p, q) = (TorusPoint::from_index(n, i), TorusPoint::from_index(n, j));
                cyclic(n, p.row, q.row) + cyclic(n, p.col, q.col)
            }
            SpaceLabel::Window { window } => window.point(i).l1(window.point(j)) as u32,
        }
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if (v as usize) < self.point_count {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "vertex {v} out of range for {} ({} points)",
                self.label, self.point_count
            )))
        }
    }

    /// Largest pairwise distance.
    pub fn diameter(&self) -> u32 {
        match self.label {
            SpaceLabel::Cycle { n } => n / 2,
            SpaceLabel::Torus { n } => 2 * (n / 2),
            SpaceLabel::Window { window } => {
                (window.width() - 1 + window.height() - 1) as u32
            }
        }
    }
}

fn check_size(n: u32) -> Result<()> {
    if n < 3 {
        return Err(Error::invalid(format!("size n={n} must be at least 3")));
    }
    Ok(())
}

#[inline]
fn cyclic(n: u32, i: u32, j: u32) -> u32 {
    let d = i.abs_diff(j);
    d.min(n - d)
}

/// `min(|i - j|, n - |i - j|)` on the cycle `C_n`.
pub fn cycle_distance(n: u32, i: u32, j: u32) -> Result<u32> {
    check_size(n)?;
    if i >= n || j >= n {
        return Err(Error::invalid(format!(
            "cycle indices ({i}, {j}) outside [0, {n})"
        )));
    }
    Ok(cyclic(n, i, j))
}

/// ℓ¹ product of two cycle distances on `T_{n,n}`.
pub fn torus_distance(n: u32, p: TorusPoint, q: TorusPoint) -> Result<u32> {
    check_size(n)?;
    for t in [p, q] {
        TorusPoint::new(n, t.row, t.col)?;
    }
    Ok(cyclic(n, p.row, q.row) + cyclic(n, p.col, q.col))
}

/// `n` for even `n`, `n - 1` for odd `n`.
pub fn torus_diameter(n: u32) -> Result<u32> {
    check_size(n)?;
    Ok(2 * (n / 2))
}

/// All vertices within distance `r` of `center`, ascending.
pub fn closed_ball(space: &FiniteMetricSpace, center: Vertex, r: u32) -> Result<Vec<Vertex>> {
    space.check_vertex(center)?;
    Ok((0..space.point_count() as Vertex)
        .filter(|&v| space.distance(center, v) <= r)
        .collect())
}

/// The quotient map `ℤ² → T_{n,n}`: componentwise nonnegative residues.
///
/// `x` is the row and `y` the column.
pub fn reduce_mod(n: u32, p: LatticePoint) -> TorusPoint {
    let m = n as i64;
    TorusPoint {
        row: p.x.rem_euclid(m) as u32,
        col: p.y.rem_euclid(m) as u32,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tp(row: u32, col: u32) -> TorusPoint {
        TorusPoint { row, col }
    }

    #[test]
    fn cycle_distance_examples() {
        assert_eq!(cycle_distance(8, 2, 2).unwrap(), 0);
        assert_eq!(cycle_distance(8, 0, 5).unwrap(), 3);
        assert_eq!(cycle_distance(9, 1, 7).unwrap(), 3);
        assert!(cycle_distance(2, 0, 1).is_err());
        assert!(cycle_distance(8, 0, 8).is_err());
    }

    #[test]
    fn torus_distance_examples() {
        assert_eq!(torus_distance(7, tp(0, 0), tp(3, 0)).unwrap(), 3);
        assert_eq!(torus_distance(7, tp(0, 0), tp(6, 6)).unwrap(), 2);
        assert_eq!(torus_distance(4, tp(0, 0), tp(2, 2)).unwrap(), 4);
        assert_eq!(torus_diameter(4).unwrap(), 4);
        assert!(torus_distance(2, tp(0, 0), tp(1, 1)).is_err());
        assert!(torus_distance(4, tp(0, 0), tp(4, 1)).is_err());
    }

    #[test]
    fn torus_diameter_examples() {
        assert_eq!(torus_diameter(6).unwrap(), 6);
        assert_eq!(torus_diameter(7).unwrap(), 6);
        assert_eq!(torus_diameter(4).unwrap(), 4);
        assert!(torus_diameter(1).is_err());
        for n in 3..12 {
            let s = FiniteMetricSpace::torus(n).unwrap();
            let brute = (0..s.point_count() as Vertex)
                .flat_map(|i| (0..s.point_count() as Vertex).map(move |j| (i, j)))
                .map(|(i, j)| s.distance(i, j))
                .max()
                .unwrap();
            assert_eq!(brute, torus_diameter(n).unwrap());
            assert_eq!(s.diameter(), brute);
        }
    }

    #[test]
    fn ball_sizes() {
        let t5 = FiniteMetricSpace::torus(5).unwrap();
        let t7 = FiniteMetricSpace::torus(7).unwrap();
        for v in 0..25 {
            assert_eq!(closed_ball(&t5, v, 3).unwrap().len(), 21);
        }
        for v in 0..49 {
            assert_eq!(closed_ball(&t7, v, 4).unwrap().len(), 37);
        }
        let c = FiniteMetricSpace::cycle(11).unwrap();
        assert_eq!(closed_ball(&c, 4, 0).unwrap(), vec![4]);
        assert!(closed_ball(&c, 11, 1).is_err());
    }

    #[test]
    fn ball_size_is_vertex_independent() {
        for n in 3..=10 {
            let s = FiniteMetricSpace::torus(n).unwrap();
            for r in 0..=s.diameter() {
                let size = closed_ball(&s, 0, r).unwrap().len();
                for v in 1..s.point_count() as Vertex {
                    assert_eq!(closed_ball(&s, v, r).unwrap().len(), size, "n={n} r={r}");
                }
            }
        }
    }

    #[test]
    fn reduce_mod_examples() {
        assert_eq!(reduce_mod(7, LatticePoint::new(8, -1)), tp(1, 6));
        assert_eq!(reduce_mod(6, LatticePoint::new(0, 0)), tp(0, 0));
        assert_eq!(reduce_mod(5, LatticePoint::new(10, 5)), tp(0, 0));
    }

    #[test]
    fn reduce_mod_is_metric_quotient() {
        for n in 3..=8u32 {
            let m = n as i64;
            let pts: Vec<LatticePoint> = (-m..2 * m)
                .flat_map(|x| (-m..2 * m).map(move |y| LatticePoint::new(x, y)))
                .collect();
            let near = [-m, 0, m];
            let far = [-3 * m, -2 * m, -m, 0, m, 2 * m, 3 * m];
            let min_over = |p: LatticePoint, q: LatticePoint, shifts: &[i64]| {
                shifts
                    .iter()
                    .flat_map(|&gx| shifts.iter().map(move |&gy| (gx, gy)))
                    .map(|(gx, gy)| p.l1(LatticePoint::new(q.x + gx, q.y + gy)))
                    .min()
                    .unwrap()
            };
            for &p in &pts {
                for &q in &pts {
                    let (rp, rq) = (reduce_mod(n, p), reduce_mod(n, q));
                    let got = torus_distance(n, rp, rq).unwrap() as u64;
                    // canonical representatives need only one period of shifts
                    let lift = |t: TorusPoint| LatticePoint::new(t.row as i64, t.col as i64);
                    assert_eq!(got, min_over(lift(rp), lift(rq), &near), "n={n} p={p:?} q={q:?}");
                    assert_eq!(got, min_over(p, q, &far), "n={n} p={p:?} q={q:?}");
                }
            }
        }
    }

    #[test]
    fn triangle_inequality_small_tori() {
        for n in 3..=8u32 {
            let s = FiniteMetricSpace::torus(n).unwrap();
            let c = s.point_count() as Vertex;
            for a in 0..c {
                for b in 0..c {
                    let ab = s.distance(a, b);
                    assert_eq!(ab, s.distance(b, a));
                    for x in 0..c {
                        assert!(s.distance(a, x) <= ab + s.distance(b, x));
                    }
                }
            }
        }
    }

    #[test]
    fn window_indexing_round_trips() {
        let w = Window::new(-3, 2, 1, 4).unwrap();
        let s = FiniteMetricSpace::window(w).unwrap();
        assert_eq!(s.point_count(), 24);
        for v in 0..24 {
            assert_eq!(w.index_of(w.point(v)), Some(v));
        }
        assert_eq!(w.index_of(LatticePoint::new(3, 1)), None);
        assert_eq!(s.diameter(), 5 + 3);
    }

    proptest! {
        #[test]
        fn cycle_distance_symmetric_and_bounded(n in 3u32..200, i in 0u32..200, j in 0u32..200) {
            let (i, j) = (i % n, j % n);
            let d = cycle_distance(n, i, j).unwrap();
            prop_assert_eq!(d, cycle_distance(n, j, i).unwrap());
            prop_assert!(d <= n / 2);
        }

    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn torus_triangle_inequality(n in 9u32..64, a in any::<(u32, u32)>(), b in any::<(u32, u32)>(), c in any::<(u32, u32)>()) {
            let p = tp(a.0 % n, a.1 % n);
            let q = tp(b.0 % n, b.1 % n);
            let r = tp(c.0 % n, c.1 % n);
            let pq = torus_distance(n, p, q).unwrap();
            prop_assert!(pq <= torus_diameter(n).unwrap());
            prop_assert!(torus_distance(n, p, r).unwrap() <= pq + torus_distance(n, q, r).unwrap());
        }
    }
}
