//! Structural certificates and homotopy-type fingerprints.
//!
//! Three kinds of evidence:
//!
//! * antipode graphs, whose clique complex is the boundary of a
//!   cross-polytope (the join of `V/2` copies of `S^0`);
//! * a ball-intersection bound: if any `2k+2` closed balls of radius `r`
//!   meet, `VR(X, r)` is `(2k+2)`-conic and so `k`-connected (closed balls
//!   only; the open-ball variant is not implemented);
//! * Betti profiles compared against the homotopy type expected for the
//!   `(n, k)` cell.
//!
//! A fingerprint is `certified` only when the profile is integral, untruncated,
//! free and concentrated in one dimension `d >= 2`, and the complex is known
//! to be simply connected. Hurewicz and Whitehead then give a wedge of
//! `d`-spheres. Anything weaker is at most `consistent`.

use std::fmt;

use serde::Serialize;

use crate::complex::Graph;
use crate::error::{Error, Result};
use crate::homology::{BettiProfile, Coefficients};
use crate::metric::{closed_ball, FiniteMetricSpace, Vertex};

/// Exhaustive intersection checks use at most this many balls.
pub const EXHAUSTIVE_MAX_BALLS: usize = 4;
/// ... on spaces of at most this many points.
pub const EXHAUSTIVE_MAX_VERTICES: usize = 100;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AntipodeReport {
    pub is_antipode: bool,
    /// Non-adjacent pairs `(u, v)` with `u < v`, ascending; empty unless
    /// `is_antipode`.
    pub pairs: Vec<(Vertex, Vertex)>,
    /// Number of antipodal pairs, i.e. the cross-polytope dimension.
    pub cross_polytope_dim: Option<usize>,
}

impl AntipodeReport {
    /// Dimension of the sphere the clique complex triangulates.
    pub fn sphere_dim(&self) -> Option<usize> {
        self.cross_polytope_dim.map(|m| m - 1)
    }
}

/// Every vertex misses exactly one other, and the misses pair up.
pub fn antipode_check(graph: &Graph) -> AntipodeReport {
    let v = graph.vertex_count();
    let no = AntipodeReport {
        is_antipode: false,
        pairs: Vec::new(),
        cross_polytope_dim: None,
    };
    if v < 2 || v % 2 == 1 {
        return no;
    }
    let mut partner = vec![Vertex::MAX; v];
    for u in 0..v {
        if graph.degree(u as Vertex) != v - 2 {
            return no;
        }
        // the single non-neighbor other than u itself
        let nb = graph.neighbors(u as Vertex);
        let mut missing = None;
        let mut j = 0;
        for w in 0..v as Vertex {
            if w == u as Vertex {
                continue;
            }
            if j < nb.len() && nb[j] == w {
                j += 1;
            } else {
                missing = Some(w);
                break;
            }
        }
        match missing {
            Some(w) => partner[u] = w,
            None => return no,
        }
    }
    let mut pairs = Vec::with_capacity(v / 2);
    for (u, &w) in partner.iter().enumerate() {
        if partner[w as usize] != u as Vertex {
            return no;
        }
        if (u as Vertex) < w {
            pairs.push((u as Vertex, w));
        }
    }
    AntipodeReport {
        is_antipode: true,
        cross_polytope_dim: Some(pairs.len()),
        pairs,
    }
}

/// Integral homology of the boundary of the `m`-dimensional cross-polytope.
pub fn cross_polytope_profile(m: usize) -> BettiProfile {
    let mut betti = vec![0u64; m.max(1)];
    betti[0] = 1;
    if m >= 1 {
        betti[m - 1] += 1;
    }
    BettiProfile::from_betti(Coefficients::Integer, betti)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConnectivityMethod {
    Counting,
    Exhaustive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectivityCertificate {
    pub scale: u32,
    pub method: ConnectivityMethod,
    pub max_k: u32,
    /// Largest `k <= max_k` for which every `2k+2` balls meet, or -1.
    pub certified_k: i64,
    pub vertex_count: usize,
    pub min_ball_size: usize,
}

impl ConnectivityCertificate {
    pub fn simply_connected(&self) -> bool {
        self.certified_k >= 1
    }
}

/// Smallest closed ball of radius `r`, by enumeration over all centers.
pub fn min_ball_size(space: &FiniteMetricSpace, r: u32) -> Result<usize> {
    let mut best = usize::MAX;
    for c in 0..space.point_count() as Vertex {
        best = best.min(closed_ball(space, c, r)?.len());
    }
    Ok(best)
}

pub fn connectivity_bound(
    space: &FiniteMetricSpace,
    r: u32,
    max_k: u32,
    method: ConnectivityMethod,
) -> Result<ConnectivityCertificate> {
    let v = space.point_count();
    let min_ball = min_ball_size(space, r)?;
    let certified_k = match method {
        ConnectivityMethod::Counting => {
            // 2k+2 balls each miss at most |X| - min_ball points
            let miss = (v - min_ball) as i64;
            (0..=max_k as i64)
                .take_while(|&k| v as i64 - (2 * k + 2) * miss >= 1)
                .last()
                .unwrap_or(-1)
        }
        ConnectivityMethod::Exhaustive => {
            if 2 * max_k as usize + 2 > EXHAUSTIVE_MAX_BALLS || v > EXHAUSTIVE_MAX_VERTICES {
                return Err(Error::Budget {
                    what: "exhaustive ball-intersection",
                    limit: if v > EXHAUSTIVE_MAX_VERTICES {
                        EXHAUSTIVE_MAX_VERTICES
                    } else {
                        EXHAUSTIVE_MAX_BALLS
                    },
                    reached_dim: 0,
                });
            }
            exhaustive_k(space, r, max_k)?
        }
    };
    Ok(ConnectivityCertificate {
        scale: r,
        method,
        max_k,
        certified_k,
        vertex_count: v,
        min_ball_size: min_ball,
    })
}

fn exhaustive_k(space: &FiniteMetricSpace, r: u32, max_k: u32) -> Result<i64> {
    // vertex_count <= EXHAUSTIVE_MAX_VERTICES fits one u128 per ball
    let mut balls = Vec::with_capacity(space.point_count());
    for c in 0..space.point_count() as Vertex {
        balls.push(closed_ball(space, c, r)?.iter().fold(0u128, |acc, &p| acc | 1 << p));
    }
    let mut certified = -1;
    for k in 0..=max_k as usize {
        if !all_meet(&balls, 2 * k + 2) {
            break;
        }
        certified = k as i64;
    }
    Ok(certified)
}

/// Whether every set of `size` distinct balls shares a point.
fn all_meet(balls: &[u128], size: usize) -> bool {
    fn rec(balls: &[u128], start: usize, left: usize, acc: u128) -> bool {
        if acc == 0 {
            return false;
        }
        left == 0 || (start..balls.len()).all(|i| rec(balls, i + 1, left - 1, acc & balls[i]))
    }
    rec(balls, 0, size.min(balls.len()), u128::MAX)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Claim {
    Torus,
    #[serde(rename = "wedge_S2")]
    WedgeS2 { count: u64 },
    #[serde(rename = "wedge_S2_S3")]
    WedgeS2S3 { s2: u64, s3: u64 },
    Sphere { dim: usize },
    #[serde(rename = "wedge_Sd")]
    WedgeSd { dim: usize, count: u64 },
    Contractible,
    Unknown,
}

impl Claim {
    /// Unreduced Betti numbers of the claimed space.
    pub fn expected_betti(&self) -> Option<Vec<u64>> {
        let wedge = |dim: usize, count: u64| {
            let mut b = vec![0; dim + 1];
            b[0] = 1;
            b[dim] += count;
            b
        };
        match *self {
            Claim::Torus => Some(vec![1, 2, 1]),
            Claim::WedgeS2 { count } => Some(wedge(2, count)),
            Claim::WedgeS2S3 { s2, s3 } => Some(vec![1, 0, s2, s3]),
            Claim::Sphere { dim } => Some(wedge(dim, 1)),
            Claim::WedgeSd { dim, count } => Some(wedge(dim, count)),
            Claim::Contractible => Some(vec![1]),
            Claim::Unknown => None,
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::Torus => write!(f, "torus"),
            Claim::WedgeS2 { count } => write!(f, "wedge_S2({count})"),
            Claim::WedgeS2S3 { s2, s3 } => write!(f, "wedge_S2_S3({s2},{s3})"),
            Claim::Sphere { dim } => write!(f, "sphere({dim})"),
            Claim::WedgeSd { dim, count } => write!(f, "wedge_S{dim}({count})"),
            Claim::Contractible => write!(f, "contractible"),
            Claim::Unknown => write!(f, "unknown"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Inconsistent,
    Consistent,
    Certified,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Inconsistent => "inconsistent",
            Verdict::Consistent => "consistent",
            Verdict::Certified => "certified",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Evidence {
    pub profile: BettiProfile,
    pub antipode: Option<AntipodeReport>,
    pub connectivity: Option<ConnectivityCertificate>,
    /// Where the claim came from.
    pub basis: String,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub claim: Claim,
    pub claim_label: String,
    pub consistent: bool,
    pub verdict: Verdict,
    pub expected_betti: Option<Vec<u64>>,
    pub evidence: Evidence,
}

/// Homotopy type expected for `VR(T_{n,n}, k)` from the classified regimes.
pub fn regime_claim(n: u32, k: u32, antipode: Option<&AntipodeReport>) -> Option<(Claim, &'static str)> {
    let (n64, k64) = (n as u64, k as u64);
    if k >= 2 * (n / 2) {
        return Some((Claim::Contractible, "scale at least the diameter: full simplex"));
    }
    if let Some(dim) = antipode.filter(|a| a.is_antipode).and_then(AntipodeReport::sphere_dim) {
        return Some((Claim::Sphere { dim }, "antipode graph: cross-polytope boundary"));
    }
    if k >= 2 && n64 > 3 * k64 {
        return Some((Claim::Torus, "n > 3k"));
    }
    if k >= 2 && n64 == 3 * k64 {
        return Some((Claim::WedgeS2 { count: 6 * k64 * k64 - 1 }, "n = 3k"));
    }
    if k >= 3 && n64 + 1 == 3 * k64 {
        return Some((
            Claim::WedgeS2S3 {
                s2: 6 * k64 - 3,
                s3: 6 * k64 - 2,
            },
            "n = 3k - 1",
        ));
    }
    if (n, k) == (5, 2) {
        return Some((Claim::WedgeS2 { count: 9 }, "n = 5, k = 2"));
    }
    None
}

/// The single dimension carrying reduced homology, with its rank.
fn concentrated(profile: &BettiProfile) -> Option<(usize, u64)> {
    let reduced = profile.reduced();
    let mut nz = reduced.iter().enumerate().filter(|(_, &b)| b > 0);
    let first = nz.next()?;
    nz.next().is_none().then_some((first.0, *first.1))
}

/// Claim read off a complete profile when no regime applies.
fn profile_claim(profile: &BettiProfile) -> Claim {
    match concentrated(profile) {
        None if profile.reduced().iter().all(|&b| b == 0) => Claim::Contractible,
        None => Claim::Unknown,
        Some((dim, 1)) => Claim::Sphere { dim },
        Some((2, count)) => Claim::WedgeS2 { count },
        Some((dim, count)) => Claim::WedgeSd { dim, count },
    }
}

pub fn fingerprint(
    profile: &BettiProfile,
    antipode: Option<&AntipodeReport>,
    conn: Option<&ConnectivityCertificate>,
    n: u32,
    k: u32,
) -> Result<Fingerprint> {
    let mut notes = Vec::new();
    let (claim, basis) = match regime_claim(n, k, antipode) {
        Some((c, b)) => (c, b.to_string()),
        None if profile.is_truncated() => (Claim::Unknown, "no closed form; profile truncated".into()),
        None => (profile_claim(profile), "read off the computed profile".into()),
    };
    let expected = claim.expected_betti();
    if let (Some(e), Some(t)) = (&expected, profile.truncated_at) {
        if profile.betti.len() < e.len() {
            return Err(Error::Truncated(t));
        }
    }
    let consistent = expected.as_ref().is_none_or(|e| profile.betti_equals(e));

    let mut certified = consistent && !matches!(claim, Claim::Unknown);
    let mut require = |ok: bool, why: &str| {
        if !ok && certified {
            notes.push(format!("not certified: {why}"));
            certified = false;
        }
    };
    require(!profile.is_truncated(), "profile truncated");
    require(profile.coefficients == Coefficients::Integer, "coefficients are not integral");
    require(!profile.has_torsion(), "torsion present");
    require(
        concentrated(profile).is_some_and(|(d, _)| d >= 2),
        "reduced homology not concentrated in one dimension >= 2",
    );
    require(
        conn.is_some_and(ConnectivityCertificate::simply_connected),
        "simple connectivity not certified",
    );

    let verdict = match (consistent, certified) {
        (false, _) => Verdict::Inconsistent,
        (true, true) => Verdict::Certified,
        (true, false) => Verdict::Consistent,
    };
    Ok(Fingerprint {
        claim_label: claim.to_string(),
        claim,
        consistent,
        verdict,
        expected_betti: expected,
        evidence: Evidence {
            profile: profile.clone(),
            antipode: antipode.cloned(),
            connectivity: conn.cloned(),
            basis,
            notes,
        },
    })
}
