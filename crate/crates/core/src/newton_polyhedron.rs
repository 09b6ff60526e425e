//! The Newton polyhedron `Γ₊(f)` of a support: faces, lattice distances,
//! the admissible/extremal classification, the bad eigenvalue set `R_f`,
//! Varchenko's zeta function and eigenvalue multiplicities.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice_geometry::{dot, primitive, Halfspace, IntVec, LatticePolytope};
use crate::numbers::{Rational, RotationNumber};

/// The exponent set of a polynomial with `f(0) = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Support {
    n: usize,
    monomials: Vec<IntVec>,
}

impl Support {
    pub fn new(n: usize, monomials: Vec<IntVec>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSupport(format!("need at least 2 variables, got {n}")));
        }
        if monomials.is_empty() {
            return Err(Error::InvalidSupport("empty support".into()));
        }
        for m in &monomials {
            if m.len() != n {
                return Err(Error::InvalidSupport(format!("exponent {m:?} has length {} instead of {n}", m.len())));
            }
            if m.iter().any(|&x| x < 0) {
                return Err(Error::InvalidSupport(format!("negative exponent in {m:?}")));
            }
            if m.iter().all(|&x| x == 0) {
                return Err(Error::InvalidSupport("constant term present, but f(0) = 0 is required".into()));
            }
        }
        let mut monomials = monomials;
        monomials.sort();
        monomials.dedup();
        Ok(Support { n, monomials })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Sorted and deduplicated.
    pub fn monomials(&self) -> &[IntVec] {
        &self.monomials
    }
}

/// A compact face `F` of `Γ₊(f)`.
#[derive(Debug)]
pub struct CompactFace {
    pub polytope: Arc<LatticePolytope>,
    /// `d_F`.
    pub lattice_distance: i64,
    /// `I_F`, zero-based coordinates not identically zero on `F`.
    pub axes: Vec<usize>,
    pub extremal: bool,
    /// A positive supporting normal `u` of `F` and its value on `F`; the
    /// linear function `h_F = <u, .>/level` is 1 on `F`.
    pub normal: IntVec,
    pub level: i64,
}

impl CompactFace {
    pub fn dim(&self) -> i32 {
        self.polytope.dim()
    }

    /// `s_F = |I_F|`.
    pub fn s(&self) -> usize {
        self.axes.len()
    }

    pub fn is_admissible(&self) -> bool {
        !self.extremal
    }

    pub fn vertices(&self) -> &[IntVec] {
        self.polytope.vertices()
    }

    /// `h_F(v)`.
    pub fn h_value(&self, v: &[i64]) -> Rational {
        Rational::new(dot(&self.normal, v), self.level)
    }
}

/// A noncompact face `G ≠ Γ₊(f)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoncompactFace {
    /// Vertices of `Γ₊(f)` lying on `G`.
    pub vertices: Vec<IntVec>,
    /// Coordinate directions `e_i` in the recession cone of `G`.
    pub recession: Vec<usize>,
    /// `G ⊂ {x_i = 0}` for some `i`.
    pub in_boundary: bool,
}

/// One compact facet `Γ_{I,i}` of `Γ₊(f) ∩ R^I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaTerm {
    pub axes: Vec<usize>,
    pub distance: i64,
    pub volume: u64,
}

/// `∏_d (1 - t^d)^{e_d}` with zero exponents dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ZetaFactorization {
    pub factors: BTreeMap<i64, i64>,
}

impl fmt::Display for ZetaFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(&d, &e)| {
                let base = if d == 1 { "(1-t)".to_string() } else { format!("(1-t^{d})") };
                if e == 1 {
                    base
                } else {
                    format!("{base}^{e}")
                }
            })
            .collect();
        f.write_str(&parts.join(" * "))
    }
}

struct Gamma {
    facets: Vec<Halfspace>,
    vertices: Vec<IntVec>,
    /// (vertex coordinates, supporting normal sum, extremal)
    compact: Vec<(Vec<IntVec>, IntVec, bool)>,
    noncompact: Vec<NoncompactFace>,
}

/// Faces of `Γ₊` from the truncated polytope `P_M = Γ₊ ∩ [0, M]^n`. With
/// `M` above every support coordinate, no compact face reaches a
/// truncation hyperplane `x_i = M`, and every face of `Γ₊` meets `P_M` in
/// a face of `P_M` cut out by non-truncation facets only.
fn build_gamma(n: usize, pts: &[IntVec], m: i64) -> Result<Gamma> {
    let mut corners = Vec::with_capacity(pts.len() << n);
    for a in pts {
        for mask in 0..1u32 << n {
            corners.push(
                (0..n)
                    .map(|i| if mask >> i & 1 == 1 { m } else { a[i] })
                    .collect::<IntVec>(),
            );
        }
    }
    let pm = LatticePolytope::from_points(n, &corners)?;
    if pm.dim() != n as i32 {
        return Err(Error::Internal("truncated polyhedron is not full dimensional".into()));
    }
    let is_trunc = |h: &Halfspace| {
        h.offset == -m && h.normal.iter().filter(|&&x| x != 0).count() == 1 && h.normal.contains(&-1)
    };
    let hs = pm.halfspaces();
    let fv = pm.facet_vertices();
    let keep: Vec<usize> = (0..hs.len()).filter(|&j| !is_trunc(&hs[j])).collect();
    let fl = pm.face_lattice();
    let pv = pm.vertices();
    let mut compact_ids = Vec::new();
    let mut noncompact_ids = Vec::new();
    let mut compact = Vec::new();
    let mut noncompact = Vec::new();
    for idx in 0..fl.len() {
        let verts = fl.vertices(idx);
        if verts.is_empty() || idx == fl.top() {
            continue;
        }
        let tight: Vec<usize> = keep
            .iter()
            .copied()
            .filter(|&j| verts.iter().all(|v| fv[j].contains(v)))
            .collect();
        if tight.is_empty() {
            continue;
        }
        let closure: Vec<usize> = (0..pv.len())
            .filter(|v| tight.iter().all(|&j| fv[j].contains(v)))
            .collect();
        if closure != verts {
            continue;
        }
        let mut u = vec![0i64; n];
        for &j in &tight {
            for (x, y) in u.iter_mut().zip(&hs[j].normal) {
                *x += y;
            }
        }
        let recession: Vec<usize> = (0..n).filter(|&i| u[i] == 0).collect();
        let touches = verts.iter().any(|&v| pv[v].contains(&m));
        if recession.is_empty() == touches {
            return Err(Error::Internal("compactness tests disagree".into()));
        }
        let gamma_verts: Vec<IntVec> = verts
            .iter()
            .filter(|&&v| !pv[v].contains(&m))
            .map(|&v| pv[v].clone())
            .collect();
        if recession.is_empty() {
            compact_ids.push(verts.to_vec());
            compact.push((gamma_verts, primitive(&u), false));
        } else {
            let in_boundary = (0..n).any(|i| verts.iter().all(|&v| pv[v][i] == 0));
            noncompact_ids.push(verts.to_vec());
            noncompact.push(NoncompactFace {
                vertices: gamma_verts,
                recession,
                in_boundary,
            });
        }
    }
    for (c, ids) in compact.iter_mut().zip(&compact_ids) {
        c.2 = noncompact
            .iter()
            .zip(&noncompact_ids)
            .any(|(g, gids)| !g.in_boundary && ids.iter().all(|v| gids.contains(v)));
    }
    let mut facets: Vec<Halfspace> = keep.iter().map(|&j| hs[j].clone()).collect();
    facets.sort();
    let mut vertices: Vec<IntVec> = pv.iter().filter(|v| !v.contains(&m)).cloned().collect();
    vertices.sort();
    Ok(Gamma {
        facets,
        vertices,
        compact,
        noncompact,
    })
}

/// `Γ₊(f)` with its face data.
pub struct NewtonPolyhedron {
    support: Support,
    truncation: i64,
    facets: Vec<Halfspace>,
    vertices: Vec<IntVec>,
    compact: Vec<CompactFace>,
    noncompact: Vec<NoncompactFace>,
    convenient: bool,
    p: Arc<LatticePolytope>,
    zeta_terms: Vec<ZetaTerm>,
}

impl NewtonPolyhedron {
    pub fn build(support: &Support) -> Result<Self> {
        let m = 1 + support.monomials.iter().flatten().copied().max().unwrap_or(0);
        Self::build_with_truncation(support, m)
    }

    /// Builds with an explicit truncation constant, which must exceed every
    /// support coordinate.
    pub fn build_with_truncation(support: &Support, m: i64) -> Result<Self> {
        let n = support.n;
        if support.monomials.iter().flatten().any(|&x| x >= m) {
            return Err(Error::Internal("truncation constant too small".into()));
        }
        let g = build_gamma(n, &support.monomials, m)?;
        let mut compact: Vec<CompactFace> = g
            .compact
            .into_iter()
            .map(|(verts, normal, extremal)| {
                let polytope = Arc::new(LatticePolytope::from_points(n, &verts)?);
                let lattice_distance = polytope.lattice_distance()?;
                let axes = (0..n).filter(|&i| verts.iter().any(|v| v[i] != 0)).collect();
                let level = dot(&normal, &verts[0]);
                Ok(CompactFace {
                    polytope,
                    lattice_distance,
                    axes,
                    extremal,
                    normal,
                    level,
                })
            })
            .collect::<Result<_>>()?;
        compact.sort_by(|a, b| (a.dim(), a.vertices()).cmp(&(b.dim(), b.vertices())));
        let mut noncompact = g.noncompact;
        noncompact.sort_by(|a, b| (&a.vertices, &a.recession).cmp(&(&b.vertices, &b.recession)));
        let convenient = (0..n).all(|i| {
            support
                .monomials
                .iter()
                .any(|a| (0..n).all(|j| j == i || a[j] == 0))
        });
        let mut pts = g.vertices.clone();
        pts.push(vec![0; n]);
        let p = Arc::new(LatticePolytope::from_points(n, &pts)?);
        let zeta_terms = zeta_terms(support, m)?;
        Ok(NewtonPolyhedron {
            support: support.clone(),
            truncation: m,
            facets: g.facets,
            vertices: g.vertices,
            compact,
            noncompact,
            convenient,
            p,
            zeta_terms,
        })
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn n(&self) -> usize {
        self.support.n
    }

    pub fn truncation(&self) -> i64 {
        self.truncation
    }

    /// Facet inequalities of `Γ₊(f)`; together with `x >= 0` they cut it out.
    pub fn facets(&self) -> &[Halfspace] {
        &self.facets
    }

    pub fn vertices(&self) -> &[IntVec] {
        &self.vertices
    }

    /// Sorted by (dimension, vertex list).
    pub fn compact_faces(&self) -> &[CompactFace] {
        &self.compact
    }

    pub fn noncompact_faces(&self) -> &[NoncompactFace] {
        &self.noncompact
    }

    pub fn is_convenient(&self) -> bool {
        self.convenient
    }

    /// `P = conv(Γ_f ∪ {0})`.
    pub fn p(&self) -> &Arc<LatticePolytope> {
        &self.p
    }

    pub fn dim_p(&self) -> i32 {
        self.p.dim()
    }

    /// `x ∈ Γ₊(f)`.
    pub fn contains(&self, x: &[i64]) -> bool {
        x.iter().all(|&c| c >= 0) && self.facets.iter().all(|h| h.slack(x) >= 0)
    }

    /// Extremal flag per compact face, aligned with `compact_faces`.
    pub fn classify(&self) -> Vec<bool> {
        self.compact.iter().map(|f| f.extremal).collect()
    }

    pub fn bad_eigenvalues(&self) -> BTreeSet<RotationNumber> {
        let mut out = BTreeSet::new();
        for f in self.compact.iter().filter(|f| f.extremal) {
            for k in 0..f.lattice_distance {
                out.insert(RotationNumber::from_ratio(k, f.lattice_distance));
            }
        }
        out
    }

    pub fn zeta_terms(&self) -> &[ZetaTerm] {
        &self.zeta_terms
    }

    pub fn zeta(&self) -> ZetaFactorization {
        let mut factors = BTreeMap::new();
        for t in &self.zeta_terms {
            let sign = if t.axes.len() % 2 == 1 { 1 } else { -1 };
            *factors.entry(t.distance).or_insert(0) += sign * t.volume as i64;
        }
        factors.retain(|_, e| *e != 0);
        ZetaFactorization { factors }
    }

    /// Multiplicity of `λ` as an eigenvalue of the monodromy on
    /// `H^{n-1}`. For `λ = 1` (only possible when `R_f` is empty) the unit
    /// class of `H^0` is removed.
    pub fn multiplicity(&self, lambda: RotationNumber) -> Result<i64> {
        self.require_full_dim()?;
        if self.bad_eigenvalues().contains(&lambda) {
            return Err(Error::precondition("bad-eigenvalue", format!("{lambda} lies in R_f")));
        }
        let n = self.n();
        let mut m: i64 = self
            .zeta_terms
            .iter()
            .filter(|t| lambda.divides_order(t.distance))
            .map(|t| {
                let sign = if (n - t.axes.len()) % 2 == 0 { 1 } else { -1 };
                sign * t.volume as i64
            })
            .sum();
        if lambda.is_one() {
            m += if n % 2 == 0 { 1 } else { -1 };
        }
        Ok(m)
    }

    /// All `k/d` for distances `d` of zeta terms, minus `R_f`, sorted by
    /// (denominator, numerator).
    pub fn good_eigenvalues(&self) -> Vec<RotationNumber> {
        let bad = self.bad_eigenvalues();
        let mut out = BTreeSet::new();
        for t in &self.zeta_terms {
            for k in 0..t.distance {
                let r = RotationNumber::from_ratio(k, t.distance);
                if !bad.contains(&r) {
                    out.insert(r);
                }
            }
        }
        out.into_iter().collect()
    }

    pub(crate) fn require_full_dim(&self) -> Result<()> {
        if self.dim_p() != self.n() as i32 {
            return Err(Error::precondition(
                "dimP",
                format!("dim P = {} < n = {}", self.dim_p(), self.n()),
            ));
        }
        Ok(())
    }
}

fn zeta_terms(support: &Support, m: i64) -> Result<Vec<ZetaTerm>> {
    let n = support.n;
    let subsets: Vec<u32> = (1..1u32 << n).collect();
    let per: Vec<Vec<ZetaTerm>> = subsets
        .par_iter()
        .map(|&mask| {
            let axes: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let pts: Vec<IntVec> = support
                .monomials
                .iter()
                .filter(|a| (0..n).all(|j| mask >> j & 1 == 1 || a[j] == 0))
                .map(|a| axes.iter().map(|&i| a[i]).collect())
                .collect();
            if pts.is_empty() {
                return Ok(Vec::new());
            }
            let k = axes.len();
            let g = build_gamma(k, &pts, m)?;
            let mut out = Vec::new();
            for (verts, _, _) in &g.compact {
                let poly = LatticePolytope::from_points(k, verts)?;
                if poly.dim() == k as i32 - 1 {
                    out.push(ZetaTerm {
                        axes: axes.clone(),
                        distance: poly.lattice_distance()?,
                        volume: poly.normalized_volume(),
                    });
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut all: Vec<ZetaTerm> = per.into_iter().flatten().collect();
    all.sort_by(|a, b| (&a.axes, a.distance, a.volume).cmp(&(&b.axes, b.distance, b.volume)));
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn np(pts: &[&[i64]]) -> NewtonPolyhedron {
        let s = Support::new(pts[0].len(), pts.iter().map(|p| p.to_vec()).collect()).unwrap();
        NewtonPolyhedron::build(&s).unwrap()
    }

    #[test]
    fn example_polyhedron() {
        let g = np(&[&[7, 0], &[3, 1], &[2, 4]]);
        assert_eq!(g.vertices(), &[vec![2, 4], vec![3, 1], vec![7, 0]]);
        assert_eq!(g.compact_faces().len(), 5);
        assert!(!g.is_convenient());
        let ext: Vec<&[IntVec]> = g
            .compact_faces()
            .iter()
            .filter(|f| f.extremal)
            .map(|f| f.vertices())
            .collect();
        assert_eq!(ext, vec![&[vec![2, 4]][..]]);
        let dists: Vec<i64> = g.compact_faces().iter().map(|f| f.lattice_distance).collect();
        assert_eq!(dists, vec![2, 1, 7, 10, 7]);
        let bad: Vec<String> = g.bad_eigenvalues().iter().map(|r| r.to_string()).collect();
        assert_eq!(bad, vec!["0/1", "1/2"]);
        assert_eq!(g.zeta().factors, BTreeMap::from([(10, -1)]));
        assert_eq!(g.dim_p(), 2);
        assert_eq!(g.multiplicity(RotationNumber::from_ratio(1, 10)).unwrap(), 1);
        assert_eq!(g.multiplicity(RotationNumber::from_ratio(1, 4)).unwrap(), 0);
        assert_eq!(g.multiplicity(RotationNumber::from_ratio(3, 10)).unwrap(), 1);
        assert!(g.multiplicity(RotationNumber::from_ratio(1, 2)).is_err());
        let good = g.good_eigenvalues();
        assert_eq!(good.len(), 8 + 6);
    }

    #[test]
    fn cusp_and_smooth() {
        let c = np(&[&[2, 0], &[0, 3]]);
        assert!(c.is_convenient());
        assert_eq!(c.compact_faces().len(), 3);
        assert!(c.bad_eigenvalues().is_empty());
        assert_eq!(c.zeta().factors, BTreeMap::from([(2, 1), (3, 1), (6, -1)]));
        assert_eq!(c.multiplicity(RotationNumber::one()).unwrap(), 0);
        assert_eq!(c.multiplicity(RotationNumber::from_ratio(1, 6)).unwrap(), 1);
        let s = np(&[&[1, 0], &[0, 1]]);
        assert_eq!(s.zeta().factors, BTreeMap::from([(1, 1)]));
        assert_eq!(s.multiplicity(RotationNumber::one()).unwrap(), 0);
    }

    #[test]
    fn single_monomial() {
        let g = np(&[&[1, 1]]);
        assert_eq!(g.compact_faces().len(), 1);
        assert_eq!(g.dim_p(), 1);
        assert!(g.multiplicity(RotationNumber::from_ratio(1, 3)).is_err());
    }

    #[test]
    fn bad_supports_are_rejected() {
        assert!(Support::new(2, vec![]).is_err());
        assert!(Support::new(2, vec![vec![0, 0], vec![1, 0]]).is_err());
        assert!(Support::new(1, vec![vec![2]]).is_err());
    }
}
