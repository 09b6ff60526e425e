use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

use super::hull::{facets_of_points, Halfspace};
use super::linalg::{column_echelon, det, dot, int_kernel, primitive, rank, sub, Chart, IntVec};
use crate::error::{Error, Result};
use crate::numbers::Rational;
use crate::poset_polynomials::{GTable, GradedPoset};

/// A lattice polytope, possibly empty, with both descriptions.
pub struct LatticePolytope {
    ambient_dim: usize,
    /// Lexicographically sorted.
    vertices: Vec<IntVec>,
    dim: i32,
    chart: Option<Chart>,
    local_vertices: Vec<IntVec>,
    /// Facet inequalities in chart coordinates.
    local_facets: Vec<Halfspace>,
    /// The same inequalities lifted to the ambient lattice; valid on the
    /// affine hull together with `equations`.
    halfspaces: Vec<Halfspace>,
    facet_vertices: Vec<Vec<usize>>,
    lattice: OnceLock<FaceLattice>,
}

impl fmt::Debug for LatticePolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LatticePolytope")
            .field("dim", &self.dim)
            .field("vertices", &self.vertices)
            .finish()
    }
}

impl PartialEq for LatticePolytope {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.vertices == other.vertices
    }
}
impl Eq for LatticePolytope {}

/// Which vertex a pulling triangulation cones from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Apex {
    First,
    Last,
}

impl LatticePolytope {
    pub fn empty(ambient_dim: usize) -> Self {
        LatticePolytope {
            ambient_dim,
            vertices: Vec::new(),
            dim: -1,
            chart: None,
            local_vertices: Vec::new(),
            local_facets: Vec::new(),
            halfspaces: Vec::new(),
            facet_vertices: Vec::new(),
            lattice: OnceLock::new(),
        }
    }

    /// Convex hull of a finite set of lattice points of equal length.
    pub fn from_points(ambient_dim: usize, points: &[IntVec]) -> Result<Self> {
        let mut pts: Vec<IntVec> = points.to_vec();
        if pts.iter().any(|p| p.len() != ambient_dim) {
            return Err(Error::Internal("point of wrong dimension".into()));
        }
        pts.sort();
        pts.dedup();
        if pts.is_empty() {
            return Ok(Self::empty(ambient_dim));
        }
        let base = pts[0].clone();
        let dirs: Vec<IntVec> = pts.iter().skip(1).map(|p| sub(p, &base)).collect();
        let chart = Chart::new(base, &dirs);
        let d = chart.dim();
        let local: Vec<IntVec> = pts
            .iter()
            .map(|p| chart.to_local(p).expect("point off its own affine hull"))
            .collect();
        if d == 0 {
            return Ok(LatticePolytope {
                ambient_dim,
                vertices: pts,
                dim: 0,
                chart: Some(chart),
                local_vertices: local,
                local_facets: Vec::new(),
                halfspaces: Vec::new(),
                facet_vertices: Vec::new(),
                lattice: OnceLock::new(),
            });
        }
        let facets = facets_of_points(&local, d)?;
        // a point is a vertex iff its tight facet normals have full rank
        let keep: Vec<usize> = (0..pts.len())
            .filter(|&i| {
                let tight: Vec<IntVec> = facets
                    .iter()
                    .filter(|h| h.slack(&local[i]) == 0)
                    .map(|h| h.normal.clone())
                    .collect();
                rank(&tight, d) == d
            })
            .collect();
        let vertices: Vec<IntVec> = keep.iter().map(|&i| pts[i].clone()).collect();
        let local_vertices: Vec<IntVec> = keep.iter().map(|&i| local[i].clone()).collect();
        let facet_vertices: Vec<Vec<usize>> = facets
            .iter()
            .map(|h| {
                (0..local_vertices.len())
                    .filter(|&i| h.slack(&local_vertices[i]) == 0)
                    .collect()
            })
            .collect();
        let halfspaces = facets
            .iter()
            .map(|h| {
                let w = chart.lift_covector(&h.normal);
                let offset = h.offset + dot(&w, chart.base());
                Halfspace { normal: w, offset }
            })
            .collect();
        Ok(LatticePolytope {
            ambient_dim,
            vertices,
            dim: d as i32,
            chart: Some(chart),
            local_vertices,
            local_facets: facets,
            halfspaces,
            facet_vertices,
            lattice: OnceLock::new(),
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> i32 {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.dim < 0
    }

    pub fn vertices(&self) -> &[IntVec] {
        &self.vertices
    }

    pub fn chart(&self) -> Option<&Chart> {
        self.chart.as_ref()
    }

    pub fn local_vertices(&self) -> &[IntVec] {
        &self.local_vertices
    }

    pub fn local_facets(&self) -> &[Halfspace] {
        &self.local_facets
    }

    /// Facet inequalities `<normal, x> >= offset` with primitive normals
    /// in the dual of the direction lattice.
    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    /// Equations `<e, x> = c` cutting out the affine hull.
    pub fn equations(&self) -> Vec<(IntVec, i64)> {
        match &self.chart {
            None => Vec::new(),
            Some(ch) => ch
                .normals()
                .iter()
                .map(|e| (e.clone(), dot(e, ch.base())))
                .collect(),
        }
    }

    /// Vertex indices of each facet, aligned with `halfspaces`.
    pub fn facet_vertices(&self) -> &[Vec<usize>] {
        &self.facet_vertices
    }

    pub fn is_simplex(&self) -> bool {
        self.dim >= 0 && self.vertices.len() == self.dim as usize + 1
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        let Some(ch) = &self.chart else { return false };
        match ch.to_local(x) {
            None => false,
            Some(c) => self.local_facets.iter().all(|h| h.slack(&c) >= 0),
        }
    }

    pub fn contains_rational(&self, x: &[Rational]) -> bool {
        let Some(ch) = &self.chart else { return false };
        let y: Vec<Rational> = x
            .iter()
            .zip(ch.base())
            .map(|(a, &b)| a - Rational::from(b))
            .collect();
        let rdot = |w: &[i64], y: &[Rational]| -> Rational {
            w.iter().zip(y).map(|(&a, b)| b * a).sum()
        };
        if ch.normals().iter().any(|e| rdot(e, &y) != Rational::from(0)) {
            return false;
        }
        self.halfspaces.iter().all(|h| {
            rdot(&h.normal, x) >= Rational::from(h.offset)
        })
    }

    /// Chart coordinates of an ambient lattice point of `m * self`.
    pub fn local_of_dilate(&self, x: &[i64], m: i64) -> Option<IntVec> {
        let ch = self.chart.as_ref()?;
        let shifted: IntVec = x
            .iter()
            .zip(ch.base())
            .map(|(a, b)| a - (m - 1) * b)
            .collect();
        ch.to_local(&shifted)
    }

    pub fn face_lattice(&self) -> &FaceLattice {
        self.lattice.get_or_init(|| FaceLattice::build(self))
    }

    /// The polytope spanned by a face of the face lattice.
    pub fn face(&self, idx: usize) -> Arc<LatticePolytope> {
        let fl = self.face_lattice();
        fl.faces[idx]
            .polytope
            .get_or_init(|| {
                let pts: Vec<IntVec> = fl.faces[idx]
                    .vertices
                    .iter()
                    .map(|&i| self.vertices[i].clone())
                    .collect();
                Arc::new(
                    LatticePolytope::from_points(self.ambient_dim, &pts)
                        .expect("face of a polytope is a polytope"),
                )
            })
            .clone()
    }

    /// Pulling triangulation into full-dimensional simplices, as lists of
    /// vertex indices.
    pub fn triangulation(&self, apex: Apex) -> Vec<Vec<usize>> {
        if self.dim < 0 {
            return Vec::new();
        }
        let fl = self.face_lattice();
        let mut memo: HashMap<usize, Vec<Vec<usize>>> = HashMap::new();
        pull(fl, fl.top(), apex, &mut memo)
    }

    /// `dim! * volume` in the lattice of the affine hull; 1 for a point.
    pub fn normalized_volume(&self) -> u64 {
        self.normalized_volume_with(Apex::First)
    }

    pub fn normalized_volume_with(&self, apex: Apex) -> u64 {
        if self.dim < 0 {
            return 0;
        }
        self.triangulation(apex)
            .iter()
            .map(|s| self.simplex_volume(s))
            .sum()
    }

    /// Normalized volume of a full-dimensional simplex given by vertex ids.
    pub fn simplex_volume(&self, s: &[usize]) -> u64 {
        let v0 = &self.local_vertices[s[0]];
        let m: Vec<IntVec> = s[1..]
            .iter()
            .map(|&i| sub(&self.local_vertices[i], v0))
            .collect();
        u64::try_from(det(&m).unsigned_abs()).expect("volume overflow")
    }

    /// Calls `visit` with the chart coordinates of every lattice point of
    /// `m * self`. The ambient point is `chart.to_ambient_scaled(c, m)`.
    /// Returns the number of points visited.
    pub fn for_each_lattice_point<F: FnMut(&[i64])>(&self, m: i64, mut visit: F) -> u64 {
        assert!(m >= 0);
        if self.dim < 0 {
            return 0;
        }
        let d = self.dim as usize;
        if m == 0 || d == 0 {
            visit(&vec![0; d]);
            return 1;
        }
        let lo: Vec<i64> = (0..d)
            .map(|k| self.local_vertices.iter().map(|v| v[k]).min().unwrap() * m)
            .collect();
        let hi: Vec<i64> = (0..d)
            .map(|k| self.local_vertices.iter().map(|v| v[k]).max().unwrap() * m)
            .collect();
        let mut c = lo.clone();
        let mut count = 0u64;
        // odometer over coordinates 0..d-1, exact range for the last one
        loop {
            let last = d - 1;
            let mut lower = lo[last];
            let mut upper = hi[last];
            for h in &self.local_facets {
                let rest: i64 = (0..last).map(|k| h.normal[k] * c[k]).sum();
                let rhs = m * h.offset - rest;
                let a = h.normal[last];
                if a > 0 {
                    lower = lower.max(div_ceil(rhs, a));
                } else if a < 0 {
                    upper = upper.min(div_floor(rhs, a));
                } else if rhs > 0 {
                    upper = lower - 1;
                }
            }
            for x in lower..=upper {
                c[last] = x;
                visit(&c);
                count += 1;
            }
            let mut k = last;
            loop {
                if k == 0 {
                    return count;
                }
                k -= 1;
                if c[k] < hi[k] {
                    c[k] += 1;
                    break;
                }
                c[k] = lo[k];
            }
        }
    }

    /// All lattice points of `m * self` in ambient coordinates.
    pub fn lattice_points(&self, m: i64) -> Vec<IntVec> {
        if self.dim < 0 {
            return Vec::new();
        }
        let ch = self.chart.as_ref().unwrap();
        let mut out = Vec::new();
        self.for_each_lattice_point(m, |c| out.push(ch.to_ambient_scaled(c, m)));
        out.sort();
        out
    }

    /// Lattice distance of the affine hull from the origin.
    pub fn lattice_distance(&self) -> Result<i64> {
        if self.dim < 0 {
            return Err(Error::UndefinedDistance("empty polytope".into()));
        }
        let n = self.ambient_dim;
        let lin = Chart::new(vec![0; n], &self.vertices);
        if lin.dim() != self.dim as usize + 1 {
            return Err(Error::UndefinedDistance(
                "the origin lies on the affine hull".into(),
            ));
        }
        let r = lin.dim();
        let coords: Vec<IntVec> = self
            .vertices
            .iter()
            .map(|v| lin.to_local(v).unwrap())
            .collect();
        let dirs: Vec<IntVec> = coords.iter().skip(1).map(|c| sub(c, &coords[0])).collect();
        let ker = int_kernel(&dirs, r);
        debug_assert_eq!(ker.len(), 1);
        let w = primitive(&ker[0]);
        let d = dot(&w, &coords[0]);
        debug_assert_ne!(d, 0);
        Ok(d.abs())
    }
}

fn div_floor(a: i64, b: i64) -> i64 {
    a.div_euclid(b) - if b < 0 && a.rem_euclid(b) != 0 { 1 } else { 0 }
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -div_floor(-a, b)
}

fn pull(
    fl: &FaceLattice,
    face: usize,
    apex: Apex,
    memo: &mut HashMap<usize, Vec<Vec<usize>>>,
) -> Vec<Vec<usize>> {
    if let Some(t) = memo.get(&face) {
        return t.clone();
    }
    let f = &fl.faces[face];
    let out = if f.dim == 0 {
        vec![f.vertices.clone()]
    } else {
        let a = match apex {
            Apex::First => f.vertices[0],
            Apex::Last => *f.vertices.last().unwrap(),
        };
        let mut out = Vec::new();
        for g in fl.facets_of(face) {
            if fl.faces[g].vertices.contains(&a) {
                continue;
            }
            for mut s in pull(fl, g, apex, memo) {
                s.insert(0, a);
                out.push(s);
            }
        }
        out
    };
    memo.insert(face, out.clone());
    out
}

/// One face of a polytope, as a set of vertex indices.
pub struct Face {
    pub vertices: Vec<usize>,
    pub dim: i32,
    polytope: OnceLock<Arc<LatticePolytope>>,
}

/// All faces including ∅ and the polytope itself, sorted by
/// (dimension, vertex list); ranked by dimension + 1.
pub struct FaceLattice {
    faces: Vec<Face>,
    index: HashMap<Vec<usize>, usize>,
    g: GTable,
    g_dual: GTable,
}

impl FaceLattice {
    fn build(p: &LatticePolytope) -> FaceLattice {
        let nv = p.vertices.len();
        let mut sets: BTreeSet<Vec<usize>> = BTreeSet::new();
        sets.insert(Vec::new());
        if nv > 0 {
            let all: Vec<usize> = (0..nv).collect();
            let mut stack = vec![all.clone()];
            sets.insert(all);
            while let Some(s) = stack.pop() {
                for fv in &p.facet_vertices {
                    let inter: Vec<usize> = s.iter().copied().filter(|i| fv.contains(i)).collect();
                    if inter.len() < s.len() && sets.insert(inter.clone()) {
                        stack.push(inter);
                    }
                }
            }
        }
        let face_dim = |s: &Vec<usize>| -> i32 {
            if s.is_empty() {
                return -1;
            }
            let v0 = &p.local_vertices[s[0]];
            let dirs: Vec<IntVec> = s[1..].iter().map(|&i| sub(&p.local_vertices[i], v0)).collect();
            column_echelon(&dirs, p.dim.max(0) as usize).rank as i32
        };
        let mut faces: Vec<Face> = sets
            .into_iter()
            .map(|s| Face {
                dim: face_dim(&s),
                vertices: s,
                polytope: OnceLock::new(),
            })
            .collect();
        faces.sort_by(|a, b| (a.dim, &a.vertices).cmp(&(b.dim, &b.vertices)));
        let index = faces
            .iter()
            .enumerate()
            .map(|(i, f)| (f.vertices.clone(), i))
            .collect();
        let ranks: Vec<i32> = faces.iter().map(|f| f.dim + 1).collect();
        let contains = |a: usize, b: usize| faces[a].vertices.iter().all(|v| faces[b].vertices.contains(v));
        let poset = GradedPoset::new(ranks, contains).expect("face lattice is graded");
        let dual = poset.opposite();
        FaceLattice {
            faces,
            index,
            g: GTable::new(poset),
            g_dual: GTable::new(dual),
        }
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn dim(&self, i: usize) -> i32 {
        self.faces[i].dim
    }

    pub fn vertices(&self, i: usize) -> &[usize] {
        &self.faces[i].vertices
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.faces.len() - 1
    }

    pub fn index_of(&self, vertex_ids: &[usize]) -> Option<usize> {
        self.index.get(vertex_ids).copied()
    }

    pub fn poset(&self) -> &GradedPoset {
        self.g.poset()
    }

    /// Face `a` is contained in face `b`.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.g.poset().leq(a, b)
    }

    pub fn facets_of(&self, i: usize) -> Vec<usize> {
        let d = self.faces[i].dim;
        (0..self.faces.len())
            .filter(|&j| self.faces[j].dim == d - 1 && self.leq(j, i))
            .collect()
    }

    /// `g([a, b]; t)`.
    pub fn g(&self, a: usize, b: usize) -> Result<crate::poly::UniPoly> {
        self.g.g(a, b)
    }

    /// `g([a, b]*; t)`, the g-polynomial of the opposite interval.
    pub fn g_dual(&self, a: usize, b: usize) -> Result<crate::poly::UniPoly> {
        self.g_dual.g(b, a)
    }
}
