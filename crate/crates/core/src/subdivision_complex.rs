//! The polytope `P = conv(Γ_f ∪ {0})`, the weight `ν` that is 0 at the
//! origin, 1 on `Γ_f` and linear on every cone `Δ_F`, and the cell complex
//! `S_ν` on which it is piecewise affine.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice_geometry::{vertices_of_halfspaces, Halfspace, IntVec, LatticePolytope};
use crate::newton_polyhedron::NewtonPolyhedron;
use crate::numbers::Rational;
use crate::poset_polynomials::{Subdivision, SubdivisionView};
use crate::weight::{NewtonWeight, Weight};

/// A cell of `S_ν` with the affine form of `ν` on it.
pub struct Cell {
    pub polytope: Arc<LatticePolytope>,
    pub form: Weight,
    /// Index of `σ(cell)` in the face lattice of `P`.
    pub sigma: usize,
}

impl Cell {
    pub fn dim(&self) -> i32 {
        self.polytope.dim()
    }
}

/// A lattice polytope with a lattice subdivision and a weight that is
/// affine on each cell.
pub struct WeightedComplex {
    p: Arc<LatticePolytope>,
    nu: Weight,
    cells: Vec<Cell>,
    index: HashMap<Vec<IntVec>, usize>,
    sub: Subdivision,
    full_dim: bool,
    /// Per compact face of the Newton polyhedron: cells of `F` and `Δ_F`.
    cones: Vec<(usize, usize)>,
}

impl WeightedComplex {
    /// `S_ν` for the Newton polyhedron. Inputs with `dim P < n` are built
    /// but flagged; see [`WeightedComplex::is_full_dim`].
    pub fn build(np: &NewtonPolyhedron) -> Result<Self> {
        let n = np.n();
        let p = np.p().clone();
        // ν(x) = min(1, max{t : x ∈ t C}) with C = conv(Γ_f): the bound on t
        // from each facet or equation of C with nonzero offset
        let hull = LatticePolytope::from_points(n, np.vertices())?;
        let mut facets: Vec<(IntVec, i64)> = hull
            .halfspaces()
            .iter()
            .filter(|h| h.offset > 0)
            .map(|h| (h.normal.clone(), h.offset))
            .collect();
        for (e, c) in hull.equations() {
            if c != 0 {
                let s = c.signum();
                facets.push((e.iter().map(|x| s * x).collect(), s * c));
            }
        }
        let nw = Arc::new(NewtonWeight { facets });
        let nu = Weight::Newton(nw.clone());
        // ν = min over these affine pieces (⟨a, x⟩ + b) / den
        let mut pieces: Vec<(IntVec, i64, i64)> = nw.facets.iter().map(|(u, d)| (u.clone(), 0, *d)).collect();
        pieces.push((vec![0; n], 1, 1));
        let mut gens: Vec<Arc<LatticePolytope>> = Vec::new();
        for j in 0..pieces.len() {
            if let Some(r) = linearity_region(&p, &pieces, j)? {
                if !gens.iter().any(|g| g.vertices() == r.vertices()) {
                    gens.push(Arc::new(r));
                }
            }
        }
        let plateau = hull;
        if let Some(flat) = gens.iter().find(|g| g.vertices().iter().all(|v| nu.value_at_lattice_point(v).is_one())) {
            if plateau.dim() == p.dim() && flat.vertices() != plateau.vertices() {
                return Err(Error::Internal("the ν = 1 region differs from the hull of the Newton boundary".into()));
            }
        }
        let mut cone_keys = Vec::new();
        for f in np.compact_faces() {
            let mut pts = f.vertices().to_vec();
            pts.push(vec![0; n]);
            let delta = LatticePolytope::from_points(n, &pts)?;
            cone_keys.push((f.vertices().to_vec(), delta.vertices().to_vec()));
        }
        let form_of = |c: &LatticePolytope| -> Result<Weight> {
            let origin = vec![0; n];
            if c.is_empty() || c.vertices() == [origin] {
                return Ok(Weight::zero(n));
            }
            // ν is concave and at most each piece, so a piece matching ν at
            // the vertices matches it on the whole cell
            let exact = |(a, b, den): &(IntVec, i64, i64)| {
                c.vertices().iter().all(|v| {
                    Rational::new(crate::lattice_geometry::dot(a, v) + b, *den) == nu.value_at_lattice_point(v)
                })
            };
            let (a, b, den) = pieces
                .iter()
                .rev()
                .find(|q| exact(q))
                .ok_or_else(|| Error::Internal(format!("ν is not affine on {:?}", c.vertices())))?;
            Ok(if *b == 0 { Weight::linear(a, *den) } else { Weight::constant(n, Rational::from(*b)) })
        };
        let mut wc = Self::assemble(p, nu.clone(), gens, form_of)?;
        wc.full_dim = wc.p.dim() == n as i32;
        wc.cones = cone_keys
            .iter()
            .map(|(f, d)| match (wc.index.get(f), wc.index.get(d)) {
                (Some(&a), Some(&b)) => Ok((a, b)),
                _ => Err(Error::Internal(format!("the cone over {f:?} is not a cell of S_ν"))),
            })
            .collect::<Result<_>>()?;
        Ok(wc)
    }

    /// The trivial subdivision of `p` with a single affine weight.
    pub fn trivial(p: Arc<LatticePolytope>, weight: Weight) -> Result<Self> {
        let full = p.dim() == p.ambient_dim() as i32;
        let w = weight.clone();
        let mut wc = Self::assemble(p.clone(), weight, vec![p], move |_| Ok(w.clone()))?;
        wc.full_dim = full;
        Ok(wc)
    }

    fn assemble<F>(p: Arc<LatticePolytope>, nu: Weight, gens: Vec<Arc<LatticePolytope>>, form_of: F) -> Result<Self>
    where
        F: Fn(&LatticePolytope) -> Result<Weight>,
    {
        let n = p.ambient_dim();
        let mut by_key: HashMap<Vec<IntVec>, Arc<LatticePolytope>> = HashMap::new();
        by_key.insert(Vec::new(), Arc::new(LatticePolytope::empty(n)));
        for g in &gens {
            let fl = g.face_lattice();
            for i in 1..fl.len() {
                let f = if i == fl.top() { g.clone() } else { g.face(i) };
                by_key.entry(f.vertices().to_vec()).or_insert(f);
            }
        }
        let mut polys: Vec<Arc<LatticePolytope>> = by_key.into_values().collect();
        polys.sort_by(|a, b| (a.dim(), a.vertices()).cmp(&(b.dim(), b.vertices())));
        let mut cells = Vec::with_capacity(polys.len());
        for c in polys {
            let form = form_of(&c)?;
            check_affine(&c, &form, &nu)?;
            let sigma = carrier(&p, &c)?;
            cells.push(Cell { polytope: c, form, sigma });
        }
        // covering: full-dimensional cells fill P and every cell lies in one
        let top: Vec<usize> = (0..cells.len()).filter(|&i| cells[i].dim() == p.dim()).collect();
        let vol: u64 = top.iter().map(|&i| cells[i].polytope.normalized_volume()).sum();
        if vol != p.normalized_volume() {
            return Err(Error::Internal(format!(
                "cells cover volume {vol} of {}",
                p.normalized_volume()
            )));
        }
        let inside = |a: usize, b: usize| {
            cells[a]
                .polytope
                .vertices()
                .iter()
                .all(|v| cells[b].polytope.contains(v))
        };
        for a in 0..cells.len() {
            if !top.iter().any(|&t| inside(a, t)) {
                return Err(Error::Internal("cell outside every maximal cell".into()));
            }
        }
        let dims: Vec<i32> = cells.iter().map(|c| c.dim()).collect();
        let sigma: Vec<usize> = cells.iter().map(|c| c.sigma).collect();
        let sub = Subdivision::new(p.clone(), dims, sigma, inside)?;
        let index = cells
            .iter()
            .enumerate()
            .map(|(i, c)| (c.polytope.vertices().to_vec(), i))
            .collect();
        Ok(WeightedComplex {
            p,
            nu,
            cells,
            index,
            sub,
            full_dim: false,
            cones: Vec::new(),
        })
    }

    pub fn p(&self) -> &Arc<LatticePolytope> {
        &self.p
    }

    pub fn nu(&self) -> &Weight {
        &self.nu
    }

    pub fn is_full_dim(&self) -> bool {
        self.full_dim
    }

    /// Sorted by (dimension, vertex list); `∅` is cell 0.
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell_index(&self, vertices: &[IntVec]) -> Option<usize> {
        self.index.get(vertices).copied()
    }

    pub fn subdivision(&self) -> &Subdivision {
        &self.sub
    }

    /// Cells `(F, Δ_F)` for every compact face, aligned with
    /// `NewtonPolyhedron::compact_faces`.
    pub fn cones(&self) -> &[(usize, usize)] {
        &self.cones
    }

    /// `S_ν|_Q` for a face `Q` of `P`.
    pub fn restrict(&self, face: usize) -> SubdivisionView<'_> {
        self.sub.view(face)
    }

    pub fn nu_value(&self, x: &[Rational]) -> Result<Rational> {
        if !self.p.contains_rational(x) {
            return Err(Error::precondition("point-outside-P", format!("{x:?} is not in P")));
        }
        Ok(self.nu.value(x))
    }
}

/// The region of `P` where piece `j` attains the minimum, if it is
/// full-dimensional. Computed from inequalities in the chart of `P`.
fn linearity_region(p: &LatticePolytope, pieces: &[(IntVec, i64, i64)], j: usize) -> Result<Option<LatticePolytope>> {
    let chart = p.chart().unwrap();
    let d = chart.dim();
    let mut ineqs: Vec<Halfspace> = p.local_facets().to_vec();
    let (aj, bj, dj) = &pieces[j];
    for (k, (ak, bk, dk)) in pieces.iter().enumerate() {
        if k == j {
            continue;
        }
        // piece k minus piece j, scaled by dj dk >= 0
        let w: IntVec = ak.iter().zip(aj).map(|(x, y)| dj * x - dk * y).collect();
        let e = dj * bk - dk * bj;
        let normal = chart.pull_covector(&w);
        let offset = -e - crate::lattice_geometry::dot(&w, chart.base());
        if normal.iter().all(|&x| x == 0) {
            if offset > 0 {
                return Ok(None);
            }
            continue;
        }
        ineqs.push(Halfspace { normal, offset });
    }
    let verts = vertices_of_halfspaces(&ineqs, d)?;
    if verts.len() < d + 1 {
        return Ok(None);
    }
    let mut pts = Vec::new();
    for v in verts {
        if v.iter().any(|x| !x.is_integer()) {
            return Err(Error::Internal("a linearity region of ν has a non-lattice vertex".into()));
        }
        let c: IntVec = v.iter().map(|x| x.to_integer()).collect();
        pts.push(chart.to_ambient(&c));
    }
    let r = LatticePolytope::from_points(p.ambient_dim(), &pts)?;
    Ok((r.dim() == d as i32).then_some(r))
}

/// The affine form must agree with `ν` at the vertices and the barycenter;
/// `ν` is concave, so that forces agreement on the whole cell.
fn check_affine(c: &LatticePolytope, form: &Weight, nu: &Weight) -> Result<()> {
    if c.is_empty() {
        return Ok(());
    }
    let n = c.ambient_dim();
    let k = c.vertices().len() as i64;
    let mut bary = vec![Rational::zero(); n];
    for v in c.vertices() {
        if form.value_at_lattice_point(v) != nu.value_at_lattice_point(v) {
            return Err(Error::Internal(format!("ν is not affine on the cell {:?}", c.vertices())));
        }
        for (b, &x) in bary.iter_mut().zip(v) {
            *b += Rational::new(x, k);
        }
    }
    if form.value(&bary) != nu.value(&bary) {
        return Err(Error::Internal(format!("ν is not affine on the cell {:?}", c.vertices())));
    }
    Ok(())
}

/// `σ(c)`: the smallest face of `p` containing `c`.
fn carrier(p: &LatticePolytope, c: &LatticePolytope) -> Result<usize> {
    let fl = p.face_lattice();
    if c.is_empty() {
        return Ok(fl.bottom());
    }
    let nv = p.vertices().len();
    let mut face: Vec<usize> = (0..nv).collect();
    for (h, fv) in p.halfspaces().iter().zip(p.facet_vertices()) {
        if c.vertices().iter().all(|v| h.slack(v) == 0) {
            face.retain(|i| fv.contains(i));
        }
    }
    fl.index_of(&face)
        .ok_or_else(|| Error::Internal("carrier is not a face".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newton_polyhedron::Support;

    fn complex(pts: &[&[i64]]) -> (NewtonPolyhedron, WeightedComplex) {
        let s = Support::new(pts[0].len(), pts.iter().map(|p| p.to_vec()).collect()).unwrap();
        let np = NewtonPolyhedron::build(&s).unwrap();
        let wc = WeightedComplex::build(&np).unwrap();
        (np, wc)
    }

    #[test]
    fn example_complex() {
        let (_, wc) = complex(&[&[7, 0], &[3, 1], &[2, 4]]);
        let count = |d: i32| wc.cells().iter().filter(|c| c.dim() == d).count();
        assert_eq!((count(-1), count(0), count(1), count(2)), (1, 4, 6, 3));
        assert_eq!(wc.cells().len(), 14);
        let r = |a, b| Rational::new(a, b);
        assert_eq!(wc.nu_value(&[r(3, 2), r(1, 2)]).unwrap(), r(1, 2));
        assert_eq!(wc.nu_value(&[r(0, 1), r(0, 1)]).unwrap(), r(0, 1));
        assert_eq!(wc.nu_value(&[r(2, 1), r(4, 1)]).unwrap(), r(1, 1));
        assert!(wc.nu_value(&[r(9, 1), r(0, 1)]).is_err());
        // the edge from 0 to (7,0) is one cell: {∅, 0, (7,0), edge}
        let p = wc.p();
        let fl = p.face_lattice();
        let edge = (0..fl.len())
            .find(|&i| {
                let vs: Vec<IntVec> = fl.vertices(i).iter().map(|&k| p.vertices()[k].clone()).collect();
                vs == vec![vec![0, 0], vec![7, 0]]
            })
            .unwrap();
        let view = wc.restrict(edge);
        assert_eq!(view.cells().len(), 4);
        assert!(wc.subdivision().cell_poset().is_eulerian());
    }

    #[test]
    fn cusp_is_trivial() {
        let (_, wc) = complex(&[&[2, 0], &[0, 3]]);
        assert_eq!(wc.cells().len(), 8);
        let top = wc.cells().last().unwrap();
        assert_eq!(top.polytope.vertices(), &[vec![0, 0], vec![0, 3], vec![2, 0]]);
        assert_eq!(top.form, Weight::linear(&[3, 2], 6));
    }

    #[test]
    fn smooth_is_trivial() {
        let (_, wc) = complex(&[&[1, 0], &[0, 1]]);
        assert_eq!(wc.cells().len(), 8);
        assert_eq!(wc.cells().last().unwrap().form, Weight::linear(&[1, 1], 1));
    }
}
