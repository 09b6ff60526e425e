//! g-polynomials of Eulerian posets, h-polynomials of links and local
//! h-polynomials of lattice subdivisions, and the wedge decomposition of a
//! symmetric unimodal polynomial.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::lattice_geometry::LatticePolytope;
use crate::poly::UniPoly;

/// A finite poset with a rank function, stored as comparability bitsets.
#[derive(Clone, Debug)]
pub struct GradedPoset {
    ranks: Vec<i32>,
    up: Vec<Vec<u64>>,
    down: Vec<Vec<u64>>,
}

fn has(set: &[u64], i: usize) -> bool {
    set[i / 64] >> (i % 64) & 1 == 1
}

impl GradedPoset {
    /// `le(a, b)` must be a partial order. Fails unless it is ranked by
    /// `ranks` with every cover raising the rank by exactly one.
    pub fn new<F: Fn(usize, usize) -> bool>(ranks: Vec<i32>, le: F) -> Result<Self> {
        let n = ranks.len();
        let words = n.div_ceil(64).max(1);
        let mut up = vec![vec![0u64; words]; n];
        let mut down = vec![vec![0u64; words]; n];
        for a in 0..n {
            for b in 0..n {
                if a == b || le(a, b) {
                    up[a][b / 64] |= 1 << (b % 64);
                    down[b][a / 64] |= 1 << (a % 64);
                }
            }
        }
        let p = GradedPoset { ranks, up, down };
        for a in 0..n {
            for b in 0..n {
                if a == b || !p.leq(a, b) {
                    continue;
                }
                if p.leq(b, a) {
                    return Err(Error::Internal("order relation is not antisymmetric".into()));
                }
                let gap = p.ranks[b] - p.ranks[a];
                if gap < 1 {
                    return Err(Error::Internal("rank function is not strictly monotone".into()));
                }
                if gap >= 2 {
                    let between = p.up[a]
                        .iter()
                        .zip(&p.down[b])
                        .enumerate()
                        .any(|(w, (x, y))| {
                            let mut m = x & y;
                            if a / 64 == w {
                                m &= !(1 << (a % 64));
                            }
                            if b / 64 == w {
                                m &= !(1 << (b % 64));
                            }
                            m != 0
                        });
                    if !between {
                        return Err(Error::Internal("poset is not graded".into()));
                    }
                }
            }
        }
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn rank(&self, x: usize) -> i32 {
        self.ranks[x]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        has(&self.up[a], b)
    }

    /// Elements of `[a, b]`, by index.
    pub fn interval(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&z| has(&self.up[a], z) && has(&self.down[b], z))
            .collect()
    }

    /// Elements above `a`.
    pub fn upset(&self, a: usize) -> Vec<usize> {
        (0..self.len()).filter(|&z| has(&self.up[a], z)).collect()
    }

    /// The same elements with the order reversed.
    pub fn opposite(&self) -> GradedPoset {
        let top = self.ranks.iter().copied().max().unwrap_or(0);
        GradedPoset {
            ranks: self.ranks.iter().map(|r| top - r).collect(),
            up: self.down.clone(),
            down: self.up.clone(),
        }
    }

    pub fn minimum(&self) -> Option<usize> {
        (0..self.len()).find(|&x| (0..self.len()).all(|y| self.leq(x, y)))
    }

    pub fn maximum(&self) -> Option<usize> {
        (0..self.len()).find(|&x| (0..self.len()).all(|y| self.leq(y, x)))
    }

    /// Every nontrivial interval has as many elements of even as of odd rank.
    pub fn is_eulerian(&self) -> bool {
        (0..self.len()).all(|a| {
            self.upset(a).into_iter().all(|b| {
                a == b
                    || self
                        .interval(a, b)
                        .iter()
                        .map(|&z| if self.ranks[z] % 2 == 0 { 1i64 } else { -1 })
                        .sum::<i64>()
                        == 0
            })
        })
    }
}

/// Memoised g-polynomials of the intervals of one poset.
pub struct GTable {
    poset: GradedPoset,
    memo: Mutex<HashMap<(usize, usize), UniPoly>>,
}

impl GTable {
    pub fn new(poset: GradedPoset) -> Self {
        GTable {
            poset,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn poset(&self) -> &GradedPoset {
        &self.poset
    }

    /// `g([a, b]; t)`.
    pub fn g(&self, a: usize, b: usize) -> Result<UniPoly> {
        if let Some(p) = self.memo.lock().unwrap().get(&(a, b)) {
            return Ok(p.clone());
        }
        let p = self.compute(a, b)?;
        self.memo.lock().unwrap().insert((a, b), p.clone());
        Ok(p)
    }

    fn compute(&self, a: usize, b: usize) -> Result<UniPoly> {
        let ps = &self.poset;
        if !ps.leq(a, b) {
            return Err(Error::Internal("g of an empty interval".into()));
        }
        let r = (ps.rank(b) - ps.rank(a)) as usize;
        if r == 0 {
            return Ok(UniPoly::one());
        }
        // t^r g(1/t) - g(t) = Σ_{a <= x < b} (t-1)^{ρ(x,b)} g([a,x])
        let mut s = UniPoly::zero();
        for x in ps.interval(a, b) {
            if x == b {
                continue;
            }
            let k = (ps.rank(b) - ps.rank(x)) as usize;
            s += &(&UniPoly::t_minus_one_pow(k) * &self.g(a, x)?);
        }
        let mut g = vec![0i64; r.div_ceil(2)];
        for (i, gi) in g.iter_mut().enumerate() {
            if 2 * i < r {
                *gi = -s.coeff(i);
            }
        }
        let g = UniPoly::new(g);
        let consistent = s.degree().map_or(true, |d| d <= r)
            && (0..=r).all(|i| {
                let expect = match (2 * i).cmp(&r) {
                    std::cmp::Ordering::Less => -g.coeff(i),
                    std::cmp::Ordering::Equal => 0,
                    std::cmp::Ordering::Greater => g.coeff(r - i),
                };
                s.coeff(i) == expect
            });
        if !consistent {
            return Err(Error::Internal("g recursion is inconsistent: interval is not Eulerian".into()));
        }
        Ok(g)
    }
}

/// `g` of a poset with a minimum and a maximum.
pub fn g_poly(interval: &GradedPoset) -> Result<UniPoly> {
    let (a, b) = bounds(interval)?;
    GTable::new(interval.clone()).g(a, b)
}

/// `g` of the opposite poset.
pub fn g_poly_dual(interval: &GradedPoset) -> Result<UniPoly> {
    g_poly(&interval.opposite())
}

fn bounds(p: &GradedPoset) -> Result<(usize, usize)> {
    match (p.minimum(), p.maximum()) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Error::Internal("interval needs a minimum and a maximum".into())),
    }
}

/// Combinatorics of a lattice subdivision `S` of a polytope `P`: the cell
/// poset (with ∅) and the carrier face `σ` of every cell.
pub struct Subdivision {
    base: Arc<LatticePolytope>,
    dims: Vec<i32>,
    sigma: Vec<usize>,
    cells: GTable,
    hlink_memo: Mutex<HashMap<(usize, usize), UniPoly>>,
    localh_memo: Mutex<HashMap<(usize, usize), UniPoly>>,
}

impl Subdivision {
    /// `contains(a, b)`: cell `a` is a face of cell `b`. `sigma[c]` indexes
    /// the face lattice of `base`.
    pub fn new<F: Fn(usize, usize) -> bool>(
        base: Arc<LatticePolytope>,
        dims: Vec<i32>,
        sigma: Vec<usize>,
        contains: F,
    ) -> Result<Self> {
        let ranks = dims.iter().map(|d| d + 1).collect();
        let poset = GradedPoset::new(ranks, contains)?;
        let fl = base.face_lattice();
        for a in 0..dims.len() {
            for b in poset.upset(a) {
                if !fl.leq(sigma[a], sigma[b]) {
                    return Err(Error::Internal("carrier map is not monotone".into()));
                }
            }
        }
        Ok(Subdivision {
            base,
            dims,
            sigma,
            cells: GTable::new(poset),
            hlink_memo: Mutex::new(HashMap::new()),
            localh_memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn base(&self) -> &Arc<LatticePolytope> {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn cell_dim(&self, c: usize) -> i32 {
        self.dims[c]
    }

    pub fn sigma(&self, c: usize) -> usize {
        self.sigma[c]
    }

    pub fn cell_poset(&self) -> &GradedPoset {
        self.cells.poset()
    }

    /// `g([a, b]; t)` in the cell poset.
    pub fn cell_g(&self, a: usize, b: usize) -> Result<UniPoly> {
        self.cells.g(a, b)
    }

    /// The restriction `S|_Q` to a face `Q` of the base polytope.
    pub fn view(&self, face: usize) -> SubdivisionView<'_> {
        SubdivisionView { sub: self, face }
    }
}

/// `S|_Q`: the cells of a subdivision lying in the face `Q`.
#[derive(Clone, Copy)]
pub struct SubdivisionView<'a> {
    sub: &'a Subdivision,
    face: usize,
}

impl<'a> SubdivisionView<'a> {
    pub fn subdivision(&self) -> &'a Subdivision {
        self.sub
    }

    /// Index of `Q` in the face lattice of the base polytope.
    pub fn face(&self) -> usize {
        self.face
    }

    pub fn dim(&self) -> i32 {
        self.sub.base.face_lattice().dim(self.face)
    }

    pub fn contains_cell(&self, c: usize) -> bool {
        self.sub.base.face_lattice().leq(self.sub.sigma[c], self.face)
    }

    pub fn cells(&self) -> Vec<usize> {
        (0..self.sub.len()).filter(|&c| self.contains_cell(c)).collect()
    }

    /// Cells of the view containing `c`, including `c`.
    pub fn link(&self, c: usize) -> Vec<usize> {
        self.sub
            .cell_poset()
            .upset(c)
            .into_iter()
            .filter(|&x| self.contains_cell(x))
            .collect()
    }
}

/// `h(lk_{S|Q}(F); t)`.
pub fn h_link(view: &SubdivisionView<'_>, cell: usize) -> Result<UniPoly> {
    let sub = view.sub;
    if let Some(p) = sub.hlink_memo.lock().unwrap().get(&(view.face, cell)) {
        return Ok(p.clone());
    }
    if !view.contains_cell(cell) {
        return Err(Error::Internal("cell is not in the subdivision view".into()));
    }
    let dq = view.dim();
    let mut rhs = UniPoly::zero();
    for f2 in view.link(cell) {
        let k = (dq - sub.dims[f2]) as usize;
        rhs += &(&sub.cell_g(cell, f2)? * &UniPoly::t_minus_one_pow(k));
    }
    let d = (dq - sub.dims[cell]) as usize;
    let h = rhs
        .reverse(d)
        .ok_or_else(|| Error::Internal("link h-polynomial exceeds its degree bound".into()))?;
    sub.hlink_memo.lock().unwrap().insert((view.face, cell), h.clone());
    Ok(h)
}

/// `l_Q(S|_Q, F; t)` for the face `Q` of the view.
pub fn local_h(view: &SubdivisionView<'_>, cell: usize) -> Result<UniPoly> {
    let sub = view.sub;
    if let Some(p) = sub.localh_memo.lock().unwrap().get(&(view.face, cell)) {
        return Ok(p.clone());
    }
    let fl = sub.base.face_lattice();
    let top = view.face;
    let dtop = fl.dim(top);
    let mut out = UniPoly::zero();
    for q in 0..fl.len() {
        if !fl.leq(sub.sigma[cell], q) || !fl.leq(q, top) {
            continue;
        }
        let term = &h_link(&sub.view(q), cell)? * &fl.g_dual(q, top)?;
        if (dtop - fl.dim(q)) % 2 == 0 {
            out += &term;
        } else {
            out -= &term;
        }
    }
    sub.localh_memo.lock().unwrap().insert((view.face, cell), out.clone());
    Ok(out)
}

/// Wedge coefficients of a symmetric unimodal polynomial of center
/// degree `d`: `lp = Σ_i l̃_i (t^i + ... + t^{d-i})`.
pub fn tilde_l(lp: &UniPoly, d: usize) -> Result<UniPoly> {
    if lp.is_zero() {
        return Ok(UniPoly::zero());
    }
    if !lp.is_symmetric(d) {
        return Err(Error::Internal(format!("local h-polynomial {lp} is not symmetric of degree {d}")));
    }
    let coeffs: Vec<i64> = (0..=d / 2)
        .map(|i| lp.coeff(i) - if i == 0 { 0 } else { lp.coeff(i - 1) })
        .collect();
    if coeffs.iter().any(|&c| c < 0) {
        return Err(Error::Internal(format!("local h-polynomial {lp} is not unimodal")));
    }
    Ok(UniPoly::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice_geometry::IntVec;

    fn polygon(pts: &[[i64; 2]]) -> LatticePolytope {
        let p: Vec<IntVec> = pts.iter().map(|x| x.to_vec()).collect();
        LatticePolytope::from_points(2, &p).unwrap()
    }

    fn g_whole(p: &LatticePolytope) -> UniPoly {
        let fl = p.face_lattice();
        fl.g(fl.bottom(), fl.top()).unwrap()
    }

    #[test]
    fn g_of_small_polytopes() {
        let tri = polygon(&[[0, 0], [1, 0], [0, 1]]);
        assert_eq!(g_whole(&tri), UniPoly::one());
        let sq = polygon(&[[0, 0], [1, 0], [0, 1], [1, 1]]);
        assert_eq!(g_whole(&sq), UniPoly::new(vec![1, 1]));
        let hex = polygon(&[[1, 0], [2, 0], [2, 1], [1, 2], [0, 2], [0, 1]]);
        assert_eq!(g_whole(&hex), UniPoly::new(vec![1, 3]));
        let seg = polygon(&[[0, 0], [3, 1]]);
        assert_eq!(g_whole(&seg), UniPoly::one());
        let fl = sq.face_lattice();
        assert_eq!(fl.g(2, 2).unwrap(), UniPoly::one());
        assert_eq!(g_poly(fl.poset()).unwrap(), UniPoly::new(vec![1, 1]));
        assert_eq!(g_poly_dual(fl.poset()).unwrap(), UniPoly::new(vec![1, 1]));
    }

    #[test]
    fn non_graded_poset_is_rejected() {
        // 0 < 2 with rank gap 2 and nothing in between
        let r = GradedPoset::new(vec![0, 1, 2], |a, b| a == 0 && b == 2);
        assert!(r.is_err());
    }

    #[test]
    fn split_segment() {
        // [0,2] subdivided at 1; cells ∅, {0}, {1}, {2}, [0,1], [1,2]
        let base = Arc::new(LatticePolytope::from_points(1, &[vec![0], vec![2]]).unwrap());
        let fl = base.face_lattice();
        let v0 = fl.index_of(&[0]).unwrap();
        let v2 = fl.index_of(&[1]).unwrap();
        let top = fl.top();
        let cells: Vec<Vec<i64>> = vec![vec![], vec![0], vec![1], vec![2], vec![0, 1], vec![1, 2]];
        let dims = vec![-1, 0, 0, 0, 1, 1];
        let sigma = vec![fl.bottom(), v0, top, v2, top, top];
        let contains = |a: usize, b: usize| cells[a].iter().all(|x| cells[b].contains(x));
        let sub = Subdivision::new(base.clone(), dims, sigma, contains).unwrap();
        let view = sub.view(top);
        assert_eq!(h_link(&view, 2).unwrap(), UniPoly::new(vec![1, 1]));
        assert_eq!(h_link(&view, 4).unwrap(), UniPoly::one());
        assert_eq!(local_h(&view, 2).unwrap(), UniPoly::new(vec![1, 1]));
        assert_eq!(local_h(&view, 0).unwrap(), UniPoly::new(vec![0, 1]));
        assert_eq!(local_h(&view, 1).unwrap(), UniPoly::zero());
        assert_eq!(local_h(&view, 4).unwrap(), UniPoly::one());
    }

    #[test]
    fn wedges() {
        assert_eq!(tilde_l(&UniPoly::new(vec![1, 1]), 1).unwrap(), UniPoly::one());
        assert_eq!(tilde_l(&UniPoly::new(vec![1, 3, 3, 1]), 3).unwrap(), UniPoly::new(vec![1, 2]));
        assert_eq!(tilde_l(&UniPoly::zero(), 2).unwrap(), UniPoly::zero());
        assert!(tilde_l(&UniPoly::new(vec![1, 2]), 1).is_err());
        assert!(tilde_l(&UniPoly::new(vec![2, 1, 2]), 2).is_err());
    }
}
