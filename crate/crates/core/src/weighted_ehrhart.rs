//! λ-weighted lattice point counts and the h*/l* polynomials built from
//! them in one, two and three variables, plus the Box point formula for
//! simplices.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice_geometry::linalg::{adjugate, det};
use crate::lattice_geometry::{dot, IntVec, LatticePolytope};
use crate::numbers::{frac, Rational, RotationNumber};
use crate::poly::{Laurent, LaurentPoly2, LaurentPoly3, UniPoly};
use crate::poset_polynomials::{h_link, local_h};
use crate::subdivision_complex::WeightedComplex;
use crate::weight::Weight;

type Histogram = BTreeMap<Rational, u64>;

/// Shared caches for weighted counts. Histograms of `m ν(v/m)` over
/// `m P ∩ Z^n` are keyed by vertex list, weight and `m`, so every `λ`
/// reuses one enumeration.
#[derive(Default)]
pub struct Engine {
    hist: Mutex<HashMap<(Vec<IntVec>, Weight, i64), Arc<Histogram>>>,
    enumerated: Mutex<HashMap<Vec<IntVec>, u64>>,
}

impl Engine {
    pub fn new() -> Self {
        Self::default()
    }

    /// Value histogram of `m ν(v/m)` for `v ∈ m P ∩ Z^n`.
    pub fn histogram(&self, poly: &LatticePolytope, nu: &Weight, m: i64) -> Arc<Histogram> {
        let key = (poly.vertices().to_vec(), nu.clone(), m);
        if let Some(h) = self.hist.lock().unwrap().get(&key) {
            return h.clone();
        }
        let mut h = Histogram::new();
        let mut visited = 0;
        if !poly.is_empty() {
            let lw = nu.local(poly);
            visited = poly.for_each_lattice_point(m, |c| {
                *h.entry(lw.scaled_value(c, m)).or_insert(0) += 1;
            });
        }
        let h = Arc::new(h);
        *self
            .enumerated
            .lock()
            .unwrap()
            .entry(key.0.clone())
            .or_insert(0) += visited;
        self.hist.lock().unwrap().insert(key, h.clone());
        h
    }

    /// Largest number of lattice points enumerated for a single polytope.
    pub fn max_enumerated(&self) -> u64 {
        self.enumerated.lock().unwrap().values().copied().max().unwrap_or(0)
    }
}

pub fn epsilon(lambda: RotationNumber) -> i64 {
    i64::from(lambda.is_one())
}

/// `w_λ(v)` for `v ∈ m P`.
pub fn weight(poly: &LatticePolytope, nu: &Weight, v: &[i64], m: i64, lambda: RotationNumber) -> Result<u8> {
    let inside = if m == 0 {
        v.iter().all(|&x| x == 0) && !poly.is_empty()
    } else {
        match poly.local_of_dilate(v, m) {
            Some(c) => poly.local_facets().iter().all(|h| dot(&h.normal, &c) >= m * h.offset),
            None => false,
        }
    };
    if !inside {
        return Err(Error::precondition("point-outside-mP", format!("{v:?} is not in {m}P")));
    }
    Ok(u8::from(frac(nu.scaled_value(v, m)) == lambda.theta()))
}

/// `f_λ(P, ν; m)`.
pub fn f_lambda(engine: &Engine, poly: &LatticePolytope, nu: &Weight, lambda: RotationNumber, m: i64) -> u64 {
    engine
        .histogram(poly, nu, m)
        .iter()
        .filter(|(v, _)| frac(**v) == lambda.theta())
        .map(|(_, c)| c)
        .sum()
}

fn binom(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// `h*_λ(P, ν; u)`, validated against direct counts up to `m = 2 dim P + 2`.
pub fn hstar1(engine: &Engine, poly: &LatticePolytope, nu: &Weight, lambda: RotationNumber) -> Result<UniPoly> {
    if poly.is_empty() {
        return Ok(UniPoly::constant(epsilon(lambda)));
    }
    let d = poly.dim() as usize;
    let f: Vec<i64> = (0..=(2 * d + 2) as i64)
        .map(|m| f_lambda(engine, poly, nu, lambda, m) as i64)
        .collect();
    // coefficient k of (1-u)^{d+1} Σ f(m) u^m
    let series = |k: usize| -> i64 {
        (0..=k.min(d + 1))
            .map(|j| {
                let s = binom(d + 1, j) * f[k - j];
                if j % 2 == 0 { s } else { -s }
            })
            .sum()
    };
    for k in d + 1..=2 * d + 2 {
        if series(k) != 0 {
            return Err(Error::Internal(format!(
                "weighted count of {:?} is not a polynomial of degree <= {d} (λ = {lambda})",
                poly.vertices()
            )));
        }
    }
    Ok(UniPoly::new((0..=d).map(series).collect()))
}

/// `l*_λ(P, ν; u)`.
pub fn lstar1(engine: &Engine, poly: &LatticePolytope, nu: &Weight, lambda: RotationNumber) -> Result<UniPoly> {
    if poly.is_empty() {
        return Ok(UniPoly::constant(epsilon(lambda)));
    }
    let fl = poly.face_lattice();
    let top = fl.top();
    let d = poly.dim();
    let mut out = UniPoly::zero();
    for q in 0..fl.len() {
        let h = if q == fl.bottom() {
            UniPoly::constant(epsilon(lambda))
        } else if q == top {
            hstar1(engine, poly, nu, lambda)?
        } else {
            hstar1(engine, &poly.face(q), nu, lambda)?
        };
        let term = &h * &fl.g_dual(q, top)?;
        if (d - fl.dim(q)) % 2 == 0 {
            out += &term;
        } else {
            out -= &term;
        }
    }
    Ok(out)
}

/// `v^k p(u/v)`.
fn homogenize(p: &UniPoly, k: i32) -> LaurentPoly2 {
    let mut out = LaurentPoly2::zero();
    for (i, &c) in p.coeffs().iter().enumerate() {
        out.add_term([i as i32, k - i as i32], c);
    }
    out
}

fn require_polynomial<const N: usize>(p: Laurent<N>, what: &str) -> Result<Laurent<N>> {
    if p.is_polynomial() {
        Ok(p)
    } else {
        Err(Error::Internal(format!("{what} has negative exponents: {p}")))
    }
}

/// Shared sum of the two-variable polynomials over the cells of `S|_Q`.
fn mixed_sum<F>(engine: &Engine, wc: &WeightedComplex, face: usize, lambda: RotationNumber, link: F) -> Result<LaurentPoly2>
where
    F: Fn(usize) -> Result<UniPoly>,
{
    let view = wc.restrict(face);
    let mut out = LaurentPoly2::zero();
    for c in view.cells() {
        let cell = &wc.cells()[c];
        let l = lstar1(engine, &cell.polytope, wc.nu(), lambda)?;
        if l.is_zero() {
            continue;
        }
        let h = link(c)?;
        let term = &homogenize(&l, cell.dim() + 1) * &LaurentPoly2::from_uni(&h, [1, 1]);
        out += &term;
    }
    Ok(out)
}

/// `h*_λ(Q, ν|_Q; u, v)` for a face `Q` of the complex's polytope.
pub fn hstar2(engine: &Engine, wc: &WeightedComplex, face: usize, lambda: RotationNumber) -> Result<LaurentPoly2> {
    let view = wc.restrict(face);
    let out = mixed_sum(engine, wc, face, lambda, |c| h_link(&view, c))?;
    require_polynomial(out, "h*(u,v)")
}

/// `l*_λ(Q, ν|_Q; u, v)`, with `l*(F, ν|_F; u/v)` under the sum.
pub fn lstar2(engine: &Engine, wc: &WeightedComplex, face: usize, lambda: RotationNumber) -> Result<LaurentPoly2> {
    let view = wc.restrict(face);
    let out = mixed_sum(engine, wc, face, lambda, |c| local_h(&view, c))?;
    require_polynomial(out, "l*(u,v)")
}

/// `h*_λ(P, ν; u, v, w)`.
pub fn hstar3(engine: &Engine, wc: &WeightedComplex, lambda: RotationNumber) -> Result<LaurentPoly3> {
    let fl = wc.p().face_lattice();
    let top = fl.top();
    let mut out = LaurentPoly3::zero();
    for q in 0..fl.len() {
        let l = lstar2(engine, wc, q, lambda)?;
        if l.is_zero() {
            continue;
        }
        let w = fl.dim(q) + 1;
        let mut l3 = LaurentPoly3::zero();
        for (e, &c) in l.terms() {
            l3.add_term([e[0], e[1], w], c);
        }
        let g = LaurentPoly3::from_uni(&fl.g(q, top)?, [1, 1, 2]);
        out += &(&l3 * &g);
    }
    require_polynomial(out, "h*(u,v,w)")
}

/// Box point formula for a simplex with an affine weight:
/// `(h*(u, v, w), l*(u, v))`.
pub fn simplex_box_oracle(
    simplex: &LatticePolytope,
    nu: &Weight,
    lambda: RotationNumber,
) -> Result<(LaurentPoly3, LaurentPoly2)> {
    if !simplex.is_simplex() {
        return Err(Error::precondition("not-a-simplex", format!("{:?}", simplex.vertices())));
    }
    if !matches!(nu, Weight::Affine { .. }) {
        return Err(Error::precondition("not-affine", "the Box formula needs an affine weight"));
    }
    let d = simplex.dim() as usize;
    let chart = simplex.chart().unwrap();
    let lv = simplex.local_vertices();
    // columns (c_i, 1) of the lifted generators
    let w: Vec<IntVec> = (0..=d)
        .map(|r| (0..=d).map(|i| if r < d { lv[i][r] } else { 1 }).collect())
        .collect();
    let mut det = det(&w);
    let mut adj = adjugate(&w);
    if det < 0 {
        det = -det;
        adj.iter_mut().flatten().for_each(|x| *x = -*x);
    }
    let lo: Vec<i64> = (0..d).map(|k| lv.iter().map(|v| v[k].min(0)).sum()).collect();
    let hi: Vec<i64> = (0..d).map(|k| lv.iter().map(|v| v[k].max(0)).sum()).collect();
    let mut h3 = LaurentPoly3::zero();
    let mut l2 = LaurentPoly2::zero();
    let mut y: Vec<i64> = lo.iter().copied().chain(std::iter::once(0)).collect();
    let mut visit = |y: &[i64]| {
        let s: Vec<i128> = adj
            .iter()
            .map(|row| row.iter().zip(y).map(|(&a, &b)| a * b as i128).sum())
            .collect();
        if s.iter().any(|&x| x < 0 || x >= det) {
            return;
        }
        let z = y[d];
        let support = s.iter().filter(|&&x| x > 0).count() as i32;
        let value = if z == 0 {
            Rational::zero()
        } else {
            nu.scaled_value(&chart.to_ambient_scaled(&y[..d], z), z)
        };
        if frac(value) != lambda.theta() {
            return;
        }
        let (zi, dq) = (z as i32, support - 1);
        h3.add_term([zi, dq + 1 - zi, dq + 1], 1);
        if support as usize == d + 1 {
            l2.add_term([zi, d as i32 + 1 - zi], 1);
        }
    };
    // odometer over the bounding box of the half-open parallelepiped
    loop {
        visit(&y);
        let mut k = 0;
        loop {
            if k > d {
                return Ok((h3, l2));
            }
            let (l, h) = if k < d { (lo[k], hi[k]) } else { (0, d as i64) };
            if y[k] < h {
                y[k] += 1;
                break;
            }
            y[k] = l;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn seg(a: i64, b: i64) -> Arc<LatticePolytope> {
        Arc::new(LatticePolytope::from_points(1, &[vec![a], vec![b]]).unwrap())
    }

    fn half() -> Weight {
        Weight::linear(&[1], 2)
    }

    #[test]
    fn weights_and_counts() {
        let e = Engine::new();
        let p = seg(0, 2);
        let minus = RotationNumber::from_ratio(1, 2);
        let one = RotationNumber::one();
        assert_eq!(weight(&p, &half(), &[1], 1, minus).unwrap(), 1);
        assert!(weight(&p, &half(), &[5], 2, minus).is_err());
        assert_eq!(weight(&p, &Weight::zero(1), &[3], 2, one).unwrap(), 1);
        assert_eq!(weight(&p, &Weight::zero(1), &[3], 2, minus).unwrap(), 0);
        for m in 0..6 {
            assert_eq!(f_lambda(&e, &p, &half(), minus, m), m as u64);
            assert_eq!(f_lambda(&e, &p, &half(), one, m), m as u64 + 1);
            assert_eq!(f_lambda(&e, &seg(0, 1), &Weight::zero(1), one, m), m as u64 + 1);
        }
    }

    #[test]
    fn one_variable_tower() {
        let e = Engine::new();
        let p = seg(0, 2);
        let minus = RotationNumber::from_ratio(1, 2);
        let one = RotationNumber::one();
        assert_eq!(hstar1(&e, &p, &half(), minus).unwrap(), UniPoly::monomial(1, 1));
        assert_eq!(hstar1(&e, &p, &half(), one).unwrap(), UniPoly::one());
        assert_eq!(lstar1(&e, &p, &half(), minus).unwrap(), UniPoly::monomial(1, 1));
        // the interior Box point (1,1) has weight -1, so nothing survives at λ = 1
        assert_eq!(lstar1(&e, &p, &half(), one).unwrap(), UniPoly::zero());
        assert_eq!(lstar1(&e, &seg(0, 1), &Weight::zero(1), one).unwrap(), UniPoly::zero());
        let pt = LatticePolytope::from_points(2, &[vec![3, 4]]).unwrap();
        let nu = Weight::constant(2, Rational::one());
        assert_eq!(hstar1(&e, &pt, &nu, one).unwrap(), UniPoly::one());
    }

    #[test]
    fn mixed_tower_on_a_segment() {
        let e = Engine::new();
        let wc = WeightedComplex::trivial(seg(0, 2), half()).unwrap();
        let top = wc.p().face_lattice().top();
        let minus = RotationNumber::from_ratio(1, 2);
        let uv = LaurentPoly2::monomial([1, 1], 1);
        assert_eq!(hstar2(&e, &wc, top, minus).unwrap(), uv);
        assert_eq!(lstar2(&e, &wc, top, minus).unwrap(), uv);
        assert_eq!(hstar3(&e, &wc, minus).unwrap(), LaurentPoly3::monomial([1, 1, 2], 1));
        let (h3, l2) = simplex_box_oracle(&wc.p().clone(), &half(), minus).unwrap();
        assert_eq!(l2, uv);
        assert_eq!(h3, LaurentPoly3::monomial([1, 1, 2], 1));
    }

    #[test]
    fn unimodular_box_is_trivial() {
        let tri = LatticePolytope::from_points(2, &[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        let nu = Weight::linear(&[1, 2], 3);
        for lam in [RotationNumber::one(), RotationNumber::from_ratio(1, 3)] {
            let (h3, l2) = simplex_box_oracle(&tri, &nu, lam).unwrap();
            assert!(l2.is_zero());
            assert_eq!(h3.is_zero(), !lam.is_one());
        }
    }
}
