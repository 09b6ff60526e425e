#![allow(dead_code)]

use milnor_core::newton_polyhedron::{NewtonPolyhedron, Support};

/// Non-convenient supports with dim P = n, plus the cusp and the smooth point.
pub const NONCONVENIENT: &[(&str, usize, &[&[i64]])] = &[
    ("exrf", 2, &[&[7, 0], &[3, 1], &[2, 4]]),
    ("x1 x2 (x1^2 + x2^2)", 2, &[&[3, 1], &[1, 3]]),
    ("x1 (x1^3 + x2^3)", 2, &[&[4, 0], &[1, 3]]),
    ("five-two-one", 2, &[&[5, 0], &[2, 2], &[1, 4]]),
    ("three steps", 2, &[&[6, 0], &[3, 2], &[1, 5]]),
    ("four steps", 2, &[&[8, 0], &[4, 1], &[2, 3], &[1, 6]]),
    ("wide", 2, &[&[12, 0], &[2, 1], &[1, 3]]),
    ("no z-axis", 3, &[&[3, 0, 0], &[0, 3, 0], &[1, 0, 3]]),
    ("no z-axis, mixed", 3, &[&[4, 0, 0], &[0, 4, 0], &[1, 1, 2]]),
    ("z divides", 3, &[&[3, 0, 1], &[0, 3, 1], &[1, 1, 2]]),
    ("two axes missing", 3, &[&[5, 0, 0], &[1, 2, 0], &[1, 0, 2], &[0, 1, 1]]),
    ("layered", 3, &[&[6, 0, 0], &[0, 4, 0], &[1, 1, 3], &[0, 2, 2]]),
];

pub const CONVENIENT: &[(&str, usize, &[&[i64]])] = &[
    ("cusp", 2, &[&[2, 0], &[0, 3]]),
    ("smooth", 2, &[&[1, 0], &[0, 1]]),
];

pub fn support(n: usize, pts: &[&[i64]]) -> Support {
    Support::new(n, pts.iter().map(|p| p.to_vec()).collect()).unwrap()
}

pub fn newton(n: usize, pts: &[&[i64]]) -> NewtonPolyhedron {
    NewtonPolyhedron::build(&support(n, pts)).unwrap()
}

pub fn all() -> impl Iterator<Item = &'static (&'static str, usize, &'static [&'static [i64]])> {
    NONCONVENIENT.iter().chain(CONVENIENT)
}

use std::sync::Arc;

use milnor_core::lattice_geometry::LatticePolytope;
use milnor_core::milnor_invariants::Milnor;
use milnor_core::poly::{LaurentPoly2, LaurentPoly3, UniPoly};
use milnor_core::subdivision_complex::WeightedComplex;
use milnor_core::weight::Weight;
use milnor_core::weighted_ehrhart::{
    f_lambda, hstar1, hstar2, hstar3, lstar1, lstar2, simplex_box_oracle, Engine,
};
use milnor_core::{Rational, RotationNumber};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return Err(format!($($arg)*));
        }
    };
}

fn lift(p: &LaurentPoly2) -> LaurentPoly3 {
    let mut out = LaurentPoly3::zero();
    for (e, &c) in p.terms() {
        out.add_term([e[0], e[1], 0], c);
    }
    out
}

fn e<T: std::fmt::Display>(err: T) -> String {
    err.to_string()
}

/// All rotation numbers `k/d` with `d` dividing one of `dens`.
pub fn rotations(dens: &[i64]) -> Vec<RotationNumber> {
    let mut out: Vec<RotationNumber> = dens
        .iter()
        .flat_map(|&d| (0..d).map(move |k| RotationNumber::from_ratio(k, d)))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Specializations, symmetries and the cell recursion for the full tower
/// of `wc` at `λ`.
pub fn check_tower(engine: &Engine, wc: &WeightedComplex, lambda: RotationNumber) -> Check {
    let p = wc.p();
    let d = p.dim();
    let top = p.face_lattice().top();
    let nu = wc.nu();
    let h1 = hstar1(engine, p, nu, lambda).map_err(e)?;
    let l1 = lstar1(engine, p, nu, lambda).map_err(e)?;
    let h2 = hstar2(engine, wc, top, lambda).map_err(e)?;
    let l2 = lstar2(engine, wc, top, lambda).map_err(e)?;
    let h3 = hstar3(engine, wc, lambda).map_err(e)?;
    let bar = lambda.conjugate();
    let l2b = lstar2(engine, wc, top, bar).map_err(e)?;
    let h3b = hstar3(engine, wc, bar).map_err(e)?;

    ensure!(h1.degree().is_none_or(|k| k as i32 <= d), "deg h* = {h1} exceeds {d}");
    ensure!(l2.set_one(1) == LaurentPoly2::from_uni(&l1, [1, 0]), "l*({lambda};u,1) = {} but l*(u) = {l1}", l2.set_one(1));
    ensure!(h2.set_one(1) == LaurentPoly2::from_uni(&h1, [1, 0]), "h*({lambda};u,1) = {} but h*(u) = {h1}", h2.set_one(1));
    ensure!(h3.set_one(2) == lift(&h2), "h*({lambda};u,v,1) = {} but h*(u,v) = {h2}", h3.set_one(2));

    let swapped = l2b.map_exponents(|[a, b]| [b, a]);
    ensure!(l2 == swapped, "l*({lambda};u,v) = {l2} but l*(conj;v,u) = {swapped}");
    let k = d + 1;
    let dual = l2.map_exponents(|[a, b]| [k - b, k - a]);
    ensure!(l2 == dual, "l*({lambda}) = {l2} is not self-dual (got {dual})");
    let swapped3 = h3b.map_exponents(|[a, b, c]| [b, a, c]);
    ensure!(h3 == swapped3, "h*({lambda};u,v,w) = {h3} but h*(conj;v,u,w) = {swapped3}");
    let dual3 = h3.map_exponents(|[a, b, c]| [c - b, c - a, c]);
    ensure!(h3 == dual3, "h*({lambda};u,v,w) = {h3} but h*(1/v,1/u,uvw) = {dual3}");

    let mut rec = LaurentPoly2::zero();
    for cell in wc.cells() {
        if cell.polytope.is_empty() || cell.sigma != top {
            continue;
        }
        let cw = WeightedComplex::trivial(cell.polytope.clone(), cell.form.clone()).map_err(e)?;
        let ct = cw.p().face_lattice().top();
        let hc = hstar2(engine, &cw, ct, lambda).map_err(e)?;
        let mut uv1 = LaurentPoly2::from_uni(&UniPoly::t_minus_one_pow((d - cell.dim()) as usize), [1, 1]);
        uv1 = &uv1 * &hc;
        rec += &uv1;
    }
    ensure!(rec == h2, "cell recursion gives {rec}, h*(u,v) = {h2}");
    Ok(())
}

/// The Box formula against the recursive tower on a simplex.
pub fn check_box(engine: &Engine, simplex: Arc<LatticePolytope>, nu: Weight, lambda: RotationNumber) -> Check {
    let (bh3, bl2) = simplex_box_oracle(&simplex, &nu, lambda).map_err(e)?;
    let wc = WeightedComplex::trivial(simplex, nu).map_err(e)?;
    let top = wc.p().face_lattice().top();
    let h3 = hstar3(engine, &wc, lambda).map_err(e)?;
    let l2 = lstar2(engine, &wc, top, lambda).map_err(e)?;
    ensure!(h3 == bh3, "{lambda}: recursive h* = {h3}, Box = {bh3}");
    ensure!(l2 == bl2, "{lambda}: recursive l* = {l2}, Box = {bl2}");
    Ok(())
}

fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || n < k {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// The counting polynomial recovered from `h*` reproduces direct counts at
/// `m = dim+1 ..= 2 dim + 2`.
pub fn check_polynomiality(engine: &Engine, p: &LatticePolytope, nu: &Weight, lambda: RotationNumber) -> Check {
    let d = p.dim() as i64;
    let h = hstar1(engine, p, nu, lambda).map_err(e)?;
    for m in d + 1..=2 * d + 2 {
        let fitted: i64 = h.coeffs().iter().enumerate().map(|(k, &c)| c * binom(m - k as i64 + d, d)).sum();
        let direct = f_lambda(engine, p, nu, lambda, m) as i64;
        ensure!(fitted == direct, "{lambda}, m = {m}: fitted {fitted}, counted {direct}");
    }
    Ok(())
}

/// A random lattice simplex of full dimension `n` with integer vertex values.
pub fn random_simplex(rng: &mut ChaCha8Rng, n: usize) -> (Arc<LatticePolytope>, Weight) {
    loop {
        let pts: Vec<Vec<i64>> = (0..=n).map(|_| (0..n).map(|_| rng.gen_range(-2..=3)).collect()).collect();
        let Ok(p) = LatticePolytope::from_points(n, &pts) else { continue };
        if p.dim() != n as i32 || p.vertices().len() != n + 1 || p.normalized_volume() > 12 {
            continue;
        }
        let values: Vec<i64> = (0..=n).map(|_| rng.gen_range(0..=3)).collect();
        // solve for the affine function through the vertex values
        let verts = p.vertices();
        let a: Vec<Vec<Rational>> = verts
            .iter()
            .map(|v| v.iter().map(|&x| Rational::from(x)).chain(std::iter::once(Rational::from(1))).collect())
            .collect();
        let b: Vec<Rational> = values.iter().map(|&x| Rational::from(x)).collect();
        let sol = solve(a, b);
        let nu = Weight::Affine { linear: sol[..n].to_vec(), constant: sol[n] };
        return (Arc::new(p), nu);
    }
}

fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Vec<Rational> {
    let k = b.len();
    for c in 0..k {
        let piv = (c..k).find(|&r| a[r][c] != Rational::from(0)).expect("nonsingular");
        a.swap(c, piv);
        b.swap(c, piv);
        for r in 0..k {
            if r != c && a[r][c] != Rational::from(0) {
                let f = a[r][c] / a[c][c];
                for j in 0..k {
                    let t = a[c][j] * f;
                    a[r][j] -= t;
                }
                let t = b[c] * f;
                b[r] -= t;
            }
        }
    }
    (0..k).map(|i| b[i] / a[i][i]).collect()
}

pub fn random_instances(seed: u64, count: usize) -> Vec<(Arc<LatticePolytope>, Weight)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|i| random_simplex(&mut rng, 2 + i % 2)).collect()
}

/// Rotation numbers that can carry weight on a simplex with affine `ν`.
pub fn simplex_rotations(p: &LatticePolytope, nu: &Weight) -> Vec<RotationNumber> {
    let mut dens = vec![p.normalized_volume() as i64];
    if let Weight::Affine { linear, constant } = nu {
        let l = linear.iter().chain(std::iter::once(constant)).fold(1i64, |acc, r| num_integer::lcm(acc, *r.denom()));
        dens.push(l * p.normalized_volume() as i64);
    }
    rotations(&dens)
}

/// Eigenvalue-level identities for one input.
pub fn check_eigenvalues(m: &Milnor) -> Check {
    let np = m.newton();
    let n = np.n() as i32;
    for l in np.good_eigenvalues() {
        let mult = np.multiplicity(l).map_err(e)?;
        ensure!(mult >= 0, "multiplicity({l}) = {mult} < 0");
        ensure!(mult == np.multiplicity(l.conjugate()).map_err(e)?, "multiplicity({l}) differs from its conjugate");
        let ep = m.e_poly(l).map_err(e)?;
        let sign = if (n - 1) % 2 == 0 { 1 } else { -1 };
        let reduced = ep.total() - i64::from(l.is_one());
        ensure!(sign * reduced == mult, "(-1)^(n-1) E_{l}(1,1) = {} but multiplicity = {mult}", sign * reduced);
        if l.is_one() {
            continue;
        }
        ensure!(ep.coeffs == ep.hodge_dual(n - 1), "E_{l} = {} is not Hodge symmetric", ep.coeffs);
        let eb = m.e_poly(l.conjugate()).map_err(e)?;
        let refl: std::collections::BTreeMap<i32, i64> =
            eb.hodge_filtration().into_iter().map(|(p, c)| (n - 1 - p, c)).collect();
        ensure!(ep.hodge_filtration() == refl, "E_{l}(u,1) is not u^(n-1) E_conj(1/u,1)");
        if np.is_convenient() {
            continue;
        }
        let via = m.e_poly_via_lstar(l).map_err(e)?;
        ensure!(via == ep, "E_{l}: face sum {} vs l* route {}", ep.coeffs, via.coeffs);
        let j = m.jordan_blocks(l).map_err(e)?;
        ensure!(j.counts.values().all(|&c| c >= 0), "negative Jordan count at {l}");
        ensure!(j.dimension() == mult, "Σ k J_k = {} but multiplicity = {mult}", j.dimension());
        let jb = m.jordan_blocks(l.conjugate()).map_err(e)?;
        ensure!(j.counts == jb.counts, "Jordan blocks of {l} and its conjugate differ");
    }
    Ok(())
}

/// `Sp^λ` from the cone counts against `t^{β-1} l*(P, ν; t)`.
pub fn check_spectrum(m: &Milnor) -> Check {
    for l in m.newton().good_eigenvalues() {
        if l.is_one() {
            continue;
        }
        let a = m.spectrum_lambda(l.theta()).map_err(e)?;
        let b = m.spectrum_via_lstar(l.theta()).map_err(e)?;
        ensure!(a == b, "Sp^{l}: cone counts {a}, l* route {b}");
        let mult = m.newton().multiplicity(l).map_err(e)?;
        ensure!(a.total() == mult, "Sp^{l} has mass {} but multiplicity is {mult}", a.total());
    }
    Ok(())
}

/// Local h-polynomials of the cones over admissible faces are symmetric
/// with a nonnegative wedge decomposition.
pub fn check_local_h(m: &Milnor) -> Check {
    let n = m.newton().n() as i32;
    for (i, f) in m.newton().compact_faces().iter().enumerate() {
        if !f.is_admissible() {
            continue;
        }
        let lp = m.local_h_of_cone(i).map_err(e)?;
        let deg = (n - 1 - f.dim()) as usize;
        ensure!(lp.is_symmetric(deg), "l_P at {:?} = {lp} is not symmetric of degree {deg}", f.vertices());
        milnor_core::poset_polynomials::tilde_l(&lp, deg).map_err(e)?;
    }
    Ok(())
}
