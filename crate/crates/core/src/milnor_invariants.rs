//! Milnor fiber invariants assembled from the Newton polyhedron:
//! equivariant E-polynomials, Jordan blocks and Hodge spectra.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::newton_polyhedron::NewtonPolyhedron;
use crate::numbers::{frac, Rational, RotationNumber};
use crate::poly::{LaurentPoly2, PuiseuxPoly, UniPoly};
use crate::poset_polynomials::{local_h, tilde_l};
use crate::subdivision_complex::WeightedComplex;
use crate::weight::Weight;
use crate::weighted_ehrhart::{hstar2, lstar1, lstar2, Engine};

/// `E_λ(F_{f,0}; u, v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EPolynomial {
    pub lambda: RotationNumber,
    pub coeffs: LaurentPoly2,
}

impl EPolynomial {
    /// `E(1, 1)`.
    pub fn total(&self) -> i64 {
        self.coeffs.total()
    }

    /// `(uv)^k E(1/v, 1/u)`.
    pub fn hodge_dual(&self, k: i32) -> LaurentPoly2 {
        self.coeffs.map_exponents(|[p, q]| [k - q, k - p])
    }

    /// Coefficients of `E(u, 1)`, keyed by the power of `u`.
    pub fn hodge_filtration(&self) -> BTreeMap<i32, i64> {
        let mut out = BTreeMap::new();
        for (e, &c) in self.coeffs.terms() {
            *out.entry(e[0]).or_insert(0) += c;
        }
        out.retain(|_, c| *c != 0);
        out
    }
}

/// Jordan block counts `J_{k,λ}`; only nonzero entries are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanTable {
    pub lambda: RotationNumber,
    pub counts: BTreeMap<usize, i64>,
}

impl JordanTable {
    pub fn dimension(&self) -> i64 {
        self.counts.iter().map(|(&k, &c)| k as i64 * c).sum()
    }
}

/// Everything computed for one eigenvalue.
#[derive(Clone, Debug)]
pub struct EigenvalueReport {
    pub lambda: RotationNumber,
    pub multiplicity: i64,
    pub e: EPolynomial,
    pub jordan: Option<JordanTable>,
    pub spectrum: Option<PuiseuxPoly>,
}

/// Shared state for the invariants of one Newton polyhedron.
pub struct Milnor {
    np: NewtonPolyhedron,
    wc: WeightedComplex,
    engine: Engine,
    // per compact face: trivial complexes on (F, 0_F) and (Δ_F, ν_F)
    flat: Vec<OnceLock<Result<WeightedComplex>>>,
    cone: Vec<OnceLock<Result<WeightedComplex>>>,
}

fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 { 1 } else { -1 }
}

fn one_minus_uv(k: usize) -> LaurentPoly2 {
    LaurentPoly2::from_uni(&UniPoly::one_minus_t_pow(k), [1, 1])
}

impl Milnor {
    pub fn new(np: NewtonPolyhedron) -> Result<Self> {
        let wc = WeightedComplex::build(&np)?;
        let k = np.compact_faces().len();
        Ok(Milnor {
            np,
            wc,
            engine: Engine::new(),
            flat: (0..k).map(|_| OnceLock::new()).collect(),
            cone: (0..k).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn newton(&self) -> &NewtonPolyhedron {
        &self.np
    }

    pub fn complex(&self) -> &WeightedComplex {
        &self.wc
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    fn n(&self) -> i32 {
        self.np.n() as i32
    }

    fn trivial<'a>(
        slot: &'a OnceLock<Result<WeightedComplex>>,
        make: impl FnOnce() -> Result<WeightedComplex>,
    ) -> Result<&'a WeightedComplex> {
        slot.get_or_init(make).as_ref().map_err(|e| Error::Internal(e.to_string()))
    }

    fn flat_complex(&self, i: usize) -> Result<&WeightedComplex> {
        let f = &self.np.compact_faces()[i];
        Self::trivial(&self.flat[i], || {
            WeightedComplex::trivial(f.polytope.clone(), Weight::zero(self.np.n()))
        })
    }

    fn cone_complex(&self, i: usize) -> Result<&WeightedComplex> {
        let cell = &self.wc.cells()[self.wc.cones()[i].1];
        Self::trivial(&self.cone[i], || {
            WeightedComplex::trivial(cell.polytope.clone(), cell.form.clone())
        })
    }

    fn require_good(&self, lambda: RotationNumber) -> Result<()> {
        if self.np.bad_eigenvalues().contains(&lambda) {
            return Err(Error::precondition("bad-eigenvalue", format!("{lambda} lies in R_f")));
        }
        Ok(())
    }

    /// Hypotheses shared by the `l*` route, the Jordan formula and the
    /// λ-spectrum: not convenient, `dim P = n`, `λ ∉ R_f`.
    fn require_nonconvenient(&self, lambda: RotationNumber) -> Result<()> {
        if self.np.is_convenient() {
            return Err(Error::precondition(
                "convenient",
                "this formula is only available for non-convenient polynomials",
            ));
        }
        self.np.require_full_dim()?;
        self.require_good(lambda)
    }

    /// `E_λ` from the sum over compact faces of `Γ₊(f)`.
    pub fn e_poly(&self, lambda: RotationNumber) -> Result<EPolynomial> {
        let mut sum = LaurentPoly2::zero();
        for (i, f) in self.np.compact_faces().iter().enumerate() {
            let (dim, s) = (f.dim(), f.s() as i32);
            let mut term = LaurentPoly2::zero();
            if lambda.is_one() {
                let flat = self.flat_complex(i)?;
                let top = flat.p().face_lattice().top();
                let h = hstar2(&self.engine, flat, top, lambda)?;
                // (uv - 1)(1 - uv)^{s_F - dim F - 1}, as the motivic formula gives
                term -= &(&one_minus_uv((s - dim) as usize) * &h);
            }
            let cone = self.cone_complex(i)?;
            let top = cone.p().face_lattice().top();
            let h = hstar2(&self.engine, cone, top, lambda)?;
            term += &(&one_minus_uv((s - dim - 1) as usize) * &h);
            sum += &term.scale(sign(dim as i64));
        }
        let coeffs = sum
            .div_monomial([1, 1])
            .ok_or_else(|| Error::Internal(format!("uv does not divide {sum}")))?;
        Ok(EPolynomial { lambda, coeffs })
    }

    /// `E_λ = (-1)^{n-1} l*_λ(P, ν; u, v) / uv`.
    pub fn e_poly_via_lstar(&self, lambda: RotationNumber) -> Result<EPolynomial> {
        self.require_nonconvenient(lambda)?;
        let top = self.wc.p().face_lattice().top();
        let l = lstar2(&self.engine, &self.wc, top, lambda)?;
        let coeffs = l
            .div_monomial([1, 1])
            .ok_or_else(|| Error::Internal(format!("uv does not divide l*(P) = {l}")))?
            .scale(sign(self.n() as i64 - 1));
        Ok(EPolynomial { lambda, coeffs })
    }

    /// `l_P(S_ν, Δ_F; t)` for the `i`-th compact face.
    pub fn local_h_of_cone(&self, i: usize) -> Result<UniPoly> {
        let view = self.wc.restrict(self.wc.p().face_lattice().top());
        local_h(&view, self.wc.cones()[i].1)
    }

    /// `J_{k,λ}` read off from the local h-polynomials of the cones over
    /// admissible faces.
    pub fn jordan_blocks(&self, lambda: RotationNumber) -> Result<JordanTable> {
        self.require_nonconvenient(lambda)?;
        let n = self.n();
        let mut r = UniPoly::zero();
        for (i, f) in self.np.compact_faces().iter().enumerate() {
            if !f.is_admissible() {
                continue;
            }
            let cell = &self.wc.cells()[self.wc.cones()[i].1];
            let c = lstar1(&self.engine, &cell.polytope, self.wc.nu(), lambda)?.eval(1);
            if c == 0 {
                continue;
            }
            let lt = tilde_l(&self.local_h_of_cone(i)?, (n - 1 - f.dim()) as usize)?;
            r += &lt.compose_power(2).shift((f.dim() + 2) as usize).scale(c);
        }
        let mut counts = BTreeMap::new();
        for (e, &c) in r.coeffs().iter().enumerate() {
            if c == 0 {
                continue;
            }
            let k = e as i32 - 2;
            if !(0..n).contains(&k) {
                return Err(Error::Internal(format!("Jordan residual: u^{e} has coefficient {c}")));
            }
            if c < 0 {
                return Err(Error::Internal(format!("negative Jordan count {c} for size {}", n - k)));
            }
            counts.insert((n - k) as usize, c);
        }
        let table = JordanTable { lambda, counts };
        let m = self.np.multiplicity(lambda)?;
        if table.dimension() != m {
            return Err(Error::Internal(format!(
                "Jordan blocks of {lambda} span {} dimensions, multiplicity is {m}",
                table.dimension()
            )));
        }
        Ok(table)
    }

    fn lambda_of_beta(beta: Rational) -> Result<RotationNumber> {
        if beta <= Rational::zero() || beta >= Rational::one() {
            return Err(Error::precondition("beta-range", format!("β = {beta} is not in (0, 1)")));
        }
        Ok(RotationNumber::new(beta))
    }

    /// `Sp^λ(t)` from the lattice points of the cones over admissible faces.
    pub fn spectrum_lambda(&self, beta: Rational) -> Result<PuiseuxPoly> {
        let lambda = Self::lambda_of_beta(beta)?;
        self.require_nonconvenient(lambda)?;
        let n = self.n() as i64;
        let admissible: Vec<usize> =
            (0..self.np.compact_faces().len()).filter(|&i| self.np.compact_faces()[i].is_admissible()).collect();
        let smax = admissible.iter().map(|&i| self.np.compact_faces()[i].s() as i64).max().unwrap_or(0);
        // K Δ_F is the part of Cone(F) with h_F <= K, and there ν = h_F
        let k = n + smax;
        let limit = Rational::from(k);
        let mut total = PuiseuxPoly::zero();
        for &i in &admissible {
            let f = &self.np.compact_faces()[i];
            let cell = &self.wc.cells()[self.wc.cones()[i].1];
            let hist = self.engine.histogram(&cell.polytope, self.wc.nu(), k);
            let mut p = PuiseuxPoly::zero();
            for (&level, &count) in hist.iter() {
                if frac(level) == beta {
                    p.add_term(level, count as i64);
                }
            }
            let p = p.mul_uni(&UniPoly::one_minus_t_pow(f.s())).filter(|a| *a <= limit);
            total += &p.scale(sign(n - 1 - f.dim() as i64));
        }
        // terms past n must cancel up to the truncation margin
        let n_r = Rational::from(n);
        let tail = total.filter(|a| *a > n_r);
        if !tail.is_zero() {
            return Err(Error::Internal(format!("spectrum tail does not vanish: {tail}")));
        }
        Ok(total.filter(|a| *a <= n_r))
    }

    /// `t^{β-1} l*_λ(P, ν; t)`.
    pub fn spectrum_via_lstar(&self, beta: Rational) -> Result<PuiseuxPoly> {
        let lambda = Self::lambda_of_beta(beta)?;
        self.require_nonconvenient(lambda)?;
        let l = lstar1(&self.engine, self.wc.p(), self.wc.nu(), lambda)?;
        Ok(PuiseuxPoly::from_uni_shifted(&l, beta - Rational::one()))
    }

    /// Every `λ` that can carry a nonzero `E_λ`: roots of unity of order
    /// dividing a lattice distance of a compact face, sorted.
    pub fn candidate_eigenvalues(&self) -> Vec<RotationNumber> {
        let mut out = BTreeSet::new();
        out.insert(RotationNumber::one());
        for f in self.np.compact_faces() {
            for k in 0..f.lattice_distance {
                out.insert(RotationNumber::from_ratio(k, f.lattice_distance));
            }
        }
        out.into_iter().collect()
    }

    /// `sp_{f,0}(t)` from `E_λ(u, 1)`: the `u^p` coefficient of `E_λ`
    /// contributes at `α = n - p - θ`, since `exp(-2πiα) = λ` and
    /// `⌊n - α⌋ = p` pin `α` down; the unit class at `α = n` is removed.
    pub fn full_spectrum(&self) -> Result<PuiseuxPoly> {
        let n = self.n();
        let es: Vec<EPolynomial> = self
            .candidate_eigenvalues()
            .into_par_iter()
            .map(|l| self.e_poly(l))
            .collect::<Result<_>>()?;
        let mut sp = PuiseuxPoly::zero();
        for e in &es {
            for (p, c) in e.hodge_filtration() {
                let alpha = Rational::from((n - p) as i64) - e.lambda.theta();
                sp.add_term(alpha, c);
            }
        }
        sp.add_term(Rational::from(n as i64), -1);
        let sp = sp.scale(sign(n as i64 - 1));
        let range = Rational::zero()..=Rational::from(n as i64);
        if let Some((a, _)) = sp.terms().find(|(a, _)| !range.contains(*a)) {
            return Err(Error::Internal(format!("spectral number {a} outside [0, {n}]")));
        }
        Ok(sp)
    }

    pub fn eigenvalue_report(&self, lambda: RotationNumber) -> Result<EigenvalueReport> {
        self.require_good(lambda)?;
        let multiplicity = self.np.multiplicity(lambda)?;
        let e = self.e_poly(lambda)?;
        let licensed = !self.np.is_convenient();
        let jordan = if licensed { Some(self.jordan_blocks(lambda)?) } else { None };
        let spectrum = if licensed && !lambda.is_one() {
            Some(self.spectrum_lambda(lambda.theta())?)
        } else {
            None
        };
        Ok(EigenvalueReport { lambda, multiplicity, e, jordan, spectrum })
    }

    /// Parallel map over eigenvalues.
    pub fn eigenvalue_reports(&self, lambdas: &[RotationNumber]) -> Vec<Result<EigenvalueReport>> {
        lambdas.par_iter().map(|&l| self.eigenvalue_report(l)).collect()
    }
}

/// Convenience constructor sharing one [`Milnor`] between threads.
pub fn analyze(np: NewtonPolyhedron) -> Result<Arc<Milnor>> {
    Ok(Arc::new(Milnor::new(np)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newton_polyhedron::Support;

    fn milnor(n: usize, pts: &[&[i64]]) -> Milnor {
        let s = Support::new(n, pts.iter().map(|p| p.to_vec()).collect()).unwrap();
        Milnor::new(NewtonPolyhedron::build(&s).unwrap()).unwrap()
    }

    fn exrf() -> Milnor {
        milnor(2, &[&[7, 0], &[3, 1], &[2, 4]])
    }

    #[test]
    fn exrf_eigenvalues() {
        let m = exrf();
        let tenth = RotationNumber::from_ratio(1, 10);
        let quarter = RotationNumber::from_ratio(1, 4);
        assert!(m.e_poly(quarter).unwrap().coeffs.is_zero());
        assert!(m.e_poly_via_lstar(quarter).unwrap().coeffs.is_zero());
        let e = m.e_poly(tenth).unwrap();
        assert_eq!(e.coeffs.len(), 1);
        assert_eq!(e.total(), -1);
        assert!(e.coeffs.terms().all(|(x, _)| x[0] + x[1] == 1));
        for k in [1, 3, 7, 9] {
            let l = RotationNumber::from_ratio(k, 10);
            assert_eq!(m.e_poly(l).unwrap(), m.e_poly_via_lstar(l).unwrap());
        }
        let j = m.jordan_blocks(tenth).unwrap();
        assert_eq!(j.counts, BTreeMap::from([(1, 1)]));
        assert!(m.jordan_blocks(quarter).unwrap().counts.is_empty());
        let beta = Rational::new(1, 10);
        let sp = m.spectrum_lambda(beta).unwrap();
        assert_eq!(sp.total(), 1);
        assert_eq!(sp, m.spectrum_via_lstar(beta).unwrap());
        assert!(m.spectrum_lambda(Rational::new(1, 4)).unwrap().is_zero());
        assert!(m.jordan_blocks(RotationNumber::from_ratio(1, 2)).is_err());
    }

    #[test]
    fn cusp_and_smooth_point() {
        let cusp = milnor(2, &[&[2, 0], &[0, 3]]);
        let sixth = RotationNumber::from_ratio(1, 6);
        let e = cusp.e_poly(sixth).unwrap();
        assert_eq!(e.total(), -1);
        let sp = cusp.full_spectrum().unwrap();
        let mut want = PuiseuxPoly::zero();
        want.add_term(Rational::new(5, 6), 1);
        want.add_term(Rational::new(7, 6), 1);
        assert_eq!(sp, want);
        assert!(cusp.jordan_blocks(sixth).is_err());
        let smooth = milnor(2, &[&[1, 0], &[0, 1]]);
        assert!(smooth.full_spectrum().unwrap().is_zero());
    }
}
