//! Piecewise affine weight functions `ν` on lattice polytopes.

use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::lattice_geometry::{dot, Chart, IntVec, LatticePolytope};
use crate::numbers::Rational;

/// The Newton weight `ν(x) = min(1, min_j <u_j, x>/d_j)`, where the
/// `<u_j, x> >= d_j`, `d_j > 0`, are the facets and equations of
/// `conv(Γ_f)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NewtonWeight {
    pub facets: Vec<(IntVec, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Weight {
    /// `x ↦ <linear, x> + constant`.
    Affine { linear: Vec<Rational>, constant: Rational },
    Newton(Arc<NewtonWeight>),
}

impl Weight {
    pub fn zero(n: usize) -> Self {
        Weight::Affine {
            linear: vec![Rational::zero(); n],
            constant: Rational::zero(),
        }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        Weight::Affine {
            linear: vec![Rational::zero(); n],
            constant: c,
        }
    }

    /// `x ↦ <u, x>/d`.
    pub fn linear(u: &[i64], d: i64) -> Self {
        Weight::Affine {
            linear: u.iter().map(|&x| Rational::new(x, d)).collect(),
            constant: Rational::zero(),
        }
    }

    pub fn value(&self, x: &[Rational]) -> Rational {
        match self {
            Weight::Affine { linear, constant } => {
                linear.iter().zip(x).map(|(a, b)| a * b).sum::<Rational>() + constant
            }
            Weight::Newton(nw) => nw
                .facets
                .iter()
                .map(|(u, d)| {
                    u.iter().zip(x).map(|(&a, b)| b * a).sum::<Rational>() / Rational::from(*d)
                })
                .fold(Rational::one(), |a, b| a.min(b)),
        }
    }

    pub fn value_at_lattice_point(&self, x: &[i64]) -> Rational {
        let r: Vec<Rational> = x.iter().map(|&c| Rational::from(c)).collect();
        self.value(&r)
    }

    /// `m ν(v/m)` for a lattice point `v` of `m P`; 0 when `m = 0`.
    pub fn scaled_value(&self, v: &[i64], m: i64) -> Rational {
        if m == 0 {
            return Rational::zero();
        }
        let r: Vec<Rational> = v.iter().map(|&c| Rational::new(c, m)).collect();
        self.value(&r) * Rational::from(m)
    }

    /// Compiles the weight for fast evaluation in the chart of `poly`.
    pub(crate) fn local(&self, poly: &LatticePolytope) -> LocalWeight {
        let chart = poly.chart().expect("nonempty polytope");
        match self {
            Weight::Affine { linear, constant } => LocalWeight {
                forms: vec![LocalForm::from_affine(chart, linear, *constant)],
            },
            Weight::Newton(nw) => {
                let mut forms: Vec<LocalForm> = nw
                    .facets
                    .iter()
                    .map(|(u, d)| LocalForm::from_integral(chart, u, 0, *d))
                    .collect();
                forms.push(LocalForm {
                    coeffs: vec![0; chart.dim()],
                    base: 1,
                    den: 1,
                });
                LocalWeight { forms }
            }
        }
    }
}

/// `(coeffs · c + m · base) / den`.
#[derive(Clone, Debug)]
pub(crate) struct LocalForm {
    coeffs: Vec<i64>,
    base: i64,
    den: i64,
}

impl LocalForm {
    fn from_integral(chart: &Chart, u: &[i64], constant_num: i64, den: i64) -> Self {
        LocalForm {
            coeffs: chart.pull_covector(u),
            base: dot(u, chart.base()) + constant_num,
            den,
        }
    }

    fn from_affine(chart: &Chart, linear: &[Rational], constant: Rational) -> Self {
        let den = linear
            .iter()
            .chain(std::iter::once(&constant))
            .fold(1i64, |acc, r| acc.lcm(r.denom()));
        let num: IntVec = linear.iter().map(|r| (r * den).to_integer()).collect();
        Self::from_integral(chart, &num, (constant * den).to_integer(), den)
    }

    fn eval(&self, c: &[i64], m: i64) -> (i64, i64) {
        let s: i64 = self.coeffs.iter().zip(c).map(|(a, b)| a * b).sum::<i64>() + m * self.base;
        (s, self.den)
    }
}

/// A weight pulled back to chart coordinates: the minimum of its forms.
#[derive(Clone, Debug)]
pub(crate) struct LocalWeight {
    forms: Vec<LocalForm>,
}

impl LocalWeight {
    /// `m ν(x/m)` at the point with chart coordinates `c` in `m P`.
    pub(crate) fn scaled_value(&self, c: &[i64], m: i64) -> Rational {
        let mut best = self.forms[0].eval(c, m);
        for f in &self.forms[1..] {
            let (a, b) = f.eval(c, m);
            if (a as i128) * (best.1 as i128) < (best.0 as i128) * (b as i128) {
                best = (a, b);
            }
        }
        Rational::new(best.0, best.1)
    }
}
